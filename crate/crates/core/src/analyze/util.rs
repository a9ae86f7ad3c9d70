use crate::cat::{is_pullback_square, Arr, FinCat, Obj};
use crate::fib::FibrationData;

/// A pullback square in the base:
///
/// ```text
///   K --top--> L
///   |          |
///  left      right
///   v          v
///   I --bot--> J
/// ```
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PbSquare {
    pub top: Arr,
    pub left: Arr,
    pub right: Arr,
    pub bot: Arr,
}

/// Every commuting square in `b` that is a pullback.
pub fn pullback_squares(b: &FinCat) -> Vec<PbSquare> {
    let mut out = Vec::new();
    for bot in b.arrows() {
        for right in b.arrows_to(b.cod(bot)) {
            for k in b.objects() {
                for &top in b.hom(k, b.dom(right)) {
                    for &left in b.hom(k, b.dom(bot)) {
                        if b.compose(bot, left) == b.compose(right, top)
                            && is_pullback_square(b, bot, right, k, left, top)
                        {
                            out.push(PbSquare { top, left, right, bot });
                        }
                    }
                }
            }
        }
    }
    out
}

/// Whether `m` is monic inside the fibre it lives in.
pub fn is_fibre_mono(p: &FibrationData, m: Arr) -> bool {
    if !p.is_vertical(m) {
        return false;
    }
    let total = p.total();
    let x = total.dom(m);
    p.fibre_objects(p.base_of(x)).iter().all(|&w| {
        let hs: Vec<Arr> = total
            .hom(w, x)
            .iter()
            .copied()
            .filter(|&g| p.is_vertical(g))
            .collect();
        hs.iter().all(|&g| {
            hs.iter().all(|&h| g == h || total.compose(m, g) != total.compose(m, h))
        })
    })
}

/// Monos of the base into `i`, grouped by iso-over-`i`, one canonical
/// (least dom, least id) representative each.
pub fn subobject_representatives(b: &FinCat, i: Obj) -> Vec<Arr> {
    let monos: Vec<Arr> = b.arrows_to(i).filter(|&m| b.is_mono(m)).collect();
    let mut reps: Vec<Arr> = Vec::new();
    for &m in &monos {
        let covered = reps.iter().any(|&r| {
            b.hom(b.dom(m), b.dom(r)).iter().any(|&j| {
                b.is_iso(j) && b.compose(r, j) == Some(m)
            })
        });
        if !covered {
            reps.push(m);
        }
    }
    reps
}

/// Whether `f` cancels parallel pairs of vertical arrows on its target.
pub fn is_collectively_epic(p: &FibrationData, f: Arr) -> bool {
    let total = p.total();
    let y = total.cod(f);
    total.objects().all(|z| {
        let verts: Vec<Arr> = total
            .hom(y, z)
            .iter()
            .copied()
            .filter(|&a| p.is_vertical(a))
            .collect();
        verts.iter().all(|&a1| {
            verts
                .iter()
                .all(|&a2| a1 == a2 || total.compose(a1, f) != total.compose(a2, f))
        })
    })
}
