use serde::Serialize;

use super::fincat::{Arr, FinCat, Obj};

/// Shapes understood by [`find_limit`]. Legs are given in the shape's
/// canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitShape {
    Terminal,
    BinaryProduct(Obj, Obj),
    /// Cospan `f : A -> C <- B : g`; a cone has legs to `A` and `B`.
    Pullback(Arr, Arr),
    /// Parallel pair `f, g : A -> B`; a cone has one leg to `A`.
    Equalizer(Arr, Arr),
}

/// A cone over a limit diagram: the apex and the legs to the diagram's
/// base objects, in the shape's canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cone {
    pub apex: Obj,
    pub legs: Vec<Arr>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LimitResult {
    Found {
        /// Every limiting cone, ascending by (apex, legs).
        all: Vec<Cone>,
        /// Least apex id, then least projection ids.
        canonical: Cone,
    },
    /// No limiting cone; carries every commuting cone that was checked.
    Absent { candidates: Vec<Cone> },
}

impl LimitResult {
    pub fn canonical(&self) -> Option<&Cone> {
        match self {
            LimitResult::Found { canonical, .. } => Some(canonical),
            LimitResult::Absent { .. } => None,
        }
    }
}

fn cone_base(c: &FinCat, shape: LimitShape) -> Vec<Obj> {
    match shape {
        LimitShape::Terminal => vec![],
        LimitShape::BinaryProduct(a, b) => vec![a, b],
        LimitShape::Pullback(f, g) => vec![c.dom(f), c.dom(g)],
        LimitShape::Equalizer(f, _) => vec![c.dom(f)],
    }
}

fn commutes(c: &FinCat, shape: LimitShape, apex: Obj, legs: &[Arr]) -> bool {
    if match shape {
        LimitShape::Terminal => true,
        LimitShape::BinaryProduct(..) => true,
        LimitShape::Pullback(f, g) => c.compose(f, legs[0]) == c.compose(g, legs[1]),
        LimitShape::Equalizer(f, g) => c.compose(f, legs[0]) == c.compose(g, legs[0]),
    } { {
        cone_base(c, shape)
            .iter()
            .zip(legs)
            .all(|(&b, &l)| c.dom(l) == apex && c.cod(l) == b)
    } } else { false }
}

fn cones(c: &FinCat, shape: LimitShape) -> Vec<Cone> {
    let base = cone_base(c, shape);
    let mut out = Vec::new();
    for apex in c.objects() {
        let mut legs_choices: Vec<Vec<Arr>> = vec![vec![]];
        for &b in &base {
            let mut next = Vec::new();
            for partial in &legs_choices {
                for &l in c.hom(apex, b) {
                    let mut p = partial.clone();
                    p.push(l);
                    next.push(p);
                }
            }
            legs_choices = next;
        }
        for legs in legs_choices {
            if commutes(c, shape, apex, &legs) {
                out.push(Cone { apex, legs });
            }
        }
    }
    out
}

/// Counts the factorisations of `cone` through `candidate`.
fn factorisations(c: &FinCat, candidate: &Cone, cone: &Cone) -> usize {
    c.hom(cone.apex, candidate.apex)
        .iter()
        .filter(|&&m| {
            candidate
                .legs
                .iter()
                .zip(&cone.legs)
                .all(|(&p, &l)| c.compose(p, m) == Some(l))
        })
        .count()
}

/// Exhaustive limit search: returns every limiting cone plus a canonical
/// choice, or `Absent` with the checked candidate list.
pub fn find_limit(c: &FinCat, shape: LimitShape) -> LimitResult {
    let all_cones = cones(c, shape);
    let mut limiting = Vec::new();
    for cand in &all_cones {
        if all_cones.iter().all(|cone| factorisations(c, cand, cone) == 1) {
            limiting.push(cand.clone());
        }
    }
    if limiting.is_empty() {
        LimitResult::Absent { candidates: all_cones }
    } else {
        limiting.sort_by(|a, b| (a.apex, &a.legs).cmp(&(b.apex, &b.legs)));
        let canonical = limiting[0].clone();
        LimitResult::Found { all: limiting, canonical }
    }
}

/// Convenience: the canonical terminal object, if any.
pub fn terminal_object(c: &FinCat) -> Option<Obj> {
    find_limit(c, LimitShape::Terminal).canonical().map(|cone| cone.apex)
}

/// Convenience: the canonical initial object, if any (terminal in the opposite).
pub fn initial_object(c: &FinCat) -> Option<Obj> {
    c.objects().find(|&x| c.objects().all(|y| c.hom(x, y).len() == 1))
}

/// Whether a commuting square `p ∘ f = q ∘ g`-style cone is a pullback of
/// the cospan `(f, g)`: the cone `(apex, to dom f, to dom g)` must be
/// limiting.
pub fn is_pullback_square(c: &FinCat, f: Arr, g: Arr, apex: Obj, to_dom_f: Arr, to_dom_g: Arr) -> bool {
    let cone = Cone { apex, legs: vec![to_dom_f, to_dom_g] };
    if !commutes(c, LimitShape::Pullback(f, g), apex, &cone.legs) {
        return false;
    }
    cones(c, LimitShape::Pullback(f, g))
        .iter()
        .all(|other| factorisations(c, &cone, other) == 1)
}

/// Whether the category has pullbacks of every cospan; returns the first
/// cospan without one.
pub fn has_all_pullbacks(c: &FinCat) -> Result<(), (Arr, Arr)> {
    for f in c.arrows() {
        for g in c.arrows() {
            if c.cod(f) == c.cod(g) {
                if let LimitResult::Absent { .. } = find_limit(c, LimitShape::Pullback(f, g)) {
                    return Err((f, g));
                }
            }
        }
    }
    Ok(())
}

/// Whether the category has a terminal object and all pullbacks.
pub fn has_finite_limits(c: &FinCat) -> bool {
    terminal_object(c).is_some() && has_all_pullbacks(c).is_ok()
}

/// Whether the category has all binary products.
pub fn has_binary_products(c: &FinCat) -> bool {
    c.objects().all(|a| {
        c.objects().all(|b| {
            matches!(find_limit(c, LimitShape::BinaryProduct(a, b)), LimitResult::Found { .. })
        })
    })
}
