use std::sync::Arc;

use super::fincat::{Arr, Obj};
use super::mappings::{AdjunctionData, FunctorData, NatTransData};
use super::ops::{opposite_category, opposite_functor};

/// Outcome of an adjoint search.
#[derive(Clone, Debug)]
pub enum AdjointResult {
    Found(AdjunctionData),
    /// No adjoint; the witness object has no universal arrow, so every
    /// candidate functor fails a hom bijection there.
    Absent { witness: Obj },
    SearchCapExceeded { cap: usize },
}

/// Searches for a right adjoint to `f` by looking for a terminal object in
/// each comma category `(f ↓ y)`. The search is complete: `Absent` means
/// some object provably has no universal arrow. `cap` bounds the number of
/// candidate pairs inspected.
pub fn find_right_adjoint(f: &FunctorData, cap: usize) -> AdjointResult {
    let a = &f.source;
    let b = &f.target;
    let mut work = 0usize;
    // Per target object: the terminal pair (u_y : Obj of A, eps_y : F u_y -> y).
    let mut universal: Vec<(Obj, Arr)> = Vec::with_capacity(b.n_objects());
    for y in b.objects() {
        let mut found = None;
        'cands: for x in a.objects() {
            for &eps in b.hom(f.ob(x), y) {
                work += 1;
                if work > cap {
                    return AdjointResult::SearchCapExceeded { cap };
                }
                // (x, eps) terminal in (f ↓ y): every (z, h : F z -> y)
                // factors as h = eps ∘ F(!u) for exactly one u : z -> x.
                let is_terminal = a.objects().all(|z| {
                    b.hom(f.ob(z), y).iter().all(|&h| {
                        a.hom(z, x)
                            .iter()
                            .filter(|&&u| b.compose(eps, f.arr(u)) == Some(h))
                            .count()
                            == 1
                    })
                });
                if is_terminal {
                    found = Some((x, eps));
                    break 'cands;
                }
            }
        }
        match found {
            Some(p) => universal.push(p),
            None => return AdjointResult::Absent { witness: y },
        }
    }
    // Assemble U on arrows: U g for g : y -> y' is the unique u with
    // eps_{y'} ∘ F u = g ∘ eps_y.
    let mut arr_map = Vec::with_capacity(b.n_arrows());
    for g in b.arrows() {
        let (uy, epsy) = universal[b.dom(g).0];
        let (uy2, epsy2) = universal[b.cod(g).0];
        let target = b.compose(g, epsy).expect("composable");
        let u = a
            .hom(uy, uy2)
            .iter()
            .copied()
            .find(|&u| b.compose(epsy2, f.arr(u)) == Some(target))
            .expect("universal arrow factorisation exists");
        arr_map.push(u);
    }
    let right = FunctorData {
        source: b.clone(),
        target: a.clone(),
        obj_map: universal.iter().map(|&(x, _)| x).collect(),
        arr_map,
    };
    // Unit at x : the unique u : x -> U F x with eps_{Fx} ∘ F u = id.
    let unit_components: Vec<Arr> = a
        .objects()
        .map(|x| {
            let (ufx, eps) = universal[f.ob(x).0];
            a.hom(x, ufx)
                .iter()
                .copied()
                .find(|&u| b.compose(eps, f.arr(u)) == Some(b.id(f.ob(x))))
                .expect("unit component exists")
        })
        .collect();
    let adj = AdjunctionData {
        left: f.clone(),
        right: right.clone(),
        unit: NatTransData {
            source_functor: FunctorData::identity(a),
            target_functor: FunctorData::compose(&right, f),
            components: unit_components,
        },
        counit: NatTransData {
            source_functor: FunctorData::compose(f, &right),
            target_functor: FunctorData::identity(b),
            components: universal.iter().map(|&(_, eps)| eps).collect(),
        },
    };
    adj.validate().expect("assembled adjunction satisfies the laws");
    AdjointResult::Found(adj)
}

/// Left adjoints by duality through the opposite categories.
pub fn find_left_adjoint(f: &FunctorData, cap: usize) -> AdjointResult {
    let fop = opposite_functor(f);
    match find_right_adjoint(&fop, cap) {
        AdjointResult::Found(adj) => {
            let l = FunctorData {
                source: Arc::new(opposite_category(&adj.right.source)),
                target: Arc::new(opposite_category(&adj.right.target)),
                obj_map: adj.right.obj_map.clone(),
                arr_map: adj.right.arr_map.clone(),
            };
            // In the duals the counit of fop ⊣ r becomes the unit of l ⊣ f.
            let unit = NatTransData {
                source_functor: FunctorData::identity(&l.source),
                target_functor: FunctorData::compose(f, &l),
                components: adj.counit.components.clone(),
            };
            let counit = NatTransData {
                source_functor: FunctorData::compose(&l, f),
                target_functor: FunctorData::identity(&f.source),
                components: adj.unit.components.clone(),
            };
            let out = AdjunctionData { left: l, right: f.clone(), unit, counit };
            out.validate().expect("dualised adjunction satisfies the laws");
            AdjointResult::Found(out)
        }
        AdjointResult::Absent { witness } => AdjointResult::Absent { witness },
        AdjointResult::SearchCapExceeded { cap } => AdjointResult::SearchCapExceeded { cap },
    }
}
