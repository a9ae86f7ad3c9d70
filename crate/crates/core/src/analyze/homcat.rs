use std::sync::Arc;

use serde::Serialize;

use crate::cat::{find_limit, Arr, LimitResult, LimitShape, Obj};
use crate::fib::FibrationData;

/// A span object of `Hom_I(X, Y)`: `(φ : U -> X cartesian, f : U -> Y)`
/// with equal projections.
pub type HomSpan = (Arr, Arr);

/// Enumerates the objects of `Hom_I(X, Y)`.
pub fn hom_spans(p: &FibrationData, x: Obj, y: Obj) -> Vec<HomSpan> {
    let total = p.total();
    let mut out = Vec::new();
    for phi in total.arrows_to(x) {
        if !p.is_cartesian(phi) {
            continue;
        }
        for &f in total.hom(total.dom(phi), y) {
            if p.over(f) == p.over(phi) {
                out.push((phi, f));
            }
        }
    }
    out
}

/// A morphism `(ψ,g) -> (φ,f)` in `Hom_I(X,Y)` is `θ` with `φθ = ψ` and
/// `fθ = g`; counts the candidates.
fn hom_morphisms(p: &FibrationData, from: HomSpan, to: HomSpan) -> usize {
    let total = p.total();
    total
        .hom(total.dom(from.0), total.dom(to.0))
        .iter()
        .filter(|&&theta| {
            total.compose(to.0, theta) == Some(from.0) && total.compose(to.1, theta) == Some(from.1)
        })
        .count()
}

/// Terminal object of `Hom_I(X, Y)`, if any.
pub fn hom_terminal(p: &FibrationData, x: Obj, y: Obj) -> Option<HomSpan> {
    let spans = hom_spans(p, x, y);
    spans
        .iter()
        .copied()
        .find(|&cand| spans.iter().all(|&s| hom_morphisms(p, s, cand) == 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalSmallnessReport {
    pub locally_small: bool,
    /// per (I, X, Y): the terminal span, when found
    pub terminals: Vec<((usize, usize, usize), (usize, usize))>,
    /// least failing triple with the candidate apex domains
    pub counterexample: Option<LocalSmallnessCounterexample>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalSmallnessCounterexample {
    pub base_object: usize,
    pub x: usize,
    pub y: usize,
    /// domains of the candidate spans that admit no maximum
    pub candidates: Vec<usize>,
}

/// Def-level local smallness: every `Hom_I(X, Y)` has a terminal object.
/// When the base has binary products, the global-span construction is also
/// built and its universal property verified.
pub fn is_locally_small(p: &Arc<FibrationData>) -> LocalSmallnessReport {
    let mut terminals = Vec::new();
    let mut counterexample = None;
    'outer: for i in p.base().objects() {
        let objs = p.fibre_objects(i);
        for &x in &objs {
            for &y in &objs {
                match hom_terminal(p, x, y) {
                    Some((phi, f)) => terminals.push(((i.0, x.0, y.0), (phi.0, f.0))),
                    None => {
                        let candidates = hom_spans(p, x, y)
                            .iter()
                            .map(|&(phi, _)| p.total().dom(phi).0)
                            .collect();
                        counterexample = Some(LocalSmallnessCounterexample {
                            base_object: i.0,
                            x: x.0,
                            y: y.0,
                            candidates,
                        });
                        break 'outer;
                    }
                }
            }
        }
    }
    let locally_small = counterexample.is_none();
    if locally_small {
        verify_global_spans(p);
    }
    LocalSmallnessReport { locally_small, terminals, counterexample }
}

/// When the base has binary products, builds the global span `(φ0, f0)` for
/// every pair of total objects and verifies its universal property.
fn verify_global_spans(p: &Arc<FibrationData>) {
    let base = p.base();
    let total = p.total();
    for x in total.objects() {
        for y in total.objects() {
            let shape = LimitShape::BinaryProduct(p.base_of(x), p.base_of(y));
            let LimitResult::Found { canonical, .. } = find_limit(base, shape) else {
                return; // no binary products: the theorem does not apply
            };
            let (proj_x, proj_y) = (canonical.legs[0], canonical.legs[1]);
            let px = p.cartesian_lift(proj_x, x).expect("lift").canonical;
            let py = p.cartesian_lift(proj_y, y).expect("lift").canonical;
            let Some((phi_t, f_t)) = hom_terminal(p, total.dom(px), total.dom(py)) else {
                continue;
            };
            let phi0 = total.compose(px, phi_t).expect("composable");
            let f0 = total.compose(py, f_t).expect("composable");
            // Universal property: every (φ : Z -> X cart, f : Z -> Y)
            // factors through (φ0, f0) by a unique θ.
            for phi in total.arrows_to(x) {
                if !p.is_cartesian(phi) {
                    continue;
                }
                for &f in total.hom(total.dom(phi), y) {
                    let count = total
                        .hom(total.dom(phi), total.dom(phi0))
                        .iter()
                        .filter(|&&theta| {
                            total.compose(phi0, theta) == Some(phi)
                                && total.compose(f0, theta) == Some(f)
                        })
                        .count();
                    assert_eq!(count, 1, "global span universal property");
                }
            }
        }
    }
}
