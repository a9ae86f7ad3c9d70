use std::sync::Arc;

use serde::Serialize;

use crate::cat::{Arr, Obj};
use crate::fib::FibrationData;

use super::util::is_fibre_mono;

/// An object of `Sub_I(X)`: `(φ : Y -> X cartesian, m : S -> Y vertical
/// fibre-mono)`.
pub type SubPair = (Arr, Arr);

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum WellPoweredness {
    WellPowered { terminals: Vec<((usize, usize), (usize, usize))> },
    Absent { base_object: usize, x: usize },
    /// Vertical fibre-monos are not stable under reindexing.
    PreconditionFailed { mono: usize, along: usize },
}

/// Arrows that are monic in their fibre but not in the total category, and
/// vice versa. Reported, never silently merged.
pub fn mono_divergences(p: &FibrationData) -> Vec<(usize, bool, bool)> {
    let total = p.total();
    total
        .arrows()
        .filter(|&m| p.is_vertical(m))
        .map(|m| (m.0, is_fibre_mono(p, m), total.is_mono(m)))
        .filter(|&(_, fibre, tot)| fibre != tot)
        .collect()
}

fn sub_objects(p: &FibrationData, x: Obj) -> Vec<SubPair> {
    let total = p.total();
    let mut out = Vec::new();
    for phi in total.arrows_to(x) {
        if !p.is_cartesian(phi) {
            continue;
        }
        for m in total.arrows_to(total.dom(phi)) {
            if is_fibre_mono(p, m) {
                out.push((phi, m));
            }
        }
    }
    out
}

/// Morphisms `(ψ,n) -> (φ,m)` in `Sub_I(X)`: θ with `φθ = ψ` and
/// `θ∘n = m∘θ̃` for a cartesian θ̃.
fn sub_morphisms(p: &FibrationData, from: SubPair, to: SubPair) -> usize {
    let total = p.total();
    let (psi, n) = from;
    let (phi, m) = to;
    total
        .hom(total.dom(psi), total.dom(phi))
        .iter()
        .filter(|&&theta| {
            if total.compose(phi, theta) != Some(psi) {
                return false;
            }
            let lhs = total.compose(theta, n).expect("composable");
            total
                .hom(total.dom(n), total.dom(m))
                .iter()
                .any(|&tt| p.is_cartesian(tt) && total.compose(m, tt) == Some(lhs))
        })
        .count()
}

/// Well-poweredness: every `Sub_I(X)` has a terminal object. The
/// precondition (stability of vertical fibre-monos under reindexing) is
/// checked first.
pub fn is_well_powered(p: &Arc<FibrationData>) -> WellPoweredness {
    let total = p.total();
    let base = p.base();
    // precondition
    for m in total.arrows() {
        if !is_fibre_mono(p, m) {
            continue;
        }
        let i = p.base_of(total.dom(m));
        for u in base.arrows() {
            if base.cod(u) != i {
                continue;
            }
            let lift_dom = p.cartesian_lift(u, total.dom(m)).expect("fibration").canonical;
            let lift_cod = p.cartesian_lift(u, total.cod(m)).expect("fibration").canonical;
            let theta = total.compose(m, lift_dom).expect("composable");
            let um = p
                .vertical_factor_through(lift_cod, theta)
                .expect("vertical factor through a hypercartesian lift");
            if !is_fibre_mono(p, um) {
                return WellPoweredness::PreconditionFailed { mono: m.0, along: u.0 };
            }
        }
    }
    let mut terminals = Vec::new();
    for i in base.objects() {
        for x in p.fibre_objects(i) {
            let subs = sub_objects(p, x);
            let term = subs
                .iter()
                .copied()
                .find(|&cand| subs.iter().all(|&s| sub_morphisms(p, s, cand) == 1));
            match term {
                Some((phi, m)) => terminals.push(((i.0, x.0), (phi.0, m.0))),
                None => return WellPoweredness::Absent { base_object: i.0, x: x.0 },
            }
        }
    }
    WellPoweredness::WellPowered { terminals }
}
