use std::sync::Arc;

use serde::Serialize;

use crate::cat::{has_binary_products, terminal_object, Arr, Obj};
use crate::fib::FibrationData;

use super::homcat::is_locally_small;
use super::util::{is_collectively_epic, is_fibre_mono};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratingVerdict {
    pub generating: bool,
    /// least pair of distinct parallel verticals that no span separates
    pub counterexample: Option<(usize, usize)>,
    /// the Thm-style characterisation, when its preconditions hold
    pub covering_characterisation: Option<bool>,
}

/// Def-level generating family: `G` over `I` detects distinct parallel
/// verticals through spans `(φ cartesian to G, ψ)`. When the fibration is
/// locally small over a base with binary products, the covering
/// characterisation is decided independently and agreement asserted.
pub fn is_generating_family(p: &Arc<FibrationData>, g: Obj) -> GeneratingVerdict {
    let total = p.total();
    let mut counterexample = None;
    'outer: for x in total.objects() {
        for y in p.fibre_objects(p.base_of(x)) {
            let verts: Vec<Arr> = total
                .hom(x, y)
                .iter()
                .copied()
                .filter(|&a| p.is_vertical(a))
                .collect();
            for &a1 in &verts {
                for &a2 in &verts {
                    if a1 >= a2 {
                        continue;
                    }
                    let separated = total.arrows_to(g).any(|phi| {
                        if !p.is_cartesian(phi) {
                            return false;
                        }
                        total.hom(total.dom(phi), x).iter().any(|&psi| {
                            total.compose(a1, psi) != total.compose(a2, psi)
                        })
                    });
                    if !separated {
                        counterexample = Some((a1.0, a2.0));
                        break 'outer;
                    }
                }
            }
        }
    }
    let generating = counterexample.is_none();
    let covering_characterisation = if has_binary_products(p.base())
        && is_locally_small(p).locally_small
    {
        // For every X there are φ_X : Z -> G cartesian and ψ_X : Z -> X
        // collectively epic.
        let covered = total.objects().all(|x| {
            total.arrows_to(g).any(|phi| {
                p.is_cartesian(phi)
                    && total
                        .hom(total.dom(phi), x)
                        .iter()
                        .any(|&psi| is_collectively_epic(p, psi))
            })
        });
        assert_eq!(generating, covered, "generating-family characterisations agree");
        Some(covered)
    } else {
        None
    };
    GeneratingVerdict { generating, counterexample, covering_characterisation }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SeparatorSearch {
    Found { separator: usize },
    Absent,
    /// the base has no terminal object, so the notion does not apply
    NoBaseTerminal,
}

/// Searches for a separator: `S` over the terminal base object such that
/// every `X` over it admits `(φ : Y -> S cartesian, m : Z -> Y vertical
/// mono, ψ : Z -> X collectively epic)`.
pub fn find_separator(p: &Arc<FibrationData>) -> SeparatorSearch {
    let total = p.total();
    let Some(one) = terminal_object(p.base()) else {
        return SeparatorSearch::NoBaseTerminal;
    };
    let fibre_one = p.fibre_objects(one);
    'cands: for &s in &fibre_one {
        for &x in &fibre_one {
            let ok = total.arrows_to(s).any(|phi| {
                if !p.is_cartesian(phi) {
                    return false;
                }
                let y = total.dom(phi);
                total.arrows_to(y).any(|m| {
                    is_fibre_mono(p, m)
                        && total
                            .hom(total.dom(m), x)
                            .iter()
                            .any(|&psi| is_collectively_epic(p, psi))
                })
            });
            if !ok {
                continue 'cands;
            }
        }
        return SeparatorSearch::Found { separator: s.0 };
    }
    SeparatorSearch::Absent
}
