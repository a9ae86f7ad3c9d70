use std::sync::Arc;

use serde::Serialize;

use crate::cat::{
    find_limit, has_all_pullbacks, has_finite_limits, is_pullback_square, terminal_object, Arr,
    LimitResult, LimitShape,
};
use crate::fib::{fibre, FibrationData};

use super::sums::{has_internal_sums, has_small_global_sections, sums_profile, GlobalSections};

/// Whether every fibre has pullbacks, stable under reindexing.
pub fn fibred_pullbacks(p: &Arc<FibrationData>) -> bool {
    let base = p.base();
    for i in base.objects() {
        let f = fibre(p, i);
        if has_all_pullbacks(&f.cat).is_err() {
            return false;
        }
        // stability: the reindexed image of a fibre pullback square is a
        // fibre pullback square.
        for u in base.arrows() {
            if base.cod(u) != i {
                continue;
            }
            let g = fibre(p, base.dom(u));
            for a1 in f.cat.arrows() {
                for a2 in f.cat.arrows() {
                    if f.cat.cod(a1) != f.cat.cod(a2) {
                        continue;
                    }
                    let LimitResult::Found { canonical, .. } =
                        find_limit(&f.cat, LimitShape::Pullback(a1, a2))
                    else {
                        return false;
                    };
                    let r = |local: Arr| -> Arr {
                        let t = f.arrs[local.0];
                        let reindexed = super::definable::reindex_vertical(p, u, t);
                        g.arr_index(reindexed).expect("reindexed vertical in fibre")
                    };
                    let apex_lift = {
                        let t = f.objs[canonical.apex.0];
                        let lift = p.cartesian_lift(u, t).expect("fibration").canonical;
                        g.obj_index(p.total().dom(lift)).expect("reindexed object")
                    };
                    if !is_pullback_square(
                        &g.cat,
                        r(a1),
                        r(a2),
                        apex_lift,
                        r(canonical.legs[0]),
                        r(canonical.legs[1]),
                    ) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Whether every fibre has a terminal object, stable under reindexing.
pub fn fibred_terminals(p: &Arc<FibrationData>) -> bool {
    super::sums::fibrewise_terminals(p).is_ok()
}

pub fn fibred_finite_limits(p: &Arc<FibrationData>) -> bool {
    fibred_pullbacks(p) && fibred_terminals(p)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteLimitProfile {
    pub fibred_pullbacks: bool,
    pub fibred_terminals: bool,
    pub fibred_finite_limits: bool,
    /// total category has pullbacks and the projection preserves them
    pub total_pullbacks_preserved: bool,
    /// total has a terminal over a base terminal (when the base has one)
    pub total_terminal: Option<bool>,
    /// total has finite limits preserved (when the base has them)
    pub total_finite_limits: Option<bool>,
}

/// Decides the fibrewise definitions and the total-category
/// characterisations independently, asserting the agreements.
pub fn finite_limit_profile(p: &Arc<FibrationData>) -> FiniteLimitProfile {
    let total = p.total().clone();
    let base = p.base().clone();
    let fp = fibred_pullbacks(p);
    let ft = fibred_terminals(p);

    // total has pullbacks and P preserves them
    let mut tpp = true;
    'tp: for f in total.arrows() {
        for g in total.arrows() {
            if total.cod(f) != total.cod(g) {
                continue;
            }
            match find_limit(&total, LimitShape::Pullback(f, g)) {
                LimitResult::Found { canonical, .. } => {
                    let ok = is_pullback_square(
                        &base,
                        p.over(f),
                        p.over(g),
                        p.base_of(canonical.apex),
                        p.over(canonical.legs[0]),
                        p.over(canonical.legs[1]),
                    );
                    if !ok {
                        tpp = false;
                        break 'tp;
                    }
                }
                LimitResult::Absent { .. } => {
                    tpp = false;
                    break 'tp;
                }
            }
        }
    }
    let total_terminal = terminal_object(&base).map(|_| {
        terminal_object(&total)
            .map(|t| base.objects().all(|j| base.hom(j, p.base_of(t)).len() == 1))
            .unwrap_or(false)
    });
    let total_finite_limits = if has_finite_limits(&base) {
        Some(tpp && total_terminal == Some(true))
    } else {
        None
    };

    if p.is_fibration() && has_all_pullbacks(&base).is_ok() {
        assert_eq!(fp, tpp, "fibred pullbacks iff the total has preserved pullbacks");
        if let Some(tt) = total_terminal {
            assert_eq!(ft, tt, "fibred terminals iff a terminal over the base terminal");
        }
        if let Some(tfl) = total_finite_limits {
            assert_eq!(fp && ft, tfl, "fibred finite limits iff preserved finite limits");
        }
        flf_sweeps(p, fp);
    }
    FiniteLimitProfile {
        fibred_pullbacks: fp,
        fibred_terminals: ft,
        fibred_finite_limits: fp && ft,
        total_pullbacks_preserved: tpp,
        total_terminal,
        total_finite_limits,
    }
}

/// The auxiliary square facts used by the total-category characterisation,
/// swept as internal consistency checks.
fn flf_sweeps(p: &Arc<FibrationData>, fibred_pullbacks: bool) {
    let total = p.total().clone();
    let base = p.base().clone();
    // cart/vert squares are pullbacks
    for phi1 in total.arrows() {
        if !p.is_cartesian(phi1) {
            continue;
        }
        for phi2 in total.arrows() {
            if !p.is_cartesian(phi2) || p.over(phi1) != p.over(phi2) {
                continue;
            }
            for &beta in total.hom(total.dom(phi1), total.dom(phi2)) {
                if !p.is_vertical(beta) {
                    continue;
                }
                for &alpha in total.hom(total.cod(phi1), total.cod(phi2)) {
                    if !p.is_vertical(alpha)
                        || total.compose(phi2, beta) != total.compose(alpha, phi1)
                    {
                        continue;
                    }
                    assert!(
                        is_pullback_square(&total, phi2, alpha, total.dom(phi1), beta, phi1),
                        "cartesian/vertical squares are pullbacks"
                    );
                }
            }
        }
    }
    // squares of four cartesian arrows over a base pullback are pullbacks
    for sq in super::util::pullback_squares(&base) {
        for top in total.arrows() {
            if p.over(top) != sq.top || !p.is_cartesian(top) {
                continue;
            }
            for left in total.arrows_from(total.dom(top)) {
                if p.over(left) != sq.left || !p.is_cartesian(left) {
                    continue;
                }
                for right in total.arrows_from(total.cod(top)) {
                    if p.over(right) != sq.right || !p.is_cartesian(right) {
                        continue;
                    }
                    for &bot in total.hom(total.cod(left), total.cod(right)) {
                        if p.over(bot) != sq.bot
                            || !p.is_cartesian(bot)
                            || total.compose(right, top) != total.compose(bot, left)
                        {
                            continue;
                        }
                        assert!(
                            is_pullback_square(
                                &total,
                                bot,
                                right,
                                total.dom(top),
                                left,
                                top
                            ),
                            "cartesian squares over base pullbacks are pullbacks"
                        );
                    }
                }
            }
        }
    }
    // fibre pullbacks are pullbacks in the total category
    if fibred_pullbacks {
        for i in base.objects() {
            let f = fibre(p, i);
            for a1 in f.cat.arrows() {
                for a2 in f.cat.arrows() {
                    if f.cat.cod(a1) != f.cat.cod(a2) {
                        continue;
                    }
                    let LimitResult::Found { canonical, .. } =
                        find_limit(&f.cat, LimitShape::Pullback(a1, a2))
                    else {
                        unreachable!("fibred pullbacks verified above");
                    };
                    assert!(
                        is_pullback_square(
                            &total,
                            f.arrs[a1.0],
                            f.arrs[a2.0],
                            f.objs[canonical.apex.0],
                            f.arrs[canonical.legs[0].0],
                            f.arrs[canonical.legs[1].0],
                        ),
                        "fibre pullbacks are pullbacks in the total category"
                    );
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeometricVerdict {
    pub finite_limits: bool,
    pub internal_sums: bool,
    pub stable: bool,
    pub disjoint: bool,
    pub small_global_sections: bool,
    pub geometric: bool,
}

/// A geometric fibration: fibrewise finite limits, stable disjoint internal
/// sums, and small global sections.
pub fn is_geometric(p: &Arc<FibrationData>) -> GeometricVerdict {
    let finite_limits = finite_limit_profile(p).fibred_finite_limits;
    let sums = has_internal_sums(p);
    let profile = if sums.has_sums {
        let pr = sums_profile(p);
        (pr.stable, pr.disjoint)
    } else {
        (false, false)
    };
    let sections = matches!(has_small_global_sections(p), GlobalSections::Found { .. });
    GeometricVerdict {
        finite_limits,
        internal_sums: sums.has_sums,
        stable: profile.0,
        disjoint: profile.1,
        small_global_sections: sections,
        geometric: finite_limits && sums.has_sums && profile.0 && profile.1 && sections,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObservationSweeps {
    /// over an initial base object every parallel vertical pair is equal
    /// (requires local smallness); None when the base has no initial object
    pub initial_fibre_posetal: Option<bool>,
    /// cartesian arrows over base epis are epic in the total category
    pub cart_over_epi_is_epi: bool,
}

/// Two observation sweeps for locally small fibrations: unique verticals
/// over an initial base object, and cartesian arrows over epis being epic.
pub fn observation_sweeps(p: &Arc<FibrationData>) -> ObservationSweeps {
    let total = p.total().clone();
    let base = p.base().clone();
    let initial = crate::cat::initial_object(&base);
    let initial_fibre_posetal = initial.map(|zero| {
        let objs = p.fibre_objects(zero);
        objs.iter().all(|&x| {
            objs.iter().all(|&y| {
                total
                    .hom(x, y)
                    .iter()
                    .filter(|&&f| p.is_vertical(f))
                    .count()
                    == 1
            })
        })
    });
    let mut cart_over_epi = true;
    for phi in total.arrows() {
        if p.is_cartesian(phi) && base.is_epi(p.over(phi)) && !total.is_epi(phi) {
            cart_over_epi = false;
        }
    }
    ObservationSweeps { initial_fibre_posetal, cart_over_epi_is_epi: cart_over_epi }
}

/// The capped "smallness" search: is `p` equivalent to the externalisation
/// of some internal category of its base?
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Smallness {
    Small { c0: usize, c1: usize },
    NotSmall,
    Unknown { cap: usize },
}

pub fn is_small_fibration(p: &Arc<FibrationData>, cap: usize) -> Smallness {
    use crate::construct::{externalize, InternalCat};
    let base = p.base().clone();
    let mut budget = cap;
    for c0 in base.objects() {
        for c1 in base.objects() {
            for d0 in base.hom(c1, c0).to_vec() {
                for d1 in base.hom(c1, c0).to_vec() {
                    for i in base.hom(c0, c1).to_vec() {
                        // candidate pullback for composable pairs
                        let LimitResult::Found { canonical, .. } =
                            find_limit(&base, LimitShape::Pullback(d0, d1))
                        else {
                            continue;
                        };
                        let c2 = canonical.apex;
                        let (p1, p2) = (canonical.legs[0], canonical.legs[1]);
                        for m in base.hom(c2, c1).to_vec() {
                            if budget == 0 {
                                return Smallness::Unknown { cap };
                            }
                            budget -= 1;
                            let cand = InternalCat {
                                ambient: base.clone(),
                                c0,
                                c1,
                                d0,
                                d1,
                                i,
                                c2,
                                p1,
                                p2,
                                m,
                            };
                            if cand.validate().is_err() {
                                continue;
                            }
                            let Ok(ext) = externalize(&cand) else { continue };
                            if !ext.fib.is_fibration() {
                                continue;
                            }
                            if equivalent_over_base(p, &ext.fib, cap) {
                                return Smallness::Small { c0: c0.0, c1: c1.0 };
                            }
                        }
                    }
                }
            }
        }
    }
    Smallness::NotSmall
}

/// Fibred equivalence by search: some cartesian functor over the identity
/// base that is a fibrewise equivalence.
fn equivalent_over_base(p: &Arc<FibrationData>, q: &Arc<FibrationData>, cap: usize) -> bool {
    use crate::construct::{enumerate_cartesian_functors, fibrewise_equivalence};
    let Some(functors) =
        enumerate_cartesian_functors(p, q, &crate::cat::FunctorData::identity(p.base()), cap)
    else {
        return false;
    };
    functors.iter().any(|f| fibrewise_equivalence(f, p, q))
}

/// Bundled representability/smallness report with the observation sweeps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmallFibrationTests {
    pub representable: Option<bool>,
    pub small: Smallness,
    pub observations: ObservationSweeps,
}

pub fn small_fibration_tests(p: &Arc<FibrationData>, cap: usize) -> SmallFibrationTests {
    let representable = match super::shape::is_representable(p) {
        Ok(r) => Some(matches!(r, super::shape::Representability::Representable { .. })),
        Err(_) => None,
    };
    SmallFibrationTests {
        representable,
        small: is_small_fibration(p, cap),
        observations: observation_sweeps(p),
    }
}
