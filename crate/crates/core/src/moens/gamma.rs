use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::analyze::{fibrewise_terminals, has_small_global_sections, terminal_one_arrow, GlobalSections};
use crate::cat::{Arr, FunctorData, Obj};
use crate::construct::{fundamental_fibration, Fundamental};
use crate::fib::{check_fib_morphism, FibMorphism, FibMorphismVerdict, FibrationData};

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
pub enum DeltaGammaError {
    #[error("fibration is not geometric: {0}")]
    NotGeometric(String),
}

/// The fibred adjunction `Δ_P ⊣ Γ_P` between the fundamental fibration of
/// the base and `P`, built from the global-sections adjoint and law-checked
/// arrow by arrow.
pub struct DeltaGamma {
    pub fund: Fundamental,
    /// Δ_P : B² -> total(P)
    pub delta: FunctorData,
    /// Γ_P : total(P) -> B²
    pub gamma: FunctorData,
    /// unit components in B², indexed by B²-objects
    pub unit: Vec<Arr>,
    /// counit components in total(P), indexed by total objects
    pub counit: Vec<Arr>,
    /// G(X) per total object with the section counit ε_X
    pub sections: Vec<(usize, usize, usize)>,
}

pub fn delta_gamma(p: &Arc<FibrationData>) -> Result<DeltaGamma, DeltaGammaError> {
    let geom = crate::analyze::is_geometric(p);
    if !geom.geometric {
        return Err(DeltaGammaError::NotGeometric(format!("{geom:?}")));
    }
    let base = p.base().clone();
    let total = p.total().clone();
    let terminals = fibrewise_terminals(p).expect("geometric fibration has fibre terminals");
    let fund = fundamental_fibration(&base).expect("geometric base has pullbacks");
    let GlobalSections::Found { table } = has_small_global_sections(p) else {
        unreachable!("geometric fibrations have small global sections");
    };

    // Δ_P on objects: u ↦ cod of the cocartesian lift of 1_{dom u} along u.
    let collapse_along = |u: Arr| -> Arr {
        p.cocartesian_lift(u, terminals[base.dom(u).0])
            .expect("geometric fibrations have cocartesian lifts over every arrow")
            .canonical
    };
    let delta_obj: Vec<Obj> = fund
        .obj_arrow
        .iter()
        .map(|&u| total.cod(collapse_along(u)))
        .collect();
    let delta_arr: Vec<Arr> = fund
        .fib
        .total()
        .arrows()
        .map(|sq| {
            let (top, bottom) = fund.square[sq.0];
            let u1 = fund.obj_arrow[fund.fib.total().dom(sq).0];
            let u2 = fund.obj_arrow[fund.fib.total().cod(sq).0];
            let phi1 = collapse_along(u1);
            let phi2 = collapse_along(u2);
            // unique arrow over `bottom` with Δ(sq) ∘ φ_{u1} = φ_{u2} ∘ 1_top
            let rhs = total
                .compose(phi2, terminal_one_arrow(p, &terminals, top))
                .expect("composable");
            p.cofactor_through(phi1, rhs, bottom)
                .expect("cocartesian cofactor for Δ_P")
        })
        .collect();
    let delta = FunctorData {
        source: fund.fib.total().clone(),
        target: total.clone(),
        obj_map: delta_obj,
        arr_map: delta_arr,
    };
    delta.validate().expect("Δ_P is a functor");
    assert_eq!(
        check_fib_morphism(
            &FibMorphism::CartesianFunctor { payload: delta.clone(), over: FunctorData::identity(&base) },
            &fund.fib,
            p,
        ),
        FibMorphismVerdict::Cartesian,
        "Δ_P is cartesian"
    );

    // Γ_P on objects: X ↦ P(ε_X) as an object of B².
    let eps: Vec<Arr> = table.iter().map(|&(_, _, e)| Arr(e)).collect();
    let g_of: Vec<Obj> = table.iter().map(|&(_, g, _)| Obj(g)).collect();
    let gamma_obj: Vec<Obj> = total.objects().map(|x| fund.obj_ix[&p.over(eps[x.0])]).collect();
    let gamma_arr: Vec<Arr> = total
        .arrows()
        .map(|h| {
            let (y, x) = (total.dom(h), total.cod(h));
            // G(h): the unique v with ε_X ∘ 1_v = h ∘ ε_Y.
            let rhs = total.compose(h, eps[y.0]).expect("composable");
            let v = base
                .hom(g_of[y.0], g_of[x.0])
                .iter()
                .copied()
                .find(|&v| {
                    total.compose(eps[x.0], terminal_one_arrow(p, &terminals, v)) == Some(rhs)
                })
                .expect("G acts on arrows");
            fund.arr_ix[&(p.over(eps[y.0]), p.over(eps[x.0]), v, p.over(h))]
        })
        .collect();
    let gamma = FunctorData {
        source: total.clone(),
        target: fund.fib.total().clone(),
        obj_map: gamma_obj,
        arr_map: gamma_arr,
    };
    gamma.validate().expect("Γ_P is a functor");

    // counit ε̃_X : ΔΓX -> X, the vertical factor of ε_X through the
    // collapse of 1_{GX} along P(ε_X).
    let counit: Vec<Arr> = total
        .objects()
        .map(|x| {
            let phi = collapse_along(p.over(eps[x.0]));
            p.cofactor_through(phi, eps[x.0], base.id(p.base_of(x)))
                .expect("vertical counit")
        })
        .collect();
    // unit η̃_u : u -> ΓΔ(u) in B²: (v-part, id) with ε_{Δu} ∘ 1_v = φ_u.
    let unit: Vec<Arr> = fund
        .obj_arrow
        .iter()
        .map(|&u| {
            let du = total.cod(collapse_along(u));
            let v = base
                .hom(base.dom(u), g_of[du.0])
                .iter()
                .copied()
                .find(|&v| {
                    total.compose(eps[du.0], terminal_one_arrow(p, &terminals, v))
                        == Some(collapse_along(u))
                })
                .expect("unit component");
            fund.arr_ix[&(u, p.over(eps[du.0]), v, base.id(base.cod(u)))]
        })
        .collect();

    // triangle identities, arrow by arrow
    for k in fund.fib.total().objects() {
        let lhs = total
            .compose(counit[delta.ob(k).0], delta.arr(unit[k.0]))
            .expect("composable triangle");
        assert_eq!(lhs, total.id(delta.ob(k)), "Δ-triangle identity");
    }
    for x in total.objects() {
        let lhs = fund
            .fib
            .total()
            .compose(gamma.arr(counit[x.0]), unit[gamma.ob(x).0])
            .expect("composable triangle");
        assert_eq!(lhs, fund.fib.total().id(gamma.ob(x)), "Γ-triangle identity");
    }
    // unit and counit components are vertical (fibred adjunction)
    for k in fund.fib.total().objects() {
        assert!(fund.fib.is_vertical(unit[k.0]), "unit is vertical");
    }
    for x in total.objects() {
        assert!(p.is_vertical(counit[x.0]), "counit is vertical");
    }
    Ok(DeltaGamma { fund, delta, gamma, unit, counit, sections: table })
}
