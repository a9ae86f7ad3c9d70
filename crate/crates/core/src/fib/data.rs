use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::cat::{Arr, FinCat, FunctorData, MappingViolation, Obj};

/// Classification flags for a single arrow of the total category.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ArrowFlags {
    pub vertical: bool,
    /// Cartesian in the liberal sense: unique vertical factorisation for
    /// arrows with the same image.
    pub cartesian_liberal: bool,
    /// Cartesian in the strong sense: unique factorisation over every
    /// base factorisation.
    pub hypercartesian: bool,
    pub cocartesian: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
pub enum FibError {
    #[error("projection functor fails validation: {0:?}")]
    InvalidProjection(Vec<MappingViolation>),
    #[error("no cartesian lift of object {object} along base arrow {arrow}")]
    NoLift { arrow: usize, object: usize },
    #[error("no cocartesian lift of object {object} along base arrow {arrow}")]
    NoColift { arrow: usize, object: usize },
    #[error("functor is not a fibration (least failure: lift of {object} along {arrow})")]
    NotAFibration { arrow: usize, object: usize },
    #[error("cleavage is not split at {0:?}")]
    CleavageNotSplit(String),
}

/// Verdict of the fibration check, with the least counterexamples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FibVerdict {
    pub fibration: bool,
    pub opfibration: bool,
    pub bifibration: bool,
    /// least (base arrow, object over its codomain) without a cartesian lift
    pub cart_counterexample: Option<(usize, usize)>,
    /// least (base arrow, object over its domain) without a cocartesian lift
    pub cocart_counterexample: Option<(usize, usize)>,
}

/// A validated functor with cached arrow classification and lift tables.
#[derive(Clone, Debug)]
pub struct FibrationData {
    proj: FunctorData,
    flags: Vec<ArrowFlags>,
    /// (base arrow u, object X over cod u) -> all hypercartesian lifts, ascending.
    cart_lifts: BTreeMap<(Arr, Obj), Vec<Arr>>,
    /// (base arrow u, object X over dom u) -> all cocartesian lifts, ascending.
    cocart_lifts: BTreeMap<(Arr, Obj), Vec<Arr>>,
    verdict: FibVerdict,
}

/// Decides hypercartesianness directly: `phi` over `u` qualifies iff for every
/// base arrow `v` into `dom u` and every `theta` into `cod phi` over `u∘v`
/// there is a unique `psi` over `v` with `phi ∘ psi = theta`.
pub fn is_hypercartesian(proj: &FunctorData, phi: Arr) -> bool {
    let total = &proj.source;
    let base = &proj.target;
    let u = proj.arr(phi);
    let x = total.cod(phi);
    base.arrows_to(base.dom(u)).all(|v| {
        let uv = base.compose(u, v).unwrap();
        total.arrows_to(x).filter(|&th| proj.arr(th) == uv).all(|theta| {
            total
                .hom(total.dom(theta), total.dom(phi))
                .iter()
                .filter(|&&psi| proj.arr(psi) == v && total.compose(phi, psi) == Some(theta))
                .count()
                == 1
        })
    })
}

/// The liberal variant: unique *vertical* factorisation for any arrow with
/// the same projection.
pub fn is_cartesian_liberal(proj: &FunctorData, phi: Arr) -> bool {
    let total = &proj.source;
    let base = &proj.target;
    let u = proj.arr(phi);
    let x = total.cod(phi);
    total.arrows_to(x).filter(|&th| proj.arr(th) == u).all(|theta| {
        total
            .hom(total.dom(theta), total.dom(phi))
            .iter()
            .filter(|&&a| {
                base.is_identity(proj.arr(a)) && total.compose(phi, a) == Some(theta)
            })
            .count()
            == 1
    })
}

/// The full universal-property quantifier for cocartesian arrows.
pub fn is_cocartesian(proj: &FunctorData, phi: Arr) -> bool {
    let total = &proj.source;
    let base = &proj.target;
    let u = proj.arr(phi);
    let x = total.dom(phi);
    base.arrows_from(base.cod(u)).all(|v| {
        let vu = base.compose(v, u).unwrap();
        total.arrows_from(x).filter(|&ps| proj.arr(ps) == vu).all(|psi| {
            total
                .hom(total.cod(phi), total.cod(psi))
                .iter()
                .filter(|&&th| proj.arr(th) == v && total.compose(th, phi) == Some(psi))
                .count()
                == 1
        })
    })
}

/// The vertical-factorisation reading of cocartesianness: only vertical
/// factorisations are checked. Agrees with the full quantifier on
/// fibrations.
pub fn is_cocartesian_simple(proj: &FunctorData, phi: Arr) -> bool {
    let total = &proj.source;
    let base = &proj.target;
    let u = proj.arr(phi);
    let x = total.dom(phi);
    total.arrows_from(x).filter(|&ps| proj.arr(ps) == u).all(|psi| {
        total
            .hom(total.cod(phi), total.cod(psi))
            .iter()
            .filter(|&&a| base.is_identity(proj.arr(a)) && total.compose(a, phi) == Some(psi))
            .count()
            == 1
    })
}

impl FibrationData {
    /// Validates the projection and computes the classification cache, the
    /// lift tables and the fibration verdict.
    pub fn new(proj: FunctorData) -> Result<FibrationData, FibError> {
        proj.validate().map_err(FibError::InvalidProjection)?;
        let total = proj.source.clone();
        let base = proj.target.clone();
        let flags: Vec<ArrowFlags> = total
            .arrows()
            .map(|f| ArrowFlags {
                vertical: base.is_identity(proj.arr(f)),
                cartesian_liberal: is_cartesian_liberal(&proj, f),
                hypercartesian: is_hypercartesian(&proj, f),
                cocartesian: is_cocartesian(&proj, f),
            })
            .collect();
        let mut cart_lifts = BTreeMap::new();
        let mut cart_counterexample = None;
        for u in base.arrows() {
            for x in total.objects() {
                if proj.ob(x) != base.cod(u) {
                    continue;
                }
                let lifts: Vec<Arr> = total
                    .arrows_to(x)
                    .filter(|&phi| proj.arr(phi) == u && flags[phi.0].hypercartesian)
                    .collect();
                if lifts.is_empty() && cart_counterexample.is_none() {
                    cart_counterexample = Some((u.0, x.0));
                }
                cart_lifts.insert((u, x), lifts);
            }
        }
        let mut cocart_lifts = BTreeMap::new();
        let mut cocart_counterexample = None;
        for u in base.arrows() {
            for x in total.objects() {
                if proj.ob(x) != base.dom(u) {
                    continue;
                }
                let lifts: Vec<Arr> = total
                    .arrows_from(x)
                    .filter(|&phi| proj.arr(phi) == u && flags[phi.0].cocartesian)
                    .collect();
                if lifts.is_empty() && cocart_counterexample.is_none() {
                    cocart_counterexample = Some((u.0, x.0));
                }
                cocart_lifts.insert((u, x), lifts);
            }
        }
        let verdict = FibVerdict {
            fibration: cart_counterexample.is_none(),
            opfibration: cocart_counterexample.is_none(),
            bifibration: cart_counterexample.is_none() && cocart_counterexample.is_none(),
            cart_counterexample,
            cocart_counterexample,
        };
        Ok(FibrationData { proj, flags, cart_lifts, cocart_lifts, verdict })
    }

    pub fn proj(&self) -> &FunctorData {
        &self.proj
    }

    pub fn total(&self) -> &Arc<FinCat> {
        &self.proj.source
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.proj.target
    }

    pub fn flags(&self, f: Arr) -> ArrowFlags {
        self.flags[f.0]
    }

    pub fn is_vertical(&self, f: Arr) -> bool {
        self.flags[f.0].vertical
    }

    pub fn is_cartesian(&self, f: Arr) -> bool {
        self.flags[f.0].hypercartesian
    }

    pub fn is_cocartesian_arrow(&self, f: Arr) -> bool {
        self.flags[f.0].cocartesian
    }

    pub fn verdict(&self) -> &FibVerdict {
        &self.verdict
    }

    /// The full cartesian lift table: ((base arrow, object over its
    /// codomain), all hypercartesian lifts) with the canonical choice
    /// first-preferred.
    pub fn lift_table(&self) -> Vec<((usize, usize), Vec<usize>)> {
        self.cart_lifts
            .iter()
            .map(|(&(u, x), lifts)| ((u.0, x.0), lifts.iter().map(|l| l.0).collect()))
            .collect()
    }

    pub fn is_fibration(&self) -> bool {
        self.verdict.fibration
    }

    pub fn base_of(&self, x: Obj) -> Obj {
        self.proj.ob(x)
    }

    pub fn over(&self, f: Arr) -> Arr {
        self.proj.arr(f)
    }

    /// Objects of the fibre over `i`, ascending.
    pub fn fibre_objects(&self, i: Obj) -> Vec<Obj> {
        self.total().objects().filter(|&x| self.base_of(x) == i).collect()
    }

    /// Vertical arrows over `i`, ascending.
    pub fn fibre_arrows(&self, i: Obj) -> Vec<Arr> {
        self.total()
            .arrows()
            .filter(|&f| self.over(f) == self.base().id(i))
            .collect()
    }

    /// All hypercartesian lifts of `x` along `u`, plus the canonical choice
    /// (identity if present, else least id).
    pub fn cartesian_lift(&self, u: Arr, x: Obj) -> Result<LiftSet, FibError> {
        let lifts = self
            .cart_lifts
            .get(&(u, x))
            .filter(|l| !l.is_empty())
            .ok_or(FibError::NoLift { arrow: u.0, object: x.0 })?;
        Ok(LiftSet::new(self.total(), lifts))
    }

    pub fn cocartesian_lift(&self, u: Arr, x: Obj) -> Result<LiftSet, FibError> {
        let lifts = self
            .cocart_lifts
            .get(&(u, x))
            .filter(|l| !l.is_empty())
            .ok_or(FibError::NoColift { arrow: u.0, object: x.0 })?;
        Ok(LiftSet::new(self.total(), lifts))
    }

    /// The unique vertical arrow `w` with `phi ∘ w = theta`, for `phi`
    /// hypercartesian and `theta` over the same base arrow.
    pub fn vertical_factor_through(&self, phi: Arr, theta: Arr) -> Option<Arr> {
        let total = self.total();
        total
            .hom(total.dom(theta), total.dom(phi))
            .iter()
            .copied()
            .find(|&w| self.is_vertical(w) && total.compose(phi, w) == Some(theta))
    }

    /// The unique arrow `psi` over `v` with `phi ∘ psi = theta`, for `phi`
    /// hypercartesian over `u` and `theta` over `u ∘ v`.
    pub fn factor_through(&self, phi: Arr, theta: Arr, v: Arr) -> Option<Arr> {
        let total = self.total();
        total
            .hom(total.dom(theta), total.dom(phi))
            .iter()
            .copied()
            .find(|&w| self.over(w) == v && total.compose(phi, w) == Some(theta))
    }

    /// Dual: the unique arrow `theta` over `v` with `theta ∘ phi = psi`,
    /// for `phi` cocartesian over `u` and `psi` over `v ∘ u`.
    pub fn cofactor_through(&self, phi: Arr, psi: Arr, v: Arr) -> Option<Arr> {
        let total = self.total();
        total
            .hom(total.cod(phi), total.cod(psi))
            .iter()
            .copied()
            .find(|&w| self.over(w) == v && total.compose(w, phi) == Some(psi))
    }

    /// Vertical/cartesian factorisation `f = Cart(u, cod f) ∘ vert(f)` using
    /// the canonical lift.
    pub fn vert_cart_factorisation(&self, f: Arr) -> Result<(Arr, Arr), FibError> {
        let u = self.over(f);
        let lift = self.cartesian_lift(u, self.total().cod(f))?;
        let phi = lift.canonical;
        let alpha = self
            .vertical_factor_through(phi, f)
            .expect("every arrow factors vertically through a hypercartesian lift");
        Ok((alpha, phi))
    }
}

/// A complete set of (co)cartesian lifts with the canonical choice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftSet {
    pub all: Vec<Arr>,
    pub canonical: Arr,
}

impl LiftSet {
    fn new(total: &FinCat, lifts: &[Arr]) -> LiftSet {
        let canonical = lifts
            .iter()
            .copied()
            .find(|&l| total.is_identity(l))
            .unwrap_or(lifts[0]);
        LiftSet { all: lifts.to_vec(), canonical }
    }
}
