use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::cat::{Arr, FunctorData, Obj};

use super::data::{FibError, FibrationData};
use super::fibre::{fibre, Fibre};

/// A choice of cartesian liftings `Cart(u, X)` for a fibration, with the
/// derived reindexing functors and coherence isos.
#[derive(Clone, Debug)]
pub struct Cleavage {
    fib: Arc<FibrationData>,
    /// (base arrow u, object X over cod u) -> chosen hypercartesian lift
    table: BTreeMap<(Arr, Obj), Arr>,
    normalized: bool,
}

/// Split-check outcome: either split or the least violated instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SplitVerdict {
    Split,
    NotNormalized { object: usize },
    /// Cart(u∘v, X) differs from Cart(u, X) ∘ Cart(v, u*X).
    CompositionViolated { u: usize, v: usize, object: usize },
}

impl Cleavage {
    /// The canonical cleavage: identity lifts where possible, otherwise the
    /// least arrow id. Normalized by construction.
    pub fn canonical(fib: &Arc<FibrationData>) -> Result<Cleavage, FibError> {
        Cleavage::choose(fib, false)
    }

    /// An alternate cleavage: still normalized, but picking the greatest
    /// lift id wherever there is a choice. Used for independence checks.
    pub fn alternate(fib: &Arc<FibrationData>) -> Result<Cleavage, FibError> {
        Cleavage::choose(fib, true)
    }

    fn choose(fib: &Arc<FibrationData>, prefer_last: bool) -> Result<Cleavage, FibError> {
        if !fib.is_fibration() {
            let (arrow, object) = fib.verdict().cart_counterexample.expect("non-fibration has a witness");
            return Err(FibError::NotAFibration { arrow, object });
        }
        let base = fib.base().clone();
        let mut table = BTreeMap::new();
        for u in base.arrows() {
            for x in fib.fibre_objects(base.cod(u)) {
                let lifts = fib.cartesian_lift(u, x)?;
                let chosen = if base.is_identity(u) {
                    fib.total().id(x)
                } else if prefer_last {
                    *lifts.all.last().unwrap()
                } else {
                    lifts.canonical
                };
                table.insert((u, x), chosen);
            }
        }
        Ok(Cleavage { fib: fib.clone(), table, normalized: true })
    }

    /// A cleavage from an explicit table (used by the exhaustive cleavage
    /// enumeration). Every entry must be a hypercartesian lift.
    pub fn from_table(fib: &Arc<FibrationData>, table: BTreeMap<(Arr, Obj), Arr>) -> Cleavage {
        let normalized = table
            .iter()
            .all(|(&(u, x), &phi)| !fib.base().is_identity(u) || phi == fib.total().id(x));
        Cleavage { fib: fib.clone(), table, normalized }
    }

    /// Every cleavage of the fibration, as a cartesian product over the
    /// lift sets. `cap` bounds the number of cleavages produced.
    pub fn enumerate(fib: &Arc<FibrationData>, cap: usize) -> Option<Vec<Cleavage>> {
        let base = fib.base().clone();
        let mut slots: Vec<((Arr, Obj), Vec<Arr>)> = Vec::new();
        for u in base.arrows() {
            for x in fib.fibre_objects(base.cod(u)) {
                slots.push(((u, x), fib.cartesian_lift(u, x).ok()?.all));
            }
        }
        let mut out = vec![BTreeMap::new()];
        for (key, choices) in &slots {
            let mut next = Vec::new();
            for partial in &out {
                for &c in choices {
                    if next.len() + out.len() > cap {
                        return None;
                    }
                    let mut t: BTreeMap<(Arr, Obj), Arr> = partial.clone();
                    t.insert(*key, c);
                    next.push(t);
                }
            }
            out = next;
        }
        Some(out.into_iter().map(|t| Cleavage::from_table(fib, t)).collect())
    }

    pub fn fib(&self) -> &Arc<FibrationData> {
        &self.fib
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn cart(&self, u: Arr, x: Obj) -> Arr {
        self.table[&(u, x)]
    }

    /// Domain of the chosen lift: `u*X`.
    pub fn reindex_obj(&self, u: Arr, x: Obj) -> Obj {
        self.fib.total().dom(self.cart(u, x))
    }

    /// `u*α` for a vertical `α : X -> Y` over `cod u`: the unique vertical
    /// making the reindexing square commute.
    pub fn reindex_arr(&self, u: Arr, alpha: Arr) -> Arr {
        let total = self.fib.total();
        let x = total.dom(alpha);
        let y = total.cod(alpha);
        let theta = total
            .compose(alpha, self.cart(u, x))
            .expect("reindexing square composes");
        self.fib
            .vertical_factor_through(self.cart(u, y), theta)
            .expect("unique vertical factor through a hypercartesian lift")
    }

    /// The coherence iso `(c_{u,v})_X : v*u*X -> (u∘v)*X`, the unique
    /// vertical with `Cart(u∘v, X) ∘ c = Cart(u, X) ∘ Cart(v, u*X)`.
    pub fn coherence_iso(&self, u: Arr, v: Arr, x: Obj) -> Arr {
        let total = self.fib.total();
        let base = self.fib.base();
        let uv = base.compose(u, v).expect("composable base arrows");
        let long = total
            .compose(self.cart(u, x), self.cart(v, self.reindex_obj(u, x)))
            .expect("lift composite");
        self.fib
            .vertical_factor_through(self.cart(uv, x), long)
            .expect("coherence iso exists")
    }

    /// Checks `Cart(id,X) = id` and `Cart(u∘v,X) = Cart(u,X) ∘ Cart(v,u*X)`
    /// exhaustively.
    pub fn check_split(&self) -> SplitVerdict {
        let base = self.fib.base();
        let total = self.fib.total();
        for x in total.objects() {
            let idb = base.id(self.fib.base_of(x));
            if self.cart(idb, x) != total.id(x) {
                return SplitVerdict::NotNormalized { object: x.0 };
            }
        }
        for u in base.arrows() {
            for v in base.arrows() {
                if base.dom(u) != base.cod(v) {
                    continue;
                }
                let uv = base.compose(u, v).unwrap();
                for x in self.fib.fibre_objects(base.cod(u)) {
                    let rhs = total
                        .compose(self.cart(u, x), self.cart(v, self.reindex_obj(u, x)))
                        .unwrap();
                    if self.cart(uv, x) != rhs {
                        return SplitVerdict::CompositionViolated { u: u.0, v: v.0, object: x.0 };
                    }
                }
            }
        }
        SplitVerdict::Split
    }

    /// The reindexing functor `u* : P(I) -> P(J)` between materialised
    /// fibres, for `u : J -> I`.
    pub fn reindexing_functor(&self, u: Arr) -> (FunctorData, Fibre, Fibre) {
        let base = self.fib.base();
        let src = fibre(&self.fib, base.cod(u));
        let dst = fibre(&self.fib, base.dom(u));
        let obj_map: Vec<Obj> = src
            .objs
            .iter()
            .map(|&x| dst.obj_index(self.reindex_obj(u, x)).expect("reindexed object lies in the fibre"))
            .collect();
        let arr_map: Vec<Arr> = src
            .arrs
            .iter()
            .map(|&a| dst.arr_index(self.reindex_arr(u, a)).expect("reindexed arrow lies in the fibre"))
            .collect();
        let f = FunctorData { source: src.cat.clone(), target: dst.cat.clone(), obj_map, arr_map };
        f.validate()
            .expect("reindexing along a cleavage is a functor up to the recorded coherence");
        (f, src, dst)
    }
}
