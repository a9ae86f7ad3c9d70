use std::sync::Arc;

use crate::cat::{Arr, FunctorData, Obj};
use crate::fib::FibrationData;

use super::base_change::{product_fibration, ProductFibration};
use super::fibhom::{cartesian_functor_category, CartFunctorCat};
use super::indexed::{grothendieck, Grothendieck, IndexedCat};
use super::underline::{sigma, underline, Underline};

/// The exponential `[P -> Q]`: fibre at `I` is the category of cartesian
/// functors `Ī ×_B P -> Q`, reindexing by precomposition.
pub struct ExponentialFibration {
    pub indexed: IndexedCat,
    pub groth: Grothendieck,
    pub fibre_sizes: Vec<usize>,
}

pub fn exponential_fibration(
    p: &Arc<FibrationData>,
    q: &Arc<FibrationData>,
    cap: usize,
) -> Option<ExponentialFibration> {
    assert_eq!(p.base(), q.base(), "exponential needs a common base");
    let b = p.base().clone();
    let underlines: Vec<Underline> = b.objects().map(|i| underline(&b, i)).collect();
    let products: Vec<ProductFibration> =
        underlines.iter().map(|u| product_fibration(&u.fib, p)).collect();
    let homs: Vec<CartFunctorCat> = products
        .iter()
        .map(|pr| cartesian_functor_category(&pr.fib, q, &FunctorData::identity(&b), cap))
        .collect::<Option<_>>()?;

    let reindex: Vec<FunctorData> = b
        .arrows()
        .map(|u| {
            let (j, i) = (b.dom(u), b.cod(u));
            let s = sigma(&b, u, &underlines[j.0], &underlines[i.0]);
            // W_u : (J̄ × P) -> (Ī × P), (a, x) ↦ (Σ_u a, x).
            let w_obj: Vec<Obj> = products[j.0]
                .obj_pairs
                .iter()
                .map(|&(a, x)| {
                    products[i.0]
                        .obj_of_pair(s.ob(a), x)
                        .expect("postcomposed pair exists")
                })
                .collect();
            let w_arr: Vec<Arr> = products[j.0]
                .arr_pairs
                .iter()
                .map(|&(m, phi)| {
                    products[i.0].arr_of_pair(s.arr(m), phi).expect("postcomposed arrow pair")
                })
                .collect();
            let w = FunctorData {
                source: products[j.0].fib.total().clone(),
                target: products[i.0].fib.total().clone(),
                obj_map: w_obj,
                arr_map: w_arr,
            };
            w.validate().expect("Σ_u × P is a functor");
            let obj_map: Vec<Obj> = homs[i.0]
                .functors
                .iter()
                .map(|f| {
                    homs[j.0]
                        .functor_index(&FunctorData::compose(f, &w))
                        .expect("precomposite enumerated")
                })
                .collect();
            let arr_map: Vec<Arr> = homs[i.0]
                .cat
                .arrows()
                .map(|t| {
                    let comps: Vec<Arr> = products[j.0]
                        .obj_pairs
                        .iter()
                        .enumerate()
                        .map(|(k, _)| homs[i.0].transfs[t.0][w.ob(Obj(k)).0])
                        .collect();
                    let dom = obj_map[homs[i.0].cat.dom(t).0];
                    let cod = obj_map[homs[i.0].cat.cod(t).0];
                    homs[j.0].transf_index(dom, cod, &comps).expect("whiskered transformation")
                })
                .collect();
            FunctorData {
                source: homs[i.0].cat.clone(),
                target: homs[j.0].cat.clone(),
                obj_map,
                arr_map,
            }
        })
        .collect();
    let indexed = IndexedCat {
        base: b.clone(),
        fibres: homs.iter().map(|h| h.cat.clone()).collect(),
        reindex,
    };
    indexed.validate().expect("[P -> Q] is strictly functorial");
    let groth = grothendieck(&indexed).expect("[P -> Q] assembles");
    let fibre_sizes = homs.iter().map(|h| h.functors.len()).collect();
    Some(ExponentialFibration { indexed, groth, fibre_sizes })
}
