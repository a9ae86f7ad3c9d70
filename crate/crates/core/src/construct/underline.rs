use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cat::{Arr, CatBuilder, FinCat, FunctorData, Obj};
use crate::fib::FibrationData;

/// The discrete fibration `∂0 : B/I -> B` corresponding to the
/// representable presheaf at `I`, with its keys exposed.
pub struct Underline {
    pub fib: Arc<FibrationData>,
    /// B-arrow into `i` per slice object
    pub objs: Vec<Arr>,
    /// (dom object arrow, cod object arrow, mediating w) per slice arrow
    pub arrs: Vec<(Arr, Arr, Arr)>,
    pub obj_ix: BTreeMap<Arr, Obj>,
    pub arr_ix: BTreeMap<(Arr, Arr, Arr), Arr>,
}

pub fn underline(b: &Arc<FinCat>, i: Obj) -> Underline {
    let mut builder = CatBuilder::new();
    for a in b.arrows_to(i) {
        builder.add_object(a);
        builder.set_identity(a, (a, a, b.id(b.dom(a))));
    }
    for a in b.arrows_to(i) {
        for a2 in b.arrows_to(i) {
            for &w in b.hom(b.dom(a), b.dom(a2)) {
                if b.compose(a2, w) == Some(a) {
                    builder.add_arrow((a, a2, w), a, a2);
                }
            }
        }
    }
    let built = builder
        .build(|&(_, gc, w2), &(fd, _, w1)| (fd, gc, b.compose(w2, w1).unwrap()))
        .expect("slice is a category");
    let proj = FunctorData {
        source: built.cat.clone(),
        target: b.clone(),
        obj_map: built.obj_key.iter().map(|&a| b.dom(a)).collect(),
        arr_map: built.arr_key.iter().map(|&(_, _, w)| w).collect(),
    };
    let fib = Arc::new(FibrationData::new(proj).expect("∂0 of a slice projects"));
    assert!(fib.is_fibration(), "∂0 : B/I -> B is a (discrete) fibration");
    Underline { fib, objs: built.obj_key, arrs: built.arr_key, obj_ix: built.obj_ix, arr_ix: built.arr_ix }
}

/// Postcomposition `Σ_u : B/J -> B/I` for `u : J -> I`, a cartesian functor
/// over `B` between the underlines.
pub fn sigma(b: &Arc<FinCat>, u: Arr, src: &Underline, dst: &Underline) -> FunctorData {
    let obj_map: Vec<Obj> = src
        .objs
        .iter()
        .map(|&a| dst.obj_ix[&b.compose(u, a).expect("postcomposable")])
        .collect();
    let arr_map: Vec<Arr> = src
        .arrs
        .iter()
        .map(|&(a, a2, w)| {
            dst.arr_ix[&(b.compose(u, a).unwrap(), b.compose(u, a2).unwrap(), w)]
        })
        .collect();
    let f = FunctorData {
        source: src.fib.total().clone(),
        target: dst.fib.total().clone(),
        obj_map,
        arr_map,
    };
    f.validate().expect("postcomposition is a functor");
    f
}
