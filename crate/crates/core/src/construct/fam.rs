use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cat::{Arr, CatBuilder, FunctorData, Obj};
use crate::fib::{check_fib_morphism, FibMorphism, FibMorphismVerdict, FibrationData};

use super::fundamental::FundamentalError;

/// The family fibration `Fam(P)` over `B`: objects are pairs
/// `(w : I -> J in B, X over I)`, arrows are squares in `B` filled by an
/// arrow of the total category over the domain edge.
pub struct FamFibration {
    pub fib: Arc<FibrationData>,
    /// (B-arrow w, P-total object X over dom w) per Fam object
    pub obj_key: Vec<(Arr, Obj)>,
    /// (dom key, cod key, codomain edge f1, filler φ) per Fam arrow;
    /// the domain edge is P(φ).
    pub arr_key: Vec<((Arr, Obj), (Arr, Obj), Arr, Arr)>,
    obj_ix: BTreeMap<(Arr, Obj), Obj>,
    arr_ix: BTreeMap<((Arr, Obj), (Arr, Obj), Arr, Arr), Arr>,
}

impl FamFibration {
    pub fn obj(&self, w: Arr, x: Obj) -> Obj {
        self.obj_ix[&(w, x)]
    }

    pub fn arr(&self, dom: (Arr, Obj), cod: (Arr, Obj), f1: Arr, phi: Arr) -> Arr {
        self.arr_ix[&(dom, cod, f1, phi)]
    }
}

/// Requires the base to have pullbacks (`Fam` is only a fibration then).
pub fn fam_fibration(p: &Arc<FibrationData>) -> Result<FamFibration, FundamentalError> {
    if let Err((f, g)) = crate::cat::has_all_pullbacks(p.base()) {
        return Err(FundamentalError::BaseLacksPullbacks { f: f.0, g: g.0 });
    }
    let b = p.base().clone();
    let total = p.total().clone();
    let mut builder = CatBuilder::new();
    let mut objs = Vec::new();
    for w in b.arrows() {
        for x in p.fibre_objects(b.dom(w)) {
            builder.add_object((w, x));
            objs.push((w, x));
        }
    }
    for &(w, x) in &objs {
        for &(w2, y) in &objs {
            for &f1 in b.hom(b.cod(w), b.cod(w2)) {
                for &phi in total.hom(x, y) {
                    // square condition: w2 ∘ P(φ) = f1 ∘ w
                    if b.compose(w2, p.over(phi)) == b.compose(f1, w) {
                        builder.add_arrow(((w, x), (w2, y), f1, phi), (w, x), (w2, y));
                    }
                }
            }
        }
    }
    for &(w, x) in &objs {
        builder.set_identity((w, x), ((w, x), (w, x), b.id(b.cod(w)), total.id(x)));
    }
    let built = builder
        .build(|&(_, gc, g1, gphi), &(fd, _, f1, fphi)| {
            (fd, gc, b.compose(g1, f1).unwrap(), total.compose(gphi, fphi).unwrap())
        })
        .expect("Fam(P) is a category");
    let proj = FunctorData {
        source: built.cat.clone(),
        target: b.clone(),
        obj_map: built.obj_key.iter().map(|&(w, _)| b.cod(w)).collect(),
        arr_map: built.arr_key.iter().map(|&(_, _, f1, _)| f1).collect(),
    };
    let fib = Arc::new(FibrationData::new(proj).expect("Fam(P) projects"));
    if p.is_fibration() {
        assert!(fib.is_fibration(), "Fam of a fibration over a pullback base is a fibration");
    }
    Ok(FamFibration {
        fib,
        obj_key: built.obj_key,
        arr_key: built.arr_key,
        obj_ix: built.obj_ix,
        arr_ix: built.arr_ix,
    })
}

/// The unit `η_P : P -> Fam(P)`, sending `φ : X -> Y` over `u` to the
/// square with both vertical edges identities.
pub fn fam_eta(p: &Arc<FibrationData>, fam: &FamFibration) -> FunctorData {
    let b = p.base();
    let total = p.total();
    let obj_map: Vec<Obj> =
        total.objects().map(|x| fam.obj(b.id(p.base_of(x)), x)).collect();
    let arr_map: Vec<Arr> = total
        .arrows()
        .map(|phi| {
            let u = p.over(phi);
            let dom = (b.id(b.dom(u)), total.dom(phi));
            let cod = (b.id(b.cod(u)), total.cod(phi));
            fam.arr(dom, cod, u, phi)
        })
        .collect();
    let eta = FunctorData {
        source: total.clone(),
        target: fam.fib.total().clone(),
        obj_map,
        arr_map,
    };
    eta.validate().expect("η is a functor");
    let m = FibMorphism::CartesianFunctor { payload: eta.clone(), over: FunctorData::identity(b) };
    assert_eq!(
        check_fib_morphism(&m, p, &fam.fib),
        FibMorphismVerdict::Cartesian,
        "η_P preserves cartesianness"
    );
    eta
}

/// The multiplication `μ_P : Fam²(P) -> Fam(P)`, sending `((X,w),c)` to
/// `(X, c∘w)`.
pub fn fam_mu(p: &Arc<FibrationData>, fam1: &FamFibration, fam2: &FamFibration) -> FunctorData {
    let b = p.base();
    let obj_map: Vec<Obj> = fam2
        .obj_key
        .iter()
        .map(|&(c, a)| {
            let (w, x) = fam1.obj_key[a.0];
            fam1.obj(b.compose(c, w).expect("composable"), x)
        })
        .collect();
    let arr_map: Vec<Arr> = fam2
        .arr_key
        .iter()
        .map(|&((c, a), (c2, a2), f1, phi)| {
            let (w, x) = fam1.obj_key[a.0];
            let (w2, y) = fam1.obj_key[a2.0];
            // Φ : (w,x) -> (w2,y) in Fam(P) decodes to (g1, φ0).
            let (_, _, _g1, phi0) = fam1.arr_key[phi.0];
            fam1.arr(
                (b.compose(c, w).unwrap(), x),
                (b.compose(c2, w2).unwrap(), y),
                f1,
                phi0,
            )
        })
        .collect();
    let mu = FunctorData {
        source: fam2.fib.total().clone(),
        target: fam1.fib.total().clone(),
        obj_map,
        arr_map,
    };
    mu.validate().expect("μ is a functor");
    mu
}

/// `Fam(F)` for a cartesian functor `F : P -> Q` over the identity:
/// `(w, X) ↦ (w, F X)`.
pub fn fam_of_functor(
    f: &FunctorData,
    fam_p: &FamFibration,
    fam_q: &FamFibration,
) -> FunctorData {
    let obj_map: Vec<Obj> =
        fam_p.obj_key.iter().map(|&(w, x)| fam_q.obj(w, f.ob(x))).collect();
    let arr_map: Vec<Arr> = fam_p
        .arr_key
        .iter()
        .map(|&((w, x), (w2, y), f1, phi)| {
            fam_q.arr((w, f.ob(x)), (w2, f.ob(y)), f1, f.arr(phi))
        })
        .collect();
    let out = FunctorData {
        source: fam_p.fib.total().clone(),
        target: fam_q.fib.total().clone(),
        obj_map,
        arr_map,
    };
    out.validate().expect("Fam of a functor is a functor");
    out
}
