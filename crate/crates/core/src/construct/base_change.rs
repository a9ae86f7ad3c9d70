use std::sync::Arc;

use crate::cat::{
    enumerate_functors, pullback_of_categories, Arr, CatBuilder, FinCat, FunctorData, Obj,
};
use crate::fib::{FibrationData, FibrationData as Fib};

use super::fundamental::{fundamental_fibration, FundamentalError};

/// Change of base `F*P`, the strict pullback in Cat, plus the mediating
/// functor `K` to the original total category.
pub struct BaseChange {
    pub fib: Arc<FibrationData>,
    pub mediating: FunctorData,
    /// (new-base object, original total object) per total object
    pub obj_pairs: Vec<(Obj, Obj)>,
    pub arr_pairs: Vec<(Arr, Arr)>,
}

pub fn change_of_base(p: &Arc<FibrationData>, f: &FunctorData) -> BaseChange {
    assert_eq!(**p.base(), *f.target, "base change functor must land in the base");
    let pb = pullback_of_categories(f, p.proj());
    let fib = Arc::new(FibrationData::new(pb.to_left.clone()).expect("pulled-back projection"));
    if p.is_fibration() {
        assert!(fib.is_fibration(), "change of base preserves being a fibration");
        // (u, φ) is hypercartesian in F*P iff φ is hypercartesian in P.
        for g in fib.total().arrows() {
            assert_eq!(
                fib.is_cartesian(g),
                p.is_cartesian(pb.to_right.arr(g)),
                "cartesianness is created pointwise by change of base"
            );
        }
    }
    BaseChange { fib, mediating: pb.to_right, obj_pairs: pb.obj_pairs, arr_pairs: pb.arr_pairs }
}

/// The glueing `gl(F) = F*(cod : B^2 -> B)` for `F : C -> B`.
pub fn glueing(f: &FunctorData) -> Result<BaseChange, FundamentalError> {
    let fund = fundamental_fibration(&f.target)?;
    Ok(change_of_base(&fund.fib, f))
}

/// Both sides of the fibred-fibration characterisation, decided
/// independently.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibredFibrationVerdict {
    /// `F` is itself a fibration over the total category of `P`.
    pub left: bool,
    /// (1) `P∘F` is a fibration and `F` is cartesian from it to `P`, and
    /// (2) the fibre restrictions are fibrations with reindexing-stable
    /// cartesian arrows.
    pub right: bool,
}

/// Decides both sides of the theorem characterising the fibred functors
/// that are themselves fibrations. Disagreement is a build-stopping defect,
/// surfaced by the caller.
pub fn check_fibred_fibration(p: &Arc<FibrationData>, f: &FunctorData) -> FibredFibrationVerdict {
    assert_eq!(*f.target, **p.total());
    let f_fib = FibrationData::new(f.clone()).expect("candidate projection validates");
    let left = f_fib.is_fibration();

    // Right side, condition (1): Q = P ∘ F is a fibration and F is a
    // cartesian functor Q -> P over the identity.
    let q = FibrationData::new(FunctorData::compose(p.proj(), f)).expect("composite projects");
    let mut right = q.is_fibration();
    if right {
        for g in q.total().arrows() {
            if q.is_cartesian(g) && !p.is_cartesian(f.arr(g)) {
                right = false;
                break;
            }
        }
    }
    // Condition (2): each fibre restriction F_I : Y_I -> X_I is a fibration...
    if right {
        'outer: for i in p.base().objects() {
            let yf = fib_restriction(&q, p, f, i);
            let Some(yf) = yf else {
                right = false;
                break;
            };
            if !yf.fib.is_fibration() {
                right = false;
                break;
            }
            // ...with cartesian arrows stable under reindexing: for squares
            // of Q-cartesian arrows over the same base arrow with vertical
            // sides, F_J-cartesianness of the target side implies it for
            // the source side.
            for u in p.base().arrows() {
                let j = p.base().dom(u);
                let i2 = p.base().cod(u);
                if i2 != i {
                    continue;
                }
                let yg = fib_restriction(&q, p, f, j).expect("fibre restriction");
                for phi1 in q.total().arrows() {
                    for phi2 in q.total().arrows() {
                        if !(q.is_cartesian(phi1) && q.is_cartesian(phi2))
                            || q.over(phi1) != u
                            || q.over(phi2) != u
                        {
                            continue;
                        }
                        for &psi in q.total().hom(q.total().cod(phi1), q.total().cod(phi2)) {
                            if !q.is_vertical(psi) {
                                continue;
                            }
                            for &theta in q.total().hom(q.total().dom(phi1), q.total().dom(phi2)) {
                                if !q.is_vertical(theta) {
                                    continue;
                                }
                                if q.total().compose(psi, phi1) != q.total().compose(phi2, theta) {
                                    continue;
                                }
                                let psi_cart = yf
                                    .fibre_local(psi)
                                    .map(|a| yf.fib.is_cartesian(a))
                                    .unwrap_or(false);
                                let theta_cart = yg
                                    .fibre_local(theta)
                                    .map(|a| yg.fib.is_cartesian(a))
                                    .unwrap_or(false);
                                if psi_cart && !theta_cart {
                                    right = false;
                                    break 'outer;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    FibredFibrationVerdict { left, right }
}

/// The restriction `F_I : Y_I -> X_I` of `f` to the fibres over `i`,
/// packaged as a fibration candidate between materialised fibres.
struct FibreRestriction {
    fib: Fib,
    /// total arrow of Q -> local arrow of the Y_I fibre
    arr_ix: std::collections::BTreeMap<Arr, Arr>,
}

impl FibreRestriction {
    fn fibre_local(&self, total_arr: Arr) -> Option<Arr> {
        self.arr_ix.get(&total_arr).copied()
    }
}

fn fib_restriction(
    q: &FibrationData,
    p: &Arc<FibrationData>,
    f: &FunctorData,
    i: Obj,
) -> Option<FibreRestriction> {
    let yi = crate::fib::fibre(q, i);
    let xi = crate::fib::fibre(p, i);
    let obj_map: Vec<Obj> =
        yi.objs.iter().map(|&y| xi.obj_index(f.ob(y))).collect::<Option<_>>()?;
    let arr_map: Vec<Arr> =
        yi.arrs.iter().map(|&a| xi.arr_index(f.arr(a))).collect::<Option<_>>()?;
    let proj = FunctorData { source: yi.cat.clone(), target: xi.cat.clone(), obj_map, arr_map };
    proj.validate().ok()?;
    let arr_ix = yi.arrs.iter().enumerate().map(|(k, &a)| (a, Arr(k))).collect();
    Some(FibreRestriction { fib: FibrationData::new(proj).ok()?, arr_ix })
}

/// Product of fibrations over the same base: `P ∘ P*Q`, with both
/// projections cartesian.
pub struct ProductFibration {
    pub fib: Arc<FibrationData>,
    pub to_p: FunctorData,
    pub to_q: FunctorData,
    pub obj_pairs: Vec<(Obj, Obj)>,
    pub arr_pairs: Vec<(Arr, Arr)>,
}

impl ProductFibration {
    pub fn obj_of_pair(&self, x: Obj, y: Obj) -> Option<Obj> {
        self.obj_pairs.binary_search(&(x, y)).ok().map(Obj)
    }

    pub fn arr_of_pair(&self, p: Arr, q: Arr) -> Option<Arr> {
        self.arr_pairs.iter().position(|&pr| pr == (p, q)).map(Arr)
    }
}

pub fn product_fibration(p: &Arc<FibrationData>, q: &Arc<FibrationData>) -> ProductFibration {
    assert_eq!(p.base(), q.base(), "product needs a common base");
    let pb = pullback_of_categories(p.proj(), q.proj());
    let (to_p, to_q) = (pb.to_left, pb.to_right);
    let proj = FunctorData::compose(p.proj(), &to_p);
    let fib = Arc::new(FibrationData::new(proj).expect("product projects"));
    if p.is_fibration() && q.is_fibration() {
        assert!(fib.is_fibration(), "product of fibrations is a fibration");
        for g in fib.total().arrows() {
            let cart = p.is_cartesian(to_p.arr(g)) && q.is_cartesian(to_q.arr(g));
            assert_eq!(fib.is_cartesian(g), cart, "cartesian arrows of a product are pairs");
        }
    }
    ProductFibration { fib, to_p, to_q, obj_pairs: pb.obj_pairs, arr_pairs: pb.arr_pairs }
}

/// The functor category `X^D` with objects enumerated functors and arrows
/// natural transformations, plus the postcomposition functor `P^D`.
pub struct DiagramData {
    pub cat: Arc<FinCat>,
    pub functors: Vec<FunctorData>,
    /// component vectors per arrow
    pub transfs: Vec<Vec<Arr>>,
}

pub fn functor_category(d: &Arc<FinCat>, x: &Arc<FinCat>, cap: usize) -> Option<DiagramData> {
    let functors = enumerate_functors(d, x, cap)?;
    let mut builder = CatBuilder::new();
    for (i, _) in functors.iter().enumerate() {
        builder.add_object(i);
    }
    let natural = |s: &FunctorData, t: &FunctorData, comps: &[Arr]| {
        d.arrows().all(|a| {
            let (dd, dc) = (d.dom(a), d.cod(a));
            x.compose(comps[dc.0], s.arr(a)) == x.compose(t.arr(a), comps[dd.0])
        })
    };
    let mut transf_keys: Vec<(usize, usize, Vec<Arr>)> = Vec::new();
    for (si, s) in functors.iter().enumerate() {
        for (ti, t) in functors.iter().enumerate() {
            let mut stack: Vec<Vec<Arr>> = vec![vec![]];
            for ob in d.objects() {
                let mut next = Vec::new();
                for partial in &stack {
                    for &c in x.hom(s.ob(ob), t.ob(ob)) {
                        let mut p = partial.clone();
                        p.push(c);
                        next.push(p);
                    }
                }
                stack = next;
            }
            for comps in stack {
                if natural(s, t, &comps) {
                    transf_keys.push((si, ti, comps));
                }
            }
        }
    }
    for key in &transf_keys {
        builder.add_arrow(key.clone(), key.0, key.1);
    }
    for (i, f) in functors.iter().enumerate() {
        let idc: Vec<Arr> = d.objects().map(|o| x.id(f.ob(o))).collect();
        builder.set_identity(i, (i, i, idc));
    }
    let built = builder
        .build(|g, f| {
            let comps: Vec<Arr> = g
                .2
                .iter()
                .zip(&f.2)
                .map(|(&gc, &fc)| x.compose(gc, fc).unwrap())
                .collect();
            (f.0, g.1, comps)
        })
        .expect("functor category is a category");
    let transfs = built.arr_key.iter().map(|k| k.2.clone()).collect();
    Some(DiagramData { cat: built.cat, functors, transfs })
}

/// The diagram fibration `P^(D)`: pullback of `P^D` along the diagonal.
/// Also checks that `P^D` is itself a fibration over `B^D`.
pub struct DiagramFibration {
    pub fib: Arc<FibrationData>,
    pub pd_is_fibration: bool,
}

pub fn diagram_fibration(
    p: &Arc<FibrationData>,
    d: &Arc<FinCat>,
    cap: usize,
) -> Option<DiagramFibration> {
    let xd = functor_category(d, p.total(), cap)?;
    let bd = functor_category(d, p.base(), cap)?;
    // P^D : X^D -> B^D by postcomposition.
    let find_b_functor = |f: &FunctorData| -> Obj {
        let composed = FunctorData::compose(p.proj(), f);
        Obj(bd.functors.iter().position(|g| *g == composed).expect("postcomposite enumerated"))
    };
    let obj_map: Vec<Obj> = xd.functors.iter().map(find_b_functor).collect();
    let arr_map: Vec<Arr> = xd
        .transfs
        .iter()
        .enumerate()
        .map(|(i, comps)| {
            let (sd, td) = (xd.cat.dom(Arr(i)), xd.cat.cod(Arr(i)));
            let proj_comps: Vec<Arr> = comps.iter().map(|&c| p.over(c)).collect();
            let (want_dom, want_cod) = (obj_map[sd.0], obj_map[td.0]);
            bd.cat
                .arrows()
                .find(|&a| {
                    bd.cat.dom(a) == want_dom
                        && bd.cat.cod(a) == want_cod
                        && bd.transfs[a.0] == proj_comps
                })
                .expect("projected transformation enumerated")
        })
        .collect();
    let pd = FunctorData { source: xd.cat.clone(), target: bd.cat.clone(), obj_map, arr_map };
    pd.validate().expect("postcomposition is a functor");
    let pd_fib = FibrationData::new(pd.clone()).expect("P^D projects");
    let pd_is_fibration = pd_fib.is_fibration();

    // Diagonal Δ_D : B -> B^D.
    let delta_obj: Vec<Obj> = p
        .base()
        .objects()
        .map(|i| {
            let constant = FunctorData {
                source: d.clone(),
                target: p.base().clone(),
                obj_map: vec![i; d.n_objects()],
                arr_map: vec![p.base().id(i); d.n_arrows()],
            };
            Obj(bd.functors.iter().position(|g| *g == constant).expect("constant enumerated"))
        })
        .collect();
    let delta_arr: Vec<Arr> = p
        .base()
        .arrows()
        .map(|u| {
            let comps = vec![u; d.n_objects()];
            bd.cat
                .arrows()
                .find(|&a| {
                    bd.cat.dom(a) == delta_obj[p.base().dom(u).0]
                        && bd.cat.cod(a) == delta_obj[p.base().cod(u).0]
                        && bd.transfs[a.0] == comps
                })
                .expect("constant transformation enumerated")
        })
        .collect();
    let delta = FunctorData {
        source: p.base().clone(),
        target: bd.cat.clone(),
        obj_map: delta_obj,
        arr_map: delta_arr,
    };
    delta.validate().expect("diagonal is a functor");
    let pb = pullback_of_categories(&delta, &pd);
    let fib = Arc::new(FibrationData::new(pb.to_left).expect("diagram fibration projects"));
    if p.is_fibration() {
        assert!(fib.is_fibration(), "P^(D) is a fibration");
    }
    Some(DiagramFibration { fib, pd_is_fibration })
}
