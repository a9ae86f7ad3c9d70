use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cat::{Arr, CatBuilder, FunctorData, Obj};
use crate::fib::{fibre, Cleavage, FibrationData};

use super::fibhom::{cartesian_functor_category, CartFunctorCat};
use super::indexed::{grothendieck, Grothendieck, IndexedCat};
use super::underline::{sigma, underline, Underline};

/// The right adjoint splitting `Sp(P)`: fibres are the enumerated
/// categories of cartesian functors `Ī -> P`, reindexing is precomposition
/// with `Σ_u`. The counit `E_P` evaluates at `id_I`.
pub struct RightSplitting {
    pub indexed: IndexedCat,
    pub groth: Grothendieck,
    /// evaluation functor U(Sp(P)) -> P over the base
    pub counit: FunctorData,
    pub fibre_sizes: Vec<usize>,
}

pub fn split_right(p: &Arc<FibrationData>, cap: usize) -> Option<RightSplitting> {
    assert!(p.is_fibration());
    let b = p.base().clone();
    let underlines: Vec<Underline> = b.objects().map(|i| underline(&b, i)).collect();
    let homs: Vec<CartFunctorCat> = b
        .objects()
        .map(|i| {
            cartesian_functor_category(
                &underlines[i.0].fib,
                p,
                &FunctorData::identity(&b),
                cap,
            )
        })
        .collect::<Option<_>>()?;
    let reindex: Vec<FunctorData> = b
        .arrows()
        .map(|u| {
            let (j, i) = (b.dom(u), b.cod(u));
            let w = sigma(&b, u, &underlines[j.0], &underlines[i.0]);
            let obj_map: Vec<Obj> = homs[i.0]
                .functors
                .iter()
                .map(|f| {
                    homs[j.0]
                        .functor_index(&FunctorData::compose(f, &w))
                        .expect("precomposite is again a cartesian functor")
                })
                .collect();
            let arr_map: Vec<Arr> = homs[i.0]
                .cat
                .arrows()
                .map(|t| {
                    let comps: Vec<Arr> = underlines[j.0]
                        .objs
                        .iter()
                        .enumerate()
                        .map(|(k, _)| homs[i.0].transfs[t.0][w.ob(Obj(k)).0])
                        .collect();
                    let dom = obj_map[homs[i.0].cat.dom(t).0];
                    let cod = obj_map[homs[i.0].cat.cod(t).0];
                    homs[j.0]
                        .transf_index(dom, cod, &comps)
                        .expect("whiskered transformation enumerated")
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
    indexed.validate().expect("Sp(P) is strictly functorial");
    let groth = grothendieck(&indexed).expect("Sp(P) assembles");

    // Counit: (I, F) ↦ F(id_I); (u, τ) ↦ F(u → id_I) ∘ τ_{id_J}.
    let obj_map: Vec<Obj> = groth
        .obj_key
        .iter()
        .map(|&(i, fx)| {
            let f = &homs[i.0].functors[fx.0];
            f.ob(underlines[i.0].obj_ix[&b.id(i)])
        })
        .collect();
    let arr_map: Vec<Arr> = groth
        .arr_key
        .iter()
        .map(|&((j, gy), (i, fx), u, tau)| {
            let f = &homs[i.0].functors[fx.0];
            let _ = gy;
            let spine = underlines[i.0].arr_ix[&(u, b.id(i), u)];
            let tau_comp = homs[j.0].transfs[tau.0][underlines[j.0].obj_ix[&b.id(j)].0];
            p.total()
                .compose(f.arr(spine), tau_comp)
                .expect("counit composite")
        })
        .collect();
    let counit = FunctorData {
        source: groth.fib.total().clone(),
        target: p.total().clone(),
        obj_map,
        arr_map,
    };
    counit.validate().expect("E_P is a functor");
    let fibre_sizes = homs.iter().map(|h| h.functors.len()).collect();
    Some(RightSplitting { indexed, groth, counit, fibre_sizes })
}

/// The left adjoint splitting `L(P)` from a normalized cleavage: fibre
/// objects over `I` are pairs `(a : I -> P(X), X)`, morphisms are vertical
/// arrows between the reindexed objects. The unit `H_P` sends `X` to
/// `(id_{P(X)}, X)`.
pub struct LeftSplitting {
    pub indexed: IndexedCat,
    pub groth: Grothendieck,
    /// unit functor P -> U(L(P)) over the base
    pub unit: FunctorData,
    /// per base object: the (a, X) pairs naming the fibre objects
    pub fibre_objs: Vec<Vec<(Arr, Obj)>>,
}

pub fn split_left(p: &Arc<FibrationData>, cl: &Cleavage) -> LeftSplitting {
    assert!(cl.is_normalized(), "the left splitting needs a normalized cleavage");
    let b = p.base().clone();
    let total = p.total().clone();

    // Cart_L(u, (a,X)) : (au)*X -> a*X, the unique cartesian arrow over u
    // with Cart(a,X) ∘ it = Cart(au, X).
    let cart_l = |u: Arr, a: Arr, x: Obj| -> Arr {
        let au = b.compose(a, u).expect("composable");
        p.factor_through(cl.cart(a, x), cl.cart(au, x), u)
            .expect("relative lift exists")
    };

    let mut fibre_objs: Vec<Vec<(Arr, Obj)>> = Vec::new();
    let mut fibres: Vec<Arc<crate::cat::FinCat>> = Vec::new();
    let mut fibre_maps: Vec<(BTreeMap<(Arr, Obj), Obj>, BTreeMap<((Arr, Obj), (Arr, Obj), Arr), Arr>)> =
        Vec::new();
    for i in b.objects() {
        let mut builder = CatBuilder::new();
        let mut objs = Vec::new();
        for x in total.objects() {
            for &a in b.hom(i, p.base_of(x)) {
                builder.add_object((a, x));
                objs.push((a, x));
            }
        }
        objs.sort_unstable(); // fibre ids are assigned in sorted key order
        for &(bb, y) in &objs {
            for &(a, x) in &objs {
                let src = cl.reindex_obj(bb, y);
                let dst = cl.reindex_obj(a, x);
                for &alpha in total.hom(src, dst) {
                    if p.is_vertical(alpha) {
                        builder.add_arrow(((bb, y), (a, x), alpha), (bb, y), (a, x));
                    }
                }
            }
        }
        for &(a, x) in &objs {
            builder.set_identity((a, x), ((a, x), (a, x), total.id(cl.reindex_obj(a, x))));
        }
        let built = builder
            .build(|&(_, gc, al2), &(fd, _, al1)| (fd, gc, total.compose(al2, al1).unwrap()))
            .expect("L(P) fibre is a category");
        fibre_objs.push(objs);
        fibres.push(built.cat);
        fibre_maps.push((built.obj_ix, built.arr_ix));
    }
    let reindex: Vec<FunctorData> = b
        .arrows()
        .map(|u| {
            let (j, i) = (b.dom(u), b.cod(u));
            let obj_map: Vec<Obj> = fibre_objs[i.0]
                .iter()
                .map(|&(a, x)| fibre_maps[j.0].0[&(b.compose(a, u).unwrap(), x)])
                .collect();
            let arr_map: Vec<Arr> = fibres[i.0]
                .arrows()
                .map(|m| {
                    // recover the key of m in fibre i
                    let ((bb, y), (a, x), alpha) = *fibre_maps[i.0]
                        .1
                        .iter()
                        .find(|(_, &v)| v == m)
                        .map(|(k, _)| k)
                        .expect("fibre arrow key");
                    let lab = cart_l(u, a, x);
                    let lbb = cart_l(u, bb, y);
                    let theta = total.compose(alpha, lbb).expect("composable");
                    let img = p
                        .vertical_factor_through(lab, theta)
                        .expect("unique vertical square filler");
                    fibre_maps[j.0].1[&((b.compose(bb, u).unwrap(), y), (b.compose(a, u).unwrap(), x), img)]
                })
                .collect();
            FunctorData {
                source: fibres[i.0].clone(),
                target: fibres[j.0].clone(),
                obj_map,
                arr_map,
            }
        })
        .collect();
    let indexed = IndexedCat { base: b.clone(), fibres, reindex };
    indexed.validate().expect("L(P) is strictly functorial");
    let groth = grothendieck(&indexed).expect("L(P) assembles");

    // Unit H_P : X ↦ (id_{P(X)}, X); f : Y -> X over u ↦ (u, α_f) with
    // α_f the vertical factor of f through Cart(u, X).
    let obj_map: Vec<Obj> = total
        .objects()
        .map(|x| {
            let i = p.base_of(x);
            let local = fibre_maps[i.0].0[&(b.id(i), x)];
            groth.obj_ix[&(i, local)]
        })
        .collect();
    let arr_map: Vec<Arr> = total
        .arrows()
        .map(|f| {
            let u = p.over(f);
            let (j, i) = (b.dom(u), b.cod(u));
            let x = total.cod(f);
            let y = total.dom(f);
            // α_f : Y -> u*X, vertical (Cart(id∘u, X) = Cart(u, X) by
            // normalization).
            let alpha = p
                .vertical_factor_through(cl.cart(u, x), f)
                .expect("vertical factor");
            let dom_local = fibre_maps[j.0].0[&(b.id(j), y)];
            let cod_local = fibre_maps[i.0].0[&(b.id(i), x)];
            let arr_local = fibre_maps[j.0].1[&((b.id(j), y), (u, x), alpha)];
            groth.arr_ix[&((j, dom_local), (i, cod_local), u, arr_local)]
        })
        .collect();
    let unit = FunctorData {
        source: total.clone(),
        target: groth.fib.total().clone(),
        obj_map,
        arr_map,
    };
    unit.validate().expect("H_P is a functor");
    LeftSplitting { indexed, groth, unit, fibre_objs }
}

/// Fibrewise equivalence check for a functor `e` over the identity base:
/// full, faithful and essentially surjective on every fibre.
pub fn fibrewise_equivalence(
    e: &FunctorData,
    src: &Arc<FibrationData>,
    dst: &Arc<FibrationData>,
) -> bool {
    let b = dst.base();
    for i in b.objects() {
        let sf = fibre(src, i);
        let df = fibre(dst, i);
        // essential surjectivity
        for &y in &df.objs {
            let hit = sf.objs.iter().any(|&x| {
                let ex = e.ob(x);
                dst.total()
                    .hom(ex, y)
                    .iter()
                    .any(|&h| dst.total().is_iso(h) && dst.is_vertical(h))
            });
            if !hit {
                return false;
            }
        }
        // full and faithful on verticals
        for &x in &sf.objs {
            for &x2 in &sf.objs {
                let pre: Vec<Arr> = sf
                    .arrs
                    .iter()
                    .copied()
                    .filter(|&a| src.total().dom(a) == x && src.total().cod(a) == x2)
                    .collect();
                let post: Vec<Arr> = df
                    .arrs
                    .iter()
                    .copied()
                    .filter(|&a| {
                        dst.total().dom(a) == e.ob(x) && dst.total().cod(a) == e.ob(x2)
                    })
                    .collect();
                let mut images: Vec<Arr> = pre.iter().map(|&a| e.arr(a)).collect();
                images.sort_unstable();
                images.dedup();
                if images.len() != pre.len() || images.len() != post.len() {
                    return false;
                }
            }
        }
    }
    true
}
