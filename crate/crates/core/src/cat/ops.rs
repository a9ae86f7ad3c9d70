use std::sync::Arc;

use thiserror::Error;

use super::builder::CatBuilder;
use super::fincat::{Arr, FinCat, Obj};
use super::mappings::FunctorData;

/// Dom/cod swapped, composition transposed. Ids are reused as-is, so the
/// operation is a bit-exact involution.
pub fn opposite_category(c: &FinCat) -> FinCat {
    let entries: Vec<((Arr, Arr), Arr)> = c
        .composable_pairs()
        .map(|(g, f)| ((f, g), c.compose(g, f).unwrap()))
        .collect();
    FinCat::from_parts(
        c.n_objects(),
        c.arrows().map(|a| c.cod(a)).collect(),
        c.arrows().map(|a| c.dom(a)).collect(),
        c.objects().map(|x| c.id(x)).collect(),
        &entries,
    )
    .expect("opposite of a category is a category")
}

/// Transports a functor to the opposite categories (same tables).
pub fn opposite_functor(f: &FunctorData) -> FunctorData {
    FunctorData {
        source: Arc::new(opposite_category(&f.source)),
        target: Arc::new(opposite_category(&f.target)),
        obj_map: f.obj_map.clone(),
        arr_map: f.arr_map.clone(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DerivedCatError {
    #[error("bad arguments for construction: {0}")]
    BadArgs(String),
}

/// A derived category together with its canonical projections.
#[derive(Clone, Debug)]
pub struct DerivedCat {
    pub cat: Arc<FinCat>,
    pub projections: Vec<FunctorData>,
}

/// Product category `A × B` with both projections.
pub fn product_category(a: &Arc<FinCat>, b: &Arc<FinCat>) -> DerivedCat {
    let mut builder = CatBuilder::new();
    for x in a.objects() {
        for y in b.objects() {
            builder.add_object((x, y));
        }
    }
    for f in a.arrows() {
        for g in b.arrows() {
            builder.add_arrow((f, g), (a.dom(f), b.dom(g)), (a.cod(f), b.cod(g)));
        }
    }
    for x in a.objects() {
        for y in b.objects() {
            builder.set_identity((x, y), (a.id(x), b.id(y)));
        }
    }
    let built = builder
        .build(|&(g1, g2), &(f1, f2)| (a.compose(g1, f1).unwrap(), b.compose(g2, f2).unwrap()))
        .expect("product of categories is a category");
    let proj = |side: usize| FunctorData {
        source: built.cat.clone(),
        target: if side == 0 { a.clone() } else { b.clone() },
        obj_map: built.obj_key.iter().map(|&(x, y)| if side == 0 { x } else { y }).collect(),
        arr_map: built.arr_key.iter().map(|&(f, g)| if side == 0 { f } else { g }).collect(),
    };
    DerivedCat { cat: built.cat.clone(), projections: vec![proj(0), proj(1)] }
}

/// Comma category `F ↓ G` for `F : A -> C <- B : G`, with projections to
/// `A` and `B`. Objects are `(a, b, m : F a -> G b)`.
pub fn comma_category(f: &FunctorData, g: &FunctorData) -> Result<DerivedCat, DerivedCatError> {
    if *f.target != *g.target {
        return Err(DerivedCatError::BadArgs("comma functors must share a target".into()));
    }
    let (a, b, c) = (&f.source, &g.source, &f.target);
    let mut builder = CatBuilder::new();
    for x in a.objects() {
        for y in b.objects() {
            for &m in c.hom(f.ob(x), g.ob(y)) {
                builder.add_object((x, y, m));
            }
        }
    }
    // Arrows (u, v) : (x, y, m) -> (x', y', m') with m' ∘ F u = G v ∘ m.
    let objects: Vec<(Obj, Obj, Arr)> = {
        let mut v = Vec::new();
        for x in a.objects() {
            for y in b.objects() {
                for &m in c.hom(f.ob(x), g.ob(y)) {
                    v.push((x, y, m));
                }
            }
        }
        v
    };
    for &(x, y, m) in &objects {
        for &(x2, y2, m2) in &objects {
            for &u in a.hom(x, x2) {
                for &v in b.hom(y, y2) {
                    if c.compose(m2, f.arr(u)) == c.compose(g.arr(v), m) {
                        builder.add_arrow(((x, y, m), (x2, y2, m2), u, v), (x, y, m), (x2, y2, m2));
                    }
                }
            }
        }
    }
    for &(x, y, m) in &objects {
        builder.set_identity((x, y, m), ((x, y, m), (x, y, m), a.id(x), b.id(y)));
    }
    let built = builder
        .build(|&(_, codk, u2, v2), &(domk, _, u1, v1)| {
            (domk, codk, a.compose(u2, u1).unwrap(), b.compose(v2, v1).unwrap_or_else(|| panic!("non-composable")))
        })
        .map_err(|e| DerivedCatError::BadArgs(format!("comma construction failed validation: {e:?}")))?;
    let proj_a = FunctorData {
        source: built.cat.clone(),
        target: a.clone(),
        obj_map: built.obj_key.iter().map(|&(x, _, _)| x).collect(),
        arr_map: built.arr_key.iter().map(|&(_, _, u, _)| u).collect(),
    };
    let proj_b = FunctorData {
        source: built.cat.clone(),
        target: b.clone(),
        obj_map: built.obj_key.iter().map(|&(_, y, _)| y).collect(),
        arr_map: built.arr_key.iter().map(|&(_, _, _, v)| v).collect(),
    };
    Ok(DerivedCat { cat: built.cat, projections: vec![proj_a, proj_b] })
}

/// The arrow category `C^2` with domain and codomain projections.
pub fn arrow_category(c: &Arc<FinCat>) -> DerivedCat {
    let idf = FunctorData::identity(c);
    let mut derived = comma_category(&idf, &idf).expect("arrow category");
    // Objects of the comma are (x, y, m); rebuild projections as dom/cod.
    derived.projections.truncate(2);
    derived
}

/// Slice `C / c`: objects are arrows into `c`, the projection is ∂0.
pub fn slice_category(c: &Arc<FinCat>, at: Obj) -> Result<DerivedCat, DerivedCatError> {
    if at.0 >= c.n_objects() {
        return Err(DerivedCatError::BadArgs(format!("no object {} to slice at", at.0)));
    }
    let mut builder = CatBuilder::new();
    for a in c.arrows_to(at) {
        builder.add_object(a);
        builder.set_identity(a, (a, a, c.id(c.dom(a))));
    }
    for a in c.arrows_to(at) {
        for b in c.arrows_to(at) {
            for &u in c.hom(c.dom(a), c.dom(b)) {
                if c.compose(b, u) == Some(a) {
                    builder.add_arrow((a, b, u), a, b);
                }
            }
        }
    }
    let built = builder
        .build(|&(_, codk, u2), &(domk, _, u1)| (domk, codk, c.compose(u2, u1).unwrap()))
        .expect("slice of a category is a category");
    let proj = FunctorData {
        source: built.cat.clone(),
        target: c.clone(),
        obj_map: built.obj_key.iter().map(|&a| c.dom(a)).collect(),
        arr_map: built.arr_key.iter().map(|&(_, _, u)| u).collect(),
    };
    Ok(DerivedCat { cat: built.cat, projections: vec![proj] })
}

/// Coslice `c / C`, projection ∂1.
pub fn coslice_category(c: &Arc<FinCat>, at: Obj) -> Result<DerivedCat, DerivedCatError> {
    if at.0 >= c.n_objects() {
        return Err(DerivedCatError::BadArgs(format!("no object {} to coslice at", at.0)));
    }
    let mut builder = CatBuilder::new();
    for a in c.arrows_from(at) {
        builder.add_object(a);
        builder.set_identity(a, (a, a, c.id(c.cod(a))));
    }
    for a in c.arrows_from(at) {
        for b in c.arrows_from(at) {
            for &u in c.hom(c.cod(a), c.cod(b)) {
                if c.compose(u, a) == Some(b) {
                    builder.add_arrow((a, b, u), a, b);
                }
            }
        }
    }
    let built = builder
        .build(|&(_, codk, u2), &(domk, _, u1)| (domk, codk, c.compose(u2, u1).unwrap()))
        .expect("coslice of a category is a category");
    let proj = FunctorData {
        source: built.cat.clone(),
        target: c.clone(),
        obj_map: built.obj_key.iter().map(|&a| c.cod(a)).collect(),
        arr_map: built.arr_key.iter().map(|&(_, _, u)| u).collect(),
    };
    Ok(DerivedCat { cat: built.cat, projections: vec![proj] })
}

/// Discrete category on `n` objects.
pub fn discrete_category(n: usize) -> FinCat {
    FinCat::from_parts(
        n,
        (0..n).map(Obj).collect(),
        (0..n).map(Obj).collect(),
        (0..n).map(Arr).collect(),
        &(0..n).map(|i| ((Arr(i), Arr(i)), Arr(i))).collect::<Vec<_>>(),
    )
    .expect("discrete category is lawful")
}

/// Strict pullback of categories: objects and arrows are the pairs
/// agreeing in the target, with both projections and the pair keys.
pub struct CatPullback {
    pub cat: Arc<FinCat>,
    pub to_left: FunctorData,
    pub to_right: FunctorData,
    /// (left object, right object) per pullback object, ascending
    pub obj_pairs: Vec<(Obj, Obj)>,
    /// (left arrow, right arrow) per pullback arrow
    pub arr_pairs: Vec<(Arr, Arr)>,
}

impl CatPullback {
    pub fn obj_of_pair(&self, x: Obj, y: Obj) -> Option<Obj> {
        self.obj_pairs.binary_search(&(x, y)).ok().map(Obj)
    }

    pub fn arr_of_pair(&self, p: Arr, q: Arr) -> Option<Arr> {
        self.arr_pairs.iter().position(|&pr| pr == (p, q)).map(Arr)
    }
}

pub fn pullback_of_categories(f: &FunctorData, g: &FunctorData) -> CatPullback {
    assert_eq!(*f.target, *g.target, "pullback functors must share a target");
    let (a, b) = (&f.source, &g.source);
    let mut builder = CatBuilder::new();
    for x in a.objects() {
        for y in b.objects() {
            if f.ob(x) == g.ob(y) {
                builder.add_object((x, y));
                builder.set_identity((x, y), (a.id(x), b.id(y)));
            }
        }
    }
    for p in a.arrows() {
        for q in b.arrows() {
            if f.arr(p) == g.arr(q) {
                builder.add_arrow((p, q), (a.dom(p), b.dom(q)), (a.cod(p), b.cod(q)));
            }
        }
    }
    let built = builder
        .build(|&(p2, q2), &(p1, q1)| (a.compose(p2, p1).unwrap(), b.compose(q2, q1).unwrap()))
        .expect("pullback of categories is a category");
    let to_left = FunctorData {
        source: built.cat.clone(),
        target: a.clone(),
        obj_map: built.obj_key.iter().map(|&(x, _)| x).collect(),
        arr_map: built.arr_key.iter().map(|&(p, _)| p).collect(),
    };
    let to_right = FunctorData {
        source: built.cat.clone(),
        target: b.clone(),
        obj_map: built.obj_key.iter().map(|&(_, y)| y).collect(),
        arr_map: built.arr_key.iter().map(|&(_, q)| q).collect(),
    };
    CatPullback { cat: built.cat, to_left, to_right, obj_pairs: built.obj_key, arr_pairs: built.arr_key }
}

/// Karoubi envelope: objects are the idempotents, homs are the arrows
/// absorbed by them on both sides. Returns the full and faithful inclusion.
pub fn split_idempotents(c: &Arc<FinCat>) -> (Arc<FinCat>, FunctorData) {
    let idempotents: Vec<Arr> =
        c.arrows().filter(|&e| c.compose(e, e) == Some(e)).collect();
    let mut builder = CatBuilder::new();
    for &e in &idempotents {
        builder.add_object(e);
        builder.set_identity(e, (e, e, e));
    }
    for &e in &idempotents {
        for &e2 in &idempotents {
            for &f in c.hom(c.dom(e), c.dom(e2)) {
                // f : e -> e2 in the envelope iff e2 ∘ f ∘ e = f.
                if c.compose_path(&[e, f, e2]) == Some(f) {
                    builder.add_arrow((e, e2, f), e, e2);
                }
            }
        }
    }
    let built = builder
        .build(|&(_, codk, f2), &(domk, _, f1)| (domk, codk, c.compose(f2, f1).unwrap()))
        .expect("Karoubi envelope is a category");
    let inclusion = FunctorData {
        source: c.clone(),
        target: built.cat.clone(),
        obj_map: c.objects().map(|x| built.obj_ix[&c.id(x)]).collect(),
        arr_map: c
            .arrows()
            .map(|f| built.arr_ix[&(c.id(c.dom(f)), c.id(c.cod(f)), f)])
            .collect(),
    };
    (built.cat, inclusion)
}

/// Checks that every idempotent of `c` splits: `e = s ∘ r` with `r ∘ s = id`.
pub fn all_idempotents_split(c: &FinCat) -> bool {
    c.arrows()
        .filter(|&e| c.compose(e, e) == Some(e))
        .all(|e| {
            c.objects().any(|w| {
                c.hom(c.dom(e), w).iter().any(|&r| {
                    c.hom(w, c.dom(e)).iter().any(|&s| {
                        c.compose(s, r) == Some(e) && c.compose(r, s) == Some(c.id(w))
                    })
                })
            })
        })
}
