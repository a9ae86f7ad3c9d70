use std::sync::Arc;

use thiserror::Error;

use crate::cat::{Arr, CatBuilder, FinCat, FunctorData, Obj};
use crate::fib::{Cleavage, FibError, FibrationData, SplitVerdict};

/// A strict functor `B^op -> Cat` as explicit tables: one fibre per base
/// object, one reindexing functor per base arrow.
#[derive(Clone, Debug, PartialEq)]
pub struct IndexedCat {
    pub base: Arc<FinCat>,
    pub fibres: Vec<Arc<FinCat>>,
    /// For `u : J -> I`, `reindex[u] : fibres[I] -> fibres[J]`.
    pub reindex: Vec<FunctorData>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum IndexedCatError {
    #[error("table arity does not match the base category")]
    WrongArity,
    #[error("reindexing along arrow {arrow} is not a functor between the stated fibres")]
    BadReindexing { arrow: usize },
    #[error("strict functoriality fails: reindex(id_{object}) is not the identity")]
    IdentityNotStrict { object: usize },
    #[error("strict functoriality fails on the composable pair ({u},{v})")]
    CompositionNotStrict { u: usize, v: usize },
}

impl IndexedCat {
    /// Checks strict functoriality bit-exactly.
    pub fn validate(&self) -> Result<(), IndexedCatError> {
        if self.fibres.len() != self.base.n_objects() || self.reindex.len() != self.base.n_arrows() {
            return Err(IndexedCatError::WrongArity);
        }
        for u in self.base.arrows() {
            let r = &self.reindex[u.0];
            if *r.source != *self.fibres[self.base.cod(u).0]
                || *r.target != *self.fibres[self.base.dom(u).0]
                || r.validate().is_err()
            {
                return Err(IndexedCatError::BadReindexing { arrow: u.0 });
            }
        }
        for x in self.base.objects() {
            if !self.reindex[self.base.id(x).0].is_identity() {
                return Err(IndexedCatError::IdentityNotStrict { object: x.0 });
            }
        }
        for u in self.base.arrows() {
            for v in self.base.arrows() {
                if self.base.dom(u) != self.base.cod(v) {
                    continue;
                }
                let uv = self.base.compose(u, v).unwrap();
                let composite = FunctorData::compose(&self.reindex[v.0], &self.reindex[u.0]);
                if composite != self.reindex[uv.0] {
                    return Err(IndexedCatError::CompositionNotStrict { u: u.0, v: v.0 });
                }
            }
        }
        Ok(())
    }
}

/// The total category of the Grothendieck construction, with the keys that
/// name its objects and arrows.
pub struct Grothendieck {
    pub fib: Arc<FibrationData>,
    pub cleavage: Cleavage,
    /// (base object, fibre object) per total object
    pub obj_key: Vec<(Obj, Obj)>,
    /// (dom pair, cod pair, base arrow u, fibre arrow α : Y -> H(u)(X))
    pub arr_key: Vec<((Obj, Obj), (Obj, Obj), Arr, Arr)>,
    pub obj_ix: std::collections::BTreeMap<(Obj, Obj), Obj>,
    pub arr_ix: std::collections::BTreeMap<((Obj, Obj), (Obj, Obj), Arr, Arr), Arr>,
}

/// Builds `∫H`: objects are pairs `(I, X)`, a morphism `(J,Y) -> (I,X)` is
/// a pair `(u, α)` with `u : J -> I` and `α : Y -> H(u)(X)`, composed as
/// `(u, α) ∘ (v, β) = (u∘v, H(v)(α) ∘ β)`. Comes with its canonical split
/// cleavage `Cart(u, (I,X)) = (u, id)`.
pub fn grothendieck(h: &IndexedCat) -> Result<Grothendieck, IndexedCatError> {
    h.validate()?;
    let base = &h.base;
    let mut builder = CatBuilder::new();
    for i in base.objects() {
        for x in h.fibres[i.0].objects() {
            builder.add_object((i, x));
        }
    }
    for u in base.arrows() {
        let (j, i) = (base.dom(u), base.cod(u));
        let r = &h.reindex[u.0];
        for x in h.fibres[i.0].objects() {
            for y in h.fibres[j.0].objects() {
                for &alpha in h.fibres[j.0].hom(y, r.ob(x)) {
                    builder.add_arrow(((j, y), (i, x), u, alpha), (j, y), (i, x));
                }
            }
        }
    }
    for i in base.objects() {
        for x in h.fibres[i.0].objects() {
            builder.set_identity((i, x), ((i, x), (i, x), base.id(i), h.fibres[i.0].id(x)));
        }
    }
    let built = builder
        .build(|&(gd, gc, u, alpha), &(fd, _fc, v, beta)| {
            // g = (u, α) : (J,Y) -> (I,X), f = (v, β) : (K,Z) -> (J,Y).
            let uv = base.compose(u, v).unwrap();
            let rv = &h.reindex[v.0];
            let k_fibre = &h.fibres[base.dom(v).0];
            let comp = k_fibre.compose(rv.arr(alpha), beta).unwrap();
            let _ = (gd, gc);
            (fd, gc, uv, comp)
        })
        .expect("the Grothendieck construction yields a category");

    let proj = FunctorData {
        source: built.cat.clone(),
        target: base.clone(),
        obj_map: built.obj_key.iter().map(|&(i, _)| i).collect(),
        arr_map: built.arr_key.iter().map(|&(_, _, u, _)| u).collect(),
    };
    let fib = Arc::new(FibrationData::new(proj).expect("projection of ∫H is a functor"));
    assert!(fib.is_fibration(), "∫H of a strict functor is a fibration");
    let mut table = std::collections::BTreeMap::new();
    for u in base.arrows() {
        let (j, i) = (base.dom(u), base.cod(u));
        let r = &h.reindex[u.0];
        for x in h.fibres[i.0].objects() {
            let cart_key = ((j, r.ob(x)), (i, x), u, h.fibres[j.0].id(r.ob(x)));
            let total_obj = built.obj_ix[&(i, x)];
            table.insert((u, total_obj), built.arr_ix[&cart_key]);
        }
    }
    let cleavage = Cleavage::from_table(&fib, table);
    assert_eq!(cleavage.check_split(), SplitVerdict::Split, "canonical cleavage of ∫H is split");
    Ok(Grothendieck {
        fib,
        cleavage,
        obj_key: built.obj_key,
        arr_key: built.arr_key,
        obj_ix: built.obj_ix,
        arr_ix: built.arr_ix,
    })
}

/// Reads a split fibration back as a strict functor `B^op -> Cat`.
pub fn to_indexed(p: &Arc<FibrationData>, cl: &Cleavage) -> Result<IndexedCat, FibError> {
    if cl.check_split() != SplitVerdict::Split {
        return Err(FibError::CleavageNotSplit(format!("{:?}", cl.check_split())));
    }
    let base = p.base().clone();
    let fibres: Vec<Arc<FinCat>> = base.objects().map(|i| crate::fib::fibre(p, i).cat.clone()).collect();
    let reindex: Vec<FunctorData> = base.arrows().map(|u| cl.reindexing_functor(u).0).collect();
    let h = IndexedCat { base, fibres, reindex };
    h.validate().expect("split cleavage induces a strict functor");
    Ok(h)
}

/// The canonical comparison `∫(to_indexed(P)) -> P`: an isomorphism of
/// total categories over the base.
pub fn roundtrip_iso(p: &Arc<FibrationData>, cl: &Cleavage) -> Result<FunctorData, FibError> {
    let h = to_indexed(p, cl)?;
    let g = grothendieck(&h).expect("induced indexed category is strict");
    let fibres: Vec<crate::fib::Fibre> =
        p.base().objects().map(|i| crate::fib::fibre(p, i)).collect();
    let obj_map: Vec<Obj> = g
        .obj_key
        .iter()
        .map(|&(i, xl)| fibres[i.0].objs[xl.0])
        .collect();
    let arr_map: Vec<Arr> = g
        .arr_key
        .iter()
        .map(|&((j, _), (i, x), u, alpha)| {
            let x_total = fibres[i.0].objs[x.0];
            let alpha_total = fibres[j.0].arrs[alpha.0];
            p.total()
                .compose(cl.cart(u, x_total), alpha_total)
                .expect("cartesian lift composes with the vertical part")
        })
        .collect();
    let iso = FunctorData { source: g.fib.total().clone(), target: p.total().clone(), obj_map, arr_map };
    iso.validate().expect("round-trip comparison is a functor");
    // It is bijective on objects and arrows, and commutes with the
    // projections on the nose.
    let mut seen_o = vec![false; p.total().n_objects()];
    for o in &iso.obj_map {
        assert!(!std::mem::replace(&mut seen_o[o.0], true), "object comparison is injective");
    }
    let mut seen_a = vec![false; p.total().n_arrows()];
    for a in &iso.arr_map {
        assert!(!std::mem::replace(&mut seen_a[a.0], true), "arrow comparison is injective");
    }
    assert!(seen_o.iter().all(|&b| b) && seen_a.iter().all(|&b| b));
    assert_eq!(
        FunctorData::compose(p.proj(), &iso),
        g.fib.proj().clone(),
        "comparison commutes with the projections"
    );
    Ok(iso)
}
