use std::sync::Arc;

use thiserror::Error;

use crate::cat::{
    find_limit, is_pullback_square, Arr, CatBuilder, FinCat, FunctorData, LimitResult, LimitShape,
    Obj,
};
use crate::fib::FibrationData;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FundamentalError {
    #[error("base lacks the pullback of cospan ({f},{g})")]
    BaseLacksPullbacks { f: usize, g: usize },
}

/// The fundamental fibration `cod : B^2 -> B`, defined when `B` has all
/// pullbacks. Its hypercartesian arrows are verified to be exactly the
/// pullback squares.
pub struct Fundamental {
    pub fib: Arc<FibrationData>,
    /// the commuting square's data per total arrow: (top edge, base edge)
    pub square: Vec<(Arr, Arr)>,
    /// the B-arrow per total object
    pub obj_arrow: Vec<Arr>,
    pub dom_proj: FunctorData,
    pub obj_ix: std::collections::BTreeMap<Arr, Obj>,
    pub arr_ix: std::collections::BTreeMap<(Arr, Arr, Arr, Arr), Arr>,
}

pub fn fundamental_fibration(b: &Arc<FinCat>) -> Result<Fundamental, FundamentalError> {
    for f in b.arrows() {
        for g in b.arrows() {
            if b.cod(f) == b.cod(g) {
                if let LimitResult::Absent { .. } = find_limit(b, LimitShape::Pullback(f, g)) {
                    return Err(FundamentalError::BaseLacksPullbacks { f: f.0, g: g.0 });
                }
            }
        }
    }
    // B^2 built directly: objects keyed by the B-arrow, squares keyed by
    // (dom arrow, cod arrow, top edge, bottom edge).
    let mut builder = CatBuilder::new();
    for m in b.arrows() {
        builder.add_object(m);
        builder.set_identity(m, (m, m, b.id(b.dom(m)), b.id(b.cod(m))));
    }
    for m in b.arrows() {
        for m2 in b.arrows() {
            for &top in b.hom(b.dom(m), b.dom(m2)) {
                for &bottom in b.hom(b.cod(m), b.cod(m2)) {
                    if b.compose(m2, top) == b.compose(bottom, m) {
                        builder.add_arrow((m, m2, top, bottom), m, m2);
                    }
                }
            }
        }
    }
    let built = builder
        .build(|&(_, gc, t2, b2), &(fd, _, t1, b1)| {
            (fd, gc, b.compose(t2, t1).unwrap(), b.compose(b2, b1).unwrap())
        })
        .expect("the arrow category is a category");
    let cod_proj = FunctorData {
        source: built.cat.clone(),
        target: b.clone(),
        obj_map: built.obj_key.iter().map(|&m| b.cod(m)).collect(),
        arr_map: built.arr_key.iter().map(|&(_, _, _, bottom)| bottom).collect(),
    };
    let dom_proj = FunctorData {
        source: built.cat.clone(),
        target: b.clone(),
        obj_map: built.obj_key.iter().map(|&m| b.dom(m)).collect(),
        arr_map: built.arr_key.iter().map(|&(_, _, top, _)| top).collect(),
    };
    let fib = Arc::new(FibrationData::new(cod_proj).expect("cod projection is a functor"));
    assert!(fib.is_fibration(), "cod over a category with pullbacks is a fibration");
    let obj_arrow: Vec<Arr> = built.obj_key.clone();
    let square: Vec<(Arr, Arr)> =
        built.arr_key.iter().map(|&(_, _, top, bottom)| (top, bottom)).collect();
    let obj_ix = built.obj_ix.clone();
    let arr_ix = built.arr_ix.clone();
    let total = fib.total().clone();

    // Paper fact for this construction: hypercartesian iff pullback square.
    for sq in total.arrows() {
        let (top, bottom) = square[sq.0];
        let m_cod = obj_arrow[total.cod(sq).0];
        let m_dom = obj_arrow[total.dom(sq).0];
        let is_pb = is_pullback_square(b, m_cod, bottom, b.dom(m_dom), top, m_dom);
        assert_eq!(
            fib.is_cartesian(sq),
            is_pb,
            "hypercartesian arrows of a fundamental fibration are the pullback squares"
        );
    }
    Ok(Fundamental { fib, square, obj_arrow, dom_proj, obj_ix, arr_ix })
}

/// A category internal to an ambient category: objects/arrows objects,
/// structure maps, and the canonical pullback used by composition.
#[derive(Clone, Debug)]
pub struct InternalCat {
    pub ambient: Arc<FinCat>,
    pub c0: Obj,
    pub c1: Obj,
    pub d0: Arr,
    pub d1: Arr,
    pub i: Arr,
    /// apex of the canonical pullback `C1 ×_{C0} C1` of (d0, d1)
    pub c2: Obj,
    /// projections: p1 to the post-composed factor, p2 to the pre-composed
    pub p1: Arr,
    pub p2: Arr,
    pub m: Arr,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum InternalCatError {
    #[error("structure map {0} has wrong endpoints")]
    IllTyped(&'static str),
    #[error("simplicial identity {0} fails")]
    SimplicialIdentity(&'static str),
    #[error("ambient category lacks the pullback C1 x_{{C0}} C1")]
    MissingPullback,
}

impl InternalCat {
    /// Checks typing, the canonical pullback, and the simplicial identities
    /// that are expressible at this level. Associativity and unit laws are
    /// verified via the externalisation's category laws.
    pub fn validate(&self) -> Result<(), InternalCatError> {
        let c = &self.ambient;
        let chk = |a: Arr, d: Obj, co: Obj, name: &'static str| {
            if c.dom(a) == d && c.cod(a) == co {
                Ok(())
            } else {
                Err(InternalCatError::IllTyped(name))
            }
        };
        chk(self.d0, self.c1, self.c0, "d0")?;
        chk(self.d1, self.c1, self.c0, "d1")?;
        chk(self.i, self.c0, self.c1, "i")?;
        chk(self.p1, self.c2, self.c1, "p1")?;
        chk(self.p2, self.c2, self.c1, "p2")?;
        chk(self.m, self.c2, self.c1, "m")?;
        if c.compose(self.d0, self.i) != Some(c.id(self.c0))
            || c.compose(self.d1, self.i) != Some(c.id(self.c0))
        {
            return Err(InternalCatError::SimplicialIdentity("d∘i = id"));
        }
        if !is_pullback_square(c, self.d0, self.d1, self.c2, self.p1, self.p2) {
            return Err(InternalCatError::MissingPullback);
        }
        // m composes p1 after p2: d1∘m = d1∘p1, d0∘m = d0∘p2.
        if c.compose(self.d1, self.m) != c.compose(self.d1, self.p1) {
            return Err(InternalCatError::SimplicialIdentity("d1∘m = d1∘p1"));
        }
        if c.compose(self.d0, self.m) != c.compose(self.d0, self.p2) {
            return Err(InternalCatError::SimplicialIdentity("d0∘m = d0∘p2"));
        }
        Ok(())
    }

    /// A discrete internal category on an object.
    pub fn discrete(ambient: &Arc<FinCat>, at: Obj) -> InternalCat {
        let id = ambient.id(at);
        InternalCat {
            ambient: ambient.clone(),
            c0: at,
            c1: at,
            d0: id,
            d1: id,
            i: id,
            c2: at,
            p1: id,
            p2: id,
            m: id,
        }
    }

    /// The mediating arrow into the canonical pullback for a cone
    /// `(q1, q2)` with `d0 ∘ q1 = d1 ∘ q2`.
    pub fn pair(&self, q1: Arr, q2: Arr) -> Arr {
        let c = &self.ambient;
        let apex = c.dom(q1);
        c.hom(apex, self.c2)
            .iter()
            .copied()
            .find(|&h| c.compose(self.p1, h) == Some(q1) && c.compose(self.p2, h) == Some(q2))
            .expect("pullback mediates the cone uniquely")
    }

    /// The opposite internal category: swap d0 and d1.
    pub fn opposite(&self) -> InternalCat {
        // The canonical pullback of (d1, d0) and the transposed m.
        let c = &self.ambient;
        let lr = find_limit(c, LimitShape::Pullback(self.d1, self.d0));
        let cone = lr.canonical().expect("ambient still has the transposed pullback").clone();
        let (p1, p2) = (cone.legs[0], cone.legs[1]);
        // m_op(g, f) = m(f, g): mediate (p2, p1) into the original pullback.
        let swap = {
            let apex = cone.apex;
            c.hom(apex, self.c2)
                .iter()
                .copied()
                .find(|&h| {
                    c.compose(self.p1, h) == Some(p2) && c.compose(self.p2, h) == Some(p1)
                })
                .expect("swapped cone mediates")
        };
        InternalCat {
            ambient: self.ambient.clone(),
            c0: self.c0,
            c1: self.c1,
            d0: self.d1,
            d1: self.d0,
            i: self.i,
            c2: cone.apex,
            p1,
            p2,
            m: c.compose(self.m, swap).expect("composable"),
        }
    }
}

/// Externalisation `P_C` of an internal category: objects over `I` are
/// arrows `a : I -> C0`, morphisms `(J,b) -> (I,a)` over `u` are arrows
/// `f : J -> C1` with `d0∘f = b` and `d1∘f = a∘u`.
pub struct Externalisation {
    pub fib: Arc<FibrationData>,
    pub obj_key: Vec<Arr>,
    /// (dom a-arrow, cod a-arrow, u, f)
    pub arr_key: Vec<(Arr, Arr, Arr, Arr)>,
}

pub fn externalize(c: &InternalCat) -> Result<Externalisation, InternalCatError> {
    c.validate()?;
    let b = &c.ambient;
    let mut builder = CatBuilder::new();
    for a in b.arrows_to(c.c0) {
        builder.add_object(a);
        // identity morphism is (id_I, i ∘ a)
        builder.set_identity(a, (a, a, b.id(b.dom(a)), b.compose(c.i, a).unwrap()));
    }
    for a in b.arrows_to(c.c0) {
        for a2 in b.arrows_to(c.c0) {
            for &u in b.hom(b.dom(a), b.dom(a2)) {
                for &f in b.hom(b.dom(a), c.c1) {
                    if b.compose(c.d0, f) == Some(a) && b.compose(c.d1, f) == b.compose(a2, u) {
                        builder.add_arrow((a, a2, u, f), a, a2);
                    }
                }
            }
        }
    }
    let built = builder
        .build(|&(_, gc, u, f), &(fd, _, v, g)| {
            // (u, f) ∘ (v, g) = (u∘v, m ∘ <f∘v, g>)
            let uv = b.compose(u, v).unwrap();
            let fv = b.compose(f, v).unwrap();
            let h = c.pair(fv, g);
            (fd, gc, uv, b.compose(c.m, h).unwrap())
        })
        .expect("externalisation is a category");
    let proj = FunctorData {
        source: built.cat.clone(),
        target: b.clone(),
        obj_map: built.obj_key.iter().map(|&a| b.dom(a)).collect(),
        arr_map: built.arr_key.iter().map(|&(_, _, u, _)| u).collect(),
    };
    let fib = Arc::new(FibrationData::new(proj).expect("externalisation projects"));
    assert!(fib.is_fibration(), "externalisations are fibrations");
    Ok(Externalisation { fib, obj_key: built.obj_key, arr_key: built.arr_key })
}
