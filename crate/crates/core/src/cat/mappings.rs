use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use super::fincat::{Arr, FinCat, Obj};

/// An explicit functor between finite categories.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctorData {
    pub source: Arc<FinCat>,
    pub target: Arc<FinCat>,
    pub obj_map: Vec<Obj>,
    pub arr_map: Vec<Arr>,
}

/// A natural transformation between two parallel functors.
#[derive(Clone, Debug, PartialEq)]
pub struct NatTransData {
    pub source_functor: FunctorData,
    pub target_functor: FunctorData,
    /// Component at each source object, an arrow of the target category.
    pub components: Vec<Arr>,
}

/// An adjunction `left ⊣ right` with explicit unit and counit.
#[derive(Clone, Debug, PartialEq)]
pub struct AdjunctionData {
    pub left: FunctorData,
    pub right: FunctorData,
    pub unit: NatTransData,
    pub counit: NatTransData,
}

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
pub enum MappingViolation {
    #[error("map tables have the wrong length")]
    WrongArity,
    #[error("image id {id} out of range")]
    DanglingImage { id: usize },
    #[error("functor law fails on arrow {arrow}: endpoints not preserved")]
    EndpointViolation { arrow: usize },
    #[error("functor law fails on identity of object {object}")]
    IdentityViolation { object: usize },
    #[error("functor law fails on composable pair ({g},{f})")]
    FunctorLawViolation { g: usize, f: usize },
    #[error("component at object {object} has wrong endpoints")]
    ComponentTypeViolation { object: usize },
    #[error("naturality square fails on arrow {arrow}")]
    NaturalityViolation { arrow: usize },
    #[error("functors of a transformation are not parallel")]
    NotParallel,
    #[error("adjunction functors do not compose between the same categories")]
    BadAdjunctionShape,
    #[error("left triangle identity fails at object {object}")]
    LeftTriangleViolation { object: usize },
    #[error("right triangle identity fails at object {object}")]
    RightTriangleViolation { object: usize },
}

impl FunctorData {
    pub fn identity(c: &Arc<FinCat>) -> FunctorData {
        FunctorData {
            source: c.clone(),
            target: c.clone(),
            obj_map: c.objects().collect(),
            arr_map: c.arrows().collect(),
        }
    }

    pub fn ob(&self, x: Obj) -> Obj {
        self.obj_map[x.0]
    }

    pub fn arr(&self, f: Arr) -> Arr {
        self.arr_map[f.0]
    }

    /// `g ∘ f` where `f: A -> B` and `g: B -> C`.
    pub fn compose(g: &FunctorData, f: &FunctorData) -> FunctorData {
        assert_eq!(*f.target, *g.source, "functors not composable");
        FunctorData {
            source: f.source.clone(),
            target: g.target.clone(),
            obj_map: f.obj_map.iter().map(|&x| g.ob(x)).collect(),
            arr_map: f.arr_map.iter().map(|&a| g.arr(a)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self.source == *self.target
            && self.obj_map.iter().enumerate().all(|(i, o)| o.0 == i)
            && self.arr_map.iter().enumerate().all(|(i, a)| a.0 == i)
    }

    pub fn validate(&self) -> Result<(), Vec<MappingViolation>> {
        let mut v = Vec::new();
        if self.obj_map.len() != self.source.n_objects() || self.arr_map.len() != self.source.n_arrows() {
            return Err(vec![MappingViolation::WrongArity]);
        }
        for o in &self.obj_map {
            if o.0 >= self.target.n_objects() {
                v.push(MappingViolation::DanglingImage { id: o.0 });
            }
        }
        for a in &self.arr_map {
            if a.0 >= self.target.n_arrows() {
                v.push(MappingViolation::DanglingImage { id: a.0 });
            }
        }
        if !v.is_empty() {
            return Err(v);
        }
        for f in self.source.arrows() {
            let im = self.arr(f);
            if self.target.dom(im) != self.ob(self.source.dom(f))
                || self.target.cod(im) != self.ob(self.source.cod(f))
            {
                v.push(MappingViolation::EndpointViolation { arrow: f.0 });
            }
        }
        for x in self.source.objects() {
            if self.arr(self.source.id(x)) != self.target.id(self.ob(x)) {
                v.push(MappingViolation::IdentityViolation { object: x.0 });
            }
        }
        for (g, f) in self.source.composable_pairs() {
            let gf = self.source.compose(g, f).unwrap();
            if self.target.compose(self.arr(g), self.arr(f)) != Some(self.arr(gf)) {
                v.push(MappingViolation::FunctorLawViolation { g: g.0, f: f.0 });
            }
        }
        if v.is_empty() {
            Ok(())
        } else {
            Err(v)
        }
    }
}

impl NatTransData {
    pub fn identity(f: &FunctorData) -> NatTransData {
        NatTransData {
            source_functor: f.clone(),
            target_functor: f.clone(),
            components: f.source.objects().map(|x| f.target.id(f.ob(x))).collect(),
        }
    }

    pub fn at(&self, x: Obj) -> Arr {
        self.components[x.0]
    }

    pub fn validate(&self) -> Result<(), Vec<MappingViolation>> {
        let f = &self.source_functor;
        let g = &self.target_functor;
        if *f.source != *g.source || *f.target != *g.target {
            return Err(vec![MappingViolation::NotParallel]);
        }
        if self.components.len() != f.source.n_objects() {
            return Err(vec![MappingViolation::WrongArity]);
        }
        let mut v = Vec::new();
        let t = &f.target;
        for x in f.source.objects() {
            let c = self.at(x);
            if c.0 >= t.n_arrows() {
                return Err(vec![MappingViolation::DanglingImage { id: c.0 }]);
            }
            if t.dom(c) != f.ob(x) || t.cod(c) != g.ob(x) {
                v.push(MappingViolation::ComponentTypeViolation { object: x.0 });
            }
        }
        if !v.is_empty() {
            return Err(v);
        }
        for a in f.source.arrows() {
            let (x, y) = (f.source.dom(a), f.source.cod(a));
            let left = t.compose(self.at(y), f.arr(a));
            let right = t.compose(g.arr(a), self.at(x));
            if left != right {
                v.push(MappingViolation::NaturalityViolation { arrow: a.0 });
            }
        }
        if v.is_empty() {
            Ok(())
        } else {
            Err(v)
        }
    }

    /// Whether every component is an isomorphism.
    pub fn is_iso(&self) -> bool {
        self.components.iter().all(|&c| self.source_functor.target.is_iso(c))
    }
}

impl AdjunctionData {
    /// Checks functor laws, naturality and both triangle identities.
    pub fn validate(&self) -> Result<(), Vec<MappingViolation>> {
        let l = &self.left;
        let r = &self.right;
        if *l.target != *r.source || *r.target != *l.source {
            return Err(vec![MappingViolation::BadAdjunctionShape]);
        }
        l.validate()?;
        r.validate()?;
        self.unit.validate()?;
        self.counit.validate()?;
        let a = &l.source;
        let b = &l.target;
        let mut v = Vec::new();
        // ε_{LX} ∘ L(η_X) = id_{LX}
        for x in a.objects() {
            let lhs = b.compose(self.counit.at(l.ob(x)), l.arr(self.unit.at(x)));
            if lhs != Some(b.id(l.ob(x))) {
                v.push(MappingViolation::LeftTriangleViolation { object: x.0 });
            }
        }
        // R(ε_Y) ∘ η_{RY} = id_{RY}
        for y in b.objects() {
            let lhs = a.compose(r.arr(self.counit.at(y)), self.unit.at(r.ob(y)));
            if lhs != Some(a.id(r.ob(y))) {
                v.push(MappingViolation::RightTriangleViolation { object: y.0 });
            }
        }
        if v.is_empty() {
            Ok(())
        } else {
            Err(v)
        }
    }
}

/// Either kind of mapping, for `validate_mapping`.
pub enum Mapping<'a> {
    Functor(&'a FunctorData),
    NatTrans(&'a NatTransData),
}

/// Exhaustively checks the preservation / naturality equations of a mapping.
pub fn validate_mapping(entity: Mapping<'_>) -> Result<(), Vec<MappingViolation>> {
    match entity {
        Mapping::Functor(f) => f.validate(),
        Mapping::NatTrans(t) => t.validate(),
    }
}

/// Enumerates all functors from `a` to `b` by backtracking, visiting at most
/// `cap` partial assignments. Returns `None` when the cap was hit.
pub fn enumerate_functors(a: &Arc<FinCat>, b: &Arc<FinCat>, cap: usize) -> Option<Vec<FunctorData>> {
    let mut out = Vec::new();
    let mut budget = cap;
    let mut obj_map = vec![Obj(0); a.n_objects()];
    if a.n_objects() == 0 {
        return Some(vec![FunctorData {
            source: a.clone(),
            target: b.clone(),
            obj_map: vec![],
            arr_map: vec![],
        }]);
    }
    if b.n_objects() == 0 {
        return Some(vec![]);
    }
    fn assign_objects(
        a: &Arc<FinCat>,
        b: &Arc<FinCat>,
        i: usize,
        obj_map: &mut Vec<Obj>,
        out: &mut Vec<FunctorData>,
        budget: &mut usize,
    ) -> bool {
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        if i == a.n_objects() {
            let mut arr_map = vec![Arr(usize::MAX); a.n_arrows()];
            for x in a.objects() {
                arr_map[a.id(x).0] = b.id(obj_map[x.0]);
            }
            return assign_arrows(a, b, 0, obj_map, &mut arr_map, out, budget);
        }
        for y in b.objects() {
            obj_map[i] = y;
            if !assign_objects(a, b, i + 1, obj_map, out, budget) {
                return false;
            }
        }
        true
    }
    fn assign_arrows(
        a: &Arc<FinCat>,
        b: &Arc<FinCat>,
        i: usize,
        obj_map: &[Obj],
        arr_map: &mut Vec<Arr>,
        out: &mut Vec<FunctorData>,
        budget: &mut usize,
    ) -> bool {
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        // Skip arrows whose image is already pinned (identities).
        let mut i = i;
        while i < a.n_arrows() && arr_map[i] != Arr(usize::MAX) {
            i += 1;
        }
        if i == a.n_arrows() {
            let f = FunctorData {
                source: a.clone(),
                target: b.clone(),
                obj_map: obj_map.to_vec(),
                arr_map: arr_map.clone(),
            };
            if f.validate().is_ok() {
                out.push(f);
            }
            return true;
        }
        let f = Arr(i);
        let (src, dst) = (obj_map[a.dom(f).0], obj_map[a.cod(f).0]);
        for &im in b.hom(src, dst) {
            arr_map[i] = im;
            // Incremental composition check against already-assigned arrows.
            let ok = a.arrows().take(i + 1).all(|g| {
                if arr_map[g.0] == Arr(usize::MAX) {
                    return true;
                }
                let fg_ok = match a.compose(f, g) {
                    Some(fg) if arr_map[fg.0] != Arr(usize::MAX) => {
                        b.compose(arr_map[f.0], arr_map[g.0]) == Some(arr_map[fg.0])
                    }
                    _ => true,
                };
                let gf_ok = match a.compose(g, f) {
                    Some(gf) if arr_map[gf.0] != Arr(usize::MAX) => {
                        b.compose(arr_map[g.0], arr_map[f.0]) == Some(arr_map[gf.0])
                    }
                    _ => true,
                };
                fg_ok && gf_ok
            });
            if ok && !assign_arrows(a, b, i + 1, obj_map, arr_map, out, budget) {
                return false;
            }
        }
        arr_map[i] = Arr(usize::MAX);
        true
    }
    if assign_objects(a, b, 0, &mut obj_map, &mut out, &mut budget) {
        Some(out)
    } else {
        None
    }
}
