use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Object id in a [`FinCat`]. Ids are dense: `0..n_objects`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Obj(pub usize);

/// Arrow id in a [`FinCat`]. Ids are dense: `0..n_arrows`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Arr(pub usize);

const NONE: u32 = u32::MAX;

/// A finite category given by explicit tables.
///
/// The composition table is total on composable pairs and undefined
/// elsewhere; associativity and the unit laws are checked on construction,
/// so a value of this type is always an actual category.
#[derive(Clone, Debug)]
pub struct FinCat {
    n_objects: usize,
    dom: Vec<Obj>,
    cod: Vec<Obj>,
    identity: Vec<Arr>,
    /// `comp[g * m + f]` is `g ∘ f` when `dom g = cod f`, `NONE` otherwise.
    comp: Vec<u32>,
    /// hom[x * n + y] lists the arrows x -> y in ascending id order.
    hom: Vec<Vec<Arr>>,
    inverse: Vec<Option<Arr>>,
}

/// A law violation found while validating a raw category candidate.
#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
pub enum CatViolation {
    #[error("id {id} referenced by {context} does not exist")]
    DanglingId { id: usize, context: String },
    #[error("duplicate id {id} in {context}")]
    DuplicateId { id: usize, context: String },
    #[error("object {object} has no identity arrow")]
    MissingIdentity { object: usize },
    #[error("identity arrow {arrow} of object {object} is not an endo-arrow of it")]
    IllTypedIdentity { object: usize, arrow: usize },
    #[error("composition table defines ({g},{f}) which is not a composable pair")]
    NonComposablePairInTable { g: usize, f: usize },
    #[error("composable pair ({g},{f}) missing from the composition table")]
    MissingCompositionEntry { g: usize, f: usize },
    #[error("composite of ({g},{f}) is {gf}, which has the wrong endpoints")]
    CompositeTypeMismatch { g: usize, f: usize, gf: usize },
    #[error("associativity fails on ({h},{g},{f})")]
    AssociativityViolation { h: usize, g: usize, f: usize },
    #[error("unit law fails on arrow {f}")]
    UnitViolation { f: usize },
}

impl FinCat {
    /// Builds a category from dense tables, checking every law.
    pub fn from_parts(
        n_objects: usize,
        dom: Vec<Obj>,
        cod: Vec<Obj>,
        identity: Vec<Arr>,
        comp_entries: &[((Arr, Arr), Arr)],
    ) -> Result<FinCat, Vec<CatViolation>> {
        let m = dom.len();
        let mut violations = Vec::new();
        assert_eq!(cod.len(), m, "dom/cod tables must have equal length");
        for (a, (d, c)) in dom.iter().zip(cod.iter()).enumerate() {
            if d.0 >= n_objects {
                violations.push(CatViolation::DanglingId { id: d.0, context: format!("dom of arrow {a}") });
            }
            if c.0 >= n_objects {
                violations.push(CatViolation::DanglingId { id: c.0, context: format!("cod of arrow {a}") });
            }
        }
        if identity.len() != n_objects {
            for object in identity.len()..n_objects {
                violations.push(CatViolation::MissingIdentity { object });
            }
        }
        for (x, i) in identity.iter().enumerate().take(n_objects) {
            if i.0 >= m {
                violations.push(CatViolation::DanglingId { id: i.0, context: format!("identity of object {x}") });
            } else if dom[i.0] != Obj(x) || cod[i.0] != Obj(x) {
                violations.push(CatViolation::IllTypedIdentity { object: x, arrow: i.0 });
            }
        }
        if !violations.is_empty() {
            return Err(violations);
        }

        let mut comp = vec![NONE; m * m];
        for &((g, f), gf) in comp_entries {
            if g.0 >= m || f.0 >= m || gf.0 >= m {
                violations.push(CatViolation::DanglingId {
                    id: g.0.max(f.0).max(gf.0),
                    context: format!("composition entry ({},{})", g.0, f.0),
                });
                continue;
            }
            if dom[g.0] != cod[f.0] {
                violations.push(CatViolation::NonComposablePairInTable { g: g.0, f: f.0 });
                continue;
            }
            if dom[gf.0] != dom[f.0] || cod[gf.0] != cod[g.0] {
                violations.push(CatViolation::CompositeTypeMismatch { g: g.0, f: f.0, gf: gf.0 });
                continue;
            }
            if comp[g.0 * m + f.0] != NONE && comp[g.0 * m + f.0] != gf.0 as u32 {
                violations.push(CatViolation::DuplicateId {
                    id: gf.0,
                    context: format!("composition entry ({},{})", g.0, f.0),
                });
            }
            comp[g.0 * m + f.0] = gf.0 as u32;
        }
        for g in 0..m {
            for f in 0..m {
                if dom[g] == cod[f] && comp[g * m + f] == NONE {
                    violations.push(CatViolation::MissingCompositionEntry { g, f });
                }
            }
        }
        if !violations.is_empty() {
            return Err(violations);
        }

        // Unit laws first so that associativity violations are reported on
        // genuinely non-identity data.
        for f in 0..m {
            let idc = identity[cod[f].0];
            let idd = identity[dom[f].0];
            if comp[idc.0 * m + f] != f as u32 || comp[f * m + idd.0] != f as u32 {
                violations.push(CatViolation::UnitViolation { f });
            }
        }
        for h in 0..m {
            for g in 0..m {
                if dom[h] != cod[g] {
                    continue;
                }
                let hg = comp[h * m + g] as usize;
                for f in 0..m {
                    if dom[g] != cod[f] {
                        continue;
                    }
                    let gf = comp[g * m + f] as usize;
                    if comp[h * m + gf] != comp[hg * m + f] {
                        violations.push(CatViolation::AssociativityViolation { h, g, f });
                    }
                }
            }
        }
        if !violations.is_empty() {
            return Err(violations);
        }

        let mut hom = vec![Vec::new(); n_objects * n_objects];
        for a in 0..m {
            hom[dom[a].0 * n_objects + cod[a].0].push(Arr(a));
        }
        let mut cat = FinCat { n_objects, dom, cod, identity, comp, hom, inverse: vec![None; m] };
        let mut inverse = vec![None; m];
        for (f, inv) in inverse.iter_mut().enumerate() {
            for g in cat.hom(cat.cod(Arr(f)), cat.dom(Arr(f))) {
                if cat.compose(*g, Arr(f)) == Some(cat.id(cat.dom(Arr(f))))
                    && cat.compose(Arr(f), *g) == Some(cat.id(cat.cod(Arr(f))))
                {
                    *inv = Some(*g);
                    break;
                }
            }
        }
        cat.inverse = inverse;
        Ok(cat)
    }

    pub fn n_objects(&self) -> usize {
        self.n_objects
    }

    pub fn n_arrows(&self) -> usize {
        self.dom.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = Obj> {
        (0..self.n_objects).map(Obj)
    }

    pub fn arrows(&self) -> impl Iterator<Item = Arr> {
        (0..self.dom.len()).map(Arr)
    }

    pub fn dom(&self, a: Arr) -> Obj {
        self.dom[a.0]
    }

    pub fn cod(&self, a: Arr) -> Obj {
        self.cod[a.0]
    }

    pub fn id(&self, x: Obj) -> Arr {
        self.identity[x.0]
    }

    pub fn is_identity(&self, a: Arr) -> bool {
        self.identity[self.dom[a.0].0] == a
    }

    /// `g ∘ f`, defined when `dom g = cod f`.
    pub fn compose(&self, g: Arr, f: Arr) -> Option<Arr> {
        let v = self.comp[g.0 * self.dom.len() + f.0];
        (v != NONE).then_some(Arr(v as usize))
    }

    /// Composes last-to-first: `path = [f1, f2, f3]` yields `f3 ∘ f2 ∘ f1`.
    pub fn compose_path(&self, path: &[Arr]) -> Option<Arr> {
        let (&first, rest) = path.split_first()?;
        rest.iter().try_fold(first, |acc, &g| self.compose(g, acc))
    }

    pub fn hom(&self, x: Obj, y: Obj) -> &[Arr] {
        &self.hom[x.0 * self.n_objects + y.0]
    }

    pub fn arrows_from(&self, x: Obj) -> impl Iterator<Item = Arr> + '_ {
        self.arrows().filter(move |&a| self.dom(a) == x)
    }

    pub fn arrows_to(&self, y: Obj) -> impl Iterator<Item = Arr> + '_ {
        self.arrows().filter(move |&a| self.cod(a) == y)
    }

    pub fn inverse(&self, a: Arr) -> Option<Arr> {
        self.inverse[a.0]
    }

    pub fn is_iso(&self, a: Arr) -> bool {
        self.inverse[a.0].is_some()
    }

    pub fn is_mono(&self, m: Arr) -> bool {
        let x = self.dom(m);
        self.objects().all(|w| {
            let hs = self.hom(w, x);
            hs.iter().all(|&g| {
                hs.iter()
                    .all(|&h| g == h || self.compose(m, g) != self.compose(m, h))
            })
        })
    }

    pub fn is_epi(&self, e: Arr) -> bool {
        let y = self.cod(e);
        self.objects().all(|w| {
            let hs = self.hom(y, w);
            hs.iter().all(|&g| {
                hs.iter()
                    .all(|&h| g == h || self.compose(g, e) != self.compose(h, e))
            })
        })
    }

    /// Objects isomorphic to `x`, in ascending id order.
    pub fn iso_class(&self, x: Obj) -> Vec<Obj> {
        self.objects()
            .filter(|&y| self.hom(x, y).iter().any(|&f| self.is_iso(f)))
            .collect()
    }

    /// The terminal category: one object, one arrow.
    pub fn terminal() -> FinCat {
        FinCat::from_parts(1, vec![Obj(0)], vec![Obj(0)], vec![Arr(0)], &[((Arr(0), Arr(0)), Arr(0))])
            .expect("terminal category is lawful")
    }

    /// The empty category.
    pub fn empty() -> FinCat {
        FinCat::from_parts(0, vec![], vec![], vec![], &[]).expect("empty category is lawful")
    }

    /// Re-runs the full law check against this category's own tables.
    pub fn revalidate(&self) -> Result<(), Vec<CatViolation>> {
        let entries: Vec<((Arr, Arr), Arr)> = self.composable_pairs().map(|(g, f)| ((g, f), self.compose(g, f).unwrap())).collect();
        FinCat::from_parts(self.n_objects, self.dom.clone(), self.cod.clone(), self.identity.clone(), &entries)
            .map(|_| ())
    }

    pub fn composable_pairs(&self) -> impl Iterator<Item = (Arr, Arr)> + '_ {
        self.arrows()
            .flat_map(move |g| self.arrows().map(move |f| (g, f)))
            .filter(move |&(g, f)| self.dom(g) == self.cod(f))
    }
}

impl PartialEq for FinCat {
    fn eq(&self, other: &Self) -> bool {
        self.n_objects == other.n_objects
            && self.dom == other.dom
            && self.cod == other.cod
            && self.identity == other.identity
            && self.comp == other.comp
    }
}

impl Eq for FinCat {}

/// A category candidate as read from a file: ids are arbitrary integers.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawCat {
    pub objects: Vec<usize>,
    /// (arrow id, dom object id, cod object id)
    pub arrows: Vec<(usize, usize, usize)>,
    /// (object id, identity arrow id)
    pub identity: Vec<(usize, usize)>,
    /// ((g, f), g ∘ f)
    pub comp: Vec<((usize, usize), usize)>,
}

/// How raw ids were renumbered during canonicalisation.
#[derive(Clone, Debug, Default)]
pub struct IdMaps {
    pub objects: Vec<usize>,
    pub arrows: Vec<usize>,
}

/// Validates a raw candidate and canonicalises its ids (dense, ascending).
pub fn validate_category(raw: &RawCat) -> Result<(FinCat, IdMaps), Vec<CatViolation>> {
    let mut violations = Vec::new();
    let mut objects = raw.objects.clone();
    objects.sort_unstable();
    for w in objects.windows(2) {
        if w[0] == w[1] {
            violations.push(CatViolation::DuplicateId { id: w[0], context: "objects".into() });
        }
    }
    objects.dedup();
    let obj_ix = |id: usize| objects.binary_search(&id).ok();

    let mut arrow_ids: Vec<usize> = raw.arrows.iter().map(|a| a.0).collect();
    arrow_ids.sort_unstable();
    for w in arrow_ids.windows(2) {
        if w[0] == w[1] {
            violations.push(CatViolation::DuplicateId { id: w[0], context: "arrows".into() });
        }
    }
    arrow_ids.dedup();
    let arr_ix = |id: usize| arrow_ids.binary_search(&id).ok();

    let mut dom = vec![Obj(0); arrow_ids.len()];
    let mut cod = vec![Obj(0); arrow_ids.len()];
    for &(a, d, c) in &raw.arrows {
        let (Some(ai), di, ci) = (arr_ix(a), obj_ix(d), obj_ix(c)) else { continue };
        match di {
            Some(di) => dom[ai] = Obj(di),
            None => violations.push(CatViolation::DanglingId { id: d, context: format!("dom of arrow {a}") }),
        }
        match ci {
            Some(ci) => cod[ai] = Obj(ci),
            None => violations.push(CatViolation::DanglingId { id: c, context: format!("cod of arrow {a}") }),
        }
    }

    let mut identity = vec![None; objects.len()];
    for &(o, a) in &raw.identity {
        match (obj_ix(o), arr_ix(a)) {
            (Some(oi), Some(ai)) => {
                if identity[oi].replace(Arr(ai)).is_some() {
                    violations.push(CatViolation::DuplicateId { id: o, context: "identity table".into() });
                }
            }
            (None, _) => violations.push(CatViolation::DanglingId { id: o, context: "identity table".into() }),
            (_, None) => violations.push(CatViolation::DanglingId { id: a, context: format!("identity of object {o}") }),
        }
    }
    let mut identities = Vec::with_capacity(objects.len());
    for (oi, i) in identity.iter().enumerate() {
        match i {
            Some(a) => identities.push(*a),
            None => violations.push(CatViolation::MissingIdentity { object: objects[oi] }),
        }
    }

    let mut comp = Vec::with_capacity(raw.comp.len());
    for &((g, f), gf) in &raw.comp {
        match (arr_ix(g), arr_ix(f), arr_ix(gf)) {
            (Some(gi), Some(fi), Some(gfi)) => comp.push(((Arr(gi), Arr(fi)), Arr(gfi))),
            _ => violations.push(CatViolation::DanglingId {
                id: gf,
                context: format!("composition entry ({g},{f})"),
            }),
        }
    }
    if !violations.is_empty() {
        return Err(violations);
    }

    let cat = FinCat::from_parts(objects.len(), dom, cod, identities, &comp)?;
    Ok((cat, IdMaps { objects, arrows: arrow_ids }))
}
