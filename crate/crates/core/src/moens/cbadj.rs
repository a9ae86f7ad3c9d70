use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::cat::{Arr, CatBuilder, FinCat, FunctorData, Obj};
use crate::construct::{
    cartesian_functor_category, change_of_base, grothendieck, underline, CartFunctorCat,
    Grothendieck, IndexedCat,
};
use crate::fib::FibrationData;

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
pub enum CbAdjError {
    #[error("search cap {0} exceeded")]
    SearchCapExceeded(usize),
    #[error("zigzag classes failed to stabilise within cap {0}")]
    NonTerminating(usize),
}

/// The right adjoint `∏_F(P)` to change of base: fibre at `I ∈ B` is the
/// category of cartesian functors `F*Ī -> P`.
pub fn pi_f(
    f: &FunctorData,
    p: &Arc<FibrationData>,
    cap: usize,
) -> Result<Grothendieck, CbAdjError> {
    let a = f.source.clone();
    let b = f.target.clone();
    assert_eq!(**p.base(), *a, "P must live over the domain of F");
    let underlines: Vec<_> = b.objects().map(|i| underline(&b, i)).collect();
    let pulled: Vec<_> = underlines.iter().map(|u| change_of_base(&u.fib, f)).collect();
    let homs: Vec<CartFunctorCat> = pulled
        .iter()
        .map(|cb| {
            cartesian_functor_category(&cb.fib, p, &FunctorData::identity(&a), cap)
                .ok_or(CbAdjError::SearchCapExceeded(cap))
        })
        .collect::<Result<_, _>>()?;
    let reindex: Vec<FunctorData> = b
        .arrows()
        .map(|u| {
            let (j, i) = (b.dom(u), b.cod(u));
            let s = crate::construct::sigma(&b, u, &underlines[j.0], &underlines[i.0]);
            // F*ū : F*J̄ -> F*Ī on the pullback pairs.
            let w_obj: Vec<Obj> = pulled[j.0]
                .obj_pairs
                .iter()
                .map(|&(x, sl)| {
                    Obj(pulled[i.0]
                        .obj_pairs
                        .binary_search(&(x, s.ob(sl)))
                        .expect("pushed pair"))
                })
                .collect();
            let w_arr: Vec<Arr> = pulled[j.0]
                .arr_pairs
                .iter()
                .map(|&(x, sl)| {
                    Arr(pulled[i.0]
                        .arr_pairs
                        .iter()
                        .position(|&pr| pr == (x, s.arr(sl)))
                        .expect("pushed arrow pair"))
                })
                .collect();
            let w = FunctorData {
                source: pulled[j.0].fib.total().clone(),
                target: pulled[i.0].fib.total().clone(),
                obj_map: w_obj,
                arr_map: w_arr,
            };
            w.validate().expect("F*ū is a functor");
            let obj_map: Vec<Obj> = homs[i.0]
                .functors
                .iter()
                .map(|g| homs[j.0].functor_index(&FunctorData::compose(g, &w)).expect("precomposite"))
                .collect();
            let arr_map: Vec<Arr> = homs[i.0]
                .cat
                .arrows()
                .map(|t| {
                    let comps: Vec<Arr> = pulled[j.0]
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
    indexed.validate().expect("∏_F(P) is strictly functorial");
    Ok(grothendieck(&indexed).expect("∏_F(P) assembles"))
}

/// A localization of a finite category at a set of arrows, computed through
/// the right calculus of fractions. Every morphism is a class of
/// length-two zigzags `f ∘ s^{-1}`.
pub struct Localization {
    pub cat: Arc<FinCat>,
    /// representative fraction (s, f) per arrow
    pub fractions: Vec<(Arr, Arr)>,
    /// localization arrow of every span
    pub class_of: BTreeMap<(Arr, Arr), Arr>,
}

/// Localizes `c` at `inverted`. The right Ore conditions are verified
/// exhaustively first; when they fail the zigzag classes need not
/// stabilise at any finite length and `NonTerminating` is surfaced.
pub fn localize(c: &Arc<FinCat>, inverted: &[Arr], cap: usize) -> Result<Localization, CbAdjError> {
    let s_has = |x: Arr| inverted.contains(&x);
    // S must contain identities and be closed under composition for the
    // fraction calculus; close it.
    let mut s_set: Vec<Arr> = inverted.to_vec();
    for x in c.objects() {
        if !s_has(c.id(x)) {
            s_set.push(c.id(x));
        }
    }
    let mut grew = true;
    while grew {
        grew = false;
        let snapshot = s_set.clone();
        for &x in &snapshot {
            for &y in &snapshot {
                if let Some(xy) = c.compose(x, y) {
                    if !s_set.contains(&xy) {
                        s_set.push(xy);
                        grew = true;
                    }
                }
            }
        }
    }
    let in_s = |x: Arr| s_set.contains(&x);
    // Ore: every cospan (g, s in S) completes to a square with an S-leg.
    for g in c.arrows() {
        for &s in &s_set {
            if c.cod(g) != c.cod(s) {
                continue;
            }
            let ok = c.arrows().any(|s2| {
                in_s(s2)
                    && c.cod(s2) == c.dom(g)
                    && c.arrows().any(|g2| {
                        c.dom(g2) == c.dom(s2)
                            && c.compose(g, s2) == c.compose(s, g2)
                            && c.dom(g2) == c.dom(s2)
                    })
            });
            if !ok {
                return Err(CbAdjError::NonTerminating(cap));
            }
        }
    }
    // Ore cancellation: s∘f = s∘g with s in S implies f∘t = g∘t for some t in S.
    for &s in &s_set {
        for f in c.arrows() {
            for g in c.arrows() {
                if f == g
                    || c.dom(f) != c.dom(g)
                    || c.cod(f) != c.dom(s)
                    || c.cod(g) != c.dom(s)
                    || c.compose(s, f) != c.compose(s, g)
                {
                    continue;
                }
                let ok = c
                    .arrows()
                    .any(|t| in_s(t) && c.cod(t) == c.dom(f) && c.compose(f, t) == c.compose(g, t));
                if !ok {
                    return Err(CbAdjError::NonTerminating(cap));
                }
            }
        }
    }
    // fractions (s : W -> X in S, f : W -> Y), modulo common refinement
    let mut spans: Vec<(Arr, Arr)> = Vec::new();
    for &s in &s_set {
        for f in c.arrows_from(c.dom(s)) {
            spans.push((s, f));
        }
    }
    spans.sort_unstable();
    spans.dedup();
    let related = |a: (Arr, Arr), b: (Arr, Arr)| -> bool {
        // common refinement (t, h) with a.0∘t = b.0∘h in S and a.1∘t = b.1∘h
        c.arrows().any(|t| {
            c.cod(t) == c.dom(a.0)
                && c.arrows().any(|h| {
                    c.dom(h) == c.dom(t)
                        && c.cod(h) == c.dom(b.0)
                        && c.compose(a.0, t) == c.compose(b.0, h)
                        && c.compose(a.0, t).map(in_s) == Some(true)
                        && c.compose(a.1, t) == c.compose(b.1, h)
                })
        })
    };
    // partition into classes under the symmetric-transitive closure
    let mut class_of: BTreeMap<(Arr, Arr), usize> = BTreeMap::new();
    let mut classes: Vec<Vec<(Arr, Arr)>> = Vec::new();
    for &sp in &spans {
        if class_of.contains_key(&sp) {
            continue;
        }
        let mut members = vec![sp];
        let mut frontier = vec![sp];
        while let Some(cur) = frontier.pop() {
            for &other in &spans {
                if members.contains(&other) {
                    continue;
                }
                if related(cur, other) || related(other, cur) {
                    members.push(other);
                    frontier.push(other);
                }
            }
        }
        members.sort_unstable();
        let k = classes.len();
        for &m in &members {
            class_of.insert(m, k);
        }
        classes.push(members);
    }
    // build the category: objects of c, arrows the classes
    let mut builder = CatBuilder::new();
    for x in c.objects() {
        builder.add_object(x);
    }
    let key = |k: usize| -> (Obj, Obj, (Arr, Arr)) {
        let m = classes[k][0];
        (c.cod(m.0), c.cod(m.1), m)
    };
    for (k, members) in classes.iter().enumerate() {
        let m = members[0];
        builder.add_arrow(key(k), c.cod(m.0), c.cod(m.1));
    }
    for x in c.objects() {
        let k = class_of[&(c.id(x), c.id(x))];
        builder.set_identity(x, key(k));
    }
    let compose_classes = |gk: usize, fk: usize| -> usize {
        let (s2, g) = classes[gk][0];
        let (s1, f) = classes[fk][0];
        // complete (f, s2): find (t in S, h) with f∘t = s2∘h
        let (t, h) = 'find: {
            for t in c.arrows() {
                if !in_s(t) || c.cod(t) != c.dom(f) {
                    continue;
                }
                for h in c.arrows_from(c.dom(t)) {
                    if c.compose(f, t) == c.compose(s2, h) {
                        break 'find (t, h);
                    }
                }
            }
            unreachable!("Ore completion exists")
        };
        let s = c.compose(s1, t).expect("S composite");
        let gf = c.compose(g, h).expect("composable");
        *class_of.get(&(s, gf)).expect("composite fraction enumerated")
    };
    let built = builder
        .build(|gk, fk| key(compose_classes(class_of[&gk.2], class_of[&fk.2])))
        .map_err(|_| CbAdjError::NonTerminating(cap))?;
    let fractions: Vec<(Arr, Arr)> = built.arr_key.iter().map(|k| k.2).collect();
    let span_class: BTreeMap<(Arr, Arr), Arr> = class_of
        .iter()
        .map(|(&sp, &k)| (sp, built.arr_ix[&key(k)]))
        .collect();
    Ok(Localization { cat: built.cat, fractions, class_of: span_class })
}

/// The left adjoint `∐_F(P)`: fibre at `I` is the localization of the
/// pullback of `P` along `∂1 : I/F -> A` at its cartesian arrows.
pub struct SumFibre {
    pub cat: Arc<FinCat>,
    /// fraction representatives per localization arrow
    pub fractions: Vec<(Arr, Arr)>,
    /// ((A-object K, x : I -> F K), P-total object) per pre-localization object
    pub obj_pairs: Vec<((Obj, Arr), Obj)>,
    /// the pre-localization pullback total
    pub staged: Arc<FinCat>,
    /// (comma arrow key, P-total arrow) per pre-localization arrow
    pub arr_pairs: Vec<(((Obj, Arr), (Obj, Arr), Arr), Arr)>,
    class_of: BTreeMap<(Arr, Arr), Arr>,
}

impl SumFibre {
    /// The localization class of a staged arrow (through its identity
    /// fraction).
    pub fn class_of_staged(&self, m: Arr) -> Arr {
        let dom = self.staged.dom(m);
        self.class_of[&(self.staged.id(dom), m)]
    }
}

/// The comma `I/F` with keys exposed: objects `(K, x : I -> F K)`,
/// morphisms `v : K -> K'` with `F(v) ∘ x = x'`.
fn comma_under(f: &FunctorData, i: Obj) -> crate::cat::BuiltCat<(Obj, Arr), ((Obj, Arr), (Obj, Arr), Arr)> {
    let a = f.source.clone();
    let b = f.target.clone();
    let mut builder = CatBuilder::new();
    for k in a.objects() {
        for &x in b.hom(i, f.ob(k)) {
            builder.add_object((k, x));
            builder.set_identity((k, x), ((k, x), (k, x), a.id(k)));
        }
    }
    for k in a.objects() {
        for &x in b.hom(i, f.ob(k)) {
            for k2 in a.objects() {
                for &x2 in b.hom(i, f.ob(k2)) {
                    for &v in a.hom(k, k2) {
                        if b.compose(f.arr(v), x) == Some(x2) {
                            builder.add_arrow(((k, x), (k2, x2), v), (k, x), (k2, x2));
                        }
                    }
                }
            }
        }
    }
    builder
        .build(|&(_, gc, v2), &(fd, _, v1)| (fd, gc, a.compose(v2, v1).unwrap()))
        .expect("comma under an object is a category")
}

pub fn sigma_f_fibre(
    f: &FunctorData,
    p: &Arc<FibrationData>,
    i: Obj,
    cap: usize,
) -> Result<SumFibre, CbAdjError> {
    let comma = comma_under(f, i);
    // ∂1 : I/F -> A projects to the functor's source.
    let d1 = FunctorData {
        source: comma.cat.clone(),
        target: f.source.clone(),
        obj_map: comma.obj_key.iter().map(|&(k, _)| k).collect(),
        arr_map: comma.arr_key.iter().map(|&(_, _, v)| v).collect(),
    };
    d1.validate().expect("projection of the comma");
    let cb = change_of_base(p, &d1);
    let inverted: Vec<Arr> =
        cb.fib.total().arrows().filter(|&x| cb.fib.is_cartesian(x)).collect();
    let loc = localize(cb.fib.total(), &inverted, cap)?;
    let staged = cb.fib.total().clone();
    let class_of = loc.class_of.clone();
    let obj_pairs = comma
        .obj_key
        .iter()
        .flat_map(|&(k, x)| {
            let comma_obj = comma.obj_ix[&(k, x)];
            cb.obj_pairs
                .iter()
                .filter(move |&&(c, _)| c == comma_obj)
                .map(move |&(_, px)| ((k, x), px))
        })
        .collect();
    let arr_pairs = cb
        .arr_pairs
        .iter()
        .map(|&(ca, pa)| (comma.arr_key[ca.0], pa))
        .collect();
    Ok(SumFibre { cat: loc.cat, fractions: loc.fractions, obj_pairs, staged, arr_pairs, class_of })
}

/// A distributor `φ : A ⇸ B` as explicit tables: a set per pair of objects
/// with both actions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistributorData {
    pub a: Arc<FinCat>,
    pub b: Arc<FinCat>,
    /// (B-object K, A-object I) -> set size (elements are 0..n)
    pub value: BTreeMap<(Obj, Obj), usize>,
    /// contravariant B-action: (v : K -> K', I) maps φ(K', I) -> φ(K, I)
    pub b_action: BTreeMap<(Arr, Obj), Vec<usize>>,
    /// covariant A-action: (K, u : I -> I') maps φ(K, I) -> φ(K, I')
    pub a_action: BTreeMap<(Obj, Arr), Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
pub enum DistributorError {
    #[error("action tables are not functorial at {0}")]
    NotFunctorial(String),
}

impl DistributorData {
    /// A functor `F : A -> B` as the distributor `φ_F(K, I) = B(K, F I)`.
    pub fn of_functor(f: &FunctorData) -> DistributorData {
        let a = f.source.clone();
        let b = f.target.clone();
        let mut value = BTreeMap::new();
        let mut b_action = BTreeMap::new();
        let mut a_action = BTreeMap::new();
        for k in b.objects() {
            for i in a.objects() {
                value.insert((k, i), b.hom(k, f.ob(i)).len());
            }
        }
        for v in b.arrows() {
            for i in a.objects() {
                let src = b.hom(b.cod(v), f.ob(i));
                let dst = b.hom(b.dom(v), f.ob(i));
                let map = src
                    .iter()
                    .map(|&e| dst.iter().position(|&d| Some(d) == b.compose(e, v)).unwrap())
                    .collect();
                b_action.insert((v, i), map);
            }
        }
        for k in b.objects() {
            for u in a.arrows() {
                let src = b.hom(k, f.ob(a.dom(u)));
                let dst = b.hom(k, f.ob(a.cod(u)));
                let map = src
                    .iter()
                    .map(|&e| dst.iter().position(|&d| Some(d) == b.compose(f.arr(u), e)).unwrap())
                    .collect();
                a_action.insert((k, u), map);
            }
        }
        DistributorData { a, b, value, b_action, a_action }
    }

    /// The reverse distributor `φ^F(K ∈ A-slot...)`: `φ^F : B ⇸ A` with
    /// `φ^F(I, K) = B(F I, K)` (here the A-slot indexes contravariantly).
    pub fn reverse_of_functor(f: &FunctorData) -> DistributorData {
        let a = f.target.clone(); // covariant side: B
        let b = f.source.clone(); // contravariant side: A
        let mut value = BTreeMap::new();
        let mut b_action = BTreeMap::new();
        let mut a_action = BTreeMap::new();
        for i in b.objects() {
            for k in a.objects() {
                value.insert((i, k), f.target.hom(f.ob(i), k).len());
            }
        }
        for v in b.arrows() {
            for k in a.objects() {
                let src = f.target.hom(f.ob(b.cod(v)), k);
                let dst = f.target.hom(f.ob(b.dom(v)), k);
                let map = src
                    .iter()
                    .map(|&e| {
                        dst.iter()
                            .position(|&d| Some(d) == f.target.compose(e, f.arr(v)))
                            .unwrap()
                    })
                    .collect();
                b_action.insert((v, k), map);
            }
        }
        for i in b.objects() {
            for w in a.arrows() {
                let src = f.target.hom(f.ob(i), a.dom(w));
                let dst = f.target.hom(f.ob(i), a.cod(w));
                let map = src
                    .iter()
                    .map(|&e| dst.iter().position(|&d| Some(d) == f.target.compose(w, e)).unwrap())
                    .collect();
                a_action.insert((i, w), map);
            }
        }
        DistributorData { a, b, value, b_action, a_action }
    }

    pub fn validate(&self) -> Result<(), DistributorError> {
        for (&(k, i), &n) in &self.value {
            let idb = self.b_action[&(self.b.id(k), i)].clone();
            if idb != (0..n).collect::<Vec<_>>() {
                return Err(DistributorError::NotFunctorial(format!("B-identity at ({},{})", k.0, i.0)));
            }
            let ida = self.a_action[&(k, self.a.id(i))].clone();
            if ida != (0..n).collect::<Vec<_>>() {
                return Err(DistributorError::NotFunctorial(format!("A-identity at ({},{})", k.0, i.0)));
            }
        }
        // composition and bimodule compatibility
        for (&(v, i), m1) in &self.b_action {
            for v2 in self.b.arrows() {
                if self.b.dom(v) != self.b.cod(v2) {
                    continue;
                }
                let vv = self.b.compose(v, v2).unwrap();
                let m2 = &self.b_action[&(v2, i)];
                let mm = &self.b_action[&(vv, i)];
                for e in 0..m1.len() {
                    if m2[m1[e]] != mm[e] {
                        return Err(DistributorError::NotFunctorial("B-composition".into()));
                    }
                }
            }
            for u in self.a.arrows() {
                if self.a.dom(u) != i {
                    continue;
                }
                let up1 = &self.a_action[&(self.b.cod(v), u)];
                let up2 = &self.a_action[&(self.b.dom(v), u)];
                let m_then = &self.b_action[&(v, self.a.cod(u))];
                for e in 0..m1.len() {
                    if m_then[up1[e]] != up2[m1[e]] {
                        return Err(DistributorError::NotFunctorial("bimodule square".into()));
                    }
                }
            }
        }
        Ok(())
    }

    /// The elements category of the presheaf `φ(I)` on `B`, as a discrete
    /// fibration.
    pub fn elements(&self, i: Obj) -> (Arc<FibrationData>, Vec<(Obj, usize)>) {
        let mut builder = CatBuilder::new();
        let mut objs = Vec::new();
        for k in self.b.objects() {
            for e in 0..self.value[&(k, i)] {
                builder.add_object((k, e));
                objs.push((k, e));
            }
        }
        for &(k, e) in &objs {
            builder.set_identity((k, e), ((k, e), (k, e), self.b.id(k)));
        }
        for v in self.b.arrows() {
            let map = &self.b_action[&(v, i)];
            for (e, &me) in map.iter().enumerate().take(self.value[&(self.b.cod(v), i)]) {
                builder.add_arrow(
                    ((self.b.dom(v), me), (self.b.cod(v), e), v),
                    (self.b.dom(v), me),
                    (self.b.cod(v), e),
                );
            }
        }
        let built = builder
            .build(|&(_, gc, v2), &(fd, _, v1)| (fd, gc, self.b.compose(v2, v1).unwrap()))
            .expect("elements category");
        let proj = FunctorData {
            source: built.cat.clone(),
            target: self.b.clone(),
            obj_map: built.obj_key.iter().map(|&(k, _)| k).collect(),
            arr_map: built.arr_key.iter().map(|&(_, _, v)| v).collect(),
        };
        let fib = Arc::new(FibrationData::new(proj).expect("discrete fibration"));
        (fib, built.obj_key)
    }

    /// Retract-of-representable test per A-object: the criterion for the
    /// existence of a right adjoint distributor.
    pub fn has_right_adjoint(&self) -> bool {
        self.a.objects().all(|i| self.retract_of_representable(i))
    }

    fn retract_of_representable(&self, i: Obj) -> bool {
        // candidates K with a section/retraction pair of natural maps
        // φ(I) -> B(-, K) -> φ(I).
        self.b.objects().any(|k| {
            // r : Y(K) -> φ(I) is an element of φ(K, I); i : φ(I) -> Y(K)
            // is a natural family of maps t_J : φ(J, I) -> B(J, K).
            (0..self.value[&(k, i)]).any(|r| {
                self.natural_sections(i, k, r)
            })
        })
    }

    fn natural_sections(&self, i: Obj, k: Obj, r: usize) -> bool {
        // enumerate natural t : φ(I) -> Y(K) with r ∘ t = id.
        let objs: Vec<Obj> = self.b.objects().collect();
        let mut stack: Vec<Vec<Arr>> = vec![vec![]];
        for &j in &objs {
            let mut next = Vec::new();
            for partial in &stack {
                // all assignments of φ(J, I) -> B(J, K)
                let n = self.value[&(j, i)];
                let homs = self.b.hom(j, k).to_vec();
                let mut assignments: Vec<Vec<Arr>> = vec![vec![]];
                for _ in 0..n {
                    let mut grow = Vec::new();
                    for asg in &assignments {
                        for &h in &homs {
                            let mut a2 = asg.clone();
                            a2.push(h);
                            grow.push(a2);
                        }
                    }
                    assignments = grow;
                }
                for asg in assignments {
                    let mut p2 = partial.clone();
                    p2.extend(asg);
                    next.push(p2);
                }
            }
            stack = next;
        }
        // index of element e at object j within the flattened table
        let offset: Vec<usize> = {
            let mut out = Vec::new();
            let mut acc = 0;
            for &j in &objs {
                out.push(acc);
                acc += self.value[&(j, i)];
            }
            out
        };
        'outer: for t in &stack {
            // naturality: for v : J -> J', t_J(φ(v)(e)) = t_{J'}(e) ∘ v
            for v in self.b.arrows() {
                let (j, j2) = (self.b.dom(v), self.b.cod(v));
                let map = &self.b_action[&(v, i)];
                for e in 0..self.value[&(j2, i)] {
                    let lhs = t[offset[j.0] + map[e]];
                    let rhs = self.b.compose(t[offset[j2.0] + e], v);
                    if Some(lhs) != rhs {
                        continue 'outer;
                    }
                }
            }
            // retraction: r ∘ t = id on φ(I): r-as-map at J sends
            // h : J -> K to φ(h)(r-element at K).
            let mut ok = true;
            for &j in &objs {
                for e in 0..self.value[&(j, i)] {
                    let h = t[offset[j.0] + e];
                    let img = self.b_action[&(h, i)][r];
                    if img != e {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return true;
            }
        }
        false
    }
}

/// Change of base along a distributor: fibre at `I ∈ A` is the category of
/// cartesian functors from the elements of `φ(I)` to `P`.
pub fn distributor_change_of_base(
    phi: &DistributorData,
    p: &Arc<FibrationData>,
    cap: usize,
) -> Result<Grothendieck, CbAdjError> {
    phi.validate().expect("distributor tables are functorial");
    assert_eq!(*phi.b, **p.base());
    let a = phi.a.clone();
    let elems: Vec<_> = a.objects().map(|i| phi.elements(i)).collect();
    let homs: Vec<CartFunctorCat> = elems
        .iter()
        .map(|(e, _)| {
            cartesian_functor_category(e, p, &FunctorData::identity(p.base()), cap)
                .ok_or(CbAdjError::SearchCapExceeded(cap))
        })
        .collect::<Result<_, _>>()?;
    let reindex: Vec<FunctorData> = a
        .arrows()
        .map(|u| {
            let (i, i2) = (a.dom(u), a.cod(u));
            // ∫φ(u) : ∫φ(I) -> ∫φ(I'), (K, e) ↦ (K, u·e); reindexing of the
            // hom categories is precomposition.
            let (src_fib, src_keys) = &elems[i.0];
            let (dst_fib, dst_keys) = &elems[i2.0];
            let push_obj: Vec<Obj> = src_keys
                .iter()
                .map(|&(k, e)| {
                    let e2 = phi.a_action[&(k, u)][e];
                    Obj(dst_keys.binary_search(&(k, e2)).expect("pushed element"))
                })
                .collect();
            let push_arr: Vec<Arr> = src_fib
                .total()
                .arrows()
                .map(|m| {
                    let v = src_fib.over(m);
                    let (kd, _) = src_keys[src_fib.total().dom(m).0];
                    let (kc, ec) = src_keys[src_fib.total().cod(m).0];
                    let _ = kd;
                    let e2 = phi.a_action[&(kc, u)][ec];
                    let cod2 = Obj(dst_keys.binary_search(&(kc, e2)).expect("pushed"));
                    dst_fib
                        .total()
                        .arrows_to(cod2)
                        .find(|&m2| {
                            dst_fib.over(m2) == v
                                && dst_fib.total().dom(m2)
                                    == push_obj[src_fib.total().dom(m).0]
                        })
                        .expect("pushed arrow")
                })
                .collect();
            let w = FunctorData {
                source: src_fib.total().clone(),
                target: dst_fib.total().clone(),
                obj_map: push_obj,
                arr_map: push_arr,
            };
            w.validate().expect("∫φ(u) is a functor");
            let obj_map: Vec<Obj> = homs[i2.0]
                .functors
                .iter()
                .map(|g| homs[i.0].functor_index(&FunctorData::compose(g, &w)).expect("precomposite"))
                .collect();
            let arr_map: Vec<Arr> = homs[i2.0]
                .cat
                .arrows()
                .map(|t| {
                    let comps: Vec<Arr> = src_keys
                        .iter()
                        .enumerate()
                        .map(|(kx, _)| homs[i2.0].transfs[t.0][w.ob(Obj(kx)).0])
                        .collect();
                    let dom = obj_map[homs[i2.0].cat.dom(t).0];
                    let cod = obj_map[homs[i2.0].cat.cod(t).0];
                    homs[i.0].transf_index(dom, cod, &comps).expect("whiskered")
                })
                .collect();
            FunctorData {
                source: homs[i2.0].cat.clone(),
                target: homs[i.0].cat.clone(),
                obj_map,
                arr_map,
            }
        })
        .collect();
    let indexed = IndexedCat {
        base: a.clone(),
        fibres: homs.iter().map(|h| h.cat.clone()).collect(),
        reindex,
    };
    indexed.validate().expect("φ*(P) is strictly functorial");
    Ok(grothendieck(&indexed).expect("φ*(P) assembles"))
}
