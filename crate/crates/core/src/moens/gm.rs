use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::analyze::{is_fibre_mono, subobject_representatives, terminal_one_arrow};
use crate::cat::{
    find_limit, find_left_adjoint, find_right_adjoint, is_pullback_square, AdjointResult,
    AdjunctionData, Arr, FunctorData, LimitResult, LimitShape, Obj,
};
use crate::construct::glueing;
use crate::fib::FibrationData;

use super::gamma::{delta_gamma, DeltaGamma};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TriState {
    True,
    False,
    /// the two characterisations disagreed: a build-stopping defect
    Divergent,
}

impl TriState {
    fn of(a: bool, b: bool) -> TriState {
        match (a, b) {
            (true, true) => TriState::True,
            (false, false) => TriState::False,
            _ => TriState::Divergent,
        }
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self, TriState::Divergent)
    }
}

/// One classified property: the verdict plus both routes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileEntry {
    pub verdict: TriState,
    pub adjunction_side: bool,
    pub fibration_side: bool,
}

fn entry(a: bool, b: bool) -> ProfileEntry {
    ProfileEntry { verdict: TriState::of(a, b), adjunction_side: a, fibration_side: b }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeometricProfile {
    pub injective: ProfileEntry,
    pub surjective: ProfileEntry,
    pub connected: ProfileEntry,
    pub hyperconnected: ProfileEntry,
    /// the subobject-equivalence characterisation of hyperconnectedness,
    /// kept separate: it is not equivalent to the counit one outside
    /// toposes
    pub hyperconnected_sub: ProfileEntry,
    pub local: ProfileEntry,
    pub locally_connected: ProfileEntry,
    /// posetal inputs degenerate several mono conditions; flagged, not
    /// inferred
    pub degenerate_posetal: bool,
}

impl GeometricProfile {
    pub fn any_divergent(&self) -> bool {
        [
            self.injective,
            self.surjective,
            self.connected,
            self.hyperconnected,
            self.hyperconnected_sub,
            self.local,
            self.locally_connected,
        ]
        .iter()
        .any(|e| e.verdict.is_divergent())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
pub enum GmError {
    #[error("adjunction fails validation")]
    InvalidAdjunction,
    #[error("left adjoint is not left exact (witness cospan ({f},{g}))")]
    NotLeftExact { f: usize, g: usize },
}

/// Classifies a geometric morphism `F ⊣ U` through both the adjunction-side
/// characterisations and the fibration-side ones computed on `gl(F)`.
pub fn gm_classify(adj: &AdjunctionData) -> Result<GeometricProfile, GmError> {
    adj.validate().map_err(|_| GmError::InvalidAdjunction)?;
    let f = &adj.left;
    let u = &adj.right;
    let b = f.source.clone();
    let c = f.target.clone();
    // F must preserve finite limits.
    if let Some((cf, cg)) = non_preserved_pullback(f) {
        return Err(GmError::NotLeftExact { f: cf.0, g: cg.0 });
    }
    let gl = glueing(f).expect("glueing over a finite-limit base");
    let p = gl.fib.clone();
    let dg = delta_gamma(&p).expect("gl(F) of a geometric morphism is geometric");
    let fund_c = crate::construct::fundamental_fibration(&c).expect("target has pullbacks");
    verify_gamma_concrete_form(adj, &p, &dg, &gl, &fund_c);
    let terminals = crate::analyze::fibrewise_terminals(&p).expect("fibre terminals");

    // --- injective: U full and faithful vs ε_X cocartesian for all X.
    let u_ff = functor_full(u) && functor_faithful(u);
    let eps_cocart = dg
        .sections
        .iter()
        .all(|&(_, _, e)| p.is_cocartesian_arrow(Arr(e)));
    let injective = entry(u_ff, eps_cocart);

    // --- surjective: F reflects isos vs (1_u cocartesian ⟹ u iso).
    let f_reflects = b.arrows().all(|w| !c.is_iso(f.arr(w)) || b.is_iso(w));
    let one_u_criterion = b.arrows().all(|w| {
        !p.is_cocartesian_arrow(terminal_one_arrow(&p, &terminals, w)) || b.is_iso(w)
    });
    let surjective = entry(f_reflects, one_u_criterion);

    // --- connected: F full and faithful vs Γ preserves cocartesianness.
    let f_ff = functor_full(f) && functor_faithful(f);
    let gamma_cocart = p.total().arrows().all(|h| {
        !p.is_cocartesian_arrow(h) || dg.fund.fib.is_cocartesian_arrow(dg.gamma.arr(h))
    });
    let connected = entry(f_ff, gamma_cocart);

    // --- hyperconnected (counit form): connected and counit monos.
    let counit_monic = c.objects().all(|a| c.is_mono(adj.counit.at(a)));
    let eps_tilde_monic = p
        .total()
        .objects()
        .all(|x| is_fibre_mono(&p, dg.counit[x.0]));
    let hyperconnected = entry(f_ff && counit_monic, gamma_cocart && eps_tilde_monic);

    // --- hyperconnected (subobject form): Sub_B(I) ≃ Sub_C(FI) via F.
    let sub_equiv_a = b.objects().all(|i| subobjects_match_through(f, i));
    let sub_equiv_b = b
        .objects()
        .all(|i| vertical_subterminals_are_deltas(&p, &dg, &terminals, i));
    let hyperconnected_sub = entry(f_ff && sub_equiv_a, gamma_cocart && sub_equiv_b);

    // --- local: U has a right adjoint (and F fully faithful) vs Γ has a
    // fibred right adjoint.
    let u_right = matches!(find_right_adjoint(u, 1_000_000), AdjointResult::Found(_));
    let local_a = f_ff && u_right;
    let local_b = fibred_right_adjoint_exists(&dg.gamma, &p, &dg.fund.fib);
    let local = entry(local_a, local_b);

    // --- locally connected: L ⊣ F with the transpose-square condition vs
    // Δ has a fibred left adjoint.
    let lc_a = match find_left_adjoint(f, 1_000_000) {
        AdjointResult::Found(ladj) => transpose_squares_hold(&ladj, f),
        _ => false,
    };
    let lc_b = fibred_left_adjoint_exists(&dg.delta, &dg.fund.fib, &p);
    let locally_connected = entry(lc_a, lc_b);

    let degenerate_posetal = {
        let posetal = |k: &crate::cat::FinCat| {
            k.objects().all(|x| k.objects().all(|y| k.hom(x, y).len() <= 1))
        };
        posetal(&b) && posetal(&c)
    };
    Ok(GeometricProfile {
        injective,
        surjective,
        connected,
        hyperconnected,
        hyperconnected_sub,
        local,
        locally_connected,
        degenerate_posetal,
    })
}

fn functor_full(f: &FunctorData) -> bool {
    f.source.objects().all(|x| {
        f.source.objects().all(|y| {
            f.target
                .hom(f.ob(x), f.ob(y))
                .iter()
                .all(|&w| f.source.hom(x, y).iter().any(|&g| f.arr(g) == w))
        })
    })
}

fn functor_faithful(f: &FunctorData) -> bool {
    f.source.objects().all(|x| {
        f.source.objects().all(|y| {
            let hs = f.source.hom(x, y);
            hs.iter().all(|&g| hs.iter().all(|&h| g == h || f.arr(g) != f.arr(h)))
        })
    })
}

/// The first cospan whose canonical pullback is not preserved, if any;
/// terminal preservation is folded in through the empty-diagram case.
fn non_preserved_pullback(f: &FunctorData) -> Option<(Arr, Arr)> {
    let b = &f.source;
    let c = &f.target;
    if let Some(t) = crate::cat::terminal_object(b) {
        let img = f.ob(t);
        if !c.objects().all(|w| c.hom(w, img).len() == 1) {
            // report through a degenerate cospan at the terminal
            return Some((b.id(t), b.id(t)));
        }
    }
    for x in b.arrows() {
        for g in b.arrows() {
            if b.cod(x) != b.cod(g) {
                continue;
            }
            if let LimitResult::Found { canonical, .. } = find_limit(b, LimitShape::Pullback(x, g))
            {
                if !is_pullback_square(
                    c,
                    f.arr(x),
                    f.arr(g),
                    f.ob(canonical.apex),
                    f.arr(canonical.legs[0]),
                    f.arr(canonical.legs[1]),
                ) {
                    return Some((x, g));
                }
            }
        }
    }
    None
}

/// The locally-connected square condition: pullback squares over `F`-images transpose
/// to pullback squares over the base.
fn transpose_squares_hold(ladj: &AdjunctionData, f: &FunctorData) -> bool {
    let b = &f.source;
    let c = &f.target;
    let l = &ladj.left;
    let unit = &ladj.unit; // Id_C -> F L
    // enumerate squares a : A -> FI, b : B -> FJ, edge e : A -> B over F(w)
    for i in b.objects() {
        for j in b.objects() {
            for &w in b.hom(i, j) {
                for a_obj in c.objects() {
                    for &a in c.hom(a_obj, f.ob(i)) {
                        for b_obj in c.objects() {
                            for &bb in c.hom(b_obj, f.ob(j)) {
                                for &e in c.hom(a_obj, b_obj) {
                                    if c.compose(f.arr(w), a) != c.compose(bb, e) {
                                        continue;
                                    }
                                    let is_pb =
                                        is_pullback_square(c, bb, f.arr(w), a_obj, e, a);
                                    if !is_pb {
                                        continue;
                                    }
                                    // transpose: L(e) with the adjuncts of a and b
                                    let hat = |arrow: Arr, target: Obj| -> Arr {
                                        // â : L A -> I for a : A -> F I
                                        let la = l.arr(arrow);
                                        let dom = l.ob(c.dom(arrow));
                                        let _ = la;
                                        *b.hom(dom, target)
                                            .iter()
                                            .find(|&&cand| {
                                                c.compose(f.arr(cand), unit.at(c.dom(arrow)))
                                                    == Some(arrow)
                                            })
                                            .expect("adjunct exists")
                                    };
                                    let a_hat = hat(a, i);
                                    let b_hat = hat(bb, j);
                                    if !is_pullback_square(
                                        b,
                                        b_hat,
                                        w,
                                        l.ob(a_obj),
                                        l.arr(e),
                                        a_hat,
                                    ) {
                                        return false;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    true
}

/// Order isomorphism `Sub_B(I) ≅ Sub_C(F I)` through `F`.
fn subobjects_match_through(f: &FunctorData, i: Obj) -> bool {
    let b = &f.source;
    let c = &f.target;
    let subs_b = subobject_representatives(b, i);
    let subs_c = subobject_representatives(c, f.ob(i));
    // F maps subobjects of I to subobjects of FI; match representatives up
    // to iso-over-FI and require a bijection.
    let mut hit = vec![false; subs_c.len()];
    for &m in &subs_b {
        let fm = f.arr(m);
        if !c.is_mono(fm) {
            return false;
        }
        let Some(kix) = subs_c.iter().position(|&r| {
            c.hom(c.dom(fm), c.dom(r))
                .iter()
                .any(|&j| c.is_iso(j) && c.compose(r, j) == Some(fm))
        }) else {
            return false;
        };
        if std::mem::replace(&mut hit[kix], true) {
            return false;
        }
    }
    hit.iter().all(|&h| h)
}

/// Fibration-side subobject condition: every vertical fibre-mono into `1_I`
/// is, up to vertical iso, the Δ-image of a base subobject of `I`.
fn vertical_subterminals_are_deltas(
    p: &Arc<FibrationData>,
    dg: &DeltaGamma,
    terminals: &[Obj],
    i: Obj,
) -> bool {
    let total = p.total();
    let base = p.base();
    let one_i = terminals[i.0];
    // Δ of a base subobject m : I0 -> I: the Δ_P-image of the B²-arrow
    // (m, id_I) : m -> id_I, a vertical mono into Δ_P(id_I) ≅ 1_I.
    let subs: Vec<Arr> = subobject_representatives(base, i);
    let deltas: Vec<Arr> = subs
        .iter()
        .map(|&m| {
            let sq = dg.fund.arr_ix[&(m, base.id(i), m, base.id(i))];
            dg.delta.arr(sq)
        })
        .collect();
    // verticals into Δ_P(id_I); compare against verticals into 1_I through
    // the canonical iso Δ_P(id_I) ≅ 1_I (the collapse along id is id, so
    // they coincide here).
    let target = dg.delta.ob(dg.fund.obj_ix[&base.id(i)]);
    let monos: Vec<Arr> = total
        .arrows_to(target)
        .filter(|&m| is_fibre_mono(p, m))
        .collect();
    let _ = one_i;
    // every vertical mono is a delta-image up to vertical iso on the domain
    monos.iter().all(|&m| {
        deltas.iter().any(|&d| {
            total.hom(total.dom(m), total.dom(d)).iter().any(|&j| {
                p.is_vertical(j) && total.is_iso(j) && total.compose(d, j) == Some(m)
            })
        })
    })
}

/// A fibred right adjoint to `left : total(P) -> total(Q)` over the
/// identity: universal arrows with vertical counits, plus cartesianness of
/// the assembled right adjoint.
fn fibred_right_adjoint_exists(left: &FunctorData, p: &Arc<FibrationData>, q: &Arc<FibrationData>) -> bool {
    let tp = p.total().clone();
    let tq = q.total().clone();
    let mut r_obj: Vec<Obj> = Vec::with_capacity(tq.n_objects());
    for v in tq.objects() {
        let mut found = None;
        'cands: for x in tp.objects() {
            if p.base_of(x) != q.base_of(v) {
                continue;
            }
            for &eps in tq.hom(left.ob(x), v) {
                if !q.is_vertical(eps) {
                    continue;
                }
                let universal = tp.objects().all(|z| {
                    tq.hom(left.ob(z), v).iter().all(|&g| {
                        tp.hom(z, x)
                            .iter()
                            .filter(|&&h| tq.compose(eps, left.arr(h)) == Some(g))
                            .count()
                            == 1
                    })
                });
                if universal {
                    found = Some(x);
                    break 'cands;
                }
            }
        }
        match found {
            Some(x) => r_obj.push(x),
            None => return false,
        }
    }
    // Vertical counits force vertical units, and an ordinary adjunction
    // between fibrations over the same base with vertical unit and counit
    // components is automatically fibred; existence of the vertical
    // universal arrows therefore decides the question.
    true
}

/// Dual: fibred left adjoint to `left : total(P) -> total(Q)`.
fn fibred_left_adjoint_exists(functor: &FunctorData, p: &Arc<FibrationData>, q: &Arc<FibrationData>) -> bool {
    let tp = p.total().clone();
    let tq = q.total().clone();
    for v in tq.objects() {
        let mut found = false;
        'cands: for x in tp.objects() {
            if p.base_of(x) != q.base_of(v) {
                continue;
            }
            for &eta in tq.hom(v, functor.ob(x)) {
                if !q.is_vertical(eta) {
                    continue;
                }
                let universal = tp.objects().all(|z| {
                    tq.hom(v, functor.ob(z)).iter().all(|&g| {
                        tp.hom(x, z)
                            .iter()
                            .filter(|&&h| tq.compose(functor.arr(h), eta) == Some(g))
                            .count()
                            == 1
                    })
                });
                if universal {
                    found = true;
                    break 'cands;
                }
            }
        }
        if !found {
            return false;
        }
    }
    true
}

/// Concrete-form cross-check: the abstract `Γ_P` of `gl(F)` agrees fibrewise, up
/// to canonical iso, with `η_I^* ∘ U_{/I}`.
fn verify_gamma_concrete_form(
    adj: &AdjunctionData,
    p: &Arc<FibrationData>,
    dg: &DeltaGamma,
    gl: &crate::construct::BaseChange,
    fund_c: &crate::construct::Fundamental,
) {
    let f = &adj.left;
    let u = &adj.right;
    let b = &f.source;
    // per total object X = (I, a : A -> FI): the concrete Γ-fibre object is
    // the pullback of U(a) along η_I; the abstract one is P(ε_X).
    for x in p.total().objects() {
        let i = p.base_of(x);
        // recover a : A -> FI from the glueing pair (I, fund-total object
        // of C over F).
        let a_arrow = fund_c.obj_arrow[gl.obj_pairs[x.0].1 .0];
        let ua = u.arr(a_arrow);
        let eta_i = adj.unit.at(i);
        let LimitResult::Found { canonical, .. } =
            find_limit(b, LimitShape::Pullback(ua, eta_i))
        else {
            panic!("base has pullbacks");
        };
        // canonical cone over cospan (U a, η_I): legs to dom(Ua) = UA and
        // to I; the concrete Γ object is the leg to I.
        let concrete: Arr = canonical.legs[1];
        let abstract_obj = dg.fund.obj_arrow[dg.gamma.ob(x).0];
        // same subobject-of-I-shaped object up to base iso commuting with
        // the projections to I.
        let same = b.hom(b.dom(abstract_obj), b.dom(concrete)).iter().any(|&j| {
            b.is_iso(j) && b.compose(concrete, j) == Some(abstract_obj)
        });
        assert!(same, "abstract and concrete Γ agree up to canonical iso");
    }
}
