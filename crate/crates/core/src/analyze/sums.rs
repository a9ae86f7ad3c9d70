use std::sync::Arc;

use serde::Serialize;

use crate::cat::{find_limit, Arr, Cone, LimitResult, LimitShape, Obj};
use crate::fib::FibrationData;

use super::util::pullback_squares;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InternalSumsVerdict {
    pub lifts: bool,
    pub bcc: bool,
    pub has_sums: bool,
    /// least (u, X) without a cocartesian lift
    pub lift_counterexample: Option<(usize, usize)>,
    /// least BCC violation: (square, φ, ψ, ψ̃, φ̃)
    pub bcc_counterexample: Option<(usize, usize, usize, usize)>,
}

/// Def-level internal sums: cocartesian lifts plus the Beck–Chevalley
/// condition over every base pullback square. The dual reading of BCC is
/// decided as well and agreement asserted.
pub fn has_internal_sums(p: &Arc<FibrationData>) -> InternalSumsVerdict {
    let total = p.total().clone();
    let lifts = p.verdict().opfibration;
    let lift_counterexample = p.verdict().cocart_counterexample;
    let squares = pullback_squares(p.base());
    let mut bcc = true;
    let mut bcc_counterexample = None;
    // primary form: ψ, ψ̃ cartesian, φ cocartesian  ⟹  φ̃ cocartesian
    'outer: for sq in &squares {
        for phi in total.arrows() {
            if p.over(phi) != sq.bot || !p.is_cocartesian_arrow(phi) {
                continue;
            }
            for psi in total.arrows() {
                if p.over(psi) != sq.right
                    || !p.is_cartesian(psi)
                    || total.cod(psi) != total.cod(phi)
                {
                    continue;
                }
                for psi_t in total.arrows() {
                    if p.over(psi_t) != sq.left
                        || !p.is_cartesian(psi_t)
                        || total.cod(psi_t) != total.dom(phi)
                    {
                        continue;
                    }
                    for &phi_t in total.hom(total.dom(psi_t), total.dom(psi)) {
                        if p.over(phi_t) != sq.top {
                            continue;
                        }
                        if total.compose(psi, phi_t) != total.compose(phi, psi_t) {
                            continue;
                        }
                        if !p.is_cocartesian_arrow(phi_t) {
                            bcc = false;
                            bcc_counterexample = Some((phi.0, psi.0, psi_t.0, phi_t.0));
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    // dual reading: φ, φ̃ cocartesian, ψ̃ cartesian ⟹ ψ cartesian
    let mut bcc_dual = true;
    'outer2: for sq in &squares {
        for phi in total.arrows() {
            if p.over(phi) != sq.bot || !p.is_cocartesian_arrow(phi) {
                continue;
            }
            for psi_t in total.arrows() {
                if p.over(psi_t) != sq.left
                    || !p.is_cartesian(psi_t)
                    || total.cod(psi_t) != total.dom(phi)
                {
                    continue;
                }
                for phi_t in total.arrows_from(total.dom(psi_t)) {
                    if p.over(phi_t) != sq.top || !p.is_cocartesian_arrow(phi_t) {
                        continue;
                    }
                    for &psi in total.hom(total.cod(phi_t), total.cod(phi)) {
                        if p.over(psi) != sq.right {
                            continue;
                        }
                        if total.compose(psi, phi_t) != total.compose(phi, psi_t) {
                            continue;
                        }
                        if !p.is_cartesian(psi) {
                            bcc_dual = false;
                            break 'outer2;
                        }
                    }
                }
            }
        }
    }
    if lifts && p.is_fibration() {
        assert_eq!(bcc, bcc_dual, "the two BCC readings agree on bifibrations");
    }
    InternalSumsVerdict { lifts, bcc, has_sums: lifts && bcc, lift_counterexample, bcc_counterexample }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InternalProductsVerdict {
    pub evaluation_spans: bool,
    pub bcc: bool,
    pub has_products: bool,
    /// least (u, X over dom u) with no evaluation span
    pub counterexample: Option<(usize, usize)>,
}

/// An evaluation span for `X` along `u`: `(φ : u*E -> E cartesian over u,
/// ε : u*E -> X vertical)` with the universal property of internal
/// products.
fn evaluation_spans(p: &FibrationData, u: Arr, x: Obj) -> Vec<(Arr, Arr)> {
    let total = p.total();
    let mut out = Vec::new();
    for phi in total.arrows() {
        if p.over(phi) != u || !p.is_cartesian(phi) {
            continue;
        }
        for &eps in total.hom(total.dom(phi), x) {
            if !p.is_vertical(eps) {
                continue;
            }
            if is_evaluation_span(p, u, x, phi, eps) {
                out.push((phi, eps));
            }
        }
    }
    out
}

fn is_evaluation_span(p: &FibrationData, u: Arr, x: Obj, phi: Arr, eps: Arr) -> bool {
    let total = p.total();
    // for every span (θ : u*Z -> Z cartesian over u, α : u*Z -> X vertical)
    // there is a unique vertical β : Z -> E with α = ε ∘ u*β.
    for theta in total.arrows() {
        if p.over(theta) != u || !p.is_cartesian(theta) {
            continue;
        }
        for &alpha in total.hom(total.dom(theta), x) {
            if !p.is_vertical(alpha) {
                continue;
            }
            let candidates = total
                .hom(total.cod(theta), total.cod(phi))
                .iter()
                .filter(|&&beta| {
                    if !p.is_vertical(beta) {
                        return false;
                    }
                    // u*β : unique vertical with φ ∘ u*β = β ∘ θ
                    let rhs = total.compose(beta, theta).expect("composable");
                    let Some(ub) = p.vertical_factor_through(phi, rhs) else {
                        return false;
                    };
                    total.compose(eps, ub) == Some(alpha)
                })
                .count();
            if candidates != 1 {
                return false;
            }
        }
    }
    true
}

/// Internal products: evaluation spans for every `(u, X)` plus the
/// product-form BCC (stability of evaluation spans across base pullbacks).
pub fn has_internal_products(p: &Arc<FibrationData>) -> InternalProductsVerdict {
    let total = p.total().clone();
    let base = p.base().clone();
    let mut evaluation = true;
    let mut counterexample = None;
    'outer: for u in base.arrows() {
        for x in p.fibre_objects(base.dom(u)) {
            if evaluation_spans(p, u, x).is_empty() {
                evaluation = false;
                counterexample = Some((u.0, x.0));
                break 'outer;
            }
        }
    }
    let mut bcc = true;
    if evaluation {
        // (ii): for every base pullback (ṽ : L -> I top, ũ : L -> K left,
        // u : I -> J right, v : K -> J bottom) and every evaluation span
        // (φ, ε) for (u, X): each transported span is again one.
        'outer2: for sq in &pullback_squares(&base) {
            let (v_t, u_t, u, v) = (sq.top, sq.left, sq.right, sq.bot);
            for x in p.fibre_objects(base.dom(u)) {
                for (phi, eps) in evaluation_spans(p, u, x) {
                    // ψ : ṽ*X -> X cartesian over ṽ
                    for psi in total.arrows_to(x) {
                        if p.over(psi) != v_t || !p.is_cartesian(psi) {
                            continue;
                        }
                        // θ̃ : ũ*Ẽ -> u*E cartesian over ṽ, θ : Ẽ -> E over v
                        for theta_t in total.arrows_to(total.dom(phi)) {
                            if p.over(theta_t) != v_t || !p.is_cartesian(theta_t) {
                                continue;
                            }
                            for theta in total.arrows_to(total.cod(phi)) {
                                if p.over(theta) != v || !p.is_cartesian(theta) {
                                    continue;
                                }
                                for &phi_t in
                                    total.hom(total.dom(theta_t), total.dom(theta))
                                {
                                    if p.over(phi_t) != u_t
                                        || !p.is_cartesian(phi_t)
                                        || total.compose(theta, phi_t)
                                            != total.compose(phi, theta_t)
                                    {
                                        continue;
                                    }
                                    for &eps_t in
                                        total.hom(total.dom(theta_t), total.dom(psi))
                                    {
                                        if !p.is_vertical(eps_t)
                                            || total.compose(psi, eps_t)
                                                != total.compose(eps, theta_t)
                                        {
                                            continue;
                                        }
                                        if !is_evaluation_span(
                                            p,
                                            u_t,
                                            total.dom(psi),
                                            phi_t,
                                            eps_t,
                                        ) {
                                            bcc = false;
                                            break 'outer2;
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    InternalProductsVerdict {
        evaluation_spans: evaluation,
        bcc,
        has_products: evaluation && bcc,
        counterexample,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SumsProfile {
    pub stable: bool,
    pub disjoint: bool,
    pub extensive: bool,
    pub lawvere_extensive: Option<bool>,
    /// if φ and φ∘ψ are cocartesian then ψ is cocartesian
    pub cond2: bool,
    /// vertical α with φ, φ∘α cocartesian is an iso
    pub cond3: bool,
    /// cocart/vertical squares are pullbacks
    pub cond4: bool,
    /// cocartesian arrows stable under pullback along verticals
    pub vertical_stable: bool,
    pub divergences: Vec<String>,
}

/// The canonical pullback of a cospan `(f, g)` in the total category.
fn total_pullback(p: &FibrationData, f: Arr, g: Arr) -> Option<Cone> {
    match find_limit(p.total(), LimitShape::Pullback(f, g)) {
        LimitResult::Found { canonical, .. } => Some(canonical),
        LimitResult::Absent { .. } => None,
    }
}

/// Stability, disjointness, extensivity and the related conditions, each
/// decided independently; the pairwise agreements demanded by the lemmas
/// are checked under their hypotheses and divergences reported.
pub fn sums_profile(p: &Arc<FibrationData>) -> SumsProfile {
    let total = p.total().clone();
    let cocarts: Vec<Arr> = total.arrows().filter(|&f| p.is_cocartesian_arrow(f)).collect();

    // stable: every pullback of a cocartesian arrow is cocartesian.
    let mut stable = true;
    let mut vertical_stable = true;
    for &phi in &cocarts {
        for h in total.arrows_to(total.cod(phi)) {
            match total_pullback(p, phi, h) {
                Some(cone) => {
                    // the pullback of φ along h is the leg onto dom h
                    let leg = cone.legs[1];
                    if !p.is_cocartesian_arrow(leg) {
                        stable = false;
                        if p.is_vertical(h) {
                            vertical_stable = false;
                        }
                    }
                }
                None => {
                    stable = false;
                    if p.is_vertical(h) {
                        vertical_stable = false;
                    }
                }
            }
        }
    }

    // disjoint: fibrewise diagonals of cocartesian arrows are cocartesian.
    let mut disjoint = true;
    for &phi in &cocarts {
        match total_pullback(p, phi, phi) {
            Some(cone) => {
                let delta = total
                    .hom(total.dom(phi), cone.apex)
                    .iter()
                    .copied()
                    .find(|&d| {
                        total.compose(cone.legs[0], d) == Some(total.id(total.dom(phi)))
                            && total.compose(cone.legs[1], d) == Some(total.id(total.dom(phi)))
                    });
                match delta {
                    Some(d) => {
                        if !p.is_cocartesian_arrow(d) {
                            disjoint = false;
                        }
                    }
                    None => disjoint = false,
                }
            }
            None => disjoint = false,
        }
    }

    // (2) φ, φ∘ψ cocartesian ⟹ ψ cocartesian
    let mut cond2 = true;
    'c2: for &phi in &cocarts {
        for psi in total.arrows_to(total.dom(phi)) {
            let comp = total.compose(phi, psi).expect("composable");
            if p.is_cocartesian_arrow(comp) && !p.is_cocartesian_arrow(psi) {
                cond2 = false;
                break 'c2;
            }
        }
    }
    // (3) vertical α with φ, φ∘α cocartesian ⟹ α iso
    let mut cond3 = true;
    'c3: for &phi in &cocarts {
        for alpha in total.arrows_to(total.dom(phi)) {
            if !p.is_vertical(alpha) {
                continue;
            }
            let comp = total.compose(phi, alpha).expect("composable");
            if p.is_cocartesian_arrow(comp) && !total.is_iso(alpha) {
                cond3 = false;
                break 'c3;
            }
        }
    }
    // (4) commuting cocart/vertical squares are pullbacks
    let mut cond4 = true;
    'c4: for &phi in &cocarts {
        for &psi in &cocarts {
            for &alpha in total.hom(total.dom(phi), total.dom(psi)).iter() {
                if !p.is_vertical(alpha) {
                    continue;
                }
                for &beta in total.hom(total.cod(phi), total.cod(psi)).iter() {
                    if !p.is_vertical(beta) {
                        continue;
                    }
                    if total.compose(psi, alpha) != total.compose(beta, phi) {
                        continue;
                    }
                    if !crate::cat::is_pullback_square(
                        &total,
                        psi,
                        beta,
                        total.dom(phi),
                        alpha,
                        phi,
                    ) {
                        cond4 = false;
                        break 'c4;
                    }
                }
            }
        }
    }
    // extensive: squares over a cocartesian bottom edge with vertical sides
    // are pullbacks exactly when the top edge is cocartesian.
    let mut extensive = true;
    'ext: for &psi in &cocarts {
        for alpha in total.arrows_to(total.dom(psi)) {
            if !p.is_vertical(alpha) {
                continue;
            }
            for beta in total.arrows_to(total.cod(psi)) {
                if !p.is_vertical(beta) {
                    continue;
                }
                for &phi in total.hom(total.dom(alpha), total.dom(beta)) {
                    if total.compose(psi, alpha) != total.compose(beta, phi) {
                        continue;
                    }
                    let is_pb = crate::cat::is_pullback_square(
                        &total,
                        psi,
                        beta,
                        total.dom(alpha),
                        alpha,
                        phi,
                    );
                    if is_pb != p.is_cocartesian_arrow(phi) {
                        extensive = false;
                        break 'ext;
                    }
                }
            }
        }
    }
    // Lawvere extensivity needs fibrewise terminals and a base terminal.
    let lawvere_extensive = lawvere_extensivity(p, &cocarts);

    let mut divergences = Vec::new();
    if stable {
        for (name, v) in [("(2)", cond2), ("(3)", cond3), ("(4)", cond4)] {
            if disjoint != v {
                divergences.push(format!("disjoint(1) vs {name} under stability"));
            }
        }
    }
    if vertical_stable {
        if cond2 != cond3 {
            divergences.push("(2) vs (3) under vertical stability".into());
        }
        if cond3 != cond4 {
            divergences.push("(3) vs (4) under vertical stability".into());
        }
    }
    if (stable && disjoint) != extensive {
        // extensiveMoensLem (1) ⟺ (2) assumes internal sums and fibrewise
        // finite limits; report only under those hypotheses.
        if has_internal_sums(p).has_sums && super::limits_profile::fibred_finite_limits(p) {
            divergences.push("stable+disjoint vs extensive".into());
        }
    }
    if let Some(le) = lawvere_extensive {
        if vertical_stable && extensive != le {
            divergences.push("extensive vs Lawvere-extensive under vertical stability".into());
        }
    }
    SumsProfile {
        stable,
        disjoint,
        extensive,
        lawvere_extensive,
        cond2,
        cond3,
        cond4,
        vertical_stable,
        divergences,
    }
}

fn lawvere_extensivity(p: &Arc<FibrationData>, _cocarts: &[Arr]) -> Option<bool> {
    let total = p.total().clone();
    let base = p.base().clone();
    let one = crate::cat::terminal_object(&base)?;
    // fibrewise terminal 1_I per fibre, and the cocartesian lift along !_I.
    let mut ok = true;
    for i in base.objects() {
        let fibre = crate::fib::fibre(p, i);
        let t = crate::cat::terminal_object(&fibre.cat)?;
        let one_i = fibre.objs[t.0];
        let bang = base.hom(i, one).first().copied()?;
        let lift = p.cocartesian_lift(bang, one_i).ok()?;
        let phi_i = lift.canonical;
        // squares (α : X -> 1_I, β : U -> ∐_I 1_I vertical, φ : X -> U):
        // φ cocartesian iff the square is a pullback.
        for alpha in total.arrows_to(one_i) {
            if !p.is_vertical(alpha) {
                continue;
            }
            for beta in total.arrows_to(total.cod(phi_i)) {
                if !p.is_vertical(beta) {
                    continue;
                }
                for &phi in total.hom(total.dom(alpha), total.dom(beta)) {
                    if total.compose(phi_i, alpha) != total.compose(beta, phi) {
                        continue;
                    }
                    let is_pb = crate::cat::is_pullback_square(
                        &total,
                        phi_i,
                        beta,
                        total.dom(alpha),
                        alpha,
                        phi,
                    );
                    if is_pb != p.is_cocartesian_arrow(phi) {
                        ok = false;
                    }
                }
            }
        }
    }
    Some(ok)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum GlobalSections {
    Found {
        /// G(X) per total object, with the counit arrow ε_X
        table: Vec<(usize, usize, usize)>,
    },
    Absent { witness: usize },
    NoFibrewiseTerminals { witness: usize },
}

/// Fibrewise terminal objects `1_I` (with stability under reindexing), as
/// total-category objects, when they exist.
pub fn fibrewise_terminals(p: &Arc<FibrationData>) -> Result<Vec<Obj>, usize> {
    let base = p.base();
    let mut out = Vec::new();
    for i in base.objects() {
        let fibre = crate::fib::fibre(p, i);
        let Some(t) = crate::cat::terminal_object(&fibre.cat) else {
            return Err(i.0);
        };
        out.push(fibre.objs[t.0]);
    }
    // stability: u*(1_I) is terminal in its fibre
    for u in base.arrows() {
        let one_i = out[base.cod(u).0];
        let lift = p.cartesian_lift(u, one_i).map_err(|_| base.cod(u).0)?;
        let dom = p.total().dom(lift.canonical);
        let fibre = crate::fib::fibre(p, base.dom(u));
        let local = fibre.obj_index(dom).expect("reindexed object in fibre");
        let terminal = fibre
            .cat
            .objects()
            .all(|w| fibre.cat.hom(w, local).len() == 1);
        if !terminal {
            return Err(base.dom(u).0);
        }
    }
    Ok(out)
}

/// The unique arrow `1_J -> 1_I` over `u` between fibrewise terminals.
pub fn terminal_one_arrow(p: &FibrationData, terminals: &[Obj], u: Arr) -> Arr {
    let total = p.total();
    let base = p.base();
    let (j, i) = (base.dom(u), base.cod(u));
    let cands: Vec<Arr> = total
        .hom(terminals[j.0], terminals[i.0])
        .iter()
        .copied()
        .filter(|&f| p.over(f) == u)
        .collect();
    assert_eq!(cands.len(), 1, "unique arrow into an indexed family of terminals");
    cands[0]
}

/// Small global sections: a right adjoint `G` to the fibrewise-terminal
/// functor, decided through terminal objects of the comma categories
/// `(1 ↓ X)`.
pub fn has_small_global_sections(p: &Arc<FibrationData>) -> GlobalSections {
    let terminals = match fibrewise_terminals(p) {
        Ok(t) => t,
        Err(witness) => return GlobalSections::NoFibrewiseTerminals { witness },
    };
    let total = p.total();
    let base = p.base();
    let one_arrow = |u: Arr| -> Arr { terminal_one_arrow(p, &terminals, u) };
    let mut table = Vec::new();
    for x in total.objects() {
        // terminal object of (1 ↓ X): (GX, ε_X : 1_{GX} -> X) with every
        // σ : 1_J -> X factoring as ε_X ∘ 1_v for exactly one v.
        let mut found = None;
        'cands: for gx in base.objects() {
            for &eps in total.hom(terminals[gx.0], x) {
                let universal = base.objects().all(|j| {
                    total
                        .hom(terminals[j.0], x)
                        .iter()
                        .all(|&sigma| {
                            base.hom(j, gx)
                                .iter()
                                .filter(|&&v| {
                                    total.compose(eps, one_arrow(v)) == Some(sigma)
                                })
                                .count()
                                == 1
                        })
                });
                if universal {
                    found = Some((gx, eps));
                    break 'cands;
                }
            }
        }
        match found {
            Some((gx, eps)) => table.push((x.0, gx.0, eps.0)),
            None => return GlobalSections::Absent { witness: x.0 },
        }
    }
    GlobalSections::Found { table }
}
