/*! Glueing reconstruction, geometric-morphism classification, and adjoints
to change of base. */

mod cbadj;
mod delta;
mod gamma;
mod genfam;
mod gm;

pub use cbadj::{
    distributor_change_of_base, localize, pi_f, sigma_f_fibre, CbAdjError, DistributorData,
    DistributorError, Localization, SumFibre,
};
pub use delta::{
    cor_moens_sweeps, delta_functor, gen_moens, moens_reconstruct, verify_delta_preserves_limits,
    DeltaData, GenMoensVerdict, MoensError, MoensVerdict,
};
pub use gamma::{delta_gamma, DeltaGamma, DeltaGammaError};
pub use genfam::{
    cocartesian_mono_sweep, generating_family_tests, sums_iff_fam_adjoint, FamAdjointVerdict, GenFamError,
    GenFamReport,
};
pub use gm::{gm_classify, GeometricProfile, GmError, ProfileEntry, TriState};

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::analyze::{has_internal_sums, sums_profile};
    use crate::cat::{
        categories_equivalent, find_right_adjoint, AdjointResult, AdjunctionData, Arr, FinCat,
        FunctorData, Obj,
    };
    use crate::construct::{change_of_base, fundamental_fibration, glueing, grothendieck};
    use crate::corpus::{
        bang, cyclic, d2, discrete_presheaf, hwarn, n5, ordinal2, pmod, poset_functor, wedge,
    };
    use crate::fib::FibrationData;

    fn incl_2_d2() -> FunctorData {
        poset_functor(&ordinal2(), &d2(), &[0, 3])
    }

    fn adjunction_of(f: &FunctorData) -> AdjunctionData {
        match find_right_adjoint(f, 1_000_000) {
            AdjointResult::Found(adj) => adj,
            other => panic!("adjoint expected: {other:?}"),
        }
    }

    #[test]
    fn delta_of_glued_inclusion_matches_f() {
        // Δ for gl(F : 2 -> D2) recovers F through the slice over F(1) = ⊤.
        let f = incl_2_d2();
        let gl = glueing(&f).unwrap();
        let d = delta_functor(&gl.fib).unwrap();
        verify_delta_preserves_limits(&gl.fib, &d);
        // The fibre over 1 is D2/⊤ ≅ D2; Δ(I) is a slice object whose
        // underlying D2-object must be F(I).
        let fund_d2 = fundamental_fibration(&d2()).unwrap();
        let _ = fund_d2;
        // decode Δ(I) through the glueing pairs: the fibre-over-1 object
        // sits over ⊤ and is an arrow into ⊤ of D2 with domain F(I).
        for i in gl.fib.base().objects() {
            let obj_local = d.delta.ob(i);
            let total_obj = d.fibre_one.objs[obj_local.0];
            let fund_obj = gl.obj_pairs[total_obj.0].1;
            let arrow_into_top = fundamental_fibration(&d2()).unwrap().obj_arrow[fund_obj.0];
            assert_eq!(d2().dom(arrow_into_top), f.ob(i));
        }
    }

    #[test]
    fn moens_roundtrip_on_glued_inclusion() {
        let gl = glueing(&incl_2_d2()).unwrap();
        let (verdict, _, _) = moens_reconstruct(&gl.fib).unwrap();
        assert!(verdict.equivalence);
    }

    #[test]
    fn moens_roundtrip_on_fundamental_fibrations() {
        for b in [d2(), n5()] {
            let p = fundamental_fibration(&b).unwrap().fib;
            let (verdict, d, _) = moens_reconstruct(&p).unwrap();
            assert!(verdict.equivalence);
            // cod = gl(id): Δ is the identity up to the slice encoding.
            for i in b.objects() {
                let total_obj = d.fibre_one.objs[d.delta.ob(i).0];
                let arrow = fundamental_fibration(&b).unwrap().obj_arrow[total_obj.0];
                assert_eq!(b.dom(arrow), i);
            }
        }
    }

    #[test]
    fn moens_rejects_nondisjoint_sums() {
        let g = grothendieck(&wedge()).unwrap();
        assert!(matches!(
            moens_reconstruct(&g.fib),
            Err(MoensError::PreconditionFailed(_))
        ));
    }

    #[test]
    fn wedge_profile_fails_everything_together() {
        let g = grothendieck(&wedge()).unwrap();
        assert!(g.fib.verdict().bifibration);
        // Cocartesian lifts exist but BCC cannot: over a poset base the
        // kernel-square instance of BCC forces the unit X -> u*∐X to be
        // invertible, which makes sums disjoint; a non-disjoint example
        // necessarily gives up BCC.
        let sums = has_internal_sums(&g.fib);
        assert!(sums.lifts && !sums.bcc);
        let profile = sums_profile(&g.fib);
        assert!(!profile.disjoint);
        assert!(!profile.stable);
        assert!(!profile.cond2 && !profile.cond3 && !profile.cond4);
        assert!(profile.vertical_stable);
        assert!(profile.divergences.is_empty());
    }

    #[test]
    fn gen_moens_conditions_on_wedge_all_false() {
        let g = grothendieck(&wedge()).unwrap();
        let v = gen_moens(&g.fib).unwrap();
        assert!(!v.cond1 && !v.cond2 && !v.cond3);
        assert_eq!(v.equivalence, None);
    }

    #[test]
    fn gen_moens_on_glueing_of_terminal_preserving_f() {
        // F : D2 -> D2 preserving ⊤ but not meets: gl(F) passes the
        // generalised reconstruction even though BCC (hence full internal
        // sums) fails.
        let d = d2();
        let f = poset_functor(&d, &d, &[0, 3, 2, 3]);
        let gl = glueing(&f).unwrap();
        assert!(gl.fib.verdict().bifibration);
        let sums = has_internal_sums(&gl.fib);
        assert!(sums.lifts && !sums.bcc, "BCC fails when F does not preserve pullbacks");
        let v = gen_moens(&gl.fib).unwrap();
        assert!(v.cond1 && v.cond2 && v.cond3);
        assert_eq!(v.equivalence, Some(true));
    }

    #[test]
    fn gen_moens_on_left_exact_glueing() {
        let gl = glueing(&incl_2_d2()).unwrap();
        let v = gen_moens(&gl.fib).unwrap();
        assert!(v.cond1 && v.cond2 && v.cond3);
        assert_eq!(v.equivalence, Some(true));
    }

    #[test]
    fn pullback_preservation_iff_glueing_has_sums() {
        // the change-of-base preservation lemma, instance-checked: F
        // preserves pullbacks iff gl(F) has internal sums.
        let d = d2();
        let cases = [
            (incl_2_d2(), true),
            (poset_functor(&d, &d, &[0, 3, 2, 3]), false),
            (poset_functor(&d, &ordinal2(), &[0, 0, 0, 1]), true),
        ];
        for (f, expect) in cases {
            let preserves = {
                let b = &f.source;
                let c = &f.target;
                b.arrows().all(|x| {
                    b.arrows().all(|g| {
                        if b.cod(x) != b.cod(g) {
                            return true;
                        }
                        match crate::cat::find_limit(b, crate::cat::LimitShape::Pullback(x, g)) {
                            crate::cat::LimitResult::Found { canonical, .. } => {
                                crate::cat::is_pullback_square(
                                    c,
                                    f.arr(x),
                                    f.arr(g),
                                    f.ob(canonical.apex),
                                    f.arr(canonical.legs[0]),
                                    f.arr(canonical.legs[1]),
                                )
                            }
                            _ => false,
                        }
                    })
                })
            };
            assert_eq!(preserves, expect);
            let gl = glueing(&f).unwrap();
            assert_eq!(has_internal_sums(&gl.fib).has_sums, expect);
            // and F* preserves having-internal-sums on the fundamental
            // fibration instance
            let fund = fundamental_fibration(&f.target).unwrap();
            let pulled = change_of_base(&fund.fib, &f);
            assert_eq!(has_internal_sums(&pulled.fib).has_sums, expect);
        }
    }

    #[test]
    fn delta_gamma_on_glued_inclusion() {
        let gl = glueing(&incl_2_d2()).unwrap();
        let dg = delta_gamma(&gl.fib).unwrap();
        assert_eq!(dg.unit.len(), dg.fund.fib.total().n_objects());
        assert_eq!(dg.counit.len(), gl.fib.total().n_objects());
    }

    #[test]
    fn delta_gamma_degenerates_over_terminal_base() {
        let t = Arc::new(FinCat::terminal());
        let p = Arc::new(FibrationData::new(FunctorData::identity(&t)).unwrap());
        let dg = delta_gamma(&p).unwrap();
        assert_eq!(dg.sections.len(), 1);
    }

    #[test]
    fn gm_identity_adjunction_all_true() {
        let d = d2();
        let adj = adjunction_of(&FunctorData::identity(&d));
        let profile = gm_classify(&adj).unwrap();
        for e in [
            profile.injective,
            profile.surjective,
            profile.connected,
            profile.hyperconnected,
            profile.hyperconnected_sub,
            profile.local,
            profile.locally_connected,
        ] {
            assert_eq!(e.verdict, TriState::True);
        }
        assert!(profile.degenerate_posetal);
    }

    #[test]
    fn gm_lattice_inclusion_profile() {
        // F : 2 -> D2: connected (order-reflecting hence full), surjective
        // (strictly monotone reflects isos), not injective (U collapses a).
        let adj = adjunction_of(&incl_2_d2());
        let profile = gm_classify(&adj).unwrap();
        assert!(!profile.any_divergent());
        assert_eq!(profile.connected.verdict, TriState::True);
        assert_eq!(profile.surjective.verdict, TriState::True);
        assert_eq!(profile.injective.verdict, TriState::False);
        assert_eq!(profile.local.verdict, TriState::False);
    }

    #[test]
    fn gm_projection_is_injective() {
        // F = (x ≥ a) : D2 -> 2 with right adjoint U(⊥) = b: injective.
        let d = d2();
        let f = poset_functor(&d, &ordinal2(), &[0, 1, 0, 1]);
        let adj = adjunction_of(&f);
        let profile = gm_classify(&adj).unwrap();
        assert!(!profile.any_divergent());
        assert_eq!(profile.injective.verdict, TriState::True);
        assert_eq!(profile.connected.verdict, TriState::False);
    }

    #[test]
    fn gm_rejects_non_left_exact() {
        let d = d2();
        // preserves ⊤ but not the meet a ∧ b; no right adjoint either, so
        // build the adjunction by hand from the collapse D2 -> 2 that does
        // have one, then corrupt is impossible — instead check the error
        // from a functor with a right adjoint but broken limits: x ≥ a is
        // lex, so use instead the non-lex F with its Galois partner on the
        // image sublattice.
        let f = poset_functor(&d, &d, &[0, 3, 2, 3]);
        match find_right_adjoint(&f, 1_000_000) {
            AdjointResult::Found(adj) => {
                assert!(matches!(gm_classify(&adj), Err(GmError::NotLeftExact { .. })));
            }
            _ => {
                // no adjunction to classify; the lex check is exercised via
                // the glueing lemma test above
            }
        }
    }

    #[test]
    fn pi_along_identity_is_p() {
        let g = grothendieck(&discrete_presheaf()).unwrap();
        let two = ordinal2();
        let pi = pi_f(&FunctorData::identity(&two), &g.fib, 1_000_000).unwrap();
        assert!(categories_equivalent(pi.fib.total(), g.fib.total(), 1_000_000).is_equivalent());
    }

    #[test]
    fn pi_matches_right_adjoint_change_of_base() {
        // ∏_F ≃ U* when F ⊣ U.
        let f = incl_2_d2();
        let adj = adjunction_of(&f);
        let g = grothendieck(&discrete_presheaf()).unwrap();
        let pi = pi_f(&f, &g.fib, 1_000_000).unwrap();
        let ustar = change_of_base(&g.fib, &adj.right);
        assert!(
            categories_equivalent(pi.fib.total(), ustar.fib.total(), 1_000_000).is_equivalent()
        );
    }

    #[test]
    fn sigma_fibre_along_identity_is_the_fibre() {
        let g = grothendieck(&discrete_presheaf()).unwrap();
        let two = ordinal2();
        for i in 0..2usize {
            let s = sigma_f_fibre(&FunctorData::identity(&two), &g.fib, Obj(i), 64).unwrap();
            let fibre = crate::fib::fibre(&g.fib, Obj(i));
            assert!(categories_equivalent(&s.cat, &fibre.cat, 1_000_000).is_equivalent());
        }
    }

    #[test]
    fn sigma_over_terminal_base_inverts_cartesians() {
        // all cartesian arrows of pmod are isos, so the localization is the
        // total category itself up to equivalence.
        let p = Arc::new(FibrationData::new(pmod()).unwrap());
        let s = sigma_f_fibre(&bang(&cyclic(2)), &p, Obj(0), 64).unwrap();
        assert!(categories_equivalent(&s.cat, &cyclic(4), 1_000_000).is_equivalent());
    }

    #[test]
    fn distributor_of_functor_matches_change_of_base() {
        let f = incl_2_d2();
        let phi = DistributorData::of_functor(&f);
        phi.validate().unwrap();
        let fund = fundamental_fibration(&d2()).unwrap();
        let viaphi = distributor_change_of_base(&phi, &fund.fib, 1_000_000).unwrap();
        let direct = change_of_base(&fund.fib, &f);
        assert!(categories_equivalent(viaphi.fib.total(), direct.fib.total(), 1_000_000)
            .is_equivalent());
    }

    #[test]
    fn reverse_distributor_matches_pi() {
        let f = incl_2_d2();
        let phi = DistributorData::reverse_of_functor(&f);
        phi.validate().unwrap();
        let g = grothendieck(&discrete_presheaf()).unwrap();
        let viaphi = distributor_change_of_base(&phi, &g.fib, 1_000_000).unwrap();
        let pi = pi_f(&f, &g.fib, 1_000_000).unwrap();
        assert!(
            categories_equivalent(viaphi.fib.total(), pi.fib.total(), 1_000_000).is_equivalent()
        );
    }

    #[test]
    fn functor_distributors_have_right_adjoints() {
        let phi = DistributorData::of_functor(&incl_2_d2());
        assert!(phi.has_right_adjoint());
    }

    #[test]
    fn terminal_presheaf_on_discrete_base_has_no_right_adjoint() {
        // A ⇸ B with A = T1, B = discrete 2 and φ constant singleton: not a
        // retract of any representable, matching the idempotent-splitting
        // criterion (IdSp(discrete 2) has no terminal object).
        let a = Arc::new(FinCat::terminal());
        let b = Arc::new(crate::cat::discrete_category(2));
        let mut value = std::collections::BTreeMap::new();
        let mut b_action = std::collections::BTreeMap::new();
        let mut a_action = std::collections::BTreeMap::new();
        for k in 0..2usize {
            value.insert((Obj(k), Obj(0)), 1);
            b_action.insert((Arr(k), Obj(0)), vec![0]);
            a_action.insert((Obj(k), Arr(0)), vec![0]);
        }
        let phi = DistributorData { a, b: b.clone(), value, b_action, a_action };
        phi.validate().unwrap();
        assert!(!phi.has_right_adjoint());
        let (idsp, _) = crate::cat::split_idempotents(&b);
        assert!(crate::cat::terminal_object(&idsp).is_none());
    }

    #[test]
    fn sums_iff_fam_adjoint_tiny() {
        // positive: the fundamental fibration of 2; negative: fib(Hwarn),
        // which has no cocartesian lift over the base arrow.
        let p = fundamental_fibration(&ordinal2()).unwrap().fib;
        let v = sums_iff_fam_adjoint(&p);
        assert!(v.internal_sums && v.adjoint);
        let g = grothendieck(&hwarn()).unwrap();
        let v2 = sums_iff_fam_adjoint(&g.fib);
        assert!(!v2.internal_sums && !v2.adjoint);
    }

    #[test]
    fn generating_family_report_for_glueing() {
        let gl = glueing(&incl_2_d2()).unwrap();
        let report = generating_family_tests(&gl.fib).unwrap();
        assert!(report.separator_exists);
        assert!(report.generating_family_exists);
    }

    #[test]
    fn cocartesian_mono_sweep_on_d2() {
        let p = fundamental_fibration(&d2()).unwrap().fib;
        cocartesian_mono_sweep(&p);
    }
}

#[cfg(test)]
mod glue_composition_tests {
    use std::sync::Arc;

    use crate::cat::{categories_equivalent, Arr, FunctorData, Obj};
    use crate::construct::{change_of_base, fam_fibration, fundamental_fibration, glueing};
    use crate::corpus::{d2, ordinal2, poset, poset_functor};
    use crate::fib::FibrationData;

    /// Composition of glueings: gl(G∘F) embeds as 1*F*Fam(gl(G)) on the
    /// lattice chain 2 -> D2 -> D2×2.
    #[test]
    fn glueing_composition_diagram() {
        let two = ordinal2();
        let d = d2();
        // D2×2 with pairs ordered lexicographically: (x, s) ↦ 2x + s.
        let d2x2 = poset(
            8,
            &{
                let le_d2 = |p: usize, q: usize| !d.hom(Obj(p), Obj(q)).is_empty();
                let mut pairs = Vec::new();
                for x in 0..4 {
                    for s in 0..2 {
                        for x2 in 0..4 {
                            for s2 in 0..2 {
                                if (x, s) != (x2, s2) && le_d2(x, x2) && s <= s2 {
                                    pairs.push((2 * x + s, 2 * x2 + s2));
                                }
                            }
                        }
                    }
                }
                pairs
            },
        );
        let f = poset_functor(&two, &d, &[0, 3]);
        // G = ⟨id, x ≥ a⟩ : D2 -> D2×2, a meet- and top-preserving map.
        let g = poset_functor(&d, &d2x2, &[0, 3, 4, 7]);
        let gf = FunctorData::compose(&g, &f);
        let direct = glueing(&gf).unwrap();

        // Fam(gl(G)) as a fibration over D2²: the family square functor.
        let gl_g = glueing(&g).unwrap();
        let fam = fam_fibration(&gl_g.fib).unwrap();
        let fund_c = fundamental_fibration(&d).unwrap();
        let proj_c2 = FunctorData {
            source: fam.fib.total().clone(),
            target: fund_c.fib.total().clone(),
            obj_map: fam.obj_key.iter().map(|&(w, _)| fund_c.obj_ix[&w]).collect(),
            arr_map: fam
                .arr_key
                .iter()
                .map(|&((w, _), (w2, _), f1, phi)| {
                    fund_c.arr_ix[&(w, w2, gl_g.fib.over(phi), f1)]
                })
                .collect(),
        };
        proj_c2.validate().unwrap();
        let fam_over_c2 = Arc::new(FibrationData::new(proj_c2).unwrap());
        assert!(fam_over_c2.is_fibration());

        // Pull back along ∂1*F : Gl(F) -> C², then along 1 : 2 -> Gl(F).
        let gl_f = glueing(&f).unwrap();
        let staged = change_of_base(&fam_over_c2, &gl_f.mediating);
        let terminals = crate::analyze::fibrewise_terminals(&gl_f.fib).unwrap();
        let one = FunctorData {
            source: two.clone(),
            target: gl_f.fib.total().clone(),
            obj_map: terminals.clone(),
            arr_map: two
                .arrows()
                .map(|u| crate::analyze::terminal_one_arrow(&gl_f.fib, &terminals, u))
                .collect(),
        };
        one.validate().unwrap();
        let composite = change_of_base(&staged.fib, &one);
        assert!(
            categories_equivalent(composite.fib.total(), direct.fib.total(), 1_000_000)
                .is_equivalent(),
            "gl(G∘F) agrees with 1*F*Fam(gl(G))"
        );
        for i in 0..2usize {
            assert_eq!(
                composite.fib.fibre_objects(Obj(i)).len(),
                direct.fib.fibre_objects(Obj(i)).len()
            );
        }
        let _ = Arr(0);
    }
}
