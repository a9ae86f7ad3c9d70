/*! Finite categories and the ordinary constructions on them. */

mod adjoint;
mod builder;
mod equiv;
mod fincat;
mod limits;
mod mappings;
mod ops;

pub use adjoint::{find_left_adjoint, find_right_adjoint, AdjointResult};
pub use builder::{BuiltCat, CatBuilder};
pub use equiv::{categories_equivalent, EquivalenceResult, EquivalenceWitness};
pub use fincat::{validate_category, Arr, CatViolation, FinCat, IdMaps, Obj, RawCat};
pub use limits::{
    find_limit, has_all_pullbacks, has_binary_products, has_finite_limits, initial_object,
    is_pullback_square, terminal_object, Cone, LimitResult, LimitShape,
};
pub use mappings::{
    enumerate_functors, validate_mapping, AdjunctionData, FunctorData, Mapping, MappingViolation,
    NatTransData,
};
pub use ops::{
    all_idempotents_split, arrow_category, comma_category, coslice_category, discrete_category,
    opposite_category, opposite_functor, product_category, pullback_of_categories, slice_category,
    split_idempotents, CatPullback, DerivedCat, DerivedCatError,
};

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;

    use crate::corpus::{chain, cyclic, d2, n5, poset, poset_functor};

    #[test]
    fn terminal_category_is_valid() {
        let t = FinCat::terminal();
        assert_eq!(t.n_objects(), 1);
        assert!(t.revalidate().is_ok());
    }

    #[test]
    fn z4_validates_by_law_enumeration() {
        // Oracle: direct law enumeration over all 64 triples.
        let z4 = cyclic(4);
        let mut triples = 0;
        for h in 0..4 {
            for g in 0..4 {
                for f in 0..4 {
                    let hg_f = z4.compose(z4.compose(Arr(h), Arr(g)).unwrap(), Arr(f));
                    let h_gf = z4.compose(Arr(h), z4.compose(Arr(g), Arr(f)).unwrap());
                    assert_eq!(hg_f, h_gf);
                    triples += 1;
                }
            }
        }
        assert_eq!(triples, 64);
        assert!(z4.revalidate().is_ok());
    }

    #[test]
    fn corrupted_z4_reports_associativity_triple() {
        // comp(1,1) = 3 instead of 2. Oracle: brute-force scan of the
        // corrupted table. The least broken triple is (1,1,2); note (1,1,1)
        // still commutes since comp(1,3) = comp(3,1) = 0.
        let mut table = vec![vec![0usize; 4]; 4];
        for (g, row) in table.iter_mut().enumerate() {
            for (f, v) in row.iter_mut().enumerate() {
                *v = (g + f) % 4;
            }
        }
        table[1][1] = 3;
        let mut oracle_violations = Vec::new();
        for h in 0..4 {
            for g in 0..4 {
                for f in 0..4 {
                    if table[h][table[g][f]] != table[table[h][g]][f] {
                        oracle_violations.push((h, g, f));
                    }
                }
            }
        }
        assert_eq!(oracle_violations.first(), Some(&(1, 1, 2)));

        let mut entries = Vec::new();
        for g in 0..4 {
            for f in 0..4 {
                entries.push(((Arr(g), Arr(f)), Arr(table[g][f])));
            }
        }
        let err = FinCat::from_parts(1, vec![Obj(0); 4], vec![Obj(0); 4], vec![Arr(0)], &entries)
            .unwrap_err();
        let reported: Vec<(usize, usize, usize)> = err
            .iter()
            .filter_map(|v| match v {
                CatViolation::AssociativityViolation { h, g, f } => Some((*h, *g, *f)),
                _ => None,
            })
            .collect();
        assert_eq!(reported, oracle_violations);
    }

    #[test]
    fn validate_category_canonicalises_sparse_ids() {
        let raw = RawCat {
            objects: vec![7, 3],
            arrows: vec![(10, 3, 3), (20, 7, 7), (15, 3, 7)],
            identity: vec![(3, 10), (7, 20)],
            comp: vec![
                ((10, 10), 10),
                ((20, 20), 20),
                ((15, 10), 15),
                ((20, 15), 15),
            ],
        };
        let (cat, maps) = validate_category(&raw).unwrap();
        assert_eq!(maps.objects, vec![3, 7]);
        assert_eq!(maps.arrows, vec![10, 15, 20]);
        assert_eq!(cat.n_arrows(), 3);
        assert_eq!(cat.dom(Arr(1)), Obj(0));
        assert_eq!(cat.cod(Arr(1)), Obj(1));
    }

    #[test]
    fn opposite_is_a_bitexact_involution() {
        for c in [cyclic(4), chain(3), d2(), n5()].map(|c| (*c).clone()) {
            let op = opposite_category(&c);
            assert_eq!(opposite_category(&op), c);
            assert!(op.revalidate().is_ok());
        }
    }

    #[test]
    fn opposite_chain_preserves_arrow_count() {
        let c = chain(3);
        let op = opposite_category(&c);
        assert_eq!(op.n_arrows(), 6);
        assert_eq!(op.n_arrows(), c.n_arrows());
    }

    #[test]
    fn opposite_group_transposes_composition() {
        let z4 = cyclic(4);
        let op = opposite_category(&z4);
        for g in z4.arrows() {
            for f in z4.arrows() {
                assert_eq!(op.compose(g, f), z4.compose(f, g));
            }
        }
    }

    #[test]
    fn arrow_category_of_terminal_is_terminal() {
        let t = Arc::new(FinCat::terminal());
        let arr = arrow_category(&t);
        assert_eq!(arr.cat.n_objects(), 1);
        assert_eq!(arr.cat.n_arrows(), 1);
    }

    #[test]
    fn slice_of_chain3_at_top() {
        // Oracle: objects are the 3 arrows into 2; morphisms are the ≤ pairs
        // among their domains, 6 in total.
        let c = chain(3);
        let sl = slice_category(&c, Obj(2)).unwrap();
        assert_eq!(sl.cat.n_objects(), 3);
        assert_eq!(sl.cat.n_arrows(), 6);
        assert!(sl.projections[0].validate().is_ok());
    }

    #[test]
    fn product_of_ordinal_two_with_itself() {
        let two = chain(2);
        let p = product_category(&two, &two);
        assert_eq!(p.cat.n_objects(), 4);
        assert_eq!(p.cat.n_arrows(), 9);
        for proj in &p.projections {
            assert!(proj.validate().is_ok());
        }
    }

    #[test]
    fn terminal_of_lattice_is_top() {
        let c = n5();
        assert_eq!(terminal_object(&c), Some(Obj(4)));
        let Some(cone) = find_limit(&c, LimitShape::Terminal).canonical().cloned() else {
            panic!("lattice has a top");
        };
        assert_eq!(cone.apex, Obj(4));
    }

    #[test]
    fn pullback_in_n5_is_meet() {
        // z -> ⊤ <- y pulls back to z ∧ y = ⊥.
        let c = n5();
        let z_top = c.hom(Obj(3), Obj(4))[0];
        let y_top = c.hom(Obj(2), Obj(4))[0];
        let r = find_limit(&c, LimitShape::Pullback(z_top, y_top));
        let cone = r.canonical().expect("lattice has meets");
        assert_eq!(cone.apex, Obj(0));
    }

    #[test]
    fn discrete_two_has_no_terminal() {
        let c = discrete_category(2);
        assert_eq!(terminal_object(&c), None);
        match find_limit(&c, LimitShape::Terminal) {
            LimitResult::Absent { candidates } => assert_eq!(candidates.len(), 2),
            _ => panic!("no terminal expected"),
        }
    }

    #[test]
    fn pullback_of_identities_is_diagonal() {
        let c = d2();
        let idf = FunctorData::identity(&c);
        let pb = pullback_of_categories(&idf, &idf);
        assert_eq!(pb.cat.n_objects(), c.n_objects());
        assert!(pb.to_left.validate().is_ok());
    }

    #[test]
    fn pullback_of_two_to_terminal_is_product() {
        let two = chain(2);
        let t = Arc::new(FinCat::terminal());
        let bang = FunctorData {
            source: two.clone(),
            target: t.clone(),
            obj_map: vec![Obj(0); 2],
            arr_map: vec![Arr(0); 3],
        };
        assert!(bang.validate().is_ok());
        let pb = pullback_of_categories(&bang, &bang);
        let prod = product_category(&two, &two);
        assert_eq!(*pb.cat, *prod.cat);
    }

    #[test]
    fn pullback_along_empty_is_empty() {
        let c = d2();
        let e = Arc::new(FinCat::empty());
        let from_empty = FunctorData { source: e, target: c.clone(), obj_map: vec![], arr_map: vec![] };
        let pb = pullback_of_categories(&from_empty, &FunctorData::identity(&c));
        assert_eq!(pb.cat.n_objects(), 0);
    }

    #[test]
    fn karoubi_of_split_monoid() {
        // One-object monoid {id, e} with e∘e = e has exactly two idempotents.
        let m = FinCat::from_parts(
            1,
            vec![Obj(0); 2],
            vec![Obj(0); 2],
            vec![Arr(0)],
            &[
                ((Arr(0), Arr(0)), Arr(0)),
                ((Arr(0), Arr(1)), Arr(1)),
                ((Arr(1), Arr(0)), Arr(1)),
                ((Arr(1), Arr(1)), Arr(1)),
            ],
        )
        .unwrap();
        let (k, incl) = split_idempotents(&Arc::new(m));
        assert_eq!(k.n_objects(), 2);
        assert!(incl.validate().is_ok());
        assert!(all_idempotents_split(&k));
        // Full and faithful: hom(id,id) in K equals hom of the monoid.
        let x = incl.ob(Obj(0));
        assert_eq!(k.hom(x, x).len(), 2);
    }

    #[test]
    fn karoubi_of_group_is_trivial() {
        // Oracle: idempotent scan. 2x = x mod 4 forces x = 0.
        let z4 = cyclic(4);
        let idems: Vec<Arr> = z4.arrows().filter(|&e| z4.compose(e, e) == Some(e)).collect();
        assert_eq!(idems, vec![Arr(0)]);
        let (k, _) = split_idempotents(&z4);
        assert_eq!(k.n_objects(), 1);
        assert_eq!(k.n_arrows(), 4);
    }

    #[test]
    fn karoubi_of_idempotent_split_category_is_equivalent() {
        let c = d2();
        let (k, _) = split_idempotents(&c);
        assert!(categories_equivalent(&c, &k, 1_000_000).is_equivalent());
    }

    #[test]
    fn validate_mapping_accepts_identity() {
        let c = d2();
        assert!(FunctorData::identity(&c).validate().is_ok());
    }

    #[test]
    fn monotone_map_is_a_functor() {
        // 2 -> D2 with ⊥ ↦ ⊥, ⊤ ↦ a is monotone, hence a functor.
        let two = chain(2);
        let d = d2();
        let f = poset_functor(&two, &d, &[0, 1]);
        assert!(f.validate().is_ok());
    }

    #[test]
    fn non_homomorphism_fails_functor_laws() {
        // Z2 -> Z4 sending 1 ↦ 1: (1+1) mod 2 = 0 but 1+1 = 2 ≠ 0 in Z4.
        let z2 = cyclic(2);
        let z4 = cyclic(4);
        let f = FunctorData {
            source: z2,
            target: z4,
            obj_map: vec![Obj(0)],
            arr_map: vec![Arr(0), Arr(1)],
        };
        let err = f.validate().unwrap_err();
        assert!(err.iter().any(|v| matches!(v, MappingViolation::FunctorLawViolation { .. })));
    }

    #[test]
    fn right_adjoint_of_identity_is_identity() {
        let c = d2();
        match find_right_adjoint(&FunctorData::identity(&c), 1_000_000) {
            AdjointResult::Found(adj) => {
                assert!(adj.right.is_identity());
                assert!(adj.unit.components.iter().all(|&a| c.is_identity(a)));
            }
            _ => panic!("identity has itself as right adjoint"),
        }
    }

    #[test]
    fn lattice_inclusion_has_galois_right_adjoint() {
        // Oracle: Galois-connection scan. F : 2 -> D2, ⊥↦⊥, ⊤↦⊤ has right
        // adjoint U with U(x) = ⊤ iff x = ⊤.
        let two = chain(2);
        let d = d2();
        let f = poset_functor(&two, &d, &[0, 3]);
        // Scan: U(x) = max { c in 2 : F c ≤ x } must exist for each x.
        let mut expected = Vec::new();
        for x in 0..4usize {
            let le = |p: usize, q: usize| !d.hom(Obj(p), Obj(q)).is_empty();
            let candidates: Vec<usize> = [0usize, 3].iter().copied().filter(|&fc| le(fc, x)).collect();
            expected.push(if candidates.contains(&3) { 1 } else { 0 });
        }
        match find_right_adjoint(&f, 1_000_000) {
            AdjointResult::Found(adj) => {
                assert_eq!(adj.right.obj_map, expected.iter().map(|&i| Obj(i)).collect::<Vec<_>>());
            }
            _ => panic!("Galois adjoint exists"),
        }
    }

    #[test]
    fn constant_functors_on_the_chain() {
        // Galois connections on 2: the constant-⊥ functor has the
        // constant-⊤ functor as right adjoint, while constant-⊤ has none
        // (it does not preserve the initial object).
        let two = chain(2);
        let at_bot = poset_functor(&two, &two, &[0, 0]);
        match find_right_adjoint(&at_bot, 1_000_000) {
            AdjointResult::Found(adj) => assert_eq!(adj.right.obj_map, vec![Obj(1), Obj(1)]),
            _ => panic!("constant-⊥ has a right adjoint"),
        }
        let at_top = poset_functor(&two, &two, &[1, 1]);
        match find_right_adjoint(&at_top, 1_000_000) {
            AdjointResult::Absent { witness } => assert_eq!(witness, Obj(0)),
            _ => panic!("no right adjoint expected for constant-⊤"),
        }
    }

    #[test]
    fn absent_right_adjoint_agrees_with_naive_candidate_scan() {
        // Independent oracle: enumerate every candidate functor U; none is
        // a Galois partner of constant-⊤.
        let two = chain(2);
        let f = poset_functor(&two, &two, &[1, 1]);
        let candidates = enumerate_functors(&two, &two, 1_000_000).unwrap();
        for u in &candidates {
            // For posets an adjunction F ⊣ U is a Galois connection:
            // F x ≤ y iff x ≤ U y. Check all pairs.
            let le = |c: &FinCat, p: Obj, q: Obj| !c.hom(p, q).is_empty();
            let galois = two
                .objects()
                .all(|x| two.objects().all(|y| le(&two, f.ob(x), y) == le(&two, x, u.ob(y))));
            assert!(!galois, "scan found a Galois connection the search missed");
        }
        assert!(matches!(find_right_adjoint(&f, 1_000_000), AdjointResult::Absent { .. }));
    }

    #[test]
    fn left_adjoint_by_duality() {
        // The inclusion 2 -> D2 has left adjoint L with L(a) = ⊤ (least upper
        // cover in the image).
        let two = chain(2);
        let d = d2();
        let f = poset_functor(&two, &d, &[0, 3]);
        match find_left_adjoint(&f, 1_000_000) {
            AdjointResult::Found(adj) => {
                assert_eq!(adj.left.obj_map, vec![Obj(0), Obj(1), Obj(1), Obj(1)]);
                adj.validate().unwrap();
            }
            _ => panic!("left adjoint exists"),
        }
    }

    #[test]
    fn category_equivalent_to_itself() {
        let c = d2();
        assert!(categories_equivalent(&c, &c, 1_000_000).is_equivalent());
    }

    #[test]
    fn relabelled_d2_is_equivalent() {
        // Same lattice with objects listed in a different order.
        let d = d2();
        let relabelled = poset(4, &[(3, 1), (3, 2), (3, 0), (1, 0), (2, 0)]);
        let r = categories_equivalent(&d, &relabelled, 1_000_000);
        let EquivalenceResult::Equivalent(w) = r else { panic!("iso expected") };
        assert!(w.unit.is_iso() && w.counit.is_iso());
    }

    #[test]
    fn ordinal_two_not_equivalent_to_d2() {
        // Skeletal posets of different sizes are inequivalent.
        let two = chain(2);
        let d = d2();
        assert!(!categories_equivalent(&two, &d, 1_000_000).is_equivalent());
    }

    #[test]
    fn indiscrete_pair_is_equivalent_to_terminal() {
        // 2 objects, a unique arrow in each direction: skeleton is T1.
        let mut b = CatBuilder::new();
        for i in 0..2usize {
            b.add_object(i);
            b.set_identity(i, (i, i));
        }
        for i in 0..2usize {
            for j in 0..2usize {
                b.add_arrow((i, j), i, j);
            }
        }
        let built = b.build(|&(_, j), &(i, _)| (i, j)).unwrap();
        let t = Arc::new(FinCat::terminal());
        assert!(categories_equivalent(&built.cat, &t, 1_000_000).is_equivalent());
    }

    #[test]
    fn equalizer_exists_in_parallel_pair_completion() {
        // In a poset every parallel pair is equal, so equalizers are ids.
        let c = d2();
        let f = c.hom(Obj(0), Obj(3))[0];
        let r = find_limit(&c, LimitShape::Equalizer(f, f));
        assert_eq!(r.canonical().unwrap().apex, Obj(0));
    }
}

#[cfg(test)]
mod adjoint_colimit_tests {
    use crate::cat::*;
    use crate::corpus::{chain, d2, poset_functor};

    #[test]
    fn functors_with_right_adjoints_preserve_existing_joins() {
        // spot check: the inclusion 2 -> D2 has a right adjoint, so it must
        // preserve the joins that exist in its source.
        let two = chain(2);
        let d = d2();
        let f = poset_functor(&two, &d, &[0, 3]);
        assert!(matches!(find_right_adjoint(&f, 1_000_000), AdjointResult::Found(_)));
        let le = |c: &FinCat, p: usize, q: usize| !c.hom(Obj(p), Obj(q)).is_empty();
        let join = |c: &FinCat, p: usize, q: usize| -> Option<usize> {
            let ubs: Vec<usize> =
                (0..c.n_objects()).filter(|&w| le(c, p, w) && le(c, q, w)).collect();
            ubs.iter().copied().find(|&m| ubs.iter().all(|&w| le(c, m, w)))
        };
        for x in 0..2 {
            for y in 0..2 {
                if let Some(j) = join(&two, x, y) {
                    let fj = join(&d, f.ob(Obj(x)).0, f.ob(Obj(y)).0).expect("image join");
                    assert_eq!(f.ob(Obj(j)).0, fj, "right adjoints preserve joins");
                }
            }
        }
    }
}

#[cfg(test)]
mod product_symmetry_tests {
    use crate::cat::*;
    use crate::corpus::{chain, d2};

    #[test]
    fn product_category_is_symmetric_up_to_canonical_iso() {
        let a = chain(3);
        let b = d2();
        let ab = product_category(&a, &b);
        let ba = product_category(&b, &a);
        assert!(categories_equivalent(&ab.cat, &ba.cat, 1_000_000).is_equivalent());
    }
}

#[cfg(test)]
mod coslice_tests {
    use crate::cat::*;
    use crate::corpus::chain;

    #[test]
    fn coslice_of_chain3_at_bottom() {
        // objects are the 3 arrows out of 0; morphisms the ≤ pairs among
        // their codomains.
        let c = chain(3);
        let co = coslice_category(&c, Obj(0)).unwrap();
        assert_eq!(co.cat.n_objects(), 3);
        assert_eq!(co.cat.n_arrows(), 6);
        assert!(co.projections[0].validate().is_ok());
    }
}
