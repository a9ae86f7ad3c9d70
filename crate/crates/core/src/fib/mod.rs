/*! Fibrations as validated functors with decidable arrow classification. */

mod cleavage;
mod data;
mod fibre;
mod morphism;

pub use cleavage::{Cleavage, SplitVerdict};
pub use data::{
    is_cartesian_liberal, is_cocartesian, is_cocartesian_simple, is_hypercartesian, ArrowFlags,
    FibError, FibVerdict, FibrationData, LiftSet,
};
pub use fibre::{fibre, Fibre};
pub use morphism::{check_fib_morphism, check_split_functor_law, FibMorphism, FibMorphismVerdict};

use crate::cat::{Arr, FunctorData};

/// Recomputes the classification of a single arrow from the definitions;
/// the cached flags in [`FibrationData`] agree with this by construction.
pub fn classify_arrow(proj: &FunctorData, f: Arr) -> ArrowFlags {
    ArrowFlags {
        vertical: proj.target.is_identity(proj.arr(f)),
        cartesian_liberal: is_cartesian_liberal(proj, f),
        hypercartesian: is_hypercartesian(proj, f),
        cocartesian: is_cocartesian(proj, f),
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;
    use std::sync::Arc;

    use super::*;
    use crate::cat::{Arr, Obj};
    use crate::corpus::{d2, pmod};

    fn pmod_fib() -> Arc<FibrationData> {
        Arc::new(FibrationData::new(pmod()).unwrap())
    }

    #[test]
    fn identities_carry_all_flags() {
        let p = pmod_fib();
        for x in p.total().objects() {
            let flags = p.flags(p.total().id(x));
            assert!(flags.vertical && flags.cartesian_liberal && flags.hypercartesian && flags.cocartesian);
        }
    }

    #[test]
    fn pmod_classification() {
        // Oracle: unique-factorisation scan. In Z4 -> Z2 the arrow 1 is hypercartesian
        // over the nonidentity of Z2; 0 and 2 are the verticals.
        let p = pmod_fib();
        assert!(p.flags(Arr(1)).hypercartesian);
        assert!(!p.flags(Arr(1)).vertical);
        assert!(p.flags(Arr(0)).vertical && p.flags(Arr(2)).vertical);
        // Group case: cartesian = cocartesian everywhere.
        for f in p.total().arrows() {
            assert_eq!(p.flags(f).hypercartesian, p.flags(f).cocartesian);
        }
    }

    #[test]
    fn pmod_is_a_bifibration_of_groupoids() {
        let p = pmod_fib();
        assert!(p.verdict().bifibration);
    }

    #[test]
    fn pmod_lifts_are_the_odd_elements() {
        let p = pmod_fib();
        let lifts = p.cartesian_lift(Arr(1), Obj(0)).unwrap();
        assert_eq!(lifts.all, vec![Arr(1), Arr(3)]);
        assert_eq!(lifts.canonical, Arr(1));
        // Group case: cocartesian lifts coincide.
        let colifts = p.cocartesian_lift(Arr(1), Obj(0)).unwrap();
        assert_eq!(colifts.all, vec![Arr(1), Arr(3)]);
    }

    #[test]
    fn lift_of_identity_contains_identity() {
        let p = pmod_fib();
        let lifts = p.cartesian_lift(Arr(0), Obj(0)).unwrap();
        assert!(lifts.all.contains(&p.total().id(Obj(0))));
        assert_eq!(lifts.canonical, p.total().id(Obj(0)));
    }

    #[test]
    fn any_two_lifts_are_linked_by_a_vertical_iso() {
        let p = pmod_fib();
        for u in p.base().arrows() {
            for x in p.fibre_objects(p.base().cod(u)) {
                let lifts = p.cartesian_lift(u, x).unwrap().all;
                for &a in &lifts {
                    for &b in &lifts {
                        let i = p.vertical_factor_through(a, b).unwrap();
                        assert!(p.total().is_iso(i));
                    }
                }
            }
        }
    }

    #[test]
    fn liberal_equals_hyper_on_fibrations() {
        let p = pmod_fib();
        for f in p.total().arrows() {
            assert_eq!(p.flags(f).cartesian_liberal, p.flags(f).hypercartesian);
        }
    }

    #[test]
    fn cocartesian_simple_matches_full_quantifier() {
        let p = pmod_fib();
        for f in p.total().arrows() {
            assert_eq!(is_cocartesian(p.proj(), f), is_cocartesian_simple(p.proj(), f));
        }
    }

    #[test]
    fn cached_flags_agree_with_recomputation() {
        let p = pmod_fib();
        for f in p.total().arrows() {
            assert_eq!(p.flags(f), classify_arrow(p.proj(), f));
        }
    }

    #[test]
    fn pmod_has_no_split_cleavage() {
        // Exhaustive cleavage enumeration: no section of mod-2 exists in Z4.
        let p = pmod_fib();
        let cleavages = Cleavage::enumerate(&p, 10_000).unwrap();
        assert_eq!(cleavages.len(), 4);
        assert!(cleavages.iter().all(|c| c.check_split() != SplitVerdict::Split));
    }

    #[test]
    fn canonical_cleavage_of_pmod() {
        let p = pmod_fib();
        let cl = Cleavage::canonical(&p).unwrap();
        assert!(cl.is_normalized());
        assert_eq!(cl.cart(Arr(1), Obj(0)), Arr(1));
        // c_{1,1}: composing the two chosen lifts gives 2 over 0, corrected
        // by the vertical iso 2.
        let c = cl.coherence_iso(Arr(1), Arr(1), Obj(0));
        assert_eq!(c, Arr(2));
    }

    #[test]
    fn cleavage_from_table_detects_normalization() {
        let p = pmod_fib();
        let mut table = BTreeMap::new();
        table.insert((Arr(0), Obj(0)), Arr(2));
        table.insert((Arr(1), Obj(0)), Arr(1));
        let cl = Cleavage::from_table(&p, table);
        assert!(!cl.is_normalized());
    }

    #[test]
    fn reindexing_over_identity_is_identity() {
        let p = pmod_fib();
        let cl = Cleavage::canonical(&p).unwrap();
        let (f, src, _) = cl.reindexing_functor(Arr(0));
        assert!(f.is_identity());
        assert_eq!(src.cat.n_arrows(), 2);
    }

    #[test]
    fn fibre_embedding_preserves_ids() {
        let p = pmod_fib();
        let f = fibre(&p, Obj(0));
        assert_eq!(f.objs, vec![Obj(0)]);
        assert_eq!(f.arrs, vec![Arr(0), Arr(2)]);
        // The fibre is Z2.
        assert_eq!(f.cat.n_arrows(), 2);
        assert_eq!(f.cat.compose(Arr(1), Arr(1)), Some(Arr(0)));
    }

    #[test]
    fn identity_functor_is_a_fibration() {
        let c = d2();
        let p = FibrationData::new(FunctorData::identity(&c)).unwrap();
        assert!(p.is_fibration());
        // Over the identity fibration every arrow is hypercartesian.
        for f in c.arrows() {
            assert!(p.flags(f).hypercartesian);
        }
    }

    #[test]
    fn identity_on_p_is_a_cartesian_functor() {
        let p = pmod_fib();
        let m = FibMorphism::CartesianFunctor {
            payload: FunctorData::identity(p.total()),
            over: FunctorData::identity(p.base()),
        };
        assert_eq!(check_fib_morphism(&m, &p, &p), FibMorphismVerdict::Cartesian);
    }
}

#[cfg(test)]
mod fundamental_instance_tests {
    use crate::cat::Obj;
    use crate::corpus::d2;
    use crate::fib::Cleavage;

    #[test]
    fn cocartesian_lifts_in_cod_have_identity_top_edges() {
        // In the fundamental fibration of a lattice, the cocartesian lift
        // of (x ≤ a) along u : a -> ⊤ is the square whose top edge is the
        // identity of x.
        let b = d2();
        let fund = crate::construct::fundamental_fibration(&b).unwrap();
        let u = b.hom(Obj(1), Obj(3))[0]; // a -> ⊤
        for x in fund.fib.fibre_objects(Obj(1)) {
            let lift = fund.fib.cocartesian_lift(u, x).unwrap().canonical;
            let (top, bottom) = fund.square[lift.0];
            assert!(b.is_identity(top), "sum squares have identity top edges");
            assert_eq!(bottom, u);
        }
    }

    #[test]
    fn reindexing_in_cod_of_d2_is_meet() {
        // u* : D2/⊤ -> D2/a computes the meet with a.
        let b = d2();
        let fund = crate::construct::fundamental_fibration(&b).unwrap();
        let u = b.hom(Obj(1), Obj(3))[0];
        let cl = Cleavage::canonical(&fund.fib).unwrap();
        let (r, src, dst) = cl.reindexing_functor(u);
        let meet = |p: usize, q: usize| -> usize {
            let le = |x: usize, y: usize| !b.hom(Obj(x), Obj(y)).is_empty();
            (0..4)
                .filter(|&w| le(w, p) && le(w, q))
                .max_by_key(|&w| (0..4).filter(|&v| le(v, w)).count())
                .unwrap()
        };
        for k in src.cat.objects() {
            let x_total = src.objs[k.0];
            let dom_in_b = fund.obj_arrow[x_total.0];
            let image_total = dst.objs[r.ob(k).0];
            let image_dom = fund.obj_arrow[image_total.0];
            assert_eq!(
                b.dom(image_dom).0,
                meet(b.dom(dom_in_b).0, 1),
                "reindexing along a -> ⊤ is meet with a"
            );
        }
    }
}

#[cfg(test)]
mod collapse_functor_tests {
    use std::sync::Arc;

    use crate::cat::FunctorData;
    use crate::corpus::{hwarn, ordinal2};
    use crate::fib::{check_fib_morphism, FibMorphism, FibMorphismVerdict, FibrationData};

    #[test]
    fn collapsing_a_group_fibre_is_cartesian() {
        // Collapse the Z2 fibre of fib(Hwarn) to a point, identity on the
        // base: all arrows sit over isos, so cartesianness is preserved.
        let g = crate::construct::grothendieck(&hwarn()).unwrap();
        let two = ordinal2();
        let q = Arc::new(FibrationData::new(FunctorData::identity(&two)).unwrap());
        let total = g.fib.total();
        let collapse = FunctorData {
            source: total.clone(),
            target: two.clone(),
            obj_map: total.objects().map(|x| g.fib.base_of(x)).collect(),
            arr_map: total.arrows().map(|f| g.fib.over(f)).collect(),
        };
        let m = FibMorphism::CartesianFunctor {
            payload: collapse,
            over: FunctorData::identity(&two),
        };
        assert_eq!(check_fib_morphism(&m, &g.fib, &q), FibMorphismVerdict::Cartesian);
    }
}
