/*! The builtin example zoo: the finite categories, functors, fibrations and
adjunctions every suite runs against. */

use std::sync::Arc;

use crate::cat::{Arr, CatBuilder, FinCat, FunctorData, Obj};

/// Cyclic group Z_n as a one-object category; arrow `k` is the element `k`.
pub fn cyclic(n: usize) -> Arc<FinCat> {
    let entries: Vec<((Arr, Arr), Arr)> = (0..n)
        .flat_map(|g| (0..n).map(move |f| ((Arr(g), Arr(f)), Arr((g + f) % n))))
        .collect();
    Arc::new(
        FinCat::from_parts(1, vec![Obj(0); n], vec![Obj(0); n], vec![Arr(0)], &entries)
            .expect("cyclic group is a category"),
    )
}

/// Chain poset 0 < 1 < ... < n-1.
pub fn chain(n: usize) -> Arc<FinCat> {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((i, j));
        }
    }
    poset(n, &pairs)
}

/// The ordinal 2 = 0 -> 1.
pub fn ordinal2() -> Arc<FinCat> {
    chain(2)
}

/// A poset category from its strictly-less pairs (reflexive closure added).
pub fn poset(n: usize, le: &[(usize, usize)]) -> Arc<FinCat> {
    let mut builder = CatBuilder::new();
    for i in 0..n {
        builder.add_object(i);
        builder.set_identity(i, (i, i));
        builder.add_arrow((i, i), i, i);
    }
    for &(i, j) in le {
        builder.add_arrow((i, j), i, j);
    }
    let built = builder.build(|&(_, j), &(i, _)| (i, j)).expect("poset is a category");
    built.cat
}

/// Boolean lattice 2² with ⊥=0, a=1, b=2, ⊤=3.
pub fn d2() -> Arc<FinCat> {
    poset(4, &[(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)])
}

/// The pentagon N5: ⊥=0 < x=1 < z=3 < ⊤=4 and ⊥ < y=2 < ⊤.
pub fn n5() -> Arc<FinCat> {
    poset(5, &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 3), (1, 4), (2, 4), (3, 4)])
}

/// The diamond M3: ⊥=0 < p=1,q=2,r=3 < ⊤=4.
pub fn m3() -> Arc<FinCat> {
    poset(5, &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 4), (2, 4), (3, 4)])
}

/// Functor between poset categories induced by a monotone object map.
pub fn poset_functor(a: &Arc<FinCat>, b: &Arc<FinCat>, ob: &[usize]) -> FunctorData {
    let arr_map = a
        .arrows()
        .map(|f| b.hom(Obj(ob[a.dom(f).0]), Obj(ob[a.cod(f).0]))[0])
        .collect();
    let f = FunctorData {
        source: a.clone(),
        target: b.clone(),
        obj_map: ob.iter().map(|&i| Obj(i)).collect(),
        arr_map,
    };
    f.validate().expect("monotone map is a functor");
    f
}

/// Group homomorphism as a functor between one-object categories.
pub fn group_functor(a: &Arc<FinCat>, b: &Arc<FinCat>, arr: &[usize]) -> FunctorData {
    let f = FunctorData {
        source: a.clone(),
        target: b.clone(),
        obj_map: vec![Obj(0)],
        arr_map: arr.iter().map(|&i| Arr(i)).collect(),
    };
    f.validate().expect("homomorphism is a functor");
    f
}

/// The mod-2 projection Z4 -> Z2, the standard non-splitable fibration.
pub fn pmod() -> FunctorData {
    group_functor(&cyclic(4), &cyclic(2), &[0, 1, 0, 1])
}

/// The unique functor to the terminal category.
pub fn bang(c: &Arc<FinCat>) -> FunctorData {
    let t = Arc::new(FinCat::terminal());
    FunctorData {
        source: c.clone(),
        target: t,
        obj_map: vec![Obj(0); c.n_objects()],
        arr_map: vec![Arr(0); c.n_arrows()],
    }
}

use crate::construct::IndexedCat;

/// The two-splittings instance: H : 2^op -> Cat with H(1) = T1 and H(0) = Z2.
/// Its Grothendieck construction has exactly two split cleavages, both
/// inducing this same functor.
pub fn hwarn() -> IndexedCat {
    let base = ordinal2();
    let z2 = cyclic(2);
    let t1 = Arc::new(FinCat::terminal());
    let to_z2 = FunctorData {
        source: t1.clone(),
        target: z2.clone(),
        obj_map: vec![Obj(0)],
        arr_map: vec![Arr(0)],
    };
    // base arrows: 0 = id_0, 1 = the arrow 0 -> 1, 2 = id_1
    IndexedCat {
        base,
        fibres: vec![z2.clone(), t1.clone()],
        reindex: vec![FunctorData::identity(&z2), to_z2, FunctorData::identity(&t1)],
    }
}

/// A discrete presheaf on 2 as an indexed category: A(1) = {•, ◦},
/// A(0) = {•}, both elements restricting to the point.
pub fn discrete_presheaf() -> IndexedCat {
    let base = ordinal2();
    let one = Arc::new(crate::cat::discrete_category(1));
    let two_disc = Arc::new(crate::cat::discrete_category(2));
    let restrict = FunctorData {
        source: two_disc.clone(),
        target: one.clone(),
        obj_map: vec![Obj(0), Obj(0)],
        arr_map: vec![Arr(0), Arr(0)],
    };
    IndexedCat {
        base,
        fibres: vec![one.clone(), two_disc.clone()],
        reindex: vec![FunctorData::identity(&one), restrict, FunctorData::identity(&two_disc)],
    }
}

/// The category of the pointed pair: objects 1 = {⊥} and 2 = {⊥, a} with
/// the point inclusion, the collapse, and the induced idempotent.
pub fn pointed_pair() -> Arc<FinCat> {
    let mut b = CatBuilder::new();
    b.add_object("one");
    b.add_object("two");
    b.set_identity("one", "id1");
    b.set_identity("two", "id2");
    b.add_arrow("id1", "one", "one");
    b.add_arrow("id2", "two", "two");
    b.add_arrow("incl", "one", "two");
    b.add_arrow("bang", "two", "one");
    b.add_arrow("zero", "two", "two");
    let built = b
        .build(|&g, &f| match (g, f) {
            ("id1", x) | (x, "id1") | ("id2", x) | (x, "id2") => x,
            ("bang", "incl") => "id1",
            ("incl", "bang") => "zero",
            ("zero", "zero") => "zero",
            ("zero", "incl") => "incl",
            ("bang", "zero") => "bang",
            _ => unreachable!("non-composable pair"),
        })
        .expect("pointed pair is a category");
    built.cat
}

/// The synthetic non-disjoint bifibration: base 2, fibre over 0 the pointed
/// pair, fibre over 1 the terminal category, reindexing constant at the
/// point. Internal sums exist with BCC, but the kernel pullback of the
/// collapse cocartesian is missing, so disjointness and the reconstruction
/// conditions all fail together.
pub fn wedge() -> IndexedCat {
    let base = ordinal2();
    let c0 = pointed_pair();
    let t1 = Arc::new(FinCat::terminal());
    let pick_one = FunctorData {
        source: t1.clone(),
        target: c0.clone(),
        obj_map: vec![Obj(0)],
        arr_map: vec![c0.id(Obj(0))],
    };
    IndexedCat {
        base,
        fibres: vec![c0.clone(), t1.clone()],
        reindex: vec![FunctorData::identity(&c0), pick_one, FunctorData::identity(&t1)],
    }
}

use std::panic::{catch_unwind, AssertUnwindSafe};

use crate::analyze;
use crate::cat;
use crate::construct;
use crate::fib::{Cleavage, FibrationData, SplitVerdict};
use crate::format::{Document, Entity};
use crate::moens;
use crate::report::{Check, Report};

/// The builtin example zoo as a parsed document: every block validates by
/// construction.
pub fn documents() -> Document {
    let mut doc = Document::default();
    doc.insert("t1", Entity::Category(Arc::new(FinCat::terminal())));
    doc.insert("two", Entity::Category(ordinal2()));
    doc.insert("chain3", Entity::Category(chain(3)));
    doc.insert("d2", Entity::Category(d2()));
    doc.insert("n5", Entity::Category(n5()));
    doc.insert("m3", Entity::Category(m3()));
    doc.insert("z2", Entity::Category(cyclic(2)));
    doc.insert("z4", Entity::Category(cyclic(4)));
    doc.insert("pointed_pair", Entity::Category(pointed_pair()));

    doc.insert("incl_2_d2", Entity::Functor(poset_functor(&ordinal2(), &d2(), &[0, 3])));
    doc.insert("proj_d2_2", Entity::Functor(poset_functor(&d2(), &ordinal2(), &[0, 1, 0, 1])));
    doc.insert("pmod_proj", Entity::Functor(pmod()));

    doc.insert("pmod", Entity::Fibration(Arc::new(FibrationData::new(pmod()).unwrap())));
    let hw = hwarn();
    let hw_groth = construct::grothendieck(&hw).unwrap();
    doc.intern_category("fib_hwarn_total", hw_groth.fib.total());
    doc.insert("fib_hwarn", Entity::Fibration(hw_groth.fib.clone()));
    // the indexed block needs its fibre categories and reindexings named
    doc.intern_category("hwarn_fibre0", &hw.fibres[0]);
    doc.intern_category("hwarn_fibre1", &hw.fibres[1]);
    doc.insert("hwarn_reindex0", Entity::Functor(hw.reindex[0].clone()));
    doc.insert("hwarn_reindex1", Entity::Functor(hw.reindex[1].clone()));
    doc.insert("hwarn_reindex2", Entity::Functor(hw.reindex[2].clone()));
    doc.insert("hwarn", Entity::Indexed(hw.clone()));

    let dp = discrete_presheaf();
    let dp_groth = construct::grothendieck(&dp).unwrap();
    doc.intern_category("presheaf_total", dp_groth.fib.total());
    doc.insert("presheaf_fib", Entity::Fibration(dp_groth.fib.clone()));

    let wedge_groth = construct::grothendieck(&wedge()).unwrap();
    doc.intern_category("wedge_total", wedge_groth.fib.total());
    doc.insert("wedge_fib", Entity::Fibration(wedge_groth.fib.clone()));

    for (name, b) in [("fund_two", ordinal2()), ("fund_d2", d2()), ("fund_n5", n5())] {
        let f = construct::fundamental_fibration(&b).unwrap();
        doc.intern_category(&format!("{name}_total"), f.fib.total());
        doc.insert(name, Entity::Fibration(f.fib.clone()));
    }
    let gl = construct::glueing(&poset_functor(&ordinal2(), &d2(), &[0, 3])).unwrap();
    doc.intern_category("gl_incl_total", gl.fib.total());
    doc.insert("gl_incl", Entity::Fibration(gl.fib.clone()));

    for (name, f) in [
        ("adj_id_d2", cat::FunctorData::identity(&d2())),
        ("adj_incl", poset_functor(&ordinal2(), &d2(), &[0, 3])),
        ("adj_proj", poset_functor(&d2(), &ordinal2(), &[0, 1, 0, 1])),
    ] {
        let cat::AdjointResult::Found(adj) = cat::find_right_adjoint(&f, 1_000_000) else {
            panic!("corpus adjunction exists");
        };
        let fname = format!("{name}_left");
        let uname = format!("{name}_right");
        doc.insert(&fname, Entity::Functor(adj.left.clone()));
        doc.insert(&uname, Entity::Functor(adj.right.clone()));
        doc.insert(name, Entity::Adjunction(adj));
    }
    doc.insert(
        "disc_top_d2",
        Entity::Internal(construct::InternalCat::discrete(&d2(), Obj(3))),
    );
    doc.insert(
        "phi_incl",
        Entity::Distributor(moens::DistributorData::of_functor(&poset_functor(
            &ordinal2(),
            &d2(),
            &[0, 3],
        ))),
    );
    doc
}

/// Fibrations every corpus-wide sweep runs over.
pub fn corpus_fibrations() -> Vec<(String, Arc<FibrationData>)> {
    let doc = documents();
    let mut out = Vec::new();
    for name in &doc.order {
        if let Some(f) = doc.fibration(name) {
            out.push((name.clone(), f.clone()));
        }
    }
    out
}

fn criterion<F: FnOnce() -> Check>(name: &str, f: F) -> (Check, bool) {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(check) => {
            let ok = !check.theorem_crosschecks.iter().any(|x| !x.agree)
                && check.verdict != serde_json::Value::Bool(false);
            (check, ok)
        }
        Err(e) => {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            (Check::new(name, false).counterexample(format!("defect: {msg}")), false)
        }
    }
}

/// The acceptance criteria, in order.
pub const CRITERIA: [&str; 12] = [
    "laws",
    "cartesian-lemmas",
    "splitting",
    "fibred-yoneda",
    "biconditionals",
    "heyting-correlation",
    "well-poweredness",
    "moens",
    "geometric-profiles",
    "opposite-involution",
    "fam-monad",
    "formats",
];

/// Runs a single named criterion; panics inside deciders (theorem
/// cross-check divergence) are converted into failing checks.
pub fn run_criterion(name: &str, cap: usize) -> (Check, bool) {
    match name {
        "laws" => criterion(name, c_laws),
        "cartesian-lemmas" => criterion(name, c_cartesian_lemmas),
        "splitting" => criterion(name, || c_splitting(cap)),
        "fibred-yoneda" => criterion(name, || c_fibred_yoneda(cap)),
        "biconditionals" => criterion(name, c_biconditionals),
        "heyting-correlation" => criterion(name, c_heyting),
        "well-poweredness" => criterion(name, c_well_poweredness),
        "moens" => criterion(name, c_moens),
        "geometric-profiles" => criterion(name, c_geometric_profiles),
        "opposite-involution" => criterion(name, || c_opposite_involution(cap)),
        "fam-monad" => criterion(name, || c_fam_monad(cap)),
        "formats" => criterion(name, c_formats),
        other => (Check::new(other, false).counterexample("unknown criterion"), false),
    }
}

/// The corpus-wide verification sweep: one check per acceptance criterion.
/// Any cross-check divergence makes the sweep fail.
pub fn sweep(cap: usize) -> (Report, bool) {
    let mut report = Report::new("sweep-corpus");
    let mut all_ok = true;
    for name in CRITERIA {
        let (check, ok) = run_criterion(name, cap);
        report.push(check);
        all_ok &= ok;
    }
    (report, all_ok)
}

fn c_laws() -> Check {
    let doc = documents();
    let fibs = corpus_fibrations();
    let mut n = 0usize;
    for name in &doc.order {
        if let Some(c) = doc.category(name) {
            c.revalidate().expect("corpus category validates");
            n += 1;
        }
    }
    for (_, p) in &fibs {
        p.total().revalidate().expect("total validates");
        p.proj().validate().expect("projection validates");
    }
    Check::new("laws", true).witness(format!("{n} categories, {} fibrations", fibs.len()))
}

fn c_cartesian_lemmas() -> Check {
    let fibs = corpus_fibrations();
    let mut checks = 0usize;
    for (_, p) in &fibs {
        let total = p.total();
        for f in total.arrows() {
            assert_eq!(
                p.flags(f).cartesian_liberal,
                p.flags(f).hypercartesian,
                "liberal-cartesian equals hypercartesian on fibrations"
            );
            assert_eq!(
                total.is_iso(f),
                p.flags(f).hypercartesian && p.base().is_iso(p.over(f)),
                "iso iff hypercartesian over an iso"
            );
            checks += 2;
            for g in total.arrows() {
                if total.dom(f) == total.cod(g)
                    && p.flags(f).hypercartesian
                    && p.flags(g).hypercartesian
                {
                    let fg = total.compose(f, g).unwrap();
                    assert!(p.flags(fg).hypercartesian, "hypercartesian composition closure");
                    checks += 1;
                }
            }
        }
        for u in p.base().arrows() {
            for x in p.fibre_objects(p.base().cod(u)) {
                let lifts = p.cartesian_lift(u, x).expect("fibration").all;
                for &a in &lifts {
                    for &b in &lifts {
                        let i = p.vertical_factor_through(a, b).expect("lift link");
                        assert!(total.is_iso(i));
                        checks += 1;
                    }
                }
            }
        }
        // the vertical-factorisation reading of cocartesianness agrees
        // with the full quantifier on bifibration corpus members
        if p.verdict().opfibration {
            for f in total.arrows() {
                assert_eq!(
                    crate::fib::is_cocartesian(p.proj(), f),
                    crate::fib::is_cocartesian_simple(p.proj(), f),
                    "cocartesian readings agree"
                );
                checks += 1;
            }
        }
        // cleavage coherence: every c_{u,v} is a vertical iso; split
        // cleavages have identity coherence
        let cl = Cleavage::canonical(p).expect("fibration");
        let split = cl.check_split() == SplitVerdict::Split;
        for u in p.base().arrows() {
            for v in p.base().arrows() {
                if p.base().dom(u) != p.base().cod(v) {
                    continue;
                }
                for x in p.fibre_objects(p.base().cod(u)) {
                    let c = cl.coherence_iso(u, v, x);
                    assert!(p.is_vertical(c) && total.is_iso(c), "coherence is a vertical iso");
                    if split {
                        assert!(total.is_identity(c), "split cleavages have identity coherence");
                    }
                    checks += 1;
                }
            }
        }
    }
    // in a glueing, an arrow is cocartesian exactly when its top edge in
    // the glued category is invertible
    let d = d2();
    let f = poset_functor(&ordinal2(), &d, &[0, 3]);
    let gl = construct::glueing(&f).unwrap();
    let fund = construct::fundamental_fibration(&d).unwrap();
    for g in gl.fib.total().arrows() {
        let (_, fund_arr) = gl.arr_pairs[g.0];
        let (top, _) = fund.square[fund_arr.0];
        assert_eq!(
            gl.fib.is_cocartesian_arrow(g),
            d.is_iso(top),
            "glueing cocartesians have invertible top edges"
        );
        checks += 1;
    }
    Check::new("cartesian-lemmas", true).witness(format!("{checks} arrow checks"))
}

fn c_splitting(cap: usize) -> Check {
    let p = Arc::new(FibrationData::new(pmod()).unwrap());
    let cleavages = Cleavage::enumerate(&p, cap).expect("enumerable");
    let split = cleavages.iter().filter(|c| c.check_split() == SplitVerdict::Split).count();
    let hw = construct::grothendieck(&hwarn()).unwrap();
    let hw_cleavages = Cleavage::enumerate(&hw.fib, cap).expect("enumerable");
    let hw_split: Vec<&Cleavage> =
        hw_cleavages.iter().filter(|c| c.check_split() == SplitVerdict::Split).collect();
    let same = construct::to_indexed(&hw.fib, hw_split[0]).unwrap()
        == construct::to_indexed(&hw.fib, hw_split[1]).unwrap();
    Check::new("splitting", split == 0 && hw_split.len() == 2 && same)
        .witness(format!("pmod cleavages {} split {}", cleavages.len(), split))
        .crosscheck("hwarn-split-cleavages", hw_split.len(), 2usize)
}

fn c_fibred_yoneda(cap: usize) -> Check {
    let mut entries = Vec::new();
    for (name, p) in &corpus_fibrations() {
        if p.total().n_arrows() > 100 {
            continue; // keep the functor enumeration at desk scale
        }
        let sp = construct::split_right(p, cap).expect("Sp enumerable");
        assert_eq!(sp.groth.cleavage.check_split(), SplitVerdict::Split);
        let over_id = cat::FunctorData::identity(p.base());
        assert_eq!(
            crate::fib::check_fib_morphism(
                &crate::fib::FibMorphism::CartesianFunctor {
                    payload: sp.counit.clone(),
                    over: over_id.clone(),
                },
                &sp.groth.fib,
                p,
            ),
            crate::fib::FibMorphismVerdict::Cartesian,
            "E_P is a cartesian functor"
        );
        assert!(
            construct::fibrewise_equivalence(&sp.counit, &sp.groth.fib, p),
            "E_P is a fibrewise equivalence"
        );
        let cl = Cleavage::canonical(p).unwrap();
        let l = construct::split_left(p, &cl);
        assert_eq!(l.groth.cleavage.check_split(), SplitVerdict::Split);
        assert_eq!(
            crate::fib::check_fib_morphism(
                &crate::fib::FibMorphism::CartesianFunctor { payload: l.unit.clone(), over: over_id },
                p,
                &l.groth.fib,
            ),
            crate::fib::FibMorphismVerdict::Cartesian,
            "H_P is a cartesian functor"
        );
        assert!(
            construct::fibrewise_equivalence(&l.unit, p, &l.groth.fib),
            "H_P is a fibrewise equivalence"
        );
        entries.push(name.clone());
    }
    Check::new("fibred-yoneda", true).witness(entries)
}

fn c_biconditionals() -> Check {
    let fibs = corpus_fibrations();
    let mut c = Check::new("biconditionals", true);
    for (_, p) in &fibs {
        analyze::classify_shape(p);
        analyze::finite_limit_profile(p);
    }
    for b in [ordinal2(), d2(), n5()] {
        let p = construct::fundamental_fibration(&b).unwrap().fib;
        let cl = Cleavage::canonical(&p).unwrap();
        let op = construct::opposite_fibration(&p, &cl);
        c = c.crosscheck(
            "products-iff-opposite-sums",
            analyze::has_internal_products(&p).has_products,
            analyze::has_internal_sums(&op.fib).has_sums,
        );
    }
    for p in [
        construct::fundamental_fibration(&ordinal2()).unwrap().fib,
        construct::grothendieck(&hwarn()).unwrap().fib,
    ] {
        let v = moens::sums_iff_fam_adjoint(&p);
        c = c.crosscheck("sums-iff-fam-adjoint", v.internal_sums, v.adjoint);
    }
    let d = d2();
    for (f, expect) in [
        (poset_functor(&ordinal2(), &d, &[0, 3]), true),
        (poset_functor(&d, &d, &[0, 3, 2, 3]), false),
    ] {
        let gl = construct::glueing(&f).unwrap();
        c = c.crosscheck(
            "pullback-preservation-iff-glueing-sums",
            expect,
            analyze::has_internal_sums(&gl.fib).has_sums,
        );
    }
    for (_, p) in &fibs {
        if p.verdict().opfibration {
            let profile = analyze::sums_profile(p);
            assert!(profile.divergences.is_empty(), "divergence: {:?}", profile.divergences);
        }
    }
    let t1 = Arc::new(FinCat::terminal());
    let pt = construct::fundamental_fibration(&t1).unwrap().fib;
    c.crosscheck(
        "wellpowered-iff-topos-trivial-instance",
        matches!(analyze::is_well_powered(&pt), analyze::WellPoweredness::WellPowered { .. }),
        true,
    )
}

/// Oracle: distributivity of a finite lattice from its meet/join tables.
fn lattice_is_distributive(b: &Arc<FinCat>) -> bool {
    let le = |p: Obj, q: Obj| !b.hom(p, q).is_empty();
    let meet = |p: Obj, q: Obj| {
        b.objects()
            .filter(|&w| le(w, p) && le(w, q))
            .max_by_key(|w| b.objects().filter(|&v| le(v, *w)).count())
            .unwrap()
    };
    let join = |p: Obj, q: Obj| {
        b.objects()
            .filter(|&w| le(p, w) && le(q, w))
            .min_by_key(|w| b.objects().filter(|&v| le(v, *w)).count())
            .unwrap()
    };
    b.objects().all(|x| {
        b.objects().all(|y| {
            b.objects().all(|z| meet(x, join(y, z)) == join(meet(x, y), meet(x, z)))
        })
    })
}

fn c_heyting() -> Check {
    let mut c = Check::new("heyting-correlation", true);
    for (name, b) in [
        ("two", ordinal2()),
        ("chain3", chain(3)),
        ("d2", d2()),
        ("n5", n5()),
        ("m3", m3()),
    ] {
        let distributive = lattice_is_distributive(&b);
        let p = construct::fundamental_fibration(&b).unwrap().fib;
        let report = analyze::is_locally_small(&p);
        c = c.crosscheck(&format!("locally-small-{name}"), report.locally_small, distributive);
    }
    let n5cat = n5();
    let p = construct::fundamental_fibration(&n5cat).unwrap();
    let v = analyze::has_internal_products(&p.fib);
    let (u, x) = v.counterexample.expect("N5 has a product failure");
    let xa = p.obj_arrow[x];
    let pinned = n5cat.dom(Arr(u)) == Obj(3)
        && n5cat.cod(Arr(u)) == Obj(4)
        && n5cat.dom(xa) == Obj(1)
        && n5cat.cod(xa) == Obj(3);
    c.crosscheck("n5-witness", pinned, true)
}

fn c_well_poweredness() -> Check {
    let mut c = Check::new("well-poweredness", true);
    for (name, b) in
        [("two", ordinal2()), ("chain3", chain(3)), ("d2", d2()), ("n5", n5()), ("m3", m3())]
    {
        let p = construct::fundamental_fibration(&b).unwrap().fib;
        let absent = matches!(analyze::is_well_powered(&p), analyze::WellPoweredness::Absent { .. });
        c = c.crosscheck(&format!("not-wellpowered-{name}"), absent, true);
    }
    c
}

fn c_moens() -> Check {
    let mut c = Check::new("moens", true);
    for p in [
        construct::glueing(&poset_functor(&ordinal2(), &d2(), &[0, 3])).unwrap().fib,
        construct::fundamental_fibration(&d2()).unwrap().fib,
        construct::fundamental_fibration(&n5()).unwrap().fib,
    ] {
        let (v, _, _) = moens::moens_reconstruct(&p).expect("preconditions hold");
        c = c.crosscheck("moens-roundtrip", v.equivalence, true);
        moens::cor_moens_sweeps(&p);
        moens::cocartesian_mono_sweep(&p);
    }
    let wedge_fib = construct::grothendieck(&wedge()).unwrap().fib;
    let g = moens::gen_moens(&wedge_fib).expect("bifibration");
    c = c.crosscheck("gen-moens-wedge-all-false", (g.cond1, g.cond2, g.cond3), (false, false, false));
    let gl = construct::glueing(&poset_functor(&d2(), &d2(), &[0, 3, 2, 3])).unwrap();
    let g2 = moens::gen_moens(&gl.fib).expect("bifibration");
    c.crosscheck("gen-moens-terminal-preserving", (g2.cond1, g2.equivalence), (true, Some(true)))
}

fn c_geometric_profiles() -> Check {
    let mut c = Check::new("geometric-profiles", true);
    let doc = documents();
    for name in ["adj_id_d2", "adj_incl", "adj_proj"] {
        let adj = doc.adjunction(name).expect("corpus adjunction");
        let profile = moens::gm_classify(adj).expect("left exact");
        c = c.crosscheck(&format!("non-divergent-{name}"), profile.any_divergent(), false);
    }
    c
}

fn c_opposite_involution(cap: usize) -> Check {
    let mut c = Check::new("opposite-involution", true);
    for (name, p) in &corpus_fibrations() {
        if p.total().n_arrows() > 100 {
            continue;
        }
        let cl = Cleavage::canonical(p).unwrap();
        let op = construct::opposite_fibration(p, &cl);
        let cl2 = Cleavage::alternate(p).unwrap();
        let op2 = construct::opposite_fibration(p, &cl2);
        c = c.crosscheck(
            &format!("cleavage-independent-{name}"),
            op.fib.proj() == op2.fib.proj(),
            true,
        );
        let cl_op = Cleavage::canonical(&op.fib).unwrap();
        let opop = construct::opposite_fibration(&op.fib, &cl_op);
        c = c.crosscheck(
            &format!("involution-{name}"),
            cat::categories_equivalent(opop.fib.total(), p.total(), cap).is_equivalent(),
            true,
        );
    }
    let b = d2();
    let int = construct::InternalCat::discrete(&b, Obj(1));
    let e = construct::externalize(&int).unwrap();
    let cl = Cleavage::canonical(&e.fib).unwrap();
    let e_op = construct::opposite_fibration(&e.fib, &cl);
    let e2 = construct::externalize(&int.opposite()).unwrap();
    c.crosscheck(
        "externalize-opposite",
        cat::categories_equivalent(e_op.fib.total(), e2.fib.total(), cap).is_equivalent(),
        true,
    )
}

fn c_fam_monad(cap: usize) -> Check {
    // η_P is a cartesian functor for every corpus fibration (asserted
    // inside the construction).
    for (_, q) in &corpus_fibrations() {
        if q.total().n_arrows() > 100 {
            continue;
        }
        let famq = construct::fam_fibration(q).expect("corpus bases have pullbacks");
        let _ = construct::fam_eta(q, &famq);
    }
    let p = Arc::new(FibrationData::new(pmod()).unwrap());
    let fam1 = construct::fam_fibration(&p).unwrap();
    let eta = construct::fam_eta(&p, &fam1); // cartesianness asserted inside
    let fam2 = construct::fam_fibration(&fam1.fib).unwrap();
    let mu = construct::fam_mu(&p, &fam1, &fam2);
    let fam_eta_f = construct::fam_of_functor(&eta, &fam1, &fam2);
    let left_unit = cat::FunctorData::compose(&mu, &fam_eta_f).is_identity();
    let eta_fam = construct::fam_eta(&fam1.fib, &fam2);
    let right_unit = cat::FunctorData::compose(&mu, &eta_fam).is_identity();
    let z2 = cyclic(2);
    let q = Arc::new(FibrationData::new(bang(&z2)).unwrap());
    let famq = construct::fam_fibration(&q).unwrap();
    let iso = cat::categories_equivalent(famq.fib.total(), q.total(), cap).is_equivalent();
    Check::new("fam-monad", left_unit && right_unit && iso)
        .crosscheck("monad-unit-laws", (left_unit, right_unit), (true, true))
        .crosscheck("fam-over-terminal", iso, true)
}

fn c_formats() -> Check {
    let doc = documents();
    let text = crate::format::print(&doc);
    let reparsed = crate::format::parse(&text).expect("corpus parses");
    let fixed_point = crate::format::print(&reparsed) == text;
    let corrupted = text.replace("compose 1 1 2", "compose 1 1 3");
    let rejects = crate::format::parse(&corrupted).is_err();
    Check::new("formats", fixed_point && rejects)
        .crosscheck("print-parse-fixed-point", fixed_point, true)
        .crosscheck("corruption-rejected", rejects, true)
}
