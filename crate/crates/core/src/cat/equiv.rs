use std::sync::Arc;

use super::fincat::{Arr, FinCat, Obj};
use super::mappings::{FunctorData, NatTransData};

/// Witness for an equivalence of categories.
#[derive(Clone, Debug)]
pub struct EquivalenceWitness {
    pub forward: FunctorData,
    pub backward: FunctorData,
    /// Natural iso Id_C -> backward ∘ forward.
    pub unit: NatTransData,
    /// Natural iso forward ∘ backward -> Id_D.
    pub counit: NatTransData,
}

#[derive(Clone, Debug)]
pub enum EquivalenceResult {
    Equivalent(Box<EquivalenceWitness>),
    Absent,
    SearchCapExceeded { cap: usize },
}

impl EquivalenceResult {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, EquivalenceResult::Equivalent(_))
    }
}

/// The skeleton of a category: the full subcategory on the least object of
/// each isomorphism class, plus, for every object, a chosen iso to its
/// representative.
struct Skeleton {
    cat: Arc<FinCat>,
    /// representative object in the original category, per skeleton object
    reps: Vec<Obj>,
    /// skeleton object for each original object
    cls: Vec<usize>,
    /// chosen iso x -> rep(x) in the original category
    to_rep: Vec<Arr>,
    /// original arrow id per skeleton arrow
    arrs: Vec<Arr>,
}

fn skeleton(c: &Arc<FinCat>) -> Skeleton {
    let mut cls = vec![usize::MAX; c.n_objects()];
    let mut reps = Vec::new();
    let mut to_rep = vec![Arr(usize::MAX); c.n_objects()];
    for x in c.objects() {
        if cls[x.0] != usize::MAX {
            continue;
        }
        let k = reps.len();
        reps.push(x);
        for y in c.iso_class(x) {
            cls[y.0] = k;
            // The representative itself is pinned to the identity so that
            // transport along `to_rep` fixes skeleton arrows pointwise.
            to_rep[y.0] = if y == x {
                c.id(x)
            } else {
                *c.hom(y, x)
                    .iter()
                    .find(|&&f| c.is_iso(f))
                    .expect("iso class member has an iso to the representative")
            };
        }
    }
    // Full subcategory on the representatives.
    let mut arrs = Vec::new();
    let mut arr_ix = std::collections::BTreeMap::new();
    for f in c.arrows() {
        if cls[c.dom(f).0] != usize::MAX
            && reps[cls[c.dom(f).0]] == c.dom(f)
            && reps[cls[c.cod(f).0]] == c.cod(f)
        {
            arr_ix.insert(f, Arr(arrs.len()));
            arrs.push(f);
        }
    }
    let dom = arrs.iter().map(|&f| Obj(cls[c.dom(f).0])).collect();
    let cod = arrs.iter().map(|&f| Obj(cls[c.cod(f).0])).collect();
    let identity = reps.iter().map(|&r| arr_ix[&c.id(r)]).collect();
    let entries: Vec<((Arr, Arr), Arr)> = arrs
        .iter()
        .enumerate()
        .flat_map(|(gi, &g)| {
            arrs.iter().enumerate().filter_map(move |(fi, &f)| {
                (c.dom(g) == c.cod(f)).then_some((gi, g, fi, f))
            })
        })
        .map(|(gi, g, fi, f)| ((Arr(gi), Arr(fi)), arr_ix[&c.compose(g, f).unwrap()]))
        .collect();
    let cat = FinCat::from_parts(reps.len(), dom, cod, identity, &entries)
        .expect("full subcategory is a category");
    Skeleton { cat: Arc::new(cat), reps, cls, to_rep, arrs }
}

/// Backtracking isomorphism search between two categories. Returns the
/// object and arrow bijections, or None / cap.
fn find_isomorphism(a: &Arc<FinCat>, b: &Arc<FinCat>, cap: &mut usize) -> Result<Option<FunctorData>, ()> {
    if a.n_objects() != b.n_objects() || a.n_arrows() != b.n_arrows() {
        return Ok(None);
    }
    let n = a.n_objects();
    // Invariant per object: sorted multiset of (hom-in sizes, hom-out sizes, endo size).
    let profile = |c: &FinCat, x: Obj| -> (usize, Vec<usize>, Vec<usize>) {
        let endo = c.hom(x, x).len();
        let mut outs: Vec<usize> = c.objects().map(|y| c.hom(x, y).len()).collect();
        let mut ins: Vec<usize> = c.objects().map(|y| c.hom(y, x).len()).collect();
        outs.sort_unstable();
        ins.sort_unstable();
        (endo, outs, ins)
    };
    let pa: Vec<_> = a.objects().map(|x| profile(a, x)).collect();
    let pb: Vec<_> = b.objects().map(|x| profile(b, x)).collect();

    #[allow(clippy::too_many_arguments)]
    fn extend(
        a: &Arc<FinCat>,
        b: &Arc<FinCat>,
        pa: &[(usize, Vec<usize>, Vec<usize>)],
        pb: &[(usize, Vec<usize>, Vec<usize>)],
        omap: &mut Vec<Option<Obj>>,
        used: &mut Vec<bool>,
        i: usize,
        cap: &mut usize,
    ) -> Result<Option<FunctorData>, ()> {
        if *cap == 0 {
            return Err(());
        }
        *cap -= 1;
        let n = a.n_objects();
        if i == n {
            // Objects fixed; match arrows hom-set by hom-set.
            let mut amap: Vec<Option<Arr>> = vec![None; a.n_arrows()];
            return match_arrows(a, b, omap, &mut amap, 0, cap);
        }
        for y in b.objects() {
            if used[y.0] || pa[i] != pb[y.0] {
                continue;
            }
            // Hom-count consistency with already-mapped objects.
            let consistent = (0..i).all(|j| {
                let yj = omap[j].unwrap();
                a.hom(Obj(i), Obj(j)).len() == b.hom(y, yj).len()
                    && a.hom(Obj(j), Obj(i)).len() == b.hom(yj, y).len()
            });
            if !consistent {
                continue;
            }
            omap[i] = Some(y);
            used[y.0] = true;
            if let Some(found) = extend(a, b, pa, pb, omap, used, i + 1, cap)? {
                return Ok(Some(found));
            }
            omap[i] = None;
            used[y.0] = false;
        }
        Ok(None)
    }

    fn match_arrows(
        a: &Arc<FinCat>,
        b: &Arc<FinCat>,
        omap: &[Option<Obj>],
        amap: &mut Vec<Option<Arr>>,
        i: usize,
        cap: &mut usize,
    ) -> Result<Option<FunctorData>, ()> {
        if *cap == 0 {
            return Err(());
        }
        *cap -= 1;
        let mut i = i;
        while i < a.n_arrows() && amap[i].is_some() {
            i += 1;
        }
        if i == a.n_arrows() {
            let f = FunctorData {
                source: a.clone(),
                target: b.clone(),
                obj_map: omap.iter().map(|o| o.unwrap()).collect(),
                arr_map: amap.iter().map(|x| x.unwrap()).collect(),
            };
            if f.validate().is_ok() {
                let mut seen = vec![false; b.n_arrows()];
                let bij = f.arr_map.iter().all(|&im| !std::mem::replace(&mut seen[im.0], true));
                if bij {
                    return Ok(Some(f));
                }
            }
            return Ok(None);
        }
        let f = Arr(i);
        if a.is_identity(f) {
            amap[i] = Some(b.id(omap[a.dom(f).0].unwrap()));
            let r = match_arrows(a, b, omap, amap, i + 1, cap)?;
            if r.is_some() {
                return Ok(r);
            }
            amap[i] = None;
            return Ok(None);
        }
        let (src, dst) = (omap[a.dom(f).0].unwrap(), omap[a.cod(f).0].unwrap());
        for &im in b.hom(src, dst) {
            if amap.contains(&Some(im)) {
                continue;
            }
            // Composition consistency with assigned arrows.
            let ok = a.arrows().all(|g| {
                let Some(img) = amap[g.0].or((g == f).then_some(im)) else { return true };
                let check = |x: Arr, y: Arr, ix: Arr, iy: Arr| match a.compose(x, y) {
                    Some(xy) => match amap[xy.0].or((xy == f).then_some(im)) {
                        Some(ixy) => b.compose(ix, iy) == Some(ixy),
                        None => true,
                    },
                    None => true,
                };
                check(f, g, im, img) && check(g, f, img, im)
            });
            if ok {
                amap[i] = Some(im);
                if let Some(found) = match_arrows(a, b, omap, amap, i + 1, cap)? {
                    return Ok(Some(found));
                }
                amap[i] = None;
            }
        }
        Ok(None)
    }

    let mut omap = vec![None; n];
    let mut used = vec![false; n];
    extend(a, b, &pa, &pb, &mut omap, &mut used, 0, cap)
}

/// Decides equivalence of finite categories: both are skeletalised and the
/// skeletons are matched by exhaustive isomorphism search. On success a full
/// witness (functors both ways plus unit and counit isos) is assembled and
/// law-checked.
pub fn categories_equivalent(c: &Arc<FinCat>, d: &Arc<FinCat>, cap: usize) -> EquivalenceResult {
    let sc = skeleton(c);
    let sd = skeleton(d);
    let mut budget = cap;
    let iso = match find_isomorphism(&sc.cat, &sd.cat, &mut budget) {
        Err(()) => return EquivalenceResult::SearchCapExceeded { cap },
        Ok(None) => return EquivalenceResult::Absent,
        Ok(Some(f)) => f,
    };

    // forward : C -> D maps x to the D-representative image of its class,
    // transported along the chosen isos.
    let fwd_ob = |x: Obj| sd.reps[iso.ob(Obj(sc.cls[x.0])).0];
    let fwd_skel_arr = |f: Arr| sd.arrs[iso.arr(f).0];
    let forward_obj: Vec<Obj> = c.objects().map(fwd_ob).collect();
    let forward_arr: Vec<Arr> = c
        .arrows()
        .map(|f| {
            // rep(cod) ∘ f ∘ rep(dom)^{-1} in the skeleton, then transport.
            let (x, y) = (c.dom(f), c.cod(f));
            let rf = c
                .compose_path(&[c.inverse(sc.to_rep[x.0]).unwrap(), f, sc.to_rep[y.0]])
                .expect("composable path");
            let sk = sc
                .arrs
                .iter()
                .position(|&g| g == rf)
                .expect("arrow between representatives lies in the skeleton");
            fwd_skel_arr(Arr(sk))
        })
        .collect();
    let forward = FunctorData { source: c.clone(), target: d.clone(), obj_map: forward_obj, arr_map: forward_arr };
    forward.validate().expect("forward functor of equivalence");

    // backward built the same way from the inverse skeleton iso.
    let inv_iso = {
        let mut obj_map = vec![Obj(0); sd.cat.n_objects()];
        let mut arr_map = vec![Arr(0); sd.cat.n_arrows()];
        for x in sc.cat.objects() {
            obj_map[iso.ob(x).0] = x;
        }
        for f in sc.cat.arrows() {
            arr_map[iso.arr(f).0] = f;
        }
        FunctorData { source: sd.cat.clone(), target: sc.cat.clone(), obj_map, arr_map }
    };
    let bwd_ob = |y: Obj| sc.reps[inv_iso.ob(Obj(sd.cls[y.0])).0];
    let backward_arr: Vec<Arr> = d
        .arrows()
        .map(|f| {
            let (x, y) = (d.dom(f), d.cod(f));
            let rf = d
                .compose_path(&[d.inverse(sd.to_rep[x.0]).unwrap(), f, sd.to_rep[y.0]])
                .expect("composable path");
            let sk = sd.arrs.iter().position(|&g| g == rf).expect("skeleton arrow");
            sc.arrs[inv_iso.arr(Arr(sk)).0]
        })
        .collect();
    let backward = FunctorData {
        source: d.clone(),
        target: c.clone(),
        obj_map: d.objects().map(bwd_ob).collect(),
        arr_map: backward_arr,
    };
    backward.validate().expect("backward functor of equivalence");

    // unit_x : x -> backward(forward(x)) = rep_C(x) is the chosen iso.
    let unit = NatTransData {
        source_functor: FunctorData::identity(c),
        target_functor: FunctorData::compose(&backward, &forward),
        components: c.objects().map(|x| sc.to_rep[x.0]).collect(),
    };
    // counit_y : forward(backward(y)) = rep-image -> y.
    let counit = NatTransData {
        source_functor: FunctorData::compose(&forward, &backward),
        target_functor: FunctorData::identity(d),
        components: d
            .objects()
            .map(|y| {
                let fby = forward.ob(backward.ob(y));
                // fby is the D-representative of y's class.
                debug_assert_eq!(fby, sd.reps[sd.cls[y.0]]);
                d.inverse(sd.to_rep[y.0]).unwrap()
            })
            .collect(),
    };
    unit.validate().expect("unit of equivalence is natural");
    counit.validate().expect("counit of equivalence is natural");
    assert!(unit.is_iso() && counit.is_iso());
    EquivalenceResult::Equivalent(Box::new(EquivalenceWitness { forward, backward, unit, counit }))
}
