use std::sync::Arc;

use crate::cat::{Arr, CatBuilder, FinCat, FunctorData, Obj};
use crate::fib::FibrationData;

/// The finite category of cartesian functors `P -> Q` over a base functor,
/// with vertical natural transformations as arrows.
pub struct CartFunctorCat {
    pub cat: Arc<FinCat>,
    pub functors: Vec<FunctorData>,
    /// vertical components per arrow, indexed by source total object
    pub transfs: Vec<Vec<Arr>>,
}

impl CartFunctorCat {
    pub fn functor_index(&self, f: &FunctorData) -> Option<Obj> {
        self.functors.iter().position(|g| g == f).map(Obj)
    }

    pub fn transf_index(&self, dom: Obj, cod: Obj, comps: &[Arr]) -> Option<Arr> {
        self.cat
            .arrows()
            .find(|&a| self.cat.dom(a) == dom && self.cat.cod(a) == cod && self.transfs[a.0] == comps)
    }
}

/// Enumerates the cartesian functors `F : P -> Q` with `Q ∘ F = over ∘ P`
/// bit-exactly and hypercartesian arrows preserved, by backtracking with
/// fibrewise pruning. `cap` bounds visited assignments; `None` on blowup.
pub fn enumerate_cartesian_functors(
    p: &FibrationData,
    q: &FibrationData,
    over: &FunctorData,
    cap: usize,
) -> Option<Vec<FunctorData>> {
    let tp = p.total().clone();
    let tq = q.total().clone();
    let mut out = Vec::new();
    let mut budget = cap;

    struct Ctx<'a> {
        p: &'a FibrationData,
        q: &'a FibrationData,
        over: &'a FunctorData,
        tp: Arc<FinCat>,
        tq: Arc<FinCat>,
    }
    let ctx = Ctx { p, q, over, tp: tp.clone(), tq: tq.clone() };

    fn objects(ctx: &Ctx, i: usize, omap: &mut Vec<Obj>, out: &mut Vec<FunctorData>, budget: &mut usize) -> bool {
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        if i == ctx.tp.n_objects() {
            let mut amap = vec![Arr(usize::MAX); ctx.tp.n_arrows()];
            for x in ctx.tp.objects() {
                amap[ctx.tp.id(x).0] = ctx.tq.id(omap[x.0]);
            }
            return arrows(ctx, 0, omap, &mut amap, out, budget);
        }
        // The image must lie over over(P(x)).
        let want = ctx.over.ob(ctx.p.base_of(Obj(i)));
        for y in ctx.tq.objects() {
            if ctx.q.base_of(y) != want {
                continue;
            }
            omap[i] = y;
            if !objects(ctx, i + 1, omap, out, budget) {
                return false;
            }
        }
        true
    }

    fn arrows(
        ctx: &Ctx,
        i: usize,
        omap: &[Obj],
        amap: &mut Vec<Arr>,
        out: &mut Vec<FunctorData>,
        budget: &mut usize,
    ) -> bool {
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        let mut i = i;
        while i < ctx.tp.n_arrows() && amap[i] != Arr(usize::MAX) {
            i += 1;
        }
        if i == ctx.tp.n_arrows() {
            let f = FunctorData {
                source: ctx.tp.clone(),
                target: ctx.tq.clone(),
                obj_map: omap.to_vec(),
                arr_map: amap.clone(),
            };
            if f.validate().is_ok() {
                out.push(f);
            }
            return true;
        }
        let f = Arr(i);
        let want_base = ctx.over.arr(ctx.p.over(f));
        let (src, dst) = (omap[ctx.tp.dom(f).0], omap[ctx.tp.cod(f).0]);
        let need_cart = ctx.p.is_cartesian(f);
        for &im in ctx.tq.hom(src, dst) {
            if ctx.q.over(im) != want_base {
                continue;
            }
            if need_cart && !ctx.q.is_cartesian(im) {
                continue;
            }
            // Composition consistency against every assigned arrow.
            let ok = ctx.tp.arrows().all(|g| {
                let img = if g == f { im } else { amap[g.0] };
                if img == Arr(usize::MAX) {
                    return true;
                }
                let chk = |x: Arr, y: Arr, ix: Arr, iy: Arr| match ctx.tp.compose(x, y) {
                    Some(xy) => {
                        let ixy = if xy == f { im } else { amap[xy.0] };
                        ixy == Arr(usize::MAX) || ctx.tq.compose(ix, iy) == Some(ixy)
                    }
                    None => true,
                };
                chk(f, g, im, img) && chk(g, f, img, im)
            });
            if ok {
                amap[i] = im;
                if !arrows(ctx, i + 1, omap, amap, out, budget) {
                    return false;
                }
                amap[i] = Arr(usize::MAX);
            }
        }
        true
    }

    let mut omap = vec![Obj(0); tp.n_objects()];
    if tp.n_objects() == 0 {
        out.push(FunctorData { source: tp, target: tq, obj_map: vec![], arr_map: vec![] });
        return Some(out);
    }
    if objects(&ctx, 0, &mut omap, &mut out, &mut budget) {
        Some(out)
    } else {
        None
    }
}

/// Builds the hom category `Fib(B)(P, Q)` (over a fixed base functor):
/// objects the enumerated cartesian functors, arrows the vertical natural
/// transformations.
pub fn cartesian_functor_category(
    p: &FibrationData,
    q: &FibrationData,
    over: &FunctorData,
    cap: usize,
) -> Option<CartFunctorCat> {
    let functors = enumerate_cartesian_functors(p, q, over, cap)?;
    let tp = p.total().clone();
    let tq = q.total().clone();
    let mut builder = CatBuilder::new();
    for (i, _) in functors.iter().enumerate() {
        builder.add_object(i);
    }
    let mut keys: Vec<(usize, usize, Vec<Arr>)> = Vec::new();
    let mut work = 0usize;
    for (si, s) in functors.iter().enumerate() {
        for (ti, t) in functors.iter().enumerate() {
            // vertical components, enumerated objectwise
            let mut stack: Vec<Vec<Arr>> = vec![vec![]];
            for x in tp.objects() {
                let mut next = Vec::new();
                for partial in &stack {
                    for &c in tq.hom(s.ob(x), t.ob(x)) {
                        if !q.is_vertical(c) {
                            continue;
                        }
                        work += 1;
                        if work > cap {
                            return None;
                        }
                        let mut e = partial.clone();
                        e.push(c);
                        next.push(e);
                    }
                }
                stack = next;
            }
            for comps in stack {
                let natural = tp.arrows().all(|a| {
                    let (x, y) = (tp.dom(a), tp.cod(a));
                    tq.compose(comps[y.0], s.arr(a)) == tq.compose(t.arr(a), comps[x.0])
                });
                if natural {
                    keys.push((si, ti, comps));
                }
            }
        }
    }
    for k in &keys {
        builder.add_arrow(k.clone(), k.0, k.1);
    }
    for (i, f) in functors.iter().enumerate() {
        let idc: Vec<Arr> = tp.objects().map(|x| tq.id(f.ob(x))).collect();
        builder.set_identity(i, (i, i, idc));
    }
    let built = builder
        .build(|g, f| {
            let comps: Vec<Arr> =
                g.2.iter().zip(&f.2).map(|(&gc, &fc)| tq.compose(gc, fc).unwrap()).collect();
            (f.0, g.1, comps)
        })
        .expect("hom category of cartesian functors");
    let transfs = built.arr_key.iter().map(|k| k.2.clone()).collect();
    Some(CartFunctorCat { cat: built.cat, functors, transfs })
}
