use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cat::{Arr, CatBuilder, FunctorData, Obj};
use crate::fib::{Cleavage, FibrationData};

/// An equivalence class of spans `(α vertical, φ hypercartesian)` with a
/// shared domain: one hom of the opposite fibration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanClass {
    /// every member, ascending; two spans are identified when a vertical
    /// iso translates one into the other
    pub members: Vec<(Arr, Arr)>,
    /// the member whose cartesian leg is the cleavage's chosen lift
    pub representative: (Arr, Arr),
}

/// The opposite fibration `P^op`: same objects, homs are span classes.
/// Arrow ids are assigned from the least member of each class, so the
/// output is independent of the cleavage (which only selects the
/// distinguished representative).
pub struct OppositeFibration {
    pub fib: Arc<FibrationData>,
    pub classes: Vec<SpanClass>,
}

pub fn opposite_fibration(p: &Arc<FibrationData>, cl: &Cleavage) -> OppositeFibration {
    assert!(p.is_fibration(), "the opposite is defined for fibrations");
    let total = p.total().clone();
    let base = p.base().clone();

    // Enumerate all spans and group them into classes. A span with domain
    // Z is (α : Z -> Y vertical, φ : Z -> X hypercartesian over u); it is a
    // hom from Y to X over u in P^op.
    let mut spans: Vec<(Arr, Arr)> = Vec::new();
    for alpha in total.arrows() {
        if !p.is_vertical(alpha) {
            continue;
        }
        for phi in total.arrows_from(total.dom(alpha)) {
            if p.is_cartesian(phi) {
                spans.push((alpha, phi));
            }
        }
    }
    // Union-find by vertical-iso translation.
    let mut class_of: BTreeMap<(Arr, Arr), usize> = BTreeMap::new();
    let mut classes: Vec<Vec<(Arr, Arr)>> = Vec::new();
    for &(alpha, phi) in &spans {
        if class_of.contains_key(&(alpha, phi)) {
            continue;
        }
        let k = classes.len();
        let mut members = Vec::new();
        for &(alpha2, phi2) in &spans {
            // same endpoints, same base arrow
            if total.cod(alpha2) != total.cod(alpha)
                || total.cod(phi2) != total.cod(phi)
                || p.over(phi2) != p.over(phi)
            {
                continue;
            }
            let related = total
                .hom(total.dom(alpha2), total.dom(alpha))
                .iter()
                .any(|&iota| {
                    p.is_vertical(iota)
                        && total.is_iso(iota)
                        && total.compose(alpha, iota) == Some(alpha2)
                        && total.compose(phi, iota) == Some(phi2)
                });
            if related {
                members.push((alpha2, phi2));
            }
        }
        members.sort_unstable();
        for &m in &members {
            class_of.insert(m, k);
        }
        classes.push(members);
    }

    // Representative: the unique member whose cartesian leg is Cart(u, X).
    let span_classes: Vec<SpanClass> = classes
        .iter()
        .map(|members| {
            let rep = members
                .iter()
                .copied()
                .find(|&(_, phi)| {
                    let u = p.over(phi);
                    let x = total.cod(phi);
                    cl.cart(u, x) == phi
                })
                .expect("each class contains a unique cleavage-normal member");
            SpanClass { members: members.clone(), representative: rep }
        })
        .collect();

    // Build the category: objects as in P, arrow key = (dom obj, cod obj,
    // least member). In P^op the arrow goes from cod(α) = Y to cod(φ) = X.
    let mut builder = CatBuilder::new();
    for x in total.objects() {
        builder.add_object(x);
    }
    let class_key = |k: usize| -> (Obj, Obj, (Arr, Arr)) {
        let m = classes[k][0];
        (total.cod(m.0), total.cod(m.1), m)
    };
    for (k, members) in classes.iter().enumerate() {
        let (alpha, phi) = members[0];
        builder.add_arrow(class_key(k), total.cod(alpha), total.cod(phi));
    }
    for x in total.objects() {
        let k = class_of[&(total.id(x), total.id(x))];
        builder.set_identity(x, class_key(k));
    }

    // Composition per the span pullback diagram, computed on the
    // distinguished representatives and normalised back to a class.
    let compose_classes = |gk: usize, fk: usize| -> usize {
        // g : Y -> X over u, f : Z -> Y over v; composite Z -> X over u∘v.
        let (alpha, phi) = span_classes[gk].representative;
        let (beta, psi) = span_classes[fk].representative;
        // ψ~ : cartesian lift of dom(φ) along v; α~ vertical with
        // ψ ∘ α~ = α ∘ ψ~.
        let v = p.over(psi);
        let psi_t = p
            .cartesian_lift(v, total.dom(phi))
            .expect("fibration has lifts")
            .canonical;
        let theta = total.compose(alpha, psi_t).expect("composable");
        let alpha_t = p.factor_through(psi, theta, base.id(base.dom(v))).expect("vertical factor");
        let raw = (
            total.compose(beta, alpha_t).expect("vertical composite"),
            total.compose(phi, psi_t).expect("cartesian composite"),
        );
        *class_of.get(&raw).expect("composite span is again a span")
    };
    let built = builder
        .build(|gk, fk| {
            let g = class_of[&gk.2];
            let f = class_of[&fk.2];
            class_key(compose_classes(g, f))
        })
        .expect("the opposite fibration total is a category");

    let proj = FunctorData {
        source: built.cat.clone(),
        target: base.clone(),
        obj_map: total.objects().map(|x| p.base_of(x)).collect(),
        arr_map: built
            .arr_key
            .iter()
            .map(|&(_, _, (_, phi))| p.over(phi))
            .collect(),
    };
    let fib = Arc::new(FibrationData::new(proj).expect("P^op projects"));
    assert!(fib.is_fibration(), "P^op is a fibration");
    // Cross-check: the P^op-cartesian arrows are the classes with iso
    // vertical leg.
    let ordered: Vec<&SpanClass> = built
        .arr_key
        .iter()
        .map(|k| &span_classes[class_of[&k.2]])
        .collect();
    for (i, class) in ordered.iter().enumerate() {
        let alpha_iso = total.is_iso(class.members[0].0);
        assert_eq!(
            fib.is_cartesian(Arr(i)),
            alpha_iso,
            "P^op-cartesian arrows are the classes with invertible vertical leg"
        );
    }
    OppositeFibration { fib, classes: ordered.into_iter().cloned().collect() }
}
