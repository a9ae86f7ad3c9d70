use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::cat::{terminal_object, Arr, FunctorData, Obj};
use crate::construct::{fibrewise_equivalence, underline};
use crate::fib::FibrationData;

/// Shape flags for a fibration, each decided fibrewise and through the
/// functor-level criterion, with agreement asserted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ShapeFlags {
    pub discrete: bool,
    pub groupoidal: bool,
    pub posetal: bool,
    pub elementary: bool,
    pub conservative: bool,
    pub faithful: bool,
}

pub fn classify_shape(p: &FibrationData) -> ShapeFlags {
    let total = p.total();
    let base = p.base();
    // fibrewise
    let discrete_fw = total.arrows().all(|f| !p.is_vertical(f) || total.is_identity(f));
    let groupoidal_fw = total.arrows().all(|f| !p.is_vertical(f) || total.is_iso(f));
    let posetal_fw = total.objects().all(|x| {
        total.objects().all(|y| {
            total
                .hom(x, y)
                .iter()
                .filter(|&&f| p.is_vertical(f))
                .count()
                <= 1
        })
    });
    // functor-level: P reflects identities / isos; P faithful.
    let discrete_fn = total.arrows().all(|f| !base.is_identity(p.over(f)) || total.is_identity(f));
    let conservative = total.arrows().all(|f| !base.is_iso(p.over(f)) || total.is_iso(f));
    let faithful = total.objects().all(|x| {
        total.objects().all(|y| {
            let hs = total.hom(x, y);
            hs.iter().all(|&f| hs.iter().all(|&g| f == g || p.over(f) != p.over(g)))
        })
    });
    if p.is_fibration() {
        assert_eq!(discrete_fw, discrete_fn, "discreteness criteria agree");
        assert_eq!(groupoidal_fw, conservative, "groupoid fibres iff conservative");
        assert_eq!(posetal_fw, faithful, "posetal fibres iff faithful");
        assert_eq!(
            posetal_fw && groupoidal_fw,
            faithful && conservative,
            "elementary criteria agree"
        );
    }
    ShapeFlags {
        discrete: discrete_fw,
        groupoidal: groupoidal_fw,
        posetal: posetal_fw,
        elementary: posetal_fw && groupoidal_fw,
        conservative,
        faithful,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
pub enum RepresentabilityError {
    #[error("fibration is not elementary")]
    NotElementary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Representability {
    /// Terminal object of the total category, over this base object, with
    /// the slice comparison verified to be a fibrewise equivalence.
    Representable { witness: usize, over: usize },
    Absent,
}

/// An elementary fibration is representable iff its total category has a
/// terminal object; the equivalence with `∂0 : B/I -> B` is certified.
pub fn is_representable(p: &Arc<FibrationData>) -> Result<Representability, RepresentabilityError> {
    if !classify_shape(p).elementary {
        return Err(RepresentabilityError::NotElementary);
    }
    let total = p.total();
    let Some(r) = terminal_object(total) else {
        return Ok(Representability::Absent);
    };
    let i = p.base_of(r);
    // Every object has a unique classifying arrow: t_X is the unique arrow
    // into the terminal, and the comparison functor into the slice sends X
    // to P(t_X).
    let sl = underline(p.base(), i);
    let t_arrow = |x: Obj| -> Arr { total.hom(x, r)[0] };
    let obj_map: Vec<Obj> = total.objects().map(|x| sl.obj_ix[&p.over(t_arrow(x))]).collect();
    let arr_map: Vec<Arr> = total
        .arrows()
        .map(|f| {
            let (x, y) = (total.dom(f), total.cod(f));
            sl.arr_ix[&(p.over(t_arrow(x)), p.over(t_arrow(y)), p.over(f))]
        })
        .collect();
    let cmp = FunctorData {
        source: total.clone(),
        target: sl.fib.total().clone(),
        obj_map,
        arr_map,
    };
    cmp.validate().expect("slice comparison is a functor");
    assert!(
        fibrewise_equivalence(&cmp, p, &sl.fib),
        "representable elementary fibration is equivalent to its slice"
    );
    Ok(Representability::Representable { witness: r.0, over: i.0 })
}
