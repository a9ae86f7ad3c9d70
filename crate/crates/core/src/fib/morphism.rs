use serde::Serialize;

use crate::cat::{FunctorData, NatTransData};

use super::cleavage::Cleavage;
use super::data::FibrationData;

/// A morphism of `Fib(B)`: a cartesian functor or a vertical transformation,
/// over a base functor (the identity for morphisms of `Fib(B)` proper).
#[derive(Clone, Debug)]
pub enum FibMorphism {
    CartesianFunctor { payload: FunctorData, over: FunctorData },
    VerticalTransformation { payload: NatTransData },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FibMorphismVerdict {
    Cartesian,
    /// The square `Q ∘ F = over ∘ P` fails to commute bit-exactly.
    SquareViolated { kind: &'static str, id: usize },
    /// A hypercartesian arrow is not sent to a hypercartesian arrow.
    CartesianityViolated { arrow: usize },
    /// A component is not vertical.
    NonVerticalComponent { object: usize },
    NaturalityViolated { arrow: usize },
    InvalidPayload,
}

/// Checks the fibred-functor conditions exhaustively: (1) the projection square commutes
/// bit-exactly, (2) hypercartesian arrows map to hypercartesian arrows.
/// For transformations: all components vertical and natural.
pub fn check_fib_morphism(m: &FibMorphism, p: &FibrationData, q: &FibrationData) -> FibMorphismVerdict {
    match m {
        FibMorphism::CartesianFunctor { payload, over } => {
            if payload.validate().is_err() || over.validate().is_err() {
                return FibMorphismVerdict::InvalidPayload;
            }
            let left = FunctorData::compose(q.proj(), payload);
            let right = FunctorData::compose(over, p.proj());
            for x in p.total().objects() {
                if left.ob(x) != right.ob(x) {
                    return FibMorphismVerdict::SquareViolated { kind: "object", id: x.0 };
                }
            }
            for f in p.total().arrows() {
                if left.arr(f) != right.arr(f) {
                    return FibMorphismVerdict::SquareViolated { kind: "arrow", id: f.0 };
                }
            }
            for f in p.total().arrows() {
                if p.is_cartesian(f) && !q.is_cartesian(payload.arr(f)) {
                    return FibMorphismVerdict::CartesianityViolated { arrow: f.0 };
                }
            }
            FibMorphismVerdict::Cartesian
        }
        FibMorphism::VerticalTransformation { payload } => {
            if payload.validate().is_err() {
                return FibMorphismVerdict::NaturalityViolated { arrow: 0 };
            }
            for x in payload.source_functor.source.objects() {
                if !q.is_vertical(payload.at(x)) {
                    return FibMorphismVerdict::NonVerticalComponent { object: x.0 };
                }
            }
            FibMorphismVerdict::Cartesian
        }
    }
}

/// The split-functor law `F(Cart(u, X)) = Cart(u, F X)` for split inputs.
pub fn check_split_functor_law(
    f: &FunctorData,
    cl_p: &Cleavage,
    cl_q: &Cleavage,
) -> Result<(), (usize, usize)> {
    let p = cl_p.fib();
    for u in p.base().arrows() {
        for x in p.fibre_objects(p.base().cod(u)) {
            if f.arr(cl_p.cart(u, x)) != cl_q.cart(u, f.ob(x)) {
                return Err((u.0, x.0));
            }
        }
    }
    Ok(())
}
