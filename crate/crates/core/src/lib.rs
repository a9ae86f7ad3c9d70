/*! Finite categories, functors and fibrations as executable data.

Everything in this crate is a finite table: a category is its composition
table, a functor is a pair of index maps, a fibration is a validated functor
with a cached arrow classification. All the structural notions layered on
top (cleavages, the Grothendieck construction, change of base, internal
sums and products, local smallness, Moens-style reconstruction, geometric
morphism classification) are decided by exhaustively checking the defining
universal property and reporting a witness or a least counterexample.

Module layout:

- [`cat`] — plain finite categories and the ordinary constructions on them
  (opposites, slices, commas, limits, Karoubi envelope, adjoint search,
  equivalence testing).
- [`fib`] — fibrations: arrow classification, lifting search, cleavages,
  reindexing, morphisms of fibrations.
- [`construct`] — new fibrations from old: ∫, fundamental fibrations,
  externalisation, change of base, products, diagrams, exponentials, the
  family monad, opposite fibrations, both adjoint splittings.
- [`analyze`] — deciders for fibrational properties, each with its paired
  cross-check route.
- [`moens`] — glueing reconstruction, geometric profiles, adjoints to
  change of base.
- [`format`], [`report`], [`corpus`] — the textual formats, the JSON
  report schema and the builtin example zoo.
*/

// Keyed construction data uses tuple-shaped tables throughout; aliasing
// every one of them hurts more than it helps.
#![allow(clippy::type_complexity)]
#![allow(clippy::large_enum_variant)]

pub mod analyze;
pub mod cat;
pub mod construct;
pub mod corpus;
pub mod driver;
pub mod fib;
pub mod format;
pub mod moens;
pub mod report;
