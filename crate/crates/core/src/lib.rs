//! Executable combinatorics for asymmetric removal lemmas.
//!
//! The crate is split by subject:
//!
//! * [`equations`]: translation-invariant integer equations, their genus,
//!   convexity, symmetry and solutions inside finite sets.
//! * [`graphs`]: graphs, F-coloured graphs, homomorphism search, cycle
//!   enumeration and the wrap calculus for K3-colourings.
//! * [`cycle_equations`]: cycle-equation systems of coloured graphs and the
//!   searches built on them.
//! * [`abundance`]: machine-checkable abundance certificates and the
//!   searches that produce them.
//! * [`constructions`]: Behrend sets, Ruzsa-Szemerédi graphs, the `G_n`
//!   family and the distinct-solution finder.
//! * [`removal`]: edge-disjoint packings, uniformization and exact counting.

pub mod abundance;
pub mod constructions;
pub mod cycle_equations;
pub mod equations;
pub mod graphs;
pub mod removal;

pub use equations::Equation;
pub use graphs::{ColouredGraph, Graph};
