//! Lie point-symmetry analysis of the four-dimensional Einstein-Walker
//! metric equations, carried out in exact rational arithmetic.
//!
//! A Walker metric on an open set of R^4 is determined by three component
//! functions `a`, `b`, `c`; the Einstein condition on the restricted class
//! (components depending on the first two coordinates only) is a system of
//! six second-order PDEs. This crate derives that system from the Ricci
//! tensor, computes its point-symmetry algebra from first principles,
//! exponentiates the symmetries into solution-generating transformations,
//! classifies the one-dimensional subalgebras, and performs the similarity
//! reductions down to invariant solutions - all symbolically, with every
//! identity verified by canonical-form cancellation.
//!
//! Module map:
//!
//! * [`symexpr`] - the exact expression kernel (atoms, canonical rational
//!   functions, differentiation, substitution, parsing);
//! * [`jetcalc`] - jet coordinates, total derivatives, second prolongation;
//! * [`walker`] - the metric, the Ricci oracle, the Einstein systems, and
//!   the invariant-solution catalog;
//! * [`detsolve`] - determining equations under a polynomial ansatz and
//!   their exact nullspace;
//! * [`liealg`] - commutators, structure constants, adjoint representation,
//!   and the one-dimensional optimal system;
//! * [`flows`] - one-parameter groups and their action on solutions;
//! * [`reduce`] - similarity reductions against the invariant table;
//! * [`tables`] - transcribed reference tables the computations are
//!   compared against.

pub mod detsolve;
pub mod flows;
pub mod jetcalc;
pub mod liealg;
pub mod linexp;
pub mod reduce;
pub mod symexpr;
pub mod tables;
pub mod walker;

pub use symexpr::{parse, Atom, Dependent, Expr, JetKey, SymError};
