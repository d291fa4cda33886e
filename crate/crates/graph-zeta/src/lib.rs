//! Ihara and Bartholdi zeta functions of finite, periodic and self-similar
//! graphs.
//!
//! The Bartholdi zeta function of a graph is the Euler product
//! `Z(z, u) = prod (1 - z^{|C|} u^{cbc(C)})^{-mu(C)}` over equivalence
//! classes of primitive cycles, weighting each class by its length and
//! cyclic bump count; `u = 0` recovers the Ihara zeta function. This crate
//! evaluates `Z` by three mutually verifying routes:
//!
//! * an exponential-cost cycle enumeration oracle on small finite graphs
//!   ([`cycles`]),
//! * the trace recursions for the weighted path operators `A_m(u)` and the
//!   counting sequences `t_m`, `N_m` ([`operators`]), summed into `log Z`
//!   ([`zeta`]),
//! * the determinant formula `1/Z = (1-(1-u)^2 z^2)^{-chi} det_tau(I - Az +
//!   (1-u)(Q+uI) z^2)` through an analytic determinant with explicit branch
//!   tracking ([`zeta`], [`spectral`]).
//!
//! Infinite graphs enter through trace contexts: periodic lattices are
//! realized exactly on finite windows (every operator involved has finite
//! propagation), and self-similar graphs through amenable exhaustions of
//! substitution schemes ([`builders`]). Completions, functional equations
//! and the geometry of the singularity regions live in [`funceq`].
//!
//! The `examples/` directory exercises each capability end to end; the
//! `graph-zeta` binary exposes the same computations as subcommands.

// coefficient tables and vertex arrays are indexed by mathematical order and
// vertex id throughout; enumerate/zip chains read worse here
#![allow(clippy::needless_range_loop)]

pub mod builders;
pub mod cli;
pub mod cycles;
pub mod error;
pub mod funceq;
pub mod graph;
pub mod numerics;
pub mod operators;
pub mod spectral;
pub mod zeta;

pub use error::{Result, ZetaError};
pub use graph::{Graph, VertexSet};
pub use operators::{OperatorWindow, TraceContext, UBound};
