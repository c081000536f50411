//! Exact-arithmetic verification of two product formulas counting successive
//! vertex orderings of hypergraph line graphs.
//!
//! A vertex ordering is *successive* when every prefix induces a connected
//! subgraph. For the line graphs of the complete 3-uniform hypergraph and of
//! the complete bipartite 3-uniform family, the probability that a uniform
//! ordering is successive has a closed product form. This crate replays the
//! entire derivation in exact arithmetic — quadratic-extension scalars,
//! terminating 3F2 evaluation, the Sheppard transformation, Gosper
//! telescoping certificates, and zero-skipping product identities — and
//! cross-checks the formulas against a brute-force subset-DP counter on
//! small instances.
//!
//! ```
//! use hyperorder::closedform::{lhs_theorem1, rhs_theorem1};
//! use hyperorder::graphs::{complete_3uniform, line_graph, successive_probability};
//!
//! let n = 6;
//! let closed = rhs_theorem1(n);
//! assert_eq!(lhs_theorem1(n).unwrap(), closed);
//!
//! let g = line_graph(&complete_3uniform(n).unwrap());
//! assert_eq!(successive_probability(&g).unwrap(), closed);
//! ```

pub mod closedform;
pub mod error;
pub mod gosper;
pub mod graphs;
pub mod hypergeom;
pub mod poly;
pub mod quad;
pub mod ratfunc;
pub mod rational;

pub use error::{Error, Result};
pub use gosper::{Certificate, CertFamily, CertStatus};
pub use hypergeom::{HTerm, SheppardResult};
pub use poly::Poly;
pub use quad::{Discriminant, QuadExt};
pub use ratfunc::RatFunc;
pub use rational::Rational;
