//! Directed graphs with edge lengths as a source of poly-exponentials.

pub mod audit;
pub mod automorphism;
pub mod corpus;
pub mod cycles;
pub mod digraph;
pub mod expoly;
pub mod perron;

pub use audit::{cor2_audit, AuditReport};
pub use automorphism::GraphAutomorphism;
pub use corpus::random_corpus;
pub use cycles::{char_poly_multicycle, simple_cycles, DEFAULT_BUDGET};
pub use digraph::{char_poly_direct, subdivide, subdivided_order, DirectedGraph, Edge};
pub use expoly::{Coeff, Cyclo, ExponentPolynomial};
pub use perron::{perron_poly, prop4_check, quotient_poly, quotient_product, Prop4Report, RootOfUnity};
