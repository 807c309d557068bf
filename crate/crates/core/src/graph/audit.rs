//! Degree-count criteria for non-diagonalizable subdivision matrices,
//! checked against exact ground truth.

use serde::Serialize;

use super::digraph::{char_poly_direct, int_matrix, poly_at_matrix, rank, subdivide, DirectedGraph};
use crate::error::Result;
use crate::upoly::ZPoly;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    /// `Σ_v max_{e out of v} ℓ(e)`.
    pub delta: u64,
    /// `Σ_e ℓ(e)`.
    pub total_length: u64,
    pub vertices: usize,
    pub edges: usize,
    /// Vertices without outgoing edges (contribute 0 to `delta`).
    pub sinks: Vec<String>,
    /// `#V(δ−1) + #E`.
    pub bound_diag: i64,
    /// `#V(δ−1) + #E < |ℓ|`: predicts non-diagonalizable.
    pub criterion_diag: bool,
    /// `δ + #E − #V`.
    pub bound_repeated: i64,
    /// `δ + #E − #V < |ℓ|`: predicts a repeated root of `ξ_ℓ`.
    pub criterion_repeated: bool,
    pub char_poly: String,
    /// Exact: `s(A_ℓ) = 0` for the squarefree part `s` of `ξ_ℓ`.
    pub diagonalizable: bool,
    /// Exact: `deg gcd(ξ_ℓ, ξ_ℓ') > 0`.
    pub repeated_roots: bool,
    /// Algebraic multiplicity of the eigenvalue 0.
    pub zero_algebraic: usize,
    /// Geometric multiplicity of the eigenvalue 0.
    pub zero_geometric: usize,
    /// `zero_geometric ≤ #E − #V`.
    pub zero_bound_holds: bool,
}

pub fn cor2_audit(g: &DirectedGraph, lens: &[u64]) -> Result<AuditReport> {
    let sub = subdivide(g, lens)?;
    let mut maxout: Vec<Option<u64>> = vec![None; g.vertex_count()];
    for (e, &l) in g.edges().iter().zip(lens) {
        let m = &mut maxout[e.src];
        *m = Some(m.map_or(l, |x| x.max(l)));
    }
    let delta: u64 = maxout.iter().flatten().sum();
    let sinks: Vec<String> = maxout
        .iter()
        .zip(g.vertices())
        .filter(|(m, _)| m.is_none())
        .map(|(_, v)| v.clone())
        .collect();
    let total: u64 = lens.iter().sum();
    let nv = g.vertex_count() as i64;
    let ne = g.edge_count() as i64;
    let bound_diag = nv * (delta as i64 - 1) + ne;
    let bound_repeated = delta as i64 + ne - nv;
    let xi = char_poly_direct(&sub);
    let sqf = xi
        .squarefree_decomposition()
        .into_iter()
        .fold(ZPoly::one(), |acc, (f, _)| acc.mul(&f));
    let a = int_matrix(&sub.adjacency());
    let diagonalizable = poly_at_matrix(&sqf, &a).iter().flatten().all(num_traits::Zero::is_zero);
    let repeated_roots = xi.gcd(&xi.derivative()).degree().unwrap_or(0) > 0;
    let zero_algebraic = xi.low_order();
    let zero_geometric = sub.vertex_count() - rank(&a);
    Ok(AuditReport {
        delta,
        total_length: total,
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        sinks,
        bound_diag,
        criterion_diag: bound_diag < total as i64,
        bound_repeated,
        criterion_repeated: bound_repeated < total as i64,
        char_poly: xi.to_string(),
        diagonalizable,
        repeated_roots,
        zero_algebraic,
        zero_geometric,
        zero_bound_holds: zero_geometric as i64 <= ne - nv,
    })
}
