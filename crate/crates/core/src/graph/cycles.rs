//! Simple directed cycles (Johnson's algorithm) and the characteristic
//! polynomial of a subdivided graph from its vertex-disjoint multicycles.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::digraph::{subdivided_order, DirectedGraph};
use crate::error::{Error, Result};
use crate::upoly::ZPoly;

/// Default cap on the number of enumerated cycles and multicycles.
pub const DEFAULT_BUDGET: usize = 1_000_000;

/// All simple cycles of the underlying simple digraph (parallel edges
/// collapsed), each as its vertex sequence starting at its smallest vertex.
pub fn simple_cycles(n: usize, adj: &[Vec<usize>], budget: usize) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for s in 0..n {
        let mut blocked = vec![false; n];
        let mut bset: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut stack = Vec::new();
        circuit(s, s, adj, &mut blocked, &mut bset, &mut stack, &mut out, budget)?;
    }
    Ok(out)
}

fn unblock(u: usize, blocked: &mut [bool], bset: &mut [Vec<usize>]) {
    blocked[u] = false;
    while let Some(w) = bset[u].pop() {
        if blocked[w] {
            unblock(w, blocked, bset);
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn circuit(
    v: usize,
    s: usize,
    adj: &[Vec<usize>],
    blocked: &mut [bool],
    bset: &mut [Vec<usize>],
    stack: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    budget: usize,
) -> Result<bool> {
    let mut found = false;
    stack.push(v);
    blocked[v] = true;
    for &w in &adj[v] {
        if w < s {
            continue;
        }
        if w == s {
            out.push(stack.clone());
            if out.len() > budget {
                return Err(Error::BudgetExceeded { found: out.len() });
            }
            found = true;
        } else if !blocked[w] && circuit(w, s, adj, blocked, bset, stack, out, budget)? {
            found = true;
        }
    }
    if found {
        unblock(v, blocked, bset);
    } else {
        for &w in &adj[v] {
            if w >= s && !bset[w].contains(&v) {
                bset[w].push(v);
            }
        }
    }
    stack.pop();
    Ok(found)
}

/// A vertex cycle of `Γ` with its length polynomial over parallel-edge
/// choices: `lengths[k]` counts the edge cycles of total length `k`.
#[derive(Clone, Debug)]
pub struct WeightedCycle {
    pub vertices: Vec<usize>,
    pub mask: Vec<u64>,
    pub lengths: BTreeMap<u64, BigInt>,
}

fn mask_of(vs: &[usize], n: usize) -> Vec<u64> {
    let mut m = vec![0u64; n.div_ceil(64).max(1)];
    for &v in vs {
        m[v / 64] |= 1 << (v % 64);
    }
    m
}

fn disjoint(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & y == 0)
}

/// Cycles of `g` with edge lengths `lens`, expanded over parallel edges.
pub fn weighted_cycles(g: &DirectedGraph, lens: &[u64], budget: usize) -> Result<Vec<WeightedCycle>> {
    let n = g.vertex_count();
    // Length polynomial per ordered vertex pair.
    let mut pair: BTreeMap<(usize, usize), BTreeMap<u64, BigInt>> = BTreeMap::new();
    for (e, &l) in g.edges().iter().zip(lens) {
        *pair.entry((e.src, e.dst)).or_default().entry(l).or_default() += 1;
    }
    let mut adj = vec![Vec::new(); n];
    for &(s, d) in pair.keys() {
        adj[s].push(d);
    }
    let cycles = simple_cycles(n, &adj, budget)?;
    Ok(cycles
        .into_iter()
        .map(|vs| {
            let mut poly: BTreeMap<u64, BigInt> = BTreeMap::from([(0, BigInt::from(1))]);
            for (i, &v) in vs.iter().enumerate() {
                let w = vs[(i + 1) % vs.len()];
                poly = mul_len(&poly, &pair[&(v, w)]);
            }
            WeightedCycle { mask: mask_of(&vs, n), vertices: vs, lengths: poly }
        })
        .collect())
}

fn mul_len(a: &BTreeMap<u64, BigInt>, b: &BTreeMap<u64, BigInt>) -> BTreeMap<u64, BigInt> {
    let mut out: BTreeMap<u64, BigInt> = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            *out.entry(ea + eb).or_default() += ca * cb;
        }
    }
    out
}

/// `ξ_ℓ(t) = t^N + Σ_σ (−1)^{n(σ)} t^{N−|σ|}`, `N = #V(Γ_ℓ)`, over vertex-disjoint
/// collections `σ` of simple cycles of the subdivided graph.
pub fn char_poly_multicycle(g: &DirectedGraph, lens: &[u64], budget: usize) -> Result<ZPoly> {
    if lens.len() != g.edge_count() {
        return Err(Error::Invalid("one length per edge required".into()));
    }
    let total = subdivided_order(g, lens) as u64;
    let cycles = weighted_cycles(g, lens, budget)?;
    // acc[k] = signed count of multicycles of total length k.
    let mut acc: BTreeMap<u64, BigInt> = BTreeMap::new();
    let mut visited = 0usize;
    let n = g.vertex_count();
    let empty = vec![0u64; n.div_ceil(64).max(1)];
    let base = BTreeMap::from([(0u64, BigInt::from(1))]);
    collect(&cycles, 0, &empty, &base, 0, &mut acc, &mut visited, budget)?;
    let mut terms: Vec<(usize, BigInt)> = vec![(total as usize, BigInt::from(1))];
    for (k, c) in acc {
        terms.push(((total - k) as usize, c));
    }
    Ok(ZPoly::from_sparse(terms.iter().map(|(e, c)| (*e, c))))
}

#[allow(clippy::too_many_arguments)]
fn collect(
    cycles: &[WeightedCycle],
    start: usize,
    used: &[u64],
    poly: &BTreeMap<u64, BigInt>,
    depth: usize,
    acc: &mut BTreeMap<u64, BigInt>,
    visited: &mut usize,
    budget: usize,
) -> Result<()> {
    for i in start..cycles.len() {
        let c = &cycles[i];
        if !disjoint(used, &c.mask) {
            continue;
        }
        *visited += 1;
        if *visited > budget {
            return Err(Error::BudgetExceeded { found: cycles.len() });
        }
        let p = mul_len(poly, &c.lengths);
        let sign = if depth.is_multiple_of(2) { -1 } else { 1 };
        for (k, v) in &p {
            *acc.entry(*k).or_default() += v * sign;
        }
        let joined: Vec<u64> = used.iter().zip(&c.mask).map(|(a, b)| a | b).collect();
        collect(cycles, i + 1, &joined, &p, depth + 1, acc, visited, budget)?;
    }
    Ok(())
}
