//! Directed multigraphs with per-edge lengths, subdivision, and exact
//! characteristic polynomials.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::form::LinearForm;
use crate::upoly::ZPoly;

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub id: String,
    pub src: usize,
    pub dst: usize,
    /// Symbolic length; integer lengths are constant forms.
    pub len: LinearForm,
}

/// Finite directed graph; loops and parallel edges allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectedGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

impl DirectedGraph {
    /// Builds from vertex names and `(id, src, dst, length)` edges given by
    /// vertex name.
    pub fn new(vertices: Vec<String>, edges: Vec<(String, String, String, LinearForm)>) -> Result<Self> {
        let idx = |name: &str| {
            vertices
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::Invalid(format!("edge endpoint `{name}` is not a vertex")))
        };
        let mut out = Vec::with_capacity(edges.len());
        for (id, s, d, len) in edges {
            if out.iter().any(|e: &Edge| e.id == id) {
                return Err(Error::Invalid(format!("duplicate edge id `{id}`")));
            }
            out.push(Edge { src: idx(&s)?, dst: idx(&d)?, id, len });
        }
        Ok(DirectedGraph { vertices, edges: out })
    }

    /// Graph on vertices `0..n` with unit lengths and edge ids `e0, e1, …`.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Self {
        DirectedGraph {
            vertices: (0..n).map(|i| format!("v{i}")).collect(),
            edges: pairs
                .iter()
                .enumerate()
                .map(|(i, &(s, d))| Edge {
                    id: format!("e{i}"),
                    src: s,
                    dst: d,
                    len: LinearForm::constant(BigRational::one()),
                })
                .collect(),
        }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    /// Same graph with the given integer lengths.
    pub fn with_lengths(&self, lens: &[u64]) -> Result<Self> {
        if lens.len() != self.edges.len() {
            return Err(Error::Invalid(format!(
                "{} lengths for {} edges",
                lens.len(),
                self.edges.len()
            )));
        }
        let mut g = self.clone();
        for (e, &l) in g.edges.iter_mut().zip(lens) {
            e.len = LinearForm::constant(BigRational::from_integer(l.into()));
        }
        Ok(g)
    }

    /// Same graph with length `lᵢ` on the `i`-th edge (1-based names).
    pub fn with_symbolic_lengths(&self) -> Self {
        let mut g = self.clone();
        for (i, e) in g.edges.iter_mut().enumerate() {
            e.len = LinearForm::var(&format!("l{}", i + 1));
        }
        g
    }

    /// Integer lengths, if every edge has a constant positive integer length.
    pub fn integer_lengths(&self) -> Result<Vec<u64>> {
        self.edges
            .iter()
            .map(|e| {
                let c = e.len.constant_term();
                if !e.len.is_constant() || !c.is_integer() {
                    return Err(Error::Invalid(format!("edge {} has non-integer length {}", e.id, e.len)));
                }
                match c.to_integer().to_u64() {
                    Some(k) if k >= 1 => Ok(k),
                    _ => Err(Error::Invalid(format!("edge {} has length {} < 1", e.id, e.len))),
                }
            })
            .collect()
    }

    /// Parameter names used by edge lengths, sorted.
    pub fn length_params(&self) -> Vec<String> {
        let mut v: Vec<String> = self
            .edges
            .iter()
            .flat_map(|e| e.len.params().map(str::to_string).collect::<Vec<_>>())
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// Adjacency matrix with multiplicities.
    pub fn adjacency(&self) -> Vec<Vec<u64>> {
        let n = self.vertices.len();
        let mut a = vec![vec![0u64; n]; n];
        for e in &self.edges {
            a[e.src][e.dst] += 1;
        }
        a
    }

    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.src == v)
    }
}

/// `Γ_ℓ`: every edge `e` replaced by a directed path of `ℓ(e)` unit edges.
/// Original vertices keep their indices; new vertices are named `id.k`.
pub fn subdivide(g: &DirectedGraph, lens: &[u64]) -> Result<DirectedGraph> {
    if lens.len() != g.edge_count() {
        return Err(Error::Invalid(format!("{} lengths for {} edges", lens.len(), g.edge_count())));
    }
    if lens.contains(&0) {
        return Err(Error::Invalid("subdivision lengths must be at least 1".into()));
    }
    let mut vertices = g.vertices.clone();
    let mut edges = Vec::new();
    let one = LinearForm::constant(BigRational::one());
    for (e, &l) in g.edges.iter().zip(lens) {
        let mut prev = e.src;
        for k in 1..l {
            vertices.push(format!("{}.{k}", e.id));
            let v = vertices.len() - 1;
            edges.push(Edge { id: format!("{}.{}", e.id, k - 1), src: prev, dst: v, len: one.clone() });
            prev = v;
        }
        let id = if l == 1 { e.id.clone() } else { format!("{}.{}", e.id, l - 1) };
        edges.push(Edge { id, src: prev, dst: e.dst, len: one.clone() });
    }
    Ok(DirectedGraph { vertices, edges })
}

/// Vertex count of the subdivided graph, `#V + Σ(ℓ(e) − 1)`; this is the
/// degree of its characteristic polynomial.
pub fn subdivided_order(g: &DirectedGraph, lens: &[u64]) -> usize {
    g.vertex_count() + lens.iter().map(|&l| l.saturating_sub(1) as usize).sum::<usize>()
}

/// `det(tI − A)` by fraction-free elimination over `ℤ[t]`.
///
/// The leading principal minors of `tI − A` are monic, so no pivoting is
/// needed.
pub fn char_poly_direct(g: &DirectedGraph) -> ZPoly {
    let a = g.adjacency();
    let n = a.len();
    if n == 0 {
        return ZPoly::one();
    }
    let mut m: Vec<Vec<ZPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut c = vec![BigInt::from(-(a[i][j] as i64))];
                    if i == j {
                        c.push(BigInt::one());
                    }
                    ZPoly::new(c)
                })
                .collect()
        })
        .collect();
    let mut prev = ZPoly::one();
    for k in 0..n - 1 {
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    m[n - 1][n - 1].clone()
}

/// Integer matrix helpers used by the audits.
pub(crate) fn int_matrix(a: &[Vec<u64>]) -> Vec<Vec<BigInt>> {
    a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub(crate) fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut c = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                c[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    c
}

/// `p(A)` by Horner's rule.
pub(crate) fn poly_at_matrix(p: &ZPoly, a: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut acc = vec![vec![BigInt::zero(); n]; n];
    for c in p.coeffs().iter().rev() {
        acc = mat_mul(&acc, a);
        for (i, row) in acc.iter_mut().enumerate() {
            row[i] += c;
        }
    }
    acc
}

/// Rank over ℚ by fraction-free elimination.
pub(crate) fn rank(a: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    let rows = m.len();
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            let piv = m[r][c].clone();
            for j in c..cols {
                let v = &m[i][j] * &piv - &f * &m[r][j];
                m[i][j] = v;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}
