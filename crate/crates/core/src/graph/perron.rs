//! The Perron polynomial `det(I − A(t, ℓ))`, its relation to the
//! characteristic polynomial of the subdivided graph, and quotients by graph
//! automorphisms.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};

use super::automorphism::GraphAutomorphism;
use super::digraph::{char_poly_direct, subdivide, subdivided_order, DirectedGraph};
use super::expoly::{Coeff, Cyclo, ExponentPolynomial};
use crate::error::{Error, Result};
use crate::oracle::{poly_roots, SparsePolynomial};
use crate::upoly::ZPoly;

/// Determinant by expansion along rows with memoised column subsets.
pub fn determinant<C: Coeff>(m: &[Vec<ExponentPolynomial<C>>]) -> ExponentPolynomial<C> {
    let n = m.len();
    if n == 0 {
        return ExponentPolynomial::one();
    }
    assert!(n <= 20, "determinant expansion limited to 20×20");
    // dp[mask] = determinant of rows 0..|mask| restricted to columns in mask.
    let mut dp: Vec<ExponentPolynomial<C>> = vec![ExponentPolynomial::zero(); 1 << n];
    dp[0] = ExponentPolynomial::one();
    for mask in 1usize..(1 << n) {
        let row = mask.count_ones() as usize - 1;
        let mut acc = ExponentPolynomial::zero();
        for j in 0..n {
            if mask & (1 << j) == 0 || m[row][j].is_zero() {
                continue;
            }
            let rest = mask & !(1 << j);
            if dp[rest].is_zero() {
                continue;
            }
            // Sign from the number of chosen columns above j.
            let above = (rest >> (j + 1)).count_ones();
            let term = &m[row][j] * &dp[rest];
            acc = if above % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        dp[mask] = acc;
    }
    dp[(1 << n) - 1].clone()
}

fn identity_minus<C: Coeff>(a: Vec<Vec<ExponentPolynomial<C>>>) -> Vec<Vec<ExponentPolynomial<C>>> {
    let one = ExponentPolynomial::one();
    a.into_iter()
        .enumerate()
        .map(|(i, row)| {
            row.into_iter()
                .enumerate()
                .map(|(j, x)| if i == j { &one - &x } else { &ExponentPolynomial::zero() - &x })
                .collect()
        })
        .collect()
}

/// `P(t, ℓ) = det(I − A(t, ℓ))` with `A_{uv} = Σ_{e: u→v} t^{ℓ(e)}`.
pub fn perron_poly(g: &DirectedGraph) -> ExponentPolynomial<BigInt> {
    let n = g.vertex_count();
    let mut a = vec![vec![ExponentPolynomial::zero(); n]; n];
    for e in g.edges() {
        a[e.src][e.dst].add_term(BigInt::one(), e.len.clone());
    }
    determinant(&identity_minus(a))
}

/// `t^N P(t⁻¹, ℓ)` at integer lengths, `N = #V(Γ_ℓ)`.
pub fn reversed_perron(g: &DirectedGraph, lens: &[u64]) -> Result<ZPoly> {
    let p = perron_poly(&g.with_lengths(lens)?).to_zpoly(&[], &[])?;
    let total = subdivided_order(g, lens);
    let d = p.degree().unwrap_or(0);
    if d > total {
        return Err(Error::Numeric("Perron polynomial degree exceeds the subdivided order".into()));
    }
    let rev: Vec<BigInt> = (0..=total).map(|k| p.coeff(total - k)).collect();
    Ok(ZPoly::new(rev))
}

/// Result of comparing the subdivision spectrum with the Perron zeros.
#[derive(Clone, Debug)]
pub struct Prop4Report {
    pub identity_holds: bool,
    pub eigenvalues: Vec<Complex64>,
    pub inverse_zeros: Vec<Complex64>,
    pub hausdorff: f64,
    pub pass: bool,
}

fn hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    let one_side = |x: &[Complex64], y: &[Complex64]| {
        x.iter()
            .map(|p| y.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    one_side(a, b).max(one_side(b, a))
}

fn zpoly_roots(p: &ZPoly) -> Vec<Complex64> {
    let sp = SparsePolynomial {
        terms: p
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e, num_rational::BigRational::from_integer(c.clone())))
            .collect(),
        scale: num_rational::BigRational::one(),
    };
    poly_roots(&sp).into_iter().map(|(t, _)| t).collect()
}

/// Checks `ξ_ℓ(t) = t^N P(t⁻¹, ℓ)` exactly and compares the nonzero
/// eigenvalues of `A_ℓ` with the inverses of the zeros of `P(·, ℓ)`.
pub fn prop4_check(g: &DirectedGraph, lens: &[u64], tol: f64) -> Result<Prop4Report> {
    let xi = char_poly_direct(&subdivide(g, lens)?);
    let rev = reversed_perron(g, lens)?;
    let identity_holds = xi == rev;
    let nz = xi.shift_down(xi.low_order());
    let eigenvalues = zpoly_roots(&nz);
    let p = perron_poly(&g.with_lengths(lens)?).to_zpoly(&[], &[])?;
    let inverse_zeros: Vec<Complex64> = zpoly_roots(&p).into_iter().map(|z| z.inv()).collect();
    let h = hausdorff(&eigenvalues, &inverse_zeros);
    Ok(Prop4Report { identity_holds, pass: identity_holds && h <= tol, eigenvalues, inverse_zeros, hausdorff: h })
}

/// A root of unity `e^{2πik/n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RootOfUnity {
    pub k: usize,
    pub n: usize,
}

impl RootOfUnity {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("root of unity needs n ≥ 1".into()));
        }
        Ok(RootOfUnity { k: k % n, n })
    }

    pub fn one() -> Self {
        RootOfUnity { k: 0, n: 1 }
    }

    pub fn minus_one() -> Self {
        RootOfUnity { k: 1, n: 2 }
    }

    /// Multiplicative order.
    pub fn order(&self) -> usize {
        use num_integer::Integer;
        self.n / self.k.gcd(&self.n)
    }

    fn pow(&self, j: usize) -> Cyclo {
        Cyclo::zeta_pow(self.n, self.k * j)
    }
}

/// The quotient Perron polynomial `det(I − D)` over vertex-orbit
/// representatives, `D_{w₁w₂} = Σ_{e: w₁→v, [v]=w₂} t^{ℓ(e)} λ₀^{μ(v)}` with
/// `v = T^{μ(v)}(w₂)`.
pub fn quotient_poly(
    g: &DirectedGraph,
    t: &GraphAutomorphism,
    lambda0: RootOfUnity,
) -> Result<ExponentPolynomial<Cyclo>> {
    t.validate(g)?;
    t.check_lengths(g)?;
    let period = t.vertex_order();
    if !period.is_multiple_of(lambda0.order()) {
        return Err(Error::BadEigenvalue { order: period });
    }
    let orbits = t.vertex_orbits();
    for orb in &orbits {
        if orb.len() % lambda0.order() != 0 {
            return Err(Error::BadEigenvalue { order: orb.len() });
        }
    }
    // Which orbit and which power each vertex sits at.
    let n = g.vertex_count();
    let mut where_ = vec![(0usize, 0usize); n];
    for (oi, orb) in orbits.iter().enumerate() {
        for (j, &v) in orb.iter().enumerate() {
            where_[v] = (oi, j);
        }
    }
    let k = orbits.len();
    let mut d = vec![vec![ExponentPolynomial::<Cyclo>::zero(); k]; k];
    for (oi, orb) in orbits.iter().enumerate() {
        let rep = orb[0];
        for e in g.out_edges(rep) {
            let (oj, mu) = where_[e.dst];
            d[oi][oj].add_term(lambda0.pow(mu), e.len.clone());
        }
    }
    Ok(determinant(&identity_minus(d)))
}

/// Converts an integer-coefficient exponent polynomial into the cyclotomic
/// coefficient ring.
pub fn to_cyclo(p: &ExponentPolynomial<BigInt>) -> ExponentPolynomial<Cyclo> {
    let mut out = ExponentPolynomial::zero();
    for (f, c) in p.terms() {
        out.add_term(Cyclo::integer(c.clone()), f.clone());
    }
    out
}

/// Product over all `λ₀` with `λ₀^{|T|} = 1`, for checks against the full
/// Perron polynomial.
pub fn quotient_product(g: &DirectedGraph, t: &GraphAutomorphism) -> Result<ExponentPolynomial<Cyclo>> {
    let n = t.vertex_order();
    let mut acc = ExponentPolynomial::<Cyclo>::one();
    let mut seen = BTreeSet::new();
    for k in 0..n {
        let r = RootOfUnity::new(k, n)?;
        if !seen.insert((r.k, r.n)) {
            continue;
        }
        acc = &acc * &quotient_poly(g, t, r)?;
    }
    Ok(acc)
}
