//! Exact-exponent spectra at rational parameter points: reduce `Q_ℓ` to an
//! integer-exponent polynomial in `t = e^{w/r}`, solve it, and lift the roots
//! to congruence classes with multiplicities.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::form::{rat_from_f64, rat_to_f64, Rational};
use crate::polyexp::{ConcretePolyExp, ParamPoint, PolyExponential};
use crate::roots::{self, SparseReal};
use crate::upoly::{ZPoly, CHECK_PRIMES};

/// `Σ cₖ t^{nₖ}` with `Q_ℓ(w) = P(e^{w/r})`.
#[derive(Clone, Debug, PartialEq)]
pub struct SparsePolynomial {
    pub terms: Vec<(usize, Rational)>,
    pub scale: Rational,
}

impl SparsePolynomial {
    pub fn degree(&self) -> usize {
        self.terms.last().map(|t| t.0).unwrap_or(0)
    }

    /// Integer polynomial with the same roots (denominators cleared).
    pub fn to_zpoly(&self) -> ZPoly {
        let l = self
            .terms
            .iter()
            .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let ints: Vec<(usize, BigInt)> = self
            .terms
            .iter()
            .map(|(e, c)| (*e, (c * Rational::from_integer(l.clone())).to_integer()))
            .collect();
        ZPoly::from_sparse(ints.iter().map(|(e, c)| (*e, c)))
    }

    pub fn to_sparse_real(&self) -> SparseReal {
        SparseReal::new(self.terms.iter().map(|(e, c)| (*e, rat_to_f64(c))).collect())
    }

    pub fn scale_f64(&self) -> f64 {
        rat_to_f64(&self.scale)
    }
}

/// One congruence class of zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumClass {
    /// Representative with `0 ≤ Im w < 2πr`.
    pub w: Complex64,
    /// Root of the specialized polynomial, `t = e^{w/r}`.
    pub t: Complex64,
    pub multiplicity: usize,
    pub scale: f64,
    /// `|Q_ℓ(w)| / Σ|aᵢ e^{ℓᵢ w}|`.
    pub residual: f64,
}

/// Real parts of the classes, repeated by multiplicity, ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderedSpectrum {
    values: Vec<f64>,
}

impl OrderedSpectrum {
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        OrderedSpectrum { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `i`-th term from the right, 1-based.
    pub fn rho(&self, i: usize) -> Result<f64> {
        let n = self.values.len();
        if i == 0 || i > n {
            return Err(Error::OutOfRange { index: i, len: n });
        }
        Ok(self.values[n - i])
    }

    /// `i`-th term from the left, 1-based.
    pub fn lambda(&self, i: usize) -> Result<f64> {
        let n = self.values.len();
        if i == 0 || i > n {
            return Err(Error::OutOfRange { index: i, len: n });
        }
        Ok(self.values[i - 1])
    }
}

/// The smallest positive rational `r` with `r·v` a primitive integer vector
/// (zeros ignored).
pub fn primitive_scale(values: &[Rational]) -> Result<Rational> {
    let nonzero: Vec<&Rational> = values.iter().filter(|v| !v.is_zero()).collect();
    if nonzero.is_empty() {
        return Err(Error::Invalid("all parameters are zero".into()));
    }
    let l = nonzero.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let g = nonzero.iter().fold(BigInt::zero(), |acc, v| {
        acc.gcd(&(*v * Rational::from_integer(l.clone())).to_integer())
    });
    Ok(Rational::new(l, g.abs()))
}

/// Reduces `Q` at the rational point `pt` to a sparse integer-exponent
/// polynomial. The scale makes the parameter vector primitive integral and
/// is refined further if a term exponent would otherwise be fractional.
pub fn specialize(q: &PolyExponential, pt: &ParamPoint) -> Result<SparsePolynomial> {
    let exact = pt
        .exact()
        .ok_or_else(|| Error::Invalid("specialization needs a rational parameter point".into()))?;
    let mut r = primitive_scale(exact)?;
    let ex = q.term_exponents_exact(pt)?;
    for e in &ex {
        if e.is_negative() {
            return Err(Error::NegativeExponent(rat_to_f64(e)));
        }
    }
    let d = ex
        .iter()
        .fold(BigInt::one(), |acc, e| acc.lcm((e * &r).denom()));
    r *= Rational::from_integer(d);
    let mut terms: Vec<(usize, Rational)> = vec![(0, rat_from_f64(q.a0())?)];
    for ((c, _), e) in q.terms().iter().zip(&ex) {
        let n = (e * &r)
            .to_integer()
            .to_usize()
            .ok_or_else(|| Error::Invalid("specialized degree too large".into()))?;
        let c = rat_from_f64(*c)?;
        match terms.iter_mut().find(|t| t.0 == n) {
            Some(slot) => slot.1 += c,
            None => terms.push((n, c)),
        }
    }
    if terms[0].1.is_zero() {
        return Err(Error::ConstantTermVanished);
    }
    terms.retain(|t| !t.1.is_zero());
    terms.sort_by_key(|t| t.0);
    Ok(SparsePolynomial { terms, scale: r })
}

/// Nonzero roots with multiplicities. Multiplicities come from an exact
/// squarefree decomposition; a modular gcd shortcut certifies the common
/// squarefree case without any big-integer gcd.
pub fn poly_roots(p: &SparsePolynomial) -> Vec<(Complex64, usize)> {
    if p.degree() == 0 {
        return Vec::new();
    }
    let z = p.to_zpoly();
    let z = z.shift_down(z.low_order());
    let certified = CHECK_PRIMES
        .iter()
        .any(|&pr| !(z.lc() % BigInt::from(pr)).is_zero() && z.squarefree_mod_p(pr));
    let factors: Vec<(SparseReal, usize)> = if certified {
        vec![(p.to_sparse_real().deflate_zero(), 1)]
    } else {
        z.squarefree_decomposition()
            .into_iter()
            .map(|(f, k)| (SparseReal::from_dense(&f.to_f64_scaled()), k))
            .collect()
    };
    let mut out = Vec::new();
    for (f, k) in factors {
        for t in roots::roots(&f).roots {
            out.push((t, k));
        }
    }
    out
}

/// Representative `w = r(ln|t| + i·arg t)` with `arg t ∈ [0, 2π)`.
pub fn lift(t: Complex64, r: f64) -> Complex64 {
    let mut arg = t.arg();
    if arg < 0.0 {
        arg += 2.0 * PI;
    }
    if arg >= 2.0 * PI {
        arg -= 2.0 * PI;
    }
    Complex64::new(r * t.norm().ln(), r * arg)
}

pub fn spectrum_classes(q: &PolyExponential, pt: &ParamPoint) -> Result<Vec<SpectrumClass>> {
    let p = specialize(q, pt)?;
    if p.degree() == 0 {
        return Err(Error::EmptySpectrum);
    }
    let qc = q.instantiate(pt)?;
    Ok(classes_from(&p, &qc))
}

/// Classes of a concrete poly-exponential whose specialization is known.
pub fn classes_from(p: &SparsePolynomial, qc: &ConcretePolyExp) -> Vec<SpectrumClass> {
    let r = p.scale_f64();
    let mut out: Vec<SpectrumClass> = poly_roots(p)
        .into_iter()
        .map(|(t, k)| {
            let w = lift(t, r);
            SpectrumClass { w, t, multiplicity: k, scale: r, residual: qc.relative_residual(w) }
        })
        .collect();
    out.sort_by(|a, b| a.w.re.total_cmp(&b.w.re).then(a.w.im.total_cmp(&b.w.im)));
    out
}

pub fn rho_lambda(q: &PolyExponential, pt: &ParamPoint) -> Result<OrderedSpectrum> {
    let classes = spectrum_classes(q, pt)?;
    Ok(ordered(&classes))
}

pub fn ordered(classes: &[SpectrumClass]) -> OrderedSpectrum {
    OrderedSpectrum::new(
        classes
            .iter()
            .flat_map(|c| std::iter::repeat_n(c.w.re, c.multiplicity))
            .collect(),
    )
}

/// `w₁ ≅ w₂` iff `ℓᵢ(w₁ − w₂)` is an integer multiple of `2πi` for every `i`.
pub fn congruent(w1: Complex64, w2: Complex64, l: &[f64], tol: f64) -> bool {
    let d = w1 - w2;
    l.iter().all(|&li| {
        let k = li * d / Complex64::new(0.0, 2.0 * PI);
        (k.re - k.re.round()).abs() <= tol && k.im.abs() <= tol
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::form::{rat, rat_int};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat_int(x)).collect()
    }

    fn exps(p: &SparsePolynomial) -> Vec<(usize, f64)> {
        p.terms.iter().map(|(e, c)| (*e, rat_to_f64(c))).collect()
    }

    #[test]
    fn specialize_examples() {
        let q = fixtures::example1();
        let p = specialize(&q, &ParamPoint::plain(&ints(&[1, 1, 1, 1, 1, 1, 2, 2]))).unwrap();
        assert_eq!(exps(&p), vec![(0, 1.0), (2, -11.0), (4, 1.0)]);
        assert_eq!(p.scale, rat_int(1));
        let p = specialize(&q, &ParamPoint::plain(&ints(&[4, 4, 4, 5, 5, 5, 6, 6]))).unwrap();
        assert_eq!(exps(&p), vec![(0, 1.0), (6, -2.0), (9, -9.0), (12, 1.0)]);
        let q = PolyExponential::plain(1.0, &[1.0, -1.0]).unwrap();
        let p = specialize(&q, &ParamPoint::plain(&[rat(1, 2), rat_int(1)])).unwrap();
        assert_eq!(p.scale, rat_int(2));
        assert_eq!(exps(&p), vec![(0, 1.0), (1, 1.0), (2, -1.0)]);
    }

    #[test]
    fn poly_roots_examples() {
        let p = SparsePolynomial {
            terms: vec![(0, rat_int(1)), (2, rat_int(-11)), (4, rat_int(1))],
            scale: rat_int(1),
        };
        let r = poly_roots(&p);
        assert_eq!(r.len(), 4);
        for (t, k) in &r {
            assert_eq!(*k, 1);
            let m = t.norm_sqr();
            let a = (11.0 + 117f64.sqrt()) / 2.0;
            let b = (11.0 - 117f64.sqrt()) / 2.0;
            assert!((m - a).abs() < 1e-12 * a || (m - b).abs() < 1e-12);
        }
        let p = SparsePolynomial {
            terms: vec![(0, rat_int(1)), (1, rat_int(-2)), (2, rat_int(1))],
            scale: rat_int(1),
        };
        let r = poly_roots(&p);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].1, 2);
        assert!((r[0].0 - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn example_one_prime_moduli() {
        let q = fixtures::example1();
        let p = specialize(&q, &ParamPoint::plain(&ints(&[4, 4, 4, 5, 5, 5, 6, 6]))).unwrap();
        let mut cubes: Vec<f64> = poly_roots(&p).iter().map(|(t, _)| t.norm().powi(3)).collect();
        cubes.sort_by(f64::total_cmp);
        cubes.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        assert_eq!(cubes.len(), 3);
        for (x, y) in cubes.iter().zip([0.421, 0.507, 9.215]) {
            assert!((x - y).abs() < 5e-3, "{x} vs {y}");
        }
    }

    #[test]
    fn classes_and_order() {
        let q = fixtures::example1();
        let pt = ParamPoint::plain(&ints(&[1, 1, 1, 1, 1, 1, 2, 2]));
        let cl = spectrum_classes(&q, &pt).unwrap();
        assert_eq!(cl.len(), 4);
        let big = 0.5 * ((11.0 + 117f64.sqrt()) / 2.0).ln();
        for c in &cl {
            assert!((c.w.re.abs() - big).abs() < 1e-12);
            assert!(c.residual < 1e-12);
            assert!((0.0..2.0 * PI).contains(&c.w.im));
        }
        let o = ordered(&cl);
        assert!((o.rho(1).unwrap() - big).abs() < 1e-12);
        assert!((o.rho(2).unwrap() - big).abs() < 1e-12);
        assert!((o.lambda(1).unwrap() + big).abs() < 1e-12);
        assert_eq!(o.rho(5), Err(Error::OutOfRange { index: 5, len: 4 }));

        let g = PolyExponential::plain(1.0, &[1.0, -1.0]).unwrap();
        let o = rho_lambda(&g, &ParamPoint::plain(&ints(&[1, 2]))).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert_eq!(o.len(), 2);
        assert!((o.rho(1).unwrap() - phi.ln()).abs() < 1e-14);
        assert!((o.lambda(1).unwrap() + phi.ln()).abs() < 1e-14);
        assert_eq!(o.rho(2).unwrap(), o.lambda(1).unwrap());
        assert!(o.rho(3).is_err());
    }

    #[test]
    fn multiplicity_case() {
        // (t−1)²(t−2) = t³ − 4t² + 5t − 2
        let q = PolyExponential::plain(-2.0, &[5.0, -4.0, 1.0]).unwrap();
        let o = rho_lambda(&q, &ParamPoint::plain(&ints(&[1, 2, 3]))).unwrap();
        assert_eq!(o.len(), 3);
        assert!((o.rho(1).unwrap() - 2f64.ln()).abs() < 1e-13);
        assert!(o.rho(2).unwrap().abs() < 1e-13);
        assert!(o.rho(3).unwrap().abs() < 1e-13);
    }

    #[test]
    fn empty_spectrum() {
        let names = vec!["l1".to_string()];
        let q = PolyExponential::new(
            1.0,
            vec![(1.0, crate::form::LinearForm::var("l1")), (-1.0, crate::form::LinearForm::parse("l1").unwrap())],
            names,
        )
        .unwrap();
        assert_eq!(
            spectrum_classes(&q, &ParamPoint::plain(&ints(&[3]))),
            Err(Error::EmptySpectrum)
        );
    }

    #[test]
    fn congruence_examples() {
        let w = Complex64::new(0.3, 0.7);
        let two_pi_i = Complex64::new(0.0, 2.0 * PI);
        let pi_i = Complex64::new(0.0, PI);
        assert!(congruent(w, w + two_pi_i, &[1.0, 2.0], 1e-9));
        assert!(!congruent(w, w + pi_i, &[1.0, 2.0], 1e-9));
        assert!(congruent(w, w + pi_i, &[2.0, 4.0], 1e-9));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]
            #[test]
            fn multiplicity_total_and_conjugation(
                coeffs in prop::collection::vec(prop::sample::select(vec![-3.0, -2.0, -1.0, 1.0, 2.0, 5.0]), 1..4),
                l in prop::collection::vec(1i64..9, 1..4),
            ) {
                let m = coeffs.len().min(l.len());
                let q = PolyExponential::plain(1.0, &coeffs[..m]).unwrap();
                let pt = ParamPoint::plain(&ints(&l[..m]));
                let p = match specialize(&q, &pt) { Ok(p) => p, Err(_) => return Ok(()) };
                prop_assume!(p.degree() > 0);
                let cl = classes_from(&p, &q.instantiate(&pt).unwrap());
                let total: usize = cl.iter().map(|c| c.multiplicity).sum();
                prop_assert_eq!(total, p.degree());
                for c in &cl {
                    prop_assert!(c.residual < 1e-9);
                    let conj = c.t.conj();
                    prop_assert!(cl.iter().any(|d| (d.t - conj).norm() < 1e-8 * (1.0 + conj.norm())));
                }
            }
        }
    }
}
