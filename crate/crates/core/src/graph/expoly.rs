//! Formal sums `Σ c·t^{L}` with linear-form exponents, over integer or
//! cyclotomic-integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::form::{LinearForm, Rational};
use crate::polyexp::PolyExponential;
use crate::upoly::ZPoly;

/// Commutative coefficient ring for exponent polynomials.
pub trait Coeff:
    Clone + PartialEq + fmt::Debug + Zero + One + Neg<Output = Self> + Sub<Output = Self>
{
    /// The value as an integer, if it is one.
    fn as_integer(&self) -> Option<BigInt>;
    fn to_complex(&self) -> Complex64;
}

impl Coeff for BigInt {
    fn as_integer(&self) -> Option<BigInt> {
        Some(self.clone())
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

/// `n`-th cyclotomic polynomial `Φₙ`.
pub fn cyclotomic(n: usize) -> ZPoly {
    assert!(n >= 1);
    let mut xn = vec![BigInt::zero(); n + 1];
    xn[0] = -BigInt::one();
    xn[n] = BigInt::one();
    let mut p = ZPoly::new(xn);
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = p.div_exact(&cyclotomic(d)).expect("Φ_d divides tⁿ − 1");
        }
    }
    p
}

/// Element of `ℤ[ζₙ] = ℤ[x]/Φₙ(x)`, `ζₙ = e^{2πi/n}`. `n = 0` marks a plain
/// integer, which combines with any `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclo {
    n: usize,
    c: Vec<BigInt>,
}

impl Cyclo {
    pub fn integer(k: BigInt) -> Self {
        Self::reduce(0, vec![k])
    }

    /// `ζₙᵏ`.
    pub fn zeta_pow(n: usize, k: usize) -> Self {
        let k = k % n;
        let mut c = vec![BigInt::zero(); k + 1];
        c[k] = BigInt::one();
        Self::reduce(n, c)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    fn reduce(n: usize, c: Vec<BigInt>) -> Self {
        let mut p = ZPoly::new(c);
        if n > 0 {
            let phi = cyclotomic(n);
            let d = phi.degree().expect("nonzero");
            // Φₙ is monic: plain long division.
            let mut v = p.coeffs().to_vec();
            while v.len() > d {
                let top = v.pop().expect("nonempty");
                let shift = v.len() - d;
                for (i, b) in phi.coeffs()[..d].iter().enumerate() {
                    v[shift + i] -= &top * b;
                }
            }
            p = ZPoly::new(v);
        }
        let n = if p.degree().unwrap_or(0) == 0 { 0 } else { n };
        Cyclo { n, c: p.coeffs().to_vec() }
    }

    fn join(a: usize, b: usize) -> usize {
        match (a, b) {
            (0, x) | (x, 0) => x,
            (x, y) if x == y => x,
            (x, y) => panic!("mixing cyclotomic orders {x} and {y}"),
        }
    }
}

impl Zero for Cyclo {
    fn zero() -> Self {
        Cyclo { n: 0, c: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
}

impl One for Cyclo {
    fn one() -> Self {
        Cyclo::integer(BigInt::one())
    }
}

impl Add for Cyclo {
    type Output = Cyclo;

    fn add(self, o: Cyclo) -> Cyclo {
        let n = Cyclo::join(self.n, o.n);
        let len = self.c.len().max(o.c.len());
        let c = (0..len)
            .map(|i| self.c.get(i).cloned().unwrap_or_default() + o.c.get(i).cloned().unwrap_or_default())
            .collect();
        Cyclo::reduce(n, c)
    }
}

impl Sub for Cyclo {
    type Output = Cyclo;

    fn sub(self, o: Cyclo) -> Cyclo {
        self + (-o)
    }
}

impl Neg for Cyclo {
    type Output = Cyclo;

    fn neg(self) -> Cyclo {
        Cyclo { n: self.n, c: self.c.into_iter().map(|x| -x).collect() }
    }
}

impl Mul for Cyclo {
    type Output = Cyclo;

    fn mul(self, o: Cyclo) -> Cyclo {
        let n = Cyclo::join(self.n, o.n);
        let p = ZPoly::new(self.c).mul(&ZPoly::new(o.c));
        Cyclo::reduce(n, p.coeffs().to_vec())
    }
}

impl Coeff for Cyclo {
    fn as_integer(&self) -> Option<BigInt> {
        match self.c.len() {
            0 => Some(BigInt::zero()),
            1 => Some(self.c[0].clone()),
            _ => None,
        }
    }

    fn to_complex(&self) -> Complex64 {
        if self.n == 0 {
            return self.c.first().map(|x| x.to_complex()).unwrap_or_default();
        }
        let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / self.n as f64);
        self.c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a.to_complex())
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_integer() {
            Some(k) => write!(f, "{k}"),
            None => {
                let p = ZPoly::new(self.c.clone()).to_string().replace('t', "z");
                write!(f, "({p})")
            }
        }
    }
}

/// `Σ c·t^{L}` keyed by exponent form; no zero coefficients are stored.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentPolynomial<C: Coeff> {
    terms: BTreeMap<LinearForm, C>,
}

impl<C: Coeff> ExponentPolynomial<C> {
    pub fn zero() -> Self {
        ExponentPolynomial { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(C::one(), LinearForm::zero())
    }

    pub fn monomial(c: C, e: LinearForm) -> Self {
        let mut p = Self::zero();
        p.add_term(c, e);
        p
    }

    pub fn add_term(&mut self, c: C, e: LinearForm) {
        let slot = self.terms.entry(e).or_insert_with(C::zero);
        *slot = slot.clone() + c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LinearForm, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &LinearForm) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }

    /// Sorted list of parameter names appearing in the exponents.
    pub fn params(&self) -> Vec<String> {
        let mut v: Vec<String> = self
            .terms
            .keys()
            .flat_map(|f| f.params().map(str::to_string).collect::<Vec<_>>())
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// Polynomial in `t` at integer parameter values.
    pub fn to_zpoly(&self, names: &[String], values: &[i64]) -> Result<ZPoly> {
        let vals: Vec<Rational> = values.iter().map(|&v| Rational::from_integer(v.into())).collect();
        let mut terms: Vec<(usize, BigInt)> = Vec::new();
        for (f, c) in &self.terms {
            let e = f.eval_exact(names, &vals)?;
            if !e.is_integer() || e.is_negative() {
                return Err(Error::Invalid(format!("exponent {f} is not a nonnegative integer here")));
            }
            let k = c
                .as_integer()
                .ok_or_else(|| Error::Invalid("coefficient is not an integer".into()))?;
            terms.push((e.to_integer().to_usize().expect("small"), k));
        }
        Ok(ZPoly::from_sparse(terms.iter().map(|(e, c)| (*e, c))))
    }

    /// As a poly-exponential in `w` with `t = e^{w}`; needs integer
    /// coefficients and a nonzero constant term.
    pub fn to_polyexp(&self) -> Result<PolyExponential> {
        let mut a0 = 0.0;
        let mut terms = Vec::new();
        for (f, c) in &self.terms {
            let k = c
                .as_integer()
                .ok_or_else(|| Error::Invalid("coefficient is not an integer".into()))?
                .to_f64()
                .expect("finite");
            if f.is_zero() {
                a0 = k;
            } else {
                terms.push((k, f.clone()));
            }
        }
        if a0 == 0.0 {
            return Err(Error::ConstantTermVanished);
        }
        PolyExponential::new(a0, terms, self.params())
    }

    /// `Σ c·e^{L(ℓ) w}` at real parameter values.
    pub fn eval(&self, names: &[String], values: &[f64], w: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (f, c) in &self.terms {
            acc += c.to_complex() * (w * f.eval_f64(names, values)?).exp();
        }
        Ok(acc)
    }

    /// Replaces each exponent by its value under a substitution of
    /// parameters by linear forms.
    pub fn substitute(&self, map: &BTreeMap<String, LinearForm>) -> Self {
        let mut out = Self::zero();
        for (f, c) in &self.terms {
            let mut g = LinearForm::constant(f.constant_term().clone());
            for (name, k) in f.coeffs() {
                let sub = map.get(name).cloned().unwrap_or_else(|| LinearForm::var(name));
                g = &g + &(&sub * k);
            }
            out.add_term(c.clone(), g);
        }
        out
    }
}

impl<C: Coeff> Add for &ExponentPolynomial<C> {
    type Output = ExponentPolynomial<C>;

    fn add(self, o: &ExponentPolynomial<C>) -> ExponentPolynomial<C> {
        let mut out = self.clone();
        for (f, c) in &o.terms {
            out.add_term(c.clone(), f.clone());
        }
        out
    }
}

impl<C: Coeff> Sub for &ExponentPolynomial<C> {
    type Output = ExponentPolynomial<C>;

    fn sub(self, o: &ExponentPolynomial<C>) -> ExponentPolynomial<C> {
        let mut out = self.clone();
        for (f, c) in &o.terms {
            out.add_term(-c.clone(), f.clone());
        }
        out
    }
}

impl<C: Coeff> Mul for &ExponentPolynomial<C> {
    type Output = ExponentPolynomial<C>;

    fn mul(self, o: &ExponentPolynomial<C>) -> ExponentPolynomial<C> {
        let mut out = ExponentPolynomial::zero();
        for (f, a) in &self.terms {
            for (g, b) in &o.terms {
                out.add_term(a.clone() * b.clone(), f + g);
            }
        }
        out
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for ExponentPolynomial<C> {
    /// Highest constant offset first, then by form; e.g.
    /// `t^(l7 + l8) - t^(l1 + l4) - … + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let (neg, mag) = match c.as_integer() {
                Some(k) => (k.is_negative(), k.abs().to_string()),
                None => (false, c.to_string()),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            if e.is_zero() {
                write!(f, "{mag}")?;
                continue;
            }
            if mag != "1" {
                write!(f, "{mag}*")?;
            }
            if e.is_constant() {
                write!(f, "t^{e}")?;
            } else {
                write!(f, "t^({e})")?;
            }
        }
        Ok(())
    }
}
