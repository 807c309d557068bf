//! Dense univariate polynomials over ℤ: arithmetic, primitive-remainder gcd,
//! squarefree decomposition and a modular squarefreeness check.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Integer polynomial, coefficients in ascending degree, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ZPoly {
    c: Vec<BigInt>,
}

impl ZPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        ZPoly { c }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// Sparse constructor from `(exponent, coefficient)` pairs; repeated
    /// exponents add up.
    pub fn from_sparse<'a>(terms: impl IntoIterator<Item = (usize, &'a BigInt)>) -> Self {
        let mut c: Vec<BigInt> = Vec::new();
        for (e, a) in terms {
            if c.len() <= e {
                c.resize(e + 1, BigInt::zero());
            }
            c[e] += a;
        }
        Self::new(c)
    }

    pub fn zero() -> Self {
        ZPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `tⁿ`.
    pub fn monomial(n: usize) -> Self {
        let mut c = vec![BigInt::zero(); n + 1];
        c[n] = BigInt::one();
        ZPoly { c }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.c.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lc(&self) -> BigInt {
        self.c.last().cloned().unwrap_or_default()
    }

    /// Order of vanishing at 0.
    pub fn low_order(&self) -> usize {
        self.c.iter().position(|x| !x.is_zero()).unwrap_or(0)
    }

    pub fn shift_down(&self, k: usize) -> Self {
        Self::new(self.c.iter().skip(k).cloned().collect())
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); k];
        c.extend(self.c.iter().cloned());
        ZPoly { c }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, x)| x * BigInt::from(i))
                .collect(),
        )
    }

    pub fn content(&self) -> BigInt {
        self.c.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        Self::new(self.c.iter().map(|x| x / &g).collect())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.c.iter().map(|x| x * k).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    /// Pseudo-remainder of `self` by `d`.
    fn prem(&self, d: &Self) -> Self {
        let dd = d.degree().expect("nonzero divisor");
        let lc = d.lc();
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let k = r.lc();
            let shift = rd - dd;
            let mut c: Vec<BigInt> = r.c.iter().map(|x| x * &lc).collect();
            for (i, b) in d.c.iter().enumerate() {
                c[i + shift] -= &k * b;
            }
            r = Self::new(c);
        }
        r
    }

    /// Exact quotient `self / d`; `None` if `d` does not divide `self` over ℤ.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let dd = d.degree()?;
        let lc = d.lc();
        let mut r = self.c.clone();
        let n = match self.degree() {
            None => return Some(Self::zero()),
            Some(n) if n < dd => return None,
            Some(n) => n,
        };
        let mut q = vec![BigInt::zero(); n - dd + 1];
        for k in (0..=n - dd).rev() {
            let top = &r[k + dd];
            if top.is_zero() {
                continue;
            }
            let (qk, rem) = top.div_rem(&lc);
            if !rem.is_zero() {
                return None;
            }
            for (i, b) in d.c.iter().enumerate() {
                r[k + i] -= &qk * b;
            }
            q[k] = qk;
        }
        if r.iter().all(|x| x.is_zero()) {
            Some(Self::new(q))
        } else {
            None
        }
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.primitive(), o.primitive());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.prem(&b).primitive();
            a = b;
            b = r;
        }
        a.primitive()
    }

    /// Squarefree decomposition of the primitive part: `(factor, multiplicity)`
    /// with pairwise coprime squarefree factors of positive degree, ascending
    /// multiplicity.
    ///
    /// Uses the gcd chain `g₀ = f`, `gₖ = gcd(gₖ₋₁, gₖ₋₁')`; `gₖ₋₁ / gₖ` is the
    /// product of the factors of multiplicity at least `k`.
    pub fn squarefree_decomposition(&self) -> Vec<(ZPoly, usize)> {
        let f = self.primitive();
        if f.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let mut chain = vec![f];
        loop {
            let last = chain.last().expect("nonempty");
            if last.degree().unwrap_or(0) == 0 {
                break;
            }
            let g = last.gcd(&last.derivative());
            chain.push(g);
        }
        let h: Vec<ZPoly> = chain
            .windows(2)
            .map(|w| w[0].div_exact(&w[1]).expect("gcd divides").primitive())
            .collect();
        let mut out = Vec::new();
        for k in 0..h.len() {
            let next = h.get(k + 1).cloned().unwrap_or_else(ZPoly::one);
            let q = h[k].div_exact(&next).expect("nested").primitive();
            if q.degree().unwrap_or(0) > 0 {
                out.push((q, k + 1));
            }
        }
        out
    }

    /// Reduction modulo a prime, ascending coefficients in `[0, p)`.
    pub fn mod_p(&self, p: u64) -> Vec<u64> {
        let bp = BigInt::from(p);
        let mut v: Vec<u64> = self
            .c
            .iter()
            .map(|x| x.mod_floor(&bp).to_u64().expect("reduced"))
            .collect();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    /// Cheap sufficient test: `true` means certainly squarefree over ℚ.
    pub fn squarefree_mod_p(&self, p: u64) -> bool {
        let f = self.mod_p(p);
        if f.len() != self.c.len() || f.len() < 2 {
            return false;
        }
        let fp: Vec<u64> = f
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| mulmod(a, i as u64 % p, p))
            .collect();
        let g = gcd_mod_p(f, fp, p);
        g.len() == 1
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        let bx = BigInt::from(x);
        self.c.iter().rev().fold(BigInt::zero(), |acc, a| acc * &bx + a)
    }

    /// Coefficients as `f64`, scaled by a power of two if they would overflow.
    pub fn to_f64_scaled(&self) -> Vec<f64> {
        let bits = self.c.iter().map(|x| x.bits()).max().unwrap_or(0);
        let shift = bits.saturating_sub(900);
        self.c
            .iter()
            .map(|x| {
                let y: BigInt = x >> shift;
                y.to_f64().unwrap_or(0.0)
            })
            .collect()
    }
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let mag = a.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show = i == 0 || !mag.is_one();
            if show {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn gcd_mod_p(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let inv = powmod(*b.last().expect("nonempty"), p - 2, p);
        let db = b.len() - 1;
        while a.len() > db {
            let k = mulmod(*a.last().expect("nonempty"), inv, p);
            let shift = a.len() - 1 - db;
            for (i, &bi) in b.iter().enumerate() {
                let t = mulmod(k, bi, p);
                a[i + shift] = (a[i + shift] + p - t) % p;
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

/// Large primes used for the modular squarefreeness shortcut.
pub const CHECK_PRIMES: [u64; 3] = [2_305_843_009_213_693_951, 4_611_686_018_427_387_847, 1_000_000_007];

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> ZPoly {
        ZPoly::from_i64(c)
    }

    #[test]
    fn arithmetic() {
        let a = p(&[1, 1]);
        let b = p(&[-1, 1]);
        assert_eq!(a.mul(&b), p(&[-1, 0, 1]));
        assert_eq!(p(&[-1, 0, 1]).div_exact(&a), Some(b.clone()));
        assert_eq!(p(&[1, 0, 1]).div_exact(&a), None);
        assert_eq!(p(&[1, 2, 3]).derivative(), p(&[2, 6]));
        assert_eq!(p(&[0, 0, 2, 4]).low_order(), 2);
        assert_eq!(p(&[0, 0, 2, 4]).primitive(), p(&[0, 0, 1, 2]));
    }

    #[test]
    fn gcd_of_shared_factor() {
        let f = p(&[-1, 1]).mul(&p(&[2, 0, 1]));
        let g = p(&[-1, 1]).mul(&p(&[3, 1]));
        assert_eq!(f.gcd(&g), p(&[-1, 1]));
        assert_eq!(p(&[2, 4]).gcd(&p(&[3, 6])), p(&[1, 2]));
    }

    #[test]
    fn squarefree_decomposition_recovers_multiplicities() {
        // (t-1)² (t-2)
        let f = p(&[-1, 1]).mul(&p(&[-1, 1])).mul(&p(&[-2, 1]));
        let d = f.squarefree_decomposition();
        assert_eq!(d, vec![(p(&[-2, 1]), 1), (p(&[-1, 1]), 2)]);
        // 4 (2t+1)³ (t²+1)
        let g = p(&[1, 2]);
        let f = g.mul(&g).mul(&g).mul(&p(&[1, 0, 1])).scale(&BigInt::from(4));
        let d = f.squarefree_decomposition();
        assert_eq!(d, vec![(p(&[1, 0, 1]), 1), (g, 3)]);
        // t⁴ − 11t² + 1 is squarefree
        let f = p(&[1, 0, -11, 0, 1]);
        assert_eq!(f.squarefree_decomposition(), vec![(f.clone(), 1)]);
    }

    #[test]
    fn modular_check() {
        assert!(p(&[1, 0, -11, 0, 1]).squarefree_mod_p(CHECK_PRIMES[0]));
        assert!(!p(&[1, -2, 1]).squarefree_mod_p(CHECK_PRIMES[0]));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, 0, -11, 0, 1]).to_string(), "t^4 - 11t^2 + 1");
        assert_eq!(p(&[0, -1]).to_string(), "-t");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_poly() -> impl Strategy<Value = ZPoly> {
            prop::collection::vec(-4i64..5, 1..5).prop_map(|c| ZPoly::from_i64(&c))
        }

        proptest! {
            #[test]
            fn decomposition_multiplies_back(a in small_poly(), b in small_poly(), c in small_poly()) {
                let f = a.mul(&b).mul(&b).mul(&c).mul(&c).mul(&c);
                prop_assume!(f.degree().unwrap_or(0) > 0);
                let d = f.squarefree_decomposition();
                let mut prod = ZPoly::one();
                for (g, k) in &d {
                    for _ in 0..*k { prod = prod.mul(g); }
                }
                let lhs = f.primitive();
                // Constant factors are dropped; compare primitive parts.
                prop_assert_eq!(prod.primitive(), lhs);
                for (g, _) in &d {
                    prop_assert_eq!(g.gcd(&g.derivative()).degree(), Some(0));
                }
            }
        }
    }
}
