//! Exact linear forms over named parameters.
//!
//! Exponents such as `2u - a + 2b + 3c` are affine functions of the parameter
//! vector with rational coefficients. Evaluation at a rational point is exact.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numerator/denominator beyond f64 range individually
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact rational from an `f64` (every finite double is a dyadic rational).
pub fn rat_from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::Invalid(format!("non-finite value {x}")))
}

/// Parses `p/q`, an integer, or a plain decimal such as `-0.125` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
        let d: BigInt = d.trim().parse().map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Ok(Rational::from_integer(n));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    if let Some((ip, fp)) = body.split_once('.') {
        let all_digits = |t: &str| t.chars().all(|c| c.is_ascii_digit());
        if all_digits(ip) && all_digits(fp) && !(ip.is_empty() && fp.is_empty()) {
            let digits = format!("{ip}{fp}");
            let n: BigInt = digits.parse().map_err(|_| Error::Parse(format!("bad decimal `{s}`")))?;
            let d = num_traits::pow(BigInt::from(10), fp.len());
            let r = Rational::new(n, d);
            return Ok(if neg { -r } else { r });
        }
    }
    Err(Error::Parse(format!("bad rational `{s}`")))
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `Σ cᵢ·xᵢ + c₀` with rational coefficients. Zero coefficients are never
/// stored, so structural equality is equality of forms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LinearForm {
    coeffs: BTreeMap<String, Rational>,
    constant: Rational,
}

impl LinearForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        LinearForm { coeffs: BTreeMap::new(), constant: c }
    }

    /// The coordinate form `x_name`.
    pub fn var(name: &str) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(name.to_string(), Rational::one());
        LinearForm { coeffs, constant: Rational::zero() }
    }

    pub fn from_terms<I, S>(terms: I, constant: Rational) -> Self
    where
        I: IntoIterator<Item = (S, Rational)>,
        S: Into<String>,
    {
        let mut f = LinearForm::constant(constant);
        for (name, c) in terms {
            f.add_coeff(name.into(), c);
        }
        f
    }

    fn add_coeff(&mut self, name: String, c: Rational) {
        let entry = self.coeffs.entry(name).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.retain(|_, v| !v.is_zero());
        }
    }

    pub fn coeff(&self, name: &str) -> Rational {
        self.coeffs.get(name).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&str, &Rational)> {
        self.coeffs.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn constant_term(&self) -> &Rational {
        &self.constant
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.constant.is_zero()
    }

    /// True when the form has no parameter dependence.
    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Names referenced by this form.
    pub fn params(&self) -> impl Iterator<Item = &str> {
        self.coeffs.keys().map(String::as_str)
    }

    pub fn eval_exact(&self, names: &[String], values: &[Rational]) -> Result<Rational> {
        let mut acc = self.constant.clone();
        for (name, c) in &self.coeffs {
            let idx = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::UnknownParameter(name.clone()))?;
            acc += c * &values[idx];
        }
        Ok(acc)
    }

    pub fn eval_f64(&self, names: &[String], values: &[f64]) -> Result<f64> {
        let mut acc = rat_to_f64(&self.constant);
        for (name, c) in &self.coeffs {
            let idx = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::UnknownParameter(name.clone()))?;
            acc += rat_to_f64(c) * values[idx];
        }
        Ok(acc)
    }

    /// Directional derivative along `dir` (the constant offset drops out).
    pub fn derivative_along(&self, names: &[String], dir: &[f64]) -> Result<f64> {
        let mut acc = 0.0;
        for (name, c) in &self.coeffs {
            let idx = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::UnknownParameter(name.clone()))?;
            acc += rat_to_f64(c) * dir[idx];
        }
        Ok(acc)
    }

    pub fn scale(&self, r: &Rational) -> LinearForm {
        if r.is_zero() {
            return LinearForm::zero();
        }
        LinearForm {
            coeffs: self.coeffs.iter().map(|(k, v)| (k.clone(), v * r)).collect(),
            constant: &self.constant * r,
        }
    }

    /// Parses text such as `2u - a + 2b + 3c`, `l1 + l7`, `1/2*x + 3`.
    pub fn parse(text: &str) -> Result<LinearForm> {
        let word = |c: char| c.is_ascii_alphanumeric() || c == '_' || c == '.' || c == '/';
        let raw: Vec<char> = text.chars().collect();
        for (k, w) in raw.windows(2).enumerate() {
            if word(w[0]) && w[1].is_whitespace() {
                if let Some(&next) = raw[k + 1..].iter().find(|c| !c.is_whitespace()) {
                    if word(next) {
                        return Err(Error::Parse(format!("missing operator in `{text}`")));
                    }
                }
            }
        }
        let chars: Vec<char> = raw.into_iter().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(Error::Parse("empty linear form".into()));
        }
        let mut form = LinearForm::zero();
        let mut i = 0;
        while i < chars.len() {
            let mut sign = Rational::one();
            let mut saw_sign = false;
            while i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                if chars[i] == '-' {
                    sign = -sign;
                }
                saw_sign = true;
                i += 1;
            }
            if i > 0 && !saw_sign {
                return Err(Error::Parse(format!("expected `+` or `-` in `{text}`")));
            }
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/' || chars[i] == '.') {
                i += 1;
            }
            let num: String = chars[start..i].iter().collect();
            let coeff = if num.is_empty() { Rational::one() } else { parse_rational(&num)? };
            if i < chars.len() && chars[i] == '*' {
                i += 1;
            }
            let start = i;
            if i < chars.len() && (chars[i].is_ascii_alphabetic() || chars[i] == '_') {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
            }
            let ident: String = chars[start..i].iter().collect();
            if num.is_empty() && ident.is_empty() {
                return Err(Error::Parse(format!("dangling sign in `{text}`")));
            }
            let c = sign * coeff;
            if ident.is_empty() {
                form.constant += c;
            } else {
                form.add_coeff(ident, c);
            }
        }
        Ok(form)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut write_term = |f: &mut fmt::Formatter<'_>, c: &Rational, name: Option<&str>| -> fmt::Result {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            match name {
                Some(n) if mag.is_one() => write!(f, "{n}"),
                Some(n) if mag.is_integer() => write!(f, "{}{n}", mag.numer()),
                Some(n) => write!(f, "{}*{n}", format_rational(&mag)),
                None => write!(f, "{}", format_rational(&mag)),
            }
        };
        for (name, c) in &self.coeffs {
            write_term(f, c, Some(name))?;
        }
        if !self.constant.is_zero() || self.coeffs.is_empty() {
            write_term(f, &self.constant, None)?;
        }
        Ok(())
    }
}

impl Add for &LinearForm {
    type Output = LinearForm;
    fn add(self, rhs: &LinearForm) -> LinearForm {
        let mut out = self.clone();
        for (k, v) in &rhs.coeffs {
            out.add_coeff(k.clone(), v.clone());
        }
        out.constant += &rhs.constant;
        out
    }
}

impl Sub for &LinearForm {
    type Output = LinearForm;
    fn sub(self, rhs: &LinearForm) -> LinearForm {
        self + &(-rhs)
    }
}

impl Neg for &LinearForm {
    type Output = LinearForm;
    fn neg(self) -> LinearForm {
        self.scale(&-Rational::one())
    }
}

impl Mul<&Rational> for &LinearForm {
    type Output = LinearForm;
    fn mul(self, rhs: &Rational) -> LinearForm {
        self.scale(rhs)
    }
}
