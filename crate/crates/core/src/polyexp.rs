//! Poly-exponentials `a₀ + Σ aᵢ e^{Lᵢ(ℓ) w}` with parametric exponents, their
//! instantiation at parameter points, evaluation, the reflected form `Q̄` and
//! the projective map `ι`.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::form::{rat_to_f64, LinearForm, Rational};

/// A symbolic poly-exponential. Terms with identical exponent forms are
/// merged on construction; terms whose merged coefficient is zero are dropped.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyExponential {
    a0: f64,
    terms: Vec<(f64, LinearForm)>,
    params: Vec<String>,
}

impl PolyExponential {
    pub fn new(a0: f64, terms: Vec<(f64, LinearForm)>, params: Vec<String>) -> Result<Self> {
        if a0 == 0.0 || !a0.is_finite() {
            return Err(Error::Invalid("constant term a0 must be finite and nonzero".into()));
        }
        let mut merged: Vec<(f64, LinearForm)> = Vec::with_capacity(terms.len());
        let mut a0 = a0;
        for (c, form) in terms {
            if !c.is_finite() {
                return Err(Error::Invalid("non-finite coefficient".into()));
            }
            for p in form.params() {
                if !params.iter().any(|q| q == p) {
                    return Err(Error::UnknownParameter(p.to_string()));
                }
            }
            if form.is_zero() {
                a0 += c;
                continue;
            }
            match merged.iter_mut().find(|(_, f)| *f == form) {
                Some(slot) => slot.0 += c,
                None => merged.push((c, form)),
            }
        }
        if a0 == 0.0 {
            return Err(Error::ConstantTermVanished);
        }
        merged.retain(|(c, _)| *c != 0.0);
        Ok(PolyExponential { a0, terms: merged, params })
    }

    /// `a₀ + Σ aᵢ e^{ℓᵢ w}` over parameters `l1..lm`, one coordinate per term.
    pub fn plain(a0: f64, coeffs: &[f64]) -> Result<Self> {
        let params: Vec<String> = (1..=coeffs.len()).map(|i| format!("l{i}")).collect();
        let terms = coeffs
            .iter()
            .zip(&params)
            .map(|(&c, p)| (c, LinearForm::var(p)))
            .collect();
        Self::new(a0, terms, params)
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    pub fn terms(&self) -> &[(f64, LinearForm)] {
        &self.terms
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    /// Per-term exponents at `pt` without merging (the raw ℓ-vector of the
    /// specialization).
    pub fn term_exponents(&self, pt: &ParamPoint) -> Result<Vec<f64>> {
        let values = pt.values_for(&self.params)?;
        self.terms.iter().map(|(_, f)| f.eval_f64(&self.params, &values)).collect()
    }

    pub fn term_exponents_exact(&self, pt: &ParamPoint) -> Result<Vec<Rational>> {
        let values = pt
            .exact_values_for(&self.params)?
            .ok_or_else(|| Error::Invalid("exact evaluation needs a rational parameter point".into()))?;
        self.terms.iter().map(|(_, f)| f.eval_exact(&self.params, &values)).collect()
    }

    /// Specializes the exponents at `pt`: evaluates, merges equal exponents,
    /// drops cancelled terms and sorts ascending.
    pub fn instantiate(&self, pt: &ParamPoint) -> Result<ConcretePolyExp> {
        let raw: Vec<(f64, f64)> = if pt.is_exact() {
            let ex = self.term_exponents_exact(pt)?;
            // Merge on exact values so ties like ℓ₇ = ℓ₈ = 2 are detected exactly.
            let mut groups: Vec<(Rational, f64)> = Vec::new();
            let mut tied_max = false;
            if let Some(max) = ex.iter().max() {
                tied_max = ex.iter().filter(|e| *e == max).count() > 1;
            }
            for ((c, _), e) in self.terms.iter().zip(ex) {
                if e.is_negative() {
                    return Err(Error::NegativeExponent(rat_to_f64(&e)));
                }
                match groups.iter_mut().find(|(g, _)| *g == e) {
                    Some(slot) => slot.1 += c,
                    None => groups.push((e, *c)),
                }
            }
            let terms: Vec<(f64, f64)> = groups.iter().map(|(e, c)| (*c, rat_to_f64(e))).collect();
            let mut out = ConcretePolyExp::from_raw(self.a0, &terms)?;
            out.max_tied = tied_max;
            return Ok(out);
        } else {
            let ex = self.term_exponents(pt)?;
            self.terms.iter().zip(ex).map(|((c, _), e)| (*c, e)).collect()
        };
        ConcretePolyExp::from_raw(self.a0, &raw)
    }
}

/// Values for named parameters; optionally exact.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamPoint {
    names: Vec<String>,
    values: Vec<f64>,
    exact: Option<Vec<Rational>>,
}

impl ParamPoint {
    pub fn from_f64(names: &[String], values: &[f64]) -> Result<Self> {
        if names.len() != values.len() {
            return Err(Error::Invalid(format!(
                "{} parameter names but {} values",
                names.len(),
                values.len()
            )));
        }
        Ok(ParamPoint { names: names.to_vec(), values: values.to_vec(), exact: None })
    }

    pub fn from_rationals(names: &[String], values: &[Rational]) -> Result<Self> {
        if names.len() != values.len() {
            return Err(Error::Invalid(format!(
                "{} parameter names but {} values",
                names.len(),
                values.len()
            )));
        }
        Ok(ParamPoint {
            names: names.to_vec(),
            values: values.iter().map(rat_to_f64).collect(),
            exact: Some(values.to_vec()),
        })
    }

    /// Convenience for plain poly-exponentials (`l1..lm`).
    pub fn plain(values: &[Rational]) -> Self {
        let names: Vec<String> = (1..=values.len()).map(|i| format!("l{i}")).collect();
        Self::from_rationals(&names, values).expect("lengths agree")
    }

    pub fn plain_f64(values: &[f64]) -> Self {
        let names: Vec<String> = (1..=values.len()).map(|i| format!("l{i}")).collect();
        Self::from_f64(&names, values).expect("lengths agree")
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn exact(&self) -> Option<&[Rational]> {
        self.exact.as_deref()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn scaled(&self, r: &Rational) -> ParamPoint {
        match &self.exact {
            Some(ex) => {
                let v: Vec<Rational> = ex.iter().map(|x| x * r).collect();
                ParamPoint::from_rationals(&self.names, &v).expect("same length")
            }
            None => {
                let rf = rat_to_f64(r);
                ParamPoint::from_f64(&self.names, &self.values.iter().map(|x| x * rf).collect::<Vec<_>>())
                    .expect("same length")
            }
        }
    }

    fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownParameter(name.to_string()))
    }

    pub(crate) fn values_for(&self, params: &[String]) -> Result<Vec<f64>> {
        params.iter().map(|p| self.index_of(p).map(|i| self.values[i])).collect()
    }

    pub(crate) fn exact_values_for(&self, params: &[String]) -> Result<Option<Vec<Rational>>> {
        match &self.exact {
            None => Ok(None),
            Some(ex) => params
                .iter()
                .map(|p| self.index_of(p).map(|i| ex[i].clone()))
                .collect::<Result<Vec<_>>>()
                .map(Some),
        }
    }
}

/// A poly-exponential with numeric exponents: `(coefficient, exponent)`
/// pairs sorted by strictly increasing exponent. The first entry is the
/// constant term (exponent 0, nonzero coefficient).
#[derive(Clone, Debug, PartialEq)]
pub struct ConcretePolyExp {
    terms: Vec<(f64, f64)>,
    max_tied: bool,
}

impl ConcretePolyExp {
    /// Builds from a constant and raw `(coefficient, exponent)` terms,
    /// merging equal exponents.
    pub fn from_raw(a0: f64, raw: &[(f64, f64)]) -> Result<Self> {
        let mut terms: Vec<(f64, f64)> = vec![(a0, 0.0)];
        let mut max_tied = false;
        if let Some(max) = raw.iter().map(|t| t.1).reduce(f64::max) {
            max_tied = raw.iter().filter(|t| t.1 == max).count() > 1;
        }
        for &(c, e) in raw {
            if !e.is_finite() || !c.is_finite() {
                return Err(Error::Invalid("non-finite term".into()));
            }
            if e < 0.0 {
                return Err(Error::NegativeExponent(e));
            }
            match terms.iter_mut().find(|t| t.1 == e) {
                Some(slot) => slot.0 += c,
                None => terms.push((c, e)),
            }
        }
        if terms[0].0 == 0.0 {
            return Err(Error::ConstantTermVanished);
        }
        terms.retain(|t| t.0 != 0.0);
        terms.sort_by(|x, y| x.1.total_cmp(&y.1));
        Ok(ConcretePolyExp { terms, max_tied })
    }

    pub fn terms(&self) -> &[(f64, f64)] {
        &self.terms
    }

    pub fn a0(&self) -> f64 {
        self.terms[0].0
    }

    /// Non-constant terms, ascending.
    pub fn nonconstant(&self) -> &[(f64, f64)] {
        &self.terms[1..]
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn max_exponent(&self) -> f64 {
        self.terms.last().map(|t| t.1).unwrap_or(0.0)
    }

    /// Smallest positive exponent, i.e. `min(ℓ)`.
    pub fn min_exponent(&self) -> Option<f64> {
        self.terms.get(1).map(|t| t.1)
    }

    /// Whether the instantiated exponent vector had its maximum attained by
    /// two or more terms before merging.
    pub fn max_tied(&self) -> bool {
        self.max_tied
    }

    /// Membership of the exponent vector in the cone `𝒮`.
    pub fn in_cone(&self) -> bool {
        !self.is_constant() && !self.max_tied
    }

    /// `Σ aᵢ ℓᵢᵏ e^{ℓᵢ w}`; the constant term only contributes for `k = 0`.
    pub fn eval(&self, w: Complex64, k: u32) -> Complex64 {
        let mut acc = Complex64::zero();
        for &(c, e) in &self.terms {
            if e == 0.0 {
                if k == 0 {
                    acc += c;
                }
                continue;
            }
            acc += c * e.powi(k as i32) * (w * e).exp();
        }
        acc
    }

    /// `Σ |aᵢ ℓᵢᵏ e^{ℓᵢ w}|`, the natural size against which residuals are
    /// judged.
    pub fn magnitude(&self, w: Complex64, k: u32) -> f64 {
        self.terms
            .iter()
            .filter(|(_, e)| k == 0 || *e != 0.0)
            .map(|&(c, e)| (c * e.powi(k as i32)).abs() * (w.re * e).exp())
            .sum()
    }

    /// `|Q(w)| / Σ|aᵢ e^{ℓᵢ w}|`.
    pub fn relative_residual(&self, w: Complex64) -> f64 {
        self.eval(w, 0).norm() / self.magnitude(w, 0)
    }

    /// The reflected poly-exponential `Q̄(w) = a₀e^{ℓ_m w} + Σ_{i<m} aᵢe^{(ℓ_m−ℓᵢ)w} + a_m`.
    pub fn bar_transform(&self) -> Result<BarData> {
        if self.is_constant() {
            return Err(Error::Invalid("bar transform needs a non-constant term".into()));
        }
        let (am, lm) = *self.terms.last().expect("non-constant");
        let nonconst = &self.terms[1..self.terms.len() - 1];
        let mut lbar = vec![lm];
        lbar.extend(nonconst.iter().map(|t| lm - t.1));
        let mut raw = vec![(self.a0(), lm)];
        raw.extend(nonconst.iter().map(|&(c, e)| (c, lm - e)));
        let qbar = ConcretePolyExp::from_raw(am, &raw)?;
        let min_l = self.min_exponent().expect("non-constant");
        let min_lbar = lbar.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(BarData { lbar, min_l, min_lbar, qbar })
    }

    /// Strip `C₋ ≤ Re w ≤ C₊` containing every zero.
    pub fn strip_bounds(&self) -> Result<(f64, f64)> {
        if self.is_constant() || self.max_tied {
            return Err(Error::TiedLeadingExponent);
        }
        let n = self.terms.len();
        let m = (n - 1) as f64;
        let (am, lm) = self.terms[n - 1];
        let lprev = self.terms[n - 2].1;
        let big_m = self.terms[..n - 1].iter().map(|t| t.0.abs()).fold(0.0, f64::max);
        let big_m1 = self.terms[1..].iter().map(|t| t.0.abs()).fold(0.0, f64::max);
        let lmin = self.terms[1].1;
        let c_plus = ((m * big_m / am.abs()).ln() / (lm - lprev)).max(0.0);
        let c_minus = ((self.a0().abs() / (m * big_m1)).ln() / lmin).min(0.0);
        Ok((c_minus, c_plus))
    }
}

/// Reflection data: `ℓ̄ = (ℓ_m, ℓ_m−ℓ₁, …, ℓ_m−ℓ_{m−1})`, `min(ℓ)`, `min(ℓ̄)` and `Q̄`.
#[derive(Clone, Debug, PartialEq)]
pub struct BarData {
    pub lbar: Vec<f64>,
    pub min_l: f64,
    pub min_lbar: f64,
    pub qbar: ConcretePolyExp,
}

/// `ι(ℓ) = (ℓ / min ℓ, ℓ̄ / min ℓ̄)`.
#[derive(Clone, Debug, PartialEq)]
pub struct IotaImage {
    pub p: Vec<f64>,
    pub q: Vec<f64>,
}

/// True iff every coordinate is positive and the last one is the strict maximum.
pub fn in_cone(l: &[f64]) -> bool {
    match l.split_last() {
        None => false,
        Some((last, rest)) => l.iter().all(|&x| x > 0.0) && rest.iter().all(|x| x < last),
    }
}

fn check_cone_any_order<T: PartialOrd + Clone>(l: &[T], positive: impl Fn(&T) -> bool) -> Result<usize> {
    if l.is_empty() {
        return Err(Error::NotInCone("empty vector".into()));
    }
    if !l.iter().all(&positive) {
        return Err(Error::NotInCone("non-positive coordinate".into()));
    }
    let mut imax = 0;
    for (i, x) in l.iter().enumerate() {
        if *x > l[imax] {
            imax = i;
        }
    }
    if l.iter().enumerate().any(|(i, x)| i != imax && *x == l[imax]) {
        return Err(Error::NotInCone("maximum attained twice".into()));
    }
    Ok(imax)
}

pub fn iota(l: &[f64]) -> Result<IotaImage> {
    let imax = check_cone_any_order(l, |x| *x > 0.0)?;
    let lm = l[imax];
    let mut lbar = vec![lm];
    lbar.extend(l.iter().enumerate().filter(|(i, _)| *i != imax).map(|(_, x)| lm - x));
    let min_l = l.iter().copied().fold(f64::INFINITY, f64::min);
    let min_lbar = lbar.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(IotaImage {
        p: l.iter().map(|x| x / min_l).collect(),
        q: lbar.iter().map(|x| x / min_lbar).collect(),
    })
}

/// Exact `ι` for rational vectors.
pub fn iota_exact(l: &[BigRational]) -> Result<(Vec<BigRational>, Vec<BigRational>)> {
    let imax = check_cone_any_order(l, |x| x.is_positive())?;
    let lm = l[imax].clone();
    let mut lbar = vec![lm.clone()];
    lbar.extend(l.iter().enumerate().filter(|(i, _)| *i != imax).map(|(_, x)| &lm - x));
    let min_l = l.iter().min().expect("nonempty").clone();
    let min_lbar = lbar.iter().min().expect("nonempty").clone();
    Ok((
        l.iter().map(|x| x / &min_l).collect(),
        lbar.iter().map(|x| x / &min_lbar).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::form::{rat, rat_int};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat_int(x)).collect()
    }

    #[test]
    fn example_one_specializations() {
        let q = fixtures::example1();
        let at = q.instantiate(&ParamPoint::plain(&ints(&[1, 1, 1, 1, 1, 1, 2, 2]))).unwrap();
        assert_eq!(at.terms(), &[(1.0, 0.0), (-11.0, 2.0), (1.0, 4.0)]);
        assert!(at.in_cone());
        let at2 = q.instantiate(&ParamPoint::plain(&ints(&[4, 4, 4, 5, 5, 5, 6, 6]))).unwrap();
        assert_eq!(at2.terms(), &[(1.0, 0.0), (-2.0, 6.0), (-9.0, 9.0), (1.0, 12.0)]);
    }

    #[test]
    fn cancelling_terms_leave_a_constant() {
        let x = LinearForm::var("x");
        let names = vec!["x".to_string(), "y".to_string()];
        let q = PolyExponential::new(
            1.0,
            vec![(1.0, x.clone()), (-1.0, LinearForm::var("y"))],
            names.clone(),
        )
        .unwrap();
        let c = q.instantiate(&ParamPoint::from_rationals(&names, &ints(&[2, 2])).unwrap()).unwrap();
        assert!(c.is_constant());
        assert!(!c.in_cone());
        // Identical forms merge symbolically.
        let q2 = PolyExponential::new(1.0, vec![(1.0, x.clone()), (-1.0, x)], names).unwrap();
        assert!(q2.terms().is_empty());
    }

    #[test]
    fn vanishing_constant_and_negative_exponents_are_rejected() {
        let names = vec!["x".to_string()];
        let q = PolyExponential::new(1.0, vec![(-1.0, LinearForm::parse("x - 1").unwrap())], names.clone()).unwrap();
        let err = q.instantiate(&ParamPoint::from_rationals(&names, &ints(&[1])).unwrap());
        assert_eq!(err, Err(Error::ConstantTermVanished));
        let err = q.instantiate(&ParamPoint::from_rationals(&names, &[rat(1, 2)]).unwrap());
        assert!(matches!(err, Err(Error::NegativeExponent(_))));
    }

    #[test]
    fn eval_examples() {
        let qc = ConcretePolyExp::from_raw(1.0, &[(-11.0, 2.0), (1.0, 4.0)]).unwrap();
        assert_eq!(qc.eval(Complex64::new(0.0, 0.0), 0), Complex64::new(-9.0, 0.0));
        assert_eq!(qc.eval(Complex64::new(0.0, 0.0), 1), Complex64::new(-18.0, 0.0));
        let w = 0.5 * ((11.0 + 117f64.sqrt()) / 2.0).ln();
        assert!(qc.eval(Complex64::new(w, 0.0), 0).norm() < 1e-12);
    }

    #[test]
    fn bar_examples() {
        let qc = ConcretePolyExp::from_raw(1.0, &[(1.0, 1.0), (-1.0, 2.0)]).unwrap();
        let bar = qc.bar_transform().unwrap();
        assert_eq!(bar.qbar.terms(), &[(-1.0, 0.0), (1.0, 1.0), (1.0, 2.0)]);
        assert_eq!(bar.lbar, vec![2.0, 1.0]);
        let single = ConcretePolyExp::from_raw(1.0, &[(-1.0, 1.0)]).unwrap();
        assert_eq!(single.bar_transform().unwrap().qbar.terms(), &[(-1.0, 0.0), (1.0, 1.0)]);
    }

    #[test]
    fn iota_examples() {
        assert_eq!(iota(&[1.0, 2.0]).unwrap(), IotaImage { p: vec![1.0, 2.0], q: vec![2.0, 1.0] });
        assert_eq!(iota(&[2.0, 4.0]).unwrap(), IotaImage { p: vec![1.0, 2.0], q: vec![2.0, 1.0] });
        assert!(matches!(iota(&[2.0, 2.0]), Err(Error::NotInCone(_))));
        assert!(matches!(iota(&[-1.0, 2.0]), Err(Error::NotInCone(_))));
    }

    #[test]
    fn cone_membership() {
        assert!(in_cone(&[1.0, 2.0]));
        assert!(!in_cone(&[2.0, 2.0]));
        assert!(!in_cone(&[-1.0, 2.0]));
        assert!(!in_cone(&[2.0, 1.0]));
        assert!(!in_cone(&[]));
    }

    #[test]
    fn strip_bound_examples() {
        let qc = ConcretePolyExp::from_raw(1.0, &[(-11.0, 2.0), (1.0, 4.0)]).unwrap();
        let (lo, hi) = qc.strip_bounds().unwrap();
        assert!((hi - 22f64.ln() / 2.0).abs() < 1e-15);
        assert!((lo + 22f64.ln() / 2.0).abs() < 1e-15);
        let root = 0.5 * ((11.0 + 117f64.sqrt()) / 2.0).ln();
        assert!(lo <= -root && root <= hi);
        let one = ConcretePolyExp::from_raw(1.0, &[(-1.0, 1.0)]).unwrap();
        assert_eq!(one.strip_bounds().unwrap(), (0.0, 0.0));
        let tied = ConcretePolyExp::from_raw(1.0, &[(1.0, 2.0), (1.0, 2.0)]).unwrap();
        assert_eq!(tied.strip_bounds(), Err(Error::TiedLeadingExponent));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn concrete() -> impl Strategy<Value = ConcretePolyExp> {
            (
                prop::sample::select(vec![-2.0, -1.0, 0.5, 1.0, 3.0]),
                prop::collection::vec((-3.0f64..3.0, 0.05f64..4.0), 1..5),
            )
                .prop_filter_map("degenerate", |(a0, raw)| {
                    let raw: Vec<_> = raw.into_iter().filter(|t| t.0.abs() > 1e-3).collect();
                    ConcretePolyExp::from_raw(a0, &raw).ok().filter(|q| !q.is_constant())
                })
        }

        proptest! {
            #[test]
            fn conjugate_symmetry(q in concrete(), re in -2.0f64..2.0, im in -5.0f64..5.0, k in 0u32..3) {
                let w = Complex64::new(re, im);
                let a = q.eval(w.conj(), k);
                let b = q.eval(w, k).conj();
                prop_assert!((a - b).norm() <= 1e-12 * (1.0 + q.magnitude(w, k)));
            }

            #[test]
            fn bar_identity(q in concrete(), re in -1.5f64..1.5, im in -5.0f64..5.0) {
                let bar = q.bar_transform().unwrap();
                let w = Complex64::new(re, im);
                let lm = q.max_exponent();
                let lhs = bar.qbar.eval(w, 0);
                let rhs = (w * lm).exp() * q.eval(-w, 0);
                prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + bar.qbar.magnitude(w, 0)));
                // Reflecting twice evaluates back to Q.
                let twice = bar.qbar.bar_transform().unwrap().qbar;
                prop_assert!((twice.eval(w, 0) - q.eval(w, 0)).norm() <= 1e-10 * (1.0 + q.magnitude(w, 0)));
            }

            #[test]
            fn homogeneity_exact(num in 1i64..7, den in 1i64..7, l in prop::collection::vec(1i64..20, 2..5)) {
                let r = rat(num, den);
                let q = PolyExponential::plain(1.0, &vec![1.0; l.len()]).unwrap();
                let pt = ParamPoint::plain(&ints(&l));
                let a = q.term_exponents_exact(&pt).unwrap();
                let b = q.term_exponents_exact(&pt.scaled(&r)).unwrap();
                for (x, y) in a.iter().zip(&b) {
                    prop_assert_eq!(x * &r, y.clone());
                }
                let lr: Vec<Rational> = ints(&l).iter().map(|x| x * &r).collect();
                if let Ok(img) = iota_exact(&ints(&l)) {
                    prop_assert_eq!(img, iota_exact(&lr).unwrap());
                }
            }
        }
    }
}
