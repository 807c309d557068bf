//! Zeros of a concrete poly-exponential inside a horizontal band, by
//! winding-number counting and recursive quadrisection.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyexp::ConcretePolyExp;

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// `k`-th element of the deterministic perturbation schedule, in `[0, 1)`.
pub(crate) fn golden(k: usize) -> f64 {
    (k as f64 * GOLDEN).fract()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rectangle {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rectangle {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        if !(x0 < x1 && y0 < y1) {
            return Err(Error::Invalid(format!("degenerate rectangle [{x0},{x1}]×[{y0},{y1}]")));
        }
        Ok(Rectangle { x0, x1, y0, y1 })
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))
    }

    pub fn diameter(&self) -> f64 {
        (self.x1 - self.x0).hypot(self.y1 - self.y0)
    }

    pub fn contains(&self, w: Complex64, slack: f64) -> bool {
        w.re >= self.x0 - slack && w.re <= self.x1 + slack && w.im >= self.y0 - slack && w.im <= self.y1 + slack
    }

    /// Four children split at fractions `fx`, `fy` of each side.
    fn split(&self, fx: f64, fy: f64) -> [Rectangle; 4] {
        let xm = self.x0 + fx * (self.x1 - self.x0);
        let ym = self.y0 + fy * (self.y1 - self.y0);
        [
            Rectangle { x0: self.x0, x1: xm, y0: self.y0, y1: ym },
            Rectangle { x0: xm, x1: self.x1, y0: self.y0, y1: ym },
            Rectangle { x0: self.x0, x1: xm, y0: ym, y1: self.y1 },
            Rectangle { x0: xm, x1: self.x1, y0: ym, y1: self.y1 },
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocatedZero {
    #[serde(serialize_with = "ser_complex")]
    pub w: Complex64,
    pub multiplicity: usize,
    /// Relative residual `|Q(w)| / Σ|aᵢe^{ℓᵢw}|`.
    pub residual: f64,
}

pub(crate) fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZeroOpts {
    pub cluster_tol: f64,
    pub residual_tol: f64,
    pub boundary_tol: f64,
    pub retries: usize,
}

impl Default for ZeroOpts {
    fn default() -> Self {
        ZeroOpts { cluster_tol: 1e-7, residual_tol: 1e-10, boundary_tol: 1e-8, retries: 8 }
    }
}

/// `Q⁽ᵏ⁾(w)`, `Q⁽ᵏ⁺¹⁾(w)` and `Σ|aᵢℓᵢᵏe^{ℓᵢw}|`, all multiplied by the
/// same positive factor so that nothing overflows.
pub(crate) fn scaled(q: &ConcretePolyExp, w: Complex64, k: u32) -> (Complex64, Complex64, f64) {
    let shift = q
        .terms()
        .iter()
        .filter(|(_, e)| k == 0 || *e != 0.0)
        .map(|(_, e)| e * w.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let (mut v, mut dv, mut mag) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), 0.0);
    for &(c, e) in q.terms() {
        if e == 0.0 {
            if k == 0 {
                let x = c * (-shift).exp();
                v += x;
                mag += x.abs();
            }
            continue;
        }
        let ck = c * e.powi(k as i32);
        let x = ck * (w * e - shift).exp();
        v += x;
        dv += x * e;
        mag += ck.abs() * (w.re * e - shift).exp();
    }
    (v, dv, mag)
}

/// Relative size of `Q` at `w`.
fn relative(q: &ConcretePolyExp, w: Complex64) -> f64 {
    let (v, _, m) = scaled(q, w, 0);
    v.norm() / m
}

/// Relative size below which `Q` is indistinguishable from rounding noise.
const NOISE: f64 = 16.0 * f64::EPSILON;

/// Net argument change of `Q` along `z(s)`, `s ∈ [0, 1]`, with derivative
/// `dz`. Steps are halved until each turns the phase by less than `π/2`
/// and the linear change `|Q'| h |z'|` stays below `|Q|` at both ends, so
/// no step can hop over a zero lying on the path. A sample whose
/// Newton distance `|Q/Q'|` is under `near` counts as a zero on the path.
fn phase_change(
    q: &ConcretePolyExp,
    z: impl Fn(f64) -> Complex64,
    dz: impl Fn(f64) -> Complex64,
    init: usize,
    near: f64,
) -> Result<f64> {
    let eval = |s: f64| {
        let (v, d, m) = scaled(q, z(s), 0);
        if v.norm() < NOISE * m || v.norm() < near * d.norm() {
            return Err(Error::ZeroOnBoundary);
        }
        Ok((v, d * dz(s)))
    };
    let mut total = 0.0;
    let mut s = 0.0;
    let mut h = 1.0 / init.max(1) as f64;
    let (mut va, mut da) = eval(0.0)?;
    while s < 1.0 {
        let step = h.min(1.0 - s);
        let (vb, db) = eval(s + step)?;
        let dphi = (vb / va).arg();
        if dphi.abs() < PI / 2.0 && da.norm() * step <= va.norm() && db.norm() * step <= vb.norm() {
            total += dphi;
            s += step;
            va = vb;
            da = db;
            h = step * 2.0;
        } else {
            h = step / 2.0;
            if h < 1e-15 {
                return Err(Error::ZeroOnBoundary);
            }
        }
    }
    Ok(total)
}

fn winding(total: f64) -> Result<usize> {
    let n = total / TAU;
    let r = n.round();
    if (n - r).abs() > 0.1 || r < -0.5 {
        return Err(Error::Numeric(format!("winding number {n} is not a nonnegative integer")));
    }
    Ok(r as usize)
}

fn initial_steps(q: &ConcretePolyExp, len: f64) -> usize {
    ((len * q.max_exponent().max(1.0) / 0.5).ceil() as usize).clamp(4, 1 << 20)
}

/// Zeros inside `rect`, counted with multiplicity.
pub fn count_zeros(q: &ConcretePolyExp, rect: &Rectangle, opts: &ZeroOpts) -> Result<usize> {
    let corners = [
        Complex64::new(rect.x0, rect.y0),
        Complex64::new(rect.x1, rect.y0),
        Complex64::new(rect.x1, rect.y1),
        Complex64::new(rect.x0, rect.y1),
    ];
    let mut total = 0.0;
    for i in 0..4 {
        let (a, b) = (corners[i], corners[(i + 1) % 4]);
        let d = b - a;
        total += phase_change(q, |s| a + d * s, |_| d, initial_steps(q, d.norm()), opts.boundary_tol)?;
    }
    winding(total)
}

/// Winding number of `Q` around the circle `|w − c| = r`.
pub fn circle_count(q: &ConcretePolyExp, c: Complex64, r: f64) -> Result<usize> {
    let i = Complex64::new(0.0, 1.0);
    let total = phase_change(
        q,
        |s| c + r * (i * TAU * s).exp(),
        |s| i * TAU * r * (i * TAU * s).exp(),
        initial_steps(q, TAU * r).max(16),
        0.01 * r,
    )?;
    winding(total)
}

/// Newton on `Q⁽ᵏ⁾`, which has a simple zero at a zero of `Q` of
/// multiplicity `k + 1`.
fn newton(q: &ConcretePolyExp, mut w: Complex64, k: u32, max_step: f64) -> Option<Complex64> {
    let start = w;
    for _ in 0..60 {
        let (v, d, _) = scaled(q, w, k);
        if d.norm() == 0.0 || !v.is_finite() {
            return None;
        }
        let dw = v / d;
        w -= dw;
        if (w - start).norm() > max_step {
            return None;
        }
        if dw.norm() <= 1e-15 * (1.0 + w.norm()) {
            return Some(w);
        }
    }
    Some(w)
}

/// Certifies the multiplicity at `w` on a circle of radius the cluster
/// tolerance, doubled while `Q` on the circle is lost in rounding noise.
fn certify(q: &ConcretePolyExp, w: Complex64, fallback: usize, opts: &ZeroOpts) -> LocatedZero {
    let mut r = opts.cluster_tol;
    for _ in 0..12 {
        match circle_count(q, w, r) {
            Ok(m) if m > 0 => return LocatedZero { w, multiplicity: m, residual: relative(q, w) },
            _ => r *= 2.0,
        }
    }
    LocatedZero { w, multiplicity: fallback, residual: relative(q, w) }
}

fn search(q: &ConcretePolyExp, rect: Rectangle, n: usize, opts: &ZeroOpts) -> Result<Vec<LocatedZero>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let diam = rect.diameter();
    if n == 1 {
        if let Some(w) = newton(q, rect.center(), 0, diam) {
            if rect.contains(w, 0.0) && relative(q, w) < opts.residual_tol {
                return Ok(vec![certify(q, w, 1, opts)]);
            }
        }
    }
    if n > 1 {
        // A single zero of multiplicity n is a simple zero of Q^(n-1).
        if let Some(w) = newton(q, rect.center(), n as u32 - 1, diam) {
            if rect.contains(w, 0.0) && relative(q, w) < opts.residual_tol {
                let z = certify(q, w, n, opts);
                if z.multiplicity == n {
                    return Ok(vec![z]);
                }
            }
        }
    }
    if diam < opts.cluster_tol {
        let c = rect.center();
        let w = newton(q, c, n as u32 - 1, diam).filter(|w| rect.contains(*w, diam)).unwrap_or(c);
        return Ok(vec![certify(q, w, n, opts)]);
    }
    let mut last = Error::ZeroOnBoundary;
    for k in 0..opts.retries {
        let fx = 0.45 + 0.1 * golden(2 * k + 1);
        let fy = 0.45 + 0.1 * golden(2 * k + 2);
        let kids = rect.split(fx, fy);
        let counts: Result<Vec<usize>> = kids.iter().map(|r| count_zeros(q, r, opts)).collect();
        match counts {
            Ok(c) if c.iter().sum::<usize>() == n => {
                let found: Result<Vec<Vec<LocatedZero>>> =
                    kids.into_par_iter().zip(c).map(|(r, m)| search(q, r, m, opts)).collect();
                return Ok(found?.into_iter().flatten().collect());
            }
            Ok(c) => {
                last = Error::Numeric(format!("subdivision counts {c:?} do not sum to {n}"));
            }
            Err(e) if e == Error::ZeroOnBoundary => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// Merges zeros closer than the cluster tolerance, keeping the larger
/// certified multiplicity.
fn dedupe(mut zs: Vec<LocatedZero>, tol: f64) -> Vec<LocatedZero> {
    zs.sort_by(|a, b| a.w.re.total_cmp(&b.w.re).then(a.w.im.total_cmp(&b.w.im)));
    let mut out: Vec<LocatedZero> = Vec::new();
    for z in zs {
        match out.iter_mut().find(|o| (o.w - z.w).norm() < tol) {
            Some(o) => {
                if z.multiplicity > o.multiplicity || (z.multiplicity == o.multiplicity && z.residual < o.residual) {
                    *o = z;
                }
            }
            None => out.push(z),
        }
    }
    out
}

/// Every zero in `rect`, sorted lexicographically by `(Re, Im)`.
pub fn zeros_in_rect(q: &ConcretePolyExp, rect: &Rectangle, opts: &ZeroOpts) -> Result<Vec<LocatedZero>> {
    let n = count_zeros(q, rect, opts)?;
    let zs = dedupe(search(q, *rect, n, opts)?, opts.cluster_tol);
    let found: usize = zs.iter().map(|z| z.multiplicity).sum();
    if found != n {
        return Err(Error::Numeric(format!("located {found} zeros but the contour counts {n}")));
    }
    Ok(zs)
}

/// Every zero with `|Im w| ≤ t`, sorted lexicographically by `(Re, Im)`.
pub fn zeros_in_band(q: &ConcretePolyExp, t: f64, opts: &ZeroOpts) -> Result<Vec<LocatedZero>> {
    if !(t > 0.0) {
        return Err(Error::Invalid(format!("band half-width {t} must be positive")));
    }
    let (lo, hi) = q.strip_bounds()?;
    let keep = t + 1e-9 * (1.0 + t);
    let mut last = Error::ZeroOnBoundary;
    for k in 0..=opts.retries {
        let pad = 0.5 * (1.0 + golden(k));
        let dy = if k == 0 { 0.0 } else { 1e-4 * (1.0 + golden(k)) };
        let rect = Rectangle::new(lo - pad, hi + pad, -t - dy, t + dy)?;
        match zeros_in_rect(q, &rect, opts) {
            Ok(zs) => {
                let zs: Vec<LocatedZero> = zs.into_iter().filter(|z| z.w.im.abs() <= keep).collect();
                if let Some(z) = zs.iter().find(|z| z.w.re < lo - 1e-9 || z.w.re > hi + 1e-9) {
                    return Err(Error::Numeric(format!("zero {} outside the strip [{lo}, {hi}]", z.w)));
                }
                return Ok(zs);
            }
            Err(Error::ZeroOnBoundary) => last = Error::ZeroOnBoundary,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn example() -> ConcretePolyExp {
        ConcretePolyExp::from_raw(1.0, &[(-11.0, 2.0), (1.0, 4.0)]).unwrap()
    }

    fn rect(x0: f64, x1: f64, y0: f64, y1: f64) -> Rectangle {
        Rectangle::new(x0, x1, y0, y1).unwrap()
    }

    #[test]
    fn counts_match_explicit_solutions() {
        let q = example();
        let o = ZeroOpts::default();
        assert_eq!(count_zeros(&q, &rect(-2.0, 2.0, -0.1, 3.0), &o).unwrap(), 2);
        assert_eq!(count_zeros(&q, &rect(-2.0, 2.0, 2.9, 3.4), &o).unwrap(), 2);
        let one = ConcretePolyExp::from_raw(1.0, &[(-1.0, 1.0)]).unwrap();
        assert_eq!(count_zeros(&one, &rect(-1.0, 1.0, -1.0, 1.0), &o).unwrap(), 1);
        assert_eq!(count_zeros(&one, &rect(-1.0, 1.0, 0.0, 1.0), &o), Err(Error::ZeroOnBoundary));
    }

    #[test]
    fn band_zeros_of_example() {
        let q = example();
        let zs = zeros_in_band(&q, 3.2, &ZeroOpts::default()).unwrap();
        // Real parts ±ln((11+√117)/2)/2, imaginary parts 0 and ±π.
        let x = ((11.0 + 117f64.sqrt()) / 2.0).ln() / 2.0;
        assert_eq!(zs.len(), 6);
        for z in &zs {
            assert_eq!(z.multiplicity, 1);
            assert!((z.w.re.abs() - x).abs() < 1e-12);
            let k = z.w.im / PI;
            assert!((k - k.round()).abs() < 1e-12 && k.round().abs() <= 1.0);
            assert!(z.residual < 1e-12);
        }
        assert!((x - 1.1948).abs() < 1e-4);
    }

    #[test]
    fn double_zero() {
        let q = ConcretePolyExp::from_raw(1.0, &[(-2.0, 1.0), (1.0, 2.0)]).unwrap();
        let zs = zeros_in_band(&q, 1.0, &ZeroOpts::default()).unwrap();
        assert_eq!(zs.len(), 1);
        assert_eq!(zs[0].multiplicity, 2);
        assert!(zs[0].w.norm() < 1e-9);
    }

    #[test]
    fn zeros_on_the_imaginary_axis() {
        let q = ConcretePolyExp::from_raw(1.0, &[(-1.0, 1.0)]).unwrap();
        assert_eq!(q.strip_bounds().unwrap(), (0.0, 0.0));
        let zs = zeros_in_band(&q, 7.0, &ZeroOpts::default()).unwrap();
        assert_eq!(zs.len(), 3);
        for (z, k) in zs.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((z.w - Complex64::new(0.0, TAU * k)).norm() < 1e-12);
        }
        // A zero exactly on the band edge is still reported.
        assert_eq!(zeros_in_band(&q, TAU, &ZeroOpts::default()).unwrap().len(), 3);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn band_is_conjugation_closed_and_subdivision_additive(
            a0 in prop_oneof![-3.0..-0.2f64, 0.2..3.0f64],
            c in prop::collection::vec(prop_oneof![-3.0..-0.2f64, 0.2..3.0f64], 1..4),
            e in prop::collection::vec(0.3..3.0f64, 1..4),
        ) {
            let raw: Vec<(f64, f64)> = c.iter().zip(&e).map(|(&c, &e)| (c, e)).collect();
            let q = ConcretePolyExp::from_raw(a0, &raw).unwrap();
            prop_assume!(!q.max_tied() && !q.is_constant());
            let o = ZeroOpts::default();
            let zs = zeros_in_band(&q, 4.0, &o).unwrap();
            for z in &zs {
                prop_assert!(z.residual < 1e-9);
                prop_assert!(zs.iter().any(|y| (y.w - z.w.conj()).norm() < 1e-7 && y.multiplicity == z.multiplicity));
            }
            let (lo, hi) = q.strip_bounds().unwrap();
            let whole = rect(lo - 0.7, hi + 0.7, -2.1, 2.3);
            if let Ok(n) = count_zeros(&q, &whole, &o) {
                let parts: Result<Vec<usize>> = whole.split(0.37, 0.61).iter().map(|r| count_zeros(&q, r, &o)).collect();
                if let Ok(p) = parts {
                    prop_assert_eq!(p.iter().sum::<usize>(), n);
                }
            }
        }
    }
}
