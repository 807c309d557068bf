//! Predictor–corrector continuation of individual zeros along
//! piecewise-linear parameter paths.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyexp::{ConcretePolyExp, ParamPoint, PolyExponential};
use crate::zeros::{ser_complex, zeros_in_band, zeros_in_rect, LocatedZero, Rectangle, ZeroOpts};

/// Piecewise-linear path through breakpoints; `s ∈ [0, 1]` is split evenly
/// among the segments.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamPath {
    names: Vec<String>,
    breakpoints: Vec<Vec<f64>>,
}

impl ParamPath {
    pub fn new(names: Vec<String>, breakpoints: Vec<Vec<f64>>) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(Error::Invalid("a path needs at least one breakpoint".into()));
        }
        if let Some(b) = breakpoints.iter().find(|b| b.len() != names.len()) {
            return Err(Error::Invalid(format!("breakpoint has {} coordinates, expected {}", b.len(), names.len())));
        }
        Ok(ParamPath { names, breakpoints })
    }

    /// Straight segment between two points over the same parameters.
    pub fn segment(from: &ParamPoint, to: &ParamPoint) -> Result<Self> {
        if from.names() != to.names() {
            return Err(Error::Invalid("endpoints name different parameters".into()));
        }
        Self::new(from.names().to_vec(), vec![from.values().to_vec(), to.values().to_vec()])
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn breakpoints(&self) -> &[Vec<f64>] {
        &self.breakpoints
    }

    fn locate(&self, s: f64) -> (usize, f64) {
        let k = self.breakpoints.len() - 1;
        if k == 0 {
            return (0, 0.0);
        }
        let x = s.clamp(0.0, 1.0) * k as f64;
        let i = (x.floor() as usize).min(k - 1);
        (i, x - i as f64)
    }

    pub fn at(&self, s: f64) -> Vec<f64> {
        let (i, f) = self.locate(s);
        match self.breakpoints.get(i + 1) {
            None => self.breakpoints[i].clone(),
            Some(b) => self.breakpoints[i].iter().zip(b).map(|(a, b)| a + f * (b - a)).collect(),
        }
    }

    /// `dℓ/ds` on the segment containing `s`.
    pub fn velocity(&self, s: f64) -> Vec<f64> {
        let (i, _) = self.locate(s);
        let k = (self.breakpoints.len() - 1) as f64;
        match self.breakpoints.get(i + 1) {
            None => vec![0.0; self.names.len()],
            Some(b) => self.breakpoints[i].iter().zip(b).map(|(a, b)| k * (b - a)).collect(),
        }
    }

    pub fn point(&self, s: f64) -> ParamPoint {
        ParamPoint::from_f64(&self.names, &self.at(s)).expect("coordinates match names")
    }

    /// Segment boundaries in `s`.
    fn knots(&self) -> Vec<f64> {
        let k = self.breakpoints.len().saturating_sub(1).max(1);
        (0..=k).map(|i| i as f64 / k as f64).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrackStatus {
    Completed,
    ExitedBand,
    Collision,
}

impl std::fmt::Display for TrackStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TrackStatus::Completed => "completed",
            TrackStatus::ExitedBand => "exited-band",
            TrackStatus::Collision => "collision",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sample {
    pub s: f64,
    pub point: Vec<f64>,
    #[serde(serialize_with = "ser_complex")]
    pub w: Complex64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub status: TrackStatus,
    /// Zeros near the stall point when `status` is a collision.
    pub cluster: Vec<LocatedZero>,
}

impl Trajectory {
    pub fn start(&self) -> Complex64 {
        self.samples[0].w
    }

    pub fn end(&self) -> Complex64 {
        self.samples.last().expect("nonempty").w
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrackOpts {
    pub h0: f64,
    pub h_min: f64,
    pub h_max: f64,
    /// Bound on the relative residual of every accepted sample.
    pub residual_tol: f64,
    /// Relative `|∂Q/∂w|` below which a stall counts as a collision.
    pub singular_tol: f64,
    pub max_newton: usize,
    /// Overrides the trust radius derived from the starting configuration.
    pub trust: Option<f64>,
    /// Output grid: every `1/samples` in `s` is hit exactly.
    pub samples: usize,
}

impl Default for TrackOpts {
    fn default() -> Self {
        TrackOpts {
            h0: 1e-2,
            h_min: 1e-8,
            h_max: 0.1,
            residual_tol: 1e-9,
            singular_tol: 1e-8,
            max_newton: 5,
            trust: None,
            samples: 0,
        }
    }
}

/// The poly-exponential frozen at one path point, unmerged.
struct Frozen {
    a0: f64,
    terms: Vec<(f64, f64, f64)>,
    lead: usize,
}

impl Frozen {
    /// Fails with `PathLeftCone` unless every exponent is positive and the
    /// same term (`lead`, or whichever leads at `s` if `None`) is the
    /// strict maximum.
    fn new(q: &PolyExponential, path: &ParamPath, s: f64, lead: Option<usize>) -> Result<Self> {
        let pt = path.point(s);
        let l = q.term_exponents(&pt)?;
        if l.iter().any(|&e| !(e > 0.0)) {
            return Err(Error::PathLeftCone(s));
        }
        let imax = (0..l.len()).max_by(|&i, &j| l[i].total_cmp(&l[j])).ok_or(Error::PathLeftCone(s))?;
        let tied = l.iter().enumerate().any(|(i, &e)| i != imax && e == l[imax]);
        if tied || lead.is_some_and(|k| k != imax) {
            return Err(Error::PathLeftCone(s));
        }
        let v = path.velocity(s);
        let dl = q
            .terms()
            .iter()
            .map(|(_, f)| f.derivative_along(path.names(), &v))
            .collect::<Result<Vec<f64>>>()?;
        let terms = q.terms().iter().zip(l).zip(dl).map(|(((c, _), e), d)| (*c, e, d)).collect();
        Ok(Frozen { a0: q.a0(), terms, lead: imax })
    }

    /// `(Q, ∂Q/∂w, ∂Q/∂s, Σ|terms|)` scaled by a common positive factor.
    fn eval(&self, w: Complex64) -> (Complex64, Complex64, Complex64, f64) {
        let shift = self.terms.iter().map(|t| t.1 * w.re).fold(0.0, f64::max);
        let c0 = self.a0 * (-shift).exp();
        let (mut v, mut dw, mut ds, mut mag) = (Complex64::new(c0, 0.0), Complex64::default(), Complex64::default(), c0.abs());
        for &(c, e, d) in &self.terms {
            let x = c * (w * e - shift).exp();
            v += x;
            dw += x * e;
            ds += x * d * w;
            mag += x.norm();
        }
        (v, dw, ds, mag)
    }

    fn concrete(&self) -> Result<ConcretePolyExp> {
        let raw: Vec<(f64, f64)> = self.terms.iter().map(|t| (t.0, t.1)).collect();
        ConcretePolyExp::from_raw(self.a0, &raw)
    }
}

/// Checks the whole path against the cone before tracking. Exponents are
/// affine along each segment, so positivity and the strict lead of one term
/// hold on a segment iff they hold at both ends; otherwise the first
/// crossing is reported.
pub fn check_path(q: &PolyExponential, path: &ParamPath) -> Result<()> {
    let knots = path.knots();
    let lead = Frozen::new(q, path, 0.0, None)?.lead;
    let ex = |s: f64| q.term_exponents(&path.point(s));
    for w in knots.windows(2) {
        let (a, b) = (ex(w[0])?, ex(w[1])?);
        let mut first: Option<f64> = None;
        let mut note = |ya: f64, yb: f64| {
            if yb <= 0.0 {
                let t = if ya > yb { ya / (ya - yb) } else { 0.0 };
                let s = w[0] + t * (w[1] - w[0]);
                first = Some(first.map_or(s, |f: f64| f.min(s)));
            }
        };
        for i in 0..a.len() {
            note(a[i], b[i]);
            if i != lead {
                note(a[lead] - a[i], b[lead] - b[i]);
            }
        }
        if let Some(s) = first {
            return Err(Error::PathLeftCone(s));
        }
    }
    Ok(())
}

fn relative(f: &Frozen, w: Complex64) -> f64 {
    let (v, _, _, m) = f.eval(w);
    v.norm() / m
}

/// Damped Newton at frozen parameters. Returns the corrected point once
/// the relative residual is below `tol`.
fn correct(f: &Frozen, mut w: Complex64, iters: usize, tol: f64) -> Option<Complex64> {
    let mut r = relative(f, w);
    for _ in 0..iters {
        let (v, dw, _, _) = f.eval(w);
        if dw.norm() == 0.0 {
            return None;
        }
        let step = v / dw;
        let mut damp = 1.0;
        loop {
            let trial = w - step * damp;
            let rt = relative(f, trial);
            if rt < r || damp < 1.0 / 16.0 {
                w = trial;
                r = rt;
                break;
            }
            damp /= 2.0;
        }
        if r < tol * 1e-3 || step.norm() * damp < 1e-15 * (1.0 + w.norm()) {
            break;
        }
    }
    (r < tol && w.is_finite()).then_some(w)
}

/// Trust radius from the distance to the nearest other zero at the start.
fn start_trust(q: &PolyExponential, path: &ParamPath, w0: Complex64) -> Result<f64> {
    let f = Frozen::new(q, path, 0.0, None)?;
    let qc = f.concrete()?;
    let reach = 2.0;
    let rect = Rectangle::new(w0.re - reach, w0.re + reach, w0.im - reach, w0.im + reach)?;
    let others = zeros_in_rect(&qc, &rect, &ZeroOpts::default())
        .map(|zs| zs.into_iter().map(|z| (z.w - w0).norm()).filter(|d| *d > 1e-6).fold(reach, f64::min))
        .unwrap_or(reach);
    Ok(0.5 * others)
}

fn track_inner(
    q: &PolyExponential,
    path: &ParamPath,
    w0: Complex64,
    trust: f64,
    band: Option<f64>,
    opts: &TrackOpts,
) -> Result<Trajectory> {
    check_path(q, path)?;
    let f = Frozen::new(q, path, 0.0, None)?;
    let r0 = relative(&f, w0);
    let w0 = if r0 < opts.residual_tol {
        w0
    } else {
        // A slightly inaccurate start is polished, anything else rejected.
        correct(&f, w0, opts.max_newton, opts.residual_tol)
            .filter(|w| (w - w0).norm() < 1e-6)
            .ok_or_else(|| Error::Invalid(format!("start {w0} is not a zero (relative residual {r0:.2e})")))?
    };
    let (_, dw, _, m) = f.eval(w0);
    if dw.norm() < opts.singular_tol * m {
        return Err(Error::Invalid(format!("start {w0} is a multiple zero")));
    }
    track_from(q, path, w0, trust, band, opts, f)
}

fn track_from(
    q: &PolyExponential,
    path: &ParamPath,
    w0: Complex64,
    trust: f64,
    band: Option<f64>,
    opts: &TrackOpts,
    mut f: Frozen,
) -> Result<Trajectory> {
    let mut stops = path.knots();
    if opts.samples > 0 {
        stops.extend((1..opts.samples).map(|j| j as f64 / opts.samples as f64));
    }
    stops.sort_by(f64::total_cmp);
    stops.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    let mut samples = vec![Sample { s: 0.0, point: path.at(0.0), w: w0, residual: relative(&f, w0) }];
    let (mut s, mut w, mut h) = (0.0f64, w0, opts.h0);
    while s < 1.0 {
        let next_stop = stops.iter().copied().find(|&x| x > s + 1e-15).unwrap_or(1.0);
        let step = h.min(next_stop - s);
        let (_, dw, ds, _) = f.eval(w);
        let pred = w - step * ds / dw;
        let s1 = if next_stop - s <= h { next_stop } else { s + step };
        let f1 = Frozen::new(q, path, s1, Some(f.lead))?;
        let accepted = correct(&f1, pred, opts.max_newton, opts.residual_tol)
            .filter(|c| (c - pred).norm() < trust && (c - w).norm() < trust);
        match accepted {
            Some(c) => {
                w = c;
                s = s1;
                // At a knot `f1` already carries the velocity of the next segment.
                let residual = relative(&f1, w);
                samples.push(Sample { s, point: path.at(s), w, residual });
                f = f1;
                if let Some(t) = band {
                    if w.im.abs() > t {
                        return Ok(Trajectory { samples, status: TrackStatus::ExitedBand, cluster: vec![] });
                    }
                }
                h = (2.0 * step).min(opts.h_max);
            }
            None => {
                h = step / 2.0;
                if h < opts.h_min {
                    let qc = f.concrete()?;
                    let r = 10.0 * trust.max(1e-6);
                    let cluster = Rectangle::new(w.re - r, w.re + r, w.im - r, w.im + r)
                        .and_then(|rect| zeros_in_rect(&qc, &rect, &ZeroOpts::default()))
                        .unwrap_or_default();
                    return Ok(Trajectory { samples, status: TrackStatus::Collision, cluster });
                }
            }
        }
    }
    Ok(Trajectory { samples, status: TrackStatus::Completed, cluster: vec![] })
}

/// Follows the zero `w0` of `Q(·, ℓ(0))` to `s = 1`.
pub fn track(q: &PolyExponential, path: &ParamPath, w0: Complex64, opts: &TrackOpts) -> Result<Trajectory> {
    let trust = match opts.trust {
        Some(t) => t,
        None => start_trust(q, path, w0)?,
    };
    track_inner(q, path, w0, trust, None, opts)
}

/// One trajectory per zero of `Q(·, ℓ(0))` with `|Im w| ≤ t`.
pub fn track_all(q: &PolyExponential, path: &ParamPath, t: f64, opts: &TrackOpts) -> Result<Vec<Trajectory>> {
    let f = Frozen::new(q, path, 0.0, None)?;
    let starts = zeros_in_band(&f.concrete()?, t, &ZeroOpts::default())?;
    let ws: Vec<Complex64> = starts.iter().map(|z| z.w).collect();
    ws.par_iter()
        .map(|&w0| {
            let nearest = ws.iter().map(|v| (v - w0).norm()).filter(|d| *d > 1e-6).fold(2.0, f64::min);
            let trust = opts.trust.unwrap_or(0.5 * nearest);
            track_inner(q, path, w0, trust, Some(t), opts)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn golden_q() -> PolyExponential {
        PolyExponential::plain(1.0, &[1.0, -1.0]).unwrap()
    }

    fn path(a: &[f64], b: &[f64]) -> ParamPath {
        ParamPath::new(vec!["l1".into(), "l2".into()], vec![a.to_vec(), b.to_vec()]).unwrap()
    }

    #[test]
    fn homogeneity_halves_the_zero() {
        let w0 = Complex64::new(((1.0 + 5f64.sqrt()) / 2.0).ln(), 0.0);
        let t = track(&golden_q(), &path(&[1.0, 2.0], &[2.0, 4.0]), w0, &TrackOpts::default()).unwrap();
        assert_eq!(t.status, TrackStatus::Completed);
        assert!((t.end() - w0 / 2.0).norm() < 1e-8);
        assert!(t.samples.iter().all(|s| s.residual < 1e-9));
        // Complex starts too.
        let w1 = Complex64::new(w0.re, 2.0 * std::f64::consts::PI);
        let t = track(&golden_q(), &path(&[1.0, 2.0], &[2.0, 4.0]), w1, &TrackOpts::default()).unwrap();
        assert!((t.end() - w1 / 2.0).norm() < 1e-8);
    }

    #[test]
    fn constant_path_is_constant() {
        let p = path(&[1.0, 2.0], &[1.0, 2.0]);
        let ts = track_all(&golden_q(), &p, 4.0, &TrackOpts::default()).unwrap();
        assert!(!ts.is_empty());
        for t in &ts {
            assert_eq!(t.status, TrackStatus::Completed);
            assert!((t.end() - t.start()).norm() < 1e-12);
        }
    }

    #[test]
    fn doubling_path_halves_every_zero() {
        let ts = track_all(&golden_q(), &path(&[1.0, 2.0], &[2.0, 4.0]), 7.0, &TrackOpts::default()).unwrap();
        for t in &ts {
            assert_eq!(t.status, TrackStatus::Completed);
            assert!((t.end() - t.start() / 2.0).norm() < 1e-8);
        }
        // The sample grid is respected and deterministic.
        let o = TrackOpts { samples: 8, ..TrackOpts::default() };
        let a = track_all(&golden_q(), &path(&[1.0, 2.0], &[2.0, 4.0]), 7.0, &o).unwrap();
        let b = track_all(&golden_q(), &path(&[1.0, 2.0], &[2.0, 4.0]), 7.0, &o).unwrap();
        assert_eq!(a, b);
        assert!(a[0].samples.iter().any(|s| (s.s - 0.375).abs() < 1e-15));
    }

    #[test]
    fn leaving_the_cone_is_reported() {
        let p = path(&[1.0, 2.0], &[3.0, 2.0]);
        let w0 = Complex64::new(((1.0 + 5f64.sqrt()) / 2.0).ln(), 0.0);
        let err = track(&golden_q(), &p, w0, &TrackOpts { trust: Some(0.5), ..TrackOpts::default() });
        assert!(matches!(err, Err(Error::PathLeftCone(s)) if (s - 0.5).abs() < 1e-12));
    }

    #[test]
    fn example_one_perron_root_moves_to_the_cube_root() {
        let q = fixtures::example1();
        let a = fixtures::example1_point();
        let b = fixtures::example1_point_prime();
        let p = ParamPath::segment(&a, &b).unwrap();
        let w0 = Complex64::new(((11.0 + 117f64.sqrt()) / 2.0).sqrt().ln(), 0.0);
        let t = track(&q, &p, w0, &TrackOpts::default()).unwrap();
        assert_eq!(t.status, TrackStatus::Completed);
        let m3 = t.end().re.exp().powi(3);
        assert!((m3 - 9.215).abs() < 5e-3, "{m3}");
    }
}
