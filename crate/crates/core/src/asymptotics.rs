//! Limit sets of real parts, boundary spectra with infinite exponents,
//! growth rates of zeros near the boundary of the cone, and the Perron
//! frontier.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::continuation::{track, ParamPath, TrackOpts, TrackStatus, Trajectory};
use crate::error::{Error, Result};
use crate::polyexp::{iota, ConcretePolyExp, ParamPoint, PolyExponential};
use crate::zeros::{golden, ser_complex, zeros_in_rect, LocatedZero, Rectangle, ZeroOpts};

/// Sorted, disjoint closed intervals.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
}

impl IntervalSet {
    /// Sorts and merges overlapping intervals.
    pub fn new(mut v: Vec<(f64, f64)>) -> Self {
        v.retain(|(a, b)| a <= b);
        v.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut out: Vec<(f64, f64)> = Vec::new();
        for (a, b) in v {
            match out.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => out.push((a, b)),
            }
        }
        IntervalSet { intervals: out }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|&(a, b)| a <= x && x <= b)
    }

    pub fn sup(&self) -> Option<f64> {
        self.intervals.last().map(|i| i.1)
    }

    pub fn intersection(&self, other: &IntervalSet) -> IntervalSet {
        let mut v = Vec::new();
        for &(a, b) in &self.intervals {
            for &(c, d) in &other.intervals {
                let (lo, hi) = (a.max(c), b.min(d));
                if lo <= hi {
                    v.push((lo, hi));
                }
            }
        }
        IntervalSet::new(v)
    }

    pub fn symmetric_difference_measure(&self, other: &IntervalSet) -> f64 {
        self.measure() + other.measure() - 2.0 * self.intersection(other).measure()
    }
}

/// `F(x) = Σ rⱼ − 2 max rⱼ` for moduli `r₀ = |a₀|`, `rᵢ = |aᵢ|e^{pᵢx}`,
/// divided by `max rⱼ`. Nonnegative exactly when the moduli close up into a
/// polygon, i.e. when unit phases can cancel the sum.
fn polygon_slack(a0: f64, terms: &[(f64, f64)], x: f64) -> f64 {
    let logs: Vec<f64> = std::iter::once(a0.abs().ln())
        .chain(terms.iter().map(|&(c, p)| c.abs().ln() + p * x))
        .collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = logs.iter().map(|l| (l - top).exp()).sum();
    sum - 2.0
}

/// `Λ(p) ∩ [lo, hi]` for `a₀ + Σ aᵢ e^{pᵢ w}` given as `(aᵢ, pᵢ)`; terms are
/// not merged, every coordinate carries its own phase.
pub fn limit_set_raw(a0: f64, terms: &[(f64, f64)], lo: f64, hi: f64) -> Result<IntervalSet> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Invalid(format!("bad window [{lo}, {hi}]")));
    }
    if a0 == 0.0 {
        return Err(Error::ConstantTermVanished);
    }
    if let Some(p) = terms.iter().map(|t| t.1).find(|p| !(*p > 0.0)) {
        return Err(Error::NotInCone(format!("coordinate {p} is not positive")));
    }
    let terms: Vec<(f64, f64)> = terms.iter().copied().filter(|t| t.0 != 0.0).collect();
    match terms.len() {
        0 => return Ok(IntervalSet::default()),
        1 => {
            // Two moduli balance at a single point.
            let (c, p) = terms[0];
            let x = (a0.abs() / c.abs()).ln() / p;
            let v = if lo <= x && x <= hi { vec![(x, x)] } else { vec![] };
            return Ok(IntervalSet::new(v));
        }
        _ => {}
    }
    let f = |x: f64| polygon_slack(a0, &terms, x);
    const N: usize = 4096;
    let xs: Vec<f64> = (0..=N).map(|k| lo + (hi - lo) * k as f64 / N as f64).collect();
    let vals: Vec<f64> = xs.par_iter().map(|&x| f(x)).collect();
    let root = |mut a: f64, mut b: f64| {
        let fa_pos = f(a) >= 0.0;
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if (f(m) >= 0.0) == fa_pos {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    };
    let mut out = Vec::new();
    let mut start = (vals[0] >= 0.0).then_some(lo);
    for k in 0..N {
        let (inside_a, inside_b) = (vals[k] >= 0.0, vals[k + 1] >= 0.0);
        if inside_a != inside_b {
            let x = root(xs[k], xs[k + 1]);
            if inside_b {
                start = Some(x);
            } else if let Some(s) = start.take() {
                out.push((s, x));
            }
        }
    }
    if let Some(s) = start {
        out.push((s, hi));
    }
    Ok(IntervalSet::new(out))
}

/// `Λ(p) ∩ window` for a symbolic poly-exponential at `p`.
pub fn limit_set(q: &PolyExponential, p: &ParamPoint, window: (f64, f64)) -> Result<IntervalSet> {
    let ex = q.term_exponents(p)?;
    let terms: Vec<(f64, f64)> = q.terms().iter().zip(ex).map(|((c, _), e)| (*c, e)).collect();
    limit_set_raw(q.a0(), &terms, window.0, window.1)
}

/// Brute-force `Λ(p)` for integer `p`: real parts `ln|t|` of the roots of
/// `a₀ + Σ aᵢξᵢ t^{pᵢ}` over an `n`-point phase grid for each `ξᵢ` (the
/// phase of `a₀` is fixed by rotation), grouped into intervals wherever
/// consecutive real parts are closer than `gap`.
pub fn phase_grid_limit_set(
    a0: f64,
    coeffs: &[f64],
    p: &[usize],
    n: usize,
    window: (f64, f64),
    gap: f64,
) -> IntervalSet {
    let m = coeffs.len();
    let mut idx = vec![0usize; m];
    let mut phases: Vec<Vec<usize>> = Vec::new();
    loop {
        phases.push(idx.clone());
        let mut k = 0;
        while k < m {
            idx[k] += 1;
            if idx[k] < n {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == m {
            break;
        }
    }
    let deg = p.iter().copied().max().unwrap_or(0);
    let mut re: Vec<f64> = phases
        .par_iter()
        .flat_map_iter(|ph| {
            let mut c = vec![Complex64::new(0.0, 0.0); deg + 1];
            c[0] += a0;
            for i in 0..m {
                let th = std::f64::consts::TAU * ph[i] as f64 / n as f64;
                c[p[i]] += coeffs[i] * Complex64::from_polar(1.0, th);
            }
            complex_roots(&c).into_iter().map(|t| t.norm().ln())
        })
        .filter(|x| *x >= window.0 && *x <= window.1)
        .collect();
    re.sort_by(f64::total_cmp);
    let mut out: Vec<(f64, f64)> = Vec::new();
    for x in re {
        match out.last_mut() {
            Some(last) if x - last.1 <= gap => last.1 = x,
            _ => out.push((x, x)),
        }
    }
    IntervalSet::new(out)
}

/// Roots of a dense complex polynomial by Durand–Kerner iteration; the
/// brute-force grids only need small degrees.
fn complex_roots(c: &[Complex64]) -> Vec<Complex64> {
    let mut c = c.to_vec();
    while c.last().is_some_and(|x| x.norm() == 0.0) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return vec![];
    }
    if n == 1 {
        return vec![-c[0] / c[1]];
    }
    let lead = c[n];
    let monic: Vec<Complex64> = c.iter().map(|x| x / lead).collect();
    let eval = |z: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a);
    let radius = 1.0 + monic[..n].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let seed = Complex64::from_polar(1.0, 0.4);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * radius.min(2.0)).collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let denom: Complex64 = (0..n).filter(|&j| j != i).map(|j| z[i] - z[j]).product();
            let dz = eval(z[i]) / denom;
            z[i] -= dz;
            moved = moved.max(dz.norm() / (1.0 + z[i].norm()));
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// A point of `(0, ∞]ᵐ`; `None` is an infinite coordinate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtendedParam(pub Vec<Option<f64>>);

impl ExtendedParam {
    pub fn finite(v: &[f64]) -> Self {
        ExtendedParam(v.iter().map(|&x| Some(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn infinite_indices(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, x)| x.is_none()).map(|(i, _)| i).collect()
    }

    pub fn min_finite(&self) -> Option<f64> {
        self.0.iter().flatten().copied().reduce(f64::min)
    }

    /// Parses coordinates such as `1`, `2.5`, `26/23` or `inf`.
    pub fn parse(text: &str) -> Result<Self> {
        text.split(',')
            .map(|s| {
                let s = s.trim();
                if s.eq_ignore_ascii_case("inf") || s == "∞" {
                    Ok(None)
                } else {
                    crate::form::parse_rational(s)
                        .map(|r| crate::form::rat_to_f64(&r))
                        .or_else(|_| s.parse::<f64>().map_err(|e| Error::Parse(format!("`{s}`: {e}"))))
                        .map(Some)
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(ExtendedParam)
    }
}

impl std::fmt::Display for ExtendedParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.map_or("inf".to_string(), |v| v.to_string())).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Left,
    Right,
    Axis,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryZero {
    #[serde(serialize_with = "ser_complex")]
    pub w: Complex64,
    pub multiplicity: usize,
    pub side: Side,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundarySpectrum {
    /// Zeros of the truncated `Q` with `Re w < 0`.
    pub left: Vec<BoundaryZero>,
    /// Negated zeros of the truncated `Q̄` with `Re w < 0`.
    pub right: Vec<BoundaryZero>,
    /// Zeros within the axis tolerance of `Re w = 0`, from either side.
    pub axis: Vec<BoundaryZero>,
    pub band: f64,
}

/// Distance from the imaginary axis below which a zero is not assigned to
/// a half-plane.
pub const AXIS_TOL: f64 = 1e-9;

/// Zeros of `a₀ + Σ aᵢe^{eᵢw}` with `Re w ≤ AXIS_TOL` and `|Im w| ≤ t`.
fn left_zeros(a0: f64, terms: &[(f64, f64)], t: f64, opts: &ZeroOpts) -> Result<Vec<LocatedZero>> {
    let qc = ConcretePolyExp::from_raw(a0, terms)?;
    if qc.is_constant() {
        return Err(Error::DegenerateTruncation);
    }
    let m = qc.nonconstant().len() as f64;
    let big = qc.nonconstant().iter().map(|t| t.0.abs()).fold(0.0, f64::max);
    let lmin = qc.min_exponent().expect("non-constant");
    let c_minus = ((qc.a0().abs() / (m * big)).ln() / lmin).min(0.0);
    let keep = t + 1e-9 * (1.0 + t);
    let mut last = Error::ZeroOnBoundary;
    for k in 0..=opts.retries {
        let pad = 0.5 * (1.0 + golden(k));
        let right = 0.01 * (1.0 + golden(k + 3));
        let dy = if k == 0 { 0.0 } else { 1e-4 * (1.0 + golden(k)) };
        let rect = Rectangle::new(c_minus - pad, right, -t - dy, t + dy)?;
        match zeros_in_rect(&qc, &rect, opts) {
            Ok(zs) => {
                return Ok(zs.into_iter().filter(|z| z.w.im.abs() <= keep && z.w.re <= AXIS_TOL).collect());
            }
            Err(Error::ZeroOnBoundary) => last = Error::ZeroOnBoundary,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// `ℤ(p, q) = ℤ₋(Q, p) ∪ −ℤ₋(Q̄, q)` restricted to `|Im| ≤ t`.
///
/// `coeffs[i]` pairs with `p[i]`; `coeffs[lead]` is the dominant term, which
/// becomes the constant of `Q̄`. `q` is indexed like `ℓ̄`: first the
/// coordinate of `a₀`, then the non-dominant terms in order. Infinite
/// coordinates drop their term.
pub fn boundary_spectrum(
    a0: f64,
    coeffs: &[f64],
    lead: usize,
    p: &ExtendedParam,
    q: &ExtendedParam,
    t: f64,
    opts: &ZeroOpts,
) -> Result<BoundarySpectrum> {
    let m = coeffs.len();
    if p.len() != m || q.len() != m || lead >= m {
        return Err(Error::Invalid(format!("need {m} coordinates in p and q and a valid lead index")));
    }
    let left_terms: Vec<(f64, f64)> =
        coeffs.iter().zip(&p.0).filter_map(|(&c, x)| x.map(|e| (c, e))).collect();
    let mut bar_coeffs = vec![a0];
    bar_coeffs.extend(coeffs.iter().enumerate().filter(|(i, _)| *i != lead).map(|(_, c)| *c));
    let right_terms: Vec<(f64, f64)> =
        bar_coeffs.iter().zip(&q.0).filter_map(|(&c, x)| x.map(|e| (c, e))).collect();
    let mut out = BoundarySpectrum { left: vec![], right: vec![], axis: vec![], band: t };
    for z in left_zeros(a0, &left_terms, t, opts)? {
        let side = if z.w.re < -AXIS_TOL { Side::Left } else { Side::Axis };
        let bz = BoundaryZero { w: z.w, multiplicity: z.multiplicity, side };
        if side == Side::Left { out.left.push(bz) } else { out.axis.push(bz) }
    }
    for z in left_zeros(coeffs[lead], &right_terms, t, opts)? {
        let side = if z.w.re < -AXIS_TOL { Side::Right } else { Side::Axis };
        let bz = BoundaryZero { w: -z.w, multiplicity: z.multiplicity, side };
        if side == Side::Right { out.right.push(bz) } else { out.axis.push(bz) }
    }
    for v in [&mut out.left, &mut out.right, &mut out.axis] {
        v.sort_by(|a, b| a.w.re.total_cmp(&b.w.re).then(a.w.im.total_cmp(&b.w.im)));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthKind {
    /// `|e^{−ψ}| ~ e^{λ/min ℓ}`.
    LeftRate,
    /// `|e^{ψ}| ~ e^{λ/min ℓ̄}`.
    RightRate,
    Bounded,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthSample {
    pub x: f64,
    #[serde(serialize_with = "ser_complex")]
    pub psi: Complex64,
    pub min_l: f64,
    pub min_lbar: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthClassification {
    pub kind: GrowthKind,
    /// Rate from the fit (the limit of `Re ψ` itself when bounded).
    pub lambda: f64,
    /// Change of the extrapolated limit between the whole last decade and
    /// its lower half.
    pub drift: f64,
    pub samples: Vec<GrowthSample>,
}

/// Least-squares `y = a + b x`; returns `a`.
fn intercept(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return pts.first().map_or(f64::NAN, |p| p.1);
    }
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (mx, my) = (sx / n, sy / n);
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return my;
    }
    my - (sxy / sxx) * mx
}

/// Extrapolated `x → 0` limit of `y(x)` over the last decade, and its drift.
fn limit_fit(pts: &[(f64, f64)]) -> (f64, f64) {
    let xmin = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let decade: Vec<(f64, f64)> = pts.iter().copied().filter(|p| p.0 <= 10.0 * xmin * (1.0 + 1e-12)).collect();
    let half: Vec<(f64, f64)> = decade.iter().copied().filter(|p| p.0 <= 10f64.sqrt() * xmin * (1.0 + 1e-12)).collect();
    let a = intercept(&decade);
    let b = intercept(if half.len() >= 2 { &half } else { &decade });
    (b, (a - b).abs())
}

/// Classifies how a tracked zero behaves as the parameters approach the
/// boundary, from samples ordered by decreasing `x`.
pub fn growth_rate(samples: Vec<GrowthSample>, tol: f64) -> Result<GrowthClassification> {
    if samples.len() < 3 {
        return Err(Error::Inconclusive("need at least three samples".into()));
    }
    let pick = |f: &dyn Fn(&GrowthSample) -> f64| -> Vec<(f64, f64)> { samples.iter().map(|s| (s.x, f(s))).collect() };
    let (re, re_drift) = limit_fit(&pick(&|s| s.psi.re));
    let (left, left_drift) = limit_fit(&pick(&|s| -s.psi.re * s.min_l));
    let (right, right_drift) = limit_fit(&pick(&|s| s.psi.re * s.min_lbar));
    let settled = |v: f64, d: f64| d <= tol * v.abs().max(1.0);
    let (kind, lambda, drift) = if right > tol && settled(right, right_drift) {
        (GrowthKind::RightRate, right, right_drift)
    } else if left > tol && settled(left, left_drift) {
        (GrowthKind::LeftRate, left, left_drift)
    } else if settled(re, re_drift) {
        (GrowthKind::Bounded, re, re_drift)
    } else {
        return Err(Error::Inconclusive(format!(
            "Re ψ drifts by {re_drift:.3e}; rescaled limits {left:.4} (left) and {right:.4} (right) not settled"
        )));
    };
    Ok(GrowthClassification { kind, lambda, drift, samples })
}

/// Tracks `w0` along the curve `x ↦ curve(x)` from `x_start` down to
/// `x_end`, through `per_decade` log-spaced breakpoints per decade.
pub fn track_to_boundary(
    q: &PolyExponential,
    curve: impl Fn(f64) -> ParamPoint,
    x_start: f64,
    x_end: f64,
    per_decade: usize,
    w0: Complex64,
    opts: &TrackOpts,
) -> Result<(Trajectory, Vec<GrowthSample>)> {
    if !(x_start > x_end && x_end > 0.0) {
        return Err(Error::Invalid("need x_start > x_end > 0".into()));
    }
    let decades = (x_start / x_end).log10();
    let k = ((decades * per_decade as f64).ceil() as usize).max(1);
    let xs: Vec<f64> = (0..=k).map(|i| x_start * (x_end / x_start).powf(i as f64 / k as f64)).collect();
    let pts: Vec<ParamPoint> = xs.iter().map(|&x| curve(x)).collect();
    let names = pts[0].names().to_vec();
    let path = ParamPath::new(names, pts.iter().map(|p| p.values().to_vec()).collect())?;
    let traj = track(q, &path, w0, opts)?;
    let mut out = Vec::new();
    for (i, (x, pt)) in xs.iter().zip(&pts).enumerate() {
        let s = i as f64 / k as f64;
        let Some(sample) = traj.samples.iter().find(|smp| (smp.s - s).abs() < 1e-12) else { continue };
        let l = q.term_exponents(pt)?;
        let img = iota(&l)?;
        let min_l = l.iter().copied().fold(f64::INFINITY, f64::min);
        let lm = l.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min_lbar = lm / img.q[0];
        out.push(GrowthSample { x: *x, psi: sample.w, min_l, min_lbar });
    }
    if traj.status != TrackStatus::Completed {
        return Err(Error::Inconclusive(format!("tracking stopped with status {}", traj.status)));
    }
    Ok((traj, out))
}

/// `ω(ℓ)`: the largest real `x` with `e^{ℓ_d x} = Σ_{i≠d} e^{ℓᵢx} + 1`,
/// `ℓ_d` the strictly largest coordinate.
pub fn perron_frontier(l: &[f64]) -> Result<f64> {
    iota(l).map_err(|_| Error::NoFrontier)?;
    let d = (0..l.len()).max_by(|&i, &j| l[i].total_cmp(&l[j])).expect("nonempty");
    let ld = l[d];
    // e^{−ℓ_d x}·(defining difference): strictly increasing in x.
    let h = |x: f64| {
        1.0 - (-ld * x).exp()
            - l.iter().enumerate().filter(|(i, _)| *i != d).map(|(_, li)| ((li - ld) * x).exp()).sum::<f64>()
    };
    if h(0.0) >= 0.0 {
        return Ok(0.0);
    }
    let mut hi = 1.0 / ld;
    while h(hi) < 0.0 {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::NoFrontier);
        }
    }
    let (mut a, mut b) = (0.0, hi);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if h(m) < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    let mut x = 0.5 * (a + b);
    // Newton polish on the unscaled equation.
    for _ in 0..3 {
        let g: f64 = (ld * x).exp() - l.iter().enumerate().filter(|(i, _)| *i != d).map(|(_, li)| (li * x).exp()).sum::<f64>() - 1.0;
        let dg: f64 = ld * (ld * x).exp()
            - l.iter().enumerate().filter(|(i, _)| *i != d).map(|(_, li)| li * (li * x).exp()).sum::<f64>();
        if dg == 0.0 {
            break;
        }
        let nx = x - g / dg;
        if !(nx > a - 1e-12 && nx < b + 1e-12) {
            break;
        }
        x = nx;
    }
    Ok(x)
}
