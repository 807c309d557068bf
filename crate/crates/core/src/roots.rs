//! Simultaneous polynomial root finding: Aberth–Ehrlich iteration seeded
//! from the Newton polygon, with a companion-matrix fallback and Newton
//! polishing.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Real polynomial stored sparsely as `(exponent, coefficient)`, exponents
/// strictly increasing, no zero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseReal {
    terms: Vec<(usize, f64)>,
}

impl SparseReal {
    pub fn new(mut terms: Vec<(usize, f64)>) -> Self {
        terms.retain(|t| t.1 != 0.0);
        terms.sort_by_key(|t| t.0);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match merged.last_mut() {
                Some(last) if last.0 == e => last.1 += c,
                _ => merged.push((e, c)),
            }
        }
        merged.retain(|t| t.1 != 0.0);
        SparseReal { terms: merged }
    }

    pub fn from_dense(c: &[f64]) -> Self {
        Self::new(c.iter().copied().enumerate().collect())
    }

    pub fn terms(&self) -> &[(usize, f64)] {
        &self.terms
    }

    pub fn degree(&self) -> usize {
        self.terms.last().map(|t| t.0).unwrap_or(0)
    }

    pub fn low_order(&self) -> usize {
        self.terms.first().map(|t| t.0).unwrap_or(0)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.terms.iter().map(|&(e, c)| c * z.powu(e as u32)).sum()
    }

    /// `|p(z)| / Σ|cⱼ||z|^{eⱼ}`, computed in log scale so large degrees do
    /// not overflow.
    pub fn relative_residual(&self, z: Complex64) -> f64 {
        let (num, den) = self.scaled_sums(z);
        num.0.norm() / den
    }

    /// Returns `((p, p'·z), Σ|terms|)` all divided by the largest term size.
    fn scaled_sums(&self, z: Complex64) -> ((Complex64, Complex64), f64) {
        let lz = z.ln();
        let logs: Vec<f64> = self
            .terms
            .iter()
            .map(|&(e, c)| c.abs().ln() + e as f64 * lz.re)
            .collect();
        let s = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut p = Complex64::new(0.0, 0.0);
        let mut dpz = Complex64::new(0.0, 0.0);
        let mut mag = 0.0;
        for (&(e, c), &lg) in self.terms.iter().zip(&logs) {
            let size = (lg - s).exp();
            let phase = Complex64::new(0.0, e as f64 * lz.im).exp();
            let term = c.signum() * size * phase;
            p += term;
            dpz += e as f64 * term;
            mag += size;
        }
        ((p, dpz), mag)
    }

    /// Newton correction `p(z)/p'(z)`.
    pub fn newton_ratio(&self, z: Complex64) -> Complex64 {
        if z == Complex64::new(0.0, 0.0) {
            let p = self.eval(z);
            let dp = self.derivative_at(z);
            return p / dp;
        }
        let ((p, dpz), _) = self.scaled_sums(z);
        p * z / dpz
    }

    fn derivative_at(&self, z: Complex64) -> Complex64 {
        self.terms
            .iter()
            .filter(|t| t.0 > 0)
            .map(|&(e, c)| c * e as f64 * z.powu(e as u32 - 1))
            .sum()
    }

    /// Initial radii from the upper convex hull of `(e, ln|c|)`: one radius
    /// per root, in hull order.
    fn polygon_radii(&self) -> Vec<f64> {
        let pts: Vec<(f64, f64)> = self
            .terms
            .iter()
            .map(|&(e, c)| (e as f64, c.abs().ln()))
            .collect();
        let mut hull: Vec<(f64, f64)> = Vec::new();
        for p in pts {
            while hull.len() >= 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
                if cross >= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        let mut radii = Vec::new();
        for w in hull.windows(2) {
            let n = (w[1].0 - w[0].0) as usize;
            let r = ((w[0].1 - w[1].1) / (w[1].0 - w[0].0)).exp();
            radii.extend(std::iter::repeat_n(r, n));
        }
        radii
    }

    /// Drops the `t^k` factor, returning the polynomial with nonzero
    /// constant term.
    pub fn deflate_zero(&self) -> SparseReal {
        let k = self.low_order();
        SparseReal { terms: self.terms.iter().map(|&(e, c)| (e - k, c)).collect() }
    }

    fn dense(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.degree() + 1];
        for &(e, a) in &self.terms {
            c[e] = a;
        }
        c
    }
}

/// Outcome of a simultaneous solve.
#[derive(Clone, Debug)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    pub converged: bool,
}

/// All roots of `p` (which must have a nonzero constant term) by
/// Aberth–Ehrlich iteration; falls back to companion eigenvalues if the
/// iteration stalls, then polishes each root by Newton.
pub fn roots(p: &SparseReal) -> RootSet {
    let n = p.degree();
    if n == 0 {
        return RootSet { roots: Vec::new(), converged: true };
    }
    if n == 1 {
        let t = p.terms();
        let c0 = t.iter().find(|x| x.0 == 0).map(|x| x.1).unwrap_or(0.0);
        let c1 = t.iter().find(|x| x.0 == 1).map(|x| x.1).unwrap_or(1.0);
        return RootSet { roots: vec![Complex64::new(-c0 / c1, 0.0)], converged: true };
    }
    let mut set = aberth(p, 1000);
    if !set.converged && n <= 600 {
        if let Some(eig) = companion_roots(&p.dense()) {
            set = RootSet { roots: eig, converged: true };
        }
    }
    for z in set.roots.iter_mut() {
        *z = polish(p, *z, 8);
    }
    set
}

/// Aberth–Ehrlich with Gauss–Seidel updates.
pub fn aberth(p: &SparseReal, max_iter: usize) -> RootSet {
    let n = p.degree();
    let radii = p.polygon_radii();
    debug_assert_eq!(radii.len(), n);
    let mut z: Vec<Complex64> = radii
        .iter()
        .enumerate()
        .map(|(k, &r)| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(r, theta)
        })
        .collect();
    let mut done = vec![false; n];
    for _ in 0..max_iter {
        let mut all = true;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let ratio = p.newton_ratio(z[k]);
            let s: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| {
                    let d = z[k] - z[j];
                    if d.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let corr = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if !corr.is_finite() {
                all = false;
                continue;
            }
            z[k] -= corr;
            if corr.norm() <= 4.0 * f64::EPSILON * z[k].norm() {
                done[k] = true;
            } else {
                all = false;
            }
        }
        if all {
            return RootSet { roots: z, converged: true };
        }
    }
    let converged = z.iter().all(|&w| p.relative_residual(w) < 1e-10);
    RootSet { roots: z, converged }
}

/// Eigenvalues of the companion matrix of dense ascending coefficients.
pub fn companion_roots(c: &[f64]) -> Option<Vec<Complex64>> {
    let n = c.len().checked_sub(1)?;
    if n == 0 || c[n] == 0.0 {
        return None;
    }
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i] / c[n];
    }
    Some(m.complex_eigenvalues().iter().copied().collect())
}

/// A few Newton steps, stopping when the correction no longer shrinks.
pub fn polish(p: &SparseReal, mut z: Complex64, steps: usize) -> Complex64 {
    let mut best = (p.relative_residual(z), z);
    for _ in 0..steps {
        let d = p.newton_ratio(z);
        if !d.is_finite() {
            break;
        }
        z -= d;
        let r = p.relative_residual(z);
        if r < best.0 {
            best = (r, z);
        }
        if d.norm() <= f64::EPSILON * z.norm() {
            break;
        }
    }
    best.1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_moduli(v: &[Complex64]) -> Vec<f64> {
        let mut m: Vec<f64> = v.iter().map(|z| z.norm()).collect();
        m.sort_by(f64::total_cmp);
        m
    }

    #[test]
    fn quartic_moduli() {
        let p = SparseReal::new(vec![(0, 1.0), (2, -11.0), (4, 1.0)]);
        let r = roots(&p);
        assert!(r.converged);
        let m = sorted_moduli(&r.roots);
        let small = ((11.0 - 117f64.sqrt()) / 2.0).sqrt();
        let big = ((11.0 + 117f64.sqrt()) / 2.0).sqrt();
        for (x, y) in m.iter().zip([small, small, big, big]) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn newton_polygon_radii() {
        let p = SparseReal::new(vec![(0, 1.0), (3, -1e6), (6, 1.0)]);
        let r = p.polygon_radii();
        assert_eq!(r.len(), 6);
        assert!((r[0] - 1e-2).abs() < 1e-12 && (r[5] - 1e2).abs() < 1e-9);
    }

    #[test]
    fn high_degree_sparse() {
        let p = SparseReal::new(vec![(0, 1.0), (500, 1.0), (1000, -1.0)]);
        let r = roots(&p);
        assert_eq!(r.roots.len(), 1000);
        assert!(r.roots.iter().all(|&z| p.relative_residual(z) < 1e-12));
        // All roots distinct.
        let mut m: Vec<(f64, f64)> = r.roots.iter().map(|z| (z.re, z.im)).collect();
        m.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for w in m.windows(2) {
            assert!(((w[0].0 - w[1].0).powi(2) + (w[0].1 - w[1].1).powi(2)).sqrt() > 1e-6);
        }
    }

    #[test]
    fn companion_agrees() {
        let c = [6.0, -5.0, 1.0];
        let mut e: Vec<f64> = companion_roots(&c).unwrap().iter().map(|z| z.re).collect();
        e.sort_by(f64::total_cmp);
        assert!((e[0] - 2.0).abs() < 1e-12 && (e[1] - 3.0).abs() < 1e-12);
    }
}
