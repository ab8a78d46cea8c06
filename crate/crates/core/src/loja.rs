//! Floating-point estimates of Łojasiewicz exponents over `C`.
//!
//! Points are sampled in shells around an intersection point, both along
//! supplied approach parametrizations and in random ambient directions. The
//! exponent is the slope of the lower envelope of `log max|f_ij|` against
//! `log dist`, one point per decade of distance.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{AlgebraError, Result};
use crate::poly::Polynomial;

/// Samples closer than this to the intersection are discarded.
const MIN_DIST: f64 = 1e-12;
/// Multistart count of the distance oracles.
const STARTS: usize = 16;
const TOLERANCE: f64 = 0.25;

/// A polynomial map `C^k -> C^n`.
#[derive(Clone, Debug)]
pub struct Parametrization {
    pub coords: Vec<Polynomial>,
}

impl Parametrization {
    pub fn new(coords: Vec<Polynomial>) -> Result<Self> {
        let first = coords.first().ok_or_else(|| AlgebraError::Invalid("empty parametrization".into()))?;
        if first.ring().field().characteristic() != 0 {
            return Err(AlgebraError::Numeric("numeric estimates need rational coefficients".into()));
        }
        Ok(Parametrization { coords })
    }

    pub fn params(&self) -> usize {
        self.coords[0].ring().nvars()
    }

    pub fn eval(&self, t: &[Complex64]) -> Vec<Complex64> {
        self.coords.iter().map(|p| eval(p, t)).collect()
    }

    /// Jacobian, row per coordinate.
    fn jacobian(&self, t: &[Complex64]) -> Vec<Vec<Complex64>> {
        self.coords.iter().map(|p| (0..self.params()).map(|v| eval(&p.derivative(v), t)).collect()).collect()
    }
}

pub fn eval(p: &Polynomial, x: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (m, c) in p.terms() {
        let mut t = Complex64::new(c.to_f64(), 0.0);
        for (i, &e) in m.exponents().iter().enumerate() {
            if e > 0 {
                t *= x[i].powu(e);
            }
        }
        acc += t;
    }
    acc
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn sub(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Solves the square system `a x = b` by partial pivoting; `None` if singular.
fn solve(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))?;
        if a[piv][col].norm() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f.norm() == 0.0 {
                continue;
            }
            for c in col..n {
                let v = a[col][c];
                a[r][c] -= f * v;
            }
            let v = b[col];
            b[r] -= f * v;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for r in (0..n).rev() {
        let mut s = b[r];
        for c in r + 1..n {
            s -= a[r][c] * x[c];
        }
        x[r] = s / a[r][r];
    }
    Some(x)
}

/// Damped Gauss-Newton step `δ` minimizing `|r + J δ|^2 + λ|δ|^2`.
fn gn_step(j: &[Vec<Complex64>], r: &[Complex64], lambda: f64) -> Option<Vec<Complex64>> {
    let k = j.first().map_or(0, |row| row.len());
    let mut a = vec![vec![Complex64::new(0.0, 0.0); k]; k];
    let mut b = vec![Complex64::new(0.0, 0.0); k];
    for (row, ri) in j.iter().zip(r) {
        for p in 0..k {
            let cp = row[p].conj();
            b[p] -= cp * ri;
            for q in 0..k {
                a[p][q] += cp * row[q];
            }
        }
    }
    for (p, row) in a.iter_mut().enumerate() {
        row[p] += lambda;
    }
    solve(a, b)
}

fn random_unit(rng: &mut impl Rng, n: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
    let s = norm(&v);
    v.into_iter().map(|z| z / s).collect()
}

/// Distance from a point to the intersection.
#[derive(Clone, Debug)]
pub enum DistanceOracle {
    /// The intersection is the union of these images.
    Parametrized(Vec<Parametrization>),
    /// Nearest zero of `Σ |f_ij|^2` found by damped Gauss-Newton; approximate.
    Penalty,
}

fn param_distance(p: &Parametrization, x: &[Complex64], rng: &mut impl Rng) -> f64 {
    let k = p.params();
    if k == 0 {
        return norm(&sub(&p.eval(&[]), x));
    }
    let scale = norm(x).max(1e-3);
    let mut best = f64::INFINITY;
    for s in 0..STARTS {
        let radius = if s == 0 { 0.0 } else { scale.powf(1.0 / (1 + s % 3) as f64) };
        let mut t: Vec<Complex64> = random_unit(rng, k).into_iter().map(|z| z * radius).collect();
        let mut r = sub(&p.eval(&t), x);
        let mut lambda = 1e-12;
        for _ in 0..200 {
            let Some(d) = gn_step(&p.jacobian(&t), &r, lambda) else { break };
            let cand: Vec<Complex64> = t.iter().zip(&d).map(|(a, b)| a + b).collect();
            let rc = sub(&p.eval(&cand), x);
            if norm(&rc) < norm(&r) {
                let done = norm(&d) <= 1e-15 * (1.0 + norm(&t));
                t = cand;
                r = rc;
                lambda = (lambda * 0.3).max(1e-15);
                if done {
                    break;
                }
            } else {
                lambda *= 10.0;
                if lambda > 1e12 {
                    break;
                }
            }
        }
        best = best.min(norm(&r));
    }
    best
}

fn penalty_distance(gens: &[Polynomial], x: &[Complex64], rng: &mut impl Rng) -> Option<f64> {
    let n = x.len();
    let jac: Vec<Vec<Polynomial>> = gens.iter().map(|g| (0..n).map(|v| g.derivative(v)).collect()).collect();
    let mut best: Option<f64> = None;
    for s in 0..STARTS {
        let jitter = if s == 0 { 0.0 } else { 1e-3 * norm(x).max(1e-6) };
        let mut z: Vec<Complex64> = x.iter().zip(random_unit(rng, n)).map(|(a, b)| a + b * jitter).collect();
        for _ in 0..200 {
            let f: Vec<Complex64> = gens.iter().map(|g| eval(g, &z)).collect();
            if norm(&f) < 1e-14 {
                break;
            }
            let j: Vec<Vec<Complex64>> = jac.iter().map(|row| row.iter().map(|d| eval(d, &z)).collect()).collect();
            // minimal-norm step through the normal equations of the transposed system
            let m = gens.len();
            let mut a = vec![vec![Complex64::new(0.0, 0.0); m]; m];
            for p in 0..m {
                for q in 0..m {
                    a[p][q] = (0..n).map(|v| j[p][v] * j[q][v].conj()).sum();
                }
                a[p][p] += 1e-14;
            }
            let Some(y) = solve(a, f.iter().map(|v| -v).collect()) else { break };
            for v in 0..n {
                z[v] += (0..m).map(|p| j[p][v].conj() * y[p]).sum::<Complex64>();
            }
        }
        let res = norm(&gens.iter().map(|g| eval(g, &z)).collect::<Vec<_>>());
        if res < 1e-9 {
            let d = norm(&sub(&z, x));
            best = Some(best.map_or(d, |b: f64| b.min(d)));
        }
    }
    best
}

/// A fixture for the exponent estimate.
#[derive(Clone, Debug)]
pub struct NumericScene {
    /// `generators[i]` generates `I_i`.
    pub generators: Vec<Vec<Polynomial>>,
    pub center: Vec<Complex64>,
    pub radius: f64,
    pub oracle: DistanceOracle,
    /// Maps with `F(0) = center` along which to approach.
    pub approaches: Vec<Parametrization>,
    /// `∏ arith-deg I_i`.
    pub degree_bound: u64,
    pub shells: usize,
    pub per_shell: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExponentEstimate {
    pub slope: f64,
    /// Half-width of the band: twice the standard error of the slope.
    pub band: f64,
    pub degree_bound: u64,
    pub within_bound: bool,
    /// `(log10 dist, log10 max|f|)` on the lower envelope.
    pub envelope: Vec<(f64, f64)>,
    pub samples: usize,
    pub oracle_failures: usize,
}

struct Sample {
    dist: f64,
    value: f64,
}

impl NumericScene {
    fn all_gens(&self) -> Vec<Polynomial> {
        self.generators.iter().flatten().cloned().collect()
    }

    pub fn max_abs(&self, x: &[Complex64]) -> f64 {
        self.generators.iter().flatten().map(|g| eval(g, x).norm()).fold(0.0, f64::max)
    }

    pub fn distance(&self, x: &[Complex64], rng: &mut impl Rng) -> Option<f64> {
        match &self.oracle {
            DistanceOracle::Parametrized(ps) => {
                Some(ps.iter().map(|p| param_distance(p, x, rng)).fold(f64::INFINITY, f64::min))
            }
            DistanceOracle::Penalty => penalty_distance(&self.all_gens(), x, rng),
        }
    }

    fn check(&self) -> Result<()> {
        let n = self.center.len();
        for p in &self.approaches {
            if p.coords.len() != n {
                return Err(AlgebraError::DimensionMismatch("approach map has the wrong target".into()));
            }
            let at0 = p.eval(&vec![Complex64::new(0.0, 0.0); p.params()]);
            if norm(&sub(&at0, &self.center)) > 1e-9 {
                return Err(AlgebraError::Numeric("approach map does not pass through the center".into()));
            }
        }
        if let DistanceOracle::Parametrized(ps) = &self.oracle {
            if ps.iter().any(|p| p.coords.len() != n) {
                return Err(AlgebraError::DimensionMismatch("intersection map has the wrong target".into()));
            }
        }
        Ok(())
    }

    /// A point at distance about `r` from the center along `p`.
    fn along(&self, p: &Parametrization, r: f64, rng: &mut impl Rng) -> Vec<Complex64> {
        let dir = random_unit(rng, p.params());
        let at = |rho: f64| -> Vec<Complex64> { p.eval(&dir.iter().map(|z| z * rho).collect::<Vec<_>>()) };
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        while norm(&sub(&at(hi), &self.center)) < r && hi < 1e6 {
            hi *= 2.0;
        }
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if norm(&sub(&at(mid), &self.center)) < r {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        at(0.5 * (lo + hi))
    }

    fn sample_shell(&self, k: usize) -> Vec<Option<Sample>> {
        // mid-decade radii keep samples away from the bin edges
        let r = 3.0 * self.radius * 10f64.powi(-(k as i32 + 1));
        let n = self.center.len();
        (0..self.per_shell)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                rng.set_stream(((k as u64) << 32) | i as u64);
                let sources = self.approaches.len() + 1;
                let x = match i % sources {
                    s if s < self.approaches.len() => self.along(&self.approaches[s], r, &mut rng),
                    _ => self.center.iter().zip(random_unit(&mut rng, n)).map(|(c, u)| c + u * r).collect(),
                };
                let dist = self.distance(&x, &mut rng)?;
                Some(Sample { dist, value: self.max_abs(&x) })
            })
            .collect()
    }
}

/// Least-squares slope and its standard error.
fn fit(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let resid: f64 = points.iter().map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2)).sum();
    let se = if points.len() > 2 { (resid / (n - 2.0) / sxx).sqrt() } else { 0.0 };
    (slope, se)
}

pub fn estimate_exponent(scene: &NumericScene) -> Result<ExponentEstimate> {
    scene.check()?;
    let mut samples = Vec::new();
    let mut failures = 0;
    let mut total = 0;
    for k in 0..scene.shells {
        for s in scene.sample_shell(k) {
            total += 1;
            match s {
                Some(s) => samples.push(s),
                None => failures += 1,
            }
        }
    }
    if failures * 10 > total {
        return Err(AlgebraError::Numeric(format!("distance oracle failed on {failures} of {total} samples")));
    }
    // lower envelope: the smallest value in each decade of distance
    let mut bins: std::collections::BTreeMap<i64, (f64, f64)> = std::collections::BTreeMap::new();
    for s in samples.iter().filter(|s| s.dist > MIN_DIST && s.value > 0.0) {
        let (ld, lv) = (s.dist.log10(), s.value.log10());
        let key = (ld - scene.radius.log10()).floor() as i64;
        let e = bins.entry(key).or_insert((ld, lv));
        if lv < e.1 {
            *e = (ld, lv);
        }
    }
    let envelope: Vec<(f64, f64)> = bins.into_values().collect();
    if envelope.len() < 3 {
        return Err(AlgebraError::Numeric("too few distance decades for a slope".into()));
    }
    let (slope, se) = fit(&envelope);
    if !slope.is_finite() {
        return Err(AlgebraError::Numeric("slope is not finite".into()));
    }
    Ok(ExponentEstimate {
        slope,
        band: 2.0 * se,
        degree_bound: scene.degree_bound,
        within_bound: slope <= scene.degree_bound as f64 + TOLERANCE,
        envelope,
        samples: samples.len(),
        oracle_failures: failures,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct UpperChainReport {
    /// Largest observed `|f(x)| / dist(x)` over generators and samples.
    pub constant: f64,
    /// The ratio at the closest decade does not exceed ten times the overall one.
    pub bounded: bool,
    pub samples: usize,
}

/// Checks `|f(x)| ≤ C dist(x)` near the intersection for every generator.
pub fn verify_upper_chain(scene: &NumericScene) -> Result<UpperChainReport> {
    scene.check()?;
    let gens = scene.all_gens();
    let n = scene.center.len();
    let mut ratios: Vec<(f64, f64)> = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(scene.seed ^ 0x0c4a1);
    for k in 0..scene.shells {
        let r = scene.radius * 10f64.powi(-(k as i32 + 1));
        for _ in 0..scene.per_shell {
            let x: Vec<Complex64> = scene.center.iter().zip(random_unit(&mut rng, n)).map(|(c, u)| c + u * r).collect();
            let Some(d) = scene.distance(&x, &mut rng) else { continue };
            if d <= MIN_DIST {
                continue;
            }
            let worst = gens.iter().map(|g| eval(g, &x).norm()).fold(0.0, f64::max);
            ratios.push((d, worst / d));
        }
    }
    let constant = ratios.iter().map(|r| r.1).fold(0.0, f64::max);
    let closest = ratios.iter().filter(|r| r.0 <= scene.radius * 10f64.powi(-(scene.shells as i32))).map(|r| r.1).fold(0.0, f64::max);
    Ok(UpperChainReport { constant, bounded: constant.is_finite() && closest <= 10.0 * constant.max(1e-300), samples: ratios.len() })
}
