//! Ideals of Chow equations, built from pushforwards along random linear
//! projections.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cycles::{Component, Cycle};
use crate::decompose::{image_relation, is_finite_projection};
use crate::error::{AlgebraError, Result};
use crate::ideal::Ideal;
use crate::linalg::Span;
use crate::monomial::Monomial;
use crate::poly::{Polynomial, Ring, RingRef};

/// Attempts per sample before giving up on finding an allowable projection.
const SAMPLE_TRIES: usize = 8;

/// A linear map `A^n -> A^(d+1)` given by an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Projection {
    pub rows: Vec<Vec<i64>>,
}

impl Projection {
    pub fn new(rows: Vec<Vec<i64>>) -> Self {
        Projection { rows }
    }

    /// Entries drawn uniformly from `[-bound, bound]`.
    pub fn random(rng: &mut impl Rng, target_dim: usize, n: usize, bound: i64) -> Self {
        Projection { rows: (0..target_dim).map(|_| (0..n).map(|_| rng.gen_range(-bound..=bound)).collect()).collect() }
    }

    pub fn target_dim(&self) -> usize {
        self.rows.len()
    }

    /// The coordinate functions as linear forms on `ring`.
    pub fn forms(&self, ring: &RingRef) -> Result<Vec<Polynomial>> {
        let n = ring.nvars();
        self.rows
            .iter()
            .map(|row| {
                if row.len() != n {
                    return Err(AlgebraError::DimensionMismatch(format!("projection row of length {} on {n} variables", row.len())));
                }
                Ok(Polynomial::from_terms(ring, row.iter().enumerate().map(|(i, &a)| (Monomial::var(n, i), ring.field().from_i64(a)))))
            })
            .collect()
    }
}

fn check_dims(pi: &Projection, z: &Cycle) -> Result<usize> {
    let d = z.dimension().ok_or_else(|| AlgebraError::Invalid("empty cycle".into()))?;
    if !z.is_pure() {
        return Err(AlgebraError::DimensionMismatch("cycle is not pure-dimensional".into()));
    }
    if pi.target_dim() != d + 1 {
        return Err(AlgebraError::DimensionMismatch(format!(
            "projection to A^{} for a {d}-dimensional cycle",
            pi.target_dim()
        )));
    }
    Ok(d)
}

/// Whether `pi` is finite on every component, including at infinity.
pub fn is_allowable(pi: &Projection, z: &Cycle) -> Result<bool> {
    check_dims(pi, z)?;
    let forms = pi.forms(z.ring())?;
    for (c, _) in z.terms() {
        if !is_finite_projection(c.ideal(), &forms)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn image_ring(ring: &RingRef, k: usize) -> RingRef {
    Ring::new(ring.field(), (0..k).map(|i| format!("y{i}")))
}

/// Equation of the image hypersurface of one component.
fn image_equation(c: &Component, forms: &[Polynomial]) -> Result<Polynomial> {
    let target = image_ring(c.ideal().ring(), forms.len());
    image_relation(c.ideal(), forms, &target, c.degree() as u32)?
        .ok_or_else(|| AlgebraError::DegenerateProjection("image is not a hypersurface".into()))
}

/// `f(π, Z) = ∏ (g_i ∘ π)^{a_i e_i}` with `e_i = deg Z_i / deg g_i`,
/// primitive with positive lex-leading coefficient.
pub fn pushforward_equation(pi: &Projection, z: &Cycle) -> Result<Polynomial> {
    check_dims(pi, z)?;
    let forms = pi.forms(z.ring())?;
    let mut rank = Span::new(false);
    if !forms.iter().all(|l| rank.insert(l)) {
        return Err(AlgebraError::DegenerateProjection("projection rows are linearly dependent".into()));
    }
    if !is_allowable(pi, z)? {
        return Err(AlgebraError::NotAllowable);
    }
    let mut f = Polynomial::one(z.ring());
    for (c, a) in z.terms() {
        let g = image_equation(c, &forms)?;
        let dg = g.total_degree() as u64;
        if dg == 0 || c.degree() % dg != 0 {
            return Err(AlgebraError::DegenerateProjection(format!(
                "image degree {dg} does not divide component degree {}",
                c.degree()
            )));
        }
        let e = c.degree() / dg;
        f = &f * &g.compose(&forms)?.pow((e * a) as u32);
    }
    Ok(f.normalized())
}

/// Sampling parameters for [`chow_ideal`].
#[derive(Clone, Debug, Serialize)]
pub struct ChowConfig {
    pub seed: u64,
    /// Consecutive redundant samples that end the search.
    pub window: usize,
    pub max_rounds: usize,
    /// Initial bound on matrix entries; doubled on failures.
    pub entry_bound: i64,
}

impl Default for ChowConfig {
    fn default() -> Self {
        ChowConfig { seed: 0, window: 4, max_rounds: 64, entry_bound: 7 }
    }
}

/// One accepted sample.
#[derive(Clone, Debug, Serialize)]
pub struct ChowSample {
    pub dimension: usize,
    pub projection: Projection,
    pub equation: String,
}

#[derive(Clone, Debug)]
pub struct ChowIdealResult {
    pub ideal: Ideal,
    pub samples: Vec<ChowSample>,
    /// Samples drawn, summed over the pure-dimensional parts.
    pub rounds: usize,
    pub seed: u64,
}

/// The equation for sample `index` of the `d`-dimensional part, retrying
/// with wider entries when the projection is not allowable or degenerate.
fn draw(z: &Cycle, d: usize, index: usize, config: &ChowConfig) -> Result<(Projection, Polynomial)> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(((d as u64) << 32) | index as u64);
    let n = z.ring().nvars();
    let mut bound = config.entry_bound.max(1);
    for _ in 0..SAMPLE_TRIES {
        let pi = Projection::random(&mut rng, d + 1, n, bound);
        match pushforward_equation(&pi, z) {
            Ok(f) => return Ok((pi, f)),
            Err(AlgebraError::NotAllowable) | Err(AlgebraError::DegenerateProjection(_)) => bound *= 2,
            Err(e) => return Err(e),
        }
    }
    Err(AlgebraError::DegenerateProjection("no allowable projection found".into()))
}

/// Samples until `window` consecutive equations lie in the linear span of the
/// earlier ones; the span then generates the ideal.
fn chow_pure(z: &Cycle, d: usize, config: &ChowConfig, samples: &mut Vec<ChowSample>) -> Result<(Ideal, usize)> {
    let ring = z.ring();
    let mut span = Span::new(false);
    let mut gens: Vec<Polynomial> = Vec::new();
    let mut quiet = 0;
    let mut index = 0;
    let batch = config.window.max(1);
    while index < config.max_rounds {
        let hi = (index + batch).min(config.max_rounds);
        let drawn: Vec<Result<(Projection, Polynomial)>> = (index..hi).into_par_iter().map(|k| draw(z, d, k, config)).collect();
        for r in drawn {
            let (pi, f) = r?;
            index += 1;
            if span.insert(&f) {
                quiet = 0;
                samples.push(ChowSample { dimension: d, projection: pi, equation: f.to_string() });
                gens.push(f);
            } else {
                quiet += 1;
            }
            if quiet >= config.window {
                return Ok((Ideal::new(ring, gens)?, index));
            }
        }
    }
    Err(AlgebraError::NoStabilization { rounds: index, partial: gens.iter().map(|g| g.to_string()).collect() })
}

/// `I^ch(Z) = ∏_d I^ch(Z^d)`, each factor accumulated from random allowable
/// projections until `window` consecutive samples add nothing. The result
/// holds the sampled equations (or their products) as generators.
pub fn chow_ideal(z: &Cycle, config: &ChowConfig) -> Result<ChowIdealResult> {
    let ring = z.ring();
    let mut samples = Vec::new();
    let mut rounds = 0;
    let mut acc: Option<Ideal> = None;
    for d in z.dimensions() {
        let (part, r) = chow_pure(&z.pure_part(d), d, config, &mut samples)?;
        rounds += r;
        acc = Some(match acc {
            None => part,
            Some(a) => a.product(&part)?,
        });
    }
    Ok(ChowIdealResult { ideal: acc.unwrap_or_else(|| Ideal::unit(ring)), samples, rounds, seed: config.seed })
}

/// Pushes `z` forward along `A^m -> A^(m+k)`, `x -> (x, 0)`.
pub fn embed_cycle(z: &Cycle, extra: &[&str]) -> Result<Cycle> {
    let ring = z.ring();
    let big = ring.extend(extra.iter().copied());
    let emb: Vec<usize> = (0..ring.nvars()).collect();
    let mut out = Cycle::empty(&big);
    for (c, a) in z.terms() {
        let mut gens: Vec<Polynomial> = c.ideal().gens().iter().map(|g| g.embed(&big, &emb)).collect();
        gens.extend((ring.nvars()..big.nvars()).map(|v| Polynomial::var(&big, v)));
        out.add(Component::new(Ideal::new(&big, gens)?)?, *a)?;
    }
    Ok(out)
}

/// Whether setting the extra variables to zero maps `I^ch(j_* Z)` onto
/// `I^ch(Z)`.
pub fn chow_restriction_check(z: &Cycle, extra: &[&str], config: &ChowConfig) -> Result<bool> {
    let small = chow_ideal(z, config)?.ideal;
    let big_cycle = embed_cycle(z, extra)?;
    let big = chow_ideal(&big_cycle, config)?.ideal;
    let ring = z.ring();
    let n = ring.nvars();
    let images: Vec<Polynomial> = (0..big_cycle.ring().nvars())
        .map(|v| if v < n { Polynomial::var(ring, v) } else { Polynomial::zero(ring) })
        .collect();
    let restricted = Ideal::new(ring, big.gens().iter().map(|g| g.compose(&images)).collect::<Result<Vec<_>>>()?)?;
    restricted.equals(&small)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::parse::parse_polynomial;

    fn cycle(r: &RingRef, parts: &[(&str, u64)]) -> Cycle {
        let mut z = Cycle::empty(r);
        for (s, a) in parts {
            z.add(Component::new(Ideal::parse(r, s).unwrap()).unwrap(), *a).unwrap();
        }
        z
    }

    #[test]
    fn allowability() {
        let r = Ring::new(Field::Rational, ["x1", "x2", "x3"]);
        let axis = cycle(&r, &[("x2, x3", 1)]);
        assert!(!is_allowable(&Projection::new(vec![vec![0, 1, 0], vec![0, 0, 1]]), &axis).unwrap());
        assert!(is_allowable(&Projection::new(vec![vec![1, 2, 3], vec![3, -1, 2]]), &axis).unwrap());
        let r2 = Ring::new(Field::Rational, ["x", "y"]);
        let parabola = cycle(&r2, &[("y - x^2", 1)]);
        assert!(is_allowable(&Projection::new(vec![vec![1, 0]]), &cycle(&r2, &[("x, y", 1)])).unwrap());
        // to the x-line the parabola is finite; the target must be A^2 for a curve
        assert!(is_allowable(&Projection::new(vec![vec![1, 0], vec![0, 1]]), &parabola).unwrap());
        assert!(is_allowable(&Projection::new(vec![vec![1, 0]]), &parabola).is_err());
        let flat = Projection::new(vec![vec![1, 2, 0], vec![2, 4, 0]]);
        assert!(matches!(pushforward_equation(&flat, &axis), Err(AlgebraError::DegenerateProjection(_))));
    }

    #[test]
    fn char_p_point() {
        let r = Ring::new(Field::prime(5).unwrap(), ["x", "y"]);
        let z = cycle(&r, &[("x, y", 5)]);
        let f = pushforward_equation(&Projection::new(vec![vec![2, 3]]), &z).unwrap();
        assert_eq!(f, parse_polynomial(&r, "(2*x + 3*y)^5").unwrap().normalized());
        let res = chow_ideal(&z, &ChowConfig::default()).unwrap();
        assert!(res.ideal.equals(&Ideal::parse(&r, "x^5, y^5").unwrap()).unwrap());
    }

    #[test]
    fn axes_pushforward_matches_minors() {
        let r = Ring::new(Field::Rational, ["x1", "x2", "x3"]);
        let z = cycle(&r, &[("x2, x3", 1), ("x1, x3", 1), ("x1, x2", 1)]);
        let (a, b) = ([1i64, 2, -1], [3i64, -2, 5]);
        let f = pushforward_equation(&Projection::new(vec![a.to_vec(), b.to_vec()]), &z).unwrap();
        let mut expected = Polynomial::one(&r);
        for i in 0..3 {
            let mut lin = Polynomial::zero(&r);
            for j in 0..3 {
                let m = a[j] * b[i] - a[i] * b[j];
                lin = &lin + &Polynomial::var(&r, j).scalar_mul(&r.field().from_i64(m));
            }
            expected = &expected * &lin;
        }
        assert_eq!(f, expected.normalized());
    }

    #[test]
    fn smooth_subvariety_gives_its_ideal() {
        let r = Ring::new(Field::Rational, ["x", "y", "z"]);
        let z = cycle(&r, &[("x, y", 1)]);
        let res = chow_ideal(&z, &ChowConfig::default()).unwrap();
        assert!(res.ideal.equals(&Ideal::parse(&r, "x, y").unwrap()).unwrap());
        let z2 = cycle(&r, &[("x, y", 2)]);
        let res = chow_ideal(&z2, &ChowConfig::default()).unwrap();
        assert!(res.ideal.equals(&Ideal::parse(&r, "x, y").unwrap().power(2)).unwrap());
    }

    #[test]
    fn restriction_of_a_parabola() {
        let r = Ring::new(Field::Rational, ["x", "y"]);
        let z = cycle(&r, &[("y - x^2", 1)]);
        assert!(chow_restriction_check(&z, &["z"], &ChowConfig::default()).unwrap());
    }
}
