//! Prime components and generic lengths.
//!
//! Associated primes are found by the reduction to the unmixed case: with a
//! maximal independent set `U`, `J = (J : h^∞) ∩ (J + h^m)` where `J : h^∞` is
//! the contraction of `J K(U)[X \ U]`. Unmixed radicals are split by a random
//! finite projection to `A^(d+1)` whose image hypersurface is factored; the
//! split is accepted only when every piece has the degree of its image, which
//! certifies primality.
//!
//! The length of `R/J` at a prime `P` of dimension `i` is read off Hilbert
//! series: `e_i(R/J) - e_i(R/(J : f^∞))` divided by `deg P`, for `f ∈ P`
//! outside every other candidate prime not containing `P`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{AlgebraError, Result};
use crate::factor::{factor_univariate, squarefree_part};
use crate::field::{Field, FieldElement};
use crate::hilbert::max_independent_set;
use crate::ideal::Ideal;
use crate::mfactor::factor_squarefree;
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{Polynomial, Ring, RingRef};

const PROJECTION_TRIES: usize = 6;

/// A prime ideal together with its dimension and degree.
#[derive(Clone, Debug)]
pub struct Prime {
    pub ideal: Ideal,
    pub dimension: usize,
    pub degree: u64,
}

impl Prime {
    fn new(ideal: Ideal) -> Result<Self> {
        let ideal = ideal.canonical();
        let h = ideal.hilbert_data()?;
        Ok(Prime { ideal, dimension: h.dimension, degree: h.degree })
    }

    fn same(&self, other: &Prime) -> bool {
        self.dimension == other.dimension
            && self.degree == other.degree
            && self.ideal.gb().polys() == other.ideal.gb().polys()
    }
}

fn dedup(primes: Vec<Prime>) -> Vec<Prime> {
    let mut out: Vec<Prime> = Vec::new();
    for p in primes {
        if !out.iter().any(|q| q.same(&p)) {
            out.push(p);
        }
    }
    out
}

/// The lowest-degree nonzero polynomial `g` in `target` with
/// `g(forms) ∈ ideal`, searching degrees up to `max_degree`.
///
/// When the elimination ideal is principal this is its generator.
pub fn minimal_relation(ideal: &Ideal, forms: &[Polynomial], target: &RingRef, max_degree: u32) -> Result<Option<Polynomial>> {
    let k = forms.len();
    assert_eq!(target.nvars(), k);
    let gb = ideal.gb();
    // echelon rows keyed by leading monomial: (normal form, combination)
    let mut rows: BTreeMap<Monomial, (Polynomial, Polynomial)> = BTreeMap::new();
    let mut values: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
    let one = Monomial::one(k);
    values.insert(one.clone(), gb.normal_form(&Polynomial::one(ideal.ring()))?);
    let mut layer = vec![one];
    for deg in 0..=max_degree {
        if deg > 0 {
            let mut next: Vec<Monomial> = Vec::new();
            for m in &layer {
                // extend only by variables at or after the last one used, so each monomial appears once
                let last = (0..k).rev().find(|&v| m[v] > 0).unwrap_or(0);
                for v in last..k {
                    let mm = m.mul(&Monomial::var(k, v));
                    let val = gb.normal_form(&(&values[m] * &forms[v]))?;
                    values.insert(mm.clone(), val);
                    next.push(mm);
                }
            }
            layer = next;
        }
        for m in &layer {
            let mut v = values[m].clone();
            let mut combo = Polynomial::monomial(target, m.clone());
            while let Some((lead, c)) = v.terms().first().cloned() {
                match rows.get(&lead) {
                    Some((rv, rc)) => {
                        // rows are stored with leading coefficient 1
                        v = &v - &rv.scalar_mul(&c);
                        combo = &combo - &rc.scalar_mul(&c);
                    }
                    None => break,
                }
            }
            if v.is_zero() {
                return Ok(Some(combo.normalized()));
            }
            let (lead, c) = v.terms()[0].clone();
            let inv = c.inv();
            rows.insert(lead, (v.scalar_mul(&inv), combo.scalar_mul(&inv)));
        }
    }
    Ok(None)
}

/// Inverse of a square matrix over a field, `None` when singular.
fn invert(mut a: Vec<Vec<FieldElement>>, field: Field) -> Option<Vec<Vec<FieldElement>>> {
    let n = a.len();
    let mut inv: Vec<Vec<FieldElement>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { field.one() } else { field.zero() }).collect()).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let scale = a[col][col].inv();
        for j in 0..n {
            a[col][j] = &a[col][j] * &scale;
            inv[col][j] = &inv[col][j] * &scale;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let t = &a[col][j] * &f;
                    a[r][j] = &a[r][j] - &t;
                    let t = &inv[col][j] * &f;
                    inv[r][j] = &inv[r][j] - &t;
                }
            }
        }
    }
    Some(inv)
}

fn rank(rows: &[Vec<FieldElement>]) -> usize {
    let mut a: Vec<Vec<FieldElement>> = rows.to_vec();
    let (m, n) = (a.len(), a.first().map_or(0, |r| r.len()));
    let mut r = 0;
    for col in 0..n {
        let Some(piv) = (r..m).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(r, piv);
        let scale = a[r][col].inv();
        for i in 0..m {
            if i != r && !a[i][col].is_zero() {
                let f = &a[i][col] * &scale;
                for j in 0..n {
                    let t = &a[r][j] * &f;
                    a[i][j] = &a[i][j] - &t;
                }
            }
        }
        r += 1;
    }
    r
}

/// Generator of `{g : g(forms) ∈ ideal}` for linearly independent linear
/// forms without constant terms; `None` when no relation exists.
///
/// Positive-dimensional ideals go through a linear change of coordinates
/// and block elimination; zero-dimensional ones through
/// [`minimal_relation`] with `degree_bound`.
pub fn image_relation(ideal: &Ideal, forms: &[Polynomial], target: &RingRef, degree_bound: u32) -> Result<Option<Polynomial>> {
    if ideal.is_unit() {
        return Ok(Some(Polynomial::one(target)));
    }
    if ideal.dimension()? == 0 {
        return minimal_relation(ideal, forms, target, degree_bound);
    }
    let ring = ideal.ring();
    let field = ring.field();
    let n = ring.nvars();
    let k = forms.len();
    let mut rows: Vec<Vec<FieldElement>> = forms
        .iter()
        .map(|f| (0..n).map(|v| f.coefficient(&Monomial::var(n, v))).collect())
        .collect();
    if forms.iter().any(|f| f.total_degree() > 1 || !f.constant_term().is_zero()) || rank(&rows) < k {
        return Err(AlgebraError::Invalid("projection forms must be independent linear forms".into()));
    }
    for v in 0..n {
        if rows.len() == n {
            break;
        }
        let mut unit = vec![field.zero(); n];
        unit[v] = field.one();
        rows.push(unit);
        if rank(&rows) < rows.len() {
            rows.pop();
        }
    }
    let inv = invert(rows, field).expect("completed to a basis");
    // new coordinates u = M x with u_0..u_{k-1} the forms; x = M^{-1} u
    let new_ring = Ring::new(field, (0..n).map(|i| format!("u{i}")));
    let images: Vec<Polynomial> = (0..n)
        .map(|i| Polynomial::from_terms(&new_ring, (0..n).map(|j| (Monomial::var(n, j), inv[i][j].clone()))))
        .collect();
    let moved = ideal.map(&new_ring, |g| g.compose(&images))?;
    let elim_vars: Vec<usize> = (k..n).collect();
    let elim = moved.eliminate(&elim_vars);
    let gens: Vec<Polynomial> = elim
        .gens()
        .iter()
        .map(|g| {
            Polynomial::from_terms(target, g.terms().iter().map(|(m, c)| (Monomial::from_exponents(m.exponents()[..k].to_vec()), c.clone())))
        })
        .collect();
    match gens.len() {
        0 => Ok(None),
        1 => Ok(Some(gens[0].normalized())),
        _ => Err(AlgebraError::DecompositionFailure("image is not a hypersurface".into())),
    }
}

fn variables(ring: &RingRef, vars: &[usize]) -> Vec<Polynomial> {
    vars.iter().map(|&v| Polynomial::var(ring, v)).collect()
}

fn aux_ring(field: Field, k: usize) -> RingRef {
    Ring::new(field, (0..k).map(|i| format!("y{i}")))
}

/// Product of the distinct leading coefficients in `K[U]` of a basis of `J`
/// for the block order eliminating the complement of `U`; `J : h^∞` is the
/// contraction of `J K(U)[X \ U]`.
fn contraction_multiplier(ideal: &Ideal, u: &[usize]) -> Result<Polynomial> {
    let ring = ideal.ring();
    let n = ring.nvars();
    let rest: Vec<usize> = (0..n).filter(|v| !u.contains(v)).collect();
    let order = MonomialOrder::eliminating(n, &rest);
    let gb = ideal.basis(&order);
    let mut factors: Vec<Polynomial> = Vec::new();
    for g in gb.polys() {
        let (lm, _) = g.leading_term_in(&order).unwrap().clone();
        let key: Vec<u32> = rest.iter().map(|&v| lm[v]).collect();
        let lc = Polynomial::from_terms(
            ring,
            g.terms().iter().filter(|(m, _)| rest.iter().zip(&key).all(|(&v, &e)| m[v] == e)).map(|(m, c)| {
                let mut e = m.exponents().to_vec();
                for &v in &rest {
                    e[v] = 0;
                }
                (Monomial::from_exponents(e), c.clone())
            }),
        )
        .normalized();
        if !lc.is_constant() && !factors.contains(&lc) {
            factors.push(lc);
        }
    }
    let mut h = Polynomial::one(ring);
    for f in factors {
        h = &h * &f;
    }
    Ok(h)
}

/// `a * b / lcm(a, b)`.
fn poly_gcd(a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
    if b.is_zero() {
        return Ok(a.normalized());
    }
    if a.is_constant() || b.is_constant() {
        return Ok(Polynomial::one(a.ring()));
    }
    let ring = a.ring();
    let ia = Ideal::new(ring, [a.clone()])?;
    let ib = Ideal::new(ring, [b.clone()])?;
    let cap = ia.intersection(&ib)?.canonical();
    let lcm = cap.gens()[0].clone();
    let g = (a * b).exact_div(&lcm).ok_or_else(|| AlgebraError::Invalid("lcm does not divide the product".into()))?;
    Ok(g.normalized())
}

/// Radical of an ideal all of whose associated primes have dimension `|u|`
/// with `u` independent.
fn radical_unmixed(e: &Ideal, u: &[usize]) -> Result<Ideal> {
    let ring = e.ring();
    let n = ring.nvars();
    let field = ring.field();
    let degree = e.degree()? as u32;
    let mut extra = Vec::new();
    for j in (0..n).filter(|v| !u.contains(v)) {
        let mut vars = u.to_vec();
        vars.push(j);
        let target = aux_ring(field, vars.len());
        let f = image_relation(e, &variables(ring, &vars), &target, degree)?
            .ok_or_else(|| AlgebraError::DecompositionFailure("no relation within the degree bound".into()))?;
        let f = f.compose(&variables(ring, &vars))?;
        let part = if u.is_empty() {
            match field {
                Field::Rational => squarefree_part(&f)?,
                Field::Prime(_) => {
                    let fac = factor_univariate(&f)?;
                    fac.factors.iter().fold(Polynomial::one(ring), |acc, (g, _)| &acc * g)
                }
            }
        } else {
            // in characteristic p the derivative test is sound for degrees below p
            let p = field.characteristic();
            if p != 0 && f.degree_in(j) >= p {
                return Err(AlgebraError::DecompositionFailure(
                    "radical of a positive-dimensional ideal needs degrees below the characteristic".into(),
                ));
            }
            let g = poly_gcd(&f, &f.derivative(j))?;
            f.exact_div(&g).expect("gcd divides")
        };
        if !e.contains(&part)? {
            extra.push(part);
        }
    }
    if extra.is_empty() {
        return Ok(e.clone());
    }
    let sum = e.add_gens(extra)?;
    let h = contraction_multiplier(&sum, u)?;
    Ok(sum.saturation_poly(&h)?.canonical())
}

fn random_linear(ring: &RingRef, rng: &mut ChaCha8Rng, bound: i64) -> Polynomial {
    let terms = (0..ring.nvars()).map(|v| (Monomial::var(ring.nvars(), v), ring.field().from_i64(rng.gen_range(-bound..=bound))));
    Polynomial::from_terms(ring, terms)
}

/// Whether the linear forms define a finite map on `V(ideal)`, including
/// at infinity: the initial forms of the ideal together with the forms
/// cut out only the origin.
pub fn is_finite_projection(ideal: &Ideal, forms: &[Polynomial]) -> Result<bool> {
    let mut gens: Vec<Polynomial> = ideal.gb().polys().iter().map(|g| g.top_form()).collect();
    gens.extend(forms.iter().map(|f| f.top_form()));
    let cone = Ideal::new(ideal.ring(), gens)?;
    Ok(cone.is_unit() || cone.dimension()? == 0)
}

/// Prime components of a radical ideal whose associated primes all have
/// dimension `d`.
fn split_radical(r: &Ideal, d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Prime>> {
    let ring = r.ring();
    let field = ring.field();
    let degree = r.degree()?;
    if degree == 1 {
        return Ok(vec![Prime::new(r.clone())?]);
    }
    let target = aux_ring(field, d + 1);
    let mut bound = 3;
    for _ in 0..PROJECTION_TRIES {
        let forms: Vec<Polynomial> = (0..=d).map(|_| random_linear(ring, rng, bound)).collect();
        bound *= 2;
        if !is_finite_projection(r, &forms)? {
            continue;
        }
        let g = match image_relation(r, &forms, &target, degree as u32)? {
            Some(g) => g,
            None => continue,
        };
        if g.total_degree() as u64 != degree {
            continue;
        }
        let pieces = if d == 0 {
            factor_univariate(&g)?.factors.into_iter().map(|(f, _)| f).collect()
        } else if field == Field::Rational {
            factor_squarefree(&g)?
        } else {
            return Err(AlgebraError::DecompositionFailure(
                "positive-dimensional splitting needs characteristic zero".into(),
            ));
        };
        let pulled: Vec<Polynomial> = pieces.iter().map(|p| p.compose(&forms)).collect::<Result<_>>()?;
        if pulled.len() == 1 {
            return Ok(vec![Prime::new(r.clone())?]);
        }
        let mut primes = Vec::new();
        for (i, piece) in pieces.iter().enumerate() {
            let p = if d == 0 {
                r.add_gens([pulled[i].clone()])?
            } else {
                let mut others = Polynomial::one(ring);
                for (j, q) in pulled.iter().enumerate() {
                    if j != i {
                        others = &others * q;
                    }
                }
                r.saturation_poly(&others)?
            };
            let prime = Prime::new(p)?;
            if prime.dimension != d || prime.degree != piece.total_degree() as u64 {
                return Err(AlgebraError::DecompositionFailure(format!(
                    "component of degree {} does not match its image of degree {}",
                    prime.degree,
                    piece.total_degree()
                )));
            }
            primes.push(prime);
        }
        return Ok(primes);
    }
    Err(AlgebraError::DecompositionFailure(format!(
        "no birational finite projection found for a {d}-dimensional ideal of degree {degree}"
    )))
}

/// Candidate primes: a superset of the associated primes of dimension at
/// least `min_dim`, with all minimal primes of such dimension among them.
fn candidates(j: &Ideal, min_dim: usize, minimal_only: bool, rng: &mut ChaCha8Rng) -> Result<Vec<Prime>> {
    if j.is_unit() {
        return Ok(Vec::new());
    }
    let j = j.canonical();
    let dim = j.dimension()?;
    if dim < min_dim {
        return Ok(Vec::new());
    }
    let n = j.ring().nvars();
    let u = max_independent_set(&j.gb().leading_monomials(), n);
    debug_assert_eq!(u.len(), dim);
    let h = contraction_multiplier(&j, &u)?;
    let (e, rest) = if h.is_constant() {
        (j.clone(), None)
    } else if minimal_only {
        (j.saturation_poly(&h)?, Some(j.add_gens([h.clone()])?))
    } else {
        let (m, e) = j.saturation_exponent(&h)?;
        (e.canonical(), Some(j.add_gens([h.pow(m as u32)])?))
    };
    let r = radical_unmixed(&e, &u)?;
    let mut out = split_radical(&r, dim, rng)?;
    if let Some(rest) = rest {
        out.extend(candidates(&rest, min_dim, minimal_only, rng)?);
    }
    Ok(dedup(out))
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_d3c0)
}

/// Minimal primes of `ideal`, sorted by decreasing dimension.
pub fn minimal_primes(ideal: &Ideal) -> Result<Vec<Prime>> {
    let cands = candidates(ideal, 0, true, &mut rng())?;
    let mut out: Vec<Prime> = Vec::new();
    for p in &cands {
        let redundant = cands.iter().any(|q| !q.same(p) && q.dimension > p.dimension && p.ideal.contains_ideal(&q.ideal).unwrap_or(false));
        if !redundant {
            out.push(p.clone());
        }
    }
    out.sort_by(|a, b| b.dimension.cmp(&a.dimension).then(a.degree.cmp(&b.degree)));
    Ok(out)
}

/// Associated primes of `ideal` of dimension at least `min_dim`, with the
/// length of the localization at each, sorted by decreasing dimension.
pub fn associated_primes(ideal: &Ideal, min_dim: usize) -> Result<Vec<(Prime, u64)>> {
    if ideal.is_unit() {
        return Ok(Vec::new());
    }
    let mut rng = rng();
    let cands = candidates(ideal, min_dim, false, &mut rng)?;
    let base = ideal.affine_series();
    let mut out = Vec::new();
    for p in &cands {
        // primes that must survive the saturation
        let keep: Vec<&Prime> = cands.iter().filter(|q| !q.same(p) && !q.ideal.contains_ideal(&p.ideal).unwrap_or(false)).collect();
        let f = separating_element(p, &keep, &mut rng)?;
        let sat = ideal.saturation_poly(&f)?;
        let diff = base.sub(&sat.affine_series()).reduced();
        let e = if diff.numerator.is_empty() || diff.power != p.dimension + 1 {
            0
        } else {
            diff.numerator.iter().sum::<i64>()
        };
        if e < 0 || e as u64 % p.degree != 0 {
            return Err(AlgebraError::DecompositionFailure(format!("inconsistent multiplicity {e} at a component of degree {}", p.degree)));
        }
        if e > 0 {
            out.push((p.clone(), e as u64 / p.degree));
        }
    }
    out.sort_by(|a, b| b.0.dimension.cmp(&a.0.dimension).then(a.0.degree.cmp(&b.0.degree)));
    Ok(out)
}

/// An element of `p` outside every prime in `avoid`.
fn separating_element(p: &Prime, avoid: &[&Prime], rng: &mut ChaCha8Rng) -> Result<Polynomial> {
    let gens = p.ideal.gb().polys().to_vec();
    let ring = p.ideal.ring();
    let ok = |f: &Polynomial| -> Result<bool> {
        for q in avoid {
            if q.ideal.contains(f)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    for g in &gens {
        if ok(g)? {
            return Ok(g.clone());
        }
    }
    let mut bound = 3;
    for _ in 0..20 {
        let mut f = Polynomial::zero(ring);
        for g in &gens {
            f = &f + &g.scalar_mul(&ring.field().from_i64(rng.gen_range(-bound..=bound)));
        }
        if !f.is_zero() && ok(&f)? {
            return Ok(f);
        }
        bound *= 2;
    }
    Err(AlgebraError::DecompositionFailure("no element separating a prime from the others".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    fn ring3() -> RingRef {
        Ring::new(Field::Rational, ["x", "y", "z"])
    }

    fn summary(v: &[(Prime, u64)]) -> Vec<(usize, u64, u64)> {
        v.iter().map(|(p, l)| (p.dimension, p.degree, *l)).collect()
    }

    #[test]
    fn relation_of_twisted_cubic_projection() {
        let r = ring3();
        let i = Ideal::parse(&r, "y - x^2, z - x^3").unwrap();
        let t = aux_ring(Field::Rational, 2);
        let forms = vec![parse_polynomial(&r, "x").unwrap(), parse_polynomial(&r, "z").unwrap()];
        let g = minimal_relation(&i, &forms, &t, 5).unwrap().unwrap();
        assert_eq!(g.to_string(), "y0^3 - y1");
    }

    #[test]
    fn embedded_point() {
        let r = Ring::new(Field::Rational, ["x", "y"]);
        let a = associated_primes(&Ideal::parse(&r, "x^2, x*y").unwrap(), 0).unwrap();
        assert_eq!(summary(&a), vec![(1, 1, 1), (0, 1, 1)]);
    }

    #[test]
    fn double_line_and_points() {
        let r = Ring::new(Field::Rational, ["x", "y"]);
        let a = associated_primes(&Ideal::parse(&r, "x^2").unwrap(), 0).unwrap();
        assert_eq!(summary(&a), vec![(1, 1, 2)]);
        // four rational points, one of them doubled
        let a = associated_primes(&Ideal::parse(&r, "x^2 - x, y^3 - y^2").unwrap(), 0).unwrap();
        let lengths: Vec<u64> = a.iter().map(|(_, l)| *l).collect();
        assert_eq!(lengths.iter().sum::<u64>(), 6);
        assert_eq!(a.len(), 4);
    }

    #[test]
    fn irrational_points_stay_together() {
        let r = Ring::new(Field::Rational, ["x", "y"]);
        let a = associated_primes(&Ideal::parse(&r, "x^2 - 2, y - x").unwrap(), 0).unwrap();
        assert_eq!(summary(&a), vec![(0, 2, 1)]);
    }

    #[test]
    fn curve_components() {
        let r = ring3();
        // union of the x-axis, the y-axis and a conic in the plane z = 1
        let i = Ideal::parse(&r, "y, z").unwrap()
            .intersection(&Ideal::parse(&r, "x, z").unwrap()).unwrap()
            .intersection(&Ideal::parse(&r, "z - 1, x^2 + y^2 - 1").unwrap()).unwrap();
        let m = minimal_primes(&i).unwrap();
        let mut degs: Vec<u64> = m.iter().map(|p| p.degree).collect();
        degs.sort();
        assert_eq!(degs, vec![1, 1, 2]);
    }

    #[test]
    fn cusp_family_special_fibre() {
        let r = Ring::new(Field::Rational, ["x", "y", "z", "s"]);
        let i = Ideal::parse(&r, "x^2 - y^3, z^2, x*z, y*z, s").unwrap();
        let a = associated_primes(&i, 0).unwrap();
        // the plane cusp with length 1 plus an embedded point at the origin
        assert_eq!(summary(&a), vec![(1, 3, 1), (0, 1, 1)]);
    }

    #[test]
    fn mixed_dimension_over_fp() {
        let r = Ring::new(Field::prime(7).unwrap(), ["x", "y"]);
        let a = associated_primes(&Ideal::parse(&r, "x^3, x*y^2").unwrap(), 0);
        // (x) with length 1; at the origin (x)/(x^3, x y^2) has basis x, x^2, x y, x^2 y
        let a = a.unwrap();
        assert_eq!(summary(&a), vec![(1, 1, 1), (0, 1, 4)]);
    }
}
