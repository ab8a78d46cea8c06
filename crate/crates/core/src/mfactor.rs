//! Factorization of square-free multivariate polynomials over `Q`.
//!
//! A random linear change of coordinates makes the polynomial monic in one
//! variable; the factors of a univariate specialization are Hensel-lifted in
//! the remaining variables and recombined by trial division.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{AlgebraError, Result};
use crate::factor::{factor_univariate, q_add, q_divrem, q_inverse_mod, q_mul, q_sub, Qp};
use crate::field::{Field, FieldElement};
use crate::monomial::Monomial;
use crate::poly::Polynomial;

/// Polynomial in `z` with coefficients dense in the main variable.
type ZPoly = BTreeMap<Vec<u32>, Qp>;

fn zdeg(m: &[u32]) -> u32 {
    m.iter().sum()
}

fn truncated_mul(a: &ZPoly, b: &ZPoly, max: u32) -> ZPoly {
    let mut out: ZPoly = BTreeMap::new();
    for (ma, ca) in a {
        let da = zdeg(ma);
        for (mb, cb) in b {
            if da + zdeg(mb) > max {
                continue;
            }
            let m: Vec<u32> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            let prod = q_mul(ca, cb);
            let e = out.entry(m).or_default();
            *e = q_add(e, &prod);
        }
    }
    out.retain(|_, v| !v.is_empty());
    out
}

fn rational(c: &FieldElement) -> BigRational {
    c.as_rational().expect("rational coefficients").clone()
}

/// Splits `p` into a map `z-exponents -> dense coefficients in main`.
fn to_zpoly(p: &Polynomial, main: usize, others: &[usize]) -> ZPoly {
    let mut out: ZPoly = BTreeMap::new();
    for (m, c) in p.terms() {
        let key: Vec<u32> = others.iter().map(|&v| m[v]).collect();
        let k = m[main] as usize;
        let e = out.entry(key).or_default();
        if e.len() <= k {
            e.resize(k + 1, BigRational::zero());
        }
        e[k] += rational(c);
    }
    out
}

fn from_zpoly(ring: &crate::poly::RingRef, z: &ZPoly, main: usize, others: &[usize]) -> Polynomial {
    let n = ring.nvars();
    let mut terms = Vec::new();
    for (key, coeffs) in z {
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut e = vec![0u32; n];
            e[main] = k as u32;
            for (i, &v) in others.iter().enumerate() {
                e[v] = key[i];
            }
            terms.push((Monomial::from_exponents(e), FieldElement::Rational(c.clone())));
        }
    }
    Polynomial::from_terms(ring, terms)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Irreducible factors over `Q` of a square-free polynomial, each
/// normalized (primitive, positive lex-leading coefficient).
pub fn factor_squarefree(g: &Polynomial) -> Result<Vec<Polynomial>> {
    let ring = g.ring().clone();
    if ring.field() != Field::Rational {
        let fac = factor_univariate(g)?;
        return Ok(fac.factors.into_iter().map(|(f, _)| f.normalized()).collect());
    }
    if g.is_constant() {
        return Ok(Vec::new());
    }
    let vars = g.variables();
    if vars.len() == 1 {
        let fac = factor_univariate(g)?;
        if fac.factors.iter().any(|(_, e)| *e > 1) {
            return Err(AlgebraError::Invalid("input is not square-free".into()));
        }
        return Ok(fac.factors.into_iter().map(|(f, _)| f.normalized()).collect());
    }
    let main = vars[0];
    let others: Vec<usize> = vars[1..].to_vec();
    let total = g.total_degree();
    let mut rng = ChaCha8Rng::seed_from_u64(0xfac7 ^ total as u64);
    let field = ring.field();
    for attempt in 0..40 {
        let spread = 3 + attempt as i64 / 8;
        // y_i -> y_i + c_i * main makes the main-variable leading coefficient constant
        let shifts: Vec<i64> = others.iter().map(|_| rng.gen_range(-spread..=spread)).collect();
        let mut images: Vec<Polynomial> = (0..ring.nvars()).map(|i| Polynomial::var(&ring, i)).collect();
        for (i, &v) in others.iter().enumerate() {
            images[v] = &Polynomial::var(&ring, v) + &Polynomial::var(&ring, main).scalar_mul(&field.from_i64(shifts[i]));
        }
        let h = g.compose(&images)?;
        if h.degree_in(main) != total {
            continue;
        }
        let h = h.monic_in(&crate::monomial::MonomialOrder::lex().with_perm(
            std::iter::once(main).chain((0..ring.nvars()).filter(|&v| v != main)).collect(),
        ));
        // evaluation point for the other variables
        let point: Vec<i64> = others.iter().map(|_| rng.gen_range(-4 - attempt as i64..=4 + attempt as i64)).collect();
        let mut shift_images: Vec<Polynomial> = (0..ring.nvars()).map(|i| Polynomial::var(&ring, i)).collect();
        for (i, &v) in others.iter().enumerate() {
            shift_images[v] = &Polynomial::var(&ring, v) + &Polynomial::from_i64(&ring, point[i]);
        }
        let hz = h.compose(&shift_images)?;
        let gz = to_zpoly(&hz, main, &others);
        let zero_key = vec![0u32; others.len()];
        let f0 = match gz.get(&zero_key) {
            Some(f) if f.len() == total as usize + 1 => f.clone(),
            _ => continue,
        };
        let f0_poly = Polynomial::from_univariate(&ring, main, &f0.iter().map(|c| FieldElement::Rational(c.clone())).collect::<Vec<_>>());
        let fac = factor_univariate(&f0_poly)?;
        if fac.factors.iter().any(|(_, e)| *e > 1) {
            continue;
        }
        if fac.factors.len() == 1 {
            return Ok(vec![g.normalized()]);
        }
        let us: Vec<Qp> = fac
            .factors
            .iter()
            .map(|(f, _)| {
                let (_, cs) = f.as_univariate().unwrap();
                let cs: Qp = cs.iter().map(rational).collect();
                let lc = cs.last().unwrap().clone();
                cs.iter().map(|c| c / &lc).collect()
            })
            .collect();
        let lifted = hensel_lift(&gz, &us, total, others.len());
        // recombination by trial division
        let mut remaining: Vec<usize> = (0..lifted.len()).collect();
        let mut current = h.clone();
        let mut found: Vec<Polynomial> = Vec::new();
        let mut size = 1;
        'outer: while 2 * size <= remaining.len() {
            for sub in subsets(remaining.len(), size) {
                let idx: Vec<usize> = sub.iter().map(|&i| remaining[i]).collect();
                let mut prod: ZPoly = BTreeMap::new();
                prod.insert(zero_key.clone(), vec![BigRational::one()]);
                for &k in &idx {
                    prod = truncated_mul(&prod, &lifted[k], total);
                }
                let cand_z = from_zpoly(&ring, &prod, main, &others);
                let mut unshift: Vec<Polynomial> = (0..ring.nvars()).map(|i| Polynomial::var(&ring, i)).collect();
                for (i, &v) in others.iter().enumerate() {
                    unshift[v] = &Polynomial::var(&ring, v) - &Polynomial::from_i64(&ring, point[i]);
                }
                let cand = cand_z.compose(&unshift)?;
                if cand.is_constant() {
                    continue;
                }
                if let Some(q) = current.exact_div(&cand) {
                    found.push(cand);
                    current = q;
                    remaining.retain(|k| !idx.contains(k));
                    continue 'outer;
                }
            }
            size += 1;
        }
        if !current.is_constant() {
            found.push(current);
        }
        // undo the coordinate change
        let mut back: Vec<Polynomial> = (0..ring.nvars()).map(|i| Polynomial::var(&ring, i)).collect();
        for (i, &v) in others.iter().enumerate() {
            back[v] = &Polynomial::var(&ring, v) - &Polynomial::var(&ring, main).scalar_mul(&field.from_i64(shifts[i]));
        }
        let mut out = Vec::new();
        for f in found {
            out.push(f.compose(&back)?.normalized());
        }
        out.sort_by_key(|f| (f.total_degree(), f.to_string()));
        return Ok(out);
    }
    Err(AlgebraError::DecompositionFailure("no good specialization for multivariate factorization".into()))
}

/// Lifts monic pairwise coprime `us` with `prod(us) = g mod z` to factors
/// modulo `z^(max + 1)`.
fn hensel_lift(g: &ZPoly, us: &[Qp], max: u32, nz: usize) -> Vec<ZPoly> {
    let zero_key = vec![0u32; nz];
    let f: Qp = us.iter().fold(vec![BigRational::one()], |acc, u| q_mul(&acc, u));
    let cof: Vec<Qp> = us.iter().map(|u| q_inverse_mod(&q_divrem(&f, u).0, u)).collect();
    let mut lifted: Vec<ZPoly> = us
        .iter()
        .map(|u| {
            let mut m = BTreeMap::new();
            m.insert(zero_key.clone(), u.clone());
            m
        })
        .collect();
    for deg in 1..=max {
        let mut prod: ZPoly = BTreeMap::new();
        prod.insert(zero_key.clone(), vec![BigRational::one()]);
        for l in &lifted {
            prod = truncated_mul(&prod, l, deg);
        }
        let keys: std::collections::BTreeSet<Vec<u32>> =
            g.keys().chain(prod.keys()).filter(|k| zdeg(k) == deg).cloned().collect();
        for key in keys {
            let target = g.get(&key).cloned().unwrap_or_default();
            let have = prod.get(&key).cloned().unwrap_or_default();
            let e = q_sub(&target, &have);
            if e.is_empty() {
                continue;
            }
            for (k, u) in us.iter().enumerate() {
                let delta = q_divrem(&q_mul(&e, &cof[k]), u).1;
                if delta.is_empty() {
                    continue;
                }
                let slot = lifted[k].entry(key.clone()).or_default();
                *slot = q_add(slot, &delta);
            }
        }
    }
    lifted
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use crate::poly::Ring;

    fn check(src: &str, expected: usize) {
        let r = Ring::new(Field::Rational, ["x", "y", "z"]);
        let g = parse_polynomial(&r, src).unwrap();
        let fs = factor_squarefree(&g).unwrap();
        assert_eq!(fs.len(), expected, "{src}: {fs:?}");
        let mut prod = Polynomial::one(&r);
        for f in &fs {
            prod = &prod * f;
        }
        assert_eq!(prod.normalized(), g.normalized());
    }

    #[test]
    fn bivariate_splits() {
        check("x^2 - y^2", 2);
        check("y^2 - x^3", 1);
        check("(x^2 + y^2 - 1)*(x - y^3)", 2);
        check("x^4 - y^4", 3);
    }

    #[test]
    fn trivariate_splits() {
        check("(x*y - z)*(x + y + z + 1)*(x^2 - y*z)", 3);
        check("x^2 + y^2 + z^2", 1);
    }

    #[test]
    fn monic_needs_change_of_coordinates() {
        // leading coefficient in x is y, forcing the random shear
        check("(x*y - 1)*(x*y + 1)", 2);
    }
}
