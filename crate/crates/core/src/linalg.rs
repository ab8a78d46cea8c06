//! Exact linear algebra on polynomials viewed as coefficient vectors.

use std::collections::BTreeMap;

use crate::field::FieldElement;
use crate::monomial::Monomial;
use crate::poly::Polynomial;

/// Sparse combination `Σ c_i v_i` over inserted vectors, keyed by insertion index.
pub type Combination = BTreeMap<usize, FieldElement>;

fn axpy(acc: &mut Combination, c: &FieldElement, x: &Combination) {
    for (k, v) in x {
        let prod = c * v;
        let e = acc.entry(*k).or_insert_with(|| prod.field().zero());
        *e = &*e + &prod;
        if e.is_zero() {
            acc.remove(k);
        }
    }
}

/// Echelon basis of the span of inserted polynomials, pivoted on the first
/// term of each row; optionally tracks how each row combines the inputs.
#[derive(Clone, Debug, Default)]
pub struct Span {
    rows: BTreeMap<Monomial, (Polynomial, Combination)>,
    inserted: usize,
    track: bool,
}

impl Span {
    pub fn new(track: bool) -> Self {
        Span { rows: BTreeMap::new(), inserted: 0, track }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Number of vectors inserted so far, dependent ones included.
    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Remainder of `p` against the rows, and the combination of inputs
    /// that was subtracted (so `p = remainder + Σ c_i v_i`).
    pub fn reduce(&self, p: &Polynomial) -> (Polynomial, Combination) {
        let mut v = p.clone();
        let mut used = Combination::new();
        let mut skipped: Vec<(Monomial, FieldElement)> = Vec::new();
        while let Some((lead, c)) = v.terms().first().cloned() {
            match self.rows.get(&lead) {
                Some((rv, rc)) => {
                    v = &v - &rv.scalar_mul(&c);
                    if self.track {
                        axpy(&mut used, &c, rc);
                    }
                }
                None => {
                    // keep the unmatched term aside and continue with the tail
                    skipped.push((lead.clone(), c.clone()));
                    v = &v - &Polynomial::term(p.ring(), lead, c);
                }
            }
        }
        (Polynomial::from_terms(p.ring(), skipped), used)
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.reduce(p).0.is_zero()
    }

    /// Adds `p`; returns whether it enlarged the span.
    pub fn insert(&mut self, p: &Polynomial) -> bool {
        let index = self.inserted;
        self.inserted += 1;
        let (r, used) = self.reduce(p);
        if r.is_zero() {
            return false;
        }
        let (lead, c) = r.terms()[0].clone();
        let inv = c.inv();
        let mut combo = Combination::new();
        if self.track {
            // r = p - Σ used_i v_i
            combo.insert(index, p.ring().field().one());
            axpy(&mut combo, &-&p.ring().field().one(), &used);
            combo = combo.into_iter().map(|(k, v)| (k, &v * &inv)).collect();
        }
        let row = r.scalar_mul(&inv);
        // keep rows fully reduced against the new pivot
        let keys: Vec<Monomial> = self.rows.keys().cloned().collect();
        for k in keys {
            let (rv, rc) = self.rows.get(&k).unwrap();
            let coef = rv.coefficient(&lead);
            if !coef.is_zero() {
                let nv = rv - &row.scalar_mul(&coef);
                let mut nc = rc.clone();
                if self.track {
                    axpy(&mut nc, &-&coef, &combo);
                }
                self.rows.insert(k, (nv, nc));
            }
        }
        self.rows.insert(lead, (row, combo));
        true
    }

    /// Coefficients `c_i` with `target = Σ c_i v_i`, if `target` is in the span.
    pub fn express(&self, target: &Polynomial) -> Option<Combination> {
        assert!(self.track, "express needs a tracking span");
        let (r, used) = self.reduce(target);
        r.is_zero().then_some(used)
    }

    /// The echelon rows.
    pub fn basis(&self) -> Vec<Polynomial> {
        self.rows.values().map(|(p, _)| p.clone()).collect()
    }
}

fn truncate(p: &Polynomial, n: u32) -> Polynomial {
    Polynomial::from_terms(p.ring(), p.terms().iter().filter(|(m, _)| m.degree() < n).cloned())
}

/// Whether `f ∈ (gens) + m^n`, `m` the maximal ideal of the origin. A
/// negative answer proves `f ∉ (gens)`.
pub fn contains_mod_power(gens: &[Polynomial], f: &Polynomial, n: u32) -> bool {
    let ring = f.ring();
    let mut span = Span::new(false);
    let shifts = Monomial::up_to_degree(ring.nvars(), n.saturating_sub(1));
    for g in gens {
        let low = g.terms().iter().map(|(m, _)| m.degree()).min().unwrap_or(n);
        for m in shifts.iter().filter(|m| m.degree() + low < n) {
            let t = truncate(&g.mul_term(m, &ring.field().one()), n);
            if !t.is_zero() {
                span.insert(&t);
            }
        }
    }
    span.contains(&truncate(f, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::parse::parse_polynomial;
    use crate::poly::Ring;

    #[test]
    fn express_recovers_combination() {
        let r = Ring::new(Field::Rational, ["x", "y"]);
        let vs: Vec<Polynomial> = ["x + y", "x - y", "x^2", "2*x"].iter().map(|s| parse_polynomial(&r, s).unwrap()).collect();
        let mut span = Span::new(true);
        let added: Vec<bool> = vs.iter().map(|v| span.insert(v)).collect();
        assert_eq!(added, vec![true, true, true, false]);
        let target = parse_polynomial(&r, "3*x^2 + y").unwrap();
        let c = span.express(&target).unwrap();
        let mut sum = Polynomial::zero(&r);
        for (i, k) in &c {
            sum = &sum + &vs[*i].scalar_mul(k);
        }
        assert_eq!(sum, target);
        assert!(span.express(&parse_polynomial(&r, "y^2").unwrap()).is_none());
    }

    #[test]
    fn local_membership() {
        let r = Ring::new(Field::Rational, ["x", "y"]);
        let gens = vec![parse_polynomial(&r, "y - x^2").unwrap()];
        // y - x^2 + x^2 is in the ideal; x alone is not, already modulo m^2
        assert!(contains_mod_power(&gens, &parse_polynomial(&r, "y*x - x^3").unwrap(), 5));
        assert!(!contains_mod_power(&gens, &parse_polynomial(&r, "x").unwrap(), 2));
        // y - x^2 ≡ y mod m^2, so y is in (gens) + m^2 but not in (gens) + m^3
        let y = parse_polynomial(&r, "y").unwrap();
        assert!(contains_mod_power(&gens, &y, 2));
        assert!(!contains_mod_power(&gens, &y, 3));
    }
}
