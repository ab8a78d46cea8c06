//! Sparse multivariate polynomials over a [`Field`].

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{AlgebraError, Result};
use crate::field::{Field, FieldElement};
use crate::monomial::{Monomial, MonomialOrder};

/// A polynomial ring `K[x_1, ..., x_n]` with named variables.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    field: Field,
    vars: Vec<String>,
}

pub type RingRef = Arc<Ring>;

impl Ring {
    pub fn new<S: Into<String>>(field: Field, vars: impl IntoIterator<Item = S>) -> RingRef {
        Arc::new(Ring { field, vars: vars.into_iter().map(Into::into).collect() })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// A new ring with `extra` variables appended; the old variables keep their
    /// indices, so the embedding is `i -> i`.
    pub fn extend<S: Into<String>>(&self, extra: impl IntoIterator<Item = S>) -> RingRef {
        let mut vars = self.vars.clone();
        vars.extend(extra.into_iter().map(Into::into));
        Ring::new(self.field, vars)
    }

    /// The ring with variable `i` removed.
    pub fn without(&self, i: usize) -> RingRef {
        let mut vars = self.vars.clone();
        vars.remove(i);
        Ring::new(self.field, vars)
    }
}

pub(crate) fn same_ring(a: &RingRef, b: &RingRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[inline]
pub(crate) fn canonical_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    let (da, db) = (a.degree(), b.degree());
    if da != db {
        return da.cmp(&db);
    }
    let (ea, eb) = (a.exponents(), b.exponents());
    for j in (0..ea.len()).rev() {
        if ea[j] != eb[j] {
            return eb[j].cmp(&ea[j]);
        }
    }
    Ordering::Equal
}

/// A polynomial: a ring handle and its nonzero terms, sorted in descending
/// graded-reverse-lex order.
#[derive(Clone)]
pub struct Polynomial {
    ring: RingRef,
    terms: Vec<(Monomial, FieldElement)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl Polynomial {
    pub fn zero(ring: &RingRef) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn one(ring: &RingRef) -> Self {
        Self::constant(ring, ring.field().one())
    }

    pub fn constant(ring: &RingRef, c: FieldElement) -> Self {
        Self::term(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn from_i64(ring: &RingRef, c: i64) -> Self {
        Self::constant(ring, ring.field().from_i64(c))
    }

    pub fn var(ring: &RingRef, i: usize) -> Self {
        Self::term(ring, Monomial::var(ring.nvars(), i), ring.field().one())
    }

    pub fn term(ring: &RingRef, m: Monomial, c: FieldElement) -> Self {
        if c.is_zero() {
            return Self::zero(ring);
        }
        Polynomial { ring: ring.clone(), terms: vec![(m, c)] }
    }

    pub fn monomial(ring: &RingRef, m: Monomial) -> Self {
        Self::term(ring, m, ring.field().one())
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates and
    /// dropping zeros.
    pub fn from_terms(ring: &RingRef, terms: impl IntoIterator<Item = (Monomial, FieldElement)>) -> Self {
        let mut acc: HashMap<Monomial, FieldElement> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), ring.nvars());
            match acc.get_mut(&m) {
                Some(v) => *v = &*v + &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| canonical_cmp(&b.0, &a.0));
        Polynomial { ring: ring.clone(), terms }
    }

    /// Assumes `terms` are nonzero, distinct and already in canonical order.
    pub(crate) fn from_sorted_unchecked(ring: &RingRef, terms: Vec<(Monomial, FieldElement)>) -> Self {
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, FieldElement)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, FieldElement)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    pub fn total_degree(&self) -> u32 {
        self.degree().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m[var]).max().unwrap_or(0)
    }

    pub fn coefficient(&self, m: &Monomial) -> FieldElement {
        self.terms
            .iter()
            .find(|(t, _)| t == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.ring.field().zero())
    }

    pub fn constant_term(&self) -> FieldElement {
        self.coefficient(&Monomial::one(self.ring.nvars()))
    }

    /// Leading term under an arbitrary order.
    pub fn leading_term_in(&self, order: &MonomialOrder) -> Option<&(Monomial, FieldElement)> {
        self.terms.iter().max_by(|a, b| order.cmp(&a.0, &b.0))
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m, _)) => {
                let d = m.degree();
                self.terms.iter().all(|(t, _)| t.degree() == d)
            }
        }
    }

    /// Sum of the terms of top total degree.
    pub fn top_form(&self) -> Polynomial {
        let d = self.total_degree();
        let terms = self.terms.iter().filter(|(m, _)| m.degree() == d).cloned().collect();
        Polynomial::from_sorted_unchecked(&self.ring, terms)
    }

    /// Variables that occur in some term.
    pub fn variables(&self) -> Vec<usize> {
        let mut used = vec![false; self.ring.nvars()];
        for (m, _) in &self.terms {
            for i in m.support() {
                used[i] = true;
            }
        }
        used.iter().enumerate().filter(|(_, &u)| u).map(|(i, _)| i).collect()
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(AlgebraError::RingMismatch)
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.add_impl(other, None))
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.add_impl(other, Some(&-&self.ring.field().one())))
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.mul_impl(other))
    }

    /// `self + scale * other` by a sorted merge.
    fn add_impl(&self, other: &Polynomial, scale: Option<&FieldElement>) -> Polynomial {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let scaled = |c: &FieldElement| match scale {
            Some(s) => s * c,
            None => c.clone(),
        };
        while i < self.terms.len() && j < other.terms.len() {
            match canonical_cmp(&self.terms[i].0, &other.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((other.terms[j].0.clone(), scaled(&other.terms[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.terms[i].1 + &scaled(&other.terms[j].1);
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().map(|(m, c)| (m.clone(), scaled(c))));
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    fn mul_impl(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        if other.terms.len() == 1 {
            return self.mul_term(&other.terms[0].0, &other.terms[0].1);
        }
        if self.terms.len() == 1 {
            return other.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let mut acc: HashMap<Monomial, FieldElement> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let c = c1 * c2;
                match acc.get_mut(&m) {
                    Some(v) => *v = &*v + &c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| canonical_cmp(&b.0, &a.0));
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn mul_term(&self, m: &Monomial, c: &FieldElement) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        // multiplying by a monomial preserves graded reverse-lex order
        let terms = self.terms.iter().map(|(t, d)| (t.mul(m), d * c)).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn scalar_mul(&self, c: &FieldElement) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(t, d)| (t.clone(), d * c)).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ring);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_impl(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_impl(&base);
            }
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Polynomial {
        let f = self.ring.field();
        let terms = self.terms.iter().filter(|(m, _)| m[var] > 0).map(|(m, c)| {
            let mut e = m.exponents().to_vec();
            let k = e[var];
            e[var] -= 1;
            (Monomial::from_exponents(e), c * &f.from_i64(k as i64))
        });
        Polynomial::from_terms(&self.ring, terms)
    }

    pub fn eval(&self, point: &[FieldElement]) -> FieldElement {
        let mut acc = self.ring.field().zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = &t * &point[i].pow(e as u64);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Composition: variable `i` is replaced by `images[i]`; all images share
    /// the target ring.
    pub fn compose(&self, images: &[Polynomial]) -> Result<Polynomial> {
        assert_eq!(images.len(), self.ring.nvars());
        let target = match images.first() {
            Some(p) => p.ring.clone(),
            None => return Ok(self.clone()),
        };
        if images.iter().any(|p| !same_ring(&p.ring, &target)) {
            return Err(AlgebraError::RingMismatch);
        }
        let tf = target.field();
        let mut powers: Vec<Vec<Polynomial>> = images.iter().map(|p| vec![Polynomial::one(&target), p.clone()]).collect();
        let mut acc = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(&target, convert_coeff(c, tf)?);
            for (i, &e) in m.exponents().iter().enumerate() {
                let e = e as usize;
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().mul_impl(&images[i]);
                    powers[i].push(next);
                }
                t = t.mul_impl(&powers[i][e]);
            }
            acc = acc.add_impl(&t, None);
        }
        Ok(acc)
    }

    /// Substitution by variable name. Every variable that occurs in `self`
    /// must be mapped; variables with images are replaced wholesale.
    pub fn substitute(&self, target: &RingRef, map: &BTreeMap<String, Polynomial>) -> Result<Polynomial> {
        let used = self.variables();
        let mut images = Vec::with_capacity(self.ring.nvars());
        for (i, name) in self.ring.var_names().iter().enumerate() {
            match map.get(name) {
                Some(p) => {
                    if !same_ring(p.ring(), target) {
                        return Err(AlgebraError::RingMismatch);
                    }
                    images.push(p.clone());
                }
                None if used.contains(&i) => return Err(AlgebraError::UnmappedVariable(name.clone())),
                None => images.push(Polynomial::zero(target)),
            }
        }
        if images.is_empty() {
            return Ok(Polynomial::constant(target, self.constant_term()));
        }
        self.compose(&images)
    }

    /// Re-expresses the polynomial in `target`, sending variable `i` to
    /// variable `embedding[i]`.
    pub fn embed(&self, target: &RingRef, embedding: &[usize]) -> Polynomial {
        let n = target.nvars();
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0; n];
            for (i, &k) in m.exponents().iter().enumerate() {
                e[embedding[i]] += k;
            }
            (Monomial::from_exponents(e), c.clone())
        });
        Polynomial::from_terms(target, terms)
    }

    /// Homogenizes with a new variable appended at the end of the ring.
    pub fn homogenize(&self, new_var: &str) -> Polynomial {
        let ring = self.ring.extend([new_var]);
        self.homogenize_into(&ring, ring.nvars() - 1)
    }

    /// Homogenizes into `ring`, which must extend `self.ring()` by inserting
    /// the homogenizing variable at index `h` (other variables keep order).
    pub fn homogenize_into(&self, ring: &RingRef, h: usize) -> Polynomial {
        let d = self.total_degree();
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = m.exponents().to_vec();
            e.insert(h, d - m.degree());
            (Monomial::from_exponents(e), c.clone())
        });
        Polynomial::from_terms(ring, terms)
    }

    /// Sets variable `var` to 1 and drops it from the ring.
    pub fn dehomogenize(&self, var: usize) -> Polynomial {
        let ring = self.ring.without(var);
        self.dehomogenize_into(&ring, var)
    }

    pub fn dehomogenize_into(&self, ring: &RingRef, var: usize) -> Polynomial {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = m.exponents().to_vec();
            e.remove(var);
            (Monomial::from_exponents(e), c.clone())
        });
        Polynomial::from_terms(ring, terms)
    }

    /// Scales so that the result is canonical up to units: over `Q` the
    /// primitive integer polynomial whose lex-leading coefficient is positive,
    /// over `F_p` the lex-monic polynomial.
    pub fn normalized(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let lex = MonomialOrder::lex();
        let lead = self.leading_term_in(&lex).unwrap().1.clone();
        match self.ring.field() {
            Field::Prime(_) => self.scalar_mul(&lead.inv()),
            Field::Rational => {
                let mut den = BigInt::one();
                let mut num = BigInt::zero();
                for (_, c) in &self.terms {
                    let q = c.as_rational().unwrap();
                    den = den.lcm(q.denom());
                    num = num.gcd(q.numer());
                }
                let mut scale = BigRational::new(den, num);
                if lead.signum() < 0 {
                    scale = -scale;
                }
                self.scalar_mul(&FieldElement::Rational(scale))
            }
        }
    }

    /// Divides by the leading coefficient in the given order.
    pub fn monic_in(&self, order: &MonomialOrder) -> Polynomial {
        match self.leading_term_in(order) {
            None => self.clone(),
            Some((_, c)) => self.scalar_mul(&c.inv()),
        }
    }

    /// Polynomial in a single variable as coefficient vector (low degree
    /// first), or `None` when more than one variable occurs.
    pub fn as_univariate(&self) -> Option<(Option<usize>, Vec<FieldElement>)> {
        let vars = self.variables();
        if vars.len() > 1 {
            return None;
        }
        let v = vars.first().copied();
        let deg = v.map(|v| self.degree_in(v)).unwrap_or(0) as usize;
        let mut coeffs = vec![self.ring.field().zero(); deg + 1];
        for (m, c) in &self.terms {
            let k = v.map(|v| m[v]).unwrap_or(0) as usize;
            coeffs[k] = c.clone();
        }
        Some((v, coeffs))
    }

    pub fn from_univariate(ring: &RingRef, var: usize, coeffs: &[FieldElement]) -> Polynomial {
        let n = ring.nvars();
        let terms = coeffs.iter().enumerate().map(|(k, c)| {
            let mut e = vec![0; n];
            e[var] = k as u32;
            (Monomial::from_exponents(e), c.clone())
        });
        Polynomial::from_terms(ring, terms)
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Polynomial) -> Option<Polynomial> {
        assert!(!divisor.is_zero());
        let (lm, lc) = divisor.terms[0].clone();
        let lc_inv = lc.inv();
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(&self.ring);
        while let Some((m, c)) = rem.terms.first().cloned() {
            if !lm.divides(&m) {
                return None;
            }
            let q = lm.quotient_of(&m);
            let qc = &c * &lc_inv;
            quot = quot.add_impl(&Polynomial::term(&self.ring, q.clone(), qc.clone()), None);
            rem = rem.add_impl(&divisor.mul_term(&q, &qc), Some(&-&self.ring.field().one()));
        }
        Some(quot)
    }
}

pub(crate) fn convert_coeff(c: &FieldElement, target: Field) -> Result<FieldElement> {
    if c.field() == target {
        return Ok(c.clone());
    }
    match c {
        FieldElement::Rational(q) => target.from_rational(q),
        _ => Err(AlgebraError::RingMismatch),
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("ring mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("ring mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("ring mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.signum() < 0;
            let abs = if neg { -c } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mut factors = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ring.vars[i].clone()),
                    _ => factors.push(format!("{}^{}", self.ring.vars[i], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use proptest::prelude::*;

    fn q3() -> RingRef {
        Ring::new(Field::Rational, ["x", "y", "z"])
    }

    fn p(ring: &RingRef, s: &str) -> Polynomial {
        parse_polynomial(ring, s).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let r = q3();
        assert_eq!(&p(&r, "x+y") * &p(&r, "x-y"), p(&r, "x^2-y^2"));
        assert_eq!(&p(&r, "x+y") + &Polynomial::zero(&r), p(&r, "x+y"));
    }

    #[test]
    fn frobenius_in_char_two() {
        let r = Ring::new(Field::prime(2).unwrap(), ["x", "y"]);
        assert_eq!(p(&r, "x+y").pow(2), p(&r, "x^2+y^2"));
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let a = q3();
        let b = Ring::new(Field::Rational, ["u"]);
        assert_eq!(p(&a, "x").checked_mul(&p(&b, "u")), Err(AlgebraError::RingMismatch));
    }

    #[test]
    fn substitution_examples() {
        let r = Ring::new(Field::Rational, ["x", "y", "t"]);
        let mut map = BTreeMap::new();
        map.insert("x".to_string(), p(&r, "t"));
        map.insert("y".to_string(), p(&r, "t^2"));
        map.insert("t".to_string(), p(&r, "t"));
        assert!(p(&r, "x^2-y").substitute(&r, &map).unwrap().is_zero());

        let ident: BTreeMap<_, _> = ["x", "y", "t"].iter().map(|v| (v.to_string(), p(&r, v))).collect();
        let f = p(&r, "x^3*y - 2*t + 1/3");
        assert_eq!(f.substitute(&r, &ident).unwrap(), f);

        let mut partial = BTreeMap::new();
        partial.insert("x".to_string(), p(&r, "y"));
        assert_eq!(f.substitute(&r, &partial), Err(AlgebraError::UnmappedVariable("y".into())));
    }

    #[test]
    fn shifted_cusp_expansion() {
        // g(x1 + a1 x3, x2 + a2 x3) for g = x1^3 + x2^5, a = (2, -1)
        let r = Ring::new(Field::Rational, ["x1", "x2", "x3"]);
        let g = p(&r, "x1^3 + x2^5");
        let images = vec![p(&r, "x1 + 2*x3"), p(&r, "x2 - x3"), p(&r, "x3")];
        let f = g.compose(&images).unwrap();
        let expected = &p(&r, "(x1 + 2*x3)^3") + &p(&r, "(x2 - x3)^5");
        assert_eq!(f, expected);
        assert_eq!(f.coefficient(&Monomial::from_exponents(vec![1, 0, 2])), Field::Rational.from_i64(12));
    }

    #[test]
    fn homogenize_examples() {
        let r = Ring::new(Field::Rational, ["x", "y"]);
        let h = p(&r, "x^2 - y").homogenize("x0");
        assert_eq!(h.to_string(), "x^2 - y*x0");
        assert!(Polynomial::one(&r).homogenize("x0").is_one());
        let f = p(&r, "x^2 - y^5");
        let hf = f.homogenize("x0");
        assert_eq!(hf.to_string(), "-y^5 + x^2*x0^3");
        assert_eq!(hf.dehomogenize(2), f);
    }

    #[test]
    fn normalization_is_primitive_with_positive_lead() {
        let r = q3();
        assert_eq!(p(&r, "-2/3*x^2 + 4/9*y").normalized(), p(&r, "3*x^2 - 2*y"));
    }

    fn small_poly(ring: RingRef) -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((prop::collection::vec(0u32..3, 3), -3i64..4), 0..5).prop_map(move |ts| {
            let f = ring.field();
            Polynomial::from_terms(&ring, ts.into_iter().map(|(e, c)| (Monomial::from_exponents(e), f.from_i64(c))))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 64, rng_seed: proptest::test_runner::RngSeed::Fixed(3), failure_persistence: None, ..ProptestConfig::default() })]
        #[test]
        fn ring_axioms(a in small_poly(q3()), b in small_poly(q3()), c in small_poly(q3())) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn substitution_is_a_homomorphism(a in small_poly(q3()), b in small_poly(q3()),
                                          i0 in small_poly(q3()), i1 in small_poly(q3()), i2 in small_poly(q3())) {
            let images = vec![i0, i1, i2];
            let lhs = (&a * &b).compose(&images).unwrap();
            let rhs = &a.compose(&images).unwrap() * &b.compose(&images).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn homogenization_round_trip(a in small_poly(q3())) {
            let h = a.homogenize("h");
            prop_assert!(h.is_homogeneous());
            prop_assert_eq!(h.total_degree(), a.total_degree());
            prop_assert_eq!(h.dehomogenize(3), a);
        }
    }
}
