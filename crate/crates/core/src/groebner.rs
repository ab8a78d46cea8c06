//! Buchberger's algorithm with the Gebauer–Möller pair criteria and sugar
//! selection, normal forms, and lifts of ideal members to cofactors.
//!
//! Over `Q` bases are computed fraction-free with primitive integer
//! polynomials; normal forms and cofactor tracking work with field
//! coefficients.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{AlgebraError, Result};
use crate::field::{Field, FieldElement};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{same_ring, Polynomial, RingRef};

pub(crate) type Terms<C> = Vec<(Monomial, C)>;

pub(crate) trait Domain: Sync {
    type C: Clone + PartialEq + Send + Sync;
    const IS_FIELD: bool;
    fn is_zero(&self, a: &Self::C) -> bool;
    fn is_one(&self, a: &Self::C) -> bool;
    fn one(&self) -> Self::C;
    fn add(&self, a: &Self::C, b: &Self::C) -> Self::C;
    fn mul(&self, a: &Self::C, b: &Self::C) -> Self::C;
    fn neg(&self, a: &Self::C) -> Self::C;
    /// `(u, v)` with `u * a == v * b`; `u` is one over a field.
    fn cancel(&self, a: &Self::C, b: &Self::C) -> (Self::C, Self::C);
    /// Divides out the content (over a field: the leading coefficient) and
    /// returns the removed factor.
    fn normalize(&self, t: &mut Terms<Self::C>) -> Self::C;
}

pub(crate) struct ZDomain;

impl Domain for ZDomain {
    type C = BigInt;
    const IS_FIELD: bool = false;
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigInt) -> bool {
        a.is_one()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn cancel(&self, a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
        let g = a.gcd(b);
        let (mut u, mut v) = (b / &g, a / &g);
        if u.is_negative() {
            u = -u;
            v = -v;
        }
        (u, v)
    }
    fn normalize(&self, t: &mut Terms<BigInt>) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in t.iter() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        if g.is_zero() {
            return BigInt::one();
        }
        if t[0].1.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for (_, c) in t.iter_mut() {
                *c = &*c / &g;
            }
        }
        g
    }
}

pub(crate) struct FDomain(pub Field);

impl Domain for FDomain {
    type C = FieldElement;
    const IS_FIELD: bool = true;
    fn is_zero(&self, a: &FieldElement) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &FieldElement) -> bool {
        a.is_one()
    }
    fn one(&self) -> FieldElement {
        self.0.one()
    }
    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        a + b
    }
    fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        a * b
    }
    fn neg(&self, a: &FieldElement) -> FieldElement {
        -a
    }
    fn cancel(&self, a: &FieldElement, b: &FieldElement) -> (FieldElement, FieldElement) {
        (self.0.one(), a / b)
    }
    fn normalize(&self, t: &mut Terms<FieldElement>) -> FieldElement {
        match t.first() {
            None => self.0.one(),
            Some((_, lc)) if lc.is_one() => self.0.one(),
            Some((_, lc)) => {
                let lc = lc.clone();
                let inv = lc.inv();
                for (_, c) in t.iter_mut() {
                    *c = &*c * &inv;
                }
                lc
            }
        }
    }
}

#[inline]
fn sev(m: &Monomial) -> u64 {
    let mut s = 0u64;
    for (i, &e) in m.exponents().iter().enumerate() {
        if e > 0 {
            s |= 1 << (i % 64);
        }
    }
    s
}

/// `u * p * f - v * q * g`, all term lists sorted descending in `order`.
#[allow(clippy::too_many_arguments)]
fn lincomb<D: Domain>(
    d: &D,
    order: &MonomialOrder,
    u: &D::C,
    p: Option<&Monomial>,
    f: &[(Monomial, D::C)],
    v: &D::C,
    q: &Monomial,
    g: &[(Monomial, D::C)],
) -> Terms<D::C> {
    let mut out = Vec::with_capacity(f.len() + g.len());
    let u_one = d.is_one(u);
    let nv = d.neg(v);
    let (mut i, mut j) = (0, 0);
    let fm = |k: usize| match p {
        Some(p) => f[k].0.mul(p),
        None => f[k].0.clone(),
    };
    let fc = |k: usize| if u_one { f[k].1.clone() } else { d.mul(u, &f[k].1) };
    let mut gi: Option<Monomial> = g.first().map(|t| t.0.mul(q));
    let mut fi: Option<Monomial> = if f.is_empty() { None } else { Some(fm(0)) };
    loop {
        match (&fi, &gi) {
            (None, None) => break,
            (Some(a), None) => {
                out.push((a.clone(), fc(i)));
                i += 1;
                fi = if i < f.len() { Some(fm(i)) } else { None };
            }
            (None, Some(b)) => {
                out.push((b.clone(), d.mul(&nv, &g[j].1)));
                j += 1;
                gi = g.get(j).map(|t| t.0.mul(q));
            }
            (Some(a), Some(b)) => match order.cmp(a, b) {
                Ordering::Greater => {
                    out.push((a.clone(), fc(i)));
                    i += 1;
                    fi = if i < f.len() { Some(fm(i)) } else { None };
                }
                Ordering::Less => {
                    out.push((b.clone(), d.mul(&nv, &g[j].1)));
                    j += 1;
                    gi = g.get(j).map(|t| t.0.mul(q));
                }
                Ordering::Equal => {
                    let c = d.add(&fc(i), &d.mul(&nv, &g[j].1));
                    if !d.is_zero(&c) {
                        out.push((a.clone(), c));
                    }
                    i += 1;
                    j += 1;
                    fi = if i < f.len() { Some(fm(i)) } else { None };
                    gi = g.get(j).map(|t| t.0.mul(q));
                }
            },
        }
    }
    out
}

fn scale_terms<D: Domain>(d: &D, c: &D::C, t: &mut Terms<D::C>) {
    if !d.is_one(c) {
        for (_, x) in t.iter_mut() {
            *x = d.mul(c, x);
        }
    }
}

/// Full reduction of `f` by `basis`. Over a field, `quotients[k]` receives
/// the terms `v * q` subtracted as multiples of `basis[k]`.
fn reduce<D: Domain>(
    d: &D,
    order: &MonomialOrder,
    f: Terms<D::C>,
    basis: &[&Terms<D::C>],
    sevs: &[u64],
    mut quotients: Option<&mut Vec<Terms<D::C>>>,
) -> Terms<D::C> {
    let mut f = f;
    let mut pos = 0;
    let mut r: Terms<D::C> = Vec::new();
    let mut steps = 0usize;
    while pos < f.len() {
        let m = &f[pos].0;
        let sm = sev(m);
        let found = (0..basis.len()).find(|&k| sevs[k] & !sm == 0 && basis[k][0].0.divides(m));
        match found {
            None => {
                r.push(f[pos].clone());
                pos += 1;
            }
            Some(k) => {
                let g = basis[k];
                let q = g[0].0.quotient_of(m);
                let (u, v) = d.cancel(&f[pos].1, &g[0].1);
                f = lincomb(d, order, &u, None, &f[pos + 1..], &v, &q, &g[1..]);
                pos = 0;
                scale_terms(d, &u, &mut r);
                if let Some(qs) = quotients.as_deref_mut() {
                    qs[k].push((q, v));
                }
                steps += 1;
                if !D::IS_FIELD && steps % 16 == 0 {
                    // keep integer coefficients small
                    let mut all: Terms<D::C> = r.clone();
                    all.extend(f.iter().cloned());
                    let c = d.normalize(&mut all);
                    if !d.is_one(&c) {
                        let (head, tail) = all.split_at(r.len());
                        r = head.to_vec();
                        f = tail.to_vec();
                    }
                }
            }
        }
    }
    r
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

pub(crate) struct RawBasis<C> {
    pub polys: Vec<Terms<C>>,
    /// Representation of each basis element in terms of the input generators.
    pub reps: Option<Vec<Vec<Terms<C>>>>,
    pub complete: bool,
}

struct Engine<'a, D: Domain> {
    d: &'a D,
    order: &'a MonomialOrder,
    polys: Vec<Terms<D::C>>,
    sugars: Vec<u32>,
    reps: Option<Vec<Vec<Terms<D::C>>>>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
}

impl<'a, D: Domain> Engine<'a, D> {
    fn lead(&self, i: usize) -> &Monomial {
        &self.polys[i][0].0
    }

    fn reduce_active(&self, f: Terms<D::C>, rep: Option<&mut Vec<Terms<D::C>>>) -> Terms<D::C> {
        let basis: Vec<&Terms<D::C>> = self.active.iter().map(|&i| &self.polys[i]).collect();
        let sevs: Vec<u64> = self.active.iter().map(|&i| sev(self.lead(i))).collect();
        match rep {
            None => reduce(self.d, self.order, f, &basis, &sevs, None),
            Some(rep) => {
                let mut qs: Vec<Terms<D::C>> = vec![Vec::new(); basis.len()];
                let r = reduce(self.d, self.order, f, &basis, &sevs, Some(&mut qs));
                let reps = self.reps.as_ref().unwrap();
                for (k, q) in qs.iter().enumerate() {
                    let src = &reps[self.active[k]];
                    for (m, v) in q {
                        for (slot, s) in rep.iter_mut().zip(src) {
                            *slot = lincomb(self.d, self.order, &self.d.one(), None, slot, v, m, s);
                        }
                    }
                }
                r
            }
        }
    }

    fn insert(&mut self, mut f: Terms<D::C>, sugar: u32, mut rep: Option<Vec<Terms<D::C>>>) {
        let c = self.d.normalize(&mut f);
        if let Some(rep) = rep.as_mut() {
            if !self.d.is_one(&c) {
                // over a field: divide the representation by the removed factor
                let inv = self.d.cancel(&self.d.one(), &c).1;
                for t in rep.iter_mut() {
                    scale_terms(self.d, &inv, t);
                }
            }
        }
        let h = self.polys.len();
        self.polys.push(f);
        self.sugars.push(sugar);
        if let (Some(reps), Some(rep)) = (self.reps.as_mut(), rep) {
            reps.push(rep);
        }
        self.update(h);
    }

    fn update(&mut self, h: usize) {
        let lh = self.lead(h).clone();
        let cands: Vec<(usize, Monomial)> = self.active.iter().map(|&g| (g, self.lead(g).lcm(&lh))).collect();
        let mut kept: Vec<(usize, Monomial)> = Vec::new();
        for (idx, (g, l)) in cands.iter().enumerate() {
            let coprime = lh.is_coprime(self.lead(*g));
            let dominated = cands[idx + 1..].iter().any(|(_, l2)| l2.divides(l)) || kept.iter().any(|(_, l2)| l2.divides(l));
            if coprime || !dominated {
                kept.push((*g, l.clone()));
            }
        }
        let polys = &self.polys;
        self.pairs.retain(|p| {
            !(lh.divides(&p.lcm) && polys[p.i][0].0.lcm(&lh) != p.lcm && polys[p.j][0].0.lcm(&lh) != p.lcm)
        });
        for (g, l) in kept {
            if lh.is_coprime(self.lead(g)) {
                continue;
            }
            let sg = self.sugars[g] + l.degree() - self.lead(g).degree();
            let sh = self.sugars[h] + l.degree() - lh.degree();
            self.pairs.push(Pair { i: g, j: h, lcm: l, sugar: sg.max(sh) });
        }
        let polys = &self.polys;
        self.active.retain(|&g| !lh.divides(&polys[g][0].0));
        self.active.push(h);
    }

    fn next_pair(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let mut best = 0;
        for k in 1..self.pairs.len() {
            let (a, b) = (&self.pairs[k], &self.pairs[best]);
            if a.sugar < b.sugar || (a.sugar == b.sugar && self.order.cmp(&a.lcm, &b.lcm) == Ordering::Less) {
                best = k;
            }
        }
        Some(self.pairs.swap_remove(best))
    }

    fn spoly(&self, p: &Pair) -> (Terms<D::C>, Option<Vec<Terms<D::C>>>) {
        let (f, g) = (&self.polys[p.i], &self.polys[p.j]);
        let qf = f[0].0.quotient_of(&p.lcm);
        let qg = g[0].0.quotient_of(&p.lcm);
        let (u, v) = self.d.cancel(&g[0].1, &f[0].1);
        // u * lc(g) == v * lc(f): compute v * qf * f - u * qg * g
        let s = lincomb(self.d, self.order, &v, Some(&qf), &f[1..], &u, &qg, &g[1..]);
        let rep = self.reps.as_ref().map(|reps| {
            reps[p.i]
                .iter()
                .zip(&reps[p.j])
                .map(|(a, b)| lincomb(self.d, self.order, &v, Some(&qf), a, &u, &qg, b))
                .collect()
        });
        (s, rep)
    }
}

fn sort_terms<C>(order: &MonomialOrder, t: &mut Terms<C>) {
    t.sort_by(|a, b| order.cmp(&b.0, &a.0));
}

pub(crate) fn buchberger<D: Domain>(
    d: &D,
    order: &MonomialOrder,
    gens: Vec<Terms<D::C>>,
    track: bool,
    degree_bound: Option<u32>,
) -> RawBasis<D::C> {
    assert!(!track || D::IS_FIELD);
    let ngens = gens.len();
    let mut eng = Engine {
        d,
        order,
        polys: Vec::new(),
        sugars: Vec::new(),
        reps: if track { Some(Vec::new()) } else { None },
        active: Vec::new(),
        pairs: Vec::new(),
    };
    let mut indexed: Vec<(usize, Terms<D::C>)> = gens.into_iter().enumerate().filter(|(_, g)| !g.is_empty()).collect();
    indexed.sort_by(|a, b| order.cmp(&a.1[0].0, &b.1[0].0));
    for (k, g) in indexed {
        let sugar = g.iter().map(|t| t.0.degree()).max().unwrap_or(0);
        let mut rep = if track {
            let mut r: Vec<Terms<D::C>> = vec![Vec::new(); ngens];
            r[k] = vec![(Monomial::one(g[0].0.nvars()), d.one())];
            Some(r)
        } else {
            None
        };
        let f = if eng.active.is_empty() { g } else { eng.reduce_active(g, rep.as_mut()) };
        if !f.is_empty() {
            eng.insert(f, sugar, rep);
        }
    }
    let mut complete = true;
    while let Some(p) = eng.next_pair() {
        if let Some(b) = degree_bound {
            if p.lcm.degree() > b {
                complete = false;
                continue;
            }
        }
        let (s, mut rep) = eng.spoly(&p);
        if s.is_empty() {
            continue;
        }
        let r = eng.reduce_active(s, rep.as_mut());
        if !r.is_empty() {
            eng.insert(r, p.sugar, rep);
        }
        if eng.active.iter().any(|&i| eng.lead(i).is_one()) {
            eng.pairs.clear();
        }
    }
    let active = eng.active.clone();
    let polys = active.iter().map(|&i| eng.polys[i].clone()).collect();
    let reps = eng.reps.as_ref().map(|r| active.iter().map(|&i| r[i].clone()).collect());
    RawBasis { polys, reps, complete }
}

/// Minimal and tail-reduced basis, sorted by ascending leading monomial.
pub(crate) fn interreduce<D: Domain>(d: &D, order: &MonomialOrder, polys: Vec<Terms<D::C>>) -> Vec<Terms<D::C>> {
    let mut polys: Vec<Terms<D::C>> = polys.into_iter().filter(|p| !p.is_empty()).collect();
    polys.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0));
    let mut minimal: Vec<Terms<D::C>> = Vec::new();
    for p in polys {
        if !minimal.iter().any(|m| m[0].0.divides(&p[0].0)) {
            minimal.push(p);
        }
    }
    let n = minimal.len();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let others: Vec<&Terms<D::C>> = (0..n).filter(|&j| j != k).map(|j| &minimal[j]).collect();
        let sevs: Vec<u64> = others.iter().map(|t| sev(&t[0].0)).collect();
        // leading terms are pairwise irreducible, so this only rewrites the tail
        let mut p = reduce(d, order, minimal[k].clone(), &others, &sevs, None);
        d.normalize(&mut p);
        out.push(p);
    }
    out
}

// ---------------------------------------------------------------------------
// conversion between polynomials and term lists

pub(crate) fn to_field_terms(p: &Polynomial, order: &MonomialOrder) -> Terms<FieldElement> {
    let mut t: Terms<FieldElement> = p.terms().to_vec();
    sort_terms(order, &mut t);
    t
}

fn to_integer_terms(p: &Polynomial, order: &MonomialOrder) -> Terms<BigInt> {
    let mut den = BigInt::one();
    for (_, c) in p.terms() {
        den = den.lcm(c.as_rational().unwrap().denom());
    }
    let mut t: Terms<BigInt> = p
        .terms()
        .iter()
        .map(|(m, c)| (m.clone(), (c.as_rational().unwrap() * BigRational::from_integer(den.clone())).to_integer()))
        .collect();
    sort_terms(order, &mut t);
    t
}

fn from_integer_terms(ring: &RingRef, t: &Terms<BigInt>) -> Polynomial {
    let lc = BigRational::from_integer(t[0].1.clone());
    Polynomial::from_terms(
        ring,
        t.iter().map(|(m, c)| (m.clone(), FieldElement::Rational(BigRational::from_integer(c.clone()) / &lc))),
    )
}

fn check_rings(ring: &RingRef, gens: &[Polynomial]) -> Result<()> {
    if gens.iter().any(|g| !same_ring(g.ring(), ring)) {
        return Err(AlgebraError::RingMismatch);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// public interface

/// A reduced Gröbner basis: monic, minimal, tail-reduced, sorted by
/// ascending leading monomial in its order.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: RingRef,
    order: MonomialOrder,
    polys: Vec<Polynomial>,
    sorted: Vec<Terms<FieldElement>>,
    complete: bool,
}

impl GroebnerBasis {
    /// Computes the reduced basis of the ideal generated by `gens`.
    pub fn compute(ring: &RingRef, gens: &[Polynomial], order: &MonomialOrder) -> Result<Self> {
        Self::compute_bounded(ring, gens, order, None)
    }

    /// Like [`GroebnerBasis::compute`], skipping S-pairs whose lcm has degree
    /// above `bound`; [`GroebnerBasis::is_complete`] reports whether any
    /// pair was skipped.
    pub fn compute_bounded(ring: &RingRef, gens: &[Polynomial], order: &MonomialOrder, bound: Option<u32>) -> Result<Self> {
        check_rings(ring, gens)?;
        let (sorted, complete) = match ring.field() {
            Field::Rational => {
                let input = gens.iter().map(|g| to_integer_terms(g, order)).collect();
                let raw = buchberger(&ZDomain, order, input, false, bound);
                let red = interreduce(&ZDomain, order, raw.polys);
                let sorted = red
                    .iter()
                    .map(|t| to_field_terms(&from_integer_terms(ring, t), order))
                    .collect::<Vec<_>>();
                (sorted, raw.complete)
            }
            f @ Field::Prime(_) => {
                let d = FDomain(f);
                let input = gens.iter().map(|g| to_field_terms(g, order)).collect();
                let raw = buchberger(&d, order, input, false, bound);
                (interreduce(&d, order, raw.polys), raw.complete)
            }
        };
        let polys = sorted.iter().map(|t| Polynomial::from_terms(ring, t.iter().cloned())).collect();
        Ok(GroebnerBasis { ring: ring.clone(), order: order.clone(), polys, sorted, complete })
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.sorted.iter().map(|t| t[0].0.clone()).collect()
    }

    pub fn is_unit(&self) -> bool {
        self.sorted.iter().any(|t| t[0].0.is_one())
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.sorted.is_empty()
    }

    pub(crate) fn reduce_terms(&self, f: Terms<FieldElement>) -> Terms<FieldElement> {
        let basis: Vec<&Terms<FieldElement>> = self.sorted.iter().collect();
        let sevs: Vec<u64> = basis.iter().map(|t| sev(&t[0].0)).collect();
        reduce(&FDomain(self.ring.field()), &self.order, f, &basis, &sevs, None)
    }

    /// The unique remainder of `f` modulo the ideal.
    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        check_rings(&self.ring, std::slice::from_ref(f))?;
        let r = self.reduce_terms(to_field_terms(f, &self.order));
        Ok(Polynomial::from_terms(&self.ring, r))
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    pub fn contains_all(&self, fs: &[Polynomial]) -> Result<bool> {
        for f in fs {
            if !self.contains(f)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Cofactors `c` with `f = sum c_j gens_j`, or `None` when `f` is not in the
/// ideal generated by `gens`.
pub fn lift(ring: &RingRef, gens: &[Polynomial], f: &Polynomial) -> Result<Option<Vec<Polynomial>>> {
    check_rings(ring, gens)?;
    check_rings(ring, std::slice::from_ref(f))?;
    let order = MonomialOrder::grevlex();
    let d = FDomain(ring.field());
    let input: Vec<_> = gens.iter().map(|g| to_field_terms(g, &order)).collect();
    let raw = buchberger(&d, &order, input, true, None);
    let reps = raw.reps.unwrap();
    let basis: Vec<&Terms<FieldElement>> = raw.polys.iter().collect();
    let sevs: Vec<u64> = basis.iter().map(|t| sev(&t[0].0)).collect();
    let mut qs: Vec<Terms<FieldElement>> = vec![Vec::new(); basis.len()];
    let r = reduce(&d, &order, to_field_terms(f, &order), &basis, &sevs, Some(&mut qs));
    if !r.is_empty() {
        return Ok(None);
    }
    let mut out = vec![Polynomial::zero(ring); gens.len()];
    for (k, q) in qs.iter().enumerate() {
        let qp = Polynomial::from_terms(ring, q.iter().cloned());
        for (j, rep) in reps[k].iter().enumerate() {
            if !rep.is_empty() {
                out[j] = &out[j] + &(&qp * &Polynomial::from_terms(ring, rep.iter().cloned()));
            }
        }
    }
    Ok(Some(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial_list;
    use crate::poly::Ring;
    use proptest::prelude::*;

    fn gb(ring: &RingRef, src: &str, order: MonomialOrder) -> GroebnerBasis {
        GroebnerBasis::compute(ring, &parse_polynomial_list(ring, src).unwrap(), &order).unwrap()
    }

    fn strs(g: &GroebnerBasis) -> Vec<String> {
        g.polys().iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn twisted_cubic_lex() {
        let r = Ring::new(Field::Rational, ["x", "y", "z"]);
        let g = gb(&r, "y - x^2, z - x^3", MonomialOrder::lex());
        assert!(g.contains(&crate::parse_polynomial(&r, "y^3 - z^2").unwrap()).unwrap());
        assert!(g.polys().iter().all(|p| p.leading_term_in(&MonomialOrder::lex()).unwrap().1.is_one()));
    }

    #[test]
    fn special_fibre_of_surface_family() {
        let r = Ring::new(Field::Rational, ["x", "y", "z", "s"]);
        let g = gb(&r, "x^2 - y^3, z^2 - y*s^2, z^3 - x*s^3, x*z - y^2*s, x*s - y*z, s", MonomialOrder::grevlex());
        for m in ["z^2", "x*z", "y*z", "x^2 - y^3"] {
            assert!(g.contains(&crate::parse_polynomial(&r, m).unwrap()).unwrap(), "{m}");
        }
        assert!(!g.contains(&crate::parse_polynomial(&r, "z").unwrap()).unwrap());
    }

    #[test]
    fn unit_and_zero_ideals() {
        let r = Ring::new(Field::Rational, ["x", "y"]);
        assert!(gb(&r, "x, x + 1", MonomialOrder::grevlex()).is_unit());
        let z = GroebnerBasis::compute(&r, &[], &MonomialOrder::grevlex()).unwrap();
        assert!(z.is_zero_ideal());
        assert_eq!(strs(&gb(&r, "x^2*y - 1, x*y^2 - 1", MonomialOrder::lex())), vec!["y^3 - 1", "x - y"]);
    }

    #[test]
    fn prime_field_basis() {
        let r = Ring::new(Field::prime(5).unwrap(), ["x", "y"]);
        let g = gb(&r, "x^5 - y, x*y - 1", MonomialOrder::grevlex());
        for p in g.polys() {
            assert!(g.contains(p).unwrap());
        }
    }

    #[test]
    fn ring_mismatch() {
        let r = Ring::new(Field::Rational, ["x"]);
        let s = Ring::new(Field::Rational, ["y"]);
        let f = crate::parse_polynomial(&s, "y").unwrap();
        assert_eq!(GroebnerBasis::compute(&r, &[f], &MonomialOrder::grevlex()).unwrap_err(), AlgebraError::RingMismatch);
    }

    #[test]
    fn lift_recovers_cofactors() {
        let r = Ring::new(Field::Rational, ["x", "y", "z"]);
        let gens = parse_polynomial_list(&r, "x^2 - y*z, y^2 - x*z, z^2 - x*y").unwrap();
        let f = crate::parse_polynomial(&r, "x^3 - y^3").unwrap();
        let gbp = GroebnerBasis::compute(&r, &gens, &MonomialOrder::grevlex()).unwrap();
        match lift(&r, &gens, &f).unwrap() {
            Some(c) => {
                assert!(gbp.contains(&f).unwrap());
                let mut acc = Polynomial::zero(&r);
                for (ci, gi) in c.iter().zip(&gens) {
                    acc = &acc + &(ci * gi);
                }
                assert_eq!(acc, f);
            }
            None => assert!(!gbp.contains(&f).unwrap()),
        }
        assert!(lift(&r, &gens, &crate::parse_polynomial(&r, "x").unwrap()).unwrap().is_none());
    }

    fn small_poly(r: &RingRef) -> impl Strategy<Value = Polynomial> {
        let r = r.clone();
        prop::collection::vec((prop::collection::vec(0u32..3, 3), -3i64..4), 1..4).prop_map(move |ts| {
            Polynomial::from_terms(&r, ts.into_iter().map(|(e, c)| (Monomial::from_exponents(e), r.field().from_i64(c))))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 48, rng_seed: proptest::test_runner::RngSeed::Fixed(1), failure_persistence: None, ..ProptestConfig::default() })]
        #[test]
        fn basis_is_order_independent_as_ideal(fs in prop::collection::vec(small_poly(&Ring::new(Field::Rational, ["x", "y", "z"])), 1..4)) {
            let r = fs[0].ring().clone();
            let a = GroebnerBasis::compute(&r, &fs, &MonomialOrder::grevlex()).unwrap();
            let b = GroebnerBasis::compute(&r, &fs, &MonomialOrder::grevlex().with_perm(vec![2, 0, 1])).unwrap();
            prop_assert!(a.contains_all(b.polys()).unwrap());
            prop_assert!(b.contains_all(a.polys()).unwrap());
            prop_assert!(a.contains_all(&fs).unwrap());
            // S-polynomials of the basis reduce to zero
            let p = MonomialOrder::grevlex();
            for i in 0..a.polys().len() {
                for j in i + 1..a.polys().len() {
                    let (fi, fj) = (&a.polys()[i], &a.polys()[j]);
                    let (mi, ci) = fi.leading_term_in(&p).unwrap().clone();
                    let (mj, cj) = fj.leading_term_in(&p).unwrap().clone();
                    let l = mi.lcm(&mj);
                    let s = &fi.mul_term(&mi.quotient_of(&l), &cj) - &fj.mul_term(&mj.quotient_of(&l), &ci);
                    prop_assert!(a.normal_form(&s).unwrap().is_zero());
                }
            }
        }

        #[test]
        fn lift_is_sound(fs in prop::collection::vec(small_poly(&Ring::new(Field::prime(7).unwrap(), ["x", "y", "z"])), 1..3), h in prop::collection::vec(small_poly(&Ring::new(Field::prime(7).unwrap(), ["x", "y", "z"])), 1..3)) {
            let r = fs[0].ring().clone();
            let mut f = Polynomial::zero(&r);
            for (a, b) in fs.iter().zip(&h) { f = &f + &(a * b); }
            let c = lift(&r, &fs, &f).unwrap().expect("member");
            let mut acc = Polynomial::zero(&r);
            for (ci, gi) in c.iter().zip(&fs) { acc = &acc + &(ci * gi); }
            prop_assert_eq!(acc, f);
        }
    }
}
