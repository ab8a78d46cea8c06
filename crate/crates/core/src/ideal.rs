//! Ideals with cached Gröbner bases and the standard ideal operations.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{AlgebraError, Result};
use crate::groebner::GroebnerBasis;
use crate::hilbert::HilbertSeries;
use crate::monomial::MonomialOrder;
use crate::poly::{same_ring, Polynomial, RingRef};

/// Hard cap on iterated colon computations.
pub const SATURATION_CAP: usize = 64;

/// Dimension and degree of `R/I`, from the leading-term ideal of a
/// graded-reverse-lex basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertData {
    pub dimension: usize,
    pub degree: u64,
    /// Hilbert series of `S/LT(I)` in the standard grading.
    pub series: HilbertSeries,
}

/// An ideal of a polynomial ring, with Gröbner bases cached per order.
#[derive(Clone)]
pub struct Ideal {
    ring: RingRef,
    gens: Vec<Polynomial>,
    cache: Arc<Mutex<HashMap<MonomialOrder, Arc<GroebnerBasis>>>>,
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal({self})")
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

impl Ideal {
    pub fn new(ring: &RingRef, gens: impl IntoIterator<Item = Polynomial>) -> Result<Self> {
        let gens: Vec<Polynomial> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        if gens.iter().any(|g| !same_ring(g.ring(), ring)) {
            return Err(AlgebraError::RingMismatch);
        }
        Ok(Ideal { ring: ring.clone(), gens, cache: Arc::default() })
    }

    /// Parses a comma-separated generator list.
    pub fn parse(ring: &RingRef, src: &str) -> Result<Self> {
        Ideal::new(ring, crate::parse::parse_polynomial_list(ring, src)?)
    }

    pub fn unit(ring: &RingRef) -> Self {
        Ideal::new(ring, [Polynomial::one(ring)]).unwrap()
    }

    pub fn zero(ring: &RingRef) -> Self {
        Ideal::new(ring, []).unwrap()
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    fn check(&self, other: &Ideal) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(AlgebraError::RingMismatch)
        }
    }

    pub fn basis(&self, order: &MonomialOrder) -> Arc<GroebnerBasis> {
        if let Some(b) = self.cache.lock().unwrap().get(order) {
            return b.clone();
        }
        let b = Arc::new(GroebnerBasis::compute(&self.ring, &self.gens, order).expect("generators share the ring"));
        self.cache.lock().unwrap().insert(order.clone(), b.clone());
        b
    }

    /// The reduced graded-reverse-lex basis, used for membership and equality.
    pub fn gb(&self) -> Arc<GroebnerBasis> {
        self.basis(&MonomialOrder::grevlex())
    }

    /// The ideal generated by its reduced graded-reverse-lex basis.
    pub fn canonical(&self) -> Ideal {
        let gb = self.gb();
        let out = Ideal::new(&self.ring, gb.polys().to_vec()).unwrap();
        out.cache.lock().unwrap().insert(MonomialOrder::grevlex(), gb);
        out
    }

    pub fn is_unit(&self) -> bool {
        self.gb().is_unit()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        self.gb().normal_form(f)
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        self.gb().contains(f)
    }

    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        self.check(other)?;
        self.gb().contains_all(&other.gens)
    }

    pub fn equals(&self, other: &Ideal) -> Result<bool> {
        self.check(other)?;
        let (a, b) = (self.gb(), other.gb());
        Ok(a.polys() == b.polys())
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.check(other)?;
        Ideal::new(&self.ring, self.gens.iter().chain(&other.gens).cloned())
    }

    pub fn add_gens(&self, extra: impl IntoIterator<Item = Polynomial>) -> Result<Ideal> {
        Ideal::new(&self.ring, self.gens.iter().cloned().chain(extra))
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        self.check(other)?;
        let mut gens = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a * b);
            }
        }
        Ideal::new(&self.ring, gens)
    }

    pub fn power(&self, k: u32) -> Ideal {
        let mut acc = Ideal::unit(&self.ring);
        for _ in 0..k {
            acc = acc.product(self).unwrap().canonical_if_large();
        }
        acc
    }

    fn canonical_if_large(self) -> Ideal {
        if self.gens.len() > 12 {
            self.canonical()
        } else {
            self
        }
    }

    /// `I ∩ K[remaining]` where `vars` are eliminated; the result lives in the same ring.
    pub fn eliminate(&self, vars: &[usize]) -> Ideal {
        if vars.is_empty() {
            return self.clone();
        }
        let order = MonomialOrder::eliminating(self.ring.nvars(), vars);
        let gb = self.basis(&order);
        let gens = gb
            .polys()
            .iter()
            .filter(|p| vars.iter().all(|&v| p.degree_in(v) == 0))
            .cloned();
        Ideal::new(&self.ring, gens).unwrap()
    }

    /// Ideal with an extra variable appended, plus its index.
    fn with_extra_var(&self, name: &str) -> (RingRef, usize, Vec<usize>) {
        let mut name = name.to_string();
        while self.ring.var_index(&name).is_some() {
            name.push('_');
        }
        let ext = self.ring.extend([name]);
        let n = self.ring.nvars();
        (ext, n, (0..n).collect())
    }

    fn restrict(&self, ext_ideal: &Ideal, t: usize) -> Ideal {
        let elim = ext_ideal.eliminate(&[t]);
        let gens: Vec<Polynomial> = elim.gens.iter().map(|g| g.dehomogenize_into(&self.ring, t)).collect();
        Ideal::new(&self.ring, gens).unwrap()
    }

    pub fn intersection(&self, other: &Ideal) -> Result<Ideal> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Ideal::zero(&self.ring));
        }
        let (ext, t, emb) = self.with_extra_var("t");
        let tv = Polynomial::var(&ext, t);
        let one_minus = &Polynomial::one(&ext) - &tv;
        let mut gens = Vec::new();
        for g in &self.gens {
            gens.push(&tv * &g.embed(&ext, &emb));
        }
        for g in &other.gens {
            gens.push(&one_minus * &g.embed(&ext, &emb));
        }
        Ok(self.restrict(&Ideal::new(&ext, gens)?, t))
    }

    pub fn intersection_all(ideals: &[Ideal]) -> Result<Ideal> {
        let mut acc = ideals.first().cloned().ok_or_else(|| AlgebraError::Invalid("empty intersection".into()))?;
        for i in &ideals[1..] {
            acc = acc.intersection(i)?.canonical();
        }
        Ok(acc)
    }

    /// `I : f`.
    pub fn quotient_poly(&self, f: &Polynomial) -> Result<Ideal> {
        if f.is_zero() {
            return Ok(Ideal::unit(&self.ring));
        }
        let principal = Ideal::new(&self.ring, [f.clone()])?;
        let cap = self.intersection(&principal)?;
        let gens: Vec<Polynomial> = cap.gens.iter().map(|g| g.exact_div(f).expect("divisible by f")).collect();
        Ideal::new(&self.ring, gens)
    }

    /// `I : J`.
    pub fn quotient(&self, other: &Ideal) -> Result<Ideal> {
        self.check(other)?;
        if other.is_zero() {
            return Ok(Ideal::unit(&self.ring));
        }
        let parts: Vec<Ideal> = other.gens.iter().map(|g| self.quotient_poly(g)).collect::<Result<_>>()?;
        Ideal::intersection_all(&parts)
    }

    /// `I : f^∞` via the extra-variable trick `(I, 1 - t f) ∩ R`.
    pub fn saturation_poly(&self, f: &Polynomial) -> Result<Ideal> {
        if f.is_zero() {
            return Ok(Ideal::unit(&self.ring));
        }
        if f.is_constant() {
            return Ok(self.clone());
        }
        let (ext, t, emb) = self.with_extra_var("t");
        let mut gens: Vec<Polynomial> = self.gens.iter().map(|g| g.embed(&ext, &emb)).collect();
        gens.push(&Polynomial::one(&ext) - &(&Polynomial::var(&ext, t) * &f.embed(&ext, &emb)));
        Ok(self.restrict(&Ideal::new(&ext, gens)?, t).canonical())
    }

    /// `I : J^∞ = ∩_g I : g^∞` over the generators `g` of `J`.
    pub fn saturation(&self, other: &Ideal) -> Result<Ideal> {
        self.check(other)?;
        if other.is_zero() {
            return Ok(Ideal::unit(&self.ring));
        }
        let parts: Vec<Ideal> = other.gens.iter().map(|g| self.saturation_poly(g)).collect::<Result<_>>()?;
        Ideal::intersection_all(&parts)
    }

    /// Smallest `m` with `I : f^m = I : f^{m+1}`, together with `I : f^m`.
    pub fn saturation_exponent(&self, f: &Polynomial) -> Result<(usize, Ideal)> {
        let target = self.saturation_poly(f)?;
        let mut cur = self.clone();
        for m in 0..=SATURATION_CAP {
            if cur.contains_ideal(&target)? {
                return Ok((m, cur));
            }
            cur = cur.quotient_poly(f)?.canonical();
        }
        Err(AlgebraError::SaturationCap(SATURATION_CAP))
    }

    /// Whether `f` vanishes on `V(I)`.
    pub fn radical_contains(&self, f: &Polynomial) -> Result<bool> {
        if f.is_zero() {
            return Ok(true);
        }
        let (ext, t, emb) = self.with_extra_var("t");
        let mut gens: Vec<Polynomial> = self.gens.iter().map(|g| g.embed(&ext, &emb)).collect();
        gens.push(&Polynomial::one(&ext) - &(&Polynomial::var(&ext, t) * &f.embed(&ext, &emb)));
        Ok(Ideal::new(&ext, gens)?.is_unit())
    }

    /// Hilbert series, dimension and degree of `R/I`; the degree is that of
    /// the projective closure of `V(I)` counted with multiplicities.
    pub fn hilbert_data(&self) -> Result<HilbertData> {
        let gb = self.gb();
        if gb.is_unit() {
            return Err(AlgebraError::UnitIdeal);
        }
        let series = HilbertSeries::of_monomial_ideal(&gb.leading_monomials(), self.ring.nvars());
        let red = series.reduced();
        Ok(HilbertData { dimension: red.power, degree: red.numerator.iter().sum::<i64>() as u64, series })
    }

    pub fn dimension(&self) -> Result<usize> {
        Ok(self.hilbert_data()?.dimension)
    }

    pub fn degree(&self) -> Result<u64> {
        Ok(self.hilbert_data()?.degree)
    }

    /// The affine Hilbert series `H(t)/(1-t)` of `R/I` (counts polynomials of
    /// degree at most `k` modulo `I`).
    pub fn affine_series(&self) -> HilbertSeries {
        let gb = self.gb();
        HilbertSeries::of_monomial_ideal(&gb.leading_monomials(), self.ring.nvars()).cumulative()
    }

    /// Substitutes each generator into another ring.
    pub fn map(&self, target: &RingRef, f: impl Fn(&Polynomial) -> Result<Polynomial>) -> Result<Ideal> {
        let gens = self.gens.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ideal::new(target, gens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::parse::parse_polynomial;
    use crate::poly::Ring;

    fn id(r: &RingRef, s: &str) -> Ideal {
        Ideal::parse(r, s).unwrap()
    }

    #[test]
    fn basis_examples() {
        let r = Ring::new(Field::Rational, ["x", "y"]);
        let strs = |i: &Ideal, o: &MonomialOrder| i.basis(o).polys().iter().map(|p| p.to_string()).collect::<Vec<_>>();
        assert_eq!(strs(&id(&r, "x^2, x"), &MonomialOrder::lex()), vec!["x"]);
        assert_eq!(strs(&id(&r, "y - x^2, x"), &MonomialOrder::grevlex()), vec!["y", "x"]);
    }

    #[test]
    fn elimination_examples() {
        let r = Ring::new(Field::Rational, ["t", "x", "y"]);
        let e = id(&r, "x - t^2, y - t^3").eliminate(&[0]);
        assert!(e.equals(&id(&r, "x^3 - y^2")).unwrap());
        let r = Ring::new(Field::Rational, ["t", "u", "x", "y", "z"]);
        let e = id(&r, "x - t, y - u, z - t*u").eliminate(&[0, 1]);
        assert!(e.equals(&id(&r, "z - x*y")).unwrap());
    }

    #[test]
    fn colon_and_saturation() {
        let r = Ring::new(Field::Rational, ["x", "y"]);
        let i = id(&r, "x^2, x*y");
        let x = parse_polynomial(&r, "x").unwrap();
        assert!(i.quotient_poly(&x).unwrap().equals(&id(&r, "x, y")).unwrap());
        assert!(i.saturation_poly(&x).unwrap().is_unit());
        assert!(i.saturation_poly(&parse_polynomial(&r, "y").unwrap()).unwrap().equals(&id(&r, "x")).unwrap());
        let (m, _) = i.saturation_exponent(&parse_polynomial(&r, "y").unwrap()).unwrap();
        assert_eq!(m, 1);
        assert!(id(&r, "x").product(&id(&r, "y")).unwrap().equals(&id(&r, "x*y")).unwrap());
    }

    #[test]
    fn equality_examples() {
        let r = Ring::new(Field::Rational, ["x", "y"]);
        assert!(id(&r, "x, y").equals(&id(&r, "y, x + y")).unwrap());
        assert!(!id(&r, "x^2, y^2").equals(&id(&r, "x, y").power(2)).unwrap());
        assert!(!id(&r, "x").equals(&id(&r, "x^2")).unwrap());
    }

    #[test]
    fn intersection_of_lines() {
        let r = Ring::new(Field::Rational, ["x", "y"]);
        let cap = id(&r, "x").intersection(&id(&r, "y")).unwrap();
        assert!(cap.equals(&id(&r, "x*y")).unwrap());
        let hd = cap.hilbert_data().unwrap();
        assert_eq!((hd.dimension, hd.degree), (1, 2));
    }

    #[test]
    fn axes_product_is_degree_three_monomials_in_two_variables() {
        let r = Ring::new(Field::Rational, ["x", "y", "z"]);
        let p = id(&r, "y, z").product(&id(&r, "x, z")).unwrap().product(&id(&r, "x, y")).unwrap();
        assert!(p.equals(&id(&r, "x^2*y, x^2*z, x*y^2, y^2*z, x*z^2, y*z^2, x*y*z")).unwrap());
    }

    #[test]
    fn hilbert_examples() {
        let r = Ring::new(Field::Rational, ["x", "y", "z", "s"]);
        let i3 = id(&r, "x^2 - y^3, z^2 - y*s^2, z^3 - x*s^3, x*z - y^2*s, x*s - y*z");
        let h = i3.hilbert_data().unwrap();
        // the closure of the surface has degree n + 1: generic planes meet it in 4 points
        assert_eq!((h.dimension, h.degree), (2, 4));
        let j3 = id(&r, "x^2 - y^3, z, s").hilbert_data().unwrap();
        assert_eq!((j3.dimension, j3.degree), (1, 3));
        let m = id(&r, "x, y, z, s").hilbert_data().unwrap();
        assert_eq!((m.dimension, m.degree), (0, 1));
        assert_eq!(id(&r, "1").hilbert_data().unwrap_err(), AlgebraError::UnitIdeal);
    }

    #[test]
    fn degree_via_homogenized_basis_agrees() {
        // oracle: homogenize a grevlex basis and compute the projective degree
        let r = Ring::new(Field::Rational, ["x", "y", "z"]);
        for src in ["y - x^2, z - x^3", "x^2 + y^2 - 1, z", "x*y - 1, z^2 - x"] {
            let i = id(&r, src);
            let hom_ring = r.extend(["h"]);
            let hom: Vec<Polynomial> = i.gb().polys().iter().map(|p| p.homogenize_into(&hom_ring, 3)).collect();
            let hi = Ideal::new(&hom_ring, hom).unwrap();
            let a = i.hilbert_data().unwrap();
            let b = hi.hilbert_data().unwrap();
            assert_eq!(a.degree, b.degree, "{src}");
            assert_eq!(a.dimension + 1, b.dimension, "{src}");
        }
    }
}
