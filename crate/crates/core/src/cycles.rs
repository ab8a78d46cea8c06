//! Effective algebraic cycles on affine space.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decompose::{associated_primes, minimal_primes, Prime};
use crate::error::{AlgebraError, Result};
use crate::ideal::Ideal;
use crate::monomial::Monomial;
use crate::poly::{same_ring, Polynomial, RingRef};

/// An irreducible subvariety, carried as its prime ideal.
#[derive(Clone, Debug)]
pub struct Component {
    ideal: Ideal,
    dimension: usize,
    degree: u64,
}

impl Component {
    /// Wraps an ideal that the caller asserts to be prime.
    pub fn new(prime: Ideal) -> Result<Self> {
        let prime = prime.canonical();
        let h = prime.hilbert_data()?;
        Ok(Component { ideal: prime, dimension: h.dimension, degree: h.degree })
    }

    /// The closure of the image of `t -> (f_1(t), ..., f_n(t))`; the `f_i`
    /// live in a parameter ring and `ring` has one variable per `f_i`.
    pub fn from_parametrization(ring: &RingRef, params: &[Polynomial]) -> Result<Self> {
        Component::new(implicitize(ring, params)?)
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn generators(&self) -> Vec<String> {
        self.ideal.gens().iter().map(|g| g.to_string()).collect()
    }

    fn same(&self, other: &Component) -> bool {
        self.dimension == other.dimension && self.degree == other.degree && self.ideal.gb().polys() == other.ideal.gb().polys()
    }
}

impl From<Prime> for Component {
    fn from(p: Prime) -> Self {
        Component { ideal: p.ideal, dimension: p.dimension, degree: p.degree }
    }
}

/// Ideal of the image closure of a polynomial map into `ring`.
pub fn implicitize(ring: &RingRef, params: &[Polynomial]) -> Result<Ideal> {
    if params.len() != ring.nvars() {
        return Err(AlgebraError::DimensionMismatch(format!(
            "{} coordinate functions for {} variables",
            params.len(),
            ring.nvars()
        )));
    }
    let n = ring.nvars();
    let Some(first) = params.first() else {
        return Ok(Ideal::zero(ring));
    };
    let pring = first.ring().clone();
    let k = pring.nvars();
    let mut names: Vec<String> = ring.var_names().to_vec();
    for name in pring.var_names() {
        let mut name = name.clone();
        while names.contains(&name) {
            name.push('_');
        }
        names.push(name);
    }
    let ext = crate::poly::Ring::new(ring.field(), names);
    let emb_p: Vec<usize> = (n..n + k).collect();
    let gens: Vec<Polynomial> = params
        .iter()
        .enumerate()
        .map(|(i, f)| &Polynomial::var(&ext, i) - &f.embed(&ext, &emb_p))
        .collect();
    let elim = Ideal::new(&ext, gens)?.eliminate(&emb_p);
    let back: Vec<Polynomial> = elim.gens().iter().map(|g| truncate_vars(ring, g)).collect();
    Ok(Ideal::new(ring, back)?.canonical())
}

/// Reinterprets a polynomial that only involves the first `ring.nvars()`
/// variables of its own ring.
fn truncate_vars(ring: &RingRef, g: &Polynomial) -> Polynomial {
    let n = ring.nvars();
    Polynomial::from_terms(
        ring,
        g.terms().iter().map(|(m, c)| (Monomial::from_exponents(m.exponents()[..n].to_vec()), c.clone())),
    )
}

/// A formal combination `Σ a_i [Z_i]` with `a_i ≥ 1` and distinct `Z_i`.
#[derive(Clone, Debug)]
pub struct Cycle {
    ring: RingRef,
    terms: Vec<(Component, u64)>,
}

impl Cycle {
    pub fn empty(ring: &RingRef) -> Self {
        Cycle { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn from_terms(ring: &RingRef, terms: impl IntoIterator<Item = (Component, u64)>) -> Result<Self> {
        let mut z = Cycle::empty(ring);
        for (c, a) in terms {
            z.add(c, a)?;
        }
        Ok(z)
    }

    /// `1 · [V(P)]` for a prime `P`.
    pub fn prime(prime: Ideal) -> Result<Self> {
        let ring = prime.ring().clone();
        Cycle::from_terms(&ring, [(Component::new(prime)?, 1)])
    }

    pub fn add(&mut self, c: Component, a: u64) -> Result<()> {
        if !same_ring(c.ideal.ring(), &self.ring) {
            return Err(AlgebraError::RingMismatch);
        }
        if a == 0 {
            return Ok(());
        }
        match self.terms.iter_mut().find(|(d, _)| d.same(&c)) {
            Some((_, b)) => *b += a,
            None => self.terms.push((c, a)),
        }
        Ok(())
    }

    pub fn add_cycle(&mut self, other: &Cycle, scale: u64) -> Result<()> {
        for (c, a) in &other.terms {
            self.add(c.clone(), a * scale)?;
        }
        Ok(())
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn terms(&self) -> &[(Component, u64)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest component dimension, `None` for the empty cycle.
    pub fn dimension(&self) -> Option<usize> {
        self.terms.iter().map(|(c, _)| c.dimension).max()
    }

    pub fn is_pure(&self) -> bool {
        self.terms.iter().all(|(c, _)| Some(c.dimension) == self.dimension())
    }

    /// The part of dimension `d`.
    pub fn pure_part(&self, d: usize) -> Cycle {
        Cycle { ring: self.ring.clone(), terms: self.terms.iter().filter(|(c, _)| c.dimension == d).cloned().collect() }
    }

    /// Dimensions occurring, in decreasing order.
    pub fn dimensions(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.iter().map(|(c, _)| c.dimension).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d.dedup();
        d
    }

    /// Equality as formal combinations.
    pub fn same(&self, other: &Cycle) -> bool {
        self.terms.len() == other.terms.len()
            && self.terms.iter().all(|(c, a)| other.terms.iter().any(|(d, b)| a == b && c.same(d)))
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, a)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{a}*[{}]", c.ideal)?;
        }
        Ok(())
    }
}

/// `Σ a_i deg Z_i`.
pub fn cycle_degree(z: &Cycle) -> u64 {
    z.terms.iter().map(|(c, a)| a * c.degree).sum()
}

/// An affine hyperplane `ℓ = 0`.
#[derive(Clone, Debug)]
pub struct Hyperplane(Polynomial);

impl Hyperplane {
    pub fn new(l: Polynomial) -> Result<Self> {
        if l.total_degree() != 1 {
            return Err(AlgebraError::Invalid(format!("`{l}` is not an affine-linear form")));
        }
        Ok(Hyperplane(l))
    }

    pub fn equation(&self) -> &Polynomial {
        &self.0
    }
}

/// Top-dimensional cycle of `V(P + ℓ)` for a prime `P` with `ℓ ∉ P`.
fn divisor_cycle(p: &Component, l: &Polynomial) -> Result<Cycle> {
    let ring = p.ideal.ring();
    if p.dimension == 0 {
        return Ok(Cycle::empty(ring));
    }
    let cut = p.ideal.add_gens([l.clone()])?;
    if cut.is_unit() {
        return Ok(Cycle::empty(ring));
    }
    let target = p.dimension - 1;
    let parts = associated_primes(&cut, target)?;
    Cycle::from_terms(ring, parts.into_iter().filter(|(q, _)| q.dimension == target).map(|(q, a)| (q.into(), a)))
}

/// `Z ncap H`: components inside `H` are kept, the others are replaced by
/// their divisor cycle on `H`.
pub fn ncap(z: &Cycle, h: &Hyperplane) -> Result<Cycle> {
    let mut out = Cycle::empty(&z.ring);
    for (c, a) in &z.terms {
        if c.ideal.contains(&h.0)? {
            out.add(c.clone(), *a)?;
        } else {
            out.add_cycle(&divisor_cycle(c, &h.0)?, *a)?;
        }
    }
    Ok(out)
}

/// `I(Z) = ∏ I(Z_i)^{a_i}`; the unit ideal for the empty cycle.
pub fn ideal_of_cycle(z: &Cycle) -> Result<Ideal> {
    let mut acc = Ideal::unit(&z.ring);
    for (c, a) in &z.terms {
        acc = acc.product(&c.ideal.power(*a as u32))?.canonical();
    }
    Ok(acc)
}

/// Associated components of `R/J` weighted by their generic lengths.
pub fn associated_cycle(j: &Ideal) -> Result<Cycle> {
    if j.is_unit() {
        return Err(AlgebraError::UnitIdeal);
    }
    let parts = associated_primes(j, 0)?;
    Cycle::from_terms(j.ring(), parts.into_iter().map(|(p, a)| (p.into(), a)))
}

/// Degree of the associated cycle.
pub fn arith_degree(j: &Ideal) -> Result<u64> {
    Ok(cycle_degree(&associated_cycle(j)?))
}

/// How the diagonal of `(A^n)^m` is cut out by hyperplanes.
#[derive(Clone, Debug)]
pub enum DiagonalChoice {
    /// `x_i^(r) - x_i^(r+1)` for all `i`, `r`.
    Standard,
    /// Random invertible integer recombinations of the standard forms.
    Seeded(u64),
    /// Explicit forms in the product ring, in order.
    Custom(Vec<Polynomial>),
}

/// `A^(n m)` with variables `v_1, ..., v_m` for each variable `v` of `ring`,
/// blocks in factor order.
pub fn product_ring(ring: &RingRef, m: usize) -> RingRef {
    let mut names = Vec::new();
    for r in 1..=m {
        for v in ring.var_names() {
            let mut name = format!("{v}_{r}");
            while ring.var_index(&name).is_some() {
                name.push('_');
            }
            names.push(name);
        }
    }
    crate::poly::Ring::new(ring.field(), names)
}

fn standard_diagonal(ring: &RingRef, prod: &RingRef, m: usize) -> Vec<Polynomial> {
    let n = ring.nvars();
    let mut out = Vec::new();
    for r in 0..m.saturating_sub(1) {
        for i in 0..n {
            out.push(&Polynomial::var(prod, r * n + i) - &Polynomial::var(prod, (r + 1) * n + i));
        }
    }
    out
}

/// The ordered hyperplanes for `choice`, verified to cut out the diagonal.
pub fn diagonal_hyperplanes(ring: &RingRef, m: usize, choice: &DiagonalChoice) -> Result<Vec<Hyperplane>> {
    let prod = product_ring(ring, m);
    let standard = standard_diagonal(ring, &prod, m);
    let forms = match choice {
        DiagonalChoice::Standard => standard.clone(),
        DiagonalChoice::Seeded(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let k = standard.len();
            let mut attempt = 0;
            loop {
                let forms: Vec<Polynomial> = (0..k)
                    .map(|_| {
                        let mut f = Polynomial::zero(&prod);
                        for s in &standard {
                            f = &f + &s.scalar_mul(&prod.field().from_i64(rng.gen_range(-3..=3)));
                        }
                        f
                    })
                    .collect();
                if forms.iter().all(|f| !f.is_zero())
                    && Ideal::new(&prod, forms.clone())?.equals(&Ideal::new(&prod, standard.clone())?)?
                {
                    break forms;
                }
                attempt += 1;
                if attempt > 50 {
                    return Err(AlgebraError::NotDiagonal);
                }
            }
        }
        DiagonalChoice::Custom(forms) => {
            if forms.iter().any(|f| !same_ring(f.ring(), &prod)) {
                return Err(AlgebraError::RingMismatch);
            }
            forms.clone()
        }
    };
    if !Ideal::new(&prod, forms.clone())?.equals(&Ideal::new(&prod, standard)?)? {
        return Err(AlgebraError::NotDiagonal);
    }
    forms.into_iter().map(Hyperplane::new).collect()
}

/// A radical equidimensional ideal with a multiplicity; prime when `prime`.
struct Piece {
    ideal: Ideal,
    dimension: usize,
    prime: bool,
    mult: u64,
}

fn cut_piece(piece: Piece, l: &Polynomial, out: &mut Vec<Piece>) -> Result<()> {
    if piece.ideal.contains(l)? {
        out.push(piece);
        return Ok(());
    }
    if !piece.prime && !piece.ideal.quotient_poly(l)?.equals(&piece.ideal)? {
        // some component lies in the hyperplane: split first
        for p in minimal_primes(&piece.ideal)? {
            let dimension = p.dimension;
            cut_piece(Piece { ideal: p.ideal, dimension, prime: true, mult: piece.mult }, l, out)?;
        }
        return Ok(());
    }
    if piece.dimension == 0 {
        return Ok(());
    }
    let cut = piece.ideal.add_gens([l.clone()])?;
    if cut.is_unit() {
        return Ok(());
    }
    let target = piece.dimension - 1;
    for (q, a) in associated_primes(&cut, target)? {
        if q.dimension == target {
            out.push(Piece { ideal: q.ideal, dimension: target, prime: true, mult: piece.mult * a });
        }
    }
    Ok(())
}

/// The intersection cycle `(Z_1 ncap ... ncap Z_m, L)` read back in `A^n`
/// through the first factor.
pub fn vt_intersection(cycles: &[Cycle], choice: &DiagonalChoice) -> Result<Cycle> {
    let first = cycles.first().ok_or_else(|| AlgebraError::Invalid("no cycles to intersect".into()))?;
    let ring = first.ring.clone();
    if cycles.iter().any(|z| !same_ring(&z.ring, &ring)) {
        return Err(AlgebraError::RingMismatch);
    }
    let m = cycles.len();
    if m == 1 {
        return Ok(first.clone());
    }
    let n = ring.nvars();
    let prod = product_ring(&ring, m);
    let hyperplanes = diagonal_hyperplanes(&ring, m, choice)?;
    let mut pieces: Vec<Piece> = Vec::new();
    // a product of primes is prime when all factors but one are linear spaces
    let mut stack: Vec<(Vec<Polynomial>, usize, usize, u64)> = vec![(Vec::new(), 0, 0, 1)];
    for (r, z) in cycles.iter().enumerate() {
        let emb: Vec<usize> = (r * n..(r + 1) * n).collect();
        let mut next = Vec::new();
        for (gens, dim, nonlinear, mult) in &stack {
            for (c, a) in &z.terms {
                let mut g = gens.clone();
                g.extend(c.ideal.gens().iter().map(|p| p.embed(&prod, &emb)));
                next.push((g, dim + c.dimension, nonlinear + (c.degree > 1) as usize, mult * a));
            }
        }
        stack = next;
    }
    for (gens, dim, nonlinear, mult) in stack {
        pieces.push(Piece { ideal: Ideal::new(&prod, gens)?.canonical(), dimension: dim, prime: nonlinear <= 1, mult });
    }
    for h in &hyperplanes {
        let mut next = Vec::new();
        for p in pieces {
            cut_piece(p, h.equation(), &mut next)?;
        }
        pieces = next;
    }
    // every surviving component lies on the diagonal; read it in the first factor
    let mut out = Cycle::empty(&ring);
    let to_first: Vec<Polynomial> = (0..m * n).map(|v| Polynomial::var(&prod, v % n)).collect();
    for p in pieces {
        let primes = if p.prime {
            vec![(p.ideal, p.mult)]
        } else {
            minimal_primes(&p.ideal)?.into_iter().map(|q| (q.ideal, p.mult)).collect()
        };
        for (q, a) in primes {
            let gens: Vec<Polynomial> =
                q.gens().iter().map(|g| g.compose(&to_first).map(|h| truncate_vars(&ring, &h))).collect::<Result<_>>()?;
            out.add(Component::new(Ideal::new(&ring, gens)?)?, a)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::poly::Ring;

    fn r2() -> RingRef {
        Ring::new(Field::Rational, ["x", "y"])
    }

    fn hp(r: &RingRef, s: &str) -> Hyperplane {
        Hyperplane::new(crate::parse::parse_polynomial(r, s).unwrap()).unwrap()
    }

    fn summary(z: &Cycle) -> Vec<(usize, u64, u64)> {
        let mut v: Vec<_> = z.terms().iter().map(|(c, a)| (c.dimension(), c.degree(), *a)).collect();
        v.sort();
        v
    }

    #[test]
    fn ncap_is_not_commutative() {
        let r = r2();
        let z = Cycle::prime(Ideal::parse(&r, "y - x^2").unwrap()).unwrap();
        let a = ncap(&ncap(&z, &hp(&r, "x")).unwrap(), &hp(&r, "y")).unwrap();
        let b = ncap(&ncap(&z, &hp(&r, "y")).unwrap(), &hp(&r, "x")).unwrap();
        assert_eq!(summary(&a), vec![(0, 1, 1)]);
        assert_eq!(summary(&b), vec![(0, 1, 2)]);
        assert!(!a.same(&b));
    }

    #[test]
    fn ncap_keeps_contained_components() {
        let r = r2();
        let z = Cycle::prime(Ideal::parse(&r, "x").unwrap()).unwrap();
        let w = ncap(&z, &hp(&r, "x")).unwrap();
        assert!(w.same(&z));
    }

    #[test]
    fn parabola_meets_tangent_line() {
        let r = r2();
        let z1 = Cycle::prime(Ideal::parse(&r, "y - x^2").unwrap()).unwrap();
        let z2 = Cycle::prime(Ideal::parse(&r, "y").unwrap()).unwrap();
        let v = vt_intersection(&[z1, z2], &DiagonalChoice::Standard).unwrap();
        assert_eq!(summary(&v), vec![(0, 1, 2)]);
        assert!(v.terms()[0].0.ideal().equals(&Ideal::parse(&r, "x, y").unwrap()).unwrap());
    }

    #[test]
    fn seeded_diagonal_is_verified() {
        let r = r2();
        let hs = diagonal_hyperplanes(&r, 2, &DiagonalChoice::Seeded(7)).unwrap();
        assert_eq!(hs.len(), 2);
        let prod = product_ring(&r, 2);
        let bad = vec![Polynomial::var(&prod, 0), Polynomial::var(&prod, 1)];
        assert!(matches!(diagonal_hyperplanes(&r, 2, &DiagonalChoice::Custom(bad)), Err(AlgebraError::NotDiagonal)));
    }

    #[test]
    fn irrational_points_split_in_the_product() {
        let r = Ring::new(Field::Rational, ["x"]);
        let z = Cycle::prime(Ideal::parse(&r, "x^2 - 2").unwrap()).unwrap();
        let v = vt_intersection(&[z.clone(), z], &DiagonalChoice::Standard).unwrap();
        assert_eq!(summary(&v), vec![(0, 2, 1)]);
    }

    #[test]
    fn associated_cycles() {
        let r = r2();
        let a = associated_cycle(&Ideal::parse(&r, "x^2, x*y").unwrap()).unwrap();
        assert_eq!(summary(&a), vec![(0, 1, 1), (1, 1, 1)]);
        assert_eq!(arith_degree(&Ideal::parse(&r, "x^2, x*y").unwrap()).unwrap(), 2);
        let r1 = Ring::new(Field::Rational, ["x"]);
        assert_eq!(summary(&associated_cycle(&Ideal::parse(&r1, "x^2").unwrap()).unwrap()), vec![(0, 1, 2)]);
    }

    #[test]
    fn ideal_of_cycle_multiplies() {
        let r = Ring::new(Field::Rational, ["x", "y", "z"]);
        let axes = ["y, z", "x, z", "x, y"];
        let mut z = Cycle::empty(&r);
        for a in axes {
            z.add(Component::new(Ideal::parse(&r, a).unwrap()).unwrap(), 1).unwrap();
        }
        let i = ideal_of_cycle(&z).unwrap();
        let expected = Ideal::parse(&r, "y, z").unwrap().product(&Ideal::parse(&r, "x, z").unwrap()).unwrap().product(&Ideal::parse(&r, "x, y").unwrap()).unwrap();
        assert!(i.equals(&expected).unwrap());
        assert!(ideal_of_cycle(&Cycle::empty(&r)).unwrap().is_unit());
        assert_eq!(cycle_degree(&z), 3);
    }

    #[test]
    fn parametrized_component() {
        let r = Ring::new(Field::Rational, ["x", "y", "z", "s"]);
        let t = Ring::new(Field::Rational, ["u", "v"]);
        let p = crate::parse::parse_polynomial_list(&t, "u^3, u^2, u*v, v").unwrap();
        let c = Component::from_parametrization(&r, &p).unwrap();
        assert_eq!((c.dimension(), c.degree()), (2, 4));
    }
}
