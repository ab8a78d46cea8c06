//! Integral closure of ideals: exact for monomial ideals, certified
//! membership through dependence equations, certified non-membership through
//! monomial valuations.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{AlgebraError, Result};
use crate::field::FieldElement;
use crate::groebner::lift;
use crate::ideal::Ideal;
use crate::linalg::Span;
use crate::lp::{maximize, LpResult};
use crate::monomial::Monomial;
use crate::poly::{Polynomial, RingRef};

/// Search limits for [`closure_membership`].
#[derive(Clone, Debug, Serialize)]
pub struct ClosureBounds {
    pub max_k: usize,
    /// Degree bound on the multipliers; `None` means `deg f + 2`.
    pub max_aux_degree: Option<u32>,
    pub witness_weight_bound: u32,
    pub seed: u64,
}

impl Default for ClosureBounds {
    fn default() -> Self {
        ClosureBounds { max_k: 4, max_aux_degree: None, witness_weight_bound: 6, seed: 0 }
    }
}

/// `f^k + Σ_j i_j f^(k-j) = 0` with each `i_j` written as
/// `Σ h · g_{a_1} ⋯ g_{a_j}` over the generators `g`.
#[derive(Clone, Debug)]
pub struct DependenceCertificate {
    pub element: Polynomial,
    pub generators: Vec<Polynomial>,
    pub degree: usize,
    /// `terms[j-1]` lists `(multiplier, generator indices)` for `i_j`.
    pub terms: Vec<Vec<(Polynomial, Vec<usize>)>>,
}

impl DependenceCertificate {
    /// The coefficient `i_j`, `1 ≤ j ≤ k`.
    pub fn coefficient(&self, j: usize) -> Polynomial {
        let ring = self.element.ring();
        let mut acc = Polynomial::zero(ring);
        for (h, idx) in &self.terms[j - 1] {
            let mut p = h.clone();
            for &i in idx {
                p = &p * &self.generators[i];
            }
            acc = &acc + &p;
        }
        acc
    }

    /// Expands the identity and checks that it is literally zero.
    pub fn verify(&self) -> bool {
        if self.terms.len() != self.degree
            || self.terms.iter().enumerate().any(|(j, ts)| ts.iter().any(|(_, idx)| idx.len() != j + 1 || idx.iter().any(|&i| i >= self.generators.len())))
        {
            return false;
        }
        let mut acc = self.element.pow(self.degree as u32);
        for j in 1..=self.degree {
            acc = &acc + &(&self.coefficient(j) * &self.element.pow((self.degree - j) as u32));
        }
        acc.is_zero()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "element": self.element.to_string(),
            "degree": self.degree,
            "generators": self.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            "coefficients": (1..=self.degree).map(|j| json!({
                "j": j,
                "value": self.coefficient(j).to_string(),
                "terms": self.terms[j - 1].iter().map(|(h, idx)| json!({"multiplier": h.to_string(), "generators": idx})).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// A homomorphism `x_i -> c_i t^(w_i)` to `K[[t]]` under which `f` vanishes
/// to lower order than every generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValuationWitness {
    pub weights: Vec<u64>,
    pub scalars: Vec<i64>,
    pub order_f: u64,
    /// `None` when every generator maps to zero.
    pub order_ideal: Option<u64>,
}

impl ValuationWitness {
    /// Recomputes both orders from scratch.
    pub fn verify(&self, f: &Polynomial, generators: &[Polynomial]) -> bool {
        let Some(of) = t_order(f, &self.weights, &self.scalars) else { return false };
        let oi = generators.iter().filter_map(|g| t_order(g, &self.weights, &self.scalars)).min();
        of == self.order_f && oi == self.order_ideal && oi.map_or(true, |oi| of < oi)
    }
}

/// Why a monomial-ideal verdict is exact.
#[derive(Clone, Debug)]
pub enum InEvidence {
    Dependence(DependenceCertificate),
    /// Every term of `f` is a lattice point of the Newton polyhedron.
    NewtonPolyhedron { exponents: Vec<Vec<u32>> },
}

#[derive(Clone, Debug)]
pub enum ClosureVerdict {
    In(InEvidence),
    Out(ValuationWitness),
    Unknown { bounds: ClosureBounds },
}

impl ClosureVerdict {
    pub fn is_in(&self) -> bool {
        matches!(self, ClosureVerdict::In(_))
    }

    pub fn is_out(&self) -> bool {
        matches!(self, ClosureVerdict::Out(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            ClosureVerdict::In(_) => "IN",
            ClosureVerdict::Out(_) => "OUT",
            ClosureVerdict::Unknown { .. } => "UNKNOWN",
        }
    }

    pub fn certificate(&self) -> Option<&DependenceCertificate> {
        match self {
            ClosureVerdict::In(InEvidence::Dependence(c)) => Some(c),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            ClosureVerdict::In(InEvidence::Dependence(c)) => json!({"verdict": "IN", "certificate": c.to_json()}),
            ClosureVerdict::In(InEvidence::NewtonPolyhedron { exponents }) => {
                json!({"verdict": "IN", "newton_polyhedron": exponents})
            }
            ClosureVerdict::Out(w) => json!({"verdict": "OUT", "witness": w, "valuations": "monomial"}),
            ClosureVerdict::Unknown { bounds } => json!({"verdict": "UNKNOWN", "bounds": bounds, "valuations": "monomial"}),
        }
    }
}

/// Order in `t` of `p(c_1 t^(w_1), ..., c_n t^(w_n))`; `None` for zero.
pub fn t_order(p: &Polynomial, weights: &[u64], scalars: &[i64]) -> Option<u64> {
    let field = p.ring().field();
    let mut by_order: BTreeMap<u64, FieldElement> = BTreeMap::new();
    for (m, c) in p.terms() {
        let mut o = 0u64;
        let mut v = c.clone();
        for (i, &e) in m.exponents().iter().enumerate() {
            o += weights[i] * e as u64;
            v = &v * &field.from_i64(scalars[i]).pow(e as u64);
        }
        let slot = by_order.entry(o).or_insert_with(|| field.zero());
        *slot = &*slot + &v;
    }
    by_order.into_iter().find(|(_, c)| !c.is_zero()).map(|(o, _)| o)
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Clears denominators of a nonnegative rational vector.
fn integer_vector(w: &[BigRational]) -> Vec<u64> {
    let l = w.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    w.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer().to_u64().unwrap_or(u64::MAX)).collect()
}

/// `None` if `alpha` lies in `conv(exps) + R^n_{≥0}`, otherwise integer
/// weights `w ≥ 0` with `w · alpha < min w · a`.
pub fn newton_separator(alpha: &[u32], exps: &[Vec<u32>]) -> Option<Vec<u64>> {
    let n = alpha.len();
    // variables (w_1..w_n, t): max t - w·alpha, t ≤ w·a, Σ w ≤ 1
    let mut c: Vec<BigRational> = alpha.iter().map(|&a| q(-(a as i64))).collect();
    c.push(q(1));
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for a in exps {
        let mut row: Vec<BigRational> = a.iter().map(|&e| q(-(e as i64))).collect();
        row.push(q(1));
        rows.push(row);
        rhs.push(q(0));
    }
    let mut row = vec![q(1); n];
    row.push(q(0));
    rows.push(row);
    rhs.push(q(1));
    match maximize(&c, &rows, &rhs) {
        LpResult::Optimal { x, value } if value.is_positive() => Some(integer_vector(&x[..n])),
        _ => None,
    }
}

fn monomial_exponents(i: &Ideal) -> Result<Vec<Vec<u32>>> {
    i.gens()
        .iter()
        .map(|g| if g.is_monomial() { Ok(g.terms()[0].0.exponents().to_vec()) } else { Err(AlgebraError::NotMonomial) })
        .collect()
}

fn is_monomial_ideal(i: &Ideal) -> bool {
    i.gens().iter().all(|g| g.is_monomial())
}

/// The integral closure of a monomial ideal: the monomials whose exponents
/// lie in the Newton polyhedron.
pub fn monomial_closure(i: &Ideal) -> Result<Ideal> {
    let exps = monomial_exponents(i)?;
    let ring = i.ring();
    if exps.is_empty() || i.is_unit() {
        return Ok(i.clone());
    }
    let n = ring.nvars();
    // minimal generators of the closure lie in the box of maximal exponents
    let bounds: Vec<u32> = (0..n).map(|v| exps.iter().map(|a| a[v]).max().unwrap()).collect();
    let mut found: Vec<Vec<u32>> = Vec::new();
    let mut alpha = vec![0u32; n];
    let mut points = Vec::new();
    loop {
        points.push(alpha.clone());
        let mut v = 0;
        while v < n {
            if alpha[v] < bounds[v] {
                alpha[v] += 1;
                break;
            }
            alpha[v] = 0;
            v += 1;
        }
        if v == n {
            break;
        }
    }
    points.sort_by_key(|a| a.iter().sum::<u32>());
    for a in points {
        if found.iter().any(|b| b.iter().zip(&a).all(|(x, y)| x <= y)) {
            continue;
        }
        if newton_separator(&a, &exps).is_none() {
            found.push(a);
        }
    }
    let gens = found.into_iter().map(|e| Polynomial::monomial(ring, Monomial::from_exponents(e)));
    Ok(Ideal::new(ring, gens)?.canonical())
}

/// Positive integer weights making every polynomial weighted-homogeneous.
fn common_grading(polys: &[&Polynomial], n: usize) -> Option<Vec<u64>> {
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..n {
        let mut row = vec![q(0); n];
        row[i] = q(-1);
        rows.push(row);
        rhs.push(q(-1));
    }
    for p in polys {
        let Some((first, _)) = p.terms().first() else { continue };
        for (m, _) in &p.terms()[1..] {
            let diff: Vec<BigRational> =
                m.exponents().iter().zip(first.exponents()).map(|(&a, &b)| q(a as i64 - b as i64)).collect();
            rows.push(diff.clone());
            rhs.push(q(0));
            rows.push(diff.iter().map(|x| -x).collect());
            rhs.push(q(0));
        }
    }
    match maximize(&vec![q(-1); n], &rows, &rhs) {
        LpResult::Optimal { x, .. } => Some(integer_vector(&x)),
        _ => None,
    }
}

fn weighted_degree(m: &Monomial, w: &[u64]) -> u64 {
    m.exponents().iter().zip(w).map(|(&e, &x)| e as u64 * x).sum()
}

fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Searches for a dependence equation of degree exactly `k`.
fn dependence_of_degree(f: &Polynomial, gens: &[Polynomial], k: usize, aux: u32, grading: Option<&[u64]>) -> Option<DependenceCertificate> {
    let ring = f.ring();
    let one = ring.field().one();
    let target = -&f.pow(k as u32);
    let fk_deg = grading.map(|w| weighted_degree(&f.terms()[0].0, w) * k as u64);
    let fpow: Vec<Polynomial> = (0..k).map(|e| f.pow(e as u32)).collect();
    let mut span = Span::new(true);
    let mut labels: Vec<(usize, Vec<usize>, Monomial)> = Vec::new();
    let products: Vec<(usize, Vec<usize>, Polynomial)> = (1..=k)
        .flat_map(|j| multisets(gens.len(), j).into_iter().map(move |idx| (j, idx)))
        .map(|(j, idx)| {
            let p = idx.iter().fold(Polynomial::one(ring), |acc, &i| &acc * &gens[i]);
            let v = &p * &fpow[k - j];
            (j, idx, v)
        })
        .collect();
    for d in 0..=aux {
        for m in Monomial::of_degree(ring.nvars(), d) {
            for (j, idx, v) in &products {
                if let (Some(w), Some(total)) = (grading, fk_deg) {
                    if weighted_degree(&m, w) + weighted_degree(&v.terms()[0].0, w) != total {
                        continue;
                    }
                }
                span.insert(&v.mul_term(&m, &one));
                labels.push((*j, idx.clone(), m.clone()));
            }
        }
        if let Some(combo) = span.express(&target) {
            let mut terms: Vec<BTreeMap<Vec<usize>, Polynomial>> = vec![BTreeMap::new(); k];
            for (i, c) in combo {
                let (j, idx, m) = &labels[i];
                let slot = terms[j - 1].entry(idx.clone()).or_insert_with(|| Polynomial::zero(ring));
                *slot = &*slot + &Polynomial::term(ring, m.clone(), c);
            }
            return Some(DependenceCertificate {
                element: f.clone(),
                generators: gens.to_vec(),
                degree: k,
                terms: terms.into_iter().map(|t| t.into_iter().map(|(idx, h)| (h, idx)).collect()).collect(),
            });
        }
    }
    None
}

fn find_witness(f: &Polynomial, gens: &[Polynomial], bound: u32, seed: u64) -> Option<ValuationWitness> {
    let ring = f.ring();
    let n = ring.nvars();
    let p = ring.field().characteristic() as i64;
    let top = if p == 0 { 9 } else { (p - 1).min(9) };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weights: Vec<Vec<u64>> = Vec::new();
    let mut w = vec![0u64; n];
    loop {
        let mut v = 0;
        while v < n {
            if w[v] < bound as u64 {
                w[v] += 1;
                break;
            }
            w[v] = 0;
            v += 1;
        }
        if v == n {
            break;
        }
        weights.push(w.clone());
    }
    weights.sort_by_key(|w| w.iter().sum::<u64>());
    for w in weights {
        let scalars: Vec<i64> = (0..n)
            .map(|_| {
                let c = rng.gen_range(1..=top);
                if p == 0 && rng.gen_bool(0.5) { -c } else { c }
            })
            .collect();
        let Some(of) = t_order(f, &w, &scalars) else { continue };
        let oi = gens.iter().filter_map(|g| t_order(g, &w, &scalars)).min();
        if oi.map_or(true, |oi| of < oi) {
            return Some(ValuationWitness { weights: w, scalars, order_f: of, order_ideal: oi });
        }
    }
    None
}

fn monomial_verdict(f: &Polynomial, i: &Ideal, bounds: &ClosureBounds) -> Result<ClosureVerdict> {
    let exps = monomial_exponents(i)?;
    let gens = i.gens().to_vec();
    let mut inside = Vec::new();
    for (m, _) in f.terms() {
        let a = m.exponents().to_vec();
        if let Some(w) = newton_separator(&a, &exps) {
            // separate with generic scalars so the terms of f cannot cancel
            for seed in 0..16u64 {
                let mut rng = ChaCha8Rng::seed_from_u64(bounds.seed ^ seed);
                let p = f.ring().field().characteristic() as i64;
                let top = if p == 0 { 9 } else { (p - 1).min(9) };
                let scalars: Vec<i64> = (0..a.len()).map(|_| rng.gen_range(1..=top)).collect();
                let Some(of) = t_order(f, &w, &scalars) else { continue };
                let oi = gens.iter().filter_map(|g| t_order(g, &w, &scalars)).min();
                if oi.map_or(true, |oi| of < oi) {
                    return Ok(ClosureVerdict::Out(ValuationWitness { weights: w, scalars, order_f: of, order_ideal: oi }));
                }
            }
            return Ok(ClosureVerdict::Unknown { bounds: bounds.clone() });
        }
        inside.push(a);
    }
    if f.is_monomial() {
        // m^k divisible by a product of k generators gives m^k - m^k = 0
        for k in 1..=bounds.max_k {
            let mk: Vec<u32> = inside[0].iter().map(|e| e * k as u32).collect();
            for idx in multisets(exps.len(), k) {
                let mut sum = vec![0u32; mk.len()];
                for &g in &idx {
                    for (s, e) in sum.iter_mut().zip(&exps[g]) {
                        *s += e;
                    }
                }
                if sum.iter().zip(&mk).all(|(s, e)| s <= e) {
                    let ring = f.ring();
                    let c = f.terms()[0].1.clone();
                    let quotient: Vec<u32> = mk.iter().zip(&sum).map(|(e, s)| e - s).collect();
                    let coeff = -&c.pow(k as u64);
                    let h = Polynomial::term(ring, Monomial::from_exponents(quotient), coeff);
                    let mut terms = vec![Vec::new(); k];
                    terms[k - 1].push((h, idx));
                    let cert = DependenceCertificate { element: f.clone(), generators: gens, degree: k, terms };
                    return Ok(ClosureVerdict::In(InEvidence::Dependence(cert)));
                }
            }
        }
    }
    Ok(ClosureVerdict::In(InEvidence::NewtonPolyhedron { exponents: inside }))
}

/// Bounded decision of `f ∈ closure(I)`.
pub fn closure_membership(f: &Polynomial, i: &Ideal, bounds: &ClosureBounds) -> Result<ClosureVerdict> {
    if i.is_zero() || i.is_unit() {
        return Err(AlgebraError::Invalid("closure membership needs a nonzero proper ideal".into()));
    }
    let gens = i.gens().to_vec();
    if f.is_zero() {
        let terms = vec![vec![(Polynomial::zero(f.ring()), vec![0])]];
        return Ok(ClosureVerdict::In(InEvidence::Dependence(DependenceCertificate {
            element: f.clone(),
            generators: gens,
            degree: 1,
            terms,
        })));
    }
    if is_monomial_ideal(i) {
        return monomial_verdict(f, i, bounds);
    }
    if let Some(cof) = lift(i.ring(), &gens, f)? {
        let terms = vec![cof.into_iter().enumerate().filter(|(_, h)| !h.is_zero()).map(|(k, h)| (-&h, vec![k])).collect()];
        let cert = DependenceCertificate { element: f.clone(), generators: gens, degree: 1, terms };
        return Ok(ClosureVerdict::In(InEvidence::Dependence(cert)));
    }
    if let Some(w) = find_witness(f, &gens, bounds.witness_weight_bound, bounds.seed) {
        return Ok(ClosureVerdict::Out(w));
    }
    let aux = bounds.max_aux_degree.unwrap_or(f.total_degree() + 2);
    let mut all: Vec<&Polynomial> = gens.iter().collect();
    all.push(f);
    let grading = common_grading(&all, f.ring().nvars());
    for k in 2..=bounds.max_k {
        if let Some(cert) = dependence_of_degree(f, &gens, k, aux, grading.as_deref()) {
            return Ok(ClosureVerdict::In(InEvidence::Dependence(cert)));
        }
    }
    Ok(ClosureVerdict::Unknown { bounds: bounds.clone() })
}

/// Outcome of [`brianconskoda_check`].
#[derive(Clone, Debug, Default, Serialize)]
pub struct BrianconSkodaReport {
    pub certified: usize,
    pub uncertified: usize,
    pub violations: Vec<String>,
}

impl BrianconSkodaReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For each candidate certified integral over `I^n`, checks `f ∈ I`.
pub fn brianconskoda_check(i: &Ideal, n: usize, candidates: &[Polynomial], bounds: &ClosureBounds) -> Result<BrianconSkodaReport> {
    let mut report = BrianconSkodaReport::default();
    if i.is_unit() {
        report.certified = candidates.len();
        return Ok(report);
    }
    let power = i.power(n as u32);
    for f in candidates {
        if closure_membership(f, &power, bounds)?.is_in() {
            report.certified += 1;
            if !i.contains(f)? {
                report.violations.push(f.to_string());
            }
        } else {
            report.uncertified += 1;
        }
    }
    Ok(report)
}

/// Comparison of `closure((I, x))/(x)` with `closure((I, x)/(x))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RestrictionOutcome {
    /// Both sides computed exactly and equal.
    Equal,
    /// No disagreement among the conclusive verdicts.
    Consistent,
    Mismatch(String),
}

impl RestrictionOutcome {
    pub fn holds(&self) -> bool {
        !matches!(self, RestrictionOutcome::Mismatch(_))
    }
}

fn drop_var(small: &RingRef, var: usize, p: &Polynomial) -> Polynomial {
    let terms = p.terms().iter().filter(|(m, _)| m[var] == 0).map(|(m, c)| {
        let mut e = m.exponents().to_vec();
        e.remove(var);
        (Monomial::from_exponents(e), c.clone())
    });
    Polynomial::from_terms(small, terms)
}

/// Checks on this instance that closure commutes with setting `x_var = 0`.
pub fn restriction_commutes_check(i: &Ideal, var: usize, bounds: &ClosureBounds) -> Result<RestrictionOutcome> {
    let ring = i.ring();
    if var >= ring.nvars() {
        return Err(AlgebraError::Invalid(format!("no variable with index {var}")));
    }
    let small = ring.without(var);
    let x = Polynomial::var(ring, var);
    let with_x = i.add_gens([x.clone()])?;
    let restricted = Ideal::new(&small, i.gens().iter().map(|g| drop_var(&small, var, g)))?;
    if restricted.is_zero() {
        // both sides are the zero ideal of K[x_j : j ≠ var]
        return Ok(RestrictionOutcome::Equal);
    }
    if is_monomial_ideal(i) {
        let lhs = monomial_closure(&with_x)?;
        let lhs = Ideal::new(&small, lhs.gens().iter().map(|g| drop_var(&small, var, g)))?;
        let rhs = monomial_closure(&restricted)?;
        return Ok(if lhs.equals(&rhs)? {
            RestrictionOutcome::Equal
        } else {
            RestrictionOutcome::Mismatch(format!("{lhs} vs {rhs}"))
        });
    }
    if restricted.is_unit() {
        return Ok(if with_x.is_unit() { RestrictionOutcome::Equal } else { RestrictionOutcome::Mismatch("unit on one side only".into()) });
    }
    // shared candidates: monomials in the remaining variables up to the generator degree
    let top = restricted.gens().iter().map(|g| g.total_degree()).max().unwrap_or(1);
    let emb: Vec<usize> = (0..ring.nvars()).filter(|&v| v != var).collect();
    for m in Monomial::up_to_degree(small.nvars(), top).into_iter().skip(1) {
        let f_small = Polynomial::monomial(&small, m);
        let f_big = f_small.embed(ring, &emb);
        let a = closure_membership(&f_big, &with_x, bounds)?;
        let b = closure_membership(&f_small, &restricted, bounds)?;
        if (a.is_in() && b.is_out()) || (a.is_out() && b.is_in()) {
            return Ok(RestrictionOutcome::Mismatch(f_small.to_string()));
        }
    }
    Ok(RestrictionOutcome::Consistent)
}
