//! Hilbert series of monomial ideals and the invariants read off from them.
//!
//! For a monomial ideal `M` in `n` variables the Hilbert series of `S/M` is
//! `N(t) / (1 - t)^n`. Applied to the leading monomials of a
//! degree-compatible Gröbner basis this gives the affine Hilbert function of
//! `R/I` after one more division by `1 - t`.

use crate::monomial::Monomial;

/// A rational function `numerator(t) / (1 - t)^power` with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertSeries {
    pub numerator: Vec<i64>,
    pub power: usize,
}

fn trim(p: &mut Vec<i64>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

fn add_shifted(acc: &mut Vec<i64>, p: &[i64], shift: usize) {
    if acc.len() < p.len() + shift {
        acc.resize(p.len() + shift, 0);
    }
    for (i, c) in p.iter().enumerate() {
        acc[i + shift] += c;
    }
}

fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|m| m.degree());
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens {
        if !out.iter().any(|m| m.divides(&g)) {
            out.push(g);
        }
    }
    out
}

fn numerator(gens: Vec<Monomial>) -> Vec<i64> {
    let gens = minimalize(gens);
    if gens.is_empty() {
        return vec![1];
    }
    if gens.iter().any(|g| g.is_one()) {
        return Vec::new();
    }
    let pairwise_coprime = gens.iter().enumerate().all(|(i, a)| gens[i + 1..].iter().all(|b| a.is_coprime(b)));
    if pairwise_coprime {
        let mut acc = vec![1i64];
        for g in &gens {
            let d = g.degree() as usize;
            let mut next = acc.clone();
            next.resize(acc.len() + d, 0);
            for (i, c) in acc.iter().enumerate() {
                next[i + d] -= c;
            }
            acc = next;
        }
        trim(&mut acc);
        return acc;
    }
    // pivot on the variable occurring in the most non-pure generators
    let n = gens[0].nvars();
    let mut counts = vec![0usize; n];
    for g in gens.iter().filter(|g| g.pure_power_var().is_none()) {
        for v in g.support() {
            counts[v] += 1;
        }
    }
    let j = (0..n).max_by_key(|&v| counts[v]).unwrap();
    let mut exps: Vec<u32> = gens.iter().map(|g| g[j]).filter(|&e| e > 0).collect();
    exps.sort_unstable();
    let e = exps[(exps.len() - 1) / 2];
    let mut pivot = vec![0u32; n];
    pivot[j] = e;
    let pivot = Monomial::from_exponents(pivot);
    let mut plus = gens.clone();
    plus.push(pivot.clone());
    let colon: Vec<Monomial> = gens
        .iter()
        .map(|g| {
            let mut ex = g.exponents().to_vec();
            ex[j] = ex[j].saturating_sub(e);
            Monomial::from_exponents(ex)
        })
        .collect();
    let mut acc = numerator(plus);
    add_shifted(&mut acc, &numerator(colon), e as usize);
    trim(&mut acc);
    acc
}

impl HilbertSeries {
    /// Series of `S/(gens)` for monomials in `nvars` variables.
    pub fn of_monomial_ideal(gens: &[Monomial], nvars: usize) -> Self {
        HilbertSeries { numerator: numerator(gens.to_vec()), power: nvars }
    }

    /// The cumulative series `H(t) / (1 - t)`.
    pub fn cumulative(&self) -> Self {
        HilbertSeries { numerator: self.numerator.clone(), power: self.power + 1 }
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.iter().all(|&c| c == 0)
    }

    /// Cancels factors `1 - t` from numerator and denominator.
    pub fn reduced(&self) -> Self {
        let mut num = self.numerator.clone();
        trim(&mut num);
        let mut power = self.power;
        while power > 0 && !num.is_empty() && num.iter().sum::<i64>() == 0 {
            // division by (1 - t): q_i = sum_{k <= i} a_k
            let mut q = Vec::with_capacity(num.len() - 1);
            let mut run = 0;
            for c in &num[..num.len() - 1] {
                run += c;
                q.push(run);
            }
            num = q;
            trim(&mut num);
            power -= 1;
        }
        HilbertSeries { numerator: num, power }
    }

    /// Order of the pole at `t = 1`, i.e. Krull dimension; `None` for the zero module.
    pub fn dimension(&self) -> Option<usize> {
        let r = self.reduced();
        if r.numerator.is_empty() {
            None
        } else {
            Some(r.power)
        }
    }

    /// Leading coefficient: `N(1)` after cancelling all `1 - t` factors.
    pub fn multiplicity(&self) -> i64 {
        self.reduced().numerator.iter().sum()
    }

    /// Coefficient of `t^k` in the power series expansion.
    pub fn coefficient(&self, k: usize) -> i64 {
        // coefficient of t^j in (1 - t)^{-p} is binom(j + p - 1, p - 1)
        let p = self.power;
        let mut total = 0i64;
        for (i, &a) in self.numerator.iter().enumerate() {
            if i > k {
                break;
            }
            let j = k - i;
            let b = if p == 0 {
                (j == 0) as i64
            } else {
                binomial((j + p - 1) as u64, (p - 1) as u64)
            };
            total += a * b;
        }
        total
    }

    pub fn sub(&self, other: &HilbertSeries) -> HilbertSeries {
        assert_eq!(self.power, other.power);
        let mut num = self.numerator.clone();
        num.resize(num.len().max(other.numerator.len()), 0);
        for (i, c) in other.numerator.iter().enumerate() {
            num[i] -= c;
        }
        trim(&mut num);
        HilbertSeries { numerator: num, power: self.power }
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc as i64
}

/// A largest set of variables containing the support of no generator.
pub fn max_independent_set(gens: &[Monomial], nvars: usize) -> Vec<usize> {
    let supports: Vec<u64> = gens
        .iter()
        .map(|g| g.support().fold(0u64, |s, v| s | (1 << v)))
        .collect();
    let mut best: Option<u64> = None;
    for mask in 0u64..(1u64 << nvars) {
        if supports.iter().any(|&s| s & !mask == 0) {
            continue;
        }
        let better = match best {
            None => true,
            // prefer more variables, then lexicographically later ones
            Some(b) => mask.count_ones() > b.count_ones() || (mask.count_ones() == b.count_ones() && mask > b),
        };
        if better {
            best = Some(mask);
        }
    }
    match best {
        None => Vec::new(),
        Some(m) => (0..nvars).filter(|v| m & (1 << v) != 0).collect(),
    }
}

/// The monomials outside the ideal, when there are finitely many.
pub fn standard_monomials(gens: &[Monomial], nvars: usize) -> Option<Vec<Monomial>> {
    let mut bound = vec![None; nvars];
    for g in gens {
        if let Some(v) = g.pure_power_var() {
            let e = g[v];
            bound[v] = Some(bound[v].map_or(e, |b: u32| b.min(e)));
        }
        if g.is_one() {
            return Some(Vec::new());
        }
    }
    let bound: Vec<u32> = bound.into_iter().collect::<Option<Vec<_>>>()?;
    let mut out = Vec::new();
    let mut e = vec![0u32; nvars];
    loop {
        let m = Monomial::from_exponents(e.clone());
        if !gens.iter().any(|g| g.divides(&m)) {
            out.push(m);
        }
        let mut i = 0;
        loop {
            if i == nvars {
                out.sort_by(|a, b| crate::poly::canonical_cmp(a, b));
                return Some(out);
            }
            e[i] += 1;
            if e[i] < bound[i] {
                break;
            }
            e[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e.to_vec())
    }

    /// Oracle: count standard monomials of each degree by enumeration.
    fn brute_count(gens: &[Monomial], n: usize, k: u32) -> i64 {
        fn rec(prefix: &mut Vec<u32>, n: usize, left: u32, gens: &[Monomial], acc: &mut i64) {
            if prefix.len() == n - 1 {
                prefix.push(left);
                let mm = Monomial::from_exponents(prefix.clone());
                if !gens.iter().any(|g| g.divides(&mm)) {
                    *acc += 1;
                }
                prefix.pop();
                return;
            }
            for e in 0..=left {
                prefix.push(e);
                rec(prefix, n, left - e, gens, acc);
                prefix.pop();
            }
        }
        let mut acc = 0;
        rec(&mut Vec::new(), n, k, gens, &mut acc);
        acc
    }

    #[test]
    fn plane_curve_degree() {
        // (x^2) in k[x, y, z]: a double plane
        let h = HilbertSeries::of_monomial_ideal(&[m(&[2, 0, 0])], 3);
        assert_eq!(h.dimension(), Some(2));
        assert_eq!(h.multiplicity(), 2);
        let h = HilbertSeries::of_monomial_ideal(&[m(&[3, 0]), m(&[0, 2])], 2);
        assert_eq!(h.dimension(), Some(0));
        assert_eq!(h.multiplicity(), 6);
    }

    #[test]
    fn independent_sets_and_standard_monomials() {
        let gens = [m(&[1, 1, 0]), m(&[0, 0, 2])];
        let u = max_independent_set(&gens, 3);
        assert_eq!(u.len(), 1);
        let sm = standard_monomials(&[m(&[2, 0]), m(&[1, 1]), m(&[0, 3])], 2).unwrap();
        assert_eq!(sm.len(), 4);
        assert!(standard_monomials(&[m(&[2, 0])], 2).is_none());
    }

    proptest! {
        #![proptest_config(ProptestConfig { rng_seed: proptest::test_runner::RngSeed::Fixed(4), failure_persistence: None, ..ProptestConfig::default() })]
        #[test]
        fn series_matches_enumeration(raw in prop::collection::vec(prop::collection::vec(0u32..4, 3), 1..5)) {
            let gens: Vec<Monomial> = raw.into_iter().map(Monomial::from_exponents).collect();
            let h = HilbertSeries::of_monomial_ideal(&gens, 3);
            for k in 0..9 {
                prop_assert_eq!(h.coefficient(k), brute_count(&gens, 3, k as u32));
            }
            let r = h.reduced();
            for k in 0..9 {
                prop_assert_eq!(r.coefficient(k), h.coefficient(k));
            }
        }
    }
}
