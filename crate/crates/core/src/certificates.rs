//! Prime-power product and Nullstellensatz certificates for several ideals.

use serde_json::{json, Value};

use crate::cycles::{associated_cycle, cycle_degree, vt_intersection, DiagonalChoice};
use crate::error::{AlgebraError, Result};
use crate::ideal::Ideal;
use crate::linalg::Span;
use crate::monomial::Monomial;
use crate::poly::{same_ring, Polynomial, RingRef};

/// Fallback seed for the diagonal when the standard choice fails.
const FALLBACK_SEED: u64 = 0xd1a6;

fn check_ideals(ideals: &[Ideal]) -> Result<RingRef> {
    let ring = ideals.first().ok_or_else(|| AlgebraError::Invalid("no ideals given".into()))?.ring().clone();
    if ideals.iter().any(|i| !same_ring(i.ring(), &ring)) {
        return Err(AlgebraError::RingMismatch);
    }
    Ok(ring)
}

fn sum_ideal(ring: &RingRef, ideals: &[Ideal]) -> Result<Ideal> {
    Ideal::new(ring, ideals.iter().flat_map(|i| i.gens().iter().cloned()))
}

/// `arith-deg I`: the degree of the associated cycle.
pub fn arith_deg(i: &Ideal) -> Result<u64> {
    Ok(cycle_degree(&associated_cycle(i)?))
}

/// `∏_j P_j^{a_j} ⊆ (I_1, ..., I_m)`.
#[derive(Clone, Debug)]
pub struct BezoutCertificate {
    pub target: Ideal,
    /// `(P_j, a_j, b_j, d_j)` with `a_j = n b_j d_j`.
    pub factors: Vec<(Ideal, u64, u64, u64)>,
    pub arith_degrees: Vec<u64>,
    pub bound: u64,
}

impl BezoutCertificate {
    pub fn exponent_sum(&self) -> u64 {
        self.factors.iter().map(|f| f.1).sum()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "target": self.target.to_string(),
            "factors": self.factors.iter().map(|(p, a, b, d)| json!({
                "prime": p.to_string(), "exponent": a, "multiplicity": b, "degree": d,
            })).collect::<Vec<_>>(),
            "exponent_sum": self.exponent_sum(),
            "arith_degrees": self.arith_degrees,
            "bound": self.bound,
        })
    }
}

/// `∏ P_j^{a_j} ⊆ J` through the colon chain `J : P_1 : ... : P_1 : P_2 ...`
/// reaching the unit ideal.
fn product_contained(factors: &[(Ideal, u64)], target: &Ideal) -> Result<bool> {
    let mut q = target.clone();
    for (p, a) in factors {
        for _ in 0..*a {
            if q.is_unit() {
                return Ok(true);
            }
            q = q.quotient(p)?.canonical();
        }
    }
    Ok(q.is_unit())
}

/// Prime-power product for `(I_1, ..., I_m)` from a VT intersection cycle.
pub fn bezout_certificate(ideals: &[Ideal], choice: &DiagonalChoice) -> Result<BezoutCertificate> {
    let ring = check_ideals(ideals)?;
    let n = ring.nvars() as u64;
    let cycles = ideals.iter().map(associated_cycle).collect::<Result<Vec<_>>>()?;
    let arith_degrees: Vec<u64> = cycles.iter().map(cycle_degree).collect();
    let bound = n * arith_degrees.iter().product::<u64>();
    let vt = match vt_intersection(&cycles, choice) {
        Err(AlgebraError::DecompositionFailure(_)) if matches!(choice, DiagonalChoice::Standard) => {
            vt_intersection(&cycles, &DiagonalChoice::Seeded(FALLBACK_SEED))?
        }
        other => other?,
    };
    let target = sum_ideal(&ring, ideals)?.canonical();
    let factors: Vec<(Ideal, u64, u64, u64)> =
        vt.terms().iter().map(|(c, b)| (c.ideal().clone(), n * b * c.degree(), *b, c.degree())).collect();
    let cert = BezoutCertificate { target, factors, arith_degrees, bound };
    if !verify_bezout(&cert)? {
        return Err(AlgebraError::CertificateViolation("prime-power product is not contained in the sum".into()));
    }
    Ok(cert)
}

/// Re-checks a Bézout certificate from its stored data.
pub fn verify_bezout(cert: &BezoutCertificate) -> Result<bool> {
    for (p, a, _, _) in &cert.factors {
        if *a == 0 || !p.contains_ideal(&cert.target)? {
            return Ok(false);
        }
    }
    let pairs: Vec<(Ideal, u64)> = cert.factors.iter().map(|(p, a, _, _)| (p.clone(), *a)).collect();
    if !product_contained(&pairs, &cert.target)? {
        return Ok(false);
    }
    Ok(cert.exponent_sum() <= cert.bound)
}

/// `Σ_j f_j = 1` with `f_j = Σ_k h_jk g_jk ∈ I_j`.
#[derive(Clone, Debug)]
pub struct NullCertificate {
    pub generators: Vec<Vec<Polynomial>>,
    pub cofactors: Vec<Vec<Polynomial>>,
    /// Sweep level at which the identity was found.
    pub sweep_degree: u32,
    pub arith_degrees: Vec<u64>,
    pub bound: u64,
}

impl NullCertificate {
    /// `f_j = Σ_k h_jk g_jk`.
    pub fn parts(&self) -> Vec<Polynomial> {
        self.generators
            .iter()
            .zip(&self.cofactors)
            .map(|(gs, hs)| {
                let ring = gs[0].ring();
                gs.iter().zip(hs).fold(Polynomial::zero(ring), |acc, (g, h)| &acc + &(g * h))
            })
            .collect()
    }

    /// `max_j deg f_j`.
    pub fn achieved_degree(&self) -> u32 {
        self.parts().iter().filter(|f| !f.is_zero()).map(|f| f.total_degree()).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "parts": self.parts().iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            "cofactors": self.cofactors.iter().map(|hs| hs.iter().map(|h| h.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "achieved_degree": self.achieved_degree(),
            "sweep_degree": self.sweep_degree,
            "arith_degrees": self.arith_degrees,
            "bound": self.bound,
        })
    }
}

/// Re-checks `Σ f_j = 1` and the degree bound.
pub fn verify_null(cert: &NullCertificate) -> bool {
    if cert.generators.len() != cert.cofactors.len()
        || cert.generators.iter().zip(&cert.cofactors).any(|(g, h)| g.len() != h.len() || g.is_empty())
    {
        return false;
    }
    let parts = cert.parts();
    let ring = parts[0].ring();
    let total = parts.iter().fold(Polynomial::zero(ring), |acc, f| &acc + f);
    total.is_one() && (cert.achieved_degree() as u64) <= cert.bound
}

#[derive(Clone, Debug)]
pub enum NullOutcome {
    Certificate(NullCertificate),
    /// The sweep reached the bound: the ideals have a common zero.
    NoCertificate { bound: u64, arith_degrees: Vec<u64> },
}

/// Degree sweep `D = 0, 1, ...` up to `(n + 1) ∏ arith-deg I_i` for
/// `Σ h_jk g_jk = 1` with `deg h_jk g_jk ≤ D`.
pub fn null_certificate(ideals: &[Ideal]) -> Result<NullOutcome> {
    let ring = check_ideals(ideals)?;
    let n = ring.nvars() as u64;
    let mut arith_degrees = Vec::new();
    for i in ideals {
        // a unit ideal contributes no cycle; it has no zeros at all
        arith_degrees.push(if i.is_unit() { 0 } else { arith_deg(i)? });
    }
    let bound = if ideals.iter().any(|i| i.is_unit()) {
        n + 1
    } else {
        (n + 1) * arith_degrees.iter().product::<u64>()
    };
    let generators: Vec<Vec<Polynomial>> = ideals.iter().map(|i| i.gens().to_vec()).collect();
    if generators.iter().any(|g| g.is_empty()) {
        return Ok(NullOutcome::NoCertificate { bound, arith_degrees });
    }
    let one = Polynomial::one(&ring);
    let unit = ring.field().one();
    let mut span = Span::new(true);
    let mut labels: Vec<(usize, usize, Monomial)> = Vec::new();
    let max_d = u32::try_from(bound).unwrap_or(u32::MAX);
    for d in 0..=max_d {
        for (j, gs) in generators.iter().enumerate() {
            for (k, g) in gs.iter().enumerate() {
                let dg = g.total_degree();
                if dg > d {
                    continue;
                }
                for m in Monomial::of_degree(ring.nvars(), d - dg) {
                    span.insert(&g.mul_term(&m, &unit));
                    labels.push((j, k, m));
                }
            }
        }
        if let Some(combo) = span.express(&one) {
            let mut cofactors: Vec<Vec<Polynomial>> =
                generators.iter().map(|gs| vec![Polynomial::zero(&ring); gs.len()]).collect();
            for (i, c) in combo {
                let (j, k, m) = &labels[i];
                cofactors[*j][*k] = &cofactors[*j][*k] + &Polynomial::term(&ring, m.clone(), c);
            }
            return Ok(NullOutcome::Certificate(NullCertificate {
                generators,
                cofactors,
                sweep_degree: d,
                arith_degrees,
                bound,
            }));
        }
    }
    Ok(NullOutcome::NoCertificate { bound, arith_degrees })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::poly::Ring;

    #[test]
    fn two_lines_meet_at_the_origin() {
        let r = Ring::new(Field::Rational, ["x", "y"]);
        let cert = bezout_certificate(&[Ideal::parse(&r, "x").unwrap(), Ideal::parse(&r, "y").unwrap()], &DiagonalChoice::Standard).unwrap();
        assert_eq!(cert.factors.len(), 1);
        assert!(cert.factors[0].0.equals(&Ideal::parse(&r, "x, y").unwrap()).unwrap());
        assert_eq!((cert.exponent_sum(), cert.bound), (2, 2));
        assert!(verify_bezout(&cert).unwrap());
    }

    #[test]
    fn single_prime() {
        let r = Ring::new(Field::Rational, ["x", "y"]);
        let cert = bezout_certificate(&[Ideal::parse(&r, "y - x^2").unwrap()], &DiagonalChoice::Standard).unwrap();
        assert_eq!((cert.exponent_sum(), cert.bound), (4, 4));
    }

    #[test]
    fn telescoping_identity() {
        let r = Ring::new(Field::Rational, ["x"]);
        let out = null_certificate(&[Ideal::parse(&r, "x").unwrap(), Ideal::parse(&r, "x - 1").unwrap()]).unwrap();
        let NullOutcome::Certificate(c) = out else { panic!("expected a certificate") };
        assert!(verify_null(&c));
        assert_eq!((c.achieved_degree(), c.bound), (1, 2));
        let mut bad = c.clone();
        bad.cofactors[0][0] = &bad.cofactors[0][0] + &Polynomial::one(&r);
        assert!(!verify_null(&bad));
    }

    #[test]
    fn common_zero_exhausts_the_sweep() {
        let r = Ring::new(Field::Rational, ["x", "y"]);
        match null_certificate(&[Ideal::parse(&r, "x").unwrap(), Ideal::parse(&r, "y").unwrap()]).unwrap() {
            NullOutcome::NoCertificate { bound, .. } => assert_eq!(bound, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn coprime_univariate_pair() {
        // extended Euclid: minimal degree of a*(x^2-1) + b*(x^3-2) = 1 has deg a = 2, deg b = 1
        let r = Ring::new(Field::Rational, ["x"]);
        let NullOutcome::Certificate(c) = null_certificate(&[Ideal::parse(&r, "x^2 - 1").unwrap(), Ideal::parse(&r, "x^3 - 2").unwrap()]).unwrap() else {
            panic!("expected a certificate")
        };
        assert!(verify_null(&c));
        assert_eq!(c.bound, 12);
        assert_eq!(c.achieved_degree(), 4);
    }
}
