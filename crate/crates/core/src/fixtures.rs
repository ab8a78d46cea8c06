//! The worked examples as ready-made objects, plus a pass/fail suite over them.

use std::time::Instant;

use serde::Serialize;

use crate::certificates::{null_certificate, NullOutcome};
use crate::chow::{chow_ideal, ChowConfig};
use crate::cycles::{Component, Cycle};
use crate::error::Result;
use crate::field::Field;
use crate::hilbert::HilbertSeries;
use crate::ideal::Ideal;
use crate::intclosure::{closure_membership, monomial_closure, ClosureBounds};
use crate::linalg::{contains_mod_power, Span};
use crate::parse::parse_polynomial;
use crate::poly::{Polynomial, Ring, RingRef};

/// `K[x, y, z, s]`.
pub fn xyzs_ring() -> RingRef {
    Ring::new(Field::Rational, ["x", "y", "z", "s"])
}

/// Ideal of the image of `(u, v) -> (u^n, u^2, uv, v)`, `n` odd.
pub fn family_ideal(r: &RingRef, n: u32) -> Result<Ideal> {
    let (h, l) = ((n + 1) / 2, (n - 1) / 2);
    Ideal::parse(r, &format!("x^2 - y^{n}, z^2 - y*s^2, z^{n} - x*s^{n}, x*z - y^{h}*s, x*s - y^{l}*z"))
}

/// The printed form of `(I_n, s)`.
pub fn family_section(r: &RingRef, n: u32) -> Result<Ideal> {
    Ideal::parse(r, &format!("x^2 - y^{n}, z^2, x*z, y^{}*z, s", (n - 1) / 2))
}

/// `J_n = (x^2 - y^n, z, s)`.
pub fn family_curve(r: &RingRef, n: u32) -> Result<Ideal> {
    Ideal::parse(r, &format!("x^2 - y^{n}, z, s"))
}

/// `dim_K J/I` for `I ⊆ J` with finite quotient; `None` if the quotient is infinite.
pub fn quotient_length(i: &Ideal, j: &Ideal) -> Option<i64> {
    let n = i.ring().nvars();
    let hi = HilbertSeries::of_monomial_ideal(&i.gb().leading_monomials(), n);
    let hj = HilbertSeries::of_monomial_ideal(&j.gb().leading_monomials(), n);
    let d = hi.sub(&hj).reduced();
    (d.power == 0).then(|| d.numerator.iter().sum())
}

/// Whether the classes of `elems` modulo `i` are linearly independent.
pub fn independent_modulo(elems: &[Polynomial], i: &Ideal) -> Result<bool> {
    let mut span = Span::new(false);
    for e in elems {
        if !span.insert(&i.normal_form(e)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The curve `x_1^3 + x_2^5 = x_3 = 0` in `A^3`.
pub fn cusp_cycle() -> Result<Cycle> {
    let r = Ring::new(Field::Rational, ["x1", "x2", "x3"]);
    Cycle::prime(Ideal::parse(&r, "x1^3 + x2^5, x3")?)
}

/// The nine generators of its Chow ideal.
pub fn cusp_chow_ideal(r: &RingRef) -> Result<Ideal> {
    Ideal::parse(r, "x1^3 + x2^5, x1^2*x3, x1*x3^2, x3^3, x2^4*x3, x2^3*x3^2, x2^2*x3^3, x2*x3^4, x3^5")
}

/// The coordinate axes of `A^n` as separate prime cycles, in variables `x1..xn`.
pub fn coordinate_axes(n: usize) -> Result<Vec<Cycle>> {
    let r = Ring::new(Field::Rational, (1..=n).map(|i| format!("x{i}")));
    (0..n)
        .map(|i| Cycle::prime(Ideal::new(&r, (0..n).filter(|&j| j != i).map(|j| Polynomial::var(&r, j)))?))
        .collect()
}

/// `p` times the origin of `A^2` over `F_p`.
pub fn char_p_point(p: u32) -> Result<Cycle> {
    let r = Ring::new(Field::prime(p)?, ["x", "y"]);
    Cycle::from_terms(&r, [(Component::new(Ideal::parse(&r, "x, y")?)?, p as u64)])
}

/// Rank-one locus of `[[x, y + a t, b t], [z, y + c t, z + d t]]` with
/// `t = s^power`.
pub fn determinantal_surface(r: &RingRef, [a, b, c, d]: [i64; 4], power: u32) -> Result<Cycle> {
    let t = format!("s^{power}");
    let m = [["x".to_string(), format!("y + ({a})*{t}"), format!("({b})*{t}")], ["z".to_string(), format!("y + ({c})*{t}"), format!("z + ({d})*{t}")]];
    let mut gens = Vec::new();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        gens.push(parse_polynomial(r, &format!("({})*({}) - ({})*({})", m[0][i], m[1][j], m[0][j], m[1][i]))?);
    }
    Cycle::prime(Ideal::new(r, gens)?)
}

/// The curve `z = x^2 - y^n = 0` in `A^3`.
pub fn deformation_curve(n: u32) -> Result<Cycle> {
    let r = Ring::new(Field::Rational, ["x", "y", "z"]);
    Cycle::prime(Ideal::parse(&r, &format!("z, x^2 - y^{n}"))?)
}

/// `(x^2 - y^n, z^2, xz, y^{n-1} z)`.
pub fn deformation_chow_ideal(r: &RingRef, n: u32) -> Result<Ideal> {
    Ideal::parse(r, &format!("x^2 - y^{n}, z^2, x*z, y^{}*z", n - 1))
}

/// `(x^2 - y^n, z^2, xz, y^{(n-1)/2} z)`.
pub fn special_fibre_ideal(r: &RingRef, n: u32) -> Result<Ideal> {
    Ideal::parse(r, &format!("x^2 - y^{n}, z^2, x*z, y^{}*z", (n - 1) / 2))
}

/// The first `N` in `deg f + 1 ..= deg f + extra` with `f ∉ (gens) + m^N`,
/// which proves `f ∉ (gens)`.
pub fn local_refutation(gens: &[Polynomial], f: &Polynomial, extra: u32) -> Option<u32> {
    let d = f.total_degree();
    (d + 1..=d + extra).find(|&n| !contains_mod_power(gens, f, n))
}

#[derive(Clone, Debug, Serialize)]
pub struct FixtureResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

fn run_one(name: &str, f: impl FnOnce() -> Result<(bool, String)>) -> FixtureResult {
    let start = Instant::now();
    let (passed, detail) = match f() {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    FixtureResult { name: name.to_string(), passed, detail, seconds: start.elapsed().as_secs_f64() }
}

fn xyz(r: &RingRef) -> Polynomial {
    parse_polynomial(r, "x*y*z").expect("static polynomial")
}

/// Runs every worked example with Chow samples drawn from `seed`.
pub fn paper_suite(seed: u64) -> Vec<FixtureResult> {
    let config = ChowConfig { seed, ..ChowConfig::default() };
    let mut out = Vec::new();
    for n in [3u32, 5] {
        out.push(run_one(&format!("hyperplane section of S_{n}"), || {
            let r = xyzs_ring();
            let sec = family_ideal(&r, n)?.add_gens([Polynomial::var(&r, 3)])?;
            let j = family_curve(&r, n)?;
            let m = Ideal::parse(&r, "x, y, z, s")?;
            let basis: Vec<Polynomial> = (0..(n - 1) / 2).map(|k| parse_polynomial(&r, &format!("y^{k}*z"))).collect::<Result<_>>()?;
            let len = quotient_length(&sec, &j);
            let ok = sec.equals(&family_section(&r, n)?)?
                && len == Some(((n - 1) / 2) as i64)
                && independent_modulo(&basis, &sec)?
                && sec.contains_ideal(&j.power(2))?
                && sec.contains_ideal(&m.power((n - 1) / 2).product(&j)?)?
                && j.degree()? == n as u64;
            Ok((ok, format!("dim J/(I,s) = {len:?}, deg J = {}", j.degree()?)))
        }));
    }
    out.push(run_one("Chow ideal of the cuspidal curve", || {
        let z = cusp_cycle()?;
        let res = chow_ideal(&z, &config)?;
        let r = z.ring().clone();
        let f = parse_polynomial(&r, "x2^2*x3^2")?;
        let verdict = closure_membership(&f, &res.ideal, &ClosureBounds::default())?;
        let k = verdict.certificate().map(|c| c.degree);
        let ok = res.ideal.equals(&cusp_chow_ideal(&r)?)? && !res.ideal.contains(&f)? && k == Some(2);
        Ok((ok, format!("{} samples kept, x2^2 x3^2 {} with k = {k:?}", res.samples.len(), verdict.label())))
    }));
    out.push(run_one("coordinate axes in A^3", || {
        let axes = coordinate_axes(3)?;
        let mut z = Cycle::empty(axes[0].ring());
        for c in &axes {
            z.add_cycle(c, 1)?;
        }
        let r = z.ring().clone();
        let ich = chow_ideal(&z, &config)?.ideal;
        let mut prod = Ideal::unit(&r);
        for c in &axes {
            prod = prod.product(&chow_ideal(c, &config)?.ideal)?;
        }
        let m = parse_polynomial(&r, "x1*x2*x3")?;
        let ok = !ich.contains(&m)? && prod.equals(&ich.add_gens([m])?)?;
        Ok((ok, "x1 x2 x3 outside, product = (I^ch, x1 x2 x3)".into()))
    }));
    out.push(run_one("5 times a point over F_5", || {
        let z = char_p_point(5)?;
        let r = z.ring().clone();
        let ich = chow_ideal(&z, &config)?.ideal;
        let closure = monomial_closure(&Ideal::parse(&r, "x^5, y^5")?)?;
        let ok = ich.equals(&Ideal::parse(&r, "x^5, y^5")?)? && closure.equals(&Ideal::parse(&r, "x, y")?.power(5))?;
        Ok((ok, "I^ch = (x^5, y^5), closure = (x, y)^5".into()))
    }));
    out.push(run_one("determinantal surfaces", || {
        let r = xyzs_ring();
        let tuple = [2, 3, 5, 7];
        let s = Polynomial::var(&r, 3);
        let i1 = chow_ideal(&determinantal_surface(&r, tuple, 1)?, &config)?.ideal;
        let inside = i1.add_gens([s.clone()])?.contains(&xyz(&r))?;
        let i2 = chow_ideal(&determinantal_surface(&r, tuple, 2)?, &config)?.ideal;
        let zero = [Polynomial::var(&r, 0), Polynomial::var(&r, 1), Polynomial::var(&r, 2), Polynomial::zero(&r)];
        let restricted: Vec<Polynomial> = i2.gens().iter().map(|g| g.compose(&zero)).collect::<Result<_>>()?;
        let outside = local_refutation(&restricted, &xyz(&r), 3);
        let ok = inside && outside.is_some();
        Ok((ok, format!("xyz in (I^ch(Z1), s): {inside}; refuted for Z2 modulo m^N at N = {outside:?}")))
    }));
    for n in [3u32, 5] {
        out.push(run_one(&format!("deformation fixture n = {n}"), || {
            let w = deformation_curve(n)?;
            let r = w.ring().clone();
            let ich = chow_ideal(&w, &config)?.ideal;
            let ok = ich.equals(&deformation_chow_ideal(&r, n)?)? && special_fibre_ideal(&r, n)?.contains_ideal(&ich)?;
            Ok((ok, "I^ch(W) matches and lies in I(S_0)".into()))
        }));
    }
    out.push(run_one("two disjoint lines", || {
        let r = Ring::new(Field::Rational, ["x", "y", "z"]);
        let out = null_certificate(&[Ideal::parse(&r, "x, y")?, Ideal::parse(&r, "x - 1, z")?])?;
        match out {
            NullOutcome::Certificate(c) => Ok((c.achieved_degree() == 1, format!("degree {}", c.achieved_degree()))),
            NullOutcome::NoCertificate { .. } => Ok((false, "no certificate".into())),
        }
    }));
    out
}
