//! Univariate factorization over `Q` (square-free decomposition, then
//! Zassenhaus: factor modulo a prime, Hensel lift, recombine) and over `F_p`
//! (Berlekamp-free Cantor–Zassenhaus).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{AlgebraError, Result};
use crate::field::{is_prime, pow_mod, Field, FieldElement};
use crate::poly::Polynomial;

// ---------------------------------------------------------------------------
// dense arithmetic modulo a word-sized prime

type Fp = Vec<u64>;

fn trim_fp(a: &mut Fp) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn fp_sub(a: &[u64], b: &[u64], p: u64) -> Fp {
    let n = a.len().max(b.len());
    let mut out: Fp = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim_fp(&mut out);
    out
}

fn fp_mul(a: &[u64], b: &[u64], p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim_fp(&mut out);
    out
}

fn fp_divrem(a: &[u64], b: &[u64], p: u64) -> (Fp, Fp) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r: Fp = a.to_vec();
    trim_fp(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let inv = inv_mod(*b.last().unwrap(), p);
    let mut q = vec![0u64; r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() * inv % p;
        q[shift] = c;
        for (j, &y) in b.iter().enumerate() {
            r[shift + j] = (r[shift + j] + p - c * y % p) % p;
        }
        trim_fp(&mut r);
    }
    trim_fp(&mut q);
    (q, r)
}

fn fp_monic(a: &[u64], p: u64) -> Fp {
    match a.last() {
        None => Vec::new(),
        Some(&lc) => {
            let inv = inv_mod(lc, p);
            a.iter().map(|&x| x * inv % p).collect()
        }
    }
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Fp {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim_fp(&mut a);
    trim_fp(&mut b);
    while !b.is_empty() {
        let (_, r) = fp_divrem(&a, &b, p);
        a = b;
        b = r;
    }
    fp_monic(&a, p)
}

/// Returns `(g, s, t)` with `s a + t b = g` monic.
fn fp_xgcd(a: &[u64], b: &[u64], p: u64) -> (Fp, Fp, Fp) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1): (Fp, Fp) = (vec![1], Vec::new());
    let (mut t0, mut t1): (Fp, Fp) = (Vec::new(), vec![1]);
    trim_fp(&mut r0);
    trim_fp(&mut r1);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        let s = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        let t = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    let inv = inv_mod(*r0.last().unwrap(), p);
    let sc = |v: &Fp| -> Fp { v.iter().map(|&x| x * inv % p).collect() };
    (sc(&r0), sc(&s0), sc(&t0))
}

fn fp_derivative(a: &[u64], p: u64) -> Fp {
    let mut out: Fp = a.iter().enumerate().skip(1).map(|(i, &c)| (i as u64 % p) * c % p).collect();
    trim_fp(&mut out);
    out
}

fn fp_powmod(base: &[u64], e: &BigUint, m: &[u64], p: u64) -> Fp {
    let mut acc: Fp = vec![1];
    let (_, b) = fp_divrem(base, m, p);
    let bits = e.bits();
    for i in (0..bits).rev() {
        acc = fp_divrem(&fp_mul(&acc, &acc, p), m, p).1;
        if e.bit(i) {
            acc = fp_divrem(&fp_mul(&acc, &b, p), m, p).1;
        }
    }
    acc
}

/// Square-free decomposition of a monic polynomial over `F_p`.
fn fp_squarefree(f: &[u64], p: u64) -> Vec<(Fp, u32)> {
    let mut out = Vec::new();
    if f.len() <= 1 {
        return out;
    }
    let d = fp_derivative(f, p);
    if d.is_empty() {
        // f is a p-th power
        let root: Fp = f.iter().step_by(p as usize).copied().collect();
        for (g, m) in fp_squarefree(&root, p) {
            out.push((g, m * p as u32));
        }
        return out;
    }
    let mut c = fp_gcd(f, &d, p);
    let mut w = fp_divrem(f, &c, p).0;
    let mut i = 1;
    while w.len() > 1 {
        let y = fp_gcd(&w, &c, p);
        let z = fp_divrem(&w, &y, p).0;
        if z.len() > 1 {
            out.push((fp_monic(&z, p), i));
        }
        i += 1;
        c = fp_divrem(&c, &y, p).0;
        w = y;
    }
    if c.len() > 1 {
        let root: Fp = c.iter().step_by(p as usize).copied().collect();
        for (g, m) in fp_squarefree(&root, p) {
            out.push((g, m * p as u32));
        }
    }
    out
}

fn fp_distinct_degree(f: &[u64], p: u64) -> Vec<(Fp, usize)> {
    let mut out = Vec::new();
    let mut rest = f.to_vec();
    let x: Fp = vec![0, 1];
    let mut h = x.clone();
    let mut i = 1;
    let pe = BigUint::from(p);
    while rest.len() - 1 >= 2 * i {
        h = fp_powmod(&h, &pe, &rest, p);
        let g = fp_gcd(&rest, &fp_sub(&h, &x, p), p);
        if g.len() > 1 {
            rest = fp_divrem(&rest, &g, p).0;
            h = fp_divrem(&h, &rest, p).1;
            out.push((g, i));
        }
        i += 1;
    }
    if rest.len() > 1 {
        let d = rest.len() - 1;
        out.push((fp_monic(&rest, p), d));
    }
    out
}

fn fp_equal_degree(f: &[u64], d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<Fp> {
    let n = f.len() - 1;
    if n == d {
        return vec![fp_monic(f, p)];
    }
    loop {
        let mut a: Fp = (0..n).map(|_| rng.gen_range(0..p)).collect();
        trim_fp(&mut a);
        if a.len() <= 1 {
            continue;
        }
        let b = if p == 2 {
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..d {
                t = fp_divrem(&fp_mul(&t, &t, p), f, p).1;
                acc = fp_sub(&acc, &fp_sub(&[], &t, p), p);
            }
            acc
        } else {
            let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
            fp_sub(&fp_powmod(&a, &e, f, p), &[1], p)
        };
        let g = fp_gcd(f, &b, p);
        if g.len() > 1 && g.len() < f.len() {
            let h = fp_divrem(f, &g, p).0;
            let mut out = fp_equal_degree(&g, d, p, rng);
            out.extend(fp_equal_degree(&fp_monic(&h, p), d, p, rng));
            return out;
        }
    }
}

/// Monic irreducible factors with multiplicities of a nonzero polynomial over `F_p`.
fn factor_fp(f: &[u64], p: u64) -> Vec<(Fp, u32)> {
    let f = fp_monic(f, p);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ p);
    let mut out = Vec::new();
    for (g, m) in fp_squarefree(&f, p) {
        for (h, d) in fp_distinct_degree(&g, p) {
            for irr in fp_equal_degree(&h, d, p, &mut rng) {
                out.push((irr, m));
            }
        }
    }
    out.sort();
    out
}

// ---------------------------------------------------------------------------
// dense rational and integer arithmetic

pub(crate) type Qp = Vec<BigRational>;
type Zp = Vec<BigInt>;

pub(crate) fn trim_q(a: &mut Qp) {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
}

pub(crate) fn q_divrem(a: &[BigRational], b: &[BigRational]) -> (Qp, Qp) {
    let mut r = a.to_vec();
    trim_q(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lc = b.last().unwrap().clone();
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / &lc;
        for (j, y) in b.iter().enumerate() {
            r[shift + j] = &r[shift + j] - &c * y;
        }
        q[shift] = c;
        trim_q(&mut r);
    }
    trim_q(&mut q);
    (q, r)
}

pub(crate) fn q_monic(a: &[BigRational]) -> Qp {
    let lc = a.last().unwrap().clone();
    a.iter().map(|c| c / &lc).collect()
}

pub(crate) fn q_gcd(a: &[BigRational], b: &[BigRational]) -> Qp {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim_q(&mut a);
    trim_q(&mut b);
    while !b.is_empty() {
        let (_, r) = q_divrem(&a, &b);
        a = b;
        b = r;
    }
    q_monic(&a)
}

pub(crate) fn q_derivative(a: &[BigRational]) -> Qp {
    let mut out: Qp = a.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(BigInt::from(i))).collect();
    trim_q(&mut out);
    out
}

pub(crate) fn q_mul(a: &[BigRational], b: &[BigRational]) -> Qp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim_q(&mut out);
    out
}

pub(crate) fn q_add(a: &[BigRational], b: &[BigRational]) -> Qp {
    let mut out: Qp = (0..a.len().max(b.len()))
        .map(|i| a.get(i).cloned().unwrap_or_else(BigRational::zero) + b.get(i).cloned().unwrap_or_else(BigRational::zero))
        .collect();
    trim_q(&mut out);
    out
}

pub(crate) fn q_sub(a: &[BigRational], b: &[BigRational]) -> Qp {
    let mut out: Qp = (0..a.len().max(b.len()))
        .map(|i| a.get(i).cloned().unwrap_or_else(BigRational::zero) - b.get(i).cloned().unwrap_or_else(BigRational::zero))
        .collect();
    trim_q(&mut out);
    out
}

/// Inverse of `a` modulo `m`, assuming they are coprime.
pub(crate) fn q_inverse_mod(a: &[BigRational], m: &[BigRational]) -> Qp {
    let (mut r0, mut r1) = (m.to_vec(), q_divrem(a, m).1);
    let (mut t0, mut t1): (Qp, Qp) = (Vec::new(), vec![BigRational::one()]);
    while !r1.is_empty() {
        let (q, r) = q_divrem(&r0, &r1);
        let t = q_sub(&t0, &q_mul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        t0 = std::mem::replace(&mut t1, t);
    }
    assert_eq!(r0.len(), 1, "not coprime");
    let c = r0[0].clone();
    t0.iter().map(|x| x / &c).collect()
}

/// Yun's square-free decomposition over `Q` of a monic polynomial.
fn q_squarefree(f: &[BigRational]) -> Vec<(Qp, u32)> {
    let mut out = Vec::new();
    let d = q_derivative(f);
    let mut a = q_gcd(f, &d);
    let mut b = q_divrem(f, &a).0;
    let mut c = q_divrem(&d, &a).0;
    let mut i = 1;
    loop {
        let db = q_derivative(&b);
        let mut diff: Qp = (0..c.len().max(db.len()))
            .map(|k| c.get(k).cloned().unwrap_or_else(BigRational::zero) - db.get(k).cloned().unwrap_or_else(BigRational::zero))
            .collect();
        trim_q(&mut diff);
        if b.len() <= 1 {
            break;
        }
        a = if diff.is_empty() { q_monic(&b) } else { q_gcd(&b, &diff) };
        if a.len() > 1 {
            out.push((a.clone(), i));
        }
        b = q_divrem(&b, &a).0;
        c = if diff.is_empty() { Vec::new() } else { q_divrem(&diff, &a).0 };
        i += 1;
    }
    out
}

/// Primitive integer polynomial with positive leading coefficient.
fn to_primitive_z(a: &[BigRational]) -> Zp {
    let mut den = BigInt::one();
    for c in a {
        den = den.lcm(c.denom());
    }
    let mut z: Zp = a.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
    let g = z.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if !g.is_zero() {
        for c in z.iter_mut() {
            *c = &*c / &g;
        }
    }
    if z.last().is_some_and(|c| c.is_negative()) {
        for c in z.iter_mut() {
            *c = -&*c;
        }
    }
    z
}

fn z_mod(a: &[BigInt], m: &BigInt) -> Zp {
    let mut out: Zp = a.iter().map(|c| c.mod_floor(m)).collect();
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

fn z_add(a: &[BigInt], b: &[BigInt]) -> Zp {
    (0..a.len().max(b.len()))
        .map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default())
        .collect()
}

fn z_sub(a: &[BigInt], b: &[BigInt]) -> Zp {
    (0..a.len().max(b.len()))
        .map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default())
        .collect()
}

fn z_mul(a: &[BigInt], b: &[BigInt]) -> Zp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Division by a monic polynomial modulo `m`.
fn z_divrem_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (Zp, Zp) {
    let mut r = z_mod(a, m);
    let b = z_mod(b, m);
    debug_assert!(b.last().is_some_and(|c| c.is_one()));
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigInt::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap().clone();
        for (j, y) in b.iter().enumerate() {
            r[shift + j] = (&r[shift + j] - &c * y).mod_floor(m);
        }
        q[shift] = c;
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    (z_mod(&q, m), r)
}

fn to_z(a: &[u64]) -> Zp {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// One quadratic Hensel step: from modulus `m` to `m^2`.
fn hensel_step(f: &Zp, g: &Zp, h: &Zp, s: &Zp, t: &Zp, m: &BigInt) -> (Zp, Zp, Zp, Zp) {
    let m2 = m * m;
    let e = z_mod(&z_sub(f, &z_mul(g, h)), &m2);
    let (q, r) = z_divrem_monic(&z_mul(s, &e), h, &m2);
    let g2 = z_mod(&z_add(&z_add(g, &z_mul(t, &e)), &z_mul(&q, g)), &m2);
    let h2 = z_mod(&z_add(h, &r), &m2);
    let b = z_mod(&z_sub(&z_add(&z_mul(s, &g2), &z_mul(t, &h2)), &[BigInt::one()]), &m2);
    let (c, d) = z_divrem_monic(&z_mul(s, &b), &h2, &m2);
    let s2 = z_mod(&z_sub(s, &d), &m2);
    let t2 = z_mod(&z_sub(&z_sub(t, &z_mul(t, &b)), &z_mul(&c, &g2)), &m2);
    (g2, h2, s2, t2)
}

/// Lifts `f ≡ lc(f) * prod(factors) (mod p)` to monic factors modulo `modulus = p^k`.
fn multi_lift(f: &Zp, factors: &[Fp], p: u64, modulus: &BigInt) -> Vec<Zp> {
    if factors.len() == 1 {
        let lc = f.last().unwrap().mod_floor(modulus);
        let inv = lc.modinv(modulus).expect("leading coefficient invertible");
        return vec![z_mod(&f.iter().map(|c| c * &inv).collect::<Vec<_>>(), modulus)];
    }
    let half = factors.len() / 2;
    let lc_p = f.last().unwrap().mod_floor(&BigInt::from(p)).to_u64().unwrap();
    let mut g_p: Fp = vec![lc_p];
    for a in &factors[..half] {
        g_p = fp_mul(&g_p, a, p);
    }
    let mut h_p: Fp = vec![1];
    for b in &factors[half..] {
        h_p = fp_mul(&h_p, b, p);
    }
    let (_, s_p, t_p) = fp_xgcd(&g_p, &h_p, p);
    let (mut g, mut h, mut s, mut t) = (to_z(&g_p), to_z(&h_p), to_z(&s_p), to_z(&t_p));
    let mut m = BigInt::from(p);
    while &m < modulus {
        let next = hensel_step(f, &g, &h, &s, &t, &m);
        g = next.0;
        h = next.1;
        s = next.2;
        t = next.3;
        m = &m * &m;
    }
    let g = z_mod(&g, modulus);
    let h = z_mod(&h, modulus);
    let mut out = multi_lift(&g, &factors[..half], p, modulus);
    out.extend(multi_lift(&h, &factors[half..], p, modulus));
    out
}

fn symmetric(a: &[BigInt], m: &BigInt) -> Zp {
    let half = m / 2;
    a.iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect()
}

fn z_exact_div(a: &[BigInt], b: &[BigInt]) -> Option<Zp> {
    let mut r = a.to_vec();
    if r.len() < b.len() {
        return None;
    }
    let lc = b.last().unwrap();
    let mut q = vec![BigInt::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let (c, rem) = r.last().unwrap().div_rem(lc);
        if !rem.is_zero() {
            return None;
        }
        for (j, y) in b.iter().enumerate() {
            r[shift + j] = &r[shift + j] - &c * y;
        }
        q[shift] = c;
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    if r.is_empty() {
        Some(q)
    } else {
        None
    }
}

fn z_primitive(a: &[BigInt]) -> Zp {
    let g = a.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    let mut out: Zp = a.iter().map(|c| c / &g).collect();
    if out.last().is_some_and(|c| c.is_negative()) {
        out = out.into_iter().map(|c| -c).collect();
    }
    out
}

/// Irreducible factors over `Z` of a square-free primitive polynomial.
fn zassenhaus(f: &Zp) -> Vec<Zp> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.clone()];
    }
    let lc = f.last().unwrap().clone();
    // choose a prime keeping f square-free and of full degree
    let mut p = 3u64;
    let factors = loop {
        if is_prime(p) && !(&lc % p).is_zero() {
            let fp: Fp = f.iter().map(|c| c.mod_floor(&BigInt::from(p)).to_u64().unwrap()).collect();
            let monic = fp_monic(&fp, p);
            if fp_gcd(&monic, &fp_derivative(&monic, p), p).len() == 1 {
                break factor_fp(&monic, p).into_iter().map(|(g, _)| g).collect::<Vec<_>>();
            }
        }
        p += 2;
    };
    if factors.len() == 1 {
        return vec![f.clone()];
    }
    // Mignotte-style bound on factor coefficients
    let norm: BigInt = f.iter().map(|c| c.abs()).max().unwrap();
    let bound = BigInt::from(2u32).pow(n as u32 + 1) * BigInt::from(((n + 1) as f64).sqrt().ceil() as u64) * &norm * lc.abs();
    let mut modulus = BigInt::from(p);
    while modulus <= bound {
        modulus *= p;
    }
    let mut lifted = multi_lift(f, &factors, p, &modulus);
    let mut rest = f.clone();
    let mut out = Vec::new();
    let mut size = 1;
    'outer: while 2 * size <= lifted.len() {
        let idx: Vec<usize> = (0..lifted.len()).collect();
        for subset in combinations(&idx, size) {
            let lc_rest = rest.last().unwrap().clone();
            let mut cand: Zp = vec![lc_rest.clone()];
            for &i in &subset {
                cand = z_mod(&z_mul(&cand, &lifted[i]), &modulus);
            }
            let cand = z_primitive(&symmetric(&cand, &modulus));
            if let Some(q) = z_exact_div(&rest, &cand) {
                out.push(cand);
                rest = z_primitive(&q);
                lifted = lifted.into_iter().enumerate().filter(|(i, _)| !subset.contains(i)).map(|(_, g)| g).collect();
                continue 'outer;
            }
        }
        size += 1;
    }
    out.push(rest);
    out
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// public interface

/// Unit and irreducible factors with multiplicities.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub unit: FieldElement,
    pub factors: Vec<(Polynomial, u32)>,
}

impl Factorization {
    pub fn expand(&self, template: &Polynomial) -> Polynomial {
        let mut acc = Polynomial::constant(template.ring(), self.unit.clone());
        for (f, e) in &self.factors {
            acc = &acc * &f.pow(*e);
        }
        acc
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }
}

/// Factors a nonzero polynomial in which at most one variable occurs.
///
/// Over `Q` the factors are primitive integer polynomials with positive
/// leading coefficient; over `F_p` they are monic.
pub fn factor_univariate(p: &Polynomial) -> Result<Factorization> {
    if p.is_zero() {
        return Err(AlgebraError::Invalid("cannot factor the zero polynomial".into()));
    }
    let (var, coeffs) = p.as_univariate().ok_or(AlgebraError::NotUnivariate)?;
    let ring = p.ring().clone();
    let lead = coeffs.last().unwrap().clone();
    let var = match var {
        None => return Ok(Factorization { unit: lead, factors: Vec::new() }),
        Some(v) => v,
    };
    match ring.field() {
        Field::Prime(m) => {
            let f: Fp = coeffs
                .iter()
                .map(|c| match c {
                    FieldElement::Residue { value, .. } => *value as u64,
                    _ => unreachable!(),
                })
                .collect();
            let factors = factor_fp(&f, m as u64)
                .into_iter()
                .map(|(g, e)| {
                    let cs: Vec<FieldElement> = g.iter().map(|&c| ring.field().from_i64(c as i64)).collect();
                    (Polynomial::from_univariate(&ring, var, &cs), e)
                })
                .collect();
            Ok(Factorization { unit: lead, factors })
        }
        Field::Rational => {
            let q: Qp = coeffs.iter().map(|c| c.as_rational().unwrap().clone()).collect();
            let monic = q_monic(&q);
            let mut factors = Vec::new();
            for (part, e) in q_squarefree(&monic) {
                let z = to_primitive_z(&part);
                for g in zassenhaus(&z) {
                    let cs: Vec<FieldElement> = g.iter().map(|c| ring.field().from_bigint(c)).collect();
                    factors.push((Polynomial::from_univariate(&ring, var, &cs), e));
                }
            }
            factors.sort_by_key(|(f, e)| (f.total_degree(), *e, f.to_string()));
            let mut prod = Polynomial::one(&ring);
            for (f, e) in &factors {
                prod = &prod * &f.pow(*e);
            }
            let unit = &lead / &prod.terms()[0].1;
            Ok(Factorization { unit, factors })
        }
    }
}

/// Square-free part of a univariate polynomial (monic).
pub fn squarefree_part(p: &Polynomial) -> Result<Polynomial> {
    let fac = factor_univariate(p)?;
    let mut acc = Polynomial::one(p.ring());
    for (f, _) in &fac.factors {
        acc = &acc * f;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use crate::poly::Ring;
    use proptest::prelude::*;

    fn q() -> crate::poly::RingRef {
        Ring::new(Field::Rational, ["x", "y"])
    }

    fn strs(f: &Factorization) -> Vec<(String, u32)> {
        f.factors.iter().map(|(g, e)| (g.to_string(), *e)).collect()
    }

    #[test]
    fn spec_examples() {
        let r = q();
        let f = factor_univariate(&parse_polynomial(&r, "x^2-1").unwrap()).unwrap();
        assert_eq!(strs(&f), vec![("x + 1".into(), 1), ("x - 1".into(), 1)]);
        let f = factor_univariate(&parse_polynomial(&r, "x^2+1").unwrap()).unwrap();
        assert!(f.is_irreducible());
        let f = factor_univariate(&parse_polynomial(&r, "x^4-x^2").unwrap()).unwrap();
        assert_eq!(strs(&f), vec![("x + 1".into(), 1), ("x - 1".into(), 1), ("x".into(), 2)]);
    }

    /// Oracle: rational roots by brute force over divisors of the constant and
    /// leading coefficients.
    #[test]
    fn rational_root_oracle_agrees() {
        let r = q();
        let f = parse_polynomial(&r, "6*x^4 - 5*x^3 - 5*x^2 + 5*x - 1").unwrap();
        let fac = factor_univariate(&f).unwrap();
        let mut roots = Vec::new();
        for n in -6i64..=6 {
            for d in 1i64..=6 {
                let v = Field::Rational.from_i64(n) / Field::Rational.from_i64(d);
                if f.eval(&[v.clone(), Field::Rational.zero()]).is_zero() && !roots.contains(&v) {
                    roots.push(v);
                }
            }
        }
        let linear = fac.factors.iter().filter(|(g, _)| g.total_degree() == 1).count();
        assert_eq!(linear, roots.len());
        assert_eq!(fac.expand(&f), f);
    }

    #[test]
    fn swinnerton_dyer_style_irreducible() {
        // x^4 - 10x^2 + 1 is irreducible over Q but splits modulo every prime
        let r = q();
        let f = parse_polynomial(&r, "x^4 - 10*x^2 + 1").unwrap();
        assert!(factor_univariate(&f).unwrap().is_irreducible());
        let g = parse_polynomial(&r, "(x^4 - 10*x^2 + 1)*(x^2 - 2)^3*(3*x + 7)").unwrap();
        let fac = factor_univariate(&g).unwrap();
        assert_eq!(fac.factors.len(), 3);
        assert_eq!(fac.expand(&g), g);
    }

    #[test]
    fn prime_field_factors() {
        let r = Ring::new(Field::prime(5).unwrap(), ["x"]);
        let f = parse_polynomial(&r, "x^5 - x").unwrap();
        let fac = factor_univariate(&f).unwrap();
        assert_eq!(fac.factors.len(), 5);
        let g = parse_polynomial(&r, "(x + 1)^5*(x^2 + 2)").unwrap();
        let fac = factor_univariate(&g).unwrap();
        assert_eq!(strs(&fac), vec![("x + 1".into(), 5), ("x^2 + 2".into(), 1)]);
        let r2 = Ring::new(Field::prime(2).unwrap(), ["x"]);
        let h = parse_polynomial(&r2, "(x^2 + x + 1)*(x^3 + x + 1)*x").unwrap();
        assert_eq!(factor_univariate(&h).unwrap().factors.len(), 3);
    }

    #[test]
    fn not_univariate() {
        let r = q();
        assert!(matches!(factor_univariate(&parse_polynomial(&r, "x*y").unwrap()), Err(AlgebraError::NotUnivariate)));
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 40, rng_seed: proptest::test_runner::RngSeed::Fixed(2), failure_persistence: None, ..ProptestConfig::default() })]
        #[test]
        fn product_of_factors_recovers_input(cs in prop::collection::vec(-9i64..10, 2..7), ds in prop::collection::vec(-9i64..10, 2..5)) {
            let r = q();
            let f = Field::Rational;
            let a = Polynomial::from_univariate(&r, 0, &cs.iter().map(|&c| f.from_i64(c)).collect::<Vec<_>>());
            let b = Polynomial::from_univariate(&r, 0, &ds.iter().map(|&c| f.from_i64(c)).collect::<Vec<_>>());
            let g = &a * &b;
            prop_assume!(!g.is_zero());
            let fac = factor_univariate(&g).unwrap();
            prop_assert_eq!(fac.expand(&g), g.clone());
            for (h, _) in &fac.factors {
                if h.total_degree() > 1 {
                    // irreducible factors have no rational roots of small height
                    for n in -9i64..=9 { for d in 1i64..=9 {
                        let v = f.from_i64(n) / f.from_i64(d);
                        prop_assert!(!h.eval(&[v, f.zero()]).is_zero());
                    }}
                }
            }
        }
    }
}
