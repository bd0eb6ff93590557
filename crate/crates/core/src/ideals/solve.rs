//! Points with coordinates in `k` on zero-dimensional ideals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Ideal;
use crate::algebra::{Coeff, MPoly, TermOrder};
use crate::config::Config;
use crate::error::Result;
use crate::field::FieldElem;

/// Outcome of a rational-point search.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalPoints {
    /// Points in the ideal's variable order, sorted.
    pub points: Vec<Vec<FieldElem>>,
    /// False if some branch had a free coordinate or a univariate factor
    /// whose roots in `k` could not be decided.
    pub complete: bool,
}

pub(super) fn rational_points(ideal: &Ideal, cfg: &Config) -> Result<RationalPoints> {
    let n = ideal.vars().len();
    let gb = ideal.groebner(TermOrder::Lex, cfg)?;
    if gb.iter().any(|g| g.is_constant()) {
        return Ok(RationalPoints { points: Vec::new(), complete: true });
    }
    let bodies: Vec<MPoly<FieldElem>> = gb.iter().map(|g| g.body().clone()).collect();
    let mut out = RationalPoints { points: Vec::new(), complete: true };
    let mut partial: Vec<Option<FieldElem>> = vec![None; n];
    descend(&bodies, n, n, &mut partial, &mut out);
    out.points.sort_by(|a, b| format!("{a:?}").cmp(&format!("{b:?}")));
    Ok(out)
}

fn descend(
    gb: &[MPoly<FieldElem>],
    n: usize,
    level: usize,
    partial: &mut Vec<Option<FieldElem>>,
    out: &mut RationalPoints,
) {
    if level == 0 {
        out.points.push(partial.iter().map(|v| v.clone().expect("assigned")).collect());
        return;
    }
    let i = level - 1;
    // generators living in k[x_i, ..., x_{n-1}] that involve x_i
    let mut uni: Vec<Vec<FieldElem>> = Vec::new();
    for g in gb {
        if !g.contains_var(i) || (0..i).any(|j| g.contains_var(j)) {
            continue;
        }
        let images: Vec<Option<MPoly<FieldElem>>> = (0..n)
            .map(|j| if j > i { partial[j].clone().map(MPoly::constant) } else { None })
            .collect();
        let s = g.substitute(&images);
        if s.is_zero() {
            continue;
        }
        uni.push(s.to_univariate(i).iter().map(|c| c.constant_value().unwrap_or_else(FieldElem::zero)).collect());
    }
    if uni.is_empty() {
        out.complete = false;
        return;
    }
    let mut g = uni[0].clone();
    for u in &uni[1..] {
        g = poly_gcd(&g, u);
    }
    let (roots, complete) = univariate_roots(&g);
    if !complete {
        out.complete = false;
    }
    for r in roots {
        partial[i] = Some(r);
        descend(gb, n, i, partial, out);
    }
    partial[i] = None;
}

fn trim(mut a: Vec<FieldElem>) -> Vec<FieldElem> {
    while a.len() > 1 && a.last().map_or(false, |c| c.is_zero()) {
        a.pop();
    }
    a
}

fn poly_gcd(a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !(b.len() == 1 && b[0].is_zero()) && !b.is_empty() {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

fn poly_rem(a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = b[db].inv();
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let dr = r.len() - 1;
        let f = r[dr].mul(&lead_inv);
        for j in 0..=db {
            r[dr - db + j] = r[dr - db + j].sub(&f.mul(&b[j]));
        }
        r.pop();
        r = trim(r);
        if r.is_empty() {
            r.push(FieldElem::zero());
        }
    }
    r
}

const DIVISOR_CAP: u64 = 1_000_000_000_000;

/// Distinct roots in `k` of the univariate polynomial with dense
/// coefficients `c` (lowest degree first). The flag is false when
/// rational-root search was not possible.
pub fn univariate_roots(c: &[FieldElem]) -> (Vec<FieldElem>, bool) {
    let mut c = trim(c.to_vec());
    if c.len() == 1 {
        return (Vec::new(), !c[0].is_zero());
    }
    let mut roots = Vec::new();
    if c[0].is_zero() {
        roots.push(FieldElem::zero());
        while c.len() > 1 && c[0].is_zero() {
            c.remove(0);
        }
    }
    match c.len() {
        1 => return (roots, true),
        2 => {
            roots.push(c[0].neg().div(&c[1]));
            return (roots, true);
        }
        _ => {}
    }
    let lead = c[c.len() - 1].clone();
    let monic: Vec<FieldElem> = c.iter().map(|x| x.div(&lead)).collect();
    let Some(qs) = monic.iter().map(|x| x.to_rational()).collect::<Option<Vec<BigRational>>>() else {
        return (roots, false);
    };
    let den_lcm = qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = qs.iter().map(|q| (q * BigRational::from_integer(den_lcm.clone())).to_integer()).collect();
    let (a0, ad) = (ints[0].abs(), ints[ints.len() - 1].abs());
    let (Some(a0u), Some(adu)) = (a0.to_u64(), ad.to_u64()) else {
        return (roots, false);
    };
    if a0u > DIVISOR_CAP || adu > DIVISOR_CAP {
        return (roots, false);
    }
    let mut found: Vec<BigRational> = Vec::new();
    for p in divisors(a0u) {
        for q in divisors(adu) {
            for s in [1i64, -1] {
                let r = BigRational::new(BigInt::from(p) * s, BigInt::from(q));
                if found.contains(&r) {
                    continue;
                }
                let v = qs.iter().rev().fold(<BigRational as Zero>::zero(), |acc, x| acc * &r + x);
                if Zero::is_zero(&v) {
                    found.push(r);
                }
            }
        }
    }
    found.sort();
    roots.extend(found.into_iter().map(FieldElem::from_rational));
    (roots, true)
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n % i == 0 {
            small.push(i);
            if i * i != n {
                large.push(n / i);
            }
        }
        i += 1;
    }
    large.reverse();
    small.extend(large);
    small
}
