//! Multivariate gcd over a field by recursive primitive remainder sequences.

use super::{Coeff, MPoly};

pub(super) fn gcd<C: Coeff>(a: &MPoly<C>, b: &MPoly<C>) -> MPoly<C> {
    if a.is_zero() {
        return b.monic_lex();
    }
    if b.is_zero() {
        return a.monic_lex();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one();
    }
    if a == b {
        return a.monic_lex();
    }
    let v = a.max_var().max(b.max_var()).expect("non-constant polynomial has a variable");
    let (in_a, in_b) = (a.contains_var(v), b.contains_var(v));
    if !in_a {
        return gcd(a, &content(b, v));
    }
    if !in_b {
        return gcd(&content(a, v), b);
    }
    let (ca, pa) = split_content(a, v);
    let (cb, pb) = split_content(b, v);
    let c = gcd(&ca, &cb);
    let g = prs(pa.to_univariate(v), pb.to_univariate(v), v);
    (&c * &g).monic_lex()
}

fn content<C: Coeff>(p: &MPoly<C>, v: usize) -> MPoly<C> {
    let mut acc = MPoly::zero();
    for c in p.to_univariate(v).iter().rev() {
        if c.is_zero() {
            continue;
        }
        acc = gcd(&acc, c);
        if acc.is_constant() {
            return MPoly::one();
        }
    }
    acc
}

fn split_content<C: Coeff>(p: &MPoly<C>, v: usize) -> (MPoly<C>, MPoly<C>) {
    let c = content(p, v);
    if c.is_one() {
        (c, p.clone())
    } else {
        let pp = p.div_exact(&c).expect("content divides polynomial");
        (c, pp)
    }
}

fn trim<C: Coeff>(mut u: Vec<MPoly<C>>) -> Vec<MPoly<C>> {
    while u.len() > 1 && u.last().map_or(false, |c| c.is_zero()) {
        u.pop();
    }
    u
}

fn prem<C: Coeff>(p: &[MPoly<C>], q: &[MPoly<C>]) -> Vec<MPoly<C>> {
    let dq = q.len() - 1;
    let lc = &q[dq];
    let mut r: Vec<MPoly<C>> = p.to_vec();
    while r.len() > dq && !(r.len() == 1 && r[0].is_zero()) {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - dq;
        let mut next: Vec<MPoly<C>> = r.iter().map(|c| lc * c).collect();
        for (i, qc) in q.iter().enumerate() {
            let t = &lr * qc;
            next[i + shift] = &next[i + shift] - &t;
        }
        next.pop();
        r = trim(next);
        if r.iter().all(|c| c.is_zero()) {
            return vec![MPoly::zero()];
        }
    }
    r
}

fn primitive_univariate<C: Coeff>(u: Vec<MPoly<C>>) -> Vec<MPoly<C>> {
    let mut cont = MPoly::zero();
    for c in u.iter().rev() {
        if !c.is_zero() {
            cont = gcd(&cont, c);
            if cont.is_constant() {
                break;
            }
        }
    }
    let mut out: Vec<MPoly<C>> = if cont.is_constant() {
        u
    } else {
        u.iter().map(|c| c.div_exact(&cont).expect("content divides coefficient")).collect()
    };
    // keep coefficient size in check: lex-leading coefficient of the top
    // coefficient becomes one
    let inv = out.last().and_then(|top| top.terms().next_back()).map(|(_, c)| c.inv());
    if let Some(inv) = inv {
        if !inv.is_one() {
            out = out.iter().map(|p| p.scale(&inv)).collect();
        }
    }
    out
}

fn prs<C: Coeff>(a: Vec<MPoly<C>>, b: Vec<MPoly<C>>, v: usize) -> MPoly<C> {
    let (mut p, mut q) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    p = primitive_univariate(p);
    q = primitive_univariate(q);
    loop {
        let r = prem(&p, &q);
        if r.len() == 1 && r[0].is_zero() {
            return MPoly::from_univariate(&q, v);
        }
        if r.len() == 1 {
            return MPoly::one();
        }
        p = q;
        q = primitive_univariate(r);
    }
}
