//! Buchberger's algorithm with the sugar selection strategy.

use std::collections::BTreeMap;

use smallvec::SmallVec;

use crate::algebra::{Coeff, MPoly, Mono, TermOrder};
use crate::error::{Error, Result};

type Key = SmallVec<[i64; 10]>;

/// Sort key whose lexicographic order agrees with `order` on monomials in
/// `n` variables.
fn order_key(order: TermOrder, m: &Mono, n: usize) -> Key {
    let mut k = Key::new();
    let grevlex = |k: &mut Key, lo: usize, hi: usize| {
        k.push((lo..hi).map(|i| m.exp(i) as i64).sum());
        for i in (lo..hi).rev() {
            k.push(-(m.exp(i) as i64));
        }
    };
    match order {
        TermOrder::Lex => k.extend((0..n).map(|i| m.exp(i) as i64)),
        TermOrder::Grevlex => grevlex(&mut k, 0, n),
        TermOrder::Block(b) => {
            grevlex(&mut k, 0, b.min(n));
            grevlex(&mut k, b.min(n), n);
        }
    }
    k
}

struct Elem<C: Coeff> {
    lm: Mono,
    /// All terms, leading first, leading coefficient one.
    terms: Vec<(Mono, C)>,
    sugar: u32,
}

struct Ctx {
    order: TermOrder,
    n: usize,
}

impl Ctx {
    fn sorted<C: Coeff>(&self, p: &MPoly<C>) -> Vec<(Mono, C)> {
        let mut v: Vec<(Key, Mono, C)> =
            p.terms().map(|(m, c)| (order_key(self.order, m, self.n), m.clone(), c.clone())).collect();
        v.sort_by(|a, b| b.0.cmp(&a.0));
        v.into_iter().map(|(_, m, c)| (m, c)).collect()
    }

    fn make_elem<C: Coeff>(&self, p: &MPoly<C>, sugar: u32) -> Option<Elem<C>> {
        let mut terms = self.sorted(p);
        if terms.is_empty() {
            return None;
        }
        let inv = terms[0].1.inv();
        if !inv.is_one() {
            for t in terms.iter_mut() {
                t.1 = t.1.mul(&inv);
            }
        }
        Some(Elem { lm: terms[0].0.clone(), terms, sugar })
    }

    /// Full reduction of `p` by `basis`.
    fn reduce<C: Coeff>(&self, p: &MPoly<C>, basis: &[&Elem<C>]) -> MPoly<C> {
        let mut work: BTreeMap<Key, (Mono, C)> =
            p.terms().map(|(m, c)| (order_key(self.order, m, self.n), (m.clone(), c.clone()))).collect();
        let mut rem = MPoly::zero();
        while let Some((_, (m, c))) = work.pop_last() {
            match basis.iter().find(|g| g.lm.divides(&m)) {
                Some(g) => {
                    let q = g.lm.quotient_of(&m);
                    for (gm, gc) in g.terms.iter().skip(1) {
                        let tm = gm.mul(&q);
                        let delta = c.mul(gc);
                        let key = order_key(self.order, &tm, self.n);
                        match work.entry(key) {
                            std::collections::btree_map::Entry::Occupied(mut e) => {
                                let v = e.get().1.sub(&delta);
                                if v.is_zero() {
                                    e.remove();
                                } else {
                                    e.get_mut().1 = v;
                                }
                            }
                            std::collections::btree_map::Entry::Vacant(e) => {
                                e.insert((tm, delta.neg()));
                            }
                        }
                    }
                }
                None => rem.add_term(m, c),
            }
        }
        rem
    }

    fn spoly<C: Coeff>(&self, a: &Elem<C>, b: &Elem<C>) -> MPoly<C> {
        let l = a.lm.lcm(&b.lm);
        let qa = a.lm.quotient_of(&l);
        let qb = b.lm.quotient_of(&l);
        let mut out = MPoly::zero();
        for (m, c) in a.terms.iter().skip(1) {
            out.add_term(m.mul(&qa), c.clone());
        }
        for (m, c) in b.terms.iter().skip(1) {
            out.add_term(m.mul(&qb), c.neg());
        }
        out
    }
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct Pair {
    sugar: u32,
    lcm_key: Key,
    i: usize,
    j: usize,
}

/// Reduced Gröbner basis of `gens` in `n` variables, sorted by increasing
/// leading monomial. `budget` bounds the number of S-pair reductions.
pub fn groebner<C: Coeff>(gens: &[MPoly<C>], order: TermOrder, n: usize, budget: usize) -> Result<Vec<MPoly<C>>> {
    let ctx = Ctx { order, n };
    let mut basis: Vec<Elem<C>> = Vec::new();
    let mut pairs: std::collections::BTreeSet<Pair> = Default::default();

    let mut inputs: Vec<&MPoly<C>> = gens.iter().filter(|g| !g.is_zero()).collect();
    if inputs.iter().any(|g| g.is_constant()) {
        return Ok(vec![MPoly::one()]);
    }
    inputs.sort_by_key(|g| g.degree());
    for g in inputs {
        let refs: Vec<&Elem<C>> = basis.iter().collect();
        let r = ctx.reduce(g, &refs);
        if let Some(e) = ctx.make_elem(&r, g.degree()) {
            if e.lm.is_one() {
                return Ok(vec![MPoly::one()]);
            }
            add_elem(&ctx, &mut basis, &mut pairs, e);
        }
    }

    let mut done = 0usize;
    while let Some(p) = pairs.pop_first() {
        done += 1;
        if done > budget {
            return Err(Error::ResourceLimit { budget });
        }
        let s = ctx.spoly(&basis[p.i], &basis[p.j]);
        let refs: Vec<&Elem<C>> = basis.iter().collect();
        let r = ctx.reduce(&s, &refs);
        if let Some(e) = ctx.make_elem(&r, p.sugar) {
            if e.lm.is_one() {
                return Ok(vec![MPoly::one()]);
            }
            add_elem(&ctx, &mut basis, &mut pairs, e);
        }
    }

    // minimal basis, then inter-reduction
    let keep: Vec<usize> = (0..basis.len())
        .filter(|&i| {
            !(0..basis.len()).any(|j| {
                j != i
                    && basis[j].lm.divides(&basis[i].lm)
                    && (basis[j].lm != basis[i].lm || j < i)
            })
        })
        .collect();
    let minimal: Vec<&Elem<C>> = keep.iter().map(|&i| &basis[i]).collect();
    let mut out: Vec<(Key, MPoly<C>)> = Vec::with_capacity(minimal.len());
    for (idx, e) in minimal.iter().enumerate() {
        let others: Vec<&Elem<C>> = minimal.iter().enumerate().filter(|(j, _)| *j != idx).map(|(_, e)| *e).collect();
        let tail: MPoly<C> = MPoly::from_terms(e.terms.iter().skip(1).cloned());
        let mut r = ctx.reduce(&tail, &others);
        r.add_term(e.lm.clone(), C::one());
        out.push((order_key(order, &e.lm, n), r));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out.into_iter().map(|(_, p)| p).collect())
}

fn add_elem<C: Coeff>(
    ctx: &Ctx,
    basis: &mut Vec<Elem<C>>,
    pairs: &mut std::collections::BTreeSet<Pair>,
    e: Elem<C>,
) {
    let new = basis.len();
    // Gebauer-Moeller style pruning: drop old pairs whose lcm is a proper
    // multiple of the new leading monomial on both sides.
    let doomed: Vec<Pair> = pairs
        .iter()
        .filter(|p| {
            let l = basis[p.i].lm.lcm(&basis[p.j].lm);
            e.lm.divides(&l)
                && basis[p.i].lm.lcm(&e.lm) != l
                && basis[p.j].lm.lcm(&e.lm) != l
        })
        .map(|p| Pair { sugar: p.sugar, lcm_key: p.lcm_key.clone(), i: p.i, j: p.j })
        .collect();
    for p in doomed {
        pairs.remove(&p);
    }
    let mut candidates: Vec<(Mono, usize, u32)> = Vec::new();
    for (i, b) in basis.iter().enumerate() {
        let l = b.lm.lcm(&e.lm);
        let sugar = (b.sugar + l.degree() - b.lm.degree()).max(e.sugar + l.degree() - e.lm.degree());
        candidates.push((l, i, sugar));
    }
    // chain criterion among the new pairs: keep one pair per lcm, and skip
    // lcms strictly divisible by another candidate lcm
    let mut kept: Vec<(Mono, usize, u32)> = Vec::new();
    for (idx, c) in candidates.iter().enumerate() {
        let dominated = candidates.iter().enumerate().any(|(j, d)| {
            j != idx && d.0.divides(&c.0) && (d.0 != c.0 || j < idx)
        });
        if !dominated {
            kept.push(c.clone());
        }
    }
    for (l, i, sugar) in kept {
        if basis[i].lm.coprime(&e.lm) {
            continue;
        }
        pairs.insert(Pair { sugar, lcm_key: order_key(ctx.order, &l, ctx.n), i, j: new });
    }
    basis.push(e);
}

/// Remainder of `p` modulo a reduced basis `gb` (as returned by
/// [`groebner`]).
pub fn normal_form<C: Coeff>(p: &MPoly<C>, gb: &[MPoly<C>], order: TermOrder, n: usize) -> MPoly<C> {
    let ctx = Ctx { order, n };
    let elems: Vec<Elem<C>> = gb.iter().filter_map(|g| ctx.make_elem(g, 0)).collect();
    let refs: Vec<&Elem<C>> = elems.iter().collect();
    ctx.reduce(p, &refs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = MPoly<BigRational>;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn monomial_ideal_is_its_own_basis() {
        let x = Q::var(0);
        let y = Q::var(1);
        let gb = groebner(&[x.pow(2), &x * &y], TermOrder::Grevlex, 2, 100).unwrap();
        assert_eq!(gb, vec![&x * &y, x.pow(2)]);
    }

    #[test]
    fn duplicate_generators_collapse() {
        let x = Q::var(0);
        let g = &x - &Q::one();
        assert_eq!(groebner(&[g.clone(), g.clone()], TermOrder::Grevlex, 1, 10).unwrap(), vec![g]);
    }

    #[test]
    fn unit_ideal() {
        let x = Q::var(0);
        let gb = groebner(&[&x - &Q::one(), x.clone()], TermOrder::Lex, 1, 10).unwrap();
        assert_eq!(gb, vec![Q::one()]);
    }

    #[test]
    fn long_division_remainder() {
        let x = Q::var(0);
        let g = &x.pow(2) - &Q::constant(q(2));
        let r = normal_form(&x.pow(3), &[g], TermOrder::Grevlex, 1);
        assert_eq!(r, x.scale(&q(2)));
    }

    #[test]
    fn twisted_cubic_lex() {
        // <y - x^2, z - x^3> in lex z > y > x with variables (z, y, x)
        let z = Q::var(0);
        let y = Q::var(1);
        let x = Q::var(2);
        let gb = groebner(&[&y - &x.pow(2), &z - &x.pow(3)], TermOrder::Lex, 3, 100).unwrap();
        assert_eq!(gb, vec![&y - &x.pow(2), &z - &x.pow(3)]);
        let gb = groebner(&[&y - &x.pow(2), &z - &x.pow(3)], TermOrder::Grevlex, 3, 100).unwrap();
        // every S-polynomial reduces to zero
        for a in &gb {
            for b in &gb {
                let ctx = Ctx { order: TermOrder::Grevlex, n: 3 };
                let (ea, eb) = (ctx.make_elem(a, 0).unwrap(), ctx.make_elem(b, 0).unwrap());
                let s = ctx.spoly(&ea, &eb);
                assert!(normal_form(&s, &gb, TermOrder::Grevlex, 3).is_zero());
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let x = Q::var(0);
        let y = Q::var(1);
        let z = Q::var(2);
        let gens = [&(&x * &y) - &z, &(&y * &z) - &x, &(&z * &x) - &y.pow(3)];
        assert!(matches!(groebner(&gens, TermOrder::Grevlex, 3, 1), Err(Error::ResourceLimit { .. })));
    }
}
