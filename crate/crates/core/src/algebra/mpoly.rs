use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Coeff, Mono, TermOrder};

/// Sparse multivariate polynomial over a coefficient field `C`.
///
/// Variables are positional; naming lives one level up. No zero
/// coefficients are ever stored, so structural equality is polynomial
/// equality.
#[derive(Clone, PartialEq, Debug)]
pub struct MPoly<C: Coeff> {
    terms: BTreeMap<Mono, C>,
}

impl<C: Coeff> Default for MPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> MPoly<C> {
    pub fn zero() -> Self {
        MPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(Mono::one(), c)
    }

    pub fn monomial(m: Mono, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    pub fn var(i: usize) -> Self {
        Self::monomial(Mono::var(i, 1), C::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Mono, C)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Mono, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Mono::one()).map_or(false, |c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&Mono::one()))
    }

    pub fn constant_value(&self) -> Option<C> {
        if self.terms.is_empty() {
            Some(C::zero())
        } else if self.is_constant() {
            self.terms.get(&Mono::one()).cloned()
        } else {
            None
        }
    }

    pub fn constant_term(&self) -> C {
        self.terms.get(&Mono::one()).cloned().unwrap_or_else(C::zero)
    }

    pub fn coeff(&self, m: &Mono) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &C)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Mono, C)> {
        self.terms.into_iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(i)).max().unwrap_or(0)
    }

    pub fn contains_var(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.exp(i) > 0)
    }

    /// One past the largest variable index in use.
    pub fn arity(&self) -> usize {
        self.terms.keys().map(|m| m.len()).max().unwrap_or(0)
    }

    pub fn max_var(&self) -> Option<usize> {
        self.terms.keys().filter_map(|m| m.max_var()).max()
    }

    pub fn leading(&self, order: TermOrder) -> Option<(&Mono, &C)> {
        let mut best: Option<(&Mono, &C)> = None;
        for (m, c) in self.terms.iter() {
            match best {
                None => best = Some((m, c)),
                Some((bm, _)) => {
                    if order.cmp(m, bm) == std::cmp::Ordering::Greater {
                        best = Some((m, c));
                    }
                }
            }
        }
        best
    }

    /// Terms sorted in decreasing order under `order`.
    pub fn sorted_terms(&self, order: TermOrder) -> Vec<(Mono, C)> {
        let mut v: Vec<(Mono, C)> = self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        v.sort_by(|a, b| order.cmp(&b.0, &a.0));
        v
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MPoly { terms: self.terms.iter().map(|(m, a)| (m.clone(), a.mul(c))).collect() }
    }

    pub fn mul_term(&self, m: &Mono, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MPoly { terms: self.terms.iter().map(|(k, a)| (k.mul(m), a.mul(c))).collect() }
    }

    /// Makes the lexicographically leading coefficient one.
    pub fn monic_lex(&self) -> Self {
        match self.terms.iter().next_back() {
            None => Self::zero(),
            Some((_, c)) => self.scale(&c.inv()),
        }
    }

    pub fn monic(&self, order: TermOrder) -> Self {
        match self.leading(order) {
            None => Self::zero(),
            Some((_, c)) => {
                let inv = c.inv();
                self.scale(&inv)
            }
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn map_coeffs<D: Coeff, F: Fn(&C) -> D>(&self, f: F) -> MPoly<D> {
        let mut out = MPoly::<D>::zero();
        for (m, c) in self.terms.iter() {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Reindexes variable `i` to `map[i]`.
    pub fn remap(&self, map: &[usize]) -> Self {
        let mut out = Self::zero();
        for (m, c) in self.terms.iter() {
            out.add_term(m.remap(map), c.clone());
        }
        out
    }

    /// Substitutes every variable `i < images.len()` by `images[i]` when it is
    /// `Some`; other variables stay in place.
    pub fn substitute(&self, images: &[Option<MPoly<C>>]) -> Self {
        let mut cache: Vec<Vec<MPoly<C>>> = vec![Vec::new(); images.len()];
        let mut out = Self::zero();
        for (m, c) in self.terms.iter() {
            let mut kept: Vec<u32> = Vec::new();
            let mut factor = MPoly::constant(c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match images.get(i).and_then(|x| x.as_ref()) {
                    Some(img) => {
                        let powers = &mut cache[i];
                        if powers.is_empty() {
                            powers.push(Self::one());
                        }
                        while powers.len() <= e as usize {
                            let next = &powers[powers.len() - 1] * img;
                            powers.push(next);
                        }
                        factor = &factor * &powers[e as usize];
                    }
                    None => {
                        if kept.len() <= i {
                            kept.resize(i + 1, 0);
                        }
                        kept[i] = e;
                    }
                }
            }
            let kept = Mono::from_exps(&kept);
            out = &out + &factor.mul_term(&kept, &C::one());
        }
        out
    }

    /// Evaluates all variables; missing values count as zero.
    pub fn eval(&self, values: &[C]) -> C {
        let mut acc = C::zero();
        for (m, c) in self.terms.iter() {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    let v = values.get(i).cloned().unwrap_or_else(C::zero);
                    for _ in 0..e {
                        t = t.mul(&v);
                    }
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in self.terms.iter() {
            let e = m.exp(i);
            if e > 0 {
                let mut exps: Vec<u32> = m.exps().to_vec();
                exps[i] -= 1;
                out.add_term(Mono::from_exps(&exps), c.mul(&C::from_i64(e as i64)));
            }
        }
        out
    }

    /// Coefficients in variable `v`: `result[d]` multiplies `x_v^d`.
    pub fn to_univariate(&self, v: usize) -> Vec<Self> {
        let deg = self.degree_in(v) as usize;
        let mut out = vec![Self::zero(); deg + 1];
        for (m, c) in self.terms.iter() {
            let e = m.exp(v) as usize;
            out[e].add_term(m.without(v), c.clone());
        }
        out
    }

    pub fn from_univariate(coeffs: &[Self], v: usize) -> Self {
        let mut out = Self::zero();
        for (d, c) in coeffs.iter().enumerate() {
            let xm = Mono::var(v, d as u32);
            for (m, a) in c.terms.iter() {
                out.add_term(m.mul(&xm), a.clone());
            }
        }
        out
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.inv()));
        }
        let (dm, dc) = d.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let dinv = dc.inv();
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((rm, rc)) = rem.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            if !dm.divides(&rm) {
                return None;
            }
            let qm = dm.quotient_of(&rm);
            let qc = rc.mul(&dinv);
            rem = &rem - &d.mul_term(&qm, &qc);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    pub fn gcd(&self, other: &Self) -> Self {
        super::gcd::gcd(self, other)
    }
}

impl<'a, C: Coeff> Add for &'a MPoly<C> {
    type Output = MPoly<C>;
    fn add(self, rhs: &'a MPoly<C>) -> MPoly<C> {
        let (big, small) = if self.terms.len() >= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in small.terms.iter() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a, C: Coeff> Sub for &'a MPoly<C> {
    type Output = MPoly<C>;
    fn sub(self, rhs: &'a MPoly<C>) -> MPoly<C> {
        let mut out = self.clone();
        for (m, c) in rhs.terms.iter() {
            out.add_term(m.clone(), c.neg());
        }
        out
    }
}

impl<'a, C: Coeff> Mul for &'a MPoly<C> {
    type Output = MPoly<C>;
    fn mul(self, rhs: &'a MPoly<C>) -> MPoly<C> {
        if self.is_zero() || rhs.is_zero() {
            return MPoly::zero();
        }
        let mut acc: BTreeMap<Mono, C> = BTreeMap::new();
        for (m1, c1) in self.terms.iter() {
            for (m2, c2) in rhs.terms.iter() {
                let m = m1.mul(m2);
                let c = c1.mul(c2);
                match acc.get_mut(&m) {
                    Some(old) => *old = old.add(&c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        MPoly { terms: acc }
    }
}

impl<C: Coeff> Neg for &MPoly<C> {
    type Output = MPoly<C>;
    fn neg(self) -> MPoly<C> {
        MPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }
}
