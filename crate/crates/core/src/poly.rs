//! Named-variable polynomials and rational functions over `k`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::algebra::{Coeff, MPoly, Mono, TermOrder};
use crate::error::{Error, Result};
use crate::field::{format_mono, DifferenceField, FieldElem, QPoly};

/// Ordered list of variable names shared between polynomials.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vars(Arc<[String]>);

impl fmt::Debug for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl Vars {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        Vars(names.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>().into())
    }

    pub fn empty() -> Self {
        Vars(Vec::<String>::new().into())
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    /// `self` followed by the names of `other` not already present.
    pub fn union(&self, other: &Vars) -> Vars {
        if self == other {
            return self.clone();
        }
        let mut names: Vec<String> = self.0.to_vec();
        for n in other.0.iter() {
            if !names.contains(n) {
                names.push(n.clone());
            }
        }
        Vars(names.into())
    }

    /// Concatenation; fails on repeated names.
    pub fn concat(&self, other: &Vars) -> Result<Vars> {
        for n in other.0.iter() {
            if self.contains(n) {
                return Err(Error::VariableClash(format!("`{n}` appears on both sides")));
            }
        }
        Ok(self.union(other))
    }

    pub fn without(&self, drop: &[String]) -> Vars {
        Vars(self.0.iter().filter(|n| !drop.contains(n)).cloned().collect::<Vec<_>>().into())
    }
}

/// Polynomial over `k` in named geometric variables.
#[derive(Clone, PartialEq)]
pub struct Poly {
    vars: Vars,
    body: MPoly<FieldElem>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(&[]))
    }
}

impl Poly {
    pub fn zero(vars: &Vars) -> Self {
        Poly { vars: vars.clone(), body: MPoly::zero() }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, FieldElem::one())
    }

    pub fn constant(vars: &Vars, c: FieldElem) -> Self {
        Poly { vars: vars.clone(), body: MPoly::constant(c) }
    }

    pub fn var(vars: &Vars, name: &str) -> Result<Self> {
        let i = vars.index_of(name).ok_or_else(|| Error::UnknownVariable(name.into()))?;
        Ok(Poly { vars: vars.clone(), body: MPoly::var(i) })
    }

    pub fn from_body(vars: &Vars, body: MPoly<FieldElem>) -> Self {
        debug_assert!(body.arity() <= vars.len());
        Poly { vars: vars.clone(), body }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn body(&self) -> &MPoly<FieldElem> {
        &self.body
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.body.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.body.is_constant()
    }

    pub fn constant_value(&self) -> Option<FieldElem> {
        self.body.constant_value()
    }

    pub fn degree(&self) -> u32 {
        self.body.degree()
    }

    pub fn len(&self) -> usize {
        self.body.len()
    }

    pub fn is_empty(&self) -> bool {
        self.body.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &FieldElem)> {
        self.body.terms()
    }

    pub fn uses(&self, name: &str) -> bool {
        self.vars.index_of(name).map_or(false, |i| self.body.contains_var(i))
    }

    /// Names of the variables that actually occur.
    pub fn support_vars(&self) -> Vec<String> {
        self.vars.names().iter().enumerate().filter(|(i, _)| self.body.contains_var(*i)).map(|(_, n)| n.clone()).collect()
    }

    /// Re-expresses the polynomial over `target`, which must contain every
    /// variable that occurs.
    pub fn embed(&self, target: &Vars) -> Result<Poly> {
        if &self.vars == target {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, n) in self.vars.names().iter().enumerate() {
            match target.index_of(n) {
                Some(j) => map.push(j),
                None if !self.body.contains_var(i) => map.push(usize::MAX),
                None => return Err(Error::UnknownVariable(n.clone())),
            }
        }
        let mut body = MPoly::zero();
        for (m, c) in self.body.terms() {
            body.add_term(m.remap(&map), c.clone());
        }
        Ok(Poly { vars: target.clone(), body })
    }

    fn aligned(&self, other: &Poly) -> (Poly, Poly) {
        if self.vars == other.vars {
            return (self.clone(), other.clone());
        }
        let u = self.vars.union(&other.vars);
        (self.embed(&u).expect("union contains"), other.embed(&u).expect("union contains"))
    }

    pub fn add(&self, other: &Poly) -> Poly {
        if self.vars == other.vars {
            return Poly { vars: self.vars.clone(), body: &self.body + &other.body };
        }
        let (a, b) = self.aligned(other);
        Poly { vars: a.vars, body: &a.body + &b.body }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        if self.vars == other.vars {
            return Poly { vars: self.vars.clone(), body: &self.body - &other.body };
        }
        let (a, b) = self.aligned(other);
        Poly { vars: a.vars, body: &a.body - &b.body }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.vars == other.vars {
            return Poly { vars: self.vars.clone(), body: &self.body * &other.body };
        }
        let (a, b) = self.aligned(other);
        Poly { vars: a.vars, body: &a.body * &b.body }
    }

    pub fn neg(&self) -> Poly {
        Poly { vars: self.vars.clone(), body: -&self.body }
    }

    pub fn scale(&self, c: &FieldElem) -> Poly {
        Poly { vars: self.vars.clone(), body: self.body.scale(c) }
    }

    pub fn pow(&self, e: u32) -> Poly {
        Poly { vars: self.vars.clone(), body: self.body.pow(e) }
    }

    pub fn leading(&self, order: TermOrder) -> Option<(&Mono, &FieldElem)> {
        self.body.leading(order)
    }

    /// Scales so the grevlex-leading coefficient is one.
    pub fn monic(&self) -> Poly {
        Poly { vars: self.vars.clone(), body: self.body.monic(TermOrder::Grevlex) }
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (a, b) = self.aligned(other);
        Poly { vars: a.vars.clone(), body: a.body.gcd(&b.body) }
    }

    pub fn div_exact(&self, other: &Poly) -> Option<Poly> {
        let (a, b) = self.aligned(other);
        a.body.div_exact(&b.body).map(|body| Poly { vars: a.vars.clone(), body })
    }

    pub fn derivative(&self, name: &str) -> Poly {
        match self.vars.index_of(name) {
            Some(i) => Poly { vars: self.vars.clone(), body: self.body.derivative(i) },
            None => Poly::zero(&self.vars),
        }
    }

    /// Same polynomial with variables renamed positionally.
    pub fn renamed(&self, vars: &Vars) -> Poly {
        assert_eq!(vars.len(), self.vars.len(), "rename keeps arity");
        Poly { vars: vars.clone(), body: self.body.clone() }
    }

    /// Applies `σ^power` to every coefficient.
    pub fn coeff_transform(&self, field: &DifferenceField, power: i64) -> Poly {
        if power == 0 || field.is_autonomous() {
            return self.clone();
        }
        Poly { vars: self.vars.clone(), body: self.body.map_coeffs(|c| field.sigma_apply(c, power)) }
    }

    /// Substitutes each variable of `self` (in order) by a polynomial; all
    /// images share one variable list.
    pub fn compose(&self, images: &[Poly]) -> Result<Poly> {
        if images.len() != self.vars.len() {
            return Err(Error::Shape(format!("{} images for {} variables", images.len(), self.vars.len())));
        }
        let target = images.iter().fold(Vars::empty(), |acc, p| acc.union(&p.vars));
        let imgs: Vec<Option<MPoly<FieldElem>>> =
            images.iter().map(|p| p.embed(&target).map(|q| Some(q.body))).collect::<Result<_>>()?;
        let shifted = self.body.remap(&(target.len()..target.len() + self.vars.len()).collect::<Vec<_>>());
        let mut full = vec![None; target.len()];
        full.extend(imgs);
        let out = shifted.substitute(&full);
        Ok(Poly { vars: target, body: out })
    }

    /// Evaluates at a point of `k^n`.
    pub fn eval(&self, point: &[FieldElem]) -> FieldElem {
        self.body.eval(point)
    }

    /// Substitutes some variables by field elements; the rest stay.
    pub fn specialize(&self, values: &[(String, FieldElem)]) -> Poly {
        let mut images: Vec<Option<MPoly<FieldElem>>> = vec![None; self.vars.len()];
        for (n, v) in values {
            if let Some(i) = self.vars.index_of(n) {
                images[i] = Some(MPoly::constant(v.clone()));
            }
        }
        Poly { vars: self.vars.clone(), body: self.body.substitute(&images) }
    }

    /// Groups terms by their exponents in the variables `outer`, returning
    /// the coefficient polynomials in the remaining variables (kept in the
    /// same variable list).
    pub fn collect_by(&self, outer: &[String]) -> BTreeMap<Mono, Poly> {
        let idx: Vec<usize> = outer.iter().filter_map(|n| self.vars.index_of(n)).collect();
        let mut out: BTreeMap<Mono, MPoly<FieldElem>> = BTreeMap::new();
        for (m, c) in self.body.terms() {
            let mut key = vec![0u32; idx.len()];
            let mut rest = m.clone();
            for (k, &i) in idx.iter().enumerate() {
                key[k] = m.exp(i);
                rest = rest.without(i);
            }
            out.entry(Mono::from_exps(&key)).or_default().add_term(rest, c.clone());
        }
        out.into_iter().map(|(k, b)| (k, Poly { vars: self.vars.clone(), body: b })).collect()
    }

    /// Moves the variables `lift` into the coefficient field as new
    /// generators `base_rank + j`; the result lives over the remaining
    /// variables.
    pub fn lift_to_field(&self, lift: &[String], base_rank: usize) -> Result<Poly> {
        let rest = self.vars.without(lift);
        let rest_idx: Vec<Option<usize>> = self.vars.names().iter().map(|n| rest.index_of(n)).collect();
        let lift_idx: Vec<Option<usize>> =
            self.vars.names().iter().map(|n| lift.iter().position(|l| l == n)).collect();
        let mut body = MPoly::zero();
        for (m, c) in self.body.terms() {
            let mut geo = vec![0u32; rest.len()];
            let mut gen = vec![0u32; base_rank + lift.len()];
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if let Some(j) = rest_idx[i] {
                    geo[j] = e;
                } else if let Some(j) = lift_idx[i] {
                    gen[base_rank + j] = e;
                }
            }
            let factor = FieldElem::from_poly(QPoly::monomial(Mono::from_exps(&gen), Coeff::one()));
            body.add_term(Mono::from_exps(&geo), c.mul(&factor));
        }
        Ok(Poly { vars: rest, body })
    }

    pub fn display<'a>(&'a self, field_names: &'a [String]) -> DisplayPoly<'a> {
        DisplayPoly { p: self, names: field_names }
    }
}

/// Splits a polynomial in generators `0..base_rank+gens.len()` into a
/// polynomial over `k` in the variables `gens`.
fn qpoly_to_poly(q: &QPoly, gens: &Vars, base_rank: usize) -> Poly {
    let mut body = MPoly::zero();
    for (m, c) in q.terms() {
        let base: Vec<u32> = (0..base_rank).map(|i| m.exp(i)).collect();
        let geo: Vec<u32> = (0..gens.len()).map(|j| m.exp(base_rank + j)).collect();
        let coeff = FieldElem::from_poly(QPoly::monomial(Mono::from_exps(&base), c.clone()));
        body.add_term(Mono::from_exps(&geo), coeff);
    }
    Poly { vars: gens.clone(), body }
}

pub struct DisplayPoly<'a> {
    p: &'a Poly,
    names: &'a [String],
}

fn fmt_terms(body: &MPoly<FieldElem>, vars: &Vars, names: &[String]) -> String {
    if body.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in body.sorted_terms(TermOrder::Grevlex).iter().enumerate() {
        let mono = format_mono(m, |i| vars.names().get(i).cloned().unwrap_or_else(|| format!("x{i}")));
        let (neg, cstr) = match c.to_rational() {
            Some(q) => {
                use num_traits::Signed;
                let neg = q.is_negative();
                let abs = q.abs();
                (neg, if mono.is_empty() || !num_traits::One::is_one(&abs) { crate::algebra::fmt_rational(&abs) } else { String::new() })
            }
            None => {
                let s = c.display(names).to_string();
                if c.is_compound() && !mono.is_empty() {
                    (false, format!("({s})"))
                } else if let Some(rest) = s.strip_prefix('-') {
                    (true, rest.to_string())
                } else {
                    (false, s)
                }
            }
        };
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        match (cstr.is_empty(), mono.is_empty()) {
            (true, _) => out.push_str(&mono),
            (false, true) => out.push_str(&cstr),
            (false, false) => {
                out.push_str(&cstr);
                out.push('*');
                out.push_str(&mono);
            }
        }
    }
    out
}

impl fmt::Display for DisplayPoly<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_terms(&self.p.body, &self.p.vars, self.names))
    }
}

/// Reduced fraction of polynomials: `gcd(num, den) = 1` and the
/// grevlex-leading coefficient of `den` is one.
#[derive(Clone, PartialEq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(&[]))
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        let one = Poly::one(&p.vars);
        RatFunc { num: p, den: one }
    }
}

impl RatFunc {
    /// Canonical representative of `num / den`.
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let (num, den) = num.aligned(&den);
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> RatFunc {
        if num.is_zero() {
            let one = Poly::one(&num.vars);
            return RatFunc { num, den: one };
        }
        if let Some(c) = den.constant_value() {
            let inv = c.inv();
            let one = Poly::one(&num.vars);
            return RatFunc { num: num.scale(&inv), den: one };
        }
        let g = Poly { vars: num.vars.clone(), body: num.body.gcd(&den.body) };
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let lc = den.leading(TermOrder::Grevlex).map(|(_, c)| c.clone()).expect("nonzero");
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.inv();
            RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn constant(vars: &Vars, c: FieldElem) -> RatFunc {
        RatFunc::from(Poly::constant(vars, c))
    }

    pub fn var(vars: &Vars, name: &str) -> Result<RatFunc> {
        Poly::var(vars, name).map(RatFunc::from)
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn vars(&self) -> &Vars {
        &self.num.vars
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn constant_value(&self) -> Option<FieldElem> {
        if self.is_constant() {
            self.num.constant_value()
        } else {
            None
        }
    }

    /// Larger of the total degrees of numerator and denominator.
    pub fn height(&self) -> u32 {
        self.num.degree().max(self.den.degree())
    }

    pub fn uses(&self, name: &str) -> bool {
        self.num.uses(name) || self.den.uses(name)
    }

    pub fn embed(&self, target: &Vars) -> Result<RatFunc> {
        Ok(RatFunc { num: self.num.embed(target)?, den: self.den.embed(target)? })
    }

    pub fn renamed(&self, vars: &Vars) -> RatFunc {
        RatFunc { num: self.num.renamed(vars), den: self.den.renamed(vars) }
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.den == other.den {
            return Self::reduce(self.num.add(&other.num), self.den.clone());
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        Self::reduce(num, self.den.mul(&other.den))
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.den.is_one() && other.den.is_one() {
            return Self::reduce(self.num.mul(&other.num), self.den.mul(&other.den));
        }
        Self::reduce(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.num.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i32) -> Result<RatFunc> {
        if e >= 0 {
            Ok(RatFunc { num: self.num.pow(e as u32), den: self.den.pow(e as u32) })
        } else {
            self.inv().map(|r| RatFunc { num: r.num.pow((-e) as u32), den: r.den.pow((-e) as u32) })
        }
    }

    pub fn scale(&self, c: &FieldElem) -> RatFunc {
        if c.is_zero() {
            return RatFunc::from(Poly::zero(self.vars()));
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn coeff_transform(&self, field: &DifferenceField, power: i64) -> RatFunc {
        RatFunc { num: self.num.coeff_transform(field, power), den: self.den.coeff_transform(field, power) }
    }

    /// Substitutes each variable (in order) by a rational function; the
    /// result lives over the union of the images' variables.
    ///
    /// Fails if the substituted denominator vanishes identically.
    pub fn compose(&self, images: &[RatFunc]) -> Result<RatFunc> {
        let nv = self.vars().len();
        if images.len() != nv {
            return Err(Error::Shape(format!("{} images for {} variables", images.len(), nv)));
        }
        let target = images.iter().fold(Vars::empty(), |acc, r| acc.union(r.vars()));
        let imgs: Vec<RatFunc> = images.iter().map(|r| r.embed(&target)).collect::<Result<_>>()?;
        let dn: Vec<u32> = (0..nv).map(|i| self.num.body.degree_in(i)).collect();
        let dd: Vec<u32> = (0..nv).map(|i| self.den.body.degree_in(i)).collect();
        let top: Vec<u32> = dn.iter().zip(dd.iter()).map(|(a, b)| *a.max(b)).collect();
        let n = homogenized_eval(&self.num, &imgs, &top, &target);
        let d = homogenized_eval(&self.den, &imgs, &top, &target);
        if d.is_zero() {
            return Err(Error::CompositionUndefined("denominator vanishes after substitution".into()));
        }
        Ok(Self::reduce(n, d))
    }

    /// Replaces the named variables simultaneously; other variables stay.
    pub fn substitute(&self, map: &[(String, RatFunc)]) -> Result<RatFunc> {
        let images: Vec<RatFunc> = self
            .vars()
            .names()
            .iter()
            .map(|n| match map.iter().find(|(k, _)| k == n) {
                Some((_, r)) => Ok(r.clone()),
                None => RatFunc::var(&Vars::new(&[n.as_str()]), n),
            })
            .collect::<Result<_>>()?;
        if images.is_empty() {
            return Ok(self.clone());
        }
        self.compose(&images)
    }

    /// Value at a point of `k^n`, `None` where the denominator vanishes.
    pub fn eval(&self, point: &[FieldElem]) -> Option<FieldElem> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(point).div(&d))
    }

    pub fn specialize(&self, values: &[(String, FieldElem)]) -> Result<RatFunc> {
        RatFunc::new(self.num.specialize(values), self.den.specialize(values))
    }

    /// See [`Poly::lift_to_field`]. The result is re-reduced over the larger
    /// coefficient field.
    pub fn lift_to_field(&self, lift: &[String], base_rank: usize) -> Result<RatFunc> {
        RatFunc::new(self.num.lift_to_field(lift, base_rank)?, self.den.lift_to_field(lift, base_rank)?)
    }

    /// Inverse of [`RatFunc::lift_to_field`]: generators `base_rank..` become
    /// the variables `gens`, appended after the current variables.
    pub fn lower_from_field(&self, gens: &Vars, base_rank: usize) -> Result<RatFunc> {
        let target = self.vars().concat(gens)?;
        let lower = |p: &Poly| -> Result<RatFunc> {
            let mut acc = RatFunc::from(Poly::zero(&target));
            for (m, c) in p.terms() {
                let mono = RatFunc::from(Poly::from_body(p.vars(), MPoly::monomial(m.clone(), FieldElem::one())))
                    .embed(&target)?;
                let n = qpoly_to_poly(c.numer(), gens, base_rank).embed(&target)?;
                let d = qpoly_to_poly(c.denom(), gens, base_rank).embed(&target)?;
                acc = acc.add(&mono.mul(&RatFunc::new(n, d)?));
            }
            Ok(acc)
        };
        lower(&self.num)?.div(&lower(&self.den)?)
    }

    pub fn display<'a>(&'a self, field_names: &'a [String]) -> DisplayRat<'a> {
        DisplayRat { r: self, names: field_names }
    }
}

/// `p(a_1/b_1, ...)` multiplied by `prod b_i^top_i`, computed without
/// intermediate gcds.
fn homogenized_eval(p: &Poly, imgs: &[RatFunc], top: &[u32], target: &Vars) -> Poly {
    let mut num_pows: Vec<Vec<Poly>> = imgs.iter().map(|r| vec![Poly::one(target), r.num.clone()]).collect();
    let mut den_pows: Vec<Vec<Poly>> = imgs.iter().map(|r| vec![Poly::one(target), r.den.clone()]).collect();
    let get = |cache: &mut Vec<Poly>, e: usize| -> Poly {
        while cache.len() <= e {
            let next = cache[cache.len() - 1].mul(&cache[1]);
            cache.push(next);
        }
        cache[e].clone()
    };
    let mut acc = Poly::zero(target);
    for (m, c) in p.terms() {
        let mut t = Poly::constant(target, c.clone());
        for i in 0..imgs.len() {
            let e = m.exp(i);
            if e > 0 {
                t = t.mul(&get(&mut num_pows[i], e as usize));
            }
            let rest = top[i] - e;
            if rest > 0 && !imgs[i].den.is_one() {
                t = t.mul(&get(&mut den_pows[i], rest as usize));
            }
        }
        acc = acc.add(&t);
    }
    acc
}

pub struct DisplayRat<'a> {
    r: &'a RatFunc,
    names: &'a [String],
}

impl fmt::Display for DisplayRat<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.r.num.display(self.names).to_string();
        if self.r.den.is_one() {
            return write!(f, "{num}");
        }
        let den = self.r.den.display(self.names).to_string();
        let num = if self.r.num.len() > 1 { format!("({num})") } else { num };
        let den = if self.r.den.len() > 1 || self.r.den.terms().any(|(m, c)| !m.is_one() && !c.is_one()) {
            format!("({den})")
        } else {
            den
        };
        write!(f, "{num}/{den}")
    }
}

/// `ratfunc_reduce`: canonical reduced representative of `num / den`.
pub fn ratfunc_reduce(num: Poly, den: Poly) -> Result<RatFunc> {
    RatFunc::new(num, den)
}
