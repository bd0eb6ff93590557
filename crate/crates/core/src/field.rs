//! The base difference field `k = Q(t_1, ..., t_r)` with an automorphism
//! given by substitutions on the generators.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::algebra::{fmt_rational, Coeff, MPoly, Mono, TermOrder};
use crate::error::FieldError;

/// Polynomials in the field generators with rational coefficients.
pub type QPoly = MPoly<BigRational>;

/// Element of `Q(t_1, ..., t_r)` stored as a reduced fraction whose
/// denominator has leading coefficient one under grevlex.
///
/// Generators are positional. An element of a field with `r` generators is
/// also an element of any field extending it by further generators.
#[derive(Clone, PartialEq)]
pub struct FieldElem {
    num: QPoly,
    den: QPoly,
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(&[]))
    }
}

impl FieldElem {
    pub fn from_rational(q: BigRational) -> Self {
        FieldElem { num: QPoly::constant(q), den: QPoly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(n.into(), d.into()))
    }

    /// The `i`-th generator `t_i`.
    pub fn generator(i: usize) -> Self {
        FieldElem { num: QPoly::var(i), den: QPoly::one() }
    }

    pub fn from_poly(p: QPoly) -> Self {
        FieldElem { num: p, den: QPoly::one() }
    }

    /// Reduces `num / den` to canonical form.
    pub fn from_fraction(num: QPoly, den: QPoly) -> Result<Self, FieldError> {
        if den.is_zero() {
            return Err(FieldError::ZeroDenominator);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: QPoly, den: QPoly) -> Self {
        if num.is_zero() {
            return FieldElem { num, den: QPoly::one() };
        }
        if let Some(c) = den.constant_value() {
            return FieldElem { num: num.scale(&c.recip()), den: QPoly::one() };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let lc = den.leading(TermOrder::Grevlex).map(|(_, c)| c.clone()).expect("nonzero");
        if One::is_one(&lc) {
            FieldElem { num, den }
        } else {
            let inv = lc.recip();
            FieldElem { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn numer(&self) -> &QPoly {
        &self.num
    }

    pub fn denom(&self) -> &QPoly {
        &self.den
    }

    pub fn is_rational(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(self.num.constant_term())
        } else {
            None
        }
    }

    /// Largest generator index actually used, plus one.
    pub fn arity(&self) -> usize {
        self.num.arity().max(self.den.arity())
    }

    pub fn uses_generator(&self, i: usize) -> bool {
        self.num.contains_var(i) || self.den.contains_var(i)
    }

    /// Total degree of numerator and denominator (the larger one).
    pub fn height(&self) -> u32 {
        self.num.degree().max(self.den.degree())
    }

    /// Substitutes generator `i` by `images[i]` for `i < images.len()`;
    /// later generators are kept.
    pub fn substitute(&self, images: &[FieldElem]) -> FieldElem {
        if images.is_empty() || self.is_rational() {
            return self.clone();
        }
        let n = self.arity().max(images.len());
        let vals: Vec<FieldElem> =
            (0..n).map(|i| if i < images.len() { images[i].clone() } else { FieldElem::generator(i) }).collect();
        let num = self.num.map_coeffs(|c| FieldElem::from_rational(c.clone())).eval(&vals);
        let den = self.den.map_coeffs(|c| FieldElem::from_rational(c.clone())).eval(&vals);
        num.div(&den)
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> DisplayElem<'a> {
        DisplayElem { e: self, names }
    }

    /// True when the printed form needs parentheses inside a product.
    pub fn is_compound(&self) -> bool {
        !self.den.is_one() || self.num.len() > 1
    }
}

impl Coeff for FieldElem {
    fn zero() -> Self {
        FieldElem { num: QPoly::zero(), den: QPoly::one() }
    }
    fn one() -> Self {
        FieldElem { num: QPoly::one(), den: QPoly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
    fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            if self.den.is_one() {
                return FieldElem { num: &self.num + &other.num, den: QPoly::one() };
            }
            return Self::reduce(&self.num + &other.num, self.den.clone());
        }
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        Self::reduce(num, &self.den * &other.den)
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return FieldElem { num: &self.num * &other.num, den: QPoly::one() };
        }
        if let Some(c) = self.num.constant_value().filter(|_| self.den.is_one()) {
            return FieldElem { num: other.num.scale(&c), den: other.den.clone() };
        }
        if let Some(c) = other.num.constant_value().filter(|_| other.den.is_one()) {
            return FieldElem { num: self.num.scale(&c), den: self.den.clone() };
        }
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let a = self.num.div_exact(&g1).unwrap();
        let d = other.den.div_exact(&g1).unwrap();
        let c = other.num.div_exact(&g2).unwrap();
        let b = self.den.div_exact(&g2).unwrap();
        Self::reduce(&a * &c, &b * &d)
    }
    fn neg(&self) -> Self {
        FieldElem { num: -&self.num, den: self.den.clone() }
    }
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero field element");
        Self::reduce(self.den.clone(), self.num.clone())
    }
    fn from_i64(n: i64) -> Self {
        FieldElem::from_int(n)
    }
    fn as_rational(&self) -> Option<BigRational> {
        self.to_rational()
    }
}

pub(crate) fn generator_name(names: &[String], i: usize) -> String {
    names.get(i).cloned().unwrap_or_else(|| format!("g{i}"))
}

/// Formats a polynomial with rational coefficients, terms in decreasing
/// grevlex order.
pub(crate) fn format_qpoly(p: &QPoly, names: &[String]) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.sorted_terms(TermOrder::Grevlex).iter().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = format_mono(m, |i| generator_name(names, i));
        if mono.is_empty() {
            out.push_str(&fmt_rational(&abs));
        } else if One::is_one(&abs) {
            out.push_str(&mono);
        } else {
            out.push_str(&fmt_rational(&abs));
            out.push('*');
            out.push_str(&mono);
        }
    }
    out
}

pub(crate) fn format_mono<F: Fn(usize) -> String>(m: &Mono, name: F) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exps().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(name(i)),
            _ => parts.push(format!("{}^{}", name(i), e)),
        }
    }
    parts.join("*")
}

pub struct DisplayElem<'a> {
    e: &'a FieldElem,
    names: &'a [String],
}

impl fmt::Display for DisplayElem<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = format_qpoly(&self.e.num, self.names);
        if self.e.den.is_one() {
            return write!(f, "{num}");
        }
        let den = format_qpoly(&self.e.den, self.names);
        let num = if self.e.num.len() > 1 { format!("({num})") } else { num };
        let den = if self.e.den.len() > 1 || !self.e.den.terms().all(|(_, c)| One::is_one(c)) {
            format!("({den})")
        } else {
            den
        };
        write!(f, "{num}/{den}")
    }
}

/// A purely transcendental difference field `Q(t_1..t_r)` whose
/// automorphism is given on generators together with its inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferenceField {
    names: Vec<String>,
    sigma: Vec<FieldElem>,
    sigma_inv: Vec<FieldElem>,
}

impl DifferenceField {
    /// The prime field `Q` with the identity automorphism.
    pub fn rationals() -> Self {
        DifferenceField { names: Vec::new(), sigma: Vec::new(), sigma_inv: Vec::new() }
    }

    /// Builds the field and checks `sigma ∘ sigma_inv = sigma_inv ∘ sigma = id`
    /// on every generator.
    pub fn new(names: Vec<String>, sigma: Vec<FieldElem>, sigma_inv: Vec<FieldElem>) -> Result<Self, FieldError> {
        let r = names.len();
        if sigma.len() != r || sigma_inv.len() != r {
            return Err(FieldError::Arity { expected: r, sigma: sigma.len(), inverse: sigma_inv.len() });
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(FieldError::DuplicateGenerator(n.clone()));
            }
        }
        for img in sigma.iter().chain(sigma_inv.iter()) {
            if img.arity() > r {
                return Err(FieldError::ForeignGenerator);
            }
        }
        let field = DifferenceField { names, sigma, sigma_inv };
        for i in 0..r {
            let t = FieldElem::generator(i);
            let there_and_back = field.sigma_apply(&field.sigma_apply(&t, -1), 1);
            let back_and_there = field.sigma_apply(&field.sigma_apply(&t, 1), -1);
            if there_and_back != t || back_and_there != t {
                return Err(FieldError::NotInverse(field.names[i].clone()));
            }
        }
        Ok(field)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn sigma_images(&self) -> &[FieldElem] {
        &self.sigma
    }

    pub fn sigma_inverse_images(&self) -> &[FieldElem] {
        &self.sigma_inv
    }

    /// True when σ is the identity on `k` (the autonomous case).
    pub fn is_autonomous(&self) -> bool {
        self.sigma.iter().enumerate().all(|(i, s)| *s == FieldElem::generator(i))
    }

    /// `σ^power(e)`. Generators past this field's rank are fixed, which is
    /// how fresh parameters adjoined to `k` behave.
    pub fn sigma_apply(&self, e: &FieldElem, power: i64) -> FieldElem {
        if power == 0 || self.names.is_empty() || e.is_rational() {
            return e.clone();
        }
        let images = if power > 0 { &self.sigma } else { &self.sigma_inv };
        let mut out = e.clone();
        for _ in 0..power.unsigned_abs() {
            out = out.substitute(images);
        }
        out
    }

    pub fn is_fixed(&self, e: &FieldElem) -> bool {
        self.sigma_apply(e, 1) == *e
    }

    /// Adjoins fresh generators on which σ acts trivially.
    pub fn extended(&self, extra: &[String]) -> DifferenceField {
        let mut names = self.names.clone();
        names.extend(extra.iter().cloned());
        DifferenceField { names, sigma: self.sigma.clone(), sigma_inv: self.sigma_inv.clone() }
    }

    pub fn fmt_elem(&self, e: &FieldElem) -> String {
        e.display(&self.names).to_string()
    }
}
