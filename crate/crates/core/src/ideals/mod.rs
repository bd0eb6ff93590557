//! Ideals of `k[x]` with cached reduced Gröbner bases.

pub mod groebner;
mod solve;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::algebra::{MPoly, TermOrder};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::field::{DifferenceField, FieldElem};
use crate::poly::{Poly, RatFunc, Vars};

pub use solve::{univariate_roots, RationalPoints};

/// Ideal given by generators in a fixed ambient variable list.
pub struct Ideal {
    vars: Vars,
    gens: Vec<Poly>,
    cache: Mutex<HashMap<TermOrder, Arc<Vec<Poly>>>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        let cache = self.cache.lock().expect("ideal cache poisoned").clone();
        Ideal { vars: self.vars.clone(), gens: self.gens.clone(), cache: Mutex::new(cache) }
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal{:?}<{:?}>", self.vars, self.gens)
    }
}

impl Ideal {
    /// Generators are embedded into `vars`; fails on foreign variables.
    pub fn new(vars: &Vars, gens: Vec<Poly>) -> Result<Ideal> {
        let gens = gens.into_iter().filter(|g| !g.is_zero()).map(|g| g.embed(vars)).collect::<Result<Vec<_>>>()?;
        Ok(Ideal { vars: vars.clone(), gens, cache: Mutex::new(HashMap::new()) })
    }

    pub fn zero(vars: &Vars) -> Ideal {
        Ideal { vars: vars.clone(), gens: Vec::new(), cache: Mutex::new(HashMap::new()) }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn generators(&self) -> &[Poly] {
        &self.gens
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    /// Reduced Gröbner basis, cached per order.
    pub fn groebner(&self, order: TermOrder, cfg: &Config) -> Result<Arc<Vec<Poly>>> {
        if let Some(b) = self.cache.lock().expect("ideal cache poisoned").get(&order) {
            return Ok(b.clone());
        }
        let bodies: Vec<MPoly<FieldElem>> = self.gens.iter().map(|g| g.body().clone()).collect();
        let gb = groebner::groebner(&bodies, order, self.vars.len(), cfg.budget)?;
        let gb: Arc<Vec<Poly>> = Arc::new(gb.into_iter().map(|b| Poly::from_body(&self.vars, b)).collect());
        self.cache.lock().expect("ideal cache poisoned").insert(order, gb.clone());
        Ok(gb)
    }

    /// The reduced grevlex basis, the canonical form of the ideal.
    pub fn reduced(&self, cfg: &Config) -> Result<Arc<Vec<Poly>>> {
        self.groebner(TermOrder::Grevlex, cfg)
    }

    pub fn normal_form_in(&self, p: &Poly, order: TermOrder, cfg: &Config) -> Result<Poly> {
        let p = p.embed(&self.vars)?;
        if self.gens.is_empty() {
            return Ok(p);
        }
        let gb = self.groebner(order, cfg)?;
        let bodies: Vec<MPoly<FieldElem>> = gb.iter().map(|g| g.body().clone()).collect();
        Ok(Poly::from_body(&self.vars, groebner::normal_form(p.body(), &bodies, order, self.vars.len())))
    }

    /// Remainder modulo the reduced grevlex basis.
    pub fn normal_form(&self, p: &Poly, cfg: &Config) -> Result<Poly> {
        self.normal_form_in(p, TermOrder::Grevlex, cfg)
    }

    pub fn contains(&self, p: &Poly, cfg: &Config) -> Result<bool> {
        Ok(self.normal_form(p, cfg)?.is_zero())
    }

    pub fn is_unit(&self, cfg: &Config) -> Result<bool> {
        if self.gens.is_empty() {
            return Ok(false);
        }
        Ok(self.reduced(cfg)?.iter().any(|g| g.is_constant()))
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &Ideal, cfg: &Config) -> Result<bool> {
        for g in &self.gens {
            if !other.contains(g, cfg)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality of reduced grevlex bases over a common variable list.
    pub fn equals(&self, other: &Ideal, cfg: &Config) -> Result<bool> {
        let u = self.vars.union(&other.vars);
        let a = self.embed(&u)?;
        let b = other.embed(&u)?;
        Ok(*a.reduced(cfg)? == *b.reduced(cfg)?)
    }

    pub fn embed(&self, target: &Vars) -> Result<Ideal> {
        if &self.vars == target {
            return Ok(self.clone());
        }
        Ideal::new(target, self.gens.clone())
    }

    pub fn renamed(&self, vars: &Vars) -> Ideal {
        Ideal {
            vars: vars.clone(),
            gens: self.gens.iter().map(|g| g.renamed(vars)).collect(),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn with(&self, more: Vec<Poly>) -> Result<Ideal> {
        let mut gens = self.gens.clone();
        gens.extend(more);
        Ideal::new(&self.vars, gens)
    }

    /// `I + J` over the union of the variable lists.
    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        let u = self.vars.union(&other.vars);
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(&u, gens)
    }

    pub fn coeff_transform(&self, field: &DifferenceField, power: i64) -> Ideal {
        if field.is_autonomous() || power == 0 {
            return self.clone();
        }
        Ideal {
            vars: self.vars.clone(),
            gens: self.gens.iter().map(|g| g.coeff_transform(field, power)).collect(),
            cache: Mutex::new(HashMap::new()),
        }
    }

    /// `I ∩ k[remaining]`, computed with a block order that puts the
    /// dropped variables first. The result lives over the remaining
    /// variables in their original order.
    pub fn eliminate(&self, drop: &[String], cfg: &Config) -> Result<Ideal> {
        for d in drop {
            if !self.vars.contains(d) {
                return Err(Error::UnknownVariable(d.clone()));
            }
        }
        let rest = self.vars.without(drop);
        if drop.is_empty() {
            return Ok(self.clone());
        }
        if self.gens.is_empty() {
            return Ok(Ideal::zero(&rest));
        }
        let ordered = Vars::new(drop).concat(&rest)?;
        let reordered = self.embed(&ordered)?;
        let gb = reordered.groebner(TermOrder::Block(drop.len()), cfg)?;
        let kept: Vec<Poly> = gb
            .iter()
            .filter(|g| drop.iter().all(|d| !g.uses(d)))
            .map(|g| g.embed(&rest))
            .collect::<Result<_>>()?;
        Ideal::new(&rest, kept)
    }

    /// `I : d^∞` via a Rabinowitsch variable.
    pub fn saturate(&self, d: &Poly, cfg: &Config) -> Result<Ideal> {
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if d.is_constant() {
            return Ok(self.clone());
        }
        let s = fresh_name(&self.vars, "_s");
        let ext = Vars::new(&[s.clone()]).concat(&self.vars)?;
        let sv = Poly::var(&ext, &s)?;
        let rab = Poly::one(&ext).sub(&sv.mul(&d.embed(&ext)?));
        let mut gens: Vec<Poly> = self.gens.iter().map(|g| g.embed(&ext)).collect::<Result<_>>()?;
        gens.push(rab);
        let big = Ideal::new(&ext, gens)?;
        let out = big.eliminate(&[s], cfg)?;
        out.embed(&self.vars)
    }

    /// Krull dimension of `k[x]/I`, via a maximal independent set of the
    /// leading-term ideal.
    pub fn dimension(&self, cfg: &Config) -> Result<usize> {
        let n = self.vars.len();
        if self.gens.is_empty() {
            return Ok(n);
        }
        let gb = self.reduced(cfg)?;
        if gb.iter().any(|g| g.is_constant()) {
            return Err(Error::EmptyVariety(format!("{:?}", self.vars)));
        }
        let lms: Vec<_> = gb.iter().map(|g| g.leading(TermOrder::Grevlex).expect("nonzero").0.clone()).collect();
        // largest set S such that no leading monomial lives in k[S]
        let mut best = 0;
        for mask in 0u32..(1u32 << n) {
            let size = mask.count_ones() as usize;
            if size <= best {
                continue;
            }
            let ok = lms.iter().all(|m| (0..n).any(|i| m.exp(i) > 0 && mask & (1 << i) == 0));
            if ok {
                best = size;
            }
        }
        Ok(best)
    }

    /// Rational points of a zero-dimensional ideal, by a lex triangular
    /// solve. See [`RationalPoints`].
    pub fn rational_points(&self, cfg: &Config) -> Result<RationalPoints> {
        solve::rational_points(self, cfg)
    }
}

/// A variable name not present in `vars`, derived from `base`.
pub fn fresh_name(vars: &Vars, base: &str) -> String {
    if !vars.contains(base) {
        return base.to_string();
    }
    (0..).map(|i| format!("{base}{i}")).find(|n| !vars.contains(n)).expect("infinitely many names")
}

/// Zariski closure of the image of `X` under the rational map with the given
/// components, as an ideal in `target` variables.
pub fn image_closure(components: &[RatFunc], x: &Ideal, target: &Vars, cfg: &Config) -> Result<Ideal> {
    if components.len() != target.len() {
        return Err(Error::ComponentCount { expected: target.len(), got: components.len() });
    }
    let src = x.vars().clone();
    // internal names for the target so source and target may share names
    let internal: Vec<String> = (0..target.len())
        .map(|i| fresh_name(&src, &format!("_y{i}")))
        .collect();
    let tv = Vars::new(&internal);
    let all = src.concat(&tv)?;
    let mut gens: Vec<Poly> = x.generators().iter().map(|g| g.embed(&all)).collect::<Result<_>>()?;
    let mut dens = Poly::one(&all);
    for (i, c) in components.iter().enumerate() {
        let c = c.embed(&src)?;
        if x.contains(c.denom(), cfg)? {
            return Err(Error::MapUndefinedOnX);
        }
        let y = Poly::var(&all, &internal[i])?;
        gens.push(c.denom().embed(&all)?.mul(&y).sub(&c.numer().embed(&all)?));
        dens = dens.mul(&c.denom().embed(&all)?);
    }
    let graph = Ideal::new(&all, gens)?.saturate(&dens, cfg)?;
    let img = graph.eliminate(src.names(), cfg)?;
    Ok(img.renamed(target))
}
