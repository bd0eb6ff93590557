//! Affine varieties, rational maps and σ-varieties.

use crate::algebra::Coeff;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::field::{DifferenceField, FieldElem};
use crate::ideals::{fresh_name, image_closure, Ideal};
use crate::poly::{Poly, RatFunc, Vars};

/// Closed subvariety of affine space, given by its ideal. Irreducibility is
/// a recorded assertion, never checked.
#[derive(Clone, Debug)]
pub struct AffineVariety {
    ideal: Ideal,
    irreducible: bool,
}

impl AffineVariety {
    /// Fails with `EmptyVariety` if the ideal contains 1.
    pub fn new(vars: &Vars, gens: Vec<Poly>, cfg: &Config) -> Result<Self> {
        Self::from_ideal(Ideal::new(vars, gens)?, cfg)
    }

    pub fn from_ideal(ideal: Ideal, cfg: &Config) -> Result<Self> {
        if ideal.is_unit(cfg)? {
            return Err(Error::EmptyVariety(format!("{:?}", ideal.vars())));
        }
        Ok(AffineVariety { ideal, irreducible: true })
    }

    /// The whole affine space on `vars`.
    pub fn affine_space(vars: &Vars) -> Self {
        AffineVariety { ideal: Ideal::zero(vars), irreducible: true }
    }

    pub fn vars(&self) -> &Vars {
        self.ideal.vars()
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn is_irreducible_asserted(&self) -> bool {
        self.irreducible
    }

    pub fn sigma_transform(&self, field: &DifferenceField, power: i64) -> AffineVariety {
        AffineVariety { ideal: self.ideal.coeff_transform(field, power), irreducible: self.irreducible }
    }

    pub fn renamed(&self, vars: &Vars) -> AffineVariety {
        AffineVariety { ideal: self.ideal.renamed(vars), irreducible: self.irreducible }
    }

    /// Product with a variety on disjoint variables.
    pub fn product(&self, other: &AffineVariety) -> Result<AffineVariety> {
        let vars = self.vars().concat(other.vars())?;
        let mut gens: Vec<Poly> = self.ideal.generators().to_vec();
        gens.extend(other.ideal.generators().iter().cloned());
        Ok(AffineVariety { ideal: Ideal::new(&vars, gens)?, irreducible: self.irreducible && other.irreducible })
    }

    pub fn dimension(&self, cfg: &Config) -> Result<usize> {
        self.ideal.dimension(cfg)
    }

    pub fn same_as(&self, other: &AffineVariety, cfg: &Config) -> Result<bool> {
        Ok(self.vars() == other.vars() && self.ideal.equals(&other.ideal, cfg)?)
    }

    /// Whether a `k`-point satisfies every generator.
    pub fn contains_point(&self, point: &[FieldElem]) -> Result<bool> {
        if point.len() != self.vars().len() {
            return Err(Error::Shape(format!("point has {} coordinates, variety {}", point.len(), self.vars().len())));
        }
        Ok(self.ideal.generators().iter().all(|g| g.eval(point).is_zero()))
    }
}

/// Rational map between affine varieties, one reduced component per target
/// coordinate, expressed in the source variables.
#[derive(Clone, Debug)]
pub struct RationalMap {
    source: AffineVariety,
    target: AffineVariety,
    components: Vec<RatFunc>,
}

impl RationalMap {
    /// Checks that no denominator vanishes on the source and that target
    /// equations pull back into the source ideal.
    pub fn new(source: AffineVariety, target: AffineVariety, components: Vec<RatFunc>, cfg: &Config) -> Result<Self> {
        let m = Self::unchecked(source, target, components)?;
        for c in &m.components {
            if m.source.ideal.contains(c.denom(), cfg)? {
                return Err(Error::MapUndefinedOnX);
            }
        }
        for h in m.target.ideal.generators() {
            let pulled = RatFunc::from(h.clone()).compose(&m.components)?;
            let nf = m.source.ideal.normal_form(&pulled.numer().embed(m.source.vars())?, cfg)?;
            if !nf.is_zero() {
                return Err(Error::ImageNotInTarget(format!("{:?} pulls back to {:?}", h, nf)));
            }
        }
        Ok(m)
    }

    /// Shape checks only.
    pub fn unchecked(source: AffineVariety, target: AffineVariety, components: Vec<RatFunc>) -> Result<Self> {
        if components.len() != target.vars().len() {
            return Err(Error::ComponentCount { expected: target.vars().len(), got: components.len() });
        }
        let components = components.iter().map(|c| c.embed(source.vars())).collect::<Result<Vec<_>>>()?;
        Ok(RationalMap { source, target, components })
    }

    pub fn identity(v: &AffineVariety) -> RationalMap {
        let comps = v.vars().names().iter().map(|n| RatFunc::var(v.vars(), n).expect("own variable")).collect();
        RationalMap { source: v.clone(), target: v.clone(), components: comps }
    }

    pub fn source(&self) -> &AffineVariety {
        &self.source
    }

    pub fn target(&self) -> &AffineVariety {
        &self.target
    }

    pub fn components(&self) -> &[RatFunc] {
        &self.components
    }

    /// Product of all component denominators.
    pub fn denominator_product(&self) -> Poly {
        self.components.iter().fold(Poly::one(self.source.vars()), |acc, c| acc.mul(c.denom()))
    }

    pub fn coeff_transform(&self, field: &DifferenceField, power: i64) -> RationalMap {
        RationalMap {
            source: self.source.sigma_transform(field, power),
            target: self.target.sigma_transform(field, power),
            components: self.components.iter().map(|c| c.coeff_transform(field, power)).collect(),
        }
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &RationalMap, cfg: &Config) -> Result<RationalMap> {
        compose(self, inner, cfg)
    }

    /// Value at a `k`-point, `None` off the domain.
    pub fn eval(&self, point: &[FieldElem]) -> Option<Vec<FieldElem>> {
        self.components.iter().map(|c| c.eval(point)).collect()
    }

    /// Componentwise residuals `num_a·den_b − num_b·den_a` modulo the source
    /// ideal; all zero iff the maps agree on the source.
    pub fn residuals_against(&self, other: &[RatFunc], cfg: &Config) -> Result<Vec<Poly>> {
        if other.len() != self.components.len() {
            return Err(Error::ComponentCount { expected: self.components.len(), got: other.len() });
        }
        self.components
            .iter()
            .zip(other)
            .map(|(a, b)| {
                let b = b.embed(self.source.vars())?;
                let diff = a.numer().mul(b.denom()).sub(&b.numer().mul(a.denom()));
                self.source.ideal.normal_form(&diff, cfg)
            })
            .collect()
    }

    pub fn agrees_with(&self, other: &[RatFunc], cfg: &Config) -> Result<bool> {
        Ok(self.residuals_against(other, cfg)?.iter().all(|r| r.is_zero()))
    }
}

/// `f ∘ g`; fails if a pulled-back denominator vanishes on the source of
/// `g`.
pub fn compose(f: &RationalMap, g: &RationalMap, cfg: &Config) -> Result<RationalMap> {
    if f.source.vars().len() != g.components.len() {
        return Err(Error::Shape(format!(
            "inner map has {} components, outer map expects {}",
            g.components.len(),
            f.source.vars().len()
        )));
    }
    let mut comps = Vec::with_capacity(f.components.len());
    for c in &f.components {
        let r = c.compose(&g.components)?;
        let r = r.embed(g.source.vars())?;
        if g.source.ideal.contains(r.denom(), cfg)? {
            return Err(Error::CompositionUndefined("pulled-back denominator vanishes on the source".into()));
        }
        comps.push(r);
    }
    Ok(RationalMap { source: g.source.clone(), target: f.target.clone(), components: comps })
}

/// Target variable names for a graph, primed where they collide with the
/// source names.
pub fn graph_target_names(source: &Vars, target: &Vars) -> Vars {
    let mut names: Vec<String> = Vec::new();
    for n in target.names() {
        let mut m = n.clone();
        while source.contains(&m) || names.contains(&m) {
            m.push('\'');
        }
        names.push(m);
    }
    Vars::new(&names)
}

/// Closure of `{(a, f(a))}` in source × target variables (see
/// [`graph_target_names`]).
pub fn graph(f: &RationalMap, cfg: &Config) -> Result<AffineVariety> {
    let tv = graph_target_names(f.source.vars(), f.target.vars());
    let all = f.source.vars().concat(&tv)?;
    let mut gens: Vec<Poly> = f.source.ideal.generators().to_vec();
    for (c, y) in f.components.iter().zip(tv.names()) {
        let y = Poly::var(&all, y)?;
        gens.push(c.denom().mul(&y).sub(c.numer()));
    }
    let ideal = Ideal::new(&all, gens)?;
    let d = f.denominator_product().embed(&all)?;
    AffineVariety::from_ideal(ideal.saturate(&d, cfg)?, cfg)
}

pub fn is_dominant(f: &RationalMap, cfg: &Config) -> Result<bool> {
    let img = image_closure(&f.components, &f.source.ideal, f.target.vars(), cfg)?;
    img.equals(&f.target.ideal, cfg)
}

/// Both composites reduce to the identity.
pub fn check_birational_inverse(f: &RationalMap, g: &RationalMap, cfg: &Config) -> Result<bool> {
    let gf = compose(g, f, cfg)?;
    let fg = compose(f, g, cfg)?;
    Ok(gf.agrees_with(RationalMap::identity(&f.source).components(), cfg)?
        && fg.agrees_with(RationalMap::identity(&g.source).components(), cfg)?)
}

/// `(V, φ)` with `φ: V ⇢ V^σ` dominant.
#[derive(Clone, Debug)]
pub struct SigmaVariety {
    field: DifferenceField,
    phi: RationalMap,
}

impl SigmaVariety {
    /// Builds `φ: V ⇢ V^σ` from components and checks that it is a
    /// dominant map into the transform.
    pub fn new(field: &DifferenceField, v: AffineVariety, components: Vec<RatFunc>, cfg: &Config) -> Result<Self> {
        let target = v.sigma_transform(field, 1);
        let phi = RationalMap::new(v, target, components, cfg)?;
        if !is_dominant(&phi, cfg)? {
            return Err(Error::NotDominant);
        }
        Ok(SigmaVariety { field: field.clone(), phi })
    }

    /// Skips the dominance computation; used for objects dominant by
    /// construction.
    pub fn new_unverified(field: &DifferenceField, phi: RationalMap) -> Self {
        SigmaVariety { field: field.clone(), phi }
    }

    pub fn field(&self) -> &DifferenceField {
        &self.field
    }

    pub fn carrier(&self) -> &AffineVariety {
        self.phi.source()
    }

    pub fn vars(&self) -> &Vars {
        self.phi.source().vars()
    }

    pub fn phi(&self) -> &RationalMap {
        &self.phi
    }

    pub fn is_autonomous(&self) -> bool {
        self.field.is_autonomous()
    }

    pub fn dimension(&self, cfg: &Config) -> Result<usize> {
        self.carrier().dimension(cfg)
    }

    /// `(V × W, φ × ψ)` on disjoint variables.
    pub fn product(&self, other: &SigmaVariety) -> Result<SigmaVariety> {
        let v = self.carrier().product(other.carrier())?;
        let t = self.phi.target().product(other.phi.target())?;
        let mut comps: Vec<RatFunc> = self.phi.components().to_vec();
        comps.extend(other.phi.components().iter().cloned());
        let phi = RationalMap::unchecked(v, t, comps)?;
        Ok(SigmaVariety { field: self.field.clone(), phi })
    }
}

/// Residuals of `ψ ∘ g − g^σ ∘ φ` modulo `I(V)`.
pub fn equivariance_residuals(
    g: &RationalMap,
    src: &SigmaVariety,
    dst: &SigmaVariety,
    cfg: &Config,
) -> Result<Vec<Poly>> {
    if g.source.vars() != src.vars() || g.target.vars() != dst.vars() {
        return Err(Error::Shape("map does not go between the given carriers".into()));
    }
    let lhs = compose(dst.phi(), g, cfg)?;
    let gs = g.coeff_transform(src.field(), 1);
    // g^σ lives on V^σ; φ lands there
    let rhs: Vec<RatFunc> =
        gs.components.iter().map(|c| c.compose(src.phi().components())).collect::<Result<_>>()?;
    lhs.residuals_against(&rhs, cfg)
}

pub fn is_equivariant(g: &RationalMap, src: &SigmaVariety, dst: &SigmaVariety, cfg: &Config) -> Result<bool> {
    Ok(equivariance_residuals(g, src, dst, cfg)?.iter().all(|r| r.is_zero()))
}

/// Whether `X ⊆ V` is invariant: `φ` is defined on `X` and `φ(X)` is dense
/// in `X^σ`.
pub fn is_invariant_subvariety(x: &AffineVariety, s: &SigmaVariety, cfg: &Config) -> Result<bool> {
    if x.vars() != s.vars() {
        return Err(Error::Shape("subvariety must use the carrier's variables".into()));
    }
    if !s.carrier().ideal().is_subset(x.ideal(), cfg)? {
        return Err(Error::Shape("subvariety is not contained in the carrier".into()));
    }
    let img = image_closure(s.phi().components(), x.ideal(), x.vars(), cfg)?;
    img.equals(&x.ideal().coeff_transform(s.field(), 1), cfg)
}

/// Variables `{v}_{j}` for copy `j`, copy-major.
fn indexed_vars(base: &Vars, copies: impl Iterator<Item = usize>) -> Vec<Vars> {
    copies.map(|j| Vars::new(&base.names().iter().map(|n| format!("{n}_{j}")).collect::<Vec<_>>())).collect()
}

/// `(V^n, φ × … × φ)`; variables renamed `x_1, …, x_n`.
pub fn cartesian_power(s: &SigmaVariety, n: usize) -> Result<SigmaVariety> {
    if n == 0 {
        return Err(Error::Shape("power must be at least 1".into()));
    }
    if n == 1 {
        return Ok(s.clone());
    }
    let blocks = indexed_vars(s.vars(), 1..=n);
    let mut acc: Option<SigmaVariety> = None;
    for b in blocks {
        let v = s.carrier().renamed(&b);
        let t = s.phi().target().renamed(&b);
        let comps = s.phi().components().iter().map(|c| c.renamed(&b)).collect();
        let factor = SigmaVariety { field: s.field.clone(), phi: RationalMap::unchecked(v, t, comps)? };
        acc = Some(match acc {
            None => factor,
            Some(a) => a.product(&factor)?,
        });
    }
    Ok(acc.expect("n >= 2"))
}

/// Locus of `(a, σ(a), …, σ^m(a))` for a generic solution `a`: variables
/// `x_0, …, x_m`, relations `x_{i+1} = φ^{σ^i}(x_i)`.
pub fn prolongation(s: &SigmaVariety, m: usize, cfg: &Config) -> Result<AffineVariety> {
    if m == 0 {
        return Ok(s.carrier().clone());
    }
    let blocks = indexed_vars(s.vars(), 0..=m);
    let all = blocks.iter().skip(1).try_fold(blocks[0].clone(), |acc, b| acc.concat(b))?;
    let mut gens: Vec<Poly> = Vec::new();
    for g in s.carrier().ideal().generators() {
        gens.push(g.renamed(&blocks[0]).embed(&all)?);
    }
    let mut dens = Poly::one(&all);
    for i in 0..m {
        let phi_i = s.phi().coeff_transform(s.field(), i as i64);
        for (c, y) in phi_i.components().iter().zip(blocks[i + 1].names()) {
            let c = c.renamed(&blocks[i]).embed(&all)?;
            let y = Poly::var(&all, y)?;
            gens.push(c.denom().mul(&y).sub(c.numer()));
            dens = dens.mul(c.denom());
        }
    }
    let ideal = Ideal::new(&all, gens)?.saturate(&dens, cfg)?;
    AffineVariety::from_ideal(ideal, cfg)
}

/// Generators of the canonical base: coefficients of the reduced grevlex
/// basis of the graph of `φ`, closed under `σ^{±1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalBase {
    /// Non-rational coefficients of the reduced basis of the graph.
    pub coefficients: Vec<FieldElem>,
    /// Additional generators added while closing under `σ` and `σ⁻¹`.
    pub sigma_closure: Vec<FieldElem>,
    /// True when the generated field stopped growing within the allowed
    /// number of rounds.
    pub stabilized: bool,
}

impl CanonicalBase {
    /// Canonical base is the prime field.
    pub fn is_prime_field(&self) -> bool {
        self.coefficients.is_empty() && self.sigma_closure.is_empty()
    }

    pub fn generators(&self) -> Vec<FieldElem> {
        let mut v = self.coefficients.clone();
        v.extend(self.sigma_closure.iter().cloned());
        v
    }
}

pub fn canonical_base(s: &SigmaVariety, cfg: &Config) -> Result<CanonicalBase> {
    let gr = graph(s.phi(), cfg)?;
    let gb = gr.ideal().reduced(cfg)?;
    let mut coeffs: Vec<FieldElem> = Vec::new();
    for g in gb.iter() {
        for (_, c) in g.terms() {
            if !c.is_rational() && !coeffs.contains(c) {
                coeffs.push(c.clone());
            }
        }
    }
    let field = s.field();
    if coeffs.is_empty() || field.is_autonomous() {
        return Ok(CanonicalBase { coefficients: coeffs, sigma_closure: Vec::new(), stabilized: true });
    }
    let mut closure: Vec<FieldElem> = Vec::new();
    let mut frontier: Vec<FieldElem> = coeffs.clone();
    let mut stabilized = false;
    for _ in 0..cfg.sigma_rounds {
        let mut next = Vec::new();
        for e in &frontier {
            for power in [1i64, -1] {
                let img = field.sigma_apply(e, power);
                let mut current = coeffs.clone();
                current.extend(closure.iter().cloned());
                if !in_subfield(&img, &current, field.rank(), cfg)? {
                    closure.push(img.clone());
                    next.push(img);
                }
            }
        }
        if next.is_empty() {
            stabilized = true;
            break;
        }
        frontier = next;
    }
    Ok(CanonicalBase { coefficients: coeffs, sigma_closure: closure, stabilized })
}

/// Whether `e ∈ ℚ(gens) ⊆ ℚ(t_1, …, t_r)`: `e` must be constant on the
/// fibres of `t ↦ gens(t)`.
pub fn in_subfield(e: &FieldElem, gens: &[FieldElem], rank: usize, cfg: &Config) -> Result<bool> {
    if e.is_rational() {
        return Ok(true);
    }
    if gens.contains(e) {
        return Ok(true);
    }
    let mut names = Vars::empty();
    let mut yv = Vec::new();
    for i in 0..rank {
        let n = fresh_name(&names, &format!("_t{i}"));
        names = names.union(&Vars::new(&[n.clone()]));
        yv.push(n);
    }
    let y: Vec<Poly> = yv.iter().map(|n| Poly::var(&names, n)).collect::<Result<_>>()?;
    // a rational polynomial in the generators, read in the y variables
    let in_y = |q: &crate::field::QPoly| -> Poly {
        let mut acc = Poly::zero(&names);
        for (m, c) in q.terms() {
            let mut t = Poly::constant(&names, FieldElem::from_rational(c.clone()));
            for (i, yi) in y.iter().enumerate() {
                t = t.mul(&yi.pow(m.exp(i)));
            }
            acc = acc.add(&t);
        }
        acc
    };
    let mut rel = Vec::new();
    let mut dens = Poly::one(&names);
    for c in gens {
        let (n, d) = (in_y(c.numer()), in_y(c.denom()));
        rel.push(d.scale(c).sub(&n));
        dens = dens.mul(&d);
    }
    let ideal = Ideal::new(&names, rel)?.saturate(&dens, cfg)?;
    let test = in_y(e.denom()).scale(e).sub(&in_y(e.numer()));
    ideal.contains(&test, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_ratfunc;

    fn shift() -> DifferenceField {
        let t = FieldElem::generator(0);
        let one = FieldElem::from_int(1);
        DifferenceField::new(vec!["t".into()], vec![t.add(&one)], vec![t.sub(&one)]).unwrap()
    }

    fn sv(field: &DifferenceField, vars: &[&str], comps: &[&str]) -> SigmaVariety {
        let v = Vars::new(vars);
        let c = comps.iter().map(|s| parse_ratfunc(s, &v, field).unwrap()).collect();
        SigmaVariety::new(field, AffineVariety::affine_space(&v), c, &Config::default()).unwrap()
    }

    fn map(field: &DifferenceField, src: &[&str], dst: &[&str], comps: &[&str]) -> RationalMap {
        let s = Vars::new(src);
        let c = comps.iter().map(|e| parse_ratfunc(e, &s, field).unwrap()).collect();
        RationalMap::new(
            AffineVariety::affine_space(&s),
            AffineVariety::affine_space(&Vars::new(dst)),
            c,
            &Config::default(),
        )
        .unwrap()
    }

    #[test]
    fn composition_examples() {
        let q = DifferenceField::rationals();
        let cfg = Config::default();
        let f = map(&q, &["x"], &["x"], &["x + 1"]);
        let ff = compose(&f, &f, &cfg).unwrap();
        assert!(ff.agrees_with(&[parse_ratfunc("x + 2", f.source().vars(), &q).unwrap()], &cfg).unwrap());
        let id = RationalMap::identity(f.source());
        assert_eq!(compose(&f, &id, &cfg).unwrap().components(), f.components());
    }

    #[test]
    fn graph_examples() {
        let q = DifferenceField::rationals();
        let cfg = Config::default();
        let inv = map(&q, &["x"], &["y"], &["1/x"]);
        let g = graph(&inv, &cfg).unwrap();
        let v = g.vars().clone();
        assert_eq!(v, Vars::new(&["x", "y"]));
        let want = crate::expr::parse_poly("x*y - 1", &v, &q).unwrap();
        assert_eq!(*g.ideal().reduced(&cfg).unwrap(), vec![want]);
        // colliding names get primed
        let sh = map(&q, &["x"], &["x"], &["x + 1"]);
        assert_eq!(graph(&sh, &cfg).unwrap().vars(), &Vars::new(&["x", "x'"]));
    }

    #[test]
    fn dominance_examples() {
        let q = DifferenceField::rationals();
        let cfg = Config::default();
        assert!(is_dominant(&map(&q, &["x"], &["x"], &["x + 1"]), &cfg).unwrap());
        assert!(is_dominant(&map(&q, &["x"], &["x"], &["x^2"]), &cfg).unwrap());
        assert!(!is_dominant(&map(&q, &["x", "y"], &["x", "y"], &["x", "x"]), &cfg).unwrap());
    }

    #[test]
    fn birational_inverse_examples() {
        let q = DifferenceField::rationals();
        let cfg = Config::default();
        let f = map(&q, &["x"], &["x"], &["x + 1"]);
        let g = map(&q, &["x"], &["x"], &["x - 1"]);
        assert!(check_birational_inverse(&f, &g, &cfg).unwrap());
        let sq = map(&q, &["x"], &["x"], &["x^2"]);
        let id = map(&q, &["x"], &["x"], &["x"]);
        assert!(!check_birational_inverse(&sq, &id, &cfg).unwrap());
    }

    #[test]
    fn equivariance_examples() {
        let q = DifferenceField::rationals();
        let cfg = Config::default();
        let s = sv(&q, &["x"], &["x + 1"]);
        assert!(is_equivariant(&RationalMap::identity(s.carrier()), &s, &s, &cfg).unwrap());
        let sq = map(&q, &["x"], &["x"], &["x^2"]);
        assert!(!is_equivariant(&sq, &s, &s, &cfg).unwrap());
    }

    #[test]
    fn invariant_points() {
        let q = DifferenceField::rationals();
        let cfg = Config::default();
        let v = Vars::new(&["x"]);
        let origin = AffineVariety::new(&v, vec![Poly::var(&v, "x").unwrap()], &cfg).unwrap();
        assert!(is_invariant_subvariety(&origin, &sv(&q, &["x"], &["2*x"]), &cfg).unwrap());
        assert!(!is_invariant_subvariety(&origin, &sv(&q, &["x"], &["x + 1"]), &cfg).unwrap());
        let s = sv(&q, &["x"], &["x + 1"]);
        assert!(is_invariant_subvariety(s.carrier(), &s, &cfg).unwrap());
    }

    #[test]
    fn prolongation_of_shift() {
        let f = shift();
        let cfg = Config::default();
        let s = sv(&f, &["x"], &["x + t"]);
        let p = prolongation(&s, 2, &cfg).unwrap();
        let v = p.vars().clone();
        assert_eq!(v, Vars::new(&["x_0", "x_1", "x_2"]));
        let want = Ideal::new(
            &v,
            vec![
                crate::expr::parse_poly("x_1 - x_0 - t", &v, &f).unwrap(),
                crate::expr::parse_poly("x_2 - x_1 - t - 1", &v, &f).unwrap(),
            ],
        )
        .unwrap();
        assert!(p.ideal().equals(&want, &cfg).unwrap());
    }

    #[test]
    fn canonical_base_examples() {
        let cfg = Config::default();
        let q = DifferenceField::rationals();
        assert!(canonical_base(&sv(&q, &["x"], &["x + 1"]), &cfg).unwrap().is_prime_field());
        assert!(canonical_base(&sv(&q, &["x"], &["2*x"]), &cfg).unwrap().is_prime_field());
        let f = shift();
        let cb = canonical_base(&sv(&f, &["x"], &["x + t"]), &cfg).unwrap();
        assert_eq!(cb.coefficients, vec![FieldElem::generator(0)]);
        assert!(cb.stabilized);
    }

    #[test]
    fn subfield_membership() {
        let cfg = Config::default();
        let t = FieldElem::generator(0);
        let t2 = t.mul(&t);
        assert!(in_subfield(&t2.add(&FieldElem::from_int(3)), &[t2.clone()], 1, &cfg).unwrap());
        assert!(!in_subfield(&t, &[t2], 1, &cfg).unwrap());
    }
}
