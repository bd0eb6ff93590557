//! Binding groups of σ-varieties, built from a user-supplied trivialization.
//!
//! Generic points are fresh variables. Every identity is checked as a
//! cross-multiplied normal form, so a certificate is a list of polynomials
//! that must all be zero.

use std::collections::BTreeMap;

use crate::algebra::linalg::{echelon_basis, solve_affine, Matrix};
use crate::algebra::{Coeff, Mono, TermOrder};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::field::{FieldElem, QPoly};
use crate::geometry::{check_birational_inverse, equivariance_residuals, AffineVariety, RationalMap, SigmaVariety};
use crate::ideals::{fresh_name, image_closure, Ideal};
use crate::invariants::{find_rational_invariants, monomials_up_to, rational_kernel, verify_invariant};
use crate::poly::{Poly, RatFunc, Vars};

/// A birational `g: V × Z ⇢ Y ⊆ 𝔸^ℓ × Z` over `Z` with inverse `f`.
#[derive(Clone, Debug)]
pub struct Trivialization {
    s: SigmaVariety,
    z: SigmaVariety,
    y: AffineVariety,
    g: Vec<RatFunc>,
    f: Vec<RatFunc>,
    vz: Vars,
}

impl Trivialization {
    /// Shape checks only; [`verify_trivialization`] does the rest. The last
    /// variables of `Y` must be those of `Z`.
    pub fn new(s: SigmaVariety, z: SigmaVariety, y: AffineVariety, g: Vec<RatFunc>, f: Vec<RatFunc>) -> Result<Self> {
        let vz = s.vars().concat(z.vars())?;
        let (yn, zn) = (y.vars().names(), z.vars().names());
        if yn.len() < zn.len() || yn[yn.len() - zn.len()..] != *zn {
            return Err(Error::Shape("the ambient of Y must end with the variables of Z".into()));
        }
        if yn[..yn.len() - zn.len()].iter().any(|n| s.vars().contains(n)) {
            return Err(Error::VariableClash("Y and V share a fibre variable".into()));
        }
        if g.len() != yn.len() {
            return Err(Error::ComponentCount { expected: yn.len(), got: g.len() });
        }
        if f.len() != vz.len() {
            return Err(Error::ComponentCount { expected: vz.len(), got: f.len() });
        }
        let g = g.iter().map(|c| c.embed(&vz)).collect::<Result<_>>()?;
        let f = f.iter().map(|c| c.embed(y.vars())).collect::<Result<_>>()?;
        Ok(Trivialization { s, z, y, g, f, vz })
    }

    pub fn s(&self) -> &SigmaVariety {
        &self.s
    }

    pub fn z(&self) -> &SigmaVariety {
        &self.z
    }

    pub fn y(&self) -> &AffineVariety {
        &self.y
    }

    pub fn g(&self) -> &[RatFunc] {
        &self.g
    }

    pub fn f(&self) -> &[RatFunc] {
        &self.f
    }

    /// Number of fibre coordinates `ℓ`.
    pub fn fibre_dim(&self) -> usize {
        self.y.vars().len() - self.z.vars().len()
    }

    fn fibre_names(&self) -> Vec<String> {
        self.y.vars().names()[..self.fibre_dim()].to_vec()
    }

    fn z_names(&self) -> &[String] {
        self.z.vars().names()
    }

    /// Every name in use: variables of `V`, `Y`, `Z` and field generators.
    fn taken(&self) -> Vars {
        self.vz.union(self.y.vars()).union(&Vars::new(self.s.field().names()))
    }

    /// Fresh names for a generic point of `Z`, decorated by `tag`.
    fn generic_names(&self, avoid: &Vars, tag: &str) -> Vars {
        let n = self.z.vars().len();
        let mut taken = self.taken().union(avoid);
        let mut out = Vec::new();
        for i in 0..n {
            let base = if n == 1 { format!("u{tag}") } else { format!("u{}{tag}", i + 1) };
            let name = fresh_name(&taken, &base);
            taken = taken.union(&Vars::new(&[name.as_str()]));
            out.push(name);
        }
        Vars::new(&out)
    }

    fn sigma_pieces(&self) -> (Vec<RatFunc>, Vec<RatFunc>) {
        let field = self.s.field();
        (
            self.g.iter().map(|c| c.coeff_transform(field, 1)).collect(),
            self.f.iter().map(|c| c.coeff_transform(field, 1)).collect(),
        )
    }
}

fn vars_of(rs: &[RatFunc]) -> Vars {
    rs.iter().fold(Vars::empty(), |acc, r| acc.union(r.vars()))
}

fn var_images(vars: &Vars) -> Vec<RatFunc> {
    vars.names().iter().map(|n| RatFunc::var(vars, n).expect("own variable")).collect()
}

fn bind(names: &[String], values: &[RatFunc]) -> Vec<(String, RatFunc)> {
    names.iter().cloned().zip(values.iter().cloned()).collect()
}

fn subst_all(rs: &[RatFunc], map: &[(String, RatFunc)]) -> Result<Vec<RatFunc>> {
    rs.iter().map(|r| r.substitute(map)).collect()
}

/// Cross-multiplied difference, reduced modulo `ideal` when given.
fn residual(a: &RatFunc, b: &RatFunc, ideal: Option<&Ideal>, cfg: &Config) -> Result<Poly> {
    let vars = a.vars().union(b.vars());
    let (a, b) = (a.embed(&vars)?, b.embed(&vars)?);
    let diff = a.numer().mul(b.denom()).sub(&b.numer().mul(a.denom()));
    match ideal {
        Some(i) if !i.is_zero_ideal() => {
            let all = vars.union(i.vars());
            i.embed(&all)?.normal_form(&diff.embed(&all)?, cfg)
        }
        _ => Ok(diff),
    }
}

fn residuals(a: &[RatFunc], b: &[RatFunc], ideal: Option<&Ideal>, cfg: &Config) -> Result<Vec<Poly>> {
    if a.len() != b.len() {
        return Err(Error::ComponentCount { expected: a.len(), got: b.len() });
    }
    a.iter().zip(b).map(|(x, y)| residual(x, y, ideal, cfg)).collect()
}

/// A named identity with its residuals.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub name: String,
    pub residuals: Vec<Poly>,
}

impl Certificate {
    pub fn new(name: &str, residuals: Vec<Poly>) -> Self {
        Certificate { name: name.into(), residuals }
    }

    pub fn holds(&self) -> bool {
        self.residuals.iter().all(|r| r.is_zero())
    }

    /// `IdentityFails` carrying the first nonzero residual.
    pub fn check(self, field_names: &[String]) -> Result<Certificate> {
        match self.residuals.iter().find(|r| !r.is_zero()) {
            None => Ok(self),
            Some(r) => Err(Error::IdentityFails { what: self.name.clone(), residual: r.display(field_names).to_string() }),
        }
    }
}

/// A pair of points of `Z`, concrete or generic; coordinates may share
/// variables, which then denote the same generic point.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupParam {
    pub e: Vec<RatFunc>,
    pub e_prime: Vec<RatFunc>,
}

impl GroupParam {
    pub fn new(e: Vec<RatFunc>, e_prime: Vec<RatFunc>) -> Self {
        GroupParam { e, e_prime }
    }

    pub fn concrete(e: &[FieldElem], e_prime: &[FieldElem]) -> Self {
        let c = |v: &[FieldElem]| v.iter().map(|x| RatFunc::constant(&Vars::empty(), x.clone())).collect();
        GroupParam { e: c(e), e_prime: c(e_prime) }
    }

    /// A pair of independent generic points.
    pub fn generic(t: &Trivialization) -> Self {
        let u = t.generic_names(&Vars::empty(), "");
        let u2 = t.generic_names(&u, "'");
        GroupParam { e: var_images(&u), e_prime: var_images(&u2) }
    }

    pub fn vars(&self) -> Vars {
        vars_of(&self.e).union(&vars_of(&self.e_prime))
    }
}

fn g_fibre(t: &Trivialization, g: &[RatFunc], e: &[RatFunc]) -> Result<Vec<RatFunc>> {
    if e.len() != t.z_names().len() {
        return Err(Error::ComponentCount { expected: t.z_names().len(), got: e.len() });
    }
    subst_all(&g[..t.fibre_dim()], &bind(t.z_names(), e)).map_err(|err| match err {
        Error::CompositionUndefined(m) => Error::FibreUndefined(m),
        other => other,
    })
}

fn check_on_z(t: &Trivialization, e: &[RatFunc]) -> Result<()> {
    for h in t.z.carrier().ideal().generators() {
        let v = RatFunc::from(h.clone()).substitute(&bind(t.z_names(), e))?;
        if !v.is_zero() {
            return Err(Error::FibreUndefined("parameter is not a point of Z".into()));
        }
    }
    Ok(())
}

fn theta_with(t: &Trivialization, g: &[RatFunc], f: &[RatFunc], w: &GroupParam) -> Result<Vec<RatFunc>> {
    let ge = g_fibre(t, g, &w.e)?;
    let n = t.s.vars().len();
    let fe = subst_all(&f[..n], &bind(t.z_names(), &w.e_prime)).map_err(|err| match err {
        Error::CompositionUndefined(m) => Error::FibreUndefined(m),
        other => other,
    })?;
    let theta = subst_all(&fe, &bind(&t.fibre_names(), &ge)).map_err(|err| match err {
        Error::CompositionUndefined(m) => Error::FibreUndefined(m),
        other => other,
    })?;
    let target = t.s.vars().union(&w.vars());
    theta.iter().map(|c| c.embed(&target)).collect()
}

fn fibres_agree(t: &Trivialization, w: &GroupParam, cfg: &Config) -> Result<bool> {
    if t.y.ideal().is_zero_ideal() {
        return Ok(true);
    }
    // both fibres over the same coefficient field k(e, e')
    let all = w.vars();
    let names = all.names().to_vec();
    let rank = t.s.field().rank();
    let lift = |e: &[RatFunc]| -> Result<Ideal> {
        let yv = Vars::new(&t.fibre_names());
        let mut gens = Vec::new();
        for h in t.y.ideal().generators() {
            let r = RatFunc::from(h.clone()).substitute(&bind(t.z_names(), e))?;
            let r = r.embed(&yv.union(&all))?;
            gens.push(r.numer().lift_to_field(&names, rank)?.embed(&yv)?);
        }
        Ideal::new(&yv, gens)
    };
    lift(&w.e)?.equals(&lift(&w.e_prime)?, cfg)
}

/// `θ_w = f_{e'} ∘ g_e` as components over the variables of `V` and of `w`.
pub fn theta_of(t: &Trivialization, w: &GroupParam, cfg: &Config) -> Result<Vec<RatFunc>> {
    if !fibres_agree(t, w, cfg)? {
        return Err(Error::FibreMismatch);
    }
    theta_with(t, &t.g, &t.f, w)
}

pub fn params_equivalent(t: &Trivialization, w1: &GroupParam, w2: &GroupParam, cfg: &Config) -> Result<bool> {
    let a = theta_of(t, w1, cfg)?;
    let b = theta_of(t, w2, cfg)?;
    Ok(residuals(&a, &b, Some(t.s.carrier().ideal()), cfg)?.iter().all(|r| r.is_zero()))
}

/// `(ψ(e), ψ(e'))`, a parameter of the σ-transformed family.
pub fn rho(t: &Trivialization, w: &GroupParam) -> Result<GroupParam> {
    let psi = t.z.phi().components();
    Ok(GroupParam { e: subst_all(psi, &bind(t.z_names(), &w.e))?, e_prime: subst_all(psi, &bind(t.z_names(), &w.e_prime))? })
}

/// One coordinate of a canonical vector: the coefficient of `mono` in the
/// numerator or denominator of a component.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalEntry {
    pub component: usize,
    pub denominator: bool,
    pub mono: Mono,
    pub value: RatFunc,
}

/// Coefficients of a rational map `V ⇢ 𝔸^m` defined over `k(params)`,
/// normalized so one coefficient (dropped from the list) is `1`.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalVector {
    pub params: Vars,
    pub entries: Vec<CanonicalEntry>,
}

impl CanonicalVector {
    pub fn values(&self) -> Vec<RatFunc> {
        self.entries.iter().map(|e| e.value.clone()).collect()
    }

    fn keyed(&self) -> BTreeMap<(usize, bool, Mono), RatFunc> {
        self.entries.iter().map(|e| ((e.component, e.denominator, e.mono.clone()), e.value.clone())).collect()
    }
}

/// The normalizer is the first coefficient lying in `k`, denominator terms
/// first, in decreasing grevlex order; failing that the leading
/// denominator coefficient.
pub fn canonical_vector(comps: &[RatFunc], v: &AffineVariety, cfg: &Config) -> Result<CanonicalVector> {
    let x = v.vars();
    let params = vars_of(comps).without(x.names());
    let all = x.union(&params);
    let ideal = v.ideal().embed(&all)?;
    let mut entries = Vec::new();
    for (ci, c) in comps.iter().enumerate() {
        let c = c.embed(&all)?;
        let num = ideal.normal_form(c.numer(), cfg)?;
        let den = ideal.normal_form(c.denom(), cfg)?;
        let split = |p: &Poly| -> Result<Vec<(Mono, RatFunc)>> {
            let mut terms: Vec<(Mono, RatFunc)> = p
                .collect_by(x.names())
                .into_iter()
                .map(|(m, q)| Ok((m, RatFunc::from(q.embed(&params)?))))
                .collect::<Result<_>>()?;
            terms.sort_by(|a, b| TermOrder::Grevlex.cmp(&b.0, &a.0));
            Ok(terms)
        };
        let (nt, dt) = (split(&num)?, split(&den)?);
        let norm_at = dt
            .iter()
            .position(|(_, q)| q.is_constant())
            .map(|i| (true, i))
            .or_else(|| nt.iter().position(|(_, q)| q.is_constant()).map(|i| (false, i)))
            .unwrap_or((true, 0));
        let normalizer = if norm_at.0 { dt[norm_at.1].1.clone() } else { nt[norm_at.1].1.clone() };
        for (is_den, terms) in [(false, &nt), (true, &dt)] {
            for (i, (m, q)) in terms.iter().enumerate() {
                if (is_den, i) == norm_at {
                    continue;
                }
                entries.push(CanonicalEntry { component: ci, denominator: is_den, mono: m.clone(), value: q.div(&normalizer)? });
            }
        }
    }
    Ok(CanonicalVector { params, entries })
}

/// Canonical vector of the fibre map `g_e: V ⇢ 𝔸^ℓ`.
pub fn canonical_parameter(t: &Trivialization, e: &[RatFunc], cfg: &Config) -> Result<CanonicalVector> {
    check_on_z(t, e)?;
    let ge = g_fibre(t, &t.g, e)?;
    for c in &ge {
        if t.s.carrier().ideal().embed(&t.s.vars().union(c.vars()))?.contains(c.denom(), cfg)? {
            return Err(Error::FibreUndefined("g_e is undefined on V".into()));
        }
    }
    canonical_vector(&ge, t.s.carrier(), cfg)
}

/// One itemized check of a trivialization.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrivializationReport {
    pub checks: Vec<Check>,
}

impl TrivializationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Runs every condition on a trivialization. Failures are items of the
/// report; errors are reserved for resource limits.
pub fn verify_trivialization(t: &Trivialization, cfg: &Config) -> Result<TrivializationReport> {
    let field = t.s.field();
    let names = field.names();
    let mut checks = Vec::new();
    let mut push = |name: &str, r: Result<(bool, String)>| -> Result<()> {
        let (passed, detail) = match r {
            Ok(v) => v,
            Err(e @ Error::ResourceLimit { .. }) => return Err(e),
            Err(e) => (false, e.to_string()),
        };
        checks.push(Check { name: name.into(), passed, detail });
        Ok(())
    };
    let vz = t.s.carrier().product(t.z.carrier())?;
    let gm = RationalMap::new(vz.clone(), t.y.clone(), t.g.clone(), cfg);
    push("g is defined on V×Z and lands in Y", gm.as_ref().map(|_| (true, String::new())).map_err(Clone::clone))?;
    let fm = RationalMap::new(t.y.clone(), vz.clone(), t.f.clone(), cfg);
    push("f is defined on Y and lands in V×Z", fm.as_ref().map(|_| (true, String::new())).map_err(Clone::clone))?;
    if let (Ok(gm), Ok(fm)) = (&gm, &fm) {
        push("f and g are mutually inverse", check_birational_inverse(gm, fm, cfg).map(|b| (b, String::new())))?;
    }
    let ell = t.fibre_dim();
    let mut yc: Vec<RatFunc> = var_images(t.y.vars())[..ell].to_vec();
    yc.extend(t.z.phi().components().iter().map(|c| c.embed(t.y.vars())).collect::<Result<Vec<_>>>()?);
    let ys = SigmaVariety::new(field, t.y.clone(), yc, cfg);
    push("Y is invariant under id×ψ", ys.as_ref().map(|_| (true, String::new())).map_err(Clone::clone))?;
    if let (Ok(gm), Ok(ys)) = (&gm, &ys) {
        let src = t.s.product(&t.z)?;
        let r = equivariance_residuals(gm, &src, ys, cfg).map(|rs| {
            let bad: Vec<String> = rs.iter().filter(|r| !r.is_zero()).map(|r| r.display(names).to_string()).collect();
            (bad.is_empty(), bad.join("; "))
        });
        push("g is equivariant for φ×ψ and id×ψ", r)?;
    }
    let proj = |comps: &[RatFunc], src: &AffineVariety, offset: usize| -> Result<(bool, String)> {
        let zs = var_images(t.z.vars());
        let rs = residuals(&comps[offset..], &zs, Some(src.ideal()), cfg)?;
        Ok((rs.iter().all(|r| r.is_zero()), String::new()))
    };
    push("g commutes with the projection to Z", proj(&t.g, &vz, ell))?;
    push("f commutes with the projection to Z", proj(&t.f, &t.y, t.s.vars().len()))?;
    push("canonical parameter separates generic points", canonical_flag(t, cfg))?;
    Ok(TrivializationReport { checks })
}

/// `g_u = g_{u'}` forces `u = u'` on generic points.
fn canonical_flag(t: &Trivialization, cfg: &Config) -> Result<(bool, String)> {
    if !t.z.carrier().ideal().is_zero_ideal() {
        return Ok((false, "not decided: Z is not an open subset of affine space".into()));
    }
    let w = GroupParam::generic(t);
    let a = canonical_parameter(t, &w.e, cfg)?.keyed();
    let b = canonical_parameter(t, &w.e_prime, cfg)?.keyed();
    let all = w.vars();
    let mut eqs = Vec::new();
    let mut dens = Poly::one(&all);
    let zero = RatFunc::from(Poly::zero(&all));
    let keys: Vec<_> = a.keys().chain(b.keys()).cloned().collect();
    for k in keys {
        let d = a.get(&k).unwrap_or(&zero).sub(b.get(&k).unwrap_or(&zero)).embed(&all)?;
        eqs.push(d.numer().clone());
        dens = dens.mul(d.denom());
    }
    let j = Ideal::new(&all, eqs)?.saturate(&dens, cfg)?;
    for (p, q) in w.e.iter().zip(&w.e_prime) {
        if !j.contains(&p.sub(q).embed(&all)?.numer().clone(), cfg)? {
            return Ok((false, "distinct generic parameters give the same fibre map".into()));
        }
    }
    Ok((true, String::new()))
}

/// Intertwining identity `φ ∘ f_{u'} ∘ g_u = f^σ_{ψ(u')} ∘ g^σ_{ψ(u)} ∘ φ`
/// on a generic pair; never fails on a nonzero residual.
pub fn intertwining_certificate(t: &Trivialization, cfg: &Config) -> Result<Certificate> {
    let w = GroupParam::generic(t);
    let theta = theta_with(t, &t.g, &t.f, &w)?;
    let phi = t.s.phi().components();
    let lhs = subst_all(phi, &bind(t.s.vars().names(), &theta))?;
    let (gs, fs) = t.sigma_pieces();
    let theta_s = theta_with(t, &gs, &fs, &rho(t, &w)?)?;
    let rhs = subst_all(&theta_s, &bind(t.s.vars().names(), phi))?;
    Ok(Certificate::new("intertwining", residuals(&lhs, &rhs, Some(t.s.carrier().ideal()), cfg)?))
}

/// As [`intertwining_certificate`], failing with `IdentityFails`.
pub fn verify_intertwining(t: &Trivialization, cfg: &Config) -> Result<Certificate> {
    intertwining_certificate(t, cfg)?.check(t.s.field().names())
}

/// The chart of `H₀`: coordinates are the non-constant entries of the
/// canonical vector of `θ` on a generic pair.
#[derive(Clone, Debug)]
pub struct Chart {
    triv: Trivialization,
    u: Vars,
    u2: Vars,
    w: Vars,
    coords: Vec<RatFunc>,
    template: CanonicalVector,
    transport: Vec<RatFunc>,
}

impl Chart {
    pub fn new(t: &Trivialization, cfg: &Config) -> Result<Chart> {
        if !t.z.carrier().ideal().is_zero_ideal() {
            return Err(Error::Unsupported("binding groups need Z open in affine space".into()));
        }
        let gp = GroupParam::generic(t);
        let (u, u2) = (vars_of(&gp.e), vars_of(&gp.e_prime));
        if !fibres_agree(t, &gp, cfg)? {
            return Err(Error::PresentationIncomplete("fibres of Y vary with the parameter".into()));
        }
        let theta = theta_with(t, &t.g, &t.f, &gp)?;
        let template = canonical_vector(&theta, t.s.carrier(), cfg)?;
        let coords: Vec<RatFunc> = template.values().into_iter().filter(|v| !v.is_constant()).collect();
        let mut taken = t.taken().union(&u).union(&u2);
        let m = coords.len();
        let mut wn = Vec::new();
        for i in 0..m {
            let base = if m == 1 { "w".to_string() } else { format!("w{}", i + 1) };
            let n = fresh_name(&taken, &base);
            taken = taken.union(&Vars::new(&[n.as_str()]));
            wn.push(n);
        }
        let w = Vars::new(&wn);
        let pair = u.concat(&u2)?;
        let coords: Vec<RatFunc> = coords.iter().map(|c| c.embed(&pair)).collect::<Result<_>>()?;
        if m > 0 && !image_closure(&coords, &Ideal::zero(&pair), &w, cfg)?.is_zero_ideal() {
            return Err(Error::PresentationIncomplete("the coordinates of W satisfy relations".into()));
        }
        let transport =
            if m == 0 { var_images(&u) } else { solve_transport(t.s.field().rank(), &u, &u2, &w, &coords, cfg)? };
        Ok(Chart { triv: t.clone(), u, u2, w, coords, template, transport })
    }

    pub fn trivialization(&self) -> &Trivialization {
        &self.triv
    }

    /// Coordinate names of `W`.
    pub fn coordinates(&self) -> &Vars {
        &self.w
    }

    /// Canonical vector of `θ` on the generic pair.
    pub fn template(&self) -> &CanonicalVector {
        &self.template
    }

    /// Generic pair `(u, u')` used by the chart.
    pub fn generic_pair(&self) -> GroupParam {
        GroupParam { e: var_images(&self.u), e_prime: var_images(&self.u2) }
    }

    /// Coordinates `c(u, u')` over the generic pair.
    pub fn coordinate_functions(&self) -> &[RatFunc] {
        &self.coords
    }

    /// `w·u` as a function of `w` and `u`.
    pub fn transport_functions(&self) -> &[RatFunc] {
        &self.transport
    }

    pub fn coordinates_of(&self, w: &GroupParam) -> Result<Vec<RatFunc>> {
        let mut map = bind(self.u.names(), &w.e);
        map.extend(bind(self.u2.names(), &w.e_prime));
        subst_all(&self.coords, &map)
    }

    /// `w·base` for coordinates `w`.
    pub fn transport(&self, w: &[RatFunc], base: &[RatFunc]) -> Result<Vec<RatFunc>> {
        let mut map = bind(self.w.names(), w);
        map.extend(bind(self.u.names(), base));
        subst_all(&self.transport, &map)
    }

    /// A generic base point independent of the given variables.
    fn base(&self, avoid: &Vars) -> Vec<RatFunc> {
        var_images(&self.triv.generic_names(&avoid.union(&self.w).union(&self.u2), "_b"))
    }

    /// Checks that `w` moves a generic point: `NotInH0` otherwise.
    pub fn check_in_h0(&self, w: &GroupParam, cfg: &Config) -> Result<()> {
        let c = self.coordinates_of(w)?;
        let b = self.base(&w.vars());
        let moved = self.transport(&c, &b)?;
        let rep = GroupParam { e: b, e_prime: moved };
        if !params_equivalent(&self.triv, &rep, w, cfg)? {
            return Err(Error::NotInH0("no transport of a generic point realizes this parameter".into()));
        }
        Ok(())
    }
}

fn solve_transport(rank: usize, u: &Vars, u2: &Vars, w: &Vars, coords: &[RatFunc], cfg: &Config) -> Result<Vec<RatFunc>> {
    let all = u2.concat(u)?.concat(w)?;
    let lifted: Vec<String> = u.names().iter().chain(w.names()).cloned().collect();
    let mut eqs = Vec::new();
    let mut dens = Poly::one(u2);
    for (c, wn) in coords.iter().zip(w.names()) {
        let c = c.embed(&all)?;
        let eq = c.numer().sub(&c.denom().mul(&Poly::var(&all, wn)?));
        eqs.push(eq.lift_to_field(&lifted, rank)?.embed(u2)?);
        dens = dens.mul(&c.denom().lift_to_field(&lifted, rank)?.embed(u2)?);
    }
    let ideal = Ideal::new(u2, eqs)?.saturate(&dens, cfg)?;
    let gb = ideal.groebner(TermOrder::Lex, cfg)?;
    if gb.iter().any(|g| g.is_constant()) {
        return Err(Error::NotInH0("transport equations have no solution".into()));
    }
    let params = Vars::new(&lifted);
    let mut out = Vec::new();
    for name in u2.names() {
        let lin = gb.iter().find(|g| g.degree() == 1 && g.support_vars() == [name.clone()]).ok_or_else(|| {
            Error::NotInH0("the transported point is not a rational function of the parameter".into())
        })?;
        let lead = lin.leading(TermOrder::Lex).expect("nonzero").1.clone();
        let c = lin.body().constant_term();
        let v = RatFunc::constant(&Vars::empty(), c.neg().div(&lead));
        out.push(v.lower_from_field(&params, rank)?);
    }
    Ok(out)
}

/// `w₁·w₂ = (inv(w₂)u, w₁u)` on a fresh generic `u`.
pub fn group_multiply(chart: &Chart, w1: &GroupParam, w2: &GroupParam, cfg: &Config) -> Result<GroupParam> {
    chart.check_in_h0(w1, cfg)?;
    chart.check_in_h0(w2, cfg)?;
    let c1 = chart.coordinates_of(w1)?;
    let b = chart.base(&w1.vars().union(&w2.vars()));
    let inv2 = chart.coordinates_of(&group_invert(w2))?;
    Ok(GroupParam { e: chart.transport(&inv2, &b)?, e_prime: chart.transport(&c1, &b)? })
}

/// `(e, e') ↦ (e', e)`.
pub fn group_invert(w: &GroupParam) -> GroupParam {
    GroupParam { e: w.e_prime.clone(), e_prime: w.e.clone() }
}

/// `λ(u) = λ(wu)` for a generic `u`.
pub fn h_lambda_filter(chart: &Chart, w: &GroupParam, lambda: &RatFunc, cfg: &Config) -> Result<bool> {
    let c = chart.coordinates_of(w)?;
    let b = chart.base(&w.vars());
    let moved = chart.transport(&c, &b)?;
    let zn = chart.triv.z_names();
    let l = lambda.embed(chart.triv.z.vars())?;
    let a = l.substitute(&bind(zn, &b))?;
    let m = l.substitute(&bind(zn, &moved))?;
    Ok(residual(&a, &m, None, cfg)?.is_zero())
}

/// Rational group law on the chart of `H₀`, with the cut `H_Λ` and the
/// action on `V`.
#[derive(Clone, Debug)]
pub struct GroupPresentation {
    pub chart: Chart,
    pub identity: Vec<FieldElem>,
    /// Over two copies of the coordinates, `w_1` and `w_2`.
    pub multiply: Vec<RatFunc>,
    pub factors: (Vars, Vars),
    pub inverse: Vec<RatFunc>,
    pub rho: Vec<RatFunc>,
    /// Over the coordinates followed by the variables of `V`.
    pub theta: Vec<RatFunc>,
    pub lambda: Vec<RatFunc>,
    /// Equations of `H_Λ` inside the chart.
    pub h_ideal: Ideal,
    pub certificates: Vec<Certificate>,
    pub notes: Vec<String>,
}

fn free_of(r: &RatFunc, names: &[String], what: &str) -> Result<RatFunc> {
    if names.iter().any(|n| r.uses(n)) {
        return Err(Error::PresentationIncomplete(format!("{what} depends on the auxiliary generic point")));
    }
    r.embed(&r.vars().without(names))
}

fn copies(w: &Vars, taken: &Vars, k: usize) -> Vars {
    let mut t = taken.clone();
    let mut out = Vec::new();
    for n in w.names() {
        let name = fresh_name(&t, &format!("{n}_{k}"));
        t = t.union(&Vars::new(&[name.as_str()]));
        out.push(name);
    }
    Vars::new(&out)
}

impl GroupPresentation {
    pub fn coordinates(&self) -> &Vars {
        self.chart.coordinates()
    }

    pub fn trivialization(&self) -> &Trivialization {
        self.chart.trivialization()
    }

    pub fn multiply_at(&self, a: &[RatFunc], b: &[RatFunc]) -> Result<Vec<RatFunc>> {
        let mut map = bind(self.factors.0.names(), a);
        map.extend(bind(self.factors.1.names(), b));
        subst_all(&self.multiply, &map)
    }

    pub fn inverse_at(&self, a: &[RatFunc]) -> Result<Vec<RatFunc>> {
        subst_all(&self.inverse, &bind(self.coordinates().names(), a))
    }

    pub fn rho_at(&self, a: &[RatFunc]) -> Result<Vec<RatFunc>> {
        subst_all(&self.rho, &bind(self.coordinates().names(), a))
    }

    /// `θ(a, x)` with `x` replaced by `xs`.
    pub fn theta_at(&self, a: &[RatFunc], xs: &[RatFunc]) -> Result<Vec<RatFunc>> {
        let mut map = bind(self.coordinates().names(), a);
        map.extend(bind(self.trivialization().s.vars().names(), xs));
        subst_all(&self.theta, &map)
    }

    fn identity_rf(&self) -> Vec<RatFunc> {
        self.identity.iter().map(|c| RatFunc::constant(&Vars::empty(), c.clone())).collect()
    }

    /// Whether `H_Λ` is the trivial group.
    pub fn h_is_trivial(&self, cfg: &Config) -> Result<bool> {
        let w = self.coordinates();
        let pt: Vec<Poly> = w
            .names()
            .iter()
            .zip(&self.identity)
            .map(|(n, c)| Ok(Poly::var(w, n)?.sub(&Poly::constant(w, c.clone()))))
            .collect::<Result<_>>()?;
        Ideal::new(w, pt)?.is_subset(&self.h_ideal, cfg)
    }

    pub fn is_verified(&self) -> bool {
        self.certificates.iter().all(|c| c.holds())
    }
}

/// Builds the presentation; `extra` are additional invariants on `(Z, ψ)`
/// joined to those found at degree `d`.
pub fn build_presentation(t: &Trivialization, extra: &[RatFunc], d: u32, cfg: &Config) -> Result<GroupPresentation> {
    let chart = Chart::new(t, cfg)?;
    let field = t.s.field();
    let w = chart.w.clone();
    let wv = var_images(&w);
    let ub: Vec<String> = chart.u.names().to_vec();
    let b = var_images(&chart.u);
    let pair_map = |e: &[RatFunc], e2: &[RatFunc]| {
        let mut m = bind(chart.u.names(), e);
        m.extend(bind(chart.u2.names(), e2));
        m
    };

    let identity_rf = subst_all(&chart.coords, &pair_map(&b, &b))?;
    let identity: Vec<FieldElem> = identity_rf
        .iter()
        .map(|c| c.constant_value().ok_or_else(|| Error::PresentationIncomplete("identity is not a constant".into())))
        .collect::<Result<_>>()?;

    let tr_w = chart.transport(&wv, &b)?;
    let inverse = subst_all(&chart.coords, &pair_map(&tr_w, &b))?
        .iter()
        .map(|r| free_of(r, &ub, "inverse"))
        .collect::<Result<Vec<_>>>()?;

    let taken = t.taken().union(&chart.u).union(&chart.u2).union(&w);
    let (w1, w2, w3) = (copies(&w, &taken, 1), copies(&w, &taken, 2), copies(&w, &taken, 3));
    let inv2 = subst_all(&inverse, &bind(w.names(), &var_images(&w2)))?;
    let a = chart.transport(&inv2, &b)?;
    let c = chart.transport(&var_images(&w1), &b)?;
    let multiply = subst_all(&chart.coords, &pair_map(&a, &c))?
        .iter()
        .map(|r| free_of(r, &ub, "multiplication").and_then(|r| r.embed(&w1.concat(&w2)?)))
        .collect::<Result<Vec<_>>>()?;

    let psi = t.z.phi().components();
    let coords_s: Vec<RatFunc> = chart.coords.iter().map(|c| c.coeff_transform(field, 1)).collect();
    let rho_pair = rho(t, &GroupParam { e: b.clone(), e_prime: tr_w.clone() })?;
    let rho_c = subst_all(&coords_s, &pair_map(&rho_pair.e, &rho_pair.e_prime))?
        .iter()
        .map(|r| free_of(r, &ub, "ρ"))
        .collect::<Result<Vec<_>>>()?;
    let _ = psi;

    let theta_raw = theta_with(t, &t.g, &t.f, &GroupParam { e: b.clone(), e_prime: tr_w.clone() })?;
    let wx = w.concat(t.s.vars())?;
    let theta = theta_raw
        .iter()
        .map(|r| free_of(r, &ub, "θ").and_then(|r| r.embed(&wx)))
        .collect::<Result<Vec<_>>>()?;

    let mut notes = vec!["one chart of W; components of a disconnected group are not separated".to_string()];
    let search = find_rational_invariants(&t.z, d, cfg)?;
    let mut lambda: Vec<RatFunc> = search.invariants.iter().map(|i| i.lambda.clone()).collect();
    for l in extra {
        let inv = verify_invariant(l, &t.z, cfg)?;
        if !inv.holds() {
            return Err(Error::IdentityFails {
                what: "supplied function is not invariant on (Z, ψ)".into(),
                residual: inv.residual.display(field.names()).to_string(),
            });
        }
        if !lambda.contains(&inv.lambda) {
            lambda.push(inv.lambda);
        }
    }
    notes.push(format!("Λ comes from a search of degree <= {d}; the cut H_Λ may be larger than H"));
    let mut h_gens = Vec::new();
    for l in &lambda {
        let l = l.embed(t.z.vars())?;
        let diff = l.substitute(&bind(t.z_names(), &b))?.sub(&l.substitute(&bind(t.z_names(), &tr_w))?);
        let num = diff.numer();
        for q in num.collect_by(&ub).into_values() {
            h_gens.push(q.embed(&w)?);
        }
    }
    let h_ideal = Ideal::new(&w, h_gens)?;

    let mut p = GroupPresentation {
        chart,
        identity,
        multiply,
        factors: (w1.clone(), w2.clone()),
        inverse,
        rho: rho_c,
        theta,
        lambda,
        h_ideal,
        certificates: Vec::new(),
        notes,
    };
    p.certificates = presentation_certificates(&p, &w3, cfg)?;
    let bad: Vec<&str> = p.certificates.iter().filter(|c| !c.holds()).map(|c| c.name.as_str()).collect();
    if !bad.is_empty() {
        return Err(Error::PresentationIncomplete(format!("identities fail: {}", bad.join(", "))));
    }
    Ok(p)
}

fn presentation_certificates(p: &GroupPresentation, w3: &Vars, cfg: &Config) -> Result<Vec<Certificate>> {
    let t = p.trivialization();
    let field = t.s.field();
    let iv = t.s.carrier().ideal();
    let (a, b, c) = (var_images(&p.factors.0), var_images(&p.factors.1), var_images(w3));
    let w = var_images(p.coordinates());
    let e = p.identity_rf();
    let mut out = Vec::new();

    let ab_c = p.multiply_at(&p.multiply_at(&a, &b)?, &c)?;
    let a_bc = p.multiply_at(&a, &p.multiply_at(&b, &c)?)?;
    out.push(Certificate::new("associativity", residuals(&ab_c, &a_bc, None, cfg)?));

    let mut r = residuals(&p.multiply_at(&e, &w)?, &w, None, cfg)?;
    r.extend(residuals(&p.multiply_at(&w, &e)?, &w, None, cfg)?);
    out.push(Certificate::new("identity", r));

    let inv = p.inverse_at(&w)?;
    let mut r = residuals(&p.multiply_at(&w, &inv)?, &e, None, cfg)?;
    r.extend(residuals(&p.multiply_at(&inv, &w)?, &e, None, cfg)?);
    out.push(Certificate::new("inverse", r));

    let mult_s: Vec<RatFunc> = p.multiply.iter().map(|m| m.coeff_transform(field, 1)).collect();
    let mut map = bind(p.factors.0.names(), &p.rho_at(&a)?);
    map.extend(bind(p.factors.1.names(), &p.rho_at(&b)?));
    let rhs = subst_all(&mult_s, &map)?;
    out.push(Certificate::new("ρ is a homomorphism", residuals(&p.rho_at(&p.multiply_at(&a, &b)?)?, &rhs, None, cfg)?));

    let x = var_images(t.s.vars());
    out.push(Certificate::new("θ at the identity", residuals(&p.theta_at(&e, &x)?, &x, Some(iv), cfg)?));

    let lhs = p.theta_at(&p.multiply_at(&a, &b)?, &x)?;
    let rhs = p.theta_at(&a, &p.theta_at(&b, &x)?)?;
    out.push(Certificate::new("θ is an action", residuals(&lhs, &rhs, Some(iv), cfg)?));

    out.push(intertwining_certificate(t, cfg)?);
    out.push(action_equivariance_certificate(p, cfg)?);

    if !p.h_ideal.is_zero_ideal() {
        let rw = p.rho_at(&w)?;
        let mut r = Vec::new();
        for h in p.h_ideal.generators() {
            let hs = RatFunc::from(h.coeff_transform(field, 1)).substitute(&bind(p.coordinates().names(), &rw))?;
            let hs = hs.embed(p.coordinates())?;
            r.push(p.h_ideal.normal_form(hs.numer(), cfg)?);
        }
        out.push(Certificate::new("H_Λ is ρ-stable", r));
    }
    Ok(out)
}

fn action_equivariance_certificate(p: &GroupPresentation, cfg: &Config) -> Result<Certificate> {
    let t = p.trivialization();
    let field = t.s.field();
    let phi = t.s.phi().components();
    let lhs = subst_all(phi, &bind(t.s.vars().names(), &p.theta))?;
    let theta_s: Vec<RatFunc> = p.theta.iter().map(|c| c.coeff_transform(field, 1)).collect();
    let w = var_images(p.coordinates());
    let mut map = bind(p.coordinates().names(), &p.rho_at(&w)?);
    map.extend(bind(t.s.vars().names(), phi));
    let rhs = subst_all(&theta_s, &map)?;
    Ok(Certificate::new("φ∘θ = θ^σ∘(ρ×φ)", residuals(&lhs, &rhs, Some(t.s.carrier().ideal()), cfg)?))
}

/// `φ ∘ θ = θ^σ ∘ (ρ × φ)` on `W × V`, for a σ-variety with the carrier
/// of the presentation.
pub fn verify_action_equivariance(p: &GroupPresentation, s: &SigmaVariety, cfg: &Config) -> Result<Certificate> {
    let t = p.trivialization();
    if s.vars() != t.s.vars() || !s.phi().agrees_with(t.s.phi().components(), cfg)? {
        return Err(Error::Shape("σ-variety differs from the one the presentation was built for".into()));
    }
    action_equivariance_certificate(p, cfg)?.check(t.s.field().names())
}

/// `w ∈ H_Λ` with `σ(w) = ρ(w)`.
pub fn sharp_membership(p: &GroupPresentation, w: &[FieldElem], cfg: &Config) -> Result<bool> {
    let wv = p.coordinates();
    if w.len() != wv.len() {
        return Err(Error::ComponentCount { expected: wv.len(), got: w.len() });
    }
    let _ = cfg;
    for h in p.h_ideal.generators() {
        if !h.eval(w).is_zero() {
            return Ok(false);
        }
    }
    let field = p.trivialization().s.field();
    for (r, x) in p.rho.iter().zip(w) {
        let r = r.embed(wv)?;
        match r.eval(w) {
            Some(v) if v == field.sigma_apply(x, 1) => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// Scalars of a solution set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scalars {
    /// The whole of `k`; `σ` is the identity.
    Field,
    /// `ℚ`, with a coefficient ansatz in the generators.
    Rationals,
}

/// Solutions of `σ(w) = ρ(w)` on the chart: `particular + span(directions)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SharpSolution {
    pub particular: Option<Vec<FieldElem>>,
    pub directions: Vec<Vec<FieldElem>>,
    pub scalars: Scalars,
    pub degree_bound: u32,
    pub notes: Vec<String>,
}

/// `ρ(w) = A w + b`, or `NonAffineRho`.
fn affine_parts(p: &GroupPresentation) -> Result<(Vec<Vec<FieldElem>>, Vec<FieldElem>)> {
    let wv = p.coordinates();
    let m = wv.len();
    let mut a = vec![vec![FieldElem::zero(); m]; m];
    let mut b = vec![FieldElem::zero(); m];
    for (i, r) in p.rho.iter().enumerate() {
        let r = r.embed(wv)?;
        if !r.is_polynomial() || r.numer().degree() > 1 {
            return Err(Error::NonAffineRho);
        }
        let den = r.denom().constant_value().expect("polynomial");
        for (mono, c) in r.numer().terms() {
            let c = c.div(&den);
            match (0..m).find(|&j| mono.exp(j) == 1) {
                Some(j) => a[i][j] = c,
                None => b[i] = c,
            }
        }
    }
    Ok((a, b))
}

/// Solves `σ(w) = ρ(w)` for affine `ρ`. Autonomous: exact over `k`.
/// Otherwise the coordinates are polynomials in the generators of degree
/// `≤ deg_bound` with rational coefficients. Points of `𝒢` over fields
/// beyond `k` are out of reach.
pub fn sharp_solve_affine(p: &GroupPresentation, deg_bound: u32, cfg: &Config) -> Result<SharpSolution> {
    let _ = cfg;
    let (a, b) = affine_parts(p)?;
    let m = a.len();
    let field = p.trivialization().s.field();
    let mut notes = vec!["solutions live on the chart of H₀; use membership to apply the H_Λ cut".to_string()];
    if field.is_autonomous() {
        let mut mat = Matrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                let v = if i == j { a[i][j].sub(&FieldElem::one()) } else { a[i][j].clone() };
                mat.set(i, j, v);
            }
        }
        let rhs: Vec<FieldElem> = b.iter().map(|x| x.neg()).collect();
        let sol = solve_affine(&mat, &rhs);
        notes.push("points over fixed fields larger than k are not enumerated".into());
        return Ok(match sol {
            Some((x, ker)) => SharpSolution {
                particular: Some(x),
                directions: echelon_basis(&ker, m),
                scalars: Scalars::Field,
                degree_bound: deg_bound,
                notes,
            },
            None => SharpSolution { particular: None, directions: Vec::new(), scalars: Scalars::Field, degree_bound: deg_bound, notes },
        });
    }
    let r = field.rank();
    let mut tm = monomials_up_to(r, deg_bound);
    tm.sort_by(|x, y| TermOrder::Grevlex.cmp(y, x));
    // one dummy variable per equation so a column is a single polynomial
    let eq_names: Vec<String> = (0..m).map(|i| format!("_e{i}")).collect();
    let ev = Vars::new(&eq_names);
    let unit = |i: usize| Poly::var(&ev, &eq_names[i]).expect("own variable");
    let mut cols = Vec::new();
    for j in 0..m {
        for beta in &tm {
            let tb = FieldElem::from_poly(QPoly::monomial(beta.clone(), Coeff::one()));
            let mut col = unit(j).scale(&field.sigma_apply(&tb, 1));
            for (i, row) in a.iter().enumerate() {
                col = col.sub(&unit(i).scale(&row[j].mul(&tb)));
            }
            cols.push(col);
        }
    }
    let mut bcol = Poly::zero(&ev);
    for (i, bi) in b.iter().enumerate() {
        bcol = bcol.sub(&unit(i).scale(bi));
    }
    cols.push(bcol);
    let n = cols.len();
    let ker = rational_kernel(&cols, r)?;
    let ech = echelon_basis(&ker, n);
    // the homogenizing column is first in pivot order only if reversed
    let to_point = |v: &[num_rational::BigRational]| -> Vec<FieldElem> {
        (0..m)
            .map(|j| {
                let mut q = QPoly::zero();
                for (k, beta) in tm.iter().enumerate() {
                    let c = &v[j * tm.len() + k];
                    if !num_traits::Zero::is_zero(c) {
                        q.add_term(beta.clone(), c.clone());
                    }
                }
                FieldElem::from_poly(q)
            })
            .collect()
    };
    let mut particular = None;
    let mut directions = Vec::new();
    for v in &ech {
        let h = &v[n - 1];
        if num_traits::Zero::is_zero(h) {
            directions.push(to_point(v));
        } else {
            let scaled: Vec<_> = v.iter().map(|x| x / h).collect();
            particular = Some(to_point(&scaled));
        }
    }
    notes.push(format!("coordinates restricted to polynomials of degree <= {deg_bound} in the generators"));
    Ok(SharpSolution { particular, directions, scalars: Scalars::Rationals, degree_bound: deg_bound, notes })
}
