//! Invariant rational functions and Darboux polynomials of σ-varieties.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::algebra::linalg::{echelon_basis, Matrix};
use crate::algebra::{Coeff, MPoly, Mono, TermOrder};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::field::{FieldElem, QPoly};
use crate::geometry::{cartesian_power, SigmaVariety};
use crate::ideals::Ideal;
use crate::poly::{Poly, RatFunc, Vars};

/// A checked invariant `λ = λ^σ ∘ φ`.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantFunction {
    pub lambda: RatFunc,
    /// Normal form of the cross-multiplied defining identity.
    pub residual: Poly,
    /// `λ ∉ k` modulo `I(V)`.
    pub nonconstant: bool,
}

impl InvariantFunction {
    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }
}

/// `λ^σ ∘ φ` as a rational function on `V`.
pub fn pullback_sigma(lambda: &RatFunc, s: &SigmaVariety, cfg: &Config) -> Result<RatFunc> {
    let l = lambda.embed(s.vars())?.coeff_transform(s.field(), 1);
    let r = l.compose(s.phi().components())?.embed(s.vars())?;
    if s.carrier().ideal().contains(r.denom(), cfg)? {
        return Err(Error::CompositionUndefined("λ^σ∘φ has a denominator vanishing on V".into()));
    }
    Ok(r)
}

/// Checks `num(λ)·den(λ^σ∘φ) − den(λ)·num(λ^σ∘φ) ≡ 0 mod I(V)`.
pub fn verify_invariant(lambda: &RatFunc, s: &SigmaVariety, cfg: &Config) -> Result<InvariantFunction> {
    let lambda = lambda.embed(s.vars())?;
    let ideal = s.carrier().ideal();
    if ideal.contains(lambda.denom(), cfg)? {
        return Err(Error::CompositionUndefined("denominator of λ vanishes on V".into()));
    }
    let r = pullback_sigma(&lambda, s, cfg)?;
    let diff = lambda.numer().mul(r.denom()).sub(&lambda.denom().mul(r.numer()));
    let residual = ideal.normal_form(&diff, cfg)?;
    let nonconstant = !is_constant_mod(&lambda, ideal, cfg)?;
    Ok(InvariantFunction { lambda, residual, nonconstant })
}

fn is_constant_mod(l: &RatFunc, ideal: &Ideal, cfg: &Config) -> Result<bool> {
    let n = ideal.normal_form(l.numer(), cfg)?;
    if n.is_zero() {
        return Ok(true);
    }
    let d = ideal.normal_form(l.denom(), cfg)?;
    let (Some((mn, cn)), Some((md, cd))) = (n.leading(TermOrder::Grevlex), d.leading(TermOrder::Grevlex)) else {
        return Ok(false);
    };
    if mn != md {
        return Ok(false);
    }
    let c = cn.div(cd);
    Ok(n.sub(&d.scale(&c)).is_zero())
}

/// All monomials in `n` variables of total degree `≤ e`.
pub fn monomials_up_to(n: usize, e: u32) -> Vec<Mono> {
    fn rec(n: usize, i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Mono>) {
        if i == n {
            out.push(Mono::from_exps(cur));
            return;
        }
        for k in 0..=left {
            cur[i] = k;
            rec(n, i + 1, left - k, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    rec(n, 0, e, &mut vec![0; n], &mut out);
    out
}

/// Standard monomials of `I` of degree `≤ e`, grevlex-descending.
pub fn standard_monomials(ideal: &Ideal, e: u32, cfg: &Config) -> Result<Vec<Mono>> {
    let n = ideal.vars().len();
    let lms: Vec<Mono> = if ideal.is_zero_ideal() {
        Vec::new()
    } else {
        ideal.reduced(cfg)?.iter().filter_map(|g| g.leading(TermOrder::Grevlex).map(|(m, _)| m.clone())).collect()
    };
    let mut ms: Vec<Mono> = monomials_up_to(n, e).into_iter().filter(|m| !lms.iter().any(|l| l.divides(m))).collect();
    ms.sort_by(|a, b| TermOrder::Grevlex.cmp(b, a));
    Ok(ms)
}

/// `m(φ)·(∏ den φ_i)^e` for every `m` of degree `≤ e`, as polynomials.
struct Cleared<'a> {
    s: &'a SigmaVariety,
    num_pows: Vec<Vec<Poly>>,
    den_pows: Vec<Vec<Poly>>,
}

impl<'a> Cleared<'a> {
    fn new(s: &'a SigmaVariety) -> Self {
        let v = s.vars();
        let comps = s.phi().components();
        Cleared {
            s,
            num_pows: comps.iter().map(|c| vec![Poly::one(v), c.numer().clone()]).collect(),
            den_pows: comps.iter().map(|c| vec![Poly::one(v), c.denom().clone()]).collect(),
        }
    }

    fn pow(cache: &mut Vec<Poly>, k: usize) -> Poly {
        while cache.len() <= k {
            let next = cache[cache.len() - 1].mul(&cache[1]);
            cache.push(next);
        }
        cache[k].clone()
    }

    fn clearing(&mut self, e: u32) -> Poly {
        let mut b = Poly::one(self.s.vars());
        for i in 0..self.den_pows.len() {
            b = b.mul(&Self::pow(&mut self.den_pows[i], e as usize));
        }
        b
    }

    fn image(&mut self, m: &Mono, e: u32) -> Poly {
        let mut out = Poly::one(self.s.vars());
        for i in 0..self.num_pows.len() {
            let k = m.exp(i);
            if k > 0 {
                out = out.mul(&Self::pow(&mut self.num_pows[i], k as usize));
            }
            if e > k {
                out = out.mul(&Self::pow(&mut self.den_pows[i], (e - k) as usize));
            }
        }
        out
    }
}

fn mono_poly(vars: &Vars, m: &Mono) -> Poly {
    Poly::from_body(vars, MPoly::monomial(m.clone(), FieldElem::one()))
}

/// Matrix whose columns are the coefficient vectors of `cols`.
fn column_matrix(cols: &[Poly]) -> Matrix<FieldElem> {
    let mut rows: BTreeMap<Mono, usize> = BTreeMap::new();
    for c in cols {
        for (m, _) in c.terms() {
            let k = rows.len();
            rows.entry(m.clone()).or_insert(k);
        }
    }
    let mut mat = Matrix::zeros(rows.len(), cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (m, v) in c.terms() {
            mat.set(rows[m], j, v.clone());
        }
    }
    mat
}

/// Kernel of the linear map sending monomial `monos[j]` to `cols[j]`,
/// returned as polynomials in reduced echelon form (leading monomials are
/// the pivots), sorted by increasing leading monomial.
fn kernel_polys(vars: &Vars, monos: &[Mono], cols: &[Poly]) -> Vec<Poly> {
    let mat = column_matrix(cols);
    let ker = if mat.rows() == 0 {
        (0..monos.len())
            .map(|j| (0..monos.len()).map(|i| if i == j { FieldElem::one() } else { FieldElem::zero() }).collect())
            .collect()
    } else {
        mat.kernel()
    };
    let ech = echelon_basis(&ker, monos.len());
    let mut out: Vec<Poly> = ech
        .into_iter()
        .map(|v| {
            let mut body = MPoly::zero();
            for (m, c) in monos.iter().zip(v) {
                body.add_term(m.clone(), c);
            }
            Poly::from_body(vars, body)
        })
        .collect();
    out.reverse();
    out
}

/// Basis of the polynomial invariants of degree `≤ d`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialInvariants {
    pub degree: u32,
    /// Basis vectors, constants first.
    pub basis: Vec<Poly>,
    /// Over `k` in the autonomous case. Otherwise a basis over `ℚ` of the
    /// solutions whose coefficients are polynomials in the generators of
    /// degree `≤ coeff_degree`.
    pub coeff_degree: Option<u32>,
    /// False when the coefficient ansatz may have missed solutions.
    pub complete: bool,
}

pub fn find_polynomial_invariants(s: &SigmaVariety, d: u32, cfg: &Config) -> Result<PolynomialInvariants> {
    let ideal = s.carrier().ideal();
    let vars = s.vars().clone();
    let monos = standard_monomials(ideal, d, cfg)?;
    let mut cl = Cleared::new(s);
    let b = cl.clearing(d);
    if s.is_autonomous() {
        let mut cols = Vec::with_capacity(monos.len());
        for m in &monos {
            let lhs = mono_poly(&vars, m).mul(&b);
            let rhs = cl.image(m, d);
            cols.push(ideal.normal_form(&lhs.sub(&rhs), cfg)?);
        }
        let basis = kernel_polys(&vars, &monos, &cols);
        return Ok(PolynomialInvariants { degree: d, basis, coeff_degree: None, complete: true });
    }
    let dd = cfg.coeff_degree.unwrap_or(2 * d + 2);
    let field = s.field();
    let r = field.rank();
    let tmonos = {
        let mut t = monomials_up_to(r, dd);
        t.sort_by(|a, b| TermOrder::Grevlex.cmp(b, a));
        t
    };
    // column for unknown c_{m,β}: t^β·NF(m·B) − σ(t^β)·NF(m(φ)·B)
    let mut cols: Vec<Poly> = Vec::with_capacity(monos.len() * tmonos.len());
    for m in &monos {
        let lhs = ideal.normal_form(&mono_poly(&vars, m).mul(&b), cfg)?;
        let rhs = ideal.normal_form(&cl.image(m, d), cfg)?;
        for beta in &tmonos {
            let tb = FieldElem::from_poly(QPoly::monomial(beta.clone(), Coeff::one()));
            let stb = field.sigma_apply(&tb, 1);
            cols.push(lhs.scale(&tb).sub(&rhs.scale(&stb)));
        }
    }
    let ker = rational_kernel(&cols, r)?;
    let ncols = cols.len();
    let ech = echelon_basis(&ker, ncols);
    let mut basis: Vec<Poly> = Vec::new();
    for v in ech.iter().rev() {
        let mut body = MPoly::zero();
        for (mi, m) in monos.iter().enumerate() {
            let mut coeff = QPoly::zero();
            for (bi, beta) in tmonos.iter().enumerate() {
                let c = &v[mi * tmonos.len() + bi];
                if !Zero::is_zero(c) {
                    coeff.add_term(beta.clone(), c.clone());
                }
            }
            if !coeff.is_zero() {
                body.add_term(m.clone(), FieldElem::from_poly(coeff));
            }
        }
        basis.push(primitive_over_q(&Poly::from_body(&vars, body)));
    }
    Ok(PolynomialInvariants { degree: d, basis, coeff_degree: Some(dd), complete: false })
}

/// Kernel over `ℚ` of the columns, each a polynomial whose coefficients lie
/// in `ℚ(t)`: every coefficient row is cleared of denominators and split
/// by monomials in the generators.
pub(crate) fn rational_kernel(cols: &[Poly], rank: usize) -> Result<Vec<Vec<BigRational>>> {
    let mut by_mono: BTreeMap<Mono, Vec<(usize, FieldElem)>> = BTreeMap::new();
    for (j, c) in cols.iter().enumerate() {
        for (m, v) in c.terms() {
            by_mono.entry(m.clone()).or_default().push((j, v.clone()));
        }
    }
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for entries in by_mono.values() {
        let mut l = QPoly::one();
        for (_, v) in entries {
            let g = l.gcd(v.denom());
            l = (&l * v.denom()).div_exact(&g).expect("gcd divides");
        }
        let mut split: BTreeMap<Mono, Vec<BigRational>> = BTreeMap::new();
        for (j, v) in entries {
            let scale = l.div_exact(v.denom()).expect("lcm is a multiple");
            let num = v.numer() * &scale;
            for (tm, q) in num.terms() {
                split.entry(tm.clone()).or_insert_with(|| vec![<BigRational as Zero>::zero(); cols.len()])[*j] += q;
            }
        }
        rows.extend(split.into_values());
    }
    let _ = rank;
    if rows.is_empty() {
        return Ok((0..cols.len())
            .map(|j| (0..cols.len()).map(|i| if i == j { BigRational::from_integer(1.into()) } else { <BigRational as Zero>::zero() }).collect())
            .collect());
    }
    Ok(Matrix::from_rows(rows, cols.len()).kernel())
}

/// Scales a polynomial with coefficients in `ℚ[t]` to have coprime integer
/// coefficients and a positive leading coefficient.
fn primitive_over_q(p: &Poly) -> Poly {
    use num_bigint::BigInt;
    use num_integer::Integer;
    let mut den = BigInt::from(1);
    let mut num = BigInt::from(0);
    for (_, c) in p.terms() {
        for (_, q) in c.numer().terms() {
            den = den.lcm(q.denom());
            num = num.gcd(q.numer());
        }
    }
    if num.is_zero() {
        return p.clone();
    }
    let mut f = BigRational::new(den, num);
    if let Some((_, lc)) = p.leading(TermOrder::Grevlex) {
        if let Some((_, q)) = lc.numer().leading(TermOrder::Grevlex) {
            if q.is_negative() {
                f = -f;
            }
        }
    }
    p.scale(&FieldElem::from_rational(f))
}

/// `P^σ∘φ · B ≡ C·P mod I(V)` with `B` the stored clearing factor.
#[derive(Clone, Debug, PartialEq)]
pub struct DarbouxPair {
    pub p: Poly,
    pub cofactor: Poly,
    pub clearing: Poly,
}

impl DarbouxPair {
    /// Normal form of `P^σ(φ)·B − C·P`; zero for a valid pair.
    pub fn residual(&self, s: &SigmaVariety, cfg: &Config) -> Result<Poly> {
        let img = pullback_sigma(&RatFunc::from(self.p.clone()), s, cfg)?;
        let lhs = img.numer().mul(&self.clearing);
        let cleared = lhs.div_exact(img.denom()).ok_or_else(|| {
            Error::IdentityFails { what: "clearing factor".into(), residual: format!("{:?}", img.denom()) }
        })?;
        s.carrier().ideal().normal_form(&cleared.sub(&self.cofactor.mul(&self.p)), cfg)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DarbouxSearch {
    pub degree: u32,
    pub cofactor_degree: u32,
    pub pairs: Vec<DarbouxPair>,
    pub complete: bool,
    /// Some chart hit the pair budget.
    pub budget_exhausted: bool,
    pub notes: Vec<String>,
}

/// Darboux pairs with `deg P ≤ d`, `deg C ≤ c`. A polynomial of degree `e`
/// is cleared with `(∏ den φ_i)^e`.
pub fn find_darboux_pairs(s: &SigmaVariety, d: u32, c: u32, cfg: &Config) -> Result<DarbouxSearch> {
    let mut out = DarbouxSearch { degree: d, cofactor_degree: c, pairs: Vec::new(), complete: true, budget_exhausted: false, notes: Vec::new() };
    if !s.is_autonomous() {
        out.complete = false;
        out.notes.push("Darboux search over a non-trivial σ is not implemented; no pairs reported".into());
        return Ok(out);
    }
    let ideal = s.carrier().ideal().clone();
    let vars = s.vars().clone();
    let mut cl = Cleared::new(s);
    let cof_monos = standard_monomials(&ideal, c, cfg)?;
    for e in 1..=d {
        let monos = standard_monomials(&ideal, e, cfg)?;
        let b = cl.clearing(e);
        let images: Vec<Poly> =
            monos.iter().map(|m| ideal.normal_form(&cl.image(m, e), cfg)).collect::<Result<_>>()?;
        let mut cofactors: Vec<Poly> = Vec::new();
        for (pivot, pm) in monos.iter().enumerate() {
            if pm.degree() != e {
                continue;
            }
            match chart_cofactors(&vars, &ideal, &monos, &images, &cof_monos, pivot, cfg) {
                Ok((cs, complete)) => {
                    if !complete {
                        out.complete = false;
                    }
                    for cf in cs {
                        if !cofactors.contains(&cf) {
                            cofactors.push(cf);
                        }
                    }
                }
                Err(Error::ResourceLimit { budget }) => {
                    out.complete = false;
                    out.budget_exhausted = true;
                    out.notes.push(format!("degree {e}, chart {pivot}: cofactor ideal exceeded {budget} pairs"));
                }
                Err(other) => return Err(other),
            }
        }
        for cf in cofactors {
            let cols: Vec<Poly> = monos
                .iter()
                .zip(&images)
                .map(|(m, img)| ideal.normal_form(&img.sub(&cf.mul(&mono_poly(&vars, m))), cfg))
                .collect::<Result<_>>()?;
            for p in kernel_polys(&vars, &monos, &cols) {
                if p.degree() != e || p.is_constant() {
                    continue;
                }
                let pair = DarbouxPair { p, cofactor: cf.clone(), clearing: b.clone() };
                if pair.residual(s, cfg)?.is_zero() {
                    out.pairs.push(pair);
                }
            }
        }
    }
    Ok(out)
}

/// Cofactors admitted in the chart where the coefficient of `monos[pivot]`
/// is one and earlier coefficients vanish.
fn chart_cofactors(
    vars: &Vars,
    ideal: &Ideal,
    monos: &[Mono],
    images: &[Poly],
    cof_monos: &[Mono],
    pivot: usize,
    cfg: &Config,
) -> Result<(Vec<Poly>, bool)> {
    let a_names: Vec<String> = (pivot + 1..monos.len()).map(|j| format!("_a{j}")).collect();
    let c_names: Vec<String> = (0..cof_monos.len()).map(|j| format!("_c{j}")).collect();
    let mut unknown_names = a_names.clone();
    unknown_names.extend(c_names.iter().cloned());
    let uv = Vars::new(&unknown_names);
    // P and C as polynomials in x whose coefficients are linear forms in
    // the unknowns; the identity is collected by x-monomial.
    let all = vars.concat(&uv)?;
    let mut p = mono_poly(vars, &monos[pivot]).embed(&all)?;
    let mut p_img = images[pivot].embed(&all)?;
    for (k, j) in (pivot + 1..monos.len()).enumerate() {
        let a = Poly::var(&all, &a_names[k])?;
        p = p.add(&a.mul(&mono_poly(vars, &monos[j]).embed(&all)?));
        p_img = p_img.add(&a.mul(&images[j].embed(&all)?));
    }
    let mut cf = Poly::zero(&all);
    for (k, m) in cof_monos.iter().enumerate() {
        cf = cf.add(&Poly::var(&all, &c_names[k])?.mul(&mono_poly(vars, m).embed(&all)?));
    }
    let lhs = p_img.sub(&cf.mul(&p));
    // reduce modulo I(V) in the x variables only
    let reduced = if ideal.is_zero_ideal() {
        lhs
    } else {
        let lifted = Ideal::new(&all, ideal.generators().to_vec())?;
        lifted.normal_form_in(&lhs, TermOrder::Block(vars.len()), cfg)?
    };
    let eqs: Vec<Poly> =
        reduced.collect_by(vars.names()).into_values().map(|q| q.embed(&uv)).collect::<Result<_>>()?;
    let sys = Ideal::new(&uv, eqs)?;
    let j = sys.eliminate(&a_names, cfg)?;
    let pts = j.rational_points(cfg)?;
    let cvars = j.vars().clone();
    let cofactors = pts
        .points
        .iter()
        .map(|pt| {
            let mut body = MPoly::zero();
            for (k, m) in cof_monos.iter().enumerate() {
                let idx = cvars.index_of(&c_names[k]).expect("cofactor unknown");
                body.add_term(m.clone(), pt[idx].clone());
            }
            Poly::from_body(vars, body)
        })
        .collect();
    Ok((cofactors, pts.complete))
}

fn lead_cmp(a: &Poly, b: &Poly) -> std::cmp::Ordering {
    match (a.leading(TermOrder::Grevlex), b.leading(TermOrder::Grevlex)) {
        (Some((x, _)), Some((y, _))) => TermOrder::Grevlex.cmp(x, y),
        _ => std::cmp::Ordering::Equal,
    }
}

/// Output of the two-stage rational invariant search.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalInvariantSearch {
    pub degree: u32,
    /// Verified nonconstant invariants: polynomial ones first, then ratios
    /// of Darboux polynomials.
    pub invariants: Vec<InvariantFunction>,
    /// Whether the polynomial stage is exhaustive at this degree.
    pub polynomial_stage_complete: bool,
    pub darboux_complete: bool,
    pub budget_exhausted: bool,
    pub notes: Vec<String>,
}

impl RationalInvariantSearch {
    /// The rational stage never claims completeness.
    pub fn complete(&self) -> bool {
        false
    }
}

/// Cofactor degree bound used when none is supplied: one less than the
/// largest degree of a cleared image of a monomial of degree `≤ d`.
pub fn default_cofactor_bound(s: &SigmaVariety, d: u32) -> u32 {
    let mut cl = Cleared::new(s);
    let n = s.vars().len();
    let mut best = 0u32;
    for e in 1..=d {
        for m in monomials_up_to(n, e) {
            if m.degree() == e {
                best = best.max(cl.image(&m, e).degree().saturating_sub(1));
            }
        }
    }
    best
}

pub fn find_rational_invariants(s: &SigmaVariety, d: u32, cfg: &Config) -> Result<RationalInvariantSearch> {
    find_rational_invariants_with(s, d, default_cofactor_bound(s, d), cfg)
}

pub fn find_rational_invariants_with(
    s: &SigmaVariety,
    d: u32,
    c: u32,
    cfg: &Config,
) -> Result<RationalInvariantSearch> {
    let poly = find_polynomial_invariants(s, d, cfg)?;
    let mut found: Vec<InvariantFunction> = Vec::new();
    for p in &poly.basis {
        if p.is_constant() {
            continue;
        }
        let inv = verify_invariant(&RatFunc::from(p.clone()), s, cfg)?;
        if inv.holds() && inv.nonconstant && !found.iter().any(|f| f.lambda == inv.lambda) {
            found.push(inv);
        }
    }
    let dar = find_darboux_pairs(s, d, c, cfg)?;
    let pairs = &dar.pairs;
    for i in 0..pairs.len() {
        for j in i + 1..pairs.len() {
            let (a, b) = (&pairs[i], &pairs[j]);
            if a.cofactor.mul(&b.clearing) != b.cofactor.mul(&a.clearing) {
                continue;
            }
            let (a, b) = if lead_cmp(&a.p, &b.p).is_lt() { (b, a) } else { (a, b) };
            let ratio = RatFunc::new(a.p.clone(), b.p.clone())?;
            if ratio.height() > d {
                continue;
            }
            let inv = verify_invariant(&ratio, s, cfg)?;
            if inv.holds() && inv.nonconstant && !found.iter().any(|f| f.lambda == inv.lambda) {
                found.push(inv);
            }
        }
    }
    let mut notes = dar.notes.clone();
    if !poly.complete {
        notes.push(format!(
            "polynomial stage used coefficients of degree <= {} in the field generators",
            poly.coeff_degree.unwrap_or(0)
        ));
    }
    notes.push("ratios of Darboux polynomials are a sound but incomplete search".into());
    Ok(RationalInvariantSearch {
        degree: d,
        invariants: found,
        polynomial_stage_complete: poly.complete,
        darboux_complete: dar.complete,
        budget_exhausted: dar.budget_exhausted,
        notes,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProfileEntry {
    pub n: usize,
    pub invariants: Vec<InvariantFunction>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalityProfile {
    pub degree: u32,
    pub n_max: usize,
    /// One entry per power searched; the search stops at the first hit.
    pub entries: Vec<ProfileEntry>,
    pub first_hit: Option<usize>,
}

impl OrthogonalityProfile {
    /// Reading of the profile in terms of weak orthogonality.
    pub fn reading(&self) -> String {
        match self.first_hit {
            Some(1) => "nonconstant invariant on V itself: not weakly orthogonal to the fixed field".into(),
            Some(n) => format!(
                "no invariant of degree <= {} on V^m for m < {n}; nonconstant invariant on V^{n}",
                self.degree
            ),
            None => format!(
                "none found up to degree {} on V^1..V^{}; consistent with weak orthogonality, not a proof",
                self.degree, self.n_max
            ),
        }
    }
}

pub fn orthogonality_profile(s: &SigmaVariety, d: u32, n_max: usize, cfg: &Config) -> Result<OrthogonalityProfile> {
    let mut entries = Vec::new();
    let mut first_hit = None;
    for n in 1..=n_max {
        let p = cartesian_power(s, n)?;
        let r = find_rational_invariants(&p, d, cfg)?;
        let hit = !r.invariants.is_empty();
        entries.push(ProfileEntry { n, invariants: r.invariants });
        if hit {
            first_hit = Some(n);
            break;
        }
    }
    Ok(OrthogonalityProfile { degree: d, n_max, entries, first_hit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_poly, parse_ratfunc};
    use crate::field::DifferenceField;
    use crate::geometry::AffineVariety;

    fn shift() -> DifferenceField {
        let t = FieldElem::generator(0);
        let one = FieldElem::one();
        DifferenceField::new(vec!["t".into()], vec![t.add(&one)], vec![t.sub(&one)]).unwrap()
    }

    fn sv(field: &DifferenceField, vars: &[&str], comps: &[&str]) -> SigmaVariety {
        let v = Vars::new(vars);
        let c = comps.iter().map(|s| parse_ratfunc(s, &v, field).unwrap()).collect();
        SigmaVariety::new(field, AffineVariety::affine_space(&v), c, &Config::default()).unwrap()
    }

    fn polys(s: &SigmaVariety, texts: &[&str]) -> Vec<Poly> {
        texts.iter().map(|t| parse_poly(t, s.vars(), s.field()).unwrap()).collect()
    }

    #[test]
    fn verify_examples() {
        let cfg = Config::default();
        let f = shift();
        let s = sv(&f, &["x"], &["x + t"]);
        let l = parse_ratfunc("x - t*(t-1)/2", s.vars(), &f).unwrap();
        let r = verify_invariant(&l, &s, &cfg).unwrap();
        assert!(r.holds() && r.nonconstant);
        let q = DifferenceField::rationals();
        let s = sv(&q, &["x"], &["x + 1"]);
        assert!(!verify_invariant(&parse_ratfunc("x", s.vars(), &q).unwrap(), &s, &cfg).unwrap().holds());
        let three = verify_invariant(&parse_ratfunc("3", s.vars(), &q).unwrap(), &s, &cfg).unwrap();
        assert!(three.holds() && !three.nonconstant);
    }

    #[test]
    fn polynomial_invariant_examples() {
        let cfg = Config::default();
        let q = DifferenceField::rationals();
        let s = sv(&q, &["x"], &["2*x"]);
        assert_eq!(find_polynomial_invariants(&s, 2, &cfg).unwrap().basis, polys(&s, &["1"]));
        let s = sv(&q, &["x", "y"], &["x + 1", "y + 1"]);
        assert_eq!(find_polynomial_invariants(&s, 1, &cfg).unwrap().basis, polys(&s, &["1", "x - y"]));
        let f = shift();
        let s = sv(&f, &["x"], &["x + t"]);
        let r = find_polynomial_invariants(&s, 1, &cfg).unwrap();
        assert_eq!(r.basis, polys(&s, &["1", "2*x - t^2 + t"]));
    }

    #[test]
    fn darboux_examples() {
        let cfg = Config::default();
        let q = DifferenceField::rationals();
        let s = sv(&q, &["x"], &["2*x"]);
        let r = find_darboux_pairs(&s, 1, 0, &cfg).unwrap();
        assert_eq!(r.pairs.len(), 1);
        assert_eq!(r.pairs[0].p, polys(&s, &["x"])[0]);
        assert_eq!(r.pairs[0].cofactor, polys(&s, &["2"])[0]);
        let s = sv(&q, &["x"], &["x + 1"]);
        let r = find_darboux_pairs(&s, 3, 1, &cfg).unwrap();
        assert!(r.pairs.is_empty() && r.complete);
        let s = sv(&q, &["x"], &["x/(x + 1)"]);
        let r = find_darboux_pairs(&s, 1, 0, &cfg).unwrap();
        assert_eq!(r.pairs.len(), 1);
        assert_eq!(r.pairs[0].p, polys(&s, &["x"])[0]);
        assert!(r.pairs[0].cofactor.is_one());
    }

    #[test]
    fn rational_invariant_examples() {
        let cfg = Config::default();
        let q = DifferenceField::rationals();
        assert!(find_rational_invariants(&sv(&q, &["x"], &["2*x"]), 2, &cfg).unwrap().invariants.is_empty());
        assert!(find_rational_invariants(&sv(&q, &["x"], &["x + 1"]), 3, &cfg).unwrap().invariants.is_empty());
        let s = sv(&q, &["x", "y"], &["2*x", "2*y"]);
        let r = find_rational_invariants(&s, 1, &cfg).unwrap();
        let xy = parse_ratfunc("x/y", s.vars(), &q).unwrap();
        assert!(r.invariants.iter().any(|i| i.lambda == xy));
    }

    #[test]
    fn profile_examples() {
        let cfg = Config::default();
        let q = DifferenceField::rationals();
        let p = orthogonality_profile(&sv(&q, &["x"], &["2*x"]), 2, 4, &cfg).unwrap();
        assert_eq!(p.first_hit, Some(2));
        let p = orthogonality_profile(&sv(&q, &["x"], &["x + 1"]), 2, 4, &cfg).unwrap();
        assert_eq!(p.first_hit, Some(2));
        let p = orthogonality_profile(&sv(&shift(), &["x"], &["x + t"]), 1, 4, &cfg).unwrap();
        assert_eq!(p.first_hit, Some(1));
    }
}
