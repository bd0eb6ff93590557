//! Translational witnesses, orbit density, invariant subvarieties and
//! power bounds.

use crate::algebra::linalg::{echelon_basis, Matrix};
use crate::algebra::{Coeff, MPoly};
use crate::binding::GroupPresentation;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::geometry::{is_invariant_subvariety, AffineVariety, SigmaVariety};
use crate::ideals::Ideal;
use crate::invariants::{
    default_cofactor_bound, find_darboux_pairs, find_rational_invariants_with, orthogonality_profile,
    standard_monomials, verify_invariant, InvariantFunction, OrthogonalityProfile,
};
use crate::poly::{Poly, RatFunc, Vars};

/// A group element `w` with `θ_w = φ` on `V`.
#[derive(Clone, Debug, PartialEq)]
pub struct TranslationalWitness {
    pub w: Vec<FieldElem>,
    /// Residuals of `θ_w − φ` modulo `I(V)`; all zero.
    pub residuals: Vec<Poly>,
}

/// Solves `θ_w = φ` in the coordinates of the presentation.
pub fn translational_witness(s: &SigmaVariety, p: &GroupPresentation, cfg: &Config) -> Result<TranslationalWitness> {
    if !s.is_autonomous() {
        return Err(Error::Unsupported("translational witnesses need an autonomous σ-variety".into()));
    }
    let x = s.vars();
    if p.trivialization().s().vars() != x {
        return Err(Error::Shape("presentation is for a different carrier".into()));
    }
    let wv = p.coordinates().clone();
    let all = wv.concat(x)?;
    let mut eqs: Vec<Poly> = p.h_ideal.generators().to_vec();
    for (th, ph) in p.theta.iter().zip(s.phi().components()) {
        let (th, ph) = (th.embed(&all)?, ph.embed(&all)?);
        let diff = th.numer().mul(ph.denom()).sub(&ph.numer().mul(th.denom()));
        let diff = s.carrier().ideal().embed(&all)?.normal_form(&diff, cfg)?;
        for q in diff.collect_by(x.names()).into_values() {
            eqs.push(q.embed(&wv)?);
        }
    }
    let pts = Ideal::new(&wv, eqs)?.rational_points(cfg)?;
    for w in &pts.points {
        let wr: Vec<RatFunc> = w.iter().map(|c| RatFunc::constant(&Vars::empty(), c.clone())).collect();
        let xs: Vec<RatFunc> = x.names().iter().map(|n| RatFunc::var(x, n)).collect::<Result<_>>()?;
        let Ok(theta_w) = p.theta_at(&wr, &xs) else { continue };
        let res = s.phi().residuals_against(&theta_w, cfg)?;
        if res.iter().all(|r| r.is_zero()) {
            return Ok(TranslationalWitness { w: w.clone(), residuals: res });
        }
    }
    if pts.complete {
        Err(Error::NotFound("θ_w = φ has no solution with coordinates in k".into()))
    } else {
        Err(Error::NotFound("θ_w = φ has no solution found in k; the search was incomplete".into()))
    }
}

/// Density of an orbit up to a degree bound.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitCertificate {
    pub point: Vec<FieldElem>,
    pub iterations: usize,
    pub degree: u32,
    pub orbit: Vec<Vec<FieldElem>>,
    /// Dimension of the degree-`≤ d` slice of `k[V]`.
    pub slice_dim: usize,
    /// Rank after each orbit point.
    pub rank_table: Vec<usize>,
    pub dense: bool,
    /// Forms of degree `≤ d` vanishing on the orbit when not dense.
    pub vanishing: Vec<Poly>,
}

/// Evaluates the standard monomials of degree `≤ d` along `a, φ(a), …,
/// φ^N(a)`.
pub fn zdo_orbit_density(s: &SigmaVariety, a: &[FieldElem], d: u32, n: usize, cfg: &Config) -> Result<OrbitCertificate> {
    if !s.is_autonomous() {
        return Err(Error::Unsupported("orbits are followed for autonomous σ-varieties only".into()));
    }
    if !s.carrier().contains_point(a)? {
        return Err(Error::Shape("base point is not on V".into()));
    }
    let mut orbit = vec![a.to_vec()];
    for i in 0..n {
        let next = s.phi().eval(&orbit[i]).ok_or(Error::OrbitLeavesDomain(i))?;
        orbit.push(next);
    }
    let monos = standard_monomials(s.carrier().ideal(), d, cfg)?;
    let vars = s.vars();
    let mut rank_table = Vec::with_capacity(orbit.len());
    let rows: Vec<Vec<FieldElem>> = orbit
        .iter()
        .map(|p| monos.iter().map(|m| MPoly::monomial(m.clone(), FieldElem::one()).eval(p)).collect())
        .collect();
    for k in 1..=rows.len() {
        rank_table.push(Matrix::from_rows(rows[..k].to_vec(), monos.len()).rank());
    }
    let mat = Matrix::from_rows(rows, monos.len());
    let ker = echelon_basis(&mat.kernel(), monos.len());
    let vanishing: Vec<Poly> = ker
        .iter()
        .rev()
        .map(|v| {
            let mut body = MPoly::zero();
            for (m, c) in monos.iter().zip(v) {
                body.add_term(m.clone(), c.clone());
            }
            Poly::from_body(vars, body)
        })
        .collect();
    let slice_dim = monos.len();
    let dense = rank_table.last().copied() == Some(slice_dim);
    Ok(OrbitCertificate { point: a.to_vec(), iterations: n, degree: d, orbit, slice_dim, rank_table, dense, vanishing })
}

/// Provenance of an invariant subvariety in a report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Darboux,
    FixedPoint,
    LevelSet(i64),
}

#[derive(Clone, Debug)]
pub struct InvariantSubvariety {
    pub variety: AffineVariety,
    pub source: Source,
    pub maximal: bool,
}

/// What the enumeration says about finiteness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DmeVerdict {
    /// Distinct level sets of an invariant function were exhibited.
    InfinitelyMany,
    /// The list is finite at these bounds; no claim is made beyond them.
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct DmeReport {
    pub degree: u32,
    pub cofactor_degree: u32,
    /// Hypersurfaces and points, deduplicated by ideal.
    pub subvarieties: Vec<InvariantSubvariety>,
    pub invariant: Option<InvariantFunction>,
    pub level_sets: usize,
    pub darboux_complete: bool,
    pub budget_exhausted: bool,
    pub points_complete: bool,
    pub polynomial_stage_complete: bool,
    pub verdict: DmeVerdict,
    pub notes: Vec<String>,
}

impl DmeReport {
    pub fn maximal(&self) -> impl Iterator<Item = &InvariantSubvariety> {
        self.subvarieties.iter().filter(|s| s.maximal)
    }
}

/// Squarefree part: `P / gcd(P, ∂P/∂x_1, …)`.
fn squarefree(p: &Poly) -> Poly {
    let mut g = p.clone();
    for n in p.vars().names() {
        g = g.gcd(&p.derivative(n));
    }
    if g.is_constant() {
        return p.monic();
    }
    p.div_exact(&g).expect("gcd divides").monic()
}

fn push_unique(
    out: &mut Vec<InvariantSubvariety>,
    x: AffineVariety,
    source: Source,
    cfg: &Config,
) -> Result<bool> {
    for y in out.iter() {
        if y.variety.ideal().equals(x.ideal(), cfg)? {
            return Ok(false);
        }
    }
    out.push(InvariantSubvariety { variety: x, source, maximal: false });
    Ok(true)
}

/// Invariant subvarieties of `(V, φ)` found with degree `≤ d`, cofactor
/// degree `≤ c`, and up to `n_pts` level sets of an invariant function.
pub fn dme_enumerate(s: &SigmaVariety, d: u32, c: u32, n_pts: usize, cfg: &Config) -> Result<DmeReport> {
    let v = s.carrier();
    let vars = s.vars();
    let mut notes = Vec::new();
    let mut subs: Vec<InvariantSubvariety> = Vec::new();

    let dar = find_darboux_pairs(s, d, c, cfg)?;
    notes.extend(dar.notes.iter().cloned());
    for pair in &dar.pairs {
        let p = squarefree(&pair.p);
        let Ok(x) = AffineVariety::from_ideal(v.ideal().with(vec![p])?, cfg) else { continue };
        if x.ideal().equals(v.ideal(), cfg)? {
            continue;
        }
        if is_invariant_subvariety(&x, s, cfg)? {
            push_unique(&mut subs, x, Source::Darboux, cfg)?;
        }
    }

    let points_complete;
    if s.is_autonomous() {
        let mut eqs = v.ideal().generators().to_vec();
        let mut dens = Poly::one(vars);
        for (n, comp) in vars.names().iter().zip(s.phi().components()) {
            eqs.push(comp.numer().sub(&comp.denom().mul(&Poly::var(vars, n)?)));
            dens = dens.mul(comp.denom());
        }
        let fixed = Ideal::new(vars, eqs)?.saturate(&dens, cfg)?;
        let pts = fixed.rational_points(cfg)?;
        points_complete = pts.complete;
        for a in &pts.points {
            let gens: Vec<Poly> = vars
                .names()
                .iter()
                .zip(a)
                .map(|(n, c)| Ok(Poly::var(vars, n)?.sub(&Poly::constant(vars, c.clone()))))
                .collect::<Result<_>>()?;
            let x = AffineVariety::new(vars, gens, cfg)?;
            if s.phi().eval(a).as_deref() == Some(a) {
                push_unique(&mut subs, x, Source::FixedPoint, cfg)?;
            }
        }
    } else {
        points_complete = false;
        notes.push("invariant points are only searched for autonomous σ-varieties".into());
    }

    let rat = find_rational_invariants_with(s, d, c, cfg)?;
    let invariant = rat.invariants.first().cloned();
    let mut level_sets = 0;
    if let Some(inv) = &invariant {
        let (p1, p2) = (inv.lambda.numer(), inv.lambda.denom());
        for l0 in 0..n_pts as i64 {
            let h = p1.sub(&p2.scale(&FieldElem::from_int(l0)));
            let Ok(x) = AffineVariety::from_ideal(v.ideal().with(vec![h])?, cfg) else { continue };
            if is_invariant_subvariety(&x, s, cfg)? && push_unique(&mut subs, x, Source::LevelSet(l0), cfg)? {
                level_sets += 1;
            }
        }
    }

    // maximality within the list: not strictly inside another entry
    let n = subs.len();
    for i in 0..n {
        let mut maximal = true;
        for j in 0..n {
            if i != j && subs[j].variety.ideal().is_subset(subs[i].variety.ideal(), cfg)? {
                maximal = false;
                break;
            }
        }
        subs[i].maximal = maximal;
    }

    let verdict = if level_sets >= 2 { DmeVerdict::InfinitelyMany } else { DmeVerdict::Inconclusive };
    if verdict == DmeVerdict::Inconclusive {
        notes.push(format!(
            "the list is complete only up to degree {d} and cofactor degree {c}; finiteness is not claimed"
        ));
    }
    Ok(DmeReport {
        degree: d,
        cofactor_degree: c,
        subvarieties: subs,
        invariant,
        level_sets,
        darboux_complete: dar.complete,
        budget_exhausted: dar.budget_exhausted || rat.budget_exhausted,
        points_complete,
        polynomial_stage_complete: rat.polynomial_stage_complete,
        verdict,
        notes,
    })
}

/// [`dme_enumerate`] with the default cofactor bound.
pub fn dme_enumerate_default(s: &SigmaVariety, d: u32, n_pts: usize, cfg: &Config) -> Result<DmeReport> {
    dme_enumerate(s, d, default_cofactor_bound(s, d), n_pts, cfg)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PowerVerdict {
    Pass,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct PowerBoundReport {
    pub dimension: usize,
    /// `dim V + 3`.
    pub bound: usize,
    /// Comparison power for autonomous systems.
    pub autonomous_bound: Option<usize>,
    pub profile: OrthogonalityProfile,
    /// Every reported invariant, re-verified.
    pub reverified: bool,
    pub verdict: PowerVerdict,
}

pub fn power_bound_report(s: &SigmaVariety, d: u32, cfg: &Config) -> Result<PowerBoundReport> {
    let dimension = s.dimension(cfg)?;
    let bound = dimension + 3;
    let profile = orthogonality_profile(s, d, bound, cfg)?;
    let mut reverified = true;
    for e in &profile.entries {
        let pow = crate::geometry::cartesian_power(s, e.n)?;
        for inv in &e.invariants {
            let r = verify_invariant(&inv.lambda, &pow, cfg)?;
            reverified &= r.holds() && r.nonconstant;
        }
    }
    let verdict = match profile.first_hit {
        Some(n) if n <= bound && reverified => PowerVerdict::Pass,
        _ => PowerVerdict::Inconclusive,
    };
    Ok(PowerBoundReport {
        dimension,
        bound,
        autonomous_bound: s.is_autonomous().then_some(2),
        profile,
        reverified,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binding::{build_presentation, Trivialization};
    use crate::expr::parse_ratfunc;
    use crate::field::DifferenceField;

    fn sv(field: &DifferenceField, vars: &[&str], comps: &[&str]) -> SigmaVariety {
        let v = Vars::new(vars);
        let c = comps.iter().map(|s| parse_ratfunc(s, &v, field).unwrap()).collect();
        SigmaVariety::new(field, AffineVariety::affine_space(&v), c, &Config::default()).unwrap()
    }

    fn triv(phi: &str, psi: &str, g: &str, f: &str) -> Trivialization {
        let q = DifferenceField::rationals();
        let (vz, yz) = (Vars::new(&["x", "z"]), Vars::new(&["y", "z"]));
        let p = |s: &str, v: &Vars| parse_ratfunc(s, v, &q).unwrap();
        Trivialization::new(
            sv(&q, &["x"], &[phi]),
            sv(&q, &["z"], &[psi]),
            AffineVariety::affine_space(&yz),
            vec![p(g, &vz), p("z", &vz)],
            vec![p(f, &yz), p("z", &yz)],
        )
        .unwrap()
    }

    fn c(n: i64) -> FieldElem {
        FieldElem::from_int(n)
    }

    #[test]
    fn witnesses() {
        let cfg = Config::default();
        for (t, w) in [
            (triv("x + 1", "z + 1", "x - z", "y + z"), 1),
            (triv("2*x", "2*z", "x/z", "y*z"), 2),
            (triv("x/(x + 1)", "z + 1", "x/(1 - z*x)", "y/(z*y + 1)"), 1),
        ] {
            let p = build_presentation(&t, &[], 1, &cfg).unwrap();
            let r = translational_witness(t.s(), &p, &cfg).unwrap();
            assert_eq!(r.w, vec![c(w)]);
        }
    }

    #[test]
    fn orbit_examples() {
        let cfg = Config::default();
        let q = DifferenceField::rationals();
        let r = zdo_orbit_density(&sv(&q, &["x"], &["x + 1"]), &[c(0)], 3, 10, &cfg).unwrap();
        assert!(r.dense);
        assert_eq!(r.rank_table[..5], [1, 2, 3, 4, 4]);
        let e2 = sv(&q, &["x"], &["2*x"]);
        assert!(zdo_orbit_density(&e2, &[c(1)], 3, 10, &cfg).unwrap().dense);
        let r = zdo_orbit_density(&e2, &[c(0)], 1, 10, &cfg).unwrap();
        assert!(!r.dense);
        assert_eq!(r.vanishing.len(), 1);
        assert_eq!(r.vanishing[0].display(&[]).to_string(), "x");
        let inv = sv(&q, &["x"], &["1/x"]);
        assert!(matches!(zdo_orbit_density(&inv, &[c(0)], 1, 3, &cfg), Err(Error::OrbitLeavesDomain(0))));
    }

    #[test]
    fn dme_examples() {
        let cfg = Config::default();
        let q = DifferenceField::rationals();
        let r = dme_enumerate(&sv(&q, &["x"], &["x + 1"]), 3, 1, 5, &cfg).unwrap();
        assert!(r.subvarieties.is_empty());
        assert_eq!(r.verdict, DmeVerdict::Inconclusive);
        let r = dme_enumerate_default(&sv(&q, &["x"], &["2*x"]), 2, 5, &cfg).unwrap();
        assert_eq!(r.subvarieties.len(), 1);
        assert_eq!(r.maximal().count(), 1);
        let r = dme_enumerate_default(&sv(&q, &["x", "y"], &["2*x", "2*y"]), 1, 5, &cfg).unwrap();
        assert_eq!(r.verdict, DmeVerdict::InfinitelyMany);
        assert!(r.level_sets >= 4);
        assert!(r.subvarieties.iter().filter(|s| s.variety.dimension(&cfg).unwrap() == 1).count() >= 5);
    }

    #[test]
    fn power_bounds() {
        let cfg = Config::default();
        let q = DifferenceField::rationals();
        let r = power_bound_report(&sv(&q, &["x"], &["x + 1"]), 1, &cfg).unwrap();
        assert_eq!((r.profile.first_hit, r.verdict, r.bound), (Some(2), PowerVerdict::Pass, 4));
        let r = power_bound_report(&sv(&q, &["x"], &["2*x"]), 1, &cfg).unwrap();
        assert_eq!(r.profile.first_hit, Some(2));
        assert!(r.reverified);
    }
}
