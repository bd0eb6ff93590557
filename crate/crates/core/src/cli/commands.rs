//! Command dispatch.

use std::time::Instant;

use serde_json::{json, Map, Value};

use crate::binding::{
    build_presentation, intertwining_certificate, sharp_membership, sharp_solve_affine, verify_trivialization,
    Certificate, GroupPresentation, Scalars, Trivialization,
};
use crate::dynamics::{
    dme_enumerate, power_bound_report, translational_witness, zdo_orbit_density, DmeVerdict, PowerVerdict, Source,
};
use crate::error::{Error, Result};
use crate::expr::parse_ratfunc;
use crate::field::FieldElem;
use crate::geometry::{canonical_base, equivariance_residuals, graph, is_invariant_subvariety, prolongation, AffineVariety, SigmaVariety};
use crate::invariants::{
    default_cofactor_bound, find_darboux_pairs, find_polynomial_invariants, find_rational_invariants_with,
    orthogonality_profile, InvariantFunction,
};
use crate::poly::{Poly, RatFunc};

use super::dsl::Command;
use super::report::{Outcome, Report};
use super::session::Session;

/// What a command produced before wrapping.
struct Body {
    result: Value,
    certificates: Vec<Value>,
    flags: Map<String, Value>,
    text: Vec<String>,
    outcome: Outcome,
}

impl Body {
    fn new(result: Value) -> Body {
        Body { result, certificates: Vec::new(), flags: Map::new(), text: Vec::new(), outcome: Outcome::Ok }
    }

    fn line(&mut self, l: impl Into<String>) {
        self.text.push(l.into());
    }

    fn flag(&mut self, k: &str, v: impl Into<Value>) {
        self.flags.insert(k.into(), v.into());
    }

    fn worsen(&mut self, o: Outcome) {
        self.outcome = self.outcome.max(o);
    }

    fn certificate(&mut self, c: &Certificate, names: &[String]) {
        let rs: Vec<String> = c.residuals.iter().map(|r| r.display(names).to_string()).collect();
        self.text.push(format!("certificate {}: {}", c.name, if c.holds() { "zero" } else { "NONZERO" }));
        self.certificates.push(json!({ "name": c.name, "holds": c.holds(), "residuals": rs }));
        if !c.holds() {
            self.worsen(Outcome::CheckFailed);
        }
    }
}

struct Ctx<'a> {
    s: &'a mut Session,
    cmd: &'a Command,
    k: usize,
}

impl Ctx<'_> {
    fn names(&self) -> Vec<String> {
        self.s.field.names().to_vec()
    }

    fn fe(&self, e: &FieldElem) -> String {
        e.display(self.s.field.names()).to_string()
    }

    fn poly(&self, p: &Poly) -> String {
        p.display(self.s.field.names()).to_string()
    }

    fn rat(&self, r: &RatFunc) -> String {
        r.display(self.s.field.names()).to_string()
    }

    fn rats(&self, rs: &[RatFunc]) -> Vec<String> {
        rs.iter().map(|r| self.rat(r)).collect()
    }

    fn point(&self, p: &[FieldElem]) -> Vec<String> {
        p.iter().map(|e| self.fe(e)).collect()
    }

    fn basis(&self, v: &AffineVariety) -> Result<Vec<String>> {
        Ok(v.ideal().groebner(self.s.cfg.order, &self.s.cfg)?.iter().map(|p| self.poly(p)).collect())
    }

    fn next(&mut self) -> String {
        let a = self.cmd.args[self.k].clone();
        self.k += 1;
        a
    }

    fn sigma(&mut self) -> Result<SigmaVariety> {
        let first = self.next();
        if self.s.sigmas.contains_key(&first) {
            return self.s.sigma(&first, None);
        }
        let second = self.next();
        self.s.sigma(&first, Some(&second))
    }

    fn triv(&mut self) -> Trivialization {
        let n = self.next();
        self.s.trivs[&n].clone()
    }

    fn int(&self, name: &str, default: u32) -> u32 {
        self.cmd.flag(name).map_or(default, |v| v.parse().expect("checked by the parser"))
    }

    fn lambdas(&self, t: &Trivialization) -> Result<Vec<RatFunc>> {
        self.cmd
            .flags
            .iter()
            .filter(|(k, _)| k == "lambda")
            .filter_map(|(_, v)| v.as_ref())
            .map(|v| parse_ratfunc(v, t.z().vars(), &self.s.field).map_err(|e| Error::Shape(format!("--lambda: {e}"))))
            .collect()
    }

    fn presentation(&self, t: &Trivialization, b: &mut Body) -> Result<GroupPresentation> {
        let extra = self.lambdas(t)?;
        let d = self.int("lambda-degree", 2);
        b.flag("lambda_degree", d);
        build_presentation(t, &extra, d, &self.s.cfg)
    }

    fn invariant(&self, f: &InvariantFunction) -> Value {
        json!({ "lambda": self.rat(&f.lambda), "holds": f.holds(), "nonconstant": f.nonconstant })
    }
}

/// Runs one command; module errors become the report's result.
pub fn run_command(session: &mut Session, cmd: &Command, line: usize) -> Report {
    let start = Instant::now();
    let inputs = json!({
        "args": cmd.args,
        "flags": cmd.flags.iter().map(|(k, v)| json!([k, v])).collect::<Vec<_>>(),
        "order": format!("{:?}", session.cfg.order).to_lowercase(),
        "budget": session.cfg.budget,
    });
    let mut ctx = Ctx { s: session, cmd, k: 0 };
    let body = dispatch(&mut ctx).unwrap_or_else(|e| {
        let outcome = Outcome::of_error(&e);
        let mut b = Body::new(json!({ "error": e.to_string() }));
        b.line(format!("error: {e}"));
        b.outcome = outcome;
        b
    });
    Report {
        command: cmd.name.clone(),
        line,
        inputs,
        result: body.result,
        certificates: Value::Array(body.certificates),
        flags: Value::Object(body.flags),
        outcome: body.outcome,
        text: body.text,
        elapsed: start.elapsed(),
    }
}

fn dispatch(c: &mut Ctx) -> Result<Body> {
    match c.cmd.name.as_str() {
        "check-equivariance" => check_equivariance(c),
        "check-invariant-subvariety" => check_invariant_subvariety(c),
        "graph" => graph_cmd(c),
        "prolong" => prolong(c),
        "canonical-base" => canonical_base_cmd(c),
        "invariants" => invariants(c),
        "darboux" => darboux(c),
        "orthogonality-profile" => profile(c),
        "verify-trivialization" => verify_triv(c),
        "binding-group" => binding_group(c),
        "verify-intertwining" => verify_intertwining_cmd(c),
        "sharp-solve" => sharp_solve(c),
        "translational-witness" => witness(c),
        "orbit-density" => orbit_density(c),
        "dme" => dme(c),
        "power-bound" => power_bound(c),
        other => Err(Error::Unsupported(format!("command `{other}`"))),
    }
}

fn check_equivariance(c: &mut Ctx) -> Result<Body> {
    let m = c.next();
    let g = c.s.map(&m)?;
    let (src, dst) = (c.sigma()?, c.sigma()?);
    let rs = equivariance_residuals(&g, &src, &dst, &c.s.cfg)?;
    let cert = Certificate::new("equivariance", rs);
    let mut b = Body::new(json!({ "equivariant": cert.holds() }));
    b.line(format!("equivariant: {}", cert.holds()));
    b.certificate(&cert, &c.names());
    Ok(b)
}

fn check_invariant_subvariety(c: &mut Ctx) -> Result<Body> {
    let x = c.next();
    let xv = c.s.varieties[&x].clone();
    let s = c.sigma()?;
    let ok = is_invariant_subvariety(&xv, &s, &c.s.cfg)?;
    let mut b = Body::new(json!({ "invariant": ok }));
    b.line(format!("invariant: {ok}"));
    if !ok {
        b.worsen(Outcome::CheckFailed);
    }
    Ok(b)
}

fn graph_cmd(c: &mut Ctx) -> Result<Body> {
    let m = c.next();
    let f = c.s.map(&m)?;
    let gr = graph(&f, &c.s.cfg)?;
    let basis = c.basis(&gr)?;
    let mut b = Body::new(json!({ "variables": gr.vars().names(), "ideal": basis }));
    b.line(format!("variables: {}", gr.vars().names().join(", ")));
    for p in &basis {
        b.line(format!("  {p}"));
    }
    Ok(b)
}

fn prolong(c: &mut Ctx) -> Result<Body> {
    let s = c.sigma()?;
    let m = c.int("order", 1) as usize;
    let v = prolongation(&s, m, &c.s.cfg)?;
    let basis = c.basis(&v)?;
    let mut b = Body::new(json!({ "order": m, "variables": v.vars().names(), "ideal": basis }));
    b.line(format!("variables: {}", v.vars().names().join(", ")));
    for p in &basis {
        b.line(format!("  {p}"));
    }
    Ok(b)
}

fn canonical_base_cmd(c: &mut Ctx) -> Result<Body> {
    let s = c.sigma()?;
    let cb = canonical_base(&s, &c.s.cfg)?;
    let gens = c.point(&cb.generators());
    let mut b = Body::new(json!({
        "generators": gens,
        "coefficients": c.point(&cb.coefficients),
        "sigma_closure": c.point(&cb.sigma_closure),
        "prime_field": cb.is_prime_field(),
    }));
    b.flag("stabilized", cb.stabilized);
    if cb.is_prime_field() {
        b.line("canonical base: Q");
    } else {
        b.line(format!("canonical base generated by: {}", gens.join(", ")));
    }
    if !cb.stabilized {
        b.line("closure under sigma did not stabilize");
    }
    Ok(b)
}

fn invariants(c: &mut Ctx) -> Result<Body> {
    let s = c.sigma()?;
    let d = c.int("degree", 2);
    if c.cmd.has_flag("rational") {
        let cof = c.int("cofactor", default_cofactor_bound(&s, d));
        let r = find_rational_invariants_with(&s, d, cof, &c.s.cfg)?;
        let invs: Vec<Value> = r.invariants.iter().map(|f| c.invariant(f)).collect();
        let mut b = Body::new(json!({ "degree": d, "cofactor_degree": cof, "invariants": invs }));
        for f in &r.invariants {
            b.line(format!("  {}", c.rat(&f.lambda)));
        }
        if r.invariants.is_empty() {
            b.line("no nonconstant rational invariant found at these bounds");
        }
        b.flag("complete", r.complete());
        b.flag("polynomial_stage_complete", r.polynomial_stage_complete);
        b.flag("darboux_complete", r.darboux_complete);
        b.flag("budget_exhausted", r.budget_exhausted);
        b.flag("notes", r.notes.clone());
        if r.budget_exhausted {
            b.worsen(Outcome::Incomplete);
        }
        return Ok(b);
    }
    let r = find_polynomial_invariants(&s, d, &c.s.cfg)?;
    let basis: Vec<String> = r.basis.iter().map(|p| c.poly(p)).collect();
    let mut b = Body::new(json!({ "degree": d, "basis": basis, "dimension": basis.len() }));
    b.line(format!("invariant polynomials of degree <= {d}: {{{}}}", basis.join(", ")));
    b.flag("complete", r.complete);
    b.flag("coeff_degree", r.coeff_degree);
    Ok(b)
}

fn darboux(c: &mut Ctx) -> Result<Body> {
    let s = c.sigma()?;
    let d = c.int("degree", 2);
    let cof = c.int("cofactor", default_cofactor_bound(&s, d));
    let r = find_darboux_pairs(&s, d, cof, &c.s.cfg)?;
    let names = c.names();
    let mut pairs = Vec::new();
    let mut b = Body::new(Value::Null);
    for p in &r.pairs {
        pairs.push(json!({ "p": c.poly(&p.p), "cofactor": c.poly(&p.cofactor), "clearing": c.poly(&p.clearing) }));
        b.line(format!("  P = {}, C = {}", c.poly(&p.p), c.poly(&p.cofactor)));
        let cert = Certificate::new(&format!("darboux {}", c.poly(&p.p)), vec![p.residual(&s, &c.s.cfg)?]);
        b.certificate(&cert, &names);
    }
    if r.pairs.is_empty() {
        b.line("no Darboux polynomial found at these bounds");
    }
    b.result = json!({ "degree": d, "cofactor_degree": cof, "pairs": pairs });
    b.flag("complete", r.complete);
    b.flag("budget_exhausted", r.budget_exhausted);
    b.flag("notes", r.notes.clone());
    if r.budget_exhausted {
        b.worsen(Outcome::Incomplete);
    }
    Ok(b)
}

fn profile(c: &mut Ctx) -> Result<Body> {
    let s = c.sigma()?;
    let d = c.int("degree", 2);
    let n_max = c.int("max", 4) as usize;
    let p = orthogonality_profile(&s, d, n_max, &c.s.cfg)?;
    let entries: Vec<Value> = p
        .entries
        .iter()
        .map(|e| json!({ "n": e.n, "invariants": e.invariants.iter().map(|f| c.invariant(f)).collect::<Vec<_>>() }))
        .collect();
    let mut b = Body::new(json!({ "degree": d, "max": n_max, "entries": entries, "first_hit": p.first_hit }));
    for e in &p.entries {
        let fs: Vec<String> = e.invariants.iter().map(|f| c.rat(&f.lambda)).collect();
        b.line(format!("  n = {}: {}", e.n, if fs.is_empty() { "none".into() } else { fs.join(", ") }));
    }
    b.line(p.reading());
    b.flag("reading", p.reading());
    Ok(b)
}

fn verify_triv(c: &mut Ctx) -> Result<Body> {
    let t = c.triv();
    let r = verify_trivialization(&t, &c.s.cfg)?;
    let checks: Vec<Value> =
        r.checks.iter().map(|k| json!({ "name": k.name, "passed": k.passed, "detail": k.detail })).collect();
    let mut b = Body::new(json!({ "passed": r.passed(), "checks": checks }));
    for k in &r.checks {
        let tail = if k.detail.is_empty() { String::new() } else { format!(" ({})", k.detail) };
        b.line(format!("  [{}] {}{tail}", if k.passed { "pass" } else { "FAIL" }, k.name));
    }
    if !r.passed() {
        b.worsen(Outcome::CheckFailed);
    }
    Ok(b)
}

fn presentation_value(c: &Ctx, p: &GroupPresentation) -> Result<Value> {
    let h_trivial = p.h_is_trivial(&c.s.cfg)?;
    Ok(json!({
        "coordinates": p.coordinates().names(),
        "identity": c.point(&p.identity),
        "multiply": c.rats(&p.multiply),
        "inverse": c.rats(&p.inverse),
        "rho": c.rats(&p.rho),
        "theta": c.rats(&p.theta),
        "lambda": c.rats(&p.lambda),
        "h_ideal": p.h_ideal.generators().iter().map(|g| c.poly(g)).collect::<Vec<_>>(),
        "h_trivial": h_trivial,
    }))
}

fn presentation_text(c: &Ctx, p: &GroupPresentation, b: &mut Body) {
    let w = p.coordinates().names().join(", ");
    b.line(format!("chart coordinates: {w}"));
    b.line(format!("identity: ({})", c.point(&p.identity).join(", ")));
    b.line(format!("multiply: ({})", c.rats(&p.multiply).join(", ")));
    b.line(format!("inverse: ({})", c.rats(&p.inverse).join(", ")));
    b.line(format!("rho: ({})", c.rats(&p.rho).join(", ")));
    b.line(format!("theta: ({})", c.rats(&p.theta).join(", ")));
    if !p.lambda.is_empty() {
        b.line(format!("lambda: {}", c.rats(&p.lambda).join(", ")));
    }
    if !p.h_ideal.is_zero_ideal() {
        let gens: Vec<String> = p.h_ideal.generators().iter().map(|g| c.poly(g)).collect();
        b.line(format!("H cut out by: {}", gens.join(", ")));
    }
}

fn binding_group(c: &mut Ctx) -> Result<Body> {
    let t = c.triv();
    let mut b = Body::new(Value::Null);
    let p = c.presentation(&t, &mut b)?;
    b.result = presentation_value(c, &p)?;
    presentation_text(c, &p, &mut b);
    let names = c.names();
    for cert in &p.certificates {
        b.certificate(cert, &names);
    }
    b.flag("notes", p.notes.clone());
    Ok(b)
}

fn verify_intertwining_cmd(c: &mut Ctx) -> Result<Body> {
    let t = c.triv();
    let cert = intertwining_certificate(&t, &c.s.cfg)?;
    let mut b = Body::new(json!({ "holds": cert.holds() }));
    b.certificate(&cert, &c.names());
    Ok(b)
}

fn sharp_solve(c: &mut Ctx) -> Result<Body> {
    let t = c.triv();
    let mut b = Body::new(Value::Null);
    let p = c.presentation(&t, &mut b)?;
    let d = c.int("degree", 2);
    let sol = sharp_solve_affine(&p, d, &c.s.cfg)?;
    let scalars = match sol.scalars {
        Scalars::Field => "field",
        Scalars::Rationals => "rationals",
    };
    let particular = sol.particular.as_ref().map(|v| c.point(v));
    let directions: Vec<Vec<String>> = sol.directions.iter().map(|v| c.point(v)).collect();
    let mut result = json!({
        "coordinates": p.coordinates().names(),
        "particular": particular,
        "directions": directions,
        "scalars": scalars,
        "degree_bound": sol.degree_bound,
    });
    match &particular {
        Some(v) => b.line(format!("particular: ({})", v.join(", "))),
        None => b.line("no solution"),
    }
    for v in &directions {
        b.line(format!("direction over {scalars}: ({})", v.join(", ")));
    }
    if let Some(pt) = c.cmd.flag("point") {
        let w = c.s.point(pt)?;
        let member = sharp_membership(&p, &w, &c.s.cfg)?;
        result["membership"] = json!({ "point": c.point(&w), "member": member });
        b.line(format!("({}) is a solution: {member}", c.point(&w).join(", ")));
        if !member {
            b.worsen(Outcome::CheckFailed);
        }
    }
    b.result = result;
    b.flag("notes", sol.notes.clone());
    Ok(b)
}

fn witness(c: &mut Ctx) -> Result<Body> {
    let t = c.triv();
    let mut b = Body::new(Value::Null);
    let p = c.presentation(&t, &mut b)?;
    let w = translational_witness(t.s(), &p, &c.s.cfg)?;
    b.result = json!({ "coordinates": p.coordinates().names(), "w": c.point(&w.w) });
    b.line(format!("witness: ({})", c.point(&w.w).join(", ")));
    let cert = Certificate::new("phi = theta_w", w.residuals.clone());
    b.certificate(&cert, &c.names());
    Ok(b)
}

fn orbit_density(c: &mut Ctx) -> Result<Body> {
    let s = c.sigma()?;
    let Some(pt) = c.cmd.flag("point") else {
        return Err(Error::Shape("orbit-density needs --point".into()));
    };
    let a = c.s.point(pt)?;
    let d = c.int("degree", 2);
    let n = c.int("iters", 20) as usize;
    let o = zdo_orbit_density(&s, &a, d, n, &c.s.cfg)?;
    let verdict = if o.dense { format!("DENSE-≤{d}") } else { "NOT-DENSE".to_string() };
    let vanishing: Vec<String> = o.vanishing.iter().map(|p| c.poly(p)).collect();
    let mut b = Body::new(json!({
        "verdict": verdict,
        "point": c.point(&o.point),
        "degree": d,
        "iterations": o.iterations,
        "slice_dim": o.slice_dim,
        "rank_table": o.rank_table,
        "vanishing": vanishing,
    }));
    b.line(verdict);
    b.line(format!("rank {} of {}", o.rank_table.last().copied().unwrap_or(0), o.slice_dim));
    for p in &vanishing {
        b.line(format!("  vanishes on the orbit: {p}"));
    }
    Ok(b)
}

fn dme(c: &mut Ctx) -> Result<Body> {
    let s = c.sigma()?;
    let d = c.int("degree", 2);
    let cof = c.int("cofactor", default_cofactor_bound(&s, d));
    let n = c.int("points", 5) as usize;
    let r = dme_enumerate(&s, d, cof, n, &c.s.cfg)?;
    let mut b = Body::new(Value::Null);
    let mut subs = Vec::new();
    for sv in &r.subvarieties {
        let ideal = c.basis(&sv.variety)?;
        let source = match sv.source {
            Source::Darboux => "darboux".to_string(),
            Source::FixedPoint => "fixed-point".to_string(),
            Source::LevelSet(l) => format!("level-set {l}"),
        };
        b.line(format!("  {{{}}} [{source}]{}", ideal.join(", "), if sv.maximal { " maximal" } else { "" }));
        subs.push(json!({ "ideal": ideal, "source": source, "maximal": sv.maximal }));
    }
    let verdict = match r.verdict {
        DmeVerdict::InfinitelyMany => "infinitely-many",
        DmeVerdict::Inconclusive => "inconclusive",
    };
    b.line(format!("verdict: {verdict}"));
    b.result = json!({
        "degree": d,
        "cofactor_degree": cof,
        "subvarieties": subs,
        "invariant": r.invariant.as_ref().map(|f| c.rat(&f.lambda)),
        "level_sets": r.level_sets,
        "verdict": verdict,
    });
    b.flag("darboux_complete", r.darboux_complete);
    b.flag("points_complete", r.points_complete);
    b.flag("polynomial_stage_complete", r.polynomial_stage_complete);
    b.flag("budget_exhausted", r.budget_exhausted);
    b.flag("notes", r.notes.clone());
    if r.budget_exhausted {
        b.worsen(Outcome::Incomplete);
    }
    Ok(b)
}

fn power_bound(c: &mut Ctx) -> Result<Body> {
    let s = c.sigma()?;
    let d = c.int("degree", 2);
    let r = power_bound_report(&s, d, &c.s.cfg)?;
    let verdict = match r.verdict {
        PowerVerdict::Pass => "pass",
        PowerVerdict::Inconclusive => "inconclusive",
    };
    let hit = r.profile.first_hit.and_then(|n| r.profile.entries.iter().find(|e| e.n == n));
    let invs: Vec<String> = hit.map(|e| e.invariants.iter().map(|f| c.rat(&f.lambda)).collect()).unwrap_or_default();
    let mut b = Body::new(json!({
        "dimension": r.dimension,
        "bound": r.bound,
        "autonomous_bound": r.autonomous_bound,
        "first_hit": r.profile.first_hit,
        "invariants": invs,
        "reverified": r.reverified,
        "verdict": verdict,
    }));
    match r.profile.first_hit {
        Some(n) => b.line(format!("first nonconstant invariant on V^{n}: {}", invs.join(", "))),
        None => b.line(format!("none found up to V^{}", r.profile.n_max)),
    }
    b.line(format!("bound dim V + 3 = {}: {verdict}", r.bound));
    b.flag("reading", r.profile.reading());
    Ok(b)
}
