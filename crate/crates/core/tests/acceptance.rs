//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines are always printed; exits nonzero on any
//! failure.

mod common;

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use sigma_dyn::algebra::Coeff;
use sigma_dyn::binding::{
    build_presentation, intertwining_certificate, sharp_solve_affine, verify_intertwining, verify_trivialization, GroupPresentation,
    Scalars, Trivialization,
};
use sigma_dyn::cli::run_script;
use sigma_dyn::config::Config;
use sigma_dyn::dynamics::{dme_enumerate, power_bound_report, translational_witness, zdo_orbit_density, PowerVerdict, Source};
use sigma_dyn::error::Error;
use sigma_dyn::field::{DifferenceField, FieldElem};
use sigma_dyn::geometry::{equivariance_residuals, AffineVariety, SigmaVariety};
use sigma_dyn::invariants::{find_polynomial_invariants, orthogonality_profile, verify_invariant};
use sigma_dyn::poly::{RatFunc, Vars};

// pinned limits
const C1_LIMIT: Duration = Duration::from_secs(1);
const C2_LIMIT: Duration = Duration::from_secs(10);
const C3_LIMIT: Duration = Duration::from_secs(10);
const C5_LIMIT: Duration = Duration::from_secs(30);
const C6_ITERS: usize = 20;
const C6_MAX_DEGREE: u32 = 5;
const C7_MAPS: usize = 10;
const C7_DEGREE: u32 = 2;
const C8_SIGMA_SAMPLES: usize = 100;
const C8_CANONICAL_TRIALS: usize = 20;
const C8_CONGRUENCE_TRIALS: usize = 50;
const C5_MIN_LINES: usize = 5;
const SEED: u64 = 0x5eed_2026;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<T>(r: Result<T, Error>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn show(r: &RatFunc, f: &DifferenceField) -> String {
    r.display(f.names()).to_string()
}

fn shows(rs: &[RatFunc], f: &DifferenceField) -> Vec<String> {
    rs.iter().map(|r| show(r, f)).collect()
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < limit, format!("{what} took {t:?}, limit {limit:?}"))?;
    Ok(t)
}

fn certificates_zero(p: &GroupPresentation) -> Result<usize, String> {
    for c in &p.certificates {
        ensure(c.holds(), format!("certificate {} is nonzero", c.name))?;
    }
    Ok(p.certificates.len())
}

fn criterion_1() -> Outcome {
    let cfg = Config::default();
    let start = Instant::now();
    let r = e(verify_trivialization(&e1(), &cfg))?;
    let t = within(start, C1_LIMIT, "verify_trivialization")?;
    for c in &r.checks {
        ensure(c.passed, format!("{} failed: {}", c.name, c.detail))?;
    }
    Ok(format!("E1 trivialization: {} checks pass in {t:?}", r.checks.len()))
}

fn binding_suite(name: &str, t: &Trivialization, mult: &str, theta: &str, witness: i64) -> Result<String, String> {
    let cfg = Config::default();
    let f = t.s().field().clone();
    let start = Instant::now();
    let p = e(build_presentation(t, &[], 2, &cfg))?;
    ensure(p.coordinates().len() == 1, format!("{name}: chart has dimension {}", p.coordinates().len()))?;
    ensure(shows(&p.multiply, &f) == [mult], format!("{name}: multiplication {:?}", shows(&p.multiply, &f)))?;
    ensure(shows(&p.rho, &f) == ["w"], format!("{name}: ρ = {:?}", shows(&p.rho, &f)))?;
    ensure(shows(&p.theta, &f) == [theta], format!("{name}: θ = {:?}", shows(&p.theta, &f)))?;
    let n = certificates_zero(&p)?;
    for required in ["associativity", "identity", "inverse", "ρ is a homomorphism", "intertwining", "φ∘θ = θ^σ∘(ρ×φ)"] {
        ensure(p.certificates.iter().any(|c| c.name == required), format!("{name}: no {required} certificate"))?;
    }
    let w = e(translational_witness(t.s(), &p, &cfg))?;
    ensure(w.w == [FieldElem::from_int(witness)], format!("{name}: witness {:?}", w.w))?;
    ensure(w.residuals.iter().all(|r| r.is_zero()), format!("{name}: witness residual nonzero"))?;
    let el = within(start, C2_LIMIT, name)?;
    Ok(format!("{name}: {n} certificates zero, witness {witness}, {el:?}"))
}

fn criterion_2() -> Outcome {
    let mut parts = vec![
        binding_suite("E1", &e1(), "w_1 + w_2", "w + x", 1)?,
        binding_suite("E2", &e2(), "w_1*w_2", "w*x", 2)?,
        binding_suite("Möbius", &mobius(), "w_1 + w_2", "x/(w*x + 1)", 1)?,
    ];
    // θ_g ∘ θ_h = θ_{g+h} for the Möbius family, symbolically
    let cfg = Config::default();
    let p = e(build_presentation(&mobius(), &[], 2, &cfg))?;
    let v = Vars::new(&["g", "h", "x"]);
    let var = |n: &str| RatFunc::var(&v, n).unwrap();
    let inner = e(p.theta_at(&[var("h")], &[var("x")]))?;
    let lhs = e(p.theta_at(&[var("g")], &inner))?;
    let rhs = e(p.theta_at(&[var("g").add(&var("h"))], &[var("x")]))?;
    let diff = lhs[0].embed(&v).unwrap().sub(&rhs[0].embed(&v).unwrap());
    ensure(diff.is_zero(), "θ_g∘θ_h differs from θ_{g+h}")?;
    parts.push("θ_g∘θ_h = θ_{g+h} exactly".into());
    Ok(parts.join("; "))
}

fn criterion_3() -> Outcome {
    let cfg = Config::default();
    let start = Instant::now();
    let t = e4();
    let f = t.s().field().clone();
    let inv = e(find_polynomial_invariants(t.s(), 1, &cfg))?;
    ensure(inv.basis.len() == 2, format!("dimension {}", inv.basis.len()))?;
    let target = rf("2*x - t^2 + t", t.s().vars(), &f);
    let checked = e(verify_invariant(&target, t.s(), &cfg))?;
    ensure(checked.holds() && checked.nonconstant, "2x - t^2 + t does not verify")?;
    let shown: Vec<String> = inv.basis.iter().map(|b| b.display(f.names()).to_string()).collect();
    ensure(shown.contains(&"2*x - t^2 + t".to_string()), format!("basis {shown:?}"))?;
    let p = e(build_presentation(&t, &[], 2, &cfg))?;
    certificates_zero(&p)?;
    ensure(e(p.h_is_trivial(&cfg))?, "H_Λ is not trivial")?;
    let sol = e(sharp_solve_affine(&p, 2, &cfg))?;
    ensure(sol.scalars == Scalars::Rationals, "solution scalars are not rational")?;
    let all: Vec<&FieldElem> = sol.particular.iter().flatten().chain(sol.directions.iter().flatten()).collect();
    ensure(all.iter().all(|c| c.is_rational()), "non-constant solution")?;
    let el = within(start, C3_LIMIT, "E4 suite")?;
    Ok(format!("E4 invariants {{{}}}, H trivial, solutions constant, {el:?}", shown.join(", ")))
}

fn criterion_4() -> Outcome {
    let cfg = Config::default();
    let mut parts = Vec::new();
    for (name, t, hit, inv) in [("E1", e1(), 2, "x_1 - x_2"), ("E2", e2(), 2, "x_1/x_2"), ("E4", e4(), 1, "2*x - t^2 + t")] {
        let f = t.s().field().clone();
        let prof = e(orthogonality_profile(t.s(), 1, 3, &cfg))?;
        ensure(prof.first_hit == Some(hit), format!("{name}: first hit {:?}", prof.first_hit))?;
        let entry = prof.entries.iter().find(|e| e.n == hit).unwrap();
        let found: Vec<String> = entry.invariants.iter().map(|i| show(&i.lambda, &f)).collect();
        ensure(found.contains(&inv.to_string()), format!("{name}: invariants {found:?}"))?;
        let report = e(power_bound_report(t.s(), 1, &cfg))?;
        ensure(report.reverified, format!("{name}: invariant does not re-verify"))?;
        ensure(report.verdict == PowerVerdict::Pass, format!("{name}: verdict {:?}", report.verdict))?;
        ensure(hit <= report.bound, format!("{name}: {hit} > {}", report.bound))?;
        if t.s().is_autonomous() {
            ensure(report.autonomous_bound == Some(2), format!("{name}: autonomous bound {:?}", report.autonomous_bound))?;
        }
        parts.push(format!("{name} n = {hit} ({inv})"));
    }
    Ok(parts.join(", "))
}

fn criterion_5() -> Outcome {
    let cfg = Config::default();
    let start = Instant::now();
    let q = q();
    let shift = sigma(&q, &["x"], &["x + 1"]);
    let r = e(dme_enumerate(&shift, 3, 1, 5, &cfg))?;
    ensure(r.subvarieties.is_empty(), format!("(A1, x+1): {} subvarieties", r.subvarieties.len()))?;

    let double = sigma(&q, &["x"], &["2*x"]);
    let r = e(dme_enumerate(&double, 3, 1, 5, &cfg))?;
    let maximal: Vec<_> = r.maximal().collect();
    let x0 = e(AffineVariety::new(double.vars(), vec![rf("x", double.vars(), &q).numer().clone()], &cfg))?;
    ensure(maximal.len() == 1, format!("(A1, 2x): {} maximal", maximal.len()))?;
    ensure(e(maximal[0].variety.same_as(&x0, &cfg))?, "(A1, 2x): the subvariety is not x = 0")?;

    let plane = sigma(&q, &["x", "y"], &["2*x", "2*y"]);
    let r = e(dme_enumerate(&plane, 1, 0, 5, &cfg))?;
    let invariant = r.invariant.as_ref().ok_or("no invariant function")?;
    ensure(show(&invariant.lambda, &q) == "x/y", format!("invariant {}", show(&invariant.lambda, &q)))?;
    // lines among the results, checked to be invariant level sets of x/y
    let mut lines = Vec::new();
    for s in &r.subvarieties {
        let gens = e(s.variety.ideal().reduced(&cfg))?;
        if gens.len() != 1 || gens[0].degree() != 1 {
            continue;
        }
        let g = &gens[0];
        let (cx, cy) = (g.derivative("x").constant_value().unwrap(), g.derivative("y").constant_value().unwrap());
        // P = cx·x + cy·y vanishes iff x/y = -cy/cx
        ensure(g.constant_value().is_none() && g.eval(&[FieldElem::zero(), FieldElem::zero()]).is_zero(), "line misses the origin")?;
        ensure(!cx.is_zero() || !cy.is_zero(), "degenerate line")?;
        ensure(e(sigma_dyn::geometry::is_invariant_subvariety(&s.variety, &plane, &cfg))?, "line not invariant")?;
        if matches!(s.source, Source::LevelSet(_)) || matches!(s.source, Source::Darboux) {
            lines.push(g.clone());
        }
    }
    for i in 0..lines.len() {
        for j in 0..i {
            ensure(lines[i] != lines[j], "repeated line")?;
        }
    }
    ensure(lines.len() >= C5_MIN_LINES, format!("only {} invariant lines", lines.len()))?;
    let el = within(start, C5_LIMIT, "DME checks")?;
    Ok(format!("(A1,x+1): none; (A1,2x): {{x = 0}}; (A2,(2x,2y)): {} distinct invariant lines of x/y; {el:?}", lines.len()))
}

fn criterion_6() -> Outcome {
    let cfg = Config::default();
    let q = q();
    let (e1s, e2s) = (sigma(&q, &["x"], &["x + 1"]), sigma(&q, &["x"], &["2*x"]));
    for d in 1..=C6_MAX_DEGREE {
        for (name, s, a) in [("E1", &e1s, 0), ("E2", &e2s, 1)] {
            let o = e(zdo_orbit_density(s, &[FieldElem::from_int(a)], d, C6_ITERS, &cfg))?;
            ensure(o.dense, format!("{name} at {a}, d = {d}: not dense"))?;
            ensure(o.rank_table.last() == Some(&(d as usize + 1)), format!("{name} d = {d}: rank {:?}", o.rank_table.last()))?;
        }
    }
    let o = e(zdo_orbit_density(&e2s, &[FieldElem::zero()], 1, C6_ITERS, &cfg))?;
    let forms: Vec<String> = o.vanishing.iter().map(|p| p.display(q.names()).to_string()).collect();
    ensure(!o.dense && forms == ["x"], format!("E2 at 0: vanishing {forms:?}"))?;
    Ok(format!("DENSE-≤d for d = 1..{C6_MAX_DEGREE} (rank d+1); E2 at 0 vanishes on x"))
}

fn criterion_7() -> Outcome {
    let cfg = Config::default();
    let q = q();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut done = 0;
    let mut dims = Vec::new();
    let mut attempts = 0;
    while done < C7_MAPS {
        attempts += 1;
        ensure(attempts < 200, "could not draw enough dominant maps")?;
        let n = 1 + done % 2;
        let names: Vec<&str> = ["x", "y"][..n].to_vec();
        let v = Vars::new(&names);
        let phi = random_structured_map(&mut rng, n, attempts);
        let comps = phi.iter().map(|d| rf(&dense_text(d, &names), &v, &q)).collect();
        let Ok(s) = SigmaVariety::new(&q, AffineVariety::affine_space(&v), comps, &cfg) else { continue };
        let lib = e(find_polynomial_invariants(&s, C7_DEGREE, &cfg))?;
        let got = library_vectors(&lib.basis, n, C7_DEGREE);
        let want = oracle_invariants(&phi, C7_DEGREE);
        ensure(got.len() == want.len(), format!("map {done}: dimension {} vs oracle {}", got.len(), want.len()))?;
        ensure(got == want, format!("map {done}: reduced bases differ"))?;
        dims.push(got.len());
        done += 1;
    }
    Ok(format!("{C7_MAPS} random maps agree with the dense oracle at degree {C7_DEGREE}; kernel dimensions {dims:?}"))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    for _ in 0..C8_SIGMA_SAMPLES {
        check_sigma_hom(&mut rng)?;
    }
    for _ in 0..C8_CANONICAL_TRIALS {
        check_canonical_forms(&mut rng)?;
    }
    check_graph_invariance()?;
    for _ in 0..C8_CONGRUENCE_TRIALS {
        check_e_congruence(&mut rng)?;
    }
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for f in ["e1.sdyn", "e2.sdyn", "e4.sdyn", "mobius.sdyn", "dme.sdyn", "broken.sdyn"] {
        let text = std::fs::read_to_string(dir.join(f)).map_err(|e| e.to_string())?;
        let a: Vec<String> = run_script(&text, Config::default()).reports.iter().map(|r| r.payload().to_string()).collect();
        let b: Vec<String> = run_script(&text, Config::default()).reports.iter().map(|r| r.payload().to_string()).collect();
        ensure(a == b, format!("{f}: reports differ between runs"))?;
    }
    Ok(format!(
        "σ laws x{C8_SIGMA_SAMPLES}, canonical forms x{C8_CANONICAL_TRIALS}, graph invariance on 4 maps, congruence x{C8_CONGRUENCE_TRIALS}, deterministic reports"
    ))
}

fn criterion_9() -> Outcome {
    let cfg = Config::default();
    let t = broken();
    let (src, dst) = trivialization_ends(&t);
    let res = e(equivariance_residuals(&g_map(&t), &src, &dst, &cfg))?;
    ensure(res.iter().any(|r| !r.is_zero()), "broken g is equivariant")?;
    let cert = e(intertwining_certificate(&t, &cfg))?;
    ensure(!cert.holds(), "intertwining residuals vanish")?;
    ensure(matches!(verify_intertwining(&t, &cfg), Err(Error::IdentityFails { .. })), "verify_intertwining did not fail")?;
    let script = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/broken.sdyn");
    let status = std::process::Command::new(env!("CARGO_BIN_EXE_sigma-dyn"))
        .arg("run")
        .arg(&script)
        .output()
        .map_err(|e| e.to_string())?
        .status;
    ensure(status.code() == Some(2), format!("exit code {:?}", status.code()))?;
    let shown: Vec<String> = res.iter().filter(|r| !r.is_zero()).map(|r| r.display(&[]).to_string()).collect();
    Ok(format!("equivariance residual {}, intertwining nonzero, exit code 2", shown.join("; ")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("E1 trivialization verifies", criterion_1),
        ("binding groups of E1, E2, Möbius", criterion_2),
        ("non-autonomous E4", criterion_3),
        ("power bounds", criterion_4),
        ("DME desk checks", criterion_5),
        ("ZDO desk checks", criterion_6),
        ("oracle equivalence", criterion_7),
        ("property suites", criterion_8),
        ("negative controls", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let el = start.elapsed();
        match r {
            Ok(detail) => println!("criterion {} PASS [{name}] {detail} ({el:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL [{name}] {why} ({el:.2?})", i + 1);
            }
        }
    }
    println!("acceptance: {} of 9 criteria pass", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
