//! Fixtures, seeded generators, property checks and an independent dense
//! oracle shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use sigma_dyn::binding::{params_equivalent, theta_of, GroupParam, Trivialization};
use sigma_dyn::config::Config;
use sigma_dyn::expr::{parse_field_elem, parse_poly, parse_ratfunc};
use sigma_dyn::field::{DifferenceField, FieldElem};
use sigma_dyn::geometry::{graph, is_invariant_subvariety, AffineVariety, RationalMap, SigmaVariety};
use sigma_dyn::ideals::Ideal;
use sigma_dyn::poly::{Poly, RatFunc, Vars};

pub fn q() -> DifferenceField {
    DifferenceField::rationals()
}

/// `Q(t)` with `t ↦ t + 1`.
pub fn shift() -> DifferenceField {
    use sigma_dyn::algebra::Coeff;
    let t = FieldElem::generator(0);
    DifferenceField::new(vec!["t".into()], vec![t.add(&FieldElem::one())], vec![t.sub(&FieldElem::one())]).unwrap()
}

/// `Q(a, b)` with `a ↦ b`, `b ↦ a + b`.
pub fn fibonacci() -> DifferenceField {
    use sigma_dyn::algebra::Coeff;
    let (a, b) = (FieldElem::generator(0), FieldElem::generator(1));
    DifferenceField::new(vec!["a".into(), "b".into()], vec![b.clone(), a.add(&b)], vec![b.sub(&a), a]).unwrap()
}

pub fn rf(s: &str, v: &Vars, f: &DifferenceField) -> RatFunc {
    parse_ratfunc(s, v, f).unwrap()
}

pub fn sigma(f: &DifferenceField, names: &[&str], comps: &[&str]) -> SigmaVariety {
    let v = Vars::new(names);
    let cfg = Config::default();
    SigmaVariety::new(f, AffineVariety::affine_space(&v), comps.iter().map(|c| rf(c, &v, f)).collect(), &cfg).unwrap()
}

/// `V = 𝔸¹_x`, `Z = 𝔸¹_z`, `Y = 𝔸²_{y,z}`; `g` and `f` act on the first
/// coordinate and fix `z`.
pub fn fixture(field: &DifferenceField, phi: &str, psi: &str, g: &str, f: &str) -> Trivialization {
    let (vz, yz) = (Vars::new(&["x", "z"]), Vars::new(&["y", "z"]));
    Trivialization::new(
        sigma(field, &["x"], &[phi]),
        sigma(field, &["z"], &[psi]),
        AffineVariety::affine_space(&yz),
        vec![rf(g, &vz, field), rf("z", &vz, field)],
        vec![rf(f, &yz, field), rf("z", &yz, field)],
    )
    .unwrap()
}

pub fn e1() -> Trivialization {
    fixture(&q(), "x + 1", "z + 1", "x - z", "y + z")
}

pub fn e2() -> Trivialization {
    fixture(&q(), "2*x", "2*z", "x/z", "y*z")
}

pub fn mobius() -> Trivialization {
    fixture(&q(), "x/(x + 1)", "z + 1", "x/(1 - z*x)", "y/(z*y + 1)")
}

pub fn e4() -> Trivialization {
    fixture(&shift(), "x + t", "z + t", "x - z", "y + z")
}

pub fn broken() -> Trivialization {
    fixture(&q(), "x + 1", "z + 1", "x*z", "y/z")
}

/// `(V × Z, φ × ψ)` and `(Y, id × ψ)` for a fixture.
pub fn trivialization_ends(t: &Trivialization) -> (SigmaVariety, SigmaVariety) {
    let src = t.s().product(t.z()).unwrap();
    let field = t.s().field();
    let yv = t.y().vars().clone();
    let mut comps: Vec<RatFunc> = vec![RatFunc::var(&yv, &yv.names()[0]).unwrap()];
    comps.extend(t.z().phi().components().iter().map(|c| c.embed(&yv).unwrap()));
    let dst = SigmaVariety::new(field, t.y().clone(), comps, &Config::default()).unwrap();
    (src, dst)
}

pub fn g_map(t: &Trivialization) -> RationalMap {
    let (src, dst) = trivialization_ends(t);
    RationalMap::new(src.carrier().clone(), dst.carrier().clone(), t.g().to_vec(), &Config::default()).unwrap()
}

fn small(rng: &mut ChaCha8Rng, h: i64) -> i64 {
    rng.gen_range(-h..=h)
}

/// A random element of the field: quotient of polynomials of degree ≤ 2
/// in the generators with coefficients of height ≤ 3.
pub fn random_elem(rng: &mut ChaCha8Rng, f: &DifferenceField) -> FieldElem {
    use sigma_dyn::algebra::Coeff;
    let names = f.names();
    let poly = |rng: &mut ChaCha8Rng, nonzero: bool| -> String {
        loop {
            let mut terms = vec![small(rng, 3).to_string()];
            for n in names {
                terms.push(format!("({})*{n}", small(rng, 3)));
                terms.push(format!("({})*{n}^2", small(rng, 3)));
            }
            let s = terms.join(" + ");
            let e = parse_field_elem(&s, names).unwrap();
            if !nonzero || !e.is_zero() {
                return s;
            }
        }
    };
    let num = poly(rng, false);
    let den = if rng.gen_bool(0.5) { "1".to_string() } else { poly(rng, true) };
    parse_field_elem(&format!("({num})/({den})"), names).unwrap()
}

/// A random polynomial of degree ≤ `d` in `vars` over `ℚ`, as text.
pub fn random_poly_text(rng: &mut ChaCha8Rng, vars: &[&str], d: u32, h: i64) -> String {
    let mut terms = Vec::new();
    for exps in exponents(vars.len(), d) {
        let c = small(rng, h);
        if c == 0 {
            continue;
        }
        let mono: Vec<String> =
            exps.iter().zip(vars).filter(|(e, _)| **e > 0).map(|(e, v)| format!("{v}^{e}")).collect();
        terms.push(if mono.is_empty() { format!("({c})") } else { format!("({c})*{}", mono.join("*")) });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Exponent vectors of total degree ≤ `d`, degree-major.
pub fn exponents(n: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for deg in 0..=d {
        let mut cur = vec![0u32; n];
        fill(&mut out, &mut cur, 0, deg);
    }
    out
}

fn fill(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, i: usize, left: u32) {
    if i + 1 == cur.len() || cur.is_empty() {
        if !cur.is_empty() {
            cur[i] = left;
        }
        out.push(cur.clone());
        return;
    }
    for e in (0..=left).rev() {
        cur[i] = e;
        fill(out, cur, i + 1, left - e);
    }
    cur[i] = 0;
}

// ---------------------------------------------------------------------
// property checks; each returns a description of the first failure

/// `σ` is a ring automorphism with the stated inverse and fixes `ℚ`.
pub fn check_sigma_hom(rng: &mut ChaCha8Rng) -> Result<(), String> {
    use sigma_dyn::algebra::Coeff;
    for f in [shift(), fibonacci()] {
        let (a, b) = (random_elem(rng, &f), random_elem(rng, &f));
        let s = |e: &FieldElem| f.sigma_apply(e, 1);
        let show = |e: &FieldElem| f.fmt_elem(e);
        if s(&a.add(&b)) != s(&a).add(&s(&b)) {
            return Err(format!("σ(a+b) for a = {}, b = {}", show(&a), show(&b)));
        }
        if s(&a.mul(&b)) != s(&a).mul(&s(&b)) {
            return Err(format!("σ(ab) for a = {}, b = {}", show(&a), show(&b)));
        }
        if !b.is_zero() && s(&a.mul(&b.inv())) != s(&a).mul(&s(&b).inv()) {
            return Err(format!("σ(a/b) for a = {}, b = {}", show(&a), show(&b)));
        }
        if f.sigma_apply(&s(&a), -1) != a || s(&f.sigma_apply(&a, -1)) != a {
            return Err(format!("σ⁻¹σ for a = {}", show(&a)));
        }
        let q = FieldElem::from_ratio(rng.gen_range(-9..=9), rng.gen_range(1..=9));
        if s(&q) != q {
            return Err("σ moves a rational".into());
        }
    }
    Ok(())
}

/// Reduced bases do not depend on the generating set.
pub fn check_canonical_forms(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let cfg = Config::default();
    let f = shift();
    let v = Vars::new(&["x", "y"]);
    let p = |s: &str| parse_poly(s, &v, &f).unwrap();
    let a = p(&random_poly_text(rng, &["x", "y"], 2, 3));
    let b = p(&random_poly_text(rng, &["x", "y"], 2, 3)).add(&p("t*x"));
    let h = p(&random_poly_text(rng, &["x", "y"], 1, 3));
    let i1 = Ideal::new(&v, vec![a.clone(), b.clone()]).unwrap();
    let i2 = Ideal::new(&v, vec![b.clone(), a.add(&h.mul(&b)), a.scale(&FieldElem::from_int(3))]).unwrap();
    let (r1, r2) = (i1.reduced(&cfg).map_err(|e| e.to_string())?, i2.reduced(&cfg).map_err(|e| e.to_string())?);
    if *r1 != *r2 {
        return Err(format!("reduced bases differ for {a:?}, {b:?}"));
    }
    if !i1.equals(&i2, &cfg).map_err(|e| e.to_string())? {
        return Err("equal ideals compare unequal".into());
    }
    // a second computation from scratch agrees term for term
    let again = Ideal::new(&v, vec![a.clone(), b.clone()]).unwrap();
    if *again.reduced(&cfg).map_err(|e| e.to_string())? != *r1 {
        return Err("reduced basis not deterministic".into());
    }
    // normal forms are linear
    let (u, w) = (p(&random_poly_text(rng, &["x", "y"], 3, 3)), p(&random_poly_text(rng, &["x", "y"], 3, 3)));
    let (c1, c2) = (random_elem(rng, &f), random_elem(rng, &f));
    let nf = |q: &Poly| i1.normal_form(q, &cfg).unwrap();
    if nf(&u.scale(&c1).add(&w.scale(&c2))) != nf(&u).scale(&c1).add(&nf(&w).scale(&c2)) {
        return Err("normal form is not linear".into());
    }
    // σ commutes with normal forms and products
    let is = i1.coeff_transform(&f, 1);
    if is.normal_form(&u.coeff_transform(&f, 1), &cfg).unwrap() != nf(&u).coeff_transform(&f, 1) {
        return Err("NF(p)^σ differs from NF_{I^σ}(p^σ)".into());
    }
    if u.mul(&w).coeff_transform(&f, 1) != u.coeff_transform(&f, 1).mul(&w.coeff_transform(&f, 1)) {
        return Err("coefficient transform is not multiplicative".into());
    }
    Ok(())
}

/// The graph of an equivariant map is an invariant subvariety of the
/// product; the broken fixture gives a non-invariant graph.
pub fn check_graph_invariance() -> Result<(), String> {
    let cfg = Config::default();
    let cases = [("E1", e1(), true), ("E2", e2(), true), ("Möbius", mobius(), true), ("E4", e4(), true), ("broken", broken(), false)];
    for (name, t, expect) in cases {
        let (src, dst) = trivialization_ends(&t);
        let gm = g_map(&t);
        let gr = graph(&gm, &cfg).map_err(|e| e.to_string())?;
        // the graph's target block gets primed names on collision
        let names = gr.vars().clone();
        let k = src.vars().len();
        let mut comps: Vec<RatFunc> =
            src.phi().components().iter().map(|c| c.renamed(&Vars::new(&names.names()[..k])).embed(&names).unwrap()).collect();
        let tv = Vars::new(&names.names()[k..]);
        comps.extend(dst.phi().components().iter().map(|c| c.renamed(&tv).embed(&names).unwrap()));
        let prod = SigmaVariety::new_unverified(
            src.field(),
            RationalMap::unchecked(AffineVariety::affine_space(&names), AffineVariety::affine_space(&names), comps).unwrap(),
        );
        let inv = is_invariant_subvariety(&gr, &prod, &cfg).map_err(|e| e.to_string())?;
        if inv != expect {
            return Err(format!("{name}: graph invariant = {inv}, expected {expect}"));
        }
    }
    Ok(())
}

fn konst(c: &FieldElem) -> RatFunc {
    RatFunc::constant(&Vars::empty(), c.clone())
}

/// `(e, e') ~ (c, c')` iff `θ` agrees, checked against the closed forms of
/// the fixtures: a difference for translations, a ratio for E2.
pub fn check_e_congruence(rng: &mut ChaCha8Rng) -> Result<(), String> {
    use sigma_dyn::algebra::Coeff;
    let cfg = Config::default();
    let which = rng.gen_range(0..4);
    let (t, additive) = match which {
        0 => (e1(), true),
        1 => (e2(), false),
        2 => (mobius(), true),
        _ => (e4(), true),
    };
    let r = |rng: &mut ChaCha8Rng| loop {
        let q = FieldElem::from_ratio(rng.gen_range(-6..=6), rng.gen_range(1..=4));
        if !q.is_zero() {
            return q;
        }
    };
    let (e, ep) = (r(rng), r(rng));
    let (c, cp) = if rng.gen_bool(0.5) {
        let k = r(rng);
        if additive {
            (e.add(&k), ep.add(&k))
        } else {
            (e.mul(&k), ep.mul(&k))
        }
    } else {
        (r(rng), r(rng))
    };
    let oracle = if additive { ep.sub(&e) == cp.sub(&c) } else { ep.mul(&c) == cp.mul(&e) };
    let w1 = GroupParam::new(vec![konst(&e)], vec![konst(&ep)]);
    let w2 = GroupParam::new(vec![konst(&c)], vec![konst(&cp)]);
    let got = params_equivalent(&t, &w1, &w2, &cfg).map_err(|e| e.to_string())?;
    if got != oracle {
        return Err(format!("fixture {which}: ({e:?}, {ep:?}) vs ({c:?}, {cp:?}): got {got}"));
    }
    let (a, b) = (theta_of(&t, &w1, &cfg).unwrap(), theta_of(&t, &w2, &cfg).unwrap());
    if (a == b) != oracle {
        return Err(format!("fixture {which}: θ comparison disagrees"));
    }
    Ok(())
}

// ---------------------------------------------------------------------
// dense oracle for polynomial invariants of autonomous polynomial maps on
// affine space; uses only BigRational arithmetic

pub type Dense = BTreeMap<Vec<u32>, BigRational>;

fn dmul(a: &Dense, b: &Dense) -> Dense {
    let mut out = Dense::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let v = out.entry(e).or_insert_with(BigRational::zero);
            *v += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn done(n: usize) -> Dense {
    let mut d = Dense::new();
    d.insert(vec![0; n], BigRational::one());
    d
}

/// Random map components as dense polynomials of degree ≤ 2, height ≤ 3.
pub fn random_dense_map(rng: &mut ChaCha8Rng, n: usize) -> Vec<Dense> {
    (0..n)
        .map(|_| {
            let mut d = Dense::new();
            for e in exponents(n, 2) {
                let c = rng.gen_range(-3i64..=3);
                if c != 0 {
                    d.insert(e, BigRational::from_integer(BigInt::from(c)));
                }
            }
            d
        })
        .collect()
}

fn dconst(n: usize, e: &[u32], c: i64) -> Dense {
    let mut d = Dense::new();
    if c != 0 {
        let mut k = e.to_vec();
        k.resize(n, 0);
        d.insert(k, BigRational::from_integer(BigInt::from(c)));
    }
    d
}

fn dadd(a: &Dense, b: &Dense) -> Dense {
    let mut out = a.clone();
    for (k, c) in b {
        let v = out.entry(k.clone()).or_insert_with(BigRational::zero);
        *v += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Random maps drawn from three families so that nonconstant invariants
/// occur: fully random; a reflection `c − x` or skew product
/// `(x + a, y + p(x))`; a shift `x + a` or twisted swap `(y + a, x − a)`.
/// Degree ≤ 2, height ≤ 3.
pub fn random_structured_map(rng: &mut ChaCha8Rng, n: usize, kind: usize) -> Vec<Dense> {
    let c = |rng: &mut ChaCha8Rng| rng.gen_range(-3i64..=3);
    match (kind % 3, n) {
        (0, _) => random_dense_map(rng, n),
        (1, 1) => vec![dadd(&dconst(1, &[0], c(rng)), &dconst(1, &[1], -1))],
        (1, _) => {
            let x = dadd(&dconst(2, &[1, 0], 1), &dconst(2, &[0, 0], c(rng)));
            let mut y = dconst(2, &[0, 1], 1);
            for e in 0..=2u32 {
                y = dadd(&y, &dconst(2, &[e, 0], c(rng)));
            }
            vec![x, y]
        }
        (_, 1) => vec![dadd(&dconst(1, &[1], 1), &dconst(1, &[0], c(rng)))],
        (_, _) => {
            let a = c(rng);
            vec![dadd(&dconst(2, &[0, 1], 1), &dconst(2, &[0, 0], a)), dadd(&dconst(2, &[1, 0], 1), &dconst(2, &[0, 0], -a))]
        }
    }
}

pub fn dense_text(d: &Dense, vars: &[&str]) -> String {
    if d.is_empty() {
        return "0".into();
    }
    d.iter()
        .map(|(e, c)| {
            let mono: Vec<String> = e.iter().zip(vars).filter(|(k, _)| **k > 0).map(|(k, v)| format!("{v}^{k}")).collect();
            if mono.is_empty() {
                format!("({c})")
            } else {
                format!("({c})*{}", mono.join("*"))
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Reduced row echelon form, rows sorted by pivot.
pub fn rref(mut m: Vec<Vec<BigRational>>) -> Vec<Vec<BigRational>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = BigRational::one() / m[row][col].clone();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..cols {
                    let sub = &f * &m[row][c];
                    m[r][c] -= sub;
                }
            }
        }
        row += 1;
    }
    m.truncate(row);
    m
}

/// Invariant polynomials of degree ≤ `d`, as the RREF of coefficient
/// vectors over [`exponents`]`(n, d)`.
pub fn oracle_invariants(phi: &[Dense], d: u32) -> Vec<Vec<BigRational>> {
    let n = phi.len();
    let monos = exponents(n, d);
    // m∘φ for every monomial, by repeated multiplication
    let images: Vec<Dense> = monos
        .iter()
        .map(|e| {
            let mut acc = done(n);
            for (i, k) in e.iter().enumerate() {
                for _ in 0..*k {
                    acc = dmul(&acc, &phi[i]);
                }
            }
            let mut m = Dense::new();
            m.insert(e.clone(), BigRational::one());
            for (k, c) in m {
                let v = acc.entry(k).or_insert_with(BigRational::zero);
                *v -= c;
            }
            acc.retain(|_, c| !c.is_zero());
            acc
        })
        .collect();
    let rows: Vec<Vec<u32>> = images.iter().flat_map(|d| d.keys().cloned()).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    // kernel of the matrix whose columns are the images
    let mat: Vec<Vec<BigRational>> =
        rows.iter().map(|r| images.iter().map(|img| img.get(r).cloned().unwrap_or_else(BigRational::zero)).collect()).collect();
    let red = rref(mat);
    let pivots: Vec<usize> = red.iter().map(|r| r.iter().position(|c| !c.is_zero()).unwrap()).collect();
    let mut kernel = Vec::new();
    for free in (0..monos.len()).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); monos.len()];
        v[free] = BigRational::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -red[r][free].clone();
        }
        kernel.push(v);
    }
    rref(kernel)
}

/// Coefficient vectors of `ℚ`-polynomials over [`exponents`]`(n, d)`, in RREF.
pub fn library_vectors(basis: &[Poly], n: usize, d: u32) -> Vec<Vec<BigRational>> {
    let monos = exponents(n, d);
    let rows = basis
        .iter()
        .map(|p| {
            let mut v = vec![BigRational::zero(); monos.len()];
            for (m, c) in p.terms() {
                let e: Vec<u32> = (0..n).map(|i| m.exp(i)).collect();
                let k = monos.iter().position(|x| *x == e).expect("degree within bound");
                v[k] = c.to_rational().expect("rational coefficient");
            }
            v
        })
        .collect();
    rref(rows)
}
