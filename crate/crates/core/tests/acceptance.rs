//! The twelve acceptance criteria, each with its tolerance and wall-clock
//! limit. Prints one PASS/FAIL line per criterion.
//!
//! A failing criterion is reported but does not fail the process unless
//! `ACCEPTANCE_STRICT` is set, so the rest of the workspace suite still runs.

use std::time::{Duration, Instant};

use char2_invariants::forms::{enumerate_group, is_member, FormKind, FormSpec, GroupKind, Sampler};
use char2_invariants::identities::{self as id, IdentityReport, Method, Mode, DEFAULT_SEED};
use char2_invariants::ring::gf_make_field;
use char2_invariants::Result;

fn spec(kind: FormKind, nu: usize, m: u32, alpha: Option<u32>) -> FormSpec {
    FormSpec::new(kind, nu, gf_make_field(m, None).unwrap(), alpha).unwrap()
}

/// Collects sub-results; the first failure is kept as the detail.
#[derive(Default)]
struct Outcome {
    ok: bool,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Outcome {
        Outcome { ok: true, ..Outcome::default() }
    }

    fn require(&mut self, cond: bool, what: impl Into<String>) {
        if !cond {
            self.ok = false;
            self.failures.push(what.into());
        }
    }

    fn report(&mut self, r: &IdentityReport, what: &str) {
        if !r.passed() {
            let bad: Vec<&str> = r.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
            self.require(false, format!("{what}: {}", bad.join("; ")));
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

fn c1() -> Result<Outcome> {
    let mut o = Outcome::new();
    let r = id::verify_nodd(3, 0, Mode::Symbolic, DEFAULT_SEED)?;
    o.report(&r, "n=3 symbolic");
    o.require(r.witnesses.get("det").map(String::as_str) == Some("2*a12*a13*a23"), "det(A) = 2*a12*a13*a23");
    for n in [5, 7] {
        let r = id::verify_nodd(n, 200, Mode::Numeric, DEFAULT_SEED)?;
        o.report(&r, &format!("n={n} numeric"));
    }
    Ok(o)
}

fn c2() -> Result<Outcome> {
    let mut o = Outcome::new();
    let lemmas: [(&str, fn(usize, usize, Mode, u64) -> Result<IdentityReport>); 3] =
        [("neven", id::verify_neven), ("difference", id::verify_difference), ("multiplicity", id::verify_multiplicity)];
    for (name, f) in lemmas {
        for n in [2, 4] {
            let r = f(n, 0, Mode::Symbolic, DEFAULT_SEED)?;
            o.report(&r, &format!("{name} n={n}"));
            o.require(r.method == Method::Symbolic, format!("{name} n={n} symbolic"));
        }
        for n in [6, 8] {
            let r = f(n, 100, Mode::Numeric, DEFAULT_SEED)?;
            o.report(&r, &format!("{name} n={n}"));
        }
    }
    Ok(o)
}

fn c3() -> Result<Outcome> {
    let mut o = Outcome::new();
    let r = id::pfaffian_properties(200, DEFAULT_SEED)?;
    o.report(&r, "pfaffian properties");
    Ok(o)
}

fn c4() -> Result<Outcome> {
    let mut o = Outcome::new();
    let g2 = spec(FormKind::OrthEven, 1, 1, None);
    let w = id::extract_s(&g2)?;
    o.require(w.s_mod2.to_string() == "x1^2*x2", format!("S mod 2 = {}", w.s_mod2));
    let r = id::verify_mainlemma(&g2, DEFAULT_SEED)?;
    o.report(&r, "q=2");
    o.require(r.witnesses.get("f").map(String::as_str) == Some("P20*P20_q"), "f = P20*P20_q");
    let r = id::verify_mainlemma(&spec(FormKind::OrthEven, 1, 2, None), DEFAULT_SEED)?;
    o.report(&r, "q=4");
    let r = id::verify_mainlemma(&spec(FormKind::OrthEvenAlpha, 1, 1, Some(1)), DEFAULT_SEED)?;
    o.report(&r, "alpha");
    o.note(format!("alpha: f = {}", r.witnesses.get("f").cloned().unwrap_or_default()));
    Ok(o)
}

fn c5() -> Result<Outcome> {
    let mut o = Outcome::new();
    let r = id::verify_main_identity(&spec(FormKind::OrthEven, 1, 1, None), Mode::Symbolic, 128, DEFAULT_SEED)?;
    o.report(&r, "n=2");
    o.require(r.witnesses.get("Q").map(String::as_str) == Some("P21^3 + P20^3*P21"), "Q");
    o.require(r.witnesses.get("denominator").map(String::as_str) == Some("P20^2"), "denominator");
    o.require(
        r.checks.iter().any(|c| c.name.starts_with("Q found") && c.passed && c.method == Method::Symbolic),
        "Q certified symbolically",
    );
    let r = id::verify_main_identity(&spec(FormKind::OrthEven, 2, 1, None), Mode::Pit, 128, DEFAULT_SEED)?;
    o.report(&r, "n=4");
    let pit = r.checks.iter().find(|c| c.name == "P0* P_nn = Q by PIT");
    o.require(pit.is_some_and(|c| c.passed), "n=4 PIT check present and passing");
    o.require(r.trials >= 128, format!("{} trials", r.trials));
    let bound = r.error_bound.unwrap_or(1.0);
    o.require(bound < 2f64.powi(-8), format!("bound {bound:.3e}"));
    o.note(format!("n=4: {} trials, bound {bound:.2e}", r.trials));
    Ok(o)
}

fn c6() -> Result<Outcome> {
    let mut o = Outcome::new();
    let r = id::verify_det_lemma(&spec(FormKind::OrthEven, 1, 1, None), None, Mode::Symbolic, 0, DEFAULT_SEED)?;
    o.report(&r, "n=2");
    let r = id::verify_det_lemma(&spec(FormKind::OrthEven, 2, 1, None), Some(&[vec![0, 1, 2, 3]]), Mode::Pit, 64, DEFAULT_SEED)?;
    o.report(&r, "n=4");
    o.require(r.method == Method::Pit, "n=4 by PIT");
    Ok(o)
}

fn c7() -> Result<Outcome> {
    let mut o = Outcome::new();
    let r = id::verify_thm_second(&spec(FormKind::OrthOdd, 1, 1, None), DEFAULT_SEED)?;
    o.report(&r, "O_3(F_2)");
    if let Some(ce) = &r.counterexample {
        o.note(format!("counterexample {}", ce.replace('\n', " | ")));
    }
    Ok(o)
}

fn c8() -> Result<Outcome> {
    let mut o = Outcome::new();
    for m in [1, 2] {
        let r = id::verify_thm_s1(&spec(FormKind::PsOdd, 1, m, None), DEFAULT_SEED)?;
        o.report(&r, &format!("q={}", 1 << m));
    }
    Ok(o)
}

fn c9() -> Result<Outcome> {
    let mut o = Outcome::new();
    for m in [1, 2] {
        let r = id::verify_sqrt_det(&gf_make_field(m, None)?, 100, DEFAULT_SEED)?;
        o.report(&r, &format!("GF({})", 1 << m));
    }
    Ok(o)
}

fn c10() -> Result<Outcome> {
    let mut o = Outcome::new();
    let r = id::verify_thm_s2(&spec(FormKind::PsEven, 0, 1, None), Mode::Symbolic, 0, DEFAULT_SEED)?;
    o.report(&r, "nu=0");
    let r = id::verify_thm_s2(&spec(FormKind::PsEven, 1, 1, None), Mode::Pit, 64, DEFAULT_SEED)?;
    o.report(&r, "nu=1");
    o.require(r.method == Method::Pit, "nu=1 by PIT");
    Ok(o)
}

fn c11() -> Result<Outcome> {
    let mut o = Outcome::new();
    let cases = [
        (spec(FormKind::OrthEven, 2, 1, None), GroupKind::Orthogonal),
        (spec(FormKind::OrthEven, 2, 1, None), GroupKind::GA),
        (spec(FormKind::PsOdd, 1, 2, None), GroupKind::PseudoSymplectic),
    ];
    for (s, g) in &cases {
        let gens = id::claimed_invariants(s, *g, s.n())?;
        let r = id::fuzz_invariance(s, *g, &gens, 100, DEFAULT_SEED)?;
        o.require(r.passed(), format!("{s} under {g}: {} violations", r.violations.len()));
    }
    let s = spec(FormKind::OrthEven, 1, 1, None);
    let mut gens = id::claimed_invariants(&s, GroupKind::Orthogonal, 2)?;
    id::mutate(&mut gens)?;
    let r = id::fuzz_invariance(&s, GroupKind::Orthogonal, &gens, 10, DEFAULT_SEED)?;
    o.require(r.first_detection().is_some(), "mutation P21+X1 detected within 10 trials");
    o.note(format!("mutation caught at trial {:?}", r.first_detection()));
    Ok(o)
}

fn c12() -> Result<Outcome> {
    let mut o = Outcome::new();
    let g2 = spec(FormKind::OrthEven, 1, 1, None);
    let orth = enumerate_group(&g2, GroupKind::Orthogonal)?;
    let ga = enumerate_group(&g2, GroupKind::GA)?;
    o.require(orth.len() == 2, format!("|O_2(F_2)| = {}", orth.len()));
    o.require(ga.len() == 6, format!("|G_A| = {}", ga.len()));
    for (s, full) in [(g2.clone(), true), (spec(FormKind::OrthEven, 1, 2, None), true), (spec(FormKind::OrthEven, 2, 1, None), true)] {
        let elems = if full { enumerate_group(&s, GroupKind::Orthogonal)? } else { Vec::new() };
        let mut inside = true;
        for t in &elems {
            inside &= is_member(t, &s, GroupKind::GA)?;
        }
        o.require(inside, format!("O_n in G_A for {s}"));
        o.note(format!("{s}: {} elements", elems.len()));
    }
    let s = spec(FormKind::OrthEvenAlpha, 2, 1, Some(1));
    let mut sampler = Sampler::new(&s, GroupKind::Orthogonal, DEFAULT_SEED)?;
    let mut inside = true;
    for _ in 0..50 {
        inside &= is_member(&sampler.sample()?, &s, GroupKind::GA)?;
    }
    o.require(inside, format!("sampled O_n in G_A for {s}"));
    Ok(o)
}

fn main() {
    type Criterion = (u32, &'static str, u64, fn() -> Result<Outcome>);
    let criteria: [Criterion; 12] = [
        (1, "odd symmetric determinants are even", 5, c1),
        (2, "even lemmas at n = 2, 4 symbolic and 6, 8 numeric", 30, c2),
        (3, "Pfaffian properties", 10, c3),
        (4, "S and the polynomial f", 5, c4),
        (5, "rational expression for P_nn", 120, c5),
        (6, "D as a Pfaffian", 60, c6),
        (7, "odd orthogonal group fixes X_n and P_{n-1,k}", 60, c7),
        (8, "odd pseudo-symplectic invariants", 30, c8),
        (9, "square roots of structured determinants", 30, c9),
        (10, "even pseudo-symplectic identity", 120, c10),
        (11, "invariance fuzzing", 120, c11),
        (12, "group orders and O_n in G_A", 30, c12),
    ];
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let (ok, detail) = match outcome {
            Ok(o) => {
                let mut parts = o.failures.clone();
                parts.extend(o.notes);
                (o.ok, parts.join("; "))
            }
            Err(e) => (false, format!("error: {e}")),
        };
        let pass = ok && in_time;
        if !pass {
            failed += 1;
        }
        let time = if in_time { String::new() } else { format!(" over the {limit}s limit;") };
        println!(
            "{} criterion {id:>2}: {name} [{:.2}s / {limit}s]{time} {detail}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
        );
    }
    println!("acceptance: {} of 12 criteria pass", 12 - failed);
    if failed > 0 && std::env::var_os("ACCEPTANCE_STRICT").is_some() {
        std::process::exit(1);
    }
}
