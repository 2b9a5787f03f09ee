//! `char2inv`: generate invariants, verify identities, enumerate groups and
//! fuzz invariance from the command line.
//!
//! Exit codes: 0 pass, 1 identity or invariance failure, 2 usage error,
//! 3 resource guardrail.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use char2_invariants::forms::{
    enumerate_group, format_element, is_closed, parse_field, parse_hex, FormKind, FormSpec, GroupKind,
};
use char2_invariants::identities::{
    self as id, claimed_invariants, fuzz_invariance, mutate, FuzzReport, IdentityReport, Mode, DEFAULT_SEED,
};
use char2_invariants::invariants::{
    abar_family, ga_family_gf, natural_family_gf, orth_family_int, restricted_family_gf, tg_family, InvariantFamily,
};
use char2_invariants::ring::CoeffRing;
use char2_invariants::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "char2inv", version, about = "Invariants of quadratic and symmetric forms in characteristic two")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the invariant family P_n0..P_n,kmax in the textual format.
    Gen {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long, default_value_t = 2)]
        kmax: usize,
        /// Coefficients: gf for GF(q), int for Z (orthogonal forms only).
        #[arg(long, value_enum, default_value_t = RingArg::Gf)]
        ring: RingArg,
        #[arg(long, value_enum, default_value_t = FamilyArg::Natural)]
        family: FamilyArg,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Verify a statement and print its report.
    Verify {
        /// lemma-2.1..2.4, pfaffian-properties, lemma-3.1..3.3, thm-3.1,
        /// thm-3.2, thm-4.1, lemma-4.2 or thm-4.3.
        statement: String,
        #[command(flatten)]
        form: FormArgs,
        /// Matrix size for the integer lemmas.
        #[arg(long)]
        n: Option<usize>,
        /// Comma-separated index list for lemma-3.3, e.g. 0,1,2,3.
        #[arg(long)]
        indices: Option<String>,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Sample group elements and check σ_T(f) = f on the claimed invariants.
    Fuzz {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long, value_parser = parse_group)]
        group: Option<GroupKind>,
        /// Highest k in P_nk (default n).
        #[arg(long)]
        kmax: Option<usize>,
        /// Replace P_n1 by P_n1 + X1, which should be caught.
        #[arg(long)]
        mutate: bool,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Enumerate a group by exhaustive search and print its order.
    Enumerate {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long, value_parser = parse_group)]
        group: Option<GroupKind>,
        /// Print every element.
        #[arg(long)]
        dump: bool,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args, Clone)]
struct FormArgs {
    /// Form kind (orth-even, orth-odd, orth-even-alpha, ps-odd, ps-even) or
    /// a full spec string form:<kind>;nu=..;q=..
    #[arg(long)]
    form: Option<String>,
    #[arg(long)]
    nu: Option<usize>,
    /// Field size or descriptor GF(2^m):modulus=0x..
    #[arg(long, default_value = "2")]
    q: String,
    /// α for orth-even-alpha, as hex bits: the form X1^2 α + X1 X2 + X2^2 α
    /// must be anisotropic.
    #[arg(long)]
    alpha: Option<String>,
}

#[derive(Args, Clone)]
struct RunArgs {
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED, value_parser = parse_seed)]
    seed: u64,
}

#[derive(Args, Clone)]
struct OutArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    /// Default: text for gen and enumerate, json for verify and fuzz.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Leave elapsed times out so that output is reproducible.
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum RingArg {
    Gf,
    Int,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Natural,
    Ga,
    Abar,
    Tg,
    Restricted,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Symbolic,
    Pit,
    Numeric,
    Auto,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Symbolic => Mode::Symbolic,
            ModeArg::Pit => Mode::Pit,
            ModeArg::Numeric => Mode::Numeric,
            ModeArg::Auto => Mode::Auto,
        }
    }
}

fn parse_group(s: &str) -> Result<GroupKind, String> {
    s.parse::<GroupKind>().map_err(|e| e.to_string())
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let s = s.trim();
    match s.strip_prefix("0x") {
        Some(h) => u64::from_str_radix(h, 16),
        None => s.parse(),
    }
    .map_err(|e| e.to_string())
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure { code: if e.is_guardrail() { 3 } else { 2 }, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

impl FormArgs {
    fn spec(&self, default: FormKind) -> Result<FormSpec, Failure> {
        let form = self.form.as_deref().unwrap_or(default.name());
        if form.starts_with("form:") {
            return Ok(form.parse()?);
        }
        let kind: FormKind = form.parse()?;
        let field = parse_field(&self.q)?;
        let alpha = match &self.alpha {
            Some(a) => Some(parse_hex(a).ok_or_else(|| usage(format!("bad --alpha {a:?}")))?),
            None if kind == FormKind::OrthEvenAlpha => Some(default_alpha(&field)?),
            None => None,
        };
        let nu = self.nu.unwrap_or(if kind == FormKind::PsEven { 0 } else { 1 });
        Ok(FormSpec::new(kind, nu, field, alpha)?)
    }
}

/// The smallest α that makes the alpha form anisotropic.
fn default_alpha(field: &char2_invariants::ring::Gf) -> Result<u32, Failure> {
    for a in 1..field.size() as u32 {
        if char2_invariants::ring::is_valid_alpha(&field.elem(a)?) {
            return Ok(a);
        }
    }
    Err(usage(format!("no valid alpha in {field}")))
}

impl OutArgs {
    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn emit(&self, text: &str) -> Result<(), Failure> {
        let mut text = text.to_string();
        if !text.ends_with('\n') {
            text.push('\n');
        }
        match &self.out {
            Some(path) => std::fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Gen { form, kmax, ring, family, out } => cmd_gen(&form, kmax, ring, family, &out),
        Command::Verify { statement, form, n, indices, run, mode, out } => {
            let mut report = dispatch(&statement, &form, n, indices.as_deref(), &run, mode.into())?;
            report.statement = statement;
            if out.no_timestamp {
                report.elapsed_ms = None;
            }
            let text = match out.format_or(Format::Json) {
                Format::Json => report.to_json(),
                Format::Text => report_text(&report),
            };
            out.emit(&text)?;
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Fuzz { form, group, kmax, mutate: m, run, out } => {
            let spec = form.spec(FormKind::OrthEven)?;
            let group = group.unwrap_or(spec.kind().natural_group());
            let mut gens = claimed_invariants(&spec, group, kmax.unwrap_or(spec.n()))?;
            if m {
                mutate(&mut gens)?;
            }
            let mut report = fuzz_invariance(&spec, group, &gens, run.trials.unwrap_or(100), run.seed)?;
            if out.no_timestamp {
                report.elapsed_ms = None;
            }
            let text = match out.format_or(Format::Json) {
                Format::Json => report.to_json(),
                Format::Text => fuzz_text(&report),
            };
            out.emit(&text)?;
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Enumerate { form, group, dump, out } => {
            let spec = form.spec(FormKind::OrthEven)?;
            let group = group.unwrap_or(spec.kind().natural_group());
            let elems = enumerate_group(&spec, group)?;
            let closed = if elems.len() <= 2000 { Some(is_closed(&elems, spec.field())?) } else { None };
            let text = match out.format_or(Format::Text) {
                Format::Json => {
                    let mut v = serde_json::json!({
                        "schema": id::SCHEMA,
                        "form": spec.to_string(),
                        "group": group.to_string(),
                        "order": elems.len(),
                        "closed": closed,
                    });
                    if dump {
                        v["elements"] = elems.iter().map(|t| format_element(t, &spec)).collect();
                    }
                    serde_json::to_string_pretty(&v).expect("json")
                }
                Format::Text => {
                    let mut s = format!("# {spec}\n# group={group}\norder: {}\n", elems.len());
                    if let Some(c) = closed {
                        let _ = writeln!(s, "closed: {c}");
                    }
                    if dump {
                        for t in &elems {
                            let _ = writeln!(s, "{}", format_element(t, &spec));
                        }
                    }
                    s
                }
            };
            out.emit(&text)?;
            Ok(if closed == Some(false) { 1 } else { 0 })
        }
    }
}

fn family_text<R: CoeffRing>(spec: &FormSpec, fam: &InvariantFamily<R>, family: &str, format: Format) -> Result<String, Failure> {
    let n = fam.ring().nvars();
    if let Format::Json = format {
        let members: Vec<serde_json::Value> = fam
            .members()
            .iter()
            .enumerate()
            .map(|(k, p)| {
                Ok(serde_json::json!({
                    "name": format!("P_{n}{k}"),
                    "variant": fam.variant(k)?.tag(),
                    "poly": p.to_string(),
                }))
            })
            .collect::<Result<_, Failure>>()?;
        let v = serde_json::json!({
            "schema": id::SCHEMA,
            "form": spec.to_string(),
            "family": family,
            "ring": fam.ring().header(),
            "members": members,
        });
        return Ok(serde_json::to_string_pretty(&v).expect("json"));
    }
    let mut s = format!("# {spec}\n# family={family} kmax={}\n", fam.kmax());
    for (k, p) in fam.members().iter().enumerate() {
        let _ = writeln!(s, "# P_{n}{k} variant={}", fam.variant(k)?.tag());
        let _ = writeln!(s, "{}", p.to_text());
    }
    Ok(s)
}

fn cmd_gen(form: &FormArgs, kmax: usize, ring: RingArg, family: FamilyArg, out: &OutArgs) -> Result<u8, Failure> {
    let spec = form.spec(FormKind::OrthEven)?;
    let format = out.format_or(Format::Text);
    let text = match (ring, family) {
        (RingArg::Gf, FamilyArg::Natural) => family_text(&spec, &natural_family_gf(&spec, kmax)?, "natural", format)?,
        (RingArg::Gf, FamilyArg::Ga) => family_text(&spec, &ga_family_gf(&spec, kmax)?, "ga", format)?,
        (RingArg::Gf, FamilyArg::Restricted) => family_text(&spec, &restricted_family_gf(&spec, kmax)?, "restricted", format)?,
        (RingArg::Int, FamilyArg::Natural) => family_text(&spec, &orth_family_int(&spec, kmax)?, "natural", format)?,
        (RingArg::Int, FamilyArg::Abar) => family_text(&spec, &abar_family(&spec, kmax)?, "abar", format)?,
        (RingArg::Int, FamilyArg::Tg) => family_text(&spec, &tg_family(&spec, kmax)?, "tg", format)?,
        (RingArg::Gf, FamilyArg::Abar | FamilyArg::Tg) => return Err(usage("abar and tg families live over Z; use --ring int")),
        (RingArg::Int, FamilyArg::Ga | FamilyArg::Restricted) => {
            return Err(usage("ga and restricted families live over GF(q); use --ring gf"))
        }
    };
    out.emit(&text)?;
    Ok(0)
}

fn parse_indices(s: &str) -> Result<Vec<Vec<usize>>, Failure> {
    s.split(';')
        .map(|list| {
            list.split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| usage(format!("bad index {t:?} in --indices"))))
                .collect()
        })
        .collect()
}

fn dispatch(
    statement: &str,
    form: &FormArgs,
    n: Option<usize>,
    indices: Option<&str>,
    run: &RunArgs,
    mode: Mode,
) -> Result<IdentityReport, Failure> {
    let seed = run.seed;
    let trials = |d: usize| run.trials.unwrap_or(d);
    let report = match statement {
        "lemma-2.1" => id::verify_nodd(n.unwrap_or(3), trials(200), mode, seed)?,
        "lemma-2.2" => id::verify_neven(n.unwrap_or(4), trials(100), mode, seed)?,
        "lemma-2.3" => id::verify_difference(n.unwrap_or(4), trials(100), mode, seed)?,
        "lemma-2.4" => id::verify_multiplicity(n.unwrap_or(4), trials(100), mode, seed)?,
        "pfaffian-properties" => id::pfaffian_properties(trials(200), seed)?,
        "lemma-3.1" => id::verify_pftimes(&form.spec(FormKind::OrthEven)?, mode, trials(64), seed)?,
        "lemma-3.2" => id::verify_mainlemma(&form.spec(FormKind::OrthEven)?, seed)?,
        "thm-3.1" => id::verify_main_identity(&form.spec(FormKind::OrthEven)?, mode, trials(128), seed)?,
        "lemma-3.3" => {
            let lists = indices.map(parse_indices).transpose()?;
            id::verify_det_lemma(&form.spec(FormKind::OrthEven)?, lists.as_deref(), mode, trials(64), seed)?
        }
        "thm-3.2" => id::verify_thm_second(&form.spec(FormKind::OrthOdd)?, seed)?,
        "thm-4.1" => id::verify_thm_s1(&form.spec(FormKind::PsOdd)?, seed)?,
        "lemma-4.2" => id::verify_sqrt_det(&parse_field(&form.q)?, trials(100), seed)?,
        "thm-4.3" => id::verify_thm_s2(&form.spec(FormKind::PsEven)?, mode, trials(64), seed)?,
        other => {
            return Err(usage(format!(
                "unknown statement {other:?}; expected one of lemma-2.1, lemma-2.2, lemma-2.3, lemma-2.4, \
                 pfaffian-properties, lemma-3.1, lemma-3.2, lemma-3.3, thm-3.1, thm-3.2, thm-4.1, lemma-4.2, thm-4.3"
            )))
        }
    };
    Ok(report)
}

fn report_text(r: &IdentityReport) -> String {
    let mut s = String::new();
    let verdict = if r.passed() { "PASS" } else { "FAIL" };
    let _ = writeln!(s, "{} {} ({})", verdict, r.statement, r.method);
    if let Some(form) = &r.params.form {
        let _ = writeln!(s, "spec: {form}");
    }
    for c in &r.checks {
        let mark = if c.passed { "ok  " } else { "FAIL" };
        let _ = write!(s, "  {mark} {} [{}]", c.name, c.method);
        if let Some(d) = &c.detail {
            let _ = write!(s, ": {d}");
        }
        s.push('\n');
    }
    for (name, w) in &r.witnesses {
        let _ = writeln!(s, "  {name} = {w}");
    }
    if let Some(ce) = &r.counterexample {
        let _ = writeln!(s, "counterexample:\n{ce}");
    }
    for note in &r.notes {
        let _ = writeln!(s, "note: {note}");
    }
    if let Some(ms) = r.elapsed_ms {
        let _ = writeln!(s, "elapsed: {ms} ms");
    }
    s
}

fn fuzz_text(r: &FuzzReport) -> String {
    let mut s = format!(
        "{} fuzz {} under {}: {} trials, {} violations\n",
        if r.passed() { "PASS" } else { "FAIL" },
        r.form,
        r.group,
        r.trials,
        r.violations.len()
    );
    let _ = writeln!(s, "generators: {}", r.generators.join(", "));
    if let Some(v) = r.violations.first() {
        let _ = writeln!(s, "first violation at trial {} on {}:\n{}", v.trial, v.generator, v.element);
    }
    s
}
