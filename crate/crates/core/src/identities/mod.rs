//! Verification of the determinant, Pfaffian and invariant identities, with
//! witness extraction.
//!
//! Every verifier returns an [`IdentityReport`]. A report passes when all of
//! its checks pass; symbolic checks compare fully expanded polynomials, PIT
//! checks carry their trial count and Schwartz-Zippel bound, and numeric
//! checks run on random integer matrices.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::mpoly::{MPoly, PolyRing};
use crate::pit::{AnsatzSolution, Certificate, PitVerdict};
use crate::ring::{CoeffRing, Embedding, Gf, Integers};

mod fuzz;
mod lemmas;
mod orthogonal;
mod pseudo;

pub use fuzz::{claimed_invariants, fuzz_invariance, mutate, FuzzReport, Violation};
pub use lemmas::{pfaffian_properties, verify_difference, verify_multiplicity, verify_neven, verify_nodd};
pub use orthogonal::{
    extract_s, verify_det_lemma, verify_main_identity, verify_mainlemma, verify_pftimes, verify_thm_second,
    MainIdentityWitness, SWitness,
};
pub use pseudo::{sqrt_det, verify_sqrt_det, verify_thm_s1, verify_thm_s2};

/// Report format version.
pub const SCHEMA: u32 = 1;
/// Default seed for every randomized check.
pub const DEFAULT_SEED: u64 = 0xD1C50;

/// How a single check was decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Symbolic,
    Enumeration,
    Numeric,
    Pit,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Symbolic => "symbolic",
            Method::Enumeration => "enumeration",
            Method::Numeric => "numeric",
            Method::Pit => "pit",
        })
    }
}

/// What the caller asks for. `Auto` picks symbolic expansion where it is
/// cheap and evaluation otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    Symbolic,
    Pit,
    Numeric,
    #[default]
    Auto,
}

impl Mode {
    fn evaluation(self) -> bool {
        matches!(self, Mode::Pit | Mode::Numeric | Mode::Auto)
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "symbolic" => Ok(Mode::Symbolic),
            "pit" => Ok(Mode::Pit),
            "numeric" => Ok(Mode::Numeric),
            "auto" => Ok(Mode::Auto),
            _ => Err(Error::Parse(format!("unknown mode {s:?}; expected symbolic, pit, numeric or auto"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub method: Method,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Parameters a verification ran with.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub form: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub indices: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub schema: u32,
    pub statement: String,
    pub params: Params,
    pub method: Method,
    pub verdict: Verdict,
    /// Named polynomials in the textual format.
    pub witnesses: BTreeMap<String, String>,
    /// Ansatz solutions as `{generator monomial: coefficient}`.
    pub solutions: BTreeMap<String, BTreeMap<String, String>>,
    pub checks: Vec<Check>,
    /// Total PIT trials over all checks.
    pub trials: usize,
    /// Largest per-trial Schwartz-Zippel bound among the PIT checks.
    pub error_bound: Option<f64>,
    pub elapsed_ms: Option<u64>,
    pub counterexample: Option<String>,
    pub notes: Vec<String>,
}

impl IdentityReport {
    pub fn new(statement: &str, params: Params) -> IdentityReport {
        IdentityReport {
            schema: SCHEMA,
            statement: statement.into(),
            params,
            method: Method::Symbolic,
            verdict: Verdict::Fail,
            witnesses: BTreeMap::new(),
            solutions: BTreeMap::new(),
            checks: Vec::new(),
            trials: 0,
            error_bound: None,
            elapsed_ms: None,
            counterexample: None,
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn check(&mut self, name: impl Into<String>, method: Method, passed: bool) -> bool {
        self.checks.push(Check { name: name.into(), method, passed, detail: None });
        passed
    }

    pub fn check_with(&mut self, name: impl Into<String>, method: Method, passed: bool, detail: impl Into<String>) -> bool {
        self.checks.push(Check { name: name.into(), method, passed, detail: Some(detail.into()) });
        passed
    }

    /// Records a PIT verdict as a check.
    pub fn check_pit(&mut self, name: impl Into<String>, v: &PitVerdict) -> bool {
        let name = name.into();
        self.trials += v.trials;
        if v.trials > 0 {
            self.error_bound = Some(self.error_bound.unwrap_or(0.0).max(v.error_bound));
        }
        if let (Some(p), None) = (&v.counterexample, &self.counterexample) {
            self.counterexample = Some(format!("{name}: point {}", hex_list(p)));
        }
        let detail = format!("{} trials over GF(2^{}), bound {:.3e} per trial", v.trials, v.field_bits, v.error_bound);
        self.check_with(name, if v.trials > 0 { Method::Pit } else { Method::Symbolic }, v.equal, detail)
    }

    pub fn witness<R: CoeffRing>(&mut self, name: &str, p: &MPoly<R>) {
        self.witnesses.insert(name.into(), p.to_string());
    }

    pub fn witness_text(&mut self, name: &str, text: impl Into<String>) {
        self.witnesses.insert(name.into(), text.into());
    }

    pub fn solution(&mut self, name: &str, s: &AnsatzSolution) {
        self.witnesses.insert(name.into(), s.expr.to_text());
        self.solutions.insert(name.into(), s.expr.to_map());
        if s.nullity > 0 {
            self.notes.push(format!("{name}: representation not unique, solution space of dimension {}", s.nullity));
        }
        if let Certificate::Pit(v) = &s.certificate {
            self.check_pit(format!("{name} certificate"), v);
        }
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Sets the verdict, the summary method and the elapsed time.
    pub fn finish(mut self, start: Instant) -> IdentityReport {
        self.verdict = if !self.checks.is_empty() && self.checks.iter().all(|c| c.passed) {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        self.method = self.checks.iter().map(|c| c.method).max().unwrap_or(Method::Symbolic);
        self.elapsed_ms = Some(start.elapsed().as_millis() as u64);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

fn hex_list(p: &[u32]) -> String {
    let parts: Vec<String> = p.iter().map(|v| format!("0x{v:x}")).collect();
    format!("[{}]", parts.join(", "))
}

/// Indeterminate entries `a_ij` of a generic matrix over `Z`.
pub(crate) struct Indeterminates {
    pub ring: PolyRing<Integers>,
    pub names: Vec<String>,
    slots: BTreeMap<(usize, usize), usize>,
}

impl Indeterminates {
    /// One indeterminate per pair `i < j` (and `i == j` when `diagonal`) for
    /// each prefix in `prefixes`, e.g. `["a", "b"]`.
    pub fn new(n: usize, diagonal: bool, prefixes: &[&str]) -> Result<Indeterminates> {
        let mut names = Vec::new();
        let mut slots = BTreeMap::new();
        for (p, prefix) in prefixes.iter().enumerate() {
            for i in 0..n {
                for j in i..n {
                    if i == j && !diagonal {
                        continue;
                    }
                    slots.insert((p * n + i, j), names.len());
                    let sep = if n > 9 { "_" } else { "" };
                    names.push(format!("{prefix}{}{sep}{}", i + 1, j + 1));
                }
            }
        }
        let ring = PolyRing::new(Integers, names.len().max(1), 2, false)?;
        Ok(Indeterminates { ring, names, slots })
    }

    /// Entry `(i, j)`, `i <= j`, of the matrix for prefix `p`.
    pub fn get(&self, p: usize, n: usize, i: usize, j: usize) -> MPoly<Integers> {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        match self.slots.get(&(p * n + a, b)) {
            Some(&s) => self.ring.var(s),
            None => self.ring.zero(),
        }
    }

    pub fn show(&self, f: &MPoly<Integers>) -> String {
        f.display_with(&self.names)
    }
}

pub(crate) fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Random symmetric integer matrix with entries in `[-9, 9]`; the diagonal
/// is zero unless `diagonal`.
pub(crate) fn random_symmetric(r: &mut ChaCha8Rng, n: usize, diagonal: bool) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i..n {
            if i == j && !diagonal {
                continue;
            }
            let v = r.gen_range(-9..=9);
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    m
}

pub(crate) fn int_matrix(m: &[Vec<i64>]) -> Matrix<num_bigint::BigInt> {
    Matrix::from_fn(m.len(), m.len(), |i, j| m[i][j].into())
}

/// Evaluates every entry at a point of the extension field.
pub(crate) fn eval_matrix(m: &Matrix<MPoly<Gf>>, emb: &Embedding, point: &[u32]) -> Result<Matrix<u32>> {
    m.try_map(|p| p.evaluate(emb, point))
}
