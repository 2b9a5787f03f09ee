//! Randomized identity testing, and expressing a polynomial in a set of
//! generators by linear algebra over evaluations.
//!
//! Both work in an extension `GF(2^(m s))` of the coefficient field. Points
//! are drawn from a ChaCha stream per trial, so a seed fixes every verdict.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mpoly::MPoly;
use crate::ring::{Embedding, Gf};

/// Bits of the evaluation field unless configured otherwise.
pub const DEFAULT_EXT_BITS: u32 = 16;
/// Largest monomial basis the ansatz solver will set up.
pub const MAX_BASIS: usize = 2500;
/// Extra evaluation rows beyond the number of unknowns.
pub const OVERSAMPLING: usize = 40;
const RESAMPLES: u64 = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct PitConfig {
    pub trials: usize,
    /// Target size of the evaluation field in bits; rounded up to a multiple
    /// of the base degree.
    pub ext_bits: u32,
    pub seed: u64,
    /// Reject inputs of larger total degree.
    pub max_degree: Option<u64>,
}

impl Default for PitConfig {
    fn default() -> Self {
        PitConfig { trials: 64, ext_bits: DEFAULT_EXT_BITS, seed: 0xD1C50, max_degree: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PitVerdict {
    pub equal: bool,
    pub trials: usize,
    /// Schwartz-Zippel bound `degree / |F|` for a single trial.
    pub error_bound: f64,
    pub field_bits: u32,
    /// A point (one entry per slot, as bits of the evaluation field) where
    /// the two sides differ.
    pub counterexample: Option<Vec<u32>>,
}

impl PitVerdict {
    /// Probability that every trial passed although the sides differ.
    pub fn total_error(&self) -> f64 {
        if self.error_bound == 0.0 {
            return 0.0;
        }
        self.error_bound.powi(self.trials as i32)
    }
}

/// `GF(2^(m s))` with `m s >= bits`, embedding `base`.
pub fn extension(base: &Gf, bits: u32) -> Result<Embedding> {
    let m = base.degree();
    Embedding::new(base, bits.div_ceil(m).max(1))
}

/// A uniform point of `target^slots`, from stream `index` of `seed`.
pub fn sample_point(target: &Gf, seed: u64, index: u64, slots: usize) -> Vec<u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let size = target.size();
    (0..slots).map(|_| rng.gen_range(0..size) as u32).collect()
}

fn check_degree(emb: &Embedding, degree: u64) -> Result<()> {
    let bits = emb.target().degree();
    if (emb.target().size() as u128) <= 2 * degree as u128 {
        return Err(Error::DegreeTooLarge { degree, bits });
    }
    Ok(())
}

/// Runs `test` at `cfg.trials` random points of the extension field. The
/// test returns `None` to reject a point (it is then resampled), otherwise
/// whether the identity held there. `degree` bounds the total degree of the
/// difference being tested.
pub fn pit_check<F>(base: &Gf, slots: usize, degree: u64, cfg: &PitConfig, test: F) -> Result<PitVerdict>
where
    F: Fn(&Embedding, &[u32]) -> Result<Option<bool>> + Sync,
{
    if let Some(max) = cfg.max_degree {
        if degree > max {
            return Err(Error::DegreeTooLarge { degree, bits: cfg.ext_bits });
        }
    }
    let emb = extension(base, cfg.ext_bits)?;
    check_degree(&emb, degree)?;
    let target = emb.target();
    let outcomes: Vec<(bool, Vec<u32>)> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| {
            for attempt in 0..RESAMPLES {
                let point = sample_point(target, cfg.seed, t * RESAMPLES + attempt, slots);
                if let Some(ok) = test(&emb, &point)? {
                    return Ok((ok, point));
                }
            }
            Err(Error::SamplingBudgetExceeded(RESAMPLES))
        })
        .collect::<Result<_>>()?;
    let counterexample = outcomes.into_iter().find(|(ok, _)| !ok).map(|(_, p)| p);
    Ok(PitVerdict {
        equal: counterexample.is_none(),
        trials: cfg.trials,
        error_bound: degree as f64 / target.size() as f64,
        field_bits: target.degree(),
        counterexample,
    })
}

/// Schwartz-Zippel test of `a = b`. Syntactically equal inputs short-circuit
/// with no trials and bound 0.
pub fn pit_equal(a: &MPoly<Gf>, b: &MPoly<Gf>, cfg: &PitConfig) -> Result<PitVerdict> {
    if a.ring() != b.ring() {
        return Err(Error::RingMismatch);
    }
    let bits = a.ring().coeffs().degree() * cfg.ext_bits.div_ceil(a.ring().coeffs().degree()).max(1);
    if a == b {
        return Ok(PitVerdict { equal: true, trials: 0, error_bound: 0.0, field_bits: bits, counterexample: None });
    }
    let degree = a.total_degree().max(b.total_degree());
    pit_check(a.ring().coeffs(), a.ring().slots(), degree, cfg, |emb, p| {
        Ok(Some(a.evaluate(emb, p)? == b.evaluate(emb, p)?))
    })
}

/// A named polynomial used as a generator.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub name: String,
    pub poly: MPoly<Gf>,
}

impl Generator {
    pub fn new(name: impl Into<String>, poly: MPoly<Gf>) -> Generator {
        Generator { name: name.into(), poly }
    }

    /// `X`-degree; 0 for generators such as `α` that involve no `X`.
    pub fn weight(&self) -> u64 {
        self.poly.x_degree()
    }
}

/// A polynomial in named generators with coefficients in `GF(q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenPoly {
    pub names: Vec<String>,
    /// Exponent vectors over the generators with their coefficients, in
    /// display order.
    pub terms: Vec<(Vec<u64>, u32)>,
    pub field: Gf,
}

/// Later generators are more significant: higher exponents of the last
/// generator come first.
fn display_order(a: &[u64], b: &[u64]) -> Ordering {
    b.iter().rev().cmp(a.iter().rev())
}

impl GenPoly {
    fn new(names: Vec<String>, mut terms: Vec<(Vec<u64>, u32)>, field: Gf) -> GenPoly {
        terms.retain(|(_, c)| *c != 0);
        terms.sort_by(|a, b| display_order(&a.0, &b.0));
        GenPoly { names, terms, field }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn monomial_text(&self, exps: &[u64]) -> String {
        let parts: Vec<String> = exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { self.names[i].clone() } else { format!("{}^{e}", self.names[i]) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// Renders as e.g. `P21^3 + P20^3*P21`; coefficients other than 1 are
    /// written in hex.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let m = self.monomial_text(e);
                match (*c, m.as_str()) {
                    (1, _) => m,
                    (c, "1") => format!("0x{c:x}"),
                    (c, _) => format!("0x{c:x}*{m}"),
                }
            })
            .collect();
        parts.join(" + ")
    }

    /// `{generator monomial: coefficient}`.
    pub fn to_map(&self) -> BTreeMap<String, String> {
        self.terms.iter().map(|(e, c)| (self.monomial_text(e), format!("0x{c:x}"))).collect()
    }

    /// Symbolic expansion after substituting the generator polynomials.
    pub fn expand(&self, gens: &[MPoly<Gf>]) -> Result<MPoly<Gf>> {
        if gens.len() != self.names.len() {
            return Err(Error::DimensionMismatch(format!("{} generators for {} names", gens.len(), self.names.len())));
        }
        let ring = gens.first().map(|g| g.ring().clone()).ok_or_else(|| Error::InvalidSpec("no generators".into()))?;
        let mut powers: HashMap<(usize, u64), MPoly<Gf>> = HashMap::new();
        let mut acc = ring.zero();
        for (exps, c) in &self.terms {
            let mut term = ring.constant(*c);
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = match powers.get(&(i, e)) {
                    Some(p) => p.clone(),
                    None => {
                        let p = gens[i].pow(e)?;
                        powers.insert((i, e), p.clone());
                        p
                    }
                };
                term = term.mul(&p)?;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Value at generator values given as bits of `emb.target()`.
    pub fn evaluate(&self, emb: &Embedding, values: &[u32]) -> u32 {
        let big = emb.target();
        self.terms.iter().fold(0, |acc, (exps, c)| acc ^ big.mul_bits(emb.embed_bits(*c), monomial_value(big, exps, values)))
    }
}

fn monomial_value(big: &Gf, exps: &[u64], values: &[u32]) -> u32 {
    let mut v = 1u32;
    for (i, &e) in exps.iter().enumerate() {
        if e > 0 {
            v = big.mul_bits(v, big.pow_bits(values[i], e as u128));
            if v == 0 {
                break;
            }
        }
    }
    v
}

/// How a returned expression was checked.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum Certificate {
    /// Expanded and compared term by term.
    Symbolic,
    /// Expansion exceeded the term budget; compared at random points instead.
    Pit(PitVerdict),
}

#[derive(Debug, Clone)]
pub struct AnsatzProblem {
    pub target: MPoly<Gf>,
    pub generators: Vec<Generator>,
    /// Cap on the weighted degree of generator monomials; defaults to the
    /// `X`-degree of the target.
    pub budget: Option<u64>,
    pub seed: u64,
    pub ext_bits: u32,
}

impl AnsatzProblem {
    pub fn new(target: MPoly<Gf>, generators: Vec<Generator>) -> AnsatzProblem {
        AnsatzProblem { target, generators, budget: None, seed: 0xD1C50, ext_bits: DEFAULT_EXT_BITS }
    }
}

#[derive(Debug, Clone)]
pub struct AnsatzSolution {
    pub expr: GenPoly,
    /// Dimension of the solution space; 0 when the representation is unique
    /// within the basis.
    pub nullity: usize,
    pub basis_size: usize,
    pub budget: u64,
    pub certificate: Certificate,
}

fn check_problem(target: &MPoly<Gf>, gens: &[Generator]) -> Result<()> {
    if gens.is_empty() {
        return Err(Error::InvalidSpec("no generators".into()));
    }
    if gens.iter().any(|g| g.poly.ring() != target.ring()) {
        return Err(Error::RingMismatch);
    }
    Ok(())
}

/// Generator monomials of weighted degree exactly `exact` (when given) or at
/// most `budget`. Weight-0 generators are capped at `cap0`.
fn monomial_basis(weights: &[u64], budget: u64, exact: Option<u64>, cap0: u64) -> Result<Vec<Vec<u64>>> {
    fn rec(
        weights: &[u64],
        i: usize,
        left: u64,
        exact: bool,
        cap0: u64,
        cur: &mut Vec<u64>,
        out: &mut Vec<Vec<u64>>,
    ) -> Result<()> {
        if out.len() > MAX_BASIS {
            return Err(Error::TooLarge(format!("monomial basis exceeds {MAX_BASIS}")));
        }
        if i == weights.len() {
            if !exact || left == 0 {
                out.push(cur.clone());
            }
            return Ok(());
        }
        let max = if weights[i] == 0 { cap0 } else { left / weights[i] };
        for e in 0..=max {
            cur.push(e);
            rec(weights, i + 1, left - e * weights[i], exact, cap0, cur, out)?;
            cur.pop();
        }
        Ok(())
    }
    let (left, is_exact) = match exact {
        Some(d) if d > budget => return Ok(Vec::new()),
        Some(d) => (d, true),
        None => (budget, false),
    };
    let mut out = Vec::new();
    rec(weights, 0, left, is_exact, cap0, &mut Vec::new(), &mut out)?;
    out.sort_by(|a, b| display_order(a, b));
    Ok(out)
}

/// Row-reduces in place over `field`; returns the pivot columns.
fn rref(field: &Gf, rows: &mut [Vec<u32>], ncols: usize) -> Result<Vec<usize>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, p);
        let inv = field.inv_bits(rows[r][c])?;
        for x in rows[r][c..].iter_mut() {
            *x = field.mul_bits(*x, inv);
        }
        let pivot = rows[r].clone();
        rows.par_iter_mut().enumerate().for_each(|(i, row)| {
            let f = row[c];
            if i != r && f != 0 {
                for (x, &y) in row[c..].iter_mut().zip(&pivot[c..]) {
                    *x ^= field.mul_bits(f, y);
                }
            }
        });
        pivots.push(c);
        r += 1;
    }
    Ok(pivots)
}

/// Generator values and target value at each sample point.
fn evaluate_rows(
    emb: &Embedding,
    target: &MPoly<Gf>,
    gens: &[Generator],
    count: usize,
    seed: u64,
) -> Result<Vec<(Vec<u32>, u32)>> {
    let slots = target.ring().slots();
    (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let p = sample_point(emb.target(), seed, i, slots);
            let vals = gens.iter().map(|g| g.poly.evaluate(emb, &p)).collect::<Result<Vec<_>>>()?;
            Ok((vals, target.evaluate(emb, &p)?))
        })
        .collect()
}

/// Certifies `expr = target` by expansion, or by PIT when expansion exceeds
/// the term budget.
fn certify(expr: &GenPoly, gens: &[Generator], target: &MPoly<Gf>, seed: u64) -> Result<Option<Certificate>> {
    let polys: Vec<MPoly<Gf>> = gens.iter().map(|g| g.poly.clone()).collect();
    match expr.expand(&polys) {
        Ok(p) => Ok((p == *target).then_some(Certificate::Symbolic)),
        Err(Error::TermBudgetExceeded { .. }) => {
            let cfg = PitConfig { trials: 64, seed: seed ^ 0x5eed, ..PitConfig::default() };
            let degree = target.total_degree().max(expr_degree(expr, gens));
            let verdict = pit_check(target.ring().coeffs(), target.ring().slots(), degree, &cfg, |emb, p| {
                let vals = gens.iter().map(|g| g.poly.evaluate(emb, p)).collect::<Result<Vec<_>>>()?;
                Ok(Some(expr.evaluate(emb, &vals) == target.evaluate(emb, p)?))
            })?;
            Ok(verdict.equal.then_some(Certificate::Pit(verdict)))
        }
        Err(e) => Err(e),
    }
}

fn expr_degree(expr: &GenPoly, gens: &[Generator]) -> u64 {
    expr.terms
        .iter()
        .map(|(e, _)| e.iter().zip(gens).map(|(&k, g)| k * g.poly.total_degree()).sum::<u64>())
        .max()
        .unwrap_or(0)
}

fn pull_back(emb: &Embedding, v: u32) -> Result<u32> {
    emb.pullback_bits(v)
        .ok_or_else(|| Error::InvalidSpec(format!("coefficient 0x{v:x} is not in the base field")))
}

fn basis_for(target: &MPoly<Gf>, gens: &[Generator], budget: u64) -> Result<Vec<Vec<u64>>> {
    let weights: Vec<u64> = gens.iter().map(Generator::weight).collect();
    let homogeneous = target.homogeneous_x_degree().is_some()
        && gens.iter().all(|g| g.poly.homogeneous_x_degree().is_some());
    let exact = homogeneous.then(|| target.x_degree());
    let extra_slots = target.ring().slots() - target.ring().nvars();
    let cap0 = (0..extra_slots).map(|s| target.degree_in(target.ring().nvars() + s)).sum();
    monomial_basis(&weights, budget, exact, cap0)
}

fn solve_once(p: &AnsatzProblem, budget: u64) -> Result<Option<AnsatzSolution>> {
    let basis = basis_for(&p.target, &p.generators, budget)?;
    if basis.is_empty() {
        return Ok(None);
    }
    let field = p.target.ring().coeffs().clone();
    let emb = extension(&field, p.ext_bits)?;
    let big = emb.target().clone();
    let n = basis.len();
    let samples = evaluate_rows(&emb, &p.target, &p.generators, n + OVERSAMPLING, p.seed)?;
    let mut rows: Vec<Vec<u32>> = samples
        .par_iter()
        .map(|(vals, t)| {
            let mut row: Vec<u32> = basis.iter().map(|e| monomial_value(&big, e, vals)).collect();
            row.push(*t);
            row
        })
        .collect();
    let pivots = rref(&big, &mut rows, n + 1)?;
    if pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut terms = Vec::new();
    for (r, &c) in pivots.iter().enumerate() {
        let v = rows[r][n];
        if v != 0 {
            terms.push((basis[c].clone(), pull_back(&emb, v)?));
        }
    }
    let names = p.generators.iter().map(|g| g.name.clone()).collect();
    let expr = GenPoly::new(names, terms, field);
    match certify(&expr, &p.generators, &p.target, p.seed)? {
        Some(certificate) => Ok(Some(AnsatzSolution {
            expr,
            nullity: n - pivots.len(),
            basis_size: n,
            budget,
            certificate,
        })),
        None => Ok(None),
    }
}

/// Writes the target as a polynomial in the generators. On failure the
/// budget is doubled once before giving up.
pub fn express_in_generators(p: &AnsatzProblem) -> Result<AnsatzSolution> {
    check_problem(&p.target, &p.generators)?;
    let budget = p.budget.unwrap_or_else(|| p.target.x_degree());
    if let Some(s) = solve_once(p, budget)? {
        return Ok(s);
    }
    let doubled = budget.max(1).saturating_mul(2);
    solve_once(p, doubled)?.ok_or(Error::AnsatzNotFound { budget: doubled })
}

/// `target * denominator = numerator` with both sides polynomials in the
/// generators.
#[derive(Debug, Clone)]
pub struct Relation {
    pub numerator: GenPoly,
    pub denominator: GenPoly,
    pub certificate: Certificate,
}

/// Searches denominators of increasing weighted degree up to `max_weight`
/// for a relation putting `target` in the fraction field of the generators.
pub fn find_rational_relation(
    target: &MPoly<Gf>,
    generators: &[Generator],
    max_weight: u64,
    seed: u64,
) -> Result<Relation> {
    check_problem(target, generators)?;
    let field = target.ring().coeffs().clone();
    let emb = extension(&field, DEFAULT_EXT_BITS)?;
    let big = emb.target().clone();
    let weights: Vec<u64> = generators.iter().map(Generator::weight).collect();
    let deg = target.x_degree();
    let names: Vec<String> = generators.iter().map(|g| g.name.clone()).collect();
    for w in 1..=max_weight {
        let a_basis = monomial_basis(&weights, w, Some(w), 0)?;
        if a_basis.is_empty() {
            continue;
        }
        let b_basis = monomial_basis(&weights, w + deg, Some(w + deg), 0)?;
        let (na, nb) = (a_basis.len(), b_basis.len());
        let samples = evaluate_rows(&emb, target, generators, na + nb + OVERSAMPLING, seed ^ w)?;
        // columns: numerator monomials first, denominator monomials last
        let mut rows: Vec<Vec<u32>> = samples
            .par_iter()
            .map(|(vals, t)| {
                let mut row: Vec<u32> = b_basis.iter().map(|e| monomial_value(&big, e, vals)).collect();
                row.extend(a_basis.iter().map(|e| big.mul_bits(*t, monomial_value(&big, e, vals))));
                row
            })
            .collect();
        let pivots = rref(&big, &mut rows, nb + na)?;
        let Some(free) = (nb..nb + na).find(|c| !pivots.contains(c)) else { continue };
        // kernel vector: 1 at `free`, minus the pivot rows' entries elsewhere
        let mut num = Vec::new();
        let mut den = vec![(a_basis[free - nb].clone(), 1u32)];
        for (r, &c) in pivots.iter().enumerate() {
            let v = rows[r][free];
            if v == 0 || c > free {
                continue;
            }
            let coeff = pull_back(&emb, v)?;
            if c < nb {
                num.push((b_basis[c].clone(), coeff));
            } else {
                den.push((a_basis[c - nb].clone(), coeff));
            }
        }
        let numerator = GenPoly::new(names.clone(), num, field.clone());
        let denominator = GenPoly::new(names.clone(), den, field.clone());
        let polys: Vec<MPoly<Gf>> = generators.iter().map(|g| g.poly.clone()).collect();
        let certificate = match (numerator.expand(&polys), denominator.expand(&polys)) {
            (Ok(n), Ok(d)) => {
                if target.mul(&d)? != n {
                    continue;
                }
                Certificate::Symbolic
            }
            _ => {
                let cfg = PitConfig { trials: 64, seed: seed ^ 0x5eed, ..PitConfig::default() };
                let degree = deg + w;
                let v = pit_check(&field, target.ring().slots(), degree, &cfg, |e, p| {
                    let vals = generators.iter().map(|g| g.poly.evaluate(e, p)).collect::<Result<Vec<_>>>()?;
                    let t = target.evaluate(e, p)?;
                    Ok(Some(e.target().mul_bits(t, denominator.evaluate(e, &vals)) == numerator.evaluate(e, &vals)))
                })?;
                if !v.equal {
                    continue;
                }
                Certificate::Pit(v)
            }
        };
        return Ok(Relation { numerator, denominator, certificate });
    }
    Err(Error::AnsatzNotFound { budget: max_weight })
}

#[cfg(test)]
mod tests;
