//! Sparse multivariate polynomials over a [`CoeffRing`].
//!
//! A [`PolyRing`] fixes the coefficient ring, the number of indeterminates
//! `X_1..X_n`, the Frobenius base `q`, and optionally one extra slot for the
//! indeterminate `α`, which always comes last. An [`MPoly`] stores its terms
//! sorted in descending graded-lexicographic order with no zero coefficients,
//! so equal polynomials have identical representations.

mod text;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::ring::{CoeffRing, Embedding, Gf, Integers, Ring, RingTag};

pub use text::{parse_any, AnyPoly};

/// Exponent vector, one entry per slot.
pub type Monomial = SmallVec<[u64; 6]>;

/// Default cap on the predicted number of terms of a product.
pub const DEFAULT_TERM_BUDGET: u64 = 10_000_000;

/// The term guardrail, read once from `CHAR2_TERM_BUDGET`.
pub fn term_budget() -> u64 {
    static BUDGET: OnceLock<u64> = OnceLock::new();
    *BUDGET.get_or_init(|| {
        std::env::var("CHAR2_TERM_BUDGET")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_TERM_BUDGET)
    })
}

fn check_budget(predicted: u128) -> Result<()> {
    let budget = term_budget();
    if predicted > budget as u128 {
        return Err(Error::TermBudgetExceeded { predicted, budget });
    }
    Ok(())
}

/// Descending graded-lexicographic comparison: larger total degree first,
/// ties broken by the exponent of `X_1`, then `X_2`, and so on.
pub fn grlex_desc(a: &[u64], b: &[u64]) -> Ordering {
    let da: u128 = a.iter().map(|&e| e as u128).sum();
    let db: u128 = b.iter().map(|&e| e as u128).sum();
    db.cmp(&da).then_with(|| b.cmp(a))
}

/// Polynomial ring `R[X_1..X_n]`, or `R[X_1..X_n, α]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing<R> {
    coeffs: R,
    nvars: usize,
    q: u64,
    alpha: bool,
}

impl<R: CoeffRing> PolyRing<R> {
    pub fn new(coeffs: R, nvars: usize, q: u64, alpha: bool) -> Result<Self> {
        if nvars == 0 {
            return Err(Error::InvalidSpec("a polynomial ring needs at least one variable".into()));
        }
        if q < 2 || !q.is_power_of_two() {
            return Err(Error::InvalidSpec(format!("q = {q} is not a power of two")));
        }
        if let RingTag::Gf { m, .. } = coeffs.tag() {
            if q != 1u64 << m {
                return Err(Error::InvalidSpec(format!("q = {q} does not match GF(2^{m})")));
            }
        }
        Ok(PolyRing { coeffs, nvars, q, alpha })
    }

    pub fn coeffs(&self) -> &R {
        &self.coeffs
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn has_alpha(&self) -> bool {
        self.alpha
    }

    /// Number of exponent slots: `nvars`, plus one when `α` is present.
    pub fn slots(&self) -> usize {
        self.nvars + self.alpha as usize
    }

    pub fn alpha_slot(&self) -> Option<usize> {
        self.alpha.then_some(self.nvars)
    }

    /// Same variables and `q` over another coefficient ring.
    pub fn with_coeffs<R2: CoeffRing>(&self, coeffs: R2) -> Result<PolyRing<R2>> {
        PolyRing::new(coeffs, self.nvars, self.q, self.alpha)
    }

    pub fn with_alpha(&self, alpha: bool) -> PolyRing<R> {
        PolyRing { alpha, ..self.clone() }
    }

    pub fn with_nvars(&self, nvars: usize) -> Result<PolyRing<R>> {
        PolyRing::new(self.coeffs.clone(), nvars, self.q, self.alpha)
    }

    pub fn zero(&self) -> MPoly<R> {
        MPoly { ring: self.clone(), terms: Vec::new() }
    }

    pub fn one(&self) -> MPoly<R> {
        self.constant(self.coeffs.one())
    }

    pub fn constant(&self, c: R::Elem) -> MPoly<R> {
        self.monomial(smallvec::smallvec![0; self.slots()], c)
    }

    pub fn from_int(&self, n: i64) -> MPoly<R> {
        self.constant(self.coeffs.from_i64(n))
    }

    pub fn monomial(&self, exps: Monomial, c: R::Elem) -> MPoly<R> {
        debug_assert_eq!(exps.len(), self.slots());
        if self.coeffs.is_zero(&c) {
            return self.zero();
        }
        MPoly { ring: self.clone(), terms: vec![(exps, c)] }
    }

    /// `X_{i+1}` (slots are 0-based).
    pub fn var(&self, i: usize) -> MPoly<R> {
        assert!(i < self.slots(), "variable index {i} out of range");
        let mut e: Monomial = smallvec::smallvec![0; self.slots()];
        e[i] = 1;
        self.monomial(e, self.coeffs.one())
    }

    pub fn vars(&self) -> Vec<MPoly<R>> {
        (0..self.nvars).map(|i| self.var(i)).collect()
    }

    /// The indeterminate `α`.
    pub fn alpha(&self) -> Result<MPoly<R>> {
        let slot = self
            .alpha_slot()
            .ok_or_else(|| Error::InvalidSpec("ring has no alpha slot".into()))?;
        Ok(self.var(slot))
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates and
    /// dropping zeros.
    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Monomial, R::Elem)>) -> MPoly<R> {
        let mut map: HashMap<Monomial, R::Elem> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.len(), self.slots());
            match map.get_mut(&m) {
                Some(v) => *v = self.coeffs.add(v, &c),
                None => {
                    map.insert(m, c);
                }
            }
        }
        self.from_map(map)
    }

    fn from_map(&self, map: HashMap<Monomial, R::Elem>) -> MPoly<R> {
        let mut terms: Vec<(Monomial, R::Elem)> =
            map.into_iter().filter(|(_, c)| !self.coeffs.is_zero(c)).collect();
        terms.sort_unstable_by(|a, b| grlex_desc(&a.0, &b.0));
        MPoly { ring: self.clone(), terms }
    }
}

/// A sparse polynomial.
#[derive(Clone)]
pub struct MPoly<R: CoeffRing> {
    ring: PolyRing<R>,
    terms: Vec<(Monomial, R::Elem)>,
}

impl<R: CoeffRing> PartialEq for MPoly<R> {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.terms == other.terms
    }
}
impl<R: CoeffRing> Eq for MPoly<R> {}

impl<R: CoeffRing> Hash for MPoly<R> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl<R: CoeffRing> fmt::Debug for MPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<R: CoeffRing> MPoly<R> {
    pub fn ring(&self) -> &PolyRing<R> {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, R::Elem)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms[0].0.iter().all(|&e| e == 0)
            && self.terms[0].1 == self.ring.coeffs.one()
    }

    /// Constant coefficient, when the polynomial is constant.
    pub fn as_constant(&self) -> Option<R::Elem> {
        match self.terms.as_slice() {
            [] => Some(self.ring.coeffs.zero()),
            [(m, c)] if m.iter().all(|&e| e == 0) => Some(c.clone()),
            _ => None,
        }
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    fn merge(&self, other: &Self, negate_other: bool) -> MPoly<R> {
        let k = &self.ring.coeffs;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        let tr = |c: &R::Elem| if negate_other { k.neg(c) } else { c.clone() };
        while i < a.len() && j < b.len() {
            match grlex_desc(&a[i].0, &b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b[j].0.clone(), tr(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_other { k.sub(&a[i].1, &b[j].1) } else { k.add(&a[i].1, &b[j].1) };
                    if !k.is_zero(&c) {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), tr(c))));
        MPoly { ring: self.ring.clone(), terms: out }
    }

    pub fn add(&self, other: &Self) -> Result<MPoly<R>> {
        self.same_ring(other)?;
        Ok(self.merge(other, false))
    }

    pub fn sub(&self, other: &Self) -> Result<MPoly<R>> {
        self.same_ring(other)?;
        Ok(self.merge(other, true))
    }

    pub fn neg(&self) -> MPoly<R> {
        let k = &self.ring.coeffs;
        MPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), k.neg(c))).collect(),
        }
    }

    pub fn scale(&self, c: &R::Elem) -> MPoly<R> {
        let k = &self.ring.coeffs;
        if k.is_zero(c) {
            return self.ring.zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| (m.clone(), k.mul_coeff(a, c)))
            .filter(|(_, a)| !k.is_zero(a))
            .collect();
        MPoly { ring: self.ring.clone(), terms }
    }

    pub fn mul(&self, other: &Self) -> Result<MPoly<R>> {
        self.same_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(self.ring.zero());
        }
        check_budget(self.terms.len() as u128 * other.terms.len() as u128)?;
        let (small, big) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        if small.len() == 1 {
            let (m, c) = &small.terms[0];
            let k = &self.ring.coeffs;
            let mut terms = Vec::with_capacity(big.len());
            for (bm, bc) in &big.terms {
                let prod = k.mul_coeff(c, bc);
                if !k.is_zero(&prod) {
                    terms.push((add_exps(m, bm)?, prod));
                }
            }
            // multiplying by a monomial preserves the order
            return Ok(MPoly { ring: self.ring.clone(), terms });
        }
        let k = &self.ring.coeffs;
        let mut map: HashMap<Monomial, R::Elem> = HashMap::with_capacity(big.len() * small.len());
        for (am, ac) in &small.terms {
            for (bm, bc) in &big.terms {
                let e = add_exps(am, bm)?;
                let prod = k.mul_coeff(ac, bc);
                match map.get_mut(&e) {
                    Some(v) => *v = k.add(v, &prod),
                    None => {
                        map.insert(e, prod);
                    }
                }
            }
        }
        Ok(self.ring.from_map(map))
    }

    /// `self^2`; in characteristic two this squares termwise.
    pub fn square(&self) -> Result<MPoly<R>> {
        let k = &self.ring.coeffs;
        if k.is_char_two() {
            let mut terms = Vec::with_capacity(self.len());
            for (m, c) in &self.terms {
                let e: Monomial = m
                    .iter()
                    .map(|&x| x.checked_mul(2).ok_or(Error::ExponentOverflow))
                    .collect::<Result<_>>()?;
                let c2 = k.square_coeff(c);
                if !k.is_zero(&c2) {
                    terms.push((e, c2));
                }
            }
            return Ok(MPoly { ring: self.ring.clone(), terms });
        }
        self.mul(self)
    }

    pub fn pow(&self, mut e: u64) -> Result<MPoly<R>> {
        if e == 0 {
            return Ok(self.ring.one());
        }
        if self.len() == 1 {
            let (m, c) = &self.terms[0];
            let k = &self.ring.coeffs;
            let exps: Monomial = m
                .iter()
                .map(|&x| x.checked_mul(e).ok_or(Error::ExponentOverflow))
                .collect::<Result<_>>()?;
            let mut cp = k.one();
            let mut base = c.clone();
            let mut ee = e;
            while ee > 0 {
                if ee & 1 == 1 {
                    cp = k.mul_coeff(&cp, &base);
                }
                base = k.mul_coeff(&base, &base);
                ee >>= 1;
            }
            return Ok(self.ring.monomial(exps, cp));
        }
        let mut acc = self.ring.one();
        let mut base = self.clone();
        loop {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.square()?;
        }
        Ok(acc)
    }

    /// The Frobenius twist `f^(q^r)`: every `X` exponent multiplied by `q^r`,
    /// coefficients and the `α` exponent unchanged.
    pub fn twist(&self, r: u32) -> Result<MPoly<R>> {
        if r == 0 || self.is_zero() {
            return Ok(self.clone());
        }
        let factor = (self.ring.q as u128).checked_pow(r).filter(|&f| f <= u64::MAX as u128);
        let factor = factor.ok_or(Error::ExponentOverflow)? as u64;
        let n = self.ring.nvars;
        let mut terms = Vec::with_capacity(self.len());
        for (m, c) in &self.terms {
            let mut e = m.clone();
            for x in e.iter_mut().take(n) {
                *x = x.checked_mul(factor).ok_or(Error::ExponentOverflow)?;
            }
            terms.push((e, c.clone()));
        }
        if self.ring.alpha {
            terms.sort_unstable_by(|a, b| grlex_desc(&a.0, &b.0));
        }
        Ok(MPoly { ring: self.ring.clone(), terms })
    }

    /// Largest total degree over all slots; 0 for the zero polynomial.
    pub fn total_degree(&self) -> u64 {
        self.terms.iter().map(|(m, _)| m.iter().sum::<u64>()).max().unwrap_or(0)
    }

    /// Largest degree in the `X` variables alone.
    pub fn x_degree(&self) -> u64 {
        let n = self.ring.nvars;
        self.terms.iter().map(|(m, _)| m[..n].iter().sum::<u64>()).max().unwrap_or(0)
    }

    /// `Some(d)` when every term has `X`-degree `d`.
    pub fn homogeneous_x_degree(&self) -> Option<u64> {
        let n = self.ring.nvars;
        let mut degs = self.terms.iter().map(|(m, _)| m[..n].iter().sum::<u64>());
        let first = degs.next().unwrap_or(0);
        degs.all(|d| d == first).then_some(first)
    }

    pub fn degree_in(&self, slot: usize) -> u64 {
        self.terms.iter().map(|(m, _)| m[slot]).max().unwrap_or(0)
    }

    /// Leading coefficient with respect to one slot: returns `(d, c)` with
    /// `self = c * X^d + (lower powers of X)`, where `c` no longer involves
    /// that slot.
    pub fn leading_coefficient_in(&self, slot: usize) -> (u64, MPoly<R>) {
        let d = self.degree_in(slot);
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m[slot] == d)
            .map(|(m, c)| {
                let mut e = m.clone();
                e[slot] = 0;
                (e, c.clone())
            });
        (d, self.ring.from_terms(terms))
    }

    /// Simultaneous substitution: slot `i` is replaced by `assign[i]` when it
    /// is `Some`.
    pub fn substitute(&self, assign: &[Option<MPoly<R>>]) -> Result<MPoly<R>> {
        if assign.len() != self.ring.slots() {
            return Err(Error::DimensionMismatch(format!(
                "{} substitutions for {} slots",
                assign.len(),
                self.ring.slots()
            )));
        }
        for p in assign.iter().flatten() {
            self.same_ring(p)?;
        }
        let mut cache: HashMap<(usize, u64), MPoly<R>> = HashMap::new();
        let mut out: Vec<(Monomial, R::Elem)> = Vec::new();
        for (m, c) in &self.terms {
            let mut kept: Monomial = m.clone();
            let mut product: Option<MPoly<R>> = None;
            for (slot, sub) in assign.iter().enumerate() {
                let (Some(p), e) = (sub, m[slot]) else { continue };
                kept[slot] = 0;
                if e == 0 {
                    continue;
                }
                let power = match cache.get(&(slot, e)) {
                    Some(pw) => pw.clone(),
                    None => {
                        let pw = p.pow(e)?;
                        cache.insert((slot, e), pw.clone());
                        pw
                    }
                };
                product = Some(match product {
                    None => power,
                    Some(q) => q.mul(&power)?,
                });
            }
            match product {
                None => out.push((kept, c.clone())),
                Some(p) => {
                    let term = self.ring.monomial(kept, c.clone());
                    out.extend(term.mul(&p)?.terms);
                }
            }
        }
        Ok(self.ring.from_terms(out))
    }

    /// Substitutes `X_i -> value` for a single slot.
    pub fn substitute_one(&self, slot: usize, value: &MPoly<R>) -> Result<MPoly<R>> {
        let mut assign = vec![None; self.ring.slots()];
        assign[slot] = Some(value.clone());
        self.substitute(&assign)
    }

    /// Moves the polynomial into a ring with more (or equally many) `X`
    /// variables; existing variables keep their indices.
    pub fn extend_vars(&self, target: &PolyRing<R>) -> Result<MPoly<R>> {
        let old = &self.ring;
        if target.coeffs != old.coeffs || target.q != old.q || target.alpha != old.alpha || target.nvars < old.nvars {
            return Err(Error::RingMismatch);
        }
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e: Monomial = smallvec::smallvec![0; target.slots()];
            e[..old.nvars].copy_from_slice(&m[..old.nvars]);
            if old.alpha {
                e[target.nvars] = m[old.nvars];
            }
            (e, c.clone())
        });
        Ok(target.from_terms(terms))
    }

    /// Applies a coefficient map into another ring with the same slots.
    pub fn map_coeffs<R2: CoeffRing>(&self, target: &PolyRing<R2>, f: impl Fn(&R::Elem) -> R2::Elem) -> Result<MPoly<R2>> {
        if target.slots() != self.ring.slots() {
            return Err(Error::RingMismatch);
        }
        Ok(target.from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c)))))
    }

    /// Replaces `α` by a constant, dropping the `α` slot.
    pub fn specialize_alpha(&self, value: &R::Elem) -> Result<MPoly<R>> {
        let slot = self
            .ring
            .alpha_slot()
            .ok_or_else(|| Error::InvalidSpec("polynomial has no alpha slot".into()))?;
        let k = &self.ring.coeffs;
        let target = self.ring.with_alpha(false);
        let mut powers: HashMap<u64, R::Elem> = HashMap::new();
        let terms = self.terms.iter().map(|(m, c)| {
            let e = m[slot];
            let pw = powers
                .entry(e)
                .or_insert_with(|| {
                    let mut acc = k.one();
                    for _ in 0..e {
                        acc = k.mul_coeff(&acc, value);
                    }
                    acc
                })
                .clone();
            (m[..slot].iter().copied().collect::<Monomial>(), k.mul_coeff(c, &pw))
        });
        Ok(target.from_terms(terms))
    }

    /// Renders the polynomial with custom slot names, e.g. generator symbols.
    pub fn display_with(&self, names: &[String]) -> String {
        text::format_terms(self, |slot| names[slot].clone())
    }
}

fn add_exps(a: &Monomial, b: &Monomial) -> Result<Monomial> {
    a.iter()
        .zip(b.iter())
        .map(|(&x, &y)| x.checked_add(y).ok_or(Error::ExponentOverflow))
        .collect()
}

impl MPoly<Integers> {
    /// Coefficientwise division by `d`, which must divide every coefficient.
    pub fn exact_div_int(&self, d: &BigInt) -> Result<MPoly<Integers>> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut terms = Vec::with_capacity(self.len());
        for (m, c) in &self.terms {
            let (quo, rem) = c.div_rem(d);
            if !rem.is_zero() {
                let single = self.ring.monomial(m.clone(), c.clone());
                return Err(Error::NotDivisible { term: single.to_string(), divisor: d.to_string() });
            }
            terms.push((m.clone(), quo));
        }
        Ok(MPoly { ring: self.ring.clone(), terms })
    }

    /// Whether `d` divides every coefficient.
    pub fn all_divisible(&self, d: &BigInt) -> bool {
        self.terms.iter().all(|(_, c)| (c % d).is_zero())
    }

    /// Coefficientwise image under `Z -> target`.
    pub fn reduce<R2: CoeffRing>(&self, target: &R2) -> Result<MPoly<R2>> {
        let ring = self.ring.with_coeffs(target.clone())?;
        self.map_coeffs(&ring, |c| target.from_bigint(c))
    }
}

impl MPoly<Gf> {
    /// Evaluates at a point of the extension field targeted by `emb`.
    /// Coefficients are embedded first; the point has one entry per slot.
    pub fn evaluate(&self, emb: &Embedding, point: &[u32]) -> Result<u32> {
        if point.len() != self.ring.slots() {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} for {} slots",
                point.len(),
                self.ring.slots()
            )));
        }
        if emb.base() != &self.ring.coeffs {
            return Err(Error::FieldMismatch);
        }
        let big = emb.target();
        let mut acc = 0u32;
        for (m, c) in &self.terms {
            let mut v = emb.embed_bits(*c);
            for (slot, &e) in m.iter().enumerate() {
                if e != 0 {
                    v = big.mul_bits(v, big.pow_bits(point[slot], e as u128));
                    if v == 0 {
                        break;
                    }
                }
            }
            acc ^= v;
        }
        Ok(acc)
    }
}

impl<R: CoeffRing> Ring for PolyRing<R> {
    type Elem = MPoly<R>;

    fn zero(&self) -> MPoly<R> {
        PolyRing::zero(self)
    }
    fn one(&self) -> MPoly<R> {
        PolyRing::one(self)
    }
    fn is_zero(&self, a: &MPoly<R>) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &MPoly<R>, b: &MPoly<R>) -> MPoly<R> {
        a.add(b).expect("operands share the ring")
    }
    fn neg(&self, a: &MPoly<R>) -> MPoly<R> {
        a.neg()
    }
    fn sub(&self, a: &MPoly<R>, b: &MPoly<R>) -> MPoly<R> {
        a.sub(b).expect("operands share the ring")
    }
    fn mul(&self, a: &MPoly<R>, b: &MPoly<R>) -> Result<MPoly<R>> {
        a.mul(b)
    }
    fn from_i64(&self, n: i64) -> MPoly<R> {
        PolyRing::from_int(self, n)
    }
    fn is_char_two(&self) -> bool {
        self.coeffs.is_char_two()
    }
}

impl<R: CoeffRing> fmt::Display for MPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.ring.nvars;
        f.write_str(&text::format_terms(self, |slot| {
            if slot < n {
                format!("x{}", slot + 1)
            } else {
                "alpha".to_string()
            }
        }))
    }
}
