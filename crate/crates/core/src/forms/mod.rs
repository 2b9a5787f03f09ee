//! The standard quadratic and symmetric forms over `GF(q)`, membership in
//! their isometry groups, the induced action on polynomials, and small-scale
//! enumeration and sampling of group elements.
//!
//! Vectors are rows. A matrix `T` acts on `GF(q)[X_1..X_n]` by
//! `(σ_T(X_1), ..., σ_T(X_n)) = (X_1, ..., X_n) T`, so `σ_T(X_i)` reads the
//! `i`-th column of `T`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{congruence, det_gauss, format_matrix, is_alternate, mat_sub, Matrix};
use crate::mpoly::{MPoly, PolyRing};
use crate::ring::{is_valid_alpha, CoeffRing, Gf, Integers};

/// Largest search space `q^(n^2)` that [`enumerate_group`] will walk.
pub const MAX_ENUMERATION: u64 = 1 << 24;
/// Rejections allowed before [`Sampler::sample`] gives up.
pub const SAMPLING_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormKind {
    /// `[[0, I], [0, 0]]` of size `2ν`.
    OrthEven,
    /// `[[0, I], [0, 0]] ⊕ [1]` of size `2ν + 1`.
    OrthOdd,
    /// `[[0, I], [0, 0]] ⊕ [[α, 1], [0, α]]` of size `2ν`, hyperbolic part of size `2ν - 2`.
    OrthEvenAlpha,
    /// `[[0, I], [I, 0]] ⊕ [1]` of size `2ν + 1`.
    PsOdd,
    /// `[[0, I], [I, 0]] ⊕ [[0, 1], [1, 1]]` of size `2ν + 2`.
    PsEven,
}

impl FormKind {
    pub const ALL: [FormKind; 5] =
        [FormKind::OrthEven, FormKind::OrthOdd, FormKind::OrthEvenAlpha, FormKind::PsOdd, FormKind::PsEven];

    pub fn name(self) -> &'static str {
        match self {
            FormKind::OrthEven => "orth-even",
            FormKind::OrthOdd => "orth-odd",
            FormKind::OrthEvenAlpha => "orth-even-alpha",
            FormKind::PsOdd => "ps-odd",
            FormKind::PsEven => "ps-even",
        }
    }

    pub fn is_orthogonal(self) -> bool {
        matches!(self, FormKind::OrthEven | FormKind::OrthOdd | FormKind::OrthEvenAlpha)
    }

    /// Whether `A = G + tG` is nonsingular, so that `G_A` is a symplectic group.
    pub fn has_symplectic_bilinearization(self) -> bool {
        matches!(self, FormKind::OrthEven | FormKind::OrthEvenAlpha)
    }

    pub fn dim(self, nu: usize) -> usize {
        match self {
            FormKind::OrthEven | FormKind::OrthEvenAlpha => 2 * nu,
            FormKind::OrthOdd | FormKind::PsOdd => 2 * nu + 1,
            FormKind::PsEven => 2 * nu + 2,
        }
    }

    pub fn min_nu(self) -> usize {
        match self {
            FormKind::PsEven => 0,
            _ => 1,
        }
    }

    /// The group a form of this kind naturally defines.
    pub fn natural_group(self) -> GroupKind {
        if self.is_orthogonal() {
            GroupKind::Orthogonal
        } else {
            GroupKind::PseudoSymplectic
        }
    }
}

impl fmt::Display for FormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<FormKind> {
        FormKind::ALL
            .into_iter()
            .find(|k| k.name() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown form kind '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupKind {
    /// `O_n = {T : T G tT - G alternate}`.
    Orthogonal,
    /// `Ps_n = {T : T S tT = S}`.
    PseudoSymplectic,
    /// `G_A = {T : T A tT = A}` with `A = G + tG`.
    GA,
}

impl GroupKind {
    pub fn name(self) -> &'static str {
        match self {
            GroupKind::Orthogonal => "orthogonal",
            GroupKind::PseudoSymplectic => "pseudo-symplectic",
            GroupKind::GA => "ga",
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GroupKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<GroupKind> {
        match s.trim() {
            "orthogonal" | "o" => Ok(GroupKind::Orthogonal),
            "pseudo-symplectic" | "ps" => Ok(GroupKind::PseudoSymplectic),
            "ga" | "GA" | "symplectic" => Ok(GroupKind::GA),
            other => Err(Error::Parse(format!("unknown group kind '{other}'"))),
        }
    }
}

/// One of the five standard forms together with `ν`, the field and `α`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FormSpec {
    kind: FormKind,
    nu: usize,
    field: Gf,
    alpha: Option<u32>,
}

impl FormSpec {
    /// `alpha` is required exactly for [`FormKind::OrthEvenAlpha`] and must not
    /// be of the form `x + x^2`.
    pub fn new(kind: FormKind, nu: usize, field: Gf, alpha: Option<u32>) -> Result<FormSpec> {
        if nu < kind.min_nu() {
            return Err(Error::InvalidSpec(format!("{kind} needs nu >= {}", kind.min_nu())));
        }
        match (kind, alpha) {
            (FormKind::OrthEvenAlpha, None) => {
                return Err(Error::InvalidSpec("orth-even-alpha needs an alpha".into()));
            }
            (FormKind::OrthEvenAlpha, Some(a)) => {
                let elem = field.elem(a)?;
                if !is_valid_alpha(&elem) {
                    return Err(Error::InvalidAlpha(a));
                }
            }
            (_, Some(_)) => return Err(Error::InvalidSpec(format!("{kind} takes no alpha"))),
            (_, None) => {}
        }
        Ok(FormSpec { kind, nu, field, alpha })
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn field(&self) -> &Gf {
        &self.field
    }

    pub fn alpha(&self) -> Option<u32> {
        self.alpha
    }

    pub fn n(&self) -> usize {
        self.kind.dim(self.nu)
    }

    pub fn q(&self) -> u64 {
        self.field.size()
    }

    /// `GF(q)[X_1..X_n]`.
    pub fn field_ring(&self) -> Result<PolyRing<Gf>> {
        PolyRing::new(self.field.clone(), self.n(), self.q(), false)
    }

    /// `Z[X_1..X_n]`, with an `α` slot for [`FormKind::OrthEvenAlpha`].
    pub fn int_ring(&self) -> Result<PolyRing<Integers>> {
        PolyRing::new(Integers, self.n(), self.q(), self.kind == FormKind::OrthEvenAlpha)
    }
}

impl fmt::Display for FormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "form:{};nu={};q={}", self.kind, self.nu, self.field)?;
        if let Some(a) = self.alpha {
            write!(f, ";alpha=0x{a:x}")?;
        }
        Ok(())
    }
}

impl FromStr for FormSpec {
    type Err = Error;

    /// Parses `form:<kind>;nu=<ν>;q=<descriptor or size>[;alpha=0x..]`.
    fn from_str(s: &str) -> Result<FormSpec> {
        let bad = |why: &str| Error::Parse(format!("{why} in form spec '{s}'"));
        let body = s.trim().strip_prefix("form:").ok_or_else(|| bad("missing 'form:' prefix"))?;
        let mut parts = body.split(';');
        let kind: FormKind = parts.next().ok_or_else(|| bad("missing kind"))?.parse()?;
        let (mut nu, mut field, mut alpha) = (None, None, None);
        for part in parts {
            let (key, value) = part.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            match key.trim() {
                "nu" => nu = Some(value.trim().parse::<usize>().map_err(|_| bad("bad nu"))?),
                "q" => field = Some(parse_field(value)?),
                "alpha" => alpha = Some(parse_hex(value).ok_or_else(|| bad("bad alpha"))?),
                other => return Err(bad(&format!("unknown key '{other}'"))),
            }
        }
        FormSpec::new(
            kind,
            nu.ok_or_else(|| bad("missing nu"))?,
            field.ok_or_else(|| bad("missing q"))?,
            alpha,
        )
    }
}

/// Accepts `GF(2^m):modulus=0x..` or a plain field size such as `4`.
pub fn parse_field(s: &str) -> Result<Gf> {
    let s = s.trim();
    if let Ok(q) = s.parse::<u64>() {
        return Gf::with_size(q);
    }
    match crate::ring::RingTag::parse(s)? {
        crate::ring::RingTag::Gf { m, modulus } => crate::ring::gf_make_field(m, Some(modulus)),
        other => Err(Error::Parse(format!("'{other}' is not a field of characteristic two"))),
    }
}

/// Parses `0x..` hex or a decimal integer.
pub fn parse_hex(s: &str) -> Option<u32> {
    let s = s.trim();
    match s.strip_prefix("0x") {
        Some(h) => u32::from_str_radix(h, 16).ok(),
        None => s.parse().ok(),
    }
}

#[derive(Clone, Copy)]
enum Entry {
    One,
    Alpha,
}

/// Nonzero entries of the form matrix.
fn pattern(kind: FormKind, nu: usize) -> Vec<(usize, usize, Entry)> {
    let mut out = Vec::new();
    let hyperbolic = |out: &mut Vec<_>, h: usize, symmetric: bool| {
        for i in 0..h {
            out.push((i, h + i, Entry::One));
            if symmetric {
                out.push((h + i, i, Entry::One));
            }
        }
    };
    match kind {
        FormKind::OrthEven => hyperbolic(&mut out, nu, false),
        FormKind::OrthOdd => {
            hyperbolic(&mut out, nu, false);
            out.push((2 * nu, 2 * nu, Entry::One));
        }
        FormKind::OrthEvenAlpha => {
            hyperbolic(&mut out, nu - 1, false);
            let b = 2 * nu - 2;
            out.push((b, b, Entry::Alpha));
            out.push((b, b + 1, Entry::One));
            out.push((b + 1, b + 1, Entry::Alpha));
        }
        FormKind::PsOdd => {
            hyperbolic(&mut out, nu, true);
            out.push((2 * nu, 2 * nu, Entry::One));
        }
        FormKind::PsEven => {
            hyperbolic(&mut out, nu, true);
            let b = 2 * nu;
            out.push((b, b + 1, Entry::One));
            out.push((b + 1, b, Entry::One));
            out.push((b + 1, b + 1, Entry::One));
        }
    }
    out
}

/// The form matrix `G` (or `S`) over `GF(q)`.
pub fn form_matrix(spec: &FormSpec) -> Matrix<u32> {
    let n = spec.n();
    let mut m = Matrix::zeros(&spec.field, n, n);
    for (i, j, e) in pattern(spec.kind, spec.nu) {
        m.set(i, j, match e {
            Entry::One => 1,
            Entry::Alpha => spec.alpha.expect("validated alpha"),
        });
    }
    m
}

/// The form matrix over `Z[α]`, as constants of `ring`, whose `α` slot (if
/// any) stands for `α`.
pub fn form_matrix_int(spec: &FormSpec, ring: &PolyRing<Integers>) -> Result<Matrix<MPoly<Integers>>> {
    let n = spec.n();
    if ring.nvars() != n {
        return Err(Error::DimensionMismatch(format!("{n}x{n} form over a ring with {} variables", ring.nvars())));
    }
    let mut m = Matrix::zeros(ring, n, n);
    for (i, j, e) in pattern(spec.kind, spec.nu) {
        m.set(i, j, match e {
            Entry::One => ring.one(),
            Entry::Alpha => ring.alpha()?,
        });
    }
    Ok(m)
}

/// `A = G + tG` over `GF(q)` and over `Z[α]`, and `Ā = G - tG` over `Z`.
#[derive(Debug, Clone)]
pub struct Bilinear {
    pub a: Matrix<u32>,
    pub a_int: Matrix<MPoly<Integers>>,
    pub abar_int: Matrix<MPoly<Integers>>,
}

pub fn bilinearize(spec: &FormSpec) -> Result<Bilinear> {
    if !spec.kind.is_orthogonal() {
        return Err(Error::KindMismatch(format!("{} is not an orthogonal form", spec.kind)));
    }
    let g = form_matrix(spec);
    let a = Matrix::from_fn(g.rows(), g.cols(), |i, j| g.get(i, j) ^ g.get(j, i));
    let ring = spec.int_ring()?;
    let gi = form_matrix_int(spec, &ring)?;
    let git = gi.transpose();
    let zr: &PolyRing<Integers> = &ring;
    Ok(Bilinear {
        a,
        a_int: crate::linalg::mat_add(zr, &gi, &git)?,
        abar_int: mat_sub(zr, &gi, &git)?,
    })
}

/// The matrix whose congruence class defines `group`.
fn defining_matrix(spec: &FormSpec, group: GroupKind) -> Result<Matrix<u32>> {
    match group {
        GroupKind::Orthogonal if spec.kind.is_orthogonal() => Ok(form_matrix(spec)),
        GroupKind::PseudoSymplectic if !spec.kind.is_orthogonal() => Ok(form_matrix(spec)),
        GroupKind::GA if spec.kind.has_symplectic_bilinearization() => Ok(bilinearize(spec)?.a),
        _ => Err(Error::KindMismatch(format!("{group} group is not defined for {}", spec.kind))),
    }
}

/// Whether `T` belongs to `group`. Singular matrices are never members.
pub fn is_member(t: &Matrix<u32>, spec: &FormSpec, group: GroupKind) -> Result<bool> {
    let m = defining_matrix(spec, group)?;
    member_of(t, &m, spec, group)
}

fn member_of(t: &Matrix<u32>, m: &Matrix<u32>, spec: &FormSpec, group: GroupKind) -> Result<bool> {
    let n = spec.n();
    if (t.rows(), t.cols()) != (n, n) {
        return Err(Error::DimensionMismatch(format!("{}x{} matrix for a form of size {n}", t.rows(), t.cols())));
    }
    let k = &spec.field;
    if t.entries().iter().any(|&e| !k.contains(e)) {
        return Err(Error::DimensionMismatch(format!("matrix entries outside {k}")));
    }
    if det_gauss(k, t)? == 0 {
        return Ok(false);
    }
    let image = congruence(k, t, m)?;
    Ok(match group {
        GroupKind::Orthogonal => is_alternate(k, &mat_sub(k, &image, m)?)?,
        _ => &image == m,
    })
}

/// `σ_T(f)`: substitutes `X_i -> Σ_j T[j][i] X_j`. An `α` slot is left alone.
pub fn apply_action<R: CoeffRing>(t: &Matrix<R::Elem>, f: &MPoly<R>) -> Result<MPoly<R>> {
    let ring = f.ring();
    let n = ring.nvars();
    if (t.rows(), t.cols()) != (n, n) {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix acting on {n} variables",
            t.rows(),
            t.cols()
        )));
    }
    let vars = ring.vars();
    let mut assign: Vec<Option<MPoly<R>>> = (0..n)
        .map(|i| {
            let mut acc = ring.zero();
            for (j, x) in vars.iter().enumerate() {
                let c = t.get(j, i);
                if !ring.coeffs().is_zero(c) {
                    acc = acc.add(&x.scale(c))?;
                }
            }
            Ok(Some(acc))
        })
        .collect::<Result<_>>()?;
    if ring.has_alpha() {
        assign.push(None);
    }
    f.substitute(&assign)
}

fn matrix_from_index(field: &Gf, n: usize, mut idx: u64) -> Matrix<u32> {
    let m = field.degree();
    let mask = (1u64 << m) - 1;
    Matrix::from_fn(n, n, |_, _| {
        let e = (idx & mask) as u32;
        idx >>= m;
        e
    })
}

/// Every member of `group`, by exhaustive search over all `n x n` matrices.
/// Elements come back in a fixed order.
pub fn enumerate_group(spec: &FormSpec, group: GroupKind) -> Result<Vec<Matrix<u32>>> {
    let n = spec.n();
    let bits = spec.field.degree() as u64 * (n * n) as u64;
    if bits > MAX_ENUMERATION.trailing_zeros() as u64 {
        return Err(Error::TooLarge(format!("q^(n^2) = 2^{bits} matrices exceeds 2^24")));
    }
    let m = defining_matrix(spec, group)?;
    let total = 1u64 << bits;
    let found: Vec<Result<Option<Matrix<u32>>>> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let t = matrix_from_index(&spec.field, n, idx);
            Ok(member_of(&t, &m, spec, group)?.then_some(t))
        })
        .collect();
    let mut out = Vec::new();
    for r in found {
        if let Some(t) = r? {
            out.push(t);
        }
    }
    Ok(out)
}

/// Seeded source of uniformly random group elements.
///
/// By default draws random invertible matrices and rejects non-members; a
/// sampler built from an enumeration picks uniformly from it instead.
#[derive(Debug, Clone)]
pub struct Sampler {
    spec: FormSpec,
    group: GroupKind,
    form: Matrix<u32>,
    rng: ChaCha8Rng,
    pool: Option<Vec<Matrix<u32>>>,
}

impl Sampler {
    pub fn new(spec: &FormSpec, group: GroupKind, seed: u64) -> Result<Sampler> {
        if spec.n() > 6 || spec.q() > 4 {
            return Err(Error::TooLarge(format!(
                "rejection sampling needs n <= 6 and q <= 4, got n = {} and q = {}",
                spec.n(),
                spec.q()
            )));
        }
        Ok(Sampler {
            spec: spec.clone(),
            group,
            form: defining_matrix(spec, group)?,
            rng: ChaCha8Rng::seed_from_u64(seed),
            pool: None,
        })
    }

    pub fn from_enumeration(spec: &FormSpec, group: GroupKind, elements: Vec<Matrix<u32>>, seed: u64) -> Result<Sampler> {
        if elements.is_empty() {
            return Err(Error::InvalidSpec("empty enumeration".into()));
        }
        Ok(Sampler {
            spec: spec.clone(),
            group,
            form: defining_matrix(spec, group)?,
            rng: ChaCha8Rng::seed_from_u64(seed),
            pool: Some(elements),
        })
    }

    pub fn spec(&self) -> &FormSpec {
        &self.spec
    }

    pub fn group(&self) -> GroupKind {
        self.group
    }

    pub fn sample(&mut self) -> Result<Matrix<u32>> {
        if let Some(pool) = &self.pool {
            let i = self.rng.gen_range(0..pool.len());
            return Ok(pool[i].clone());
        }
        let n = self.spec.n();
        let k = self.spec.field.clone();
        let size = k.size() as u32;
        for _ in 0..SAMPLING_BUDGET {
            let t = Matrix::from_fn(n, n, |_, _| self.rng.gen_range(0..size));
            if det_gauss(&k, &t)? == 0 {
                continue;
            }
            let image = congruence(&k, &t, &self.form)?;
            let ok = match self.group {
                GroupKind::Orthogonal => is_alternate(&k, &mat_sub(&k, &image, &self.form)?)?,
                _ => image == self.form,
            };
            if ok {
                return Ok(t);
            }
        }
        Err(Error::SamplingBudgetExceeded(SAMPLING_BUDGET))
    }
}

/// One rejection-sampled member of `group`, reproducible from `seed`.
pub fn sample_element(spec: &FormSpec, group: GroupKind, seed: u64) -> Result<Matrix<u32>> {
    Sampler::new(spec, group, seed)?.sample()
}

/// For `G_{2ν+1}`: last row `(0, ..., 0, 1)` and leading `2ν x 2ν` block
/// symplectic for `[[0, I], [I, 0]]`.
pub fn check_block_shape(t: &Matrix<u32>, spec: &FormSpec) -> Result<bool> {
    if spec.kind != FormKind::OrthOdd {
        return Err(Error::KindMismatch(format!("block shape is stated for orth-odd, not {}", spec.kind)));
    }
    let n = spec.n();
    if (t.rows(), t.cols()) != (n, n) {
        return Err(Error::DimensionMismatch(format!("{}x{} matrix for a form of size {n}", t.rows(), t.cols())));
    }
    let last_row_ok = (0..n).all(|j| *t.get(n - 1, j) == u32::from(j == n - 1));
    if !last_row_ok {
        return Ok(false);
    }
    let h = 2 * spec.nu;
    let idx: Vec<usize> = (0..h).collect();
    let block = t.select(&idx, &idx);
    let j = Matrix::from_fn(h, h, |a, b| u32::from(a + spec.nu == b || b + spec.nu == a));
    Ok(congruence(&spec.field, &block, &j)? == j)
}

/// Matrix text format with the form spec as the header line.
pub fn format_element(t: &Matrix<u32>, spec: &FormSpec) -> String {
    format_matrix(t, Some(&spec.to_string()), |e| format!("0x{e:x}"))
}

/// Whether a finite set of invertible matrices is a group. A finite set
/// closed under products contains the inverse of each element, so products
/// are all that need checking.
pub fn is_closed(elements: &[Matrix<u32>], field: &Gf) -> Result<bool> {
    use std::collections::HashSet;
    let set: HashSet<&Matrix<u32>> = elements.iter().collect();
    for a in elements {
        for b in elements {
            if !set.contains(&crate::linalg::mat_mul(field, a, b)?) {
                return Ok(false);
            }
        }
    }
    Ok(!elements.is_empty())
}

#[cfg(test)]
mod tests;
