//! The invariant polynomials `P_nk` and the structured matrices built from them.
//!
//! A family stores `P_n0, ..., P_n,kmax` for one defining matrix (or one pair:
//! `G` for `k = 0` and `A = G + tG` for `k >= 1`). Gram-type matrices have
//! entries indexed by Frobenius levels `a, b`: off the diagonal the entry is
//! `P_{|b-a|}^(q^min(a,b))`, which is exactly `(X^(q^a)) M (X^(q^b))` for a
//! symmetric `M`.

use std::fmt;

use crate::error::{Error, Result};
use crate::forms::{bilinearize, form_matrix, form_matrix_int, FormKind, FormSpec};
use crate::linalg::Matrix;
use crate::mpoly::{MPoly, PolyRing};
use crate::ring::{CoeffRing, Embedding, Gf, Integers, Ring};

/// Which matrix a family member was built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// The quadratic form `G` itself.
    G,
    /// `A = G + tG`, or a symmetric hyperbolic matrix.
    A,
    /// `Ā = G - tG`.
    Abar,
    /// `tG`.
    TG,
    /// The symmetric form `S`.
    S,
}

impl Variant {
    pub fn tag(self) -> &'static str {
        match self {
            Variant::G => "G",
            Variant::A => "A",
            Variant::Abar => "Abar",
            Variant::TG => "tG",
            Variant::S => "S",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// `P_n0..P_n,kmax` over one polynomial ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantFamily<R: CoeffRing> {
    ring: PolyRing<R>,
    dim: usize,
    members: Vec<MPoly<R>>,
    variants: Vec<Variant>,
}

impl<R: CoeffRing> InvariantFamily<R> {
    /// Member `0` from `first`, members `1..=kmax` from `rest`. Both matrices
    /// act on the variables `vars`; `dim` of the family is `vars.len()`.
    pub fn from_matrices(
        ring: &PolyRing<R>,
        vars: &[usize],
        first: (&Matrix<MPoly<R>>, Variant),
        rest: (&Matrix<MPoly<R>>, Variant),
        kmax: usize,
    ) -> Result<Self> {
        let mut members = Vec::with_capacity(kmax + 1);
        let mut variants = Vec::with_capacity(kmax + 1);
        for k in 0..=kmax {
            let (m, v) = if k == 0 { first } else { rest };
            members.push(bilinear_form_on(ring, m, vars, k as u32)?);
            variants.push(v);
        }
        Ok(InvariantFamily { ring: ring.clone(), dim: vars.len(), members, variants })
    }

    pub fn ring(&self) -> &PolyRing<R> {
        &self.ring
    }

    /// Number of variables the defining matrix acts on.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kmax(&self) -> usize {
        self.members.len() - 1
    }

    pub fn member(&self, k: usize) -> Result<&MPoly<R>> {
        self.members.get(k).ok_or(Error::MissingMember(k))
    }

    pub fn members(&self) -> &[MPoly<R>] {
        &self.members
    }

    pub fn variant(&self, k: usize) -> Result<Variant> {
        self.variants.get(k).copied().ok_or(Error::MissingMember(k))
    }

    /// `P_nk^(q^j)`.
    pub fn twisted(&self, k: usize, j: u32) -> Result<MPoly<R>> {
        self.member(k)?.twist(j)
    }

    /// The family members `0..=kmax` only.
    pub fn truncate(&self, kmax: usize) -> Result<Self> {
        self.member(kmax)?;
        Ok(InvariantFamily {
            ring: self.ring.clone(),
            dim: self.dim,
            members: self.members[..=kmax].to_vec(),
            variants: self.variants[..=kmax].to_vec(),
        })
    }
}

impl InvariantFamily<Integers> {
    /// Image over `GF(q)`. A symbolic `α` stays symbolic.
    pub fn mod2_image(&self, field: &Gf) -> Result<InvariantFamily<Gf>> {
        let ring = self.ring.with_coeffs(field.clone())?;
        let members = self.members.iter().map(|p| p.reduce(field)).collect::<Result<_>>()?;
        Ok(InvariantFamily { ring, dim: self.dim, members, variants: self.variants.clone() })
    }
}

/// Constants of `ring` from field elements.
pub fn lift_matrix(ring: &PolyRing<Gf>, m: &Matrix<u32>) -> Matrix<MPoly<Gf>> {
    m.map(|&c| ring.constant(c))
}

/// `(X_1..X_n) M (X_1^(q^k)..X_n^(q^k))^t`.
pub fn bilinear_form<R: CoeffRing>(ring: &PolyRing<R>, m: &Matrix<MPoly<R>>, k: u32) -> Result<MPoly<R>> {
    let vars: Vec<usize> = (0..ring.nvars()).collect();
    bilinear_form_on(ring, m, &vars, k)
}

/// [`bilinear_form`] on a subset of the variables, in the given order.
pub fn bilinear_form_on<R: CoeffRing>(
    ring: &PolyRing<R>,
    m: &Matrix<MPoly<R>>,
    vars: &[usize],
    k: u32,
) -> Result<MPoly<R>> {
    let d = vars.len();
    if (m.rows(), m.cols()) != (d, d) {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix on {d} variables",
            m.rows(),
            m.cols()
        )));
    }
    if let Some(&v) = vars.iter().find(|&&v| v >= ring.nvars()) {
        return Err(Error::IndexOutOfRange { index: v, max: ring.nvars() - 1 });
    }
    let x: Vec<MPoly<R>> = vars.iter().map(|&v| ring.var(v)).collect();
    let xt: Vec<MPoly<R>> = x.iter().map(|p| p.twist(k)).collect::<Result<_>>()?;
    let mut acc = ring.zero();
    for i in 0..d {
        for j in 0..d {
            let c = m.get(i, j);
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&c.mul(&x[i].mul(&xt[j])?)?)?;
        }
    }
    Ok(acc)
}

fn check_kmax(spec: &FormSpec, kmax: usize) -> Result<()> {
    if kmax > spec.n() + 1 {
        return Err(Error::InvalidSpec(format!("kmax = {kmax} exceeds n + 1 = {}", spec.n() + 1)));
    }
    Ok(())
}

fn all_vars(n: usize) -> Vec<usize> {
    (0..n).collect()
}

fn require_orthogonal(spec: &FormSpec) -> Result<()> {
    if !spec.kind().is_orthogonal() {
        return Err(Error::KindMismatch(format!("{} is not an orthogonal form", spec.kind())));
    }
    Ok(())
}

fn require_pseudo_symplectic(spec: &FormSpec) -> Result<()> {
    if spec.kind().is_orthogonal() {
        return Err(Error::KindMismatch(format!("{} is not a pseudo-symplectic form", spec.kind())));
    }
    Ok(())
}

/// `P_n0` from `G`, `P_nk` from `A` for `k >= 1`, over `GF(q)`.
pub fn orth_family_gf(spec: &FormSpec, kmax: usize) -> Result<InvariantFamily<Gf>> {
    require_orthogonal(spec)?;
    check_kmax(spec, kmax)?;
    let ring = spec.field_ring()?;
    let g = lift_matrix(&ring, &form_matrix(spec));
    let a = lift_matrix(&ring, &bilinearize(spec)?.a);
    InvariantFamily::from_matrices(&ring, &all_vars(spec.n()), (&g, Variant::G), (&a, Variant::A), kmax)
}

/// The same family over `Z`, with `α` symbolic for [`FormKind::OrthEvenAlpha`].
pub fn orth_family_int(spec: &FormSpec, kmax: usize) -> Result<InvariantFamily<Integers>> {
    require_orthogonal(spec)?;
    check_kmax(spec, kmax)?;
    let ring = spec.int_ring()?;
    let g = form_matrix_int(spec, &ring)?;
    let a = bilinearize(spec)?.a_int;
    InvariantFamily::from_matrices(&ring, &all_vars(spec.n()), (&g, Variant::G), (&a, Variant::A), kmax)
}

/// `P̄_nk` from `Ā = G - tG` over `Z`, for all `k` (so `P̄_n0 = 0`).
pub fn abar_family(spec: &FormSpec, kmax: usize) -> Result<InvariantFamily<Integers>> {
    require_orthogonal(spec)?;
    check_kmax(spec, kmax)?;
    let ring = spec.int_ring()?;
    let abar = bilinearize(spec)?.abar_int;
    InvariantFamily::from_matrices(&ring, &all_vars(spec.n()), (&abar, Variant::Abar), (&abar, Variant::Abar), kmax)
}

/// `P'_nk` from `tG` over `Z`.
pub fn tg_family(spec: &FormSpec, kmax: usize) -> Result<InvariantFamily<Integers>> {
    require_orthogonal(spec)?;
    check_kmax(spec, kmax)?;
    let ring = spec.int_ring()?;
    let gt = form_matrix_int(spec, &ring)?.transpose();
    InvariantFamily::from_matrices(&ring, &all_vars(spec.n()), (&gt, Variant::TG), (&gt, Variant::TG), kmax)
}

/// `P_nk` (written `P̄_nk` for odd `n`) from `S`, for all `k`, over `GF(q)`.
pub fn ps_family_gf(spec: &FormSpec, kmax: usize) -> Result<InvariantFamily<Gf>> {
    require_pseudo_symplectic(spec)?;
    check_kmax(spec, kmax)?;
    let ring = spec.field_ring()?;
    let s = lift_matrix(&ring, &form_matrix(spec));
    InvariantFamily::from_matrices(&ring, &all_vars(spec.n()), (&s, Variant::S), (&s, Variant::S), kmax)
}

/// `P_nk` from `A` for all `k`: the invariants of `G_A`. `P_n0` is zero.
pub fn ga_family_gf(spec: &FormSpec, kmax: usize) -> Result<InvariantFamily<Gf>> {
    require_orthogonal(spec)?;
    check_kmax(spec, kmax)?;
    if !spec.kind().has_symplectic_bilinearization() {
        return Err(Error::KindMismatch(format!("A is degenerate for {}", spec.kind())));
    }
    let ring = spec.field_ring()?;
    let a = lift_matrix(&ring, &bilinearize(spec)?.a);
    InvariantFamily::from_matrices(&ring, &all_vars(spec.n()), (&a, Variant::A), (&a, Variant::A), kmax)
}

/// The natural family of a form: [`orth_family_gf`] or [`ps_family_gf`].
pub fn natural_family_gf(spec: &FormSpec, kmax: usize) -> Result<InvariantFamily<Gf>> {
    if spec.kind().is_orthogonal() {
        orth_family_gf(spec, kmax)
    } else {
        ps_family_gf(spec, kmax)
    }
}

/// Hyperbolic `[[0, I], [0, 0]]` (or `[[0, I], [I, 0]]` when `symmetric`)
/// of size `2h`.
pub fn hyperbolic<R: CoeffRing>(ring: &PolyRing<R>, h: usize, symmetric: bool) -> Matrix<MPoly<R>> {
    Matrix::from_fn(2 * h, 2 * h, |i, j| {
        if (i < h && j == i + h) || (symmetric && j < h && i == j + h) {
            ring.one()
        } else {
            ring.zero()
        }
    })
}

/// `P_{n-1,k}` for odd `n = 2ν + 1`: the hyperbolic family in the first
/// `n - 1` variables, `[[0, I], [0, 0]]` for `k = 0` and `[[0, I], [I, 0]]`
/// after. Lives in the full `n`-variable ring.
pub fn restricted_family_gf(spec: &FormSpec, kmax: usize) -> Result<InvariantFamily<Gf>> {
    if !matches!(spec.kind(), FormKind::OrthOdd | FormKind::PsOdd) {
        return Err(Error::KindMismatch(format!("{} has no restricted family", spec.kind())));
    }
    check_kmax(spec, kmax)?;
    let ring = spec.field_ring()?;
    let nu = spec.nu();
    let vars = all_vars(2 * nu);
    InvariantFamily::from_matrices(
        &ring,
        &vars,
        (&hyperbolic(&ring, nu, false), Variant::G),
        (&hyperbolic(&ring, nu, true), Variant::A),
        kmax,
    )
}

/// What goes on the diagonal of a Gram-type matrix at level `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Diagonal {
    Zero,
    /// `2 P_n0^(q^a)`, the diagonal of `B A tB` over `Z`.
    TwiceP0,
    /// `P_n0^(q^a)`, the diagonal of `B S tB`.
    P0,
}

/// The matrix with rows at levels `rows` and columns at levels `cols`. With
/// `skew`, entries below the diagonal (level of row above level of column)
/// are negated.
pub fn gram<R: CoeffRing>(
    fam: &InvariantFamily<R>,
    rows: &[usize],
    cols: &[usize],
    diag: Diagonal,
    skew: bool,
) -> Result<Matrix<MPoly<R>>> {
    let ring = fam.ring();
    Matrix::try_from_fn(rows.len(), cols.len(), |i, j| {
        let (a, b) = (rows[i], cols[j]);
        if a == b {
            return Ok(match diag {
                Diagonal::Zero => ring.zero(),
                Diagonal::TwiceP0 => fam.twisted(0, a as u32)?.scale(&ring.coeffs().from_i64(2)),
                Diagonal::P0 => fam.twisted(0, a as u32)?,
            });
        }
        let e = fam.twisted(a.abs_diff(b), a.min(b) as u32)?;
        Ok(if skew && a > b { e.neg() } else { e })
    })
}

fn levels(range: std::ops::Range<usize>) -> Vec<usize> {
    range.collect()
}

/// The alternate matrix `P` with `(0, k)` entry `P_nk`.
pub fn p_matrix<R: CoeffRing>(fam: &InvariantFamily<R>) -> Result<Matrix<MPoly<R>>> {
    let l = levels(0..fam.dim());
    gram(fam, &l, &l, Diagonal::Zero, true)
}

/// `P`, but with column `0` below the first row replaced by
/// `-P_{n,n-a}^(q^a)`: the right-hand side of the Pfaffian product identity.
pub fn pftimes_matrix<R: CoeffRing>(fam: &InvariantFamily<R>) -> Result<Matrix<MPoly<R>>> {
    let n = fam.dim();
    let mut m = p_matrix(fam)?;
    for a in 1..n {
        m.set(a, 0, fam.twisted(n - a, a as u32)?.neg());
    }
    Ok(m)
}

/// `P̃ = B A tB^(q)`: rows at levels `0..n`, columns at `1..=n`.
pub fn p_tilde<R: CoeffRing>(fam: &InvariantFamily<R>) -> Result<Matrix<MPoly<R>>> {
    let n = fam.dim();
    gram(fam, &levels(0..n), &levels(1..n + 1), Diagonal::TwiceP0, false)
}

/// `P_n`: `P̃` with its `2 P_n0` entries and its `P_nn` entry replaced by 0.
pub fn p_n<R: CoeffRing>(fam: &InvariantFamily<R>) -> Result<Matrix<MPoly<R>>> {
    let n = fam.dim();
    let mut m = gram(fam, &levels(0..n), &levels(1..n + 1), Diagonal::Zero, false)?;
    m.set(0, n - 1, fam.ring().zero());
    Ok(m)
}

/// `P_0`: levels `1..n`, diagonal `2 P_n0^(q^a)`.
pub fn p_zero<R: CoeffRing>(fam: &InvariantFamily<R>) -> Result<Matrix<MPoly<R>>> {
    let l = levels(1..fam.dim());
    gram(fam, &l, &l, Diagonal::TwiceP0, false)
}

/// `P_(i)`: `P_0` with zero diagonal and level `i` removed, `1 <= i < n`.
pub fn p_sub<R: CoeffRing>(fam: &InvariantFamily<R>, i: usize) -> Result<Matrix<MPoly<R>>> {
    let n = fam.dim();
    if i == 0 || i >= n {
        return Err(Error::IndexOutOfRange { index: i, max: n.saturating_sub(1) });
    }
    let l: Vec<usize> = (1..n).filter(|&a| a != i).collect();
    gram(fam, &l, &l, Diagonal::Zero, false)
}

/// `l` with `2l = det` of `P_0` with zero diagonal. The halving is exact
/// because that matrix is symmetric of odd size with zero diagonal.
pub fn l_witness(fam: &InvariantFamily<Integers>) -> Result<MPoly<Integers>> {
    let l = levels(1..fam.dim());
    let m = gram(fam, &l, &l, Diagonal::Zero, false)?;
    let d = fam.ring().det(&m)?;
    d.exact_div_int(&2.into())
}

/// `P_0* = Σ_i P_n0^(q^i) det(P_(i)) + l` over `Z`, for even `n`; then
/// `det(P_0) ≡ 2 P_0* (mod 4)`.
pub fn p0_star(fam: &InvariantFamily<Integers>) -> Result<MPoly<Integers>> {
    let n = fam.dim();
    if n % 2 == 1 {
        return Err(Error::InvalidSpec(format!("P_0* needs an even dimension, got {n}")));
    }
    let ring = fam.ring();
    let mut acc = l_witness(fam)?;
    for i in 1..n {
        let d = ring.det(&p_sub(fam, i)?)?;
        acc = acc.add(&fam.twisted(0, i as u32)?.mul(&d)?)?;
    }
    Ok(acc)
}

/// The matrix of `K`: `B S tB` at levels `0..n-1`.
pub fn k_matrix<R: CoeffRing>(fam: &InvariantFamily<R>) -> Result<Matrix<MPoly<R>>> {
    let l = levels(0..fam.dim().saturating_sub(1));
    gram(fam, &l, &l, Diagonal::P0, false)
}

/// `B S tB` at levels `0..n`, whose determinant is `D_n^2`.
pub fn s_gram<R: CoeffRing>(fam: &InvariantFamily<R>) -> Result<Matrix<MPoly<R>>> {
    let l = levels(0..fam.dim());
    gram(fam, &l, &l, Diagonal::P0, false)
}

/// `B^(q) S tB`: rows at levels `1..=n`, columns at `0..n`. Its determinant
/// is `D_n^(q+1)`.
pub fn s_gram_shifted<R: CoeffRing>(fam: &InvariantFamily<R>) -> Result<Matrix<MPoly<R>>> {
    let n = fam.dim();
    gram(fam, &levels(1..n + 1), &levels(0..n), Diagonal::P0, false)
}

/// The alternate matrix at the given strictly increasing levels, whose
/// Pfaffian is `D_{i_1..i_n}` for the hyperbolic family.
pub fn twisted_p_matrix<R: CoeffRing>(fam: &InvariantFamily<R>, indices: &[usize]) -> Result<Matrix<MPoly<R>>> {
    check_increasing(indices)?;
    gram(fam, indices, indices, Diagonal::Zero, true)
}

fn check_increasing(indices: &[usize]) -> Result<()> {
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadIndices(format!("{indices:?} is not strictly increasing")));
    }
    Ok(())
}

/// The matrix with `(i, j)` entry `X_{vars[j]}^(q^powers[i])`.
pub fn power_matrix<R: CoeffRing>(ring: &PolyRing<R>, vars: &[usize], powers: &[u32]) -> Result<Matrix<MPoly<R>>> {
    if let Some(&v) = vars.iter().find(|&&v| v >= ring.nvars()) {
        return Err(Error::IndexOutOfRange { index: v, max: ring.nvars() - 1 });
    }
    let x: Vec<MPoly<R>> = vars.iter().map(|&v| ring.var(v)).collect();
    Matrix::try_from_fn(powers.len(), vars.len(), |i, j| x[j].twist(powers[i]))
}

/// The Moore matrix `B` with the given row powers (default `0..n`).
pub fn moore_matrix<R: CoeffRing>(ring: &PolyRing<R>, row_powers: Option<&[u32]>) -> Result<Matrix<MPoly<R>>> {
    let n = ring.nvars();
    let default: Vec<u32> = (0..n as u32).collect();
    let powers = row_powers.unwrap_or(&default);
    if powers.len() != n {
        return Err(Error::BadIndices(format!("{} row powers for {n} variables", powers.len())));
    }
    let mut sorted = powers.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::BadIndices(format!("repeated row power in {powers:?}")));
    }
    power_matrix(ring, &all_vars(n), powers)
}

/// `det` of the Moore matrix on `vars`, rows `0..vars.len()`.
pub fn moore_det<R: CoeffRing>(ring: &PolyRing<R>, vars: &[usize]) -> Result<MPoly<R>> {
    let powers: Vec<u32> = (0..vars.len() as u32).collect();
    ring.det(&power_matrix(ring, vars, &powers)?)
}

/// `D_{i_1..i_n}` on the variables `vars`.
pub fn d_multi_on<R: CoeffRing>(ring: &PolyRing<R>, vars: &[usize], indices: &[u32]) -> Result<MPoly<R>> {
    if indices.len() != vars.len() {
        return Err(Error::BadIndices(format!("{} indices for {} variables", indices.len(), vars.len())));
    }
    let idx: Vec<usize> = indices.iter().map(|&i| i as usize).collect();
    check_increasing(&idx)?;
    ring.det(&power_matrix(ring, vars, indices)?)
}

/// `D_{i_1..i_n}`: the Moore determinant with row powers `i_1 < .. < i_n`.
pub fn d_multi<R: CoeffRing>(ring: &PolyRing<R>, indices: &[u32]) -> Result<MPoly<R>> {
    d_multi_on(ring, &all_vars(ring.nvars()), indices)
}

/// The Dickson determinant `D_ni`: powers `0..=n` with `i` left out.
pub fn dickson_d<R: CoeffRing>(ring: &PolyRing<R>, i: usize) -> Result<MPoly<R>> {
    let n = ring.nvars();
    if i > n {
        return Err(Error::IndexOutOfRange { index: i, max: n });
    }
    let powers: Vec<u32> = (0..=n as u32).filter(|&p| p as usize != i).collect();
    d_multi(ring, &powers)
}

/// A quotient kept as a pair, never divided out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPair<R: CoeffRing> {
    pub num: MPoly<R>,
    pub den: MPoly<R>,
}

impl<R: CoeffRing> RationalPair<R> {
    /// Equality of quotients by cross-multiplication.
    pub fn equals(&self, other: &Self) -> Result<bool> {
        Ok(self.num.mul(&other.den)? == other.num.mul(&self.den)?)
    }
}

impl RationalPair<Gf> {
    /// `None` where the denominator vanishes.
    pub fn evaluate(&self, emb: &Embedding, point: &[u32]) -> Result<Option<u32>> {
        let d = self.den.evaluate(emb, point)?;
        if d == 0 {
            return Ok(None);
        }
        let n = self.num.evaluate(emb, point)?;
        Ok(Some(emb.target().mul_bits(n, emb.target().inv_bits(d)?)))
    }
}

/// `C_ni = D_ni / D_nn`.
pub fn dickson_c<R: CoeffRing>(ring: &PolyRing<R>, i: usize) -> Result<RationalPair<R>> {
    Ok(RationalPair { num: dickson_d(ring, i)?, den: dickson_d(ring, ring.nvars())? })
}
