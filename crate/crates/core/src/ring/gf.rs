//! Binary fields `GF(2^m)` in polynomial basis.

use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{CoeffRing, Ring, RingTag};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

/// Largest degree accepted for a base field.
pub const MAX_BASE_DEGREE: u32 = 16;
/// Largest degree of any field, extensions included.
pub const MAX_FIELD_DEGREE: u32 = 32;
/// Fields up to this degree get exp/log tables.
const TABLE_DEGREE: u32 = 16;

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

struct GfInner {
    m: u32,
    modulus: u64,
    tables: Option<Tables>,
}

/// A field descriptor for `GF(2^m)`. Cheap to clone, immutable, and safe to
/// share between threads. Elements are `u32` bit vectors, bit `i` being the
/// coefficient of `x^i`.
#[derive(Clone)]
pub struct Gf(Arc<GfInner>);

impl PartialEq for Gf {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.m == other.0.m && self.0.modulus == other.0.modulus)
    }
}
impl Eq for Gf {}

impl Hash for Gf {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.m.hash(state);
        self.0.modulus.hash(state);
    }
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}):modulus=0x{:x}", self.0.m, self.0.modulus)
    }
}

fn degree(p: u64) -> u32 {
    63 - p.leading_zeros()
}

/// Remainder of binary polynomial division.
fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = degree(b);
    while a != 0 && degree(a) >= db {
        a ^= b << (degree(a) - db);
    }
    a
}

/// Irreducibility over GF(2) by trial division against every polynomial of
/// degree at most `m/2`.
fn is_irreducible(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let m = degree(p);
    if m == 0 {
        return false;
    }
    for d in 1..=m / 2 {
        for low in 0..(1u64 << d) {
            if poly_rem(p, (1u64 << d) | low) == 0 {
                return false;
            }
        }
    }
    true
}

fn clmul_reduce(a: u32, b: u32, m: u32, modulus: u64) -> u32 {
    let mut acc: u64 = 0;
    let a = a as u64;
    let mut b = b;
    let mut i = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a << i;
        }
        b >>= 1;
        i += 1;
    }
    let mut top = 2 * m;
    while top > m {
        top -= 1;
        if acc >> top & 1 == 1 {
            acc ^= modulus << (top - m);
        }
    }
    acc as u32
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl Gf {
    /// Builds `GF(2^m)` for `1 <= m <= 32`. Without a modulus the
    /// lexicographically smallest irreducible with nonzero constant term is
    /// chosen (so `m = 1` gives `x + 1`).
    pub fn new(m: u32, modulus: Option<u64>) -> Result<Gf> {
        if m == 0 || m > MAX_FIELD_DEGREE {
            return Err(Error::UnsupportedField(format!("GF(2^{m})")));
        }
        let modulus = match modulus {
            Some(p) => {
                if p >> 62 != 0 || degree(p) != m {
                    return Err(Error::UnsupportedField(format!(
                        "modulus 0x{p:x} does not have degree {m}"
                    )));
                }
                if !is_irreducible(p) {
                    return Err(Error::ReducibleModulus(p));
                }
                p
            }
            None => ((1u64 << m) + 1..)
                .step_by(2)
                .find(|&p| is_irreducible(p))
                .expect("irreducible polynomials exist in every degree"),
        };
        let mut inner = GfInner { m, modulus, tables: None };
        if m <= TABLE_DEGREE {
            inner.tables = Some(Self::build_tables(m, modulus));
        }
        Ok(Gf(Arc::new(inner)))
    }

    /// `GF(q)` with the default modulus; `q` must be a power of two.
    pub fn with_size(q: u64) -> Result<Gf> {
        if q < 2 || !q.is_power_of_two() {
            return Err(Error::UnsupportedField(format!("q = {q} is not a power of two")));
        }
        Gf::new(q.trailing_zeros(), None)
    }

    fn build_tables(m: u32, modulus: u64) -> Tables {
        let size = 1u64 << m;
        let order = (size - 1) as usize;
        for g in 1..size as u32 {
            let mut exp = Vec::with_capacity(2 * order);
            let mut x = 1u32;
            let mut period = 0usize;
            loop {
                exp.push(x);
                period += 1;
                x = clmul_reduce(x, g, m, modulus);
                if x == 1 || period > order {
                    break;
                }
            }
            if period == order {
                let mut log = vec![0u32; size as usize];
                for (i, &e) in exp.iter().enumerate() {
                    log[e as usize] = i as u32;
                }
                let doubled: Vec<u32> = exp.iter().chain(exp.iter()).copied().collect();
                return Tables { exp: doubled, log };
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic")
    }

    pub fn degree(&self) -> u32 {
        self.0.m
    }

    pub fn modulus(&self) -> u64 {
        self.0.modulus
    }

    /// Number of elements, `2^m`.
    pub fn size(&self) -> u64 {
        1u64 << self.0.m
    }

    pub fn contains(&self, a: u32) -> bool {
        (a as u64) < self.size()
    }

    pub fn elem(&self, bits: u32) -> Result<FieldElem> {
        if !self.contains(bits) {
            return Err(Error::UnsupportedField(format!("0x{bits:x} is not an element of {self}")));
        }
        Ok(FieldElem { bits, field: self.clone() })
    }

    #[inline]
    pub fn mul_bits(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.0.tables {
            Some(t) => t.exp[(t.log[a as usize] + t.log[b as usize]) as usize],
            None => clmul_reduce(a, b, self.0.m, self.0.modulus),
        }
    }

    pub fn pow_bits(&self, a: u32, e: u128) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = (self.size() - 1) as u128;
        match &self.0.tables {
            Some(t) => {
                let l = (t.log[a as usize] as u128 * (e % order)) % order;
                t.exp[l as usize]
            }
            None => {
                let mut e = e % order;
                if e == 0 {
                    return 1;
                }
                let mut base = a;
                let mut acc = 1u32;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = self.mul_bits(acc, base);
                    }
                    base = self.mul_bits(base, base);
                    e >>= 1;
                }
                acc
            }
        }
    }

    pub fn inv_bits(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.0.tables {
            Some(t) => {
                let order = (self.size() - 1) as u32;
                t.exp[((order - t.log[a as usize]) % order) as usize]
            }
            None => self.pow_bits(a, (self.size() - 2) as u128),
        })
    }

    /// Absolute trace `a + a^2 + ... + a^(2^(m-1))`, either 0 or 1.
    pub fn trace_bits(&self, a: u32) -> u32 {
        let mut t = 0;
        let mut x = a;
        for _ in 0..self.0.m {
            t ^= x;
            x = self.mul_bits(x, x);
        }
        t
    }

    /// A generator of the multiplicative group.
    pub fn primitive_element(&self) -> u32 {
        if let Some(t) = &self.0.tables {
            return t.exp[1];
        }
        let order = self.size() - 1;
        let factors = prime_factors(order);
        (2..)
            .find(|&g| factors.iter().all(|p| self.pow_bits(g, (order / p) as u128) != 1))
            .expect("primitive element exists")
    }

    /// All elements in increasing bit order. Only sensible for small fields.
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.size() as u32
    }
}

impl Ring for Gf {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        a ^ b
    }
    fn neg(&self, a: &u32) -> u32 {
        *a
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        a ^ b
    }
    fn mul(&self, a: &u32, b: &u32) -> Result<u32> {
        Ok(self.mul_bits(*a, *b))
    }
    fn from_i64(&self, n: i64) -> u32 {
        (n.rem_euclid(2)) as u32
    }
    fn is_char_two(&self) -> bool {
        true
    }
    fn det(&self, m: &Matrix<u32>) -> Result<u32> {
        linalg::det_gauss(self, m)
    }
}

impl CoeffRing for Gf {
    fn tag(&self) -> RingTag {
        RingTag::Gf { m: self.0.m, modulus: self.0.modulus }
    }
    fn from_bigint(&self, n: &BigInt) -> u32 {
        n.mod_floor(&BigInt::from(2)).to_u32().expect("parity")
    }
    fn fmt_coeff(&self, a: &u32) -> String {
        format!("0x{a:x}")
    }
    fn parse_coeff(&self, s: &str) -> Result<u32> {
        let s = s.trim();
        let v = if let Some(hex) = s.strip_prefix("0x") {
            u32::from_str_radix(hex, 16).map_err(|_| Error::Parse(format!("bad field element '{s}'")))?
        } else {
            let n: BigInt = s.parse().map_err(|_| Error::Parse(format!("bad coefficient '{s}'")))?;
            self.from_bigint(&n)
        };
        if !self.contains(v) {
            return Err(Error::Parse(format!("'{s}' is not an element of {self}")));
        }
        Ok(v)
    }
    fn mul_coeff(&self, a: &u32, b: &u32) -> u32 {
        self.mul_bits(*a, *b)
    }
}

/// Creates a base field `GF(2^m)` with `1 <= m <= 16`.
pub fn gf_make_field(m: u32, modulus: Option<u64>) -> Result<Gf> {
    if m == 0 || m > MAX_BASE_DEGREE {
        return Err(Error::UnsupportedField(format!("base field GF(2^{m}) outside 1..=16")));
    }
    Gf::new(m, modulus)
}

/// A field element bundled with its field, with checked arithmetic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    bits: u32,
    field: Gf,
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{:x} in {}", self.bits, self.field)
    }
}

impl FieldElem {
    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn field(&self) -> &Gf {
        &self.field
    }

    fn same(&self, other: &FieldElem) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn wrap(&self, bits: u32) -> FieldElem {
        FieldElem { bits, field: self.field.clone() }
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same(other)?;
        Ok(self.wrap(self.bits ^ other.bits))
    }

    pub fn mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same(other)?;
        Ok(self.wrap(self.field.mul_bits(self.bits, other.bits)))
    }

    pub fn inv(&self) -> Result<FieldElem> {
        Ok(self.wrap(self.field.inv_bits(self.bits)?))
    }

    pub fn pow(&self, e: u128) -> FieldElem {
        self.wrap(self.field.pow_bits(self.bits, e))
    }

    /// The absolute Frobenius `x -> x^2`.
    pub fn frobenius(&self) -> FieldElem {
        self.wrap(self.field.mul_bits(self.bits, self.bits))
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }
}

/// `true` iff `a` is not of the form `x + x^2`, decided by enumerating the
/// whole field.
pub fn is_valid_alpha(a: &FieldElem) -> bool {
    let field = a.field();
    let image: HashSet<u32> = field.elements().map(|x| x ^ field.mul_bits(x, x)).collect();
    !image.contains(&a.bits())
}

/// A ring embedding `GF(2^m) -> GF(2^(m*s))`, realized by sending the base
/// generator `x` to a root of the base modulus in the larger field.
#[derive(Clone, Debug)]
pub struct Embedding {
    base: Gf,
    target: Gf,
    /// Images of `x^0 .. x^(m-1)`.
    images: Vec<u32>,
    /// Echelon form of `images` for pulling elements back:
    /// `(vector, combination of base bits, pivot bit)`.
    echelon: Vec<(u32, u32, u32)>,
}

impl Embedding {
    /// Embeds `base` into a fresh `GF(2^(m*s))` with the default modulus.
    pub fn new(base: &Gf, s: u32) -> Result<Embedding> {
        let total = base.degree().checked_mul(s).filter(|&t| t <= MAX_FIELD_DEGREE && s >= 1);
        let total = total.ok_or(Error::NoEmbedding {
            from: base.degree(),
            to: base.degree().saturating_mul(s),
        })?;
        let target = Gf::new(total, None)?;
        Embedding::between(base, &target)
    }

    /// Embeds `base` into an existing `target` field.
    pub fn between(base: &Gf, target: &Gf) -> Result<Embedding> {
        let (m, big) = (base.degree(), target.degree());
        if big % m != 0 {
            return Err(Error::NoEmbedding { from: m, to: big });
        }
        let root = find_root(base.modulus(), target, m).ok_or(Error::NoEmbedding { from: m, to: big })?;
        let mut images = Vec::with_capacity(m as usize);
        let mut power = 1u32;
        for _ in 0..m {
            images.push(power);
            power = target.mul_bits(power, root);
        }
        let mut echelon: Vec<(u32, u32, u32)> = Vec::new();
        for (i, &img) in images.iter().enumerate() {
            let (mut v, mut comb) = (img, 1u32 << i);
            for &(ev, ec, pivot) in &echelon {
                if v >> pivot & 1 == 1 {
                    v ^= ev;
                    comb ^= ec;
                }
            }
            debug_assert!(v != 0, "powers of a root of an irreducible are independent");
            echelon.push((v, comb, 31 - v.leading_zeros()));
        }
        Ok(Embedding { base: base.clone(), target: target.clone(), images, echelon })
    }

    pub fn base(&self) -> &Gf {
        &self.base
    }

    pub fn target(&self) -> &Gf {
        &self.target
    }

    /// Image of a base element given by its bits.
    #[inline]
    pub fn embed_bits(&self, a: u32) -> u32 {
        let mut out = 0;
        let mut a = a;
        let mut i = 0;
        while a != 0 {
            if a & 1 == 1 {
                out ^= self.images[i];
            }
            a >>= 1;
            i += 1;
        }
        out
    }

    pub fn embed(&self, a: &FieldElem) -> Result<FieldElem> {
        if a.field() != &self.base {
            return Err(Error::FieldMismatch);
        }
        Ok(FieldElem { bits: self.embed_bits(a.bits()), field: self.target.clone() })
    }

    /// The base-field preimage of `y`, if `y` lies in the embedded subfield.
    pub fn pullback_bits(&self, y: u32) -> Option<u32> {
        let (mut v, mut comb) = (y, 0u32);
        for &(ev, ec, pivot) in &self.echelon {
            if v >> pivot & 1 == 1 {
                v ^= ev;
                comb ^= ec;
            }
        }
        (v == 0).then_some(comb)
    }
}

/// Smallest root of the binary polynomial `p` in `target`, searching the
/// subfield of size `2^m` where every root must lie.
fn find_root(p: u64, target: &Gf, m: u32) -> Option<u32> {
    let eval = |y: u32| {
        let mut acc = 0u32;
        for i in (0..=degree(p)).rev() {
            acc = target.mul_bits(acc, y);
            if p >> i & 1 == 1 {
                acc ^= 1;
            }
        }
        acc
    };
    if target.degree() <= 20 {
        return target.elements().find(|&y| eval(y) == 0);
    }
    let order = target.size() - 1;
    let h = target.pow_bits(target.primitive_element(), (order / ((1u64 << m) - 1)) as u128);
    let mut y = 1u32;
    let mut best: Option<u32> = None;
    for _ in 0..((1u64 << m) - 1) {
        if eval(y) == 0 {
            best = Some(best.map_or(y, |b| b.min(y)));
        }
        y = target.mul_bits(y, h);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf4() -> Gf {
        gf_make_field(2, Some(0b111)).unwrap()
    }

    #[test]
    fn prime_field_uses_x_plus_one() {
        let f = gf_make_field(1, None).unwrap();
        assert_eq!(f.modulus(), 0b11);
        assert_eq!(f.mul_bits(1, 1), 1);
        assert_eq!(f.to_string(), "GF(2^1):modulus=0x3");
    }

    #[test]
    fn reducible_modulus_is_rejected() {
        assert_eq!(gf_make_field(2, Some(0b101)).unwrap_err(), Error::ReducibleModulus(0b101));
        assert!(gf_make_field(2, Some(0b111)).is_ok());
        assert!(gf_make_field(17, None).is_err());
    }

    #[test]
    fn gf4_omega_squared_is_omega_plus_one() {
        let f = gf4();
        let w = f.elem(0b10).unwrap();
        assert_eq!(w.mul(&w).unwrap().bits(), 0b11);
        assert_eq!(w.pow(4).bits(), w.bits());
        assert_eq!(f.to_string(), "GF(2^2):modulus=0x7");
    }

    #[test]
    fn field_axioms_hold_in_small_fields() {
        for m in 1..=6 {
            let f = gf_make_field(m, None).unwrap();
            for a in f.elements() {
                assert_eq!(a ^ a, 0);
                assert_eq!(f.pow_bits(a, f.size() as u128), a);
                if a != 0 {
                    assert_eq!(f.mul_bits(a, f.inv_bits(a).unwrap()), 1);
                }
                for b in f.elements() {
                    let s = a ^ b;
                    assert_eq!(f.mul_bits(s, s), f.mul_bits(a, a) ^ f.mul_bits(b, b));
                }
            }
        }
    }

    #[test]
    fn table_and_carryless_paths_agree() {
        let f = Gf::new(8, None).unwrap();
        for a in (0..256u32).step_by(7) {
            for b in (0..256u32).step_by(5) {
                assert_eq!(f.mul_bits(a, b), clmul_reduce(a, b, 8, f.modulus()));
            }
        }
    }

    #[test]
    fn inverse_of_zero_fails_and_mixed_fields_are_rejected() {
        let f = gf4();
        assert_eq!(f.elem(0).unwrap().inv().unwrap_err(), Error::DivisionByZero);
        let g = gf_make_field(3, None).unwrap();
        assert_eq!(f.elem(1).unwrap().add(&g.elem(1).unwrap()).unwrap_err(), Error::FieldMismatch);
    }

    #[test]
    fn alpha_validity_matches_enumeration_and_trace() {
        let f2 = gf_make_field(1, None).unwrap();
        assert!(is_valid_alpha(&f2.elem(1).unwrap()));
        assert!(!is_valid_alpha(&f2.elem(0).unwrap()));
        let f4 = gf4();
        assert!(!is_valid_alpha(&f4.elem(1).unwrap()));
        for m in 1..=8 {
            let f = gf_make_field(m, None).unwrap();
            let valid: Vec<u32> = f.elements().filter(|&a| is_valid_alpha(&f.elem(a).unwrap())).collect();
            assert_eq!(valid.len() as u64, f.size() / 2);
            for a in f.elements() {
                assert_eq!(valid.contains(&a), f.trace_bits(a) == 1);
            }
        }
    }

    #[test]
    fn embeddings_are_injective_homomorphisms() {
        for (m, s) in [(1, 2), (2, 3), (2, 8), (3, 2), (1, 16), (4, 8)] {
            let base = gf_make_field(m, None).unwrap();
            let e = Embedding::new(&base, s).unwrap();
            assert_eq!(e.embed_bits(0), 0);
            assert_eq!(e.embed_bits(1), 1);
            let sample: Vec<u32> = base.elements().take(32).collect();
            let mut seen = HashSet::new();
            for &a in &sample {
                assert!(seen.insert(e.embed_bits(a)));
                assert_eq!(e.pullback_bits(e.embed_bits(a)), Some(a));
                for &b in &sample {
                    assert_eq!(e.embed_bits(a ^ b), e.embed_bits(a) ^ e.embed_bits(b));
                    assert_eq!(
                        e.embed_bits(base.mul_bits(a, b)),
                        e.target().mul_bits(e.embed_bits(a), e.embed_bits(b))
                    );
                }
            }
        }
    }

    #[test]
    fn pullback_rejects_elements_outside_the_subfield() {
        let base = gf_make_field(1, None).unwrap();
        let e = Embedding::new(&base, 2).unwrap();
        assert_eq!(e.pullback_bits(0b10), None);
        assert!(Embedding::between(&gf4(), &gf_make_field(3, None).unwrap()).is_err());
    }
}
