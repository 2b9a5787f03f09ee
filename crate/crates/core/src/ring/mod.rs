//! Coefficient rings: the integers, `Z/4`, `Z/2`, and binary fields `GF(2^m)`.
//!
//! Every ring is a small context object implementing [`Ring`]; elements are
//! plain values and all arithmetic goes through the context. Polynomial rings
//! and matrices are generic over the same trait, so one determinant or
//! Pfaffian routine serves integers, field elements, and polynomials alike.

mod gf;

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

pub use gf::{gf_make_field, is_valid_alpha, Embedding, FieldElem, Gf, MAX_BASE_DEGREE, MAX_FIELD_DEGREE};

/// A commutative ring with unity, presented as a context object.
///
/// Addition and negation never fail. Multiplication returns a `Result`
/// because polynomial rings enforce a term budget.
pub trait Ring: Clone + fmt::Debug + PartialEq + Send + Sync {
    type Elem: Clone + Eq + Hash + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn from_i64(&self, n: i64) -> Self::Elem;

    /// Whether `1 + 1 = 0`.
    fn is_char_two(&self) -> bool;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    /// Exact determinant. The default is memoized cofactor expansion,
    /// which needs no division; rings with a better method override it.
    fn det(&self, m: &Matrix<Self::Elem>) -> Result<Self::Elem> {
        linalg::det_cofactor(self, m)
    }
}

/// Which coefficient ring a polynomial lives over.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingTag {
    Z,
    Z4,
    Z2,
    Gf { m: u32, modulus: u64 },
}

impl fmt::Display for RingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingTag::Z => write!(f, "Z"),
            RingTag::Z4 => write!(f, "Z4"),
            RingTag::Z2 => write!(f, "Z2"),
            RingTag::Gf { m, modulus } => write!(f, "GF(2^{m}):modulus=0x{modulus:x}"),
        }
    }
}

impl RingTag {
    pub fn parse(s: &str) -> Result<RingTag> {
        let s = s.trim();
        match s {
            "Z" => return Ok(RingTag::Z),
            "Z4" => return Ok(RingTag::Z4),
            "Z2" => return Ok(RingTag::Z2),
            _ => {}
        }
        let rest = s
            .strip_prefix("GF(2^")
            .ok_or_else(|| Error::Parse(format!("unknown ring '{s}'")))?;
        let (m, rest) = rest
            .split_once(')')
            .ok_or_else(|| Error::Parse(format!("malformed field descriptor '{s}'")))?;
        let m: u32 = m
            .parse()
            .map_err(|_| Error::Parse(format!("bad extension degree in '{s}'")))?;
        let hex = rest
            .strip_prefix(":modulus=0x")
            .ok_or_else(|| Error::Parse(format!("missing modulus in '{s}'")))?;
        let modulus = u64::from_str_radix(hex, 16)
            .map_err(|_| Error::Parse(format!("bad modulus in '{s}'")))?;
        Ok(RingTag::Gf { m, modulus })
    }
}

/// A ring usable as polynomial coefficients.
pub trait CoeffRing: Ring {
    fn tag(&self) -> RingTag;
    /// Image of an integer under the canonical map from `Z`.
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;
    fn fmt_coeff(&self, a: &Self::Elem) -> String;
    fn parse_coeff(&self, s: &str) -> Result<Self::Elem>;
    /// Infallible coefficient product.
    fn mul_coeff(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `a^2`, used by the characteristic-two squaring shortcut.
    fn square_coeff(&self, a: &Self::Elem) -> Self::Elem {
        self.mul_coeff(a, a)
    }
    /// Lift to an integer representative, when one is meaningful.
    fn to_bigint(&self, _a: &Self::Elem) -> Option<BigInt> {
        None
    }
}

fn parse_int(s: &str) -> Result<BigInt> {
    s.trim()
        .parse::<BigInt>()
        .map_err(|_| Error::Parse(format!("bad integer coefficient '{s}'")))
}

/// The integers, with arbitrary precision.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> Result<BigInt> {
        Ok(a * b)
    }
    fn from_i64(&self, n: i64) -> BigInt {
        BigInt::from(n)
    }
    fn is_char_two(&self) -> bool {
        false
    }
    fn det(&self, m: &Matrix<BigInt>) -> Result<BigInt> {
        linalg::det_bareiss(m)
    }
}

impl CoeffRing for Integers {
    fn tag(&self) -> RingTag {
        RingTag::Z
    }
    fn from_bigint(&self, n: &BigInt) -> BigInt {
        n.clone()
    }
    fn fmt_coeff(&self, a: &BigInt) -> String {
        a.to_string()
    }
    fn parse_coeff(&self, s: &str) -> Result<BigInt> {
        parse_int(s)
    }
    fn mul_coeff(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn to_bigint(&self, a: &BigInt) -> Option<BigInt> {
        Some(a.clone())
    }
}

/// `Z/2` or `Z/4`; elements are canonical residues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ZMod {
    modulus: u8,
}

impl ZMod {
    pub const Z2: ZMod = ZMod { modulus: 2 };
    pub const Z4: ZMod = ZMod { modulus: 4 };

    pub fn new(modulus: u8) -> Result<ZMod> {
        match modulus {
            2 | 4 => Ok(ZMod { modulus }),
            _ => Err(Error::UnsupportedField(format!("Z/{modulus}"))),
        }
    }

    pub fn modulus(&self) -> u8 {
        self.modulus
    }
}

impl Ring for ZMod {
    type Elem = u8;

    fn zero(&self) -> u8 {
        0
    }
    fn one(&self) -> u8 {
        1
    }
    fn is_zero(&self, a: &u8) -> bool {
        *a == 0
    }
    fn add(&self, a: &u8, b: &u8) -> u8 {
        (a + b) % self.modulus
    }
    fn neg(&self, a: &u8) -> u8 {
        (self.modulus - a) % self.modulus
    }
    fn mul(&self, a: &u8, b: &u8) -> Result<u8> {
        Ok(self.mul_coeff(a, b))
    }
    fn from_i64(&self, n: i64) -> u8 {
        n.rem_euclid(self.modulus as i64) as u8
    }
    fn is_char_two(&self) -> bool {
        self.modulus == 2
    }
}

impl CoeffRing for ZMod {
    fn tag(&self) -> RingTag {
        if self.modulus == 2 {
            RingTag::Z2
        } else {
            RingTag::Z4
        }
    }
    fn from_bigint(&self, n: &BigInt) -> u8 {
        n.mod_floor(&BigInt::from(self.modulus)).to_u8().expect("residue fits")
    }
    fn fmt_coeff(&self, a: &u8) -> String {
        a.to_string()
    }
    fn parse_coeff(&self, s: &str) -> Result<u8> {
        Ok(self.from_bigint(&parse_int(s)?))
    }
    fn mul_coeff(&self, a: &u8, b: &u8) -> u8 {
        (a * b) % self.modulus
    }
    fn to_bigint(&self, a: &u8) -> Option<BigInt> {
        Some(BigInt::from(*a))
    }
}
