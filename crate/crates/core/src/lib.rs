//! Exact computations with the rational invariants of orthogonal,
//! pseudo-symplectic and symplectic groups over finite fields of
//! characteristic two.
//!
//! The crate is layered bottom-up:
//!
//! * [`ring`]: integers, `Z/4`, `Z/2` and binary fields `GF(2^m)`;
//! * [`mpoly`]: sparse multivariate polynomials with Frobenius twists;
//! * [`linalg`]: determinants, Pfaffians and alternate matrices;
//! * [`forms`]: the standard quadratic and symmetric forms and their groups;
//! * [`invariants`]: the invariant polynomials and their Gram matrices;
//! * [`pit`]: randomized identity testing and generator expansions;
//! * [`identities`]: end-to-end checks producing [`identities::IdentityReport`]s.
//!
//! ```
//! use char2_invariants::prelude::*;
//!
//! let f2 = gf_make_field(1, None).unwrap();
//! let fam = orth_family_gf(&FormSpec::new(FormKind::OrthEven, 1, f2, None).unwrap(), 2).unwrap();
//! assert_eq!(fam.member(0).unwrap().to_string(), "x1*x2");
//! ```

pub mod error;
pub mod forms;
pub mod identities;
pub mod invariants;
pub mod linalg;
pub mod mpoly;
pub mod pit;
pub mod ring;

pub use error::{Error, Result};

/// The types most programs need.
pub mod prelude {
    pub use crate::error::{Error, Result};
    pub use crate::forms::{FormKind, FormSpec, GroupKind};
    pub use crate::invariants::{orth_family_gf, orth_family_int, InvariantFamily, Variant};
    pub use crate::linalg::Matrix;
    pub use crate::mpoly::{MPoly, PolyRing};
    pub use crate::ring::{gf_make_field, CoeffRing, Gf, Integers, Ring, ZMod};
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/fields.md")]
    pub mod fields {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    pub mod polynomials {}
    #[doc = include_str!("../../../book/src/pfaffians.md")]
    pub mod pfaffians {}
    #[doc = include_str!("../../../book/src/forms.md")]
    pub mod forms {}
    #[doc = include_str!("../../../book/src/invariants.md")]
    pub mod invariants {}
    #[doc = include_str!("../../../book/src/identities.md")]
    pub mod identities {}
    #[doc = include_str!("../../../book/src/pit.md")]
    pub mod pit {}
}
