//! Exact computations with the classical and refined (pre-)Bloch groups of
//! finite fields, the Bloch-Wigner maps, and explicit classes in the third
//! homology of `SL_2(F_q)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`ffield`]: arithmetic in `F_q`, discrete logarithms, and the quadratic
//!   extension `F_{q^2}`.
//! * [`projline`]: the projective line, Möbius action, the function `phi`
//!   and the refined cross ratio.
//! * [`intlinalg`]: Smith normal form, finitely generated abelian groups and
//!   the square-class group ring `Z[F^x/(F^x)^2]`.
//! * [`bloch`]: presentations of `P(F_q)` and `RP(F_q)`, the maps `lambda`,
//!   `lambda_1`, `lambda_2`, and the Bloch groups as kernels.
//! * [`homcalc`]: chain maps from the bar resolution into the complex of
//!   distinct points, `H_3` images of cyclic and quaternion subgroups, the
//!   discrete dilogarithm and p-parts of `H_k(SL_2(F_q))`.

pub mod bloch;
pub mod ffield;
pub mod homcalc;
pub mod intlinalg;
pub mod projline;

#[cfg(test)]
mod invariants;

pub use bloch::{BlochContext, Mode, PreBlochElem};
pub use ffield::{ExtElem, ExtensionData, FieldElem, FieldSpec};
pub use intlinalg::{AbGroup, GroupRingElem, IntMatrix, SnfResult};
pub use projline::{ProjPoint, RefinedTerm, SL2Mat, SquareClass};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    CompositeCharacteristic(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field size {size} exceeds the configured bound {bound}")]
    BoundExceeded { size: u64, bound: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("no element of order {0}")]
    NoSuchOrder(u64),
    #[error("points must be distinct")]
    EqualPoints,
    #[error("points are not pairwise distinct")]
    NotDistinct,
    #[error("matrix does not have determinant 1")]
    NotSpecialLinear,
    #[error("map does not vanish on relation row {row}")]
    NotWellDefined { row: usize },
    #[error("element has infinite order")]
    InfiniteOrder,
    #[error("vector does not lie in the subgroup")]
    NotInSubgroup,
    #[error("field with {0} elements is too small (need at least 4)")]
    FieldTooSmall(u64),
    #[error("bad argument: {0}")]
    BadArgument(String),
    #[error("basepoint y lies in the orbit of x")]
    BasepointInOrbit,
    #[error("basepoint x has a nontrivial stabilizer")]
    NontrivialStabilizer,
    #[error("matrices do not satisfy the quaternion relations")]
    NotQuaternion,
    #[error("q = {q} is not in the required congruence class ({required})")]
    WrongCongruence { q: u64, required: &'static str },
    #[error("pre-Bloch group is not cyclic")]
    NotCyclic,
    #[error("element is not a generator")]
    NotGenerator,
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
