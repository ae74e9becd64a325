//! The group ring `R_F = Z[F^x/(F^x)^2]` of a finite field. The square-class
//! group has order at most 2, so elements are pairs `c0 + c1 <u>`.

use std::ops::{Add, Mul, Neg, Sub};

use crate::ffield::{FieldElem, FieldSpec};
use crate::projline::SquareClass;
use crate::Result;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct GroupRingElem {
    pub c0: i64,
    pub c1: i64,
}

impl GroupRingElem {
    pub const ZERO: Self = GroupRingElem { c0: 0, c1: 0 };
    pub const ONE: Self = GroupRingElem { c0: 1, c1: 0 };

    pub fn new(c0: i64, c1: i64) -> Self {
        GroupRingElem { c0, c1 }
    }

    /// `<x>` for a square class.
    pub fn class(c: SquareClass) -> Self {
        match c {
            SquareClass::One => Self::ONE,
            SquareClass::U => GroupRingElem { c0: 0, c1: 1 },
        }
    }

    /// `<x>` for a nonzero field element.
    pub fn of(f: &FieldSpec, x: FieldElem) -> Result<Self> {
        Ok(Self::class(SquareClass::of(f, x)?))
    }

    /// `<<x>> = <x> - 1`.
    pub fn pfister(f: &FieldSpec, x: FieldElem) -> Result<Self> {
        Ok(Self::of(f, x)? - Self::ONE)
    }

    /// The augmentation `c0 + c1`.
    pub fn aug(self) -> i64 {
        self.c0 + self.c1
    }

    pub fn is_zero(self) -> bool {
        self == Self::ZERO
    }

    pub fn scale(self, k: i64) -> Self {
        GroupRingElem { c0: self.c0 * k, c1: self.c1 * k }
    }

    /// Swaps the two components: multiplication by `<u>`.
    pub fn twist(self) -> Self {
        GroupRingElem { c0: self.c1, c1: self.c0 }
    }
}

impl Add for GroupRingElem {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        GroupRingElem { c0: self.c0 + o.c0, c1: self.c1 + o.c1 }
    }
}

impl Sub for GroupRingElem {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        GroupRingElem { c0: self.c0 - o.c0, c1: self.c1 - o.c1 }
    }
}

impl Neg for GroupRingElem {
    type Output = Self;
    fn neg(self) -> Self {
        GroupRingElem { c0: -self.c0, c1: -self.c1 }
    }
}

impl Mul for GroupRingElem {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        GroupRingElem {
            c0: self.c0 * o.c0 + self.c1 * o.c1,
            c1: self.c0 * o.c1 + self.c1 * o.c0,
        }
    }
}
