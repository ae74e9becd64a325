//! The projective line over `F_q` with its `SL_2(F_q)` action.

use crate::ffield::{FieldElem, FieldSpec};
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum ProjPoint {
    Finite(FieldElem),
    Infinity,
}

impl ProjPoint {
    pub fn finite(self) -> Option<FieldElem> {
        match self {
            ProjPoint::Finite(x) => Some(x),
            ProjPoint::Infinity => None,
        }
    }
}

/// All `q + 1` points: the field elements in lexicographic order, then `oo`.
pub fn points(f: &FieldSpec) -> Vec<ProjPoint> {
    let mut pts: Vec<ProjPoint> = f.elements().into_iter().map(ProjPoint::Finite).collect();
    pts.push(ProjPoint::Infinity);
    pts
}

/// Class in `F^x / (F^x)^2`. The nontrivial class is represented by the
/// smallest nonsquare `u`; in characteristic 2 every class is `One`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum SquareClass {
    One,
    U,
}

impl SquareClass {
    pub fn of(f: &FieldSpec, x: FieldElem) -> Result<Self> {
        Ok(if f.is_square(x)? { SquareClass::One } else { SquareClass::U })
    }

    pub fn mul(self, other: Self) -> Self {
        if self == other {
            SquareClass::One
        } else {
            SquareClass::U
        }
    }
}

/// `<cls>[arg]`, a generator of `RP(F)` scaled by a square class.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct RefinedTerm {
    pub cls: SquareClass,
    pub arg: FieldElem,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SL2Mat {
    pub a: FieldElem,
    pub b: FieldElem,
    pub c: FieldElem,
    pub d: FieldElem,
}

impl SL2Mat {
    pub fn new(
        f: &FieldSpec,
        a: FieldElem,
        b: FieldElem,
        c: FieldElem,
        d: FieldElem,
    ) -> Result<Self> {
        if f.sub(f.mul(a, d), f.mul(b, c)) != f.one() {
            return Err(Error::NotSpecialLinear);
        }
        Ok(SL2Mat { a, b, c, d })
    }

    pub fn identity(f: &FieldSpec) -> Self {
        SL2Mat { a: f.one(), b: f.zero(), c: f.zero(), d: f.one() }
    }

    /// `[[0, -1], [1, 0]]`.
    pub fn w(f: &FieldSpec) -> Self {
        SL2Mat { a: f.zero(), b: f.neg(f.one()), c: f.one(), d: f.zero() }
    }

    /// `diag(x, x^{-1})`.
    pub fn diag(f: &FieldSpec, x: FieldElem) -> Result<Self> {
        Ok(SL2Mat { a: x, b: f.zero(), c: f.zero(), d: f.inv(x)? })
    }

    pub fn mul(&self, f: &FieldSpec, o: &SL2Mat) -> SL2Mat {
        SL2Mat {
            a: f.add(f.mul(self.a, o.a), f.mul(self.b, o.c)),
            b: f.add(f.mul(self.a, o.b), f.mul(self.b, o.d)),
            c: f.add(f.mul(self.c, o.a), f.mul(self.d, o.c)),
            d: f.add(f.mul(self.c, o.b), f.mul(self.d, o.d)),
        }
    }

    pub fn inv(&self, f: &FieldSpec) -> SL2Mat {
        SL2Mat { a: self.d, b: f.neg(self.b), c: f.neg(self.c), d: self.a }
    }

    pub fn pow(&self, f: &FieldSpec, mut e: u64) -> SL2Mat {
        let mut base = *self;
        let mut acc = SL2Mat::identity(f);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            base = base.mul(f, &base);
            e >>= 1;
        }
        acc
    }

    pub fn trace(&self, f: &FieldSpec) -> FieldElem {
        f.add(self.a, self.d)
    }

    /// Order of the matrix in `SL_2(F_q)`.
    pub fn order(&self, f: &FieldSpec) -> u64 {
        let id = SL2Mat::identity(f);
        let mut cur = *self;
        let mut n = 1;
        while cur != id {
            cur = cur.mul(f, self);
            n += 1;
        }
        n
    }

    /// Every element of `SL_2(F_q)`, ordered lexicographically by
    /// `(a, b, c, d)` in coefficient order.
    pub fn enumerate(f: &FieldSpec) -> Vec<SL2Mat> {
        let elems = f.elements();
        let mut out = Vec::new();
        for &a in &elems {
            for &b in &elems {
                for &c in &elems {
                    if a.is_zero() {
                        // then -bc = 1 and d is free
                        if f.mul(b, c) != f.neg(f.one()) {
                            continue;
                        }
                        for &d in &elems {
                            out.push(SL2Mat { a, b, c, d });
                        }
                    } else {
                        let d = f.div(f.add(f.one(), f.mul(b, c)), a).unwrap();
                        out.push(SL2Mat { a, b, c, d });
                    }
                }
            }
        }
        out
    }
}

/// `(a x + b) / (c x + d)`, with `oo -> a/c` and `-d/c -> oo`.
pub fn moebius_act(f: &FieldSpec, m: &SL2Mat, x: ProjPoint) -> ProjPoint {
    let (num, den) = match x {
        ProjPoint::Infinity => (m.a, m.c),
        ProjPoint::Finite(x) => (f.add(f.mul(m.a, x), m.b), f.add(f.mul(m.c, x), m.d)),
    };
    if den.is_zero() {
        ProjPoint::Infinity
    } else {
        ProjPoint::Finite(f.div(num, den).unwrap())
    }
}

/// A matrix in `SL_2` sending `x` to `0` and `y` to `oo`.
pub fn t_matrix(f: &FieldSpec, x: ProjPoint, y: ProjPoint) -> Result<SL2Mat> {
    use ProjPoint::*;
    match (x, y) {
        _ if x == y => Err(Error::EqualPoints),
        (Finite(x), Infinity) => Ok(SL2Mat { a: f.one(), b: f.neg(x), c: f.zero(), d: f.one() }),
        (Infinity, Finite(y)) => Ok(SL2Mat { a: f.zero(), b: f.neg(f.one()), c: f.one(), d: f.neg(y) }),
        (Finite(x), Finite(y)) => {
            let s = f.inv(f.sub(x, y))?;
            Ok(SL2Mat { a: f.one(), b: f.neg(x), c: s, d: f.neg(f.mul(y, s)) })
        }
        (Infinity, Infinity) => unreachable!(),
    }
}

fn distinct(pts: &[ProjPoint]) -> bool {
    pts.iter()
        .enumerate()
        .all(|(i, p)| pts[i + 1..].iter().all(|r| r != p))
}

/// `T_{x,y}(z)`, computed from its closed form.
pub fn phi(f: &FieldSpec, x: ProjPoint, y: ProjPoint, z: ProjPoint) -> Result<FieldElem> {
    use ProjPoint::*;
    if !distinct(&[x, y, z]) {
        return Err(Error::NotDistinct);
    }
    match (x, y, z) {
        (Infinity, Finite(y), Finite(z)) => f.inv(f.sub(y, z)),
        (Finite(x), Infinity, Finite(z)) => Ok(f.sub(z, x)),
        (Finite(x), Finite(y), Infinity) => Ok(f.sub(x, y)),
        (Finite(x), Finite(y), Finite(z)) => {
            f.div(f.mul(f.sub(z, x), f.sub(x, y)), f.sub(z, y))
        }
        _ => unreachable!("three distinct points include at most one infinity"),
    }
}

/// `cr(x0, x1, x2, x3) = <phi(x0,x1,x2)> [phi(x0,x1,x3) / phi(x0,x1,x2)]`.
pub fn refined_cross_ratio(
    f: &FieldSpec,
    x0: ProjPoint,
    x1: ProjPoint,
    x2: ProjPoint,
    x3: ProjPoint,
) -> Result<RefinedTerm> {
    if !distinct(&[x0, x1, x2, x3]) {
        return Err(Error::NotDistinct);
    }
    let a = phi(f, x0, x1, x2)?;
    let b = phi(f, x0, x1, x3)?;
    Ok(RefinedTerm { cls: SquareClass::of(f, a)?, arg: f.div(b, a)? })
}
