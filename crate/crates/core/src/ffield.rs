//! Finite fields `F_q = F_p[T]/(m(T))`, their unit groups, and the quadratic
//! extension `F_{q^2}` written as `F_q(theta)`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

/// Fields larger than this are rejected unless a caller passes its own bound.
pub const DEFAULT_MAX_Q: u64 = 1 << 14;

/// An element of `F_q`.
///
/// The coefficient vector `(c_0, ..., c_{f-1})` of the residue class
/// representative is packed as the base-`p` integer `sum c_i p^i`, so two
/// elements are equal iff their coefficient vectors are. Use
/// [`FieldSpec::coeffs`] to unpack it. The derived `Ord` is only a storage
/// order; [`FieldSpec::lex_cmp`] gives the low-degree-first lexicographic
/// order used for every "smallest element" choice.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FieldElem(u32);

impl FieldElem {
    /// The packed coefficient vector.
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    f: u32,
    q: u32,
    modulus: Vec<u32>,
    primitive: FieldElem,
    exp: Arc<Vec<u32>>,
    log: Arc<Vec<u32>>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("f", &self.f)
            .field("modulus", &self.modulus)
            .field("primitive", &self.primitive)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.f == other.f && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorisation by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Writes `q = p^f`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    match factorize(q).as_slice() {
        [(p, f)] => Some((*p, *f)),
        _ => None,
    }
}

/// All prime powers in `lo..=hi`, ascending.
pub fn prime_powers(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..=hi).filter(|&q| prime_power(q).is_some()).collect()
}

// Dense polynomial helpers over F_p, coefficients low degree first.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = (r[r.len() - 1] as u64 * lead_inv as u64 % p as u64) as u32;
        for (i, &mi) in m.iter().enumerate() {
            let t = (c as u64 * mi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - t) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
    poly_rem(&prod, m, p)
}

fn poly_powmod(a: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut base = poly_rem(a, m, p);
    let mut acc = vec![1u32];
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &base, m, p);
        }
        base = poly_mulmod(&base, &base, m, p);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for n in 0..count {
            let mut g = digits(n, p, d);
            g.push(1);
            if poly_rem(m, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Base-`p` digits of `n`, least significant first, padded to `len`.
fn digits(mut n: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((n % p as u64) as u32);
        n /= p as u64;
    }
    out
}

/// Coefficient vectors of length `len` in lexicographic order with `c_0` most
/// significant.
fn lex_vectors(p: u32, len: usize) -> impl Iterator<Item = Vec<u32>> {
    let count = (p as u64).pow(len as u32);
    (0..count).map(move |n| {
        let mut v = digits(n, p, len);
        v.reverse();
        v
    })
}

impl FieldSpec {
    /// `F_{p^f}` with the default size bound.
    pub fn new(p: u64, f: u32) -> Result<Self> {
        Self::with_bound(p, f, DEFAULT_MAX_Q)
    }

    /// The field with `q` elements.
    pub fn of_order(q: u64) -> Result<Self> {
        Self::of_order_with_bound(q, DEFAULT_MAX_Q)
    }

    pub fn of_order_with_bound(q: u64, bound: u64) -> Result<Self> {
        let (p, f) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Self::with_bound(p, f, bound)
    }

    /// Builds `F_{p^f}` using the lexicographically smallest monic
    /// irreducible modulus and the lexicographically smallest primitive
    /// element.
    pub fn with_bound(p: u64, f: u32, bound: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::CompositeCharacteristic(p));
        }
        if f == 0 {
            return Err(Error::BadArgument("exponent must be positive".into()));
        }
        let size = p
            .checked_pow(f)
            .filter(|&s| s <= bound)
            .ok_or(Error::BoundExceeded { size: p.saturating_pow(f), bound })?;
        let (p, q) = (p as u32, size as u32);
        let fu = f as usize;

        let modulus = if f == 1 {
            vec![0, 1]
        } else {
            lex_vectors(p, fu)
                .map(|mut low| {
                    low.push(1);
                    low
                })
                .find(|m| is_irreducible(m, p))
                .expect("an irreducible polynomial of every degree exists")
        };

        let order_factors: Vec<u64> =
            factorize(q as u64 - 1).into_iter().map(|(l, _)| l).collect();
        let has_full_order = |c: &[u32]| {
            let mut c = c.to_vec();
            poly_trim(&mut c);
            !c.is_empty()
                && order_factors
                    .iter()
                    .all(|&l| poly_powmod(&c, (q as u64 - 1) / l, &modulus, p) != [1])
        };
        let primitive_coeffs = lex_vectors(p, fu)
            .find(|c| has_full_order(c))
            .expect("the unit group of a finite field is cyclic");

        let pack = |c: &[u32]| -> u32 {
            c.iter().rev().fold(0u32, |acc, &d| acc * p + d)
        };
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![0u32; q as usize];
        let mut cur = vec![1u32];
        let mut g = primitive_coeffs.clone();
        poly_trim(&mut g);
        for i in 0..q - 1 {
            let mut full = cur.clone();
            full.resize(fu, 0);
            let enc = pack(&full);
            exp.push(enc);
            log[enc as usize] = i;
            cur = poly_mulmod(&cur, &g, &modulus, p);
        }

        Ok(FieldSpec {
            p,
            f,
            q,
            modulus,
            primitive: FieldElem(pack(&primitive_coeffs)),
            exp: Arc::new(exp),
            log: Arc::new(log),
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Monic modulus, low degree first (length `f + 1`).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn primitive(&self) -> FieldElem {
        self.primitive
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(0)
    }

    pub fn one(&self) -> FieldElem {
        FieldElem(1)
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> FieldElem {
        FieldElem(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn coeffs(&self, x: FieldElem) -> Vec<u32> {
        digits(x.0 as u64, self.p, self.f as usize)
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Result<FieldElem> {
        if c.len() != self.f as usize || c.iter().any(|&d| d >= self.p) {
            return Err(Error::BadArgument(format!("not a coefficient vector of F_{}", self.q)));
        }
        Ok(FieldElem(c.iter().rev().fold(0, |acc, &d| acc * self.p + d)))
    }

    /// Compares coefficient vectors lexicographically, `c_0` first.
    pub fn lex_cmp(&self, a: FieldElem, b: FieldElem) -> Ordering {
        self.coeffs(a).cmp(&self.coeffs(b))
    }

    /// All elements, in lexicographic coefficient order.
    pub fn elements(&self) -> Vec<FieldElem> {
        let mut all: Vec<FieldElem> = (0..self.q).map(FieldElem).collect();
        all.sort_by(|&a, &b| self.lex_cmp(a, b));
        all
    }

    /// `g^0, g^1, ..., g^{q-2}` for the fixed primitive element `g`.
    pub fn units(&self) -> impl Iterator<Item = FieldElem> + '_ {
        self.exp.iter().map(|&e| FieldElem(e))
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.p == 2 {
            return FieldElem(a.0 ^ b.0);
        }
        if self.f == 1 {
            return FieldElem((a.0 + b.0) % self.p);
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0, 1);
        while x > 0 || y > 0 {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        FieldElem(out)
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if self.p == 2 {
            return a;
        }
        let (mut x, mut out, mut place) = (a.0, 0, 1);
        while x > 0 {
            out += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        FieldElem(out)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.is_zero() || b.is_zero() {
            return FieldElem(0);
        }
        let n = self.q - 1;
        let e = (self.log[a.0 as usize] + self.log[b.0 as usize]) % n;
        FieldElem(self.exp[e as usize])
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.q - 1;
        Ok(FieldElem(self.exp[((n - self.log[a.0 as usize]) % n) as usize]))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e`; negative exponents require `a != 0`.
    pub fn pow(&self, a: FieldElem, e: i64) -> Result<FieldElem> {
        if a.is_zero() {
            return match e.cmp(&0) {
                Ordering::Less => Err(Error::DivisionByZero),
                Ordering::Equal => Ok(self.one()),
                Ordering::Greater => Ok(self.zero()),
            };
        }
        let n = (self.q - 1) as i64;
        let l = self.log[a.0 as usize] as i64;
        let idx = ((l as i128 * e as i128).rem_euclid(n as i128)) as usize;
        Ok(FieldElem(self.exp[idx]))
    }

    /// The exponent `k` in `[0, q-1)` with `g^k = x`.
    pub fn discrete_log(&self, x: FieldElem) -> Result<u32> {
        if x.is_zero() {
            return Err(Error::ZeroArgument);
        }
        Ok(self.log[x.0 as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, x: FieldElem) -> Result<u64> {
        let l = self.discrete_log(x)? as u64;
        let n = self.q as u64 - 1;
        Ok(n / num_integer::gcd(n, l))
    }

    pub fn is_square(&self, x: FieldElem) -> Result<bool> {
        let l = self.discrete_log(x)?;
        Ok(self.p == 2 || l % 2 == 0)
    }

    /// The lexicographically smallest nonsquare, or `None` in characteristic 2.
    pub fn smallest_nonsquare(&self) -> Option<FieldElem> {
        if self.p == 2 {
            return None;
        }
        self.elements()
            .into_iter()
            .find(|&x| !x.is_zero() && !self.is_square(x).unwrap())
    }

    /// Absolute trace `x + x^p + ... + x^{p^{f-1}}`, as a residue mod `p`.
    pub fn trace(&self, x: FieldElem) -> u32 {
        let mut acc = self.zero();
        let mut cur = x;
        for _ in 0..self.f {
            acc = self.add(acc, cur);
            cur = self.pow(cur, self.p as i64).unwrap();
        }
        debug_assert!(acc.0 < self.p);
        acc.0
    }

    /// `g^{(q-1)/n}`: the first power of the primitive element with
    /// multiplicative order exactly `n`.
    pub fn element_of_order(&self, n: u64) -> Result<FieldElem> {
        let m = self.q as u64 - 1;
        if n == 0 || m % n != 0 {
            return Err(Error::NoSuchOrder(n));
        }
        self.pow(self.primitive, (m / n) as i64)
    }

    pub fn quadratic_extension(&self) -> ExtensionData {
        ExtensionData::new(self)
    }

    pub fn format(&self, x: FieldElem) -> String {
        if self.f == 1 {
            return x.0.to_string();
        }
        let c = self.coeffs(x);
        let terms: Vec<String> = c
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != 0)
            .map(|(i, &d)| match (i, d) {
                (0, d) => d.to_string(),
                (1, 1) => "T".to_string(),
                (1, d) => format!("{d}T"),
                (i, 1) => format!("T^{i}"),
                (i, d) => format!("{d}T^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

/// Defining relation of `theta` over the base field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThetaRelation {
    /// `theta^2 = a` for a nonsquare `a` (odd characteristic).
    SquareRoot,
    /// `theta^2 + theta = alpha` with `Tr(alpha) = 1` (characteristic 2).
    ArtinSchreier,
}

/// `a + b*theta` in `F_{q^2} = F_q(theta)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtElem {
    pub a: FieldElem,
    pub b: FieldElem,
}

#[derive(Clone, Debug)]
pub struct ExtensionData {
    base: FieldSpec,
    relation: ThetaRelation,
    constant: FieldElem,
    primitive: ExtElem,
}

impl ExtensionData {
    fn new(base: &FieldSpec) -> Self {
        let (relation, constant) = match base.smallest_nonsquare() {
            Some(a) => (ThetaRelation::SquareRoot, a),
            None => {
                let alpha = base
                    .elements()
                    .into_iter()
                    .find(|&x| base.trace(x) == 1)
                    .expect("the trace map onto F_2 is surjective");
                (ThetaRelation::ArtinSchreier, alpha)
            }
        };
        let mut ext = ExtensionData {
            base: base.clone(),
            relation,
            constant,
            primitive: ExtElem { a: base.one(), b: base.zero() },
        };
        let n = ext.unit_count();
        let primes: Vec<u64> = factorize(n).into_iter().map(|(l, _)| l).collect();
        let elems = base.elements();
        'search: for &a in &elems {
            for &b in &elems {
                let z = ExtElem { a, b };
                if z == ext.zero() {
                    continue;
                }
                if primes.iter().all(|&l| !ext.is_one(ext.pow(z, n / l))) {
                    ext.primitive = z;
                    break 'search;
                }
            }
        }
        ext
    }

    pub fn base(&self) -> &FieldSpec {
        &self.base
    }

    pub fn relation(&self) -> ThetaRelation {
        self.relation
    }

    /// The nonsquare `a` (odd `p`) or the trace-one `alpha` (`p = 2`).
    pub fn constant(&self) -> FieldElem {
        self.constant
    }

    /// `|F_{q^2}^x| = q^2 - 1`.
    pub fn unit_count(&self) -> u64 {
        let q = self.base.q as u64;
        q * q - 1
    }

    pub fn theta(&self) -> ExtElem {
        ExtElem { a: self.base.zero(), b: self.base.one() }
    }

    pub fn zero(&self) -> ExtElem {
        ExtElem { a: self.base.zero(), b: self.base.zero() }
    }

    pub fn one(&self) -> ExtElem {
        self.embed(self.base.one())
    }

    pub fn is_one(&self, z: ExtElem) -> bool {
        z == self.one()
    }

    pub fn embed(&self, x: FieldElem) -> ExtElem {
        ExtElem { a: x, b: self.base.zero() }
    }

    pub fn primitive(&self) -> ExtElem {
        self.primitive
    }

    pub fn add(&self, x: ExtElem, y: ExtElem) -> ExtElem {
        let f = &self.base;
        ExtElem { a: f.add(x.a, y.a), b: f.add(x.b, y.b) }
    }

    pub fn sub(&self, x: ExtElem, y: ExtElem) -> ExtElem {
        let f = &self.base;
        ExtElem { a: f.sub(x.a, y.a), b: f.sub(x.b, y.b) }
    }

    pub fn mul(&self, x: ExtElem, y: ExtElem) -> ExtElem {
        let f = &self.base;
        let ac = f.mul(x.a, y.a);
        let bd = f.mul(x.b, y.b);
        let cross = f.add(f.mul(x.a, y.b), f.mul(x.b, y.a));
        match self.relation {
            ThetaRelation::SquareRoot => ExtElem {
                a: f.add(ac, f.mul(bd, self.constant)),
                b: cross,
            },
            // theta^2 = theta + alpha
            ThetaRelation::ArtinSchreier => ExtElem {
                a: f.add(ac, f.mul(bd, self.constant)),
                b: f.add(cross, bd),
            },
        }
    }

    pub fn pow(&self, z: ExtElem, mut e: u64) -> ExtElem {
        let mut base = z;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The nontrivial automorphism over `F_q`.
    pub fn conjugate(&self, z: ExtElem) -> ExtElem {
        let f = &self.base;
        match self.relation {
            ThetaRelation::SquareRoot => ExtElem { a: z.a, b: f.neg(z.b) },
            // theta -> theta + 1
            ThetaRelation::ArtinSchreier => ExtElem { a: f.add(z.a, z.b), b: z.b },
        }
    }

    /// `z * z^q`, which lies in `F_q`.
    pub fn norm(&self, z: ExtElem) -> FieldElem {
        let n = self.mul(z, self.pow(z, self.base.q as u64));
        assert!(n.b.is_zero(), "norm must land in the base field");
        n.a
    }

    pub fn inv(&self, z: ExtElem) -> Result<ExtElem> {
        let n = self.base.inv(self.norm(z))?;
        let c = self.conjugate(z);
        Ok(ExtElem { a: self.base.mul(c.a, n), b: self.base.mul(c.b, n) })
    }

    pub fn order(&self, z: ExtElem) -> Result<u64> {
        if z == self.zero() {
            return Err(Error::ZeroArgument);
        }
        let mut n = self.unit_count();
        for (l, _) in factorize(n) {
            while n % l == 0 && self.is_one(self.pow(z, n / l)) {
                n /= l;
            }
        }
        Ok(n)
    }

    /// `h^{(q^2-1)/n}` for the fixed primitive element `h` of `F_{q^2}`.
    pub fn element_of_order(&self, n: u64) -> Result<ExtElem> {
        let m = self.unit_count();
        if n == 0 || m % n != 0 {
            return Err(Error::NoSuchOrder(n));
        }
        Ok(self.pow(self.primitive, m / n))
    }

    /// Every element of `F_{q^2}`, `a` major.
    pub fn elements(&self) -> Vec<ExtElem> {
        let elems = self.base.elements();
        elems
            .iter()
            .flat_map(|&a| elems.iter().map(move |&b| ExtElem { a, b }))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> FieldSpec {
        FieldSpec::of_order(q).unwrap()
    }

    #[test]
    fn prime_fields() {
        let f5 = f(5);
        assert_eq!(f5.modulus(), &[0, 1]);
        assert_eq!(f5.primitive(), f5.from_int(2));
        assert_eq!(f(2).primitive(), f(2).one());
        assert_eq!(f(7).primitive(), f(7).from_int(3));
    }

    #[test]
    fn f4_modulus_and_generator() {
        let f4 = f(4);
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        let w = f4.primitive();
        assert_eq!(f4.coeffs(w), vec![0, 1]);
        assert_eq!(f4.mul(w, w), f4.add(w, f4.one()));
    }

    #[test]
    fn small_arithmetic() {
        let f5 = f(5);
        assert_eq!(f5.mul(f5.from_int(2), f5.from_int(3)), f5.one());
        let f7 = f(7);
        assert_eq!(f7.inv(f7.from_int(3)).unwrap(), f7.from_int(5));
        assert_eq!(f7.inv(f7.zero()), Err(Error::DivisionByZero));
        assert_eq!(f7.pow(f7.zero(), -1), Err(Error::DivisionByZero));
    }

    #[test]
    fn discrete_logs() {
        let f5 = f(5);
        assert_eq!(f5.discrete_log(f5.from_int(4)).unwrap(), 2);
        assert_eq!(f5.discrete_log(f5.one()).unwrap(), 0);
        assert_eq!(f5.discrete_log(f5.zero()), Err(Error::ZeroArgument));
        let f7 = f(7);
        // powers of 3 mod 7: 1, 3, 2, 6, 4, 5
        assert_eq!(f7.discrete_log(f7.from_int(6)).unwrap(), 3);
    }

    #[test]
    fn squares() {
        let f5 = f(5);
        assert!(f5.is_square(f5.from_int(4)).unwrap());
        assert!(!f5.is_square(f5.from_int(2)).unwrap());
        assert_eq!(f5.is_square(f5.zero()), Err(Error::ZeroArgument));
        let f8 = f(8);
        assert!(f8.units().all(|x| f8.is_square(x).unwrap()));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(FieldSpec::new(6, 1).unwrap_err(), Error::CompositeCharacteristic(6));
        assert!(matches!(FieldSpec::new(2, 15), Err(Error::BoundExceeded { .. })));
        assert_eq!(FieldSpec::of_order(12).unwrap_err(), Error::NotPrimePower(12));
        assert!(FieldSpec::with_bound(2, 15, 1 << 15).is_ok());
    }

    #[test]
    fn moduli_are_irreducible_and_lex_smallest() {
        for q in [8u64, 9, 16, 25, 27, 32, 49, 64, 81, 125, 128] {
            let fld = f(q);
            let p = fld.p();
            assert!(is_irreducible(fld.modulus(), p));
            // no lexicographically smaller monic candidate is irreducible
            let low: Vec<u32> = fld.modulus()[..fld.f() as usize].to_vec();
            for cand in lex_vectors(p, fld.f() as usize).take_while(|c| *c != low) {
                let mut m = cand.clone();
                m.push(1);
                assert!(!is_irreducible(&m, p), "q={q} candidate {m:?}");
            }
        }
    }

    #[test]
    fn element_of_order_examples() {
        let f5 = f(5);
        assert_eq!(f5.element_of_order(4).unwrap(), f5.from_int(2));
        assert_eq!(f5.element_of_order(1).unwrap(), f5.one());
        assert_eq!(f5.element_of_order(3), Err(Error::NoSuchOrder(3)));
        // order (q+1)/2 = 13 lives in the quadratic extension of F_25
        assert_eq!(f(25).element_of_order(13), Err(Error::NoSuchOrder(13)));
        let ext = f(25).quadratic_extension();
        let th = ext.element_of_order(13).unwrap();
        assert_ne!(th, ext.one());
        assert!(ext.is_one(ext.pow(th, 13)));
        assert_eq!(ext.order(th).unwrap(), 13);
    }

    #[test]
    fn extension_of_f5() {
        let ext = f(5).quadratic_extension();
        assert_eq!(ext.relation(), ThetaRelation::SquareRoot);
        assert_eq!(ext.constant(), f(5).from_int(2));
        let kernel = ext
            .elements()
            .into_iter()
            .filter(|&z| z != ext.zero() && ext.norm(z) == ext.base().one())
            .count();
        assert_eq!(kernel, 6);
        let th = ext.element_of_order(13).unwrap_err();
        assert_eq!(th, Error::NoSuchOrder(13));
        let z = ext.element_of_order(12).unwrap();
        assert_eq!(ext.order(z).unwrap(), 12);
    }

    #[test]
    fn extension_of_f4() {
        let f4 = f(4);
        let ext = f4.quadratic_extension();
        assert_eq!(ext.relation(), ThetaRelation::ArtinSchreier);
        assert_eq!(f4.trace(ext.constant()), 1);
        let kernel = ext
            .elements()
            .into_iter()
            .filter(|&z| z != ext.zero() && ext.norm(z) == f4.one())
            .count();
        assert_eq!(kernel, 5);
    }
}
