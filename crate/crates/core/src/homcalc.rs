//! Explicit homology of finite subgroups of `SL_2(F_q)`: the chain map from
//! the standard resolution to the complex of distinct points of `P^1`, the
//! resulting images of `H_3` of cyclic and generalised quaternion subgroups
//! in the (refined) pre-Bloch group, the generator `H_theta` of `P(F_q)`
//! and its discrete dilogarithm, and the `p`-primary parts of
//! `H_k(SL_2(F_q), Z)` for `k <= 3`.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bloch::{BlochContext, Mode, PreBlochElem};
use crate::ffield::{ExtElem, ExtensionData, FieldElem, FieldSpec, ThetaRelation};
use crate::intlinalg::{cokernel, AbGroup, IntMatrix};
use crate::projline::{moebius_act, points, refined_cross_ratio, ProjPoint, SL2Mat};
use crate::{Error, Result};

/// An integer combination of tuples of points of `P^1`. Tuples produced by
/// [`beta`] have pairwise distinct entries.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Chain {
    terms: BTreeMap<Vec<ProjPoint>, i64>,
}

impl Chain {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn tuple(pts: Vec<ProjPoint>) -> Self {
        let mut c = Self::zero();
        c.add_term(pts, 1);
        c
    }

    pub fn add_term(&mut self, pts: Vec<ProjPoint>, k: i64) {
        let e = self.terms.entry(pts.clone()).or_insert(0);
        *e += k;
        if *e == 0 {
            self.terms.remove(&pts);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[ProjPoint], i64)> {
        self.terms.iter().map(|(t, &k)| (t.as_slice(), k))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `d(x_0, ..., x_n) = sum_j (-1)^j (x_0, ..., omit x_j, ..., x_n)`.
    pub fn boundary(&self) -> Chain {
        let mut out = Chain::zero();
        for (t, k) in self.terms() {
            if t.len() < 2 {
                continue;
            }
            for j in 0..t.len() {
                let mut face = t.to_vec();
                face.remove(j);
                out.add_term(face, if j % 2 == 0 { k } else { -k });
            }
        }
        out
    }

    fn scaled(mut self, k: i64) -> Chain {
        for v in self.terms.values_mut() {
            *v *= k;
        }
        self.terms.retain(|_, v| *v != 0);
        self
    }
}

impl Add for Chain {
    type Output = Chain;
    fn add(mut self, o: Chain) -> Chain {
        for (t, k) in o.terms {
            self.add_term(t, k);
        }
        self
    }
}

impl Sub for Chain {
    type Output = Chain;
    fn sub(self, o: Chain) -> Chain {
        self + o.scaled(-1)
    }
}

fn distinct(pts: &[ProjPoint]) -> bool {
    pts.iter().enumerate().all(|(i, p)| pts[i + 1..].iter().all(|r| r != p))
}

/// `beta_n^{x,y}(g_0, ..., g_n)` for `n = g.len() - 1 <= 3`. The caller
/// guarantees that `y` is outside the orbit of `x` under a group containing
/// the `g_i`.
pub fn beta(f: &FieldSpec, x: ProjPoint, y: ProjPoint, g: &[SL2Mat]) -> Result<Chain> {
    let gx: Vec<ProjPoint> = g.iter().map(|m| moebius_act(f, m, x)).collect();
    let gy = |i: usize| moebius_act(f, &g[i], y);
    let adjacent_equal = gx.windows(2).any(|w| w[0] == w[1]);
    let t = |pts: &[ProjPoint]| Chain::tuple(pts.to_vec());
    Ok(match g.len() {
        1 => t(&gx),
        2 => {
            if adjacent_equal {
                Chain::zero()
            } else {
                t(&gx)
            }
        }
        3 => {
            if distinct(&gx) {
                t(&gx)
            } else if adjacent_equal {
                Chain::zero()
            } else {
                // g0 x = g2 x != g1 x
                t(&[gy(0), gx[0], gx[1]]) + t(&[gy(0), gx[1], gx[0]])
            }
        }
        4 => {
            if distinct(&gx) {
                t(&gx)
            } else if adjacent_equal {
                Chain::zero()
            } else if gx[0] == gx[2] && gx[1] == gx[3] {
                if gy(0) == gy(1) {
                    Chain::zero()
                } else {
                    t(&[gy(0), gy(1), gx[0], gx[1]]) + t(&[gy(0), gy(1), gx[1], gx[0]])
                }
            } else if gx[0] == gx[2] {
                t(&[gy(0), gx[0], gx[1], gx[3]]) + t(&[gy(0), gx[1], gx[0], gx[3]])
            } else if gx[1] == gx[3] {
                t(&[gx[0], gy(1), gx[1], gx[2]]) + t(&[gx[0], gy(1), gx[2], gx[1]])
            } else {
                // g0 x = g3 x is the only coincidence left
                t(&[gy(0), gx[1], gx[2], gx[0]]) - t(&[gy(0), gx[0], gx[1], gx[2]])
            }
        }
        _ => return Err(Error::BadArgument("beta is defined in degrees 0 to 3".into())),
    })
}

/// The subgroup of `SL_2(F_q)` generated by `gens`, sorted.
pub fn generate_group(f: &FieldSpec, gens: &[SL2Mat]) -> Vec<SL2Mat> {
    let id = SL2Mat::identity(f);
    let mut seen: BTreeSet<SL2Mat> = BTreeSet::from([id]);
    let mut frontier = vec![id];
    while let Some(g) = frontier.pop() {
        for s in gens {
            let h = g.mul(f, s);
            if seen.insert(h) {
                frontier.push(h);
            }
        }
    }
    seen.into_iter().collect()
}

pub fn orbit(f: &FieldSpec, group: &[SL2Mat], x: ProjPoint) -> BTreeSet<ProjPoint> {
    group.iter().map(|g| moebius_act(f, g, x)).collect()
}

fn stabilizer_trivial(f: &FieldSpec, group: &[SL2Mat], x: ProjPoint) -> bool {
    let id = SL2Mat::identity(f);
    group.iter().all(|g| *g == id || moebius_act(f, g, x) != x)
}

/// Outcome of a chain-map check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMapReport {
    pub tuples_checked: usize,
    /// The first tuple of group elements on which `d beta != beta d`.
    pub counterexample: Option<Vec<SL2Mat>>,
}

impl ChainMapReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

fn chain_map_holds(f: &FieldSpec, x: ProjPoint, y: ProjPoint, g: &[SL2Mat]) -> bool {
    let lhs = beta(f, x, y, g).unwrap().boundary();
    let mut rhs = Chain::zero();
    for j in 0..g.len() {
        let mut face = g.to_vec();
        face.remove(j);
        let b = beta(f, x, y, &face).unwrap();
        rhs = rhs + if j % 2 == 0 { b } else { b.scaled(-1) };
    }
    lhs == rhs
}

/// Checks `d beta_n = beta_{n-1} d` for `n = 1, 2, 3` on tuples from the
/// group generated by `gens`: every tuple when the group has at most 12
/// elements, otherwise `samples` random tuples per degree.
pub fn verify_chain_map(
    f: &FieldSpec,
    x: ProjPoint,
    y: ProjPoint,
    gens: &[SL2Mat],
    samples: usize,
) -> Result<ChainMapReport> {
    let group = generate_group(f, gens);
    if orbit(f, &group, x).contains(&y) {
        return Err(Error::BasepointInOrbit);
    }
    let mut checked = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for n in 1..=3usize {
        let tuples: Box<dyn Iterator<Item = Vec<SL2Mat>>> = if group.len() <= 12 {
            let total = group.len().pow(n as u32 + 1);
            let group = group.clone();
            Box::new((0..total).map(move |mut k| {
                (0..=n)
                    .map(|_| {
                        let g = group[k % group.len()];
                        k /= group.len();
                        g
                    })
                    .collect()
            }))
        } else {
            let picks: Vec<Vec<SL2Mat>> = (0..samples)
                .map(|_| (0..=n).map(|_| group[rng.gen_range(0..group.len())]).collect())
                .collect();
            Box::new(picks.into_iter())
        };
        for g in tuples {
            checked += 1;
            if !chain_map_holds(f, x, y, &g) {
                return Ok(ChainMapReport { tuples_checked: checked, counterexample: Some(g) });
            }
        }
    }
    Ok(ChainMapReport { tuples_checked: checked, counterexample: None })
}

/// `sum k cr(tuple)` over a chain of 4-tuples, as an element of `RP(F_q)`
/// (read classically by a classical context).
pub fn cross_ratio_image(f: &FieldSpec, chain: &Chain) -> Result<PreBlochElem> {
    let mut out = PreBlochElem::zero();
    for (t, k) in chain.terms() {
        let [x0, x1, x2, x3] = t else {
            return Err(Error::BadArgument("cross ratio needs 4-tuples".into()));
        };
        let term = PreBlochElem::from_refined(f, refined_cross_ratio(f, *x0, *x1, *x2, *x3)?)?;
        out = &out + &term.scale(k);
    }
    Ok(out)
}

/// A 3-cycle of the standard resolution: signed tuples `(g_0, .., g_3)`.
pub type Cycle3 = Vec<(i64, [SL2Mat; 4])>;

/// `sum_{i=0}^{r-1} (1, t, t^{i+1}, t^{i+2})`, representing a generator of
/// `H_3(<t>)`.
pub fn cyclic_cycle(f: &FieldSpec, t: &SL2Mat) -> Cycle3 {
    let r = t.order(f);
    let id = SL2Mat::identity(f);
    (0..r).map(|i| (1, [id, *t, t.pow(f, i + 1), t.pow(f, i + 2)])).collect()
}

/// `sum_{i=1}^{s-1} (1, X, X^{i+1}, X^{i+2}) - (1, X, XY, XY^2)
/// - (1, XY, Y^2, XY^2) - (1, XY, Y, Y^2)` for `Q_{4s}`.
pub fn quaternion_cycle(f: &FieldSpec, x: &SL2Mat, y: &SL2Mat, s: u64) -> Cycle3 {
    let id = SL2Mat::identity(f);
    let xy = x.mul(f, y);
    let y2 = y.mul(f, y);
    let xy2 = xy.mul(f, y);
    let mut c: Cycle3 = (1..s).map(|i| (1, [id, *x, x.pow(f, i + 1), x.pow(f, i + 2)])).collect();
    c.push((-1, [id, *x, xy, xy2]));
    c.push((-1, [id, xy, y2, xy2]));
    c.push((-1, [id, xy, *y, y2]));
    c
}

/// `cr(beta_3^{x,y}(cycle))`, after checking that `y` is outside the orbit
/// of `x` under the group the cycle lives in.
pub fn cycle_image(ctx: &BlochContext, cycle: &Cycle3, x: ProjPoint, y: ProjPoint) -> Result<PreBlochElem> {
    let f = ctx.field();
    let gens: Vec<SL2Mat> = cycle.iter().flat_map(|(_, g)| g.iter().copied()).collect();
    let group = generate_group(f, &gens);
    if orbit(f, &group, x).contains(&y) {
        return Err(Error::BasepointInOrbit);
    }
    let mut chain = Chain::zero();
    for (k, g) in cycle {
        chain = chain + beta(f, x, y, g)?.scaled(*k);
    }
    cross_ratio_image(f, &chain)
}

/// Image of the generator of `H_3(<t>)` in `P(F_q)` or `RP(F_q)`.
pub fn cyclic_h3_image(ctx: &BlochContext, t: &SL2Mat, x: ProjPoint, y: ProjPoint) -> Result<PreBlochElem> {
    let f = ctx.field();
    let group = generate_group(f, &[*t]);
    if group.len() < 2 {
        return Err(Error::BadArgument("t must have order at least 2".into()));
    }
    if !stabilizer_trivial(f, &group, x) {
        return Err(Error::NontrivialStabilizer);
    }
    cycle_image(ctx, &cyclic_cycle(f, t), x, y)
}

/// Basepoints for a subgroup: `x = oo` if the subgroup meets the upper
/// triangular matrices trivially, else the first point with trivial
/// stabilizer; `y` is the first point outside the orbit of `x` accepted by
/// `extra`.
pub fn choose_basepoints(
    f: &FieldSpec,
    group: &[SL2Mat],
    extra: impl Fn(ProjPoint) -> bool,
) -> Result<(ProjPoint, ProjPoint)> {
    let pts = points(f);
    let x = if stabilizer_trivial(f, group, ProjPoint::Infinity) {
        ProjPoint::Infinity
    } else {
        *pts
            .iter()
            .find(|&&p| stabilizer_trivial(f, group, p))
            .ok_or(Error::NontrivialStabilizer)?
    };
    let orb = orbit(f, group, x);
    let y = *pts
        .iter()
        .find(|&&p| !orb.contains(&p) && extra(p))
        .ok_or(Error::BasepointInOrbit)?;
    Ok((x, y))
}

/// Whether every element of `group` fixing `x` also fixes `y`. The
/// piecewise `beta` is a chain map exactly for such pairs.
pub fn basepoints_compatible(f: &FieldSpec, group: &[SL2Mat], x: ProjPoint, y: ProjPoint) -> bool {
    group.iter().all(|g| moebius_act(f, g, x) != x || moebius_act(f, g, y) == y)
}

/// Basepoints for the quaternion drivers: the first compatible pair
/// (`x = oo` first) with `y` outside the orbit of `x`. For `Q_8` in
/// `SL_2(F_5)` there is none and `(oo, first point outside {0, oo})` is
/// returned.
pub fn quaternion_basepoints(f: &FieldSpec, group: &[SL2Mat]) -> Result<(ProjPoint, ProjPoint)> {
    let pts = points(f);
    for &x in &pts {
        let orb = orbit(f, group, x);
        if let Some(&y) = pts.iter().find(|&&p| !orb.contains(&p) && basepoints_compatible(f, group, x, p)) {
            return Ok((x, y));
        }
    }
    let x = ProjPoint::Infinity;
    let orb = orbit(f, group, x);
    let y = *pts.iter().find(|p| !orb.contains(p)).ok_or(Error::BasepointInOrbit)?;
    Ok((x, y))
}

/// The closed form of the cyclic image at `x = oo`.
pub fn cyclic_closed_form(ctx: &BlochContext, t: &SL2Mat, y: ProjPoint) -> Result<PreBlochElem> {
    let f = ctx.field();
    let group = generate_group(f, &[*t]);
    let r = group.len() as u64;
    if r < 3 {
        return Err(Error::Precondition("the closed form needs r >= 3".into()));
    }
    if !stabilizer_trivial(f, &group, ProjPoint::Infinity) {
        return Err(Error::NontrivialStabilizer);
    }
    if orbit(f, &group, ProjPoint::Infinity).contains(&y) {
        return Err(Error::BasepointInOrbit);
    }
    let ty = moebius_act(f, t, y);
    if ty == y {
        return Err(Error::Precondition("the closed form needs t(y) != y".into()));
    }
    let fin = |p: ProjPoint| p.finite().expect("orbit points other than oo are finite");
    let at = |k: u64| fin(moebius_act(f, &t.pow(f, k), ProjPoint::Infinity));
    let (y, ty) = (fin(y), fin(ty));
    let t1 = at(1);
    let tm1 = at(r - 1);
    let term = |cls: FieldElem, arg: FieldElem| -> Result<PreBlochElem> {
        PreBlochElem::term(f, crate::intlinalg::GroupRingElem::of(f, cls)?, arg)
    };
    let mut out = PreBlochElem::zero();
    for i in 1..=r.saturating_sub(3) {
        let a = f.sub(t1, at(i + 1));
        let b = f.sub(t1, at(i + 2));
        out = &out + &term(a, f.div(a, b)?)?;
    }
    let c1 = f.div(f.mul(f.sub(tm1, y), f.sub(y, t1)), f.sub(tm1, t1))?;
    out = &out + &term(c1, f.div(f.sub(tm1, t1), f.sub(tm1, y))?)?;
    out = &out - &term(f.sub(t1, y), f.div(f.sub(tm1, y), f.sub(t1, y))?)?;
    out = &out + &term(f.sub(y, ty), f.div(f.sub(t1, y), f.sub(t1, ty))?)?;
    let c4 = f.div(f.mul(f.sub(y, ty), f.sub(t1, y)), f.sub(t1, ty))?;
    out = &out + &term(c4, f.div(f.sub(t1, ty), f.sub(t1, y))?)?;
    Ok(out)
}

/// Image of the generator of `H_3(Q_{4s})` for `Q = <X, Y>` with
/// `X^s = Y^2` and `XYX = Y`.
pub fn quaternion_h3_image(
    ctx: &BlochContext,
    x_gen: &SL2Mat,
    y_gen: &SL2Mat,
    s: u64,
    x: ProjPoint,
    y: ProjPoint,
) -> Result<PreBlochElem> {
    let f = ctx.field();
    let y2 = y_gen.mul(f, y_gen);
    let relations = x_gen.pow(f, s) == y2 && x_gen.mul(f, y_gen).mul(f, x_gen) == *y_gen;
    if s < 2 || !relations || generate_group(f, &[*x_gen, *y_gen]).len() as u64 != 4 * s {
        return Err(Error::NotQuaternion);
    }
    cycle_image(ctx, &quaternion_cycle(f, x_gen, y_gen, s), x, y)
}

/// `[[0, 1], [-1, 0]]`.
pub fn w_matrix(f: &FieldSpec) -> SL2Mat {
    SL2Mat { a: f.zero(), b: f.one(), c: f.neg(f.one()), d: f.zero() }
}

/// `[[0, 1], [-1, -1]]`, of order 3.
pub fn order_three(f: &FieldSpec) -> SL2Mat {
    let m1 = f.neg(f.one());
    SL2Mat { a: f.zero(), b: f.one(), c: m1, d: m1 }
}

/// Generators `X = w`, `Y` of a quaternion subgroup of order 8: for
/// `q = 1 mod 4`, `Y = D(i)` with `i` the first square root of `-1`;
/// otherwise the first `Y` in lexicographic order with `Y^2 = -I` and
/// `XYX = Y`.
pub fn quaternion_generators(f: &FieldSpec) -> Result<(SL2Mat, SL2Mat)> {
    if f.p() == 2 {
        return Err(Error::NotQuaternion);
    }
    let x = w_matrix(f);
    let minus_id = SL2Mat::diag(f, f.neg(f.one()))?;
    if f.q() % 4 == 1 {
        let m1 = f.neg(f.one());
        let i = f.elements().into_iter().find(|&z| f.mul(z, z) == m1).expect("-1 is a square");
        return Ok((x, SL2Mat::diag(f, i)?));
    }
    SL2Mat::enumerate(f)
        .into_iter()
        .find(|y| y.mul(f, y) == minus_id && x.mul(f, y).mul(f, &x) == *y)
        .map(|y| (x, y))
        .ok_or(Error::NotQuaternion)
}

/// `mu(a + b theta)`: `[[a, b c], [b, a]]` for `theta^2 = c` and
/// `[[a, b c], [b, a + b]]` for `theta^2 + theta = c`. Defined on norm-one
/// elements, whose images lie in `SL_2`.
pub fn mu(ext: &ExtensionData, z: ExtElem) -> Result<SL2Mat> {
    let f = ext.base();
    let c = ext.constant();
    let m = match ext.relation() {
        ThetaRelation::SquareRoot => SL2Mat { a: z.a, b: f.mul(z.b, c), c: z.b, d: z.a },
        ThetaRelation::ArtinSchreier => SL2Mat { a: z.a, b: f.mul(z.b, c), c: z.b, d: f.add(z.a, z.b) },
    };
    SL2Mat::new(f, m.a, m.b, m.c, m.d)
}

/// `t = mu(theta)` for the element `theta` of order `r` in `F_{q^2}`.
pub fn torus_element(ext: &ExtensionData, r: u64) -> Result<SL2Mat> {
    mu(ext, ext.element_of_order(r)?)
}

fn check_one_mod_four(f: &FieldSpec) -> Result<()> {
    if f.q() % 4 != 1 {
        return Err(Error::WrongCongruence { q: f.q() as u64, required: "q = 1 mod 4" });
    }
    Ok(())
}

/// `sum_{i=1}^{r-3} [(t(oo) - t^{i+1}(oo)) / (t(oo) - t^{i+2}(oo))]` for
/// `t = mu(theta)`, `theta` of order `r = (q+1)/2`.
pub fn theta_sum(ctx: &BlochContext, ext: &ExtensionData) -> Result<PreBlochElem> {
    let f = ctx.field();
    check_one_mod_four(f)?;
    let r = (f.q() as u64 + 1) / 2;
    let t = torus_element(ext, r)?;
    let at = |k: u64| {
        moebius_act(f, &t.pow(f, k), ProjPoint::Infinity)
            .finite()
            .expect("<t> meets the upper triangular matrices trivially")
    };
    let t1 = at(1);
    let mut out = PreBlochElem::zero();
    for i in 1..=r.saturating_sub(3) {
        let x = f.div(f.sub(t1, at(i + 1)), f.sub(t1, at(i + 2)))?;
        out = &out + &PreBlochElem::symbol(f, x)?;
    }
    Ok(out)
}

/// `H_theta = sum_{i=1}^{r-3} [..] + c_F + <a>_sus`, a generator of the
/// cyclic group `P(F_q)` for `q = 1 mod 4`, `a` the nonsquare of `ext`.
pub fn htheta(ctx: &BlochContext, ext: &ExtensionData) -> Result<PreBlochElem> {
    let s = theta_sum(ctx, ext)?;
    let sus = ctx.suslin_element(ext.constant())?;
    Ok(&(&s + &ctx.c()) + &sus)
}

/// `D([x])` for every `x` in `F_q^x`, the unique `m` with `[x] = m gen` in
/// `P(F_q)`, together with the modulus `|P(F_q)|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DilogTable {
    pub modulus: u64,
    one: FieldElem,
    values: BTreeMap<FieldElem, u64>,
}

impl DilogTable {
    /// `D(x)`, with `D(1) = 0`; `None` for `x = 0`.
    pub fn get(&self, x: FieldElem) -> Option<u64> {
        if x == self.one {
            return Some(0);
        }
        self.values.get(&x).copied()
    }

    /// `(x, D(x))` for `x` in `F_q^x \ {1}`, ordered by field index.
    pub fn entries(&self) -> impl Iterator<Item = (FieldElem, u64)> + '_ {
        self.values.iter().map(|(&x, &v)| (x, v))
    }

    /// The first pair `(x, y)` violating the five-term relation modulo
    /// `modulus`, if any.
    pub fn five_term_violation(&self, f: &FieldSpec) -> Option<(FieldElem, FieldElem)> {
        five_term_violation(f, self.modulus, |x| self.get(x).unwrap())
    }
}

/// Checks `L(x) - L(y) + L(y/x) - L((1-x^{-1})/(1-y^{-1})) + L((1-x)/(1-y))
/// = 0 mod m` over all ordered pairs `x != y` outside `{0, 1}`.
pub fn five_term_violation(
    f: &FieldSpec,
    m: u64,
    l: impl Fn(FieldElem) -> u64,
) -> Option<(FieldElem, FieldElem)> {
    let one = f.one();
    let xs: Vec<FieldElem> = f.units().filter(|&x| x != one).collect();
    for &x in &xs {
        for &y in &xs {
            if x == y {
                continue;
            }
            let xi = f.inv(x).unwrap();
            let yi = f.inv(y).unwrap();
            let args = [
                x,
                y,
                f.div(y, x).unwrap(),
                f.div(f.sub(one, xi), f.sub(one, yi)).unwrap(),
                f.div(f.sub(one, x), f.sub(one, y)).unwrap(),
            ];
            let mut s: i128 = 0;
            for (k, a) in args.iter().enumerate() {
                let v = l(*a) as i128;
                s += if k == 1 || k == 3 { -v } else { v };
            }
            if s.rem_euclid(m as i128) != 0 {
                return Some((x, y));
            }
        }
    }
    None
}

/// The discrete dilogarithm with respect to `gen`. Needs a classical
/// context with `P(F_q)` cyclic and `gen` a generator.
pub fn discrete_dilog(ctx: &BlochContext, gen: &PreBlochElem) -> Result<DilogTable> {
    if ctx.mode() != Mode::Classical {
        return Err(Error::Precondition("the dilogarithm lives on the classical group".into()));
    }
    let p = ctx.pre_bloch();
    if !p.is_cyclic() || p.free_rank() != 0 {
        return Err(Error::NotCyclic);
    }
    let n = p.order().expect("finite").to_u64().expect("order fits in u64");
    if ctx.order_in_p(gen)? != n {
        return Err(Error::NotGenerator);
    }
    let f = ctx.field();
    let coord = |e: &PreBlochElem| -> BigInt {
        ctx.coords_p(e).into_iter().next().unwrap_or_else(BigInt::zero)
    };
    let big_n = BigInt::from(n);
    let g = coord(gen);
    let inv = g.extended_gcd(&big_n).x.mod_floor(&big_n);
    let mut values = BTreeMap::new();
    for x in f.units().skip(1) {
        let v = (coord(&ctx.symbol(x)?) * &inv).mod_floor(&big_n);
        values.insert(x, v.to_u64().unwrap());
    }
    Ok(DilogTable { modulus: n, one: f.one(), values })
}

/// `psyl_p H_k(SL_2(F_q), Z)` as computed from fixed spaces.
#[derive(Clone, Debug)]
pub struct PPartReport {
    pub k: u32,
    pub q: u64,
    /// Elementary abelian `p`-group `(Z/p)^dim`.
    pub group: AbGroup,
    pub dim: usize,
    /// For `q = p`: the order predicted by `p`-periodicity of `SL_2(F_p)`,
    /// `p` when `k = -1 mod d(p)` and `1` otherwise.
    pub prime_field_oracle: Option<u64>,
}

/// Rank of a matrix over `F_p`.
fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][c] % p != 0) else { continue };
        rows.swap(rank, piv);
        let inv = mod_inv(rows[rank][c], p);
        for v in rows[rank].iter_mut() {
            *v = *v * inv % p;
        }
        for i in 0..rows.len() {
            if i != rank && rows[i][c] != 0 {
                let k = rows[i][c];
                for j in 0..cols {
                    rows[i][j] = (rows[i][j] + (p - k) * rows[rank][j]) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn mod_inv(a: u64, p: u64) -> u64 {
    let e = (a as i64).extended_gcd(&(p as i64));
    e.x.rem_euclid(p as i64) as u64
}

fn det_mod_p(mut m: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = m.len();
    let mut det = 1u64;
    for c in 0..n {
        let Some(piv) = (c..n).find(|&i| m[i][c] != 0) else { return 0 };
        if piv != c {
            m.swap(piv, c);
            det = (p - det) % p;
        }
        det = det * m[c][c] % p;
        let inv = mod_inv(m[c][c], p);
        for i in c + 1..n {
            let k = m[i][c] * inv % p;
            for j in c..n {
                m[i][j] = (m[i][j] + (p - k) * m[c][j]) % p;
            }
        }
    }
    det
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out.sort();
    out
}

/// Matrix of multiplication by `c` on `F_q` over `F_p` (columns are images
/// of the basis `1, T, .., T^{f-1}`).
fn mult_matrix(f: &FieldSpec, c: FieldElem) -> Vec<Vec<u64>> {
    let n = f.f() as usize;
    let mut m = vec![vec![0u64; n]; n];
    for j in 0..n {
        let mut e = vec![0u32; n];
        e[j] = 1;
        let img = f.coeffs(f.mul(c, f.from_coeffs(&e).unwrap()));
        for i in 0..n {
            m[i][j] = img[i] as u64;
        }
    }
    m
}

/// Dimension of the fixed space of `M` acting on `Lambda^k`.
fn exterior_fixed_dim(m: &[Vec<u64>], k: usize, p: u64) -> usize {
    let n = m.len();
    let basis = subsets(n, k);
    let dim = basis.len();
    if dim == 0 {
        return 0;
    }
    // (Lambda^k M)_{I,J} = det M[I, J]
    let mut rows = vec![vec![0u64; dim]; dim];
    for (a, ri) in basis.iter().enumerate() {
        for (b, cj) in basis.iter().enumerate() {
            let sub: Vec<Vec<u64>> = ri.iter().map(|&i| cj.iter().map(|&j| m[i][j]).collect()).collect();
            let mut v = det_mod_p(sub, p);
            if a == b {
                v = (v + p - 1) % p;
            }
            rows[a][b] = v;
        }
    }
    dim - rank_mod_p(rows, p)
}

/// Dimension of the subspace of `F_q (x) F_q` fixed by both the twist and
/// `M (x) M`.
fn symmetric_fixed_dim(m: &[Vec<u64>], p: u64) -> usize {
    let n = m.len();
    let dim = n * n;
    let idx = |i: usize, j: usize| i * n + j;
    let mut rows = Vec::with_capacity(2 * dim);
    for i in 0..n {
        for j in 0..n {
            // row (i, j) of (M (x) M - I)
            let mut r = vec![0u64; dim];
            for k in 0..n {
                for l in 0..n {
                    r[idx(k, l)] = m[i][k] * m[j][l] % p;
                }
            }
            r[idx(i, j)] = (r[idx(i, j)] + p - 1) % p;
            rows.push(r);
            // row (i, j) of (sigma - I)
            let mut s = vec![0u64; dim];
            s[idx(j, i)] = (s[idx(j, i)] + 1) % p;
            s[idx(i, j)] = (s[idx(i, j)] + p - 1) % p;
            rows.push(s);
        }
    }
    dim - rank_mod_p(rows, p)
}

/// `psyl_p H_k(SL_2(F_q), Z)` for `k = 1, 2, 3` as the invariants of
/// `H_k(F_q, Z)` under multiplication by the squares: `F_q` for `k = 1`,
/// `Lambda^2 F_q` for `k = 2`, `Lambda^3 F_q + (F_q (x) F_q)^sigma` for
/// `k = 3`.
pub fn p_part(f: &FieldSpec, k: u32) -> Result<PPartReport> {
    if !(1..=3).contains(&k) {
        return Err(Error::BadArgument("p-parts are computed for k = 1, 2, 3".into()));
    }
    let p = f.p() as u64;
    let g = f.primitive();
    let m = mult_matrix(f, f.mul(g, g));
    let dim = match k {
        1 => exterior_fixed_dim(&m, 1, p),
        2 => exterior_fixed_dim(&m, 2, p),
        _ => exterior_fixed_dim(&m, 3, p) + symmetric_fixed_dim(&m, p),
    };
    let group = cokernel(&IntMatrix::diagonal(dim, dim, &vec![p as i64; dim]));
    let prime_field_oracle = (f.f() == 1).then(|| {
        let d = if p == 2 { 2 } else { p - 1 };
        if (k as u64 + 1) % d == 0 { p } else { 1 }
    });
    Ok(PPartReport { k, q: f.q() as u64, group, dim, prime_field_oracle })
}

/// Order of `H_k(SL_2(F_q), Z[1/p])` for `k = 1, 2, 3`: `q^2 - 1` in
/// degree 3 and trivial otherwise.
pub fn ell_part_oracle(q: u64, k: u32) -> u64 {
    if k == 3 {
        q * q - 1
    } else {
        1
    }
}
