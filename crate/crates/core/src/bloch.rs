//! Pre-Bloch and Bloch groups of a finite field, classical and refined.
//!
//! `P(F_q)` is presented on the generators `[x]`, `x in F^x \ {1}`, by the
//! five-term relations
//!
//! ```text
//! S(x,y) = [x] - [y] + [y/x] - [(1-x^-1)/(1-y^-1)] + [(1-x)/(1-y)]
//! ```
//!
//! for all `x != y` in `F \ {0, 1}`. The refined group `RP(F_q)` uses the same
//! generators as a module over `R_F = Z[F^x/(F^x)^2]`, with the relation
//! `[x] - [y] + <x>[y/x] - <x^-1 - 1>[(1-x^-1)/(1-y^-1)] + <1-x>[(1-x)/(1-y)]`.
//! As a `Z`-module it has generators `[x]` and `<u>[x]` and relations `S`,
//! `<u>S`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;

use crate::ffield::{FieldElem, FieldSpec};
use crate::intlinalg::{cokernel, AbGroup, GroupRingElem, IntMatrix, ReducedLattice, SparseRow};
use crate::projline::RefinedTerm;
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Mode {
    Classical,
    Refined,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Classical => "classical",
            Mode::Refined => "refined",
        })
    }
}

/// A formal combination `sum c_x [x]` with coefficients in `R_F`. The
/// symbol `[1]` is zero, and zero coefficients are dropped.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct PreBlochElem {
    terms: BTreeMap<FieldElem, GroupRingElem>,
}

impl PreBlochElem {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `[x]`; zero when `x = 1`.
    pub fn symbol(f: &FieldSpec, x: FieldElem) -> Result<Self> {
        Self::term(f, GroupRingElem::ONE, x)
    }

    /// `c [x]`.
    pub fn term(f: &FieldSpec, c: GroupRingElem, x: FieldElem) -> Result<Self> {
        if x.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let mut e = Self::zero();
        if x != f.one() {
            e.add_term(c, x);
        }
        Ok(e)
    }

    /// `<cls>[arg]`.
    pub fn from_refined(f: &FieldSpec, t: RefinedTerm) -> Result<Self> {
        Self::term(f, GroupRingElem::class(t.cls), t.arg)
    }

    fn add_term(&mut self, c: GroupRingElem, x: FieldElem) {
        let e = self.terms.entry(x).or_default();
        *e = *e + c;
        if e.is_zero() {
            self.terms.remove(&x);
        }
    }

    pub fn is_formally_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (FieldElem, GroupRingElem)> + '_ {
        self.terms.iter().map(|(&x, &c)| (x, c))
    }

    pub fn scale(&self, k: i64) -> Self {
        self.mul_ring(GroupRingElem::new(k, 0))
    }

    /// Multiplication by a group ring element.
    pub fn mul_ring(&self, r: GroupRingElem) -> Self {
        let mut out = Self::zero();
        for (x, c) in self.terms() {
            out.add_term(c * r, x);
        }
        out
    }

    /// Collapses every coefficient through the augmentation.
    pub fn classical(&self) -> Self {
        let mut out = Self::zero();
        for (x, c) in self.terms() {
            out.add_term(GroupRingElem::new(c.aug(), 0), x);
        }
        out
    }

    pub fn format(&self, f: &FieldSpec) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(x, c)| {
                let coeff = match (c.c0, c.c1) {
                    (1, 0) => String::new(),
                    (k, 0) => format!("{k}"),
                    (0, 1) => "<u>".into(),
                    (0, k) => format!("{k}<u>"),
                    (a, b) => format!("({a}+{b}<u>)"),
                };
                format!("{coeff}[{}]", f.format(x))
            })
            .collect();
        parts.join(" + ")
    }
}

impl Add for &PreBlochElem {
    type Output = PreBlochElem;
    fn add(self, o: &PreBlochElem) -> PreBlochElem {
        let mut out = self.clone();
        for (x, c) in o.terms() {
            out.add_term(c, x);
        }
        out
    }
}

impl Sub for &PreBlochElem {
    type Output = PreBlochElem;
    fn sub(self, o: &PreBlochElem) -> PreBlochElem {
        self + &(-o)
    }
}

impl Neg for &PreBlochElem {
    type Output = PreBlochElem;
    fn neg(self) -> PreBlochElem {
        self.scale(-1)
    }
}

/// The five-term combination `S(x, y)` with its square-class coefficients.
/// In classical use the coefficients are folded by augmentation.
pub fn five_term(f: &FieldSpec, x: FieldElem, y: FieldElem) -> Result<PreBlochElem> {
    let (zero, one) = (f.zero(), f.one());
    if [x, y].iter().any(|&v| v == zero || v == one) || x == y {
        return Err(Error::BadArgument("five-term relation needs distinct x, y outside {0, 1}".into()));
    }
    let xi = f.inv(x)?;
    let yi = f.inv(y)?;
    let a = f.div(y, x)?;
    let b = f.div(f.sub(one, xi), f.sub(one, yi))?;
    let c = f.div(f.sub(one, x), f.sub(one, y))?;
    let gr = |v: FieldElem| GroupRingElem::of(f, v);
    let mut e = PreBlochElem::symbol(f, x)?;
    e = &e - &PreBlochElem::symbol(f, y)?;
    e = &e + &PreBlochElem::term(f, gr(x)?, a)?;
    e = &e - &PreBlochElem::term(f, gr(f.sub(xi, one))?, b)?;
    e = &e + &PreBlochElem::term(f, gr(f.sub(one, x))?, c)?;
    Ok(e)
}

/// A presentation of `P(F_q)` or `RP(F_q)` together with the Bloch-Wigner
/// data and the resulting Bloch group.
#[derive(Clone, Debug)]
pub struct BlochContext {
    field: FieldSpec,
    mode: Mode,
    /// Whether columns for `<u>[x]` are present (refined mode, odd `p`).
    doubled: bool,
    gens: Vec<FieldElem>,
    relations: Vec<SparseRow>,
    lambda: IntMatrix,
    moduli: Vec<u64>,
    p_group: AbGroup,
    b_group: AbGroup,
}

impl BlochContext {
    pub fn new(field: &FieldSpec, mode: Mode) -> Result<Self> {
        let q = field.q() as u64;
        if q < 4 {
            return Err(Error::FieldTooSmall(q));
        }
        let f = field.clone();
        let doubled = mode == Mode::Refined && f.p() != 2;
        let gens: Vec<FieldElem> = f.units().skip(1).collect();
        let n = gens.len();
        let cols = if doubled { 2 * n } else { n };

        let mut ctx = BlochContext {
            field: f,
            mode,
            doubled,
            gens,
            relations: Vec::new(),
            lambda: IntMatrix::zeros(cols, 0),
            moduli: Vec::new(),
            p_group: cokernel(&IntMatrix::zeros(0, 0)),
            b_group: cokernel(&IntMatrix::zeros(0, 0)),
        };

        let f = &ctx.field;
        let mut relations = Vec::with_capacity(ctx.relation_count() * if doubled { 2 } else { 1 });
        for &x in &ctx.gens {
            for &y in &ctx.gens {
                if x == y {
                    continue;
                }
                let s = five_term(f, x, y)?;
                relations.push(ctx.sparse(&s));
                if doubled {
                    relations.push(ctx.sparse(&s.mul_ring(GroupRingElem::new(0, 1))));
                }
            }
        }

        let (lambda, moduli) = ctx.lambda_matrix();
        ctx.relations = relations;
        ctx.lambda = lambda;
        ctx.moduli = moduli;
        ctx.check_relations()?;
        let lattice = ReducedLattice::new(cols, ctx.relations.iter().cloned());
        ctx.p_group = lattice.cokernel();
        ctx.b_group = lattice.kernel(&ctx.lambda, &ctx.moduli)?;
        Ok(ctx)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Generators `g, g^2, ..., g^{q-2}` in discrete-log order.
    pub fn gens(&self) -> &[FieldElem] {
        &self.gens
    }

    /// Number of integer columns of the presentation.
    pub fn columns(&self) -> usize {
        if self.doubled {
            2 * self.gens.len()
        } else {
            self.gens.len()
        }
    }

    /// `(q-2)(q-3)`, the number of five-term relations.
    pub fn relation_count(&self) -> usize {
        let n = self.gens.len();
        n * n.saturating_sub(1)
    }

    /// The pre-Bloch group `P(F_q)` or `RP(F_q)`.
    pub fn pre_bloch(&self) -> &AbGroup {
        &self.p_group
    }

    /// The Bloch group: the kernel of `lambda` (classical) or of
    /// `Lambda = (lambda_1, lambda_2)` (refined).
    pub fn bloch(&self) -> &AbGroup {
        &self.b_group
    }

    /// Relation rows in sparse form, one per `S(x, y)` (followed by
    /// `<u>S(x, y)` in refined mode).
    pub fn relation_rows(&self) -> &[SparseRow] {
        &self.relations
    }

    /// The relation matrix, densely.
    pub fn relation_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.relations.len(), self.columns());
        for (i, r) in self.relations.iter().enumerate() {
            let mut dense = vec![0i64; self.columns()];
            for &(j, c) in r {
                dense[j] += c;
            }
            for (j, c) in dense.into_iter().enumerate() {
                if c != 0 {
                    m.set(i, j, c);
                }
            }
        }
        m
    }

    /// Images of the generators under the Bloch-Wigner map: one row per
    /// column, target coordinates `(lambda_1, lambda_2)` in refined mode and
    /// `lambda` in classical mode, with `moduli` giving the target.
    pub fn lambda_data(&self) -> (&IntMatrix, &[u64]) {
        (&self.lambda, &self.moduli)
    }

    fn index(&self, x: FieldElem) -> usize {
        self.field.discrete_log(x).expect("generator is nonzero") as usize - 1
    }

    fn sparse(&self, e: &PreBlochElem) -> SparseRow {
        let n = self.gens.len();
        let mut out = Vec::new();
        for (x, c) in e.terms() {
            let i = self.index(x);
            if self.doubled {
                if c.c0 != 0 {
                    out.push((i, c.c0));
                }
                if c.c1 != 0 {
                    out.push((i + n, c.c1));
                }
            } else if c.aug() != 0 {
                out.push((i, c.aug()));
            }
        }
        out
    }

    /// Integer coordinates of `e` on the presentation generators.
    pub fn vector(&self, e: &PreBlochElem) -> Vec<i64> {
        let mut v = vec![0i64; self.columns()];
        for (j, c) in self.sparse(e) {
            v[j] += c;
        }
        v
    }

    /// The element with the given coordinates on the presentation
    /// generators.
    pub fn element(&self, v: &[BigInt]) -> PreBlochElem {
        let n = self.gens.len();
        let mut e = PreBlochElem::zero();
        for (j, c) in v.iter().enumerate() {
            let c = i64::try_from(c).expect("coefficient fits in i64");
            if c == 0 {
                continue;
            }
            let (x, coeff) = if j < n {
                (self.gens[j], GroupRingElem::new(c, 0))
            } else {
                (self.gens[j - n], GroupRingElem::new(0, c))
            };
            e.add_term(coeff, x);
        }
        e
    }

    pub fn symbol(&self, x: FieldElem) -> Result<PreBlochElem> {
        PreBlochElem::symbol(&self.field, x)
    }

    /// `lambda_1` as the coordinate `k` with image `k <<u>>^2` in `I_F^2`;
    /// always `0` in characteristic 2.
    pub fn lambda1(&self, e: &PreBlochElem) -> i64 {
        let f = &self.field;
        if f.p() == 2 {
            return 0;
        }
        let basis = GroupRingElem::new(2, -2);
        let mut total = GroupRingElem::ZERO;
        for (x, c) in e.terms() {
            let a = GroupRingElem::pfister(f, f.sub(f.one(), x)).unwrap();
            let b = GroupRingElem::pfister(f, x).unwrap();
            total = total + c * a * b;
        }
        debug_assert_eq!(total.aug(), 0);
        debug_assert_eq!(total.c0 % 2, 0);
        let k = total.c0 / 2;
        debug_assert_eq!(basis.scale(k), total);
        k
    }

    /// `lambda_2 = lambda`: `[x] -> dlog(1-x) dlog(x) mod 2`, extended after
    /// collapsing coefficients by augmentation; always `0` in
    /// characteristic 2.
    pub fn lambda2(&self, e: &PreBlochElem) -> u8 {
        let f = &self.field;
        if f.p() == 2 {
            return 0;
        }
        let mut s = 0i64;
        for (x, c) in e.terms() {
            let a = f.discrete_log(f.sub(f.one(), x)).unwrap() as i64;
            let b = f.discrete_log(x).unwrap() as i64;
            s += c.aug() * (a * b % 2);
        }
        s.rem_euclid(2) as u8
    }

    fn lambda_matrix(&self) -> (IntMatrix, Vec<u64>) {
        let f = &self.field;
        let n = self.gens.len();
        if f.p() == 2 {
            return (IntMatrix::zeros(self.columns(), 0), Vec::new());
        }
        let mut rows = Vec::with_capacity(self.columns());
        for j in 0..self.columns() {
            let (x, c) = if j < n {
                (self.gens[j], GroupRingElem::ONE)
            } else {
                (self.gens[j - n], GroupRingElem::new(0, 1))
            };
            let e = PreBlochElem::term(f, c, x).unwrap();
            let l2 = self.lambda2(&e) as i64;
            if self.doubled {
                rows.push(vec![self.lambda1(&e), l2]);
            } else {
                rows.push(vec![l2]);
            }
        }
        if self.doubled {
            (IntMatrix::from_rows(2, &rows), vec![0, 2])
        } else {
            (IntMatrix::from_rows(1, &rows), vec![2])
        }
    }

    /// Checks that the Bloch-Wigner data kill every relation row.
    fn check_relations(&self) -> Result<()> {
        let t = self.moduli.len();
        for (idx, r) in self.relations.iter().enumerate() {
            for k in 0..t {
                let s: i64 = r.iter().map(|&(j, c)| c * self.lambda.get_i64(j, k).unwrap()).sum();
                let m = self.moduli[k] as i64;
                if (m == 0 && s != 0) || (m != 0 && s.rem_euclid(m) != 0) {
                    return Err(Error::NotWellDefined { row: idx });
                }
            }
        }
        Ok(())
    }

    /// Index of relation `S(x, y)` among the relation rows.
    pub fn relation_row_of(&self, x: FieldElem, y: FieldElem) -> Option<usize> {
        if x == y || x.is_zero() || y.is_zero() || x == self.field.one() || y == self.field.one() {
            return None;
        }
        let n = self.gens.len();
        let (i, j) = (self.index(x), self.index(y));
        let k = i * (n - 1) + if j > i { j - 1 } else { j };
        Some(if self.doubled { 2 * k } else { k })
    }

    /// The cokernel of `Lambda` onto `I_F^2 = RS^2(F_q)`, computed from the
    /// `lambda_1` values of all generators. In characteristic 2 the target
    /// is zero.
    pub fn coker_lambda(&self) -> AbGroup {
        let f = &self.field;
        if f.p() == 2 {
            return crate::intlinalg::cokernel(&IntMatrix::zeros(0, 0));
        }
        let rows: Vec<Vec<i64>> = self
            .gens
            .iter()
            .map(|&x| vec![self.lambda1(&PreBlochElem::symbol(f, x).unwrap())])
            .collect();
        crate::intlinalg::cokernel(&IntMatrix::from_rows(1, &rows))
    }

    /// `<x>_sus = [x] + [x^-1]`. Allowed for `x = 1` (where it is `0`) so
    /// that `<-1>` makes sense in characteristic 2.
    pub fn suslin_element(&self, x: FieldElem) -> Result<PreBlochElem> {
        let f = &self.field;
        if x.is_zero() {
            return Err(Error::BadArgument("suslin element of 0".into()));
        }
        Ok(&f_sym(f, x)? + &f_sym(f, f.inv(x)?)?)
    }

    /// `c_F = [x] + [1 - x]` for `x` outside `{0, 1}`.
    pub fn constant_c(&self, x: FieldElem) -> Result<PreBlochElem> {
        let f = &self.field;
        if x.is_zero() || x == f.one() {
            return Err(Error::BadArgument("c_F needs x outside {0, 1}".into()));
        }
        Ok(&f_sym(f, x)? + &f_sym(f, f.sub(f.one(), x))?)
    }

    /// `c_F` built from the first generator `g`.
    pub fn c(&self) -> PreBlochElem {
        self.constant_c(self.gens[0]).unwrap()
    }

    /// `-1` in the field.
    pub fn minus_one(&self) -> FieldElem {
        self.field.neg(self.field.one())
    }

    pub fn coords_p(&self, e: &PreBlochElem) -> Vec<BigInt> {
        self.p_group.to_coords(&self.vector(e)).unwrap()
    }

    pub fn is_zero_in_p(&self, e: &PreBlochElem) -> bool {
        self.p_group.is_zero(&self.vector(e)).unwrap()
    }

    pub fn equal_in_p(&self, a: &PreBlochElem, b: &PreBlochElem) -> bool {
        self.is_zero_in_p(&(a - b))
    }

    pub fn order_in_p(&self, e: &PreBlochElem) -> Result<u64> {
        self.p_group.element_order(&self.vector(e))
    }

    /// Order in the Bloch group; `NotInSubgroup` if `Lambda(e) != 0`.
    pub fn order_in_b(&self, e: &PreBlochElem) -> Result<u64> {
        self.b_group.element_order(&self.vector(e))
    }

    pub fn in_bloch(&self, e: &PreBlochElem) -> bool {
        self.b_group.to_coords(&self.vector(e)).is_ok()
    }

    /// The `<u>` action on presentation vectors (refined, odd `p`): swaps the
    /// `[x]` and `<u>[x]` blocks.
    pub fn twist_vector(&self, v: &[i64]) -> Vec<i64> {
        if !self.doubled {
            return v.to_vec();
        }
        let n = self.gens.len();
        let mut out = v[n..].to_vec();
        out.extend_from_slice(&v[..n]);
        out
    }
}

fn f_sym(f: &FieldSpec, x: FieldElem) -> Result<PreBlochElem> {
    PreBlochElem::symbol(f, x)
}
