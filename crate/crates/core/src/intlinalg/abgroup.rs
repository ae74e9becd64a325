//! Finitely generated abelian groups presented as `Z^n / relations`, and
//! subgroups of them cut out by homomorphisms to `Z^t` modulo a modulus
//! vector.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::echelon::{echelon_basis, solve_in_basis, Echelon};
use super::reduce::{reduce, Reduction};
use super::snf::{smith_normal_form, SnfResult};
use super::IntMatrix;
use crate::{Error, Result};

/// A relation as `(generator, coefficient)` pairs; repeated generators add.
pub type SparseRow = Vec<(usize, i64)>;

/// `Z/d_1 + ... + Z/d_s + Z^r`, together with the coordinate map from the
/// presentation generators.
#[derive(Clone, Debug)]
pub struct AbGroup {
    /// Elimination of redundant generators; the remaining work happens in
    /// `Z^m` over the survivors.
    reduction: Reduction,
    /// Echelon basis of the sublattice of `Z^m` that the group is a
    /// quotient of; `None` means all of `Z^m`.
    basis: Option<Vec<Vec<BigInt>>>,
    /// One entry per nontrivial coordinate: the matching column of `V`
    /// (reduced modulo the factor) and the factor, `0` for a free one.
    proj: Vec<(Vec<BigInt>, BigInt)>,
    gens: Vec<Vec<BigInt>>,
    witness: SnfResult,
}

impl AbGroup {
    fn from_presentation(
        reduction: Reduction,
        basis: Option<Vec<Vec<BigInt>>>,
        k: usize,
        relations: &[Vec<BigInt>],
    ) -> Self {
        let m = IntMatrix::from_big_rows(k, relations);
        let witness = smith_normal_form(&m);
        let diag = witness.diagonal();
        let mut proj = Vec::new();
        let mut gens = Vec::new();
        for i in 0..k {
            let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
            if d.is_one() {
                continue;
            }
            let col: Vec<BigInt> = (0..k)
                .map(|j| {
                    let x = witness.v.get(j, i);
                    if d.is_zero() { x } else { x.mod_floor(&d) }
                })
                .collect();
            let local = witness.v_inv.row(i);
            let gen = match &basis {
                None => local,
                Some(b) => {
                    let mut g = vec![BigInt::zero(); reduction.m()];
                    for (c, row) in local.iter().zip(b) {
                        for (gj, bj) in g.iter_mut().zip(row) {
                            *gj += c * bj;
                        }
                    }
                    g
                }
            };
            proj.push((col, d));
            gens.push(reduction.lift(&gen));
        }
        AbGroup { reduction, basis, proj, gens, witness }
    }

    /// Number of presentation generators.
    pub fn ambient_rank(&self) -> usize {
        self.reduction.n
    }

    /// Invariant factors `d_1 | d_2 | ...`, all greater than 1.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.proj.iter().map(|(_, d)| d.clone()).filter(|d| !d.is_zero()).collect()
    }

    /// Invariant factors as machine integers.
    pub fn factors_u64(&self) -> Vec<u64> {
        self.invariant_factors()
            .iter()
            .map(|d| d.to_u64().expect("invariant factor fits in u64"))
            .collect()
    }

    pub fn free_rank(&self) -> usize {
        self.proj.iter().filter(|(_, d)| d.is_zero()).count()
    }

    /// Order of the group, or `None` if it is infinite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank() == 0).then(|| self.invariant_factors().iter().product())
    }

    pub fn is_trivial(&self) -> bool {
        self.proj.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.proj.len() <= 1
    }

    /// The Smith form the group structure was read off. For presentations
    /// with redundant generators or relations this is the Smith form of
    /// the reduced presentation, not of the original relation matrix.
    pub fn witness(&self) -> &SnfResult {
        &self.witness
    }

    /// Vectors in `Z^ambient` mapping to the canonical generators, one per
    /// coordinate.
    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.gens
    }

    /// Canonical coordinates of the class of `v`: residues modulo each
    /// invariant factor, then the free coordinates.
    pub fn to_coords(&self, v: &[i64]) -> Result<Vec<BigInt>> {
        let big: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        self.to_coords_big(&big)
    }

    pub fn to_coords_big(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.reduction.n {
            return Err(Error::BadArgument(format!(
                "vector of length {} for a group on {} generators",
                v.len(),
                self.reduction.n
            )));
        }
        let w = self.reduction.apply(v);
        let local = match &self.basis {
            None => w,
            Some(b) => solve_in_basis(b, &w).ok_or(Error::NotInSubgroup)?,
        };
        Ok(self
            .proj
            .iter()
            .map(|(col, d)| {
                let s: BigInt = local
                    .iter()
                    .zip(col)
                    .filter(|(x, _)| !x.is_zero())
                    .map(|(x, c)| x * c)
                    .sum();
                if d.is_zero() { s } else { s.mod_floor(d) }
            })
            .collect())
    }

    pub fn is_zero(&self, v: &[i64]) -> Result<bool> {
        Ok(self.to_coords(v)?.iter().all(Zero::is_zero))
    }

    /// Least `n >= 1` with `n v = 0`.
    pub fn element_order(&self, v: &[i64]) -> Result<u64> {
        let c = self.to_coords(v)?;
        let mut n = BigInt::one();
        for (x, (_, d)) in c.iter().zip(&self.proj) {
            if d.is_zero() {
                if !x.is_zero() {
                    return Err(Error::InfiniteOrder);
                }
                continue;
            }
            n = n.lcm(&(d / x.gcd(d)));
        }
        Ok(n.to_u64().expect("element order fits in u64"))
    }
}

/// `Z^cols / rowspace(M)`. When `M` has more rows than columns the
/// presentation is reduced first (see [`cokernel_sparse`]).
pub fn cokernel(m: &IntMatrix) -> AbGroup {
    let cols = m.cols();
    if m.rows() <= cols {
        let rows: Vec<Vec<BigInt>> = (0..m.rows()).map(|i| m.row(i)).collect();
        return AbGroup::from_presentation(Reduction::identity(cols), None, cols, &rows);
    }
    match dense_to_sparse(m) {
        Some(rows) => cokernel_sparse(cols, rows.into_iter()),
        None => {
            let mut e = Echelon::<BigInt>::new(cols);
            for i in 0..m.rows() {
                e.insert(m.row(i)).unwrap();
            }
            AbGroup::from_presentation(Reduction::identity(cols), None, cols, e.rows())
        }
    }
}

fn dense_to_sparse(m: &IntMatrix) -> Option<Vec<SparseRow>> {
    (0..m.rows())
        .map(|i| {
            let r = m.row_i64(i)?;
            Some(r.into_iter().enumerate().filter(|&(_, c)| c != 0).collect())
        })
        .collect()
}

/// A relation lattice after eliminating redundant generators: the
/// reduction to `Z^m` and an echelon basis of the image of the relations.
#[derive(Clone, Debug)]
pub(crate) struct ReducedLattice {
    reduction: Reduction,
    basis: Vec<Vec<BigInt>>,
}

impl ReducedLattice {
    pub fn new<I>(cols: usize, rows: I) -> Self
    where
        I: Iterator<Item = SparseRow>,
    {
        let (reduction, dense) = reduce(cols, rows);
        let m = reduction.m();
        let sparse = dense.into_iter().map(|r| {
            r.into_iter().enumerate().filter(|&(_, c)| c != 0).collect::<SparseRow>()
        });
        let basis = echelon_basis(m, sparse.collect::<Vec<_>>().into_iter());
        ReducedLattice { reduction, basis }
    }

    pub fn cokernel(&self) -> AbGroup {
        let m = self.reduction.m();
        AbGroup::from_presentation(self.reduction.clone(), None, m, &self.basis)
    }

    /// Kernel of `phi` (one row per original generator) on the quotient;
    /// the caller has checked that `phi` vanishes on the relations.
    pub fn kernel(&self, phi: &IntMatrix, moduli: &[u64]) -> Result<AbGroup> {
        validate(self.reduction.n, phi, moduli)?;
        // a well-defined map is determined by its values on the survivors
        let rows: Vec<Vec<BigInt>> = self.reduction.survivors.iter().map(|&g| phi.row(g)).collect();
        let phi_red = IntMatrix::from_big_rows(phi.cols(), &rows);
        let b = preimage_lattice(&phi_red, moduli);
        let coeffs: Vec<Vec<BigInt>> = self
            .basis
            .iter()
            .map(|r| solve_in_basis(&b, r).expect("relations lie in the kernel lattice"))
            .collect();
        let k = b.len();
        Ok(AbGroup::from_presentation(self.reduction.clone(), Some(b), k, &coeffs))
    }
}

/// `Z^cols / span(rows)` for sparse relations. Generators that some
/// relation expresses in terms of the others are eliminated and the
/// remaining relations are reduced to an echelon basis, so the Smith form
/// witness refers to that smaller presentation.
pub fn cokernel_sparse<I>(cols: usize, rows: I) -> AbGroup
where
    I: Iterator<Item = SparseRow>,
{
    ReducedLattice::new(cols, rows).cokernel()
}

fn check_images(
    rows: impl Iterator<Item = (usize, Vec<(usize, BigInt)>)>,
    phi: &IntMatrix,
    moduli: &[u64],
) -> Result<()> {
    for (idx, row) in rows {
        for (t, &m) in moduli.iter().enumerate() {
            let s: BigInt = row.iter().map(|(g, c)| c * phi.get(*g, t)).sum();
            let bad = if m == 0 { !s.is_zero() } else { !s.mod_floor(&BigInt::from(m)).is_zero() };
            if bad {
                return Err(Error::NotWellDefined { row: idx });
            }
        }
    }
    Ok(())
}

/// Echelon basis of `{x in Z^n : x * phi = 0 mod moduli}`.
fn preimage_lattice(phi: &IntMatrix, moduli: &[u64]) -> Vec<Vec<BigInt>> {
    let (n, t) = (phi.rows(), phi.cols());
    let mut a = IntMatrix::zeros(n + t, t);
    for i in 0..n {
        for j in 0..t {
            a.set(i, j, phi.get(i, j));
        }
    }
    for (j, &m) in moduli.iter().enumerate() {
        a.set(n + j, j, m);
    }
    // rows of U past the rank span the left kernel of a
    let s = smith_normal_form(&a);
    let mut e = Echelon::<BigInt>::new(n);
    for i in s.rank..n + t {
        let r: Vec<BigInt> = (0..n).map(|j| s.u.get(i, j)).collect();
        e.insert(r).unwrap();
    }
    let mut b = e.rows().to_vec();
    b.sort_by_key(|r| r.iter().position(|x| !x.is_zero()));
    b
}

fn validate(n: usize, phi: &IntMatrix, moduli: &[u64]) -> Result<()> {
    if phi.rows() != n || phi.cols() != moduli.len() {
        return Err(Error::BadArgument("map has the wrong shape".into()));
    }
    Ok(())
}

/// The kernel of the homomorphism `Z^n / rowspace(M) -> prod Z/moduli_j`
/// given by `phi` (row `i` is the image of generator `i`; modulus `0`
/// means a free target coordinate). Coordinates of the result are taken
/// with respect to the same `n` generators.
pub fn kernel_subgroup(m: &IntMatrix, phi: &IntMatrix, moduli: &[u64]) -> Result<AbGroup> {
    let n = m.cols();
    validate(n, phi, moduli)?;
    let rows = (0..m.rows()).map(|i| {
        (i, m.row(i).into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect())
    });
    check_images(rows, phi, moduli)?;
    match dense_to_sparse(m) {
        Some(rows) => ReducedLattice::new(n, rows.into_iter()).kernel(phi, moduli),
        None => {
            let mut e = Echelon::<BigInt>::new(n);
            for i in 0..m.rows() {
                e.insert(m.row(i)).unwrap();
            }
            let lattice = ReducedLattice { reduction: Reduction::identity(n), basis: e.rows().to_vec() };
            lattice.kernel(phi, moduli)
        }
    }
}

/// Sparse-relation version of [`kernel_subgroup`].
pub fn kernel_subgroup_sparse<I>(cols: usize, rows: I, phi: &IntMatrix, moduli: &[u64]) -> Result<AbGroup>
where
    I: Iterator<Item = SparseRow> + Clone,
{
    validate(cols, phi, moduli)?;
    let big = rows
        .clone()
        .enumerate()
        .map(|(i, r)| (i, r.into_iter().map(|(g, c)| (g, BigInt::from(c))).collect()));
    check_images(big, phi, moduli)?;
    ReducedLattice::new(cols, rows).kernel(phi, moduli)
}

impl AbGroup {
    /// Whether the two groups are isomorphic.
    pub fn same_structure(&self, other: &AbGroup) -> bool {
        self.invariant_factors() == other.invariant_factors() && self.free_rank() == other.free_rank()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn big(v: &[u64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn basic_cokernels() {
        let g = cokernel(&IntMatrix::from_rows(1, &[vec![2]]));
        assert_eq!(g.invariant_factors(), big(&[2]));
        let g = cokernel(&IntMatrix::zeros(0, 3));
        assert_eq!((g.free_rank(), g.order()), (3, None));
        let g = cokernel(&IntMatrix::from_rows(2, &[vec![1, -1], vec![0, 3]]));
        assert_eq!(g.invariant_factors(), big(&[3]));
        assert_eq!(g.element_order(&[1, 0]).unwrap(), 3);
        assert_eq!(g.to_coords(&[1, 0]).unwrap(), g.to_coords(&[0, 1]).unwrap());
    }

    #[test]
    fn element_orders() {
        let g = cokernel(&IntMatrix::from_rows(1, &[vec![12]]));
        assert_eq!(g.element_order(&[0]).unwrap(), 1);
        assert_eq!(g.element_order(&[1]).unwrap(), 12);
        assert_eq!(g.element_order(&[4]).unwrap(), 3);
        let h = cokernel(&IntMatrix::from_rows(2, &[vec![12, 0]]));
        assert_eq!(h.element_order(&[0, 1]), Err(Error::InfiniteOrder));
        assert_eq!(h.element_order(&[6, 0]).unwrap(), 2);
        assert!(matches!(h.element_order(&[1]), Err(Error::BadArgument(_))));
    }

    #[test]
    fn generators_have_unit_coordinates() {
        let m = IntMatrix::from_rows(3, &[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let g = cokernel(&m);
        for (i, gen) in g.generators().iter().enumerate() {
            let c = g.to_coords_big(gen).unwrap();
            for (j, x) in c.iter().enumerate() {
                assert_eq!(*x, BigInt::from((i == j) as u8));
            }
        }
    }

    #[test]
    fn many_redundant_rows_are_compressed() {
        let rows: Vec<Vec<i64>> = (1..40).map(|k| vec![k, 2 * k + 1]).collect();
        let g = cokernel(&IntMatrix::from_rows(2, &rows));
        assert!(g.is_trivial());
        let sparse = rows.iter().map(|r| vec![(0, r[0]), (1, r[1])]);
        assert!(cokernel_sparse(2, sparse).is_trivial());
    }

    #[test]
    fn kernels() {
        let m = IntMatrix::from_rows(1, &[vec![6]]);
        let zero = IntMatrix::zeros(1, 1);
        let k = kernel_subgroup(&m, &zero, &[2]).unwrap();
        assert_eq!(k.invariant_factors(), big(&[6]));
        let red = IntMatrix::from_rows(1, &[vec![1]]);
        let k = kernel_subgroup(&m, &red, &[2]).unwrap();
        assert_eq!(k.invariant_factors(), big(&[3]));
        assert_eq!(k.to_coords(&[1]), Err(Error::NotInSubgroup));
        assert_eq!(k.element_order(&[2]).unwrap(), 3);
        // reduction mod 4 does not vanish on the relation 6
        assert_eq!(kernel_subgroup(&m, &red, &[4]).unwrap_err(), Error::NotWellDefined { row: 0 });
    }

    #[test]
    fn kernel_with_free_target() {
        // Z^2 / <(2, -2)>, map (a, b) -> a + b to Z
        let m = IntMatrix::from_rows(2, &[vec![2, -2]]);
        let phi = IntMatrix::from_rows(1, &[vec![1], vec![1]]);
        let k = kernel_subgroup(&m, &phi, &[0]).unwrap();
        assert_eq!(k.invariant_factors(), big(&[2]));
        assert_eq!(k.free_rank(), 0);
        assert_eq!(k.element_order(&[1, -1]).unwrap(), 2);
        let sparse = vec![vec![(0, 2), (1, -2)]];
        let ks = kernel_subgroup_sparse(2, sparse.into_iter(), &phi, &[0]).unwrap();
        assert!(ks.same_structure(&k));
    }

    /// Brute-force order of `Z^n / L` for a full-rank 4x4 `L` with small
    /// entries: the number of residues of the box `[0, |det|)^n` modulo the
    /// lattice equals `|det|`, and here it is counted through the group
    /// generated by the images of the unit vectors.
    fn brute_order(g: &AbGroup, n: usize) -> usize {
        let mut seen = std::collections::HashSet::new();
        let mut frontier = vec![vec![BigInt::zero(); g.proj.len()]];
        seen.insert(frontier[0].clone());
        while let Some(c) = frontier.pop() {
            for i in 0..n {
                let mut e = vec![0i64; n];
                e[i] = 1;
                let step = g.to_coords(&e).unwrap();
                let next: Vec<BigInt> = c
                    .iter()
                    .zip(&step)
                    .zip(&g.proj)
                    .map(|((a, b), (_, d))| (a + b).mod_floor(d))
                    .collect();
                if seen.insert(next.clone()) {
                    frontier.push(next);
                }
            }
        }
        seen.len()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn order_is_determinant(entries in proptest::collection::vec(-3i64..=3, 16)) {
            let rows: Vec<Vec<i64>> = entries.chunks(4).map(|c| c.to_vec()).collect();
            let m = IntMatrix::from_rows(4, &rows);
            let det = m.det();
            prop_assume!(!det.is_zero());
            let g = cokernel(&m);
            prop_assert_eq!(g.order().unwrap(), det.abs());
            prop_assert_eq!(BigInt::from(brute_order(&g, 4)), det.abs());
        }

        #[test]
        fn coordinates_are_additive(
            entries in proptest::collection::vec(-3i64..=3, 12),
            v in proptest::collection::vec(-20i64..=20, 4),
            w in proptest::collection::vec(-20i64..=20, 4),
        ) {
            let rows: Vec<Vec<i64>> = entries.chunks(4).map(|c| c.to_vec()).collect();
            let g = cokernel(&IntMatrix::from_rows(4, &rows));
            let sum: Vec<i64> = v.iter().zip(&w).map(|(a, b)| a + b).collect();
            let (cv, cw, cs) = (g.to_coords(&v).unwrap(), g.to_coords(&w).unwrap(), g.to_coords(&sum).unwrap());
            for (i, (_, d)) in g.proj.iter().enumerate() {
                let lhs = &cv[i] + &cw[i];
                let lhs = if d.is_zero() { lhs } else { lhs.mod_floor(d) };
                prop_assert_eq!(&lhs, &cs[i]);
            }
            for r in &rows {
                prop_assert!(g.is_zero(r).unwrap());
            }
        }
    }
}
