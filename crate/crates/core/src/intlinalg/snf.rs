//! Smith normal form with transformation matrices.

use num_bigint::BigInt;

use super::scalar::Scalar;
use super::{mat_mul, IntMatrix};

/// `U * M * V = D` with `U`, `V` unimodular and `D` diagonal, nonnegative,
/// each nonzero diagonal entry dividing the next, zeros last. `v_inv` is
/// `V^{-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl SnfResult {
    /// The diagonal of `D`, length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d.get(i, i)).collect()
    }
}

struct Work<T> {
    a: Vec<Vec<T>>,
    u: Vec<Vec<T>>,
    v: Vec<Vec<T>>,
    v_inv: Vec<Vec<T>>,
}

fn identity<T: Scalar>(n: usize) -> Vec<Vec<T>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect()
}

/// `rows[i] -= k * rows[j]`.
fn row_sub<T: Scalar>(m: &mut [Vec<T>], i: usize, j: usize, k: &T) -> Option<()> {
    for c in 0..m[i].len() {
        if !m[j][c].is_zero() {
            m[i][c] = m[i][c].sub_mul(k, &m[j][c])?;
        }
    }
    Some(())
}

/// `rows[i] += rows[j]`.
fn row_add<T: Scalar>(m: &mut [Vec<T>], i: usize, j: usize) -> Option<()> {
    for c in 0..m[i].len() {
        if !m[j][c].is_zero() {
            m[i][c] = m[i][c].add(&m[j][c])?;
        }
    }
    Some(())
}

/// `cols[i] -= k * cols[j]`.
fn col_sub<T: Scalar>(m: &mut [Vec<T>], i: usize, j: usize, k: &T) -> Option<()> {
    for r in m.iter_mut() {
        if !r[j].is_zero() {
            r[i] = r[i].sub_mul(k, &r[j])?;
        }
    }
    Some(())
}

fn swap_cols<T>(m: &mut [Vec<T>], i: usize, j: usize) {
    for r in m.iter_mut() {
        r.swap(i, j);
    }
}

impl<T: Scalar> Work<T> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        swap_cols(&mut self.a, i, j);
        swap_cols(&mut self.v, i, j);
        self.v_inv.swap(i, j);
    }

    fn row_sub(&mut self, i: usize, j: usize, k: &T) -> Option<()> {
        row_sub(&mut self.a, i, j, k)?;
        row_sub(&mut self.u, i, j, k)
    }

    /// `cols[i] -= k * cols[j]`; `V^{-1}` gets `rows[j] += k * rows[i]`.
    fn col_sub(&mut self, i: usize, j: usize, k: &T) -> Option<()> {
        col_sub(&mut self.a, i, j, k)?;
        col_sub(&mut self.v, i, j, k)?;
        row_sub(&mut self.v_inv, j, i, &k.neg()?)
    }

    fn negate_row(&mut self, i: usize) -> Option<()> {
        for x in self.a[i].iter_mut().chain(self.u[i].iter_mut()) {
            *x = x.neg()?;
        }
        Some(())
    }
}

fn smallest<T: Scalar>(
    a: &[Vec<T>],
    cells: impl Iterator<Item = (usize, usize)>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, j) in cells {
        if a[i][j].is_zero() {
            continue;
        }
        match best {
            Some((bi, bj)) if a[i][j].abs_cmp(&a[bi][bj]).is_ge() => {}
            _ => best = Some((i, j)),
        }
    }
    best
}

fn snf_core<T: Scalar>(m: Vec<Vec<T>>, rows: usize, cols: usize) -> Option<(Work<T>, usize)> {
    let mut w = Work { a: m, u: identity(rows), v: identity(cols), v_inv: identity(cols) };
    let mut t = 0;
    while t < rows.min(cols) {
        let cells = (t..rows).flat_map(|i| (t..cols).map(move |j| (i, j)));
        let Some((pi, pj)) = smallest(&w.a, cells) else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            for i in t + 1..rows {
                if !w.a[i][t].is_zero() {
                    let k = w.a[i][t].div_floor(&w.a[t][t])?;
                    w.row_sub(i, t, &k)?;
                }
            }
            for j in t + 1..cols {
                if !w.a[t][j].is_zero() {
                    let k = w.a[t][j].div_floor(&w.a[t][t])?;
                    w.col_sub(j, t, &k)?;
                }
            }
            let line = (t + 1..rows).map(|i| (i, t)).chain((t + 1..cols).map(|j| (t, j)));
            if let Some((i, j)) = smallest(&w.a, line) {
                // a remainder smaller than the pivot survived; promote it
                if j == t {
                    w.swap_rows(t, i);
                } else {
                    w.swap_cols(t, j);
                }
                continue;
            }
            let bad = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !w.a[t][t].divides(&w.a[i][j]))
            });
            match bad {
                Some(i) => {
                    row_add(&mut w.a, t, i)?;
                    row_add(&mut w.u, t, i)?;
                }
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t)?;
        }
        t += 1;
    }
    Some((w, t))
}

fn verified<T: Scalar>(m: &[Vec<T>], w: &Work<T>, rows: usize, cols: usize) -> Option<bool> {
    let um = mat_mul(&w.u, m, cols)?;
    let umv = mat_mul(&um, &w.v, cols)?;
    let vv = mat_mul(&w.v, &w.v_inv, cols)?;
    Some(umv == w.a && vv == identity::<T>(cols) && rows == w.u.len())
}

fn finish<T: Scalar>(m: &[Vec<T>], w: Work<T>, rank: usize, rows: usize, cols: usize) -> Option<SnfResult> {
    // the exact round trip is part of the contract; fall back to BigInt if
    // the check itself overflows
    let ok = match verified(m, &w, rows, cols) {
        Some(ok) => ok,
        None => {
            let big = |x: &Vec<Vec<T>>| -> Vec<Vec<BigInt>> {
                x.iter().map(|r| r.iter().map(T::to_big).collect()).collect()
            };
            let wb = Work { a: big(&w.a), u: big(&w.u), v: big(&w.v), v_inv: big(&w.v_inv) };
            verified(&big(&m.to_vec()), &wb, rows, cols)?
        }
    };
    assert!(ok, "Smith normal form failed its round-trip check");
    Some(SnfResult {
        u: IntMatrix::from_scalar_rows(rows, &w.u),
        d: IntMatrix::from_scalar_rows(cols, &w.a),
        v: IntMatrix::from_scalar_rows(cols, &w.v),
        v_inv: IntMatrix::from_scalar_rows(cols, &w.v_inv),
        rank,
    })
}

/// Smith normal form. Pivots are chosen as the entry of smallest absolute
/// value, ties broken row-major, so the result is a deterministic function
/// of `m`. The identity `U * M * V = D` is checked before returning.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = (m.rows(), m.cols());
    if let Some(small) = m.to_scalar_rows::<i64>() {
        if let Some((w, rank)) = snf_core(small.clone(), rows, cols) {
            if let Some(r) = finish(&small, w, rank, rows, cols) {
                return r;
            }
        }
    }
    let big = m.to_scalar_rows::<BigInt>().unwrap();
    let (w, rank) = snf_core(big.clone(), rows, cols).unwrap();
    finish(&big, w, rank, rows, cols).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use proptest::prelude::*;

    fn diag_of(m: &IntMatrix) -> Vec<i64> {
        smith_normal_form(m).diagonal().iter().map(|d| i64::try_from(d).unwrap()).collect()
    }

    /// Invariant factors through determinantal divisors: the gcd `d_k` of
    /// all `k x k` minors gives `s_k = d_k / d_{k-1}`.
    fn minors_oracle(m: &IntMatrix) -> Vec<i64> {
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
            out
        }
        let mut out = Vec::new();
        let mut prev = 1i64;
        for k in 1..=m.rows().min(m.cols()) {
            let mut g = 0i64;
            for rs in subsets(m.rows(), k) {
                for cs in subsets(m.cols(), k) {
                    let sub: Vec<Vec<i64>> = rs
                        .iter()
                        .map(|&i| cs.iter().map(|&j| m.get_i64(i, j).unwrap()).collect())
                        .collect();
                    let d = IntMatrix::from_rows(k, &sub).det();
                    g = g.gcd(&i64::try_from(d).unwrap());
                }
            }
            if g == 0 {
                out.extend(std::iter::repeat(0).take(m.rows().min(m.cols()) - out.len()));
                break;
            }
            out.push(g / prev);
            prev = g;
        }
        out
    }

    #[test]
    fn identity_and_zero() {
        assert_eq!(diag_of(&IntMatrix::identity(3)), vec![1, 1, 1]);
        let r = smith_normal_form(&IntMatrix::zeros(2, 3));
        assert_eq!(r.rank, 0);
        assert_eq!(r.d, IntMatrix::zeros(2, 3));
        let r = smith_normal_form(&IntMatrix::zeros(0, 3));
        assert_eq!(r.rank, 0);
    }

    #[test]
    fn diag_6_4() {
        let m = IntMatrix::diagonal(2, 2, &[6, 4]);
        assert_eq!(diag_of(&m), vec![2, 12]);
        // Z/6 + Z/4 has exponent 12 and order 24, so it is Z/2 + Z/12
        let orders: Vec<i64> = (0..6)
            .flat_map(|a: i64| (0..4).map(move |b: i64| (6 / a.gcd(&6)).lcm(&(4 / b.gcd(&4)))))
            .collect();
        let exponent = *orders.iter().max().unwrap();
        assert_eq!((exponent, 24 / exponent), (12, 2));
    }

    #[test]
    fn transforms_are_consistent() {
        let m = IntMatrix::from_rows(3, &[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let r = smith_normal_form(&m);
        assert_eq!(r.u.mul(&m).mul(&r.v), r.d);
        assert_eq!(r.v.mul(&r.v_inv), IntMatrix::identity(3));
        assert_eq!(r.u.det().magnitude(), BigInt::from(1).magnitude());
        assert_eq!(diag_of(&m), vec![2, 6, 12]);
    }

    #[test]
    fn large_entries_fall_back_to_big_integers() {
        let x = i64::MAX / 2;
        let m = IntMatrix::from_rows(2, &[vec![x, x - 1], vec![x - 1, x - 3]]);
        let r = smith_normal_form(&m);
        assert_eq!(r.u.mul(&m).mul(&r.v), r.d);
        assert_eq!(r.diagonal()[1].magnitude(), m.det().magnitude());
    }

    proptest! {
        #[test]
        fn matches_determinantal_divisors(
            rows in 1usize..5, cols in 1usize..5,
            entries in proptest::collection::vec(-3i64..=3, 16),
        ) {
            let data: Vec<Vec<i64>> = (0..rows).map(|i| entries[i * 4..i * 4 + cols].to_vec()).collect();
            let m = IntMatrix::from_rows(cols, &data);
            prop_assert_eq!(diag_of(&m), minors_oracle(&m));
        }
    }
}
