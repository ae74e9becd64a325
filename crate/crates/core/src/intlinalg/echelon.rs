//! Incremental integer row echelon form. Inserting a row keeps the lattice
//! spanned by all inserted rows while holding at most one row per leading
//! column, so long redundant relation lists shrink to at most `cols` rows
//! before the Smith form is taken.

use num_bigint::BigInt;
use num_traits::Zero;


#[derive(Clone, Debug)]
pub(crate) struct Echelon<T> {
    cols: usize,
    rows: Vec<Vec<T>>,
    lead: Vec<Option<usize>>,
}

impl<T: super::scalar::Scalar> Echelon<T> {
    pub fn new(cols: usize) -> Self {
        Echelon { cols, rows: Vec::new(), lead: vec![None; cols] }
    }

    /// Adds `r` to the spanning set; `None` on overflow.
    pub fn insert(&mut self, mut r: Vec<T>) -> Option<()> {
        debug_assert_eq!(r.len(), self.cols);
        let mut c = 0;
        loop {
            while c < self.cols && r[c].is_zero() {
                c += 1;
            }
            if c == self.cols {
                return Some(());
            }
            let Some(pi) = self.lead[c] else {
                if r[c].is_negative() {
                    for x in r[c..].iter_mut() {
                        *x = x.neg()?;
                    }
                }
                self.lead[c] = Some(self.rows.len());
                self.rows.push(r);
                return Some(());
            };
            let p = &self.rows[pi];
            let (a, b) = (p[c].clone(), r[c].clone());
            if a.divides(&b) {
                let k = b.div_floor(&a)?;
                for j in c..self.cols {
                    if !p[j].is_zero() {
                        r[j] = r[j].sub_mul(&k, &p[j])?;
                    }
                }
            } else {
                // [p; r] -> [s p + t r; (a/g) r - (b/g) p], a unimodular change
                let (g, s, t) = T::ext_gcd(&a, &b)?;
                let ag = a.div_floor(&g)?;
                let bg = b.div_floor(&g)?;
                let mut np = vec![T::zero(); self.cols];
                for j in c..self.cols {
                    np[j] = s.mul(&p[j])?.add(&t.mul(&r[j])?)?;
                    r[j] = ag.mul(&r[j])?.sub(&bg.mul(&p[j])?)?;
                }
                self.rows[pi] = np;
            }
        }
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }
}

/// Echelon basis of the lattice spanned by `rows`, computed in `i64` when
/// possible and in `BigInt` otherwise. Rows are returned sorted by leading
/// column.
pub(crate) fn echelon_basis<I>(cols: usize, rows: I) -> Vec<Vec<BigInt>>
where
    I: Iterator<Item = Vec<(usize, i64)>> + Clone,
{
    let dense_small = |sparse: &Vec<(usize, i64)>| {
        let mut v = vec![0i64; cols];
        for &(j, x) in sparse {
            v[j] += x;
        }
        v
    };
    let mut small = Echelon::<i64>::new(cols);
    let mut overflow = false;
    for r in rows.clone() {
        if small.insert(dense_small(&r)).is_none() {
            overflow = true;
            break;
        }
    }
    let mut out: Vec<Vec<BigInt>> = if !overflow {
        small.rows().iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    } else {
        let mut big = Echelon::<BigInt>::new(cols);
        for r in rows {
            big.insert(dense_small(&r).into_iter().map(BigInt::from).collect()).unwrap();
        }
        big.rows().to_vec()
    };
    out.sort_by_key(|r| r.iter().position(|x| !x.is_zero()));
    out
}

/// Solves `v = w * basis` for an echelon basis sorted by leading column.
pub(crate) fn solve_in_basis(basis: &[Vec<BigInt>], v: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut r = v.to_vec();
    let mut w = vec![BigInt::zero(); basis.len()];
    for (i, b) in basis.iter().enumerate() {
        let c = b.iter().position(|x| !x.is_zero()).expect("basis rows are nonzero");
        // all columns before c must already be clear
        if r[..c].iter().any(|x| !x.is_zero()) {
            return None;
        }
        if r[c].is_zero() {
            continue;
        }
        if !(&r[c] % &b[c]).is_zero() {
            return None;
        }
        let k = &r[c] / &b[c];
        for j in c..r.len() {
            r[j] -= &k * &b[j];
        }
        w[i] = k;
    }
    if r.iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(w)
}
