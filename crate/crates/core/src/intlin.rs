//! Exact integer linear algebra.
//!
//! Everything here runs on [`BigInt`], so pivoting never overflows. The
//! matrices that show up in practice are tiny (the dimension of a torus), so
//! clarity wins over speed.
//!
//! Conventions:
//! - [`hermite_normal_form`] is row-style: `U·M = H` with `H` in echelon form,
//!   positive pivots and the entries above each pivot reduced into `[0, pivot)`.
//! - [`smith_normal_form`] returns `(U, D, V)` with `U·M·V = D`.
//! - [`integer_kernel`] returns the lattice `{v ∈ ℤ^cols : M·v = 0}` as an
//!   HNF-reduced basis, so the output does not depend on pivoting history.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix);
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from rows of anything convertible into `BigInt`.
    pub fn from_rows<T, R>(rows: &[R]) -> Result<Self>
    where
        T: Clone + Into<BigInt>,
        R: AsRef<[T]>,
    {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        if nrows == 0 || ncols == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut data = Vec::with_capacity(nrows * ncols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != ncols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {ncols}",
                    row.len()
                )));
            }
            data.extend(row.iter().cloned().map(Into::into));
        }
        Ok(Self { rows: nrows, cols: ncols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "IntMatrix dimensions must be positive");
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Self { rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn sub(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot subtract {}x{} from {}x{}",
                rhs.rows, rhs.cols, self.rows, self.cols
            )));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Ok(IntMatrix { rows: self.rows, cols: self.cols, data })
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n.saturating_sub(1) {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        Ok(sign * a.get(n - 1, n - 1))
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().map(|d| d.abs().is_one()).unwrap_or(false)
    }

    /// Integer inverse of a unimodular matrix (its HNF is the identity, so the
    /// transform is the inverse).
    pub fn inverse_unimodular(&self) -> Result<IntMatrix> {
        let det = self.det()?;
        if !det.abs().is_one() {
            return Err(Error::NotUnimodular(det));
        }
        let (h, u) = hermite_normal_form(self)?;
        debug_assert_eq!(h, IntMatrix::identity(self.rows));
        Ok(u)
    }

    pub fn to_i64_rows(&self) -> Result<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(to_i64).collect())
            .collect()
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] -= q * row[src]
    fn sub_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(src, j) * q;
            self.data[dst * self.cols + j] -= v;
        }
    }

    /// col[dst] -= q * col[src]
    fn sub_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, src) * q;
            self.data[i * self.cols + dst] -= v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = v;
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect();
        f.debug_list().entries(rows).finish()
    }
}

pub(crate) fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::Overflow(x.clone()))
}

/// Basis of a sublattice of `ℤ^dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    dim: usize,
    vectors: Vec<Vec<BigInt>>,
}

impl LatticeBasis {
    pub fn new(dim: usize, vectors: Vec<Vec<BigInt>>) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "basis vector of length {} in dimension {dim}",
                v.len()
            )));
        }
        Ok(Self { dim, vectors })
    }

    pub fn empty(dim: usize) -> Self {
        Self { dim, vectors: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<BigInt>] {
        &self.vectors
    }

    pub fn to_i64_vectors(&self) -> Result<Vec<Vec<i64>>> {
        self.vectors.iter().map(|v| v.iter().map(to_i64).collect()).collect()
    }

    /// Integer span membership, by reducing `v` against the echelon form of
    /// the basis.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        if v.len() != self.dim {
            return false;
        }
        if self.vectors.is_empty() {
            return v.iter().all(Zero::is_zero);
        }
        let Ok(basis) = IntMatrix::from_rows(&self.vectors) else {
            return false;
        };
        let Ok((h, _)) = hermite_normal_form(&basis) else {
            return false;
        };
        let mut rest = v.to_vec();
        for i in 0..h.rows() {
            let row = h.row(i);
            let Some(pivot_col) = row.iter().position(|x| !x.is_zero()) else {
                break;
            };
            let (q, r) = rest[pivot_col].div_rem(&row[pivot_col]);
            if !r.is_zero() {
                return false;
            }
            for (x, y) in rest.iter_mut().zip(row) {
                *x -= &q * y;
            }
        }
        rest.iter().all(Zero::is_zero)
    }
}

/// Row-style Hermite normal form: returns `(H, U)` with `U·M = H`.
pub fn hermite_normal_form(m: &IntMatrix) -> Result<(IntMatrix, IntMatrix)> {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut pivot_row = 0;

    for col in 0..m.cols {
        if pivot_row == m.rows {
            break;
        }
        let mut found = false;
        loop {
            // smallest nonzero magnitude at or below the pivot row
            let candidate = (pivot_row..m.rows)
                .filter(|&i| !h.get(i, col).is_zero())
                .min_by(|&a, &b| h.get(a, col).abs().cmp(&h.get(b, col).abs()));
            let Some(k) = candidate else { break };
            found = true;
            h.swap_rows(pivot_row, k);
            u.swap_rows(pivot_row, k);

            let pivot = h.get(pivot_row, col).clone();
            let mut clean = true;
            for i in pivot_row + 1..m.rows {
                if h.get(i, col).is_zero() {
                    continue;
                }
                let q = h.get(i, col).div_floor(&pivot);
                h.sub_row_multiple(i, pivot_row, &q);
                u.sub_row_multiple(i, pivot_row, &q);
                if !h.get(i, col).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if !found {
            continue;
        }
        if h.get(pivot_row, col).is_negative() {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        let pivot = h.get(pivot_row, col).clone();
        for i in 0..pivot_row {
            let q = h.get(i, col).div_floor(&pivot);
            h.sub_row_multiple(i, pivot_row, &q);
            u.sub_row_multiple(i, pivot_row, &q);
        }
        pivot_row += 1;
    }
    Ok((h, u))
}

/// Smith normal form: returns `(U, D, V)` with `U·M·V = D`, `D` diagonal,
/// nonnegative, and `d₁ | d₂ | …`.
pub fn smith_normal_form(m: &IntMatrix) -> Result<(IntMatrix, IntMatrix, IntMatrix)> {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = d.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                // remaining block is zero
                return Ok((u, d, v));
            };
            d.swap_rows(t, bi);
            u.swap_rows(t, bi);
            d.swap_cols(t, bj);
            v.swap_cols(t, bj);

            let pivot = d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = d.get(i, t) / &pivot;
                d.sub_row_multiple(i, t, &q);
                u.sub_row_multiple(i, t, &q);
                clean &= d.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = d.get(t, j) / &pivot;
                d.sub_col_multiple(j, t, &q);
                v.sub_col_multiple(j, t, &q);
                clean &= d.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            // pivot must divide the rest of the block; otherwise fold an
            // offending row into row t and go around again
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !(d.get(i, j) % &pivot).is_zero()));
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    d.sub_row_multiple(t, i, &minus_one);
                    u.sub_row_multiple(t, i, &minus_one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    Ok((u, d, v))
}

/// Basis of `{v ∈ ℤ^cols : M·v = 0}`, empty when the kernel is trivial.
pub fn integer_kernel(m: &IntMatrix) -> Result<LatticeBasis> {
    let (h, u) = hermite_normal_form(&m.transpose())?;
    let rank = (0..h.rows()).filter(|&i| h.row(i).iter().any(|x| !x.is_zero())).count();
    if rank == h.rows() {
        return Ok(LatticeBasis::empty(m.cols));
    }
    let raw: Vec<Vec<BigInt>> = (rank..u.rows()).map(|i| u.row(i).to_vec()).collect();
    let (reduced, _) = hermite_normal_form(&IntMatrix::from_rows(&raw)?)?;
    let vectors = (0..reduced.rows())
        .map(|i| reduced.row(i).to_vec())
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    LatticeBasis::new(m.cols, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn is_hnf(h: &IntMatrix) -> bool {
        let mut last_pivot: Option<usize> = None;
        let mut seen_zero_row = false;
        for i in 0..h.rows() {
            match h.row(i).iter().position(|x| !x.is_zero()) {
                None => seen_zero_row = true,
                Some(c) => {
                    if seen_zero_row || last_pivot.is_some_and(|p| c <= p) {
                        return false;
                    }
                    let p = h.get(i, c);
                    if !p.is_positive() {
                        return false;
                    }
                    for k in 0..i {
                        let x = h.get(k, c);
                        if x.is_negative() || x >= p {
                            return false;
                        }
                    }
                    last_pivot = Some(c);
                }
            }
        }
        true
    }

    fn divisibility_chain(d: &IntMatrix) -> bool {
        let n = d.rows().min(d.cols());
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                if i != j && !d.get(i, j).is_zero() {
                    return false;
                }
            }
        }
        (0..n).all(|i| !d.get(i, i).is_negative())
            && (1..n).all(|i| {
                let (a, b) = (d.get(i - 1, i - 1), d.get(i, i));
                if a.is_zero() { b.is_zero() } else { (b % a).is_zero() }
            })
    }

    #[test]
    fn hnf_zero_one_by_one() {
        let (h, u) = hermite_normal_form(&mat(&[&[0]])).unwrap();
        assert_eq!(h, mat(&[&[0]]));
        assert_eq!(u, mat(&[&[1]]));
    }

    #[test]
    fn hnf_two_by_two() {
        let m = mat(&[&[2, 4], &[6, 8]]);
        let (h, u) = hermite_normal_form(&m).unwrap();
        assert_eq!(h, mat(&[&[2, 0], &[0, 4]]));
        assert_eq!(u.mul(&m).unwrap(), h);
        assert!(u.is_unimodular());
    }

    #[test]
    fn hnf_identity() {
        let id = IntMatrix::identity(3);
        let (h, u) = hermite_normal_form(&id).unwrap();
        assert_eq!(h, id);
        assert_eq!(u, id);
    }

    #[test]
    fn snf_examples() {
        let (_, d, _) = smith_normal_form(&mat(&[&[2, 4], &[6, 8]])).unwrap();
        assert_eq!(d, mat(&[&[2, 0], &[0, 4]]));
        let (_, d, _) = smith_normal_form(&mat(&[&[1, 1], &[1, 0]])).unwrap();
        assert_eq!(d, IntMatrix::identity(2));
        let (_, d, _) = smith_normal_form(&IntMatrix::zeros(2, 2)).unwrap();
        assert_eq!(d, IntMatrix::zeros(2, 2));
    }

    #[test]
    fn kernel_of_cat_map_is_trivial() {
        let a = mat(&[&[2, 1], &[1, 1]]);
        let m = a.transpose().sub(&IntMatrix::identity(2)).unwrap();
        assert!(integer_kernel(&m).unwrap().is_empty());
    }

    #[test]
    fn kernel_of_zero_is_everything() {
        let k = integer_kernel(&IntMatrix::zeros(3, 3)).unwrap();
        assert_eq!(k.vectors(), &[big(&[1, 0, 0]), big(&[0, 1, 0]), big(&[0, 0, 1])]);
    }

    #[test]
    fn kernel_of_shear() {
        let a = mat(&[&[1, 0], &[1, 1]]);
        let m = a.transpose().sub(&IntMatrix::identity(2)).unwrap();
        assert_eq!(m, mat(&[&[0, 1], &[0, 0]]));
        let k = integer_kernel(&m).unwrap();
        assert_eq!(k.vectors(), &[big(&[1, 0])]);
    }

    #[test]
    fn kernel_of_rectangular() {
        // x + 2y + 3z = 0 has a rank-2 kernel
        let k = integer_kernel(&mat(&[&[1, 2, 3]])).unwrap();
        assert_eq!(k.rank(), 2);
        assert!(k.contains(&big(&[1, 1, -1])));
        assert!(!k.contains(&big(&[1, 1, 1])));
    }

    #[test]
    fn det_and_inverse() {
        let a = mat(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.det().unwrap(), BigInt::from(1));
        assert_eq!(a.inverse_unimodular().unwrap(), mat(&[&[1, -1], &[-1, 2]]));
        assert_eq!(mat(&[&[2, 4], &[6, 8]]).det().unwrap(), BigInt::from(-8));
        assert!(matches!(
            mat(&[&[2, 0], &[0, 1]]).inverse_unimodular(),
            Err(Error::NotUnimodular(_))
        ));
    }

    #[test]
    fn construction_errors() {
        let empty: Vec<Vec<i64>> = vec![];
        assert_eq!(IntMatrix::from_rows(&empty), Err(Error::EmptyMatrix));
        let ragged: Vec<Vec<i64>> = vec![vec![1, 2], vec![3]];
        assert!(matches!(IntMatrix::from_rows(&ragged), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn overflow_is_reported() {
        let huge = BigInt::from(i64::MAX) * BigInt::from(4);
        let m = IntMatrix::new(1, 1, vec![huge.clone()]).unwrap();
        assert_eq!(m.to_i64_rows(), Err(Error::Overflow(huge)));
    }

    fn small_matrix() -> impl Strategy<Value = IntMatrix> {
        (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
            prop::collection::vec(-20i64..=20, r * c).prop_map(move |v| {
                IntMatrix::new(r, c, v.into_iter().map(BigInt::from).collect()).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn snf_decomposes(m in small_matrix()) {
            let (u, d, v) = smith_normal_form(&m).unwrap();
            prop_assert_eq!(u.mul(&m).unwrap().mul(&v).unwrap(), d.clone());
            prop_assert!(u.is_unimodular());
            prop_assert!(v.is_unimodular());
            prop_assert!(divisibility_chain(&d));
        }

        #[test]
        fn hnf_decomposes_and_is_idempotent(m in small_matrix()) {
            let (h, u) = hermite_normal_form(&m).unwrap();
            prop_assert_eq!(u.mul(&m).unwrap(), h.clone());
            prop_assert!(u.is_unimodular());
            prop_assert!(is_hnf(&h));
            let (h2, _) = hermite_normal_form(&h).unwrap();
            prop_assert_eq!(h2, h);
        }

        #[test]
        fn kernel_vectors_are_annihilated(m in small_matrix()) {
            let k = integer_kernel(&m).unwrap();
            for v in k.vectors() {
                prop_assert!(m.mul_vec(v).unwrap().iter().all(Zero::is_zero));
            }
        }
    }
}
