//! Dense exact linear algebra by Gauss–Jordan elimination.

use super::field::{Field, FieldElem};
use crate::error::{Error, Result};

/// A row-major matrix with a fixed column count (so zero-row matrices still
/// know their width).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    ncols: usize,
    rows: Vec<Vec<FieldElem>>,
}

impl Matrix {
    pub fn new(field: Field, ncols: usize, rows: Vec<Vec<FieldElem>>) -> Result<Matrix> {
        if let Some(r) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::Contract(format!(
                "row of length {} in a matrix with {ncols} columns",
                r.len()
            )));
        }
        Ok(Matrix { field, ncols, rows })
    }

    pub fn zeros(field: Field, nrows: usize, ncols: usize) -> Matrix {
        Matrix { field, ncols, rows: vec![vec![field.zero(); ncols]; nrows] }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.rows[i][i] = field.one();
        }
        m
    }

    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Result<Matrix> {
        let ncols = rows.first().map_or(0, |r| r.len());
        let rows = rows.iter().map(|r| r.iter().map(|&v| field.from_i64(v)).collect()).collect();
        Matrix::new(field, ncols, rows)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<FieldElem>] {
        &self.rows
    }

    pub fn push_row(&mut self, row: Vec<FieldElem>) {
        assert_eq!(row.len(), self.ncols, "row length mismatch");
        self.rows.push(row);
    }

    pub fn mul_vec(&self, v: &[FieldElem]) -> Vec<FieldElem> {
        assert_eq!(v.len(), self.ncols);
        self.rows
            .iter()
            .map(|r| r.iter().zip(v).fold(self.field.zero(), |acc, (a, b)| &acc + &(a * b)))
            .collect()
    }

    /// Reduced row-echelon form (zero rows dropped) and pivot columns.
    pub fn rref(&self) -> (Vec<Vec<FieldElem>>, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let inv = rows[r][c].inv().unwrap();
            for v in rows[r].iter_mut() {
                *v = &*v * &inv;
            }
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let factor = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row).skip(c) {
                    *v = &*v - &(&factor * pv);
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        rows.truncate(r);
        (rows, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical kernel basis read off the reduced row-echelon form: one
    /// vector per free column, with a 1 in that column.
    pub fn kernel(&self) -> Vec<Vec<FieldElem>> {
        let (rref, pivots) = self.rref();
        kernel_from_rref(self.field, self.ncols, &rref, &pivots)
    }

    pub fn determinant(&self) -> Result<FieldElem> {
        if self.nrows() != self.ncols {
            return Err(Error::Contract("determinant of a non-square matrix".into()));
        }
        let mut rows = self.rows.clone();
        let n = self.ncols;
        let mut det = self.field.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !rows[i][c].is_zero()) else {
                return Ok(self.field.zero());
            };
            if p != c {
                rows.swap(p, c);
                det = -det;
            }
            det = &det * &rows[c][c];
            let inv = rows[c][c].inv().unwrap();
            for i in c + 1..n {
                if rows[i][c].is_zero() {
                    continue;
                }
                let factor = &rows[i][c] * &inv;
                let pivot_row = rows[c].clone();
                for (v, pv) in rows[i].iter_mut().zip(&pivot_row).skip(c) {
                    *v = &*v - &(&factor * pv);
                }
            }
        }
        Ok(det)
    }
}

fn kernel_from_rref(
    field: Field,
    ncols: usize,
    rref: &[Vec<FieldElem>],
    pivots: &[usize],
) -> Vec<Vec<FieldElem>> {
    let mut is_pivot = vec![false; ncols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![field.zero(); ncols];
            v[free] = field.one();
            for (row, &p) in rref.iter().zip(pivots) {
                v[p] = -&row[free];
            }
            v
        })
        .collect()
}

/// Outcome of [`solve_linear`]: a particular solution when one exists, and a
/// basis of the kernel of `A` in either case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSolution {
    pub solution: Option<Vec<FieldElem>>,
    pub kernel: Vec<Vec<FieldElem>>,
}

/// Solves `A x = b` exactly. Free variables are set to zero in the returned
/// particular solution.
pub fn solve_linear(a: &Matrix, b: &[FieldElem]) -> Result<LinearSolution> {
    if b.len() != a.nrows() {
        return Err(Error::Contract(format!(
            "right-hand side has length {} but the matrix has {} rows",
            b.len(),
            a.nrows()
        )));
    }
    let n = a.ncols();
    let augmented_rows = a
        .rows()
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut r = r.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let aug = Matrix::new(a.field(), n + 1, augmented_rows)?;
    let (rref, pivots) = aug.rref();
    let kernel_pivots: Vec<usize> = pivots.iter().copied().filter(|&p| p < n).collect();
    let kernel_rows: Vec<Vec<FieldElem>> =
        rref.iter().take(kernel_pivots.len()).map(|r| r[..n].to_vec()).collect();
    let kernel = kernel_from_rref(a.field(), n, &kernel_rows, &kernel_pivots);
    if pivots.last() == Some(&n) {
        return Ok(LinearSolution { solution: None, kernel });
    }
    let mut x = vec![a.field().zero(); n];
    for (row, &p) in rref.iter().zip(&pivots) {
        x[p] = row[n].clone();
    }
    Ok(LinearSolution { solution: Some(x), kernel })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q: Field = Field::Rational;

    fn v(xs: &[&str]) -> Vec<FieldElem> {
        xs.iter().map(|s| Q.parse_elem(s).unwrap()).collect()
    }

    #[test]
    fn identity_system() {
        let a = Matrix::identity(Q, 2);
        let s = solve_linear(&a, &v(&["3", "5"])).unwrap();
        assert_eq!(s.solution, Some(v(&["3", "5"])));
        assert!(s.kernel.is_empty());
    }

    #[test]
    fn inconsistent_system() {
        let a = Matrix::from_i64(Q, &[&[1, 1], &[2, 2]]).unwrap();
        let s = solve_linear(&a, &v(&["1", "3"])).unwrap();
        assert_eq!(s.solution, None);
        assert_eq!(s.kernel.len(), 1);
    }

    #[test]
    fn two_by_two_over_q() {
        // By hand: x + 2y = 5, 3x + 4y = 6 -> y = 9/2, x = -4.
        let a = Matrix::from_i64(Q, &[&[1, 2], &[3, 4]]).unwrap();
        let s = solve_linear(&a, &v(&["5", "6"])).unwrap();
        assert_eq!(s.solution, Some(v(&["-4", "9/2"])));
    }

    #[test]
    fn dimension_mismatch() {
        let a = Matrix::identity(Q, 2);
        assert!(solve_linear(&a, &v(&["1"])).is_err());
        assert!(Matrix::new(Q, 2, vec![v(&["1"])]).is_err());
    }

    #[test]
    fn zero_row_matrix_kernel_is_everything() {
        let a = Matrix::zeros(Q, 0, 3);
        let s = solve_linear(&a, &[]).unwrap();
        assert_eq!(s.kernel.len(), 3);
        assert_eq!(s.solution, Some(v(&["0", "0", "0"])));
    }

    #[test]
    fn determinant_small() {
        let a = Matrix::from_i64(Q, &[&[1, 2], &[3, 4]]).unwrap();
        assert_eq!(a.determinant().unwrap(), Q.from_i64(-2));
    }

    fn arb_system(field: Field) -> impl Strategy<Value = (Matrix, Vec<FieldElem>)> {
        (1usize..6, 1usize..6).prop_flat_map(move |(r, c)| {
            (
                proptest::collection::vec(proptest::collection::vec(-3i64..4, c), r),
                proptest::collection::vec(-3i64..4, r),
            )
                .prop_map(move |(rows, b)| {
                    let rows = rows
                        .into_iter()
                        .map(|row| row.into_iter().map(|x| field.from_i64(x)).collect())
                        .collect();
                    let m = Matrix::new(field, c, rows).unwrap();
                    (m, b.into_iter().map(|x| field.from_i64(x)).collect())
                })
        })
    }

    fn check_solution(a: &Matrix, b: &[FieldElem]) -> std::result::Result<(), TestCaseError> {
        let s = solve_linear(a, b).unwrap();
        if let Some(x) = &s.solution {
            prop_assert_eq!(&a.mul_vec(x), &b.to_vec());
        }
        for k in &s.kernel {
            prop_assert!(a.mul_vec(k).iter().all(FieldElem::is_zero));
        }
        prop_assert_eq!(s.kernel.len() + a.rank(), a.ncols());
        Ok(())
    }

    proptest! {
        #[test]
        fn solutions_are_exact_over_q((a, b) in arb_system(Field::Rational)) {
            check_solution(&a, &b)?;
        }

        #[test]
        fn solutions_are_exact_over_fp((a, b) in arb_system(Field::Prime(7))) {
            check_solution(&a, &b)?;
        }
    }
}
