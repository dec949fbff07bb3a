use std::fmt;

use super::poly::TauPoly;

/// Dense matrix over F2[τ], row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    data: Vec<TauPoly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            data: vec![TauPoly::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, TauPoly::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> TauPoly) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        PolyMatrix { rows, cols, data }
    }

    /// Builds a matrix from rows; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<TauPoly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        PolyMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &TauPoly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: TauPoly) {
        self.data[i * self.cols + j] = v;
    }

    /// Adds `v` into entry (i, j).
    pub fn add_to(&mut self, i: usize, j: usize, v: &TauPoly) {
        self.data[i * self.cols + j] += v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(TauPoly::is_zero)
    }

    pub fn column(&self, j: usize) -> Vec<TauPoly> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn from_columns(rows: usize, cols: &[Vec<TauPoly>]) -> Self {
        Self::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = PolyMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.add_to(i, j, &(a * b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[TauPoly]) -> Vec<TauPoly> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in product");
        (0..self.rows)
            .map(|i| {
                let mut acc = TauPoly::zero();
                for (k, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc += &(self.get(i, k) * x);
                    }
                }
                acc
            })
            .collect()
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        PolyMatrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    /// The submatrix of rows `r0..r1` and columns `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> PolyMatrix {
        PolyMatrix::from_fn(r1 - r0, c1 - c0, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// Evaluates every entry at τ ↦ 0 or τ ↦ 1.
    pub fn evaluate(&self, at_one: bool) -> Vec<Vec<bool>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| {
                        let p = self.get(i, j);
                        if at_one {
                            p.eval_at_one()
                        } else {
                            p.eval_at_zero()
                        }
                    })
                    .collect()
            })
            .collect()
    }

    // Elementary operations used by the Smith normal form.

    /// row_i += q · row_j
    pub(crate) fn row_axpy(&mut self, i: usize, j: usize, q: &TauPoly) {
        if q.is_zero() {
            return;
        }
        for k in 0..self.cols {
            let v = self.get(j, k) * q;
            if !v.is_zero() {
                self.add_to(i, k, &v);
            }
        }
    }

    /// col_i += q · col_j
    pub(crate) fn col_axpy(&mut self, i: usize, j: usize, q: &TauPoly) {
        if q.is_zero() {
            return;
        }
        for k in 0..self.rows {
            let v = self.get(k, j) * q;
            if !v.is_zero() {
                self.add_to(k, i, &v);
            }
        }
    }

    pub(crate) fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.cols {
            self.data.swap(i * self.cols + k, j * self.cols + k);
        }
    }

    pub(crate) fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.rows {
            self.data.swap(k * self.cols + i, k * self.cols + j);
        }
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PolyMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_with_identity() {
        let m = PolyMatrix::from_fn(2, 3, |i, j| TauPoly::from_bits((i * 3 + j) as u64));
        assert_eq!(PolyMatrix::identity(2).mul(&m), m);
        assert_eq!(m.mul(&PolyMatrix::identity(3)), m);
    }

    #[test]
    fn hstack_and_block() {
        let a = PolyMatrix::identity(2);
        let b = PolyMatrix::zeros(2, 1);
        let c = a.hstack(&b);
        assert_eq!((c.rows(), c.cols()), (2, 3));
        assert_eq!(c.block(0, 2, 0, 2), a);
    }
}
