use super::matrix::PolyMatrix;
use super::poly::TauPoly;

/// Smith normal form `left · m · right = diag(d_1, …, d_k, 0, …)` with
/// `d_1 | d_2 | …`, together with inverses of both transforms.
#[derive(Clone, Debug)]
pub struct Snf {
    /// The min(rows, cols) diagonal entries; nonzero entries come first.
    pub diagonal: Vec<TauPoly>,
    pub left: PolyMatrix,
    pub left_inv: PolyMatrix,
    pub right: PolyMatrix,
    pub right_inv: PolyMatrix,
}

impl Snf {
    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diagonal.iter().take_while(|d| !d.is_zero()).count()
    }
}

struct Work {
    a: PolyMatrix,
    u: PolyMatrix,
    ui: PolyMatrix,
    v: PolyMatrix,
    vi: PolyMatrix,
}

impl Work {
    // row_i += q row_j; the inverse gets col_j += q col_i.
    fn row_op(&mut self, i: usize, j: usize, q: &TauPoly) {
        self.a.row_axpy(i, j, q);
        self.u.row_axpy(i, j, q);
        self.ui.col_axpy(j, i, q);
    }

    // col_i += q col_j; the inverse gets row_j += q row_i.
    fn col_op(&mut self, i: usize, j: usize, q: &TauPoly) {
        self.a.col_axpy(i, j, q);
        self.v.col_axpy(i, j, q);
        self.vi.row_axpy(j, i, q);
    }

    fn row_swap(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.ui.swap_cols(i, j);
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.vi.swap_rows(i, j);
    }
}

/// Smith normal form over the Euclidean domain F2[τ].
pub fn snf(m: &PolyMatrix) -> Snf {
    let (n, k) = (m.rows(), m.cols());
    let mut w = Work {
        a: m.clone(),
        u: PolyMatrix::identity(n),
        ui: PolyMatrix::identity(n),
        v: PolyMatrix::identity(k),
        vi: PolyMatrix::identity(k),
    };
    let mut t = 0;
    while t < n.min(k) {
        // Pivot on an entry of least degree in the remaining block.
        let mut best: Option<(u32, usize, usize)> = None;
        for i in t..n {
            for j in t..k {
                if let Some(d) = w.a.get(i, j).degree() {
                    if best.is_none_or(|(bd, _, _)| d < bd) {
                        best = Some((d, i, j));
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        w.row_swap(t, pi);
        w.col_swap(t, pj);
        'clear: loop {
            for i in t + 1..n {
                if w.a.get(i, t).is_zero() {
                    continue;
                }
                let (q, r) = w.a.get(i, t).div_rem(w.a.get(t, t));
                w.row_op(i, t, &q);
                if !r.is_zero() {
                    // A strictly smaller remainder becomes the new pivot.
                    w.row_swap(t, i);
                    continue 'clear;
                }
            }
            for j in t + 1..k {
                if w.a.get(t, j).is_zero() {
                    continue;
                }
                let (q, r) = w.a.get(t, j).div_rem(w.a.get(t, t));
                w.col_op(j, t, &q);
                if !r.is_zero() {
                    w.col_swap(t, j);
                    continue 'clear;
                }
            }
            // Enforce the divisibility chain: pull in a row whose entries the
            // pivot does not divide and clear again.
            let pivot = w.a.get(t, t).clone();
            let bad = (t + 1..n).find(|&i| (t + 1..k).any(|j| !w.a.get(i, j).divisible_by(&pivot)));
            match bad {
                Some(i) => w.row_op(t, i, &TauPoly::one()),
                None => break,
            }
        }
        t += 1;
    }
    let diagonal = (0..n.min(k)).map(|i| w.a.get(i, i).clone()).collect();
    Snf {
        diagonal,
        left: w.u,
        left_inv: w.ui,
        right: w.v,
        right_inv: w.vi,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(k: u32) -> TauPoly {
        TauPoly::tau_pow(k)
    }

    fn diag_of(m: &PolyMatrix) -> PolyMatrix {
        let s = snf(m);
        s.left.mul(m).mul(&s.right)
    }

    #[test]
    fn identity_is_its_own_form() {
        let s = snf(&PolyMatrix::identity(3));
        assert_eq!(s.diagonal, vec![TauPoly::one(); 3]);
    }

    #[test]
    fn upper_triangular_example() {
        // [[τ, τ²], [0, τ]]: subtracting τ·col0 from col1 leaves diag(τ, τ).
        let m = PolyMatrix::from_rows(vec![vec![t(1), t(2)], vec![TauPoly::zero(), t(1)]]);
        let s = snf(&m);
        assert_eq!(s.diagonal, vec![t(1), t(1)]);
        let d = diag_of(&m);
        assert_eq!(
            d,
            PolyMatrix::from_rows(vec![
                vec![t(1), TauPoly::zero()],
                vec![TauPoly::zero(), t(1)]
            ])
        );
    }

    #[test]
    fn zero_matrix_has_zero_chain() {
        let s = snf(&PolyMatrix::zeros(2, 3));
        assert!(s.diagonal.iter().all(TauPoly::is_zero));
        assert_eq!(s.rank(), 0);
    }

    #[test]
    fn divisibility_is_repaired() {
        // diag(τ², τ) must become diag(τ, τ²).
        let m = PolyMatrix::from_rows(vec![
            vec![t(2), TauPoly::zero()],
            vec![TauPoly::zero(), t(1)],
        ]);
        assert_eq!(snf(&m).diagonal, vec![t(1), t(2)]);
        // diag(τ, τ+1) has invariant factors 1, τ(τ+1).
        let m = PolyMatrix::from_rows(vec![
            vec![t(1), TauPoly::zero()],
            vec![TauPoly::zero(), TauPoly::from_bits(0b11)],
        ]);
        assert_eq!(
            snf(&m).diagonal,
            vec![TauPoly::one(), TauPoly::from_bits(0b110)]
        );
    }

    #[test]
    fn inverses_are_inverses() {
        let m = PolyMatrix::from_rows(vec![
            vec![TauPoly::from_bits(0b110), t(2), TauPoly::one()],
            vec![t(3), TauPoly::from_bits(0b101), TauPoly::zero()],
        ]);
        let s = snf(&m);
        assert_eq!(s.left.mul(&s.left_inv), PolyMatrix::identity(2));
        assert_eq!(s.right.mul(&s.right_inv), PolyMatrix::identity(3));
    }
}
