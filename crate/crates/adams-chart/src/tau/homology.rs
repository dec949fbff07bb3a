use std::fmt;

use thiserror::Error;

use super::matrix::PolyMatrix;
use super::poly::TauPoly;
use super::snf::snf;

/// Order of a cyclic F2[τ]-module: free (F2[τ]) or F2[τ]/τ^k.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TauOrder {
    Free,
    Torsion(u32),
}

impl TauOrder {
    /// The annihilating monomial τ^k, or `None` for a free summand.
    pub fn relation(self) -> Option<TauPoly> {
        match self {
            TauOrder::Free => None,
            TauOrder::Torsion(k) => Some(TauPoly::tau_pow(k)),
        }
    }

    pub fn is_free(self) -> bool {
        self == TauOrder::Free
    }

    /// Reduces a coefficient into the canonical range for this summand.
    pub fn reduce(self, p: &TauPoly) -> TauPoly {
        match self {
            TauOrder::Free => p.clone(),
            TauOrder::Torsion(k) => p.truncate(k),
        }
    }
}

impl fmt::Display for TauOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TauOrder::Free => write!(f, "free"),
            TauOrder::Torsion(k) => write!(f, "{k}"),
        }
    }
}

impl std::str::FromStr for TauOrder {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "free" {
            return Ok(TauOrder::Free);
        }
        match s.parse::<u32>() {
            Ok(k) if k >= 1 => Ok(TauOrder::Torsion(k)),
            _ => Err(format!("bad tau order '{s}'")),
        }
    }
}

/// A direct sum of cyclic F2[τ]-modules, one per generator.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PresentedModule {
    pub orders: Vec<TauOrder>,
}

impl PresentedModule {
    pub fn new(orders: Vec<TauOrder>) -> Self {
        PresentedModule { orders }
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    /// Generator-wise reduction of a coordinate vector.
    pub fn reduce(&self, v: &[TauPoly]) -> Vec<TauPoly> {
        self.orders
            .iter()
            .zip(v)
            .map(|(o, x)| o.reduce(x))
            .collect()
    }

    /// Columns τ^k·e_i for every torsion generator.
    fn relation_columns(&self) -> Vec<Vec<TauPoly>> {
        let n = self.len();
        self.orders
            .iter()
            .enumerate()
            .filter_map(|(i, o)| {
                o.relation().map(|r| {
                    let mut col = vec![TauPoly::zero(); n];
                    col[i] = r;
                    col
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("{what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: String,
        found: String,
    },
    #[error("composite of the two maps is nonzero at row {row}, column {col} (entry {entry})")]
    CompositionNonzero {
        row: usize,
        col: usize,
        entry: String,
    },
    #[error("{side} map is not well defined on torsion generator {generator}: image coordinate {row} is {entry}")]
    IllDefined {
        side: &'static str,
        generator: usize,
        row: usize,
        entry: String,
    },
    #[error("homology has a non-monomial invariant factor {divisor}")]
    NonMonomialDivisor { divisor: String },
    #[error("image generator {col} does not lie in the kernel")]
    ImageNotInKernel { col: usize },
}

/// ker(d_out) / im(d_in) split into cyclic summands, with enough bookkeeping
/// to express cycles of the middle module in the new summand coordinates.
#[derive(Clone, Debug)]
pub struct Homology {
    pub module: PresentedModule,
    /// Column j is a cycle of the middle module generating summand j.
    pub representatives: PolyMatrix,
    n: usize,
    k_left: PolyMatrix,
    k_diag: Vec<TauPoly>,
    q_left: PolyMatrix,
    q_diag: Vec<TauPoly>,
    keep: Vec<usize>,
}

impl Homology {
    /// Coordinates of a middle-module vector in the homology summands, or
    /// `None` when the vector is not a cycle.
    pub fn coordinates(&self, v: &[TauPoly]) -> Option<Vec<TauPoly>> {
        assert_eq!(
            v.len(),
            self.n,
            "vector length must match the middle module"
        );
        let x = self.kernel_coordinates(v)?;
        let h = self.q_left.mul_vec(&x);
        Some(
            self.keep
                .iter()
                .map(|&i| {
                    let d = &self.q_diag[i];
                    if d.is_zero() {
                        h[i].clone()
                    } else {
                        h[i].div_rem(d).1
                    }
                })
                .collect(),
        )
    }

    fn kernel_coordinates(&self, v: &[TauPoly]) -> Option<Vec<TauPoly>> {
        let w = self.k_left.mul_vec(v);
        let r = self.k_diag.len();
        if w[r..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut out = Vec::with_capacity(r);
        for (x, s) in w[..r].iter().zip(&self.k_diag) {
            let (q, rem) = x.div_rem(s);
            if !rem.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(out)
    }
}

fn check_dims(
    what: &'static str,
    m: &PolyMatrix,
    rows: usize,
    cols: usize,
) -> Result<(), AlgebraError> {
    if m.rows() != rows || m.cols() != cols {
        return Err(AlgebraError::DimensionMismatch {
            what,
            expected: format!("{rows}x{cols}"),
            found: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    Ok(())
}

fn check_well_defined(
    side: &'static str,
    source: &PresentedModule,
    target: &PresentedModule,
    d: &PolyMatrix,
) -> Result<(), AlgebraError> {
    for (j, o) in source.orders.iter().enumerate() {
        let Some(rel) = o.relation() else { continue };
        for i in 0..target.len() {
            let image = &(d.get(i, j) * &rel);
            let reduced = target.orders[i].reduce(image);
            if !reduced.is_zero() {
                return Err(AlgebraError::IllDefined {
                    side,
                    generator: j,
                    row: i,
                    entry: reduced.to_string(),
                });
            }
        }
    }
    Ok(())
}

/// Homology at the middle of `incoming --d_in--> middle --d_out--> outgoing`.
///
/// `d_in` is middle × incoming and `d_out` is outgoing × middle; torsion
/// relations of all three modules are respected.
pub fn homology(
    incoming: &PresentedModule,
    middle: &PresentedModule,
    outgoing: &PresentedModule,
    d_in: &PolyMatrix,
    d_out: &PolyMatrix,
) -> Result<Homology, AlgebraError> {
    let n = middle.len();
    check_dims("incoming map", d_in, n, incoming.len())?;
    check_dims("outgoing map", d_out, outgoing.len(), n)?;
    check_well_defined("incoming", incoming, middle, d_in)?;
    check_well_defined("outgoing", middle, outgoing, d_out)?;
    let comp = d_out.mul(d_in);
    for i in 0..comp.rows() {
        for j in 0..comp.cols() {
            let e = outgoing.orders[i].reduce(comp.get(i, j));
            if !e.is_zero() {
                return Err(AlgebraError::CompositionNonzero {
                    row: i,
                    col: j,
                    entry: e.to_string(),
                });
            }
        }
    }

    // Cycles: the projection of ker [d_out | R_out] onto the middle coordinates.
    let kernel_gens = if outgoing.is_empty() {
        PolyMatrix::identity(n)
    } else {
        let rel = PolyMatrix::from_columns(outgoing.len(), &outgoing.relation_columns());
        let a = d_out.hstack(&rel);
        let s = snf(&a);
        let rank = s.rank();
        s.right.block(0, n, rank, a.cols())
    };

    let k = snf(&kernel_gens);
    let r = k.rank();
    let k_diag: Vec<TauPoly> = k.diagonal[..r].to_vec();

    // Boundaries: im(d_in) plus the middle relations, in kernel coordinates.
    let mut boundary_cols: Vec<Vec<TauPoly>> = (0..d_in.cols()).map(|j| d_in.column(j)).collect();
    boundary_cols.extend(middle.relation_columns());

    let mut partial = Homology {
        module: PresentedModule::default(),
        representatives: PolyMatrix::zeros(n, 0),
        n,
        k_left: k.left.clone(),
        k_diag: k_diag.clone(),
        q_left: PolyMatrix::identity(r),
        q_diag: vec![TauPoly::zero(); r],
        keep: Vec::new(),
    };
    let mut x_cols = Vec::with_capacity(boundary_cols.len());
    for (j, col) in boundary_cols.iter().enumerate() {
        match partial.kernel_coordinates(col) {
            Some(x) => x_cols.push(x),
            None => return Err(AlgebraError::ImageNotInKernel { col: j }),
        }
    }
    let x = PolyMatrix::from_columns(r, &x_cols);
    let q = snf(&x);
    let mut q_diag: Vec<TauPoly> = q.diagonal.clone();
    q_diag.resize(r, TauPoly::zero());

    let mut orders = Vec::new();
    let mut keep = Vec::new();
    for (i, d) in q_diag.iter().enumerate() {
        if d.is_unit() {
            continue;
        }
        if d.is_zero() {
            orders.push(TauOrder::Free);
        } else {
            match d.monomial_exponent() {
                Some(v) => orders.push(TauOrder::Torsion(v)),
                None => {
                    return Err(AlgebraError::NonMonomialDivisor {
                        divisor: d.to_string(),
                    })
                }
            }
        }
        keep.push(i);
    }

    // Summand j is the kernel element with kernel coordinates q.left_inv[:, j],
    // and kernel basis vector i is k.left_inv[:, i] · k_diag[i].
    let basis = PolyMatrix::from_fn(n, r, |row, i| k.left_inv.get(row, i) * &k_diag[i]);
    let chosen = PolyMatrix::from_fn(r, keep.len(), |i, jj| q.left_inv.get(i, keep[jj]).clone());
    let representatives = basis.mul(&chosen);

    partial.module = PresentedModule::new(orders);
    partial.representatives = representatives;
    partial.q_left = q.left;
    partial.q_diag = q_diag;
    partial.keep = keep;
    Ok(partial)
}
