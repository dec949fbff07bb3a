//! Smith normal form and homology over F2[τ], checked against determinants,
//! minors and brute-force linear algebra over F2.

use adams_chart::tau::{homology, poly_gcd, snf, PolyMatrix, PresentedModule, TauOrder, TauPoly};
use proptest::prelude::*;

fn poly() -> impl Strategy<Value = TauPoly> {
    // Degree at most 4, zero about a third of the time.
    prop_oneof![1 => Just(TauPoly::zero()), 2 => (0u64..32).prop_map(TauPoly::from_bits)]
}

/// Zero or a power of τ up to τ⁴, as chart differentials are.
fn monomial() -> impl Strategy<Value = TauPoly> {
    prop_oneof![1 => Just(TauPoly::zero()), 2 => (0u32..=4).prop_map(TauPoly::tau_pow)]
}

pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

pub fn matrix(max: usize) -> impl Strategy<Value = PolyMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(poly(), c), r).prop_map(PolyMatrix::from_rows)
    })
}

/// Determinant by permutation expansion; signs vanish in characteristic 2.
fn det(m: &PolyMatrix) -> TauPoly {
    fn go(m: &PolyMatrix, row: usize, used: &mut Vec<bool>) -> TauPoly {
        if row == m.rows() {
            return TauPoly::one();
        }
        let mut acc = TauPoly::zero();
        for j in 0..m.cols() {
            if used[j] || m.get(row, j).is_zero() {
                continue;
            }
            used[j] = true;
            acc = &acc + &(m.get(row, j) * &go(m, row + 1, used));
            used[j] = false;
        }
        acc
    }
    go(m, 0, &mut vec![false; m.cols()])
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
    out
}

fn minors_gcd(m: &PolyMatrix, k: usize) -> TauPoly {
    let mut g = TauPoly::zero();
    for rows in subsets(m.rows(), k) {
        for cols in subsets(m.cols(), k) {
            let sub = PolyMatrix::from_fn(k, k, |i, j| m.get(rows[i], cols[j]).clone());
            g = poly_gcd(&g, &det(&sub));
        }
    }
    g
}

fn is_identity(m: &PolyMatrix) -> bool {
    m == &PolyMatrix::identity(m.rows())
}

/// Diagonal form, divisibility chain, unimodular transforms and minors.
pub fn check_snf(m: &PolyMatrix) -> Result<(), TestCaseError> {
    let s = snf(m);
    let d = s.left.mul(m).mul(&s.right);
    for i in 0..d.rows() {
        for j in 0..d.cols() {
            let want = if i == j {
                s.diagonal[i].clone()
            } else {
                TauPoly::zero()
            };
            prop_assert_eq!(d.get(i, j), &want);
        }
    }
    for w in s.diagonal.windows(2) {
        prop_assert!(
            w[1].divisible_by(&w[0]),
            "{} does not divide {}",
            w[0],
            w[1]
        );
    }
    prop_assert!(is_identity(&s.left.mul(&s.left_inv)));
    prop_assert!(is_identity(&s.right.mul(&s.right_inv)));
    // The only unit of F2[τ] is 1.
    prop_assert!(det(&s.left).is_one());
    prop_assert!(det(&s.right).is_one());
    let mut product = TauPoly::one();
    for k in 1..=m.rows().min(m.cols()) {
        product = &product * &s.diagonal[k - 1];
        prop_assert_eq!(minors_gcd(m, k), product.clone(), "k = {}", k);
    }
    Ok(())
}

/// Rank over F2 of a list of row vectors.
fn f2_rank(mut rows: Vec<Vec<bool>>) -> usize {
    let mut rank = 0;
    let width = rows.first().map_or(0, Vec::len);
    for col in 0..width {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][col]) else {
            continue;
        };
        rows.swap(rank, p);
        for i in 0..rows.len() {
            if i != rank && rows[i][col] {
                let pivot = rows[rank].clone();
                for (a, b) in rows[i].iter_mut().zip(pivot) {
                    *a ^= b;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn transpose(m: &[Vec<bool>], rows: usize, cols: usize) -> Vec<Vec<bool>> {
    (0..cols)
        .map(|j| (0..rows).map(|i| m[i][j]).collect())
        .collect()
}

/// dim ker(out) - rank(in) for F2 matrices given as target × source.
fn f2_homology(
    d_in: &[Vec<bool>],
    d_out: &[Vec<bool>],
    n_in: usize,
    n: usize,
    n_out: usize,
) -> usize {
    let rank_out = f2_rank(transpose(d_out, n_out, n));
    let rank_in = f2_rank(transpose(d_in, n, n_in));
    n - rank_out - rank_in
}

#[derive(Clone, Copy, Debug)]
pub enum Mode {
    Torsion,
    Mixed,
    Free,
}

pub fn order_strategy(mode: Mode) -> BoxedStrategy<TauOrder> {
    match mode {
        Mode::Torsion => (1u32..=4).prop_map(TauOrder::Torsion).boxed(),
        Mode::Mixed => {
            prop_oneof![Just(TauOrder::Free), (1u32..=4).prop_map(TauOrder::Torsion)].boxed()
        }
        Mode::Free => Just(TauOrder::Free).boxed(),
    }
}

/// A map `source → target` that respects the torsion of both sides.
fn well_defined(source: &[TauOrder], target: &[TauOrder], raw: &[Vec<TauPoly>]) -> PolyMatrix {
    PolyMatrix::from_fn(target.len(), source.len(), |i, j| {
        let p = &raw[i][j];
        match (source[j], target[i]) {
            (TauOrder::Free, t) => t.reduce(p),
            (TauOrder::Torsion(_), TauOrder::Free) => TauPoly::zero(),
            (TauOrder::Torsion(k), TauOrder::Torsion(l)) => {
                TauOrder::Torsion(l).reduce(&(&TauPoly::tau_pow(l.saturating_sub(k)) * p))
            }
        }
    })
}

/// A three-term complex whose incoming map hits cycles of the outgoing one.
#[derive(Clone, Debug)]
pub struct Complex {
    incoming: Vec<TauOrder>,
    middle: Vec<TauOrder>,
    outgoing: Vec<TauOrder>,
    d_in: PolyMatrix,
    d_out: PolyMatrix,
}

pub fn complex(mode: Mode) -> impl Strategy<Value = Complex> {
    (
        prop::collection::vec(order_strategy(mode), 1..=4),
        prop::collection::vec(order_strategy(mode), 0..=3),
        0usize..=3,
    )
        .prop_flat_map(move |(middle, outgoing, n_in)| {
            let raw_out = prop::collection::vec(
                prop::collection::vec(monomial(), middle.len()),
                outgoing.len(),
            );
            let coeffs =
                prop::collection::vec(prop::collection::vec(monomial(), middle.len()), n_in);
            (Just(middle), Just(outgoing), raw_out, coeffs)
        })
        .prop_map(|(middle, outgoing, raw_out, coeffs)| {
            let d_out = well_defined(&middle, &outgoing, &raw_out);
            let n = middle.len();
            let cycles = homology(
                &PresentedModule::default(),
                &PresentedModule::new(middle.clone()),
                &PresentedModule::new(outgoing.clone()),
                &PolyMatrix::zeros(n, 0),
                &d_out,
            )
            .map_or_else(|_| PolyMatrix::zeros(n, 0), |h| h.representatives);
            // Free incoming generators sent to combinations of cycles.
            let combos =
                PolyMatrix::from_fn(cycles.cols(), coeffs.len(), |i, j| coeffs[j][i % n].clone());
            let d_in = reduce_matrix(&middle, &cycles.mul(&combos));
            Complex {
                incoming: vec![TauOrder::Free; coeffs.len()],
                middle,
                outgoing,
                d_in,
                d_out,
            }
        })
}

fn reduce_matrix(orders: &[TauOrder], m: &PolyMatrix) -> PolyMatrix {
    PolyMatrix::from_fn(m.rows(), m.cols(), |i, j| orders[i].reduce(m.get(i, j)))
}

fn run(c: &Complex) -> Result<Vec<TauOrder>, String> {
    let h = homology(
        &PresentedModule::new(c.incoming.clone()),
        &PresentedModule::new(c.middle.clone()),
        &PresentedModule::new(c.outgoing.clone()),
        &c.d_in,
        &c.d_out,
    )
    .map_err(|e| e.to_string())?;
    let mut o = h.module.orders;
    o.sort();
    Ok(o)
}

/// Expands a module into F2 coordinates τ^a·g_i, a below the order (or
/// below `free_depth` for free generators).
fn expansion(orders: &[TauOrder], free_depth: u32) -> Vec<(usize, u32)> {
    let mut v = Vec::new();
    for (i, o) in orders.iter().enumerate() {
        let depth = match o {
            TauOrder::Free => free_depth,
            TauOrder::Torsion(k) => *k,
        };
        v.extend((0..depth).map(|a| (i, a)));
    }
    v
}

/// The F2 matrix of `m` between expansions, target × source.
fn expand(
    m: &PolyMatrix,
    src: &[(usize, u32)],
    tgt: &[(usize, u32)],
    tgt_orders: &[TauOrder],
) -> Vec<Vec<bool>> {
    let mut out = vec![vec![false; src.len()]; tgt.len()];
    for (col, &(j, a)) in src.iter().enumerate() {
        for (row, &(i, b)) in tgt.iter().enumerate() {
            let image = tgt_orders[i].reduce(&(&TauPoly::tau_pow(a) * m.get(i, j)));
            out[row][col] = image.coeff(b);
        }
    }
    out
}

/// Keeps only the rows and columns of free generators.
fn free_part(m: &PolyMatrix, rows: &[TauOrder], cols: &[TauOrder], at_one: bool) -> Vec<Vec<bool>> {
    let e = m.evaluate(at_one);
    (0..rows.len())
        .filter(|&i| rows[i].is_free())
        .map(|i| {
            (0..cols.len())
                .filter(|&j| cols[j].is_free())
                .map(|j| e[i][j])
                .collect()
        })
        .collect()
}

fn count_free(o: &[TauOrder]) -> usize {
    o.iter().filter(|x| x.is_free()).count()
}

fn checked(c: &Complex) -> Result<Vec<TauOrder>, TestCaseError> {
    run(c).map_err(|_| TestCaseError::reject("non-monomial divisor"))
}

/// Total torsion length equals the F2 dimension of the expanded complex.
pub fn check_torsion_brute_force(c: &Complex) -> Result<(), TestCaseError> {
    let orders = checked(c)?;
    let depth = 4 + 4 + 4;
    let (src, mid) = (expansion(&c.incoming, depth), expansion(&c.middle, depth));
    let out = expansion(&c.outgoing, depth);
    let d_in = expand(&c.d_in, &src, &mid, &c.middle);
    let d_out = expand(&c.d_out, &mid, &out, &c.outgoing);
    let want = f2_homology(&d_in, &d_out, src.len(), mid.len(), out.len());
    let mut got = 0;
    for o in &orders {
        match o {
            TauOrder::Torsion(k) => got += *k as usize,
            TauOrder::Free => prop_assert!(false, "free summand from a torsion complex"),
        }
    }
    prop_assert_eq!(got, want);
    Ok(())
}

/// Free summands equal the homology of the free part at τ = 1.
pub fn check_tau_one(c: &Complex) -> Result<(), TestCaseError> {
    let orders = checked(c)?;
    let (n_in, n, n_out) = (
        count_free(&c.incoming),
        count_free(&c.middle),
        count_free(&c.outgoing),
    );
    let d_in = free_part(&c.d_in, &c.middle, &c.incoming, true);
    let d_out = free_part(&c.d_out, &c.outgoing, &c.middle, true);
    // Setting τ = 1 computes the rank over F2(τ) only when no invariant
    // factor of the free part vanishes there.
    let faithful = |m: &PolyMatrix, rows: &[TauOrder], cols: &[TauOrder]| {
        let r: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].is_free()).collect();
        let c: Vec<usize> = (0..cols.len()).filter(|&j| cols[j].is_free()).collect();
        r.is_empty() || c.is_empty() || {
            let sub = PolyMatrix::from_fn(r.len(), c.len(), |i, j| m.get(r[i], c[j]).clone());
            snf(&sub)
                .diagonal
                .iter()
                .all(|d| d.is_zero() || d.eval_at_one())
        }
    };
    prop_assume!(
        faithful(&c.d_in, &c.middle, &c.incoming) && faithful(&c.d_out, &c.outgoing, &c.middle)
    );
    prop_assert_eq!(
        count_free(&orders),
        f2_homology(&d_in, &d_out, n_in, n, n_out)
    );
    Ok(())
}

/// For free complexes, homology at τ = 0 by universal coefficients.
pub fn check_tau_zero(c: &Complex) -> Result<(), TestCaseError> {
    let orders = checked(c)?;
    let (n_in, n, n_out) = (c.incoming.len(), c.middle.len(), c.outgoing.len());
    let at_zero = f2_homology(
        &c.d_in.evaluate(false),
        &c.d_out.evaluate(false),
        n_in,
        n,
        n_out,
    );
    // H(C ⊗ F2) = H(C) ⊗ F2 ⊕ Tor(coker d_out, F2).
    let tor = if n_out == 0 {
        0
    } else {
        snf(&c.d_out)
            .diagonal
            .iter()
            .filter(|d| !d.is_zero() && !d.eval_at_zero())
            .count()
    };
    prop_assert_eq!(orders.len() + tor, at_zero);
    Ok(())
}

/// Shuffling the middle generators leaves the homology alone.
pub fn check_permutation(c: &Complex, seed: u64) -> Result<(), TestCaseError> {
    let orders = checked(c)?;
    let n = c.middle.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut s = seed;
    for i in (1..n).rev() {
        s = s
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        perm.swap(i, (s >> 33) as usize % (i + 1));
    }
    let shuffled = Complex {
        middle: perm.iter().map(|&p| c.middle[p]).collect(),
        d_in: PolyMatrix::from_fn(n, c.d_in.cols(), |i, j| c.d_in.get(perm[i], j).clone()),
        d_out: PolyMatrix::from_fn(c.d_out.rows(), n, |i, j| c.d_out.get(i, perm[j]).clone()),
        ..c.clone()
    };
    prop_assert_eq!(run(&shuffled), Ok(orders));
    Ok(())
}

/// Zero maps on both sides return the middle module.
pub fn check_zero_maps(
    middle: &[TauOrder],
    n_in: usize,
    n_out: usize,
) -> Result<(), TestCaseError> {
    let c = Complex {
        incoming: vec![TauOrder::Free; n_in],
        outgoing: vec![TauOrder::Free; n_out],
        d_in: PolyMatrix::zeros(middle.len(), n_in),
        d_out: PolyMatrix::zeros(n_out, middle.len()),
        middle: middle.to_vec(),
    };
    let mut want = middle.to_vec();
    want.sort();
    prop_assert_eq!(run(&c), Ok(want));
    Ok(())
}
