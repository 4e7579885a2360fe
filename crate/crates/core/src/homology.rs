//! Chain complexes of free `Z[t, t^-1]`-modules.
//!
//! Homology over the ring itself is not computed; instead ranks are taken over
//! the fraction field `Q(t)` and square presentations give torsion orders up
//! to units.
//!
//! Convention: a complex is stored top-down. `ranks = [r_n, .., r_0]` and
//! `differentials = [d_n, .., d_1]`, where `d_i` is an `r_{i-1} x r_i` matrix
//! acting on column vectors.

use std::fmt;

use thiserror::Error;

use crate::laurent::LaurentPoly;
use crate::matrix::{Matrix, MatrixError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("complex with ranks of length {ranks} needs {expected} differentials, got {got}")]
    DifferentialCount { ranks: usize, expected: usize, got: usize },
    #[error("differential d_{degree} has shape {rows}x{cols}, expected {want_rows}x{want_cols}")]
    Shape { degree: usize, rows: usize, cols: usize, want_rows: usize, want_cols: usize },
    #[error("d_{lower} · d_{upper} is not zero")]
    NotAComplex { lower: usize, upper: usize },
    #[error("presentation matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("presentation has rank {rank} < {size} over Q(t); the cokernel is not torsion")]
    NotTorsion { rank: usize, size: usize },
    #[error("division by zero in Q(t)")]
    DivisionByZero,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// An element `numerator / denominator` of `Q(t)`, kept unreduced apart from
/// cheap simplifications; equality is by cross-multiplication.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    numerator: LaurentPoly,
    denominator: LaurentPoly,
}

impl RationalFunction {
    pub fn new(numerator: LaurentPoly, denominator: LaurentPoly) -> Result<Self, HomologyError> {
        if denominator.is_zero() {
            return Err(HomologyError::DivisionByZero);
        }
        Ok(Self::simplified(numerator, denominator))
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        RationalFunction { numerator: p, denominator: LaurentPoly::one() }
    }

    pub fn zero() -> Self {
        Self::from_poly(LaurentPoly::zero())
    }

    fn simplified(numerator: LaurentPoly, denominator: LaurentPoly) -> Self {
        if numerator.is_zero() {
            return Self::zero();
        }
        if let Ok(Some(q)) = numerator.divide_exact(&denominator) {
            return Self::from_poly(q);
        }
        // absorb the unit part of the denominator into the numerator
        let (den, unit) = denominator.normalize_associate();
        RationalFunction { numerator: numerator.mul_unit(unit.inverse()), denominator: den }
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.numerator
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.denominator == other.denominator {
            return Self::simplified(&self.numerator + &other.numerator, self.denominator.clone());
        }
        Self::simplified(
            &self.numerator * &other.denominator + &other.numerator * &self.denominator,
            &self.denominator * &other.denominator,
        )
    }

    pub fn neg(&self) -> Self {
        RationalFunction { numerator: -&self.numerator, denominator: self.denominator.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::simplified(&self.numerator * &other.numerator, &self.denominator * &other.denominator)
    }

    pub fn div(&self, other: &Self) -> Result<Self, HomologyError> {
        if other.is_zero() {
            return Err(HomologyError::DivisionByZero);
        }
        Ok(Self::simplified(&self.numerator * &other.denominator, &self.denominator * &other.numerator))
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        &self.numerator * &other.denominator == &other.numerator * &self.denominator
    }
}

impl Eq for RationalFunction {}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator.is_one() {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "({}) / ({})", self.numerator, self.denominator)
        }
    }
}

/// Rank over `Q(t)` by Gaussian elimination with rational-function entries.
pub fn rank_qt(m: &Matrix) -> usize {
    let mut a: Vec<Vec<RationalFunction>> =
        (0..m.rows()).map(|i| m.row(i).iter().cloned().map(RationalFunction::from_poly).collect()).collect();
    let (rows, cols) = (m.rows(), m.cols());
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        for r in rank + 1..rows {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].div(&a[rank][col]).expect("pivot is nonzero");
            let (upper, lower) = a.split_at_mut(r);
            for (x, p) in lower[0][col..].iter_mut().zip(&upper[rank][col..]) {
                *x = x.sub(&factor.mul(p));
            }
        }
        rank += 1;
    }
    rank
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    ranks: Vec<usize>,
    differentials: Vec<Matrix>,
}

impl ChainComplex {
    /// Validates shapes and `d_{i-1} · d_i = 0`.
    pub fn new(ranks: Vec<usize>, differentials: Vec<Matrix>) -> Result<Self, HomologyError> {
        let expected = ranks.len().saturating_sub(1);
        if differentials.len() != expected {
            return Err(HomologyError::DifferentialCount { ranks: ranks.len(), expected, got: differentials.len() });
        }
        let top = expected;
        for (idx, d) in differentials.iter().enumerate() {
            let degree = top - idx;
            let (want_rows, want_cols) = (ranks[idx + 1], ranks[idx]);
            if d.rows() != want_rows || d.cols() != want_cols {
                return Err(HomologyError::Shape { degree, rows: d.rows(), cols: d.cols(), want_rows, want_cols });
            }
        }
        for idx in 0..differentials.len().saturating_sub(1) {
            let upper = &differentials[idx];
            let lower = &differentials[idx + 1];
            if !(lower * upper).is_zero() {
                let degree = top - idx;
                return Err(HomologyError::NotAComplex { lower: degree - 1, upper: degree });
            }
        }
        Ok(ChainComplex { ranks, differentials })
    }

    /// Ranks from the top degree down.
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn differentials(&self) -> &[Matrix] {
        &self.differentials
    }

    pub fn top_degree(&self) -> usize {
        self.ranks.len().saturating_sub(1)
    }
}

/// Betti numbers over `Q(t)`, listed from the top degree down.
pub fn betti_qt(c: &ChainComplex) -> Vec<usize> {
    let d_ranks: Vec<usize> = c.differentials.iter().map(rank_qt).collect();
    let n = c.ranks.len();
    (0..n)
        .map(|idx| {
            // outgoing d_i sits at index idx, incoming d_{i+1} at idx - 1
            let out = if idx < d_ranks.len() { d_ranks[idx] } else { 0 };
            let inc = if idx > 0 { d_ranks[idx - 1] } else { 0 };
            c.ranks[idx] - out - inc
        })
        .collect()
}

/// The order of `coker(m)`, as a canonical associate.
pub fn torsion_order(m: &Matrix) -> Result<LaurentPoly, HomologyError> {
    if !m.is_square() {
        return Err(HomologyError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let rank = rank_qt(m);
    if rank < m.rows() {
        return Err(HomologyError::NotTorsion { rank, size: m.rows() });
    }
    Ok(m.determinant()?.canonical())
}

fn alternating(values: impl Iterator<Item = usize>, top: usize) -> i64 {
    values.enumerate().map(|(idx, v)| if (top - idx).is_multiple_of(2) { v as i64 } else { -(v as i64) }).sum()
}

/// Chain-level Euler characteristic, `sum (-1)^i rank C_i`.
pub fn euler_chain(c: &ChainComplex) -> i64 {
    alternating(c.ranks.iter().copied(), c.top_degree())
}

pub fn euler_check(c: &ChainComplex) -> bool {
    euler_chain(c) == alternating(betti_qt(c).into_iter(), c.top_degree())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::tests::lp;
    use crate::matrix::tests::cofactor_det;
    use proptest::prelude::*;

    fn omt() -> LaurentPoly {
        LaurentPoly::one_minus_t()
    }

    fn one_by_one(p: LaurentPoly) -> Matrix {
        Matrix::from_rows(vec![vec![p]]).unwrap()
    }

    fn handle_complex() -> ChainComplex {
        ChainComplex::new(vec![1, 1, 1], vec![one_by_one(LaurentPoly::zero()), one_by_one(omt())]).unwrap()
    }

    /// Largest nonvanishing minor, by enumeration of row and column subsets.
    fn rank_by_minors(m: &Matrix) -> usize {
        let subsets = |n: usize, k: usize| -> Vec<Vec<usize>> {
            (0u32..1 << n)
                .filter(|s| s.count_ones() as usize == k)
                .map(|s| (0..n).filter(|i| s >> i & 1 == 1).collect())
                .collect()
        };
        for k in (1..=m.rows().min(m.cols())).rev() {
            for rs in subsets(m.rows(), k) {
                for cs in subsets(m.cols(), k) {
                    let sub = Matrix::from_rows(
                        rs.iter().map(|&r| cs.iter().map(|&c| m[(r, c)].clone()).collect()).collect(),
                    )
                    .unwrap();
                    if !cofactor_det(&sub).is_zero() {
                        return k;
                    }
                }
            }
        }
        0
    }

    #[test]
    fn rational_function_arithmetic() {
        let a = RationalFunction::new(LaurentPoly::one(), omt()).unwrap();
        let b = RationalFunction::new(LaurentPoly::t(), omt()).unwrap();
        // 1/(1-t) - t/(1-t) = 1
        assert_eq!(a.sub(&b), RationalFunction::from_poly(LaurentPoly::one()));
        assert_eq!(a.mul(&RationalFunction::from_poly(omt())), RationalFunction::from_poly(LaurentPoly::one()));
        assert!(RationalFunction::new(LaurentPoly::one(), LaurentPoly::zero()).is_err());
        assert!(a.div(&RationalFunction::zero()).is_err());
        let half = RationalFunction::new(LaurentPoly::one(), LaurentPoly::constant(2)).unwrap();
        assert_eq!(half.add(&half), RationalFunction::from_poly(LaurentPoly::one()));
    }

    #[test]
    fn rank_examples() {
        let h2 = crate::forms::h2_sum(1).into_matrix();
        assert_eq!(rank_qt(&h2), 2);
        assert_eq!(rank_qt(&one_by_one(omt())), 1);
        assert_eq!(rank_qt(&Matrix::zeros(2, 3)), 0);
        let dependent =
            Matrix::from_rows(vec![vec![omt(), LaurentPoly::t()], vec![&omt() * &omt(), &omt() * LaurentPoly::t()]])
                .unwrap();
        assert_eq!(rank_qt(&dependent), 1);
    }

    #[test]
    fn betti_examples() {
        assert_eq!(betti_qt(&handle_complex()), vec![1, 0, 0]);
        let zero = ChainComplex::new(vec![1, 1], vec![one_by_one(LaurentPoly::zero())]).unwrap();
        assert_eq!(betti_qt(&zero), vec![1, 1]);
        let two = ChainComplex::new(vec![1, 1], vec![one_by_one(LaurentPoly::constant(2))]).unwrap();
        assert_eq!(betti_qt(&two), vec![0, 0]);
    }

    #[test]
    fn complex_validation() {
        let e = ChainComplex::new(vec![1, 1, 1], vec![one_by_one(omt()), one_by_one(omt())]);
        assert_eq!(e, Err(HomologyError::NotAComplex { lower: 1, upper: 2 }));
        let e = ChainComplex::new(vec![2, 1], vec![one_by_one(omt())]);
        assert!(matches!(e, Err(HomologyError::Shape { degree: 1, .. })));
        let e = ChainComplex::new(vec![1, 1], vec![]);
        assert!(matches!(e, Err(HomologyError::DifferentialCount { .. })));
    }

    #[test]
    fn torsion_examples() {
        let d = Matrix::diagonal(vec![omt(), omt()]);
        let order = torsion_order(&d).unwrap();
        assert_eq!(order, (&omt() * &omt()).canonical());
        assert!(order.assoc_eq(&(&omt() * omt().involve())));
        assert!(torsion_order(&Matrix::identity(3)).unwrap().is_one());
        let d = Matrix::diagonal(vec![omt(), LaurentPoly::constant(2)]);
        assert_eq!(torsion_order(&d).unwrap(), lp(&[(0, 2), (1, -2)]));
        assert!(matches!(torsion_order(&Matrix::zeros(2, 2)), Err(HomologyError::NotTorsion { .. })));
        assert!(matches!(torsion_order(&Matrix::zeros(1, 2)), Err(HomologyError::NotSquare { .. })));
    }

    #[test]
    fn euler_examples() {
        assert!(euler_check(&handle_complex()));
        assert_eq!(euler_chain(&handle_complex()), 1);
        let empty = ChainComplex::new(vec![0], vec![]).unwrap();
        assert!(euler_check(&empty));
        // H_0 of the handle complex is Z: the augmented d_1 vanishes
        assert!(num_traits::Zero::is_zero(&omt().augment()));
    }

    proptest! {
        #[test]
        fn rank_matches_minor_oracle(
            entries in prop::collection::vec(crate::laurent::tests::arb_poly(1, 2), 12),
            rows in 1usize..=3,
            dup in any::<bool>(),
        ) {
            let cols = 12 / 3;
            let mut data: Vec<LaurentPoly> = entries[..rows * cols].to_vec();
            if dup && rows > 1 {
                // force a dependency: last row = (1 - t) · first row
                for c in 0..cols {
                    data[(rows - 1) * cols + c] = &omt() * &data[c];
                }
            }
            let m = Matrix::from_row_major(rows, cols, data).unwrap();
            prop_assert_eq!(rank_qt(&m), rank_by_minors(&m));
        }

        #[test]
        fn torsion_order_multiplicative(a in crate::laurent::tests::arb_poly(2, 3), b in crate::laurent::tests::arb_poly(2, 3)) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let ma = one_by_one(a.clone());
            let mb = Matrix::from_rows(vec![vec![b.clone(), LaurentPoly::one()], vec![LaurentPoly::zero(), omt()]]).unwrap();
            let sum = Matrix::block_diagonal(&[ma.clone(), mb.clone()]);
            let lhs = torsion_order(&sum).unwrap();
            let rhs = torsion_order(&ma).unwrap() * torsion_order(&mb).unwrap();
            prop_assert!(lhs.assoc_eq(&rhs));
        }

        #[test]
        fn euler_holds_for_random_complexes(
            x in prop::collection::vec(crate::laurent::tests::arb_poly(1, 2), 2),
            y in crate::laurent::tests::arb_poly(1, 2),
        ) {
            // d2 = (x0, x1)^T and d1 = y (x1, -x0), so d1 d2 = 0
            let d2 = Matrix::from_rows(vec![vec![x[0].clone()], vec![x[1].clone()]]).unwrap();
            let d1 = Matrix::from_rows(vec![vec![&y * &x[1], -(&y * &x[0])]]).unwrap();
            let c = ChainComplex::new(vec![1, 2, 1], vec![d2, d1]).unwrap();
            let b = betti_qt(&c);
            prop_assert_eq!(b.len(), 3);
            prop_assert!(euler_check(&c));
            prop_assert_eq!(euler_chain(&c), 0);
        }
    }
}
