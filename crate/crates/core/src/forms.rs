//! Hermitian forms over `Z[t, t^-1]` and the reduction of block forms
//!
//! ```text
//!     [ 0        1 - t                       ]
//!     [ 1 - t^-1 c (1 - t) + c̄ (1 - t^-1)    ]
//! ```
//!
//! to the standard surface form `H2 = [[0, 1 - t], [1 - t^-1, 0]]`, with an
//! explicit, replayable base change as certificate.

use std::fmt;

use thiserror::Error;

use crate::laurent::{LaurentPoly, UnitWitness};
use crate::matrix::{Matrix, MatrixError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("matrix is not Hermitian: entry ({i},{j}) is not the involution of entry ({j},{i})")]
    NotHermitian { i: usize, j: usize },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("polynomial {0} is not fixed by the involution")]
    NotInvolutionFixed(LaurentPoly),
    #[error("base change is not invertible: determinant {0} is not a unit")]
    NotInvertible(LaurentPoly),
    #[error("internal certificate check failed at the {gate:?} gate: {detail}")]
    InternalCheck { gate: Gate, detail: String },
}

/// A square matrix `A` over the ring with `A = A*`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HermitianForm {
    matrix: Matrix,
}

impl HermitianForm {
    pub fn new(matrix: Matrix) -> Result<Self, FormError> {
        if !matrix.is_square() {
            return Err(MatrixError::NotSquare { rows: matrix.rows(), cols: matrix.cols() }.into());
        }
        let n = matrix.rows();
        for i in 0..n {
            for j in i..n {
                if matrix[(i, j)] != matrix[(j, i)].involve() {
                    return Err(FormError::NotHermitian { i, j });
                }
            }
        }
        Ok(HermitianForm { matrix })
    }

    /// Skips the symmetry check; callers guarantee `matrix = matrix*`.
    pub(crate) fn new_unchecked(matrix: Matrix) -> Self {
        debug_assert!(HermitianForm::new(matrix.clone()).is_ok());
        HermitianForm { matrix }
    }

    pub fn from_rows(rows: Vec<Vec<LaurentPoly>>) -> Result<Self, FormError> {
        Self::new(Matrix::from_rows(rows)?)
    }

    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.matrix[(i, j)]
    }

    pub fn determinant(&self) -> LaurentPoly {
        determinant(self)
    }

    /// Orthogonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &HermitianForm) -> HermitianForm {
        HermitianForm { matrix: Matrix::block_diagonal(&[self.matrix.clone(), other.matrix.clone()]) }
    }

    pub(crate) fn matrix_mut(&mut self) -> &mut Matrix {
        &mut self.matrix
    }
}

impl fmt::Display for HermitianForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.matrix.fmt(f)
    }
}

/// `[[0, 1 - t], [1 - t^-1, d]]`.
pub fn a_block(d: LaurentPoly) -> Result<HermitianForm, FormError> {
    let omt = LaurentPoly::one_minus_t();
    HermitianForm::from_rows(vec![vec![LaurentPoly::zero(), omt.clone()], vec![omt.involve(), d]])
}

/// `c (1 - t) + c̄ (1 - t^-1)`.
pub fn hermitian_zero_aug(c: &LaurentPoly) -> LaurentPoly {
    let omt = LaurentPoly::one_minus_t();
    c * &omt + c.involve() * omt.involve()
}

/// The A-form block with parameter `c`.
pub fn a_block_for(c: &LaurentPoly) -> HermitianForm {
    a_block(hermitian_zero_aug(c)).expect("c(1-t) + c̄(1-t^-1) is involution-fixed")
}

/// The standard surface form `H2`, summed `g` times.
pub fn h2_sum(g: usize) -> HermitianForm {
    let h2 = a_block(LaurentPoly::zero()).expect("H2 is Hermitian").into_matrix();
    HermitianForm { matrix: Matrix::block_diagonal(&vec![h2; g]) }
}

/// `P · A · P*`.
pub fn congruence(p: &Matrix, a: &HermitianForm) -> Result<HermitianForm, FormError> {
    if !p.is_square() {
        return Err(MatrixError::NotSquare { rows: p.rows(), cols: p.cols() }.into());
    }
    if p.rows() != a.rank() {
        return Err(FormError::RankMismatch { left: p.rows(), right: a.rank() });
    }
    let m = &(p * a.matrix()) * &p.star();
    Ok(HermitianForm::new_unchecked(m))
}

pub fn determinant(a: &HermitianForm) -> LaurentPoly {
    a.matrix().determinant().expect("forms are square")
}

/// `(1 - t)^g (1 - t^-1)^g`, the determinant an A-form of genus `g` must
/// match up to units.
pub fn a_form_determinant_target(g: usize) -> LaurentPoly {
    let omt = LaurentPoly::one_minus_t();
    (&omt * &omt.involve()).pow(g as u32)
}

/// Solves `c (1 - t) + c̄ (1 - t^-1) = d` for involution-fixed `d`.
///
/// Writes `d = m_0 s_0 + sum_{r>=1} m_r s_r` with `s_0 = 2`, `s_r = t^r + t^-r`
/// and returns `c = sum_r M_r t^r` for the partial sums `M_r = m_0 + .. + m_r`.
/// A solution exists exactly when `d` has augmentation zero.
pub fn solve_hermitian_zero_aug(d: &LaurentPoly) -> Result<Option<LaurentPoly>, FormError> {
    if !d.is_involution_fixed() {
        return Err(FormError::NotInvolutionFixed(d.clone()));
    }
    if !num_traits::Zero::is_zero(&d.augment()) {
        return Ok(None);
    }
    let top = d.max_exponent().unwrap_or(0);
    // augment(d) = 0 forces the constant term to be even
    let m0: num_bigint::BigInt = d.coeff(0) / 2;
    let mut partial = m0;
    let mut coeffs = vec![partial.clone()];
    for r in 1..=top {
        partial += d.coeff(r);
        coeffs.push(partial.clone());
    }
    let c = LaurentPoly::from_dense(0, coeffs);
    debug_assert_eq!(&hermitian_zero_aug(&c), d);
    Ok(Some(c))
}

/// Recovers `c_1..c_g` when `a` is block diagonal in consecutive A-form blocks
/// with off-diagonal entries exactly `1 - t` and `1 - t^-1`.
pub fn recognize_a_form(a: &HermitianForm) -> Option<Vec<LaurentPoly>> {
    let n = a.rank();
    if !n.is_multiple_of(2) {
        return None;
    }
    let omt = LaurentPoly::one_minus_t();
    for i in 0..n {
        for j in 0..n {
            if i / 2 != j / 2 && !a.entry(i, j).is_zero() {
                return None;
            }
        }
    }
    (0..n / 2)
        .map(|k| {
            let (r, s) = (2 * k, 2 * k + 1);
            if !a.entry(r, r).is_zero() || *a.entry(r, s) != omt {
                return None;
            }
            // Hermitian symmetry gives the (s, r) entry
            solve_hermitian_zero_aug(a.entry(s, s)).ok().flatten()
        })
        .collect()
}

/// A base change `P` with `det P = ±t^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseChange {
    matrix: Matrix,
    determinant_witness: UnitWitness,
}

impl BaseChange {
    pub fn new(matrix: Matrix) -> Result<Self, FormError> {
        let det = matrix.determinant()?;
        match det.is_unit() {
            Some(w) => Ok(BaseChange { matrix, determinant_witness: w }),
            None => Err(FormError::NotInvertible(det)),
        }
    }

    pub fn identity(n: usize) -> Self {
        BaseChange { matrix: Matrix::identity(n), determinant_witness: UnitWitness::ONE }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn determinant_witness(&self) -> UnitWitness {
        self.determinant_witness
    }

    /// `self` applied after `first`: the matrix `self · first`.
    pub fn after(&self, first: &BaseChange) -> BaseChange {
        BaseChange {
            matrix: &self.matrix * &first.matrix,
            determinant_witness: self.determinant_witness * first.determinant_witness,
        }
    }

    pub fn apply(&self, a: &HermitianForm) -> Result<HermitianForm, FormError> {
        congruence(&self.matrix, a)
    }
}

/// Options for [`reduce_to_standard_with`] and [`verify_main_strategy`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReduceOptions {
    /// Rescale basis vectors by units `±t^k` so that each block's
    /// off-diagonal entry becomes exactly `1 - t` before recognition.
    pub prenormalize: bool,
}

/// Evidence that a form is isometric to `H2^g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MainStrategyCertificate {
    pub form: HermitianForm,
    pub genus: usize,
    pub c_list: Vec<LaurentPoly>,
    pub reduction: BaseChange,
    pub det_canonical: LaurentPoly,
    pub target_canonical: LaurentPoly,
}

impl MainStrategyCertificate {
    /// Re-runs every check on the stored data.
    pub fn replay(&self) -> Result<(), FormError> {
        let reduced = self.reduction.apply(&self.form)?;
        if reduced != h2_sum(self.genus) {
            return Err(FormError::InternalCheck {
                gate: Gate::Reduction, detail: "P·A·P* differs from H2^g".into()
            });
        }
        if self.reduction.matrix().determinant()?.is_unit().is_none() {
            return Err(FormError::InternalCheck { gate: Gate::Reduction, detail: "det P is not a unit".into() });
        }
        if self.form.determinant().canonical() != self.det_canonical || self.det_canonical != self.target_canonical {
            return Err(FormError::InternalCheck {
                gate: Gate::Determinant,
                detail: format!("det A ≐ {} but the target is {}", self.det_canonical, self.target_canonical),
            });
        }
        Ok(())
    }
}

/// Rescales basis vector `2k+1` of each block by the unit `w` for which the
/// block's `(2k, 2k+1)` entry equals `w (1 - t)`. Returns the rescaled form and
/// the diagonal base change used; blocks that do not fit are left alone.
pub fn prenormalize(a: &HermitianForm) -> (HermitianForm, BaseChange) {
    let n = a.rank();
    let omt = LaurentPoly::one_minus_t();
    let mut diag = vec![LaurentPoly::one(); n];
    let mut witness = UnitWitness::ONE;
    for k in 0..n / 2 {
        let entry = a.entry(2 * k, 2 * k + 1);
        if entry.is_zero() {
            continue;
        }
        if let Some(w) = entry.divide_exact(&omt).ok().flatten().and_then(|q| q.is_unit()) {
            // entry · w̄ = w (1 - t) w̄ = 1 - t
            diag[2 * k + 1] = w.to_poly();
            witness = witness * w;
        }
    }
    let d = BaseChange { matrix: Matrix::diagonal(diag), determinant_witness: witness };
    let scaled = d.apply(a).expect("ranks agree");
    (scaled, d)
}

/// The block base change `⊕_k [[1, 0], [-c_k, 1]]`.
pub fn reduction_matrix(c_list: &[LaurentPoly]) -> BaseChange {
    let blocks: Vec<Matrix> = c_list
        .iter()
        .map(|c| {
            Matrix::from_rows(vec![vec![LaurentPoly::one(), LaurentPoly::zero()], vec![-c, LaurentPoly::one()]])
                .expect("2x2")
        })
        .collect();
    BaseChange { matrix: Matrix::block_diagonal(&blocks), determinant_witness: UnitWitness::ONE }
}

pub fn reduce_to_standard(a: &HermitianForm) -> Result<Option<MainStrategyCertificate>, FormError> {
    reduce_to_standard_with(a, ReduceOptions::default())
}

pub fn reduce_to_standard_with(
    a: &HermitianForm,
    opts: ReduceOptions,
) -> Result<Option<MainStrategyCertificate>, FormError> {
    let (working, pre) = if opts.prenormalize { prenormalize(a) } else { (a.clone(), BaseChange::identity(a.rank())) };
    let Some(c_list) = recognize_a_form(&working) else {
        return Ok(None);
    };
    let genus = c_list.len();
    let reduction = reduction_matrix(&c_list).after(&pre);

    let reduced = reduction.apply(a)?;
    if reduced != h2_sum(genus) {
        return Err(FormError::InternalCheck {
            gate: Gate::Reduction,
            detail: format!("P·A·P* = {reduced} is not H2^{genus}"),
        });
    }
    let det_canonical = a.determinant().canonical();
    let target_canonical = a_form_determinant_target(genus).canonical();
    if det_canonical != target_canonical {
        return Err(FormError::InternalCheck {
            gate: Gate::Determinant,
            detail: format!("det A ≐ {det_canonical} but an A-form of genus {genus} needs {target_canonical}"),
        });
    }
    Ok(Some(MainStrategyCertificate { form: a.clone(), genus, c_list, reduction, det_canonical, target_canonical }))
}

/// Checks `det(B A B*) = det(B) det(A) conj(det(B))`, computing both sides
/// independently.
pub fn det_chain_check(b: &Matrix, a: &HermitianForm) -> Result<bool, FormError> {
    let lhs = congruence(b, a)?.determinant();
    let db = b.determinant()?;
    let rhs = &db * a.determinant() * db.involve();
    Ok(lhs == rhs)
}

/// Checks run by [`verify_main_strategy`], in order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    Recognition,
    Reduction,
    Determinant,
}

impl Gate {
    pub fn describe(self) -> &'static str {
        match self {
            Gate::Recognition => "recognition failed",
            Gate::Reduction => "reduction replay failed",
            Gate::Determinant => "determinant not associate to (1-t)^g(1-t^-1)^g",
        }
    }
}

pub const UNKNOTTED_LABEL: &str = "isometric to ⊕_g H₂ ⇒ topologically unknotted (intersection-form criterion)";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub accepted: bool,
    pub certificate: Option<MainStrategyCertificate>,
    pub failed_gate: Option<Gate>,
    pub det_canonical: LaurentPoly,
    /// Whether `det A` is associate to `(1-t)^g (1-t^-1)^g` with `g = rank/2`.
    pub det_compatible: bool,
    pub label: Option<&'static str>,
}

impl Verdict {
    pub fn genus(&self) -> Option<usize> {
        self.certificate.as_ref().map(|c| c.genus)
    }
}

/// Recognize, reduce and check the determinant; reports the first failing gate.
pub fn verify_main_strategy(a: &HermitianForm, opts: ReduceOptions) -> Verdict {
    let det_canonical = a.determinant().canonical();
    let det_compatible = a.rank().is_multiple_of(2) && det_canonical == a_form_determinant_target(a.rank() / 2).canonical();
    let reject = |gate: Gate| Verdict {
        accepted: false,
        certificate: None,
        failed_gate: Some(gate),
        det_canonical: det_canonical.clone(),
        det_compatible,
        label: None,
    };
    let (working, _) = if opts.prenormalize { prenormalize(a) } else { (a.clone(), BaseChange::identity(a.rank())) };
    if recognize_a_form(&working).is_none() {
        return reject(Gate::Recognition);
    }
    match reduce_to_standard_with(a, opts) {
        Ok(Some(cert)) => Verdict {
            accepted: true,
            certificate: Some(cert),
            failed_gate: None,
            det_canonical,
            det_compatible,
            label: Some(UNKNOTTED_LABEL),
        },
        Ok(None) => reject(Gate::Recognition),
        Err(FormError::InternalCheck { gate, .. }) => reject(gate),
        Err(_) => reject(Gate::Reduction),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::tests::{arb_poly, lp};
    use crate::matrix::tests::arb_matrix;
    use proptest::prelude::*;

    fn two_minus() -> LaurentPoly {
        lp(&[(-1, -1), (0, 2), (1, -1)])
    }

    fn reference_matrix() -> HermitianForm {
        a_block(two_minus()).unwrap()
    }

    fn int(rows: &[Vec<i64>]) -> Matrix {
        Matrix::from_integers(rows).unwrap()
    }

    #[test]
    fn h2_sum_shapes() {
        let h = h2_sum(1);
        assert_eq!(h.entry(0, 1), &LaurentPoly::one_minus_t());
        assert_eq!(h.entry(1, 0), &lp(&[(0, 1), (-1, -1)]));
        assert!(h.entry(0, 0).is_zero() && h.entry(1, 1).is_zero());
        assert_eq!(h2_sum(0).rank(), 0);
        let h2 = h2_sum(2);
        assert_eq!(h2.rank(), 4);
        assert_eq!(h2.entry(2, 3), &LaurentPoly::one_minus_t());
        assert!(h2.entry(0, 3).is_zero());
        assert!(h2.matrix().augment().iter().flatten().all(num_traits::Zero::is_zero));
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = Matrix::from_rows(vec![
            vec![LaurentPoly::zero(), LaurentPoly::one_minus_t()],
            vec![LaurentPoly::one_minus_t(), LaurentPoly::zero()],
        ])
        .unwrap();
        assert_eq!(HermitianForm::new(m), Err(FormError::NotHermitian { i: 0, j: 1 }));
        let m = Matrix::from_rows(vec![vec![LaurentPoly::t()]]).unwrap();
        assert!(HermitianForm::new(m).is_err());
    }

    #[test]
    fn congruence_examples() {
        let p = int(&[vec![1, 0], vec![-1, 1]]);
        assert_eq!(congruence(&p, &reference_matrix()).unwrap(), h2_sum(1));
        assert_eq!(congruence(&Matrix::identity(2), &reference_matrix()).unwrap(), reference_matrix());
        let swap = int(&[vec![0, 1], vec![1, 0]]);
        let expected = HermitianForm::from_rows(vec![
            vec![LaurentPoly::zero(), lp(&[(0, 1), (-1, -1)])],
            vec![LaurentPoly::one_minus_t(), LaurentPoly::zero()],
        ])
        .unwrap();
        assert_eq!(congruence(&swap, &h2_sum(1)).unwrap(), expected);
        assert_eq!(congruence(&Matrix::identity(3), &h2_sum(1)), Err(FormError::RankMismatch { left: 3, right: 2 }));
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(determinant(&h2_sum(1)), -two_minus());
        let d = lp(&[(-2, 7), (0, 3), (2, 7)]);
        assert_eq!(determinant(&a_block(d).unwrap()), -two_minus());
        assert_eq!(determinant(&h2_sum(2)), two_minus().pow(2));
    }

    #[test]
    fn solve_examples() {
        assert_eq!(solve_hermitian_zero_aug(&two_minus()).unwrap(), Some(LaurentPoly::one()));
        assert_eq!(solve_hermitian_zero_aug(&LaurentPoly::zero()).unwrap(), Some(LaurentPoly::zero()));
        assert_eq!(solve_hermitian_zero_aug(&lp(&[(-1, 1), (0, 2), (1, 1)])).unwrap(), None);
        assert!(matches!(solve_hermitian_zero_aug(&LaurentPoly::t()), Err(FormError::NotInvolutionFixed(_))));
    }

    #[test]
    fn recognize_examples() {
        assert_eq!(recognize_a_form(&reference_matrix()), Some(vec![LaurentPoly::one()]));
        assert_eq!(recognize_a_form(&h2_sum(3)), Some(vec![LaurentPoly::zero(); 3]));
        let opt = lp(&[(0, 1), (1, 1)]);
        let bad = HermitianForm::from_rows(vec![
            vec![LaurentPoly::zero(), opt.clone()],
            vec![opt.involve(), LaurentPoly::zero()],
        ])
        .unwrap();
        assert_eq!(recognize_a_form(&bad), None);
        // odd rank, nonzero cross-block entry, bad diagonal
        assert_eq!(recognize_a_form(&HermitianForm::from_rows(vec![vec![LaurentPoly::zero()]]).unwrap()), None);
        let mut cross = h2_sum(2).into_matrix();
        cross[(0, 2)] = LaurentPoly::one();
        cross[(2, 0)] = LaurentPoly::one();
        assert_eq!(recognize_a_form(&HermitianForm::new(cross).unwrap()), None);
        assert_eq!(recognize_a_form(&a_block(LaurentPoly::constant(2)).unwrap()), None);
    }

    #[test]
    fn reduce_examples() {
        let cert = reduce_to_standard(&reference_matrix()).unwrap().unwrap();
        assert_eq!(cert.genus, 1);
        assert_eq!(cert.reduction.matrix(), &int(&[vec![1, 0], vec![-1, 1]]));
        cert.replay().unwrap();

        let cert = reduce_to_standard(&h2_sum(2)).unwrap().unwrap();
        assert_eq!(cert.reduction.matrix(), &Matrix::identity(4));

        let c = lp(&[(0, 1), (1, 1)]);
        let d = &c * LaurentPoly::one_minus_t() + c.involve() * LaurentPoly::one_minus_t().involve();
        let cert = reduce_to_standard(&a_block(d).unwrap()).unwrap().unwrap();
        assert_eq!(cert.c_list, vec![c]);
        cert.replay().unwrap();

        assert_eq!(reduce_to_standard(&HermitianForm::new(Matrix::identity(2)).unwrap()).unwrap(), None);
    }

    #[test]
    fn prenormalization_absorbs_units() {
        // off-diagonal -t^2 (1 - t) instead of 1 - t
        let w = lp(&[(2, -1)]);
        let off = &w * LaurentPoly::one_minus_t();
        let a =
            HermitianForm::from_rows(vec![vec![LaurentPoly::zero(), off.clone()], vec![off.involve(), two_minus()]])
                .unwrap();
        assert_eq!(reduce_to_standard(&a).unwrap(), None);
        let cert = reduce_to_standard_with(&a, ReduceOptions { prenormalize: true }).unwrap().unwrap();
        assert_eq!(cert.form, a);
        cert.replay().unwrap();
        assert_eq!(cert.reduction.determinant_witness().to_poly(), w);
        assert!(verify_main_strategy(&a, ReduceOptions { prenormalize: true }).accepted);
        assert!(!verify_main_strategy(&a, ReduceOptions::default()).accepted);
    }

    #[test]
    fn det_chain_examples() {
        let b = Matrix::from_rows(vec![
            vec![LaurentPoly::t(), LaurentPoly::zero()],
            vec![LaurentPoly::one(), LaurentPoly::constant(-1)],
        ])
        .unwrap();
        assert!(det_chain_check(&b, &h2_sum(1)).unwrap());
        assert!(det_chain_check(&Matrix::identity(2), &reference_matrix()).unwrap());
        assert!(det_chain_check(&Matrix::identity(3), &reference_matrix()).is_err());
    }

    #[test]
    fn verify_examples() {
        let v = verify_main_strategy(&reference_matrix(), ReduceOptions::default());
        assert!(v.accepted);
        assert_eq!(v.genus(), Some(1));
        assert_eq!(v.label, Some(UNKNOTTED_LABEL));

        let c = lp(&[(0, 1), (1, 1)]);
        let v = verify_main_strategy(&a_block_for(&c), ReduceOptions::default());
        assert!(v.accepted);

        let v = verify_main_strategy(&HermitianForm::new(Matrix::identity(2)).unwrap(), ReduceOptions::default());
        assert!(!v.accepted);
        assert_eq!(v.failed_gate, Some(Gate::Recognition));
        assert!(!v.det_compatible);
        assert!(v.det_canonical.is_one());
    }

    fn arb_c_list(max_g: usize) -> impl Strategy<Value = Vec<LaurentPoly>> {
        prop::collection::vec(arb_poly(2, 3), 1..=max_g)
    }

    fn a_form(cs: &[LaurentPoly]) -> HermitianForm {
        let blocks: Vec<Matrix> = cs.iter().map(|c| a_block_for(c).into_matrix()).collect();
        HermitianForm::new(Matrix::block_diagonal(&blocks)).unwrap()
    }

    proptest! {
        #[test]
        fn congruence_is_hermitian(p in arb_matrix(3, 2, 2), a in arb_matrix(3, 2, 2)) {
            let herm = HermitianForm::new(&a + &a.star()).unwrap();
            let out = congruence(&p, &herm).unwrap();
            prop_assert!(HermitianForm::new(out.into_matrix()).is_ok());
        }

        #[test]
        fn certificates_are_sound(cs in arb_c_list(3)) {
            let a = a_form(&cs);
            let cert = reduce_to_standard(&a).unwrap().expect("A-form");
            prop_assert_eq!(congruence(cert.reduction.matrix(), &a).unwrap(), h2_sum(cs.len()));
            prop_assert!(cert.reduction.matrix().determinant().unwrap().is_unit().is_some());
            prop_assert!(a.determinant().assoc_eq(&a_form_determinant_target(cs.len())));
        }

        #[test]
        fn solver_round_trip(c in arb_poly(4, 9)) {
            let d = hermitian_zero_aug(&c);
            let c2 = solve_hermitian_zero_aug(&d).unwrap().expect("augmentation zero");
            prop_assert_eq!(hermitian_zero_aug(&c2), d);
        }

        #[test]
        fn det_chain_random(b in arb_matrix(2, 2, 2)) {
            prop_assert!(det_chain_check(&b, &h2_sum(1)).unwrap());
        }
    }
}
