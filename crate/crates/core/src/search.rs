//! Bounded search for congruences `P · A · P* = B` built from elementary moves.
//!
//! The search is a bidirectional breadth-first search: one tree grows from `A`,
//! one from the target, and the levels alternate until a state is shared or the
//! depth budget runs out. Every move is invertible, so a meeting state yields a
//! path of minimal length. Frontiers are processed in sorted state order and
//! moves in a fixed order, which makes outcomes reproducible.

use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use num_bigint::BigInt;
use thiserror::Error;

use crate::forms::{h2_sum, recognize_a_form, BaseChange, FormError, HermitianForm};
use crate::laurent::{LaurentPoly, Sign, UnitWitness};
use crate::matrix::Matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("conjecture probe needs rank 2 or 4, got {0}")]
    UnsupportedRank(usize),
    #[error("invalid move {mv} for rank {rank}")]
    InvalidMove { mv: MoveSpec, rank: usize },
    #[error("search produced a path that does not replay: {0}")]
    Internal(String),
    #[error(transparent)]
    Form(#[from] FormError),
}

/// An elementary base change. Indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveSpec {
    /// `e_i <- e_i + p e_j`.
    Transvection { i: usize, j: usize, p: LaurentPoly },
    /// `e_i <- ±t^k e_i`.
    UnitScale { i: usize, sign: Sign, k: i64 },
    /// Exchange `e_i` and `e_j`.
    Swap { i: usize, j: usize },
}

impl MoveSpec {
    pub fn validate(&self, rank: usize) -> Result<(), SearchError> {
        let ok = match self {
            MoveSpec::Transvection { i, j, p } => i != j && *i < rank && *j < rank && !p.is_zero(),
            MoveSpec::UnitScale { i, .. } => *i < rank,
            MoveSpec::Swap { i, j } => i != j && *i < rank && *j < rank,
        };
        if ok {
            Ok(())
        } else {
            Err(SearchError::InvalidMove { mv: self.clone(), rank })
        }
    }

    pub fn inverse(&self) -> MoveSpec {
        match self {
            MoveSpec::Transvection { i, j, p } => MoveSpec::Transvection { i: *i, j: *j, p: -p },
            MoveSpec::UnitScale { i, sign, k } => MoveSpec::UnitScale { i: *i, sign: *sign, k: -k },
            MoveSpec::Swap { i, j } => MoveSpec::Swap { i: *i, j: *j },
        }
    }

    /// The move as a base change of the given rank.
    pub fn base_change(&self, rank: usize) -> BaseChange {
        let mut m = Matrix::identity(rank);
        match self {
            MoveSpec::Transvection { i, j, p } => m[(*i, *j)] = p.clone(),
            MoveSpec::UnitScale { i, sign, k } => m[(*i, *i)] = UnitWitness::new(*sign, *k).to_poly(),
            MoveSpec::Swap { i, j } => {
                m[(*i, *i)] = LaurentPoly::zero();
                m[(*j, *j)] = LaurentPoly::zero();
                m[(*i, *j)] = LaurentPoly::one();
                m[(*j, *i)] = LaurentPoly::one();
            }
        }
        BaseChange::new(m).expect("elementary moves have unit determinant")
    }

    /// `E · A · E*`, computed with row and column operations.
    pub fn apply(&self, a: &HermitianForm) -> HermitianForm {
        let n = a.rank();
        let mut out = a.clone();
        let m = out.matrix_mut();
        match self {
            MoveSpec::Transvection { i, j, p } => {
                let (i, j) = (*i, *j);
                for c in 0..n {
                    let add = p * &m[(j, c)];
                    m[(i, c)] += &add;
                }
                let pbar = p.involve();
                for r in 0..n {
                    let add = &m[(r, j)] * &pbar;
                    m[(r, i)] += &add;
                }
            }
            MoveSpec::UnitScale { i, sign, k } => {
                let u = UnitWitness::new(*sign, *k);
                let ubar = u.involve();
                for c in 0..n {
                    m[(*i, c)] = m[(*i, c)].mul_unit(u);
                }
                for r in 0..n {
                    m[(r, *i)] = m[(r, *i)].mul_unit(ubar);
                }
            }
            MoveSpec::Swap { i, j } => {
                for c in 0..n {
                    let tmp = m[(*i, c)].clone();
                    m[(*i, c)] = m[(*j, c)].clone();
                    m[(*j, c)] = tmp;
                }
                for r in 0..n {
                    let tmp = m[(r, *i)].clone();
                    m[(r, *i)] = m[(r, *j)].clone();
                    m[(r, *j)] = tmp;
                }
            }
        }
        out
    }
}

impl fmt::Display for MoveSpec {
    /// 1-based, e.g. `Transvection(2,1,-1)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoveSpec::Transvection { i, j, p } => write!(f, "Transvection({},{},{p})", i + 1, j + 1),
            MoveSpec::UnitScale { i, sign, k } => {
                write!(f, "UnitScale({},{},{k})", i + 1, if *sign == Sign::Plus { "+" } else { "-" })
            }
            MoveSpec::Swap { i, j } => write!(f, "Swap({},{})", i + 1, j + 1),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SearchBounds {
    pub max_depth: usize,
    /// Transvection coefficients have exponents in `[-degree, degree]`.
    pub degree: u32,
    /// ... and integer coefficients in `[-coeff, coeff]`.
    pub coeff: u32,
    /// Unit scalings `±t^k` with `|k| <= unit_exponent`.
    pub unit_exponent: u32,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { max_depth: 2, degree: 1, coeff: 2, unit_exponent: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found {
        moves: Vec<MoveSpec>,
        base_change: BaseChange,
    },
    /// No sequence within the bounds; says nothing about longer sequences.
    Exhausted {
        states: usize,
    },
    ObstructionMismatch {
        reason: String,
    },
}

impl SearchOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found { .. })
    }

    pub fn is_exhausted(&self) -> bool {
        matches!(self, SearchOutcome::Exhausted { .. })
    }

    pub fn depth(&self) -> Option<usize> {
        match self {
            SearchOutcome::Found { moves, .. } => Some(moves.len()),
            _ => None,
        }
    }
}

/// All nonzero polynomials with exponents in `[-degree, degree]` and
/// coefficients in `[-coeff, coeff]`, simplest first.
pub fn transvection_coefficients(degree: u32, coeff: u32) -> Vec<LaurentPoly> {
    let width = 2 * degree as usize + 1;
    let base = 2 * coeff as u64 + 1;
    let count = base.pow(width as u32);
    let mut out: Vec<LaurentPoly> = (0..count)
        .map(|mut n| {
            let mut cs = Vec::with_capacity(width);
            for _ in 0..width {
                cs.push((n % base) as i64 - coeff as i64);
                n /= base;
            }
            LaurentPoly::from_dense(-(degree as i64), cs)
        })
        .filter(|p| !p.is_zero())
        .collect();
    let weight = |p: &LaurentPoly| -> (BigInt, i64) {
        let l1: BigInt = p.terms().iter().map(|(_, c)| num_traits::Signed::abs(c)).sum();
        let reach = p.terms().iter().map(|(k, _)| k.abs()).max().unwrap_or(0);
        (l1, reach)
    };
    out.sort_by_cached_key(|p| (weight(p), p.clone()));
    out
}

/// Every move allowed by `bounds` on a form of the given rank, in search order:
/// transvections, then unit scalings, then swaps.
pub fn enumerate_moves(rank: usize, bounds: &SearchBounds) -> Vec<MoveSpec> {
    let mut moves = Vec::new();
    let coeffs = transvection_coefficients(bounds.degree, bounds.coeff);
    for i in 0..rank {
        for j in 0..rank {
            if i != j {
                moves.extend(coeffs.iter().map(|p| MoveSpec::Transvection { i, j, p: p.clone() }));
            }
        }
    }
    let ue = bounds.unit_exponent as i64;
    for i in 0..rank {
        for sign in [Sign::Plus, Sign::Minus] {
            for k in -ue..=ue {
                if sign == Sign::Plus && k == 0 {
                    continue;
                }
                moves.push(MoveSpec::UnitScale { i, sign, k });
            }
        }
    }
    for i in 0..rank {
        for j in i + 1..rank {
            moves.push(MoveSpec::Swap { i, j });
        }
    }
    moves
}

/// Reason the determinant rules out an isometry with `H2^g`, if any.
pub fn det_obstruction(a: &HermitianForm, g: usize) -> Option<String> {
    if a.rank() != 2 * g {
        return Some(format!("rank {} is not 2g = {}", a.rank(), 2 * g));
    }
    det_mismatch(a, &h2_sum(g))
}

fn det_mismatch(a: &HermitianForm, target: &HermitianForm) -> Option<String> {
    // congruence multiplies the determinant by u·ū = 1 for units u = ±t^k
    let da = a.determinant().canonical();
    let db = target.determinant().canonical();
    if da == db {
        None
    } else {
        Some(format!("determinant not associate: canonical det {da} vs {db}"))
    }
}

struct Node {
    form: Rc<HermitianForm>,
    parent: Option<usize>,
    via: Option<MoveSpec>,
}

struct Tree {
    nodes: Vec<Node>,
    index: HashMap<Rc<HermitianForm>, usize>,
    frontier: Vec<usize>,
    depth: usize,
}

impl Tree {
    fn new(root: &HermitianForm) -> Self {
        let form = Rc::new(root.clone());
        let mut index = HashMap::new();
        index.insert(form.clone(), 0);
        Tree { nodes: vec![Node { form, parent: None, via: None }], index, frontier: vec![0], depth: 0 }
    }

    /// Expands the frontier one level; returns the new frontier in sorted order.
    fn expand(&mut self, moves: &[MoveSpec], det_class: &LaurentPoly) {
        let mut next = Vec::new();
        let frontier = std::mem::take(&mut self.frontier);
        for idx in frontier {
            let form = self.nodes[idx].form.clone();
            assert_eq!(&form.determinant().canonical(), det_class, "congruence changed the determinant class");
            for mv in moves {
                let child = mv.apply(&form);
                if self.index.contains_key(&child) {
                    continue;
                }
                let child = Rc::new(child);
                let id = self.nodes.len();
                self.index.insert(child.clone(), id);
                self.nodes.push(Node { form: child, parent: Some(idx), via: Some(mv.clone()) });
                next.push(id);
            }
        }
        next.sort_by(|a, b| self.nodes[*a].form.cmp(&self.nodes[*b].form));
        self.frontier = next;
        self.depth += 1;
    }

    /// Moves from the root to `idx`, in application order.
    fn path(&self, mut idx: usize) -> Vec<MoveSpec> {
        let mut out = Vec::new();
        while let (Some(parent), Some(mv)) = (self.nodes[idx].parent, &self.nodes[idx].via) {
            out.push(mv.clone());
            idx = parent;
        }
        out.reverse();
        out
    }
}

/// Applies `moves` in order and returns the final form and the accumulated
/// base change `P = E_last · .. · E_1`.
pub fn replay_moves(a: &HermitianForm, moves: &[MoveSpec]) -> Result<(HermitianForm, BaseChange), SearchError> {
    let n = a.rank();
    let mut form = a.clone();
    let mut p = BaseChange::identity(n);
    for mv in moves {
        mv.validate(n)?;
        form = mv.apply(&form);
        p = mv.base_change(n).after(&p);
    }
    Ok((form, p))
}

pub fn bounded_isometry_search(
    a: &HermitianForm,
    target: &HermitianForm,
    bounds: &SearchBounds,
) -> Result<SearchOutcome, SearchError> {
    if a.rank() != target.rank() {
        return Err(SearchError::RankMismatch(a.rank(), target.rank()));
    }
    if let Some(reason) = det_mismatch(a, target) {
        return Ok(SearchOutcome::ObstructionMismatch { reason });
    }
    let det_class = a.determinant().canonical();
    let moves = enumerate_moves(a.rank(), bounds);
    let mut fwd = Tree::new(a);
    let mut bwd = Tree::new(target);

    let meeting = if a == target {
        Some((0, 0))
    } else {
        let mut found = None;
        while fwd.depth + bwd.depth < bounds.max_depth {
            let grow_fwd = match (fwd.frontier.is_empty(), bwd.frontier.is_empty()) {
                (true, true) => break,
                (true, false) => false,
                (false, true) => true,
                (false, false) => fwd.depth <= bwd.depth,
            };
            let (grown, other) = if grow_fwd { (&mut fwd, &bwd) } else { (&mut bwd, &fwd) };
            grown.expand(&moves, &det_class);
            // frontier is sorted, so the first hit is the smallest meeting state
            let hit = grown.frontier.iter().find_map(|&id| other.index.get(&grown.nodes[id].form).map(|&o| (id, o)));
            if let Some((g, o)) = hit {
                found = Some(if grow_fwd { (g, o) } else { (o, g) });
                break;
            }
        }
        found
    };

    let Some((f_idx, b_idx)) = meeting else {
        return Ok(SearchOutcome::Exhausted { states: fwd.nodes.len() + bwd.nodes.len() });
    };
    let mut path = fwd.path(f_idx);
    path.extend(bwd.path(b_idx).iter().rev().map(MoveSpec::inverse));

    let (end, base_change) = replay_moves(a, &path)?;
    if &end != target || &base_change.apply(a)? != target {
        return Err(SearchError::Internal(format!("{} moves did not reach the target", path.len())));
    }
    Ok(SearchOutcome::Found { moves: path, base_change })
}

/// `A ⊕ H2^k`.
pub fn stabilize(a: &HermitianForm, k: usize) -> HermitianForm {
    a.direct_sum(&h2_sum(k))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeReport {
    pub genus: usize,
    /// `A ⊕ H2` against `H2^(g+1)`.
    pub stable: SearchOutcome,
    /// `A` against `H2^g`.
    pub direct: SearchOutcome,
}

impl ProbeReport {
    /// Stably reduced but not directly reduced within the bounds: worth a
    /// deeper search. This is never evidence against the conjecture by itself.
    pub fn is_candidate(&self) -> bool {
        self.stable.is_found() && self.direct.is_exhausted()
    }
}

/// Probes whether a stably surface hyperbolic form of rank 2 or 4 is already
/// surface hyperbolic, within `bounds`.
pub fn conjecture_probe(a: &HermitianForm, bounds: &SearchBounds) -> Result<ProbeReport, SearchError> {
    let n = a.rank();
    if n != 2 && n != 4 {
        return Err(SearchError::UnsupportedRank(n));
    }
    let genus = n / 2;
    let stable = bounded_isometry_search(&stabilize(a, 1), &h2_sum(genus + 1), bounds)?;
    let direct = bounded_isometry_search(a, &h2_sum(genus), bounds)?;
    Ok(ProbeReport { genus, stable, direct })
}

/// Search bounds large enough to undo the standard reduction of a recognized
/// A-form, or `None` if the form is not one.
pub fn bounds_for_a_form(a: &HermitianForm) -> Option<SearchBounds> {
    let cs = recognize_a_form(a)?;
    let degree = cs.iter().flat_map(|c| c.terms().iter().map(|(k, _)| k.unsigned_abs())).max().unwrap_or(0);
    let coeff = cs.iter().map(LaurentPoly::height).max().unwrap_or_default();
    let coeff: u32 = coeff.try_into().ok()?;
    Some(SearchBounds { max_depth: cs.len() + 1, degree: degree as u32, coeff: coeff.max(1), unit_exponent: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{a_block, a_block_for, congruence};
    use crate::laurent::tests::lp;

    fn reference_matrix() -> HermitianForm {
        a_block(lp(&[(-1, -1), (0, 2), (1, -1)])).unwrap()
    }

    fn opt_form() -> HermitianForm {
        let opt = lp(&[(0, 1), (1, 1)]);
        HermitianForm::from_rows(vec![vec![LaurentPoly::zero(), opt.clone()], vec![opt.involve(), LaurentPoly::zero()]])
            .unwrap()
    }

    #[test]
    fn moves_match_their_matrices() {
        let a = a_block_for(&lp(&[(0, 2), (-1, 1)])).direct_sum(&reference_matrix());
        let moves = [
            MoveSpec::Transvection { i: 3, j: 0, p: lp(&[(1, 2), (-1, -1)]) },
            MoveSpec::UnitScale { i: 2, sign: Sign::Minus, k: 3 },
            MoveSpec::Swap { i: 1, j: 3 },
        ];
        for mv in &moves {
            let via_matrix = congruence(mv.base_change(4).matrix(), &a).unwrap();
            assert_eq!(mv.apply(&a), via_matrix, "{mv}");
            assert_eq!(mv.inverse().apply(&mv.apply(&a)), a);
            assert!(mv.base_change(4).matrix().determinant().unwrap().is_unit().is_some());
        }
        assert!(MoveSpec::Swap { i: 1, j: 1 }.validate(4).is_err());
        assert!(MoveSpec::UnitScale { i: 4, sign: Sign::Plus, k: 0 }.validate(4).is_err());
    }

    #[test]
    fn coefficient_pool() {
        let pool = transvection_coefficients(1, 1);
        assert_eq!(pool.len(), 26);
        assert_eq!(pool[0], LaurentPoly::constant(-1));
        assert_eq!(pool[1], LaurentPoly::constant(1));
        assert_eq!(transvection_coefficients(0, 2).len(), 4);
    }

    #[test]
    fn obstruction_examples() {
        assert_eq!(det_obstruction(&reference_matrix(), 1), None);
        let reason = det_obstruction(&opt_form(), 1).unwrap();
        assert!(reason.contains("determinant not associate"), "{reason}");
        assert_eq!(det_obstruction(&h2_sum(2), 2), None);
        assert!(det_obstruction(&h2_sum(2), 1).is_some());
    }

    #[test]
    fn search_examples() {
        let bounds = SearchBounds { max_depth: 2, degree: 1, coeff: 1, unit_exponent: 1 };
        let out = bounded_isometry_search(&reference_matrix(), &h2_sum(1), &bounds).unwrap();
        let SearchOutcome::Found { moves, base_change } = out else { panic!("expected Found") };
        assert_eq!(moves, vec![MoveSpec::Transvection { i: 1, j: 0, p: LaurentPoly::constant(-1) }]);
        assert_eq!(moves[0].to_string(), "Transvection(2,1,-1)");
        assert_eq!(base_change.apply(&reference_matrix()).unwrap(), h2_sum(1));

        let out = bounded_isometry_search(&h2_sum(1), &h2_sum(1), &bounds).unwrap();
        assert_eq!(out.depth(), Some(0));

        let out = bounded_isometry_search(&opt_form(), &h2_sum(1), &bounds).unwrap();
        assert!(matches!(out, SearchOutcome::ObstructionMismatch { .. }));

        assert!(bounded_isometry_search(&h2_sum(1), &h2_sum(2), &bounds).is_err());
    }

    #[test]
    fn bounds_limit_the_search() {
        let c = lp(&[(0, 3), (2, 1)]);
        let a = a_block_for(&c);
        let small = SearchBounds { max_depth: 1, degree: 1, coeff: 1, unit_exponent: 0 };
        assert!(bounded_isometry_search(&a, &h2_sum(1), &small).unwrap().is_exhausted());
        let big = bounds_for_a_form(&a).unwrap();
        assert_eq!(big, SearchBounds { max_depth: 2, degree: 2, coeff: 3, unit_exponent: 0 });
        assert!(bounded_isometry_search(&a, &h2_sum(1), &big).unwrap().is_found());
    }

    #[test]
    fn monotone_and_deterministic() {
        let a = a_block_for(&lp(&[(1, 1)])).direct_sum(&reference_matrix());
        let target = h2_sum(2);
        let b1 = SearchBounds { max_depth: 2, degree: 1, coeff: 1, unit_exponent: 0 };
        let b2 = SearchBounds { max_depth: 3, degree: 1, coeff: 2, unit_exponent: 1 };
        let o1 = bounded_isometry_search(&a, &target, &b1).unwrap();
        let o1_again = bounded_isometry_search(&a, &target, &b1).unwrap();
        let o2 = bounded_isometry_search(&a, &target, &b2).unwrap();
        assert!(o1.is_found());
        assert_eq!(o1, o1_again);
        assert!(o2.is_found());
        assert!(o2.depth() <= o1.depth());
    }

    #[test]
    fn stabilize_examples() {
        assert_eq!(stabilize(&h2_sum(1), 1), h2_sum(2));
        assert_eq!(stabilize(&reference_matrix(), 0), reference_matrix());
        let s = stabilize(&reference_matrix(), 1);
        assert_eq!(s.rank(), 4);
        assert_eq!(recognize_a_form(&s), Some(vec![LaurentPoly::one(), LaurentPoly::zero()]));
    }

    #[test]
    fn probe_examples() {
        let bounds = SearchBounds::default();
        let r = conjecture_probe(&h2_sum(1), &bounds).unwrap();
        assert!(r.stable.is_found() && r.direct.is_found());
        assert!(!r.is_candidate());

        let r = conjecture_probe(&reference_matrix(), &bounds).unwrap();
        assert!(r.stable.is_found() && r.direct.is_found());
        assert!(r.direct.depth().unwrap() <= 2);

        let r = conjecture_probe(&opt_form(), &bounds).unwrap();
        assert!(matches!(r.stable, SearchOutcome::ObstructionMismatch { .. }));
        assert!(matches!(r.direct, SearchOutcome::ObstructionMismatch { .. }));

        assert_eq!(conjecture_probe(&h2_sum(3), &bounds), Err(SearchError::UnsupportedRank(6)));

        let flagged = ProbeReport {
            genus: 1,
            stable: SearchOutcome::Found { moves: vec![], base_change: BaseChange::identity(4) },
            direct: SearchOutcome::Exhausted { states: 10 },
        };
        assert!(flagged.is_candidate());
    }
}
