//! Integral polynomial systems, weights, weight matrices, and the PET
//! (polynomial exhaustion technique) reduction with machine-checked descent.
//!
//! A system is a finite set of length-`t` sequences of integral polynomials,
//! one polynomial per generator. Each sequence has a *weight* `(r, d)`: `r`
//! is the last coordinate carrying a nonconstant polynomial and `d` that
//! polynomial's degree; all-constant sequences sit below every proper weight.
//! Two sequences are *equivalent* when they share a weight and the leading
//! coefficients of their `r`-th components agree. The *weight matrix* counts
//! equivalence classes per weight, and its position in the priority order is
//! an ordinal below ω^(t·D) — the quantity the reduction drives down.
//!
//! One reduction step at shift `h` closes the system under
//! `p(n) ↦ p(n+h) - p(h)` (which never changes the weight matrix), picks a
//! minimal-weight pivot, and replaces every member by its difference with the
//! pivot. The resulting matrix strictly precedes the original; this module
//! asserts the descent on every step rather than trusting it.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ordinal::Ordinal;
use crate::par::*;
use crate::poly::{IntPolynomial, PolyError};

/// Errors from system construction and reduction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PetError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("sequence has {got} polynomials, system arity is {expected}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("system has no sequences")]
    EmptySystem,
    #[error("system contains an all-constant sequence")]
    SubUnitMember,
    #[error("system reduced to all-constant sequences at every candidate pivot")]
    DegenerateSystem,
    #[error("weight-matrix descent failed: {after} does not precede {before} (implementation bug)")]
    DescentViolation { before: Ordinal, after: Ordinal },
    #[error("no shifts supplied")]
    EmptyShifts,
    #[error("sequences are not pairwise essentially distinct")]
    NotEssentiallyDistinct,
}

/// The weight of a polynomial sequence. `SubUnit` is the class of
/// all-constant sequences, below every proper weight; proper weights order
/// lexicographically by `(index, degree)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Weight {
    SubUnit,
    Proper {
        /// 1-based coordinate of the last nonconstant polynomial.
        index: usize,
        /// Its degree, ≥ 1.
        degree: usize,
    },
}

/// A length-`t` sequence of integral polynomials, one per generator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PolySeq {
    polys: Vec<IntPolynomial>,
}

impl PolySeq {
    pub fn new(polys: Vec<IntPolynomial>) -> Self {
        PolySeq { polys }
    }

    pub fn arity(&self) -> usize {
        self.polys.len()
    }

    pub fn polys(&self) -> &[IntPolynomial] {
        &self.polys
    }

    /// The weight `(r, d)`: the last index `r` whose polynomial is
    /// nonconstant, paired with that polynomial's degree. All-constant
    /// sequences map to `SubUnit`.
    pub fn weight(&self) -> Weight {
        for (i, p) in self.polys.iter().enumerate().rev() {
            if !p.is_constant() {
                return Weight::Proper {
                    index: i + 1,
                    degree: p.degree(),
                };
            }
        }
        Weight::SubUnit
    }

    /// Maximum component degree.
    pub fn degree(&self) -> usize {
        self.polys.iter().map(IntPolynomial::degree).max().unwrap_or(0)
    }

    pub fn is_all_constant(&self) -> bool {
        self.polys.iter().all(IntPolynomial::is_constant)
    }

    pub fn is_integral_zero(&self) -> bool {
        self.polys.iter().all(IntPolynomial::is_integral_zero)
    }

    /// Componentwise `p(n+h) - p(h)`.
    pub fn shift_diff(&self, h: &BigInt) -> PolySeq {
        PolySeq {
            polys: self.polys.iter().map(|p| p.shift_diff(h)).collect(),
        }
    }

    /// Componentwise difference.
    pub fn sub(&self, other: &PolySeq) -> PolySeq {
        debug_assert_eq!(self.arity(), other.arity());
        PolySeq {
            polys: self
                .polys
                .iter()
                .zip(&other.polys)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    /// Essentially distinct: some componentwise difference is nonconstant.
    pub fn essentially_distinct(&self, other: &PolySeq) -> bool {
        self.polys
            .iter()
            .zip(&other.polys)
            .any(|(a, b)| !a.sub(b).is_constant())
    }

    /// The pivot tie-break key: the coefficient list of the weight-carrying
    /// component first, then the remaining components in order.
    fn pivot_key(&self) -> (Vec<BigRational>, &[IntPolynomial]) {
        let r = match self.weight() {
            Weight::Proper { index, .. } => index - 1,
            Weight::SubUnit => 0,
        };
        (self.polys[r].coeffs().to_vec(), &self.polys)
    }
}

/// Equivalent sequences: same proper weight and equal leading coefficients in
/// the weight-carrying component. All-constant sequences are mutually
/// equivalent.
pub fn equivalent(a: &PolySeq, b: &PolySeq) -> bool {
    match (a.weight(), b.weight()) {
        (Weight::SubUnit, Weight::SubUnit) => true,
        (wa @ Weight::Proper { index, .. }, wb) if wa == wb => {
            a.polys[index - 1].leading_coeff() == b.polys[index - 1].leading_coeff()
        }
        _ => false,
    }
}

/// A finite set of polynomial sequences over a fixed arity `t`. Members are
/// kept sorted and deduplicated, so equal systems compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SystemRepr", into = "SystemRepr")]
pub struct PolySystem {
    arity: usize,
    seqs: Vec<PolySeq>,
}

#[derive(Serialize, Deserialize)]
struct SystemRepr {
    t: usize,
    seqs: Vec<Vec<IntPolynomial>>,
}

impl TryFrom<SystemRepr> for PolySystem {
    type Error = PetError;

    fn try_from(repr: SystemRepr) -> Result<Self, Self::Error> {
        PolySystem::new(repr.t, repr.seqs.into_iter().map(PolySeq::new))
    }
}

impl From<PolySystem> for SystemRepr {
    fn from(sys: PolySystem) -> Self {
        SystemRepr {
            t: sys.arity,
            seqs: sys.seqs.into_iter().map(|s| s.polys).collect(),
        }
    }
}

impl PolySystem {
    /// Builds a system, checking arity and collapsing duplicates.
    pub fn new<I>(arity: usize, seqs: I) -> Result<Self, PetError>
    where
        I: IntoIterator<Item = PolySeq>,
    {
        let mut set = BTreeSet::new();
        for s in seqs {
            if s.arity() != arity {
                return Err(PetError::ArityMismatch {
                    expected: arity,
                    got: s.arity(),
                });
            }
            set.insert(s);
        }
        Ok(PolySystem {
            arity,
            seqs: set.into_iter().collect(),
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn members(&self) -> &[PolySeq] {
        &self.seqs
    }

    pub fn len(&self) -> usize {
        self.seqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seqs.is_empty()
    }

    /// System degree: the maximum degree over all members (0 when empty).
    pub fn degree(&self) -> usize {
        self.seqs.iter().map(PolySeq::degree).max().unwrap_or(0)
    }

    pub fn has_subunit_member(&self) -> bool {
        self.seqs.iter().any(PolySeq::is_all_constant)
    }

    pub fn is_pairwise_essentially_distinct(&self) -> bool {
        for (i, a) in self.seqs.iter().enumerate() {
            for b in &self.seqs[i + 1..] {
                if !a.essentially_distinct(b) {
                    return false;
                }
            }
        }
        true
    }

    /// The closure `A ∪ { p(n+h) - p(h) : p ∈ A }` with set semantics.
    /// Shifting preserves every weight and leading coefficient, so the weight
    /// matrix is unchanged.
    pub fn tilde(&self, h: i64) -> PolySystem {
        let h = BigInt::from(h);
        let mut set: BTreeSet<PolySeq> = self.seqs.iter().cloned().collect();
        for s in &self.seqs {
            set.insert(s.shift_diff(&h));
        }
        PolySystem {
            arity: self.arity,
            seqs: set.into_iter().collect(),
        }
    }

    /// The weight matrix at the system's own shape `(t, degree)`.
    pub fn weight_matrix(&self) -> WeightMatrix {
        let rows = self.arity;
        let cols = self.degree();
        let mut classes: BTreeSet<(usize, usize, BigRational)> = BTreeSet::new();
        for s in &self.seqs {
            if let Weight::Proper { index, degree } = s.weight() {
                classes.insert((index, degree, s.polys[index - 1].leading_coeff()));
            }
        }
        let mut counts = vec![0u64; rows * cols];
        for (r, d, _) in classes {
            counts[(r - 1) * cols + (d - 1)] += 1;
        }
        WeightMatrix { rows, cols, counts }
    }
}

/// The `t × D` table counting equivalence classes of each weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightMatrix {
    rows: usize,
    cols: usize,
    counts: Vec<u64>,
}

impl WeightMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Class count at weight `(r, d)`, 1-based; 0 outside the stored shape.
    pub fn get(&self, r: usize, d: usize) -> u64 {
        if r == 0 || d == 0 || r > self.rows || d > self.cols {
            return 0;
        }
        self.counts[(r - 1) * self.cols + (d - 1)]
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.counts[(r - 1) * self.cols..r * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    /// Extends the shape with zero rows/columns. Entries keep their weights;
    /// the ordinal may change because position ranks are shape-relative.
    pub fn padded_to(&self, rows: usize, cols: usize) -> WeightMatrix {
        let rows = rows.max(self.rows);
        let cols = cols.max(self.cols);
        let mut counts = vec![0u64; rows * cols];
        for r in 1..=self.rows {
            for d in 1..=self.cols {
                counts[(r - 1) * cols + (d - 1)] = self.get(r, d);
            }
        }
        WeightMatrix { rows, cols, counts }
    }

    /// Priority-order comparison: the most significant position is the
    /// largest weight `(r, d)`; the first differing count decides. Matrices
    /// of different shapes are compared after zero-padding to a common shape.
    pub fn cmp_priority(&self, other: &WeightMatrix) -> Ordering {
        let rows = self.rows.max(other.rows);
        let cols = self.cols.max(other.cols);
        for r in (1..=rows).rev() {
            for d in (1..=cols).rev() {
                match self.get(r, d).cmp(&other.get(r, d)) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
        }
        Ordering::Equal
    }

    /// The height of this matrix in the priority well-order of its shape:
    /// `Σ ω^rank(r,d) · N[r][d]` with `rank(r,d) = (r-1)·D + (d-1)`, the
    /// number of positions strictly below `(r, d)`. Order-isomorphic to
    /// [`WeightMatrix::cmp_priority`] at a fixed shape and always below
    /// ω^(rows·cols).
    pub fn ordinal(&self) -> Ordinal {
        let mut terms = Vec::new();
        for r in 1..=self.rows {
            for d in 1..=self.cols {
                let count = self.get(r, d);
                if count > 0 {
                    let rank = (r - 1) * self.cols + (d - 1);
                    terms.push((Ordinal::from(rank as u64), BigUint::from(count)));
                }
            }
        }
        Ordinal::from_terms(terms)
    }
}

/// One PET reduction step, with the descent verified.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DescentNode {
    pub system: PolySystem,
    pub shift: i64,
    pub pivot: PolySeq,
    pub reduced: PolySystem,
    /// Ordinal of `system` at the shape `(t, degree(system))`.
    pub o_before: Ordinal,
    /// Ordinal of `reduced`, padded to the same shape.
    pub o_after: Ordinal,
}

/// Picks the minimal-weight member of `tilde`, breaking ties by the
/// deterministic lexicographic key, and forms the difference system with
/// all-constant residues dropped.
fn reduce_at(system: &PolySystem, h: i64) -> Result<(PolySeq, PolySystem), PetError> {
    if system.is_empty() {
        return Err(PetError::EmptySystem);
    }
    if system.has_subunit_member() {
        return Err(PetError::SubUnitMember);
    }
    let tilde = system.tilde(h);
    let min_weight = tilde
        .members()
        .iter()
        .map(PolySeq::weight)
        .min()
        .expect("tilde of a nonempty system is nonempty");
    let pivot = tilde
        .members()
        .iter()
        .filter(|s| s.weight() == min_weight)
        .min_by(|a, b| a.pivot_key().cmp(&b.pivot_key()))
        .expect("some member attains the minimal weight")
        .clone();
    let reduced = PolySystem::new(
        system.arity(),
        tilde
            .members()
            .iter()
            .map(|s| s.sub(&pivot))
            .filter(|s| !s.is_all_constant()),
    )?;
    Ok((pivot, reduced))
}

/// One reduction step `A ↦ A_h`. Errors with [`PetError::DegenerateSystem`]
/// when every residue is constant, and with [`PetError::DescentViolation`]
/// if the verified ordinal fails to drop — the latter signals a bug, never a
/// valid outcome.
pub fn pet_reduce(system: &PolySystem, h: i64) -> Result<DescentNode, PetError> {
    let (pivot, reduced) = reduce_at(system, h)?;
    if reduced.is_empty() {
        return Err(PetError::DegenerateSystem);
    }
    let rows = system.arity();
    let cols = system.degree();
    let o_before = system.weight_matrix().ordinal();
    let o_after = reduced.weight_matrix().padded_to(rows, cols).ordinal();
    if o_after >= o_before {
        return Err(PetError::DescentViolation {
            before: o_before,
            after: o_after,
        });
    }
    Ok(DescentNode {
        system: system.clone(),
        shift: h,
        pivot,
        reduced,
        o_before,
        o_after,
    })
}

/// A reduction tree. All matrices and ordinals are taken at the root's shape
/// so ordinals along any path are directly comparable.
#[derive(Debug, Clone, Serialize)]
pub struct DescentTree {
    pub system: PolySystem,
    pub matrix: WeightMatrix,
    pub ordinal: Ordinal,
    pub children: Vec<DescentEdge>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DescentEdge {
    pub shift: i64,
    pub outcome: DescentOutcome,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DescentOutcome {
    /// The reduction produced a nonempty system; descent continues below.
    Reduced {
        pivot: PolySeq,
        subtree: Box<DescentTree>,
    },
    /// Every residue was constant; the branch ends here.
    Degenerate { pivot: PolySeq },
}

/// Iterates [`pet_reduce`] for each shift, recursively, stopping at
/// degenerate systems or at `max_depth`. Children are evaluated in parallel
/// when the `parallel` feature is on; the tree is identical either way.
pub fn descent_tree(
    system: &PolySystem,
    shifts: &[i64],
    max_depth: usize,
) -> Result<DescentTree, PetError> {
    if shifts.is_empty() {
        return Err(PetError::EmptyShifts);
    }
    if system.is_empty() {
        return Err(PetError::EmptySystem);
    }
    let rows = system.arity();
    let cols = system.degree();
    build_tree(system, shifts, max_depth, rows, cols)
}

fn build_tree(
    system: &PolySystem,
    shifts: &[i64],
    depth: usize,
    rows: usize,
    cols: usize,
) -> Result<DescentTree, PetError> {
    let matrix = system.weight_matrix().padded_to(rows, cols);
    let ordinal = matrix.ordinal();
    let children = if depth == 0 {
        Vec::new()
    } else {
        shifts
            .par_iter()
            .map(|&h| {
                let (pivot, reduced) = reduce_at(system, h)?;
                let outcome = if reduced.is_empty() {
                    DescentOutcome::Degenerate { pivot }
                } else {
                    let subtree = build_tree(&reduced, shifts, depth - 1, rows, cols)?;
                    if subtree.ordinal >= ordinal {
                        return Err(PetError::DescentViolation {
                            before: ordinal.clone(),
                            after: subtree.ordinal.clone(),
                        });
                    }
                    DescentOutcome::Reduced {
                        pivot,
                        subtree: Box::new(subtree),
                    }
                };
                Ok(DescentEdge { shift: h, outcome })
            })
            .collect::<Result<Vec<_>, PetError>>()?
    };
    Ok(DescentTree {
        system: system.clone(),
        matrix,
        ordinal,
        children,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(polys: &[&str]) -> PolySeq {
        PolySeq::new(polys.iter().map(|p| p.parse().unwrap()).collect())
    }

    fn system(t: usize, seqs: &[&[&str]]) -> PolySystem {
        PolySystem::new(t, seqs.iter().map(|s| seq(s))).unwrap()
    }

    /// The eleven-sequence system with t = 2 used as the worked example
    /// throughout the tests; its matrix is the golden target.
    pub(crate) fn example_system() -> PolySystem {
        system(
            2,
            &[
                &["19n", "0"],
                &["6n^2", "0"],
                &["7n^2+19n", "0"],
                &["7n^2", "0"],
                &["4n^4", "n^2"],
                &["n^2", "3n^3"],
                &["n^2", "3n^3+2n"],
                &["n", "2n^3+3n"],
                &["10n^5", "n^3+4n^2+4n"],
                &["0", "n^3+2n"],
                &["n^5", "n^3+n^2"],
            ],
        )
    }

    #[test]
    fn weights() {
        assert_eq!(
            seq(&["19n", "0"]).weight(),
            Weight::Proper { index: 1, degree: 1 }
        );
        assert_eq!(
            seq(&["4n^4", "n^2"]).weight(),
            Weight::Proper { index: 2, degree: 2 }
        );
        assert_eq!(seq(&["5", "7"]).weight(), Weight::SubUnit);
        assert!(Weight::SubUnit < Weight::Proper { index: 1, degree: 1 });
        assert!(
            Weight::Proper { index: 1, degree: 5 } < Weight::Proper { index: 2, degree: 1 }
        );
    }

    #[test]
    fn equivalence() {
        assert!(equivalent(&seq(&["7n^2+19n", "0"]), &seq(&["7n^2", "0"])));
        assert!(!equivalent(&seq(&["6n^2", "0"]), &seq(&["7n^2", "0"])));
        let s = seq(&["n^2", "3n^3"]);
        assert!(equivalent(&s, &s));
        assert!(equivalent(&seq(&["2", "3"]), &seq(&["5", "7"])));
        assert!(!equivalent(&seq(&["n", "1"]), &seq(&["1", "n"])));
    }

    #[test]
    fn example_weight_matrix() {
        let sys = example_system();
        assert_eq!(sys.degree(), 5);
        let m = sys.weight_matrix();
        assert_eq!((m.rows(), m.cols()), (2, 5));
        assert_eq!(m.row(1), &[1, 2, 0, 0, 0]);
        assert_eq!(m.row(2), &[0, 1, 3, 0, 0]);
        assert_eq!(m.ordinal().to_string(), "w^(7)*3 + w^(6) + w*2 + 1");
    }

    #[test]
    fn small_matrices() {
        let sys = system(1, &[&["n"], &["n^2"]]);
        let m = sys.weight_matrix();
        assert_eq!(m.row(1), &[1, 1]);
        assert_eq!(m.ordinal().to_string(), "w + 1");
        let single = system(1, &[&["n"]]);
        assert_eq!(single.weight_matrix().row(1), &[1]);
        assert_eq!(single.weight_matrix().ordinal(), Ordinal::one());
        let empty = PolySystem::new(1, std::iter::empty()).unwrap();
        assert_eq!(empty.weight_matrix().ordinal(), Ordinal::zero());
    }

    #[test]
    fn priority_order() {
        let m = WeightMatrix { rows: 1, cols: 2, counts: vec![0, 1] };
        let n = WeightMatrix { rows: 1, cols: 2, counts: vec![1, 1] };
        assert_eq!(m.cmp_priority(&n), Ordering::Less);
        assert_eq!(m.cmp_priority(&m), Ordering::Equal);
        let hi = WeightMatrix { rows: 1, cols: 2, counts: vec![9, 0] };
        let lo = WeightMatrix { rows: 1, cols: 2, counts: vec![0, 1] };
        assert_eq!(hi.cmp_priority(&lo), Ordering::Less);
    }

    #[test]
    fn single_bottom_entry_counts_smaller_matrices() {
        for k in 0..5u64 {
            let m = WeightMatrix { rows: 1, cols: 1, counts: vec![k] };
            assert_eq!(m.ordinal(), Ordinal::from(k));
        }
    }

    #[test]
    fn tilde_examples() {
        let sys = system(1, &[&["n"], &["n^2"]]);
        let t1 = sys.tilde(1);
        assert_eq!(t1, system(1, &[&["n"], &["n^2"], &["n^2+2n"]]));
        assert_eq!(sys.tilde(0), sys);
        let ex = example_system();
        let before = ex.weight_matrix();
        assert_eq!(ex.tilde(7).weight_matrix(), before);
        assert_eq!(t1.weight_matrix(), sys.weight_matrix());
    }

    #[test]
    fn reduce_linear_quadratic() {
        let sys = system(1, &[&["n"], &["n^2"]]);
        for h in [1i64, 2, 5] {
            let node = pet_reduce(&sys, h).unwrap();
            assert_eq!(node.pivot, seq(&["n"]));
            let shifted = format!("n^2+{}n", 2 * h - 1);
            let want = system(1, &[&["n^2-n"], &[shifted.as_str()]]);
            assert_eq!(node.reduced, want);
            assert_eq!(node.o_before.to_string(), "w + 1");
            assert_eq!(node.o_after.to_string(), "w");
        }
    }

    #[test]
    fn reduce_drops_class_count_for_distinct_linears() {
        let sys = system(1, &[&["n"], &["2n"], &["3n"]]);
        let node = pet_reduce(&sys, 1).unwrap();
        assert_eq!(node.system.weight_matrix().get(1, 1), 3);
        assert_eq!(node.reduced.weight_matrix().get(1, 1), 2);
    }

    #[test]
    fn reduce_rejects_subunit_members() {
        let sys = system(1, &[&["n"], &["5"]]);
        assert_eq!(pet_reduce(&sys, 1), Err(PetError::SubUnitMember));
    }

    #[test]
    fn degenerate_single_linear() {
        let sys = system(1, &[&["n"]]);
        assert_eq!(pet_reduce(&sys, 1), Err(PetError::DegenerateSystem));
        let tree = descent_tree(&sys, &[1], 3).unwrap();
        assert_eq!(tree.children.len(), 1);
        assert!(matches!(
            tree.children[0].outcome,
            DescentOutcome::Degenerate { .. }
        ));
    }

    #[test]
    fn descent_chain_linear_quadratic() {
        let sys = system(1, &[&["n"], &["n^2"]]);
        let tree = descent_tree(&sys, &[1], 5).unwrap();
        let mut ordinals = vec![tree.ordinal.clone()];
        let mut cur = &tree;
        loop {
            assert_eq!(cur.children.len(), 1);
            match &cur.children[0].outcome {
                DescentOutcome::Reduced { subtree, .. } => {
                    ordinals.push(subtree.ordinal.clone());
                    cur = subtree;
                }
                DescentOutcome::Degenerate { .. } => break,
            }
        }
        let rendered: Vec<String> = ordinals.iter().map(ToString::to_string).collect();
        assert_eq!(rendered, ["w + 1", "w", "2", "1"]);
        for w in ordinals.windows(2) {
            assert!(w[1] < w[0]);
        }
    }

    #[test]
    fn descent_tree_example_strictly_decreases() {
        let tree = descent_tree(&example_system(), &[1, 2], 4).unwrap();
        fn check(t: &DescentTree) {
            for edge in &t.children {
                if let DescentOutcome::Reduced { subtree, .. } = &edge.outcome {
                    assert!(subtree.ordinal < t.ordinal);
                    check(subtree);
                }
            }
        }
        check(&tree);
    }

    #[test]
    fn system_json_round_trip() {
        let sys = system(2, &[&["19n", "0"], &["6n^2", "0"]]);
        let json = serde_json::to_string(&sys).unwrap();
        let back: PolySystem = serde_json::from_str(&json).unwrap();
        assert_eq!(back, sys);
        let parsed: PolySystem =
            serde_json::from_str(r#"{"t":1,"seqs":[["n"],["n^2"]]}"#).unwrap();
        assert_eq!(parsed, system(1, &[&["n"], &["n^2"]]));
        assert!(serde_json::from_str::<PolySystem>(r#"{"t":2,"seqs":[["n"]]}"#).is_err());
    }
}
