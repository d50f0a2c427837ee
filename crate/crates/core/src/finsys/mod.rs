//! Finite measure-preserving ℤ^d actions and the exact identities on them.
//!
//! A [`FiniteSystem`] is a finite point set with uniform measure and a list
//! of pairwise commuting permutations (the generators). A [`Factor`] is an
//! action-invariant partition — the finite avatar of an invariant
//! sub-σ-algebra, which is exactly what makes conditional expectation commute
//! with the action. Observables are exact rational vectors; every identity in
//! this module holds with zero tolerance.
//!
//! Box averages of `g ⊗ g` live on the full square of the system; integrals
//! against a factor use the fibered measure of the relative product (pairs
//! over a common cell, weighted `1/(N·|cell|)`), whose both marginals are the
//! uniform measure.
//!
//! Floating point appears only in the metastable search (see [`met`]), where
//! the goal is an inequality against a tolerance rather than an identity.

pub mod met;
pub mod szemeredi;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pet::PolySystem;

pub use met::{metastable_met_check, MetCheck};
pub use szemeredi::{szemeredi_search, SearchOutcome, SearchReport, SzInstance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinsysError {
    #[error("generator {gen} is not a bijection on {size} points")]
    NotBijective { gen: usize, size: usize },
    #[error("generators {a} and {b} do not commute")]
    NonCommuting { a: usize, b: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("partition is not invariant under generator {gen}")]
    NotInvariant { gen: usize },
    #[error("tower level {level} does not refine the level below it")]
    NotRefining { level: usize },
    #[error("expected {expected} transformations, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("polynomials must vanish at 0")]
    NotIntegralZero,
    #[error("the set must have positive measure")]
    EmptySet,
    #[error("averaging length must be positive")]
    ZeroAverageLength,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("generator index {index} out of range ({count} generators)")]
    NoSuchGenerator { index: usize, count: usize },
    #[error("no tower level within some interval satisfies the tolerance up to the horizon")]
    ExhaustedTower,
    #[error("grid of {cells} cells exceeds the exhaustive-search cap {cap}")]
    GridTooLarge { cells: usize, cap: usize },
}

/// A permutation of the point set, stored with its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transform {
    fwd: Vec<usize>,
    inv: Vec<usize>,
}

impl Transform {
    pub fn identity(size: usize) -> Self {
        let id: Vec<usize> = (0..size).collect();
        Transform {
            fwd: id.clone(),
            inv: id,
        }
    }

    pub fn from_map(fwd: Vec<usize>) -> Option<Self> {
        let size = fwd.len();
        let mut inv = vec![usize::MAX; size];
        for (x, &y) in fwd.iter().enumerate() {
            if y >= size || inv[y] != usize::MAX {
                return None;
            }
            inv[y] = x;
        }
        Some(Transform { fwd, inv })
    }

    pub fn size(&self) -> usize {
        self.fwd.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.fwd[x]
    }

    pub fn apply_inverse(&self, x: usize) -> usize {
        self.inv[x]
    }

    pub fn map(&self) -> &[usize] {
        &self.fwd
    }

    pub fn inverse(&self) -> Transform {
        Transform {
            fwd: self.inv.clone(),
            inv: self.fwd.clone(),
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Transform) -> Transform {
        let fwd: Vec<usize> = (0..self.fwd.len()).map(|x| self.fwd[other.fwd[x]]).collect();
        Transform::from_map(fwd).expect("composition of bijections")
    }

    pub fn commutes_with(&self, other: &Transform) -> bool {
        self.compose(other) == other.compose(self)
    }

    /// Order of the permutation (lcm of cycle lengths).
    pub fn order(&self) -> u64 {
        let n = self.fwd.len();
        let mut seen = vec![false; n];
        let mut ord = 1u64;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.fwd[x];
                len += 1;
            }
            ord = num_integer::lcm(ord, len);
        }
        ord
    }

    /// Integer power, negative exponents via the inverse.
    pub fn power(&self, k: i64) -> Transform {
        let ord = self.order() as i64;
        let k = k.rem_euclid(ord) as u64;
        let mut acc = Transform::identity(self.fwd.len());
        let mut sq = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&sq);
            }
            sq = sq.compose(&sq);
            e >>= 1;
        }
        acc
    }

    /// Power with an arbitrary-precision exponent, reduced modulo the order.
    pub fn power_big(&self, k: &BigInt) -> Transform {
        let ord = BigInt::from(self.order());
        let r = ((k % &ord) + &ord) % &ord;
        let r = i64::try_from(&r).expect("reduced exponent fits i64");
        self.power(r)
    }
}

/// A finite uniform-measure system with commuting generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SystemRepr", into = "SystemRepr")]
pub struct FiniteSystem {
    size: usize,
    generators: Vec<Transform>,
}

#[derive(Serialize, Deserialize)]
struct SystemRepr {
    points: usize,
    generators: Vec<Vec<usize>>,
}

impl TryFrom<SystemRepr> for FiniteSystem {
    type Error = FinsysError;

    fn try_from(repr: SystemRepr) -> Result<Self, Self::Error> {
        FiniteSystem::new(repr.points, repr.generators)
    }
}

impl From<FiniteSystem> for SystemRepr {
    fn from(sys: FiniteSystem) -> Self {
        SystemRepr {
            points: sys.size,
            generators: sys.generators.into_iter().map(|t| t.fwd).collect(),
        }
    }
}

impl FiniteSystem {
    pub fn new(size: usize, generators: Vec<Vec<usize>>) -> Result<Self, FinsysError> {
        let mut gens = Vec::with_capacity(generators.len());
        for (i, g) in generators.into_iter().enumerate() {
            if g.len() != size {
                return Err(FinsysError::NotBijective { gen: i, size });
            }
            let t = Transform::from_map(g).ok_or(FinsysError::NotBijective { gen: i, size })?;
            gens.push(t);
        }
        for a in 0..gens.len() {
            for b in a + 1..gens.len() {
                if !gens[a].commutes_with(&gens[b]) {
                    return Err(FinsysError::NonCommuting { a, b });
                }
            }
        }
        Ok(FiniteSystem {
            size,
            generators: gens,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn generator(&self, i: usize) -> Result<&Transform, FinsysError> {
        self.generators.get(i).ok_or(FinsysError::NoSuchGenerator {
            index: i,
            count: self.generators.len(),
        })
    }

    pub fn generators(&self) -> &[Transform] {
        &self.generators
    }

    /// The transformation `Π generators[i]^k` for a word `(i, k), …`.
    pub fn word(&self, steps: &[(usize, i64)]) -> Result<Transform, FinsysError> {
        let mut t = Transform::identity(self.size);
        for &(i, k) in steps {
            t = t.compose(&self.generator(i)?.power(k));
        }
        Ok(t)
    }

    /// μ(S) = |S| / N.
    pub fn measure(&self, set: &[usize]) -> BigRational {
        BigRational::new(BigInt::from(set.len()), BigInt::from(self.size))
    }

    /// ∫ f dμ.
    pub fn integral(&self, f: &Obs) -> BigRational {
        assert_eq!(f.len(), self.size, "observable size mismatch");
        let sum: BigRational = f.values().iter().sum();
        sum / BigRational::from(BigInt::from(self.size))
    }

    /// ∫ f·g dμ.
    pub fn inner(&self, f: &Obs, g: &Obs) -> BigRational {
        self.integral(&f.mul(g))
    }

    /// ‖f‖² in L²(μ).
    pub fn norm2_sq(&self, f: &Obs) -> BigRational {
        self.inner(f, f)
    }

    /// Validates a partition as an invariant factor of this system.
    pub fn factor(&self, cells: Vec<Vec<usize>>) -> Result<Factor, FinsysError> {
        let f = Factor::new(self.size, cells)?;
        for (i, g) in self.generators.iter().enumerate() {
            if !f.is_invariant_under(g) {
                return Err(FinsysError::NotInvariant { gen: i });
            }
        }
        Ok(f)
    }
}

/// An action-invariant partition of the point set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factor {
    cells: Vec<Vec<usize>>,
    #[serde(skip)]
    cell_of: Vec<usize>,
}

impl Factor {
    /// Checks that the cells are nonempty, disjoint, and cover `0..size`.
    /// Invariance is checked separately against a system.
    pub fn new(size: usize, cells: Vec<Vec<usize>>) -> Result<Self, FinsysError> {
        let mut cell_of = vec![usize::MAX; size];
        for (c, cell) in cells.iter().enumerate() {
            if cell.is_empty() {
                return Err(FinsysError::InvalidPartition(format!("cell {c} is empty")));
            }
            for &x in cell {
                if x >= size {
                    return Err(FinsysError::InvalidPartition(format!(
                        "point {x} out of range"
                    )));
                }
                if cell_of[x] != usize::MAX {
                    return Err(FinsysError::InvalidPartition(format!(
                        "point {x} appears twice"
                    )));
                }
                cell_of[x] = c;
            }
        }
        if let Some(x) = cell_of.iter().position(|&c| c == usize::MAX) {
            return Err(FinsysError::InvalidPartition(format!(
                "point {x} not covered"
            )));
        }
        Ok(Factor { cells, cell_of })
    }

    /// The one-cell factor (trivial σ-algebra).
    pub fn trivial(size: usize) -> Self {
        Factor::new(size, vec![(0..size).collect()]).expect("one covering cell")
    }

    /// The singleton-cell factor (full σ-algebra).
    pub fn discrete(size: usize) -> Self {
        Factor::new(size, (0..size).map(|x| vec![x]).collect()).expect("singleton cells")
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell_index(&self, x: usize) -> usize {
        self.cell_of[x]
    }

    pub fn size(&self) -> usize {
        self.cell_of.len()
    }

    /// True when every cell is carried onto a cell by `t`.
    pub fn is_invariant_under(&self, t: &Transform) -> bool {
        self.cells.iter().all(|cell| {
            let target = self.cell_of[t.apply(cell[0])];
            cell.iter().all(|&x| self.cell_of[t.apply(x)] == target)
                && self.cells[target].len() == cell.len()
        })
    }

    /// True when every cell of `self` lies inside a cell of `coarser`.
    pub fn refines(&self, coarser: &Factor) -> bool {
        self.cells.iter().all(|cell| {
            let target = coarser.cell_of[cell[0]];
            cell.iter().all(|&x| coarser.cell_of[x] == target)
        })
    }
}

/// An increasing tower: each level is invariant and refines the one below.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorTower {
    factors: Vec<Factor>,
}

impl FactorTower {
    pub fn new(system: &FiniteSystem, cells: Vec<Vec<Vec<usize>>>) -> Result<Self, FinsysError> {
        let factors: Vec<Factor> = cells
            .into_iter()
            .map(|c| system.factor(c))
            .collect::<Result<_, _>>()?;
        Self::from_factors(factors)
    }

    pub fn from_factors(factors: Vec<Factor>) -> Result<Self, FinsysError> {
        for i in 1..factors.len() {
            if !factors[i].refines(&factors[i - 1]) {
                return Err(FinsysError::NotRefining { level: i });
            }
        }
        Ok(FactorTower { factors })
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn level(&self, i: usize) -> &Factor {
        &self.factors[i]
    }

    pub fn levels(&self) -> &[Factor] {
        &self.factors
    }
}

/// An exact rational observable: one value per point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Obs {
    values: Vec<BigRational>,
}

impl Obs {
    pub fn new(values: Vec<BigRational>) -> Self {
        Obs { values }
    }

    pub fn constant(size: usize, value: BigRational) -> Self {
        Obs {
            values: vec![value; size],
        }
    }

    pub fn zero(size: usize) -> Self {
        Obs::constant(size, BigRational::zero())
    }

    /// The indicator χ_S.
    pub fn indicator(size: usize, set: &[usize]) -> Self {
        let mut values = vec![BigRational::zero(); size];
        for &x in set {
            values[x] = BigRational::one();
        }
        Obs { values }
    }

    pub fn from_ints<I, T>(values: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        Obs {
            values: values
                .into_iter()
                .map(|v| BigRational::from(v.into()))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn get(&self, x: usize) -> &BigRational {
        &self.values[x]
    }

    /// The observable `x ↦ f(T⁻¹ x)`, i.e. `T` applied to `f`.
    pub fn transported(&self, t: &Transform) -> Obs {
        Obs {
            values: (0..self.values.len())
                .map(|x| self.values[t.inv[x]].clone())
                .collect(),
        }
    }

    pub fn mul(&self, other: &Obs) -> Obs {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn add(&self, other: &Obs) -> Obs {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Obs) -> Obs {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, k: &BigRational) -> Obs {
        Obs {
            values: self.values.iter().map(|v| v * k).collect(),
        }
    }

    fn zip_with(&self, other: &Obs, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Obs {
        assert_eq!(self.len(), other.len(), "observable size mismatch");
        Obs {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|v| bigint_f64(v.numer()) / bigint_f64(v.denom()))
            .collect()
    }
}

fn bigint_f64(x: &BigInt) -> f64 {
    let (sign, digits) = x.to_u64_digits();
    let mut acc = 0.0f64;
    for &d in digits.iter().rev() {
        acc = acc * 1.844_674_407_370_955_2e19 + d as f64; // 2^64
    }
    if sign == num_bigint::Sign::Minus {
        -acc
    } else {
        acc
    }
}

/// An observable on the square of the system, indexed `(x, y) ↦ x·N + y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareObs {
    size: usize,
    values: Vec<BigRational>,
}

impl SquareObs {
    pub fn zero(size: usize) -> Self {
        SquareObs {
            size,
            values: vec![BigRational::zero(); size * size],
        }
    }

    /// `f ⊗ g`.
    pub fn tensor(f: &Obs, g: &Obs) -> Self {
        assert_eq!(f.len(), g.len(), "observable size mismatch");
        let size = f.len();
        let mut values = Vec::with_capacity(size * size);
        for x in 0..size {
            for y in 0..size {
                values.push(f.get(x) * g.get(y));
            }
        }
        SquareObs { size, values }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, x: usize, y: usize) -> &BigRational {
        &self.values[x * self.size + y]
    }

    /// Integral against the fibered measure of the relative product over
    /// `factor`: pairs over a common cell `C` carry weight `1/(N·|C|)`.
    pub fn fiber_integral(&self, factor: &Factor) -> BigRational {
        assert_eq!(factor.size(), self.size, "factor size mismatch");
        let n = BigInt::from(self.size);
        let mut acc = BigRational::zero();
        for cell in factor.cells() {
            let weight = BigRational::new(BigInt::one(), &n * BigInt::from(cell.len()));
            let mut cell_sum = BigRational::zero();
            for &x in cell {
                for &y in cell {
                    cell_sum += self.get(x, y);
                }
            }
            acc += cell_sum * weight;
        }
        acc
    }
}

/// Conditional expectation: the cell-wise average of `f`. Idempotent,
/// linear, integral-preserving, and a contraction in the mean-square norm.
pub fn cond_exp(system: &FiniteSystem, f: &Obs, factor: &Factor) -> Obs {
    assert_eq!(f.len(), system.size(), "observable size mismatch");
    assert_eq!(factor.size(), system.size(), "factor size mismatch");
    let mut values = vec![BigRational::zero(); system.size()];
    for cell in factor.cells() {
        let sum: BigRational = cell.iter().map(|&x| f.get(x)).sum();
        let avg = sum / BigRational::from(BigInt::from(cell.len()));
        for &x in cell {
            values[x] = avg.clone();
        }
    }
    Obs::new(values)
}

/// The box average `(n+1)^{-t} Σ_{i ∈ [0,n]^t} T⃗^{-i}(g ⊗ g)` on the square,
/// with the diagonal action of the selected generators. With `n = 0` this is
/// `g ⊗ g` itself.
pub fn h_average(
    system: &FiniteSystem,
    g: &Obs,
    gens: &[usize],
    n: u64,
) -> Result<SquareObs, FinsysError> {
    if gens.is_empty() {
        return Err(FinsysError::InvalidParameter(
            "at least one generator is required".into(),
        ));
    }
    assert_eq!(g.len(), system.size(), "observable size mismatch");
    let size = system.size();
    let mut powers = Vec::with_capacity(gens.len());
    for &i in gens {
        let t = system.generator(i)?;
        let mut axis = Vec::with_capacity(n as usize + 1);
        let mut cur = g.clone();
        axis.push(cur.clone());
        let inv = t.inverse();
        for _ in 0..n {
            cur = cur.transported(&inv);
            axis.push(cur.clone());
        }
        powers.push(axis);
    }

    let mut acc = SquareObs::zero(size);
    let mut index = vec![0usize; gens.len()];
    loop {
        // g pushed through T⃗^{-i}: fold the per-axis translates. For one
        // generator this is a table lookup; for several, compose pointwise.
        let shifted = if gens.len() == 1 {
            powers[0][index[0]].clone()
        } else {
            let mut word = Transform::identity(size);
            for (axis, &i) in index.iter().enumerate() {
                word = word.compose(&system.generator(gens[axis])?.power(-(i as i64)));
            }
            g.transported(&word)
        };
        for x in 0..size {
            let fx = shifted.get(x);
            if fx.is_zero() {
                continue;
            }
            for y in 0..size {
                let v = fx * shifted.get(y);
                acc.values[x * size + y] += v;
            }
        }
        // Advance the box odometer.
        let mut axis = 0;
        loop {
            if axis == gens.len() {
                let count = BigRational::from(BigInt::from((n + 1).pow(gens.len() as u32)));
                for v in &mut acc.values {
                    *v /= &count;
                }
                return Ok(acc);
            }
            if (index[axis] as u64) < n {
                index[axis] += 1;
                for a in index.iter_mut().take(axis) {
                    *a = 0;
                }
                break;
            }
            axis += 1;
        }
    }
}

/// The fiberwise convolution of the box-average kernel against `h`:
///
/// `(1/m) Σ_{i<m} T^{-i}g · E(h · T^{-i}g | factor)`.
///
/// When `E(h|factor) = 0`, pairing the result against `h` reproduces
/// `(1/m) Σ_i ∫ E(h·T^{-i}g | factor)² dμ` exactly.
pub fn star_conv(
    system: &FiniteSystem,
    g: &Obs,
    h: &Obs,
    word: &Transform,
    factor: &Factor,
    m: u64,
) -> Result<Obs, FinsysError> {
    if m == 0 {
        return Err(FinsysError::ZeroAverageLength);
    }
    assert_eq!(g.len(), system.size(), "observable size mismatch");
    assert_eq!(h.len(), system.size(), "observable size mismatch");
    let t_inv = word.inverse();
    let mut acc = Obs::zero(system.size());
    let mut gi = g.clone();
    for i in 0..m {
        if i > 0 {
            gi = gi.transported(&t_inv);
        }
        let e = cond_exp(system, &h.mul(&gi), factor);
        acc = acc.add(&gi.mul(&e));
    }
    Ok(acc.scale(&BigRational::new(BigInt::one(), BigInt::from(m))))
}

/// The exact finite multiple-recurrence average
///
/// `(1/m) Σ_{i<m} μ( ∩_{p⃗ ∈ A} Π_j T_j^{-p_j(i)} B )`.
///
/// Members of `A` must vanish at 0, so the `i = 0` term is μ(B).
pub fn multi_recurrence_avg(
    system: &FiniteSystem,
    words: &[Transform],
    polys: &PolySystem,
    b: &[usize],
    m: u64,
) -> Result<BigRational, FinsysError> {
    if m == 0 {
        return Err(FinsysError::ZeroAverageLength);
    }
    if polys.arity() != words.len() {
        return Err(FinsysError::ArityMismatch {
            expected: polys.arity(),
            got: words.len(),
        });
    }
    if polys.members().iter().any(|s| !s.is_integral_zero()) {
        return Err(FinsysError::NotIntegralZero);
    }
    let set: BTreeSet<usize> = b.iter().copied().collect();
    if set.is_empty() {
        return Err(FinsysError::EmptySet);
    }
    if set.iter().any(|&x| x >= system.size()) {
        return Err(FinsysError::InvalidParameter(
            "set point out of range".into(),
        ));
    }

    let size = system.size();
    let mut total = BigRational::zero();
    for i in 0..m {
        let at = BigInt::from(i);
        let mut inter: Vec<bool> = vec![true; size];
        for seq in polys.members() {
            let mut t = Transform::identity(size);
            for (j, p) in seq.polys().iter().enumerate() {
                let e = -p.eval_int(&at);
                t = t.compose(&words[j].power_big(&e));
            }
            let mut image = vec![false; size];
            for &x in &set {
                image[t.apply(x)] = true;
            }
            for (keep, hit) in inter.iter_mut().zip(&image) {
                *keep = *keep && *hit;
            }
        }
        let count = inter.iter().filter(|&&k| k).count();
        total += BigRational::new(BigInt::from(count), BigInt::from(size));
    }
    Ok(total / BigRational::from(BigInt::from(m)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Rotation x ↦ x+1 on Z_m.
    fn rotation(m: usize) -> FiniteSystem {
        FiniteSystem::new(m, vec![(0..m).map(|x| (x + 1) % m).collect()]).unwrap()
    }

    #[test]
    fn system_validation() {
        assert!(matches!(
            FiniteSystem::new(3, vec![vec![0, 0, 1]]),
            Err(FinsysError::NotBijective { .. })
        ));
        // A swap and a 3-cycle on overlapping points do not commute.
        assert!(matches!(
            FiniteSystem::new(3, vec![vec![1, 0, 2], vec![1, 2, 0]]),
            Err(FinsysError::NonCommuting { .. })
        ));
        // Two coordinate translations on Z_2 × Z_2 commute.
        let grid = FiniteSystem::new(4, vec![vec![1, 0, 3, 2], vec![2, 3, 0, 1]]).unwrap();
        assert_eq!(grid.generator_count(), 2);
    }

    #[test]
    fn factor_validation() {
        let sys = rotation(4);
        let f = sys.factor(vec![vec![0, 2], vec![1, 3]]).unwrap();
        assert_eq!(f.cell_index(2), 0);
        // {0,1},{2,3} is a partition but the rotation does not carry cells to cells.
        assert!(matches!(
            sys.factor(vec![vec![0, 1], vec![2, 3]]),
            Err(FinsysError::NotInvariant { .. })
        ));
        assert!(matches!(
            Factor::new(3, vec![vec![0, 1]]),
            Err(FinsysError::InvalidPartition(_))
        ));
        assert!(matches!(
            Factor::new(3, vec![vec![0, 1], vec![1, 2]]),
            Err(FinsysError::InvalidPartition(_))
        ));
    }

    #[test]
    fn cond_exp_examples() {
        let sys = rotation(4);
        let f = Obs::from_ints([1, 0, 0, 0]);
        let trivial = Factor::trivial(4);
        assert_eq!(cond_exp(&sys, &f, &trivial), Obs::constant(4, rat(1, 4)));
        let discrete = Factor::discrete(4);
        assert_eq!(cond_exp(&sys, &f, &discrete), f);
        let parity = sys.factor(vec![vec![0, 2], vec![1, 3]]).unwrap();
        let e = cond_exp(&sys, &f, &parity);
        assert_eq!(e.values(), &[rat(1, 2), rat(0, 1), rat(1, 2), rat(0, 1)]);
        // Idempotence, integral preservation, contraction.
        assert_eq!(cond_exp(&sys, &e, &parity), e);
        assert_eq!(sys.integral(&e), sys.integral(&f));
        assert!(sys.norm2_sq(&e) <= sys.norm2_sq(&f));
    }

    #[test]
    fn h_average_basics() {
        let sys = rotation(3);
        let g = Obs::from_ints([2, -1, 1]);
        // n = 0: the tensor square itself.
        let h0 = h_average(&sys, &g, &[0], 0).unwrap();
        assert_eq!(h0, SquareObs::tensor(&g, &g));
        // Constant g: constant c² at every n.
        let c = Obs::constant(3, rat(3, 2));
        let hc = h_average(&sys, &c, &[0], 5).unwrap();
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(hc.get(x, y), &rat(9, 4));
            }
        }
    }

    #[test]
    fn h_average_against_direct_summation() {
        let sys = FiniteSystem::new(4, vec![vec![1, 0, 3, 2], vec![2, 3, 0, 1]]).unwrap();
        let g = Obs::from_ints([3, -1, 0, 2]);
        let n = 2u64;
        let h = h_average(&sys, &g, &[0, 1], n).unwrap();
        // Direct summation oracle over the box.
        let mut want = SquareObs::zero(4);
        for i0 in 0..=n {
            for i1 in 0..=n {
                let t = sys.word(&[(0, -(i0 as i64)), (1, -(i1 as i64))]).unwrap();
                let gi = g.transported(&t);
                for x in 0..4 {
                    for y in 0..4 {
                        want.values[x * 4 + y] += gi.get(x) * gi.get(y);
                    }
                }
            }
        }
        let count = BigRational::from(BigInt::from(((n + 1) * (n + 1)) as i64));
        for v in &mut want.values {
            *v /= &count;
        }
        assert_eq!(h, want);
    }

    #[test]
    fn rotation_full_period_integral_is_squared_mean() {
        // At the exact period the box average integrates (against any factor)
        // to the squared mean, and convolving against the constant 1 over the
        // trivial factor gives the constant squared mean.
        let m = 5usize;
        let sys = rotation(m);
        let g = Obs::from_ints([2, 0, -1, 3, 1]);
        let mean = sys.integral(&g);
        let trivial = Factor::trivial(m);
        let h = h_average(&sys, &g, &[0], m as u64 - 1).unwrap();
        assert_eq!(h.fiber_integral(&trivial), &mean * &mean);
        let conv = star_conv(
            &sys,
            &g,
            &Obs::constant(m, BigRational::one()),
            sys.generator(0).unwrap(),
            &trivial,
            m as u64,
        )
        .unwrap();
        assert_eq!(conv, Obs::constant(m, &mean * &mean));
    }

    #[test]
    fn star_conv_small_cases() {
        let sys = rotation(4);
        let parity = sys.factor(vec![vec![0, 2], vec![1, 3]]).unwrap();
        let g = Obs::from_ints([1, 2, -1, 0]);
        let h = Obs::from_ints([0, 1, 1, -2]);
        // m = 1: g · E(h·g | Y).
        let m1 = star_conv(&sys, &g, &h, sys.generator(0).unwrap(), &parity, 1).unwrap();
        assert_eq!(m1, g.mul(&cond_exp(&sys, &h.mul(&g), &parity)));
        // g measurable w.r.t. Y and h orthogonal to Y force 0.
        let gy = Obs::from_ints([3, -1, 3, -1]); // constant on parity cells
        let hperp = Obs::from_ints([1, 2, -1, -2]); // zero cell averages
        assert_eq!(cond_exp(&sys, &hperp, &parity), Obs::zero(4));
        let conv = star_conv(&sys, &gy, &hperp, sys.generator(0).unwrap(), &parity, 3).unwrap();
        assert_eq!(conv, Obs::zero(4));
    }

    #[test]
    fn star_conv_pairing_identity() {
        // ∫ h·(H ∗ h) = (1/m) Σ_i ∫ E(h·T^{-i}g | Y)² when E(h|Y) = 0.
        let sys = rotation(3);
        let trivial = Factor::trivial(3);
        let g = Obs::from_ints([1, 1, 0]);
        let h = Obs::from_ints([1, -1, 0]); // mean zero
        let m = 2u64;
        let conv = star_conv(&sys, &g, &h, sys.generator(0).unwrap(), &trivial, m).unwrap();
        let lhs = sys.inner(&h, &conv);
        let t_inv = sys.generator(0).unwrap().inverse();
        let mut rhs = BigRational::zero();
        let mut gi = g.clone();
        for i in 0..m {
            if i > 0 {
                gi = gi.transported(&t_inv);
            }
            let e = cond_exp(&sys, &h.mul(&gi), &trivial);
            rhs += sys.norm2_sq(&e);
        }
        rhs /= BigRational::from(BigInt::from(m));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn relative_product_marginals() {
        let sys = rotation(4);
        let parity = sys.factor(vec![vec![0, 2], vec![1, 3]]).unwrap();
        let f = Obs::from_ints([1, 2, 3, 4]);
        let one = Obs::constant(4, BigRational::one());
        assert_eq!(
            SquareObs::tensor(&f, &one).fiber_integral(&parity),
            sys.integral(&f)
        );
        assert_eq!(
            SquareObs::tensor(&one, &f).fiber_integral(&parity),
            sys.integral(&f)
        );
    }

    #[test]
    fn multi_recurrence_examples() {
        use crate::pet::PolySeq;
        let sys = rotation(5);
        let word = sys.generator(0).unwrap().clone();
        let polys = PolySystem::new(
            1,
            ["0", "n", "2n"]
                .iter()
                .map(|p| PolySeq::new(vec![p.parse().unwrap()])),
        )
        .unwrap();
        // B = everything: every term is 1.
        let all: Vec<usize> = (0..5).collect();
        let avg = multi_recurrence_avg(&sys, &[word.clone()], &polys, &all, 7).unwrap();
        assert_eq!(avg, BigRational::one());
        // Single zero sequence: every term is μ(B).
        let zero_only = PolySystem::new(1, [PolySeq::new(vec!["0".parse().unwrap()])]).unwrap();
        let avg = multi_recurrence_avg(&sys, &[word.clone()], &zero_only, &[0, 2], 4).unwrap();
        assert_eq!(avg, rat(2, 5));
        // m = 1 ⇒ only the i = 0 term, which is μ(B) since every map fixes 0.
        let avg = multi_recurrence_avg(&sys, &[word.clone()], &polys, &[0, 1, 2], 1).unwrap();
        assert_eq!(avg, rat(3, 5));
        // Dual evaluation: set intersection vs pointwise indicator product.
        let b = vec![0usize, 1, 2];
        let m = 5u64;
        let avg = multi_recurrence_avg(&sys, &[word.clone()], &polys, &b, m).unwrap();
        let mut want = BigRational::zero();
        for i in 0..m {
            let at = BigInt::from(i);
            let mut prod_sum = BigRational::zero();
            for x in 0..5usize {
                let mut prod = BigRational::one();
                for seq in polys.members() {
                    let e = -seq.polys()[0].eval_int(&at);
                    let t = word.power_big(&e);
                    // x ∈ T B  ⇔  T⁻¹ x ∈ B
                    let pre = t.apply_inverse(x);
                    if !b.contains(&pre) {
                        prod *= BigRational::zero();
                    }
                }
                prod_sum += prod;
            }
            want += prod_sum / BigRational::from(BigInt::from(5));
        }
        want /= BigRational::from(BigInt::from(m));
        assert_eq!(avg, want);
    }

    #[test]
    fn multi_recurrence_validation() {
        use crate::pet::PolySeq;
        let sys = rotation(5);
        let word = sys.generator(0).unwrap().clone();
        let not_zero = PolySystem::new(1, [PolySeq::new(vec!["n+1".parse().unwrap()])]).unwrap();
        assert!(matches!(
            multi_recurrence_avg(&sys, &[word.clone()], &not_zero, &[0], 3),
            Err(FinsysError::NotIntegralZero)
        ));
        let ok = PolySystem::new(1, [PolySeq::new(vec!["n".parse().unwrap()])]).unwrap();
        assert!(matches!(
            multi_recurrence_avg(&sys, &[word.clone()], &ok, &[], 3),
            Err(FinsysError::EmptySet)
        ));
        assert!(matches!(
            multi_recurrence_avg(&sys, &[word], &ok, &[0], 0),
            Err(FinsysError::ZeroAverageLength)
        ));
    }

    #[test]
    fn tower_validation() {
        let sys = rotation(4);
        let coarse = vec![vec![0, 1, 2, 3]];
        let fine = vec![vec![0, 2], vec![1, 3]];
        assert!(FactorTower::new(&sys, vec![coarse.clone(), fine.clone()]).is_ok());
        assert!(matches!(
            FactorTower::new(&sys, vec![fine, coarse]),
            Err(FinsysError::NotRefining { level: 1 })
        ));
    }
}
