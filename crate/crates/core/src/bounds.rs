//! Bound-composition calculus: turns a system's weight-matrix ordinal into a
//! concrete metastability exponent, with an auditable derivation tree.
//!
//! A [`BoundClass`] with exponent `e` stands for the guarantee "there is a
//! θ < ω^e such that every θ-indexed tower sequence admits the metastable
//! property". Three composition rules manipulate exponents:
//!
//! * [`pair_bound`] — joining two guarantees costs `(e₁ + e₂) - 1`,
//! * [`split_bound`] — splitting a function into projection and remainder
//!   costs `e·2 - 1` (exactly `pair_bound` of a guarantee with itself),
//! * [`tech_bound`] — chaining a one-shot guarantee before a family costs
//!   `e₀ + e_d`.
//!
//! Subtracting 1 removes one unit from the final term of the normal form;
//! when the final term is a limit the subtraction is the identity, which only
//! weakens the guarantee and so stays sound.
//!
//! [`polywm_bound`] composes these along the PET descent of a polynomial
//! system. The recursion runs once per weight-rank level of the system
//! ordinal `o(A)`: writing `o(A) = ω^R·c + …`, the bound applies `R`
//! composition levels above the base constant, each level being one tech
//! step against the inductive bound, one pair step for the degree-one side
//! condition, and `D` successive binary splits (the 2^D case reduction).
//! Keying the recursion to the rank level rather than to one concrete
//! reduction chain makes the exponent a monotone function of
//! `(o(A), D)` — concrete chains of equal ordinal can differ in length — and
//! every exponent produced for a concrete system is finite.
//!
//! The computed exponent always satisfies `exponent < (o(A) + 1) · c(D)` for
//! the documented cost ceiling `c(D) = (2K + 2) · 2^D`, where `K ≥ 1` is the
//! opaque base constant of the mean-ergodic guarantee, and `ω^exponent` stays
//! below the tower ω^(ω^(ω^ω)).

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::ordinal::Ordinal;
use crate::pet::{PetError, PolySystem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("bound exponents must be positive")]
    ZeroExponent,
    #[error("the base constant must be positive")]
    ZeroBaseConstant,
    #[error(transparent)]
    Pet(#[from] PetError),
    #[error("containment check failed: {exponent} is not below {ceiling} (implementation bug)")]
    ContainmentViolation { exponent: Ordinal, ceiling: Ordinal },
}

/// The guarantee "there is a θ < ω^exponent …"; exponents are positive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundClass {
    exponent: Ordinal,
}

impl BoundClass {
    pub fn new(exponent: Ordinal) -> Result<Self, BoundsError> {
        if exponent.is_zero() {
            return Err(BoundsError::ZeroExponent);
        }
        Ok(BoundClass { exponent })
    }

    pub fn exponent(&self) -> &Ordinal {
        &self.exponent
    }
}

/// Joint guarantee for two properties: exponent `(e₁ + e₂) - 1`.
pub fn pair_bound(b1: &BoundClass, b2: &BoundClass) -> BoundClass {
    BoundClass {
        exponent: b1.exponent.add(&b2.exponent).saturating_pred(),
    }
}

/// Projection/remainder split: exponent `e·2 - 1`, equal to
/// `pair_bound(b, b)`.
pub fn split_bound(b: &BoundClass) -> BoundClass {
    BoundClass {
        exponent: b
            .exponent
            .mul(&Ordinal::from(2u64))
            .saturating_pred(),
    }
}

/// One-shot guarantee chained before a uniform family: exponent `e₀ + e_d`.
pub fn tech_bound(b0: &BoundClass, bd: &BoundClass) -> BoundClass {
    BoundClass {
        exponent: b0.exponent.add(&bd.exponent),
    }
}

/// The rule applied at a derivation node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    Base,
    Tech,
    Pair,
    Split,
    PolyRecursion,
}

/// One node of the audit tree: which rule fired, the input exponents it
/// consumed, and the exponent it produced. Children derive the inputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundDerivation {
    pub rule: Rule,
    pub inputs: Vec<Ordinal>,
    pub output: Ordinal,
    pub children: Vec<BoundDerivation>,
}

impl BoundDerivation {
    fn leaf(rule: Rule, output: Ordinal) -> Self {
        BoundDerivation {
            rule,
            inputs: Vec::new(),
            output,
            children: Vec::new(),
        }
    }

    /// Total node count, for reporting.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(BoundDerivation::size).sum::<usize>()
    }
}

/// The documented cost ceiling `c(D) = (2K + 2) · 2^D`.
pub fn cost_ceiling(met_constant: u64, degree: usize) -> Ordinal {
    let c = BigUint::from(2 * met_constant + 2) << degree;
    Ordinal::from(c)
}

/// Composes the rules along the PET descent of `system` and returns the
/// resulting bound with its full derivation.
///
/// `met_constant` is the opaque positive base constant `K` of the underlying
/// mean-ergodic guarantee (its precise value is not derivable here; every
/// containment property holds uniformly in it). The result satisfies
/// `exponent < (o(A) + 1) · c(D)` and `ω^exponent < ω^(ω^(ω^ω))`; violation
/// of either is reported as an internal error, never returned as a value.
pub fn polywm_bound(
    system: &PolySystem,
    met_constant: u64,
) -> Result<(BoundClass, BoundDerivation), BoundsError> {
    if met_constant == 0 {
        return Err(BoundsError::ZeroBaseConstant);
    }
    if system.is_empty() {
        return Err(PetError::EmptySystem.into());
    }
    if system.has_subunit_member() {
        return Err(PetError::SubUnitMember.into());
    }
    if !system.is_pairwise_essentially_distinct() {
        return Err(PetError::NotEssentiallyDistinct.into());
    }
    let gamma = system.weight_matrix().ordinal();
    let rank = gamma
        .leading_exponent()
        .expect("a system without all-constant members has a positive ordinal")
        .nat_value()
        .expect("weight ranks are finite");
    let levels = usize::try_from(&rank).expect("weight rank fits a machine word");
    let degree = system.degree();
    let base = BoundClass::new(Ordinal::from(met_constant))?;

    let mut derivation = BoundDerivation::leaf(Rule::Base, base.exponent().clone());
    for _ in 0..levels {
        derivation = level_step(derivation, &base, degree);
    }
    let bound = BoundClass::new(derivation.output.clone())?;

    let ceiling = gamma
        .add(&Ordinal::one())
        .mul(&cost_ceiling(met_constant, degree));
    if *bound.exponent() >= ceiling {
        return Err(BoundsError::ContainmentViolation {
            exponent: bound.exponent().clone(),
            ceiling,
        });
    }
    let tower = Ordinal::omega_tower(4);
    let reach = Ordinal::omega_pow(bound.exponent());
    if reach >= tower {
        return Err(BoundsError::ContainmentViolation {
            exponent: reach,
            ceiling: tower,
        });
    }
    Ok((bound, derivation))
}

/// One composition level: tech against the inductive bound, pair for the
/// degree-one side condition, then `degree` binary splits.
fn level_step(prev: BoundDerivation, base: &BoundClass, degree: usize) -> BoundDerivation {
    let ih = BoundClass::new(prev.output.clone()).expect("derivation outputs are positive");
    let ih_exponent = prev.output.clone();

    let teched = tech_bound(&ih, base);
    let tech_node = BoundDerivation {
        rule: Rule::Tech,
        inputs: vec![ih_exponent.clone(), base.exponent().clone()],
        output: teched.exponent().clone(),
        children: vec![prev, BoundDerivation::leaf(Rule::Base, base.exponent().clone())],
    };

    let paired = pair_bound(&teched, base);
    let mut node = BoundDerivation {
        rule: Rule::Pair,
        inputs: vec![teched.exponent().clone(), base.exponent().clone()],
        output: paired.exponent().clone(),
        children: vec![tech_node, BoundDerivation::leaf(Rule::Base, base.exponent().clone())],
    };
    let mut class = paired;

    for _ in 0..degree {
        class = split_bound(&class);
        node = BoundDerivation {
            rule: Rule::Split,
            inputs: vec![node.output.clone()],
            output: class.exponent().clone(),
            children: vec![node],
        };
    }

    BoundDerivation {
        rule: Rule::PolyRecursion,
        inputs: vec![ih_exponent],
        output: node.output.clone(),
        children: vec![node],
    }
}
