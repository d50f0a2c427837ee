//! Ordinals below ε₀ in Cantor normal form.
//!
//! An [`Ordinal`] is a finite sum `ω^e₁·c₁ + … + ω^eₖ·cₖ` with hereditarily
//! normal exponents `e₁ > e₂ > … > eₖ` (themselves ordinals) and positive
//! integer coefficients. The empty sum is 0. Normalization happens on
//! construction, so every value in circulation is canonical and structural
//! equality coincides with ordinal equality.
//!
//! Only the operations actually needed upstream are provided: comparison,
//! (non-commutative) sum and product, base-ω exponentiation, and the textual
//! grammar
//!
//! ```text
//! expr := term ('+' term)*
//! term := 'w' ('^' '(' expr ')')? ('*' nat)? | nat
//! ```
//!
//! so `w^(2)*3 + w*2 + 5` denotes ω²·3 + ω·2 + 5. Parsing normalizes rather
//! than rejects: `1+w` parses to `w`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// One CNF monomial `ω^exp · coeff`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Term {
    exp: Ordinal,
    coeff: BigUint,
}

/// An ordinal below ε₀ in Cantor normal form.
///
/// ```
/// use ordpet_core::Ordinal;
///
/// let a: Ordinal = "w^(2)*2 + w".parse().unwrap();
/// let b: Ordinal = "w^(2)".parse().unwrap();
/// assert_eq!(a.add(&b).to_string(), "w^(2)*3");
/// assert_eq!(Ordinal::from(1u64).add(&Ordinal::omega()), Ordinal::omega());
/// ```
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Ordinal {
    /// Strictly decreasing exponents, coefficients ≥ 1.
    terms: Vec<Term>,
}

impl Ordinal {
    /// The ordinal 0 (empty sum).
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    /// The ordinal 1 = ω⁰·1.
    pub fn one() -> Self {
        Ordinal::from(1u64)
    }

    /// The ordinal ω.
    pub fn omega() -> Self {
        Ordinal::omega_pow(&Ordinal::one())
    }

    /// ω^e as a single-term normal form.
    pub fn omega_pow(e: &Ordinal) -> Self {
        Ordinal {
            terms: vec![Term {
                exp: e.clone(),
                coeff: BigUint::one(),
            }],
        }
    }

    /// The exponential tower ω^ω^…^ω of the given height; height 0 is 1.
    pub fn omega_tower(height: u32) -> Self {
        let mut t = Ordinal::one();
        for _ in 0..height {
            t = Ordinal::omega_pow(&t);
        }
        t
    }

    /// Builds the ordinal whose normal form consists of the given monomials.
    /// Exponents may arrive in any order; equal exponents merge additively and
    /// zero coefficients vanish.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Ordinal, BigUint)>,
    {
        let mut ts: Vec<(Ordinal, BigUint)> =
            terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        ts.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<Term> = Vec::with_capacity(ts.len());
        for (exp, coeff) in ts {
            match out.last_mut() {
                Some(last) if last.exp == exp => last.coeff += coeff,
                _ => out.push(Term { exp, coeff }),
            }
        }
        Ordinal { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value as a natural number, if the ordinal is finite.
    pub fn nat_value(&self) -> Option<BigUint> {
        match self.terms.len() {
            0 => Some(BigUint::zero()),
            1 if self.terms[0].exp.is_zero() => Some(self.terms[0].coeff.clone()),
            _ => None,
        }
    }

    /// The leading CNF exponent, or `None` for 0.
    pub fn leading_exponent(&self) -> Option<&Ordinal> {
        self.terms.first().map(|t| &t.exp)
    }

    /// The monomials of the normal form, leading term first.
    pub fn monomials(&self) -> impl Iterator<Item = (&Ordinal, &BigUint)> {
        self.terms.iter().map(|t| (&t.exp, &t.coeff))
    }

    /// True when the ordinal has an immediate predecessor (final term ω⁰·c).
    pub fn is_successor(&self) -> bool {
        self.terms.last().map_or(false, |t| t.exp.is_zero())
    }

    /// Removes one unit from the final term when it is finite; limits and 0
    /// map to themselves.
    pub fn saturating_pred(&self) -> Ordinal {
        if !self.is_successor() {
            return self.clone();
        }
        let mut terms = self.terms.clone();
        let last = terms.last_mut().expect("successor has a final term");
        last.coeff -= BigUint::one();
        if last.coeff.is_zero() {
            terms.pop();
        }
        Ordinal { terms }
    }

    /// Ordinal sum. Terms of `self` below the leading exponent of `other` are
    /// absorbed: `1 + ω = ω` but `ω + 1 = ω+1`.
    pub fn add(&self, other: &Ordinal) -> Ordinal {
        let Some(lead) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<Term> = self
            .terms
            .iter()
            .take_while(|t| t.exp > lead.exp)
            .cloned()
            .collect();
        let keep = terms.len();
        let mut rest = other.terms.clone();
        if let Some(t) = self.terms.get(keep) {
            if t.exp == lead.exp {
                rest[0].coeff += &t.coeff;
            }
        }
        terms.extend(rest);
        Ordinal { terms }
    }

    /// Ordinal product. Left-distributes over sums in the right factor:
    /// for `other = ω^f·d + …`, each limit part contributes `ω^(e₁+f)·d` and a
    /// finite final part `d` contributes `ω^e₁·(c₁·d)` followed by the tail of
    /// `self`.
    pub fn mul(&self, other: &Ordinal) -> Ordinal {
        if self.is_zero() || other.is_zero() {
            return Ordinal::zero();
        }
        let lead = &self.terms[0];
        let mut terms: Vec<Term> = Vec::with_capacity(other.terms.len() + self.terms.len());
        for t in &other.terms {
            if t.exp.is_zero() {
                terms.push(Term {
                    exp: lead.exp.clone(),
                    coeff: &lead.coeff * &t.coeff,
                });
                terms.extend(self.terms[1..].iter().cloned());
            } else {
                terms.push(Term {
                    exp: lead.exp.add(&t.exp),
                    coeff: t.coeff.clone(),
                });
            }
        }
        Ordinal { terms }
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::from(BigUint::from(n))
    }
}

impl From<BigUint> for Ordinal {
    fn from(n: BigUint) -> Self {
        if n.is_zero() {
            Ordinal::zero()
        } else {
            Ordinal {
                terms: vec![Term {
                    exp: Ordinal::zero(),
                    coeff: n,
                }],
            }
        }
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(other.terms.iter()) {
            match a.exp.cmp(&b.exp).then_with(|| a.coeff.cmp(&b.coeff)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if t.exp.is_zero() {
                write!(f, "{}", t.coeff)?;
            } else {
                if t.exp == Ordinal::one() {
                    write!(f, "w")?;
                } else {
                    write!(f, "w^({})", t.exp)?;
                }
                if !t.coeff.is_one() {
                    write!(f, "*{}", t.coeff)?;
                }
            }
        }
        Ok(())
    }
}

/// Rejected ordinal text, with the byte offset of the offending token.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {pos}: {msg}")]
pub struct ParseOrdinalError {
    pub pos: usize,
    pub msg: String,
}

impl FromStr for Ordinal {
    type Err = ParseOrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser {
            bytes: s.as_bytes(),
            pos: 0,
        };
        let o = p.expr()?;
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(p.err("trailing input"));
        }
        Ok(o)
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> ParseOrdinalError {
        ParseOrdinalError {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, b: u8) -> bool {
        self.skip_ws();
        if self.bytes.get(self.pos) == Some(&b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<(), ParseOrdinalError> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", b as char)))
        }
    }

    fn nat(&mut self) -> Result<BigUint, ParseOrdinalError> {
        self.skip_ws();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a natural number"));
        }
        let digits = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        Ok(BigUint::from_str(digits).expect("digit run parses"))
    }

    /// `expr := term ('+' term)*`, folded left-to-right with ordinal addition
    /// so non-canonical input normalizes.
    fn expr(&mut self) -> Result<Ordinal, ParseOrdinalError> {
        let mut acc = self.term()?;
        while self.eat(b'+') {
            let t = self.term()?;
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// `term := 'w' ('^' '(' expr ')')? ('*' nat)? | nat`
    fn term(&mut self) -> Result<Ordinal, ParseOrdinalError> {
        self.skip_ws();
        if self.eat(b'w') {
            let exp = if self.eat(b'^') {
                self.expect(b'(')?;
                let e = self.expr()?;
                self.expect(b')')?;
                e
            } else {
                Ordinal::one()
            };
            let coeff = if self.eat(b'*') {
                self.nat()?
            } else {
                BigUint::one()
            };
            Ok(Ordinal::omega_pow(&exp).mul(&Ordinal::from(coeff)))
        } else {
            Ok(Ordinal::from(self.nat()?))
        }
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn comparison_basics() {
        assert_eq!(Ordinal::omega().cmp(&Ordinal::from(3u64)), Ordering::Greater);
        assert_eq!(o("w^(2)*2+1").cmp(&o("w^(2)*2+1")), Ordering::Equal);
        assert_eq!(o("w^(w)").cmp(&o("w^(3)*9")), Ordering::Greater);
        assert!(o("w^(2)") < o("w^(2)*2"));
        assert!(o("w^(2)") < o("w^(2)+1"));
        assert!(o("w+5") < o("w^(2)"));
    }

    #[test]
    fn addition_absorbs_on_the_left() {
        assert_eq!(Ordinal::one().add(&Ordinal::omega()), Ordinal::omega());
        assert_eq!(Ordinal::omega().add(&Ordinal::one()).to_string(), "w + 1");
        assert_eq!(o("w^(2)*2+w").add(&o("w^(2)")), o("w^(2)*3"));
    }

    #[test]
    fn multiplication() {
        assert_eq!(o("w^(5)+3").mul(&Ordinal::zero()), Ordinal::zero());
        assert_eq!(Ordinal::zero().mul(&o("w")), Ordinal::zero());
        assert_eq!(o("w+1").mul(&o("2")), o("w*2+1"));
        assert_eq!(o("w^(2)").mul(&o("w")), o("w^(3)"));
        assert_eq!(o("w+1").mul(&o("w")), o("w^(2)"));
        assert_eq!(o("w*3+4").mul(&o("w^(2)*2+w*3+5")), o("w^(3)*2 + w^(2)*3 + w*15 + 4"));
    }

    #[test]
    fn omega_pow_and_tower() {
        assert_eq!(Ordinal::omega_pow(&Ordinal::zero()), Ordinal::one());
        assert_eq!(Ordinal::omega_pow(&Ordinal::one()), Ordinal::omega());
        let w4 = Ordinal::omega_pow(&Ordinal::omega_pow(&Ordinal::omega_pow(&Ordinal::omega())));
        assert_eq!(w4, Ordinal::omega_tower(4));
        assert_eq!(w4.to_string(), "w^(w^(w^(w)))");
    }

    #[test]
    fn parse_render_round_trip() {
        assert_eq!(o("w^(2)*3+1").to_string(), "w^(2)*3 + 1");
        assert_eq!(o("1+w"), Ordinal::omega());
        assert_eq!(o("  w ^ ( w ) * 3 + w * 2 + 5 ").to_string(), "w^(w)*3 + w*2 + 5");
        assert_eq!(o("0"), Ordinal::zero());
        assert_eq!(o("w*1"), Ordinal::omega());
        assert_eq!(o("w*0"), Ordinal::zero());
        for s in ["w^(w^(w^(w)))", "w^(2)*3 + 1", "w*2 + 5", "17", "0"] {
            assert_eq!(o(s).to_string(), s);
        }
    }

    #[test]
    fn parse_errors_carry_position() {
        let e = "w^(2".parse::<Ordinal>().unwrap_err();
        assert_eq!(e.pos, 4);
        let e = "w++1".parse::<Ordinal>().unwrap_err();
        assert_eq!(e.pos, 2);
        assert!("".parse::<Ordinal>().is_err());
        assert!("w^2".parse::<Ordinal>().is_err());
        assert!("3w".parse::<Ordinal>().is_err());
    }

    #[test]
    fn saturating_pred_edges() {
        assert_eq!(o("w+2").saturating_pred(), o("w+1"));
        assert_eq!(o("w+1").saturating_pred(), o("w"));
        assert_eq!(o("w*2").saturating_pred(), o("w*2"));
        assert_eq!(o("1").saturating_pred(), Ordinal::zero());
        assert_eq!(Ordinal::zero().saturating_pred(), Ordinal::zero());
    }

    #[test]
    fn from_terms_normalizes() {
        let t = Ordinal::from_terms(vec![
            (Ordinal::one(), BigUint::from(2u32)),
            (Ordinal::from(2u64), BigUint::from(1u32)),
            (Ordinal::one(), BigUint::from(3u32)),
            (Ordinal::zero(), BigUint::zero()),
        ]);
        assert_eq!(t, o("w^(2) + w*5"));
    }
}
