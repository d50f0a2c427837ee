//! Integer-valued polynomials with exact rational coefficients.
//!
//! A polynomial is *integral* when it maps every integer to an integer; the
//! coefficients themselves may be proper rationals (`(n² - n)/2` is integral).
//! Integrality is decided by evaluating at `deg + 1` consecutive integers: a
//! degree-d polynomial that is integer-valued at d+1 consecutive points is
//! integer-valued everywhere, by the finite-difference expansion in the
//! binomial basis.
//!
//! Text form used in configuration files and on the command line:
//!
//! ```text
//! poly := term (('+'|'-') term)*
//! term := [coef] ['n' ['^' nat]]
//! coef := int | int '/' int
//! ```
//!
//! e.g. `7n^2+19n`, `1/2n^2-1/2n`, `-n^3+2`, `0`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Errors from polynomial construction or parsing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("polynomial is not integer-valued: p({at}) = {value}")]
    NotIntegral { at: BigInt, value: BigRational },
}

/// A univariate polynomial in `n` with rational coefficients, integer-valued
/// on the integers. Coefficients are stored by ascending power with trailing
/// zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigRational>,
}

impl IntPolynomial {
    /// Validates integer values at `0..=deg` and builds the polynomial.
    pub fn new(mut coeffs: Vec<BigRational>) -> Result<Self, PolyError> {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        let p = IntPolynomial { coeffs };
        for j in 0..=p.degree() {
            let at = BigInt::from(j);
            let value = p.eval(&BigRational::from(at.clone()));
            if !value.is_integer() {
                return Err(PolyError::NotIntegral { at, value });
            }
        }
        Ok(p)
    }

    /// Builds from integer coefficients (always integral).
    pub fn from_int_coeffs<I, T>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let mut coeffs: Vec<BigRational> = coeffs
            .into_iter()
            .map(|c| BigRational::from(c.into()))
            .collect();
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    /// The binomial coefficient polynomial `C(n, k) = n(n-1)…(n-k+1)/k!`,
    /// integral by construction. Integer combinations of these enumerate all
    /// integral polynomials.
    pub fn binomial(k: usize) -> Self {
        // Multiply out (n - i) for i < k, then divide by k!.
        let mut coeffs = vec![BigRational::one()];
        for i in 0..k {
            let shift = BigRational::from(BigInt::from(i as i64));
            let mut next = vec![BigRational::zero(); coeffs.len() + 1];
            for (j, c) in coeffs.iter().enumerate() {
                next[j + 1] += c;
                next[j] -= c * &shift;
            }
            coeffs = next;
        }
        let mut fact = BigRational::one();
        for i in 1..=k {
            fact *= BigRational::from(BigInt::from(i as i64));
        }
        for c in &mut coeffs {
            *c /= &fact;
        }
        IntPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, with constants (including 0) taken to have degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Leading coefficient; 0 for the zero polynomial.
    pub fn leading_coeff(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Evaluates at an integer point; exact by integrality.
    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let v = self.eval(&BigRational::from(x.clone()));
        debug_assert!(v.is_integer(), "integral polynomial at an integer point");
        v.to_integer()
    }

    /// True when p(0) = 0.
    pub fn is_integral_zero(&self) -> bool {
        self.coeffs.first().map_or(true, Zero::is_zero)
    }

    pub fn add(&self, other: &IntPolynomial) -> IntPolynomial {
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len().max(other.coeffs.len())];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn sub(&self, other: &IntPolynomial) -> IntPolynomial {
        self.add(&other.scale_int(&BigInt::from(-1)))
    }

    pub fn scale_int(&self, k: &BigInt) -> IntPolynomial {
        if k.is_zero() {
            return IntPolynomial::zero();
        }
        let k = BigRational::from(k.clone());
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| c * &k).collect(),
        }
    }

    /// The shifted difference `n ↦ p(n+h) - p(h)`; integral and vanishing at
    /// 0 by construction.
    pub fn shift_diff(&self, h: &BigInt) -> IntPolynomial {
        let h = BigRational::from(h.clone());
        let deg = self.degree();
        let mut coeffs = vec![BigRational::zero(); deg + 1];
        // p(n+h) = Σ_k c_k Σ_{i≤k} C(k,i) n^i h^(k-i); drop i = 0 to subtract p(h).
        for (k, c) in self.coeffs.iter().enumerate() {
            for i in 1..=k {
                let b = binomial_big(k, i);
                let mut hp = BigRational::one();
                for _ in 0..(k - i) {
                    hp *= &h;
                }
                coeffs[i] += c * BigRational::from(b) * hp;
            }
        }
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }
}

fn binomial_big(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from((n - i) as u64) / BigInt::from((i + 1) as u64);
    }
    acc
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            if k == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}")?;
                }
                if k == 1 {
                    write!(f, "n")?;
                } else {
                    write!(f, "n^{k}")?;
                }
            }
        }
        Ok(())
    }
}

impl FromStr for IntPolynomial {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = PolyParser {
            bytes: s.as_bytes(),
            pos: 0,
        };
        let coeffs = p.expr()?;
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(p.err("trailing input"));
        }
        IntPolynomial::new(coeffs)
    }
}

struct PolyParser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> PolyParser<'a> {
    fn err(&self, msg: &str) -> PolyError {
        PolyError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn digits(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if self.pos == start {
            return None;
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        Some(BigInt::from_str(s).expect("digit run parses"))
    }

    fn expr(&mut self) -> Result<Vec<BigRational>, PolyError> {
        let mut coeffs: Vec<BigRational> = Vec::new();
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1i64
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let (coef, power) = self.term()?;
            if coeffs.len() <= power {
                coeffs.resize(power + 1, BigRational::zero());
            }
            coeffs[power] += coef * BigRational::from(BigInt::from(sign));
            sign = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    1
                }
                Some(b'-') => {
                    self.pos += 1;
                    -1
                }
                None => break,
                Some(_) => return Err(self.err("expected '+', '-', or end of input")),
            };
        }
        Ok(coeffs)
    }

    fn term(&mut self) -> Result<(BigRational, usize), PolyError> {
        let num = self.digits();
        let had_coef = num.is_some();
        let coef = match num {
            Some(num) => {
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let den = self.digits().ok_or_else(|| self.err("expected denominator"))?;
                    if den.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    BigRational::new(num, den)
                } else {
                    BigRational::from(num)
                }
            }
            None => BigRational::one(),
        };
        if self.peek() == Some(b'n') {
            self.pos += 1;
            let power = if self.peek() == Some(b'^') {
                self.pos += 1;
                let p = self.digits().ok_or_else(|| self.err("expected exponent"))?;
                usize::try_from(&p).map_err(|_| self.err("exponent too large"))?
            } else {
                1
            };
            if power > 64 {
                return Err(self.err("exponent too large"));
            }
            Ok((coef, power))
        } else if !had_coef {
            Err(self.err("expected a coefficient or 'n'"))
        } else {
            Ok((coef, 0))
        }
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
