//! Exact Laurent polynomials in one variable with half-integer exponents.
//!
//! Exponents are stored in half-units: the key `e` stands for `t^(e/2)`.
//! The same type carries Kauffman brackets, where the key is read as a plain
//! power of `A` (see [`Variable`]).

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// How the stored exponent is rendered.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variable {
    /// Key `e` is `t^(e/2)`.
    T,
    /// Key `e` is `A^e`.
    A,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LaurentError {
    #[error("odd power A^{0} has no image under A^-2 = t^(1/2)")]
    OddAExponent(i64),
    #[error("malformed polynomial: {0}")]
    Malformed(String),
}

/// Integer Laurent polynomial in canonical form (no zero coefficients).
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPolynomial {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn monomial(exp: i64, coeff: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff.into());
        p
    }

    /// Builds from `(exponent, coefficient)` pairs, merging duplicates.
    pub fn from_terms<C: Into<BigInt>>(terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    /// Polynomial in integer powers of `t`: `coeffs[i]` is the coefficient of `t^(low + i)`.
    pub fn from_t_coeffs(low: i64, coeffs: &[i64]) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| (2 * (low + i as i64), c)),
        )
    }

    pub fn add_term(&mut self, exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Multiplies by the monomial with key `shift`.
    pub fn shift(&self, shift: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, c)| (e + shift, c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&e, c)| (e, c * k)).collect(),
        }
    }

    /// Exponent negation: `p(t) -> p(t^-1)`.
    pub fn invert_variable(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Value at 1 (sum of coefficients).
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// `(d/dt)^k p` at `t = 1`, exact.
    ///
    /// Each stored key `e` contributes `c * (e/2)(e/2 - 1)...(e/2 - k + 1)`,
    /// computed as `c * prod(e - 2j) / 2^k`.
    pub fn derivative_at_one(&self, k: u32) -> ExactRational {
        let mut num = BigInt::zero();
        for (&e, c) in &self.terms {
            let mut f = c.clone();
            for j in 0..k as i64 {
                let factor = e - 2 * j;
                if factor == 0 {
                    f = BigInt::zero();
                    break;
                }
                f *= factor;
            }
            num += f;
        }
        ExactRational::new(num, BigInt::one() << k as usize)
    }

    /// `A^(2k) -> t^(-k/2)`, i.e. key `a` maps to key `-a/2`.
    pub fn substitute_a_to_t(&self) -> Result<Self, LaurentError> {
        let mut out = BTreeMap::new();
        for (&a, c) in &self.terms {
            if a.is_odd() {
                return Err(LaurentError::OddAExponent(a));
            }
            out.insert(-a / 2, c.clone());
        }
        Ok(Self { terms: out })
    }

    /// `(-A)^n` read with [`Variable::A`].
    pub fn neg_a_pow(n: i64) -> Self {
        let sign = if n.rem_euclid(2) == 0 { 1 } else { -1 };
        Self::monomial(n, sign)
    }

    /// The loop value `-A^2 - A^-2`.
    pub fn loop_value() -> Self {
        Self::from_terms([(2, -1), (-2, -1)])
    }

    pub fn render(&self, var: Variable) -> String {
        let mut s = String::new();
        self.write_rendered(&mut s, var).expect("writing to a String");
        s
    }

    fn write_rendered(&self, f: &mut impl fmt::Write, var: Variable) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (&e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if e == 0 {
                write!(f, "{c}")?;
                continue;
            }
            match var {
                Variable::A => write!(f, "{c}*A^{e}")?,
                _ if e % 2 == 0 => write!(f, "{c}*t^{}", e / 2)?,
                _ => write!(f, "{c}*t^({e}/2)")?,
            }
        }
        Ok(())
    }

    /// Parses a polynomial in `t` (or `u = t^(1/2)`, or `A`).
    ///
    /// Accepts the canonical rendering as well as looser hand-written forms
    /// such as `2 - t + t^2 - 2*t^3`, `t^(1/2)`, `-u - u^-1`.
    pub fn parse(text: &str, var: Variable) -> Result<Self, LaurentError> {
        parse::parse(text, var)
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_rendered(f, Variable::T)
    }
}

impl fmt::Debug for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent[{self}]")
    }
}

impl<'a> Add<&'a LaurentPolynomial> for &'a LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(mut self, rhs: LaurentPolynomial) -> LaurentPolynomial {
        self += &rhs;
        self
    }
}

impl AddAssign<&LaurentPolynomial> for LaurentPolynomial {
    fn add_assign(&mut self, rhs: &LaurentPolynomial) {
        for (&e, c) in &rhs.terms {
            self.add_term(e, c.clone());
        }
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        -&self
    }
}

impl<'a> Sub<&'a LaurentPolynomial> for &'a LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, -c);
        }
        out
    }
}

impl Sub for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
        &self - &rhs
    }
}

impl<'a> Mul<&'a LaurentPolynomial> for &'a LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero();
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
        &self * &rhs
    }
}

impl core::iter::Sum for LaurentPolynomial {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, p| acc + p)
    }
}

/// Reduced rational with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Self(BigRational::new(num.into(), den.into()))
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Self(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub(crate) fn from_rational(r: BigRational) -> Self {
        Self(r)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.0.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    pub fn abs(&self) -> Self {
        Self(self.0.abs())
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<i64> for ExactRational {
    fn from(n: i64) -> Self {
        Self::integer(n)
    }
}

macro_rules! rational_op {
    ($tr:ident, $m:ident) => {
        impl<'a> $tr<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: &ExactRational) -> ExactRational {
                ExactRational((&self.0).$m(&rhs.0))
            }
        }
        impl $tr for ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: ExactRational) -> ExactRational {
                ExactRational(self.0.$m(rhs.0))
            }
        }
    };
}
rational_op!(Add, add);
rational_op!(Sub, sub);
rational_op!(Mul, mul);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl core::iter::Sum for ExactRational {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

/// Binomial coefficient as a big integer.
pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

mod parse {
    use super::*;

    struct Cursor<'a> {
        s: &'a [u8],
        pos: usize,
    }

    impl Cursor<'_> {
        fn skip_ws(&mut self) {
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
        }
        fn peek(&mut self) -> Option<u8> {
            self.skip_ws();
            self.s.get(self.pos).copied()
        }
        fn eat(&mut self, b: u8) -> bool {
            if self.peek() == Some(b) {
                self.pos += 1;
                true
            } else {
                false
            }
        }
        fn int(&mut self) -> Option<BigInt> {
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return None;
            }
            core::str::from_utf8(&self.s[start..self.pos]).ok()?.parse().ok()
        }
        fn signed_int(&mut self) -> Option<i64> {
            let neg = if self.eat(b'-') {
                true
            } else {
                self.eat(b'+');
                false
            };
            let v = self.int()?.to_i64()?;
            Some(if neg { -v } else { v })
        }
        fn err(&self, what: &str) -> LaurentError {
            LaurentError::Malformed(alloc::format!("{what} at byte {}", self.pos))
        }
    }

    /// Exponent in half-units, after the variable symbol has been consumed.
    fn exponent(c: &mut Cursor<'_>, half_units_per_power: i64) -> Result<i64, LaurentError> {
        if !c.eat(b'^') {
            return Ok(half_units_per_power);
        }
        if c.eat(b'(') {
            let p = c.signed_int().ok_or_else(|| c.err("expected exponent"))?;
            let q = if c.eat(b'/') {
                c.signed_int().ok_or_else(|| c.err("expected denominator"))?
            } else {
                1
            };
            if !c.eat(b')') {
                return Err(c.err("expected ')'"));
            }
            let num = p * half_units_per_power;
            if q == 0 || num % q != 0 {
                return Err(c.err("exponent is not a multiple of the unit"));
            }
            Ok(num / q)
        } else {
            let p = c.signed_int().ok_or_else(|| c.err("expected exponent"))?;
            Ok(p * half_units_per_power)
        }
    }

    pub(super) fn parse(text: &str, var: Variable) -> Result<LaurentPolynomial, LaurentError> {
        let mut c = Cursor { s: text.as_bytes(), pos: 0 };
        let mut out = LaurentPolynomial::zero();
        let mut first = true;
        while let Some(b) = c.peek() {
            let mut sign = BigInt::one();
            if b == b'+' || b == b'-' {
                c.pos += 1;
                if b == b'-' {
                    sign = -sign;
                }
                // canonical form writes "+ -3*t^2"
                if c.eat(b'-') {
                    sign = -sign;
                } else {
                    c.eat(b'+');
                }
            } else if !first {
                return Err(c.err("expected '+' or '-'"));
            }
            first = false;
            let coeff = c.int();
            let has_coeff = coeff.is_some();
            let coeff = coeff.unwrap_or_else(BigInt::one) * sign;
            if has_coeff && !c.eat(b'*') {
                // bare constant, or implicit product like "2t"
                match c.peek() {
                    Some(b't' | b'u' | b'A') => {}
                    _ => {
                        out.add_term(0, coeff);
                        continue;
                    }
                }
            }
            let exp = match (c.peek(), var) {
                (Some(b't'), Variable::T) => {
                    c.pos += 1;
                    exponent(&mut c, 2)?
                }
                (Some(b'u'), Variable::T) => {
                    c.pos += 1;
                    exponent(&mut c, 1)?
                }
                (Some(b'A'), Variable::A) => {
                    c.pos += 1;
                    exponent(&mut c, 1)?
                }
                _ => return Err(c.err("expected variable")),
            };
            out.add_term(exp, coeff);
        }
        if first {
            return Err(LaurentError::Malformed("empty polynomial".into()));
        }
        Ok(out)
    }
}

/// Coefficient list helper used by tests and fixtures.
pub fn t_poly(terms: &[(i64, i64)]) -> LaurentPolynomial {
    LaurentPolynomial::from_terms(terms.iter().map(|&(e, c)| (2 * e, c)))
}

#[doc(hidden)]
pub fn coefficient_vec(p: &LaurentPolynomial) -> Vec<(i64, BigInt)> {
    p.terms().map(|(e, c)| (e, c.clone())).collect()
}
