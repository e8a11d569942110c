//! Finite-precision elements of Q_p.
//!
//! A [`PAdic`] stores its value as `p^v * (d_0 + d_1 p + d_2 p^2 + ...)` with
//! little-endian unit digits and an absolute precision `A`: the value is known
//! modulo `p^A`. Every operation propagates `A` so that digits never claim more
//! certainty than the inputs carry.

use std::cmp::{min, Ordering};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};

/// A single base-p digit.
pub type Digit = u32;

/// Largest prime accepted; keeps every digit product inside `u64`.
const PRIME_LIMIT: u64 = 1 << 31;

/// A validated prime modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p >= PRIME_LIMIT {
            return Err(Error::PrimeTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Prime(p as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// `p^e` as an exact big integer.
    pub fn pow(self, e: u32) -> BigInt {
        BigInt::from(self.0).pow(e)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Working precision `M` and guard digits `G`. Values are built at `M + G`
/// digits; results are expected to survive with at least `M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionPolicy {
    working_digits: i64,
    guard_digits: i64,
}

impl PrecisionPolicy {
    pub fn new(working_digits: i64, guard_digits: i64) -> Result<Self> {
        if working_digits < 1 {
            return Err(Error::InvalidPrecision(format!(
                "working digits must be >= 1, got {working_digits}"
            )));
        }
        if guard_digits < 0 {
            return Err(Error::InvalidPrecision(format!(
                "guard digits must be >= 0, got {guard_digits}"
            )));
        }
        Ok(PrecisionPolicy {
            working_digits,
            guard_digits,
        })
    }

    pub fn working_digits(&self) -> i64 {
        self.working_digits
    }

    pub fn guard_digits(&self) -> i64 {
        self.guard_digits
    }

    pub fn total_digits(&self) -> i64 {
        self.working_digits + self.guard_digits
    }
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            working_digits: 32,
            guard_digits: 16,
        }
    }
}

/// `v_p(n)` for a nonzero integer.
pub fn valuation_of_integer(mut n: i128, p: Prime) -> u32 {
    assert!(n != 0, "valuation of zero is infinite");
    let p = p.get() as i128;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// `v_p(k!)` by Legendre's formula `(k - s_p(k)) / (p - 1)`.
pub fn factorial_valuation(k: u64, p: Prime) -> i64 {
    let p = p.get() as u64;
    let mut digit_sum = 0u64;
    let mut rest = k;
    while rest > 0 {
        digit_sum += rest % p;
        rest /= p;
    }
    ((k - digit_sum) / (p - 1)) as i64
}

/// The p-adic absolute value of a [`PAdic`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Norm {
    /// Exact zero.
    Zero,
    /// `p^{-valuation}`, known exactly.
    Exact { prime: Prime, valuation: i64 },
    /// All known digits vanish: the norm is at most `p^{-precision}`.
    Bound { prime: Prime, precision: i64 },
}

impl Norm {
    /// The norm as an exact rational; for [`Norm::Bound`] this is the upper bound.
    pub fn value(&self) -> BigRational {
        match *self {
            Norm::Zero => BigRational::zero(),
            Norm::Exact { prime, valuation: e } | Norm::Bound { prime, precision: e } => {
                power_of_prime(prime, -e)
            }
        }
    }

    pub fn is_bound(&self) -> bool {
        matches!(self, Norm::Bound { .. })
    }

    /// The exponent `e` with norm `p^{-e}`; `None` for exact zero.
    pub fn exponent(&self) -> Option<i64> {
        match *self {
            Norm::Zero => None,
            Norm::Exact { valuation, .. } => Some(valuation),
            Norm::Bound { precision, .. } => Some(precision),
        }
    }
}

impl PartialOrd for Norm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Norm {
    /// Orders by the (possibly upper-bound) value; bounds sort above exact
    /// norms of the same magnitude.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.exponent(), other.exponent()) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(a), Some(b)) => b.cmp(&a).then(self.is_bound().cmp(&other.is_bound())),
        }
    }
}

/// `p^e` for any integer `e`, as an exact rational.
pub fn power_of_prime(p: Prime, e: i64) -> BigRational {
    let base = p.pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(base)
    } else {
        BigRational::new(BigInt::one(), base)
    }
}

/// An element of Q_p known to finite absolute precision.
///
/// Three shapes are possible:
/// * exact zero: no digits, no precision limit;
/// * zero at precision `A`: every known digit vanishes, value is `O(p^A)`;
/// * nonzero: `digits[0] != 0` and the value is known modulo `p^{v + digits.len()}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PAdic {
    prime: Prime,
    valuation: i64,
    digits: Vec<Digit>,
    precision: Option<i64>,
}

impl PAdic {
    pub fn exact_zero(prime: Prime) -> Self {
        PAdic {
            prime,
            valuation: 0,
            digits: Vec::new(),
            precision: None,
        }
    }

    /// A value known only to be divisible by `p^precision`.
    pub fn zero_at(prime: Prime, precision: i64) -> Self {
        PAdic {
            prime,
            valuation: precision,
            digits: Vec::new(),
            precision: Some(precision),
        }
    }

    /// Canonical expansion of an integer with `policy.total_digits()` unit digits.
    pub fn from_integer(value: i64, prime: Prime, policy: PrecisionPolicy) -> Self {
        if value == 0 {
            return PAdic::exact_zero(prime);
        }
        let v = valuation_of_integer(value as i128, prime) as i64;
        PAdic::from_integer_abs(value as i128, prime, v + policy.total_digits())
    }

    /// Integer known modulo `p^abs_precision`.
    pub fn from_integer_abs(value: i128, prime: Prime, abs_precision: i64) -> Self {
        if abs_precision <= 0 {
            return PAdic::zero_at(prime, abs_precision);
        }
        let p = prime.get() as u128;
        let mut rest = value.unsigned_abs();
        let mut digits = Vec::with_capacity(abs_precision as usize);
        for _ in 0..abs_precision {
            digits.push((rest % p) as Digit);
            rest /= p;
        }
        if value < 0 {
            negate_digits(&mut digits, prime.get());
        }
        normalize(prime, 0, digits)
    }

    /// `numerator / denominator` with `policy.total_digits()` unit digits.
    pub fn from_rational(
        numerator: i64,
        denominator: i64,
        prime: Prime,
        policy: PrecisionPolicy,
    ) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::DivisionByZero);
        }
        if numerator == 0 {
            return Ok(PAdic::exact_zero(prime));
        }
        let p = prime.get() as i128;
        let (mut num, mut den) = (numerator as i128, denominator as i128);
        let mut v = 0i64;
        while num % p == 0 {
            num /= p;
            v += 1;
        }
        while den % p == 0 {
            den /= p;
            v -= 1;
        }
        let r = policy.total_digits();
        let unit = PAdic::from_integer_abs(num, prime, r).div_impl(&PAdic::from_integer_abs(den, prime, r))?;
        Ok(unit.shifted(v))
    }

    /// Builds `p^valuation * sum digits[j] p^j`, known to `valuation + digits.len()`.
    /// Leading zero digits are absorbed into the valuation.
    pub fn from_digits(prime: Prime, valuation: i64, digits: Vec<Digit>) -> Result<Self> {
        if let Some(&d) = digits.iter().find(|&&d| d >= prime.get()) {
            return Err(Error::InvalidConfig(format!("digit {d} out of range for p = {prime}")));
        }
        Ok(normalize(prime, valuation, digits))
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    /// `Some(v)` for nonzero values, `None` for exact zero or zero at precision.
    pub fn valuation(&self) -> Option<i64> {
        if self.digits.is_empty() {
            None
        } else {
            Some(self.valuation)
        }
    }

    /// Largest `v` with the value provably divisible by `p^v` (`None` = infinite).
    pub fn valuation_lower_bound(&self) -> Option<i64> {
        if self.is_exact_zero() {
            None
        } else {
            Some(self.valuation)
        }
    }

    pub fn unit_digits(&self) -> &[Digit] {
        &self.digits
    }

    /// `None` means infinite (exact zero).
    pub fn abs_precision(&self) -> Option<i64> {
        self.precision
    }

    /// Number of known unit digits; `None` for exact zero.
    pub fn relative_precision(&self) -> Option<i64> {
        self.precision.map(|_| self.digits.len() as i64)
    }

    pub fn is_exact_zero(&self) -> bool {
        self.precision.is_none()
    }

    /// True for exact zero and for values whose known digits all vanish.
    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }

    /// Membership in Z_p (`valuation >= 0`); zero at any precision counts.
    pub fn is_integral(&self) -> bool {
        self.is_zero() || self.valuation >= 0
    }

    /// Digit at absolute position `i`: `None` when it lies beyond the precision.
    pub fn digit(&self, i: i64) -> Option<Digit> {
        if let Some(a) = self.precision {
            if i >= a {
                return None;
            }
        }
        if self.digits.is_empty() || i < self.valuation {
            return Some(0);
        }
        Some(self.digits[(i - self.valuation) as usize])
    }

    pub fn norm(&self) -> Norm {
        match (self.precision, self.digits.is_empty()) {
            (None, _) => Norm::Zero,
            (Some(a), true) => Norm::Bound {
                prime: self.prime,
                precision: a,
            },
            (Some(_), false) => Norm::Exact {
                prime: self.prime,
                valuation: self.valuation,
            },
        }
    }

    /// Drops digits at positions `>= abs_precision`.
    pub fn truncate(&self, abs_precision: i64) -> Self {
        match self.precision {
            Some(a) if a <= abs_precision => self.clone(),
            _ if self.is_exact_zero() => PAdic::zero_at(self.prime, abs_precision),
            _ if self.digits.is_empty() || abs_precision <= self.valuation => {
                PAdic::zero_at(self.prime, abs_precision)
            }
            _ => {
                let keep = (abs_precision - self.valuation) as usize;
                PAdic {
                    prime: self.prime,
                    valuation: self.valuation,
                    digits: self.digits[..keep].to_vec(),
                    precision: Some(abs_precision),
                }
            }
        }
    }

    /// Treats the known digits as an exact representative and zero-pads it to
    /// `abs_precision`. Never lowers precision.
    pub fn lift(&self, abs_precision: i64) -> Self {
        match self.precision {
            None => self.clone(),
            Some(a) if a >= abs_precision => self.clone(),
            Some(_) if self.digits.is_empty() => PAdic::zero_at(self.prime, abs_precision),
            Some(_) => {
                let mut digits = self.digits.clone();
                digits.resize((abs_precision - self.valuation) as usize, 0);
                PAdic {
                    prime: self.prime,
                    valuation: self.valuation,
                    digits,
                    precision: Some(abs_precision),
                }
            }
        }
    }

    /// Sets the absolute precision: truncates or zero-pads as needed.
    pub fn with_abs_precision(&self, abs_precision: i64) -> Self {
        self.truncate(abs_precision).lift(abs_precision)
    }

    /// Multiplies by `p^shift` (exact).
    pub fn shifted(&self, shift: i64) -> Self {
        let mut out = self.clone();
        if out.precision.is_none() {
            return out;
        }
        out.valuation += shift;
        out.precision = out.precision.map(|a| a + shift);
        out
    }

    /// Digits at absolute positions `lo..hi`, with zeros below the valuation.
    /// Callers guarantee `hi <= abs_precision`.
    pub(crate) fn abs_digits(&self, lo: i64, hi: i64) -> Vec<Digit> {
        let mut out = vec![0; (hi - lo).max(0) as usize];
        if self.digits.is_empty() {
            return out;
        }
        for (slot, pos) in out.iter_mut().zip(lo..hi) {
            if pos >= self.valuation {
                if let Some(&d) = self.digits.get((pos - self.valuation) as usize) {
                    *slot = d;
                }
            }
        }
        out
    }

    /// True when `self - other` vanishes at the common precision.
    pub fn agrees_with(&self, other: &PAdic) -> bool {
        self.prime == other.prime && self.sub_impl(other).is_zero()
    }

    fn check_prime(&self, other: &PAdic) -> Result<()> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch {
                left: self.prime.get(),
                right: other.prime.get(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &PAdic) -> Result<PAdic> {
        self.check_prime(other)?;
        Ok(self.add_impl(other))
    }

    pub fn checked_sub(&self, other: &PAdic) -> Result<PAdic> {
        self.check_prime(other)?;
        Ok(self.sub_impl(other))
    }

    pub fn checked_mul(&self, other: &PAdic) -> Result<PAdic> {
        self.check_prime(other)?;
        Ok(self.mul_impl(other))
    }

    /// Division; the relative precision of the quotient is the smaller of the
    /// operands', so absolute precision drops by `v_p(other)`.
    pub fn checked_div(&self, other: &PAdic) -> Result<PAdic> {
        self.check_prime(other)?;
        self.div_impl(other)
    }

    fn add_impl(&self, other: &PAdic) -> PAdic {
        if self.is_exact_zero() {
            return other.clone();
        }
        if other.is_exact_zero() {
            return self.clone();
        }
        let prec = min(self.precision.unwrap(), other.precision.unwrap());
        let lo = min(self.valuation, other.valuation);
        if lo >= prec {
            return PAdic::zero_at(self.prime, prec);
        }
        let p = self.prime.get() as u64;
        let mut acc = self.abs_digits(lo, prec);
        let rhs = other.abs_digits(lo, prec);
        let mut carry = 0u64;
        for (a, &b) in acc.iter_mut().zip(&rhs) {
            let t = *a as u64 + b as u64 + carry;
            if t >= p {
                *a = (t - p) as Digit;
                carry = 1;
            } else {
                *a = t as Digit;
                carry = 0;
            }
        }
        normalize(self.prime, lo, acc)
    }

    fn neg_impl(&self) -> PAdic {
        let mut out = self.clone();
        negate_digits(&mut out.digits, self.prime.get());
        out
    }

    fn sub_impl(&self, other: &PAdic) -> PAdic {
        self.add_impl(&other.neg_impl())
    }

    fn mul_impl(&self, other: &PAdic) -> PAdic {
        let prime = self.prime;
        match (self.precision, other.precision) {
            (None, _) | (_, None) => PAdic::exact_zero(prime),
            (Some(a), Some(b)) => match (self.digits.is_empty(), other.digits.is_empty()) {
                (true, true) => PAdic::zero_at(prime, a + b),
                (true, false) => PAdic::zero_at(prime, a + other.valuation),
                (false, true) => PAdic::zero_at(prime, b + self.valuation),
                (false, false) => {
                    let r = min(self.digits.len(), other.digits.len());
                    let digits = mul_digits(&self.digits[..r], &other.digits[..r], prime.get());
                    let valuation = self.valuation + other.valuation;
                    PAdic {
                        prime,
                        valuation,
                        digits,
                        precision: Some(valuation + r as i64),
                    }
                }
            },
        }
    }

    fn div_impl(&self, other: &PAdic) -> Result<PAdic> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let prime = self.prime;
        match self.precision {
            None => Ok(PAdic::exact_zero(prime)),
            Some(a) if self.digits.is_empty() => Ok(PAdic::zero_at(prime, a - other.valuation)),
            Some(_) => {
                let r = min(self.digits.len(), other.digits.len());
                let digits = div_digits(&self.digits[..r], &other.digits[..r], prime.get());
                let valuation = self.valuation - other.valuation;
                Ok(PAdic {
                    prime,
                    valuation,
                    digits,
                    precision: Some(valuation + r as i64),
                })
            }
        }
    }

    /// `self + value` where `value` is an exact integer.
    pub fn add_integer(&self, value: i64) -> PAdic {
        match self.precision {
            None => PAdic::from_integer_abs(
                value as i128,
                self.prime,
                PrecisionPolicy::default().total_digits(),
            ),
            Some(a) => self.add_impl(&PAdic::from_integer_abs(value as i128, self.prime, a)),
        }
    }

    /// `self / value` where `value` is an exact nonzero integer.
    pub fn div_integer(&self, value: i64) -> Result<PAdic> {
        if value == 0 {
            return Err(Error::DivisionByZero);
        }
        let Some(a) = self.precision else {
            return Ok(self.clone());
        };
        let vk = valuation_of_integer(value as i128, self.prime) as i64;
        // enough digits that the divisor never limits relative precision
        let digits = (a - self.valuation).max(1) + vk;
        self.div_impl(&PAdic::from_integer_abs(value as i128, self.prime, digits))
    }

    /// Exact rational value of the known digits, `p^v * sum d_j p^j`.
    pub fn representative(&self) -> BigRational {
        if self.digits.is_empty() {
            return BigRational::zero();
        }
        let p = BigInt::from(self.prime.get());
        let mut unit = BigInt::zero();
        for &d in self.digits.iter().rev() {
            unit = unit * &p + BigInt::from(d);
        }
        BigRational::from_integer(unit) * power_of_prime(self.prime, self.valuation)
    }

    /// Parses the textual encoding `p^<v> * <d0>.<d1>...` (or `0`).
    pub fn parse_encoded(text: &str, prime: Prime) -> std::result::Result<PAdic, String> {
        let text = text.trim();
        if text == "0" {
            return Ok(PAdic::exact_zero(prime));
        }
        let (head, tail) = text
            .split_once('*')
            .ok_or_else(|| format!("expected `p^<v> * <digits>`, got `{text}`"))?;
        let exponent = head
            .trim()
            .strip_prefix("p^")
            .ok_or_else(|| format!("missing `p^` prefix in `{text}`"))?;
        let valuation: i64 = exponent
            .trim()
            .parse()
            .map_err(|_| format!("bad valuation `{exponent}`"))?;
        let mut digits = Vec::new();
        for part in tail.trim().split('.') {
            let d: u64 = part
                .trim()
                .parse()
                .map_err(|_| format!("bad digit `{part}`"))?;
            if d >= prime.get() as u64 {
                return Err(format!("digit {d} out of range [0, {}]", prime.get() - 1));
            }
            digits.push(d as Digit);
        }
        if digits[0] == 0 {
            return Err("leading unit digit must be nonzero".to_string());
        }
        Ok(PAdic {
            prime,
            valuation,
            precision: Some(valuation + digits.len() as i64),
            digits,
        })
    }
}

/// Strips low-order zero digits into the valuation.
fn normalize(prime: Prime, lo: i64, mut digits: Vec<Digit>) -> PAdic {
    let total = digits.len() as i64;
    match digits.iter().position(|&d| d != 0) {
        None => PAdic::zero_at(prime, lo + total),
        Some(z) => {
            digits.drain(..z);
            PAdic {
                prime,
                valuation: lo + z as i64,
                digits,
                precision: Some(lo + total),
            }
        }
    }
}

/// In-place `x -> -x mod p^len`.
fn negate_digits(digits: &mut [Digit], p: Digit) {
    let Some(first) = digits.iter().position(|&d| d != 0) else {
        return;
    };
    digits[first] = p - digits[first];
    for d in &mut digits[first + 1..] {
        *d = p - 1 - *d;
    }
}

/// Low `a.len()` digits of `a * b` (both slices have equal length).
fn mul_digits(a: &[Digit], b: &[Digit], p: Digit) -> Vec<Digit> {
    let r = a.len();
    let p = p as u64;
    let mut out = vec![0u64; r];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        let ai = ai as u64;
        let mut carry = 0u64;
        for (slot, &bj) in out[i..].iter_mut().zip(b) {
            let t = *slot + ai * bj as u64 + carry;
            *slot = t % p;
            carry = t / p;
        }
    }
    out.into_iter().map(|d| d as Digit).collect()
}

/// Low `a.len()` digits of `a / b` for a unit `b` (`b[0] != 0`).
fn div_digits(a: &[Digit], b: &[Digit], p: Digit) -> Vec<Digit> {
    let r = a.len();
    let inv = inverse_mod(b[0], p) as u64;
    let pu = p as u64;
    let pi = p as i64;
    let mut rem: Vec<i64> = a.iter().map(|&d| d as i64).collect();
    let mut out = Vec::with_capacity(r);
    for i in 0..r {
        let q = (rem[i] as u64 * inv) % pu;
        out.push(q as Digit);
        if q == 0 {
            continue;
        }
        let mut borrow = 0i64;
        for (slot, &bj) in rem[i..].iter_mut().zip(b) {
            let mut t = *slot - (q * bj as u64) as i64 - borrow;
            if t < 0 {
                let k = (-t + pi - 1) / pi;
                t += k * pi;
                borrow = k;
            } else {
                borrow = 0;
            }
            *slot = t;
        }
    }
    out
}

fn inverse_mod(a: Digit, p: Digit) -> Digit {
    let (mut old_r, mut r) = (a as i64, p as i64);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    old_s.rem_euclid(p as i64) as Digit
}

impl fmt::Display for PAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.digits.is_empty() {
            return write!(f, "0");
        }
        write!(f, "p^{} * ", self.valuation)?;
        for (i, d) in self.digits.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// Parses with the prime given as `<p>:<encoding>`, e.g. `3:p^0 * 1.2`.
impl FromStr for PAdic {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (p, rest) = s.split_once(':').ok_or("expected `<p>:<encoding>`")?;
        let p: u64 = p.trim().parse().map_err(|_| format!("bad prime `{p}`"))?;
        let prime = Prime::new(p).map_err(|e| e.to_string())?;
        PAdic::parse_encoded(rest, prime)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $imp:ident) => {
        impl $trait<&PAdic> for &PAdic {
            type Output = PAdic;

            /// Panics on mixed primes; use the `checked_` method to recover.
            fn $method(self, rhs: &PAdic) -> PAdic {
                assert_eq!(self.prime, rhs.prime, "mixed primes");
                self.$imp(rhs)
            }
        }

        impl $trait<PAdic> for PAdic {
            type Output = PAdic;

            fn $method(self, rhs: PAdic) -> PAdic {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, sub_impl);
forward_binop!(Mul, mul, mul_impl);

impl Neg for &PAdic {
    type Output = PAdic;

    fn neg(self) -> PAdic {
        self.neg_impl()
    }
}

impl Neg for PAdic {
    type Output = PAdic;

    fn neg(self) -> PAdic {
        self.neg_impl()
    }
}
