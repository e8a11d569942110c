//! Independent oracles: plain big-integer and rational arithmetic, with no
//! use of the digit-level code under test.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use padic_regress::padic::{PAdic, Prime};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

/// `v_p` of a nonzero rational; `None` for zero.
pub fn rational_valuation(r: &BigRational, p: u32) -> Option<i64> {
    if r.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let count = |mut n: BigInt| {
        let mut v = 0i64;
        loop {
            let (q, rem) = n.div_rem(&p);
            if !rem.is_zero() {
                return v;
            }
            n = q;
            v += 1;
        }
    };
    Some(count(r.numer().abs()) - count(r.denom().abs()))
}

/// True when `a - b` is divisible by `p^a_prec` in Z_(p).
pub fn congruent(a: &BigRational, b: &BigRational, p: u32, precision: i64) -> bool {
    match rational_valuation(&(a - b), p) {
        None => true,
        Some(v) => v >= precision,
    }
}

/// `C(x, k)` over the integers, by the product formula.
pub fn binomial(x: &BigInt, k: usize) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= x - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

pub fn integer_of(x: &PAdic) -> BigInt {
    let r = x.representative();
    assert!(r.is_integer(), "expected an integral representative");
    r.to_integer()
}

pub fn modulo(x: &BigInt, p: u32, e: u32) -> BigInt {
    x.mod_floor(&BigInt::from(p).pow(e))
}

pub fn random_digits(rng: &mut TestRng, p: Prime, count: usize) -> Vec<u32> {
    (0..count).map(|_| rng.gen_range(0..p.get())).collect()
}

/// Integer of Z_p with `digits` uniform digits.
pub fn random_integer(rng: &mut TestRng, p: Prime, digits: usize) -> PAdic {
    PAdic::from_digits(p, 0, random_digits(rng, p, digits)).unwrap()
}

/// Nonzero element `p^v * u` with `relative` uniform unit digits.
pub fn random_nonzero(rng: &mut TestRng, p: Prime, v: i64, relative: usize) -> PAdic {
    let mut digits = random_digits(rng, p, relative);
    digits[0] = rng.gen_range(1..p.get());
    PAdic::from_digits(p, v, digits).unwrap()
}

pub fn pow_rational(p: u32, e: i64) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(p));
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

pub fn is_negative_rational(r: &BigRational) -> bool {
    r.is_negative()
}
