//! Digit interleaving `Z_p^n -> Z_p`.
//!
//! Digit `j` of coordinate `i` (0-based) lands at position `n*j + i` of the
//! image, i.e. `zeta = sum_i p^i phi(x_i)` with `phi(x) = sum_j x_j p^{n j}`.
//! No carries occur, so the map is a bijection of digit strings.

use crate::error::{Error, Result};
use crate::padic::{Digit, PAdic, Prime};

/// A point of Z_p^n.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointND {
    prime: Prime,
    coords: Vec<PAdic>,
}

impl PointND {
    pub fn new(prime: Prime, coords: Vec<PAdic>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidConfig("a point needs at least one coordinate".into()));
        }
        for c in &coords {
            if c.prime() != prime {
                return Err(Error::PrimeMismatch {
                    left: prime.get(),
                    right: c.prime().get(),
                });
            }
            if !c.is_integral() {
                return Err(Error::NotIntegral {
                    valuation: c.valuation().unwrap_or(0),
                });
            }
        }
        Ok(PointND { prime, coords })
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[PAdic] {
        &self.coords
    }

    /// `max_i |x_i|_p`.
    pub fn norm(&self) -> crate::padic::Norm {
        self.coords.iter().map(PAdic::norm).max().expect("nonempty")
    }
}

/// Spreads digit `j` of `x` to position `n*j`.
pub fn phi(x: &PAdic, n: usize) -> Result<PAdic> {
    if n == 0 {
        return Err(Error::InvalidConfig("dimension must be >= 1".into()));
    }
    if !x.is_integral() {
        return Err(Error::NotIntegral {
            valuation: x.valuation().unwrap_or(0),
        });
    }
    let Some(a) = x.abs_precision() else {
        return Ok(x.clone());
    };
    let n = n as i64;
    let digits: Vec<Digit> = (0..(n * a).max(0))
        .map(|pos| if pos % n == 0 { x.digit(pos / n).unwrap_or(0) } else { 0 })
        .collect();
    PAdic::from_digits(x.prime(), 0, digits)
}

/// Absolute precision of the interleaved image: the first digit position
/// that no coordinate pins down.
fn interleaved_precision(x: &PointND) -> Option<i64> {
    let n = x.dimension() as i64;
    x.coords
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.abs_precision().map(|a| n * a + i as i64))
        .min()
}

/// `sum_i p^i phi(x_i)` by direct digit placement.
pub fn interleave(x: &PointND) -> PAdic {
    let Some(a) = interleaved_precision(x) else {
        return PAdic::exact_zero(x.prime);
    };
    let n = x.dimension() as i64;
    let digits: Vec<Digit> = (0..a.max(0))
        .map(|pos| {
            x.coords[(pos % n) as usize]
                .digit(pos / n)
                .expect("position lies below the interleaved precision")
        })
        .collect();
    PAdic::from_digits(x.prime, 0, digits).expect("digits come from valid coordinates")
}

/// Inverse of [`interleave`]: coordinate `i` collects positions `= i (mod n)`.
pub fn deinterleave(z: &PAdic, n: usize) -> Result<PointND> {
    if n == 0 {
        return Err(Error::InvalidConfig("dimension must be >= 1".into()));
    }
    if !z.is_integral() {
        return Err(Error::NotIntegral {
            valuation: z.valuation().unwrap_or(0),
        });
    }
    let prime = z.prime();
    let Some(a) = z.abs_precision() else {
        return PointND::new(prime, vec![PAdic::exact_zero(prime); n]);
    };
    let step = n as i64;
    let coords = (0..step)
        .map(|i| {
            let budget = coordinate_budget(a - i, n);
            let digits = (0..budget)
                .map(|j| z.digit(step * j + i).expect("below precision"))
                .collect();
            PAdic::from_digits(prime, 0, digits)
        })
        .collect::<Result<Vec<_>>>()?;
    PointND::new(prime, coords)
}

/// Number of source digits recoverable from `digits` interleaved positions.
pub fn coordinate_budget(digits: i64, n: usize) -> i64 {
    let n = n as i64;
    if digits <= 0 {
        0
    } else {
        (digits + n - 1) / n
    }
}
