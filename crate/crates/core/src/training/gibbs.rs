//! Exact one-step Gibbs law on a truncated weight lattice.
//!
//! The proposal `xi` ranges over `(Z/p^t)^{K+1}` with uniform weights, the
//! discrete stand-in for Haar measure on `Z_p^{K+1}`. Adding `xi` wraps modulo
//! `p^t` in every coordinate, so the states reachable from `w` form one coset
//! and every state is reached exactly once.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::problem::Problem;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::model::rational_to_f64;
use crate::padic::PAdic;

/// Largest lattice the oracle will enumerate.
pub const LATTICE_LIMIT: u128 = 1 << 16;

#[derive(Clone, Debug, PartialEq)]
pub struct GibbsStep {
    /// `L(w)`.
    pub loss: BigRational,
    /// `E[L(w + xi)]` under the weights `exp(-beta (L(w + xi) - L(w)))`.
    pub expectation: f64,
    /// `ln N(w, beta)` with `N = mean_xi exp(-beta (L(w + xi) - L(w)))`.
    pub log_normalizer: f64,
    /// `d ln N / d beta = -E[L(w + xi) - L(w)]`, in closed form.
    pub dlog_normalizer: f64,
    /// Fraction of the lattice with `L(w + xi) < L(w)`.
    pub improving_measure: BigRational,
    pub lattice_size: usize,
}

/// All states `high + low`, where `low` runs over `(Z/p^t)^{K+1}` and `high`
/// holds the digits at positions `>= t` of a base point.
pub struct GibbsLattice {
    modulus: u64,
    coords: usize,
    states: Vec<Vec<PAdic>>,
    losses: Vec<BigRational>,
}

fn lattice_size(p: u64, t: u32, coords: usize) -> Result<usize> {
    let points = (p as u128)
        .checked_pow(t * coords as u32)
        .filter(|&n| n <= LATTICE_LIMIT)
        .ok_or(Error::LatticeTooLarge {
            points: (p as u128).saturating_pow(t * coords as u32),
            limit: LATTICE_LIMIT,
        })?;
    Ok(points as usize)
}

impl GibbsLattice {
    pub fn new(data: &Dataset, base: &[PAdic], truncation_digits: u32) -> Result<Self> {
        if base.is_empty() {
            return Err(Error::InvalidConfig("need at least one weight".into()));
        }
        if let Some(bad) = base.iter().find(|w| !w.is_integral()) {
            return Err(Error::NotIntegral {
                valuation: bad.valuation().unwrap_or(0),
            });
        }
        let prime = data.prime();
        let m = data.precision();
        let t = truncation_digits as i64;
        if t < 1 || t > m {
            return Err(Error::InvalidConfig(format!(
                "truncation digits must lie in 1..={m}, got {t}"
            )));
        }
        let coords = base.len();
        let size = lattice_size(prime.get() as u64, truncation_digits, coords)?;
        let modulus = (prime.get() as u64).pow(truncation_digits);
        let problem = Problem::new(data, coords - 1)?;

        let high: Vec<Vec<u32>> = base
            .iter()
            .map(|w| w.with_abs_precision(m).abs_digits(0, m))
            .collect();
        let mut states = Vec::with_capacity(size);
        let mut losses = Vec::with_capacity(size);
        for index in 0..size {
            let mut rest = index as u64;
            let state: Vec<PAdic> = high
                .iter()
                .map(|digits| {
                    let mut low = rest % modulus;
                    rest /= modulus;
                    let mut d = digits.clone();
                    for slot in d.iter_mut().take(t as usize) {
                        *slot = (low % prime.get() as u64) as u32;
                        low /= prime.get() as u64;
                    }
                    PAdic::from_digits(prime, 0, d).expect("digits in range")
                })
                .collect();
            losses.push(problem.loss(&state).value().clone());
            states.push(state);
        }
        Ok(GibbsLattice {
            modulus,
            coords,
            states,
            losses,
        })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, index: usize) -> &[PAdic] {
        &self.states[index]
    }

    pub fn loss(&self, index: usize) -> &BigRational {
        &self.losses[index]
    }

    /// Lattice index of `w`, read from its digits below `t`.
    pub fn index_of(&self, w: &[PAdic]) -> usize {
        assert_eq!(w.len(), self.coords, "weight count must match the lattice");
        let mut index = 0u64;
        for w in w.iter().rev() {
            let p = w.prime().get() as u64;
            let mut low = 0u64;
            let mut scale = 1u64;
            let mut pos = 0;
            while scale < self.modulus {
                low += w.digit(pos).unwrap_or(0) as u64 * scale;
                scale *= p;
                pos += 1;
            }
            index = index * self.modulus + low;
        }
        index as usize
    }

    /// Gibbs one-step statistics from state `from` at inverse temperature `beta`.
    pub fn step(&self, from: usize, beta: f64) -> GibbsStep {
        let base = &self.losses[from];
        let deltas: Vec<f64> = self.losses.iter().map(|l| rational_to_f64(&(l - base))).collect();
        let shift = deltas.iter().cloned().fold(f64::INFINITY, f64::min);
        let weights: Vec<f64> = deltas.iter().map(|d| (-beta * (d - shift)).exp()).collect();
        let total: f64 = weights.iter().sum();
        let expectation = self
            .losses
            .iter()
            .zip(&weights)
            .map(|(l, g)| rational_to_f64(l) * g)
            .sum::<f64>()
            / total;
        let mean_delta = deltas.iter().zip(&weights).map(|(d, g)| d * g).sum::<f64>() / total;
        let improving = self.losses.iter().filter(|l| (*l - base).is_negative()).count();
        GibbsStep {
            loss: base.clone(),
            expectation,
            log_normalizer: -beta * shift + total.ln() - (self.len() as f64).ln(),
            dlog_normalizer: -mean_delta,
            improving_measure: BigRational::new(improving.into(), self.len().into()),
            lattice_size: self.len(),
        }
    }

    /// States with an empty improving set.
    pub fn local_minima(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| self.step(i, 0.0).improving_measure.is_zero())
    }
}

/// Exact `E[L(w + xi)]` for one step of the walk at `beta`, enumerating the
/// lattice `(Z/p^t)^{K+1}` around `w`.
pub fn gibbs_oracle_step_expectation(
    w: &[PAdic],
    beta: f64,
    data: &Dataset,
    truncation_digits: u32,
) -> Result<GibbsStep> {
    if !(beta.is_finite() && beta >= 0.0) {
        return Err(Error::InvalidConfig(format!("beta must be finite and >= 0, got {beta}")));
    }
    let lattice = GibbsLattice::new(data, w, truncation_digits)?;
    Ok(lattice.step(lattice.index_of(w), beta))
}
