//! Binomial basis `omega_k(x) = C(x, k)` and truncated Mahler series.

use crate::error::{Error, Result};
use crate::padic::{factorial_valuation, PAdic, PrecisionPolicy, Prime};

/// `omega_0(x), ..., omega_{k_max}(x)` via `omega_k = omega_{k-1} (x - k + 1) / k`.
///
/// Dividing by `k` costs `v_p(k)` digits, so the input must carry at least
/// `working_digits + v_p(k_max!)` digits for every output to keep
/// `working_digits` digits of absolute precision.
pub fn omegas(x: &PAdic, k_max: usize, policy: PrecisionPolicy) -> Result<Vec<PAdic>> {
    let prime = x.prime();
    if !x.is_integral() {
        return Err(Error::NotIntegral {
            valuation: x.valuation().unwrap_or(0),
        });
    }
    let available = x.abs_precision();
    let required = policy.working_digits() + factorial_valuation(k_max as u64, prime);
    if let Some(a) = available {
        if a < required {
            return Err(Error::InsufficientPrecision {
                k: k_max,
                required,
                available: a,
            });
        }
    }
    let start = available.unwrap_or(policy.total_digits() + factorial_valuation(k_max as u64, prime));
    let mut out = Vec::with_capacity(k_max + 1);
    out.push(PAdic::from_integer_abs(1, prime, start));
    if x.is_exact_zero() {
        out.resize(k_max + 1, PAdic::exact_zero(prime));
        return Ok(out);
    }
    for k in 1..=k_max {
        let step = x.add_integer(-(k as i64 - 1));
        let next = (&out[k - 1] * &step).div_integer(k as i64)?;
        out.push(next);
    }
    Ok(out)
}

/// `C(x, k)` for `x` in Z_p.
pub fn omega(k: usize, x: &PAdic, policy: PrecisionPolicy) -> Result<PAdic> {
    let mut all = omegas(x, k, policy)?;
    Ok(all.pop().expect("omegas returns k + 1 values"))
}

/// A truncated Mahler expansion `sum_{k<=K} w_k omega_k(x)`.
///
/// Weights may lie in Q_p; [`MahlerSeries::is_integral`] reports whether they
/// all lie in Z_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MahlerSeries {
    prime: Prime,
    weights: Vec<PAdic>,
}

impl MahlerSeries {
    pub fn new(prime: Prime, weights: Vec<PAdic>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidConfig("a Mahler series needs at least one weight".into()));
        }
        if let Some(bad) = weights.iter().find(|w| w.prime() != prime) {
            return Err(Error::PrimeMismatch {
                left: prime.get(),
                right: bad.prime().get(),
            });
        }
        Ok(MahlerSeries { prime, weights })
    }

    pub fn from_integers(prime: Prime, weights: &[i64], policy: PrecisionPolicy) -> Result<Self> {
        MahlerSeries::new(
            prime,
            weights.iter().map(|&w| PAdic::from_integer(w, prime, policy)).collect(),
        )
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn degree(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn weights(&self) -> &[PAdic] {
        &self.weights
    }

    pub fn is_integral(&self) -> bool {
        self.weights.iter().all(PAdic::is_integral)
    }

    /// Appends exact-zero weights up to `degree`.
    pub fn extended(&self, degree: usize) -> MahlerSeries {
        let mut weights = self.weights.clone();
        if weights.len() < degree + 1 {
            weights.resize(degree + 1, PAdic::exact_zero(self.prime));
        }
        MahlerSeries {
            prime: self.prime,
            weights,
        }
    }

    pub fn eval(&self, x: &PAdic, policy: PrecisionPolicy) -> Result<PAdic> {
        self.eval_truncated(x, self.degree(), policy)
    }

    /// Partial sum up to and including `omega_{k_max}`.
    pub fn eval_truncated(&self, x: &PAdic, k_max: usize, policy: PrecisionPolicy) -> Result<PAdic> {
        if x.prime() != self.prime {
            return Err(Error::PrimeMismatch {
                left: self.prime.get(),
                right: x.prime().get(),
            });
        }
        let k_max = k_max.min(self.degree());
        let basis = omegas(x, k_max, policy)?;
        Ok(combine(&self.weights[..=k_max], &basis, self.prime))
    }
}

/// `sum_k w_k b_k`, in plain order.
pub(crate) fn combine(weights: &[PAdic], basis: &[PAdic], prime: Prime) -> PAdic {
    weights
        .iter()
        .zip(basis)
        .filter(|(w, _)| !w.is_exact_zero())
        .fold(PAdic::exact_zero(prime), |acc, (w, b)| &acc + &(w * b))
}

/// Mahler coefficients `w_n = Delta^n f(0)` from samples `f(0), ..., f(K)`,
/// computed with an in-place forward-difference table.
pub fn mahler_coefficients(samples: &[PAdic]) -> Result<MahlerSeries> {
    let first = samples
        .first()
        .ok_or_else(|| Error::InvalidConfig("need at least one sample".into()))?;
    let prime = first.prime();
    if let Some(bad) = samples.iter().find(|s| s.prime() != prime) {
        return Err(Error::PrimeMismatch {
            left: prime.get(),
            right: bad.prime().get(),
        });
    }
    if let Some(bad) = samples.iter().find(|s| !s.is_integral()) {
        return Err(Error::NotIntegral {
            valuation: bad.valuation().unwrap_or(0),
        });
    }
    let mut table = samples.to_vec();
    let k = table.len();
    // after pass `n`, table[n] holds Delta^n f(0)
    for n in 1..k {
        for i in (n..k).rev() {
            table[i] = &table[i] - &table[i - 1];
        }
    }
    MahlerSeries::new(prime, table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prime(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    fn pol() -> PrecisionPolicy {
        PrecisionPolicy::new(16, 8).unwrap()
    }

    fn int(v: i64, p: Prime) -> PAdic {
        PAdic::from_integer(v, p, pol())
    }

    #[test]
    fn omega_zero_is_one() {
        let p = prime(5);
        for x in [0, 1, 17, -3] {
            assert!(omega(0, &int(x, p), pol()).unwrap().agrees_with(&int(1, p)));
        }
    }

    #[test]
    fn omega_matches_integer_binomial() {
        let p = prime(3);
        assert!(omega(2, &int(5, p), pol()).unwrap().agrees_with(&int(10, p)));
        assert!(omega(6, &int(5, p), pol()).unwrap().is_zero());
    }

    #[test]
    fn omega_of_minus_one_alternates() {
        // C(2^m - 1, k) reduces to (-1)^k modulo 2^M for large m
        let p = prime(2);
        let policy = PrecisionPolicy::new(12, 8).unwrap();
        let minus_one = PAdic::from_integer(-1, p, policy);
        let big = PAdic::from_integer((1 << 40) - 1, p, policy);
        for k in 0..10 {
            let a = omega(k, &minus_one, policy).unwrap();
            let b = omega(k, &big, policy).unwrap();
            let sign = if k % 2 == 0 { 1 } else { -1 };
            assert!(a.agrees_with(&PAdic::from_integer(sign, p, policy)), "k = {k}");
            assert!(a.agrees_with(&b));
        }
    }

    #[test]
    fn omega_reports_missing_guard_digits() {
        let p = prime(2);
        let policy = PrecisionPolicy::new(8, 0).unwrap();
        let x = PAdic::from_integer(5, p, policy);
        // v_2(4!) = 3 > 0 guard digits
        assert!(matches!(
            omega(4, &x, policy),
            Err(Error::InsufficientPrecision { k: 4, required: 11, available: 8 })
        ));
        assert!(omega(1, &x, policy).is_ok());
    }

    #[test]
    fn omega_rejects_non_integers() {
        let p = prime(3);
        let x = PAdic::from_rational(1, 3, p, pol()).unwrap();
        assert!(matches!(omega(1, &x, pol()), Err(Error::NotIntegral { valuation: -1 })));
    }

    #[test]
    fn squares_have_known_coefficients() {
        let p = prime(3);
        let samples: Vec<_> = (0..4).map(|x| int(x * x, p)).collect();
        let series = mahler_coefficients(&samples).unwrap();
        let expected = [0, 1, 2, 0];
        for (w, e) in series.weights().iter().zip(expected) {
            assert!(w.agrees_with(&int(e, p)));
        }
        assert!(series.is_integral());
    }

    #[test]
    fn constant_samples() {
        let p = prime(7);
        let series = mahler_coefficients(&vec![int(4, p); 5]).unwrap();
        assert!(series.weights()[0].agrees_with(&int(4, p)));
        assert!(series.weights()[1..].iter().all(PAdic::is_zero));
    }

    #[test]
    fn basis_samples_give_unit_vectors() {
        let p = prime(2);
        for j in 0..6 {
            let samples: Vec<_> = (0..8).map(|x| omega(j, &int(x, p), pol()).unwrap()).collect();
            let series = mahler_coefficients(&samples).unwrap();
            for (k, w) in series.weights().iter().enumerate() {
                assert_eq!(w.is_zero(), k != j, "j = {j}, k = {k}");
            }
        }
    }

    #[test]
    fn series_evaluation() {
        let p = prime(3);
        let id = MahlerSeries::from_integers(p, &[0, 1], pol()).unwrap();
        assert!(id.eval(&int(11, p), pol()).unwrap().agrees_with(&int(11, p)));
        let sq = MahlerSeries::from_integers(p, &[0, 1, 2, 0], pol()).unwrap();
        assert!(sq.eval(&int(5, p), pol()).unwrap().agrees_with(&int(25, p)));
        let padded = sq.extended(9);
        assert_eq!(padded.degree(), 9);
        assert_eq!(
            padded.eval(&int(5, p), pol()).unwrap(),
            sq.eval(&int(5, p), pol()).unwrap()
        );
    }
}
