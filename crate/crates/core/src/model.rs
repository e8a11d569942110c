//! The regression function `f(x, w) = sum_k w_k omega_k(zeta(x))`, its
//! residuals and the p-adic loss.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::dataset::{Dataset, Partition};
use crate::embedding::{interleave, PointND};
use crate::error::{Error, Result};
use crate::mahler::{combine, omegas, MahlerSeries};
use crate::padic::{factorial_valuation, power_of_prime, Norm, PAdic, PrecisionPolicy, Prime};

pub const MODEL_HEADER: &str = "padic-regress-model v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegressionModel {
    dimension: usize,
    precision: i64,
    weights: MahlerSeries,
}

impl RegressionModel {
    /// `precision` is the number of digits predictions are required to carry.
    pub fn new(dimension: usize, precision: i64, weights: MahlerSeries) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidConfig("input dimension must be >= 1".into()));
        }
        PrecisionPolicy::new(precision, 0)?;
        Ok(RegressionModel {
            dimension,
            precision,
            weights,
        })
    }

    /// The all-zero model of degree `degree`, each weight zero modulo `p^precision`.
    pub fn zeros(prime: Prime, dimension: usize, degree: usize, precision: i64) -> Result<Self> {
        let weights = MahlerSeries::new(prime, vec![PAdic::zero_at(prime, precision); degree + 1])?;
        RegressionModel::new(dimension, precision, weights)
    }

    pub fn prime(&self) -> Prime {
        self.weights.prime()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn degree(&self) -> usize {
        self.weights.degree()
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    pub fn weights(&self) -> &MahlerSeries {
        &self.weights
    }

    pub fn is_integral(&self) -> bool {
        self.weights.is_integral()
    }

    pub fn with_weights(&self, weights: MahlerSeries) -> Result<Self> {
        RegressionModel::new(self.dimension, self.precision, weights)
    }

    fn check_point(&self, x: &PointND) -> Result<()> {
        if x.prime() != self.prime() {
            return Err(Error::PrimeMismatch {
                left: self.prime().get(),
                right: x.prime().get(),
            });
        }
        if x.dimension() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                actual: x.dimension(),
            });
        }
        Ok(())
    }

    /// `omega_0(zeta), ..., omega_K(zeta)` for the interleaved input.
    pub fn basis(&self, x: &PointND) -> Result<Vec<PAdic>> {
        self.check_point(x)?;
        design_row(x, self.degree(), self.precision)
    }

    pub fn predict(&self, x: &PointND) -> Result<PAdic> {
        let basis = self.basis(x)?;
        Ok(combine(self.weights.weights(), &basis, self.prime()))
    }

    /// `y - f(x, w)`.
    pub fn residual(&self, x: &PointND, y: &PAdic) -> Result<PAdic> {
        let prediction = self.predict(x)?;
        y.checked_sub(&prediction)
    }

    pub fn loss(&self, data: &Dataset, partition: Partition) -> Result<LossValue> {
        if data.prime() != self.prime() {
            return Err(Error::PrimeMismatch {
                left: self.prime().get(),
                right: data.prime().get(),
            });
        }
        let norms = data
            .records_in(partition)
            .map(|r| self.residual(&r.x, &r.y).map(|l| l.norm()))
            .collect::<Result<Vec<_>>>()?;
        if norms.is_empty() {
            return Err(Error::EmptyPartition(partition.to_string()));
        }
        Ok(LossValue::from_norms(self.prime(), &norms))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(MODEL_HEADER);
        out.push('\n');
        out.push_str(&format!("prime={}\n", self.prime()));
        out.push_str(&format!("n={}\n", self.dimension));
        out.push_str(&format!("K={}\n", self.degree()));
        out.push_str(&format!("M={}\n", self.precision));
        for w in self.weights.weights() {
            out.push_str(&w.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the model file format. A weight written as `0` is read back as
    /// zero modulo `p^M`.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let parse_err = |line: usize, message: String| Error::Parse { line, message };

        let (line, header) = lines.next().ok_or_else(|| parse_err(1, "empty model file".into()))?;
        if header != MODEL_HEADER {
            return Err(parse_err(line, format!("expected `{MODEL_HEADER}`")));
        }
        let mut field = |name: &str| -> Result<u64> {
            let (line, l) = lines
                .next()
                .ok_or_else(|| parse_err(0, format!("missing field `{name}`")))?;
            let value = l
                .strip_prefix(name)
                .and_then(|rest| rest.strip_prefix('='))
                .ok_or_else(|| parse_err(line, format!("expected `{name}=<value>`")))?;
            value
                .trim()
                .parse()
                .map_err(|_| parse_err(line, format!("bad value for `{name}`")))
        };
        let p = field("prime")?;
        let n = field("n")? as usize;
        let degree = field("K")? as usize;
        let precision = field("M")? as i64;
        let prime = Prime::new(p).map_err(|e| parse_err(2, e.to_string()))?;

        let mut weights = Vec::with_capacity(degree + 1);
        for (line, l) in lines {
            let w = PAdic::parse_encoded(l, prime).map_err(|m| parse_err(line, m))?;
            weights.push(if w.is_exact_zero() {
                PAdic::zero_at(prime, precision)
            } else {
                w
            });
        }
        if weights.len() != degree + 1 {
            return Err(parse_err(
                0,
                format!("expected {} weights, found {}", degree + 1, weights.len()),
            ));
        }
        RegressionModel::new(n, precision, MahlerSeries::new(prime, weights)?)
    }
}

/// One row of the design matrix: `omega_k(zeta(x))` for `k <= degree`.
///
/// Inputs are treated as exact lattice points: the interleaved value is
/// zero-padded so that every basis value keeps `precision` digits after the
/// `v_p(k!)` lost to division.
pub fn design_row(x: &PointND, degree: usize, precision: i64) -> Result<Vec<PAdic>> {
    let zeta = interleave(x);
    let needed = precision + factorial_valuation(degree as u64, x.prime());
    omegas(&zeta.lift(needed), degree, PrecisionPolicy::new(precision, 0)?)
}

/// The loss `(1/N) sum_a |l_a|_p` as an exact interval.
///
/// `value` counts residuals that vanish at precision as zero; `upper` counts
/// them at their bound `p^{-A}`. The true loss lies in `[value, upper]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LossValue {
    value: BigRational,
    upper: BigRational,
}

impl LossValue {
    pub fn from_norms(prime: Prime, norms: &[Norm]) -> LossValue {
        let count = BigInt::from(norms.len().max(1));
        let exact: Vec<i64> = norms
            .iter()
            .filter(|n| !n.is_bound())
            .filter_map(Norm::exponent)
            .collect();
        let bounds: Vec<i64> = norms
            .iter()
            .filter(|n| n.is_bound())
            .filter_map(Norm::exponent)
            .collect();
        let value = sum_of_powers(prime, &exact) / BigRational::from_integer(count.clone());
        let slack = sum_of_powers(prime, &bounds) / BigRational::from_integer(count);
        LossValue {
            upper: &value + slack,
            value,
        }
    }

    pub fn zero() -> LossValue {
        LossValue {
            value: BigRational::zero(),
            upper: BigRational::zero(),
        }
    }

    /// Loss with at-precision residuals counted as zero.
    pub fn value(&self) -> &BigRational {
        &self.value
    }

    /// Loss with at-precision residuals counted at their bound.
    pub fn upper(&self) -> &BigRational {
        &self.upper
    }

    /// True when some residual was only known up to precision.
    pub fn is_bound(&self) -> bool {
        self.upper != self.value
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.value)
    }
}

impl PartialOrd for LossValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LossValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .cmp(&other.value)
            .then_with(|| self.upper.cmp(&other.upper))
    }
}

impl fmt::Display for LossValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_bound() {
            write!(f, "{} (bound <= {})", self.value, self.upper)
        } else {
            write!(f, "{}", self.value)
        }
    }
}

/// `sum_a p^{-e_a}` exactly, over one common denominator.
fn sum_of_powers(prime: Prime, exponents: &[i64]) -> BigRational {
    let Some(&top) = exponents.iter().max() else {
        return BigRational::zero();
    };
    let p = BigInt::from(prime.get());
    let mut numerator = BigInt::zero();
    for &e in exponents {
        numerator += num_traits::pow(p.clone(), (top - e) as usize);
    }
    BigRational::from_integer(numerator) * power_of_prime(prime, -top)
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}
