use num_rational::BigRational;

use super::report::{ExactDiagnostics, FitMode, FitReport};
use crate::dataset::{Dataset, Partition};
use crate::embedding::interleave;
use crate::error::{Error, Result};
use crate::mahler::MahlerSeries;
use crate::model::{design_row, RegressionModel};
use crate::padic::{PAdic, PAdicMatrix};

/// Rows `omega_0(zeta_a), ..., omega_K(zeta_a)` over the training records,
/// each entry carrying `precision` digits.
pub fn build_design_matrix(data: &Dataset, degree: usize, precision: i64) -> Result<PAdicMatrix> {
    let rows = data
        .records_in(Partition::Train)
        .map(|r| design_row(&r.x, degree, precision))
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Err(Error::EmptyPartition(Partition::Train.to_string()));
    }
    let n = rows.len();
    PAdicMatrix::new(data.prime(), n, degree + 1, rows.into_iter().flatten().collect())
}

fn reject_duplicate_inputs(data: &Dataset) -> Result<()> {
    let train: Vec<_> = data.records_in(Partition::Train).collect();
    let zetas: Vec<PAdic> = train.iter().map(|r| interleave(&r.x)).collect();
    for a in 0..zetas.len() {
        for b in a + 1..zetas.len() {
            if zetas[a].agrees_with(&zetas[b]) && !train[a].y.agrees_with(&train[b].y) {
                return Err(Error::InconsistentSystem { first: a, second: b });
            }
        }
    }
    Ok(())
}

/// Interpolates the training records with `K = N_train - 1`.
///
/// The design matrix is built with `guard_digits` extra digits; the labels
/// keep the dataset precision `M`, so the weights carry roughly
/// `M - v_p(det A)` digits.
pub fn fit_exact(data: &Dataset, guard_digits: i64) -> Result<FitReport> {
    if guard_digits < 0 {
        return Err(Error::InvalidPrecision(format!("guard digits must be >= 0, got {guard_digits}")));
    }
    let n = data.count(Partition::Train);
    if n == 0 {
        return Err(Error::EmptyPartition(Partition::Train.to_string()));
    }
    reject_duplicate_inputs(data)?;
    let degree = n - 1;
    let m = data.precision();
    let a = build_design_matrix(data, degree, m + guard_digits)?;
    let y: Vec<PAdic> = data.records_in(Partition::Train).map(|r| r.y.clone()).collect();
    let weights = a.solve(&y)?;
    let det_valuation = a.det_valuation()?;
    let det_norm = a.det_norm()?;

    let model = RegressionModel::new(
        data.dimension(),
        m,
        MahlerSeries::new(data.prime(), weights.clone())?,
    )?;
    let residual_norms = data
        .records_in(Partition::Train)
        .map(|r| model.residual(&r.x, &r.y).map(|l| l.norm()))
        .collect::<Result<Vec<_>>>()?;
    let w0: Vec<PAdic> = weights.iter().map(integral_part).collect();
    let certificate = check_integrality(&w0, data, &det_norm)?;
    let loss = model.loss(data, Partition::Train)?;

    Ok(FitReport {
        mode: FitMode::Exact,
        config: vec![
            ("p".into(), data.prime().to_string()),
            ("n".into(), data.dimension().to_string()),
            ("K".into(), degree.to_string()),
            ("M".into(), m.to_string()),
            ("G".into(), guard_digits.to_string()),
            ("N_train".into(), n.to_string()),
        ],
        model,
        trajectory: vec![loss],
        exact: Some(ExactDiagnostics {
            det_valuation,
            det_norm,
            residual_norms,
            certificate,
        }),
        chain: None,
    })
}

/// The digits of `w` at nonnegative positions.
pub fn integral_part(w: &PAdic) -> PAdic {
    match (w.valuation(), w.abs_precision()) {
        (Some(v), Some(a)) if v < 0 => {
            PAdic::from_digits(w.prime(), 0, w.abs_digits(0, a.max(0))).expect("digits in range")
        }
        _ => w.clone(),
    }
}

/// `max_a |l_a(w0)|_p <= |det A|_p^2` on the training records.
///
/// Residuals known only up to precision count at their bound.
pub fn check_integrality(w0: &[PAdic], data: &Dataset, det_norm: &BigRational) -> Result<bool> {
    if let Some(bad) = w0.iter().find(|w| !w.is_integral()) {
        return Err(Error::NotIntegral {
            valuation: bad.valuation().unwrap_or(0),
        });
    }
    let model = RegressionModel::new(
        data.dimension(),
        data.precision(),
        MahlerSeries::new(data.prime(), w0.to_vec())?,
    )?;
    let mut worst = BigRational::from_integer(0.into());
    for r in data.records_in(Partition::Train) {
        let norm = model.residual(&r.x, &r.y)?.norm().value();
        if norm > worst {
            worst = norm;
        }
    }
    Ok(worst <= det_norm * det_norm)
}
