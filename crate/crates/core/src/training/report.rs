use std::fmt::Write as _;

use num_rational::BigRational;

use crate::model::{LossValue, RegressionModel};
use crate::padic::Norm;

pub const REPORT_HEADER: &str = "padic-regress-report v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FitMode {
    Exact,
    Stochastic,
}

impl FitMode {
    pub fn name(self) -> &'static str {
        match self {
            FitMode::Exact => "exact",
            FitMode::Stochastic => "stochastic",
        }
    }
}

/// Extra output of the interpolating solve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactDiagnostics {
    pub det_valuation: i64,
    /// `|det A|_p`.
    pub det_norm: BigRational,
    /// `|l_a(w)|_p` per training record.
    pub residual_norms: Vec<Norm>,
    /// Outcome of `|l(w0)|_p <= |det A|_p^2` for the integral part `w0` of
    /// the solution.
    pub certificate: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FitReport {
    pub mode: FitMode,
    /// `key=value` echo of the settings that produced the fit.
    pub config: Vec<(String, String)>,
    pub model: RegressionModel,
    /// Best-so-far training loss after each step; index 0 is the start.
    pub trajectory: Vec<LossValue>,
    pub exact: Option<ExactDiagnostics>,
    /// Index of the chain that produced the result (stochastic fits).
    pub chain: Option<usize>,
}

impl FitReport {
    pub fn train_loss(&self) -> &LossValue {
        self.trajectory.last().expect("trajectory holds the starting loss")
    }

    pub fn is_integral(&self) -> bool {
        self.model.is_integral()
    }

    /// Steps at which the best-so-far loss changed, plus the first and last.
    pub fn milestones(&self) -> Vec<(usize, &LossValue)> {
        let last = self.trajectory.len() - 1;
        self.trajectory
            .iter()
            .enumerate()
            .filter(|&(i, l)| i == 0 || i == last || *l != self.trajectory[i - 1])
            .collect()
    }

    /// Stable line grammar; rationals are always written `num/den`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{REPORT_HEADER}");
        let _ = writeln!(out, "mode={}", self.mode.name());
        for (k, v) in &self.config {
            let _ = writeln!(out, "config.{k}={v}");
        }
        if let Some(chain) = self.chain {
            let _ = writeln!(out, "chain={chain}");
        }
        let loss = self.train_loss();
        let _ = writeln!(out, "train_loss={}", format_rational(loss.value()));
        let _ = writeln!(out, "train_loss_upper={}", format_rational(loss.upper()));
        let _ = writeln!(out, "integral={}", self.is_integral());
        if let Some(exact) = &self.exact {
            let _ = writeln!(out, "det_valuation={}", exact.det_valuation);
            let _ = writeln!(out, "det_norm={}", format_rational(&exact.det_norm));
            let _ = writeln!(out, "certificate={}", exact.certificate);
            for (a, n) in exact.residual_norms.iter().enumerate() {
                let kind = if n.is_bound() { "bound" } else { "exact" };
                let _ = writeln!(out, "residual {a} {} {kind}", format_rational(&n.value()));
            }
        }
        for (k, w) in self.model.weights().weights().iter().enumerate() {
            let _ = writeln!(out, "weight {k} {w}");
        }
        for (step, l) in self.milestones() {
            let _ = writeln!(out, "milestone {step} {}", format_rational(l.value()));
        }
        out
    }

    /// `step,num,den` rows of the best-so-far trajectory.
    pub fn trajectory_csv(&self) -> String {
        let mut out = String::from("step,num,den\n");
        for (i, l) in self.trajectory.iter().enumerate() {
            let _ = writeln!(out, "{i},{},{}", l.value().numer(), l.value().denom());
        }
        out
    }
}

/// `num/den`, including `0/1` and `n/1`.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}
