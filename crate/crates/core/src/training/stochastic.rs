use num_traits::Signed;
use rand::Rng;

use super::exact::fit_exact;
use super::problem::Problem;
use super::report::{FitMode, FitReport};
use crate::dataset::{Dataset, Partition};
use crate::error::{Error, Result};
use crate::mahler::MahlerSeries;
use crate::model::{rational_to_f64, LossValue, RegressionModel};
use crate::padic::{PAdic, Prime};
use crate::rng::{derive_seed, seeded, SeededRng};

#[derive(Clone, Debug, PartialEq)]
pub struct TrainerConfig {
    pub degree: usize,
    pub steps: usize,
    /// `beta_i = beta0 * beta_growth^i`.
    pub beta0: f64,
    pub beta_growth: f64,
    /// Proposal radius `p^{-r}` with `P(r = j) = (1 - q) q^j`.
    pub radius_q: f64,
    pub seed: u64,
    pub chains: usize,
    /// Start from the exact fit of the first `K + 1` training records.
    pub warm_start: bool,
    /// Guard digits for the warm-start solve.
    pub guard_digits: i64,
}

impl Default for TrainerConfig {
    fn default() -> Self {
        TrainerConfig {
            degree: 1,
            steps: 10_000,
            beta0: 1.0,
            beta_growth: 1.001,
            radius_q: 0.5,
            seed: 0,
            chains: 1,
            warm_start: false,
            guard_digits: 16,
        }
    }
}

impl TrainerConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if !(self.beta0.is_finite() && self.beta0 >= 0.0) {
            return bad(format!("beta0 must be a finite value >= 0, got {}", self.beta0));
        }
        if !(self.beta_growth.is_finite() && self.beta_growth >= 1.0) {
            return bad(format!("beta growth must be >= 1, got {}", self.beta_growth));
        }
        if !(self.radius_q > 0.0 && self.radius_q < 1.0) {
            return bad(format!("radius q must lie in (0, 1), got {}", self.radius_q));
        }
        if self.chains == 0 {
            return bad("need at least one chain".into());
        }
        Ok(())
    }

    fn beta(&self, step: usize) -> f64 {
        self.beta0 * self.beta_growth.powf(step as f64)
    }

    fn echo(&self) -> Vec<(String, String)> {
        vec![
            ("K".into(), self.degree.to_string()),
            ("steps".into(), self.steps.to_string()),
            ("beta0".into(), self.beta0.to_string()),
            ("beta_growth".into(), self.beta_growth.to_string()),
            ("radius_q".into(), self.radius_q.to_string()),
            ("seed".into(), self.seed.to_string()),
            ("chains".into(), self.chains.to_string()),
            ("warm_start".into(), self.warm_start.to_string()),
        ]
    }
}

struct ChainResult {
    weights: Vec<PAdic>,
    trajectory: Vec<LossValue>,
}

/// `min(J, M - 1)` for `J` geometric with success probability `1 - q`.
fn draw_radius(rng: &mut SeededRng, q: f64, max: i64) -> i64 {
    let mut r = 0;
    while r < max && rng.gen_bool(q) {
        r += 1;
    }
    r
}

/// Uniform point of the ball `p^r Z_p` modulo `p^M`.
fn draw_offset(rng: &mut SeededRng, prime: Prime, r: i64, precision: i64) -> PAdic {
    let digits = (0..precision)
        .map(|j| if j < r { 0 } else { rng.gen_range(0..prime.get()) })
        .collect();
    PAdic::from_digits(prime, 0, digits).expect("digits in range")
}

fn accept(rng: &mut SeededRng, beta: f64, current: &LossValue, candidate: &LossValue) -> bool {
    let delta = candidate.value() - current.value();
    if !delta.is_positive() {
        return true;
    }
    // P(-ln(U) >= beta * delta) = exp(-beta * delta) for U uniform on (0, 1]
    let u = 1.0 - rng.gen::<f64>();
    -u.ln() >= beta * rational_to_f64(&delta)
}

fn run_chain(problem: &Problem, cfg: &TrainerConfig, init: &[PAdic], seed: u64) -> ChainResult {
    let mut rng = seeded(seed);
    let m = problem.precision;
    let mut current = init.to_vec();
    let mut current_loss = problem.loss(&current);
    let mut best = current.clone();
    let mut best_loss = current_loss.clone();
    let mut trajectory = Vec::with_capacity(cfg.steps + 1);
    trajectory.push(best_loss.clone());

    for step in 0..cfg.steps {
        let r = draw_radius(&mut rng, cfg.radius_q, m - 1);
        let candidate: Vec<PAdic> = current
            .iter()
            .map(|w| (w + &draw_offset(&mut rng, problem.prime, r, m)).with_abs_precision(m))
            .collect();
        let candidate_loss = problem.loss(&candidate);
        if accept(&mut rng, cfg.beta(step), &current_loss, &candidate_loss) {
            current = candidate;
            current_loss = candidate_loss;
            if current_loss < best_loss {
                best = current.clone();
                best_loss = current_loss.clone();
            }
        }
        trajectory.push(best_loss.clone());
    }
    ChainResult {
        weights: best,
        trajectory,
    }
}

fn initial_weights(data: &Dataset, cfg: &TrainerConfig) -> Result<Vec<PAdic>> {
    let m = data.precision();
    if !cfg.warm_start {
        return Ok(vec![PAdic::zero_at(data.prime(), m); cfg.degree + 1]);
    }
    let mut head = Dataset::new(data.prime(), data.dimension(), m)?;
    for r in data.records_in(Partition::Train).take(cfg.degree + 1) {
        head.push(r.clone())?;
    }
    if head.len() != cfg.degree + 1 {
        return Err(Error::DegreeMismatch {
            degree: cfg.degree,
            records: head.len(),
        });
    }
    let fit = fit_exact(&head, cfg.guard_digits)?;
    Ok(fit
        .model
        .weights()
        .weights()
        .iter()
        .map(|w| w.with_abs_precision(m))
        .collect())
}

/// Metropolis walk on the training loss; the best state over all chains wins,
/// ties going to the lowest chain index.
pub fn fit_stochastic(data: &Dataset, cfg: &TrainerConfig) -> Result<FitReport> {
    cfg.validate()?;
    let problem = Problem::new(data, cfg.degree)?;
    let init = initial_weights(data, cfg)?;

    let results: Vec<ChainResult> = if cfg.chains == 1 {
        vec![run_chain(&problem, cfg, &init, derive_seed(cfg.seed, 0))]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..cfg.chains)
                .map(|i| {
                    let (problem, init) = (&problem, &init);
                    s.spawn(move || run_chain(problem, cfg, init, derive_seed(cfg.seed, i as u64)))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("chain panicked"))
                .collect()
        })
    };

    let (chain, best) = results
        .into_iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| {
            a.trajectory
                .last()
                .cmp(&b.trajectory.last())
                .then(i.cmp(j))
        })
        .expect("at least one chain");

    let model = RegressionModel::new(
        data.dimension(),
        data.precision(),
        MahlerSeries::new(data.prime(), best.weights)?,
    )?;
    let mut config = vec![
        ("p".into(), data.prime().to_string()),
        ("n".into(), data.dimension().to_string()),
        ("M".into(), data.precision().to_string()),
    ];
    config.extend(cfg.echo());
    Ok(FitReport {
        mode: FitMode::Stochastic,
        config,
        model,
        trajectory: best.trajectory,
        exact: None,
        chain: Some(chain),
    })
}
