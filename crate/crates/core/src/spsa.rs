//! Simultaneous perturbation stochastic approximation with calibrated gain.
//!
//! Evaluation budget: `calibration_evals` up front, then per iteration two
//! perturbed evaluations and one tracking evaluation at the new point, then a
//! final evaluation: `calibration_evals + 3 * maxiter + 1` in total.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::EstimatorResult;
use crate::error::{QveError, Result};
use crate::rng::{stream, Purpose};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpsaConfig {
    pub alpha: f64,
    pub gamma: f64,
    #[serde(rename = "A")]
    pub big_a: f64,
    pub c: f64,
    /// Step-size numerator; `None` means calibrate.
    pub a: Option<f64>,
    pub maxiter: usize,
    pub calibration_evals: usize,
    pub target_first_step: f64,
}

impl Default for SpsaConfig {
    fn default() -> Self {
        SpsaConfig {
            alpha: 0.602,
            gamma: 0.101,
            big_a: 0.0,
            c: 0.2,
            a: None,
            maxiter: 400,
            calibration_evals: 50,
            target_first_step: 2.0 * PI / 10.0,
        }
    }
}

impl SpsaConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.gamma > 0.0 && self.c > 0.0) {
            return Err(QveError::invalid("SPSA alpha, gamma and c must be positive"));
        }
        if self.maxiter == 0 {
            return Err(QveError::invalid("maxiter must be at least 1"));
        }
        if !self.calibration_evals.is_multiple_of(2) {
            return Err(QveError::invalid("calibration_evals must be even"));
        }
        if self.a.is_none() && self.calibration_evals == 0 {
            return Err(QveError::invalid("no step size and no calibration budget"));
        }
        Ok(())
    }

    /// Total cost evaluations of a full run; a preset `a` skips calibration.
    pub fn total_evaluations(&self) -> usize {
        let calib = if self.a.is_some() { 0 } else { self.calibration_evals };
        calib + 3 * self.maxiter + 1
    }
}

/// `a_k = a / (A + k)^alpha`, `c_k = c / k^gamma`.
pub fn gain_sequences(cfg: &SpsaConfig, a: f64, k: usize) -> Result<(f64, f64)> {
    if k == 0 {
        return Err(QveError::invalid("gain sequences start at k = 1"));
    }
    let k = k as f64;
    Ok((a / (cfg.big_a + k).powf(cfg.alpha), cfg.c / k.powf(cfg.gamma)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub k: usize,
    pub theta: Vec<f64>,
    pub energy: EstimatorResult,
    pub function_evals_so_far: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpsaOutcome {
    /// Parameters after the last iteration.
    pub theta: Vec<f64>,
    pub final_energy: EstimatorResult,
    pub history: Vec<IterationRecord>,
    pub a: f64,
    pub evaluations: usize,
}

/// Cost evaluator: parameters and a running evaluation index (for seeding).
pub trait Cost {
    fn evaluate(&mut self, theta: &[f64], eval_index: u64) -> Result<EstimatorResult>;
}

impl<F> Cost for F
where
    F: FnMut(&[f64], u64) -> Result<EstimatorResult>,
{
    fn evaluate(&mut self, theta: &[f64], eval_index: u64) -> Result<EstimatorResult> {
        self(theta, eval_index)
    }
}

/// Wraps a deterministic scalar function as an exact-mode cost.
pub fn exact_cost<F: FnMut(&[f64]) -> f64>(mut f: F) -> impl FnMut(&[f64], u64) -> Result<EstimatorResult> {
    move |theta: &[f64], i: u64| {
        Ok(EstimatorResult {
            mean: f(theta),
            std_error: 0.0,
            shots: 0,
            seed: i,
        })
    }
}

struct Counter<'a, C: Cost> {
    cost: &'a mut C,
    evals: usize,
}

impl<C: Cost> Counter<'_, C> {
    fn eval(&mut self, theta: &[f64]) -> Result<EstimatorResult> {
        let r = self.cost.evaluate(theta, self.evals as u64)?;
        self.evals += 1;
        Ok(r)
    }
}

fn rademacher(seed: u64, k: u64, j: u64, n: usize) -> Vec<f64> {
    let mut rng = stream(seed, Purpose::SpsaPerturbation, k, j);
    (0..n)
        .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
        .collect()
}

fn perturbed(theta: &[f64], delta: &[f64], step: f64) -> Vec<f64> {
    theta.iter().zip(delta).map(|(t, d)| t + step * d).collect()
}

/// `g_i = [f(theta + c Delta) - f(theta - c Delta)] / (2 c Delta_i)`.
pub fn spsa_gradient<C: Cost>(
    cost: &mut C,
    theta: &[f64],
    c_k: f64,
    delta: &[f64],
    first_eval_index: u64,
) -> Result<Vec<f64>> {
    if let Some(d) = delta.iter().find(|d| d.abs() != 1.0) {
        return Err(QveError::invalid(format!("perturbation component {d} is not +-1")));
    }
    let plus = cost.evaluate(&perturbed(theta, delta, c_k), first_eval_index)?.mean;
    let minus = cost.evaluate(&perturbed(theta, delta, -c_k), first_eval_index + 1)?.mean;
    let diff = (plus - minus) / (2.0 * c_k);
    Ok(delta.iter().map(|d| diff / d).collect())
}

fn calibrate_counted<C: Cost>(
    counter: &mut Counter<'_, C>,
    theta0: &[f64],
    cfg: &SpsaConfig,
    seed: u64,
) -> Result<f64> {
    let (_, c1) = gain_sequences(cfg, 1.0, 1)?;
    let pairs = cfg.calibration_evals / 2;
    let mut total = 0.0;
    for j in 0..pairs {
        let delta = rademacher(seed, 0, j as u64, theta0.len());
        let plus = counter.eval(&perturbed(theta0, &delta, c1))?.mean;
        let minus = counter.eval(&perturbed(theta0, &delta, -c1))?.mean;
        total += ((plus - minus) / (2.0 * c1)).abs();
    }
    let mean = total / pairs as f64;
    if !(mean > 0.0) || !mean.is_finite() {
        return Err(QveError::CalibrationDegenerate);
    }
    Ok(cfg.target_first_step * (cfg.big_a + 1.0).powf(cfg.alpha) / mean)
}

/// Sets `a` so the first update moves each parameter by about
/// `target_first_step`, from `calibration_evals / 2` perturbation pairs.
pub fn calibrate<C: Cost>(cost: &mut C, theta0: &[f64], cfg: &SpsaConfig, seed: u64) -> Result<f64> {
    cfg.validate()?;
    let mut counter = Counter { cost, evals: 0 };
    calibrate_counted(&mut counter, theta0, cfg, seed)
}

pub fn minimize<C: Cost>(
    cost: &mut C,
    theta0: &[f64],
    cfg: &SpsaConfig,
    seed: u64,
    mut callback: impl FnMut(&IterationRecord) -> Result<()>,
) -> Result<SpsaOutcome> {
    cfg.validate()?;
    let mut counter = Counter { cost, evals: 0 };
    let a = match cfg.a {
        Some(a) => a,
        None => calibrate_counted(&mut counter, theta0, cfg, seed)?,
    };
    let mut theta = theta0.to_vec();
    let mut history = Vec::with_capacity(cfg.maxiter);
    for k in 1..=cfg.maxiter {
        let (a_k, c_k) = gain_sequences(cfg, a, k)?;
        let delta = rademacher(seed, k as u64, 0, theta.len());
        let first = counter.evals as u64;
        let g = spsa_gradient(counter.cost, &theta, c_k, &delta, first)
            .map_err(|e| e.in_stage(&format!("SPSA iteration {k}")))?;
        counter.evals += 2;
        for (t, gi) in theta.iter_mut().zip(&g) {
            *t -= a_k * gi;
        }
        let energy = counter
            .eval(&theta)
            .map_err(|e| e.in_stage(&format!("SPSA iteration {k}")))?;
        let rec = IterationRecord {
            k,
            theta: theta.clone(),
            energy,
            function_evals_so_far: counter.evals,
        };
        callback(&rec)?;
        history.push(rec);
    }
    let final_energy = counter.eval(&theta)?;
    Ok(SpsaOutcome {
        theta,
        final_energy,
        history,
        a,
        evaluations: counter.evals,
    })
}
