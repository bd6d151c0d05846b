//! Zero-noise extrapolation: global folding and least-squares extrapolation
//! to the zero-noise limit.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::circuit::{estimate, Circuit, EstimatorResult, NoiseModel};
use crate::error::{QveError, Result};
use crate::pauli::PauliSum;

/// `C (C† C)^((n-1)/2)`; `n` must be odd.
pub fn fold_circuit(c: &Circuit, n: usize) -> Result<Circuit> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(QveError::InvalidFold(n));
    }
    let inv = c.inverse();
    let mut out = c.clone();
    for _ in 0..(n - 1) / 2 {
        out.extend(&inv)?;
        out.extend(c)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitModel {
    Linear,
    Quadratic,
    Exponential,
}

impl FitModel {
    pub const ALL: [FitModel; 3] = [FitModel::Linear, FitModel::Quadratic, FitModel::Exponential];

    pub fn min_points(self) -> usize {
        match self {
            FitModel::Linear => 2,
            _ => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FitModel::Linear => "linear",
            FitModel::Quadratic => "quadratic",
            FitModel::Exponential => "exponential",
        }
    }
}

impl fmt::Display for FitModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FitModel {
    type Err = QveError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(FitModel::Linear),
            "quadratic" => Ok(FitModel::Quadratic),
            "exponential" => Ok(FitModel::Exponential),
            _ => Err(QveError::invalid(format!(
                "unknown fit `{s}` (expected linear, quadratic or exponential)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: FitModel,
    /// Extrapolated value at zero noise.
    pub e0: f64,
    /// Linear/quadratic: polynomial coefficients from the constant up;
    /// exponential: (a, b, c) of `a + b exp(-c x)`.
    pub params: Vec<f64>,
    /// Sum of squared residuals.
    pub residual: f64,
    /// Set when the exponential fit hit its bound and the quadratic fit was
    /// substituted.
    pub fallback: bool,
}

fn check_points(points: &[(f64, f64)], model: FitModel) -> Result<()> {
    if points.len() < model.min_points() {
        return Err(QveError::invalid(format!(
            "{model} fit needs at least {} points, got {}",
            model.min_points(),
            points.len()
        )));
    }
    let mut xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    if xs.windows(2).any(|w| w[0] == w[1]) {
        return Err(QveError::invalid("noise scale factors must be distinct"));
    }
    if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(QveError::invalid("non-finite extrapolation data"));
    }
    Ok(())
}

/// Least squares with the given basis functions; returns (coefficients, residual).
fn linear_lsq(points: &[(f64, f64)], basis: &[&dyn Fn(f64) -> f64]) -> Result<(Vec<f64>, f64)> {
    let a = DMatrix::from_fn(points.len(), basis.len(), |i, j| basis[j](points[i].0));
    let y = DVector::from_iterator(points.len(), points.iter().map(|p| p.1));
    let svd = a.clone().svd(true, true);
    let coef = svd
        .solve(&y, 1e-12)
        .map_err(|e| QveError::invalid(format!("least-squares solve failed: {e}")))?;
    let resid = (&a * &coef - &y).norm_squared();
    Ok((coef.iter().copied().collect(), resid))
}

fn polynomial_fit(points: &[(f64, f64)], degree: usize, model: FitModel) -> Result<FitResult> {
    let fs: Vec<Box<dyn Fn(f64) -> f64>> = (0..=degree)
        .map(|d| Box::new(move |x: f64| x.powi(d as i32)) as Box<dyn Fn(f64) -> f64>)
        .collect();
    let refs: Vec<&dyn Fn(f64) -> f64> = fs.iter().map(|f| f.as_ref()).collect();
    let (params, residual) = linear_lsq(points, &refs)?;
    Ok(FitResult {
        model,
        e0: params[0],
        params,
        residual,
        fallback: false,
    })
}

const EXP_RATE_MIN: f64 = 1e-6;
const EXP_RATE_MAX: f64 = 1e2;

/// Best (a, b) and residual for a fixed decay rate.
fn exp_profile(points: &[(f64, f64)], c: f64) -> Result<(Vec<f64>, f64)> {
    let one = |_: f64| 1.0;
    let decay = move |x: f64| (-c * x).exp();
    linear_lsq(points, &[&one, &decay])
}

/// `a + b exp(-c x)`, `c >= 0`: the linear pair is eliminated and the
/// residual minimized over `c` by a log-spaced scan and golden-section
/// refinement. An optimum on the rate bounds falls back to the quadratic fit.
fn exponential_fit(points: &[(f64, f64)]) -> Result<FitResult> {
    let n_grid = 400;
    let (lo, hi) = (EXP_RATE_MIN.ln(), EXP_RATE_MAX.ln());
    let grid: Vec<f64> = (0..n_grid)
        .map(|i| (lo + (hi - lo) * i as f64 / (n_grid - 1) as f64).exp())
        .collect();
    let mut best = (0usize, f64::INFINITY);
    for (i, &c) in grid.iter().enumerate() {
        let r = exp_profile(points, c)?.1;
        if r < best.1 {
            best = (i, r);
        }
    }
    if best.0 == 0 || best.0 == n_grid - 1 {
        let mut q = polynomial_fit(points, 2, FitModel::Quadratic)?;
        q.model = FitModel::Exponential;
        q.fallback = true;
        return Ok(q);
    }
    // Golden section in log-rate on the bracketing grid cell pair.
    let (mut a, mut b) = (grid[best.0 - 1].ln(), grid[best.0 + 1].ln());
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let f = |t: f64| exp_profile(points, t.exp()).map(|p| p.1);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    for _ in 0..200 {
        if (b - a).abs() < 1e-15 {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2)?;
        }
    }
    let c = (0.5 * (a + b)).exp();
    let (ab, residual) = exp_profile(points, c)?;
    Ok(FitResult {
        model: FitModel::Exponential,
        e0: ab[0] + ab[1],
        params: vec![ab[0], ab[1], c],
        residual,
        fallback: false,
    })
}

/// Fits `E(x)` to (noise scale, energy) pairs and evaluates at `x = 0`.
pub fn extrapolate(points: &[(f64, f64)], model: FitModel) -> Result<FitResult> {
    check_points(points, model)?;
    match model {
        FitModel::Linear => polynomial_fit(points, 1, model),
        FitModel::Quadratic => polynomial_fit(points, 2, model),
        FitModel::Exponential => exponential_fit(points),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZnePoint {
    pub fold: usize,
    pub energy: EstimatorResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZneResult {
    pub points: Vec<ZnePoint>,
    /// Fold-1 energy.
    pub raw: f64,
    pub fits: BTreeMap<FitModel, FitResult>,
}

impl ZneResult {
    /// Fold table as CSV: `fold,energy_ha,std_error_ha`.
    pub fn points_csv(&self) -> String {
        let mut s = String::from("fold,energy_ha,std_error_ha\n");
        for p in &self.points {
            s.push_str(&format!("{},{},{}\n", p.fold, p.energy.mean, p.energy.std_error));
        }
        s
    }
}

/// Measures each fold under the same noise model and seed and fits every
/// requested model that has enough points.
#[allow(clippy::too_many_arguments)]
pub fn run_zne(
    c: &Circuit,
    theta: &[f64],
    h: &PauliSum,
    folds: &[usize],
    shots: usize,
    seed: u64,
    noise: &NoiseModel,
    models: &[FitModel],
) -> Result<ZneResult> {
    if folds.first() != Some(&1) || folds.windows(2).any(|w| w[0] >= w[1]) {
        return Err(QveError::invalid(
            "folds must be strictly ascending and start with 1",
        ));
    }
    if shots == 0 {
        return Err(QveError::InvalidCombination(
            "zero-noise extrapolation needs shot-based noisy estimates".into(),
        ));
    }
    let mut points = Vec::with_capacity(folds.len());
    for &f in folds {
        let folded = fold_circuit(c, f)?;
        let energy = estimate(&folded, theta, h, shots, seed, Some(noise))?;
        points.push(ZnePoint { fold: f, energy });
    }
    let data: Vec<(f64, f64)> = points.iter().map(|p| (p.fold as f64, p.energy.mean)).collect();
    let mut fits = BTreeMap::new();
    for &m in models {
        if data.len() >= m.min_points() {
            fits.insert(m, extrapolate(&data, m)?);
        }
    }
    Ok(ZneResult {
        raw: points[0].energy.mean,
        points,
        fits,
    })
}
