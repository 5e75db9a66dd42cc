//! Leaky-tanh echo state network with a ridge-regression readout.
//!
//! The network works on position deltas: the input at step `t` is the
//! normalised displacement `p(t+1) − p(t)` and the readout predicts the next
//! displacement. Positions are recovered by summing predicted displacements.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::Point2;
use crate::mobility_forecast::trajectory::Trajectory;
use crate::{seeds, Error, Result};

/// Input dimension (x, y displacement).
pub const DIM: usize = 2;
pub const MAX_REDRAWS: u64 = 5;
const NILPOTENT_RADIUS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EsnConfig {
    pub reservoir_size: usize,
    pub spectral_radius: f64,
    pub input_scale: f64,
    pub leak: f64,
    pub ridge: f64,
    pub washout: usize,
    pub connectivity: f64,
}

impl Default for EsnConfig {
    fn default() -> Self {
        Self {
            reservoir_size: 100,
            spectral_radius: 0.8,
            input_scale: 0.2,
            leak: 0.8,
            ridge: 1e-2,
            washout: 20,
            connectivity: 0.1,
        }
    }
}

impl EsnConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Configuration(m));
        if self.reservoir_size < 10 {
            return bad(format!("esn.reservoir_size must be >= 10, got {}", self.reservoir_size));
        }
        if !(self.spectral_radius > 0.0 && self.spectral_radius < 1.0) {
            return bad(format!("esn.spectral_radius must be in (0, 1), got {}", self.spectral_radius));
        }
        if !(self.input_scale.is_finite() && self.input_scale > 0.0) {
            return bad(format!("esn.input_scale must be > 0, got {}", self.input_scale));
        }
        if !(self.leak > 0.0 && self.leak <= 1.0) {
            return bad(format!("esn.leak must be in (0, 1], got {}", self.leak));
        }
        if !(self.ridge.is_finite() && self.ridge >= 0.0) {
            return bad(format!("esn.ridge must be >= 0, got {}", self.ridge));
        }
        if !(self.connectivity > 0.0 && self.connectivity <= 1.0) {
            return bad(format!("esn.connectivity must be in (0, 1], got {}", self.connectivity));
        }
        Ok(())
    }
}

/// Per-component affine normalisation of displacements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalizer {
    pub mean: [f64; DIM],
    pub std: [f64; DIM],
}

impl Default for Normalizer {
    fn default() -> Self {
        Self { mean: [0.0; DIM], std: [1.0; DIM] }
    }
}

impl Normalizer {
    /// Zero-mean, unit-variance over `deltas`. A component without spread
    /// keeps unit scale.
    pub fn fit(deltas: &[[f64; DIM]]) -> Self {
        if deltas.is_empty() {
            return Self::default();
        }
        let n = deltas.len() as f64;
        let mut mean = [0.0; DIM];
        let mut std = [0.0; DIM];
        for k in 0..DIM {
            mean[k] = deltas.iter().map(|d| d[k]).sum::<f64>() / n;
            let var = deltas.iter().map(|d| (d[k] - mean[k]).powi(2)).sum::<f64>() / n;
            std[k] = if var.sqrt() > 1e-12 { var.sqrt() } else { 1.0 };
        }
        Self { mean, std }
    }

    pub fn forward(&self, d: [f64; DIM]) -> [f64; DIM] {
        std::array::from_fn(|k| (d[k] - self.mean[k]) / self.std[k])
    }

    pub fn inverse(&self, u: [f64; DIM]) -> [f64; DIM] {
        std::array::from_fn(|k| u[k] * self.std[k] + self.mean[k])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EsnModel {
    pub config: EsnConfig,
    /// N × (d+1); column 0 multiplies the constant input.
    pub w_in: DMatrix<f64>,
    /// N × N reservoir.
    pub w: DMatrix<f64>,
    /// d × (N+d+1) over `[state; input; 1]`. All zero until trained.
    pub w_out: DMatrix<f64>,
    pub normalizer: Normalizer,
    pub trained: bool,
    /// Seed actually used for the reservoir after any nilpotent redraws.
    pub seed: u64,
    pub redraws: u64,
}

/// Largest eigenvalue modulus.
pub fn spectral_radius(w: &DMatrix<f64>) -> f64 {
    w.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn draw_reservoir(cfg: &EsnConfig, seed: u64) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = cfg.reservoir_size;
    let mut rng = seeds::rng(seed);
    let w_in = DMatrix::from_fn(n, DIM + 1, |_, _| rng.random_range(-cfg.input_scale..=cfg.input_scale));
    let mut w = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if rng.random::<f64>() < cfg.connectivity {
                w[(i, j)] = rng.random_range(-1.0..1.0);
            }
        }
    }
    (w_in, w)
}

/// Draws a reservoir and rescales it to the configured spectral radius.
///
/// A nilpotent draw cannot be rescaled; it is replaced by a draw from
/// `seed + 1`, up to [`MAX_REDRAWS`] times.
pub fn build_reservoir(cfg: &EsnConfig, seed: u64) -> Result<EsnModel> {
    cfg.validate()?;
    for redraw in 0..=MAX_REDRAWS {
        let draw_seed = seed.wrapping_add(redraw);
        let (w_in, mut w) = draw_reservoir(cfg, draw_seed);
        let radius = spectral_radius(&w);
        if radius < NILPOTENT_RADIUS {
            continue;
        }
        w *= cfg.spectral_radius / radius;
        let n = cfg.reservoir_size;
        return Ok(EsnModel {
            config: *cfg,
            w_in,
            w,
            w_out: DMatrix::zeros(DIM, n + DIM + 1),
            normalizer: Normalizer::default(),
            trained: false,
            seed: draw_seed,
            redraws: redraw,
        });
    }
    Err(Error::Construction(format!(
        "reservoir draws from seed {seed} were nilpotent {} times; raise esn.connectivity",
        MAX_REDRAWS + 1
    )))
}

fn deltas(traj: &Trajectory) -> Vec<[f64; DIM]> {
    traj.points.windows(2).map(|w| [w[1].x - w[0].x, w[1].y - w[0].y]).collect()
}

impl EsnModel {
    pub fn reservoir_size(&self) -> usize {
        self.w.nrows()
    }

    /// One leaky state update driven by normalised input `u`.
    pub fn step(&self, state: &DVector<f64>, u: &[f64; DIM]) -> DVector<f64> {
        let a = self.config.leak;
        let input = DVector::from_column_slice(&[1.0, u[0], u[1]]);
        let pre = &self.w_in * input + &self.w * state;
        state * (1.0 - a) + pre.map(f64::tanh) * a
    }

    fn features(state: &DVector<f64>, u: &[f64; DIM]) -> DVector<f64> {
        let n = state.len();
        let mut x = DVector::zeros(n + DIM + 1);
        x.rows_mut(0, n).copy_from(state);
        x[n] = u[0];
        x[n + 1] = u[1];
        x[n + DIM] = 1.0;
        x
    }

    fn readout(&self, state: &DVector<f64>, u: &[f64; DIM]) -> [f64; DIM] {
        let y = &self.w_out * Self::features(state, u);
        [y[0], y[1]]
    }
}

/// Normaliser and teacher-forced design matrices for a training set.
///
/// Rows of `x` are `[state; input; 1]` after the input at step `t` has been
/// absorbed, for `t ≥ washout`; rows of `y` are the normalised displacement
/// at step `t + 1`.
pub fn design_matrices(
    model: &EsnModel,
    trajectories: &[Trajectory],
) -> Result<(Normalizer, DMatrix<f64>, DMatrix<f64>)> {
    let washout = model.config.washout;
    for (k, traj) in trajectories.iter().enumerate() {
        if traj.len() <= washout + 1 {
            return Err(Error::Domain(format!(
                "training trajectory {k} has {} points; needs more than washout + 1 = {}",
                traj.len(),
                washout + 1
            )));
        }
    }
    let all: Vec<Vec<[f64; DIM]>> = trajectories.iter().map(deltas).collect();
    let normalizer = Normalizer::fit(&all.concat());
    let n = model.reservoir_size();

    let mut rows: Vec<DVector<f64>> = Vec::new();
    let mut targets: Vec<[f64; DIM]> = Vec::new();
    for d in &all {
        let inputs: Vec<[f64; DIM]> = d.iter().map(|&v| normalizer.forward(v)).collect();
        let mut state = DVector::zeros(n);
        for t in 0..inputs.len().saturating_sub(1) {
            state = model.step(&state, &inputs[t]);
            if t >= washout {
                rows.push(EsnModel::features(&state, &inputs[t]));
                targets.push(inputs[t + 1]);
            }
        }
    }
    if rows.is_empty() {
        return Err(Error::Domain("no post-washout training rows".into()));
    }
    let x = DMatrix::from_fn(rows.len(), n + DIM + 1, |i, j| rows[i][j]);
    let y = DMatrix::from_fn(targets.len(), DIM, |i, j| targets[i][j]);
    Ok((normalizer, x, y))
}

/// Solves `(XᵀX + λI)·W_outᵀ = XᵀY`.
pub fn ridge_solve(x: &DMatrix<f64>, y: &DMatrix<f64>, lambda: f64) -> Result<DMatrix<f64>> {
    let mut a = x.transpose() * x;
    for i in 0..a.nrows() {
        a[(i, i)] += lambda;
    }
    let b = x.transpose() * y;
    let singular = || {
        Error::Singular(if lambda == 0.0 {
            "normal matrix is singular; set esn.ridge > 0".into()
        } else {
            format!("normal matrix is not positive definite at ridge {lambda}")
        })
    };
    let chol = a.clone().cholesky().ok_or_else(singular)?;
    if lambda == 0.0 {
        // Rounding lets Cholesky succeed on exactly rank-deficient matrices.
        let diag = chol.l_dirty().diagonal();
        let max = diag.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let min = diag.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
        if !(min > 1e-7 * max) {
            return Err(singular());
        }
    }
    Ok(chol.solve(&b).transpose())
}

/// Fits the readout on teacher-forced runs over `trajectories`.
pub fn train_readout(model: &EsnModel, trajectories: &[Trajectory]) -> Result<EsnModel> {
    let (normalizer, x, y) = design_matrices(model, trajectories)?;
    let w_out = ridge_solve(&x, &y, model.config.ridge)?;
    Ok(EsnModel { w_out, normalizer, trained: true, ..model.clone() })
}

/// Warms the reservoir on `history`, then rolls out `horizon` positions,
/// feeding each predicted displacement back as the next input.
pub fn predict(model: &EsnModel, history: &Trajectory, horizon: usize) -> Result<Vec<Point2>> {
    if !model.trained {
        return Err(Error::Untrained);
    }
    if horizon == 0 {
        return Ok(Vec::new());
    }
    let need = model.config.washout.max(2);
    if history.len() < need {
        return Err(Error::Domain(format!("history has {} points; needs at least {need}", history.len())));
    }
    let mut state = DVector::zeros(model.reservoir_size());
    let mut u = [0.0; DIM];
    for d in deltas(history) {
        u = model.normalizer.forward(d);
        state = model.step(&state, &u);
    }
    let last = history.points.last().expect("nonempty history");
    let mut pos = Point2::new(last.x, last.y);
    let mut out = Vec::with_capacity(horizon);
    for k in 0..horizon {
        let next = model.readout(&state, &u);
        let d = model.normalizer.inverse(next);
        pos = Point2::new(pos.x + d[0], pos.y + d[1]);
        out.push(pos);
        if k + 1 < horizon {
            u = next;
            state = model.step(&state, &u);
        }
    }
    Ok(out)
}

/// Repeats the last observed position.
pub fn persistence(history: &Trajectory, horizon: usize) -> Vec<Point2> {
    history.points.last().map_or_else(Vec::new, |p| vec![p.position(); horizon])
}
