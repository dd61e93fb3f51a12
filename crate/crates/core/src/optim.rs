//! Adam and Nelder-Mead minimizers with a sustained-window stopping rule.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum OptimizerMethod {
    #[default]
    GradientDescentAdam,
    NelderMead,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub method: OptimizerMethod,
    pub max_iterations: usize,
    /// Stop once the tracked energy changes by less than this...
    pub tolerance: f64,
    /// ...for this many consecutive iterations.
    pub window: usize,
    pub step_size: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    /// Edge length of the initial Nelder-Mead simplex.
    pub simplex_scale: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            method: OptimizerMethod::GradientDescentAdam,
            max_iterations: 1000,
            tolerance: 1e-9,
            window: 25,
            step_size: 0.05,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            simplex_scale: 0.1,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::InvalidArgument("max_iterations must be at least 1".into()));
        }
        if !(self.tolerance > 0.0) || self.window == 0 {
            return Err(Error::InvalidArgument("tolerance must be positive and window at least 1".into()));
        }
        if !(self.step_size > 0.0) || !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) {
            return Err(Error::InvalidArgument("invalid Adam hyperparameters".into()));
        }
        if !(self.simplex_scale > 0.0) {
            return Err(Error::InvalidArgument("simplex_scale must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    /// Energy recorded at each iteration.
    pub trace: Vec<f64>,
    pub best_theta: Vec<f64>,
    pub best_value: f64,
    pub converged: bool,
    pub iterations: usize,
}

struct Window {
    tolerance: f64,
    needed: usize,
    run: usize,
    last: Option<f64>,
}

impl Window {
    fn new(cfg: &OptimizerConfig) -> Self {
        Window {
            tolerance: cfg.tolerance,
            needed: cfg.window,
            run: 0,
            last: None,
        }
    }

    /// Feeds one value; true once the window is satisfied.
    fn push(&mut self, value: f64) -> bool {
        if let Some(prev) = self.last {
            if (value - prev).abs() < self.tolerance {
                self.run += 1;
            } else {
                self.run = 0;
            }
        }
        self.last = Some(value);
        self.run >= self.needed
    }
}

/// Adam on a function returning `(value, gradient)`.
pub fn adam<F>(mut f: F, theta0: &[f64], cfg: &OptimizerConfig) -> Result<Outcome>
where
    F: FnMut(&[f64]) -> Result<(f64, Vec<f64>)>,
{
    cfg.validate()?;
    let dim = theta0.len();
    let mut theta = theta0.to_vec();
    let mut m = vec![0.0; dim];
    let mut v = vec![0.0; dim];
    let mut trace = Vec::with_capacity(cfg.max_iterations);
    let mut best_theta = theta.clone();
    let mut best_value = f64::INFINITY;
    let mut window = Window::new(cfg);
    let mut converged = false;

    for t in 1..=cfg.max_iterations {
        let (value, grad) = f(&theta)?;
        trace.push(value);
        if value < best_value {
            best_value = value;
            best_theta.clone_from(&theta);
        }
        if window.push(value) {
            converged = true;
            break;
        }
        let bc1 = 1.0 - cfg.beta1.powi(t as i32);
        let bc2 = 1.0 - cfg.beta2.powi(t as i32);
        for k in 0..dim {
            m[k] = cfg.beta1 * m[k] + (1.0 - cfg.beta1) * grad[k];
            v[k] = cfg.beta2 * v[k] + (1.0 - cfg.beta2) * grad[k] * grad[k];
            let m_hat = m[k] / bc1;
            let v_hat = v[k] / bc2;
            theta[k] -= cfg.step_size * m_hat / (v_hat.sqrt() + cfg.epsilon);
        }
    }
    let iterations = trace.len();
    Ok(Outcome {
        trace,
        best_theta,
        best_value,
        converged,
        iterations,
    })
}

/// Nelder-Mead with reflection 1, expansion 2, contraction 1/2, shrink 1/2.
/// The stopping window tracks the mean simplex value; the trace records the
/// best vertex at the start of each iteration.
pub fn nelder_mead<F>(mut f: F, theta0: &[f64], cfg: &OptimizerConfig) -> Result<Outcome>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    cfg.validate()?;
    let dim = theta0.len();
    if dim == 0 {
        let value = f(theta0)?;
        return Ok(Outcome {
            trace: vec![value],
            best_theta: Vec::new(),
            best_value: value,
            converged: true,
            iterations: 1,
        });
    }
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((theta0.to_vec(), f(theta0)?));
    for k in 0..dim {
        let mut p = theta0.to_vec();
        p[k] += cfg.simplex_scale;
        let value = f(&p)?;
        simplex.push((p, value));
    }
    let mut trace = Vec::with_capacity(cfg.max_iterations);
    let mut best_theta = theta0.to_vec();
    let mut best_value = f64::INFINITY;
    let mut window = Window::new(cfg);
    let mut converged = false;

    for _ in 0..cfg.max_iterations {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        trace.push(simplex[0].1);
        if simplex[0].1 < best_value {
            best_value = simplex[0].1;
            best_theta.clone_from(&simplex[0].0);
        }
        let mean = simplex.iter().map(|s| s.1).sum::<f64>() / simplex.len() as f64;
        if window.push(mean) {
            converged = true;
            break;
        }
        let worst = simplex[dim].clone();
        let centroid: Vec<f64> = (0..dim)
            .map(|k| simplex[..dim].iter().map(|s| s.0[k]).sum::<f64>() / dim as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };
        let reflected = along(1.0);
        let f_r = f(&reflected)?;
        if f_r < simplex[0].1 {
            let expanded = along(2.0);
            let f_e = f(&expanded)?;
            simplex[dim] = if f_e < f_r { (expanded, f_e) } else { (reflected, f_r) };
            continue;
        }
        if f_r < simplex[dim - 1].1 {
            simplex[dim] = (reflected, f_r);
            continue;
        }
        let (contracted, f_c) = if f_r < worst.1 {
            let p = along(0.5);
            let v = f(&p)?;
            (p, v)
        } else {
            let p = along(-0.5);
            let v = f(&p)?;
            (p, v)
        };
        if f_c < worst.1.min(f_r) {
            simplex[dim] = (contracted, f_c);
            continue;
        }
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let p: Vec<f64> = best.iter().zip(&vertex.0).map(|(b, x)| b + 0.5 * (x - b)).collect();
            let value = f(&p)?;
            *vertex = (p, value);
        }
    }
    let iterations = trace.len();
    Ok(Outcome {
        trace,
        best_theta,
        best_value,
        converged,
        iterations,
    })
}
