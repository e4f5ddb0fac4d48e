//! Monte-Carlo integration of the c-number transport equation
//! ∂a/∂t + v_s ∂a/∂x + (γ_s − Re G) a = F(x, t) for the slowly varying plasmon
//! amplitude driven by thermal Langevin noise.
//!
//! Upwind advection, exact per-step exponential decay and complex Gaussian
//! noise.  The noise variance is chosen so that the noise-only stationary
//! state of the *discrete* scheme has ⟨|a|²⟩ equal to the reservoir
//! occupation; it tends to 2γ_s n_T dt as dt → 0.

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Trajectories per deterministic reduction chunk.
const CHUNK: usize = 64;

/// Discretized line and transport parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSpec {
    /// Line length (cm).
    pub length: f64,
    pub n_cells: usize,
    /// Time step (s).
    pub dt: f64,
    pub n_traj: usize,
    pub seed: u64,
    pub v_s: f64,
    pub gamma_s: f64,
    pub re_g: f64,
    /// Occupation of the field injected at x = 0.
    pub n_thermal_boundary: f64,
    /// Reservoir occupation setting the noise strength.
    pub n_thermal_reservoir: f64,
    /// Transit times L/v_s discarded before sampling.
    pub burn_in_transits: f64,
    /// Time steps sampled per trajectory after burn-in.
    pub n_samples: usize,
}

impl LineSpec {
    pub fn dx(&self) -> f64 {
        self.length / self.n_cells as f64
    }

    /// Courant number v_s dt/dx.
    pub fn courant(&self) -> f64 {
        self.v_s * self.dt / self.dx()
    }

    /// Line with Courant number one (exact characteristic shifts).
    #[allow(clippy::too_many_arguments)]
    pub fn characteristic(length: f64, n_cells: usize, v_s: f64, gamma_s: f64, re_g: f64, n_thermal: f64, n_traj: usize, seed: u64) -> Self {
        let dt = length / n_cells as f64 / v_s;
        LineSpec {
            length,
            n_cells,
            dt,
            n_traj,
            seed,
            v_s,
            gamma_s,
            re_g,
            n_thermal_boundary: n_thermal,
            n_thermal_reservoir: n_thermal,
            burn_in_transits: 2.0,
            n_samples: 200,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length > 0.0 && self.v_s > 0.0 && self.dt > 0.0) || self.n_cells == 0 {
            return Err(Error::InvalidInput("length, v_s, dt and n_cells must be positive".into()));
        }
        if self.courant() > 1.0 + 1e-12 {
            return Err(Error::StepSize(format!("Courant number {} exceeds 1", self.courant())));
        }
        if self.n_traj < 100 {
            return Err(Error::InvalidInput("at least 100 trajectories are required".into()));
        }
        if !(self.gamma_s >= 0.0) || self.dt * self.gamma_s >= 0.1 {
            return Err(Error::StepSize(format!("dt·γ_s = {:e} must be below 0.1", self.dt * self.gamma_s)));
        }
        if self.n_thermal_boundary < 0.0 || self.n_thermal_reservoir < 0.0 || self.n_samples == 0 {
            return Err(Error::InvalidInput("occupations must be non-negative and n_samples positive".into()));
        }
        Ok(())
    }
}

/// Variance of the complex noise increment per cell and step,
/// n_T √(a² − b²) with r = e^{−2γ_s dt}, a = 1 − r(1 − 2C(1−C)), b = 2rC(1−C).
pub fn noise_variance(spec: &LineSpec) -> f64 {
    let c = spec.courant().min(1.0);
    let r = (-2.0 * spec.gamma_s * spec.dt).exp();
    let a = 1.0 - r * (1.0 - 2.0 * c * (1.0 - c));
    let b = 2.0 * r * c * (1.0 - c);
    spec.n_thermal_reservoir * (a * a - b * b).max(0.0).sqrt()
}

/// Ensemble statistics of ⟨|a|²⟩ along the line.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    /// Downstream edge of each cell (cm).
    pub x: Vec<f64>,
    pub mean: Vec<f64>,
    /// Monte-Carlo standard error of `mean`.
    pub stderr: Vec<f64>,
    /// Means over the first and second halves of the sampling window.
    pub first_half: Vec<f64>,
    pub second_half: Vec<f64>,
    /// Standard error of the second-minus-first half difference.
    pub drift_stderr: Vec<f64>,
    /// Number of trajectories dropped after overflowing.
    pub truncated: usize,
}

#[derive(Clone)]
struct Sums {
    s: Vec<f64>,
    s2: Vec<f64>,
    h1: Vec<f64>,
    h2: Vec<f64>,
    d2: Vec<f64>,
    used: usize,
    dropped: usize,
}

impl Sums {
    fn new(n: usize) -> Self {
        Sums { s: vec![0.0; n], s2: vec![0.0; n], h1: vec![0.0; n], h2: vec![0.0; n], d2: vec![0.0; n], used: 0, dropped: 0 }
    }

    fn merge(mut self, o: &Sums) -> Self {
        for j in 0..self.s.len() {
            self.s[j] += o.s[j];
            self.s2[j] += o.s2[j];
            self.h1[j] += o.h1[j];
            self.h2[j] += o.h2[j];
            self.d2[j] += o.d2[j];
        }
        self.used += o.used;
        self.dropped += o.dropped;
        self
    }
}

fn complex_normal(rng: &mut ChaCha8Rng, var: f64) -> Complex64 {
    let s = (var / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * s, im * s)
}

/// Time-averaged |a_j|² over the sampling window (and its two halves) for one trajectory.
fn trajectory(spec: &LineSpec, index: usize) -> Option<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(index as u64);
    let n = spec.n_cells;
    let c = spec.courant().min(1.0);
    let decay = (-(spec.gamma_s - spec.re_g) * spec.dt).exp();
    let var = noise_variance(spec);
    let mut a: Vec<Complex64> = (0..n).map(|_| complex_normal(&mut rng, spec.n_thermal_reservoir)).collect();
    let burn = (spec.burn_in_transits * spec.length / (spec.v_s * spec.dt)).ceil() as usize;
    let half = spec.n_samples / 2;
    let mut acc = vec![0.0; n];
    let mut h1 = vec![0.0; n];
    let mut h2 = vec![0.0; n];
    for step in 0..burn + spec.n_samples {
        let inflow = complex_normal(&mut rng, spec.n_thermal_boundary);
        for j in (0..n).rev() {
            let upstream = if j == 0 { inflow } else { a[j - 1] };
            a[j] = decay * ((1.0 - c) * a[j] + c * upstream) + complex_normal(&mut rng, var);
        }
        if step >= burn {
            let k = step - burn;
            for j in 0..n {
                let v = a[j].norm_sqr();
                if !v.is_finite() {
                    return None;
                }
                acc[j] += v;
                if k < half {
                    h1[j] += v;
                } else {
                    h2[j] += v;
                }
            }
        }
    }
    let ns = spec.n_samples as f64;
    let (n1, n2) = (half.max(1) as f64, (spec.n_samples - half).max(1) as f64);
    Some((
        acc.iter().map(|v| v / ns).collect(),
        h1.iter().map(|v| v / n1).collect(),
        h2.iter().map(|v| v / n2).collect(),
    ))
}

/// Runs the ensemble and returns the occupation profile.
pub fn simulate(spec: &LineSpec) -> Result<Profile> {
    spec.validate()?;
    let n = spec.n_cells;
    let chunks: Vec<Sums> = (0..spec.n_traj.div_ceil(CHUNK))
        .into_par_iter()
        .map(|ci| {
            let mut s = Sums::new(n);
            for t in ci * CHUNK..((ci + 1) * CHUNK).min(spec.n_traj) {
                match trajectory(spec, t) {
                    Some((m, a, b)) => {
                        for j in 0..n {
                            s.s[j] += m[j];
                            s.s2[j] += m[j] * m[j];
                            s.h1[j] += a[j];
                            s.h2[j] += b[j];
                            s.d2[j] += (b[j] - a[j]) * (b[j] - a[j]);
                        }
                        s.used += 1;
                    }
                    None => s.dropped += 1,
                }
            }
            s
        })
        .collect();
    let total = chunks.iter().fold(Sums::new(n), |acc, c| acc.merge(c));
    let k = total.used as f64;
    if total.used < 2 {
        return Err(Error::InvalidInput(format!("{} of {} trajectories overflowed", total.dropped, spec.n_traj)));
    }
    let dx = spec.dx();
    let mean: Vec<f64> = total.s.iter().map(|v| v / k).collect();
    let stderr = (0..n)
        .map(|j| ((total.s2[j] / k - mean[j] * mean[j]).max(0.0) * k / (k - 1.0) / k).sqrt())
        .collect();
    let first_half: Vec<f64> = total.h1.iter().map(|v| v / k).collect();
    let second_half: Vec<f64> = total.h2.iter().map(|v| v / k).collect();
    let drift_stderr = (0..n)
        .map(|j| {
            let md = second_half[j] - first_half[j];
            ((total.d2[j] / k - md * md).max(0.0) * k / (k - 1.0) / k).sqrt()
        })
        .collect();
    Ok(Profile {
        x: (0..n).map(|j| (j + 1) as f64 * dx).collect(),
        mean,
        stderr,
        first_half,
        second_half,
        drift_stderr,
        truncated: total.dropped,
    })
}
