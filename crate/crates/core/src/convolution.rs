//! Time-convolution algebra: the kernels `l`, `xi`, `zeta`, `chi`, discrete
//! convolution by trapezoidal quadrature, and the rate operator
//! `A = I + beta d/dt`.
//!
//! The discrete convolution is direct O(N^2) summation; series stay in the
//! low thousands of samples here, so no fast transform is warranted.
//! Trapezoidal quadrature matches the second-order accuracy of the solver.

use crate::error::{Error, Result};

/// Uniformly sampled time signal starting at t = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub dt: f64,
    pub samples: Vec<f64>,
}

impl TimeSeries {
    pub fn new(dt: f64, samples: Vec<f64>) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(Error::Shape(format!("time step must be positive, got {dt}")));
        }
        if samples.len() < 2 {
            return Err(Error::Shape("a time series needs at least 2 samples".into()));
        }
        Ok(TimeSeries { dt, samples })
    }

    pub fn from_fn(dt: f64, n_samples: usize, mut f: impl FnMut(f64) -> f64) -> Result<Self> {
        let samples = (0..n_samples).map(|k| f(k as f64 * dt)).collect();
        TimeSeries::new(dt, samples)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }
}

/// The convolution kernels of the alternative formulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    /// `l(t) = 1`
    L,
    /// `xi(t) = (l * l)(t) = t`
    Xi,
    /// `zeta(t) = exp(-t/beta) / beta`
    Zeta { beta: f64 },
    /// `chi(t) = exp(-t/beta') / beta'`
    Chi { beta_prime: f64 },
}

/// Evaluates a kernel at `t >= 0`. Errors on a zero relaxation parameter.
pub fn kernel_eval(k: Kernel, t: f64) -> Result<f64> {
    match k {
        Kernel::L => Ok(1.0),
        Kernel::Xi => Ok(t),
        Kernel::Zeta { beta } => {
            if beta == 0.0 {
                Err(Error::Material("zeta kernel needs beta != 0".into()))
            } else {
                Ok((-t / beta).exp() / beta)
            }
        }
        Kernel::Chi { beta_prime } => {
            if beta_prime == 0.0 {
                Err(Error::Material("chi kernel needs beta' != 0".into()))
            } else {
                Ok((-t / beta_prime).exp() / beta_prime)
            }
        }
    }
}

/// Samples a kernel on a uniform time grid.
pub fn kernel_series(k: Kernel, dt: f64, n_samples: usize) -> Result<TimeSeries> {
    let mut samples = Vec::with_capacity(n_samples);
    for i in 0..n_samples {
        samples.push(kernel_eval(k, i as f64 * dt)?);
    }
    TimeSeries::new(dt, samples)
}

/// Trapezoidal discrete convolution on raw slices:
/// `(f*g)[m] = dt (f0 gm / 2 + sum_{j=1}^{m-1} fj g_{m-j} + fm g0 / 2)`.
pub fn convolve_samples(f: &[f64], g: &[f64], dt: f64) -> Vec<f64> {
    let n = f.len().min(g.len());
    let mut out = vec![0.0; n];
    for m in 1..n {
        let mut acc = 0.5 * (f[0] * g[m] + f[m] * g[0]);
        for j in 1..m {
            acc += f[j] * g[m - j];
        }
        out[m] = acc * dt;
    }
    out
}

/// Running integral `(l * f)(t)` by the same trapezoidal rule.
pub fn cumtrapz(f: &[f64], dt: f64) -> Vec<f64> {
    let mut out = vec![0.0; f.len()];
    for m in 1..f.len() {
        out[m] = out[m - 1] + 0.5 * dt * (f[m - 1] + f[m]);
    }
    out
}

/// Trapezoidal quadrature of the convolution integral at every sample time;
/// sample 0 is 0.
pub fn convolve(f: &TimeSeries, g: &TimeSeries) -> Result<TimeSeries> {
    if (f.dt - g.dt).abs() > 1e-12 * f.dt.max(g.dt) || f.len() != g.len() {
        return Err(Error::Shape(
            "convolution operands must share dt and length".into(),
        ));
    }
    TimeSeries::new(f.dt, convolve_samples(&f.samples, &g.samples, f.dt))
}

/// Second-order time derivative of a sampled signal (centered inside,
/// one-sided at the series ends).
pub fn diff_series(f: &[f64], dt: f64) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![0.0; n];
    if n == 2 {
        let d = (f[1] - f[0]) / dt;
        out[0] = d;
        out[1] = d;
        return out;
    }
    out[0] = (-1.5 * f[0] + 2.0 * f[1] - 0.5 * f[2]) / dt;
    out[n - 1] = (1.5 * f[n - 1] - 2.0 * f[n - 2] + 0.5 * f[n - 3]) / dt;
    for i in 1..n - 1 {
        out[i] = (f[i + 1] - f[i - 1]) / (2.0 * dt);
    }
    out
}

/// Second time derivative (direct stencil, second-order one-sided ends).
pub fn diff2_series(f: &[f64], dt: f64) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![0.0; n];
    let dt2 = dt * dt;
    if n < 4 {
        for i in 1..n.saturating_sub(1) {
            out[i] = (f[i - 1] - 2.0 * f[i] + f[i + 1]) / dt2;
        }
        return out;
    }
    out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / dt2;
    out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / dt2;
    for i in 1..n - 1 {
        out[i] = (f[i - 1] - 2.0 * f[i] + f[i + 1]) / dt2;
    }
    out
}

/// `A theta = theta + beta theta_dot`. The rate is differenced numerically
/// unless the caller supplies the exact series (the solver carries
/// `theta_dot` as a state variable and should pass it).
pub fn apply_a(theta: &TimeSeries, beta: f64, theta_dot: Option<&TimeSeries>) -> Result<TimeSeries> {
    if theta.len() < 3 && theta_dot.is_none() {
        return Err(Error::Shape("apply_a needs at least 3 samples".into()));
    }
    let rate = match theta_dot {
        Some(td) => {
            if td.len() != theta.len() {
                return Err(Error::Shape("theta_dot length mismatch".into()));
            }
            td.samples.clone()
        }
        None => diff_series(&theta.samples, theta.dt),
    };
    let samples = theta
        .samples
        .iter()
        .zip(rate.iter())
        .map(|(t, r)| t + beta * r)
        .collect();
    TimeSeries::new(theta.dt, samples)
}

/// Residuals of the convolution identities that absorb the initial
/// conditions into the field equations, reported per identity.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityResiduals {
    /// `xi * u_dd = u - v0 t - u0`
    pub xi_u: f64,
    /// `l * theta_dot = theta - theta0`
    pub l_theta: f64,
    /// `l * eta_dot = eta - eta0`
    pub l_eta: f64,
    /// `zeta * (theta + beta theta_dot) = theta - theta0 exp(-t/beta)`
    pub zeta_theta: f64,
    /// `chi * (theta + beta' theta_dot) = theta - theta0 exp(-t/beta')`
    pub chi_theta: f64,
}

impl IdentityResiduals {
    pub fn max(&self) -> f64 {
        self.xi_u
            .max(self.l_theta)
            .max(self.l_eta)
            .max(self.zeta_theta)
            .max(self.chi_theta)
    }
}

/// Evaluates all identities discretely and reports the max residual of each.
#[allow(clippy::too_many_arguments)]
pub fn check_identities(
    u: &TimeSeries,
    theta: &TimeSeries,
    eta: &TimeSeries,
    u0: f64,
    v0: f64,
    theta0: f64,
    eta0: f64,
    beta: f64,
    beta_prime: f64,
) -> Result<IdentityResiduals> {
    let n = u.len();
    if theta.len() != n || eta.len() != n {
        return Err(Error::Shape("series length mismatch".into()));
    }
    let dt = u.dt;

    let max_abs = |v: &[f64]| v.iter().fold(0.0f64, |a, x| a.max(x.abs()));

    let xi = kernel_series(Kernel::Xi, dt, n)?;
    let u_dd = diff2_series(&u.samples, dt);
    let conv = convolve_samples(&xi.samples, &u_dd, dt);
    let xi_u = max_abs(
        &(0..n)
            .map(|k| conv[k] - (u.samples[k] - v0 * u.time(k) - u0))
            .collect::<Vec<_>>(),
    );

    let theta_dot = diff_series(&theta.samples, dt);
    let l_theta_conv = cumtrapz(&theta_dot, dt);
    let l_theta = max_abs(
        &(0..n)
            .map(|k| l_theta_conv[k] - (theta.samples[k] - theta0))
            .collect::<Vec<_>>(),
    );

    let eta_dot = diff_series(&eta.samples, dt);
    let l_eta_conv = cumtrapz(&eta_dot, dt);
    let l_eta = max_abs(
        &(0..n)
            .map(|k| l_eta_conv[k] - (eta.samples[k] - eta0))
            .collect::<Vec<_>>(),
    );

    let a_theta: Vec<f64> = theta
        .samples
        .iter()
        .zip(theta_dot.iter())
        .map(|(t, r)| t + beta * r)
        .collect();
    let zeta = kernel_series(Kernel::Zeta { beta }, dt, n)?;
    let zc = convolve_samples(&zeta.samples, &a_theta, dt);
    let zeta_theta = max_abs(
        &(0..n)
            .map(|k| zc[k] - (theta.samples[k] - theta0 * (-u.time(k) / beta).exp()))
            .collect::<Vec<_>>(),
    );

    let ap_theta: Vec<f64> = theta
        .samples
        .iter()
        .zip(theta_dot.iter())
        .map(|(t, r)| t + beta_prime * r)
        .collect();
    let chi = kernel_series(Kernel::Chi { beta_prime }, dt, n)?;
    let cc = convolve_samples(&chi.samples, &ap_theta, dt);
    let chi_theta = max_abs(
        &(0..n)
            .map(|k| cc[k] - (theta.samples[k] - theta0 * (-u.time(k) / beta_prime).exp()))
            .collect::<Vec<_>>(),
    );

    Ok(IdentityResiduals {
        xi_u,
        l_theta,
        l_eta,
        zeta_theta,
        chi_theta,
    })
}
