//! The linear constitutive law at a material point, full and reduced.
//!
//! The full ("unhatted") law carries the rate combinations `theta + beta
//! theta_dot` in the stress and quadrupole and `theta + beta' theta_dot` in
//! the entropy; the reduced ("hatted") law is the same with every
//! theta-dependent term removed. Internally the sign conventions of the
//! theory (`-sigma`, `-Q`, `-rho eta`, `-q/T0` on the left) are preserved,
//! but the returned states carry the physical `sigma`, `Q`, `rho eta`, `q`
//! to avoid double-negation bugs downstream.
//!
//! The temperature rate is an explicit input; the solver owns time
//! differentiation, which keeps this module stateless.

use crate::error::{Error, Result};
use crate::tensors::MaterialModel;
use ndarray::{Array1, Array2, Array3, Order};
use serde::{Deserialize, Serialize};

/// Kinematic variables at a point: strain, second displacement gradient,
/// temperature gradient, electric field, second potential gradient, and the
/// temperature increment with its rate.
#[derive(Debug, Clone)]
pub struct KinematicState {
    pub e: Array2<f64>,
    pub kappa: Array3<f64>,
    pub beta_g: [f64; 3],
    pub e_field: [f64; 3],
    pub v: Array2<f64>,
    pub theta: f64,
    pub theta_dot: f64,
}

impl KinematicState {
    pub fn zero() -> Self {
        KinematicState {
            e: Array2::zeros((3, 3)),
            kappa: Array3::zeros((3, 3, 3)),
            beta_g: [0.0; 3],
            e_field: [0.0; 3],
            v: Array2::zeros((3, 3)),
            theta: 0.0,
            theta_dot: 0.0,
        }
    }

    /// Checks `e_ij = e_ji`, `kappa_ijk = kappa_jik`, `V_ij = V_ji`.
    pub fn check_symmetries(&self, tol: f64) -> Result<()> {
        for i in 0..3 {
            for j in 0..3 {
                if (self.e[(i, j)] - self.e[(j, i)]).abs() > tol {
                    return Err(Error::Shape("strain e must be symmetric".into()));
                }
                if (self.v[(i, j)] - self.v[(j, i)]).abs() > tol {
                    return Err(Error::Shape("V must be symmetric".into()));
                }
                for k in 0..3 {
                    if (self.kappa[(i, j, k)] - self.kappa[(j, i, k)]).abs() > tol {
                        return Err(Error::Shape(
                            "kappa must be symmetric in its first two indices".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Flux-like measures at a point (physical signs).
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicState {
    pub tau: Array2<f64>,
    pub mu: Array3<f64>,
    pub sigma: [f64; 3],
    pub q_pole: Array2<f64>,
    pub rho_eta: f64,
    pub q: [f64; 3],
}

/// The reduced law's measures; same shape as [`DynamicState`].
pub type HatState = DynamicState;

fn mat9(a: &ndarray::Array4<f64>) -> Array2<f64> {
    a.to_shape(((9, 9), Order::RowMajor)).unwrap().to_owned()
}

fn mat27x3(a: &ndarray::Array4<f64>) -> Array2<f64> {
    a.to_shape(((27, 3), Order::RowMajor)).unwrap().to_owned()
}

fn mat27(a: &ndarray::Array6<f64>) -> Array2<f64> {
    a.to_shape(((27, 27), Order::RowMajor)).unwrap().to_owned()
}

fn vec9(a: &Array2<f64>) -> Array1<f64> {
    a.to_shape((9, Order::RowMajor)).unwrap().to_owned()
}

fn vec27(a: &Array3<f64>) -> Array1<f64> {
    a.to_shape((27, Order::RowMajor)).unwrap().to_owned()
}

fn evaluate_with_theta_terms(
    model: &MaterialModel,
    kin: &KinematicState,
    with_theta: bool,
) -> DynamicState {
    let t = &model.tensors;
    let a_theta = if with_theta {
        kin.theta + model.beta * kin.theta_dot
    } else {
        0.0
    };
    let a_theta_prime = if with_theta {
        kin.theta + model.beta_prime() * kin.theta_dot
    } else {
        0.0
    };

    let e9 = vec9(&kin.e);
    let v9 = vec9(&kin.v);
    let k27 = vec27(&kin.kappa);
    let efield = Array1::from(kin.e_field.to_vec());

    let a11 = mat9(&t.a11);
    let a17 = mat9(&t.a17);
    let a77 = mat9(&t.a77);
    let a22 = mat27(&t.a22);
    let a23 = mat27x3(&t.a23);

    // tau_ij = a11_ijkl e_kl + a17_ijkl V_kl + a14_ij (theta + beta theta_dot)
    let mut tau9 = a11.dot(&e9) + a17.dot(&v9);
    for (idx, v) in tau9.iter_mut().enumerate() {
        *v += t.a14[(idx / 3, idx % 3)] * a_theta;
    }
    let tau = tau9.to_shape(((3, 3), Order::RowMajor)).unwrap().to_owned();

    // mu_ijk = a22_ijklhm kappa_lhm + a23_ijkl E_l
    let mu27 = a22.dot(&k27) + a23.dot(&efield);
    let mu = mu27
        .to_shape(((3, 3, 3), Order::RowMajor))
        .unwrap()
        .to_owned();

    // -sigma_i = a23_jkli kappa_jkl + a33_ij E_j
    let minus_sigma = a23.t().dot(&k27);
    let mut sigma = [0.0; 3];
    for i in 0..3 {
        let mut s = minus_sigma[i];
        for j in 0..3 {
            s += t.a33[(i, j)] * kin.e_field[j];
        }
        sigma[i] = -s;
    }

    // -Q_ij = a17_klij e_kl + a77_ijkl V_kl + a47_ij (theta + beta theta_dot)
    let mut minus_q9 = a17.t().dot(&e9) + a77.dot(&v9);
    for (idx, v) in minus_q9.iter_mut().enumerate() {
        *v += t.a47[(idx / 3, idx % 3)] * a_theta;
    }
    let q_pole = minus_q9
        .mapv(|v| -v)
        .to_shape(((3, 3), Order::RowMajor))
        .unwrap()
        .to_owned();

    // -rho eta = a14_ij e_ij + a47_ij V_ij + c (theta + beta' theta_dot)
    let mut minus_rho_eta = model.c * a_theta_prime;
    for i in 0..3 {
        for j in 0..3 {
            minus_rho_eta += t.a14[(i, j)] * kin.e[(i, j)] + t.a47[(i, j)] * kin.v[(i, j)];
        }
    }

    // -q_i / T0 = k_ij beta_j
    let mut q = [0.0; 3];
    for i in 0..3 {
        let mut s = 0.0;
        for j in 0..3 {
            s += t.k[(i, j)] * kin.beta_g[j];
        }
        q[i] = -model.t0 * s;
    }

    DynamicState {
        tau,
        mu,
        sigma,
        q_pole,
        rho_eta: -minus_rho_eta,
        q,
    }
}

/// Full constitutive law.
pub fn evaluate(model: &MaterialModel, kin: &KinematicState) -> DynamicState {
    evaluate_with_theta_terms(model, kin, true)
}

/// Reduced law: identical with every theta-dependent term removed.
pub fn evaluate_hat(model: &MaterialModel, kin: &KinematicState) -> HatState {
    evaluate_with_theta_terms(model, kin, false)
}

/// Scalar coefficients of the 1D reduction (the `(1,1,...)` components of
/// each tensor), plus the scalar material data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Material1D {
    pub rho: f64,
    #[serde(rename = "T0")]
    pub t0: f64,
    pub c: f64,
    pub beta: f64,
    #[serde(default)]
    pub gamma: f64,
    #[serde(default)]
    pub a11: f64,
    #[serde(default)]
    pub a17: f64,
    #[serde(default)]
    pub a14: f64,
    #[serde(default)]
    pub a22: f64,
    #[serde(default)]
    pub a23: f64,
    #[serde(default)]
    pub a33: f64,
    #[serde(default)]
    pub a77: f64,
    #[serde(default)]
    pub a47: f64,
    #[serde(default)]
    pub k: f64,
}

impl Material1D {
    pub fn beta_prime(&self) -> f64 {
        self.beta + self.gamma / (self.c * self.beta)
    }

    /// Sign constraints shared with the 3D model: positivity of rho and T0,
    /// nonzero c and beta, `gamma/beta >= 0`, `k >= 0`.
    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0) {
            return Err(Error::Material("rho must be positive".into()));
        }
        if !(self.t0 > 0.0) {
            return Err(Error::Material("T0 must be positive".into()));
        }
        if self.c == 0.0 {
            return Err(Error::Material("c must be nonzero".into()));
        }
        if self.beta == 0.0 {
            return Err(Error::Material("beta must be nonzero".into()));
        }
        if self.gamma / self.beta < 0.0 {
            return Err(Error::Material("gamma/beta must be nonnegative".into()));
        }
        if self.k < 0.0 {
            return Err(Error::Material("k must be nonnegative".into()));
        }
        Ok(())
    }
}

/// Scalar flux measures of the 1D reduction (physical signs).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dynamic1D {
    pub tau: f64,
    pub mu: f64,
    pub sigma: f64,
    pub q_pole: f64,
    pub rho_eta: f64,
    pub q: f64,
}

/// Scalar form of the constitutive law.
#[allow(clippy::too_many_arguments)]
pub fn evaluate_1d(
    m: &Material1D,
    e: f64,
    kappa: f64,
    beta_g: f64,
    e_field: f64,
    v: f64,
    theta: f64,
    theta_dot: f64,
) -> Dynamic1D {
    let a_theta = theta + m.beta * theta_dot;
    let a_theta_prime = theta + m.beta_prime() * theta_dot;
    Dynamic1D {
        tau: m.a11 * e + m.a17 * v + m.a14 * a_theta,
        mu: m.a22 * kappa + m.a23 * e_field,
        sigma: -(m.a23 * kappa + m.a33 * e_field),
        q_pole: -(m.a17 * e + m.a77 * v + m.a47 * a_theta),
        rho_eta: -(m.a14 * e + m.a47 * v + m.c * a_theta_prime),
        q: -m.t0 * m.k * beta_g,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensors::{symmetrize, MaterialTensors};
    use approx::assert_abs_diff_eq;
    use ndarray::{Array2, Array3};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_symmetric_tensors(seed: u64) -> MaterialTensors {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = MaterialTensors::zeros();
        t.a11.mapv_inplace(|_| rng.gen_range(-1.0..1.0));
        t.a17.mapv_inplace(|_| rng.gen_range(-1.0..1.0));
        t.a14.mapv_inplace(|_| rng.gen_range(-1.0..1.0));
        t.a22.mapv_inplace(|_| rng.gen_range(-1.0..1.0));
        t.a23.mapv_inplace(|_| rng.gen_range(-1.0..1.0));
        t.a33.mapv_inplace(|_| rng.gen_range(-1.0..1.0));
        t.a77.mapv_inplace(|_| rng.gen_range(-1.0..1.0));
        t.a47.mapv_inplace(|_| rng.gen_range(-1.0..1.0));
        t.k.mapv_inplace(|_| rng.gen_range(-1.0..1.0));
        symmetrize(&t).unwrap()
    }

    fn random_model(seed: u64) -> MaterialModel {
        MaterialModel::new(1.2, 0.9, -1.1, 0.7, 0.3, random_symmetric_tensors(seed)).unwrap()
    }

    fn random_kin(rng: &mut impl Rng) -> KinematicState {
        let mut kin = KinematicState::zero();
        for i in 0..3 {
            for j in i..3 {
                let v = rng.gen_range(-1.0..1.0);
                kin.e[(i, j)] = v;
                kin.e[(j, i)] = v;
                let w = rng.gen_range(-1.0..1.0);
                kin.v[(i, j)] = w;
                kin.v[(j, i)] = w;
            }
        }
        for i in 0..3 {
            for j in i..3 {
                for k in 0..3 {
                    let v = rng.gen_range(-1.0..1.0);
                    kin.kappa[(i, j, k)] = v;
                    kin.kappa[(j, i, k)] = v;
                }
            }
        }
        kin.beta_g = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        kin.e_field = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        kin.theta = rng.gen_range(-1.0..1.0);
        kin.theta_dot = rng.gen_range(-1.0..1.0);
        kin
    }

    /// Literal index-loop contraction of the six constitutive lines; the
    /// independent oracle for `evaluate`.
    fn evaluate_oracle(model: &MaterialModel, kin: &KinematicState) -> DynamicState {
        let t = &model.tensors;
        let at = kin.theta + model.beta * kin.theta_dot;
        let atp = kin.theta + model.beta_prime() * kin.theta_dot;
        let mut tau = Array2::zeros((3, 3));
        let mut mu = Array3::zeros((3, 3, 3));
        let mut sigma = [0.0; 3];
        let mut q_pole = Array2::zeros((3, 3));
        let mut minus_rho_eta = model.c * atp;
        let mut q = [0.0; 3];
        for i in 0..3 {
            for j in 0..3 {
                let mut s = t.a14[(i, j)] * at;
                let mut mq = t.a47[(i, j)] * at;
                for k in 0..3 {
                    for l in 0..3 {
                        s += t.a11[(i, j, k, l)] * kin.e[(k, l)] + t.a17[(i, j, k, l)] * kin.v[(k, l)];
                        mq += t.a17[(k, l, i, j)] * kin.e[(k, l)] + t.a77[(i, j, k, l)] * kin.v[(k, l)];
                    }
                }
                tau[(i, j)] = s;
                q_pole[(i, j)] = -mq;
                minus_rho_eta += t.a14[(i, j)] * kin.e[(i, j)] + t.a47[(i, j)] * kin.v[(i, j)];
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let mut s = 0.0;
                    for l in 0..3 {
                        s += t.a23[(i, j, k, l)] * kin.e_field[l];
                        for h in 0..3 {
                            for m in 0..3 {
                                s += t.a22[(i, j, k, l, h, m)] * kin.kappa[(l, h, m)];
                            }
                        }
                    }
                    mu[(i, j, k)] = s;
                }
            }
        }
        for i in 0..3 {
            let mut ms = 0.0;
            for j in 0..3 {
                ms += t.a33[(i, j)] * kin.e_field[j];
                for k in 0..3 {
                    for l in 0..3 {
                        ms += t.a23[(j, k, l, i)] * kin.kappa[(j, k, l)];
                    }
                }
            }
            sigma[i] = -ms;
            let mut qs = 0.0;
            for j in 0..3 {
                qs += t.k[(i, j)] * kin.beta_g[j];
            }
            q[i] = -model.t0 * qs;
        }
        DynamicState {
            tau,
            mu,
            sigma,
            q_pole,
            rho_eta: -minus_rho_eta,
            q,
        }
    }

    fn max_diff(a: &DynamicState, b: &DynamicState) -> f64 {
        let mut m = (a.rho_eta - b.rho_eta).abs();
        for i in 0..3 {
            m = m.max((a.sigma[i] - b.sigma[i]).abs());
            m = m.max((a.q[i] - b.q[i]).abs());
            for j in 0..3 {
                m = m.max((a.tau[(i, j)] - b.tau[(i, j)]).abs());
                m = m.max((a.q_pole[(i, j)] - b.q_pole[(i, j)]).abs());
                for k in 0..3 {
                    m = m.max((a.mu[(i, j, k)] - b.mu[(i, j, k)]).abs());
                }
            }
        }
        m
    }

    #[test]
    fn zero_kinematics_gives_zero_state() {
        let model = random_model(10);
        let out = evaluate(&model, &KinematicState::zero());
        assert_eq!(max_diff(&out, &evaluate_hat(&model, &KinematicState::zero())), 0.0);
        assert_eq!(out.rho_eta, 0.0);
        assert!(out.tau.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn pure_temperature_response() {
        let mut t = MaterialTensors::zeros();
        for i in 0..3 {
            t.a14[(i, i)] = 1.0;
        }
        let c = -0.8;
        let model = MaterialModel::new(1.0, 1.0, c, 0.5, 0.0, t).unwrap();
        let mut kin = KinematicState::zero();
        kin.theta = 1.0;
        let out = evaluate(&model, &kin);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(out.tau[(i, j)], want);
            }
        }
        assert_abs_diff_eq!(out.rho_eta, -c);
    }

    #[test]
    fn evaluate_matches_contraction_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for seed in 0..20 {
            let model = random_model(100 + seed);
            let kin = random_kin(&mut rng);
            let got = evaluate(&model, &kin);
            let want = evaluate_oracle(&model, &kin);
            assert!(max_diff(&got, &want) <= 1e-13, "mismatch {}", max_diff(&got, &want));
        }
    }

    #[test]
    fn hat_law_is_theta_independent() {
        let model = random_model(12);
        let mut kin = KinematicState::zero();
        kin.theta = 5.0;
        kin.theta_dot = 3.0;
        let out = evaluate_hat(&model, &kin);
        assert_eq!(max_diff(&out, &evaluate_hat(&model, &KinematicState::zero())), 0.0);
    }

    #[test]
    fn hat_plus_theta_terms_reconstructs_full_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let model = random_model(14);
        let t = &model.tensors;
        for _ in 0..10 {
            let kin = random_kin(&mut rng);
            let full = evaluate(&model, &kin);
            let hat = evaluate_hat(&model, &kin);
            let at = kin.theta + model.beta * kin.theta_dot;
            let atp = kin.theta + model.beta_prime() * kin.theta_dot;
            for i in 0..3 {
                for j in 0..3 {
                    assert_abs_diff_eq!(
                        full.tau[(i, j)] - hat.tau[(i, j)],
                        t.a14[(i, j)] * at,
                        epsilon = 1e-13
                    );
                    // -Q picked up a47 * A theta, so Q itself loses it
                    assert_abs_diff_eq!(
                        full.q_pole[(i, j)] - hat.q_pole[(i, j)],
                        -t.a47[(i, j)] * at,
                        epsilon = 1e-13
                    );
                    for k in 0..3 {
                        assert_eq!(full.mu[(i, j, k)], hat.mu[(i, j, k)]);
                    }
                }
                assert_eq!(full.sigma[i], hat.sigma[i]);
                assert_eq!(full.q[i], hat.q[i]);
            }
            assert_abs_diff_eq!(full.rho_eta - hat.rho_eta, -model.c * atp, epsilon = 1e-13);
        }
    }

    #[test]
    fn hat_equals_full_when_theta_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let model = random_model(16);
        let mut kin = random_kin(&mut rng);
        kin.theta = 0.0;
        kin.theta_dot = 0.0;
        assert_eq!(max_diff(&evaluate(&model, &kin), &evaluate_hat(&model, &kin)), 0.0);
    }

    #[test]
    fn evaluate_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let model = random_model(18);
        let k1 = random_kin(&mut rng);
        let k2 = random_kin(&mut rng);
        let (a, b) = (1.7, -0.6);
        let mut combo = KinematicState::zero();
        combo.e = &k1.e * a + &k2.e * b;
        combo.kappa = &k1.kappa * a + &k2.kappa * b;
        combo.v = &k1.v * a + &k2.v * b;
        for i in 0..3 {
            combo.beta_g[i] = a * k1.beta_g[i] + b * k2.beta_g[i];
            combo.e_field[i] = a * k1.e_field[i] + b * k2.e_field[i];
        }
        combo.theta = a * k1.theta + b * k2.theta;
        combo.theta_dot = a * k1.theta_dot + b * k2.theta_dot;

        let lhs = evaluate(&model, &combo);
        let d1 = evaluate(&model, &k1);
        let d2 = evaluate(&model, &k2);
        let mut want = DynamicState {
            tau: &d1.tau * a + &d2.tau * b,
            mu: &d1.mu * a + &d2.mu * b,
            sigma: [0.0; 3],
            q_pole: &d1.q_pole * a + &d2.q_pole * b,
            rho_eta: a * d1.rho_eta + b * d2.rho_eta,
            q: [0.0; 3],
        };
        for i in 0..3 {
            want.sigma[i] = a * d1.sigma[i] + b * d2.sigma[i];
            want.q[i] = a * d1.q[i] + b * d2.q[i];
        }
        assert!(max_diff(&lhs, &want) <= 1e-12);
    }

    #[test]
    fn output_symmetries_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let model = random_model(20);
        let kin = random_kin(&mut rng);
        let out = evaluate(&model, &kin);
        for i in 0..3 {
            for j in 0..3 {
                assert_abs_diff_eq!(out.tau[(i, j)], out.tau[(j, i)], epsilon = 1e-13);
                assert_abs_diff_eq!(out.q_pole[(i, j)], out.q_pole[(j, i)], epsilon = 1e-13);
                for k in 0..3 {
                    assert_abs_diff_eq!(out.mu[(i, j, k)], out.mu[(j, i, k)], epsilon = 1e-13);
                }
            }
        }
    }

    /// The coefficient of `e` in `-Q` equals the coefficient of `V` in `tau`
    /// (the transposed a17 pair), probed by differencing the linear map.
    #[test]
    fn cross_coupling_reciprocity() {
        let model = random_model(21);
        for (i, j) in [(0, 0), (0, 1), (1, 2), (2, 2)] {
            for (k, l) in [(0, 0), (1, 1), (0, 2), (1, 2)] {
                // symmetric unit perturbation of e_kl
                let mut kin_e = KinematicState::zero();
                kin_e.e[(k, l)] += 0.5;
                kin_e.e[(l, k)] += 0.5;
                let dq = evaluate(&model, &kin_e);
                let d_minus_q = -dq.q_pole[(i, j)];

                // symmetric unit perturbation of V_ij
                let mut kin_v = KinematicState::zero();
                kin_v.v[(i, j)] += 0.5;
                kin_v.v[(j, i)] += 0.5;
                let dt = evaluate(&model, &kin_v);
                assert_abs_diff_eq!(d_minus_q, dt.tau[(k, l)], epsilon = 1e-12);
            }
        }
    }

    fn material_1d() -> Material1D {
        Material1D {
            rho: 1.3,
            t0: 0.8,
            c: -1.2,
            beta: 0.6,
            gamma: 0.25,
            a11: 0.9,
            a17: 0.31,
            a14: -0.42,
            a22: 0.17,
            a23: 0.23,
            a33: 1.1,
            a77: 0.29,
            a47: -0.12,
            k: 0.75,
        }
    }

    #[test]
    fn evaluate_1d_zero_and_single_term() {
        let m = material_1d();
        let out = evaluate_1d(&m, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        assert_eq!(out, Dynamic1D::default());

        let mut m2 = Material1D {
            a11: 2.0,
            ..material_1d()
        };
        m2.a17 = 0.0;
        m2.a14 = 0.0;
        m2.a23 = 0.0;
        m2.a47 = 0.0;
        let out = evaluate_1d(&m2, 3.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        assert_abs_diff_eq!(out.tau, 6.0);
        assert_abs_diff_eq!(out.mu, 0.0);
        assert_abs_diff_eq!(out.sigma, 0.0);
        assert_abs_diff_eq!(out.q_pole, -0.0);
        assert_abs_diff_eq!(out.rho_eta, 0.0);
        assert_abs_diff_eq!(out.q, 0.0);
    }

    /// Embedding oracle: the 1D law equals the 3D law with every tensor and
    /// kinematic variable embedded along the first axis.
    #[test]
    fn evaluate_1d_matches_axis1_embedding() {
        let m = material_1d();
        let mut t = MaterialTensors::zeros();
        t.a11[(0, 0, 0, 0)] = m.a11;
        t.a17[(0, 0, 0, 0)] = m.a17;
        t.a14[(0, 0)] = m.a14;
        t.a22[(0, 0, 0, 0, 0, 0)] = m.a22;
        t.a23[(0, 0, 0, 0)] = m.a23;
        t.a33[(0, 0)] = m.a33;
        t.a77[(0, 0, 0, 0)] = m.a77;
        t.a47[(0, 0)] = m.a47;
        t.k[(0, 0)] = m.k;
        let model = MaterialModel::new(m.rho, m.t0, m.c, m.beta, m.gamma, t).unwrap();

        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..10 {
            let (e, kappa, bg, ef, v, th, thd) = (
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            let mut kin = KinematicState::zero();
            kin.e[(0, 0)] = e;
            kin.kappa[(0, 0, 0)] = kappa;
            kin.beta_g[0] = bg;
            kin.e_field[0] = ef;
            kin.v[(0, 0)] = v;
            kin.theta = th;
            kin.theta_dot = thd;
            let d3 = evaluate(&model, &kin);
            let d1 = evaluate_1d(&m, e, kappa, bg, ef, v, th, thd);
            assert_abs_diff_eq!(d1.tau, d3.tau[(0, 0)], epsilon = 1e-13);
            assert_abs_diff_eq!(d1.mu, d3.mu[(0, 0, 0)], epsilon = 1e-13);
            assert_abs_diff_eq!(d1.sigma, d3.sigma[0], epsilon = 1e-13);
            assert_abs_diff_eq!(d1.q_pole, d3.q_pole[(0, 0)], epsilon = 1e-13);
            assert_abs_diff_eq!(d1.rho_eta, d3.rho_eta, epsilon = 1e-13);
            assert_abs_diff_eq!(d1.q, d3.q[0], epsilon = 1e-13);
        }
    }

    #[test]
    fn material_1d_validation() {
        let m = material_1d();
        assert!(m.validate().is_ok());
        assert!(Material1D { beta: 0.0, ..m }.validate().is_err());
        assert!(Material1D { rho: -1.0, ..m }.validate().is_err());
        assert!(Material1D { gamma: -0.1, ..m }.validate().is_err());
        assert!(Material1D { k: -0.5, ..m }.validate().is_err());
        // beta' = beta + gamma/(c beta)
        assert_abs_diff_eq!(m.beta_prime(), 0.6 + 0.25 / (-1.2 * 0.6));
    }
}
