//! Numerical certification of the structural theorems: the bilinear-form
//! identities, the two-time reciprocity relation, the uniqueness energy
//! identity, both convolution reciprocity theorems, and stationarity of the
//! variational functional.
//!
//! All space integrals are trapezoid sums on the grid; boundary "integrals"
//! are the two endpoint contributions with outward normal -1 on the left
//! and +1 on the right. Nested kernel convolutions are repeated pairwise
//! trapezoid convolutions.

use crate::constitutive::Material1D;
use crate::convolution::{convolve_samples, cumtrapz, diff_series};
use crate::error::{Error, Result};
use crate::kinematics::{deriv_stencil, end_stencil, trapz, Grid1D};
use crate::scenario::{PairCondition, Scenario};
use crate::solver1d::{uniqueness_g_series, SolutionHistory};
use ndarray::Array2;
use serde::Serialize;

/// One solved problem: the history plus the data that produced it.
pub struct Process {
    pub scenario: Scenario,
    pub history: SolutionHistory,
}

impl Process {
    pub fn solve(scenario: Scenario) -> Result<Self> {
        let history = crate::solver1d::solve(&scenario)?;
        Ok(Process { scenario, history })
    }
}

/// Two processes on matching discretizations of the same body.
pub struct ProcessPair<'a> {
    pub a: &'a Process,
    pub b: &'a Process,
}

impl<'a> ProcessPair<'a> {
    pub fn new(a: &'a Process, b: &'a Process) -> Result<Self> {
        if a.history.grid != b.history.grid
            || (a.history.dt - b.history.dt).abs() > 1e-12 * a.history.dt
            || a.history.n_times() != b.history.n_times()
        {
            return Err(Error::Shape("pair discretizations do not match".into()));
        }
        if a.scenario.material != b.scenario.material {
            return Err(Error::Shape("pair materials differ".into()));
        }
        Ok(ProcessPair { a, b })
    }

    fn material(&self) -> Material1D {
        self.a.history.material
    }
}

/// Verdict of one check, serializable for the CLI report.
#[derive(Debug, Clone, Serialize)]
pub struct TheoremReport {
    pub theorem: String,
    pub residual: f64,
    pub scale: f64,
    pub normalized: f64,
    pub tol: f64,
    pub pass: bool,
}

impl TheoremReport {
    pub fn new(theorem: &str, residual: f64, scale: f64, tol: f64) -> Self {
        let normalized = residual / scale.max(f64::MIN_POSITIVE);
        TheoremReport {
            theorem: theorem.to_string(),
            residual,
            scale,
            normalized,
            pass: normalized <= tol,
            tol,
        }
    }
}

fn field_at<'h>(h: &'h SolutionHistory, name: &str) -> &'h Array2<f64> {
    match name {
        "tau" => &h.tau,
        "mu" => &h.mu,
        "sigma" => &h.sigma,
        "q_pole" => &h.q_pole,
        "e" => &h.e,
        "kappa" => &h.kappa,
        "e_field" => &h.e_field,
        "v_field" => &h.v_field,
        _ => unreachable!(),
    }
}

fn hat_measures(m: &Material1D, h: &SolutionHistory, node: usize, k: usize) -> (f64, f64, f64, f64, f64) {
    let e = h.e[(node, k)];
    let ka = h.kappa[(node, k)];
    let ef = h.e_field[(node, k)];
    let vf = h.v_field[(node, k)];
    let tau_hat = m.a11 * e + m.a17 * vf;
    let mu_hat = m.a22 * ka + m.a23 * ef;
    let sigma_hat = -(m.a23 * ka + m.a33 * ef);
    let q_hat = -(m.a17 * e + m.a77 * vf);
    let rho_eta_hat = -(m.a14 * e + m.a47 * vf);
    (tau_hat, mu_hat, sigma_hat, q_hat, rho_eta_hat)
}

/// The bilinear density `S_ab(r, s)` integrated over the body:
/// `tau^a(r) e^b(s) + mu^a(r) kappa^b(s) - sigma^a(r) E^b(s) - Q^a(r) V^b(s)`,
/// with the hatted measures when `hatted` is set.
pub fn bilinear_s(pa: &Process, pb: &Process, r: f64, s: f64, hatted: bool) -> Result<f64> {
    let kr = pa.history.step_of(r)?;
    let ks = pb.history.step_of(s)?;
    let ha = &pa.history;
    let hb = &pb.history;
    let m = ha.material;
    let n = ha.n_nodes();
    let vals: Vec<f64> = (0..n)
        .map(|i| {
            let (tau_a, mu_a, sigma_a, q_a) = if hatted {
                let (t, mu, sg, q, _) = hat_measures(&m, ha, i, kr);
                (t, mu, sg, q)
            } else {
                (
                    field_at(ha, "tau")[(i, kr)],
                    field_at(ha, "mu")[(i, kr)],
                    field_at(ha, "sigma")[(i, kr)],
                    field_at(ha, "q_pole")[(i, kr)],
                )
            };
            tau_a * hb.e[(i, ks)] + mu_a * hb.kappa[(i, ks)]
                - sigma_a * hb.e_field[(i, ks)]
                - q_a * hb.v_field[(i, ks)]
        })
        .collect();
    Ok(trapz(&ha.grid, &vals))
}

/// `S_ab(r,s) = S_hat_ab(r,s) - A theta^a(r) rho_eta_hat^b(s)`, both sides
/// evaluated pointwise in space and integrated.
pub fn check_s_relation(pair: &ProcessPair, r: f64, s: f64, tol: f64) -> Result<TheoremReport> {
    let m = pair.material();
    let kr = pair.a.history.step_of(r)?;
    let ks = pair.b.history.step_of(s)?;
    let lhs = bilinear_s(pair.a, pair.b, r, s, false)?;
    let hat = bilinear_s(pair.a, pair.b, r, s, true)?;
    let n = pair.a.history.n_nodes();
    let vals: Vec<f64> = (0..n)
        .map(|i| {
            let a_theta = pair.a.history.theta[(i, kr)] + m.beta * pair.a.history.psi[(i, kr)];
            let (_, _, _, _, reh) = hat_measures(&m, &pair.b.history, i, ks);
            a_theta * reh
        })
        .collect();
    let corr = trapz(&pair.a.history.grid, &vals);
    let rhs = hat - corr;
    let scale = lhs.abs().max(hat.abs()).max(corr.abs());
    Ok(TheoremReport::new("s-relation", (lhs - rhs).abs(), scale, tol))
}

/// Swap symmetry of the hatted form: `S_hat_ab(r,s) = S_hat_ba(s,r)` (exact
/// algebra, only round-off).
pub fn check_s_hat_swap(pair: &ProcessPair, r: f64, s: f64, tol: f64) -> Result<TheoremReport> {
    let lhs = bilinear_s(pair.a, pair.b, r, s, true)?;
    let rhs = bilinear_s(pair.b, pair.a, s, r, true)?;
    let scale = lhs.abs().max(rhs.abs());
    Ok(TheoremReport::new("s-hat-swap", (lhs - rhs).abs(), scale, tol))
}

/// Body-integrated two-time convolution `int_0^t S_ab(tau, t - tau) dtau`
/// as a time series, for the plain or hatted measures.
fn s_double_conv(pa: &Process, pb: &Process, hatted: bool) -> Vec<f64> {
    let ha = &pa.history;
    let hb = &pb.history;
    let m = ha.material;
    let n = ha.n_nodes();
    let nt = ha.n_times();
    let dt = ha.dt;
    let mut total = vec![0.0; nt];
    let mut nodal = vec![vec![0.0; nt]; n];
    for (i, node_series) in nodal.iter_mut().enumerate() {
        let mut fa = [const { Vec::new() }; 4];
        for k in 0..nt {
            let (t, mu, sg, q) = if hatted {
                let (t, mu, sg, q, _) = hat_measures(&m, ha, i, k);
                (t, mu, sg, q)
            } else {
                (ha.tau[(i, k)], ha.mu[(i, k)], ha.sigma[(i, k)], ha.q_pole[(i, k)])
            };
            fa[0].push(t);
            fa[1].push(mu);
            fa[2].push(sg);
            fa[3].push(q);
        }
        let gb: [Vec<f64>; 4] = [
            (0..nt).map(|k| hb.e[(i, k)]).collect(),
            (0..nt).map(|k| hb.kappa[(i, k)]).collect(),
            (0..nt).map(|k| hb.e_field[(i, k)]).collect(),
            (0..nt).map(|k| hb.v_field[(i, k)]).collect(),
        ];
        let signs = [1.0, 1.0, -1.0, -1.0];
        for ((f, g), sign) in fa.iter().zip(gb.iter()).zip(signs) {
            let c = convolve_samples(f, g, dt);
            for (k, v) in c.iter().enumerate() {
                node_series[k] += sign * v;
            }
        }
    }
    for k in 0..nt {
        let vals: Vec<f64> = (0..n).map(|i| nodal[i][k]).collect();
        total[k] = trapz(&ha.grid, &vals);
    }
    total
}

/// `T_ab(t) = xi * int_0^t S_ab(tau, t-tau) dtau` (body integrated).
pub fn t_series(pair: &ProcessPair, hatted: bool) -> Vec<f64> {
    let dt = pair.a.history.dt;
    let nt = pair.a.history.n_times();
    let inner = s_double_conv(pair.a, pair.b, hatted);
    let xi: Vec<f64> = (0..nt).map(|k| k as f64 * dt).collect();
    convolve_samples(&xi, &inner, dt)
}

fn swapped<'a>(pair: &ProcessPair<'a>) -> ProcessPair<'a> {
    ProcessPair {
        a: pair.b,
        b: pair.a,
    }
}

/// `T_hat_ab(t) = T_hat_ba(t)` at the sampled times.
pub fn check_t_hat_symmetry(pair: &ProcessPair, ts: &[f64], tol: f64) -> Result<TheoremReport> {
    let ab = t_series(pair, true);
    let ba = t_series(&swapped(pair), true);
    let mut resid = 0.0f64;
    let mut scale = 0.0f64;
    for &t in ts {
        let k = pair.a.history.step_of(t)?;
        resid = resid.max((ab[k] - ba[k]).abs());
        scale = scale.max(ab[k].abs()).max(ba[k].abs());
    }
    Ok(TheoremReport::new("t-hat-symmetry", resid, scale, tol))
}

/// `zeta * T_ab = zeta * T_hat_ab - xi * theta^a * rho_eta_hat^b
///  - xi * L^a * e^b - xi * M^a * V^b` (body integrated).
pub fn check_zeta_t_identity(pair: &ProcessPair, ts: &[f64], tol: f64) -> Result<TheoremReport> {
    let ha = &pair.a.history;
    let hb = &pair.b.history;
    let m = pair.material();
    let n = ha.n_nodes();
    let nt = ha.n_times();
    let dt = ha.dt;
    let zeta: Vec<f64> = (0..nt).map(|k| (-(k as f64) * dt / m.beta).exp() / m.beta).collect();
    let xi: Vec<f64> = (0..nt).map(|k| k as f64 * dt).collect();

    let lhs = convolve_samples(&zeta, &t_series(pair, false), dt);
    let hat = convolve_samples(&zeta, &t_series(pair, true), dt);

    // correction terms, nodal then integrated
    let mut corr = vec![vec![0.0; nt]; n];
    for (i, c) in corr.iter_mut().enumerate() {
        let theta_a: Vec<f64> = (0..nt).map(|k| ha.theta[(i, k)]).collect();
        let reh_b: Vec<f64> = (0..nt)
            .map(|k| {
                let (_, _, _, _, reh) = hat_measures(&m, hb, i, k);
                reh
            })
            .collect();
        let t1 = convolve_samples(&theta_a, &reh_b, dt);
        let th0 = ha.theta[(i, 0)];
        let l_data: Vec<f64> = (0..nt).map(|k| m.a14 * th0 * (-xi[k] / m.beta).exp()).collect();
        let m_data: Vec<f64> = (0..nt).map(|k| m.a47 * th0 * (-xi[k] / m.beta).exp()).collect();
        let e_b: Vec<f64> = (0..nt).map(|k| hb.e[(i, k)]).collect();
        let v_b: Vec<f64> = (0..nt).map(|k| hb.v_field[(i, k)]).collect();
        let t2 = convolve_samples(&l_data, &e_b, dt);
        let t3 = convolve_samples(&m_data, &v_b, dt);
        for k in 0..nt {
            c[k] = t1[k] + t2[k] + t3[k];
        }
    }
    let mut corr_int = vec![0.0; nt];
    for (k, ci) in corr_int.iter_mut().enumerate() {
        let vals: Vec<f64> = (0..n).map(|i| corr[i][k]).collect();
        *ci = trapz(&ha.grid, &vals);
    }
    let corr_conv = convolve_samples(&xi, &corr_int, dt);

    let mut resid = 0.0f64;
    let mut scale = 0.0f64;
    for &t in ts {
        let k = ha.step_of(t)?;
        let rhs = hat[k] - corr_conv[k];
        resid = resid.max((lhs[k] - rhs).abs());
        scale = scale.max(lhs[k].abs()).max(hat[k].abs()).max(corr_conv[k].abs());
    }
    Ok(TheoremReport::new("zeta-t-identity", resid, scale, tol))
}

struct ProcessSeries {
    /// loads sampled on the grid/time lattice
    f: Array2<f64>,
    g: Array2<f64>,
    rho_h: Array2<f64>,
    /// cumulative `l * rho h`
    l_rho_h: Array2<f64>,
    /// `H = rho T0 eta0 + l * rho h`
    cal_h: Array2<f64>,
    /// `Theta_x = l * theta_x`
    big_theta_x: Array2<f64>,
    /// `A theta = theta + beta theta_dot`
    a_theta: Array2<f64>,
    /// `A theta_x`
    a_theta_x: Array2<f64>,
    /// endpoint `l * q` (surface flux integral), [2][nt]
    lq_end: [Vec<f64>; 2],
    /// endpoint `D u = n u_x`, `D phi = n phi_x`
    du_end: [Vec<f64>; 2],
    dphi_end: [Vec<f64>; 2],
    /// second time derivative of u per node
    u_dd: Array2<f64>,
}

fn process_series(p: &Process) -> ProcessSeries {
    let h = &p.history;
    let n = h.n_nodes();
    let nt = h.n_times();
    let dt = h.dt;
    let grid = h.grid;
    let hh = grid.h();
    let m = h.material;
    let nodes = grid.nodes();

    let mut f = Array2::zeros((n, nt));
    let mut g = Array2::zeros((n, nt));
    let mut rho_h = Array2::zeros((n, nt));
    for i in 0..n {
        for k in 0..nt {
            let t = k as f64 * dt;
            f[(i, k)] = p.scenario.loads.f.eval(nodes[i], t);
            g[(i, k)] = p.scenario.loads.g.eval(nodes[i], t);
            rho_h[(i, k)] = m.rho * p.scenario.loads.h.eval(nodes[i], t);
        }
    }
    let mut l_rho_h = Array2::zeros((n, nt));
    let mut cal_h = Array2::zeros((n, nt));
    let mut big_theta_x = Array2::zeros((n, nt));
    let mut a_theta = Array2::zeros((n, nt));
    let mut a_theta_x = Array2::zeros((n, nt));
    let mut u_dd = Array2::zeros((n, nt));
    for i in 0..n {
        let row: Vec<f64> = (0..nt).map(|k| rho_h[(i, k)]).collect();
        let c = cumtrapz(&row, dt);
        for k in 0..nt {
            l_rho_h[(i, k)] = c[k];
            cal_h[(i, k)] = m.rho * m.t0 * h.eta0[i] + c[k];
        }
        let tx: Vec<f64> = (0..nt).map(|k| h.theta_x[(i, k)]).collect();
        let c = cumtrapz(&tx, dt);
        for k in 0..nt {
            big_theta_x[(i, k)] = c[k];
        }
        let v: Vec<f64> = (0..nt).map(|k| h.v[(i, k)]).collect();
        let vd = diff_series(&v, dt);
        for k in 0..nt {
            u_dd[(i, k)] = vd[k];
            a_theta[(i, k)] = h.theta[(i, k)] + m.beta * h.psi[(i, k)];
        }
    }
    // A theta_x needs psi_x
    for k in 0..nt {
        let th: Vec<f64> = (0..n).map(|i| h.theta[(i, k)]).collect();
        let ps: Vec<f64> = (0..n).map(|i| h.psi[(i, k)]).collect();
        for i in 0..n {
            let tx: f64 = {
                let (s, c) = deriv_stencil(1, i, n, hh).unwrap();
                c.iter().enumerate().map(|(j, cj)| cj * th[s + j]).sum()
            };
            let px: f64 = {
                let (s, c) = deriv_stencil(1, i, n, hh).unwrap();
                c.iter().enumerate().map(|(j, cj)| cj * ps[s + j]).sum()
            };
            a_theta_x[(i, k)] = tx + m.beta * px;
        }
    }

    let mut lq_end: [Vec<f64>; 2] = [vec![], vec![]];
    let mut du_end: [Vec<f64>; 2] = [vec![], vec![]];
    let mut dphi_end: [Vec<f64>; 2] = [vec![], vec![]];
    for (side, tr) in [(0usize, &h.traction_left), (1usize, &h.traction_right)] {
        lq_end[side] = cumtrapz(&tr.q, dt);
        let b = if side == 0 { 0 } else { n - 1 };
        let nrm = if side == 0 { -1.0 } else { 1.0 };
        let (s, c) = end_stencil(1, b == 0, n, hh).unwrap();
        for k in 0..nt {
            let ux: f64 = c.iter().enumerate().map(|(j, cj)| cj * h.u[(s + j, k)]).sum();
            let px: f64 = c.iter().enumerate().map(|(j, cj)| cj * h.phi[(s + j, k)]).sum();
            du_end[side].push(nrm * ux);
            dphi_end[side].push(nrm * px);
        }
    }

    ProcessSeries {
        f,
        g,
        rho_h,
        l_rho_h,
        cal_h,
        big_theta_x,
        a_theta,
        a_theta_x,
        lq_end,
        du_end,
        dphi_end,
        u_dd,
    }
}

/// The two-time reciprocity integrand `Gamma_ab(r, s)`: body work terms,
/// surface traction terms, and the inertial/dissipative correction block.
pub fn gamma(pair: &ProcessPair, r: f64, s: f64) -> Result<f64> {
    let sa = process_series(pair.a);
    let sb = process_series(pair.b);
    gamma_from_series(pair, &sa, &sb, r, s)
}

fn gamma_from_series(
    pair: &ProcessPair,
    sa: &ProcessSeries,
    sb: &ProcessSeries,
    r: f64,
    s: f64,
) -> Result<f64> {
    let ha = &pair.a.history;
    let hb = &pair.b.history;
    let m = pair.material();
    let kr = ha.step_of(r)?;
    let ks = hb.step_of(s)?;
    let n = ha.n_nodes();

    let body: Vec<f64> = (0..n)
        .map(|i| {
            m.rho * sa.f[(i, kr)] * hb.u[(i, ks)] - sa.g[(i, kr)] * hb.phi[(i, ks)]
                - sa.cal_h[(i, kr)] * sb.a_theta[(i, ks)] / m.t0
        })
        .collect();
    let corr: Vec<f64> = (0..n)
        .map(|i| {
            m.rho * sa.u_dd[(i, kr)] * hb.u[(i, ks)]
                + m.gamma / m.beta * ha.psi[(i, kr)] * hb.theta[(i, ks)]
                - m.k * sa.big_theta_x[(i, kr)] * sb.a_theta_x[(i, ks)]
        })
        .collect();

    let mut surface = 0.0;
    for side in 0..2 {
        let tra = ha.traction(side == 0, kr);
        let b = if side == 0 { 0 } else { n - 1 };
        surface += tra.p * hb.u[(b, ks)]
            + tra.r * sb.du_end[side][ks]
            + tra.lambda * hb.phi[(b, ks)]
            + tra.h * sb.dphi_end[side][ks]
            + sa.lq_end[side][kr] * sb.a_theta[(b, ks)] / m.t0;
    }

    Ok(trapz(&ha.grid, &body) + surface - trapz(&ha.grid, &corr))
}

/// Max normalized residual of `Gamma_ab(r,s) = Gamma_ba(s,r)` over a tensor
/// grid of sample times.
pub fn check_gamma_symmetry(pair: &ProcessPair, times: &[f64], tol: f64) -> Result<TheoremReport> {
    let sa = process_series(pair.a);
    let sb = process_series(pair.b);
    let sw = swapped(pair);
    let mut resid = 0.0f64;
    let mut scale = 0.0f64;
    for &r in times {
        for &s in times {
            let ab = gamma_from_series(pair, &sa, &sb, r, s)?;
            let ba = gamma_from_series(&sw, &sb, &sa, s, r)?;
            resid = resid.max((ab - ba).abs());
            scale = scale.max(ab.abs()).max(ba.abs());
        }
    }
    Ok(TheoremReport::new("gamma-symmetry", resid, scale, tol))
}

/// Default 5x5 sample times in `(0, T]`, grid aligned.
pub fn default_sample_times(h: &SolutionHistory, count: usize) -> Vec<f64> {
    let nt = h.n_times() - 1;
    (1..=count)
        .map(|i| (i * nt / count) as f64 * h.dt)
        .collect()
}

/// `E(r, s)`: the data part of `Gamma` (no inertial/dissipative block).
fn e_pairing(p: &Process, ps: &ProcessSeries, r: f64, s: f64) -> Result<f64> {
    let h = &p.history;
    let m = h.material;
    let kr = h.step_of(r)?;
    let ks = h.step_of(s)?;
    let n = h.n_nodes();
    let body: Vec<f64> = (0..n)
        .map(|i| {
            m.rho * ps.f[(i, kr)] * h.u[(i, ks)] - ps.g[(i, kr)] * h.phi[(i, ks)]
                - ps.cal_h[(i, kr)] * ps.a_theta[(i, ks)] / m.t0
        })
        .collect();
    let mut surface = 0.0;
    for side in 0..2 {
        let tra = h.traction(side == 0, kr);
        let b = if side == 0 { 0 } else { n - 1 };
        surface += tra.p * h.u[(b, ks)]
            + tra.r * ps.du_end[side][ks]
            + tra.lambda * h.phi[(b, ks)]
            + tra.h * ps.dphi_end[side][ks]
            + ps.lq_end[side][kr] * ps.a_theta[(b, ks)] / m.t0;
    }
    Ok(trapz(&h.grid, &body) + surface)
}

/// The uniqueness energy `G(t)` and the residual of its derivative
/// identity. `G` is checked at `t`; the derivative is differenced centrally
/// and compared against the data expression evaluated at `2t`, so `t` must
/// not exceed half the final time.
pub fn uniqueness_energy(p: &Process, t: f64) -> Result<(f64, f64)> {
    let h = &p.history;
    let m = h.material;
    let dt = h.dt;
    let kt = h.step_of(t)?;
    if 2 * kt + 1 >= h.n_times() {
        return Err(Error::Solver(format!(
            "uniqueness check needs 2t within the history (t = {t})"
        )));
    }
    let g = uniqueness_g_series(h);
    let ps = process_series(p);
    let n = h.n_nodes();

    // dG/dt by centered difference
    let gdot = if kt == 0 {
        (g[1] - g[0]) / dt
    } else {
        (g[kt + 1] - g[kt - 1]) / (2.0 * dt)
    };

    // data side: -int_0^t [E(t+tau, t-tau) - E(t-tau, t+tau)] dtau
    //            + int_B [rho (v(2t) u0 + u(2t) v0) + (gamma/beta) theta(2t) theta0
    //                     + beta k Theta_x(2t) theta0_x] dv
    let mut e_diff = Vec::with_capacity(kt + 1);
    for j in 0..=kt {
        let tp = (kt + j) as f64 * dt;
        let tm = (kt - j) as f64 * dt;
        e_diff.push(e_pairing(p, &ps, tp, tm)? - e_pairing(p, &ps, tm, tp)?);
    }
    let int_e = {
        // trapezoid over tau in [0, t]
        let mut acc = 0.0;
        for j in 0..kt {
            acc += 0.5 * dt * (e_diff[j] + e_diff[j + 1]);
        }
        acc
    };

    let k2 = 2 * kt;
    let theta0: Vec<f64> = (0..n).map(|i| h.theta[(i, 0)]).collect();
    let theta0_x: Vec<f64> = (0..n).map(|i| h.theta_x[(i, 0)]).collect();
    let data_vals: Vec<f64> = (0..n)
        .map(|i| {
            m.rho * (h.v[(i, k2)] * h.u[(i, 0)] + h.u[(i, k2)] * h.v[(i, 0)])
                + m.gamma / m.beta * h.theta[(i, k2)] * theta0[i]
                + m.beta * m.k * ps.big_theta_x[(i, k2)] * theta0_x[i]
        })
        .collect();
    let rhs = -int_e + trapz(&h.grid, &data_vals);

    Ok((g[kt], (gdot - rhs).abs()))
}

/// Reciprocity functional `I_ab(t)` of the first convolution reciprocity
/// theorem, as a series on the time grid.
///
/// The printed statement of this functional carries two typos relative to
/// the paper's own proof (the sign of the `theta0` data term and the kernel
/// on the heat data term); the implementation follows the proof, which is
/// the variant whose symmetry residual actually converges.
pub fn big_i_series(pair: &ProcessPair) -> Vec<f64> {
    let ha = &pair.a.history;
    let hb = &pair.b.history;
    let m = pair.material();
    let sa = process_series(pair.a);
    let sb = process_series(pair.b);
    let n = ha.n_nodes();
    let nt = ha.n_times();
    let dt = ha.dt;
    let xi: Vec<f64> = (0..nt).map(|k| k as f64 * dt).collect();
    let grid = ha.grid;

    let mut body = vec![vec![0.0; nt]; n];
    for (i, acc) in body.iter_mut().enumerate() {
        let f_a: Vec<f64> = (0..nt).map(|k| sa.f[(i, k)]).collect();
        let u_b: Vec<f64> = (0..nt).map(|k| hb.u[(i, k)]).collect();
        let xf = convolve_samples(&xi, &f_a, dt);
        let cal_f: Vec<f64> = (0..nt)
            .map(|k| m.rho * xf[k] + m.rho * ha.v[(i, 0)] * xi[k] + m.rho * ha.u[(i, 0)])
            .collect();
        let t1 = convolve_samples(&cal_f, &u_b, dt);

        let g_a: Vec<f64> = (0..nt).map(|k| sa.g[(i, k)]).collect();
        let phi_b: Vec<f64> = (0..nt).map(|k| hb.phi[(i, k)]).collect();
        let t2 = convolve_samples(&convolve_samples(&xi, &g_a, dt), &phi_b, dt);

        // data terms: + (gamma/beta) theta0^a (xi * theta^b)
        //             - (1/T0) xi * H^a * A theta^b
        //             + L_j^a * theta_x^b with L_j = beta k theta0_x t^2/2
        let th_b: Vec<f64> = (0..nt).map(|k| hb.theta[(i, k)]).collect();
        let xi_th = convolve_samples(&xi, &th_b, dt);
        let th0_a = ha.theta[(i, 0)];

        let hh_a: Vec<f64> = (0..nt).map(|k| sa.cal_h[(i, k)]).collect();
        let ath_b: Vec<f64> = (0..nt).map(|k| sb.a_theta[(i, k)]).collect();
        let t4 = convolve_samples(&convolve_samples(&xi, &hh_a, dt), &ath_b, dt);

        let l_j: Vec<f64> = (0..nt)
            .map(|k| m.beta * m.k * ha.theta_x[(i, 0)] * 0.5 * xi[k] * xi[k])
            .collect();
        let tx_b: Vec<f64> = (0..nt).map(|k| hb.theta_x[(i, k)]).collect();
        let t5 = convolve_samples(&l_j, &tx_b, dt);

        for k in 0..nt {
            acc[k] = t1[k] - t2[k] + m.gamma / m.beta * th0_a * xi_th[k] - t4[k] / m.t0 + t5[k];
        }
    }
    let mut body_int = vec![0.0; nt];
    for (k, b) in body_int.iter_mut().enumerate() {
        let vals: Vec<f64> = (0..n).map(|i| body[i][k]).collect();
        *b = trapz(&grid, &vals);
    }

    // surface: xi * sum_ends [P^a*u^b + R^a*Du^b + Lam^a*phi^b + H^a*Dphi^b
    //                         + (1/T0) (l*q^a) * A theta^b]
    let mut surf = vec![0.0; nt];
    for side in 0..2 {
        let tra = if side == 0 { &ha.traction_left } else { &ha.traction_right };
        let b = if side == 0 { 0 } else { n - 1 };
        let u_b: Vec<f64> = (0..nt).map(|k| hb.u[(b, k)]).collect();
        let phi_b: Vec<f64> = (0..nt).map(|k| hb.phi[(b, k)]).collect();
        let ath_b: Vec<f64> = (0..nt).map(|k| sb.a_theta[(b, k)]).collect();
        let terms = [
            convolve_samples(&tra.p, &u_b, dt),
            convolve_samples(&tra.r, &sb.du_end[side], dt),
            convolve_samples(&tra.lambda, &phi_b, dt),
            convolve_samples(&tra.h, &sb.dphi_end[side], dt),
            convolve_samples(&sa.lq_end[side], &ath_b, dt)
                .iter()
                .map(|v| v / m.t0)
                .collect(),
        ];
        for term in terms {
            for (k, v) in term.iter().enumerate() {
                surf[k] += v;
            }
        }
    }
    let surf_conv = convolve_samples(&xi, &surf, dt);

    (0..nt).map(|k| body_int[k] + surf_conv[k]).collect()
}

pub fn check_i_symmetry(pair: &ProcessPair, ts: &[f64], tol: f64) -> Result<TheoremReport> {
    let ab = big_i_series(pair);
    let ba = big_i_series(&swapped(pair));
    let mut resid = 0.0f64;
    let mut scale = 0.0f64;
    for &t in ts {
        let k = pair.a.history.step_of(t)?;
        resid = resid.max((ab[k] - ba[k]).abs());
        scale = scale.max(ab[k].abs()).max(ba[k].abs());
    }
    Ok(TheoremReport::new("reciprocity-i", resid, scale, tol))
}

/// Alternative reciprocity functional (no rate operator): nested
/// `chi * zeta *` convolutions, with the constitutive-gap data terms.
pub fn cal_i_series(pair: &ProcessPair) -> Vec<f64> {
    let ha = &pair.a.history;
    let hb = &pair.b.history;
    let m = pair.material();
    let bp = m.beta_prime();
    let sa = process_series(pair.a);
    let sb = process_series(pair.b);
    let n = ha.n_nodes();
    let nt = ha.n_times();
    let dt = ha.dt;
    let xi: Vec<f64> = (0..nt).map(|k| k as f64 * dt).collect();
    let zeta: Vec<f64> = (0..nt).map(|k| (-(k as f64) * dt / m.beta).exp() / m.beta).collect();
    let chi: Vec<f64> = (0..nt).map(|k| (-(k as f64) * dt / bp).exp() / bp).collect();
    let grid = ha.grid;

    // block 1: chi * zeta * int_B [F^a * u^b - xi * g^a * phi^b]
    let mut b1 = vec![vec![0.0; nt]; n];
    for (i, acc) in b1.iter_mut().enumerate() {
        let f_a: Vec<f64> = (0..nt).map(|k| sa.f[(i, k)]).collect();
        let u_b: Vec<f64> = (0..nt).map(|k| hb.u[(i, k)]).collect();
        let xf = convolve_samples(&xi, &f_a, dt);
        let cal_f: Vec<f64> = (0..nt)
            .map(|k| m.rho * xf[k] + m.rho * ha.v[(i, 0)] * xi[k] + m.rho * ha.u[(i, 0)])
            .collect();
        let t1 = convolve_samples(&cal_f, &u_b, dt);
        let g_a: Vec<f64> = (0..nt).map(|k| sa.g[(i, k)]).collect();
        let phi_b: Vec<f64> = (0..nt).map(|k| hb.phi[(i, k)]).collect();
        let t2 = convolve_samples(&convolve_samples(&xi, &g_a, dt), &phi_b, dt);
        for k in 0..nt {
            acc[k] = t1[k] - t2[k];
        }
    }
    let mut b1_int = vec![0.0; nt];
    for (k, b) in b1_int.iter_mut().enumerate() {
        let vals: Vec<f64> = (0..n).map(|i| b1[i][k]).collect();
        *b = trapz(&grid, &vals);
    }
    let block1 = convolve_samples(&chi, &convolve_samples(&zeta, &b1_int, dt), dt);

    // block 2: chi * xi * { zeta * [P*u + R*Du + Lam*phi + H*Dphi]
    //                       + (1/T0) l*q^a * theta^b } over the ends
    let mut mech = vec![0.0; nt];
    let mut heat = vec![0.0; nt];
    for side in 0..2 {
        let tra = if side == 0 { &ha.traction_left } else { &ha.traction_right };
        let b = if side == 0 { 0 } else { n - 1 };
        let u_b: Vec<f64> = (0..nt).map(|k| hb.u[(b, k)]).collect();
        let phi_b: Vec<f64> = (0..nt).map(|k| hb.phi[(b, k)]).collect();
        let th_b: Vec<f64> = (0..nt).map(|k| hb.theta[(b, k)]).collect();
        let terms = [
            convolve_samples(&tra.p, &u_b, dt),
            convolve_samples(&tra.r, &sb.du_end[side], dt),
            convolve_samples(&tra.lambda, &phi_b, dt),
            convolve_samples(&tra.h, &sb.dphi_end[side], dt),
        ];
        for term in terms {
            for (k, v) in term.iter().enumerate() {
                mech[k] += v;
            }
        }
        let hq = convolve_samples(&sa.lq_end[side], &th_b, dt);
        for (k, v) in hq.iter().enumerate() {
            heat[k] += v / m.t0;
        }
    }
    let inner: Vec<f64> = {
        let zm = convolve_samples(&zeta, &mech, dt);
        (0..nt).map(|k| zm[k] + heat[k]).collect()
    };
    let block2 = convolve_samples(&chi, &convolve_samples(&xi, &inner, dt), dt);

    // block 3: xi * int_B { chi * (L^a * e^b + M^a * V^b) + R^a * theta^b
    //                       - (1/T0) chi * H^a * theta^b }
    let mut b3 = vec![vec![0.0; nt]; n];
    for (i, acc) in b3.iter_mut().enumerate() {
        let th0_a = ha.theta[(i, 0)];
        let l_data: Vec<f64> = (0..nt).map(|k| m.a14 * th0_a * (-xi[k] / m.beta).exp()).collect();
        let m_data: Vec<f64> = (0..nt).map(|k| m.a47 * th0_a * (-xi[k] / m.beta).exp()).collect();
        let r_data: Vec<f64> = (0..nt).map(|k| m.c * th0_a * (-xi[k] / bp).exp()).collect();
        let e_b: Vec<f64> = (0..nt).map(|k| hb.e[(i, k)]).collect();
        let v_b: Vec<f64> = (0..nt).map(|k| hb.v_field[(i, k)]).collect();
        let th_b: Vec<f64> = (0..nt).map(|k| hb.theta[(i, k)]).collect();
        let hh_a: Vec<f64> = (0..nt).map(|k| sa.cal_h[(i, k)]).collect();

        let lm: Vec<f64> = {
            let le = convolve_samples(&l_data, &e_b, dt);
            let mv = convolve_samples(&m_data, &v_b, dt);
            (0..nt).map(|k| le[k] + mv[k]).collect()
        };
        let t1 = convolve_samples(&chi, &lm, dt);
        let t2 = convolve_samples(&r_data, &th_b, dt);
        let t3 = convolve_samples(&chi, &convolve_samples(&hh_a, &th_b, dt), dt);
        for k in 0..nt {
            acc[k] = t1[k] + t2[k] - t3[k] / m.t0;
        }
    }
    let mut b3_int = vec![0.0; nt];
    for (k, b) in b3_int.iter_mut().enumerate() {
        let vals: Vec<f64> = (0..n).map(|i| b3[i][k]).collect();
        *b = trapz(&grid, &vals);
    }
    let block3 = convolve_samples(&xi, &b3_int, dt);

    (0..nt).map(|k| block1[k] + block2[k] + block3[k]).collect()
}

pub fn check_cal_i_symmetry(pair: &ProcessPair, ts: &[f64], tol: f64) -> Result<TheoremReport> {
    let ab = cal_i_series(pair);
    let ba = cal_i_series(&swapped(pair));
    let mut resid = 0.0f64;
    let mut scale = 0.0f64;
    for &t in ts {
        let k = pair.a.history.step_of(t)?;
        resid = resid.max((ab[k] - ba[k]).abs());
        scale = scale.max(ab[k].abs()).max(ba[k].abs());
    }
    Ok(TheoremReport::new("reciprocity-cal-i", resid, scale, tol))
}
