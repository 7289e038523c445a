//! The 1D mixed initial-boundary value problem: semi-discretization in
//! space, implicit trapezoidal (Crank-Nicolson) stepping in time, with the
//! electric potential as an algebraic unknown solved simultaneously each
//! step (index-1 linear DAE).
//!
//! Unknown layout: per node the slots `(u, v, theta, psi, phi)` with
//! `v = u_dot` and `psi = theta_dot`, interleaved node by node for a narrow
//! band. The step matrix is time-independent and factored once.
//!
//! Boundary rows replace the motion rows at the two nodes nearest each end
//! (value pair and normal-derivative pair), the energy row at the end node
//! (temperature pair) and the charge rows at the two nodes nearest each end
//! (potential pair and its normal derivative). Natural conditions and all
//! flux-derived quantities (tractions, classical stress, the divergence
//! terms of the residual checks) are evaluated through the constitutive
//! expansion in the primary fields with single second-order stencils;
//! differencing stored flux fields instead would mix one-sided and centered
//! truncation constants at the ends and drop to first order there.

use crate::banded::{BandLu, BandMatrix};
use crate::constitutive::Material1D;
use crate::convolution::{convolve_samples, cumtrapz};
use crate::error::{Error, Result};
use crate::kinematics::{deriv_stencil, end_stencil, stencil4, trapz, Grid1D};
use crate::scenario::{PairCondition, Scenario, XtFn};
use ndarray::Array2;

const SLOTS: usize = 5;
const U: usize = 0;
const V: usize = 1;
const TH: usize = 2;
const PS: usize = 3;
const PH: usize = 4;

#[inline]
fn dof(node: usize, slot: usize) -> usize {
    SLOTS * node + slot
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum End {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy)]
enum Pair {
    U,
    Du,
    Theta,
    Phi,
    Dphi,
}

#[derive(Debug, Clone, Copy)]
enum RowRhs {
    None,
    MotionLoad(usize),
    EnergyLoad(usize),
    ChargeLoad(usize),
    Bc(End, Pair),
    /// natural traction pair, imposed in balance-integrated anchor form
    BcP(End),
    /// natural charge-flux pair, imposed in balance-integrated anchor form
    BcLambda(End),
    /// natural quadrupole pair, anchored through the charge balance
    BcH(End),
}

/// Interior anchor node for balance-integrated natural rows and traction
/// recovery on the given side.
fn anchor_node(end: End, n: usize) -> usize {
    match end {
        End::Left => 4,
        End::Right => n - 5,
    }
}

/// Nodes between an endpoint and its anchor, endpoint first.
fn anchor_segment(end: End, n: usize) -> Vec<usize> {
    match end {
        End::Left => (0..=anchor_node(end, n)).collect(),
        End::Right => (anchor_node(end, n)..n).rev().collect(),
    }
}

/// Trapezoid weights over the anchor segment, indexed like `anchor_segment`.
fn segment_weights(len: usize, h: f64) -> Vec<f64> {
    let mut w = vec![h; len];
    w[0] = 0.5 * h;
    w[len - 1] = 0.5 * h;
    w
}

/// Spatial coefficient blocks exposed for verification (operator symmetry
/// on interior test vectors).
#[derive(Debug, Clone, Copy)]
pub enum SpatialBlock {
    /// `a11 D2 - a22 D4`, the motion row acting on u
    MotionU,
    /// `a33 D2 - a77 D4`, the charge row acting on phi
    ChargePhi,
}

/// The assembled semi-discrete system: the trapezoidal step operator, the
/// damped start-up operator, and the row descriptors shared by both.
pub struct Assembled {
    pub scenario: Scenario,
    cn: StepOp,
    be: StepOp,
    rhs_kind: Vec<RowRhs>,
}

fn pair_cond(scenario: &Scenario, end: End, pair: Pair) -> &PairCondition {
    let ep = match end {
        End::Left => &scenario.boundary.left,
        End::Right => &scenario.boundary.right,
    };
    match pair {
        Pair::U => &ep.u,
        Pair::Du => &ep.du,
        Pair::Theta => &ep.theta,
        Pair::Phi => &ep.phi,
        Pair::Dphi => &ep.dphi,
    }
}

fn end_node(end: End, n: usize) -> usize {
    match end {
        End::Left => 0,
        End::Right => n - 1,
    }
}

fn end_normal(end: End) -> f64 {
    match end {
        End::Left => -1.0,
        End::Right => 1.0,
    }
}

/// One implicit step operator of the theta-scheme family
/// (`theta = 1/2`: trapezoidal; `theta = 1`: backward Euler).
struct StepOp {
    theta: f64,
    /// substep size
    s: f64,
    a_new: BandMatrix,
    a_old: BandMatrix,
    lu: BandLu,
    row_scale: Vec<f64>,
}

/// Number of initial dt-steps integrated as damped backward-Euler
/// half-step pairs (Rannacher start-up). Trapezoidal stepping alone leaves
/// an undamped high-frequency transient of the stiff fourth-order modes,
/// which would pollute time-differenced accelerations downstream.
const STARTUP_STEPS: usize = 2;

fn build_step_op(scenario: &Scenario, theta: f64, s: f64) -> Result<(StepOp, Vec<RowRhs>)> {
    let grid = scenario.grid;
    let n = grid.n_nodes;
    let m = scenario.material;
    let h = grid.h();
    let bp = m.beta_prime();
    let ts = theta * s;
    let os = (1.0 - theta) * s;

    let mut new_t: Vec<(usize, usize, f64)> = Vec::new();
    let mut old_t: Vec<(usize, usize, f64)> = Vec::new();
    let mut rhs_kind = vec![RowRhs::None; SLOTS * n];

    let stencil = |order: usize, node: usize| deriv_stencil(order, node, n, h).unwrap();

    // kinematic rows at every node
    for i in 0..n {
        for (slot, rate) in [(U, V), (TH, PS)] {
            let r = dof(i, slot);
            new_t.push((r, dof(i, slot), 1.0));
            new_t.push((r, dof(i, rate), -ts));
            old_t.push((r, dof(i, slot), 1.0));
            if os != 0.0 {
                old_t.push((r, dof(i, rate), os));
            }
        }
    }

    // motion rows (interior only; ends replaced by the u and Du pairs)
    for i in 2..n - 2 {
        let r = dof(i, V);
        new_t.push((r, dof(i, V), m.rho));
        old_t.push((r, dof(i, V), m.rho));
        let mut add = |order: usize, slot: usize, coef: f64| {
            let (st, c) = stencil(order, i);
            for (j, cj) in c.iter().enumerate() {
                new_t.push((r, dof(st + j, slot), -ts * coef * cj));
                if os != 0.0 {
                    old_t.push((r, dof(st + j, slot), os * coef * cj));
                }
            }
        };
        add(2, U, m.a11);
        add(4, U, -m.a22);
        add(3, PH, m.a23 - m.a17);
        add(1, TH, m.a14);
        add(1, PS, m.a14 * m.beta);
        rhs_kind[r] = RowRhs::MotionLoad(i);
    }

    // energy rows (interior plus one in from each end); the potential rate
    // term integrates exactly to a difference of potentials
    for i in 1..n - 1 {
        let r = dof(i, PS);
        new_t.push((r, dof(i, PS), m.c * bp + ts * m.c));
        old_t.push((r, dof(i, PS), m.c * bp - os * m.c));
        let (s2, c2) = stencil(2, i);
        for (j, cj) in c2.iter().enumerate() {
            new_t.push((r, dof(s2 + j, PH), -m.a47 * cj));
            old_t.push((r, dof(s2 + j, PH), -m.a47 * cj));
            new_t.push((r, dof(s2 + j, TH), ts * m.k * cj));
            if os != 0.0 {
                old_t.push((r, dof(s2 + j, TH), -os * m.k * cj));
            }
        }
        let (s1, c1) = stencil(1, i);
        for (j, cj) in c1.iter().enumerate() {
            new_t.push((r, dof(s1 + j, V), ts * m.a14 * cj));
            if os != 0.0 {
                old_t.push((r, dof(s1 + j, V), -os * m.a14 * cj));
            }
        }
        rhs_kind[r] = RowRhs::EnergyLoad(i);
    }

    // charge rows (algebraic, enforced at the new time level)
    for i in 2..n - 2 {
        let r = dof(i, PH);
        let mut add = |order: usize, slot: usize, coef: f64| {
            let (st, c) = stencil(order, i);
            for (j, cj) in c.iter().enumerate() {
                new_t.push((r, dof(st + j, slot), coef * cj));
            }
        };
        add(3, U, m.a17 - m.a23);
        add(2, PH, m.a33);
        add(4, PH, -m.a77);
        add(2, TH, m.a47);
        add(2, PS, m.a47 * m.beta);
        rhs_kind[r] = RowRhs::ChargeLoad(i);
    }

    // boundary rows (endpoint derivatives with fourth-order one-sided
    // stencils, see `end_stencil`)
    for end in [End::Left, End::Right] {
        let b = end_node(end, n);
        let nrm = end_normal(end);
        let inner = match end {
            End::Left => 1,
            End::Right => n - 2,
        };
        let est = |order: usize| end_stencil(order, b == 0, n, h).unwrap();

        // value pair {u | P} in the v-slot of the end node. The natural
        // condition is imposed in balance-integrated form at the interior
        // anchor: theta-averaged flux there plus the segment integral of
        // rho (v_new - v_old)/s equals the averaged prescribed traction
        // plus the averaged body-force integral; one-sided differencing of
        // near-boundary fields (whose discrete error has node-scale
        // structure) would inject a first-order flux error.
        {
            let r = dof(b, V);
            match pair_cond(scenario, end, Pair::U) {
                PairCondition::Essential { .. } => {
                    new_t.push((r, dof(b, U), 1.0));
                    rhs_kind[r] = RowRhs::Bc(end, Pair::U);
                }
                PairCondition::Natural { .. } => {
                    let a = anchor_node(end, n);
                    let mut add = |order: usize, slot: usize, coef: f64| {
                        let (st, c) = stencil(order, a);
                        for (j, cj) in c.iter().enumerate() {
                            new_t.push((r, dof(st + j, slot), theta * nrm * coef * cj));
                            if os != 0.0 {
                                old_t.push((r, dof(st + j, slot), -(1.0 - theta) * nrm * coef * cj));
                            }
                        }
                    };
                    add(1, U, m.a11);
                    add(3, U, -m.a22);
                    add(2, PH, m.a23 - m.a17);
                    new_t.push((r, dof(a, TH), theta * nrm * m.a14));
                    new_t.push((r, dof(a, PS), theta * nrm * m.a14 * m.beta));
                    if os != 0.0 {
                        old_t.push((r, dof(a, TH), -(1.0 - theta) * nrm * m.a14));
                        old_t.push((r, dof(a, PS), -(1.0 - theta) * nrm * m.a14 * m.beta));
                    }
                    let seg = anchor_segment(end, n);
                    let w = segment_weights(seg.len(), h);
                    for (idx, &i) in seg.iter().enumerate() {
                        new_t.push((r, dof(i, V), m.rho * w[idx] / s));
                        old_t.push((r, dof(i, V), m.rho * w[idx] / s));
                    }
                    rhs_kind[r] = RowRhs::BcP(end);
                }
            }
        }

        // normal-derivative pair {Du | R} in the v-slot of the next node in
        {
            let r = dof(inner, V);
            match pair_cond(scenario, end, Pair::Du) {
                PairCondition::Essential { .. } => {
                    let (st, c) = est(1);
                    for (j, cj) in c.iter().enumerate() {
                        new_t.push((r, dof(st + j, U), nrm * cj));
                    }
                }
                PairCondition::Natural { .. } => {
                    let (s2, c2) = est(2);
                    for (j, cj) in c2.iter().enumerate() {
                        new_t.push((r, dof(s2 + j, U), m.a22 * cj));
                    }
                    let (s1, c1) = est(1);
                    for (j, cj) in c1.iter().enumerate() {
                        new_t.push((r, dof(s1 + j, PH), -m.a23 * cj));
                    }
                }
            }
            rhs_kind[r] = RowRhs::Bc(end, Pair::Du);
        }

        // temperature pair {theta | q} in the psi-slot of the end node
        {
            let r = dof(b, PS);
            match pair_cond(scenario, end, Pair::Theta) {
                PairCondition::Essential { .. } => new_t.push((r, dof(b, TH), 1.0)),
                PairCondition::Natural { .. } => {
                    let (st, c) = est(1);
                    for (j, cj) in c.iter().enumerate() {
                        new_t.push((r, dof(st + j, TH), -nrm * m.t0 * m.k * cj));
                    }
                }
            }
            rhs_kind[r] = RowRhs::Bc(end, Pair::Theta);
        }

        // potential pair {phi | Lambda} in the phi-slot of the end node;
        // the natural condition is anchored like the traction pair (the
        // charge balance has no time derivative, so the row is algebraic
        // at the new level with the segment integral of the charge data)
        {
            let r = dof(b, PH);
            match pair_cond(scenario, end, Pair::Phi) {
                PairCondition::Essential { .. } => {
                    new_t.push((r, dof(b, PH), 1.0));
                    rhs_kind[r] = RowRhs::Bc(end, Pair::Phi);
                }
                PairCondition::Natural { .. } => {
                    let a = anchor_node(end, n);
                    let mut add = |order: usize, slot: usize, coef: f64| {
                        let (st, c) = stencil(order, a);
                        for (j, cj) in c.iter().enumerate() {
                            new_t.push((r, dof(st + j, slot), nrm * coef * cj));
                        }
                    };
                    add(2, U, m.a17 - m.a23);
                    add(1, PH, m.a33);
                    add(3, PH, -m.a77);
                    add(1, TH, m.a47);
                    add(1, PS, m.a47 * m.beta);
                    rhs_kind[r] = RowRhs::BcLambda(end);
                }
            }
        }

        // potential-derivative pair {Dphi | H} in the phi-slot next node
        // in. The natural condition prescribes the quadrupole value at the
        // end; it is anchored through Q' = sigma - G with G integrated from
        // the charge data, like the other natural pairs:
        //   Q(end) = Q(anchor) -/+ [int sigma - L G(anchor)] with the
        //   doubly-integrated charge data on the right-hand side.
        {
            let r = dof(inner, PH);
            match pair_cond(scenario, end, Pair::Dphi) {
                PairCondition::Essential { .. } => {
                    let (st, c) = est(1);
                    for (j, cj) in c.iter().enumerate() {
                        new_t.push((r, dof(st + j, PH), nrm * cj));
                    }
                    rhs_kind[r] = RowRhs::Bc(end, Pair::Dphi);
                }
                PairCondition::Natural { .. } => {
                    let a = anchor_node(end, n);
                    let seg = anchor_segment(end, n);
                    let w = segment_weights(seg.len(), h);
                    let seg_len = h * (seg.len() - 1) as f64;
                    let sig = match end {
                        End::Left => -1.0,
                        End::Right => 1.0,
                    };
                    // Q at the anchor (pointwise terms first)
                    new_t.push((r, dof(a, TH), -m.a47));
                    new_t.push((r, dof(a, PS), -m.a47 * m.beta));
                    let mut add_at = |node: usize, order: usize, slot: usize, coef: f64| {
                        let (st, c) = deriv_stencil(order, node, n, h).unwrap();
                        for (j, cj) in c.iter().enumerate() {
                            new_t.push((r, dof(st + j, slot), coef * cj));
                        }
                    };
                    add_at(a, 1, U, -m.a17);
                    add_at(a, 2, PH, m.a77);
                    // + sig * int sigma over the segment
                    for (idx, &i) in seg.iter().enumerate() {
                        let cw = sig * w[idx];
                        add_at(i, 2, U, -cw * m.a23);
                        add_at(i, 1, PH, cw * m.a33);
                    }
                    // - sig * L * G(anchor)
                    let cl = -sig * seg_len;
                    add_at(a, 2, U, cl * (m.a17 - m.a23));
                    add_at(a, 1, PH, cl * m.a33);
                    add_at(a, 3, PH, -cl * m.a77);
                    add_at(a, 1, TH, cl * m.a47);
                    add_at(a, 1, PS, cl * m.a47 * m.beta);
                    rhs_kind[r] = RowRhs::BcH(end);
                }
            }
        }
    }

    // Row-equilibrate: fourth-order rows scale like h^-4 while kinematic
    // rows are O(1); scaling every row to unit 1-norm keeps the
    // factorization well conditioned and makes per-row residuals meaningful.
    let raw = BandMatrix::from_triplets(SLOTS * n, &new_t)?;
    let row_scale: Vec<f64> = (0..SLOTS * n)
        .map(|r| {
            let sc = raw.row_norm1(r);
            if sc > 0.0 {
                sc
            } else {
                1.0
            }
        })
        .collect();
    let scaled: Vec<(usize, usize, f64)> = new_t
        .iter()
        .map(|&(r, c, v)| (r, c, v / row_scale[r]))
        .collect();
    let a_new = BandMatrix::from_triplets(SLOTS * n, &scaled)?;
    let scaled_old: Vec<(usize, usize, f64)> = old_t
        .iter()
        .map(|&(r, c, v)| (r, c, v / row_scale[r]))
        .collect();
    let a_old = BandMatrix::from_triplets(SLOTS * n, &scaled_old)?;
    let lu = a_new.lu().map_err(|e| match e {
        Error::RankDeficient(msg) => {
            Error::RankDeficient(format!("step matrix is rank deficient ({msg})"))
        }
        other => other,
    })?;

    Ok((
        StepOp {
            theta,
            s,
            a_new,
            a_old,
            lu,
            row_scale,
        },
        rhs_kind,
    ))
}

/// Builds the step operators and boundary row descriptors.
pub fn assemble(scenario: &Scenario) -> Result<Assembled> {
    scenario.validate()?;
    let n = scenario.grid.n_nodes;
    if n < 10 {
        return Err(Error::Solver(format!(
            "solver needs at least 10 nodes for its boundary closures and anchors, got {n}"
        )));
    }
    let m = scenario.material;
    if m.beta_prime() == 0.0 {
        return Err(Error::Solver(
            "beta' = beta + gamma/(c beta) must be nonzero".into(),
        ));
    }
    if !scenario.boundary.left.phi.is_essential() && !scenario.boundary.right.phi.is_essential() {
        return Err(Error::RankDeficient(
            "no essential potential condition (S4 empty): phi is determined only up to a constant"
                .into(),
        ));
    }

    let dt = scenario.time.dt;
    let (cn, rhs_kind) = build_step_op(scenario, 0.5, dt)?;
    let (be, _) = build_step_op(scenario, 1.0, 0.5 * dt)?;

    Ok(Assembled {
        scenario: scenario.clone(),
        cn,
        be,
        rhs_kind,
    })
}

impl Assembled {
    /// Applies one pure-coefficient spatial block to a nodal vector.
    pub fn apply_block(&self, block: SpatialBlock, x: &[f64]) -> Vec<f64> {
        let grid = self.scenario.grid;
        let n = grid.n_nodes;
        assert_eq!(x.len(), n);
        let h = grid.h();
        let m = self.scenario.material;
        let (c2, c4) = match block {
            SpatialBlock::MotionU => (m.a11, -m.a22),
            SpatialBlock::ChargePhi => (m.a33, -m.a77),
        };
        let mut out = vec![0.0; n];
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            if i >= 2 && i + 2 < n {
                let (s, c) = deriv_stencil(2, i, n, h).unwrap();
                for (j, cj) in c.iter().enumerate() {
                    acc += c2 * cj * x[s + j];
                }
                let (s, c) = deriv_stencil(4, i, n, h).unwrap();
                for (j, cj) in c.iter().enumerate() {
                    acc += c4 * cj * x[s + j];
                }
            }
            *o = acc;
        }
        out
    }
}

/// Generalized tractions at one endpoint at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TractionSet {
    pub p: f64,
    pub r: f64,
    pub lambda: f64,
    pub h: f64,
    pub q: f64,
}

/// Endpoint traction time series.
#[derive(Debug, Clone, Default)]
pub struct TractionSeries {
    pub p: Vec<f64>,
    pub r: Vec<f64>,
    pub lambda: Vec<f64>,
    pub h: Vec<f64>,
    pub q: Vec<f64>,
}

/// Nodal fields over the whole time range, plus derived per-step states and
/// endpoint tractions. Arrays are indexed `[(node, step)]`.
pub struct SolutionHistory {
    pub grid: Grid1D,
    pub material: Material1D,
    pub dt: f64,
    pub times: Vec<f64>,
    pub u: Array2<f64>,
    pub v: Array2<f64>,
    pub theta: Array2<f64>,
    pub psi: Array2<f64>,
    pub phi: Array2<f64>,
    // kinematic
    pub e: Array2<f64>,
    pub kappa: Array2<f64>,
    pub theta_x: Array2<f64>,
    pub e_field: Array2<f64>,
    pub v_field: Array2<f64>,
    // dynamic (physical signs)
    pub tau: Array2<f64>,
    pub mu: Array2<f64>,
    pub sigma: Array2<f64>,
    pub q_pole: Array2<f64>,
    pub rho_eta: Array2<f64>,
    pub q: Array2<f64>,
    /// entropy per unit mass at t = 0 as used by the convolution-form data
    pub eta0: Vec<f64>,
    pub eta0_derived: bool,
    pub traction_left: TractionSeries,
    pub traction_right: TractionSeries,
    pub max_step_residual: f64,
}

impl SolutionHistory {
    pub fn n_nodes(&self) -> usize {
        self.grid.n_nodes
    }

    pub fn n_times(&self) -> usize {
        self.times.len()
    }

    /// Index of a grid-aligned time, or an error.
    pub fn step_of(&self, t: f64) -> Result<usize> {
        let k = (t / self.dt).round();
        if k < 0.0 || k as usize >= self.n_times() {
            return Err(Error::Solver(format!("time {t} outside the history")));
        }
        if (t - k * self.dt).abs() > 1e-9 * self.dt.max(1.0) {
            return Err(Error::Solver(format!(
                "time {t} is not aligned with the dt = {} grid",
                self.dt
            )));
        }
        Ok(k as usize)
    }

    pub fn traction(&self, end_left: bool, k: usize) -> TractionSet {
        let tr = if end_left {
            &self.traction_left
        } else {
            &self.traction_right
        };
        TractionSet {
            p: tr.p[k],
            r: tr.r[k],
            lambda: tr.lambda[k],
            h: tr.h[k],
            q: tr.q[k],
        }
    }
}

/// Endpoint tractions at a grid-aligned time.
pub fn tractions(history: &SolutionHistory, t: f64) -> Result<(TractionSet, TractionSet)> {
    let k = history.step_of(t)?;
    Ok((history.traction(true, k), history.traction(false, k)))
}

fn apply_stencil(vals: &[f64], order: usize, node: usize, n: usize, h: f64) -> f64 {
    let (s, c) = deriv_stencil(order, node, n, h).unwrap();
    c.iter().enumerate().map(|(j, cj)| cj * vals[s + j]).sum()
}

/// Stencil for derivative evaluation at any node: fourth-order one-sided at
/// the endpoints, second-order elsewhere.
pub(crate) fn node_stencil(order: usize, node: usize, n: usize, h: f64) -> (usize, Vec<f64>) {
    if node == 0 {
        end_stencil(order, true, n, h).unwrap()
    } else if node == n - 1 {
        end_stencil(order, false, n, h).unwrap()
    } else {
        deriv_stencil(order, node, n, h).unwrap()
    }
}

pub(crate) fn apply_node_stencil(vals: &[f64], order: usize, node: usize, n: usize, h: f64) -> f64 {
    let (s, c) = node_stencil(order, node, n, h);
    c.iter().enumerate().map(|(j, cj)| cj * vals[s + j]).sum()
}

struct InitState {
    u0: Vec<f64>,
    v0: Vec<f64>,
    th0: Vec<f64>,
    ps0: Vec<f64>,
    ph0: Vec<f64>,
    eta0: Vec<f64>,
    eta0_derived: bool,
}

/// Assembles the coupled `(theta_dot(0), phi(0))` initialization system:
/// constitutive entropy rows (or `theta_dot(0) = 0` rows when `eta0` is
/// derived) interleaved with the charge constraint at t = 0.
#[doc(hidden)]
pub fn init_system(scenario: &Scenario) -> Result<(Vec<(usize, usize, f64)>, Vec<f64>)> {
    let grid = scenario.grid;
    let n = grid.n_nodes;
    let h = grid.h();
    let m = scenario.material;
    let bp = m.beta_prime();
    let nodes = grid.nodes();

    let eval_x = |f: &XtFn| -> Vec<f64> { nodes.iter().map(|&x| f.eval(x, 0.0)).collect() };
    let u0 = eval_x(&scenario.initial.u0);
    let th0 = eval_x(&scenario.initial.theta0);
    let eta0_given: Option<Vec<f64>> = scenario.initial.eta0.as_ref().map(eval_x);

    if eta0_given.is_some() && m.c * bp == 0.0 {
        return Err(Error::Solver(
            "supplied eta0 needs c*beta' != 0 to determine theta_dot(0)".into(),
        ));
    }

    // unknowns per node: (psi, phi)
    let pdof = |i: usize, s: usize| 2 * i + s;
    let mut trip: Vec<(usize, usize, f64)> = Vec::new();
    let mut rhs = vec![0.0; 2 * n];

    let d2t0: Vec<f64> = (0..n).map(|i| apply_stencil(&th0, 2, i, n, h)).collect();
    let d3u0: Vec<f64> = (0..n).map(|i| apply_stencil(&u0, 3, i, n, h)).collect();

    // psi rows, with uniformly fourth-order stencils: any node-scale
    // unevenness of these rows' truncation near an end is amplified by the
    // 1/h coefficients of a natural Lambda row into a global first-order
    // tilt of the potential.
    for i in 0..n {
        let r = pdof(i, 0);
        match &eta0_given {
            Some(eta0) => {
                trip.push((r, pdof(i, 0), m.c * bp));
                let (s, c) = stencil4(2, i, n, h)?;
                for (j, cj) in c.iter().enumerate() {
                    trip.push((r, pdof(s + j, 1), -m.a47 * cj));
                }
                let (s1, c1) = stencil4(1, i, n, h)?;
                let d1u0_i: f64 = c1.iter().enumerate().map(|(j, cj)| cj * u0[s1 + j]).sum();
                rhs[r] = -m.rho * eta0[i] - m.a14 * d1u0_i - m.c * th0[i];
            }
            None => {
                trip.push((r, pdof(i, 0), 1.0));
                rhs[r] = 0.0;
            }
        }
    }

    // charge rows at t = 0 with the potential boundary pairs
    for i in 0..n {
        let r = pdof(i, 1);
        let is_end = i == 0 || i == n - 1;
        let is_inner = i == 1 || i == n - 2;
        if is_end || is_inner {
            let end = if i < n / 2 { End::Left } else { End::Right };
            let b = end_node(end, n);
            let nrm = end_normal(end);
            let x_b = if b == 0 { grid.x0 } else { grid.x1 };
            let est = |order: usize| end_stencil(order, b == 0, n, h).unwrap();
            let ev = |vals: &[f64], order: usize| -> f64 {
                let (s, c) = est(order);
                c.iter().enumerate().map(|(j, cj)| cj * vals[s + j]).sum()
            };
            if is_end {
                match pair_cond(scenario, end, Pair::Phi) {
                    PairCondition::Essential { value } => {
                        trip.push((r, pdof(b, 1), 1.0));
                        rhs[r] = value.eval(x_b, 0.0);
                    }
                    PairCondition::Natural { value } => {
                        // anchored, as in the step matrix
                        let a = anchor_node(end, n);
                        let mut add = |order: usize, slot: usize, coef: f64| {
                            let (st, c) = deriv_stencil(order, a, n, h).unwrap();
                            for (j, cj) in c.iter().enumerate() {
                                trip.push((r, pdof(st + j, slot), nrm * coef * cj));
                            }
                        };
                        add(1, 1, m.a33);
                        add(3, 1, -m.a77);
                        add(1, 0, m.a47 * m.beta);
                        let d2u0_a = apply_stencil(&u0, 2, a, n, h);
                        let d1t0_a = apply_stencil(&th0, 1, a, n, h);
                        let seg = anchor_segment(end, n);
                        let w = segment_weights(seg.len(), h);
                        let mut body = 0.0;
                        for (idx, &i) in seg.iter().enumerate() {
                            body += w[idx] * scenario.loads.g.eval(nodes[i], 0.0);
                        }
                        rhs[r] = value.eval(x_b, 0.0) - body
                            - nrm * ((m.a17 - m.a23) * d2u0_a + m.a47 * d1t0_a);
                    }
                }
            } else {
                match pair_cond(scenario, end, Pair::Dphi) {
                    PairCondition::Essential { value } => {
                        let (s, c) = est(1);
                        for (j, cj) in c.iter().enumerate() {
                            trip.push((r, pdof(s + j, 1), nrm * cj));
                        }
                        rhs[r] = value.eval(x_b, 0.0);
                    }
                    PairCondition::Natural { value } => {
                        // anchored, as in the step matrix
                        let a = anchor_node(end, n);
                        let seg = anchor_segment(end, n);
                        let w = segment_weights(seg.len(), h);
                        let seg_len = h * (seg.len() - 1) as f64;
                        let sig = match end {
                            End::Left => -1.0,
                            End::Right => 1.0,
                        };
                        // pointwise unknown at the anchor
                        trip.push((r, pdof(a, 0), -m.a47 * m.beta));
                        let mut add_at = |node: usize, order: usize, slot: usize, coef: f64| {
                            let (st, c) = deriv_stencil(order, node, n, h).unwrap();
                            for (j, cj) in c.iter().enumerate() {
                                trip.push((r, pdof(st + j, slot), coef * cj));
                            }
                        };
                        // Q(anchor): unknown phi part
                        add_at(a, 2, 1, m.a77);
                        // + sig * int sigma: unknown phi part
                        for (idx, &i) in seg.iter().enumerate() {
                            add_at(i, 1, 1, sig * w[idx] * m.a33);
                        }
                        // - sig * L * G(anchor): unknown parts
                        let cl = -sig * seg_len;
                        add_at(a, 1, 1, cl * m.a33);
                        add_at(a, 3, 1, -cl * m.a77);
                        add_at(a, 1, 0, cl * m.a47 * m.beta);

                        // known parts to the right-hand side
                        let mut known = -m.a17 * apply_stencil(&u0, 1, a, n, h) - m.a47 * th0[a];
                        for (idx, &i) in seg.iter().enumerate() {
                            known += sig * w[idx] * (-m.a23) * apply_stencil(&u0, 2, i, n, h);
                        }
                        known += cl
                            * ((m.a17 - m.a23) * apply_stencil(&u0, 2, a, n, h)
                                + m.a47 * apply_stencil(&th0, 1, a, n, h));
                        let mut data = 0.0;
                        for (idx, &i) in seg.iter().enumerate() {
                            data += w[idx]
                                * (nodes[i] - x_b).abs()
                                * scenario.loads.g.eval(nodes[i], 0.0);
                        }
                        rhs[r] = value.eval(x_b, 0.0) + data - known;
                    }
                }
            }
        } else {
            let mut add = |order: usize, slot: usize, coef: f64| {
                let (s, c) = deriv_stencil(order, i, n, h).unwrap();
                for (j, cj) in c.iter().enumerate() {
                    trip.push((r, pdof(s + j, slot), coef * cj));
                }
            };
            add(2, 1, m.a33);
            add(4, 1, -m.a77);
            add(2, 0, m.a47 * m.beta);
            rhs[r] = scenario.loads.g.eval(nodes[i], 0.0) - (m.a17 - m.a23) * d3u0[i]
                - m.a47 * d2t0[i];
        }
    }

    Ok((trip, rhs))
}

/// Consistent initialization: given `(u0, v0, theta0)` and either a supplied
/// `eta0` or the default `theta_dot(0) = 0`, solves the coupled system of
/// the constitutive entropy relation and the charge constraint for
/// `(theta_dot(0), phi(0))`.
fn initialize(scenario: &Scenario) -> Result<InitState> {
    let grid = scenario.grid;
    let n = grid.n_nodes;
    let h = grid.h();
    let m = scenario.material;
    let bp = m.beta_prime();
    let nodes = grid.nodes();
    let eval_x = |f: &XtFn| -> Vec<f64> { nodes.iter().map(|&x| f.eval(x, 0.0)).collect() };
    let u0 = eval_x(&scenario.initial.u0);
    let v0 = eval_x(&scenario.initial.v0);
    let th0 = eval_x(&scenario.initial.theta0);
    let eta0_given: Option<Vec<f64>> = scenario.initial.eta0.as_ref().map(eval_x);
    let pdof = |i: usize, s: usize| 2 * i + s;

    let (trip, rhs) = init_system(scenario)?;
    let mat = BandMatrix::from_triplets(2 * n, &trip)?;
    let lu = mat.lu().map_err(|e| match e {
        Error::RankDeficient(msg) => Error::RankDeficient(format!(
            "initialization system is rank deficient ({msg})"
        )),
        other => other,
    })?;
    let sol = lu.solve(&rhs);
    let ps0: Vec<f64> = (0..n).map(|i| sol[pdof(i, 0)]).collect();
    let ph0: Vec<f64> = (0..n).map(|i| sol[pdof(i, 1)]).collect();

    let (eta0, eta0_derived) = match eta0_given {
        Some(e) => (e, false),
        None => {
            let d1u0: Vec<f64> = (0..n).map(|i| apply_stencil(&u0, 1, i, n, h)).collect();
            let d2p0: Vec<f64> = (0..n).map(|i| apply_stencil(&ph0, 2, i, n, h)).collect();
            let e = (0..n)
                .map(|i| {
                    -(m.a14 * d1u0[i] - m.a47 * d2p0[i] + m.c * (th0[i] + bp * ps0[i])) / m.rho
                })
                .collect();
            (e, true)
        }
    };

    Ok(InitState {
        u0,
        v0,
        th0,
        ps0,
        ph0,
        eta0,
        eta0_derived,
    })
}

/// Solves the scenario: trapezoidal step of the first-order reduction in
/// `(u, v, theta, psi)` with `phi` algebraic, banded factorization reused
/// across steps. The discrete residual of every accepted step is checked
/// against `1e-10` times its row scale.
pub fn solve(scenario: &Scenario) -> Result<SolutionHistory> {
    let asm = assemble(scenario)?;
    let grid = scenario.grid;
    let n = grid.n_nodes;
    let m = scenario.material;
    let dt = scenario.time.dt;
    let n_steps = scenario.n_steps();
    let nodes = grid.nodes();

    let init = initialize(scenario)?;

    let mut x = vec![0.0; SLOTS * n];
    for i in 0..n {
        x[dof(i, U)] = init.u0[i];
        x[dof(i, V)] = init.v0[i];
        x[dof(i, TH)] = init.th0[i];
        x[dof(i, PS)] = init.ps0[i];
        x[dof(i, PH)] = init.ph0[i];
    }

    let mut states = vec![x.clone()];
    let mut max_step_residual = 0.0f64;

    // one implicit substep of the given operator from time t0
    let substep = |op: &StepOp,
                   x: &[f64],
                   t0: f64,
                   step_index: usize,
                   max_resid: &mut f64|
     -> Result<Vec<f64>> {
        let t1 = t0 + op.s;
        let th = op.theta;
        let mut rhs = op.a_old.matvec(x);
        for (r, kind) in asm.rhs_kind.iter().enumerate() {
            let contrib = match *kind {
                RowRhs::None => 0.0,
                RowRhs::MotionLoad(i) => {
                    op.s * m.rho
                        * (th * scenario.loads.f.eval(nodes[i], t1)
                            + (1.0 - th) * scenario.loads.f.eval(nodes[i], t0))
                }
                RowRhs::EnergyLoad(i) => {
                    -op.s * m.rho / m.t0
                        * (th * scenario.loads.h.eval(nodes[i], t1)
                            + (1.0 - th) * scenario.loads.h.eval(nodes[i], t0))
                }
                RowRhs::ChargeLoad(i) => scenario.loads.g.eval(nodes[i], t1),
                RowRhs::Bc(end, pair) => {
                    let x_b = match end {
                        End::Left => grid.x0,
                        End::Right => grid.x1,
                    };
                    pair_cond(scenario, end, pair).value().eval(x_b, t1)
                }
                RowRhs::BcP(end) => {
                    let x_b = match end {
                        End::Left => grid.x0,
                        End::Right => grid.x1,
                    };
                    let phat = pair_cond(scenario, end, Pair::U).value();
                    let seg = anchor_segment(end, n);
                    let w = segment_weights(seg.len(), grid.h());
                    let mut body = 0.0;
                    for (idx, &i) in seg.iter().enumerate() {
                        body += w[idx]
                            * m.rho
                            * (th * scenario.loads.f.eval(nodes[i], t1)
                                + (1.0 - th) * scenario.loads.f.eval(nodes[i], t0));
                    }
                    th * phat.eval(x_b, t1) + (1.0 - th) * phat.eval(x_b, t0) + body
                }
                RowRhs::BcLambda(end) => {
                    let x_b = match end {
                        End::Left => grid.x0,
                        End::Right => grid.x1,
                    };
                    let lhat = pair_cond(scenario, end, Pair::Phi).value();
                    let seg = anchor_segment(end, n);
                    let w = segment_weights(seg.len(), grid.h());
                    let mut body = 0.0;
                    for (idx, &i) in seg.iter().enumerate() {
                        body += w[idx] * scenario.loads.g.eval(nodes[i], t1);
                    }
                    lhat.eval(x_b, t1) - body
                }
                RowRhs::BcH(end) => {
                    let x_b = match end {
                        End::Left => grid.x0,
                        End::Right => grid.x1,
                    };
                    let hhat = pair_cond(scenario, end, Pair::Dphi).value();
                    let seg = anchor_segment(end, n);
                    let w = segment_weights(seg.len(), grid.h());
                    let mut body = 0.0;
                    for (idx, &i) in seg.iter().enumerate() {
                        body += w[idx] * (nodes[i] - x_b).abs() * scenario.loads.g.eval(nodes[i], t1);
                    }
                    hhat.eval(x_b, t1) + body
                }
            };
            rhs[r] += contrib / op.row_scale[r];
        }

        let x_new = op.lu.solve(&rhs);

        // discrete residual of the accepted substep
        let back = op.a_new.matvec(&x_new);
        let x_scale = x_new.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        for (r, (bi, ri)) in back.iter().zip(rhs.iter()).enumerate() {
            let scale = op.a_new.row_norm1(r) * x_scale + ri.abs() + f64::MIN_POSITIVE;
            let rel = (bi - ri).abs() / scale;
            *max_resid = (*max_resid).max(rel);
            if rel > 1e-10 {
                return Err(Error::Singular {
                    step: step_index,
                    msg: format!("step residual {rel:.3e} exceeds 1e-10 in row {r}"),
                });
            }
        }
        Ok(x_new)
    };

    for k in 0..n_steps {
        let t0 = k as f64 * dt;
        let x_new = if k < STARTUP_STEPS {
            let mid = substep(&asm.be, &x, t0, k + 1, &mut max_step_residual)?;
            substep(&asm.be, &mid, t0 + 0.5 * dt, k + 1, &mut max_step_residual)?
        } else {
            substep(&asm.cn, &x, t0, k + 1, &mut max_step_residual)?
        };
        states.push(x_new.clone());
        x = x_new;
    }

    // unpack into per-field arrays [(node, step)]
    let nt = n_steps + 1;
    let mut hist = SolutionHistory {
        grid,
        material: m,
        dt,
        times: (0..nt).map(|k| k as f64 * dt).collect(),
        u: Array2::zeros((n, nt)),
        v: Array2::zeros((n, nt)),
        theta: Array2::zeros((n, nt)),
        psi: Array2::zeros((n, nt)),
        phi: Array2::zeros((n, nt)),
        e: Array2::zeros((n, nt)),
        kappa: Array2::zeros((n, nt)),
        theta_x: Array2::zeros((n, nt)),
        e_field: Array2::zeros((n, nt)),
        v_field: Array2::zeros((n, nt)),
        tau: Array2::zeros((n, nt)),
        mu: Array2::zeros((n, nt)),
        sigma: Array2::zeros((n, nt)),
        q_pole: Array2::zeros((n, nt)),
        rho_eta: Array2::zeros((n, nt)),
        q: Array2::zeros((n, nt)),
        eta0: init.eta0,
        eta0_derived: init.eta0_derived,
        traction_left: TractionSeries::default(),
        traction_right: TractionSeries::default(),
        max_step_residual,
    };

    let h = grid.h();
    for (k, state) in states.iter().enumerate() {
        let u: Vec<f64> = (0..n).map(|i| state[dof(i, U)]).collect();
        let th: Vec<f64> = (0..n).map(|i| state[dof(i, TH)]).collect();
        let ps: Vec<f64> = (0..n).map(|i| state[dof(i, PS)]).collect();
        let ph: Vec<f64> = (0..n).map(|i| state[dof(i, PH)]).collect();
        for i in 0..n {
            hist.u[(i, k)] = state[dof(i, U)];
            hist.v[(i, k)] = state[dof(i, V)];
            hist.theta[(i, k)] = state[dof(i, TH)];
            hist.psi[(i, k)] = state[dof(i, PS)];
            hist.phi[(i, k)] = state[dof(i, PH)];

            let e = apply_stencil(&u, 1, i, n, h);
            let kappa = apply_stencil(&u, 2, i, n, h);
            let theta_x = apply_stencil(&th, 1, i, n, h);
            let e_field = -apply_stencil(&ph, 1, i, n, h);
            let v_field = -apply_stencil(&ph, 2, i, n, h);
            hist.e[(i, k)] = e;
            hist.kappa[(i, k)] = kappa;
            hist.theta_x[(i, k)] = theta_x;
            hist.e_field[(i, k)] = e_field;
            hist.v_field[(i, k)] = v_field;

            let dyn1 = crate::constitutive::evaluate_1d(
                &m, e, kappa, theta_x, e_field, v_field, th[i], ps[i],
            );
            hist.tau[(i, k)] = dyn1.tau;
            hist.mu[(i, k)] = dyn1.mu;
            hist.sigma[(i, k)] = dyn1.sigma;
            hist.q_pole[(i, k)] = dyn1.q_pole;
            hist.rho_eta[(i, k)] = dyn1.rho_eta;
            hist.q[(i, k)] = dyn1.q;
        }

    }

    // Endpoint tractions. Direct one-sided evaluation is used wherever the
    // value pair is natural (the condition row makes it exact); at essential
    // ends the stress-like tractions P and Lambda come from integrating the
    // corresponding balance from an interior anchor node, which avoids
    // third-differencing the computed fields across the boundary layer of
    // the collocation error.
    let u_ddot = {
        let mut a = Array2::zeros((n, nt));
        for i in 0..n {
            let row: Vec<f64> = (0..nt).map(|k| hist.v[(i, k)]).collect();
            let d = crate::convolution::diff_series(&row, dt);
            for (k, v) in d.iter().enumerate() {
                a[(i, k)] = *v;
            }
        }
        a
    };
    for k in 0..nt {
        let t = k as f64 * dt;
        let u: Vec<f64> = (0..n).map(|i| hist.u[(i, k)]).collect();
        let th: Vec<f64> = (0..n).map(|i| hist.theta[(i, k)]).collect();
        let ps: Vec<f64> = (0..n).map(|i| hist.psi[(i, k)]).collect();
        let ph: Vec<f64> = (0..n).map(|i| hist.phi[(i, k)]).collect();
        for end in [End::Left, End::Right] {
            let b = end_node(end, n);
            let nrm = end_normal(end);
            let d1u = apply_node_stencil(&u, 1, b, n, h);
            let d2u = apply_node_stencil(&u, 2, b, n, h);
            let d1p = apply_node_stencil(&ph, 1, b, n, h);
            let d2p = apply_node_stencil(&ph, 2, b, n, h);
            let d1t = apply_node_stencil(&th, 1, b, n, h);
            let a_th = th[b] + m.beta * ps[b];

            // interior anchor for the balance-integrated fluxes
            let anchor = anchor_node(end, n);
            let node_range: Vec<usize> = match end {
                End::Left => (0..=anchor).collect(),
                End::Right => (anchor..n).collect(),
            };
            let seg_trapz = |vals: &[f64]| -> f64 {
                let mut s = 0.0;
                for w in vals.windows(2) {
                    s += 0.5 * h * (w[0] + w[1]);
                }
                s
            };

            // F = tau - mu_x at the anchor (centered stencils), then
            // integrate the momentum balance to the endpoint
            let p = {
                let f_anchor = m.a11 * apply_stencil(&u, 1, anchor, n, h)
                    - m.a22 * apply_stencil(&u, 3, anchor, n, h)
                    + (m.a23 - m.a17) * apply_stencil(&ph, 2, anchor, n, h)
                    + m.a14 * (th[anchor] + m.beta * ps[anchor]);
                let integrand: Vec<f64> = node_range
                    .iter()
                    .map(|&i| {
                        m.rho * (u_ddot[(i, k)] - scenario.loads.f.eval(grid.node(i), t))
                    })
                    .collect();
                let seg = seg_trapz(&integrand);
                let f_end = match end {
                    End::Left => f_anchor - seg,
                    End::Right => f_anchor + seg,
                };
                nrm * f_end
            };

            // G = sigma - Q_x at the anchor; G' = g
            let lambda = {
                let g_anchor = (m.a17 - m.a23) * apply_stencil(&u, 2, anchor, n, h)
                    + m.a33 * apply_stencil(&ph, 1, anchor, n, h)
                    - m.a77 * apply_stencil(&ph, 3, anchor, n, h)
                    + m.a47
                        * (apply_stencil(&th, 1, anchor, n, h)
                            + m.beta * apply_stencil(&ps, 1, anchor, n, h));
                let integrand: Vec<f64> = node_range
                    .iter()
                    .map(|&i| scenario.loads.g.eval(grid.node(i), t))
                    .collect();
                let seg = seg_trapz(&integrand);
                let g_end = match end {
                    End::Left => g_anchor - seg,
                    End::Right => g_anchor + seg,
                };
                nrm * g_end
            };

            let set = TractionSet {
                p,
                r: m.a22 * d2u - m.a23 * d1p,
                lambda,
                h: -m.a17 * d1u + m.a77 * d2p - m.a47 * a_th,
                q: nrm * (-m.t0 * m.k * d1t),
            };
            let tr = match end {
                End::Left => &mut hist.traction_left,
                End::Right => &mut hist.traction_right,
            };
            tr.p.push(set.p);
            tr.r.push(set.r);
            tr.lambda.push(set.lambda);
            tr.h.push(set.h);
            tr.q.push(set.q);
        }
    }

    Ok(hist)
}

/// Classical stress `t = tau - mu_x` and electric displacement
/// `D = sigma - Q_x`, nodewise, through the constitutive expansion.
pub fn recover_classical(history: &SolutionHistory) -> (Array2<f64>, Array2<f64>) {
    let n = history.n_nodes();
    let nt = history.n_times();
    let h = history.grid.h();
    let m = history.material;
    let mut t_stress = Array2::zeros((n, nt));
    let mut d_field = Array2::zeros((n, nt));
    for k in 0..nt {
        let u: Vec<f64> = (0..n).map(|i| history.u[(i, k)]).collect();
        let th: Vec<f64> = (0..n).map(|i| history.theta[(i, k)]).collect();
        let ps: Vec<f64> = (0..n).map(|i| history.psi[(i, k)]).collect();
        let ph: Vec<f64> = (0..n).map(|i| history.phi[(i, k)]).collect();
        for i in 0..n {
            let a_th = th[i] + m.beta * ps[i];
            t_stress[(i, k)] = m.a11 * apply_node_stencil(&u, 1, i, n, h)
                - m.a22 * apply_node_stencil(&u, 3, i, n, h)
                + (m.a23 - m.a17) * apply_node_stencil(&ph, 2, i, n, h)
                + m.a14 * a_th;
            d_field[(i, k)] = (m.a17 - m.a23) * apply_node_stencil(&u, 2, i, n, h)
                + m.a33 * apply_node_stencil(&ph, 1, i, n, h)
                - m.a77 * apply_node_stencil(&ph, 3, i, n, h)
                + m.a47 * (apply_node_stencil(&th, 1, i, n, h) + m.beta * apply_node_stencil(&ps, 1, i, n, h));
        }
    }
    (t_stress, d_field)
}

/// Both surface identities relating raw boundary terms to the generalized
/// tractions, evaluated at grid-aligned times `(r, s)` for two histories on
/// the same grid. Returns `|lhs - rhs|` for each identity. The left sides
/// use the raw flux fields and their one-sided endpoint derivatives; the
/// right sides pair the generalized tractions (built here by the direct
/// endpoint formulas) with the conjugate boundary values.
pub fn boundary_identity_check(
    a: &SolutionHistory,
    b: &SolutionHistory,
    r: f64,
    s: f64,
) -> Result<(f64, f64)> {
    if a.grid != b.grid {
        return Err(Error::Shape("histories on different grids".into()));
    }
    let kr = a.step_of(r)?;
    let ks = b.step_of(s)?;
    let n = a.n_nodes();
    let h = a.grid.h();
    let m = a.material;
    let (t_stress_a, d_field_a) = recover_classical(a);

    let mut lhs1 = 0.0;
    let mut rhs1 = 0.0;
    let mut lhs2 = 0.0;
    let mut rhs2 = 0.0;
    for end in [End::Left, End::Right] {
        let bn = end_node(end, n);
        let nrm = end_normal(end);
        let ub: Vec<f64> = (0..n).map(|i| b.u[(i, ks)]).collect();
        let phb: Vec<f64> = (0..n).map(|i| b.phi[(i, ks)]).collect();
        let u_x = apply_node_stencil(&ub, 1, bn, n, h);
        let phi_x = apply_node_stencil(&phb, 1, bn, n, h);

        // direct-formula tractions of process a at this end
        let ua: Vec<f64> = (0..n).map(|i| a.u[(i, kr)]).collect();
        let pha: Vec<f64> = (0..n).map(|i| a.phi[(i, kr)]).collect();
        let tha: Vec<f64> = (0..n).map(|i| a.theta[(i, kr)]).collect();
        let psa: Vec<f64> = (0..n).map(|i| a.psi[(i, kr)]).collect();
        let a_th = tha[bn] + m.beta * psa[bn];
        let p = nrm
            * (m.a11 * apply_node_stencil(&ua, 1, bn, n, h)
                - m.a22 * apply_node_stencil(&ua, 3, bn, n, h)
                + (m.a23 - m.a17) * apply_node_stencil(&pha, 2, bn, n, h)
                + m.a14 * a_th);
        let rr = m.a22 * apply_node_stencil(&ua, 2, bn, n, h)
            - m.a23 * apply_node_stencil(&pha, 1, bn, n, h);
        let lam = nrm
            * ((m.a17 - m.a23) * apply_node_stencil(&ua, 2, bn, n, h)
                + m.a33 * apply_node_stencil(&pha, 1, bn, n, h)
                - m.a77 * apply_node_stencil(&pha, 3, bn, n, h)
                + m.a47
                    * (apply_node_stencil(&tha, 1, bn, n, h)
                        + m.beta * apply_node_stencil(&psa, 1, bn, n, h)));
        let hh = -m.a17 * apply_node_stencil(&ua, 1, bn, n, h)
            + m.a77 * apply_node_stencil(&pha, 2, bn, n, h)
            - m.a47 * a_th;

        // raw-field side: classical flux times value plus the higher-grade
        // flux times the raw gradient, all under the outward normal
        lhs1 += nrm * (t_stress_a[(bn, kr)] * ub[bn] + rr * u_x);
        lhs2 += nrm * (d_field_a[(bn, kr)] * phb[bn] + hh * phi_x);

        rhs1 += p * ub[bn] + rr * (nrm * u_x);
        rhs2 += lam * phb[bn] + hh * (nrm * phi_x);
    }
    Ok(((lhs1 - rhs1).abs(), (lhs2 - rhs2).abs()))
}

/// Max residual and a magnitude scale for one line of the convolution-form
/// field equations.
#[derive(Debug, Clone)]
pub struct LineResidual {
    pub name: &'static str,
    pub max_residual: f64,
    pub scale: f64,
}

/// Evaluates every line of the convolution reformulation on a computed
/// history (the numerical content of the equivalence theorem): divergence
/// terms through the same second-order operator expansion the solver uses,
/// time convolutions by trapezoid.
pub fn convolution_form_residual(
    history: &SolutionHistory,
    scenario: &Scenario,
) -> Result<Vec<LineResidual>> {
    let n = history.n_nodes();
    let nt = history.n_times();
    let dt = history.dt;
    let grid = history.grid;
    let h = grid.h();
    let m = history.material;
    let bp = m.beta_prime();
    let nodes = grid.nodes();

    let xi: Vec<f64> = (0..nt).map(|k| k as f64 * dt).collect();
    let zeta: Vec<f64> = (0..nt).map(|k| (-(k as f64) * dt / m.beta).exp() / m.beta).collect();
    let chi: Vec<f64> = (0..nt).map(|k| (-(k as f64) * dt / bp).exp() / bp).collect();

    // spatial operator values per node and time
    let mut motion_sp = Array2::<f64>::zeros((n, nt));
    let mut charge_sp = Array2::<f64>::zeros((n, nt));
    let mut q_div = Array2::<f64>::zeros((n, nt));
    for k in 0..nt {
        let u: Vec<f64> = (0..n).map(|i| history.u[(i, k)]).collect();
        let th: Vec<f64> = (0..n).map(|i| history.theta[(i, k)]).collect();
        let ps: Vec<f64> = (0..n).map(|i| history.psi[(i, k)]).collect();
        let ph: Vec<f64> = (0..n).map(|i| history.phi[(i, k)]).collect();
        for i in 0..n {
            motion_sp[(i, k)] = m.a11 * apply_stencil(&u, 2, i, n, h)
                - m.a22 * apply_stencil(&u, 4, i, n, h)
                + (m.a23 - m.a17) * apply_stencil(&ph, 3, i, n, h)
                + m.a14 * (apply_stencil(&th, 1, i, n, h) + m.beta * apply_stencil(&ps, 1, i, n, h));
            charge_sp[(i, k)] = (m.a17 - m.a23) * apply_stencil(&u, 3, i, n, h)
                + m.a33 * apply_stencil(&ph, 2, i, n, h)
                - m.a77 * apply_stencil(&ph, 4, i, n, h)
                + m.a47 * (apply_stencil(&th, 2, i, n, h) + m.beta * apply_stencil(&ps, 2, i, n, h));
            q_div[(i, k)] = -m.t0 * m.k * apply_stencil(&th, 2, i, n, h);
        }
    }

    let series = |arr: &Array2<f64>, i: usize| -> Vec<f64> {
        (0..nt).map(|k| arr[(i, k)]).collect()
    };

    let mut lines: Vec<LineResidual> = vec![
        LineResidual { name: "motion", max_residual: 0.0, scale: 0.0 },
        LineResidual { name: "charge", max_residual: 0.0, scale: 0.0 },
        LineResidual { name: "energy", max_residual: 0.0, scale: 0.0 },
        LineResidual { name: "stress", max_residual: 0.0, scale: 0.0 },
        LineResidual { name: "hyperstress", max_residual: 0.0, scale: 0.0 },
        LineResidual { name: "electric", max_residual: 0.0, scale: 0.0 },
        LineResidual { name: "quadrupole", max_residual: 0.0, scale: 0.0 },
        LineResidual { name: "entropy", max_residual: 0.0, scale: 0.0 },
        LineResidual { name: "heat-flux", max_residual: 0.0, scale: 0.0 },
    ];

    for i in 0..n {
        let x = nodes[i];
        let th0 = history.theta[(i, 0)];
        let u0 = history.u[(i, 0)];
        let v0 = history.v[(i, 0)];

        let f_series: Vec<f64> = (0..nt).map(|k| scenario.loads.f.eval(x, xi[k])).collect();
        let g_series: Vec<f64> = (0..nt).map(|k| scenario.loads.g.eval(x, xi[k])).collect();
        let h_series: Vec<f64> = (0..nt).map(|k| scenario.loads.h.eval(x, xi[k])).collect();

        // motion: xi * (div tau - div div mu) - rho u + F
        let conv = convolve_samples(&xi, &series(&motion_sp, i), dt);
        let xf = convolve_samples(&xi, &f_series, dt);
        for k in 0..nt {
            let cal_f = m.rho * xf[k] + m.rho * v0 * xi[k] + m.rho * u0;
            let res = conv[k] - m.rho * history.u[(i, k)] + cal_f;
            lines[0].max_residual = lines[0].max_residual.max(res.abs());
            lines[0].scale = lines[0].scale.max((m.rho * history.u[(i, k)]).abs().max(cal_f.abs()));
        }

        // charge: xi * (div sigma - div div Q - g)
        let cmg: Vec<f64> = (0..nt).map(|k| charge_sp[(i, k)] - g_series[k]).collect();
        let conv = convolve_samples(&xi, &cmg, dt);
        for (k, v) in conv.iter().enumerate() {
            lines[1].max_residual = lines[1].max_residual.max(v.abs());
            lines[1].scale = lines[1].scale.max((charge_sp[(i, k)]).abs() * xi[nt - 1]);
        }

        // energy: rho T0 eta + l * div q - H
        let lq = cumtrapz(&series(&q_div, i), dt);
        let rh: Vec<f64> = h_series.iter().map(|v| m.rho * v).collect();
        let lh = cumtrapz(&rh, dt);
        for k in 0..nt {
            let cal_h = m.rho * m.t0 * history.eta0[i] + lh[k];
            let res = m.t0 * history.rho_eta[(i, k)] + lq[k] - cal_h;
            lines[2].max_residual = lines[2].max_residual.max(res.abs());
            lines[2].scale = lines[2]
                .scale
                .max((m.t0 * history.rho_eta[(i, k)]).abs().max(cal_h.abs()));
        }

        // pointwise constitutive lines
        let tau_gap: Vec<f64> = (0..nt)
            .map(|k| history.tau[(i, k)] - (m.a11 * history.e[(i, k)] + m.a17 * history.v_field[(i, k)]))
            .collect();
        let conv = convolve_samples(&zeta, &tau_gap, dt);
        for k in 0..nt {
            let cal_l = m.a14 * th0 * (-xi[k] / m.beta).exp();
            let res = conv[k] - m.a14 * history.theta[(i, k)] + cal_l;
            lines[3].max_residual = lines[3].max_residual.max(res.abs());
            lines[3].scale = lines[3]
                .scale
                .max((m.a14 * history.theta[(i, k)]).abs().max(conv[k].abs()));
        }

        let mu_gap: Vec<f64> = (0..nt)
            .map(|k| history.mu[(i, k)] - (m.a22 * history.kappa[(i, k)] + m.a23 * history.e_field[(i, k)]))
            .collect();
        let conv = convolve_samples(&zeta, &mu_gap, dt);
        for (k, v) in conv.iter().enumerate() {
            lines[4].max_residual = lines[4].max_residual.max(v.abs());
            lines[4].scale = lines[4].scale.max(history.mu[(i, k)].abs());
        }

        let sigma_gap: Vec<f64> = (0..nt)
            .map(|k| {
                history.sigma[(i, k)]
                    - (-(m.a23 * history.kappa[(i, k)] + m.a33 * history.e_field[(i, k)]))
            })
            .collect();
        let conv = convolve_samples(&zeta, &sigma_gap, dt);
        for (k, v) in conv.iter().enumerate() {
            lines[5].max_residual = lines[5].max_residual.max(v.abs());
            lines[5].scale = lines[5].scale.max(history.sigma[(i, k)].abs());
        }

        let q_gap: Vec<f64> = (0..nt)
            .map(|k| {
                history.q_pole[(i, k)]
                    - (-(m.a17 * history.e[(i, k)] + m.a77 * history.v_field[(i, k)]))
            })
            .collect();
        let conv = convolve_samples(&zeta, &q_gap, dt);
        for k in 0..nt {
            let cal_m = m.a47 * th0 * (-xi[k] / m.beta).exp();
            let res = -conv[k] - m.a47 * history.theta[(i, k)] + cal_m;
            lines[6].max_residual = lines[6].max_residual.max(res.abs());
            lines[6].scale = lines[6]
                .scale
                .max((m.a47 * history.theta[(i, k)]).abs().max(conv[k].abs()));
        }

        let eta_gap: Vec<f64> = (0..nt)
            .map(|k| {
                history.rho_eta[(i, k)]
                    - (-(m.a14 * history.e[(i, k)] + m.a47 * history.v_field[(i, k)]))
            })
            .collect();
        let conv = convolve_samples(&chi, &eta_gap, dt);
        for k in 0..nt {
            let cal_r = m.c * th0 * (-xi[k] / bp).exp();
            let res = -conv[k] - m.c * history.theta[(i, k)] + cal_r;
            lines[7].max_residual = lines[7].max_residual.max(res.abs());
            lines[7].scale = lines[7]
                .scale
                .max((m.c * history.theta[(i, k)]).abs().max(cal_r.abs()));
        }

        let flux_gap: Vec<f64> = (0..nt)
            .map(|k| history.q[(i, k)] - (-m.t0 * m.k * history.theta_x[(i, k)]))
            .collect();
        let conv = cumtrapz(&flux_gap, dt);
        for (k, v) in conv.iter().enumerate() {
            lines[8].max_residual = lines[8].max_residual.max(v.abs() / m.t0);
            lines[8].scale = lines[8].scale.max(history.q[(i, k)].abs());
        }
    }

    Ok(lines)
}

/// Max nodal errors of `(u, theta, phi)` against exact field evaluations,
/// over all nodes and times.
pub fn max_errors_against(
    history: &SolutionHistory,
    exact_u: impl Fn(f64, f64) -> f64,
    exact_theta: impl Fn(f64, f64) -> f64,
    exact_phi: impl Fn(f64, f64) -> f64,
) -> (f64, f64, f64) {
    let n = history.n_nodes();
    let mut eu = 0.0f64;
    let mut eth = 0.0f64;
    let mut eph = 0.0f64;
    for (k, &t) in history.times.iter().enumerate() {
        for i in 0..n {
            let x = history.grid.node(i);
            eu = eu.max((history.u[(i, k)] - exact_u(x, t)).abs());
            eth = eth.max((history.theta[(i, k)] - exact_theta(x, t)).abs());
            eph = eph.max((history.phi[(i, k)] - exact_phi(x, t)).abs());
        }
    }
    (eu, eth, eph)
}

/// Least-squares observed order from errors at successively halved
/// resolutions.
pub fn observed_order(errors: &[f64]) -> f64 {
    let m = errors.len();
    if m < 2 {
        return f64::NAN;
    }
    // regress log2(err) on level index; slope is -order
    let xs: Vec<f64> = (0..m).map(|i| i as f64).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.max(1e-300).log2()).collect();
    let xm = xs.iter().sum::<f64>() / m as f64;
    let ym = ys.iter().sum::<f64>() / m as f64;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let den: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    -num / den
}

/// Space-time integral of the dissipation functional plus the state term:
/// the discrete analogue of the uniqueness energy. Returns the series on
/// the history's time grid.
pub fn uniqueness_g_series(history: &SolutionHistory) -> Vec<f64> {
    let n = history.n_nodes();
    let nt = history.n_times();
    let m = history.material;
    let dt = history.dt;
    let grid = history.grid;

    // Theta_x(t) = (l * theta_x)(t), per node
    let mut big_theta_x = Array2::<f64>::zeros((n, nt));
    for i in 0..n {
        let row: Vec<f64> = (0..nt).map(|k| history.theta_x[(i, k)]).collect();
        let c = cumtrapz(&row, dt);
        for (k, v) in c.iter().enumerate() {
            big_theta_x[(i, k)] = *v;
        }
    }

    let mut p_integrals = Vec::with_capacity(nt);
    for k in 0..nt {
        let vals: Vec<f64> = (0..n)
            .map(|i| {
                m.gamma / m.beta * history.theta[(i, k)].powi(2)
                    + m.k * big_theta_x[(i, k)].powi(2)
            })
            .collect();
        p_integrals.push(trapz(&grid, &vals));
    }
    let accumulated = cumtrapz(&p_integrals, dt);

    (0..nt)
        .map(|k| {
            let vals: Vec<f64> = (0..n)
                .map(|i| {
                    m.rho * history.u[(i, k)].powi(2)
                        + m.beta * m.k * big_theta_x[(i, k)].powi(2)
                })
                .collect();
            accumulated[k] + trapz(&grid, &vals)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manufactured::{
        manufactured_source, mixed_kinds, reference_material, ExactFields, ManufacturedField,
        PairKind, SpaceFn, TimeFn,
    };
    use crate::scenario::{BoundarySpec, EndpointBc, InitialSpec, Loads, TimeParams};
    use approx::assert_abs_diff_eq;

    fn zero_scenario(n: usize) -> Scenario {
        Scenario {
            grid: Grid1D::new(n, 0.0, 1.0).unwrap(),
            material: reference_material(),
            loads: Loads::zero(),
            initial: InitialSpec::zero(),
            boundary: BoundarySpec {
                left: EndpointBc::clamped_zero(),
                right: EndpointBc::clamped_zero(),
            },
            time: TimeParams { t_final: 0.5, dt: 0.025 },
        }
    }

    #[test]
    fn null_data_gives_identically_zero_history() {
        let hist = solve(&zero_scenario(21)).unwrap();
        let worst = [&hist.u, &hist.theta, &hist.phi, &hist.v, &hist.psi]
            .iter()
            .flat_map(|a| a.iter())
            .fold(0.0f64, |a, v| a.max(v.abs()));
        assert!(worst <= 1e-14, "null data produced {worst}");
    }

    #[test]
    fn s4_empty_reports_rank_deficiency() {
        let mut sc = zero_scenario(21);
        sc.boundary.left.phi = PairCondition::natural(XtFn::zero());
        sc.boundary.right.phi = PairCondition::natural(XtFn::zero());
        match assemble(&sc) {
            Err(Error::RankDeficient(msg)) => assert!(msg.contains("S4"), "{msg}"),
            Err(other) => panic!("expected rank deficiency, got {other:?}"),
            Ok(_) => panic!("expected rank deficiency, got a factorization"),
        }
    }

    #[test]
    fn decoupled_material_gives_block_diagonal_operator() {
        let mut sc = zero_scenario(21);
        sc.material.a17 = 0.0;
        sc.material.a23 = 0.0;
        sc.material.a14 = 0.0;
        sc.material.a47 = 0.0;
        let asm = assemble(&sc).unwrap();
        let n = sc.grid.n_nodes;
        for i in 2..n - 2 {
            let r = dof(i, V);
            for j in 0..n {
                assert_eq!(asm.cn.a_new.get(r, dof(j, PH)), 0.0);
                assert_eq!(asm.cn.a_new.get(r, dof(j, TH)), 0.0);
                assert_eq!(asm.cn.a_new.get(r, dof(j, PS)), 0.0);
            }
            let r = dof(i, PH);
            for j in 0..n {
                assert_eq!(asm.cn.a_new.get(r, dof(j, U)), 0.0);
                assert_eq!(asm.cn.a_new.get(r, dof(j, TH)), 0.0);
            }
        }
    }

    #[test]
    fn constant_fields_zero_interior_residual() {
        // natural BCs; operator applied to constants must vanish on interior rows
        let mut sc = zero_scenario(21);
        let (mut l, mut r) = mixed_kinds();
        l[0] = PairKind::Natural;
        r[0] = PairKind::Natural;
        let ex = ExactFields {
            u: ManufacturedField::new(vec![(
                2.0,
                SpaceFn::Poly(vec![1.0]),
                TimeFn::Poly(vec![1.0]),
            )]),
            theta: ManufacturedField::new(vec![(
                -1.0,
                SpaceFn::Poly(vec![1.0]),
                TimeFn::Poly(vec![1.0]),
            )]),
            phi: ManufacturedField::new(vec![(
                0.5,
                SpaceFn::Poly(vec![1.0]),
                TimeFn::Poly(vec![1.0]),
            )]),
        };
        sc = manufactured_source(&ex, sc.material, sc.grid, l, r, sc.time);
        let asm = assemble(&sc).unwrap();
        let n = sc.grid.n_nodes;
        // steady constant state: v = psi = 0
        let mut x = vec![0.0; SLOTS * n];
        for i in 0..n {
            x[dof(i, U)] = 2.0;
            x[dof(i, TH)] = -1.0;
            x[dof(i, PH)] = 0.5;
        }
        let y_new = asm.cn.a_new.matvec(&x);
        let y_old = asm.cn.a_old.matvec(&x);
        for i in 2..n - 2 {
            for slot in [V, PS, PH] {
                let r = dof(i, slot);
                // interior equation rows: residual of the constant state
                if matches!(asm.rhs_kind[r], RowRhs::None) {
                    continue;
                }
                let res = y_new[r] - y_old[r];
                assert!(
                    res.abs() <= 1e-10,
                    "interior row {r} residual {res} for constant state"
                );
            }
        }
    }

    #[test]
    fn operator_blocks_self_adjoint_on_interior_vectors() {
        let sc = zero_scenario(31);
        let asm = assemble(&sc).unwrap();
        let n = sc.grid.n_nodes;
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for block in [SpatialBlock::MotionU, SpatialBlock::ChargePhi] {
            let mut x = vec![0.0; n];
            let mut y = vec![0.0; n];
            for i in 5..n - 5 {
                x[i] = rng.gen_range(-1.0..1.0);
                y[i] = rng.gen_range(-1.0..1.0);
            }
            let lx = asm.apply_block(block, &x);
            let ly = asm.apply_block(block, &y);
            let lxy: f64 = lx.iter().zip(&y).map(|(a, b)| a * b).sum();
            let xly: f64 = x.iter().zip(&ly).map(|(a, b)| a * b).sum();
            let scale = lxy.abs().max(xly.abs()).max(1.0);
            assert!(
                ((lxy - xly) / scale).abs() <= 1e-12,
                "block not self-adjoint: {lxy} vs {xly}"
            );
        }
    }

    fn mms_scenario(n: usize, t_final: f64) -> (Scenario, ExactFields) {
        let ex = ExactFields::trig();
        let grid = Grid1D::new(n, 0.0, 1.0).unwrap();
        let dt = t_final / (n - 1) as f64;
        let (l, r) = mixed_kinds();
        let sc = manufactured_source(
            &ex,
            reference_material(),
            grid,
            l,
            r,
            TimeParams { t_final, dt },
        );
        (sc, ex)
    }

    #[test]
    fn mms_converges_at_second_order() {
        let mut errs_u = Vec::new();
        let mut errs_th = Vec::new();
        let mut errs_ph = Vec::new();
        for n in [21, 41, 81] {
            let (sc, ex) = mms_scenario(n, 1.0);
            let hist = solve(&sc).unwrap();
            let (eu, eth, eph) = max_errors_against(
                &hist,
                |x, t| ex.u.eval(x, t),
                |x, t| ex.theta.eval(x, t),
                |x, t| ex.phi.eval(x, t),
            );
            errs_u.push(eu);
            errs_th.push(eth);
            errs_ph.push(eph);
        }
        for (name, errs) in [("u", &errs_u), ("theta", &errs_th), ("phi", &errs_ph)] {
            let order = observed_order(errs);
            assert!(
                (1.7..=2.4).contains(&order),
                "{name} errors {errs:?} observed order {order}"
            );
        }
    }

    #[test]
    fn solution_map_is_linear() {
        let (sc1, _) = mms_scenario(21, 0.5);
        // second data set: same selectors, different loads/values
        let ex2 = ExactFields::pair_b();
        let (l, r) = mixed_kinds();
        let sc2 = manufactured_source(
            &ex2,
            reference_material(),
            sc1.grid,
            l,
            r,
            sc1.time,
        );
        let h1 = solve(&sc1).unwrap();
        let h2 = solve(&sc2).unwrap();

        // summed data
        let add = |a: &XtFn, b: &XtFn| -> XtFn {
            let (a, b) = (a.clone(), b.clone());
            XtFn::from_closure(move |x, t| a.eval(x, t) + b.eval(x, t))
        };
        let add_pair = |a: &PairCondition, b: &PairCondition| -> PairCondition {
            match (a, b) {
                (PairCondition::Essential { value: va }, PairCondition::Essential { value: vb }) => {
                    PairCondition::essential(add(va, vb))
                }
                (PairCondition::Natural { value: va }, PairCondition::Natural { value: vb }) => {
                    PairCondition::natural(add(va, vb))
                }
                _ => panic!("selectors must match for superposition"),
            }
        };
        let mut sum = sc1.clone();
        sum.loads.f = add(&sc1.loads.f, &sc2.loads.f);
        sum.loads.g = add(&sc1.loads.g, &sc2.loads.g);
        sum.loads.h = add(&sc1.loads.h, &sc2.loads.h);
        sum.initial.u0 = add(&sc1.initial.u0, &sc2.initial.u0);
        sum.initial.v0 = add(&sc1.initial.v0, &sc2.initial.v0);
        sum.initial.theta0 = add(&sc1.initial.theta0, &sc2.initial.theta0);
        sum.initial.eta0 = Some(add(
            sc1.initial.eta0.as_ref().unwrap(),
            sc2.initial.eta0.as_ref().unwrap(),
        ));
        for pair in 0..5 {
            let get = |bc: &EndpointBc, p: usize| -> PairCondition {
                match p {
                    0 => bc.u.clone(),
                    1 => bc.du.clone(),
                    2 => bc.theta.clone(),
                    3 => bc.phi.clone(),
                    _ => bc.dphi.clone(),
                }
            };
            let set = |bc: &mut EndpointBc, p: usize, c: PairCondition| match p {
                0 => bc.u = c,
                1 => bc.du = c,
                2 => bc.theta = c,
                3 => bc.phi = c,
                _ => bc.dphi = c,
            };
            let l = add_pair(&get(&sc1.boundary.left, pair), &get(&sc2.boundary.left, pair));
            set(&mut sum.boundary.left, pair, l);
            let r = add_pair(&get(&sc1.boundary.right, pair), &get(&sc2.boundary.right, pair));
            set(&mut sum.boundary.right, pair, r);
        }

        let hsum = solve(&sum).unwrap();
        let scale = hsum.u.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1.0);
        let mut worst = 0.0f64;
        for k in 0..hsum.n_times() {
            for i in 0..hsum.n_nodes() {
                worst = worst.max(
                    (hsum.u[(i, k)] - h1.u[(i, k)] - h2.u[(i, k)]).abs()
                        .max((hsum.theta[(i, k)] - h1.theta[(i, k)] - h2.theta[(i, k)]).abs())
                        .max((hsum.phi[(i, k)] - h1.phi[(i, k)] - h2.phi[(i, k)]).abs()),
                );
            }
        }
        assert!(worst / scale <= 1e-10, "superposition residual {worst}");
    }

    #[test]
    fn step_residuals_are_tiny() {
        let (sc, _) = mms_scenario(41, 0.5);
        let hist = solve(&sc).unwrap();
        assert!(hist.max_step_residual <= 1e-12, "{}", hist.max_step_residual);
    }

    #[test]
    fn tractions_match_analytic_values_at_second_order() {
        let mut errs = Vec::new();
        for n in [21, 41, 81] {
            let (sc, ex) = mms_scenario(n, 0.5);
            let hist = solve(&sc).unwrap();
            let m = sc.material;
            let t = 0.5;
            let k = hist.step_of(t).unwrap();
            // left end, normal -1
            let x = 0.0;
            let p_exact = -1.0
                * (m.a11 * ex.u.deriv(1, 0, x, t) - m.a22 * ex.u.deriv(3, 0, x, t)
                    + (m.a23 - m.a17) * ex.phi.deriv(2, 0, x, t)
                    + m.a14 * (ex.theta.eval(x, t) + m.beta * ex.theta.deriv(0, 1, x, t)));
            let r_exact = m.a22 * ex.u.deriv(2, 0, x, t) - m.a23 * ex.phi.deriv(1, 0, x, t);
            let h_exact = -m.a17 * ex.u.deriv(1, 0, x, t) + m.a77 * ex.phi.deriv(2, 0, x, t)
                - m.a47 * (ex.theta.eval(x, t) + m.beta * ex.theta.deriv(0, 1, x, t));
            let set = hist.traction(true, k);
            errs.push(
                (set.p - p_exact)
                    .abs()
                    .max((set.r - r_exact).abs())
                    .max((set.h - h_exact).abs()),
            );
        }
        let order = observed_order(&errs);
        assert!(order > 1.6, "traction errors {errs:?} order {order}");
    }

    #[test]
    fn traction_zero_solution_and_higher_grade_limit() {
        let hist = solve(&zero_scenario(21)).unwrap();
        let (l, r) = tractions(&hist, 0.25).unwrap();
        for set in [l, r] {
            assert_eq!(set.p, 0.0);
            assert_eq!(set.r, 0.0);
            assert_eq!(set.lambda, 0.0);
            assert_eq!(set.h, 0.0);
            assert_eq!(set.q, 0.0);
        }
        assert!(tractions(&hist, 99.0).is_err());
    }

    #[test]
    fn recover_classical_limits() {
        // mu, Q identically zero when a22 = a23 = a17 = a77 = a47 = 0
        let mut sc = zero_scenario(21);
        sc.material.a22 = 0.0;
        sc.material.a23 = 0.0;
        sc.material.a17 = 0.0;
        sc.material.a77 = 0.0;
        sc.material.a47 = 0.0;
        sc.initial.u0 = XtFn::from_expr("x*(1-x)").unwrap();
        // keep data compatible at the ends: u(0)=u(1)=0 fits clamped_zero
        let hist = solve(&sc).unwrap();
        let (t_stress, d_field) = recover_classical(&hist);
        // interior nodes share stencils with the stored fluxes: exact match;
        // endpoints use the higher-order one-sided closure, so compare there
        // only at t = 0 where the quadratic initial field makes both exact
        let n = hist.n_nodes();
        for k in 0..hist.n_times() {
            for i in 1..n - 1 {
                assert_abs_diff_eq!(t_stress[(i, k)], hist.tau[(i, k)], epsilon = 1e-9);
                assert_abs_diff_eq!(d_field[(i, k)], hist.sigma[(i, k)], epsilon = 1e-9);
            }
        }
        for i in [0, n - 1] {
            assert_abs_diff_eq!(t_stress[(i, 0)], hist.tau[(i, 0)], epsilon = 1e-9);
            assert_abs_diff_eq!(d_field[(i, 0)], hist.sigma[(i, 0)], epsilon = 1e-9);
        }
    }

    #[test]
    fn boundary_identities_hold() {
        let (sc, _) = mms_scenario(21, 0.5);
        let hist = solve(&sc).unwrap();
        let (r1, r2) = boundary_identity_check(&hist, &hist, 0.25, 0.25).unwrap();
        assert!(r1 <= 1e-10, "identity 1 residual {r1}");
        assert!(r2 <= 1e-10, "identity 2 residual {r2}");

        let zero = solve(&zero_scenario(21)).unwrap();
        let (z1, z2) = boundary_identity_check(&zero, &zero, 0.25, 0.25).unwrap();
        assert_eq!(z1, 0.0);
        assert_eq!(z2, 0.0);
    }

    #[test]
    fn convolution_form_residuals_converge() {
        let mut residuals: Vec<Vec<f64>> = Vec::new();
        for n in [21, 41] {
            let (sc, _) = mms_scenario(n, 0.5);
            let hist = solve(&sc).unwrap();
            let lines = convolution_form_residual(&hist, &sc).unwrap();
            residuals.push(lines.iter().map(|l| l.max_residual).collect());
        }
        for line in 0..9 {
            let (c, f) = (residuals[0][line], residuals[1][line]);
            let floor = 1e-12;
            if c <= floor && f <= floor {
                continue; // identically-satisfied line
            }
            let order = (c / f).log2();
            assert!(order > 1.6, "line {line}: {c} -> {f}, order {order}");
        }
    }

    #[test]
    fn pure_heat_front_speed_bounded_by_telegraph_speed() {
        // decoupled: only theta evolves; c beta' < 0 gives wave speed
        // v = sqrt(k / (|c| beta'))
        let mut m = reference_material();
        m.a14 = 0.0;
        m.a47 = 0.0;
        m.a17 = 0.0;
        m.a23 = 0.0;
        m.k = 0.5; // v = sqrt(0.5 / (1.0 * 0.5)) = 1
        let n = 201;
        let grid = Grid1D::new(n, 0.0, 1.0).unwrap();
        let sc = Scenario {
            grid,
            material: m,
            loads: Loads::zero(),
            initial: InitialSpec {
                u0: XtFn::zero(),
                v0: XtFn::zero(),
                theta0: XtFn::from_closure(|x, _| {
                    let s = (x - 0.5) / 0.1;
                    if s.abs() < 1.0 {
                        (-1.0 / (1.0 - s * s)).exp() * std::f64::consts::E
                    } else {
                        0.0
                    }
                }),
                eta0: None,
            },
            boundary: BoundarySpec {
                left: EndpointBc::clamped_zero(),
                right: EndpointBc::clamped_zero(),
            },
            time: TimeParams { t_final: 0.2, dt: 0.001 },
        };
        let hist = solve(&sc).unwrap();
        let k_last = hist.n_times() - 1;
        let peak = (0..n)
            .map(|i| hist.theta[(i, k_last)].abs())
            .fold(0.0f64, f64::max);
        // support [0.4, 0.6], speed 1, t = 0.2 -> causal region [0.2, 0.8];
        // allow a margin for the implicit scheme's exponentially small tails
        let margin = 0.06;
        let mut outside = 0.0f64;
        for i in 0..n {
            let x = grid.node(i);
            if x < 0.4 - 0.2 - margin || x > 0.6 + 0.2 + margin {
                outside = outside.max(hist.theta[(i, k_last)].abs());
            }
        }
        assert!(
            outside <= 1e-3 * peak.max(1e-30),
            "leakage {outside} vs peak {peak}"
        );
    }

    #[test]
    fn uniqueness_g_zero_for_null_data() {
        let hist = solve(&zero_scenario(21)).unwrap();
        for g in uniqueness_g_series(&hist) {
            assert!(g.abs() <= 1e-12);
        }
    }

    #[test]
    fn dissipation_part_of_g_is_nondecreasing() {
        // free decay: nonzero initial theta, zero loads and boundary data
        let mut sc = zero_scenario(41);
        sc.initial.theta0 = XtFn::from_expr("sin(pi*x)").unwrap();
        sc.time = TimeParams { t_final: 1.0, dt: 0.01 };
        let hist = solve(&sc).unwrap();
        // the accumulated dissipation integral alone must be nondecreasing
        let m = hist.material;
        let n = hist.n_nodes();
        let mut big_theta_x = vec![vec![0.0; hist.n_times()]; n];
        for (i, row) in big_theta_x.iter_mut().enumerate() {
            let series: Vec<f64> = (0..hist.n_times()).map(|k| hist.theta_x[(i, k)]).collect();
            *row = cumtrapz(&series, hist.dt);
        }
        // the integrand is pointwise nonnegative, so the accumulated
        // dissipation integral is nondecreasing
        let mut integrals = Vec::new();
        for k in 0..hist.n_times() {
            let vals: Vec<f64> = (0..n)
                .map(|i| {
                    m.gamma / m.beta * hist.theta[(i, k)].powi(2)
                        + m.k * big_theta_x[i][k].powi(2)
                })
                .collect();
            let p = trapz(&hist.grid, &vals);
            assert!(p >= 0.0);
            integrals.push(p);
        }
        let acc = cumtrapz(&integrals, hist.dt);
        for w in acc.windows(2) {
            assert!(w[1] >= w[0] - 1e-15);
        }
    }

    #[test]
    fn supplied_vs_derived_eta0_flag() {
        let (sc, _) = mms_scenario(21, 0.2);
        let hist = solve(&sc).unwrap();
        assert!(!hist.eta0_derived);
        let mut sc2 = sc.clone();
        sc2.initial.eta0 = None;
        let hist2 = solve(&sc2).unwrap();
        assert!(hist2.eta0_derived);
    }
}
