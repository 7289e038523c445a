//! Discrete 1D derivative operators on uniform grids.
//!
//! All stencils are second-order accurate, including the one-sided closures
//! at the endpoints, so that composed quantities inherit a clean O(h^2)
//! global order. The second derivative is always a direct stencil, never a
//! composition `d1(d1(f))`, which would lose an order near the boundary.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Uniform 1D grid on `[x0, x1]` with `n_nodes` nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub n_nodes: usize,
    pub x0: f64,
    pub x1: f64,
}

impl Grid1D {
    pub fn new(n_nodes: usize, x0: f64, x1: f64) -> Result<Self> {
        if n_nodes < 5 {
            return Err(Error::Grid(format!(
                "need at least 5 nodes for fourth-order stencils, got {n_nodes}"
            )));
        }
        if !(x1 > x0) {
            return Err(Error::Grid(format!("empty domain [{x0}, {x1}]")));
        }
        Ok(Grid1D { n_nodes, x0, x1 })
    }

    /// Node spacing.
    pub fn h(&self) -> f64 {
        (self.x1 - self.x0) / (self.n_nodes - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.h()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_nodes).map(|i| self.node(i)).collect()
    }

    /// Grid with the spacing halved (nodes of the coarse grid are every
    /// second node of the fine one).
    pub fn refined(&self) -> Grid1D {
        Grid1D {
            n_nodes: 2 * (self.n_nodes - 1) + 1,
            x0: self.x0,
            x1: self.x1,
        }
    }
}

/// Scalar field sampled at the grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct NodalField {
    pub grid: Grid1D,
    pub values: Vec<f64>,
}

impl NodalField {
    pub fn new(grid: Grid1D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_nodes {
            return Err(Error::Shape(format!(
                "field has {} values for a {}-node grid",
                values.len(),
                grid.n_nodes
            )));
        }
        Ok(NodalField { grid, values })
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.nodes().iter().map(|&x| f(x)).collect();
        NodalField { grid, values }
    }

    pub fn zeros(grid: Grid1D) -> Self {
        NodalField {
            grid,
            values: vec![0.0; grid.n_nodes],
        }
    }
}

/// Second-order stencil for the `order`-th derivative at `node`, as
/// `(first_column, coefficients)`. Interior nodes get centered stencils,
/// nodes near the ends one-sided ones of the same order of accuracy.
pub fn deriv_stencil(order: usize, node: usize, n: usize, h: f64) -> Result<(usize, Vec<f64>)> {
    let min_n = match order {
        1 => 3,
        2 => 4,
        3 => 5,
        4 => 6,
        _ => return Err(Error::Grid(format!("unsupported derivative order {order}"))),
    };
    if n < min_n {
        return Err(Error::Grid(format!(
            "derivative order {order} needs at least {min_n} nodes, grid has {n}"
        )));
    }
    if node >= n {
        return Err(Error::Grid(format!("node {node} out of range for {n} nodes")));
    }

    // One-sided stencils at the left end, indexed from node 0.
    let left: Option<(usize, Vec<f64>)> = match order {
        1 if node == 0 => Some((0, vec![-1.5, 2.0, -0.5])),
        2 if node == 0 => Some((0, vec![2.0, -5.0, 4.0, -1.0])),
        3 if node == 0 => Some((0, vec![-2.5, 9.0, -12.0, 7.0, -1.5])),
        3 if node == 1 => Some((0, vec![-1.5, 5.0, -6.0, 3.0, -0.5])),
        4 if node == 0 => Some((0, vec![3.0, -14.0, 26.0, -24.0, 11.0, -2.0])),
        4 if node == 1 => Some((0, vec![2.0, -9.0, 16.0, -14.0, 6.0, -1.0])),
        _ => None,
    };
    let width = match order {
        1 => 1,
        2 => 1,
        3 => 2,
        4 => 2,
        _ => unreachable!(),
    };
    let scale = h.powi(order as i32);

    let (start, coefs) = if let Some((s, c)) = left {
        (s, c)
    } else if node + width >= n {
        // Mirror the left one-sided stencil: reverse, and negate for odd orders.
        let mirror_node = n - 1 - node;
        let (_, c) = deriv_stencil_left(order, mirror_node)?;
        let sign = if order % 2 == 1 { -1.0 } else { 1.0 };
        let rev: Vec<f64> = c.iter().rev().map(|v| sign * v).collect();
        let start = n - rev.len();
        (start, rev)
    } else {
        // Centered.
        let c = match order {
            1 => vec![-0.5, 0.0, 0.5],
            2 => vec![1.0, -2.0, 1.0],
            3 => vec![-0.5, 1.0, 0.0, -1.0, 0.5],
            4 => vec![1.0, -4.0, 6.0, -4.0, 1.0],
            _ => unreachable!(),
        };
        (node - width, c)
    };

    Ok((start, coefs.iter().map(|c| c / scale).collect()))
}

/// Left one-sided stencils used both directly and mirrored to the right end.
fn deriv_stencil_left(order: usize, node: usize) -> Result<(usize, Vec<f64>)> {
    let c = match (order, node) {
        (1, 0) => vec![-1.5, 2.0, -0.5],
        (2, 0) => vec![2.0, -5.0, 4.0, -1.0],
        (3, 0) => vec![-2.5, 9.0, -12.0, 7.0, -1.5],
        (3, 1) => vec![-1.5, 5.0, -6.0, 3.0, -0.5],
        (4, 0) => vec![3.0, -14.0, 26.0, -24.0, 11.0, -2.0],
        (4, 1) => vec![2.0, -9.0, 16.0, -14.0, 6.0, -1.0],
        _ => {
            return Err(Error::Grid(format!(
                "no one-sided stencil for order {order} at offset {node}"
            )))
        }
    };
    Ok((0, c))
}

/// Fourth-order one-sided stencil for the `order`-th derivative evaluated
/// exactly at an endpoint node, as `(first_column, coefficients)`.
///
/// Boundary rows built from these (natural tractions, normal derivatives)
/// keep their truncation constants small even for oscillatory fields whose
/// fifth derivatives are large; interior stencils stay second order.
pub fn end_stencil(order: usize, left: bool, n: usize, h: f64) -> Result<(usize, Vec<f64>)> {
    let (width, coefs): (usize, Vec<f64>) = match order {
        0 => (1, vec![1.0]),
        1 => (5, vec![-25.0 / 12.0, 4.0, -3.0, 4.0 / 3.0, -0.25]),
        2 => (
            6,
            vec![
                45.0 / 12.0,
                -154.0 / 12.0,
                214.0 / 12.0,
                -156.0 / 12.0,
                61.0 / 12.0,
                -10.0 / 12.0,
            ],
        ),
        3 => (
            7,
            vec![
                -49.0 / 8.0,
                232.0 / 8.0,
                -461.0 / 8.0,
                496.0 / 8.0,
                -307.0 / 8.0,
                104.0 / 8.0,
                -15.0 / 8.0,
            ],
        ),
        _ => {
            return Err(Error::Grid(format!(
                "no endpoint stencil for derivative order {order}"
            )))
        }
    };
    if n < width {
        return Err(Error::Grid(format!(
            "endpoint stencil of order {order} needs {width} nodes, grid has {n}"
        )));
    }
    let scale = h.powi(order as i32);
    if left {
        Ok((0, coefs.iter().map(|c| c / scale).collect()))
    } else {
        let sign = if order % 2 == 1 { -1.0 } else { 1.0 };
        let rev: Vec<f64> = coefs.iter().rev().map(|c| sign * c / scale).collect();
        Ok((n - width, rev))
    }
}

/// Fourth-order stencil for the first or second derivative at any node
/// (centered inside, offset near the ends, one-sided at the ends). Used
/// where a pointwise algebraic relation must have a uniformly smooth
/// truncation, e.g. the initialization's entropy rows.
pub fn stencil4(order: usize, node: usize, n: usize, h: f64) -> Result<(usize, Vec<f64>)> {
    if n < 6 {
        return Err(Error::Grid(format!(
            "fourth-order stencils need at least 6 nodes, grid has {n}"
        )));
    }
    if node >= n {
        return Err(Error::Grid(format!("node {node} out of range for {n} nodes")));
    }
    let mirror = |c: &[f64], odd: bool| -> Vec<f64> {
        let sign = if odd { -1.0 } else { 1.0 };
        c.iter().rev().map(|v| sign * v).collect()
    };
    let (start, coefs): (usize, Vec<f64>) = match order {
        1 => {
            let c0 = vec![-25.0, 48.0, -36.0, 16.0, -3.0];
            let c1 = vec![-3.0, -10.0, 18.0, -6.0, 1.0];
            let cc = vec![1.0, -8.0, 0.0, 8.0, -1.0];
            match node {
                0 => (0, c0),
                1 => (0, c1),
                i if i == n - 2 => (n - 5, mirror(&c1, true)),
                i if i == n - 1 => (n - 5, mirror(&c0, true)),
                i => (i - 2, cc),
            }
        }
        2 => {
            let c0 = vec![45.0, -154.0, 214.0, -156.0, 61.0, -10.0];
            let c1 = vec![10.0, -15.0, -4.0, 14.0, -6.0, 1.0];
            let cc = vec![-1.0, 16.0, -30.0, 16.0, -1.0];
            match node {
                0 => (0, c0),
                1 => (0, c1),
                i if i == n - 2 => (n - 6, mirror(&c1, false)),
                i if i == n - 1 => (n - 6, mirror(&c0, false)),
                i => (i - 2, cc),
            }
        }
        _ => {
            return Err(Error::Grid(format!(
                "stencil4 supports orders 1 and 2, got {order}"
            )))
        }
    };
    let scale = 12.0 * h.powi(order as i32);
    Ok((start, coefs.iter().map(|c| c / scale).collect()))
}

fn apply_deriv(f: &NodalField, order: usize) -> Result<NodalField> {
    let n = f.grid.n_nodes;
    let h = f.grid.h();
    let mut out = vec![0.0; n];
    for (i, o) in out.iter_mut().enumerate() {
        let (start, coefs) = deriv_stencil(order, i, n, h)?;
        *o = coefs
            .iter()
            .enumerate()
            .map(|(j, c)| c * f.values[start + j])
            .sum();
    }
    Ok(NodalField {
        grid: f.grid,
        values: out,
    })
}

/// First derivative, second-order everywhere.
pub fn d1(f: &NodalField) -> NodalField {
    apply_deriv(f, 1).expect("grid validated on construction")
}

/// Second derivative, second-order everywhere (direct stencil).
pub fn d2(f: &NodalField) -> NodalField {
    apply_deriv(f, 2).expect("grid validated on construction")
}

/// Per-node kinematic variables of the 1D reduction: strain `e = u_x`,
/// second gradient `kappa = u_xx`, temperature gradient `theta_x`,
/// electric field `e_field = -phi_x` and second potential gradient
/// `v_field = -phi_xx`.
#[derive(Debug, Clone)]
pub struct Kinematics1D {
    pub e: Vec<f64>,
    pub kappa: Vec<f64>,
    pub theta_x: Vec<f64>,
    pub e_field: Vec<f64>,
    pub v_field: Vec<f64>,
    pub theta: Vec<f64>,
    pub theta_dot: Vec<f64>,
}

pub fn kinematic_state_1d(
    u: &NodalField,
    phi: &NodalField,
    theta: &NodalField,
    theta_dot: &NodalField,
) -> Result<Kinematics1D> {
    let grid = u.grid;
    for f in [phi, theta, theta_dot] {
        if f.grid != grid {
            return Err(Error::Shape("fields sampled on different grids".into()));
        }
    }
    let e = d1(u).values;
    let kappa = d2(u).values;
    let theta_x = d1(theta).values;
    let e_field: Vec<f64> = d1(phi).values.iter().map(|v| -v).collect();
    let v_field: Vec<f64> = d2(phi).values.iter().map(|v| -v).collect();
    Ok(Kinematics1D {
        e,
        kappa,
        theta_x,
        e_field,
        v_field,
        theta: theta.values.clone(),
        theta_dot: theta_dot.values.clone(),
    })
}

/// Trapezoidal quadrature of nodal values over the grid.
pub fn trapz(grid: &Grid1D, values: &[f64]) -> f64 {
    let h = grid.h();
    let n = grid.n_nodes;
    let mut s = 0.5 * (values[0] + values[n - 1]);
    for v in &values[1..n - 1] {
        s += v;
    }
    s * h
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn grid(n: usize) -> Grid1D {
        Grid1D::new(n, 0.0, 1.0).unwrap()
    }

    #[test]
    fn d1_annihilates_constants() {
        let f = NodalField::from_fn(grid(11), |_| 3.25);
        for v in d1(&f).values {
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn d1_exact_on_quadratics() {
        let g = grid(9);
        let f = NodalField::from_fn(g, |x| x * x);
        let df = d1(&f);
        for (i, v) in df.values.iter().enumerate() {
            assert_abs_diff_eq!(*v, 2.0 * g.node(i), epsilon = 1e-12);
        }
    }

    #[test]
    fn d2_exact_on_quadratics_and_zero_on_linears() {
        let g = grid(9);
        let f = NodalField::from_fn(g, |x| x * x);
        for v in d2(&f).values {
            assert_abs_diff_eq!(v, 2.0, epsilon = 1e-10);
        }
        let lin = NodalField::from_fn(g, |x| 4.0 - 3.0 * x);
        for v in d2(&lin).values {
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn stencils_exact_on_matching_monomials() {
        // order-k stencil must be exact on x^k and x^{k+1} (second-order accuracy)
        let n = 12;
        let h = 0.1;
        for order in 1..=4usize {
            for extra in 0..=1usize {
                let p = order + extra;
                for node in 0..n {
                    let (start, coefs) = deriv_stencil(order, node, n, h).unwrap();
                    let x0 = node as f64 * h;
                    let val: f64 = coefs
                        .iter()
                        .enumerate()
                        .map(|(j, c)| c * ((start + j) as f64 * h).powi(p as i32))
                        .sum();
                    // d^order/dx^order x^p = p!/(p-order)! x^(p-order)
                    let mut expect = 1.0;
                    for m in 0..order {
                        expect *= (p - m) as f64;
                    }
                    expect *= x0.powi((p - order) as i32);
                    assert_abs_diff_eq!(val, expect, epsilon = 1e-7 * (1.0 + expect.abs()));
                }
            }
        }
    }

    #[test]
    fn end_stencils_exact_on_matching_monomials() {
        // fourth-order endpoint stencil of order k is exact on x^p, p <= k+3
        let n = 14;
        let h = 0.25;
        for order in 1..=3usize {
            for p in order..=(order + 3) {
                for left in [true, false] {
                    let (start, coefs) = end_stencil(order, left, n, h).unwrap();
                    let node = if left { 0 } else { n - 1 };
                    let x0 = node as f64 * h;
                    let val: f64 = coefs
                        .iter()
                        .enumerate()
                        .map(|(j, c)| c * ((start + j) as f64 * h).powi(p as i32))
                        .sum();
                    let mut expect = 1.0;
                    for m in 0..order {
                        expect *= (p - m) as f64;
                    }
                    expect *= x0.powi((p - order) as i32);
                    assert_abs_diff_eq!(val, expect, epsilon = 1e-8 * (1.0 + expect.abs()));
                }
            }
        }
    }

    #[test]
    fn d1_linearity_exact() {
        let g = grid(17);
        let f = NodalField::from_fn(g, |x| (3.0 * x).sin());
        let gg = NodalField::from_fn(g, |x| x * x * x);
        let (a, b) = (2.5, -1.25);
        let combo = NodalField::new(
            g,
            f.values
                .iter()
                .zip(&gg.values)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        )
        .unwrap();
        let lhs = d1(&combo);
        let df = d1(&f);
        let dg = d1(&gg);
        for i in 0..g.n_nodes {
            let want = a * df.values[i] + b * dg.values[i];
            let scale = want.abs().max(1.0);
            assert!((lhs.values[i] - want).abs() <= 1e-13 * scale);
        }
    }

    /// Richardson refinement: observed order of d1 and d2 on sin/cos in [1.9, 2.1].
    #[test]
    fn refinement_order_is_two() {
        let orders = |deriv: fn(&NodalField) -> NodalField, f: fn(f64) -> f64, fx: fn(f64) -> f64| {
            let mut errs = Vec::new();
            for lvl in 0..4 {
                let n = 20 * (1 << lvl) + 1;
                let g = grid(n);
                let field = NodalField::from_fn(g, f);
                let df = deriv(&field);
                let err = df
                    .values
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v - fx(g.node(i))).abs())
                    .fold(0.0f64, f64::max);
                errs.push(err);
            }
            let mut orders = Vec::new();
            for w in errs.windows(2) {
                orders.push((w[0] / w[1]).log2());
            }
            orders
        };

        for o in orders(d1, |x| (2.0 * x).sin(), |x| 2.0 * (2.0 * x).cos()) {
            assert!((1.9..=2.1).contains(&o), "d1 observed order {o}");
        }
        for o in orders(d2, |x| (2.0 * x).cos(), |x| -4.0 * (2.0 * x).cos()) {
            assert!((1.9..=2.1).contains(&o), "d2 observed order {o}");
        }
    }

    #[test]
    fn kinematic_state_simple_fields() {
        let g = grid(21);
        let u = NodalField::from_fn(g, |x| x);
        let phi = NodalField::from_fn(g, |x| 0.5 * x * x);
        let theta = NodalField::zeros(g);
        let theta_dot = NodalField::zeros(g);
        let kin = kinematic_state_1d(&u, &phi, &theta, &theta_dot).unwrap();
        for i in 0..g.n_nodes {
            assert_abs_diff_eq!(kin.e[i], 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(kin.kappa[i], 0.0, epsilon = 1e-9);
            assert_abs_diff_eq!(kin.e_field[i], -g.node(i), epsilon = 1e-11);
            assert_abs_diff_eq!(kin.v_field[i], -1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn grid_mismatch_is_an_error() {
        let u = NodalField::zeros(grid(11));
        let other = NodalField::zeros(grid(13));
        let z = NodalField::zeros(grid(11));
        assert!(kinematic_state_1d(&u, &other, &z, &z).is_err());
    }
}
