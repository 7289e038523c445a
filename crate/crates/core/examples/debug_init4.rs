use tpz_core::kinematics::{deriv_stencil, end_stencil, Grid1D};
use tpz_core::manufactured::*;

fn main() {
    let ex = ExactFields::pair_a();
    let m = reference_material();
    let bp = m.beta_prime();
    for n in [41usize, 81] {
        let grid = Grid1D::new(n, 0.0, 1.0).unwrap();
        let h = grid.h();
        let nodes = grid.nodes();
        let u0: Vec<f64> = nodes.iter().map(|&x| ex.u.eval(x, 0.0)).collect();
        let th0: Vec<f64> = nodes.iter().map(|&x| ex.theta.eval(x, 0.0)).collect();
        let ps_ex: Vec<f64> = nodes.iter().map(|&x| ex.theta.deriv(0, 1, x, 0.0)).collect();
        let ph_ex: Vec<f64> = nodes.iter().map(|&x| ex.phi.eval(x, 0.0)).collect();
        let eta0: Vec<f64> = nodes
            .iter()
            .map(|&x| {
                let e = ex.u.deriv(1, 0, x, 0.0);
                let v = -ex.phi.deriv(2, 0, x, 0.0);
                let th = ex.theta.eval(x, 0.0);
                let tht = ex.theta.deriv(0, 1, x, 0.0);
                -(m.a14 * e + m.a47 * v + m.c * (th + bp * tht)) / m.rho
            })
            .collect();
        let st = |vals: &[f64], order: usize, i: usize| -> f64 {
            let (s, c) = deriv_stencil(order, i, n, h).unwrap();
            c.iter().enumerate().map(|(j, cj)| cj * vals[s + j]).sum()
        };
        // psi rows on exact solution
        let mut worst = (0.0f64, 0usize);
        for i in 0..n {
            let lhs = m.c * bp * ps_ex[i] - m.a47 * st(&ph_ex, 2, i);
            let rhs = -m.rho * eta0[i] - m.a14 * st(&u0, 1, i) - m.c * th0[i];
            let r = (lhs - rhs).abs();
            if r > worst.0 { worst = (r, i); }
        }
        println!("n={n}: worst psi-row residual {:.3e} at node {}", worst.0, worst.1);
        // charge interior rows
        let mut worst = (0.0f64, 0usize);
        for i in 2..n - 2 {
            let x = nodes[i];
            let g = {
                // manufactured g at t=0
                (m.a17 - m.a23) * ex.u.deriv(3, 0, x, 0.0)
                    + m.a33 * ex.phi.deriv(2, 0, x, 0.0)
                    - m.a77 * ex.phi.deriv(4, 0, x, 0.0)
                    + m.a47 * (ex.theta.deriv(2, 0, x, 0.0) + m.beta * ex.theta.deriv(2, 1, x, 0.0))
            };
            let lhs = m.a33 * st(&ph_ex, 2, i) - m.a77 * st(&ph_ex, 4, i) + m.a47 * m.beta * st(&ps_ex, 2, i);
            let rhs = g - (m.a17 - m.a23) * st(&u0, 3, i) - m.a47 * st(&th0, 2, i);
            let r = (lhs - rhs).abs();
            if r > worst.0 { worst = (r, i); }
        }
        println!("  worst charge-row residual {:.3e} at node {} (h^2={:.1e})", worst.0, worst.1, h * h);
        // Lambda natural row at right
        let est = |vals: &[f64], order: usize| -> f64 {
            let (s, c) = end_stencil(order, false, n, h).unwrap();
            c.iter().enumerate().map(|(j, cj)| cj * vals[s + j]).sum()
        };
        let lam_lhs = 1.0 * (m.a33 * est(&ph_ex, 1) - m.a77 * est(&ph_ex, 3) + m.a47 * m.beta * est(&ps_ex, 1));
        let lam_rhs = {
            let x = 1.0;
            let lam_exact = 1.0
                * ((m.a17 - m.a23) * ex.u.deriv(2, 0, x, 0.0) + m.a33 * ex.phi.deriv(1, 0, x, 0.0)
                    - m.a77 * ex.phi.deriv(3, 0, x, 0.0)
                    + m.a47 * (ex.theta.deriv(1, 0, x, 0.0) + m.beta * ex.theta.deriv(1, 1, x, 0.0)));
            lam_exact - 1.0 * ((m.a17 - m.a23) * est(&u0, 2) + m.a47 * est(&th0, 1))
        };
        println!("  Lambda row residual {:.3e}", (lam_lhs - lam_rhs).abs());
    }
}
