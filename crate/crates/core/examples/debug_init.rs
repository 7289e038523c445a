use tpz_core::kinematics::Grid1D;
use tpz_core::manufactured::*;
use tpz_core::scenario::TimeParams;
use tpz_core::solver1d::*;

fn main() {
    for n in [41usize, 81] {
        let ex = ExactFields::trig();
        let grid = Grid1D::new(n, 0.0, 1.0).unwrap();
        let dt = 0.5 / (n - 1) as f64;
        let (l, r) = mixed_kinds();
        let sc = manufactured_source(&ex, reference_material(), grid, l, r, TimeParams { t_final: 0.5, dt });
        let hist = solve(&sc).unwrap();
        // phi and psi at step 0 vs exact, profile over space
        let mut worst_phi = (0.0f64, 0usize);
        let mut worst_psi = (0.0f64, 0usize);
        for i in 0..n {
            let x = grid.node(i);
            let ep = (hist.phi[(i, 0)] - ex.phi.eval(x, 0.0)).abs();
            let es = (hist.psi[(i, 0)] - ex.theta.deriv(0, 1, x, 0.0)).abs();
            if ep > worst_phi.0 { worst_phi = (ep, i); }
            if es > worst_psi.0 { worst_psi = (es, i); }
        }
        println!("n={n}: phi0 err {:.3e} at node {} / psi0 err {:.3e} at node {}", worst_phi.0, worst_phi.1, worst_psi.0, worst_psi.1);
        let prof: Vec<String> = (0..n).step_by(n/10).map(|i| format!("{:.1e}", (hist.phi[(i,0)] - ex.phi.eval(grid.node(i), 0.0)).abs())).collect();
        println!("  phi0 profile: {}", prof.join(" "));
        let prof: Vec<String> = (0..n).step_by(n/10).map(|i| format!("{:.1e}", (hist.psi[(i,0)] - ex.theta.deriv(0,1,grid.node(i), 0.0)).abs())).collect();
        println!("  psi0 profile: {}", prof.join(" "));
    }
}
