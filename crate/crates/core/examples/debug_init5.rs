use tpz_core::kinematics::Grid1D;
use tpz_core::manufactured::*;
use tpz_core::scenario::TimeParams;
use tpz_core::solver1d::*;

fn main() {
    let ex = ExactFields::pair_a();
    for n in [41usize, 81] {
        let grid = Grid1D::new(n, 0.0, 1.0).unwrap();
        let dt = 1.0 / (n - 1) as f64;
        let (l, r) = mixed_kinds();
        let sc = manufactured_source(&ex, reference_material(), grid, l, r, TimeParams { t_final: 1.0, dt });
        let hist = solve(&sc).unwrap();
        println!("n={n} phi0 error profile (every node up to 12, then every n/8):");
        let mut line = String::new();
        for i in 0..12.min(n) {
            line += &format!("{:+.2e} ", hist.phi[(i, 0)] - ex.phi.eval(grid.node(i), 0.0));
        }
        println!("  head: {line}");
        let mut line = String::new();
        for ii in 0..=8 {
            let i = ii * (n - 1) / 8;
            line += &format!("{:+.2e} ", hist.phi[(i, 0)] - ex.phi.eval(grid.node(i), 0.0));
        }
        println!("  coarse: {line}");
        let mut line = String::new();
        for i in n - 12..n {
            line += &format!("{:+.2e} ", hist.phi[(i, 0)] - ex.phi.eval(grid.node(i), 0.0));
        }
        println!("  tail: {line}");
        // psi0 error
        let mut line = String::new();
        for ii in 0..=8 {
            let i = ii * (n - 1) / 8;
            line += &format!("{:+.2e} ", hist.psi[(i, 0)] - ex.theta.deriv(0, 1, grid.node(i), 0.0));
        }
        println!("  psi0: {line}");
    }
}
