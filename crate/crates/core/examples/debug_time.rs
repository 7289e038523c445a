use tpz_core::kinematics::Grid1D;
use tpz_core::manufactured::*;
use tpz_core::scenario::TimeParams;
use tpz_core::solver1d::*;

fn main() {
    for n in [41usize, 81] {
        let ex = ExactFields::trig();
        let grid = Grid1D::new(n, 0.0, 1.0).unwrap();
        let t_final = 0.5;
        let dt = t_final / (n - 1) as f64;
        let (l, r) = mixed_kinds();
        let sc = manufactured_source(&ex, reference_material(), grid, l, r, TimeParams { t_final, dt });
        let hist = solve(&sc).unwrap();
        // max-over-space phi error per time step (sampled)
        print!("n={n} eph(t): ");
        let nt = hist.n_times();
        for kk in 0..=10 {
            let k = kk * (nt - 1) / 10;
            let t = hist.times[k];
            let e = (0..n)
                .map(|i| (hist.phi[(i, k)] - ex.phi.eval(grid.node(i), t)).abs())
                .fold(0.0f64, f64::max);
            print!("{e:.2e} ");
        }
        println!();
        // same for theta_dot (psi)
        print!("n={n} eps(t): ");
        for kk in 0..=10 {
            let k = kk * (nt - 1) / 10;
            let t = hist.times[k];
            let e = (0..n)
                .map(|i| (hist.psi[(i, k)] - ex.theta.deriv(0, 1, grid.node(i), t)).abs())
                .fold(0.0f64, f64::max);
            print!("{e:.2e} ");
        }
        println!();
    }
}
