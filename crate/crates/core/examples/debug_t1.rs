use tpz_core::kinematics::Grid1D;
use tpz_core::manufactured::*;
use tpz_core::scenario::TimeParams;
use tpz_core::solver1d::*;

fn main() {
    // the failing config: T = 1.0, dt = h
    for n in [21usize, 41, 81, 161] {
        let ex = ExactFields::pair_a();
        let grid = Grid1D::new(n, 0.0, 1.0).unwrap();
        let dt = 1.0 / (n - 1) as f64;
        let (l, r) = mixed_kinds();
        let sc = manufactured_source(&ex, reference_material(), grid, l, r, TimeParams { t_final: 1.0, dt });
        let hist = solve(&sc).unwrap();
        let (eu, eth, eph) = max_errors_against(
            &hist,
            |x, t| ex.u.eval(x, t),
            |x, t| ex.theta.eval(x, t),
            |x, t| ex.phi.eval(x, t),
        );
        print!("n={n}: eu {eu:.3e} eth {eth:.3e} eph {eph:.3e}   eu(t): ");
        let nt = hist.n_times();
        for kk in 0..=8 {
            let k = kk * (nt - 1) / 8;
            let t = hist.times[k];
            let e = (0..n)
                .map(|i| (hist.u[(i, k)] - ex.u.eval(grid.node(i), t)).abs())
                .fold(0.0f64, f64::max);
            print!("{e:.1e} ");
        }
        println!();
    }
}
