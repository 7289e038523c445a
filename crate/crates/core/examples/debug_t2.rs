use tpz_core::kinematics::Grid1D;
use tpz_core::manufactured::*;
use tpz_core::scenario::TimeParams;
use tpz_core::solver1d::*;

fn main() {
    for (n, dtfac) in [(41usize, 1.0), (41, 0.5), (41, 0.25), (81, 1.0), (81, 0.5), (161, 1.0)] {
        let ex = ExactFields::trig();
        let grid = Grid1D::new(n, 0.0, 1.0).unwrap();
        let dt = dtfac / (n - 1) as f64;
        let (l, r) = mixed_kinds();
        let sc = manufactured_source(&ex, reference_material(), grid, l, r, TimeParams { t_final: 1.0, dt });
        let hist = solve(&sc).unwrap();
        let (eu, eth, eph) = max_errors_against(
            &hist,
            |x, t| ex.u.eval(x, t),
            |x, t| ex.theta.eval(x, t),
            |x, t| ex.phi.eval(x, t),
        );
        println!("n={n} dt=h*{dtfac}: eu {eu:.3e} eth {eth:.3e} eph {eph:.3e}");
    }
}
