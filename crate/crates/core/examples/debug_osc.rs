use tpz_core::convolution::diff_series;
use tpz_core::kinematics::Grid1D;
use tpz_core::manufactured::*;
use tpz_core::scenario::TimeParams;
use tpz_core::solver1d::*;

fn main() {
    let n = 41;
    let ex = ExactFields::trig();
    let grid = Grid1D::new(n, 0.0, 1.0).unwrap();
    let t_final = 0.5;
    let dt = t_final / (n - 1) as f64;
    let (l, r) = mixed_kinds();
    let sc = manufactured_source(&ex, reference_material(), grid, l, r, TimeParams { t_final, dt });
    let hist = solve(&sc).unwrap();
    for node in [2usize, 10, 38] {
        let x = grid.node(node);
        let v: Vec<f64> = (0..hist.n_times()).map(|k| hist.v[(node, k)]).collect();
        let vd = diff_series(&v, dt);
        print!("node {node}: v_err = [");
        for k in 10..16 {
            print!("{:+.2e} ", v[k] - ex.u.deriv(0, 1, x, k as f64 * dt));
        }
        print!("]  udd_err = [");
        for k in 10..16 {
            print!("{:+.2e} ", vd[k] - ex.u.deriv(0, 2, x, k as f64 * dt));
        }
        println!("]");
    }
}
