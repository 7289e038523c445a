use tpz_core::kinematics::Grid1D;
use tpz_core::manufactured::*;
use tpz_core::scenario::TimeParams;
use tpz_core::solver1d::*;

fn run(tag: &str, ex: &ExactFields) {
    println!("{tag}");
    for n in [41usize, 81] {
        let grid = Grid1D::new(n, 0.0, 1.0).unwrap();
        let dt = 1.0 / (n - 1) as f64;
        let (l, r) = mixed_kinds();
        let sc = manufactured_source(ex, reference_material(), grid, l, r, TimeParams { t_final: 1.0, dt });
        let hist = solve(&sc).unwrap();
        let nt = hist.n_times();
        print!("  n={n} eph(t): ");
        for kk in 0..=6 {
            let k = kk * (nt - 1) / 6;
            let t = hist.times[k];
            let e = (0..n).map(|i| (hist.phi[(i, k)] - ex.phi.eval(grid.node(i), t)).abs()).fold(0.0f64, f64::max);
            print!("{e:.1e} ");
        }
        println!();
        print!("  n={n} profile(T): ");
        let k = nt - 1;
        for ii in 0..=8 {
            let i = ii * (n - 1) / 8;
            print!("{:+.1e} ", hist.phi[(i, k)] - ex.phi.eval(grid.node(i), 1.0));
        }
        println!();
    }
}

fn main() {
    use std::f64::consts::PI;
    let mut a = ExactFields::pair_a();
    run("pair_a (sin(pi x) cos(1.2 t))", &a);
    a.phi = ManufacturedField::new(vec![(0.8, SpaceFn::Sin(PI), TimeFn::Cos(1.0))]);
    run("phi = 0.8 sin(pi x) cos(t)", &a);
    a.phi = ManufacturedField::new(vec![(0.8, SpaceFn::Sin(2.0 * PI), TimeFn::Cos(1.2))]);
    run("phi = 0.8 sin(2 pi x) cos(1.2 t)", &a);
    a.phi = ManufacturedField::new(vec![(0.8, SpaceFn::Poly(vec![0.0, 1.0, -1.0]), TimeFn::Cos(1.2))]);
    run("phi = 0.8 x(1-x) cos(1.2t)", &a);
}
