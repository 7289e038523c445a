use tpz_core::kinematics::Grid1D;
use tpz_core::manufactured::*;
use tpz_core::scenario::TimeParams;
use tpz_core::solver1d::*;

fn run(tag: &str, mutate: impl Fn(&mut tpz_core::constitutive::Material1D)) {
    print!("{tag}: ");
    for n in [41usize, 81, 161] {
        let ex = ExactFields::trig();
        let grid = Grid1D::new(n, 0.0, 1.0).unwrap();
        let dt = 0.5 / (n - 1) as f64;
        let (l, r) = mixed_kinds();
        let mut m = reference_material();
        mutate(&mut m);
        let sc = manufactured_source(&ex, m, grid, l, r, TimeParams { t_final: 0.5, dt });
        let hist = solve(&sc).unwrap();
        let e = (0..n)
            .map(|i| (hist.phi[(i, 0)] - ex.phi.eval(grid.node(i), 0.0)).abs())
            .fold(0.0f64, f64::max);
        print!("{e:.2e} ");
    }
    println!();
}

fn main() {
    run("full       ", |_| {});
    run("a47=0      ", |m| m.a47 = 0.0);
    run("a17=a23=0  ", |m| { m.a17 = 0.0; m.a23 = 0.0; });
    run("only a33a77", |m| { m.a47 = 0.0; m.a17 = 0.0; m.a23 = 0.0; m.a14 = 0.0; });
}
