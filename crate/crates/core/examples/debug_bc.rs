use tpz_core::kinematics::Grid1D;
use tpz_core::manufactured::*;
use tpz_core::scenario::TimeParams;
use tpz_core::solver1d::*;

fn run(tag: &str, l: EndpointKinds, r: EndpointKinds) {
    print!("{tag}: eph = ");
    let ex = ExactFields::pair_a();
    for n in [41usize, 81, 161] {
        let grid = Grid1D::new(n, 0.0, 1.0).unwrap();
        let dt = 1.0 / (n - 1) as f64;
        let sc = manufactured_source(&ex, reference_material(), grid, l, r, TimeParams { t_final: 1.0, dt });
        let hist = solve(&sc).unwrap();
        let e = (0..n)
            .map(|i| {
                (0..hist.n_times())
                    .map(|k| (hist.phi[(i, k)] - ex.phi.eval(grid.node(i), hist.times[k])).abs())
                    .fold(0.0f64, f64::max)
            })
            .fold(0.0f64, f64::max);
        print!("{e:.2e} ");
    }
    println!();
}

fn main() {
    use PairKind::*;
    let (l, r) = mixed_kinds();
    run("mixed (baseline)", l, r);
    let e = [Essential; 5];
    run("only P nat right", e, [Natural, Essential, Essential, Essential, Essential]);
    run("only R nat left ", [Essential, Natural, Essential, Essential, Essential], e);
    run("only q nat right", e, [Essential, Essential, Natural, Essential, Essential]);
    run("only Lam nat rgt", e, [Essential, Essential, Essential, Natural, Essential]);
    run("only H nat left ", [Essential, Essential, Essential, Essential, Natural], e);
    run("only H nat right", e, [Essential, Essential, Essential, Essential, Natural]);
}
