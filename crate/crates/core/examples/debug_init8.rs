use tpz_core::banded::BandMatrix;
use tpz_core::kinematics::Grid1D;
use tpz_core::manufactured::*;
use tpz_core::scenario::TimeParams;
use tpz_core::solver1d::init_system;

fn main() {
    let ex = ExactFields::pair_a();
    for n in [41usize, 81] {
        let grid = Grid1D::new(n, 0.0, 1.0).unwrap();
        let dt = 1.0 / (n - 1) as f64;
        let (l, r) = mixed_kinds();
        let sc = manufactured_source(&ex, reference_material(), grid, l, r, TimeParams { t_final: 1.0, dt });
        let (trip, rhs) = init_system(&sc).unwrap();
        let mut xex = vec![0.0; 2 * n];
        for i in 0..n {
            let x = grid.node(i);
            xex[2 * i] = ex.theta.deriv(0, 1, x, 0.0);
            xex[2 * i + 1] = ex.phi.eval(x, 0.0);
        }
        let mut res = vec![0.0; 2 * n];
        for &(r, c, v) in &trip {
            res[r] += v * xex[c];
        }
        for (r, v) in res.iter_mut().enumerate() {
            *v -= rhs[r];
        }
        print!("n={n} psi-row residual profile: ");
        for ii in 0..=10 {
            let i = ii * (n - 1) / 10;
            print!("{:+.1e} ", res[2 * i]);
        }
        println!();
        // response to a clean smooth psi load h^2 sin(pi x)
        let mat = BandMatrix::from_triplets(2 * n, &trip).unwrap();
        let lu = mat.lu().unwrap();
        let h = grid.h();
        let mut load = vec![0.0; 2 * n];
        for i in 0..n {
            load[2 * i] = h * h * (std::f64::consts::PI * grid.node(i)).sin();
        }
        let e = lu.solve(&load);
        let ephi = (0..n).map(|i| e[2 * i + 1].abs()).fold(0.0f64, f64::max);
        println!("  response to h^2 sin(pi x) on psi rows: err_phi {ephi:.3e}  (h^2 = {:.2e})", h * h);
    }
}
