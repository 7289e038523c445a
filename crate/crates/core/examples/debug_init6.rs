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
        // exact (psi, phi) vector
        let mut xex = vec![0.0; 2 * n];
        for i in 0..n {
            let x = grid.node(i);
            xex[2 * i] = ex.theta.deriv(0, 1, x, 0.0);
            xex[2 * i + 1] = ex.phi.eval(x, 0.0);
        }
        let mut res = rhs.clone();
        for &(r, c, v) in &trip {
            res[r] -= v * xex[c];
        }
        for v in res.iter_mut() {
            *v = -*v; // row residual = A x - rhs
        }
        // report worst rows
        let mut idx: Vec<usize> = (0..2 * n).collect();
        idx.sort_by(|&a, &b| res[b].abs().partial_cmp(&res[a].abs()).unwrap());
        println!("n={n}: worst init rows:");
        for &r in idx.iter().take(6) {
            let kind = if r % 2 == 0 { "psi " } else { "chg " };
            println!("  row {r} ({kind} node {}) residual {:+.3e}", r / 2, res[r]);
        }
    }
}
