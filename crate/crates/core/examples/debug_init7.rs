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
        let mat = BandMatrix::from_triplets(2 * n, &trip).unwrap();
        let lu = mat.lu().unwrap();
        let bcnodes = [0usize, 1, n - 2, n - 1];
        let groups: Vec<(&str, Box<dyn Fn(usize) -> bool>)> = vec![
            ("all rows   ", Box::new(|_r: usize| true)),
            ("psi only   ", Box::new(|r: usize| r % 2 == 0)),
            ("charge only", Box::new(move |r: usize| r % 2 == 1 && !bcnodes.contains(&(r / 2)))),
            ("bc only    ", Box::new(move |r: usize| r % 2 == 1 && bcnodes.contains(&(r / 2)))),
        ];
        for (tag, keep) in &groups {
            let filtered: Vec<f64> = res
                .iter()
                .enumerate()
                .map(|(r, &v)| if keep(r) { -v } else { 0.0 })
                .collect();
            let e = lu.solve(&filtered);
            let ephi = (0..n).map(|i| e[2 * i + 1].abs()).fold(0.0f64, f64::max);
            let epsi = (0..n).map(|i| e[2 * i].abs()).fold(0.0f64, f64::max);
            println!("n={n} {tag}: err_phi {ephi:.3e} err_psi {epsi:.3e}");
        }
    }
}
