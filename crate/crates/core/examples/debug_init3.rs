use tpz_core::kinematics::{deriv_stencil, end_stencil, Grid1D};
use tpz_core::manufactured::*;

fn main() {
    // pure BVP: a33 phi'' - a77 phi'''' = g, phi = sin(2 pi x)
    let mut m = reference_material();
    m.a47 = 0.0;
    m.a17 = 0.0;
    m.a23 = 0.0;
    m.a14 = 0.0;
    let ex = ExactFields::trig();
    for n in [41usize, 81] {
        let grid = Grid1D::new(n, 0.0, 1.0).unwrap();
        let h = grid.h();
        // residual of interior rows on the exact solution
        let phi: Vec<f64> = grid.nodes().iter().map(|&x| ex.phi.eval(x, 0.0)).collect();
        let mut worst = (0.0f64, 0usize);
        for i in 2..n - 2 {
            let (s2, c2) = deriv_stencil(2, i, n, h).unwrap();
            let d2: f64 = c2.iter().enumerate().map(|(j, c)| c * phi[s2 + j]).sum();
            let (s4, c4) = deriv_stencil(4, i, n, h).unwrap();
            let d4: f64 = c4.iter().enumerate().map(|(j, c)| c * phi[s4 + j]).sum();
            let x = grid.node(i);
            let g = m.a33 * ex.phi.deriv(2, 0, x, 0.0) - m.a77 * ex.phi.deriv(4, 0, x, 0.0);
            let res = (m.a33 * d2 - m.a77 * d4 - g).abs();
            if res > worst.0 {
                worst = (res, i);
            }
        }
        println!("n={n}: worst interior row residual {:.3e} at node {} (h^2 = {:.1e})", worst.0, worst.1, h * h);
        // BC row residuals at right end: Lambda natural, dphi essential
        let (s1, c1) = end_stencil(1, false, n, h).unwrap();
        let d1: f64 = c1.iter().enumerate().map(|(j, c)| c * phi[s1 + j]).sum();
        let (s3, c3) = end_stencil(3, false, n, h).unwrap();
        let d3: f64 = c3.iter().enumerate().map(|(j, c)| c * phi[s3 + j]).sum();
        let lam_disc = 1.0 * (m.a33 * d1 - m.a77 * d3);
        let lam_exact = 1.0 * (m.a33 * ex.phi.deriv(1, 0, 1.0, 0.0) - m.a77 * ex.phi.deriv(3, 0, 1.0, 0.0));
        println!("  Lambda row residual: {:.3e}", (lam_disc - lam_exact).abs());
        let dphi_disc = 1.0 * d1;
        let dphi_exact = ex.phi.deriv(1, 0, 1.0, 0.0);
        println!("  dphi row residual: {:.3e}", (dphi_disc - dphi_exact).abs());
        let (s2, c2) = end_stencil(2, true, n, h).unwrap();
        let d2l: f64 = c2.iter().enumerate().map(|(j, c)| c * phi[s2 + j]).sum();
        println!("  H row residual: {:.3e}", (m.a77 * (d2l - ex.phi.deriv(2, 0, 0.0, 0.0))).abs());
    }
}
