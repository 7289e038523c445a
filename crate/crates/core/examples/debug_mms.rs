use tpz_core::kinematics::Grid1D;
use tpz_core::manufactured::*;
use tpz_core::scenario::TimeParams;
use tpz_core::solver1d::*;

fn main() {
    for n in [21usize, 41, 81] {
        let ex = ExactFields::trig();
        let grid = Grid1D::new(n, 0.0, 1.0).unwrap();
        let t_final = 0.5;
        let dt = t_final / (n - 1) as f64;
        let (l, r) = mixed_kinds();
        let sc = manufactured_source(
            &ex,
            reference_material(),
            grid,
            l,
            r,
            TimeParams { t_final, dt },
        );
        let hist = solve(&sc).unwrap();
        let m = sc.material;

        // nodal max-over-time error profile
        let mut eu = vec![0.0f64; n];
        let mut eth = vec![0.0f64; n];
        let mut eph = vec![0.0f64; n];
        let mut eps = vec![0.0f64; n];
        for (k, &t) in hist.times.iter().enumerate() {
            for i in 0..n {
                let x = grid.node(i);
                eu[i] = eu[i].max((hist.u[(i, k)] - ex.u.eval(x, t)).abs());
                eth[i] = eth[i].max((hist.theta[(i, k)] - ex.theta.eval(x, t)).abs());
                eph[i] = eph[i].max((hist.phi[(i, k)] - ex.phi.eval(x, t)).abs());
                eps[i] = eps[i].max((hist.psi[(i, k)] - ex.theta.deriv(0, 1, x, t)).abs());
            }
        }
        println!("n = {n}");
        println!("  max eu = {:.3e} at node {}", eu.iter().cloned().fold(0.0, f64::max), eu.iter().enumerate().max_by(|a, b| a.1.partial_cmp(b.1).unwrap()).unwrap().0);
        println!("  max eth = {:.3e} at node {}", eth.iter().cloned().fold(0.0, f64::max), eth.iter().enumerate().max_by(|a, b| a.1.partial_cmp(b.1).unwrap()).unwrap().0);
        println!("  max eph = {:.3e} at node {}", eph.iter().cloned().fold(0.0, f64::max), eph.iter().enumerate().max_by(|a, b| a.1.partial_cmp(b.1).unwrap()).unwrap().0);
        println!("  max eps = {:.3e} at node {}", eps.iter().cloned().fold(0.0, f64::max), eps.iter().enumerate().max_by(|a, b| a.1.partial_cmp(b.1).unwrap()).unwrap().0);
        println!("  profile eu first/last 3: {:?} {:?}", &eu[..3], &eu[n - 3..]);
        println!("  profile eph first/last 3: {:?} {:?}", &eph[..3], &eph[n - 3..]);

        // traction components at t = 0.5 vs exact, left end
        let t = 0.5;
        let k = hist.step_of(t).unwrap();
        let x = 0.0;
        let nn = -1.0;
        let p_exact = nn
            * (m.a11 * ex.u.deriv(1, 0, x, t) - m.a22 * ex.u.deriv(3, 0, x, t)
                + (m.a23 - m.a17) * ex.phi.deriv(2, 0, x, t)
                + m.a14 * (ex.theta.eval(x, t) + m.beta * ex.theta.deriv(0, 1, x, t)));
        let r_exact = m.a22 * ex.u.deriv(2, 0, x, t) - m.a23 * ex.phi.deriv(1, 0, x, t);
        let l_exact = nn
            * ((m.a17 - m.a23) * ex.u.deriv(2, 0, x, t) + m.a33 * ex.phi.deriv(1, 0, x, t)
                - m.a77 * ex.phi.deriv(3, 0, x, t)
                + m.a47 * (ex.theta.deriv(1, 0, x, t) + m.beta * ex.theta.deriv(1, 1, x, t)));
        let h_exact = -m.a17 * ex.u.deriv(1, 0, x, t) + m.a77 * ex.phi.deriv(2, 0, x, t)
            - m.a47 * (ex.theta.eval(x, t) + m.beta * ex.theta.deriv(0, 1, x, t));
        let q_exact = nn * (-m.t0 * m.k * ex.theta.deriv(1, 0, x, t));
        let set = hist.traction(true, k);
        println!(
            "  left tractions err: p {:.3e}  r {:.3e}  lam {:.3e}  h {:.3e}  q {:.3e}",
            set.p - p_exact,
            set.r - r_exact,
            set.lambda - l_exact,
            set.h - h_exact,
            set.q - q_exact
        );

        // decompose the left-end P recovery at t = 0.5
        {
            let k = hist.step_of(0.5).unwrap();
            let t = 0.5;
            let h = grid.h();
            let anchor = 4usize;
            let u: Vec<f64> = (0..n).map(|i| hist.u[(i, k)]).collect();
            let th: Vec<f64> = (0..n).map(|i| hist.theta[(i, k)]).collect();
            let ps: Vec<f64> = (0..n).map(|i| hist.psi[(i, k)]).collect();
            let ph: Vec<f64> = (0..n).map(|i| hist.phi[(i, k)]).collect();
            let st = |vals: &[f64], order: usize, node: usize| -> f64 {
                let (s, c) = tpz_core::kinematics::deriv_stencil(order, node, n, h).unwrap();
                c.iter().enumerate().map(|(j, cj)| cj * vals[s + j]).sum()
            };
            let f_anchor = m.a11 * st(&u, 1, anchor) - m.a22 * st(&u, 3, anchor)
                + (m.a23 - m.a17) * st(&ph, 2, anchor)
                + m.a14 * (th[anchor] + m.beta * ps[anchor]);
            let xa = grid.node(anchor);
            let f_anchor_exact = m.a11 * ex.u.deriv(1, 0, xa, t) - m.a22 * ex.u.deriv(3, 0, xa, t)
                + (m.a23 - m.a17) * ex.phi.deriv(2, 0, xa, t)
                + m.a14 * (ex.theta.eval(xa, t) + m.beta * ex.theta.deriv(0, 1, xa, t));
            println!("  F(anchor) err = {:.3e}", f_anchor - f_anchor_exact);
            println!("    a11 D1u err = {:.3e}", m.a11 * (st(&u, 1, anchor) - ex.u.deriv(1, 0, xa, t)));
            println!("    a22 D3u err = {:.3e}", m.a22 * (st(&u, 3, anchor) - ex.u.deriv(3, 0, xa, t)));
            println!("    D2phi term err = {:.3e}", (m.a23 - m.a17) * (st(&ph, 2, anchor) - ex.phi.deriv(2, 0, xa, t)));
            println!("    a14 Ath err = {:.3e}", m.a14 * (th[anchor] + m.beta * ps[anchor]
                - (ex.theta.eval(xa, t) + m.beta * ex.theta.deriv(0, 1, xa, t))));
        }
        let set = hist.traction(false, k);
        let x = 1.0;
        let nn = 1.0;
        let p_exact = nn
            * (m.a11 * ex.u.deriv(1, 0, x, t) - m.a22 * ex.u.deriv(3, 0, x, t)
                + (m.a23 - m.a17) * ex.phi.deriv(2, 0, x, t)
                + m.a14 * (ex.theta.eval(x, t) + m.beta * ex.theta.deriv(0, 1, x, t)));
        let r_exact = m.a22 * ex.u.deriv(2, 0, x, t) - m.a23 * ex.phi.deriv(1, 0, x, t);
        let l_exact = nn
            * ((m.a17 - m.a23) * ex.u.deriv(2, 0, x, t) + m.a33 * ex.phi.deriv(1, 0, x, t)
                - m.a77 * ex.phi.deriv(3, 0, x, t)
                + m.a47 * (ex.theta.deriv(1, 0, x, t) + m.beta * ex.theta.deriv(1, 1, x, t)));
        let h_exact = -m.a17 * ex.u.deriv(1, 0, x, t) + m.a77 * ex.phi.deriv(2, 0, x, t)
            - m.a47 * (ex.theta.eval(x, t) + m.beta * ex.theta.deriv(0, 1, x, t));
        let q_exact = nn * (-m.t0 * m.k * ex.theta.deriv(1, 0, x, t));
        println!(
            "  right tractions err: p {:.3e}  r {:.3e}  lam {:.3e}  h {:.3e}  q {:.3e}",
            set.p - p_exact,
            set.r - r_exact,
            set.lambda - l_exact,
            set.h - h_exact,
            set.q - q_exact
        );
    }
}

#[allow(dead_code)]
fn decompose() {}
