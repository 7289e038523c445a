use tpz_core::convolution::*;

fn main() {
    for lvl in 0..4 {
        let n = 40 * (1 << lvl) + 1;
        let dt = 1.0 / (n - 1) as f64;
        let f = TimeSeries::from_fn(dt, n, |t| (2.0 * t).sin()).unwrap();
        let g = TimeSeries::from_fn(dt, n, |t| (1.5 * t).cos()).unwrap();
        let h = TimeSeries::from_fn(dt, n, |t| t * t).unwrap();
        let lhs = convolve(&convolve(&f, &g).unwrap(), &h).unwrap();
        let rhs = convolve(&f, &convolve(&g, &h).unwrap()).unwrap();
        let err = lhs
            .samples
            .iter()
            .zip(rhs.samples.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        println!("n={n} assoc err {err:.3e}");
    }
}
