//! Constitutive coefficient tensors of the 3D theory.
//!
//! Tensors are stored as dense component arrays (3^4 and 3^6 entries) —
//! clarity over memory at this scale. `symmetrize` is the orthogonal
//! projection onto the symmetry class (group averaging over the index
//! permutations), so it is exactly idempotent.

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use ndarray::{Array2, Array4, Array6};

/// The coefficient tensors of the linear constitutive law.
///
/// Symmetry classes:
/// - `a11`, `a77`: minor symmetry in the first pair and major symmetry,
///   `t_ijkl = t_jikl = t_klij`;
/// - `a22`: first-pair minor and major triple symmetry,
///   `t_ijklhm = t_jiklhm = t_lhmijk`;
/// - `a17`: minor symmetry in both pairs (the second-pair symmetry is what
///   makes the electric quadrupole symmetric);
/// - `a23`: minor symmetry in the first pair;
/// - `a14`, `a33`, `a47`, `k`: symmetric second rank.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialTensors {
    pub a11: Array4<f64>,
    pub a17: Array4<f64>,
    pub a14: Array2<f64>,
    pub a22: Array6<f64>,
    pub a23: Array4<f64>,
    pub a33: Array2<f64>,
    pub a77: Array4<f64>,
    pub a47: Array2<f64>,
    pub k: Array2<f64>,
}

const S2: (usize, usize) = (3, 3);
const S4: (usize, usize, usize, usize) = (3, 3, 3, 3);
const S6: (usize, usize, usize, usize, usize, usize) = (3, 3, 3, 3, 3, 3);

impl MaterialTensors {
    pub fn zeros() -> Self {
        MaterialTensors {
            a11: Array4::zeros(S4),
            a17: Array4::zeros(S4),
            a14: Array2::zeros(S2),
            a22: Array6::zeros(S6),
            a23: Array4::zeros(S4),
            a33: Array2::zeros(S2),
            a77: Array4::zeros(S4),
            a47: Array2::zeros(S2),
            k: Array2::zeros(S2),
        }
    }

    /// Validates the array shapes (3 in every axis).
    pub fn check_shapes(&self) -> Result<()> {
        let ok = self.a11.dim() == S4
            && self.a17.dim() == S4
            && self.a22.dim() == S6
            && self.a23.dim() == S4
            && self.a77.dim() == S4
            && self.a14.dim() == S2
            && self.a33.dim() == S2
            && self.a47.dim() == S2
            && self.k.dim() == S2;
        if ok {
            Ok(())
        } else {
            Err(Error::Shape("material tensors must be 3 in every axis".into()))
        }
    }
}

/// Scalar material data plus the coefficient tensors.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialModel {
    pub rho: f64,
    pub t0: f64,
    pub c: f64,
    pub beta: f64,
    pub gamma: f64,
    pub tensors: MaterialTensors,
}

impl MaterialModel {
    pub fn new(
        rho: f64,
        t0: f64,
        c: f64,
        beta: f64,
        gamma: f64,
        tensors: MaterialTensors,
    ) -> Result<Self> {
        if !(rho > 0.0) {
            return Err(Error::Material(format!("rho must be positive, got {rho}")));
        }
        if !(t0 > 0.0) {
            return Err(Error::Material(format!("T0 must be positive, got {t0}")));
        }
        if c == 0.0 || !c.is_finite() {
            return Err(Error::Material("c must be nonzero".into()));
        }
        if beta == 0.0 || !beta.is_finite() {
            return Err(Error::Material("beta must be nonzero".into()));
        }
        tensors.check_shapes()?;
        Ok(MaterialModel {
            rho,
            t0,
            c,
            beta,
            gamma,
            tensors,
        })
    }

    /// `beta' = beta + gamma / (c beta)`, always derived, never stored.
    pub fn beta_prime(&self) -> f64 {
        self.beta + self.gamma / (self.c * self.beta)
    }
}

fn sym2(a: &Array2<f64>) -> Array2<f64> {
    let mut out = Array2::zeros(S2);
    for i in 0..3 {
        for j in 0..3 {
            out[(i, j)] = 0.5 * (a[(i, j)] + a[(j, i)]);
        }
    }
    out
}

/// Average over the 8-element group generated by the first-pair swap and the
/// major transposition (the `a11` / `a77` class).
fn sym4_minor_major(a: &Array4<f64>) -> Array4<f64> {
    let mut out = Array4::zeros(S4);
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    out[(i, j, k, l)] = (a[(i, j, k, l)]
                        + a[(j, i, k, l)]
                        + a[(i, j, l, k)]
                        + a[(j, i, l, k)]
                        + a[(k, l, i, j)]
                        + a[(l, k, i, j)]
                        + a[(k, l, j, i)]
                        + a[(l, k, j, i)])
                        / 8.0;
                }
            }
        }
    }
    out
}

/// Average over both minor pair swaps, no major symmetry (the `a17` class).
fn sym4_both_pairs(a: &Array4<f64>) -> Array4<f64> {
    let mut out = Array4::zeros(S4);
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    out[(i, j, k, l)] = (a[(i, j, k, l)]
                        + a[(j, i, k, l)]
                        + a[(i, j, l, k)]
                        + a[(j, i, l, k)])
                        / 4.0;
                }
            }
        }
    }
    out
}

/// Average over the first-pair swap only (the `a23` class).
fn sym4_first_pair(a: &Array4<f64>) -> Array4<f64> {
    let mut out = Array4::zeros(S4);
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    out[(i, j, k, l)] = 0.5 * (a[(i, j, k, l)] + a[(j, i, k, l)]);
                }
            }
        }
    }
    out
}

/// Average over the 8-element group of the `a22` class: swaps within the
/// first pair of each triple and the major triple exchange.
fn sym6(a: &Array6<f64>) -> Array6<f64> {
    let mut out = Array6::zeros(S6);
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    for h in 0..3 {
                        for m in 0..3 {
                            out[(i, j, k, l, h, m)] = (a[(i, j, k, l, h, m)]
                                + a[(j, i, k, l, h, m)]
                                + a[(i, j, k, h, l, m)]
                                + a[(j, i, k, h, l, m)]
                                + a[(l, h, m, i, j, k)]
                                + a[(h, l, m, i, j, k)]
                                + a[(l, h, m, j, i, k)]
                                + a[(h, l, m, j, i, k)])
                                / 8.0;
                        }
                    }
                }
            }
        }
    }
    out
}

/// Orthogonal projection of raw coefficient arrays onto the symmetry class
/// of each tensor. Idempotent.
pub fn symmetrize(raw: &MaterialTensors) -> Result<MaterialTensors> {
    raw.check_shapes()?;
    Ok(MaterialTensors {
        a11: sym4_minor_major(&raw.a11),
        a17: sym4_both_pairs(&raw.a17),
        a14: sym2(&raw.a14),
        a22: sym6(&raw.a22),
        a23: sym4_first_pair(&raw.a23),
        a33: sym2(&raw.a33),
        a77: sym4_minor_major(&raw.a77),
        a47: sym2(&raw.a47),
        k: sym2(&raw.k),
    })
}

/// One violated symmetry identity and its worst componentwise residual.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryViolation {
    pub identity: String,
    pub max_residual: f64,
}

fn max_resid4(a: &Array4<f64>, perm: impl Fn(usize, usize, usize, usize) -> f64) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    worst = worst.max((a[(i, j, k, l)] - perm(i, j, k, l)).abs());
                }
            }
        }
    }
    worst
}

fn max_resid2(a: &Array2<f64>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            worst = worst.max((a[(i, j)] - a[(j, i)]).abs());
        }
    }
    worst
}

/// Checks every symmetry identity componentwise; returns the violated ones.
/// Empty report iff all identities hold within `tol`.
pub fn validate_symmetries(t: &MaterialTensors, tol: f64) -> Vec<SymmetryViolation> {
    let mut report = Vec::new();
    let mut push = |identity: &str, residual: f64| {
        if residual > tol {
            report.push(SymmetryViolation {
                identity: identity.to_string(),
                max_residual: residual,
            });
        }
    };

    push("a11 minor (first pair)", max_resid4(&t.a11, |i, j, k, l| t.a11[(j, i, k, l)]));
    push("a11 major", max_resid4(&t.a11, |i, j, k, l| t.a11[(k, l, i, j)]));
    push("a17 minor (first pair)", max_resid4(&t.a17, |i, j, k, l| t.a17[(j, i, k, l)]));
    push("a17 minor (second pair)", max_resid4(&t.a17, |i, j, k, l| t.a17[(i, j, l, k)]));
    push("a23 minor (first pair)", max_resid4(&t.a23, |i, j, k, l| t.a23[(j, i, k, l)]));
    push("a77 minor (first pair)", max_resid4(&t.a77, |i, j, k, l| t.a77[(j, i, k, l)]));
    push("a77 major", max_resid4(&t.a77, |i, j, k, l| t.a77[(k, l, i, j)]));

    let mut worst_first = 0.0f64;
    let mut worst_major = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    for h in 0..3 {
                        for m in 0..3 {
                            let v = t.a22[(i, j, k, l, h, m)];
                            worst_first = worst_first.max((v - t.a22[(j, i, k, l, h, m)]).abs());
                            worst_major = worst_major.max((v - t.a22[(l, h, m, i, j, k)]).abs());
                        }
                    }
                }
            }
        }
    }
    push("a22 minor (first pair)", worst_first);
    push("a22 major (triple exchange)", worst_major);

    push("a14 symmetry", max_resid2(&t.a14));
    push("a33 symmetry", max_resid2(&t.a33));
    push("a47 symmetry", max_resid2(&t.a47));
    push("k symmetry", max_resid2(&t.k));

    report
}

/// The dissipation quadratic form `(gamma/beta) xi^2 + k_ij eta_i eta_j`.
pub fn dissipation_form(model: &MaterialModel, xi: f64, eta: [f64; 3]) -> f64 {
    let mut p = model.gamma / model.beta * xi * xi;
    for i in 0..3 {
        for j in 0..3 {
            p += model.tensors.k[(i, j)] * eta[i] * eta[j];
        }
    }
    p
}

/// Which part of the semi-definiteness conditions fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DissipationViolation {
    /// `gamma / beta < 0`
    GammaBetaSign,
    /// symmetrized `k` has an eigenvalue below `-tol`
    ConductivityNotPsd,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DissipationReport {
    pub admissible: bool,
    pub violations: Vec<DissipationViolation>,
    pub min_k_eigenvalue: f64,
}

/// Checks the two equivalent conditions for the dissipation form to be
/// positive semi-definite: `gamma/beta >= 0` and `k` PSD. The PSD test uses
/// an eigenvalue threshold of `-1e-12 * max|k|` rather than exact zero.
pub fn classify_dissipation(model: &MaterialModel) -> DissipationReport {
    let mut violations = Vec::new();
    if model.gamma / model.beta < 0.0 {
        violations.push(DissipationViolation::GammaBetaSign);
    }
    let ks = sym2(&model.tensors.k);
    let m = DMatrix::from_fn(3, 3, |i, j| ks[(i, j)]);
    let eigs = m.symmetric_eigenvalues();
    let min_eig = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
    let scale = model.tensors.k.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if min_eig < -1e-12 * scale {
        violations.push(DissipationViolation::ConductivityNotPsd);
    }
    DissipationReport {
        admissible: violations.is_empty(),
        violations,
        min_k_eigenvalue: min_eig,
    }
}

/// Mandel-weighted 9x9 matrix of the internal-energy quadratic form
/// `F(E, V) = a33_ji E_j E_i + a77_jikl V_kl V_ji` on `R^3 (+) Sym(3)`.
///
/// Coordinates: `(E1, E2, E3, V11, V22, V33, s2*V12, s2*V13, s2*V23)` with
/// `s2 = sqrt(2)`, so the Euclidean form of the matrix equals the tensor
/// contraction.
pub fn f_form_matrix(t: &MaterialTensors) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(9, 9);
    let a33 = sym2(&t.a33);
    for i in 0..3 {
        for j in 0..3 {
            m[(i, j)] = a33[(i, j)];
        }
    }
    let pairs = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)];
    let w = |p: usize| if p < 3 { 1.0 } else { std::f64::consts::SQRT_2 };
    // symmetrized a77 as a form on Sym(3)
    let a77 = sym4_minor_major(&t.a77);
    for (p, &(i, j)) in pairs.iter().enumerate() {
        for (q, &(k, l)) in pairs.iter().enumerate() {
            m[(3 + p, 3 + q)] = w(p) * w(q) * a77[(i, j, k, l)];
        }
    }
    m
}

/// Evaluates `F(E, V)` through the Mandel matrix (the componentwise
/// contraction serves as the independent oracle in tests).
pub fn internal_energy_form_f(t: &MaterialTensors, e_field: [f64; 3], v: &Array2<f64>) -> Result<f64> {
    if v.dim() != S2 {
        return Err(Error::Shape("V must be 3x3".into()));
    }
    let asym = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .map(|(i, j)| (v[(i, j)] - v[(j, i)]).abs())
        .fold(0.0f64, f64::max);
    let scale = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if asym > 1e-12 * scale.max(1.0) {
        return Err(Error::Shape("V must be symmetric".into()));
    }
    let m = f_form_matrix(t);
    let s2 = std::f64::consts::SQRT_2;
    let z = [
        e_field[0],
        e_field[1],
        e_field[2],
        v[(0, 0)],
        v[(1, 1)],
        v[(2, 2)],
        s2 * v[(0, 1)],
        s2 * v[(0, 2)],
        s2 * v[(1, 2)],
    ];
    let mut f = 0.0;
    for (p, zp) in z.iter().enumerate() {
        for (q, zq) in z.iter().enumerate() {
            f += zp * m[(p, q)] * zq;
        }
    }
    Ok(f)
}

/// Sign classification of a quadratic form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Definiteness {
    PositiveDefinite,
    NegativeDefinite,
    Indefinite,
    SemiDefinite,
}

/// Classifies `F` by the eigenvalues of its 9-dimensional block form.
/// "Definite" is accepted in either sign; the result reports which.
pub fn classify_f(t: &MaterialTensors) -> Definiteness {
    let m = f_form_matrix(t);
    let eigs = m.symmetric_eigenvalues();
    let scale = eigs.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let tol = 1e-12 * scale.max(f64::MIN_POSITIVE);
    let pos = eigs.iter().any(|&v| v > tol);
    let neg = eigs.iter().any(|&v| v < -tol);
    let zero = eigs.iter().any(|&v| v.abs() <= tol);
    match (pos, neg, zero) {
        (true, true, _) => Definiteness::Indefinite,
        (true, false, false) => Definiteness::PositiveDefinite,
        (false, true, false) => Definiteness::NegativeDefinite,
        _ => Definiteness::SemiDefinite,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::Array2;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_tensors(rng: &mut impl Rng) -> MaterialTensors {
        let mut t = MaterialTensors::zeros();
        t.a11.mapv_inplace(|_| rng.gen_range(-1.0..1.0));
        t.a17.mapv_inplace(|_| rng.gen_range(-1.0..1.0));
        t.a14.mapv_inplace(|_| rng.gen_range(-1.0..1.0));
        t.a22.mapv_inplace(|_| rng.gen_range(-1.0..1.0));
        t.a23.mapv_inplace(|_| rng.gen_range(-1.0..1.0));
        t.a33.mapv_inplace(|_| rng.gen_range(-1.0..1.0));
        t.a77.mapv_inplace(|_| rng.gen_range(-1.0..1.0));
        t.a47.mapv_inplace(|_| rng.gen_range(-1.0..1.0));
        t.k.mapv_inplace(|_| rng.gen_range(-1.0..1.0));
        t
    }

    fn max_component_diff(a: &MaterialTensors, b: &MaterialTensors) -> f64 {
        let d4 = |x: &Array4<f64>, y: &Array4<f64>| {
            x.iter()
                .zip(y.iter())
                .map(|(p, q)| (p - q).abs())
                .fold(0.0f64, f64::max)
        };
        let d2 = |x: &Array2<f64>, y: &Array2<f64>| {
            x.iter()
                .zip(y.iter())
                .map(|(p, q)| (p - q).abs())
                .fold(0.0f64, f64::max)
        };
        let d6 = a
            .a22
            .iter()
            .zip(b.a22.iter())
            .map(|(p, q)| (p - q).abs())
            .fold(0.0f64, f64::max);
        [
            d4(&a.a11, &b.a11),
            d4(&a.a17, &b.a17),
            d4(&a.a23, &b.a23),
            d4(&a.a77, &b.a77),
            d2(&a.a14, &b.a14),
            d2(&a.a33, &b.a33),
            d2(&a.a47, &b.a47),
            d2(&a.k, &b.k),
            d6,
        ]
        .into_iter()
        .fold(0.0f64, f64::max)
    }

    #[test]
    fn symmetrize_is_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let raw = random_tensors(&mut rng);
        let s1 = symmetrize(&raw).unwrap();
        let s2 = symmetrize(&s1).unwrap();
        assert!(max_component_diff(&s1, &s2) <= 1e-14);
    }

    #[test]
    fn symmetrize_fixes_symmetric_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = symmetrize(&random_tensors(&mut rng)).unwrap();
        let again = symmetrize(&s).unwrap();
        assert!(max_component_diff(&s, &again) <= 1e-14);
        assert!(validate_symmetries(&s, 1e-13).is_empty());
    }

    #[test]
    fn symmetrize_2x2_subblock() {
        let mut t = MaterialTensors::zeros();
        t.a14[(0, 0)] = 1.0;
        t.a14[(0, 1)] = 2.0;
        t.a14[(1, 0)] = 0.0;
        t.a14[(1, 1)] = 1.0;
        let s = symmetrize(&t).unwrap();
        assert_abs_diff_eq!(s.a14[(0, 0)], 1.0);
        assert_abs_diff_eq!(s.a14[(0, 1)], 1.0);
        assert_abs_diff_eq!(s.a14[(1, 0)], 1.0);
        assert_abs_diff_eq!(s.a14[(1, 1)], 1.0);
    }

    #[test]
    fn random_a11_satisfies_all_permutation_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = symmetrize(&random_tensors(&mut rng)).unwrap();
        let worst = [
            max_resid4(&s.a11, |i, j, k, l| s.a11[(j, i, k, l)]),
            max_resid4(&s.a11, |i, j, k, l| s.a11[(k, l, i, j)]),
            max_resid4(&s.a11, |i, j, k, l| s.a11[(i, j, l, k)]),
        ]
        .into_iter()
        .fold(0.0f64, f64::max);
        assert!(worst <= 1e-14, "a11 residual {worst}");
    }

    #[test]
    fn validate_reports_named_violation() {
        let mut t = MaterialTensors::zeros();
        t.a33[(0, 1)] = 2.0;
        t.a33[(1, 0)] = -1.0;
        let report = validate_symmetries(&t, 1e-12);
        assert_eq!(report.len(), 1);
        assert_eq!(report[0].identity, "a33 symmetry");
        assert_abs_diff_eq!(report[0].max_residual, 3.0);
    }

    #[test]
    fn validate_zero_tensors_is_clean() {
        assert!(validate_symmetries(&MaterialTensors::zeros(), 0.0).is_empty());
    }

    fn model_with(k_diag: [f64; 3], gamma: f64, beta: f64) -> MaterialModel {
        let mut t = MaterialTensors::zeros();
        for i in 0..3 {
            t.k[(i, i)] = k_diag[i];
        }
        MaterialModel::new(1.0, 1.0, -1.0, beta, gamma, t).unwrap()
    }

    #[test]
    fn dissipation_form_hand_value() {
        let m = model_with([1.0, 1.0, 1.0], 1.0, 1.0);
        assert_abs_diff_eq!(dissipation_form(&m, 0.0, [0.0; 3]), 0.0);
        assert_abs_diff_eq!(dissipation_form(&m, 1.0, [1.0, 2.0, 0.0]), 6.0);
    }

    #[test]
    fn dissipation_degenerate_zero() {
        let m = model_with([0.0; 3], 0.0, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let xi = rng.gen_range(-1.0..1.0);
            let eta = [rng.gen(), rng.gen(), rng.gen()];
            assert_abs_diff_eq!(dissipation_form(&m, xi, eta), 0.0);
        }
    }

    #[test]
    fn classify_dissipation_cases() {
        assert!(classify_dissipation(&model_with([1.0, 2.0, 3.0], 1.0, 1.0)).admissible);

        let bad_sign = classify_dissipation(&model_with([1.0, 1.0, 1.0], 1.0, -1.0));
        assert!(!bad_sign.admissible);
        assert!(bad_sign.violations.contains(&DissipationViolation::GammaBetaSign));

        let bad_k = classify_dissipation(&model_with([1.0, 1.0, -1.0], 1.0, 1.0));
        assert!(!bad_k.admissible);
        assert!(bad_k
            .violations
            .contains(&DissipationViolation::ConductivityNotPsd));
    }

    /// Cross-check: admissibility iff 1000 random probes of the form stay
    /// nonnegative (up to the stated tolerance).
    #[test]
    fn dissipation_probing_agrees_with_classifier() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..40 {
            let mut t = random_tensors(&mut rng);
            // half the trials: force an admissible k = A A^T and gamma/beta > 0
            let force_admissible = trial % 2 == 0;
            let (gamma, beta) = if force_admissible {
                (rng.gen_range(0.0..2.0), rng.gen_range(0.1..2.0))
            } else {
                (rng.gen_range(-2.0..2.0), rng.gen_range(0.1..2.0))
            };
            if force_admissible {
                let a = t.k.clone();
                t.k = a.dot(&a.t());
            }
            let model = MaterialModel::new(1.0, 1.0, -1.0, beta, gamma, t).unwrap();
            let report = classify_dissipation(&model);
            let scale = model
                .tensors
                .k
                .iter()
                .fold((model.gamma / model.beta).abs(), |a, v| a.max(v.abs()));
            let mut min_p = f64::INFINITY;
            for _ in 0..1000 {
                let xi = rng.gen_range(-1.0..1.0);
                let eta = [
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                ];
                min_p = min_p.min(dissipation_form(&model, xi, eta));
            }
            if report.admissible {
                assert!(
                    min_p >= -1e-10 * scale,
                    "admissible model probed negative: {min_p}"
                );
            }
        }
    }

    #[test]
    fn f_form_identity_case() {
        let mut t = MaterialTensors::zeros();
        for i in 0..3 {
            t.a33[(i, i)] = 1.0;
        }
        // identity on symmetric pairs
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let v = 0.5
                            * ((i == k) as i32 * (j == l) as i32
                                + (i == l) as i32 * (j == k) as i32) as f64;
                        t.a77[(i, j, k, l)] = v;
                    }
                }
            }
        }
        let zero_v = Array2::zeros((3, 3));
        assert_abs_diff_eq!(
            internal_energy_form_f(&t, [0.0; 3], &zero_v).unwrap(),
            0.0
        );
        assert_abs_diff_eq!(
            internal_energy_form_f(&t, [1.0, 0.0, 0.0], &zero_v).unwrap(),
            1.0
        );
        assert_eq!(classify_f(&t), Definiteness::PositiveDefinite);

        t.a33.mapv_inplace(|v| -v);
        t.a77.mapv_inplace(|v| -v);
        assert_eq!(classify_f(&t), Definiteness::NegativeDefinite);

        t.a77.mapv_inplace(|_| 0.0);
        assert_eq!(classify_f(&t), Definiteness::SemiDefinite);
    }

    /// Brute-force componentwise contraction oracle for the F form.
    fn f_oracle(t: &MaterialTensors, e: [f64; 3], v: &Array2<f64>) -> f64 {
        let mut f = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                f += t.a33[(j, i)] * e[j] * e[i];
                for k in 0..3 {
                    for l in 0..3 {
                        f += t.a77[(j, i, k, l)] * v[(k, l)] * v[(j, i)];
                    }
                }
            }
        }
        f
    }

    #[test]
    fn f_form_matches_contraction_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let t = random_tensors(&mut rng);
            let e = [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ];
            let mut v = Array2::zeros((3, 3));
            for i in 0..3 {
                for j in i..3 {
                    let val = rng.gen_range(-1.0..1.0);
                    v[(i, j)] = val;
                    v[(j, i)] = val;
                }
            }
            let got = internal_energy_form_f(&t, e, &v).unwrap();
            let want = f_oracle(&t, e, &v);
            let scale = got.abs().max(want.abs()).max(1e-30);
            assert!(
                ((got - want) / scale).abs() <= 1e-13,
                "relative error {}",
                ((got - want) / scale).abs()
            );
        }
    }

    #[test]
    fn asymmetric_v_rejected() {
        let t = MaterialTensors::zeros();
        let mut v = Array2::zeros((3, 3));
        v[(0, 1)] = 1.0;
        assert!(internal_energy_form_f(&t, [0.0; 3], &v).is_err());
    }

    #[test]
    fn indefinite_form_detected() {
        let mut t = MaterialTensors::zeros();
        t.a33[(0, 0)] = 1.0;
        t.a33[(1, 1)] = -1.0;
        assert_eq!(classify_f(&t), Definiteness::Indefinite);
    }
}
