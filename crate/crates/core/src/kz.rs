//! Four-point KZ connection on conformal blocks, its monodromy, and the braiding matrix.
//!
//! Blocks satisfy `dG/dx = (P/x + Q/(x - 1)) G`. Transport along polygonal paths uses an
//! embedded Dormand-Prince 5(4) pair with PI step control.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

pub const DEFAULT_TOL: f64 = 1e-10;
/// vertices of the polygon standing in for a circle
const CIRCLE_SIDES: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KzError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("path passes within {distance:e} of the singular point {point}")]
    SingularityTooClose { point: f64, distance: f64 },
    #[error("step size underflow near x = {x}")]
    StepUnderflow { x: Complex64 },
    #[error("degenerate points: {0}")]
    DegeneratePoints(String),
}

impl KzError {
    pub fn code(&self) -> &'static str {
        match self {
            KzError::InvalidParams(_) => "invalid_params",
            KzError::SingularityTooClose { .. } => "singularity_too_close",
            KzError::StepUnderflow { .. } => "step_underflow",
            KzError::DegeneratePoints(_) => "degenerate_points",
        }
    }
}

pub type RationalMatrix = [[Rational64; 2]; 2];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KzSystem {
    pub n: i64,
    pub k: i64,
    /// dual Coxeter number of SU(N)
    pub g: i64,
    pub p: RationalMatrix,
    pub q: RationalMatrix,
}

pub fn build_system(n: i64, k: i64) -> Result<KzSystem, KzError> {
    if n < 2 || k < 1 {
        return Err(KzError::InvalidParams(format!(
            "need N >= 2 and k >= 1, got N={n}, k={k}"
        )));
    }
    let s = Rational64::new(-1, n * (n + k));
    let r = |x: i64| s * Rational64::from_integer(x);
    Ok(KzSystem {
        n,
        k,
        g: n,
        p: [[r(n * n - 1), r(n)], [r(0), r(-1)]],
        q: [[r(-1), r(0)], [r(n), r(n * n - 1)]],
    })
}

impl KzSystem {
    /// Diagonal of the triangular residue at 0.
    pub fn p_eigenvalues(&self) -> [Rational64; 2] {
        [self.p[0][0], self.p[1][1]]
    }

    pub fn q_eigenvalues(&self) -> [Rational64; 2] {
        [self.q[0][0], self.q[1][1]]
    }

    pub fn p_matrix(&self) -> Matrix2<Complex64> {
        to_complex(&self.p)
    }

    pub fn q_matrix(&self) -> Matrix2<Complex64> {
        to_complex(&self.q)
    }

    fn field(
        &self,
        p: &Matrix2<Complex64>,
        q: &Matrix2<Complex64>,
        x: Complex64,
    ) -> Matrix2<Complex64> {
        p / x + q / (x - 1.0)
    }
}

fn to_complex(m: &RationalMatrix) -> Matrix2<Complex64> {
    let f = |r: Rational64| Complex64::new(r.to_f64().expect("finite rational"), 0.0);
    Matrix2::new(f(m[0][0]), f(m[0][1]), f(m[1][0]), f(m[1][1]))
}

fn distance_to_segment(a: Complex64, b: Complex64, p: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let s = (((p - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (a + d * s - p).norm()
}

fn max_norm(m: &Matrix2<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

// Dormand-Prince 5(4) tableau
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// fifth-order weights minus embedded fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Transports `g` along the straight segment `a -> b`.
fn transport_segment(
    sys: &KzSystem,
    a: Complex64,
    b: Complex64,
    mut g: Matrix2<Complex64>,
    tol: f64,
) -> Result<Matrix2<Complex64>, KzError> {
    let (p, q) = (sys.p_matrix(), sys.q_matrix());
    let d = b - a;
    let rhs = |s: f64, y: &Matrix2<Complex64>| sys.field(&p, &q, a + d * s) * y * d;
    let mut s = 0.0f64;
    let mut h = 0.05f64;
    let mut err_old = 1e-4f64;
    let mut k: [Matrix2<Complex64>; 7] = [Matrix2::zeros(); 7];
    k[0] = rhs(0.0, &g);
    while s < 1.0 {
        if s + h > 1.0 {
            h = 1.0 - s;
        }
        if h < 1e-14 {
            return Err(KzError::StepUnderflow { x: a + d * s });
        }
        for i in 1..7 {
            let mut y = g;
            for (j, kj) in k.iter().enumerate().take(i) {
                if A[i][j] != 0.0 {
                    y += kj * Complex64::new(h * A[i][j], 0.0);
                }
            }
            k[i] = rhs(s + C[i] * h, &y);
        }
        let mut y_new = g;
        let mut err_vec = Matrix2::zeros();
        for i in 0..7 {
            if i < 6 {
                y_new += k[i] * Complex64::new(h * A[6][i], 0.0);
            }
            err_vec += k[i] * Complex64::new(h * E[i], 0.0);
        }
        let scale = tol * (1.0 + max_norm(&g).max(max_norm(&y_new)));
        let err = max_norm(&err_vec) / scale;
        if err <= 1.0 {
            s += h;
            g = y_new;
            k[0] = k[6];
            let fac = (0.9 * err.max(1e-10).powf(-0.17) * err_old.powf(0.04)).clamp(0.2, 10.0);
            err_old = err.max(1e-4);
            h *= fac;
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
        }
    }
    Ok(g)
}

/// Fundamental solution transported along a polygonal path, starting from the identity.
pub fn integrate(
    sys: &KzSystem,
    path: &[Complex64],
    tol: f64,
) -> Result<Matrix2<Complex64>, KzError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(KzError::InvalidParams(format!("tolerance {tol}")));
    }
    let margin = 10.0 * tol;
    for w in path.windows(2) {
        for point in [0.0, 1.0] {
            let distance = distance_to_segment(w[0], w[1], Complex64::new(point, 0.0));
            if distance < margin {
                return Err(KzError::SingularityTooClose { point, distance });
            }
        }
    }
    if let [only] = path {
        for point in [0.0, 1.0] {
            let distance = (only - point).norm();
            if distance < margin {
                return Err(KzError::SingularityTooClose { point, distance });
            }
        }
    }
    let mut g = Matrix2::identity();
    for w in path.windows(2) {
        if w[0] != w[1] {
            g = transport_segment(sys, w[0], w[1], g, tol)?;
        }
    }
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Singularity {
    Zero,
    One,
}

/// 2x2 complex transport matrix.
pub type MonodromyMatrix = Matrix2<Complex64>;

#[derive(Debug, Clone, PartialEq)]
pub struct MonodromyResult {
    pub around: Singularity,
    pub matrix: MonodromyMatrix,
    pub eigenvalues: [Complex64; 2],
    pub path_tolerance: f64,
}

/// Counter-clockwise polygon around `center`, starting and ending at `center + radius`
/// rotated by `phase`.
fn circle(center: Complex64, radius: f64, phase: f64) -> Vec<Complex64> {
    (0..=CIRCLE_SIDES)
        .map(|i| {
            let t = phase + std::f64::consts::TAU * i as f64 / CIRCLE_SIDES as f64;
            center + Complex64::from_polar(radius, t)
        })
        .collect()
}

/// Closed loop based at `1/4`, radius `1/4` around the chosen point.
pub fn loop_path(around: Singularity) -> Vec<Complex64> {
    let base = Complex64::new(0.25, 0.0);
    match around {
        Singularity::Zero => circle(Complex64::zero(), 0.25, 0.0),
        Singularity::One => {
            let near = Complex64::new(0.75, 0.0);
            let mut path = vec![base];
            path.extend(circle(Complex64::new(1.0, 0.0), 0.25, std::f64::consts::PI));
            path.push(base);
            debug_assert!((path[1] - near).norm() < 1e-15);
            path
        }
    }
}

pub fn monodromy(
    sys: &KzSystem,
    around: Singularity,
    tol: f64,
) -> Result<MonodromyResult, KzError> {
    let matrix = integrate(sys, &loop_path(around), tol)?;
    Ok(MonodromyResult {
        around,
        matrix,
        eigenvalues: eigenvalues2(&matrix),
        path_tolerance: tol,
    })
}

/// Eigenvalues of a 2x2 matrix, ordered by argument.
pub fn eigenvalues2(m: &Matrix2<Complex64>) -> [Complex64; 2] {
    let tr = m[(0, 0)] + m[(1, 1)];
    let det = m.determinant();
    let disc = (tr * tr - det * 4.0).sqrt();
    let mut ev = [(tr + disc) / 2.0, (tr - disc) / 2.0];
    ev.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
    ev
}

/// `exp(2 pi i r)` for an exact exponent.
pub fn phase(r: Rational64) -> Complex64 {
    Complex64::from_polar(
        1.0,
        std::f64::consts::TAU * r.to_f64().expect("finite rational"),
    )
}

/// Largest distance under the better of the two pairings.
pub fn spectrum_distance(a: &[Complex64; 2], b: &[Complex64; 2]) -> f64 {
    let straight = (a[0] - b[0]).norm().max((a[1] - b[1]).norm());
    let crossed = (a[0] - b[1]).norm().max((a[1] - b[0]).norm());
    straight.min(crossed)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkeinCoefficients {
    pub a: Complex64,
    pub b: Complex64,
    pub residual: f64,
}

/// `a = det B`, `b = tr B` and the Frobenius norm of `B^2 - bB + aI`.
pub fn skein_coefficients(m: &Matrix2<Complex64>) -> SkeinCoefficients {
    let a = m.determinant();
    let b = m.trace();
    let r = m * m - m * b + Matrix2::identity() * a;
    SkeinCoefficients {
        a,
        b,
        residual: r.norm(),
    }
}

pub fn conformal_weight(n: i64, k: i64) -> Result<Rational64, KzError> {
    if n < 2 || k < 1 {
        return Err(KzError::InvalidParams(format!(
            "need N >= 2 and k >= 1, got N={n}, k={k}"
        )));
    }
    Ok(Rational64::new(n * n - 1, 2 * n * (n + k)))
}

pub fn central_charge(k: i64, d: i64, g: i64) -> Result<Rational64, KzError> {
    if k < 1 || d < 1 || g < 1 {
        return Err(KzError::InvalidParams(format!(
            "need positive k, d, g, got {k}, {d}, {g}"
        )));
    }
    Ok(Rational64::new(k * d, k + g))
}

pub fn cross_ratio(
    z1: Complex64,
    z2: Complex64,
    z3: Complex64,
    z4: Complex64,
) -> Result<Complex64, KzError> {
    if z1 == z3 || z2 == z4 {
        return Err(KzError::DegeneratePoints("z1 = z3 or z2 = z4".into()));
    }
    Ok((z1 - z2) * (z3 - z4) / ((z1 - z3) * (z2 - z4)))
}

/// Hermitian basis of su(N) with `tr(t^a t^b) = delta_ab / 2`.
pub fn generators(n: usize) -> Vec<DMatrix<Complex64>> {
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let mut out = Vec::with_capacity(n * n - 1);
    for j in 0..n {
        for k in j + 1..n {
            let mut s = DMatrix::zeros(n, n);
            s[(j, k)] = one * 0.5;
            s[(k, j)] = one * 0.5;
            out.push(s);
            let mut a = DMatrix::zeros(n, n);
            a[(j, k)] = -i * 0.5;
            a[(k, j)] = i * 0.5;
            out.push(a);
        }
    }
    for l in 1..n {
        let c = (1.0 / (2.0 * (l * (l + 1)) as f64)).sqrt();
        let mut d = DMatrix::zeros(n, n);
        for j in 0..l {
            d[(j, j)] = one * c;
        }
        d[(l, l)] = one * (-(l as f64) * c);
        out.push(d);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix {
    pub n: i64,
    pub k: i64,
    /// `(1/(k+N)) sum_a t^a (x) t^a`
    pub t_hat: DMatrix<Complex64>,
    pub t_eigenvalues: Vec<f64>,
    /// `exp(i pi t_hat)`
    pub r: DMatrix<Complex64>,
}

pub fn r_matrix(n: i64, k: i64) -> Result<CouplingMatrix, KzError> {
    if n < 2 || k < 1 {
        return Err(KzError::InvalidParams(format!(
            "need N >= 2 and k >= 1, got N={n}, k={k}"
        )));
    }
    let dim = n as usize;
    let mut sum = DMatrix::<Complex64>::zeros(dim * dim, dim * dim);
    for t in generators(dim) {
        sum += t.kronecker(&t);
    }
    let t_hat = sum / Complex64::new((k + n) as f64, 0.0);
    let eig = t_hat.clone().symmetric_eigen();
    let phases = DMatrix::from_diagonal(
        &eig.eigenvalues
            .map(|l| Complex64::from_polar(1.0, std::f64::consts::PI * l)),
    );
    let v = &eig.eigenvectors;
    let r = v * phases * v.adjoint();
    let mut t_eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    t_eigenvalues.sort_by(f64::total_cmp);
    Ok(CouplingMatrix {
        n,
        k,
        t_hat,
        t_eigenvalues,
        r,
    })
}

/// Exchange of the two tensor factors of `C^n (x) C^n`.
pub fn swap_matrix(n: usize) -> DMatrix<Complex64> {
    let mut s = DMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            s[(i * n + j, j * n + i)] = Complex64::new(1.0, 0.0);
        }
    }
    s
}

pub fn unitarity_defect(m: &DMatrix<Complex64>) -> f64 {
    let id = DMatrix::<Complex64>::identity(m.nrows(), m.ncols());
    (m.adjoint() * m - id).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    const PAIRS: [(i64, i64); 4] = [(2, 1), (2, 2), (2, 3), (3, 2)];

    #[test]
    fn residues() {
        let s = build_system(2, 1).unwrap();
        assert_eq!(s.p, [[r(-1, 2), r(-1, 3)], [r(0, 1), r(1, 6)]]);
        assert_eq!(s.p_eigenvalues(), [r(-1, 2), r(1, 6)]);
        assert_eq!(
            build_system(2, 2).unwrap().p_eigenvalues(),
            [r(-3, 8), r(1, 8)]
        );
        assert_eq!(
            build_system(3, 2).unwrap().p_eigenvalues(),
            [r(-8, 15), r(1, 15)]
        );
        assert_eq!(build_system(1, 1).unwrap_err().code(), "invalid_params");
        assert_eq!(build_system(2, 0).unwrap_err().code(), "invalid_params");
    }

    #[test]
    fn constant_path_is_identity() {
        let s = build_system(2, 1).unwrap();
        let x = Complex64::new(0.3, 0.2);
        assert_eq!(integrate(&s, &[x, x], 1e-10).unwrap(), Matrix2::identity());
        assert_eq!(integrate(&s, &[x], 1e-10).unwrap(), Matrix2::identity());
    }

    #[test]
    fn path_then_reverse_is_identity() {
        let s = build_system(2, 3).unwrap();
        let path = vec![
            Complex64::new(0.25, 0.0),
            Complex64::new(0.5, 0.4),
            Complex64::new(2.0, -0.5),
        ];
        let mut back = path.clone();
        back.reverse();
        let tol = 1e-10;
        let g = integrate(&s, &path, tol).unwrap();
        let h = integrate(&s, &back, tol).unwrap();
        assert!(max_norm(&(h * g - Matrix2::identity())) < 10.0 * tol * 100.0);
    }

    #[test]
    fn refinement_does_not_degrade() {
        let s = build_system(3, 2).unwrap();
        let path = loop_path(Singularity::Zero);
        let mut back = path.clone();
        back.reverse();
        let defect = |tol: f64| {
            let g = integrate(&s, &path, tol).unwrap();
            let h = integrate(&s, &back, tol).unwrap();
            max_norm(&(h * g - Matrix2::identity()))
        };
        let mut prev = defect(1e-6);
        for tol in [5e-7, 2.5e-7, 1.25e-7] {
            let d = defect(tol);
            assert!(d <= 2.0 * prev + 1e-14, "tol {tol}: {d} vs {prev}");
            prev = d;
        }
    }

    #[test]
    fn loop_eigenvalues_match_residues() {
        for (n, k) in PAIRS {
            let s = build_system(n, k).unwrap();
            let exact0 = s.p_eigenvalues().map(phase);
            let exact1 = s.q_eigenvalues().map(phase);
            let m0 = monodromy(&s, Singularity::Zero, DEFAULT_TOL).unwrap();
            let m1 = monodromy(&s, Singularity::One, DEFAULT_TOL).unwrap();
            assert!(
                spectrum_distance(&m0.eigenvalues, &exact0) < 1e-6,
                "({n},{k}) around 0"
            );
            assert!(
                spectrum_distance(&m1.eigenvalues, &exact1) < 1e-6,
                "({n},{k}) around 1"
            );
            assert!(skein_coefficients(&m0.matrix).residual <= 1e-8);
            let tr_p = s.p[0][0] + s.p[1][1];
            assert!((m0.matrix.determinant().norm() - phase(tr_p).norm()).abs() < 1e-8);
        }
    }

    #[test]
    fn explicit_phases_at_two_three() {
        let s = build_system(2, 3).unwrap();
        let m0 = monodromy(&s, Singularity::Zero, DEFAULT_TOL).unwrap();
        let pi = std::f64::consts::PI;
        let want = [
            Complex64::from_polar(1.0, -3.0 * pi / 5.0),
            Complex64::from_polar(1.0, pi / 5.0),
        ];
        assert!(spectrum_distance(&m0.eigenvalues, &want) < 1e-6);
    }

    #[test]
    fn too_close_to_a_pole() {
        let s = build_system(2, 1).unwrap();
        let path = [Complex64::new(-1.0, 1e-12), Complex64::new(1.0, 1e-12)];
        assert_eq!(
            integrate(&s, &path, 1e-10).unwrap_err().code(),
            "singularity_too_close"
        );
    }

    #[test]
    fn coupling_spectrum() {
        let c = r_matrix(2, 1).unwrap();
        let want = [-0.25, 1.0 / 12.0, 1.0 / 12.0, 1.0 / 12.0];
        for (a, b) in c.t_eigenvalues.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
        let pi = std::f64::consts::PI;
        let (a, b) = (
            Complex64::from_polar(1.0, pi / 12.0),
            Complex64::from_polar(1.0, -pi / 4.0),
        );
        assert!((c.r.trace() - (a * 3.0 + b)).norm() < 1e-12);
        assert!((c.r.determinant() - a * a * a * b).norm() < 1e-12);
        assert!(unitarity_defect(&c.r) < 1e-12);
        for (n, k) in PAIRS {
            let c = r_matrix(n, k).unwrap();
            let dim = n as usize;
            let casimir = (swap_matrix(dim)
                - DMatrix::identity(dim * dim, dim * dim) / Complex64::new(n as f64, 0.0))
                / Complex64::new(2.0 * (k + n) as f64, 0.0);
            assert!((&c.t_hat - casimir).norm() < 1e-12);
            let sw = swap_matrix(dim);
            assert!((&c.t_hat * &sw - &sw * &c.t_hat).norm() < 1e-12);
            assert!(unitarity_defect(&c.r) < 1e-12);
            assert!(
                (&c.r - (&c.t_hat * Complex64::new(0.0, std::f64::consts::PI)).exp()).norm()
                    < 1e-10
            );
        }
    }

    #[test]
    fn generator_normalization() {
        for n in 2..=4 {
            let ts = generators(n);
            assert_eq!(ts.len(), n * n - 1);
            for (a, ta) in ts.iter().enumerate() {
                for (b, tb) in ts.iter().enumerate() {
                    let tr = (ta * tb).trace();
                    let want = if a == b { 0.5 } else { 0.0 };
                    assert!((tr - want).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn constants() {
        assert_eq!(conformal_weight(2, 1).unwrap(), r(1, 4));
        assert_eq!(conformal_weight(2, 2).unwrap(), r(3, 16));
        assert_eq!(conformal_weight(3, 1).unwrap(), r(1, 3));
        assert_eq!(central_charge(1, 3, 2).unwrap(), r(1, 1));
        assert_eq!(central_charge(2, 3, 2).unwrap(), r(3, 2));
        assert_eq!(central_charge(1, 8, 3).unwrap(), r(2, 1));
    }

    #[test]
    fn cross_ratios() {
        let c = |x: f64| Complex64::new(x, 0.0);
        assert_eq!(
            cross_ratio(c(0.0), c(1.0), c(2.0), c(3.0)).unwrap(),
            c(0.25)
        );
        assert_eq!(cross_ratio(c(1.0), c(1.0), c(2.0), c(3.0)).unwrap(), c(0.0));
        assert_eq!(
            cross_ratio(c(1.0), c(0.0), c(1.0), c(3.0))
                .unwrap_err()
                .code(),
            "degenerate_points"
        );
        let zs = [
            Complex64::new(0.3, 1.0),
            Complex64::new(-2.0, 0.5),
            Complex64::new(1.5, -0.7),
            Complex64::new(0.0, 2.0),
        ];
        let mobius = |z: Complex64| {
            (Complex64::new(2.0, 1.0) * z + 1.0)
                / (z * Complex64::new(0.5, -0.3) + Complex64::new(3.0, 0.0))
        };
        let x = cross_ratio(zs[0], zs[1], zs[2], zs[3]).unwrap();
        let y = cross_ratio(mobius(zs[0]), mobius(zs[1]), mobius(zs[2]), mobius(zs[3])).unwrap();
        assert!((x - y).norm() < 1e-12);
    }

    #[test]
    fn skein_of_simple_matrices() {
        let id = skein_coefficients(&Matrix2::identity());
        assert_eq!(
            (id.a, id.b, id.residual),
            (Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0), 0.0)
        );
        let (l1, l2) = (Complex64::new(0.0, 1.0), Complex64::new(2.0, -1.0));
        let d = skein_coefficients(&Matrix2::new(l1, Complex64::zero(), Complex64::zero(), l2));
        assert_eq!((d.a, d.b, d.residual), (l1 * l2, l1 + l2, 0.0));
    }
}
