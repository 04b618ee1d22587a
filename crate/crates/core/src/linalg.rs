//! Closed-form and small dense linear algebra on 2×2 blocks.
//!
//! Everything here is exact at this dimension: eigenvalues come from the
//! characteristic quadratic, Sylvester equations are solved through their
//! 4×4 Kronecker vectorization, and the discrete algebraic Riccati equation
//! is solved by fixed-point value iteration.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// Column 2-vector.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vec2<T>(pub [T; 2]);

impl<T: Scalar> Vec2<T> {
    pub fn new(a: T, b: T) -> Self {
        Vec2([a, b])
    }

    pub fn zero() -> Self {
        Vec2([T::zero(); 2])
    }

    pub fn dot(&self, other: &Self) -> T {
        self.0[0] * other.0[0] + self.0[1] * other.0[1]
    }

    pub fn scale(&self, c: T) -> Self {
        Vec2([self.0[0] * c, self.0[1] * c])
    }

    /// Outer product `self · otherᵀ`.
    pub fn outer(&self, other: &Self) -> Mat2<T> {
        Mat2::new(
            self.0[0] * other.0[0],
            self.0[0] * other.0[1],
            self.0[1] * other.0[0],
            self.0[1] * other.0[1],
        )
    }

    pub fn max_abs(&self) -> T {
        self.0[0].abs().max(self.0[1].abs())
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

impl<T: Scalar> Add for Vec2<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Vec2([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1]])
    }
}

impl<T: Scalar> Sub for Vec2<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Vec2([self.0[0] - rhs.0[0], self.0[1] - rhs.0[1]])
    }
}

impl<T: Scalar> Neg for Vec2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Vec2([-self.0[0], -self.0[1]])
    }
}

/// Real 2×2 matrix, row-major.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct Mat2<T> {
    pub m: [[T; 2]; 2],
}

impl<T: Scalar> Mat2<T> {
    pub fn new(a11: T, a12: T, a21: T, a22: T) -> Self {
        Mat2 {
            m: [[a11, a12], [a21, a22]],
        }
    }

    pub fn from_rows(rows: [[T; 2]; 2]) -> Self {
        Mat2 { m: rows }
    }

    pub fn identity() -> Self {
        Self::diag(T::one(), T::one())
    }

    pub fn zero() -> Self {
        Self::diag(T::zero(), T::zero())
    }

    pub fn diag(a: T, b: T) -> Self {
        Self::new(a, T::zero(), T::zero(), b)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> T {
        self.m[r][c]
    }

    pub fn trace(&self) -> T {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> T {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.m[0][0], self.m[1][0], self.m[0][1], self.m[1][1])
    }

    pub fn scale(&self, c: T) -> Self {
        Self::new(self.m[0][0] * c, self.m[0][1] * c, self.m[1][0] * c, self.m[1][1] * c)
    }

    pub fn row(&self, r: usize) -> Vec2<T> {
        Vec2(self.m[r])
    }

    pub fn col(&self, c: usize) -> Vec2<T> {
        Vec2([self.m[0][c], self.m[1][c]])
    }

    pub fn from_cols(c0: Vec2<T>, c1: Vec2<T>) -> Self {
        Self::new(c0.0[0], c1.0[0], c0.0[1], c1.0[1])
    }

    /// `vᵀ · self`, returned as a (row) vector.
    pub fn left_mul(&self, v: &Vec2<T>) -> Vec2<T> {
        self.transpose() * *v
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> T {
        self.m.iter().flatten().fold(T::zero(), |acc, v| acc.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|v| v.is_finite())
    }

    pub fn symmetrize(&self) -> Self {
        let off = (self.m[0][1] + self.m[1][0]) * lit(0.5);
        Self::new(self.m[0][0], off, off, self.m[1][1])
    }

    pub fn inverse(&self) -> Result<Self> {
        let d = self.det();
        if !is_invertible(d, self.max_abs()) {
            return Err(Error::SingularSystem(format!(
                "determinant {:e} relative to scale {:e}",
                d.to_f64_lossy(),
                self.max_abs().to_f64_lossy()
            )));
        }
        Ok(Self::new(self.m[1][1], -self.m[0][1], -self.m[1][0], self.m[0][0]).scale(d.recip()))
    }
}

/// Singularity test shared by the 2×2 solves: `|det| > 1e-12 · max(1, ‖M‖²)`.
fn is_invertible<T: Scalar>(det: T, scale: T) -> bool {
    let s = T::one().max(scale * scale);
    det.is_finite() && det.abs() > lit::<T>(1e-12) * s
}

impl<T: fmt::Debug> fmt::Debug for Mat2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{:?}, {:?}], [{:?}, {:?}]]",
            self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]
        )
    }
}

// Row-major nested arrays: [[a11, a12], [a21, a22]].
impl<T: Serialize> Serialize for Mat2<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(2))?;
        seq.serialize_element(&self.m[0])?;
        seq.serialize_element(&self.m[1])?;
        seq.end()
    }
}

impl<'de, T: Deserialize<'de>> Deserialize<'de> for Mat2<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = <[[T; 2]; 2]>::deserialize(deserializer)?;
        Ok(Mat2 { m: rows })
    }
}

impl<T: Scalar> Add for Mat2<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(
            self.m[0][0] + rhs.m[0][0],
            self.m[0][1] + rhs.m[0][1],
            self.m[1][0] + rhs.m[1][0],
            self.m[1][1] + rhs.m[1][1],
        )
    }
}

impl<T: Scalar> Sub for Mat2<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(
            self.m[0][0] - rhs.m[0][0],
            self.m[0][1] - rhs.m[0][1],
            self.m[1][0] - rhs.m[1][0],
            self.m[1][1] - rhs.m[1][1],
        )
    }
}

impl<T: Scalar> Neg for Mat2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-T::one())
    }
}

impl<T: Scalar> Mul for Mat2<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let a = &self.m;
        let b = &rhs.m;
        Self::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

impl<T: Scalar> Mul<Vec2<T>> for Mat2<T> {
    type Output = Vec2<T>;
    fn mul(self, v: Vec2<T>) -> Vec2<T> {
        Vec2([
            self.m[0][0] * v.0[0] + self.m[0][1] * v.0[1],
            self.m[1][0] * v.0[0] + self.m[1][1] * v.0[1],
        ])
    }
}

/// Spectrum of a 2×2 matrix from its trace and determinant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenReport<T> {
    pub trace: T,
    pub det: T,
    pub discriminant: T,
    pub lambda1: Complex<T>,
    pub lambda2: Complex<T>,
    pub modulus1: T,
    pub modulus2: T,
}

impl<T: Scalar> EigenReport<T> {
    pub fn is_complex(&self) -> bool {
        self.discriminant < T::zero()
    }

    pub fn spectral_radius(&self) -> T {
        self.modulus1.max(self.modulus2)
    }

    /// Moduli in ascending order.
    pub fn sorted_moduli(&self) -> (T, T) {
        if self.modulus1 <= self.modulus2 {
            (self.modulus1, self.modulus2)
        } else {
            (self.modulus2, self.modulus1)
        }
    }
}

pub fn eig2<T: Scalar>(m: &Mat2<T>) -> Result<EigenReport<T>> {
    if !m.is_finite() {
        return Err(Error::invalid("eig2: matrix has non-finite entries"));
    }
    Ok(eig_from_trace_det(m.trace(), m.det()))
}

/// Roots of `λ² − Tλ + D`.
///
/// Real roots are ordered `λ1 ≤ λ2`; complex roots are returned with
/// `λ1 = λ̄2` and negative imaginary part first. A discriminant within
/// rounding noise of zero is treated as an exact double root.
pub fn eig_from_trace_det<T: Scalar>(trace: T, det: T) -> EigenReport<T> {
    let two = lit::<T>(2.0);
    let four = lit::<T>(4.0);
    let mut disc = trace * trace - four * det;
    let noise = lit::<T>(16.0) * T::epsilon() * (trace * trace).max(four * det.abs());
    if disc.abs() <= noise {
        disc = T::zero();
    }

    if disc >= T::zero() {
        let sq = disc.sqrt();
        // Avoid cancellation: take the larger-magnitude root first, recover the other by Vieta.
        let (l1, l2) = if disc == T::zero() {
            (trace / two, trace / two)
        } else {
            let big = if trace >= T::zero() {
                (trace + sq) / two
            } else {
                (trace - sq) / two
            };
            let small = if big != T::zero() { det / big } else { T::zero() };
            if big <= small {
                (big, small)
            } else {
                (small, big)
            }
        };
        EigenReport {
            trace,
            det,
            discriminant: disc,
            lambda1: Complex::new(l1, T::zero()),
            lambda2: Complex::new(l2, T::zero()),
            modulus1: l1.abs(),
            modulus2: l2.abs(),
        }
    } else {
        let re = trace / two;
        let im = (-disc).sqrt() / two;
        let modulus = det.sqrt();
        EigenReport {
            trace,
            det,
            discriminant: disc,
            lambda1: Complex::new(re, -im),
            lambda2: Complex::new(re, im),
            modulus1: modulus,
            modulus2: modulus,
        }
    }
}

/// `p(a) = a² − T(M)·a + D(M)`.
pub fn char_poly_eval<T: Scalar>(m: &Mat2<T>, a: T) -> T {
    a * a - m.trace() * a + m.det()
}

pub fn solve_linear_2x2<T: Scalar>(m: &Mat2<T>, rhs: &Vec2<T>) -> Result<Vec2<T>> {
    let d = m.det();
    if !is_invertible(d, m.max_abs()) {
        return Err(Error::SingularSystem(format!("2x2 determinant {:e}", d.to_f64_lossy())));
    }
    // Cramer's rule
    let x = (rhs.0[0] * m.m[1][1] - m.m[0][1] * rhs.0[1]) / d;
    let y = (m.m[0][0] * rhs.0[1] - rhs.0[0] * m.m[1][0]) / d;
    Ok(Vec2([x, y]))
}

/// Solves a dense `N×N` system by Gaussian elimination with partial pivoting.
pub fn solve_dense<T: Scalar, const N: usize>(mut a: [[T; N]; N], mut b: [T; N]) -> Result<[T; N]> {
    let scale = a
        .iter()
        .flatten()
        .fold(T::zero(), |acc, v| acc.max(v.abs()))
        .max(T::min_positive_value());
    let tiny = lit::<T>(1e-13) * scale;

    for col in 0..N {
        let pivot = (col..N)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        if !(a[pivot][col].abs() > tiny) {
            return Err(Error::SingularSystem(format!(
                "pivot {:e} in column {col}",
                a[pivot][col].to_f64_lossy()
            )));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..N {
            let f = a[row][col] / a[col][col];
            if f == T::zero() {
                continue;
            }
            for k in col..N {
                let v = a[col][k];
                a[row][k] -= f * v;
            }
            let v = b[col];
            b[row] -= f * v;
        }
    }
    let mut x = [T::zero(); N];
    for row in (0..N).rev() {
        let mut acc = b[row];
        for k in row + 1..N {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Ok(x)
}

// Column-major vec(X) = (x11, x21, x12, x22).
fn vec_cm<T: Scalar>(x: &Mat2<T>) -> [T; 4] {
    [x.m[0][0], x.m[1][0], x.m[0][1], x.m[1][1]]
}

fn unvec_cm<T: Scalar>(v: [T; 4]) -> Mat2<T> {
    Mat2::new(v[0], v[2], v[1], v[3])
}

/// `P ⊗ Q` for 2×2 factors, as a 4×4 array.
pub fn kron<T: Scalar>(p: &Mat2<T>, q: &Mat2<T>) -> [[T; 4]; 4] {
    let mut out = [[T::zero(); 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = p.m[i / 2][j / 2] * q.m[i % 2][j % 2];
        }
    }
    out
}

/// Solves the discrete Sylvester equation `As·X·Bs + X = Cs`.
pub fn solve_discrete_sylvester<T: Scalar>(a_s: &Mat2<T>, b_s: &Mat2<T>, c_s: &Mat2<T>) -> Result<Mat2<T>> {
    if !(a_s.is_finite() && b_s.is_finite() && c_s.is_finite()) {
        return Err(Error::invalid("sylvester: non-finite input"));
    }
    // vec(As X Bs) = (Bsᵀ ⊗ As) vec(X)
    let mut k = kron(&b_s.transpose(), a_s);
    for (i, row) in k.iter_mut().enumerate() {
        row[i] += T::one();
    }
    solve_dense(k, vec_cm(c_s))
        .map(unvec_cm)
        .map_err(|_| Error::NoUniqueSolution("Bsᵀ ⊗ As + I is singular".into()))
}

/// Solves the Sylvester equation `A·X + X·B = C`.
pub fn solve_sylvester<T: Scalar>(a: &Mat2<T>, b: &Mat2<T>, c: &Mat2<T>) -> Result<Mat2<T>> {
    if !(a.is_finite() && b.is_finite() && c.is_finite()) {
        return Err(Error::invalid("sylvester: non-finite input"));
    }
    // vec(AX + XB) = (I ⊗ A + Bᵀ ⊗ I) vec(X)
    let k1 = kron(&Mat2::identity(), a);
    let k2 = kron(&b.transpose(), &Mat2::identity());
    let mut k = [[T::zero(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            k[i][j] = k1[i][j] + k2[i][j];
        }
    }
    solve_dense(k, vec_cm(c))
        .map(unvec_cm)
        .map_err(|_| Error::NoUniqueSolution("spectra of A and -B intersect".into()))
}

/// Rank of the controllability matrix `[B, AB]`, with singularity tolerance 1e-12.
pub fn controllability_rank<T: Scalar>(a: &Mat2<T>, b: &Vec2<T>) -> usize {
    let ab = *a * *b;
    let c = Mat2::from_cols(*b, ab);
    let tol = lit::<T>(1e-12);
    if c.max_abs() <= tol {
        0
    } else if c.det().abs() <= tol * T::one().max(c.max_abs() * c.max_abs()) {
        1
    } else {
        2
    }
}

/// Controls for [`solve_dare`].
#[derive(Debug, Clone, Copy)]
pub struct DareOptions<T> {
    /// Required bound on the fixed-point residual, relative to `max(1, ‖P‖∞)`.
    pub tol: T,
    pub max_iter: usize,
    /// Iteration stops when `‖P_{k+1} − P_k‖∞ ≤ step_tol · ‖P_k‖∞`.
    pub step_tol: T,
}

impl<T: Scalar> Default for DareOptions<T> {
    fn default() -> Self {
        DareOptions {
            tol: lit(1e-8),
            max_iter: 1_000_000,
            step_tol: lit(1e-12),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DareSolution<T> {
    pub p: Mat2<T>,
    /// Optimal gain in the `A + B·F` convention (row vector).
    pub gain: Vec2<T>,
    pub iterations: usize,
    pub residual: T,
    /// Spectral radius of `A + B·F`.
    pub spectral_radius: T,
}

/// Right-hand side of the Riccati map:
/// `Q + AᵀPA − AᵀPB (R + BᵀPB)⁻¹ BᵀPA`.
pub fn riccati_map<T: Scalar>(a: &Mat2<T>, b: &Vec2<T>, q: &Mat2<T>, r: T, p: &Mat2<T>) -> Mat2<T> {
    let pb = *p * *b;
    let s = r + b.dot(&pb);
    let atpb = a.left_mul(&pb); // Aᵀ P B
    *q + a.transpose() * *p * *a - atpb.outer(&atpb).scale(s.recip())
}

/// `F = −(R + BᵀPB)⁻¹ BᵀPA`.
pub fn lqr_gain<T: Scalar>(a: &Mat2<T>, b: &Vec2<T>, r: T, p: &Mat2<T>) -> Vec2<T> {
    let pb = *p * *b;
    let s = r + b.dot(&pb);
    a.left_mul(&pb).scale(-s.recip())
}

pub fn dare_residual<T: Scalar>(a: &Mat2<T>, b: &Vec2<T>, q: &Mat2<T>, r: T, p: &Mat2<T>) -> T {
    (riccati_map(a, b, q, r, p) - *p).max_abs()
}

/// Solves the discrete algebraic Riccati equation for the stabilizing `P`.
///
/// Value iteration from `P₀ = Q`. If that limit does not stabilize `A + BF`
/// (e.g. `Q = 0` with an unstable `A`, where `P = 0` is a fixed point), the
/// iteration restarts from the cost of the deadbeat gain, which bounds the
/// stabilizing solution from above and descends monotonically onto it.
pub fn solve_dare<T: Scalar>(
    a: &Mat2<T>,
    b: &Vec2<T>,
    q: &Mat2<T>,
    r: T,
    opts: &DareOptions<T>,
) -> Result<DareSolution<T>> {
    if !(a.is_finite() && b.is_finite() && q.is_finite() && r.is_finite()) {
        return Err(Error::invalid("dare: non-finite input"));
    }
    if !(r > T::zero()) {
        return Err(Error::invalid("dare: R must be positive"));
    }
    let sym_tol = lit::<T>(1e-12) * T::one().max(q.max_abs());
    if (q.m[0][1] - q.m[1][0]).abs() > sym_tol {
        return Err(Error::invalid("dare: Q is not symmetric"));
    }
    if q.m[0][0] < -sym_tol || q.m[1][1] < -sym_tol || q.det() < -sym_tol * q.max_abs() {
        return Err(Error::invalid("dare: Q is not positive semidefinite"));
    }

    let first = value_iterate(a, b, q, r, q.symmetrize(), opts, 0)?;
    let one = T::one();
    if first.spectral_radius < one || controllability_rank(a, b) < 2 {
        return finish(first, a, b, q, r, opts);
    }

    let deadbeat = deadbeat_gain(a, b)?;
    let closed = *a + b.outer(&deadbeat);
    let w = *q + deadbeat.outer(&deadbeat).scale(r);
    let p0 = (w + closed.transpose() * w * closed).symmetrize();
    let second = value_iterate(a, b, q, r, p0, opts, first.iterations)?;
    finish(second, a, b, q, r, opts)
}

fn finish<T: Scalar>(
    sol: DareSolution<T>,
    a: &Mat2<T>,
    b: &Vec2<T>,
    q: &Mat2<T>,
    r: T,
    opts: &DareOptions<T>,
) -> Result<DareSolution<T>> {
    let residual = dare_residual(a, b, q, r, &sol.p);
    if !(residual < opts.tol * T::one().max(sol.p.max_abs())) {
        return Err(Error::ConvergenceFailure {
            iterations: sol.iterations,
            residual: residual.to_f64_lossy(),
        });
    }
    Ok(DareSolution { residual, ..sol })
}

fn value_iterate<T: Scalar>(
    a: &Mat2<T>,
    b: &Vec2<T>,
    q: &Mat2<T>,
    r: T,
    p0: Mat2<T>,
    opts: &DareOptions<T>,
    already: usize,
) -> Result<DareSolution<T>> {
    let mut p = p0;
    let mut iterations = already;
    loop {
        if iterations >= opts.max_iter {
            return Err(Error::ConvergenceFailure {
                iterations,
                residual: dare_residual(a, b, q, r, &p).to_f64_lossy(),
            });
        }
        let next = riccati_map(a, b, q, r, &p).symmetrize();
        iterations += 1;
        if !next.is_finite() {
            return Err(Error::ConvergenceFailure {
                iterations,
                residual: f64::INFINITY,
            });
        }
        let step = (next - p).max_abs();
        let scale = p.max_abs();
        p = next;
        if step <= opts.step_tol * scale {
            break;
        }
    }
    let gain = lqr_gain(a, b, r, &p);
    let closed = *a + b.outer(&gain);
    let spectral_radius = eig_from_trace_det(closed.trace(), closed.det()).spectral_radius();
    Ok(DareSolution {
        p,
        gain,
        iterations,
        residual: dare_residual(a, b, q, r, &p),
        spectral_radius,
    })
}

/// Ackermann gain placing both closed-loop eigenvalues at zero.
fn deadbeat_gain<T: Scalar>(a: &Mat2<T>, b: &Vec2<T>) -> Result<Vec2<T>> {
    let ctrb = Mat2::from_cols(*b, *a * *b);
    let inv = ctrb.inverse()?;
    let a2 = *a * *a;
    Ok(-a2.left_mul(&inv.row(1)))
}
