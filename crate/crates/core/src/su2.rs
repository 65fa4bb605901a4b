//! Dense 2×2 complex linear algebra in the Pauli basis.
//!
//! Every Hamiltonian, metric, Dyson map and propagator in this crate is a
//! [`Complex2x2`]. The eigen-solver and square root are closed-form for the
//! 2×2 case; there is no iterative linear algebra anywhere.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };
const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Absolute Frobenius tolerance for accepting a matrix as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Largest accepted `1/|det V|` for the unit-column eigenvector matrix `V`.
pub const MAX_EIGENVECTOR_CONDITION: f64 = 1e8;

/// Relative size of the traceless part below which a matrix is treated as `c·𝕀`.
const SCALAR_TOL: f64 = 1e-13;

/// Dense 2×2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complex2x2 {
    m: [[C64; 2]; 2],
}

impl Complex2x2 {
    /// Builds a matrix from rows, rejecting NaN or infinite entries.
    pub fn new(rows: [[C64; 2]; 2]) -> Result<Self> {
        let m = Self { m: rows };
        if m.is_finite() {
            Ok(m)
        } else {
            Err(Error::NonFinite)
        }
    }

    pub(crate) const fn from_rows(rows: [[C64; 2]; 2]) -> Self {
        Self { m: rows }
    }

    pub const fn zero() -> Self {
        Self::from_rows([[ZERO, ZERO], [ZERO, ZERO]])
    }

    pub const fn identity() -> Self {
        Self::from_rows([[ONE, ZERO], [ZERO, ONE]])
    }

    pub const fn sigma_x() -> Self {
        Self::from_rows([[ZERO, ONE], [ONE, ZERO]])
    }

    pub const fn sigma_y() -> Self {
        Self::from_rows([[ZERO, C64 { re: 0.0, im: -1.0 }], [I, ZERO]])
    }

    pub const fn sigma_z() -> Self {
        Self::from_rows([[ONE, ZERO], [ZERO, C64 { re: -1.0, im: 0.0 }]])
    }

    pub fn diagonal(d0: C64, d1: C64) -> Self {
        Self::from_rows([[d0, ZERO], [ZERO, d1]])
    }

    /// Matrix whose columns are `c0` and `c1`.
    pub fn from_columns(c0: StateVector2, c1: StateVector2) -> Self {
        Self::from_rows([[c0.0[0], c1.0[0]], [c0.0[1], c1.0[1]]])
    }

    pub fn rows(&self) -> [[C64; 2]; 2] {
        self.m
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.m[row][col]
    }

    pub fn column(&self, col: usize) -> StateVector2 {
        StateVector2([self.m[0][col], self.m[1][col]])
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|z| z.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        let [[a, b], [c, d]] = self.m;
        Self::from_rows([[a.conj(), c.conj()], [b.conj(), d.conj()]])
    }

    pub fn trace(&self) -> C64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> C64 {
        let [[a, b], [c, d]] = self.m;
        a * d - b * c
    }

    /// Inverse via the adjugate; `None` when `|det| ≤ min_abs_det`.
    pub fn inverse_checked(&self, min_abs_det: f64) -> Option<Self> {
        let det = self.det();
        if !(det.norm() > min_abs_det) {
            return None;
        }
        let [[a, b], [c, d]] = self.m;
        let r = det.inv();
        Some(Self::from_rows([[d * r, -b * r], [-c * r, a * r]]))
    }

    pub fn inverse(&self) -> Option<Self> {
        self.inverse_checked(0.0)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.m.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = *self;
        out.m.iter_mut().flatten().for_each(|z| *z *= s);
        out
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.m
            .iter()
            .flatten()
            .zip(other.m.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Default for Complex2x2 {
    fn default() -> Self {
        Self::zero()
    }
}

impl Add for Complex2x2 {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl AddAssign for Complex2x2 {
    fn add_assign(&mut self, rhs: Self) {
        for (a, b) in self.m.iter_mut().flatten().zip(rhs.m.iter().flatten()) {
            *a += b;
        }
    }
}

impl Sub for Complex2x2 {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (a, b) in self.m.iter_mut().flatten().zip(rhs.m.iter().flatten()) {
            *a -= b;
        }
        self
    }
}

impl Neg for Complex2x2 {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-ONE)
    }
}

impl Mul for Complex2x2 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let [[a, b], [c, d]] = self.m;
        let [[e, f], [g, h]] = rhs.m;
        Self::from_rows([[a * e + b * g, a * f + b * h], [c * e + d * g, c * f + d * h]])
    }
}

impl Mul<C64> for Complex2x2 {
    type Output = Self;
    fn mul(self, rhs: C64) -> Self {
        self.scale(rhs)
    }
}

impl Mul<f64> for Complex2x2 {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(C64::new(rhs, 0.0))
    }
}

impl Mul<StateVector2> for Complex2x2 {
    type Output = StateVector2;
    fn mul(self, v: StateVector2) -> StateVector2 {
        let [[a, b], [c, d]] = self.m;
        StateVector2([a * v.0[0] + b * v.0[1], c * v.0[0] + d * v.0[1]])
    }
}

/// Two-component complex state.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StateVector2(pub [C64; 2]);

impl StateVector2 {
    pub const fn new(c0: C64, c1: C64) -> Self {
        Self([c0, c1])
    }

    pub const fn basis(index: usize) -> Self {
        if index == 0 {
            Self([ONE, ZERO])
        } else {
            Self([ZERO, ONE])
        }
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn dot(&self, other: &Self) -> C64 {
        self.0[0].conj() * other.0[0] + self.0[1].conj() * other.0[1]
    }

    pub fn norm(&self) -> f64 {
        (self.0[0].norm_sqr() + self.0[1].norm_sqr()).sqrt()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self([self.0[0] * s, self.0[1] * s])
    }

    pub fn normalized(&self) -> Self {
        self.scale(C64::new(1.0 / self.norm(), 0.0))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.is_finite())
    }
}

impl Add for StateVector2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1]])
    }
}

impl Sub for StateVector2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self([self.0[0] - rhs.0[0], self.0[1] - rhs.0[1]])
    }
}

impl Mul<C64> for StateVector2 {
    type Output = Self;
    fn mul(self, rhs: C64) -> Self {
        self.scale(rhs)
    }
}

impl Mul<f64> for StateVector2 {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(C64::new(rhs, 0.0))
    }
}

/// Coefficients of `a0·𝕀 + ax·σx + ay·σy + az·σz`.
///
/// For a Hamiltonian written as `½(κ₀+iλ₀)𝕀 + ½(κ⃗+iλ⃗)·σ⃗` the real parts of
/// `2·a` are the κ's and the imaginary parts the λ's.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PauliCoefficients {
    pub a0: C64,
    pub ax: C64,
    pub ay: C64,
    pub az: C64,
}

impl PauliCoefficients {
    pub fn new(a0: C64, ax: C64, ay: C64, az: C64) -> Self {
        Self { a0, ax, ay, az }
    }

    /// Real coefficients, the shape of a Hermitian matrix.
    pub fn real(a0: f64, vector: [f64; 3]) -> Self {
        Self {
            a0: C64::new(a0, 0.0),
            ax: C64::new(vector[0], 0.0),
            ay: C64::new(vector[1], 0.0),
            az: C64::new(vector[2], 0.0),
        }
    }

    pub fn vector(&self) -> [C64; 3] {
        [self.ax, self.ay, self.az]
    }

    pub fn real_vector(&self) -> [f64; 3] {
        [self.ax.re, self.ay.re, self.az.re]
    }

    pub fn imag_vector(&self) -> [f64; 3] {
        [self.ax.im, self.ay.im, self.az.im]
    }

    /// Largest imaginary part over all four coefficients.
    pub fn max_imag(&self) -> f64 {
        [self.a0, self.ax, self.ay, self.az]
            .iter()
            .map(|z| z.im.abs())
            .fold(0.0, f64::max)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.max_imag() <= tol
    }

    pub fn compose(&self) -> Complex2x2 {
        pauli_compose(self)
    }
}

pub fn pauli_decompose(m: &Complex2x2) -> PauliCoefficients {
    let [[a, b], [c, d]] = m.rows();
    PauliCoefficients {
        a0: (a + d) * 0.5,
        ax: (b + c) * 0.5,
        ay: (b - c) * I * 0.5,
        az: (a - d) * 0.5,
    }
}

pub fn pauli_compose(c: &PauliCoefficients) -> Complex2x2 {
    Complex2x2::from_rows([
        [c.a0 + c.az, c.ax - I * c.ay],
        [c.ax + I * c.ay, c.a0 - c.az],
    ])
}

/// Eigenpairs of a diagonalizable 2×2 matrix.
///
/// Eigenvalues are ordered ascending by real part, then by imaginary part.
/// Eigenvectors are unit-norm and paired index-wise with the eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSystem2 {
    pub values: [C64; 2],
    pub vectors: [StateVector2; 2],
}

impl EigenSystem2 {
    /// Eigenvector matrix `V` with `M = V·diag(values)·V⁻¹`.
    pub fn vector_matrix(&self) -> Complex2x2 {
        Complex2x2::from_columns(self.vectors[0], self.vectors[1])
    }
}

pub fn eigensystem(m: &Complex2x2) -> Result<EigenSystem2> {
    eigensystem_with(m, MAX_EIGENVECTOR_CONDITION)
}

pub fn eigensystem_with(m: &Complex2x2, max_condition: f64) -> Result<EigenSystem2> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let c = pauli_decompose(m);
    let traceless = (c.ax.norm_sqr() + c.ay.norm_sqr() + c.az.norm_sqr()).sqrt();
    if traceless <= SCALAR_TOL * c.a0.norm() || traceless == 0.0 {
        return Ok(EigenSystem2 {
            values: [c.a0, c.a0],
            vectors: [StateVector2::basis(0), StateVector2::basis(1)],
        });
    }

    let s = (c.ax * c.ax + c.ay * c.ay + c.az * c.az).sqrt();
    let mut values = [c.a0 - s, c.a0 + s];
    values.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));

    let [[a, b], [cc, d]] = m.rows();
    let kernel = |e: C64| {
        // Both candidates span ker(M − e𝕀); the longer one loses fewer digits.
        let first = StateVector2::new(b, e - a);
        let second = StateVector2::new(e - d, cc);
        if first.norm() >= second.norm() {
            first.normalized()
        } else {
            second.normalized()
        }
    };
    let vectors = [kernel(values[0]), kernel(values[1])];

    let sin_angle = Complex2x2::from_columns(vectors[0], vectors[1]).det().norm();
    let condition = if sin_angle > 0.0 {
        1.0 / sin_angle
    } else {
        f64::INFINITY
    };
    if !(condition <= max_condition) {
        return Err(Error::NonDiagonalizable { condition });
    }
    Ok(EigenSystem2 { values, vectors })
}

/// `‖M − M†‖_F`.
pub fn hermiticity_residual(m: &Complex2x2) -> f64 {
    (*m - m.adjoint()).frobenius_norm()
}

pub fn hermitian_sqrt(m: &Complex2x2) -> Result<Complex2x2> {
    hermitian_sqrt_with(m, HERMITICITY_TOL)
}

/// Principal square root of a Hermitian positive-definite matrix, computed as
/// `U·D^{1/2}·U⁻¹` from the eigendecomposition `M = U·D·U⁻¹`.
pub fn hermitian_sqrt_with(m: &Complex2x2, hermiticity_tol: f64) -> Result<Complex2x2> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let residual = hermiticity_residual(m);
    if residual > hermiticity_tol {
        return Err(Error::NotHermitian { residual });
    }
    let det = m.det().re;
    let tr = m.trace().re;
    if !(det > 0.0 && tr > 0.0) {
        return Err(Error::NotPositiveDefinite { t: None });
    }

    let c = pauli_decompose(m);
    let traceless = (c.ax.norm_sqr() + c.ay.norm_sqr() + c.az.norm_sqr()).sqrt();
    if traceless <= SCALAR_TOL * c.a0.re {
        return Ok(Complex2x2::identity() * c.a0.re.sqrt());
    }

    let es = eigensystem(m)?;
    let u = es.vector_matrix();
    let u_inv = u.inverse().ok_or(Error::NonDiagonalizable {
        condition: f64::INFINITY,
    })?;
    let root = Complex2x2::diagonal(
        C64::new(es.values[0].re.sqrt(), 0.0),
        C64::new(es.values[1].re.sqrt(), 0.0),
    );
    Ok(u * root * u_inv)
}
