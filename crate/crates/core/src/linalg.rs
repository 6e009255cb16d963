//! Dense 4×4 matrices and vectors over real or complex scalars.
//!
//! Every object in the crate is a two-mode quadrature quantity, so the
//! dimension is fixed at compile time and storage is a row-major array.

use crate::scalar::Real;
use num_complex::Complex;
use num_traits::Float;
use std::ops::{Add, Div, Index, IndexMut, Mul, Neg, Sub};

pub const DIM: usize = 4;

/// Matrix entry: a real scalar or a complex number built on one.
pub trait Entry:
    Copy
    + std::fmt::Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    type Scalar: Real;
    fn nil() -> Self;
    fn unit() -> Self;
    fn from_real(x: Self::Scalar) -> Self;
    /// Absolute value (complex modulus).
    fn modulus(self) -> Self::Scalar;
    fn real_part(self) -> Self::Scalar;
    fn imag_part(self) -> Self::Scalar;
}

macro_rules! real_entry {
    ($($t:ty),*) => {$(
        impl Entry for $t {
            type Scalar = $t;
            fn nil() -> Self {
                <$t as num_traits::Zero>::zero()
            }
            fn unit() -> Self {
                <$t as num_traits::One>::one()
            }
            fn from_real(x: Self) -> Self {
                x
            }
            fn modulus(self) -> Self {
                self.abs()
            }
            fn real_part(self) -> Self {
                self
            }
            fn imag_part(self) -> Self {
                <$t as num_traits::Zero>::zero()
            }
        }
    )*};
}

real_entry!(f32, f64, crate::dd::DoubleDouble);

impl<T: Real> Entry for Complex<T> {
    type Scalar = T;
    fn nil() -> Self {
        Complex::new(T::zero(), T::zero())
    }
    fn unit() -> Self {
        Complex::new(T::one(), T::zero())
    }
    fn from_real(x: T) -> Self {
        Complex::new(x, T::zero())
    }
    fn modulus(self) -> T {
        self.re.hypot(self.im)
    }
    fn real_part(self) -> T {
        self.re
    }
    fn imag_part(self) -> T {
        self.im
    }
}

/// Column vector of length 4.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vec4<E>(pub [E; DIM]);

/// Row-major 4×4 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat4<E> {
    rows: [[E; DIM]; DIM],
}

impl<E> Index<usize> for Vec4<E> {
    type Output = E;
    fn index(&self, i: usize) -> &E {
        &self.0[i]
    }
}

impl<E> IndexMut<usize> for Vec4<E> {
    fn index_mut(&mut self, i: usize) -> &mut E {
        &mut self.0[i]
    }
}

impl<E> Index<(usize, usize)> for Mat4<E> {
    type Output = E;
    fn index(&self, (i, j): (usize, usize)) -> &E {
        &self.rows[i][j]
    }
}

impl<E> IndexMut<(usize, usize)> for Mat4<E> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut E {
        &mut self.rows[i][j]
    }
}

impl<E: Copy> Vec4<E> {
    pub fn map<F: Copy, G: Fn(E) -> F>(&self, f: G) -> Vec4<F> {
        Vec4([f(self.0[0]), f(self.0[1]), f(self.0[2]), f(self.0[3])])
    }
}

impl<E: Entry> Vec4<E> {
    pub fn zeros() -> Self {
        Vec4([E::nil(); DIM])
    }

    pub fn scale(&self, s: E) -> Self {
        self.map(|x| x * s)
    }

    /// Bilinear product `selfᵀ · other` (no conjugation).
    pub fn dot(&self, other: &Self) -> E {
        (0..DIM).fold(E::nil(), |acc, i| acc + self.0[i] * other.0[i])
    }

    /// Euclidean norm.
    pub fn norm(&self) -> E::Scalar {
        self.0
            .iter()
            .fold(E::Scalar::nil(), |acc, x| acc + x.modulus() * x.modulus())
            .sqrt()
    }
}

impl<E: Copy> Mat4<E> {
    pub fn from_rows(rows: [[E; DIM]; DIM]) -> Self {
        Mat4 { rows }
    }

    pub fn rows(&self) -> &[[E; DIM]; DIM] {
        &self.rows
    }

    pub fn map<F: Copy, G: Fn(E) -> F>(&self, f: G) -> Mat4<F> {
        let mut rows = [[f(self.rows[0][0]); DIM]; DIM];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = f(self.rows[i][j]);
            }
        }
        Mat4 { rows }
    }

    pub fn transpose(&self) -> Self {
        let mut out = *self;
        for i in 0..DIM {
            for j in 0..DIM {
                out.rows[i][j] = self.rows[j][i];
            }
        }
        out
    }
}

impl<E: Entry> Mat4<E> {
    pub fn zeros() -> Self {
        Mat4 { rows: [[E::nil(); DIM]; DIM] }
    }

    pub fn identity() -> Self {
        Self::from_diag([E::unit(); DIM])
    }

    pub fn from_diag(diag: [E; DIM]) -> Self {
        let mut m = Self::zeros();
        for (i, d) in diag.into_iter().enumerate() {
            m.rows[i][i] = d;
        }
        m
    }

    pub fn scale(&self, s: E) -> Self {
        self.map(|x| x * s)
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let mut out = Self::zeros();
        for i in 0..DIM {
            for j in 0..DIM {
                out.rows[i][j] = (0..DIM).fold(E::nil(), |acc, k| acc + self.rows[i][k] * other.rows[k][j]);
            }
        }
        out
    }

    pub fn matvec(&self, v: &Vec4<E>) -> Vec4<E> {
        let mut out = Vec4::zeros();
        for i in 0..DIM {
            out.0[i] = (0..DIM).fold(E::nil(), |acc, k| acc + self.rows[i][k] * v.0[k]);
        }
        out
    }

    /// `self · m · selfᵀ`.
    pub fn congruence(&self, m: &Self) -> Self {
        self.matmul(m).matmul(&self.transpose())
    }

    pub fn trace(&self) -> E {
        (0..DIM).fold(E::nil(), |acc, i| acc + self.rows[i][i])
    }

    pub fn frobenius_norm(&self) -> E::Scalar {
        self.rows
            .iter()
            .flatten()
            .fold(E::Scalar::nil(), |acc, x| acc + x.modulus() * x.modulus())
            .sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> E::Scalar {
        (0..DIM)
            .map(|j| (0..DIM).fold(E::Scalar::nil(), |acc, i| acc + self.rows[i][j].modulus()))
            .fold(E::Scalar::nil(), num_traits::Float::max)
    }

    pub fn max_abs(&self) -> E::Scalar {
        self.rows.iter().flatten().fold(E::Scalar::nil(), |acc, x| acc.max(x.modulus()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> E::Scalar {
        (*self - *other).max_abs()
    }
}

impl<E: Copy + Add<Output = E>> Add for Mat4<E> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for i in 0..DIM {
            for j in 0..DIM {
                self.rows[i][j] = self.rows[i][j] + rhs.rows[i][j];
            }
        }
        self
    }
}

impl<E: Copy + Sub<Output = E>> Sub for Mat4<E> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for i in 0..DIM {
            for j in 0..DIM {
                self.rows[i][j] = self.rows[i][j] - rhs.rows[i][j];
            }
        }
        self
    }
}

impl<E: Copy + Add<Output = E>> Add for Vec4<E> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for i in 0..DIM {
            self.0[i] = self.0[i] + rhs.0[i];
        }
        self
    }
}

impl<E: Copy + Sub<Output = E>> Sub for Vec4<E> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for i in 0..DIM {
            self.0[i] = self.0[i] - rhs.0[i];
        }
        self
    }
}

/// Real matrix promoted to complex entries.
pub fn complexify<T: Real>(m: &Mat4<T>) -> Mat4<Complex<T>> {
    m.map(Complex::from_real)
}

/// LU factorization `P·A = L·U` with partial (row) pivoting.
#[derive(Clone, Debug)]
pub struct Lu<E> {
    factors: Mat4<E>,
    perm: [usize; DIM],
    swaps: usize,
}

/// Raised when a pivot is exactly zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SingularMatrix;

impl<E: Entry> Lu<E> {
    pub fn new(a: &Mat4<E>) -> Result<Self, SingularMatrix> {
        let mut f = *a;
        let mut perm = [0, 1, 2, 3];
        let mut swaps = 0;
        for k in 0..DIM {
            let pivot_row = (k..DIM)
                .max_by(|&x, &y| {
                    f.rows[x][k]
                        .modulus()
                        .partial_cmp(&f.rows[y][k].modulus())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap_or(k);
            let pivot = f.rows[pivot_row][k];
            if pivot.modulus() == E::Scalar::nil() || !pivot.modulus().is_finite() {
                return Err(SingularMatrix);
            }
            if pivot_row != k {
                f.rows.swap(pivot_row, k);
                perm.swap(pivot_row, k);
                swaps += 1;
            }
            for i in (k + 1)..DIM {
                let factor = f.rows[i][k] / pivot;
                f.rows[i][k] = factor;
                for j in (k + 1)..DIM {
                    f.rows[i][j] = f.rows[i][j] - factor * f.rows[k][j];
                }
            }
        }
        Ok(Lu { factors: f, perm, swaps })
    }

    pub fn solve(&self, b: &Vec4<E>) -> Vec4<E> {
        let f = &self.factors.rows;
        let mut x = Vec4([b.0[self.perm[0]], b.0[self.perm[1]], b.0[self.perm[2]], b.0[self.perm[3]]]);
        for i in 0..DIM {
            for k in 0..i {
                x.0[i] = x.0[i] - f[i][k] * x.0[k];
            }
        }
        for i in (0..DIM).rev() {
            for k in (i + 1)..DIM {
                x.0[i] = x.0[i] - f[i][k] * x.0[k];
            }
            x.0[i] = x.0[i] / f[i][i];
        }
        x
    }

    /// Solves `A·X = B` column by column.
    pub fn solve_mat(&self, b: &Mat4<E>) -> Mat4<E> {
        let mut out = Mat4::zeros();
        for j in 0..DIM {
            let col = Vec4([b.rows[0][j], b.rows[1][j], b.rows[2][j], b.rows[3][j]]);
            let x = self.solve(&col);
            for i in 0..DIM {
                out.rows[i][j] = x.0[i];
            }
        }
        out
    }

    pub fn inverse(&self) -> Mat4<E> {
        self.solve_mat(&Mat4::identity())
    }

    pub fn determinant(&self) -> E {
        let d = (0..DIM).fold(E::unit(), |acc, i| acc * self.factors.rows[i][i]);
        if self.swaps % 2 == 1 {
            -d
        } else {
            d
        }
    }
}

/// 1-norm condition number `‖A‖₁·‖A⁻¹‖₁`; infinite when `A` is exactly singular.
pub fn condition_number<E: Entry>(a: &Mat4<E>) -> E::Scalar {
    match Lu::new(a) {
        Ok(lu) => a.norm_one() * lu.inverse().norm_one(),
        Err(SingularMatrix) => <E::Scalar as num_traits::Float>::infinity(),
    }
}

/// Lower-triangular `L` with `A = L·Lᵀ`; `None` unless `A` is symmetric positive definite.
pub fn cholesky<T: Real>(a: &Mat4<T>) -> Option<Mat4<T>> {
    let mut l = Mat4::<T>::zeros();
    for j in 0..DIM {
        let d = a[(j, j)] - (0..j).fold(T::zero(), |acc, k| acc + l[(j, k)] * l[(j, k)]);
        if !(d > T::zero()) {
            return None;
        }
        let dj = d.sqrt();
        l[(j, j)] = dj;
        for i in (j + 1)..DIM {
            l[(i, j)] = (a[(i, j)] - (0..j).fold(T::zero(), |acc, k| acc + l[(i, k)] * l[(j, k)])) / dj;
        }
    }
    Some(l)
}

/// Eigenvalues of a real symmetric `n×n` matrix by cyclic Jacobi rotations, ascending.
pub fn symmetric_eigenvalues<T: Real>(mut a: Vec<Vec<T>>) -> Vec<T> {
    let n = a.len();
    let two = T::lit(2.0);
    for _sweep in 0..100 {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .fold(T::zero(), |acc, (i, j)| acc + a[i][j] * a[i][j]);
        let scale: T = (0..n).fold(T::zero(), |acc, i| acc + a[i][i] * a[i][i]);
        if off <= T::epsilon() * T::epsilon() * scale.max(T::min_positive_value()) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q] == T::zero() {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (two * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<T> = (0..n).map(|i| a[i][i]).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    eig
}

/// Eigenvalues of a Hermitian 4×4 matrix, ascending.
///
/// Uses the real 8×8 embedding `[[Re, -Im], [Im, Re]]`, whose spectrum is the
/// Hermitian spectrum with every value doubled.
pub fn hermitian_eigenvalues<T: Real>(m: &Mat4<Complex<T>>) -> [T; DIM] {
    let mut big = vec![vec![T::zero(); 2 * DIM]; 2 * DIM];
    for i in 0..DIM {
        for j in 0..DIM {
            let z = m[(i, j)];
            big[i][j] = z.re;
            big[i + DIM][j + DIM] = z.re;
            big[i][j + DIM] = -z.im;
            big[i + DIM][j] = z.im;
        }
    }
    let eig = symmetric_eigenvalues(big);
    [eig[0], eig[2], eig[4], eig[6]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sample() -> Mat4<f64> {
        Mat4::from_rows([
            [0.0, 2.0, 1.0, -1.0],
            [1.0, 1.0, 0.5, 3.0],
            [4.0, -2.0, 1.0, 0.0],
            [1.0, 0.0, 0.0, 2.0],
        ])
    }

    #[test]
    fn cholesky_reconstructs() {
        let a = Mat4::from_rows([
            [4.0, 2.0, 0.0, 1.0],
            [2.0, 5.0, 1.0, 0.0],
            [0.0, 1.0, 3.0, 0.5],
            [1.0, 0.0, 0.5, 2.0],
        ]);
        let l = cholesky(&a).unwrap();
        assert!(l.matmul(&l.transpose()).max_abs_diff(&a) < 1e-14);
        assert!(cholesky(&Mat4::from_diag([1.0, -1.0, 1.0, 1.0])).is_none());
    }

    #[test]
    fn lu_solves_and_inverts() {
        let a = sample();
        let lu = Lu::new(&a).unwrap();
        let b = Vec4([1.0, -2.0, 0.5, 3.0]);
        let x = lu.solve(&b);
        let back = a.matvec(&x);
        for i in 0..DIM {
            assert_relative_eq!(back[i], b[i], epsilon = 1e-13);
        }
        let prod = a.matmul(&lu.inverse());
        assert!(prod.max_abs_diff(&Mat4::identity()) < 1e-13);
    }

    #[test]
    fn determinant_tracks_row_swaps() {
        let a = sample();
        let det = Lu::new(&a).unwrap().determinant();
        assert_relative_eq!(det, 6.0, epsilon = 1e-12);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let mut a = sample();
        for j in 0..DIM {
            a[(3, j)] = a[(0, j)] * 2.0;
        }
        let cond: f64 = condition_number(&a);
        assert!(Lu::new(&a).is_err() || cond > 1e15);
        let zero = Mat4::<f64>::zeros();
        assert_eq!(Lu::new(&zero).unwrap_err(), SingularMatrix);
        assert!(condition_number(&zero).is_infinite());
    }

    #[test]
    fn complex_lu_round_trip() {
        let i = Complex::new(0.0, 1.0);
        let a = complexify(&sample()) + Mat4::from_diag([i, -i, i * 2.0, Complex::new(1.0, 1.0)]);
        let lu = Lu::new(&a).unwrap();
        let prod = lu.inverse().matmul(&a);
        assert!(prod.max_abs_diff(&Mat4::identity()) < 1e-13);
    }

    #[test]
    fn jacobi_matches_known_spectrum() {
        let m = vec![vec![2.0, 1.0, 0.0], vec![1.0, 2.0, 0.0], vec![0.0, 0.0, 5.0]];
        let e = symmetric_eigenvalues(m);
        assert_relative_eq!(e[0], 1.0, epsilon = 1e-14);
        assert_relative_eq!(e[1], 3.0, epsilon = 1e-14);
        assert_relative_eq!(e[2], 5.0, epsilon = 1e-14);
    }

    #[test]
    fn hermitian_spectrum_of_omega_shift() {
        // identity + iΩ for one mode has eigenvalues 0 and 2
        let mut m = Mat4::<Complex<f64>>::identity();
        m[(0, 1)] = Complex::new(0.0, 1.0);
        m[(1, 0)] = Complex::new(0.0, -1.0);
        let e = hermitian_eigenvalues(&m);
        assert!(e[0].abs() < 1e-14);
        assert_relative_eq!(e[1], 1.0, epsilon = 1e-14);
        assert_relative_eq!(e[3], 2.0, epsilon = 1e-14);
    }
}
