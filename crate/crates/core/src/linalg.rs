//! Dense complex linear algebra on 2×2 and 4×4 matrices.
//!
//! Index conventions used throughout the crate:
//!
//! * Kronecker product: `(A⊗B)[2j+m][2k+n] = A[j][k]·B[m][n]`, so the first
//!   factor acts on H and the second on H*.
//! * Vectorization: row-major flattening, `||A⟩⟩[2j+m] = A[j][m]`. With this
//!   choice `⟨⟨A||B⟩⟩ = tr(A*B)` and `||A⟩⟩⟨⟨A||` has first partial trace
//!   `AA*` and second partial trace `(A*A)ᵀ`.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{QwError, Result};

/// Hermiticity tolerance for matrices that are Hermitian by construction.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Jacobi stops once the off-diagonal Frobenius norm drops below this
/// (relative to `max(1, ‖M‖_F)`).
pub const JACOBI_OFF_TOL: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Eigenvalues in `[-PSD_CLAMP, 0)` are treated as zero before square roots.
pub const PSD_CLAMP: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A complex vector of length 4 (an element of H⊗H*).
pub type Vector4 = [Complex64; 4];

/// Dense square complex matrix of dimension 2 or 4, stored row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: [Complex64; 16],
}

impl ComplexMatrix {
    fn check_dim(dim: usize) -> Result<()> {
        if dim == 2 || dim == 4 {
            Ok(())
        } else {
            Err(QwError::invalid(format!("matrix dimension must be 2 or 4, got {dim}")))
        }
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim == 2 || dim == 4, "matrix dimension must be 2 or 4");
        ComplexMatrix { dim, data: [ZERO; 16] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for k in 0..dim {
            m[(k, k)] = ONE;
        }
        m
    }

    /// Builds a matrix from `dim²` row-major entries.
    pub fn from_entries(dim: usize, entries: &[Complex64]) -> Result<Self> {
        Self::check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(QwError::invalid(format!(
                "expected {} entries for a {dim}×{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        let mut m = Self::zeros(dim);
        m.data[..dim * dim].copy_from_slice(entries);
        Ok(m)
    }

    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        let c: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_entries(dim, &c)
    }

    pub fn from_2x2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        let mut m = Self::zeros(2);
        m.data[..4].copy_from_slice(&[a, b, c, d]);
        m
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        Self::check_dim(values.len())?;
        let mut m = Self::zeros(values.len());
        for (k, &v) in values.iter().enumerate() {
            m[(k, k)] = Complex64::new(v, 0.0);
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entries, exactly `dim²` of them.
    #[inline]
    pub fn entries(&self) -> &[Complex64] {
        &self.data[..self.dim * self.dim]
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        let mut out = *self;
        for z in out.data[..self.dim * self.dim].iter_mut() {
            *z = f(*z);
        }
        out
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = *self;
        for (z, w) in out.data[..self.dim * self.dim].iter_mut().zip(other.entries()) {
            *z = f(*z, *w);
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out[(c, r)] = self[(r, c)];
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|k| self[(k, k)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max_{j,k} |M[j][k] − conj(M[k][j])|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for r in 0..n {
            for c in r..n {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// `(M + M*)/2`, with an exactly real diagonal.
    pub fn hermitian_part(&self) -> Self {
        let mut out = (*self + self.adjoint()).scale(0.5);
        for k in 0..self.dim {
            out[(k, k)].im = 0.0;
        }
        out
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (self.adjoint() * *self - Self::identity(self.dim)).frobenius_norm() <= tol
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.entries()
            .iter()
            .zip(other.entries())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (*self - *other).frobenius_norm()
    }

    /// Matrix-vector product for 4×4 matrices.
    pub fn apply(&self, v: &Vector4) -> Vector4 {
        assert_eq!(self.dim, 4, "apply expects a 4×4 matrix");
        let mut out = [ZERO; 4];
        for (r, slot) in out.iter_mut().enumerate() {
            *slot = (0..4).map(|c| self[(r, c)] * v[c]).sum();
        }
        out
    }

    /// `v*·M·v`, real part (exact for Hermitian `M`).
    pub fn quadratic_form(&self, v: &Vector4) -> f64 {
        inner(v, &self.apply(v)).re
    }

    /// Column `k` as a vector (4×4 only).
    pub fn column(&self, k: usize) -> Vector4 {
        assert_eq!(self.dim, 4, "column expects a 4×4 matrix");
        [self[(0, k)], self[(1, k)], self[(2, k)], self[(3, k)]]
    }

    /// Spectral decomposition with the crate's default Hermiticity tolerance.
    pub fn eigh(&self) -> Result<SpectralDecomposition> {
        eigh(self, HERMITIAN_TOL)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        debug_assert!(r < self.dim && c < self.dim);
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        debug_assert!(r < self.dim && c < self.dim);
        &mut self.data[r * self.dim + c]
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> Self {
        self.zip_map(&rhs, |a, b| a + b)
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> Self {
        self.zip_map(&rhs, |a, b| a - b)
    }
}

impl AddAssign for ComplexMatrix {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for ComplexMatrix {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> Self {
        self.map(|z| -z)
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    out[(r, c)] += a * rhs[(k, c)];
                }
            }
        }
        out
    }
}

impl Mul<f64> for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

impl Mul<Complex64> for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<Complex64>> = (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self[(r, c)]).collect())
            .collect();
        f.debug_struct("ComplexMatrix").field("dim", &self.dim).field("rows", &rows).finish()
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|c| {
                    let z = self[(r, c)];
                    if z.im == 0.0 {
                        format!("{:>10.6}", z.re)
                    } else {
                        format!("{:>10.6}{:+.6}i", z.re, z.im)
                    }
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Serialized as a flat row-major list of `[re, im]` pairs.
impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.entries().iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(serializer)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixRepr {
    Flat(Vec<[f64; 2]>),
    Rows(Vec<Vec<[f64; 2]>>),
}

/// Accepts either a flat row-major list of `[re, im]` pairs or a list of rows.
impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs = match MatrixRepr::deserialize(deserializer)? {
            MatrixRepr::Flat(p) => p,
            MatrixRepr::Rows(rows) => {
                let n = rows.len();
                if rows.iter().any(|r| r.len() != n) {
                    return Err(serde::de::Error::custom("matrix rows must form a square"));
                }
                rows.into_iter().flatten().collect()
            }
        };
        let dim = match pairs.len() {
            4 => 2,
            16 => 4,
            n => {
                return Err(serde::de::Error::custom(format!(
                    "expected 4 or 16 matrix entries, got {n}"
                )))
            }
        };
        let entries: Vec<Complex64> = pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect();
        ComplexMatrix::from_entries(dim, &entries).map_err(serde::de::Error::custom)
    }
}

/// `⟨v, w⟩ = Σ conj(v_k) w_k`.
pub fn inner(v: &Vector4, w: &Vector4) -> Complex64 {
    v.iter().zip(w).map(|(a, b)| a.conj() * b).sum()
}

pub fn vector_norm(v: &Vector4) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `v w*` as a 4×4 matrix.
pub fn outer(v: &Vector4, w: &Vector4) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4);
    for r in 0..4 {
        for c in 0..4 {
            m[(r, c)] = v[r] * w[c].conj();
        }
    }
    m
}

/// Hilbert–Schmidt inner product `tr(A*B)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    assert_eq!(a.dim(), b.dim(), "dimension mismatch");
    a.entries().iter().zip(b.entries()).map(|(x, y)| x.conj() * y).sum()
}

/// `tr(A·B)` without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    assert_eq!(a.dim(), b.dim(), "dimension mismatch");
    let n = a.dim();
    let mut acc = ZERO;
    for r in 0..n {
        for k in 0..n {
            acc += a[(r, k)] * b[(k, r)];
        }
    }
    acc
}

/// Kronecker product of two 2×2 matrices.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.dim() != 2 || b.dim() != 2 {
        return Err(QwError::invalid(format!(
            "tensor_product expects two 2×2 matrices, got {}×{} and {}×{}",
            a.dim(),
            a.dim(),
            b.dim(),
            b.dim()
        )));
    }
    let mut out = ComplexMatrix::zeros(4);
    for j in 0..2 {
        for k in 0..2 {
            for m in 0..2 {
                for n in 0..2 {
                    out[(2 * j + m, 2 * k + n)] = a[(j, k)] * b[(m, n)];
                }
            }
        }
    }
    Ok(out)
}

pub(crate) fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    tensor_product(a, b).expect("kron of 2×2 factors")
}

fn require_dim(m: &ComplexMatrix, dim: usize, what: &str) -> Result<()> {
    if m.dim() == dim {
        Ok(())
    } else {
        Err(QwError::invalid(format!("{what} expects a {dim}×{dim} matrix, got {}×{}", m.dim(), m.dim())))
    }
}

/// Trace over the second (H*) factor: `M[j][k] = Σ_m Π[2j+m][2k+m]`.
pub fn partial_trace_second(pi: &ComplexMatrix) -> Result<ComplexMatrix> {
    require_dim(pi, 4, "partial_trace_second")?;
    let mut out = ComplexMatrix::zeros(2);
    for j in 0..2 {
        for k in 0..2 {
            out[(j, k)] = pi[(2 * j, 2 * k)] + pi[(2 * j + 1, 2 * k + 1)];
        }
    }
    Ok(out)
}

/// Trace over the first (H) factor: `M[m][n] = Σ_j Π[2j+m][2j+n]`.
pub fn partial_trace_first(pi: &ComplexMatrix) -> Result<ComplexMatrix> {
    require_dim(pi, 4, "partial_trace_first")?;
    let mut out = ComplexMatrix::zeros(2);
    for m in 0..2 {
        for n in 0..2 {
            out[(m, n)] = pi[(m, n)] + pi[(2 + m, 2 + n)];
        }
    }
    Ok(out)
}

/// Row-major flattening `||A⟩⟩` of a 2×2 matrix.
pub fn vectorize(a: &ComplexMatrix) -> Result<Vector4> {
    require_dim(a, 2, "vectorize")?;
    Ok([a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]])
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
#[derive(Clone, Copy, Debug)]
pub struct SpectralDecomposition {
    dim: usize,
    values: [f64; 4],
    /// Unitary whose columns are the eigenvectors.
    vectors: ComplexMatrix,
    sweeps: usize,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.values[..self.dim]
    }

    /// Unitary matrix whose `k`th column is the `k`th eigenvector.
    pub fn eigenvector_matrix(&self) -> &ComplexMatrix {
        &self.vectors
    }

    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        (0..self.dim).map(|r| self.vectors[(r, k)]).collect()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.values[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.values[self.dim - 1]
    }

    /// `Σ_k f(λ_k) v_k v_k*`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for k in 0..n {
            let w = f(self.values[k]);
            if w == 0.0 {
                continue;
            }
            for r in 0..n {
                let vr = self.vectors[(r, k)] * w;
                for c in 0..n {
                    out[(r, c)] += vr * self.vectors[(c, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|x| x)
    }
}

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// Each rotation first removes the phase of the pivot `a_pq` and then applies
/// a real plane rotation that annihilates it.
pub fn eigh(m: &ComplexMatrix, hermitian_tol: f64) -> Result<SpectralDecomposition> {
    let dev = m.hermitian_deviation();
    if dev > hermitian_tol {
        return Err(QwError::invalid(format!(
            "eigh expects a Hermitian matrix (deviation {dev:e} > {hermitian_tol:e})"
        )));
    }
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let threshold = JACOBI_OFF_TOL * a.frobenius_norm().max(1.0);

    let off_norm = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    s += a[(r, c)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    let mut off = off_norm(&a);
    while off > threshold {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(QwError::NumericFailure {
                message: format!("Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps"),
                residual: off,
                best_value: None,
            });
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag < f64::MIN_POSITIVE {
                    continue;
                }
                let phase = apq / mag;
                let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J = [[c, s], [-s·conj(e), c·conj(e)]] on the (p, q) plane.
                let jqp = -phase.conj() * s;
                let jqq = phase.conj() * c;
                // A ← A·J
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c + akq * jqp;
                    a[(k, q)] = akp * s + akq * jqq;
                }
                // A ← J*·A
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c + aqk * jqp.conj();
                    a[(q, k)] = apk * s + aqk * jqq.conj();
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
                // V ← V·J
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c + vkq * jqp;
                    v[(k, q)] = vkp * s + vkq * jqq;
                }
            }
        }
        off = off_norm(&a);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let mut values = [0.0; 4];
    let mut vectors = ComplexMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        values[dst] = a[(src, src)].re;
        for r in 0..n {
            vectors[(r, dst)] = v[(r, src)];
        }
    }
    Ok(SpectralDecomposition { dim: n, values, vectors, sweeps })
}

/// Nearest PSD matrix in Frobenius norm: negative eigenvalues set to zero.
pub fn project_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(eigh(m, HERMITIAN_TOL.max(1e-9 * m.frobenius_norm()))?.reconstruct_with(|x| x.max(0.0)))
}

/// Positive square root of a PSD 2×2 matrix.
///
/// Eigenvalues in `[-1e-10, 0)` are clamped to zero; anything more negative is
/// rejected.
pub fn sqrt_psd(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    require_dim(rho, 2, "sqrt_psd")?;
    let spec = eigh(rho, HERMITIAN_TOL)?;
    if spec.min_eigenvalue() < -PSD_CLAMP {
        return Err(QwError::invalid(format!(
            "sqrt_psd: matrix has eigenvalue {:e} below -{PSD_CLAMP:e}",
            spec.min_eigenvalue()
        )));
    }
    Ok(spec.reconstruct_with(|x| x.max(0.0).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sx() -> ComplexMatrix {
        ComplexMatrix::from_real(2, &[0., 1., 1., 0.]).unwrap()
    }
    fn sy() -> ComplexMatrix {
        ComplexMatrix::from_2x2(ZERO, c(0., -1.), c(0., 1.), ZERO)
    }
    fn sz() -> ComplexMatrix {
        ComplexMatrix::from_real(2, &[1., 0., 0., -1.]).unwrap()
    }

    #[test]
    fn kronecker_examples() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(tensor_product(&i2, &i2).unwrap(), ComplexMatrix::identity(4));
        let xx = tensor_product(&sx(), &sx()).unwrap();
        let anti = ComplexMatrix::from_real(
            4,
            &[0., 0., 0., 1., 0., 0., 1., 0., 0., 1., 0., 0., 1., 0., 0., 0.],
        )
        .unwrap();
        assert_eq!(xx, anti);
        let zz = tensor_product(&sz(), &sz()).unwrap();
        assert_eq!(zz, ComplexMatrix::diagonal(&[1., -1., -1., 1.]).unwrap());
    }

    #[test]
    fn kronecker_rejects_4x4() {
        let i4 = ComplexMatrix::identity(4);
        assert!(matches!(
            tensor_product(&i4, &ComplexMatrix::identity(2)),
            Err(QwError::InvalidArgument(_))
        ));
    }

    #[test]
    fn partial_traces_of_products() {
        let omega = ComplexMatrix::from_2x2(c(0.7, 0.), c(0.1, -0.2), c(0.1, 0.2), c(0.3, 0.));
        let rho_t = ComplexMatrix::from_2x2(c(0.4, 0.), c(-0.3, 0.1), c(-0.3, -0.1), c(0.6, 0.));
        let pi = kron(&omega, &rho_t);
        assert!(partial_trace_second(&pi).unwrap().max_abs_diff(&omega) < 1e-15);
        assert!(partial_trace_first(&pi).unwrap().max_abs_diff(&rho_t) < 1e-15);

        let mixed = ComplexMatrix::identity(4).scale(0.25);
        let half = ComplexMatrix::identity(2).scale(0.5);
        assert_eq!(partial_trace_second(&mixed).unwrap(), half);
        assert_eq!(partial_trace_first(&mixed).unwrap(), half);

        let zz = kron(&sz(), &sz());
        assert_eq!(partial_trace_second(&zz).unwrap(), ComplexMatrix::zeros(2));
        assert!(partial_trace_first(&ComplexMatrix::identity(2)).is_err());
    }

    #[test]
    fn vectorize_examples() {
        assert_eq!(vectorize(&ComplexMatrix::identity(2)).unwrap(), [ONE, ZERO, ZERO, ONE]);
        assert_eq!(vectorize(&sy()).unwrap(), [ZERO, c(0., -1.), c(0., 1.), ZERO]);
        let vx = vectorize(&sx()).unwrap();
        assert_eq!(inner(&vx, &vx), c(2.0, 0.0));
    }

    #[test]
    fn eigh_pauli_z() {
        let spec = eigh(&sz(), HERMITIAN_TOL).unwrap();
        assert_eq!(spec.eigenvalues(), &[-1.0, 1.0]);
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, &[0., 1., 0., 0.]).unwrap();
        assert!(matches!(eigh(&m, 1e-12), Err(QwError::InvalidArgument(_))));
    }

    #[test]
    fn eigh_complex_offdiagonal_reconstructs() {
        let m = ComplexMatrix::from_entries(
            4,
            &[
                c(2., 0.), c(1., 1.), c(0., -0.5), c(0.3, 0.),
                c(1., -1.), c(-1., 0.), c(0.2, 0.2), c(0., 0.),
                c(0., 0.5), c(0.2, -0.2), c(0.5, 0.), c(-2., 1.),
                c(0.3, 0.), c(0., 0.), c(-2., -1.), c(3., 0.),
            ],
        )
        .unwrap();
        let spec = eigh(&m, 1e-12).unwrap();
        assert!(spec.reconstruct().distance(&m) < 1e-12);
        assert!(spec.eigenvector_matrix().is_unitary(1e-12));
        let ev = spec.eigenvalues();
        assert!(ev.windows(2).all(|w| w[0] <= w[1]));
        assert!((ev.iter().sum::<f64>() - m.trace().re).abs() < 1e-12);
    }

    #[test]
    fn sqrt_psd_examples() {
        let half = ComplexMatrix::identity(2).scale(0.5);
        let root = sqrt_psd(&half).unwrap();
        assert!(root.max_abs_diff(&ComplexMatrix::identity(2).scale(0.5_f64.sqrt())) < 1e-15);

        let up = ComplexMatrix::diagonal(&[1.0, 0.0]).unwrap();
        assert!(sqrt_psd(&up).unwrap().max_abs_diff(&up) < 1e-15);

        // η = (I + σ₂/2)/2 has eigenvalues 3/4 and 1/4 with projections (I ± σ₂)/2.
        let eta = (ComplexMatrix::identity(2) + sy().scale(0.5)).scale(0.5);
        let p_plus = (ComplexMatrix::identity(2) + sy()).scale(0.5);
        let p_minus = (ComplexMatrix::identity(2) - sy()).scale(0.5);
        let expected = p_plus.scale(0.75_f64.sqrt()) + p_minus.scale(0.25_f64.sqrt());
        let root = sqrt_psd(&eta).unwrap();
        assert!(root.max_abs_diff(&expected) < 1e-14);
        assert!((root * root).distance(&eta) < 1e-9);
    }

    #[test]
    fn sqrt_psd_clamps_and_rejects() {
        let tiny_neg = ComplexMatrix::diagonal(&[1.0, -5e-11]).unwrap();
        let root = sqrt_psd(&tiny_neg).unwrap();
        assert_eq!(root[(1, 1)], ZERO);
        let neg = ComplexMatrix::diagonal(&[1.0, -1e-6]).unwrap();
        assert!(matches!(sqrt_psd(&neg), Err(QwError::InvalidArgument(_))));
    }

    #[test]
    fn serde_accepts_flat_and_nested() {
        let flat: ComplexMatrix = serde_json::from_str("[[0,0],[0,-1],[0,1],[0,0]]").unwrap();
        let nested: ComplexMatrix = serde_json::from_str("[[[0,0],[0,-1]],[[0,1],[0,0]]]").unwrap();
        assert_eq!(flat, sy());
        assert_eq!(nested, sy());
        let back: ComplexMatrix = serde_json::from_str(&serde_json::to_string(&flat).unwrap()).unwrap();
        assert_eq!(back, flat);
        assert!(serde_json::from_str::<ComplexMatrix>("[[1,0],[0,0],[0,0]]").is_err());
    }
}
