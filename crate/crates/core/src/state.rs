//! Qubit density matrices and their Bloch vectors.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QwError, Result};
use crate::linalg::{trace_product, ComplexMatrix, HERMITIAN_TOL};
use crate::rng::StateRng;

/// Bloch vectors with norm in `(1, 1 + BLOCH_SLACK]` are projected to the sphere.
pub const BLOCH_SLACK: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;

/// Pauli matrix `σ_j` for `j ∈ {1, 2, 3}`.
pub fn pauli(j: usize) -> Result<ComplexMatrix> {
    let o = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match j {
        1 => Ok(ComplexMatrix::from_2x2(o, one, one, o)),
        2 => Ok(ComplexMatrix::from_2x2(o, -i, i, o)),
        3 => Ok(ComplexMatrix::from_2x2(one, o, o, -one)),
        _ => Err(QwError::invalid(format!("Pauli index must be 1, 2 or 3, got {j}"))),
    }
}

pub(crate) fn sigma(j: usize) -> ComplexMatrix {
    pauli(j).expect("valid Pauli index")
}

/// Real Bloch coordinates `(x, y, z)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const ORIGIN: BlochVector = BlochVector { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        BlochVector { x, y, z }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        BlochVector::new(a[0], a[1], a[2])
    }

    pub fn norm_sqr(self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn dot(self, o: BlochVector) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn sub(self, o: BlochVector) -> BlochVector {
        BlochVector::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }

    pub fn scale(self, s: f64) -> BlochVector {
        BlochVector::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn neg(self) -> BlochVector {
        self.scale(-1.0)
    }

    pub fn max_abs_diff(self, o: BlochVector) -> f64 {
        (self.x - o.x).abs().max((self.y - o.y).abs()).max((self.z - o.z).abs())
    }
}

/// A qubit density matrix together with its Bloch vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitState {
    matrix: ComplexMatrix,
    bloch: BlochVector,
}

impl QubitState {
    /// `ρ = ½(I + xσ₁ + yσ₂ + zσ₃)`.
    pub fn from_bloch(b: BlochVector) -> Result<Self> {
        if !(b.x.is_finite() && b.y.is_finite() && b.z.is_finite()) {
            return Err(QwError::invalid("Bloch vector has non-finite components"));
        }
        let r = b.norm();
        let b = if r > 1.0 + BLOCH_SLACK {
            return Err(QwError::invalid(format!("Bloch vector norm {r} exceeds 1")));
        } else if r > 1.0 {
            b.scale(1.0 / r)
        } else {
            b
        };
        let matrix = ComplexMatrix::from_2x2(
            Complex64::new(0.5 * (1.0 + b.z), 0.0),
            Complex64::new(0.5 * b.x, -0.5 * b.y),
            Complex64::new(0.5 * b.x, 0.5 * b.y),
            Complex64::new(0.5 * (1.0 - b.z), 0.0),
        );
        Ok(QubitState { matrix, bloch: b })
    }

    pub fn from_xyz(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::from_bloch(BlochVector::new(x, y, z))
    }

    /// Validates a 2×2 density matrix and computes its Bloch vector.
    pub fn from_matrix(m: &ComplexMatrix) -> Result<Self> {
        if m.dim() != 2 {
            return Err(QwError::invalid("a qubit state must be 2×2"));
        }
        if !m.is_hermitian(HERMITIAN_TOL) {
            return Err(QwError::invalid("state matrix is not Hermitian"));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(QwError::invalid(format!("state trace is {tr}, expected 1")));
        }
        let spec = m.eigh()?;
        if spec.min_eigenvalue() < -PSD_TOL {
            return Err(QwError::invalid(format!(
                "state has negative eigenvalue {:e}",
                spec.min_eigenvalue()
            )));
        }
        let coord = |j| trace_product(m, &sigma(j)).re;
        Self::from_bloch(BlochVector::new(coord(1), coord(2), coord(3)))
    }

    pub fn maximally_mixed() -> Self {
        Self::from_bloch(BlochVector::ORIGIN).expect("origin is a state")
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn bloch(&self) -> BlochVector {
        self.bloch
    }

    /// `1 − ‖b‖ ≤ tol`.
    pub fn is_pure(&self, tol: f64) -> bool {
        1.0 - self.bloch.norm() <= tol
    }

    /// Real symmetric states are exactly those with `y = 0`.
    pub fn is_real(&self, tol: f64) -> bool {
        self.bloch.y.abs() <= tol
    }

    /// Entrywise complex conjugate; on Bloch vectors `(x, y, z) ↦ (x, −y, z)`.
    pub fn conjugate(&self) -> QubitState {
        QubitState {
            matrix: self.matrix.conj(),
            bloch: BlochVector::new(self.bloch.x, -self.bloch.y, self.bloch.z),
        }
    }

    pub fn transpose_matrix(&self) -> ComplexMatrix {
        self.matrix.transpose()
    }

    /// Checks Hermiticity, unit trace, positivity and Bloch consistency.
    pub fn validate(&self) -> Result<()> {
        let rebuilt = Self::from_matrix(&self.matrix)?;
        let reference = Self::from_bloch(self.bloch)?;
        if reference.matrix.max_abs_diff(&self.matrix) > 1e-12 {
            return Err(QwError::invalid("cached Bloch vector disagrees with the matrix"));
        }
        debug_assert!(rebuilt.bloch.max_abs_diff(self.bloch) < 1e-11);
        Ok(())
    }
}

/// Inverse of [`QubitState::from_bloch`], `b_j = tr(ρσ_j)`.
pub fn to_bloch(rho: &QubitState) -> BlochVector {
    rho.bloch()
}

/// Sampling measures on the Bloch ball.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleKind {
    /// Uniform on the solid ball (uniform direction, radius `u^{1/3}`).
    MixedBall,
    /// Uniform on the unit sphere.
    PureSphere,
    /// Uniform on the real disk `y = 0, x² + z² ≤ 1`.
    RealPlane,
    /// Uniform on the real pure circle `y = 0, x² + z² = 1`.
    RealPure,
}

/// Uniform direction on the sphere (Archimedes: `z` uniform on `[-1, 1]`).
fn unit_direction(rng: &mut StateRng) -> BlochVector {
    let z = rng.uniform_in(-1.0, 1.0);
    let phi = 2.0 * PI * rng.uniform();
    let s = (1.0 - z * z).max(0.0).sqrt();
    BlochVector::new(s * phi.cos(), s * phi.sin(), z)
}

pub fn random_bloch(rng: &mut StateRng, kind: SampleKind) -> BlochVector {
    match kind {
        SampleKind::MixedBall => {
            let d = unit_direction(rng);
            d.scale(rng.uniform().cbrt())
        }
        SampleKind::PureSphere => unit_direction(rng),
        SampleKind::RealPlane => {
            let r = rng.uniform().sqrt();
            let phi = 2.0 * PI * rng.uniform();
            BlochVector::new(r * phi.cos(), 0.0, r * phi.sin())
        }
        SampleKind::RealPure => {
            let phi = 2.0 * PI * rng.uniform();
            BlochVector::new(phi.cos(), 0.0, phi.sin())
        }
    }
}

pub fn random_state(rng: &mut StateRng, kind: SampleKind) -> QubitState {
    QubitState::from_bloch(random_bloch(rng, kind)).expect("sampled Bloch vectors lie in the ball")
}
