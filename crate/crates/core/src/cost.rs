//! Quadratic cost operators `C = Σ_j (A_j⊗I − I⊗A_jᵀ)²`.

use serde::{Deserialize, Serialize};

use crate::error::{QwError, Result};
use crate::linalg::{kron, ComplexMatrix, SpectralDecomposition};
use crate::state::sigma;

const GENERATOR_HERMITIAN_TOL: f64 = 1e-12;
const UNITARY_TOL: f64 = 1e-10;

/// A quadratic cost on H⊗H*, with its generators and spectrum.
#[derive(Clone, Debug)]
pub struct CostOperator {
    name: String,
    matrix: ComplexMatrix,
    generators: Vec<ComplexMatrix>,
    spectrum: SpectralDecomposition,
}

/// `(A⊗I − I⊗Aᵀ)²` for one generator.
fn generator_term(a: &ComplexMatrix) -> ComplexMatrix {
    let i2 = ComplexMatrix::identity(2);
    let d = kron(a, &i2) - kron(&i2, &a.transpose());
    d * d
}

/// Builds `Σ_j (A_j⊗I − I⊗A_jᵀ)²` from Hermitian 2×2 generators.
pub fn build_cost(generators: &[ComplexMatrix]) -> Result<CostOperator> {
    build_named_cost("custom", generators)
}

pub fn build_named_cost(name: &str, generators: &[ComplexMatrix]) -> Result<CostOperator> {
    if generators.is_empty() {
        return Err(QwError::invalid("a cost needs at least one generator"));
    }
    for (k, a) in generators.iter().enumerate() {
        if a.dim() != 2 {
            return Err(QwError::invalid(format!("generator {k} is not 2×2")));
        }
        if !a.is_hermitian(GENERATOR_HERMITIAN_TOL) {
            return Err(QwError::invalid(format!(
                "generator {k} is not Hermitian (deviation {:e})",
                a.hermitian_deviation()
            )));
        }
    }
    let matrix = generators
        .iter()
        .map(generator_term)
        .fold(ComplexMatrix::zeros(4), |acc, t| acc + t)
        .hermitian_part();
    let spectrum = matrix.eigh()?;
    Ok(CostOperator {
        name: name.to_string(),
        matrix,
        generators: generators.to_vec(),
        spectrum,
    })
}

/// Cost built from all three Pauli matrices.
pub fn cost_sym() -> CostOperator {
    build_named_cost("sym", &[sigma(1), sigma(2), sigma(3)]).expect("Pauli generators are Hermitian")
}

/// Cost built from the clock (σ₃) and shift (σ₁) operators.
pub fn cost_xz() -> CostOperator {
    build_named_cost("xz", &[sigma(1), sigma(3)]).expect("Pauli generators are Hermitian")
}

impl CostOperator {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.generators
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    /// Largest deviation between the stored matrix and a fresh assembly from the generators.
    pub fn assembly_residual(&self) -> f64 {
        let rebuilt = self
            .generators
            .iter()
            .map(generator_term)
            .fold(ComplexMatrix::zeros(4), |acc, t| acc + t);
        rebuilt.max_abs_diff(&self.matrix)
    }
}

/// `‖𝒰 C 𝒰* − C‖_F` with `𝒰 = U⊗(Uᵀ)* = U⊗Ū`.
pub fn conjugation_invariance_residual(cost: &CostOperator, u: &ComplexMatrix) -> Result<f64> {
    if u.dim() != 2 || !u.is_unitary(UNITARY_TOL) {
        return Err(QwError::invalid("conjugation_invariance_residual expects a 2×2 unitary"));
    }
    let big_u = kron(u, &u.conj());
    let conjugated = big_u * *cost.matrix() * big_u.adjoint();
    Ok(conjugated.distance(cost.matrix()))
}

/// How a cost is named in configuration files and on the command line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CostSpec {
    /// `"sym"` or `"xz"`.
    Named(String),
    /// Explicit generator list.
    Generators(Vec<ComplexMatrix>),
}

impl CostSpec {
    pub fn build(&self) -> Result<CostOperator> {
        match self {
            CostSpec::Named(n) => named_cost(n),
            CostSpec::Generators(g) => build_cost(g),
        }
    }
}

pub fn named_cost(name: &str) -> Result<CostOperator> {
    match name {
        "sym" => Ok(cost_sym()),
        "xz" => Ok(cost_xz()),
        other => Err(QwError::invalid(format!("unknown cost '{other}' (expected sym or xz)"))),
    }
}

/// Parses a generator file: a JSON array of 2×2 matrices with `[re, im]` entries.
pub fn cost_from_generator_json(json: &str) -> Result<CostOperator> {
    let gens: Vec<ComplexMatrix> = serde_json::from_str(json)
        .map_err(|e| QwError::invalid(format!("malformed generator file: {e}")))?;
    if gens.iter().any(|g| g.dim() != 2) {
        return Err(QwError::invalid("generator matrices must be 2×2"));
    }
    build_cost(&gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vectorize;
    use num_complex::Complex64;

    fn real4(rows: [[f64; 4]; 4]) -> ComplexMatrix {
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        ComplexMatrix::from_real(4, &flat).unwrap()
    }

    #[test]
    fn sym_matrix_is_exact() {
        let expected = real4([[4., 0., 0., -4.], [0., 8., 0., 0.], [0., 0., 8., 0.], [-4., 0., 0., 4.]]);
        assert_eq!(*cost_sym().matrix(), expected);
    }

    #[test]
    fn xz_matrix_is_exact() {
        let expected = real4([[2., 0., 0., -2.], [0., 6., -2., 0.], [0., -2., 6., 0.], [-2., 0., 0., 2.]]);
        assert_eq!(*cost_xz().matrix(), expected);
        assert_eq!(cost_xz().matrix()[(1, 2)], Complex64::new(-2.0, 0.0));
    }

    #[test]
    fn identity_generator_is_zero_cost() {
        let c = build_cost(&[ComplexMatrix::identity(2)]).unwrap();
        assert_eq!(*c.matrix(), ComplexMatrix::zeros(4));
    }

    #[test]
    fn rejects_bad_generators() {
        assert!(build_cost(&[]).is_err());
        let non_herm = ComplexMatrix::from_real(2, &[0., 1., 0., 0.]).unwrap();
        assert!(build_cost(&[non_herm]).is_err());
        assert!(build_cost(&[ComplexMatrix::identity(4)]).is_err());
    }

    #[test]
    fn alternative_closed_forms() {
        // C_sym = 6I − 2Σ σ_j⊗σ_jᵀ and C_xz = 4I − 2Σ_{1,3} σ_j⊗σ_jᵀ.
        let sum = |js: &[usize]| {
            js.iter()
                .map(|&j| kron(&sigma(j), &sigma(j).transpose()))
                .fold(ComplexMatrix::zeros(4), |a, b| a + b)
        };
        let sym = ComplexMatrix::identity(4).scale(6.0) - sum(&[1, 2, 3]).scale(2.0);
        let xz = ComplexMatrix::identity(4).scale(4.0) - sum(&[1, 3]).scale(2.0);
        assert_eq!(*cost_sym().matrix(), sym);
        assert_eq!(*cost_xz().matrix(), xz);
    }

    #[test]
    fn spectra() {
        let s = cost_sym();
        let ev = s.spectrum().eigenvalues();
        for (got, want) in ev.iter().zip([0., 8., 8., 8.]) {
            assert!((got - want).abs() < 1e-12);
        }
        // Kernel is spanned by ||I⟩⟩/√2.
        let k = s.spectrum().eigenvector(0);
        let overlap: Complex64 = (k[0] + k[3]) / 2.0_f64.sqrt();
        assert!((overlap.norm() - 1.0).abs() < 1e-12);

        let ev = cost_xz().spectrum().eigenvalues().to_vec();
        for (got, want) in ev.iter().zip([0., 4., 4., 8.]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn xz_spectral_form() {
        let proj = |j| {
            let v = vectorize(&sigma(j)).unwrap();
            crate::linalg::outer(&v, &v)
        };
        let recon = proj(1).scale(2.0) + proj(2).scale(4.0) + proj(3).scale(2.0);
        assert!(recon.max_abs_diff(cost_xz().matrix()) < 1e-15);
    }

    #[test]
    fn costs_are_real() {
        assert_eq!(cost_sym().matrix().conj(), *cost_sym().matrix());
        assert_eq!(cost_xz().matrix().conj(), *cost_xz().matrix());
    }

    #[test]
    fn invariance_residuals() {
        let t: f64 = 0.7;
        let rot_y = ComplexMatrix::from_real(2, &[t.cos(), t.sin(), -t.sin(), t.cos()]).unwrap();
        assert!(conjugation_invariance_residual(&cost_xz(), &rot_y).unwrap() <= 1e-10);
        assert!(conjugation_invariance_residual(&cost_sym(), &rot_y).unwrap() <= 1e-10);

        let s = std::f64::consts::FRAC_PI_4;
        let rot_x = ComplexMatrix::from_2x2(
            Complex64::new(s.cos(), 0.),
            Complex64::new(0., s.sin()),
            Complex64::new(0., s.sin()),
            Complex64::new(s.cos(), 0.),
        );
        assert!(conjugation_invariance_residual(&cost_xz(), &rot_x).unwrap() >= 0.1);

        let not_unitary = ComplexMatrix::identity(2).scale(2.0);
        assert!(conjugation_invariance_residual(&cost_sym(), &not_unitary).is_err());
    }

    #[test]
    fn cost_spec_parsing() {
        let spec: CostSpec = serde_json::from_str("\"xz\"").unwrap();
        assert_eq!(*spec.build().unwrap().matrix(), *cost_xz().matrix());
        let json = "[[[0,0],[1,0],[1,0],[0,0]], [[1,0],[0,0],[0,0],[-1,0]]]";
        let c = cost_from_generator_json(json).unwrap();
        assert_eq!(*c.matrix(), *cost_xz().matrix());
        assert!(named_cost("nope").is_err());
        assert!(cost_from_generator_json("[[[0,0],[1,0],[0,0],[0,0]]]").is_err());
    }
}
