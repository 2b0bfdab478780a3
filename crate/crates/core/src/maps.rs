//! Maps on the qubit state space: Wigner symmetries, the rotations about the
//! y axis, complex conjugation and the pointwise sign-flip maps on pure states.
//!
//! Anti-unitary conjugations are stored as the unitary `V` of `ρ ↦ V ρ̄ V*`.
//! A sign-flip map sends `ρ` to `½(ρ + ρ̄) + ε(ρ)·½(ρ − ρ̄)` on its domain,
//! that is to `ρ` or `ρ̄` according to `ε(ρ) ∈ {−1, +1}`, and fixes every
//! other state.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QwError, Result};
use crate::linalg::{trace_product, ComplexMatrix};
use crate::rng::StateRng;
use crate::state::{sigma, BlochVector, QubitState};

pub const UNITARY_TOL: f64 = 1e-10;
/// `1 − ‖b‖` below which a sign-flip map treats a state as pure.
pub const SIGN_MAP_PURE_TOL: f64 = 1e-9;
/// `|y|` below which a state counts as real.
pub const REAL_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignDomain {
    /// Pure states with `y ≠ 0`.
    PureNonreal,
    /// All states with `y ≠ 0`, mixed ones included.
    AllNonreal,
}

/// The sign function `ε` of a sign-flip map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SignFunction {
    Constant { sign: i8 },
    /// A seeded hash of the Bloch vector, standing in for an arbitrary
    /// function while staying reproducible.
    Hashed { seed: u64 },
}

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl SignFunction {
    pub fn eval(&self, b: BlochVector) -> i8 {
        match *self {
            SignFunction::Constant { sign } => sign,
            SignFunction::Hashed { seed } => {
                // `+ 0.0` folds −0.0 into 0.0.
                let h = [b.x, b.y, b.z]
                    .iter()
                    .fold(mix64(seed), |h, c| mix64(h ^ (c + 0.0).to_bits()));
                if h & 1 == 0 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            SignFunction::Constant { sign } if sign != 1 && sign != -1 => {
                Err(QwError::invalid(format!("constant sign must be ±1, got {sign}")))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
pub enum StateMap {
    /// `ρ ↦ UρU*`.
    WignerUnitary { u: ComplexMatrix },
    /// `ρ ↦ V ρ̄ V*`.
    WignerAntiUnitary { v: ComplexMatrix },
    /// `ρ ↦ U(t)ρU(t)*` with `U(t) = e^{itσ₂} = [[cos t, sin t], [−sin t, cos t]]`.
    RotY { t: f64 },
    /// `ρ ↦ σ₃ρ̄σ₃`, the reflection `x ↦ −x`.
    #[serde(rename = "reflect-yz")]
    ReflectYZ,
    /// `ρ ↦ ρ̄`.
    GlobalConjugation,
    PureSignMap { domain: SignDomain, epsilon: SignFunction },
    /// Applied right to left: the last map acts first.
    Composition { maps: Vec<StateMap> },
}

/// The action of a map on Bloch vectors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "matrix", rename_all = "kebab-case")]
pub enum BlochAction {
    Orthogonal([[f64; 3]; 3]),
    NotAffine,
}

/// `e^{itσ_axis} = cos t·I + i sin t·σ_axis`.
pub fn pauli_exp(axis: usize, t: f64) -> Result<ComplexMatrix> {
    if !(1..=3).contains(&axis) {
        return Err(QwError::invalid(format!("Pauli axis must be 1, 2 or 3, got {axis}")));
    }
    Ok(ComplexMatrix::identity(2).scale(t.cos()) + sigma(axis).map(|z| z * Complex64::new(0.0, t.sin())))
}

pub fn rot_y_unitary(t: f64) -> ComplexMatrix {
    ComplexMatrix::from_real(2, &[t.cos(), t.sin(), -t.sin(), t.cos()]).expect("2×2")
}

/// Haar-random element of SU(2) from a uniform unit quaternion (Shoemake).
pub fn random_su2(rng: &mut StateRng) -> ComplexMatrix {
    let u1 = rng.uniform();
    let (t1, t2) = (2.0 * std::f64::consts::PI * rng.uniform(), 2.0 * std::f64::consts::PI * rng.uniform());
    let (r1, r2) = ((1.0 - u1).sqrt(), u1.sqrt());
    let (a, b, c, d) = (r2 * t2.cos(), r1 * t1.sin(), r1 * t1.cos(), r2 * t2.sin());
    ComplexMatrix::from_2x2(Complex64::new(a, b), Complex64::new(c, d), Complex64::new(-c, d), Complex64::new(a, -b))
}

fn check_unitary(u: &ComplexMatrix) -> Result<()> {
    if u.dim() != 2 || !u.is_unitary(UNITARY_TOL) {
        return Err(QwError::invalid("Wigner map needs a 2×2 unitary"));
    }
    Ok(())
}

fn conjugate_by(u: &ComplexMatrix, m: &ComplexMatrix) -> ComplexMatrix {
    (*u * *m * u.adjoint()).hermitian_part()
}

/// `O_jk = ½ tr(σ_j U σ_k U*)`.
fn rotation_of(u: &ComplexMatrix) -> [[f64; 3]; 3] {
    let mut o = [[0.0; 3]; 3];
    for (j, row) in o.iter_mut().enumerate() {
        for (k, v) in row.iter_mut().enumerate() {
            *v = 0.5 * trace_product(&sigma(j + 1), &conjugate_by(u, &sigma(k + 1))).re;
        }
    }
    o
}

fn matmul3(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

const CONJ_ACTION: [[f64; 3]; 3] = [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]];
const IDENTITY3: [[f64; 3]; 3] = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

/// `‖OᵀO − I‖_F`.
pub fn orthogonality_defect(o: &[[f64; 3]; 3]) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let g: f64 = (0..3).map(|k| o[k][i] * o[k][j]).sum();
            s += (g - IDENTITY3[i][j]).powi(2);
        }
    }
    s.sqrt()
}

pub fn det3(o: &[[f64; 3]; 3]) -> f64 {
    o[0][0] * (o[1][1] * o[2][2] - o[1][2] * o[2][1]) - o[0][1] * (o[1][0] * o[2][2] - o[1][2] * o[2][0])
        + o[0][2] * (o[1][0] * o[2][1] - o[1][1] * o[2][0])
}

pub fn apply_orthogonal(o: &[[f64; 3]; 3], b: BlochVector) -> BlochVector {
    let v = b.to_array();
    let r = |i: usize| (0..3).map(|k| o[i][k] * v[k]).sum::<f64>();
    BlochVector::new(r(0), r(1), r(2))
}

impl StateMap {
    pub fn identity() -> StateMap {
        StateMap::Composition { maps: Vec::new() }
    }

    pub fn compose(maps: Vec<StateMap>) -> StateMap {
        StateMap::Composition { maps }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            StateMap::WignerUnitary { u } => check_unitary(u),
            StateMap::WignerAntiUnitary { v } => check_unitary(v),
            StateMap::RotY { t } if !t.is_finite() => Err(QwError::invalid("RotY angle must be finite")),
            StateMap::PureSignMap { epsilon, .. } => epsilon.validate(),
            StateMap::Composition { maps } => maps.iter().try_for_each(StateMap::validate),
            _ => Ok(()),
        }
    }

    pub fn apply(&self, rho: &QubitState) -> Result<QubitState> {
        self.validate()?;
        Ok(self.apply_unchecked(rho))
    }

    fn apply_unchecked(&self, rho: &QubitState) -> QubitState {
        let from = |m: ComplexMatrix| QubitState::from_matrix(&m).expect("the map preserves states");
        match self {
            StateMap::WignerUnitary { u } => from(conjugate_by(u, rho.matrix())),
            StateMap::WignerAntiUnitary { v } => from(conjugate_by(v, &rho.matrix().conj())),
            StateMap::RotY { t } => from(conjugate_by(&rot_y_unitary(*t), rho.matrix())),
            StateMap::ReflectYZ => from(conjugate_by(&sigma(3), &rho.matrix().conj())),
            StateMap::GlobalConjugation => rho.conjugate(),
            StateMap::PureSignMap { domain, epsilon } => {
                let in_domain = !rho.is_real(REAL_TOL)
                    && match domain {
                        SignDomain::PureNonreal => rho.is_pure(SIGN_MAP_PURE_TOL),
                        SignDomain::AllNonreal => true,
                    };
                if in_domain && epsilon.eval(rho.bloch()) < 0 {
                    rho.conjugate()
                } else {
                    *rho
                }
            }
            StateMap::Composition { maps } => maps.iter().rev().fold(*rho, |s, m| m.apply_unchecked(&s)),
        }
    }

    pub fn bloch_action(&self) -> Result<BlochAction> {
        self.validate()?;
        Ok(match self.orthogonal() {
            Some(o) => BlochAction::Orthogonal(o),
            None => BlochAction::NotAffine,
        })
    }

    fn orthogonal(&self) -> Option<[[f64; 3]; 3]> {
        match self {
            StateMap::WignerUnitary { u } => Some(rotation_of(u)),
            StateMap::WignerAntiUnitary { v } => Some(matmul3(&rotation_of(v), &CONJ_ACTION)),
            StateMap::RotY { t } => Some(rotation_of(&rot_y_unitary(*t))),
            StateMap::ReflectYZ => Some([[-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]),
            StateMap::GlobalConjugation => Some(CONJ_ACTION),
            StateMap::PureSignMap { domain, epsilon } => match (domain, epsilon) {
                (_, SignFunction::Constant { sign: 1 }) => Some(IDENTITY3),
                // Conjugating every non-real state is conjugating every state.
                (SignDomain::AllNonreal, SignFunction::Constant { .. }) => Some(CONJ_ACTION),
                // Flipping pure states while fixing the mixed ones is not affine.
                _ => None,
            },
            StateMap::Composition { maps } => {
                maps.iter().try_fold(IDENTITY3, |acc, m| m.orthogonal().map(|o| matmul3(&acc, &o)))
            }
        }
    }

    /// Two-sided inverse. Sign-flip maps are only invertible for constant `ε`,
    /// where they are involutions.
    pub fn inverse(&self) -> Result<StateMap> {
        self.validate()?;
        Ok(match self {
            StateMap::WignerUnitary { u } => StateMap::WignerUnitary { u: u.adjoint() },
            // σ = Vρ̄V* gives ρ = Vᵀσ̄V̄.
            StateMap::WignerAntiUnitary { v } => StateMap::WignerAntiUnitary { v: v.transpose() },
            StateMap::RotY { t } => StateMap::RotY { t: -t },
            StateMap::ReflectYZ | StateMap::GlobalConjugation => self.clone(),
            StateMap::PureSignMap { epsilon: SignFunction::Constant { .. }, .. } => self.clone(),
            StateMap::PureSignMap { .. } => {
                return Err(QwError::invalid("a sign-flip map with non-constant ε has no inverse in general"))
            }
            StateMap::Composition { maps } => {
                StateMap::Composition { maps: maps.iter().rev().map(StateMap::inverse).collect::<Result<_>>()? }
            }
        })
    }

    /// True when the map is built only from `RotY`, `ReflectYZ` and
    /// `GlobalConjugation`, the generators of `𝒢×𝒦`.
    pub fn is_orthogonal_group_element(&self) -> bool {
        match self {
            StateMap::RotY { .. } | StateMap::ReflectYZ | StateMap::GlobalConjugation => true,
            StateMap::Composition { maps } => maps.iter().all(StateMap::is_orthogonal_group_element),
            _ => false,
        }
    }

    fn is_sign_family(&self) -> bool {
        match self {
            StateMap::PureSignMap { .. } => true,
            StateMap::Composition { maps } => maps.iter().all(StateMap::is_sign_family),
            _ => false,
        }
    }
}

pub fn apply_map(m: &StateMap, rho: &QubitState) -> Result<QubitState> {
    m.apply(rho)
}

pub fn bloch_action(m: &StateMap) -> Result<BlochAction> {
    m.bloch_action()
}

/// An element `Φ = ψ∘ξ` of the isometry semigroup, with `ψ ∈ 𝒢×𝒦` and `ξ`
/// a sign-flip map or a composition of conjugated sign-flip maps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SemigroupElement {
    pub psi: StateMap,
    pub xi: StateMap,
}

impl SemigroupElement {
    pub fn new(psi: StateMap, xi: StateMap) -> Result<Self> {
        psi.validate()?;
        xi.validate()?;
        if !psi.is_orthogonal_group_element() {
            return Err(QwError::invalid("ψ must be composed of RotY, ReflectYZ and GlobalConjugation"));
        }
        if !matches!(xi, StateMap::PureSignMap { .. }) {
            return Err(QwError::invalid("ξ must be a sign-flip map"));
        }
        Ok(SemigroupElement { psi, xi })
    }

    /// `(ψ′, ξ′)·(ψ, ξ) = (ψ′∘ψ, ψ⁻¹∘ξ′∘ψ∘ξ)`.
    pub fn product(&self, rhs: &SemigroupElement) -> Result<SemigroupElement> {
        let psi = StateMap::compose(vec![self.psi.clone(), rhs.psi.clone()]);
        let xi = StateMap::compose(vec![rhs.psi.inverse()?, self.xi.clone(), rhs.psi.clone(), rhs.xi.clone()]);
        Ok(SemigroupElement { psi, xi })
    }

    pub fn to_map(&self) -> StateMap {
        StateMap::compose(vec![self.psi.clone(), self.xi.clone()])
    }

    pub fn apply(&self, rho: &QubitState) -> Result<QubitState> {
        self.to_map().apply(rho)
    }
}

/// `Composition([ψ, ξ])` after checking that `ψ ∈ 𝒢×𝒦` and `ξ` is a sign-flip map.
pub fn semigroup_element(psi: StateMap, xi: StateMap) -> Result<StateMap> {
    Ok(SemigroupElement::new(psi, xi)?.to_map())
}

/// Whether `m` lies in the families the lower bound is built from: 𝒢×𝒦
/// generators, sign-flip maps, and compositions of these.
pub fn in_lower_bound_families(m: &StateMap) -> bool {
    match m {
        StateMap::Composition { maps } => maps.iter().all(in_lower_bound_families),
        other => other.is_orthogonal_group_element() || other.is_sign_family(),
    }
}
