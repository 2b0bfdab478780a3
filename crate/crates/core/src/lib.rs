//! Quadratic quantum Wasserstein distances on the qubit state space.
//!
//! The crate computes `D_C(ρ, ω)` for quadratic cost operators
//! `C = Σ_j (A_j⊗I − I⊗A_jᵀ)²`, with closed-form paths where a marginal is
//! pure and a certified semidefinite solver otherwise, and checks candidate
//! isometries of the qubit state space against it.
//!
//! ```
//! use qwasser::{cost_sym, solve_qw, QubitState, SolverOptions};
//!
//! let up = QubitState::from_xyz(0.0, 0.0, 1.0).unwrap();
//! let down = QubitState::from_xyz(0.0, 0.0, -1.0).unwrap();
//! let r = solve_qw(&up, &down, &cost_sym(), &SolverOptions::default()).unwrap();
//! assert!((r.value - 8.0).abs() < 1e-12);
//! ```

pub mod cost;
pub mod error;
mod ipm;
pub mod isometry;
pub mod linalg;
pub mod maps;
pub mod rng;
pub mod solver;
pub mod state;
pub mod sweep;

pub use cost::{build_cost, conjugation_invariance_residual, cost_sym, cost_xz, CostOperator, CostSpec};
pub use error::{QwError, Result};
pub use isometry::{check_isometry, check_isometry_with, IsometryReport, Stratum, Verdict};
pub use linalg::{ComplexMatrix, SpectralDecomposition};
pub use maps::{
    apply_map, bloch_action, pauli_exp, random_su2, semigroup_element, BlochAction, SemigroupElement, SignDomain,
    SignFunction, StateMap,
};
pub use rng::StateRng;
pub use solver::{
    canonical_purification, self_distance, self_distance_sym_closed, self_distance_xz_closed,
    self_transport, solve_qw, trivial_cost, trivial_coupling, Certificate, Coupling, DualCertificate,
    SolverMethod, SolverOptions, TransportResult,
};
pub use state::{pauli, random_bloch, random_state, BlochVector, QubitState, SampleKind};
pub use sweep::{run_sweep, run_sweep_with, to_csv, Figure, Section, SweepConfig, SweepOutput, SweepRow, SweepSummary};
