//! Quantum Wasserstein distances `D_C(ρ, ω)² = inf_{Π ∈ 𝒞(ρ,ω)} tr(ΠC)`.
//!
//! The coupling set is `𝒞(ρ, ω) = {Π ⪰ 0 : tr_{H*}Π = ω, tr_H Π = ρᵀ}`. When
//! either marginal is pure the only coupling is `ω⊗ρᵀ`; otherwise the
//! infimum is computed numerically and returned with a dual certificate: a
//! primal feasible coupling and a dual feasible pair of potentials whose
//! objective values bracket the optimum.
//!
//! The default method is a primal-dual interior point started from the
//! trivial coupling. The alternative, ADMM, splits the problem as `min ⟨C, Π⟩` with `Π` in the affine marginal
//! subspace, `Z ⪰ 0` and `Π = Z`. Both projections are exact: the affine one
//! is a closed-form least-squares correction `Π ↦ Π − (X⊗I + I⊗W)`, the conic
//! one clamps eigenvalues. The scaled multiplier `U` is always negative
//! semidefinite after the conic step, so `S = −ρ_pen·U` is a PSD slack and the
//! least-squares split `C − S ≈ X⊗I + I⊗W` gives a dual point after a
//! scalar shift.

use serde::{Deserialize, Serialize};

use crate::cost::CostOperator;
use crate::error::{QwError, Result};
use crate::linalg::{
    eigh, kron, outer, partial_trace_first, partial_trace_second, sqrt_psd, trace_product,
    vectorize, ComplexMatrix, Vector4,
};
use crate::ipm::{self, Ipm};
use crate::state::{sigma, BlochVector, QubitState};

const IPM_MAX_ITERS: usize = 200;
/// Complementarity `⟨X, S⟩` below which interior-point iterates are refined.
const REFINE_START: f64 = 1e-6;
/// Certificate checks without halving the gap before the interior point gives up.
const STALL_CHECKS: usize = 5;
/// Couplings returned by the solver have eigenvalues at least `−COUPLING_PSD_SLACK`.
pub const COUPLING_PSD_SLACK: f64 = 1e-10;

/// Algorithm used for pairs of mixed states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverMethod {
    /// Primal-dual interior point (HKM direction, Mehrotra corrector).
    InteriorPoint,
    /// ADMM with residual balancing.
    Admm,
}

/// Solver parameters. `penalty`, `abs_tol`, `rel_tol` and `check_every` only
/// affect ADMM.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    pub method: SolverMethod,
    /// Initial ADMM penalty (step) parameter.
    pub penalty: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_iters: usize,
    /// Marginals with `1 − ‖b‖ ≤ pure_threshold` take the unique-coupling path.
    pub pure_threshold: f64,
    /// Required certified duality gap.
    pub gap_tol: f64,
    /// Iterations between certificate evaluations.
    pub check_every: usize,
    /// When false, pure marginals are also sent through ADMM.
    pub use_pure_fast_path: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            method: SolverMethod::InteriorPoint,
            penalty: 1.0,
            abs_tol: 1e-9,
            rel_tol: 1e-9,
            max_iters: 50_000,
            pure_threshold: 1e-9,
            gap_tol: 1e-9,
            check_every: 10,
            use_pure_fast_path: true,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("penalty", self.penalty),
            ("abs_tol", self.abs_tol),
            ("rel_tol", self.rel_tol),
            ("pure_threshold", self.pure_threshold),
            ("gap_tol", self.gap_tol),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(QwError::invalid(format!("solver option {name} must be positive, got {v}")));
            }
        }
        if self.max_iters == 0 {
            return Err(QwError::invalid("max_iters must be at least 1"));
        }
        if self.check_every == 0 {
            return Err(QwError::invalid("check_every must be at least 1"));
        }
        Ok(())
    }
}

/// A state on H⊗H* with prescribed marginals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Coupling {
    pub matrix: ComplexMatrix,
}

impl Coupling {
    /// Largest entrywise violation of `tr_{H*}Π = ω` and `tr_H Π = ρᵀ`.
    pub fn marginal_residual(&self, rho: &QubitState, omega: &QubitState) -> f64 {
        let second = partial_trace_second(&self.matrix).expect("4×4 coupling");
        let first = partial_trace_first(&self.matrix).expect("4×4 coupling");
        second
            .max_abs_diff(omega.matrix())
            .max(first.max_abs_diff(&rho.transpose_matrix()))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        eigh(&self.matrix, 1e-9).map(|s| s.min_eigenvalue()).unwrap_or(f64::NEG_INFINITY)
    }

    pub fn cost(&self, cost: &CostOperator) -> f64 {
        trace_product(&self.matrix, cost.matrix()).re
    }
}

/// Dual feasible point `(X, Y)` with `C − X⊗I − I⊗Yᵀ ⪰ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DualCertificate {
    pub x: ComplexMatrix,
    pub y: ComplexMatrix,
    /// `tr(ωX) + tr(ρY)`, a lower bound on the optimal value.
    pub value: f64,
}

impl DualCertificate {
    /// Recomputes the dual objective and the smallest eigenvalue of the slack
    /// `C − X⊗I − I⊗Yᵀ` from scratch.
    pub fn verify(&self, cost: &CostOperator, rho: &QubitState, omega: &QubitState) -> (f64, f64) {
        let i2 = ComplexMatrix::identity(2);
        let slack = *cost.matrix() - kron(&self.x, &i2) - kron(&i2, &self.y.transpose());
        let min_eig = eigh(&slack.hermitian_part(), 1e-9)
            .map(|s| s.min_eigenvalue())
            .unwrap_or(f64::NEG_INFINITY);
        let value = trace_product(omega.matrix(), &self.x).re
            + trace_product(&rho.transpose_matrix(), &self.y.transpose()).re;
        (value, min_eig)
    }
}

/// How an optimal value was certified.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    /// A marginal is pure, so the trivial coupling is the only one.
    UniqueCoupling,
    /// Primal value minus a dual feasible value. Rounding in the primal
    /// coupling can make it slightly negative; solvers bound its magnitude.
    DualityGap { gap: f64, dual: DualCertificate },
    /// Value given by an exact formula.
    ClosedForm,
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::UniqueCoupling => "unique-coupling",
            Certificate::DualityGap { .. } => "duality-gap",
            Certificate::ClosedForm => "closed-form",
        }
    }

    pub fn gap(&self) -> Option<f64> {
        match self {
            Certificate::DualityGap { gap, .. } => Some(*gap),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransportResult {
    /// Optimal transport cost `D_C²`.
    pub value: f64,
    /// `√value`.
    pub distance: f64,
    pub coupling: Coupling,
    pub certificate: Certificate,
    pub iterations: usize,
}

/// The product coupling `ω⊗ρᵀ`.
pub fn trivial_coupling(rho: &QubitState, omega: &QubitState) -> Coupling {
    Coupling { matrix: kron(omega.matrix(), &rho.transpose_matrix()) }
}

/// `tr((ω⊗ρᵀ)·C)`.
pub fn trivial_cost(rho: &QubitState, omega: &QubitState, cost: &CostOperator) -> f64 {
    trivial_coupling(rho, omega).cost(cost)
}

fn finish(value: f64, coupling: Coupling, certificate: Certificate, iterations: usize) -> TransportResult {
    let value = value.max(0.0);
    TransportResult { value, distance: value.sqrt(), coupling, certificate, iterations }
}

/// Computes `D_C(ρ, ω)²` with a certificate.
pub fn solve_qw(
    rho: &QubitState,
    omega: &QubitState,
    cost: &CostOperator,
    opts: &SolverOptions,
) -> Result<TransportResult> {
    opts.validate()?;
    if opts.use_pure_fast_path && (rho.is_pure(opts.pure_threshold) || omega.is_pure(opts.pure_threshold)) {
        let coupling = trivial_coupling(rho, omega);
        return Ok(finish(coupling.cost(cost), coupling, Certificate::UniqueCoupling, 0));
    }
    match opts.method {
        SolverMethod::InteriorPoint => interior_point(rho, omega, cost, opts),
        SolverMethod::Admm => Admm::new(rho, omega, cost, opts).run(),
    }
}

/// Smallest eigenvalue of `ω⊗ρᵀ`, the product of the marginals' smallest
/// eigenvalues.
fn trivial_min_eig(rho: &QubitState, omega: &QubitState) -> f64 {
    let lo = |s: &QubitState| 0.5 * (1.0 - s.bloch().norm());
    (lo(rho) * lo(omega)).max(0.0)
}

/// Restores positivity of an affine-feasible `Π` by mixing in the trivial
/// coupling: `(1−θ)Π + θ·ω⊗ρᵀ` is PSD once
/// `θ ≥ −λ_min(Π) / (−λ_min(Π) + λ_min(ω⊗ρᵀ))`. Eigenvalues down to
/// `−COUPLING_PSD_SLACK` are left alone: at optimal rank-deficient couplings
/// they are rounding noise, and mixing would cost far more than it fixes.
fn repair(pi: &ComplexMatrix, trivial: &ComplexMatrix, trivial_min_eig: f64) -> Result<ComplexMatrix> {
    let lam = eigh(pi, 1e-9)?.min_eigenvalue();
    if lam >= -COUPLING_PSD_SLACK {
        return Ok(*pi);
    }
    let deficit = -lam;
    let theta = (deficit / (deficit + trivial_min_eig)).min(1.0);
    Ok((pi.scale(1.0 - theta) + trivial.scale(theta)).hermitian_part())
}

/// Dual certificate from potentials `(X, W)`: both are shifted by half the
/// most negative eigenvalue of `C − X⊗I − I⊗W`, making the slack PSD.
fn certify_potentials(
    cost: &CostOperator,
    rho_t: &ComplexMatrix,
    omega: &ComplexMatrix,
    mut x: ComplexMatrix,
    mut w: ComplexMatrix,
) -> Result<DualCertificate> {
    let residual = (*cost.matrix() - adjoint_marginal(&x, &w)).hermitian_part();
    let lam = eigh(&residual, 1e-9)?.min_eigenvalue();
    if lam < 0.0 {
        let i2 = ComplexMatrix::identity(2);
        x += i2.scale(lam / 2.0);
        w += i2.scale(lam / 2.0);
    }
    let value = trace_product(omega, &x).re + trace_product(rho_t, &w).re;
    Ok(DualCertificate { x: x.hermitian_part(), y: w.transpose().hermitian_part(), value })
}

fn interior_point(
    rho: &QubitState,
    omega: &QubitState,
    cost: &CostOperator,
    opts: &SolverOptions,
) -> Result<TransportResult> {
    let trivial = trivial_coupling(rho, omega).matrix;
    let floor = trivial_min_eig(rho, omega);
    let rho_t = rho.transpose_matrix();
    let ipm = Ipm::new(cost.matrix(), omega.matrix(), &rho_t)?;
    let mut it = ipm.start();
    type Best = Option<(f64, ComplexMatrix, DualCertificate)>;
    // Records the certified candidate built from a scaled iterate and
    // reports whether it meets the gap tolerance.
    let consider = |best: &mut Best, x: &ComplexMatrix, y: &[f64; ipm::CONSTRAINTS]| -> Result<bool> {
        let (x, y) = ipm.original(x, y)?;
        let pi = repair(&project_affine(&x, omega.matrix(), &rho_t), &trivial, floor)?;
        let (px, pw) = split_potentials(&y);
        let dual = certify_potentials(cost, &rho_t, omega.matrix(), px, pw)?;
        let gap = trace_product(&pi, cost.matrix()).re - dual.value;
        if best.as_ref().is_none_or(|b| gap.abs() < b.0.abs()) {
            *best = Some((gap, pi, dual));
        }
        Ok(gap.abs() <= opts.gap_tol)
    };
    let mut best: Best = None;
    let max_iters = opts.max_iters.min(IPM_MAX_ITERS);
    let mut iterations = 0;
    let mut stalled = 0;

    for iter in 1..=max_iters {
        iterations = iter;
        let progressed = ipm.step(&mut it)?;
        let mu = ipm.mu(&it);
        if progressed && 4.0 * mu > REFINE_START {
            continue;
        }
        let previous = best.as_ref().map_or(f64::INFINITY, |b| b.0.abs());
        if consider(&mut best, &it.x, &it.y)? {
            break;
        }
        // Try the most plausible coupling rank first.
        let guess = eigh(&it.x, 1e-6)?
            .eigenvalues()
            .iter()
            .filter(|&&v| v > mu.max(0.0).sqrt())
            .count()
            .clamp(1, 3);
        let mut done = false;
        for r in std::iter::once(guess).chain((1..=3).filter(|&r| r != guess)) {
            let (x, y) = ipm.refine(&it, r)?;
            if consider(&mut best, &x, &y)? {
                done = true;
                break;
            }
        }
        // With a pure marginal the dual optimum is not attained and the gap
        // only shrinks like √μ; give up once it stops improving.
        let now = best.as_ref().map_or(f64::INFINITY, |b| b.0.abs());
        stalled = if now < 0.5 * previous { 0 } else { stalled + 1 };
        if done || !progressed || stalled >= STALL_CHECKS {
            break;
        }
    }

    if best.is_none() {
        consider(&mut best, &it.x, &it.y)?;
    }
    match best {
        Some((gap, pi, dual)) if gap.abs() <= opts.gap_tol => {
            let value = trace_product(&pi, cost.matrix()).re;
            Ok(finish(value, Coupling { matrix: pi }, Certificate::DualityGap { gap, dual }, iterations))
        }
        // A pure marginal admits no optimal dual pair, but it also makes any
        // feasible coupling the only one.
        Some((_, pi, _)) if rho.is_pure(opts.pure_threshold) || omega.is_pure(opts.pure_threshold) => {
            let value = trace_product(&pi, cost.matrix()).re;
            Ok(finish(value, Coupling { matrix: pi }, Certificate::UniqueCoupling, iterations))
        }
        other => Err(QwError::NumericFailure {
            message: format!(
                "interior point stalled above gap {:e} after {} iterations (ρ = {:?}, ω = {:?})",
                opts.gap_tol,
                iterations,
                rho.bloch().to_array(),
                omega.bloch().to_array()
            ),
            residual: other.as_ref().map_or(ipm.primal_residual(&it), |b| b.0),
            best_value: other.map(|b| trace_product(&b.1, cost.matrix()).re.max(0.0)),
        }),
    }
}

/// `(X, W)` from the interior-point multipliers `y` over the basis
/// `I⊗I, σ_k⊗I, I⊗σ_k`.
fn split_potentials(y: &[f64; ipm::CONSTRAINTS]) -> (ComplexMatrix, ComplexMatrix) {
    let mut x = ComplexMatrix::identity(2).scale(y[0]);
    let mut w = ComplexMatrix::zeros(2);
    for k in 1..=3 {
        x += sigma(k).scale(y[k]);
        w += sigma(k).scale(y[3 + k]);
    }
    (x, w)
}

/// `(P, Q) ↦ (X, W)` solving `𝒜𝒜*(X, W) = (P, Q)` in the least-squares sense,
/// where `𝒜Π = (tr_{H*}Π, tr_H Π)` and `𝒜*(X, W) = X⊗I + I⊗W`.
///
/// `𝒜𝒜*(X, W) = (2X + tr(W)·I, tr(X)·I + 2W)`: it doubles traceless parts
/// and acts as `[[2, 2], [2, 2]]` on the identity coefficients, whose
/// pseudo-inverse sends `(p₀, q₀)` to `((p₀+q₀)/8, (p₀+q₀)/8)`.
fn marginal_pinv(p: &ComplexMatrix, q: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let i2 = ComplexMatrix::identity(2);
    let p0 = p.trace().re / 2.0;
    let q0 = q.trace().re / 2.0;
    let s = (p0 + q0) / 8.0;
    let x = (*p - i2.scale(p0)).scale(0.5) + i2.scale(s);
    let w = (*q - i2.scale(q0)).scale(0.5) + i2.scale(s);
    (x, w)
}

fn adjoint_marginal(x: &ComplexMatrix, w: &ComplexMatrix) -> ComplexMatrix {
    let i2 = ComplexMatrix::identity(2);
    kron(x, &i2) + kron(&i2, w)
}

fn marginals(m: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    (partial_trace_second(m).expect("4×4"), partial_trace_first(m).expect("4×4"))
}

/// Orthogonal projection of a Hermitian matrix onto the affine marginal set.
fn project_affine(h: &ComplexMatrix, omega: &ComplexMatrix, rho_t: &ComplexMatrix) -> ComplexMatrix {
    let (second, first) = marginals(h);
    let (x, w) = marginal_pinv(&(second - *omega), &(first - *rho_t));
    (*h - adjoint_marginal(&x, &w)).hermitian_part()
}

struct Admm<'a> {
    rho: &'a QubitState,
    omega: &'a QubitState,
    cost: &'a CostOperator,
    opts: &'a SolverOptions,
    rho_t: ComplexMatrix,
    trivial: ComplexMatrix,
    trivial_min_eig: f64,
}

struct Candidate {
    primal: f64,
    coupling: ComplexMatrix,
    dual: DualCertificate,
}

impl<'a> Admm<'a> {
    fn new(rho: &'a QubitState, omega: &'a QubitState, cost: &'a CostOperator, opts: &'a SolverOptions) -> Self {
        let t = trivial_coupling(rho, omega).matrix;
        Admm {
            rho,
            omega,
            cost,
            opts,
            rho_t: rho.transpose_matrix(),
            trivial: t,
            trivial_min_eig: trivial_min_eig(rho, omega),
        }
    }

    /// Dual point from the PSD slack `S`: split `C − S` onto `X⊗I + I⊗W`,
    /// then shift both potentials so the remaining slack is PSD.
    fn dual_from_slack(&self, slack: &ComplexMatrix) -> Result<DualCertificate> {
        let c = *self.cost.matrix();
        let target = c - *slack;
        let (p, q) = marginals(&target);
        let (x, w) = marginal_pinv(&p, &q);
        certify_potentials(self.cost, &self.rho_t, self.omega.matrix(), x, w)
    }

    fn candidate(&self, pi: &ComplexMatrix, u: &ComplexMatrix, pen: f64) -> Result<Candidate> {
        let coupling = repair(pi, &self.trivial, self.trivial_min_eig)?;
        let primal = trace_product(&coupling, self.cost.matrix()).re;
        let slack = (-*u).scale(pen);
        let dual = self.dual_from_slack(&slack)?;
        Ok(Candidate { primal, coupling, dual })
    }

    fn run(&self) -> Result<TransportResult> {
        let opts = self.opts;
        let mut pen = opts.penalty;
        let mut c_scaled = self.cost.matrix().scale(1.0 / pen);
        let omega = *self.omega.matrix();

        let mut z = self.trivial;
        let mut u = ComplexMatrix::zeros(4);
        let mut best: Option<Candidate> = None;
        let mut last_gap = f64::INFINITY;

        for iter in 1..=opts.max_iters {
            let pi = project_affine(&(z - u - c_scaled), &omega, &self.rho_t);
            let shifted = pi + u;
            let spec = eigh(&shifted, 1e-9)?;
            let z_new = spec.reconstruct_with(|v| v.max(0.0));
            // U ← (Π + U) − Z: the negative part of Π + U.
            let u_new = spec.reconstruct_with(|v| v.min(0.0));

            let r_prim = (pi - z_new).frobenius_norm();
            let r_dual = pen * (z_new - z).frobenius_norm();
            z = z_new;
            u = u_new;

            // Residual balancing: keep primal and dual residuals within a
            // factor of ten of each other.
            if iter % 20 == 0 {
                let scale = if r_prim > 10.0 * r_dual {
                    2.0
                } else if r_dual > 10.0 * r_prim {
                    0.5
                } else {
                    1.0
                };
                if scale != 1.0 {
                    pen *= scale;
                    u = u.scale(1.0 / scale);
                    c_scaled = self.cost.matrix().scale(1.0 / pen);
                }
            }

            if iter % opts.check_every != 0 {
                continue;
            }
            let eps_prim = 4.0 * opts.abs_tol + opts.rel_tol * pi.frobenius_norm().max(z.frobenius_norm());
            let eps_dual = 4.0 * opts.abs_tol + opts.rel_tol * pen * u.frobenius_norm();
            let cand = self.candidate(&pi, &u, pen)?;
            let gap = cand.primal - cand.dual.value;
            last_gap = gap;
            let better = best.as_ref().is_none_or(|b| gap.abs() < (b.primal - b.dual.value).abs());
            if better {
                best = Some(cand);
            }
            if gap.abs() <= opts.gap_tol && r_prim <= eps_prim && r_dual <= eps_dual {
                let b = best.expect("candidate recorded");
                let gap = b.primal - b.dual.value;
                return Ok(finish(
                    b.primal,
                    Coupling { matrix: b.coupling },
                    Certificate::DualityGap { gap, dual: b.dual },
                    iter,
                ));
            }
        }

        // Accept the best certified point if it meets the gap tolerance even
        // though the residual test never passed.
        if let Some(b) = best {
            let gap = b.primal - b.dual.value;
            if gap.abs() <= opts.gap_tol {
                return Ok(finish(
                    b.primal,
                    Coupling { matrix: b.coupling },
                    Certificate::DualityGap { gap, dual: b.dual },
                    opts.max_iters,
                ));
            }
            return Err(QwError::NumericFailure {
                message: format!(
                    "ADMM did not reach gap {:e} in {} iterations (ρ = {:?}, ω = {:?})",
                    opts.gap_tol,
                    opts.max_iters,
                    self.rho.bloch().to_array(),
                    self.omega.bloch().to_array()
                ),
                residual: gap,
                best_value: Some(b.primal.max(0.0)),
            });
        }
        Err(QwError::NumericFailure {
            message: format!("ADMM stopped after {} iterations without a certificate", opts.max_iters),
            residual: last_gap,
            best_value: None,
        })
    }
}

/// `||√ρ⟩⟩`, a unit vector whose projection couples `ρ` with itself.
pub fn canonical_purification(rho: &QubitState) -> Result<Vector4> {
    vectorize(&sqrt_psd(rho.matrix())?)
}

/// `D_C(ρ, ρ)² = ⟨⟨√ρ|| C ||√ρ⟩⟩`.
pub fn self_distance(rho: &QubitState, cost: &CostOperator) -> Result<f64> {
    let v = canonical_purification(rho)?;
    Ok(cost.matrix().quadratic_form(&v).max(0.0))
}

/// Self-transport via the purification formula, with the purification as coupling.
pub fn self_transport(rho: &QubitState, cost: &CostOperator) -> Result<TransportResult> {
    let v = canonical_purification(rho)?;
    let value = cost.matrix().quadratic_form(&v);
    Ok(finish(value, Coupling { matrix: outer(&v, &v) }, Certificate::ClosedForm, 0))
}

fn check_ball(b: BlochVector) -> Result<f64> {
    let r2 = b.norm_sqr();
    if !r2.is_finite() || r2.sqrt() > 1.0 + crate::state::BLOCH_SLACK {
        return Err(QwError::invalid(format!("Bloch vector norm {} exceeds 1", r2.sqrt())));
    }
    Ok(r2.min(1.0))
}

/// `2(1 − √(1 − ‖b‖²))(1 + y²/‖b‖²)`, the self-distance for the clock–shift
/// cost; `0` at the origin.
pub fn self_distance_xz_closed(b: BlochVector) -> Result<f64> {
    let r2 = check_ball(b)?;
    if r2 == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * (1.0 - (1.0 - r2).sqrt()) * (1.0 + b.y * b.y / r2))
}

/// `4(1 − √(1 − ‖b‖²))`, the self-distance for the symmetric cost.
pub fn self_distance_sym_closed(b: BlochVector) -> Result<f64> {
    let r2 = check_ball(b)?;
    Ok(4.0 * (1.0 - (1.0 - r2).sqrt()))
}
