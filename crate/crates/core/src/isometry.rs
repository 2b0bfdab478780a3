//! Randomized isometry checks: compare `D(Φρ, Φω)` with `D(ρ, ω)` over
//! seeded pairs drawn from four strata.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cost::CostOperator;
use crate::error::{QwError, Result};
use crate::maps::StateMap;
use crate::rng::StateRng;
use crate::solver::{solve_qw, SolverOptions};
use crate::state::{random_state, QubitState, SampleKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stratum {
    MixedMixed,
    PureMixed,
    PurePure,
    RealReal,
}

/// Share of pairs per stratum, in percent.
pub const STRATA: [(Stratum, usize); 4] =
    [(Stratum::MixedMixed, 40), (Stratum::PureMixed, 30), (Stratum::PurePure, 15), (Stratum::RealReal, 15)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    IsometryWithinTol,
    Violated,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IsometryReport {
    pub map: StateMap,
    pub cost_name: String,
    pub pairs_tested: usize,
    pub tolerance: f64,
    /// `max |D(Φρ, Φω) − D(ρ, ω)|`.
    pub max_deviation: f64,
    /// Bloch vectors of the pair attaining the maximum.
    pub worst_pair: ([f64; 3], [f64; 3]),
    pub verdict: Verdict,
}

/// Pair counts per stratum by largest remainder, so they always sum to `n`.
pub fn stratum_counts(n: usize) -> [usize; 4] {
    let mut counts = STRATA.map(|(_, pct)| n * pct / 100);
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by_key(|&i| std::cmp::Reverse((n * STRATA[i].1) % 100));
    let missing = n - counts.iter().sum::<usize>();
    for &i in order.iter().take(missing) {
        counts[i] += 1;
    }
    counts
}

/// Seeded stratified pairs, grouped by stratum in the order of [`STRATA`].
/// In the pure-mixed stratum the pure state alternates between the two slots.
pub fn stratified_pairs(n: usize, rng: &mut StateRng) -> Vec<(Stratum, QubitState, QubitState)> {
    let counts = stratum_counts(n);
    let mut out = Vec::with_capacity(n);
    for ((stratum, _), count) in STRATA.iter().zip(counts) {
        for k in 0..count {
            let (a, b) = match stratum {
                Stratum::MixedMixed => (SampleKind::MixedBall, SampleKind::MixedBall),
                Stratum::PureMixed if k % 2 == 0 => (SampleKind::PureSphere, SampleKind::MixedBall),
                Stratum::PureMixed => (SampleKind::MixedBall, SampleKind::PureSphere),
                Stratum::PurePure => (SampleKind::PureSphere, SampleKind::PureSphere),
                Stratum::RealReal => (SampleKind::RealPlane, SampleKind::RealPlane),
            };
            let rho = random_state(rng, a);
            let omega = random_state(rng, b);
            out.push((*stratum, rho, omega));
        }
    }
    out
}

pub fn check_isometry(
    map: &StateMap,
    cost: &CostOperator,
    n_pairs: usize,
    tol: f64,
    rng: &mut StateRng,
) -> Result<IsometryReport> {
    check_isometry_with(map, cost, n_pairs, tol, rng, &SolverOptions::default())
}

pub fn check_isometry_with(
    map: &StateMap,
    cost: &CostOperator,
    n_pairs: usize,
    tol: f64,
    rng: &mut StateRng,
    opts: &SolverOptions,
) -> Result<IsometryReport> {
    if n_pairs == 0 {
        return Err(QwError::invalid("n_pairs must be at least 1"));
    }
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(QwError::invalid(format!("tolerance must be non-negative, got {tol}")));
    }
    map.validate()?;
    let pairs = stratified_pairs(n_pairs, rng);
    let deviations: Vec<Result<f64>> = pairs
        .par_iter()
        .map(|(_, rho, omega)| {
            let before = solve_qw(rho, omega, cost, opts)?.distance;
            let after = solve_qw(&map.apply(rho)?, &map.apply(omega)?, cost, opts)?.distance;
            Ok((after - before).abs())
        })
        .collect();

    let mut max_deviation = 0.0;
    let mut worst = 0;
    for (i, (d, (stratum, rho, omega))) in deviations.into_iter().zip(&pairs).enumerate() {
        let d = d.map_err(|e| attach_pair(e, *stratum, rho, omega))?;
        if d > max_deviation || i == 0 {
            max_deviation = d;
            worst = i;
        }
    }
    let (_, rho, omega) = &pairs[worst];
    Ok(IsometryReport {
        map: map.clone(),
        cost_name: cost.name().to_string(),
        pairs_tested: n_pairs,
        tolerance: tol,
        max_deviation,
        worst_pair: (rho.bloch().to_array(), omega.bloch().to_array()),
        verdict: if max_deviation <= tol { Verdict::IsometryWithinTol } else { Verdict::Violated },
    })
}

fn attach_pair(e: QwError, stratum: Stratum, rho: &QubitState, omega: &QubitState) -> QwError {
    let pair = format!(
        "{stratum:?} pair ρ = {:?}, ω = {:?}",
        rho.bloch().to_array(),
        omega.bloch().to_array()
    );
    match e {
        QwError::NumericFailure { message, residual, best_value } => {
            QwError::NumericFailure { message: format!("{message} [{pair}]"), residual, best_value }
        }
        QwError::InvalidArgument(m) => QwError::InvalidArgument(format!("{m} [{pair}]")),
    }
}
