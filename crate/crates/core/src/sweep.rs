//! Grid sweeps comparing `D_xz(ρ, η)` with `D_xz(ρ̄, η)` for
//! `η = ½(I + ½σ₂)` and `ρ` on a slice of fixed `y`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cost::{cost_xz, CostOperator};
use crate::error::{QwError, Result};
use crate::rng::StateRng;
use crate::solver::{solve_qw, SolverOptions};
use crate::state::QubitState;

pub const CSV_HEADER: &str = "x,y,z,d_plus,d_minus,margin,purity";
/// Nodes with purity within this of 1 count as boundary (pure) nodes.
pub const BOUNDARY_PURITY_TOL: f64 = 1e-6;
/// Largest `|margin|` accepted at boundary nodes.
pub const BOUNDARY_MARGIN_TOL: f64 = 1e-6;
const BALL_SLACK: f64 = 1e-12;
const CONJUGATION_SAMPLES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Custom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Section {
    #[serde(rename = "full-2d")]
    Full2d,
    DiagonalXEqualsZ,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct SweepConfig {
    pub figure: Figure,
    pub y_value: f64,
    pub grid_min: f64,
    pub grid_max: f64,
    /// Nodes per axis.
    pub grid_points: usize,
    pub section: Section,
    #[serde(default)]
    pub output_path: Option<String>,
    #[serde(default)]
    pub seed: u64,
}

impl SweepConfig {
    pub fn preset(figure: Figure) -> Result<SweepConfig> {
        let (y, bound, points, section) = match figure {
            Figure::Fig1 => (0.5, (3.0f64 / 8.0).sqrt(), 25, Section::Full2d),
            Figure::Fig2 => (0.8, (9.0f64 / 50.0).sqrt(), 25, Section::Full2d),
            Figure::Fig3 => (1.0 / 9.0, (40.0f64 / 81.0).sqrt(), 201, Section::DiagonalXEqualsZ),
            Figure::Custom => return Err(QwError::invalid("the custom figure has no preset")),
        };
        Ok(SweepConfig {
            figure,
            y_value: y,
            grid_min: -bound,
            grid_max: bound,
            grid_points: points,
            section,
            output_path: None,
            seed: 0,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid_points < 2 {
            return Err(QwError::invalid("grid_points must be at least 2"));
        }
        let finite = [self.y_value, self.grid_min, self.grid_max].iter().all(|v| v.is_finite());
        if !finite || self.grid_min >= self.grid_max {
            return Err(QwError::invalid("grid bounds must be finite with grid_min < grid_max"));
        }
        // The farthest node is a corner with |x| = |z| = max(|min|, |max|),
        // for both sections.
        let m = self.grid_min.abs().max(self.grid_max.abs());
        let r2 = 2.0 * m * m + self.y_value * self.y_value;
        if r2 > 1.0 + BALL_SLACK {
            return Err(QwError::invalid(format!(
                "grid leaves the Bloch ball: corner norm² {r2} with y = {}",
                self.y_value
            )));
        }
        Ok(())
    }

    /// `(x, z)` pairs in output order: `x` outer, `z` inner.
    pub fn nodes(&self) -> Vec<(f64, f64)> {
        let n = self.grid_points;
        let coord = |i: usize| {
            if i == n - 1 {
                self.grid_max
            } else {
                self.grid_min + (self.grid_max - self.grid_min) * i as f64 / (n - 1) as f64
            }
        };
        match self.section {
            Section::Full2d => (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| (coord(i), coord(j))).collect(),
            Section::DiagonalXEqualsZ => (0..n).map(|i| (coord(i), coord(i))).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    /// `D_xz(ρ, η)`; NaN when the solver failed at this node.
    pub d_plus: f64,
    /// `D_xz(ρ̄, η)`.
    pub d_minus: f64,
    pub margin: f64,
    pub purity: f64,
}

impl SweepRow {
    pub fn failed(&self) -> bool {
        self.d_plus.is_nan() || self.d_minus.is_nan()
    }

    pub fn is_boundary(&self) -> bool {
        self.purity >= 1.0 - BOUNDARY_PURITY_TOL
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepSummary {
    pub figure: Figure,
    pub y_value: f64,
    pub nodes: usize,
    pub interior_nodes: usize,
    pub boundary_nodes: usize,
    pub failed_nodes: usize,
    /// Minimum margin over interior nodes (purity < 1 − 1e-6).
    pub min_interior_margin: f64,
    pub max_boundary_abs_margin: f64,
    /// Whether `D_xz(ρ, η) < D_xz(ρ̄, η)` held at every interior node.
    pub strict_on_interior: bool,
    pub boundary_within_tol: bool,
    /// Largest `|D(ρ̄, η̄) − d_plus|` and `|D(ρ, η̄) − d_minus|` over seeded
    /// sample nodes; conjugating both arguments must not change either column.
    pub conjugation_check_deviation: f64,
}

impl SweepSummary {
    pub fn passed(&self) -> bool {
        self.failed_nodes == 0 && self.strict_on_interior && self.boundary_within_tol
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepOutput {
    pub config: SweepConfig,
    pub rows: Vec<SweepRow>,
    pub summary: SweepSummary,
}

/// `η = ½(I + ½σ₂)`.
pub fn eta() -> QubitState {
    QubitState::from_xyz(0.0, 0.5, 0.0).expect("η is a state")
}

fn distance(rho: &QubitState, omega: &QubitState, cost: &CostOperator, opts: &SolverOptions) -> f64 {
    solve_qw(rho, omega, cost, opts).map_or(f64::NAN, |r| r.distance)
}

fn row_at(x: f64, y: f64, z: f64, cost: &CostOperator, opts: &SolverOptions) -> Result<SweepRow> {
    let rho = QubitState::from_xyz(x, y, z)?;
    let eta = eta();
    let d_plus = distance(&rho, &eta, cost, opts);
    let d_minus = distance(&rho.conjugate(), &eta, cost, opts);
    Ok(SweepRow { x, y, z, d_plus, d_minus, margin: d_minus - d_plus, purity: x * x + y * y + z * z })
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutput> {
    run_sweep_with(config, &SolverOptions::default())
}

pub fn run_sweep_with(config: &SweepConfig, opts: &SolverOptions) -> Result<SweepOutput> {
    config.validate()?;
    let cost = cost_xz();
    let y = config.y_value;
    let rows = config
        .nodes()
        .par_iter()
        .map(|&(x, z)| row_at(x, y, z, &cost, opts))
        .collect::<Result<Vec<_>>>()?;

    let interior: Vec<&SweepRow> = rows.iter().filter(|r| !r.failed() && !r.is_boundary()).collect();
    let boundary: Vec<&SweepRow> = rows.iter().filter(|r| !r.failed() && r.is_boundary()).collect();
    let min_interior_margin = interior.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    let max_boundary_abs_margin = boundary.iter().map(|r| r.margin.abs()).fold(0.0, f64::max);

    let mut rng = StateRng::seed_from_u64(config.seed);
    let eta_bar = eta().conjugate();
    let mut conjugation_check_deviation: f64 = 0.0;
    for _ in 0..CONJUGATION_SAMPLES.min(rows.len()) {
        let r = &rows[rng.below(rows.len() as u64) as usize];
        if r.failed() {
            continue;
        }
        let rho = QubitState::from_xyz(r.x, r.y, r.z)?;
        let a = distance(&rho.conjugate(), &eta_bar, &cost, opts);
        let b = distance(&rho, &eta_bar, &cost, opts);
        conjugation_check_deviation = conjugation_check_deviation.max((a - r.d_plus).abs()).max((b - r.d_minus).abs());
    }

    let summary = SweepSummary {
        figure: config.figure,
        y_value: y,
        nodes: rows.len(),
        interior_nodes: interior.len(),
        boundary_nodes: boundary.len(),
        failed_nodes: rows.iter().filter(|r| r.failed()).count(),
        min_interior_margin,
        max_boundary_abs_margin,
        strict_on_interior: interior.iter().all(|r| r.margin > 0.0),
        boundary_within_tol: max_boundary_abs_margin <= BOUNDARY_MARGIN_TOL,
        conjugation_check_deviation,
    };
    Ok(SweepOutput { config: config.clone(), rows, summary })
}

/// CSV with 12 significant digits, LF line endings.
pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(100 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let fields = [r.x, r.y, r.z, r.d_plus, r.d_minus, r.margin, r.purity];
        let line: Vec<String> = fields.iter().map(|v| format!("{v:.11e}")).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}
