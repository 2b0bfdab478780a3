//! Primal-dual interior-point iterations for the coupling SDP.
//!
//! Standard form: minimize `⟨C, X⟩` over `X ⪰ 0` with `⟨A_i, X⟩ = b_i`, where
//! the seven `A_i` are `I⊗I`, `σ_k⊗I` and `I⊗σ_k`. The dual is
//! `max bᵀy` with `S = C − Σ y_i A_i ⪰ 0`. Search directions are HKM
//! (`ΔX = σμS⁻¹ − X − XΔS S⁻¹`, symmetrized) with Mehrotra's
//! predictor-corrector choice of `σ`.

use crate::error::{QwError, Result};
use crate::linalg::{eigh, kron, trace_product, ComplexMatrix};
use crate::state::sigma;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub(crate) const CONSTRAINTS: usize = 7;
const STEP_FRACTION: f64 = 0.98;
const REFINE_STEPS: usize = 8;
const SHORT_STEP: f64 = 0.2;
const RECENTRE_SIGMA: f64 = 0.5;
const MARGINAL_FLOOR: f64 = 1e-12;

type Vec7 = [f64; CONSTRAINTS];

pub(crate) struct Iterate {
    pub x: ComplexMatrix,
    pub y: Vec7,
    pub s: ComplexMatrix,
    /// Shorter of the last primal and dual step lengths.
    pub last_step: f64,
}

pub(crate) fn basis() -> [ComplexMatrix; CONSTRAINTS] {
    let i2 = ComplexMatrix::identity(2);
    [
        ComplexMatrix::identity(4),
        kron(&sigma(1), &i2),
        kron(&sigma(2), &i2),
        kron(&sigma(3), &i2),
        kron(&i2, &sigma(1)),
        kron(&i2, &sigma(2)),
        kron(&i2, &sigma(3)),
    ]
}

fn apply_op(a: &[ComplexMatrix; CONSTRAINTS], m: &ComplexMatrix) -> Vec7 {
    let mut out = [0.0; CONSTRAINTS];
    for (o, ai) in out.iter_mut().zip(a) {
        *o = trace_product(ai, m).re;
    }
    out
}

pub(crate) fn apply_adjoint(a: &[ComplexMatrix; CONSTRAINTS], y: &Vec7) -> ComplexMatrix {
    a.iter()
        .zip(y)
        .fold(ComplexMatrix::zeros(4), |acc, (ai, &yi)| acc + ai.scale(yi))
}

fn norm7(v: &Vec7) -> f64 {
    v.iter().map(|t| t * t).sum::<f64>().sqrt()
}

/// Largest `α ≤ 1/STEP_FRACTION` keeping `X + αΔX ⪰ 0`, given `X^{-1/2}`.
fn max_step(x_inv_sqrt: &ComplexMatrix, dx: &ComplexMatrix) -> Result<f64> {
    let p = (*x_inv_sqrt * *dx * *x_inv_sqrt).hermitian_part();
    let lam = eigh(&p, 1e-6)?.min_eigenvalue();
    Ok(if lam >= 0.0 { f64::INFINITY } else { -1.0 / lam })
}

struct Direction {
    dx: ComplexMatrix,
    dy: Vec7,
    ds: ComplexMatrix,
}

pub(crate) struct Ipm {
    /// Orthonormal constraint matrices in scaled coordinates.
    a: [ComplexMatrix; CONSTRAINTS],
    b: Vec7,
    c: ComplexMatrix,
    /// `K⁻¹ = 2·ω^{1/2}⊗(ρᵀ)^{1/2}`; original quantities are `X = K⁻¹X'K⁻¹`.
    k_inv: ComplexMatrix,
    /// Upper triangular `R` with `y = R⁻¹y'`.
    r: DMatrix<f64>,
}

fn to_real(m: &ComplexMatrix) -> impl Iterator<Item = f64> + '_ {
    m.entries().iter().flat_map(|z| [z.re, z.im])
}

impl Ipm {
    /// Sets up the problem in coordinates where the trivial coupling is `I/4`:
    /// `X' = KXK` with `K = (ω^{-1/2}⊗(ρᵀ)^{-1/2})/2`. Near-pure marginals
    /// make the original problem badly scaled (optimal potentials grow like
    /// `1/√(1−|b|)`); after the congruence they stay of order one. Marginal
    /// eigenvalues are floored at `MARGINAL_FLOOR`.
    pub fn new(cost: &ComplexMatrix, omega: &ComplexMatrix, rho_t: &ComplexMatrix) -> Result<Self> {
        let root = |m: &ComplexMatrix| -> Result<ComplexMatrix> {
            Ok(eigh(&m.hermitian_part(), 1e-6)?.reconstruct_with(|v| v.max(MARGINAL_FLOOR).sqrt()))
        };
        let inv_root = |m: &ComplexMatrix| -> Result<ComplexMatrix> {
            Ok(eigh(&m.hermitian_part(), 1e-6)?.reconstruct_with(|v| 1.0 / v.max(MARGINAL_FLOOR).sqrt()))
        };
        let k_inv = kron(&root(omega)?, &root(rho_t)?).scale(2.0);
        let scaled: Vec<ComplexMatrix> = basis().iter().map(|a| (k_inv * *a * k_inv).hermitian_part()).collect();
        let mut g = DMatrix::zeros(32, CONSTRAINTS);
        for (j, a) in scaled.iter().enumerate() {
            for (k, v) in to_real(a).enumerate() {
                g[(k, j)] = v;
            }
        }
        let qr = g.qr();
        let q = qr.q();
        let r = qr.r();
        let mut a = [ComplexMatrix::zeros(4); CONSTRAINTS];
        for (j, aj) in a.iter_mut().enumerate() {
            let col: Vec<Complex64> = (0..16).map(|k| Complex64::new(q[(2 * k, j)], q[(2 * k + 1, j)])).collect();
            *aj = ComplexMatrix::from_entries(4, &col)?.hermitian_part();
        }
        // b from the exact trivial coupling; with a pure marginal the start
        // `X = I/4` is then primal infeasible rather than the data perturbed.
        let k = kron(&inv_root(omega)?, &inv_root(rho_t)?).scale(0.5);
        let b = apply_op(&a, &(k * kron(omega, rho_t) * k).hermitian_part());
        let c = (k_inv * *cost * k_inv).hermitian_part();
        Ok(Ipm { a, b, c, k_inv, r })
    }

    /// Starts from the trivial coupling with the dual feasible slack
    /// `S = C + I` (original potentials `y = (−1, 0, …)`).
    pub fn start(&self) -> Iterate {
        let mut y0 = DVector::zeros(CONSTRAINTS);
        y0[0] = -1.0;
        let yv = &self.r * y0;
        let mut y = [0.0; CONSTRAINTS];
        y.copy_from_slice(yv.as_slice());
        let s = (self.c - apply_adjoint(&self.a, &y)).hermitian_part();
        Iterate { x: ComplexMatrix::identity(4).scale(0.25), y, s, last_step: 1.0 }
    }

    /// Maps a scaled primal matrix and multipliers back to the coupling and
    /// the multipliers over the original basis `I⊗I, σ_k⊗I, I⊗σ_k`.
    pub fn original(&self, x: &ComplexMatrix, y: &Vec7) -> Result<(ComplexMatrix, Vec7)> {
        let xo = (self.k_inv * *x * self.k_inv).hermitian_part();
        let yo = self
            .r
            .solve_upper_triangular(&DVector::from_column_slice(y))
            .ok_or_else(|| QwError::numeric("degenerate marginal scaling", f64::NAN))?;
        let mut out = [0.0; CONSTRAINTS];
        out.copy_from_slice(yo.as_slice());
        Ok((xo, out))
    }

    fn direction(
        &self,
        it: &Iterate,
        s_inv: &ComplexMatrix,
        schur: &DMatrix<f64>,
        target: f64,
        corr: Option<&ComplexMatrix>,
    ) -> Result<Direction> {
        let rp = {
            let ax = apply_op(&self.a, &it.x);
            let mut r = self.b;
            r.iter_mut().zip(ax).for_each(|(r, v)| *r -= v);
            r
        };
        let rd = self.c - apply_adjoint(&self.a, &it.y) - it.s;
        let mut g = s_inv.scale(target) - it.x - it.x * rd * *s_inv;
        if let Some(k) = corr {
            g -= *k * *s_inv;
        }
        let ag = apply_op(&self.a, &g);
        let mut rhs = rp;
        rhs.iter_mut().zip(ag).for_each(|(r, v)| *r -= v);
        let singular = || QwError::numeric("singular Schur complement", f64::NAN);
        let z = schur
            .transpose()
            .solve_lower_triangular(&DVector::from_column_slice(&rhs))
            .ok_or_else(singular)?;
        let sol = schur.solve_upper_triangular(&z).ok_or_else(singular)?;
        let mut dy = [0.0; CONSTRAINTS];
        dy.copy_from_slice(sol.as_slice());
        let ady = apply_adjoint(&self.a, &dy);
        let ds = rd - ady;
        let mut dx = (g + it.x * ady * *s_inv).hermitian_part();
        // The Schur system is badly conditioned near the optimum; restore
        // `𝒜(ΔX) = r_p` exactly. The `A_i` are orthonormal.
        let mut miss = rp;
        miss.iter_mut().zip(apply_op(&self.a, &dx)).for_each(|(m, v)| *m -= v);
        dx += apply_adjoint(&self.a, &miss);
        Ok(Direction { dx, dy, ds })
    }

    /// One predictor-corrector step. Returns `false` once the step length
    /// collapses, meaning no further progress is possible in floating point.
    pub fn step(&self, it: &mut Iterate) -> Result<bool> {
        let n = 4.0;
        let mu = trace_product(&it.x, &it.s).re / n;
        let s_spec = eigh(&it.s.hermitian_part(), 1e-6)?;
        let x_spec = eigh(&it.x.hermitian_part(), 1e-6)?;
        if s_spec.min_eigenvalue() <= 0.0 || x_spec.min_eigenvalue() <= 0.0 {
            return Ok(false);
        }
        let s_inv = s_spec.reconstruct_with(|v| 1.0 / v);
        let s_inv_sqrt = s_spec.reconstruct_with(|v| 1.0 / v.sqrt());
        let x_inv_sqrt = x_spec.reconstruct_with(|v| 1.0 / v.sqrt());

        // Schur complement M_ij = Re tr(A_i X A_j S⁻¹) = ⟨B_i, B_j⟩ with
        // B_j = X^{1/2} A_j S^{-1/2}. Factoring B by QR instead of forming M
        // squares the attainable accuracy.
        let x_sqrt = x_spec.reconstruct_with(|v| v.sqrt());
        let mut gram = DMatrix::zeros(32, CONSTRAINTS);
        for j in 0..CONSTRAINTS {
            let bj = x_sqrt * self.a[j] * s_inv_sqrt;
            for (k, z) in bj.entries().iter().enumerate() {
                gram[(2 * k, j)] = z.re;
                gram[(2 * k + 1, j)] = z.im;
            }
        }
        let schur = gram.qr().r();

        let pred = self.direction(it, &s_inv, &schur, 0.0, None)?;
        let ap = max_step(&x_inv_sqrt, &pred.dx)?.min(1.0);
        let ad = max_step(&s_inv_sqrt, &pred.ds)?.min(1.0);
        let mu_aff = trace_product(&(it.x + pred.dx.scale(ap)), &(it.s + pred.ds.scale(ad))).re / n;
        let mut sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);
        if it.last_step < SHORT_STEP {
            // Jammed against the boundary: recentre before pushing μ down.
            sigma = sigma.max(RECENTRE_SIGMA);
        }

        let corr = pred.dx * pred.ds;
        let d = self.direction(it, &s_inv, &schur, sigma * mu, Some(&corr))?;
        let ap = (STEP_FRACTION * max_step(&x_inv_sqrt, &d.dx)?).min(1.0);
        let ad = (STEP_FRACTION * max_step(&s_inv_sqrt, &d.ds)?).min(1.0);
        if ap < 1e-12 && ad < 1e-12 {
            return Ok(false);
        }
        it.x = (it.x + d.dx.scale(ap)).hermitian_part();
        it.s = (it.s + d.ds.scale(ad)).hermitian_part();
        it.y.iter_mut().zip(d.dy).for_each(|(y, v)| *y += ad * v);
        it.last_step = ap.min(ad);
        Ok(true)
    }

    pub fn mu(&self, it: &Iterate) -> f64 {
        trace_product(&it.x, &it.s).re / 4.0
    }

    /// Gauss-Newton refinement of the optimality conditions on the face of
    /// rank-`r` couplings: find `R ∈ ℂ^{4×r}` and `y` with `𝒜(RR*) = b` and
    /// `(C − 𝒜*y)R = 0`, starting from the top eigenpairs of `X`. When the
    /// optimum has rank `r` this converges quadratically even where the
    /// interior-point iterates have stalled. Steps are minimum-norm, which
    /// absorbs the unitary gauge `R ↦ RU`.
    pub fn refine(&self, it: &Iterate, r: usize) -> Result<(ComplexMatrix, Vec7)> {
        let spec = eigh(&it.x.hermitian_part(), 1e-6)?;
        let vecs = spec.eigenvector_matrix();
        let vals = spec.eigenvalues();
        let mut rf = [Complex64::new(0.0, 0.0); 16];
        for row in 0..4 {
            for c in 0..r {
                let src = 4 - r + c;
                rf[4 * row + c] = vecs[(row, src)] * vals[src].max(0.0).sqrt();
            }
        }
        let mut rm = ComplexMatrix::from_entries(4, &rf)?;
        let mut y = it.y;
        let n_params = 8 * r + CONSTRAINTS;
        let n_eqs = CONSTRAINTS + 8 * r;
        // Gauge rows: the anti-Hermitian part of R*ΔR vanishes.
        let n_rows = n_eqs + r * r;

        let residual = |rm: &ComplexMatrix, y: &Vec7| -> Vec<f64> {
            let mut out = Vec::with_capacity(n_eqs);
            let ax = apply_op(&self.a, &(*rm * rm.adjoint()));
            out.extend(self.b.iter().zip(ax).map(|(b, v)| v - b));
            let sr = (self.c - apply_adjoint(&self.a, y)) * *rm;
            for row in 0..4 {
                for c in 0..r {
                    out.push(sr[(row, c)].re);
                    out.push(sr[(row, c)].im);
                }
            }
            out
        };

        let mut f = residual(&rm, &y);
        let mut fnorm = f.iter().map(|v| v * v).sum::<f64>().sqrt();
        for _ in 0..REFINE_STEPS {
            if fnorm < 1e-15 {
                break;
            }
            let s = self.c - apply_adjoint(&self.a, &y);
            let mut jac = DMatrix::zeros(n_rows, n_params);
            let mut put = |col: usize, d1: &Vec7, d2: &ComplexMatrix, gauge: &ComplexMatrix| {
                let anti = *gauge - gauge.adjoint();
                let mut k = n_eqs;
                for a in 0..r {
                    jac[(k, col)] = anti[(a, a)].im;
                    k += 1;
                    for b in a + 1..r {
                        jac[(k, col)] = anti[(a, b)].re;
                        jac[(k + 1, col)] = anti[(a, b)].im;
                        k += 2;
                    }
                }
                for (i, v) in d1.iter().enumerate() {
                    jac[(i, col)] = *v;
                }
                for row in 0..4 {
                    for c in 0..r {
                        let k = CONSTRAINTS + 2 * (row * r + c);
                        jac[(k, col)] = d2[(row, c)].re;
                        jac[(k + 1, col)] = d2[(row, c)].im;
                    }
                }
            };
            let mut col = 0;
            for row in 0..4 {
                for c in 0..r {
                    for unit in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
                        let mut e = [Complex64::new(0.0, 0.0); 16];
                        e[4 * row + c] = unit;
                        let dr = ComplexMatrix::from_entries(4, &e)?;
                        let d1 = apply_op(&self.a, &(dr * rm.adjoint() + rm * dr.adjoint()));
                        put(col, &d1, &(s * dr), &(rm.adjoint() * dr));
                        col += 1;
                    }
                }
            }
            for j in 0..CONSTRAINTS {
                put(col, &[0.0; CONSTRAINTS], &(-(self.a[j] * rm)), &ComplexMatrix::zeros(4));
                col += 1;
            }
            let svd = jac.svd(true, true);
            let cutoff = 1e-14 * svd.singular_values.max();
            let rhs = DVector::from_iterator(n_rows, f.iter().map(|v| -v).chain(std::iter::repeat_n(0.0, r * r)));
            let step = svd
                .solve(&rhs, cutoff)
                .map_err(|e| QwError::numeric(format!("refinement least squares failed: {e}"), fnorm))?;

            let mut trial = rf;
            let mut col = 0;
            for row in 0..4 {
                for c in 0..r {
                    trial[4 * row + c] += Complex64::new(step[col], step[col + 1]);
                    col += 2;
                }
            }
            let trial_rm = ComplexMatrix::from_entries(4, &trial)?;
            let mut trial_y = y;
            for (j, t) in trial_y.iter_mut().enumerate() {
                *t += step[8 * r + j];
            }
            let trial_f = residual(&trial_rm, &trial_y);
            let trial_norm = trial_f.iter().map(|v| v * v).sum::<f64>().sqrt();
            if !(trial_norm < fnorm) {
                break;
            }
            rf = trial;
            rm = trial_rm;
            y = trial_y;
            f = trial_f;
            fnorm = trial_norm;
        }
        Ok(((rm * rm.adjoint()).hermitian_part(), y))
    }

    pub fn primal_residual(&self, it: &Iterate) -> f64 {
        let ax = apply_op(&self.a, &it.x);
        let mut r = self.b;
        r.iter_mut().zip(ax).for_each(|(r, v)| *r -= v);
        norm7(&r)
    }
}
