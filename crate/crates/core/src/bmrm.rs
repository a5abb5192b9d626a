//! Bundle method for regularized risk minimization.
//!
//! The objective is `J(w) = R(w) + λ‖w‖²` with `R` the pairwise hinge risk.
//! Each iteration evaluates `R` and a subgradient `a_t` at the previous
//! iterate, adds the cutting plane `⟨w, a_t⟩ + b_t ≤ R(w)` to a piecewise
//! linear model `R_t`, and minimizes `R_t(w) + λ‖w‖²` through its dual,
//!
//! ```text
//! max_{α ∈ simplex}  αᵀb − αᵀGα / (4λ),    w = −Σ α_i a_i / (2λ),
//! ```
//!
//! where `G` is the Gram matrix of the plane normals. The best iterate seen
//! so far is kept, and training stops once the gap between its objective
//! and the model minimum drops below `ε`.

use std::time::Instant;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::pairloss::{Backend, EmpiricalRisk, RiskEvaluation};

/// Dual solves stop at a Frank-Wolfe gap of `DUAL_TOL · max(1, |D|)`.
pub const DUAL_TOL: f64 = 1e-12;
/// Inner step cap for one dual solve.
pub const MAX_DUAL_STEPS: usize = 100_000;
/// Accepted gap when rounding stops the pairwise steps from moving.
const STALL_TOL: f64 = 1e-9;
/// SMO steps between exact active-set refinements.
const POLISH_EVERY: usize = 200;
/// Inner iterations per refinement.
const POLISH_ITERS: usize = 50;
/// Proximal ridge of the refinement, relative to the largest diagonal of
/// the scaled Gram matrix; keeps the face system nonsingular when planes are
/// linearly dependent.
const POLISH_RIDGE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct CuttingPlane {
    pub a: Vec<f64>,
    pub b: f64,
}

impl CuttingPlane {
    /// The plane through `(w, R(w))` with slope `a`.
    pub fn at(w: &[f64], eval: &RiskEvaluation) -> Self {
        CuttingPlane {
            b: eval.loss - dot(w, &eval.subgradient),
            a: eval.subgradient.clone(),
        }
    }

    pub fn value(&self, w: &[f64]) -> f64 {
        dot(w, &self.a) + self.b
    }
}

#[derive(Clone, Debug, Default)]
pub struct CuttingPlaneModel {
    planes: Vec<CuttingPlane>,
    /// Row `i` holds `⟨a_i, a_j⟩` for `j <= i`.
    gram: Vec<Vec<f64>>,
    alpha: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelSolution {
    pub w: Vec<f64>,
    /// Minimum of the model objective (dual value at the solution).
    pub value: f64,
    pub dual_steps: usize,
    /// Frank-Wolfe duality gap at termination.
    pub gap: f64,
}

impl CuttingPlaneModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.planes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.planes.is_empty()
    }

    pub fn planes(&self) -> &[CuttingPlane] {
        &self.planes
    }

    /// Dual weights from the most recent solve (zero for planes added
    /// since).
    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn gram(&self, i: usize, j: usize) -> f64 {
        if j <= i {
            self.gram[i][j]
        } else {
            self.gram[j][i]
        }
    }

    pub fn push(&mut self, plane: CuttingPlane) -> Result<()> {
        if let Some(first) = self.planes.first() {
            if first.a.len() != plane.a.len() {
                return Err(Error::DimensionMismatch {
                    what: "cutting plane",
                    expected: first.a.len(),
                    got: plane.a.len(),
                });
            }
        }
        if !plane.b.is_finite() || plane.a.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("cutting plane must be finite"));
        }
        let mut row: Vec<f64> = self.planes.iter().map(|p| dot(&p.a, &plane.a)).collect();
        row.push(dot(&plane.a, &plane.a));
        self.gram.push(row);
        self.planes.push(plane);
        self.alpha.push(0.0);
        Ok(())
    }

    /// Maximum over planes of `⟨w, a_i⟩ + b_i`.
    pub fn lower_bound(&self, w: &[f64]) -> f64 {
        self.planes
            .iter()
            .map(|p| p.value(w))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Minimizes `max_i(⟨w, a_i⟩ + b_i) + λ‖w‖²` over `w`.
    ///
    /// The dual is solved by pairwise exchange: weight moves from the
    /// support plane with the smallest dual gradient to the plane with the
    /// largest, with an exact line step. The previous solution warm-starts
    /// the next solve.
    pub fn solve(&mut self, lambda: f64) -> Result<ModelSolution> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::invalid(format!(
                "lambda must be positive, got {lambda}"
            )));
        }
        let t = self.planes.len();
        if t == 0 {
            return Err(Error::invalid("cutting plane model is empty"));
        }
        let inv = 1.0 / (2.0 * lambda);

        if self.alpha.iter().sum::<f64>() <= 0.0 {
            // Cold start at the best single plane.
            let best = (0..t)
                .max_by(|&i, &j| {
                    let vi = self.planes[i].b - self.gram(i, i) * inv / 2.0;
                    let vj = self.planes[j].b - self.gram(j, j) * inv / 2.0;
                    vi.total_cmp(&vj)
                })
                .expect("t >= 1");
            self.alpha.iter_mut().for_each(|a| *a = 0.0);
            self.alpha[best] = 1.0;
        }

        let mut ga = self.gram_times_alpha();
        let mut steps = 0;
        loop {
            // Dual gradient: b_i − (Gα)_i / (2λ).
            let grad: Vec<f64> = (0..t).map(|i| self.planes[i].b - inv * ga[i]).collect();
            let (up, g_up) = argmax(&grad);
            let avg: f64 = self.alpha.iter().zip(&grad).map(|(a, g)| a * g).sum();
            let value = self.dual_value(&ga, lambda);
            let gap = g_up - avg;
            let tol = DUAL_TOL * value.abs().max(1.0);
            if gap <= tol {
                // Confirm against a freshly computed Gα before stopping.
                let fresh = self.gram_times_alpha();
                if fresh == ga {
                    return Ok(self.solution(lambda, &ga, steps, gap));
                }
                ga = fresh;
                continue;
            }
            if steps >= MAX_DUAL_STEPS {
                return Err(Error::SolverFailure { steps, gap });
            }
            steps += 1;
            if steps % POLISH_EVERY == 0 {
                self.polish(lambda);
                ga = self.gram_times_alpha();
                continue;
            }

            // Partner: the support plane whose exact (clipped) line step
            // gains the most dual objective.
            let mut down = usize::MAX;
            let mut delta = 0.0;
            let mut best_gain = 0.0;
            for (j, &gj) in grad.iter().enumerate() {
                if self.alpha[j] <= 0.0 || gj >= g_up {
                    continue;
                }
                let diff = g_up - gj;
                let curvature =
                    inv * (self.gram(up, up) + self.gram(j, j) - 2.0 * self.gram(up, j));
                let step = if curvature > 0.0 {
                    (diff / curvature).min(self.alpha[j])
                } else {
                    self.alpha[j]
                };
                let gain = step * diff - 0.5 * curvature.max(0.0) * step * step;
                if down == usize::MAX || gain > best_gain {
                    down = j;
                    delta = step;
                    best_gain = gain;
                }
            }
            if down == usize::MAX {
                // Every support plane already sits at the top gradient.
                return Ok(self.solution(lambda, &ga, steps, gap));
            }
            let (old_up, old_down) = (self.alpha[up], self.alpha[down]);
            self.alpha[up] += delta;
            self.alpha[down] = if delta == old_down {
                0.0
            } else {
                old_down - delta
            };
            if self.alpha[up] == old_up && self.alpha[down] == old_down {
                // Step below rounding resolution.
                if gap <= STALL_TOL * value.abs().max(1.0) {
                    log::debug!("dual solve stalled at gap {gap:e}, accepting");
                    return Ok(self.solution(lambda, &ga, steps, gap));
                }
                return Err(Error::SolverFailure { steps, gap });
            }
            for (k, acc) in ga.iter_mut().enumerate() {
                *acc += delta * (self.gram(k, up) - self.gram(k, down));
            }
        }
    }

    /// Primal active-set refinement of `f(α) = ½αᵀQα − bᵀα`, `Q = G/(2λ)`,
    /// on the simplex. Each inner step minimizes the proximally regularized
    /// model on the working face and takes the longest feasible fraction of
    /// it. Steps that fail to raise the dual value (rounding noise on a
    /// nearly singular face) are undone and end the refinement.
    fn polish(&mut self, lambda: f64) {
        let inv = 1.0 / (2.0 * lambda);
        let t = self.planes.len();
        let qmax = (0..t).map(|i| inv * self.gram(i, i)).fold(0.0, f64::max);
        if qmax <= 0.0 {
            return;
        }
        let ridge = POLISH_RIDGE * qmax;
        let mut work: Vec<usize> = (0..t).filter(|&i| self.alpha[i] > 0.0).collect();
        let mut ga = self.gram_times_alpha();
        let mut value = self.dual_value(&ga, lambda);
        for _ in 0..POLISH_ITERS {
            // Gradient of f (the negated dual gradient).
            let g: Vec<f64> = (0..t).map(|i| inv * ga[i] - self.planes[i].b).collect();
            let s = work.len();
            let mut h = vec![0.0; s * s];
            for (r, &i) in work.iter().enumerate() {
                for (c, &j) in work.iter().enumerate() {
                    h[r * s + c] = inv * self.gram(i, j);
                }
                h[r * s + r] += ridge;
            }
            let Some(chol) = cholesky(h, s) else {
                return;
            };
            let gs: Vec<f64> = work.iter().map(|&i| g[i]).collect();
            let hg = chol_solve(&chol, s, gs);
            let h1 = chol_solve(&chol, s, vec![1.0; s]);
            let nu = -hg.iter().sum::<f64>() / h1.iter().sum::<f64>();
            let d: Vec<f64> = hg.iter().zip(&h1).map(|(a, b)| -(a + nu * b)).collect();

            // Ratio test against the nonnegativity bounds.
            let mut tau = 1.0;
            let mut blocking = None;
            for (r, &i) in work.iter().enumerate() {
                if d[r] < 0.0 {
                    let limit = self.alpha[i] / -d[r];
                    if limit < tau {
                        tau = limit;
                        blocking = Some(r);
                    }
                }
            }
            let saved = self.alpha.clone();
            for (r, &i) in work.iter().enumerate() {
                self.alpha[i] = (self.alpha[i] + tau * d[r]).max(0.0);
            }
            if let Some(r) = blocking {
                self.alpha[work[r]] = 0.0;
            }
            renormalize(&mut self.alpha);
            let next_ga = self.gram_times_alpha();
            let next = self.dual_value(&next_ga, lambda);
            if next < value || (next == value && blocking.is_none() && self.alpha != saved) {
                self.alpha = saved;
                return;
            }
            ga = next_ga;
            value = next;
            if let Some(r) = blocking {
                work.remove(r);
                continue;
            }
            if d.iter().any(|v| v.abs() > 1e-15) {
                continue;
            }
            // Face optimum: admit the plane with the most negative gradient
            // below the face's common level, if any.
            let level = work.iter().map(|&i| g[i]).fold(f64::INFINITY, f64::min);
            let entering = (0..t)
                .filter(|i| !work.contains(i))
                .min_by(|&i, &j| g[i].total_cmp(&g[j]))
                .filter(|&i| g[i] < level - 1e-15 * level.abs().max(1.0));
            match entering {
                Some(i) => work.push(i),
                None => return,
            }
        }
    }

    fn gram_times_alpha(&self) -> Vec<f64> {
        let t = self.planes.len();
        (0..t)
            .map(|i| (0..t).map(|j| self.gram(i, j) * self.alpha[j]).sum())
            .collect()
    }

    fn dual_value(&self, ga: &[f64], lambda: f64) -> f64 {
        let linear: f64 = self
            .alpha
            .iter()
            .zip(&self.planes)
            .map(|(a, p)| a * p.b)
            .sum();
        let quad: f64 = self.alpha.iter().zip(ga).map(|(a, g)| a * g).sum();
        linear - quad / (4.0 * lambda)
    }

    fn solution(&self, lambda: f64, ga: &[f64], dual_steps: usize, gap: f64) -> ModelSolution {
        let n = self.planes[0].a.len();
        let mut w = vec![0.0; n];
        for (alpha, plane) in self.alpha.iter().zip(&self.planes) {
            if *alpha != 0.0 {
                for (wi, ai) in w.iter_mut().zip(&plane.a) {
                    *wi += alpha * ai;
                }
            }
        }
        let scale = -1.0 / (2.0 * lambda);
        w.iter_mut().for_each(|v| *v *= scale);
        ModelSolution {
            w,
            value: self.dual_value(ga, lambda),
            dual_steps,
            gap,
        }
    }
}

/// `R(w) + λ‖w‖²`.
pub fn objective(risk: &EmpiricalRisk, w: &[f64], lambda: f64, backend: Backend) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(risk.loss(w, backend)? + lambda * dot(w, w))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrainConfig {
    pub lambda: f64,
    pub epsilon: f64,
    pub max_iters: usize,
    pub backend: Backend,
    /// Seed the model with the plane `a = 0, b = 0`, a valid lower bound
    /// because the risk is nonnegative.
    pub zero_plane: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            lambda: 0.1,
            epsilon: 1e-3,
            max_iters: 1000,
            backend: Backend::Tree,
            zero_plane: true,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        check_lambda(self.lambda)?;
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::invalid(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::invalid("max_iters must be at least 1"));
        }
        Ok(())
    }
}

/// Converts an unnormalized-risk `C` into the equivalent `λ`, `C = 1/(λN)`.
pub fn lambda_from_c(c: f64, pair_count: u64) -> Result<f64> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::invalid(format!("C must be positive, got {c}")));
    }
    Ok(1.0 / (c * pair_count as f64))
}

pub fn c_from_lambda(lambda: f64, pair_count: u64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(1.0 / (lambda * pair_count as f64))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub iter: usize,
    /// `J(w_t)`.
    pub j_wt: f64,
    /// `J_t(w_t)`, the model minimum.
    pub jt_wt: f64,
    /// `J(w_b)`.
    pub j_wb: f64,
    pub eps_t: f64,
    /// Wall time since training started.
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankModel {
    pub w: Vec<f64>,
    pub lambda: f64,
    pub epsilon: f64,
    pub converged: bool,
    pub trace: Vec<TraceRow>,
}

impl RankModel {
    pub fn iterations(&self) -> usize {
        self.trace.len()
    }

    pub fn final_gap(&self) -> Option<f64> {
        self.trace.last().map(|r| r.eps_t)
    }

    pub fn objective(&self) -> Option<f64> {
        self.trace.last().map(|r| r.j_wb)
    }
}

/// Step-by-step BMRM driver; [`Bmrm::run`] loops to termination.
pub struct Bmrm<'a> {
    risk: &'a EmpiricalRisk,
    cfg: TrainConfig,
    model: CuttingPlaneModel,
    /// `w_{t−1}` and the risk evaluated there.
    current: (Vec<f64>, RiskEvaluation),
    best: Vec<f64>,
    best_value: f64,
    trace: Vec<TraceRow>,
    started: Instant,
}

impl<'a> Bmrm<'a> {
    pub fn new(risk: &'a EmpiricalRisk, cfg: TrainConfig, w0: Option<&[f64]>) -> Result<Self> {
        cfg.validate()?;
        let w0 = match w0 {
            Some(w) => w.to_vec(),
            None => vec![0.0; risk.n()],
        };
        let started = Instant::now();
        let eval = risk.evaluate(&w0, cfg.backend)?;
        let best_value = eval.loss + cfg.lambda * dot(&w0, &w0);
        let mut model = CuttingPlaneModel::new();
        if cfg.zero_plane {
            model.push(CuttingPlane {
                a: vec![0.0; risk.n()],
                b: 0.0,
            })?;
        }
        Ok(Bmrm {
            risk,
            cfg,
            model,
            best: w0.clone(),
            current: (w0, eval),
            best_value,
            trace: Vec::new(),
            started,
        })
    }

    pub fn model(&self) -> &CuttingPlaneModel {
        &self.model
    }

    pub fn best(&self) -> &[f64] {
        &self.best
    }

    pub fn trace(&self) -> &[TraceRow] {
        &self.trace
    }

    /// One BMRM iteration.
    pub fn step(&mut self) -> Result<&TraceRow> {
        let (w_prev, eval) = &self.current;
        self.model.push(CuttingPlane::at(w_prev, eval))?;
        let sol = self.model.solve(self.cfg.lambda)?;

        // The evaluation at w_t supplies J(w_t) now and the next plane later.
        let eval = self.risk.evaluate(&sol.w, self.cfg.backend)?;
        let j_wt = eval.loss + self.cfg.lambda * dot(&sol.w, &sol.w);
        if j_wt < self.best_value {
            self.best_value = j_wt;
            self.best.clone_from(&sol.w);
        }
        self.trace.push(TraceRow {
            iter: self.trace.len() + 1,
            j_wt,
            jt_wt: sol.value,
            j_wb: self.best_value,
            eps_t: self.best_value - sol.value,
            seconds: self.started.elapsed().as_secs_f64(),
        });
        self.current = (sol.w, eval);
        Ok(self.trace.last().expect("just pushed"))
    }

    pub fn run(mut self) -> Result<RankModel> {
        let mut converged = false;
        while self.trace.len() < self.cfg.max_iters {
            let row = self.step()?;
            log::debug!(
                "iter {}: J(w_b) = {:.6e}, eps = {:.3e}",
                row.iter,
                row.j_wb,
                row.eps_t
            );
            if row.eps_t < self.cfg.epsilon {
                converged = true;
                break;
            }
        }
        if !converged {
            log::warn!(
                "no convergence within {} iterations (gap {:e})",
                self.cfg.max_iters,
                self.trace.last().map_or(f64::NAN, |r| r.eps_t)
            );
        }
        Ok(RankModel {
            w: self.best,
            lambda: self.cfg.lambda,
            epsilon: self.cfg.epsilon,
            converged,
            trace: self.trace,
        })
    }
}

/// Trains on a dataset, grouping by query when labels are present.
pub fn train(data: &Dataset, cfg: TrainConfig, w0: Option<&[f64]>) -> Result<RankModel> {
    cfg.validate()?;
    if let Some(w0) = w0 {
        if w0.len() != data.n() {
            return Err(Error::DimensionMismatch {
                what: "initial weight vector",
                expected: data.n(),
                got: w0.len(),
            });
        }
    }
    let risk = data.risk()?;
    Bmrm::new(&risk, cfg, w0)?.run()
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "lambda must be positive, got {lambda}"
        )))
    }
}

/// Lower Cholesky factor of a row-major `s × s` matrix, `None` unless
/// positive definite.
fn cholesky(mut a: Vec<f64>, s: usize) -> Option<Vec<f64>> {
    for j in 0..s {
        let mut diag = a[j * s + j];
        for k in 0..j {
            diag -= a[j * s + k] * a[j * s + k];
        }
        if diag.is_nan() || diag <= 0.0 {
            return None;
        }
        let diag = diag.sqrt();
        a[j * s + j] = diag;
        for i in j + 1..s {
            let mut v = a[i * s + j];
            for k in 0..j {
                v -= a[i * s + k] * a[j * s + k];
            }
            a[i * s + j] = v / diag;
        }
    }
    Some(a)
}

fn chol_solve(l: &[f64], s: usize, mut x: Vec<f64>) -> Vec<f64> {
    for i in 0..s {
        for k in 0..i {
            x[i] -= l[i * s + k] * x[k];
        }
        x[i] /= l[i * s + i];
    }
    for i in (0..s).rev() {
        for k in i + 1..s {
            x[i] -= l[k * s + i] * x[k];
        }
        x[i] /= l[i * s + i];
    }
    x
}

fn renormalize(alpha: &mut [f64]) {
    let total: f64 = alpha.iter().sum();
    if total > 0.0 && total != 1.0 {
        alpha.iter_mut().for_each(|a| *a /= total);
    }
}

fn argmax(v: &[f64]) -> (usize, f64) {
    let mut best = (0, v[0]);
    for (i, &x) in v.iter().enumerate().skip(1) {
        if x > best.1 {
            best = (i, x);
        }
    }
    best
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{SparseMatrix, ViewMode};

    fn plane(a: &[f64], b: f64) -> CuttingPlane {
        CuttingPlane { a: a.to_vec(), b }
    }

    #[test]
    fn single_plane_closed_form() {
        let mut m = CuttingPlaneModel::new();
        m.push(plane(&[1.0, -2.0], 0.5)).unwrap();
        let lambda = 0.25;
        let s = m.solve(lambda).unwrap();
        assert_eq!(s.w, vec![-1.0 / (2.0 * lambda), 2.0 / (2.0 * lambda)]);
        assert!((s.value - (0.5 - 5.0 / (4.0 * lambda))).abs() < 1e-14);
    }

    #[test]
    fn flat_plane() {
        let mut m = CuttingPlaneModel::new();
        m.push(plane(&[0.0], 1.0)).unwrap();
        let s = m.solve(3.0).unwrap();
        assert_eq!(s.w, vec![0.0]);
        assert_eq!(s.value, 1.0);
    }

    #[test]
    fn symmetric_two_planes() {
        let mut m = CuttingPlaneModel::new();
        m.push(plane(&[1.0], 0.0)).unwrap();
        m.push(plane(&[-1.0], 0.0)).unwrap();
        let s = m.solve(0.5).unwrap();
        assert!(s.w[0].abs() < 1e-12);
        assert!(s.value.abs() < 1e-12);
        assert!((m.alpha()[0] - 0.5).abs() < 1e-12);
        assert!((m.alpha()[1] - 0.5).abs() < 1e-12);

        // Oracle: grid over α ∈ [0, 1] of the dual, D(α) = −(2α − 1)² / 2.
        let grid_best = (0..=10_000)
            .map(|k| {
                let a = k as f64 / 10_000.0;
                let s = a - (1.0 - a);
                -s * s / (4.0 * 0.5)
            })
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((grid_best - s.value).abs() < 1e-12);
    }

    #[test]
    fn degenerate_planes_converge() {
        // Far more planes than dimensions, with repeats and collinear slopes.
        let mut m = CuttingPlaneModel::new();
        for k in 0..60 {
            let u = f64::from(k % 7) - 3.0;
            let v = f64::from(k % 5) - 2.0;
            m.push(plane(&[u, 2.0 * u + v], 0.1 * f64::from(k % 11)))
                .unwrap();
        }
        for lambda in [1e-4, 1e-2, 1.0] {
            let sol = m.solve(lambda).unwrap();
            assert!(sol.gap <= STALL_TOL * sol.value.abs().max(1.0));
            let primal = m.lower_bound(&sol.w) + lambda * dot(&sol.w, &sol.w);
            assert!((primal - sol.value).abs() <= 1e-8 * primal.abs().max(1.0));
        }
    }

    #[test]
    fn solve_rejects_bad_input() {
        let mut m = CuttingPlaneModel::new();
        assert!(m.solve(1.0).is_err());
        m.push(plane(&[1.0], 0.0)).unwrap();
        assert!(matches!(m.solve(0.0), Err(Error::InvalidArgument(_))));
        assert!(m.solve(-1.0).is_err());
        assert!(m.push(plane(&[1.0, 2.0], 0.0)).is_err());
        assert!(m.push(plane(&[f64::NAN], 0.0)).is_err());
    }

    #[test]
    fn c_lambda_conversion() {
        let l = lambda_from_c(2.0, 50).unwrap();
        assert_eq!(l, 0.01);
        assert_eq!(c_from_lambda(l, 50).unwrap(), 2.0);
        assert!(lambda_from_c(0.0, 5).is_err());
    }

    fn tiny_dataset() -> Dataset {
        let x = SparseMatrix::from_dense_examples(
            1,
            &[vec![0.0], vec![0.5], vec![2.0]],
            ViewMode::Dual,
        )
        .unwrap();
        Dataset::new(x, vec![1.0, 2.0, 3.0], None).unwrap()
    }

    #[test]
    fn objective_values() {
        let risk = tiny_dataset().risk().unwrap();
        assert_eq!(objective(&risk, &[0.0], 0.1, Backend::Tree).unwrap(), 1.0);
        let j = objective(&risk, &[1.0], 0.1, Backend::Tree).unwrap();
        assert!((j - (1.0 / 6.0 + 0.1)).abs() < 1e-15);
        assert!(objective(&risk, &[1.0], 0.0, Backend::Tree).is_err());
    }

    #[test]
    fn first_plane_at_zero() {
        let risk = tiny_dataset().risk().unwrap();
        let mut b = Bmrm::new(&risk, TrainConfig::default(), None).unwrap();
        b.step().unwrap();
        let first = &b.model().planes()[1];
        assert_eq!(first.b, 1.0);
        assert!((first.a[0] + 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn trains_tiny_problem() {
        let cfg = TrainConfig {
            lambda: 0.1,
            ..Default::default()
        };
        let model = train(&tiny_dataset(), cfg, None).unwrap();
        assert!(model.converged);
        assert!(model.final_gap().unwrap() < 1e-3);
    }

    #[test]
    fn config_validation() {
        let d = tiny_dataset();
        let bad = [
            TrainConfig {
                lambda: 0.0,
                ..Default::default()
            },
            TrainConfig {
                epsilon: 0.0,
                ..Default::default()
            },
            TrainConfig {
                max_iters: 0,
                ..Default::default()
            },
        ];
        for cfg in bad {
            assert!(matches!(
                train(&d, cfg, None),
                Err(Error::InvalidArgument(_))
            ));
        }
        assert!(train(&d, TrainConfig::default(), Some(&[1.0, 2.0])).is_err());
    }

    #[test]
    fn unconverged_is_reported() {
        let cfg = TrainConfig {
            lambda: 1e-4,
            epsilon: 1e-12,
            max_iters: 2,
            ..Default::default()
        };
        let data = crate::data::generate_synthetic(
            crate::data::SyntheticKind::DenseRegression,
            100,
            5,
            1.0,
            1,
        )
        .unwrap();
        let model = train(&data, cfg, None).unwrap();
        assert!(!model.converged);
        assert_eq!(model.iterations(), 2);
    }
}
