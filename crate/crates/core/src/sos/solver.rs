//! First-order PSD feasibility for the SOS constraints.
//!
//! Feasible set: `P ∈ K ∩ A` with
//! `K = {P symmetric : P ≽ 0, P1 = 0}` and `A = {P : A(P) = b(ε)}`.
//! Restricting to `P1 = 0` loses nothing, since any SOS decomposition of an
//! element of the augmentation ideal has `ξ_i` in the augmentation ideal.
//!
//! Both projections are exact: the constraint rows partition the index
//! pairs, so projecting onto `A` adds `(b_t - s_t)/m_t` to every entry of
//! row `t`; projecting onto `K` is `Π_PSD(QPQ)` with `Q = I - J/N`.
//!
//! Stopping rule, evaluated every `check_every` iterations on the cone
//! iterate `X ∈ K`:
//! * feasible when `max_t |b_t - A(X)_t| <= tol`;
//! * infeasible when the row multipliers `y_t = -(b_t - A(X)_t)/m_t` satisfy
//!   `⟨y, b⟩ < min(0, λ_min(Q Aᵀy Q)) · b_1`, which no feasible `P` allows
//!   because `tr P = b_1` (the identity row is the diagonal);
//! * inconclusive after `max_iter` iterations.

use nalgebra::DMatrix;

use super::SosProblem;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    AlternatingProjections,
    DouglasRachford,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::AlternatingProjections => "alternating-projections",
            Method::DouglasRachford => "douglas-rachford",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub method: Method,
    pub symmetrize: bool,
    pub check_every: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-7,
            max_iter: 20_000,
            method: Method::DouglasRachford,
            symmetrize: false,
            check_every: 10,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Feasible,
    InfeasibleAtTolerance,
    Inconclusive,
}

impl SolveStatus {
    pub fn name(self) -> &'static str {
        match self {
            SolveStatus::Feasible => "feasible",
            SolveStatus::InfeasibleAtTolerance => "infeasible-at-tolerance",
            SolveStatus::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub epsilon: f64,
    /// Last cone iterate: PSD with `P1 = 0` up to rounding.
    pub gram: DMatrix<f64>,
    pub iterations: usize,
    /// Max-norm constraint residual of `gram`.
    pub residual: f64,
    /// Iteration state, usable as a warm start.
    pub state: DMatrix<f64>,
}

fn project_affine<E: Clone + Eq + std::hash::Hash>(
    problem: &SosProblem<E>,
    p: &DMatrix<f64>,
    b: &[f64],
) -> DMatrix<f64> {
    let s = problem.pairing_f64(p);
    let corr: Vec<f64> = (0..b.len()).map(|t| (b[t] - s[t]) / problem.row_sizes()[t] as f64).collect();
    let n = problem.dim();
    DMatrix::from_fn(n, n, |i, j| p[(i, j)] + corr[problem.row_of(i, j)])
}

/// `Q P Q` for `Q = I - J/N`, symmetrized.
pub(crate) fn center(p: &DMatrix<f64>) -> DMatrix<f64> {
    let n = p.nrows();
    let nf = n as f64;
    let row: Vec<f64> = (0..n).map(|i| p.row(i).sum() / nf).collect();
    let col: Vec<f64> = (0..n).map(|j| p.column(j).sum() / nf).collect();
    let all = row.iter().sum::<f64>() / nf;
    DMatrix::from_fn(n, n, |i, j| {
        let a = p[(i, j)] - row[i] - col[j] + all;
        let b = p[(j, i)] - row[j] - col[i] + all;
        0.5 * (a + b)
    })
}

fn project_cone(p: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = center(p).symmetric_eigen();
    let mut v = eig.eigenvectors.clone();
    for (k, &l) in eig.eigenvalues.iter().enumerate() {
        let s = l.max(0.0).sqrt();
        v.column_mut(k).scale_mut(s);
    }
    &v * v.transpose()
}

pub(crate) fn min_eigenvalue(p: &DMatrix<f64>) -> f64 {
    p.clone().symmetric_eigen().eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

fn residual_max(problem_pairing: &[f64], b: &[f64]) -> f64 {
    problem_pairing.iter().zip(b).map(|(s, t)| (t - s).abs()).fold(0.0, f64::max)
}

/// The dual test described in the module docs.
fn dual_infeasible<E: Clone + Eq + std::hash::Hash>(
    problem: &SosProblem<E>,
    x: &DMatrix<f64>,
    b: &[f64],
) -> bool {
    let trace = b[0];
    if trace < 0.0 {
        return true;
    }
    let s = problem.pairing_f64(x);
    let y: Vec<f64> = (0..b.len()).map(|t| -(b[t] - s[t]) / problem.row_sizes()[t] as f64).collect();
    let yb: f64 = y.iter().zip(b).map(|(a, c)| a * c).sum();
    if yb >= 0.0 {
        return false;
    }
    let n = problem.dim();
    let ymat = DMatrix::from_fn(n, n, |i, j| y[problem.row_of(i, j)]);
    let lmin = min_eigenvalue(&center(&ymat));
    let scale = y.iter().map(|v| v.abs()).sum::<f64>() * b.iter().map(|v| v.abs()).fold(0.0, f64::max);
    yb + 1e-9 * scale < lmin.min(0.0) * trace
}

/// Decides feasibility of `Δ² - εΔ` as an SOS over the problem's ball.
/// Deterministic for fixed inputs.
pub fn solve_feasibility<E: Clone + Eq + std::hash::Hash>(
    problem: &SosProblem<E>,
    epsilon: f64,
    options: &SolveOptions,
    warm_start: Option<&DMatrix<f64>>,
) -> SolveResult {
    let n = problem.dim();
    let b = problem.target_f64(epsilon);
    let sym = options.symmetrize && !problem.symmetry().is_empty();
    let mut z = match warm_start {
        Some(w) if w.nrows() == n && w.ncols() == n => w.clone(),
        _ => DMatrix::zeros(n, n),
    };
    if sym {
        z = problem.symmetrize(&z);
    }
    let check_every = options.check_every.max(1);
    let finish = |status, x: DMatrix<f64>, it, z: DMatrix<f64>| {
        let residual = residual_max(&problem.pairing_f64(&x), &b);
        SolveResult { status, epsilon, gram: x, iterations: it, residual, state: z }
    };
    if b[0] < 0.0 {
        return finish(SolveStatus::InfeasibleAtTolerance, DMatrix::zeros(n, n), 0, z);
    }
    let mut x = project_cone(&z);
    for it in 1..=options.max_iter {
        match options.method {
            Method::DouglasRachford => {
                let reflected = &x * 2.0 - &z;
                let a = project_affine(problem, &reflected, &b);
                z += a - &x;
            }
            Method::AlternatingProjections => {
                z = project_affine(problem, &x, &b);
            }
        }
        if sym && it % check_every == 0 {
            z = problem.symmetrize(&z);
        }
        x = project_cone(&z);
        if it % check_every == 0 || it == options.max_iter {
            let res = residual_max(&problem.pairing_f64(&x), &b);
            if res <= options.tol {
                let x = if sym { problem.symmetrize(&x) } else { x };
                return finish(SolveStatus::Feasible, x, it, z);
            }
            if it % (5 * check_every) == 0 && dual_infeasible(problem, &x, &b) {
                return finish(SolveStatus::InfeasibleAtTolerance, x, it, z);
            }
        }
    }
    let status = if dual_infeasible(problem, &x, &b) {
        SolveStatus::InfeasibleAtTolerance
    } else {
        SolveStatus::Inconclusive
    };
    finish(status, x, options.max_iter, z)
}

/// Result of bisection on `ε`.
#[derive(Clone, Debug)]
pub struct EpsilonSearch {
    /// Largest `ε` solved as feasible (the lower bracket end).
    pub eps_star: f64,
    /// `eps_star` is feasible; `upper` was not shown feasible.
    pub upper: f64,
    pub gram: Option<DMatrix<f64>>,
    /// `(ε, status, iterations)` per solve, in order.
    pub steps: Vec<(f64, SolveStatus, usize)>,
}

/// Bisection on the fixed bracket `[0, 2|S|]` until its width is at most
/// `eps_tol`. Inconclusive solves count as not feasible.
pub fn maximize_epsilon<E: Clone + Eq + std::hash::Hash>(
    problem: &SosProblem<E>,
    options: &SolveOptions,
    eps_tol: f64,
) -> EpsilonSearch {
    let mut steps = Vec::new();
    let mut hi = 2.0 * problem.generator_count() as f64;
    let top = solve_feasibility(problem, hi, options, None);
    steps.push((hi, top.status, top.iterations));
    if top.status == SolveStatus::Feasible {
        return EpsilonSearch { eps_star: hi, upper: hi, gram: Some(top.gram), steps };
    }
    let base = solve_feasibility(problem, 0.0, options, None);
    steps.push((0.0, base.status, base.iterations));
    let mut lo = 0.0;
    let (mut gram, mut warm) = if base.status == SolveStatus::Feasible {
        (Some(base.gram), Some(base.state))
    } else {
        (None, None)
    };
    while hi - lo > eps_tol {
        let mid = 0.5 * (lo + hi);
        let r = solve_feasibility(problem, mid, options, warm.as_ref());
        steps.push((mid, r.status, r.iterations));
        if r.status == SolveStatus::Feasible {
            lo = mid;
            gram = Some(r.gram);
            warm = Some(r.state);
        } else {
            hi = mid;
        }
    }
    EpsilonSearch { eps_star: lo, upper: hi, gram, steps }
}
