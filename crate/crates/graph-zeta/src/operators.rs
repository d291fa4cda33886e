//! Operator recursions and trace contexts.
//!
//! The weighted path operators `A_m(u)` (entries `sum u^{bc}` over walks of
//! length `m`) satisfy
//!
//! ```text
//! A_0 = I,  A_1 = A,  A_2 = A^2 - (1-u)(Q+I),
//! A_m = A_{m-1} A - (1-u) A_{m-2} (Q + uI),   m >= 3,
//! ```
//!
//! with `Q = D - I`. From their traces the tail counts `t_m(u)` and the
//! cyclic-bump counts `N_m(u)` follow by the recursions implemented in
//! [`tn_sequence`]. All three trace contexts (finite, periodic, self-similar)
//! evaluate the same recursions; they differ only in the mean `sum*` used for
//! the trace and in how a finite window realizing the graph is produced.
//!
//! Finite propagation makes the windowed computation exact: `A_m` vanishes at
//! distance `> m`, so diagonal entries over the trace support are correct as
//! long as the support stays at distance `> m` from any window vertex whose
//! neighborhood is incomplete. Windows track that margin and refuse traces
//! that would exceed it.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::builders::{ExhaustionScheme, PeriodicSpec};
use crate::error::{Result, ZetaError};
use crate::graph::Graph;

/// Dense-window ceiling for full-matrix sequences; traces use the vector
/// engine instead and are not subject to it.
const MAX_DENSE_WINDOW: usize = 4096;

/// Growth data for the recursion at a fixed Bartholdi parameter `u`:
/// `M(u) = max(|u|, |1-u|, 1)` and
/// `alpha = (d + sqrt(d^2 + 4M(d-1+M)))/2`, the geometric bound with
/// `||A_m(u)|| <= alpha^m`. The series in `z` converge for `|z| < 1/alpha`.
#[derive(Clone, Copy, Debug)]
pub struct UBound {
    pub u: Complex64,
    pub m_u: f64,
    pub alpha: f64,
}

pub fn alpha_bound(d: usize, u: Complex64) -> UBound {
    let m_u = u.norm().max((1.0 - u).norm()).max(1.0);
    let d = d as f64;
    let alpha = 0.5 * (d + (d * d + 4.0 * m_u * (d - 1.0 + m_u)).sqrt());
    UBound { u, m_u, alpha }
}

/// How the mean `sum*` treats the trace support.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceNorm {
    /// Normalized mean `1/|support|` (finite and self-similar contexts).
    Mean,
    /// Plain sum over the support (periodic contexts, `tau(I) = |F|`).
    Sum,
}

/// A complex matrix on a finite vertex window, tagged with the propagation
/// radius of the operator it represents and with the exactness margin of the
/// window it lives on.
#[derive(Clone, Debug)]
pub struct OperatorWindow {
    mat: DMatrix<Complex64>,
    propagation: usize,
    margin: usize,
    support: Arc<Vec<usize>>,
    norm: TraceNorm,
}

impl OperatorWindow {
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn propagation(&self) -> usize {
        self.propagation
    }

    /// Largest propagation for which diagonal entries over the trace support
    /// are exact values of the infinite-graph operator.
    pub fn exact_margin(&self) -> usize {
        self.margin
    }

    /// Spectral norm (largest singular value).
    pub fn spectral_norm(&self) -> f64 {
        self.mat.clone().svd(false, false).singular_values[0]
    }

    pub fn diag_over_support(&self) -> Vec<Complex64> {
        self.support.iter().map(|&x| self.mat[(x, x)]).collect()
    }

    fn tau(&self) -> Complex64 {
        let s: Complex64 = self.support.iter().map(|&x| self.mat[(x, x)]).sum();
        match self.norm {
            TraceNorm::Mean => s / self.support.len() as f64,
            TraceNorm::Sum => s,
        }
    }

    fn like(&self, mat: DMatrix<Complex64>, propagation: usize) -> Self {
        Self {
            mat,
            propagation,
            margin: self.margin,
            support: Arc::clone(&self.support),
            norm: self.norm,
        }
    }

    /// `self + other * c`, propagation the max of the two.
    pub fn axpy(&self, other: &OperatorWindow, c: Complex64) -> OperatorWindow {
        self.like(
            &self.mat + &other.mat * c,
            self.propagation.max(other.propagation),
        )
    }

    /// Swaps in a raw matrix, keeping the window metadata (test support).
    #[cfg(test)]
    pub(crate) fn replace_matrix_for_test(&self, mat: DMatrix<Complex64>) -> OperatorWindow {
        self.like(mat, self.propagation)
    }

    pub fn scale(&self, c: Complex64) -> OperatorWindow {
        self.like(&self.mat * c, self.propagation)
    }
}

/// The realized finite window a context computes on: an induced subgraph of
/// the (possibly infinite) graph, the true degree of every window vertex in
/// the ambient graph, the trace support, and the exactness margin.
pub(crate) struct ComputeWindow {
    pub graph: Graph,
    /// True ambient degree of each window vertex (may exceed the realized
    /// degree near the window boundary).
    pub degrees: Vec<usize>,
    pub support: Arc<Vec<usize>>,
    pub norm: TraceNorm,
    pub margin: usize,
}

impl ComputeWindow {
    fn star<F>(&self, f: F) -> Complex64
    where
        F: Fn(usize, usize) -> Complex64, // (support position, window vertex)
    {
        let s: Complex64 = self
            .support
            .iter()
            .enumerate()
            .map(|(i, &x)| f(i, x))
            .sum();
        match self.norm {
            TraceNorm::Mean => s / self.support.len() as f64,
            TraceNorm::Sum => s,
        }
    }
}

/// Finite graph with the normalized mean `(1/|V|) sum_x`.
#[derive(Clone, Debug)]
pub struct FiniteContext {
    pub graph: Graph,
}

/// Infinite periodic graph realized on a finite window: a ball of the given
/// radius around one copy of the fundamental domain. The trace is the sum
/// over the fundamental domain (`tau(I) = |F|`).
#[derive(Clone, Debug)]
pub struct PeriodicContext {
    pub(crate) spec: PeriodicSpec,
    pub(crate) window: Graph,
    pub(crate) window_radius: usize,
    /// Window indices of the fundamental domain (cell 0).
    pub(crate) domain: Vec<usize>,
    /// True lattice degree of every window vertex.
    pub(crate) degrees: Vec<usize>,
    /// (cell offset, domain label index) of every window vertex.
    pub(crate) coords: Vec<(Vec<i64>, usize)>,
}

impl PeriodicContext {
    pub fn spec(&self) -> &PeriodicSpec {
        &self.spec
    }

    pub fn window_graph(&self) -> &Graph {
        &self.window
    }

    pub fn window_radius(&self) -> usize {
        self.window_radius
    }

    pub fn domain_indices(&self) -> &[usize] {
        &self.domain
    }

    pub fn coordinates(&self) -> &[(Vec<i64>, usize)] {
        &self.coords
    }

    pub fn lattice_degree(&self, window_vertex: usize) -> usize {
        self.degrees[window_vertex]
    }
}

/// Self-similar graph given by a substitution scheme, truncated at an
/// exhaustion level. The trace is `Tr(P(K_n) T)/|K_n|` computed exactly on a
/// large enough realization.
#[derive(Clone, Debug)]
pub struct SelfSimilarContext {
    pub(crate) scheme: ExhaustionScheme,
    pub(crate) level: usize,
    pub(crate) tolerance: f64,
}

impl SelfSimilarContext {
    pub fn scheme(&self) -> &ExhaustionScheme {
        &self.scheme
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Requested convergence tolerance for level-pair estimates.
    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }
}

/// One of the three trace contexts: the mean `sum*` plus the data needed to
/// realize operators on finite windows.
#[derive(Clone, Debug)]
pub enum TraceContext {
    Finite(FiniteContext),
    Periodic(PeriodicContext),
    SelfSimilar(SelfSimilarContext),
}

impl TraceContext {
    pub fn finite(graph: Graph) -> Self {
        TraceContext::Finite(FiniteContext { graph })
    }

    /// Degree bound `d` of the (possibly infinite) graph.
    pub fn degree_bound(&self) -> usize {
        match self {
            TraceContext::Finite(f) => f.graph.max_degree(),
            TraceContext::Periodic(p) => p.degrees.iter().copied().max().unwrap_or(0),
            TraceContext::SelfSimilar(s) => s.scheme.degree_bound(),
        }
    }

    /// `tau(I)`: 1 for finite and self-similar contexts, `|F|` for periodic.
    pub fn tau_identity(&self) -> f64 {
        match self {
            TraceContext::Periodic(p) => p.domain.len() as f64,
            _ => 1.0,
        }
    }

    pub fn alpha(&self, u: Complex64) -> UBound {
        alpha_bound(self.degree_bound(), u)
    }

    pub fn description(&self) -> String {
        match self {
            TraceContext::Finite(f) => format!(
                "finite graph, {} vertices, normalized mean",
                f.graph.vertex_count()
            ),
            TraceContext::Periodic(p) => format!(
                "periodic lattice (rank {}), |F| = {}, window radius {}",
                p.spec.rank,
                p.domain.len(),
                p.window_radius
            ),
            TraceContext::SelfSimilar(s) => format!(
                "self-similar exhaustion, level {} ({} vertices)",
                s.level,
                s.scheme.level_vertex_count(s.level)
            ),
        }
    }

    pub(crate) fn compute_window(&self, propagation: usize) -> Result<ComputeWindow> {
        match self {
            TraceContext::Finite(f) => {
                let n = f.graph.vertex_count();
                Ok(ComputeWindow {
                    degrees: (0..n).map(|v| f.graph.degree(v)).collect(),
                    support: Arc::new((0..n).collect()),
                    norm: TraceNorm::Mean,
                    margin: usize::MAX,
                    graph: f.graph.clone(),
                })
            }
            TraceContext::Periodic(p) => {
                let margin = p.window_radius.saturating_sub(1);
                if propagation > margin {
                    return Err(ZetaError::WindowTooSmall {
                        requested: propagation,
                        margin,
                    });
                }
                Ok(ComputeWindow {
                    graph: p.window.clone(),
                    degrees: p.degrees.clone(),
                    support: Arc::new(p.domain.clone()),
                    norm: TraceNorm::Sum,
                    margin,
                })
            }
            TraceContext::SelfSimilar(s) => s.scheme.realize_window(s.level, propagation),
        }
    }

    /// The trace `tau(T) = sum*_x T(x,x)` of a windowed operator produced by
    /// this context.
    pub fn trace(&self, w: &OperatorWindow) -> Result<Complex64> {
        if w.propagation > w.margin {
            return Err(ZetaError::WindowTooSmall {
                requested: w.propagation,
                margin: w.margin,
            });
        }
        Ok(w.tau())
    }

    /// Normalized variant `tau(T)/tau(I)` (a trace state in every context).
    pub fn trace_state(&self, w: &OperatorWindow) -> Result<Complex64> {
        Ok(self.trace(w)? / self.tau_identity())
    }

    /// Identity operator on the context's window, sized for the given
    /// propagation budget.
    pub fn identity_window(&self, propagation_budget: usize) -> Result<OperatorWindow> {
        let cw = self.compute_window(propagation_budget)?;
        let n = cw.graph.vertex_count();
        Ok(OperatorWindow {
            mat: DMatrix::identity(n, n),
            propagation: 0,
            margin: cw.margin,
            support: cw.support,
            norm: cw.norm,
        })
    }

    /// Adjacency operator on the context's window.
    pub fn adjacency_window(&self, propagation_budget: usize) -> Result<OperatorWindow> {
        let cw = self.compute_window(propagation_budget.max(1))?;
        let n = cw.graph.vertex_count();
        check_dense_budget(n)?;
        let mut mat = DMatrix::zeros(n, n);
        for v in 0..n {
            for &w in cw.graph.neighbors(v) {
                mat[(v, w)] = Complex64::new(1.0, 0.0);
            }
        }
        Ok(OperatorWindow {
            mat,
            propagation: 1,
            margin: cw.margin,
            support: cw.support,
            norm: cw.norm,
        })
    }

    /// Diagonal window `f(deg_X(v))` from the true ambient degrees.
    pub fn degree_diag_window<F>(&self, propagation_budget: usize, f: F) -> Result<OperatorWindow>
    where
        F: Fn(f64) -> Complex64,
    {
        let cw = self.compute_window(propagation_budget)?;
        let n = cw.graph.vertex_count();
        let mut mat = DMatrix::zeros(n, n);
        for v in 0..n {
            mat[(v, v)] = f(cw.degrees[v] as f64);
        }
        Ok(OperatorWindow {
            mat,
            propagation: 0,
            margin: cw.margin,
            support: cw.support,
            norm: cw.norm,
        })
    }

    /// `Q - I = D - 2I` as a window (used by Euler characteristics).
    pub fn q_minus_i_window(&self, propagation_budget: usize) -> Result<OperatorWindow> {
        self.degree_diag_window(propagation_budget, |d| Complex64::new(d - 2.0, 0.0))
    }
}

fn check_dense_budget(n: usize) -> Result<()> {
    if n > MAX_DENSE_WINDOW {
        return Err(ZetaError::BudgetExceeded {
            needed: (n as u64) * (n as u64),
            limit: (MAX_DENSE_WINDOW as u64) * (MAX_DENSE_WINDOW as u64),
        });
    }
    Ok(())
}

/// `m * A` for the window adjacency, exploiting sparsity of `A`:
/// `(mA).col(j) = sum_{k ~ j} m.col(k)`.
fn right_mul_adjacency(m: &DMatrix<Complex64>, g: &Graph) -> DMatrix<Complex64> {
    let n = m.nrows();
    let mut out = DMatrix::zeros(n, n);
    for j in 0..n {
        for &k in g.neighbors(j) {
            let src = m.column(k).clone_owned();
            let mut dst = out.column_mut(j);
            dst += src;
        }
    }
    out
}

/// Scale columns by a diagonal: `m * diag(d)`.
fn right_mul_diag(m: &DMatrix<Complex64>, d: &[Complex64]) -> DMatrix<Complex64> {
    let mut out = m.clone();
    for (j, &dj) in d.iter().enumerate() {
        let mut col = out.column_mut(j);
        col *= dj;
    }
    out
}

/// The operator sequence `A_0(u)..A_M(u)` as full matrices on the context's
/// window.
///
/// Intended for fixture-scale windows (norm checks, pencil identities); the
/// trace pipeline uses [`tn_sequence`], which never materializes matrices.
pub fn a_sequence(ctx: &TraceContext, u: Complex64, m_max: usize) -> Result<Vec<OperatorWindow>> {
    let cw = ctx.compute_window(m_max)?;
    let n = cw.graph.vertex_count();
    check_dense_budget(n)?;
    let one = Complex64::new(1.0, 0.0);
    let deg: Vec<Complex64> = cw.degrees.iter().map(|&d| one * d as f64).collect();
    let q_plus_u: Vec<Complex64> = cw.degrees.iter().map(|&d| (d as f64 - 1.0) + u).collect();

    let mk = |mat: DMatrix<Complex64>, prop: usize| OperatorWindow {
        mat,
        propagation: prop,
        margin: cw.margin,
        support: Arc::clone(&cw.support),
        norm: cw.norm,
    };

    let mut out: Vec<OperatorWindow> = Vec::with_capacity(m_max + 1);
    out.push(mk(DMatrix::identity(n, n), 0));
    if m_max == 0 {
        return Ok(out);
    }
    let a1 = right_mul_adjacency(out[0].matrix(), &cw.graph);
    out.push(mk(a1, 1));
    for m in 2..=m_max {
        let prev = out[m - 1].matrix();
        let prev2 = out[m - 2].matrix();
        let mut next = right_mul_adjacency(prev, &cw.graph);
        let corr = if m == 2 {
            right_mul_diag(prev2, &deg)
        } else {
            right_mul_diag(prev2, &q_plus_u)
        };
        next -= corr * (one - u);
        out.push(mk(next, m));
    }
    Ok(out)
}

/// The operator sequence `B_0(u)..B_M(u)`:
/// `B_m = A_m - (Q - (1-2u)I) sum_{k=1}^{[m/2]} (1-u)^{2k-1} A_{m-2k}`.
pub fn b_sequence(ctx: &TraceContext, u: Complex64, m_max: usize) -> Result<Vec<OperatorWindow>> {
    let a_seq = a_sequence(ctx, u, m_max)?;
    let cw = ctx.compute_window(m_max)?;
    let one = Complex64::new(1.0, 0.0);
    let q_shift: Vec<Complex64> = cw
        .degrees
        .iter()
        .map(|&d| (d as f64 - 1.0) - (one - 2.0 * u))
        .collect();
    let mut out = Vec::with_capacity(m_max + 1);
    out.push(a_seq[0].clone());
    if m_max >= 1 {
        out.push(a_seq[1].clone());
    }
    for m in 2..=m_max {
        let mut acc = DMatrix::zeros(a_seq[0].dim(), a_seq[0].dim());
        let mut pw = one; // (1-u)^{2k-1} built incrementally
        for k in 1..=m / 2 {
            pw = if k == 1 {
                one - u
            } else {
                pw * (one - u) * (one - u)
            };
            acc += a_seq[m - 2 * k].matrix() * pw;
        }
        // left-multiply by the diagonal Q - (1-2u)I: scale rows
        for i in 0..acc.nrows() {
            let qi = q_shift[i];
            for j in 0..acc.ncols() {
                acc[(i, j)] *= qi;
            }
        }
        let mat = a_seq[m].matrix() - acc;
        out.push(a_seq[m].like(mat, m));
    }
    Ok(out)
}

/// The scalar sequences `t_1..t_M` and `N_1..N_M` (index 0 entries are zero).
#[derive(Clone, Debug)]
pub struct TnSequence {
    pub u: Complex64,
    /// Tail counts `t_m(u)` from the two-step recursion; `t[0] = 0`.
    pub t: Vec<Complex64>,
    /// Tail counts from the closed form (the `(1-u)^{2j-2}` sum plus the
    /// even-order boundary term). Must agree with `t`; kept separately so
    /// callers can audit the deviation.
    pub t_closed_form: Vec<Complex64>,
    /// Cyclic-bump counts `N_m(u)`; `n[0] = 0`.
    pub n: Vec<Complex64>,
    /// Traces `tau(A_m(u))` for `m = 0..=M`.
    pub tau_a: Vec<Complex64>,
    /// Traces `tau(B_m(u))` for `m = 0..=M` (from diagonal data alone).
    pub tau_b: Vec<Complex64>,
}

/// Diagonal entries of `A_m(u)` over the trace support, for `m = 0..=M`,
/// computed one support vertex at a time through the transposed recursion
/// `w_m = A w_{m-1} - (1-u)(Q+uI) w_{m-2}` with `w_0 = e_x`. No matrices are
/// materialized, so this route scales to windows with tens of thousands of
/// vertices.
pub(crate) fn diag_table(
    cw: &ComputeWindow,
    u: Complex64,
    m_max: usize,
) -> Vec<Vec<Complex64>> {
    let n = cw.graph.vertex_count();
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut table = vec![vec![zero; cw.support.len()]; m_max + 1];
    let mut prev2 = vec![zero; n];
    let mut prev = vec![zero; n];
    let mut cur = vec![zero; n];
    for (si, &x) in cw.support.iter().enumerate() {
        prev2.iter_mut().for_each(|v| *v = zero);
        prev.iter_mut().for_each(|v| *v = zero);
        prev2[x] = one; // w_0 = e_x
        table[0][si] = one;
        if m_max == 0 {
            continue;
        }
        for &w in cw.graph.neighbors(x) {
            prev[w] = one; // w_1 = A e_x
        }
        table[1][si] = prev[x];
        for m in 2..=m_max {
            for (v, c) in cur.iter_mut().enumerate() {
                let mut s = zero;
                for &w in cw.graph.neighbors(v) {
                    s += prev[w];
                }
                let dv = cw.degrees[v] as f64;
                let corr = if m == 2 {
                    dv * prev2[v]
                } else {
                    ((dv - 1.0) + u) * prev2[v]
                };
                *c = s - (one - u) * corr;
            }
            table[m][si] = cur[x];
            std::mem::swap(&mut prev2, &mut prev);
            std::mem::swap(&mut prev, &mut cur);
        }
    }
    table
}

/// Computes `t_m(u)` and `N_m(u)` for `m <= M` from windowed traces:
/// `t_2 = u tau(Q+I)`, `t_m = tau((Q-(1-2u)I) A_{m-2}) + (1-u)^2 t_{m-2}`,
/// `N_m = tau(A_m) - (1-u) t_m`.
///
/// The tail recursion is cross-checked against its closed form
/// (the `(1-u)^{2j-2}` sum plus the even-`m` boundary term); a relative
/// disagreement beyond 1e-9 reports [`ZetaError::Inconsistent`].
pub fn tn_sequence(ctx: &TraceContext, u: Complex64, m_max: usize) -> Result<TnSequence> {
    let cw = ctx.compute_window(m_max)?;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let diag = diag_table(&cw, u, m_max);

    let tau_a: Vec<Complex64> = (0..=m_max)
        .map(|m| cw.star(|i, _| diag[m][i]))
        .collect();
    // tau((Q - (1-2u)I) A_m) per m, from diagonals
    let tau_qa: Vec<Complex64> = (0..=m_max)
        .map(|m| {
            cw.star(|i, x| {
                let q = cw.degrees[x] as f64 - 1.0;
                (q - (one - 2.0 * u)) * diag[m][i]
            })
        })
        .collect();
    let tau_q_plus_i = cw.star(|_, x| one * cw.degrees[x] as f64);

    let mut t = vec![zero; m_max + 1];
    if m_max >= 2 {
        t[2] = u * tau_q_plus_i;
    }
    for m in 4..=m_max {
        t[m] = tau_qa[m - 2] + (one - u) * (one - u) * t[m - 2];
    }
    // closed form: t_m = sum_{j=1}^{[(m-1)/2]} (1-u)^{2j-2} tau((Q-(1-2u)I)A_{m-2j})
    //                    + [m even] u (1-u)^{m-2} tau(Q+I)
    let mut t_closed_form = vec![zero; m_max + 1];
    for m in 2..=m_max {
        let mut closed = zero;
        let mut pw = one;
        for j in 1..=(m - 1) / 2 {
            if j > 1 {
                pw *= (one - u) * (one - u);
            }
            closed += pw * tau_qa[m - 2 * j];
        }
        if m % 2 == 0 {
            let mut boundary = u * tau_q_plus_i;
            for _ in 0..m - 2 {
                boundary *= one - u;
            }
            closed += boundary;
        }
        t_closed_form[m] = closed;
        let scale = 1.0f64.max(t[m].norm()).max(closed.norm());
        if (t[m] - closed).norm() > 1e-9 * scale {
            return Err(ZetaError::Inconsistent(format!(
                "tail recursion and closed form disagree at m = {m}: {} vs {closed}",
                t[m]
            )));
        }
    }

    let mut n = vec![zero; m_max + 1];
    for m in 1..=m_max {
        n[m] = tau_a[m] - (one - u) * t[m];
    }

    // tau(B_m) from diagonal data: tau(A_m) - sum_k (1-u)^{2k-1} tau_qa[m-2k]
    let mut tau_b = vec![zero; m_max + 1];
    tau_b[0] = cw.star(|_, _| one);
    if m_max >= 1 {
        tau_b[1] = tau_a[1];
    }
    for m in 2..=m_max {
        let mut acc = zero;
        let mut pw = one;
        for k in 1..=m / 2 {
            pw = if k == 1 {
                one - u
            } else {
                pw * (one - u) * (one - u)
            };
            acc += pw * tau_qa[m - 2 * k];
        }
        tau_b[m] = tau_a[m] - acc;
    }

    Ok(TnSequence {
        u,
        t,
        t_closed_form,
        n,
        tau_a,
        tau_b,
    })
}

/// Level-pair Cauchy estimate for a self-similar context: the sequences at
/// the context's level and the absolute differences against level `n-1`.
pub struct TnWithDelta {
    pub seq: TnSequence,
    /// `|tau_n(A_m) - tau_{n-1}(A_m)|` per `m`.
    pub tau_delta: Vec<f64>,
}

pub fn tn_sequence_with_delta(
    ctx: &SelfSimilarContext,
    u: Complex64,
    m_max: usize,
) -> Result<TnWithDelta> {
    if ctx.level < 2 {
        return Err(ZetaError::BadParameter(
            "level-pair estimate needs level >= 2".into(),
        ));
    }
    let here = TraceContext::SelfSimilar(ctx.clone());
    let below = TraceContext::SelfSimilar(SelfSimilarContext {
        scheme: ctx.scheme.clone(),
        level: ctx.level - 1,
        tolerance: ctx.tolerance,
    });
    let seq = tn_sequence(&here, u, m_max)?;
    let prev = tn_sequence(&below, u, m_max)?;
    let tau_delta = seq
        .tau_a
        .iter()
        .zip(prev.tau_a.iter())
        .map(|(a, b)| (a - b).norm())
        .collect();
    Ok(TnWithDelta { seq, tau_delta })
}
