//! Brute-force ground truth on small finite graphs: closed-path enumeration,
//! bump/tail statistics, rotation classes of cycles, and truncated Euler
//! products.
//!
//! Everything here is deliberately exponential and budget-guarded. The rest
//! of the crate computes the same quantities through operator recursions;
//! this module is the independent oracle those recursions are tested against.
//!
//! Conventions. A closed path of length `m` is a walk `(v_0, ..., v_m)` with
//! `v_m = v_0` and consecutive vertices adjacent. The bump count `bc` looks
//! at interior indices `1..m-1` only; the cyclic bump count `cbc` reads the
//! indices mod `m` and so also sees the seam at the base vertex. A closed
//! path has a tail when its last step retraces its first, `v_1 = v_{m-1}`;
//! in particular every closed path of length 2 is tailed, which is exactly
//! what makes the tail counting function satisfy `t_2(u) = u tau(Q+I)`.

use std::collections::HashSet;

use num_complex::Complex64;

use crate::error::{Result, ZetaError};
use crate::graph::Graph;
use crate::numerics::cpow;
use crate::operators::alpha_bound;

/// Default ceiling on partial paths expanded during enumeration.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Practical size guard for the exponential oracle.
const MAX_ORACLE_LENGTH: usize = 14;
const MAX_ORACLE_VERTICES: usize = 14;

/// A closed walk `(v_0, ..., v_m = v_0)`, stored with the terminal vertex
/// repeated.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClosedPath {
    vertices: Vec<usize>,
}

impl ClosedPath {
    pub fn new(vertices: Vec<usize>, g: &Graph) -> Result<Self> {
        if vertices.len() < 2 || vertices.first() != vertices.last() {
            return Err(ZetaError::BadParameter(
                "closed path must end at its base vertex".into(),
            ));
        }
        for w in vertices.windows(2) {
            if !g.has_edge(w[0], w[1]) {
                return Err(ZetaError::BadParameter(format!(
                    "vertices {} and {} are not adjacent",
                    w[0], w[1]
                )));
            }
        }
        Ok(Self { vertices })
    }

    pub(crate) fn from_raw(vertices: Vec<usize>) -> Self {
        Self { vertices }
    }

    /// Number of edges `m`.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The full vertex sequence including the repeated terminal vertex.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn base(&self) -> usize {
        self.vertices[0]
    }

    /// The sequence `(v_0, ..., v_{m-1})` without the repeated endpoint.
    fn cycle_word(&self) -> &[usize] {
        &self.vertices[..self.vertices.len() - 1]
    }

    /// Lexicographically least rotation of the cycle word, as a closed path.
    pub fn canonical_rotation(&self) -> ClosedPath {
        let w = self.cycle_word();
        let m = w.len();
        let mut best = 0usize;
        for s in 1..m {
            for i in 0..m {
                let a = w[(s + i) % m];
                let b = w[(best + i) % m];
                if a != b {
                    if a < b {
                        best = s;
                    }
                    break;
                }
            }
        }
        let mut out: Vec<usize> = (0..m).map(|i| w[(best + i) % m]).collect();
        out.push(out[0]);
        ClosedPath::from_raw(out)
    }

    /// Minimal period of the cycle word: the effective length of the
    /// underlying primitive cycle.
    pub fn effective_length(&self) -> usize {
        let w = self.cycle_word();
        let m = w.len();
        'cand: for p in 1..=m {
            if !m.is_multiple_of(p) {
                continue;
            }
            for i in 0..m {
                if w[i] != w[i % p] {
                    continue 'cand;
                }
            }
            return p;
        }
        m
    }
}

/// Bump and tail statistics of a closed path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PathStats {
    /// Bumps at interior indices `1..m-1`.
    pub bc: usize,
    /// Bumps counted with indices in `Z_m` (includes the seam).
    pub cbc: usize,
    /// Whether the last step retraces the first (`v_1 = v_{m-1}`).
    pub has_tail: bool,
    /// Whether the path is not a power of a shorter closed path.
    pub primitive: bool,
}

pub fn path_stats(p: &ClosedPath) -> PathStats {
    let v = p.vertices();
    let m = p.len();
    let mut bc = 0usize;
    for i in 1..m {
        if v[i - 1] == v[i + 1] {
            bc += 1;
        }
    }
    let w = p.cycle_word();
    let mut cbc = 0usize;
    for i in 0..m {
        let prev = w[(i + m - 1) % m];
        let next = w[(i + 1) % m];
        if prev == next {
            cbc += 1;
        }
    }
    let has_tail = m >= 2 && v[1] == v[m - 1];
    PathStats {
        bc,
        cbc,
        has_tail,
        primitive: p.effective_length() == m,
    }
}

/// Tracks the enumeration budget across nested calls.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    limit: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Self { limit }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::new(DEFAULT_BUDGET)
    }
}

struct BudgetMeter {
    used: u64,
    limit: u64,
}

impl BudgetMeter {
    fn new(b: Budget) -> Self {
        Self {
            used: 0,
            limit: b.limit,
        }
    }

    fn spend(&mut self, amount: u64) -> Result<()> {
        self.used += amount;
        if self.used > self.limit {
            Err(ZetaError::BudgetExceeded {
                needed: self.used,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }
}

fn check_oracle_size(g: &Graph, m: usize) -> Result<()> {
    if m == 0 {
        return Err(ZetaError::BadParameter("path length must be >= 1".into()));
    }
    if m > MAX_ORACLE_LENGTH || g.vertex_count() > MAX_ORACLE_VERTICES {
        return Err(ZetaError::BudgetExceeded {
            needed: (g.max_degree() as u64).pow(m as u32),
            limit: DEFAULT_BUDGET,
        });
    }
    Ok(())
}

/// All closed paths of length `m` based at `x`, each exactly once.
pub fn closed_paths(g: &Graph, x: usize, m: usize, budget: Budget) -> Result<Vec<ClosedPath>> {
    check_oracle_size(g, m)?;
    let mut meter = BudgetMeter::new(budget);
    let mut out = Vec::new();
    let mut stack = vec![x];
    walk_rec(g, x, m, &mut stack, &mut out, &mut meter)?;
    Ok(out)
}

fn walk_rec(
    g: &Graph,
    base: usize,
    m: usize,
    stack: &mut Vec<usize>,
    out: &mut Vec<ClosedPath>,
    meter: &mut BudgetMeter,
) -> Result<()> {
    if stack.len() == m + 1 {
        if *stack.last().unwrap() == base {
            out.push(ClosedPath::from_raw(stack.clone()));
        }
        return Ok(());
    }
    let v = *stack.last().unwrap();
    meter.spend(g.degree(v) as u64)?;
    for &w in g.neighbors(v) {
        stack.push(w);
        walk_rec(g, base, m, stack, out, meter)?;
        stack.pop();
    }
    Ok(())
}

/// Fold over all closed paths of length `m` based at `x` without storing
/// them.
fn fold_closed_paths<F>(g: &Graph, x: usize, m: usize, meter: &mut BudgetMeter, f: &mut F) -> Result<()>
where
    F: FnMut(&[usize]),
{
    fn rec<F: FnMut(&[usize])>(
        g: &Graph,
        base: usize,
        m: usize,
        stack: &mut Vec<usize>,
        meter: &mut BudgetMeter,
        f: &mut F,
    ) -> Result<()> {
        if stack.len() == m + 1 {
            if *stack.last().unwrap() == base {
                f(stack);
            }
            return Ok(());
        }
        let v = *stack.last().unwrap();
        meter.spend(g.degree(v) as u64)?;
        for &w in g.neighbors(v) {
            stack.push(w);
            rec(g, base, m, stack, meter, f)?;
            stack.pop();
        }
        Ok(())
    }
    let mut stack = vec![x];
    rec(g, x, m, &mut stack, meter, f)
}

/// Brute-force `(N_m, t_m)` at `u` in the normalized finite mean:
/// `N_m = (1/|V|) sum_x sum_{closed paths at x} u^{cbc}` and
/// `t_m = (1/|V|) sum_x sum_{tailed closed paths at x} u^{bc}`.
pub fn brute_counts(g: &Graph, m: usize, u: Complex64, budget: Budget) -> Result<(Complex64, Complex64)> {
    check_oracle_size(g, m)?;
    let mut meter = BudgetMeter::new(budget);
    let mut n_acc = Complex64::new(0.0, 0.0);
    let mut t_acc = Complex64::new(0.0, 0.0);
    for x in 0..g.vertex_count() {
        let mut visit = |stack: &[usize]| {
            let p = ClosedPath::from_raw(stack.to_vec());
            let st = path_stats(&p);
            n_acc += cpow(u, st.cbc);
            if st.has_tail {
                t_acc += cpow(u, st.bc);
            }
        };
        fold_closed_paths(g, x, m, &mut meter, &mut visit)?;
    }
    let inv = 1.0 / g.vertex_count() as f64;
    Ok((n_acc * inv, t_acc * inv))
}

/// A rotation class of closed paths.
#[derive(Clone, Debug)]
pub struct CycleClass {
    /// Lexicographically least rotation, the canonical representative.
    pub representative: ClosedPath,
    /// Length `|C|`.
    pub length: usize,
    /// Length of the underlying primitive cycle.
    pub effective_length: usize,
    /// Cyclic bump count (rotation invariant).
    pub cbc: usize,
    /// Average multiplicity of the class in its context; `1/|V|` in the
    /// normalized finite mean.
    pub multiplicity: f64,
}

/// All rotation classes of closed paths of length exactly `m`, canonical
/// representatives only.
pub fn cycle_classes_of_length(g: &Graph, m: usize, budget: Budget) -> Result<Vec<CycleClass>> {
    check_oracle_size(g, m)?;
    let mut meter = BudgetMeter::new(budget);
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = Vec::new();
    let mu = 1.0 / g.vertex_count() as f64;
    for x in 0..g.vertex_count() {
        let mut visit = |stack: &[usize]| {
            let p = ClosedPath::from_raw(stack.to_vec());
            let canon = p.canonical_rotation();
            if seen.insert(canon.vertices().to_vec()) {
                let st = path_stats(&canon);
                out.push(CycleClass {
                    length: canon.len(),
                    effective_length: canon.effective_length(),
                    cbc: st.cbc,
                    multiplicity: mu,
                    representative: canon,
                });
            }
        };
        fold_closed_paths(g, x, m, &mut meter, &mut visit)?;
    }
    Ok(out)
}

/// One canonical representative per rotation class of primitive closed paths
/// of length at most `L`.
pub fn primitive_cycle_classes(g: &Graph, max_len: usize, budget: Budget) -> Result<Vec<CycleClass>> {
    let mut out = Vec::new();
    for m in 1..=max_len {
        let classes = cycle_classes_of_length(g, m, budget)?;
        out.extend(
            classes
                .into_iter()
                .filter(|c| c.effective_length == c.length),
        );
    }
    Ok(out)
}

/// Truncated Euler product over primitive cycle classes of length `<= max_len`:
/// product of `(1 - z^{|C|} u^{cbc(C)})^{-mu(C)}`.
///
/// Converges for `|z| < 1/alpha(u)`; the truncation error is `O(z^{L+1})`.
pub fn euler_product(
    g: &Graph,
    max_len: usize,
    z: Complex64,
    u: Complex64,
    budget: Budget,
) -> Result<Complex64> {
    let bound = alpha_bound(g.max_degree(), u);
    if z.norm() >= 1.0 / bound.alpha {
        return Err(ZetaError::Domain(format!(
            "|z| = {} is outside the convergence disc of radius {}",
            z.norm(),
            1.0 / bound.alpha
        )));
    }
    let mut log_acc = Complex64::new(0.0, 0.0);
    for class in primitive_cycle_classes(g, max_len, budget)? {
        let w = z.powu(class.length as u32) * cpow(u, class.cbc);
        // |w| < 1 in the convergence disc, so the principal branch is the
        // continued one
        log_acc -= class.multiplicity * (1.0 - w).ln();
    }
    Ok(log_acc.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{finite_family, FamilyKind};

    fn c4() -> Graph {
        finite_family(FamilyKind::Cycle, 4).unwrap()
    }

    fn k4() -> Graph {
        finite_family(FamilyKind::Complete, 4).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn closed_paths_on_c4() {
        let g = c4();
        let p2 = closed_paths(&g, 0, 2, Budget::default()).unwrap();
        let seqs: Vec<&[usize]> = p2.iter().map(|p| p.vertices()).collect();
        assert_eq!(seqs.len(), 2);
        assert!(seqs.contains(&[0, 1, 0].as_slice()));
        assert!(seqs.contains(&[0, 3, 0].as_slice()));
        // bipartite: no odd closed paths
        assert!(closed_paths(&g, 0, 3, Budget::default()).unwrap().is_empty());
    }

    #[test]
    fn closed_paths_on_k4_triangles() {
        let g = k4();
        let p3 = closed_paths(&g, 0, 3, Budget::default()).unwrap();
        assert_eq!(p3.len(), 6); // 3 triangles at vertex 0, 2 orientations
    }

    #[test]
    fn stats_of_backtrack_pair() {
        let g = c4();
        let p = ClosedPath::new(vec![0, 1, 0], &g).unwrap();
        let st = path_stats(&p);
        assert_eq!(st.bc, 1);
        assert_eq!(st.cbc, 2);
        // the single backtrack retraces itself, so the path is tailed; this
        // is what makes t_2(u) = u tau(Q+I) come out of the enumeration
        assert!(st.has_tail);
        assert!(st.primitive);
    }

    #[test]
    fn stats_of_geodesic_square() {
        let g = c4();
        let p = ClosedPath::new(vec![0, 1, 2, 3, 0], &g).unwrap();
        let st = path_stats(&p);
        assert_eq!(st.bc, 0);
        assert_eq!(st.cbc, 0);
        assert!(!st.has_tail);
        assert!(st.primitive);
    }

    #[test]
    fn square_of_short_path_not_primitive() {
        let g = c4();
        let p = ClosedPath::new(vec![0, 1, 0, 1, 0], &g).unwrap();
        let st = path_stats(&p);
        assert!(!st.primitive);
        assert_eq!(p.effective_length(), 2);
    }

    #[test]
    fn cbc_equals_bc_plus_tail_indicator() {
        // structural fact used throughout: the seam is the only cyclic-only
        // bump index, and it bumps exactly for tailed paths (m >= 3); for
        // m = 2 both cyclic indices bump
        for g in [c4(), k4()] {
            for m in 2..=8 {
                for x in 0..g.vertex_count() {
                    for p in closed_paths(&g, x, m, Budget::default()).unwrap() {
                        let st = path_stats(&p);
                        if m == 2 {
                            assert_eq!(st.cbc, 2);
                            assert_eq!(st.bc, 1);
                        } else {
                            assert_eq!(st.cbc, st.bc + usize::from(st.has_tail));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn brute_counts_against_hand_values() {
        let g = c4();
        let (n4, _) = brute_counts(&g, 4, c(0.0, 0.0), Budget::default()).unwrap();
        assert!((n4 - c(2.0, 0.0)).norm() < 1e-14);

        let k = k4();
        let u = c(0.37, 0.12);
        let (_, t2) = brute_counts(&k, 2, u, Budget::default()).unwrap();
        assert!((t2 - 3.0 * u).norm() < 1e-14); // t_2 = u tau(Q+I), tau(Q+I) = 3

        let (_, t1) = brute_counts(&k, 1, u, Budget::default()).unwrap();
        assert_eq!(t1, c(0.0, 0.0));

        let (n2, _) = brute_counts(&k, 2, u, Budget::default()).unwrap();
        assert!((n2 - 3.0 * u * u).norm() < 1e-14); // N_2 = 3u^2
    }

    #[test]
    fn path_count_equals_adjacency_power() {
        // sum over closed paths of u^cbc at u=1 counts all closed walks,
        // which is the trace of A^m
        let g = k4();
        for m in 1..=6 {
            let (n, _) = brute_counts(&g, m, c(1.0, 0.0), Budget::default()).unwrap();
            let am = g.adjacency_matrix().pow(m as u32);
            let tr: f64 = am.diagonal().iter().sum::<f64>() / 4.0;
            assert!((n.re - tr).abs() < 1e-9);
        }
    }

    #[test]
    fn primitive_classes_on_fixtures() {
        let g = c4();
        let classes = primitive_cycle_classes(&g, 4, Budget::default()).unwrap();
        let tailless4: Vec<_> = classes
            .iter()
            .filter(|c| c.length == 4 && c.cbc == 0)
            .collect();
        assert_eq!(tailless4.len(), 2); // the two orientations of the square

        let k = k4();
        let tri: Vec<_> = primitive_cycle_classes(&k, 3, Budget::default())
            .unwrap()
            .into_iter()
            .filter(|c| c.length == 3)
            .collect();
        assert_eq!(tri.len(), 8); // 4 triangles x 2 orientations

        assert!(primitive_cycle_classes(&k, 1, Budget::default())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn finite_nm_equals_class_sum() {
        // N_m = sum over rotation classes of mu ell u^cbc restricted to
        // length m, with mu = 1/|V|
        let u = c(0.4, 0.3);
        for g in [c4(), k4()] {
            for m in 2..=8 {
                let (nm, _) = brute_counts(&g, m, u, Budget::default()).unwrap();
                let classes = cycle_classes_of_length(&g, m, Budget::default()).unwrap();
                let sum: Complex64 = classes
                    .iter()
                    .map(|c| c.multiplicity * c.effective_length as f64 * cpow(u, c.cbc))
                    .sum();
                assert!(
                    (nm - sum).norm() < 1e-10,
                    "mismatch at m={m}: {nm} vs {sum}"
                );
            }
        }
    }

    #[test]
    fn euler_product_trivia() {
        let g = c4();
        let one = euler_product(&g, 8, c(0.0, 0.0), c(0.3, 0.0), Budget::default()).unwrap();
        assert_eq!(one, c(1.0, 0.0));
    }

    #[test]
    fn euler_product_matches_c4_closed_form() {
        // normalized Ihara zeta of C_4 is (1 - z^4)^{-1/2}
        let g = c4();
        let z = c(0.3, 0.0);
        let got = euler_product(&g, 12, z, c(0.0, 0.0), Budget::default()).unwrap();
        let expect = (1.0 - z.powu(4)).powf(-0.5);
        assert!((got - expect).norm() < 1e-6);
    }

    #[test]
    fn euler_product_outside_radius_rejected() {
        let g = c4();
        let err = euler_product(&g, 8, c(0.9, 0.0), c(0.0, 0.0), Budget::default()).unwrap_err();
        assert!(matches!(err, ZetaError::Domain(_)));
    }

    #[test]
    fn budget_is_enforced() {
        let g = k4();
        let err = closed_paths(&g, 0, 10, Budget::new(100)).unwrap_err();
        assert!(matches!(err, ZetaError::BudgetExceeded { .. }));
    }

    #[test]
    fn tail_stripping_terminates_in_tailless_path() {
        // removing the tail pair of a tailed path leaves a closed path of
        // length m-2; iterating must end in a tailless path or in a bare
        // backtrack pair (which is all tail)
        let g = k4();
        for x in 0..4 {
            for p in closed_paths(&g, x, 6, Budget::default()).unwrap() {
                let mut cur = p;
                while path_stats(&cur).has_tail && cur.len() > 2 {
                    let v = cur.vertices();
                    let inner: Vec<usize> = v[1..v.len() - 1].to_vec();
                    cur = ClosedPath::new(inner, &g).expect("stripped walk stays closed");
                }
                assert!(!path_stats(&cur).has_tail || cur.len() == 2);
            }
        }
    }
}
