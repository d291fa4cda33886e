//! Fixture constructors: finite graph families, periodic lattices realized on
//! finite windows, and the Sierpinski gasket substitution scheme with its
//! amenable exhaustion.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cycles::ClosedPath;
use crate::error::{Result, ZetaError};
use crate::graph::{Graph, VertexSet};
use crate::numerics::cpow;
use crate::operators::{ComputeWindow, PeriodicContext, SelfSimilarContext, TraceContext, TraceNorm};

/// Named finite families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    Cycle,
    Complete,
    Petersen,
    Path,
}

impl FamilyKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cycle" => Ok(Self::Cycle),
            "complete" => Ok(Self::Complete),
            "petersen" => Ok(Self::Petersen),
            "path" => Ok(Self::Path),
            other => Err(ZetaError::BadParameter(format!(
                "unknown family `{other}` (expected cycle, complete, petersen, path)"
            ))),
        }
    }
}

/// Builds a named finite graph. `n` is the vertex count; the Petersen graph
/// requires `n = 10`.
pub fn finite_family(kind: FamilyKind, n: usize) -> Result<Graph> {
    match kind {
        FamilyKind::Cycle => {
            if n < 3 {
                return Err(ZetaError::BadParameter("cycle needs n >= 3".into()));
            }
            Graph::from_edges(&(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
        }
        FamilyKind::Complete => {
            if n < 2 {
                return Err(ZetaError::BadParameter("complete graph needs n >= 2".into()));
            }
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    edges.push((i, j));
                }
            }
            Graph::from_edges(&edges)
        }
        FamilyKind::Petersen => {
            if n != 10 {
                return Err(ZetaError::BadParameter("the Petersen graph has n = 10".into()));
            }
            let mut edges = Vec::new();
            for i in 0..5 {
                edges.push((i, (i + 1) % 5)); // outer pentagon
                edges.push((5 + i, 5 + (i + 2) % 5)); // inner pentagram
                edges.push((i, 5 + i)); // spokes
            }
            Graph::from_edges(&edges)
        }
        FamilyKind::Path => {
            if n < 2 {
                return Err(ZetaError::BadParameter("path needs n >= 2".into()));
            }
            Graph::from_edges(&(0..n - 1).map(|i| (i, i + 1)).collect::<Vec<_>>())
        }
    }
}

// ---------------------------------------------------------------------------
// Periodic lattices
// ---------------------------------------------------------------------------

/// A periodic graph: finitely many vertex labels per cell of `Z^rank`, edges
/// given by label pairs with integer translation offsets.
///
/// JSON form: `{"domain": ["a", ...], "edges": [["a", "b", [1, 0]], ...],
/// "rank": 2}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PeriodicSpec {
    pub domain: Vec<String>,
    pub edges: Vec<(String, String, Vec<i64>)>,
    pub rank: usize,
}

impl PeriodicSpec {
    /// The integer lattice: one vertex per cell, edges to both neighbors.
    pub fn z_lattice() -> Self {
        Self {
            domain: vec!["v".into()],
            edges: vec![("v".into(), "v".into(), vec![1])],
            rank: 1,
        }
    }

    /// The ladder `Z x {0,1}`: two rails plus rungs.
    pub fn ladder() -> Self {
        Self {
            domain: vec!["a".into(), "b".into()],
            edges: vec![
                ("a".into(), "a".into(), vec![1]),
                ("b".into(), "b".into(), vec![1]),
                ("a".into(), "b".into(), vec![0]),
            ],
            rank: 1,
        }
    }

    /// The square lattice `Z^2`.
    pub fn z2_lattice() -> Self {
        Self {
            domain: vec!["v".into()],
            edges: vec![
                ("v".into(), "v".into(), vec![1, 0]),
                ("v".into(), "v".into(), vec![0, 1]),
            ],
            rank: 2,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: PeriodicSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    fn label_index(&self, label: &str) -> Result<usize> {
        self.domain
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| ZetaError::BadParameter(format!("unknown domain label `{label}`")))
    }

    /// Edges as (label index, label index, offset).
    pub(crate) fn indexed_edges(&self) -> Result<Vec<(usize, usize, Vec<i64>)>> {
        self.edges
            .iter()
            .map(|(a, b, o)| Ok((self.label_index(a)?, self.label_index(b)?, o.clone())))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.rank == 0 || self.rank > 2 {
            return Err(ZetaError::BadParameter(
                "only rank 1 and 2 lattice actions are supported".into(),
            ));
        }
        if self.domain.is_empty() {
            return Err(ZetaError::BadParameter("empty fundamental domain".into()));
        }
        {
            let mut sorted = self.domain.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != self.domain.len() {
                return Err(ZetaError::BadParameter("repeated domain labels".into()));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for (i, j, o) in self.indexed_edges()? {
            if o.len() != self.rank {
                return Err(ZetaError::BadParameter(format!(
                    "offset {o:?} does not match rank {}",
                    self.rank
                )));
            }
            if i == j && o.iter().all(|&x| x == 0) {
                return Err(ZetaError::Simplicity(format!(
                    "loop at label `{}`",
                    self.domain[i]
                )));
            }
            // canonical key identifying {(c,i),(c+o,j)} with {(c,j),(c-o,i)}
            let neg: Vec<i64> = o.iter().map(|&x| -x).collect();
            let key = std::cmp::min((i, j, o.clone()), (j, i, neg));
            if !seen.insert(key) {
                return Err(ZetaError::Simplicity(format!(
                    "repeated edge between `{}` and `{}`",
                    self.domain[i], self.domain[j]
                )));
            }
        }
        Ok(())
    }

    /// True lattice degree of each domain label.
    pub fn degrees(&self) -> Result<Vec<usize>> {
        let mut deg = vec![0usize; self.domain.len()];
        for (i, j, _) in self.indexed_edges()? {
            deg[i] += 1;
            deg[j] += 1;
        }
        Ok(deg)
    }

    /// Floquet fiber matrix `A(theta)` over the torus, a Hermitian
    /// `|F| x |F|` matrix with entries `sum_offsets e^{i theta . o}`.
    pub fn fiber_matrix(&self, theta: &[f64]) -> Result<nalgebra::DMatrix<Complex64>> {
        if theta.len() != self.rank {
            return Err(ZetaError::BadParameter(
                "fiber parameter dimension must equal the action rank".into(),
            ));
        }
        let f = self.domain.len();
        let mut m = nalgebra::DMatrix::<Complex64>::zeros(f, f);
        for (i, j, o) in self.indexed_edges()? {
            let phase: f64 = o.iter().zip(theta).map(|(&k, &t)| k as f64 * t).sum();
            m[(i, j)] += Complex64::from_polar(1.0, phase);
            m[(j, i)] += Complex64::from_polar(1.0, -phase);
        }
        Ok(m)
    }
}

/// Realizes a periodic lattice on the ball of the given radius around one
/// copy of the fundamental domain.
///
/// Diagonal entries of any operator of propagation `<= radius - 1` over the
/// fundamental domain are then exact values of the infinite-lattice operator.
pub fn periodic_lattice(spec: &PeriodicSpec, window_radius: usize) -> Result<TraceContext> {
    spec.validate()?;
    if window_radius < 1 {
        return Err(ZetaError::BadParameter("window radius must be >= 1".into()));
    }
    let edges = spec.indexed_edges()?;
    let label_degrees = spec.degrees()?;
    let f = spec.domain.len();

    let neighbors = |cell: &[i64], label: usize| -> Vec<(Vec<i64>, usize)> {
        let mut out = Vec::new();
        for (i, j, o) in &edges {
            if *i == label {
                let c: Vec<i64> = cell.iter().zip(o).map(|(&a, &b)| a + b).collect();
                out.push((c, *j));
            }
            if *j == label {
                let c: Vec<i64> = cell.iter().zip(o).map(|(&a, &b)| a - b).collect();
                out.push((c, *i));
            }
        }
        out
    };

    // BFS ball around the fundamental domain
    let zero = vec![0i64; spec.rank];
    let mut index: HashMap<(Vec<i64>, usize), usize> = HashMap::new();
    let mut coords: Vec<(Vec<i64>, usize)> = Vec::new();
    let mut frontier: Vec<(Vec<i64>, usize)> = Vec::new();
    for l in 0..f {
        index.insert((zero.clone(), l), l);
        coords.push((zero.clone(), l));
        frontier.push((zero.clone(), l));
    }
    for _ in 0..window_radius {
        let mut next = Vec::new();
        for (cell, label) in frontier {
            for (c, l) in neighbors(&cell, label) {
                if let std::collections::hash_map::Entry::Vacant(e) =
                    index.entry((c.clone(), l))
                {
                    e.insert(coords.len());
                    coords.push((c.clone(), l));
                    next.push((c, l));
                }
            }
        }
        frontier = next;
    }

    if coords.iter().map(|(_, l)| *l).collect::<std::collections::HashSet<_>>().len() != f {
        return Err(ZetaError::Connectivity(
            "some domain labels are unreachable from cell 0".into(),
        ));
    }

    // induced adjacency on the window
    let n = coords.len();
    let mut adj = vec![Vec::new(); n];
    for (v, (cell, label)) in coords.iter().enumerate() {
        for (c, l) in neighbors(cell, *label) {
            if let Some(&w) = index.get(&(c, l)) {
                adj[v].push(w);
            }
        }
    }
    for (v, nbrs) in adj.iter_mut().enumerate() {
        nbrs.sort_unstable();
        let before = nbrs.len();
        nbrs.dedup();
        if nbrs.len() != before {
            return Err(ZetaError::Simplicity(format!(
                "duplicate lattice edge at window vertex {v}"
            )));
        }
    }
    let window = Graph::from_adjacency_unchecked(adj);
    window.check_connected()?;

    let degrees: Vec<usize> = coords.iter().map(|(_, l)| label_degrees[*l]).collect();
    Ok(TraceContext::Periodic(PeriodicContext {
        spec: spec.clone(),
        window,
        window_radius,
        domain: (0..f).collect(),
        degrees,
        coords,
    }))
}

// ---------------------------------------------------------------------------
// The Sierpinski gasket exhaustion
// ---------------------------------------------------------------------------

/// Hard cap on user-facing exhaustion levels (level 9 has 9843 vertices).
pub const MAX_GASKET_LEVEL: usize = 9;
/// Vertex budget for internal realizations.
const MAX_REALIZATION_VERTICES: usize = 200_000;

/// One exhaustion level: the graph `K_n`, its three outer corners, and the
/// three embeddings of `K_{n-1}` whose images cover it.
#[derive(Clone, Debug)]
pub struct GasketLevel {
    pub graph: Graph,
    pub corners: [usize; 3],
    /// `copy_maps[i][v]` is the image in this level of vertex `v` of the
    /// previous level under the `i`-th local isomorphism; empty at level 1.
    pub copy_maps: Vec<Vec<usize>>,
}

/// A substitution scheme describing a self-similar graph by an increasing
/// family `K_1 subset K_2 subset ...` where `K_{n+1}` is covered by copies of
/// `K_n` overlapping only in corner vertices.
///
/// The only scheme shipped is the graph Sierpinski gasket: three copies per
/// level glued pairwise at corners, copy count `|G(n,n+1)| = 3`, invariant
/// frontier the three corners. Vertex identifiers are stable across levels:
/// `K_n` occupies ids `0..|K_n|` of every later level, so exhaustion nesting
/// is literal.
#[derive(Clone, Debug)]
pub struct ExhaustionScheme {
    _private: (),
}

impl ExhaustionScheme {
    pub fn gasket() -> Self {
        Self { _private: () }
    }

    /// Copies per substitution step, `|G(n, n+1)|`.
    pub fn copy_count(&self) -> usize {
        3
    }

    pub fn degree_bound(&self) -> usize {
        4
    }

    /// `|K_n| = (3^n + 3)/2`.
    pub fn level_vertex_count(&self, level: usize) -> usize {
        (3usize.pow(level as u32) + 3) / 2
    }

    /// `|E(K_n)| = 3^n`.
    pub fn level_edge_count(&self, level: usize) -> usize {
        3usize.pow(level as u32)
    }

    /// Builds levels `1..=n`.
    pub fn build_levels(&self, n: usize) -> Result<Vec<GasketLevel>> {
        if n == 0 {
            return Err(ZetaError::BadParameter("levels start at 1".into()));
        }
        if self.level_vertex_count(n) > MAX_REALIZATION_VERTICES {
            return Err(ZetaError::BudgetExceeded {
                needed: self.level_vertex_count(n) as u64,
                limit: MAX_REALIZATION_VERTICES as u64,
            });
        }
        let triangle = Graph::from_edges(&[(0, 1), (1, 2), (2, 0)])?;
        let mut levels = vec![GasketLevel {
            graph: triangle,
            corners: [0, 1, 2],
            copy_maps: Vec::new(),
        }];
        for _ in 1..n {
            let prev = levels.last().unwrap();
            levels.push(next_level(prev)?);
        }
        Ok(levels)
    }

    pub fn level_graph(&self, level: usize) -> Result<GasketLevel> {
        Ok(self.build_levels(level)?.pop().unwrap())
    }

    /// The G-invariant frontier of `K_n`: every vertex of `K_n` arising as a
    /// pullback of the frontier of some copy of `K_n`. For the gasket this
    /// is the three corners; computed from the copy structure, not assumed.
    pub fn invariant_frontier(&self, level: usize) -> Result<VertexSet> {
        let levels = self.build_levels(level + 1)?;
        let here = &levels[level - 1];
        let above = &levels[level];
        let n_here = here.graph.vertex_count();
        let mut out = Vec::new();
        for map in &above.copy_maps {
            // frontier of this copy inside the ambient graph: vertices with
            // realized neighbors outside the copy, plus outer corners of the
            // next level that keep attaching at later levels (all but the
            // corner-0 lineage)
            let in_copy: std::collections::HashSet<usize> = map.iter().copied().collect();
            for v in 0..n_here {
                let img = map[v];
                let touches_outside = above
                    .graph
                    .neighbors(img)
                    .iter()
                    .any(|w| !in_copy.contains(w));
                let eventually_attaches = img == above.corners[1] || img == above.corners[2];
                if touches_outside || eventually_attaches {
                    out.push(v);
                }
            }
        }
        Ok(VertexSet::from_unsorted(out))
    }

    /// `|F_G(K_n)| / |K_n|`, the amenability ratio.
    pub fn amenability_ratio(&self, level: usize) -> Result<f64> {
        Ok(self.invariant_frontier(level)?.len() as f64 / self.level_vertex_count(level) as f64)
    }

    /// Realizes a window around `K_level` large enough that diagonal entries
    /// of operators with the given propagation are exact over `K_level`.
    pub(crate) fn realize_window(&self, level: usize, propagation: usize) -> Result<ComputeWindow> {
        if level == 0 {
            return Err(ZetaError::BadParameter("levels start at 1".into()));
        }
        let support_len = self.level_vertex_count(level);
        let mut n = level;
        loop {
            if self.level_vertex_count(n) > MAX_REALIZATION_VERTICES {
                return Err(ZetaError::BudgetExceeded {
                    needed: self.level_vertex_count(n) as u64,
                    limit: MAX_REALIZATION_VERTICES as u64,
                });
            }
            let levels = self.build_levels(n)?;
            let top = &levels[n - 1];
            // vertices that acquire new neighbors at the next level: the two
            // attaching corners (the corner-0 lineage never attaches)
            let defects = [top.corners[1], top.corners[2]];
            let margin = if n == level && propagation == 0 {
                0
            } else {
                let dist = multi_source_distance(&top.graph, &defects);
                let min_dist = (0..support_len)
                    .map(|v| dist[v])
                    .min()
                    .unwrap_or(usize::MAX);
                min_dist.saturating_sub(1)
            };
            if margin >= propagation {
                let mut degrees: Vec<usize> =
                    (0..top.graph.vertex_count()).map(|v| top.graph.degree(v)).collect();
                // the attaching corners have ambient degree 4
                degrees[top.corners[1]] = 4;
                degrees[top.corners[2]] = 4;
                return Ok(ComputeWindow {
                    graph: top.graph.clone(),
                    degrees,
                    support: Arc::new((0..support_len).collect()),
                    norm: TraceNorm::Mean,
                    margin,
                });
            }
            n += 1;
        }
    }

    /// `s(C)`: the least level `s` such that the given vertex support (in
    /// the stable vertex ids) lies inside some copy of `K_s` of the realized
    /// level.
    pub fn size_of_cycle(&self, support: &[usize], realized_level: usize) -> Result<usize> {
        let max_id = support.iter().copied().max().ok_or_else(|| {
            ZetaError::BadParameter("empty cycle support".into())
        })?;
        if max_id >= self.level_vertex_count(realized_level) {
            return Err(ZetaError::CycleTooLarge);
        }
        let levels = self.build_levels(realized_level)?;
        for s in 1..=realized_level {
            for copy in copies_of_level(&levels, s, realized_level) {
                if support.iter().all(|&v| copy.binary_search(&v).is_ok()) {
                    return Ok(s);
                }
            }
        }
        Err(ZetaError::CycleTooLarge)
    }

    /// Average multiplicity `mu(C) = lim |G(s(C), n)|/|K_n| = 2 / 3^{s(C)}`.
    pub fn average_multiplicity(&self, support: &[usize], realized_level: usize) -> Result<f64> {
        let s = self.size_of_cycle(support, realized_level)?;
        Ok(self.multiplicity_for_size(s))
    }

    /// Closed-form limit of `3^{n-s} / |K_n|`.
    pub fn multiplicity_for_size(&self, s: usize) -> f64 {
        2.0 / 3f64.powi(s as i32)
    }

    /// All G-equivalence classes of cycles (rotation classes of closed walks)
    /// of length `m` with `s(C) = s`, enumerated in the canonical `K_s`.
    ///
    /// A class with size `s` has a unique canonical representative in `K_s`
    /// whose support is not contained in any of the three child copies.
    pub fn cycle_classes_at_size(&self, m: usize, s: usize) -> Result<Vec<GasketClass>> {
        let levels = self.build_levels(s)?;
        let top = &levels[s - 1];
        let children: Vec<Vec<usize>> = if s >= 2 {
            top.copy_maps
                .iter()
                .map(|m| {
                    let mut v = m.clone();
                    v.sort_unstable();
                    v
                })
                .collect()
        } else {
            Vec::new()
        };
        let g = &top.graph;
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        let mut stack = Vec::with_capacity(m + 1);
        for x in 0..g.vertex_count() {
            stack.clear();
            stack.push(x);
            enumerate_closed(g, x, m, &mut stack, &mut |walk: &[usize]| {
                let p = ClosedPath::from_raw(walk.to_vec());
                let canon = p.canonical_rotation();
                if !seen.insert(canon.vertices().to_vec()) {
                    return;
                }
                let mut support: Vec<usize> = canon.vertices().to_vec();
                support.sort_unstable();
                support.dedup();
                let spans = children.is_empty()
                    || !children
                        .iter()
                        .any(|c| support.iter().all(|v| c.binary_search(v).is_ok()));
                if spans {
                    let st = crate::cycles::path_stats(&canon);
                    out.push(GasketClass {
                        representative: canon,
                        size: s,
                        effective_length: st.primitive as usize * m
                            + (!st.primitive) as usize * p_eff(&p),
                        cbc: st.cbc,
                        multiplicity: self.multiplicity_for_size(s),
                    });
                }
            });
        }
        Ok(out)
    }

    /// `sum over classes of mu(C) ell(C) u^{cbc(C)}` for cycles of length
    /// `m`, summed over all sizes.
    ///
    /// Levels `1..=s_hi` are enumerated directly. Beyond that the corner
    /// neighborhoods are self-similar, so the per-size class sum `W(s)` is
    /// constant and the geometric tail `sum_{s > s_hi} 2 W 3^{-s}` is added
    /// in closed form; stabilization is verified by comparing `W(s_hi - 1)`
    /// and `W(s_hi)`.
    pub fn cycle_class_sum(&self, m: usize, u: Complex64, s_hi: usize) -> Result<Complex64> {
        if s_hi < 3 {
            return Err(ZetaError::BadParameter("need s_hi >= 3".into()));
        }
        let mut total = Complex64::new(0.0, 0.0);
        let mut w_prev = Complex64::new(0.0, 0.0);
        let mut w_last = Complex64::new(0.0, 0.0);
        for s in 1..=s_hi {
            let classes = self.cycle_classes_at_size(m, s)?;
            let w: Complex64 = classes
                .iter()
                .map(|c| c.effective_length as f64 * cpow(u, c.cbc))
                .sum();
            total += w * self.multiplicity_for_size(s);
            w_prev = w_last;
            w_last = w;
        }
        let scale = 1.0f64.max(w_last.norm());
        if (w_last - w_prev).norm() > 1e-9 * scale {
            return Err(ZetaError::Inconsistent(format!(
                "per-size class sums not yet stable at s = {s_hi}: {w_prev} vs {w_last}"
            )));
        }
        // tail: sum_{s > s_hi} 2 * 3^{-s} * W = W * 3^{-s_hi}
        total += w_last * 3f64.powi(-(s_hi as i32));
        Ok(total)
    }
}

fn p_eff(p: &ClosedPath) -> usize {
    p.effective_length()
}

/// A G-equivalence class of closed walks on the gasket.
#[derive(Clone, Debug)]
pub struct GasketClass {
    pub representative: ClosedPath,
    /// `s(C)`: least level whose copies contain the class.
    pub size: usize,
    pub effective_length: usize,
    pub cbc: usize,
    pub multiplicity: f64,
}

fn enumerate_closed<F>(g: &Graph, base: usize, m: usize, stack: &mut Vec<usize>, f: &mut F)
where
    F: FnMut(&[usize]),
{
    if stack.len() == m + 1 {
        if *stack.last().unwrap() == base {
            f(stack);
        }
        return;
    }
    let v = *stack.last().unwrap();
    for &w in g.neighbors(v) {
        stack.push(w);
        enumerate_closed(g, base, m, stack, f);
        stack.pop();
    }
}

/// Vertex id lists (sorted) of all copies of `K_s` inside `K_n`.
fn copies_of_level(levels: &[GasketLevel], s: usize, n: usize) -> Vec<Vec<usize>> {
    let mut copies: Vec<Vec<usize>> = vec![(0..levels[s - 1].graph.vertex_count()).collect()];
    for lvl in s..n {
        let maps = &levels[lvl].copy_maps;
        let mut next = Vec::with_capacity(copies.len() * 3);
        for copy in &copies {
            for map in maps {
                let mut img: Vec<usize> = copy.iter().map(|&v| map[v]).collect();
                img.sort_unstable();
                next.push(img);
            }
        }
        copies = next;
    }
    for c in &mut copies {
        c.sort_unstable();
    }
    copies
}

fn multi_source_distance(g: &Graph, sources: &[usize]) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.vertex_count()];
    let mut queue = std::collections::VecDeque::new();
    for &s in sources {
        dist[s] = 0;
        queue.push_back(s);
    }
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Builds level `n+1` from level `n`: three copies glued pairwise at
/// corners. Copy 0 is the identity on existing ids, so `K_n` is literally a
/// subgraph of `K_{n+1}`.
fn next_level(prev: &GasketLevel) -> Result<GasketLevel> {
    let n = prev.graph.vertex_count();
    let [c0, c1, c2] = prev.corners;
    let mut total = n;
    let mut fresh = || {
        let id = total;
        total += 1;
        id
    };

    // copy 0: identity
    let map0: Vec<usize> = (0..n).collect();
    // shared gluing vertex of copies 1 and 2
    let mut map1 = vec![usize::MAX; n];
    let mut map2 = vec![usize::MAX; n];
    map1[c0] = c1; // gamma_1(c0) = gamma_0(c1)
    map2[c0] = c2; // gamma_2(c0) = gamma_0(c2)
    let m12 = fresh();
    map1[c2] = m12; // gamma_1(c2) = gamma_2(c1)
    map2[c1] = m12;
    for v in 0..n {
        if map1[v] == usize::MAX {
            map1[v] = fresh();
        }
    }
    for v in 0..n {
        if map2[v] == usize::MAX {
            map2[v] = fresh();
        }
    }

    let mut adj = vec![Vec::new(); total];
    let mut push_edges = |map: &Vec<usize>| {
        for v in 0..n {
            for &w in prev.graph.neighbors(v) {
                if v < w {
                    adj[map[v]].push(map[w]);
                    adj[map[w]].push(map[v]);
                }
            }
        }
    };
    push_edges(&map0);
    push_edges(&map1);
    push_edges(&map2);
    for nbrs in adj.iter_mut() {
        nbrs.sort_unstable();
        nbrs.dedup();
    }
    let graph = Graph::from_adjacency_unchecked(adj);
    graph.check_connected()?;
    Ok(GasketLevel {
        graph,
        corners: [c0, map1[c1], map2[c2]],
        copy_maps: vec![map0, map1, map2],
    })
}

/// The gasket truncated at an exhaustion level, as a trace context.
pub fn gasket_exhaustion(level: usize, tolerance: f64) -> Result<TraceContext> {
    if level == 0 || level > MAX_GASKET_LEVEL {
        return Err(ZetaError::BadParameter(format!(
            "gasket level must be in 1..={MAX_GASKET_LEVEL}"
        )));
    }
    let scheme = ExhaustionScheme::gasket();
    // fail early if the level itself is over budget
    scheme.build_levels(level)?;
    Ok(TraceContext::SelfSimilar(SelfSimilarContext {
        scheme,
        level,
        tolerance,
    }))
}
