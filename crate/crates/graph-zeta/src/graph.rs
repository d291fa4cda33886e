//! Finite simple undirected graphs: adjacency structure, balls and frontiers.
//!
//! A [`Graph`] is the universal substrate for everything else in the crate.
//! Construction validates simplicity (no loops, no repeated edges), symmetry
//! and connectedness; after that the structure is immutable and safe to share
//! across threads.

use std::collections::VecDeque;

use nalgebra::DMatrix;

use crate::error::{Result, ZetaError};

/// Finite simple connected undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    max_degree: usize,
}

impl Graph {
    /// Builds a graph from an edge list over vertices `0..n` where `n` is one
    /// past the largest endpoint mentioned.
    ///
    /// Rejects loops and repeated edges with [`ZetaError::Simplicity`] and
    /// disconnected inputs with [`ZetaError::Connectivity`].
    pub fn from_edges(edges: &[(usize, usize)]) -> Result<Self> {
        let n = edges
            .iter()
            .map(|&(u, v)| u.max(v) + 1)
            .max()
            .ok_or_else(|| ZetaError::BadParameter("empty edge list".into()))?;
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u == v {
                return Err(ZetaError::Simplicity(format!("loop at vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (v, nbrs) in adj.iter_mut().enumerate() {
            nbrs.sort_unstable();
            if nbrs.windows(2).any(|w| w[0] == w[1]) {
                return Err(ZetaError::Simplicity(format!(
                    "repeated edge at vertex {v}"
                )));
            }
        }
        let g = Self::from_adjacency_unchecked(adj);
        g.check_connected()?;
        Ok(g)
    }

    /// Internal constructor for builders that produce adjacency lists known
    /// to be simple and symmetric. Connectivity is still the caller's duty.
    pub(crate) fn from_adjacency_unchecked(adj: Vec<Vec<usize>>) -> Self {
        let max_degree = adj.iter().map(Vec::len).max().unwrap_or(0);
        Self { adj, max_degree }
    }

    pub(crate) fn check_connected(&self) -> Result<()> {
        let n = self.vertex_count();
        if n == 0 {
            return Err(ZetaError::Connectivity("no vertices".into()));
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut found = 1usize;
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    found += 1;
                    queue.push_back(w);
                }
            }
        }
        if found != n {
            return Err(ZetaError::Connectivity(format!(
                "{found} of {n} vertices reachable from vertex 0"
            )));
        }
        Ok(())
    }

    /// Parses the edge-list text format: one `u v` pair per line, 0-based
    /// labels, `#` starts a comment. Labels need not be dense; they are
    /// mapped to `0..n` in sorted order.
    pub fn from_edge_list_text(text: &str) -> Result<Self> {
        let mut raw: Vec<(u64, u64)> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<u64> {
                tok.ok_or_else(|| {
                    ZetaError::Parse(format!("line {}: expected `u v`", lineno + 1))
                })?
                .parse()
                .map_err(|_| ZetaError::Parse(format!("line {}: bad vertex label", lineno + 1)))
            };
            let u = parse(it.next())?;
            let v = parse(it.next())?;
            if it.next().is_some() {
                return Err(ZetaError::Parse(format!(
                    "line {}: trailing tokens",
                    lineno + 1
                )));
            }
            raw.push((u, v));
        }
        let mut labels: Vec<u64> = raw.iter().flat_map(|&(u, v)| [u, v]).collect();
        labels.sort_unstable();
        labels.dedup();
        let index = |l: u64| labels.binary_search(&l).expect("label present");
        let edges: Vec<(usize, usize)> = raw.iter().map(|&(u, v)| (index(u), index(v))).collect();
        Self::from_edges(&edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Maximum degree `d`.
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn is_regular(&self) -> bool {
        self.adj.iter().all(|nbrs| nbrs.len() == self.max_degree)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Combinatorial distances from `v` (BFS); unreachable is `usize::MAX`
    /// (cannot happen for connected graphs).
    pub fn distances_from(&self, v: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertex_count()];
        let mut queue = VecDeque::from([v]);
        dist[v] = 0;
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// The ball `B_r(v)` of combinatorial radius `r` around `v`.
    pub fn ball(&self, v: usize, r: usize) -> Result<VertexSet> {
        if v >= self.vertex_count() {
            return Err(ZetaError::BadParameter(format!(
                "vertex {v} out of range 0..{}",
                self.vertex_count()
            )));
        }
        let dist = self.distances_from(v);
        Ok(VertexSet::from_unsorted(
            (0..self.vertex_count()).filter(|&w| dist[w] <= r).collect(),
        ))
    }

    /// The frontier of `K`: vertices of `K` adjacent to some vertex outside
    /// `K`.
    pub fn frontier(&self, k: &VertexSet) -> VertexSet {
        let inside = k.membership_mask(self.vertex_count());
        VertexSet::from_unsorted(
            k.iter()
                .filter(|&v| self.adj[v].iter().any(|&w| !inside[w]))
                .collect(),
        )
    }

    /// Dense adjacency matrix as `f64` (for spectra of small graphs).
    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        let n = self.vertex_count();
        let mut a = DMatrix::zeros(n, n);
        for (v, nbrs) in self.adj.iter().enumerate() {
            for &w in nbrs {
                a[(v, w)] = 1.0;
            }
        }
        a
    }

    /// Eigenvalues of the adjacency operator, ascending.
    pub fn adjacency_spectrum(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .adjacency_matrix()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev
    }
}

/// Sorted duplicate-free set of vertex indices.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn from_unsorted(mut v: Vec<usize>) -> Self {
        v.sort_unstable();
        v.dedup();
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    fn membership_mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for v in self.iter() {
            if v < n {
                mask[v] = true;
            }
        }
        mask
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        Self::from_unsorted(iter.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{finite_family, FamilyKind};

    fn c4() -> Graph {
        Graph::from_edges(&[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    fn k4() -> Graph {
        Graph::from_edges(&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn c4_all_degrees_two() {
        let g = c4();
        assert_eq!(g.vertex_count(), 4);
        assert!((0..4).all(|v| g.degree(v) == 2));
        assert_eq!(g.max_degree(), 2);
    }

    #[test]
    fn k4_degrees_three() {
        let g = k4();
        assert!((0..4).all(|v| g.degree(v) == 3));
        assert_eq!(g.max_degree(), 3);
    }

    #[test]
    fn multi_edge_rejected() {
        let err = Graph::from_edges(&[(0, 1), (0, 1)]).unwrap_err();
        assert!(matches!(err, ZetaError::Simplicity(_)));
    }

    #[test]
    fn loop_rejected() {
        let err = Graph::from_edges(&[(0, 0), (0, 1)]).unwrap_err();
        assert!(matches!(err, ZetaError::Simplicity(_)));
    }

    #[test]
    fn disconnected_rejected() {
        let err = Graph::from_edges(&[(0, 1), (2, 3)]).unwrap_err();
        assert!(matches!(err, ZetaError::Connectivity(_)));
    }

    #[test]
    fn balls_on_fixtures() {
        let g = c4();
        assert_eq!(g.ball(0, 0).unwrap().as_slice(), &[0]);
        assert_eq!(g.ball(0, 1).unwrap().as_slice(), &[0, 1, 3]);
        let k = k4();
        assert_eq!(k.ball(2, 1).unwrap().len(), 4);
    }

    #[test]
    fn frontier_cases() {
        let g = c4();
        let all: VertexSet = (0..4).collect();
        assert!(g.frontier(&all).is_empty());
        let half: VertexSet = [0, 1].into_iter().collect();
        assert_eq!(g.frontier(&half).as_slice(), &[0, 1]);

        // path 0-1-2-3-4, K = {0,1,2}: only 2 touches the complement
        let p = finite_family(FamilyKind::Path, 5).unwrap();
        let k: VertexSet = [0, 1, 2].into_iter().collect();
        assert_eq!(p.frontier(&k).as_slice(), &[2]);
    }

    #[test]
    fn ball_radius_one_size_is_degree_plus_one() {
        for g in [c4(), k4(), finite_family(FamilyKind::Petersen, 10).unwrap()] {
            for v in 0..g.vertex_count() {
                assert_eq!(g.ball(v, 1).unwrap().len(), g.degree(v) + 1);
            }
        }
    }

    #[test]
    fn edge_list_text_roundtrip() {
        let text = "# a square\n0 1\n1 2\n2 3\n3 0\n";
        let g = Graph::from_edge_list_text(text).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 4);
        // sparse labels are compacted
        let g2 = Graph::from_edge_list_text("10 20\n20 30\n30 10\n").unwrap();
        assert_eq!(g2.vertex_count(), 3);
    }

    #[test]
    fn adjacency_norm_bounded_by_max_degree() {
        for g in [c4(), k4(), finite_family(FamilyKind::Petersen, 10).unwrap()] {
            let top = g
                .adjacency_spectrum()
                .iter()
                .fold(0.0f64, |m, &x| m.max(x.abs()));
            assert!(top <= g.max_degree() as f64 + 1e-12);
        }
    }
}
