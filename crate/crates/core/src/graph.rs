//! Labelled simple graphs on vertices `0..n`.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Undirected simple graph. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    /// Sorted, each pair stored as `(u, v)` with `u < v`.
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from unordered pairs. Reversed and repeated pairs
    /// collapse to one edge.
    pub fn from_edges<I>(n: usize, pairs: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut edges = Vec::new();
        for (u, v) in pairs {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            edges.push((u.min(v), u.max(v)));
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(Self::from_canonical(n, edges))
    }

    /// `edges` must already be sorted, deduplicated, `u < v < n`.
    fn from_canonical(n: usize, edges: Vec<(usize, usize)>) -> Graph {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    pub fn empty(n: usize) -> Graph {
        Graph::from_canonical(n, Vec::new())
    }

    pub fn complete(n: usize) -> Graph {
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Graph::from_canonical(n, edges)
    }

    pub fn path(n: usize) -> Graph {
        Graph::from_canonical(n, (1..n).map(|v| (v - 1, v)).collect())
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        edges.push((0, n - 1));
        edges.sort_unstable();
        Graph::from_canonical(n, edges)
    }

    /// Star `K_{1,leaves}` centred at vertex 0.
    pub fn star(leaves: usize) -> Graph {
        Graph::from_canonical(leaves + 1, (1..=leaves).map(|v| (0, v)).collect())
    }

    /// Disjoint union, relabelling `other` to `self.n()..`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(u, v)| (u + shift, v + shift)));
        edges.sort_unstable();
        Graph::from_canonical(self.n + other.n, edges)
    }

    /// Graph with one extra edge. Returns `None` if the edge is already present.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Option<Graph>> {
        if self.has_edge(u, v) {
            return Ok(None);
        }
        let mut pairs = self.edges.clone();
        pairs.push((u, v));
        Graph::from_edges(self.n, pairs).map(Some)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Connected components, each a sorted vertex list, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// True iff the graph has no cycle.
    pub fn is_forest(&self) -> bool {
        self.edges.len() + self.components().len() == self.n
    }

    /// Induced subgraph on `vertices` (sorted, distinct), relabelled to
    /// `0..vertices.len()` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut edges = Vec::new();
        for &(u, v) in &self.edges {
            if index[u] != usize::MAX && index[v] != usize::MAX {
                let (a, b) = (index[u], index[v]);
                edges.push((a.min(b), a.max(b)));
            }
        }
        edges.sort_unstable();
        Graph::from_canonical(vertices.len(), edges)
    }

    pub fn is_independent(&self, s: &VertexSet) -> bool {
        debug_assert!(s.universe() <= self.n);
        let mut inside = vec![false; self.n];
        for &v in s.as_slice() {
            inside[v] = true;
        }
        s.as_slice()
            .iter()
            .all(|&v| self.adj[v].iter().all(|&w| !inside[w]))
    }

    /// Number of vertices outside `s` with no neighbour in `s`.
    pub fn unconnected_count(&self, s: &VertexSet) -> Result<usize> {
        if !self.is_independent(s) {
            return Err(Error::NotIndependent);
        }
        Ok(self.unconnected_count_unchecked(s.as_slice()))
    }

    pub(crate) fn unconnected_count_unchecked(&self, s: &[usize]) -> usize {
        let mut blocked = vec![false; self.n];
        for &v in s {
            blocked[v] = true;
            for &w in &self.adj[v] {
                blocked[w] = true;
            }
        }
        blocked.iter().filter(|b| !**b).count()
    }

    /// True iff no vertex has three pairwise non-adjacent neighbours.
    /// Direct O(n·Δ³) neighbourhood scan.
    pub fn is_claw_free(&self) -> bool {
        for v in 0..self.n {
            let nb = &self.adj[v];
            for i in 0..nb.len() {
                for j in i + 1..nb.len() {
                    if self.has_edge(nb[i], nb[j]) {
                        continue;
                    }
                    for &c in &nb[j + 1..] {
                        if !self.has_edge(nb[i], c) && !self.has_edge(nb[j], c) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Serialises to the edge-list text format: a header `n m` followed by one
    /// `u v` line per edge, optionally followed by `# sigma: ...`.
    pub fn to_edge_list(&self, sigma: Option<&VertexSet>) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        if let Some(s) = sigma {
            out.push_str("# sigma:");
            for v in s.as_slice() {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
        out
    }

    /// Parses the edge-list text format. Blank lines are skipped; a
    /// `# sigma:` comment yields the planted set, other comments are ignored.
    pub fn parse_edge_list(text: &str) -> Result<(Graph, Option<VertexSet>)> {
        let mut header: Option<(usize, usize)> = None;
        let mut pairs = Vec::new();
        let mut sigma_ids: Option<Vec<usize>> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(rest) = comment.trim_start().strip_prefix("sigma:") {
                    sigma_ids = Some(parse_numbers(rest, lineno)?);
                }
                continue;
            }
            let nums = parse_numbers(line, lineno)?;
            if nums.len() != 2 {
                return Err(Error::Parse(format!(
                    "line {}: expected two integers, got {}",
                    lineno + 1,
                    nums.len()
                )));
            }
            if header.is_none() {
                header = Some((nums[0], nums[1]));
            } else {
                pairs.push((nums[0], nums[1]));
            }
        }
        let (n, m) = header.ok_or_else(|| Error::Parse("missing `n m` header".into()))?;
        if pairs.len() != m {
            return Err(Error::Parse(format!(
                "header announces {m} edges, found {}",
                pairs.len()
            )));
        }
        let graph = Graph::from_edges(n, pairs)?;
        let sigma = sigma_ids.map(|ids| VertexSet::new(n, ids)).transpose()?;
        Ok((graph, sigma))
    }
}

fn parse_numbers(s: &str, lineno: usize) -> Result<Vec<usize>> {
    s.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|e| Error::Parse(format!("line {}: {tok:?}: {e}", lineno + 1)))
        })
        .collect()
}

/// A graph checked to be connected and acyclic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tree(Graph);

impl Tree {
    pub fn new(graph: Graph) -> Result<Tree> {
        if graph.n() == 0 {
            return Err(Error::NotATree("no vertices".into()));
        }
        if graph.edge_count() + 1 != graph.n() {
            return Err(Error::NotATree(format!(
                "{} edges on {} vertices",
                graph.edge_count(),
                graph.n()
            )));
        }
        if !graph.is_connected() {
            return Err(Error::NotATree("disconnected".into()));
        }
        Ok(Tree(graph))
    }

    pub fn graph(&self) -> &Graph {
        &self.0
    }

    pub fn into_graph(self) -> Graph {
        self.0
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    /// Prüfer code of length `n - 2` (empty for `n <= 2`).
    pub fn prufer_encode(&self) -> Vec<usize> {
        let n = self.n();
        if n <= 2 {
            return Vec::new();
        }
        let g = &self.0;
        let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
        let mut removed = vec![false; n];
        let mut leaves: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&v| degree[v] == 1).map(Reverse).collect();
        let mut code = Vec::with_capacity(n - 2);
        while code.len() < n - 2 {
            let Reverse(leaf) = leaves.pop().expect("tree always has a leaf");
            removed[leaf] = true;
            let parent = g.neighbors(leaf)
                .iter()
                .copied()
                .find(|&w| !removed[w])
                .expect("leaf has one live neighbour");
            code.push(parent);
            degree[parent] -= 1;
            if degree[parent] == 1 {
                leaves.push(Reverse(parent));
            }
        }
        code
    }

    /// Inverse of [`Tree::prufer_encode`] for trees on `n >= 2` vertices.
    pub fn prufer_decode(n: usize, code: &[usize]) -> Result<Tree> {
        if n < 2 {
            return Err(Error::param(format!("Prüfer decoding needs n >= 2, got {n}")));
        }
        if code.len() != n - 2 {
            return Err(Error::param(format!(
                "Prüfer code for n = {n} must have length {}, got {}",
                n - 2,
                code.len()
            )));
        }
        let mut degree = vec![1usize; n];
        for &c in code {
            if c >= n {
                return Err(Error::VertexOutOfRange { vertex: c, n });
            }
            degree[c] += 1;
        }
        let mut leaves: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&v| degree[v] == 1).map(Reverse).collect();
        let mut edges = Vec::with_capacity(n - 1);
        for &c in code {
            let Reverse(leaf) = leaves.pop().expect("a leaf exists while code remains");
            edges.push((leaf, c));
            degree[c] -= 1;
            if degree[c] == 1 {
                leaves.push(Reverse(c));
            }
        }
        let Reverse(a) = leaves.pop().expect("two vertices remain");
        let Reverse(b) = leaves.pop().expect("two vertices remain");
        edges.push((a, b));
        Ok(Tree(Graph::from_edges(n, edges)?))
    }
}

impl TryFrom<Graph> for Tree {
    type Error = Error;
    fn try_from(g: Graph) -> Result<Tree> {
        Tree::new(g)
    }
}

impl AsRef<Graph> for Tree {
    fn as_ref(&self) -> &Graph {
        &self.0
    }
}

/// Strictly increasing list of vertex ids below a universe size.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexSet {
    universe: usize,
    ids: Vec<usize>,
}

impl VertexSet {
    /// Sorts `ids`; rejects duplicates and ids `>= universe`.
    pub fn new(universe: usize, mut ids: Vec<usize>) -> Result<VertexSet> {
        ids.sort_unstable();
        for w in ids.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateVertex(w[0]));
            }
        }
        if let Some(&last) = ids.last() {
            if last >= universe {
                return Err(Error::VertexOutOfRange { vertex: last, n: universe });
            }
        }
        Ok(VertexSet { universe, ids })
    }

    pub fn empty(universe: usize) -> VertexSet {
        VertexSet { universe, ids: Vec::new() }
    }

    pub(crate) fn from_sorted_unchecked(universe: usize, ids: Vec<usize>) -> VertexSet {
        debug_assert!(ids.windows(2).all(|w| w[0] < w[1]));
        VertexSet { universe, ids }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.ids
    }

    pub fn contains(&self, v: usize) -> bool {
        self.ids.binary_search(&v).is_ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn vs(n: usize, ids: &[usize]) -> VertexSet {
        VertexSet::new(n, ids.to_vec()).unwrap()
    }

    #[test]
    fn builds_path_and_dedups() {
        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(p3, Graph::path(3));
        let single = Graph::from_edges(1, []).unwrap();
        assert_eq!((single.n(), single.edge_count()), (1, 0));
        let e = Graph::from_edges(2, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(e.edge_count(), 1);
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(
            Graph::from_edges(3, [(0, 3)]),
            Err(Error::VertexOutOfRange { vertex: 3, n: 3 })
        ));
        assert!(matches!(Graph::from_edges(3, [(1, 1)]), Err(Error::SelfLoop(1))));
        assert!(VertexSet::new(3, vec![1, 1]).is_err());
        assert!(VertexSet::new(3, vec![4]).is_err());
    }

    #[test]
    fn independence_and_unconnected() {
        let p3 = Graph::path(3);
        assert!(p3.is_independent(&vs(3, &[0, 2])));
        assert!(!p3.is_independent(&vs(3, &[0, 1])));
        assert!(p3.is_independent(&VertexSet::empty(3)));
        assert_eq!(p3.unconnected_count(&vs(3, &[1])).unwrap(), 0);
        assert_eq!(p3.unconnected_count(&vs(3, &[0])).unwrap(), 1);
        assert_eq!(Graph::empty(4).unconnected_count(&vs(4, &[0])).unwrap(), 3);
        assert!(matches!(
            p3.unconnected_count(&vs(3, &[0, 1])),
            Err(Error::NotIndependent)
        ));
    }

    #[test]
    fn prufer_small_cases() {
        let t = Tree::prufer_decode(2, &[]).unwrap();
        assert_eq!(t.graph().edges(), &[(0, 1)]);
        let t = Tree::prufer_decode(3, &[2]).unwrap();
        assert_eq!(t.graph().edges(), &[(0, 2), (1, 2)]);
        assert!(Tree::prufer_decode(4, &[0, 4]).is_err());
    }

    #[test]
    fn prufer_roundtrip_and_bijective_small_n() {
        for n in 2..=7usize {
            let total = n.pow(n as u32 - 2);
            let mut seen = HashSet::new();
            for idx in 0..total {
                let mut code = Vec::with_capacity(n - 2);
                let mut x = idx;
                for _ in 0..n - 2 {
                    code.push(x % n);
                    x /= n;
                }
                let t = Tree::prufer_decode(n, &code).unwrap();
                assert_eq!(t.prufer_encode(), code);
                seen.insert(t.graph().edges().to_vec());
            }
            assert_eq!(seen.len(), total);
        }
    }

    #[test]
    fn claw_detection() {
        assert!(!Graph::star(3).is_claw_free());
        assert!(Graph::complete(4).is_claw_free());
        assert!(Graph::path(4).is_claw_free());
    }

    #[test]
    fn edge_list_roundtrip_with_sigma() {
        let g = Graph::from_edges(5, [(0, 1), (3, 4), (1, 2)]).unwrap();
        let s = vs(5, &[0, 2, 4]);
        let text = g.to_edge_list(Some(&s));
        assert!(text.ends_with("# sigma: 0 2 4\n"));
        let (h, sigma) = Graph::parse_edge_list(&text).unwrap();
        assert_eq!(h, g);
        assert_eq!(sigma.unwrap(), s);
        assert!(Graph::parse_edge_list("3 2\n0 1\n").is_err());
    }

    #[test]
    fn tree_validation() {
        assert!(Tree::new(Graph::path(5)).is_ok());
        assert!(Tree::new(Graph::cycle(4)).is_err());
        assert!(Tree::new(Graph::empty(3)).is_err());
    }

    fn arb_code() -> impl Strategy<Value = (usize, Vec<usize>)> {
        (2usize..=200).prop_flat_map(|n| (Just(n), prop::collection::vec(0..n, n - 2)))
    }

    proptest! {
        #[test]
        fn prufer_roundtrip_random((n, code) in arb_code()) {
            let t = Tree::prufer_decode(n, &code).unwrap();
            prop_assert_eq!(t.prufer_encode(), code);
        }

        #[test]
        fn independence_is_monotone(
            n in 1usize..10,
            raw_edges in prop::collection::vec((0usize..10, 0usize..10), 0..20),
            mask in 0u32..1024,
            sub in 0u32..1024,
        ) {
            let edges = raw_edges.into_iter()
                .filter(|&(u, v)| u < n && v < n && u != v);
            let g = Graph::from_edges(n, edges).unwrap();
            let s: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            let t: Vec<usize> = s.iter().copied().filter(|&v| sub >> v & 1 == 1).collect();
            if g.is_independent(&VertexSet::new(n, s).unwrap()) {
                prop_assert!(g.is_independent(&VertexSet::new(n, t).unwrap()));
            }
            prop_assert_eq!(g.unconnected_count(&VertexSet::empty(n)).unwrap(), n);
        }
    }
}
