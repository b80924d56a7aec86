//! Finite connected undirected graphs with symmetric-arc indexing.
//!
//! Edge `k = {u, v}` (as given, `u` first) owns arcs `2k = (u → v)` and
//! `2k + 1 = (v → u)`, so the inverse of arc `a` is `a ^ 1`.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Arc = usize;
pub type Vertex = usize;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GraphOptions {
    /// Accept parallel edges. Off by default.
    pub allow_parallel: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    num_vertices: usize,
    edges: Vec<(Vertex, Vertex)>,
    out_arcs: Vec<Vec<Arc>>,
    in_arcs: Vec<Vec<Arc>>,
}

/// Girth of a graph: `Infinite` for forests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl Girth {
    pub fn at_least(self, bound: usize) -> bool {
        match self {
            Girth::Finite(g) => g >= bound,
            Girth::Infinite => true,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphProfile {
    pub num_vertices: usize,
    pub num_edges: usize,
    pub is_tree: bool,
    /// |E| − |V| + 1
    pub cycle_rank: usize,
    pub is_bipartite: bool,
    pub girth: Girth,
    pub is_regular: bool,
    /// Common degree κ when regular.
    pub degree: Option<usize>,
}

impl fmt::Display for GraphProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let regular = match self.degree {
            Some(k) => k.to_string(),
            None => "false".to_string(),
        };
        write!(
            f,
            "vertices={} edges={} girth={} regular={} bipartite={} cycle_rank={}",
            self.num_vertices, self.num_edges, self.girth, regular, self.is_bipartite, self.cycle_rank
        )
    }
}

impl Graph {
    pub fn new(num_vertices: usize, edges: Vec<(Vertex, Vertex)>) -> Result<Self> {
        Self::with_options(num_vertices, edges, GraphOptions::default())
    }

    pub fn with_options(num_vertices: usize, edges: Vec<(Vertex, Vertex)>, opts: GraphOptions) -> Result<Self> {
        if num_vertices == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut seen = HashSet::new();
        let mut out_arcs = vec![Vec::new(); num_vertices];
        let mut in_arcs = vec![Vec::new(); num_vertices];
        for (k, &(u, v)) in edges.iter().enumerate() {
            for x in [u, v] {
                if x >= num_vertices {
                    return Err(Error::VertexOutOfRange { index: x, num_vertices });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if !opts.allow_parallel && !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::DuplicateEdge(u, v));
            }
            out_arcs[u].push(2 * k);
            in_arcs[v].push(2 * k);
            out_arcs[v].push(2 * k + 1);
            in_arcs[u].push(2 * k + 1);
        }
        let g = Self { num_vertices, edges, out_arcs, in_arcs };
        if let Some(unreachable) = g.first_unreachable() {
            return Err(Error::Disconnected { unreachable });
        }
        Ok(g)
    }

    /// Parse the edge-list text format: a vertex-count header, then one
    /// `u v` pair per line. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with(text, GraphOptions::default())
    }

    pub fn parse_with(text: &str, opts: GraphOptions) -> Result<Self> {
        let mut num_vertices = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse_usize = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::Parse { line: line_no, message: format!("expected a non-negative integer, got {s:?}") })
            };
            match (num_vertices, fields.as_slice()) {
                (None, [n]) => num_vertices = Some(parse_usize(n)?),
                (None, _) => {
                    return Err(Error::Parse { line: line_no, message: "expected a vertex-count header".into() })
                }
                (Some(_), [u, v]) => edges.push((parse_usize(u)?, parse_usize(v)?)),
                (Some(_), _) => {
                    return Err(Error::Parse { line: line_no, message: "expected an edge line \"u v\"".into() })
                }
            }
        }
        let n = num_vertices.ok_or(Error::Parse { line: 0, message: "missing vertex-count header".into() })?;
        Self::with_options(n, edges, opts)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.num_vertices);
        for (u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    fn first_unreachable(&self) -> Option<Vertex> {
        let mut seen = vec![false; self.num_vertices];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.out_arcs[u] {
                let v = self.terminus(a);
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen.iter().position(|s| !s)
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_arcs(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn origin(&self, a: Arc) -> Vertex {
        let (u, v) = self.edges[a / 2];
        if a % 2 == 0 {
            u
        } else {
            v
        }
    }

    pub fn terminus(&self, a: Arc) -> Vertex {
        self.origin(a ^ 1)
    }

    #[inline]
    pub fn inverse(&self, a: Arc) -> Arc {
        a ^ 1
    }

    pub fn out_arcs(&self, u: Vertex) -> &[Arc] {
        &self.out_arcs[u]
    }

    pub fn in_arcs(&self, u: Vertex) -> &[Arc] {
        &self.in_arcs[u]
    }

    pub fn degree(&self, u: Vertex) -> usize {
        self.out_arcs[u].len()
    }

    pub fn arcs(&self) -> impl Iterator<Item = Arc> {
        0..self.num_arcs()
    }

    /// Common degree when the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let k = self.degree(0);
        (1..self.num_vertices).all(|u| self.degree(u) == k).then_some(k)
    }

    /// The arc `u → v`, if present (first one for multigraphs).
    pub fn find_arc(&self, u: Vertex, v: Vertex) -> Option<Arc> {
        self.out_arcs[u].iter().copied().find(|&a| self.terminus(a) == v)
    }

    pub fn is_bipartite(&self) -> bool {
        self.two_coloring().is_some()
    }

    pub fn two_coloring(&self) -> Option<Vec<bool>> {
        let mut color: Vec<Option<bool>> = vec![None; self.num_vertices];
        color[0] = Some(false);
        let mut queue = VecDeque::from([0]);
        while let Some(u) = queue.pop_front() {
            let cu = color[u].expect("queued vertices are colored");
            for &a in &self.out_arcs[u] {
                let v = self.terminus(a);
                match color[v] {
                    None => {
                        color[v] = Some(!cu);
                        queue.push_back(v);
                    }
                    Some(cv) if cv == cu => return None,
                    Some(_) => {}
                }
            }
        }
        Some(color.into_iter().map(|c| c.unwrap_or(false)).collect())
    }

    /// Shortest cycle length via a BFS from every vertex.
    pub fn girth(&self) -> Girth {
        let mut best = usize::MAX;
        let mut dist = vec![usize::MAX; self.num_vertices];
        let mut parent_edge = vec![usize::MAX; self.num_vertices];
        for root in 0..self.num_vertices {
            dist.fill(usize::MAX);
            dist[root] = 0;
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                if 2 * dist[u] + 1 >= best {
                    break;
                }
                for &a in &self.out_arcs[u] {
                    if a / 2 == parent_edge[u] && u != root {
                        continue;
                    }
                    let v = self.terminus(a);
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        parent_edge[v] = a / 2;
                        queue.push_back(v);
                    } else {
                        best = best.min(dist[u] + dist[v] + 1);
                    }
                }
            }
        }
        if best == usize::MAX {
            Girth::Infinite
        } else {
            Girth::Finite(best)
        }
    }

    pub fn profile(&self) -> GraphProfile {
        let degree = self.regular_degree();
        let cycle_rank = self.num_edges() + 1 - self.num_vertices;
        GraphProfile {
            num_vertices: self.num_vertices,
            num_edges: self.num_edges(),
            is_tree: cycle_rank == 0,
            cycle_rank,
            is_bipartite: self.is_bipartite(),
            girth: self.girth(),
            is_regular: degree.is_some(),
            degree,
        }
    }

    /// BFS spanning tree from vertex 0, as the list of tree arcs oriented
    /// away from the root, in discovery order.
    pub fn spanning_tree_arcs(&self) -> Vec<Arc> {
        let mut seen = vec![false; self.num_vertices];
        seen[0] = true;
        let mut tree = Vec::with_capacity(self.num_vertices - 1);
        let mut queue = VecDeque::from([0]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.out_arcs[u] {
                let v = self.terminus(a);
                if !seen[v] {
                    seen[v] = true;
                    tree.push(a);
                    queue.push_back(v);
                }
            }
        }
        tree
    }

    // Named families.

    pub fn path(n: usize) -> Result<Self> {
        Self::new(n, (1..n).map(|i| (i - 1, i)).collect())
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!("cycle needs at least 3 vertices, got {n}")));
        }
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect())
    }

    pub fn complete(n: usize) -> Result<Self> {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Self::new(n, edges)
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Result<Self> {
        let edges = (0..a).flat_map(|i| (0..b).map(move |j| (i, a + j))).collect();
        Self::new(a + b, edges)
    }

    /// K₁,ₖ with centre 0.
    pub fn star(k: usize) -> Result<Self> {
        Self::new(k + 1, (1..=k).map(|i| (0, i)).collect())
    }

    pub fn petersen() -> Self {
        let mut edges = Vec::with_capacity(15);
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        Self::new(10, edges).expect("petersen graph is valid")
    }

    /// Cubic graph from LCF notation over a Hamiltonian cycle.
    pub fn lcf(n: usize, shifts: &[isize], repeats: usize) -> Result<Self> {
        let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        let mut seen: HashSet<(usize, usize)> = edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        for i in 0..shifts.len() * repeats {
            let j = (i as isize + shifts[i % shifts.len()]).rem_euclid(n as isize) as usize;
            if seen.insert((i.min(j), i.max(j))) {
                edges.push((i.min(j), i.max(j)));
            }
        }
        Self::new(n, edges)
    }

    pub fn dodecahedron() -> Self {
        Self::lcf(20, &[10, 7, 4, -4, -7, 10, -4, 7, -7, 4], 2).expect("dodecahedron is valid")
    }

    /// Connected simple graph: a random recursive spanning tree plus
    /// `m − n + 1` distinct random extra edges. Deterministic per seed.
    pub fn random_connected(n: usize, m: usize, seed: u64) -> Result<Self> {
        if n == 0 || m + 1 < n || m > n * (n - 1) / 2 {
            return Err(Error::InfeasibleRandomGraph { n, m });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let mut present = HashSet::new();
        let mut edges = Vec::with_capacity(m);
        for i in 1..n {
            let parent = order[rng.gen_range(0..i)];
            let child = order[i];
            present.insert((parent.min(child), parent.max(child)));
            edges.push((parent.min(child), parent.max(child)));
        }
        let mut candidates: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|e| !present.contains(e)).collect();
        candidates.shuffle(&mut rng);
        edges.extend(candidates.into_iter().take(m + 1 - n));
        Self::new(n, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_arc_indexing() {
        let g = Graph::parse("3\n0 1\n1 2\n2 0").unwrap();
        assert_eq!(g.num_arcs(), 6);
        assert_eq!((g.origin(0), g.terminus(0)), (0, 1));
        assert_eq!((g.origin(1), g.terminus(1)), (1, 0));
        assert_eq!((g.origin(4), g.terminus(4)), (2, 0));
        for a in g.arcs() {
            assert_eq!(g.inverse(g.inverse(a)), a);
            assert_eq!(g.origin(g.inverse(a)), g.terminus(a));
            assert_eq!(g.terminus(g.inverse(a)), g.origin(a));
        }
    }

    #[test]
    fn single_edge_is_tree() {
        let g = Graph::parse("2\n0 1").unwrap();
        let p = g.profile();
        assert!(p.is_tree);
        assert_eq!(p.cycle_rank, 0);
        assert_eq!(p.girth, Girth::Infinite);
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = Graph::parse("# a path\n3 # vertices\n\n0 1\n# middle\n1 2  # tail\n").unwrap();
        assert_eq!(g.num_edges(), 2);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Graph::parse("3\n0 1"), Err(Error::Disconnected { unreachable: 2 })));
        assert!(matches!(Graph::parse("2\n0 0\n0 1"), Err(Error::SelfLoop(0))));
        assert!(matches!(Graph::parse("2\n0 2"), Err(Error::VertexOutOfRange { index: 2, .. })));
        assert!(matches!(Graph::parse("2\n0 1\n1 0"), Err(Error::DuplicateEdge(1, 0))));
        assert!(matches!(Graph::parse("2\n0 x"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(Graph::parse("2\n0 1 2"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(Graph::parse("# nothing"), Err(Error::Parse { .. })));
    }

    #[test]
    fn parallel_edges_behind_flag() {
        let opts = GraphOptions { allow_parallel: true };
        let g = Graph::parse_with("2\n0 1\n1 0", opts).unwrap();
        assert_eq!(g.num_arcs(), 4);
        assert_eq!(g.girth(), Girth::Finite(2));
    }

    #[test]
    fn cycles_profile() {
        let c5 = Graph::cycle(5).unwrap().profile();
        assert_eq!((c5.cycle_rank, c5.is_bipartite, c5.girth), (1, false, Girth::Finite(5)));
        let c4 = Graph::cycle(4).unwrap().profile();
        assert_eq!((c4.cycle_rank, c4.is_bipartite, c4.girth), (1, true, Girth::Finite(4)));
        for n in 3..12 {
            assert_eq!(Graph::cycle(n).unwrap().girth(), Girth::Finite(n));
        }
    }

    #[test]
    fn petersen_profile() {
        let p = Graph::petersen().profile();
        assert_eq!(p.num_vertices, 10);
        assert_eq!(p.num_edges, 15);
        assert_eq!(p.cycle_rank, 6);
        assert!(!p.is_bipartite);
        assert_eq!(p.girth, Girth::Finite(5));
        assert_eq!(p.degree, Some(3));
        assert_eq!(p.to_string(), "vertices=10 edges=15 girth=5 regular=3 bipartite=false cycle_rank=6");
    }

    #[test]
    fn dodecahedron_profile() {
        let p = Graph::dodecahedron().profile();
        assert_eq!((p.num_vertices, p.num_edges, p.degree), (20, 30, Some(3)));
        assert_eq!(p.girth, Girth::Finite(5));
        assert!(!p.is_bipartite);
    }

    #[test]
    fn named_girths() {
        assert_eq!(Graph::complete(4).unwrap().girth(), Girth::Finite(3));
        assert_eq!(Graph::complete_bipartite(3, 3).unwrap().girth(), Girth::Finite(4));
        assert!(Graph::complete_bipartite(3, 3).unwrap().is_bipartite());
        assert_eq!(Graph::star(3).unwrap().girth(), Girth::Infinite);
    }

    #[test]
    fn random_graph_extremes() {
        let t = Graph::random_connected(4, 3, 99).unwrap();
        assert!(t.profile().is_tree);
        let k5 = Graph::random_connected(5, 10, 7).unwrap();
        assert_eq!(k5.regular_degree(), Some(4));
        assert!(Graph::random_connected(5, 3, 0).is_err());
        assert!(Graph::random_connected(5, 11, 0).is_err());
    }

    #[test]
    fn random_graph_is_deterministic() {
        let a = Graph::random_connected(8, 12, 1).unwrap();
        let b = Graph::random_connected(8, 12, 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.num_edges(), 12);
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::petersen();
        assert_eq!(Graph::parse(&g.to_edge_list()).unwrap(), g);
    }
}
