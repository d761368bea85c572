//! Simple undirected graphs with a canonical edge list, plus contraction and
//! the local statistics (triangles through an edge, `c4`) that the bound
//! machinery consumes.
//!
//! Vertices are dense integers `0..n`. Edges are stored as `(u, v)` with
//! `u < v`, sorted lexicographically; an [`EdgeRef`] is an index into that
//! list and stays valid for the lifetime of the graph value.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Index into a graph's canonical edge list.
pub type EdgeRef = usize;

/// For each edge of a contracted graph, the indices of its pre-image edges in
/// the original graph (one edge, or two that became parallel).
pub type EdgeLabelMap = Vec<Vec<EdgeRef>>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge list. Pairs may come in any orientation;
    /// duplicates collapse. Loops and out-of-range endpoints are rejected.
    pub fn from_edge_list(n: usize, pairs: &[(usize, usize)]) -> Result<Graph> {
        let mut set = BTreeMap::new();
        for &(a, b) in pairs {
            if a >= n {
                return Err(Error::VertexOutOfRange { vertex: a, n });
            }
            if b >= n {
                return Err(Error::VertexOutOfRange { vertex: b, n });
            }
            if a == b {
                return Err(Error::LoopEdge { v: a });
            }
            set.insert((a.min(b), a.max(b)), ());
        }
        let edges: Vec<(usize, usize)> = set.into_keys().collect();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for nb in &mut adj {
            nb.sort_unstable();
        }
        Ok(Graph { n, edges, adj })
    }

    pub fn empty(n: usize) -> Graph {
        Graph::from_edge_list(n, &[]).unwrap()
    }

    /// Decodes one line of graph6 (short form, n <= 62).
    pub fn from_graph6(line: &str) -> Result<Graph> {
        let bytes = line.trim_end().as_bytes();
        if bytes.is_empty() {
            return Err(Error::Graph6 {
                offset: 0,
                reason: "empty line".into(),
            });
        }
        if bytes[0] == b'~' {
            return Err(Error::Graph6 {
                offset: 0,
                reason: "long form (n > 62) not supported".into(),
            });
        }
        if !(63..=125).contains(&bytes[0]) {
            return Err(Error::Graph6 {
                offset: 0,
                reason: format!("invalid size byte {}", bytes[0]),
            });
        }
        let n = (bytes[0] - 63) as usize;
        let nbits = n * (n.saturating_sub(1)) / 2;
        let nbytes = (nbits + 5) / 6;
        if bytes.len() < 1 + nbytes {
            return Err(Error::Graph6 {
                offset: bytes.len(),
                reason: format!("truncated: need {} bytes after size", nbytes),
            });
        }
        if bytes.len() > 1 + nbytes {
            return Err(Error::Graph6 {
                offset: 1 + nbytes,
                reason: "trailing bytes".into(),
            });
        }
        let mut pairs = Vec::new();
        let mut bit = 0usize;
        for j in 1..n {
            for i in 0..j {
                let byte = bytes[1 + bit / 6];
                if !(63..=126).contains(&byte) {
                    return Err(Error::Graph6 {
                        offset: 1 + bit / 6,
                        reason: format!("invalid data byte {}", byte),
                    });
                }
                let v = byte - 63;
                if (v >> (5 - (bit % 6))) & 1 == 1 {
                    pairs.push((i, j));
                }
                bit += 1;
            }
        }
        Graph::from_edge_list(n, &pairs)
    }

    /// Encodes to graph6 short form. Inverse of [`Graph::from_graph6`].
    pub fn to_graph6(&self) -> String {
        assert!(self.n <= 62, "graph6 short form requires n <= 62");
        let mut out = vec![63 + self.n as u8];
        let nbits = self.n * self.n.saturating_sub(1) / 2;
        let mut bits = vec![0u8; (nbits + 5) / 6];
        let mut bit = 0usize;
        for j in 1..self.n {
            for i in 0..j {
                if self.has_edge(i, j) {
                    bits[bit / 6] |= 1 << (5 - (bit % 6));
                }
                bit += 1;
            }
        }
        out.extend(bits.iter().map(|b| b + 63));
        String::from_utf8(out).unwrap()
    }

    /// Parses the edge-list text format: first non-comment line `n m`, then
    /// `m` lines `u v`. `#` starts a comment.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text.lines().map(|l| match l.find('#') {
            Some(i) => l[..i].trim(),
            None => l.trim(),
        });
        let header = lines
            .by_ref()
            .find(|l| !l.is_empty())
            .ok_or_else(|| Error::Parse("missing 'n m' header".into()))?;
        let mut it = header.split_whitespace();
        let n: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad header line {:?}", header)))?;
        let m: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad header line {:?}", header)))?;
        let mut pairs = Vec::with_capacity(m);
        for line in lines {
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let u: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad edge line {:?}", line)))?;
            let v: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad edge line {:?}", line)))?;
            pairs.push((u, v));
        }
        if pairs.len() != m {
            return Err(Error::Parse(format!(
                "header declares {} edges, found {}",
                m,
                pairs.len()
            )));
        }
        Graph::from_edge_list(n, &pairs)
    }

    pub fn to_edge_list_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            s.push_str(&format!("{} {}\n", u, v));
        }
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeRef) -> (usize, usize) {
        self.edges[e]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<EdgeRef> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// The graph with edge `e` removed.
    pub fn delete_edge(&self, e: EdgeRef) -> Graph {
        let mut pairs = self.edges.clone();
        pairs.remove(e);
        Graph::from_edge_list(self.n, &pairs).unwrap()
    }

    /// Simple contraction G/e: merge the endpoints of `e` (parallel pairs
    /// collapse) and renumber densely. The returned map records, per edge of
    /// the contracted graph, its pre-image edge indices in `self`.
    pub fn contract(&self, e: EdgeRef) -> (Graph, EdgeLabelMap) {
        let (u, v) = self.edges[e];
        // v merges into u; vertices above v shift down by one.
        let remap = |w: usize| -> usize {
            let w = if w == v { u } else { w };
            if w > v {
                w - 1
            } else {
                w
            }
        };
        let mut preimages: BTreeMap<(usize, usize), Vec<EdgeRef>> = BTreeMap::new();
        for (idx, &(a, b)) in self.edges.iter().enumerate() {
            if idx == e {
                continue;
            }
            let (a, b) = (remap(a), remap(b));
            debug_assert_ne!(a, b, "only the contracted edge may collapse");
            preimages.entry((a.min(b), a.max(b))).or_default().push(idx);
        }
        let pairs: Vec<(usize, usize)> = preimages.keys().copied().collect();
        let map: EdgeLabelMap = preimages.into_values().collect();
        let g = Graph::from_edge_list(self.n - 1, &pairs).unwrap();
        debug_assert_eq!(g.edges(), pairs.as_slice());
        (g, map)
    }

    /// |N(u) ∩ N(v)| for e = uv: the number of triangles containing `e`.
    pub fn triangles_through(&self, e: EdgeRef) -> usize {
        let (u, v) = self.edges[e];
        self.adj[u].iter().filter(|&&w| self.has_edge(v, w)).count()
    }

    /// Total number of triangles, each counted once.
    pub fn triangle_count(&self) -> usize {
        let mut count = 0;
        for i in 0..self.n {
            for &j in self.adj[i].iter().filter(|&&j| j > i) {
                for &k in self.adj[j].iter().filter(|&&k| k > j) {
                    if self.has_edge(i, k) {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    /// Number of 4-cycles containing edge `e`.
    pub fn four_cycles_through(&self, e: EdgeRef) -> usize {
        let (u, v) = self.edges[e];
        // A 4-cycle u-v-y-x-u is determined by x in N(u), y in N(v) with
        // x != v, y != u, x != y, and xy an edge.
        let mut count = 0;
        for &x in self.adj[u].iter().filter(|&&x| x != v) {
            for &y in self.adj[v].iter().filter(|&&y| y != u) {
                if x != y && self.has_edge(x, y) {
                    count += 1;
                }
            }
        }
        count
    }

    /// c4(G): the maximum over edges of the number of 4-cycles containing
    /// that edge. 0 for edgeless graphs.
    pub fn c4(&self) -> usize {
        (0..self.m())
            .map(|e| self.four_cycles_through(e))
            .max()
            .unwrap_or(0)
    }
}

/// Small named generators used by the CLI (`--gen`) and tests.
pub mod generators {
    use super::Graph;
    use crate::error::{Error, Result};

    pub fn complete(n: usize) -> Graph {
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                pairs.push((i, j));
            }
        }
        Graph::from_edge_list(n, &pairs).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs n >= 3");
        let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edge_list(n, &pairs).unwrap()
    }

    pub fn path(n: usize) -> Graph {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edge_list(n, &pairs).unwrap()
    }

    pub fn star(leaves: usize) -> Graph {
        let pairs: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Graph::from_edge_list(leaves + 1, &pairs).unwrap()
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let mut pairs = Vec::new();
        for i in 0..a {
            for j in 0..b {
                pairs.push((i, a + j));
            }
        }
        Graph::from_edge_list(a + b, &pairs).unwrap()
    }

    pub fn petersen() -> Graph {
        let mut pairs = Vec::new();
        for i in 0..5 {
            pairs.push((i, (i + 1) % 5)); // outer cycle
            pairs.push((5 + i, 5 + (i + 2) % 5)); // inner pentagram
            pairs.push((i, 5 + i)); // spokes
        }
        Graph::from_edge_list(10, &pairs).unwrap()
    }

    /// Parses a generator spec such as `complete:4`, `cycle:5`, `path:3`,
    /// `star:3`, `complete-bipartite:2,4`, `petersen`, `empty:4`.
    pub fn from_spec(spec: &str) -> Result<Graph> {
        let (name, args) = match spec.split_once(':') {
            Some((n, a)) => (n, a),
            None => (spec, ""),
        };
        let one = |args: &str| -> Result<usize> {
            args.parse()
                .map_err(|_| Error::Parse(format!("bad generator argument {:?}", args)))
        };
        match name {
            "complete" | "k" => Ok(complete(one(args)?)),
            "cycle" | "c" => Ok(cycle(one(args)?)),
            "path" | "p" => Ok(path(one(args)?)),
            "star" => Ok(star(one(args)?)),
            "empty" => Ok(Graph::empty(one(args)?)),
            "complete-bipartite" | "kb" => {
                let (a, b) = args
                    .split_once(',')
                    .ok_or_else(|| Error::Parse("complete-bipartite needs a,b".into()))?;
                Ok(complete_bipartite(one(a)?, one(b)?))
            }
            "petersen" => Ok(petersen()),
            other => Err(Error::Parse(format!("unknown generator {:?}", other))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::generators::*;
    use super::*;

    #[test]
    fn from_edge_list_triangle() {
        let g = Graph::from_edge_list(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 3);
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn from_edge_list_duplicate_collapse() {
        let g = Graph::from_edge_list(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.m(), 1);
    }

    #[test]
    fn from_edge_list_rejects_loop() {
        assert!(matches!(
            Graph::from_edge_list(1, &[(0, 0)]),
            Err(Error::LoopEdge { v: 0 })
        ));
    }

    #[test]
    fn from_edge_list_rejects_out_of_range() {
        assert!(matches!(
            Graph::from_edge_list(2, &[(0, 2)]),
            Err(Error::VertexOutOfRange { vertex: 2, n: 2 })
        ));
    }

    #[test]
    fn graph6_empty_two_vertices() {
        // "A?" is the 2-vertex empty graph; "A_" is K2.
        let g = Graph::from_graph6("A?").unwrap();
        assert_eq!((g.n(), g.m()), (2, 0));
        let g = Graph::from_graph6("A_").unwrap();
        assert_eq!((g.n(), g.m()), (2, 1));
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn graph6_three_vertices() {
        // "Bw" is K3; "B_" carries a single edge on 3 vertices.
        let g = Graph::from_graph6("Bw").unwrap();
        assert_eq!((g.n(), g.m()), (3, 3));
        let g = Graph::from_graph6("B_").unwrap();
        assert_eq!((g.n(), g.m()), (3, 1));
    }

    #[test]
    fn graph6_truncated_is_rejected() {
        assert!(matches!(
            Graph::from_graph6("D"),
            Err(Error::Graph6 { .. })
        ));
    }

    #[test]
    fn graph6_round_trip() {
        for g in [complete(4), cycle(5), petersen(), Graph::empty(3)] {
            let back = Graph::from_graph6(&g.to_graph6()).unwrap();
            assert_eq!(back, g);
        }
    }

    #[test]
    fn petersen_matches_catalog_string() {
        assert_eq!(petersen().to_graph6(), "IheA@GUAo");
    }

    #[test]
    fn parse_edge_list_text() {
        let g = Graph::parse_edge_list("# a triangle\n3 3\n0 1\n1 2\n0 2\n").unwrap();
        assert_eq!(g.m(), 3);
        assert!(Graph::parse_edge_list("3 3\n0 1\n").is_err());
    }

    #[test]
    fn contract_k3_gives_single_edge() {
        let g = complete(3);
        let (h, map) = g.contract(0);
        assert_eq!((h.n(), h.m()), (2, 1));
        assert_eq!(map, vec![vec![1, 2]]);
    }

    #[test]
    fn contract_c4_gives_k3() {
        let g = cycle(4);
        for e in 0..g.m() {
            let (h, _) = g.contract(e);
            assert_eq!((h.n(), h.m()), (3, 3));
        }
    }

    #[test]
    fn contract_k4_gives_k3() {
        let g = complete(4);
        let (h, map) = g.contract(0);
        assert_eq!((h.n(), h.m()), (3, 3));
        // two of the surviving edges have parallel pre-images
        let parallel = map.iter().filter(|p| p.len() == 2).count();
        assert_eq!(parallel, 2);
    }

    #[test]
    fn contract_edge_count_identity() {
        for g in [complete(4), cycle(5), petersen(), complete_bipartite(2, 3)] {
            for e in 0..g.m() {
                let (h, _) = g.contract(e);
                assert_eq!(h.m(), g.m() - 1 - g.triangles_through(e));
            }
        }
    }

    #[test]
    fn triangles_through_examples() {
        assert_eq!(complete(3).triangles_through(0), 1);
        assert_eq!(complete(4).triangles_through(2), 2);
        assert_eq!(cycle(5).triangles_through(0), 0);
    }

    #[test]
    fn triangle_count_examples() {
        assert_eq!(complete(4).triangle_count(), 4);
        assert_eq!(cycle(6).triangle_count(), 0);
        assert_eq!(petersen().triangle_count(), 0);
    }

    #[test]
    fn c4_examples() {
        assert_eq!(petersen().c4(), 0); // girth 5
        assert_eq!(cycle(4).c4(), 1);
        // K4 has three 4-cycles; each edge lies on exactly two of them.
        assert_eq!(complete(4).c4(), 2);
        assert_eq!(Graph::empty(3).c4(), 0);
    }

    #[test]
    fn generator_specs() {
        assert_eq!(from_spec("complete:4").unwrap(), complete(4));
        assert_eq!(from_spec("kb:2,4").unwrap(), complete_bipartite(2, 4));
        assert!(from_spec("nope:1").is_err());
    }
}
