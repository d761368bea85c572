//! Broken cycles, NBC sets and forests, and Whitney's expansion of the
//! chromatic polynomial.
//!
//! A broken cycle here is the edge set of a cycle minus its *minimum*-labeled
//! edge: the cycle is a path v1..vr together with the chord v1vr, and the
//! chord's label is smaller than every path label. An NBC set is an edge
//! subset containing no broken cycle; every NBC set is a forest.

use std::collections::BTreeSet;

use num::BigInt;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chromatic::IntPolynomial;
use crate::error::{Error, Result};
use crate::graph::{EdgeLabelMap, EdgeRef, Graph};

/// A bijection from the edges of a graph to labels `1..=m`, stored as
/// `labels[edge_index]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeOrdering {
    labels: Vec<usize>,
}

impl EdgeOrdering {
    /// Labels edges `1..=m` in canonical (lexicographic) edge order.
    pub fn canonical(m: usize) -> Self {
        EdgeOrdering {
            labels: (1..=m).collect(),
        }
    }

    /// A seeded uniformly random ordering.
    pub fn random(m: usize, seed: u64) -> Self {
        let mut labels: Vec<usize> = (1..=m).collect();
        labels.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        EdgeOrdering { labels }
    }

    /// Validates that `labels` is a permutation of `1..=m`.
    pub fn from_labels(labels: Vec<usize>) -> Result<Self> {
        let m = labels.len();
        let mut seen = vec![false; m + 1];
        for &l in &labels {
            if l == 0 || l > m || seen[l] {
                return Err(Error::InvalidInput(format!(
                    "labels are not a permutation of 1..={}: offending label {}",
                    m, l
                )));
            }
            seen[l] = true;
        }
        Ok(EdgeOrdering { labels })
    }

    /// Parses the ordering file format: `m` whitespace-separated integers, a
    /// permutation of `1..=m` applied to canonical edge order.
    pub fn parse(text: &str, m: usize) -> Result<Self> {
        let labels: Vec<usize> = text
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::Parse(format!("bad ordering token {:?}", t)))
            })
            .collect::<Result<_>>()?;
        if labels.len() != m {
            return Err(Error::Parse(format!(
                "ordering has {} labels, graph has {} edges",
                labels.len(),
                m
            )));
        }
        Self::from_labels(labels)
    }

    pub fn m(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, e: EdgeRef) -> usize {
        self.labels[e]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Edge indices sorted by increasing label.
    pub fn edges_by_label(&self) -> Vec<EdgeRef> {
        let mut order: Vec<EdgeRef> = (0..self.labels.len()).collect();
        order.sort_by_key(|&e| self.labels[e]);
        order
    }
}

/// Exact NBC counts: `counts_total[i] = |NBC_i(G)|` and
/// `counts_per_edge[e][i] = |NBC_i(G, e)|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NbcProfile {
    pub counts_total: Vec<u64>,
    pub counts_per_edge: Vec<Vec<u64>>,
}

/// A spanning forest (V, A) with A an NBC set; components are listed as
/// sorted vertex groups, ordered by smallest member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NbcForest {
    pub edges: Vec<EdgeRef>,
    pub components: Vec<Vec<usize>>,
}

/// Every broken cycle of G under `eta`, as sorted edge-index sets,
/// deduplicated and in lexicographic order.
pub fn broken_cycles(g: &Graph, eta: &EdgeOrdering) -> Vec<Vec<EdgeRef>> {
    let mut out: BTreeSet<Vec<EdgeRef>> = BTreeSet::new();
    for cycle in all_cycle_edge_sets(g) {
        let min_edge = *cycle.iter().min_by_key(|&&e| eta.label(e)).unwrap();
        let mut rest: Vec<EdgeRef> = cycle.into_iter().filter(|&e| e != min_edge).collect();
        rest.sort_unstable();
        out.insert(rest);
    }
    out.into_iter().collect()
}

/// Edge sets of all simple cycles, each cycle exactly once.
fn all_cycle_edge_sets(g: &Graph) -> Vec<Vec<EdgeRef>> {
    let mut cycles = Vec::new();
    let mut path = Vec::new();
    let mut on_path = vec![false; g.n()];
    for s in 0..g.n() {
        path.push(s);
        on_path[s] = true;
        cycle_dfs(g, s, s, &mut path, &mut on_path, &mut cycles);
        on_path[s] = false;
        path.pop();
    }
    cycles
}

fn cycle_dfs(
    g: &Graph,
    s: usize,
    v: usize,
    path: &mut Vec<usize>,
    on_path: &mut Vec<bool>,
    cycles: &mut Vec<Vec<EdgeRef>>,
) {
    for &w in g.neighbors(v) {
        if w == s && path.len() >= 3 && path[1] < v {
            // close the cycle; path[1] < v fixes one traversal direction
            let mut edges: Vec<EdgeRef> = path
                .windows(2)
                .map(|p| g.edge_index(p[0], p[1]).unwrap())
                .collect();
            edges.push(g.edge_index(v, s).unwrap());
            cycles.push(edges);
        } else if w > s && !on_path[w] {
            path.push(w);
            on_path[w] = true;
            cycle_dfs(g, s, w, path, on_path, cycles);
            on_path[w] = false;
            path.pop();
        }
    }
}

/// True iff `a` contains no broken cycle's edge set. Uses the path-label
/// characterization: `a` must be acyclic and no edge f outside `a` may have
/// its endpoints joined in (V, a) by a path whose labels all exceed eta(f).
pub fn is_nbc(g: &Graph, eta: &EdgeOrdering, a: &[EdgeRef]) -> bool {
    let mut comp: Vec<usize> = (0..g.n()).collect();
    for &e in a {
        let (u, v) = g.edge(e);
        let (cu, cv) = (comp[u], comp[v]);
        if cu == cv {
            return false; // cycle
        }
        for c in comp.iter_mut() {
            if *c == cv {
                *c = cu;
            }
        }
    }
    !has_broken_cycle_in_forest(g, eta, a, &comp)
}

/// Definitional check, retained as a slow oracle: scan the full broken-cycle
/// list for a subset of `a`.
pub fn is_nbc_by_scan(g: &Graph, eta: &EdgeOrdering, a: &[EdgeRef]) -> bool {
    let mut member = vec![false; g.m()];
    for &e in a {
        member[e] = true;
    }
    // a set containing a cycle contains a broken cycle, and broken_cycles
    // only lists cycles minus one edge, so check acyclicity separately
    let mut comp: Vec<usize> = (0..g.n()).collect();
    for &e in a {
        let (u, v) = g.edge(e);
        let (cu, cv) = (comp[u], comp[v]);
        if cu == cv {
            return false;
        }
        for c in comp.iter_mut() {
            if *c == cv {
                *c = cu;
            }
        }
    }
    broken_cycles(g, eta)
        .iter()
        .all(|b| !b.iter().all(|&e| member[e]))
}

/// `a` is assumed acyclic with vertex components `comp`.
fn has_broken_cycle_in_forest(
    g: &Graph,
    eta: &EdgeOrdering,
    a: &[EdgeRef],
    comp: &[usize],
) -> bool {
    let mut member = vec![false; g.m()];
    let mut adj: Vec<Vec<(usize, EdgeRef)>> = vec![Vec::new(); g.n()];
    for &e in a {
        member[e] = true;
        let (u, v) = g.edge(e);
        adj[u].push((v, e));
        adj[v].push((u, e));
    }
    for f in 0..g.m() {
        if member[f] {
            continue;
        }
        let (u, v) = g.edge(f);
        if comp[u] != comp[v] {
            continue;
        }
        // unique a-path joins u and v; does every label on it exceed eta(f)?
        if reaches_with_larger_labels(&adj, eta, u, v, eta.label(f)) {
            return true;
        }
    }
    false
}

fn reaches_with_larger_labels(
    adj: &[Vec<(usize, EdgeRef)>],
    eta: &EdgeOrdering,
    from: usize,
    to: usize,
    floor: usize,
) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(v) = stack.pop() {
        if v == to {
            return true;
        }
        for &(w, e) in &adj[v] {
            if !seen[w] && eta.label(e) > floor {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    false
}

/// Visits every NBC set of size at most `max_size` (all sizes when `None`),
/// each exactly once, starting with the empty set. The slice passed to the
/// visitor holds edge indices in increasing label order.
pub fn visit_nbc_sets<F: FnMut(&[EdgeRef])>(
    g: &Graph,
    eta: &EdgeOrdering,
    max_size: Option<usize>,
    mut visit: F,
) {
    let order = eta.edges_by_label();
    let comp: Vec<usize> = (0..g.n()).collect();
    let mut current: Vec<EdgeRef> = Vec::new();
    visit(&current);
    let max = max_size.unwrap_or(g.n().saturating_sub(1));
    if max > 0 {
        nbc_rec(g, eta, &order, 0, &comp, &mut current, max, &mut visit);
    }
}

fn nbc_rec<F: FnMut(&[EdgeRef])>(
    g: &Graph,
    eta: &EdgeOrdering,
    order: &[EdgeRef],
    start: usize,
    comp: &[usize],
    current: &mut Vec<EdgeRef>,
    max: usize,
    visit: &mut F,
) {
    for pos in start..order.len() {
        let e = order[pos];
        let (u, v) = g.edge(e);
        if comp[u] == comp[v] {
            continue; // would close a cycle
        }
        current.push(e);
        let mut next_comp = comp.to_vec();
        let (cu, cv) = (next_comp[u], next_comp[v]);
        for c in next_comp.iter_mut() {
            if *c == cv {
                *c = cu;
            }
        }
        // NBC sets are hereditary, so pruning on the incremental check is safe
        if !has_broken_cycle_in_forest(g, eta, current, &next_comp) {
            visit(current);
            if current.len() < max {
                nbc_rec(g, eta, order, pos + 1, &next_comp, current, max, visit);
            }
        }
        current.pop();
    }
}

/// Exact counts of NBC sets, total and per member edge.
pub fn nbc_profile(g: &Graph, eta: &EdgeOrdering) -> NbcProfile {
    let n = g.n().max(1);
    let mut counts_total = vec![0u64; n];
    let mut counts_per_edge = vec![vec![0u64; n]; g.m()];
    visit_nbc_sets(g, eta, None, |a| {
        counts_total[a.len()] += 1;
        for &e in a {
            counts_per_edge[e][a.len()] += 1;
        }
    });
    NbcProfile {
        counts_total,
        counts_per_edge,
    }
}

fn components_from(g: &Graph, a: &[EdgeRef]) -> Vec<Vec<usize>> {
    let mut comp: Vec<usize> = (0..g.n()).collect();
    for &e in a {
        let (u, v) = g.edge(e);
        let (cu, cv) = (comp[u], comp[v]);
        for c in comp.iter_mut() {
            if *c == cv {
                *c = cu;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut index_of = vec![usize::MAX; g.n()];
    for v in 0..g.n() {
        let root = comp[v];
        if index_of[root] == usize::MAX {
            index_of[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[index_of[root]].push(v);
    }
    groups
}

/// Streams the NBC forests of size `i` (component partitions included).
pub fn visit_nbc_forests<F: FnMut(NbcForest)>(
    g: &Graph,
    eta: &EdgeOrdering,
    i: usize,
    mut visit: F,
) {
    visit_nbc_sets(g, eta, Some(i), |a| {
        if a.len() == i {
            visit(NbcForest {
                edges: a.to_vec(),
                components: components_from(g, a),
            });
        }
    });
}

pub fn nbc_forests(g: &Graph, eta: &EdgeOrdering, i: usize) -> Vec<NbcForest> {
    let mut out = Vec::new();
    visit_nbc_forests(g, eta, i, |f| out.push(f));
    out
}

/// All NBC forests of every size, in enumeration order. Useful when a
/// consumer evaluates many assignments against the same (G, eta).
pub fn all_nbc_forests(g: &Graph, eta: &EdgeOrdering) -> Vec<NbcForest> {
    let mut out = Vec::new();
    visit_nbc_sets(g, eta, None, |a| {
        out.push(NbcForest {
            edges: a.to_vec(),
            components: components_from(g, a),
        });
    });
    out
}

/// Which of two parallel pre-image edges keeps its label when an ordering is
/// restricted to G/e. The smaller-label rule is the default everywhere; the
/// larger-label rule exists to probe sensitivity of the contraction lemma.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParallelRule {
    KeepSmaller,
    KeepLarger,
}

/// Contracts `e` and restricts `eta` to G/e: surviving edges keep the
/// relative order of their retained pre-image labels, compressed to 1..m'.
pub fn induced_ordering(
    g: &Graph,
    eta: &EdgeOrdering,
    e: EdgeRef,
) -> (Graph, EdgeOrdering, EdgeLabelMap) {
    induced_ordering_with(g, eta, e, ParallelRule::KeepSmaller)
}

pub fn induced_ordering_with(
    g: &Graph,
    eta: &EdgeOrdering,
    e: EdgeRef,
    rule: ParallelRule,
) -> (Graph, EdgeOrdering, EdgeLabelMap) {
    let (h, map) = g.contract(e);
    let retained: Vec<usize> = map
        .iter()
        .map(|pre| {
            let labels = pre.iter().map(|&old| eta.label(old));
            match rule {
                ParallelRule::KeepSmaller => labels.min().unwrap(),
                ParallelRule::KeepLarger => labels.max().unwrap(),
            }
        })
        .collect();
    let mut order: Vec<usize> = (0..h.m()).collect();
    order.sort_by_key(|&j| retained[j]);
    let mut labels = vec![0usize; h.m()];
    for (rank, &j) in order.iter().enumerate() {
        labels[j] = rank + 1;
    }
    (h, EdgeOrdering { labels }, map)
}

/// P(G, x) by Whitney's expansion: sum of (-1)^i |NBC_i(G)| x^(n-i).
pub fn chromatic_via_whitney(g: &Graph, eta: &EdgeOrdering) -> IntPolynomial {
    let profile = nbc_profile(g, eta);
    let n = g.n();
    let mut coeffs = vec![BigInt::from(0); n + 1];
    for (i, &count) in profile.counts_total.iter().enumerate() {
        let c = BigInt::from(count);
        coeffs[n - i] = if i % 2 == 0 { c } else { -c };
    }
    IntPolynomial::from_coeffs(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::*;

    #[test]
    fn ordering_validation() {
        assert!(EdgeOrdering::from_labels(vec![2, 1, 3]).is_ok());
        assert!(EdgeOrdering::from_labels(vec![1, 1, 3]).is_err());
        assert!(EdgeOrdering::from_labels(vec![0, 1, 2]).is_err());
        assert!(EdgeOrdering::parse("3 1 2", 3).is_ok());
        assert!(EdgeOrdering::parse("3 1", 3).is_err());
    }

    #[test]
    fn broken_cycles_k3() {
        let g = complete(3);
        let eta = EdgeOrdering::canonical(3);
        // unique cycle; the two larger-labeled edges remain
        assert_eq!(broken_cycles(&g, &eta), vec![vec![1, 2]]);
    }

    #[test]
    fn broken_cycles_forest_empty() {
        let g = path(5);
        let eta = EdgeOrdering::canonical(g.m());
        assert!(broken_cycles(&g, &eta).is_empty());
    }

    #[test]
    fn k4_has_seven_cycles() {
        assert_eq!(all_cycle_edge_sets(&complete(4)).len(), 7);
    }

    #[test]
    fn is_nbc_k3() {
        let g = complete(3);
        let eta = EdgeOrdering::canonical(3);
        assert!(is_nbc(&g, &eta, &[]));
        assert!(is_nbc(&g, &eta, &[0, 1]));
        assert!(!is_nbc(&g, &eta, &[1, 2]));
        assert!(!is_nbc(&g, &eta, &[0, 1, 2])); // a cycle
    }

    #[test]
    fn is_nbc_agrees_with_scan() {
        for g in [complete(4), cycle(5), complete_bipartite(2, 3)] {
            for seed in 0..3u64 {
                let eta = EdgeOrdering::random(g.m(), seed);
                for mask in 0u32..(1 << g.m()) {
                    let a: Vec<EdgeRef> =
                        (0..g.m()).filter(|&e| (mask >> e) & 1 == 1).collect();
                    assert_eq!(
                        is_nbc(&g, &eta, &a),
                        is_nbc_by_scan(&g, &eta, &a),
                        "mask {:#b} on {:?}",
                        mask,
                        g.edges()
                    );
                }
            }
        }
    }

    #[test]
    fn profile_k3() {
        let g = complete(3);
        let eta = EdgeOrdering::canonical(3);
        let p = nbc_profile(&g, &eta);
        assert_eq!(p.counts_total, vec![1, 3, 2]);
        for e in 0..3 {
            assert!((1..=2).contains(&p.counts_per_edge[e][2]));
        }
    }

    #[test]
    fn profile_edgeless() {
        let g = Graph::empty(4);
        let eta = EdgeOrdering::canonical(0);
        assert_eq!(nbc_profile(&g, &eta).counts_total, vec![1, 0, 0, 0]);
    }

    #[test]
    fn forests_small_sizes() {
        let g = cycle(4);
        let eta = EdgeOrdering::canonical(4);
        let f0 = nbc_forests(&g, &eta, 0);
        assert_eq!(f0.len(), 1);
        assert_eq!(f0[0].components.len(), 4);
        assert_eq!(nbc_forests(&g, &eta, 1).len(), 4);
        // |NBC_3(C4)| = 3, the magnitude of the linear coefficient of P(C4, x)
        let f3 = nbc_forests(&g, &eta, 3);
        assert_eq!(f3.len(), 3);
        for f in &f3 {
            assert_eq!(f.components.len(), 1);
        }
    }

    #[test]
    fn induced_ordering_path() {
        let g = path(3); // edges (0,1), (1,2)
        let eta = EdgeOrdering::canonical(2);
        let (h, ind, _) = induced_ordering(&g, &eta, 0);
        assert_eq!(h.m(), 1);
        assert_eq!(ind.labels(), &[1]);
    }

    #[test]
    fn induced_ordering_k3() {
        let g = complete(3);
        let eta = EdgeOrdering::canonical(3);
        let (h, ind, map) = induced_ordering(&g, &eta, 0);
        assert_eq!(h.m(), 1);
        assert_eq!(ind.labels(), &[1]);
        assert_eq!(map, vec![vec![1, 2]]);
        // larger-label rule keeps the other pre-image; single edge, same rank
        let (_, ind2, _) = induced_ordering_with(&g, &eta, 0, ParallelRule::KeepLarger);
        assert_eq!(ind2.labels(), &[1]);
    }

    #[test]
    fn induced_ordering_c4_relative_order() {
        let g = cycle(4);
        let eta = EdgeOrdering::canonical(g.m());
        for e in 0..g.m() {
            let (h, ind, map) = induced_ordering(&g, &eta, e);
            assert_eq!(h.m(), 3);
            // ranks follow the retained (here: unique) pre-image labels
            let retained: Vec<usize> = map.iter().map(|p| eta.label(p[0])).collect();
            for a in 0..h.m() {
                for b in 0..h.m() {
                    assert_eq!(
                        retained[a] < retained[b],
                        ind.label(a) < ind.label(b)
                    );
                }
            }
        }
    }

    #[test]
    fn whitney_k3_and_c4() {
        let k3 = complete(3);
        let eta = EdgeOrdering::canonical(3);
        assert_eq!(
            chromatic_via_whitney(&k3, &eta),
            IntPolynomial::from_i64_coeffs(&[0, 2, -3, 1])
        );
        let c4 = cycle(4);
        let eta = EdgeOrdering::canonical(4);
        assert_eq!(
            chromatic_via_whitney(&c4, &eta),
            IntPolynomial::from_i64_coeffs(&[0, -3, 6, -4, 1])
        );
    }

    #[test]
    fn whitney_tree_formula() {
        // every edge subset of a forest is NBC, so P = x(x-1)^(n-1)
        let g = path(4);
        let eta = EdgeOrdering::canonical(g.m());
        assert_eq!(
            chromatic_via_whitney(&g, &eta),
            IntPolynomial::from_i64_coeffs(&[0, -1, 3, -3, 1])
        );
    }

    #[test]
    fn double_counting_identity() {
        for g in [complete(4), cycle(5), complete_bipartite(2, 3)] {
            for seed in 0..5u64 {
                let eta = EdgeOrdering::random(g.m(), seed);
                let p = nbc_profile(&g, &eta);
                for i in 1..g.n() {
                    let sum: u64 = (0..g.m()).map(|e| p.counts_per_edge[e][i]).sum();
                    assert_eq!(sum, i as u64 * p.counts_total[i]);
                }
            }
        }
    }
}
