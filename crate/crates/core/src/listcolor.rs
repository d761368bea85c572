//! List assignments, the alpha/beta statistics, and two independent exact
//! algorithms for P(G, L): direct backtracking and the NBC-forest
//! inclusion-exclusion expansion.

use num::BigInt;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chromatic;
use crate::error::{Error, Result};
use crate::graph::{EdgeRef, Graph};
use crate::nbc::{self, EdgeOrdering, NbcForest};

pub const DEFAULT_LIST_BUDGET: u128 = 100_000_000;

/// Per-vertex sorted color lists over non-negative integer color ids, with a
/// declared k. Colors need not be drawn from 1..=k; k-uniformity is only
/// validated where an operation requires it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ListAssignment {
    lists: Vec<Vec<u32>>,
    k: usize,
}

impl ListAssignment {
    pub fn new(mut lists: Vec<Vec<u32>>, k: usize) -> Self {
        for l in &mut lists {
            l.sort_unstable();
            l.dedup();
        }
        ListAssignment { lists, k }
    }

    /// The same list on every vertex.
    pub fn constant(n: usize, list: &[u32]) -> Self {
        let mut l = list.to_vec();
        l.sort_unstable();
        l.dedup();
        let k = l.len();
        ListAssignment {
            lists: vec![l; n],
            k,
        }
    }

    /// Seeded random k-subsets of `1..=universe` per vertex.
    pub fn random(n: usize, k: usize, universe: usize, seed: u64) -> Self {
        assert!(k <= universe, "k-subsets need universe >= k");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pool: Vec<u32> = (1..=universe as u32).collect();
        let lists = (0..n)
            .map(|_| {
                let mut list: Vec<u32> =
                    pool.choose_multiple(&mut rng, k).copied().collect();
                list.sort_unstable();
                list
            })
            .collect();
        ListAssignment { lists, k }
    }

    /// Parses the assignment file format: one line per vertex,
    /// `v: c1 c2 ... ck`. Every vertex of the graph must appear exactly once.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let mut lists: Vec<Option<Vec<u32>>> = vec![None; n];
        for line in text.lines() {
            let line = match line.find('#') {
                Some(i) => line[..i].trim(),
                None => line.trim(),
            };
            if line.is_empty() {
                continue;
            }
            let (v, rest) = line
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("bad list line {:?}", line)))?;
            let v: usize = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad vertex in {:?}", line)))?;
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if lists[v].is_some() {
                return Err(Error::Parse(format!("vertex {} listed twice", v)));
            }
            let colors: Vec<u32> = rest
                .split_whitespace()
                .map(|t| {
                    t.parse()
                        .map_err(|_| Error::Parse(format!("bad color {:?}", t)))
                })
                .collect::<Result<_>>()?;
            lists[v] = Some(colors);
        }
        let lists: Vec<Vec<u32>> = lists
            .into_iter()
            .enumerate()
            .map(|(v, l)| l.ok_or_else(|| Error::Parse(format!("missing list for vertex {}", v))))
            .collect::<Result<_>>()?;
        let k = lists.first().map_or(0, |l| l.len());
        Ok(ListAssignment::new(lists, k))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (v, l) in self.lists.iter().enumerate() {
            s.push_str(&format!("{}:", v));
            for c in l {
                s.push_str(&format!(" {}", c));
            }
            s.push('\n');
        }
        s
    }

    pub fn n(&self) -> usize {
        self.lists.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn list(&self, v: usize) -> &[u32] {
        &self.lists[v]
    }

    pub fn lists(&self) -> &[Vec<u32>] {
        &self.lists
    }

    pub fn is_k_uniform(&self) -> bool {
        self.lists.iter().all(|l| l.len() == self.k)
    }

    pub fn ensure_k_uniform(&self) -> Result<()> {
        for (v, l) in self.lists.iter().enumerate() {
            if l.len() != self.k {
                return Err(Error::NotKUniform { k: self.k, vertex: v });
            }
        }
        Ok(())
    }
}

/// alpha(e) = |L(u) \ L(v)| for e = uv. For k-uniform assignments this is
/// symmetric in the endpoints.
pub fn alpha(la: &ListAssignment, g: &Graph, e: EdgeRef) -> usize {
    let (u, v) = g.edge(e);
    let lv = la.list(v);
    la.list(u)
        .iter()
        .filter(|c| lv.binary_search(c).is_err())
        .count()
}

/// beta over a vertex set: size of the intersection of the lists.
/// Folds smallest-list-first so an empty intersection exits early.
pub fn beta(la: &ListAssignment, vertices: &[usize]) -> Result<usize> {
    if vertices.is_empty() {
        return Err(Error::EmptyVertexSet);
    }
    let mut vs = vertices.to_vec();
    vs.sort_by_key(|&v| la.list(v).len());
    let mut acc: Vec<u32> = la.list(vs[0]).to_vec();
    for &v in &vs[1..] {
        if acc.is_empty() {
            break;
        }
        let l = la.list(v);
        acc.retain(|c| l.binary_search(c).is_ok());
    }
    Ok(acc.len())
}

/// Exact P(G, L) by backtracking over vertices in descending-degree order.
pub fn count_list_colorings(g: &Graph, la: &ListAssignment) -> Result<BigInt> {
    count_list_colorings_budgeted(g, la, DEFAULT_LIST_BUDGET)
}

pub fn count_list_colorings_budgeted(
    g: &Graph,
    la: &ListAssignment,
    budget: u128,
) -> Result<BigInt> {
    assert_eq!(g.n(), la.n(), "assignment size must match the graph");
    let mut space: u128 = 1;
    for v in 0..g.n() {
        space = space.saturating_mul(la.list(v).len() as u128);
    }
    if space > budget {
        return Err(Error::BudgetExceeded {
            required: space,
            budget,
        });
    }
    Ok(BigInt::from(count_list_colorings_raw(g, la, u128::MAX)))
}

/// Backtracking counter, capped: stops early once `cap` colorings are found.
/// Exact whenever the return value is below `cap`.
pub(crate) fn count_list_colorings_raw(g: &Graph, la: &ListAssignment, cap: u128) -> u128 {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut position = vec![0usize; g.n()];
    for (pos, &v) in order.iter().enumerate() {
        position[v] = pos;
    }
    let mut chosen = vec![0u32; g.n()];
    let mut count = 0u128;
    lc_rec(g, la, &order, &position, 0, &mut chosen, cap, &mut count);
    count
}

#[allow(clippy::too_many_arguments)]
fn lc_rec(
    g: &Graph,
    la: &ListAssignment,
    order: &[usize],
    position: &[usize],
    pos: usize,
    chosen: &mut Vec<u32>,
    cap: u128,
    count: &mut u128,
) {
    if *count >= cap {
        return;
    }
    if pos == order.len() {
        *count += 1;
        return;
    }
    let v = order[pos];
    'colors: for &c in la.list(v) {
        for &w in g.neighbors(v) {
            if position[w] < pos && chosen[w] == c {
                continue 'colors;
            }
        }
        chosen[v] = c;
        lc_rec(g, la, order, position, pos + 1, chosen, cap, count);
        if *count >= cap {
            return;
        }
    }
}

/// Signed inclusion-exclusion term sum over a precomputed forest stream:
/// sum over i of (-1)^i sum over forests of prod_j beta(T_j).
pub fn eval_forest_expansion(forests: &[NbcForest], la: &ListAssignment) -> BigInt {
    let mut total = BigInt::from(0);
    for f in forests {
        let mut product: i128 = 1;
        for t in &f.components {
            product *= beta(la, t).expect("components are nonempty") as i128;
            if product == 0 {
                break;
            }
        }
        if f.edges.len() % 2 == 1 {
            product = -product;
        }
        total += BigInt::from(product);
    }
    total
}

/// Exact P(G, L) by the NBC-forest inclusion-exclusion expansion. The value
/// is independent of the ordering; tests pin that down.
pub fn count_list_colorings_nbc(g: &Graph, eta: &EdgeOrdering, la: &ListAssignment) -> BigInt {
    assert_eq!(g.n(), la.n(), "assignment size must match the graph");
    let mut total = BigInt::from(0);
    nbc::visit_nbc_sets(g, eta, None, |a| {
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
        let mut product: i128 = 1;
        let mut done = vec![false; g.n()];
        for v in 0..g.n() {
            let root = comp[v];
            if done[root] {
                continue;
            }
            done[root] = true;
            let members: Vec<usize> = (0..g.n()).filter(|&w| comp[w] == root).collect();
            product *= beta(la, &members).expect("nonempty component") as i128;
            if product == 0 {
                break;
            }
        }
        if a.len() % 2 == 1 {
            product = -product;
        }
        total += BigInt::from(product);
    });
    total
}

/// P(G, L) - P(G, k), with P(G, L) computed by both counters (they must
/// agree) and P(G, k) from the deletion-contraction polynomial.
pub fn gap(g: &Graph, eta: &EdgeOrdering, la: &ListAssignment, k: usize) -> Result<BigInt> {
    la.ensure_k_uniform()?;
    if la.k() != k {
        return Err(Error::NotKUniform { k, vertex: 0 });
    }
    let direct = count_list_colorings(g, la)?;
    let via_nbc = count_list_colorings_nbc(g, eta, la);
    if direct != via_nbc {
        return Err(Error::OracleMismatch(format!(
            "P(G,L) backtracking {} != inclusion-exclusion {}",
            direct, via_nbc
        )));
    }
    let p_gk = chromatic::chromatic_deletion_contraction(g).eval_int(&BigInt::from(k));
    Ok(direct - p_gk)
}
