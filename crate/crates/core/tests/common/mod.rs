//! Shared fixtures for the integration suites: frozen graph catalogs and
//! independent brute-force helpers.

use chromabound::Graph;

/// All connected graphs with n <= 6 vertices, frozen as graph6.
pub fn catalog_n_le_6() -> Vec<Graph> {
    load_catalog(include_str!("../data/connected_n_le_6.g6"))
}

/// All connected graphs with 4 <= m <= 7 edges.
#[allow(dead_code)]
pub fn catalog_m4to7() -> Vec<Graph> {
    load_catalog(include_str!("../data/connected_m4to7.g6"))
}

fn load_catalog(text: &str) -> Vec<Graph> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| Graph::from_graph6(l).expect("catalog line"))
        .collect()
}

/// Chordality via simplicial elimination: repeatedly remove a vertex whose
/// neighborhood is a clique; chordal iff the graph empties out.
#[allow(dead_code)]
pub fn is_chordal(g: &Graph) -> bool {
    let n = g.n();
    let mut adj: Vec<Vec<bool>> = vec![vec![false; n]; n];
    for e in 0..g.m() {
        let (u, v) = g.edge(e);
        adj[u][v] = true;
        adj[v][u] = true;
    }
    let mut alive = vec![true; n];
    for _ in 0..n {
        let mut found = None;
        'scan: for v in 0..n {
            if !alive[v] {
                continue;
            }
            let nbrs: Vec<usize> =
                (0..n).filter(|&u| alive[u] && adj[v][u]).collect();
            for (i, &a) in nbrs.iter().enumerate() {
                for &b in &nbrs[i + 1..] {
                    if !adj[a][b] {
                        continue 'scan;
                    }
                }
            }
            found = Some(v);
            break;
        }
        match found {
            Some(v) => alive[v] = false,
            None => return false,
        }
    }
    true
}

#[allow(dead_code)]
pub fn print_outcome(criterion: usize, label: &str, ok: bool) {
    println!(
        "[criterion {}] {}: {}",
        criterion,
        label,
        if ok { "PASS" } else { "FAIL" }
    );
}
