//! Minimum-weight in-trees over a complete digraph of classes.
//!
//! `rho[i][j]` is the cost of the edge `i -> j`. An in-tree rooted at `r`
//! gives every other node exactly one outgoing edge and reaches `r` from
//! everywhere.

/// Above this many nodes the exhaustive search gives way to Chu-Liu/Edmonds.
pub const EXHAUSTIVE_LIMIT: usize = 8;

/// Minimum in-tree weight for every root.
pub fn stochastic_potentials(rho: &[Vec<f64>]) -> Vec<f64> {
    let n = rho.len();
    (0..n)
        .map(|r| {
            if n <= EXHAUSTIVE_LIMIT {
                min_in_tree_exhaustive(rho, r)
            } else {
                min_in_tree_edmonds(rho, r)
            }
        })
        .collect()
}

/// Exhaustive search over parent assignments with cycle and bound pruning.
pub fn min_in_tree_exhaustive(rho: &[Vec<f64>], root: usize) -> f64 {
    let n = rho.len();
    if n <= 1 {
        return 0.0;
    }
    let nodes: Vec<usize> = (0..n).filter(|&v| v != root).collect();
    let mut parent = vec![usize::MAX; n];
    let mut best = f64::INFINITY;
    search(rho, root, &nodes, 0, 0.0, &mut parent, &mut best);
    best
}

fn creates_cycle(parent: &[usize], root: usize, v: usize, p: usize) -> bool {
    let mut x = p;
    while x != root && x != usize::MAX {
        if x == v {
            return true;
        }
        x = parent[x];
    }
    false
}

fn search(
    rho: &[Vec<f64>],
    root: usize,
    nodes: &[usize],
    depth: usize,
    acc: f64,
    parent: &mut [usize],
    best: &mut f64,
) {
    if acc >= *best {
        return;
    }
    if depth == nodes.len() {
        *best = acc;
        return;
    }
    let v = nodes[depth];
    for p in 0..rho.len() {
        if p == v || creates_cycle(parent, root, v, p) {
            continue;
        }
        parent[v] = p;
        search(rho, root, nodes, depth + 1, acc + rho[v][p], parent, best);
        parent[v] = usize::MAX;
    }
}

/// Chu-Liu/Edmonds on the reversed graph: an in-tree to `root` under `rho`
/// is an out-arborescence from `root` when edge `u -> v` costs `rho[v][u]`.
pub fn min_in_tree_edmonds(rho: &[Vec<f64>], root: usize) -> f64 {
    let n0 = rho.len();
    let mut edges: Vec<(usize, usize, f64)> = Vec::with_capacity(n0 * n0);
    for u in 0..n0 {
        for v in 0..n0 {
            if u != v && v != root && rho[v][u].is_finite() {
                edges.push((u, v, rho[v][u]));
            }
        }
    }
    let mut n = n0;
    let mut root = root;
    let mut total = 0.0;
    loop {
        let mut in_w = vec![f64::INFINITY; n];
        let mut pre = vec![usize::MAX; n];
        for &(u, v, w) in &edges {
            if u != v && w < in_w[v] {
                in_w[v] = w;
                pre[v] = u;
            }
        }
        if (0..n).any(|v| v != root && in_w[v].is_infinite()) {
            return f64::INFINITY;
        }
        in_w[root] = 0.0;
        let mut id = vec![usize::MAX; n];
        let mut mark = vec![usize::MAX; n];
        let mut cycles = 0;
        for v in 0..n {
            total += in_w[v];
            let mut x = v;
            while mark[x] != v && id[x] == usize::MAX && x != root {
                mark[x] = v;
                x = pre[x];
            }
            if x != root && id[x] == usize::MAX {
                let mut y = pre[x];
                while y != x {
                    id[y] = cycles;
                    y = pre[y];
                }
                id[x] = cycles;
                cycles += 1;
            }
        }
        if cycles == 0 {
            break;
        }
        let mut next = cycles;
        for slot in id.iter_mut() {
            if *slot == usize::MAX {
                *slot = next;
                next += 1;
            }
        }
        for e in edges.iter_mut() {
            let v = e.1;
            e.0 = id[e.0];
            e.1 = id[e.1];
            if e.0 != e.1 {
                e.2 -= in_w[v];
            }
        }
        edges.retain(|e| e.0 != e.1);
        n = next;
        root = id[root];
    }
    total
}
