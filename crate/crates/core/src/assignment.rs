//! Minimum-cost perfect matching on a square cost matrix (Hungarian method,
//! shortest augmenting paths with potentials, `O(n^3)`), plus bipartite
//! perfect-matching feasibility via augmenting paths.

/// Returns `assign` with `assign[row] = col` minimizing `sum cost[row][assign[row]]`.
///
/// `cost` must be square with finite entries.
pub fn min_cost_assignment(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    debug_assert!(cost.iter().all(|r| r.len() == n));

    // 1-based potentials; column 0 is a virtual source
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut row_of_col = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for row in 1..=n {
        row_of_col[0] = row;
        let mut col0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[col0] = true;
            let r0 = row_of_col[col0];
            let mut delta = f64::INFINITY;
            let mut col1 = 0;
            for col in 1..=n {
                if used[col] {
                    continue;
                }
                let reduced = cost[r0 - 1][col - 1] - u[r0] - v[col];
                if reduced < minv[col] {
                    minv[col] = reduced;
                    way[col] = col0;
                }
                if minv[col] < delta {
                    delta = minv[col];
                    col1 = col;
                }
            }
            for col in 0..=n {
                if used[col] {
                    u[row_of_col[col]] += delta;
                    v[col] -= delta;
                } else {
                    minv[col] -= delta;
                }
            }
            col0 = col1;
            if row_of_col[col0] == 0 {
                break;
            }
        }
        loop {
            let prev = way[col0];
            row_of_col[col0] = row_of_col[prev];
            col0 = prev;
            if col0 == 0 {
                break;
            }
        }
    }

    let mut assign = vec![0; n];
    for col in 1..=n {
        assign[row_of_col[col] - 1] = col - 1;
    }
    assign
}

/// Whether the bipartite graph `adj[left][right]` has a perfect matching.
pub fn has_perfect_matching(adj: &[Vec<bool>]) -> bool {
    let n = adj.len();
    let mut match_right: Vec<Option<usize>> = vec![None; n];
    for left in 0..n {
        let mut seen = vec![false; n];
        if !augment(left, adj, &mut seen, &mut match_right) {
            return false;
        }
    }
    true
}

fn augment(left: usize, adj: &[Vec<bool>], seen: &mut [bool], match_right: &mut [Option<usize>]) -> bool {
    for right in 0..adj.len() {
        if !adj[left][right] || seen[right] {
            continue;
        }
        seen[right] = true;
        let free = match match_right[right] {
            None => true,
            Some(other) => augment(other, adj, seen, match_right),
        };
        if free {
            match_right[right] = Some(left);
            return true;
        }
    }
    false
}
