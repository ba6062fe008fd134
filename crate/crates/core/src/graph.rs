//! Independent sets on small conflict graphs, stored as adjacency bitmasks.

/// Upper limit on vertices for exact search.
pub const EXACT_LIMIT: usize = 25;

/// Builds adjacency masks from a symmetric conflict predicate.
pub fn conflict_masks(n: usize, mut conflict: impl FnMut(usize, usize) -> bool) -> Vec<u64> {
    assert!(n <= 64);
    let mut adj = vec![0u64; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if conflict(i, j) {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    adj
}

/// Maximum independent set by branch and bound. Returns the vertex mask.
///
/// Among sets of maximum size, the first one found when branching on the
/// lowest-index vertex (include before exclude) is returned.
pub fn max_independent_set(adj: &[u64]) -> u64 {
    let n = adj.len();
    assert!(n <= 64);
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best = 0u64;
    branch(adj, all, 0, &mut best);
    best
}

fn branch(adj: &[u64], mut candidates: u64, mut chosen: u64, best: &mut u64) {
    // Vertices with no neighbours among the candidates are always taken.
    loop {
        let mut isolated = 0u64;
        let mut rest = candidates;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if adj[v] & candidates == 0 {
                isolated |= 1 << v;
            }
        }
        if isolated == 0 {
            break;
        }
        chosen |= isolated;
        candidates &= !isolated;
    }
    if candidates == 0 {
        if chosen.count_ones() > best.count_ones() {
            *best = chosen;
        }
        return;
    }
    if chosen.count_ones() + candidates.count_ones() <= best.count_ones() {
        return;
    }
    let v = candidates.trailing_zeros() as usize;
    let bit = 1u64 << v;
    branch(adj, candidates & !bit & !adj[v], chosen | bit, best);
    branch(adj, candidates & !bit, chosen, best);
}

/// Greedy removal: repeatedly drops the vertex incident to the most
/// remaining conflicts (lowest index on ties) until no conflicts remain.
/// Returns the surviving vertex mask.
pub fn greedy_removal(adj: &[u64]) -> u64 {
    let n = adj.len();
    let mut alive = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    loop {
        let mut worst: Option<(usize, u32)> = None;
        for v in 0..n {
            if alive & (1 << v) == 0 {
                continue;
            }
            let deg = (adj[v] & alive).count_ones();
            if deg > 0 && worst.is_none_or(|(_, d)| deg > d) {
                worst = Some((v, deg));
            }
        }
        match worst {
            Some((v, _)) => alive &= !(1 << v),
            None => return alive,
        }
    }
}

/// Same as [`greedy_removal`] for graphs larger than 64 vertices, using
/// adjacency lists.
pub fn greedy_removal_lists(adj: &[Vec<usize>]) -> Vec<bool> {
    let n = adj.len();
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    loop {
        let mut worst: Option<usize> = None;
        for v in 0..n {
            if alive[v] && degree[v] > 0 && worst.is_none_or(|w| degree[v] > degree[w]) {
                worst = Some(v);
            }
        }
        let Some(v) = worst else {
            return alive;
        };
        alive[v] = false;
        for &u in &adj[v] {
            if alive[u] {
                degree[u] -= 1;
            }
        }
        degree[v] = 0;
    }
}

/// Whether `mask` is independent in `adj`.
pub fn is_independent(adj: &[u64], mask: u64) -> bool {
    (0..adj.len()).all(|v| mask & (1 << v) == 0 || adj[v] & mask == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_force(adj: &[u64]) -> u32 {
        let n = adj.len();
        (0u64..(1 << n))
            .filter(|&m| is_independent(adj, m))
            .map(|m| m.count_ones())
            .max()
            .unwrap()
    }

    #[test]
    fn small_graphs() {
        assert_eq!(max_independent_set(&[]), 0);
        // triangle
        let tri = conflict_masks(3, |_, _| true);
        assert_eq!(max_independent_set(&tri).count_ones(), 1);
        // 5-cycle
        let c5 = conflict_masks(5, |i, j| (j - i) == 1 || (j - i) == 4);
        assert_eq!(max_independent_set(&c5).count_ones(), 2);
        // empty graph
        let e = conflict_masks(10, |_, _| false);
        assert_eq!(max_independent_set(&e).count_ones(), 10);
    }

    #[test]
    fn greedy_drops_hub() {
        // star centred at 2
        let star = conflict_masks(5, |i, j| i == 2 || j == 2);
        assert_eq!(greedy_removal(&star), 0b11011);
        let lists: Vec<Vec<usize>> = (0..5)
            .map(|v| (0..5).filter(|&u| star[v] & (1 << u) != 0).collect())
            .collect();
        assert_eq!(
            greedy_removal_lists(&lists),
            vec![true, true, false, true, true]
        );
    }

    proptest! {
        #[test]
        fn exact_matches_enumeration(n in 1usize..13, bits in prop::collection::vec(any::<bool>(), 78)) {
            let mut k = 0;
            let mut pairs = vec![vec![false; n]; n];
            for i in 0..n { for j in (i+1)..n { pairs[i][j] = bits[k % bits.len()]; k += 1; } }
            let adj = conflict_masks(n, |i, j| pairs[i][j]);
            let m = max_independent_set(&adj);
            prop_assert!(is_independent(&adj, m));
            prop_assert_eq!(m.count_ones(), brute_force(&adj));
            let g = greedy_removal(&adj);
            prop_assert!(is_independent(&adj, g));
            prop_assert!(g.count_ones() <= m.count_ones());
        }
    }
}
