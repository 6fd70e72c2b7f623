//! Exact maximum-weight assignment (Kuhn–Munkres with potentials).

/// Maximum-weight matching on a complete bipartite graph with `rows <= cols`
/// and weights in `0..=max_weight`. Returns the total weight and, for every
/// row, its assigned column.
///
/// Because all weights are non-negative, a maximum assignment that covers
/// every row is also a maximum partial matching.
pub fn max_weight_assignment(
    rows: usize,
    cols: usize,
    max_weight: u32,
    weight: impl Fn(usize, usize) -> u32,
) -> (u64, Vec<usize>) {
    assert!(rows <= cols, "assignment needs rows <= cols");
    if rows == 0 {
        return (0, Vec::new());
    }
    let cost = |i: usize, j: usize| i64::from(max_weight) - i64::from(weight(i, j));
    const INF: i64 = i64::MAX / 4;
    // 1-based arrays; column 0 is the virtual root.
    let mut u = vec![0i64; rows + 1];
    let mut v = vec![0i64; cols + 1];
    let mut owner = vec![0usize; cols + 1];
    let mut way = vec![0usize; cols + 1];
    let mut minv = vec![INF; cols + 1];
    let mut used = vec![false; cols + 1];
    for i in 1..=rows {
        owner[0] = i;
        let mut j0 = 0usize;
        minv.iter_mut().for_each(|m| *m = INF);
        used.iter_mut().for_each(|x| *x = false);
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = INF;
            let mut j1 = 0usize;
            for j in 1..=cols {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=cols {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0usize; rows];
    for j in 1..=cols {
        if owner[j] != 0 {
            assignment[owner[j] - 1] = j - 1;
        }
    }
    let total = assignment
        .iter()
        .enumerate()
        .map(|(i, &j)| u64::from(weight(i, j)))
        .sum();
    (total, assignment)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(w: &[Vec<u32>]) -> u64 {
        fn go(i: usize, w: &[Vec<u32>], taken: &mut Vec<bool>) -> u64 {
            if i == w.len() {
                return 0;
            }
            let mut best = go(i + 1, w, taken);
            for j in 0..taken.len() {
                if !taken[j] {
                    taken[j] = true;
                    best = best.max(u64::from(w[i][j]) + go(i + 1, w, taken));
                    taken[j] = false;
                }
            }
            best
        }
        let cols = w.first().map_or(0, |r| r.len());
        go(0, w, &mut vec![false; cols])
    }

    #[test]
    fn small_matrices() {
        let w = vec![vec![3, 1, 0], vec![3, 2, 0]];
        let (total, a) = max_weight_assignment(2, 3, 3, |i, j| w[i][j]);
        assert_eq!(total, 5);
        assert_eq!(total, brute(&w));
        assert_ne!(a[0], a[1]);
    }

    #[test]
    fn empty() {
        assert_eq!(max_weight_assignment(0, 4, 5, |_, _| 0).0, 0);
    }

    #[test]
    fn pseudo_random_against_brute_force() {
        let mut seed = 0x2545_f491_u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for _ in 0..300 {
            let rows = (next() % 6) as usize;
            let cols = rows + (next() % 3) as usize;
            let w: Vec<Vec<u32>> = (0..rows)
                .map(|_| (0..cols).map(|_| (next() % 6) as u32).collect())
                .collect();
            let (total, a) = max_weight_assignment(rows, cols, 5, |i, j| w[i][j]);
            assert_eq!(total, brute(&w), "{w:?}");
            let mut seen = a.clone();
            seen.sort_unstable();
            seen.dedup();
            assert_eq!(seen.len(), a.len());
        }
    }
}
