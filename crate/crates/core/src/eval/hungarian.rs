//! Kuhn–Munkres assignment on integer count matrices.

use crate::error::{Error, Result};

/// Optimal one-to-one matching of clusters (rows) to topics (columns).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    /// `mapping[cluster] = topic`.
    pub mapping: Vec<usize>,
    /// Sum of the matched counts.
    pub total: u64,
}

/// Permutation maximizing the total matched count of a square confusion
/// matrix (`confusion[cluster][topic]`).
pub fn hungarian_match(confusion: &[Vec<u64>]) -> Result<Matching> {
    let n = confusion.len();
    if let Some(row) = confusion.iter().find(|r| r.len() != n) {
        return Err(Error::NotSquare {
            rows: n,
            cols: row.len(),
        });
    }
    if n == 0 {
        return Ok(Matching {
            mapping: Vec::new(),
            total: 0,
        });
    }
    let cost = |i: usize, j: usize| -(confusion[i][j] as i128);

    // Shortest augmenting paths with row/column potentials, 1-indexed with
    // column 0 as the virtual source.
    let inf = i128::MAX / 4;
    let mut u = vec![0i128; n + 1];
    let mut v = vec![0i128; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
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
            for j in 0..=n {
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
    let mut mapping = vec![0usize; n];
    for j in 1..=n {
        mapping[owner[j] - 1] = j - 1;
    }
    let total = mapping
        .iter()
        .enumerate()
        .map(|(i, &j)| confusion[i][j])
        .sum();
    Ok(Matching { mapping, total })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_is_identity() {
        let m = hungarian_match(&[vec![5, 1, 0], vec![0, 7, 2], vec![1, 0, 3]]).unwrap();
        assert_eq!(m.mapping, [0, 1, 2]);
        assert_eq!(m.total, 15);
    }

    #[test]
    fn anti_diagonal_swaps() {
        let m = hungarian_match(&[vec![0, 10], vec![10, 0]]).unwrap();
        assert_eq!(m.mapping, [1, 0]);
        assert_eq!(m.total, 20);
    }

    #[test]
    fn rejects_rectangular() {
        assert!(matches!(
            hungarian_match(&[vec![1, 2, 3], vec![4, 5, 6]]),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn handles_trivial_sizes() {
        assert_eq!(hungarian_match(&[]).unwrap().total, 0);
        assert_eq!(hungarian_match(&[vec![4]]).unwrap().mapping, [0]);
    }
}
