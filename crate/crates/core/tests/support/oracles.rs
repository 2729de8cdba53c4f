//! Brute-force reference implementations. Plain loops over dense
//! `Vec<Vec<f64>>` copies, no code shared with the library.

use ndarray::Array2;

const MAX_WORK: usize = 1_000_000;
const MAX_ASSIGNMENT: usize = 7;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct OracleReport {
    pub max_abs_diff: f64,
    pub max_rel_diff: f64,
    pub cases_run: usize,
}

impl OracleReport {
    pub fn record(&mut self, expected: f64, actual: f64) {
        let abs = (expected - actual).abs();
        let rel = if expected == 0.0 {
            abs
        } else {
            abs / expected.abs()
        };
        self.max_abs_diff = self.max_abs_diff.max(abs);
        self.max_rel_diff = self.max_rel_diff.max(rel);
    }

    pub fn finish_case(&mut self) {
        self.cases_run += 1;
    }
}

fn rows(a: &Array2<f64>) -> Vec<Vec<f64>> {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| a[[i, j]]).collect())
        .collect()
}

fn guard(d: usize, n: usize, k: usize) -> Result<(), String> {
    if d.saturating_mul(n).saturating_mul(k) > MAX_WORK {
        return Err(format!(
            "instance {d}x{n}x{k} exceeds the oracle size guard"
        ));
    }
    Ok(())
}

fn product(h: &[Vec<f64>], w: &[Vec<f64>], n: usize) -> Vec<Vec<f64>> {
    let k = w.len();
    h.iter()
        .map(|hrow| {
            (0..n)
                .map(|j| {
                    let mut s = 0.0;
                    for t in 0..k {
                        s += hrow[t] * w[t][j];
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// `Σ_d exp(−‖x_d − (HW)_d‖² / σ²)`.
pub fn oracle_objective(
    x: &Array2<f64>,
    h: &Array2<f64>,
    w: &Array2<f64>,
    sigma: f64,
) -> Result<f64, String> {
    let (d, n) = x.dim();
    guard(d, n, h.ncols())?;
    let (x, h, w) = (rows(x), rows(h), rows(w));
    let mut total = 0.0;
    for i in 0..d {
        let mut r2 = 0.0;
        for j in 0..n {
            let mut y = 0.0;
            for t in 0..w.len() {
                y += h[i][t] * w[t][j];
            }
            r2 += (x[i][j] - y) * (x[i][j] - y);
        }
        total += (-r2 / (sigma * sigma)).exp();
    }
    Ok(total)
}

/// Exhaustive search over all K! cluster-to-topic permutations. Returns the
/// best mapping (`mapping[cluster] = topic`) and its matched count; ties go
/// to the lexicographically first permutation.
pub fn oracle_assignment(confusion: &[Vec<u64>]) -> Result<(Vec<usize>, u64), String> {
    let k = confusion.len();
    if k > MAX_ASSIGNMENT {
        return Err(format!(
            "K = {k} exceeds the exhaustive limit {MAX_ASSIGNMENT}"
        ));
    }
    if confusion.iter().any(|r| r.len() != k) {
        return Err("confusion matrix is not square".into());
    }
    let mut best: Option<(Vec<usize>, u64)> = None;
    let mut perm: Vec<usize> = (0..k).collect();
    loop {
        let score: u64 = perm.iter().enumerate().map(|(c, &t)| confusion[c][t]).sum();
        if best.as_ref().is_none_or(|(_, s)| score > *s) {
            best = Some((perm.clone(), score));
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(best.unwrap_or((Vec::new(), 0)))
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// One weighted multiplicative M-step with row weights `a = −ρ`:
/// `H` first, then `W` from the new `H`. `eps` is added to each denominator.
pub fn oracle_updates(
    x: &Array2<f64>,
    h: &Array2<f64>,
    w: &Array2<f64>,
    rho: &[f64],
    eps: f64,
) -> Result<(Array2<f64>, Array2<f64>), String> {
    let (d, n) = x.dim();
    let k = h.ncols();
    guard(d, n, k)?;
    if rho.len() != d {
        return Err("one auxiliary weight per row required".into());
    }
    let xs = rows(x);
    let mut hs = rows(h);
    let mut ws = rows(w);
    let a: Vec<f64> = rho.iter().map(|r| -r).collect();

    let y = product(&hs, &ws, n);
    let mut h_new = hs.clone();
    for i in 0..d {
        for t in 0..k {
            let mut num = 0.0;
            let mut den = 0.0;
            for j in 0..n {
                num += a[i] * xs[i][j] * ws[t][j];
                den += a[i] * y[i][j] * ws[t][j];
            }
            h_new[i][t] = hs[i][t] * num / (den + eps);
        }
    }
    hs = h_new;

    let y = product(&hs, &ws, n);
    let mut w_new = ws.clone();
    for t in 0..k {
        for j in 0..n {
            let mut num = 0.0;
            let mut den = 0.0;
            for i in 0..d {
                num += hs[i][t] * a[i] * xs[i][j];
                den += hs[i][t] * a[i] * y[i][j];
            }
            w_new[t][j] = ws[t][j] * num / (den + eps);
        }
    }
    ws = w_new;

    let to_array = |v: Vec<Vec<f64>>, r: usize, c: usize| {
        Array2::from_shape_vec((r, c), v.into_iter().flatten().collect()).expect("shape")
    };
    Ok((to_array(hs, d, k), to_array(ws, k, n)))
}

/// Euclidean norm of each row of `X − HW`, from a dense product.
pub fn oracle_row_norms(
    x: &Array2<f64>,
    h: &Array2<f64>,
    w: &Array2<f64>,
) -> Result<Vec<f64>, String> {
    let (d, n) = x.dim();
    guard(d, n, h.ncols())?;
    let (xs, hs, ws) = (rows(x), rows(h), rows(w));
    let y = product(&hs, &ws, n);
    Ok((0..d)
        .map(|i| {
            (0..n)
                .map(|j| (xs[i][j] - y[i][j]).powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .collect())
}
