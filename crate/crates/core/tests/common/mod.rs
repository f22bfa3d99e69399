//! Naive evaluations of the defining sums, kept independent of the library's
//! Gram-matrix implementation.
#![allow(dead_code)]

use hdbf_core::GroupedData;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Groups = Vec<Vec<Vec<f64>>>;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn mean(rows: &[Vec<f64>]) -> Vec<f64> {
    let p = rows[0].len();
    let mut m = vec![0.0; p];
    for r in rows {
        for j in 0..p {
            m[j] += r[j];
        }
    }
    m.iter().map(|x| x / rows.len() as f64).collect()
}

pub fn covariance(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let p = rows[0].len();
    let m = mean(rows);
    let mut s = vec![vec![0.0; p]; p];
    for r in rows {
        for i in 0..p {
            for j in 0..p {
                s[i][j] += (r[i] - m[i]) * (r[j] - m[j]);
            }
        }
    }
    let d = rows.len() as f64 - 1.0;
    s.iter()
        .map(|row| row.iter().map(|x| x / d).collect())
        .collect()
}

/// `tr(AB)` through the explicit product.
pub fn trace_of_product(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let p = a.len();
    let mut t = 0.0;
    for i in 0..p {
        for m in 0..p {
            t += a[i][m] * b[m][i];
        }
    }
    t
}

pub fn trace(a: &[Vec<f64>]) -> f64 {
    (0..a.len()).map(|i| a[i][i]).sum()
}

pub fn sizes(g: &Groups) -> Vec<usize> {
    g.iter().map(Vec::len).collect()
}

pub fn naive_t(g: &Groups) -> f64 {
    let sizes = sizes(g);
    let n: usize = sizes.iter().sum();
    let n = n as f64;
    let mut within = 0.0;
    for rows in g {
        let nl = rows.len() as f64;
        let c = (n - nl) / (n * (nl - 1.0));
        for i in 0..rows.len() {
            for j in 0..rows.len() {
                if i != j {
                    within += c * dot(&rows[i], &rows[j]);
                }
            }
        }
    }
    let means: Vec<Vec<f64>> = g.iter().map(|r| mean(r)).collect();
    let mut between = 0.0;
    for l in 0..g.len() {
        for s in 0..g.len() {
            if l != s {
                between += (sizes[l] * sizes[s]) as f64 / n * dot(&means[l], &means[s]);
            }
        }
    }
    within - between
}

pub fn naive_tch(g: &Groups) -> f64 {
    let k = g.len() as f64;
    let mut within = 0.0;
    for rows in g {
        let nl = rows.len() as f64;
        for i in 0..rows.len() {
            for j in 0..rows.len() {
                if i != j {
                    within += dot(&rows[i], &rows[j]) / (nl * (nl - 1.0));
                }
            }
        }
    }
    let means: Vec<Vec<f64>> = g.iter().map(|r| mean(r)).collect();
    let mut between = 0.0;
    for l in 0..g.len() {
        for s in 0..g.len() {
            if l != s {
                between += dot(&means[l], &means[s]);
            }
        }
    }
    (k - 1.0) * within - between
}

/// `tr(E2) - tr(E1)` from the scatter definitions.
pub fn naive_ts(g: &Groups) -> f64 {
    let k = g.len() as f64;
    let all: Vec<Vec<f64>> = g.iter().flatten().cloned().collect();
    let n = all.len() as f64;
    let grand = mean(&all);
    let mut e1 = 0.0;
    let mut e2 = 0.0;
    for rows in g {
        let m = mean(rows);
        for r in rows {
            e1 += r.iter().zip(&m).map(|(x, y)| (x - y).powi(2)).sum::<f64>();
        }
        e2 += rows.len() as f64
            * m.iter()
                .zip(&grand)
                .map(|(x, y)| (x - y).powi(2))
                .sum::<f64>();
    }
    e2 / (k - 1.0) - e1 / (n - k)
}

pub fn naive_split_trace(rows: &[Vec<f64>]) -> f64 {
    let n1 = rows.len() / 2 + 1;
    trace_of_product(&covariance(&rows[..n1]), &covariance(&rows[n1..]))
}

pub fn naive_bs_trace(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len() as f64;
    let s = covariance(rows);
    let tr = trace(&s);
    (n - 1.0).powi(2) / ((n + 1.0) * (n - 2.0)) * (trace_of_product(&s, &s) - tr * tr / (n - 1.0))
}

fn cross(g: &Groups) -> Vec<Vec<f64>> {
    let covs: Vec<_> = g.iter().map(|r| covariance(r)).collect();
    covs.iter()
        .map(|a| covs.iter().map(|b| trace_of_product(a, b)).collect())
        .collect()
}

pub fn naive_sigma_t(g: &Groups, per_group: fn(&[Vec<f64>]) -> f64) -> f64 {
    let sizes = sizes(g);
    let n = sizes.iter().sum::<usize>() as f64;
    let cross = cross(g);
    let mut acc = 0.0;
    for l in 0..g.len() {
        let nl = sizes[l] as f64;
        acc += nl * (n - nl).powi(2) / (nl - 1.0) * per_group(&g[l]);
        for s in 0..g.len() {
            if s != l {
                acc += nl * sizes[s] as f64 * cross[l][s];
            }
        }
    }
    2.0 / (n * n) * acc
}

pub fn naive_sigma_h(g: &Groups) -> f64 {
    let sizes = sizes(g);
    let k = g.len() as f64;
    let cross = cross(g);
    let mut acc = 0.0;
    for l in 0..g.len() {
        let nl = sizes[l] as f64;
        acc += 2.0 * (k - 1.0).powi(2) * naive_bs_trace(&g[l]) / (nl * (nl - 1.0));
        for s in 0..g.len() {
            if s != l {
                acc += 2.0 * cross[l][s] / (nl * sizes[s] as f64);
            }
        }
    }
    acc
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

pub fn to_data(g: &Groups) -> GroupedData {
    GroupedData::from_rows(g).unwrap()
}

/// Random instance with `k` in 2..=4, `n_l` in 5..=6, `p` in 1..=5.
pub fn random_instance(rng: &mut ChaCha8Rng) -> Groups {
    let k = rng.random_range(2..=4);
    let p = rng.random_range(1..=5);
    (0..k)
        .map(|l| {
            let n = rng.random_range(5..=6);
            (0..n)
                .map(|_| {
                    (0..p)
                        .map(|_| rng.random_range(-3.0..3.0) + l as f64 * 0.5)
                        .collect()
                })
                .collect()
        })
        .collect()
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
