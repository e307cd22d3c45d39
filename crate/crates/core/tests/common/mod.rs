//! Test-only oracles, independent of the library's estimation path.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};

/// Solves `ZᵀZ b = Zᵀy` by Gaussian elimination with partial pivoting,
/// forming the normal equations element by element.
pub fn normal_equations(z: &DMatrix<f64>, y: &DVector<f64>) -> Vec<f64> {
    let (n, k) = z.shape();
    let mut a = vec![vec![0.0; k + 1]; k];
    for i in 0..k {
        for j in 0..k {
            a[i][j] = (0..n).map(|r| z[(r, i)] * z[(r, j)]).sum();
        }
        a[i][k] = (0..n).map(|r| z[(r, i)] * y[r]).sum();
    }
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        for row in col + 1..k {
            let f = a[row][col] / a[col][col];
            let pivot_row = a[col].clone();
            for (x, p) in a[row].iter_mut().zip(&pivot_row).skip(col) {
                *x -= f * p;
            }
        }
    }
    let mut b = vec![0.0; k];
    for i in (0..k).rev() {
        let s: f64 = (i + 1..k).map(|j| a[i][j] * b[j]).sum();
        b[i] = (a[i][k] - s) / a[i][i];
    }
    b
}

/// Partial sums by direct summation of clipped first differences.
pub fn partial_sums_oracle(x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut pos = vec![0.0; x.len()];
    let mut neg = vec![0.0; x.len()];
    for t in 1..x.len() {
        pos[t] = (1..=t).map(|j| (x[j] - x[j - 1]).max(0.0)).sum();
        neg[t] = (1..=t).map(|j| (x[j] - x[j - 1]).min(0.0)).sum();
    }
    (pos, neg)
}

pub fn demo_csv() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/demo.csv")
}
