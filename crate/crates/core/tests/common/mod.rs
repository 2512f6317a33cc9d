#![allow(dead_code)]

use std::path::PathBuf;

use ebikecast_core::rng::stream_rng;
use rand_distr::{Distribution, StandardNormal};

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn normals(seed: u64, stream: u64, n: usize) -> Vec<f64> {
    let mut rng = stream_rng(seed, stream);
    (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
}

/// ARMA(1,1) with zero mean and a burn-in of 200 discarded values.
pub fn simulate_arma11(phi: f64, theta: f64, n: usize, seed: u64, stream: u64) -> Vec<f64> {
    let burn = 200;
    let e = normals(seed, stream, n + burn);
    let mut y = vec![0.0; n + burn];
    for t in 1..n + burn {
        y[t] = phi * y[t - 1] + e[t] + theta * e[t - 1];
    }
    y.split_off(burn)
}

pub fn random_walk(seed: u64, stream: u64, n: usize) -> Vec<f64> {
    let mut level = 0.0;
    normals(seed, stream, n)
        .into_iter()
        .map(|e| {
            level += e;
            level
        })
        .collect()
}
