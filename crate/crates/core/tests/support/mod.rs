#![allow(dead_code)]

pub mod oracles;

use corrnmf::matrix::DataMatrix;
use corrnmf::FactorPair;
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random small problem: uniform X on [0, 1), strictly positive factors.
pub struct Instance {
    pub x: Array2<f64>,
    pub h: Array2<f64>,
    pub w: Array2<f64>,
}

impl Instance {
    pub fn random(seed: u64, max_d: usize, max_n: usize, max_k: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = rng.gen_range(2..=max_d);
        let n = rng.gen_range(2..=max_n);
        let k = rng.gen_range(1..=max_k.min(d).min(n));
        let x = Array2::from_shape_simple_fn((d, n), || rng.gen::<f64>());
        let h = Array2::from_shape_simple_fn((d, k), || rng.gen_range(0.05..1.0));
        let w = Array2::from_shape_simple_fn((k, n), || rng.gen_range(0.05..1.0));
        Instance { x, h, w }
    }

    pub fn matrix(&self) -> DataMatrix {
        DataMatrix::from_dense(self.x.clone()).unwrap()
    }

    pub fn factors(&self) -> FactorPair {
        FactorPair::new(self.h.clone(), self.w.clone()).unwrap()
    }
}

pub fn max_abs_diff(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    assert_eq!(a.dim(), b.dim());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
