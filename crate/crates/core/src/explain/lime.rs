//! Local linear surrogate fitted on random deletion masks.

use nalgebra::{DMatrix, DVector};
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AttributionVector, ExplainerConfig, Game};
use crate::coalition::Coalition;
use crate::error::{Error, Result};

/// Draws `cfg.n_samples` keep-masks (deletion count uniform in `0..=n`,
/// deleted positions uniform without replacement), weights each sample by
/// `exp(-d² / width²)` with `d` the deleted fraction, and returns the
/// coefficients of a weighted ridge regression of the masked prediction on
/// the keep indicators. The intercept is not penalized.
pub fn lime_rank(game: &Game<'_>, cfg: &ExplainerConfig) -> Result<AttributionVector> {
    let n = game.len();
    if n == 0 {
        return Err(Error::InvalidExplainerConfig("cannot explain an empty instance".into()));
    }
    let width = cfg.kernel_width_for(n);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let m = cfg.n_samples;
    let mut z = DMatrix::<f64>::zeros(m, n);
    let mut y = DVector::<f64>::zeros(m);
    let mut sw = DVector::<f64>::zeros(m);
    for s in 0..m {
        let k = rng.random_range(0..=n);
        let mut keep = Coalition::full(n);
        for p in index::sample(&mut rng, n, k) {
            keep.remove(p);
        }
        for p in keep.iter() {
            z[(s, p)] = 1.0;
        }
        y[s] = game.value(&keep);
        let d = k as f64 / n as f64;
        sw[s] = (-(d * d) / (width * width)).exp();
    }

    let total = sw.sum();
    let z_mean = z.tr_mul(&sw) / total;
    let y_mean = y.dot(&sw) / total;
    let mut zc = z;
    for s in 0..m {
        let root = sw[s].sqrt();
        for p in 0..n {
            zc[(s, p)] = (zc[(s, p)] - z_mean[p]) * root;
        }
        y[s] = (y[s] - y_mean) * root;
    }
    let mut gram = zc.tr_mul(&zc);
    for p in 0..n {
        gram[(p, p)] += cfg.ridge_lambda;
    }
    let rhs = zc.tr_mul(&y);
    let coef = match gram.clone().cholesky() {
        Some(ch) => ch.solve(&rhs),
        None => gram
            .svd(true, true)
            .solve(&rhs, 1e-12)
            .map_err(|e| Error::InvalidExplainerConfig(format!("surrogate fit failed: {e}")))?,
    };
    AttributionVector::new(coef.iter().copied().collect())
}
