use super::{AttributionVector, Game};
use crate::coalition::Coalition;
use crate::error::Result;

/// `w_i = |f(x without i) - f(x)|`.
pub fn occlusion_rank(game: &Game<'_>) -> Result<AttributionVector> {
    let full = Coalition::full(game.len());
    let base = game.value(&full);
    let weights = (0..game.len())
        .map(|i| (game.value(&full.without(i)) - base).abs())
        .collect();
    AttributionVector::new(weights)
}
