//! Uncertainty-scaled resampling of the executed source action.

use rand::Rng;
use rand_distr::StandardNormal;

#[derive(Debug, Clone, PartialEq)]
pub struct ResampleConfig {
    /// Noise scale per unit of ensemble disagreement.
    pub k: f64,
    pub action_low: Vec<f64>,
    pub action_high: Vec<f64>,
}

impl ResampleConfig {
    pub fn new(k: f64, action_low: Vec<f64>, action_high: Vec<f64>) -> Self {
        assert!(k >= 0.0 && k.is_finite(), "k must be finite and >= 0");
        assert_eq!(action_low.len(), action_high.len(), "bound lengths differ");
        assert!(
            action_low.iter().zip(&action_high).all(|(l, h)| l < h),
            "action_low must be below action_high"
        );
        Self {
            k,
            action_low,
            action_high,
        }
    }
}

/// `a_src + ε`, `ε ~ N(0, (k·σ)² I)`, clamped to the action bounds.
///
/// When `k·σ == 0` the input is returned unchanged and no random numbers are drawn.
pub fn resample_action<R: Rng + ?Sized>(
    a_src: &[f64],
    sigma: f64,
    cfg: &ResampleConfig,
    rng: &mut R,
) -> Vec<f64> {
    assert!(sigma >= 0.0, "sigma must be non-negative, got {sigma}");
    assert_eq!(a_src.len(), cfg.action_low.len(), "action width mismatch");
    let scale = cfg.k * sigma;
    if scale == 0.0 {
        return a_src.to_vec();
    }
    a_src
        .iter()
        .zip(cfg.action_low.iter().zip(&cfg.action_high))
        .map(|(a, (lo, hi))| {
            let z: f64 = rng.sample(StandardNormal);
            (a + scale * z).clamp(*lo, *hi)
        })
        .collect()
}
