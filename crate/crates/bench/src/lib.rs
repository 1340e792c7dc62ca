//! Fixtures shared by the throughput benchmarks.

use vpl_core::bogolyubov::{ModeSystem, OPEN_WINDOW_HORIZON};
use vpl_core::NormalizedFrequency;

/// `n` frequencies spread evenly across the open pair band.
pub fn band_samples(n: usize) -> Vec<NormalizedFrequency> {
    (0..n)
        .map(|i| NormalizedFrequency::new(0.01 + 1.98 * i as f64 / (n - 1) as f64).unwrap())
        .collect()
}

/// Mode oracle of `modes` modes, driven at `nu`, integrated over the open window.
pub fn open_window_oracle(modes: usize, nu: f64) -> ModeSystem {
    ModeSystem::new(modes, 2.0, nu)
        .expect("valid oracle geometry")
        .with_horizon(OPEN_WINDOW_HORIZON)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_valid() {
        assert_eq!(band_samples(5).len(), 5);
        open_window_oracle(24, 0.5).validate().unwrap();
    }
}
