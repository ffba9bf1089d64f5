//! Numerical limit detection for scalar sequences.
//!
//! No finite computation proves a limit, so every verdict carries its
//! evidence window and `Undetermined` is a first-class outcome, not a
//! silent default.

use serde::{Deserialize, Serialize};

/// Detector tolerances. A sequence is accepted as convergent when its
/// last-quarter window has span below `atol + rtol * |mean|` and no drift.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LimitConfig {
    pub atol: f64,
    pub rtol: f64,
}

impl Default for LimitConfig {
    fn default() -> Self {
        Self {
            atol: 1e-3,
            rtol: 1e-4,
        }
    }
}

/// Summary statistics of the evidence window behind a verdict.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WindowStats {
    pub len: usize,
    pub window: usize,
    pub mean: f64,
    pub span: f64,
    pub drift: f64,
    pub last: f64,
}

/// Outcome of limit detection on a real sequence.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum LimitVerdict {
    Finite {
        value: f64,
        evidence: WindowStats,
    },
    Diverging {
        /// Sign of the divergence: `+1` upward, `-1` downward.
        direction: f64,
        /// Crude exponent estimate of `|seq| ~ n^p` over the last half.
        growth_exponent: f64,
        evidence: WindowStats,
    },
    Undetermined {
        evidence: WindowStats,
    },
}

impl LimitVerdict {
    pub fn finite_value(&self) -> Option<f64> {
        match self {
            LimitVerdict::Finite { value, .. } => Some(*value),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, LimitVerdict::Finite { .. })
    }

    pub fn is_diverging(&self) -> bool {
        matches!(self, LimitVerdict::Diverging { .. })
    }

    pub fn evidence(&self) -> &WindowStats {
        match self {
            LimitVerdict::Finite { evidence, .. }
            | LimitVerdict::Diverging { evidence, .. }
            | LimitVerdict::Undetermined { evidence } => evidence,
        }
    }
}

fn window_stats(seq: &[f64], window: usize) -> WindowStats {
    let tail = &seq[seq.len() - window..];
    let mean = tail.iter().sum::<f64>() / window as f64;
    let max = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    let half = window / 2;
    let first_half = tail[..half].iter().sum::<f64>() / half as f64;
    let second_half = tail[half..].iter().sum::<f64>() / (window - half) as f64;
    WindowStats {
        len: seq.len(),
        window,
        mean,
        span: max - min,
        drift: second_half - first_half,
        last: *tail.last().unwrap(),
    }
}

fn monotone_fraction(seq: &[f64]) -> (f64, f64) {
    let mut up = 0usize;
    let mut down = 0usize;
    for w in seq.windows(2) {
        if w[1] > w[0] {
            up += 1;
        } else if w[1] < w[0] {
            down += 1;
        }
    }
    let total = (seq.len() - 1).max(1) as f64;
    (up as f64 / total, down as f64 / total)
}

/// Classifies the tail behaviour of `seq`. Deterministic given `(seq, config)`.
///
/// - `Finite` when the last-quarter window is flat: span below
///   `atol + rtol * |mean|` and no systematic drift;
/// - `Diverging` when the sequence is eventually monotone and the movement of
///   the last quarter has not collapsed relative to the previous quarter;
/// - `Undetermined` otherwise.
///
/// Panics if `seq` has fewer than 32 entries; shorter sequences cannot carry
/// the window structure the verdicts are defined by.
pub fn detect_limit(seq: &[f64], config: &LimitConfig) -> LimitVerdict {
    assert!(
        seq.len() >= 32,
        "detect_limit requires at least 32 samples, got {}",
        seq.len()
    );
    let n = seq.len();
    let window = (n / 4).max(8);
    let evidence = window_stats(seq, window);

    let tol = config.atol + config.rtol * evidence.mean.abs();
    if evidence.span <= tol && evidence.drift.abs() <= 0.5 * tol {
        return LimitVerdict::Finite {
            value: evidence.mean,
            evidence,
        };
    }

    // Divergence test on the last half: eventually monotone, and the last
    // quarter still moves at least a fixed fraction of the quarter before it
    // (rules out geometric convergence that merely missed the span test).
    let half = &seq[n / 2..];
    let (up, down) = monotone_fraction(half);
    let monotone = up >= 0.97 || down >= 0.97;
    let q3 = seq[3 * n / 4];
    let q2 = seq[n / 2];
    let last = seq[n - 1];
    let move_last = last - q3;
    let move_prev = q3 - q2;
    let sustained = move_last.abs() >= 0.3 * move_prev.abs()
        && move_last.abs() > config.atol
        && move_last * move_prev > 0.0;
    if monotone && sustained {
        let direction = if up >= 0.97 { 1.0 } else { -1.0 };
        // |seq(n)| ~ n^p gives p ~ log(seq(n)/seq(n/2)) / log 2 for growing seq.
        let growth_exponent = if last.abs() > 0.0 && q2.abs() > 0.0 && last * q2 > 0.0 {
            (last / q2).abs().ln() / std::f64::consts::LN_2
        } else {
            0.0
        };
        return LimitVerdict::Diverging {
            direction,
            growth_exponent,
            evidence,
        };
    }

    LimitVerdict::Undetermined { evidence }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reciprocal_tail_is_finite_zero() {
        let seq: Vec<f64> = (1..=512).map(|n| 1.0 / n as f64).collect();
        let v = detect_limit(&seq, &LimitConfig::default());
        match v {
            LimitVerdict::Finite { value, .. } => assert!(value.abs() < 1e-2),
            other => panic!("expected Finite, got {other:?}"),
        }
    }

    #[test]
    fn logarithm_is_diverging() {
        let seq: Vec<f64> = (1..=512).map(|n| (n as f64).ln()).collect();
        let v = detect_limit(&seq, &LimitConfig::default());
        assert!(v.is_diverging(), "expected Diverging, got {v:?}");
    }

    #[test]
    fn alternating_sign_is_undetermined() {
        let seq: Vec<f64> = (0..512).map(|n| if n % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let v = detect_limit(&seq, &LimitConfig::default());
        assert!(matches!(v, LimitVerdict::Undetermined { .. }));
    }

    #[test]
    fn geometric_convergence_is_finite() {
        let seq: Vec<f64> = (0..128).map(|n| 3.0 + 0.5_f64.powi(n)).collect();
        let v = detect_limit(&seq, &LimitConfig::default());
        match v {
            LimitVerdict::Finite { value, .. } => assert!((value - 3.0).abs() < 1e-6),
            other => panic!("expected Finite, got {other:?}"),
        }
    }

    #[test]
    fn downward_divergence_keeps_direction() {
        let seq: Vec<f64> = (1..=256).map(|n| -((n as f64).sqrt())).collect();
        match detect_limit(&seq, &LimitConfig::default()) {
            LimitVerdict::Diverging { direction, .. } => assert_eq!(direction, -1.0),
            other => panic!("expected Diverging, got {other:?}"),
        }
    }
}
