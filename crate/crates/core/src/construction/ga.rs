//! Gaussian-approximation density evolution helpers.
//!
//! `φ(x) = 1 − (4πx)^{-1/2} ∫ tanh(z/2) exp(−(z−x)²/(4x)) dz` for `x > 0`,
//! `φ(0) = 1`. It is evaluated with the usual closed-form approximations:
//!
//! * `exp(0.0564x² − 0.4856x)` near the origin,
//! * `exp(−0.4527x^0.86 + 0.0218)` in the mid range,
//! * `√(π/x)·exp(−x/4)·(1 − 10/(7x))` in the tail.
//!
//! The pieces are joined where they intersect, so the resulting function is
//! continuous and strictly decreasing on `[0, ∞)` with `φ(0) = 1`. All
//! internal arithmetic is done on `ln φ` so that means of several thousand
//! do not underflow.

use crate::error::{Error, Result};

const NEAR_A: f64 = 0.0564;
const NEAR_B: f64 = 0.4856;
const MID_ALPHA: f64 = 0.4527;
const MID_GAMMA: f64 = 0.86;
const MID_BETA: f64 = 0.0218;

/// Intersection of the near-origin and mid-range pieces.
pub const NEAR_MID_SWITCH: f64 = 0.867_861_239_085_134_5;
/// Intersection of the mid-range and tail pieces.
pub const MID_TAIL_SWITCH: f64 = 14.394_352_942_168_464;

fn ln_phi_near(x: f64) -> f64 {
    NEAR_A * x * x - NEAR_B * x
}

fn ln_phi_mid(x: f64) -> f64 {
    -MID_ALPHA * x.powf(MID_GAMMA) + MID_BETA
}

fn ln_phi_tail(x: f64) -> f64 {
    0.5 * (std::f64::consts::PI / x).ln() - 0.25 * x + (1.0 - 10.0 / (7.0 * x)).ln()
}

/// `ln φ(x)` for `x ≥ 0` (no argument checks).
pub(crate) fn ln_phi(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x < NEAR_MID_SWITCH {
        ln_phi_near(x)
    } else if x < MID_TAIL_SWITCH {
        ln_phi_mid(x)
    } else {
        ln_phi_tail(x)
    }
}

/// Inverse of [`ln_phi`]: the `x ≥ 0` with `ln φ(x) = t`, for `t ≤ 0`.
pub(crate) fn ln_phi_inv(t: f64) -> f64 {
    if t >= 0.0 {
        return 0.0;
    }
    if t > ln_phi_mid(NEAR_MID_SWITCH) {
        // smaller root of NEAR_A x² − NEAR_B x − t = 0
        let disc = NEAR_B * NEAR_B + 4.0 * NEAR_A * t;
        return 2.0 * (-t) / (NEAR_B + disc.max(0.0).sqrt());
    }
    if t > ln_phi_tail(MID_TAIL_SWITCH) {
        return ((MID_BETA - t) / MID_ALPHA).powf(1.0 / MID_GAMMA);
    }
    // Tail piece has no closed-form inverse; bisect on its monotone log.
    let mut lo = MID_TAIL_SWITCH;
    let mut hi = (-4.0 * t).max(2.0 * MID_TAIL_SWITCH);
    while ln_phi_tail(hi) > t {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if ln_phi_tail(mid) > t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `φ(x)`; decreasing from `φ(0) = 1` towards 0.
pub fn phi(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::invalid("x", format!("phi needs x >= 0, got {x}")));
    }
    Ok(ln_phi(x).exp())
}

/// `φ^{-1}(y)` for `y ∈ (0, 1]`; `phi_inv(1) = 0`.
pub fn phi_inv(y: f64) -> Result<f64> {
    if !(y > 0.0 && y <= 1.0) {
        return Err(Error::invalid("y", format!("phi_inv needs y in (0, 1], got {y}")));
    }
    Ok(ln_phi_inv(y.ln()))
}

/// Mean of the check-node combination of two Gaussian LLRs with means `a`
/// and `b`: `φ^{-1}(1 − (1 − φ(a))(1 − φ(b)))`.
pub fn check_node_mean(a: f64, b: f64) -> f64 {
    let (la, lb) = (ln_phi(a), ln_phi(b));
    let (hi, lo) = if la >= lb { (la, lb) } else { (lb, la) };
    // ln(φa + φb − φaφb) = hi + ln(1 + e^{lo−hi} − e^{lo})
    let t = hi + ((lo - hi).exp() - lo.exp()).ln_1p();
    ln_phi_inv(t.min(0.0))
}


#[cfg(test)]
mod tests {
    use super::oracle::phi_quadrature;
    use super::*;

    #[test]
    fn switch_points_are_piece_intersections() {
        assert!((ln_phi_near(NEAR_MID_SWITCH) - ln_phi_mid(NEAR_MID_SWITCH)).abs() < 1e-12);
        assert!((ln_phi_mid(MID_TAIL_SWITCH) - ln_phi_tail(MID_TAIL_SWITCH)).abs() < 1e-12);
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(0.0).unwrap(), 1.0);
        let p10 = phi(10.0).unwrap();
        assert!(p10 > 0.0 && p10 < 0.1);
        assert!((p10 - phi_quadrature(10.0)).abs() < 1e-3);
        assert!(phi(1.0).unwrap() > phi(2.0).unwrap());
        assert!(phi(-1.0).is_err());
        assert!(phi(f64::NAN).is_err());
    }

    #[test]
    fn phi_tracks_quadrature() {
        for &x in &[0.05, 0.3, 0.8, 1.0, 2.0, 5.0, 9.0, 14.0, 20.0, 40.0] {
            let (approx, exact) = (phi(x).unwrap(), phi_quadrature(x));
            assert!(
                (approx - exact).abs() < 0.01 * exact.max(0.05),
                "x={x}: {approx} vs {exact}"
            );
        }
    }

    #[test]
    fn phi_inv_examples() {
        assert_eq!(phi_inv(1.0).unwrap(), 0.0);
        assert!((phi_inv(phi(5.0).unwrap()).unwrap() - 5.0).abs() < 1e-6);
        assert!((phi_inv(phi(0.1).unwrap()).unwrap() - 0.1).abs() < 1e-6);
        assert!(phi_inv(0.0).is_err());
        assert!(phi_inv(1.5).is_err());
    }

    #[test]
    fn phi_inv_meets_value_tolerance() {
        for i in 1..200 {
            let y = i as f64 / 200.0;
            let x = phi_inv(y).unwrap();
            assert!((phi(x).unwrap() - y).abs() <= 1e-9, "y={y}");
        }
    }

    #[test]
    fn check_node_mean_handles_large_means() {
        let d = check_node_mean(5000.0, 5000.0);
        assert!(d.is_finite() && d < 5000.0 && d > 4990.0);
        assert_eq!(check_node_mean(0.0, 7.0), 0.0);
        let m = check_node_mean(2.0, 2.0);
        assert!(m > 0.0 && m < 2.0);
    }
}
