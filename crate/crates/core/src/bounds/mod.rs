//! Confidence bounds.
//!
//! `vc_deviation` and the UB/LB pair drive A2; `dhm_beta` and
//! `dhm_threshold_vc` give the VC-style inference threshold of DHM; the
//! `local` module holds the data-dependent localized Rademacher bound and
//! `tilde` its distribution-dependent counterpart.

pub mod local;
pub mod rademacher;
pub mod tilde;

pub use local::{hat_bound, hat_diameter, hat_phi, hat_u, BoundValue, LocalBoundConfig};
pub use rademacher::{rademacher_process, RademacherDraw};

/// G(m, delta) = 1/m + sqrt((ln(4/delta) + d ln(2em/d)) / m), infinite when m < d.
pub fn vc_deviation(m: usize, delta: f64, d: usize) -> f64 {
    if m < d || m == 0 {
        return f64::INFINITY;
    }
    let mf = m as f64;
    let df = d as f64;
    let cap = (4.0 / delta).ln() + df * (2.0 * std::f64::consts::E * mf / df).ln();
    1.0 / mf + (cap / mf).sqrt()
}

/// UB(er_Q, |Q|) = min(er_Q + G, 1).
pub fn upper_bound(er_q: f64, m: usize, delta: f64, d: usize) -> f64 {
    (er_q + vc_deviation(m, delta, d)).min(1.0)
}

/// LB(er_Q, |Q|) = max(er_Q - G, 0).
pub fn lower_bound(er_q: f64, m: usize, delta: f64, d: usize) -> f64 {
    (er_q - vc_deviation(m, delta, d)).max(0.0)
}

/// beta_m = sqrt(4 ln(8 m (m+1) S(C, 2m)^2 / delta) / m); infinite at m = 0.
pub fn dhm_beta(m: usize, delta: f64, ln_shatter_2m: f64) -> f64 {
    if m == 0 {
        return f64::INFINITY;
    }
    let mf = m as f64;
    let ln_arg = (8.0 * mf * (mf + 1.0)).ln() + 2.0 * ln_shatter_2m - delta.ln();
    (4.0 * ln_arg / mf).sqrt()
}

/// Delta_m = beta^2 + beta (sqrt(er(h_y)) + sqrt(er(h_{-y}))).
pub fn dhm_threshold_vc(er_y: f64, er_not_y: f64, beta: f64) -> f64 {
    beta * beta + beta * (er_y.sqrt() + er_not_y.sqrt())
}

/// s_m(delta) = ln(20 m^2 log2(3m) / delta); infinite at m = 0.
pub fn confidence_s(m: usize, delta: f64) -> f64 {
    if m == 0 {
        return f64::INFINITY;
    }
    let mf = m as f64;
    (20.0 * mf * mf * (3.0 * mf).log2() / delta).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deviation_is_infinite_below_vc_dimension() {
        assert_eq!(vc_deviation(1, 0.1, 2), f64::INFINITY);
        assert!(vc_deviation(2, 0.1, 2).is_finite());
    }

    #[test]
    fn bounds_are_clamped() {
        assert_eq!(upper_bound(0.9, 5, 0.1, 1), 1.0);
        assert_eq!(lower_bound(0.1, 5, 0.1, 1), 0.0);
    }

    #[test]
    fn beta_infinite_at_zero() {
        assert_eq!(dhm_beta(0, 0.1, 0.0), f64::INFINITY);
    }
}
