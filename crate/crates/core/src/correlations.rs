//! Entanglement and EPR-steering witnesses for balanced two-mode states.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::BalancedCovariance;

/// Margin a witness must clear before it certifies anything. Values within
/// this distance of their threshold are reported as boundary cases.
pub const WITNESS_TOL: f64 = 1e-12;

/// Strict violation of `threshold` by more than [`WITNESS_TOL`].
pub fn certifies_below(value: f64, threshold: f64) -> bool {
    value < threshold - WITNESS_TOL
}

/// Which party is steered by which. `BgivenA` is "B steered by A".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    BgivenA,
    AgivenB,
}

impl Direction {
    pub fn reversed(self) -> Self {
        match self {
            Direction::BgivenA => Direction::AgivenB,
            Direction::AgivenB => Direction::BgivenA,
        }
    }

    /// `(steered, steering)` variances for this direction.
    fn variances(self, s: &BalancedCovariance) -> (f64, f64) {
        match self {
            Direction::BgivenA => (s.m(), s.n()),
            Direction::AgivenB => (s.n(), s.m()),
        }
    }
}

/// Symmetric sum-variance witness `¼[Δ²(X_A−X_B) + Δ²(P_A+P_B)]`,
/// which reduces to `(n + m − 2c)/2` in this class.
pub fn duan_parameter(s: &BalancedCovariance) -> f64 {
    ((s.n() + s.m()) - 2.0 * s.c()) / 2.0
}

/// `Δ(X_B − gX_A)·Δ(P_B + gP_A)` for [`Direction::BgivenA`], i.e.
/// `m − 2gc + g²n`; the mirror image for [`Direction::AgivenB`].
pub fn steering_product(s: &BalancedCovariance, g: f64, d: Direction) -> f64 {
    let (steered, steering) = d.variances(s);
    (steered + g * g * steering) - 2.0 * g * s.c()
}

/// Optimal inference gain and the minimized steering product.
pub fn min_steering(s: &BalancedCovariance, d: Direction) -> (f64, f64) {
    let (_, steering) = d.variances(s);
    let gain = s.c() / steering;
    (gain, s.cross_determinant() / steering)
}

/// Gain-normalized entanglement parameter `E(g)/(1 + g²)`.
pub fn ent_parameter(s: &BalancedCovariance, gbar: f64, d: Direction) -> f64 {
    steering_product(s, gbar, d) / (1.0 + gbar * gbar)
}

/// The gain minimizing [`ent_parameter`] in direction `d`: `x + √(x² + 1)`
/// with `x = (m − n)/2c` for `BgivenA`. Rejects uncorrelated states.
pub fn g_sym(s: &BalancedCovariance, d: Direction) -> Result<f64> {
    if !(s.c() > 0.0) {
        return Err(Error::Uncorrelated { c: s.c() });
    }
    let (steered, steering) = d.variances(s);
    let x = (steered - steering) / (2.0 * s.c());
    let root = x.hypot(1.0);
    Ok(if x >= 0.0 { x + root } else { (root - x).recip() })
}

/// Lowest symplectic eigenvalue of the partial transpose,
/// `½(m + n − √((m−n)² + 4c²))`, written as `2(nm − c²)/(m + n + √…)`.
pub fn nu(s: &BalancedCovariance) -> f64 {
    let (n, m, c) = (s.n(), s.m(), s.c());
    2.0 * s.cross_determinant() / (n + m + (n - m).hypot(2.0 * c))
}

/// Lower limit `(g² − 1)/(g² + 1)` on the entanglement parameter of any
/// balanced state whose larger asymmetry gain is `g_sym_val`.
pub fn result1_bound(g_sym_val: f64) -> Result<f64> {
    if !(g_sym_val >= 1.0) || !g_sym_val.is_finite() {
        return Err(Error::OutOfDomain {
            name: "g_sym",
            value: g_sym_val,
            domain: "[1, inf)",
        });
    }
    let g2 = g_sym_val * g_sym_val;
    Ok((g2 - 1.0) / (g2 + 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub delta_ent: f64,
    pub nu: f64,
    #[serde(rename = "g_sym_BA")]
    pub g_sym_ba: f64,
    #[serde(rename = "g_sym_AB")]
    pub g_sym_ab: f64,
    pub g_sym: f64,
    #[serde(rename = "E_BA")]
    pub e_ba: f64,
    #[serde(rename = "E_AB")]
    pub e_ab: f64,
    pub entangled: bool,
    #[serde(rename = "steer_BA")]
    pub steer_ba: bool,
    #[serde(rename = "steer_AB")]
    pub steer_ab: bool,
    pub two_way: bool,
    pub cert_two_way_threshold: f64,
    pub cert_two_way: bool,
    pub cert_one_third: bool,
}

pub fn classify(s: &BalancedCovariance) -> Result<ClassificationReport> {
    let g_sym_ba = g_sym(s, Direction::BgivenA)?;
    let g_sym_ab = g_sym(s, Direction::AgivenB)?;
    let g = g_sym_ba.max(g_sym_ab);
    let nu = nu(s);
    let (_, e_ba) = min_steering(s, Direction::BgivenA);
    let (_, e_ab) = min_steering(s, Direction::AgivenB);
    let steer_ba = certifies_below(e_ba, 1.0);
    let steer_ab = certifies_below(e_ab, 1.0);
    let threshold = 1.0 / (1.0 + g * g);
    Ok(ClassificationReport {
        delta_ent: duan_parameter(s),
        nu,
        g_sym_ba,
        g_sym_ab,
        g_sym: g,
        e_ba,
        e_ab,
        entangled: certifies_below(nu, 1.0),
        steer_ba,
        steer_ab,
        two_way: steer_ba && steer_ab,
        cert_two_way_threshold: threshold,
        cert_two_way: certifies_below(nu, threshold),
        cert_one_third: certifies_below(nu, 1.0 / 3.0),
    })
}
