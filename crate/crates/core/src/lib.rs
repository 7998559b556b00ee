//! Gaussian resource states and their continuous-variable teleportation
//! fidelities, with brute-force checks on the closed-form optima.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod correlations;
pub mod error;
pub mod gaussian;
pub mod oracle;
pub mod protocols;

pub use correlations::{
    certifies_below, classify, duan_parameter, ent_parameter, g_sym, min_steering, nu,
    result1_bound, steering_product, ClassificationReport, Direction, WITNESS_TOL,
};
pub use error::{Error, Result};
pub use gaussian::{
    is_physical, lossy_state, lossy_tmss, swap_parties, symplectic_eigenvalues, tmss, tmss_state,
    BalancedCovariance, ChannelEfficiency, SqueezingParam, SymplecticPair,
};
pub use oracle::{minimize_scalar, verify_closed_forms, ScalarOptimum, VerificationReport};
pub use protocols::{
    amp_optimal, amplifier_cap, att_optimal, best_of_three, bk_fidelity, classify_region,
    esa_fidelity, esa_optimal, esa_stationary, gaussian_fidelity, lsatt_fidelity, lsatt_optimal,
    lsatt_stationary, mv_bounds, security_flags, SecurityFlags,
    qat_fidelity, qat_result, qt_benchmark, qt_gain_limit, relative_fidelity, ComplexAmplitude,
    GainOptimum, Protocol, ProtocolResult, RegionLabel,
};
