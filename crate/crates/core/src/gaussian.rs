//! Balanced two-mode Gaussian states.
//!
//! A state in the (X−P)-balanced class is fully described by three numbers:
//! Alice's quadrature variance `n`, Bob's quadrature variance `m` and the
//! cross-correlation `c = ⟨X_A,X_B⟩ = −⟨P_A,P_B⟩`. Variances are in vacuum
//! units, so the vacuum has `n = m = 1`.
//!
//! The closed-form symplectic spectra live here together with a generic 4×4
//! routine that works on the full covariance matrix. The generic routine is
//! only used to cross-check the closed forms.

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::error::{finite, Error, Result};

/// Absolute slack allowed below 1 on the smallest symplectic eigenvalue.
pub const PHYSICAL_TOL: f64 = 1e-12;

/// Largest squeezing for which `cosh(2r)` is finite.
pub const MAX_SQUEEZING: f64 = 354.0;

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct SqueezingParam(f64);

impl SqueezingParam {
    pub fn new(r: f64) -> Result<Self> {
        let r = finite("r", r)?;
        if !(0.0..=MAX_SQUEEZING).contains(&r) {
            return Err(Error::OutOfDomain {
                name: "r",
                value: r,
                domain: "[0, 354]",
            });
        }
        Ok(Self(r))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct ChannelEfficiency(f64);

impl ChannelEfficiency {
    pub fn new(eta: f64) -> Result<Self> {
        let eta = finite("eta", eta)?;
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::OutOfDomain {
                name: "eta",
                value: eta,
                domain: "[0, 1]",
            });
        }
        Ok(Self(eta))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Covariance record `(n, m, c)` of an (X−P)-balanced two-mode state.
///
/// Values built through [`BalancedCovariance::new`] or the squeezed-state
/// constructors are guaranteed physical. [`BalancedCovariance::unchecked`]
/// exists so that candidate states can be probed with [`is_physical`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BalancedCovariance {
    n: f64,
    m: f64,
    c: f64,
}

impl BalancedCovariance {
    /// Validated constructor. The sign of `c` is dropped.
    pub fn new(n: f64, m: f64, c: f64) -> Result<Self> {
        let s = Self {
            n: finite("n", n)?,
            m: finite("m", m)?,
            c: finite("c", c)?.abs(),
        };
        match physicality_violation(&s) {
            None => Ok(s),
            Some(reason) => Err(Error::NonPhysical {
                n: s.n,
                m: s.m,
                c: s.c,
                reason,
            }),
        }
    }

    /// No validation beyond taking `|c|`.
    pub fn unchecked(n: f64, m: f64, c: f64) -> Self {
        Self { n, m, c: c.abs() }
    }

    pub fn vacuum() -> Self {
        Self {
            n: 1.0,
            m: 1.0,
            c: 0.0,
        }
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `n·m − c²`, evaluated with error-free products so that nearly pure
    /// states keep full relative precision.
    pub fn cross_determinant(&self) -> f64 {
        diff_of_products(self.n, self.m, self.c, self.c)
    }

    /// Full 4×4 covariance matrix in the ordering `(X_A, P_A, X_B, P_B)`.
    pub fn covariance_matrix(&self) -> Matrix4<f64> {
        let (n, m, c) = (self.n, self.m, self.c);
        #[rustfmt::skip]
        let sigma = Matrix4::new(
            n,   0.0, c,   0.0,
            0.0, n,   0.0, -c,
            c,   0.0, m,   0.0,
            0.0, -c,  0.0, m,
        );
        sigma
    }
}

/// `a·b − c·d` with one rounding error in the result (Kahan's algorithm).
fn diff_of_products(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let cd = c * d;
    let err = (-c).mul_add(d, cd);
    let dop = a.mul_add(b, -cd);
    dop + err
}

/// Two-mode squeezed vacuum: `n = m = cosh 2r`, `c = sinh 2r`.
///
/// The stored pair is chosen so that `n² − c²` equals 1 to working precision;
/// plain `cosh`/`sinh` rounding leaves a purity defect that grows like
/// `cosh²(2r)·ε`.
pub fn tmss(r: SqueezingParam) -> BalancedCovariance {
    let r = r.value();
    if r == 0.0 {
        return BalancedCovariance::vacuum();
    }
    let target_gap = (-2.0 * r).exp();
    let n0 = 0.5 * (target_gap.recip() + target_gap);
    // n − c is exact once both sit in the same binade, so fix the gap first
    // and then place n + c = 1/gap around it.
    let gap = n0 - (n0 - target_gap);
    let n = 0.5 * (gap.recip() + gap);
    let c = n - gap;
    BalancedCovariance { n, m: n, c }
}

/// Two-mode squeezed vacuum sent through pure-loss channels of efficiency
/// `eta_a` (Alice) and `eta_b` (Bob).
pub fn lossy_tmss(
    r: SqueezingParam,
    eta_a: ChannelEfficiency,
    eta_b: ChannelEfficiency,
) -> BalancedCovariance {
    let pure = tmss(r);
    let (ea, eb) = (eta_a.value(), eta_b.value());
    let mut s = BalancedCovariance {
        n: ea * pure.n + (1.0 - ea),
        m: eb * pure.m + (1.0 - eb),
        c: (ea * eb).sqrt() * pure.c,
    };
    // Loss channels preserve physicality; rounding in c can push a state on
    // the pure boundary a few ulps outside it.
    let mut steps = 0;
    while !is_physical(&s) && steps < 4096 {
        s.c = s.c.next_down().max(0.0);
        steps += 1;
    }
    s
}

/// Convenience constructor from raw numbers.
pub fn tmss_state(r: f64) -> Result<BalancedCovariance> {
    Ok(tmss(SqueezingParam::new(r)?))
}

/// Convenience constructor from raw numbers.
pub fn lossy_state(r: f64, eta_a: f64, eta_b: f64) -> Result<BalancedCovariance> {
    Ok(lossy_tmss(
        SqueezingParam::new(r)?,
        ChannelEfficiency::new(eta_a)?,
        ChannelEfficiency::new(eta_b)?,
    ))
}

/// Exchange the roles of Alice and Bob.
pub fn swap_parties(s: &BalancedCovariance) -> BalancedCovariance {
    BalancedCovariance {
        n: s.m,
        m: s.n,
        c: s.c,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymplecticPair {
    pub minus: f64,
    pub plus: f64,
}

/// Symplectic eigenvalues of the covariance matrix, or of its partial
/// transpose when `partial_transpose` is set.
///
/// With `Δ = n² + m² ∓ 2c²` and `det σ = (nm − c²)²` the spectrum is
/// `ν±² = (Δ ± √(Δ² − 4 det σ))/2`. The radicand factors as
/// `(n−m)²·((n−m)² + 4(nm − c²))` without transpose and
/// `(n+m)²·((n−m)² + 4c²)` with it, which is what gets evaluated here; the
/// smaller eigenvalue is then recovered from `ν₋ν₊ = |nm − c²|`.
pub fn symplectic_eigenvalues(
    s: &BalancedCovariance,
    partial_transpose: bool,
) -> Result<SymplecticPair> {
    let (n, m, c) = (s.n, s.m, s.c);
    let det = s.cross_determinant();
    let plus = if partial_transpose {
        0.5 * (n + m + (n - m).hypot(2.0 * c))
    } else {
        let radicand = (n - m).mul_add(n - m, 4.0 * det);
        if radicand < 0.0 || !radicand.is_finite() {
            return Err(Error::NonPhysical {
                n,
                m,
                c,
                reason: "(n + m)^2 < 4c^2",
            });
        }
        0.5 * (radicand.sqrt() + (n - m).abs())
    };
    let minus = if plus > 0.0 { det.abs() / plus } else { 0.0 };
    Ok(SymplecticPair { minus, plus })
}

/// Uncertainty-principle gate: `n, m ≥ 1`, `(n+m)² ≥ 4c²` and `ν₋ ≥ 1`
/// up to [`PHYSICAL_TOL`].
pub fn is_physical(s: &BalancedCovariance) -> bool {
    physicality_violation(s).is_none()
}

fn physicality_violation(s: &BalancedCovariance) -> Option<&'static str> {
    let (n, m, c) = (s.n, s.m, s.c);
    if !(n.is_finite() && m.is_finite() && c.is_finite()) {
        return Some("non-finite entry");
    }
    if n < 1.0 || m < 1.0 {
        return Some("quadrature variance below vacuum");
    }
    if n + m < 2.0 * c {
        return Some("(n + m)^2 < 4c^2");
    }
    match symplectic_eigenvalues(s, false) {
        Ok(pair) if pair.minus >= 1.0 - PHYSICAL_TOL => None,
        Ok(_) => Some("smallest symplectic eigenvalue below 1"),
        Err(_) => Some("(n + m)^2 < 4c^2"),
    }
}

/// Symplectic form for the ordering `(X_A, P_A, X_B, P_B)`.
pub fn symplectic_form() -> Matrix4<f64> {
    #[rustfmt::skip]
    let omega = Matrix4::new(
        0.0,  1.0, 0.0,  0.0,
        -1.0, 0.0, 0.0,  0.0,
        0.0,  0.0, 0.0,  1.0,
        0.0,  0.0, -1.0, 0.0,
    );
    omega
}

/// Partial transposition on Bob's mode (`P_B → −P_B`).
pub fn partially_transposed(sigma: &Matrix4<f64>) -> Matrix4<f64> {
    let flip = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, 1.0, 1.0, -1.0));
    flip * sigma * flip
}

/// Symplectic spectrum of an arbitrary 4×4 covariance matrix from the
/// moduli of the eigenvalues of `Ωσ` (they come in pairs `±iν`).
///
/// Returns `(ν₋, ν₊)`. Accuracy is that of a dense eigensolver, roughly
/// `ε·‖σ‖` absolute.
pub fn generic_symplectic_spectrum(sigma: &Matrix4<f64>) -> (f64, f64) {
    let product = symplectic_form() * sigma;
    let mut moduli: Vec<f64> = product
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .collect();
    moduli.sort_by(|a, b| a.total_cmp(b));
    (
        0.5 * (moduli[0] + moduli[1]),
        0.5 * (moduli[2] + moduli[3]),
    )
}
