//! Teleportation fidelities for coherent-state inputs.
//!
//! Every formula teleports from Alice to Bob. Running a protocol with the
//! resource the other way round is expressed through [`swap_parties`].

use serde::Serialize;

use crate::correlations::{certifies_below, duan_parameter, steering_product, Direction, WITNESS_TOL};
use crate::error::{finite, Error, Result};
use crate::gaussian::{swap_parties, BalancedCovariance};

/// No-cloning threshold for coherent states.
pub const NO_CLONING: f64 = 2.0 / 3.0;

/// Classical benchmark for unit-gain teleportation of coherent states.
pub const UNIT_GAIN_BENCHMARK: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ComplexAmplitude {
    pub re: f64,
    pub im: f64,
}

impl ComplexAmplitude {
    pub fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub fn scaled(self, k: f64) -> Self {
        Self::new(k * self.re, k * self.im)
    }

    fn distance_sq(self, other: Self) -> f64 {
        let (dr, di) = (self.re - other.re, self.im - other.im);
        dr * dr + di * di
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Protocol {
    Bk,
    Lsatt,
    Esa,
    Qat,
    Att,
}

impl Protocol {
    pub fn label(self) -> &'static str {
        match self {
            Protocol::Bk => "BK",
            Protocol::Lsatt => "LSATT",
            Protocol::Esa => "ESA",
            Protocol::Qat => "QAT",
            Protocol::Att => "ATT",
        }
    }

    fn unit_gain(self) -> bool {
        matches!(self, Protocol::Bk | Protocol::Lsatt | Protocol::Esa)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProtocolResult {
    pub protocol: Protocol,
    /// Classical gain ḡ applied to Alice's measurement record.
    pub gain: f64,
    pub fidelity: f64,
    /// Fidelity beats the classical benchmark for the map being performed.
    pub qt: bool,
    /// Fidelity beats the no-cloning threshold (unit-gain protocols only).
    pub secure: bool,
    /// The gain-domain precondition of the protocol held.
    pub valid: bool,
}

impl ProtocolResult {
    fn new(protocol: Protocol, gain: f64, fidelity: f64, valid: bool) -> Self {
        let benchmark = if protocol.unit_gain() {
            UNIT_GAIN_BENCHMARK
        } else {
            1.0 / (1.0 + gain * gain)
        };
        Self {
            protocol,
            gain,
            fidelity,
            qt: fidelity > benchmark + WITNESS_TOL,
            secure: protocol.unit_gain() && fidelity > NO_CLONING + WITNESS_TOL,
            valid,
        }
    }
}

/// A closed-form gain optimum together with whether it falls on the side of
/// unity the protocol needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GainOptimum {
    pub gain: f64,
    pub fidelity: f64,
    pub valid: bool,
}

/// Secure-teleportation regions: `I`/`II` secure via late-stage attenuation (without
/// or with BK also secure), `i`/`ii` the same for early-stage amplification,
/// `III` secure only via BK.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RegionLabel {
    #[serde(rename = "I")]
    LsattOnly,
    #[serde(rename = "II")]
    LsattAndBk,
    #[serde(rename = "III")]
    BkOnly,
    #[serde(rename = "i")]
    EsaOnly,
    #[serde(rename = "ii")]
    EsaAndBk,
    #[serde(rename = "none")]
    None,
}

impl RegionLabel {
    pub fn label(self) -> &'static str {
        match self {
            RegionLabel::LsattOnly => "I",
            RegionLabel::LsattAndBk => "II",
            RegionLabel::BkOnly => "III",
            RegionLabel::EsaOnly => "i",
            RegionLabel::EsaAndBk => "ii",
            RegionLabel::None => "none",
        }
    }
}

/// Overlap of a Gaussian output with quadrature variances `sigma_x`,
/// `sigma_p` and mean `beta_out` with the coherent target `beta_tele`.
pub fn gaussian_fidelity(
    sigma_x: f64,
    sigma_p: f64,
    beta_out: ComplexAmplitude,
    beta_tele: ComplexAmplitude,
) -> Result<f64> {
    for (name, v) in [("sigma_X", sigma_x), ("sigma_P", sigma_p)] {
        if finite(name, v)? < 0.0 {
            return Err(Error::OutOfDomain {
                name,
                value: v,
                domain: "[0, inf)",
            });
        }
    }
    let sigma_q = ((1.0 + sigma_x) * (1.0 + sigma_p)).sqrt();
    Ok(2.0 / sigma_q * (-2.0 / sigma_q * beta_out.distance_sq(beta_tele)).exp())
}

/// Tele-amplification `|α⟩ → |ḡα⟩`: `2/(1 + ḡ² + E_{B|A}(ḡ))`.
pub fn qat_fidelity(s: &BalancedCovariance, gbar: f64) -> f64 {
    2.0 / ((1.0 + gbar * gbar) + steering_product(s, gbar, Direction::BgivenA))
}

/// QAT at `ḡ ≥ 1`, tele-attenuation (ATT) below. QT is judged against
/// `1/(1 + ḡ²)`.
pub fn qat_result(s: &BalancedCovariance, gbar: f64) -> Result<ProtocolResult> {
    if !(finite("gbar", gbar)? > 0.0) {
        return Err(Error::OutOfDomain {
            name: "gbar",
            value: gbar,
            domain: "(0, inf)",
        });
    }
    let protocol = if gbar >= 1.0 { Protocol::Qat } else { Protocol::Att };
    Ok(ProtocolResult::new(protocol, gbar, qat_fidelity(s, gbar), true))
}

fn amplifying_gain(gbar: f64) -> Result<f64> {
    if gbar >= 1.0 && gbar.is_finite() {
        Ok(gbar)
    } else {
        Err(Error::OutOfDomain {
            name: "gbar",
            value: gbar,
            domain: "[1, inf)",
        })
    }
}

/// Best fidelity of any classical measure-and-prepare strategy for
/// `|α⟩ → |ḡα⟩`.
pub fn qt_benchmark(gbar: f64) -> Result<f64> {
    let g = amplifying_gain(gbar)?;
    Ok(1.0 / (1.0 + g * g))
}

/// QAT fidelity relative to its ideal value `2/(1 + ḡ²)`; QT iff > ½.
pub fn relative_fidelity(s: &BalancedCovariance, gbar: f64) -> Result<f64> {
    let g = amplifying_gain(gbar)?;
    Ok(qat_fidelity(s, g) * (1.0 + g * g) / 2.0)
}

/// Largest gain for which tele-amplification still beats its classical
/// benchmark, i.e. the upper root of `Ent_{B|A}(ḡ) = 1`. `None` when no
/// gain gives QT.
pub fn qt_gain_limit(s: &BalancedCovariance) -> Option<f64> {
    // ḡ²(n − 1) − 2ḡc + (m − 1) = 0
    let (a, b, c) = (s.n() - 1.0, s.c(), s.m() - 1.0);
    let disc = b * b - a * c;
    if disc < 0.0 || b <= 0.0 {
        return None;
    }
    let q = b + disc.sqrt();
    if a > 0.0 {
        Some(q / a)
    } else {
        None
    }
}

/// Unit-gain Braunstein–Kimble teleportation, `1/(1 + Δ_ent)`.
pub fn bk_fidelity(s: &BalancedCovariance) -> f64 {
    1.0 / (1.0 + duan_parameter(s))
}

/// Late-stage attenuation with attenuation factor `g = 1/ḡ ∈ (0, 1]`.
///
/// Bob's beam splitter (transmission `g²`) turns the teleported variance
/// `σ_T = ḡ² + E_{B|A}(ḡ)` into `2 − g² + n − 2gc + g²m`.
pub fn lsatt_fidelity(s: &BalancedCovariance, g: f64) -> Result<f64> {
    if !(g > 0.0 && g <= 1.0) {
        return Err(Error::OutOfDomain {
            name: "g",
            value: g,
            domain: "(0, 1]",
        });
    }
    Ok(2.0 / ((3.0 - g * g) + steering_product(s, g, Direction::AgivenB)))
}

fn correlated_with_excess(s: &BalancedCovariance, variance: f64, name: &'static str) -> Result<()> {
    if !(s.c() > 0.0) {
        return Err(Error::Uncorrelated { c: s.c() });
    }
    if !(variance > 1.0) {
        return Err(Error::OutOfDomain {
            name,
            value: variance,
            domain: "(1, inf)",
        });
    }
    Ok(())
}

/// Stationary point of the late-stage attenuation fidelity over the
/// classical gain: `ḡ = (m − 1)/c`, `F = 2/(3 + n − c²/(m − 1))`.
/// `valid` is set when `ḡ > 1` (`m > c + 1`).
pub fn lsatt_stationary(s: &BalancedCovariance) -> Result<GainOptimum> {
    correlated_with_excess(s, s.m(), "m")?;
    let (n, m, c) = (s.n(), s.m(), s.c());
    Ok(GainOptimum {
        gain: (m - 1.0) / c,
        fidelity: 2.0 / (3.0 + n - c * c / (m - 1.0)),
        valid: m - 1.0 > c,
    })
}

fn with_bk_fallback(s: &BalancedCovariance, protocol: Protocol, opt: GainOptimum) -> ProtocolResult {
    if opt.valid {
        ProtocolResult::new(protocol, opt.gain, opt.fidelity, true)
    } else {
        ProtocolResult::new(protocol, 1.0, bk_fidelity(s), false)
    }
}

pub fn lsatt_optimal(s: &BalancedCovariance) -> Result<ProtocolResult> {
    let opt = lsatt_stationary(s)?;
    Ok(with_bk_fallback(s, Protocol::Lsatt, opt))
}

/// Early-stage amplification: Alice pre-amplifies by `1/ḡ` and teleports
/// with gain `ḡ ∈ (0, 1)`. Equals late-stage attenuation on the swapped
/// resource.
pub fn esa_fidelity(s: &BalancedCovariance, gbar: f64) -> Result<f64> {
    if !(gbar > 0.0 && gbar < 1.0) {
        return Err(Error::OutOfDomain {
            name: "gbar",
            value: gbar,
            domain: "(0, 1)",
        });
    }
    lsatt_fidelity(&swap_parties(s), gbar)
}

/// `ḡ = c/(n − 1)`, valid when `ḡ < 1` (`n > c + 1`).
pub fn esa_stationary(s: &BalancedCovariance) -> Result<GainOptimum> {
    correlated_with_excess(s, s.n(), "n")?;
    let mirrored = lsatt_stationary(&swap_parties(s))?;
    Ok(GainOptimum {
        gain: mirrored.gain.recip(),
        ..mirrored
    })
}

pub fn esa_optimal(s: &BalancedCovariance) -> Result<ProtocolResult> {
    let opt = esa_stationary(s)?;
    Ok(with_bk_fallback(s, Protocol::Esa, opt))
}

fn unconstrained_qat_optimum(s: &BalancedCovariance) -> (f64, f64) {
    let (n, m, c) = (s.n(), s.m(), s.c());
    let gain = c / (1.0 + n);
    let fidelity = 2.0 * (1.0 + n) / ((m + 1.0) * (1.0 + n) - c * c);
    (gain, fidelity)
}

/// Gain maximizing the absolute QAT fidelity, `c/(1 + n)`, with the
/// fidelity there. Only meaningful for amplification when the gain exceeds 1.
pub fn amp_optimal(s: &BalancedCovariance) -> GainOptimum {
    let (gain, fidelity) = unconstrained_qat_optimum(s);
    GainOptimum {
        gain,
        fidelity,
        valid: gain > 1.0,
    }
}

/// Same stationary point read as tele-attenuation `|α⟩ → |ḡα⟩`, `ḡ < 1`.
/// For a pure two-mode squeezed state it sits at `ḡ = tanh r` with unit
/// fidelity.
pub fn att_optimal(s: &BalancedCovariance) -> GainOptimum {
    let (gain, fidelity) = unconstrained_qat_optimum(s);
    GainOptimum {
        gain,
        fidelity,
        valid: gain < 1.0,
    }
}

/// Fidelity ceiling `1/ḡ²` for any amplifier `|α⟩ → |ḡα⟩`.
pub fn amplifier_cap(gbar: f64) -> Result<f64> {
    let g = amplifying_gain(gbar)?;
    Ok(1.0 / (g * g))
}

/// Lower and upper limits on optimal Gaussian teleportation fidelity at
/// entanglement `ν`: `(1+ν)/(1+3ν) ≤ F ≤ 1/(1+ν)`.
pub fn mv_bounds(nu_val: f64) -> Result<(f64, f64)> {
    if !(nu_val >= 0.0) || !nu_val.is_finite() {
        return Err(Error::OutOfDomain {
            name: "nu",
            value: nu_val,
            domain: "[0, inf)",
        });
    }
    Ok(((1.0 + nu_val) / (1.0 + 3.0 * nu_val), 1.0 / (1.0 + nu_val)))
}

/// Highest fidelity among BK and the valid asymmetric protocols. Ties go
/// to BK, then late-stage attenuation.
pub fn best_of_three(s: &BalancedCovariance) -> ProtocolResult {
    let mut best = ProtocolResult::new(Protocol::Bk, 1.0, bk_fidelity(s), true);
    let candidates = [lsatt_optimal(s), esa_optimal(s)];
    for candidate in candidates.into_iter().flatten() {
        if candidate.valid && candidate.fidelity > best.fidelity {
            best = candidate;
        }
    }
    best
}

/// Which protocols reach secure teleportation for this resource.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SecurityFlags {
    pub bk: bool,
    pub lsatt: bool,
    pub esa: bool,
}

pub fn security_flags(s: &BalancedCovariance) -> SecurityFlags {
    let secure = |r: Result<ProtocolResult>| matches!(r, Ok(p) if p.valid && p.secure);
    SecurityFlags {
        bk: certifies_below(NO_CLONING, bk_fidelity(s)),
        lsatt: secure(lsatt_optimal(s)),
        esa: secure(esa_optimal(s)),
    }
}

pub fn classify_region(s: &BalancedCovariance) -> RegionLabel {
    let f = security_flags(s);
    match (f.lsatt, f.esa, f.bk) {
        (true, _, false) => RegionLabel::LsattOnly,
        (true, _, true) => RegionLabel::LsattAndBk,
        (false, true, false) => RegionLabel::EsaOnly,
        (false, true, true) => RegionLabel::EsaAndBk,
        (false, false, true) => RegionLabel::BkOnly,
        (false, false, false) => RegionLabel::None,
    }
}
