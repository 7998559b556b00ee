//! Preset grids that regenerate the data behind each plot.

use crate::axis::Axis;
use crate::columns::parse_columns;
use crate::config::{Marker, SweepConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    /// Entanglement over (eta_A, eta_B) at r = 0.85.
    #[value(name = "fig2-ent")]
    Fig2Ent,
    /// Steering in both directions over (eta_A, eta_B) at r = 0.85.
    #[value(name = "fig2-steer")]
    Fig2Steer,
    /// Protocol fidelities against nu for r in [0.5, 2].
    #[value(name = "fig3b")]
    Fig3b,
    /// Best fidelity and secure region over (eta_A, eta_B) at r = 1.
    #[value(name = "fig4-left")]
    Fig4Left,
    /// As fig4-left at r = 2.
    #[value(name = "fig4-right")]
    Fig4Right,
    /// Relative amplification fidelity against gain, QT limit marked.
    #[value(name = "supp-fig1")]
    SuppFig1,
    /// Absolute amplification fidelity, benchmark and cap against gain.
    #[value(name = "supp-fig2")]
    SuppFig2,
    /// Tele-attenuation fidelity against gain, optimum marked.
    #[value(name = "supp-fig3")]
    SuppFig3,
    /// Protocol fidelities against eta_B for several eta_A.
    #[value(name = "supp-fig4")]
    SuppFig4,
}

const EFFICIENCY: (f64, f64, f64) = (0.01, 1.0, 0.01);

fn efficiency_axis() -> Axis {
    Axis::range(EFFICIENCY.0, EFFICIENCY.1, EFFICIENCY.2)
}

fn config(r: Axis, eta_a: Axis, eta_b: Axis, columns: &str) -> SweepConfig {
    SweepConfig {
        r,
        eta_a,
        eta_b,
        gain: None,
        marker: None,
        columns: parse_columns(columns).expect("preset columns are registered"),
    }
}

const FIDELITY_COLUMNS: &str = "nu,F_bk,F_lsatt_opt,F_esa_opt,F_best,mv_lower,mv_upper";

impl Preset {
    pub fn config(self) -> SweepConfig {
        let lossless = || Axis::single(1.0);
        let pure_r = || Axis::List(vec![0.5, 1.0, 2.0]);
        match self {
            Preset::Fig2Ent => config(
                Axis::single(0.85),
                efficiency_axis(),
                efficiency_axis(),
                "nu,delta_ent,entangled",
            ),
            Preset::Fig2Steer => config(
                Axis::single(0.85),
                efficiency_axis(),
                efficiency_axis(),
                "E_BA,E_AB,steer_BA,steer_AB,two_way",
            ),
            Preset::Fig3b => config(
                Axis::range(0.5, 2.0, 0.05),
                efficiency_axis(),
                efficiency_axis(),
                &format!("{FIDELITY_COLUMNS},g_sym,two_way"),
            ),
            Preset::Fig4Left | Preset::Fig4Right => config(
                Axis::single(if self == Preset::Fig4Left { 1.0 } else { 2.0 }),
                efficiency_axis(),
                efficiency_axis(),
                "F_bk,F_lsatt_opt,F_esa_opt,F_best,protocol,region,secure",
            ),
            Preset::SuppFig1 => SweepConfig {
                gain: Some(Axis::range(1.0, 5.0, 0.01)),
                marker: Some(Marker::QtLimit),
                ..config(pure_r(), lossless(), lossless(), "F_rel,F_qat,g_qt_limit,marked")
            },
            Preset::SuppFig2 => SweepConfig {
                gain: Some(Axis::range(1.0, 5.0, 0.01)),
                marker: Some(Marker::QtLimit),
                ..config(pure_r(), lossless(), lossless(), "F_qat,F_bench,F_cap,g_qt_limit,marked")
            },
            Preset::SuppFig3 => SweepConfig {
                gain: Some(Axis::range(0.01, 1.0, 0.01)),
                marker: Some(Marker::AttOptimum),
                ..config(pure_r(), lossless(), lossless(), "F_qat,g_att_opt,F_att_opt,marked")
            },
            Preset::SuppFig4 => config(
                pure_r(),
                Axis::List(vec![1.0, 0.9, 0.5, 0.3, 0.1]),
                Axis::range(0.1, 1.0, 0.01),
                FIDELITY_COLUMNS,
            ),
        }
    }
}
