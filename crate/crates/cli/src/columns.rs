//! Output column registry.

use std::fmt;
use std::str::FromStr;

use cvtele::{
    amplifier_cap, att_optimal, best_of_three, bk_fidelity, certifies_below, classify_region,
    duan_parameter, esa_optimal, g_sym, lsatt_optimal, min_steering, mv_bounds, nu, qat_fidelity,
    qt_benchmark, qt_gain_limit, relative_fidelity, BalancedCovariance, Direction,
};

use crate::error::{CliError, Result};

macro_rules! registry {
    ($($variant:ident => $name:literal, $gain:literal, $doc:literal;)*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        pub enum Column {
            $($variant,)*
        }

        impl Column {
            pub const ALL: &'static [Column] = &[$(Column::$variant,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(Column::$variant => $name,)*
                }
            }

            /// Column is evaluated at a classical gain and needs a gain axis.
            pub fn needs_gain(self) -> bool {
                match self {
                    $(Column::$variant => $gain,)*
                }
            }

            pub fn description(self) -> &'static str {
                match self {
                    $(Column::$variant => $doc,)*
                }
            }
        }
    };
}

registry! {
    N => "n", false, "variance of Alice's mode";
    M => "m", false, "variance of Bob's mode";
    C => "c", false, "X correlation <X_A X_B>";
    DeltaEnt => "delta_ent", false, "sum-variance entanglement witness";
    Nu => "nu", false, "lowest symplectic eigenvalue of the partial transpose";
    GSym => "g_sym", false, "asymmetry gain, larger direction (NA when c = 0)";
    EBa => "E_BA", false, "minimized steering product, B steered by A";
    EAb => "E_AB", false, "minimized steering product, A steered by B";
    Entangled => "entangled", false, "nu < 1";
    SteerBa => "steer_BA", false, "E_BA < 1";
    SteerAb => "steer_AB", false, "E_AB < 1";
    TwoWay => "two_way", false, "steer_BA and steer_AB";
    FBk => "F_bk", false, "unit-gain teleportation fidelity";
    FLsattOpt => "F_lsatt_opt", false, "late-stage attenuation at its optimal gain (BK when that gain is below 1)";
    FEsaOpt => "F_esa_opt", false, "early-stage amplification at its optimal gain (BK when that gain is above 1)";
    FBest => "F_best", false, "best of BK, late attenuation and early amplification";
    Protocol => "protocol", false, "protocol achieving F_best";
    MvLower => "mv_lower", false, "(1 + nu)/(1 + 3nu)";
    MvUpper => "mv_upper", false, "1/(1 + nu)";
    Region => "region", false, "secure-teleportation region: I, II, III, i, ii or none";
    Secure => "secure", false, "F_best > 2/3";
    GQtLimit => "g_qt_limit", false, "largest gain with tele-amplification beating 1/(1 + g^2)";
    GAttOpt => "g_att_opt", false, "gain maximizing the absolute |a> -> |ga> fidelity";
    FAttOpt => "F_att_opt", false, "fidelity at g_att_opt";
    FQat => "F_qat", true, "|a> -> |ga> teleportation fidelity at gbar";
    FRel => "F_rel", true, "F_qat relative to its ideal 2/(1 + gbar^2), gbar >= 1";
    FBench => "F_bench", true, "classical benchmark 1/(1 + gbar^2), gbar >= 1";
    FCap => "F_cap", true, "amplifier ceiling 1/gbar^2, gbar >= 1";
    Marked => "marked", true, "row sits at the preset's marked gain";
}

impl FromStr for Column {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Column::ALL
            .iter()
            .copied()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| {
                let known: Vec<&str> = Column::ALL.iter().map(|c| c.name()).collect();
                CliError::usage(format!("unknown column {s:?}; known: {}", known.join(", ")))
            })
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn parse_columns(list: &str) -> Result<Vec<Column>> {
    let cols = list
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(str::parse)
        .collect::<Result<Vec<Column>>>()?;
    if cols.is_empty() {
        return Err(CliError::usage("at least one column is required"));
    }
    Ok(cols)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Num(f64),
    Flag(bool),
    Label(&'static str),
    Na,
}

impl Cell {
    fn num(v: f64) -> Cell {
        if v.is_finite() {
            Cell::Num(v)
        } else {
            Cell::Na
        }
    }

    fn opt(v: Option<f64>) -> Cell {
        v.map_or(Cell::Na, Cell::num)
    }
}

/// A single grid point: the state plus the gain the row is evaluated at.
pub struct Point<'a> {
    pub s: &'a BalancedCovariance,
    pub gbar: Option<f64>,
    pub marked: bool,
}

pub fn evaluate(col: Column, p: &Point<'_>) -> Cell {
    let s = p.s;
    let amplifying = p.gbar.filter(|g| *g >= 1.0);
    match col {
        Column::N => Cell::num(s.n()),
        Column::M => Cell::num(s.m()),
        Column::C => Cell::num(s.c()),
        Column::DeltaEnt => Cell::num(duan_parameter(s)),
        Column::Nu => Cell::num(nu(s)),
        Column::GSym => {
            let both = g_sym(s, Direction::BgivenA).and_then(|a| Ok(a.max(g_sym(s, Direction::AgivenB)?)));
            Cell::opt(both.ok())
        }
        Column::EBa => Cell::num(min_steering(s, Direction::BgivenA).1),
        Column::EAb => Cell::num(min_steering(s, Direction::AgivenB).1),
        Column::Entangled => Cell::Flag(certifies_below(nu(s), 1.0)),
        Column::SteerBa => Cell::Flag(steers(s, Direction::BgivenA)),
        Column::SteerAb => Cell::Flag(steers(s, Direction::AgivenB)),
        Column::TwoWay => Cell::Flag(steers(s, Direction::BgivenA) && steers(s, Direction::AgivenB)),
        Column::FBk => Cell::num(bk_fidelity(s)),
        Column::FLsattOpt => Cell::opt(lsatt_optimal(s).ok().map(|r| r.fidelity)),
        Column::FEsaOpt => Cell::opt(esa_optimal(s).ok().map(|r| r.fidelity)),
        Column::FBest => Cell::num(best_of_three(s).fidelity),
        Column::Protocol => Cell::Label(best_of_three(s).protocol.label()),
        Column::MvLower => Cell::opt(mv_bounds(nu(s)).ok().map(|b| b.0)),
        Column::MvUpper => Cell::opt(mv_bounds(nu(s)).ok().map(|b| b.1)),
        Column::Region => Cell::Label(classify_region(s).label()),
        Column::Secure => Cell::Flag(best_of_three(s).secure),
        Column::GQtLimit => Cell::opt(qt_gain_limit(s)),
        Column::GAttOpt => Cell::num(att_optimal(s).gain),
        Column::FAttOpt => Cell::num(att_optimal(s).fidelity),
        Column::FQat => Cell::opt(p.gbar.map(|g| qat_fidelity(s, g))),
        Column::FRel => Cell::opt(amplifying.and_then(|g| relative_fidelity(s, g).ok())),
        Column::FBench => Cell::opt(amplifying.and_then(|g| qt_benchmark(g).ok())),
        Column::FCap => Cell::opt(amplifying.and_then(|g| amplifier_cap(g).ok())),
        Column::Marked => Cell::Flag(p.marked),
    }
}

fn steers(s: &BalancedCovariance, d: Direction) -> bool {
    certifies_below(min_steering(s, d).1, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique_and_parse() {
        for c in Column::ALL {
            assert_eq!(c.name().parse::<Column>().unwrap(), *c);
            assert_eq!(Column::ALL.iter().filter(|d| d.name() == c.name()).count(), 1);
        }
        assert!("bogus".parse::<Column>().is_err());
        assert!(parse_columns(" , ").is_err());
    }

    #[test]
    fn uncorrelated_gives_na_not_nan() {
        let v = BalancedCovariance::vacuum();
        let p = Point { s: &v, gbar: None, marked: false };
        assert_eq!(evaluate(Column::GSym, &p), Cell::Na);
        assert_eq!(evaluate(Column::FLsattOpt, &p), Cell::Na);
        assert_eq!(evaluate(Column::Nu, &p), Cell::Num(1.0));
        assert_eq!(evaluate(Column::Region, &p), Cell::Label("none"));
        assert_eq!(evaluate(Column::FQat, &p), Cell::Na);
    }
}
