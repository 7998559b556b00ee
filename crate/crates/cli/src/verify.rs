//! Property suite run by `cvtele verify`.

use cvtele::{
    amplifier_cap, best_of_three, certifies_below, classify, lossy_state, mv_bounds, qat_fidelity,
    result1_bound, verify_closed_forms, BalancedCovariance, ClassificationReport,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::axis::Axis;

pub const MAX_EXAMPLES: usize = 10;
const NO_CLONING: f64 = 2.0 / 3.0;
const SLACK_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Density {
    Low,
    #[default]
    Medium,
    High,
}

impl Density {
    fn state_axes(self) -> (Axis, Axis) {
        match self {
            Density::Low => (Axis::range(0.05, 3.0, 0.25), Axis::range(0.01, 1.0, 0.05)),
            Density::Medium => (Axis::range(0.05, 3.0, 0.1), Axis::range(0.01, 1.0, 0.02)),
            Density::High => (Axis::range(0.05, 3.0, 0.05), Axis::range(0.01, 1.0, 0.01)),
        }
    }

    fn oracle_points(self) -> usize {
        match self {
            Density::Low => 4,
            Density::Medium => 6,
            Density::High => 10,
        }
    }

    fn gain_axis(self) -> Axis {
        let step = match self {
            Density::Low => 0.1,
            Density::Medium => 0.05,
            Density::High => 0.01,
        };
        Axis::range(1.0, 5.0, step)
    }
}

/// The entanglement function is a parameter so the suite can be pointed
/// at a deliberately broken one.
#[derive(Clone, Copy)]
pub struct Suite {
    pub density: Density,
    pub nu: fn(&BalancedCovariance) -> f64,
}

impl Suite {
    pub fn new(density: Density) -> Self {
        Self {
            density,
            nu: cvtele::nu,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    pub name: &'static str,
    pub checked: usize,
    pub failures: usize,
    /// Smallest margin seen; negative means violated.
    pub worst_slack: Option<f64>,
    pub pass: bool,
    /// First failing states as `[n, m, c]`.
    pub counterexamples: Vec<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub density: Density,
    pub states: usize,
    pub oracle_states: usize,
    pub all_pass: bool,
    pub properties: Vec<PropertyReport>,
}

#[derive(Clone, Copy)]
struct Check {
    pass: bool,
    slack: Option<f64>,
}

impl Check {
    fn implication(premise: bool, conclusion: bool) -> Option<Check> {
        premise.then_some(Check {
            pass: conclusion,
            slack: None,
        })
    }

    fn margin(slack: f64) -> Check {
        Check {
            pass: slack >= -SLACK_TOL,
            slack: Some(slack),
        }
    }
}

struct Aggregate {
    name: &'static str,
    checked: usize,
    failures: usize,
    worst: Option<f64>,
    examples: Vec<[f64; 3]>,
}

impl Aggregate {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checked: 0,
            failures: 0,
            worst: None,
            examples: Vec::new(),
        }
    }

    fn add(&mut self, s: &BalancedCovariance, c: Option<Check>) {
        let Some(c) = c else { return };
        self.checked += 1;
        if let Some(v) = c.slack {
            self.worst = Some(self.worst.map_or(v, |w| w.min(v)));
        }
        if !c.pass {
            self.failures += 1;
            if self.examples.len() < MAX_EXAMPLES {
                self.examples.push([s.n(), s.m(), s.c()]);
            }
        }
    }

    fn finish(self, note: Option<String>) -> PropertyReport {
        PropertyReport {
            name: self.name,
            checked: self.checked,
            failures: self.failures,
            worst_slack: self.worst,
            pass: self.failures == 0,
            counterexamples: self.examples,
            note,
        }
    }
}

const PROPERTIES: [&str; 6] = [
    "entanglement_asymmetry_bound",
    "two_way_certification_chain",
    "nu_below_one_third_secure",
    "secure_implies_two_way",
    "fidelity_within_nu_bounds",
    "amplifier_cap",
];

fn state_checks(suite: &Suite, gains: &[f64], s: &BalancedCovariance) -> ([Option<Check>; 6], bool, bool) {
    let v = (suite.nu)(s);
    let rep: ClassificationReport = classify(s).expect("sampled states are correlated");
    let best_result = best_of_three(s);
    let (best, secure) = (best_result.fidelity, best_result.secure);

    let bound = result1_bound(rep.g_sym).map(|b| Check::margin(v - b)).ok();

    let both = rep.steer_ab && rep.steer_ba;
    let cert_threshold = certifies_below(v, 1.0 / (1.0 + rep.g_sym * rep.g_sym));
    let cert_third = certifies_below(v, 1.0 / 3.0);
    let chain_ok = (!cert_threshold || both)
        && (!cert_third || rep.two_way)
        && (!rep.two_way || rep.g_sym < std::f64::consts::SQRT_2 + 1e-12);
    let chain = Some(Check {
        pass: chain_ok,
        slack: None,
    });

    let result2 = (v < 1.0 / 3.0).then(|| Check::margin(best - NO_CLONING)).map(|c| Check {
        pass: c.pass && secure,
        ..c
    });
    let result3 = Check::implication(secure, rep.two_way);

    let mv = (v < 1.0).then(|| match mv_bounds(v) {
        Ok((lo, hi)) => Check::margin((best - lo).min(hi - best)),
        Err(_) => Check {
            pass: false,
            slack: None,
        },
    });

    let cap = gains
        .iter()
        .map(|&g| amplifier_cap(g).unwrap_or(f64::NAN) - qat_fidelity(s, g))
        .fold(f64::INFINITY, f64::min);
    let cap = Some(Check::margin(cap));

    ([bound, chain, result2, result3, mv, cap], rep.two_way, secure)
}

fn oracle_grid(k: usize) -> Vec<BalancedCovariance> {
    let at = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (k - 1) as f64;
    let mut out = Vec::with_capacity(k * k * k);
    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                let s = lossy_state(at(0.1, 2.5, i), at(0.05, 1.0, j), at(0.05, 1.0, l))
                    .expect("oracle grid lies in the model domain");
                out.push(s);
            }
        }
    }
    out
}

pub fn run(suite: &Suite) -> VerifyReport {
    let (r_axis, eta_axis) = suite.density.state_axes();
    let etas = eta_axis.values();
    let mut states = Vec::new();
    for r in r_axis.values() {
        for &a in &etas {
            for &b in &etas {
                states.push(lossy_state(r, a, b).expect("grid lies in the model domain"));
            }
        }
    }
    let gains = suite.density.gain_axis().values();

    let results: Vec<_> = states
        .par_iter()
        .map(|s| state_checks(suite, &gains, s))
        .collect();

    let mut aggs: Vec<Aggregate> = PROPERTIES.iter().map(|n| Aggregate::new(n)).collect();
    let (mut two_way, mut two_way_not_secure) = (0usize, 0usize);
    for (s, (checks, tw, secure)) in states.iter().zip(&results) {
        for (agg, c) in aggs.iter_mut().zip(checks.iter()) {
            agg.add(s, *c);
        }
        if *tw {
            two_way += 1;
            if !secure {
                two_way_not_secure += 1;
            }
        }
    }

    let oracle_states = oracle_grid(suite.density.oracle_points());
    let oracle_results: Vec<_> = oracle_states.par_iter().map(verify_closed_forms).collect();
    let mut oracle = Aggregate::new("closed_form_optima");
    for (s, rep) in oracle_states.iter().zip(&oracle_results) {
        let slack = rep
            .entries
            .iter()
            .filter_map(|e| {
                let tol = match e.kind {
                    cvtele::oracle::CheckKind::Argument => cvtele::oracle::ARGUMENT_TOL,
                    cvtele::oracle::CheckKind::Value => cvtele::oracle::VALUE_TOL,
                };
                e.rel_dev.map(|d| (tol - d) / tol)
            })
            .fold(f64::INFINITY, f64::min);
        oracle.add(
            s,
            Some(Check {
                pass: rep.all_pass(),
                slack: slack.is_finite().then_some(slack),
            }),
        );
    }

    let mut properties = vec![oracle.finish(Some(
        "slack is the smallest (tol - rel_dev)/tol over all comparisons".into(),
    ))];
    for agg in aggs {
        let note = match agg.name {
            "secure_implies_two_way" => Some(format!(
                "converse, not asserted: {two_way_not_secure} of {two_way} two-way states are not secure"
            )),
            _ => None,
        };
        properties.push(agg.finish(note));
    }
    let all_pass = properties.iter().all(|p| p.pass);
    VerifyReport {
        density: suite.density,
        states: states.len(),
        oracle_states: oracle_states.len(),
        all_pass,
        properties,
    }
}
