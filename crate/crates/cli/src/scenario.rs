//! Scenario files: a strict TOML description of one parameter sweep.

use std::path::PathBuf;

use coupled_tls::rates::{chb_rates, ihb_rates, ChbBathConfig, IhbBathConfig, RateSet};
use coupled_tls::spectrum::{build_eigenbasis, EigenBasis, SystemParams};
use coupled_tls::steady::scans::{exclude_resonance, linspace};
use coupled_tls::PhysicsError;
use serde::{Deserialize, Serialize};

use crate::error::ValidationError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BathKind {
    #[serde(alias = "IHB")]
    Ihb,
    #[serde(alias = "CHB")]
    Chb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variable {
    Theta,
    #[serde(alias = "T")]
    Temperature,
    Xi,
}

impl Variable {
    pub fn key(self) -> &'static str {
        match self {
            Variable::Theta => "theta",
            Variable::Temperature => "temperature",
            Variable::Xi => "xi",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega2: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemperatureSection {
    #[serde(default, alias = "T1", skip_serializing_if = "Option::is_none")]
    pub t1: Option<f64>,
    #[serde(default, alias = "T2", skip_serializing_if = "Option::is_none")]
    pub t2: Option<f64>,
    #[serde(default, alias = "T", skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
}

/// `gamma1`, `gamma2` are the couplings at `ε1`, `ε2`, shared by both TLSs.
/// The per-channel fields split them by TLS for a common bath.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma1_e1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma2_e1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma1_e2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma2_e2: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub variable: Variable,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    #[serde(default)]
    pub exclude_resonance: bool,
}

/// A second, discrete parameter; rows run over `values × sweep`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesSection {
    pub variable: Variable,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default)]
    pub seed: u64,
    pub bath_kind: BathKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau33_0: Option<f64>,
    pub system: SystemSection,
    #[serde(default, skip_serializing_if = "is_default")]
    pub temperatures: TemperatureSection,
    #[serde(default, skip_serializing_if = "is_default")]
    pub couplings: CouplingSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<SeriesSection>,
    pub sweep: SweepSection,
    #[serde(default, skip_serializing)]
    pub output: Option<OutputSection>,
}

fn is_default<T: Default + PartialEq>(x: &T) -> bool {
    *x == T::default()
}

/// One row of the sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub series: Option<f64>,
    pub value: f64,
}

/// Everything the physics layer needs at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Model {
    pub params: SystemParams,
    pub basis: EigenBasis,
    pub rates: RateSet,
    pub tau33_0: f64,
}

pub fn parse(text: &str) -> Result<Scenario, ValidationError> {
    let de = toml::Deserializer::parse(text).map_err(|e| ValidationError::new("scenario", e.message()))?;
    let scenario: Scenario = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { "scenario".to_string() } else { path };
        ValidationError::new(path, e.into_inner().message())
    })?;
    scenario.validate()?;
    Ok(scenario)
}

const DEFAULT_GAMMA: f64 = 1.0;

impl Scenario {
    fn varies(&self, v: Variable) -> bool {
        self.sweep.variable == v || self.series.as_ref().is_some_and(|s| s.variable == v)
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        let err = |p: &str, m: &str| Err(ValidationError::new(p, m));
        let sw = &self.sweep;
        if sw.points < 2 {
            return err("sweep.points", "must be at least 2");
        }
        if !(sw.min.is_finite() && sw.max.is_finite() && sw.min < sw.max) {
            return err("sweep", "need finite min < max");
        }
        if sw.exclude_resonance && sw.variable != Variable::Theta {
            return err("sweep.exclude_resonance", "only applies to a theta sweep");
        }
        if let Some(series) = &self.series {
            if series.variable == sw.variable {
                return err("series.variable", "must differ from sweep.variable");
            }
            if series.values.is_empty() || series.values.iter().any(|v| !v.is_finite()) {
                return err("series.values", "need at least one finite value");
            }
        }

        let sys = &self.system;
        if self.varies(Variable::Theta) && sys.theta.is_some() {
            return err("system.theta", "must be omitted when theta is varied");
        }
        if self.varies(Variable::Xi) && sys.xi.is_some() {
            return err("system.xi", "must be omitted when xi is varied");
        }
        if !self.varies(Variable::Xi) && sys.xi.is_none() {
            return err("system.xi", "required");
        }
        if self.varies(Variable::Theta) || sys.theta.is_some() {
            if sys.omega_m.is_none() {
                return err("system.omega_m", "required with a mixing angle");
            }
            if sys.omega1.is_some() || sys.omega2.is_some() {
                return err("system", "give either omega_m with theta or omega1 with omega2");
            }
        } else {
            if sys.omega1.is_none() || sys.omega2.is_none() {
                return err("system", "need omega1 and omega2, or omega_m with theta");
            }
            if sys.omega_m.is_some() {
                return err("system.omega_m", "not used without a mixing angle");
            }
        }

        let t = &self.temperatures;
        let any_t = t.t.is_some() || t.t1.is_some() || t.t2.is_some();
        if self.varies(Variable::Temperature) {
            if any_t {
                return err("temperatures", "must be omitted when temperature is varied");
            }
        } else {
            match self.bath_kind {
                BathKind::Ihb => match (t.t1, t.t2, t.t) {
                    (Some(_), Some(_), None) | (None, None, Some(_)) => {}
                    _ => return err("temperatures", "independent baths need t1 and t2, or a single t"),
                },
                BathKind::Chb => {
                    if t.t.is_none() || t.t1.is_some() || t.t2.is_some() {
                        return err("temperatures", "a common bath needs t only");
                    }
                }
            }
        }

        let c = &self.couplings;
        let channels = [c.gamma1_e1, c.gamma2_e1, c.gamma1_e2, c.gamma2_e2];
        let n_channels = channels.iter().filter(|g| g.is_some()).count();
        match self.bath_kind {
            BathKind::Ihb if n_channels > 0 => return err("couplings", "per-channel couplings need a common bath"),
            BathKind::Chb if n_channels != 0 && n_channels != 4 => {
                return err("couplings", "give all four per-channel couplings or none")
            }
            BathKind::Chb if n_channels == 4 && (c.gamma1.is_some() || c.gamma2.is_some()) => {
                return err("couplings", "gamma1/gamma2 conflict with per-channel couplings")
            }
            _ => {}
        }

        match (self.bath_kind, self.tau33_0) {
            (BathKind::Ihb, Some(_)) => return err("tau33_0", "only used with a common bath"),
            (_, Some(x)) if !(0.0..=1.0).contains(&x) => return err("tau33_0", "must lie in [0, 1]"),
            _ => {}
        }

        for p in self.points() {
            self.model(&p).map_err(|e| ValidationError::new(field_of(&e), format!("{e} at {}", self.label(&p))))?;
        }
        Ok(())
    }

    pub fn sweep_values(&self) -> Vec<f64> {
        let grid = linspace(self.sweep.min, self.sweep.max, self.sweep.points);
        if self.sweep.exclude_resonance {
            exclude_resonance(&grid)
        } else {
            grid
        }
    }

    pub fn points(&self) -> Vec<Point> {
        let values = self.sweep_values();
        let series: Vec<Option<f64>> = match &self.series {
            Some(s) => s.values.iter().map(|&v| Some(v)).collect(),
            None => vec![None],
        };
        series
            .into_iter()
            .flat_map(|s| values.iter().map(move |&value| Point { series: s, value }))
            .collect()
    }

    pub fn label(&self, p: &Point) -> String {
        let mut s = format!("{} = {}", self.sweep.variable.key(), p.value);
        if let (Some(series), Some(v)) = (&self.series, p.series) {
            s.push_str(&format!(" ({} = {v})", series.variable.key()));
        }
        s
    }

    pub fn model(&self, p: &Point) -> Result<Model, PhysicsError> {
        let sys = &self.system;
        let (mut theta, mut xi) = (sys.theta, sys.xi);
        let (mut t1, mut t2) = match (self.temperatures.t1, self.temperatures.t2, self.temperatures.t) {
            (_, _, Some(t)) => (Some(t), Some(t)),
            (a, b, None) => (a, b),
        };
        let mut assign = |var: Variable, v: f64| match var {
            Variable::Theta => theta = Some(v),
            Variable::Xi => xi = Some(v),
            Variable::Temperature => {
                t1 = Some(v);
                t2 = Some(v);
            }
        };
        if let (Some(series), Some(v)) = (&self.series, p.series) {
            assign(series.variable, v);
        }
        assign(self.sweep.variable, p.value);

        let xi = xi.expect("validated");
        let params = match theta {
            Some(th) => SystemParams::from_mixing_angle(sys.omega_m.expect("validated"), xi, th)?,
            None => SystemParams::new(sys.omega1.expect("validated"), sys.omega2.expect("validated"), xi)?,
        };
        let basis = build_eigenbasis(&params)?;
        let (t1, t2) = (t1.expect("validated"), t2.expect("validated"));
        let c = &self.couplings;
        let g1 = c.gamma1.unwrap_or(DEFAULT_GAMMA);
        let g2 = c.gamma2.unwrap_or(DEFAULT_GAMMA);
        let rates = match self.bath_kind {
            BathKind::Ihb => RateSet::Ihb(ihb_rates(&basis, &IhbBathConfig::new(t1, t2, g1, g2)?)),
            BathKind::Chb => {
                let bath = match (c.gamma1_e1, c.gamma2_e1, c.gamma1_e2, c.gamma2_e2) {
                    (Some(a), Some(b), Some(d), Some(e)) => ChbBathConfig::new(t1, a, b, d, e)?,
                    _ => ChbBathConfig::equal_couplings(t1, g1, g2)?,
                };
                RateSet::Chb(chb_rates(&basis, &bath))
            }
        };
        Ok(Model {
            params,
            basis,
            rates,
            tau33_0: self.tau33_0.unwrap_or(0.0),
        })
    }
}

fn field_of(e: &PhysicsError) -> &'static str {
    match e {
        PhysicsError::InvalidParameter { name, .. } | PhysicsError::Range { name, .. } => match *name {
            "T" | "T1" | "T2" => "temperatures",
            "tau33_0" => "tau33_0",
            n if n.starts_with("gamma") => "couplings",
            _ => "system",
        },
        _ => "system",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG2: &str = include_str!("../scenarios/fig2.toml");

    #[test]
    fn figure_scenarios_parse() {
        let s = parse(FIG2).unwrap();
        assert_eq!(s.bath_kind, BathKind::Ihb);
        assert_eq!(s.points().len(), 401);
    }

    #[test]
    fn unknown_keys_name_their_path() {
        let text = FIG2.replace("xi = 10.0", "xi = 10.0\nxii = 1.0");
        let e = parse(&text).unwrap_err();
        assert_eq!(e.path, "system.xii");
        assert!(e.message.contains("unknown field"));
        let e = parse(&format!("colour = 1\n{FIG2}")).unwrap_err();
        assert_eq!(e.path, "colour");
    }

    #[test]
    fn swept_field_must_be_absent() {
        let text = FIG2.replace("xi = 10.0", "xi = 10.0\ntheta = 1.0");
        assert_eq!(parse(&text).unwrap_err().path, "system.theta");
    }

    #[test]
    fn non_positive_eps2_is_rejected() {
        let text = include_str!("../scenarios/fig4.toml").replace("omega2 = 20.0", "omega2 = 1.0");
        let e = parse(&text).unwrap_err();
        assert_eq!(e.path, "system");
        assert!(e.message.contains("eps2"), "{e}");
        assert!(e.message.contains("xi = 6"), "{e}");
    }

    #[test]
    fn series_expands_outer() {
        let s = parse(include_str!("../scenarios/fig4.toml")).unwrap();
        let p = s.points();
        assert_eq!(p.len(), 5 * 150);
        assert_eq!(p[0].series, Some(2.0));
        assert_eq!(p[150].series, Some(4.0));
        let m = s.model(&p[0]).unwrap();
        assert_eq!(m.params.xi(), 2.0);
    }

    #[test]
    fn chb_temperature_rules() {
        let text = include_str!("../scenarios/fig5.toml").replace("t = 10.0", "t1 = 10.0\nt2 = 5.0");
        assert_eq!(parse(&text).unwrap_err().path, "temperatures");
    }

    #[test]
    fn uppercase_temperature_spellings() {
        let text = FIG2.replace("t1 = 5.0", "T1 = 5.0").replace("t2 = 10.0", "T2 = 10.0");
        assert_eq!(parse(&text).unwrap(), parse(FIG2).unwrap());
        let s = parse(&include_str!("../scenarios/fig4.toml").replace("\"temperature\"", "\"T\"")).unwrap();
        assert_eq!(s.sweep.variable, Variable::Temperature);
    }

    #[test]
    fn too_few_points() {
        let text = FIG2.replace("points = 401", "points = 1");
        assert_eq!(parse(&text).unwrap_err().path, "sweep.points");
    }
}
