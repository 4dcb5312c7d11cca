use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gof::RoutingScheme;
use crate::rsa::FirstFitOrder;
use crate::topology::{load_topology, BuiltinTopology, Node, Topology};
use crate::traffic::{load_traffic, uniform_distribution, weighted_distribution, TrafficDistribution};

pub const DEFAULT_DC_MASS: f64 = 0.45;

/// A built-in topology name or a path to a topology file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum TopologySpec {
    Builtin(BuiltinTopology),
    File(PathBuf),
}

impl TopologySpec {
    pub fn load(&self) -> Result<Topology> {
        match self {
            TopologySpec::Builtin(b) => Ok(b.build()),
            TopologySpec::File(p) => load_topology(p),
        }
    }
}

impl FromStr for TopologySpec {
    type Err = Error;

    /// Built-in names win; anything else is read as a file path.
    fn from_str(s: &str) -> Result<Self> {
        match s.parse::<BuiltinTopology>() {
            Ok(b) => Ok(TopologySpec::Builtin(b)),
            Err(_) => Ok(TopologySpec::File(PathBuf::from(s))),
        }
    }
}

impl fmt::Display for TopologySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopologySpec::Builtin(b) => f.write_str(b.name()),
            TopologySpec::File(p) => write!(f, "{}", p.display()),
        }
    }
}

impl From<TopologySpec> for String {
    fn from(t: TopologySpec) -> Self {
        t.to_string()
    }
}

impl TryFrom<String> for TopologySpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Traffic model selector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TrafficSpec {
    Uniform,
    Weighted { dc: (Node, Node), dc_mass: f64 },
    File { path: PathBuf },
}

impl TrafficSpec {
    pub fn build(&self, t: &Topology) -> Result<TrafficDistribution> {
        match self {
            TrafficSpec::Uniform => uniform_distribution(t),
            TrafficSpec::Weighted { dc, dc_mass } => weighted_distribution(t, *dc, *dc_mass),
            TrafficSpec::File { path } => load_traffic(t.node_count(), path),
        }
    }

    /// Parses `uniform`, `weighted` (needs `dc`), or `file:<path>`.
    pub fn parse(text: &str, dc: Option<(Node, Node)>, dc_mass: Option<f64>) -> Result<Self> {
        match text {
            "uniform" => Ok(TrafficSpec::Uniform),
            "weighted" => Ok(TrafficSpec::Weighted {
                dc: dc.ok_or_else(|| Error::InvalidParameter("weighted traffic needs --dc".into()))?,
                dc_mass: dc_mass.unwrap_or(DEFAULT_DC_MASS),
            }),
            other => match other.strip_prefix("file:") {
                Some(path) => Ok(TrafficSpec::File { path: path.into() }),
                None => Err(Error::InvalidParameter(format!("unknown traffic spec '{other}'"))),
            },
        }
    }
}

/// How spectrum is assigned after routing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum AssignmentMethod {
    FirstFit { order: FirstFitOrder },
    /// Greedy coloring, then class stacking.
    ColoringStack,
}

impl Default for AssignmentMethod {
    fn default() -> Self {
        AssignmentMethod::FirstFit {
            order: FirstFitOrder::DescendingWeight,
        }
    }
}

/// One simulation scenario. Defaults: K = 2, 1000 requests, 100
/// replications, bandwidth 1..=4 slices, guard band 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioConfig {
    pub name: String,
    pub topology: TopologySpec,
    pub traffic: TrafficSpec,
    pub k: usize,
    pub scheme: RoutingScheme,
    pub n_requests: usize,
    pub replications: usize,
    pub alpha: u32,
    pub beta: u32,
    pub guard_band: u32,
    pub seed: u64,
    pub assignment: AssignmentMethod,
}

pub const DEFAULT_SEED: u64 = 20_190_817;

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            name: "custom".into(),
            topology: TopologySpec::Builtin(BuiltinTopology::Ring12),
            traffic: TrafficSpec::Uniform,
            k: 2,
            scheme: RoutingScheme::vertex(2, 0).expect("valid"),
            n_requests: 1000,
            replications: 100,
            alpha: 1,
            beta: 4,
            guard_band: 1,
            seed: DEFAULT_SEED,
            assignment: AssignmentMethod::default(),
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidParameter("K must be positive".into()));
        }
        if self.scheme.k() != self.k {
            return Err(Error::DimensionMismatch {
                expected: self.k,
                actual: self.scheme.k(),
            });
        }
        if self.replications == 0 {
            return Err(Error::InvalidParameter("need at least one replication".into()));
        }
        if self.n_requests == 0 {
            return Err(Error::InvalidParameter("need at least one request".into()));
        }
        if self.alpha == 0 || self.alpha > self.beta {
            return Err(Error::InvalidParameter(format!(
                "bandwidth range [{},{}] must satisfy 1 <= alpha <= beta",
                self.alpha, self.beta
            )));
        }
        Ok(())
    }

    pub fn with_p1(mut self, p1: f64) -> Result<Self> {
        if self.k != 2 {
            return Err(Error::InvalidParameter("p1 sweeps need K = 2".into()));
        }
        self.scheme = RoutingScheme::two_path(p1)?;
        Ok(self)
    }
}

/// The six reference scenarios: three topologies under uniform and
/// data-center traffic.
pub fn scenario_presets() -> Vec<ScenarioConfig> {
    let make = |name: &str, topo: BuiltinTopology, traffic: TrafficSpec| ScenarioConfig {
        name: name.into(),
        topology: TopologySpec::Builtin(topo),
        traffic,
        ..ScenarioConfig::default()
    };
    let weighted = |a, b| TrafficSpec::Weighted {
        dc: (a, b),
        dc_mass: DEFAULT_DC_MASS,
    };
    vec![
        make("R-U", BuiltinTopology::Ring12, TrafficSpec::Uniform),
        make("NSF-U", BuiltinTopology::Nsfnet14, TrafficSpec::Uniform),
        make("NJ-U", BuiltinTopology::Njlata11, TrafficSpec::Uniform),
        make("R-W", BuiltinTopology::Ring12, weighted(1, 7)),
        make("NSF-W", BuiltinTopology::Nsfnet14, weighted(2, 14)),
        make("NJ-W", BuiltinTopology::Njlata11, weighted(5, 8)),
    ]
}

pub fn preset(name: &str) -> Result<ScenarioConfig> {
    scenario_presets()
        .into_iter()
        .find(|c| c.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::InvalidParameter(format!("unknown preset '{name}'")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = ScenarioConfig::default();
        assert_eq!((c.k, c.n_requests, c.replications), (2, 1000, 100));
        assert_eq!((c.alpha, c.beta, c.guard_band), (1, 4, 1));
        assert!(c.validate().is_ok());
    }

    #[test]
    fn presets() {
        let names: Vec<String> = scenario_presets().into_iter().map(|c| c.name).collect();
        assert_eq!(names, ["R-U", "NSF-U", "NJ-U", "R-W", "NSF-W", "NJ-W"]);
        assert_eq!(
            preset("nsf-w").unwrap().traffic,
            TrafficSpec::Weighted { dc: (2, 14), dc_mass: 0.45 }
        );
        assert!(preset("X-Y").is_err());
    }

    #[test]
    fn traffic_spec_parsing() {
        assert_eq!(TrafficSpec::parse("uniform", None, None).unwrap(), TrafficSpec::Uniform);
        assert!(TrafficSpec::parse("weighted", None, None).is_err());
        assert_eq!(
            TrafficSpec::parse("weighted", Some((1, 7)), None).unwrap(),
            TrafficSpec::Weighted { dc: (1, 7), dc_mass: 0.45 }
        );
        assert_eq!(
            TrafficSpec::parse("file:t.txt", None, None).unwrap(),
            TrafficSpec::File { path: "t.txt".into() }
        );
        assert!(TrafficSpec::parse("bursty", None, None).is_err());
    }

    #[test]
    fn config_file_round_trip() {
        let c = preset("NJ-W").unwrap();
        let text = toml::to_string(&c).unwrap();
        let back: ScenarioConfig = toml::from_str(&text).unwrap();
        assert_eq!(back, c);
        let partial: ScenarioConfig = toml::from_str("topology = \"nsfnet\"\nreplications = 5\n").unwrap();
        assert_eq!(partial.replications, 5);
        assert_eq!(partial.topology, TopologySpec::Builtin(BuiltinTopology::Nsfnet14));
        assert_eq!(partial.n_requests, 1000);
    }

    #[test]
    fn validation() {
        let mut c = ScenarioConfig::default();
        c.k = 3;
        assert!(c.validate().is_err());
        let c = ScenarioConfig { alpha: 5, ..ScenarioConfig::default() };
        assert!(c.validate().is_err());
        assert!(ScenarioConfig::default().with_p1(0.3).is_ok());
    }
}
