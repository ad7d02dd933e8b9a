//! The JSON problem description shared by the command line and the browser
//! demo.

use serde::{Deserialize, Serialize};

use crate::cluster::{PointRecord, ProximityCluster};
use crate::error::{Error, Result};
use crate::flagval::{build_flag, BranchSpec, CurveSpec, ExceptionalValuation, FlagSpec, QKind};
use crate::scalar::Int;

/// Where `μ̂` comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MuSource {
    Minimal,
    Npi { line_support: Vec<usize> },
    Curve { degree: u64, branches: Vec<Vec<u64>> },
}

/// A cluster, a flag on its last divisor and a source for `μ̂`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemDocument {
    pub cluster: Vec<PointRecord>,
    pub flag: QKind,
    pub mu_source: MuSource,
}

impl ProblemDocument {
    pub fn new(cluster: &ProximityCluster, flag: QKind, mu_source: MuSource) -> Self {
        Self {
            cluster: cluster.records(),
            flag,
            mu_source,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn proximity_cluster(&self) -> Result<ProximityCluster> {
        ProximityCluster::validate(&self.cluster)
    }

    pub fn flag_spec(&self) -> Result<FlagSpec> {
        let r = self.cluster.len();
        if r == 0 {
            return Err(Error::EmptyCluster);
        }
        Ok(FlagSpec { r, q: self.flag })
    }

    pub fn valuation(&self) -> Result<ExceptionalValuation> {
        build_flag(&self.proximity_cluster()?, self.flag_spec()?)
    }

    pub fn line_support(&self) -> Option<&[usize]> {
        match &self.mu_source {
            MuSource::Npi { line_support } => Some(line_support),
            _ => None,
        }
    }

    pub fn curve(&self) -> Option<CurveSpec> {
        match &self.mu_source {
            MuSource::Curve { degree, branches } => Some(CurveSpec {
                degree: Int::from(*degree),
                branches: branches.iter().map(|b| BranchSpec::from_u64(b)).collect(),
            }),
            _ => None,
        }
    }
}
