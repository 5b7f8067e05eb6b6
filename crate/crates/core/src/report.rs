//! User-facing JSON documents. Every row, column and entry index is 1-based.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::alternance::AlternanceCertificate;
use crate::globalopt::{OptResult, Termination};
use crate::matcore::PcReport;
use crate::oracle::OracleResult;
use crate::signgraph::{SignDependencyGraph, TransitionGraphSummary, ValidationReport};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateJson {
    pub k: usize,
    pub columns: Vec<usize>,
    pub rows: Vec<usize>,
    /// `[row, column]` pairs in cycle order.
    pub entries: Vec<[usize; 2]>,
    pub error: f64,
    pub tol: f64,
}

impl From<&AlternanceCertificate> for CertificateJson {
    fn from(c: &AlternanceCertificate) -> Self {
        Self {
            k: c.k(),
            columns: c.columns.iter().map(|j| j + 1).collect(),
            rows: c.rows.iter().map(|i| i + 1).collect(),
            entries: c.cycle.iter().map(|&(i, j)| [i + 1, j + 1]).collect(),
            error: c.error,
            tol: c.tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptResultJson {
    pub error: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub runs: usize,
    /// Starting pattern of each run on the loop columns, as `+`/`-` strings.
    pub patterns: Vec<String>,
    /// Certificate of each run, `null` where the fallback clause was used.
    pub certificates: Vec<Option<CertificateJson>>,
    pub terminated: Termination,
}

impl From<&OptResult> for OptResultJson {
    fn from(r: &OptResult) -> Self {
        Self {
            error: r.error,
            u: r.u.as_slice().to_vec(),
            v: r.v.as_slice().to_vec(),
            runs: r.run_count(),
            patterns: r.runs.iter().map(|x| x.pattern.to_string()).collect(),
            certificates: r
                .runs
                .iter()
                .map(|x| x.certificate.as_ref().map(CertificateJson::from))
                .collect(),
            terminated: r.terminated,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleJson {
    pub error: f64,
    pub best_pattern: String,
    pub per_class_errors: BTreeMap<String, f64>,
}

impl From<&OracleResult> for OracleJson {
    fn from(r: &OracleResult) -> Self {
        Self {
            error: r.error,
            best_pattern: r.best_pattern.to_string(),
            per_class_errors: r
                .per_class_errors
                .iter()
                .map(|(k, &v)| (k.to_string(), v))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PcReportJson {
    pub preserves: bool,
    pub bad_rows: Vec<usize>,
    pub bad_cols: Vec<usize>,
}

impl From<&PcReport> for PcReportJson {
    fn from(r: &PcReport) -> Self {
        Self {
            preserves: r.preserves,
            bad_rows: r.bad_rows.iter().map(|i| i + 1).collect(),
            bad_cols: r.bad_cols.iter().map(|j| j + 1).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentJson {
    pub loop_vertex: String,
    pub size: usize,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphJson {
    pub n: usize,
    pub loop_columns: Vec<usize>,
    pub depth: usize,
    /// `parent[j]`: the column whose sign determines column `j`'s next sign.
    pub parent: Vec<usize>,
    pub reach: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<ComponentJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violations: Option<Vec<String>>,
}

impl GraphJson {
    pub fn new(
        graph: &SignDependencyGraph,
        full: Option<(&TransitionGraphSummary, &ValidationReport)>,
    ) -> Self {
        let one = |x: &Vec<usize>| x.iter().map(|j| j + 1).collect();
        Self {
            n: graph.n(),
            loop_columns: one(&graph.loops),
            depth: graph.depth,
            parent: one(&graph.parent),
            reach: one(&graph.reach),
            components: full.map(|(s, _)| {
                s.components
                    .iter()
                    .map(|c| ComponentJson {
                        loop_vertex: c.loop_vertex.to_string(),
                        size: c.size,
                        depth: c.depth,
                    })
                    .collect()
            }),
            violations: full.map(|(_, r)| r.violations.clone()),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::globalopt::{optimize, OptimizeOptions};
    use crate::matcore::DenseMatrix;

    #[test]
    fn field_order_and_indices() {
        let a = DenseMatrix::identity(2).unwrap();
        let r = optimize(&a, &OptimizeOptions::default()).unwrap();
        let text = to_json(&OptResultJson::from(&r));
        let keys = ["\"error\"", "\"u\"", "\"v\"", "\"runs\"", "\"patterns\"", "\"certificates\"", "\"terminated\""];
        let pos: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]), "{text}");
        assert!(text.contains("\"dnf-full\""));
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["error"], 0.5);
        let cols = value["certificates"][0]["columns"].as_array().unwrap();
        assert!(cols.iter().all(|c| (1..=2).contains(&c.as_u64().unwrap())));
    }

    #[test]
    fn pc_report_is_one_based() {
        let r = PcReport {
            preserves: false,
            bad_rows: vec![0],
            bad_cols: vec![],
        };
        assert_eq!(PcReportJson::from(&r).bad_rows, vec![1]);
    }
}
