//! JSON form of a [`CountReport`].
//!
//! Counts and invariant factors are decimal strings; timings are integer
//! nanoseconds. Keys are emitted in a fixed order, so parsing a report and
//! printing it again reproduces it byte for byte.

use serde::{Deserialize, Serialize};

use crate::counting::CountReport;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldJson {
    pub p: u32,
    pub n: u32,
    pub modulus: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureJson {
    pub m: usize,
    pub t: usize,
    pub r: Vec<usize>,
    pub n: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelJson {
    pub l: usize,
    pub d: Vec<String>,
    pub s: usize,
    pub gcds: Vec<String>,
    pub set_sizes: Vec<String>,
    #[serde(rename = "N_l")]
    pub n_l: String,
    pub term: String,
    pub path: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimingsJson {
    pub snf_ns: u64,
    pub logs_ns: u64,
    pub enumeration_ns: u64,
    pub total_ns: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub field: FieldJson,
    pub structure: StructureJson,
    pub alpha: Option<String>,
    pub levels: Vec<LevelJson>,
    pub zero_term: Option<String>,
    pub total: String,
    pub timings: TimingsJson,
}

impl ReportJson {
    pub fn from_report(report: &CountReport) -> Self {
        let strings = |v: &[num_bigint::BigUint]| v.iter().map(ToString::to_string).collect();
        let nanos = |d: std::time::Duration| d.as_nanos().min(u64::MAX as u128) as u64;
        ReportJson {
            field: FieldJson {
                p: report.field.characteristic(),
                n: report.field.degree(),
                modulus: report.field.modulus().to_vec(),
            },
            structure: StructureJson {
                m: report.equations,
                t: report.r.len(),
                r: report.r.clone(),
                n: report.n.clone(),
            },
            alpha: report.alpha.map(|a| report.field.format_element(a)),
            levels: report
                .levels
                .iter()
                .map(|lv| LevelJson {
                    l: lv.l,
                    d: lv.snf.d.iter().map(ToString::to_string).collect(),
                    s: lv.rank(),
                    gcds: strings(&lv.gcds),
                    set_sizes: strings(&lv.set_sizes),
                    n_l: lv.n_l.to_string(),
                    term: lv.term.to_string(),
                    path: lv.path.as_str().to_string(),
                })
                .collect(),
            zero_term: report.zero_term.as_ref().map(ToString::to_string),
            total: report.total.to_string(),
            timings: TimingsJson {
                snf_ns: nanos(report.timings.snf),
                logs_ns: nanos(report.timings.logs),
                enumeration_ns: nanos(report.timings.enumeration),
                total_ns: nanos(report.timings.total),
            },
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

pub fn report_to_json(report: &CountReport) -> String {
    ReportJson::from_report(report).to_json()
}
