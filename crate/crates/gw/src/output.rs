//! The record printed by every command, as JSON or CSV.

use serde::Serialize;

use crate::error::{GwError, Result};
use crate::json::TermJson;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Invariant,
    Series,
    Hodge,
    Verify,
    Cache,
}

/// A negative power `w^{w_exp}` of `w = y + Z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrincipalTerm {
    pub w_exp: i32,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub suite: String,
    pub name: String,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Explain {
    pub insertion_degree: i64,
    pub virtual_dimension: i64,
    pub dimension_matches: bool,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct OutputRecord {
    pub kind: Kind,
    pub inputs: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variables: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<TermJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub principal: Option<Vec<PrincipalTerm>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<CheckRecord>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub explain: Option<Explain>,
    pub provenance: String,
    pub version: String,
}

impl OutputRecord {
    pub fn new(kind: Kind, inputs: serde_json::Value, provenance: &str) -> Self {
        OutputRecord {
            kind,
            inputs,
            value: None,
            variables: None,
            terms: None,
            principal: None,
            checks: None,
            explain: None,
            provenance: provenance.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("records are always serializable");
        s.push('\n');
        s
    }

    /// Series: one row per term with columns `<variables...>, num, den`,
    /// plus a `w` column when principal terms are present. Verify: one row
    /// per check. Otherwise the single value as `num, den`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| GwError::Output(e.to_string());
        if let Some(checks) = &self.checks {
            w.write_record(["suite", "name", "status", "detail"]).map_err(err)?;
            for c in checks {
                let detail = c.detail.clone().unwrap_or_default();
                w.write_record([c.suite.as_str(), c.name.as_str(), c.status, detail.as_str()])
                    .map_err(err)?;
            }
        } else if let (Some(vars), Some(terms)) = (&self.variables, &self.terms) {
            let principal = self.principal.as_deref().unwrap_or_default();
            let with_w = !principal.is_empty();
            let mut header: Vec<String> = vars.clone();
            if with_w {
                header.push("w".into());
            }
            header.push("num".into());
            header.push("den".into());
            w.write_record(&header).map_err(err)?;
            for t in terms {
                let mut row: Vec<String> = t.exp.iter().map(u32::to_string).collect();
                if with_w {
                    row.push("0".into());
                }
                row.push(t.num.clone());
                row.push(t.den.clone());
                w.write_record(&row).map_err(err)?;
            }
            for p in principal {
                let mut row = vec!["0".to_string(); vars.len()];
                row.push(p.w_exp.to_string());
                row.push(p.num.clone());
                row.push(p.den.clone());
                w.write_record(&row).map_err(err)?;
            }
        } else {
            let value = self.value.clone().unwrap_or_default();
            let (num, den) = value.split_once('/').unwrap_or((value.as_str(), "1"));
            match &self.explain {
                Some(e) => {
                    w.write_record(["num", "den", "note"]).map_err(err)?;
                    w.write_record([num, den, e.note.as_str()]).map_err(err)?;
                }
                None => {
                    w.write_record(["num", "den"]).map_err(err)?;
                    w.write_record([num, den]).map_err(err)?;
                }
            }
        }
        let bytes = w.into_inner().map_err(|e| GwError::Output(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| GwError::Output(e.to_string()))
    }
}
