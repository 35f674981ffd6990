//! Canonical JSON for series and memo keys. Terms are listed in
//! lexicographic order of their exponent vectors and every map is sorted,
//! so equal values serialize to identical bytes.

use std::collections::BTreeMap;

use cp1_core::rational::{from_parts, to_parts};
use cp1_core::toda::SeriesKey;
use cp1_core::{MultiSeries, TruncationSpec};
use serde::{Deserialize, Serialize};

use crate::error::{GwError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapsJson {
    pub eps: Option<u32>,
    pub vars: BTreeMap<String, u32>,
    pub total: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub variables: Vec<String>,
    pub caps: CapsJson,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyJson {
    pub d: u32,
    pub m: usize,
    pub n: usize,
    pub caps: CapsJson,
}

impl From<&TruncationSpec> for CapsJson {
    fn from(spec: &TruncationSpec) -> Self {
        CapsJson {
            eps: spec.eps_cap,
            vars: spec.var_caps.clone(),
            total: spec.total_cap,
        }
    }
}

impl From<&CapsJson> for TruncationSpec {
    fn from(caps: &CapsJson) -> Self {
        TruncationSpec {
            eps_cap: caps.eps,
            var_caps: caps.vars.clone(),
            total_cap: caps.total,
        }
    }
}

impl From<&MultiSeries> for SeriesJson {
    fn from(s: &MultiSeries) -> Self {
        let terms = s
            .terms()
            .map(|(exp, c)| {
                let (num, den) = to_parts(c);
                TermJson {
                    exp: exp.clone(),
                    num,
                    den,
                }
            })
            .collect();
        SeriesJson {
            variables: s.variables().to_vec(),
            caps: s.spec().into(),
            terms,
        }
    }
}

impl SeriesJson {
    pub fn to_series(&self) -> Result<MultiSeries> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let c = from_parts(&t.num, &t.den)
                .ok_or_else(|| GwError::CorruptCache(format!("bad coefficient {}/{}", t.num, t.den)))?;
            terms.push((t.exp.clone(), c));
        }
        let series = MultiSeries::from_terms(self.variables.clone(), (&self.caps).into(), terms)?;
        if series.len() != self.terms.len() {
            return Err(GwError::CorruptCache("terms outside the stated caps".into()));
        }
        Ok(series)
    }
}

impl From<&SeriesKey> for KeyJson {
    fn from(k: &SeriesKey) -> Self {
        KeyJson {
            d: k.d,
            m: k.m,
            n: k.n,
            caps: (&k.spec).into(),
        }
    }
}

impl From<&KeyJson> for SeriesKey {
    fn from(k: &KeyJson) -> Self {
        SeriesKey {
            d: k.d,
            m: k.m,
            n: k.n,
            spec: (&k.caps).into(),
        }
    }
}

pub fn series_to_string(s: &MultiSeries) -> String {
    serde_json::to_string(&SeriesJson::from(s)).expect("series JSON is always serializable")
}

pub fn series_from_str(text: &str) -> Result<MultiSeries> {
    let parsed: SeriesJson =
        serde_json::from_str(text).map_err(|e| GwError::CorruptCache(e.to_string()))?;
    parsed.to_series()
}
