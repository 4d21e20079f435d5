//! CSV and JSON serialization of experiment rows.
//!
//! CSV: one header line (field names of the row type) and one line per grid
//! point. JSON: an object with the library name and version, the master
//! seed, an echo of the resolved configuration, and the rows.

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub const LIBRARY: &str = "distgraph-core";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub(crate) fn big_string<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub(crate) fn rational_string<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

#[derive(Debug, Serialize)]
pub struct Report<'a, C: Serialize, R: Serialize> {
    pub library: &'static str,
    pub version: &'static str,
    pub master_seed: Option<u64>,
    pub config: &'a C,
    pub rows: &'a [R],
}

impl<'a, C: Serialize, R: Serialize> Report<'a, C, R> {
    pub fn new(config: &'a C, master_seed: Option<u64>, rows: &'a [R]) -> Self {
        Report {
            library: LIBRARY,
            version: VERSION,
            master_seed,
            config,
            rows,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Output(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }
}

pub fn to_csv<R: Serialize>(rows: &[R]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| Error::Output(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Output(e.to_string()))
}
