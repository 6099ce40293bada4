//! Machine-readable check outcomes: `{check, params, status, witness}`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Number, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        })
    }
}

/// Outcome of one check. `witness` holds the offending values on failure and
/// the computed evidence on success.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub params: Value,
    pub status: Status,
    pub witness: Value,
}

impl Report {
    pub fn new(check: impl Into<String>, params: Value, passed: bool, witness: Value) -> Self {
        Self {
            check: check.into(),
            params,
            status: if passed { Status::Pass } else { Status::Fail },
            witness,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports always serialize")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.status, self.check, self.params)
    }
}

/// An exact JSON integer, however large.
pub fn big(n: &BigInt) -> Value {
    Value::Number(Number::from_str(&n.to_string()).expect("decimal integers are JSON numbers"))
}

pub fn big_list<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> Value {
    Value::Array(values.into_iter().map(big).collect())
}

pub fn empty() -> Value {
    Value::Object(Map::new())
}

pub fn all_passed(reports: &[Report]) -> bool {
    reports.iter().all(Report::passed)
}
