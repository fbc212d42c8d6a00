//! Serializable row types and their CSV encoding.

use std::io::{Read, Write};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use circlelab_core::battery::Check;
use circlelab_core::series::XiLambdaRow;

pub const PERROR_HEADER: &str =
    "x,p_exact,p_series,p_series_err,phi_p,abs_diff_series,abs_diff_phi";
pub const THEOREM5_HEADER: &str = "n,Y,Ystar,xi,lambda,xi_residual,lambda_residual,metric,status";
pub const CHECK_HEADER: &str = "suite,name,lhs,rhs,bound,pass,detail";
pub const COUNT_HEADER: &str = "x,kind,star_sum,main_term,remainder";
pub const SPECIAL_HEADER: &str = "function,arg,value,est_error,method";
pub const ESTIMATE_HEADER: &str = "quantity,value,est_error,agrees";

/// One grid point of the remainder scan. `x` keeps its exact decimal form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerrorRow {
    pub x: String,
    pub p_exact: f64,
    pub p_series: f64,
    pub p_series_err: f64,
    pub phi_p: f64,
    pub abs_diff_series: f64,
    pub abs_diff_phi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem5Row {
    pub n: u64,
    #[serde(rename = "Y")]
    pub y: f64,
    #[serde(rename = "Ystar")]
    pub y_star: f64,
    pub xi: f64,
    pub lambda: f64,
    pub xi_residual: f64,
    pub lambda_residual: f64,
    pub metric: f64,
    pub status: String,
}

impl From<XiLambdaRow> for Theorem5Row {
    fn from(r: XiLambdaRow) -> Self {
        Self {
            n: r.n,
            y: r.y,
            y_star: r.y_star,
            xi: r.xi,
            lambda: r.lambda,
            xi_residual: r.xi_residual,
            lambda_residual: r.lambda_residual,
            metric: r.metric,
            status: r.status.name().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub suite: String,
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub bound: f64,
    pub pass: bool,
    pub detail: String,
}

impl From<&Check> for CheckRow {
    fn from(c: &Check) -> Self {
        Self {
            suite: c.suite.name().to_string(),
            name: c.name.clone(),
            lhs: c.lhs,
            rhs: c.rhs,
            bound: c.bound,
            pass: c.pass,
            detail: c.detail.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountRow {
    pub x: String,
    pub kind: String,
    pub star_sum: String,
    pub main_term: f64,
    pub remainder: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecialRow {
    pub function: String,
    pub arg: f64,
    pub value: f64,
    pub est_error: f64,
    pub method: String,
}

/// One estimate of `P(x)` in the side-by-side report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRow {
    pub quantity: String,
    pub value: f64,
    pub est_error: f64,
    pub agrees: bool,
}

/// Writes `rows` as CSV with a header taken from the field names.
pub fn write_csv<T: Serialize, W: Write>(rows: &[T], w: W) -> csv::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for r in rows {
        wtr.serialize(r)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_csv<T: DeserializeOwned, R: Read>(r: R) -> csv::Result<Vec<T>> {
    csv::Reader::from_reader(r).deserialize().collect()
}

/// Field-wise equality that treats NaN as equal to itself.
pub fn same_bits(a: f64, b: f64) -> bool {
    a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan())
}
