//! Canonical JSON rendering.
//!
//! Keys come out in the order given, arrays carry no whitespace, and every real
//! number is printed like C's `%.17g` (17 significant digits, trailing zeros
//! trimmed), which round-trips any finite `f64` exactly. Parsing goes through
//! `serde_json`; only the writer is hand-rolled so output is byte-reproducible.

use crate::matrix::Matrix;
use crate::tensor::DenseTensor;

/// `%.17g` rendering of a finite float. Negative zero renders as `0`; non-finite
/// values, which JSON cannot carry, render as `null`.
pub fn num(v: f64) -> String {
    if !v.is_finite() {
        return "null".to_string();
    }
    if v == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.16e}", v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let sign = if negative { "-" } else { "" };

    if (-4..17).contains(&exp) {
        let (int_part, frac) = if exp >= 0 {
            let split = exp as usize + 1;
            (digits[..split].to_string(), digits[split..].to_string())
        } else {
            let zeros = "0".repeat((-exp - 1) as usize);
            ("0".to_string(), format!("{zeros}{digits}"))
        };
        let frac = frac.trim_end_matches('0');
        if frac.is_empty() {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac}")
        }
    } else {
        let frac = digits[1..].trim_end_matches('0');
        let exp_sign = if exp < 0 { '-' } else { '+' };
        let body = if frac.is_empty() {
            digits[..1].to_string()
        } else {
            format!("{}.{}", &digits[..1], frac)
        };
        format!("{sign}{body}e{exp_sign}{:02}", exp.abs())
    }
}

pub fn num_array(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|&v| num(v)).collect();
    format!("[{}]", parts.join(","))
}

pub fn int_array(values: &[usize]) -> String {
    let parts: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("[{}]", parts.join(","))
}

/// A matrix as an array of rows.
pub fn matrix_rows(m: &Matrix) -> String {
    let rows: Vec<String> = (0..m.rows()).map(|i| num_array(&m.row(i))).collect();
    format!("[{}]", rows.join(","))
}

pub fn matrix_list(ms: &[Matrix]) -> String {
    let parts: Vec<String> = ms.iter().map(matrix_rows).collect();
    format!("[{}]", parts.join(","))
}

pub fn string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

/// Object with fields in the given order; values must already be JSON.
pub fn object(fields: &[(&str, String)]) -> String {
    let parts: Vec<String> = fields
        .iter()
        .map(|(k, v)| format!("{}:{}", string(k), v))
        .collect();
    format!("{{{}}}", parts.join(","))
}

/// `{"shape":[…],"values":[…]}`.
pub fn tensor(t: &DenseTensor) -> String {
    object(&[
        ("shape", int_array(t.dims())),
        ("values", num_array(t.values())),
    ])
}
