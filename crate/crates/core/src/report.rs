//! JSON rendering shared by the metric and statistics reports: two-space
//! indentation, LF line endings, floats with six decimals.

use serde::ser::Error as _;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// A float rendered with exactly six decimals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fixed6(pub f64);

impl Serialize for Fixed6 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(S::Error::custom("non-finite value in report"));
        }
        // Avoid "-0.000000".
        let text = format!("{:.6}", self.0);
        let text = if text
            .trim_start_matches('-')
            .bytes()
            .all(|b| b == b'0' || b == b'.')
        {
            text.trim_start_matches('-').to_owned()
        } else {
            text
        };
        RawValue::from_string(text)
            .map_err(S::Error::custom)?
            .serialize(serializer)
    }
}

pub fn fixed_rows(rows: &[Vec<f64>]) -> Vec<Vec<Fixed6>> {
    rows.iter()
        .map(|r| r.iter().copied().map(Fixed6).collect())
        .collect()
}

/// Pretty JSON followed by a newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String, serde_json::Error> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}
