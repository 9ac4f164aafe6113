//! JSON output: a pretty-printed array of records whose field names
//! mirror the CSV columns (plus the normalization magnitudes, which
//! the CSV schema omits).

use crate::output::OutputError;
use crate::sweep::SweepRecord;

pub fn to_json(records: &[SweepRecord]) -> Result<String, OutputError> {
    if records.is_empty() {
        return Err(OutputError::EmptyInput);
    }
    Ok(serde_json::to_string_pretty(records).expect("records serialize to JSON"))
}

pub fn parse_json(text: &str) -> Result<Vec<SweepRecord>, OutputError> {
    serde_json::from_str(text).map_err(|e| OutputError::Json(e.to_string()))
}
