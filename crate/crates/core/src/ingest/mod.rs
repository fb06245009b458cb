//! CSV and JSON formats.
//!
//! All text is UTF-8 with LF line endings and `.` as the decimal separator.

pub mod fixtures;
mod matrix_csv;
mod report;
mod responses;

pub use fixtures::{SchoolGroupFixture, SchoolRow};
pub use matrix_csv::{parse_matrix_csv, write_grid_csv, write_matrix_csv, write_provisional_matrix_csv};
pub use report::{
    parse_ranking_json, sig6, write_ranking_json, write_ri_csv, write_stats_report_json, RankingDocument,
    StatsEntry, StatsReport,
};
pub use responses::{
    pair_column, parse_responses_csv, parse_responses_csv_with, write_responses_csv, ResponseFormat,
    RESPONSES_FORMAT_VERSION,
};

use crate::error::Error;

fn csv_error(e: csv::Error) -> Error {
    let (row, col) = match e.position() {
        Some(p) => (p.line() as usize, 0),
        None => (0, 0),
    };
    Error::parse(row, col, e.to_string())
}
