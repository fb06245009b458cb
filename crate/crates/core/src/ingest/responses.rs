//! Respondent CSV, format version 1.
//!
//! ```text
//! # format_version: 1
//! id,committee,rank,group,Back_vs_Major,Back_vs_CGPA,...,GRES_vs_Tier
//! r001,yes,full,1,2,1/3,...,1
//! ```
//!
//! One column per criterion pair in canonical order (row criterion first);
//! an empty cell means the pair was not answered.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::group::{RespondentRecord, StudyDataset, STUDY_CRITERIA};
use crate::scale::JudgmentScale;

pub const RESPONSES_FORMAT_VERSION: u32 = 1;

const META: [&str; 4] = ["id", "committee", "rank", "group"];

pub fn pair_column(row: &str, col: &str) -> String {
    format!("{row}_vs_{col}")
}

/// Criteria order and judgment scale for a respondent file.
#[derive(Debug, Clone)]
pub struct ResponseFormat {
    pub criteria: Vec<String>,
    pub scale: JudgmentScale,
}

impl Default for ResponseFormat {
    fn default() -> Self {
        ResponseFormat {
            criteria: STUDY_CRITERIA.iter().map(|s| s.to_string()).collect(),
            scale: JudgmentScale::study(),
        }
    }
}

/// Parses with the twelve study criteria and the five-point scale.
pub fn parse_responses_csv(bytes: &[u8]) -> Result<StudyDataset> {
    parse_responses_csv_with(bytes, &ResponseFormat::default())
}

pub fn parse_responses_csv_with(bytes: &[u8], format: &ResponseFormat) -> Result<StudyDataset> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::parse(0, 0, format!("not UTF-8: {e}")))?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut records = rdr.records();

    let header = records
        .next()
        .ok_or_else(|| Error::parse(0, 0, "missing header row"))?
        .map_err(super::csv_error)?;
    let hline = header.position().map_or(0, |p| p.line() as usize);
    let criteria = &format.criteria;
    let n = criteria.len();
    let expected_pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();

    if header.len() != META.len() + expected_pairs.len() {
        return Err(Error::parse(
            hline,
            0,
            format!("expected {} columns (4 metadata + {} pairs), found {}", 4 + expected_pairs.len(), expected_pairs.len(), header.len()),
        ));
    }
    for (k, name) in META.iter().enumerate() {
        if !header[k].trim().eq_ignore_ascii_case(name) {
            return Err(Error::parse(hline, k + 1, format!("expected column `{name}`, found `{}`", &header[k])));
        }
    }
    for (k, &(i, j)) in expected_pairs.iter().enumerate() {
        let col = k + META.len();
        let name = header[col].trim();
        let (a, b) = name
            .split_once("_vs_")
            .ok_or_else(|| Error::parse(hline, col + 1, format!("`{name}` is not of the form <row>_vs_<col>")))?;
        for c in [a, b] {
            if !criteria.iter().any(|x| x == c) {
                return Err(Error::parse(hline, col + 1, format!("unknown criterion `{c}` in column `{name}`")));
            }
        }
        if a != criteria[i] || b != criteria[j] {
            return Err(Error::parse(
                hline,
                col + 1,
                format!("column `{name}` out of canonical order; expected `{}`", pair_column(&criteria[i], &criteria[j])),
            ));
        }
    }

    let mut respondents = Vec::new();
    let mut ids = HashSet::new();
    for rec in records {
        let rec = rec.map_err(super::csv_error)?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let id = rec[0].trim().to_string();
        if id.is_empty() {
            return Err(Error::parse(line, 1, "empty respondent id"));
        }
        if !ids.insert(id.clone()) {
            return Err(Error::parse(line, 1, format!("duplicate respondent id `{id}`")));
        }
        let meta_err = |col: usize| move |e: Error| Error::parse(line, col, e.to_string());
        let committee = rec[1].parse().map_err(meta_err(2))?;
        let rank = rec[2].parse().map_err(meta_err(3))?;
        let program_group = rec[3].parse().map_err(meta_err(4))?;
        let mut judgments = crate::matrix::UpperJudgments::new();
        for (k, &pair) in expected_pairs.iter().enumerate() {
            let col = k + META.len();
            let cell = rec[col].trim();
            if cell.is_empty() {
                continue;
            }
            let v = format.scale.parse_value(cell).map_err(meta_err(col + 1))?;
            judgments.insert(pair, v);
        }
        respondents.push(RespondentRecord { id, committee, rank, program_group, judgments });
    }
    StudyDataset::new(criteria.clone(), respondents)
}

/// Writes a dataset in the same format, rationals as `p/q`.
pub fn write_responses_csv(ds: &StudyDataset) -> String {
    let criteria = ds.criteria();
    let n = criteria.len();
    let mut wtr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(vec![]);
    let mut header: Vec<String> = META.iter().map(|s| s.to_string()).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            header.push(pair_column(&criteria[i], &criteria[j]));
        }
    }
    wtr.write_record(&header).expect("in-memory write");
    for r in ds.respondents() {
        let blank = |s: &'static str| if s == "blank" { String::new() } else { s.to_string() };
        let mut rec = vec![r.id.clone(), blank(r.committee.as_str()), blank(r.rank.as_str()), blank(r.program_group.as_str())];
        for i in 0..n {
            for j in (i + 1)..n {
                rec.push(r.judgments.get(&(i, j)).map(|v| v.to_string()).unwrap_or_default());
            }
        }
        wtr.write_record(&rec).expect("in-memory write");
    }
    let body = String::from_utf8(wtr.into_inner().expect("flush")).expect("utf-8");
    format!("# format_version: {RESPONSES_FORMAT_VERSION}\n{body}")
}
