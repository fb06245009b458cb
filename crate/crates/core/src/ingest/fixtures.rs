//! Published tables shipped with the crate.

use crate::error::{Error, Result};
use crate::group::ProgramGroup;

/// 12x12 criteria comparison matrix, rounded to three decimals.
pub const COMMITTEE_MATRIX_CSV: &str = include_str!("../../fixtures/committee_matrix.csv");
/// Saaty-Tran random index, orders 1 through 15.
pub const RI_TABLE_CSV: &str = include_str!("../../fixtures/ri_table.csv");
/// Responding institutions with their program group.
pub const SCHOOL_GROUPS_CSV: &str = include_str!("../../fixtures/school_groups.csv");
/// Three-candy example with intransitive judgments.
pub const CANDY_CSV: &str = include_str!("../../fixtures/candy.csv");
pub const IDENTITY3_CSV: &str = include_str!("../../fixtures/identity3.csv");

#[derive(Debug, Clone, PartialEq)]
pub struct SchoolRow {
    pub institution: String,
    /// `None` where the school is unranked.
    pub ranking: Option<u32>,
    pub group: ProgramGroup,
    pub responses: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchoolGroupFixture {
    rows: Vec<SchoolRow>,
}

impl SchoolGroupFixture {
    pub fn parse(text: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(super::csv_error)?;
            let line = rec.position().map_or(0, |p| p.line() as usize);
            if rec.len() != 4 {
                return Err(Error::parse(line, 0, format!("expected 4 columns, found {}", rec.len())));
            }
            let ranking = match rec[1].trim() {
                "N/A" | "" => None,
                s => Some(s.parse().map_err(|_| Error::parse(line, 2, format!("bad ranking `{s}`")))?),
            };
            let group = match rec[2].trim() {
                "1" => ProgramGroup::One,
                "2" => ProgramGroup::Two,
                "3" => ProgramGroup::Three,
                s => return Err(Error::parse(line, 3, format!("group must be 1, 2 or 3 (got `{s}`)"))),
            };
            let responses = rec[3]
                .trim()
                .parse()
                .map_err(|_| Error::parse(line, 4, format!("bad response count `{}`", &rec[3])))?;
            rows.push(SchoolRow { institution: rec[0].trim().to_string(), ranking, group, responses });
        }
        Ok(SchoolGroupFixture { rows })
    }

    pub fn shipped() -> Self {
        Self::parse(SCHOOL_GROUPS_CSV).expect("shipped school fixture parses")
    }

    pub fn rows(&self) -> &[SchoolRow] {
        &self.rows
    }

    /// Program group of an institution; unknown schools fall into group 3
    /// and the second value is a warning.
    pub fn group_of(&self, institution: &str) -> (ProgramGroup, Option<String>) {
        match self.rows.iter().find(|r| r.institution.eq_ignore_ascii_case(institution.trim())) {
            Some(r) => (r.group, None),
            None => (
                ProgramGroup::Three,
                Some(format!("`{institution}` is not in the school fixture; assigned to group 3")),
            ),
        }
    }
}

/// Parses the two-column `order,ri` table.
pub fn parse_ri_table(text: &str) -> Result<Vec<(usize, f64)>> {
    let mut rdr = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    rdr.records()
        .map(|rec| {
            let rec = rec.map_err(super::csv_error)?;
            let line = rec.position().map_or(0, |p| p.line() as usize);
            let order = rec[0].trim().parse().map_err(|_| Error::parse(line, 1, "bad order"))?;
            let ri = rec[1].trim().parse().map_err(|_| Error::parse(line, 2, "bad random index"))?;
            Ok((order, ri))
        })
        .collect()
}
