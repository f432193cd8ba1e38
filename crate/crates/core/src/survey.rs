//! Batch GVM solving across the registry with each crystal's preset interaction.

use rayon::prelude::*;

use crate::crystal::{CrystalRecord, Method, Registry};
use crate::error::{Error, Result};
use crate::gvm::{default_pump_range, maximize_azimuth, solve_gvm_bpm, solve_gvm_qpm, GvmCondition, GvmSolution};
use crate::phasematch::BpmPlane;

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Solved(GvmSolution<f64>),
    /// The condition cannot be met in the searched range.
    NotSatisfied(String),
    Failed(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurveyRow {
    pub crystal: String,
    pub method: Method,
    pub condition: GvmCondition,
    /// Dispersion data is approximate; kept out of golden comparisons.
    pub excluded: bool,
    pub outcome: Outcome,
}

/// Solve one condition with the record's preset interaction over its default
/// pump window (first-order poling for QPM).
pub fn solve_preset(record: &CrystalRecord, condition: GvmCondition) -> Result<Vec<GvmSolution<f64>>> {
    solve_with(record, condition, default_pump_range(record), 1)
}

/// As [`solve_preset`] with an explicit pump window and QPM order. Uniaxial
/// solutions take the azimuth that maximizes |d_eff|.
pub fn solve_with(
    record: &CrystalRecord,
    condition: GvmCondition,
    pump_range: (f64, f64),
    order: u32,
) -> Result<Vec<GvmSolution<f64>>> {
    let interaction = record.interaction.interaction();
    match record.method {
        Method::Bpm => {
            let plane = BpmPlane::for_record(record)?;
            solve_gvm_bpm(record, &interaction, &plane, condition, pump_range)?
                .into_iter()
                .map(|s| maximize_azimuth(record, s))
                .collect()
        }
        Method::Qpm => solve_gvm_qpm(record, &interaction, condition, pump_range, order),
    }
}

fn rows_for(record: &CrystalRecord) -> Vec<SurveyRow> {
    let mut rows = Vec::new();
    for condition in GvmCondition::ALL {
        let row = |outcome| SurveyRow {
            crystal: record.id.clone(),
            method: record.method,
            condition,
            excluded: record.is_excluded(),
            outcome,
        };
        match solve_preset(record, condition) {
            Ok(solutions) => rows.extend(solutions.into_iter().map(|s| row(Outcome::Solved(s)))),
            Err(Error::NoSolution(msg)) => rows.push(row(Outcome::NotSatisfied(msg))),
            Err(e) => rows.push(row(Outcome::Failed(e.to_string()))),
        }
    }
    rows
}

/// One row per (crystal, condition, root), in registry order. Failures are
/// recorded in the row and do not stop the run.
pub fn survey(registry: &Registry, method: Option<Method>) -> Vec<SurveyRow> {
    let records: Vec<&CrystalRecord> = registry
        .iter()
        .filter(|r| method.is_none_or(|m| r.method == m))
        .collect();
    records.par_iter().flat_map(|r| rows_for(r)).collect()
}

/// Smallest and largest solved pump wavelength (um) for a condition.
pub fn pump_extent(rows: &[SurveyRow], condition: GvmCondition, include_excluded: bool) -> Option<(f64, f64)> {
    rows.iter()
        .filter(|r| r.condition == condition && (include_excluded || !r.excluded))
        .filter_map(|r| match &r.outcome {
            Outcome::Solved(s) => Some(s.triple.pump),
            _ => None,
        })
        .fold(None, |acc, x| match acc {
            None => Some((x, x)),
            Some((lo, hi)) => Some((lo.min(x), hi.max(x))),
        })
}
