//! Staged exhaustive grid search over parser parameters.
//!
//! Grid files group parameters into stages:
//! ```text
//! [ANGLES & PROXIMITY]
//! ANGLE_TOLERANCE_DEGREES = 1, 3, 5, 10, 15
//! ```
//! Stages run in file order; each stage exhaustively scores the cartesian
//! product of its parameter values while everything else stays fixed, and
//! the stage winner is frozen before the next stage starts.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::params::{ParserParams, PARAM_NAMES};

#[derive(Debug, Error, PartialEq)]
pub enum GridError {
    #[error("line {0}: parameter outside any stage")]
    NoStage(usize),
    #[error("line {0}: unknown parameter {1:?}")]
    UnknownParam(usize, String),
    #[error("line {0}: bad value {1:?}")]
    BadValue(usize, String),
    #[error("grid has no stages or no values")]
    Empty,
    #[error("corpus is empty")]
    EmptyCorpus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridStage {
    pub name: String,
    pub params: Vec<(String, Vec<f64>)>,
}

impl GridStage {
    pub fn run_count(&self) -> usize {
        self.params.iter().map(|(_, vs)| vs.len()).product()
    }
}

/// One scored configuration in the search log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRun {
    pub stage: String,
    pub values: Vec<(String, f64)>,
    pub exact_match_rate: f64,
    pub inverse_avg_nld: f64,
    pub selected: bool,
}

pub fn parse_grid_file(text: &str) -> Result<Vec<GridStage>, GridError> {
    let mut stages: Vec<GridStage> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            stages.push(GridStage {
                name: name.trim().to_string(),
                params: Vec::new(),
            });
            continue;
        }
        let Some((key, values)) = line.split_once('=') else {
            return Err(GridError::BadValue(i + 1, line.to_string()));
        };
        let key = key.trim().to_string();
        if !PARAM_NAMES.contains(&key.as_str()) {
            return Err(GridError::UnknownParam(i + 1, key));
        }
        let values: Vec<f64> = values
            .split(',')
            .map(|v| {
                let v = v.trim();
                v.parse::<f64>()
                    .map_err(|_| GridError::BadValue(i + 1, v.to_string()))
            })
            .collect::<Result<_, _>>()?;
        if values.is_empty() {
            return Err(GridError::BadValue(i + 1, line.to_string()));
        }
        let stage = stages.last_mut().ok_or(GridError::NoStage(i + 1))?;
        stage.params.push((key, values));
    }
    if stages.is_empty() || stages.iter().all(|s| s.params.is_empty()) {
        return Err(GridError::Empty);
    }
    Ok(stages)
}

/// The standard three-stage tuning grid.
pub const STANDARD_GRID: &str = "\
[ANGLES & PROXIMITY]
ANGLE_TOLERANCE_DEGREES = 1, 3, 5, 10, 15
CLOSE_NONPARALLEL_ALPHA = 1, 1.25, 1.5, 1.75, 2.0
CLOSE_CHAR_LINE_ALPHA = 1, 1.25, 1.5, 1.75, 2.0

[SYMBOLS]
S-WEDGE_LENGTHS_DIFF_RATIO = 0.70, 0.85, 0.90, 0.95
NEG-CHARGE_Y_POSITION = 0, 0.25, 0.5
NEG-CHARGE_LENGTH_TOLERANCE = 0.33, 0.5, 0.66

[PRUNING EDGES]
ABS_COS_CHAR_PRUNE = 0.10, 0.15, 0.20
CHAR_LINE_Z_TOLERANCE = 1.0, 1.5, 2.0
MAX_ALPHA_DIST = 2.0, 2.5, 3.0
";

/// Exhaustive staged search maximizing exact-match rate; ties prefer
/// higher inverse average NLD, then the earlier configuration in grid
/// order. Winning values replace the defaults before the next stage.
pub fn grid_search(
    base: &ParserParams,
    stages: &[GridStage],
    mut score: impl FnMut(&ParserParams) -> (f64, f64),
) -> (ParserParams, Vec<GridRun>) {
    let mut params = base.clone();
    let mut log = Vec::new();
    for stage in stages {
        if stage.params.is_empty() {
            continue;
        }
        let mut best: Option<(f64, f64, ParserParams, usize)> = None;
        let mut indices = vec![0usize; stage.params.len()];
        let stage_log_start = log.len();
        loop {
            let mut candidate = params.clone();
            let mut values = Vec::with_capacity(stage.params.len());
            for (k, (name, vs)) in stage.params.iter().enumerate() {
                candidate
                    .set(name, vs[indices[k]])
                    .expect("grid keys validated at parse time");
                values.push((name.clone(), vs[indices[k]]));
            }
            let (exact, nld) = score(&candidate);
            log.push(GridRun {
                stage: stage.name.clone(),
                values,
                exact_match_rate: exact,
                inverse_avg_nld: nld,
                selected: false,
            });
            let better = match &best {
                None => true,
                Some((be, bn, _, _)) => exact > *be || (exact == *be && nld > *bn),
            };
            if better {
                best = Some((exact, nld, candidate, log.len() - 1));
            }
            // advance the cartesian product, last parameter fastest
            let mut k = stage.params.len();
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                indices[k] += 1;
                if indices[k] < stage.params[k].1.len() {
                    break;
                }
                indices[k] = 0;
                if k == 0 {
                    break;
                }
            }
            if indices.iter().all(|&i| i == 0) {
                break;
            }
        }
        let (_, _, winner, winner_idx) = best.expect("stage has at least one configuration");
        log[winner_idx].selected = true;
        params = winner;
        debug_assert_eq!(log.len() - stage_log_start, stage.run_count());
    }
    (params, log)
}
