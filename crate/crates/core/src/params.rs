//! Tunable parser parameters.
//!
//! Serialized as flat `KEY=VALUE` text using the canonical parameter names,
//! so a params file doubles as its own documentation. `inf` is accepted for
//! `CHAR_LINE_Z_TOLERANCE` to disable the z-score prune, and
//! `ABS_COS_CHAR_PRUNE=0.5` makes the pruning band empty (also a disable).

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ParamsError {
    #[error("line {0}: expected KEY=VALUE, got {1:?}")]
    Malformed(usize, String),
    #[error("line {0}: unknown parameter {1:?}")]
    UnknownKey(usize, String),
    #[error("line {0}: invalid number {1:?}")]
    BadNumber(usize, String),
    #[error("parameter {0} out of range: {1}")]
    OutOfRange(&'static str, f64),
}

/// All tunables of the parsing pipeline, by canonical name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParserParams {
    /// BEZIER_FLATNESS_PTS: max curve deviation when flattening, in points.
    pub bezier_flatness_pts: f64,
    /// RECT2LINE_LONG_RATIO: perimeter share the two longest sides must cover.
    pub rect2line_long_ratio: f64,
    /// RECT2LINE_ANGLE_TOLERANCE: degrees between the two longest sides.
    pub rect2line_angle_tolerance: f64,
    /// ANGLE_TOLERANCE_DEGREES: generic parallel / perpendicular tolerance.
    pub angle_tolerance_degrees: f64,
    /// CLOSE_NONPARALLEL_ALPHA: ratio for adding non-parallel line edges.
    pub close_nonparallel_alpha: f64,
    /// CLOSE_CHAR_LINE_ALPHA: ratio for adding character-line edges.
    pub close_char_line_alpha: f64,
    /// S-WEDGE_LENGTHS_DIFF_RATIO: short:long side ratio below which a
    /// trapezoid is a solid wedge.
    pub s_wedge_lengths_diff_ratio: f64,
    /// NEG-CHARGE_Y_POSITION: top fraction of the character box the line's
    /// vertical center must fall into.
    pub neg_charge_y_position: f64,
    /// NEG-CHARGE_LENGTH_TOLERANCE: max charge length as a fraction of the
    /// average line length.
    pub neg_charge_length_tolerance: f64,
    /// ABS_COS_CHAR_PRUNE: |cos| band half-width for char-char pruning.
    pub abs_cos_char_prune: f64,
    /// CHAR_LINE_Z_TOLERANCE: z-score beyond which char-line pairs are pruned.
    pub char_line_z_tolerance: f64,
    /// MAX_ALPHA_DIST: ratio of the reference distance beyond which edges
    /// are removed when splitting floating structures.
    pub max_alpha_dist: f64,
}

impl Default for ParserParams {
    fn default() -> Self {
        ParserParams {
            bezier_flatness_pts: 0.25,
            rect2line_long_ratio: 0.85,
            rect2line_angle_tolerance: 5.0,
            angle_tolerance_degrees: 3.0,
            close_nonparallel_alpha: 1.75,
            close_char_line_alpha: 1.5,
            s_wedge_lengths_diff_ratio: 0.7,
            neg_charge_y_position: 0.5,
            neg_charge_length_tolerance: 0.5,
            abs_cos_char_prune: 0.1,
            char_line_z_tolerance: 1.5,
            max_alpha_dist: 2.0,
        }
    }
}

/// Canonical parameter names in file order.
pub const PARAM_NAMES: [&str; 12] = [
    "BEZIER_FLATNESS_PTS",
    "RECT2LINE_LONG_RATIO",
    "RECT2LINE_ANGLE_TOLERANCE",
    "ANGLE_TOLERANCE_DEGREES",
    "CLOSE_NONPARALLEL_ALPHA",
    "CLOSE_CHAR_LINE_ALPHA",
    "S-WEDGE_LENGTHS_DIFF_RATIO",
    "NEG-CHARGE_Y_POSITION",
    "NEG-CHARGE_LENGTH_TOLERANCE",
    "ABS_COS_CHAR_PRUNE",
    "CHAR_LINE_Z_TOLERANCE",
    "MAX_ALPHA_DIST",
];

impl ParserParams {
    pub fn get(&self, key: &str) -> Option<f64> {
        Some(match key {
            "BEZIER_FLATNESS_PTS" => self.bezier_flatness_pts,
            "RECT2LINE_LONG_RATIO" => self.rect2line_long_ratio,
            "RECT2LINE_ANGLE_TOLERANCE" => self.rect2line_angle_tolerance,
            "ANGLE_TOLERANCE_DEGREES" => self.angle_tolerance_degrees,
            "CLOSE_NONPARALLEL_ALPHA" => self.close_nonparallel_alpha,
            "CLOSE_CHAR_LINE_ALPHA" => self.close_char_line_alpha,
            "S-WEDGE_LENGTHS_DIFF_RATIO" => self.s_wedge_lengths_diff_ratio,
            "NEG-CHARGE_Y_POSITION" => self.neg_charge_y_position,
            "NEG-CHARGE_LENGTH_TOLERANCE" => self.neg_charge_length_tolerance,
            "ABS_COS_CHAR_PRUNE" => self.abs_cos_char_prune,
            "CHAR_LINE_Z_TOLERANCE" => self.char_line_z_tolerance,
            "MAX_ALPHA_DIST" => self.max_alpha_dist,
            _ => return None,
        })
    }

    pub fn set(&mut self, key: &str, value: f64) -> Result<(), ParamsError> {
        let slot = match key {
            "BEZIER_FLATNESS_PTS" => &mut self.bezier_flatness_pts,
            "RECT2LINE_LONG_RATIO" => &mut self.rect2line_long_ratio,
            "RECT2LINE_ANGLE_TOLERANCE" => &mut self.rect2line_angle_tolerance,
            "ANGLE_TOLERANCE_DEGREES" => &mut self.angle_tolerance_degrees,
            "CLOSE_NONPARALLEL_ALPHA" => &mut self.close_nonparallel_alpha,
            "CLOSE_CHAR_LINE_ALPHA" => &mut self.close_char_line_alpha,
            "S-WEDGE_LENGTHS_DIFF_RATIO" => &mut self.s_wedge_lengths_diff_ratio,
            "NEG-CHARGE_Y_POSITION" => &mut self.neg_charge_y_position,
            "NEG-CHARGE_LENGTH_TOLERANCE" => &mut self.neg_charge_length_tolerance,
            "ABS_COS_CHAR_PRUNE" => &mut self.abs_cos_char_prune,
            "CHAR_LINE_Z_TOLERANCE" => &mut self.char_line_z_tolerance,
            "MAX_ALPHA_DIST" => &mut self.max_alpha_dist,
            _ => return Err(ParamsError::UnknownKey(0, key.to_string())),
        };
        *slot = value;
        Ok(())
    }

    /// Range checks. NEG-CHARGE_Y_POSITION additionally admits 0 because the
    /// standard tuning grid tests it; an infinite CHAR_LINE_Z_TOLERANCE
    /// disables the z-score prune.
    pub fn validate(&self) -> Result<(), ParamsError> {
        let positive: [(&'static str, f64); 9] = [
            ("BEZIER_FLATNESS_PTS", self.bezier_flatness_pts),
            ("RECT2LINE_LONG_RATIO", self.rect2line_long_ratio),
            ("CLOSE_NONPARALLEL_ALPHA", self.close_nonparallel_alpha),
            ("CLOSE_CHAR_LINE_ALPHA", self.close_char_line_alpha),
            (
                "S-WEDGE_LENGTHS_DIFF_RATIO",
                self.s_wedge_lengths_diff_ratio,
            ),
            (
                "NEG-CHARGE_LENGTH_TOLERANCE",
                self.neg_charge_length_tolerance,
            ),
            ("ABS_COS_CHAR_PRUNE", self.abs_cos_char_prune),
            ("CHAR_LINE_Z_TOLERANCE", self.char_line_z_tolerance),
            ("MAX_ALPHA_DIST", self.max_alpha_dist),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                return Err(ParamsError::OutOfRange(name, v));
            }
        }
        let ratios: [(&'static str, f64); 6] = [
            ("RECT2LINE_LONG_RATIO", self.rect2line_long_ratio),
            ("CLOSE_NONPARALLEL_ALPHA", self.close_nonparallel_alpha),
            ("CLOSE_CHAR_LINE_ALPHA", self.close_char_line_alpha),
            (
                "S-WEDGE_LENGTHS_DIFF_RATIO",
                self.s_wedge_lengths_diff_ratio,
            ),
            (
                "NEG-CHARGE_LENGTH_TOLERANCE",
                self.neg_charge_length_tolerance,
            ),
            ("MAX_ALPHA_DIST", self.max_alpha_dist),
        ];
        for (name, v) in ratios {
            if !(v > 0.0 && v <= 5.0) {
                return Err(ParamsError::OutOfRange(name, v));
            }
        }
        for (name, v) in [
            ("RECT2LINE_ANGLE_TOLERANCE", self.rect2line_angle_tolerance),
            ("ANGLE_TOLERANCE_DEGREES", self.angle_tolerance_degrees),
        ] {
            if !(v > 0.0 && v < 45.0) {
                return Err(ParamsError::OutOfRange(name, v));
            }
        }
        if !(self.neg_charge_y_position >= 0.0 && self.neg_charge_y_position <= 1.0) {
            return Err(ParamsError::OutOfRange(
                "NEG-CHARGE_Y_POSITION",
                self.neg_charge_y_position,
            ));
        }
        if !(self.abs_cos_char_prune <= 1.0) {
            return Err(ParamsError::OutOfRange(
                "ABS_COS_CHAR_PRUNE",
                self.abs_cos_char_prune,
            ));
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self, ParamsError> {
        let mut params = ParserParams::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ParamsError::Malformed(i + 1, line.to_string()))?;
            let key = key.trim();
            let value = value.trim();
            let v = parse_value(value).ok_or_else(|| ParamsError::BadNumber(i + 1, value.to_string()))?;
            params
                .set(key, v)
                .map_err(|_| ParamsError::UnknownKey(i + 1, key.to_string()))?;
        }
        Ok(params)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for name in PARAM_NAMES {
            let v = self.get(name).unwrap();
            if v.is_infinite() {
                out.push_str(&format!("{name}=inf\n"));
            } else {
                out.push_str(&format!("{name}={v}\n"));
            }
        }
        out
    }
}

fn parse_value(s: &str) -> Option<f64> {
    match s {
        "inf" | "INF" | "infinity" => Some(f64::INFINITY),
        _ => s.parse::<f64>().ok().filter(|v| !v.is_nan()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_through_text() {
        let p = ParserParams::default();
        let text = p.to_text();
        let q = ParserParams::from_text(&text).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn defaults_are_valid() {
        ParserParams::default().validate().unwrap();
    }

    #[test]
    fn every_named_key_is_settable() {
        let mut p = ParserParams::default();
        for name in PARAM_NAMES {
            p.set(name, 1.0).unwrap();
            assert_eq!(p.get(name), Some(1.0));
        }
    }

    #[test]
    fn unknown_key_rejected() {
        assert!(matches!(
            ParserParams::from_text("NOT_A_PARAM=1.0"),
            Err(ParamsError::UnknownKey(1, _))
        ));
    }

    #[test]
    fn infinite_z_tolerance_accepted() {
        let p = ParserParams::from_text("CHAR_LINE_Z_TOLERANCE=inf").unwrap();
        assert!(p.char_line_z_tolerance.is_infinite());
        p.validate().unwrap();
    }

    #[test]
    fn zero_y_position_accepted_for_grid_runs() {
        let mut p = ParserParams::default();
        p.neg_charge_y_position = 0.0;
        p.validate().unwrap();
    }

    #[test]
    fn out_of_range_angle_rejected() {
        let mut p = ParserParams::default();
        p.angle_tolerance_degrees = 60.0;
        assert!(p.validate().is_err());
    }
}
