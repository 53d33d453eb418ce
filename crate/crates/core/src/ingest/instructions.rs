//! Interpreter for the instruction-stream input format.
//!
//! The dialect is a small PDF-style subset. Tokens are whitespace separated,
//! operands precede their operator (postfix, pushed on a stack), and every
//! graphic object is terminated by an `EG` line. Operators:
//!
//! | op | operands            | effect                                        |
//! |----|---------------------|-----------------------------------------------|
//! | cm | a b c d e f         | concatenate affine context matrix (cumulative) |
//! | w  | width               | set current line width                         |
//! | m  | x y                 | start a path at (x, y)                         |
//! | l  | x y                 | append a line to (x, y)                        |
//! | c  | x1 y1 x2 y2 x3 y3   | append a cubic Bézier to (x3, y3)              |
//! | re | x y w h             | filled rectangle (expanded to a 4-gon)         |
//! | ch | x y w h (glyph)     | character cell with label                      |
//! | EG | —                   | end of the current graphic object              |
//!
//! A path whose last point returns to its start is treated as a closed,
//! filled polygon. All coordinates pass through the cumulative context
//! matrix at the moment their operator executes.

use thiserror::Error;

use super::{PathPiece, RawGraphic, RawShape};
use crate::geometry::{Point, Rect, EPS};
use crate::primitive::Source;

#[derive(Debug, Error, PartialEq)]
pub enum InstrError {
    #[error("line {line}: operator {op:?} expects {expected} operands, found {found}")]
    OperandCount {
        line: usize,
        op: String,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: unknown operator {op:?}")]
    UnknownOperator { line: usize, op: String },
    #[error("line {line}: {found} unconsumed operand(s) before {context}")]
    UnconsumedOperands {
        line: usize,
        found: usize,
        context: String,
    },
    #[error("line {line}: operator {op:?} applied with no open path")]
    NoOpenPath { line: usize, op: String },
    #[error("line {line}: operator {op:?} expects numeric operands")]
    BadOperandType { line: usize, op: String },
    #[error("line {line}: {op:?} expects a (glyph) string operand")]
    MissingGlyph { line: usize, op: String },
    #[error("line {line}: unterminated (glyph) string")]
    UnterminatedString { line: usize },
    #[error("line {line}: non-finite coordinate after transform")]
    NonFinite { line: usize },
    #[error("line {line}: context matrix is singular")]
    SingularMatrix { line: usize },
}

/// Affine context matrix (a b c d e f): maps (x, y) to
/// (a·x + c·y + e, b·x + d·y + f).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContextMatrix {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

impl ContextMatrix {
    pub const IDENTITY: ContextMatrix = ContextMatrix {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
        e: 0.0,
        f: 0.0,
    };

    pub fn apply(&self, p: Point) -> Point {
        Point::new(
            self.a * p.x + self.c * p.y + self.e,
            self.b * p.x + self.d * p.y + self.f,
        )
    }

    /// Composition applying `self` first, then `outer`.
    pub fn then(&self, outer: &ContextMatrix) -> ContextMatrix {
        ContextMatrix {
            a: self.a * outer.a + self.b * outer.c,
            b: self.a * outer.b + self.b * outer.d,
            c: self.c * outer.a + self.d * outer.c,
            d: self.c * outer.b + self.d * outer.d,
            e: self.e * outer.a + self.f * outer.c + outer.e,
            f: self.e * outer.b + self.f * outer.d + outer.f,
        }
    }

    pub fn determinant(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    /// Uniform scale factor applied to stroke widths.
    pub fn width_scale(&self) -> f64 {
        self.determinant().abs().sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Operand {
    Num(f64),
    Str(String),
}

struct Token {
    line: usize,
    text: TokenText,
}

enum TokenText {
    Word(String),
    Str(String),
}

fn tokenize(text: &str) -> Result<Vec<Token>, InstrError> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1usize;
    while let Some(&ch) = chars.peek() {
        if ch == '\n' {
            line += 1;
            chars.next();
        } else if ch.is_whitespace() {
            chars.next();
        } else if ch == '(' {
            chars.next();
            let mut s = String::new();
            let mut closed = false;
            for c in chars.by_ref() {
                if c == ')' {
                    closed = true;
                    break;
                }
                if c == '\n' {
                    return Err(InstrError::UnterminatedString { line });
                }
                s.push(c);
            }
            if !closed {
                return Err(InstrError::UnterminatedString { line });
            }
            tokens.push(Token {
                line,
                text: TokenText::Str(s),
            });
        } else {
            let mut w = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_whitespace() || c == '(' {
                    break;
                }
                w.push(c);
                chars.next();
            }
            tokens.push(Token {
                line,
                text: TokenText::Word(w),
            });
        }
    }
    Ok(tokens)
}

struct Interp {
    ctm: ContextMatrix,
    line_width: f64,
    stack: Vec<Operand>,
    path: Option<(Point, Vec<PathPiece>)>,
    out: Vec<RawGraphic>,
}

impl Interp {
    fn new() -> Self {
        Interp {
            ctm: ContextMatrix::IDENTITY,
            line_width: 1.0,
            stack: Vec::new(),
            path: None,
            out: Vec::new(),
        }
    }

    fn pop_numbers(&mut self, n: usize, line: usize, op: &str) -> Result<Vec<f64>, InstrError> {
        if self.stack.len() != n {
            return Err(InstrError::OperandCount {
                line,
                op: op.to_string(),
                expected: n,
                found: self.stack.len(),
            });
        }
        let mut vals = Vec::with_capacity(n);
        for operand in self.stack.drain(..) {
            match operand {
                Operand::Num(v) => vals.push(v),
                Operand::Str(_) => {
                    return Err(InstrError::BadOperandType {
                        line,
                        op: op.to_string(),
                    })
                }
            }
        }
        Ok(vals)
    }

    fn transform(&self, x: f64, y: f64, line: usize) -> Result<Point, InstrError> {
        let p = self.ctm.apply(Point::new(x, y));
        if p.x.is_finite() && p.y.is_finite() {
            Ok(p)
        } else {
            Err(InstrError::NonFinite { line })
        }
    }

    fn flush_path(&mut self) {
        if let Some((start, pieces)) = self.path.take() {
            if pieces.is_empty() {
                return; // a bare move draws nothing
            }
            // a path that returns to its start is a closed, filled polygon
            let end = match *pieces.last().unwrap() {
                PathPiece::LineTo(p) => p,
                PathPiece::CurveTo(_, _, p) => p,
            };
            let closed = end.distance(&start) <= EPS && pieces.len() >= 3;
            let shape = if closed {
                let mut ring = vec![start];
                for piece in &pieces[..pieces.len() - 1] {
                    match piece {
                        PathPiece::LineTo(p) => ring.push(*p),
                        PathPiece::CurveTo(_, _, p) => ring.push(*p),
                    }
                }
                RawShape::FilledPolygon { ring }
            } else {
                RawShape::Path { start, pieces }
            };
            self.out.push(RawGraphic {
                shape,
                line_width: self.line_width * self.ctm.width_scale(),
                source: Source::Instructions,
            });
        }
    }

    fn run(&mut self, tokens: Vec<Token>) -> Result<(), InstrError> {
        let mut last_line = 1usize;
        for token in tokens {
            last_line = token.line;
            match token.text {
                TokenText::Str(s) => self.stack.push(Operand::Str(s)),
                TokenText::Word(w) => {
                    if let Ok(v) = w.parse::<f64>() {
                        if v.is_nan() {
                            return Err(InstrError::NonFinite { line: token.line });
                        }
                        self.stack.push(Operand::Num(v));
                        continue;
                    }
                    self.operator(&w, token.line)?;
                }
            }
        }
        if !self.stack.is_empty() {
            return Err(InstrError::UnconsumedOperands {
                line: last_line,
                found: self.stack.len(),
                context: "end of stream".to_string(),
            });
        }
        self.flush_path();
        Ok(())
    }

    fn operator(&mut self, op: &str, line: usize) -> Result<(), InstrError> {
        match op {
            "cm" => {
                let v = self.pop_numbers(6, line, op)?;
                let m = ContextMatrix {
                    a: v[0],
                    b: v[1],
                    c: v[2],
                    d: v[3],
                    e: v[4],
                    f: v[5],
                };
                if m.determinant().abs() <= 1e-12 {
                    return Err(InstrError::SingularMatrix { line });
                }
                self.ctm = m.then(&self.ctm);
            }
            "w" => {
                let v = self.pop_numbers(1, line, op)?;
                self.line_width = v[0];
            }
            "m" => {
                let v = self.pop_numbers(2, line, op)?;
                self.flush_path();
                let p = self.transform(v[0], v[1], line)?;
                self.path = Some((p, Vec::new()));
            }
            "l" => {
                let v = self.pop_numbers(2, line, op)?;
                let p = self.transform(v[0], v[1], line)?;
                match &mut self.path {
                    Some((_, pieces)) => pieces.push(PathPiece::LineTo(p)),
                    None => {
                        return Err(InstrError::NoOpenPath {
                            line,
                            op: op.to_string(),
                        })
                    }
                }
            }
            "c" => {
                let v = self.pop_numbers(6, line, op)?;
                let c1 = self.transform(v[0], v[1], line)?;
                let c2 = self.transform(v[2], v[3], line)?;
                let end = self.transform(v[4], v[5], line)?;
                match &mut self.path {
                    Some((_, pieces)) => pieces.push(PathPiece::CurveTo(c1, c2, end)),
                    None => {
                        return Err(InstrError::NoOpenPath {
                            line,
                            op: op.to_string(),
                        })
                    }
                }
            }
            "re" => {
                let v = self.pop_numbers(4, line, op)?;
                self.flush_path();
                let (x, y, w, h) = (v[0], v[1], v[2], v[3]);
                let ring = vec![
                    self.transform(x, y, line)?,
                    self.transform(x + w, y, line)?,
                    self.transform(x + w, y + h, line)?,
                    self.transform(x, y + h, line)?,
                ];
                self.out.push(RawGraphic {
                    shape: RawShape::FilledPolygon { ring },
                    line_width: self.line_width * self.ctm.width_scale(),
                    source: Source::Instructions,
                });
            }
            "ch" => {
                // x y w h (glyph) ch
                if self.stack.len() != 5 {
                    return Err(InstrError::OperandCount {
                        line,
                        op: op.to_string(),
                        expected: 5,
                        found: self.stack.len(),
                    });
                }
                let glyph = match self.stack.pop() {
                    Some(Operand::Str(s)) if !s.is_empty() => s,
                    _ => {
                        return Err(InstrError::MissingGlyph {
                            line,
                            op: op.to_string(),
                        })
                    }
                };
                let v = self.pop_numbers(4, line, op)?;
                self.flush_path();
                let (x, y, w, h) = (v[0], v[1], v[2], v[3]);
                let corners = [
                    self.transform(x, y, line)?,
                    self.transform(x + w, y, line)?,
                    self.transform(x + w, y + h, line)?,
                    self.transform(x, y + h, line)?,
                ];
                let bbox = Rect::hull(corners.iter());
                self.out.push(RawGraphic {
                    shape: RawShape::Char { bbox, glyph },
                    line_width: self.line_width * self.ctm.width_scale(),
                    source: Source::Instructions,
                });
            }
            "EG" => {
                if !self.stack.is_empty() {
                    return Err(InstrError::UnconsumedOperands {
                        line,
                        found: self.stack.len(),
                        context: "EG".to_string(),
                    });
                }
                self.flush_path();
            }
            _ => {
                return Err(InstrError::UnknownOperator {
                    line,
                    op: op.to_string(),
                })
            }
        }
        Ok(())
    }
}

/// Interprets an instruction stream into raw graphics with all coordinates
/// passed through the cumulative affine context.
pub fn parse_instruction_stream(text: &str) -> Result<Vec<RawGraphic>, InstrError> {
    let tokens = tokenize(text)?;
    let mut interp = Interp::new();
    interp.run(tokens)?;
    Ok(interp.out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flipped_matrix_transforms_line_endpoints() {
        let stream = "1 0 0 -1 0 75 cm\n45.926 36.102 m\n106.832 71.266 l\nEG\n";
        let out = parse_instruction_stream(stream).unwrap();
        assert_eq!(out.len(), 1);
        match &out[0].shape {
            RawShape::Path { start, pieces } => {
                assert!((start.x - 45.926).abs() < 1e-9);
                assert!((start.y - (75.0 - 36.102)).abs() < 1e-9);
                assert_eq!(pieces.len(), 1);
                match pieces[0] {
                    PathPiece::LineTo(p) => {
                        assert!((p.x - 106.832).abs() < 1e-9);
                        assert!((p.y - (75.0 - 71.266)).abs() < 1e-9);
                    }
                    _ => panic!("expected line piece"),
                }
            }
            other => panic!("expected path, got {other:?}"),
        }
    }

    #[test]
    fn identity_matrix_line() {
        let out = parse_instruction_stream("1 0 0 1 0 0 cm\n0 0 m\n1 0 l\nEG\n").unwrap();
        assert_eq!(out.len(), 1);
        match &out[0].shape {
            RawShape::Path { start, pieces } => {
                assert_eq!(*start, Point::new(0.0, 0.0));
                assert_eq!(pieces, &vec![PathPiece::LineTo(Point::new(1.0, 0.0))]);
            }
            other => panic!("expected path, got {other:?}"),
        }
    }

    #[test]
    fn trailing_operands_without_operator_error() {
        let err = parse_instruction_stream("0 0 m 1 0 l 1 0 0 1 0 0").unwrap_err();
        assert!(matches!(err, InstrError::UnconsumedOperands { found: 6, .. }));
    }

    #[test]
    fn unknown_operator_is_not_skipped() {
        let err = parse_instruction_stream("0 0 m 1 0 l 2 2 zz EG").unwrap_err();
        assert!(matches!(err, InstrError::UnknownOperator { .. }));
    }

    #[test]
    fn operand_count_error_names_line_and_operator() {
        let err = parse_instruction_stream("0 0 m\n1 l\nEG").unwrap_err();
        assert_eq!(
            err,
            InstrError::OperandCount {
                line: 2,
                op: "l".to_string(),
                expected: 2,
                found: 1
            }
        );
    }

    #[test]
    fn cumulative_context_matrices_compose() {
        // scale then translate: translate applies first (closest to points)
        let out =
            parse_instruction_stream("2 0 0 2 0 0 cm\n1 0 0 1 5 0 cm\n1 0 m\n2 0 l\nEG").unwrap();
        match &out[0].shape {
            RawShape::Path { start, .. } => {
                assert!((start.x - 12.0).abs() < 1e-9);
            }
            other => panic!("expected path, got {other:?}"),
        }
    }

    #[test]
    fn closed_path_becomes_filled_polygon() {
        let out =
            parse_instruction_stream("0 0 m 10 0 l 10 10 l 0 10 l 0 0 l EG").unwrap();
        assert!(matches!(&out[0].shape, RawShape::FilledPolygon { ring } if ring.len() == 4));
    }

    #[test]
    fn rectangle_expands_to_four_vertices() {
        let out = parse_instruction_stream("1 2 10 4 re EG").unwrap();
        match &out[0].shape {
            RawShape::FilledPolygon { ring } => {
                assert_eq!(ring.len(), 4);
                assert_eq!(ring[0], Point::new(1.0, 2.0));
                assert_eq!(ring[2], Point::new(11.0, 6.0));
            }
            other => panic!("expected polygon, got {other:?}"),
        }
    }

    #[test]
    fn char_cell_carries_glyph() {
        let out = parse_instruction_stream("10 20 7 10 (N) ch EG").unwrap();
        match &out[0].shape {
            RawShape::Char { bbox, glyph } => {
                assert_eq!(glyph, "N");
                assert_eq!(bbox.min, Point::new(10.0, 20.0));
                assert_eq!(bbox.max, Point::new(17.0, 30.0));
            }
            other => panic!("expected char, got {other:?}"),
        }
    }

    #[test]
    fn line_width_scales_with_matrix() {
        let out = parse_instruction_stream("3 w\n2 0 0 2 0 0 cm\n0 0 m 1 0 l EG").unwrap();
        assert!((out[0].line_width - 6.0).abs() < 1e-9);
    }
}
