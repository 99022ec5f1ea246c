//! Plain-text witness files and table rendering.
//!
//! A witness file holds one or more blocks. Each block is a header line
//! `# I=<groups> J=<arity> n=<bound>` followed by exactly I ruler lines
//! (comma- or whitespace-separated marks), blocks separated by blank lines.
//! Parsing validates everything: each line a Golomb ruler of the declared
//! arity, mark-disjointness, and the bound.

use std::fmt::Write as _;

use thiserror::Error;

use crate::dgr::DgrSet;
use crate::ruler::Ruler;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct DgrParseError {
    pub line: usize,
    pub message: String,
}

fn parse_header(line: usize, text: &str) -> Result<(u32, u32, u32), DgrParseError> {
    let mut groups = None;
    let mut arity = None;
    let mut bound = None;
    for token in text.trim_start_matches('#').split_whitespace() {
        let Some((key, value)) = token.split_once('=') else {
            return Err(DgrParseError {
                line,
                message: format!("header token {token:?} is not key=value"),
            });
        };
        let slot = match key {
            "I" => &mut groups,
            "J" => &mut arity,
            "n" => &mut bound,
            other => {
                return Err(DgrParseError {
                    line,
                    message: format!("unknown header key {other:?}"),
                })
            }
        };
        let parsed: u32 = value.parse().map_err(|e| DgrParseError {
            line,
            message: format!("header value {value:?}: {e}"),
        })?;
        if parsed == 0 {
            return Err(DgrParseError {
                line,
                message: format!("header key {key} must be positive"),
            });
        }
        if slot.replace(parsed).is_some() {
            return Err(DgrParseError {
                line,
                message: format!("duplicate header key {key}"),
            });
        }
    }
    match (groups, arity, bound) {
        (Some(i), Some(j), Some(n)) => Ok((i, j, n)),
        _ => Err(DgrParseError {
            line,
            message: "header needs I=, J= and n=".to_string(),
        }),
    }
}

/// Parses a witness file into fully validated blocks.
pub fn parse_dgr_file(text: &str) -> Result<Vec<DgrSet>, DgrParseError> {
    let mut out = Vec::new();
    let mut lines = text.lines().enumerate().peekable();
    while let Some(&(i, raw)) = lines.peek() {
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            lines.next();
            continue;
        }
        if !trimmed.starts_with('#') {
            return Err(DgrParseError {
                line: i + 1,
                message: "expected a `# I=<I> J=<J> n=<n>` header".to_string(),
            });
        }
        lines.next();
        let header_line = i + 1;
        let (groups, arity, bound) = parse_header(header_line, trimmed)?;
        let mut rulers = Vec::with_capacity(groups as usize);
        for k in 0..groups {
            let Some((j, row)) = lines.next() else {
                return Err(DgrParseError {
                    line: header_line,
                    message: format!("block ended after {k} of {groups} rulers"),
                });
            };
            let row = row.trim();
            if row.is_empty() || row.starts_with('#') {
                return Err(DgrParseError {
                    line: j + 1,
                    message: format!("expected ruler {} of {groups}, found end of block", k + 1),
                });
            }
            let ruler: Ruler = row.parse().map_err(|e| DgrParseError {
                line: j + 1,
                message: e,
            })?;
            if ruler.arity() != arity as usize {
                return Err(DgrParseError {
                    line: j + 1,
                    message: format!("expected {arity} marks, found {}", ruler.arity()),
                });
            }
            rulers.push(ruler);
        }
        let dgr = DgrSet::new(rulers, bound).map_err(|e| DgrParseError {
            line: header_line,
            message: format!("{e}"),
        })?;
        out.push(dgr);
    }
    Ok(out)
}

/// Emits blocks in canonical form (rulers ordered by descending minimum
/// mark), one blank line between blocks, trailing newline.
pub fn emit_dgr_file(blocks: &[DgrSet]) -> String {
    let mut out = String::new();
    for (i, block) in blocks.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let canonical = block.canonical();
        let _ = writeln!(
            out,
            "# I={} J={} n={}",
            canonical.group_count(),
            canonical.arity(),
            canonical.bound()
        );
        for ruler in canonical.rulers() {
            let _ = writeln!(out, "{ruler}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ruler::Ruler;

    fn tiny() -> DgrSet {
        DgrSet::new(
            vec![
                Ruler::new(vec![1, 2, 4]).unwrap(),
                Ruler::new(vec![3, 7, 8]).unwrap(),
            ],
            9,
        )
        .unwrap()
    }

    #[test]
    fn parses_a_two_block_file() {
        let text = "# I=2 J=3 n=9\n1,2,4\n3,7,8\n\n# I=1 J=2 n=5\n2 5\n";
        let blocks = parse_dgr_file(text).unwrap();
        assert_eq!(blocks.len(), 2);
        assert_eq!(blocks[0], tiny());
        assert_eq!(blocks[1].rulers()[0].marks(), &[2, 5]);
        assert_eq!(blocks[1].bound(), 5);
    }

    #[test]
    fn tolerates_blank_lines_and_whitespace() {
        let text = "\n\n  # I=1 J=3 n=9   \n  1, 2, 4  \n\n\n";
        let blocks = parse_dgr_file(text).unwrap();
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].rulers()[0].marks(), &[1, 2, 4]);
    }

    #[test]
    fn empty_input_is_zero_blocks() {
        assert_eq!(parse_dgr_file("").unwrap(), Vec::new());
        assert_eq!(parse_dgr_file("\n  \n").unwrap(), Vec::new());
    }

    #[test]
    fn reports_line_numbers() {
        let missing_header = parse_dgr_file("1,2,4\n").unwrap_err();
        assert_eq!(missing_header.line, 1);

        let bad_arity = parse_dgr_file("# I=1 J=4 n=9\n1,2,4\n").unwrap_err();
        assert_eq!(bad_arity.line, 2);
        assert!(bad_arity.message.contains("expected 4 marks"));

        let not_golomb = parse_dgr_file("# I=1 J=3 n=9\n1,2,3\n").unwrap_err();
        assert_eq!(not_golomb.line, 2);

        let shared_mark = parse_dgr_file("# I=2 J=2 n=9\n1,2\n2,5\n").unwrap_err();
        assert_eq!(shared_mark.line, 1);
        assert!(shared_mark.message.contains("mark 2"), "{shared_mark}");

        let truncated = parse_dgr_file("# I=2 J=2 n=9\n1,2\n").unwrap_err();
        assert!(truncated.message.contains("1 of 2"));

        let above_bound = parse_dgr_file("# I=1 J=2 n=4\n1,5\n").unwrap_err();
        assert_eq!(above_bound.line, 1);
    }

    #[test]
    fn header_validation() {
        assert!(parse_dgr_file("# I=1 J=2\n1,2\n").is_err());
        assert!(parse_dgr_file("# I=1 J=2 n=0\n1,2\n").is_err());
        assert!(parse_dgr_file("# I=1 I=1 J=2 n=5\n1,2\n").is_err());
        assert!(parse_dgr_file("# I=1 J=2 n=5 x=3\n1,2\n").is_err());
        assert!(parse_dgr_file("# I=one J=2 n=5\n1,2\n").is_err());
    }

    #[test]
    fn emit_then_parse_is_canonical_identity() {
        let blocks = vec![tiny(), tiny().shifted(1).unwrap()];
        let text = emit_dgr_file(&blocks);
        let reparsed = parse_dgr_file(&text).unwrap();
        assert_eq!(reparsed.len(), 2);
        for (orig, back) in blocks.iter().zip(&reparsed) {
            assert_eq!(&orig.canonical(), back);
        }
        // Canonical output is a fixed point.
        assert_eq!(emit_dgr_file(&reparsed), text);
    }

    #[test]
    fn emitted_blocks_are_separated_by_blank_lines() {
        let text = emit_dgr_file(&[tiny(), tiny()]);
        assert_eq!(text.matches("\n\n").count(), 1);
        assert!(text.ends_with("1,2,4\n"));
    }
}
