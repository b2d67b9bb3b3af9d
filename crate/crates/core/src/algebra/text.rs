//! The line-oriented algebra file format.
//!
//! ```text
//! algebra Z3
//! carrier: 0 1 2
//! op add/2:
//! 0 1 2
//! 1 2 0
//! 2 0 1
//! op e/0:
//! 0
//! ```
//!
//! An `op name/k:` header is followed by `n^(k-1)` rows of `n` labels
//! (row-major); a constant takes a single label on the next line.

use std::collections::HashMap;

use super::{FiniteAlgebra, Signature};
use crate::error::{Error, Result};

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::AlgebraFormat { line, msg: msg.into() }
}

struct PendingOp {
    name: String,
    arity: usize,
    header_line: usize,
    cells: Vec<usize>,
    rows_seen: usize,
}

pub fn parse_algebra(text: &str) -> Result<FiniteAlgebra> {
    let mut name: Option<String> = None;
    let mut carrier: Option<(Vec<String>, HashMap<String, usize>)> = None;
    let mut ops: Vec<PendingOp> = Vec::new();

    let lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    for (no, line) in lines {
        if let Some(op) = ops.last_mut() {
            let n = carrier.as_ref().map_or(0, |c| c.0.len());
            let rows = expected_rows(n, op.arity);
            if op.rows_seen < rows {
                let (_, index) = carrier.as_ref().expect("op after carrier");
                let width = if op.arity == 0 { 1 } else { n };
                let cells: Vec<&str> = line.split_whitespace().collect();
                if cells.len() != width {
                    return Err(err(
                        no,
                        format!(
                            "table row for `{}` has {} cells, expected {width}",
                            op.name,
                            cells.len()
                        ),
                    ));
                }
                for cell in cells {
                    let v = *index
                        .get(cell)
                        .ok_or_else(|| err(no, format!("unknown element `{cell}`")))?;
                    op.cells.push(v);
                }
                op.rows_seen += 1;
                continue;
            }
        }

        let (keyword, rest) = line
            .split_once(|c: char| c.is_whitespace() || c == ':')
            .unwrap_or((line, ""));
        match keyword {
            "algebra" => {
                let rest = rest.trim();
                if rest.is_empty() || rest.contains(char::is_whitespace) {
                    return Err(err(no, "expected `algebra <name>`"));
                }
                if name.replace(rest.to_string()).is_some() {
                    return Err(err(no, "duplicate `algebra` directive"));
                }
            }
            "carrier" => {
                if carrier.is_some() {
                    return Err(err(no, "duplicate `carrier` directive"));
                }
                let rest = rest.trim_start().trim_start_matches(':');
                let labels: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                if labels.is_empty() {
                    return Err(err(no, "empty carrier"));
                }
                let mut index = HashMap::new();
                for (i, l) in labels.iter().enumerate() {
                    if index.insert(l.clone(), i).is_some() {
                        return Err(err(no, format!("duplicate label `{l}`")));
                    }
                }
                carrier = Some((labels, index));
            }
            "op" => {
                if carrier.is_none() {
                    return Err(err(no, "`op` before `carrier`"));
                }
                let spec: String = rest.chars().filter(|c| !c.is_whitespace()).collect();
                let spec = spec.strip_suffix(':').unwrap_or(&spec);
                let (op_name, arity) = spec
                    .split_once('/')
                    .ok_or_else(|| err(no, "expected `op <name>/<arity>:`"))?;
                let arity: usize = arity.parse().map_err(|_| err(no, format!("bad arity `{arity}`")))?;
                if !crate::is_identifier(op_name) {
                    return Err(err(no, format!("bad operation name `{op_name}`")));
                }
                if ops.iter().any(|o| o.name == op_name) {
                    return Err(err(no, format!("duplicate operation `{op_name}`")));
                }
                ops.push(PendingOp {
                    name: op_name.to_string(),
                    arity,
                    header_line: no,
                    cells: Vec::new(),
                    rows_seen: 0,
                });
            }
            other => return Err(err(no, format!("unknown directive `{other}`"))),
        }
    }

    let name = name.ok_or_else(|| err(1, "missing `algebra <name>` directive"))?;
    let (labels, _) = carrier.ok_or_else(|| err(1, "missing `carrier:` directive"))?;
    let n = labels.len();
    for op in &ops {
        let rows = expected_rows(n, op.arity);
        if op.rows_seen < rows {
            return Err(err(
                op.header_line,
                format!("table for `{}` has {} rows, expected {rows}", op.name, op.rows_seen),
            ));
        }
    }
    let signature = Signature::new(ops.iter().map(|o| (o.name.clone(), o.arity)))?;
    let tables = ops.into_iter().map(|o| o.cells).collect();
    FiniteAlgebra::new(name, signature, labels, tables)
}

fn expected_rows(n: usize, arity: usize) -> usize {
    if arity == 0 {
        1
    } else {
        n.pow(arity as u32 - 1)
    }
}

pub fn render_algebra(algebra: &FiniteAlgebra) -> String {
    let n = algebra.size();
    let mut out = format!("algebra {}\ncarrier: {}\n", algebra.name(), algebra.carrier().join(" "));
    for (i, op) in algebra.signature().ops().iter().enumerate() {
        out.push_str(&format!("op {}/{}:\n", op.name, op.arity));
        let width = if op.arity == 0 { 1 } else { n };
        for row in algebra.table(i).chunks(width) {
            let labels: Vec<&str> = row.iter().map(|&v| algebra.label(v)).collect();
            out.push_str(&labels.join(" "));
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn render_parse_roundtrip() {
        for h in fixtures::library() {
            assert_eq!(parse_algebra(&render_algebra(&h)).unwrap(), h);
        }
    }

    #[test]
    fn whitespace_and_comments() {
        let src =
            "# two element group\n\n  algebra   Z2 \ncarrier:0   1\nop add / 2 :\n 0 1\n1   0\n# neutral\nop e/0:\n0\n";
        let h = parse_algebra(src).unwrap();
        assert_eq!(h.size(), 2);
        assert_eq!(h.apply(0, &[1, 1]), 0);
    }

    #[test]
    fn duplicate_label_reports_line() {
        let e = parse_algebra("algebra A\ncarrier: a b a\n").unwrap_err();
        assert_eq!(
            e,
            Error::AlgebraFormat {
                line: 2,
                msg: "duplicate label `a`".into()
            }
        );
    }

    #[test]
    fn missing_cells_report_line() {
        let e = parse_algebra("algebra A\ncarrier: a b\nop f/2:\na b\nb\n").unwrap_err();
        assert!(matches!(e, Error::AlgebraFormat { line: 5, .. }), "{e}");
        let e = parse_algebra("algebra A\ncarrier: a b\nop f/2:\na b\n").unwrap_err();
        assert!(matches!(e, Error::AlgebraFormat { line: 3, .. }), "{e}");
        let e = parse_algebra("algebra A\ncarrier: a b\nop f/1:\na c\n").unwrap_err();
        assert!(matches!(e, Error::AlgebraFormat { line: 4, .. }), "{e}");
    }
}
