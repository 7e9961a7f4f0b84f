//! Series arguments: eta-quotient expressions or coefficient files.

use std::path::Path;

use asdc_core::error::{Error, Result};
use asdc_core::eta::EtaQuotient;
use asdc_core::rational::{self, Rational};
use asdc_core::series::QSeries;

/// Reads coefficients from a file: a JSON array of integers or rational
/// strings, or text lines holding either `value` or `index value`
/// (the OEIS b-file layout). `#` starts a comment.
pub fn read_coefficients(path: &Path) -> Result<Vec<Rational>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
    parse_coefficients(&text).map_err(|e| Error::Data(format!("{}: {e}", path.display())))
}

pub fn parse_coefficients(text: &str) -> Result<Vec<Rational>> {
    if text.trim_start().starts_with('[') {
        let v: Vec<serde_json::Value> =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        return v
            .iter()
            .map(|x| match x {
                serde_json::Value::String(s) => rational::parse(s),
                serde_json::Value::Number(n) => rational::parse(&n.to_string()),
                other => Err(Error::Parse(format!("not a coefficient: {other}"))),
            })
            .collect();
    }
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let value = match fields.as_slice() {
            [v] => v,
            [i, v] => {
                let idx: usize = i
                    .parse()
                    .map_err(|_| Error::Parse(format!("line {}: bad index {i:?}", lineno + 1)))?;
                if idx != out.len() {
                    return Err(Error::Parse(format!(
                        "line {}: index {idx} out of sequence (expected {})",
                        lineno + 1,
                        out.len()
                    )));
                }
                v
            }
            _ => {
                return Err(Error::Parse(format!(
                    "line {}: expected one or two fields",
                    lineno + 1
                )))
            }
        };
        out.push(rational::parse(value)?);
    }
    Ok(out)
}

/// A series argument: `@path` reads power coefficients from a file,
/// anything else is an eta-quotient expression.
pub fn series_arg(arg: &str, level: Option<u64>, prec: i64) -> Result<QSeries> {
    match arg.strip_prefix('@') {
        Some(path) => {
            let c = read_coefficients(Path::new(path))?;
            Ok(QSeries::from_power_coeffs(c).truncate(prec))
        }
        None => EtaQuotient::parse(arg, level)?.series(prec),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use asdc_core::rational::{frac, int};

    #[test]
    fn text_and_json_layouts() {
        let b = parse_coefficients("# comment\n0 1\n1 -5\n2 7/3\n").unwrap();
        assert_eq!(b, vec![int(1), int(-5), frac(7, 3)]);
        let b = parse_coefficients("1\n-5 # trailing\n").unwrap();
        assert_eq!(b, vec![int(1), int(-5)]);
        let b = parse_coefficients("[1, \"-5\", \"7/3\"]").unwrap();
        assert_eq!(b, vec![int(1), int(-5), frac(7, 3)]);
    }

    #[test]
    fn malformed_files_are_rejected() {
        assert!(parse_coefficients("0 1\n2 3\n").is_err());
        assert!(parse_coefficients("1 2 3\n").is_err());
        assert!(parse_coefficients("x\n").is_err());
        assert!(parse_coefficients("[true]").is_err());
    }
}
