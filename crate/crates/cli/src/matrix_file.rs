//! Plain-text complex matrices: one row per line, entries such as `1`,
//! `-0.5+0.866i`, `i`, `2e-3-1i`, separated by whitespace. Blank lines and
//! text after `#` are ignored.

use num_complex::Complex64;
use quditgates::numkernel::ComplexMatrix;

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix, String> {
    let mut rows = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|tok| parse_complex(tok).map_err(|e| format!("line {}: {e}", lineno + 1)))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err("matrix file is empty".into());
    }
    ComplexMatrix::from_rows(&rows).map_err(|e| e.to_string())
}

pub fn parse_complex(tok: &str) -> Result<Complex64, String> {
    let bad = || format!("cannot parse {tok:?} as a+bi");
    let Some(body) = tok.strip_suffix('i') else {
        return tok.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        s => s,
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entries() {
        let c = |re, im| Complex64::new(re, im);
        for (tok, want) in [
            ("1", c(1.0, 0.0)),
            ("-2.5", c(-2.5, 0.0)),
            ("i", c(0.0, 1.0)),
            ("-i", c(0.0, -1.0)),
            ("0.5+0.25i", c(0.5, 0.25)),
            ("0.5-i", c(0.5, -1.0)),
            ("1e-3-2E+1i", c(1e-3, -20.0)),
            ("-1e-2i", c(0.0, -1e-2)),
        ] {
            assert_eq!(parse_complex(tok).unwrap(), want, "{tok}");
        }
        for bad in ["", "1+", "a+bi", "1+2j", "1++2i"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn matrix_with_comments() {
        let m = parse_matrix("# diag\n1 0\n\n0 -1+0i  # second row\n").unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 2));
        assert_eq!(m[(1, 1)], Complex64::new(-1.0, 0.0));
        assert!(parse_matrix("1 0\n0\n").is_err());
        assert!(parse_matrix("\n# nothing\n").is_err());
    }
}
