//! Matrix text format: the dimension on the first line, then one row per line
//! as whitespace-separated decimals. Values are written with 17 significant
//! digits so every `f64` survives a round trip.

use nalgebra::DMatrix;

use super::{SpectraError, SymmetricMatrix};

pub(super) fn write(a: &SymmetricMatrix) -> String {
    let n = a.dim();
    let mut out = format!("{n}\n");
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format!("{:.16e}", a.get(i, j))).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub(super) fn read(s: &str) -> Result<SymmetricMatrix, SpectraError> {
    let mut lines = s.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(SpectraError::Parse { line: 1, message: "missing dimension".into() })?;
    let n: usize = header
        .trim()
        .parse()
        .map_err(|_| SpectraError::Parse { line: 1, message: format!("bad dimension {:?}", header.trim()) })?;
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        let (idx, line) = lines
            .next()
            .ok_or(SpectraError::Parse { line: i + 2, message: format!("expected {n} rows, found {i}") })?;
        let vals: Vec<&str> = line.split_whitespace().collect();
        if vals.len() != n {
            return Err(SpectraError::Parse {
                line: idx + 1,
                message: format!("expected {n} values, found {}", vals.len()),
            });
        }
        for (j, v) in vals.iter().enumerate() {
            m[(i, j)] = v
                .parse::<f64>()
                .map_err(|_| SpectraError::Parse { line: idx + 1, message: format!("bad number {v:?}") })?;
        }
    }
    if let Some((idx, _)) = lines.next() {
        return Err(SpectraError::Parse { line: idx + 1, message: "trailing data".into() });
    }
    SymmetricMatrix::from_dmatrix(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_round_trip() {
        let a = SymmetricMatrix::from_fn(5, |i, j| ((i * 5 + j) as f64).sqrt() / 3.0 - 0.1 * i as f64);
        let b = SymmetricMatrix::from_text(&a.to_text()).unwrap();
        assert_eq!(a, b);
        assert!(a.to_text().starts_with("5\n"));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert!(matches!(read("2\n1 0\n0\n"), Err(SpectraError::Parse { line: 3, .. })));
        assert!(matches!(read("x\n"), Err(SpectraError::Parse { line: 1, .. })));
        assert!(matches!(read("1\n1\n2\n"), Err(SpectraError::Parse { line: 3, .. })));
        assert!(matches!(read("2\n0 1\n2 0\n"), Err(SpectraError::NotSymmetric { .. })));
    }
}
