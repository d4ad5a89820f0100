//! File formats for moment sequences, recurrence data, and reports.
//!
//! Moment files are either JSON (a single array of scalars) or CSV (one
//! scalar per line, `#` comments allowed). Scalars use the textual forms of
//! [`Scalar`]: `"3/4"` exact, `1.5` or `"re,im"` complex.

use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::orthopoly::MonicPolySystem;
use crate::scalar::{Field, Scalar};

/// Read a moment file, dispatching on the `.json` extension and treating
/// everything else as CSV.
pub fn read_moments(path: &Path) -> Result<Vec<Scalar>> {
    let text = fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        Ok(serde_json::from_str(&text)?)
    } else {
        parse_moments_csv(&text)
    }
}

pub fn parse_moments_csv(text: &str) -> Result<Vec<Scalar>> {
    text.lines()
        .map(str::trim)
        .filter(|line| !line.is_empty() && !line.starts_with('#'))
        .map(Scalar::parse)
        .collect()
}

pub fn moments_to_csv(values: &[Scalar]) -> String {
    let mut out = String::new();
    for v in values {
        out.push_str(&v.to_csv_cell());
        out.push('\n');
    }
    out
}

pub fn moments_to_json(values: &[Scalar]) -> Result<String> {
    Ok(serde_json::to_string_pretty(&values)?)
}

/// Write any serializable report as pretty JSON, or print it to stdout when
/// no path is given.
pub fn emit_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    emit_text(&text, path)
}

pub fn emit_text(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => {
            let mut owned = text.to_owned();
            if !owned.ends_with('\n') {
                owned.push('\n');
            }
            fs::write(p, owned)?;
        }
        None => println!("{text}"),
    }
    Ok(())
}

/// JSON view of an orthogonal system: recurrence coefficients, norms, and
/// ascending coefficient rows of the monic polynomials.
pub fn system_to_json<F: Field>(sys: &MonicPolySystem<F>) -> serde_json::Value {
    let scalars = |vals: &[F]| -> Vec<Scalar> { vals.iter().map(F::to_scalar).collect() };
    let polys: Vec<Vec<Scalar>> =
        sys.polys().iter().map(|p| scalars(p.coeffs())).collect();
    json!({
        "mode": F::MODE,
        "b": scalars(sys.recurrence_b()),
        "u": scalars(sys.recurrence_u()),
        "h": scalars(sys.norms()),
        "polys": polys,
    })
}

/// CSV view of the same data: one row per degree with `b`, `u`, `h`
/// columns (`u` is blank at degree zero). Cells holding complex values are
/// quoted since they contain commas.
pub fn system_to_csv<F: Field>(sys: &MonicPolySystem<F>) -> String {
    let mut out = String::from("degree,b,u,h\n");
    let b = sys.recurrence_b();
    let u = sys.recurrence_u();
    let h = sys.norms();
    for k in 0..b.len() {
        let u_cell = if k == 0 {
            String::new()
        } else {
            csv_quote(&u[k - 1].to_scalar().to_csv_cell())
        };
        let h_cell = match h.get(k) {
            Some(v) => csv_quote(&v.to_scalar().to_csv_cell()),
            None => String::new(),
        };
        let b_cell = csv_quote(&b[k].to_scalar().to_csv_cell());
        out.push_str(&format!("{k},{b_cell},{u_cell},{h_cell}\n"));
    }
    out
}

/// A CSV cell may not contain an unquoted comma; complex scalars do, so
/// quote them.
pub fn csv_quote(cell: &str) -> String {
    if cell.contains(',') {
        format!("\"{cell}\"")
    } else {
        cell.to_owned()
    }
}

pub fn read_csv_or_json_scalars(path: &Path, what: &'static str) -> Result<Vec<Scalar>> {
    let values = read_moments(path)?;
    if values.is_empty() {
        return Err(Error::InsufficientData { what, needed: 1, available: 0 });
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use tempfile::tempdir;

    fn r(n: i64, d: i64) -> Scalar {
        Scalar::Exact(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    #[test]
    fn csv_round_trip() {
        let values = vec![r(1, 1), r(2, 3), r(-7, 5)];
        let text = moments_to_csv(&values);
        assert_eq!(parse_moments_csv(&text).unwrap(), values);
    }

    #[test]
    fn csv_skips_comments_and_blanks() {
        let parsed = parse_moments_csv("# moments\n1\n\n1/2\n").unwrap();
        assert_eq!(parsed, vec![r(1, 1), r(1, 2)]);
    }

    #[test]
    fn json_file_round_trip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("moments.json");
        let values = vec![r(1, 1), r(1, 2), r(1, 3)];
        emit_text(&moments_to_json(&values).unwrap(), Some(&path)).unwrap();
        assert_eq!(read_moments(&path).unwrap(), values);
    }

    #[test]
    fn system_json_has_expected_fields() {
        use crate::moments::MomentSequence;
        use crate::scalar::Tolerance;

        let g = MomentSequence::from_fn(|n| {
            Ok(BigRational::new(BigInt::from(1), BigInt::from(n as i64 + 1)))
        })
        .unwrap();
        let sys = MonicPolySystem::from_moments(&g, 3, &Tolerance::default()).unwrap();
        let value = system_to_json(&sys);
        assert_eq!(value["mode"], "exact");
        assert_eq!(value["b"][0], "1/2");
        assert_eq!(value["u"][0], "1/12");
        assert_eq!(value["polys"][1][1], "1");
    }

    #[test]
    fn quoting_protects_complex_cells() {
        assert_eq!(csv_quote("1/2"), "1/2");
        assert_eq!(csv_quote("1.5,0.25"), "\"1.5,0.25\"");
    }
}
