//! Text format for user-supplied germs.
//!
//! ```text
//! # cusp (t², t³ + t⁴) at the origin of R²
//! name = my_cusp            # optional, defaults to the file stem
//! ambient_dim = 2
//! k = 2
//! c_re = 1
//! c_im = 0                  # optional, defaults to 0
//! term.2.3 = 1, 0           # coefficient of z³ in coordinate 2 (re, im)
//! term.2.4 = 1, 0
//! star_plus = 0, 1          # angle indices l, angle 2πl/k
//! star_minus =              # angle indices l, angle (2l+1)π/k; may be empty
//! point_class = singular    # singular | regular_interior | regular_boundary
//! basepoint = 0, 0          # optional, defaults to the origin
//! ```
//!
//! Coordinates are 1-based; the first coordinate is `c·z^k`, so `term.<coord>`
//! takes `coord` in `2..=ambient_dim`. Coordinates without terms are zero.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use super::{CurveError, CurveGerm, PointClass, PuiseuxBranch, Side, StarSet, TruncatedSeries};
use crate::kv::{self, Entry, ParseError};

fn complex_value(entry: &Entry) -> Result<Complex64, ParseError> {
    let parts: Vec<f64> = entry.parse_list("real number")?;
    match parts.as_slice() {
        [re] => Ok(Complex64::new(*re, 0.0)),
        [re, im] => Ok(Complex64::new(*re, *im)),
        _ => Err(entry.error("expected `re` or `re, im`")),
    }
}

fn star(entry: Option<&Entry>, k: u32, side: Side) -> Result<Option<StarSet>, CurveError> {
    let Some(entry) = entry else { return Ok(None) };
    let indices: Vec<u32> = entry.parse_list("angle index")?;
    if indices.is_empty() {
        return Ok(None);
    }
    StarSet::new(k, side, indices, 1.0)
        .map(Some)
        .map_err(|e| entry.error(e.to_string()).into())
}

/// Parses a germ definition. `default_name` is used when the file has no `name`.
pub fn parse_germ(text: &str, default_name: &str) -> Result<CurveGerm, CurveError> {
    let entries = kv::parse(text, false)?;
    let mut fields: BTreeMap<&str, &Entry> = BTreeMap::new();
    let mut terms: Vec<(&Entry, usize, u32)> = Vec::new();
    for entry in &entries {
        if let Some(rest) = entry.key.strip_prefix("term.") {
            let mut parts = rest.split('.');
            let (Some(coord), Some(exp), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(entry.key_error("expected `term.<coord>.<exponent>`").into());
            };
            let coord: usize = coord
                .parse()
                .map_err(|_| entry.key_error(format!("`{coord}` is not a coordinate index")))?;
            let exp: u32 = exp
                .parse()
                .map_err(|_| entry.key_error(format!("`{exp}` is not an exponent")))?;
            terms.push((entry, coord, exp));
            continue;
        }
        match entry.key.as_str() {
            "name" | "ambient_dim" | "k" | "c_re" | "c_im" | "star_plus" | "star_minus" | "point_class"
            | "basepoint" => {
                fields.insert(entry.key.as_str(), entry);
            }
            other => return Err(entry.key_error(format!("unknown key `{other}`")).into()),
        }
    }
    let last_line = text.lines().count().max(1);
    let required = |key: &str| {
        fields
            .get(key)
            .copied()
            .ok_or_else(|| ParseError::new(last_line, 1, format!("missing required key `{key}`")))
    };
    let dim_entry = required("ambient_dim")?;
    let dim: usize = dim_entry.parse_value("dimension")?;
    if dim < 2 {
        return Err(dim_entry.error("ambient_dim must be at least 2").into());
    }
    let k_entry = required("k")?;
    let k: u32 = k_entry.parse_value("positive integer")?;
    if k == 0 {
        return Err(k_entry.error("k must be positive").into());
    }
    let c_re: f64 = required("c_re")?.parse_value("real number")?;
    let c_im: f64 = match fields.get("c_im") {
        Some(e) => e.parse_value("real number")?,
        None => 0.0,
    };
    let class_entry = required("point_class")?;
    let point_class: PointClass = class_entry
        .value
        .parse()
        .map_err(|e: CurveError| class_entry.error(e.to_string()))?;

    let mut per_coord: Vec<Vec<(u32, Complex64)>> = vec![Vec::new(); dim - 1];
    for (entry, coord, exp) in terms {
        if !(2..=dim).contains(&coord) {
            return Err(entry
                .key_error(format!("coordinate {coord} out of range 2..={dim}"))
                .into());
        }
        if exp == 0 {
            return Err(entry.key_error("exponents must be positive").into());
        }
        per_coord[coord - 2].push((exp, complex_value(entry)?));
    }
    let tail = per_coord
        .into_iter()
        .map(|t| {
            if t.is_empty() {
                Ok(TruncatedSeries::zero(k))
            } else {
                TruncatedSeries::from_terms(t)
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let branch = PuiseuxBranch::new(k, Complex64::new(c_re, c_im), tail)?;
    let basepoint = match fields.get("basepoint") {
        Some(e) => {
            let b: Vec<f64> = e.parse_list("real number")?;
            if b.len() != dim {
                return Err(e.error(format!("basepoint needs {dim} coordinates")).into());
            }
            b
        }
        None => vec![0.0; dim],
    };
    let name = fields.get("name").map_or(default_name, |e| e.value.as_str());
    CurveGerm::new(
        name,
        basepoint,
        branch,
        star(fields.get("star_plus").copied(), k, Side::Plus)?,
        star(fields.get("star_minus").copied(), k, Side::Minus)?,
        point_class,
    )
}

/// Reads a germ file; the default name is the file stem.
pub fn read_germ_file(path: &Path) -> Result<CurveGerm, CurveError> {
    let text = std::fs::read_to_string(path).map_err(|e| CurveError::Io(format!("{}: {e}", path.display())))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("germ");
    parse_germ(&text, stem)
}

fn join_indices(star: Option<&StarSet>) -> String {
    star.map_or(String::new(), |s| {
        s.angle_indices()
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    })
}

/// Serializes a germ so that `parse_germ` reproduces it exactly.
pub fn write_germ(germ: &CurveGerm) -> String {
    let branch = germ.branch();
    let mut out = String::new();
    let _ = writeln!(out, "name = {}", germ.name());
    let _ = writeln!(out, "ambient_dim = {}", germ.ambient_dim());
    let _ = writeln!(out, "k = {}", branch.k());
    let _ = writeln!(out, "c_re = {:?}", branch.c().re);
    let _ = writeln!(out, "c_im = {:?}", branch.c().im);
    for (index, series) in branch.tail().iter().enumerate() {
        for (exp, c) in series.terms() {
            let _ = writeln!(out, "term.{}.{exp} = {:?}, {:?}", index + 2, c.re, c.im);
        }
    }
    let _ = writeln!(out, "star_plus = {}", join_indices(germ.star_plus()));
    let _ = writeln!(out, "star_minus = {}", join_indices(germ.star_minus()));
    let _ = writeln!(out, "point_class = {}", germ.point_class());
    let basepoint: Vec<String> = germ.basepoint().iter().map(|x| format!("{x:?}")).collect();
    let _ = writeln!(out, "basepoint = {}", basepoint.join(", "));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{builtin_germ, BUILTIN_GERMS};

    const CUSP: &str = "\
ambient_dim = 2
k = 2
c_re = 1
term.2.3 = 1, 0
star_plus = 0, 1
star_minus =
point_class = singular
";

    #[test]
    fn parses_cusp_file() {
        let germ = parse_germ(CUSP, "cusp").unwrap();
        assert_eq!(germ.name(), "cusp");
        assert_eq!(germ.branch(), builtin_germ("cusp_2_3").unwrap().branch());
        assert_eq!(germ.segment_angles().len(), 2);
        assert!(germ.star_minus().is_none());
    }

    #[test]
    fn builtins_round_trip() {
        for id in BUILTIN_GERMS {
            let germ = builtin_germ(id).unwrap();
            let text = write_germ(&germ);
            let back = parse_germ(&text, "unused").unwrap();
            assert_eq!(back.branch().k(), germ.branch().k(), "{id}");
            assert_eq!(back.basepoint(), germ.basepoint());
            assert_eq!(back.segment_angles(), germ.segment_angles());
            assert_eq!(back.point_class(), germ.point_class());
            for z in [0.3, -0.7] {
                let z = Complex64::new(z, 0.2);
                assert_eq!(back.point_at(z).unwrap(), germ.point_at(z).unwrap());
            }
        }
    }

    #[test]
    fn errors_point_at_offending_token() {
        let text = CUSP.replace("term.2.3", "term.3.3");
        match parse_germ(&text, "x").unwrap_err() {
            CurveError::Parse(e) => assert_eq!((e.line, e.column), (4, 1)),
            other => panic!("unexpected {other}"),
        }
        let text = CUSP.replace("star_plus = 0, 1", "star_plus = 0, x");
        match parse_germ(&text, "x").unwrap_err() {
            CurveError::Parse(e) => assert_eq!((e.line, e.column), (5, 16)),
            other => panic!("unexpected {other}"),
        }
        let text = CUSP.replace("k = 2\n", "");
        assert!(parse_germ(&text, "x").unwrap_err().to_string().contains("`k`"));
        let text = format!("{CUSP}colour = red\n");
        assert!(parse_germ(&text, "x").unwrap_err().to_string().contains("unknown key"));
    }

    #[test]
    fn normal_form_violation_is_rejected() {
        let text = CUSP.replace("term.2.3", "term.2.2");
        assert!(matches!(parse_germ(&text, "x"), Err(CurveError::InvalidBranch(_))));
    }
}
