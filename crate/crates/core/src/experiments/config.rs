//! Scenario configuration files.
//!
//! ```text
//! [scenario]
//! name = cusp_scan            # identifier, names the output files
//! study = markov_scan         # markov_scan | green_eval | geodesic_fit | hcp_fit | verify_all
//! germ = cusp_2_3             # built-in id, or
//! germ_file = germs/my.germ   # relative to the config file
//! seed = 1
//!
//! [markov]
//! degrees = 2, 3, 4, 6, 8, 12
//! epsilons = 1, 0.5, 0.25, 0.125
//! density = 200
//!
//! [green]
//! set = interval              # interval | germ
//! a = -1
//! b = 1
//! samples = 2001
//! epsilon = 1                 # germ sets only
//! density = 100               # germ sets only
//! degree = 16
//! facets = 16
//! points = 2, 1+1i, -3        # ambient points (interval) or parameters z (germ)
//!
//! [geodesic]
//! m_min = 3
//! m_max = 10
//! angle = 0                   # direction of z, radians
//!
//! [hcp]
//! probe = endpoint            # endpoint | interior | germ
//! x = 0                       # interior probes only
//! deltas = 0.1, 0.01, 0.001, 0.0001   # 13 values from 1e-1 to 1e-4 by default,
//!                                     # 7 from 3e-1 to 3e-3 for germ probes
//! epsilon = 1                 # germ probes only
//! degree = 8
//! density = 80
//! ```
//!
//! Every section except `[scenario]` is optional; omitted keys take the
//! defaults shown. Unknown sections and keys are errors.

use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::curve::{builtin_germ, read_germ_file, CurveError, CurveGerm};
use crate::kv::{self, Entry, ParseError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Study {
    MarkovScan,
    GreenEval,
    GeodesicFit,
    HcpFit,
    VerifyAll,
}

impl Study {
    pub const ALL: [Study; 5] = [
        Study::MarkovScan,
        Study::GreenEval,
        Study::GeodesicFit,
        Study::HcpFit,
        Study::VerifyAll,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Study::MarkovScan => "markov_scan",
            Study::GreenEval => "green_eval",
            Study::GeodesicFit => "geodesic_fit",
            Study::HcpFit => "hcp_fit",
            Study::VerifyAll => "verify_all",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.as_str() == text)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GermSource {
    Builtin(String),
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq)]
pub struct MarkovParams {
    pub degrees: Vec<u32>,
    pub epsilons: Vec<f64>,
    pub density: usize,
}

impl Default for MarkovParams {
    fn default() -> Self {
        Self {
            degrees: vec![2, 3, 4, 6, 8, 12],
            epsilons: vec![1.0, 0.5, 0.25, 0.125],
            density: 200,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GreenSet {
    Interval { a: f64, b: f64, samples: usize },
    Germ { epsilon: f64, density: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct GreenParams {
    pub set: GreenSet,
    pub degree: u32,
    pub facets: usize,
    pub points: Vec<Complex64>,
}

impl Default for GreenParams {
    fn default() -> Self {
        Self {
            set: GreenSet::Interval {
                a: -1.0,
                b: 1.0,
                samples: 2001,
            },
            degree: 16,
            facets: 16,
            points: vec![
                Complex64::new(2.0, 0.0),
                Complex64::new(1.0, 1.0),
                Complex64::new(-3.0, 0.0),
            ],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicParams {
    pub m_min: u32,
    pub m_max: u32,
    pub angle: f64,
}

impl Default for GeodesicParams {
    fn default() -> Self {
        Self {
            m_min: 3,
            m_max: 10,
            angle: 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HcpProbe {
    Endpoint,
    Interior { x: f64 },
    Germ,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HcpParams {
    pub probe: HcpProbe,
    pub deltas: Vec<f64>,
    pub epsilon: f64,
    pub degree: u32,
    pub density: usize,
}

impl Default for HcpParams {
    fn default() -> Self {
        Self {
            probe: HcpProbe::Endpoint,
            deltas: geometric(1e-1, 1e-4, 13),
            epsilon: 1.0,
            degree: 8,
            density: 80,
        }
    }
}

/// `count` values from `hi` down to `lo` in geometric progression.
pub fn geometric(hi: f64, lo: f64, count: usize) -> Vec<f64> {
    let ratio = (lo / hi).powf(1.0 / (count - 1) as f64);
    (0..count).map(|i| hi * ratio.powi(i as i32)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub study: Study,
    pub germ: Option<GermSource>,
    pub seed: Option<u64>,
    pub markov: MarkovParams,
    pub green: GreenParams,
    pub geodesic: GeodesicParams,
    pub hcp: HcpParams,
}

impl ScenarioConfig {
    /// Defaults for `study` with no germ.
    pub fn with_study(name: &str, study: Study) -> Self {
        Self {
            name: name.to_string(),
            study,
            germ: None,
            seed: None,
            markov: MarkovParams::default(),
            green: GreenParams::default(),
            geodesic: GeodesicParams::default(),
            hcp: HcpParams::default(),
        }
    }

    pub fn resolve_germ(&self) -> Result<Option<CurveGerm>, CurveError> {
        match &self.germ {
            None => Ok(None),
            Some(GermSource::Builtin(id)) => builtin_germ(id).map(Some),
            Some(GermSource::File(path)) => read_germ_file(path).map(Some),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

/// Complex literal: `2`, `-3.5`, `1+1i`, `0.5-2i`, `i`, `-i`, `2i`.
pub fn parse_complex(text: &str) -> Option<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse().ok().map(|re| Complex64::new(re, 0.0));
    };
    // Split at the last sign that is not the leading one or part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&j| (bytes[j] == b'+' || bytes[j] == b'-') && !matches!(bytes[j - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(j) => (&body[..j], &body[j..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse().ok()?,
    };
    Some(Complex64::new(re.parse().ok()?, im))
}

fn check_keys(entries: &[&Entry], allowed: &[&str]) -> Result<(), ParseError> {
    for e in entries {
        if !allowed.contains(&e.key.as_str()) {
            return Err(e.key_error(format!(
                "unknown key `{}` (expected one of: {})",
                e.key,
                allowed.join(", ")
            )));
        }
    }
    Ok(())
}

fn find<'a>(entries: &[&'a Entry], key: &str) -> Option<&'a Entry> {
    entries.iter().copied().find(|e| e.key == key)
}

fn positive<T: PartialOrd + Default + Copy>(entry: &Entry, value: T, what: &str) -> Result<T, ParseError> {
    if value > T::default() {
        Ok(value)
    } else {
        Err(entry.error(format!("{what} must be positive")))
    }
}

fn nonempty<T>(entry: &Entry, values: Vec<T>, what: &str) -> Result<Vec<T>, ParseError> {
    if values.is_empty() {
        Err(entry.error(format!("{what} list is empty")))
    } else {
        Ok(values)
    }
}

fn parse_markov(entries: &[&Entry], params: &mut MarkovParams) -> Result<(), ParseError> {
    check_keys(entries, &["degrees", "epsilons", "density"])?;
    if let Some(e) = find(entries, "degrees") {
        params.degrees = nonempty(e, e.parse_list("degree")?, "degree")?;
    }
    if let Some(e) = find(entries, "epsilons") {
        let values: Vec<f64> = nonempty(e, e.parse_list("epsilon")?, "epsilon")?;
        if values.iter().any(|&x| !(x > 0.0 && x <= 1.0)) {
            return Err(e.error("epsilons must lie in (0, 1]"));
        }
        params.epsilons = values;
    }
    if let Some(e) = find(entries, "density") {
        params.density = positive(e, e.parse_value("density")?, "density")?;
    }
    Ok(())
}

fn parse_green(entries: &[&Entry], params: &mut GreenParams) -> Result<(), ParseError> {
    check_keys(
        entries,
        &[
            "set", "a", "b", "samples", "epsilon", "density", "degree", "facets", "points",
        ],
    )?;
    let set = find(entries, "set").map_or("interval", |e| e.value.as_str());
    let interval_only = ["a", "b", "samples"];
    let germ_only = ["epsilon", "density"];
    let (misplaced, kind) = match set {
        "interval" => (&germ_only[..], "interval"),
        "germ" => (&interval_only[..], "germ"),
        other => {
            let e = find(entries, "set").expect("set key present");
            return Err(e.error(format!("unknown set `{other}` (expected interval or germ)")));
        }
    };
    if let Some(e) = entries.iter().find(|e| misplaced.contains(&e.key.as_str())) {
        return Err(e.key_error(format!("`{}` does not apply to {kind} sets", e.key)));
    }
    params.set = if set == "interval" {
        let a: f64 = find(entries, "a").map_or(Ok(-1.0), |e| e.parse_value("number"))?;
        let b: f64 = find(entries, "b").map_or(Ok(1.0), |e| e.parse_value("number"))?;
        if !(a.is_finite() && b.is_finite() && a < b) {
            let e = find(entries, "b").or(find(entries, "a")).expect("defaults are ordered");
            return Err(e.error("interval needs finite a < b"));
        }
        let samples = match find(entries, "samples") {
            Some(e) => {
                let n: usize = e.parse_value("sample count")?;
                if n < 2 {
                    return Err(e.error("need at least 2 samples"));
                }
                n
            }
            None => 2001,
        };
        GreenSet::Interval { a, b, samples }
    } else {
        let epsilon = match find(entries, "epsilon") {
            Some(e) => {
                let x: f64 = e.parse_value("epsilon")?;
                if !(x > 0.0 && x <= 1.0) {
                    return Err(e.error("epsilon must lie in (0, 1]"));
                }
                x
            }
            None => 1.0,
        };
        let density = match find(entries, "density") {
            Some(e) => positive(e, e.parse_value("density")?, "density")?,
            None => 100,
        };
        GreenSet::Germ { epsilon, density }
    };
    if let Some(e) = find(entries, "degree") {
        params.degree = positive(e, e.parse_value("degree")?, "degree")?;
    }
    if let Some(e) = find(entries, "facets") {
        let f: usize = e.parse_value("facet count")?;
        if f < 3 {
            return Err(e.error("need at least 3 facets"));
        }
        params.facets = f;
    }
    if let Some(e) = find(entries, "points") {
        let points = e
            .list()
            .into_iter()
            .map(|(column, item)| {
                parse_complex(item)
                    .filter(|z| z.re.is_finite() && z.im.is_finite())
                    .ok_or_else(|| ParseError::new(e.line, column, format!("`{item}` is not a complex number")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        params.points = nonempty(e, points, "point")?;
    }
    Ok(())
}

fn parse_geodesic(entries: &[&Entry], params: &mut GeodesicParams) -> Result<(), ParseError> {
    check_keys(entries, &["m_min", "m_max", "angle"])?;
    if let Some(e) = find(entries, "m_min") {
        params.m_min = positive(e, e.parse_value("exponent")?, "m_min")?;
    }
    if let Some(e) = find(entries, "m_max") {
        params.m_max = e.parse_value("exponent")?;
        if params.m_max > 40 {
            return Err(e.error("m_max must be at most 40"));
        }
    }
    if params.m_max < params.m_min + 2 {
        let e = find(entries, "m_max")
            .or(find(entries, "m_min"))
            .expect("defaults are valid");
        return Err(e.error("need m_max ≥ m_min + 2 for a slope fit"));
    }
    if let Some(e) = find(entries, "angle") {
        params.angle = e.parse_value("angle")?;
        if !params.angle.is_finite() {
            return Err(e.error("angle must be finite"));
        }
    }
    Ok(())
}

fn parse_hcp(entries: &[&Entry], params: &mut HcpParams) -> Result<(), ParseError> {
    check_keys(entries, &["probe", "x", "deltas", "epsilon", "degree", "density"])?;
    let probe = find(entries, "probe");
    params.probe = match probe.map_or("endpoint", |e| e.value.as_str()) {
        "endpoint" => HcpProbe::Endpoint,
        "interior" => {
            let x = find(entries, "x").map_or(Ok(0.0), |e| e.parse_value("number"))?;
            if !(x > -1.0 && x < 1.0) {
                return Err(find(entries, "x")
                    .expect("default is inside")
                    .error("x must lie in (-1, 1)"));
            }
            HcpProbe::Interior { x }
        }
        "germ" => HcpProbe::Germ,
        other => {
            return Err(probe
                .expect("probe key present")
                .error(format!("unknown probe `{other}` (expected endpoint, interior or germ)")))
        }
    };
    if let Some(e) = find(entries, "x") {
        if !matches!(params.probe, HcpProbe::Interior { .. }) {
            return Err(e.key_error("`x` applies to interior probes only"));
        }
    }
    if params.probe == HcpProbe::Germ {
        params.deltas = geometric(3e-1, 3e-3, 7);
    }
    if let Some(e) = find(entries, "deltas") {
        let deltas: Vec<f64> = nonempty(e, e.parse_list("delta")?, "delta")?;
        if deltas.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
            return Err(e.error("deltas must be positive"));
        }
        params.deltas = deltas;
    }
    if let Some(e) = find(entries, "epsilon") {
        let x: f64 = e.parse_value("epsilon")?;
        if !(x > 0.0 && x <= 1.0) {
            return Err(e.error("epsilon must lie in (0, 1]"));
        }
        params.epsilon = x;
    }
    if let Some(e) = find(entries, "degree") {
        params.degree = positive(e, e.parse_value("degree")?, "degree")?;
    }
    if let Some(e) = find(entries, "density") {
        params.density = positive(e, e.parse_value("density")?, "density")?;
    }
    Ok(())
}

fn is_identifier(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

/// Parses configuration text; `base` resolves relative germ file paths.
pub fn parse_config(text: &str, base: &Path) -> Result<ScenarioConfig, ParseError> {
    let entries = kv::parse(text, true)?;
    if let Some(e) = entries.iter().find(|e| e.section.is_none()) {
        return Err(e.key_error("key outside any section (start with `[scenario]`)"));
    }
    let section =
        |name: &str| -> Vec<&Entry> { entries.iter().filter(|e| e.section.as_deref() == Some(name)).collect() };
    const SECTIONS: [&str; 5] = ["scenario", "markov", "green", "geodesic", "hcp"];
    if let Some(e) = entries
        .iter()
        .find(|e| !SECTIONS.contains(&e.section.as_deref().unwrap_or("")))
    {
        return Err(ParseError::new(
            e.line,
            1,
            format!(
                "unknown section `{}` (expected one of: {})",
                e.section.as_deref().unwrap_or(""),
                SECTIONS.join(", ")
            ),
        ));
    }
    let scenario = section("scenario");
    check_keys(&scenario, &["name", "study", "germ", "germ_file", "seed"])?;
    let name_entry = find(&scenario, "name").ok_or_else(|| ParseError::new(1, 1, "missing `name` in [scenario]"))?;
    if !is_identifier(&name_entry.value) {
        return Err(name_entry.error("name must be a nonempty identifier of letters, digits, `_` or `-`"));
    }
    let study_entry = find(&scenario, "study").ok_or_else(|| ParseError::new(1, 1, "missing `study` in [scenario]"))?;
    let study = Study::parse(&study_entry.value).ok_or_else(|| {
        let valid: Vec<&str> = Study::ALL.iter().map(|s| s.as_str()).collect();
        study_entry.error(format!(
            "unknown study `{}` (expected one of: {})",
            study_entry.value,
            valid.join(", ")
        ))
    })?;
    let mut config = ScenarioConfig::with_study(&name_entry.value, study);
    match (find(&scenario, "germ"), find(&scenario, "germ_file")) {
        (Some(_), Some(file)) => return Err(file.key_error("give either `germ` or `germ_file`, not both")),
        (Some(e), None) => {
            if let Err(err) = builtin_germ(&e.value) {
                return Err(e.error(err.to_string()));
            }
            config.germ = Some(GermSource::Builtin(e.value.clone()));
        }
        (None, Some(e)) => {
            let path = base.join(&e.value);
            if !path.is_file() {
                return Err(e.error(format!("germ file `{}` not found", path.display())));
            }
            config.germ = Some(GermSource::File(path));
        }
        (None, None) => {}
    }
    if let Some(e) = find(&scenario, "seed") {
        config.seed = Some(e.parse_value("seed")?);
    }
    parse_markov(&section("markov"), &mut config.markov)?;
    parse_green(&section("green"), &mut config.green)?;
    parse_geodesic(&section("geodesic"), &mut config.geodesic)?;
    parse_hcp(&section("hcp"), &mut config.hcp)?;
    let needs_germ = match study {
        Study::MarkovScan | Study::GeodesicFit => true,
        Study::GreenEval => matches!(config.green.set, GreenSet::Germ { .. }),
        Study::HcpFit => config.hcp.probe == HcpProbe::Germ,
        Study::VerifyAll => false,
    };
    if needs_germ && config.germ.is_none() {
        return Err(study_entry.error(format!("study `{}` needs `germ` or `germ_file`", study.as_str())));
    }
    Ok(config)
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig, ConfigError> {
    let display = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: display.clone(),
        message: e.to_string(),
    })?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_config(&text, base).map_err(|source| ConfigError::Parse { path: display, source })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ScenarioConfig, ParseError> {
        parse_config(text, Path::new("."))
    }

    #[test]
    fn complex_literals() {
        let c = |re, im| Some(Complex64::new(re, im));
        assert_eq!(parse_complex("2"), c(2.0, 0.0));
        assert_eq!(parse_complex("-3"), c(-3.0, 0.0));
        assert_eq!(parse_complex("1+1i"), c(1.0, 1.0));
        assert_eq!(parse_complex("0.5 - 2i"), c(0.5, -2.0));
        assert_eq!(parse_complex("i"), c(0.0, 1.0));
        assert_eq!(parse_complex("-i"), c(0.0, -1.0));
        assert_eq!(parse_complex("1e-3+2e+1i"), c(1e-3, 20.0));
        assert_eq!(parse_complex("1+i"), c(1.0, 1.0));
        assert_eq!(parse_complex("x"), None);
        assert_eq!(parse_complex(""), None);
    }

    #[test]
    fn full_config() {
        let config = parse(
            "[scenario]\nname = scan\nstudy = markov_scan\ngerm = cusp_2_3\nseed = 7\n\
             [markov]\ndegrees = 2, 4, 6\nepsilons = 1, 0.5, 0.25\ndensity = 50\n",
        )
        .unwrap();
        assert_eq!(config.study, Study::MarkovScan);
        assert_eq!(config.germ, Some(GermSource::Builtin("cusp_2_3".into())));
        assert_eq!(config.seed, Some(7));
        assert_eq!(config.markov.degrees, vec![2, 4, 6]);
        assert_eq!(config.markov.density, 50);
        assert_eq!(config.green, GreenParams::default());
    }

    #[test]
    fn errors_carry_positions() {
        let err =
            parse("[scenario]\nname = s\nstudy = markov_scan\ngerm = cusp_2_3\n[markov]\ndegrees =\n").unwrap_err();
        assert_eq!((err.line, err.message.contains("empty")), (6, true));
        let err = parse("[scenario]\nname = s\nstudy = markov_scan\ngerm = nope\n").unwrap_err();
        assert_eq!((err.line, err.column), (4, 8));
        assert!(err.message.contains("cusp_2_3"), "{}", err.message);
        let err = parse("[scenario]\nname = s\nstudy = markov_scan\ngerm = cusp_2_3\n[markov]\ndegrees = 2, x\n")
            .unwrap_err();
        assert_eq!((err.line, err.column), (6, 14));
        let err = parse("[scenario]\nname = s\nstudy = scan\n").unwrap_err();
        assert_eq!((err.line, err.column), (3, 9));
        let err =
            parse("[scenario]\nname = s\nstudy = green_eval\n[green]\nset = interval\nepsilon = 1\n").unwrap_err();
        assert_eq!((err.line, err.column), (6, 1));
        let err = parse("[scenario]\nname = s\nstudy = geodesic_fit\n").unwrap_err();
        assert!(err.message.contains("needs `germ`"), "{}", err.message);
        let err = parse("[scenario]\nname = s\nstudy = verify_all\n[plots]\nx = 1\n").unwrap_err();
        assert_eq!(err.line, 5);
    }
}
