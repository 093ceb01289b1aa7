//! Problem configuration: TOML ingestion with unit suffixes, defaults, and
//! validation that reports every failure at once.
//!
//! ```toml
//! [geometry]
//! R = 5.0
//! H = 10.0
//! x0 = 10.0
//!
//! [material]
//! gamma = 20.0          # kN/m³
//! k0 = 0.8
//! nu = 0.3
//! G_inf = "20 MPa"      # bare numbers are kPa
//! G_E = "1 MPa"
//! eta_E = "1e5 MPa*day" # bare numbers are kPa·day
//!
//! [schedule]
//! V = 2.0               # m/day
//! t0 = 0.0
//! t1 = 100.0
//! t2 = 105.0
//! t3 = 110.0
//! t4 = 120.0
//! dtau = 0.01
//!
//! [truncation]
//! N = 200
//! M = 500
//! eps = 1e-16
//! ```

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use sha2::{Digest, Sha256};
use toml::{Table, Value};

use crate::error::{Result, TunnelError};
use crate::fields::Filter;
use crate::geometry::TunnelGeometry;
use crate::series::TruncationConfig;
use crate::time_model::{ExcavationSchedule, MaterialParams};

/// What `case` writes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputSpec {
    pub surface: bool,
    pub periphery: bool,
    pub history: bool,
    /// Times for surface and periphery profiles, days. Defaults to `t1..t4`.
    pub times: Vec<f64>,
    pub x_min: f64,
    pub x_max: f64,
    pub x_points: usize,
    pub periphery_points: usize,
    pub history_points: Vec<HistoryPoint>,
    pub history_max_rows: usize,
    pub filter: Filter,
}

/// Named point on the tunnel wall, at local polar angle `theta`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistoryPoint {
    pub name: String,
    pub theta: f64,
}

impl HistoryPoint {
    pub fn vault() -> Self {
        Self {
            name: "vault".into(),
            theta: std::f64::consts::FRAC_PI_2,
        }
    }

    pub fn bottom() -> Self {
        Self {
            name: "bottom".into(),
            theta: 3.0 * std::f64::consts::FRAC_PI_2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProblemConfig {
    pub geometry: TunnelGeometry,
    pub material: MaterialParams,
    pub schedule: ExcavationSchedule,
    pub truncation: TruncationConfig,
    pub outputs: OutputSpec,
}

impl ProblemConfig {
    /// Runs every sub-validation and returns all failures together.
    pub fn validate(&self) -> Result<()> {
        let mut problems = self.geometry.validate();
        problems.extend(self.material.validate());
        problems.extend(self.schedule.validate());
        problems.extend(self.truncation.validate());
        problems.extend(self.outputs_problems());
        if problems.is_empty() {
            Ok(())
        } else {
            Err(TunnelError::Config(problems))
        }
    }

    fn outputs_problems(&self) -> Vec<String> {
        let o = &self.outputs;
        let s = &self.schedule;
        let mut p = Vec::new();
        for &t in &o.times {
            let steps = (t - s.t1) / s.dtau;
            if !(t >= s.t1 && t <= s.t4) || (steps - steps.round()).abs() > 1e-6 {
                p.push(format!(
                    "outputs.times entry {t} must lie on the time grid within [t1, t4] = [{}, {}]",
                    s.t1, s.t4
                ));
            }
        }
        if !(o.x_min < o.x_max) || !o.x_min.is_finite() || !o.x_max.is_finite() {
            p.push(format!("outputs.x_min = {} must be below x_max = {}", o.x_min, o.x_max));
        }
        if o.x_points < 2 {
            p.push(format!("outputs.x_points = {} must be at least 2", o.x_points));
        }
        if o.periphery_points < 4 {
            p.push(format!(
                "outputs.periphery_points = {} must be at least 4",
                o.periphery_points
            ));
        }
        if o.history_max_rows < 2 {
            p.push(format!(
                "outputs.history_max_rows = {} must be at least 2",
                o.history_max_rows
            ));
        }
        p
    }

    /// SHA-256 over the canonical JSON form of the normalized config, as hex.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("config serializes");
        let digest = Sha256::digest(&canonical);
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// `u0 = γ H R / (2 G_inf)`, the displacement normalizer, m.
    pub fn displacement_scale(&self) -> f64 {
        self.material.gamma * self.geometry.depth * self.geometry.radius / (2.0 * self.material.g_inf)
    }

    /// `γ H`, the stress normalizer, kPa.
    pub fn stress_scale(&self) -> f64 {
        self.material.gamma * self.geometry.depth
    }
}

/// Reference case: R = 5 m at 10 m depth, 20 m free surface segment.
pub fn reference_config() -> ProblemConfig {
    load_config_str(REFERENCE_TOML).expect("reference config is valid")
}

pub const REFERENCE_TOML: &str = r#"[geometry]
R = 5.0
H = 10.0
x0 = 10.0

[material]
gamma = 20.0
k0 = 0.8
nu = 0.3
G_inf = "20 MPa"
G_E = "1 MPa"
eta_E = "1e5 MPa*day"

[schedule]
V = 2.0
t0 = 0.0
t1 = 100.0
t2 = 105.0
t3 = 110.0
t4 = 120.0
dtau = 0.01

[truncation]
N = 200
M = 500
eps = 1e-16
"#;

pub fn load_config(path: impl AsRef<Path>) -> Result<ProblemConfig> {
    let text = std::fs::read_to_string(path)?;
    load_config_str(&text)
}

pub fn load_config_str(text: &str) -> Result<ProblemConfig> {
    let root: Table = text
        .parse()
        .map_err(|e: toml::de::Error| TunnelError::Parse(e.to_string()))?;
    let mut r = Reader::default();

    for key in root.keys() {
        if !["geometry", "material", "schedule", "truncation", "outputs"].contains(&key.as_str()) {
            r.fail(format!("unknown section [{key}]"));
        }
    }
    let geo = r.section(&root, "geometry", true);
    let mat = r.section(&root, "material", true);
    let sch = r.section(&root, "schedule", true);
    let tru = r.section(&root, "truncation", false);
    let out = r.section(&root, "outputs", false);

    r.unknown_keys("geometry", &geo, &["R", "H", "x0"]);
    r.unknown_keys("material", &mat, &["gamma", "k0", "nu", "G_inf", "G_E", "eta_E"]);
    r.unknown_keys("schedule", &sch, &["V", "t0", "t1", "t2", "t3", "t4", "dtau"]);
    r.unknown_keys("truncation", &tru, &["N", "M", "eps", "max_iter", "L_samples"]);
    r.unknown_keys(
        "outputs",
        &out,
        &[
            "products",
            "times",
            "x_min",
            "x_max",
            "x_points",
            "periphery_points",
            "history_points",
            "history_max_rows",
            "filter",
        ],
    );

    let geometry = TunnelGeometry {
        radius: r.plain(&geo, "geometry", "R", None),
        depth: r.plain(&geo, "geometry", "H", None),
        x0: r.plain(&geo, "geometry", "x0", None),
    };
    let material = MaterialParams {
        gamma: r.quantity(&mat, "material", "gamma", Dimension::UnitWeight, None),
        k0: r.plain(&mat, "material", "k0", None),
        nu: r.plain(&mat, "material", "nu", None),
        g_inf: r.quantity(&mat, "material", "G_inf", Dimension::Modulus, None),
        g_e: r.quantity(&mat, "material", "G_E", Dimension::Modulus, None),
        eta_e: r.quantity(&mat, "material", "eta_E", Dimension::Viscosity, None),
    };
    let schedule = ExcavationSchedule {
        rate: r.plain(&sch, "schedule", "V", None),
        t0: r.plain(&sch, "schedule", "t0", Some(0.0)),
        t1: r.plain(&sch, "schedule", "t1", None),
        t2: r.plain(&sch, "schedule", "t2", None),
        t3: r.plain(&sch, "schedule", "t3", None),
        t4: r.plain(&sch, "schedule", "t4", None),
        dtau: r.plain(&sch, "schedule", "dtau", Some(0.01)),
    };
    let n = r.count(&tru, "truncation", "N", 200);
    let m = r.count(&tru, "truncation", "M", 500);
    let mut truncation = TruncationConfig::new(n, m);
    truncation.eps = r.plain(&tru, "truncation", "eps", Some(truncation.eps));
    truncation.max_iter = r.count(&tru, "truncation", "max_iter", truncation.max_iter);
    truncation.l_samples = r.count(&tru, "truncation", "L_samples", truncation.l_samples);

    let outputs = r.outputs(&out, &geometry, &schedule);

    let cfg = ProblemConfig {
        geometry,
        material,
        schedule,
        truncation,
        outputs,
    };
    // Fields that failed to read are NaN; their validation messages would only repeat the cause.
    let mut problems = r.problems;
    if let Err(TunnelError::Config(more)) = cfg.validate() {
        problems.extend(more.into_iter().filter(|m| !m.contains("NaN")));
    }
    if problems.is_empty() {
        Ok(cfg)
    } else {
        Err(TunnelError::Config(problems))
    }
}

#[derive(Debug, Clone, Copy)]
enum Dimension {
    UnitWeight,
    Modulus,
    Viscosity,
}

impl Dimension {
    /// Factor to the internal unit, or `None` if the suffix does not belong to this dimension.
    fn factor(self, unit: &str) -> Option<f64> {
        let u: String = unit
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| if matches!(c, '·' | '.' | '*') { '*' } else { c })
            .collect();
        match self {
            Dimension::UnitWeight => match u.as_str() {
                "kN/m3" | "kN/m^3" | "kN/m³" => Some(1.0),
                "N/m3" | "N/m^3" | "N/m³" => Some(1e-3),
                _ => None,
            },
            Dimension::Modulus => match u.as_str() {
                "Pa" => Some(1e-3),
                "kPa" => Some(1.0),
                "MPa" => Some(1e3),
                "GPa" => Some(1e6),
                _ => None,
            },
            Dimension::Viscosity => {
                let (pressure, time) = u.split_once('*').unwrap_or((u.as_str(), ""));
                let p = Dimension::Modulus.factor(pressure)?;
                let t = match time {
                    "day" | "d" => 1.0,
                    "s" => 1.0 / 86_400.0,
                    "h" => 1.0 / 24.0,
                    _ => return None,
                };
                Some(p * t)
            }
        }
    }

    fn internal(self) -> &'static str {
        match self {
            Dimension::UnitWeight => "kN/m³",
            Dimension::Modulus => "kPa",
            Dimension::Viscosity => "kPa·day",
        }
    }
}

#[derive(Default)]
struct Reader {
    problems: Vec<String>,
}

impl Reader {
    fn fail(&mut self, msg: String) {
        self.problems.push(msg);
    }

    fn section(&mut self, root: &Table, name: &str, required: bool) -> Table {
        match root.get(name) {
            Some(Value::Table(t)) => t.clone(),
            Some(_) => {
                self.fail(format!("[{name}] must be a table"));
                Table::new()
            }
            None => {
                if required {
                    self.fail(format!("missing section [{name}]"));
                }
                Table::new()
            }
        }
    }

    fn unknown_keys(&mut self, section: &str, t: &Table, known: &[&str]) {
        for k in t.keys() {
            if !known.contains(&k.as_str()) {
                self.fail(format!("unknown key {section}.{k}"));
            }
        }
    }

    fn number(v: &Value) -> Option<f64> {
        match v {
            Value::Float(f) => Some(*f),
            Value::Integer(i) => Some(*i as f64),
            _ => None,
        }
    }

    fn plain(&mut self, t: &Table, section: &str, key: &str, default: Option<f64>) -> f64 {
        match t.get(key) {
            Some(v) => match Self::number(v) {
                Some(x) => x,
                None => {
                    self.fail(format!("{section}.{key} must be a number, got {v}"));
                    f64::NAN
                }
            },
            None => default.unwrap_or_else(|| {
                self.fail(format!("missing key {section}.{key}"));
                f64::NAN
            }),
        }
    }

    fn quantity(
        &mut self,
        t: &Table,
        section: &str,
        key: &str,
        dim: Dimension,
        default: Option<f64>,
    ) -> f64 {
        let Some(v) = t.get(key) else {
            return default.unwrap_or_else(|| {
                self.fail(format!("missing key {section}.{key}"));
                f64::NAN
            });
        };
        if let Some(x) = Self::number(v) {
            return x;
        }
        let Value::String(s) = v else {
            self.fail(format!("{section}.{key} must be a number or a quantity string, got {v}"));
            return f64::NAN;
        };
        let s = s.trim();
        let split = s
            .char_indices()
            .find(|&(_, c)| !(c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E')))
            .map(|(i, _)| i)
            .unwrap_or(s.len());
        let (num, unit) = s.split_at(split);
        let Ok(x) = f64::from_str(num.trim()) else {
            self.fail(format!("{section}.{key}: cannot read a number from {s:?}"));
            return f64::NAN;
        };
        let unit = unit.trim();
        if unit.is_empty() {
            return x;
        }
        match dim.factor(unit) {
            Some(f) => x * f,
            None => {
                self.fail(format!(
                    "{section}.{key}: unit {unit:?} is not a {} unit",
                    dim.internal()
                ));
                f64::NAN
            }
        }
    }

    fn count(&mut self, t: &Table, section: &str, key: &str, default: usize) -> usize {
        match t.get(key) {
            None => default,
            Some(Value::Integer(i)) if *i >= 0 => *i as usize,
            Some(v) => {
                self.fail(format!("{section}.{key} must be a non-negative integer, got {v}"));
                default
            }
        }
    }

    fn outputs(&mut self, t: &Table, geo: &TunnelGeometry, s: &ExcavationSchedule) -> OutputSpec {
        let mut surface = true;
        let mut periphery = true;
        let mut history = true;
        if let Some(v) = t.get("products") {
            match v.as_array() {
                Some(items) => {
                    surface = false;
                    periphery = false;
                    history = false;
                    for it in items {
                        match it.as_str() {
                            Some("surface") => surface = true,
                            Some("periphery") => periphery = true,
                            Some("history") => history = true,
                            _ => self.fail(format!(
                                "outputs.products entry {it} must be one of surface, periphery, history"
                            )),
                        }
                    }
                }
                None => self.fail("outputs.products must be an array of strings".into()),
            }
        }
        let times = match t.get("times") {
            None => vec![s.t1, s.t2, s.t3, s.t4],
            Some(Value::Array(items)) => items
                .iter()
                .filter_map(|v| {
                    let x = Self::number(v);
                    if x.is_none() {
                        self.fail(format!("outputs.times entry {v} must be a number"));
                    }
                    x
                })
                .collect(),
            Some(v) => {
                self.fail(format!("outputs.times must be an array, got {v}"));
                Vec::new()
            }
        };
        let span = 5.0 * geo.x0.max(geo.depth);
        let history_points = match t.get("history_points") {
            None => vec![HistoryPoint::vault(), HistoryPoint::bottom()],
            Some(Value::Array(items)) => items
                .iter()
                .filter_map(|v| match v.as_str() {
                    Some("vault") => Some(HistoryPoint::vault()),
                    Some("bottom") => Some(HistoryPoint::bottom()),
                    _ => {
                        self.fail(format!("outputs.history_points entry {v} must be vault or bottom"));
                        None
                    }
                })
                .collect(),
            Some(v) => {
                self.fail(format!("outputs.history_points must be an array, got {v}"));
                Vec::new()
            }
        };
        let filter = match t.get("filter").map(|v| v.as_str()) {
            None | Some(Some("auto")) => Filter::Auto,
            Some(Some("on")) => Filter::On,
            Some(Some("off")) => Filter::Off,
            Some(_) => {
                self.fail("outputs.filter must be one of on, off, auto".into());
                Filter::Auto
            }
        };
        OutputSpec {
            surface,
            periphery,
            history,
            times,
            x_min: self.plain(t, "outputs", "x_min", Some(-span)),
            x_max: self.plain(t, "outputs", "x_max", Some(span)),
            x_points: self.count(t, "outputs", "x_points", 201),
            periphery_points: self.count(t, "outputs", "periphery_points", 72),
            history_points,
            history_max_rows: self.count(t, "outputs", "history_max_rows", 2000),
            filter,
        }
    }
}

/// Swept quantity, in the normalized form used for parameter studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepParam {
    /// `V* = V / R`, 1/day.
    #[serde(rename = "V*")]
    Rate,
    /// `G_E* = G_E / G_inf`.
    #[serde(rename = "G_E*")]
    SpareModulus,
    /// `eta_E` in MPa·day.
    #[serde(rename = "eta_E")]
    Viscosity,
    /// `x0* = x0 / R`.
    #[serde(rename = "x0*")]
    FreeWidth,
}

impl SweepParam {
    /// File-name friendly tag.
    pub fn tag(self) -> &'static str {
        match self {
            SweepParam::Rate => "V_star",
            SweepParam::SpareModulus => "G_E_star",
            SweepParam::Viscosity => "eta_E",
            SweepParam::FreeWidth => "x0_star",
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepParam::Rate => "V*",
            SweepParam::SpareModulus => "G_E*",
            SweepParam::Viscosity => "eta_E",
            SweepParam::FreeWidth => "x0*",
        })
    }
}

impl FromStr for SweepParam {
    type Err = TunnelError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "V*" | "V_star" | "V" => Ok(SweepParam::Rate),
            "G_E*" | "G_E_star" | "G_E" => Ok(SweepParam::SpareModulus),
            "eta_E" | "eta" => Ok(SweepParam::Viscosity),
            "x0*" | "x0_star" | "x0" => Ok(SweepParam::FreeWidth),
            other => Err(TunnelError::Config(vec![format!(
                "unknown sweep parameter {other:?} (expected V*, G_E*, eta_E or x0*)"
            )])),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

impl SweepSpec {
    pub fn new(param: SweepParam, values: Vec<f64>) -> Result<Self> {
        let mut problems = Vec::new();
        if values.is_empty() {
            problems.push("sweep values must not be empty".to_string());
        }
        for &v in &values {
            let ok = v.is_finite()
                && match param {
                    SweepParam::SpareModulus => v >= 0.0,
                    _ => v > 0.0,
                };
            if !ok {
                problems.push(format!("sweep value {v} is outside the domain of {param}"));
            }
        }
        if problems.is_empty() {
            Ok(Self { param, values })
        } else {
            Err(TunnelError::Config(problems))
        }
    }

    /// Copy of `base` with the swept quantity set to `value`.
    pub fn apply(&self, base: &ProblemConfig, value: f64) -> Result<ProblemConfig> {
        let mut cfg = base.clone();
        let r = cfg.geometry.radius;
        match self.param {
            SweepParam::Rate => cfg.schedule.rate = value * r,
            SweepParam::SpareModulus => cfg.material.g_e = value * cfg.material.g_inf,
            SweepParam::Viscosity => cfg.material.eta_e = value * 1e3,
            // the output window stays that of the base case so profiles stay comparable
            SweepParam::FreeWidth => cfg.geometry.x0 = value * r,
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_document_normalizes_units() {
        let c = reference_config();
        assert_eq!(c.material.g_inf, 20_000.0);
        assert_eq!(c.material.g_e, 1_000.0);
        assert_eq!(c.material.eta_e, 1e8);
        assert!((c.material.kappa() - 1.8).abs() < 1e-15);
        assert_eq!(c.truncation.n, 200);
        assert_eq!(c.truncation.m, 500);
        assert_eq!(c.truncation.eps, 1e-16);
        assert_eq!(c.schedule.dtau, 0.01);
        assert!((c.displacement_scale() - 0.025).abs() < 1e-15);
        assert_eq!(c.outputs.times, vec![100.0, 105.0, 110.0, 120.0]);
    }

    #[test]
    fn unit_spellings() {
        for (s, want) in [
            ("1e5 MPa*day", 1e8),
            ("1e5 MPa·day", 1e8),
            ("1e5 MPa.day", 1e8),
            ("100 kPa*day", 100.0),
        ] {
            let text = REFERENCE_TOML.replace("\"1e5 MPa*day\"", &format!("{s:?}"));
            assert_eq!(load_config_str(&text).unwrap().material.eta_e, want, "{s}");
        }
        let text = REFERENCE_TOML.replace("\"20 MPa\"", "\"0.02 GPa\"");
        assert!((load_config_str(&text).unwrap().material.g_inf - 20_000.0).abs() < 1e-9);
        let text = REFERENCE_TOML.replace("\"20 MPa\"", "20000");
        assert_eq!(load_config_str(&text).unwrap().material.g_inf, 20_000.0);
    }

    #[test]
    fn every_failure_is_listed() {
        let text = REFERENCE_TOML
            .replace("nu = 0.3", "nu = 0.6")
            .replace("t3 = 110.0", "t3 = 104.0")
            .replace("\"20 MPa\"", "\"20 MPa*day\"")
            .replace("x0 = 10.0\n", "");
        match load_config_str(&text) {
            Err(TunnelError::Config(list)) => {
                assert!(list.iter().any(|m| m.contains("geometry.x0")), "{list:?}");
                assert!(list.iter().any(|m| m.contains("G_inf")), "{list:?}");
                assert!(list.iter().any(|m| m.contains("nu")), "{list:?}");
                assert!(list.iter().any(|m| m.contains("t3")), "{list:?}");
            }
            other => panic!("{other:?}"),
        }
        let text = REFERENCE_TOML
            .replace("nu = 0.3", "nu = 0.6")
            .replace("t3 = 110.0", "t3 = 104.0");
        match load_config_str(&text) {
            Err(TunnelError::Config(list)) => {
                assert!(list.iter().any(|m| m.contains("nu")), "{list:?}");
                assert!(list.iter().any(|m| m.contains("t3")), "{list:?}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_keys_and_sections() {
        let text = format!("{REFERENCE_TOML}\n[extra]\na = 1\n");
        assert!(matches!(load_config_str(&text), Err(TunnelError::Config(_))));
        let text = REFERENCE_TOML.replace("k0 = 0.8", "k0 = 0.8\nk1 = 2");
        assert!(matches!(load_config_str(&text), Err(TunnelError::Config(_))));
        assert!(matches!(load_config_str("[geometry"), Err(TunnelError::Parse(_))));
    }

    #[test]
    fn off_grid_output_time_is_rejected() {
        let text = format!("{REFERENCE_TOML}\n[outputs]\ntimes = [100.005]\n");
        assert!(matches!(load_config_str(&text), Err(TunnelError::Config(_))));
        let text = format!("{REFERENCE_TOML}\n[outputs]\ntimes = [99.0]\n");
        assert!(matches!(load_config_str(&text), Err(TunnelError::Config(_))));
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let a = reference_config();
        let b = reference_config();
        assert_eq!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
        let mut c = a.clone();
        c.material.k0 = 0.9;
        assert_ne!(a.hash(), c.hash());
    }

    #[test]
    fn sweep_application() {
        let base = reference_config();
        let s = SweepSpec::new(SweepParam::Rate, vec![0.1, 2.0]).unwrap();
        assert_eq!(s.apply(&base, 0.1).unwrap().schedule.rate, 0.5);
        let s = SweepSpec::new(SweepParam::SpareModulus, vec![0.0, 0.5]).unwrap();
        assert_eq!(s.apply(&base, 0.5).unwrap().material.g_e, 10_000.0);
        let s = SweepSpec::new(SweepParam::Viscosity, vec![1e2]).unwrap();
        assert_eq!(s.apply(&base, 1e2).unwrap().material.eta_e, 1e5);
        let s = SweepSpec::new(SweepParam::FreeWidth, vec![1e3]).unwrap();
        let c = s.apply(&base, 1e3).unwrap();
        assert_eq!(c.geometry.x0, 5000.0);
        assert!(SweepSpec::new(SweepParam::Rate, vec![]).is_err());
        assert!(SweepSpec::new(SweepParam::Rate, vec![-1.0]).is_err());
        assert!(SweepSpec::new(SweepParam::Rate, vec![f64::NAN]).is_err());
        assert_eq!("x0*".parse::<SweepParam>().unwrap(), SweepParam::FreeWidth);
        assert!("foo".parse::<SweepParam>().is_err());
    }
}
