//! Declarative scenario files: parsing with full error collection, dispatch
//! to the solvers and CSV/JSON output.
//!
//! A scenario is a JSON document such as
//!
//! ```json
//! { "scenario": "cube_spectrum", "H_over_lambda": 0.5, "h_over_lambda": 0.05, "kappa": 1 }
//! ```
//!
//! All lengths are in diffuse wavelengths.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{ConfigIssue, Error, Result};
use crate::forward::{
    born_iterate, convergence_radius, data_function, dipoles_direct, BornOptions,
};
use crate::geometry::{
    build_cube, build_embedded, build_sandwich, build_two_cubes, enclosing_radius, validate,
    Medium, ProbeLayout, VoxelGrid,
};
use crate::green::{born_bound, equivalent_radius, f_shape};
use crate::operators::{incident_field, polarizabilities};
use crate::spectral::{
    pairing_gap, spectrum_w, spectrum_wc, wmax_sweep, SpectralOptions, SpectrumReport, SPLIT_PAIRS,
};
use crate::Point;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    CubeSpectrum,
    CubeSweep,
    TwoCubes,
    TwoCubesOpposite,
    Sandwich,
    Embedded,
    BornRun,
    Bound,
    ForwardData,
}

impl ScenarioKind {
    const ALL: [(&'static str, ScenarioKind); 9] = [
        ("cube_spectrum", ScenarioKind::CubeSpectrum),
        ("cube_sweep", ScenarioKind::CubeSweep),
        ("two_cubes", ScenarioKind::TwoCubes),
        ("two_cubes_opposite", ScenarioKind::TwoCubesOpposite),
        ("sandwich", ScenarioKind::Sandwich),
        ("embedded", ScenarioKind::Embedded),
        ("born_run", ScenarioKind::BornRun),
        ("bound", ScenarioKind::Bound),
        ("forward_data", ScenarioKind::ForwardData),
    ];

    pub fn tag(&self) -> &'static str {
        Self::ALL
            .iter()
            .find(|(_, k)| k == self)
            .map(|(t, _)| *t)
            .expect("every kind has a tag")
    }

    fn from_tag(tag: &str) -> Option<Self> {
        Self::ALL.iter().find(|(t, _)| *t == tag).map(|(_, k)| *k)
    }

    fn writes_spectrum(&self) -> bool {
        matches!(
            self,
            ScenarioKind::CubeSpectrum
                | ScenarioKind::TwoCubes
                | ScenarioKind::TwoCubesOpposite
                | ScenarioKind::Sandwich
                | ScenarioKind::Embedded
        )
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ProbesConfig {
    pub sources: Vec<Point>,
    pub detectors: Vec<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strengths: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct OutputsConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum_csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary_json: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data_csv: Option<PathBuf>,
}

/// A validated scenario. Field names follow the JSON schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    #[serde(rename = "H_over_lambda", skip_serializing_if = "Option::is_none")]
    pub side: Option<f64>,
    #[serde(
        rename = "H_sweep_over_lambda",
        skip_serializing_if = "Option::is_none"
    )]
    pub sweep: Option<Vec<f64>>,
    #[serde(rename = "h_over_lambda", skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub kappa: Vec<f64>,
    #[serde(rename = "deltaH_over_H", skip_serializing_if = "Option::is_none")]
    pub delta_h: Option<f64>,
    #[serde(rename = "H_in_over_lambda", skip_serializing_if = "Option::is_none")]
    pub inner: Option<f64>,
    #[serde(rename = "a_over_lambda", skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    pub tol: f64,
    pub max_iter: usize,
    pub use_self_energy: bool,
    pub real_cap: usize,
    pub complex_cap: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probes: Option<ProbesConfig>,
    pub outputs: OutputsConfig,
}

impl ScenarioConfig {
    fn spectral_options(&self) -> SpectralOptions {
        SpectralOptions {
            use_self_energy: self.use_self_energy,
            real_cap: self.real_cap,
            complex_cap: self.complex_cap,
            ..SpectralOptions::default()
        }
    }

    /// SHA-256 of the canonical serialization.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(canonical))
    }

    fn side(&self) -> f64 {
        self.side.expect("validated")
    }

    fn pitch(&self) -> f64 {
        self.h.expect("validated")
    }
}

const KNOWN_FIELDS: &[&str] = &[
    "scenario",
    "H_over_lambda",
    "H_sweep_over_lambda",
    "h_over_lambda",
    "kappa",
    "deltaH_over_H",
    "H_in_over_lambda",
    "a_over_lambda",
    "tol",
    "max_iter",
    "use_self_energy",
    "real_cap",
    "complex_cap",
    "probes",
    "outputs",
];

struct Collector {
    issues: Vec<ConfigIssue>,
}

impl Collector {
    fn push(&mut self, path: &str, message: impl Into<String>) {
        self.issues.push(ConfigIssue {
            path: path.to_string(),
            message: message.into(),
        });
    }

    fn number(&mut self, doc: &Map<String, Value>, key: &str) -> Option<f64> {
        match doc.get(key) {
            None | Some(Value::Null) => None,
            Some(Value::Number(n)) => n.as_f64(),
            Some(_) => {
                self.push(key, "expected a number");
                None
            }
        }
    }

    fn length(&mut self, doc: &Map<String, Value>, key: &str, required: bool) -> Option<f64> {
        let value = self.number(doc, key);
        match value {
            None if required && !doc.contains_key(key) => {
                self.push(key, "missing required field");
                None
            }
            Some(v) if !(v > 0.0 && v.is_finite()) => {
                self.push(key, "length must be positive");
                None
            }
            other => other,
        }
    }

    fn point_list(&mut self, value: Option<&Value>, path: &str) -> Vec<Point> {
        let Some(value) = value else {
            return Vec::new();
        };
        let Some(items) = value.as_array() else {
            self.push(path, "expected a list of [x, y, z] points");
            return Vec::new();
        };
        let mut out = Vec::new();
        for (i, item) in items.iter().enumerate() {
            let coords: Option<Vec<f64>> = item
                .as_array()
                .filter(|a| a.len() == 3)
                .map(|a| a.iter().filter_map(Value::as_f64).collect());
            match coords {
                Some(c) if c.len() == 3 && c.iter().all(|x| x.is_finite()) => {
                    out.push([c[0], c[1], c[2]])
                }
                _ => self.push(
                    &format!("{path}[{i}]"),
                    "expected [x, y, z] with finite numbers",
                ),
            }
        }
        out
    }
}

/// Parses and validates a scenario document, reporting every problem found.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let doc: Value = serde_json::from_str(text).map_err(|e| {
        Error::Config(vec![ConfigIssue {
            path: "$".into(),
            message: format!("invalid JSON: {e}"),
        }])
    })?;
    let Value::Object(doc) = doc else {
        return Err(Error::Config(vec![ConfigIssue {
            path: "$".into(),
            message: "expected a JSON object".into(),
        }]));
    };
    let mut c = Collector { issues: Vec::new() };

    for key in doc.keys() {
        if !KNOWN_FIELDS.contains(&key.as_str()) {
            c.push(key, "unknown field");
        }
    }

    let kind = match doc.get("scenario") {
        None => {
            c.push("scenario", "missing required field");
            None
        }
        Some(Value::String(tag)) => {
            let kind = ScenarioKind::from_tag(tag);
            if kind.is_none() {
                let known: Vec<_> = ScenarioKind::ALL.iter().map(|(t, _)| *t).collect();
                c.push(
                    "scenario",
                    format!(
                        "unknown scenario '{tag}', expected one of {}",
                        known.join(", ")
                    ),
                );
            }
            kind
        }
        Some(_) => {
            c.push("scenario", "expected a string");
            None
        }
    };

    use ScenarioKind::*;
    let needs = |kinds: &[ScenarioKind]| kind.is_some_and(|k| kinds.contains(&k));
    let geometric = [
        CubeSpectrum,
        TwoCubes,
        TwoCubesOpposite,
        Sandwich,
        Embedded,
        BornRun,
        ForwardData,
    ];

    let side = c.length(&doc, "H_over_lambda", needs(&geometric));
    let h = c.length(
        &doc,
        "h_over_lambda",
        needs(&geometric) || needs(&[CubeSweep]),
    );
    let inner = c.length(&doc, "H_in_over_lambda", needs(&[Embedded]));
    let a = c.length(&doc, "a_over_lambda", needs(&[Bound]));

    let sweep = match doc.get("H_sweep_over_lambda") {
        None if needs(&[CubeSweep]) => {
            c.push("H_sweep_over_lambda", "missing required field");
            None
        }
        None => None,
        Some(Value::Array(items)) if !items.is_empty() => {
            let mut out = Vec::new();
            for (i, v) in items.iter().enumerate() {
                match v.as_f64() {
                    Some(x) if x > 0.0 && x.is_finite() => out.push(x),
                    _ => c.push(
                        &format!("H_sweep_over_lambda[{i}]"),
                        "length must be positive",
                    ),
                }
            }
            Some(out)
        }
        Some(_) => {
            c.push(
                "H_sweep_over_lambda",
                "expected a non-empty list of lengths",
            );
            None
        }
    };

    let delta_h = match c.number(&doc, "deltaH_over_H") {
        None if needs(&[TwoCubes, TwoCubesOpposite]) && !doc.contains_key("deltaH_over_H") => {
            c.push("deltaH_over_H", "missing required field");
            None
        }
        Some(v) if !(v >= 0.0 && v.is_finite()) => {
            c.push("deltaH_over_H", "gap must be non-negative");
            None
        }
        other => other,
    };

    let kappa: Vec<f64> = match doc.get("kappa") {
        None => {
            if kind.is_some_and(|k| k != Bound) {
                c.push("kappa", "missing required field");
            }
            Vec::new()
        }
        Some(Value::Number(n)) => vec![n.as_f64().unwrap_or(f64::NAN)],
        Some(Value::Array(items)) => {
            let values: Vec<f64> = items.iter().filter_map(Value::as_f64).collect();
            if values.len() != items.len() || values.len() != 2 {
                c.push("kappa", "expected a number or a pair of numbers");
            }
            values
        }
        Some(_) => {
            c.push("kappa", "expected a number or a pair of numbers");
            Vec::new()
        }
    };
    if kappa.iter().any(|k| !k.is_finite()) {
        c.push("kappa", "contrast must be finite");
    }
    if kappa.len() == 2 && needs(&[CubeSpectrum, CubeSweep, Sandwich, BornRun, ForwardData]) {
        c.push("kappa", "this scenario takes a single contrast");
    }
    if kappa.len() == 1 && needs(&[Embedded]) {
        c.push("kappa", "embedded scenario needs [kappa_out, kappa_in]");
    }

    let tol = match c.number(&doc, "tol") {
        None => 1e-10,
        Some(t) if t > 0.0 && t.is_finite() => t,
        Some(_) => {
            c.push("tol", "must be positive");
            1e-10
        }
    };
    let count = |c: &mut Collector, key: &str, default: usize| match doc.get(key) {
        None => default,
        Some(v) => match v.as_u64() {
            Some(n) if n >= 1 => n as usize,
            _ => {
                c.push(key, "expected a positive integer");
                default
            }
        },
    };
    let max_iter = count(&mut c, "max_iter", 10_000);
    let defaults = SpectralOptions::default();
    let real_cap = count(&mut c, "real_cap", defaults.real_cap);
    let complex_cap = count(&mut c, "complex_cap", defaults.complex_cap);
    let use_self_energy = match doc.get("use_self_energy") {
        None => true,
        Some(Value::Bool(b)) => *b,
        Some(_) => {
            c.push("use_self_energy", "expected true or false");
            true
        }
    };

    let probes = match doc.get("probes") {
        None => {
            if needs(&[BornRun, ForwardData]) {
                c.push("probes", "missing required field");
            }
            None
        }
        Some(Value::Object(p)) => {
            for key in p.keys() {
                if !["sources", "detectors", "strengths"].contains(&key.as_str()) {
                    c.push(&format!("probes.{key}"), "unknown field");
                }
            }
            let sources = c.point_list(p.get("sources"), "probes.sources");
            let detectors = c.point_list(p.get("detectors"), "probes.detectors");
            if sources.is_empty() && needs(&[BornRun, ForwardData]) {
                c.push("probes.sources", "at least one source is required");
            }
            if detectors.is_empty() && needs(&[ForwardData]) {
                c.push("probes.detectors", "at least one detector is required");
            }
            let strengths = match p.get("strengths") {
                None => None,
                Some(Value::Array(items)) => {
                    let s: Vec<f64> = items.iter().filter_map(Value::as_f64).collect();
                    if s.len() != items.len() || s.len() != sources.len() {
                        c.push("probes.strengths", "expected one number per source");
                    }
                    Some(s)
                }
                Some(_) => {
                    c.push("probes.strengths", "expected one number per source");
                    None
                }
            };
            Some(ProbesConfig {
                sources,
                detectors,
                strengths,
            })
        }
        Some(_) => {
            c.push("probes", "expected an object with sources and detectors");
            None
        }
    };

    let outputs = match doc.get("outputs") {
        None => OutputsConfig::default(),
        Some(v) => match serde_json::from_value::<OutputsConfig>(v.clone()) {
            Ok(o) => {
                if let Value::Object(m) = v {
                    for key in m.keys() {
                        if !["spectrum_csv", "summary_json", "data_csv"].contains(&key.as_str()) {
                            c.push(&format!("outputs.{key}"), "unknown field");
                        }
                    }
                }
                o
            }
            Err(_) => {
                c.push("outputs", "expected an object of output paths");
                OutputsConfig::default()
            }
        },
    };

    if let (Some(outer), Some(inner)) = (side, inner) {
        if inner >= outer {
            c.push(
                "H_in_over_lambda",
                "inner cube must be smaller than H_over_lambda",
            );
        }
    }

    if !c.issues.is_empty() {
        return Err(Error::Config(c.issues));
    }
    Ok(ScenarioConfig {
        scenario: kind.expect("no issues implies a known scenario"),
        side,
        sweep,
        h,
        kappa,
        delta_h,
        inner,
        a,
        tol,
        max_iter,
        use_self_energy,
        real_cap,
        complex_cap,
        probes,
        outputs,
    })
}

/// Scenario result written as the summary JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub scenario: String,
    pub n: Option<usize>,
    pub w_max: Option<f64>,
    pub max_abs: Option<f64>,
    pub max_imag_abs: Option<f64>,
    pub trace_defect: Option<f64>,
    pub elapsed_seconds: f64,
    pub version: String,
    pub config_hash: String,
    /// Scenario-specific values.
    pub details: BTreeMap<String, Value>,
    /// Files written, in order.
    pub outputs: Vec<PathBuf>,
}

/// Writes `n,re,im,n_over_N` rows (1-based `n`) in the stored spectrum
/// order, 17 significant digits.
pub fn write_spectrum_csv(path: &Path, report: &SpectrumReport) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["n", "re", "im", "n_over_N"])?;
    let values = report.spectrum.values();
    let total = values.len() as f64;
    for (i, v) in values.iter().enumerate() {
        let n = i + 1;
        w.write_record([
            n.to_string(),
            format!("{:.16e}", v.re),
            format!("{:.16e}", v.im),
            format!("{:.16e}", n as f64 / total),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn resolve(out_dir: &Path, configured: &Option<PathBuf>, default: String) -> PathBuf {
    match configured {
        Some(p) if p.is_absolute() => p.clone(),
        Some(p) => out_dir.join(p),
        None => out_dir.join(default),
    }
}

fn grid_details(grid: &VoxelGrid, details: &mut BTreeMap<String, Value>) {
    details.insert("geometry".into(), json!(grid.label()));
    details.insert("grid_fingerprint".into(), json!(grid.fingerprint()));
    details.insert(
        "q_f_alpha0".into(),
        json!(grid.q_f() * grid.medium().alpha0()),
    );
    details.insert(
        "kd_r_eq".into(),
        json!(grid.medium().kd() * equivalent_radius(grid.h())),
    );
    if let Ok(a) = enclosing_radius(grid) {
        details.insert(
            "enclosing_radius_over_lambda".into(),
            json!(a / grid.medium().lambda_d()),
        );
        if let Ok(b) = born_bound(a, grid.medium()) {
            details.insert("ball_threshold".into(), json!(b.threshold));
        }
    }
    let diagnostics = validate(grid);
    if !diagnostics.is_empty() {
        details.insert("diagnostics".into(), json!(diagnostics));
    }
}

fn probe_layout(config: &ScenarioConfig) -> Result<ProbeLayout> {
    let p = config.probes.clone().unwrap_or_default();
    let layout = ProbeLayout::from_wavelengths(&Medium::unit(), p.sources, p.detectors);
    match p.strengths {
        Some(s) => layout.with_strengths(s),
        None => Ok(layout),
    }
}

fn pair_kappa(config: &ScenarioConfig, opposite: bool) -> (f64, f64) {
    match config.kappa.as_slice() {
        [a, b] => (*a, *b),
        [a] if opposite => (*a, -*a),
        [a] => (*a, *a),
        _ => unreachable!("validated contrast list"),
    }
}

/// Runs a validated scenario, writing outputs under `out_dir`. `stem` names
/// default output files (`<stem>.csv`, `<stem>.summary.json`).
pub fn run_scenario(config: &ScenarioConfig, out_dir: &Path, stem: &str) -> Result<RunSummary> {
    let start = Instant::now();
    fs::create_dir_all(out_dir)?;
    let opts = config.spectral_options();
    let mut details = BTreeMap::new();
    let mut outputs = Vec::new();
    let mut report: Option<SpectrumReport> = None;
    let mut n = None;

    use ScenarioKind::*;
    match config.scenario {
        CubeSpectrum => {
            let grid = build_cube(config.side(), config.pitch(), config.kappa[0])?;
            grid_details(&grid, &mut details);
            details.insert(
                "cube_bound".into(),
                json!(f_shape(PI * 3f64.sqrt() * config.side())?),
            );
            report = Some(spectrum_w(&grid, &opts)?);
        }
        CubeSweep => {
            let sides = config.sweep.clone().unwrap_or_default();
            let points = wmax_sweep(&sides, config.pitch(), config.kappa[0], &opts);
            if let Some(failed) = points.iter().find_map(|p| p.error.clone()) {
                details.insert("first_error".into(), json!(failed));
            }
            details.insert("points".into(), json!(points));
        }
        TwoCubes | TwoCubesOpposite => {
            let opposite = config.scenario == TwoCubesOpposite;
            let (k1, k2) = pair_kappa(config, opposite);
            let gap = config.delta_h.unwrap_or(0.0);
            let grid = build_two_cubes(config.side(), config.pitch(), gap, k1, k2)?;
            grid_details(&grid, &mut details);
            let r = if k1 * k2 > 0.0 && !opposite {
                let r = spectrum_w(&grid, &opts)?;
                let isolated = build_cube(config.side(), config.pitch(), k1)?;
                let reference = spectrum_w(&isolated, &opts)?.w_max;
                details.insert("isolated_w_max".into(), json!(reference));
                details.insert("ratio_to_isolated".into(), json!(r.w_max / reference));
                let spectrum = r.spectrum.as_real().expect("W spectrum is real");
                details.insert(
                    "pairing_gap".into(),
                    json!(pairing_gap(spectrum, SPLIT_PAIRS)),
                );
                r
            } else {
                spectrum_wc(&grid, &opts)?
            };
            report = Some(r);
        }
        Sandwich => {
            let grid = build_sandwich(config.side(), config.pitch(), config.kappa[0])?;
            grid_details(&grid, &mut details);
            details.insert("kappa_sum".into(), json!(grid.kappas().iter().sum::<f64>()));
            report = Some(spectrum_wc(&grid, &opts)?);
        }
        Embedded => {
            let (k_out, k_in) = pair_kappa(config, false);
            let inner = config.inner.expect("validated");
            let grid = build_embedded(config.side(), inner, config.pitch(), k_out, k_in)?;
            grid_details(&grid, &mut details);
            let r = spectrum_wc(&grid, &opts)?;
            details.insert("max_abs_re".into(), json!(r.max_abs_re()));
            report = Some(r);
        }
        BornRun => {
            let grid = build_cube(config.side(), config.pitch(), config.kappa[0])?;
            grid_details(&grid, &mut details);
            n = Some(grid.len());
            let pol = polarizabilities(&grid, config.use_self_energy)?;
            let probes = probe_layout(config)?;
            let u = incident_field(&grid, &probes)?;
            let born = born_iterate(
                &grid,
                &pol,
                &u,
                &BornOptions {
                    tol: config.tol,
                    max_iter: config.max_iter,
                },
            )?;
            if grid.len() <= config.real_cap {
                details.insert(
                    "convergence_radius".into(),
                    json!(convergence_radius(&grid, &pol)?),
                );
            }
            if born.converged {
                let direct = dipoles_direct(&grid, &pol, &u)?;
                let d = born.dipoles.as_ref().expect("dipoles are kept");
                let err = d.sub(&direct)?.norm_fro() / direct.norm_fro().max(f64::MIN_POSITIVE);
                details.insert("relative_error_vs_direct".into(), json!(err));
            }
            details.insert("converged".into(), json!(born.converged));
            details.insert("iterations".into(), json!(born.iterations));
            details.insert("divergence".into(), json!(born.divergence));
            details.insert("final_residual".into(), json!(born.residuals.last()));
        }
        Bound => {
            let a_over_lambda = config.a.expect("validated");
            let medium = Medium::unit();
            let mut verdict = born_bound(a_over_lambda * medium.lambda_d(), &medium)?;
            if let Some(&k) = config.kappa.first() {
                verdict = verdict.with_contrast(k);
            }
            details.insert("a_over_lambda".into(), json!(a_over_lambda));
            details.insert("verdict".into(), json!(verdict));
        }
        ForwardData => {
            let grid = build_cube(config.side(), config.pitch(), config.kappa[0])?;
            grid_details(&grid, &mut details);
            n = Some(grid.len());
            let pol = polarizabilities(&grid, config.use_self_energy)?;
            let probes = probe_layout(config)?;
            let data = data_function(&grid, &pol, &probes)?;
            let path = resolve(
                out_dir,
                &config.outputs.data_csv,
                format!("{stem}.data.csv"),
            );
            let mut w = csv::Writer::from_path(&path)?;
            w.write_record(["detector", "source", "g0_ds", "g_ds", "delta"])?;
            for i in 0..data.g_ds.rows() {
                for j in 0..data.g_ds.cols() {
                    w.write_record([
                        i.to_string(),
                        j.to_string(),
                        format!("{:.16e}", data.g0_ds.get(i, j)),
                        format!("{:.16e}", data.g_ds.get(i, j)),
                        format!("{:.16e}", data.delta.get(i, j)),
                    ])?;
                }
            }
            w.flush()?;
            outputs.push(path);
            details.insert("max_abs_delta".into(), json!(data.delta.max_abs()));
        }
    }

    if let Some(r) = &report {
        n = Some(r.grid.n);
        if config.scenario.writes_spectrum() {
            let path = resolve(out_dir, &config.outputs.spectrum_csv, format!("{stem}.csv"));
            write_spectrum_csv(&path, r)?;
            outputs.push(path);
        }
    }
    let summary_path = resolve(
        out_dir,
        &config.outputs.summary_json,
        format!("{stem}.summary.json"),
    );
    outputs.push(summary_path.clone());
    let summary = RunSummary {
        scenario: config.scenario.tag().to_string(),
        n,
        w_max: report.as_ref().map(|r| r.w_max),
        max_abs: report.as_ref().map(|r| r.max_abs),
        max_imag_abs: report.as_ref().map(|r| r.max_imag_abs),
        trace_defect: report.as_ref().map(|r| r.trace_defect),
        elapsed_seconds: start.elapsed().as_secs_f64(),
        version: VERSION.to_string(),
        config_hash: config.hash(),
        details,
        outputs,
    };
    fs::write(&summary_path, serde_json::to_string_pretty(&summary)?)?;
    Ok(summary)
}

/// Process exit code for a scenario outcome: 0 success, 3 configuration
/// problems, 2 anything raised while solving or writing.
pub fn exit_code<T>(outcome: &Result<T>) -> i32 {
    match outcome {
        Ok(_) => 0,
        Err(Error::Config(_)) => 3,
        Err(_) => 2,
    }
}

/// JSON error report for a failed run.
pub fn error_report(error: &Error) -> Value {
    match error {
        Error::Config(issues) => json!({
            "error": "config",
            "issues": issues.iter().map(|i| json!({"path": i.path, "message": i.message})).collect::<Vec<_>>(),
        }),
        other => json!({ "error": "solver", "message": other.to_string() }),
    }
}

/// Reads, parses and runs a scenario file. Unreadable files count as
/// configuration errors.
pub fn run_file(path: &Path, out_dir: &Path) -> Result<RunSummary> {
    let text = fs::read_to_string(path).map_err(|e| {
        Error::Config(vec![ConfigIssue {
            path: path.display().to_string(),
            message: format!("cannot read: {e}"),
        }])
    })?;
    let config = parse_config(&text)?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".into());
    run_scenario(&config, out_dir, &stem)
}
