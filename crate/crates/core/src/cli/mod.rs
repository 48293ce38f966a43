//! Run configurations, dispatch to the pipelines, JSON reports and the corpus runner.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fermat::fermat_pipeline;
use crate::geometry::{
    curve_model_ideal, mustafin_ideal, plane_ring, single_projection_model, special_fiber, star_like_experiment,
    verify_component_decomposition, CatalogMode, ComponentCatalog, LatticeConfiguration, PlaneCurve,
};
use crate::parse::parse_polynomial;
use crate::scalar::CoeffField;
use crate::syzygy::{example_class, is_admissible_lift, sample_forms, triviality_certificate, DegreeData};

/// Version of the report layout.
pub const SCHEMA_VERSION: u32 = 1;
pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const DEFAULT_PRIME: u32 = 32003;
pub const DEFAULT_BOUND: u64 = 1000;
pub const DEFAULT_MIN_RATIO: f64 = 0.9;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    MustafinFiber,
    CurveModel,
    StarLike,
    SyzygyCheck,
    Fermat,
    Corpus,
}

/// One run. Absent numeric fields take the defaults of their command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    /// Number of lattices `n + 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_plus_1: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<u64>,
    /// Plane curve in `u1, u2, u3` (and `t`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<String>,
    /// Forms `h_i` in `t, x1, x2, x3` for `syzygy-check`; sampled from the seed when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forms: Option<Vec<String>>,
    /// Required success ratio for `star-like`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_ratio: Option<f64>,
    /// Corpus directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            n_plus_1: None,
            prime: None,
            d: None,
            rho: None,
            degrees: None,
            trials: None,
            seed: 0,
            bound: None,
            curve: None,
            forms: None,
            min_ratio: None,
            path: None,
            output: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn prime(&self) -> u32 {
        self.prime.unwrap_or(DEFAULT_PRIME)
    }

    pub fn field(&self) -> Result<CoeffField> {
        CoeffField::checked_prime(self.prime() as u64)
    }

    pub fn bound(&self) -> u64 {
        self.bound.unwrap_or(DEFAULT_BOUND)
    }

    pub fn n_plus_1(&self) -> usize {
        self.n_plus_1.unwrap_or(3)
    }

    pub fn trials(&self) -> usize {
        self.trials.unwrap_or(match self.command {
            Command::Fermat => 5,
            _ => 10,
        })
    }

    pub fn d(&self) -> u32 {
        self.d.unwrap_or(3)
    }

    pub fn min_ratio(&self) -> f64 {
        self.min_ratio.unwrap_or(DEFAULT_MIN_RATIO)
    }

    /// Degree data of `syzygy-check`.
    pub fn degree_data(&self) -> Result<DegreeData> {
        let rho = self.rho.ok_or_else(|| invalid("syzygy-check needs --rho"))?;
        let degrees = self.degrees.clone().ok_or_else(|| invalid("syzygy-check needs --degrees"))?;
        let n_plus_1 = self.n_plus_1.unwrap_or(degrees.len());
        if n_plus_1 != degrees.len() {
            return Err(invalid(&format!("{} degrees given for {} lattices", degrees.len(), n_plus_1)));
        }
        if n_plus_1 < 3 {
            return Err(invalid("syzygy-check needs n ≥ 2, that is at least three degrees"));
        }
        let n = n_plus_1 - 1;
        let sum: u32 = degrees.iter().sum();
        if sum != n as u32 * rho {
            return Err(invalid(&format!("degrees sum to {sum}, but n·rho = {n}·{rho} = {}", n as u32 * rho)));
        }
        DegreeData::new(n, rho, degrees)
    }

    /// Checks every numeric constraint of the command; nothing is computed.
    pub fn validate(&self) -> Result<()> {
        self.field()?;
        if self.bound() < 2 {
            return Err(invalid("--bound must be at least 2"));
        }
        if self.trials() == 0 {
            return Err(invalid("--trials must be at least 1"));
        }
        if self.n_plus_1() == 0 {
            return Err(invalid("at least one lattice is required"));
        }
        if let Some(r) = self.min_ratio {
            if !(0.0..=1.0).contains(&r) {
                return Err(invalid("--min-ratio must lie in [0, 1]"));
            }
        }
        match self.command {
            Command::MustafinFiber => {}
            Command::CurveModel | Command::StarLike => {
                let curve = self.curve.as_deref().ok_or_else(|| invalid("a curve is required (--curve)"))?;
                PlaneCurve::parse(self.field()?, curve)?;
            }
            Command::SyzygyCheck => {
                let data = self.degree_data()?;
                if let Some(forms) = &self.forms {
                    if forms.len() != data.n_plus_1() {
                        return Err(invalid(&format!("{} forms given for {} lattices", forms.len(), data.n_plus_1())));
                    }
                    let ring = plane_ring(self.field()?);
                    for (f, &d) in forms.iter().zip(data.degrees()) {
                        let p = parse_polynomial(&ring, f)?;
                        if !p.is_zero() && !is_x_homogeneous(&p, d) {
                            return Err(invalid(&format!("form `{f}` is not homogeneous of degree {d} in x1, x2, x3")));
                        }
                    }
                }
            }
            Command::Fermat => {
                let d = self.d();
                if d == 0 {
                    return Err(invalid("--d must be at least 1"));
                }
                if (2 * d as u64).is_multiple_of(self.prime() as u64) {
                    return Err(invalid(&format!("prime {} divides 2d = {}", self.prime(), 2 * d)));
                }
            }
            Command::Corpus => {
                if self.path.is_none() {
                    return Err(invalid("corpus needs a directory (--path)"));
                }
            }
        }
        Ok(())
    }
}

fn invalid(msg: &str) -> Error {
    Error::InvalidInput(msg.to_string())
}

fn is_x_homogeneous(p: &crate::poly::Polynomial, d: u32) -> bool {
    // variable 0 is t
    p.terms().iter().all(|(m, _)| m.degree() - m.get(0) as u32 == d)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    pub name: String,
    pub passed: bool,
}

fn stage(name: &str, passed: bool) -> Stage {
    Stage { name: name.to_string(), passed }
}

/// Self-contained record of a run. Everything except `timings_ms` is deterministic in the
/// echoed configuration.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub artifact_version: String,
    pub config: RunConfig,
    pub verdict: bool,
    pub stages: Vec<Stage>,
    pub result: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub timings_ms: BTreeMap<String, f64>,
}

impl Report {
    fn new(config: &RunConfig) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            artifact_version: ARTIFACT_VERSION.to_string(),
            config: config.clone(),
            verdict: false,
            stages: Vec::new(),
            result: Value::Null,
            error: None,
            timings_ms: BTreeMap::new(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.verdict {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// The report with all timings removed, nested corpus entries included.
    pub fn verdict_json(&self) -> Result<String> {
        let mut v = serde_json::to_value(self)?;
        strip_timings(&mut v);
        Ok(serde_json::to_string(&v)?)
    }
}

fn strip_timings(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("timings_ms");
            map.values_mut().for_each(strip_timings);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timings),
        _ => {}
    }
}

struct Timer(BTreeMap<String, f64>);

impl Timer {
    fn run<T>(&mut self, name: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let start = Instant::now();
        let out = f();
        self.0.insert(name.to_string(), start.elapsed().as_secs_f64() * 1e3);
        out
    }
}

/// Validates and runs one configuration. Validation failures are returned as errors;
/// failures inside a pipeline are recorded in the report with a false verdict.
pub fn dispatch(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    if cfg.command == Command::Corpus {
        let path = cfg.path.as_ref().expect("validated");
        let mut report = corpus_run(path)?;
        report.config = cfg.clone();
        return Ok(report);
    }
    let mut report = Report::new(cfg);
    let mut timer = Timer(BTreeMap::new());
    let outcome = match cfg.command {
        Command::MustafinFiber => run_mustafin_fiber(cfg, &mut timer),
        Command::CurveModel => run_curve_model(cfg, &mut timer),
        Command::StarLike => run_star_like(cfg, &mut timer),
        Command::SyzygyCheck => run_syzygy_check(cfg, &mut timer),
        Command::Fermat => run_fermat(cfg, &mut timer),
        Command::Corpus => unreachable!(),
    };
    match outcome {
        Ok((stages, result)) => {
            report.verdict = !stages.is_empty() && stages.iter().all(|s| s.passed);
            report.stages = stages;
            report.result = result;
        }
        Err(e) => report.error = Some(e.to_string()),
    }
    report.timings_ms = timer.0;
    Ok(report)
}

type Outcome = Result<(Vec<Stage>, Value)>;

fn sample_lattices(cfg: &RunConfig) -> Result<LatticeConfiguration> {
    LatticeConfiguration::sample(cfg.field()?, cfg.n_plus_1(), cfg.seed, cfg.bound())
}

fn run_mustafin_fiber(cfg: &RunConfig, timer: &mut Timer) -> Outcome {
    let lat = sample_lattices(cfg)?;
    let n1 = cfg.n_plus_1();
    let ideal = timer.run("ideal", || mustafin_ideal(&lat))?;
    let fiber = timer.run("special_fiber", || special_fiber(&ideal))?;
    let catalog = ComponentCatalog::new(cfg.field()?, n1)?;
    let comp = timer.run("components", || verify_component_decomposition(&fiber, &catalog, CatalogMode::Mustafin))?;
    let expected = n1 * (n1 + 1) / 2;
    let stages = vec![stage("decomposition", comp.decomposition_holds), stage("component_count", comp.component_count == expected)];
    let result = json!({
        "lattices": lat.to_data(),
        "fiber": fiber.generator_strings(),
        "expected_component_count": expected,
        "components": comp,
    });
    Ok((stages, result))
}

fn run_curve_model(cfg: &RunConfig, timer: &mut Timer) -> Outcome {
    let field = cfg.field()?;
    let curve = PlaneCurve::parse(field, cfg.curve.as_deref().expect("validated"))?;
    let lat = sample_lattices(cfg)?;
    let n1 = cfg.n_plus_1();
    let projections = timer.run("single_projections", || {
        (0..n1).map(|l| single_projection_model(&lat, &curve, l)).collect::<Result<Vec<_>>>()
    })?;
    let ideal = timer.run("curve_model", || curve_model_ideal(&lat, &curve))?;
    let fiber = timer.run("special_fiber", || special_fiber(&ideal))?;
    let catalog = ComponentCatalog::new(field, n1)?;
    let comp = timer.run("components", || verify_component_decomposition(&fiber, &catalog, CatalogMode::Curve))?;
    let pure = projections.iter().all(|p| p.is_pure_power());
    let stages = vec![stage("single_projections_pure", pure), stage("star_like", comp.star_like)];
    let projections: Vec<Value> = projections
        .iter()
        .map(|p| {
            json!({
                "index": p.index + 1,
                "f": p.f.to_string(),
                "f_tilde": p.f_tilde.to_string(),
                "coefficient": p.coefficient.as_ref().map(|c| c.to_string()),
                "pure_power": p.is_pure_power(),
            })
        })
        .collect();
    let result = json!({
        "curve": curve.equation().to_string(),
        "lattices": lat.to_data(),
        "single_projections": projections,
        "fiber": fiber.generator_strings(),
        "components": comp,
    });
    Ok((stages, result))
}

fn run_star_like(cfg: &RunConfig, timer: &mut Timer) -> Outcome {
    let curve = PlaneCurve::parse(cfg.field()?, cfg.curve.as_deref().expect("validated"))?;
    let summary = timer.run("experiment", || star_like_experiment(&curve, cfg.n_plus_1(), cfg.trials(), cfg.seed))?;
    let stages = vec![stage("success_ratio", summary.ratio >= cfg.min_ratio())];
    Ok((stages, serde_json::to_value(&summary)?))
}

fn run_syzygy_check(cfg: &RunConfig, timer: &mut Timer) -> Outcome {
    let field = cfg.field()?;
    let data = cfg.degree_data()?;
    let lat = LatticeConfiguration::sample(field, data.n_plus_1(), cfg.seed, cfg.bound())?;
    let forms = match &cfg.forms {
        Some(forms) => {
            let ring = plane_ring(field);
            forms.iter().map(|f| parse_polynomial(&ring, f)).collect::<Result<Vec<_>>>()?
        }
        None => sample_forms(&data, field, cfg.seed, cfg.bound())?,
    };
    let tuple = timer.run("example_class", || example_class(&data, &lat, &forms))?;
    let consistent = timer.run("lifts", || tuple.lifts_consistent(&lat))?;
    let lifts = tuple.lifts.as_ref().expect("example tuples carry lifts");
    let admissible = lifts.iter().map(is_admissible_lift).collect::<Result<Vec<_>>>()?;
    let cert = timer.run("certificate", || triviality_certificate(&tuple))?;
    let stages = vec![
        stage("lifts_consistent", consistent),
        stage("lifts_admissible", admissible.iter().all(|&a| a)),
        stage("triviality", cert.overall),
    ];
    let result = json!({
        "lattices": lat.to_data(),
        "forms": forms.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        "tuple": tuple.forms.iter().map(|f| json!({"offset": f.offset, "poly": f.poly.to_string()})).collect::<Vec<_>>(),
        "lifts": lifts.iter().map(|l| l.poly().to_string()).collect::<Vec<_>>(),
        "admissible": admissible,
        "certificate": cert,
    });
    Ok((stages, result))
}

fn run_fermat(cfg: &RunConfig, timer: &mut Timer) -> Outcome {
    let report = timer.run("pipeline", || fermat_pipeline(cfg.d(), cfg.prime(), cfg.trials(), cfg.seed))?;
    let stages = vec![stage("full_witness", report.full_witnesses >= 1)];
    Ok((stages, serde_json::to_value(&report)?))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub file: String,
    pub verdict: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<Report>,
}

fn run_entry(path: &Path) -> CorpusEntry {
    let file = path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
    let outcome = std::fs::read_to_string(path).map_err(Error::from).and_then(|text| {
        let cfg = RunConfig::from_json(&text)?;
        if cfg.command == Command::Corpus {
            return Err(invalid("nested corpus entries are not supported"));
        }
        dispatch(&cfg)
    });
    match outcome {
        Ok(report) => CorpusEntry { file, verdict: report.verdict, error: report.error.clone(), report: Some(report) },
        Err(e) => CorpusEntry { file, verdict: false, error: Some(e.to_string()), report: None },
    }
}

/// Runs every `*.json` configuration in `dir`, ordered by file name. Unreadable or
/// invalid entries are marked failed and the others still run.
pub fn corpus_run(dir: &Path) -> Result<Report> {
    let start = Instant::now();
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    let entries: Vec<CorpusEntry> = files.par_iter().map(|p| run_entry(p)).collect();
    let mut cfg = RunConfig::new(Command::Corpus);
    cfg.path = Some(dir.to_path_buf());
    let mut report = Report::new(&cfg);
    report.stages = entries.iter().map(|e| stage(&e.file, e.verdict)).collect();
    report.verdict = entries.iter().all(|e| e.verdict);
    report.result = json!({
        "entries": entries.len(),
        "passed": entries.iter().filter(|e| e.verdict).count(),
        "results": entries,
    });
    report.timings_ms.insert("corpus".into(), start.elapsed().as_secs_f64() * 1e3);
    Ok(report)
}
