//! Subcommand implementations behind the `dirackit` binary.
//!
//! Every entry point returns an [`Outcome`]: a canonical JSON report, an
//! optional CSV body and a pass/fail status. Input problems surface as
//! [`CliError::Input`], which the binary maps to exit code 2.

use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Map, Value};

use dirackit::hamaction::{self, LevelRegularity};
use dirackit::obstruction::{self, Homotopy, Region};
use dirackit::rational::{self, Q};
use dirackit::reduction;
use dirackit::scene::{ObstructionSpec, Scene, SceneParts};
use dirackit::{DiracError, DiracSpan};

pub const DEFAULT_SEED: u64 = 20_240_601;
/// Random fiber spot checks performed by `validate`.
pub const SAMPLE_POINTS: usize = 16;
/// Rows in the `(r, g(r))` CSV.
pub const CSV_SAMPLES: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
        }
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Malformed or inconsistent scene; exit code 2.
    Input(String),
    /// A computation failed on well-formed input; exit code 1.
    Math(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Math(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Math(m) => write!(f, "computation failed: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<DiracError> for CliError {
    fn from(e: DiracError) -> Self {
        if e.is_input_error() {
            CliError::Input(e.to_string())
        } else {
            CliError::Math(e.to_string())
        }
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub grid_res: Option<usize>,
    pub quadrature_order: Option<usize>,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            grid_res: None,
            quadrature_order: None,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub json: String,
    pub csv: Option<String>,
    pub status: Status,
}

fn input(e: impl fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

/// Parses a scene. A bare obstruction block (an object with an `"f"` key)
/// is accepted as an obstruction-only scene.
pub fn load_scene(text: &str) -> Result<Scene, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| input(format!("malformed JSON: {e}")))?;
    if value.get("f").is_some() {
        let obstruction: ObstructionSpec =
            serde_json::from_value(value).map_err(|e| input(format!("bad obstruction block: {e}")))?;
        return Ok(Scene {
            obstruction: Some(obstruction),
            ..Scene::default()
        });
    }
    serde_json::from_value(value).map_err(|e| input(format!("bad scene: {e}")))
}

/// JSON Schema of the scene format.
pub fn schema() -> String {
    let s = schemars::schema_for!(Scene);
    serde_json::to_string_pretty(&s).expect("schema serializes") + "\n"
}

/// Rounds a float to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

fn canonicalize(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round12(n.as_f64().unwrap_or(0.0));
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(canonicalize).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, canonicalize(v))).collect::<Map<_, _>>()),
        other => other,
    }
}

/// Sorted keys, 12-significant-digit floats, pretty printed, trailing newline.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("report serializes");
    serde_json::to_string_pretty(&canonicalize(v)).expect("value serializes") + "\n"
}

fn check(status: &str, detail: Value) -> Value {
    json!({ "status": status, "detail": detail })
}

fn skipped(reason: &str) -> Value {
    check("skipped", json!(reason))
}

fn fail_err(e: &DiracError) -> Value {
    check("fail", json!(e.to_string()))
}

fn pt(p: &[Q]) -> Vec<String> {
    p.iter().map(rational::fmt_q).collect()
}

fn random_points(parts: &SceneParts, seed: u64) -> Vec<Vec<Q>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = &parts.domain;
    (0..SAMPLE_POINTS)
        .map(|_| {
            d.min
                .iter()
                .zip(&d.max)
                .map(|(a, b)| a + (b - a) * rational::qf(rng.gen_range(0..=64), 64))
                .collect()
        })
        .collect()
}

fn isotropy_check(l: &DiracSpan, parts: &SceneParts, seed: u64) -> Value {
    let mut degenerate = Vec::new();
    let mut bad = Vec::new();
    let points = random_points(parts, seed);
    for p in &points {
        match l.evaluate(p) {
            Ok(f) if f.is_maximal_isotropic() => {}
            Ok(_) => bad.push(pt(p)),
            Err(_) => degenerate.push(pt(p)),
        }
    }
    let detail = json!({
        "symbolic": "all pairings <e_i, e_j>_+ vanish identically",
        "samples": points.len(),
        "degenerate_samples": degenerate,
        "non_lagrangian_samples": bad,
    });
    check(if bad.is_empty() { "pass" } else { "fail" }, detail)
}

fn involutivity_check(l: &DiracSpan, names: &[String]) -> Result<Value, CliError> {
    let t = l.integrability_tensor()?;
    Ok(match t.first_nonzero() {
        None => check("pass", json!("integrability tensor vanishes identically")),
        Some((i, j, k, p)) => check(
            "fail",
            json!({ "i": i, "j": j, "k": k, "value": p.display_with(names) }),
        ),
    })
}

fn regularity_check(l: &DiracSpan, parts: &SceneParts, res: usize) -> Result<Value, CliError> {
    let Some(a) = &parts.action else {
        return Ok(skipped("no action"));
    };
    if let (Some(mu), Some(level)) = (&parts.moment, &parts.level) {
        return Ok(match hamaction::is_regular_at(l, a, mu, &level.c, Some(level), res) {
            Ok(r @ LevelRegularity::Regular { .. }) => check("pass", json!(r)),
            Ok(r @ LevelRegularity::EmptyLevelSet) => check("pass", json!(r)),
            Ok(r @ LevelRegularity::NotRegular { .. }) => check("fail", json!(r)),
            Err(e) if e.is_input_error() => return Err(e.into()),
            Err(e) => fail_err(&e),
        });
    }
    let grid = parts.sample_grid(Some(res))?;
    Ok(match hamaction::is_regular_action(l, a, &grid) {
        Ok(r) => check(if r.is_regular() { "pass" } else { "fail" }, json!(r)),
        Err(e) if e.is_input_error() => return Err(e.into()),
        Err(e) => fail_err(&e),
    })
}

/// Isotropy, involutivity, Dirac-action, moment and regularity checks.
pub fn validate(scene: &Scene, opts: &Options) -> Result<Outcome, CliError> {
    let mut report = Map::new();
    report.insert("scene".into(), json!(scene.name));
    report.insert("seed".into(), json!(opts.seed));
    let parts = scene.parts()?;
    let res = opts.grid_res.or(parts.grid.as_ref().map(|g| g.resolution)).unwrap_or(8);
    let names = ["isotropy", "involutivity", "dirac_action", "moment_condition", "regularity"];
    let l = match scene.build_dirac() {
        Ok(l) => l,
        Err(e) if e.is_input_error() => return Err(e.into()),
        Err(e) => {
            report.insert("isotropy".into(), fail_err(&e));
            for n in &names[1..] {
                report.insert((*n).into(), skipped("no valid Dirac structure"));
            }
            return Ok(finish_validate(report));
        }
    };
    report.insert("isotropy".into(), isotropy_check(&l, &parts, opts.seed));
    report.insert("involutivity".into(), involutivity_check(&l, &parts.names)?);
    let action = match &parts.action {
        None => skipped("no action"),
        Some(a) => {
            let c = hamaction::is_dirac_action(&l, a)?;
            check(if c.holds { "pass" } else { "fail" }, json!(c))
        }
    };
    report.insert("dirac_action".into(), action);
    let moment = match (&parts.action, &parts.moment) {
        (Some(a), Some(mu)) => {
            let c = hamaction::check_moment(&l, a, mu)?;
            check(if c.holds() { "pass" } else { "fail" }, json!(c))
        }
        _ => skipped("no action or moment map"),
    };
    report.insert("moment_condition".into(), moment);
    report.insert("regularity".into(), regularity_check(&l, &parts, res)?);
    Ok(finish_validate(report))
}

fn finish_validate(report: Map<String, Value>) -> Outcome {
    let ok = report
        .values()
        .filter_map(|v| v.get("status"))
        .all(|s| s != "fail");
    Outcome {
        json: canonical_json(&report),
        csv: None,
        status: Status::from_bool(ok),
    }
}

/// Smoothness probe plus, when a level set is present, the reduction diamond.
/// Only a `non-smooth` probe verdict or a failed diamond counts as failure.
pub fn reduce(scene: &Scene, opts: &Options) -> Result<Outcome, CliError> {
    let parts = scene.parts()?;
    let l = scene.build_dirac()?;
    let quotient = parts.quotient()?;
    let grid = parts.sample_grid(opts.grid_res)?;
    let probe = reduction::smoothness_probe(&l, &quotient, &grid)?;
    let mut ok = probe.verdict != reduction::SmoothnessVerdict::NonSmooth;
    let diamond = match (&parts.action, &parts.moment, &parts.level, &parts.level_quotient) {
        (Some(a), Some(mu), Some(level), Some(qc)) => {
            let res = grid.resolution;
            match reduction::verify_diamond(&l, a, mu, level, &quotient, qc, res) {
                Ok(d) => {
                    ok &= d.passed();
                    json!({ "status": if d.passed() { "pass" } else { "fail" }, "report": d })
                }
                Err(e) if e.is_input_error() => return Err(e.into()),
                Err(e) => {
                    ok = false;
                    json!({ "status": "refused", "reason": e.to_string() })
                }
            }
        }
        _ => json!({ "status": "skipped", "reason": "no level set with quotient" }),
    };
    let report = json!({ "scene": scene.name, "probe": probe, "diamond": diamond });
    Ok(Outcome {
        json: canonical_json(&report),
        csv: Some(probe.gaps_csv()),
        status: Status::from_bool(ok),
    })
}

fn obstruction_spec(scene: &Scene) -> Result<&ObstructionSpec, CliError> {
    scene
        .obstruction
        .as_ref()
        .ok_or_else(|| input("scene has no \"obstruction\" block"))
}

fn atlas_for(spec: &ObstructionSpec, opts: &Options) -> Result<obstruction::SphereAtlas, CliError> {
    let mut spec = spec.clone();
    if let Some(q) = opts.quadrature_order {
        spec.quadrature_order = q;
    }
    let atlas = spec.atlas()?;
    atlas.check_consistency()?;
    Ok(atlas)
}

fn g_csv(report: &obstruction::MonodromyReport) -> Result<String, CliError> {
    let mut s = String::from("r,g\n");
    for (r, g) in report.samples(CSV_SAMPLES)? {
        s.push_str(&format!("{},{}\n", round12(r), round12(g)));
    }
    Ok(s)
}

/// Monodromy verdict; non-integrable exits with status 1.
pub fn obstruct(scene: &Scene, opts: &Options) -> Result<Outcome, CliError> {
    let spec = obstruction_spec(scene)?;
    let atlas = atlas_for(spec, opts)?;
    let f = spec.profile()?;
    let report = obstruction::monodromy_verdict(&f, spec.interval()?, &atlas)?;
    Ok(Outcome {
        json: canonical_json(&report),
        csv: Some(g_csv(&report)?),
        status: Status::from_bool(report.verdict != obstruction::Verdict::NonIntegrable),
    })
}

/// Curvature integrals, area variation (numeric and closed form) and the
/// homotopy double integral for the scene's disk family.
pub fn area(scene: &Scene, opts: &Options) -> Result<Outcome, CliError> {
    let spec = obstruction_spec(scene)?;
    let atlas = atlas_for(spec, opts)?;
    let f = spec.profile()?;
    let [a, b] = spec.interval()?;
    let family = spec.disk().unwrap_or(obstruction::DiskFamily {
        theta0: PI / 2.0,
        r0: rational::to_f64(&((&a + &b) * rational::half())),
        velocity: 1.0,
    });
    let run = || -> Result<Value, DiracError> {
        let full = atlas.curvature_integral(Region::Full)?;
        let cap = atlas.curvature_integral(Region::Cap(family.theta0))?;
        let complement = atlas.curvature_integral(Region::Complement(family.theta0))?;
        let numeric = obstruction::area_variation_numeric(&atlas, &f, &family, spec.step)?;
        let analytic = obstruction::area_variation_analytic(&atlas, &f, &family)?;
        let homotopy = obstruction::homotopy_double_integral(&atlas, &Homotopy::latitude_shrink(family.theta0))?;
        let variation_ok = (numeric - analytic).abs() < 1e-6 * (1.0 + analytic.abs());
        let stokes_ok = (homotopy - cap.value).abs() < 1e-6;
        let additivity_ok = (cap.value + complement.value - full.value).abs() < 1e-8;
        Ok(json!({
            "family": { "theta0": family.theta0, "r0": family.r0, "velocity": family.velocity },
            "full_sphere": full,
            "cap": cap,
            "complement": complement,
            "additivity": additivity_ok,
            "area_variation": { "numeric": numeric, "analytic": analytic, "agree": variation_ok },
            "homotopy_double_integral": { "value": homotopy, "matches_cap": stokes_ok },
        }))
    };
    let body = run()?;
    let ok = body["additivity"] == true
        && body["area_variation"]["agree"] == true
        && body["homotopy_double_integral"]["matches_cap"] == true;
    let verdict = obstruction::monodromy_verdict(&f, [a, b], &atlas)?;
    Ok(Outcome {
        json: canonical_json(&json!({ "scene": scene.name, "integrals": body })),
        csv: Some(g_csv(&verdict)?),
        status: Status::from_bool(ok),
    })
}

/// Canonical JSON of a preset scene.
pub fn preset(name: &str) -> Result<String, CliError> {
    dirackit::presets::by_name(name)
        .map(|s| canonical_json(&s))
        .ok_or_else(|| input(format!("unknown preset {name:?}; known: {}", dirackit::presets::NAMES.join(", "))))
}
