use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Parser;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use harmonic_core::asymptotics::{cheeger_chain_report, LAMBDA0_TOLERANCE, MU_TOLERANCE};
use harmonic_core::functions::{line_grid, EvenLineFunction, RadialFunction};
use harmonic_core::geometry::{
    displacement_identity_check, idempotence_check, projector_convolution_check, projector_selfadjoint_check,
    ExplicitSpace, Point,
};
use harmonic_core::pde::{
    heat_identity_check, radial_heat_solve, radial_wave_solve, HeatOptions, KgSolution, WaveOptions,
};
use harmonic_core::profile::GaussianBump;
use harmonic_core::spherical::{phi, phi_ode, phi_series, RadialGrid, DEFAULT_SERIES_TOL, DEFAULT_ZERO_TOL};
use harmonic_core::suite::run_suite;
use harmonic_core::transforms::{
    abel_inverse_with, abel_with, radial_convolve, spherical_fourier, AbelOptions, InverseOptions,
};
use harmonic_core::two_radius::{bad_radii, certify_pair, find_l_zeros, LBox, Target, Verdict, ZeroSet};
use harmonic_core::{DensityModel, Error, Result};

use crate::output::{csv_text, json_text, model_value, read_csv, read_manifest, to_value, Manifest, VERSION};
use crate::{
    BadRadiiArgs, CertifyArgs, CheegerArgs, Cli, Command, FourierArgs, GeoArgs, HeatArgs, HeatCheckArgs,
    KgArgs, PhiArgs, ReplayArgs, SuiteArgs, TransformArgs, WaveArgs, ZerosArgs,
};

/// Text destined for a file, or stdout when `path` is `None`.
pub struct Artifact {
    pub path: Option<PathBuf>,
    pub text: String,
}

impl Artifact {
    pub fn write(&self) -> std::io::Result<()> {
        match &self.path {
            Some(p) => fs::write(p, &self.text),
            None => {
                use std::io::Write;
                std::io::stdout().write_all(self.text.as_bytes())
            }
        }
    }
}

pub struct Outcome {
    pub artifacts: Vec<Artifact>,
    /// False when a check ran but failed.
    pub success: bool,
}

impl Outcome {
    fn one(path: Option<PathBuf>, text: String) -> Self {
        Self {
            artifacts: vec![Artifact { path, text }],
            success: true,
        }
    }

    fn checked(mut self, success: bool) -> Self {
        self.success = success;
        self
    }
}

struct Run<'a> {
    command: &'static str,
    args: &'a [String],
    model: Option<&'a DensityModel>,
    parameters: Value,
    tolerances: Value,
    seed: Option<u64>,
    outputs: Vec<Option<&'a Path>>,
}

impl Run<'_> {
    fn manifest(&self) -> Manifest {
        Manifest {
            command: self.command.to_string(),
            args: self.args.to_vec(),
            model: self.model.map(model_value),
            parameters: self.parameters.clone(),
            tolerances: self.tolerances.clone(),
            seed: self.seed,
            version: VERSION,
            outputs: self
                .outputs
                .iter()
                .map(|p| p.map_or("-".to_string(), |p| p.display().to_string()))
                .collect(),
        }
    }
}

pub fn run(command: &Command, args: &[String]) -> Result<Outcome> {
    match command {
        Command::Phi(a) => phi_cmd(a, args),
        Command::Zeros(a) => zeros_cmd(a, args),
        Command::BadRadii(a) => bad_radii_cmd(a, args),
        Command::Certify(a) => certify_cmd(a, args),
        Command::Abel(a) => abel_cmd(a, args),
        Command::Fourier(a) => fourier_cmd(a, args),
        Command::Convolve(a) => convolve_cmd(a, args),
        Command::Wave(a) => wave_cmd(a, args),
        Command::Kg(a) => kg_cmd(a, args),
        Command::Heat(a) => heat_cmd(a, args),
        Command::HeatCheck(a) => heat_check_cmd(a, args),
        Command::Cheeger(a) => cheeger_cmd(a, args),
        Command::GeoCheck(a) => geo_cmd(a, args),
        Command::Suite(a) => suite_cmd(a, args),
        Command::Replay(a) => replay_cmd(a, args),
    }
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("--{name} must be positive, got {x}")))
    }
}

fn phi_cmd(a: &PhiArgs, args: &[String]) -> Result<Outcome> {
    let model = a.model.build()?;
    positive("rmax", a.rmax)?;
    let lambda = Complex64::new(a.lambda[0], a.lambda[1]);
    let grid = RadialGrid::uniform(a.rmax, a.intervals)?;
    let f = match a.method.as_str() {
        "auto" => phi(&model, lambda, &grid)?,
        "series" => phi_series(&model, lambda, &grid, DEFAULT_SERIES_TOL)?,
        "ode" => phi_ode(&model, lambda, &grid)?,
        other => return Err(Error::InvalidParameter(format!("unknown method `{other}` (auto, series, ode)"))),
    };
    let rows: Vec<Vec<f64>> = f
        .r
        .iter()
        .zip(f.values.iter().zip(&f.derivative_values))
        .map(|(&r, (v, d))| vec![r, v.re, v.im, d.re, d.im])
        .collect();
    let run = Run {
        command: "phi",
        args,
        model: Some(&model),
        parameters: json!({"lambda": a.lambda, "rmax": a.rmax, "intervals": a.intervals, "method": f.method}),
        tolerances: json!({"series": DEFAULT_SERIES_TOL}),
        seed: None,
        outputs: vec![a.common.out.as_deref()],
    };
    let text = csv_text(&run.manifest(), &["r", "re_phi", "im_phi", "re_dphi", "im_dphi"], &rows);
    Ok(Outcome::one(a.common.out.clone(), text))
}

fn target(s: &str) -> Result<Target> {
    s.parse()
}

fn box_value(b: &LBox) -> Value {
    json!({"re_min": b.re_min, "re_max": b.re_max, "im_min": b.im_min, "im_max": b.im_max})
}

fn zeros_value(z: &ZeroSet) -> Value {
    Value::Array(
        z.zeros
            .iter()
            .map(|z| json!({"re": z.l.re, "im": z.l.im, "mult": z.multiplicity, "residual": z.residual}))
            .collect(),
    )
}

fn zeros_cmd(a: &ZerosArgs, args: &[String]) -> Result<Outcome> {
    let model = a.model.build()?;
    positive("r", a.r)?;
    let t = target(&a.target.target)?;
    let lbox = a.target.lbox();
    let z = find_l_zeros(&model, a.r, t, lbox, a.max_zeros)?;
    let complete = z.count() as i64 == z.winding_total;
    let run = Run {
        command: "zeros",
        args,
        model: Some(&model),
        parameters: json!({"r": a.r, "target": t, "box": box_value(&lbox), "max_zeros": a.max_zeros}),
        tolerances: json!({"zero": DEFAULT_ZERO_TOL}),
        seed: None,
        outputs: vec![a.common.out.as_deref()],
    };
    let report = json!({
        "target": t,
        "radius": a.r,
        "box": box_value(&lbox),
        "zeros": zeros_value(&z),
        "count": z.count(),
        "winding_total": z.winding_total,
        "verdict": if complete { "complete" } else { "incomplete" },
    });
    Ok(Outcome::one(a.common.out.clone(), json_text(&run.manifest(), report)).checked(complete))
}

fn bad_radii_cmd(a: &BadRadiiArgs, args: &[String]) -> Result<Outcome> {
    let model = a.model.build()?;
    positive("r1", a.r1)?;
    positive("rmax", a.rmax)?;
    let t = target(&a.target.target)?;
    let lbox = a.target.lbox();
    let z = find_l_zeros(&model, a.r1, t, lbox, 10_000)?;
    let radii = bad_radii(&model, a.r1, t, lbox, a.rmax)?;
    let run = Run {
        command: "bad-radii",
        args,
        model: Some(&model),
        parameters: json!({"r1": a.r1, "target": t, "box": box_value(&lbox), "rmax": a.rmax}),
        tolerances: json!({"zero": DEFAULT_ZERO_TOL}),
        seed: None,
        outputs: vec![a.common.out.as_deref()],
    };
    let report = json!({
        "target": t,
        "r1": a.r1,
        "rmax": a.rmax,
        "box": box_value(&lbox),
        "zeros": zeros_value(&z),
        "bad_radii": radii,
        "verdict": if radii.is_empty() { "none-in-box" } else { "found" },
    });
    Ok(Outcome::one(a.common.out.clone(), json_text(&run.manifest(), report)))
}

fn certify_cmd(a: &CertifyArgs, args: &[String]) -> Result<Outcome> {
    let model = a.model.build()?;
    let t = target(&a.target.target)?;
    let lbox = a.target.lbox();
    let cert = certify_pair(&model, a.r1, a.r2, t, lbox)?;
    let (verdict, witness) = match cert.verdict {
        Verdict::NoCommonZeroInBox => ("accepted", None),
        Verdict::CommonZeroFound { l } => ("rejected", Some(l)),
        Verdict::Inconclusive => ("inconclusive", None),
    };
    let run = Run {
        command: "certify",
        args,
        model: Some(&model),
        parameters: json!({"r1": a.r1, "r2": a.r2, "target": t, "box": box_value(&lbox)}),
        tolerances: json!({"zero": DEFAULT_ZERO_TOL}),
        seed: None,
        outputs: vec![a.common.out.as_deref()],
    };
    let zeros: Vec<Value> = witness
        .iter()
        .map(|l| json!({"re": l.re, "im": l.im, "mult": 1, "residual": cert.min_joint_residual}))
        .collect();
    let report = json!({
        "target": t,
        "r1": a.r1,
        "r2": a.r2,
        "box": box_value(&lbox),
        "zeros": zeros,
        "zeros_r1": cert.zeros_r1,
        "zeros_r2": cert.zeros_r2,
        "min_joint_residual": cert.min_joint_residual,
        "witness": witness.map(|l| json!({"re": l.re, "im": l.im})),
        "verdict": verdict,
        "scope": "the search covers the box only; nothing is claimed outside it",
    });
    Ok(Outcome::one(a.common.out.clone(), json_text(&run.manifest(), report)))
}

/// Support of sampled data: the first grid point after the last nonzero
/// value, or the end of the grid.
fn sampled_support(x: &[f64], v: &[f64]) -> f64 {
    match v.iter().rposition(|y| *y != 0.0) {
        Some(i) if i + 1 < x.len() => x[i + 1],
        _ => *x.last().unwrap_or(&0.0),
    }
}

fn columns(rows: Vec<Vec<f64>>) -> (Vec<f64>, Vec<f64>) {
    rows.into_iter().map(|r| (r[0], r[1])).unzip()
}

fn radial_input(path: Option<&Path>, width: f64) -> Result<RadialFunction> {
    match path {
        None => {
            positive("width", width)?;
            Ok(RadialFunction::from_bump(GaussianBump::centered(width)))
        }
        Some(p) => {
            let (r, v) = columns(read_csv(p, &["r", "value"]).map_err(Error::Config)?);
            let support = sampled_support(&r, &v);
            RadialFunction::from_samples(RadialGrid::from_points(r)?, v, support)
        }
    }
}

fn line_input(path: Option<&Path>, width: f64) -> Result<EvenLineFunction> {
    match path {
        None => {
            positive("width", width)?;
            Ok(EvenLineFunction::from_bump(GaussianBump::centered(width)))
        }
        Some(p) => {
            let (s, v) = columns(read_csv(p, &["s", "value"]).map_err(Error::Config)?);
            let support = sampled_support(&s, &v);
            EvenLineFunction::from_samples(s, v, support)
        }
    }
}

fn radial_rows(f: &RadialFunction) -> Vec<Vec<f64>> {
    f.grid().points().iter().zip(f.values()).map(|(&r, &v)| vec![r, v]).collect()
}

fn transform_run<'a>(command: &'static str, a: &'a TransformArgs, args: &'a [String], model: &'a DensityModel, extra: Value) -> Run<'a> {
    let mut parameters = to_value(a);
    if let (Value::Object(p), Value::Object(e)) = (&mut parameters, extra) {
        p.extend(e);
    }
    Run {
        command,
        args,
        model: Some(model),
        parameters,
        tolerances: json!({}),
        seed: None,
        outputs: vec![a.common.out.as_deref()],
    }
}

/// Spectral tail accepted for data read from CSV: cubic interpolation
/// between samples leaves a spectrum decaying only like `λ⁻⁴`.
const SAMPLED_TAIL_TOL: f64 = 1e-8;

fn abel_cmd(a: &TransformArgs, args: &[String]) -> Result<Outcome> {
    let model = a.model.build()?;
    let tail_tol = if a.input.is_some() { SAMPLED_TAIL_TOL } else { 1e-12 };
    let run = transform_run("abel", a, args, &model, json!({"tail_tol": tail_tol}));
    let text = if a.inverse {
        let g = line_input(a.input.as_deref(), a.width)?;
        let opts = InverseOptions {
            tail_tol,
            ..InverseOptions::default()
        };
        let (f, _) = abel_inverse_with(&model, &g, &opts)?;
        csv_text(&run.manifest(), &["r", "value"], &radial_rows(&f))
    } else {
        let f = radial_input(a.input.as_deref(), a.width)?;
        let opts = AbelOptions {
            tail_tol,
            ..AbelOptions::default()
        };
        let g = abel_with(&model, &f, &line_grid(f.support_radius(), 256), &opts)?.line;
        let rows: Vec<Vec<f64>> = g.s().iter().zip(g.values()).map(|(&s, &v)| vec![s, v]).collect();
        csv_text(&run.manifest(), &["s", "value"], &rows)
    };
    Ok(Outcome::one(a.common.out.clone(), text))
}

fn fourier_cmd(a: &FourierArgs, args: &[String]) -> Result<Outcome> {
    let t = &a.transform;
    let model = t.model.build()?;
    positive("lmax", a.lmax)?;
    if a.samples < 2 {
        return Err(Error::InvalidParameter("--samples must be at least 2".into()));
    }
    let f = radial_input(t.input.as_deref(), t.width)?;
    let lambdas: Vec<f64> = (0..a.samples).map(|j| a.lmax * j as f64 / (a.samples - 1) as f64).collect();
    let spec = spherical_fourier(&model, &f, &lambdas)?;
    let rows: Vec<Vec<f64>> = spec.lambdas.iter().zip(&spec.values).map(|(&l, &v)| vec![l, v]).collect();
    let run = transform_run("fourier", t, args, &model, json!({"lmax": a.lmax, "samples": a.samples}));
    Ok(Outcome::one(t.common.out.clone(), csv_text(&run.manifest(), &["lambda", "value"], &rows)))
}

fn convolve_cmd(a: &TransformArgs, args: &[String]) -> Result<Outcome> {
    let model = a.model.build()?;
    let f = radial_input(a.input.as_deref(), a.width)?;
    let g = match &a.input2 {
        Some(_) => radial_input(a.input2.as_deref(), a.width)?,
        None => f.clone(),
    };
    let h = radial_convolve(&model, &f, &g)?;
    let run = transform_run("convolve", a, args, &model, json!({}));
    Ok(Outcome::one(a.common.out.clone(), csv_text(&run.manifest(), &["r", "value"], &radial_rows(&h))))
}

fn wave_cmd(a: &WaveArgs, args: &[String]) -> Result<Outcome> {
    let model = a.model.build()?;
    positive("t", a.t)?;
    positive("width", a.width)?;
    let q0 = RadialFunction::from_bump(GaussianBump::centered(a.width));
    let opts = WaveOptions {
        dr: a.dr,
        save_every: usize::MAX,
        ..WaveOptions::default()
    };
    let traj = radial_wave_solve(&model, &q0, a.t, &opts)?;
    let last = traj.states.last().expect("trajectory keeps its last state");
    let rows: Vec<Vec<f64>> = last.grid.points().iter().zip(&last.u).map(|(&r, &v)| vec![r, v]).collect();
    let run = Run {
        command: "wave",
        args,
        model: Some(&model),
        parameters: json!({"t": a.t, "width": a.width, "dr": traj.dr, "dt": traj.dt}),
        tolerances: json!({}),
        seed: None,
        outputs: vec![a.common.out.as_deref()],
    };
    Ok(Outcome::one(a.common.out.clone(), csv_text(&run.manifest(), &["r", "value"], &rows)))
}

fn kg_cmd(a: &KgArgs, args: &[String]) -> Result<Outcome> {
    let model = a.model.build()?;
    positive("t", a.t)?;
    positive("width", a.width)?;
    let g = EvenLineFunction::from_bump(GaussianBump::centered(a.width));
    let sol = KgSolution::new(model.h(), &g, a.t)?;
    let line = sol.to_line(a.intervals.max(4));
    let rows: Vec<Vec<f64>> = line.s().iter().zip(line.values()).map(|(&s, &v)| vec![s, v]).collect();
    let run = Run {
        command: "kg",
        args,
        model: Some(&model),
        parameters: json!({"t": a.t, "width": a.width, "intervals": a.intervals, "h": model.h()}),
        tolerances: json!({}),
        seed: None,
        outputs: vec![a.common.out.as_deref()],
    };
    Ok(Outcome::one(a.common.out.clone(), csv_text(&run.manifest(), &["s", "value"], &rows)))
}

fn heat_options(a: &HeatArgs) -> HeatOptions {
    HeatOptions {
        dr: a.dr,
        dt: a.dt,
        ..HeatOptions::default()
    }
}

fn heat_cmd(a: &HeatArgs, args: &[String]) -> Result<Outcome> {
    let model = a.model.build()?;
    let traj = radial_heat_solve(&model, a.t, a.width, &heat_options(a))?;
    let last = traj.last();
    let rows: Vec<Vec<f64>> = last.grid.points().iter().zip(&last.k).map(|(&r, &v)| vec![r, v]).collect();
    let run = Run {
        command: "heat",
        args,
        model: Some(&model),
        parameters: json!({"t": a.t, "width": a.width, "dr": a.dr, "dt": a.dt}),
        tolerances: json!({}),
        seed: None,
        outputs: vec![a.common.out.as_deref()],
    };
    Ok(Outcome::one(a.common.out.clone(), csv_text(&run.manifest(), &["r", "value"], &rows)))
}

fn heat_check_cmd(a: &HeatCheckArgs, args: &[String]) -> Result<Outcome> {
    let h = &a.heat;
    let model = h.model.build()?;
    if a.samples < 2 || !(a.lmax >= 0.0) {
        return Err(Error::InvalidParameter("need --samples ≥ 2 and --lmax ≥ 0".into()));
    }
    let lambdas: Vec<f64> = (0..a.samples).map(|j| a.lmax * j as f64 / (a.samples - 1) as f64).collect();
    let check = heat_identity_check(&model, h.t, &lambdas, h.width, &heat_options(h))?;
    let passed = check.max_rel_err <= a.tol;
    let run = Run {
        command: "heat-check",
        args,
        model: Some(&model),
        parameters: json!({"t": h.t, "width": h.width, "dr": h.dr, "dt": h.dt, "lmax": a.lmax, "samples": a.samples}),
        tolerances: json!({"max_rel_err": a.tol}),
        seed: None,
        outputs: vec![h.common.out.as_deref()],
    };
    let mut report = to_value(&check);
    if let Value::Object(m) = &mut report {
        m.insert("tolerance".into(), json!(a.tol));
        m.insert("passed".into(), json!(passed));
    }
    Ok(Outcome::one(h.common.out.clone(), json_text(&run.manifest(), report)).checked(passed))
}

fn cheeger_cmd(a: &CheegerArgs, args: &[String]) -> Result<Outcome> {
    let model = a.model.build()?;
    let report = cheeger_chain_report(&model, a.rmax)?;
    let run = Run {
        command: "cheeger",
        args,
        model: Some(&model),
        parameters: json!({"rmax": a.rmax}),
        tolerances: json!({"mu": MU_TOLERANCE, "lambda0_relative": LAMBDA0_TOLERANCE}),
        seed: None,
        outputs: vec![a.common.out.as_deref(), a.csv.as_deref()],
    };
    let manifest = run.manifest();
    let passed = report.passed();
    let mut value = to_value(&report);
    if let Value::Object(m) = &mut value {
        m.insert("passed".into(), json!(passed));
    }
    let mut artifacts = vec![Artifact {
        path: a.common.out.clone(),
        text: json_text(&manifest, value),
    }];
    if let Some(p) = &a.csv {
        let rows: Vec<Vec<f64>> = report
            .growth
            .iter()
            .map(|g| vec![g.r, g.log_volume_rate, g.area_over_volume, g.theta_ratio])
            .collect();
        artifacts.push(Artifact {
            path: Some(p.clone()),
            text: csv_text(&manifest, &["r", "log_vol_over_r", "area_over_vol", "theta_ratio"], &rows),
        });
    }
    Ok(Outcome {
        artifacts,
        success: passed,
    })
}

fn geo_cmd(a: &GeoArgs, args: &[String]) -> Result<Outcome> {
    let space: ExplicitSpace = a.space.parse()?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.common.seed);
    let bump = |rng: &mut ChaCha8Rng| {
        let c = space.polar(rng.random_range(0.0..1.0), rng.random_range(0.0..2.0 * PI));
        let w: f64 = rng.random_range(0.3..0.6);
        move |p: &Point| (-(space.distance(&c, p) / w).powi(2)).exp()
    };
    let x = space.polar(rng.random_range(0.2..1.0), rng.random_range(0.0..2.0 * PI));
    let radii: Vec<f64> = (1..=20).map(|i| 0.1 * i as f64).collect();
    let (residual, detail, tol) = match a.test.as_str() {
        "displacement" => {
            let e = displacement_identity_check(space, a.lambda, &x, &radii, a.order)?;
            (e, format!("π((φ_λ)_x) - φ_λ(x) φ_λ with λ = {}", a.lambda), 1e-6)
        }
        "projector" => {
            let f = bump(&mut rng);
            let e = projector_convolution_check(space, 0.8, &f, &radii, a.order)?;
            (e, "π(T_r f) - T_r(π f) with r = 0.8".to_string(), 1e-6)
        }
        "selfadjoint" => {
            let f = bump(&mut rng);
            let g = bump(&mut rng);
            let e = projector_selfadjoint_check(space, &f, &g, &x, 6.0, a.order)?;
            (e, "⟨π_x f, g⟩ - ⟨f, π_x g⟩ over the disk of radius 6".to_string(), 1e-6)
        }
        "idempotence" => {
            let f = bump(&mut rng);
            let e = idempotence_check(space, &f, &x, &radii, a.order)?;
            (e, "π_x(π_x f) - π_x f".to_string(), 1e-10)
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown test `{other}` (displacement, projector, selfadjoint, idempotence)"
            )))
        }
    };
    let tol = a.tol.unwrap_or(tol);
    let passed = residual <= tol;
    let run = Run {
        command: "geo-check",
        args,
        model: None,
        parameters: json!({"space": space, "test": a.test, "lambda": a.lambda, "order": a.order, "x": x}),
        tolerances: json!({"residual": tol}),
        seed: Some(a.common.seed),
        outputs: vec![a.common.out.as_deref()],
    };
    let report = json!({
        "space": space,
        "test": a.test,
        "order": a.order,
        "residual": residual,
        "tolerance": tol,
        "passed": passed,
        "detail": detail,
    });
    Ok(Outcome::one(a.common.out.clone(), json_text(&run.manifest(), report)).checked(passed))
}

fn suite_cmd(a: &SuiteArgs, args: &[String]) -> Result<Outcome> {
    let report = run_suite(a.quick, a.common.seed);
    let passed = report.all_passed();
    let run = Run {
        command: "suite",
        args,
        model: None,
        parameters: json!({"quick": a.quick}),
        tolerances: json!({"per_check": "see each check"}),
        seed: Some(a.common.seed),
        outputs: vec![a.common.out.as_deref()],
    };
    for c in &report.checks {
        eprintln!("{} [{:>2}] {}", if c.passed { "PASS" } else { "FAIL" }, c.criterion, c.name);
    }
    Ok(Outcome::one(a.common.out.clone(), json_text(&run.manifest(), to_value(&report))).checked(passed))
}

#[derive(Serialize)]
struct Comparison {
    path: String,
    identical: bool,
}

fn replay_cmd(a: &ReplayArgs, args: &[String]) -> Result<Outcome> {
    let manifest = read_manifest(&a.file).map_err(Error::Config)?;
    let recorded: Vec<String> = manifest
        .get("args")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Config(format!("{} has no recorded arguments", a.file.display())))?
        .iter()
        .map(|v| v.as_str().unwrap_or_default().to_string())
        .collect();
    let cli = Cli::try_parse_from(std::iter::once("harmonic".to_string()).chain(recorded.iter().cloned()))
        .map_err(|e| Error::Config(format!("recorded arguments no longer parse: {e}")))?;
    if matches!(cli.command, Command::Replay(_)) {
        return Err(Error::Config("cannot replay a replay".into()));
    }
    let outcome = run(&cli.command, &recorded)?;
    let mut files = Vec::new();
    for art in &outcome.artifacts {
        let path = art.path.clone().unwrap_or_else(|| a.file.clone());
        let old = fs::read_to_string(&path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        files.push(Comparison {
            path: path.display().to_string(),
            identical: old == art.text,
        });
    }
    let identical = files.iter().all(|f| f.identical);
    let run = Run {
        command: "replay",
        args,
        model: None,
        parameters: json!({"file": a.file}),
        tolerances: json!({}),
        seed: None,
        outputs: vec![None],
    };
    let report = json!({"replayed": recorded, "files": to_value(&files), "identical": identical});
    Ok(Outcome::one(None, json_text(&run.manifest(), report)).checked(identical))
}
