//! Complex zeros of `L ↦ φ_L(r)`, `φ_L(r) - 1` and `Φ_L(r)`, bad radii and
//! certificates for radius pairs.
//!
//! Zeros are counted with the argument principle on rectangles in the
//! `L`-plane and isolated by recursive subdivision, then polished by Newton.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::density::DensityModel;
use crate::error::{Error, Result};
use crate::ode::OdeOptions;
use crate::spherical::{full_state_at, PointEvaluator, DEFAULT_ZERO_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    /// `φ_L(r) = 0`
    Sphere,
    /// `φ_L(r) = 1`, `L ≠ 0`
    Mvp,
    /// `Φ_L(r) = 0`
    Ball,
}

impl std::str::FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sphere" => Ok(Self::Sphere),
            "mvp" => Ok(Self::Mvp),
            "ball" => Ok(Self::Ball),
            _ => Err(Error::InvalidParameter(format!("unknown target `{s}`"))),
        }
    }
}

/// Closed rectangle `[re_min, re_max] × [im_min, im_max]` in the `L`-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LBox {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Default for LBox {
    fn default() -> Self {
        Self::new(-400.0, 400.0, -100.0, 100.0)
    }
}

impl LBox {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Self {
        Self {
            re_min,
            re_max,
            im_min,
            im_max,
        }
    }

    pub fn around(center: Complex64, half: f64) -> Self {
        Self::new(center.re - half, center.re + half, center.im - half, center.im + half)
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))
    }

    pub fn diameter(&self) -> f64 {
        (self.re_max - self.re_min).hypot(self.im_max - self.im_min)
    }

    pub fn contains(&self, l: Complex64) -> bool {
        l.re >= self.re_min && l.re <= self.re_max && l.im >= self.im_min && l.im <= self.im_max
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }

    fn split(&self, fx: f64, fy: f64) -> [LBox; 4] {
        let x = self.re_min + fx * (self.re_max - self.re_min);
        let y = self.im_min + fy * (self.im_max - self.im_min);
        [
            LBox::new(self.re_min, x, self.im_min, y),
            LBox::new(x, self.re_max, self.im_min, y),
            LBox::new(x, self.re_max, y, self.im_max),
            LBox::new(self.re_min, x, y, self.im_max),
        ]
    }

    fn grown(&self, by: f64) -> Self {
        Self::new(self.re_min - by, self.re_max + by, self.im_min - by, self.im_max + by)
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct LZero {
    pub l: Complex64,
    pub multiplicity: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ZeroSet {
    pub target: Target,
    pub radius: f64,
    #[serde(rename = "box")]
    pub lbox: LBox,
    pub zeros: Vec<LZero>,
    pub winding_total: i64,
}

impl ZeroSet {
    pub fn count(&self) -> usize {
        self.zeros.iter().map(|z| z.multiplicity).sum()
    }
}

/// The target as a holomorphic function of `L` at a fixed radius.
///
/// For `Mvp` this is `(φ_L(r) - 1)/L`, which has the zeros of `φ_L(r) - 1`
/// except the trivial one at `L = 0`.
#[derive(Debug, Clone)]
pub struct TargetFunction {
    eval: PointEvaluator,
    target: Target,
}

impl TargetFunction {
    pub fn new(model: &DensityModel, r: f64, target: Target) -> Result<Self> {
        Ok(Self {
            eval: PointEvaluator::new(model, r)?,
            target,
        })
    }

    /// `(f(L), f'(L))`
    pub fn eval(&self, l: Complex64) -> Result<(Complex64, Complex64)> {
        self.eval_with(l, &OdeOptions::default())
    }

    fn eval_with(&self, l: Complex64, opts: &OdeOptions) -> Result<(Complex64, Complex64)> {
        match self.target {
            Target::Sphere => self.eval.eval_with(l, opts).map(|v| (v.phi, v.dphi_dl)),
            Target::Ball => self.eval.eval_with(l, opts).map(|v| (v.ball, v.dball_dl)),
            Target::Mvp => self.eval.deflated_with(l, opts),
        }
    }

    /// The undeflated residual: `|φ|`, `|φ - 1|` or `|Φ|`.
    pub fn residual(&self, l: Complex64) -> Result<f64> {
        let v = self.eval.eval(l)?;
        Ok(match self.target {
            Target::Sphere => v.phi.norm(),
            Target::Mvp => (v.phi - 1.0).norm(),
            Target::Ball => v.ball.norm(),
        })
    }
}

const MAX_ARG_STEP: f64 = PI / 3.0;
const EDGE_START: usize = 8;
const MAX_EDGE_DEPTH: usize = 40;

struct Winding<'a> {
    f: &'a TargetFunction,
    max_step: f64,
    opts: OdeOptions,
}

impl Winding<'_> {
    fn at(&self, l: Complex64) -> Result<(Complex64, Complex64)> {
        self.f.eval_with(l, &self.opts)
    }

    fn edge(&self, a: Complex64, b: Complex64) -> Result<f64> {
        let pts: Vec<Complex64> = (0..=EDGE_START)
            .map(|i| a + (b - a) * (i as f64 / EDGE_START as f64))
            .collect();
        let vals = pts.iter().map(|&p| self.at(p)).collect::<Result<Vec<_>>>()?;
        let mut total = 0.0;
        for i in 0..EDGE_START {
            total += self.segment(pts[i], vals[i], pts[i + 1], vals[i + 1], 0)?;
        }
        Ok(total)
    }

    fn segment(
        &self,
        a: Complex64,
        fa: (Complex64, Complex64),
        b: Complex64,
        fb: (Complex64, Complex64),
        depth: usize,
    ) -> Result<f64> {
        if fa.0 == Complex64::new(0.0, 0.0) || fb.0 == Complex64::new(0.0, 0.0) {
            return Err(Error::UnstableWinding(format!("zero on the boundary near L = {a}")));
        }
        let d = (fb.0 / fa.0).arg();
        let len = (b - a).norm();
        let log_rate = (fa.1 / fa.0).norm().max((fb.1 / fb.0).norm()) * len;
        if d.abs() < self.max_step && log_rate < 1.0 {
            return Ok(d);
        }
        if depth >= MAX_EDGE_DEPTH {
            return Err(Error::UnstableWinding(format!(
                "argument not resolved near L = {a} (segment {len:e})"
            )));
        }
        let m = 0.5 * (a + b);
        let fm = self.at(m)?;
        Ok(self.segment(a, fa, m, fm, depth + 1)? + self.segment(m, fm, b, fb, depth + 1)?)
    }

    fn count(&self, b: &LBox) -> Result<i64> {
        let c = b.corners();
        let total: f64 = (0..4)
            .into_par_iter()
            .map(|i| self.edge(c[i], c[(i + 1) % 4]))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .sum();
        let n = total / TAU;
        let k = n.round();
        if (n - k).abs() > 0.1 || k < 0.0 {
            return Err(Error::UnstableWinding(format!("winding {n} is not a count")));
        }
        Ok(k as i64)
    }
}

/// Boxes smaller than this, relative to `1 + |center|`, are counted with
/// full ODE accuracy; larger ones only need the argument to a few digits.
const TIGHT_BOX: f64 = 1e-2;

/// Argument-principle count of zeros of the target inside `b`.
pub fn winding_count(f: &TargetFunction, b: &LBox, refined: bool) -> Result<i64> {
    let small = b.diameter() < TIGHT_BOX * (1.0 + b.center().norm());
    Winding {
        f,
        max_step: if refined { MAX_ARG_STEP / 2.0 } else { MAX_ARG_STEP },
        opts: if small { OdeOptions::default() } else { OdeOptions::loose() },
    }
    .count(b)
}

const SPLITS: [(f64, f64); 4] = [(0.5173, 0.4871), (0.4627, 0.5419), (0.5531, 0.4463), (0.4219, 0.5807)];
const MAX_DEPTH: usize = 60;

/// Newton (modified for multiplicity `mult`) from `start`, abandoned once it
/// leaves `fence`. Near a rounding-split multiple zero the iteration may
/// oscillate; the best iterate is then returned if it is a zero to tolerance.
fn newton(f: &TargetFunction, start: Complex64, mult: usize, fence: &LBox) -> Option<Complex64> {
    let mut l = start;
    let mut best = (f64::INFINITY, l);
    for _ in 0..60 {
        let (v, d) = f.eval(l).ok()?;
        if v.norm() < best.0 {
            best = (v.norm(), l);
        }
        if v == Complex64::new(0.0, 0.0) {
            return Some(l);
        }
        if d == Complex64::new(0.0, 0.0) || !d.is_finite() {
            break;
        }
        let step = v / d * mult as f64;
        l -= step;
        if !l.is_finite() || !fence.contains(l) {
            return None;
        }
        if step.norm() <= 4.0 * f64::EPSILON * (1.0 + l.norm()) {
            return Some(l);
        }
    }
    let l = best.1;
    match f.residual(l) {
        Ok(res) if res < DEFAULT_ZERO_TOL => Some(l),
        _ => None,
    }
}

fn cluster_radius(l: Complex64) -> f64 {
    1e-6 * (1.0 + l.norm())
}

/// Rounding splits a k-fold zero into k zeros about `ε^{1/k}` apart;
/// zeros closer than this are merged into one with summed multiplicity.
const MERGE_RADIUS: f64 = 1e-5;

fn merge_clusters(f: &TargetFunction, zeros: Vec<LZero>) -> Result<Vec<LZero>> {
    let mut groups: Vec<Vec<LZero>> = Vec::new();
    for z in zeros {
        let near = groups
            .iter()
            .position(|g| g.iter().any(|y| (y.l - z.l).norm() <= MERGE_RADIUS * (1.0 + z.l.norm())));
        match near {
            Some(i) => groups[i].push(z),
            None => groups.push(vec![z]),
        }
    }
    groups
        .into_iter()
        .map(|g| {
            if g.len() == 1 {
                return Ok(g[0]);
            }
            let mult: usize = g.iter().map(|z| z.multiplicity).sum();
            let l = g.iter().map(|z| z.l * z.multiplicity as f64).sum::<Complex64>() / mult as f64;
            Ok(LZero {
                l,
                multiplicity: mult,
                residual: f.residual(l)?,
            })
        })
        .collect()
}

/// A double zero is a simple zero of `f'`; Newton on `f'` with a centred
/// difference for `f''` recovers it to full precision.
fn polish_double(f: &TargetFunction, z: LZero) -> Result<LZero> {
    if z.multiplicity != 2 {
        return Ok(z);
    }
    let h = 1e-4 * (1.0 + z.l.norm());
    let mut l = z.l;
    for _ in 0..8 {
        let d1 = f.eval(l)?.1;
        let d2 = (f.eval(l + h)?.1 - f.eval(l - h)?.1) / (2.0 * h);
        if d2 == Complex64::new(0.0, 0.0) {
            break;
        }
        let step = d1 / d2;
        l -= step;
        if step.norm() <= 1e-15 * (1.0 + l.norm()) {
            break;
        }
    }
    let residual = f.residual(l)?;
    if (l - z.l).norm() <= MERGE_RADIUS * (1.0 + z.l.norm()) && residual <= z.residual.max(DEFAULT_ZERO_TOL) {
        Ok(LZero { l, residual, ..z })
    } else {
        Ok(z)
    }
}

fn isolate(f: &TargetFunction, b: LBox, n: i64, depth: usize) -> Result<Vec<LZero>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let mult = n as usize;
    if let Some(l) = newton(f, b.center(), mult, &b.grown(0.5 * b.diameter())) {
        if b.contains(l) {
            let ok = if mult == 1 {
                true
            } else {
                winding_count(f, &LBox::around(l, cluster_radius(l)), false)? == n
            };
            if ok {
                return Ok(vec![LZero {
                    l,
                    multiplicity: mult,
                    residual: f.residual(l)?,
                }]);
            }
        }
    }
    if b.diameter() < 1e-10 * (1.0 + b.center().norm()) {
        let l = b.center();
        let residual = f.residual(l)?;
        if residual < DEFAULT_ZERO_TOL {
            return Ok(vec![LZero {
                l,
                multiplicity: mult,
                residual,
            }]);
        }
    }
    if depth >= MAX_DEPTH {
        return Err(Error::NotConverged(format!("zero cluster in {b:?} not isolated")));
    }
    for &(fx, fy) in &SPLITS {
        let kids = b.split(fx, fy);
        let counts: Vec<Result<i64>> = kids.par_iter().map(|k| winding_count(f, k, false)).collect();
        if counts.iter().any(|c| c.is_err()) {
            continue;
        }
        let counts: Vec<i64> = counts.into_iter().map(|c| c.unwrap()).collect();
        if counts.iter().sum::<i64>() != n {
            continue;
        }
        let parts = kids
            .par_iter()
            .zip(counts)
            .map(|(k, c)| isolate(f, *k, c, depth + 1))
            .collect::<Result<Vec<_>>>()?;
        return Ok(parts.into_iter().flatten().collect());
    }
    Err(Error::UnstableWinding(format!("no stable subdivision of {b:?}")))
}

/// All zeros of the target at radius `r` inside `lbox`, with multiplicities.
pub fn find_l_zeros(
    model: &DensityModel,
    r: f64,
    target: Target,
    lbox: LBox,
    max_zeros: usize,
) -> Result<ZeroSet> {
    let f = TargetFunction::new(model, r, target)?;
    let mut b = lbox;
    let mut last_err = None;
    for attempt in 0..4 {
        match winding_count(&f, &b, false) {
            Ok(n) => {
                if n as usize > max_zeros {
                    return Err(Error::TooManyZeros {
                        found: n as usize,
                        max: max_zeros,
                    });
                }
                let mut zeros = merge_clusters(&f, isolate(&f, b, n, 0)?)?
                    .into_iter()
                    .map(|z| polish_double(&f, z))
                    .collect::<Result<Vec<_>>>()?;
                zeros.sort_by(|x, y| x.l.re.total_cmp(&y.l.re).then(x.l.im.total_cmp(&y.l.im)));
                return Ok(ZeroSet {
                    target,
                    radius: r,
                    lbox: b,
                    zeros,
                    winding_total: n,
                });
            }
            Err(e) => {
                last_err = Some(e);
                b = lbox.grown(1e-3 * lbox.diameter() * (attempt + 1) as f64 * 0.7371);
            }
        }
    }
    Err(last_err.unwrap())
}

/// Value, first and second `r`-derivative of the target along `r` at fixed `L`.
fn target_in_r(model: &DensityModel, l: Complex64, target: Target, radii: &[f64]) -> Result<Vec<[Complex64; 3]>> {
    let opts = OdeOptions::default();
    let states = full_state_at(model, l, radii, &opts)?;
    Ok(states
        .iter()
        .zip(radii)
        .map(|(s, &r)| {
            let phi_rr = l * s[0] - s[1] * model.mean_curvature(r);
            match target {
                Target::Sphere => [s[0], s[1], phi_rr],
                Target::Mvp => [s[0] - 1.0, s[1], phi_rr],
                Target::Ball => {
                    let t = model.theta(r);
                    [s[4], s[0] * t, s[0] * model.theta_prime(r) + s[1] * t]
                }
            }
        })
        .collect())
}

fn polish_r(model: &DensityModel, l: Complex64, target: Target, start: f64, r_max: f64) -> Result<Option<f64>> {
    let at = |r: f64| -> Result<[Complex64; 3]> { Ok(target_in_r(model, l, target, &[r])?[0]) };
    let mut r = start;
    for _ in 0..80 {
        let [f, fr, _] = at(r)?;
        let denom = fr.norm_sqr();
        if denom == 0.0 {
            break;
        }
        let step = (f.conj() * fr).re / denom;
        r = (r - step).clamp(1e-300, r_max * (1.0 + 1e-12));
        if step.abs() <= 1e-15 * (1.0 + r) {
            break;
        }
    }
    let [f, fr, frr] = at(r)?;
    if f.norm() >= DEFAULT_ZERO_TOL {
        return Ok(None);
    }
    // tangential zero: locate the critical point of the target instead
    if fr.norm() < 1e-4 {
        let mut rc = r;
        for _ in 0..20 {
            let [_, fr, frr] = at(rc)?;
            let denom = frr.norm_sqr();
            if denom == 0.0 {
                break;
            }
            let step = (fr.conj() * frr).re / denom;
            rc -= step;
            if step.abs() <= 1e-15 * (1.0 + rc) {
                break;
            }
        }
        if at(rc)?[0].norm() <= f.norm().max(DEFAULT_ZERO_TOL * 1e-3) {
            r = rc;
        }
    }
    let _ = frr;
    Ok(Some(r))
}

/// Zeros of `r ↦ φ_L(r)` in `(0, r_max]`, sorted.
pub fn find_r_zeros(model: &DensityModel, l: Complex64, r_max: f64) -> Result<Vec<f64>> {
    r_zeros(model, l, Target::Sphere, r_max)
}

/// Zeros in `r ∈ (0, r_max]` of `φ_L(r)`, `φ_L(r) - 1` or `Φ_L(r)`.
pub fn r_zeros(model: &DensityModel, l: Complex64, target: Target, r_max: f64) -> Result<Vec<f64>> {
    if !(r_max > 0.0 && r_max <= 50.0) {
        return Err(Error::InvalidParameter(format!("r_max = {r_max} must lie in (0, 50]")));
    }
    let freq = (l.norm() + 0.25 * model.h() * model.h()).sqrt();
    let h = (0.02f64).min(0.2 / freq.max(1e-3));
    let n = (r_max / h).ceil() as usize;
    let radii: Vec<f64> = (0..=n).map(|i| r_max * i as f64 / n as f64).collect();
    let vals = target_in_r(model, l, target, &radii)?;
    let abs: Vec<f64> = vals.iter().map(|v| v[0].norm()).collect();
    let candidates: Vec<usize> = (1..=n)
        .filter(|&i| {
            let left = abs[i - 1];
            let right = if i < n { abs[i + 1] } else { f64::INFINITY };
            abs[i] <= left && abs[i] <= right && abs[i] <= 2.0 * h * vals[i][1].norm().max(vals[i - 1][1].norm())
        })
        .collect();
    let found = candidates
        .par_iter()
        .map(|&i| polish_r(model, l, target, radii[i], r_max))
        .collect::<Result<Vec<_>>>()?;
    let mut out: Vec<f64> = found.into_iter().flatten().filter(|&r| r > 1e-6 && r <= r_max).collect();
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
    Ok(out)
}

/// Radii `r2 ≤ r_max` where the target has a common zero in `L` with the
/// target at `r1`, for `L` in the box.
pub fn bad_radii(model: &DensityModel, r1: f64, target: Target, lbox: LBox, r_max: f64) -> Result<Vec<f64>> {
    let zs = find_l_zeros(model, r1, target, lbox, 10_000)?;
    let per = zs
        .zeros
        .par_iter()
        .map(|z| r_zeros(model, z.l, target, r_max))
        .collect::<Result<Vec<_>>>()?;
    let mut all: Vec<f64> = per.into_iter().flatten().collect();
    all.sort_by(f64::total_cmp);
    all.dedup_by(|a, b| (*a - *b).abs() < 1e-8);
    Ok(all)
}

/// Smallest gap between consecutive radii, `∞` for fewer than two.
pub fn min_gap(radii: &[f64]) -> f64 {
    radii.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Verdict {
    /// The zero sets inside the box are disjoint. Nothing is claimed outside.
    NoCommonZeroInBox,
    CommonZeroFound { l: Complex64 },
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct RadiusCertificate {
    pub r1: f64,
    pub r2: f64,
    pub variant: Target,
    pub verdict: Verdict,
    #[serde(rename = "box")]
    pub lbox: LBox,
    pub min_joint_residual: f64,
    pub zeros_r1: usize,
    pub zeros_r2: usize,
}

const COMMON_SEPARATION: f64 = 1e-6;

pub fn certify_pair(model: &DensityModel, r1: f64, r2: f64, variant: Target, lbox: LBox) -> Result<RadiusCertificate> {
    if !(r1 > 0.0 && r2 > 0.0) {
        return Err(Error::InvalidParameter("radii must be positive".into()));
    }
    let f1 = TargetFunction::new(model, r1, variant)?;
    let f2 = TargetFunction::new(model, r2, variant)?;
    let (z1, z2) = rayon::join(
        || find_l_zeros(model, r1, variant, lbox, 10_000),
        || find_l_zeros(model, r2, variant, lbox, 10_000),
    );
    let mut cert = RadiusCertificate {
        r1,
        r2,
        variant,
        verdict: Verdict::Inconclusive,
        lbox,
        min_joint_residual: f64::INFINITY,
        zeros_r1: 0,
        zeros_r2: 0,
    };
    let (z1, z2) = match (z1, z2) {
        (Ok(a), Ok(b)) => (a, b),
        _ => return Ok(cert),
    };
    cert.zeros_r1 = z1.count();
    cert.zeros_r2 = z2.count();
    let mut first = z1.zeros.clone();
    first.sort_by(|x, y| x.l.norm().total_cmp(&y.l.norm()));
    for a in &first {
        for b in &z2.zeros {
            let joint = |l: Complex64| -> Result<f64> { Ok(f1.residual(l)?.max(f2.residual(l)?)) };
            let j = joint(a.l)?.min(joint(b.l)?);
            cert.min_joint_residual = cert.min_joint_residual.min(j);
            if (a.l - b.l).norm() <= COMMON_SEPARATION {
                let l = if joint(a.l)? <= joint(b.l)? { a.l } else { b.l };
                cert.verdict = if joint(l)? < DEFAULT_ZERO_TOL {
                    Verdict::CommonZeroFound { l }
                } else {
                    Verdict::Inconclusive
                };
                return Ok(cert);
            }
        }
    }
    cert.verdict = Verdict::NoCommonZeroInBox;
    Ok(cert)
}

#[derive(Debug, Clone, Serialize)]
pub struct MvpDemo {
    pub radius: f64,
    pub samples: usize,
    /// `max |(cos(x - r) + cos(x + r))/2 - cos x|` at `r = 2π`.
    pub max_residual: f64,
    /// `max |cos''(x)|`, nonzero: `cos` is not harmonic.
    pub max_laplacian: f64,
    /// Same residual at `r = π`, where the mean value property fails.
    pub residual_at_pi: f64,
    /// Residual for the harmonic `f(x) = a x + b` at a few radii.
    pub linear_residual: f64,
}

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

/// `cos` on ℝ has the sphere mean value property at radius `2π` at every
/// point without being harmonic.
pub fn mvp_counterexample_demo(seed: u64) -> MvpDemo {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<f64> = (0..100).map(|_| rng.random_range(-10.0..10.0)).collect();
    let mean = |f: &dyn Fn(f64) -> f64, x: f64, r: f64| 0.5 * (f(x - r) + f(x + r));
    let cos = |x: f64| x.cos();
    let res = |r: f64| xs.iter().map(|&x| (mean(&cos, x, r) - x.cos()).abs()).fold(0.0, f64::max);
    let (a, b) = (1.7, -0.3);
    let lin = |x: f64| a * x + b;
    let linear_residual = [0.5, 1.0, PI, 2.0 * PI, 7.3]
        .iter()
        .flat_map(|&r| xs.iter().map(move |&x| (r, x)))
        .map(|(r, x)| (mean(&lin, x, r) - lin(x)).abs() / (1.0 + lin(x).abs()))
        .fold(0.0, f64::max);
    MvpDemo {
        radius: TAU,
        samples: xs.len(),
        max_residual: res(TAU),
        max_laplacian: xs.iter().map(|x| x.cos().abs()).fold(0.0, f64::max),
        residual_at_pi: res(PI),
        linear_residual,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::make_euclidean;

    #[test]
    fn cosine_zeros_on_the_line() {
        let m = make_euclidean(0);
        let zs = find_l_zeros(&m, 1.0, Target::Sphere, LBox::new(-70.0, 60.0, -30.0, 30.0), 50).unwrap();
        assert_eq!(zs.winding_total, 3);
        for (j, z) in zs.zeros.iter().rev().enumerate() {
            let exact = -((2 * j + 1) as f64 * PI / 2.0).powi(2);
            assert!((z.l.re - exact).abs() < 1e-10 && z.l.im.abs() < 1e-10, "{z:?}");
            assert_eq!(z.multiplicity, 1);
        }
    }

    #[test]
    fn mvp_zeros_are_double() {
        let m = make_euclidean(0);
        let zs = find_l_zeros(&m, TAU, Target::Mvp, LBox::new(-5.0, 1.0, -2.0, 2.0), 50).unwrap();
        let near_one: Vec<_> = zs.zeros.iter().filter(|z| (z.l + 1.0).norm() < 1e-6).collect();
        assert_eq!(near_one.len(), 1);
        assert_eq!(near_one[0].multiplicity, 2);
    }

    #[test]
    fn demo_residuals() {
        let d = mvp_counterexample_demo(DEFAULT_SEED);
        assert!(d.max_residual < 1e-14);
        assert!(d.residual_at_pi > 0.1);
        assert!(d.linear_residual < 1e-14);
        assert!(d.max_laplacian > 0.5);
    }
}
