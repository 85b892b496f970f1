//! The ten constrained engineering design problems.
//!
//! Every constraint is written as `g(x) <= 0`. Equalities become
//! `|h(x)| - EQUALITY_EPS <= 0`. Integer-valued variables (gear teeth, ball
//! count, disk count) are rounded inside the objective and constraints while
//! the search itself stays continuous.
//!
//! Reference points were polished with an independent SLSQP implementation
//! (see `tests/oracles/`) and satisfy every constraint to the default
//! violation tolerance.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use mco_core::Bounds;

use crate::constraint::EQUALITY_EPS;
use crate::error::{Error, Result};
use crate::spec::{Category, ProblemSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EngineeringId {
    Rw01,
    Rw02,
    Rw03,
    Rw04,
    Rw05,
    Rw06,
    Rw07,
    Rw08,
    Rw09,
    Rw10,
}

impl EngineeringId {
    pub const ALL: [EngineeringId; 10] = [
        EngineeringId::Rw01,
        EngineeringId::Rw02,
        EngineeringId::Rw03,
        EngineeringId::Rw04,
        EngineeringId::Rw05,
        EngineeringId::Rw06,
        EngineeringId::Rw07,
        EngineeringId::Rw08,
        EngineeringId::Rw09,
        EngineeringId::Rw10,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EngineeringId::Rw01 => "rw01",
            EngineeringId::Rw02 => "rw02",
            EngineeringId::Rw03 => "rw03",
            EngineeringId::Rw04 => "rw04",
            EngineeringId::Rw05 => "rw05",
            EngineeringId::Rw06 => "rw06",
            EngineeringId::Rw07 => "rw07",
            EngineeringId::Rw08 => "rw08",
            EngineeringId::Rw09 => "rw09",
            EngineeringId::Rw10 => "rw10",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            EngineeringId::Rw01 => "tension/compression spring",
            EngineeringId::Rw02 => "pressure vessel",
            EngineeringId::Rw03 => "three-bar truss",
            EngineeringId::Rw04 => "welded beam",
            EngineeringId::Rw05 => "speed reducer",
            EngineeringId::Rw06 => "gear train",
            EngineeringId::Rw07 => "rolling element bearing",
            EngineeringId::Rw08 => "cantilever beam",
            EngineeringId::Rw09 => "multiple disk clutch brake",
            EngineeringId::Rw10 => "step-cone pulley",
        }
    }

    pub fn dim(self) -> usize {
        match self {
            EngineeringId::Rw01 => 3,
            EngineeringId::Rw02 | EngineeringId::Rw04 | EngineeringId::Rw06 => 4,
            EngineeringId::Rw03 => 2,
            EngineeringId::Rw05 => 7,
            EngineeringId::Rw07 => 10,
            EngineeringId::Rw08 | EngineeringId::Rw09 | EngineeringId::Rw10 => 5,
        }
    }

    /// Best value reported for the reference algorithm in the published results table.
    pub fn published_best(self) -> f64 {
        match self {
            EngineeringId::Rw01 => 1.2667e-2,
            EngineeringId::Rw02 => 5.8701e3,
            EngineeringId::Rw03 => 2.6389e2,
            EngineeringId::Rw04 => 1.6928,
            EngineeringId::Rw05 => 2.9936e3,
            EngineeringId::Rw06 => 2.7009e-12,
            EngineeringId::Rw07 => -2.4358e5,
            EngineeringId::Rw08 => 1.34,
            EngineeringId::Rw09 => 3.9247e12,
            EngineeringId::Rw10 => 1.6086e1,
        }
    }
}

impl fmt::Display for EngineeringId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EngineeringId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        let key = match key.strip_prefix("rw") {
            Some(n) if n.len() == 1 => format!("rw0{n}"),
            _ => key,
        };
        EngineeringId::ALL
            .into_iter()
            .find(|id| id.name() == key)
            .ok_or_else(|| Error::UnknownProblem(s.to_string()))
    }
}

/// Divisor that stays positive so constraints remain finite on box edges.
fn guard(v: f64) -> f64 {
    if v.abs() < 1e-300 {
        1e-300
    } else {
        v
    }
}

// Spring: wire diameter d, coil diameter D, active coils N.
fn spring_f(x: &[f64]) -> f64 {
    let (d, dd, n) = (x[0], x[1], x[2]);
    (n + 2.0) * dd * d * d
}

fn spring_g(x: &[f64]) -> Vec<f64> {
    let (d, dd, n) = (x[0], x[1], x[2]);
    vec![
        1.0 - dd.powi(3) * n / (71785.0 * d.powi(4)),
        (4.0 * dd * dd - d * dd) / (12566.0 * guard(dd * d.powi(3) - d.powi(4))) + 1.0 / (5108.0 * d * d) - 1.0,
        1.0 - 140.45 * d / (dd * dd * n),
        (dd + d) / 1.5 - 1.0,
    ]
}

// Pressure vessel: shell thickness, head thickness, radius, length.
fn vessel_f(x: &[f64]) -> f64 {
    let (ts, th, r, l) = (x[0], x[1], x[2], x[3]);
    0.6224 * ts * r * l + 1.7781 * th * r * r + 3.1661 * ts * ts * l + 19.84 * ts * ts * r
}

fn vessel_g(x: &[f64]) -> Vec<f64> {
    let (ts, th, r, l) = (x[0], x[1], x[2], x[3]);
    vec![
        -ts + 0.0193 * r,
        -th + 0.00954 * r,
        -PI * r * r * l - 4.0 / 3.0 * PI * r.powi(3) + 1_296_000.0,
        l - 240.0,
    ]
}

// Three-bar truss: cross sections A1 = A3 and A2, bar length 100 cm, P = sigma = 2.
fn truss_f(x: &[f64]) -> f64 {
    (2.0 * 2f64.sqrt() * x[0] + x[1]) * 100.0
}

fn truss_g(x: &[f64]) -> Vec<f64> {
    let (a1, a2) = (x[0], x[1]);
    let s2 = 2f64.sqrt();
    let den = guard(s2 * a1 * a1 + 2.0 * a1 * a2);
    let (p, sigma) = (2.0, 2.0);
    vec![
        (s2 * a1 + a2) / den * p - sigma,
        a2 / den * p - sigma,
        1.0 / guard(a1 + s2 * a2) * p - sigma,
    ]
}

// Welded beam: weld thickness h, weld length l, bar height t, bar thickness b.
fn welded_f(x: &[f64]) -> f64 {
    let (h, l, t, b) = (x[0], x[1], x[2], x[3]);
    1.10471 * h * h * l + 0.04811 * t * b * (14.0 + l)
}

fn welded_g(x: &[f64]) -> Vec<f64> {
    let (h, l, t, b) = (x[0], x[1], x[2], x[3]);
    let (p, len, e, g) = (6000.0, 14.0, 30e6, 12e6);
    let tau1 = p / (2f64.sqrt() * h * l);
    let m = p * (len + l / 2.0);
    let r = (l * l / 4.0 + ((h + t) / 2.0).powi(2)).sqrt();
    let j = 2.0 * (2f64.sqrt() * h * l * (l * l / 12.0 + ((h + t) / 2.0).powi(2)));
    let tau2 = m * r / j;
    let tau = (tau1 * tau1 + 2.0 * tau1 * tau2 * l / (2.0 * r) + tau2 * tau2).sqrt();
    let sigma = 6.0 * p * len / (b * t * t);
    let delta = 4.0 * p * len.powi(3) / (e * t.powi(3) * b);
    let pc = 4.013 * e * (t * t * b.powi(6) / 36.0).sqrt() / (len * len)
        * (1.0 - t / (2.0 * len) * (e / (4.0 * g)).sqrt());
    vec![
        tau - 13_600.0,
        sigma - 30_000.0,
        h - b,
        0.10471 * h * h + 0.04811 * t * b * (14.0 + l) - 5.0,
        0.125 - h,
        delta - 0.25,
        p - pc,
    ]
}

// Speed reducer (Golinski): face width, module, pinion teeth, shaft lengths, shaft diameters.
// 0.7854 is the published coefficient, kept as written rather than pi/4.
#[allow(clippy::approx_constant)]
fn reducer_f(x: &[f64]) -> f64 {
    let (x1, x2, x3, x4, x5, x6, x7) = (x[0], x[1], x[2], x[3], x[4], x[5], x[6]);
    0.7854 * x1 * x2 * x2 * (3.3333 * x3 * x3 + 14.9334 * x3 - 43.0934) - 1.508 * x1 * (x6 * x6 + x7 * x7)
        + 7.4777 * (x6.powi(3) + x7.powi(3))
        + 0.7854 * (x4 * x6 * x6 + x5 * x7 * x7)
}

fn reducer_g(x: &[f64]) -> Vec<f64> {
    let (x1, x2, x3, x4, x5, x6, x7) = (x[0], x[1], x[2], x[3], x[4], x[5], x[6]);
    vec![
        27.0 / (x1 * x2 * x2 * x3) - 1.0,
        397.5 / (x1 * x2 * x2 * x3 * x3) - 1.0,
        1.93 * x4.powi(3) / (x2 * x3 * x6.powi(4)) - 1.0,
        1.93 * x5.powi(3) / (x2 * x3 * x7.powi(4)) - 1.0,
        ((745.0 * x4 / (x2 * x3)).powi(2) + 16.9e6).sqrt() / (110.0 * x6.powi(3)) - 1.0,
        ((745.0 * x5 / (x2 * x3)).powi(2) + 157.5e6).sqrt() / (85.0 * x7.powi(3)) - 1.0,
        x2 * x3 / 40.0 - 1.0,
        5.0 * x2 / x1 - 1.0,
        x1 / (12.0 * x2) - 1.0,
        (1.5 * x6 + 1.9) / x4 - 1.0,
        (1.1 * x7 + 1.9) / x5 - 1.0,
    ]
}

// Gear train: teeth counts rounded to integers, target ratio 1/6.931.
fn gear_f(x: &[f64]) -> f64 {
    let t: Vec<f64> = x.iter().map(|v| v.round()).collect();
    (1.0 / 6.931 - t[1] * t[2] / (t[0] * t[3])).powi(2)
}

const BEARING_D: f64 = 160.0;
const BEARING_BORE: f64 = 90.0;
const BEARING_BW: f64 = 30.0;

// Rolling element bearing: Dm, Db, Z (rounded), fi, fo, KDmin, KDmax, eps, e, zeta.
fn bearing_capacity(x: &[f64]) -> f64 {
    let (dm, db, z, fi, fo) = (x[0], x[1], x[2].round(), x[3], x[4]);
    let gamma = db / dm;
    let ratio = fi * (2.0 * fo - 1.0) / (fo * (2.0 * fi - 1.0));
    let fc = 37.91
        * (1.0 + (1.04 * ((1.0 - gamma) / (1.0 + gamma)).powf(1.72) * ratio.powf(0.41)).powf(10.0 / 3.0)).powf(-0.3)
        * (gamma.powf(0.3) * (1.0 - gamma).powf(1.39) / (1.0 + gamma).powf(1.0 / 3.0))
        * (2.0 * fi / (2.0 * fi - 1.0)).powf(0.41);
    if db <= 25.4 {
        fc * z.powf(2.0 / 3.0) * db.powf(1.8)
    } else {
        3.647 * fc * z.powf(2.0 / 3.0) * db.powf(1.4)
    }
}

fn bearing_f(x: &[f64]) -> f64 {
    -bearing_capacity(x)
}

fn bearing_g(x: &[f64]) -> Vec<f64> {
    let (dm, db, z, fi, fo) = (x[0], x[1], x[2].round(), x[3], x[4]);
    let (kdmin, kdmax, eps, e, zeta) = (x[5], x[6], x[7], x[8], x[9]);
    let (d_out, d_in) = (BEARING_D, BEARING_BORE);
    let t = d_out - d_in - 2.0 * db;
    let a = (d_out - d_in) / 2.0 - 3.0 * t / 4.0;
    let b = d_out / 2.0 - t / 4.0 - db;
    let c = (a * a + b * b - (d_in / 2.0 + t / 4.0).powi(2)) / guard(2.0 * a * b);
    let c = if c.is_nan() { 1.0 } else { c.clamp(-1.0, 1.0) };
    let phi0 = 2.0 * PI - 2.0 * c.acos();
    vec![
        z - 1.0 - phi0 / (2.0 * (db / dm).asin()),
        kdmin * (d_out - d_in) - 2.0 * db,
        2.0 * db - kdmax * (d_out - d_in),
        zeta * BEARING_BW - db,
        0.5 * (d_out + d_in) - dm,
        dm - (0.5 + e) * (d_out + d_in),
        eps * db - 0.5 * (d_out - dm - db),
        0.515 - fi,
        0.515 - fo,
    ]
}

// Cantilever beam: five hollow square section heights.
fn cantilever_f(x: &[f64]) -> f64 {
    0.0624 * x.iter().sum::<f64>()
}

fn cantilever_g(x: &[f64]) -> Vec<f64> {
    let c = [61.0, 37.0, 19.0, 7.0, 1.0];
    vec![c.iter().zip(x).map(|(c, v)| c / v.powi(3)).sum::<f64>() - 1.0]
}

// Multiple disk clutch brake: inner/outer radius (mm), disk thickness (mm),
// actuating force (N), friction surfaces (rounded). Mh in N*m, Vsr in m/s.
const CLUTCH_RHO: f64 = 0.0000078;

fn clutch_f(x: &[f64]) -> f64 {
    let (ri, ro, t, z) = (x[0], x[1], x[2], x[4].round());
    PI * (ro * ro - ri * ri) * t * (z + 1.0) * CLUTCH_RHO
}

fn clutch_g(x: &[f64]) -> Vec<f64> {
    let (ri, ro, t, force, z) = (x[0], x[1], x[2], x[3], x[4].round());
    let (mu, s, ms, mf, n, pmax, iz) = (0.5, 1.5, 40.0, 3.0, 250.0, 1.0, 55.0);
    let (dr, tmax, vsr_max, delta, lmax) = (20.0, 15.0, 10.0, 0.5, 30.0);
    let sq = guard(ro * ro - ri * ri);
    let cube = ro.powi(3) - ri.powi(3);
    let mh = 2.0 / 3.0 * mu * force * z * cube / sq / 1000.0;
    let prz = force / (PI * sq);
    let vsr = 2.0 * PI * n * cube / (90.0 * sq) / 1000.0;
    let stop = iz * PI * n / (30.0 * (mh + mf));
    vec![
        dr + ri - ro,
        (z + 1.0) * (t + delta) - lmax,
        prz - pmax,
        prz * vsr - pmax * vsr_max,
        vsr - vsr_max,
        stop - tmax,
        s * ms - mh,
        -stop,
    ]
}

// Step-cone pulley: four step diameters and belt width in mm, converted to m.
const PULLEY_SPEEDS: [f64; 4] = [750.0, 450.0, 250.0, 150.0];
const PULLEY_INPUT: f64 = 350.0;
const PULLEY_CENTER: f64 = 3.0;
const PULLEY_MU: f64 = 0.35;

fn pulley_f(x: &[f64]) -> f64 {
    let w = x[4] * 1e-3;
    let sum: f64 = x[..4]
        .iter()
        .zip(PULLEY_SPEEDS)
        .map(|(d, ni)| (d * 1e-3).powi(2) * (1.0 + (ni / PULLEY_INPUT).powi(2)))
        .sum();
    7200.0 * w * PI / 4.0 * sum
}

fn pulley_g(x: &[f64]) -> Vec<f64> {
    let w = x[4] * 1e-3;
    let (s, t) = (1.75e6, 8e-3);
    let mut belt = [0.0; 4];
    let mut ratio = [0.0; 4];
    let mut power = [0.0; 4];
    for i in 0..4 {
        let d = x[i] * 1e-3;
        let r = PULLEY_SPEEDS[i] / PULLEY_INPUT;
        belt[i] = PI * d / 2.0 * (1.0 + r) + (r - 1.0).powi(2) * d * d / (4.0 * PULLEY_CENTER) + 2.0 * PULLEY_CENTER;
        let wrap = PI - 2.0 * ((r - 1.0) * d / (2.0 * PULLEY_CENTER)).asin();
        ratio[i] = (PULLEY_MU * wrap).exp();
        power[i] = s * t * w * (1.0 - (-PULLEY_MU * wrap).exp()) * PI * d * PULLEY_SPEEDS[i] / 60.0;
    }
    let mut g: Vec<f64> = ratio.iter().map(|r| 2.0 - r).collect();
    g.extend(power.iter().map(|p| 0.75 * 745.6998 - p));
    g.extend((1..4).map(|i| (belt[0] - belt[i]).abs() - EQUALITY_EPS));
    g
}

fn box_of(lower: &[f64], upper: &[f64]) -> Bounds {
    Bounds::new(lower.to_vec(), upper.to_vec()).expect("engineering bounds are static and valid")
}

type G = fn(&[f64]) -> Vec<f64>;

fn build(id: EngineeringId, bounds: Bounds, f: fn(&[f64]) -> f64, g: Option<(G, usize)>, reference: &[f64], note: &str) -> ProblemSpec {
    let spec = match g {
        Some((g, n)) => ProblemSpec::constrained(id.name(), bounds, Arc::new(f), Arc::new(g), n),
        None => ProblemSpec::unconstrained(id.name(), Category::Engineering, bounds, Arc::new(f)),
    };
    spec.with_target(id.published_best(), format!("published best; {note}"))
        .with_reference_point(reference.to_vec())
}

/// Returns the formulation of one engineering problem.
pub fn make_engineering(id: EngineeringId) -> ProblemSpec {
    match id {
        EngineeringId::Rw01 => build(
            id,
            box_of(&[0.05, 0.25, 2.0], &[2.0, 1.3, 15.0]),
            spring_f,
            Some((spring_g, 4)),
            &[0.051689059263605557, 0.3567176960371466, 11.288968317041247],
            "reference point f=0.0126652328",
        ),
        EngineeringId::Rw02 => build(
            id,
            box_of(&[0.0, 0.0, 10.0, 10.0], &[99.0, 99.0, 200.0, 200.0]),
            vessel_f,
            Some((vessel_g, 4)),
            &[0.7781686413759612, 0.3846491626283249, 40.31961872413904, 200.0],
            "continuous thicknesses; reference point f=5885.3328",
        ),
        EngineeringId::Rw03 => build(
            id,
            box_of(&[0.0, 0.0], &[1.0, 1.0]),
            truss_f,
            Some((truss_g, 3)),
            &[0.7886751329894748, 0.40824829401810525],
            "reference point f=263.8958433",
        ),
        EngineeringId::Rw04 => build(
            id,
            box_of(&[0.1, 0.1, 0.1, 0.1], &[2.0, 10.0, 10.0, 2.0]),
            welded_f,
            Some((welded_g, 7)),
            &[0.20572963978607384, 3.470488665627966, 9.036623910357868, 0.20572963978606693],
            "seven-constraint formulation; reference point f=1.7248523",
        ),
        EngineeringId::Rw05 => build(
            id,
            box_of(&[2.6, 0.7, 17.0, 7.3, 7.3, 2.9, 5.0], &[3.6, 0.8, 28.0, 8.3, 8.3, 3.9, 5.5]),
            reducer_f,
            Some((reducer_g, 11)),
            &[3.5, 0.7, 17.0, 7.3, 7.715319911484832, 3.3502146660997973, 5.286654464985509],
            "x5 in [7.3, 8.3]; reference point f=2994.4710662",
        ),
        EngineeringId::Rw06 => build(
            id,
            box_of(&[12.0; 4], &[60.0; 4]),
            gear_f,
            None,
            &[43.0, 16.0, 19.0, 49.0],
            "teeth rounded at evaluation; reference point f=2.7008571e-12",
        ),
        EngineeringId::Rw07 => build(
            id,
            box_of(
                &[125.0, 10.5, 4.0, 0.515, 0.515, 0.4, 0.6, 0.3, 0.02, 0.6],
                &[150.0, 31.5, 50.0, 0.6, 0.6, 0.5, 0.7, 0.4, 0.1, 0.85],
            ),
            bearing_f,
            Some((bearing_g, 9)),
            &[
                125.71905561386845,
                21.425590241338416,
                11.0,
                0.515,
                0.515,
                0.48454561251606804,
                0.6265492630331512,
                0.300000000000001,
                0.02894858771209801,
                0.616772766996675,
            ],
            "minimizes -Cd, ball count rounded; reference point f=-81859.7416",
        ),
        EngineeringId::Rw08 => build(
            id,
            box_of(&[0.01; 5], &[100.0; 5]),
            cantilever_f,
            Some((cantilever_g, 1)),
            &[6.016015877241359, 5.309173876539796, 4.494329564993366, 3.5014749721274767, 2.152665334083069],
            "reference point f=1.3399564",
        ),
        EngineeringId::Rw09 => build(
            id,
            box_of(&[60.0, 90.0, 1.0, 600.0, 2.0], &[80.0, 110.0, 3.0, 1000.0, 9.0]),
            clutch_f,
            Some((clutch_g, 8)),
            &[70.0, 90.0, 1.0, 810.0, 3.0],
            "mass minimization, surfaces rounded; reference point f=0.3136566",
        ),
        EngineeringId::Rw10 => build(
            id,
            box_of(&[0.0; 5], &[60.0, 60.0, 90.0, 90.0, 90.0]),
            pulley_f,
            Some((pulley_g, 11)),
            &[38.4139618167151, 52.85863776744263, 70.47269571105412, 84.49571606859894, 89.9999999999999],
            "equalities relaxed to 1e-4; reference point f=16.0902735",
        ),
    }
}

/// Objective value of each reference point, computed by the independent oracle.
pub fn reference_value(id: EngineeringId) -> f64 {
    match id {
        EngineeringId::Rw01 => 0.012665232788072328,
        EngineeringId::Rw02 => 5885.3327736305,
        EngineeringId::Rw03 => 263.8958432778345,
        EngineeringId::Rw04 => 1.7248523085972964,
        EngineeringId::Rw05 => 2994.471066151177,
        EngineeringId::Rw06 => 2.7008571488865134e-12,
        EngineeringId::Rw07 => -81859.74160104289,
        EngineeringId::Rw08 => 1.3399563605990679,
        EngineeringId::Rw09 => 0.31365661053440497,
        EngineeringId::Rw10 => 16.0902734933368,
    }
}
