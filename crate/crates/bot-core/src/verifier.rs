//! Certified non-optimality of coupled degree-4 branchings.
//!
//! A coupled 4-branching between one source and three sinks (masses
//! `m1 + m2 + m3 = 1`) cannot be globally optimal wherever one of the
//! angular-defect expressions `gamma`, `gamma1`, `gamma2` is positive.
//! Outside the analytically settled cases (`alpha <= 0.5`,
//! `m1 >= 1/4`, `m3 >= 1/2`) positivity of `gamma2` is certified
//! numerically: the remaining `(alpha, m1, m2)` region is covered by
//! cuboids, each cuboid gets a rigorous lower bound for `gamma2` from
//! endpoint monotonicity, and cuboids whose bound does not clear the
//! threshold are split octree-style until all leaves are certified.

use rayon::iter::{IntoParallelIterator, ParallelIterator};
use serde::{Deserialize, Serialize};

use crate::angles::{f_angle, h_angle};
use crate::error::BotError;

/// Conservative widening applied to every arccos argument before
/// bounding, absorbing evaluation rounding.
const ARG_PAD: f64 = 1e-12;

/// Initial tiling of the bounding box, per axis.
const INITIAL_TILES_PER_AXIS: usize = 8;

fn check_masses(names: &str, masses: &[f64]) -> Result<(), BotError> {
    for &m in masses {
        if !(m > 0.0) {
            return Err(BotError::DomainError(format!(
                "{names}: masses must be positive"
            )));
        }
    }
    if masses.iter().sum::<f64>() >= 1.0 {
        return Err(BotError::DomainError(format!(
            "{names}: masses must leave room inside the simplex"
        )));
    }
    Ok(())
}

/// Sum of the V-branching angle defects around a coupled 4-branching:
/// `h(m1/(m1+m2)) - f(m1) + h(m3/(m3+m2)) - f(m3)` at the given alpha,
/// with `m3 = 1 - m1 - m2`.
pub fn gamma(alpha: f64, m1: f64, m2: f64) -> Result<f64, BotError> {
    check_masses("gamma", &[m1, m2])?;
    let m3 = 1.0 - m1 - m2;
    Ok(h_angle(alpha, m1 / (m1 + m2))? - f_angle(alpha, m1)?
        + h_angle(alpha, m3 / (m3 + m2))?
        - f_angle(alpha, m3)?)
}

/// First transient-branching defect:
/// `f(1-m*) + f(1 - m2/(1-m*)) - f(1-m*-m2)`.
pub fn gamma1(alpha: f64, m_star: f64, m2: f64) -> Result<f64, BotError> {
    check_masses("gamma1", &[m_star, m2])?;
    let rest = 1.0 - m_star;
    Ok(f_angle(alpha, rest)? + f_angle(alpha, 1.0 - m2 / rest)?
        - f_angle(alpha, rest - m2)?)
}

/// Second transient-branching defect:
/// `h(m*/(m*+m2)) + f(m2/(1-m*)) - h(m*)`. This is the expression the
/// cuboid scheme certifies.
pub fn gamma2(alpha: f64, m_star: f64, m2: f64) -> Result<f64, BotError> {
    check_masses("gamma2", &[m_star, m2])?;
    Ok(h_angle(alpha, m_star / (m_star + m2))? + f_angle(alpha, m2 / (1.0 - m_star))?
        - h_angle(alpha, m_star)?)
}

/// Raw arccos argument of `f` (also defined slightly outside `k < 1`,
/// where clamping maps it to the limit `f = 0`).
fn f_arg(alpha: f64, k: f64) -> f64 {
    let k = k.min(1.0 - 1e-15);
    let ka = k.powf(alpha);
    (ka * ka + 1.0 - (1.0 - k).powf(2.0 * alpha)) / (2.0 * ka)
}

fn h_arg(alpha: f64, k: f64) -> f64 {
    let ka = k.powf(alpha);
    let ca = (1.0 - k).powf(alpha);
    (1.0 - ka * ka - ca * ca) / (2.0 * ka * ca)
}

fn acos_pad(arg: f64, pad: f64) -> f64 {
    (arg + pad).clamp(-1.0, 1.0).acos()
}

/// Axis-aligned box in `(alpha, m1, m2)` parameter space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cuboid {
    pub alpha: (f64, f64),
    pub m1: (f64, f64),
    pub m2: (f64, f64),
}

impl Cuboid {
    pub fn validate(&self) -> Result<(), BotError> {
        let ordered = self.alpha.0 <= self.alpha.1
            && self.m1.0 <= self.m1.1
            && self.m2.0 <= self.m2.1;
        if !ordered {
            return Err(BotError::InvalidArgument(
                "cuboid bounds must satisfy lo <= hi".into(),
            ));
        }
        // Bounding-box membership only: straddling the mass-simplex
        // boundary is fine (such cuboids are bounded conservatively),
        // but alpha < 0.5 or m1 > 0.25 would break the monotonicity
        // facts behind the bound.
        let inside = self.alpha.0 >= 0.5
            && self.alpha.1 < 1.0
            && self.m1.0 > 0.0
            && self.m1.1 <= 0.25
            && self.m2.0 >= 0.25
            && self.m2.1 < 1.0;
        if !inside {
            return Err(BotError::DomainError(
                "cuboid lies outside the remaining verification region".into(),
            ));
        }
        Ok(())
    }

    /// Octree split: every axis halved.
    pub fn split(&self) -> [Cuboid; 8] {
        let half =
            |(lo, hi): (f64, f64)| ((lo, 0.5 * (lo + hi)), (0.5 * (lo + hi), hi));
        let (a0, a1) = half(self.alpha);
        let (b0, b1) = half(self.m1);
        let (c0, c1) = half(self.m2);
        let mut out = [*self; 8];
        let mut i = 0;
        for a in [a0, a1] {
            for b in [b0, b1] {
                for c in [c0, c1] {
                    out[i] = Cuboid {
                        alpha: a,
                        m1: b,
                        m2: c,
                    };
                    i += 1;
                }
            }
        }
        out
    }

    /// Entirely outside the band `m2 in [0.5 - m1, 1 - 2 m1]`?
    fn outside_band(&self) -> bool {
        self.m1.1 + self.m2.1 < 0.5 || self.m2.0 > 1.0 - 2.0 * self.m1.0
    }
}

/// Rigorous lower bound of `gamma2` over a cuboid:
///
/// `h(alpha_hi, m1_hi/(m1_hi + m2_lo)) + f(alpha_hi, m2_hi/(1 - m1_hi))
///  - h(alpha_lo, m1_lo)`,
///
/// valid because on the remaining region `f` and `h` decrease in both
/// arguments (for `h` in `k` up to 1/2, which `m1 <= 0.25 <= m2`
/// guarantees). Each arccos argument is additionally widened by 1e-12
/// toward the conservative side.
pub fn lower_bound_gamma2(cuboid: &Cuboid) -> Result<f64, BotError> {
    cuboid.validate()?;
    let (alpha_lo, alpha_hi) = cuboid.alpha;
    let (m1_lo, m1_hi) = cuboid.m1;
    let (m2_lo, m2_hi) = cuboid.m2;
    let term_h = acos_pad(h_arg(alpha_hi, m1_hi / (m1_hi + m2_lo)), ARG_PAD);
    let term_f = acos_pad(f_arg(alpha_hi, m2_hi / (1.0 - m1_hi)), ARG_PAD);
    let term_max = acos_pad(h_arg(alpha_lo, m1_lo), -ARG_PAD);
    Ok(term_h + term_f - term_max)
}

/// Outcome of one certification run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// Every leaf cuboid cleared the threshold.
    pub all_positive: bool,
    /// Cuboids examined, including discarded and split ones.
    pub cuboids_processed: u64,
    /// Deepest subdivision level reached.
    pub max_depth: usize,
    /// Smallest certified leaf bound (infinity if nothing was certified).
    pub min_lower_bound: f64,
    pub eps: f64,
    pub delta: f64,
    pub threshold: f64,
    /// A deepest failing cuboid when certification gave up.
    pub failing_cuboid: Option<Cuboid>,
}

#[derive(Clone, Copy)]
struct Stats {
    processed: u64,
    max_depth: usize,
    min_lb: f64,
    failure: Option<(usize, Cuboid)>,
}

impl Stats {
    fn empty() -> Self {
        Stats {
            processed: 0,
            max_depth: 0,
            min_lb: f64::INFINITY,
            failure: None,
        }
    }

    fn merge(mut self, other: Stats) -> Stats {
        self.processed += other.processed;
        self.max_depth = self.max_depth.max(other.max_depth);
        self.min_lb = self.min_lb.min(other.min_lb);
        if self.failure.is_none() {
            self.failure = other.failure;
        }
        self
    }
}

fn certify(cuboid: &Cuboid, depth: usize, threshold: f64, max_depth: usize) -> Stats {
    let mut stats = Stats::empty();
    stats.processed = 1;
    stats.max_depth = depth;
    if cuboid.outside_band() {
        return stats;
    }
    let lb = lower_bound_gamma2(cuboid).expect("subdivision stays inside the region");
    if lb > threshold {
        stats.min_lb = lb;
        return stats;
    }
    if depth >= max_depth {
        stats.failure = Some((depth, *cuboid));
        return stats;
    }
    for child in cuboid.split() {
        stats = stats.merge(certify(&child, depth + 1, threshold, max_depth));
        if stats.failure.is_some() {
            // Deterministic short-circuit: siblings after the first
            // failure are never examined.
            return stats;
        }
    }
    stats
}

/// Certifies `gamma2 > threshold` on the remaining region restricted to
/// `alpha <= 1 - eps` and `m1 >= delta`. The bounding box
/// `[0.5, 1-eps] x [delta, 0.25] x [0.25, 1-2 delta]` is tiled, tiles
/// whose cuboids leave the band `m2 in [0.5-m1, 1-2 m1]` entirely are
/// discarded, straddling ones are kept whole, and every surviving leaf
/// must clear the threshold. Runs are deterministic; tiles are
/// processed in parallel and each tile aborts at its first failure.
pub fn verify_region(
    eps: f64,
    delta: f64,
    threshold: f64,
    max_depth: usize,
) -> Result<VerificationReport, BotError> {
    if !(eps > 0.0) || !(delta > 0.0) || !(threshold > 0.0) {
        return Err(BotError::InvalidArgument(
            "eps, delta and threshold must be positive".into(),
        ));
    }
    if !(eps < 0.5) || !(delta < 0.25) {
        return Err(BotError::InvalidArgument(
            "eps must stay below 0.5 and delta below 0.25".into(),
        ));
    }
    let alpha_range = (0.5, 1.0 - eps);
    let m1_range = (delta, 0.25);
    let m2_range = (0.25, 1.0 - 2.0 * delta);
    let k = INITIAL_TILES_PER_AXIS;
    let grid = |range: (f64, f64), i: usize| {
        let w = (range.1 - range.0) / k as f64;
        (range.0 + i as f64 * w, range.0 + (i + 1) as f64 * w)
    };
    let mut tiles = Vec::with_capacity(k * k * k);
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                tiles.push(Cuboid {
                    alpha: grid(alpha_range, a),
                    m1: grid(m1_range, b),
                    m2: grid(m2_range, c),
                });
            }
        }
    }
    let per_tile: Vec<Stats> = tiles
        .into_par_iter()
        .map(|tile| certify(&tile, 0, threshold, max_depth))
        .collect();
    let stats = per_tile
        .into_iter()
        .fold(Stats::empty(), |acc, s| acc.merge(s));
    Ok(VerificationReport {
        all_positive: stats.failure.is_none(),
        cuboids_processed: stats.processed,
        max_depth: stats.max_depth,
        min_lower_bound: stats.min_lb,
        eps,
        delta,
        threshold,
        failing_cuboid: stats.failure.map(|(_, c)| c),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityCheck {
    pub name: String,
    pub holds: bool,
    pub violations: usize,
}

/// Grid audit of every monotonicity fact the cuboid bound relies on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub grid_resolution: usize,
    pub checks: Vec<MonotonicityCheck>,
    pub all_hold: bool,
}

/// Checks, on a `grid_resolution` point grid, that `f` decreases in `k`
/// and stays below pi/2, that `h` decreases in `alpha` (and `f` does
/// for `alpha >= 0.5`), and that `h` peaks at `k = 1/2` for
/// `alpha <= 0.5` but dips at `k = 1/2` for `alpha >= 0.5`. A violation
/// here would invalidate the verifier's lower bound.
pub fn monotonicity_audit(grid_resolution: usize) -> MonotonicityReport {
    let r = grid_resolution.max(4);
    let ks: Vec<f64> = (1..r).map(|i| i as f64 / r as f64).collect();
    let alphas: Vec<f64> = (0..=r).map(|i| i as f64 / r as f64).collect();
    // Grid spacing limits how strictly "strict" can be tested; this
    // slack only absorbs float noise.
    let slack = 1e-13;
    let mut checks = Vec::new();
    let mut record = |name: &str, violations: usize| {
        checks.push(MonotonicityCheck {
            name: name.to_string(),
            holds: violations == 0,
            violations,
        });
    };

    let mut v = 0;
    for &alpha in alphas.iter().filter(|&&a| a > 0.0 && a < 1.0) {
        for w in ks.windows(2) {
            if f_angle(alpha, w[1]).unwrap() >= f_angle(alpha, w[0]).unwrap() + slack {
                v += 1;
            }
        }
    }
    record("f strictly decreasing in k for alpha in (0,1)", v);

    let mut v = 0;
    for &alpha in &alphas {
        for &k in &ks {
            if f_angle(alpha, k).unwrap() >= std::f64::consts::FRAC_PI_2 {
                v += 1;
            }
        }
    }
    record("f below pi/2", v);

    let mut v = 0;
    for &k in &ks {
        for w in alphas.windows(2) {
            if h_angle(w[1], k).unwrap() > h_angle(w[0], k).unwrap() + slack {
                v += 1;
            }
        }
    }
    record("h decreasing in alpha", v);

    let mut v = 0;
    for &k in &ks {
        for w in alphas.windows(2) {
            if w[0] >= 0.5 && f_angle(w[1], k).unwrap() > f_angle(w[0], k).unwrap() + slack {
                v += 1;
            }
        }
    }
    record("f decreasing in alpha for alpha >= 0.5", v);

    // h versus k changes character at alpha = 0.5: maximum at k = 1/2
    // below, minimum at k = 1/2 above.
    let mut v = 0;
    for &alpha in alphas.iter().filter(|&&a| a <= 0.5) {
        for w in ks.windows(2) {
            let (lo, hi) = (h_angle(alpha, w[0]).unwrap(), h_angle(alpha, w[1]).unwrap());
            let rising = w[1] <= 0.5 && hi + slack < lo;
            let falling = w[0] >= 0.5 && lo + slack < hi;
            if rising || falling {
                v += 1;
            }
        }
    }
    record("h peaks at k = 1/2 for alpha <= 0.5", v);

    let mut v = 0;
    for &alpha in alphas.iter().filter(|&&a| a >= 0.5) {
        for w in ks.windows(2) {
            let (lo, hi) = (h_angle(alpha, w[0]).unwrap(), h_angle(alpha, w[1]).unwrap());
            let falling_violated = w[1] <= 0.5 && hi > lo + slack;
            let rising_violated = w[0] >= 0.5 && lo > hi + slack;
            if falling_violated || rising_violated {
                v += 1;
            }
        }
    }
    record("h dips at k = 1/2 for alpha >= 0.5", v);

    let mut v = 0;
    for &alpha in &alphas {
        for &k in &ks {
            let a = h_angle(alpha, k).unwrap();
            let b = h_angle(alpha, 1.0 - k).unwrap();
            if (a - b).abs() > 1e-12 {
                v += 1;
            }
        }
    }
    record("h symmetric around k = 1/2", v);

    MonotonicityReport {
        grid_resolution: r,
        all_hold: checks.iter().all(|c| c.holds),
        checks,
    }
}
