//! Closed-form optimal branching angles and the V/L/Y classification of a
//! single branching between a parent `a0` and two children `a1`, `a2`.
//!
//! With the flow fraction `k = m1 / (m1 + m2)`, a stationary interior
//! branching encloses `f(alpha, k)` between child 1 and the extension of
//! the parent edge, `f(alpha, 1 - k)` for child 2, and
//! `h(alpha, k) = f(alpha, k) + f(alpha, 1 - k)` between the children.
//! When the two child flows run in opposite directions the angles follow
//! the asymmetric variant below.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::BotError;

/// Angular tolerance below which a V/L condition holding with equality is
/// flagged as transient.
pub const TRANSIENT_TOL: f64 = 1e-9;

fn check_domain(alpha: f64, k: f64) -> Result<(), BotError> {
    if !(0.0..=1.0).contains(&alpha) || !alpha.is_finite() {
        return Err(BotError::DomainError(format!("alpha {alpha} outside [0, 1]")));
    }
    if !(k > 0.0 && k < 1.0) {
        return Err(BotError::DomainError(format!("k {k} outside (0, 1)")));
    }
    Ok(())
}

/// Arguments are provably in [-1, 1]; clamping only absorbs float drift
/// near alpha in {0, 1}.
fn acos_clamped(x: f64) -> f64 {
    x.clamp(-1.0, 1.0).acos()
}

/// Optimal angle between child edge 1 and the extension of the parent
/// edge: `arccos((k^2a + 1 - (1-k)^2a) / (2 k^a))`.
pub fn f_angle(alpha: f64, k: f64) -> Result<f64, BotError> {
    check_domain(alpha, k)?;
    if alpha == 1.0 {
        // The argument is identically 1; evaluating it in floats would
        // turn one-ulp powf errors into ~1e-8 angles.
        return Ok(0.0);
    }
    let ka = k.powf(alpha);
    let arg = (ka * ka + 1.0 - (1.0 - k).powf(2.0 * alpha)) / (2.0 * ka);
    Ok(acos_clamped(arg))
}

/// Optimal total angle between the two child edges:
/// `arccos((1 - k^2a - (1-k)^2a) / (2 k^a (1-k)^a))`.
pub fn h_angle(alpha: f64, k: f64) -> Result<f64, BotError> {
    check_domain(alpha, k)?;
    if alpha == 1.0 {
        return Ok(0.0);
    }
    let ka = k.powf(alpha);
    let ca = (1.0 - k).powf(alpha);
    let arg = (1.0 - ka * ka - ca * ca) / (2.0 * ka * ca);
    Ok(acos_clamped(arg))
}

/// Optimal angles `(theta1, theta2)` for an asymmetric branching whose
/// child flows run in opposite directions, children labeled so that
/// `0 < m1 < m2`. Child 1 encloses `pi - h(alpha, (m2-m1)/m2)` with the
/// parent-edge extension and child 2 encloses `f(alpha, (m2-m1)/m2)`.
///
/// `m1 == m2` leaves the parent edge without flow; the `k -> 0` limit
/// `(pi/2, pi/2)` is returned with the degenerate flag set.
pub fn asymmetric_angles(alpha: f64, m1: f64, m2: f64) -> Result<(f64, f64, bool), BotError> {
    if !(m1 > 0.0) || !(m2 > 0.0) {
        return Err(BotError::DomainError(format!(
            "flows must be positive, got {m1} and {m2}"
        )));
    }
    if m1 > m2 {
        return Err(BotError::InvalidArgument(format!(
            "asymmetric branching expects m1 < m2 (got {m1} > {m2}); swap the children"
        )));
    }
    if m1 == m2 {
        return Ok((PI / 2.0, PI / 2.0, true));
    }
    let k = (m2 - m1) / m2;
    Ok((PI - h_angle(alpha, k)?, f_angle(alpha, k)?, false))
}

/// How the two child flows relate at the branching point: both toward or
/// both away from it (symmetric), or one of each (asymmetric).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BranchingMode {
    Symmetric,
    Asymmetric,
}

/// Per-child optimal angles against the parent-edge extension, for
/// either branching mode. `m1`, `m2` are the absolute child edge flows.
pub fn optimal_angle_pair(
    alpha: f64,
    m1: f64,
    m2: f64,
    mode: BranchingMode,
) -> Result<(f64, f64, bool), BotError> {
    match mode {
        BranchingMode::Symmetric => {
            if !(m1 > 0.0) || !(m2 > 0.0) {
                return Err(BotError::DomainError(format!(
                    "flows must be positive, got {m1} and {m2}"
                )));
            }
            let k = m1 / (m1 + m2);
            Ok((f_angle(alpha, k)?, f_angle(alpha, 1.0 - k)?, false))
        }
        BranchingMode::Asymmetric => {
            if m1 <= m2 {
                asymmetric_angles(alpha, m1, m2)
            } else {
                let (t2, t1, degenerate) = asymmetric_angles(alpha, m2, m1)?;
                Ok((t1, t2, degenerate))
            }
        }
    }
}

/// Outcome of classifying one branching.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BranchKind {
    /// Interior branching point realizing the optimal angles.
    Y,
    /// Branching point at the parent `a0`.
    V,
    /// Branching point at child `a1`.
    L1,
    /// Branching point at child `a2`.
    L2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchingClass {
    pub kind: BranchKind,
    /// Optimal `(theta1, theta2)` for the given mode and flows.
    pub optimal_angles: (f64, f64),
    /// Set when the selected condition holds within [`TRANSIENT_TOL`] of
    /// equality, i.e. the configuration sits on a regime boundary.
    pub transient: bool,
}

pub(crate) fn angle_at(apex: &[f64], p: &[f64], q: &[f64]) -> Result<f64, BotError> {
    let mut du = 0.0;
    let mut dv = 0.0;
    let mut dot = 0.0;
    for d in 0..apex.len() {
        let u = p[d] - apex[d];
        let v = q[d] - apex[d];
        du += u * u;
        dv += v * v;
        dot += u * v;
    }
    if du == 0.0 || dv == 0.0 {
        return Err(BotError::DegenerateGeometry(
            "coincident points leave the angle undefined".into(),
        ));
    }
    Ok(acos_clamped(dot / (du.sqrt() * dv.sqrt())))
}

/// Evaluates the three corner conditions for the triangle `a0 a1 a2` and
/// returns the optimal branching class. With `(t1, t2)` the optimal
/// angles of the mode, the conditions are
///
/// - V:  `angle(a1, a0, a2) >= t1 + t2`  (branching point at `a0`),
/// - L1: `angle(a2, a1, a0) >= pi - t2`  (at `a1`),
/// - L2: `angle(a0, a2, a1) >= pi - t1`  (at `a2`),
///
/// with precedence V > L1 > L2 when several hold with equality; if none
/// holds the optimum is an interior Y-branching.
pub fn classify_branching(
    a0: &[f64],
    a1: &[f64],
    a2: &[f64],
    m1: f64,
    m2: f64,
    alpha: f64,
    mode: BranchingMode,
) -> Result<BranchingClass, BotError> {
    let (t1, t2, _) = optimal_angle_pair(alpha, m1, m2, mode)?;
    let psi = angle_at(a0, a1, a2)?;
    let phi = angle_at(a1, a2, a0)?;
    let rho = angle_at(a2, a0, a1)?;
    let conditions = [
        (BranchKind::V, psi - (t1 + t2)),
        (BranchKind::L1, phi - (PI - t2)),
        (BranchKind::L2, rho - (PI - t1)),
    ];
    for (kind, slack) in conditions {
        if slack >= 0.0 {
            return Ok(BranchingClass {
                kind,
                optimal_angles: (t1, t2),
                transient: slack <= TRANSIENT_TOL,
            });
        }
    }
    Ok(BranchingClass {
        kind: BranchKind::Y,
        optimal_angles: (t1, t2),
        transient: false,
    })
}
