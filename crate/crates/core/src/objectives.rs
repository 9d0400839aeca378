//! Fatigue and discomfort measures of a posture.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::body_model::KinematicChain;
use crate::capacity::CapacityState;
use crate::error::{Error, Result};
use crate::kinematics::Posture;
use crate::statics::JointTorques;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FatigueMeasureParams {
    /// Exponent on each normalized torque.
    pub exponent: f64,
}

impl Default for FatigueMeasureParams {
    fn default() -> Self {
        FatigueMeasureParams { exponent: 2.0 }
    }
}

/// `Σ (|Γᵢ| / Cᵢ)^p` with `Cᵢ` the current capacity of joint `i`.
pub fn fatigue_measure(torques: &JointTorques, capacity: &CapacityState, params: FatigueMeasureParams) -> Result<f64> {
    if !(params.exponent > 0.0) {
        return Err(Error::param("fatigue exponent must be positive"));
    }
    if torques.len() != capacity.dof() {
        return Err(Error::param("torque and capacity vectors differ in length"));
    }
    torques
        .iter()
        .zip(&capacity.current)
        .map(|(t, &c)| {
            if c <= 0.0 {
                Err(Error::InvalidState(format!("non-positive capacity {c}")))
            } else {
                Ok((t.abs() / c).powf(params.exponent))
            }
        })
        .sum()
}

/// Default penalty constant of the discomfort measure.
pub const DEFAULT_DISCOMFORT_G: f64 = 1e6;

/// Distance-to-limit ratio where the penalty base `0.5·cos(5r) + 1` is
/// smallest. Ratios beyond it are evaluated here so the penalty never
/// rises again away from its limit.
pub const PENALTY_RATIO_CAP: f64 = PI / 5.0;

fn penalty(ratio: f64) -> f64 {
    let r = ratio.clamp(0.0, 1.0).min(PENALTY_RATIO_CAP);
    (0.5 * (5.0 * r + FRAC_PI_2).sin() + 1.0).powi(100)
}

/// Upper- and lower-limit penalty terms `(QU, QL)` for one joint angle.
pub fn limit_penalties(q: f64, upper: f64, lower: f64) -> Result<(f64, f64)> {
    if !(lower < upper) || !q.is_finite() {
        return Err(Error::param(format!("degenerate joint limits [{lower}, {upper}]")));
    }
    let range = upper - lower;
    Ok((penalty((upper - q) / range), penalty((q - lower) / range)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointComfort {
    pub lower: f64,
    pub upper: f64,
    pub neutral: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscomfortParams {
    pub g: f64,
    pub joints: Vec<JointComfort>,
}

impl DiscomfortParams {
    pub fn from_chain(chain: &KinematicChain) -> Self {
        DiscomfortParams {
            g: DEFAULT_DISCOMFORT_G,
            joints: chain
                .joints
                .iter()
                .map(|j| JointComfort { lower: j.lower, upper: j.upper, neutral: j.neutral, gamma: j.gamma })
                .collect(),
        }
    }
}

/// Per-joint `(γ·Δq², QU, QL)` with `Δq = (q - q_neutral) / range`.
pub fn discomfort_terms(posture: &Posture, params: &DiscomfortParams) -> Result<Vec<(f64, f64, f64)>> {
    if posture.len() != params.joints.len() {
        return Err(Error::param("posture length does not match discomfort parameters"));
    }
    posture
        .iter()
        .zip(&params.joints)
        .map(|(&q, j)| {
            let (qu, ql) = limit_penalties(q, j.upper, j.lower)?;
            let dq = (q - j.neutral) / (j.upper - j.lower);
            Ok((j.gamma * dq * dq, qu, ql))
        })
        .collect()
}

/// `(1/G)·Σ [γᵢ·Δqᵢ² + G·QUᵢ + G·QLᵢ]`.
pub fn discomfort_measure(posture: &Posture, params: &DiscomfortParams) -> Result<f64> {
    if !(params.g > 0.0) {
        return Err(Error::param("discomfort constant G must be positive"));
    }
    let terms = discomfort_terms(posture, params)?;
    Ok(terms.iter().map(|(d, qu, ql)| d + params.g * qu + params.g * ql).sum::<f64>() / params.g)
}

/// A scored posture.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectivePoint {
    pub fatigue: f64,
    pub discomfort: f64,
    pub posture: Posture,
    /// Shoulder-to-target distance that generated the posture [m].
    pub distance: Option<f64>,
    /// Static joint torques at the posture [N·m].
    pub torques: Vec<f64>,
}

impl ObjectivePoint {
    /// A bare point without posture data.
    pub fn raw(discomfort: f64, fatigue: f64) -> Self {
        ObjectivePoint { fatigue, discomfort, posture: Posture(Vec::new()), distance: None, torques: Vec::new() }
    }

    /// Whether `self` is no worse in both objectives and better in one.
    pub fn dominates(&self, other: &ObjectivePoint) -> bool {
        self.fatigue <= other.fatigue
            && self.discomfort <= other.discomfort
            && (self.fatigue < other.fatigue || self.discomfort < other.discomfort)
    }
}
