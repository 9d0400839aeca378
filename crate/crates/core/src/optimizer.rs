//! Constrained two-objective posture selection.
//!
//! Candidate postures come from sagittal-plane reach at each distance of a
//! grid. Each candidate is checked against reach, joint limits and current
//! joint capacity, scored on fatigue and discomfort, and ranked by a
//! weighted sum of the max-normalized objectives.

use nalgebra::Vector3;
use rayon::prelude::*;

use crate::body_model::{KinematicChain, SegmentSet};
use crate::capacity::{CapacityState, StrengthModel};
use crate::error::{Error, Result};
use crate::kinematics::{forward_kinematics, planar_geometry, planar_ik, PlanarTarget, Posture};
use crate::objectives::{
    discomfort_measure, discomfort_terms, fatigue_measure, DiscomfortParams, FatigueMeasureParams, ObjectivePoint,
};
use crate::statics::{static_joint_torques, ExternalWrench};

/// Reach residual below which a posture counts as on target [m].
pub const REACH_TOLERANCE: f64 = 1e-6;

/// Candidates with any limit penalty above this are discarded.
pub const DEFAULT_DISCOMFORT_CAP: f64 = 1e15;

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    /// Distance from the grasp point to the target [m].
    pub reach_residual: f64,
    /// Signed excess beyond the nearer limit per joint [rad]; positive is a violation.
    pub limit_violations: Vec<f64>,
    /// `|Γᵢ| - Cᵢ` per joint [N·m]; positive is a violation.
    pub strength_violations: Vec<f64>,
    pub feasible: bool,
}

/// Evaluates reach, range-of-motion and strength constraints. `capacity`
/// must already be evaluated at `posture`.
#[allow(clippy::too_many_arguments)]
pub fn check_feasibility(
    chain: &KinematicChain,
    segments: &SegmentSet,
    posture: &Posture,
    target: &Vector3<f64>,
    wrench: &ExternalWrench,
    capacity: &CapacityState,
    gravity: f64,
) -> Result<FeasibilityReport> {
    if capacity.dof() != chain.dof() {
        return Err(Error::param("capacity state does not match the chain"));
    }
    let reach_residual = (forward_kinematics(chain, posture)?.position - target).norm();
    let limit_violations: Vec<f64> = chain
        .joints
        .iter()
        .zip(posture.iter())
        .map(|(j, &q)| (q - j.upper).max(j.lower - q))
        .collect();
    let torques = static_joint_torques(chain, segments, posture, wrench, gravity)?;
    let strength_violations: Vec<f64> =
        torques.iter().zip(&capacity.current).map(|(t, c)| t.abs() - c).collect();
    let feasible = reach_residual < REACH_TOLERANCE
        && limit_violations.iter().all(|&v| v <= 0.0)
        && strength_violations.iter().all(|&v| v <= 0.0);
    Ok(FeasibilityReport { reach_residual, limit_violations, strength_violations, feasible })
}

/// Objective weights `(discomfort, fatigue)`, non-negative and summing to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weights {
    pub discomfort: f64,
    pub fatigue: f64,
}

impl Weights {
    pub fn new(discomfort: f64, fatigue: f64) -> Result<Self> {
        if !(discomfort >= 0.0 && fatigue >= 0.0) {
            return Err(Error::param("weights must be non-negative"));
        }
        if ((discomfort + fatigue) - 1.0).abs() > 1e-12 {
            return Err(Error::param(format!("weights must sum to 1, got {}", discomfort + fatigue)));
        }
        Ok(Weights { discomfort, fatigue })
    }

    pub fn equal() -> Self {
        Weights { discomfort: 0.5, fatigue: 0.5 }
    }

    /// Weights whose level lines have slope `k < 0` in the
    /// (discomfort, fatigue) plane, i.e. `w_discomfort / w_fatigue = -k`.
    pub fn from_slope(k: f64) -> Result<Self> {
        if !(k < 0.0 && k.is_finite()) {
            return Err(Error::param("weight-line slope must be negative"));
        }
        let ratio = -k;
        Ok(Weights { discomfort: ratio / (1.0 + ratio), fatigue: 1.0 / (1.0 + ratio) })
    }

    pub fn slope(&self) -> f64 {
        -self.discomfort / self.fatigue
    }
}

/// Largest value of each objective over a candidate set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalizers {
    pub discomfort: f64,
    pub fatigue: f64,
}

impl Normalizers {
    pub fn from_points<'a>(points: impl IntoIterator<Item = &'a ObjectivePoint>) -> Result<Self> {
        let (d, f) = points
            .into_iter()
            .fold((0.0f64, 0.0f64), |(d, f), p| (d.max(p.discomfort), f.max(p.fatigue)));
        let n = Normalizers { discomfort: d, fatigue: f };
        n.check()?;
        Ok(n)
    }

    fn check(&self) -> Result<()> {
        if !(self.discomfort > 0.0 && self.fatigue > 0.0 && self.discomfort.is_finite() && self.fatigue.is_finite()) {
            return Err(Error::param(format!(
                "normalizers must be positive and finite, got ({}, {})",
                self.discomfort, self.fatigue
            )));
        }
        Ok(())
    }
}

/// Weighted sum of the normalized objectives.
pub fn scalarize(point: &ObjectivePoint, weights: Weights, normalizers: Normalizers) -> Result<f64> {
    normalizers.check()?;
    Ok(weights.discomfort * point.discomfort / normalizers.discomfort
        + weights.fatigue * point.fatigue / normalizers.fatigue)
}

/// Mutually non-dominated points, ordered by discomfort.
#[derive(Debug, Clone, PartialEq)]
pub struct ParetoSet {
    pub points: Vec<ObjectivePoint>,
}

impl ParetoSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Non-dominated subset under minimization of both objectives.
///
/// Exact duplicates collapse onto their first occurrence.
pub fn pareto_filter(points: &[ObjectivePoint]) -> ParetoSet {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        let (pa, pb) = (&points[a], &points[b]);
        pa.discomfort
            .total_cmp(&pb.discomfort)
            .then(pa.fatigue.total_cmp(&pb.fatigue))
            .then(a.cmp(&b))
    });
    let mut best = f64::INFINITY;
    let mut kept = Vec::new();
    for i in order {
        if points[i].fatigue < best {
            best = points[i].fatigue;
            kept.push(points[i].clone());
        }
    }
    ParetoSet { points: kept }
}

/// Everything needed to score reach postures for one task.
#[derive(Debug, Clone)]
pub struct PostureProblem {
    pub chain: KinematicChain,
    pub segments: SegmentSet,
    pub strength: StrengthModel,
    pub wrench: ExternalWrench,
    /// Target height below the shoulder [m].
    pub drop: f64,
    /// Values of the joints not solved by planar reach.
    pub pinned: Posture,
    pub discomfort: DiscomfortParams,
    pub fatigue: FatigueMeasureParams,
    pub gravity: f64,
    pub discomfort_cap: f64,
}

/// A scored reach posture together with its constraint report.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub point: ObjectivePoint,
    pub report: FeasibilityReport,
    /// Capacity carried to this posture.
    pub capacity: CapacityState,
    /// Largest single limit penalty.
    pub max_penalty: f64,
}

impl Candidate {
    pub fn admissible(&self, cap: f64) -> bool {
        self.report.feasible && self.max_penalty <= cap && self.point.discomfort.is_finite()
    }
}

impl PostureProblem {
    /// World position of a target `distance` in front of the shoulder.
    pub fn target(&self, distance: f64) -> Result<Vector3<f64>> {
        let (shoulder, _, _) = planar_geometry(&self.chain, &self.pinned)?;
        Ok(PlanarTarget::new(distance, self.drop).world(shoulder))
    }

    /// Scores one posture. The fatigue level of `capacity` is carried over
    /// to the maxima of this posture.
    pub fn evaluate(&self, posture: &Posture, target: &Vector3<f64>, capacity: &CapacityState) -> Result<Candidate> {
        let local = capacity.at_maxima(self.strength.strength_at(posture)?)?;
        let report = check_feasibility(&self.chain, &self.segments, posture, target, &self.wrench, &local, self.gravity)?;
        let torques = static_joint_torques(&self.chain, &self.segments, posture, &self.wrench, self.gravity)?;
        let fatigue = fatigue_measure(&torques, &local, self.fatigue)?;
        let discomfort = discomfort_measure(posture, &self.discomfort)?;
        let max_penalty = discomfort_terms(posture, &self.discomfort)?
            .iter()
            .map(|&(_, qu, ql)| qu.max(ql))
            .fold(0.0, f64::max);
        Ok(Candidate {
            point: ObjectivePoint { fatigue, discomfort, posture: posture.clone(), distance: None, torques: torques.0 },
            report,
            capacity: local,
            max_penalty,
        })
    }

    /// All admissible reach candidates at one distance.
    pub fn candidates_at(&self, distance: f64, capacity: &CapacityState) -> Result<Vec<Candidate>> {
        let target = self.target(distance)?;
        let mut out = Vec::new();
        for q in planar_ik(&self.chain, PlanarTarget::new(distance, self.drop), &self.pinned)? {
            let mut c = self.evaluate(&q, &target, capacity)?;
            c.point.distance = Some(distance);
            if c.admissible(self.discomfort_cap) {
                out.push(c);
            }
        }
        Ok(out)
    }

    /// Full capacity at the neutral posture.
    pub fn fresh_capacity(&self, fatigue_rate: f64, recovery_rate: f64) -> Result<CapacityState> {
        CapacityState::fresh(self.strength.strength_at(&Posture(self.chain.neutral()))?, fatigue_rate, recovery_rate)
    }
}

/// Evenly spaced distances including both ends.
pub fn distance_grid(range: (f64, f64), steps: usize) -> Result<Vec<f64>> {
    let (lo, hi) = range;
    if steps < 2 {
        return Err(Error::param("a sweep needs at least two steps"));
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::param(format!("distance range [{lo}, {hi}] is not ordered")));
    }
    let h = (hi - lo) / (steps - 1) as f64;
    Ok((0..steps).map(|i| if i + 1 == steps { hi } else { lo + h * i as f64 }).collect())
}

/// One scored posture per reachable distance, in grid order.
///
/// At each distance the feasible reach branch with the lowest equal-weight
/// score is kept; scores use maxima over every admissible candidate of the
/// sweep. Distances without an admissible posture are skipped.
pub fn sweep_distance(
    problem: &PostureProblem,
    range: (f64, f64),
    steps: usize,
    capacity: &CapacityState,
) -> Result<Vec<ObjectivePoint>> {
    let grid = distance_grid(range, steps)?;
    let per_distance: Vec<Vec<Candidate>> = grid
        .par_iter()
        .map(|&d| problem.candidates_at(d, capacity))
        .collect::<Result<_>>()?;

    let all: Vec<&ObjectivePoint> = per_distance.iter().flatten().map(|c| &c.point).collect();
    if all.is_empty() {
        log::warn!("no admissible posture anywhere in [{}, {}] m", range.0, range.1);
        return Ok(Vec::new());
    }
    let norms = Normalizers::from_points(all.iter().copied()).ok();

    let mut out = Vec::with_capacity(grid.len());
    for (d, cands) in grid.iter().zip(per_distance) {
        let best = match norms {
            Some(n) => cands.into_iter().map(|c| c.point).min_by(|a, b| {
                let za = scalarize(a, Weights::equal(), n).unwrap_or(f64::INFINITY);
                let zb = scalarize(b, Weights::equal(), n).unwrap_or(f64::INFINITY);
                za.total_cmp(&zb)
            }),
            None => cands.into_iter().map(|c| c.point).next(),
        };
        match best {
            Some(p) => out.push(p),
            None => log::info!("distance {d:.4} m: no admissible posture, omitted"),
        }
    }
    Ok(out)
}

/// Selected posture and its score.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub point: ObjectivePoint,
    pub score: f64,
    pub normalizers: Normalizers,
}

impl Prediction {
    pub fn distance(&self) -> f64 {
        self.point.distance.unwrap_or(f64::NAN)
    }
}

/// The point minimizing the weighted score; ties go to the earliest
/// (smallest-distance) point.
pub fn select(points: &[ObjectivePoint], weights: Weights, normalizers: Normalizers) -> Result<Prediction> {
    let mut best: Option<(f64, &ObjectivePoint)> = None;
    for p in points {
        let z = scalarize(p, weights, normalizers)?;
        if best.is_none_or(|(bz, _)| z < bz) {
            best = Some((z, p));
        }
    }
    let (score, point) = best.ok_or_else(|| Error::NoSolution("no candidate postures".into()))?;
    Ok(Prediction { point: point.clone(), score, normalizers })
}

/// Sweeps the distance range and returns the weighted-score optimum.
pub fn predict_posture(
    problem: &PostureProblem,
    range: (f64, f64),
    steps: usize,
    weights: Weights,
    capacity: &CapacityState,
) -> Result<Prediction> {
    let points = sweep_distance(problem, range, steps, capacity)?;
    if points.is_empty() {
        return Err(Error::NoSolution(format!("no admissible posture in [{}, {}] m", range.0, range.1)));
    }
    select(&points, weights, Normalizers::from_points(&points)?)
}
