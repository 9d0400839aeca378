//! Table builders behind each CLI subcommand.

use crate::body_model::arm;
use crate::capacity::{met, simulate_work_rest, CapacityState};
use crate::error::{Error, Result};
use crate::objectives::ObjectivePoint;
use crate::optimizer::{pareto_filter, scalarize, select, sweep_distance, Normalizers, PostureProblem, Prediction, Weights};

use super::table::{Cell, Table};
use super::DrillingScenario;

/// Weight-line slopes reported with the Pareto front.
pub const PARETO_SLOPES: [f64; 3] = [-1.0, -2.0, -0.5];

const SECONDS_PER_MINUTE: f64 = 60.0;

/// Capacity decay of one joint strength level under a constant load.
#[derive(Debug, Clone, PartialEq)]
pub struct FatigueCurve {
    /// [N·m]
    pub gamma_max: f64,
    /// [N·m]
    pub load: f64,
    /// [s]
    pub met_s: f64,
    /// `(time [s], capacity [N·m])`.
    pub samples: Vec<(f64, f64)>,
}

fn sample_times(duration: f64, step: f64) -> Vec<f64> {
    let n = (duration / step).floor() as usize;
    let mut t: Vec<f64> = (0..=n).map(|i| i as f64 * step).collect();
    if duration - t[n] > 1e-9 * step {
        t.push(duration);
    }
    t
}

/// One curve per configured maximum, loaded with the configured joint's
/// static torque at the analysis posture.
pub fn fatigue_curves(scenario: &DrillingScenario) -> Result<Vec<FatigueCurve>> {
    let problem = scenario.problem()?;
    let fc = &scenario.fatigue_curve;
    let joint = problem
        .chain
        .joint_index(&fc.joint)
        .ok_or_else(|| Error::Config(format!("fatigue_curve.joint '{}' is not in the chain", fc.joint)))?;
    let load = scenario.analysis_torques(&problem)?[joint].abs();
    let k = scenario.model.fatigue_rate_per_min;
    let times = sample_times(fc.duration_s, fc.sample_s);
    fc.gamma_max_nm
        .iter()
        .map(|&gmax| {
            let fresh = CapacityState::fresh(vec![gmax], k, scenario.model.recovery_rate_per_min)?;
            let samples = times
                .iter()
                .map(|&t| {
                    let c = if t == 0.0 { gmax } else { fresh.fatigue_step(&[load], t / SECONDS_PER_MINUTE)?.current[0] };
                    Ok((t, c))
                })
                .collect::<Result<_>>()?;
            Ok(FatigueCurve { gamma_max: gmax, load, met_s: met(gmax, load, k) * SECONDS_PER_MINUTE, samples })
        })
        .collect()
}

pub fn cmd_fatigue_curve(scenario: &DrillingScenario) -> Result<Table> {
    let curves = fatigue_curves(scenario)?;
    let mut t = Table::new(
        [
            "gamma_max [N·m]",
            "time [s]",
            "capacity [N·m]",
            "load [N·m]",
            "normalized_load [-]",
            "met [s]",
            "load_exceeds_max",
        ]
        .map(String::from)
        .to_vec(),
    );
    for c in &curves {
        let exceeds = if c.load >= c.gamma_max { "true" } else { "false" };
        for &(time, cap) in &c.samples {
            t.push(vec![
                c.gamma_max.into(),
                time.into(),
                cap.into(),
                c.load.into(),
                (c.load / cap).into(),
                c.met_s.into(),
                exceeds.into(),
            ]);
        }
    }
    Ok(t)
}

fn joint_columns(problem: &PostureProblem, prefix: &str, unit: &str) -> Vec<String> {
    problem.chain.joints.iter().map(|j| format!("{prefix}{} [{unit}]", j.name)).collect()
}

/// Work-rest schedule at the analysis posture.
pub fn cmd_work_rest(scenario: &DrillingScenario) -> Result<Table> {
    let problem = scenario.problem()?;
    let q = scenario.analysis_posture();
    let fresh = CapacityState::fresh(
        problem.strength.strength_at(&q)?,
        scenario.model.fatigue_rate_per_min,
        scenario.model.recovery_rate_per_min,
    )?;
    let load = scenario.analysis_torques(&problem)?.magnitudes();
    let task = &scenario.task;
    let series = simulate_work_rest(
        &fresh,
        &load,
        task.work_s / SECONDS_PER_MINUTE,
        task.rest_s / SECONDS_PER_MINUTE,
        task.cycles,
        task.sample_s / SECONDS_PER_MINUTE,
    )?;
    let mut header = vec!["time [s]".to_string(), "phase".to_string()];
    header.extend(joint_columns(&problem, "capacity_", "N·m"));
    let mut t = Table::new(header);
    for s in &series.samples {
        let mut row: Vec<Cell> = vec![(s.time * SECONDS_PER_MINUTE).into(), s.phase.label().into()];
        row.extend(s.current.iter().map(|&c| Cell::Num(c)));
        t.push(row);
    }
    Ok(t)
}

/// Capacity after one work phase spent at the fresh optimum.
pub fn fatigued_capacity(scenario: &DrillingScenario, problem: &PostureProblem) -> Result<CapacityState> {
    let fresh = scenario.fresh_capacity(problem)?;
    let best = predict(scenario, problem, &fresh, scenario.weights())?;
    let at_posture = fresh.at_maxima(problem.strength.strength_at(&best.point.posture)?)?;
    let load: Vec<f64> = best.point.torques.iter().map(|t| t.abs()).collect();
    if scenario.task.work_s == 0.0 {
        return Ok(at_posture);
    }
    at_posture.fatigue_step(&load, scenario.task.work_s / SECONDS_PER_MINUTE)
}

fn sweep(scenario: &DrillingScenario, problem: &PostureProblem, capacity: &CapacityState) -> Result<Vec<ObjectivePoint>> {
    let points = sweep_distance(problem, scenario.range(), scenario.sweep.steps, capacity)?;
    if points.is_empty() {
        let (lo, hi) = scenario.range();
        return Err(Error::NoSolution(format!("no admissible posture in [{lo}, {hi}] m")));
    }
    Ok(points)
}

fn predict(
    scenario: &DrillingScenario,
    problem: &PostureProblem,
    capacity: &CapacityState,
    weights: Weights,
) -> Result<Prediction> {
    let points = sweep(scenario, problem, capacity)?;
    select(&points, weights, Normalizers::from_points(&points)?)
}

fn capacity_states(scenario: &DrillingScenario, problem: &PostureProblem, fatigued: bool) -> Result<Vec<(&'static str, CapacityState)>> {
    let mut states = vec![("fresh", scenario.fresh_capacity(problem)?)];
    if fatigued {
        states.push(("fatigued", fatigued_capacity(scenario, problem)?));
    }
    Ok(states)
}

fn angle_cells(p: &ObjectivePoint) -> [Cell; 2] {
    [
        p.posture[arm::SHOULDER_FLEXION].to_degrees().into(),
        p.posture[arm::ELBOW_FLEXION].to_degrees().into(),
    ]
}

/// Objectives along the distance grid; with `fatigued` the fatigued sweep
/// follows the fresh one.
pub fn cmd_sweep(scenario: &DrillingScenario, fatigued: bool) -> Result<Table> {
    let problem = scenario.problem()?;
    let mut header: Vec<String> = ["capacity", "distance [m]", "shoulder_flexion [deg]", "elbow_flexion [deg]"]
        .map(String::from)
        .to_vec();
    header.extend(joint_columns(&problem, "torque_", "N·m"));
    header.extend(["fatigue [-]", "discomfort [-]", "z [-]"].map(String::from));
    let mut t = Table::new(header);
    for (label, cap) in capacity_states(scenario, &problem, fatigued)? {
        let points = sweep(scenario, &problem, &cap)?;
        let norms = Normalizers::from_points(&points)?;
        for p in &points {
            let mut row: Vec<Cell> = vec![label.into(), p.distance.unwrap_or(f64::NAN).into()];
            row.extend(angle_cells(p));
            row.extend(p.torques.iter().map(|&v| Cell::Num(v)));
            row.extend([p.fatigue.into(), p.discomfort.into(), scalarize(p, scenario.weights(), norms)?.into()]);
            t.push(row);
        }
    }
    Ok(t)
}

/// Selection for each weight-line slope.
pub fn pareto_selections(points: &[ObjectivePoint], normalizers: Normalizers) -> Result<Vec<(f64, Weights, Prediction)>> {
    PARETO_SLOPES
        .iter()
        .map(|&k| {
            let w = Weights::from_slope(k)?;
            Ok((k, w, select(points, w, normalizers)?))
        })
        .collect()
}

/// Fresh Pareto front followed by the weight-line selections.
pub fn cmd_pareto(scenario: &DrillingScenario) -> Result<Table> {
    let problem = scenario.problem()?;
    let points = sweep(scenario, &problem, &scenario.fresh_capacity(&problem)?)?;
    let norms = Normalizers::from_points(&points)?;
    let front = pareto_filter(&points);
    let mut t = Table::new(
        [
            "kind",
            "slope [-]",
            "w_discomfort [-]",
            "w_fatigue [-]",
            "distance [m]",
            "shoulder_flexion [deg]",
            "elbow_flexion [deg]",
            "fatigue [-]",
            "discomfort [-]",
            "z [-]",
        ]
        .map(String::from)
        .to_vec(),
    );
    let row = |kind: &str, slope: Cell, w: Option<Weights>, p: &ObjectivePoint, z: Cell| {
        let (wd, wf) = match w {
            Some(w) => (Cell::Num(w.discomfort), Cell::Num(w.fatigue)),
            None => (Cell::Text(String::new()), Cell::Text(String::new())),
        };
        let [a, b] = angle_cells(p);
        vec![kind.into(), slope, wd, wf, p.distance.unwrap_or(f64::NAN).into(), a, b, p.fatigue.into(), p.discomfort.into(), z]
    };
    for p in &front.points {
        t.push(row("front", Cell::Text(String::new()), None, p, Cell::Text(String::new())));
    }
    for (k, w, sel) in pareto_selections(&points, norms)? {
        t.push(row("selection", k.into(), Some(w), &sel.point, sel.score.into()));
    }
    Ok(t)
}

/// Optimal distance for fresh and, with `fatigued`, fatigued capacity.
pub fn cmd_predict(scenario: &DrillingScenario, fatigued: bool) -> Result<Table> {
    let problem = scenario.problem()?;
    let mut header: Vec<String> = [
        "capacity",
        "distance [m]",
        "shoulder_flexion [deg]",
        "elbow_flexion [deg]",
        "fatigue [-]",
        "discomfort [-]",
        "z [-]",
    ]
    .map(String::from)
    .to_vec();
    header.extend(joint_columns(&problem, "torque_", "N·m"));
    let mut t = Table::new(header);
    for (label, cap) in capacity_states(scenario, &problem, fatigued)? {
        let pred = predict(scenario, &problem, &cap, scenario.weights())?;
        let p = &pred.point;
        let mut row: Vec<Cell> = vec![label.into(), pred.distance().into()];
        row.extend(angle_cells(p));
        row.extend([p.fatigue.into(), p.discomfort.into(), pred.score.into()]);
        row.extend(p.torques.iter().map(|&v| Cell::Num(v)));
        t.push(row);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_times_cover_duration() {
        assert_eq!(sample_times(3.0, 1.0), vec![0.0, 1.0, 2.0, 3.0]);
        assert_eq!(sample_times(2.5, 1.0), vec![0.0, 1.0, 2.0, 2.5]);
    }

    #[test]
    fn zero_load_gives_flat_curves() {
        let mut s = DrillingScenario::default();
        s.task.tool_mass_kg = 0.0;
        s.task.drilling_force_n = 0.0;
        s.model.gravity_m_s2 = 0.0;
        s.fatigue_curve.duration_s = 10.0;
        for c in fatigue_curves(&s).unwrap() {
            assert_eq!(c.load, 0.0);
            assert!(c.met_s.is_infinite());
            assert!(c.samples.iter().all(|&(_, v)| v == c.gamma_max));
        }
    }

    #[test]
    fn two_step_sweep_has_two_rows() {
        let mut s = DrillingScenario::default();
        s.sweep.steps = 2;
        s.sweep.d_max_m = 0.6;
        assert_eq!(cmd_sweep(&s, false).unwrap().rows.len(), 2);
    }
}
