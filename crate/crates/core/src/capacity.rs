//! Joint strength and its evolution under load and rest.
//!
//! Capacity decays as `dC/dt = -k·(C/C_max)·L` while a joint holds a load
//! `L` and recovers as `dC/dt = R·(C_max - C)` at rest. Both are linear in
//! `C` for a constant load, so every step below uses the exact exponential
//! solution. Times are in minutes.

use serde::{Deserialize, Serialize};

use crate::body_model::{arm, KinematicChain};
use crate::error::{Error, Result};
use crate::kinematics::Posture;

/// Default fatigue rate [1/min].
pub const DEFAULT_FATIGUE_RATE: f64 = 1.0;
/// Default recovery rate [1/min].
pub const DEFAULT_RECOVERY_RATE: f64 = 2.4;

/// Maximum strength of one joint over a grid of two joint angles.
///
/// `values[r][c]` is the strength [N·m] at `rows_deg[r]` of joint
/// `axes[0]` and `cols_deg[c]` of joint `axes[1]`. Grids may have a single
/// node along either axis. Queries outside the grid are clamped.
#[derive(Debug, Clone, PartialEq)]
pub struct StrengthSurface {
    pub axes: [usize; 2],
    pub rows_deg: Vec<f64>,
    pub cols_deg: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl StrengthSurface {
    pub fn new(axes: [usize; 2], rows_deg: Vec<f64>, cols_deg: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        let s = StrengthSurface { axes, rows_deg, cols_deg, values };
        s.validate()?;
        Ok(s)
    }

    /// Same strength everywhere.
    pub fn constant(value: f64) -> Self {
        StrengthSurface {
            axes: [arm::SHOULDER_FLEXION, arm::ELBOW_FLEXION],
            rows_deg: vec![0.0],
            cols_deg: vec![0.0],
            values: vec![vec![value]],
        }
    }

    fn validate(&self) -> Result<()> {
        if self.rows_deg.is_empty() || self.cols_deg.is_empty() {
            return Err(Error::Config("strength table has an empty axis".into()));
        }
        if self.values.len() != self.rows_deg.len() || self.values.iter().any(|r| r.len() != self.cols_deg.len()) {
            return Err(Error::Config("strength table shape does not match its axes".into()));
        }
        let increasing = |v: &[f64]| v.windows(2).all(|w| w[0] < w[1]) && v.iter().all(|x| x.is_finite());
        if !increasing(&self.rows_deg) || !increasing(&self.cols_deg) {
            return Err(Error::Config("strength table axes must be finite and strictly increasing".into()));
        }
        if self.values.iter().flatten().any(|&v| !(v.is_finite() && v > 0.0)) {
            return Err(Error::Config("strength values must be positive".into()));
        }
        Ok(())
    }

    /// Bilinear interpolation at the given angles [deg].
    pub fn eval(&self, row_deg: f64, col_deg: f64) -> f64 {
        let (r0, r1, tr) = bracket(&self.rows_deg, row_deg);
        let (c0, c1, tc) = bracket(&self.cols_deg, col_deg);
        let v = &self.values;
        let top = v[r0][c0] * (1.0 - tc) + v[r0][c1] * tc;
        let bottom = v[r1][c0] * (1.0 - tc) + v[r1][c1] * tc;
        top * (1.0 - tr) + bottom * tr
    }
}

/// Cell indices and fractional position of `x` in a sorted grid, clamped.
fn bracket(grid: &[f64], x: f64) -> (usize, usize, f64) {
    let last = grid.len() - 1;
    if last == 0 || x <= grid[0] {
        return (0, 0, 0.0);
    }
    if x >= grid[last] {
        return (last, last, 0.0);
    }
    let hi = grid.partition_point(|&g| g <= x).min(last);
    let lo = hi - 1;
    (lo, hi, (x - grid[lo]) / (grid[hi] - grid[lo]))
}

/// Posture-dependent maximum strength for every joint of a chain.
#[derive(Debug, Clone, PartialEq)]
pub struct StrengthModel {
    /// One surface per chain joint, in chain order.
    pub surfaces: Vec<StrengthSurface>,
    /// Percentile factor applied to every surface.
    pub population_scale: f64,
}

impl StrengthModel {
    pub fn new(surfaces: Vec<StrengthSurface>, population_scale: f64) -> Result<Self> {
        if surfaces.is_empty() {
            return Err(Error::Config("strength model has no surfaces".into()));
        }
        for s in &surfaces {
            s.validate()?;
        }
        if !(population_scale.is_finite() && population_scale > 0.0) {
            return Err(Error::Config("population scale must be positive".into()));
        }
        Ok(StrengthModel { surfaces, population_scale })
    }

    /// Synthetic median-adult tables for the five-joint arm.
    ///
    /// These are placeholders shaped after published trends, not measured
    /// data: shoulder flexion strength falls from 80 to 48 N·m as the arm
    /// rises (70 N·m at 30° flexion), elbow flexion strength spans 40 to
    /// 72 N·m with its peak near 90° of elbow flexion.
    pub fn default_arm() -> Self {
        let shoulder = StrengthSurface {
            axes: [arm::SHOULDER_FLEXION, arm::ELBOW_FLEXION],
            rows_deg: vec![-60.0, 0.0, 30.0, 60.0, 90.0, 120.0, 180.0],
            cols_deg: vec![90.0],
            values: [80.0, 76.0, 70.0, 64.0, 58.0, 54.0, 48.0].iter().map(|&v| vec![v]).collect(),
        };
        let elbow = StrengthSurface {
            axes: [arm::SHOULDER_FLEXION, arm::ELBOW_FLEXION],
            rows_deg: vec![0.0, 90.0, 180.0],
            cols_deg: vec![0.0, 45.0, 90.0, 145.0],
            values: vec![
                vec![42.0, 60.0, 72.0, 64.0],
                vec![41.0, 58.5, 70.0, 62.0],
                vec![40.0, 56.0, 67.0, 60.0],
            ],
        };
        StrengthModel {
            surfaces: vec![
                shoulder,
                StrengthSurface::constant(60.0),
                StrengthSurface::constant(30.0),
                elbow,
                StrengthSurface::constant(12.0),
            ],
            population_scale: 1.0,
        }
    }

    pub fn with_scale(&self, population_scale: f64) -> Self {
        StrengthModel { population_scale, ..self.clone() }
    }

    pub fn check_chain(&self, chain: &KinematicChain) -> Result<()> {
        if self.surfaces.len() != chain.dof() {
            return Err(Error::Config(format!(
                "strength model has {} surfaces for {} joints",
                self.surfaces.len(),
                chain.dof()
            )));
        }
        if self.surfaces.iter().any(|s| s.axes.iter().any(|&a| a >= chain.dof())) {
            return Err(Error::Config("strength surface refers to a missing joint".into()));
        }
        Ok(())
    }

    /// Maximum strength of each joint at this posture [N·m].
    pub fn strength_at(&self, posture: &Posture) -> Result<Vec<f64>> {
        if self.surfaces.is_empty() {
            return Err(Error::Config("strength model has no surfaces".into()));
        }
        self.surfaces
            .iter()
            .map(|s| {
                let angle = |i: usize| {
                    posture
                        .get(i)
                        .map(|q| q.to_degrees())
                        .ok_or_else(|| Error::param(format!("posture lacks joint {i}")))
                };
                Ok(s.eval(angle(s.axes[0])?, angle(s.axes[1])?) * self.population_scale)
            })
            .collect()
    }
}

/// Current and maximum torque capacity of every joint.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityState {
    /// Current capacity [N·m].
    pub current: Vec<f64>,
    /// Posture-evaluated maximum [N·m].
    pub max: Vec<f64>,
    /// Fatigue rate [1/min].
    pub fatigue_rate: f64,
    /// Recovery rate [1/min].
    pub recovery_rate: f64,
    /// Time since the state was fresh [min].
    pub elapsed: f64,
}

impl CapacityState {
    /// Fully rested state at the given maxima.
    pub fn fresh(max: Vec<f64>, fatigue_rate: f64, recovery_rate: f64) -> Result<Self> {
        let s = CapacityState { current: max.clone(), max, fatigue_rate, recovery_rate, elapsed: 0.0 };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.current.len() != self.max.len() {
            return Err(Error::InvalidState("capacity vectors differ in length".into()));
        }
        for (i, (&c, &m)) in self.current.iter().zip(&self.max).enumerate() {
            if !(c > 0.0 && c <= m && m.is_finite()) {
                return Err(Error::InvalidState(format!("joint {i}: capacity {c} outside (0, {m}]")));
            }
        }
        if !(self.fatigue_rate > 0.0 && self.recovery_rate > 0.0) {
            return Err(Error::InvalidState("fatigue and recovery rates must be positive".into()));
        }
        Ok(())
    }

    pub fn dof(&self) -> usize {
        self.current.len()
    }

    /// Remaining fraction `current / max` per joint.
    pub fn fullness(&self) -> Vec<f64> {
        self.current.iter().zip(&self.max).map(|(c, m)| c / m).collect()
    }

    /// The same fatigue level carried over to a posture with other maxima.
    pub fn at_maxima(&self, max: Vec<f64>) -> Result<Self> {
        if max.len() != self.dof() {
            return Err(Error::param("maxima length does not match the capacity state"));
        }
        let current = self.fullness().iter().zip(&max).map(|(f, m)| f * m).collect();
        let s = CapacityState { current, max, ..self.clone() };
        s.validate()?;
        Ok(s)
    }

    /// Holds `load` [N·m per joint] for `dt` minutes.
    pub fn fatigue_step(&self, load: &[f64], dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::param(format!("time step must be positive, got {dt}")));
        }
        if load.len() != self.dof() {
            return Err(Error::param("load vector length does not match the capacity state"));
        }
        if let Some(l) = load.iter().find(|l| !(**l >= 0.0 && l.is_finite())) {
            return Err(Error::param(format!("joint load must be non-negative, got {l}")));
        }
        let current = self
            .current
            .iter()
            .zip(&self.max)
            .zip(load)
            .map(|((&c, &m), &l)| c * (-self.fatigue_rate * l * dt / m).exp())
            .collect();
        Ok(CapacityState { current, elapsed: self.elapsed + dt, ..self.clone() })
    }

    /// Rests for `dt` minutes.
    pub fn recovery_step(&self, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::param(format!("time step must be positive, got {dt}")));
        }
        let decay = (-self.recovery_rate * dt).exp();
        let current = self.current.iter().zip(&self.max).map(|(&c, &m)| m - (m - c) * decay).collect();
        Ok(CapacityState { current, elapsed: self.elapsed + dt, ..self.clone() })
    }
}

/// Maximum endurance time [min]: when capacity decays to the load.
///
/// Zero if the load already meets the maximum; infinite for no load.
pub fn met(max: f64, load: f64, fatigue_rate: f64) -> f64 {
    if load <= 0.0 {
        f64::INFINITY
    } else if load >= max {
        0.0
    } else {
        max / (fatigue_rate * load) * (max / load).ln()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Work,
    Rest,
}

impl Phase {
    pub fn label(&self) -> &'static str {
        match self {
            Phase::Work => "work",
            Phase::Rest => "rest",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacitySample {
    /// [min]
    pub time: f64,
    pub phase: Phase,
    pub current: Vec<f64>,
}

/// Capacity at the end of each work and rest phase of one cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleEnd {
    pub after_work: CapacityState,
    pub after_rest: CapacityState,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorkRestSeries {
    pub samples: Vec<CapacitySample>,
    pub cycles: Vec<CycleEnd>,
}

/// Alternates `work` minutes under `load` with `rest` minutes of recovery.
///
/// Samples are taken every `sample_dt` minutes inside each phase and at
/// every phase end, each computed in closed form from the phase start.
pub fn simulate_work_rest(
    state: &CapacityState,
    load: &[f64],
    work: f64,
    rest: f64,
    cycles: usize,
    sample_dt: f64,
) -> Result<WorkRestSeries> {
    if !(work >= 0.0 && rest >= 0.0 && work.is_finite() && rest.is_finite()) {
        return Err(Error::param("work and rest durations must be non-negative"));
    }
    if cycles == 0 {
        return Err(Error::param("at least one cycle is required"));
    }
    if !(sample_dt > 0.0 && sample_dt.is_finite()) {
        return Err(Error::param("sample interval must be positive"));
    }
    state.validate()?;
    if load.len() != state.dof() {
        return Err(Error::param("load vector length does not match the capacity state"));
    }

    let first_phase = if work > 0.0 { Phase::Work } else { Phase::Rest };
    let mut samples = vec![CapacitySample { time: 0.0, phase: first_phase, current: state.current.clone() }];
    let mut ends = Vec::with_capacity(cycles);
    let mut start = state.clone();
    let mut t0 = 0.0;

    let run_phase = |from: &CapacityState, t0: f64, len: f64, phase: Phase, samples: &mut Vec<CapacitySample>| -> Result<CapacityState> {
        if len == 0.0 {
            return Ok(from.clone());
        }
        let advance = |dt: f64| match phase {
            Phase::Work => from.fatigue_step(load, dt),
            Phase::Rest => from.recovery_step(dt),
        };
        let interior = (len / sample_dt).ceil() as usize;
        for j in 1..interior {
            let dt = j as f64 * sample_dt;
            if dt >= len {
                break;
            }
            samples.push(CapacitySample { time: t0 + dt, phase, current: advance(dt)?.current });
        }
        let end = advance(len)?;
        samples.push(CapacitySample { time: t0 + len, phase, current: end.current.clone() });
        Ok(end)
    };

    for _ in 0..cycles {
        let after_work = run_phase(&start, t0, work, Phase::Work, &mut samples)?;
        t0 += work;
        let after_rest = run_phase(&after_work, t0, rest, Phase::Rest, &mut samples)?;
        t0 += rest;
        start = after_rest.clone();
        ends.push(CycleEnd { after_work, after_rest });
    }
    Ok(WorkRestSeries { samples, cycles: ends })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn one(max: f64, cur: f64) -> CapacityState {
        CapacityState { current: vec![cur], max: vec![max], fatigue_rate: 1.0, recovery_rate: 2.4, elapsed: 0.0 }
    }

    /// Classical RK4 on dC/dt = f(C), used as an independent oracle.
    fn rk4(mut c: f64, f: impl Fn(f64) -> f64, dt: f64, steps: usize) -> f64 {
        for _ in 0..steps {
            let k1 = f(c);
            let k2 = f(c + 0.5 * dt * k1);
            let k3 = f(c + 0.5 * dt * k2);
            let k4 = f(c + dt * k3);
            c += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        c
    }

    #[test]
    fn fatigue_closed_form_value() {
        let s = one(70.0, 70.0).fatigue_step(&[35.0], 1.0).unwrap();
        assert_relative_eq!(s.current[0], 70.0 * (-0.5f64).exp(), epsilon = 1e-12);
        assert_relative_eq!(s.current[0], 42.4571, epsilon = 1e-4);
        assert_eq!(s.elapsed, 1.0);
    }

    #[test]
    fn zero_load_leaves_capacity() {
        let s = one(70.0, 50.0);
        assert_eq!(s.fatigue_step(&[0.0], 3.0).unwrap().current, s.current);
    }

    #[test]
    fn fatigue_semigroup() {
        let s = one(70.0, 70.0);
        let whole = s.fatigue_step(&[35.0], 1.0).unwrap();
        let halves = s.fatigue_step(&[35.0], 0.5).unwrap().fatigue_step(&[35.0], 0.5).unwrap();
        assert_relative_eq!(whole.current[0], halves.current[0], max_relative = 1e-12);
    }

    #[test]
    fn recovery_closed_form_value() {
        let s = one(100.0, 50.0).recovery_step(1.0).unwrap();
        assert_relative_eq!(s.current[0], 100.0 - 50.0 * (-2.4f64).exp(), epsilon = 1e-12);
        assert_relative_eq!(s.current[0], 95.4641, epsilon = 1e-4);
        assert_eq!(one(100.0, 100.0).recovery_step(5.0).unwrap().current[0], 100.0);
    }

    #[test]
    fn recovery_approaches_max_monotonically() {
        let s = one(100.0, 20.0);
        let mut prev = s.current[0];
        for dt in [0.1, 0.5, 1.0, 2.0, 5.0, 20.0] {
            let c = s.recovery_step(dt).unwrap().current[0];
            assert!(c >= prev && c <= 100.0);
            prev = c;
        }
        assert_relative_eq!(prev, 100.0, epsilon = 1e-12);
    }

    #[test]
    fn bad_steps_are_rejected() {
        let s = one(70.0, 70.0);
        assert!(matches!(s.fatigue_step(&[1.0], 0.0), Err(Error::InvalidParameter(_))));
        assert!(s.fatigue_step(&[-1.0], 1.0).is_err());
        assert!(s.recovery_step(-1.0).is_err());
        assert!(CapacityState::fresh(vec![0.0], 1.0, 2.4).is_err());
    }

    #[test]
    fn closed_forms_match_rk4() {
        for (max, cur, load) in [(70.0, 70.0, 35.0), (110.0, 90.0, 20.0), (40.0, 40.0, 39.0)] {
            let s = one(max, cur);
            let exact = s.fatigue_step(&[load], 10.0).unwrap().current[0];
            let num = rk4(cur, |c| -c / max * load, 1e-3, 10_000);
            assert!(((exact - num) / exact).abs() < 1e-8);

            let exact = s.recovery_step(10.0).unwrap().current[0];
            let num = rk4(cur, |c| 2.4 * (max - c), 1e-3, 10_000);
            assert!(((exact - num) / exact).abs() < 1e-8);
        }
    }

    #[test]
    fn met_closed_form_and_edges() {
        assert_relative_eq!(met(70.0, 35.0, 1.0), 2.0 * 2f64.ln(), epsilon = 1e-12);
        assert_relative_eq!(met(70.0, 35.0, 1.0), 1.3863, epsilon = 1e-4);
        assert_eq!(met(70.0, 70.0, 1.0), 0.0);
        assert_eq!(met(70.0, 80.0, 1.0), 0.0);
        assert!(met(70.0, 0.0, 1.0).is_infinite());
    }

    #[test]
    fn met_matches_stepping_oracle() {
        let (max, load) = (70.0, 35.0);
        let dt = 1e-4;
        let mut s = one(max, max);
        let mut t = 0.0;
        while s.current[0] > load {
            s = s.fatigue_step(&[load], dt).unwrap();
            t += dt;
        }
        assert!((t - met(max, load, 1.0)).abs() <= dt);
    }

    #[test]
    fn met_monotonicity() {
        let mut prev = f64::INFINITY;
        for load in [5.0, 10.0, 20.0, 30.0, 50.0, 69.0] {
            let m = met(70.0, load, 1.0);
            assert!(m < prev);
            prev = m;
        }
        let mut prev = 0.0;
        for max in [21.0, 30.0, 50.0, 70.0, 110.0] {
            let m = met(max, 20.0, 1.0);
            assert!(m > prev);
            prev = m;
        }
    }

    #[test]
    fn weaker_joints_fatigue_faster() {
        // Same load, both fresh: normalized load grows faster for the smaller maximum.
        let load = 20.0;
        let t = 1.0;
        let ratio = |max: f64| load / one(max, max).fatigue_step(&[load], t).unwrap().current[0];
        assert!(ratio(40.0) > ratio(70.0));
        assert!(ratio(70.0) > ratio(110.0));
    }

    #[test]
    fn one_cycle_composes_closed_forms() {
        let s = one(70.0, 70.0);
        let series = simulate_work_rest(&s, &[35.0], 0.5, 1.0, 1, 1.0 / 60.0).unwrap();
        let end = series.cycles[0].after_rest.current[0];
        let expected = 70.0 - (70.0 - 70.0 * (-0.25f64).exp()) * (-2.4f64).exp();
        assert_relative_eq!(end, expected, epsilon = 1e-12);
        assert_relative_eq!(end, 68.5953, epsilon = 1e-4);
        assert_eq!(series.samples.last().unwrap().current[0], end);
        assert_relative_eq!(series.samples.last().unwrap().time, 1.5, epsilon = 1e-12);
        // 30 work samples + 60 rest samples + the initial one.
        assert_eq!(series.samples.len(), 91);
    }

    #[test]
    fn pure_rest_is_nondecreasing() {
        let s = one(70.0, 30.0);
        let series = simulate_work_rest(&s, &[35.0], 0.0, 1.0, 3, 0.01).unwrap();
        assert!(series.samples.windows(2).all(|w| w[1].current[0] >= w[0].current[0]));
        assert!(series.samples.iter().all(|x| x.phase == Phase::Rest));
    }

    #[test]
    fn cycles_lose_capacity() {
        let s = one(70.0, 70.0);
        let series = simulate_work_rest(&s, &[20.0], 0.5, 1.0, 10, 1.0 / 60.0).unwrap();
        let mut prev = 70.0;
        for c in &series.cycles {
            assert!(c.after_rest.current[0] < prev);
            prev = c.after_rest.current[0];
        }
    }

    #[test]
    fn no_rest_equals_continuous_work() {
        let s = one(70.0, 70.0);
        let series = simulate_work_rest(&s, &[20.0], 0.5, 0.0, 4, 0.1).unwrap();
        let direct = s.fatigue_step(&[20.0], 2.0).unwrap();
        assert_relative_eq!(series.cycles[3].after_rest.current[0], direct.current[0], max_relative = 1e-12);
    }

    #[test]
    fn work_rest_argument_checks() {
        let s = one(70.0, 70.0);
        assert!(simulate_work_rest(&s, &[1.0], -1.0, 1.0, 1, 0.1).is_err());
        assert!(simulate_work_rest(&s, &[1.0], 1.0, 1.0, 0, 0.1).is_err());
        assert!(simulate_work_rest(&s, &[1.0, 2.0], 1.0, 1.0, 1, 0.1).is_err());
    }

    #[test]
    fn interpolation_identities() {
        let s = StrengthSurface::new([0, 3], vec![0.0, 10.0], vec![0.0, 20.0], vec![vec![40.0, 60.0], vec![80.0, 100.0]]).unwrap();
        assert_eq!(s.eval(0.0, 20.0), 60.0);
        assert_eq!(s.eval(10.0, 0.0), 80.0);
        assert_relative_eq!(s.eval(5.0, 10.0), 70.0, epsilon = 1e-12);
        assert_relative_eq!(s.eval(2.5, 5.0), 40.0 + 0.25 * 40.0 + 0.25 * 20.0, epsilon = 1e-12);
        // Clamped outside the grid.
        assert_eq!(s.eval(-50.0, 500.0), 60.0);
    }

    #[test]
    fn strength_model_scaling_and_errors() {
        let m = StrengthModel::default_arm();
        let q = Posture::from_degrees(&[30.0, 0.0, 0.0, 90.0, 0.0]);
        let full = m.strength_at(&q).unwrap();
        assert_relative_eq!(full[0], 70.0, epsilon = 1e-12);
        assert_relative_eq!(full[3], 72.0 - (72.0 - 70.0) / 3.0, epsilon = 1e-12);
        let half = m.with_scale(0.5).strength_at(&q).unwrap();
        for (a, b) in full.iter().zip(&half) {
            assert_relative_eq!(*b, 0.5 * a, epsilon = 1e-12);
        }
        assert!(StrengthModel::new(vec![], 1.0).is_err());
        assert!(StrengthSurface::new([0, 3], vec![], vec![0.0], vec![]).is_err());
        assert!(StrengthSurface::new([0, 3], vec![0.0], vec![0.0], vec![vec![-1.0]]).is_err());
    }

    #[test]
    fn default_elbow_surface_in_band() {
        let m = StrengthModel::default_arm();
        assert!(m.surfaces[arm::ELBOW_FLEXION].values.iter().flatten().all(|&v| (40.0..=120.0).contains(&v)));
    }

    #[test]
    fn carried_fatigue_keeps_fullness() {
        let s = CapacityState::fresh(vec![70.0, 50.0], 1.0, 2.4).unwrap().fatigue_step(&[20.0, 5.0], 0.5).unwrap();
        let moved = s.at_maxima(vec![60.0, 55.0]).unwrap();
        for (a, b) in s.fullness().iter().zip(moved.fullness()) {
            assert_relative_eq!(*a, b, epsilon = 1e-12);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn fatigue_strictly_decreases_and_stays_positive(max in 10.0f64..150.0, frac in 0.05f64..0.95, dt in 1e-3f64..30.0) {
                let load = frac * max;
                let s = one(max, max).fatigue_step(&[load], dt).unwrap();
                prop_assert!(s.current[0] < max);
                prop_assert!(s.current[0] > 0.0);
            }

            #[test]
            fn recovery_bounded(max in 10.0f64..150.0, frac in 0.01f64..0.99, dt in 1e-3f64..5.0) {
                let cur = frac * max;
                let s = one(max, cur).recovery_step(dt).unwrap();
                prop_assert!(s.current[0] > cur);
                prop_assert!(s.current[0] <= max);
            }
        }
    }
}
