//! The fuselage drilling case study: configuration, task loads and the
//! figure-style tables produced by the command-line driver.

mod commands;
mod table;

use std::path::{Path, PathBuf};

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::body_model::{arm, build_arm_chain, derive_segments, ArmConfig, BodyParams, JointOverride, KinematicChain};
use crate::capacity::{CapacityState, StrengthModel, StrengthSurface, DEFAULT_FATIGUE_RATE, DEFAULT_RECOVERY_RATE};
use crate::error::{Error, Result};
use crate::kinematics::Posture;
use crate::objectives::{DiscomfortParams, FatigueMeasureParams, DEFAULT_DISCOMFORT_G};
use crate::optimizer::{PostureProblem, Weights, DEFAULT_DISCOMFORT_CAP};
use crate::statics::{static_joint_torques, ExternalWrench, JointTorques};
use crate::STANDARD_GRAVITY;

pub use commands::{
    cmd_fatigue_curve, cmd_pareto, cmd_predict, cmd_sweep, cmd_work_rest, fatigue_curves, fatigued_capacity,
    pareto_selections, FatigueCurve, PARETO_SLOPES,
};
pub use table::{format_number, Cell, Table};

/// Version of the configuration schema this build reads.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BodyConfig {
    pub stature_m: f64,
    pub mass_kg: f64,
    pub joints: Vec<JointOverride>,
    pub grip_offset_m: f64,
}

impl Default for BodyConfig {
    fn default() -> Self {
        let body = BodyParams::default();
        BodyConfig {
            stature_m: body.stature_m,
            mass_kg: body.mass_kg,
            joints: Vec::new(),
            grip_offset_m: ArmConfig::default().grip_offset_m,
        }
    }
}

impl BodyConfig {
    pub fn params(&self) -> Result<BodyParams> {
        BodyParams::new(self.stature_m, self.mass_kg)
    }

    pub fn arm(&self) -> ArmConfig {
        ArmConfig { joints: self.joints.clone(), grip_offset_m: self.grip_offset_m }
    }
}

/// One joint's strength table as stored on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceConfig {
    pub name: String,
    /// Joints indexing rows and columns.
    pub axes: [String; 2],
    pub rows_deg: Vec<f64>,
    pub cols_deg: Vec<f64>,
    pub values_nm: Vec<Vec<f64>>,
}

/// Strength tables file: `{ "joints": [SurfaceConfig, ...] }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrengthFile {
    pub joints: Vec<SurfaceConfig>,
}

impl StrengthFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Surfaces in chain order; every chain joint needs exactly one table.
    pub fn to_model(&self, chain: &KinematicChain, population_scale: f64) -> Result<StrengthModel> {
        let index = |name: &str| {
            chain.joint_index(name).ok_or_else(|| Error::Config(format!("strength table names unknown joint '{name}'")))
        };
        let mut surfaces: Vec<Option<StrengthSurface>> = vec![None; chain.dof()];
        for s in &self.joints {
            let i = index(&s.name)?;
            if surfaces[i].is_some() {
                return Err(Error::Config(format!("duplicate strength table for '{}'", s.name)));
            }
            let axes = [index(&s.axes[0])?, index(&s.axes[1])?];
            surfaces[i] = Some(
                StrengthSurface::new(axes, s.rows_deg.clone(), s.cols_deg.clone(), s.values_nm.clone())
                    .map_err(|e| Error::Config(format!("strength table '{}': {e}", s.name)))?,
            );
        }
        let surfaces = surfaces
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.ok_or_else(|| Error::Config(format!("no strength table for '{}'", chain.joints[i].name))))
            .collect::<Result<Vec<_>>>()?;
        StrengthModel::new(surfaces, population_scale)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StrengthConfig {
    /// Percentile factor on every table.
    pub population_scale: f64,
    /// Strength tables file, relative to the configuration file.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
    /// Inline tables; used when no file is given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub joints: Option<Vec<SurfaceConfig>>,
}

impl Default for StrengthConfig {
    fn default() -> Self {
        StrengthConfig { population_scale: 1.0, file: None, joints: None }
    }
}

/// Angles of the joints that planar reach leaves alone [deg].
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PinnedJoints {
    pub shoulder_abduction: f64,
    pub upper_arm_rotation: f64,
    pub forearm_rotation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TaskConfig {
    pub tool_mass_kg: f64,
    pub drilling_force_n: f64,
    /// Direction the drill is pushed, world frame (x forward, z up).
    pub drill_axis: [f64; 3],
    /// The tool is held with both hands, each arm takes half the load.
    pub two_handed: bool,
    /// Hole height below the shoulder [m].
    pub hole_drop_m: f64,
    pub pinned_deg: PinnedJoints,
    /// Shoulder and elbow flexion of the fixed-posture analyses [deg].
    pub analysis_posture_deg: [f64; 2],
    pub work_s: f64,
    pub rest_s: f64,
    pub cycles: usize,
    pub sample_s: f64,
}

impl Default for TaskConfig {
    fn default() -> Self {
        TaskConfig {
            tool_mass_kg: 5.0,
            drilling_force_n: 49.0,
            drill_axis: [1.0, 0.0, 0.0],
            two_handed: true,
            hole_drop_m: 0.0,
            pinned_deg: PinnedJoints::default(),
            analysis_posture_deg: [30.0, 90.0],
            work_s: 30.0,
            rest_s: 60.0,
            cycles: 10,
            sample_s: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub d_min_m: f64,
    pub d_max_m: f64,
    pub steps: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { d_min_m: 0.4, d_max_m: 0.7, steps: 61 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelConfig {
    pub fatigue_exponent: f64,
    pub fatigue_rate_per_min: f64,
    pub recovery_rate_per_min: f64,
    pub gravity_m_s2: f64,
    pub discomfort_g: f64,
    pub discomfort_cap: f64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            fatigue_exponent: FatigueMeasureParams::default().exponent,
            fatigue_rate_per_min: DEFAULT_FATIGUE_RATE,
            recovery_rate_per_min: DEFAULT_RECOVERY_RATE,
            gravity_m_s2: STANDARD_GRAVITY,
            discomfort_g: DEFAULT_DISCOMFORT_G,
            discomfort_cap: DEFAULT_DISCOMFORT_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FatigueCurveConfig {
    /// Population maxima to plot [N·m].
    pub gamma_max_nm: Vec<f64>,
    pub duration_s: f64,
    pub sample_s: f64,
    /// Joint whose load drives the curves.
    pub joint: String,
}

impl Default for FatigueCurveConfig {
    fn default() -> Self {
        FatigueCurveConfig {
            gamma_max_nm: vec![40.0, 70.0, 110.0],
            duration_s: 600.0,
            sample_s: 1.0,
            joint: arm::NAMES[arm::SHOULDER_FLEXION].to_string(),
        }
    }
}

/// Complete drilling-task configuration. Every field has a default, so
/// `{}` is a valid configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DrillingScenario {
    pub schema_version: u32,
    pub body: BodyConfig,
    pub strength: StrengthConfig,
    pub task: TaskConfig,
    pub sweep: SweepConfig,
    /// `[discomfort, fatigue]`.
    pub weights: [f64; 2],
    pub model: ModelConfig,
    pub fatigue_curve: FatigueCurveConfig,
    /// Directory that relative paths resolve against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl Default for DrillingScenario {
    fn default() -> Self {
        DrillingScenario {
            schema_version: SCHEMA_VERSION,
            body: BodyConfig::default(),
            strength: StrengthConfig::default(),
            task: TaskConfig::default(),
            sweep: SweepConfig::default(),
            weights: [0.5, 0.5],
            model: ModelConfig::default(),
            fatigue_curve: FatigueCurveConfig::default(),
            base_dir: PathBuf::new(),
        }
    }
}

impl DrillingScenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let s: DrillingScenario = serde_json::from_str(text)?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut s = Self::from_json(&text)?;
        s.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let cfg = |m: String| Err(Error::Config(m));
        if self.schema_version != SCHEMA_VERSION {
            return cfg(format!("unsupported schema_version {}, expected {SCHEMA_VERSION}", self.schema_version));
        }
        let t = &self.task;
        for (name, v) in [
            ("tool_mass_kg", t.tool_mass_kg),
            ("drilling_force_n", t.drilling_force_n),
            ("work_s", t.work_s),
            ("rest_s", t.rest_s),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return cfg(format!("task.{name} must be a non-negative number"));
            }
        }
        if !(t.sample_s > 0.0) || t.cycles == 0 {
            return cfg("task.sample_s must be positive and task.cycles at least 1".into());
        }
        if !(self.sweep.d_min_m < self.sweep.d_max_m) || self.sweep.steps < 2 {
            return cfg("sweep range must be ordered with at least 2 steps".into());
        }
        Weights::new(self.weights[0], self.weights[1]).map_err(|e| Error::Config(e.to_string()))?;
        if self.drill_axis().is_none() {
            return cfg("task.drill_axis must be a non-zero vector".into());
        }
        let m = &self.model;
        if !(m.fatigue_exponent > 0.0 && m.fatigue_rate_per_min > 0.0 && m.recovery_rate_per_min > 0.0) {
            return cfg("model exponents and rates must be positive".into());
        }
        if !(m.gravity_m_s2 >= 0.0 && m.discomfort_g > 0.0 && m.discomfort_cap > 0.0) {
            return cfg("model.gravity_m_s2, discomfort_g and discomfort_cap must be positive".into());
        }
        let fc = &self.fatigue_curve;
        if fc.gamma_max_nm.is_empty() || fc.gamma_max_nm.iter().any(|&g| !(g > 0.0)) {
            return cfg("fatigue_curve.gamma_max_nm must list positive strengths".into());
        }
        if !(fc.duration_s > 0.0 && fc.sample_s > 0.0) {
            return cfg("fatigue_curve durations must be positive".into());
        }
        self.body.params().map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }

    fn drill_axis(&self) -> Option<Vector3<f64>> {
        let v = Vector3::from(self.task.drill_axis);
        let n = v.norm();
        (n.is_finite() && n > 0.0).then(|| v / n)
    }

    pub fn weights(&self) -> Weights {
        Weights { discomfort: self.weights[0], fatigue: self.weights[1] }
    }

    pub fn range(&self) -> (f64, f64) {
        (self.sweep.d_min_m, self.sweep.d_max_m)
    }

    pub fn chain(&self) -> Result<KinematicChain> {
        build_arm_chain(self.body.params()?, &self.body.arm())
    }

    pub fn strength_model(&self, chain: &KinematicChain) -> Result<StrengthModel> {
        let scale = self.strength.population_scale;
        let model = if let Some(file) = &self.strength.file {
            StrengthFile::load(&self.base_dir.join(file))?.to_model(chain, scale)?
        } else if let Some(joints) = &self.strength.joints {
            StrengthFile { joints: joints.clone() }.to_model(chain, scale)?
        } else {
            StrengthModel::new(StrengthModel::default_arm().surfaces, scale)?
        };
        model.check_chain(chain)?;
        Ok(model)
    }

    pub fn pinned(&self) -> Posture {
        let p = self.task.pinned_deg;
        Posture::from_degrees(&[0.0, p.shoulder_abduction, p.upper_arm_rotation, 0.0, p.forearm_rotation])
    }

    /// Posture used by the fixed-posture analyses.
    pub fn analysis_posture(&self) -> Posture {
        let mut q = self.pinned();
        q[arm::SHOULDER_FLEXION] = self.task.analysis_posture_deg[0].to_radians();
        q[arm::ELBOW_FLEXION] = self.task.analysis_posture_deg[1].to_radians();
        q
    }

    pub fn problem(&self) -> Result<PostureProblem> {
        let chain = self.chain()?;
        let strength = self.strength_model(&chain)?;
        let mut discomfort = DiscomfortParams::from_chain(&chain);
        discomfort.g = self.model.discomfort_g;
        Ok(PostureProblem {
            segments: derive_segments(self.body.params()?)?,
            strength,
            wrench: build_wrench(self),
            drop: self.task.hole_drop_m,
            pinned: self.pinned(),
            discomfort,
            fatigue: FatigueMeasureParams { exponent: self.model.fatigue_exponent },
            gravity: self.model.gravity_m_s2,
            discomfort_cap: self.model.discomfort_cap,
            chain,
        })
    }

    /// Fully rested capacity.
    pub fn fresh_capacity(&self, problem: &PostureProblem) -> Result<CapacityState> {
        problem.fresh_capacity(self.model.fatigue_rate_per_min, self.model.recovery_rate_per_min)
    }

    /// Static torques at the analysis posture.
    pub fn analysis_torques(&self, problem: &PostureProblem) -> Result<JointTorques> {
        static_joint_torques(&problem.chain, &problem.segments, &self.analysis_posture(), &problem.wrench, problem.gravity)
    }
}

/// Load on one hand at the grasp point.
///
/// The tool's weight pulls the hand down, and pushing the drill along
/// `drill_axis` loads the hand with the opposite reaction. With two hands
/// each arm takes half.
pub fn build_wrench(scenario: &DrillingScenario) -> ExternalWrench {
    let g = scenario.model.gravity_m_s2;
    let axis = scenario.drill_axis().unwrap_or_else(Vector3::x);
    let weight = Vector3::new(0.0, 0.0, -scenario.task.tool_mass_kg * g);
    let reaction = -axis * scenario.task.drilling_force_n;
    let share = if scenario.task.two_handed { 0.5 } else { 1.0 };
    ExternalWrench::force((weight + reaction) * share)
}
