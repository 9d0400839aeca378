//! Fatigue-aware posture analysis and prediction.
//!
//! A limb is described as a chain of revolute joints in modified
//! Denavit-Hartenberg form. Static joint torques under gravity and a tool
//! wrench drive a per-joint capacity model (exponential fatigue and
//! recovery), and candidate postures are ranked on two objectives:
//! normalized-torque fatigue and joint-limit discomfort. The drilling
//! case study in [`scenario`] ties everything together.

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod body_model;
pub mod capacity;
pub mod error;
pub mod kinematics;
pub mod objectives;
pub mod optimizer;
pub mod scenario;
pub mod statics;

pub use body_model::{
    build_arm_chain, derive_segments, ArmConfig, BodyParams, DhParams, JointOverride, JointSpec,
    KinematicChain, LinkMount, Segment, SegmentSet,
};
pub use capacity::{
    met, simulate_work_rest, CapacitySample, CapacityState, Phase, StrengthModel,
    StrengthSurface, WorkRestSeries,
};
pub use error::{Error, Result};
pub use kinematics::{forward_kinematics, jacobian, planar_ik, Pose, Posture};
pub use objectives::{
    discomfort_measure, fatigue_measure, limit_penalties, DiscomfortParams, FatigueMeasureParams,
    ObjectivePoint,
};
pub use optimizer::{
    check_feasibility, distance_grid, pareto_filter, predict_posture, scalarize, select,
    sweep_distance, Candidate, FeasibilityReport, Normalizers, ParetoSet, PostureProblem,
    Prediction, Weights,
};
pub use scenario::{build_wrench, DrillingScenario, Table};
pub use statics::{
    gravity_torques, load_torques, static_joint_torques, ExternalWrench, JointTorques,
};

/// Version of this library.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Standard gravitational acceleration [m/s²].
pub const STANDARD_GRAVITY: f64 = 9.81;
