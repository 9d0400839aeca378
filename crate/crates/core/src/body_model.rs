//! Articulated-body description and anthropometric segment parameters.
//!
//! Segments are modelled as uniform-density cylinders whose length, radius
//! and mass scale with stature and body mass.

use nalgebra::{Isometry3, Matrix3, Translation3, UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Forearm length as a fraction of stature.
pub const FOREARM_LENGTH_RATIO: f64 = 0.146;
/// Upper-arm length as a fraction of stature.
pub const UPPER_ARM_LENGTH_RATIO: f64 = 0.186;
/// Segment radius as a fraction of segment length.
pub const RADIUS_RATIO: f64 = 0.125;
/// Whole-arm mass as a fraction of body mass.
pub const ARM_MASS_RATIO: f64 = 0.051;
/// Share of the arm mass carried by the forearm (hand included).
pub const FOREARM_MASS_SHARE: f64 = 0.451;
/// Share of the arm mass carried by the upper arm.
pub const UPPER_ARM_MASS_SHARE: f64 = 0.549;

/// Default distance from the wrist to the tool grip point [m].
pub const DEFAULT_GRIP_OFFSET: f64 = 0.10;

/// Stature and body mass of the modelled person.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BodyParams {
    pub stature_m: f64,
    pub mass_kg: f64,
}

impl BodyParams {
    pub fn new(stature_m: f64, mass_kg: f64) -> Result<Self> {
        let body = BodyParams { stature_m, mass_kg };
        body.validate()?;
        Ok(body)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.stature_m.is_finite() && self.stature_m > 0.0) {
            return Err(Error::param(format!("stature must be positive, got {}", self.stature_m)));
        }
        if !(self.mass_kg.is_finite() && self.mass_kg > 0.0) {
            return Err(Error::param(format!("body mass must be positive, got {}", self.mass_kg)));
        }
        Ok(())
    }
}

impl Default for BodyParams {
    fn default() -> Self {
        BodyParams { stature_m: 1.75, mass_kg: 70.0 }
    }
}

/// A rigid body segment approximated as a solid cylinder.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub name: String,
    /// Length along the long axis [m].
    pub length: f64,
    /// Cylinder radius [m].
    pub radius: f64,
    /// Mass [kg].
    pub mass: f64,
    /// Distance from the proximal joint to the mass centre [m].
    pub com_offset: f64,
    /// Inertia about the mass centre, long axis last [kg·m²].
    pub inertia: Matrix3<f64>,
}

impl Segment {
    /// Uniform cylinder of the given length, radius and mass.
    pub fn cylinder(name: &str, length: f64, radius: f64, mass: f64) -> Self {
        let transverse = mass * radius * radius / 4.0 + mass * length * length / 12.0;
        let axial = mass * radius * radius / 2.0;
        Segment {
            name: name.to_string(),
            length,
            radius,
            mass,
            com_offset: length / 2.0,
            inertia: Matrix3::from_diagonal(&Vector3::new(transverse, transverse, axial)),
        }
    }
}

/// Ordered segment list; index `k` rides on `KinematicChain::links[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentSet {
    pub segments: Vec<Segment>,
}

impl SegmentSet {
    pub const UPPER_ARM: usize = 0;
    pub const FOREARM: usize = 1;

    pub fn upper_arm(&self) -> &Segment {
        &self.segments[Self::UPPER_ARM]
    }

    pub fn forearm(&self) -> &Segment {
        &self.segments[Self::FOREARM]
    }

    pub fn total_mass(&self) -> f64 {
        self.segments.iter().map(|s| s.mass).sum()
    }
}

/// Upper-arm and forearm (hand included) parameters for a body.
pub fn derive_segments(body: BodyParams) -> Result<SegmentSet> {
    body.validate()?;
    let h = body.stature_m;
    let arm_mass = ARM_MASS_RATIO * body.mass_kg;

    let h_f = FOREARM_LENGTH_RATIO * h;
    let h_u = UPPER_ARM_LENGTH_RATIO * h;
    let upper = Segment::cylinder("upper_arm", h_u, RADIUS_RATIO * h_u, UPPER_ARM_MASS_SHARE * arm_mass);
    let fore = Segment::cylinder("forearm", h_f, RADIUS_RATIO * h_f, FOREARM_MASS_SHARE * arm_mass);
    Ok(SegmentSet { segments: vec![upper, fore] })
}

/// Modified (proximal) Denavit-Hartenberg parameters of one joint.
///
/// The transform from the previous frame is
/// `RotX(twist) · TransX(link_length) · RotZ(q + angle_offset) · TransZ(link_offset)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DhParams {
    /// Offset along the joint axis [m].
    pub link_offset: f64,
    /// Common-normal length from the previous axis [m].
    pub link_length: f64,
    /// Twist from the previous axis [rad].
    pub twist: f64,
    /// Constant added to the joint variable [rad].
    pub angle_offset: f64,
}

impl DhParams {
    pub fn new(link_offset: f64, link_length: f64, twist: f64, angle_offset: f64) -> Self {
        DhParams { link_offset, link_length, twist, angle_offset }
    }

    pub fn transform(&self, q: f64) -> Isometry3<f64> {
        let twist = Isometry3::from_parts(
            Translation3::identity(),
            UnitQuaternion::from_axis_angle(&Vector3::x_axis(), self.twist),
        );
        let length = Isometry3::translation(self.link_length, 0.0, 0.0);
        let rot = Isometry3::from_parts(
            Translation3::identity(),
            UnitQuaternion::from_axis_angle(&Vector3::z_axis(), q + self.angle_offset),
        );
        let offset = Isometry3::translation(0.0, 0.0, self.link_offset);
        twist * length * rot * offset
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointSpec {
    pub name: String,
    pub dh: DhParams,
    pub lower: f64,
    pub upper: f64,
    pub neutral: f64,
    /// Discomfort weight.
    pub gamma: f64,
}

impl JointSpec {
    pub fn new(name: &str, dh: DhParams, lower: f64, upper: f64, neutral: f64, gamma: f64) -> Result<Self> {
        let joint = JointSpec { name: name.to_string(), dh, lower, upper, neutral, gamma };
        joint.validate()?;
        Ok(joint)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lower.is_finite() && self.upper.is_finite() && self.lower < self.upper) {
            return Err(Error::param(format!(
                "joint {}: lower limit {} must be below upper limit {}",
                self.name, self.lower, self.upper
            )));
        }
        if !(self.lower <= self.neutral && self.neutral <= self.upper) {
            return Err(Error::param(format!(
                "joint {}: neutral {} outside [{}, {}]",
                self.name, self.neutral, self.lower, self.upper
            )));
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(Error::param(format!("joint {}: gamma must be >= 0", self.name)));
        }
        Ok(())
    }

    pub fn range(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, q: f64) -> bool {
        self.lower <= q && q <= self.upper
    }
}

/// Where a body segment sits on the chain, in the frame of `joint`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkMount {
    /// Index of the joint whose frame carries the segment.
    pub joint: usize,
    /// Proximal end of the segment in that frame [m].
    pub proximal: Vector3<f64>,
    /// Unit direction from the proximal to the distal end.
    pub axis: Vector3<f64>,
}

impl LinkMount {
    pub fn com_local(&self, com_offset: f64) -> Vector3<f64> {
        self.proximal + self.axis * com_offset
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KinematicChain {
    pub joints: Vec<JointSpec>,
    /// Pose of the first joint frame (at zero angle offset) in the world.
    pub base_frame: Isometry3<f64>,
    /// Last joint frame to grasp point.
    pub end_effector_offset: Isometry3<f64>,
    pub links: Vec<LinkMount>,
}

impl KinematicChain {
    pub fn new(
        joints: Vec<JointSpec>,
        base_frame: Isometry3<f64>,
        end_effector_offset: Isometry3<f64>,
        links: Vec<LinkMount>,
    ) -> Result<Self> {
        if joints.is_empty() {
            return Err(Error::param("a chain needs at least one joint"));
        }
        for j in &joints {
            j.validate()?;
        }
        if let Some(bad) = links.iter().find(|l| l.joint >= joints.len()) {
            return Err(Error::param(format!("link mounted on missing joint {}", bad.joint)));
        }
        Ok(KinematicChain { joints, base_frame, end_effector_offset, links })
    }

    pub fn dof(&self) -> usize {
        self.joints.len()
    }

    pub fn joint_index(&self, name: &str) -> Option<usize> {
        self.joints.iter().position(|j| j.name == name)
    }

    pub fn neutral(&self) -> Vec<f64> {
        self.joints.iter().map(|j| j.neutral).collect()
    }
}

/// Per-joint override read from configuration. Angles in degrees.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JointOverride {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limits_deg: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub neutral_deg: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ArmConfig {
    pub joints: Vec<JointOverride>,
    pub grip_offset_m: f64,
}

impl Default for ArmConfig {
    fn default() -> Self {
        ArmConfig { joints: Vec::new(), grip_offset_m: DEFAULT_GRIP_OFFSET }
    }
}

pub mod arm {
    //! Joint names and indices of the five-joint arm.
    pub const SHOULDER_FLEXION: usize = 0;
    pub const SHOULDER_ABDUCTION: usize = 1;
    pub const UPPER_ARM_ROTATION: usize = 2;
    pub const ELBOW_FLEXION: usize = 3;
    pub const FOREARM_ROTATION: usize = 4;

    pub const NAMES: [&str; 5] = [
        "shoulder_flexion",
        "shoulder_abduction",
        "upper_arm_rotation",
        "elbow_flexion",
        "forearm_rotation",
    ];

    /// Default range of motion [deg].
    pub const LIMITS_DEG: [[f64; 2]; 5] = [
        [-60.0, 180.0],
        [-30.0, 135.0],
        [-90.0, 90.0],
        [0.0, 145.0],
        [-90.0, 85.0],
    ];
}

/// Five-joint right arm, shoulder at the world origin.
///
/// World axes: x forward, y to the person's left, z up. At `q = 0` the arm
/// hangs straight down with the grasp point at
/// `(0, 0, -(h_u + h_f + grip_offset))`. Positive shoulder and elbow
/// flexion swing the limb forward in the sagittal (x-z) plane; positive
/// abduction moves the hand to the right (-y).
pub fn build_arm_chain(body: BodyParams, config: &ArmConfig) -> Result<KinematicChain> {
    use std::f64::consts::FRAC_PI_2;

    let segments = derive_segments(body)?;
    let h_u = segments.upper_arm().length;
    let h_f = segments.forearm().length;
    if !(config.grip_offset_m.is_finite() && config.grip_offset_m >= 0.0) {
        return Err(Error::param("grip offset must be a non-negative length"));
    }

    let dh = [
        DhParams::new(0.0, 0.0, 0.0, 0.0),
        DhParams::new(0.0, 0.0, FRAC_PI_2, -FRAC_PI_2),
        DhParams::new(h_u, 0.0, -FRAC_PI_2, FRAC_PI_2),
        DhParams::new(0.0, 0.0, -FRAC_PI_2, 0.0),
        DhParams::new(h_f, 0.0, FRAC_PI_2, 0.0),
    ];

    let mut joints = Vec::with_capacity(5);
    for (i, name) in arm::NAMES.iter().enumerate() {
        let [lo, hi] = arm::LIMITS_DEG[i];
        joints.push(JointSpec {
            name: name.to_string(),
            dh: dh[i],
            lower: lo.to_radians(),
            upper: hi.to_radians(),
            neutral: (0.5 * (lo + hi)).to_radians(),
            gamma: 1.0,
        });
    }

    for ov in &config.joints {
        let joint = joints
            .iter_mut()
            .find(|j| j.name == ov.name)
            .ok_or_else(|| Error::Config(format!("unknown joint '{}'", ov.name)))?;
        if let Some([lo, hi]) = ov.limits_deg {
            joint.lower = lo.to_radians();
            joint.upper = hi.to_radians();
            joint.neutral = (0.5 * (lo + hi)).to_radians();
        }
        if let Some(n) = ov.neutral_deg {
            joint.neutral = n.to_radians();
        }
        if let Some(g) = ov.gamma {
            joint.gamma = g;
        }
    }

    // z1 = -y (flexion axis), x1 = -z (down the hanging arm), y1 = +x.
    let base_rotation = nalgebra::Rotation3::from_matrix_unchecked(Matrix3::new(
        0.0, 1.0, 0.0, //
        0.0, 0.0, -1.0, //
        -1.0, 0.0, 0.0,
    ));
    let base_frame = Isometry3::from_parts(
        Translation3::identity(),
        UnitQuaternion::from_rotation_matrix(&base_rotation),
    );
    let end_effector_offset = Isometry3::translation(0.0, 0.0, config.grip_offset_m);

    // Upper arm rides on frame 3 (origin at the elbow, z down the arm),
    // forearm on frame 5 (origin at the wrist, z down the forearm).
    let links = vec![
        LinkMount {
            joint: arm::UPPER_ARM_ROTATION,
            proximal: Vector3::new(0.0, 0.0, -h_u),
            axis: Vector3::z(),
        },
        LinkMount {
            joint: arm::FOREARM_ROTATION,
            proximal: Vector3::new(0.0, 0.0, -h_f),
            axis: Vector3::z(),
        },
    ];

    KinematicChain::new(joints, base_frame, end_effector_offset, links)
}
