//! Static inverse dynamics: joint torques needed to hold a posture against
//! gravity and an external load at the grasp point.
//!
//! Torques are actuator torques about each joint's z axis; a positive value
//! means the joint must push in its positive rotation direction to hold
//! the posture. Velocity and acceleration terms are zero by construction.

use std::ops::{Add, Deref, Index};

use nalgebra::{Vector3, Vector6};

use crate::body_model::{KinematicChain, SegmentSet};
use crate::error::{Error, Result};
use crate::kinematics::{chain_frames, jacobian, point_in_world, Posture};

/// Load acting on the hand at the grasp point, world frame.
///
/// This is the force and moment the environment applies to the hand
/// (for example a tool's weight points down).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ExternalWrench {
    /// [N]
    pub force: Vector3<f64>,
    /// [N·m]
    pub moment: Vector3<f64>,
}

impl ExternalWrench {
    pub fn force(force: Vector3<f64>) -> Self {
        ExternalWrench { force, moment: Vector3::zeros() }
    }

    pub fn scaled(&self, c: f64) -> Self {
        ExternalWrench { force: self.force * c, moment: self.moment * c }
    }

    fn as_vector(&self) -> Vector6<f64> {
        Vector6::new(self.force.x, self.force.y, self.force.z, self.moment.x, self.moment.y, self.moment.z)
    }

    fn check(&self) -> Result<()> {
        if self.force.iter().chain(self.moment.iter()).all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::param("wrench has non-finite components"))
        }
    }
}

impl Add for ExternalWrench {
    type Output = ExternalWrench;
    fn add(self, rhs: Self) -> Self {
        ExternalWrench { force: self.force + rhs.force, moment: self.moment + rhs.moment }
    }
}

/// Actuator torque per joint [N·m].
#[derive(Debug, Clone, PartialEq)]
pub struct JointTorques(pub Vec<f64>);

impl JointTorques {
    pub fn magnitudes(&self) -> Vec<f64> {
        self.0.iter().map(|t| t.abs()).collect()
    }
}

impl Deref for JointTorques {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl Index<usize> for JointTorques {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for JointTorques {
    type Output = JointTorques;
    fn add(self, rhs: Self) -> Self {
        JointTorques(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

fn check_segments(chain: &KinematicChain, segments: &SegmentSet) -> Result<()> {
    if chain.links.len() != segments.segments.len() {
        return Err(Error::param(format!(
            "chain mounts {} segments but {} were given",
            chain.links.len(),
            segments.segments.len()
        )));
    }
    Ok(())
}

/// World positions of segment mass centres.
pub fn segment_centres(chain: &KinematicChain, segments: &SegmentSet, posture: &Posture) -> Result<Vec<Vector3<f64>>> {
    check_segments(chain, segments)?;
    let frames = chain_frames(chain, posture)?;
    Ok(chain
        .links
        .iter()
        .zip(&segments.segments)
        .map(|(mount, seg)| point_in_world(&frames, mount.joint, &mount.com_local(seg.com_offset)))
        .collect())
}

/// Gravitational potential energy of the limb segments [J], zero at the
/// height of the world origin.
pub fn potential_energy(chain: &KinematicChain, segments: &SegmentSet, posture: &Posture, g: f64) -> Result<f64> {
    let centres = segment_centres(chain, segments, posture)?;
    Ok(centres.iter().zip(&segments.segments).map(|(c, s)| s.mass * g * c.z).sum())
}

/// Torques holding the segment weights, by backward accumulation of the
/// distal weights through the chain. Equals the gradient of
/// [`potential_energy`].
pub fn gravity_torques(chain: &KinematicChain, segments: &SegmentSet, posture: &Posture, g: f64) -> Result<JointTorques> {
    check_segments(chain, segments)?;
    let frames = chain_frames(chain, posture)?;
    let n = chain.dof();

    let mut force = Vector3::zeros();
    // Moment of the distal weights about the world origin.
    let mut moment = Vector3::zeros();
    let mut torques = vec![0.0; n];
    for i in (0..n).rev() {
        for (mount, seg) in chain.links.iter().zip(&segments.segments).filter(|(m, _)| m.joint == i) {
            let c = point_in_world(&frames, i, &mount.com_local(seg.com_offset));
            let w = Vector3::new(0.0, 0.0, -seg.mass * g);
            force += w;
            moment += c.cross(&w);
        }
        let about_joint = moment - frames.origin(i).cross(&force);
        torques[i] = -frames.axis(i).dot(&about_joint);
    }
    Ok(JointTorques(torques))
}

/// Torques holding an external load at the grasp point: `-Jᵀ·[f; m]`.
pub fn load_torques(chain: &KinematicChain, posture: &Posture, wrench: &ExternalWrench) -> Result<JointTorques> {
    wrench.check()?;
    let j = jacobian(chain, posture)?;
    let tau = -(j.transpose() * wrench.as_vector());
    Ok(JointTorques(tau.iter().copied().collect()))
}

/// Total static torque: gravity plus external load.
pub fn static_joint_torques(
    chain: &KinematicChain,
    segments: &SegmentSet,
    posture: &Posture,
    wrench: &ExternalWrench,
    g: f64,
) -> Result<JointTorques> {
    Ok(gravity_torques(chain, segments, posture, g)? + load_torques(chain, posture, wrench)?)
}
