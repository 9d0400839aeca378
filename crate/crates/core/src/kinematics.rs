//! Forward kinematics, geometric Jacobian and sagittal-plane reach.

use std::ops::{Deref, DerefMut};

use nalgebra::{Isometry3, Matrix6xX, Point3, Rotation3, Vector3};

use crate::body_model::{arm, KinematicChain};
use crate::error::{Error, Result};

/// Joint angles [rad], one per chain joint.
#[derive(Debug, Clone, PartialEq)]
pub struct Posture(pub Vec<f64>);

impl Posture {
    pub fn zeros(n: usize) -> Self {
        Posture(vec![0.0; n])
    }

    pub fn from_degrees(deg: &[f64]) -> Self {
        Posture(deg.iter().map(|d| d.to_radians()).collect())
    }

    pub fn to_degrees(&self) -> Vec<f64> {
        self.0.iter().map(|q| q.to_degrees()).collect()
    }

    pub(crate) fn check(&self, chain: &KinematicChain) -> Result<()> {
        if self.0.len() != chain.dof() {
            return Err(Error::param(format!(
                "posture has {} angles, chain has {} joints",
                self.0.len(),
                chain.dof()
            )));
        }
        if let Some(q) = self.0.iter().find(|q| !q.is_finite()) {
            return Err(Error::param(format!("non-finite joint angle {q}")));
        }
        Ok(())
    }
}

impl Deref for Posture {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for Posture {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

/// Position and orientation of the grasp point in the world frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub position: Vector3<f64>,
    pub rotation: Rotation3<f64>,
}

/// World pose of every joint frame plus the grasp point.
#[derive(Debug, Clone)]
pub(crate) struct ChainFrames {
    pub joints: Vec<Isometry3<f64>>,
    pub grasp: Isometry3<f64>,
}

impl ChainFrames {
    pub fn axis(&self, i: usize) -> Vector3<f64> {
        self.joints[i].rotation * Vector3::z()
    }

    pub fn origin(&self, i: usize) -> Vector3<f64> {
        self.joints[i].translation.vector
    }
}

pub(crate) fn chain_frames(chain: &KinematicChain, posture: &Posture) -> Result<ChainFrames> {
    posture.check(chain)?;
    let mut current = chain.base_frame;
    let mut joints = Vec::with_capacity(chain.dof());
    for (joint, &q) in chain.joints.iter().zip(posture.iter()) {
        current *= joint.dh.transform(q);
        joints.push(current);
    }
    let grasp = current * chain.end_effector_offset;
    Ok(ChainFrames { joints, grasp })
}

pub fn forward_kinematics(chain: &KinematicChain, posture: &Posture) -> Result<Pose> {
    let frames = chain_frames(chain, posture)?;
    Ok(Pose {
        position: frames.grasp.translation.vector,
        rotation: frames.grasp.rotation.to_rotation_matrix(),
    })
}

/// World position of a point given in the frame of `joint`.
pub(crate) fn point_in_world(frames: &ChainFrames, joint: usize, local: &Vector3<f64>) -> Vector3<f64> {
    (frames.joints[joint] * Point3::from(*local)).coords
}

/// Geometric Jacobian at the grasp point. Rows are linear then angular
/// velocity; column `i` is `[z_i × (p - p_i); z_i]`.
pub fn jacobian(chain: &KinematicChain, posture: &Posture) -> Result<Matrix6xX<f64>> {
    let frames = chain_frames(chain, posture)?;
    Ok(point_jacobian(&frames, frames.grasp.translation.vector, chain.dof()))
}

/// Jacobian of a world point rigidly attached distal to joint `n - 1`.
pub(crate) fn point_jacobian(frames: &ChainFrames, point: Vector3<f64>, n: usize) -> Matrix6xX<f64> {
    let mut j = Matrix6xX::zeros(frames.joints.len());
    for i in 0..n {
        let z = frames.axis(i);
        let lin = z.cross(&(point - frames.origin(i)));
        j.fixed_view_mut::<3, 1>(0, i).copy_from(&lin);
        j.fixed_view_mut::<3, 1>(3, i).copy_from(&z);
    }
    j
}

/// Sagittal-plane reach target relative to the shoulder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarTarget {
    /// Horizontal distance in front of the shoulder [m].
    pub distance: f64,
    /// Vertical offset below the shoulder [m].
    pub drop: f64,
}

impl PlanarTarget {
    pub fn new(distance: f64, drop: f64) -> Self {
        PlanarTarget { distance, drop }
    }

    /// World position, given the shoulder position.
    pub fn world(&self, shoulder: Vector3<f64>) -> Vector3<f64> {
        shoulder + Vector3::new(self.distance, 0.0, -self.drop)
    }
}

/// FK residual accepted for a planar IK solution [m].
pub const IK_TOLERANCE: f64 = 1e-9;

/// Shoulder position and the two effective link lengths of the arm.
pub(crate) fn planar_geometry(chain: &KinematicChain, pinned: &Posture) -> Result<(Vector3<f64>, f64, f64)> {
    let mut straight = pinned.clone();
    straight[arm::SHOULDER_FLEXION] = 0.0;
    straight[arm::ELBOW_FLEXION] = 0.0;
    let frames = chain_frames(chain, &straight)?;
    let shoulder = frames.origin(arm::SHOULDER_FLEXION);
    let elbow = frames.origin(arm::ELBOW_FLEXION);
    let grasp = frames.grasp.translation.vector;
    Ok((shoulder, (elbow - shoulder).norm(), (grasp - elbow).norm()))
}

/// Both two-link solutions for the target, without limit filtering.
///
/// Shoulder flexion is measured from the downward vertical and elbow
/// flexion is the interior angle (0 = straight). Joints other than
/// shoulder and elbow flexion keep their values from `pinned`. Returns the
/// flexed-elbow branch first; at the reach boundary only one posture.
pub fn planar_ik_branches(chain: &KinematicChain, target: PlanarTarget, pinned: &Posture) -> Result<Vec<Posture>> {
    if chain.dof() != arm::NAMES.len() {
        return Err(Error::param("planar reach needs the five-joint arm chain"));
    }
    pinned.check(chain)?;
    let (_, l1, l2) = planar_geometry(chain, pinned)?;
    let r2 = target.distance * target.distance + target.drop * target.drop;
    let mut cos_elbow = (r2 - l1 * l1 - l2 * l2) / (2.0 * l1 * l2);
    if !cos_elbow.is_finite() || cos_elbow.abs() > 1.0 + 1e-12 {
        return Ok(Vec::new());
    }
    cos_elbow = cos_elbow.clamp(-1.0, 1.0);
    let elbow = cos_elbow.acos();

    // Direction of the target measured from straight down, toward +x.
    let heading = target.distance.atan2(target.drop);
    let branches: &[f64] = if elbow == 0.0 { &[0.0] } else { &[elbow, -elbow] };
    Ok(branches
        .iter()
        .map(|&e| {
            let shoulder = heading - (l2 * e.sin()).atan2(l1 + l2 * e.cos());
            let mut q = pinned.clone();
            q[arm::SHOULDER_FLEXION] = shoulder;
            q[arm::ELBOW_FLEXION] = e;
            q
        })
        .collect())
}

/// Postures that reach the target within joint limits.
///
/// Unreachable targets give an empty list. Solutions whose forward
/// kinematics miss the target by more than [`IK_TOLERANCE`] (for example
/// when the pinned joints take the arm out of the sagittal plane) are
/// dropped as well.
pub fn planar_ik(chain: &KinematicChain, target: PlanarTarget, pinned: &Posture) -> Result<Vec<Posture>> {
    let (shoulder, _, _) = planar_geometry(chain, pinned)?;
    let goal = target.world(shoulder);
    let mut out = Vec::new();
    for q in planar_ik_branches(chain, target, pinned)? {
        if !chain.joints.iter().zip(q.iter()).all(|(j, &a)| j.contains(a)) {
            continue;
        }
        let reached = forward_kinematics(chain, &q)?.position;
        if (reached - goal).norm() < IK_TOLERANCE {
            out.push(q);
        } else {
            log::debug!("dropping planar solution with residual {:e}", (reached - goal).norm());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body_model::{build_arm_chain, derive_segments, ArmConfig, BodyParams};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn arm() -> KinematicChain {
        build_arm_chain(BodyParams::default(), &ArmConfig::default()).unwrap()
    }

    fn lengths() -> (f64, f64) {
        let s = derive_segments(BodyParams::default()).unwrap();
        (s.upper_arm().length, s.forearm().length + 0.10)
    }

    fn random_posture(chain: &KinematicChain, rng: &mut ChaCha8Rng) -> Posture {
        Posture(chain.joints.iter().map(|j| rng.random_range(j.lower..=j.upper)).collect())
    }

    #[test]
    fn zero_posture_hangs_straight_down() {
        let chain = arm();
        let (l1, l2) = lengths();
        let pose = forward_kinematics(&chain, &Posture::zeros(5)).unwrap();
        assert_relative_eq!(pose.position, Vector3::new(0.0, 0.0, -(l1 + l2)), epsilon = 1e-12);
    }

    #[test]
    fn sagittal_posture_matches_two_link_formula() {
        let chain = arm();
        let (l1, l2) = lengths();
        for (s, e) in [(30.0f64, 90.0f64), (0.0, 45.0), (90.0, 0.0), (120.0, 30.0), (-40.0, 140.0)] {
            let (s, e) = (s.to_radians(), e.to_radians());
            let q = Posture(vec![s, 0.0, 0.0, e, 0.0]);
            let p = forward_kinematics(&chain, &q).unwrap().position;
            // Angles measured from the downward vertical toward +x.
            let x = l1 * s.sin() + l2 * (s + e).sin();
            let z = -l1 * s.cos() - l2 * (s + e).cos();
            assert_relative_eq!(p, Vector3::new(x, 0.0, z), epsilon = 1e-12);
        }
    }

    #[test]
    fn abduction_moves_hand_to_the_right() {
        let chain = arm();
        let q = Posture(vec![0.0, 0.5, 0.0, 0.0, 0.0]);
        let p = forward_kinematics(&chain, &q).unwrap().position;
        assert!(p.y < -0.1);
        assert_relative_eq!(p.x, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let chain = arm();
        assert!(matches!(forward_kinematics(&chain, &Posture::zeros(4)), Err(Error::InvalidParameter(_))));
        assert!(jacobian(&chain, &Posture(vec![0.0, f64::NAN, 0.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn reach_is_bounded() {
        let chain = arm();
        let (l1, l2) = lengths();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let q = Posture((0..5).map(|_| rng.random_range(-6.0..6.0)).collect());
            let pose = forward_kinematics(&chain, &q).unwrap();
            assert!(pose.position.norm() <= l1 + l2 + 1e-12);
            let r = pose.rotation.matrix();
            assert_relative_eq!(r * r.transpose(), nalgebra::Matrix3::identity(), epsilon = 1e-9);
            assert_relative_eq!(r.determinant(), 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn jacobian_matches_central_differences() {
        let chain = arm();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let eps = 1e-6;
        for _ in 0..100 {
            let q = random_posture(&chain, &mut rng);
            let j = jacobian(&chain, &q).unwrap();
            for i in 0..5 {
                let mut plus = q.clone();
                let mut minus = q.clone();
                plus[i] += eps;
                minus[i] -= eps;
                let fd = (forward_kinematics(&chain, &plus).unwrap().position
                    - forward_kinematics(&chain, &minus).unwrap().position)
                    / (2.0 * eps);
                for r in 0..3 {
                    assert!((j[(r, i)] - fd[r]).abs() < 1e-6, "joint {i} row {r}");
                }
            }
        }
    }

    #[test]
    fn jacobian_at_zero_posture() {
        // Hanging arm, grasp point at p = (0, 0, -L). Axes: z1 = z4 = -y,
        // z2 = -x, z3 = z5 = -z (down the arm). Lever arms:
        //   z1 x p = (-y) x (-L z) = L (y x z) = (L, 0, 0)
        //   z2 x p = (-x) x (-L z) = L (x x z) = (0, -L, 0)
        //   z4 x (p - elbow) = (l2, 0, 0); z3, z5 are parallel to p.
        let chain = arm();
        let (l1, l2) = lengths();
        let l = l1 + l2;
        let j = jacobian(&chain, &Posture::zeros(5)).unwrap();
        let expected_lin = [
            Vector3::new(l, 0.0, 0.0),
            Vector3::new(0.0, -l, 0.0),
            Vector3::zeros(),
            Vector3::new(l2, 0.0, 0.0),
            Vector3::zeros(),
        ];
        let expected_ang = [-Vector3::y(), -Vector3::x(), -Vector3::z(), -Vector3::y(), -Vector3::z()];
        for i in 0..5 {
            let lin: Vector3<f64> = j.fixed_view::<3, 1>(0, i).into();
            let ang: Vector3<f64> = j.fixed_view::<3, 1>(3, i).into();
            assert_relative_eq!(lin, expected_lin[i], epsilon = 1e-12);
            assert_relative_eq!(ang, expected_ang[i], epsilon = 1e-12);
        }
    }

    #[test]
    fn folded_posture_is_singular() {
        // Straight arm: upper-arm and forearm rotation axes coincide.
        let chain = arm();
        let j = jacobian(&chain, &Posture(vec![0.3, 0.2, 0.1, 0.0, 0.0])).unwrap();
        let sv = j.svd(false, false).singular_values;
        let rank = sv.iter().filter(|&&s| s > 1e-9 * sv.max()).count();
        assert!(rank < 5, "singular values {sv:?}");

        let j = jacobian(&chain, &Posture(vec![0.3, 0.2, 0.1, 1.0, 0.4])).unwrap();
        let sv = j.svd(false, false).singular_values;
        assert_eq!(sv.iter().filter(|&&s| s > 1e-9 * sv.max()).count(), 5);
    }

    #[test]
    fn ik_at_full_extension_gives_one_straight_arm() {
        let chain = arm();
        let (l1, l2) = lengths();
        let sols = planar_ik(&chain, PlanarTarget::new(l1 + l2, 0.0), &Posture::zeros(5)).unwrap();
        assert_eq!(sols.len(), 1);
        assert_eq!(sols[0][arm::ELBOW_FLEXION], 0.0);
        assert_relative_eq!(sols[0][arm::SHOULDER_FLEXION], std::f64::consts::FRAC_PI_2, epsilon = 1e-12);
    }

    #[test]
    fn ik_mirror_branches_round_trip() {
        let chain = arm();
        let target = PlanarTarget::new(0.5, 0.0);
        let branches = planar_ik_branches(&chain, target, &Posture::zeros(5)).unwrap();
        assert_eq!(branches.len(), 2);
        assert_relative_eq!(branches[0][3], -branches[1][3], epsilon = 1e-15);
        for q in &branches {
            let p = forward_kinematics(&chain, q).unwrap().position;
            assert!((p - Vector3::new(0.5, 0.0, 0.0)).norm() < 1e-9);
        }
        // The hyperextended mirror violates the elbow limit.
        let feasible = planar_ik(&chain, target, &Posture::zeros(5)).unwrap();
        assert_eq!(feasible.len(), 1);
        assert!(feasible[0][3] > 0.0);

        // With a permissive elbow both mirrors survive.
        let mut loose = chain.clone();
        loose.joints[3].lower = -std::f64::consts::PI;
        loose.joints[0].upper = std::f64::consts::PI;
        assert_eq!(planar_ik(&loose, target, &Posture::zeros(5)).unwrap().len(), 2);
    }

    #[test]
    fn ik_unreachable_is_empty() {
        let chain = arm();
        assert!(planar_ik(&chain, PlanarTarget::new(10.0, 0.0), &Posture::zeros(5)).unwrap().is_empty());
        // Inside the minimum-reach annulus.
        assert!(planar_ik(&chain, PlanarTarget::new(0.01, 0.0), &Posture::zeros(5)).unwrap().is_empty());
    }

    #[test]
    fn ik_round_trip_over_workspace() {
        let chain = arm();
        let (shoulder, _, _) = planar_geometry(&chain, &Posture::zeros(5)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut solved = 0;
        for _ in 0..500 {
            let t = PlanarTarget::new(rng.random_range(0.05..0.7), rng.random_range(-0.5..0.6));
            let pinned = Posture(vec![0.0, 0.0, 0.0, 0.0, rng.random_range(-1.5..1.4)]);
            for q in planar_ik(&chain, t, &pinned).unwrap() {
                let p = forward_kinematics(&chain, &q).unwrap().position;
                assert!((p - t.world(shoulder)).norm() < 1e-9);
                solved += 1;
            }
        }
        assert!(solved > 100);
    }

    #[test]
    fn out_of_plane_pins_drop_solutions() {
        let chain = arm();
        let pinned = Posture(vec![0.0, 0.0, 0.6, 0.0, 0.0]);
        assert!(planar_ik(&chain, PlanarTarget::new(0.5, 0.0), &pinned).unwrap().is_empty());
    }
}
