use ergopose_core::kinematics::PlanarTarget;
use ergopose_core::objectives::ObjectivePoint;
use ergopose_core::optimizer::{pareto_filter, Normalizers};
use ergopose_core::{
    fatigue_measure, forward_kinematics, planar_ik, select, static_joint_torques, CapacityState, DrillingScenario,
    FatigueMeasureParams, Weights,
};
use proptest::prelude::*;

fn points() -> impl Strategy<Value = Vec<ObjectivePoint>> {
    proptest::collection::vec((0.01f64..10.0, 0.01f64..10.0), 1..60)
        .prop_map(|v| v.into_iter().map(|(d, f)| ObjectivePoint::raw(d, f)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reach_postures_hit_the_target(d in 0.2f64..0.67, drop in -0.2f64..0.2) {
        let s = DrillingScenario::default();
        let p = s.problem().unwrap();
        let target = PlanarTarget::new(d, drop);
        let hand = p.target(d).unwrap() - nalgebra::Vector3::new(0.0, 0.0, drop);
        for q in planar_ik(&p.chain, target, &p.pinned).unwrap() {
            let pos = forward_kinematics(&p.chain, &q).unwrap().position;
            prop_assert!((pos - hand).norm() < 1e-9);
            prop_assert!(p.chain.joints.iter().zip(q.iter()).all(|(j, &v)| j.contains(v)));
        }
    }

    #[test]
    fn tiring_never_lowers_the_fatigue_measure(d in 0.4f64..0.66, minutes in 0.01f64..3.0) {
        let s = DrillingScenario::default();
        let p = s.problem().unwrap();
        let q = planar_ik(&p.chain, PlanarTarget::new(d, 0.0), &p.pinned).unwrap().remove(0);
        let tau = static_joint_torques(&p.chain, &p.segments, &q, &p.wrench, p.gravity).unwrap();
        let fresh = CapacityState::fresh(p.strength.strength_at(&q).unwrap(), 1.0, 2.4).unwrap();
        let tired = fresh.fatigue_step(&tau.magnitudes(), minutes).unwrap();
        let params = FatigueMeasureParams::default();
        prop_assert!(fatigue_measure(&tau, &tired, params).unwrap() > fatigue_measure(&tau, &fresh, params).unwrap());
    }

    #[test]
    fn pareto_filter_is_idempotent(pts in points()) {
        let once = pareto_filter(&pts);
        prop_assert_eq!(pareto_filter(&once.points), once);
    }

    #[test]
    fn selection_lies_on_the_front(pts in points(), wd in 0.0f64..=1.0) {
        let w = Weights::new(wd, 1.0 - wd).unwrap();
        let pick = select(&pts, w, Normalizers::from_points(&pts).unwrap()).unwrap();
        let front = pareto_filter(&pts);
        // Zero weights can tie dominated points; the front still holds an equal score.
        let best_on_front = front
            .points
            .iter()
            .any(|p| p == &pick.point || (w.discomfort * p.discomfort / pick.normalizers.discomfort
                + w.fatigue * p.fatigue / pick.normalizers.fatigue) <= pick.score);
        prop_assert!(best_on_front);
    }
}
