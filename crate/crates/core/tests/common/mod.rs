#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rpr_core::kinematics::{best_leg_pair, second_root};
use rpr_core::{
    build_matrices, classify_dk_degeneracy, inverse_kinematics, mn_coefficients, DkKind,
    JointAngles, ManipulatorGeometry, Pose, Tolerances,
};
use std::f64::consts::PI;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn angle(rng: &mut StdRng) -> f64 {
    rng.gen_range(-PI..PI)
}

/// Actuator angles away from every degenerate set: usable leg pairs, an
/// isolated second root, and that root well separated from `φ = 0`.
pub fn is_generic(theta: &JointAngles, tol: &Tolerances) -> bool {
    let (m, n) = mn_coefficients(theta);
    classify_dk_degeneracy(theta, tol) == DkKind::TwoSolutions
        && best_leg_pair(theta).1 > 0.1
        && m * m + n * n > 1e-6
        && second_root(m, n).abs() > 1e-4
}

pub fn generic_theta(rng: &mut StdRng, tol: &Tolerances) -> JointAngles {
    loop {
        let t = JointAngles::new(angle(rng), angle(rng), angle(rng));
        if is_generic(&t, tol) {
            return t;
        }
    }
}

/// Whether the pose/actuator pair is clear of both singularity kinds and of
/// the degenerate actuator sets.
pub fn is_regular(
    geom: &ManipulatorGeometry,
    pose: &Pose,
    theta: &JointAngles,
    tol: &Tolerances,
) -> bool {
    let Ok(m) = build_matrices(geom, pose, theta, tol) else {
        return false;
    };
    let scale = geom.scale();
    let (mm, nn) = mn_coefficients(theta);
    m.det_a.abs() > 1e-2 * m.a.norm().powi(3)
        && m.rho().iter().all(|r| r.abs() > 1e-2 * scale)
        && mm * mm + nn * nn > 1e-3
        && is_generic(theta, tol)
}

/// Random nonsingular pose in the figure window with a random working mode.
pub fn regular_config(
    rng: &mut StdRng,
    geom: &ManipulatorGeometry,
    tol: &Tolerances,
) -> (Pose, JointAngles) {
    let s = geom.scale();
    loop {
        let pose = Pose::new(
            rng.gen_range(-1.0..2.0) * s,
            rng.gen_range(-1.0..2.0) * s,
            angle(rng),
        );
        let branch = [
            rng.gen_range(0..2u8),
            rng.gen_range(0..2u8),
            rng.gen_range(0..2u8),
        ];
        let Ok(ik) = inverse_kinematics(geom, &pose, branch, tol) else {
            continue;
        };
        let theta = ik.angles();
        if is_regular(geom, &pose, &theta, tol) {
            return (pose, theta);
        }
    }
}

/// `max(position distance, wrapped angle distance)`.
pub fn pose_distance(a: &Pose, b: &Pose) -> f64 {
    let (dp, da) = a.distance(b);
    dp.max(da)
}

pub fn hausdorff(a: &[Pose], b: &[Pose]) -> f64 {
    let directed = |x: &[Pose], y: &[Pose]| {
        x.iter()
            .map(|p| {
                y.iter()
                    .map(|q| pose_distance(p, q))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0f64, f64::max)
    };
    if a.is_empty() && b.is_empty() {
        return 0.;
    }
    directed(a, b).max(directed(b, a))
}
