//! Velocity model `A t = B θ̇` and singularity analysis.
//!
//! Row `i` of `A` is `[(E vᵢ)ᵀ, vᵢᵀ(bᵢ − p)]`, i.e. the unit force along the
//! normal `E vᵢ` through `Bᵢ` written as a planar wrench about `P`. `B` is
//! diagonal with the signed extensions `ρᵢ = vᵢᵀ(bᵢ − aᵢ)`.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::geometry::{
    constraint_residuals, max_abs, JointAngles, ManipulatorGeometry, Pose, Tolerances, Vec2,
};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KinematicMatrices {
    /// Direct-kinematics matrix.
    pub a: Matrix3<f64>,
    /// Inverse-kinematics matrix, `diag(ρ₁, ρ₂, ρ₃)`.
    pub b: Matrix3<f64>,
    pub det_a: f64,
    pub det_b: f64,
    pub scale: f64,
}

impl KinematicMatrices {
    pub fn rho(&self) -> [f64; 3] {
        [self.b[(0, 0)], self.b[(1, 1)], self.b[(2, 2)]]
    }

    /// Scale-aware parallel singularity test `|det A| < ε ‖A‖_F³`.
    pub fn is_parallel_singular(&self, tol: &Tolerances) -> bool {
        self.det_a.abs() < tol.det_rel * self.a.norm().powi(3)
    }

    /// Legs (`1..=3`) whose extension vanishes.
    pub fn zero_rho_legs(&self, tol: &Tolerances) -> Vec<usize> {
        let bound = tol.rho * self.scale;
        (0..3)
            .filter(|&i| self.b[(i, i)].abs() < bound)
            .map(|i| i + 1)
            .collect()
    }

    /// Rows of `A` as nested arrays.
    pub fn a_rows(&self) -> [[f64; 3]; 3] {
        std::array::from_fn(|r| std::array::from_fn(|c| self.a[(r, c)]))
    }
}

/// Platform twist: velocity of `P` and angular rate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Twist {
    pub pdot: Vec2,
    pub phidot: f64,
}

impl Twist {
    fn to_vector(self) -> Vector3<f64> {
        Vector3::new(self.pdot.x, self.pdot.y, self.phidot)
    }

    fn from_vector(v: Vector3<f64>) -> Self {
        Self {
            pdot: Vec2::new(v.x, v.y),
            phidot: v.z,
        }
    }

    /// Instantaneous center of rotation, `None` for a pure translation.
    pub fn instantaneous_center(&self, pose: &Pose) -> Option<Vec2> {
        if self.phidot.abs() <= f64::EPSILON * self.pdot.norm() {
            return None;
        }
        // ṗ = φ̇ E (p − c)
        Some(pose.p + self.pdot.perp() * (1. / self.phidot))
    }
}

pub fn build_matrices(
    geom: &ManipulatorGeometry,
    pose: &Pose,
    theta: &JointAngles,
    tol: &Tolerances,
) -> Result<KinematicMatrices> {
    let residual = max_abs(&constraint_residuals(geom, pose, theta));
    if !(residual < tol.consistency * geom.scale()) {
        return Err(Error::InconsistentState { residual });
    }
    let v = theta.directions();
    let b = geom.platform_anchors(pose);
    let rho = geom.signed_rho(pose, theta);
    let a = Matrix3::from_fn(|r, c| match c {
        0 => -v[r].y,
        1 => v[r].x,
        _ => v[r].dot(b[r] - pose.p),
    });
    let b = Matrix3::from_diagonal(&Vector3::from(rho));
    Ok(KinematicMatrices {
        a,
        b,
        det_a: a.determinant(),
        det_b: rho[0] * rho[1] * rho[2],
        scale: geom.scale(),
    })
}

/// `t = A⁻¹ B θ̇`.
pub fn forward_velocity(
    mats: &KinematicMatrices,
    thetadot: [f64; 3],
    tol: &Tolerances,
) -> Result<Twist> {
    if mats.is_parallel_singular(tol) {
        return Err(Error::ParallelSingular { det_a: mats.det_a });
    }
    let rhs = mats.b * Vector3::from(thetadot);
    let t = mats
        .a
        .lu()
        .solve(&rhs)
        .ok_or(Error::ParallelSingular { det_a: mats.det_a })?;
    Ok(Twist::from_vector(t))
}

/// `θ̇ = B⁻¹ A t`, row by row.
pub fn inverse_velocity(
    mats: &KinematicMatrices,
    twist: &Twist,
    tol: &Tolerances,
) -> Result<[f64; 3]> {
    let legs = mats.zero_rho_legs(tol);
    if !legs.is_empty() {
        return Err(Error::SerialSingular { legs });
    }
    let at = mats.a * twist.to_vector();
    let rho = mats.rho();
    Ok(std::array::from_fn(|i| at[i] / rho[i]))
}

/// Unit twist spanning (approximately) the kernel of `A`: the motion the
/// platform can make with the actuators locked at a parallel singularity.
pub fn singular_twist(mats: &KinematicMatrices) -> Twist {
    let svd = mats.a.svd(false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let k = svd.singular_values.imin();
    Twist::from_vector(v_t.row(k).transpose())
}

/// Line through `Bᵢ` along `E vᵢ`, normal to the prismatic axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalLine {
    pub point: Vec2,
    pub direction: Vec2,
}

pub fn normal_lines(
    geom: &ManipulatorGeometry,
    pose: &Pose,
    theta: &JointAngles,
) -> [NormalLine; 3] {
    let b = geom.platform_anchors(pose);
    let v = theta.directions();
    std::array::from_fn(|i| NormalLine {
        point: b[i],
        direction: v[i].perp(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Concurrency {
    /// Least-squares point of the three lines; `None` when all are parallel.
    pub point: Option<Vec2>,
    /// Largest distance from `point` to a line (0 when parallel).
    pub spread: f64,
    pub parallel: bool,
}

/// Bound on `Σ sin²` of the pairwise line angles below which the lines are
/// taken as parallel.
const PARALLEL_LINES: f64 = 1e-12;

/// Least-squares common point of three lines.
pub fn concurrency(lines: &[NormalLine; 3]) -> Concurrency {
    // Each line is {X : nᵀX = nᵀB} with n its unit normal.
    let normals = lines.map(|l| l.direction.perp());
    let (mut sxx, mut sxy, mut syy, mut rx, mut ry) = (0., 0., 0., 0., 0.);
    for (l, n) in lines.iter().zip(normals) {
        let c = n.dot(l.point);
        sxx += n.x * n.x;
        sxy += n.x * n.y;
        syy += n.y * n.y;
        rx += n.x * c;
        ry += n.y * c;
    }
    let det = sxx * syy - sxy * sxy;
    // det = Σ sin²(angle between line pairs)
    if det < PARALLEL_LINES {
        return Concurrency {
            point: None,
            spread: 0.,
            parallel: true,
        };
    }
    let p = Vec2::new((syy * rx - sxy * ry) / det, (sxx * ry - sxy * rx) / det);
    let spread = lines
        .iter()
        .zip(normals)
        .map(|(l, n)| n.dot(p - l.point).abs())
        .fold(0., f64::max);
    Concurrency {
        point: Some(p),
        spread,
        parallel: false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SingularityKind {
    Regular,
    Parallel,
    Serial,
    Both,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularityReport {
    pub kind: SingularityKind,
    pub det_a: f64,
    pub det_b: f64,
    /// Common point of the normal lines at a parallel singularity.
    pub intersection_point: Option<Vec2>,
    /// Parallel singularity with the normals meeting at infinity.
    pub translation: bool,
    pub concurrency_spread: Option<f64>,
    pub zero_rho_legs: Vec<usize>,
}

pub fn classify_singularity(
    geom: &ManipulatorGeometry,
    pose: &Pose,
    theta: &JointAngles,
    tol: &Tolerances,
) -> Result<SingularityReport> {
    let mats = build_matrices(geom, pose, theta, tol)?;
    let parallel = mats.is_parallel_singular(tol);
    let zero_rho_legs = mats.zero_rho_legs(tol);
    let kind = match (parallel, !zero_rho_legs.is_empty()) {
        (false, false) => SingularityKind::Regular,
        (true, false) => SingularityKind::Parallel,
        (false, true) => SingularityKind::Serial,
        (true, true) => SingularityKind::Both,
    };
    let mut report = SingularityReport {
        kind,
        det_a: mats.det_a,
        det_b: mats.det_b,
        intersection_point: None,
        translation: false,
        concurrency_spread: None,
        zero_rho_legs,
    };
    if parallel {
        let c = concurrency(&normal_lines(geom, pose, theta));
        report.intersection_point = c.point;
        report.translation = c.parallel;
        report.concurrency_spread = Some(c.spread);
    }
    Ok(report)
}

/// `det A` at the `φ = 0` solution of the direct kinematics (platform on the
/// base), where `A` depends on `θ` only.
pub fn det_a_specialized(geom: &ManipulatorGeometry, theta: &JointAngles, tol: &Tolerances) -> f64 {
    build_matrices(geom, &Pose::trivial(), theta, tol)
        .expect("the trivial pose is consistent with every theta")
        .det_a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::{direct_kinematics, inverse_kinematics};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_6};

    const S3: f64 = 1.732_050_807_568_877_2;

    fn unit() -> (ManipulatorGeometry, Tolerances) {
        (ManipulatorGeometry::unit(), Tolerances::default())
    }

    fn regular_config() -> (Pose, JointAngles) {
        let (g, tol) = unit();
        let pose = Pose::new(0.3, 0.2, 0.5);
        (
            pose,
            inverse_kinematics(&g, &pose, [0; 3], &tol)
                .unwrap()
                .angles(),
        )
    }

    #[test]
    fn symmetric_translate_is_parallel_singular() {
        let (g, tol) = unit();
        let t = JointAngles::new(FRAC_PI_6, FRAC_PI_6, FRAC_PI_6);
        let mats = build_matrices(&g, &Pose::new(0.5, S3 / 6., 0.), &t, &tol).unwrap();
        assert_abs_diff_eq!(mats.det_a, 0., epsilon = 1e-15);
        assert!(mats.is_parallel_singular(&tol));
    }

    #[test]
    fn trivial_pose_has_zero_b() {
        let (g, tol) = unit();
        let t = JointAngles::new(0.2, -0.9, 2.4);
        let mats = build_matrices(&g, &Pose::trivial(), &t, &tol).unwrap();
        assert_eq!(mats.b, Matrix3::zeros());
        assert_eq!(mats.det_b, 0.);
        assert_abs_diff_eq!(
            mats.a[(2, 2)],
            t.theta3.cos() / 2. + S3 * t.theta3.sin() / 2.,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(mats.a[(1, 2)], t.theta2.cos(), epsilon = 1e-15);
        assert_eq!(mats.a[(0, 2)], 0.);
    }

    #[test]
    fn inconsistent_state_rejected() {
        let (g, tol) = unit();
        let r = build_matrices(
            &g,
            &Pose::new(0.3, 0.2, 0.5),
            &JointAngles::new(0., 0., 0.),
            &tol,
        );
        assert!(matches!(r, Err(Error::InconsistentState { .. })));
    }

    #[test]
    fn forward_velocity_basics() {
        let (g, tol) = unit();
        let (pose, theta) = regular_config();
        let mats = build_matrices(&g, &pose, &theta, &tol).unwrap();
        assert_eq!(
            forward_velocity(&mats, [0.; 3], &tol).unwrap(),
            Twist::default()
        );

        let trivial = build_matrices(&g, &Pose::trivial(), &theta, &tol).unwrap();
        let t = forward_velocity(&trivial, [1., -2., 0.5], &tol).unwrap();
        assert_eq!(t, Twist::default());
    }

    #[test]
    fn forward_velocity_matches_finite_differences() {
        let (g, tol) = unit();
        let (pose, theta) = regular_config();
        let mats = build_matrices(&g, &pose, &theta, &tol).unwrap();
        let twist = forward_velocity(&mats, [1., 0., 0.], &tol).unwrap();
        let h = 1e-6;
        let solve = |d: f64| {
            let t = JointAngles::new(theta.theta1 + d, theta.theta2, theta.theta3);
            let set = direct_kinematics(&g, &t, &tol);
            set.poses[1]
        };
        let (p, m) = (solve(h), solve(-h));
        let fd = [
            (p.p.x - m.p.x) / (2. * h),
            (p.p.y - m.p.y) / (2. * h),
            (p.phi - m.phi) / (2. * h),
        ];
        let an = [twist.pdot.x, twist.pdot.y, twist.phidot];
        let scale = an.iter().fold(0f64, |s, v| s.max(v.abs()));
        for k in 0..3 {
            assert!((fd[k] - an[k]).abs() / scale < 1e-5, "{fd:?} vs {an:?}");
        }
    }

    #[test]
    fn velocity_roundtrip() {
        let (g, tol) = unit();
        let (pose, theta) = regular_config();
        let mats = build_matrices(&g, &pose, &theta, &tol).unwrap();
        assert_eq!(
            inverse_velocity(&mats, &Twist::default(), &tol).unwrap(),
            [0.; 3]
        );
        let rates = [0.3, -1.2, 0.7];
        let back =
            inverse_velocity(&mats, &forward_velocity(&mats, rates, &tol).unwrap(), &tol).unwrap();
        for k in 0..3 {
            assert_abs_diff_eq!(back[k], rates[k], epsilon = 1e-10);
        }
    }

    #[test]
    fn collapsed_first_leg_is_serial_singular() {
        let (g, tol) = unit();
        // P on A₁ with a rotated platform: only leg 1 collapses.
        let pose = Pose::new(0., 0., 0.7);
        let d = g.leg_vectors(&pose);
        let theta = JointAngles::new(0.3, d[1].y.atan2(d[1].x), d[2].y.atan2(d[2].x));
        let mats = build_matrices(&g, &pose, &theta, &tol).unwrap();
        match inverse_velocity(&mats, &Twist::default(), &tol) {
            Err(Error::SerialSingular { legs }) => assert_eq!(legs, vec![1]),
            other => panic!("{other:?}"),
        }
        let report = classify_singularity(&g, &pose, &theta, &tol).unwrap();
        assert_eq!(report.zero_rho_legs, vec![1]);
    }

    #[test]
    fn classification_examples() {
        let (g, tol) = unit();
        let t = JointAngles::new(0.8, 0.8, 0.8);
        let r = classify_singularity(&g, &Pose::trivial(), &t, &tol).unwrap();
        assert_eq!(r.kind, SingularityKind::Both);
        assert!(r.translation);
        assert_eq!(r.intersection_point, None);

        let generic = JointAngles::new(0.2, 0.9, 2.0);
        let r = classify_singularity(&g, &Pose::trivial(), &generic, &tol).unwrap();
        assert_eq!(r.kind, SingularityKind::Serial);
        assert_eq!(r.zero_rho_legs, vec![1, 2, 3]);

        let (pose, theta) = regular_config();
        let r = classify_singularity(&g, &pose, &theta, &tol).unwrap();
        assert_eq!(r.kind, SingularityKind::Regular);
        assert!(r.det_a.abs() > 1e-3 && r.det_b.abs() > 1e-3);
    }

    #[test]
    fn specialized_det_two_routes() {
        let (g, tol) = unit();
        for t in [
            [0., FRAC_PI_3, 2. * FRAC_PI_3],
            [0.2, 0.9, 2.0],
            [-1.0, 2.5, 0.3],
        ] {
            let theta = JointAngles::from_array(t);
            #[rustfmt::skip]
            let explicit = Matrix3::new(
                -t[0].sin(), t[0].cos(), 0.,
                -t[1].sin(), t[1].cos(), t[1].cos(),
                -t[2].sin(), t[2].cos(), t[2].cos() / 2. + S3 * t[2].sin() / 2.,
            );
            let m = explicit;
            let cofactor = m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
                - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
                + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)]);
            let d = det_a_specialized(&g, &theta, &tol);
            assert_abs_diff_eq!(d, cofactor, epsilon = 1e-12);
            assert_abs_diff_eq!(d, explicit.determinant(), epsilon = 1e-12);
        }
        assert_abs_diff_eq!(
            det_a_specialized(&g, &JointAngles::new(1.1, 1.1, 1.1), &tol),
            0.,
            epsilon = 1e-15
        );
    }

    #[test]
    fn concurrency_of_three_lines() {
        let through = |p: Vec2, angle: f64| NormalLine {
            point: p,
            direction: Vec2::from_angle(angle),
        };
        let c = Vec2::new(0.4, -0.2);
        let lines = [
            through(c + Vec2::from_angle(0.3) * 2., 0.3),
            through(c - Vec2::from_angle(1.4), 1.4),
            through(c, 2.9),
        ];
        let k = concurrency(&lines);
        assert!(k.spread < 1e-14);
        assert!(k.point.unwrap().distance(c) < 1e-14);

        let par = [
            through(c, 1.),
            through(Vec2::ZERO, 1.),
            through(c, 1. + std::f64::consts::PI),
        ];
        assert!(concurrency(&par).parallel);
    }
}
