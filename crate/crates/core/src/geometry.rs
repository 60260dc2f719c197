//! Fixed geometry of the manipulator and the planar primitives shared by all
//! solvers.
//!
//! Base anchors `aᵢ` and platform anchors `bᵢ'` (mobile frame) form two unit
//! equilateral triangles with vertices `(0,0)`, `(1,0)`, `(1/2, √3/2)`, both
//! scaled by [`ManipulatorGeometry::scale`]. The operation point `P` is the
//! platform origin, so `B₁ = P`. Legs are indexed `1..=3` in the public API
//! and map, in order, to the rows of the velocity matrices.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::path::Path;

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Planar vector in length units.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Self = Self { x: 0., y: 0. };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Unit vector at angle `theta`.
    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self { x: c, y: s }
    }

    pub fn dot(self, rhs: Self) -> f64 {
        self.x * rhs.x + self.y * rhs.y
    }

    /// Scalar cross product `self.x * rhs.y - self.y * rhs.x`.
    pub fn cross(self, rhs: Self) -> f64 {
        self.x * rhs.y - self.y * rhs.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Quarter-turn `E v` with `E = [[0, -1], [1, 0]]`.
    pub fn perp(self) -> Self {
        Self {
            x: -self.y,
            y: self.x,
        }
    }

    pub fn rotated(self, phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        Self {
            x: c * self.x - s * self.y,
            y: s * self.x + c * self.y,
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(self, rhs: Self) -> f64 {
        (self - rhs).norm()
    }
}

impl Add for Vec2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, rhs: Self) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Vec2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Self::new(self.x * k, self.y * k)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        v * self
    }
}

impl Neg for Vec2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// Maps an angle to `(-π, π]`.
pub fn normalize_angle(angle: f64) -> f64 {
    let r = angle.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Signed difference `a - b` wrapped to `(-π, π]`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    normalize_angle(a - b)
}

/// Platform pose: position of the operation point and orientation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub p: Vec2,
    pub phi: f64,
}

impl Pose {
    /// Builds a pose, normalizing `phi` to `(-π, π]`.
    pub fn new(x: f64, y: f64, phi: f64) -> Self {
        Self {
            p: Vec2::new(x, y),
            phi: normalize_angle(phi),
        }
    }

    /// The pose where the platform coincides with the base.
    pub const fn trivial() -> Self {
        Self {
            p: Vec2::ZERO,
            phi: 0.,
        }
    }

    /// Position distance plus wrapped orientation distance, as a pair.
    pub fn distance(&self, other: &Pose) -> (f64, f64) {
        (
            self.p.distance(other.p),
            angle_diff(self.phi, other.phi).abs(),
        )
    }

    pub fn is_finite(&self) -> bool {
        self.p.is_finite() && self.phi.is_finite()
    }
}

/// Actuated joint values.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct JointAngles {
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
}

impl JointAngles {
    /// Builds joint angles, each normalized to `(-π, π]`.
    pub fn new(theta1: f64, theta2: f64, theta3: f64) -> Self {
        Self {
            theta1: normalize_angle(theta1),
            theta2: normalize_angle(theta2),
            theta3: normalize_angle(theta3),
        }
    }

    pub fn from_array(t: [f64; 3]) -> Self {
        Self::new(t[0], t[1], t[2])
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.theta1, self.theta2, self.theta3]
    }

    /// Unit direction `vᵢ = (cos θᵢ, sin θᵢ)` of each prismatic axis.
    pub fn directions(&self) -> [Vec2; 3] {
        self.as_array().map(Vec2::from_angle)
    }
}

/// Per-leg inverse kinematics result.
///
/// `rho` is the canonical nonnegative extension. When `reversed` is set the
/// angle was flipped by `π`, and the signed projection `vᵢᵀ(bᵢ − aᵢ)` is `-rho`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LegState {
    pub theta: f64,
    pub rho: f64,
    pub reversed: bool,
}

impl LegState {
    pub fn signed_rho(&self) -> f64 {
        if self.reversed {
            -self.rho
        } else {
            self.rho
        }
    }
}

const UNIT_TRIANGLE: [Vec2; 3] = [
    Vec2::new(0., 0.),
    Vec2::new(1., 0.),
    Vec2::new(0.5, 0.866_025_403_784_438_6),
];

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GeometryConfig {
    scale: f64,
}

/// Base anchors, platform anchors (mobile frame) and the uniform scale.
///
/// Anchors are derived from `scale` and are not user-editable.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ManipulatorGeometry {
    a: [Vec2; 3],
    b_local: [Vec2; 3],
    scale: f64,
}

impl Default for ManipulatorGeometry {
    fn default() -> Self {
        Self::unit()
    }
}

impl ManipulatorGeometry {
    pub fn unit() -> Self {
        Self {
            a: UNIT_TRIANGLE,
            b_local: UNIT_TRIANGLE,
            scale: 1.,
        }
    }

    pub fn new(scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.) {
            return Err(Error::InvalidInput(format!(
                "scale must be finite and positive, got {scale}"
            )));
        }
        Ok(Self {
            a: UNIT_TRIANGLE.map(|v| v * scale),
            b_local: UNIT_TRIANGLE.map(|v| v * scale),
            scale,
        })
    }

    /// Parses `{ "scale": <f64> }`.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: GeometryConfig = serde_json::from_str(text)?;
        Self::new(cfg.scale)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Base anchor `aᵢ`, `leg ∈ 1..=3`.
    pub fn base_anchor(&self, leg: usize) -> Vec2 {
        self.a[leg_index(leg)]
    }

    /// Platform anchor `bᵢ'` in the mobile frame, `leg ∈ 1..=3`.
    pub fn local_anchor(&self, leg: usize) -> Vec2 {
        self.b_local[leg_index(leg)]
    }

    pub fn base_anchors(&self) -> [Vec2; 3] {
        self.a
    }

    pub fn local_anchors(&self) -> [Vec2; 3] {
        self.b_local
    }

    /// All three platform anchors in the base frame.
    pub fn platform_anchors(&self, pose: &Pose) -> [Vec2; 3] {
        self.b_local.map(|b| pose.p + b.rotated(pose.phi))
    }

    /// Leg vectors `bᵢ − aᵢ`.
    pub fn leg_vectors(&self, pose: &Pose) -> [Vec2; 3] {
        let b = self.platform_anchors(pose);
        [b[0] - self.a[0], b[1] - self.a[1], b[2] - self.a[2]]
    }

    /// Signed extensions `ρᵢ = vᵢᵀ(bᵢ − aᵢ)` along the given actuator axes.
    pub fn signed_rho(&self, pose: &Pose, theta: &JointAngles) -> [f64; 3] {
        let d = self.leg_vectors(pose);
        let v = theta.directions();
        [v[0].dot(d[0]), v[1].dot(d[1]), v[2].dot(d[2])]
    }
}

fn leg_index(leg: usize) -> usize {
    assert!(
        (1..=3).contains(&leg),
        "leg index must be 1, 2 or 3, got {leg}"
    );
    leg - 1
}

/// Numerical thresholds. Length tolerances are multiplied by the geometry
/// scale where they are applied.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Constraint residual (length).
    pub residual: f64,
    /// Angle-difference predicates (rad).
    pub angle: f64,
    /// Lower bound on `m² + n²` for an isolated second root.
    pub mn: f64,
    /// Relative bound on `|det A| / ‖A‖_F³`.
    pub det_rel: f64,
    /// Serial singularity bound on `|ρᵢ|` (length).
    pub rho: f64,
    /// Spread of the normal-line intersection (length).
    pub concurrency: f64,
    /// Residual above which `(pose, θ)` is rejected as inconsistent (length).
    pub consistency: f64,
    /// Lower bound on `|sin(θᵢ − θⱼ)|` for a usable leg pair.
    pub leg_pair: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            residual: 1e-9,
            angle: 1e-9,
            mn: 1e-12,
            det_rel: 1e-9,
            rho: 1e-9,
            concurrency: 1e-6,
            consistency: 1e-6,
            leg_pair: 1e-9,
        }
    }
}

/// `R(φ) = [[cos φ, −sin φ], [sin φ, cos φ]]`.
pub fn rotation_matrix(phi: f64) -> Matrix2<f64> {
    let (s, c) = phi.sin_cos();
    Matrix2::new(c, -s, s, c)
}

/// Platform anchor `bᵢ = p + R(φ) bᵢ'` in the base frame, `leg ∈ 1..=3`.
pub fn platform_anchor(geom: &ManipulatorGeometry, pose: &Pose, leg: usize) -> Vec2 {
    pose.p + geom.local_anchor(leg).rotated(pose.phi)
}

/// Signed distance of each `Bᵢ` from the prismatic axis through `Aᵢ` along
/// `vᵢ`: `sin θᵢ (bᵢ − aᵢ)ₓ − cos θᵢ (bᵢ − aᵢ)ᵧ`.
///
/// All three vanish iff the pose is reachable with these actuator angles for
/// some real extensions.
pub fn constraint_residuals(
    geom: &ManipulatorGeometry,
    pose: &Pose,
    theta: &JointAngles,
) -> [f64; 3] {
    let d = geom.leg_vectors(pose);
    let t = theta.as_array();
    std::array::from_fn(|i| {
        let (s, c) = t[i].sin_cos();
        s * d[i].x - c * d[i].y
    })
}

pub(crate) fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0., |m, v| m.max(v.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_6};

    const S3: f64 = 1.732_050_807_568_877_2;

    #[test]
    fn rotation_special_angles() {
        assert_eq!(rotation_matrix(0.), Matrix2::identity());
        let q = rotation_matrix(FRAC_PI_2);
        let e = Matrix2::new(0., -1., 1., 0.);
        assert_abs_diff_eq!((q - e).abs().max(), 0., epsilon = 1e-16);
        let r = rotation_matrix(0.3);
        assert_abs_diff_eq!(
            (r * r.transpose() - Matrix2::identity()).abs().max(),
            0.,
            epsilon = 1e-12
        );
    }

    #[test]
    fn normalization_range() {
        assert_eq!(normalize_angle(PI), PI);
        assert_eq!(normalize_angle(-PI), PI);
        assert_abs_diff_eq!(normalize_angle(3. * PI / 2.), -FRAC_PI_2, epsilon = 1e-15);
        assert_abs_diff_eq!(normalize_angle(-7.), -7. + TAU, epsilon = 1e-15);
        assert_eq!(Pose::new(0., 0., TAU).phi, 0.);
    }

    #[test]
    fn anchors() {
        let g = ManipulatorGeometry::unit();
        let o = Pose::trivial();
        assert_eq!(platform_anchor(&g, &o, 1), Vec2::ZERO);
        let b3 = platform_anchor(&g, &o, 3);
        assert_abs_diff_eq!(b3.x, 0.5, epsilon = 1e-16);
        assert_abs_diff_eq!(b3.y, S3 / 2., epsilon = 1e-16);

        let pose = Pose::new(0.3, 0.2, 0.5);
        let b2 = platform_anchor(&g, &pose, 2);
        assert_abs_diff_eq!(b2.x, 0.3 + 0.5f64.cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(b2.y, 0.2 + 0.5f64.sin(), epsilon = 1e-15);
        assert_eq!(platform_anchor(&g, &pose, 1), pose.p);
    }

    #[test]
    #[should_panic]
    fn leg_index_out_of_range() {
        platform_anchor(&ManipulatorGeometry::unit(), &Pose::trivial(), 4);
    }

    /// The three constraint equations expanded in trigonometric form, valid for unit scale.
    fn expanded_residuals(pose: &Pose, t: [f64; 3]) -> [f64; 3] {
        let (x, y, phi) = (pose.p.x, pose.p.y, pose.phi);
        [
            t[0].sin() * x - t[0].cos() * y,
            t[1].sin() * x - t[1].cos() * y + (t[1] - phi).sin() - t[1].sin(),
            t[2].sin() * x - t[2].cos() * y - (t[2] - phi + FRAC_PI_6).cos() - t[2].sin() / 2.
                + t[2].cos() * S3 / 2.,
        ]
    }

    #[test]
    fn residuals_match_expanded_equations() {
        let g = ManipulatorGeometry::unit();
        for (pose, t) in [
            (Pose::new(0.3, 0.2, 0.5), [0.2, 0.9, 2.0]),
            (Pose::new(-1.1, 0.7, -2.5), [-3.0, 1.3, 0.1]),
            (Pose::new(0.0, 0.0, 1.0), [0.5, 0.5, 0.5]),
        ] {
            let r = constraint_residuals(&g, &pose, &JointAngles::from_array(t));
            let e = expanded_residuals(&pose, t);
            for i in 0..3 {
                assert_abs_diff_eq!(r[i], e[i], epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn residuals_vanish_on_known_configurations() {
        let g = ManipulatorGeometry::unit();
        let any = JointAngles::new(0.4, -1.2, 2.9);
        assert_eq!(constraint_residuals(&g, &Pose::trivial(), &any), [0.; 3]);

        let pose = Pose::new(0.5, S3 / 6., 0.);
        let t = JointAngles::new(FRAC_PI_6, FRAC_PI_6, FRAC_PI_6);
        for r in constraint_residuals(&g, &pose, &t) {
            assert_abs_diff_eq!(r, 0., epsilon = 1e-15);
        }
    }

    #[test]
    fn geometry_config() {
        let g = ManipulatorGeometry::from_json(r#"{ "scale": 2.5 }"#).unwrap();
        assert_eq!(g.scale(), 2.5);
        assert_eq!(g.base_anchor(2), Vec2::new(2.5, 0.));
        assert_abs_diff_eq!(g.local_anchor(2).distance(g.local_anchor(1)), 2.5);
        assert!(ManipulatorGeometry::from_json(r#"{ "scale": -1 }"#).is_err());
        assert!(ManipulatorGeometry::from_json(r#"{ "scale": 1, "a1": [0, 0] }"#).is_err());
        assert!(ManipulatorGeometry::from_json("{}").is_err());
    }

    #[test]
    fn signed_rho_tracks_branch() {
        let leg = LegState {
            theta: 1.0,
            rho: 0.7,
            reversed: true,
        };
        assert_eq!(leg.signed_rho(), -0.7);
    }
}
