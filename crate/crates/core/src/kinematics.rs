//! Closed-form inverse and direct kinematics.
//!
//! Each leg constrains `Bᵢ` to the line through `Aᵢ` along `vᵢ`. Eliminating
//! `(x, y)` from the three constraints leaves `m cos φ + n sin φ − m = 0`,
//! whose roots are `φ = 0` (platform on the base, every leg collapsed) and
//! `φ* = 2 atan2(n, m)`. When `m = n = 0` the solution set is a continuum:
//! either a translation along the common prismatic direction (all `θᵢ`
//! equal modulo `π`) or the Reuleaux straight-line motion.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

use serde::{Deserialize, Serialize};

use crate::coupler::{self, ReuleauxDescriptor};
use crate::geometry::{
    constraint_residuals, max_abs, normalize_angle, JointAngles, LegState, ManipulatorGeometry,
    Pose, Tolerances, Vec2,
};
use crate::velocity::{self, SingularityKind};
use crate::{Error, Result};

const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// The three leg pairs, in the order used for tie-breaking.
pub const LEG_PAIRS: [(usize, usize); 3] = [(1, 2), (2, 3), (1, 3)];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IkSolution {
    pub legs: [LegState; 3],
    pub branch: [u8; 3],
}

impl IkSolution {
    pub fn angles(&self) -> JointAngles {
        JointAngles::from_array(self.legs.map(|l| l.theta))
    }

    pub fn signed_rho(&self) -> [f64; 3] {
        self.legs.map(|l| l.signed_rho())
    }
}

/// Inverse kinematics for one working mode.
///
/// `θᵢ = atan2(bᵢ − aᵢ) + kᵢ π`, `ρᵢ = ‖bᵢ − aᵢ‖`. Fails with
/// [`Error::LegAtAnchor`] when some `Bᵢ` coincides with `Aᵢ`, in which case
/// the error still carries all three extensions.
pub fn inverse_kinematics(
    geom: &ManipulatorGeometry,
    pose: &Pose,
    branch: [u8; 3],
    tol: &Tolerances,
) -> Result<IkSolution> {
    if branch.iter().any(|&k| k > 1) {
        return Err(Error::InvalidInput(format!(
            "branch entries must be 0 or 1, got {branch:?}"
        )));
    }
    if !pose.is_finite() {
        return Err(Error::InvalidInput("pose must be finite".into()));
    }
    let d = geom.leg_vectors(pose);
    let rho = d.map(Vec2::norm);
    let at_anchor: Vec<usize> = (0..3)
        .filter(|&i| rho[i] < tol.rho * geom.scale())
        .map(|i| i + 1)
        .collect();
    if !at_anchor.is_empty() {
        return Err(Error::LegAtAnchor {
            legs: at_anchor,
            rho,
        });
    }
    let legs = std::array::from_fn(|i| LegState {
        theta: normalize_angle(d[i].y.atan2(d[i].x) + f64::from(branch[i]) * PI),
        rho: rho[i],
        reversed: branch[i] == 1,
    });
    Ok(IkSolution { legs, branch })
}

/// All eight working modes, in binary order of `(k₁, k₂, k₃)`.
pub fn inverse_kinematics_all(
    geom: &ManipulatorGeometry,
    pose: &Pose,
    tol: &Tolerances,
) -> Result<Vec<IkSolution>> {
    (0..8u8)
        .map(|b| inverse_kinematics(geom, pose, [b >> 2 & 1, b >> 1 & 1, b & 1], tol))
        .collect()
}

/// Coefficients of `m cos φ + n sin φ − m = 0`.
pub fn mn_coefficients(theta: &JointAngles) -> (f64, f64) {
    let (s1, c1) = theta.theta1.sin_cos();
    let (s2, c2) = theta.theta2.sin_cos();
    let (s3, c3) = theta.theta3.sin_cos();
    let m = s3 * c2 * s1 + SQRT_3 * c3 * s2 * c1 - 2. * c3 * s2 * s1 - SQRT_3 * c3 * c2 * s1
        + s3 * s2 * c1;
    let n = c3 * s2 * c1 + SQRT_3 * s3 * s2 * c1 - 2. * s3 * c2 * c1 - SQRT_3 * s3 * c2 * s1
        + c3 * c2 * s1;
    (m, n)
}

/// The nonzero root `φ*` of the `m`/`n` equation: `sin φ* = 2mn/(m²+n²)`,
/// `cos φ* = (m²−n²)/(m²+n²)`.
pub fn second_root(m: f64, n: f64) -> f64 {
    normalize_angle(2. * n.atan2(m))
}

/// `a − b` reduced modulo `π` to `(-π/2, π/2]`.
pub(crate) fn diff_mod_pi(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    if d > FRAC_PI_2 {
        d - PI
    } else {
        d
    }
}

/// Whether legs 1 and 2 drive the Cardanic curve of `B₃` into a straight
/// segment: `θ₂ − θ₁ ≡ π/3 (mod π)`.
pub fn cardanic_pair_degenerate(theta1: f64, theta2: f64, tol: f64) -> bool {
    (diff_mod_pi(theta2, theta1) - FRAC_PI_3).abs() < tol
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DkKind {
    TwoSolutions,
    TrivialOnly,
    ContinuumTranslation,
    ContinuumReuleaux,
    Degenerate,
}

/// Classifies the solution structure of the direct kinematics from angle
/// differences alone. Returns `TwoSolutions` when no continuum condition holds.
///
/// + `θ₁ ≡ θ₂ ≡ θ₃ (mod π)`: the platform translates along the common axis.
/// + `θ₂ − θ₁ ≡ π/3`, `θ₃ − θ₁ ≡ −π/3 (mod π)`: Reuleaux straight-line motion.
pub fn classify_dk_degeneracy(theta: &JointAngles, tol: &Tolerances) -> DkKind {
    let d21 = diff_mod_pi(theta.theta2, theta.theta1);
    let d31 = diff_mod_pi(theta.theta3, theta.theta1);
    if d21.abs() < tol.angle && d31.abs() < tol.angle {
        DkKind::ContinuumTranslation
    } else if (d21 - FRAC_PI_3).abs() < tol.angle && (d31 + FRAC_PI_3).abs() < tol.angle {
        DkKind::ContinuumReuleaux
    } else {
        DkKind::TwoSolutions
    }
}

/// Position of `P` at orientation `phi` from the constraints of legs `i`, `j`
/// (`1..=3`). `None` when the two prismatic axes are parallel.
pub fn position_from_leg_pair(
    geom: &ManipulatorGeometry,
    theta: &JointAngles,
    phi: f64,
    (i, j): (usize, usize),
    tol: &Tolerances,
) -> Option<Vec2> {
    let t = theta.as_array();
    let (si, ci) = t[i - 1].sin_cos();
    let (sj, cj) = t[j - 1].sin_cos();
    let den = (t[j - 1] - t[i - 1]).sin();
    if den.abs() < tol.leg_pair {
        return None;
    }
    // sₖ x − cₖ y = hₖ with hₖ the constraint evaluated at P = 0.
    let h = |k: usize, s: f64, c: f64| {
        let w = geom.base_anchor(k) - geom.local_anchor(k).rotated(phi);
        s * w.x - c * w.y
    };
    let hi = h(i, si, ci);
    let hj = h(j, sj, cj);
    Some(Vec2::new(
        (ci * hj - cj * hi) / den,
        (si * hj - sj * hi) / den,
    ))
}

/// Leg pair with the largest `|sin(θᵢ − θⱼ)|`, with that value.
pub fn best_leg_pair(theta: &JointAngles) -> ((usize, usize), f64) {
    let t = theta.as_array();
    LEG_PAIRS
        .iter()
        .map(|&(i, j)| ((i, j), (t[j - 1] - t[i - 1]).sin().abs()))
        .fold(((1, 2), -1.), |best, c| if c.1 > best.1 { c } else { best })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum Continuum {
    /// Every pose `(point + s·direction, φ = 0)`.
    Translation {
        point: Vec2,
        direction: Vec2,
    },
    Reuleaux(ReuleauxDescriptor),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DkSolutionSet {
    pub kind: DkKind,
    /// Isolated solutions; the trivial pose is always first.
    pub poses: Vec<Pose>,
    pub m: f64,
    pub n: f64,
    pub continuum: Option<Continuum>,
    /// The second root collides with the trivial one.
    pub coincident: bool,
    /// Leg pair used for `(x, y)` of the second pose.
    pub leg_pair: Option<(usize, usize)>,
    /// Singularity class of each entry of `poses`.
    pub singularities: Vec<SingularityKind>,
}

impl DkSolutionSet {
    pub fn is_continuum(&self) -> bool {
        self.continuum.is_some()
    }
}

/// Direct kinematics: all platform poses compatible with `theta`.
pub fn direct_kinematics(
    geom: &ManipulatorGeometry,
    theta: &JointAngles,
    tol: &Tolerances,
) -> DkSolutionSet {
    let (m, n) = mn_coefficients(theta);
    let mut set = DkSolutionSet {
        kind: classify_dk_degeneracy(theta, tol),
        poses: vec![Pose::trivial()],
        m,
        n,
        continuum: None,
        coincident: false,
        leg_pair: None,
        singularities: Vec::new(),
    };
    match set.kind {
        DkKind::ContinuumTranslation => {
            set.continuum = Some(Continuum::Translation {
                point: geom.base_anchor(1),
                direction: theta.directions()[0],
            });
        }
        DkKind::ContinuumReuleaux => match coupler::reuleaux_descriptor(geom, theta, tol) {
            Ok(d) => set.continuum = Some(Continuum::Reuleaux(d)),
            Err(_) => set.kind = DkKind::Degenerate,
        },
        _ if m * m + n * n <= tol.mn => set.kind = DkKind::Degenerate,
        _ => {
            let phi = second_root(m, n);
            let (pair, _) = best_leg_pair(theta);
            let second =
                position_from_leg_pair(geom, theta, phi, pair, tol).map(|p| Pose { p, phi });
            let accept = second.filter(|pose| {
                let bound = tol.residual * geom.scale().max(pose.p.norm());
                max_abs(&constraint_residuals(geom, pose, theta)) < bound
            });
            match accept {
                Some(pose) => {
                    set.coincident = phi.abs() < tol.angle;
                    set.leg_pair = Some(pair);
                    set.poses.push(pose);
                }
                None => set.kind = DkKind::TrivialOnly,
            }
        }
    }
    set.singularities = set
        .poses
        .iter()
        .map(|pose| {
            velocity::classify_singularity(geom, pose, theta, tol)
                .map(|r| r.kind)
                .unwrap_or(SingularityKind::Both)
        })
        .collect();
    set
}
