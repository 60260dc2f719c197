//! Kinematics of the planar 3-RPR parallel manipulator with unit equilateral
//! base and platform.
//!
//! The base revolute joints are actuated (angles `θ₁, θ₂, θ₃`); the prismatic
//! joints and platform revolutes are passive. The crate covers:
//!
//! + [`geometry`]: anchors, rotation, loop-closure residuals.
//! + [`kinematics`]: closed-form inverse and direct kinematics, including the
//!   classification of degenerate actuator settings.
//! + [`velocity`]: the velocity model `A t = B θ̇` and singularity analysis.
//! + [`coupler`]: the Cardanic curve of the third platform anchor and its
//!   degeneration into a Reuleaux straight-line motion.
//! + [`oracle`]: brute-force checks that share no code with the closed forms.
//!
//! All operations are pure functions over immutable values.

pub mod coupler;
mod error;
pub mod geometry;
pub mod kinematics;
pub mod oracle;
pub mod velocity;

pub use coupler::{
    geometric_dkp, geometric_dkp_on_curve, reuleaux_descriptor, rho_from_phi, trace_cardanic,
    CouplerCurve, CurveSample, GeometricDkp, ReuleauxDescriptor,
};
pub use error::{Error, Result};
pub use geometry::{
    constraint_residuals, normalize_angle, platform_anchor, rotation_matrix, JointAngles, LegState,
    ManipulatorGeometry, Pose, Tolerances, Vec2,
};
pub use kinematics::{
    classify_dk_degeneracy, direct_kinematics, inverse_kinematics, mn_coefficients, Continuum,
    DkKind, DkSolutionSet, IkSolution,
};
pub use velocity::{
    build_matrices, classify_singularity, det_a_specialized, forward_velocity, inverse_velocity,
    KinematicMatrices, SingularityKind, SingularityReport, Twist,
};
