use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// One or more platform anchors sit on their base anchor, so the leg
    /// direction is undefined (serial singularity, `ρᵢ = 0`).
    #[error("leg(s) {legs:?} at anchor: actuated angle undefined (rho = {rho:?})")]
    LegAtAnchor { legs: Vec<usize>, rho: [f64; 3] },
    #[error("pose and joint angles are inconsistent (max residual {residual:e})")]
    InconsistentState { residual: f64 },
    #[error("parallel singularity: det(A) = {det_a:e}")]
    ParallelSingular { det_a: f64 },
    #[error("serial singularity on leg(s) {legs:?}")]
    SerialSingular { legs: Vec<usize> },
    #[error("legs 1 and 2 are parallel (sin(theta1 - theta2) = {sin_diff:e})")]
    DegenerateLegPair { sin_diff: f64 },
    #[error("joint angles do not satisfy the Reuleaux condition")]
    NotReuleaux,
    #[error("local direct kinematics failed to reconverge (near a singularity)")]
    SingularNearby,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("geometry config: {0}")]
    Config(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
