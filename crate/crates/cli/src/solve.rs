//! `ik`, `dk` and `singularity`.

use rpr_core::kinematics::inverse_kinematics_all;
use rpr_core::{
    classify_singularity, direct_kinematics, geometric_dkp, inverse_kinematics, JointAngles,
    ManipulatorGeometry, Pose, Tolerances,
};
use serde_json::json;

use crate::args::{DkArgs, IkArgs, Method, SingularityArgs, ThetaArgs};
use crate::error::{CliError, CliResult};
use crate::output::print_json;

/// Settings shared by every command.
pub struct Context {
    pub geom: ManipulatorGeometry,
    pub tol: Tolerances,
    pub deg: bool,
}

impl Context {
    pub fn angle(&self, v: f64) -> f64 {
        if self.deg {
            v.to_radians()
        } else {
            v
        }
    }

    pub fn theta(&self, t: &ThetaArgs) -> JointAngles {
        JointAngles::new(self.angle(t.t1), self.angle(t.t2), self.angle(t.t3))
    }
}

/// Largest wrapped pose distance between two solution sets.
pub fn hausdorff(a: &[Pose], b: &[Pose]) -> f64 {
    let d = |p: &Pose, q: &Pose| {
        let (dp, da) = p.distance(q);
        dp.max(da)
    };
    let directed = |x: &[Pose], y: &[Pose]| {
        x.iter()
            .map(|p| y.iter().map(|q| d(p, q)).fold(f64::INFINITY, f64::min))
            .fold(0f64, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

fn parse_branch(b: &[u8]) -> CliResult<[u8; 3]> {
    match b {
        &[k1, k2, k3] if b.iter().all(|&k| k <= 1) => Ok([k1, k2, k3]),
        _ => Err(CliError::Usage(format!(
            "--branch expects three values in {{0, 1}}, got {b:?}"
        ))),
    }
}

pub fn ik(args: &IkArgs, ctx: &Context) -> CliResult {
    let p = args.pose;
    let pose = Pose::new(p.x, p.y, ctx.angle(p.phi));
    let solutions = match &args.branch {
        Some(b) => vec![inverse_kinematics(
            &ctx.geom,
            &pose,
            parse_branch(b)?,
            &ctx.tol,
        )?],
        None => inverse_kinematics_all(&ctx.geom, &pose, &ctx.tol)?,
    };
    print_json(json!({ "command": "ik", "pose": pose, "solutions": solutions }))
}

pub fn dk(args: &DkArgs, ctx: &Context) -> CliResult {
    let theta = ctx.theta(&args.theta);
    let mut out = json!({ "command": "dk", "theta": theta });
    let closed =
        (args.method != Method::Geometric).then(|| direct_kinematics(&ctx.geom, &theta, &ctx.tol));
    let geometric = match args.method {
        Method::Closed => None,
        _ => Some(geometric_dkp(&ctx.geom, &theta, &ctx.tol)?),
    };
    if let (Some(c), Some(g)) = (&closed, &geometric) {
        let d = hausdorff(&c.poses, &g.poses);
        if c.kind != g.kind || !(d < 1e-7) {
            return Err(CliError::Verification(format!(
                "closed form ({:?}) and geometric ({:?}) disagree, Hausdorff distance {d:e}",
                c.kind, g.kind
            )));
        }
        out["agreement"] = json!(d);
    }
    if let Some(c) = &closed {
        out["kind"] = json!(c.kind);
        out["poses"] = json!(c.poses);
        out["closed"] = json!(c);
    }
    if let Some(g) = &geometric {
        if closed.is_none() {
            out["kind"] = json!(g.kind);
            out["poses"] = json!(g.poses);
        }
        out["geometric"] = json!(g);
    }
    print_json(out)
}

pub fn singularity(args: &SingularityArgs, ctx: &Context) -> CliResult {
    let theta = match (args.t1, args.t2, args.t3) {
        (Some(a), Some(b), Some(c)) => {
            Some(JointAngles::new(ctx.angle(a), ctx.angle(b), ctx.angle(c)))
        }
        _ => None,
    };
    let pose = match (args.x, args.y, args.phi) {
        (Some(x), Some(y), Some(phi)) => Some(Pose::new(x, y, ctx.angle(phi))),
        _ => None,
    };
    let (theta, poses, dk_kind) = match (theta, pose) {
        (Some(t), Some(p)) => (t, vec![p], None),
        (Some(t), None) => {
            let set = direct_kinematics(&ctx.geom, &t, &ctx.tol);
            (t, set.poses, Some(set.kind))
        }
        (None, Some(p)) => {
            let branch = args
                .branch
                .as_deref()
                .map(parse_branch)
                .transpose()?
                .unwrap_or([0; 3]);
            (
                inverse_kinematics(&ctx.geom, &p, branch, &ctx.tol)?.angles(),
                vec![p],
                None,
            )
        }
        (None, None) => {
            return Err(CliError::Usage(
                "give --t1 --t2 --t3, --x --y --phi, or both".into(),
            ))
        }
    };
    let reports = poses
        .iter()
        .map(|p| {
            let r = classify_singularity(&ctx.geom, p, &theta, &ctx.tol)?;
            Ok(json!({ "pose": p, "report": r }))
        })
        .collect::<CliResult<Vec<_>>>()?;
    print_json(json!({
        "command": "singularity",
        "theta": theta,
        "dk_kind": dk_kind,
        "configurations": reports,
    }))
}
