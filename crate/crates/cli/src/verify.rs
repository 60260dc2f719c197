//! Oracle suites behind `verify`.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rpr_core::coupler::{loop_closure_residuals, DEFAULT_SAMPLES};
use rpr_core::kinematics::{best_leg_pair, second_root};
use rpr_core::oracle::{dkp_bruteforce, jacobian_fd_check};
use rpr_core::{
    build_matrices, classify_dk_degeneracy, direct_kinematics, geometric_dkp, inverse_kinematics,
    mn_coefficients, trace_cardanic, DkKind, Error, JointAngles, Pose, Vec2,
};
use std::f64::consts::PI;
use std::path::Path;

use crate::args::{Scope, VerifyArgs};
use crate::error::{CliError, CliResult};
use crate::output::say;
use crate::solve::{hausdorff, Context};

const DKP_TOL: f64 = 1e-7;
const FD_STEP: f64 = 1e-6;
const FD_TOL: f64 = 1e-5;
const A3_TOL: f64 = 1e-8;
const LOOP_TOL: f64 = 1e-10;
const SCAN_SAMPLES: usize = 1 << 16;
const LISTED_FAILURES: usize = 10;

#[derive(Default)]
struct Suite {
    trials: usize,
    errors: Vec<f64>,
    failures: Vec<String>,
}

impl Suite {
    fn record(&mut self, err: f64, bound: f64, what: impl FnOnce() -> String) {
        self.trials += 1;
        self.errors.push(err);
        if !(err < bound) {
            self.failures.push(what());
        }
    }

    fn fail(&mut self, what: String) {
        self.trials += 1;
        self.failures.push(what);
    }

    fn summary(&self, name: &str, metric: &str) -> String {
        let mut e: Vec<f64> = self
            .errors
            .iter()
            .copied()
            .filter(|v| v.is_finite())
            .collect();
        e.sort_by(f64::total_cmp);
        let (max, mean, median) = if e.is_empty() {
            (f64::NAN, f64::NAN, f64::NAN)
        } else {
            (
                e[e.len() - 1],
                e.iter().sum::<f64>() / e.len() as f64,
                e[e.len() / 2],
            )
        };
        format!(
            "{name}: {} trials, {} failures, {metric} max {max:.3e} mean {mean:.3e} median {median:.3e}",
            self.trials,
            self.failures.len()
        )
    }
}

fn angle(rng: &mut StdRng) -> f64 {
    rng.gen_range(-PI..PI)
}

/// Actuator angles clear of the degenerate sets, with an isolated second
/// root away from `φ = 0`.
fn generic_theta(rng: &mut StdRng, ctx: &Context) -> JointAngles {
    loop {
        let t = JointAngles::new(angle(rng), angle(rng), angle(rng));
        let (m, n) = mn_coefficients(&t);
        if classify_dk_degeneracy(&t, &ctx.tol) == DkKind::TwoSolutions
            && best_leg_pair(&t).1 > 0.1
            && m * m + n * n > 1e-6
            && second_root(m, n).abs() > 1e-4
        {
            return t;
        }
    }
}

/// Random pose and working mode away from both singularity kinds and from
/// the degenerate actuator sets.
fn regular_config(rng: &mut StdRng, ctx: &Context) -> (Pose, JointAngles) {
    let s = ctx.geom.scale();
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
        let Ok(ik) = inverse_kinematics(&ctx.geom, &pose, branch, &ctx.tol) else {
            continue;
        };
        let theta = ik.angles();
        let Ok(m) = build_matrices(&ctx.geom, &pose, &theta, &ctx.tol) else {
            continue;
        };
        let (mm, nn) = mn_coefficients(&theta);
        if m.det_a.abs() > 1e-2 * m.a.norm().powi(3)
            && m.rho().iter().all(|r| r.abs() > 1e-2 * s)
            && mm * mm + nn * nn > 1e-3
        {
            return (pose, theta);
        }
    }
}

fn dkp_suite(rng: &mut StdRng, trials: usize, ctx: &Context) -> Suite {
    let mut suite = Suite::default();
    for _ in 0..trials {
        let theta = generic_theta(rng, ctx);
        let closed = direct_kinematics(&ctx.geom, &theta, &ctx.tol);
        let scan = dkp_bruteforce(&ctx.geom, &theta, SCAN_SAMPLES);
        let geo = match geometric_dkp(&ctx.geom, &theta, &ctx.tol) {
            Ok(g) => g,
            Err(e) => {
                suite.fail(format!("{theta:?}: geometric method failed: {e}"));
                continue;
            }
        };
        if closed.poses.len() != 2 || scan.solutions_found.len() != 2 || geo.poses.len() != 2 {
            suite.fail(format!(
                "{theta:?}: solution counts closed {}, scan {}, geometric {}",
                closed.poses.len(),
                scan.solutions_found.len(),
                geo.poses.len()
            ));
            continue;
        }
        let d = hausdorff(&closed.poses, &scan.solutions_found)
            .max(hausdorff(&closed.poses, &geo.poses));
        suite.record(d, DKP_TOL, || {
            format!("{theta:?}: solution sets differ by {d:e}")
        });
    }
    suite
}

fn jacobian_suite(rng: &mut StdRng, trials: usize, ctx: &Context) -> Suite {
    let mut suite = Suite::default();
    for _ in 0..trials {
        let (pose, theta) = regular_config(rng, ctx);
        match jacobian_fd_check(&ctx.geom, &pose, &theta, FD_STEP, &ctx.tol) {
            Ok(r) => suite.record(r.max_rel_error, FD_TOL, || {
                format!("{pose:?}, {theta:?}: relative error {:e}", r.max_rel_error)
            }),
            Err(e) => suite.fail(format!("{pose:?}, {theta:?}: {e}")),
        }
    }
    suite
}

fn curve_suite(rng: &mut StdRng, trials: usize, ctx: &Context) -> Suite {
    let mut suite = Suite::default();
    let a3 = ctx.geom.base_anchor(3);
    while suite.trials < trials {
        let (t1, t2) = (angle(rng), angle(rng));
        let curve = match trace_cardanic(&ctx.geom, t1, t2, DEFAULT_SAMPLES, &ctx.tol) {
            Ok(c) => c,
            Err(Error::DegenerateLegPair { .. }) => continue,
            Err(e) => {
                suite.fail(format!("({t1}, {t2}): {e}"));
                continue;
            }
        };
        let at_zero = curve
            .samples
            .iter()
            .find(|s| s.phi == 0.)
            .map(|s| s.b3.distance(a3));
        let Some(off) = at_zero else {
            suite.fail(format!("({t1}, {t2}): phi = 0 not sampled"));
            continue;
        };
        let closure = curve
            .samples
            .iter()
            .map(|s| {
                let r = loop_closure_residuals(&ctx.geom, t1, t2, s.phi, s.rho1, s.rho2);
                r[0].abs().max(r[1].abs())
            })
            .fold(0f64, f64::max);
        // Scaled so both checks share one bound.
        let err = (off / A3_TOL).max(closure / LOOP_TOL) * LOOP_TOL;
        suite.record(err, LOOP_TOL, || {
            format!("({t1}, {t2}): A3 offset {off:e}, loop residual {closure:e}")
        });
    }
    suite
}

/// Residuals of every row of a `trace` CSV.
fn check_curve_csv(path: &Path, ctx: &Context) -> CliResult<Suite> {
    let mut rdr = csv::Reader::from_path(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Usage(format!("{}: missing column `{name}`", path.display())))
    };
    let idx = crate::trace::CSV_HEADER.map(col);
    let idx: Vec<usize> = idx.into_iter().collect::<CliResult<_>>()?;
    let mut suite = Suite::default();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let v: Vec<f64> = idx
            .iter()
            .map(|&i| {
                rec.get(i)
                    .and_then(|s| s.trim().parse::<f64>().ok())
                    .ok_or_else(|| CliError::Usage(format!("row {}: bad number", line + 2)))
            })
            .collect::<CliResult<_>>()?;
        let [t1, t2, phi, x, y, rho1, rho2] = v[..] else {
            unreachable!("seven columns are selected")
        };
        let r = loop_closure_residuals(&ctx.geom, t1, t2, phi, rho1, rho2);
        let b3 = ctx.geom.base_anchor(1)
            + Vec2::from_angle(t1) * rho1
            + ctx.geom.local_anchor(3).rotated(phi);
        let err = r[0].abs().max(r[1].abs()).max(b3.distance(Vec2::new(x, y)));
        suite.record(err, LOOP_TOL, || {
            format!("row {}: residual {err:e}", line + 2)
        });
    }
    if suite.trials == 0 {
        return Err(CliError::Usage(format!("{}: no data rows", path.display())));
    }
    Ok(suite)
}

pub fn run(args: &VerifyArgs, ctx: &Context) -> CliResult {
    let mut suites = Vec::new();
    if let Some(path) = &args.curve_csv {
        suites.push(("curve-csv", "residual", check_curve_csv(path, ctx)?));
    } else {
        let mut rng = StdRng::seed_from_u64(args.seed);
        let all = args.scope == Scope::All;
        if all || args.scope == Scope::Dkp {
            suites.push(("dkp", "deviation", dkp_suite(&mut rng, args.trials, ctx)));
        }
        if all || args.scope == Scope::Jacobian {
            suites.push((
                "jacobian",
                "relative error",
                jacobian_suite(&mut rng, args.trials, ctx),
            ));
        }
        if all || args.scope == Scope::Curve {
            suites.push(("curve", "residual", curve_suite(&mut rng, args.trials, ctx)));
        }
    }
    let mut failed = 0;
    for (name, metric, suite) in &suites {
        say(&suite.summary(name, metric))?;
        for f in suite.failures.iter().take(LISTED_FAILURES) {
            say(&format!("  FAIL {f}"))?;
        }
        failed += suite.failures.len();
    }
    if failed > 0 {
        return Err(CliError::Verification(format!(
            "{failed} failing configuration(s)"
        )));
    }
    say("all checks passed")
}
