//! Grid sweeps of `det A`, `det B` or the solution count.

use rayon::prelude::*;
use rpr_core::{
    build_matrices, classify_singularity, direct_kinematics, inverse_kinematics, normalize_angle,
    Error, JointAngles, Pose, Vec2,
};

use crate::args::{Quantity, Space, SweepArgs};
use crate::error::{CliError, CliResult};
use crate::output::{csv_writer, num, Svg, VIEW_MIN, VIEW_SIZE};
use crate::solve::Context;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Axis {
    Range { min: f64, max: f64, count: usize },
    Fixed(f64),
}

impl Axis {
    fn values(&self) -> Vec<f64> {
        match *self {
            Axis::Fixed(v) => vec![v],
            Axis::Range { min, max, count } => (0..count)
                .map(|k| min + (max - min) * k as f64 / (count - 1) as f64)
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub space: Space,
    pub axes: [Axis; 3],
    pub quantity: Quantity,
}

fn axis_names(space: Space) -> [&'static str; 3] {
    match space {
        Space::Joint => ["theta1", "theta2", "theta3"],
        Space::Cartesian => ["x", "y", "phi"],
    }
}

fn axis_index(space: Space, name: &str) -> CliResult<usize> {
    let alias = match name {
        "t1" => "theta1",
        "t2" => "theta2",
        "t3" => "theta3",
        other => other,
    };
    axis_names(space)
        .iter()
        .position(|&n| n == alias)
        .ok_or_else(|| CliError::Usage(format!("unknown axis `{name}` for {space:?} space")))
}

fn is_angle(space: Space, axis: usize) -> bool {
    space == Space::Joint || axis == 2
}

fn parse_f64(s: &str, what: &str) -> CliResult<f64> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| CliError::Usage(format!("bad {what} `{s}`")))
}

impl SweepSpec {
    pub fn parse(args: &SweepArgs, ctx: &Context) -> CliResult<Self> {
        let space = args.space;
        let mut axes: [Option<Axis>; 3] = [None; 3];
        let scale_of = |i: usize, v: f64| if is_angle(space, i) { ctx.angle(v) } else { v };
        for r in &args.ranges {
            let (name, rest) = r
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("range `{r}` is not AXIS=MIN:MAX:COUNT")))?;
            let i = axis_index(space, name)?;
            let parts: Vec<&str> = rest.split(':').collect();
            let [min, max, count] = parts[..] else {
                return Err(CliError::Usage(format!(
                    "range `{r}` is not AXIS=MIN:MAX:COUNT"
                )));
            };
            let (min, max) = (
                scale_of(i, parse_f64(min, "minimum")?),
                scale_of(i, parse_f64(max, "maximum")?),
            );
            let count: usize = count
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad count in `{r}`")))?;
            if count < 2 || !(min < max) {
                return Err(CliError::Usage(format!(
                    "range `{r}` needs count >= 2 and min < max"
                )));
            }
            if axes[i].replace(Axis::Range { min, max, count }).is_some() {
                return Err(CliError::Usage(format!("axis `{name}` given twice")));
            }
        }
        for f in &args.fixed {
            let (name, v) = f
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("pin `{f}` is not AXIS=VALUE")))?;
            let i = axis_index(space, name)?;
            let v = scale_of(i, parse_f64(v, "value")?);
            if axes[i].replace(Axis::Fixed(v)).is_some() {
                return Err(CliError::Usage(format!("axis `{name}` given twice")));
            }
        }
        Ok(Self {
            space,
            axes: axes.map(|a| a.unwrap_or(Axis::Fixed(0.))),
            quantity: args.quantity,
        })
    }

    pub fn swept(&self) -> Vec<usize> {
        (0..3)
            .filter(|&i| matches!(self.axes[i], Axis::Range { .. }))
            .collect()
    }

    /// Grid points, first axis slowest.
    pub fn points(&self) -> Vec<[f64; 3]> {
        let v = self.axes.map(|a| a.values());
        let mut out = Vec::with_capacity(v[0].len() * v[1].len() * v[2].len());
        for &a in &v[0] {
            for &b in &v[1] {
                for &c in &v[2] {
                    out.push([a, b, c]);
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct Row {
    pub theta: [f64; 3],
    pub pose: [f64; 3],
    pub det_a: f64,
    pub det_b: f64,
    pub kind: String,
    pub solutions: f64,
}

impl Row {
    pub fn value(&self, q: Quantity) -> f64 {
        match q {
            Quantity::DetA => self.det_a,
            Quantity::DetB => self.det_b,
            Quantity::Solutions => self.solutions,
        }
    }
}

fn solution_count(ctx: &Context, theta: &JointAngles) -> f64 {
    let set = direct_kinematics(&ctx.geom, theta, &ctx.tol);
    if set.is_continuum() {
        f64::INFINITY
    } else {
        set.poses.len() as f64
    }
}

/// Joint space: the nontrivial direct-kinematics pose when it exists,
/// otherwise the trivial one.
fn joint_row(ctx: &Context, t: [f64; 3]) -> Row {
    let theta = JointAngles::from_array(t);
    let set = direct_kinematics(&ctx.geom, &theta, &ctx.tol);
    let pose = *set
        .poses
        .last()
        .expect("the trivial pose is always present");
    let (det_a, det_b) = build_matrices(&ctx.geom, &pose, &theta, &ctx.tol)
        .map(|m| (m.det_a, m.det_b))
        .unwrap_or((f64::NAN, f64::NAN));
    Row {
        theta: t,
        pose: [pose.p.x, pose.p.y, pose.phi],
        det_a,
        det_b,
        kind: format!("{:?}", set.kind),
        solutions: if set.is_continuum() {
            f64::INFINITY
        } else {
            set.poses.len() as f64
        },
    }
}

/// Cartesian space: working mode `0,0,0`; angles of legs sitting on their
/// anchors are undefined (NaN).
fn cartesian_row(ctx: &Context, q: [f64; 3]) -> Row {
    let pose = Pose::new(q[0], q[1], q[2]);
    match inverse_kinematics(&ctx.geom, &pose, [0; 3], &ctx.tol) {
        Ok(ik) => {
            let theta = ik.angles();
            let (det_a, det_b, kind) =
                match classify_singularity(&ctx.geom, &pose, &theta, &ctx.tol) {
                    Ok(r) => (r.det_a, r.det_b, format!("{:?}", r.kind)),
                    Err(e) => (f64::NAN, f64::NAN, format!("{e}")),
                };
            Row {
                theta: theta.as_array(),
                pose: q,
                det_a,
                det_b,
                kind,
                solutions: solution_count(ctx, &theta),
            }
        }
        Err(Error::LegAtAnchor { legs, rho }) => {
            let l = ctx.geom.leg_vectors(&pose);
            let theta: [f64; 3] = std::array::from_fn(|i| {
                if legs.contains(&(i + 1)) {
                    f64::NAN
                } else {
                    normalize_angle(l[i].y.atan2(l[i].x))
                }
            });
            Row {
                theta,
                pose: q,
                det_a: f64::NAN,
                det_b: rho[0] * rho[1] * rho[2],
                kind: "Serial".into(),
                solutions: f64::NAN,
            }
        }
        Err(e) => Row {
            theta: [f64::NAN; 3],
            pose: q,
            det_a: f64::NAN,
            det_b: f64::NAN,
            kind: format!("{e}"),
            solutions: f64::NAN,
        },
    }
}

pub fn evaluate(spec: &SweepSpec, ctx: &Context) -> Vec<Row> {
    spec.points()
        .par_iter()
        .map(|&q| match spec.space {
            Space::Joint => joint_row(ctx, q),
            Space::Cartesian => cartesian_row(ctx, q),
        })
        .collect()
}

pub fn run(args: &SweepArgs, ctx: &Context) -> CliResult {
    let spec = SweepSpec::parse(args, ctx)?;
    if args.svg.is_some() && spec.swept().len() != 2 {
        return Err(CliError::Usage("--svg needs exactly two swept axes".into()));
    }
    let rows = evaluate(&spec, ctx);

    let mut w = csv_writer(&args.out)?;
    let mut header = vec![
        "theta1", "theta2", "theta3", "x", "y", "phi", "detA", "detB", "kind",
    ];
    let with_solutions = spec.quantity == Quantity::Solutions;
    if with_solutions {
        header.push("solutions");
    }
    w.write_record(&header)?;
    for r in &rows {
        let mut rec: Vec<String> = r.theta.iter().chain(&r.pose).map(|&v| num(v)).collect();
        rec.push(num(r.det_a));
        rec.push(num(r.det_b));
        rec.push(r.kind.clone());
        if with_solutions {
            rec.push(num(r.solutions));
        }
        w.write_record(&rec)?;
    }
    w.flush()?;

    if let Some(path) = &args.svg {
        render(&spec, &rows, ctx).write(path)?;
    }
    eprintln!("wrote {} rows to {}", rows.len(), args.out.display());
    Ok(())
}

/// Zero-level segments of a grid function by marching squares.
pub fn zero_contour(xs: &[f64], ys: &[f64], v: &dyn Fn(usize, usize) -> f64) -> Vec<[Vec2; 2]> {
    let mut out = Vec::new();
    for i in 0..xs.len().saturating_sub(1) {
        for j in 0..ys.len().saturating_sub(1) {
            let c = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let f = c.map(|(a, b)| v(a, b));
            if f.iter().any(|x| !x.is_finite()) {
                continue;
            }
            let p = c.map(|(a, b)| Vec2::new(xs[a], ys[b]));
            let mut cross = Vec::with_capacity(4);
            for e in 0..4 {
                let (a, b) = (e, (e + 1) % 4);
                if (f[a] > 0.) != (f[b] > 0.) {
                    let t = f[a] / (f[a] - f[b]);
                    cross.push(p[a] + (p[b] - p[a]) * t);
                }
            }
            match cross.len() {
                2 => out.push([cross[0], cross[1]]),
                4 => {
                    let center = f.iter().sum::<f64>() / 4.;
                    if (center > 0.) == (f[0] > 0.) {
                        out.push([cross[0], cross[1]]);
                        out.push([cross[2], cross[3]]);
                    } else {
                        out.push([cross[3], cross[0]]);
                        out.push([cross[1], cross[2]]);
                    }
                }
                _ => {}
            }
        }
    }
    out
}

fn fill(q: Quantity, v: f64) -> &'static str {
    match q {
        Quantity::Solutions => match v {
            v if v.is_infinite() => "#d6604d",
            v if v >= 2. => "#92c5de",
            v if v >= 1. => "#fddbc7",
            _ => "#dddddd",
        },
        _ if v.is_nan() => "#dddddd",
        _ if v > 0. => "#f4a582",
        _ if v < 0. => "#92c5de",
        _ => "#ffffff",
    }
}

/// Swept axes are drawn in world units for an `x`–`y` sweep and stretched
/// over the plot window otherwise.
fn render(spec: &SweepSpec, rows: &[Row], ctx: &Context) -> Svg {
    let s = spec.swept();
    let (ia, ib) = (s[0], s[1]);
    let world = spec.space == Space::Cartesian && (ia, ib) == (0, 1);
    let map = |axis: usize, v: f64| match spec.axes[axis] {
        Axis::Range { min, max, .. } if !world => VIEW_MIN + VIEW_SIZE * (v - min) / (max - min),
        _ => v,
    };
    let va = spec.axes[ia].values();
    let vb = spec.axes[ib].values();
    let xs: Vec<f64> = va.iter().map(|&v| map(ia, v)).collect();
    let ys: Vec<f64> = vb.iter().map(|&v| map(ib, v)).collect();
    // With two swept axes the grid index is `i·|b| + j`.
    let value = |i: usize, j: usize| rows[i * vb.len() + j].value(spec.quantity);

    let mut svg = Svg::new();
    let step = |v: &[f64], k: usize| {
        let lo = if k > 0 { 0.5 * (v[k] - v[k - 1]) } else { 0. };
        let hi = if k + 1 < v.len() {
            0.5 * (v[k + 1] - v[k])
        } else {
            0.
        };
        (v[k] - lo, lo + hi)
    };
    for i in 0..xs.len() {
        let (x0, w) = step(&xs, i);
        for j in 0..ys.len() {
            let (y0, h) = step(&ys, j);
            svg.rect(Vec2::new(x0, y0), w, h, fill(spec.quantity, value(i, j)));
        }
    }
    if spec.quantity != Quantity::Solutions {
        svg.segments(&zero_contour(&xs, &ys, &value), "#000000", 0.01);
    }
    if world {
        svg.axes();
        let a = ctx.geom.base_anchors();
        svg.polygon(&a, "none", "#333333", 0.01);
    }
    svg
}
