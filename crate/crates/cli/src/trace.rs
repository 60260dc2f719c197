//! Cardanic curve export.

use rpr_core::{reuleaux_descriptor, trace_cardanic, JointAngles, Vec2};
use serde_json::json;
use std::f64::consts::FRAC_PI_3;

use crate::args::TraceArgs;
use crate::error::CliResult;
use crate::output::{csv_writer, num, print_json, Svg};
use crate::solve::Context;

pub const CSV_HEADER: [&str; 7] = ["theta1", "theta2", "phi", "x", "y", "rho1", "rho2"];

pub fn run(args: &TraceArgs, ctx: &Context) -> CliResult {
    let (t1, t2) = (ctx.angle(args.t1), ctx.angle(args.t2));
    let curve = trace_cardanic(&ctx.geom, t1, t2, args.samples, &ctx.tol)?;

    let mut w = csv_writer(&args.out)?;
    w.write_record(CSV_HEADER)?;
    for s in &curve.samples {
        w.write_record([t1, t2, s.phi, s.b3.x, s.b3.y, s.rho1, s.rho2].map(num))?;
    }
    w.flush()?;

    // θ₃ completing the Reuleaux condition for this pair.
    let reuleaux = if curve.degenerate {
        let theta = JointAngles::new(t1, t2, t1 - FRAC_PI_3);
        Some(reuleaux_descriptor(&ctx.geom, &theta, &ctx.tol)?)
    } else {
        None
    };

    if let Some(path) = &args.svg {
        let mut svg = Svg::new();
        svg.axes();
        let a = ctx.geom.base_anchors();
        svg.polygon(&a, "#eeeeee", "#333333", 0.01);
        for (anchor, t) in [(a[0], t1), (a[1], t2)] {
            let v = Vec2::from_angle(t) * 10.;
            svg.line(anchor - v, anchor + v, "#4393c3", 0.008);
        }
        let pts: Vec<Vec2> = curve.samples.iter().map(|s| s.b3).collect();
        svg.polyline(&pts, "#b2182b", 0.015);
        if let Some([p, q]) = curve.segment {
            svg.line(p, q, "#b2182b", 0.03);
        }
        if let Some(d) = &reuleaux {
            let [p, q] = d.p_segment();
            svg.line(p, q, "#1b7837", 0.02);
        }
        svg.circle(a[2], 0.03, "#000000");
        svg.write(path)?;
    }

    print_json(json!({
        "command": "trace",
        "theta1": t1,
        "theta2": t2,
        "samples": curve.samples.len(),
        "degenerate": curve.degenerate,
        "segment": curve.segment,
        "segment_length": curve.segment.map(|[p, q]| p.distance(q)),
        "reuleaux": reuleaux.map(|d| json!({
            "theta3": t1 - FRAC_PI_3,
            "p_segment_length": d.p_segment_length(),
            "descriptor": d,
        })),
        "csv": args.out,
        "svg": args.svg,
    }))
}
