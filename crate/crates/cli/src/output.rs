use rpr_core::Vec2;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use crate::error::{CliError, CliResult};

pub const SCHEMA: u32 = 1;

/// Seventeen significant digits, which round-trips every `f64`.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Prints `body` (a JSON object) with the schema version prepended.
pub fn print_json(body: Value) -> CliResult {
    let mut out = serde_json::Map::new();
    out.insert("schema".into(), json!(SCHEMA));
    if let Value::Object(map) = body {
        out.extend(map);
    }
    let text = serde_json::to_string_pretty(&Value::Object(out))
        .map_err(|e| CliError::Io(e.to_string()))?;
    say(&text)
}

/// Writes one line to stdout; a closed pipe ends output quietly.
pub fn say(line: &str) -> CliResult {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{line}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

pub fn csv_writer(path: &Path) -> CliResult<csv::Writer<std::fs::File>> {
    csv::Writer::from_path(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Plot window in length units, `[MIN, MIN + SIZE]` on both axes.
pub const VIEW_MIN: f64 = -1.5;
pub const VIEW_SIZE: f64 = 4.;

/// Minimal SVG document in world coordinates (y up).
pub struct Svg {
    body: String,
}

impl Svg {
    pub fn new() -> Self {
        Self {
            body: String::new(),
        }
    }

    fn points(pts: &[Vec2]) -> String {
        pts.iter()
            .map(|p| format!("{:.6},{:.6}", p.x, p.y))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn rect(&mut self, corner: Vec2, w: f64, h: f64, fill: &str) {
        let _ = writeln!(
            self.body,
            r#"<rect x="{:.6}" y="{:.6}" width="{:.6}" height="{:.6}" fill="{fill}"/>"#,
            corner.x, corner.y, w, h
        );
    }

    pub fn line(&mut self, a: Vec2, b: Vec2, stroke: &str, width: f64) {
        let _ = writeln!(
            self.body,
            r#"<line x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}" stroke="{stroke}" stroke-width="{width}"/>"#,
            a.x, a.y, b.x, b.y
        );
    }

    pub fn polyline(&mut self, pts: &[Vec2], stroke: &str, width: f64) {
        let _ = writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="{width}"/>"#,
            Self::points(pts)
        );
    }

    pub fn polygon(&mut self, pts: &[Vec2], fill: &str, stroke: &str, width: f64) {
        let _ = writeln!(
            self.body,
            r#"<polygon points="{}" fill="{fill}" stroke="{stroke}" stroke-width="{width}"/>"#,
            Self::points(pts)
        );
    }

    pub fn segments(&mut self, segs: &[[Vec2; 2]], stroke: &str, width: f64) {
        if segs.is_empty() {
            return;
        }
        let mut d = String::new();
        for [a, b] in segs {
            let _ = write!(d, "M{:.6},{:.6}L{:.6},{:.6}", a.x, a.y, b.x, b.y);
        }
        let _ = writeln!(
            self.body,
            r#"<path d="{d}" fill="none" stroke="{stroke}" stroke-width="{width}"/>"#
        );
    }

    pub fn circle(&mut self, c: Vec2, r: f64, fill: &str) {
        let _ = writeln!(
            self.body,
            r#"<circle cx="{:.6}" cy="{:.6}" r="{r}" fill="{fill}"/>"#,
            c.x, c.y
        );
    }

    /// Coordinate axes through the origin.
    pub fn axes(&mut self) {
        let (lo, hi) = (VIEW_MIN, VIEW_MIN + VIEW_SIZE);
        self.line(Vec2::new(lo, 0.), Vec2::new(hi, 0.), "#999", 0.005);
        self.line(Vec2::new(0., lo), Vec2::new(0., hi), "#999", 0.005);
    }

    pub fn finish(self) -> String {
        // `matrix(1 0 0 -1 0 c)` maps y to c − y; c = 2·MIN + SIZE keeps the window.
        let flip = 2. * VIEW_MIN + VIEW_SIZE;
        format!(
            concat!(
                r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{min} {min} {size} {size}" width="800" height="800">"#,
                "\n",
                r#"<g transform="matrix(1 0 0 -1 0 {flip})">"#,
                "\n{body}</g>\n</svg>\n"
            ),
            min = VIEW_MIN,
            size = VIEW_SIZE,
            flip = flip,
            body = self.body
        )
    }

    pub fn write(self, path: &Path) -> CliResult {
        std::fs::write(path, self.finish())
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }
}
