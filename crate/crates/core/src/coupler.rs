//! Cardanic curve of `B₃` with `θ₁`, `θ₂` locked, and its straight-line
//! degeneration.
//!
//! With legs 1 and 2 fixed, `B₁` and `B₂` slide on two lines and `B₃` traces
//! a Cardanic curve parameterized by the platform orientation `φ`. The curve
//! always passes through `A₃` (at `φ = 0`). When `θ₂ − θ₁ ≡ π/3 (mod π)` it
//! collapses onto a straight segment; if leg 3 lies on that segment as well
//! the platform performs a Reuleaux straight-line motion.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::geometry::{JointAngles, ManipulatorGeometry, Pose, Tolerances, Vec2};
use crate::kinematics::{cardanic_pair_degenerate, classify_dk_degeneracy, DkKind};
use crate::{Error, Result};

/// Default number of `φ` intervals for a traced curve.
pub const DEFAULT_SAMPLES: usize = 720;

/// Leg extensions `(ρ₁, ρ₂)` keeping `B₁`, `B₂` on their axes at orientation
/// `phi`, from the loop `A₁ B₁ B₂ A₂`.
pub fn rho_from_phi(
    geom: &ManipulatorGeometry,
    theta1: f64,
    theta2: f64,
    phi: f64,
    tol: &Tolerances,
) -> Result<(f64, f64)> {
    let (s1, c1) = theta1.sin_cos();
    let (s2, c2) = theta2.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let den = c1 * s2 - c2 * s1;
    if den.abs() < tol.leg_pair {
        return Err(Error::DegenerateLegPair { sin_diff: den });
    }
    let s = geom.scale();
    let rho1 = (-cp * s2 + s2 + c2 * sp) / den * s;
    let rho2 = (-s1 * cp + s1 + sp * c1) / den * s;
    Ok((rho1, rho2))
}

/// `d(ρ₁, ρ₂)/dφ`; the denominator is assumed nonzero.
fn rho_rate(geom: &ManipulatorGeometry, theta1: f64, theta2: f64, phi: f64) -> (f64, f64) {
    let (s1, c1) = theta1.sin_cos();
    let (s2, c2) = theta2.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let den = c1 * s2 - c2 * s1;
    let s = geom.scale();
    ((sp * s2 + c2 * cp) / den * s, (s1 * sp + cp * c1) / den * s)
}

/// Residuals of the two loop-closure equations of `A₁ B₁ B₂ A₂`.
pub fn loop_closure_residuals(
    geom: &ManipulatorGeometry,
    theta1: f64,
    theta2: f64,
    phi: f64,
    rho1: f64,
    rho2: f64,
) -> [f64; 2] {
    let (s1, c1) = theta1.sin_cos();
    let (s2, c2) = theta2.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let s = geom.scale();
    [
        rho1 * c1 + s * cp - s - rho2 * c2,
        rho1 * s1 + s * sp - rho2 * s2,
    ]
}

fn b3_from_rho1(geom: &ManipulatorGeometry, theta1: f64, rho1: f64, phi: f64) -> Vec2 {
    geom.base_anchor(1) + Vec2::from_angle(theta1) * rho1 + geom.local_anchor(3).rotated(phi)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub phi: f64,
    pub b3: Vec2,
    pub rho1: f64,
    pub rho2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplerCurve {
    pub theta1: f64,
    pub theta2: f64,
    /// Samples over `φ ∈ [−π, π]`, both ends included, `φ = 0` among them.
    pub samples: Vec<CurveSample>,
    pub degenerate: bool,
    /// End points of the straight segment when `degenerate`.
    pub segment: Option<[Vec2; 2]>,
}

impl CouplerCurve {
    /// Largest distance of a sample from the segment line; `None` if the
    /// curve is not degenerate.
    pub fn segment_deviation(&self) -> Option<f64> {
        let [a, b] = self.segment?;
        let d = b - a;
        let len = d.norm();
        if len == 0. {
            return Some(
                self.samples
                    .iter()
                    .map(|s| s.b3.distance(a))
                    .fold(0., f64::max),
            );
        }
        let u = d * (1. / len);
        Some(
            self.samples
                .iter()
                .map(|s| u.cross(s.b3 - a).abs())
                .fold(0., f64::max),
        )
    }
}

/// Traces `B₃(φ)` over one full turn using `n_samples` intervals (rounded up
/// to an even count so that `φ = 0` is sampled).
pub fn trace_cardanic(
    geom: &ManipulatorGeometry,
    theta1: f64,
    theta2: f64,
    n_samples: usize,
    tol: &Tolerances,
) -> Result<CouplerCurve> {
    if n_samples < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 samples, got {n_samples}"
        )));
    }
    let n = n_samples + n_samples % 2;
    // Validates the leg pair once.
    rho_from_phi(geom, theta1, theta2, 0., tol)?;
    let samples = (0..=n)
        .map(|k| {
            let phi = PI * (2. * k as f64 - n as f64) / n as f64;
            let (rho1, rho2) =
                rho_from_phi(geom, theta1, theta2, phi, tol).expect("validated leg pair");
            CurveSample {
                phi,
                b3: b3_from_rho1(geom, theta1, rho1, phi),
                rho1,
                rho2,
            }
        })
        .collect::<Vec<_>>();
    let degenerate = cardanic_pair_degenerate(theta1, theta2, tol.angle);
    let segment = degenerate.then(|| degenerate_segment(geom, theta1, theta2, &samples, tol));
    Ok(CouplerCurve {
        theta1,
        theta2,
        samples,
        degenerate,
        segment,
    })
}

/// End points of a straight Cardanic curve, refined to the extremal `φ`.
fn degenerate_segment(
    geom: &ManipulatorGeometry,
    theta1: f64,
    theta2: f64,
    samples: &[CurveSample],
    tol: &Tolerances,
) -> [Vec2; 2] {
    let a3 = geom.base_anchor(3);
    let far = samples
        .iter()
        .max_by(|a, b| a.b3.distance(a3).total_cmp(&b.b3.distance(a3)))
        .expect("samples are never empty");
    let u = (far.b3 - a3) * (1. / far.b3.distance(a3));
    let at = |phi: f64| {
        let (rho1, _) = rho_from_phi(geom, theta1, theta2, phi, tol).expect("validated leg pair");
        b3_from_rho1(geom, theta1, rho1, phi)
    };
    let proj = |phi: f64| u.dot(at(phi) - a3);
    let h = TAU / (samples.len() - 1) as f64;
    let extreme = |sign: f64| {
        let k = (0..samples.len())
            .max_by(|&i, &j| {
                (sign * proj(samples[i].phi)).total_cmp(&(sign * proj(samples[j].phi)))
            })
            .expect("samples are never empty");
        let phi = golden_max(|p| sign * proj(p), samples[k].phi - h, samples[k].phi + h);
        a3 + u * proj(phi)
    };
    [extreme(-1.), extreme(1.)]
}

/// Maximizer of a unimodal function on `[a, b]` by golden-section search.
pub(crate) fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..100 {
        if b - a < 1e-14 {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Root of `f` in `[a, b]` where `f(a)` and `f(b)` have opposite signs.
pub(crate) fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, x_tol: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        if (b - a).abs() <= x_tol {
            break;
        }
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm == 0. {
            return mid;
        }
        if (fa < 0.) == (fm < 0.) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Crossing {
    phi: f64,
    tangent: bool,
}

/// Roots of `f` over consecutive grid intervals. Each interval is split at
/// the extrema of `f` (sign changes of `df`), so every piece is monotone
/// and holds at most one root.
fn grid_roots(
    f: &impl Fn(f64) -> f64,
    df: &impl Fn(f64) -> f64,
    grid: &[f64],
    x_tol: f64,
    tangent_tol: f64,
) -> Vec<Crossing> {
    let mut out = Vec::new();
    for w in grid.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mut cuts = vec![a];
        let (da, db) = (df(a), df(b));
        if da * db < 0. {
            let e = bisect(df, a, b, x_tol);
            let fe = f(e);
            if fe.abs() < tangent_tol && (f(a) < 0.) == (f(b) < 0.) && f(a) != 0. && f(b) != 0. {
                out.push(Crossing {
                    phi: e,
                    tangent: true,
                });
            }
            cuts.push(e);
        }
        cuts.push(b);
        for piece in cuts.windows(2) {
            let (l, r) = (piece[0], piece[1]);
            let (fl, fr) = (f(l), f(r));
            if fl == 0. {
                out.push(Crossing {
                    phi: l,
                    tangent: false,
                });
            } else if fl * fr < 0. {
                out.push(Crossing {
                    phi: bisect(f, l, r, x_tol),
                    tangent: false,
                });
            }
        }
    }
    if let Some(&last) = grid.last() {
        if f(last) == 0. {
            out.push(Crossing {
                phi: last,
                tangent: false,
            });
        }
    }
    dedupe_cyclic(out, 1e-9)
}

fn dedupe_cyclic(mut roots: Vec<Crossing>, eps: f64) -> Vec<Crossing> {
    for r in &mut roots {
        r.phi = crate::geometry::normalize_angle(r.phi);
    }
    roots.sort_by(|a, b| a.phi.total_cmp(&b.phi));
    let mut out: Vec<Crossing> = Vec::with_capacity(roots.len());
    for r in roots {
        if out.last().is_some_and(|l| (r.phi - l.phi).abs() < eps) {
            continue;
        }
        out.push(r);
    }
    if out.len() > 1 && (out[0].phi + TAU - out[out.len() - 1].phi).abs() < eps {
        out.pop();
    }
    out
}

/// Outcome of the curve–line intersection.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometricDkp {
    pub kind: DkKind,
    /// Isolated solutions, sorted by `φ`; contains the trivial pose.
    pub poses: Vec<Pose>,
    /// Per pose: the line touches the curve without crossing it.
    pub tangent: Vec<bool>,
    /// Straight segment of `B₃` for the Reuleaux continuum.
    pub segment: Option<[Vec2; 2]>,
}

/// Direct kinematics by intersecting the Cardanic curve of `B₃` with the
/// third prismatic axis (through `A₃` along `v₃`).
pub fn geometric_dkp_on_curve(
    geom: &ManipulatorGeometry,
    theta: &JointAngles,
    curve: &CouplerCurve,
    tol: &Tolerances,
) -> Result<GeometricDkp> {
    let same = |a: f64, b: f64| crate::geometry::angle_diff(a, b).abs() < tol.angle;
    if !same(curve.theta1, theta.theta1) || !same(curve.theta2, theta.theta2) {
        return Err(Error::InvalidInput(
            "curve was traced for different theta1/theta2".into(),
        ));
    }
    let (t1, t2) = (curve.theta1, curve.theta2);
    let a1 = geom.base_anchor(1);
    let a3 = geom.base_anchor(3);
    let v1 = Vec2::from_angle(t1);
    let v3 = Vec2::from_angle(theta.theta3);
    let b3_local = geom.local_anchor(3);
    let rho1 = |phi: f64| {
        rho_from_phi(geom, t1, t2, phi, tol)
            .expect("curve has a valid leg pair")
            .0
    };
    let dist = |phi: f64| v3.cross(b3_from_rho1(geom, t1, rho1(phi), phi) - a3);
    let ddist = |phi: f64| {
        let (r1, _) = rho_rate(geom, t1, t2, phi);
        v3.cross(v1 * r1 + b3_local.rotated(phi).perp())
    };

    let deviation = curve
        .samples
        .iter()
        .map(|s| v3.cross(s.b3 - a3).abs())
        .fold(0., f64::max);
    if classify_dk_degeneracy(theta, tol) == DkKind::ContinuumReuleaux
        || deviation < tol.residual * geom.scale()
    {
        return Ok(GeometricDkp {
            kind: DkKind::ContinuumReuleaux,
            poses: vec![Pose::trivial()],
            tangent: vec![false],
            segment: curve.segment,
        });
    }

    let grid: Vec<f64> = curve.samples.iter().map(|s| s.phi).collect();
    let roots = grid_roots(&dist, &ddist, &grid, 1e-13, tol.residual * geom.scale());
    let poses: Vec<Pose> = roots
        .iter()
        .map(|r| Pose {
            p: a1 + v1 * rho1(r.phi),
            phi: r.phi,
        })
        .collect();
    let kind = match poses.len() {
        2 => DkKind::TwoSolutions,
        1 => DkKind::TrivialOnly,
        _ => DkKind::Degenerate,
    };
    Ok(GeometricDkp {
        kind,
        tangent: roots.iter().map(|r| r.tangent).collect(),
        poses,
        segment: None,
    })
}

/// [`geometric_dkp_on_curve`] on a freshly traced curve. The translation
/// continuum (all `θᵢ` equal modulo `π`) is reported without a curve.
pub fn geometric_dkp(
    geom: &ManipulatorGeometry,
    theta: &JointAngles,
    tol: &Tolerances,
) -> Result<GeometricDkp> {
    if classify_dk_degeneracy(theta, tol) == DkKind::ContinuumTranslation {
        return Ok(GeometricDkp {
            kind: DkKind::ContinuumTranslation,
            poses: vec![Pose::trivial()],
            tangent: vec![false],
            segment: None,
        });
    }
    let curve = trace_cardanic(geom, theta.theta1, theta.theta2, DEFAULT_SAMPLES, tol)?;
    geometric_dkp_on_curve(geom, theta, &curve, tol)
}

/// Straight line carrying `P`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PLine {
    /// Midpoint of the segment.
    pub point: Vec2,
    pub direction: Vec2,
    pub half_length: f64,
}

/// Measured constants of a Reuleaux straight-line configuration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReuleauxDescriptor {
    /// Segment of `P` between the extreme serial-singular postures (some
    /// `ρᵢ = 0`) met over a full turn of the platform.
    pub p_line: PLine,
    /// Stroke of leg 1 (`max ρ₁ − min ρ₁`) over a full turn.
    pub a_displacement_magnitude: f64,
    pub leg_strokes: [f64; 3],
}

impl ReuleauxDescriptor {
    pub fn p_segment_length(&self) -> f64 {
        2. * self.p_line.half_length
    }

    pub fn p_segment(&self) -> [Vec2; 2] {
        let l = &self.p_line;
        [
            l.point - l.direction * l.half_length,
            l.point + l.direction * l.half_length,
        ]
    }
}

const REULEAUX_GRID: usize = 4096;

/// Sweeps the continuum of a Reuleaux configuration and measures the `P`
/// segment and the leg strokes.
pub fn reuleaux_descriptor(
    geom: &ManipulatorGeometry,
    theta: &JointAngles,
    tol: &Tolerances,
) -> Result<ReuleauxDescriptor> {
    if classify_dk_degeneracy(theta, tol) != DkKind::ContinuumReuleaux {
        return Err(Error::NotReuleaux);
    }
    let (t1, t2) = (theta.theta1, theta.theta2);
    rho_from_phi(geom, t1, t2, 0., tol)?;
    let v1 = Vec2::from_angle(t1);
    let v3 = Vec2::from_angle(theta.theta3);
    let a3 = geom.base_anchor(3);
    let rho = |leg: usize, phi: f64| -> f64 {
        let (r1, r2) = rho_from_phi(geom, t1, t2, phi, tol).expect("validated leg pair");
        match leg {
            0 => r1,
            1 => r2,
            _ => v3.dot(b3_from_rho1(geom, t1, r1, phi) - a3),
        }
    };
    let h = TAU / REULEAUX_GRID as f64;
    let grid: Vec<f64> = (0..REULEAUX_GRID)
        .map(|k| -PI + (k as f64 + 0.5) * h)
        .collect();

    let mut leg_strokes = [0.; 3];
    let mut serial_s = Vec::new();
    for (leg, stroke) in leg_strokes.iter_mut().enumerate() {
        let values: Vec<f64> = grid.iter().map(|&p| rho(leg, p)).collect();
        let (kmax, kmin) = extremal_indices(&values);
        let hi = rho(
            leg,
            golden_max(|p| rho(leg, p), grid[kmax] - h, grid[kmax] + h),
        );
        let lo = rho(
            leg,
            golden_max(|p| -rho(leg, p), grid[kmin] - h, grid[kmin] + h),
        );
        *stroke = hi - lo;

        // Zero crossings over the closed cycle, wrap-around included.
        for k in 0..grid.len() {
            let (a, b) = (
                grid[k],
                if k + 1 < grid.len() {
                    grid[k + 1]
                } else {
                    grid[0] + TAU
                },
            );
            let (fa, fb) = (values[k], values[(k + 1) % grid.len()]);
            if fa == 0. || fa * fb < 0. {
                let phi = if fa == 0. {
                    a
                } else {
                    bisect(|p| rho(leg, p), a, b, 1e-14)
                };
                serial_s.push(rho(0, phi));
            }
        }
    }
    if serial_s.is_empty() {
        return Err(Error::NotReuleaux);
    }
    let lo = serial_s.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = serial_s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(ReuleauxDescriptor {
        p_line: PLine {
            point: geom.base_anchor(1) + v1 * (0.5 * (lo + hi)),
            direction: v1,
            half_length: 0.5 * (hi - lo),
        },
        a_displacement_magnitude: leg_strokes[0],
        leg_strokes,
    })
}

fn extremal_indices(values: &[f64]) -> (usize, usize) {
    let mut imax = 0;
    let mut imin = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[imax] {
            imax = i;
        }
        if *v < values[imin] {
            imin = i;
        }
    }
    (imax, imin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::constraint_residuals;
    use crate::kinematics::direct_kinematics;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    fn unit() -> (ManipulatorGeometry, Tolerances) {
        (ManipulatorGeometry::unit(), Tolerances::default())
    }

    #[test]
    fn rho_closed_form_values() {
        let (g, tol) = unit();
        assert_eq!(rho_from_phi(&g, 0.3, 1.4, 0., &tol).unwrap(), (0., 0.));
        let (r1, r2) = rho_from_phi(&g, 0., FRAC_PI_2, FRAC_PI_2, &tol).unwrap();
        assert_abs_diff_eq!(r1, 1., epsilon = 1e-15);
        assert_abs_diff_eq!(r2, 1., epsilon = 1e-15);
        assert!(matches!(
            rho_from_phi(&g, 0.3, 0.3 + PI, 1., &tol),
            Err(Error::DegenerateLegPair { .. })
        ));
    }

    #[test]
    fn rho_satisfies_loop_closure() {
        let (g, tol) = unit();
        for (t1, t2, phi) in [(0.3, 1.4, 2.0), (-2.0, 0.5, -1.0), (1.0, 2.5, 3.1)] {
            let (r1, r2) = rho_from_phi(&g, t1, t2, phi, &tol).unwrap();
            for r in loop_closure_residuals(&g, t1, t2, phi, r1, r2) {
                assert_abs_diff_eq!(r, 0., epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn rho_rate_matches_difference_quotient() {
        let (g, tol) = unit();
        let (t1, t2, phi, h) = (0.3, 1.4, 0.9, 1e-6);
        let (p1, p2) = rho_from_phi(&g, t1, t2, phi + h, &tol).unwrap();
        let (m1, m2) = rho_from_phi(&g, t1, t2, phi - h, &tol).unwrap();
        let (d1, d2) = rho_rate(&g, t1, t2, phi);
        assert_abs_diff_eq!((p1 - m1) / (2. * h), d1, epsilon = 1e-8);
        assert_abs_diff_eq!((p2 - m2) / (2. * h), d2, epsilon = 1e-8);
    }

    #[test]
    fn curve_passes_through_a3() {
        let (g, tol) = unit();
        let c = trace_cardanic(&g, 0.3, 1.4, 720, &tol).unwrap();
        assert_eq!(c.samples.len(), 721);
        let mid = c.samples[360];
        assert_eq!(mid.phi, 0.);
        assert!(mid.b3.distance(g.base_anchor(3)) < 1e-15);
        assert!(!c.degenerate);
        assert_eq!(c.segment, None);
        let (first, last) = (c.samples[0], c.samples[720]);
        assert!(first.b3.distance(last.b3) < 1e-10);
    }

    #[test]
    fn curve_samples_satisfy_leg_constraints() {
        let (g, tol) = unit();
        let c = trace_cardanic(&g, 0.3, 1.4, 720, &tol).unwrap();
        let theta = JointAngles::new(0.3, 1.4, 0.);
        for s in &c.samples {
            let pose = Pose {
                p: Vec2::from_angle(0.3) * s.rho1,
                phi: s.phi,
            };
            let r = constraint_residuals(&g, &pose, &theta);
            assert!(r[0].abs() < 1e-10 && r[1].abs() < 1e-10);
            assert!(crate::platform_anchor(&g, &pose, 3).distance(s.b3) < 1e-12);
        }
    }

    #[test]
    fn degenerate_curve_is_a_segment() {
        let (g, tol) = unit();
        let c = trace_cardanic(&g, 0.2, 0.2 + FRAC_PI_3, 720, &tol).unwrap();
        assert!(c.degenerate);
        assert!(c.segment_deviation().unwrap() < 1e-9);
        let [a, b] = c.segment.unwrap();
        assert_abs_diff_eq!(a.distance(b), 4. / 3f64.sqrt(), epsilon = 1e-9);

        let closed = trace_cardanic(&g, 0.2, 0.2 - FRAC_PI_3, 720, &tol).unwrap();
        assert!(!closed.degenerate);
    }

    #[test]
    fn odd_sample_counts_round_up() {
        let (g, tol) = unit();
        let c = trace_cardanic(&g, 0.3, 1.4, 7, &tol).unwrap();
        assert_eq!(c.samples.len(), 9);
        assert!(c.samples.iter().any(|s| s.phi == 0.));
        assert!(trace_cardanic(&g, 0.3, 1.4, 1, &tol).is_err());
    }

    #[test]
    fn geometric_matches_closed_form() {
        let (g, tol) = unit();
        for t in [[0.2, 0.9, 2.0], [-1.3, 2.2, 0.4], [2.9, -0.7, -2.0]] {
            let theta = JointAngles::from_array(t);
            let closed = direct_kinematics(&g, &theta, &tol);
            let geo = geometric_dkp(&g, &theta, &tol).unwrap();
            assert_eq!(geo.kind, DkKind::TwoSolutions);
            assert_eq!(geo.poses.len(), 2);
            for p in &closed.poses {
                let best = geo
                    .poses
                    .iter()
                    .map(|q| {
                        let (dp, da) = p.distance(q);
                        dp.max(da)
                    })
                    .fold(f64::INFINITY, f64::min);
                assert!(best < 1e-7, "{t:?}: {best}");
            }
        }
    }

    #[test]
    fn geometric_continua() {
        let (g, tol) = unit();
        let eq = geometric_dkp(&g, &JointAngles::new(0.7, 0.7, 0.7), &tol).unwrap();
        assert_eq!(eq.kind, DkKind::ContinuumTranslation);
        let re = geometric_dkp(&g, &JointAngles::new(0., FRAC_PI_3, -FRAC_PI_3), &tol).unwrap();
        assert_eq!(re.kind, DkKind::ContinuumReuleaux);
        assert!(re.segment.is_some());
    }

    #[test]
    fn reuleaux_constants() {
        let (g, tol) = unit();
        let d =
            reuleaux_descriptor(&g, &JointAngles::new(0., FRAC_PI_3, -FRAC_PI_3), &tol).unwrap();
        assert_abs_diff_eq!(d.p_segment_length(), 2., epsilon = 1e-6);
        assert_abs_diff_eq!(
            d.a_displacement_magnitude,
            4. * 3f64.sqrt() / 3.,
            epsilon = 1e-6
        );
        for s in d.leg_strokes {
            assert_abs_diff_eq!(s, 4. * 3f64.sqrt() / 3., epsilon = 1e-6);
        }
        let g2 = ManipulatorGeometry::new(2.).unwrap();
        let d2 =
            reuleaux_descriptor(&g2, &JointAngles::new(0., FRAC_PI_3, -FRAC_PI_3), &tol).unwrap();
        assert_abs_diff_eq!(d2.p_segment_length(), 4., epsilon = 2e-6);
        assert_abs_diff_eq!(
            d2.a_displacement_magnitude,
            8. * 3f64.sqrt() / 3.,
            epsilon = 2e-6
        );

        assert!(matches!(
            reuleaux_descriptor(&g, &JointAngles::new(0.2, 0.9, 2.0), &tol),
            Err(Error::NotReuleaux)
        ));
    }
}
