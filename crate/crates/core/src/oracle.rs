//! Brute-force verifiers.
//!
//! Nothing here touches the closed-form direct kinematics: the scan works on
//! the raw constraint equations, solves `(x, y)` linearly per `φ` sample,
//! isolates sign changes of the remaining residual and polishes with Newton
//! on the full three-equation system.

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::geometry::{
    angle_diff, normalize_angle, JointAngles, ManipulatorGeometry, Pose, Tolerances, Vec2,
};
use crate::velocity;
use crate::{Error, Result};

const NEWTON_MAX_ITER: usize = 50;
const NEWTON_TOL: f64 = 1e-12;
const CLUSTER_EPS: f64 = 1e-7;
const ACCEPT_RESIDUAL: f64 = 1e-10;
const CONTINUUM_RESIDUAL: f64 = 1e-8;
const CONTINUUM_FRACTION: f64 = 0.05;
const FAMILY_SAMPLES: usize = 64;

/// The three constraint rows `[sin θᵢ, −cos θᵢ, hᵢ(φ)]` with
/// `sin θᵢ x − cos θᵢ y − hᵢ(φ) = 0`.
struct Constraints {
    sc: [(f64, f64); 3],
    a: [Vec2; 3],
    b: [Vec2; 3],
}

impl Constraints {
    fn new(geom: &ManipulatorGeometry, theta: &JointAngles) -> Self {
        Self {
            sc: theta.as_array().map(f64::sin_cos),
            a: geom.base_anchors(),
            b: geom.local_anchors(),
        }
    }

    fn rotated_anchor(&self, i: usize, phi: f64) -> Vec2 {
        let (s, c) = phi.sin_cos();
        let b = self.b[i];
        Vec2::new(c * b.x - s * b.y, s * b.x + c * b.y)
    }

    fn h(&self, i: usize, phi: f64) -> f64 {
        let (s, c) = self.sc[i];
        let w = self.a[i] - self.rotated_anchor(i, phi);
        s * w.x - c * w.y
    }

    fn residuals(&self, z: &Vector3<f64>) -> Vector3<f64> {
        Vector3::from_fn(|i, _| {
            let (s, c) = self.sc[i];
            s * z.x - c * z.y - self.h(i, z.z)
        })
    }

    fn jacobian(&self, z: &Vector3<f64>) -> Matrix3<f64> {
        Matrix3::from_fn(|i, j| {
            let (s, c) = self.sc[i];
            match j {
                0 => s,
                1 => -c,
                _ => {
                    let rb = self.rotated_anchor(i, z.z);
                    -(s * rb.y + c * rb.x)
                }
            }
        })
    }

    /// 2×2 minor of rows `i`, `j` in the `(x, y)` columns.
    fn minor(&self, i: usize, j: usize) -> f64 {
        let (si, ci) = self.sc[i];
        let (sj, cj) = self.sc[j];
        -si * cj + ci * sj
    }

    fn solve_xy(&self, (i, j): (usize, usize), phi: f64) -> Vec2 {
        let (si, ci) = self.sc[i];
        let (sj, cj) = self.sc[j];
        let (hi, hj) = (self.h(i, phi), self.h(j, phi));
        let det = self.minor(i, j);
        // [si −ci; sj −cj] [x y]ᵀ = [hi hj]ᵀ
        Vec2::new((-hi * cj + ci * hj) / det, (si * hj - sj * hi) / det)
    }

    /// Damped Newton with step halving; returns the polished point, its
    /// max-abs residual and the iteration count.
    fn newton(&self, mut z: Vector3<f64>) -> (Vector3<f64>, f64, usize) {
        let mut r = self.residuals(&z);
        let mut it = 0;
        while it < NEWTON_MAX_ITER && r.amax() >= NEWTON_TOL {
            it += 1;
            let Some(step) = self.jacobian(&z).lu().solve(&(-r)) else {
                break;
            };
            let mut lambda = 1.;
            loop {
                let cand = z + step * lambda;
                let rc = self.residuals(&cand);
                if rc.norm() < r.norm() || lambda < 1e-6 {
                    z = cand;
                    r = rc;
                    break;
                }
                lambda *= 0.5;
            }
        }
        (z, r.amax(), it)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ContinuumShape {
    /// Solutions exist for a positive fraction of all orientations.
    PhiFamily,
    /// The `(x, y)` system is rank deficient: a line of positions at fixed `φ`.
    XyLine,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuumReport {
    pub shape: ContinuumShape,
    /// Fraction of `φ` samples admitting a solution.
    pub fraction: f64,
    /// Representative poses on the continuum.
    pub samples: Vec<Pose>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    /// Isolated solutions, sorted by `φ`.
    pub solutions_found: Vec<Pose>,
    pub residual_max: f64,
    /// `(φ samples, samples with a full-rank (x, y) solve)`.
    pub grid: (usize, usize),
    pub newton_iterations: usize,
    pub continuum: Option<ContinuumReport>,
}

/// Scans `φ` over a full turn with `n_phi` samples and returns every isolated
/// solution of the three constraints.
pub fn dkp_bruteforce(geom: &ManipulatorGeometry, theta: &JointAngles, n_phi: usize) -> ScanReport {
    let n_phi = n_phi.max(8);
    let cons = Constraints::new(geom, theta);
    let h = TAU / n_phi as f64;
    // Offset grid: no sample lands on φ = 0 exactly.
    let grid: Vec<f64> = (0..n_phi).map(|k| -PI + (k as f64 + 0.37) * h).collect();

    let pairs = [(0, 1), (1, 2), (0, 2)];
    let (pair, minor) = pairs
        .iter()
        .map(|&(i, j)| ((i, j), cons.minor(i, j).abs()))
        .fold(((0, 1), -1.), |b, c| if c.1 > b.1 { c } else { b });
    if minor < 1e-9 {
        return scan_rank_deficient(&cons, &grid, geom.scale());
    }
    let third = 3 - pair.0 - pair.1;
    let f = |phi: f64| {
        let p = cons.solve_xy(pair, phi);
        let (s, c) = cons.sc[third];
        s * p.x - c * p.y - cons.h(third, phi)
    };
    let values: Vec<f64> = grid.iter().map(|&p| f(p)).collect();

    let scale = geom.scale();
    let near_zero = values
        .iter()
        .filter(|v| v.abs() < CONTINUUM_RESIDUAL * scale)
        .count();
    let fraction = near_zero as f64 / n_phi as f64;
    if fraction > CONTINUUM_FRACTION {
        let stride = (n_phi / FAMILY_SAMPLES).max(1);
        let samples = grid
            .iter()
            .zip(&values)
            .filter(|(_, v)| v.abs() < CONTINUUM_RESIDUAL * scale)
            .step_by(stride)
            .map(|(&phi, _)| Pose {
                p: cons.solve_xy(pair, phi),
                phi,
            })
            .collect();
        return ScanReport {
            solutions_found: Vec::new(),
            residual_max: 0.,
            grid: (n_phi, n_phi),
            newton_iterations: 0,
            continuum: Some(ContinuumReport {
                shape: ContinuumShape::PhiFamily,
                fraction,
                samples,
            }),
        };
    }

    // Candidates: sign changes (cyclic), plus local minima of |f| that do not
    // change sign (close root pairs, tangencies).
    let mut starts = Vec::new();
    for k in 0..n_phi {
        let k1 = (k + 1) % n_phi;
        let (a, b) = (grid[k], if k1 == 0 { grid[0] + TAU } else { grid[k1] });
        if values[k] * values[k1] <= 0. {
            starts.push(narrow_bracket(&f, a, b, values[k]));
        }
        let km = (k + n_phi - 1) % n_phi;
        if values[k].abs() <= values[km].abs() && values[k].abs() <= values[k1].abs() {
            starts.push(grid[k]);
        }
    }

    let mut solutions: Vec<Pose> = Vec::new();
    let mut residual_max: f64 = 0.;
    let mut newton_iterations = 0;
    for phi in starts {
        let p = cons.solve_xy(pair, phi);
        let (z, res, it) = cons.newton(Vector3::new(p.x, p.y, phi));
        newton_iterations += it;
        if !(res < ACCEPT_RESIDUAL * scale.max(1.)) {
            continue;
        }
        let pose = Pose {
            p: Vec2::new(z.x, z.y),
            phi: normalize_angle(z.z),
        };
        if solutions.iter().any(|q| {
            q.p.distance(pose.p) < CLUSTER_EPS && angle_diff(q.phi, pose.phi).abs() < CLUSTER_EPS
        }) {
            continue;
        }
        residual_max = residual_max.max(res);
        solutions.push(pose);
    }
    solutions.sort_by(|a, b| a.phi.total_cmp(&b.phi));
    ScanReport {
        solutions_found: solutions,
        residual_max,
        grid: (n_phi, n_phi),
        newton_iterations,
        continuum: None,
    }
}

/// A few bisection steps on a sign-change bracket; Newton finishes.
fn narrow_bracket(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..20 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if (fa <= 0.) == (fm <= 0.) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// All prismatic axes parallel: `(x, y)` only enters through `n·P`, and the
/// three equations agree only at isolated `φ`, each giving a line of positions.
fn scan_rank_deficient(cons: &Constraints, grid: &[f64], scale: f64) -> ScanReport {
    let n = Vec2::new(cons.sc[0].0, -cons.sc[0].1);
    let sign = |i: usize| {
        let ni = Vec2::new(cons.sc[i].0, -cons.sc[i].1);
        if ni.dot(n) < 0. {
            -1.
        } else {
            1.
        }
    };
    let diff = |i: usize, phi: f64| sign(i) * cons.h(i, phi) - cons.h(0, phi);
    let mut samples = Vec::new();
    let k = grid.len();
    for idx in 0..k {
        let a = grid[idx];
        let b = if idx + 1 < k {
            grid[idx + 1]
        } else {
            grid[0] + TAU
        };
        let (fa, fb) = (diff(1, a), diff(1, b));
        if fa * fb > 0. {
            continue;
        }
        let mut lo = a;
        let mut hi = b;
        for _ in 0..100 {
            let m = 0.5 * (lo + hi);
            if (diff(1, lo) <= 0.) == (diff(1, m) <= 0.) {
                lo = m;
            } else {
                hi = m;
            }
        }
        let phi = 0.5 * (lo + hi);
        if diff(2, phi).abs() < CONTINUUM_RESIDUAL * scale {
            // Minimum-norm point on the line n·P = h₀.
            samples.push(Pose {
                p: n * cons.h(0, phi),
                phi: normalize_angle(phi),
            });
        }
    }
    let fraction = samples.len() as f64 / k as f64;
    ScanReport {
        solutions_found: Vec::new(),
        residual_max: 0.,
        grid: (k, 0),
        newton_iterations: 0,
        continuum: (!samples.is_empty()).then_some(ContinuumReport {
            shape: ContinuumShape::XyLine,
            fraction,
            samples,
        }),
    }
}

/// Solves the three constraints for `theta` by Newton from `start`.
pub fn local_dkp(geom: &ManipulatorGeometry, theta: &JointAngles, start: &Pose) -> Result<Pose> {
    let cons = Constraints::new(geom, theta);
    let (z, res, _) = cons.newton(Vector3::new(start.p.x, start.p.y, start.phi));
    if !(res < NEWTON_TOL * geom.scale().max(1.) * 10.) {
        return Err(Error::SingularNearby);
    }
    Ok(Pose {
        p: Vec2::new(z.x, z.y),
        phi: normalize_angle(z.z),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FdReport {
    /// `max |J_fd − J| / max |J|`.
    pub max_rel_error: f64,
    pub analytic: [[f64; 3]; 3],
    pub finite_difference: [[f64; 3]; 3],
}

/// Compares `J = A⁻¹B` with central differences of the pose, re-solving the
/// direct kinematics locally for each perturbed `θᵢ`.
pub fn jacobian_fd_check(
    geom: &ManipulatorGeometry,
    pose: &Pose,
    theta: &JointAngles,
    step: f64,
    tol: &Tolerances,
) -> Result<FdReport> {
    if !(step > 0.) {
        return Err(Error::InvalidInput(format!(
            "step must be positive, got {step}"
        )));
    }
    let mats = velocity::build_matrices(geom, pose, theta, tol)?;
    let mut analytic = [[0.; 3]; 3];
    let mut finite_difference = [[0.; 3]; 3];
    let base = theta.as_array();
    for col in 0..3 {
        let mut rates = [0.; 3];
        rates[col] = 1.;
        let t = velocity::forward_velocity(&mats, rates, tol)?;
        let perturbed = |d: f64| {
            let mut th = base;
            th[col] += d;
            local_dkp(geom, &JointAngles::from_array(th), pose)
        };
        let (plus, minus) = (perturbed(step)?, perturbed(-step)?);
        let fd = [
            (plus.p.x - minus.p.x) / (2. * step),
            (plus.p.y - minus.p.y) / (2. * step),
            angle_diff(plus.phi, minus.phi) / (2. * step),
        ];
        let an = [t.pdot.x, t.pdot.y, t.phidot];
        for row in 0..3 {
            analytic[row][col] = an[row];
            finite_difference[row][col] = fd[row];
        }
    }
    let jmax = analytic.iter().flatten().fold(0f64, |m, v| m.max(v.abs()));
    let err = analytic
        .iter()
        .flatten()
        .zip(finite_difference.iter().flatten())
        .fold(0f64, |m, (a, f)| m.max((a - f).abs()));
    if jmax == 0. {
        // B = 0: every actuator rate maps to zero twist.
        return Ok(FdReport {
            max_rel_error: err,
            analytic,
            finite_difference,
        });
    }
    Ok(FdReport {
        max_rel_error: err / jmax,
        analytic,
        finite_difference,
    })
}
