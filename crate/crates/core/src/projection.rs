//! Minimum-L2 projection onto the hat-spline space of a lattice.
//!
//! The projection of f onto span{B(. - Xi k)} solves the normal equations
//! G c = b with the Gram matrix G[k, l] = |det Xi| a[k - l] (the seven-point
//! autocorrelation stencil, SPD and well conditioned) and the load vector
//! b[k] = <f, B(. - Xi k)>. The index box is the target region dilated by a
//! margin of lattice cells so that truncating the infinite lattice to a
//! finite box does not perturb coefficients over the region.
//!
//! Quadrature here is kink-aware: the hat spline is linear on the six
//! triangles of its support hexagon and the spline surface is linear on the
//! two triangles of every lattice cell, so all rules are per-triangle Gauss
//! grids (Duffy-mapped) rather than tensor panels that would straddle kinks.

use std::io::Write;

use crate::asymptotics;
use crate::boxspline;
use crate::error::{Error, Result};
use crate::exec;
use crate::geom::{Point, Rect};
use crate::lattice::{IndexBox, LatticeSpec};
use crate::quad::{self, AdaptiveSettings};
use crate::spectral;
use crate::testfn::TestFunction;

/// Knobs for [`project`], [`measure_error`], and [`rate_study`].
#[derive(Debug, Clone, Copy)]
pub struct ProjectSettings {
    /// Gauss points per axis per support triangle in load assembly.
    pub rhs_points: usize,
    /// Gauss points per axis per cell triangle when measuring the error;
    /// one cell gets 2 * measure_points^2 samples.
    pub measure_points: usize,
    /// How many lattice cells the coefficient box extends past the region.
    pub dilation_cells: i64,
    /// Relative residual at which conjugate gradients stops.
    pub cg_rel_tol: f64,
    /// Iteration cap as a multiple of the number of unknowns.
    pub cg_max_iter_factor: usize,
}

impl Default for ProjectSettings {
    fn default() -> Self {
        ProjectSettings {
            rhs_points: 8,
            measure_points: 16,
            dilation_cells: 2,
            cg_rel_tol: 1e-12,
            cg_max_iter_factor: 10,
        }
    }
}

/// Spline coefficients over an index box: s(x) = sum c[k] B(x - Xi k).
#[derive(Debug, Clone)]
pub struct CoefficientGrid {
    spec: LatticeSpec,
    index_box: IndexBox,
    coeffs: Vec<f64>,
}

impl CoefficientGrid {
    pub fn new(spec: LatticeSpec, index_box: IndexBox, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != index_box.len() {
            return Err(Error::InvalidInput(format!(
                "coefficient count {} does not match index box size {}",
                coeffs.len(),
                index_box.len()
            )));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput(
                "coefficients must be finite".to_string(),
            ));
        }
        Ok(CoefficientGrid {
            spec,
            index_box,
            coeffs,
        })
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    pub fn index_box(&self) -> IndexBox {
        self.index_box
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// c[k], zero outside the index box.
    pub fn coefficient(&self, k: [i64; 2]) -> f64 {
        if self.index_box.contains(k) {
            self.coeffs[self.index_box.flat_index(k)]
        } else {
            0.0
        }
    }

    /// Evaluates the spline at a point; only the 3 x 3 index window around
    /// the containing cell can contribute.
    pub fn eval(&self, x: Point) -> f64 {
        let y = self.spec.xi_inv().mul_vec(x);
        let b1 = y[0].floor() as i64;
        let b2 = y[1].floor() as i64;
        let mut acc = 0.0;
        for k1 in (b1 - 1)..=(b1 + 1) {
            for k2 in (b2 - 1)..=(b2 + 1) {
                let c = self.coefficient([k1, k2]);
                if c != 0.0 {
                    acc += c * boxspline::eval_cartesian([y[0] - k1 as f64, y[1] - k2 as f64]);
                }
            }
        }
        acc
    }
}

/// The seven nonzero Gram entries of one row: (index offset, value).
pub fn gram_stencil(spec: &LatticeSpec) -> [([i64; 2], f64); 7] {
    spectral::STENCIL_OFFSETS.map(|off| (off, spec.det_abs() * spectral::autocorrelation(off)))
}

/// Hexagon vertices of the hat support, in cyclic order; consecutive pairs
/// with the origin bound the six triangles on which the hat is linear.
const HEX_VERTICES: [Point; 6] = [
    [1.0, 0.0],
    [1.0, 1.0],
    [0.0, 1.0],
    [-1.0, 0.0],
    [-1.0, -1.0],
    [0.0, -1.0],
];

/// Quadrature table for <f, B(. - Xi k)>: points y in the support hexagon
/// with weights w * B(y), premapped through Xi.
struct LoadRule {
    /// (Xi y, |det Xi| * w * B(y)) per point.
    points: Vec<(Point, f64)>,
}

impl LoadRule {
    fn build(spec: &LatticeSpec, points_per_axis: usize) -> Self {
        let det = spec.det_abs();
        let mut points = Vec::with_capacity(6 * points_per_axis * points_per_axis);
        for i in 0..6 {
            let rule = quad::triangle_rule(
                [0.0, 0.0],
                HEX_VERTICES[i],
                HEX_VERTICES[(i + 1) % 6],
                points_per_axis,
            );
            for (y, w) in rule {
                let phi = boxspline::eval_cartesian(y);
                points.push((spec.xi().mul_vec(y), det * w * phi));
            }
        }
        LoadRule { points }
    }

    /// b[k] = sum_q w_q f(Xi y_q + Xi k); the offset Xi k is passed in.
    fn load_at<F: Fn(Point) -> f64>(&self, f: &F, shift: Point) -> f64 {
        let mut acc = 0.0;
        for &(p, w) in &self.points {
            acc += w * f([p[0] + shift[0], p[1] + shift[1]]);
        }
        acc
    }
}

struct GramOperator {
    index_box: IndexBox,
    det: f64,
}

impl GramOperator {
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let dims = self.index_box.dims();
        let index_box = self.index_box;
        let det = self.det;
        exec::fill_rows(y, dims[1], |i, row| {
            let k1 = index_box.min[0] + i as i64;
            for (j, out) in row.iter_mut().enumerate() {
                let k2 = index_box.min[1] + j as i64;
                let mut acc = 0.0;
                for off in &spectral::STENCIL_OFFSETS {
                    let kk = [k1 + off[0], k2 + off[1]];
                    if index_box.contains(kk) {
                        acc += spectral::autocorrelation(*off) * x[index_box.flat_index(kk)];
                    }
                }
                *out = det * acc;
            }
        });
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    exec::sum_range(a.len(), |i| a[i] * b[i])
}

/// Plain conjugate gradients; the Gram stencil is diagonally dominant
/// (1/2 against six 1/12 neighbors) with a constant diagonal, so no
/// preconditioning is needed and convergence is stepsize-independent.
fn conjugate_gradients(
    op: &GramOperator,
    b: &[f64],
    rel_tol: f64,
    max_iter: usize,
) -> Result<Vec<f64>> {
    let n = b.len();
    let b_norm = dot(b, b).sqrt();
    let mut x = vec![0.0; n];
    if b_norm == 0.0 {
        return Ok(x);
    }
    let mut r = b.to_vec();
    let mut p = b.to_vec();
    let mut ap = vec![0.0; n];
    let mut rs = dot(&r, &r);
    for _ in 0..max_iter {
        if rs.sqrt() <= rel_tol * b_norm {
            return Ok(x);
        }
        op.apply(&p, &mut ap);
        let alpha = rs / dot(&p, &ap);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rs_next = dot(&r, &r);
        let beta = rs_next / rs;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
        rs = rs_next;
    }
    if rs.sqrt() <= rel_tol * b_norm {
        Ok(x)
    } else {
        Err(Error::SolverDiverged {
            residual: rs.sqrt() / b_norm,
            iterations: max_iter,
            target: rel_tol,
        })
    }
}

/// L2 projection of f onto the spline space over `region`, which must
/// contain the function's effective support.
pub fn project(
    f: &TestFunction,
    spec: &LatticeSpec,
    region: &Rect,
    settings: &ProjectSettings,
) -> Result<CoefficientGrid> {
    let support = f.require_support()?;
    if support.x0 < region.x0
        || support.x1 > region.x1
        || support.y0 < region.y0
        || support.y1 > region.y1
    {
        return Err(Error::InvalidInput(format!(
            "region {region:?} does not contain the effective support {support:?}"
        )));
    }
    let index_box = spec.index_range(region).dilated(settings.dilation_cells);
    let rule = LoadRule::build(spec, settings.rhs_points.max(2));

    let b = exec::map_range(index_box.len(), |flat| {
        let k = index_box.index_at(flat);
        rule.load_at(&|p| f.value(p), spec.point(k))
    });

    let op = GramOperator {
        index_box,
        det: spec.det_abs(),
    };
    let coeffs = conjugate_gradients(
        &op,
        &b,
        settings.cg_rel_tol,
        settings.cg_max_iter_factor * index_box.len(),
    )?;
    CoefficientGrid::new(*spec, index_box, coeffs)
}

/// Per-point measurement table for one lattice-cell triangle: local
/// coordinates, weight, and the barycentric factors of the three cell
/// corners that determine the spline on that triangle.
struct CellRule {
    /// (u, v, w, bary) with bary aligned to the triangle's corner triple.
    points: Vec<(f64, f64, f64, [f64; 3])>,
}

fn cell_rules(points_per_axis: usize) -> (CellRule, CellRule) {
    let lower = quad::triangle_rule([0.0, 0.0], [1.0, 0.0], [1.0, 1.0], points_per_axis);
    let upper = quad::triangle_rule([0.0, 0.0], [0.0, 1.0], [1.0, 1.0], points_per_axis);
    (
        CellRule {
            // Corners (k, k+e1, k+e1+e2): s = c0 (1-u) + c1 (u-v) + c2 v.
            points: lower
                .into_iter()
                .map(|(p, w)| (p[0], p[1], w, [1.0 - p[0], p[0] - p[1], p[1]]))
                .collect(),
        },
        CellRule {
            // Corners (k, k+e2, k+e1+e2): s = c0 (1-v) + c1 (v-u) + c2 u.
            points: upper
                .into_iter()
                .map(|(p, w)| (p[0], p[1], w, [1.0 - p[1], p[1] - p[0], p[0]]))
                .collect(),
        },
    )
}

/// ||f - s||_L2 over `region`, where s is the spline of `cg`. Integration
/// runs per lattice cell on the two triangles where s is linear; points
/// falling outside `region` are excluded.
pub fn measure_error(
    f: &TestFunction,
    cg: &CoefficientGrid,
    region: &Rect,
    settings: &ProjectSettings,
) -> Result<f64> {
    let spec = cg.spec();
    let cell_box = spec.index_range(region);
    if !(cg.index_box.contains(cell_box.min) && cg.index_box.contains(cell_box.max)) {
        return Err(Error::InvalidInput(format!(
            "coefficient box {:?} does not cover the region's index range {:?}",
            cg.index_box, cell_box
        )));
    }
    let (lower, upper) = cell_rules(settings.measure_points.max(4));
    let cells1 = (cell_box.max[0] - cell_box.min[0]) as usize;
    let cells2 = (cell_box.max[1] - cell_box.min[1]) as usize;
    if cells1 == 0 || cells2 == 0 {
        return Ok(0.0);
    }
    let det = spec.det_abs();
    let xi = *spec.xi();

    let total = exec::sum_range(cells1 * cells2, |flat| {
        let k1 = cell_box.min[0] + (flat / cells2) as i64;
        let k2 = cell_box.min[1] + (flat % cells2) as i64;
        let c00 = cg.coefficient([k1, k2]);
        let c10 = cg.coefficient([k1 + 1, k2]);
        let c01 = cg.coefficient([k1, k2 + 1]);
        let c11 = cg.coefficient([k1 + 1, k2 + 1]);
        let mut acc = 0.0;
        for (rule, corners) in [(&lower, [c00, c10, c11]), (&upper, [c00, c01, c11])] {
            for &(u, v, w, bary) in &rule.points {
                let x = xi.mul_vec([k1 as f64 + u, k2 as f64 + v]);
                if !region.contains(x) {
                    continue;
                }
                let s = corners[0] * bary[0] + corners[1] * bary[1] + corners[2] * bary[2];
                let d = f.value(x) - s;
                acc += w * d * d;
            }
        }
        det * acc
    });
    Ok(total.max(0.0).sqrt())
}

/// One row of a rate study.
#[derive(Debug, Clone, Copy)]
pub struct RateRow {
    pub stepsize: f64,
    pub measured: f64,
    pub asymptotic: f64,
    /// measured / asymptotic; non-finite when the leading term vanishes.
    pub ratio: f64,
    /// Log-log slope against the previous row; None for the first row and
    /// whenever a measured error sits at the exact-reproduction floor.
    pub slope: Option<f64>,
}

/// Rows of (stepsize, measured, asymptotic) with derived diagnostics.
#[derive(Debug, Clone)]
pub struct RateReport {
    pub rows: Vec<RateRow>,
}

/// Below this measured error a function is treated as exactly reproduced
/// and no slope is reported.
const EXACT_REPRODUCTION_FLOOR: f64 = 1e-10;

impl RateReport {
    /// CSV with header `T,eps_measured,eps_asym,ratio,slope`; non-finite
    /// ratios and absent slopes leave their field empty.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "T,eps_measured,eps_asym,ratio,slope")?;
        for row in &self.rows {
            write!(
                w,
                "{:.16e},{:.16e},{:.16e},",
                row.stepsize, row.measured, row.asymptotic
            )?;
            if row.ratio.is_finite() {
                write!(w, "{:.16e}", row.ratio)?;
            }
            match row.slope {
                Some(s) if s.is_finite() => writeln!(w, ",{s:.16e}")?,
                _ => writeln!(w, ",")?,
            }
        }
        Ok(())
    }
}

/// Projects and measures f for each stepsize of a fixed direction pair,
/// comparing against the predicted leading error term.
pub fn rate_study(
    f: &TestFunction,
    theta1: f64,
    theta2: f64,
    stepsizes: &[f64],
    settings: &ProjectSettings,
    quad_settings: AdaptiveSettings,
) -> Result<RateReport> {
    if stepsizes.len() < 4 {
        return Err(Error::InvalidInput(
            "a rate study needs at least 4 stepsizes".to_string(),
        ));
    }
    for pair in stepsizes.windows(2) {
        if !(pair[1] < pair[0]) {
            return Err(Error::InvalidInput(
                "stepsizes must be strictly decreasing".to_string(),
            ));
        }
    }
    if !stepsizes.iter().all(|&t| t.is_finite() && t > 0.0 && t < 1.0) {
        return Err(Error::InvalidInput(
            "stepsizes must lie in (0, 1)".to_string(),
        ));
    }
    let region = f.require_support()?;
    let mut rows: Vec<RateRow> = Vec::with_capacity(stepsizes.len());
    for &t in stepsizes {
        let spec = LatticeSpec::new(theta1, theta2, t)?;
        let cg = project(f, &spec, &region, settings)?;
        let measured = measure_error(f, &cg, &region, settings)?;
        let asymptotic = asymptotics::asym_error_spatial(f, &spec, quad_settings)?;
        let slope = rows.last().and_then(|prev| {
            if measured > EXACT_REPRODUCTION_FLOOR && prev.measured > EXACT_REPRODUCTION_FLOOR {
                Some((prev.measured / measured).ln() / (prev.stepsize / t).ln())
            } else {
                None
            }
        });
        rows.push(RateRow {
            stepsize: t,
            measured,
            asymptotic,
            ratio: measured / asymptotic,
            slope,
        });
    }
    Ok(RateReport { rows })
}
