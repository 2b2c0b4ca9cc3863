//! Gauss-Legendre quadrature: 1D rules, tensor-product panels over
//! rectangles, Duffy-mapped triangle rules, a polar disk rule, and an
//! adaptive driver that doubles the panel grid until two successive
//! estimates agree.

use crate::error::{Error, Result};
use crate::exec;
use crate::geom::{Point, Rect};

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes the rule by Newton iteration on the Legendre recurrence.
    /// Nodes converge to a few ulps for every order used in this crate.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "rule order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n {
            // Tricomi initial guess for the i-th root of P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let step = p / d;
                x -= step;
                if step.abs() <= 1e-15 * x.abs().max(1.0) {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        GaussLegendre { nodes, weights }
    }

    /// Nodes and weights mapped to the interval [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| (mid + half * x, half * w))
            .collect()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Integrates `f` over `rect` on a `panels` x `panels` tiling with an
/// m-point Gauss rule per axis per tile. Tile sums are accumulated in a
/// fixed pairwise order.
pub fn tensor_rect<F>(f: &F, rect: Rect, panels: usize, m: usize) -> f64
where
    F: Fn(f64, f64) -> f64 + Sync + Send,
{
    assert!(panels >= 1);
    let gl = GaussLegendre::new(m);
    let dx = rect.width() / panels as f64;
    let dy = rect.height() / panels as f64;
    exec::sum_range(panels * panels, |tile| {
        let i = tile / panels;
        let j = tile % panels;
        let xs = gl.mapped(rect.x0 + i as f64 * dx, rect.x0 + (i + 1) as f64 * dx);
        let ys = gl.mapped(rect.y0 + j as f64 * dy, rect.y0 + (j + 1) as f64 * dy);
        let mut acc = 0.0;
        for &(x, wx) in &xs {
            for &(y, wy) in &ys {
                acc += wx * wy * f(x, y);
            }
        }
        acc
    })
}

/// Settings for [`adaptive_rect`] and the other adaptive drivers.
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveSettings {
    /// Relative agreement required between two successive refinements.
    pub rel_tol: f64,
    /// Panel count per axis of the first pass.
    pub initial_panels: usize,
    /// Gauss points per axis per panel.
    pub points: usize,
    /// How many times the panel grid may be doubled.
    pub max_doublings: usize,
}

impl Default for AdaptiveSettings {
    fn default() -> Self {
        AdaptiveSettings {
            rel_tol: 1e-6,
            initial_panels: 4,
            points: 16,
            max_doublings: 6,
        }
    }
}

/// Tensor-product integration over `rect`, doubling the panel grid until two
/// successive estimates agree to `rel_tol`.
pub fn adaptive_rect<F>(f: &F, rect: Rect, settings: AdaptiveSettings) -> Result<f64>
where
    F: Fn(f64, f64) -> f64 + Sync + Send,
{
    let mut panels = settings.initial_panels.max(1);
    let mut prev = tensor_rect(f, rect, panels, settings.points);
    let mut rel = f64::INFINITY;
    for level in 1..=settings.max_doublings {
        panels *= 2;
        let next = tensor_rect(f, rect, panels, settings.points);
        let denom = next.abs().max(prev.abs());
        rel = if denom == 0.0 {
            0.0
        } else {
            (next - prev).abs() / denom
        };
        if rel <= settings.rel_tol {
            return Ok(next);
        }
        prev = next;
        let _ = level;
    }
    Err(Error::QuadratureUnderResolved {
        rel_change: rel,
        target: settings.rel_tol,
        levels: settings.max_doublings,
    })
}

/// m x m Duffy-mapped Gauss points and weights for the triangle
/// (v0, v1, v2). Exact for polynomials of total degree up to roughly m - 2
/// and spectrally accurate for smooth integrands.
pub fn triangle_rule(v0: Point, v1: Point, v2: Point, m: usize) -> Vec<(Point, f64)> {
    let gl = GaussLegendre::new(m);
    let unit = gl.mapped(0.0, 1.0);
    let e1 = [v1[0] - v0[0], v1[1] - v0[1]];
    let e2 = [v2[0] - v1[0], v2[1] - v1[1]];
    // |cross(v1-v0, v2-v1)| = twice the triangle area.
    let jac = (e1[0] * e2[1] - e1[1] * e2[0]).abs();
    let mut out = Vec::with_capacity(m * m);
    for &(s, ws) in &unit {
        for &(t, wt) in &unit {
            let p = [v0[0] + s * e1[0] + s * t * e2[0], v0[1] + s * e1[1] + s * t * e2[1]];
            out.push((p, ws * wt * s * jac));
        }
    }
    out
}

/// Polar rule for the disk of the given radius: Gauss in r (with the r
/// Jacobian folded into the weights) times a uniform trapezoid in angle,
/// which is spectrally accurate for smooth periodic integrands.
pub fn disk_rule(radius: f64, radial_points: usize, angular_points: usize) -> Vec<(Point, f64)> {
    let gl = GaussLegendre::new(radial_points);
    let radial = gl.mapped(0.0, radius);
    let dtheta = std::f64::consts::TAU / angular_points as f64;
    let mut out = Vec::with_capacity(radial_points * angular_points);
    for &(r, wr) in &radial {
        for j in 0..angular_points {
            let theta = dtheta * j as f64;
            out.push(([r * theta.cos(), r * theta.sin()], wr * r * dtheta));
        }
    }
    out
}

/// Integrates `f` over the disk, doubling the rule until two estimates agree.
pub fn adaptive_disk<F>(f: &F, radius: f64, settings: AdaptiveSettings) -> Result<f64>
where
    F: Fn(f64, f64) -> f64 + Sync + Send,
{
    let eval = |nr: usize, nt: usize| -> f64 {
        let rule = disk_rule(radius, nr, nt);
        let parts: Vec<f64> = rule.iter().map(|&(p, w)| w * f(p[0], p[1])).collect();
        exec::pairwise_sum(&parts)
    };
    let mut nr = settings.points.max(4);
    let mut nt = 2 * nr;
    let mut prev = eval(nr, nt);
    let mut rel = f64::INFINITY;
    for _ in 0..settings.max_doublings {
        nr *= 2;
        nt *= 2;
        let next = eval(nr, nt);
        let denom = next.abs().max(prev.abs());
        rel = if denom == 0.0 {
            0.0
        } else {
            (next - prev).abs() / denom
        };
        if rel <= settings.rel_tol {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureUnderResolved {
        rel_change: rel,
        target: settings.rel_tol,
        levels: settings.max_doublings,
    })
}
