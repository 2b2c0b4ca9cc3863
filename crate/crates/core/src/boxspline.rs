//! The three-direction box spline of degree one: the CPWL hat function on
//! the regular triangulation generated by e1, e2, and e1 + e2, plus its
//! warped form on an arbitrary lattice.
//!
//! On the integer lattice the hat takes the value 1 at the origin, 0 at
//! every other lattice point, and is supported on the closed hexagon
//! |x1| <= 1, |x2| <= 1, |x1 - x2| <= 1. Warping by a grid matrix Xi gives
//! the nodal basis of the CPWL functions on that lattice.

use crate::geom::Point;
use crate::lattice::LatticeSpec;

/// Hat value at `p` on the integer lattice.
pub fn eval_cartesian(p: Point) -> f64 {
    let lo = p[0].min(p[1]).min(0.0);
    let hi = p[0].max(p[1]).max(0.0);
    (1.0 + lo - hi).max(0.0)
}

/// True when `p` lies in the closed support hexagon.
pub fn in_support(p: Point) -> bool {
    p[0].abs() <= 1.0 && p[1].abs() <= 1.0 && (p[0] - p[1]).abs() <= 1.0
}

/// sin(t)/t, with a Taylor fallback 1 - t^2/6 + t^4/120 below |t| = 1e-4
/// (the truncation error there is under 1e-26).
pub fn sinc(t: f64) -> f64 {
    if t.abs() < 1e-4 {
        let t2 = t * t;
        1.0 - t2 / 6.0 * (1.0 - t2 / 20.0)
    } else {
        t.sin() / t
    }
}

/// Fourier transform of the integer-lattice hat:
/// sinc((w1 + w2)/2) * sinc(w1/2) * sinc(w2/2).
pub fn fourier_cartesian(omega: Point) -> f64 {
    sinc(0.5 * (omega[0] + omega[1])) * sinc(0.5 * omega[0]) * sinc(0.5 * omega[1])
}

/// The hat warped onto a lattice: B(x) = hat(Xi^-1 x).
#[derive(Debug, Clone, Copy)]
pub struct BoxSpline {
    spec: LatticeSpec,
}

impl BoxSpline {
    pub fn new(spec: LatticeSpec) -> Self {
        BoxSpline { spec }
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    /// B(x) = hat(Xi^-1 x).
    pub fn eval(&self, x: Point) -> f64 {
        eval_cartesian(self.spec.xi_inv().mul_vec(x))
    }

    /// Bhat(w) = |det Xi| * hathat(Xi^T w); exact because the third
    /// direction Xi(e1 + e2) is the sum of the first two.
    pub fn fourier(&self, omega: Point) -> f64 {
        self.spec.det_abs() * fourier_cartesian(self.spec.xi().transpose().mul_vec(omega))
    }

    /// Sum of all translates B(x - Xi k) covering `x`. At most seven
    /// translates are nonzero, all with indices in the 3x3 window around
    /// floor(Xi^-1 x); equals 1 everywhere (partition of unity).
    pub fn translate_sum(&self, x: Point) -> f64 {
        let y = self.spec.xi_inv().mul_vec(x);
        let base = [y[0].floor() as i64, y[1].floor() as i64];
        let mut acc = 0.0;
        for dk1 in -1..=1 {
            for dk2 in -1..=1 {
                let k = [base[0] + dk1, base[1] + dk2];
                acc += eval_cartesian([y[0] - k[0] as f64, y[1] - k[1] as f64]);
            }
        }
        acc
    }
}
