//! Lattice construction and point enumeration.
//!
//! A lattice is the integer span of the columns of the grid matrix
//!
//! ```text
//! Xi = (T / sqrt(|sin(theta2 - theta1)|)) * [cos(theta1)  cos(theta2)]
//!                                           [sin(theta1)  sin(theta2)]
//! ```
//!
//! The sqrt normalization makes the cell area |det Xi| equal to T^2 for
//! every direction pair, so lattices with the same stepsize spend the same
//! density of degrees of freedom regardless of their shape.

use crate::error::{Error, Result};
use crate::geom::{Mat2, Point, Rect};

/// Direction pairs closer to collinear than this are rejected.
pub const MIN_SIN_DELTA: f64 = 1e-9;

const TAU: f64 = std::f64::consts::TAU;

/// The two named lattice presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeKind {
    /// theta1 = 0, theta2 = pi/2: the square grid.
    Cartesian,
    /// theta1 = 0, theta2 = 2 pi / 3: the regular hexagonal grid.
    Hexagonal,
}

/// A validated lattice: direction angles, stepsize, grid matrix, inverse.
#[derive(Debug, Clone, Copy)]
pub struct LatticeSpec {
    theta1: f64,
    theta2: f64,
    stepsize: f64,
    xi: Mat2,
    xi_inv: Mat2,
}

impl LatticeSpec {
    /// Builds the lattice for the given direction angles (radians) and
    /// stepsize. Angles are reduced modulo 2 pi; the pair is rejected as
    /// degenerate when |sin(theta2 - theta1)| <= 1e-9.
    pub fn new(theta1: f64, theta2: f64, stepsize: f64) -> Result<Self> {
        if !(stepsize.is_finite() && stepsize > 0.0) {
            return Err(Error::InvalidInput(format!(
                "stepsize must be positive and finite, got {stepsize}"
            )));
        }
        if !theta1.is_finite() || !theta2.is_finite() {
            return Err(Error::InvalidInput(
                "lattice angles must be finite".to_string(),
            ));
        }
        let theta1 = theta1.rem_euclid(TAU);
        let theta2 = theta2.rem_euclid(TAU);
        let sin_delta = (theta2 - theta1).sin();
        if sin_delta.abs() <= MIN_SIN_DELTA {
            return Err(Error::DegenerateLattice {
                sin_delta: sin_delta.abs(),
                min: MIN_SIN_DELTA,
            });
        }
        let scale = stepsize / sin_delta.abs().sqrt();
        let (s1, c1) = theta1.sin_cos();
        let (s2, c2) = theta2.sin_cos();
        let xi = Mat2::from_cols([scale * c1, scale * s1], [scale * c2, scale * s2]);
        let xi_inv = xi.inverse();
        Ok(LatticeSpec {
            theta1,
            theta2,
            stepsize,
            xi,
            xi_inv,
        })
    }

    pub fn preset(kind: LatticeKind, stepsize: f64) -> Result<Self> {
        match kind {
            LatticeKind::Cartesian => Self::cartesian(stepsize),
            LatticeKind::Hexagonal => Self::hexagonal(stepsize),
        }
    }

    pub fn cartesian(stepsize: f64) -> Result<Self> {
        Self::new(0.0, std::f64::consts::FRAC_PI_2, stepsize)
    }

    pub fn hexagonal(stepsize: f64) -> Result<Self> {
        Self::new(0.0, 2.0 * std::f64::consts::FRAC_PI_3, stepsize)
    }

    pub fn theta1(&self) -> f64 {
        self.theta1
    }

    pub fn theta2(&self) -> f64 {
        self.theta2
    }

    /// Angle between the two lattice directions, in (0, 2 pi).
    pub fn delta(&self) -> f64 {
        (self.theta2 - self.theta1).rem_euclid(TAU)
    }

    pub fn stepsize(&self) -> f64 {
        self.stepsize
    }

    pub fn xi(&self) -> &Mat2 {
        &self.xi
    }

    pub fn xi_inv(&self) -> &Mat2 {
        &self.xi_inv
    }

    /// |det Xi|; equals stepsize^2 by construction, up to roundoff.
    pub fn det_abs(&self) -> f64 {
        self.xi.det().abs()
    }

    /// The lattice point Xi k.
    pub fn point(&self, k: [i64; 2]) -> Point {
        self.xi.mul_vec([k[0] as f64, k[1] as f64])
    }

    /// Index bounds of the preimage of `rect` under Xi: every k with
    /// Xi k in `rect` (and every unit index cell touching the preimage)
    /// lies inside the returned box.
    pub fn index_range(&self, rect: &Rect) -> IndexBox {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for corner in rect.corners() {
            let k = self.xi_inv.mul_vec(corner);
            for a in 0..2 {
                lo[a] = lo[a].min(k[a]);
                hi[a] = hi[a].max(k[a]);
            }
        }
        IndexBox {
            min: [lo[0].floor() as i64, lo[1].floor() as i64],
            max: [hi[0].ceil() as i64, hi[1].ceil() as i64],
        }
    }

    /// All lattice points inside the closed rectangle, row-major in k
    /// (k1 ascending, then k2 ascending within each k1 row).
    pub fn points_in(&self, rect: &Rect) -> Vec<([i64; 2], Point)> {
        let range = self.index_range(rect);
        let mut out = Vec::new();
        for k1 in range.min[0]..=range.max[0] {
            for k2 in range.min[1]..=range.max[1] {
                let p = self.point([k1, k2]);
                if rect.contains(p) {
                    out.push(([k1, k2], p));
                }
            }
        }
        out
    }
}

/// Inclusive integer index box [min1, max1] x [min2, max2].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexBox {
    pub min: [i64; 2],
    pub max: [i64; 2],
}

impl IndexBox {
    pub fn new(min: [i64; 2], max: [i64; 2]) -> Self {
        assert!(
            min[0] <= max[0] && min[1] <= max[1],
            "index box bounds out of order"
        );
        IndexBox { min, max }
    }

    pub fn dims(&self) -> [usize; 2] {
        [
            (self.max[0] - self.min[0] + 1) as usize,
            (self.max[1] - self.min[1] + 1) as usize,
        ]
    }

    pub fn len(&self) -> usize {
        let d = self.dims();
        d[0] * d[1]
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, k: [i64; 2]) -> bool {
        k[0] >= self.min[0] && k[0] <= self.max[0] && k[1] >= self.min[1] && k[1] <= self.max[1]
    }

    pub fn dilated(&self, margin: i64) -> IndexBox {
        IndexBox {
            min: [self.min[0] - margin, self.min[1] - margin],
            max: [self.max[0] + margin, self.max[1] + margin],
        }
    }

    /// Row-major flat offset of `k`; the caller guarantees containment.
    pub fn flat_index(&self, k: [i64; 2]) -> usize {
        let d = self.dims();
        ((k[0] - self.min[0]) as usize) * d[1] + (k[1] - self.min[1]) as usize
    }

    /// Inverse of [`IndexBox::flat_index`].
    pub fn index_at(&self, flat: usize) -> [i64; 2] {
        let d = self.dims();
        [
            self.min[0] + (flat / d[1]) as i64,
            self.min[1] + (flat % d[1]) as i64,
        ]
    }
}
