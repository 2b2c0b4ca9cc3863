//! Small geometry primitives: points, 2x2 matrices, axis-aligned rectangles.

/// A point (or vector) in the plane.
pub type Point = [f64; 2];

/// A 2x2 matrix stored by rows: [[a, b], [c, d]].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub const fn identity() -> Self {
        Mat2::new(1.0, 0.0, 0.0, 1.0)
    }

    /// Builds the matrix whose columns are `c0` and `c1`.
    pub const fn from_cols(c0: Point, c1: Point) -> Self {
        Mat2::new(c0[0], c1[0], c0[1], c1[1])
    }

    pub fn col(&self, j: usize) -> Point {
        match j {
            0 => [self.a, self.c],
            1 => [self.b, self.d],
            _ => panic!("column index out of range"),
        }
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2::new(self.a, self.c, self.b, self.d)
    }

    /// Inverse; the caller is responsible for checking the determinant.
    pub fn inverse(&self) -> Mat2 {
        let det = self.det();
        Mat2::new(self.d / det, -self.b / det, -self.c / det, self.a / det)
    }

    pub fn mul_vec(&self, p: Point) -> Point {
        [self.a * p[0] + self.b * p[1], self.c * p[0] + self.d * p[1]]
    }

    pub fn mul(&self, m: &Mat2) -> Mat2 {
        Mat2::new(
            self.a * m.a + self.b * m.c,
            self.a * m.b + self.b * m.d,
            self.c * m.a + self.d * m.c,
            self.c * m.b + self.d * m.d,
        )
    }
}

/// Closed axis-aligned rectangle [x0, x1] x [y0, y1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        assert!(x0 <= x1 && y0 <= y1, "rectangle bounds out of order");
        Rect { x0, x1, y0, y1 }
    }

    /// Square centered at the origin with the given half-width.
    pub fn centered_square(half_width: f64) -> Self {
        Rect::new(-half_width, half_width, -half_width, half_width)
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn contains(&self, p: Point) -> bool {
        p[0] >= self.x0 && p[0] <= self.x1 && p[1] >= self.y0 && p[1] <= self.y1
    }

    pub fn corners(&self) -> [Point; 4] {
        [
            [self.x0, self.y0],
            [self.x1, self.y0],
            [self.x0, self.y1],
            [self.x1, self.y1],
        ]
    }

    pub fn intersects(&self, other: &Rect) -> bool {
        self.x0 <= other.x1 && other.x0 <= self.x1 && self.y0 <= other.y1 && other.y0 <= self.y1
    }

    /// Grows the rectangle by `margin` on every side.
    pub fn dilated(&self, margin: f64) -> Rect {
        Rect::new(
            self.x0 - margin,
            self.x1 + margin,
            self.y0 - margin,
            self.y1 + margin,
        )
    }

    /// Smallest rectangle containing every given point.
    pub fn hull_of(points: &[Point]) -> Rect {
        let mut r = Rect {
            x0: f64::INFINITY,
            x1: f64::NEG_INFINITY,
            y0: f64::INFINITY,
            y1: f64::NEG_INFINITY,
        };
        for p in points {
            r.x0 = r.x0.min(p[0]);
            r.x1 = r.x1.max(p[0]);
            r.y0 = r.y0.min(p[1]);
            r.y1 = r.y1.max(p[1]);
        }
        assert!(r.x0 <= r.x1, "hull of empty point set");
        r
    }
}
