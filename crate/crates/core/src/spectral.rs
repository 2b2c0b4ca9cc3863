//! Shift-invariant L2 analysis of the hat function: the autocorrelation
//! stencil, its Fourier symbol, brute-force alias sums, and the
//! approximation error kernel
//!
//! ```text
//! E(w) = 1 - hathat(w)^2 / A(w),    A(w) = sum_k |hathat(w + 2 pi k)|^2
//! ```
//!
//! whose small-frequency behaviour E(w) ~ (w1^2 + w1 w2 + w2^2)^2 / 720
//! drives every fourth-order error estimate in this crate.

use std::sync::OnceLock;

use crate::boxspline::fourier_cartesian;
use crate::exec;
use crate::geom::Point;

const PI: f64 = std::f64::consts::PI;

/// Inner products of the hat with its own integer translates:
/// 1/2 at the origin, 1/12 at the six neighbours +-(1,0), +-(0,1), +-(1,1),
/// zero elsewhere.
pub fn autocorrelation(k: [i64; 2]) -> f64 {
    match (k[0], k[1]) {
        (0, 0) => 0.5,
        (1, 0) | (-1, 0) | (0, 1) | (0, -1) | (1, 1) | (-1, -1) => 1.0 / 12.0,
        _ => 0.0,
    }
}

/// The seven offsets with nonzero autocorrelation, row-major in k.
pub const STENCIL_OFFSETS: [[i64; 2]; 7] = [
    [-1, -1],
    [-1, 0],
    [0, -1],
    [0, 0],
    [0, 1],
    [1, 0],
    [1, 1],
];

/// Fourier symbol of the autocorrelation:
/// A(w) = 1/2 + (cos w1 + cos w2 + cos(w1 + w2)) / 6.
/// Real, 2 pi-periodic, with range [1/4, 1].
pub fn a_phi(omega: Point) -> f64 {
    0.5 + (omega[0].cos() + omega[1].cos() + (omega[0] + omega[1]).cos()) / 6.0
}

/// Truncated alias sum sum_{|k|_inf <= k_max} |hathat(w + 2 pi k)|^2,
/// the brute-force counterpart of [`a_phi`]. Converges like k_max^-3.
pub fn a_phi_bruteforce(omega: Point, k_max: i64) -> f64 {
    let side = (2 * k_max + 1) as usize;
    let terms = exec::map_range(side * side, |flat| {
        let k1 = flat as i64 / side as i64 - k_max;
        let k2 = flat as i64 % side as i64 - k_max;
        let v = fourier_cartesian([
            omega[0] + 2.0 * PI * k1 as f64,
            omega[1] + 2.0 * PI * k2 as f64,
        ]);
        v * v
    });
    exec::pairwise_sum(&terms)
}

/// Below this sup-norm the kernel switches to the Taylor-numerator path.
const SERIES_THRESHOLD: f64 = 0.5;
/// Inclusive total degree of the numerator polynomial in (w1/2, w2/2).
/// The omitted remainder is below 1e-16 relative on the switch region.
const POLY_DEGREE: usize = 20;

type NumeratorPoly = [[f64; POLY_DEGREE + 1]; POLY_DEGREE + 1];

static NUMERATOR_POLY: OnceLock<NumeratorPoly> = OnceLock::new();

/// L2 approximation error kernel of the hat spline space.
///
/// For |w|_inf >= 0.5 this is the direct formula 1 - hathat(w)^2 / A(w)
/// with tiny negative roundoff clamped to zero. Below that the direct form
/// cancels catastrophically (the value is ~|w|^4/720 against an absolute
/// roundoff of ~1e-16), so the numerator A(w) - hathat(w)^2 is evaluated
/// instead as its bivariate Taylor polynomial in (w1/2, w2/2). Both A and
/// hathat^2 are entire with elementary coefficients; their difference
/// starts at total degree four, and the degree-zero and degree-two
/// coefficients are cancelled exactly when the polynomial is built. Every
/// retained monomial then scales like the kernel itself, so the evaluation
/// keeps full relative precision all the way down to w = 0.
pub fn error_kernel(omega: Point) -> f64 {
    if omega[0].abs().max(omega[1].abs()) < SERIES_THRESHOLD {
        error_kernel_series(omega)
    } else {
        let p = fourier_cartesian(omega);
        let e = 1.0 - p * p / a_phi(omega);
        debug_assert!(e > -1e-14, "kernel roundoff out of expected range: {e}");
        e.max(0.0)
    }
}

fn error_kernel_series(omega: Point) -> f64 {
    let u = 0.5 * omega[0];
    let v = 0.5 * omega[1];
    let poly = numerator_poly();
    let mut up = [1.0; POLY_DEGREE + 1];
    let mut vp = [1.0; POLY_DEGREE + 1];
    for i in 1..=POLY_DEGREE {
        up[i] = up[i - 1] * u;
        vp[i] = vp[i - 1] * v;
    }
    // Sum by descending total degree so the small corrections go in first.
    let mut num = 0.0;
    for half in (2..=POLY_DEGREE / 2).rev() {
        let degree = 2 * half;
        for i in 0..=degree {
            let c = poly[i][degree - i];
            if c != 0.0 {
                num += c * up[i] * vp[degree - i];
            }
        }
    }
    (num / a_phi(omega)).max(0.0)
}

fn numerator_poly() -> &'static NumeratorPoly {
    NUMERATOR_POLY.get_or_init(build_numerator_poly)
}

/// Truncated product of two polynomials; cross terms above the degree cap
/// only influence the kernel beyond the retained remainder scale.
fn poly_mul(a: &NumeratorPoly, b: &NumeratorPoly) -> NumeratorPoly {
    let mut out = [[0.0; POLY_DEGREE + 1]; POLY_DEGREE + 1];
    for i1 in 0..=POLY_DEGREE {
        for j1 in 0..=POLY_DEGREE - i1 {
            let c = a[i1][j1];
            if c == 0.0 {
                continue;
            }
            for i2 in 0..=POLY_DEGREE - i1 - j1 {
                for j2 in 0..=POLY_DEGREE - i1 - j1 - i2 {
                    out[i1 + i2][j1 + j2] += c * b[i2][j2];
                }
            }
        }
    }
    out
}

/// Taylor coefficients of A(2u, 2v) - sinc^2(u) sinc^2(v) sinc^2(u + v).
///
/// Built from sinc^2(x) = sum_m (-1)^m 2^(2m+1) x^(2m) / (2m+2)! and the
/// cosine series of A. Coefficients below total degree four (and on odd
/// total degrees) vanish identically and are zeroed after the subtraction,
/// which removes the cancellation roundoff that would otherwise spoil the
/// relative accuracy near w = 0.
fn build_numerator_poly() -> NumeratorPoly {
    let mut binom = [[0.0; POLY_DEGREE + 1]; POLY_DEGREE + 1];
    for n in 0..=POLY_DEGREE {
        binom[n][0] = 1.0;
        for k in 1..=n {
            binom[n][k] = binom[n - 1][k - 1] + binom[n - 1][k];
        }
    }
    let factorial = |n: usize| (1..=n).fold(1.0, |p, k| p * k as f64);

    let mut su = [[0.0; POLY_DEGREE + 1]; POLY_DEGREE + 1];
    let mut sv = [[0.0; POLY_DEGREE + 1]; POLY_DEGREE + 1];
    let mut sw = [[0.0; POLY_DEGREE + 1]; POLY_DEGREE + 1];
    for m in 0..=POLY_DEGREE / 2 {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let sm = sign * 2f64.powi(2 * m as i32 + 1) / factorial(2 * m + 2);
        su[2 * m][0] = sm;
        sv[0][2 * m] = sm;
        for i in 0..=2 * m {
            sw[i][2 * m - i] += sm * binom[2 * m][i];
        }
    }
    let p2 = poly_mul(&poly_mul(&su, &sv), &sw);

    let mut n = [[0.0; POLY_DEGREE + 1]; POLY_DEGREE + 1];
    n[0][0] = 0.5;
    for m in 0..=POLY_DEGREE / 2 {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let cm = sign * 2f64.powi(2 * m as i32) / (6.0 * factorial(2 * m));
        n[2 * m][0] += cm;
        n[0][2 * m] += cm;
        for i in 0..=2 * m {
            n[i][2 * m - i] += cm * binom[2 * m][i];
        }
    }
    for i in 0..=POLY_DEGREE {
        for j in 0..=POLY_DEGREE - i {
            n[i][j] -= p2[i][j];
            if i + j < 4 || (i + j) % 2 == 1 {
                debug_assert!(n[i][j].abs() < 1e-14, "residue at ({i}, {j}): {}", n[i][j]);
                n[i][j] = 0.0;
            }
        }
    }
    n
}

/// Dominant small-frequency term of the kernel at stepsize `step`:
/// (step^4 / 720) (w1^2 + w1 w2 + w2^2)^2.
pub fn taylor_dominant(omega: Point, step: f64) -> f64 {
    let q = omega[0] * omega[0] + omega[0] * omega[1] + omega[1] * omega[1];
    step.powi(4) / 720.0 * q * q
}
