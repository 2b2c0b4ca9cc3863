//! Registry of analytic test functions.
//!
//! Each function packages spatial values with whatever extra structure it
//! can provide exactly: Hessian, Fourier transform, effective support, and
//! closed-form second-derivative norms. The quadrature-based error
//! functionals consume whichever side is available and error out otherwise,
//! so nothing silently falls back to a less accurate path.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geom::{Mat2, Point, Rect};

/// Radius (in standard deviations) beyond which a unit Gaussian is below
/// 1e-14: sqrt(2 ln 1e14) ~ 8.0295, rounded up with margin.
const GAUSSIAN_CUTOFF_SIGMAS: f64 = 8.1;

pub type ScalarFn = Arc<dyn Fn(Point) -> f64 + Send + Sync>;
pub type HessianFn = Arc<dyn Fn(Point) -> Hessian + Send + Sync>;

/// Second derivatives at a point (the matrix is symmetric).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hessian {
    pub dxx: f64,
    pub dxy: f64,
    pub dyy: f64,
}

/// Where a Fourier transform lives (its numerically relevant support).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FourierDomain {
    /// |fhat| < 1e-14 outside this rectangle.
    Rect(Rect),
    /// fhat vanishes identically outside the disk of this radius.
    Disk { radius: f64 },
}

/// A Fourier transform with its support. Every registry transform is real
/// (all registry functions are even), so the transform maps to f64.
#[derive(Clone)]
pub struct FourierSide {
    pub transform: ScalarFn,
    pub domain: FourierDomain,
}

/// Closed-form L2 norms of second-derivative quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticNorms {
    /// ||laplacian f||_L2.
    pub laplacian_l2: f64,
    /// Frobenius norm of the Hessian in L2: (int fxx^2 + 2 fxy^2 + fyy^2)^(1/2).
    pub hessian_frob_l2: f64,
}

#[derive(Clone)]
pub struct TestFunction {
    name: String,
    value: ScalarFn,
    hessian: Option<HessianFn>,
    fourier: Option<FourierSide>,
    /// |f| < 1e-14 outside this rectangle; None when the function decays
    /// too slowly for any rectangle to satisfy that bound.
    effective_support: Option<Rect>,
    analytic_norms: Option<AnalyticNorms>,
}

impl std::fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TestFunction")
            .field("name", &self.name)
            .field("hessian", &self.hessian.is_some())
            .field("fourier", &self.fourier.is_some())
            .field("effective_support", &self.effective_support)
            .field("analytic_norms", &self.analytic_norms)
            .finish()
    }
}

impl TestFunction {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn value(&self, p: Point) -> f64 {
        (self.value)(p)
    }

    pub fn hessian_fn(&self) -> Option<&HessianFn> {
        self.hessian.as_ref()
    }

    pub fn require_hessian(&self) -> Result<&HessianFn> {
        self.hessian
            .as_ref()
            .ok_or_else(|| Error::HessianUnavailable(self.name.clone()))
    }

    pub fn fourier(&self) -> Option<&FourierSide> {
        self.fourier.as_ref()
    }

    pub fn require_fourier(&self) -> Result<&FourierSide> {
        self.fourier
            .as_ref()
            .ok_or_else(|| Error::FourierUnavailable(self.name.clone()))
    }

    pub fn effective_support(&self) -> Option<Rect> {
        self.effective_support
    }

    pub fn require_support(&self) -> Result<Rect> {
        self.effective_support
            .ok_or_else(|| Error::SupportUnavailable(self.name.clone()))
    }

    pub fn analytic_norms(&self) -> Option<AnalyticNorms> {
        self.analytic_norms
    }

    /// Isotropic Gaussian exp(-|x|^2 / (2 sigma^2)).
    pub fn gaussian(sigma: f64) -> Result<Self> {
        check_positive("sigma", sigma)?;
        let s2 = sigma * sigma;
        let s4 = s2 * s2;
        let value: ScalarFn =
            Arc::new(move |p: Point| (-(p[0] * p[0] + p[1] * p[1]) / (2.0 * s2)).exp());
        let vh = value.clone();
        let hessian: HessianFn = Arc::new(move |p: Point| {
            let f = vh(p);
            Hessian {
                dxx: (p[0] * p[0] / s4 - 1.0 / s2) * f,
                dxy: p[0] * p[1] / s4 * f,
                dyy: (p[1] * p[1] / s4 - 1.0 / s2) * f,
            }
        });
        let amp = std::f64::consts::TAU * s2;
        let transform: ScalarFn =
            Arc::new(move |w: Point| amp * (-s2 * (w[0] * w[0] + w[1] * w[1]) / 2.0).exp());
        // ||lap f|| = ||H_f||_F = sqrt(2 pi) / sigma (they coincide because
        // int fxx fyy = int fxy^2 for smooth decaying f).
        let norm = std::f64::consts::TAU.sqrt() / sigma;
        Ok(TestFunction {
            name: format!("gaussian(sigma={sigma})"),
            value,
            hessian: Some(hessian),
            fourier: Some(FourierSide {
                transform,
                domain: FourierDomain::Rect(Rect::centered_square(GAUSSIAN_CUTOFF_SIGMAS / sigma)),
            }),
            effective_support: Some(Rect::centered_square(GAUSSIAN_CUTOFF_SIGMAS * sigma)),
            analytic_norms: Some(AnalyticNorms {
                laplacian_l2: norm,
                hessian_frob_l2: norm,
            }),
        })
    }

    /// Axis-aligned anisotropic Gaussian exp(-x1^2/(2 s1^2) - x2^2/(2 s2^2)).
    pub fn anisotropic_gaussian(sigma1: f64, sigma2: f64) -> Result<Self> {
        check_positive("sigma1", sigma1)?;
        check_positive("sigma2", sigma2)?;
        let (a2, b2) = (sigma1 * sigma1, sigma2 * sigma2);
        let (a4, b4) = (a2 * a2, b2 * b2);
        let value: ScalarFn = Arc::new(move |p: Point| {
            (-p[0] * p[0] / (2.0 * a2) - p[1] * p[1] / (2.0 * b2)).exp()
        });
        let vh = value.clone();
        let hessian: HessianFn = Arc::new(move |p: Point| {
            let f = vh(p);
            Hessian {
                dxx: (p[0] * p[0] / a4 - 1.0 / a2) * f,
                dxy: p[0] * p[1] / (a2 * b2) * f,
                dyy: (p[1] * p[1] / b4 - 1.0 / b2) * f,
            }
        });
        let amp = std::f64::consts::TAU * sigma1 * sigma2;
        let transform: ScalarFn = Arc::new(move |w: Point| {
            amp * (-(a2 * w[0] * w[0] + b2 * w[1] * w[1]) / 2.0).exp()
        });
        // Gaussian moments give
        // ||H||^2 = pi s1 s2 (3/(4 s1^4) + 3/(4 s2^4) + 1/(2 s1^2 s2^2)).
        let h2 = std::f64::consts::PI
            * sigma1
            * sigma2
            * (0.75 / a4 + 0.75 / b4 + 0.5 / (a2 * b2));
        let norm = h2.sqrt();
        let support = Rect::new(
            -GAUSSIAN_CUTOFF_SIGMAS * sigma1,
            GAUSSIAN_CUTOFF_SIGMAS * sigma1,
            -GAUSSIAN_CUTOFF_SIGMAS * sigma2,
            GAUSSIAN_CUTOFF_SIGMAS * sigma2,
        );
        let band = Rect::new(
            -GAUSSIAN_CUTOFF_SIGMAS / sigma1,
            GAUSSIAN_CUTOFF_SIGMAS / sigma1,
            -GAUSSIAN_CUTOFF_SIGMAS / sigma2,
            GAUSSIAN_CUTOFF_SIGMAS / sigma2,
        );
        Ok(TestFunction {
            name: format!("anisotropic-gaussian(sigma1={sigma1},sigma2={sigma2})"),
            value,
            hessian: Some(hessian),
            fourier: Some(FourierSide {
                transform,
                domain: FourierDomain::Rect(band),
            }),
            effective_support: Some(support),
            analytic_norms: Some(AnalyticNorms {
                laplacian_l2: norm,
                hessian_frob_l2: norm,
            }),
        })
    }

    /// Flat disk spectrum: fhat = amplitude on |w| <= omega_max, 0 outside.
    ///
    /// The spatial profile decays only like r^(-3/2), so there is no
    /// effective-support rectangle and no spatial Hessian: everything
    /// second-order about this function is done on the Fourier side, where
    /// it is exact. Spatial values are still available through the radial
    /// inversion integral evaluated by quadrature.
    pub fn fourier_disk(amplitude: f64, omega_max: f64) -> Result<Self> {
        check_positive("omega_max", omega_max)?;
        if !amplitude.is_finite() {
            return Err(Error::InvalidInput("amplitude must be finite".to_string()));
        }
        let transform: ScalarFn = Arc::new(move |w: Point| {
            if w[0] * w[0] + w[1] * w[1] <= omega_max * omega_max {
                amplitude
            } else {
                0.0
            }
        });
        // f(x) = (1/(2 pi^2)) int_0^R int_0^pi cos(w r cos phi) w dphi dw,
        // evaluated on a fixed Gauss grid in (w, phi).
        let gl = crate::quad::GaussLegendre::new(48);
        let rad: Vec<(f64, f64)> = gl.mapped(0.0, omega_max);
        let ang: Vec<(f64, f64)> = gl.mapped(0.0, std::f64::consts::PI);
        let value: ScalarFn = Arc::new(move |p: Point| {
            let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
            let mut acc = 0.0;
            for &(w, ww) in &rad {
                let mut inner = 0.0;
                for &(phi, wp) in &ang {
                    inner += wp * (w * r * phi.cos()).cos();
                }
                acc += ww * w * inner;
            }
            amplitude * acc / (2.0 * std::f64::consts::PI * std::f64::consts::PI)
        });
        // Parseval: ||lap f||^2 = ||H||^2 = (1/4pi^2) int r^4 |fhat|^2
        //         = c^2 R^6 / (12 pi).
        let norm = amplitude.abs() * omega_max.powi(3) / (12.0 * std::f64::consts::PI).sqrt();
        Ok(TestFunction {
            name: format!("fourier-disk(amplitude={amplitude},omega_max={omega_max})"),
            value,
            hessian: None,
            fourier: Some(FourierSide {
                transform,
                domain: FourierDomain::Disk { radius: omega_max },
            }),
            effective_support: None,
            analytic_norms: Some(AnalyticNorms {
                laplacian_l2: norm,
                hessian_frob_l2: norm,
            }),
        })
    }

    /// Separable sinusoid under a wide Gaussian window:
    /// sin(f1 x1) sin(f2 x2) exp(-|x|^2 / (2 ws^2)).
    pub fn windowed_sinusoid(freq1: f64, freq2: f64, window_sigma: f64) -> Result<Self> {
        check_positive("window_sigma", window_sigma)?;
        if !freq1.is_finite() || !freq2.is_finite() {
            return Err(Error::InvalidInput("frequencies must be finite".to_string()));
        }
        let s2 = window_sigma * window_sigma;
        let s4 = s2 * s2;
        // f = u(x1) v(x2) with u = sin(a t) g(t), g = exp(-t^2 / (2 s^2)).
        let u = move |a: f64, t: f64| (a * t).sin() * (-t * t / (2.0 * s2)).exp();
        let du = move |a: f64, t: f64| {
            (a * (a * t).cos() - t / s2 * (a * t).sin()) * (-t * t / (2.0 * s2)).exp()
        };
        let ddu = move |a: f64, t: f64| {
            ((-a * a + t * t / s4 - 1.0 / s2) * (a * t).sin() - 2.0 * a * t / s2 * (a * t).cos())
                * (-t * t / (2.0 * s2)).exp()
        };
        let value: ScalarFn = Arc::new(move |p: Point| u(freq1, p[0]) * u(freq2, p[1]));
        let hessian: HessianFn = Arc::new(move |p: Point| Hessian {
            dxx: ddu(freq1, p[0]) * u(freq2, p[1]),
            dxy: du(freq1, p[0]) * du(freq2, p[1]),
            dyy: u(freq1, p[0]) * ddu(freq2, p[1]),
        });
        // 1D transform of sin(a t) g(t) is -(i/2)(G(w - a) - G(w + a)) with
        // G(w) = s sqrt(2 pi) exp(-s^2 w^2 / 2); the 2D product is real.
        let g1 = move |w: f64| {
            window_sigma * std::f64::consts::TAU.sqrt() * (-s2 * w * w / 2.0).exp()
        };
        let transform: ScalarFn = Arc::new(move |w: Point| {
            -0.25 * (g1(w[0] - freq1) - g1(w[0] + freq1)) * (g1(w[1] - freq2) - g1(w[1] + freq2))
        });
        let hw = GAUSSIAN_CUTOFF_SIGMAS * window_sigma;
        let bw1 = freq1.abs() + GAUSSIAN_CUTOFF_SIGMAS / window_sigma;
        let bw2 = freq2.abs() + GAUSSIAN_CUTOFF_SIGMAS / window_sigma;
        Ok(TestFunction {
            name: format!(
                "windowed-sinusoid(freq1={freq1},freq2={freq2},window_sigma={window_sigma})"
            ),
            value,
            hessian: Some(hessian),
            fourier: Some(FourierSide {
                transform,
                domain: FourierDomain::Rect(Rect::new(-bw1, bw1, -bw2, bw2)),
            }),
            effective_support: Some(Rect::centered_square(hw)),
            analytic_norms: None,
        })
    }

    /// Affine function c0 + cx x1 + cy x2, windowed to a square working
    /// region of the given half-width (the function itself is exactly
    /// affine; the window only scopes projections and quadratures).
    pub fn affine(c0: f64, cx: f64, cy: f64, half_width: f64) -> Result<Self> {
        check_positive("half_width", half_width)?;
        let value: ScalarFn = Arc::new(move |p: Point| c0 + cx * p[0] + cy * p[1]);
        let hessian: HessianFn = Arc::new(|_| Hessian {
            dxx: 0.0,
            dxy: 0.0,
            dyy: 0.0,
        });
        Ok(TestFunction {
            name: format!("affine(c0={c0},cx={cx},cy={cy})"),
            value,
            hessian: Some(hessian),
            fourier: None,
            effective_support: Some(Rect::centered_square(half_width)),
            analytic_norms: Some(AnalyticNorms {
                laplacian_l2: 0.0,
                hessian_frob_l2: 0.0,
            }),
        })
    }

    /// Fully custom function, for tests and adapters.
    pub fn custom(
        name: impl Into<String>,
        value: ScalarFn,
        hessian: Option<HessianFn>,
        fourier: Option<FourierSide>,
        effective_support: Option<Rect>,
        analytic_norms: Option<AnalyticNorms>,
    ) -> Self {
        TestFunction {
            name: name.into(),
            value,
            hessian,
            fourier,
            effective_support,
            analytic_norms,
        }
    }

    /// The composition g(x) = f(D x). Hessian and support transform
    /// exactly; the Fourier side maps to fhat(D^-T w) / |det D| over the
    /// image of the original rectangular domain (disk domains are dropped
    /// because their image is no longer a disk).
    pub fn compose_linear(&self, d: Mat2) -> Result<TestFunction> {
        let det = d.det();
        if det.abs() < 1e-300 {
            return Err(Error::InvalidInput(
                "composition matrix is singular".to_string(),
            ));
        }
        let name = format!("{}.linear", self.name);
        let value_in = self.value.clone();
        let value: ScalarFn = Arc::new(move |p: Point| value_in(d.mul_vec(p)));
        let hessian = self.hessian.as_ref().map(|h| {
            let h = h.clone();
            let f: HessianFn = Arc::new(move |p: Point| {
                let hh = h(d.mul_vec(p));
                Hessian {
                    dxx: d.a * d.a * hh.dxx + 2.0 * d.a * d.c * hh.dxy + d.c * d.c * hh.dyy,
                    dxy: d.a * d.b * hh.dxx
                        + (d.a * d.d + d.b * d.c) * hh.dxy
                        + d.c * d.d * hh.dyy,
                    dyy: d.b * d.b * hh.dxx + 2.0 * d.b * d.d * hh.dxy + d.d * d.d * hh.dyy,
                }
            });
            f
        });
        let d_inv = d.inverse();
        let effective_support = self.effective_support.map(|s| {
            Rect::hull_of(&s.corners().map(|c| d_inv.mul_vec(c)))
        });
        let fourier = self.fourier.as_ref().and_then(|fs| match fs.domain {
            FourierDomain::Rect(r) => {
                let t = fs.transform.clone();
                let dt_inv = d.inverse().transpose();
                let scale = 1.0 / det.abs();
                let transform: ScalarFn = Arc::new(move |w: Point| scale * t(dt_inv.mul_vec(w)));
                let dt = d.transpose();
                let image = Rect::hull_of(&r.corners().map(|c| dt.mul_vec(c)));
                Some(FourierSide {
                    transform,
                    domain: FourierDomain::Rect(image),
                })
            }
            FourierDomain::Disk { .. } => None,
        });
        Ok(TestFunction {
            name,
            value,
            hessian,
            fourier,
            effective_support,
            analytic_norms: None,
        })
    }
}

fn check_positive(what: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "{what} must be positive and finite, got {v}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_hessian(f: &TestFunction, p: Point, h: f64) -> Hessian {
        let v = |x: f64, y: f64| f.value([x, y]);
        let (x, y) = (p[0], p[1]);
        Hessian {
            dxx: (v(x + h, y) - 2.0 * v(x, y) + v(x - h, y)) / (h * h),
            dxy: (v(x + h, y + h) - v(x + h, y - h) - v(x - h, y + h) + v(x - h, y - h))
                / (4.0 * h * h),
            dyy: (v(x, y + h) - 2.0 * v(x, y) + v(x, y - h)) / (h * h),
        }
    }

    fn assert_hessian_matches_fd(f: &TestFunction, points: &[Point]) {
        let hess = f.require_hessian().unwrap();
        for &p in points {
            let exact = hess(p);
            let approx = fd_hessian(f, p, 1e-4);
            for (e, a, tag) in [
                (exact.dxx, approx.dxx, "dxx"),
                (exact.dxy, approx.dxy, "dxy"),
                (exact.dyy, approx.dyy, "dyy"),
            ] {
                let scale = e.abs().max(1.0);
                assert!(
                    (e - a).abs() / scale < 1e-5,
                    "{} {tag} at {p:?}: exact {e}, fd {a}",
                    f.name()
                );
            }
        }
    }

    const SAMPLE_POINTS: [Point; 5] = [
        [0.0, 0.0],
        [0.31, -0.77],
        [1.1, 0.4],
        [-0.6, -1.3],
        [2.0, 1.5],
    ];

    #[test]
    fn gaussian_hessian_matches_finite_differences() {
        assert_hessian_matches_fd(&TestFunction::gaussian(1.0).unwrap(), &SAMPLE_POINTS);
        assert_hessian_matches_fd(&TestFunction::gaussian(0.5).unwrap(), &SAMPLE_POINTS);
    }

    #[test]
    fn anisotropic_hessian_matches_finite_differences() {
        let f = TestFunction::anisotropic_gaussian(0.8, 1.7).unwrap();
        assert_hessian_matches_fd(&f, &SAMPLE_POINTS);
    }

    #[test]
    fn sinusoid_hessian_matches_finite_differences() {
        let f = TestFunction::windowed_sinusoid(3.0, 2.0, 2.0).unwrap();
        assert_hessian_matches_fd(&f, &SAMPLE_POINTS);
    }

    #[test]
    fn gaussian_support_bounds_value() {
        let f = TestFunction::gaussian(0.7).unwrap();
        let s = f.require_support().unwrap();
        // Just outside the rectangle the value must be below 1e-14.
        for p in [
            [s.x1 + 1e-9, 0.0],
            [0.0, s.y1 + 1e-9],
            [s.x0 - 1e-9, 0.3],
        ] {
            assert!(f.value(p) < 1e-14, "{p:?} -> {}", f.value(p));
        }
        // Registry Gaussians are far above that inside.
        assert!(f.value([0.0, 0.0]) == 1.0);
    }

    #[test]
    fn disk_has_no_spatial_side_but_full_fourier_side() {
        let f = TestFunction::fourier_disk(1.0, 1.0).unwrap();
        assert!(f.require_hessian().is_err());
        assert!(f.require_support().is_err());
        let fs = f.require_fourier().unwrap();
        assert!(matches!(fs.domain, FourierDomain::Disk { radius } if radius == 1.0));
        assert_eq!((fs.transform)([0.3, 0.4]), 1.0);
        assert_eq!((fs.transform)([0.8, 0.7]), 0.0);
        // Spatial value at the origin: c R^2 / (4 pi).
        let expect = 1.0 / (4.0 * std::f64::consts::PI);
        assert!((f.value([0.0, 0.0]) - expect).abs() < 1e-12);
    }

    #[test]
    fn sinusoid_transform_matches_quadrature_at_spot_frequencies() {
        let f = TestFunction::windowed_sinusoid(2.0, 1.0, 1.5).unwrap();
        let fs = f.require_fourier().unwrap();
        let support = f.require_support().unwrap();
        for w in [[1.8, 0.9], [0.0, 1.0], [2.5, -1.2]] {
            // fhat(w) = int f(x) cos(w . x) dx (imaginary part vanishes).
            let got = crate::quad::tensor_rect(
                &|x: f64, y: f64| f.value([x, y]) * (w[0] * x + w[1] * y).cos(),
                support,
                24,
                12,
            );
            let expect = (fs.transform)(w);
            assert!(
                (got - expect).abs() < 1e-9 * expect.abs().max(1.0),
                "w = {w:?}: quadrature {got}, closed form {expect}"
            );
        }
    }

    #[test]
    fn affine_has_zero_hessian_and_zero_norms() {
        let f = TestFunction::affine(1.0, 2.0, -3.0, 4.0).unwrap();
        assert_eq!(f.value([0.5, 0.25]), 1.0 + 1.0 - 0.75);
        let h = f.require_hessian().unwrap()([3.0, -1.0]);
        assert_eq!((h.dxx, h.dxy, h.dyy), (0.0, 0.0, 0.0));
        let n = f.analytic_norms().unwrap();
        assert_eq!(n.laplacian_l2, 0.0);
        assert_eq!(n.hessian_frob_l2, 0.0);
    }

    #[test]
    fn compose_linear_transforms_values_and_hessian() {
        let f = TestFunction::anisotropic_gaussian(1.0, 0.5).unwrap();
        let d = Mat2::new(0.8, 0.3, -0.2, 1.1);
        let g = f.compose_linear(d).unwrap();
        for &p in &SAMPLE_POINTS {
            assert_eq!(g.value(p), f.value(d.mul_vec(p)));
        }
        assert_hessian_matches_fd(&g, &SAMPLE_POINTS);
        // Support must cover the preimage of the original support.
        let gs = g.require_support().unwrap();
        let fs = f.require_support().unwrap();
        let d_inv = d.inverse();
        for c in fs.corners() {
            assert!(gs.contains(d_inv.mul_vec(c)));
        }
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(TestFunction::gaussian(0.0).is_err());
        assert!(TestFunction::gaussian(-1.0).is_err());
        assert!(TestFunction::fourier_disk(1.0, 0.0).is_err());
        assert!(TestFunction::windowed_sinusoid(1.0, 1.0, f64::NAN).is_err());
        assert!(TestFunction::affine(0.0, 0.0, 0.0, -2.0).is_err());
    }
}
