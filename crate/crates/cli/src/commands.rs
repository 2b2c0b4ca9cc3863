//! Subcommand computations. Everything here takes plain values and returns
//! strings or tables; argument resolution and file placement stay in main.

use std::fmt::Write as _;
use std::path::Path;

use lattice_cpwl::asymptotics::{self, SweepConfig, SweepTable};
use lattice_cpwl::projection::{rate_study, CoefficientGrid, ProjectSettings};
use lattice_cpwl::quad::AdaptiveSettings;
use lattice_cpwl::relunet;
use lattice_cpwl::testfn::TestFunction;
use lattice_cpwl::{Error, IndexBox, LatticeKind, LatticeSpec, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{FunctionId, RateArgs};

/// Plot mode blanks landscape values at or above this, matching the clipped
/// color scale used for the figure; the raw CSV is never clipped.
pub const PLOT_CLIP: f64 = 10.0;

/// Sample count for the network-vs-spline agreement check.
pub const RELU_CHECK_POINTS: usize = 100_000;

/// Largest |network - spline| tolerated over the check points.
pub const RELU_TOLERANCE: f64 = 1e-10;

/// One line per constant; `{}` prints the shortest digits that round-trip.
pub fn constants_report(theta1: f64, theta2: f64) -> Result<String> {
    let k = asymptotics::asym_constants(theta1, theta2)?;
    Ok(format!(
        "alpha = {}\nbeta = {}\ngamma = {}\nC = {}\n",
        k.alpha,
        k.beta,
        k.gamma,
        k.c()
    ))
}

pub fn sweep_csv(resolution: usize, clip: Option<f64>) -> Result<(String, SweepTable)> {
    let table = asymptotics::sweep_landscape(&SweepConfig::with_resolution(resolution))?;
    let mut bytes = Vec::new();
    table
        .write_csv(&mut bytes, clip)
        .expect("writing to a Vec cannot fail");
    let csv = String::from_utf8(bytes).expect("the CSV is plain ASCII");
    Ok((csv, table))
}

pub fn sweep_plot_script(csv: &Path) -> String {
    format!(
        "# gnuplot: heat map of the asymptotic constant over the angle plane\n\
         set datafile separator ','\n\
         set datafile missing ''\n\
         set xlabel 'theta1'\n\
         set ylabel 'delta'\n\
         set cblabel 'M'\n\
         set view map\n\
         splot '{}' using 1:2:3 skip 1 with points pointtype 5 pointsize 0.3 palette notitle\n",
        csv.display()
    )
}

pub fn build_function(args: &RateArgs) -> Result<TestFunction> {
    match args.function {
        FunctionId::Gaussian => TestFunction::gaussian(args.sigma),
        FunctionId::AnisotropicGaussian => {
            TestFunction::anisotropic_gaussian(args.sigma, args.sigma2)
        }
        FunctionId::Sinusoid => {
            TestFunction::windowed_sinusoid(args.freq1, args.freq2, args.window_sigma)
        }
        FunctionId::Affine => TestFunction::affine(args.c0, args.cx, args.cy, args.half_width),
    }
}

pub fn rate_csv(
    f: &TestFunction,
    theta1: f64,
    theta2: f64,
    stepsizes: &[f64],
    dilation: usize,
) -> Result<String> {
    let settings = ProjectSettings {
        dilation_cells: dilation as i64,
        ..ProjectSettings::default()
    };
    let report = rate_study(
        f,
        theta1,
        theta2,
        stepsizes,
        &settings,
        AdaptiveSettings::default(),
    )?;
    let mut bytes = Vec::new();
    report
        .write_csv(&mut bytes)
        .expect("writing to a Vec cannot fail");
    Ok(String::from_utf8(bytes).expect("the CSV is plain ASCII"))
}

pub fn rate_plot_script(csv: &Path) -> String {
    format!(
        "# gnuplot: measured L2 error and its predicted leading term\n\
         set datafile separator ','\n\
         set logscale xy\n\
         set xlabel 'stepsize T'\n\
         set ylabel 'L2 error'\n\
         set key left top\n\
         plot '{0}' using 1:2 skip 1 with linespoints title 'measured', \\\n\
         \x20    '{0}' using 1:3 skip 1 with linespoints title 'predicted'\n",
        csv.display()
    )
}

/// Closed-form disk-spectrum errors on both preset grids, their ratio, and
/// the worst relative disagreement against the Fourier-side quadrature.
pub fn disk_csv(amplitude: f64, omega_max: f64, stepsize: f64) -> Result<String> {
    let f = TestFunction::fourier_disk(amplitude, omega_max)?;
    let settings = AdaptiveSettings::default();
    let closed = |kind| asymptotics::disk_asym_closed_form(kind, amplitude, omega_max, stepsize);
    let cart = closed(LatticeKind::Cartesian);
    let hex = closed(LatticeKind::Hexagonal);
    let quad_cart = asymptotics::asym_error_fourier(&f, &LatticeSpec::cartesian(stepsize)?, settings)?;
    let quad_hex = asymptotics::asym_error_fourier(&f, &LatticeSpec::hexagonal(stepsize)?, settings)?;
    let crosscheck = ((quad_cart - cart) / cart)
        .abs()
        .max(((quad_hex - hex) / hex).abs());
    let mut csv = String::from("quantity,cartesian,hexagonal,ratio,crosscheck_rel_err\n");
    writeln!(
        csv,
        "eps_asym,{cart:.16e},{hex:.16e},{:.16e},{crosscheck:.16e}",
        hex / cart
    )
    .expect("writing to a String cannot fail");
    Ok(csv)
}

pub struct ReluOutcome {
    pub neurons: usize,
    pub max_deviation: f64,
    pub export: String,
}

/// Draws a random coefficient grid on the interior of the unit square,
/// builds the equivalent two-hidden-layer network, and measures the worst
/// disagreement over random points. The stepsize must be 1/n with n >= 2 so
/// the interior index box is nonempty.
pub fn relu_build_and_check(stepsize: f64, seed: u64) -> Result<ReluOutcome> {
    let n_f = 1.0 / stepsize;
    let n = n_f.round();
    if !((n_f - n).abs() <= 1e-9 && n >= 2.0) {
        return Err(Error::InvalidStepsize(stepsize));
    }
    let n = n as i64;
    let spec = LatticeSpec::cartesian(stepsize)?;
    let interior = IndexBox::new([1, 1], [n - 1, n - 1]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<f64> = (0..interior.len())
        .map(|_| rng.gen_range(-1.0..1.0))
        .collect();
    let cg = CoefficientGrid::new(spec, interior, coeffs)?;
    let net = relunet::build_network(&cg)?;
    let points: Vec<[f64; 2]> = (0..RELU_CHECK_POINTS)
        .map(|_| [rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)])
        .collect();
    let max_deviation = relunet::max_deviation(&net, &cg, &points);
    let mut bytes = Vec::new();
    net.write_export(&mut bytes)
        .expect("writing to a Vec cannot fail");
    Ok(ReluOutcome {
        neurons: net.neuron_count(),
        max_deviation,
        export: String::from_utf8(bytes).expect("the export is plain ASCII"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_report_prints_reference_digits() {
        // At the double nearest pi/2 the true gamma is 1 + 1.2e-16, so C
        // sits one ulp above sqrt(3.0); compare by value, not by string.
        let cart = constants_report(0.0, std::f64::consts::FRAC_PI_2).unwrap();
        let c_line = cart.lines().find(|l| l.starts_with("C = ")).unwrap();
        let c: f64 = c_line[4..].parse().unwrap();
        assert!((c - 3f64.sqrt()).abs() < 1e-15, "{c_line}");
        let hex = constants_report(0.0, 2.0 * std::f64::consts::FRAC_PI_3).unwrap();
        assert!(hex.contains("C = 1.224744871391589\n"), "{hex}");
    }

    #[test]
    fn tiny_sweep_has_one_row_per_grid_cell() {
        let (csv, table) = sweep_csv(2, None).unwrap();
        assert_eq!(csv.lines().count(), 5);
        assert_eq!(csv.lines().next(), Some("theta1,delta,M"));
        assert_eq!(table.theta1.len(), 2);
        assert_eq!(table.delta.len(), 2);
    }

    #[test]
    fn plot_mode_blanks_large_values() {
        // Resolution 50 reaches delta ~ 0.13 where alpha + beta ~ 24.
        let (csv, _) = sweep_csv(50, Some(PLOT_CLIP)).unwrap();
        assert!(csv.lines().skip(1).any(|line| line.ends_with(',')));
        assert!(csv.lines().skip(1).any(|line| !line.ends_with(',')));
    }

    #[test]
    fn disk_row_matches_the_closed_form_ratio() {
        let csv = disk_csv(1.0, 1.0, 1.0).unwrap();
        let row = csv.lines().nth(1).unwrap();
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields[0], "eps_asym");
        let ratio: f64 = fields[3].parse().unwrap();
        assert!((ratio - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        let crosscheck: f64 = fields[4].parse().unwrap();
        assert!(crosscheck < 1e-6, "crosscheck {crosscheck}");
    }

    #[test]
    fn relu_check_passes_and_counts_neurons() {
        let outcome = relu_build_and_check(0.25, 7).unwrap();
        assert_eq!(outcome.neurons, 36);
        assert!(outcome.max_deviation <= RELU_TOLERANCE);
        assert!(outcome.export.contains("stepsize 2.5000000000000000e-1"));
    }

    #[test]
    fn relu_rejects_stepsizes_off_the_grid() {
        assert!(matches!(
            relu_build_and_check(0.3, 7),
            Err(Error::InvalidStepsize(_))
        ));
        assert!(matches!(
            relu_build_and_check(0.7, 7),
            Err(Error::InvalidStepsize(_))
        ));
    }
}
