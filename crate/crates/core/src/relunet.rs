//! Two-hidden-layer ReLU networks that evaluate axis-grid splines exactly.
//!
//! The hat spline admits the closed composition
//!
//! ```text
//! phi(x) = relu(1 - relu(x1 - x2) - relu(x2) - relu(-x1))
//! ```
//!
//! so a spline s = sum c[k] phi(x/T - k) on the unit square becomes a
//! network with three first-layer units and one second-layer unit per basis
//! translate: 4 N neurons for the N = (1/T - 1)^2 interior translates.

use std::io::Write;

use crate::error::{Error, Result};
use crate::exec;
use crate::geom::Point;
use crate::lattice::IndexBox;
use crate::projection::CoefficientGrid;

fn relu(t: f64) -> f64 {
    t.max(0.0)
}

/// The hat spline through its ReLU composition; equal to
/// [`crate::boxspline::eval_cartesian`] everywhere.
pub fn relu_eval_cartesian(x: Point) -> f64 {
    relu(1.0 - relu(x[0] - x[1]) - relu(x[1]) - relu(-x[0]))
}

/// First-layer unit: relu(weight . x + bias).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Layer1Unit {
    pub weight: [f64; 2],
    pub bias: f64,
}

/// Second-layer unit: relu(bias - h[i0] - h[i1] - h[i2]), i.e. weight -1 on
/// each of its three first-layer inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Layer2Unit {
    pub inputs: [usize; 3],
    pub bias: f64,
}

/// A two-hidden-layer ReLU network evaluating an axis-grid spline on the
/// unit square.
#[derive(Debug, Clone)]
pub struct ReluNetwork {
    stepsize: f64,
    layer1: Vec<Layer1Unit>,
    layer2: Vec<Layer2Unit>,
    /// Output weight per second-layer unit; the output has no bias.
    output: Vec<f64>,
}

impl ReluNetwork {
    pub fn stepsize(&self) -> f64 {
        self.stepsize
    }

    pub fn layer1(&self) -> &[Layer1Unit] {
        &self.layer1
    }

    pub fn layer2(&self) -> &[Layer2Unit] {
        &self.layer2
    }

    pub fn output_weights(&self) -> &[f64] {
        &self.output
    }

    pub fn neuron_count(&self) -> usize {
        self.layer1.len() + self.layer2.len()
    }

    /// Forward pass. Second-layer units subtract their inputs in listed
    /// order; the output accumulates unit contributions in ascending index
    /// order, so results are bit-stable.
    pub fn forward(&self, x: Point) -> f64 {
        let mut out = 0.0;
        for (unit, &w) in self.layer2.iter().zip(&self.output) {
            let mut pre = unit.bias;
            for &i in &unit.inputs {
                let u = &self.layer1[i];
                pre -= relu(u.weight[0] * x[0] + u.weight[1] * x[1] + u.bias);
            }
            out += w * relu(pre);
        }
        out
    }

    /// Forward pass over many points, parallel when enabled.
    pub fn forward_batch(&self, xs: &[Point]) -> Vec<f64> {
        exec::map_range(xs.len(), |i| self.forward(xs[i]))
    }

    /// Flat text export, one line per unit, 17 significant digits.
    pub fn write_export<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "# two-hidden-layer relu network for a unit-square spline")?;
        writeln!(w, "# 1 <i> <w1> <w2> <bias>   first layer: relu(w1 x1 + w2 x2 + bias)")?;
        writeln!(
            w,
            "# 2 <i> <a> <b> <c> <bias>  second layer: relu(bias - h[a] - h[b] - h[c])"
        )?;
        writeln!(w, "# 3 <i> <w>                output term: w * g[i], summed over ascending i")?;
        writeln!(w, "stepsize {:.16e}", self.stepsize)?;
        writeln!(w, "layer1 {}", self.layer1.len())?;
        for (i, u) in self.layer1.iter().enumerate() {
            writeln!(
                w,
                "1 {i} {:.16e} {:.16e} {:.16e}",
                u.weight[0], u.weight[1], u.bias
            )?;
        }
        writeln!(w, "layer2 {}", self.layer2.len())?;
        for (i, u) in self.layer2.iter().enumerate() {
            writeln!(
                w,
                "2 {i} {} {} {} {:.16e}",
                u.inputs[0], u.inputs[1], u.inputs[2], u.bias
            )?;
        }
        writeln!(w, "output {}", self.output.len())?;
        for (i, c) in self.output.iter().enumerate() {
            writeln!(w, "3 {i} {c:.16e}")?;
        }
        Ok(())
    }
}

/// Builds the network for a coefficient grid on the axis-aligned lattice
/// with stepsize T = 1/n, indexed by the (n - 1)^2 interior points of the
/// unit square. Unit layout is row-major in k, matching the grid's flat
/// order.
pub fn build_network(cg: &CoefficientGrid) -> Result<ReluNetwork> {
    let spec = cg.spec();
    let t = spec.stepsize();
    let n_f = 1.0 / t;
    let n = n_f.round();
    if !(n_f - n).abs().le(&1e-9) || n < 2.0 {
        return Err(Error::InvalidStepsize(t));
    }
    let n = n as i64;
    let quarter_turn = std::f64::consts::FRAC_PI_2;
    if spec.theta1().abs() > 1e-12 || (spec.theta2() - quarter_turn).abs() > 1e-12 {
        return Err(Error::InvalidInput(
            "network construction requires the axis-aligned grid".to_string(),
        ));
    }
    let interior = IndexBox::new([1, 1], [n - 1, n - 1]);
    if cg.index_box() != interior {
        return Err(Error::InvalidInput(format!(
            "coefficients must cover exactly the interior index box {:?}, got {:?}",
            interior,
            cg.index_box()
        )));
    }

    let inv_t = n as f64;
    let count = interior.len();
    let mut layer1 = Vec::with_capacity(3 * count);
    let mut layer2 = Vec::with_capacity(count);
    let mut output = Vec::with_capacity(count);
    for flat in 0..count {
        let k = interior.index_at(flat);
        let (k1, k2) = (k[0] as f64, k[1] as f64);
        // (x - T k)/T = x/T - k componentwise.
        layer1.push(Layer1Unit {
            weight: [inv_t, -inv_t],
            bias: k2 - k1,
        });
        layer1.push(Layer1Unit {
            weight: [0.0, inv_t],
            bias: -k2,
        });
        layer1.push(Layer1Unit {
            weight: [-inv_t, 0.0],
            bias: k1,
        });
        layer2.push(Layer2Unit {
            inputs: [3 * flat, 3 * flat + 1, 3 * flat + 2],
            bias: 1.0,
        });
        output.push(cg.coeffs()[flat]);
    }
    Ok(ReluNetwork {
        stepsize: t,
        layer1,
        layer2,
        output,
    })
}

/// Largest |network - spline| over the given points.
pub fn max_deviation(net: &ReluNetwork, cg: &CoefficientGrid, points: &[Point]) -> f64 {
    let devs = exec::map_range(points.len(), |i| {
        (net.forward(points[i]) - cg.eval(points[i])).abs()
    });
    devs.into_iter().fold(0.0, f64::max)
}
