//! Finite-difference drivers and small numeric utilities shared by the
//! geometry and oracle paths.

use crate::multilinear::AlternatingForm;
use nalgebra::DMatrix;

/// Values that support the linear combinations finite differencing needs.
pub trait LinearData: Clone {
    fn scaled(&self, s: f64) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scaled(-1.0))
    }
}

impl LinearData for f64 {
    fn scaled(&self, s: f64) -> Self {
        self * s
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
}

impl<T: LinearData> LinearData for Vec<T> {
    fn scaled(&self, s: f64) -> Self {
        self.iter().map(|x| x.scaled(s)).collect()
    }
    fn plus(&self, other: &Self) -> Self {
        self.iter().zip(other).map(|(a, b)| a.plus(b)).collect()
    }
}

impl LinearData for DMatrix<f64> {
    fn scaled(&self, s: f64) -> Self {
        self * s
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
}

impl LinearData for AlternatingForm {
    fn scaled(&self, s: f64) -> Self {
        self.scale(s)
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
}

/// Step sizes and extrapolation policy for the finite-difference stencils.
///
/// `h1` drives first derivatives of smooth closed-form data; `h2` drives
/// anything that ends up differentiating the metric twice. One Richardson
/// level turns the second-order central stencil into fourth order.
#[derive(Clone, Copy, Debug)]
pub struct FdScheme {
    pub h1: f64,
    pub h2: f64,
    pub richardson: bool,
}

impl FdScheme {
    pub fn for_scale(scale: f64) -> Self {
        FdScheme {
            h1: 1e-3 * scale,
            h2: 1e-2 * scale,
            richardson: true,
        }
    }

    /// Low-order variant used by the independent oracle routes.
    pub fn oracle(scale: f64) -> Self {
        FdScheme {
            h1: 5e-4 * scale,
            h2: 5e-3 * scale,
            richardson: false,
        }
    }
}

/// Central difference of `f` at 0 with one optional Richardson level.
pub fn central_diff<T: LinearData>(f: impl Fn(f64) -> T, h: f64, richardson: bool) -> T {
    let d = |step: f64| f(step).minus(&f(-step)).scaled(0.5 / step);
    let coarse = d(h);
    if !richardson {
        return coarse;
    }
    let fine = d(h / 2.0);
    fine.scaled(4.0 / 3.0).minus(&coarse.scaled(1.0 / 3.0))
}

/// Partial derivative of a field along coordinate `dir` at `u`.
pub fn partial<T: LinearData>(
    field: impl Fn(&[f64]) -> T,
    u: &[f64],
    dir: usize,
    h: f64,
    richardson: bool,
) -> T {
    central_diff(
        |t| {
            let mut v = u.to_vec();
            v[dir] += t;
            field(&v)
        },
        h,
        richardson,
    )
}

/// Pairwise (tree) summation; associativity-safe regardless of chunking.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
        }
    }
}

/// Ordinary least squares for a single scalar coefficient: minimizes
/// `sum (y_i - c x_i)^2`, returning `(c, relative_residual)`.
pub fn fit_scalar(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let xx = pairwise_sum(&xs.iter().map(|x| x * x).collect::<Vec<_>>());
    let xy = pairwise_sum(&xs.iter().zip(ys).map(|(x, y)| x * y).collect::<Vec<_>>());
    if xx == 0.0 {
        return (0.0, 0.0);
    }
    let c = xy / xx;
    let res2 = pairwise_sum(
        &xs.iter()
            .zip(ys)
            .map(|(x, y)| (y - c * x) * (y - c * x))
            .collect::<Vec<_>>(),
    );
    let yy = pairwise_sum(&ys.iter().map(|y| y * y).collect::<Vec<_>>());
    let rel = if yy > 0.0 { (res2 / yy).sqrt() } else { 0.0 };
    (c, rel)
}
