//! Chart-based model Riemannian manifolds with numerically differentiated
//! geometry: pullback metrics, Christoffel symbols, Riemann curvature, and
//! covariant calculus on differential-form fields.
//!
//! Everything is pointwise. A model is either embedded (an analytic
//! parametrization into Euclidean space; the metric is the first fundamental
//! form computed from a finite-difference Jacobian) or direct (a closed-form
//! metric in the chart). All derivatives are central differences with one
//! Richardson extrapolation level.

use std::sync::Arc;

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::multilinear::{
    contract, endo_derivation_on_form, form_inner, wedge, AlternatingForm, MultiIndex, PointMetric,
};
use crate::numerics::{partial, FdScheme, LinearData};

#[derive(Debug, Error)]
pub enum ManifoldError {
    #[error("point lies outside the chart domain")]
    OutsideDomain,
    #[error("chart index {0} out of range")]
    BadChart(usize),
    #[error("parametrization is rank-deficient at the sample point")]
    RankDeficient,
    #[error("cannot take the exterior derivative of a top-degree form")]
    TopDegree,
    #[error("cannot take the coderivative of a scalar field")]
    ZeroDegree,
    #[error(transparent)]
    Algebra(#[from] crate::multilinear::AlgebraError),
}

/// A point in a specific chart of a model manifold.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartPoint {
    pub chart: usize,
    pub u: Vec<f64>,
}

impl ChartPoint {
    pub fn new(chart: usize, u: Vec<f64>) -> Self {
        ChartPoint { chart, u }
    }
}

/// Axis-aligned sampling box for one chart; sampling respects a 10% margin.
#[derive(Clone, Debug)]
pub struct ChartBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl ChartBox {
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Self {
        ChartBox {
            lo: vec![lo; dim],
            hi: vec![hi; dim],
        }
    }
}

type ParamFn = dyn Fn(usize, &[f64]) -> Vec<f64> + Send + Sync;
type MetricFn = dyn Fn(usize, &[f64]) -> DMatrix<f64> + Send + Sync;
type NormalFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;

/// How the geometry of the model is specified.
pub enum Flavor {
    /// Analytic parametrization `f : U -> R^N`; the metric is the pullback
    /// of the ambient inner product. `normal` gives the outward unit normal
    /// at an ambient point (the models here are hypersurfaces) and fixes the
    /// chart orientation through `det[J | normal]`.
    Embedded {
        ambient_dim: usize,
        param: Arc<ParamFn>,
        normal: Arc<NormalFn>,
    },
    /// Closed-form metric in the chart; orientation is the chart order.
    Direct { metric: Arc<MetricFn> },
}

/// A chart-described Riemannian manifold.
pub struct ModelManifold {
    pub name: String,
    pub dim: usize,
    pub flavor: Flavor,
    pub charts: Vec<ChartBox>,
    /// Characteristic length driving finite-difference steps.
    pub scale: f64,
}

impl ModelManifold {
    pub fn is_embedded(&self) -> bool {
        matches!(self.flavor, Flavor::Embedded { .. })
    }

    /// Ambient image of a chart point (embedded flavor only).
    pub fn embed(&self, p: &ChartPoint) -> Option<Vec<f64>> {
        match &self.flavor {
            Flavor::Embedded { param, .. } => Some(param(p.chart, &p.u)),
            Flavor::Direct { .. } => None,
        }
    }

    /// Finite-difference Jacobian of the parametrization, one Richardson level.
    pub fn jacobian(&self, p: &ChartPoint, fd: &FdScheme) -> Option<DMatrix<f64>> {
        match &self.flavor {
            Flavor::Embedded {
                ambient_dim, param, ..
            } => {
                let mut jac = DMatrix::<f64>::zeros(*ambient_dim, self.dim);
                for a in 0..self.dim {
                    let col = partial(|u: &[f64]| param(p.chart, u), &p.u, a, fd.h1, fd.richardson);
                    for (r, v) in col.iter().enumerate() {
                        jac[(r, a)] = *v;
                    }
                }
                Some(jac)
            }
            Flavor::Direct { .. } => None,
        }
    }

    /// Raw metric matrix at a point (no positivity checks, for stencil use).
    pub fn metric_matrix(&self, p: &ChartPoint, fd: &FdScheme) -> DMatrix<f64> {
        match &self.flavor {
            Flavor::Embedded { .. } => {
                let jac = self.jacobian(p, fd).expect("embedded");
                jac.transpose() * jac
            }
            Flavor::Direct { metric } => metric(p.chart, &p.u),
        }
    }

    /// Chart orientation relative to the ambient orientation (embedded) or
    /// the coordinate order (direct).
    pub fn orientation(&self, p: &ChartPoint, fd: &FdScheme) -> i8 {
        match &self.flavor {
            Flavor::Embedded {
                ambient_dim,
                param,
                normal,
            } => {
                let jac = self.jacobian(p, fd).expect("embedded");
                let nu = normal(&param(p.chart, &p.u));
                let mut full = DMatrix::<f64>::zeros(*ambient_dim, *ambient_dim);
                full.view_mut((0, 0), (*ambient_dim, self.dim))
                    .copy_from(&jac);
                for (r, v) in nu.iter().enumerate() {
                    full[(r, self.dim)] = *v;
                }
                if full.determinant() >= 0.0 {
                    1
                } else {
                    -1
                }
            }
            Flavor::Direct { .. } => 1,
        }
    }

    /// Metric with cached inverse and orientation, validated SPD.
    pub fn metric_at(&self, p: &ChartPoint, fd: &FdScheme) -> Result<PointMetric, ManifoldError> {
        let g = self.metric_matrix(p, fd);
        let or = self.orientation(p, fd);
        PointMetric::new(g, or).map_err(|_| ManifoldError::RankDeficient)
    }

    /// Christoffel symbols of the Levi-Civita connection from metric first
    /// derivatives, fourth-order stencils.
    pub fn christoffel_at(&self, p: &ChartPoint, fd: &FdScheme) -> ConnectionData {
        let n = self.dim;
        let g = self.metric_matrix(p, fd);
        let g_inv = g
            .clone()
            .try_inverse()
            .expect("metric invertible inside the chart");
        let mut dg = vec![0.0; n * n * n]; // dg[k][i][j] = d_k g_ij
        for k in 0..n {
            let dm = partial(
                |u: &[f64]| self.metric_matrix(&ChartPoint::new(p.chart, u.to_vec()), fd),
                &p.u,
                k,
                fd.h2,
                fd.richardson,
            );
            for i in 0..n {
                for j in 0..n {
                    dg[(k * n + i) * n + j] = dm[(i, j)];
                }
            }
        }
        let dgf = |k: usize, i: usize, j: usize| dg[(k * n + i) * n + j];
        let mut gamma = vec![0.0; n * n * n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let mut s = 0.0;
                    for m in 0..n {
                        s += 0.5 * g_inv[(c, m)] * (dgf(a, m, b) + dgf(b, m, a) - dgf(m, a, b));
                    }
                    gamma[(a * n + b) * n + c] = s;
                }
            }
        }
        ConnectionData { n, gamma }
    }

    /// Riemann curvature from finite differences of the Christoffel symbols.
    pub fn curvature_at(&self, p: &ChartPoint, fd: &FdScheme) -> CurvatureData {
        let n = self.dim;
        let conn = self.christoffel_at(p, fd);
        let mut dgamma = vec![0.0; n * n * n * n]; // dгamma[i][a][b][c] = d_i Gamma^c_ab
        for i in 0..n {
            let dc = partial(
                |u: &[f64]| {
                    self.christoffel_at(&ChartPoint::new(p.chart, u.to_vec()), fd)
                        .gamma
                },
                &p.u,
                i,
                fd.h2,
                fd.richardson,
            );
            dgamma[i * n * n * n..(i + 1) * n * n * n].copy_from_slice(&dc);
        }
        let dgf = |i: usize, a: usize, b: usize, c: usize| dgamma[((i * n + a) * n + b) * n + c];
        // R(d_i, d_j) d_k = mixed[i][j][k][l] d_l for the commutator convention
        // [nabla_i, nabla_j] d_k on coordinate fields.
        let mut mixed = vec![0.0; n * n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut s = dgf(i, j, k, l) - dgf(j, i, k, l);
                        for m in 0..n {
                            s += conn.get(i, m, l) * conn.get(j, k, m)
                                - conn.get(j, m, l) * conn.get(i, k, m);
                        }
                        mixed[((i * n + j) * n + k) * n + l] = s;
                    }
                }
            }
        }
        let g = self.metric_matrix(p, fd);
        // lowered[i][j][k][l] = <R(d_i, d_j) d_l, d_k>; constant-curvature
        // models then satisfy lowered = kappa (g_ik g_jl - g_il g_jk).
        let mut lowered = vec![0.0; n * n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut s = 0.0;
                        for m in 0..n {
                            s += g[(k, m)] * mixed[((i * n + j) * n + l) * n + m];
                        }
                        lowered[((i * n + j) * n + k) * n + l] = s;
                    }
                }
            }
        }
        CurvatureData {
            n,
            mixed,
            lowered,
            g,
        }
    }

    /// Covariant derivative of a form field: one form per coordinate
    /// direction, `(nabla_a sigma) = d_a sigma + Gamma_a . sigma`.
    pub fn covariant_derivative(
        &self,
        sigma: &FormField,
        p: &ChartPoint,
        fd: &FdScheme,
        step: f64,
    ) -> Vec<AlternatingForm> {
        let conn = self.christoffel_at(p, fd);
        self.covariant_derivative_with(sigma, p, fd, step, &conn)
    }

    /// Same as `covariant_derivative` with the connection supplied.
    pub fn covariant_derivative_with(
        &self,
        sigma: &FormField,
        p: &ChartPoint,
        fd: &FdScheme,
        step: f64,
        conn: &ConnectionData,
    ) -> Vec<AlternatingForm> {
        let n = self.dim;
        let mut out = Vec::with_capacity(n);
        for a in 0..n {
            let da = partial(
                |u: &[f64]| sigma.eval(&ChartPoint::new(p.chart, u.to_vec())),
                &p.u,
                a,
                step,
                fd.richardson,
            );
            let correction = endo_derivation_on_form(&sigma.eval(p), &conn.endo(a));
            out.push(da.plus(&correction));
        }
        out
    }

    /// Tensorial second covariant derivative,
    /// `(nabla^2 sigma)_{a,b} = nabla_a (nabla_b sigma) - Gamma^c_ab nabla_c sigma`,
    /// indexed `[a][b]`.
    pub fn second_covariant_derivative(
        &self,
        sigma: &FormField,
        p: &ChartPoint,
        fd: &FdScheme,
    ) -> Vec<Vec<AlternatingForm>> {
        let n = self.dim;
        let conn = self.christoffel_at(p, fd);
        let nabla_at = |u: &[f64]| -> Vec<AlternatingForm> {
            let q = ChartPoint::new(p.chart, u.to_vec());
            let c = self.christoffel_at(&q, fd);
            self.covariant_derivative_with(sigma, &q, fd, fd.h2, &c)
        };
        let nabla_center = nabla_at(&p.u);
        let mut out = Vec::with_capacity(n);
        for a in 0..n {
            // d_a of each component form, then the usual corrections.
            let d_nabla = partial(&nabla_at, &p.u, a, fd.h2, fd.richardson);
            let endo_a = conn.endo(a);
            let mut row = Vec::with_capacity(n);
            for b in 0..n {
                let mut val = d_nabla[b].plus(&endo_derivation_on_form(&nabla_center[b], &endo_a));
                for c in 0..n {
                    let gamma = conn.get(a, b, c);
                    if gamma != 0.0 {
                        val = val.plus(&nabla_center[c].scaled(-gamma));
                    }
                }
                row.push(val);
            }
            out.push(row);
        }
        out
    }

    /// Exterior derivative via antisymmetrization of the covariant derivative.
    pub fn exterior_derivative(
        &self,
        sigma: &FormField,
        p: &ChartPoint,
        fd: &FdScheme,
    ) -> Result<AlternatingForm, ManifoldError> {
        if sigma.degree == self.dim {
            return Err(ManifoldError::TopDegree);
        }
        let nabla = self.covariant_derivative(sigma, p, fd, fd.h1);
        let mut out = AlternatingForm::zero(self.dim, sigma.degree + 1);
        for (a, na) in nabla.iter().enumerate() {
            let ea = AlternatingForm::basis(self.dim, &[a]);
            out = out.add(&wedge(&ea, na)?);
        }
        Ok(out)
    }

    /// Coderivative `d* sigma = -sum_i e_i . nabla_{e_i} sigma` over an
    /// orthonormal frame, computed frame-free through the inverse metric.
    pub fn coderivative(
        &self,
        sigma: &FormField,
        p: &ChartPoint,
        fd: &FdScheme,
    ) -> Result<AlternatingForm, ManifoldError> {
        if sigma.degree == 0 {
            return Err(ManifoldError::ZeroDegree);
        }
        let g_inv = self.metric_at(p, fd)?.g_inv().clone();
        let nabla = self.covariant_derivative(sigma, p, fd, fd.h1);
        let n = self.dim;
        let mut out = AlternatingForm::zero(n, sigma.degree - 1);
        for a in 0..n {
            let mut v = vec![0.0; n];
            for (b, vb) in v.iter_mut().enumerate() {
                *vb = g_inv[(a, b)];
            }
            out = out.add(&contract(&v, &nabla[a])?);
        }
        Ok(out.scale(-1.0))
    }

    /// Deterministic sample points: uniform in each chart box with a 10%
    /// margin, charts visited round-robin.
    pub fn sample_points(&self, count: usize, seed: u64) -> Vec<ChartPoint> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        for k in 0..count {
            let chart = k % self.charts.len();
            let bx = &self.charts[chart];
            let u: Vec<f64> = bx
                .lo
                .iter()
                .zip(bx.hi.iter())
                .map(|(&lo, &hi)| {
                    let margin = 0.1 * (hi - lo);
                    rng.gen_range((lo + margin)..(hi - margin))
                })
                .collect();
            out.push(ChartPoint::new(chart, u));
        }
        out
    }
}

/// Christoffel symbols at a point; `get(a, b, c)` is the coefficient of
/// `d_c` in `nabla_{d_a} d_b`.
#[derive(Clone)]
pub struct ConnectionData {
    n: usize,
    gamma: Vec<f64>,
}

impl ConnectionData {
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.gamma[(a * self.n + b) * self.n + c]
    }

    /// The endomorphism `X -> nabla_{d_a} X` frozen on coordinate fields:
    /// entry (m, b) is the `d_m` component of `nabla_{d_a} d_b`.
    pub fn endo(&self, a: usize) -> DMatrix<f64> {
        let n = self.n;
        let mut m = DMatrix::<f64>::zeros(n, n);
        for b in 0..n {
            for c in 0..n {
                m[(c, b)] = self.get(a, b, c);
            }
        }
        m
    }

    /// Largest antisymmetry defect in the lower index pair.
    pub fn torsion_defect(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    worst = worst.max((self.get(a, b, c) - self.get(b, a, c)).abs());
                }
            }
        }
        worst
    }
}

/// Riemann curvature components at a point.
///
/// `mixed[i][j][k][l]` is the `d_l` component of the coordinate commutator
/// `[nabla_i, nabla_j] d_k`; `lowered` pairs the output slot with the metric
/// so constant-curvature models satisfy
/// `lowered(i,j,k,l) = kappa (g_ik g_jl - g_il g_jk)`.
pub struct CurvatureData {
    n: usize,
    mixed: Vec<f64>,
    lowered: Vec<f64>,
    g: DMatrix<f64>,
}

impl CurvatureData {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mixed(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.mixed[((i * self.n + j) * self.n + k) * self.n + l]
    }

    pub fn lowered(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.lowered[((i * self.n + j) * self.n + k) * self.n + l]
    }

    /// Curvature operator on vectors in the sign convention
    /// `R_{X,Y} Z = nabla_{[X,Y]} Z - nabla_X nabla_Y Z + nabla_Y nabla_X Z`,
    /// as a matrix acting on components, for coordinate directions (i, j).
    pub fn vector_endo(&self, i: usize, j: usize) -> DMatrix<f64> {
        let n = self.n;
        let mut m = DMatrix::<f64>::zeros(n, n);
        for k in 0..n {
            for l in 0..n {
                m[(l, k)] = -self.mixed(i, j, k, l);
            }
        }
        m
    }

    /// Action of `R_{X,Y}` on a p-form, X and Y given by chart components.
    pub fn action_on_form(&self, x: &[f64], y: &[f64], sigma: &AlternatingForm) -> AlternatingForm {
        let n = self.n;
        let mut endo = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                if y[j] == 0.0 {
                    continue;
                }
                let scale = x[i] * y[j];
                for k in 0..n {
                    for l in 0..n {
                        endo[(l, k)] -= scale * self.mixed(i, j, k, l);
                    }
                }
            }
        }
        endo_derivation_on_form(sigma, &endo)
    }

    /// Ricci tensor `Ric_jl = g^{ik} lowered(i,j,k,l)`.
    pub fn ricci(&self) -> DMatrix<f64> {
        let n = self.n;
        let g_inv = self.g.clone().try_inverse().expect("metric invertible");
        let mut ric = DMatrix::<f64>::zeros(n, n);
        for j in 0..n {
            for l in 0..n {
                let mut s = 0.0;
                for i in 0..n {
                    for k in 0..n {
                        s += g_inv[(i, k)] * self.lowered(i, j, k, l);
                    }
                }
                ric[(j, l)] = s;
            }
        }
        ric
    }

    /// Sectional curvature of the plane spanned by chart vectors x, y.
    pub fn sectional(&self, x: &[f64], y: &[f64]) -> f64 {
        let n = self.n;
        let mut num = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        num += x[i] * y[j] * x[k] * y[l] * self.lowered(i, j, k, l);
                    }
                }
            }
        }
        let ip = |a: &[f64], b: &[f64]| {
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    s += self.g[(i, j)] * a[i] * b[j];
                }
            }
            s
        };
        let den = ip(x, x) * ip(y, y) - ip(x, y) * ip(x, y);
        num / den
    }

    /// Worst violation among the index symmetries and the first Bianchi sum.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        let scale = self
            .lowered
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
            .max(1.0);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let r = self.lowered(i, j, k, l);
                        worst = worst.max((r + self.lowered(j, i, k, l)).abs());
                        worst = worst.max((r + self.lowered(i, j, l, k)).abs());
                        worst = worst.max((r - self.lowered(k, l, i, j)).abs());
                        // First Bianchi over the three vector slots.
                        let b = self.mixed(i, j, k, l)
                            + self.mixed(j, k, i, l)
                            + self.mixed(k, i, j, l);
                        worst = worst.max(b.abs());
                    }
                }
            }
        }
        worst / scale
    }
}

/// A p-form field on a model manifold, evaluated in the coordinate coframe.
#[derive(Clone)]
pub struct FormField {
    pub degree: usize,
    eval: Arc<dyn Fn(&ChartPoint) -> AlternatingForm + Send + Sync>,
}

impl FormField {
    pub fn new(
        degree: usize,
        eval: impl Fn(&ChartPoint) -> AlternatingForm + Send + Sync + 'static,
    ) -> Self {
        FormField {
            degree,
            eval: Arc::new(eval),
        }
    }

    pub fn eval(&self, p: &ChartPoint) -> AlternatingForm {
        (self.eval)(p)
    }

    /// Pullback of an ambient form along the parametrization of an embedded
    /// model: coefficients are the ambient values on Jacobian columns.
    pub fn pullback(
        manifold: Arc<ModelManifold>,
        degree: usize,
        fd: FdScheme,
        ambient: impl Fn(&[f64]) -> AlternatingForm + Send + Sync + 'static,
    ) -> Self {
        FormField::new(degree, move |p: &ChartPoint| {
            let jac = manifold
                .jacobian(p, &fd)
                .expect("pullback requires an embedded model");
            let ambient_point = manifold.embed(p).expect("embedded");
            let aform = ambient(&ambient_point);
            let n = manifold.dim;
            let cols: Vec<Vec<f64>> = (0..n)
                .map(|a| (0..jac.nrows()).map(|r| jac[(r, a)]).collect())
                .collect();
            let mut out = AlternatingForm::zero(n, degree);
            for mi in MultiIndex::enumerate(n, degree) {
                let picked: Vec<&[f64]> =
                    mi.indices().iter().map(|&a| cols[a].as_slice()).collect();
                let v = aform.eval_on(&picked);
                if v != 0.0 {
                    out.set(mi, v);
                }
            }
            out
        })
    }

    /// The metric volume form as a field.
    pub fn volume(manifold: Arc<ModelManifold>, fd: FdScheme) -> Self {
        let degree = manifold.dim;
        FormField::new(degree, move |p: &ChartPoint| {
            let m = manifold.metric_at(p, &fd).expect("metric");
            let mut out = AlternatingForm::zero(manifold.dim, manifold.dim);
            let full: Vec<usize> = (0..manifold.dim).collect();
            out.set(
                MultiIndex::new(&full, manifold.dim).unwrap(),
                m.orientation() * m.sqrt_det(),
            );
            out
        })
    }

    /// Spread of the pointwise norm over the given samples: (max - min) of
    /// `|sigma|`, plus the mean, for constant-length verification.
    pub fn length_spread(
        &self,
        manifold: &ModelManifold,
        points: &[ChartPoint],
        fd: &FdScheme,
    ) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut sum = 0.0;
        for p in points {
            let m = manifold.metric_at(p, fd).expect("metric");
            let v = form_inner(&self.eval(p), &self.eval(p), &m)
                .expect("inner")
                .max(0.0)
                .sqrt();
            lo = lo.min(v);
            hi = hi.max(v);
            sum += v;
        }
        (hi - lo, sum / points.len() as f64)
    }
}

/// Chart components of a tangent vector given in ambient coordinates:
/// least-squares solve of `J x = v`.
pub fn ambient_to_chart(jac: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    let n = jac.ncols();
    let jtj = jac.transpose() * jac;
    let rhs = jac.transpose() * DMatrix::from_column_slice(v.len(), 1, v);
    let sol = jtj.lu().solve(&rhs).expect("full-rank Jacobian");
    (0..n).map(|i| sol[(i, 0)]).collect()
}

/// Chart matrix of an ambient endomorphism restricted to the tangent space.
pub fn ambient_endo_to_chart(jac: &DMatrix<f64>, endo: &DMatrix<f64>) -> DMatrix<f64> {
    let n = jac.ncols();
    let mapped = endo * jac;
    let mut out = DMatrix::<f64>::zeros(n, n);
    for b in 0..n {
        let col: Vec<f64> = (0..jac.nrows()).map(|r| mapped[(r, b)]).collect();
        let chart = ambient_to_chart(jac, &col);
        for a in 0..n {
            out[(a, b)] = chart[a];
        }
    }
    out
}
