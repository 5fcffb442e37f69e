//! Analysis operators for sections of form bundles: bending density, rough
//! Laplacian, the curvature-pairing one-form (by the direct curvature route
//! and by the divergence route), harmonic-section and harmonic-map
//! residuals, coupled-pair fitting, locally conformal parallel machinery,
//! variation integrands and tension-field components.
//!
//! The curvature pairing is the one-form `R_(sigma)(X) = <R_{X,e_i} sigma,
//! nabla_{e_i} sigma>` over an orthonormal frame; a constant-length section
//! is a harmonic section of its sphere bundle iff `nabla* nabla sigma =
//! (|nabla sigma|^2 / r^2) sigma`, and additionally a harmonic map iff the
//! pairing vanishes.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};

use crate::manifold::{ChartPoint, FormField, ModelManifold};
use crate::multilinear::{
    contract, flat, form_inner, hodge_star, one_form_components, sharp, wedge, AlternatingForm,
    MultiIndex, PointMetric,
};
use crate::numerics::{fit_scalar, partial, FdScheme};

/// Tolerances and sampling controls for a verification run.
#[derive(Clone, Copy, Debug)]
pub struct CheckConfig {
    /// Exact-algebra tolerance.
    pub tol_alg: f64,
    /// First-derivative tolerance.
    pub tol_d1: f64,
    /// Second-derivative tolerance.
    pub tol_d2: f64,
    /// Finite-difference steps per unit of model scale.
    pub fd_h1_rel: f64,
    pub fd_h2_rel: f64,
    pub sample_count: usize,
    pub seed: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            tol_alg: 1e-12,
            tol_d1: 1e-6,
            tol_d2: 1e-4,
            fd_h1_rel: 1e-3,
            fd_h2_rel: 1e-2,
            sample_count: 50,
            seed: 42,
        }
    }
}

impl CheckConfig {
    /// Stencil scheme for a model of the given characteristic scale.
    pub fn fd_for_scale(&self, scale: f64) -> FdScheme {
        FdScheme {
            h1: self.fd_h1_rel * scale,
            h2: self.fd_h2_rel * scale,
            richardson: true,
        }
    }
}

/// Pointwise derivative bundle shared by the operators below.
pub struct PointAnalysis {
    pub metric: PointMetric,
    pub sigma: AlternatingForm,
    pub nabla: Vec<AlternatingForm>,
    /// Gram matrix `B_ab = <nabla_a sigma, nabla_b sigma>`.
    pub gram: DMatrix<f64>,
    pub grad_norm_sq: f64,
    pub norm_sq: f64,
}

impl PointAnalysis {
    pub fn new(
        m: &ModelManifold,
        sigma: &FormField,
        p: &ChartPoint,
        fd: &FdScheme,
    ) -> PointAnalysis {
        let metric = m.metric_at(p, fd).expect("metric inside chart");
        let value = sigma.eval(p);
        let nabla = m.covariant_derivative(sigma, p, fd, fd.h1);
        let n = m.dim;
        let mut gram = DMatrix::<f64>::zeros(n, n);
        for a in 0..n {
            for b in a..n {
                let v = form_inner(&nabla[a], &nabla[b], &metric).expect("inner");
                gram[(a, b)] = v;
                gram[(b, a)] = v;
            }
        }
        let g_inv = metric.g_inv();
        let mut grad_norm_sq = 0.0;
        for a in 0..n {
            for b in 0..n {
                grad_norm_sq += g_inv[(a, b)] * gram[(a, b)];
            }
        }
        let norm_sq = form_inner(&value, &value, &metric).expect("inner");
        PointAnalysis {
            metric,
            sigma: value,
            nabla,
            gram,
            grad_norm_sq,
            norm_sq,
        }
    }
}

/// Half the squared covariant-gradient norm, the total-bending integrand.
pub fn bending_density(m: &ModelManifold, sigma: &FormField, p: &ChartPoint, fd: &FdScheme) -> f64 {
    0.5 * PointAnalysis::new(m, sigma, p, fd).grad_norm_sq
}

/// `|nabla sigma|^2` as a scalar field evaluation (used inside stencils).
pub fn grad_norm_sq_at(
    m: &ModelManifold,
    sigma: &FormField,
    p: &ChartPoint,
    fd: &FdScheme,
    step: f64,
) -> f64 {
    let metric = m.metric_at(p, fd).expect("metric");
    let nabla = m.covariant_derivative(sigma, p, fd, step);
    let g_inv = metric.g_inv();
    let n = m.dim;
    let mut out = 0.0;
    for a in 0..n {
        for b in 0..n {
            out += g_inv[(a, b)] * form_inner(&nabla[a], &nabla[b], &metric).expect("inner");
        }
    }
    out
}

/// Rough (connection) Laplacian: negative metric trace of the second
/// covariant derivative.
pub fn rough_laplacian(
    m: &ModelManifold,
    sigma: &FormField,
    p: &ChartPoint,
    fd: &FdScheme,
) -> AlternatingForm {
    let hess = m.second_covariant_derivative(sigma, p, fd);
    let metric = m.metric_at(p, fd).expect("metric");
    let g_inv = metric.g_inv();
    let n = m.dim;
    let mut out = AlternatingForm::zero(n, sigma.degree);
    for a in 0..n {
        for b in 0..n {
            let w = g_inv[(a, b)];
            if w != 0.0 {
                out = out.add(&hess[a][b].scale(-w));
            }
        }
    }
    out
}

/// The curvature-pairing one-form by the direct route: contract the
/// curvature action on the section against its covariant derivative.
pub fn curvature_pairing(
    m: &ModelManifold,
    sigma: &FormField,
    p: &ChartPoint,
    fd: &FdScheme,
) -> AlternatingForm {
    let pa = PointAnalysis::new(m, sigma, p, fd);
    let curv = m.curvature_at(p, fd);
    let n = m.dim;
    let g_inv = pa.metric.g_inv().clone();
    let mut comps = vec![0.0; n];
    for c in 0..n {
        let mut x = vec![0.0; n];
        x[c] = 1.0;
        let mut total = 0.0;
        for a in 0..n {
            let mut y = vec![0.0; n];
            y[a] = 1.0;
            let action = curv.action_on_form(&x, &y, &pa.sigma);
            for b in 0..n {
                let w = g_inv[(a, b)];
                if w != 0.0 {
                    total += w * form_inner(&action, &pa.nabla[b], &pa.metric).expect("inner");
                }
            }
        }
        comps[c] = total;
    }
    AlternatingForm::one_form(n, &comps)
}

/// The same one-form by the divergence route, valid where the section is
/// (approximately) a harmonic section:
/// `div((nabla sigma)^t nabla_X sigma) + <nabla_{[X,e_i]} sigma,
/// nabla_{e_i} sigma> - (1/2) X(|nabla sigma|^2)`.
pub fn curvature_pairing_div_form(
    m: &ModelManifold,
    sigma: &FormField,
    p: &ChartPoint,
    fd: &FdScheme,
) -> AlternatingForm {
    let n = m.dim;
    let conn = m.christoffel_at(p, fd);
    // Transpose-vector field V_c^a = g^{ab} <nabla_c sigma, nabla_b sigma>.
    let transpose_field = |u: &[f64]| -> Vec<Vec<f64>> {
        let q = ChartPoint::new(p.chart, u.to_vec());
        let metric = m.metric_at(&q, fd).expect("metric");
        let nabla = m.covariant_derivative(sigma, &q, fd, fd.h2);
        let g_inv = metric.g_inv();
        let mut gram = DMatrix::<f64>::zeros(n, n);
        for a in 0..n {
            for b in a..n {
                let v = form_inner(&nabla[a], &nabla[b], &metric).expect("inner");
                gram[(a, b)] = v;
                gram[(b, a)] = v;
            }
        }
        (0..n)
            .map(|c| {
                (0..n)
                    .map(|a| (0..n).map(|b| g_inv[(a, b)] * gram[(c, b)]).sum())
                    .collect()
            })
            .collect()
    };
    let center = transpose_field(&p.u);
    // Divergence of each V_c: d_a V^a + Gamma^a_{a b} V^b.
    let mut div = vec![0.0; n];
    let mut dv = vec![vec![0.0; n]; n]; // dv[a][c] = d_a (V_c^a)
    for a in 0..n {
        let da = partial(&transpose_field, &p.u, a, fd.h2, fd.richardson);
        for c in 0..n {
            dv[a][c] = da[c][a];
        }
    }
    for c in 0..n {
        let mut s = 0.0;
        for a in 0..n {
            s += dv[a][c];
            for b in 0..n {
                s += conn.get(a, b, a) * center[c][b];
            }
        }
        div[c] = s;
    }
    // Frame-bracket term over the Gram-Schmidt orthonormal frame field.
    let frame_at = |u: &[f64]| -> DMatrix<f64> {
        let q = ChartPoint::new(p.chart, u.to_vec());
        m.metric_at(&q, fd).expect("metric").orthonormal_frame()
    };
    let frame = frame_at(&p.u);
    let pa = PointAnalysis::new(m, sigma, p, fd);
    let mut bracket = vec![0.0; n];
    for c in 0..n {
        let dframe = partial(&frame_at, &p.u, c, fd.h2, fd.richardson);
        let mut s = 0.0;
        for i in 0..n {
            // [d_c, e_i]^a = d_c(e_i^a)
            for a in 0..n {
                let w = dframe[(a, i)];
                if w == 0.0 {
                    continue;
                }
                for b in 0..n {
                    s += w * frame[(b, i)] * pa.gram[(a, b)];
                }
            }
        }
        bracket[c] = s;
    }
    // Gradient of the squared covariant-derivative norm.
    let mut grad = vec![0.0; n];
    for (c, gc) in grad.iter_mut().enumerate() {
        *gc = partial(
            |u: &[f64]| grad_norm_sq_at(m, sigma, &ChartPoint::new(p.chart, u.to_vec()), fd, fd.h2),
            &p.u,
            c,
            fd.h2,
            fd.richardson,
        );
    }
    let comps: Vec<f64> = (0..n)
        .map(|c| div[c] + bracket[c] - 0.5 * grad[c])
        .collect();
    AlternatingForm::one_form(n, &comps)
}

/// Generalized eigenvalues of `<nabla_X sigma, nabla_Y sigma>` against the
/// metric, sorted ascending.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub k: Vec<f64>,
    pub spread: f64,
}

pub fn ki_spectrum(
    m: &ModelManifold,
    sigma: &FormField,
    p: &ChartPoint,
    fd: &FdScheme,
) -> Spectrum {
    let pa = PointAnalysis::new(m, sigma, p, fd);
    let chol = Cholesky::new(pa.metric.g().clone()).expect("SPD metric");
    let l_inv = chol
        .l()
        .try_inverse()
        .expect("triangular factor invertible");
    let reduced = &l_inv * &pa.gram * l_inv.transpose();
    let sym = SymmetricEigen::new(reduced);
    let mut k: Vec<f64> = sym.eigenvalues.iter().copied().collect();
    k.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let spread = k.last().unwrap() - k.first().unwrap();
    Spectrum { k, spread }
}

/// Dimensionless harmonic-section residual
/// `|nabla*nabla sigma - (|nabla sigma|^2 / r^2) sigma| / |sigma|`.
pub fn harmonic_section_residual(
    m: &ModelManifold,
    sigma: &FormField,
    p: &ChartPoint,
    fd: &FdScheme,
) -> f64 {
    let pa = PointAnalysis::new(m, sigma, p, fd);
    let lap = rough_laplacian(m, sigma, p, fd);
    let r2 = pa.norm_sq;
    assert!(r2 > 0.0, "zero-length section");
    let target = pa.sigma.scale(pa.grad_norm_sq / r2);
    let diff = lap.sub(&target);
    (form_inner(&diff, &diff, &pa.metric).unwrap().max(0.0)).sqrt() / r2.sqrt()
}

/// Metric norm of the curvature-pairing one-form.
pub fn harmonic_map_residual(
    m: &ModelManifold,
    sigma: &FormField,
    p: &ChartPoint,
    fd: &FdScheme,
) -> f64 {
    let pairing = curvature_pairing(m, sigma, p, fd);
    let metric = m.metric_at(p, fd).expect("metric");
    form_inner(&pairing, &pairing, &metric)
        .unwrap()
        .max(0.0)
        .sqrt()
}

/// Fitted constants for a coupled pair
/// `nabla_X psi = lambda X . phi`, `nabla_X phi = mu X^flat ^ psi`.
#[derive(Clone, Debug)]
pub struct PairHypothesis {
    pub lambda: f64,
    pub mu: f64,
    pub residual_psi: f64,
    pub residual_phi: f64,
    /// Predicted rough-Laplacian eigenvalues `-(n-p) lambda mu` and
    /// `-(p+1) lambda mu`.
    pub eig_psi_pred: f64,
    pub eig_phi_pred: f64,
    /// Eigenvalues measured from the rough Laplacian.
    pub eig_psi_meas: f64,
    pub eig_phi_meas: f64,
    /// Residual of `|nabla psi|^2 = -(n-p) lambda mu |psi|^2` (relative),
    /// and its phi counterpart.
    pub grad_identity_psi: f64,
    pub grad_identity_phi: f64,
}

pub fn pair_fit(
    m: &ModelManifold,
    psi: &FormField,
    phi: &FormField,
    points: &[ChartPoint],
    fd: &FdScheme,
) -> PairHypothesis {
    assert_eq!(phi.degree, psi.degree + 1, "pair degrees must be (p, p+1)");
    let n = m.dim;
    let p_deg = psi.degree;
    let mut xs_l = Vec::new();
    let mut ys_l = Vec::new();
    let mut xs_m = Vec::new();
    let mut ys_m = Vec::new();
    let mut grad_psi = Vec::new();
    let mut grad_phi = Vec::new();
    let mut norm_psi = Vec::new();
    let mut norm_phi = Vec::new();
    for pt in points {
        let metric = m.metric_at(pt, fd).expect("metric");
        let psi_v = psi.eval(pt);
        let phi_v = phi.eval(pt);
        let npsi = m.covariant_derivative(psi, pt, fd, fd.h1);
        let nphi = m.covariant_derivative(phi, pt, fd, fd.h1);
        for a in 0..n {
            let mut x = vec![0.0; n];
            x[a] = 1.0;
            let model_l = contract(&x, &phi_v).expect("X . phi");
            for mi in MultiIndex::enumerate(n, p_deg) {
                xs_l.push(model_l.get(mi));
                ys_l.push(npsi[a].get(mi));
            }
            let xf = flat(&x, &metric).expect("flat");
            let model_m = wedge(&xf, &psi_v).expect("X^flat ^ psi");
            for mi in MultiIndex::enumerate(n, p_deg + 1) {
                xs_m.push(model_m.get(mi));
                ys_m.push(nphi[a].get(mi));
            }
        }
        let pa_psi = PointAnalysis::new(m, psi, pt, fd);
        let pa_phi = PointAnalysis::new(m, phi, pt, fd);
        grad_psi.push(pa_psi.grad_norm_sq);
        grad_phi.push(pa_phi.grad_norm_sq);
        norm_psi.push(pa_psi.norm_sq);
        norm_phi.push(pa_phi.norm_sq);
    }
    let (lambda, residual_psi) = fit_scalar(&xs_l, &ys_l);
    let (mu, residual_phi) = fit_scalar(&xs_m, &ys_m);
    let eig_psi_pred = -((n - p_deg) as f64) * lambda * mu;
    let eig_phi_pred = -((p_deg + 1) as f64) * lambda * mu;
    // Measured eigenvalues from the Laplacian at the first sample points.
    let meas = |field: &FormField| -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for pt in points.iter().take(3) {
            let metric = m.metric_at(pt, fd).expect("metric");
            let lap = rough_laplacian(m, field, pt, fd);
            let v = field.eval(pt);
            num += form_inner(&lap, &v, &metric).unwrap();
            den += form_inner(&v, &v, &metric).unwrap();
        }
        num / den
    };
    let eig_psi_meas = meas(psi);
    let eig_phi_meas = meas(phi);
    let rel = |measured: &[f64], expect: f64| -> f64 {
        measured
            .iter()
            .map(|v| (v - expect).abs() / expect.abs().max(1.0))
            .fold(0.0f64, f64::max)
    };
    let expected_grad_psi: Vec<f64> = norm_psi.iter().map(|r2| eig_psi_pred * r2).collect();
    let expected_grad_phi: Vec<f64> = norm_phi.iter().map(|r2| eig_phi_pred * r2).collect();
    let grad_identity_psi = grad_psi
        .iter()
        .zip(expected_grad_psi.iter())
        .map(|(g, e)| (g - e).abs() / e.abs().max(1.0))
        .fold(0.0f64, f64::max);
    let grad_identity_phi = grad_phi
        .iter()
        .zip(expected_grad_phi.iter())
        .map(|(g, e)| (g - e).abs() / e.abs().max(1.0))
        .fold(0.0f64, f64::max);
    let _ = rel;
    PairHypothesis {
        lambda,
        mu,
        residual_psi,
        residual_phi,
        eig_psi_pred,
        eig_phi_pred,
        eig_psi_meas,
        eig_phi_meas,
        grad_identity_psi,
        grad_identity_phi,
    }
}

/// Lee-form fit and residuals for a locally conformal parallel candidate:
/// `nabla_X sigma = X^flat ^ (theta# . sigma) - theta ^ (X . sigma)`.
#[derive(Clone, Debug)]
pub struct LcpReport {
    /// Fitted Lee form components in the coordinate coframe.
    pub theta: Vec<f64>,
    pub theta_norm_sq: f64,
    pub residual_lcp: f64,
    pub residual_dstar: f64,
    pub residual_lap: f64,
    pub residual_dtheta: f64,
    pub residual_nabla_theta: f64,
}

/// Fits theta at one point by least squares over all directions and
/// coefficients; the defining model is linear in theta.
pub fn lcp_fit_theta(
    m: &ModelManifold,
    sigma: &FormField,
    p: &ChartPoint,
    fd: &FdScheme,
) -> Vec<f64> {
    let n = m.dim;
    let metric = m.metric_at(p, fd).expect("metric");
    let sigma_v = sigma.eval(p);
    let nabla = m.covariant_derivative(sigma, p, fd, fd.h1);
    let p_deg = sigma.degree;
    let rows_per_dir = MultiIndex::enumerate(n, p_deg).len();
    let mut a = DMatrix::<f64>::zeros(n * rows_per_dir, n);
    let mut y = DVector::<f64>::zeros(n * rows_per_dir);
    for dir in 0..n {
        let mut x = vec![0.0; n];
        x[dir] = 1.0;
        let xf = flat(&x, &metric).expect("flat");
        let x_contr = contract(&x, &sigma_v).expect("X . sigma");
        for (c, col_theta) in (0..n).map(|c| (c, c)) {
            // theta = e^c: model = X^flat ^ (sharp(e^c) . sigma) - e^c ^ (X . sigma)
            let ec = AlternatingForm::basis(n, &[c]);
            let sharp_ec = sharp(&ec, &metric).expect("sharp");
            let inner = contract(&sharp_ec, &sigma_v).expect("theta# . sigma");
            let t1 = wedge(&xf, &inner).expect("wedge");
            let t2 = wedge(&ec, &x_contr).expect("wedge");
            let model = t1.sub(&t2);
            for (row, mi) in MultiIndex::enumerate(n, p_deg).iter().enumerate() {
                a[(dir * rows_per_dir + row, col_theta)] = model.get(*mi);
            }
        }
        for (row, mi) in MultiIndex::enumerate(n, p_deg).iter().enumerate() {
            y[dir * rows_per_dir + row] = nabla[dir].get(*mi);
        }
    }
    let ata = a.transpose() * &a;
    let aty = a.transpose() * &y;
    match ata.lu().solve(&aty) {
        Some(sol) => sol.iter().copied().collect(),
        None => vec![0.0; n],
    }
}

pub fn lcp_check(
    m: &std::sync::Arc<ModelManifold>,
    sigma: &FormField,
    p: &ChartPoint,
    fd: &FdScheme,
) -> LcpReport {
    let n = m.dim;
    let p_deg = sigma.degree;
    let metric = m.metric_at(p, fd).expect("metric");
    let sigma_v = sigma.eval(p);
    let nabla = m.covariant_derivative(sigma, p, fd, fd.h1);
    let theta = lcp_fit_theta(m, sigma, p, fd);
    let theta_form = AlternatingForm::one_form(n, &theta);
    let theta_sharp = sharp(&theta_form, &metric).expect("sharp");
    let theta_norm_sq: f64 = theta
        .iter()
        .enumerate()
        .map(|(i, ti)| {
            theta
                .iter()
                .enumerate()
                .map(|(j, tj)| metric.g_inv()[(i, j)] * ti * tj)
                .sum::<f64>()
        })
        .sum();

    // Residual of the defining first-order model.
    let mut num = 0.0;
    let mut den = 0.0;
    for dir in 0..n {
        let mut x = vec![0.0; n];
        x[dir] = 1.0;
        let xf = flat(&x, &metric).expect("flat");
        let inner = contract(&theta_sharp, &sigma_v).expect("contract");
        let model = wedge(&xf, &inner)
            .expect("wedge")
            .sub(&wedge(&theta_form, &contract(&x, &sigma_v).expect("contract")).expect("wedge"));
        let diff = nabla[dir].sub(&model);
        num += form_inner(&diff, &diff, &metric).unwrap().max(0.0);
        den += form_inner(&nabla[dir], &nabla[dir], &metric)
            .unwrap()
            .max(0.0);
    }
    let residual_lcp = if den > 0.0 { (num / den).sqrt() } else { 0.0 };

    // Coderivative identity d* sigma = (p - n) theta# . sigma.
    let dstar = m.coderivative(sigma, p, fd).expect("coderivative");
    let expected_dstar = contract(&theta_sharp, &sigma_v)
        .expect("contract")
        .scale(p_deg as f64 - n as f64);
    let diff = dstar.sub(&expected_dstar);
    let scale_d = form_inner(&expected_dstar, &expected_dstar, &metric)
        .unwrap()
        .sqrt()
        .max(1e-30);
    let residual_dstar = if theta_norm_sq < 1e-20 {
        form_inner(&dstar, &dstar, &metric).unwrap().sqrt()
    } else {
        form_inner(&diff, &diff, &metric).unwrap().max(0.0).sqrt() / scale_d
    };

    // Rough-Laplacian identity
    // nabla*nabla sigma = p |theta|^2 sigma + (n - 2p) theta ^ (theta# . sigma).
    let lap = rough_laplacian(m, sigma, p, fd);
    let correction = wedge(
        &theta_form,
        &contract(&theta_sharp, &sigma_v).expect("contract"),
    )
    .expect("wedge")
    .scale((n as f64) - 2.0 * p_deg as f64);
    let expected_lap = sigma_v.scale(p_deg as f64 * theta_norm_sq).add(&correction);
    let diff = lap.sub(&expected_lap);
    let lap_scale = form_inner(&expected_lap, &expected_lap, &metric)
        .unwrap()
        .sqrt()
        .max(form_inner(&sigma_v, &sigma_v, &metric).unwrap().sqrt());
    let residual_lap = form_inner(&diff, &diff, &metric).unwrap().max(0.0).sqrt() / lap_scale;

    // Closedness and parallelism of the fitted Lee form as a field.
    let theta_field = lee_form_field_arc(m.clone(), sigma.clone(), *fd);
    let dtheta = m.exterior_derivative(&theta_field, p, fd).expect("d theta");
    let theta_mag = theta_norm_sq.sqrt().max(1e-12);
    let residual_dtheta = dtheta.max_abs() / theta_mag;
    let ntheta = m.covariant_derivative(&theta_field, p, fd, fd.h2);
    let residual_nabla_theta =
        ntheta.iter().map(|f| f.max_abs()).fold(0.0f64, f64::max) / theta_mag;

    LcpReport {
        theta,
        theta_norm_sq,
        residual_lcp,
        residual_dstar,
        residual_lap,
        residual_dtheta,
        residual_nabla_theta,
    }
}

/// The fitted Lee form as a one-form field; theta is re-fitted at every
/// evaluation point.
pub fn lee_form_field_arc(
    m: std::sync::Arc<ModelManifold>,
    sigma: FormField,
    fd: FdScheme,
) -> FormField {
    FormField::new(1, move |p: &ChartPoint| {
        let theta = lcp_fit_theta(&m, &sigma, p, &fd);
        AlternatingForm::one_form(m.dim, &theta)
    })
}

/// First-variation and Hessian integrands at a point for a variation field
/// orthogonal to the section.
pub fn variation_integrands(
    m: &ModelManifold,
    sigma: &FormField,
    phi_var: &FormField,
    p: &ChartPoint,
    fd: &FdScheme,
) -> Result<(f64, f64), f64> {
    let metric = m.metric_at(p, fd).expect("metric");
    let s = sigma.eval(p);
    let v = phi_var.eval(p);
    let ip = form_inner(&s, &v, &metric).unwrap();
    let ns = form_inner(&s, &s, &metric).unwrap().sqrt();
    let nv = form_inner(&v, &v, &metric).unwrap().sqrt();
    if ip.abs() > 1e-8 * ns * nv.max(1e-30) {
        return Err(ip);
    }
    let lap = rough_laplacian(m, sigma, p, fd);
    let first = form_inner(&lap, &v, &metric).unwrap();
    let grad_phi = grad_norm_sq_at(m, phi_var, p, fd, fd.h1);
    let grad_sigma = grad_norm_sq_at(m, sigma, p, fd, fd.h1);
    let hess = grad_phi - nv * nv * grad_sigma;
    Ok((first, hess))
}

/// Tension-field components of a constant-length section.
pub struct TensionComponents {
    /// Sharp of the curvature pairing (the horizontal part).
    pub horizontal: Vec<f64>,
    /// Negative rough Laplacian (the full vertical part).
    pub vertical: AlternatingForm,
    /// Projection of the vertical part tangent to the sphere bundle:
    /// `(1/r^2) <nabla*nabla sigma, sigma> sigma - nabla*nabla sigma`.
    pub sphere_tangential: AlternatingForm,
}

pub fn tension_components(
    m: &ModelManifold,
    sigma: &FormField,
    p: &ChartPoint,
    fd: &FdScheme,
) -> TensionComponents {
    let metric = m.metric_at(p, fd).expect("metric");
    let pairing = curvature_pairing(m, sigma, p, fd);
    let horizontal = sharp(&pairing, &metric).expect("sharp");
    let lap = rough_laplacian(m, sigma, p, fd);
    let s = sigma.eval(p);
    let r2 = form_inner(&s, &s, &metric).unwrap();
    assert!(r2 > 0.0, "zero-length section");
    let coeff = form_inner(&lap, &s, &metric).unwrap() / r2;
    let sphere_tangential = s.scale(coeff).sub(&lap);
    TensionComponents {
        horizontal,
        vertical: lap.scale(-1.0),
        sphere_tangential,
    }
}

/// Defect one-form of the harmonic-map criterion for the top Kaehler power
/// on a locally conformal Kaehler manifold:
/// `(n-2) d|theta|^2 - (d*theta) theta - (d*(J theta)) J theta -
/// nabla_{J theta#} J theta` with `n` half the real dimension.
pub fn lck_harmonic_map_defect(
    m: &std::sync::Arc<ModelManifold>,
    sigma: &FormField,
    j_chart: &DMatrix<f64>,
    p: &ChartPoint,
    fd: &FdScheme,
) -> AlternatingForm {
    let dim = m.dim;
    let half = dim as f64 / 2.0;
    let metric = m.metric_at(p, fd).expect("metric");
    let theta_field = lee_form_field_arc(m.clone(), sigma.clone(), *fd);
    let theta = theta_field.eval(p);
    let theta_comps = one_form_components(&theta);

    // J theta as a one-form field: (J theta)(X) = theta(J X).
    let j = j_chart.clone();
    let tf = theta_field.clone();
    let j_theta_field = FormField::new(1, move |q: &ChartPoint| {
        let t = one_form_components(&tf.eval(q));
        let n = t.len();
        let mut out = vec![0.0; n];
        for (a, o) in out.iter_mut().enumerate() {
            for (b, tb) in t.iter().enumerate() {
                *o += tb * j[(b, a)];
            }
        }
        AlternatingForm::one_form(n, &out)
    });
    let j_theta = j_theta_field.eval(p);

    // d|theta|^2 by finite differences of the fitted field.
    let norm_sq_at = |u: &[f64]| -> f64 {
        let q = ChartPoint::new(p.chart, u.to_vec());
        let g = m.metric_at(&q, fd).expect("metric");
        let t = one_form_components(&theta_field.eval(&q));
        let mut s = 0.0;
        for i in 0..dim {
            for jx in 0..dim {
                s += g.g_inv()[(i, jx)] * t[i] * t[jx];
            }
        }
        s
    };
    let mut d_norm = vec![0.0; dim];
    for (c, dc) in d_norm.iter_mut().enumerate() {
        *dc = partial(norm_sq_at, &p.u, c, fd.h2, fd.richardson);
    }
    let d_norm_form = AlternatingForm::one_form(dim, &d_norm);

    let dstar_theta = m
        .coderivative(&theta_field, p, fd)
        .expect("d* theta")
        .get(MultiIndex::EMPTY);
    let dstar_j_theta = m
        .coderivative(&j_theta_field, p, fd)
        .expect("d* J theta")
        .get(MultiIndex::EMPTY);

    // nabla_{J theta#} J theta.
    let j_theta_sharp = sharp(&j_theta, &metric).expect("sharp");
    let njt = m.covariant_derivative(&j_theta_field, p, fd, fd.h2);
    let mut transported = AlternatingForm::zero(dim, 1);
    for (a, w) in j_theta_sharp.iter().enumerate() {
        if *w != 0.0 {
            transported = transported.add(&njt[a].scale(*w));
        }
    }

    let _ = theta_comps;
    d_norm_form
        .scale(half - 2.0)
        .sub(&theta.scale(dstar_theta))
        .sub(&j_theta.scale(dstar_j_theta))
        .sub(&transported)
}

/// Spin(7) variant of the defect: `(d*theta) theta - 3 d|theta|^2` for the
/// Lee form in the fundamental-form normalization (four times the
/// first-order fit).
pub fn spin7_defect(
    m: &std::sync::Arc<ModelManifold>,
    sigma: &FormField,
    p: &ChartPoint,
    fd: &FdScheme,
) -> AlternatingForm {
    let dim = m.dim;
    let theta_field = {
        let base = lee_form_field_arc(m.clone(), sigma.clone(), *fd);
        FormField::new(1, move |q: &ChartPoint| base.eval(q).scale(4.0))
    };
    let theta = theta_field.eval(p);
    let norm_sq_at = |u: &[f64]| -> f64 {
        let q = ChartPoint::new(p.chart, u.to_vec());
        let g = m.metric_at(&q, fd).expect("metric");
        let t = one_form_components(&theta_field.eval(&q));
        let mut s = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                s += g.g_inv()[(i, j)] * t[i] * t[j];
            }
        }
        s
    };
    let mut d_norm = vec![0.0; dim];
    for (c, dc) in d_norm.iter_mut().enumerate() {
        *dc = partial(norm_sq_at, &p.u, c, fd.h2, fd.richardson);
    }
    let dstar_theta = m
        .coderivative(&theta_field, p, fd)
        .expect("d* theta")
        .get(MultiIndex::EMPTY);
    theta
        .scale(dstar_theta)
        .sub(&AlternatingForm::one_form(dim, &d_norm).scale(3.0))
}

/// Lee form of a Spin(7) structure from the star pairing
/// `theta = -(1/7) star(star d Phi ^ Phi)`.
pub fn spin7_lee_form_star_route(
    m: &ModelManifold,
    sigma: &FormField,
    p: &ChartPoint,
    fd: &FdScheme,
) -> AlternatingForm {
    let metric = m.metric_at(p, fd).expect("metric");
    let dphi = m.exterior_derivative(sigma, p, fd).expect("d Phi");
    let star_dphi = hodge_star(&dphi, &metric).expect("star");
    let prod = wedge(&star_dphi, &sigma.eval(p)).expect("wedge");
    hodge_star(&prod, &metric).expect("star").scale(-1.0 / 7.0)
}
