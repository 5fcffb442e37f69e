//! Named verification checks over catalog entries, and the run driver that
//! executes them in parallel and assembles reports.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::harmonic::{
    curvature_pairing, curvature_pairing_div_form, harmonic_map_residual,
    harmonic_section_residual, ki_spectrum, lck_harmonic_map_defect, lcp_check, pair_fit,
    rough_laplacian, spin7_defect, spin7_lee_form_star_route, variation_integrands, CheckConfig,
    PointAnalysis,
};
use crate::manifold::{ChartPoint, FormField};
use crate::models::{CatalogEntry, ExpectedEigen, Family};
use crate::multilinear::{
    contract, flat, form_inner, one_form_components, wedge, AlternatingForm, MultiIndex,
};
use crate::numerics::{fit_scalar, partial, FdScheme};
use crate::oracle::{oracle_gate, OracleReport};
use crate::report::{CheckRecord, FieldReport, RunReport, Summary, Verdict, SCHEMA};

/// Stable list of check names with one-line descriptions.
pub fn list_checks() -> Vec<(&'static str, &'static str)> {
    vec![
        (
            "constant-length",
            "pointwise norm of the section is constant across samples",
        ),
        (
            "laplacian-eigen",
            "rough Laplacian is the expected multiple of the section",
        ),
        (
            "harmonic-section",
            "rough Laplacian is collinear with the section",
        ),
        ("harmonic-map", "curvature-pairing one-form vanishes"),
        (
            "two-route",
            "curvature pairing agrees with its divergence-form evaluation",
        ),
        (
            "ki-spectrum",
            "generalized spectrum of the derivative Gram form is constant",
        ),
        (
            "pair-thm",
            "coupled first-order system fit and predicted eigenvalues",
        ),
        (
            "lcp",
            "locally conformal parallel fit: Lee form, coderivative, Laplacian",
        ),
        (
            "lck-defect",
            "harmonic-map defect identity for the top Kaehler power",
        ),
        (
            "spin7-defect",
            "harmonic-map defect identity for the fundamental four-form",
        ),
        (
            "structure",
            "family-specific structure identities at sample points",
        ),
        (
            "variation",
            "first-variation and Hessian integrands for orthogonal variations",
        ),
        (
            "tension",
            "tension components consistent with the section/map verdicts",
        ),
    ]
}

pub fn known_check(name: &str) -> bool {
    list_checks().iter().any(|(n, _)| *n == name)
}

fn record(
    name: &str,
    points: usize,
    max_residual: f64,
    tolerance: f64,
    fitted: BTreeMap<String, f64>,
    residuals: Vec<f64>,
) -> CheckRecord {
    CheckRecord {
        name: name.to_string(),
        points,
        max_residual,
        tolerance,
        fitted,
        verdict: Verdict::from_bool(max_residual < tolerance),
        expected: None,
        ok: max_residual < tolerance,
        residuals,
    }
}

fn expected_eigen_at(
    entry: &CatalogEntry,
    spec: &ExpectedEigen,
    p: &ChartPoint,
    theta_norm_sq: Option<f64>,
) -> f64 {
    match spec {
        ExpectedEigen::Value(v) => *v,
        ExpectedEigen::FactorTimesSquared { constant, factor } => {
            let c = entry.constants.get(constant).copied().unwrap_or(0.0);
            factor * c * c
        }
        ExpectedEigen::FactorTimesPointwiseSquared { factor } => {
            let b = entry.pointwise.as_ref().map(|f| f(p)).unwrap_or(0.0);
            factor * b * b
        }
        ExpectedEigen::FactorTimesLeeNormSq { factor } => factor * theta_norm_sq.unwrap_or(0.0),
    }
}

/// Runs one named check for a (entry, field) pair over sample points.
pub fn run_check(
    entry: &CatalogEntry,
    field_name: &str,
    check: &str,
    cfg: &CheckConfig,
    eigen_spec: Option<&ExpectedEigen>,
) -> CheckRecord {
    let fd = cfg.fd_for_scale(entry.manifold.scale);
    let m = &entry.manifold;
    let field = entry
        .field(field_name)
        .unwrap_or_else(|| panic!("unknown field {field_name} on {}", entry.id));
    let points = m.sample_points(cfg.sample_count, cfg.seed);
    match check {
        "constant-length" => {
            let (spread, mean) = field.length_spread(m, &points, &fd);
            let rel = spread / (1.0 + mean);
            let mut fitted = BTreeMap::new();
            fitted.insert("mean-length".into(), mean);
            record(check, points.len(), rel, 1e-8, fitted, vec![])
        }
        "laplacian-eigen" => {
            let rows: Vec<(f64, f64, f64)> = points
                .par_iter()
                .map(|p| {
                    let pa = PointAnalysis::new(m, field, p, &fd);
                    let lap = rough_laplacian(m, field, p, &fd);
                    let c = if pa.norm_sq > 0.0 {
                        form_inner(&lap, &pa.sigma, &pa.metric).unwrap() / pa.norm_sq
                    } else {
                        0.0
                    };
                    let theta_sq = eigen_spec.and_then(|e| match e {
                        ExpectedEigen::FactorTimesLeeNormSq { .. } => {
                            Some(lcp_check(m, field, p, &fd).theta_norm_sq)
                        }
                        _ => None,
                    });
                    let c_exp = eigen_spec
                        .map(|e| expected_eigen_at(entry, e, p, theta_sq))
                        .unwrap_or(c);
                    let scale = pa.norm_sq.sqrt() * c_exp.abs().max(1.0);
                    let diff = lap.sub(&pa.sigma.scale(c_exp));
                    let resid = form_inner(&diff, &diff, &pa.metric)
                        .unwrap()
                        .max(0.0)
                        .sqrt()
                        / scale;
                    (resid, c, c_exp)
                })
                .collect();
            let residuals: Vec<f64> = rows.iter().map(|r| r.0).collect();
            let max = residuals.iter().cloned().fold(0.0f64, f64::max);
            let mut fitted = BTreeMap::new();
            fitted.insert(
                "eigenvalue".into(),
                rows.iter().map(|r| r.1).sum::<f64>() / rows.len() as f64,
            );
            fitted.insert(
                "expected".into(),
                rows.iter().map(|r| r.2).sum::<f64>() / rows.len() as f64,
            );
            record(check, points.len(), max, cfg.tol_d2, fitted, residuals)
        }
        "harmonic-section" => {
            let rows: Vec<f64> = points
                .par_iter()
                .map(|p| {
                    let pa = PointAnalysis::new(m, field, p, &fd);
                    let raw = harmonic_section_residual(m, field, p, &fd);
                    raw / (pa.grad_norm_sq / pa.norm_sq).max(1.0)
                })
                .collect();
            let max = rows.iter().cloned().fold(0.0f64, f64::max);
            record(check, points.len(), max, cfg.tol_d2, BTreeMap::new(), rows)
        }
        "harmonic-map" => {
            let rows: Vec<(f64, f64)> = points
                .par_iter()
                .map(|p| {
                    let pa = PointAnalysis::new(m, field, p, &fd);
                    let raw = harmonic_map_residual(m, field, p, &fd);
                    (raw / pa.grad_norm_sq.max(1.0), raw)
                })
                .collect();
            let residuals: Vec<f64> = rows.iter().map(|r| r.0).collect();
            let max = residuals.iter().cloned().fold(0.0f64, f64::max);
            let mut fitted = BTreeMap::new();
            fitted.insert(
                "pairing-norm".into(),
                rows.iter().map(|r| r.1).fold(0.0f64, f64::max),
            );
            record(check, points.len(), max, cfg.tol_d2, fitted, residuals)
        }
        "two-route" => {
            let rows: Vec<(f64, bool)> = points
                .par_iter()
                .map(|p| {
                    let pa = PointAnalysis::new(m, field, p, &fd);
                    let hs = harmonic_section_residual(m, field, p, &fd)
                        / (pa.grad_norm_sq / pa.norm_sq).max(1.0);
                    // The divergence form presumes a harmonic section.
                    let applicable = hs < cfg.tol_d2;
                    if !applicable {
                        return (0.0, false);
                    }
                    let a = curvature_pairing(m, field, p, &fd);
                    let b = curvature_pairing_div_form(m, field, p, &fd);
                    let diff = a.sub(&b);
                    let denom = form_inner(&a, &a, &pa.metric)
                        .unwrap()
                        .sqrt()
                        .max(pa.grad_norm_sq)
                        .max(1.0);
                    (
                        form_inner(&diff, &diff, &pa.metric)
                            .unwrap()
                            .max(0.0)
                            .sqrt()
                            / denom,
                        true,
                    )
                })
                .collect();
            let used = rows.iter().filter(|r| r.1).count();
            let residuals: Vec<f64> = rows.iter().filter(|r| r.1).map(|r| r.0).collect();
            let max = residuals.iter().cloned().fold(0.0f64, f64::max);
            let mut fitted = BTreeMap::new();
            fitted.insert("applicable-points".into(), used as f64);
            let mut rec = record(check, points.len(), max, 1e-3, fitted, residuals);
            if used == 0 {
                rec.verdict = Verdict::Fail;
                rec.ok = false;
            }
            rec
        }
        "ki-spectrum" => {
            let rows: Vec<(f64, f64, f64)> = points
                .par_iter()
                .map(|p| {
                    let spec = ki_spectrum(m, field, p, &fd);
                    let kmax = *spec.k.last().unwrap();
                    let kmin = *spec.k.first().unwrap();
                    // Accept the all-equal pattern or a zero block followed
                    // by an equal nonzero block.
                    let scale = kmax.abs().max(1.0);
                    let all_equal = spec.spread / scale;
                    let nonzero: Vec<f64> = spec
                        .k
                        .iter()
                        .cloned()
                        .filter(|k| k.abs() > cfg.tol_d1 * scale)
                        .collect();
                    let block = if nonzero.is_empty() {
                        0.0
                    } else {
                        (nonzero.last().unwrap() - nonzero.first().unwrap()) / scale
                    };
                    // The Gram form is positive semidefinite.
                    let negativity = (-kmin / scale).max(0.0);
                    (all_equal.min(block).max(negativity), kmin, kmax)
                })
                .collect();
            let residuals: Vec<f64> = rows.iter().map(|r| r.0).collect();
            let max = residuals.iter().cloned().fold(0.0f64, f64::max);
            let mut fitted = BTreeMap::new();
            fitted.insert(
                "k-min".into(),
                rows.iter().map(|r| r.1).sum::<f64>() / rows.len() as f64,
            );
            fitted.insert(
                "k-max".into(),
                rows.iter().map(|r| r.2).sum::<f64>() / rows.len() as f64,
            );
            record(
                check,
                points.len(),
                max,
                cfg.tol_d1 * 100.0,
                fitted,
                residuals,
            )
        }
        "pair-thm" => {
            let pair = entry
                .pairs
                .iter()
                .find(|p| p.lower.eq_ignore_ascii_case(field_name))
                .unwrap_or_else(|| panic!("{field_name} is not the lower half of a pair"));
            let upper = entry.field(&pair.upper).expect("pair partner");
            let fit_points: Vec<ChartPoint> =
                points.iter().take(points.len().min(6)).cloned().collect();
            let hyp = pair_fit(m, field, upper, &fit_points, &fd);
            let eig_consistency = ((hyp.eig_psi_pred - hyp.eig_psi_meas).abs()
                / hyp.eig_psi_pred.abs().max(1.0))
            .max((hyp.eig_phi_pred - hyp.eig_phi_meas).abs() / hyp.eig_phi_pred.abs().max(1.0));
            let max = hyp
                .residual_psi
                .max(hyp.residual_phi)
                .max(eig_consistency)
                .max(hyp.grad_identity_psi)
                .max(hyp.grad_identity_phi);
            let mut fitted = BTreeMap::new();
            fitted.insert("lambda".into(), hyp.lambda);
            fitted.insert("mu".into(), hyp.mu);
            fitted.insert("eig-lower-pred".into(), hyp.eig_psi_pred);
            fitted.insert("eig-lower-meas".into(), hyp.eig_psi_meas);
            fitted.insert("eig-upper-pred".into(), hyp.eig_phi_pred);
            fitted.insert("eig-upper-meas".into(), hyp.eig_phi_meas);
            record(check, fit_points.len(), max, 1e-3, fitted, vec![])
        }
        "lcp" => {
            let rows: Vec<(f64, f64, f64)> = points
                .par_iter()
                .map(|p| {
                    let rep = lcp_check(m, field, p, &fd);
                    let mut resid = rep
                        .residual_lcp
                        .max(rep.residual_dstar)
                        .max(rep.residual_lap)
                        .max(rep.residual_dtheta);
                    if entry.family == Family::LcpSpin7 {
                        // Cross-check the star-route Lee form against four
                        // times the first-order fit, up to overall sign.
                        let c2 = spin7_lee_form_star_route(m, field, p, &fd);
                        let fit4 = AlternatingForm::one_form(m.dim, &rep.theta).scale(4.0);
                        let g = m.metric_at(p, &fd).unwrap();
                        let d1 = c2.sub(&fit4);
                        let d2 = c2.add(&fit4);
                        let n1 = form_inner(&d1, &d1, &g).unwrap().max(0.0).sqrt();
                        let n2 = form_inner(&d2, &d2, &g).unwrap().max(0.0).sqrt();
                        let nc = form_inner(&c2, &c2, &g).unwrap().max(0.0).sqrt();
                        resid = resid.max(n1.min(n2) / nc.max(1e-12));
                    }
                    (resid, rep.theta_norm_sq, rep.residual_nabla_theta)
                })
                .collect();
            let residuals: Vec<f64> = rows.iter().map(|r| r.0).collect();
            let max = residuals.iter().cloned().fold(0.0f64, f64::max);
            let mut fitted = BTreeMap::new();
            fitted.insert(
                "lee-norm-sq".into(),
                rows.iter().map(|r| r.1).sum::<f64>() / rows.len() as f64,
            );
            fitted.insert(
                "nabla-theta-resid".into(),
                rows.iter().map(|r| r.2).fold(0.0f64, f64::max),
            );
            record(check, points.len(), max, cfg.tol_d2, fitted, residuals)
        }
        "lck-defect" => {
            let j = entry
                .complex_structure
                .as_ref()
                .expect("lcK entry provides a complex structure");
            let rows: Vec<(f64, f64, f64)> = points
                .par_iter()
                .map(|p| {
                    let g = m.metric_at(p, &fd).unwrap();
                    let defect = lck_harmonic_map_defect(m, field, j, p, &fd);
                    let dn = form_inner(&defect, &defect, &g).unwrap().max(0.0).sqrt();
                    let pairing = curvature_pairing(m, field, p, &fd);
                    let pn = form_inner(&pairing, &pairing, &g).unwrap().max(0.0).sqrt();
                    // The theorem content: the pairing vanishes exactly when
                    // the defect does.
                    let zero_d = dn < cfg.tol_d2;
                    let zero_p = pn < cfg.tol_d2;
                    let iff = if zero_d == zero_p { 0.0 } else { 1.0 };
                    (iff, dn, pn)
                })
                .collect();
            let residuals: Vec<f64> = rows.iter().map(|r| r.0).collect();
            let max = residuals.iter().cloned().fold(0.0f64, f64::max);
            let mut fitted = BTreeMap::new();
            let dn: f64 = rows.iter().map(|r| r.1).sum::<f64>() / rows.len() as f64;
            let pn: f64 = rows.iter().map(|r| r.2).sum::<f64>() / rows.len() as f64;
            fitted.insert("defect-norm".into(), dn);
            fitted.insert("pairing-norm".into(), pn);
            if dn > cfg.tol_d2 {
                fitted.insert("pairing-over-defect".into(), pn / dn);
            }
            record(check, points.len(), max, 0.5, fitted, residuals)
        }
        "spin7-defect" => {
            let rows: Vec<f64> = points
                .par_iter()
                .map(|p| {
                    let g = m.metric_at(p, &fd).unwrap();
                    let d = spin7_defect(m, field, p, &fd);
                    form_inner(&d, &d, &g).unwrap().max(0.0).sqrt()
                })
                .collect();
            let max = rows.iter().cloned().fold(0.0f64, f64::max);
            record(
                check,
                points.len(),
                max,
                cfg.tol_d2 * 10.0,
                BTreeMap::new(),
                rows,
            )
        }
        "structure" => structure_check(entry, field_name, cfg),
        "variation" => {
            let rows: Vec<(f64, f64)> = points
                .par_iter()
                .map(|p| {
                    let pa = PointAnalysis::new(m, field, p, &fd);
                    let g = &pa.metric;
                    // Reference form: first basis coframe of matching degree,
                    // orthogonalized against the section; fall back to the
                    // next basis index when degenerate.
                    let mut var = None;
                    for mi in MultiIndex::enumerate(m.dim, field.degree) {
                        let mut tau = AlternatingForm::zero(m.dim, field.degree);
                        tau.set(mi, 1.0);
                        let ip = form_inner(&tau, &pa.sigma, g).unwrap();
                        let cand = tau.sub(&pa.sigma.scale(ip / pa.norm_sq));
                        let norm = form_inner(&cand, &cand, g).unwrap().max(0.0).sqrt();
                        if norm > 0.3 {
                            var = Some((mi, cand.scale(1.0 / norm)));
                            break;
                        }
                    }
                    let (mi, phi_val) = match var {
                        Some(v) => v,
                        // Rank-one bundles (top degree) admit no orthogonal
                        // variation; report as inapplicable.
                        None => return (f64::INFINITY, 0.0),
                    };
                    let sigma_c = field.clone();
                    // Freeze the variation field by projecting the constant
                    // reference form at every point.
                    let mref = m.clone();
                    let fdc = fd;
                    let phi_field = FormField::new(field.degree, move |q: &ChartPoint| {
                        let gq = mref.metric_at(q, &fdc).unwrap();
                        let s = sigma_c.eval(q);
                        let ns = form_inner(&s, &s, &gq).unwrap();
                        let mut tau = AlternatingForm::zero(mref.dim, s.degree());
                        tau.set(mi, 1.0);
                        let ip = form_inner(&tau, &s, &gq).unwrap();
                        tau.sub(&s.scale(ip / ns))
                    });
                    match variation_integrands(m, field, &phi_field, p, &fd) {
                        Ok((first, hess)) => {
                            let lap = rough_laplacian(m, field, p, &fd);
                            let scale = form_inner(&lap, &lap, g).unwrap().max(0.0).sqrt()
                                * form_inner(&phi_val, &phi_val, g).unwrap().sqrt();
                            (first.abs() / scale.max(1.0), hess)
                        }
                        Err(_) => (f64::INFINITY, 0.0),
                    }
                })
                .collect();
            let residuals: Vec<f64> = rows.iter().map(|r| r.0).collect();
            let max = residuals.iter().cloned().fold(0.0f64, f64::max);
            let mut fitted = BTreeMap::new();
            fitted.insert(
                "hess-min".into(),
                rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min),
            );
            fitted.insert(
                "hess-mean".into(),
                rows.iter().map(|r| r.1).sum::<f64>() / rows.len() as f64,
            );
            record(
                check,
                points.len(),
                max,
                cfg.tol_d2 * 10.0,
                fitted,
                residuals,
            )
        }
        "tension" => {
            let rows: Vec<f64> = points
                .par_iter()
                .map(|p| {
                    let pa = PointAnalysis::new(m, field, p, &fd);
                    let t = crate::harmonic::tension_components(m, field, p, &fd);
                    let g = &pa.metric;
                    let hor: f64 = {
                        let theta = flat(&t.horizontal, g).unwrap();
                        form_inner(&theta, &theta, g).unwrap().max(0.0).sqrt()
                    };
                    let tan = form_inner(&t.sphere_tangential, &t.sphere_tangential, g)
                        .unwrap()
                        .max(0.0)
                        .sqrt();
                    let hm = harmonic_map_residual(m, field, p, &fd) / pa.grad_norm_sq.max(1.0);
                    let hs = harmonic_section_residual(m, field, p, &fd)
                        / (pa.grad_norm_sq / pa.norm_sq).max(1.0);
                    // The tangential part uses <lap, sigma>/r^2 where the
                    // section residual uses |nabla sigma|^2/r^2; their match
                    // rests on the constant-length trace identity.
                    let hor_rel = hor / pa.grad_norm_sq.max(1.0);
                    let tan_rel =
                        tan / (pa.norm_sq.sqrt() * (pa.grad_norm_sq / pa.norm_sq).max(1.0));
                    let both_zero = hor_rel < cfg.tol_d2 && tan_rel < cfg.tol_d2;
                    let verdicts = hm < cfg.tol_d2 && hs < cfg.tol_d2;
                    if both_zero == verdicts {
                        0.0
                    } else {
                        1.0
                    }
                })
                .collect();
            let max = rows.iter().cloned().fold(0.0f64, f64::max);
            record(check, points.len(), max, 0.5, BTreeMap::new(), rows)
        }
        other => panic!("unknown check `{other}`"),
    }
}

/// Family-specific structure identity suites.
fn structure_check(entry: &CatalogEntry, field_name: &str, cfg: &CheckConfig) -> CheckRecord {
    let fd = cfg.fd_for_scale(entry.manifold.scale);
    let m = &entry.manifold;
    let points = m.sample_points(cfg.sample_count.min(8), cfg.seed ^ 0x5f5f);
    let mut fitted = BTreeMap::new();
    let mut worst = 0.0f64;
    match entry.family {
        Family::RoundSphere => {
            for p in &points {
                let curv = m.curvature_at(p, &fd);
                worst = worst.max(curv.symmetry_defect());
                let x: Vec<f64> = (0..m.dim).map(|i| 0.3 + 0.1 * i as f64).collect();
                let y: Vec<f64> = (0..m.dim).map(|i| 1.0 - 0.2 * i as f64).collect();
                worst = worst.max((curv.sectional(&x, &y) - 1.0).abs());
            }
        }
        Family::NearlyKaehler => {
            // d(omega) is of type (3,0) + (0,3): psi(JX, JY, Z) = -psi(X, Y, Z).
            let psi = entry.field("psi-plus").unwrap();
            let oct = crate::gstructures::AlgebraTable::octonion();
            for p in &points {
                let jac = m.jacobian(p, &fd).unwrap();
                let amb = m.embed(p).unwrap();
                let mut jm = DMatrix::<f64>::zeros(7, 7);
                for b in 0..7 {
                    let mut e = vec![0.0; 7];
                    e[b] = 1.0;
                    let col = oct.mul_imaginary(&amb, &e);
                    for (r, v) in col.iter().enumerate() {
                        jm[(r, b)] = *v;
                    }
                }
                let j_chart = crate::manifold::ambient_endo_to_chart(&jac, &jm);
                let v = psi.eval(p);
                let n = m.dim;
                let vecs: Vec<Vec<f64>> = (0..3)
                    .map(|k| {
                        (0..n)
                            .map(|i| ((i + k * 2) as f64 * 0.37).sin() + 0.2)
                            .collect()
                    })
                    .collect();
                let jx: Vec<f64> = (0..n)
                    .map(|r| (0..n).map(|c| j_chart[(r, c)] * vecs[0][c]).sum())
                    .collect();
                let jy: Vec<f64> = (0..n)
                    .map(|r| (0..n).map(|c| j_chart[(r, c)] * vecs[1][c]).sum())
                    .collect();
                let lhs = v.eval_on(&[&jx, &jy, &vecs[2]]);
                let rhs = -v.eval_on(&[&vecs[0], &vecs[1], &vecs[2]]);
                worst = worst.max((lhs - rhs).abs() / (1.0 + rhs.abs()));
            }
        }
        Family::NearlyParallelG2 => {
            // Einstein constant against the first-order constant:
            // rho / (dim - 1) = k^2 / 16.
            let rho = entry.constants["rho"];
            let k = entry.constants["k"];
            let lhs = rho / (m.dim as f64 - 1.0);
            let rhs = k * k / 16.0;
            worst = worst.max((lhs - rhs).abs() / rhs.abs().max(1.0));
            fitted.insert("rho-normalized".into(), lhs);
            fitted.insert("k-sq-over-16".into(), rhs);
        }
        Family::Sasakian => {
            let eta = entry.field("eta").unwrap();
            let f2 = entry.field("F").unwrap();
            let a = entry.constants["a"];
            let n_c = entry.constants["n"];
            for p in &points {
                let g = m.metric_at(p, &fd).unwrap();
                // nabla_X eta = a X . F
                let nabla_eta = m.covariant_derivative(eta, p, &fd, fd.h1);
                let f_val = f2.eval(p);
                let mut xs = Vec::new();
                let mut ys = Vec::new();
                for dir in 0..m.dim {
                    let mut x = vec![0.0; m.dim];
                    x[dir] = 1.0;
                    let model = contract(&x, &f_val).unwrap();
                    for mi in MultiIndex::enumerate(m.dim, 1) {
                        xs.push(model.get(mi));
                        ys.push(nabla_eta[dir].get(mi));
                    }
                }
                let (a2, resid) = fit_scalar(&xs, &ys);
                worst = worst.max(resid).max((a2 - a).abs());
                // d*F(zeta) = 2 n a
                let dstar_f = m.coderivative(f2, p, &fd).unwrap();
                let zeta = crate::multilinear::sharp(&eta.eval(p), &g).unwrap();
                let val = one_form_components(&dstar_f)
                    .iter()
                    .zip(zeta.iter())
                    .map(|(c, z)| c * z)
                    .sum::<f64>();
                worst = worst.max((val - 2.0 * n_c * a).abs() / (2.0 * n_c).abs());
            }
            fitted.insert("a".into(), a);
        }
        Family::ThreeSasakian => {
            worst = worst.max(three_sasakian_structure(entry, &points, &fd, &mut fitted));
        }
        Family::Kenmotsu => {
            let eta = entry.field("eta").unwrap();
            let b_of = entry.pointwise.as_ref().unwrap();
            let n_c = entry.constants["n"];
            for p in &points {
                let g = m.metric_at(p, &fd).unwrap();
                let nabla_eta = m.covariant_derivative(eta, p, &fd, fd.h1);
                let eta_v = eta.eval(p);
                // nabla_X eta = -b X^flat + b eta(X) eta
                let mut xs = Vec::new();
                let mut ys = Vec::new();
                for dir in 0..m.dim {
                    let mut x = vec![0.0; m.dim];
                    x[dir] = 1.0;
                    let xf = flat(&x, &g).unwrap();
                    let eta_x = eta_v.eval_on(&[&x[..]]);
                    let model = xf.scale(-1.0).add(&eta_v.scale(eta_x));
                    for mi in MultiIndex::enumerate(m.dim, 1) {
                        xs.push(model.get(mi));
                        ys.push(nabla_eta[dir].get(mi));
                    }
                }
                let (b_fit, resid) = fit_scalar(&xs, &ys);
                let b_expect = b_of(p);
                worst = worst
                    .max(resid)
                    .max((b_fit - b_expect).abs() / b_expect.abs().max(0.1));
                // d* eta = 2 n b
                let dstar_eta = m.coderivative(eta, p, &fd).unwrap().get(MultiIndex::EMPTY);
                worst = worst.max((dstar_eta - 2.0 * n_c * b_expect).abs());
                // db is proportional to eta: components of db along the fibre vanish.
                let db: Vec<f64> = (0..m.dim)
                    .map(|c| {
                        partial(
                            |u: &[f64]| {
                                let q = ChartPoint::new(p.chart, u.to_vec());
                                b_of(&q)
                            },
                            &p.u,
                            c,
                            fd.h2,
                            fd.richardson,
                        )
                    })
                    .collect();
                for v in db.iter().skip(1) {
                    worst = worst.max(v.abs());
                }
            }
        }
        Family::LcKaehler | Family::LcpSpin7 | Family::LcHyperKaehler => {
            // Lee form closed; parallel exactly on the cone models.
            let field = entry.field(field_name).unwrap();
            for p in &points {
                let rep = lcp_check(m, field, p, &fd);
                worst = worst.max(rep.residual_dtheta);
                if entry.conformal.is_some() && entry.id != "lck-generic" {
                    worst = worst.max(rep.residual_nabla_theta);
                }
                fitted.insert("lee-norm-sq".into(), rep.theta_norm_sq);
            }
        }
    }
    record(
        "structure",
        points.len(),
        worst,
        cfg.tol_d2 * 10.0,
        fitted,
        vec![],
    )
}

/// The 3-Sasakian structure identities: the frame contraction identity for
/// pairs of fundamental two-forms, the vanishing Reeb-frame contractions,
/// and the covariant derivative of the Reeb one-forms against the
/// quaternionic-frame model tensor.
fn three_sasakian_structure(
    entry: &CatalogEntry,
    points: &[ChartPoint],
    fd: &FdScheme,
    fitted: &mut BTreeMap<String, f64>,
) -> f64 {
    let m = &entry.manifold;
    let a = entry.constants["a"];
    let n = m.dim; // 4k + 3
    let mut worst = 0.0f64;
    // The eta_i / F_i come packaged in the entry only through composites;
    // rebuild them directly from the right-multiplication structure, with
    // the unit order that fixes the cyclic sign table.
    let unit_order = [2usize, 1, 3];
    let amb_f: Vec<DMatrix<f64>> = unit_order
        .iter()
        .map(|&u| crate::gstructures::quaternion_right_mult(u, 2))
        .collect();
    for p in points {
        let g = m.metric_at(p, fd).unwrap();
        let jac = m.jacobian(p, fd).unwrap();
        let amb = m.embed(p).unwrap();
        // Chart versions of F_i and eta_i.
        let f_chart: Vec<AlternatingForm> = amb_f
            .iter()
            .map(|r| {
                let mut f = AlternatingForm::zero(n, 2);
                for mi in MultiIndex::enumerate(n, 2) {
                    let idx = mi.indices();
                    let va: Vec<f64> = (0..8).map(|row| jac[(row, idx[0])]).collect();
                    let vb: Vec<f64> = (0..8).map(|row| jac[(row, idx[1])]).collect();
                    let mut s = 0.0;
                    for i in 0..8 {
                        for j in 0..8 {
                            s += va[i] * r[(i, j)] * vb[j];
                        }
                    }
                    if s != 0.0 {
                        f.set(mi, s);
                    }
                }
                f
            })
            .collect();
        let eta_chart: Vec<AlternatingForm> = amb_f
            .iter()
            .map(|r| {
                let zeta: Vec<f64> = (0..8)
                    .map(|row| (0..8).map(|c| r[(row, c)] * amb[c]).sum())
                    .collect();
                let comps: Vec<f64> = (0..n)
                    .map(|bdir| (0..8).map(|row| jac[(row, bdir)] * zeta[row]).sum())
                    .collect();
                AlternatingForm::one_form(n, &comps)
            })
            .collect();
        // Orthonormal frame, coordinate order.
        let frame = g.orthonormal_frame();
        // sum_r (e_r . F_i) ^ (e_r . F_j) = -2 F_k - eta_i ^ eta_j.
        for (i, j, k) in [(0usize, 1usize, 2usize), (1, 2, 0), (2, 0, 1)] {
            let mut acc = AlternatingForm::zero(n, 2);
            for r in 0..n {
                let e: Vec<f64> = (0..n).map(|row| frame[(row, r)]).collect();
                let ci = contract(&e, &f_chart[i]).unwrap();
                let cj = contract(&e, &f_chart[j]).unwrap();
                acc = acc.add(&wedge(&ci, &cj).unwrap());
            }
            let expected = f_chart[k]
                .scale(-2.0)
                .sub(&wedge(&eta_chart[i], &eta_chart[j]).unwrap());
            let diff = acc.sub(&expected);
            let scale = form_inner(&expected, &expected, &g).unwrap().sqrt();
            worst =
                worst.max(form_inner(&diff, &diff, &g).unwrap().max(0.0).sqrt() / scale.max(1.0));
        }
        // Adapted frame: project the Reeb directions out of the coordinate
        // fields, Gram-Schmidt the horizontal block, append the Reeb frame.
        let zetas_chart: Vec<Vec<f64>> = eta_chart
            .iter()
            .map(|e| crate::multilinear::sharp(e, &g).unwrap())
            .collect();
        let mut horiz: Vec<Vec<f64>> = Vec::new();
        for c in 0..n {
            let mut v = vec![0.0; n];
            v[c] = 1.0;
            for z in &zetas_chart {
                let ip = g.inner_vec(&v, z);
                for (vi, zi) in v.iter_mut().zip(z.iter()) {
                    *vi -= ip * zi;
                }
            }
            for h in &horiz {
                let ip = g.inner_vec(&v, h);
                for (vi, hi) in v.iter_mut().zip(h.iter()) {
                    *vi -= ip * hi;
                }
            }
            let norm = g.inner_vec(&v, &v).sqrt();
            if norm > 1e-6 {
                for vi in v.iter_mut() {
                    *vi /= norm;
                }
                horiz.push(v);
                if horiz.len() == n - 3 {
                    break;
                }
            }
        }
        // <nabla_{e_i} zeta_j, e_i> = 0 for horizontal e_i: evaluate through
        // the covariant derivative of the eta_j fields.
        let eta_field_of = |slot: usize| -> FormField {
            let r = amb_f[slot].clone();
            let mref = m.clone();
            let fdc = *fd;
            FormField::new(1, move |q: &ChartPoint| {
                let jacq = mref.jacobian(q, &fdc).unwrap();
                let ambq = mref.embed(q).unwrap();
                let zeta: Vec<f64> = (0..8)
                    .map(|row| (0..8).map(|c| r[(row, c)] * ambq[c]).sum())
                    .collect();
                let comps: Vec<f64> = (0..mref.dim)
                    .map(|bdir| (0..8).map(|row| jacq[(row, bdir)] * zeta[row]).sum())
                    .collect();
                AlternatingForm::one_form(mref.dim, &comps)
            })
        };
        for slot in 0..3 {
            let ef = eta_field_of(slot);
            let nabla_eta = m.covariant_derivative(&ef, p, fd, fd.h1);
            for h in &horiz {
                // (nabla_X eta_j)(X) with X the horizontal frame vector.
                let mut val = 0.0;
                for (dir, w) in h.iter().enumerate() {
                    if *w == 0.0 {
                        continue;
                    }
                    val += w * nabla_eta[dir].eval_on(&[h.as_slice()]);
                }
                worst = worst.max(val.abs());
            }
        }
        // eta_j(nabla_{zeta_j} e_i) = 0 for the adapted horizontal frame:
        // differentiate the (deterministic) frame construction along the
        // Reeb directions and pair with eta_j.
        let frame_at = |u: &[f64]| -> Vec<Vec<f64>> {
            let q = ChartPoint::new(p.chart, u.to_vec());
            let gq = m.metric_at(&q, fd).unwrap();
            let jacq = m.jacobian(&q, fd).unwrap();
            let ambq = m.embed(&q).unwrap();
            let zq: Vec<Vec<f64>> = amb_f
                .iter()
                .map(|r| {
                    let zeta: Vec<f64> = (0..8)
                        .map(|row| (0..8).map(|c| r[(row, c)] * ambq[c]).sum())
                        .collect();
                    let comps: Vec<f64> = (0..n)
                        .map(|bdir| (0..8).map(|row| jacq[(row, bdir)] * zeta[row]).sum())
                        .collect();
                    let form = AlternatingForm::one_form(n, &comps);
                    crate::multilinear::sharp(&form, &gq).unwrap()
                })
                .collect();
            let mut hz: Vec<Vec<f64>> = Vec::new();
            for c in 0..n {
                let mut v = vec![0.0; n];
                v[c] = 1.0;
                for z in &zq {
                    let ip = gq.inner_vec(&v, z);
                    for (vi, zi) in v.iter_mut().zip(z.iter()) {
                        *vi -= ip * zi;
                    }
                }
                for hvec in &hz {
                    let ip = gq.inner_vec(&v, hvec);
                    for (vi, hi) in v.iter_mut().zip(hvec.iter()) {
                        *vi -= ip * hi;
                    }
                }
                let norm = gq.inner_vec(&v, &v).sqrt();
                if norm > 1e-6 {
                    for vi in v.iter_mut() {
                        *vi /= norm;
                    }
                    hz.push(v);
                    if hz.len() == n - 3 {
                        break;
                    }
                }
            }
            hz
        };
        let conn = m.christoffel_at(p, fd);
        for slot in 0..3 {
            let zj = &zetas_chart[slot];
            for i in 0..(n - 3) {
                // nabla_{zeta_j} e_i = zeta^d (d_d e_i^c + Gamma^c_{d b} e_i^b) d_c
                let mut deriv = vec![0.0; n];
                for (d, w) in zj.iter().enumerate() {
                    if w.abs() < 1e-14 {
                        continue;
                    }
                    let de = partial(
                        |u: &[f64]| frame_at(u)[i].clone(),
                        &p.u,
                        d,
                        fd.h2,
                        fd.richardson,
                    );
                    for c in 0..n {
                        let mut v = de[c];
                        for b in 0..n {
                            v += conn.get(d, b, c) * horiz[i][b];
                        }
                        deriv[c] += w * v;
                    }
                }
                let val = eta_chart[slot].eval_on(&[deriv.as_slice()]);
                worst = worst.max(val.abs());
            }
        }
        // Covariant derivative of the Reeb one-forms: each structure is
        // a-Sasakian, so nabla_X zeta_i = -a phi_i X, equivalently
        // (nabla_X eta_i)(Y) = a F_i(X, Y) for all three i simultaneously.
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for slot in 0..3 {
            let ef = eta_field_of(slot);
            let nabla_eta = m.covariant_derivative(&ef, p, fd, fd.h1);
            for xdir in 0..n {
                for ydir in 0..n {
                    let mut y = vec![0.0; n];
                    y[ydir] = 1.0;
                    let meas = nabla_eta[xdir].eval_on(&[&y[..]]);
                    let mut x = vec![0.0; n];
                    x[xdir] = 1.0;
                    xs.push(f_chart[slot].eval_on(&[&x[..], &y[..]]));
                    ys.push(meas);
                }
            }
        }
        let (a_fit, resid) = fit_scalar(&xs, &ys);
        worst = worst.max(resid).max((a_fit - a).abs());
        fitted.insert("nabla-zeta-constant".into(), a_fit);
    }
    worst
}

/// A fully resolved run request.
pub struct RunPlan {
    pub model_ids: Vec<String>,
    pub fields: Option<Vec<String>>,
    pub checks: Option<Vec<String>>,
    pub config: CheckConfig,
    pub regression: bool,
    pub oracle_points: usize,
}

impl RunPlan {
    pub fn regression_all(config: CheckConfig) -> Self {
        RunPlan {
            model_ids: crate::models::list_ids()
                .iter()
                .map(|s| s.to_string())
                .collect(),
            fields: None,
            checks: None,
            config,
            regression: true,
            oracle_points: 2,
        }
    }
}

fn wanted(filter: &Option<Vec<String>>, name: &str) -> bool {
    match filter {
        None => true,
        Some(list) => list.iter().any(|x| x.eq_ignore_ascii_case(name)),
    }
}

/// Executes a plan: oracle gate first, then either the per-entry expected
/// ledger (regression) or the requested checks (survey).
pub fn execute(plan: &RunPlan) -> RunReport {
    let started = std::time::Instant::now();
    let mut oracle_reports: Vec<OracleReport> = Vec::new();
    let entries: Vec<CatalogEntry> = plan
        .model_ids
        .iter()
        .map(|id| crate::models::build(id).unwrap_or_else(|e| panic!("{e}")))
        .collect();
    for entry in &entries {
        oracle_reports.extend(oracle_gate(entry, plan.oracle_points, plan.config.seed));
    }
    let oracle_ok = oracle_reports.iter().all(|r| r.pass);

    let mut tasks: Vec<(usize, String, String, Option<ExpectedEigen>, Option<bool>)> = Vec::new();
    for (ei, entry) in entries.iter().enumerate() {
        if plan.regression {
            for row in &entry.expected {
                if !wanted(&plan.fields, &row.field) || !wanted(&plan.checks, &row.check) {
                    continue;
                }
                tasks.push((
                    ei,
                    row.field.clone(),
                    row.check.clone(),
                    row.eigen.clone(),
                    Some(row.must_pass),
                ));
            }
        } else {
            let checks: Vec<String> = plan
                .checks
                .clone()
                .unwrap_or_else(|| vec!["harmonic-section".into(), "harmonic-map".into()]);
            for (fname, _) in &entry.fields {
                if !wanted(&plan.fields, fname) {
                    continue;
                }
                for c in &checks {
                    if c == "pair-thm"
                        && !entry
                            .pairs
                            .iter()
                            .any(|p| p.lower.eq_ignore_ascii_case(fname))
                    {
                        continue;
                    }
                    if (c == "lck-defect" && entry.complex_structure.is_none())
                        || (c == "spin7-defect" && entry.family != Family::LcpSpin7)
                    {
                        continue;
                    }
                    let eigen = entry
                        .expected
                        .iter()
                        .find(|r| {
                            r.field.eq_ignore_ascii_case(fname) && r.check == "laplacian-eigen"
                        })
                        .and_then(|r| r.eigen.clone());
                    tasks.push((ei, fname.clone(), c.clone(), eigen, None));
                }
            }
        }
    }

    let results: Vec<(usize, String, CheckRecord)> = tasks
        .par_iter()
        .map(|(ei, field, check, eigen, must_pass)| {
            let entry = &entries[*ei];
            let mut rec = run_check(entry, field, check, &plan.config, eigen.as_ref());
            if let Some(mp) = must_pass {
                let expected = Verdict::from_bool(*mp);
                rec.ok = rec.verdict == expected;
                rec.expected = Some(expected);
            }
            (*ei, field.clone(), rec)
        })
        .collect();

    // Group into per-(model, field) reports preserving task order.
    let mut runs: Vec<FieldReport> = Vec::new();
    for (ei, field, rec) in results {
        let model = entries[ei].id.clone();
        match runs
            .iter_mut()
            .find(|r| r.model == model && r.field == field)
        {
            Some(r) => r.checks.push(rec),
            None => runs.push(FieldReport {
                model,
                field,
                checks: vec![rec],
            }),
        }
    }
    let total: usize = runs.iter().map(|r| r.checks.len()).sum();
    let ok: usize = runs
        .iter()
        .map(|r| r.checks.iter().filter(|c| c.ok).count())
        .sum();
    RunReport {
        schema: SCHEMA.to_string(),
        timestamp: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        seed: plan.config.seed,
        points: plan.config.sample_count,
        regression: plan.regression,
        oracle_gate: oracle_reports,
        oracle_ok,
        runs,
        summary: Summary {
            total,
            ok,
            failed: total - ok,
        },
        wall_ms: started.elapsed().as_millis() as u64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    fn quick_cfg() -> CheckConfig {
        CheckConfig {
            sample_count: 3,
            seed: 7,
            ..CheckConfig::default()
        }
    }

    #[test]
    fn check_names_are_stable() {
        let names: Vec<&str> = list_checks().iter().map(|(n, _)| *n).collect();
        assert!(names.contains(&"pair-thm"));
        assert!(names.contains(&"harmonic-section"));
        assert!(known_check("lcp"));
        assert!(!known_check("nonsense"));
    }

    #[test]
    fn harmonic_section_check_on_sasakian() {
        let entry = models::build("sasakian-s5").unwrap();
        let rec = run_check(
            &entry,
            "eta-wedge-F",
            "harmonic-section",
            &quick_cfg(),
            None,
        );
        assert_eq!(rec.verdict, Verdict::Pass, "{rec:?}");
    }

    #[test]
    fn negative_control_fails_harmonic_section() {
        let entry = models::build("hopf-lck:3").unwrap();
        let rec = run_check(&entry, "omega", "harmonic-section", &quick_cfg(), None);
        assert_eq!(rec.verdict, Verdict::Fail);
        // Bounded away: at least ten times the tolerance.
        assert!(rec.max_residual > 10.0 * rec.tolerance);
    }

    #[test]
    fn survey_execution_produces_report() {
        let plan = RunPlan {
            model_ids: vec!["round-sphere:2".into()],
            fields: None,
            checks: Some(vec!["harmonic-section".into()]),
            config: quick_cfg(),
            regression: false,
            oracle_points: 1,
        };
        let report = execute(&plan);
        assert!(report.oracle_ok, "{:#?}", report.oracle_gate);
        assert!(!report.runs.is_empty());
        let json = report.to_json();
        assert!(json.contains("\"schema\": \"harmonia/1\""));
    }
}
