//! Independent numerical cross-checks that gate the main analysis path:
//! a parallel-transport route for covariant derivatives, a Gauss-equation /
//! conformal-closed-form route for curvature, and Monte-Carlo integration on
//! round spheres. The oracle stencils are second order with their own step
//! sizes, so agreement with the fourth-order main path is evidence of
//! correctness rather than shared truncation bias.

use serde::Serialize;

use crate::manifold::{ambient_to_chart, ChartPoint, Flavor, FormField, ModelManifold};
use crate::models::{sphere_chart_point, CatalogEntry};
use crate::multilinear::MultiIndex;
use crate::numerics::{pairwise_sum, FdScheme};
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Outcome of one two-route comparison.
#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub quantity: String,
    pub route_a: f64,
    pub route_b: f64,
    pub discrepancy: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl OracleReport {
    fn new(quantity: &str, route_a: f64, route_b: f64, discrepancy: f64, tolerance: f64) -> Self {
        OracleReport {
            quantity: quantity.to_string(),
            route_a,
            route_b,
            discrepancy,
            tolerance,
            pass: discrepancy < tolerance,
        }
    }
}

/// Parallel transport of an ambient tangent vector along a chart curve by
/// repeated projection onto the tangent spaces of a hypersurface.
fn transport_projected(
    m: &ModelManifold,
    p: &ChartPoint,
    dir: usize,
    t_final: f64,
    v0: &[f64],
    steps: usize,
) -> Vec<f64> {
    let normal = match &m.flavor {
        Flavor::Embedded { normal, .. } => normal.clone(),
        Flavor::Direct { .. } => unreachable!("transport requires an embedding"),
    };
    let mut v = v0.to_vec();
    for k in 1..=steps {
        let mut u = p.u.clone();
        u[dir] += t_final * (k as f64) / (steps as f64);
        let q = m.embed(&ChartPoint::new(p.chart, u)).expect("embedded");
        let nu = normal(&q);
        let nn: f64 = nu.iter().map(|x| x * x).sum();
        let dot: f64 = v.iter().zip(nu.iter()).map(|(a, b)| a * b).sum();
        for (vi, ni) in v.iter_mut().zip(nu.iter()) {
            *vi -= dot / nn * ni;
        }
    }
    v
}

/// Compares the Christoffel-route covariant derivative of a form field
/// against a transport difference quotient, embedded models only.
pub fn covariant_oracle(
    m: &ModelManifold,
    sigma: &FormField,
    p: &ChartPoint,
    fd_main: &FdScheme,
) -> OracleReport {
    let fd_o = FdScheme::oracle(m.scale);
    let n = m.dim;
    let route_a = m.covariant_derivative(sigma, p, fd_main, fd_main.h1);
    let jac0 = m.jacobian(p, &fd_o).expect("embedded");
    let cols0: Vec<Vec<f64>> = (0..n)
        .map(|b| (0..jac0.nrows()).map(|r| jac0[(r, b)]).collect())
        .collect();
    let h = fd_o.h1;
    let steps = 8;
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for a in 0..n {
        let value_at = |t: f64| -> Vec<f64> {
            // sigma at the shifted point, evaluated on transported vectors.
            let mut u = p.u.clone();
            u[a] += t;
            let q = ChartPoint::new(p.chart, u);
            let jac = m.jacobian(&q, &fd_o).expect("embedded");
            let sig = sigma.eval(&q);
            let transported: Vec<Vec<f64>> = cols0
                .iter()
                .map(|v| {
                    let w = transport_projected(m, p, a, t, v, steps);
                    ambient_to_chart(&jac, &w)
                })
                .collect();
            MultiIndex::enumerate(n, sigma.degree)
                .iter()
                .map(|mi| {
                    let picked: Vec<&[f64]> = mi
                        .indices()
                        .iter()
                        .map(|&b| transported[b].as_slice())
                        .collect();
                    sig.eval_on(&picked)
                })
                .collect()
        };
        let plus = value_at(h);
        let minus = value_at(-h);
        for (k, mi) in MultiIndex::enumerate(n, sigma.degree).iter().enumerate() {
            let route_b = (plus[k] - minus[k]) / (2.0 * h);
            let va = route_a[a].get(*mi);
            worst = worst.max((va - route_b).abs());
            scale = scale.max(va.abs()).max(route_b.abs());
        }
    }
    let tol = 1e-4 * scale.max(1.0);
    OracleReport::new(
        &format!("covariant-derivative[{}]", m.name),
        scale,
        scale - worst,
        worst,
        tol,
    )
}

/// Compares the Christoffel-route curvature against the Gauss equation
/// (embedded hypersurfaces) or the conformal closed form (direct conformal
/// metrics). Relative tolerance 1e-3.
pub fn curvature_oracle(
    entry: &CatalogEntry,
    p: &ChartPoint,
    fd_main: &FdScheme,
) -> Option<OracleReport> {
    let m = &entry.manifold;
    let n = m.dim;
    let curv = m.curvature_at(p, fd_main);
    let fd_o = FdScheme::oracle(m.scale);
    let lowered_b: Vec<f64> = match (&m.flavor, &entry.conformal) {
        (Flavor::Embedded { param, normal, .. }, _) => {
            // Scalar second fundamental form II_ab = <d_a d_b f, nu>.
            let nu = normal(&param(p.chart, &p.u));
            let mut ii = DMatrix::<f64>::zeros(n, n);
            let h = fd_o.h2;
            for a in 0..n {
                for b in a..n {
                    let f_at = |da: f64, db: f64| -> Vec<f64> {
                        let mut u = p.u.clone();
                        u[a] += da;
                        u[b] += db;
                        param(p.chart, &u)
                    };
                    let second: Vec<f64> = if a == b {
                        let fp = f_at(h, 0.0);
                        let f0 = f_at(0.0, 0.0);
                        let fm = f_at(-h, 0.0);
                        (0..fp.len())
                            .map(|r| (fp[r] - 2.0 * f0[r] + fm[r]) / (h * h))
                            .collect()
                    } else {
                        let fpp = f_at(h, h);
                        let fpm = f_at(h, -h);
                        let fmp = f_at(-h, h);
                        let fmm = f_at(-h, -h);
                        (0..fpp.len())
                            .map(|r| (fpp[r] - fpm[r] - fmp[r] + fmm[r]) / (4.0 * h * h))
                            .collect()
                    };
                    let v: f64 = second.iter().zip(nu.iter()).map(|(x, y)| x * y).sum();
                    ii[(a, b)] = v;
                    ii[(b, a)] = v;
                }
            }
            let mut out = vec![0.0; n * n * n * n];
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            out[((i * n + j) * n + k) * n + l] =
                                ii[(i, k)] * ii[(j, l)] - ii[(i, l)] * ii[(j, k)];
                        }
                    }
                }
            }
            out
        }
        (Flavor::Direct { .. }, Some(conf)) => {
            // R = e^{2 phi} (Q o/ delta) with
            // Q = -Hess phi + dphi (x) dphi - (1/2)|dphi|^2 delta.
            let grad = (conf.grad)(&p.u);
            let hess = (conf.hess)(&p.u);
            let e2 = (2.0 * (conf.phi)(&p.u)).exp();
            let g2: f64 = grad.iter().map(|x| x * x).sum();
            let q = |i: usize, j: usize| -> f64 {
                -hess[(i, j)] + grad[i] * grad[j] - 0.5 * g2 * if i == j { 1.0 } else { 0.0 }
            };
            let d = |i: usize, j: usize| -> f64 {
                if i == j {
                    1.0
                } else {
                    0.0
                }
            };
            let mut out = vec![0.0; n * n * n * n];
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            out[((i * n + j) * n + k) * n + l] = e2
                                * (q(i, k) * d(j, l) + q(j, l) * d(i, k)
                                    - q(i, l) * d(j, k)
                                    - q(j, k) * d(i, l));
                        }
                    }
                }
            }
            out
        }
        _ => return None,
    };
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let a = curv.lowered(i, j, k, l);
                    let b = lowered_b[((i * n + j) * n + k) * n + l];
                    worst = worst.max((a - b).abs());
                    scale = scale.max(a.abs());
                }
            }
        }
    }
    let tol = 1e-3 * scale.max(1.0);
    Some(OracleReport::new(
        &format!("curvature[{}]", entry.id),
        scale,
        scale - worst,
        worst,
        tol,
    ))
}

/// Monte-Carlo estimate of an integral over the round unit n-sphere, with
/// standard error; sampling through ambient Gaussians and per-call seeded
/// counter streams.
pub struct McEstimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: usize,
}

/// Surface measure of the unit n-sphere.
pub fn sphere_volume(n: usize) -> f64 {
    // 2 pi^{(n+1)/2} / Gamma((n+1)/2) via the half-integer recursion.
    let half = (n + 1) as f64 / 2.0;
    let mut gamma = if (n + 1) % 2 == 0 {
        1.0 // Gamma at an integer argument, built below
    } else {
        std::f64::consts::PI.sqrt()
    };
    let mut x = if (n + 1) % 2 == 0 { 1.0 } else { 0.5 };
    while x < half - 0.25 {
        gamma *= x;
        x += 1.0;
    }
    2.0 * std::f64::consts::PI.powf(half) / gamma
}

pub fn mc_integral(
    n: usize,
    f: impl Fn(&ChartPoint) -> f64 + Sync,
    samples: usize,
    seed: u64,
) -> McEstimate {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(samples);
    for _ in 0..samples {
        // Gaussian via Box-Muller on uniform draws.
        let mut v = Vec::with_capacity(n + 1);
        while v.len() < n + 1 {
            let u1: f64 = rng.gen_range(1e-12..1.0);
            let u2: f64 = rng.gen_range(0.0..1.0);
            let r = (-2.0 * u1.ln()).sqrt();
            v.push(r * (2.0 * std::f64::consts::PI * u2).cos());
            if v.len() < n + 1 {
                v.push(r * (2.0 * std::f64::consts::PI * u2).sin());
            }
        }
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let p: Vec<f64> = v.iter().map(|x| x / norm).collect();
        values.push(f(&sphere_chart_point(n, &p)));
    }
    let vol = sphere_volume(n);
    let mean = pairwise_sum(&values) / samples as f64;
    let var = pairwise_sum(
        &values
            .iter()
            .map(|v| (v - mean) * (v - mean))
            .collect::<Vec<_>>(),
    ) / (samples.saturating_sub(1)) as f64;
    McEstimate {
        value: vol * mean,
        stderr: vol * (var / samples as f64).sqrt(),
        samples,
    }
}

/// Runs the full oracle gate for one catalog entry: covariant and curvature
/// two-route agreement at a few points; embedded models get both, conformal
/// direct models get the curvature route only.
pub fn oracle_gate(entry: &CatalogEntry, points: usize, seed: u64) -> Vec<OracleReport> {
    let fd = entry.fd();
    let pts = entry.manifold.sample_points(points.max(1), seed);
    let mut out = Vec::new();
    for p in &pts {
        if entry.manifold.is_embedded() {
            let field = entry
                .fields
                .iter()
                .find(|(name, _)| name != "vol")
                .or_else(|| entry.fields.first())
                .map(|(_, f)| f)
                .expect("entry has fields");
            out.push(covariant_oracle(&entry.manifold, field, p, &fd));
        }
        if let Some(rep) = curvature_oracle(entry, p, &fd) {
            out.push(rep);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    #[test]
    fn sphere_volumes_match_closed_forms() {
        assert!((sphere_volume(1) - 2.0 * std::f64::consts::PI).abs() < 1e-12);
        assert!((sphere_volume(2) - 4.0 * std::f64::consts::PI).abs() < 1e-12);
        // Vol(S^6) = 16 pi^3 / 15
        assert!((sphere_volume(6) - 16.0 * std::f64::consts::PI.powi(3) / 15.0).abs() < 1e-10);
    }

    #[test]
    fn mc_area_of_s2_within_three_sigma() {
        let est = mc_integral(2, |_p| 1.0, 4000, 1234);
        // f = 1 has zero variance, so the estimate is exact.
        assert!((est.value - 4.0 * std::f64::consts::PI).abs() < 1e-9);
        // An ambient-coordinate integrand: int (x_0^2 + 1) = 4 pi (1/3 + 1).
        let sphere = models::round_sphere(2);
        let est = mc_integral(
            2,
            |p| {
                let x = sphere.embed(p).unwrap();
                x[0] * x[0] + 1.0
            },
            4000,
            99,
        );
        let diff = (est.value - 4.0 * std::f64::consts::PI * (1.0 + 1.0 / 3.0)).abs();
        assert!(
            diff < 3.0 * est.stderr,
            "diff {diff}, 3s {}",
            3.0 * est.stderr
        );
    }

    #[test]
    fn covariant_oracle_on_round_s2() {
        let entry = models::build("round-sphere:2").unwrap();
        let fd = entry.fd();
        let field = entry.field("rot-dual").unwrap();
        let p = entry.manifold.sample_points(1, 7).pop().unwrap();
        let rep = covariant_oracle(&entry.manifold, field, &p, &fd);
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn curvature_oracle_on_sphere_and_cone() {
        for id in ["round-sphere:3", "lcp-spin7"] {
            let entry = models::build(id).unwrap();
            let fd = entry.fd();
            let p = entry.manifold.sample_points(1, 8).pop().unwrap();
            let rep = curvature_oracle(&entry, &p, &fd).expect("supported geometry");
            assert!(rep.pass, "{id}: {rep:?}");
        }
    }

    #[test]
    fn flat_model_oracle_trivial() {
        // Kenmotsu warped product has no oracle route; gate returns curvature
        // reports only where supported.
        let entry = models::build("kenmotsu:1").unwrap();
        let reports = oracle_gate(&entry, 1, 5);
        assert!(reports.is_empty());
    }
}
