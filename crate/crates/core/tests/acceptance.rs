//! Acceptance suite: one test per criterion, printing one line per item.
//!
//! Criteria 2 and 3 consume a shared 20-point regression sweep over the
//! whole catalog; the numerical oracle gate is evaluated before either is
//! allowed to run.

use std::sync::OnceLock;

use harmonia_core::checks::{execute, RunPlan};
use harmonia_core::gstructures::{
    contact_composites, g2_forms, induced_metric_spin7, kaehler_form, quaternionic_four_form,
    spin7_form, spin7_perp_basis, su3_forms, CompositeKind, Spin7Splitter,
};
use harmonia_core::harmonic::{
    bending_density, curvature_pairing, curvature_pairing_div_form, grad_norm_sq_at, ki_spectrum,
    rough_laplacian, CheckConfig, PointAnalysis,
};
use harmonia_core::manifold::ChartPoint;
use harmonia_core::models;
use harmonia_core::multilinear::{
    contract, form_inner, hodge_star, wedge, AlternatingForm, MultiIndex, PointMetric,
};
use harmonia_core::numerics::partial;
use harmonia_core::oracle::{mc_integral, oracle_gate, sphere_volume};
use harmonia_core::report::RunReport;

const TOL_ALG: f64 = 1e-12;

fn line(criterion: &str, item: &str, pass: bool, detail: String) -> bool {
    println!(
        "[{criterion}] {:<58} {} {detail}",
        item,
        if pass { "pass" } else { "FAIL" }
    );
    pass
}

fn shared_report() -> &'static RunReport {
    static REPORT: OnceLock<RunReport> = OnceLock::new();
    REPORT.get_or_init(|| {
        let cfg = CheckConfig {
            sample_count: 20,
            seed: 42,
            ..CheckConfig::default()
        };
        execute(&RunPlan::regression_all(cfg))
    })
}

fn oracle_gate_passed() -> bool {
    static GATE: OnceLock<bool> = OnceLock::new();
    *GATE.get_or_init(|| {
        let mut all = true;
        for id in [
            "round-sphere:2",
            "nk-s6",
            "g2-s7",
            "sasakian-s5",
            "3sasakian-s7",
        ] {
            let entry = models::build(id).unwrap();
            for rep in oracle_gate(&entry, 2, 42) {
                all &= line(
                    "oracle-gate",
                    &rep.quantity,
                    rep.pass,
                    format!(
                        "discrepancy {:.3e} (tol {:.1e})",
                        rep.discrepancy, rep.tolerance
                    ),
                );
            }
        }
        all
    })
}

#[test]
fn criterion_1_algebraic_identities() {
    let mut ok = true;
    let e6 = PointMetric::euclidean(6);
    let e7 = PointMetric::euclidean(7);
    let e8 = PointMetric::euclidean(8);
    let norm2 = |f: &AlternatingForm, m: &PointMetric| form_inner(f, f, m).unwrap();

    let (omega, psi_p, psi_m) = su3_forms();
    ok &= line(
        "criterion-1",
        "|omega|^2 = 6",
        (norm2(&omega, &e6) - 6.0).abs() < TOL_ALG,
        format!("= {}", norm2(&omega, &e6)),
    );
    ok &= line(
        "criterion-1",
        "|psi+|^2 = 24",
        (norm2(&psi_p, &e6) - 24.0).abs() < TOL_ALG,
        format!("= {}", norm2(&psi_p, &e6)),
    );
    ok &= line(
        "criterion-1",
        "|psi-|^2 = 24",
        (norm2(&psi_m, &e6) - 24.0).abs() < TOL_ALG,
        format!("= {}", norm2(&psi_m, &e6)),
    );
    let ww = wedge(&omega, &omega).unwrap();
    let ww2 = norm2(&ww, &e6);
    // Stated value; the full-sum convention that reproduces every other
    // norm here yields (2r)! r! n!/(n-r)! = 288. See the decisions ledger.
    let stated_144 = (ww2 - 144.0).abs() < TOL_ALG;
    line(
        "criterion-1",
        "|omega ^ omega|^2 = 144 (stated)",
        stated_144,
        format!("= {ww2} (self-consistent value 288; see decisions ledger)"),
    );
    ok &= line(
        "criterion-1",
        "|omega ^ omega|^2 = (2r)! r! n!/(n-r)! = 288",
        (ww2 - 288.0).abs() < TOL_ALG,
        format!("= {ww2}"),
    );
    ok &= stated_144;

    let (phi, star_phi) = g2_forms();
    ok &= line(
        "criterion-1",
        "|phi|^2 = 42",
        (norm2(&phi, &e7) - 42.0).abs() < TOL_ALG,
        format!("= {}", norm2(&phi, &e7)),
    );
    ok &= line(
        "criterion-1",
        "|*phi|^2 = 168",
        (norm2(&star_phi, &e7) - 168.0).abs() < TOL_ALG,
        format!("= {}", norm2(&star_phi, &e7)),
    );
    ok &= line(
        "criterion-1",
        "hodge(phi) = *phi coefficientwise",
        hodge_star(&phi, &e7)
            .unwrap()
            .sub(&star_phi)
            .is_zero_within(TOL_ALG),
        String::new(),
    );

    for sigma in [1i8, -1] {
        let cayley = spin7_form(sigma).unwrap();
        let sq = wedge(&cayley, &cayley).unwrap();
        let vol = MultiIndex::new(&[0, 1, 2, 3, 4, 5, 6, 7], 8).unwrap();
        ok &= line(
            "criterion-1",
            &format!("Phi ^ Phi = 14 sigma vol (sigma = {sigma:+})"),
            (sq.get(vol) - 14.0 * sigma as f64).abs() < TOL_ALG && sq.nnz() == 1,
            format!("coefficient {}", sq.get(vol)),
        );
        let splitter = Spin7Splitter::new(&cayley).unwrap();
        ok &= line(
            "criterion-1",
            &format!("spin(7) split dims (21, 7), eigenvalues {{1, -3}} (sigma = {sigma:+})"),
            splitter.eigenspace_dims() == (21, 7),
            String::new(),
        );
        let mut beta_ok = true;
        for beta in spin7_perp_basis(sigma).unwrap() {
            let s = splitter.split(&beta);
            beta_ok &= s.part21.is_zero_within(1e-9) && s.part7.sub(&beta).is_zero_within(1e-9);
        }
        ok &= line(
            "criterion-1",
            &format!("beta_i span the eigenvalue -3 subspace (sigma = {sigma:+})"),
            beta_ok,
            String::new(),
        );
        let induced = induced_metric_spin7(&cayley).unwrap();
        let mut delta_ok = true;
        for a in 0..8 {
            for b in 0..8 {
                let expect = if a == b { 1.0 } else { 0.0 };
                delta_ok &= (induced.g()[(a, b)] - expect).abs() < TOL_ALG;
            }
        }
        ok &= line(
            "criterion-1",
            &format!("induced Spin(7) metric = delta (sigma = {sigma:+})"),
            delta_ok,
            String::new(),
        );
    }
    // <X . Phi, Y . Phi> = 42 <X, Y> on a fixed deterministic sample.
    let cayley = spin7_form(1).unwrap();
    let mut pairing_ok = true;
    for t in 0..20 {
        let x: Vec<f64> = (0..8)
            .map(|i| ((i * 7 + t * 3) as f64 * 0.61).sin())
            .collect();
        let y: Vec<f64> = (0..8)
            .map(|i| ((i * 5 + t * 11) as f64 * 0.37).cos())
            .collect();
        let cx = contract(&x, &cayley).unwrap();
        let cy = contract(&y, &cayley).unwrap();
        let lhs = form_inner(&cx, &cy, &e8).unwrap();
        let dot: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        pairing_ok &= (lhs - 42.0 * dot).abs() < 1e-10;
    }
    ok &= line(
        "criterion-1",
        "<X . Phi, Y . Phi> = 42 <X, Y>",
        pairing_ok,
        String::new(),
    );

    // Composite norm instantiations.
    let ef = contact_composites(2, CompositeKind::EtaWedgeFPower, 1).unwrap();
    let m5 = PointMetric::euclidean(5);
    ok &= line(
        "criterion-1",
        "|eta ^ F|^2 = 12 (n = 2, r = 1)",
        (norm2(&ef, &m5) - 12.0).abs() < TOL_ALG,
        format!("= {}", norm2(&ef, &m5)),
    );
    let f1 = contact_composites(2, CompositeKind::FPower, 0).unwrap();
    ok &= line(
        "criterion-1",
        "|F|^2 = 4 (n = 2, r = 0)",
        (norm2(&f1, &m5) - 4.0).abs() < TOL_ALG,
        format!("= {}", norm2(&f1, &m5)),
    );
    let kf = kaehler_form(3).unwrap();
    ok &= line(
        "criterion-1",
        "kaehler |omega|^2 = 2n",
        (norm2(&kf, &e6) - 6.0).abs() < TOL_ALG,
        String::new(),
    );
    let q = quaternionic_four_form(2).unwrap();
    ok &= line(
        "criterion-1",
        "|Omega|^2 frozen regression value 2880",
        (norm2(&q, &e8) - 2880.0).abs() < TOL_ALG,
        format!("= {}", norm2(&q, &e8)),
    );

    assert!(
        ok,
        "criterion 1 has failing items; the stated |omega ^ omega|^2 = 144 \
         is inconsistent with the full-sum fibre metric (see decisions ledger)"
    );
}

#[test]
fn criterion_2_eigen_equations() {
    assert!(
        oracle_gate_passed(),
        "oracle gate must pass before criterion 2"
    );
    let report = shared_report();
    let mut ok = true;
    let mut count = 0;
    for run in &report.runs {
        for check in &run.checks {
            if check.name != "laplacian-eigen" {
                continue;
            }
            count += 1;
            ok &= line(
                "criterion-2",
                &format!("{} / {} eigen-equation", run.model, run.field),
                check.ok,
                format!(
                    "eig {:.6} expected {:.6} resid {:.2e} @ {} pts",
                    check.fitted.get("eigenvalue").copied().unwrap_or(f64::NAN),
                    check.fitted.get("expected").copied().unwrap_or(f64::NAN),
                    check.max_residual,
                    check.points
                ),
            );
        }
    }
    // Einstein-constant consistency on the G2 sphere rides on the structure
    // check (rho/(dim-1) = k^2/16).
    for run in &report.runs {
        if run.model == "g2-s7" {
            for check in &run.checks {
                if check.name == "structure" {
                    count += 1;
                    ok &= line(
                        "criterion-2",
                        "g2-s7 Einstein constant vs first-order constant",
                        check.ok,
                        format!("resid {:.2e}", check.max_residual),
                    );
                }
            }
        }
    }
    assert!(count >= 30, "expected a full eigen sweep, saw {count} rows");
    assert!(ok, "criterion 2 failed");
}

#[test]
fn criterion_3_harmonic_map_verdicts() {
    assert!(
        oracle_gate_passed(),
        "oracle gate must pass before criterion 3"
    );
    let report = shared_report();
    let mut ok = true;
    let mut negatives = 0;
    for run in &report.runs {
        for check in &run.checks {
            if check.name != "harmonic-map" && check.name != "harmonic-section" {
                continue;
            }
            let is_negative = check.expected == Some(harmonia_core::report::Verdict::Fail);
            if is_negative {
                negatives += 1;
            }
            ok &= line(
                "criterion-3",
                &format!(
                    "{} / {} {}{}",
                    run.model,
                    run.field,
                    check.name,
                    if is_negative {
                        " (negative control)"
                    } else {
                        ""
                    }
                ),
                check.ok,
                format!("max {:.2e} tol {:.0e}", check.max_residual, check.tolerance),
            );
            if is_negative {
                // Controls must fail decisively, not marginally.
                ok &= line(
                    "criterion-3",
                    &format!("{} / {} control bounded away", run.model, run.field),
                    check.max_residual > 10.0 * check.tolerance,
                    format!("residual {:.2e}", check.max_residual),
                );
            }
        }
    }
    // The stated power-warping claim for F^r at r = 2 fails (documented
    // deviation): kenmotsu:2 F^2 is a harmonic section but not a harmonic map.
    let k2 = report
        .runs
        .iter()
        .find(|r| r.model == "kenmotsu:2" && r.field == "F^2")
        .expect("kenmotsu:2 F^2 present");
    let hm = k2
        .checks
        .iter()
        .find(|c| c.name == "harmonic-map")
        .expect("harmonic-map row");
    ok &= line(
        "criterion-3",
        "kenmotsu:2 / F^2 stated power-warping claim fails (see ledger)",
        hm.verdict == harmonia_core::report::Verdict::Fail
            && hm.expected == Some(harmonia_core::report::Verdict::Fail),
        format!("pairing residual {:.2e}", hm.max_residual),
    );
    assert!(negatives >= 4, "negative controls missing: {negatives}");
    assert!(ok, "criterion 3 failed");
}

#[test]
fn criterion_4_property_suites() {
    let mut ok = true;
    let report = shared_report();

    // Two-route equality and coupled-pair consistency from the shared sweep.
    for run in &report.runs {
        for check in &run.checks {
            if check.name == "two-route" || check.name == "pair-thm" {
                ok &= line(
                    "criterion-4",
                    &format!("{} / {} {}", run.model, run.field, check.name),
                    check.ok,
                    format!("max {:.2e}", check.max_residual),
                );
            }
        }
    }

    // Pointwise identities on a mixed bag of catalog fields: metric
    // compatibility, the transpose/divergence identity, (nabla sigma)^t
    // sigma = 0, and <nabla*nabla sigma, sigma> = |nabla sigma|^2.
    for (id, fname) in [
        ("sasakian-s5", "eta-wedge-F"),
        ("nk-s6", "omega"),
        ("kenmotsu:1", "F"),
        ("lcp-spin7", "cayley"),
    ] {
        let entry = models::build(id).unwrap();
        let fd = entry.fd();
        let m = &entry.manifold;
        let field = entry.field(fname).unwrap();
        let pts = m.sample_points(3, 404);
        let mut worst_mc = 0.0f64;
        let mut worst_div = 0.0f64;
        let mut worst_transpose = 0.0f64;
        let mut worst_trace = 0.0f64;
        for p in &pts {
            let pa = PointAnalysis::new(m, field, p, &fd);
            let lap = rough_laplacian(m, field, p, &fd);
            // <nabla*nabla sigma, sigma> = |nabla sigma|^2
            let lhs = form_inner(&lap, &pa.sigma, &pa.metric).unwrap();
            worst_trace = worst_trace.max((lhs - pa.grad_norm_sq).abs() / pa.grad_norm_sq.max(1.0));
            // (nabla sigma)^t sigma = 0 for constant length
            for a in 0..m.dim {
                worst_transpose = worst_transpose.max(
                    form_inner(&pa.sigma, &pa.nabla[a], &pa.metric)
                        .unwrap()
                        .abs()
                        / pa.norm_sq.max(1.0),
                );
            }
            // Metric compatibility: d/du <sigma, sigma> = 2 <nabla sigma, sigma>.
            for a in 0..m.dim {
                let fd_scalar = partial(
                    |u: &[f64]| {
                        let q = ChartPoint::new(p.chart, u.to_vec());
                        let g = m.metric_at(&q, &fd).unwrap();
                        let v = field.eval(&q);
                        form_inner(&v, &v, &g).unwrap()
                    },
                    &p.u,
                    a,
                    fd.h2,
                    fd.richardson,
                );
                let direct = 2.0 * form_inner(&pa.nabla[a], &pa.sigma, &pa.metric).unwrap();
                worst_mc = worst_mc.max((fd_scalar - direct).abs() / (1.0 + direct.abs()));
            }
            // Transpose/divergence identity against phi = the section itself
            // scaled by a nonconstant factor, to exercise the div term:
            // <nabla*nabla sigma, phi> = -div((nabla sigma)^t phi) + <nabla sigma, nabla phi>.
            let factor = |u: &[f64]| 1.0 + 0.2 * u[0];
            let base = field.clone();
            let phi_field = harmonia_core::manifold::FormField::new(field.degree, move |q| {
                base.eval(q).scale(factor(&q.u))
            });
            let phi_val = phi_field.eval(p);
            let nabla_phi = m.covariant_derivative(&phi_field, p, &fd, fd.h1);
            let lhs = form_inner(&lap, &phi_val, &pa.metric).unwrap();
            let mut cross = 0.0;
            for a in 0..m.dim {
                for b in 0..m.dim {
                    cross += pa.metric.g_inv()[(a, b)]
                        * form_inner(&pa.nabla[a], &nabla_phi[b], &pa.metric).unwrap();
                }
            }
            // div of W^a = g^{ab} <phi, nabla_b sigma> by finite differences.
            let w_at = |u: &[f64]| -> Vec<f64> {
                let q = ChartPoint::new(p.chart, u.to_vec());
                let g = m.metric_at(&q, &fd).unwrap();
                let nb = m.covariant_derivative(field, &q, &fd, fd.h2);
                let ph = phi_field.eval(&q);
                (0..m.dim)
                    .map(|a| {
                        (0..m.dim)
                            .map(|b| g.g_inv()[(a, b)] * form_inner(&ph, &nb[b], &g).unwrap())
                            .sum()
                    })
                    .collect()
            };
            let conn = m.christoffel_at(p, &fd);
            let w0 = w_at(&p.u);
            let mut div = 0.0;
            for a in 0..m.dim {
                let da = partial(&w_at, &p.u, a, fd.h2, fd.richardson);
                div += da[a];
                for b in 0..m.dim {
                    div += conn.get(a, b, a) * w0[b];
                }
            }
            worst_div = worst_div.max((lhs + div - cross).abs() / (1.0 + cross.abs()));
        }
        ok &= line(
            "criterion-4",
            &format!("{id}/{fname} metric compatibility"),
            worst_mc < 1e-4,
            format!("max {:.2e}", worst_mc),
        );
        ok &= line(
            "criterion-4",
            &format!("{id}/{fname} transpose-divergence identity"),
            worst_div < 1e-4,
            format!("max {:.2e}", worst_div),
        );
        ok &= line(
            "criterion-4",
            &format!("{id}/{fname} (nabla sigma)^t sigma = 0"),
            worst_transpose < 1e-6,
            format!("max {:.2e}", worst_transpose),
        );
        ok &= line(
            "criterion-4",
            &format!("{id}/{fname} <nabla*nabla sigma, sigma> = |nabla sigma|^2"),
            worst_trace < 1e-4,
            format!("max {:.2e}", worst_trace),
        );
    }

    // Equal-spectrum sufficiency: wherever all k_i coincide, the pairing
    // must vanish.
    for (id, fname) in [("nk-s6", "omega"), ("g2-s7", "phi"), ("nk-s6", "psi-plus")] {
        let entry = models::build(id).unwrap();
        let fd = entry.fd();
        let field = entry.field(fname).unwrap();
        let pts = entry.manifold.sample_points(3, 505);
        let mut equal = true;
        let mut worst_hm = 0.0f64;
        for p in &pts {
            let spec = ki_spectrum(&entry.manifold, field, p, &fd);
            equal &= spec.spread / spec.k.last().unwrap().abs().max(1.0) < 1e-6;
            let pa = PointAnalysis::new(&entry.manifold, field, p, &fd);
            worst_hm = worst_hm.max(
                harmonia_core::harmonic::harmonic_map_residual(&entry.manifold, field, p, &fd)
                    / pa.grad_norm_sq.max(1.0),
            );
        }
        ok &= line(
            "criterion-4",
            &format!("{id}/{fname} equal spectrum implies harmonic map"),
            equal && worst_hm < 1e-4,
            format!("hm {:.2e}", worst_hm),
        );
    }

    // Structure suites (equrem, the Reeb contractions, contact fits) from
    // the shared sweep.
    for run in &report.runs {
        for check in &run.checks {
            if check.name == "structure" {
                ok &= line(
                    "criterion-4",
                    &format!("{} structure identities", run.model),
                    check.ok,
                    format!("max {:.2e}", check.max_residual),
                );
            }
        }
    }

    // Kenmotsu biconditional across the warping sweep: the pairing of F^r
    // vanishes exactly when db(zeta) = b^2 (see ledger for the stated
    // r-dependent form, which holds only at r = 1).
    for (id, db_over_b2) in [
        ("kenmotsu:1", 1.0),
        ("kenmotsu:2", 2.0),
        ("kenmotsu-exp", 0.0),
    ] {
        let entry = models::build(id).unwrap();
        let fd = entry.fd();
        for fname in ["F", "F^2"] {
            let field = entry.field(fname).unwrap();
            let pts = entry.manifold.sample_points(3, 787);
            let mut worst = 0.0f64;
            for p in &pts {
                let pa = PointAnalysis::new(&entry.manifold, field, p, &fd);
                worst = worst.max(
                    harmonia_core::harmonic::harmonic_map_residual(&entry.manifold, field, p, &fd)
                        / pa.grad_norm_sq.max(1.0),
                );
            }
            let vanishes = worst < 1e-4;
            let condition = (db_over_b2 - 1.0f64).abs() < 1e-12;
            ok &= line(
                "criterion-4",
                &format!("{id}/{fname} pairing = 0 iff db(zeta) = b^2"),
                vanishes == condition,
                format!("hm {:.2e}, db/b^2 = {db_over_b2}", worst),
            );
        }
    }

    assert!(ok, "criterion 4 failed");
}

#[test]
fn criterion_5_oracle_gates_and_monte_carlo() {
    let mut ok = oracle_gate_passed();

    // Sphere area within three sigma (exact for a constant integrand, so
    // also check a varying one).
    let est = mc_integral(2, |_| 1.0, 2000, 99);
    ok &= line(
        "criterion-5",
        "MC area of S^2 = 4 pi",
        (est.value - 4.0 * std::f64::consts::PI).abs() < 3.0 * est.stderr + 1e-9,
        format!("{} +/- {}", est.value, est.stderr),
    );
    let s2 = models::round_sphere(2);
    let est = mc_integral(
        2,
        |p| {
            let x = s2.embed(p).unwrap();
            1.0 + x[2] * x[2]
        },
        3000,
        1234,
    );
    let expect = 4.0 * std::f64::consts::PI * (1.0 + 1.0 / 3.0);
    ok &= line(
        "criterion-5",
        "MC moment integral on S^2 within 3 sigma",
        (est.value - expect).abs() < 3.0 * est.stderr,
        format!("{} vs {expect} (+/- {})", est.value, est.stderr),
    );

    // Total bending of the almost complex two-form on S^6: the density is
    // the constant 12 (w1p)^2, so B = 12 Vol(S^6); the energy adds n/2 Vol.
    let entry = models::build("nk-s6").unwrap();
    let fd = entry.fd();
    let m = entry.manifold.clone();
    let omega = entry.field("omega").unwrap().clone();
    let est = mc_integral(6, |p| bending_density(&m, &omega, p, &fd), 60, 7);
    let w1p = entry.constants["w1p"];
    let expect_b = 12.0 * w1p * w1p * sphere_volume(6);
    ok &= line(
        "criterion-5",
        "total bending of omega on S^6 = 12 (w1p)^2 Vol",
        (est.value - expect_b).abs() < 3.0 * est.stderr + 1e-4 * expect_b,
        format!("{} vs {expect_b}", est.value),
    );
    let m2 = entry.manifold.clone();
    let omega2 = entry.field("omega").unwrap().clone();
    let est_e = mc_integral(6, |p| 3.0 + bending_density(&m2, &omega2, p, &fd), 60, 11);
    let expect_e = 3.0 * sphere_volume(6) + expect_b;
    ok &= line(
        "criterion-5",
        "energy = (n/2) Vol + total bending on S^6",
        (est_e.value - expect_e).abs() < 3.0 * est_e.stderr + 1e-4 * expect_e,
        format!("{} vs {expect_e}", est_e.value),
    );

    assert!(ok, "criterion 5 failed");
}

#[test]
fn criterion_6_determinism() {
    let cfg = CheckConfig {
        sample_count: 3,
        seed: 2024,
        ..CheckConfig::default()
    };
    let plan = RunPlan {
        model_ids: vec!["sasakian-s5".into(), "kenmotsu:1".into()],
        fields: None,
        checks: None,
        config: cfg,
        regression: true,
        oracle_points: 1,
    };
    let a = execute(&plan).to_json_without_timestamp();
    let b = execute(&plan).to_json_without_timestamp();
    let pass = a == b && !a.is_empty();
    line(
        "criterion-6",
        "identical seed gives byte-identical JSON (timestamp excluded)",
        pass,
        format!("{} bytes", a.len()),
    );
    assert!(pass, "criterion 6 failed");
}

#[test]
fn regression_summary_is_green() {
    let report = shared_report();
    let mut failed = Vec::new();
    for run in &report.runs {
        for check in &run.checks {
            if !check.ok {
                failed.push(format!("{}/{}/{}", run.model, run.field, check.name));
            }
        }
    }
    println!(
        "[regression] {}/{} rows ok over the full catalog",
        report.summary.ok, report.summary.total
    );
    assert!(report.oracle_ok, "oracle gate rows failed");
    assert!(failed.is_empty(), "failing rows: {failed:?}");
}

#[test]
fn bending_and_spectrum_values_on_nk_s6() {
    // Frozen first-order values: bending density 12 (w1p)^2 and the flat
    // generalized spectrum of omega.
    let entry = models::build("nk-s6").unwrap();
    let fd = entry.fd();
    let field = entry.field("omega").unwrap();
    let p = entry.manifold.sample_points(1, 3).pop().unwrap();
    let density = bending_density(&entry.manifold, field, &p, &fd);
    let w1p = entry.constants["w1p"];
    assert!(
        (density - 12.0 * w1p * w1p).abs() < 1e-6,
        "bending density = {density}"
    );
    let gn = grad_norm_sq_at(&entry.manifold, field, &p, &fd, fd.h1);
    assert!((gn - 24.0 * w1p * w1p).abs() < 1e-6);
    let two_routes_close = {
        let a = curvature_pairing(&entry.manifold, field, &p, &fd);
        let b = curvature_pairing_div_form(&entry.manifold, field, &p, &fd);
        a.sub(&b).max_abs() < 1e-6
    };
    assert!(two_routes_close);
}
