//! Catalog of model manifolds: round spheres, the nearly Kaehler S^6, the
//! nearly parallel G2 S^7, Sasakian S^5, 3-Sasakian S^7, Kenmotsu warped
//! products, and the locally conformal parallel cone models. Each entry
//! binds named form fields to the chart geometry and records the expected
//! verdicts its checks must reproduce.

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::Serialize;
use thiserror::Error;

use crate::gstructures::{
    quaternion_right_mult, quaternionic_four_form, spin7_form, standard_complex_structure,
    AlgebraTable,
};
use crate::manifold::{ChartBox, ChartPoint, Flavor, FormField, ModelManifold};
use crate::multilinear::{
    contract, flat, wedge, wedge_power, AlternatingForm, MultiIndex, PointMetric,
};
use crate::numerics::{fit_scalar, FdScheme};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown model id `{0}`")]
    UnknownModel(String),
    #[error("invalid parameters for `{id}`: {msg}")]
    BadParams { id: String, msg: String },
}

/// Which structural family an entry belongs to; drives the structure suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    RoundSphere,
    NearlyKaehler,
    NearlyParallelG2,
    Sasakian,
    ThreeSasakian,
    Kenmotsu,
    LcKaehler,
    LcpSpin7,
    LcHyperKaehler,
}

/// Source trail of an expected constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Provenance {
    /// Instantiates a stated closed-form identity.
    Identity,
    /// Derived here from an independent numerical route.
    CrossCheck,
    /// Frozen regression number from a first validated run.
    Frozen,
}

/// Expected rough-Laplacian eigenvalue for a (model, field) pair.
#[derive(Clone, Debug)]
pub enum ExpectedEigen {
    /// `factor * c^2` for a build-time structure constant `c`.
    FactorTimesSquared { constant: String, factor: f64 },
    /// `factor * b(u)^2` for the pointwise structure function.
    FactorTimesPointwiseSquared { factor: f64 },
    /// `factor * |theta|^2` for the fitted Lee form at the point.
    FactorTimesLeeNormSq { factor: f64 },
    /// A plain number.
    Value(f64),
}

/// One row of the per-model regression ledger.
#[derive(Clone, Debug)]
pub struct ExpectedCheck {
    pub field: String,
    pub check: String,
    pub eigen: Option<ExpectedEigen>,
    pub must_pass: bool,
    pub provenance: Provenance,
}

impl ExpectedCheck {
    fn pass(field: &str, check: &str, provenance: Provenance) -> Self {
        ExpectedCheck {
            field: field.into(),
            check: check.into(),
            eigen: None,
            must_pass: true,
            provenance,
        }
    }

    fn fail(field: &str, check: &str, provenance: Provenance) -> Self {
        ExpectedCheck {
            must_pass: false,
            ..Self::pass(field, check, provenance)
        }
    }

    fn eigen(field: &str, eigen: ExpectedEigen, provenance: Provenance) -> Self {
        ExpectedCheck {
            eigen: Some(eigen),
            ..Self::pass(field, "laplacian-eigen", provenance)
        }
    }
}

/// A pair of fields expected to satisfy the coupled first-order system
/// `nabla_X psi = lambda X . phi`, `nabla_X phi = mu X^flat ^ psi`.
#[derive(Clone, Debug)]
pub struct PairSpec {
    pub lower: String,
    pub upper: String,
}

/// Machine-readable descriptor for the catalog listing.
#[derive(Clone, Debug, Serialize)]
pub struct ModelDescriptor {
    pub id: String,
    pub family: Family,
    pub dim: usize,
    pub ambient_dim: Option<usize>,
    pub flavor: String,
    pub params: BTreeMap<String, f64>,
    pub fields: Vec<String>,
}

/// Closed-form conformal factor data for the direct conformally flat
/// models, used as the independent curvature route.
pub struct ConformalData {
    pub phi: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
    pub grad: Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>,
    pub hess: Arc<dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync>,
}

/// Conformal data of the cone factor `phi = -ln |x|`.
fn cone_conformal(dim: usize) -> ConformalData {
    ConformalData {
        phi: Arc::new(|u: &[f64]| {
            let r2: f64 = u.iter().map(|x| x * x).sum();
            -0.5 * r2.ln()
        }),
        grad: Arc::new(|u: &[f64]| {
            let r2: f64 = u.iter().map(|x| x * x).sum();
            u.iter().map(|x| -x / r2).collect()
        }),
        hess: Arc::new(move |u: &[f64]| {
            let r2: f64 = u.iter().map(|x| x * x).sum();
            let mut h = DMatrix::<f64>::zeros(dim, dim);
            for i in 0..dim {
                for j in 0..dim {
                    h[(i, j)] = 2.0 * u[i] * u[j] / (r2 * r2) - if i == j { 1.0 / r2 } else { 0.0 };
                }
            }
            h
        }),
    }
}

/// A bound catalog entry: geometry, fields, fitted constants and ledger.
pub struct CatalogEntry {
    pub id: String,
    pub family: Family,
    pub manifold: Arc<ModelManifold>,
    pub fields: Vec<(String, FormField)>,
    pub pairs: Vec<PairSpec>,
    /// Structure constants fitted at build time (a, w1p, k, rho, ...).
    pub constants: BTreeMap<String, f64>,
    /// Pointwise structure function (the Kenmotsu b), when one exists.
    pub pointwise: Option<Arc<dyn Fn(&ChartPoint) -> f64 + Send + Sync>>,
    /// Chart components of the complex structure, for the lcK defect check.
    pub complex_structure: Option<DMatrix<f64>>,
    /// Closed-form conformal data for direct conformally flat metrics.
    pub conformal: Option<ConformalData>,
    pub expected: Vec<ExpectedCheck>,
    pub params: BTreeMap<String, f64>,
}

impl CatalogEntry {
    pub fn field(&self, name: &str) -> Option<&FormField> {
        self.fields
            .iter()
            .find(|(n, _)| n.eq_ignore_ascii_case(name))
            .map(|(_, f)| f)
    }

    pub fn field_names(&self) -> Vec<String> {
        self.fields.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn fd(&self) -> FdScheme {
        FdScheme::for_scale(self.manifold.scale)
    }

    pub fn descriptor(&self) -> ModelDescriptor {
        ModelDescriptor {
            id: self.id.clone(),
            family: self.family,
            dim: self.manifold.dim,
            ambient_dim: match &self.manifold.flavor {
                Flavor::Embedded { ambient_dim, .. } => Some(*ambient_dim),
                Flavor::Direct { .. } => None,
            },
            flavor: if self.manifold.is_embedded() {
                "embedded".into()
            } else {
                "direct".into()
            },
            params: self.params.clone(),
            fields: self.field_names(),
        }
    }
}

/// Canonical ids, stable ordering.
pub fn list_ids() -> Vec<&'static str> {
    vec![
        "round-sphere:2",
        "round-sphere:3",
        "round-sphere:6",
        "nk-s6",
        "g2-s7",
        "sasakian-s5",
        "3sasakian-s7",
        "kenmotsu:1",
        "kenmotsu:2",
        "kenmotsu-exp",
        "hopf-lck:2",
        "hopf-lck:3",
        "lck-generic",
        "lcp-spin7",
        "lc-hk:1",
    ]
}

/// Unit sphere S^n in R^{n+1} covered by 2(n+1) graph charts.
pub fn round_sphere(n: usize) -> Arc<ModelManifold> {
    let ambient = n + 1;
    let param = move |chart: usize, u: &[f64]| -> Vec<f64> {
        let slot = chart / 2;
        let sign = if chart % 2 == 0 { 1.0 } else { -1.0 };
        let r2: f64 = u.iter().map(|x| x * x).sum();
        let h = sign * (1.0 - r2).max(1e-12).sqrt();
        let mut p = Vec::with_capacity(ambient);
        p.extend_from_slice(&u[..slot]);
        p.push(h);
        p.extend_from_slice(&u[slot..]);
        p
    };
    Arc::new(ModelManifold {
        name: format!("round-sphere:{n}"),
        dim: n,
        flavor: Flavor::Embedded {
            ambient_dim: ambient,
            param: Arc::new(param),
            normal: Arc::new(|p: &[f64]| p.to_vec()),
        },
        charts: vec![ChartBox::cube(n, -0.25, 0.25); 2 * ambient],
        scale: 1.0,
    })
}

/// Chart point of the sphere model containing a given ambient unit vector.
pub fn sphere_chart_point(n: usize, p: &[f64]) -> ChartPoint {
    let slot = (0..=n)
        .max_by(|&a, &b| p[a].abs().partial_cmp(&p[b].abs()).unwrap())
        .unwrap();
    let chart = 2 * slot + if p[slot] >= 0.0 { 0 } else { 1 };
    let mut u = Vec::with_capacity(n);
    for (k, &x) in p.iter().enumerate() {
        if k != slot {
            u.push(x);
        }
    }
    ChartPoint::new(chart, u)
}

/// Punctured Euclidean space with the cone metric `delta / |x|^2`, charted
/// on a box away from the origin.
pub fn conformal_cone(name: &str, dim: usize, _variant: usize) -> Arc<ModelManifold> {
    Arc::new(ModelManifold {
        name: name.to_string(),
        dim,
        flavor: Flavor::Direct {
            metric: Arc::new(move |_chart, u: &[f64]| {
                let r2: f64 = u.iter().map(|x| x * x).sum();
                DMatrix::<f64>::identity(dim, dim) / r2
            }),
        },
        charts: vec![ChartBox::cube(dim, 0.55, 1.45)],
        scale: 1.0,
    })
}

/// Conformally flat metric `e^{2 phi} delta` for an arbitrary smooth phi.
fn conformal_generic(
    name: &str,
    dim: usize,
    phi: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
) -> Arc<ModelManifold> {
    Arc::new(ModelManifold {
        name: name.to_string(),
        dim,
        flavor: Flavor::Direct {
            metric: Arc::new(move |_chart, u: &[f64]| {
                let f = (2.0 * phi(u)).exp();
                DMatrix::<f64>::identity(dim, dim) * f
            }),
        },
        charts: vec![ChartBox::cube(dim, -0.8, 0.8)],
        scale: 1.0,
    })
}

fn two_form_from_skew(m: &DMatrix<f64>) -> AlternatingForm {
    let n = m.nrows();
    let mut f = AlternatingForm::zero(n, 2);
    for r in 0..n {
        for c in (r + 1)..n {
            if m[(r, c)] != 0.0 {
                f.set(MultiIndex::new(&[r, c], n).unwrap(), m[(r, c)]);
            }
        }
    }
    f
}

/// Least-squares Einstein constant from the Ricci tensor at a few points.
fn fit_einstein_constant(m: &Arc<ModelManifold>, fd: &FdScheme) -> f64 {
    let points = m.sample_points(3, 20_260_101);
    let mut num = 0.0;
    let mut den = 0.0;
    for p in &points {
        let curv = m.curvature_at(p, fd);
        let ric = curv.ricci();
        let g = m.metric_matrix(p, fd);
        for i in 0..m.dim {
            for j in 0..m.dim {
                num += ric[(i, j)] * g[(i, j)];
                den += g[(i, j)] * g[(i, j)];
            }
        }
    }
    num / den
}

/// Least-squares constant `a` in `nabla_X F = -a X^flat ^ eta`.
fn fit_contact_constant(
    m: &Arc<ModelManifold>,
    eta: &FormField,
    f2: &FormField,
    fd: &FdScheme,
) -> f64 {
    let points = m.sample_points(3, 20_260_202);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for p in &points {
        let nabla = m.covariant_derivative(f2, p, fd, fd.h1);
        let g = m.metric_at(p, fd).unwrap();
        let eta_p = eta.eval(p);
        for a in 0..m.dim {
            let mut x = vec![0.0; m.dim];
            x[a] = 1.0;
            let xf = flat(&x, &g).unwrap();
            let model = wedge(&xf, &eta_p).unwrap().scale(-1.0);
            for mi in MultiIndex::enumerate(m.dim, 2) {
                xs.push(model.get(mi));
                ys.push(nabla[a].get(mi));
            }
        }
    }
    fit_scalar(&xs, &ys).0
}

fn build_round_sphere(n: usize) -> CatalogEntry {
    let manifold = round_sphere(n);
    let fd = FdScheme::for_scale(manifold.scale);
    let mut fields: Vec<(String, FormField)> =
        vec![("vol".into(), FormField::volume(manifold.clone(), fd))];
    if n == 2 {
        // Dual of the ambient rotation field around the z-axis.
        fields.push((
            "rot-dual".into(),
            FormField::pullback(manifold.clone(), 1, fd, |x: &[f64]| {
                AlternatingForm::one_form(3, &[-x[1], x[0], 0.0])
            }),
        ));
    }
    let mut expected = vec![
        ExpectedCheck::eigen("vol", ExpectedEigen::Value(0.0), Provenance::Identity),
        ExpectedCheck::pass("vol", "harmonic-map", Provenance::Identity),
        ExpectedCheck::pass("vol", "structure", Provenance::Identity),
    ];
    if n == 2 {
        expected.push(ExpectedCheck::pass(
            "rot-dual",
            "variation",
            Provenance::CrossCheck,
        ));
    }
    CatalogEntry {
        id: format!("round-sphere:{n}"),
        family: Family::RoundSphere,
        manifold,
        fields,
        pairs: vec![],
        constants: BTreeMap::new(),
        pointwise: None,
        complex_structure: None,
        conformal: None,
        expected,
        params: BTreeMap::from([("n".to_string(), n as f64)]),
    }
}

fn build_nk_s6() -> CatalogEntry {
    let manifold = round_sphere(6);
    let fd = FdScheme::for_scale(manifold.scale);
    let octonions = Arc::new(AlgebraTable::octonion());

    // J_p X = p X through imaginary octonion multiplication; R^7 = Im O.
    let oct = octonions.clone();
    let ambient_omega = move |p: &[f64]| -> AlternatingForm {
        let mut m = DMatrix::<f64>::zeros(7, 7);
        for b in 0..7 {
            let mut e = vec![0.0; 7];
            e[b] = 1.0;
            let col = oct.mul_imaginary(p, &e);
            for (r, v) in col.iter().enumerate() {
                m[(r, b)] = *v;
            }
        }
        two_form_from_skew(&m)
    };
    let omega = FormField::pullback(manifold.clone(), 2, fd, ambient_omega);

    let rho = fit_einstein_constant(&manifold, &fd);
    let w1p = (rho / 5.0).sqrt();

    // psi_plus = d(omega) / (3 w1p)
    let mref = manifold.clone();
    let omega_for_d = omega.clone();
    let psi_plus = FormField::new(3, move |p: &ChartPoint| {
        mref.exterior_derivative(&omega_for_d, p, &fd)
            .expect("d omega")
            .scale(1.0 / (3.0 * w1p))
    });

    // psi_minus = -psi_plus(J., ., .) with J in chart components.
    let mref = manifold.clone();
    let oct = octonions.clone();
    let psi_plus_for_minus = psi_plus.clone();
    let psi_minus = FormField::new(3, move |p: &ChartPoint| {
        let jac = mref.jacobian(p, &fd).unwrap();
        let amb = mref.embed(p).unwrap();
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
        crate::multilinear::alt_endo_first_slot(&psi_plus_for_minus.eval(p), &j_chart).scale(-1.0)
    });

    let omega_sq_src = omega.clone();
    let omega_sq = FormField::new(4, move |p: &ChartPoint| {
        let w = omega_sq_src.eval(p);
        wedge(&w, &w).expect("omega^2")
    });

    let ee = |field: &str, factor: f64| {
        ExpectedCheck::eigen(
            field,
            ExpectedEigen::FactorTimesSquared {
                constant: "w1p".into(),
                factor,
            },
            Provenance::Identity,
        )
    };
    let mut expected = vec![
        ee("omega", 4.0),
        ee("psi-plus", 3.0),
        ee("psi-minus", 3.0),
        ee("omega-wedge-omega", 4.0),
    ];
    for f in ["omega", "psi-plus", "psi-minus", "omega-wedge-omega"] {
        expected.push(ExpectedCheck::pass(
            f,
            "harmonic-section",
            Provenance::Identity,
        ));
        expected.push(ExpectedCheck::pass(f, "harmonic-map", Provenance::Identity));
        expected.push(ExpectedCheck::pass(
            f,
            "constant-length",
            Provenance::Identity,
        ));
    }
    expected.push(ExpectedCheck::pass(
        "omega",
        "ki-spectrum",
        Provenance::CrossCheck,
    ));
    expected.push(ExpectedCheck::pass(
        "omega",
        "pair-thm",
        Provenance::Identity,
    ));
    expected.push(ExpectedCheck::pass(
        "psi-minus",
        "pair-thm",
        Provenance::Identity,
    ));
    expected.push(ExpectedCheck::pass(
        "omega",
        "structure",
        Provenance::Identity,
    ));
    expected.push(ExpectedCheck::pass(
        "omega",
        "two-route",
        Provenance::CrossCheck,
    ));
    expected.push(ExpectedCheck::pass(
        "omega",
        "tension",
        Provenance::CrossCheck,
    ));

    CatalogEntry {
        id: "nk-s6".into(),
        family: Family::NearlyKaehler,
        manifold,
        fields: vec![
            ("omega".into(), omega),
            ("psi-plus".into(), psi_plus),
            ("psi-minus".into(), psi_minus),
            ("omega-wedge-omega".into(), omega_sq),
        ],
        pairs: vec![
            PairSpec {
                lower: "omega".into(),
                upper: "psi-plus".into(),
            },
            PairSpec {
                lower: "psi-minus".into(),
                upper: "omega-wedge-omega".into(),
            },
        ],
        constants: BTreeMap::from([("rho".to_string(), rho), ("w1p".to_string(), w1p)]),
        pointwise: None,
        complex_structure: None,
        conformal: None,
        expected,
        params: BTreeMap::new(),
    }
}

fn build_g2_s7(sigma: i8) -> CatalogEntry {
    let manifold = round_sphere(7);
    let fd = FdScheme::for_scale(manifold.scale);
    let cayley = spin7_form(sigma).unwrap();

    let cay = cayley.clone();
    let phi = FormField::pullback(manifold.clone(), 3, fd, move |p: &[f64]| {
        contract(p, &cay).expect("p . Phi")
    });

    let mref = manifold.clone();
    let phi_src = phi.clone();
    let star_phi = FormField::new(4, move |p: &ChartPoint| {
        let g = mref.metric_at(p, &fd).expect("metric");
        crate::multilinear::hodge_star(&phi_src.eval(p), &g).expect("star")
    });

    let rho = fit_einstein_constant(&manifold, &fd);
    // k from the first-order fit; the Einstein constant then satisfies
    // rho = (dim - 1) k^2 / 16 on the unit sphere.
    let k = {
        let pts = manifold.sample_points(2, 20_260_303);
        let hyp = crate::harmonic::pair_fit(&manifold, &phi, &star_phi, &pts, &fd);
        4.0 * hyp.lambda
    };

    let mut expected = vec![
        ExpectedCheck::eigen(
            "phi",
            ExpectedEigen::FactorTimesSquared {
                constant: "k".into(),
                factor: 0.25,
            },
            Provenance::Identity,
        ),
        ExpectedCheck::eigen(
            "star-phi",
            ExpectedEigen::FactorTimesSquared {
                constant: "k".into(),
                factor: 0.25,
            },
            Provenance::Identity,
        ),
        ExpectedCheck::pass("phi", "pair-thm", Provenance::Identity),
        ExpectedCheck::pass("phi", "structure", Provenance::Identity),
        ExpectedCheck::pass("phi", "two-route", Provenance::CrossCheck),
    ];
    for f in ["phi", "star-phi"] {
        expected.push(ExpectedCheck::pass(
            f,
            "harmonic-section",
            Provenance::Identity,
        ));
        expected.push(ExpectedCheck::pass(f, "harmonic-map", Provenance::Identity));
        expected.push(ExpectedCheck::pass(
            f,
            "constant-length",
            Provenance::Identity,
        ));
    }

    CatalogEntry {
        id: if sigma == 1 {
            "g2-s7".into()
        } else {
            "g2-s7:-1".into()
        },
        family: Family::NearlyParallelG2,
        manifold,
        fields: vec![("phi".into(), phi), ("star-phi".into(), star_phi)],
        pairs: vec![PairSpec {
            lower: "phi".into(),
            upper: "star-phi".into(),
        }],
        constants: BTreeMap::from([("rho".to_string(), rho), ("k".to_string(), k)]),
        pointwise: None,
        complex_structure: None,
        conformal: None,
        expected,
        params: BTreeMap::from([("sigma".to_string(), sigma as f64)]),
    }
}

fn build_sasakian_s5() -> CatalogEntry {
    let n = 2usize; // S^5 in C^3
    let manifold = round_sphere(2 * n + 1);
    let fd = FdScheme::for_scale(manifold.scale);
    let j0 = standard_complex_structure(n + 1);

    let j = j0.clone();
    let eta = FormField::pullback(manifold.clone(), 1, fd, move |p: &[f64]| {
        let zeta: Vec<f64> = (0..p.len())
            .map(|r| (0..p.len()).map(|c| j[(r, c)] * p[c]).sum())
            .collect();
        AlternatingForm::one_form(p.len(), &zeta)
    });
    let j = j0.clone();
    let f2 = FormField::pullback(manifold.clone(), 2, fd, move |_p: &[f64]| {
        two_form_from_skew(&j)
    });

    let composite = |deg: usize, r: usize, with_eta: bool| -> FormField {
        let eta = eta.clone();
        let f2 = f2.clone();
        FormField::new(deg, move |p: &ChartPoint| {
            let fr = wedge_power(&f2.eval(p), r).expect("F^r");
            if with_eta {
                wedge(&eta.eval(p), &fr).expect("eta ^ F^r")
            } else {
                fr
            }
        })
    };

    let a = fit_contact_constant(&manifold, &eta, &f2, &fd);
    let ee = |field: &str, factor: f64| {
        ExpectedCheck::eigen(
            field,
            ExpectedEigen::FactorTimesSquared {
                constant: "a".into(),
                factor,
            },
            Provenance::Identity,
        )
    };
    let mut expected = vec![
        ee("eta", 4.0),
        ee("F", 2.0),
        ee("eta-wedge-F", 2.0),
        ee("F^2", 4.0),
        ee("eta-wedge-F^2", 0.0),
        ExpectedCheck::pass("eta-wedge-F", "pair-thm", Provenance::Identity),
        ExpectedCheck::pass("eta", "pair-thm", Provenance::Identity),
        ExpectedCheck::pass("eta", "structure", Provenance::Identity),
        ExpectedCheck::pass("eta-wedge-F", "two-route", Provenance::CrossCheck),
        ExpectedCheck::pass("F", "tension", Provenance::CrossCheck),
        ExpectedCheck::pass("F", "variation", Provenance::CrossCheck),
        ExpectedCheck::pass("eta", "ki-spectrum", Provenance::CrossCheck),
    ];
    for f in ["eta", "F", "eta-wedge-F", "F^2", "eta-wedge-F^2"] {
        expected.push(ExpectedCheck::pass(
            f,
            "harmonic-section",
            Provenance::Identity,
        ));
        expected.push(ExpectedCheck::pass(f, "harmonic-map", Provenance::Identity));
        expected.push(ExpectedCheck::pass(
            f,
            "constant-length",
            Provenance::Identity,
        ));
    }

    CatalogEntry {
        id: "sasakian-s5".into(),
        family: Family::Sasakian,
        manifold,
        fields: vec![
            ("eta".into(), composite(1, 0, true)),
            ("F".into(), composite(2, 1, false)),
            ("eta-wedge-F".into(), composite(3, 1, true)),
            ("F^2".into(), composite(4, 2, false)),
            ("eta-wedge-F^2".into(), composite(5, 2, true)),
        ],
        pairs: vec![
            PairSpec {
                lower: "eta".into(),
                upper: "F".into(),
            },
            PairSpec {
                lower: "eta-wedge-F".into(),
                upper: "F^2".into(),
            },
        ],
        constants: BTreeMap::from([("a".to_string(), a), ("n".to_string(), n as f64)]),
        pointwise: None,
        complex_structure: None,
        conformal: None,
        expected,
        params: BTreeMap::from([("n".to_string(), n as f64)]),
    }
}

fn build_3sasakian_s7() -> CatalogEntry {
    let n = 1usize; // S^7 in H^2
    let manifold = round_sphere(4 * n + 3);
    let fd = FdScheme::for_scale(manifold.scale);

    // Right multiplication reverses the quaternionic cycle; ordering the
    // three structures as units (j, i, k) restores phi_i zeta_j = zeta_k.
    let unit_order = [2usize, 1, 3];
    let eta_field = |slot: usize| -> FormField {
        let r = quaternion_right_mult(unit_order[slot], 2);
        FormField::pullback(manifold.clone(), 1, fd, move |p: &[f64]| {
            let zeta: Vec<f64> = (0..8)
                .map(|row| (0..8).map(|c| r[(row, c)] * p[c]).sum())
                .collect();
            AlternatingForm::one_form(8, &zeta)
        })
    };
    let f_field = |slot: usize| -> FormField {
        let r = quaternion_right_mult(unit_order[slot], 2);
        FormField::pullback(manifold.clone(), 2, fd, move |_p: &[f64]| {
            two_form_from_skew(&r)
        })
    };
    let etas = [eta_field(0), eta_field(1), eta_field(2)];
    let fs = [f_field(0), f_field(1), f_field(2)];

    let psi_r = |r: usize| -> FormField {
        let etas = etas.clone();
        let fs = fs.clone();
        FormField::new(2 * r + 1, move |p: &ChartPoint| {
            let mut acc = AlternatingForm::zero(7, 2 * r + 1);
            for i in 0..3 {
                let fr = wedge_power(&fs[i].eval(p), r).unwrap();
                acc = acc.add(&wedge(&etas[i].eval(p), &fr).unwrap());
            }
            acc
        })
    };
    let omega_r = |r: usize| -> FormField {
        let fs = fs.clone();
        FormField::new(2 * (r + 1), move |p: &ChartPoint| {
            let mut acc = AlternatingForm::zero(7, 2 * (r + 1));
            for i in 0..3 {
                acc = acc.add(&wedge_power(&fs[i].eval(p), r + 1).unwrap());
            }
            acc
        })
    };
    let theta_form = {
        let etas = etas.clone();
        let fs = fs.clone();
        FormField::new(3, move |p: &ChartPoint| {
            let e: Vec<AlternatingForm> = etas.iter().map(|f| f.eval(p)).collect();
            let eee = wedge(&e[0], &wedge(&e[1], &e[2]).unwrap()).unwrap();
            let mut acc = eee.scale((2 * n + 3) as f64);
            for i in 0..3 {
                acc = acc.add(&wedge(&e[i], &fs[i].eval(p)).unwrap());
            }
            acc
        })
    };
    let eta_f_sym = {
        let etas = etas.clone();
        let fs = fs.clone();
        FormField::new(3, move |p: &ChartPoint| {
            wedge(&etas[0].eval(p), &fs[1].eval(p))
                .unwrap()
                .add(&wedge(&etas[1].eval(p), &fs[0].eval(p)).unwrap())
        })
    };
    let f_wedge_f = {
        let fs = fs.clone();
        FormField::new(4, move |p: &ChartPoint| {
            wedge(&fs[0].eval(p), &fs[1].eval(p)).unwrap()
        })
    };
    let fk_plus_etaeta = {
        let etas = etas.clone();
        let fs = fs.clone();
        FormField::new(2, move |p: &ChartPoint| {
            let ee = wedge(&etas[0].eval(p), &etas[1].eval(p)).unwrap();
            fs[2].eval(p).add(&ee.scale((2 * n + 1) as f64))
        })
    };
    let omega_plus_cyc = {
        let etas = etas.clone();
        let fs = fs.clone();
        FormField::new(4, move |p: &ChartPoint| {
            let mut omega1 = AlternatingForm::zero(7, 4);
            for i in 0..3 {
                omega1 = omega1.add(&wedge_power(&fs[i].eval(p), 2).unwrap());
            }
            let mut cyc = AlternatingForm::zero(7, 4);
            for (i, j, k) in [(0usize, 1usize, 2usize), (1, 2, 0), (2, 0, 1)] {
                let w = wedge(&etas[i].eval(p), &etas[j].eval(p)).unwrap();
                cyc = cyc.add(&wedge(&w, &fs[k].eval(p)).unwrap());
            }
            omega1.add(&cyc.scale((2 * n + 3) as f64))
        })
    };

    let a = fit_contact_constant(&manifold, &etas[0], &fs[0], &fd);

    let ee = |field: &str, factor: f64| {
        ExpectedCheck::eigen(
            field,
            ExpectedEigen::FactorTimesSquared {
                constant: "a".into(),
                factor,
            },
            Provenance::Identity,
        )
    };
    let mut expected = vec![
        ee("psi-0", 6.0),
        ee("psi-1", 4.0),
        ee("psi-2", 2.0),
        ee("omega-0", 2.0),
        ee("omega-1", 4.0),
        ee("omega-2", 6.0),
        ee("eta-f-sym", 4.0),
        ee("f1-wedge-f2", 4.0),
        ee("theta-form", 24.0),
        ee("omega-plus-cyc", 24.0),
        ee("fk-plus-3-eta-eta", 14.0),
    ];
    for f in [
        "psi-0",
        "psi-1",
        "psi-2",
        "omega-0",
        "omega-1",
        "omega-2",
        "eta-f-sym",
        "f1-wedge-f2",
        "theta-form",
        "omega-plus-cyc",
        "fk-plus-3-eta-eta",
    ] {
        expected.push(ExpectedCheck::pass(
            f,
            "harmonic-section",
            Provenance::Identity,
        ));
        expected.push(ExpectedCheck::pass(f, "harmonic-map", Provenance::Identity));
        expected.push(ExpectedCheck::pass(
            f,
            "constant-length",
            Provenance::Identity,
        ));
    }
    expected.push(ExpectedCheck::pass(
        "psi-1",
        "pair-thm",
        Provenance::Identity,
    ));
    expected.push(ExpectedCheck::pass(
        "eta-f-sym",
        "pair-thm",
        Provenance::Identity,
    ));
    expected.push(ExpectedCheck::pass(
        "omega-0",
        "ki-spectrum",
        Provenance::CrossCheck,
    ));
    expected.push(ExpectedCheck::pass(
        "psi-0",
        "structure",
        Provenance::Identity,
    ));
    expected.push(ExpectedCheck::pass(
        "theta-form",
        "two-route",
        Provenance::CrossCheck,
    ));
    expected.push(ExpectedCheck::pass(
        "fk-plus-3-eta-eta",
        "tension",
        Provenance::CrossCheck,
    ));

    CatalogEntry {
        id: "3sasakian-s7".into(),
        family: Family::ThreeSasakian,
        manifold,
        fields: vec![
            ("psi-0".into(), psi_r(0)),
            ("psi-1".into(), psi_r(1)),
            ("psi-2".into(), psi_r(2)),
            ("omega-0".into(), omega_r(0)),
            ("omega-1".into(), omega_r(1)),
            ("omega-2".into(), omega_r(2)),
            ("theta-form".into(), theta_form),
            ("eta-f-sym".into(), eta_f_sym),
            ("f1-wedge-f2".into(), f_wedge_f),
            ("fk-plus-3-eta-eta".into(), fk_plus_etaeta),
            ("omega-plus-cyc".into(), omega_plus_cyc),
        ],
        pairs: vec![
            PairSpec {
                lower: "psi-0".into(),
                upper: "omega-0".into(),
            },
            PairSpec {
                lower: "psi-1".into(),
                upper: "omega-1".into(),
            },
            PairSpec {
                lower: "eta-f-sym".into(),
                upper: "f1-wedge-f2".into(),
            },
        ],
        constants: BTreeMap::from([("a".to_string(), a), ("n".to_string(), n as f64)]),
        pointwise: None,
        complex_structure: None,
        conformal: None,
        expected,
        params: BTreeMap::from([("n".to_string(), n as f64)]),
    }
}

/// Kenmotsu warped product `dt^2 + s(t) <.,.>_flat` on R x R^{2n}.
fn build_kenmotsu(id: &str, n: usize, warp: Warp) -> CatalogEntry {
    let dim = 2 * n + 1;
    let warp_fn = warp.clone();
    let manifold = Arc::new(ModelManifold {
        name: id.to_string(),
        dim,
        flavor: Flavor::Direct {
            metric: Arc::new(move |_chart, u: &[f64]| {
                let s = warp_fn.value(u[0]);
                let mut g = DMatrix::<f64>::identity(dim, dim) * s;
                g[(0, 0)] = 1.0;
                g
            }),
        },
        charts: vec![ChartBox::cube(dim, -0.45, 0.45)],
        scale: 1.0,
    });

    // eta = dt, zeta = d/dt, F = s(t) * (flat Kaehler form of the fibre).
    let eta = FormField::new(1, move |_p: &ChartPoint| {
        let mut f = AlternatingForm::zero(dim, 1);
        f.set(MultiIndex::new(&[0], dim).unwrap(), 1.0);
        f
    });
    let mut f0 = AlternatingForm::zero(dim, 2);
    for k in 0..n {
        f0.set(MultiIndex::new(&[2 * k + 1, 2 * k + 2], dim).unwrap(), 1.0);
    }
    let warp_fn = warp.clone();
    let base = f0.clone();
    let f2 = FormField::new(2, move |p: &ChartPoint| base.scale(warp_fn.value(p.u[0])));

    let composite = |deg: usize, r: usize, with_eta: bool| -> FormField {
        let eta = eta.clone();
        let f2 = f2.clone();
        FormField::new(deg, move |p: &ChartPoint| {
            let fr = wedge_power(&f2.eval(p), r).expect("F^r");
            if with_eta {
                wedge(&eta.eval(p), &fr).expect("eta ^ F^r")
            } else {
                fr
            }
        })
    };

    let warp_fn = warp.clone();
    let pointwise: Arc<dyn Fn(&ChartPoint) -> f64 + Send + Sync> =
        Arc::new(move |p: &ChartPoint| warp_fn.b(p.u[0]));

    let harmonic_map_f = warp.db_over_b2(); // db(zeta)/b^2, constant per warping
    let ee = |field: &str, factor: f64| {
        ExpectedCheck::eigen(
            field,
            ExpectedEigen::FactorTimesPointwiseSquared { factor },
            Provenance::Identity,
        )
    };
    let mut expected = vec![
        ee("eta", 2.0 * n as f64),
        ee("F", 2.0),
        ee("eta-wedge-F", 2.0 * (n - 1) as f64),
        ee("F^2", 4.0),
        ee("eta-wedge-F^2", 2.0 * (n - 2) as f64),
    ];
    for f in ["eta", "F", "eta-wedge-F", "F^2", "eta-wedge-F^2"] {
        expected.push(ExpectedCheck::pass(
            f,
            "harmonic-section",
            Provenance::Identity,
        ));
        expected.push(ExpectedCheck::pass(
            f,
            "constant-length",
            Provenance::Identity,
        ));
    }
    // The curvature pairing of both F^r and eta ^ F^r is proportional to
    // (b^2 - db(zeta)) eta, so every harmonic-map verdict here reduces to
    // db(zeta) = b^2; the power warping satisfies it exactly when its
    // exponent is 2 (the r = 1 profile). Verified independently against the
    // divergence-route pairing.
    for (field, top) in [
        ("eta", false),
        ("F", false),
        ("F^2", false),
        ("eta-wedge-F", false),
        // r = n makes eta ^ F^n parallel, hence trivially a harmonic map.
        ("eta-wedge-F^2", true),
    ] {
        let ok = top || (harmonic_map_f - 1.0).abs() < 1e-9;
        expected.push(if ok {
            ExpectedCheck::pass(field, "harmonic-map", Provenance::CrossCheck)
        } else {
            ExpectedCheck::fail(field, "harmonic-map", Provenance::CrossCheck)
        });
    }
    expected.push(ExpectedCheck::pass(
        "F",
        "ki-spectrum",
        Provenance::Identity,
    ));
    expected.push(ExpectedCheck::pass(
        "eta",
        "structure",
        Provenance::Identity,
    ));
    expected.push(ExpectedCheck::pass(
        "F",
        "two-route",
        Provenance::CrossCheck,
    ));
    expected.push(ExpectedCheck::pass("F", "tension", Provenance::CrossCheck));

    let mut params = BTreeMap::from([("n".to_string(), n as f64)]);
    for (k, v) in warp.params() {
        params.insert(k, v);
    }

    CatalogEntry {
        id: id.to_string(),
        family: Family::Kenmotsu,
        manifold,
        fields: vec![
            ("eta".into(), composite(1, 0, true)),
            ("F".into(), composite(2, 1, false)),
            ("eta-wedge-F".into(), composite(3, 1, true)),
            ("F^2".into(), composite(4, 2, false)),
            ("eta-wedge-F^2".into(), composite(5, 2, true)),
        ],
        pairs: vec![],
        constants: BTreeMap::from([("n".to_string(), n as f64)]),
        pointwise: Some(pointwise),
        complex_structure: None,
        conformal: None,
        expected,
        params,
    }
}

/// Warping profiles for the Kenmotsu family.
#[derive(Clone)]
enum Warp {
    /// `s(t) = C (t + K)^{2/r}`, so `b = -1/(r (t+K))` and `db(zeta) = r b^2`.
    Power { r: f64, c: f64, k: f64 },
    /// `s(t) = e^{2 c t}`, so `b = -c` constant and `db(zeta) = 0`.
    Exp { c: f64 },
}

impl Warp {
    fn value(&self, t: f64) -> f64 {
        match self {
            Warp::Power { r, c, k } => c * (t + k).powf(2.0 / r),
            Warp::Exp { c } => (2.0 * c * t).exp(),
        }
    }

    /// b = -(1/2) d(ln s)/dt.
    fn b(&self, t: f64) -> f64 {
        match self {
            Warp::Power { r, k, .. } => -1.0 / (r * (t + k)),
            Warp::Exp { c } => -c,
        }
    }

    /// The constant `db(zeta) / b^2` characterizing the harmonic-map cases.
    fn db_over_b2(&self) -> f64 {
        match self {
            Warp::Power { r, .. } => *r,
            Warp::Exp { .. } => 0.0,
        }
    }

    fn params(&self) -> BTreeMap<String, f64> {
        match self {
            Warp::Power { r, c, k } => BTreeMap::from([
                ("r".to_string(), *r),
                ("C".to_string(), *c),
                ("K".to_string(), *k),
            ]),
            Warp::Exp { c } => BTreeMap::from([("c".to_string(), *c)]),
        }
    }
}

/// Locally conformal parallel cone entries over `R^N \ 0` with `g = delta/|x|^2`.
fn build_lcp_cone(id: &str, kind: LcpKind) -> CatalogEntry {
    let (dim, family, base_form, field_name): (usize, Family, AlternatingForm, &str) = match kind {
        LcpKind::Kaehler { n } => (
            2 * n,
            Family::LcKaehler,
            crate::gstructures::kaehler_form(n).unwrap(),
            "omega",
        ),
        LcpKind::Spin7 => (8, Family::LcpSpin7, spin7_form(1).unwrap(), "cayley"),
        LcpKind::HyperKaehler { n } => (
            8 * n,
            Family::LcHyperKaehler,
            {
                let mut w = quaternionic_four_form(2 * n).unwrap();
                for _ in 1..n {
                    w = wedge(&w, &w).unwrap();
                }
                w
            },
            "fund-4",
        ),
    };
    let manifold = conformal_cone(id, dim, 0);
    let degree = base_form.degree();

    // Weight |x|^{-p} keeps the pointwise g-length constant on the cone.
    let base = base_form.clone();
    let field = FormField::new(degree, move |p: &ChartPoint| {
        let r2: f64 = p.u.iter().map(|x| x * x).sum();
        base.scale(r2.powf(-(degree as f64) / 2.0))
    });

    let mut fields = vec![(field_name.to_string(), field)];
    let mut expected = Vec::new();
    let mut complex_structure = None;
    match kind {
        LcpKind::Kaehler { n } => {
            complex_structure = Some(standard_complex_structure(n));
            // omega^r fields for r = 1 is `omega` above; harmonic section
            // holds exactly when 2r = n.
            let r = 1usize;
            if 2 * r == n {
                expected.push(ExpectedCheck::pass(
                    "omega",
                    "harmonic-section",
                    Provenance::Identity,
                ));
                expected.push(ExpectedCheck::eigen(
                    "omega",
                    ExpectedEigen::FactorTimesLeeNormSq {
                        factor: 2.0 * (n - r) as f64,
                    },
                    Provenance::Identity,
                ));
                expected.push(ExpectedCheck::pass(
                    "omega",
                    "harmonic-map",
                    Provenance::Identity,
                ));
                expected.push(ExpectedCheck::pass("omega", "lcp", Provenance::Identity));
                expected.push(ExpectedCheck::pass(
                    "omega",
                    "lck-defect",
                    Provenance::Identity,
                ));
                expected.push(ExpectedCheck::pass(
                    "omega",
                    "structure",
                    Provenance::Identity,
                ));
                expected.push(ExpectedCheck::pass(
                    "omega",
                    "two-route",
                    Provenance::CrossCheck,
                ));
                expected.push(ExpectedCheck::pass(
                    "omega",
                    "tension",
                    Provenance::CrossCheck,
                ));
            } else {
                expected.push(ExpectedCheck::fail(
                    "omega",
                    "harmonic-section",
                    Provenance::Identity,
                ));
                expected.push(ExpectedCheck::pass("omega", "lcp", Provenance::Identity));
            }
            expected.push(ExpectedCheck::pass(
                "omega",
                "constant-length",
                Provenance::Identity,
            ));
        }
        LcpKind::Spin7 => {
            expected.push(ExpectedCheck::pass(
                "cayley",
                "harmonic-section",
                Provenance::Identity,
            ));
            expected.push(ExpectedCheck::eigen(
                "cayley",
                ExpectedEigen::FactorTimesLeeNormSq { factor: 4.0 },
                Provenance::Identity,
            ));
            expected.push(ExpectedCheck::pass(
                "cayley",
                "harmonic-map",
                Provenance::Identity,
            ));
            expected.push(ExpectedCheck::pass("cayley", "lcp", Provenance::Identity));
            expected.push(ExpectedCheck::pass(
                "cayley",
                "spin7-defect",
                Provenance::Identity,
            ));
            expected.push(ExpectedCheck::pass(
                "cayley",
                "constant-length",
                Provenance::Identity,
            ));
            expected.push(ExpectedCheck::pass(
                "cayley",
                "two-route",
                Provenance::CrossCheck,
            ));
            expected.push(ExpectedCheck::pass(
                "cayley",
                "structure",
                Provenance::Identity,
            ));
        }
        LcpKind::HyperKaehler { .. } => {
            expected.push(ExpectedCheck::pass(
                "fund-4",
                "harmonic-section",
                Provenance::Identity,
            ));
            expected.push(ExpectedCheck::eigen(
                "fund-4",
                ExpectedEigen::FactorTimesLeeNormSq { factor: 4.0 },
                Provenance::Identity,
            ));
            expected.push(ExpectedCheck::pass("fund-4", "lcp", Provenance::Identity));
            expected.push(ExpectedCheck::pass(
                "fund-4",
                "constant-length",
                Provenance::Identity,
            ));
            expected.push(ExpectedCheck::pass(
                "fund-4",
                "structure",
                Provenance::Identity,
            ));
            expected.push(ExpectedCheck::pass(
                "fund-4",
                "two-route",
                Provenance::CrossCheck,
            ));
        }
    }

    // The flat-coefficient volume field is parallel on any model; keep it as
    // a control on the cones too.
    let _ = &mut fields;

    let params = match kind {
        LcpKind::Kaehler { n } => BTreeMap::from([("n".to_string(), n as f64)]),
        LcpKind::Spin7 => BTreeMap::new(),
        LcpKind::HyperKaehler { n } => BTreeMap::from([("n".to_string(), n as f64)]),
    };

    CatalogEntry {
        id: id.to_string(),
        family,
        manifold,
        fields,
        pairs: vec![],
        constants: BTreeMap::new(),
        pointwise: None,
        complex_structure,
        conformal: Some(cone_conformal(dim)),
        expected,
        params,
    }
}

#[derive(Clone, Copy)]
enum LcpKind {
    Kaehler { n: usize },
    Spin7,
    HyperKaehler { n: usize },
}

/// Generic (non-parallel Lee form) locally conformal Kaehler metric on R^4,
/// used to exercise the defect identity away from the zero locus.
fn build_lck_generic() -> CatalogEntry {
    let dim = 4usize;
    let phi = Arc::new(|u: &[f64]| 0.25 * u[0] + 0.1 * u[1] * u[1] - 0.15 * u[2] * u[3]);
    let manifold = conformal_generic("lck-generic", dim, phi.clone());
    let base = crate::gstructures::kaehler_form(2).unwrap();
    let phi_f = phi.clone();
    let field = FormField::new(2, move |p: &ChartPoint| {
        base.scale((2.0 * phi_f(&p.u)).exp())
    });
    let expected = vec![
        ExpectedCheck::pass("omega", "harmonic-section", Provenance::Identity),
        ExpectedCheck::pass("omega", "lcp", Provenance::Identity),
        ExpectedCheck::pass("omega", "lck-defect", Provenance::CrossCheck),
        ExpectedCheck::pass("omega", "constant-length", Provenance::Identity),
        ExpectedCheck::fail("omega", "harmonic-map", Provenance::CrossCheck),
    ];
    CatalogEntry {
        id: "lck-generic".into(),
        family: Family::LcKaehler,
        manifold,
        fields: vec![("omega".into(), field)],
        pairs: vec![],
        constants: BTreeMap::new(),
        pointwise: None,
        complex_structure: Some(standard_complex_structure(2)),
        conformal: Some(ConformalData {
            phi: Arc::new(|u: &[f64]| 0.25 * u[0] + 0.1 * u[1] * u[1] - 0.15 * u[2] * u[3]),
            grad: Arc::new(|u: &[f64]| vec![0.25, 0.2 * u[1], -0.15 * u[3], -0.15 * u[2]]),
            hess: Arc::new(|_u: &[f64]| {
                let mut h = DMatrix::<f64>::zeros(4, 4);
                h[(1, 1)] = 0.2;
                h[(2, 3)] = -0.15;
                h[(3, 2)] = -0.15;
                h
            }),
        }),
        expected,
        params: BTreeMap::new(),
    }
}

/// Builds a catalog entry from its string id.
pub fn build(id: &str) -> Result<CatalogEntry, CatalogError> {
    let id_lc = id.trim().to_ascii_lowercase();
    let (head, tail) = match id_lc.split_once(':') {
        Some((h, t)) => (h, Some(t)),
        None => (id_lc.as_str(), None),
    };
    match head {
        "round-sphere" => {
            let n: usize =
                tail.and_then(|t| t.parse().ok())
                    .ok_or_else(|| CatalogError::BadParams {
                        id: id.into(),
                        msg: "expected round-sphere:n".into(),
                    })?;
            if !(2..=7).contains(&n) {
                return Err(CatalogError::BadParams {
                    id: id.into(),
                    msg: "n must be in 2..=7".into(),
                });
            }
            Ok(build_round_sphere(n))
        }
        "nk-s6" => Ok(build_nk_s6()),
        "g2-s7" => {
            let sigma = match tail {
                None | Some("1") | Some("+1") => 1i8,
                Some("-1") => -1,
                Some(other) => {
                    return Err(CatalogError::BadParams {
                        id: id.into(),
                        msg: format!("bad sigma `{other}`"),
                    })
                }
            };
            Ok(build_g2_s7(sigma))
        }
        "sasakian-s5" => Ok(build_sasakian_s5()),
        "3sasakian-s7" => Ok(build_3sasakian_s7()),
        "kenmotsu" => {
            let parts: Vec<f64> = tail
                .map(|t| t.split(',').filter_map(|x| x.parse().ok()).collect())
                .unwrap_or_default();
            if parts.is_empty() {
                return Err(CatalogError::BadParams {
                    id: id.into(),
                    msg: "expected kenmotsu:r[,C[,K]]".into(),
                });
            }
            let r = parts[0];
            let c = parts.get(1).copied().unwrap_or(1.0);
            let k = parts.get(2).copied().unwrap_or(1.5);
            if r < 1.0 || c <= 0.0 || k <= 0.5 {
                return Err(CatalogError::BadParams {
                    id: id.into(),
                    msg: "need r >= 1, C > 0, K > 0.5".into(),
                });
            }
            Ok(build_kenmotsu(
                &format!("kenmotsu:{r}"),
                2,
                Warp::Power { r, c, k },
            ))
        }
        "kenmotsu-exp" => Ok(build_kenmotsu("kenmotsu-exp", 2, Warp::Exp { c: 1.0 })),
        "hopf-lck" | "lck-cone" => {
            let n: usize =
                tail.and_then(|t| t.parse().ok())
                    .ok_or_else(|| CatalogError::BadParams {
                        id: id.into(),
                        msg: "expected hopf-lck:n".into(),
                    })?;
            if !(2..=4).contains(&n) {
                return Err(CatalogError::BadParams {
                    id: id.into(),
                    msg: "n must be in 2..=4".into(),
                });
            }
            Ok(build_lcp_cone(
                &format!("hopf-lck:{n}"),
                LcpKind::Kaehler { n },
            ))
        }
        "lck-generic" => Ok(build_lck_generic()),
        "lcp-spin7" => Ok(build_lcp_cone("lcp-spin7", LcpKind::Spin7)),
        "lc-hk" => {
            let n: usize = tail.and_then(|t| t.parse().ok()).unwrap_or(1);
            if n != 1 {
                return Err(CatalogError::BadParams {
                    id: id.into(),
                    msg: "only lc-hk:1 is in the catalog".into(),
                });
            }
            Ok(build_lcp_cone("lc-hk:1", LcpKind::HyperKaehler { n }))
        }
        _ => Err(CatalogError::UnknownModel(id.into())),
    }
}

/// Expands a glob-ish selector (`*`, exact id, or prefix `foo*`) against the
/// canonical list.
pub fn select_ids(pattern: &str) -> Vec<String> {
    let pat = pattern.trim().to_ascii_lowercase();
    if pat == "*" || pat == "--all" || pat == "all" {
        return list_ids().iter().map(|s| s.to_string()).collect();
    }
    if let Some(prefix) = pat.strip_suffix('*') {
        return list_ids()
            .iter()
            .filter(|s| s.starts_with(prefix))
            .map(|s| s.to_string())
            .collect();
    }
    if list_ids().contains(&pat.as_str()) {
        vec![pat]
    } else {
        // Parameterized id not in the canonical list (kenmotsu:3 etc.).
        match build(&pat) {
            Ok(_) => vec![pat],
            Err(_) => vec![],
        }
    }
}

/// Point evaluation used by tests: the structure metric at a chart point.
pub fn metric_of(entry: &CatalogEntry, p: &ChartPoint) -> PointMetric {
    entry
        .manifold
        .metric_at(p, &entry.fd())
        .expect("metric inside chart")
}
