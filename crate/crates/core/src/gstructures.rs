//! Canonical constant-coefficient tensors of the supported G-structures on
//! the flat model fibre: quaternion/octonion multiplication, the Kaehler and
//! SU(3) forms, the G2 three-form pair, the Spin(7) four-form with its
//! two-form eigensplit, and the contact / 3-contact / quaternionic composite
//! forms.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use thiserror::Error;

use crate::multilinear::{
    contract, hodge_star, wedge, wedge_power, AlternatingForm, MultiIndex, PointMetric,
};

#[derive(Debug, Error)]
pub enum GStructureError {
    #[error("sigma must be +1 or -1, got {0}")]
    BadSigma(i8),
    #[error("parameter out of range: {0}")]
    BadParameter(String),
    #[error("two-form eigensplit produced unexpected eigenvalue {0}")]
    BadEigenvalue(f64),
    #[error(transparent)]
    Algebra(#[from] crate::multilinear::AlgebraError),
}

/// Structure constants of a real composition algebra: `e_i * e_j = sign * e_k`.
#[derive(Clone, Debug)]
pub struct AlgebraTable {
    dim: usize,
    table: Vec<Vec<(usize, f64)>>,
}

impl AlgebraTable {
    /// The quaternions on the basis (1, i, j, k).
    pub fn quaternion() -> Self {
        // Rows are left factors, columns right factors.
        let spec: [[(usize, f64); 4]; 4] = [
            [(0, 1.0), (1, 1.0), (2, 1.0), (3, 1.0)],
            [(1, 1.0), (0, -1.0), (3, 1.0), (2, -1.0)],
            [(2, 1.0), (3, -1.0), (0, -1.0), (1, 1.0)],
            [(3, 1.0), (2, 1.0), (1, -1.0), (0, -1.0)],
        ];
        AlgebraTable {
            dim: 4,
            table: spec.iter().map(|r| r.to_vec()).collect(),
        }
    }

    /// The octonions, built by Cayley-Dickson doubling of the quaternions:
    /// `(a, b)(c, d) = (ac - conj(d) b, d a + b conj(c))`.
    pub fn octonion() -> Self {
        Self::quaternion().double()
    }

    /// Cayley-Dickson doubling of this table.
    pub fn double(&self) -> Self {
        let m = self.dim;
        let n = 2 * m;
        let mut mul = vec![vec![(0usize, 0.0f64); n]; n];
        let base = |i: usize, j: usize| self.table[i][j];
        let conj_sign = |i: usize| if i == 0 { 1.0 } else { -1.0 };
        for i in 0..n {
            for j in 0..n {
                let (k, s) = match (i < m, j < m) {
                    // (a,0)(c,0) = (ac, 0)
                    (true, true) => base(i, j),
                    // (a,0)(0,d) = (0, d a)
                    (true, false) => {
                        let (k, s) = base(j - m, i);
                        (k + m, s)
                    }
                    // (0,b)(c,0) = (0, b conj(c))
                    (false, true) => {
                        let (k, s) = base(i - m, j);
                        (k + m, s * conj_sign(j))
                    }
                    // (0,b)(0,d) = (-conj(d) b, 0)
                    (false, false) => {
                        let (k, s) = base(j - m, i - m);
                        (k, -s * conj_sign(j - m))
                    }
                };
                mul[i][j] = (k, s);
            }
        }
        AlgebraTable { dim: n, table: mul }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Bilinear product of coefficient vectors.
    pub fn mul(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        let mut out = vec![0.0; self.dim];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0.0 {
                    continue;
                }
                let (k, s) = self.table[i][j];
                out[k] += s * xi * yj;
            }
        }
        out
    }

    /// Product of two imaginary parts, as vectors on the imaginary span
    /// (length dim-1, basis indices 1..dim).
    pub fn mul_imaginary(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let mut xe = vec![0.0; self.dim];
        let mut ye = vec![0.0; self.dim];
        xe[1..].copy_from_slice(x);
        ye[1..].copy_from_slice(y);
        let full = self.mul(&xe, &ye);
        full[1..].to_vec()
    }
}

/// Product of vectors under a structure-constant table.
pub fn algebra_mul(t: &AlgebraTable, x: &[f64], y: &[f64]) -> Vec<f64> {
    t.mul(x, y)
}

/// The standard Kaehler two-form `sum_k e^{2k} ^ e^{2k+1}` on R^{2n}.
pub fn kaehler_form(n: usize) -> Result<AlternatingForm, GStructureError> {
    if n < 1 {
        return Err(GStructureError::BadParameter("n >= 1 required".into()));
    }
    let dim = 2 * n;
    let mut w = AlternatingForm::zero(dim, 2);
    for k in 0..n {
        w.set(MultiIndex::new(&[2 * k, 2 * k + 1], dim).unwrap(), 1.0);
    }
    Ok(w)
}

/// Complex structure on R^{2n} paired with `kaehler_form`:
/// `J e_{2k} = -e_{2k+1}`, `J e_{2k+1} = e_{2k}`, so that `w = <., J.>`
/// has coefficient +1 on each (2k, 2k+1).
pub fn standard_complex_structure(n: usize) -> DMatrix<f64> {
    let dim = 2 * n;
    let mut j = DMatrix::<f64>::zeros(dim, dim);
    for k in 0..n {
        j[(2 * k + 1, 2 * k)] = -1.0;
        j[(2 * k, 2 * k + 1)] = 1.0;
    }
    j
}

/// The SU(3) model on R^6: the Kaehler form and the real and imaginary parts
/// of the complex volume form for the holomorphic coframe `e^{2k} - i e^{2k+1}`.
pub fn su3_forms() -> (AlternatingForm, AlternatingForm, AlternatingForm) {
    let omega = kaehler_form(3).unwrap();
    let mut psi_plus = AlternatingForm::zero(6, 3);
    let mut psi_minus = AlternatingForm::zero(6, 3);
    // (a0 - i b0)^(a1 - i b1)^(a2 - i b2) with a_k = e^{2k}, b_k = e^{2k+1}.
    let a = [0usize, 2, 4];
    let b = [1usize, 3, 5];
    let term = |idx: [usize; 3]| MultiIndex::new(&sorted3(idx), 6).map(|m| (m, sort_sign3(idx)));
    let add = |form: &mut AlternatingForm, idx: [usize; 3], c: f64| {
        let (mi, s) = term(idx).unwrap();
        form.add_to(mi, s * c);
    };
    add(&mut psi_plus, [a[0], a[1], a[2]], 1.0);
    add(&mut psi_plus, [b[0], b[1], a[2]], -1.0);
    add(&mut psi_plus, [b[0], a[1], b[2]], -1.0);
    add(&mut psi_plus, [a[0], b[1], b[2]], -1.0);
    add(&mut psi_minus, [b[0], a[1], a[2]], -1.0);
    add(&mut psi_minus, [a[0], b[1], a[2]], -1.0);
    add(&mut psi_minus, [a[0], a[1], b[2]], -1.0);
    add(&mut psi_minus, [b[0], b[1], b[2]], 1.0);
    (omega, psi_plus, psi_minus)
}

fn sorted3(mut v: [usize; 3]) -> [usize; 3] {
    v.sort_unstable();
    v
}

fn sort_sign3(v: [usize; 3]) -> f64 {
    let mut inv = 0;
    for i in 0..3 {
        for j in (i + 1)..3 {
            if v[i] > v[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// The G2 three-form `phi = sum_{i in Z7} e^i ^ e^{i+1} ^ e^{i+3}` on R^7
/// together with its Hodge dual for the orientation `e^0 ^ ... ^ e^6`.
pub fn g2_forms() -> (AlternatingForm, AlternatingForm) {
    let mut phi = AlternatingForm::zero(7, 3);
    let mut star_phi = AlternatingForm::zero(7, 4);
    for i in 0..7usize {
        let t = [i, (i + 1) % 7, (i + 3) % 7];
        phi.add_to(
            MultiIndex::new(
                &{
                    let mut s = t;
                    s.sort_unstable();
                    s
                },
                7,
            )
            .unwrap(),
            sort_sign3(t),
        );
        let q = [(i + 2) % 7, (i + 4) % 7, (i + 5) % 7, (i + 6) % 7];
        let mut s = q;
        s.sort_unstable();
        star_phi.add_to(MultiIndex::new(&s, 7).unwrap(), -sort_sign4(q));
    }
    (phi, star_phi)
}

fn sort_sign4(v: [usize; 4]) -> f64 {
    let mut inv = 0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            if v[i] > v[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// The Spin(7) fundamental four-form on R^8 in the Cayley basis
/// `(e, e_0, ..., e_6)` mapped to indices `(0, 1, ..., 7)`:
/// `Phi = sum_i e^(0,i+1,i+2,i+4-ish cyclic) - sigma sum_i (complementary four-planes)`.
pub fn spin7_form(sigma: i8) -> Result<AlternatingForm, GStructureError> {
    if sigma != 1 && sigma != -1 {
        return Err(GStructureError::BadSigma(sigma));
    }
    let s = sigma as f64;
    let ix = |i: usize| 1 + (i % 7); // e_i -> index 1+i, e -> index 0
    let mut phi = AlternatingForm::zero(8, 4);
    for i in 0..7usize {
        let t = [0usize, ix(i), ix(i + 1), ix(i + 3)];
        let mut srt = t;
        srt.sort_unstable();
        phi.add_to(MultiIndex::new(&srt, 8).unwrap(), sort_sign4(t));
        let q = [ix(i + 2), ix(i + 4), ix(i + 5), ix(i + 6)];
        let mut srt = q;
        srt.sort_unstable();
        phi.add_to(MultiIndex::new(&srt, 8).unwrap(), -s * sort_sign4(q));
    }
    Ok(phi)
}

/// The seven two-forms spanning the complement of spin(7) inside so(8):
/// `beta_i = sigma e_i ^ e + e_{i+1} ^ e_{i+3} + e_{i+4} ^ e_{i+5} + e_{i+2} ^ e_{i+6}`.
pub fn spin7_perp_basis(sigma: i8) -> Result<Vec<AlternatingForm>, GStructureError> {
    if sigma != 1 && sigma != -1 {
        return Err(GStructureError::BadSigma(sigma));
    }
    let s = sigma as f64;
    let ix = |i: usize| 1 + (i % 7);
    let mut out = Vec::with_capacity(7);
    for i in 0..7usize {
        let mut b = AlternatingForm::zero(8, 2);
        let put = |hi: usize, lo: usize, c: f64, b: &mut AlternatingForm| {
            if hi < lo {
                b.add_to(MultiIndex::new(&[hi, lo], 8).unwrap(), c);
            } else {
                b.add_to(MultiIndex::new(&[lo, hi], 8).unwrap(), -c);
            }
        };
        put(ix(i), 0, s, &mut b);
        put(ix(i + 1), ix(i + 3), 1.0, &mut b);
        put(ix(i + 4), ix(i + 5), 1.0, &mut b);
        put(ix(i + 2), ix(i + 6), 1.0, &mut b);
        out.push(b);
    }
    Ok(out)
}

/// Result of splitting a two-form on R^8 into its spin(7) part (eigenvalue +1
/// of `psi -> star(psi ^ Phi)`) and its complement part (eigenvalue -3).
pub struct Spin7Split {
    pub part21: AlternatingForm,
    pub part7: AlternatingForm,
}

/// Eigen-decomposition of the map `psi -> star(psi ^ Phi)` on two-forms.
/// The matrix is built in the orthonormal basis of increasing pairs; the
/// spectrum must be exactly {+1 (x21), -3 (x7)}.
pub struct Spin7Splitter {
    basis: Vec<MultiIndex>,
    proj21: DMatrix<f64>,
    proj7: DMatrix<f64>,
}

impl Spin7Splitter {
    pub fn new(phi: &AlternatingForm) -> Result<Self, GStructureError> {
        let m = PointMetric::euclidean(8);
        let basis = MultiIndex::enumerate(8, 2);
        let k = basis.len();
        let mut op = DMatrix::<f64>::zeros(k, k);
        for (col, mi) in basis.iter().enumerate() {
            let mut psi = AlternatingForm::zero(8, 2);
            psi.set(*mi, 1.0);
            let image = hodge_star(&wedge(&psi, phi)?, &m)?;
            for (row, mj) in basis.iter().enumerate() {
                op[(row, col)] = image.get(*mj);
            }
        }
        // Spectrum must be exactly {+1, -3}: check the minimal polynomial
        // (op - I)(op + 3I) = 0, then take the spectral projectors in closed
        // form. Iterative eigenvector routines lose accuracy on the 21-fold
        // degenerate cluster.
        let identity = DMatrix::<f64>::identity(k, k);
        let minpoly = (&op - &identity) * (&op + 3.0 * &identity);
        let defect = minpoly.abs().max();
        if defect > 1e-9 {
            let eig = SymmetricEigen::new(op.clone());
            let stray = eig
                .eigenvalues
                .iter()
                .copied()
                .find(|l| (l - 1.0).abs() > 1e-9 && (l + 3.0).abs() > 1e-9)
                .unwrap_or(defect);
            return Err(GStructureError::BadEigenvalue(stray));
        }
        let proj21 = (&op + 3.0 * &identity) / 4.0;
        let proj7 = (&identity - &op) / 4.0;
        let n21 = proj21.trace().round() as i64;
        let n7 = proj7.trace().round() as i64;
        if n21 != 21 || n7 != 7 {
            return Err(GStructureError::BadEigenvalue(n21 as f64));
        }
        Ok(Spin7Splitter {
            basis,
            proj21,
            proj7,
        })
    }

    pub fn eigenspace_dims(&self) -> (usize, usize) {
        (21, 7)
    }

    pub fn split(&self, psi: &AlternatingForm) -> Spin7Split {
        let k = self.basis.len();
        let mut v = DMatrix::<f64>::zeros(k, 1);
        for (row, mi) in self.basis.iter().enumerate() {
            v[(row, 0)] = psi.get(*mi);
        }
        let a = &self.proj21 * &v;
        let b = &self.proj7 * &v;
        let to_form = |col: &DMatrix<f64>| {
            let mut f = AlternatingForm::zero(8, 2);
            for (row, mi) in self.basis.iter().enumerate() {
                if col[(row, 0)] != 0.0 {
                    f.set(*mi, col[(row, 0)]);
                }
            }
            f
        };
        Spin7Split {
            part21: to_form(&a),
            part7: to_form(&b),
        }
    }
}

/// Splits a two-form into its (spin(7), complement) parts for the given Phi.
pub fn spin7_split(
    psi: &AlternatingForm,
    phi: &AlternatingForm,
) -> Result<Spin7Split, GStructureError> {
    Ok(Spin7Splitter::new(phi)?.split(psi))
}

/// Metric induced by the Spin(7) form through the contracted star pairing.
/// The sign is fixed so the Cayley frame comes out orthonormal with positive
/// squares under the star convention `b ^ star(a) = <b, a>_det vol`.
pub fn induced_metric_spin7(phi: &AlternatingForm) -> Result<PointMetric, GStructureError> {
    let e = PointMetric::euclidean(8);
    let mut g = DMatrix::<f64>::zeros(8, 8);
    let mut contractions = Vec::with_capacity(8);
    for a in 0..8 {
        let mut v = vec![0.0; 8];
        v[a] = 1.0;
        contractions.push(contract(&v, phi)?);
    }
    for a in 0..8 {
        let sb = hodge_star(&contractions[a], &e)?;
        for b in 0..8 {
            let prod = wedge(&contractions[b], &sb)?;
            g[(b, a)] = prod.get(MultiIndex::new(&[0, 1, 2, 3, 4, 5, 6, 7], 8).unwrap()) / 7.0;
        }
    }
    Ok(PointMetric::new(g, 1)?)
}

/// Standard almost contact model on R^{2n+1}: the Reeb direction is the last
/// coordinate, `eta = e^{2n}`, `F = sum_k e^{2k} ^ e^{2k+1} = <., phi .>`.
pub struct ContactModel {
    pub dim: usize,
    pub eta: AlternatingForm,
    pub f2: AlternatingForm,
    pub zeta: Vec<f64>,
    pub phi: DMatrix<f64>,
}

pub fn contact_model(n: usize) -> Result<ContactModel, GStructureError> {
    if n < 1 {
        return Err(GStructureError::BadParameter("n >= 1 required".into()));
    }
    let dim = 2 * n + 1;
    let mut eta = AlternatingForm::zero(dim, 1);
    eta.set(MultiIndex::new(&[2 * n], dim).unwrap(), 1.0);
    let mut f2 = AlternatingForm::zero(dim, 2);
    let mut phi = DMatrix::<f64>::zeros(dim, dim);
    for k in 0..n {
        f2.set(MultiIndex::new(&[2 * k, 2 * k + 1], dim).unwrap(), 1.0);
        phi[(2 * k + 1, 2 * k)] = -1.0;
        phi[(2 * k, 2 * k + 1)] = 1.0;
    }
    let mut zeta = vec![0.0; dim];
    zeta[2 * n] = 1.0;
    Ok(ContactModel {
        dim,
        eta,
        f2,
        zeta,
        phi,
    })
}

/// Left multiplication by the quaternion unit `u` (1, 2 or 3 for i, j, k)
/// block-diagonally on R^{4m} = H^m.
pub fn quaternion_left_mult(u: usize, m: usize) -> DMatrix<f64> {
    let t = AlgebraTable::quaternion();
    let dim = 4 * m;
    let mut out = DMatrix::<f64>::zeros(dim, dim);
    for blk in 0..m {
        for b in 0..4 {
            let (k, s) = t.table[u][b];
            out[(4 * blk + k, 4 * blk + b)] = s;
        }
    }
    out
}

/// Right multiplication by the quaternion unit `u` on R^{4m} = H^m.
pub fn quaternion_right_mult(u: usize, m: usize) -> DMatrix<f64> {
    let t = AlgebraTable::quaternion();
    let dim = 4 * m;
    let mut out = DMatrix::<f64>::zeros(dim, dim);
    for blk in 0..m {
        for b in 0..4 {
            let (k, s) = t.table[b][u];
            out[(4 * blk + k, 4 * blk + b)] = s;
        }
    }
    out
}

/// Almost contact metric 3-structure model on R^{4n+3}: quaternionic blocks
/// on the first 4n coordinates, Reeb directions on the last three, with
/// `phi_i(zeta_j) = zeta_k` for cyclic (ijk).
pub struct ThreeContactModel {
    pub dim: usize,
    pub eta: [AlternatingForm; 3],
    pub f2: [AlternatingForm; 3],
    pub zeta: [Vec<f64>; 3],
    pub phi: [DMatrix<f64>; 3],
}

pub fn three_contact_model(n: usize) -> Result<ThreeContactModel, GStructureError> {
    if n < 1 {
        return Err(GStructureError::BadParameter("n >= 1 required".into()));
    }
    let dim = 4 * n + 3;
    let mut phis = Vec::with_capacity(3);
    for u in 1..=3usize {
        let block = quaternion_left_mult(u, n);
        let mut phi = DMatrix::<f64>::zeros(dim, dim);
        phi.view_mut((0, 0), (4 * n, 4 * n)).copy_from(&block);
        // Rotation on the Reeb span: phi_i zeta_j = zeta_k, phi_i zeta_k = -zeta_j.
        let (i, j, k) = (u - 1, u % 3, (u + 1) % 3);
        let z = |a: usize| 4 * n + a;
        phi[(z(k), z(j))] = 1.0;
        phi[(z(j), z(k))] = -1.0;
        let _ = i;
        phis.push(phi);
    }
    let mut etas = Vec::with_capacity(3);
    let mut zetas = Vec::with_capacity(3);
    let mut fs = Vec::with_capacity(3);
    for a in 0..3usize {
        let mut eta = AlternatingForm::zero(dim, 1);
        eta.set(MultiIndex::new(&[4 * n + a], dim).unwrap(), 1.0);
        etas.push(eta);
        let mut zeta = vec![0.0; dim];
        zeta[4 * n + a] = 1.0;
        zetas.push(zeta);
        // F(X, Y) = <X, phi Y>: coefficient on (r, c) with r < c is phi[r][c].
        let mut f2 = AlternatingForm::zero(dim, 2);
        for r in 0..dim {
            for c in (r + 1)..dim {
                let v = phis[a][(r, c)];
                if v != 0.0 {
                    f2.set(MultiIndex::new(&[r, c], dim).unwrap(), v);
                }
            }
        }
        fs.push(f2);
    }
    Ok(ThreeContactModel {
        dim,
        eta: [etas.remove(0), etas.remove(0), etas.remove(0)],
        f2: [fs.remove(0), fs.remove(0), fs.remove(0)],
        zeta: [zetas.remove(0), zetas.remove(0), zetas.remove(0)],
        phi: [phis.remove(0), phis.remove(0), phis.remove(0)],
    })
}

/// The fundamental four-form `Omega = sum_{A=I,J,K} w_A ^ w_A` on R^{4m}.
pub fn quaternionic_four_form(m: usize) -> Result<AlternatingForm, GStructureError> {
    if m < 1 {
        return Err(GStructureError::BadParameter("m >= 1 required".into()));
    }
    let dim = 4 * m;
    let mut omega = AlternatingForm::zero(dim, 4);
    for u in 1..=3usize {
        let phi = quaternion_left_mult(u, m);
        let mut w = AlternatingForm::zero(dim, 2);
        for r in 0..dim {
            for c in (r + 1)..dim {
                if phi[(r, c)] != 0.0 {
                    w.set(MultiIndex::new(&[r, c], dim).unwrap(), phi[(r, c)]);
                }
            }
        }
        omega = omega.add(&wedge(&w, &w)?);
    }
    Ok(omega)
}

/// Composite forms on the flat contact / 3-contact / quaternionic fibres.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompositeKind {
    /// `eta ^ F^r` on R^{2n+1}.
    EtaWedgeFPower,
    /// `F^{r+1}` on R^{2n+1}.
    FPower,
    /// `sum_i eta_i ^ F_i^r` on R^{4n+3}.
    PsiR,
    /// `sum_i F_i^{r+1}` on R^{4n+3}.
    OmegaR,
    /// `(2n+3) eta_1 ^ eta_2 ^ eta_3 + sum_i eta_i ^ F_i`.
    Theta,
    /// Cyclic sum `eta_i ^ eta_j ^ F_k`.
    CyclicEtaEtaF,
    /// `F_1 ^ F_2 ^ F_3`.
    FFF,
    /// `eta_1 ^ F_2 + eta_2 ^ F_1`.
    EtaFSym,
    /// `F_1 ^ F_2`.
    FWedgeF,
    /// `F_3 + (2n+1) eta_1 ^ eta_2`.
    FkPlusEtaEta,
    /// `Omega^{(1)} + (2n+3) * cyclic eta_i ^ eta_j ^ F_k`.
    OmegaPlusCyclic,
    /// `sum_A w_A ^ w_A` on R^{4n}.
    QuaternionicOmega,
}

/// Builds the requested constant-coefficient composite.
pub fn contact_composites(
    n: usize,
    kind: CompositeKind,
    r: usize,
) -> Result<AlternatingForm, GStructureError> {
    use CompositeKind::*;
    let degree_guard = |deg: usize, dim: usize| -> Result<(), GStructureError> {
        if deg > dim {
            Err(GStructureError::BadParameter(format!(
                "degree {deg} exceeds dimension {dim}"
            )))
        } else {
            Ok(())
        }
    };
    match kind {
        EtaWedgeFPower => {
            let cm = contact_model(n)?;
            degree_guard(2 * r + 1, cm.dim)?;
            Ok(wedge(&cm.eta, &wedge_power(&cm.f2, r)?)?)
        }
        FPower => {
            let cm = contact_model(n)?;
            degree_guard(2 * (r + 1), cm.dim)?;
            Ok(wedge_power(&cm.f2, r + 1)?)
        }
        PsiR => {
            let tc = three_contact_model(n)?;
            degree_guard(2 * r + 1, tc.dim)?;
            let mut acc = AlternatingForm::zero(tc.dim, 2 * r + 1);
            for i in 0..3 {
                acc = acc.add(&wedge(&tc.eta[i], &wedge_power(&tc.f2[i], r)?)?);
            }
            Ok(acc)
        }
        OmegaR => {
            let tc = three_contact_model(n)?;
            degree_guard(2 * (r + 1), tc.dim)?;
            let mut acc = AlternatingForm::zero(tc.dim, 2 * (r + 1));
            for i in 0..3 {
                acc = acc.add(&wedge_power(&tc.f2[i], r + 1)?);
            }
            Ok(acc)
        }
        Theta => {
            let tc = three_contact_model(n)?;
            let etas = wedge(&tc.eta[0], &wedge(&tc.eta[1], &tc.eta[2])?)?;
            let mut acc = etas.scale((2 * n + 3) as f64);
            for i in 0..3 {
                acc = acc.add(&wedge(&tc.eta[i], &tc.f2[i])?);
            }
            Ok(acc)
        }
        CyclicEtaEtaF => {
            let tc = three_contact_model(n)?;
            let mut acc = AlternatingForm::zero(tc.dim, 4);
            for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
                acc = acc.add(&wedge(&tc.eta[i], &wedge(&tc.eta[j], &tc.f2[k])?)?);
            }
            Ok(acc)
        }
        FFF => {
            let tc = three_contact_model(n)?;
            degree_guard(6, tc.dim)?;
            Ok(wedge(&tc.f2[0], &wedge(&tc.f2[1], &tc.f2[2])?)?)
        }
        EtaFSym => {
            let tc = three_contact_model(n)?;
            Ok(wedge(&tc.eta[0], &tc.f2[1])?.add(&wedge(&tc.eta[1], &tc.f2[0])?))
        }
        FWedgeF => {
            let tc = three_contact_model(n)?;
            Ok(wedge(&tc.f2[0], &tc.f2[1])?)
        }
        FkPlusEtaEta => {
            let tc = three_contact_model(n)?;
            let ee = wedge(&tc.eta[0], &tc.eta[1])?;
            Ok(tc.f2[2].add(&ee.scale((2 * n + 1) as f64)))
        }
        OmegaPlusCyclic => {
            let omega1 = contact_composites(n, OmegaR, 1)?;
            let cyc = contact_composites(n, CyclicEtaEtaF, 0)?;
            Ok(omega1.add(&cyc.scale((2 * n + 3) as f64)))
        }
        QuaternionicOmega => quaternionic_four_form(n),
    }
}

/// A named bundle of canonical forms for one structure group.
pub struct CanonicalTensorSet {
    pub name: String,
    pub dim: usize,
    pub forms: BTreeMap<String, AlternatingForm>,
}

impl CanonicalTensorSet {
    pub fn u_n(n: usize) -> Result<Self, GStructureError> {
        let mut forms = BTreeMap::new();
        forms.insert("omega".to_string(), kaehler_form(n)?);
        Ok(CanonicalTensorSet {
            name: format!("u({n})"),
            dim: 2 * n,
            forms,
        })
    }

    pub fn su3() -> Self {
        let (omega, psi_plus, psi_minus) = su3_forms();
        let mut forms = BTreeMap::new();
        forms.insert("omega".to_string(), omega);
        forms.insert("psi-plus".to_string(), psi_plus);
        forms.insert("psi-minus".to_string(), psi_minus);
        CanonicalTensorSet {
            name: "su(3)".to_string(),
            dim: 6,
            forms,
        }
    }

    pub fn g2() -> Self {
        let (phi, star_phi) = g2_forms();
        let mut forms = BTreeMap::new();
        forms.insert("phi".to_string(), phi);
        forms.insert("star-phi".to_string(), star_phi);
        CanonicalTensorSet {
            name: "g2".to_string(),
            dim: 7,
            forms,
        }
    }

    pub fn spin7(sigma: i8) -> Result<Self, GStructureError> {
        let mut forms = BTreeMap::new();
        forms.insert("cayley".to_string(), spin7_form(sigma)?);
        Ok(CanonicalTensorSet {
            name: format!("spin7({sigma:+})"),
            dim: 8,
            forms,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multilinear::{alt_endo_first_slot, flat, form_inner, form_norm};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    const TOL: f64 = 1e-12;

    fn euclid(n: usize) -> PointMetric {
        PointMetric::euclidean(n)
    }

    fn norm2(f: &AlternatingForm, m: &PointMetric) -> f64 {
        form_inner(f, f, m).unwrap()
    }

    #[test]
    fn quaternion_table_basics() {
        let q = AlgebraTable::quaternion();
        // i * j = k
        let mut i = vec![0.0; 4];
        i[1] = 1.0;
        let mut j = vec![0.0; 4];
        j[2] = 1.0;
        let k = q.mul(&i, &j);
        assert_eq!(k, vec![0.0, 0.0, 0.0, 1.0]);
        // 1 acts as identity.
        let mut one = vec![0.0; 4];
        one[0] = 1.0;
        let x = vec![0.3, -1.0, 0.5, 2.0];
        assert_eq!(q.mul(&one, &x), x);
        assert_eq!(q.mul(&x, &one), x);
    }

    #[test]
    fn octonion_norm_multiplicative() {
        let o = AlgebraTable::octonion();
        let mut rng = StdRng::seed_from_u64(7);
        let nrm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        for _ in 0..100 {
            let x: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let y: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let xy = o.mul(&x, &y);
            assert!((nrm(&xy) - nrm(&x) * nrm(&y)).abs() < 1e-12);
        }
    }

    #[test]
    fn octonion_not_associative() {
        let o = AlgebraTable::octonion();
        let unit = |k: usize| {
            let mut v = vec![0.0; 8];
            v[k] = 1.0;
            v
        };
        // (e1 e2) e4 vs e1 (e2 e4): a genuine associator witness.
        let lhs = o.mul(&o.mul(&unit(1), &unit(2)), &unit(4));
        let rhs = o.mul(&unit(1), &o.mul(&unit(2), &unit(4)));
        let diff: f64 = lhs.iter().zip(rhs.iter()).map(|(a, b)| (a - b).abs()).sum();
        assert!(diff > 1.0, "expected non-associative triple, diff = {diff}");
    }

    #[test]
    fn kaehler_norm_values() {
        let m = euclid(6);
        let w = kaehler_form(3).unwrap();
        assert!((norm2(&w, &m) - 6.0).abs() < TOL);
        let ww = wedge(&w, &w).unwrap();
        // (2r)! r! n! / (n-r)! at n = 3, r = 2.
        assert!((norm2(&ww, &m) - 288.0).abs() < TOL);
    }

    #[test]
    fn su3_norms_and_orthogonality() {
        let m = euclid(6);
        let (omega, pp, pm) = su3_forms();
        assert!((norm2(&omega, &m) - 6.0).abs() < TOL);
        assert!((norm2(&pp, &m) - 24.0).abs() < TOL);
        assert!((norm2(&pm, &m) - 24.0).abs() < TOL);
        assert!(form_inner(&pp, &pm, &m).unwrap().abs() < TOL);
    }

    #[test]
    fn su3_psi_minus_from_complex_structure() {
        let (_, pp, pm) = su3_forms();
        let j = standard_complex_structure(3);
        let twisted = alt_endo_first_slot(&pp, &j).scale(-1.0);
        assert!(twisted.sub(&pm).is_zero_within(TOL));
    }

    #[test]
    fn g2_norms_and_duality() {
        let m = euclid(7);
        let (phi, star_phi) = g2_forms();
        assert!((norm2(&phi, &m) - 42.0).abs() < TOL);
        assert!((norm2(&star_phi, &m) - 168.0).abs() < TOL);
        let s = hodge_star(&phi, &m).unwrap();
        assert!(s.sub(&star_phi).is_zero_within(TOL));
    }

    #[test]
    fn spin7_volume_normalization() {
        for sigma in [1i8, -1] {
            let phi = spin7_form(sigma).unwrap();
            let sq = wedge(&phi, &phi).unwrap();
            let vol = MultiIndex::new(&[0, 1, 2, 3, 4, 5, 6, 7], 8).unwrap();
            assert!((sq.get(vol) - 14.0 * sigma as f64).abs() < TOL);
            assert_eq!(sq.nnz(), 1);
            let m = euclid(8);
            assert!((norm2(&phi, &m) - 336.0).abs() < TOL);
        }
    }

    #[test]
    fn spin7_contraction_pairing() {
        let phi = spin7_form(1).unwrap();
        let m = euclid(8);
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..20 {
            let x: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let y: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let cx = contract(&x, &phi).unwrap();
            let cy = contract(&y, &phi).unwrap();
            let lhs = form_inner(&cx, &cy, &m).unwrap();
            let dot: f64 = x.iter().zip(y.iter()).map(|(a, b)| a * b).sum();
            assert!((lhs - 42.0 * dot).abs() < 1e-10);
        }
    }

    #[test]
    fn spin7_split_spectrum_and_projectors() {
        for sigma in [1i8, -1] {
            let phi = spin7_form(sigma).unwrap();
            let splitter = Spin7Splitter::new(&phi).unwrap();
            assert_eq!(splitter.eigenspace_dims(), (21, 7));
            // Each beta_i lies in the eigenvalue -3 subspace.
            for beta in spin7_perp_basis(sigma).unwrap() {
                let s = splitter.split(&beta);
                assert!(s.part21.is_zero_within(1e-9), "sigma {sigma}");
                assert!(s.part7.sub(&beta).is_zero_within(1e-9));
            }
            // Random recombination.
            let mut rng = StdRng::seed_from_u64(3);
            for _ in 0..10 {
                let mut psi = AlternatingForm::zero(8, 2);
                for mi in MultiIndex::enumerate(8, 2) {
                    psi.set(mi, rng.gen_range(-1.0..1.0));
                }
                let s = splitter.split(&psi);
                let back = s.part21.add(&s.part7);
                assert!(back.sub(&psi).is_zero_within(1e-10));
                // Projector idempotence and mutual annihilation.
                let again = splitter.split(&s.part21);
                assert!(again.part21.sub(&s.part21).is_zero_within(1e-9));
                assert!(again.part7.is_zero_within(1e-9));
            }
        }
    }

    #[test]
    fn spin7_induced_metric_is_standard() {
        for sigma in [1i8, -1] {
            let phi = spin7_form(sigma).unwrap();
            let m = induced_metric_spin7(&phi).unwrap();
            for a in 0..8 {
                for b in 0..8 {
                    let expected = if a == b { 1.0 } else { 0.0 };
                    assert!(
                        (m.g()[(a, b)] - expected).abs() < TOL,
                        "sigma {sigma} entry ({a},{b}) = {}",
                        m.g()[(a, b)]
                    );
                }
            }
        }
    }

    #[test]
    fn contact_model_identities() {
        let cm = contact_model(2).unwrap();
        let dim = cm.dim;
        let m = euclid(dim);
        let mut rng = StdRng::seed_from_u64(5);
        // phi^2 = -I + eta (x) zeta
        let phi2 = &cm.phi * &cm.phi;
        for a in 0..dim {
            for b in 0..dim {
                let expected = -if a == b { 1.0 } else { 0.0 }
                    + cm.zeta[a] * if b == 2 * 2 { 1.0 } else { 0.0 };
                assert!((phi2[(a, b)] - expected).abs() < TOL);
            }
        }
        // <phi X, phi Y> = <X,Y> - eta(X) eta(Y) on random vectors.
        for _ in 0..20 {
            let x: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let y: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let px = &cm.phi * DMatrix::from_column_slice(dim, 1, &x);
            let py = &cm.phi * DMatrix::from_column_slice(dim, 1, &y);
            let lhs: f64 = (0..dim)
                .map(|i| px[(i, 0)] * py[(i, 0)])
                .collect::<Vec<_>>()
                .iter()
                .sum();
            let dot: f64 = x.iter().zip(y.iter()).map(|(a, b)| a * b).sum();
            let rhs = dot - x[dim - 1] * y[dim - 1];
            assert!((lhs - rhs).abs() < 1e-12);
        }
        let _ = m;
    }

    #[test]
    fn contact_composite_norms() {
        let m5 = euclid(5);
        // |eta ^ F^r|^2 = (2r+1)! r! n! / (n-r)! at n = 2, r = 1.
        let ef = contact_composites(2, CompositeKind::EtaWedgeFPower, 1).unwrap();
        assert!((norm2(&ef, &m5) - 12.0).abs() < TOL);
        // |F^{r+1}|^2 at n = 2, r = 0.
        let f1 = contact_composites(2, CompositeKind::FPower, 0).unwrap();
        assert!((norm2(&f1, &m5) - 4.0).abs() < TOL);
        // Degree overflow is an error.
        assert!(contact_composites(2, CompositeKind::FPower, 2).is_err());
    }

    #[test]
    fn three_contact_relations() {
        let n = 1usize;
        let tc = three_contact_model(n).unwrap();
        let dim = tc.dim;
        let cycles = [(0usize, 1usize, 2usize), (1, 2, 0), (2, 0, 1)];
        let apply = |m: &DMatrix<f64>, v: &[f64]| -> Vec<f64> {
            (0..dim)
                .map(|r| (0..dim).map(|c| m[(r, c)] * v[c]).sum())
                .collect()
        };
        let dot = |x: &[f64], y: &[f64]| -> f64 { x.iter().zip(y).map(|(a, b)| a * b).sum() };
        for &(i, j, k) in &cycles {
            // eta_i(zeta_j) = delta_ij
            for (a, z) in tc.zeta.iter().enumerate() {
                let v = tc.eta[i].eval_on(&[z]);
                let expected = if a == i { 1.0 } else { 0.0 };
                assert!((v - expected).abs() < TOL);
            }
            // phi_i zeta_j = -phi_j zeta_i = zeta_k
            let pz = apply(&tc.phi[i], &tc.zeta[j]);
            let zp = apply(&tc.phi[j], &tc.zeta[i]);
            for a in 0..dim {
                assert!((pz[a] - tc.zeta[k][a]).abs() < TOL);
                assert!((zp[a] + tc.zeta[k][a]).abs() < TOL);
            }
            // eta_i o phi_j = -eta_j o phi_i = eta_k on random vectors.
            let mut rng = StdRng::seed_from_u64(17);
            for _ in 0..10 {
                let x: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let a = tc.eta[i].eval_on(&[apply(&tc.phi[j], &x).as_slice()]);
                let b = tc.eta[j].eval_on(&[apply(&tc.phi[i], &x).as_slice()]);
                let c = tc.eta[k].eval_on(&[x.as_slice()]);
                assert!((a - c).abs() < 1e-12 && (b + c).abs() < 1e-12);
                // phi_i phi_j - eta_j (x) zeta_i = phi_k
                let pij = apply(&tc.phi[i], &apply(&tc.phi[j], &x));
                let corr = tc.eta[j].eval_on(&[x.as_slice()]);
                let pk = apply(&tc.phi[k], &x);
                for a in 0..dim {
                    assert!((pij[a] - corr * tc.zeta[i][a] - pk[a]).abs() < 1e-12);
                }
                // <phi_i X, phi_i Y> = <X, Y> - eta_i(X) eta_i(Y)
                let y: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let lhs = dot(&apply(&tc.phi[i], &x), &apply(&tc.phi[i], &y));
                let rhs = dot(&x, &y)
                    - tc.eta[i].eval_on(&[x.as_slice()]) * tc.eta[i].eval_on(&[y.as_slice()]);
                assert!((lhs - rhs).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn three_contact_interior_product_identity() {
        // sum_r (e_r . F_i) ^ (e_r . F_j) = -2 F_k - eta_i ^ eta_j, cyclic.
        let n = 1usize;
        let tc = three_contact_model(n).unwrap();
        let dim = tc.dim;
        for (i, j, k) in [(0usize, 1usize, 2usize), (1, 2, 0), (2, 0, 1)] {
            let mut acc = AlternatingForm::zero(dim, 2);
            for r in 0..dim {
                let mut e = vec![0.0; dim];
                e[r] = 1.0;
                let a = contract(&e, &tc.f2[i]).unwrap();
                let b = contract(&e, &tc.f2[j]).unwrap();
                acc = acc.add(&wedge(&a, &b).unwrap());
            }
            let expected = tc.f2[k]
                .scale(-2.0)
                .sub(&wedge(&tc.eta[i], &tc.eta[j]).unwrap());
            assert!(
                acc.sub(&expected).is_zero_within(TOL),
                "cycle ({i},{j},{k})"
            );
        }
    }

    #[test]
    fn quaternionic_four_form_norm_locked() {
        let m = euclid(8);
        let omega = quaternionic_four_form(2).unwrap();
        // Brute-force full-sum norm, frozen.
        assert!((norm2(&omega, &m) - 2880.0).abs() < TOL);
    }

    #[test]
    fn composite_theta_norm() {
        let m = euclid(7);
        let theta = contact_composites(1, CompositeKind::Theta, 0).unwrap();
        assert!((norm2(&theta, &m) - 60.0).abs() < TOL);
    }

    #[test]
    fn musical_consistency_of_f() {
        // F = <., phi .> means contracting zeta gives zero and F has no eta part.
        let cm = contact_model(2).unwrap();
        let c = contract(&cm.zeta, &cm.f2).unwrap();
        assert!(c.is_zero_within(TOL));
        let m = euclid(5);
        let eta_flat = flat(&cm.zeta, &m).unwrap();
        assert!(eta_flat.sub(&cm.eta).is_zero_within(TOL));
        assert!((form_norm(&cm.eta, &m) - 1.0).abs() < TOL);
    }
}
