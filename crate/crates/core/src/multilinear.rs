//! Exterior algebra over a finite-dimensional real inner-product space.
//!
//! Forms are stored sparsely on strictly increasing multi-indices. The fibre
//! metric on p-forms is the full summation over all ordered p-tuples of an
//! orthonormal frame, which equals p! times the determinant pairing; this is
//! the normalization under which the Kaehler form on R^6 has squared norm 6
//! and the G2 three-form has squared norm 42.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Mutex;

use nalgebra::{Cholesky, DMatrix, DVector};
use thiserror::Error;

/// Absolute tolerance for purely algebraic coefficient comparisons.
pub const TOL_ALG: f64 = 1e-12;

/// Coefficients below this threshold are dropped from sparse storage.
const PRUNE_EPS: f64 = 0.0;

#[derive(Debug, Error, PartialEq)]
pub enum AlgebraError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("degree overflow: {p} + {q} exceeds dimension {n}")]
    DegreeOverflow { p: usize, q: usize, n: usize },
    #[error("cannot contract a 0-form")]
    ContractScalar,
    #[error("multi-index entries must be strictly increasing and < {0}")]
    BadMultiIndex(usize),
    #[error("metric is singular or not positive definite")]
    SingularMetric,
    #[error("vector length {0} does not match dimension {1}")]
    BadVectorLength(usize, usize),
}

/// Strictly increasing index tuple, encoded as a bit set over `0..n`.
///
/// Bit `i` set means basis index `i` is present; the encoding makes the
/// increasing-order invariant structural and wedge signs a popcount.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex {
    bits: u32,
}

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex { bits: 0 };

    /// Builds from a strictly increasing list of indices below `dim`.
    pub fn new(indices: &[usize], dim: usize) -> Result<Self, AlgebraError> {
        let mut bits = 0u32;
        let mut prev: Option<usize> = None;
        for &i in indices {
            if i >= dim || i >= 32 || prev.map_or(false, |p| p >= i) {
                return Err(AlgebraError::BadMultiIndex(dim));
            }
            bits |= 1 << i;
            prev = Some(i);
        }
        Ok(MultiIndex { bits })
    }

    pub fn from_bits(bits: u32) -> Self {
        MultiIndex { bits }
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn degree(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.bits & (1 << i) != 0
    }

    /// Ascending list of the member indices.
    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|&i| self.contains(i)).collect()
    }

    /// Position of `i` within the ascending tuple (number of members below it).
    pub fn position(self, i: usize) -> usize {
        (self.bits & ((1u32 << i) - 1)).count_ones() as usize
    }

    /// Complement within `0..n`.
    pub fn complement(self, n: usize) -> Self {
        let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        MultiIndex {
            bits: full & !self.bits,
        }
    }

    /// Sign of the shuffle merging `self` and `other` into increasing order,
    /// or `None` when they overlap.
    pub fn merge_sign(self, other: MultiIndex) -> Option<(MultiIndex, f64)> {
        if self.bits & other.bits != 0 {
            return None;
        }
        // Count transpositions: for each member b of `other`, the members of
        // `self` that lie strictly above b each contribute one swap.
        let mut swaps = 0u32;
        let mut rest = other.bits;
        while rest != 0 {
            let b = rest.trailing_zeros();
            swaps += (self.bits >> (b + 1)).count_ones();
            rest &= rest - 1;
        }
        let sign = if swaps % 2 == 0 { 1.0 } else { -1.0 };
        Some((
            MultiIndex {
                bits: self.bits | other.bits,
            },
            sign,
        ))
    }

    /// Removes index `i`, returning the reduced tuple and the sign (-1)^pos.
    pub fn remove(self, i: usize) -> Option<(MultiIndex, f64)> {
        if !self.contains(i) {
            return None;
        }
        let sign = if self.position(i) % 2 == 0 { 1.0 } else { -1.0 };
        Some((
            MultiIndex {
                bits: self.bits & !(1 << i),
            },
            sign,
        ))
    }

    /// All increasing multi-indices of the given degree in `0..n`.
    pub fn enumerate(n: usize, p: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let full = if n >= 32 { u32::MAX } else { (1u32 << n) - 1 };
        for bits in 0..=full {
            if bits.count_ones() as usize == p {
                out.push(MultiIndex { bits });
            }
        }
        out
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.indices())
    }
}

/// A degree-p alternating tensor on an n-dimensional space, sparse on
/// increasing multi-indices with respect to a declared coframe.
///
/// The coefficient on `I = (i1 < ... < ip)` is the value on
/// `(e_{i1}, ..., e_{ip})`; the wedge follows the determinant convention,
/// `(e^0 ^ e^1)(e_0, e_1) = 1`.
#[derive(Clone, PartialEq)]
pub struct AlternatingForm {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<u32, f64>,
}

impl AlternatingForm {
    pub fn zero(dim: usize, degree: usize) -> Self {
        assert!(degree <= dim && dim <= 32, "degree 0..=dim required");
        AlternatingForm {
            dim,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn scalar(dim: usize, value: f64) -> Self {
        let mut f = Self::zero(dim, 0);
        f.set(MultiIndex::EMPTY, value);
        f
    }

    /// Basis p-form `e^{i1} ^ ... ^ e^{ip}` with unit coefficient.
    pub fn basis(dim: usize, indices: &[usize]) -> Self {
        let mi = MultiIndex::new(indices, dim).expect("valid increasing indices");
        let mut f = Self::zero(dim, indices.len());
        f.set(mi, 1.0);
        f
    }

    /// A one-form with the given coefficient vector.
    pub fn one_form(dim: usize, comps: &[f64]) -> Self {
        assert_eq!(comps.len(), dim);
        let mut f = Self::zero(dim, 1);
        for (i, &c) in comps.iter().enumerate() {
            if c != 0.0 {
                f.set(MultiIndex::from_bits(1 << i), c);
            }
        }
        f
    }

    pub fn from_coeffs(
        dim: usize,
        degree: usize,
        entries: impl IntoIterator<Item = (MultiIndex, f64)>,
    ) -> Self {
        let mut f = Self::zero(dim, degree);
        for (mi, c) in entries {
            debug_assert_eq!(mi.degree(), degree);
            f.add_to(mi, c);
        }
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn get(&self, mi: MultiIndex) -> f64 {
        self.coeffs.get(&mi.bits()).copied().unwrap_or(0.0)
    }

    pub fn set(&mut self, mi: MultiIndex, value: f64) {
        debug_assert_eq!(mi.degree(), self.degree);
        if value == PRUNE_EPS {
            self.coeffs.remove(&mi.bits());
        } else {
            self.coeffs.insert(mi.bits(), value);
        }
    }

    pub fn add_to(&mut self, mi: MultiIndex, value: f64) {
        if value == 0.0 {
            return;
        }
        let slot = self.coeffs.entry(mi.bits()).or_insert(0.0);
        *slot += value;
        if *slot == 0.0 {
            self.coeffs.remove(&mi.bits());
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (MultiIndex, f64)> + '_ {
        self.coeffs
            .iter()
            .map(|(&b, &c)| (MultiIndex::from_bits(b), c))
    }

    pub fn nnz(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero_within(&self, tol: f64) -> bool {
        self.coeffs.values().all(|c| c.abs() <= tol)
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c *= s;
        }
        if s == 0.0 {
            out.coeffs.clear();
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (mi, c) in other.iter() {
            out.add_to(mi, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Evaluates the form on `p` vectors given by their frame components.
    pub fn eval_on(&self, vectors: &[&[f64]]) -> f64 {
        assert_eq!(vectors.len(), self.degree);
        if self.degree == 0 {
            return self.get(MultiIndex::EMPTY);
        }
        let p = self.degree;
        let mut total = 0.0;
        let mut minor = DMatrix::<f64>::zeros(p, p);
        for (mi, c) in self.iter() {
            let idx = mi.indices();
            for (row, v) in vectors.iter().enumerate() {
                for (col, &i) in idx.iter().enumerate() {
                    minor[(row, col)] = v[i];
                }
            }
            total += c * minor.clone().determinant();
        }
        total
    }
}

impl fmt::Debug for AlternatingForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form(dim={}, p={}, [", self.dim, self.degree)?;
        for (k, (mi, c)) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}: {:.6}", mi, c)?;
        }
        write!(f, "])")
    }
}

/// Pointwise metric data: the Gram matrix of the working frame, its inverse,
/// and an explicit orientation sign relative to the declared frame order.
pub struct PointMetric {
    g: DMatrix<f64>,
    g_inv: DMatrix<f64>,
    sqrt_det: f64,
    orientation: f64,
    compound_cache: Mutex<BTreeMap<usize, DMatrix<f64>>>,
}

impl Clone for PointMetric {
    fn clone(&self) -> Self {
        PointMetric {
            g: self.g.clone(),
            g_inv: self.g_inv.clone(),
            sqrt_det: self.sqrt_det,
            orientation: self.orientation,
            compound_cache: Mutex::new(self.compound_cache.lock().unwrap().clone()),
        }
    }
}

impl PointMetric {
    pub fn new(g: DMatrix<f64>, orientation: i8) -> Result<Self, AlgebraError> {
        let n = g.nrows();
        if g.ncols() != n {
            return Err(AlgebraError::DimMismatch(n, g.ncols()));
        }
        for i in 0..n {
            for j in 0..i {
                if (g[(i, j)] - g[(j, i)]).abs() > 1e-9 * (1.0 + g[(i, i)].abs()) {
                    return Err(AlgebraError::SingularMetric);
                }
            }
        }
        let chol = Cholesky::new(g.clone()).ok_or(AlgebraError::SingularMetric)?;
        let g_inv = chol.inverse();
        let det = chol.determinant();
        Ok(PointMetric {
            g,
            g_inv,
            sqrt_det: det.sqrt(),
            orientation: orientation as f64,
            compound_cache: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn euclidean(n: usize) -> Self {
        Self::new(DMatrix::identity(n, n), 1).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    pub fn g(&self) -> &DMatrix<f64> {
        &self.g
    }

    pub fn g_inv(&self) -> &DMatrix<f64> {
        &self.g_inv
    }

    pub fn sqrt_det(&self) -> f64 {
        self.sqrt_det
    }

    pub fn orientation(&self) -> f64 {
        self.orientation
    }

    pub fn inner_vec(&self, x: &[f64], y: &[f64]) -> f64 {
        let n = self.dim();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += self.g[(i, j)] * x[i] * y[j];
            }
        }
        s
    }

    /// p-th compound of the inverse metric: entry (I, J) is det(g^{-1}[I, J]),
    /// rows and columns ordered by `MultiIndex::enumerate`.
    fn compound_inverse(&self, p: usize) -> DMatrix<f64> {
        if let Some(m) = self.compound_cache.lock().unwrap().get(&p) {
            return m.clone();
        }
        let n = self.dim();
        let idx = MultiIndex::enumerate(n, p);
        let m = idx.len();
        let mut out = DMatrix::<f64>::zeros(m, m);
        let mut minor = DMatrix::<f64>::zeros(p, p);
        for (a, mi) in idx.iter().enumerate() {
            let rows = mi.indices();
            for (b, mj) in idx.iter().enumerate() {
                let cols = mj.indices();
                for (r, &i) in rows.iter().enumerate() {
                    for (c, &j) in cols.iter().enumerate() {
                        minor[(r, c)] = self.g_inv[(i, j)];
                    }
                }
                out[(a, b)] = if p == 0 {
                    1.0
                } else {
                    minor.clone().determinant()
                };
            }
        }
        self.compound_cache.lock().unwrap().insert(p, out.clone());
        out
    }

    /// Gram-Schmidt orthonormal frame from the standard basis in fixed order.
    /// Column k is the k-th frame vector in basis components.
    pub fn orthonormal_frame(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut frame = DMatrix::<f64>::identity(n, n);
        for k in 0..n {
            for j in 0..k {
                let mut dot = 0.0;
                for a in 0..n {
                    for b in 0..n {
                        dot += self.g[(a, b)] * frame[(a, k)] * frame[(b, j)];
                    }
                }
                for a in 0..n {
                    let f = frame[(a, j)];
                    frame[(a, k)] -= dot * f;
                }
            }
            let mut norm2 = 0.0;
            for a in 0..n {
                for b in 0..n {
                    norm2 += self.g[(a, b)] * frame[(a, k)] * frame[(b, k)];
                }
            }
            let inv = 1.0 / norm2.sqrt();
            for a in 0..n {
                frame[(a, k)] *= inv;
            }
        }
        frame
    }
}

impl fmt::Debug for PointMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PointMetric(n={}, or={})", self.dim(), self.orientation)
    }
}

/// Exterior product. Degree overflow (p + q > n) is a caller error.
pub fn wedge(a: &AlternatingForm, b: &AlternatingForm) -> Result<AlternatingForm, AlgebraError> {
    if a.dim() != b.dim() {
        return Err(AlgebraError::DimMismatch(a.dim(), b.dim()));
    }
    let (p, q, n) = (a.degree(), b.degree(), a.dim());
    if p + q > n {
        return Err(AlgebraError::DegreeOverflow { p, q, n });
    }
    let mut out = AlternatingForm::zero(n, p + q);
    for (mi, ca) in a.iter() {
        for (mj, cb) in b.iter() {
            if let Some((merged, sign)) = mi.merge_sign(mj) {
                out.add_to(merged, sign * ca * cb);
            }
        }
    }
    Ok(out)
}

/// Interior product of a vector (frame components) with a form:
/// `(v . a)(Y_1, ..., Y_{p-1}) = a(v, Y_1, ..., Y_{p-1})`.
pub fn contract(v: &[f64], a: &AlternatingForm) -> Result<AlternatingForm, AlgebraError> {
    if a.degree() == 0 {
        return Err(AlgebraError::ContractScalar);
    }
    if v.len() != a.dim() {
        return Err(AlgebraError::BadVectorLength(v.len(), a.dim()));
    }
    let mut out = AlternatingForm::zero(a.dim(), a.degree() - 1);
    for (mi, c) in a.iter() {
        for i in mi.indices() {
            if v[i] != 0.0 {
                let (reduced, sign) = mi.remove(i).unwrap();
                out.add_to(reduced, sign * v[i] * c);
            }
        }
    }
    Ok(out)
}

/// Interior product with a one-form, sharped through the metric first.
pub fn contract_form(
    theta: &AlternatingForm,
    a: &AlternatingForm,
    m: &PointMetric,
) -> Result<AlternatingForm, AlgebraError> {
    let v = sharp(theta, m)?;
    contract(&v, a)
}

/// Hodge star with respect to the metric and the declared orientation:
/// `b ^ star(a) = <b, a>_det vol` for the positively oriented unit volume.
pub fn hodge_star(a: &AlternatingForm, m: &PointMetric) -> Result<AlternatingForm, AlgebraError> {
    let n = a.dim();
    if m.dim() != n {
        return Err(AlgebraError::DimMismatch(m.dim(), n));
    }
    let p = a.degree();
    // Raise all indices through the compound inverse metric.
    let idx = MultiIndex::enumerate(n, p);
    let comp = m.compound_inverse(p);
    let mut raised = vec![0.0; idx.len()];
    let pos: BTreeMap<u32, usize> = idx
        .iter()
        .enumerate()
        .map(|(k, mi)| (mi.bits(), k))
        .collect();
    for (mi, c) in a.iter() {
        let b = pos[&mi.bits()];
        for (aa, r) in raised.iter_mut().enumerate() {
            *r += comp[(aa, b)] * c;
        }
    }
    let scale = m.orientation() * m.sqrt_det();
    let mut out = AlternatingForm::zero(n, n - p);
    for (k, mi) in idx.iter().enumerate() {
        if raised[k] == 0.0 {
            continue;
        }
        let compl = mi.complement(n);
        let (_, sign) = mi.merge_sign(compl).expect("disjoint complement");
        out.add_to(compl, sign * scale * raised[k]);
    }
    Ok(out)
}

/// Fibre metric on forms: full summation over all ordered p-tuples of an
/// orthonormal frame, equal to p! times the determinant pairing.
pub fn form_inner(
    a: &AlternatingForm,
    b: &AlternatingForm,
    m: &PointMetric,
) -> Result<f64, AlgebraError> {
    if a.dim() != b.dim() || a.dim() != m.dim() {
        return Err(AlgebraError::DimMismatch(a.dim(), b.dim().max(m.dim())));
    }
    if a.degree() != b.degree() {
        return Err(AlgebraError::DegreeMismatch(a.degree(), b.degree()));
    }
    let p = a.degree();
    if p == 0 {
        return Ok(a.get(MultiIndex::EMPTY) * b.get(MultiIndex::EMPTY));
    }
    let comp = m.compound_inverse(p);
    let idx = MultiIndex::enumerate(a.dim(), p);
    let pos: BTreeMap<u32, usize> = idx
        .iter()
        .enumerate()
        .map(|(k, mi)| (mi.bits(), k))
        .collect();
    let mut det_pairing = 0.0;
    for (mi, ca) in a.iter() {
        let r = pos[&mi.bits()];
        for (mj, cb) in b.iter() {
            let c = pos[&mj.bits()];
            det_pairing += ca * cb * comp[(r, c)];
        }
    }
    let factorial: f64 = (1..=p).map(|k| k as f64).product();
    Ok(factorial * det_pairing)
}

pub fn form_norm(a: &AlternatingForm, m: &PointMetric) -> f64 {
    form_inner(a, a, m)
        .map(|x| x.max(0.0).sqrt())
        .unwrap_or(0.0)
}

/// Lowers a vector to a one-form: `flat(X) = <X, .>`.
pub fn flat(v: &[f64], m: &PointMetric) -> Result<AlternatingForm, AlgebraError> {
    let n = m.dim();
    if v.len() != n {
        return Err(AlgebraError::BadVectorLength(v.len(), n));
    }
    let mut comps = vec![0.0; n];
    for (i, c) in comps.iter_mut().enumerate() {
        for (j, &vj) in v.iter().enumerate() {
            *c += m.g()[(i, j)] * vj;
        }
    }
    Ok(AlternatingForm::one_form(n, &comps))
}

/// Raises a one-form to a vector: `<sharp(theta), .> = theta`.
pub fn sharp(theta: &AlternatingForm, m: &PointMetric) -> Result<Vec<f64>, AlgebraError> {
    let n = m.dim();
    if theta.dim() != n || theta.degree() != 1 {
        return Err(AlgebraError::DegreeMismatch(theta.degree(), 1));
    }
    let mut comps = DVector::<f64>::zeros(n);
    for (mi, c) in theta.iter() {
        comps[mi.indices()[0]] = c;
    }
    let raised = m.g_inv() * comps;
    Ok(raised.iter().copied().collect())
}

/// One-form coefficient view of a degree-1 form.
pub fn one_form_components(theta: &AlternatingForm) -> Vec<f64> {
    assert_eq!(theta.degree(), 1);
    let mut out = vec![0.0; theta.dim()];
    for (mi, c) in theta.iter() {
        out[mi.indices()[0]] = c;
    }
    out
}

/// Wedge power `a^r` (r = 0 gives the scalar 1).
pub fn wedge_power(a: &AlternatingForm, r: usize) -> Result<AlternatingForm, AlgebraError> {
    let mut out = AlternatingForm::scalar(a.dim(), 1.0);
    for _ in 0..r {
        out = wedge(&out, a)?;
    }
    Ok(out)
}

/// Alternation of an endomorphism applied to the first slot:
/// `(X_1, ..., X_p) -> Alt[a(A X_1, X_2, ..., X_p)]`.
///
/// When `a(A., ..., .)` is already alternating this is exactly that form.
pub fn alt_endo_first_slot(a: &AlternatingForm, endo: &DMatrix<f64>) -> AlternatingForm {
    let n = a.dim();
    let p = a.degree();
    assert_eq!(endo.nrows(), n);
    assert_eq!(endo.ncols(), n);
    if p == 0 {
        return a.clone();
    }
    let mut out = AlternatingForm::zero(n, p);
    for mi in MultiIndex::enumerate(n, p) {
        let idx = mi.indices();
        let mut value = 0.0;
        for (t, &it) in idx.iter().enumerate() {
            let slot_sign = if t % 2 == 0 { 1.0 } else { -1.0 };
            let (rest, _) = mi.remove(it).unwrap();
            // a(A e_it, e_rest...) = sum_m endo[m][it] a(e_m, e_rest...)
            for m in 0..n {
                let c = endo[(m, it)];
                if c == 0.0 || rest.contains(m) {
                    continue;
                }
                let single = MultiIndex::from_bits(1 << m);
                if let Some((full, merge_sign)) = single.merge_sign(rest) {
                    value += slot_sign * c * merge_sign * a.get(full);
                }
            }
        }
        if value != 0.0 {
            out.set(mi, value / p as f64);
        }
    }
    out
}

/// Applies an so(n) endomorphism to a p-form as a derivation with the sign
/// convention of the dual action: `(A . a)(X_1,...,X_p) = -sum_t a(..., A X_t, ...)`.
pub fn endo_derivation_on_form(a: &AlternatingForm, endo: &DMatrix<f64>) -> AlternatingForm {
    let n = a.dim();
    let p = a.degree();
    let mut out = AlternatingForm::zero(n, p);
    for (mi, c) in a.iter() {
        let idx = mi.indices();
        for &it in &idx {
            let (rest, rm_sign) = mi.remove(it).unwrap();
            // The original index `it` migrates to `m` with weight endo[it][m]:
            // a coefficient on index m of the argument A X pairs row `it`.
            for m in 0..n {
                let e = endo[(it, m)];
                if e == 0.0 || rest.contains(m) {
                    continue;
                }
                let single = MultiIndex::from_bits(1 << m);
                if let Some((full, merge_sign)) = single.merge_sign(rest) {
                    out.add_to(full, -c * e * rm_sign * merge_sign);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kaehler3() -> AlternatingForm {
        // e^0^e^1 + e^2^e^3 + e^4^e^5 on R^6
        let mut f = AlternatingForm::zero(6, 2);
        for k in 0..3 {
            f.set(MultiIndex::new(&[2 * k, 2 * k + 1], 6).unwrap(), 1.0);
        }
        f
    }

    #[test]
    fn wedge_basis_case() {
        let a = AlternatingForm::basis(3, &[0]);
        let b = AlternatingForm::basis(3, &[1]);
        let w = wedge(&a, &b).unwrap();
        assert_eq!(w.get(MultiIndex::new(&[0, 1], 3).unwrap()), 1.0);
        assert_eq!(w.nnz(), 1);
    }

    #[test]
    fn wedge_odd_degree_squares_to_zero() {
        let mut a = AlternatingForm::zero(5, 1);
        a.set(MultiIndex::new(&[0], 5).unwrap(), 2.0);
        a.set(MultiIndex::new(&[3], 5).unwrap(), -1.5);
        let w = wedge(&a, &a).unwrap();
        assert!(w.is_zero_within(TOL_ALG));
    }

    #[test]
    fn wedge_overflow_is_error() {
        let a = AlternatingForm::basis(3, &[0, 1]);
        let b = AlternatingForm::basis(3, &[0, 2]);
        assert!(matches!(
            wedge(&a, &b),
            Err(AlgebraError::DegreeOverflow { .. })
        ));
    }

    #[test]
    fn kaehler_norms() {
        let m = PointMetric::euclidean(6);
        let w = kaehler3();
        assert!((form_inner(&w, &w, &m).unwrap() - 6.0).abs() < TOL_ALG);
        let ww = wedge(&w, &w).unwrap();
        // Coefficients are 2 on the three mixed four-index sets.
        assert_eq!(ww.get(MultiIndex::new(&[0, 1, 2, 3], 6).unwrap()), 2.0);
        assert_eq!(ww.get(MultiIndex::new(&[0, 1, 4, 5], 6).unwrap()), 2.0);
        assert_eq!(ww.get(MultiIndex::new(&[2, 3, 4, 5], 6).unwrap()), 2.0);
        // Full-sum squared norm: 3 coefficients of 2, 4! per unit basis form.
        let expected = 3.0 * 4.0 * 24.0;
        assert!((form_inner(&ww, &ww, &m).unwrap() - expected).abs() < TOL_ALG);
    }

    #[test]
    fn wedge_power_norm_formula() {
        // |omega^r|^2 = (2r)! r! n! / (n-r)! for the standard Kaehler form.
        let m = PointMetric::euclidean(6);
        let w = kaehler3();
        let fact = |k: usize| -> f64 { (1..=k).map(|x| x as f64).product() };
        for r in 1..=3usize {
            let wr = wedge_power(&w, r).unwrap();
            let expected = fact(2 * r) * fact(r) * fact(3) / fact(3 - r);
            assert!(
                (form_inner(&wr, &wr, &m).unwrap() - expected).abs() < 1e-9,
                "r = {r}"
            );
        }
    }

    #[test]
    fn contract_basis() {
        let a = AlternatingForm::basis(3, &[0, 1]);
        let e0 = [1.0, 0.0, 0.0];
        let c = contract(&e0, &a).unwrap();
        assert_eq!(c.get(MultiIndex::new(&[1], 3).unwrap()), 1.0);
        assert_eq!(c.nnz(), 1);
    }

    #[test]
    fn contract_twice_vanishes() {
        let mut a = AlternatingForm::zero(5, 3);
        a.set(MultiIndex::new(&[0, 1, 2], 5).unwrap(), 1.0);
        a.set(MultiIndex::new(&[1, 3, 4], 5).unwrap(), -2.0);
        let v = [0.3, -1.2, 0.7, 0.4, 2.0];
        let c = contract(&v, &contract(&v, &a).unwrap()).unwrap();
        assert!(c.is_zero_within(TOL_ALG));
    }

    #[test]
    fn contraction_identities() {
        // sum_r e_r . (e_r ^ alpha) = (n - p) alpha  and
        // sum_r e_r^flat ^ (e_r . alpha) = p alpha, orthonormal frame.
        let n = 7;
        let m = PointMetric::euclidean(n);
        let mut alpha = AlternatingForm::zero(n, 3);
        alpha.set(MultiIndex::new(&[0, 2, 5], n).unwrap(), 1.3);
        alpha.set(MultiIndex::new(&[1, 3, 6], n).unwrap(), -0.4);
        alpha.set(MultiIndex::new(&[2, 4, 5], n).unwrap(), 0.9);
        let mut down = AlternatingForm::zero(n, 3);
        let mut up = AlternatingForm::zero(n, 3);
        for r in 0..n {
            let mut e = vec![0.0; n];
            e[r] = 1.0;
            let eb = flat(&e, &m).unwrap();
            down = down.add(&contract(&e, &wedge(&eb, &alpha).unwrap()).unwrap());
            up = up.add(&wedge(&eb, &contract(&e, &alpha).unwrap()).unwrap());
        }
        let d = down.sub(&alpha.scale((n - 3) as f64));
        let u = up.sub(&alpha.scale(3.0));
        assert!(d.is_zero_within(TOL_ALG));
        assert!(u.is_zero_within(TOL_ALG));
    }

    #[test]
    fn hodge_star_euclidean_r3() {
        let m = PointMetric::euclidean(3);
        let a = AlternatingForm::basis(3, &[0, 1]);
        let s = hodge_star(&a, &m).unwrap();
        assert_eq!(s.get(MultiIndex::new(&[2], 3).unwrap()), 1.0);
        assert_eq!(s.nnz(), 1);
    }

    #[test]
    fn hodge_star_involution_sign() {
        let n = 6;
        let m = PointMetric::euclidean(n);
        for p in 0..=n {
            for mi in MultiIndex::enumerate(n, p) {
                let mut a = AlternatingForm::zero(n, p);
                a.set(mi, 1.0);
                let ss = hodge_star(&hodge_star(&a, &m).unwrap(), &m).unwrap();
                let sign = if (p * (n - p)) % 2 == 0 { 1.0 } else { -1.0 };
                let diff = ss.sub(&a.scale(sign));
                assert!(diff.is_zero_within(TOL_ALG), "p={p} mi={mi:?}");
            }
        }
    }

    #[test]
    fn hodge_star_scaled_metric() {
        // g = c * id on R^2: star(e^0) = or * sqrt(det g) * g^00 * e^1.
        let c = 4.0;
        let g = DMatrix::from_diagonal(&DVector::from_vec(vec![c, c]));
        let m = PointMetric::new(g, 1).unwrap();
        let a = AlternatingForm::basis(2, &[0]);
        let s = hodge_star(&a, &m).unwrap();
        // sqrt(det) = c, raised coefficient 1/c, so star(e^0) = e^1.
        assert!((s.get(MultiIndex::new(&[1], 2).unwrap()) - 1.0).abs() < TOL_ALG);
        // Reversed orientation flips the sign.
        let g = DMatrix::from_diagonal(&DVector::from_vec(vec![c, c]));
        let m = PointMetric::new(g, -1).unwrap();
        let s = hodge_star(&a, &m).unwrap();
        assert!((s.get(MultiIndex::new(&[1], 2).unwrap()) + 1.0).abs() < TOL_ALG);
    }

    #[test]
    fn musical_round_trip_and_duality() {
        let g = DMatrix::from_row_slice(3, 3, &[2.0, 0.3, 0.1, 0.3, 1.5, -0.2, 0.1, -0.2, 1.1]);
        let m = PointMetric::new(g, 1).unwrap();
        let v = [0.7, -1.9, 0.4];
        let theta = flat(&v, &m).unwrap();
        let back = sharp(&theta, &m).unwrap();
        for i in 0..3 {
            assert!((back[i] - v[i]).abs() < TOL_ALG);
        }
        // <sharp(theta), X> = theta(X)
        let x = [1.0, 0.5, -0.3];
        let lhs = m.inner_vec(&back, &x);
        let rhs: f64 = one_form_components(&theta)
            .iter()
            .zip(x.iter())
            .map(|(a, b)| a * b)
            .sum();
        assert!((lhs - rhs).abs() < TOL_ALG);
    }

    #[test]
    fn flat_is_identity_for_euclidean() {
        let m = PointMetric::euclidean(4);
        let v = [0.0, 1.0, 0.0, 0.0];
        let theta = flat(&v, &m).unwrap();
        assert_eq!(theta.get(MultiIndex::new(&[1], 4).unwrap()), 1.0);
    }

    #[test]
    fn full_sum_norm_is_factorial_on_basis_forms() {
        let m = PointMetric::euclidean(8);
        for p in 1..=4usize {
            let idx: Vec<usize> = (0..p).collect();
            let a = AlternatingForm::basis(8, &idx);
            let fact: f64 = (1..=p).map(|k| k as f64).product();
            assert!((form_inner(&a, &a, &m).unwrap() - fact).abs() < TOL_ALG);
        }
    }

    #[test]
    fn orthonormal_frame_is_orthonormal() {
        let g = DMatrix::from_row_slice(3, 3, &[2.0, 0.3, 0.1, 0.3, 1.5, -0.2, 0.1, -0.2, 1.1]);
        let m = PointMetric::new(g, 1).unwrap();
        let frame = m.orthonormal_frame();
        for i in 0..3 {
            for j in 0..3 {
                let ei: Vec<f64> = (0..3).map(|a| frame[(a, i)]).collect();
                let ej: Vec<f64> = (0..3).map(|a| frame[(a, j)]).collect();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((m.inner_vec(&ei, &ej) - expected).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn contract_form_sharps_through_the_metric() {
        // Scaled metric: sharp of e^0 is e_0 / c, so the interior product
        // picks up the inverse factor.
        let c = 4.0;
        let g = DMatrix::from_diagonal(&DVector::from_vec(vec![c, c, c]));
        let m = PointMetric::new(g, 1).unwrap();
        let theta = AlternatingForm::basis(3, &[0]);
        let a = AlternatingForm::basis(3, &[0, 1]);
        let out = contract_form(&theta, &a, &m).unwrap();
        assert!((out.get(MultiIndex::new(&[1], 3).unwrap()) - 1.0 / c).abs() < TOL_ALG);
    }

    #[test]
    fn eval_on_matches_coefficients() {
        let a = AlternatingForm::basis(4, &[1, 3]);
        let e1 = [0.0, 1.0, 0.0, 0.0];
        let e3 = [0.0, 0.0, 0.0, 1.0];
        assert!((a.eval_on(&[&e1, &e3]) - 1.0).abs() < TOL_ALG);
        assert!((a.eval_on(&[&e3, &e1]) + 1.0).abs() < TOL_ALG);
    }
}
