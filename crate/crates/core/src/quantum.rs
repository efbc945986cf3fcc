//! Finite-dimensional quantum morphisms: unitaries, isometries and channels.
//!
//! Channels are stored as Choi matrices with the input factor first:
//! `C = Σ_{ij} |i⟩⟨j| ⊗ Λ(|i⟩⟨j|)`, so `C[(i,a),(j,b)]` lives at row
//! `i * dout + a`, column `j * dout + b`. Tensor factors of vectors are
//! read row-major (`|b⟩|e⟩` is index `b * dim E + e`), matching the classical
//! mixed-radix convention.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type C64 = Complex64;

/// Structural equality tolerance on matrix entries.
pub const EQ_TOL: f64 = 1e-9;
/// Tolerance for results that pass through two eigendecompositions.
pub const ROUND_TRIP_TOL: f64 = 1e-8;
/// Eigenvalues at or below this are treated as zero when counting Choi rank.
pub const RANK_CUTOFF: f64 = 1e-10;
/// A Choi matrix is pure when its normalised purity is at least `1 - PURITY_TOL`.
pub const PURITY_TOL: f64 = 1e-8;
/// Entries whose moduli are within this of the maximum count as ties for the phase convention.
const PHASE_TIE_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("not an isometry (max |V†V - I| = {0:.3e})")]
    NotIsometry(f64),
    #[error("not unitary (max residual {0:.3e})")]
    NotUnitary(f64),
    #[error("Choi matrix not Hermitian (max |C - C†| = {0:.3e})")]
    NotHermitian(f64),
    #[error("Choi matrix not positive (min eigenvalue {0:.3e})")]
    NotPositive(f64),
    #[error("not trace preserving (max residual {0:.3e})")]
    NotTracePreserving(f64),
    #[error("Choi matrix is impure (purity {0:.12})")]
    Impure(f64),
    #[error("empty Kraus family")]
    EmptyKraus,
}

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

impl TryFrom<MatrixJson> for CMatrix {
    type Error = QuantumError;

    fn try_from(json: MatrixJson) -> Result<Self, Self::Error> {
        let data = json.entries.iter().map(|&[re, im]| C64::new(re, im)).collect();
        CMatrix::new(json.rows, json.cols, data)
    }
}

impl From<CMatrix> for MatrixJson {
    fn from(m: CMatrix) -> Self {
        MatrixJson { rows: m.rows, cols: m.cols, entries: m.data.iter().map(|z| [z.re, z.im]).collect() }
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| {
                    let z = self[(r, c)];
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    /// Panics on a shape mismatch; use [`CMatrix::checked_mul`] for untrusted input.
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.checked_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self, QuantumError> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(QuantumError::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(QuantumError::NonFinite);
        }
        Ok(CMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        let data = (0..rows * cols).map(|i| f(i / cols, i % cols)).collect();
        CMatrix { rows, cols, data }
    }

    /// Real matrix from nested rows; convenient for tests and fixed gates.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_fn(rows.len(), cols, |r, c| C64::new(rows[r][c], 0.0))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn checked_mul(&self, rhs: &CMatrix) -> Result<CMatrix, QuantumError> {
        if self.cols != rhs.rows {
            return Err(QuantumError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..rhs.cols {
                    out.data[r * rhs.cols + c] += a * rhs.data[k * rhs.cols + c];
                }
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> CMatrix {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        Self::from_fn(self.rows * other.rows, self.cols * other.cols, |r, c| {
            self[(r / other.rows, c / other.cols)] * other[(r % other.rows, c % other.cols)]
        })
    }

    pub fn scale(&self, s: C64) -> CMatrix {
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// Max-entry distance; infinite when the shapes differ.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return f64::INFINITY;
        }
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &CMatrix, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    /// The leading `n` columns.
    pub fn leading_columns(&self, n: usize) -> CMatrix {
        Self::from_fn(self.rows, n, |r, c| self[(r, c)])
    }

    pub fn hermiticity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.max_abs_diff(&self.adjoint())
    }

    /// `max |M†M - I|`.
    pub fn isometry_residual(&self) -> f64 {
        (&self.adjoint() * self).max_abs_diff(&CMatrix::identity(self.cols))
    }

    /// Multiply by the unit scalar that makes the entry of largest modulus real
    /// positive; ties go to the smallest row-major index.
    pub fn phase_fixed(&self) -> CMatrix {
        let max = self.data.iter().map(|z| z.norm()).fold(0.0, f64::max);
        match self.data.iter().find(|z| z.norm() >= max - PHASE_TIE_TOL) {
            Some(z) if z.norm() > 0.0 => self.scale(z.conj() / z.norm()),
            _ => self.clone(),
        }
    }
}

/// Eigendecomposition of a Hermitian matrix, values in descending order,
/// eigenvectors as the corresponding columns of `vectors`.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
pub fn hermitian_eigen(m: &CMatrix) -> Result<HermitianEigen, QuantumError> {
    let residual = m.hermiticity_residual();
    if !(residual <= EQ_TOL * (1.0 + m.frobenius_sq().sqrt())) {
        return Err(QuantumError::NotHermitian(residual));
    }
    let n = m.rows;
    // symmetrise so rounding in the input cannot break convergence
    let mut a = m.add(&m.adjoint()).scale(C64::new(0.5, 0.0));
    let mut v = CMatrix::identity(n);
    let scale = a.frobenius_sq().max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum();
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= 1e-300 {
                    continue;
                }
                let phase = apq / r;
                let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let sp = phase * s; // s·e^{iφ}
                // A ← A G with G[p,p]=G[q,q]=c, G[p,q]=s e^{iφ}, G[q,p]=-s e^{-iφ}
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = akp * c - akq * sp.conj();
                    a[(k, q)] = akp * sp + akq * c;
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = vkp * c - vkq * sp.conj();
                    v[(k, q)] = vkp * sp + vkq * c;
                }
                // A ← G† A
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = apk * c - aqk * sp;
                    a[(q, k)] = apk * sp.conj() + aqk * c;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// An isometry `V` with `V†V = I`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CMatrix", into = "CMatrix")]
pub struct IsometryM(CMatrix);

impl TryFrom<CMatrix> for IsometryM {
    type Error = QuantumError;

    fn try_from(m: CMatrix) -> Result<Self, Self::Error> {
        IsometryM::new(m)
    }
}

impl From<IsometryM> for CMatrix {
    fn from(v: IsometryM) -> Self {
        v.0
    }
}

impl IsometryM {
    pub fn new(m: CMatrix) -> Result<Self, QuantumError> {
        Self::with_tolerance(m, EQ_TOL)
    }

    pub fn with_tolerance(m: CMatrix, tol: f64) -> Result<Self, QuantumError> {
        if m.rows < m.cols {
            return Err(QuantumError::Dimension(format!("{}x{} cannot be an isometry", m.rows, m.cols)));
        }
        let residual = m.isometry_residual();
        if !(residual <= tol) {
            return Err(QuantumError::NotIsometry(residual));
        }
        Ok(IsometryM(m))
    }

    pub fn identity(n: usize) -> Self {
        IsometryM(CMatrix::identity(n))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn dom(&self) -> usize {
        self.0.cols
    }

    pub fn cod(&self) -> usize {
        self.0.rows
    }

    /// `self ∘ f`.
    pub fn compose(&self, f: &IsometryM) -> Result<IsometryM, QuantumError> {
        Ok(IsometryM(self.0.checked_mul(&f.0)?))
    }

    pub fn tensor(&self, g: &IsometryM) -> IsometryM {
        IsometryM(self.0.kron(&g.0))
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> IsometryM {
        assert!(rows >= cols);
        IsometryM(haar_unitary(rows, rng).0.leading_columns(cols))
    }
}

/// A unitary matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CMatrix", into = "CMatrix")]
pub struct UnitaryM(CMatrix);

impl TryFrom<CMatrix> for UnitaryM {
    type Error = QuantumError;

    fn try_from(m: CMatrix) -> Result<Self, Self::Error> {
        UnitaryM::new(m)
    }
}

impl From<UnitaryM> for CMatrix {
    fn from(u: UnitaryM) -> Self {
        u.0
    }
}

impl UnitaryM {
    pub fn new(m: CMatrix) -> Result<Self, QuantumError> {
        Self::with_tolerance(m, EQ_TOL)
    }

    pub fn with_tolerance(m: CMatrix, tol: f64) -> Result<Self, QuantumError> {
        if !m.is_square() {
            return Err(QuantumError::Dimension(format!("{}x{} is not square", m.rows, m.cols)));
        }
        let residual = m.isometry_residual().max((&m * &m.adjoint()).max_abs_diff(&CMatrix::identity(m.rows)));
        if !(residual <= tol) {
            return Err(QuantumError::NotUnitary(residual));
        }
        Ok(UnitaryM(m))
    }

    pub fn identity(n: usize) -> Self {
        UnitaryM(CMatrix::identity(n))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    pub fn compose(&self, f: &UnitaryM) -> Result<UnitaryM, QuantumError> {
        Ok(UnitaryM(self.0.checked_mul(&f.0)?))
    }

    pub fn adjoint(&self) -> UnitaryM {
        UnitaryM(self.0.adjoint())
    }

    pub fn tensor(&self, g: &UnitaryM) -> UnitaryM {
        UnitaryM(self.0.kron(&g.0))
    }

    pub fn as_isometry(&self) -> IsometryM {
        IsometryM(self.0.clone())
    }

    /// Representative of the class modulo global phase.
    pub fn phase_fixed(&self) -> UnitaryM {
        UnitaryM(self.0.phase_fixed())
    }

    pub fn scale_phase(&self, theta: f64) -> UnitaryM {
        UnitaryM(self.0.scale(C64::from_polar(1.0, theta)))
    }
}

/// Haar-distributed unitary: Gram-Schmidt QR of a complex Ginibre matrix.
///
/// Gram-Schmidt yields the QR factor whose `R` has a positive real diagonal,
/// which is the phase-corrected factorisation.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> UnitaryM {
    let g = ginibre(d, d, rng);
    UnitaryM(orthonormalize_columns(&g))
}

/// The swap `A ⊗ B → B ⊗ A`, `|x⟩|y⟩ ↦ |y⟩|x⟩`.
pub fn swap(a: usize, b: usize) -> UnitaryM {
    let n = a * b;
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        m[((i % b) * a + i / b, i)] = C64::new(1.0, 0.0);
    }
    UnitaryM(m)
}

fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let data = (0..rows * cols)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            C64::new(re * s, im * s)
        })
        .collect();
    CMatrix { rows, cols, data }
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

// Orthogonalise `v` against `basis` twice (classical Gram-Schmidt with reorthogonalisation).
fn project_out(v: &mut [C64], basis: &[Vec<C64>]) {
    for _ in 0..2 {
        for q in basis {
            let c = dot(q, v);
            v.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
        }
    }
}

fn orthonormalize_columns(m: &CMatrix) -> CMatrix {
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(m.cols);
    for c in 0..m.cols {
        let mut v = m.column(c);
        project_out(&mut v, &basis);
        let n = norm(&v);
        basis.push(v.into_iter().map(|z| z / n).collect());
    }
    CMatrix::from_fn(m.rows, m.cols, |r, c| basis[c][r])
}

/// Extend an isometry to a unitary whose leading columns are the isometry.
///
/// Remaining columns come from Gram-Schmidt over the standard basis, taking
/// basis vectors in increasing index order and skipping those already in the span.
pub fn complete_to_unitary(v: &IsometryM) -> UnitaryM {
    let n = v.cod();
    let mut basis: Vec<Vec<C64>> = (0..v.dom()).map(|c| v.0.column(c)).collect();
    for k in 0..n {
        if basis.len() == n {
            break;
        }
        let mut e = vec![C64::new(0.0, 0.0); n];
        e[k] = C64::new(1.0, 0.0);
        project_out(&mut e, &basis);
        let len = norm(&e);
        // some remaining basis vector always has residual norm >= 1/sqrt(n)
        if len > 1e-3 {
            basis.push(e.into_iter().map(|z| z / len).collect());
        }
    }
    UnitaryM(CMatrix::from_fn(n, n, |r, c| basis[c][r]))
}

/// A completely positive trace-preserving map, as its Choi matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelJson", into = "ChannelJson")]
pub struct Channel {
    din: usize,
    dout: usize,
    choi: CMatrix,
}

#[derive(Serialize, Deserialize)]
struct ChannelJson {
    din: usize,
    dout: usize,
    choi: CMatrix,
}

impl TryFrom<ChannelJson> for Channel {
    type Error = QuantumError;

    fn try_from(json: ChannelJson) -> Result<Self, Self::Error> {
        Channel::new(json.din, json.dout, json.choi)
    }
}

impl From<Channel> for ChannelJson {
    fn from(c: Channel) -> Self {
        ChannelJson { din: c.din, dout: c.dout, choi: c.choi }
    }
}

impl Channel {
    /// Validates Hermiticity, positivity and trace preservation.
    pub fn new(din: usize, dout: usize, choi: CMatrix) -> Result<Self, QuantumError> {
        let n = din * dout;
        if choi.rows != n || choi.cols != n {
            return Err(QuantumError::Dimension(format!(
                "Choi matrix for {din}->{dout} must be {n}x{n}, got {}x{}",
                choi.rows, choi.cols
            )));
        }
        let herm = choi.hermiticity_residual();
        if !(herm <= EQ_TOL) {
            return Err(QuantumError::NotHermitian(herm));
        }
        let min = hermitian_eigen(&choi)?.values.last().copied().unwrap_or(0.0);
        if min < -EQ_TOL {
            return Err(QuantumError::NotPositive(min));
        }
        let c = Channel { din, dout, choi };
        let tp = c.trace_preservation_residual();
        if !(tp <= EQ_TOL) {
            return Err(QuantumError::NotTracePreserving(tp));
        }
        Ok(c)
    }

    pub fn din(&self) -> usize {
        self.din
    }

    pub fn dout(&self) -> usize {
        self.dout
    }

    pub fn choi(&self) -> &CMatrix {
        &self.choi
    }

    /// `max |Tr_out C - I|`.
    pub fn trace_preservation_residual(&self) -> f64 {
        let reduced = CMatrix::from_fn(self.din, self.din, |i, j| {
            (0..self.dout).map(|a| self.choi[(i * self.dout + a, j * self.dout + a)]).sum()
        });
        reduced.max_abs_diff(&CMatrix::identity(self.din))
    }

    pub fn approx_eq(&self, other: &Channel, tol: f64) -> bool {
        self.din == other.din && self.dout == other.dout && self.choi.approx_eq(&other.choi, tol)
    }

    /// `ρ ↦ Σ K ρ K†`, assembled per the Choi convention.
    pub fn from_kraus(ks: &[CMatrix]) -> Result<Channel, QuantumError> {
        Self::from_kraus_with_tolerance(ks, ROUND_TRIP_TOL)
    }

    fn from_kraus_with_tolerance(ks: &[CMatrix], tol: f64) -> Result<Channel, QuantumError> {
        let first = ks.first().ok_or(QuantumError::EmptyKraus)?;
        let (dout, din) = (first.rows, first.cols);
        if ks.iter().any(|k| (k.rows, k.cols) != (dout, din)) {
            return Err(QuantumError::Dimension("Kraus operators differ in shape".into()));
        }
        let completeness = ks
            .iter()
            .fold(CMatrix::zeros(din, din), |acc, k| acc.add(&(&k.adjoint() * k)))
            .max_abs_diff(&CMatrix::identity(din));
        if !(completeness <= tol) {
            return Err(QuantumError::NotTracePreserving(completeness));
        }
        let n = din * dout;
        let mut choi = CMatrix::zeros(n, n);
        for k in ks {
            // vec(K)[(i,a)] = K[a,i]
            let v: Vec<C64> = (0..n).map(|ia| k[(ia % dout, ia / dout)]).collect();
            for r in 0..n {
                for c in 0..n {
                    choi[(r, c)] += v[r] * v[c].conj();
                }
            }
        }
        Ok(Channel { din, dout, choi })
    }

    /// Kraus operators from the eigenpairs of the Choi matrix above the rank cutoff.
    pub fn kraus(&self) -> Result<Vec<CMatrix>, QuantumError> {
        let eig = hermitian_eigen(&self.choi)?;
        if let Some(&min) = eig.values.last() {
            if min < -EQ_TOL {
                return Err(QuantumError::NotPositive(min));
            }
        }
        Ok(eig
            .values
            .iter()
            .enumerate()
            .take_while(|(_, &l)| l > RANK_CUTOFF)
            .map(|(idx, &l)| {
                let s = l.sqrt();
                CMatrix::from_fn(self.dout, self.din, |a, i| eig.vectors[(i * self.dout + a, idx)] * s)
            })
            .collect())
    }

    /// Numerical rank of the Choi matrix at [`RANK_CUTOFF`].
    pub fn choi_rank(&self) -> Result<usize, QuantumError> {
        Ok(hermitian_eigen(&self.choi)?.values.iter().filter(|&&l| l > RANK_CUTOFF).count())
    }

    pub fn identity(d: usize) -> Channel {
        Self::unitary(&UnitaryM::identity(d))
    }

    /// Conjugation by a unitary.
    pub fn unitary(u: &UnitaryM) -> Channel {
        Self::from_kraus_with_tolerance(std::slice::from_ref(&u.0), f64::INFINITY)
            .expect("a single operator is a valid Kraus family")
    }

    /// Completely dephasing channel in the standard basis.
    pub fn dephasing(d: usize) -> Channel {
        let ks: Vec<CMatrix> = (0..d)
            .map(|k| CMatrix::from_fn(d, d, |r, c| C64::new(f64::from(u8::from(r == k && c == k)), 0.0)))
            .collect();
        Self::from_kraus(&ks).expect("projectors sum to identity")
    }

    /// Qubit depolarizing channel `ρ ↦ (1-p)ρ + p·I/2`.
    pub fn depolarizing(p: f64) -> Channel {
        let i = C64::new(0.0, 1.0);
        let paulis = [
            CMatrix::identity(2),
            CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]),
            CMatrix::from_fn(2, 2, |r, c| match (r, c) {
                (0, 1) => -i,
                (1, 0) => i,
                _ => C64::new(0.0, 0.0),
            }),
            CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]),
        ];
        let weights = [1.0 - 0.75 * p, 0.25 * p, 0.25 * p, 0.25 * p];
        let ks: Vec<CMatrix> = paulis
            .iter()
            .zip(weights)
            .filter(|(_, w)| *w > 0.0)
            .map(|(m, w)| m.scale(C64::new(w.sqrt(), 0.0)))
            .collect();
        Self::from_kraus(&ks).expect("Pauli weights sum to one")
    }

    /// The trace `Tr: B(C^d) → C`.
    pub fn discard(d: usize) -> Channel {
        channel_of_isometry(&IsometryM::identity(d), d).expect("identity factors as 1 ⊗ d")
    }

    /// `Λ(ρ)[a,b] = Σ_ij ρ[i,j] C[(i,a),(j,b)]`.
    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix, QuantumError> {
        if (rho.rows, rho.cols) != (self.din, self.din) {
            return Err(QuantumError::Dimension(format!("state must be {0}x{0}", self.din)));
        }
        let d = self.dout;
        Ok(CMatrix::from_fn(d, d, |a, b| {
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..self.din {
                for j in 0..self.din {
                    acc += rho[(i, j)] * self.choi[(i * d + a, j * d + b)];
                }
            }
            acc
        }))
    }

    /// `self ∘ f`, via products of Kraus operators.
    pub fn compose(&self, f: &Channel) -> Result<Channel, QuantumError> {
        if f.dout != self.din {
            return Err(QuantumError::Dimension(format!(
                "cannot compose {}->{} after {}->{}",
                self.din, self.dout, f.din, f.dout
            )));
        }
        let (kg, kf) = (self.kraus()?, f.kraus()?);
        let ks: Vec<CMatrix> = kg.iter().flat_map(|g| kf.iter().map(move |k| g * k)).collect();
        Self::from_kraus(&ks)
    }

    pub fn tensor(&self, g: &Channel) -> Result<Channel, QuantumError> {
        let (ka, kb) = (self.kraus()?, g.kraus()?);
        let ks: Vec<CMatrix> = ka.iter().flat_map(|a| kb.iter().map(move |b| a.kron(b))).collect();
        Self::from_kraus(&ks)
    }

    /// Normalised purity `Tr(Ĉ²)` with `Ĉ = C / Tr C`.
    pub fn choi_purity(&self) -> f64 {
        let tr = self.choi.trace().re;
        self.choi.frobenius_sq() / (tr * tr)
    }

    pub fn is_pure_choi(&self) -> bool {
        self.choi_purity() >= 1.0 - PURITY_TOL
    }

    /// Random channel: `k` Ginibre operators normalised by `S^{-1/2}`, `S = Σ K†K`.
    ///
    /// `k` is raised to `⌈din / dout⌉` when smaller so that `S` is invertible.
    pub fn random<R: Rng + ?Sized>(din: usize, dout: usize, k: usize, rng: &mut R) -> Channel {
        let k = k.max(din.div_ceil(dout.max(1))).max(1);
        let ks: Vec<CMatrix> = (0..k).map(|_| ginibre(dout, din, rng)).collect();
        let s = ks.iter().fold(CMatrix::zeros(din, din), |acc, k| acc.add(&(&k.adjoint() * k)));
        let eig = hermitian_eigen(&s).expect("Gram matrix is Hermitian");
        let inv_sqrt = CMatrix::from_fn(din, din, |r, c| {
            (0..din)
                .map(|l| eig.vectors[(r, l)] * eig.vectors[(c, l)].conj() / eig.values[l].sqrt())
                .sum()
        });
        let ks: Vec<CMatrix> = ks.iter().map(|k| k * &inv_sqrt).collect();
        Self::from_kraus(&ks).expect("normalised Kraus family is complete")
    }
}

/// `ρ ↦ Tr_E(V ρ V†)` where the codomain of `V` factors as `B ⊗ E`, `dim E = env_dim`.
pub fn channel_of_isometry(v: &IsometryM, env_dim: usize) -> Result<Channel, QuantumError> {
    if env_dim == 0 || v.cod() % env_dim != 0 {
        return Err(QuantumError::Dimension(format!(
            "codomain dimension {} is not divisible by environment dimension {env_dim}",
            v.cod()
        )));
    }
    let (din, dout) = (v.dom(), v.cod() / env_dim);
    let n = din * dout;
    let m = &v.0;
    let choi = CMatrix::from_fn(n, n, |r, c| {
        let (i, a, j, b) = (r / dout, r % dout, c / dout, c % dout);
        (0..env_dim).map(|e| m[(a * env_dim + e, i)] * m[(b * env_dim + e, j)].conj()).sum()
    });
    Ok(Channel { din, dout, choi })
}

/// A Stinespring dilation `V : din → dout ⊗ env`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Dilation {
    pub isometry: IsometryM,
    pub env_dim: usize,
}

/// Minimal dilation: environment dimension equals the Choi rank.
pub fn minimal_stinespring(c: &Channel) -> Result<Dilation, QuantumError> {
    let ks = c.kraus()?;
    let r = ks.len();
    let (din, dout) = (c.din, c.dout);
    let m = CMatrix::from_fn(dout * r, din, |row, i| ks[row % r][(row / r, i)]);
    let isometry = IsometryM::with_tolerance(m, ROUND_TRIP_TOL)?;
    Ok(Dilation { isometry, env_dim: r })
}

/// Recover `U` (phase-fixed) from a unitary-conjugation channel.
pub fn extract_unitary(c: &Channel) -> Result<UnitaryM, QuantumError> {
    if c.din != c.dout {
        return Err(QuantumError::Dimension(format!(
            "a reversible channel must have equal dimensions, got {}->{}",
            c.din, c.dout
        )));
    }
    let purity = c.choi_purity();
    if purity < 1.0 - PURITY_TOL {
        return Err(QuantumError::Impure(purity));
    }
    let d = c.din;
    let eig = hermitian_eigen(&c.choi)?;
    let top = CMatrix::from_fn(d, d, |a, i| eig.vectors[(i * d + a, 0)]);
    let scale = (d as f64 / top.frobenius_sq()).sqrt();
    let u = top.scale(C64::new(scale, 0.0)).phase_fixed();
    UnitaryM::with_tolerance(u, ROUND_TRIP_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn pauli_x() -> UnitaryM {
        UnitaryM::new(CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])).unwrap()
    }

    fn copy_isometry() -> IsometryM {
        // |i⟩ ↦ |i⟩|i⟩ : rows 0 and 3
        let mut m = CMatrix::zeros(4, 2);
        m[(0, 0)] = C64::new(1.0, 0.0);
        m[(3, 1)] = C64::new(1.0, 0.0);
        IsometryM::new(m).unwrap()
    }

    // Choi of ρ ↦ Σ_e (⟨e|_E) VρV† (|e⟩_E) by the defining sum over the operator basis |i⟩⟨j|
    fn choi_by_definition(v: &CMatrix, din: usize, dout: usize, env: usize) -> CMatrix {
        let n = din * dout;
        let mut choi = CMatrix::zeros(n, n);
        for i in 0..din {
            for j in 0..din {
                let mut eij = CMatrix::zeros(din, din);
                eij[(i, j)] = C64::new(1.0, 0.0);
                let big = &(v * &eij) * &v.adjoint();
                for a in 0..dout {
                    for b in 0..dout {
                        let z: C64 = (0..env).map(|e| big[(a * env + e, b * env + e)]).sum();
                        choi[(i * dout + a, j * dout + b)] = z;
                    }
                }
            }
        }
        choi
    }

    #[test]
    fn jacobi_matches_nalgebra() {
        let mut r = rng(1);
        for n in 1..=6 {
            for _ in 0..10 {
                let g = ginibre(n, n, &mut r);
                let h = g.add(&g.adjoint());
                let eig = hermitian_eigen(&h).unwrap();
                let na = nalgebra::DMatrix::from_fn(n, n, |i, j| h[(i, j)]);
                let mut reference: Vec<f64> = na.symmetric_eigen().eigenvalues.iter().copied().collect();
                reference.sort_by(|a, b| b.total_cmp(a));
                for (x, y) in eig.values.iter().zip(&reference) {
                    assert!((x - y).abs() < 1e-10, "{x} vs {y}");
                }
                // H V = V Λ
                let lam = CMatrix::from_fn(n, n, |r, c| if r == c { C64::new(eig.values[r], 0.0) } else { C64::new(0.0, 0.0) });
                assert!((&h * &eig.vectors).approx_eq(&(&eig.vectors * &lam), 1e-10));
                assert!(eig.vectors.isometry_residual() < 1e-12);
            }
        }
    }

    #[test]
    fn haar_unitaries_are_unitary() {
        let mut r = rng(2);
        for d in 1..=6 {
            let u = haar_unitary(d, &mut r);
            assert!(UnitaryM::new(u.0.clone()).is_ok());
        }
    }

    #[test]
    fn identity_channel_choi() {
        let c = channel_of_isometry(&IsometryM::identity(2), 1).unwrap();
        // Σ_ij |ii⟩⟨jj| has ones at (0,0),(0,3),(3,0),(3,3)
        let mut expected = CMatrix::zeros(4, 4);
        for (r, cc) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            expected[(r, cc)] = C64::new(1.0, 0.0);
        }
        assert!(c.choi().approx_eq(&expected, 1e-15));
        assert!(c.approx_eq(&Channel::identity(2), 1e-15));
    }

    #[test]
    fn copy_isometry_gives_dephasing() {
        let v = copy_isometry();
        let c = channel_of_isometry(&v, 2).unwrap();
        let expected = choi_by_definition(v.matrix(), 2, 2, 2);
        assert!(c.choi().approx_eq(&expected, 1e-15));
        let mut diag = CMatrix::zeros(4, 4);
        diag[(0, 0)] = C64::new(1.0, 0.0);
        diag[(3, 3)] = C64::new(1.0, 0.0);
        assert!(c.choi().approx_eq(&diag, 1e-15));
        assert!(c.approx_eq(&Channel::dephasing(2), 1e-15));
    }

    #[test]
    fn random_isometry_channel_is_cptp() {
        let mut r = rng(3);
        for _ in 0..20 {
            let v = IsometryM::random(6, 2, &mut r);
            let c = channel_of_isometry(&v, 2).unwrap();
            assert!(Channel::new(c.din, c.dout, c.choi.clone()).is_ok());
            assert!(c.choi().approx_eq(&choi_by_definition(v.matrix(), 2, 3, 2), 1e-12));
        }
    }

    #[test]
    fn channel_of_isometry_rejects_bad_split() {
        assert!(matches!(
            channel_of_isometry(&IsometryM::identity(3), 2),
            Err(QuantumError::Dimension(_))
        ));
        let bad = CMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!(matches!(IsometryM::new(bad), Err(QuantumError::NotIsometry(_))));
    }

    #[test]
    fn kraus_examples() {
        let ks = Channel::identity(3).kraus().unwrap();
        assert_eq!(ks.len(), 1);
        assert!(ks[0].phase_fixed().approx_eq(&CMatrix::identity(3), 1e-12));

        let ks = Channel::dephasing(2).kraus().unwrap();
        assert_eq!(ks.len(), 2);
        // each Kraus operator is diagonal; together their moduli squared resolve |0⟩⟨0| and |1⟩⟨1|
        for k in &ks {
            assert!(k[(0, 1)].norm() < 1e-12 && k[(1, 0)].norm() < 1e-12);
        }
        let sum0: f64 = ks.iter().map(|k| k[(0, 0)].norm_sqr()).sum();
        let sum1: f64 = ks.iter().map(|k| k[(1, 1)].norm_sqr()).sum();
        assert!((sum0 - 1.0).abs() < 1e-12 && (sum1 - 1.0).abs() < 1e-12);
        // and reassemble the same channel
        assert!(Channel::from_kraus(&ks).unwrap().approx_eq(&Channel::dephasing(2), 1e-12));
    }

    #[test]
    fn kraus_round_trip_random() {
        let mut r = rng(4);
        for t in 0..100 {
            let (din, dout) = (1 + t % 3, 1 + (t / 3) % 3);
            let c = Channel::random(din, dout, 1 + t % 4, &mut r);
            let ks = c.kraus().unwrap();
            let completeness = ks
                .iter()
                .fold(CMatrix::zeros(din, din), |acc, k| acc.add(&(&k.adjoint() * k)));
            assert!(completeness.approx_eq(&CMatrix::identity(din), 1e-8), "t={t} {din}x{dout} res={}", completeness.max_abs_diff(&CMatrix::identity(din)));
            assert!(Channel::from_kraus(&ks).unwrap().approx_eq(&c, 1e-8));
        }
    }

    #[test]
    fn choi_of_kraus_examples() {
        let x = Channel::unitary(&pauli_x());
        assert!(x.is_pure_choi());
        assert!((x.choi().trace().re - 2.0).abs() < 1e-15);
        // vec(X) = (0,1,1,0): outer product
        let v = [0.0, 1.0, 1.0, 0.0];
        let expected = CMatrix::from_fn(4, 4, |r, c| C64::new(v[r] * v[c], 0.0));
        assert!(x.choi().approx_eq(&expected, 1e-15));
        let err = Channel::from_kraus(&[CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.5]])]);
        assert!(matches!(err, Err(QuantumError::NotTracePreserving(_))));
    }

    #[test]
    fn channel_new_validates() {
        let mut bad = Channel::identity(2).choi().clone();
        bad[(0, 0)] = C64::new(2.0, 0.0);
        assert!(matches!(Channel::new(2, 2, bad), Err(QuantumError::NotTracePreserving(_))));
        let mut neg = CMatrix::identity(4).scale(C64::new(0.5, 0.0));
        neg[(0, 3)] = C64::new(1.0, 0.0);
        neg[(3, 0)] = C64::new(1.0, 0.0);
        assert!(matches!(Channel::new(2, 2, neg), Err(QuantumError::NotPositive(_))));
    }

    #[test]
    fn minimal_stinespring_examples() {
        let d = minimal_stinespring(&Channel::identity(2)).unwrap();
        assert_eq!(d.env_dim, 1);
        assert!(d.isometry.matrix().phase_fixed().approx_eq(&CMatrix::identity(2), 1e-12));

        let deph = Channel::dephasing(2);
        let d = minimal_stinespring(&deph).unwrap();
        assert_eq!(d.env_dim, 2);
        assert!(channel_of_isometry(&d.isometry, 2).unwrap().approx_eq(&deph, 1e-12));
        // V = (I ⊗ W) · copy for a unitary W on the environment: W = (I ⊗ ⟨·|) blocks
        let copy = copy_isometry();
        let w = CMatrix::from_fn(2, 2, |e, f| {
            (0..2).map(|i| copy.matrix()[(i * 2 + f, i)].conj() * d.isometry.matrix()[(i * 2 + e, i)]).sum()
        });
        assert!(UnitaryM::new(w.clone()).is_ok());
        let rebuilt = &CMatrix::identity(2).kron(&w) * copy.matrix();
        assert!(rebuilt.approx_eq(d.isometry.matrix(), 1e-12));

        let mut r = rng(5);
        for k in 1..=4 {
            let c = Channel::random(3, 3, k, &mut r);
            let d = minimal_stinespring(&c).unwrap();
            assert_eq!(d.env_dim, k.min(9));
            assert_eq!(d.env_dim, c.choi_rank().unwrap());
        }
    }

    #[test]
    fn purity_examples() {
        let mut r = rng(6);
        assert!(Channel::unitary(&haar_unitary(3, &mut r)).is_pure_choi());
        let deph = Channel::dephasing(2);
        assert!(!deph.is_pure_choi());
        assert!((deph.choi_purity() - 0.5).abs() < 1e-15);
        for p in [1e-3, 0.1, 0.5, 1.0] {
            let dep = Channel::depolarizing(p);
            // purity of the Pauli-weight vector
            let w = [1.0 - 0.75 * p, 0.25 * p, 0.25 * p, 0.25 * p];
            let expected: f64 = w.iter().map(|x| x * x).sum();
            assert!((dep.choi_purity() - expected).abs() < 1e-12);
            assert!(!dep.is_pure_choi());
        }
    }

    #[test]
    fn extract_unitary_examples() {
        let x = extract_unitary(&Channel::unitary(&pauli_x())).unwrap();
        assert!(x.matrix().approx_eq(pauli_x().matrix(), 1e-12));

        let mut r = rng(7);
        for t in 0..100 {
            let d = 1 + t % 4;
            let u = haar_unitary(d, &mut r);
            let theta = r.random_range(0.0..std::f64::consts::TAU);
            let c1 = Channel::unitary(&u);
            let c2 = Channel::unitary(&u.scale_phase(theta));
            assert!(c1.approx_eq(&c2, 1e-12));
            let got = extract_unitary(&c1).unwrap();
            assert!(got.matrix().approx_eq(u.phase_fixed().matrix(), 1e-8));
            assert!(Channel::unitary(&got).approx_eq(&c1, 1e-8));
        }
    }

    #[test]
    fn extract_unitary_errors() {
        assert!(matches!(extract_unitary(&Channel::dephasing(2)), Err(QuantumError::Impure(_))));
        let embed = channel_of_isometry(&IsometryM::new(CMatrix::identity(3).leading_columns(2)).unwrap(), 1).unwrap();
        assert!(matches!(extract_unitary(&embed), Err(QuantumError::Dimension(_))));
    }

    #[test]
    fn complete_to_unitary_examples() {
        assert_eq!(complete_to_unitary(&IsometryM::identity(3)).matrix(), &CMatrix::identity(3));
        let e1 = IsometryM::new(CMatrix::identity(2).leading_columns(1)).unwrap();
        assert_eq!(complete_to_unitary(&e1).matrix(), &CMatrix::identity(2));
        let mut r = rng(8);
        for _ in 0..50 {
            let v = IsometryM::random(4, 2, &mut r);
            let u = complete_to_unitary(&v);
            assert!(UnitaryM::new(u.matrix().clone()).is_ok());
            assert!(u.matrix().leading_columns(2).approx_eq(v.matrix(), 1e-15));
        }
    }

    #[test]
    fn compose_and_tensor() {
        let mut r = rng(9);
        let c = Channel::random(2, 3, 2, &mut r);
        assert!(Channel::identity(3).compose(&c).unwrap().approx_eq(&c, 1e-9));
        assert!(c.compose(&Channel::identity(2)).unwrap().approx_eq(&c, 1e-9));
        let (u, w) = (haar_unitary(2, &mut r), haar_unitary(3, &mut r));
        let lhs = Channel::unitary(&u).tensor(&Channel::unitary(&w)).unwrap();
        assert!(lhs.approx_eq(&Channel::unitary(&u.tensor(&w)), 1e-9));
        let deph = Channel::dephasing(2);
        assert!(deph.compose(&deph).unwrap().approx_eq(&deph, 1e-9));
        assert!(matches!(c.compose(&c), Err(QuantumError::Dimension(_))));
    }

    #[test]
    fn apply_matches_kraus_action() {
        let mut r = rng(10);
        let c = Channel::random(3, 2, 3, &mut r);
        let ks = c.kraus().unwrap();
        let psi = ginibre(3, 1, &mut r);
        let rho = &psi * &psi.adjoint();
        let direct = ks.iter().fold(CMatrix::zeros(2, 2), |acc, k| acc.add(&(&(k * &rho) * &k.adjoint())));
        assert!(c.apply(&rho).unwrap().approx_eq(&direct, 1e-10));
    }

    #[test]
    fn json_formats() {
        let m = CMatrix::from_real_rows(&[&[1.0, 0.0]]);
        assert_eq!(serde_json::to_string(&m).unwrap(), r#"{"rows":1,"cols":2,"entries":[[1.0,0.0],[0.0,0.0]]}"#);
        let c = Channel::dephasing(2);
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.starts_with(r#"{"din":2,"dout":2,"choi":{"rows":4"#));
        assert_eq!(serde_json::from_str::<Channel>(&s).unwrap(), c);
        assert!(serde_json::from_str::<UnitaryM>(r#"{"rows":1,"cols":1,"entries":[[2.0,0.0]]}"#).is_err());
    }
}
