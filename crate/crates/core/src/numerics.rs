//! Dense complex linear algebra for dimensions up to 4 (16 for state vectors).
//!
//! Everything here is a pure function of its inputs. Tolerances live in a
//! single [`Tolerances`] profile so that callers (and the CLI, via the
//! `ENTCAP_TOLERANCES` environment variable) can tighten or relax them in one
//! place.

use std::cmp::Ordering;
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::{Error, Result};

/// Environment variable read by [`Tolerances::from_env`].
pub const TOLERANCE_ENV: &str = "ENTCAP_TOLERANCES";

/// Numerical tolerance profile shared by every module.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Max-norm bound on `M†M − I` for a matrix to count as unitary.
    pub unitarity: f64,
    /// Bound on pairwise overlaps of vectors that should be orthonormal.
    pub orthonormality: f64,
    /// A state is rank one when its largest Schmidt coefficient is at least `1 - rank1`.
    pub rank1: f64,
    /// Max-norm bound on a gate reconstruction from its decomposition.
    pub reconstruction: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            unitarity: 1e-9,
            orthonormality: 1e-10,
            rank1: 1e-8,
            reconstruction: 1e-8,
        }
    }
}

impl Tolerances {
    /// Parses a profile of the form `unitarity=1e-9,rank1=1e-8`; unspecified
    /// keys keep their defaults.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut tol = Self::default();
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("bad tolerance entry `{item}`")))?;
            let value: f64 = value
                .trim()
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite() && *v > 0.0)
                .ok_or_else(|| Error::InvalidArgument(format!("bad tolerance value `{item}`")))?;
            match key.trim() {
                "unitarity" => tol.unitarity = value,
                "orthonormality" => tol.orthonormality = value,
                "rank1" => tol.rank1 = value,
                "reconstruction" => tol.reconstruction = value,
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "unknown tolerance key `{other}`"
                    )))
                }
            }
        }
        Ok(tol)
    }

    /// Reads [`TOLERANCE_ENV`]; falls back to the defaults when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var(TOLERANCE_ENV) {
            Ok(spec) => Self::parse(&spec),
            Err(_) => Ok(Self::default()),
        }
    }
}

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| {
                    let z = self[(r, c)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  {}", row.join("  "))?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument(
                "matrix has non-finite entries".into(),
            ));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    /// Builds a square matrix from fixed-size rows.
    pub fn from_rows<const N: usize>(rows: [[C64; N]; N]) -> Self {
        Self {
            rows: N,
            cols: N,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<C64>]) -> Self {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows, cols);
        for (c, col) in columns.iter().enumerate() {
            for (r, &z) in col.iter().enumerate() {
                m[(r, c)] = z;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(c, r)] = self[(r, c)].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(c, r)] = self[(r, c)];
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn kron(&self, other: &Self) -> Self {
        let mut m = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self[(r1, c1)];
                for r2 in 0..other.rows {
                    for c2 in 0..other.cols {
                        m[(r1 * other.rows + r2, c1 * other.cols + c2)] = a * other[(r2, c2)];
                    }
                }
            }
        }
        m
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols, "matvec dimension mismatch");
        (0..self.rows)
            .map(|r| {
                self.data[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Determinant of a 2×2 matrix.
    pub fn det2(&self) -> C64 {
        assert!(self.rows == 2 && self.cols == 2, "det2 needs a 2x2 matrix");
        self[(0, 0)] * self[(1, 1)] - self[(0, 1)] * self[(1, 0)]
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `‖M†M − I‖_max`.
    pub fn unitarity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (&self.adjoint() * self).max_abs_diff(&Self::identity(self.rows))
    }

    /// `‖M − Mᵀ‖_max`.
    pub fn symmetry_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.max_abs_diff(&self.transpose())
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_residual() < tol
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut m = ComplexMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..rhs.cols {
                    m[(r, c)] += a * rhs[(k, c)];
                }
            }
        }
        m
    }
}

pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter()
        .flat_map(|&x| b.iter().map(move |&y| x * y))
        .collect()
}

pub fn scale_vec(v: &[C64], factor: C64) -> Vec<C64> {
    v.iter().map(|&z| z * factor).collect()
}

/// Max-norm distance between two vectors.
pub fn max_abs_diff_vec(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Eigenvalues and eigenvectors of a real symmetric `n×n` matrix by cyclic
/// Jacobi sweeps. Returns the (unsorted) eigenvalues and a row-major matrix
/// whose columns are the corresponding orthonormal eigenvectors.
pub fn symmetric_eigen(a: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(a.len(), n * n);
    let mut a = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    if scale == 0.0 {
        return (vec![0.0; n], v);
    }
    for _sweep in 0..64 {
        let off: f64 = (0..n)
            .flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| a[p * n + q] * a[p * n + q])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-17 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i * n + i]).collect(), v)
}

/// Eigen-decomposition of a symmetric unitary: `M v_k = e^{iθ_k} v_k` with
/// real orthonormal `v_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenSystem {
    /// Eigenphases in `[0, 2π)`, ascending.
    pub phases: Vec<f64>,
    /// Real eigenvectors; first entry with modulus above `1e-10` is positive.
    pub vectors: Vec<Vec<f64>>,
}

impl EigenSystem {
    /// `Σ_k e^{iθ_k} v_k v_kᵀ`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.vectors.len();
        let mut m = ComplexMatrix::zeros(n, n);
        for (theta, v) in self.phases.iter().zip(&self.vectors) {
            let e = C64::from_polar(1.0, *theta);
            for r in 0..n {
                for c in 0..n {
                    m[(r, c)] += e * (v[r] * v[c]);
                }
            }
        }
        m
    }
}

/// Eigenvalues of the real part closer than this are diagonalized jointly
/// with the imaginary part.
const CLUSTER_TOL: f64 = 1e-6;
/// Eigenphases closer than this are ordered by their eigenvectors.
const PHASE_TIE_TOL: f64 = 1e-9;
/// Coupling used when jointly diagonalizing `Y + κX` inside an `X` cluster.
const CLUSTER_COUPLING: f64 = 0.618_033_988_749_894_9;

pub fn eig_symmetric_unitary(m: &ComplexMatrix) -> Result<EigenSystem> {
    eig_symmetric_unitary_with(m, &Tolerances::default())
}

/// Diagonalizes a symmetric unitary `M = X + iY` in a real basis.
///
/// `X` and `Y` are real symmetric and commute. `X` is diagonalized first;
/// inside each (near-)degenerate eigenspace of `X` the restriction of `Y` is
/// diagonalized, which resolves eigenvalues of `M` that share a real part.
pub fn eig_symmetric_unitary_with(m: &ComplexMatrix, tol: &Tolerances) -> Result<EigenSystem> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: m.cols(),
        });
    }
    let n = m.rows();
    let sym = m.symmetry_residual();
    if sym >= tol.unitarity {
        return Err(Error::NotSymmetric(sym));
    }
    let unit = m.unitarity_residual();
    if unit >= tol.unitarity {
        return Err(Error::NotUnitary(unit));
    }

    // Symmetrize to remove the (tolerated) antisymmetric noise.
    let mut x = vec![0.0; n * n];
    let mut y = vec![0.0; n * n];
    for r in 0..n {
        for c in 0..n {
            let z = (m[(r, c)] + m[(c, r)]) * 0.5;
            x[r * n + c] = z.re;
            y[r * n + c] = z.im;
        }
    }

    let (xvals, xvecs) = symmetric_eigen(&x, n);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| xvals[i].total_cmp(&xvals[j]));

    let column = |vecs: &[f64], k: usize| -> Vec<f64> { (0..n).map(|r| vecs[r * n + k]).collect() };

    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && xvals[order[end]] - xvals[order[end - 1]] < CLUSTER_TOL {
            end += 1;
        }
        let basis: Vec<Vec<f64>> = order[start..end]
            .iter()
            .map(|&k| column(&xvecs, k))
            .collect();
        if basis.len() == 1 {
            vectors.push(basis.into_iter().next().unwrap());
        } else {
            // Restrict Y + κX to the cluster and diagonalize it there.
            let d = basis.len();
            let mut restricted = vec![0.0; d * d];
            for i in 0..d {
                for j in 0..d {
                    restricted[i * d + j] = quad(&y, &basis[i], &basis[j], n)
                        + CLUSTER_COUPLING * quad(&x, &basis[i], &basis[j], n);
                }
            }
            let (_, rot) = symmetric_eigen(&restricted, d);
            for k in 0..d {
                let mut v = vec![0.0; n];
                for (i, b) in basis.iter().enumerate() {
                    let w = rot[i * d + k];
                    for r in 0..n {
                        v[r] += w * b[r];
                    }
                }
                vectors.push(v);
            }
        }
        start = end;
    }

    let mut pairs: Vec<(f64, Vec<f64>)> = vectors
        .into_iter()
        .map(|mut v| {
            let nv = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            v.iter_mut().for_each(|a| *a /= nv);
            fix_sign(&mut v);
            let re = quad(&x, &v, &v, n);
            let im = quad(&y, &v, &v, n);
            let mut theta = im.atan2(re).rem_euclid(TAU);
            if TAU - theta < 1e-12 {
                theta = 0.0;
            }
            (theta, v)
        })
        .collect();

    // Deterministic order: by phase, ties broken by eigenvector entries (descending).
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut i = 0;
    while i < pairs.len() {
        let mut j = i + 1;
        while j < pairs.len() && pairs[j].0 - pairs[j - 1].0 < PHASE_TIE_TOL {
            j += 1;
        }
        pairs[i..j].sort_by(|a, b| lex_desc(&a.1, &b.1));
        i = j;
    }
    // Wrap-around tie between phases near 0 and near 2π.
    let system = EigenSystem {
        phases: pairs.iter().map(|p| p.0).collect(),
        vectors: pairs.into_iter().map(|p| p.1).collect(),
    };

    let residual = system.reconstruct().max_abs_diff(m);
    if residual > tol.reconstruction {
        return Err(Error::DegeneracyResolutionFailure(residual));
    }
    Ok(system)
}

fn quad(a: &[f64], u: &[f64], v: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            s += u[r] * a[r * n + c] * v[c];
        }
    }
    s
}

fn fix_sign(v: &mut [f64]) {
    if let Some(first) = v.iter().find(|a| a.abs() > 1e-10) {
        if *first < 0.0 {
            v.iter_mut().for_each(|a| *a = -*a);
        }
    }
}

fn lex_desc(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match y.total_cmp(x) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Schmidt decomposition `v = Σ_k c_k |a_k⟩|b_k⟩`.
///
/// Coefficients are sorted in INCREASING order (`c_1 ≤ c_2 ≤ …`), so the
/// dominant term is the last one.
#[derive(Clone, Debug, PartialEq)]
pub struct Schmidt {
    pub coefficients: Vec<f64>,
    pub basis_a: Vec<Vec<C64>>,
    pub basis_b: Vec<Vec<C64>>,
}

impl Schmidt {
    pub fn reconstruct(&self) -> Vec<C64> {
        let dim = self.basis_a[0].len() * self.basis_b[0].len();
        let mut v = vec![C64::new(0.0, 0.0); dim];
        for ((c, a), b) in self
            .coefficients
            .iter()
            .zip(&self.basis_a)
            .zip(&self.basis_b)
        {
            for (slot, z) in v.iter_mut().zip(kron_vec(a, b)) {
                *slot += z * *c;
            }
        }
        v
    }
}

/// One-sided (Hestenes) Jacobi on the columns of a row-major `rows×cols`
/// matrix. On return the columns of `a` are mutually orthogonal and, if `v`
/// is given, `a_in = a_out · v†`.
fn hestenes(a: &mut [C64], rows: usize, cols: usize, mut v: Option<&mut [C64]>) {
    // Couplings below this are dropped; without it, exactly-zero columns
    // keep producing rounding-level rotations.
    let floor = 1e-18 * a.iter().map(|z| z.norm_sqr()).sum::<f64>();
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = C64::new(0.0, 0.0);
                for r in 0..rows {
                    let ap = a[r * cols + p];
                    let aq = a[r * cols + q];
                    alpha += ap.norm_sqr();
                    beta += aq.norm_sqr();
                    gamma += ap.conj() * aq;
                }
                let g = gamma.norm();
                if g <= 1e-15 * (alpha * beta).sqrt() || g <= floor || g < 1e-300 {
                    continue;
                }
                rotated = true;
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for r in 0..rows {
                    let ap = a[r * cols + p];
                    let aq = a[r * cols + q] * phase;
                    a[r * cols + p] = ap * c - aq * s;
                    a[r * cols + q] = ap * s + aq * c;
                }
                if let Some(v) = v.as_deref_mut() {
                    for r in 0..cols {
                        let vp = v[r * cols + p];
                        let vq = v[r * cols + q] * phase;
                        v[r * cols + p] = vp * c - vq * s;
                        v[r * cols + q] = vp * s + vq * c;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
}

/// Schmidt coefficients only (increasing), without normalization checks.
/// Used by hot loops in the optimizers.
pub fn schmidt_coefficients(v: &[C64], dim_a: usize, dim_b: usize) -> Vec<f64> {
    let (rows, cols, mut a) = if dim_b <= dim_a {
        (dim_a, dim_b, v.to_vec())
    } else {
        (dim_b, dim_a, transpose_flat(v, dim_a, dim_b))
    };
    hestenes(&mut a, rows, cols, None);
    let mut c: Vec<f64> = (0..cols)
        .map(|k| {
            (0..rows)
                .map(|r| a[r * cols + k].norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    c.sort_by(f64::total_cmp);
    c
}

fn transpose_flat(v: &[C64], rows: usize, cols: usize) -> Vec<C64> {
    let mut t = vec![C64::new(0.0, 0.0); v.len()];
    for r in 0..rows {
        for c in 0..cols {
            t[c * rows + r] = v[r * cols + c];
        }
    }
    t
}

pub fn schmidt_svd(v: &[C64], dim_a: usize, dim_b: usize) -> Result<Schmidt> {
    if v.len() != dim_a * dim_b {
        return Err(Error::DimensionMismatch {
            expected: dim_a * dim_b,
            found: v.len(),
        });
    }
    let nv = norm(v);
    if (nv - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized(nv));
    }
    if dim_b > dim_a {
        // Decompose the swapped bipartition and swap back.
        let s = schmidt_svd(&transpose_flat(v, dim_a, dim_b), dim_b, dim_a)?;
        return Ok(Schmidt {
            coefficients: s.coefficients,
            basis_a: s.basis_b,
            basis_b: s.basis_a,
        });
    }
    let (rows, cols) = (dim_a, dim_b);
    let mut a = v.to_vec();
    let mut w = vec![C64::new(0.0, 0.0); cols * cols];
    for i in 0..cols {
        w[i * cols + i] = C64::new(1.0, 0.0);
    }
    hestenes(&mut a, rows, cols, Some(&mut w));

    let mut terms: Vec<(f64, Vec<C64>, Vec<C64>)> = (0..cols)
        .map(|k| {
            let col: Vec<C64> = (0..rows).map(|r| a[r * cols + k]).collect();
            let sigma = norm(&col);
            let b: Vec<C64> = (0..cols).map(|r| w[r * cols + k].conj()).collect();
            (sigma, col, b)
        })
        .collect();
    terms.sort_by(|x, y| x.0.total_cmp(&y.0));

    // Normalize left vectors; complete the ones belonging to zero coefficients.
    let mut basis_a: Vec<Option<Vec<C64>>> = terms
        .iter()
        .map(|(sigma, col, _)| (*sigma > 1e-12).then(|| scale_vec(col, C64::new(1.0 / sigma, 0.0))))
        .collect();
    for k in 0..basis_a.len() {
        if basis_a[k].is_none() {
            let taken: Vec<Vec<C64>> = basis_a.iter().flatten().cloned().collect();
            basis_a[k] = Some(complete_orthonormal(&taken, rows));
        }
    }
    Ok(Schmidt {
        coefficients: terms.iter().map(|t| t.0).collect(),
        basis_a: basis_a.into_iter().map(Option::unwrap).collect(),
        basis_b: terms.into_iter().map(|t| t.2).collect(),
    })
}

/// A unit vector orthogonal to all of `taken` (Gram–Schmidt against the
/// standard basis).
fn complete_orthonormal(taken: &[Vec<C64>], dim: usize) -> Vec<C64> {
    let mut best: Option<(f64, Vec<C64>)> = None;
    for e in 0..dim {
        let mut v = vec![C64::new(0.0, 0.0); dim];
        v[e] = C64::new(1.0, 0.0);
        for _ in 0..2 {
            for t in taken {
                let overlap = inner(t, &v);
                for (x, y) in v.iter_mut().zip(t) {
                    *x -= overlap * y;
                }
            }
        }
        let n = norm(&v);
        if best.as_ref().is_none_or(|(bn, _)| n > *bn + 1e-12) {
            best = Some((n, v));
        }
    }
    let (n, v) = best.expect("dimension must be positive");
    scale_vec(&v, C64::new(1.0 / n, 0.0))
}

/// Factors a product vector as `a ⊗ b`, with `a` and `b` unit vectors and the
/// first non-negligible entry of `a` real and non-negative.
pub fn factor_rank1(v: &[C64], dim_a: usize, dim_b: usize) -> Result<(Vec<C64>, Vec<C64>)> {
    factor_rank1_with(v, dim_a, dim_b, &Tolerances::default())
}

pub fn factor_rank1_with(
    v: &[C64],
    dim_a: usize,
    dim_b: usize,
    tol: &Tolerances,
) -> Result<(Vec<C64>, Vec<C64>)> {
    let nv = norm(v);
    if (nv - 1.0).abs() > tol.rank1 {
        return Err(Error::NotNormalized(nv));
    }
    let s = schmidt_svd(&scale_vec(v, C64::new(1.0 / nv, 0.0)), dim_a, dim_b)?;
    let k = s.coefficients.len();
    let largest = s.coefficients[k - 1];
    if largest < 1.0 - tol.rank1 {
        let second = if k > 1 { s.coefficients[k - 2] } else { 0.0 };
        return Err(Error::NotProduct(second));
    }
    let mut a = s.basis_a[k - 1].clone();
    if let Some(first) = a.iter().find(|z| z.norm() > 1e-10).copied() {
        let unphase = C64::from_polar(1.0, -first.arg());
        a.iter_mut().for_each(|z| *z *= unphase);
    }
    // Best b for the fixed a: b = (⟨a| ⊗ 1) v.
    let mut b = vec![C64::new(0.0, 0.0); dim_b];
    for i in 0..dim_a {
        for j in 0..dim_b {
            b[j] += a[i].conj() * v[i * dim_b + j];
        }
    }
    let nb = norm(&b);
    b.iter_mut().for_each(|z| *z /= nb);
    Ok((a, b))
}

/// Haar-random unitary of dimension 2 or 4.
///
/// A matrix of independent standard complex Gaussians is orthonormalized
/// column by column (modified Gram–Schmidt, which yields the QR factor with a
/// positive real diagonal in `R`).
pub fn random_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_unitary_from(dim, &mut rng)
}

pub fn random_unitary_from<R: rand::Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    assert!(dim == 2 || dim == 4, "random_unitary supports dim 2 or 4");
    let mut cols: Vec<Vec<C64>> = (0..dim)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(rng);
                    let im: f64 = StandardNormal.sample(rng);
                    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
                })
                .collect()
        })
        .collect();
    for k in 0..dim {
        // Two passes keep the columns orthonormal to machine precision.
        for _ in 0..2 {
            for j in 0..k {
                let (done, rest) = cols.split_at_mut(k);
                let overlap = inner(&done[j], &rest[0]);
                for (x, y) in rest[0].iter_mut().zip(&done[j]) {
                    *x -= overlap * y;
                }
            }
        }
        let n = norm(&cols[k]);
        cols[k].iter_mut().for_each(|z| *z /= n);
    }
    ComplexMatrix::from_columns(&cols)
}

/// Pauli matrices σx, σy, σz.
pub fn pauli(axis: usize) -> ComplexMatrix {
    let o = C64::new(0.0, 0.0);
    let l = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    match axis {
        0 => ComplexMatrix::from_rows([[o, l], [l, o]]),
        1 => ComplexMatrix::from_rows([[o, -i], [i, o]]),
        2 => ComplexMatrix::from_rows([[l, o], [o, -l]]),
        _ => panic!("pauli axis must be 0, 1 or 2"),
    }
}

/// Single-qubit state on the Bloch sphere: `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
pub fn bloch_state(theta: f64, phi: f64) -> [C64; 2] {
    [
        C64::new((theta / 2.0).cos(), 0.0),
        C64::from_polar((theta / 2.0).sin(), phi),
    ]
}

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if TAU - t < 1e-15 {
        0.0
    } else {
        t
    }
}

/// `π` shortcut re-exported for angle arithmetic in downstream modules.
pub const HALF_PI: f64 = PI / 2.0;
