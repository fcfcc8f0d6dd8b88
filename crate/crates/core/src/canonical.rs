//! Canonical non-local decomposition `U = e^{iφ} (UA⊗UB)·Ud(α)·(VA⊗VB)`.
//!
//! `Ud(α) = exp(−i Σ_β α_β σ_β⊗σ_β)` is diagonal in the magic basis with
//! eigenvalues `e^{−iλ_k}`:
//!
//! ```text
//! λ1 =  αx − αy + αz      λ2 = −αx + αy + αz
//! λ3 = −αx − αy − αz      λ4 =  αx + αy − αz
//! ```
//!
//! Two forms of α are kept apart. [`InteractionVector`] is the raw form
//! produced by [`decompose`]: components in `[0, π/2)`, sorted descending,
//! and always valid for gate reconstruction. [`CanonicalAlpha`] lives in the
//! chamber `π/4 ≥ αx ≥ αy ≥ αz ≥ 0`; it is reached through a reflection that
//! involves complex conjugation, so it only describes entangling capability.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::magic::{concurrence_direct, magic_basis, phi, to_magic_amps};
use crate::numerics::{
    eig_symmetric_unitary_with, factor_rank1_with, inner, pauli, ComplexMatrix, Tolerances,
};
use crate::{Error, Result};

/// Interaction coefficients `(αx, αy, αz)` in radians.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InteractionVector {
    pub alpha: [f64; 3],
}

impl InteractionVector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { alpha: [x, y, z] }
    }

    pub fn x(&self) -> f64 {
        self.alpha[0]
    }

    pub fn y(&self) -> f64 {
        self.alpha[1]
    }

    pub fn z(&self) -> f64 {
        self.alpha[2]
    }
}

impl fmt::Display for InteractionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            self.alpha[0], self.alpha[1], self.alpha[2]
        )
    }
}

/// Tolerance for the chamber inequalities.
pub const CHAMBER_TOL: f64 = 1e-12;

/// α in the capability chamber `π/4 ≥ αx ≥ αy ≥ αz ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CanonicalAlpha(InteractionVector);

impl CanonicalAlpha {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let t = CHAMBER_TOL;
        let ok = [x, y, z].iter().all(|v| v.is_finite())
            && x <= FRAC_PI_4 + t
            && x >= y - t
            && y >= z - t
            && z >= -t;
        if ok {
            Ok(Self(InteractionVector::new(x, y, z)))
        } else {
            Err(Error::NotCanonical(x, y, z))
        }
    }

    pub fn vector(&self) -> InteractionVector {
        self.0
    }

    pub fn alpha(&self) -> [f64; 3] {
        self.0.alpha
    }
}

/// Eigenphases of `Ud` on the magic basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LambdaPhases {
    pub lambda: [f64; 4],
}

pub fn lambdas_from_alphas(a: &InteractionVector) -> LambdaPhases {
    let [x, y, z] = a.alpha;
    LambdaPhases {
        lambda: [x - y + z, -x + y + z, -x - y - z, x + y - z],
    }
}

fn reduce_half_pi(v: f64) -> f64 {
    let r = v.rem_euclid(FRAC_PI_2);
    if FRAC_PI_2 - r < 1e-11 {
        0.0
    } else {
        r
    }
}

pub fn alphas_from_lambdas(l: &LambdaPhases) -> Result<InteractionVector> {
    let [l1, l2, l3, l4] = l.lambda;
    let sum = l1 + l2 + l3 + l4;
    let offset = sum - TAU * (sum / TAU).round();
    if offset.abs() > 1e-8 {
        return Err(Error::InconsistentPhases(offset));
    }
    Ok(InteractionVector::new(
        reduce_half_pi((l1 + l4) / 2.0),
        reduce_half_pi((l2 + l4) / 2.0),
        reduce_half_pi((l1 + l2) / 2.0),
    ))
}

/// `Q·diag(e^{−iλ})·Q†`.
pub fn build_ud(a: &InteractionVector) -> ComplexMatrix {
    let l = lambdas_from_alphas(a).lambda;
    let d = ComplexMatrix::diagonal(&l.map(|x| C64::from_polar(1.0, -x)));
    let q = magic_basis();
    &(q * &d) * &q.adjoint()
}

/// Result of mapping a maximally entangled basis onto the magic basis:
/// `(UA⊗UB) e^{iζ_k} |Ψ_k⟩ = |Φ_k⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalEquivalence {
    pub ua: ComplexMatrix,
    pub ub: ComplexMatrix,
    pub zetas: [f64; 4],
    pub residual: f64,
}

/// Orthonormal complement of a qubit state, `(−b*, a*)`.
fn complement(v: &[C64]) -> Vec<C64> {
    vec![-v[1].conj(), v[0].conj()]
}

fn rows_conj(r0: &[C64], r1: &[C64]) -> ComplexMatrix {
    ComplexMatrix::from_rows([[r0[0].conj(), r0[1].conj()], [r1[0].conj(), r1[1].conj()]])
}

pub fn local_equivalents_from_me_basis(basis: &[[C64; 4]; 4]) -> Result<LocalEquivalence> {
    local_equivalents_from_me_basis_with(basis, &Tolerances::default())
}

pub fn local_equivalents_from_me_basis_with(
    basis: &[[C64; 4]; 4],
    tol: &Tolerances,
) -> Result<LocalEquivalence> {
    for (k, psi) in basis.iter().enumerate() {
        if concurrence_direct(psi) < 1.0 - tol.rank1 {
            return Err(Error::NotMaximallyEntangled(k + 1));
        }
        for (j, other) in basis.iter().enumerate().skip(k + 1) {
            if inner(psi, other).norm() > tol.orthonormality {
                return Err(Error::NotOrthogonal(k + 1, j + 1));
            }
        }
    }

    // Strip phases so the magic coefficients become real.
    let bars: Vec<Vec<C64>> = basis
        .iter()
        .map(|psi| {
            let mu = to_magic_amps(psi);
            let s: C64 = mu.iter().map(|m| m * m).sum();
            let g = C64::from_polar(1.0, -s.arg() / 2.0);
            psi.iter().map(|z| z * g).collect()
        })
        .collect();

    let i = C64::new(0.0, 1.0);
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let q1: Vec<C64> = bars[0]
        .iter()
        .zip(&bars[1])
        .map(|(a, b)| (a + i * b) * h)
        .collect();
    let q2: Vec<C64> = bars[0]
        .iter()
        .zip(&bars[1])
        .map(|(a, b)| (a - i * b) * h)
        .collect();
    let (e, f) = factor_rank1_with(&q1, 2, 2, tol)?;
    let (e2, _) = factor_rank1_with(&q2, 2, 2, tol)?;

    // Exact complements keep the local bases orthonormal; phases are then
    // matched to the second factorization.
    let mut e_perp = complement(&e);
    let ph = inner(&e_perp, &e2);
    let ph = if ph.norm() > 1e-12 {
        ph / ph.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    e_perp.iter_mut().for_each(|z| *z *= ph);
    let mut f_perp = complement(&f);
    let ov: C64 = {
        let ef: Vec<C64> = e_perp
            .iter()
            .flat_map(|a| f_perp.iter().map(move |b| a * b))
            .collect();
        inner(&ef, &q2)
    };
    let ph = if ov.norm() > 1e-12 {
        ov / ov.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    f_perp.iter_mut().for_each(|z| *z *= ph);

    let u0a = rows_conj(&e, &e_perp);
    let u0b = rows_conj(&f, &f_perp);

    let prod = |a: &[C64], b: &[C64]| -> Vec<C64> {
        a.iter()
            .flat_map(|x| b.iter().map(move |y| x * y))
            .collect()
    };
    let a = inner(&prod(&e, &f_perp), &bars[2]);
    let b = inner(&prod(&e_perp, &f), &bars[2]);
    let delta = if b.norm() > 1e-12 {
        (-a / b).arg() / 2.0
    } else {
        0.0
    };

    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let build = |delta: f64| {
        let da = ComplexMatrix::from_rows([[one, zero], [zero, C64::from_polar(1.0, delta)]]);
        let db = ComplexMatrix::from_rows([[one, zero], [zero, C64::from_polar(1.0, -delta)]]);
        (&da * &u0a, &db * &u0b)
    };
    let (mut ua, mut ub) = build(delta);
    let phi3 = phi(2);
    if inner(&phi3, &ua.kron(&ub).matvec(&bars[2])).re < 0.0 {
        (ua, ub) = build(delta + PI);
    }

    let l = ua.kron(&ub);
    let mut zetas = [0.0; 4];
    let mut residual: f64 = 0.0;
    for k in 0..4 {
        let mapped = l.matvec(&basis[k]);
        let target = phi(k);
        let z = -inner(&target, &mapped).arg();
        zetas[k] = z;
        let rot = C64::from_polar(1.0, z);
        for (m, t) in mapped.iter().zip(&target) {
            residual = residual.max((m * rot - t).norm());
        }
    }
    if residual > tol.reconstruction {
        return Err(Error::ReconstructionFailure(residual));
    }
    Ok(LocalEquivalence {
        ua,
        ub,
        zetas,
        residual,
    })
}

/// `e^{iφ}(UA⊗UB)·Ud(α)·(VA⊗VB)` with unit-determinant locals and `α` in
/// raw form.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalDecomposition {
    pub ua: ComplexMatrix,
    pub ub: ComplexMatrix,
    pub va: ComplexMatrix,
    pub vb: ComplexMatrix,
    pub alpha: InteractionVector,
    pub phase: f64,
    /// Max-norm distance between the reconstruction and the input gate.
    pub residual: f64,
}

impl CanonicalDecomposition {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let r = &(&self.ua.kron(&self.ub) * &build_ud(&self.alpha)) * &self.va.kron(&self.vb);
        r.scale(C64::from_polar(1.0, self.phase))
    }
}

#[derive(Clone)]
struct Locals {
    ua: ComplexMatrix,
    ub: ComplexMatrix,
    va: ComplexMatrix,
    vb: ComplexMatrix,
}

impl Locals {
    /// `α_j → α_j ± π/2`.
    fn shift(&mut self, j: usize) {
        let s = pauli(j);
        self.va = &s * &self.va;
        self.vb = &s * &self.vb;
    }

    /// Negates `α_j, α_k` (the two axes other than `l`).
    fn negate_pair_except(&mut self, l: usize) {
        let s = pauli(l);
        self.ua = &self.ua * &s;
        self.va = &s * &self.va;
    }

    /// `α_j → π/2 − α_j`, `α_k → π/2 − α_k`.
    fn reflect_pair(&mut self, alpha: &mut [f64; 3], j: usize, k: usize) {
        self.negate_pair_except(3 - j - k);
        self.shift(j);
        self.shift(k);
        alpha[j] = FRAC_PI_2 - alpha[j];
        alpha[k] = FRAC_PI_2 - alpha[k];
    }

    fn swap(&mut self, alpha: &mut [f64; 3], j: usize, k: usize) {
        let kc = axis_swap_clifford(j, k);
        let kd = kc.adjoint();
        self.ua = &self.ua * &kd;
        self.ub = &self.ub * &kd;
        self.va = &kc * &self.va;
        self.vb = &kc * &self.vb;
        alpha.swap(j, k);
    }
}

/// Single-qubit Clifford `K` with `K σ_j K† = ±σ_k` and `K σ_k K† = ±σ_j`.
pub fn axis_swap_clifford(j: usize, k: usize) -> ComplexMatrix {
    let o = C64::new(0.0, 0.0);
    let l = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let h = FRAC_1_SQRT_2;
    match (j.min(k), j.max(k)) {
        (0, 1) => ComplexMatrix::from_rows([[l, o], [o, i]]),
        (0, 2) => ComplexMatrix::from_rows([[l * h, l * h], [l * h, -l * h]]),
        (1, 2) => ComplexMatrix::from_rows([[l * h, -i * h], [-i * h, l * h]]),
        _ => panic!("axis swap needs two distinct axes"),
    }
}

/// Brings α into raw normal form, absorbing every step into the locals:
/// components in `[0, π/2)`, at most one above `π/4`, sorted descending.
fn normal_form(mut alpha: [f64; 3], loc: &mut Locals) -> [f64; 3] {
    for (j, a) in alpha.iter_mut().enumerate() {
        let k = (*a / FRAC_PI_2).floor();
        *a -= k * FRAC_PI_2;
        let mut odd = (k as i64).rem_euclid(2) == 1;
        if FRAC_PI_2 - *a < 1e-11 {
            *a -= FRAC_PI_2;
            odd = !odd;
        }
        if *a < 0.0 {
            *a = 0.0;
        }
        if odd {
            loc.shift(j);
        }
    }

    let high =
        |alpha: &[f64; 3]| -> Vec<usize> { (0..3).filter(|&j| alpha[j] > FRAC_PI_4).collect() };
    loop {
        let h = high(&alpha);
        if h.len() < 2 {
            break;
        }
        loc.reflect_pair(&mut alpha, h[0], h[1]);
    }
    if let [b] = high(&alpha)[..] {
        let neutral = |v: f64| (v - FRAC_PI_4).abs() < 1e-9;
        if !neutral(alpha[b]) {
            if let Some(n) = (0..3).find(|&n| n != b && neutral(alpha[n])) {
                loc.reflect_pair(&mut alpha, b, n);
            } else {
                let folded: Vec<f64> = (0..3)
                    .map(|j| {
                        if j == b {
                            FRAC_PI_2 - alpha[j]
                        } else {
                            alpha[j]
                        }
                    })
                    .collect();
                let m = (0..3)
                    .min_by(|&p, &q| folded[p].total_cmp(&folded[q]))
                    .unwrap();
                if m != b {
                    loc.reflect_pair(&mut alpha, b, m);
                }
            }
        }
    }
    for a in alpha.iter_mut() {
        *a = a.clamp(0.0, FRAC_PI_2);
        if FRAC_PI_2 - *a < 1e-11 {
            *a = 0.0;
        }
    }
    // Descending sort by adjacent swaps.
    for _ in 0..3 {
        for j in 0..2 {
            if alpha[j] < alpha[j + 1] {
                loc.swap(&mut alpha, j, j + 1);
            }
        }
    }
    alpha
}

fn unit_det(u: &ComplexMatrix) -> ComplexMatrix {
    let d = u.det2();
    u.scale(C64::from_polar(1.0 / d.norm().sqrt(), -d.arg() / 2.0))
}

pub fn decompose(g: &ComplexMatrix) -> Result<CanonicalDecomposition> {
    decompose_with(g, &Tolerances::default())
}

pub fn decompose_with(g: &ComplexMatrix, tol: &Tolerances) -> Result<CanonicalDecomposition> {
    if g.rows() != 4 || g.cols() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 16,
            found: g.rows() * g.cols(),
        });
    }
    let unit = g.unitarity_residual();
    if unit >= tol.unitarity {
        return Err(Error::NotUnitary(unit));
    }
    let q = magic_basis();
    let gm = &(&q.adjoint() * g) * q;
    let m = &gm.transpose() * &gm;
    // Rounding leaves M symmetric only to ~1e-15; symmetrize before solving.
    let m = {
        let mut s = m.clone();
        for r in 0..4 {
            for c in 0..4 {
                s[(r, c)] = (m[(r, c)] + m[(c, r)]) * 0.5;
            }
        }
        s
    };
    let sys = eig_symmetric_unitary_with(&m, tol)?;

    let mut best = f64::INFINITY;
    for perm in permutations4() {
        for signs in 0u8..16 {
            match attempt(g, &sys.phases, &sys.vectors, &perm, signs, tol) {
                Ok(d) if d.residual < tol.reconstruction => return Ok(d),
                Ok(d) => best = best.min(d.residual),
                Err(_) => {}
            }
        }
    }
    Err(Error::ReconstructionFailure(best))
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|x| p.contains(&x)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

fn attempt(
    g: &ComplexMatrix,
    phases: &[f64],
    vectors: &[Vec<f64>],
    perm: &[usize; 4],
    signs: u8,
    tol: &Tolerances,
) -> Result<CanonicalDecomposition> {
    let q = magic_basis();
    let mut psi = [[C64::new(0.0, 0.0); 4]; 4];
    let mut psi_t = [[C64::new(0.0, 0.0); 4]; 4];
    let mut eps = [0.0; 4];
    for k in 0..4 {
        let o: Vec<C64> = vectors[perm[k]].iter().map(|&x| C64::new(x, 0.0)).collect();
        let v = q.matvec(&o);
        eps[k] = phases[perm[k]] / 2.0 + if signs >> k & 1 == 1 { PI } else { 0.0 };
        let gv = g.matvec(&v);
        let rot = C64::from_polar(1.0, -eps[k]);
        for r in 0..4 {
            psi[k][r] = v[r];
            psi_t[k][r] = gv[r] * rot;
        }
    }
    let v_side = local_equivalents_from_me_basis_with(&psi, tol)?;
    let u_side = local_equivalents_from_me_basis_with(&psi_t, tol)?;
    let lambda: Vec<f64> = (0..4)
        .map(|k| u_side.zetas[k] - v_side.zetas[k] - eps[k])
        .collect();
    let mean = lambda.iter().sum::<f64>() / 4.0;
    let mu: Vec<f64> = lambda.iter().map(|l| l - mean).collect();
    let raw = [
        (mu[0] + mu[3]) / 2.0,
        (mu[1] + mu[3]) / 2.0,
        (mu[0] + mu[1]) / 2.0,
    ];

    let mut loc = Locals {
        ua: u_side.ua.adjoint(),
        ub: u_side.ub.adjoint(),
        va: v_side.ua,
        vb: v_side.ub,
    };
    let alpha = InteractionVector {
        alpha: normal_form(raw, &mut loc),
    };
    let (ua, ub, va, vb) = (
        unit_det(&loc.ua),
        unit_det(&loc.ub),
        unit_det(&loc.va),
        unit_det(&loc.vb),
    );
    let r = &(&ua.kron(&ub) * &build_ud(&alpha)) * &va.kron(&vb);
    let phase = (&r.adjoint() * g).trace().arg();
    let residual = r.scale(C64::from_polar(1.0, phase)).max_abs_diff(g);
    Ok(CanonicalDecomposition {
        ua,
        ub,
        va,
        vb,
        alpha,
        phase,
        residual,
    })
}

/// A symmetry applied while folding raw α into the capability chamber.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Symmetry {
    /// `α_axis → π/2 − α_axis`; preserves capability, not the gate.
    Reflect { axis: usize },
    /// Exchange of two components.
    Swap { i: usize, j: usize },
}

/// Folds raw α (components in `[0, π/2)`) into the capability chamber.
pub fn canonicalize_capability(a: &InteractionVector) -> Result<(CanonicalAlpha, Vec<Symmetry>)> {
    let mut alpha = a.alpha;
    if let Some(bad) = alpha.iter().find(|v| !(**v >= 0.0 && **v < FRAC_PI_2)) {
        return Err(Error::OutOfRange(*bad));
    }
    let mut applied = Vec::new();
    for (axis, v) in alpha.iter_mut().enumerate() {
        if *v > FRAC_PI_4 {
            *v = FRAC_PI_2 - *v;
            applied.push(Symmetry::Reflect { axis });
        }
    }
    for _ in 0..3 {
        for i in 0..2 {
            if alpha[i] < alpha[i + 1] {
                alpha.swap(i, i + 1);
                applied.push(Symmetry::Swap { i, j: i + 1 });
            }
        }
    }
    let [x, y, z] = alpha;
    Ok((CanonicalAlpha::new(x, y, z)?, applied))
}
