//! Maximal concurrence reachable from product inputs, best input states, and
//! a brute-force oracle over Bloch angles.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI, TAU};

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::canonical::{
    axis_swap_clifford, build_ud, canonicalize_capability, decompose_with, lambdas_from_alphas,
    CanonicalAlpha, CanonicalDecomposition, InteractionVector, Symmetry,
};
use crate::magic::{concurrence_direct, from_magic_amps, phi};
use crate::numerics::{bloch_state, factor_rank1, kron_vec, pauli, ComplexMatrix, Tolerances};
use crate::states::PureState;
use crate::{Error, Result};

const PE_TOL: f64 = 1e-12;

/// Below this total weight the μ-system is treated as degenerate.
const MU_DEGENERACY: f64 = 1e-9;

pub fn is_perfect_entangler(a: &CanonicalAlpha) -> bool {
    let [x, y, z] = a.alpha();
    x + y >= FRAC_PI_4 - PE_TOL && y + z <= FRAC_PI_4 + PE_TOL
}

/// `max_{k,l} |sin(λ_k − λ_l)|` for any α, without the perfect-entangler branch.
pub fn max_sin_lambda_difference(a: &InteractionVector) -> f64 {
    let (_, _, v) = best_pair(a);
    v.abs()
}

/// Ordered pair `(k, l)` (zero-based) maximizing `sin(λ_k − λ_l)`; ties go
/// to the lexicographically smallest pair.
fn best_pair(a: &InteractionVector) -> (usize, usize, f64) {
    let l = lambdas_from_alphas(a).lambda;
    let mut best = (0, 1, f64::NEG_INFINITY);
    for k in 0..4 {
        for m in 0..4 {
            if k == m {
                continue;
            }
            let v = (l[k] - l[m]).sin();
            if v > best.2 + 1e-12 {
                best = (k, m, v);
            }
        }
    }
    best
}

pub fn max_concurrence(a: &CanonicalAlpha) -> f64 {
    if is_perfect_entangler(a) {
        1.0
    } else {
        max_sin_lambda_difference(&a.vector()).min(1.0)
    }
}

/// Output (`mu`) and input (`w`) magic coefficients with `w_k = μ_k e^{iλ_k}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MuSolution {
    pub mu: [C64; 4],
    pub w: [C64; 4],
}

/// Maximally entangled output reachable from a product input, in the
/// `μ_1 = 0` gauge.
pub fn solve_mu_perfect(a: &CanonicalAlpha) -> Result<MuSolution> {
    if !is_perfect_entangler(a) {
        return Err(Error::NotPerfectEntangler);
    }
    let [x, y, z] = a.alpha();
    let a1 = 4.0 * (x + y);
    let a3 = 4.0 * (y + z);
    // |μ2|², |μ3|², |μ4|² up to normalization.
    let p2 = (-a1.sin()).max(0.0);
    let p4 = a3.sin().max(0.0);
    let p3 = (-(a3.cos() * p2 + a1.cos() * p4)).max(0.0);
    let sum = p2 + p3 + p4;
    let p = if sum > MU_DEGENERACY {
        [0.0, p2 / sum, p3 / sum, p4 / sum]
    } else if a3.cos() > 0.0 || a1.cos() > 0.0 {
        // Boundary αy + αz = 0 with αx = π/4, or the αx = αy = π/4 corner.
        [0.0, 0.5, 0.0, 0.5]
    } else {
        [0.0, 0.25, 0.5, 0.25]
    };
    let lambda = lambdas_from_alphas(&a.vector()).lambda;
    let mu = p.map(|v| C64::new(v.sqrt(), 0.0));
    let w = std::array::from_fn(|k| mu[k] * C64::from_polar(1.0, lambda[k]));
    Ok(MuSolution { mu, w })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CapabilityReport {
    pub c_max: f64,
    pub perfect_entangler: bool,
    /// `(φ_A, ψ_B)`.
    pub best_input: ([C64; 2], [C64; 2]),
    pub output_state: PureState,
    /// One-based `(k, l)` when the input is `(Φ_k + iΦ_l)/√2`.
    pub achieving_pair: Option<(usize, usize)>,
}

fn to2(v: &[C64]) -> [C64; 2] {
    [v[0], v[1]]
}

pub fn best_input(a: &CanonicalAlpha) -> Result<CapabilityReport> {
    let perfect = is_perfect_entangler(a);
    let (input, pair) = if perfect {
        let sol = solve_mu_perfect(a)?;
        (from_magic_amps(&sol.w).to_vec(), None)
    } else {
        let (k, l, _) = best_pair(&a.vector());
        let i = C64::new(0.0, 1.0);
        let v: Vec<C64> = phi(k)
            .iter()
            .zip(phi(l))
            .map(|(p, q)| (p + i * q) * FRAC_1_SQRT_2)
            .collect();
        (v, Some((k + 1, l + 1)))
    };
    let (fa, fb) = factor_rank1(&input, 2, 2)?;
    let out = build_ud(&a.vector()).matvec(&kron_vec(&fa, &fb));
    let c_max = max_concurrence(a);
    let reached = concurrence_direct(&out);
    if (reached - c_max).abs() > 1e-8 {
        return Err(Error::ReconstructionFailure((reached - c_max).abs()));
    }
    Ok(CapabilityReport {
        c_max,
        perfect_entangler: perfect,
        best_input: (to2(&fa), to2(&fb)),
        output_state: PureState::normalized(out, 2, 2)?,
        achieving_pair: pair,
    })
}

/// Oracle maximum and the Bloch angles `(θa, φa, θb, φb)` achieving it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    pub angles: [f64; 4],
}

/// `Ud` in the computational basis from its Pauli-product form, independent
/// of the magic basis.
pub fn ud_pauli_form(a: &InteractionVector) -> ComplexMatrix {
    let mut u = ComplexMatrix::identity(4);
    for (j, &x) in a.alpha.iter().enumerate() {
        let mut term = pauli(j).kron(&pauli(j)).scale(C64::new(0.0, -x.sin()));
        for d in 0..4 {
            term[(d, d)] += C64::new(x.cos(), 0.0);
        }
        u = &u * &term;
    }
    u
}

/// `U·(a ⊗ ·)` as a 4×2 matrix, stored row-major.
fn partial_apply(u: &ComplexMatrix, a: &[C64; 2]) -> [C64; 8] {
    let mut w = [C64::new(0.0, 0.0); 8];
    for r in 0..4 {
        for j in 0..2 {
            w[r * 2 + j] = u[(r, j)] * a[0] + u[(r, 2 + j)] * a[1];
        }
    }
    w
}

fn concurrence_from(w: &[C64; 8], b: &[C64; 2]) -> f64 {
    let v: [C64; 4] = std::array::from_fn(|r| w[r * 2] * b[0] + w[r * 2 + 1] * b[1]);
    concurrence_direct(&v)
}

fn eval_angles(u: &ComplexMatrix, t: &[f64; 4]) -> f64 {
    let a = bloch_state(t[0], t[1]);
    let b = bloch_state(t[2], t[3]);
    concurrence_from(&partial_apply(u, &a), &b)
}

/// Grid search over product inputs followed by coordinate-descent
/// refinement. Deterministic; the grid scan runs in parallel.
pub fn brute_force_max_concurrence(a: &InteractionVector, n_grid: usize) -> OracleResult {
    let n = n_grid.max(2);
    let u = ud_pauli_form(a);
    let thetas: Vec<f64> = (0..n).map(|i| PI * i as f64 / (n - 1) as f64).collect();
    let phis: Vec<f64> = (0..n).map(|i| TAU * i as f64 / n as f64).collect();
    let states: Vec<[C64; 2]> = (0..n * n)
        .map(|i| bloch_state(thetas[i / n], phis[i % n]))
        .collect();

    let (value, ia, ib) = (0..n * n)
        .into_par_iter()
        .map(|ia| {
            let w = partial_apply(&u, &states[ia]);
            let mut best = (f64::NEG_INFINITY, ia, 0);
            for (ib, b) in states.iter().enumerate() {
                let v = concurrence_from(&w, b);
                if v > best.0 {
                    best = (v, ia, ib);
                }
            }
            best
        })
        .reduce(
            || (f64::NEG_INFINITY, usize::MAX, usize::MAX),
            |x, y| {
                if y.0 > x.0 || (y.0 == x.0 && (y.1, y.2) < (x.1, x.2)) {
                    y
                } else {
                    x
                }
            },
        );

    let mut t = [thetas[ia / n], phis[ia % n], thetas[ib / n], phis[ib % n]];
    let mut best = value;
    let mut step = PI / (n - 1) as f64 / 2.0;
    while step > 1e-7 {
        loop {
            let mut improved = false;
            for k in 0..4 {
                for dir in [1.0, -1.0] {
                    let mut trial = t;
                    trial[k] += dir * step;
                    let v = eval_angles(&u, &trial);
                    if v > best {
                        best = v;
                        t = trial;
                        improved = true;
                    }
                }
            }
            if !improved {
                break;
            }
        }
        step /= 2.0;
    }
    OracleResult {
        value: best.min(1.0),
        angles: t,
    }
}

/// Capability of an arbitrary gate, with a best input for the gate itself.
#[derive(Clone, Debug, PartialEq)]
pub struct GateCapability {
    pub decomposition: CanonicalDecomposition,
    pub canonical: CanonicalAlpha,
    pub symmetries: Vec<Symmetry>,
    /// Best input and output refer to the gate, not to `Ud`.
    pub report: CapabilityReport,
}

pub fn capability_of_gate(g: &ComplexMatrix) -> Result<GateCapability> {
    capability_of_gate_with(g, &Tolerances::default())
}

pub fn capability_of_gate_with(g: &ComplexMatrix, tol: &Tolerances) -> Result<GateCapability> {
    let decomposition = decompose_with(g, tol)?;
    let (canonical, symmetries) = canonicalize_capability(&decomposition.alpha)?;
    let mut report = best_input(&canonical)?;

    // Walk the symmetries backwards to get an input for the raw α.
    let (mut a, mut b) = report.best_input;
    for s in symmetries.iter().rev() {
        match *s {
            Symmetry::Swap { i, j } => {
                let kd = axis_swap_clifford(i, j).adjoint();
                a = to2(&kd.matvec(&a));
                b = to2(&kd.matvec(&b));
            }
            Symmetry::Reflect { axis } => {
                // Ud(α) = −i (1⊗σ) Ud(α′)* (σ⊗1): conjugate the input, then flip A.
                let ca = [a[0].conj(), a[1].conj()];
                a = to2(&pauli(axis).matvec(&ca));
                b = [b[0].conj(), b[1].conj()];
            }
        }
    }
    let a = to2(&decomposition.va.adjoint().matvec(&a));
    let b = to2(&decomposition.vb.adjoint().matvec(&b));
    let out = g.matvec(&kron_vec(&a, &b));
    let reached = concurrence_direct(&out);
    if (reached - report.c_max).abs() > tol.reconstruction {
        return Err(Error::ReconstructionFailure((reached - report.c_max).abs()));
    }
    report.best_input = (a, b);
    report.output_state = PureState::normalized(out, 2, 2)?;
    Ok(GateCapability {
        decomposition,
        canonical,
        symmetries,
        report,
    })
}
