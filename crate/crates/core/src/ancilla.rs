//! Entanglement creation when each party holds one ancilla qubit.
//!
//! The 16-dimensional state is ordered `A ⊗ A′ ⊗ B ⊗ B′` and measures are
//! evaluated across `AA′ | BB′`. Inputs are written in Schmidt form
//!
//! ```text
//! |φ⟩_{AA′} = ca·φ0⊗|0⟩ + sa·φ0⊥⊗|1⟩
//! |ψ⟩_{BB′} = sb·ψ0⊗|0⟩ + cb·ψ0⊥⊗|1⟩
//! ```
//!
//! so `sa = sb = 0` with computational bases is the product input `|01⟩`
//! on `AB`.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canonical::{build_ud, InteractionVector};
use crate::numerics::{kron_vec, schmidt_coefficients, ComplexMatrix};
use crate::states::{
    apply_on_subsystems, apply_on_subsystems_raw, measure, measure_from_coefficients, MeasureKind,
    PureState,
};
use crate::{Error, Result};

/// Orthonormal qubit pair `(v0, v0⊥)` from Bloch angles and a phase on `v0⊥`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QubitBasis {
    pub theta: f64,
    pub phi: f64,
    pub chi: f64,
}

impl QubitBasis {
    pub const COMPUTATIONAL: Self = Self {
        theta: 0.0,
        phi: 0.0,
        chi: 0.0,
    };

    pub fn new(theta: f64, phi: f64, chi: f64) -> Self {
        Self { theta, phi, chi }
    }

    pub fn vectors(&self) -> ([C64; 2], [C64; 2]) {
        let (s, c) = (self.theta / 2.0).sin_cos();
        let v0 = [C64::new(c, 0.0), C64::from_polar(s, self.phi)];
        let e = C64::from_polar(1.0, self.chi);
        let v1 = [e * C64::from_polar(-s, -self.phi), e * c];
        (v0, v1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AncillaInput {
    pub sa: f64,
    pub sb: f64,
    pub basis_a: QubitBasis,
    pub basis_b: QubitBasis,
}

impl AncillaInput {
    /// `|01⟩` on `AB`, ancillas unentangled.
    pub fn local_product() -> Self {
        Self {
            sa: 0.0,
            sb: 0.0,
            basis_a: QubitBasis::COMPUTATIONAL,
            basis_b: QubitBasis::COMPUTATIONAL,
        }
    }

    /// Each party maximally entangled with its ancilla, computational Schmidt bases.
    pub fn local_maximally_entangled() -> Self {
        Self {
            sa: FRAC_1_SQRT_2,
            sb: FRAC_1_SQRT_2,
            basis_a: QubitBasis::COMPUTATIONAL,
            basis_b: QubitBasis::COMPUTATIONAL,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for s in [self.sa, self.sb] {
            if !(0.0..=1.0).contains(&s) {
                return Err(Error::OutOfRange(s));
            }
        }
        Ok(())
    }

    /// `|φ⟩_{AA′}` as a 4-vector.
    pub fn party_a(&self) -> [C64; 4] {
        let (v0, v1) = self.basis_a.vectors();
        let ca = (1.0 - self.sa * self.sa).max(0.0).sqrt();
        [v0[0] * ca, v1[0] * self.sa, v0[1] * ca, v1[1] * self.sa]
    }

    /// `|ψ⟩_{BB′}` as a 4-vector.
    pub fn party_b(&self) -> [C64; 4] {
        let (v0, v1) = self.basis_b.vectors();
        let cb = (1.0 - self.sb * self.sb).max(0.0).sqrt();
        [v0[0] * self.sb, v1[0] * cb, v0[1] * self.sb, v1[1] * cb]
    }

    fn amplitudes(&self) -> Vec<C64> {
        kron_vec(&self.party_a(), &self.party_b())
    }

    pub fn state(&self) -> Result<PureState> {
        self.validate()?;
        PureState::new(self.amplitudes(), 4, 4)
    }
}

/// Output state `(Ud(α) ⊗ 1_{A′B′})|φ⟩|ψ⟩`.
pub fn output_state(a: &InteractionVector, input: &AncillaInput) -> Result<PureState> {
    apply_on_subsystems(&build_ud(a), &input.state()?)
}

pub fn output_measure(a: &InteractionVector, input: &AncillaInput, m: MeasureKind) -> Result<f64> {
    m.validate(4)?;
    measure(&output_state(a, input)?, m)
}

fn fast_measure(u: &ComplexMatrix, input: &AncillaInput, m: MeasureKind) -> f64 {
    let out = apply_on_subsystems_raw(u, &input.amplitudes());
    measure_from_coefficients(&schmidt_coefficients(&out, 4, 4), m).unwrap_or(f64::NEG_INFINITY)
}

/// Reduced density matrix on `AA′` (row/column index `a·2 + a′`).
pub fn reduced_density_aa(s: &PureState) -> ComplexMatrix {
    let v = s.amplitudes();
    let mut rho = ComplexMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            rho[(i, j)] = (0..4).map(|k| v[i * 4 + k] * v[j * 4 + k].conj()).sum();
        }
    }
    rho
}

/// Largest entropy of entanglement reachable with `α·Sx`, in bits.
pub fn example1_max_entropy(alpha: f64) -> f64 {
    let h = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    let c2 = alpha.cos().powi(2);
    let s2 = alpha.sin().powi(2);
    h(c2) + h(s2)
}

/// Rényi entropy of the output for `α(Sx+Sy+Sz)` with the local maximally
/// entangled input.
pub fn example2_renyi_me(alpha: f64) -> f64 {
    let c = (4.0 * alpha).cos();
    3.0 / 16.0 * (3.0 - 2.0 * c - c * c)
}

/// Same with the local product input `|01⟩`.
pub fn example2_renyi_pv(alpha: f64) -> f64 {
    let c = (4.0 * alpha).cos();
    0.5 * (1.0 - c * c)
}

/// `arccos(1/5)/4`, where the two curves cross.
pub fn example2_crossover() -> f64 {
    (0.2f64).acos() / 4.0
}

/// The crossing located by bisection on `[π/32, π/4]`, to 1e-12.
pub fn example2_crossover_by_bisection() -> f64 {
    let f = |a: f64| example2_renyi_me(a) - example2_renyi_pv(a);
    let (mut lo, mut hi) = (PI / 32.0, PI / 4.0);
    debug_assert!(f(lo) < 0.0 && f(hi) > 0.0);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub alpha: f64,
    pub e_me: f64,
    pub e_pv: f64,
}

pub fn fig1_scan(alpha_max: f64, steps: usize) -> Result<Vec<ScanRow>> {
    if steps < 2 {
        return Err(Error::InvalidArgument("scan needs at least 2 steps".into()));
    }
    if !alpha_max.is_finite() {
        return Err(Error::InvalidArgument("alpha_max must be finite".into()));
    }
    Ok((0..steps)
        .map(|i| {
            let alpha = alpha_max * i as f64 / (steps - 1) as f64;
            ScanRow {
                alpha,
                e_me: example2_renyi_me(alpha),
                e_pv: example2_renyi_pv(alpha),
            }
        })
        .collect())
}

/// Which inputs the optimizer may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchSpace {
    /// Schmidt sines and both Schmidt bases.
    Full,
    /// Schmidt sines only; bases fixed to the computational basis.
    ComputationalBases,
    /// `sa = sb = 0`; only the bases vary, so the ancillas are idle.
    LocalProduct,
}

pub const MIN_BUDGET: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimizeResult {
    pub input: AncillaInput,
    pub value: f64,
    pub evaluations: usize,
}

pub fn optimize_measure(
    a: &InteractionVector,
    m: MeasureKind,
    budget: usize,
) -> Result<OptimizeResult> {
    optimize_measure_in(a, m, budget, SearchSpace::Full)
}

const STRICT: f64 = 1e-13;

/// Coarse grid (`budget` points per free parameter) seeded with the local
/// product and local maximally entangled references, then coordinate
/// descent with step halving. Deterministic.
pub fn optimize_measure_in(
    a: &InteractionVector,
    m: MeasureKind,
    budget: usize,
    space: SearchSpace,
) -> Result<OptimizeResult> {
    if budget < MIN_BUDGET {
        return Err(Error::InvalidArgument(format!(
            "budget {budget} below the minimum of {MIN_BUDGET}"
        )));
    }
    m.validate(4)?;
    let u = build_ud(a);
    let mut evaluations = 0usize;

    let references = match space {
        SearchSpace::LocalProduct => vec![AncillaInput::local_product()],
        _ => vec![
            AncillaInput::local_product(),
            AncillaInput::local_maximally_entangled(),
        ],
    };
    let mut best = references[0];
    let mut best_value = fast_measure(&u, &best, m);
    for r in &references[1..] {
        let v = fast_measure(&u, r, m);
        if v > best_value + STRICT {
            best = *r;
            best_value = v;
        }
    }
    evaluations += references.len();

    let lin = |lo: f64, hi: f64, n: usize| -> Vec<f64> {
        (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect()
    };
    let sines = lin(0.0, 1.0, budget);
    let thetas = lin(0.0, PI, budget);
    let phis: Vec<f64> = (0..budget)
        .map(|i| TAU * i as f64 / budget as f64)
        .collect();
    let zero = vec![0.0];
    let (sa_g, sb_g, th_g, ph_g) = match space {
        SearchSpace::Full => (&sines, &sines, &thetas, &phis),
        SearchSpace::ComputationalBases => (&sines, &sines, &zero, &zero),
        SearchSpace::LocalProduct => (&zero, &zero, &thetas, &phis),
    };
    let dims = [
        sa_g.len(),
        sb_g.len(),
        th_g.len(),
        ph_g.len(),
        th_g.len(),
        ph_g.len(),
    ];
    let total: usize = dims.iter().product();
    let decode = |mut idx: usize| -> AncillaInput {
        let mut k = [0usize; 6];
        for d in (0..6).rev() {
            k[d] = idx % dims[d];
            idx /= dims[d];
        }
        AncillaInput {
            sa: sa_g[k[0]],
            sb: sb_g[k[1]],
            basis_a: QubitBasis::new(th_g[k[2]], ph_g[k[3]], 0.0),
            basis_b: QubitBasis::new(th_g[k[4]], ph_g[k[5]], 0.0),
        }
    };
    let mut scored: Vec<(f64, usize)> = (0..total)
        .into_par_iter()
        .map(|i| (fast_measure(&u, &decode(i), m), i))
        .collect();
    evaluations += total;
    scored.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));

    // Refine the reference winner and the best few grid points.
    let mut seeds = vec![(best, best_value)];
    // Equal values usually mean the same physical input (e.g. φ at θ = 0),
    // so only distinct values are kept.
    for &(v, i) in &scored {
        if seeds.len() > REFINE_SEEDS {
            break;
        }
        if seeds.iter().all(|s| (s.1 - v).abs() > 1e-12) {
            seeds.push((decode(i), v));
        }
    }
    let free: Vec<usize> = match space {
        SearchSpace::Full => (0..8).collect(),
        SearchSpace::ComputationalBases => vec![0, 1],
        SearchSpace::LocalProduct => vec![2, 3, 4, 5, 6, 7],
    };
    let step0 = 0.5 / (budget - 1) as f64 * PI;
    let mut first = true;
    for (seed, value) in seeds {
        let (x, v, n) = refine(&u, m, &free, seed, value, step0);
        evaluations += n;
        if first || v > best_value + STRICT {
            best = x;
            best_value = v;
        }
        first = false;
    }

    Ok(OptimizeResult {
        input: best,
        value: best_value,
        evaluations,
    })
}

const REFINE_SEEDS: usize = 6;

fn param(x: &AncillaInput, k: usize) -> f64 {
    match k {
        0 => x.sa,
        1 => x.sb,
        2 => x.basis_a.theta,
        3 => x.basis_a.phi,
        4 => x.basis_a.chi,
        5 => x.basis_b.theta,
        6 => x.basis_b.phi,
        _ => x.basis_b.chi,
    }
}

fn set_param(x: &mut AncillaInput, k: usize, v: f64) {
    match k {
        0 => x.sa = v.clamp(0.0, 1.0),
        1 => x.sb = v.clamp(0.0, 1.0),
        2 => x.basis_a.theta = v,
        3 => x.basis_a.phi = v,
        4 => x.basis_a.chi = v,
        5 => x.basis_b.theta = v,
        6 => x.basis_b.phi = v,
        _ => x.basis_b.chi = v,
    }
}

/// Coordinate descent over (sa, sb, θa, φa, χa, θb, φb, χb). When no single
/// coordinate improves, moves along pairs of coordinates are tried before
/// the step is halved.
fn refine(
    u: &ComplexMatrix,
    m: MeasureKind,
    free: &[usize],
    mut best: AncillaInput,
    mut best_value: f64,
    mut step: f64,
) -> (AncillaInput, f64, usize) {
    let mut evaluations = 0;
    let scale = |k: usize| if k < 2 { 1.0 / PI } else { 1.0 };
    while step > 1e-6 {
        loop {
            let mut improved = false;
            for &k in free {
                for dir in [1.0, -1.0] {
                    let mut trial = best;
                    set_param(&mut trial, k, param(&best, k) + dir * step * scale(k));
                    let v = fast_measure(u, &trial, m);
                    evaluations += 1;
                    if v > best_value + STRICT {
                        best = trial;
                        best_value = v;
                        improved = true;
                    }
                }
            }
            if !improved {
                'pairs: for (i, &k) in free.iter().enumerate() {
                    for &l in &free[i + 1..] {
                        for (dk, dl) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                            let mut trial = best;
                            set_param(&mut trial, k, param(&best, k) + dk * step * scale(k));
                            set_param(&mut trial, l, param(&best, l) + dl * step * scale(l));
                            let v = fast_measure(u, &trial, m);
                            evaluations += 1;
                            if v > best_value + STRICT {
                                best = trial;
                                best_value = v;
                                improved = true;
                                break 'pairs;
                            }
                        }
                    }
                }
            }
            if !improved {
                break;
            }
        }
        step /= 2.0;
    }
    (best, best_value, evaluations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::CanonicalAlpha;
    use crate::capability::{brute_force_max_concurrence, max_concurrence};
    use crate::numerics::norm;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_4;

    fn iso(a: f64) -> InteractionVector {
        InteractionVector::new(a, a, a)
    }

    fn product_11() -> AncillaInput {
        AncillaInput {
            sa: 0.0,
            sb: 0.0,
            basis_a: QubitBasis::new(PI, 0.0, 0.0),
            basis_b: QubitBasis::COMPUTATIONAL,
        }
    }

    #[test]
    fn bases_are_orthonormal() {
        for (t, p, c) in [(0.3, 1.2, 0.4), (PI, 0.0, 0.0), (2.0, 5.0, -1.0)] {
            let (v0, v1) = QubitBasis::new(t, p, c).vectors();
            assert_abs_diff_eq!(norm(&v0), 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(norm(&v1), 1.0, epsilon = 1e-15);
            assert!(crate::numerics::inner(&v0, &v1).norm() < 1e-15);
        }
    }

    #[test]
    fn reference_inputs() {
        let s = AncillaInput::local_product().state().unwrap();
        // |0⟩_A|0⟩_A′|1⟩_B|1⟩_B′ → index 0·8 + 0·4 + 1·2 + 1 = 3.
        assert_abs_diff_eq!(s.amplitudes()[3].re, 1.0, epsilon = 1e-15);
        let s = product_11().state().unwrap();
        // |1⟩_A|0⟩_A′|1⟩_B|1⟩_B′ → 8 + 2 + 1 = 11.
        assert_abs_diff_eq!(s.amplitudes()[11].norm(), 1.0, epsilon = 1e-15);
        assert!(AncillaInput {
            sa: 1.5,
            ..AncillaInput::local_product()
        }
        .state()
        .is_err());
    }

    #[test]
    fn identity_creates_nothing() {
        let zero = InteractionVector::new(0.0, 0.0, 0.0);
        let input = AncillaInput {
            sa: 0.4,
            sb: 0.9,
            basis_a: QubitBasis::new(0.3, 0.2, 0.1),
            basis_b: QubitBasis::new(1.3, 2.2, 0.7),
        };
        for m in [
            MeasureKind::EntropyOfEntanglement,
            MeasureKind::schmidt_number(),
            MeasureKind::Monotone(1),
            MeasureKind::Monotone(3),
            MeasureKind::Renyi,
        ] {
            assert!(
                output_measure(&zero, &input, m).unwrap().abs() < 1e-12,
                "{m}"
            );
        }
    }

    #[test]
    fn output_measure_examples() {
        let q = FRAC_PI_4;
        let v = output_measure(
            &iso(q),
            &AncillaInput::local_maximally_entangled(),
            MeasureKind::Renyi,
        )
        .unwrap();
        assert_abs_diff_eq!(v, 0.75, epsilon = 1e-12);
        let v = output_measure(
            &iso(PI / 8.0),
            &AncillaInput::local_product(),
            MeasureKind::Renyi,
        )
        .unwrap();
        assert_abs_diff_eq!(v, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn example1_closed_form() {
        assert_eq!(example1_max_entropy(0.0), 0.0);
        assert_abs_diff_eq!(example1_max_entropy(FRAC_PI_4), 1.0, epsilon = 1e-15);
        let a = PI / 8.0;
        let v = InteractionVector::new(a, 0.0, 0.0);
        let e = example1_max_entropy(a);
        for input in [product_11(), AncillaInput::local_maximally_entangled()] {
            let got = output_measure(&v, &input, MeasureKind::EntropyOfEntanglement).unwrap();
            assert_abs_diff_eq!(got, e, epsilon = 1e-10);
        }
    }

    #[test]
    fn example2_closed_forms() {
        assert_eq!(example2_renyi_me(0.0), 0.0);
        assert_eq!(example2_renyi_pv(0.0), 0.0);
        let a0 = example2_crossover();
        assert_abs_diff_eq!(example2_renyi_me(a0), 0.48, epsilon = 1e-12);
        assert_abs_diff_eq!(example2_renyi_pv(a0), 0.48, epsilon = 1e-12);
        assert_abs_diff_eq!(example2_renyi_me(FRAC_PI_4), 0.75, epsilon = 1e-15);
        // cos(π)² = 1, so the product input yields nothing at π/4 (SWAP).
        assert_abs_diff_eq!(example2_renyi_pv(FRAC_PI_4), 0.0, epsilon = 1e-15);
        assert!(example2_renyi_pv(a0 / 2.0) > example2_renyi_me(a0 / 2.0));
        assert!(example2_renyi_me(2.0 * a0) > example2_renyi_pv(2.0 * a0));
    }

    #[test]
    fn example2_matches_simulation() {
        for i in 0..=50 {
            let a = FRAC_PI_4 * i as f64 / 50.0;
            let me = output_measure(
                &iso(a),
                &AncillaInput::local_maximally_entangled(),
                MeasureKind::Renyi,
            )
            .unwrap();
            let pv = output_measure(&iso(a), &AncillaInput::local_product(), MeasureKind::Renyi)
                .unwrap();
            assert_abs_diff_eq!(me, example2_renyi_me(a), epsilon = 1e-10);
            assert_abs_diff_eq!(pv, example2_renyi_pv(a), epsilon = 1e-10);
        }
    }

    #[test]
    fn crossover_value() {
        let a0 = example2_crossover();
        assert_abs_diff_eq!(a0 / PI, 0.109, epsilon = 5e-4);
        assert_abs_diff_eq!(a0, example2_crossover_by_bisection(), epsilon = 1e-12);
    }

    #[test]
    fn scan_contract() {
        let rows = fig1_scan(FRAC_PI_4, 2).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!((rows[0].e_me, rows[0].e_pv), (0.0, 0.0));
        assert_abs_diff_eq!(rows[1].e_me, 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(rows[1].e_pv, 0.0, epsilon = 1e-15);
        assert!(fig1_scan(1.0, 1).is_err());

        let rows = fig1_scan(FRAC_PI_4, 101).unwrap();
        assert_eq!(rows.len(), 101);
        assert!(rows.windows(2).all(|w| w[1].e_me > w[0].e_me));
        let changes = rows
            .windows(2)
            .filter(|w| {
                (w[0].e_me - w[0].e_pv).signum() != (w[1].e_me - w[1].e_pv).signum()
                    && w[0].alpha > 0.0
            })
            .count();
        assert_eq!(changes, 1);
        assert!(rows
            .iter()
            .all(|r| (0.0..=0.75).contains(&r.e_me) && (0.0..=0.75).contains(&r.e_pv)));
    }

    #[test]
    fn block_structure_for_isotropic_gates() {
        for a in [0.1, 0.3, 0.6] {
            for input in [
                AncillaInput::local_maximally_entangled(),
                AncillaInput::local_product(),
            ] {
                let rho = reduced_density_aa(&output_state(&iso(a), &input).unwrap());
                // Blocks {00, 11} and {01, 10} of AA′.
                for i in [0usize, 3] {
                    for j in [1usize, 2] {
                        assert!(rho[(i, j)].norm() < 1e-12);
                        assert!(rho[(j, i)].norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn budget_guard() {
        let r = optimize_measure(&iso(0.1), MeasureKind::Renyi, 4);
        assert!(matches!(r, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn optimizer_bounds_and_references() {
        let v = InteractionVector::new(0.5, 0.3, 0.1);
        for m in [
            MeasureKind::Renyi,
            MeasureKind::EntropyOfEntanglement,
            MeasureKind::Monotone(2),
        ] {
            let r = optimize_measure(&v, m, 8).unwrap();
            assert!(r.value <= m.maximum(4) + 1e-12);
            for input in [
                AncillaInput::local_product(),
                AncillaInput::local_maximally_entangled(),
            ] {
                assert!(r.value >= output_measure(&v, &input, m).unwrap() - 1e-12);
            }
            assert_abs_diff_eq!(
                output_measure(&v, &r.input, m).unwrap(),
                r.value,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn optimizer_is_deterministic() {
        let v = InteractionVector::new(0.4, 0.2, 0.1);
        let a = optimize_measure(&v, MeasureKind::Renyi, 8).unwrap();
        let b = optimize_measure(&v, MeasureKind::Renyi, 8).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn local_product_search_matches_capability() {
        // Without ancilla entanglement the output is a two-qubit state, so the
        // Rényi value is C²/2 for the maximal concurrence C.
        for (x, y, z) in [(0.2, 0.1, 0.0), (0.5, 0.3, 0.1), (0.7, 0.2, 0.15)] {
            let ca = CanonicalAlpha::new(x, y, z).unwrap();
            let c = max_concurrence(&ca);
            let r = optimize_measure_in(
                &ca.vector(),
                MeasureKind::Renyi,
                8,
                SearchSpace::LocalProduct,
            )
            .unwrap();
            assert_abs_diff_eq!(r.value, c * c / 2.0, epsilon = 1e-6);
            let o = brute_force_max_concurrence(&ca.vector(), 24);
            assert!((o.value - c).abs() < 1e-3);
        }
    }

    #[test]
    fn measure_dependence_witness() {
        let a0 = example2_crossover();
        let v = iso(a0 / 2.0);
        let r = optimize_measure(&v, MeasureKind::Renyi, 8).unwrap();
        assert!(r.input.sa * r.input.sb < 1e-6);
        let es_best = output_measure(&v, &r.input, MeasureKind::schmidt_number()).unwrap();
        assert!(es_best <= 1.0);
        let es_me = output_measure(
            &v,
            &AncillaInput::local_maximally_entangled(),
            MeasureKind::schmidt_number(),
        )
        .unwrap();
        assert!(es_me > es_best);
    }

    #[test]
    fn computational_bases_suffice_for_isotropic_gates() {
        let a0 = example2_crossover();
        for alpha in [a0 / 2.0, 2.0 * a0] {
            let v = iso(alpha);
            for m in [
                MeasureKind::EntropyOfEntanglement,
                MeasureKind::schmidt_number(),
                MeasureKind::Monotone(1),
                MeasureKind::Monotone(2),
                MeasureKind::Monotone(3),
                MeasureKind::Renyi,
            ] {
                let full = optimize_measure_in(&v, m, 8, SearchSpace::Full).unwrap();
                let comp = optimize_measure_in(&v, m, 8, SearchSpace::ComputationalBases).unwrap();
                assert!(comp.value >= full.value - 1e-4, "{m} at {alpha}: {} < {}", comp.value, full.value);
            }
        }
    }
}
