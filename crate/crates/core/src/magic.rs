//! The magic basis and two-qubit concurrence.
//!
//! Computational ordering is `|00⟩, |01⟩, |10⟩, |11⟩`. The columns of
//! [`magic_basis`] are
//!
//! ```text
//! Φ1 = ( 1, 0, 0, 1)/√2      Φ2 = (-i, 0, 0, i)/√2
//! Φ3 = ( 0, 1,-1, 0)/√2      Φ4 = ( 0,-i,-i, 0)/√2
//! ```
//!
//! Complex conjugation always means entrywise conjugation of
//! computational-basis amplitudes.

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::OnceLock;

use num_complex::Complex64 as C64;

use crate::numerics::{norm, ComplexMatrix};
use crate::states::PureState;
use crate::{Error, Result};

/// A state is a product state below this concurrence.
pub const PRODUCT_TOL: f64 = 1e-8;

/// Coefficients `μ_1..μ_4` of a two-qubit state in the magic basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MagicVector {
    pub mu: [C64; 4],
}

impl MagicVector {
    pub fn new(mu: [C64; 4]) -> Self {
        Self { mu }
    }

    pub fn norm(&self) -> f64 {
        norm(&self.mu)
    }

    /// `Σ μ_k²`.
    pub fn square_sum(&self) -> C64 {
        self.mu.iter().map(|m| m * m).sum()
    }
}

/// `Q`, whose columns are `Φ1..Φ4`.
pub fn magic_basis() -> &'static ComplexMatrix {
    static Q: OnceLock<ComplexMatrix> = OnceLock::new();
    Q.get_or_init(|| {
        let s = FRAC_1_SQRT_2;
        let o = C64::new(0.0, 0.0);
        let r = C64::new(s, 0.0);
        let i = C64::new(0.0, s);
        ComplexMatrix::from_rows([[r, -i, o, o], [o, o, r, -i], [o, o, -r, -i], [r, i, o, o]])
    })
}

/// `Φ_k` for `k ∈ 0..4` (zero-based).
pub fn phi(k: usize) -> [C64; 4] {
    let col = magic_basis().column(k);
    [col[0], col[1], col[2], col[3]]
}

fn check_qubits(s: &PureState) -> Result<()> {
    if s.dim_a() != 2 || s.dim_b() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: s.amplitudes().len(),
        });
    }
    Ok(())
}

pub fn to_magic(s: &PureState) -> Result<MagicVector> {
    check_qubits(s)?;
    Ok(MagicVector::new(to_magic_amps(s.amplitudes())))
}

pub(crate) fn to_magic_amps(v: &[C64]) -> [C64; 4] {
    let mu = magic_basis().adjoint().matvec(v);
    [mu[0], mu[1], mu[2], mu[3]]
}

pub fn from_magic(m: &MagicVector) -> Result<PureState> {
    PureState::new(from_magic_amps(&m.mu).to_vec(), 2, 2)
}

pub(crate) fn from_magic_amps(mu: &[C64; 4]) -> [C64; 4] {
    let v = magic_basis().matvec(mu);
    [v[0], v[1], v[2], v[3]]
}

/// `|⟨Ψ|σy⊗σy|Ψ*⟩| = 2|ψ00ψ11 − ψ01ψ10|` on unnormalized amplitudes.
pub fn concurrence_direct(v: &[C64]) -> f64 {
    2.0 * (v[0] * v[3] - v[1] * v[2]).norm()
}

/// `|Σ μ_k²|`.
pub fn concurrence_via_magic(v: &[C64]) -> f64 {
    MagicVector::new(to_magic_amps(v)).square_sum().norm()
}

/// Concurrence of a two-qubit state. Both the direct and the magic-basis
/// formula are evaluated and must agree.
pub fn concurrence(s: &PureState) -> Result<f64> {
    check_qubits(s)?;
    let direct = concurrence_direct(s.amplitudes());
    let magic = concurrence_via_magic(s.amplitudes());
    debug_assert!(
        (direct - magic).abs() < 1e-12,
        "concurrence formulas disagree: {direct} vs {magic}"
    );
    Ok(direct.min(1.0))
}

pub fn is_product(s: &PureState) -> Result<bool> {
    Ok(concurrence(s)? < PRODUCT_TOL)
}

pub fn is_maximally_entangled(s: &PureState) -> Result<bool> {
    Ok(concurrence(s)? > 1.0 - PRODUCT_TOL)
}
