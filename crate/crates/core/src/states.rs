//! Bipartite pure states and entanglement measures.
//!
//! Schmidt coefficients are kept in INCREASING order throughout
//! (`c_1 ≤ c_2 ≤ … ≤ c_m`), so [`monotone`] sums the `n` smallest squared
//! coefficients. Entropies are in bits.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use crate::numerics::{kron_vec, norm, schmidt_coefficients, schmidt_svd, ComplexMatrix, Schmidt};
use crate::{Error, Result};

/// Default threshold below which a Schmidt coefficient counts as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-7;

/// Normalized pure state on `C^dim_a ⊗ C^dim_b`, amplitudes in row-major
/// (A-major) order.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
    dim_a: usize,
    dim_b: usize,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>, dim_a: usize, dim_b: usize) -> Result<Self> {
        if amplitudes.len() != dim_a * dim_b {
            return Err(Error::DimensionMismatch {
                expected: dim_a * dim_b,
                found: amplitudes.len(),
            });
        }
        let n = norm(&amplitudes);
        if !n.is_finite() || (n - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized(n));
        }
        Ok(Self {
            amplitudes,
            dim_a,
            dim_b,
        })
    }

    /// Two-qubit state.
    pub fn qubits(amplitudes: [C64; 4]) -> Result<Self> {
        Self::new(amplitudes.to_vec(), 2, 2)
    }

    /// Rescales to unit norm before validating.
    pub fn normalized(amplitudes: Vec<C64>, dim_a: usize, dim_b: usize) -> Result<Self> {
        let n = norm(&amplitudes);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized(n));
        }
        Self::new(amplitudes.iter().map(|z| z / n).collect(), dim_a, dim_b)
    }

    pub fn product(a: &[C64], b: &[C64]) -> Result<Self> {
        Self::new(kron_vec(a, b), a.len(), b.len())
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    /// Entrywise complex conjugate in the computational basis.
    pub fn conj(&self) -> Self {
        Self {
            amplitudes: self.amplitudes.iter().map(|z| z.conj()).collect(),
            ..self.clone()
        }
    }

    /// `(UA ⊗ UB)|ψ⟩`.
    pub fn apply_local(&self, ua: &ComplexMatrix, ub: &ComplexMatrix) -> Result<Self> {
        if ua.rows() != self.dim_a || ub.rows() != self.dim_b {
            return Err(Error::DimensionMismatch {
                expected: self.dim_a * self.dim_b,
                found: ua.rows() * ub.rows(),
            });
        }
        Ok(Self {
            amplitudes: ua.kron(ub).matvec(&self.amplitudes),
            ..self.clone()
        })
    }

    /// Schmidt coefficients, increasing.
    pub fn schmidt_coefficients(&self) -> Vec<f64> {
        schmidt_coefficients(&self.amplitudes, self.dim_a, self.dim_b)
    }

    pub fn schmidt(&self) -> Result<Schmidt> {
        schmidt_svd(&self.amplitudes, self.dim_a, self.dim_b)
    }
}

/// Entanglement measures for bipartite pure states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MeasureKind {
    EntropyOfEntanglement,
    /// Number of nonzero Schmidt coefficients minus one, with the given rank tolerance.
    SchmidtNumber {
        rank_tol: f64,
    },
    /// Sum of the `n` smallest squared Schmidt coefficients.
    Monotone(usize),
    /// 2-Rényi entropy `1 − Σ c_k⁴`.
    Renyi,
    /// Two qubits only.
    Concurrence,
}

impl MeasureKind {
    pub fn schmidt_number() -> Self {
        Self::SchmidtNumber {
            rank_tol: DEFAULT_RANK_TOL,
        }
    }

    /// Checks the measure is defined for a bipartition with Schmidt rank `m`.
    pub fn validate(&self, m: usize) -> Result<()> {
        match *self {
            Self::Monotone(n) if n == 0 || n >= m => Err(Error::IndexOutOfRange {
                index: n,
                max: m.saturating_sub(1),
            }),
            Self::Concurrence if m != 2 => Err(Error::InvalidArgument(
                "concurrence is only defined for two qubits".into(),
            )),
            Self::SchmidtNumber { rank_tol } if rank_tol.is_nan() || rank_tol <= 0.0 => Err(
                Error::InvalidArgument("schmidt-number rank tolerance must be positive".into()),
            ),
            _ => Ok(()),
        }
    }

    /// Largest value the measure can take for Schmidt rank `m`.
    pub fn maximum(&self, m: usize) -> f64 {
        let m_f = m as f64;
        match *self {
            Self::EntropyOfEntanglement => m_f.log2(),
            Self::SchmidtNumber { .. } => m_f - 1.0,
            Self::Monotone(n) => n as f64 / m_f,
            Self::Renyi => 1.0 - 1.0 / m_f,
            Self::Concurrence => 1.0,
        }
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EntropyOfEntanglement => write!(f, "entropy"),
            Self::SchmidtNumber { .. } => write!(f, "schmidt"),
            Self::Monotone(n) => write!(f, "monotone:{n}"),
            Self::Renyi => write!(f, "renyi"),
            Self::Concurrence => write!(f, "concurrence"),
        }
    }
}

impl FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "entropy" => Ok(Self::EntropyOfEntanglement),
            "schmidt" => Ok(Self::schmidt_number()),
            "renyi" => Ok(Self::Renyi),
            "concurrence" => Ok(Self::Concurrence),
            _ => {
                let n = s
                    .strip_prefix("monotone:")
                    .and_then(|n| n.parse::<usize>().ok())
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown measure `{s}`")))?;
                Ok(Self::Monotone(n))
            }
        }
    }
}

/// Evaluates a measure from increasing Schmidt coefficients.
pub fn measure_from_coefficients(c: &[f64], kind: MeasureKind) -> Result<f64> {
    kind.validate(c.len())?;
    Ok(match kind {
        MeasureKind::EntropyOfEntanglement => c
            .iter()
            .map(|x| x * x)
            .filter(|&p| p > 0.0)
            .map(|p| -p * p.log2())
            .sum::<f64>()
            .max(0.0),
        MeasureKind::SchmidtNumber { rank_tol } => c
            .iter()
            .filter(|&&x| x > rank_tol)
            .count()
            .saturating_sub(1) as f64,
        MeasureKind::Monotone(n) => c[..n].iter().map(|x| x * x).sum(),
        MeasureKind::Renyi => 1.0 - c.iter().map(|x| x.powi(4)).sum::<f64>(),
        MeasureKind::Concurrence => 2.0 * c[0] * c[1],
    })
}

pub fn measure(s: &PureState, kind: MeasureKind) -> Result<f64> {
    measure_from_coefficients(&s.schmidt_coefficients(), kind)
}

pub fn entropy_of_entanglement(s: &PureState) -> f64 {
    measure(s, MeasureKind::EntropyOfEntanglement).expect("entropy is always defined")
}

pub fn schmidt_number(s: &PureState, rank_tol: f64) -> Result<usize> {
    measure(s, MeasureKind::SchmidtNumber { rank_tol }).map(|v| v as usize)
}

pub fn monotone(s: &PureState, n: usize) -> Result<f64> {
    measure(s, MeasureKind::Monotone(n))
}

pub fn renyi(s: &PureState) -> f64 {
    measure(s, MeasureKind::Renyi).expect("renyi is always defined")
}

/// `(g ⊗ 1_{A′B′})|s⟩` for a 16-dim state ordered `A ⊗ A′ ⊗ B ⊗ B′`
/// (index `a·8 + a′·4 + b·2 + b′`), with `g` acting on legs `A` and `B`.
/// The returned state is over the bipartition `AA′ | BB′`.
pub fn apply_on_subsystems(g: &ComplexMatrix, s: &PureState) -> Result<PureState> {
    if g.rows() != 4 || g.cols() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: g.rows().max(g.cols()),
        });
    }
    if s.dim_a != 4 || s.dim_b != 4 {
        return Err(Error::DimensionMismatch {
            expected: 16,
            found: s.amplitudes.len(),
        });
    }
    let amps = apply_on_subsystems_raw(g, &s.amplitudes);
    Ok(PureState {
        amplitudes: amps,
        dim_a: 4,
        dim_b: 4,
    })
}

pub(crate) fn apply_on_subsystems_raw(g: &ComplexMatrix, s: &[C64]) -> Vec<C64> {
    let idx = |a: usize, ap: usize, b: usize, bp: usize| a * 8 + ap * 4 + b * 2 + bp;
    let mut out = vec![C64::new(0.0, 0.0); 16];
    for ap in 0..2 {
        for bp in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    let mut acc = C64::new(0.0, 0.0);
                    for x in 0..2 {
                        for y in 0..2 {
                            acc += g[(a * 2 + b, x * 2 + y)] * s[idx(x, ap, y, bp)];
                        }
                    }
                    out[idx(a, ap, b, bp)] = acc;
                }
            }
        }
    }
    out
}
