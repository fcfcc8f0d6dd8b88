//! Command implementations behind the `entcap` binary.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | verification failed (residual or suite check) |
//! | 2 | usage error (bad flags, conflicting inputs, unknown measure, budget) |
//! | 3 | gate file could not be parsed |
//! | 4 | gate is not unitary |
//! | 5 | decomposition could not be reconstructed |
//! | 6 | I/O error |
//! | 7 | other numerical error |

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ancilla::{example2_crossover, fig1_scan, optimize_measure_in, SearchSpace, MIN_BUDGET};
use crate::canonical::{build_ud, decompose_with, CanonicalAlpha, InteractionVector, Symmetry};
use crate::capability::{
    brute_force_max_concurrence, capability_of_gate_with, max_concurrence, GateCapability,
};
use crate::numerics::{random_unitary, ComplexMatrix, Tolerances};
use crate::states::MeasureKind;
use crate::Error;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse(String),
    Io(String),
    Verification(String),
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Verification(_) => 1,
            Self::Usage(_) => 2,
            Self::Parse(_) => 3,
            Self::Core(Error::NotUnitary(_)) => 4,
            Self::Core(Error::ReconstructionFailure(_)) => 5,
            Self::Io(_) => 6,
            Self::Core(Error::InvalidArgument(_)) => 2,
            Self::Core(_) => 7,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Usage(m) => write!(f, "usage error: {m}"),
            Self::Parse(m) => write!(f, "parse error: {m}"),
            Self::Io(m) => write!(f, "io error: {m}"),
            Self::Verification(m) => write!(f, "verification failed: {m}"),
            Self::Core(e) => write!(f, "error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self::Core(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(
    name = "entcap",
    version,
    about = "Two-qubit gate decomposition and entangling capability"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Canonical decomposition of a gate file.
    Decompose {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maximal concurrence and a best product input.
    Capability(CapabilityArgs),
    /// Rényi curves for the isotropic gate family, as CSV.
    Fig1 {
        #[arg(long, default_value_t = 101)]
        steps: usize,
        #[arg(long, default_value = "pi/4", value_parser = parse_angle)]
        alpha_max: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ancilla-assisted optimization of an entanglement measure.
    Optimize {
        #[arg(long, num_args = 3, value_parser = parse_angle, allow_hyphen_values = true, required = true)]
        alphas: Vec<f64>,
        #[arg(long, value_parser = parse_measure)]
        measure: MeasureKind,
        #[arg(long, default_value_t = 10)]
        budget: usize,
        #[arg(long, value_enum, default_value_t = Space::Full)]
        space: Space,
    },
    /// Random round-trip and oracle agreement suite.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 10)]
        oracle_trials: usize,
    },
}

#[derive(Args, Debug)]
pub struct CapabilityArgs {
    /// Gate file; conflicts with --alphas.
    pub path: Option<PathBuf>,
    #[arg(long, num_args = 3, value_parser = parse_angle, allow_hyphen_values = true)]
    pub alphas: Option<Vec<f64>>,
    /// Also run the brute-force oracle with this grid size.
    #[arg(long)]
    pub oracle: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Space {
    Full,
    Computational,
    Product,
}

impl From<Space> for SearchSpace {
    fn from(s: Space) -> Self {
        match s {
            Space::Full => SearchSpace::Full,
            Space::Computational => SearchSpace::ComputationalBases,
            Space::Product => SearchSpace::LocalProduct,
        }
    }
}

/// Parses decimal radians or multiples of π such as `pi/4`, `3pi/8`,
/// `-pi/2`, `0.5*pi`.
pub fn parse_angle(s: &str) -> std::result::Result<f64, String> {
    let t: String = s
        .trim()
        .to_ascii_lowercase()
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect();
    if let Ok(v) = t.parse::<f64>() {
        return if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("invalid angle `{s}`"))
        };
    }
    let bad = || format!("invalid angle `{s}`");
    let pos = t.find("pi").ok_or_else(bad)?;
    let (head, tail) = (&t[..pos], &t[pos + 2..]);
    let head = head.strip_suffix('*').unwrap_or(head);
    let coef = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| bad())?,
    };
    let denom = match tail {
        "" => 1.0,
        t => t
            .strip_prefix('/')
            .and_then(|d| d.parse::<f64>().ok())
            .filter(|d| *d != 0.0)
            .ok_or_else(bad)?,
    };
    Ok(coef * PI / denom)
}

fn parse_measure(s: &str) -> std::result::Result<MeasureKind, String> {
    let m: MeasureKind = s.parse().map_err(|e: Error| e.to_string())?;
    if matches!(m, MeasureKind::Concurrence) {
        return Err("concurrence is not defined for the ancilla bipartition".into());
    }
    Ok(m)
}

/// Gate file: `{"name": "...", "matrix": [[[re, im], ...], ...]}` or a bare matrix.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum GateFileRepr {
    Named {
        #[serde(default)]
        name: Option<String>,
        matrix: Vec<Vec<[f64; 2]>>,
    },
    Bare(Vec<Vec<[f64; 2]>>),
}

#[derive(Clone, Debug)]
pub struct GateFile {
    pub name: Option<String>,
    pub matrix: ComplexMatrix,
}

fn matrix_from_pairs(
    rows: &[Vec<[f64; 2]>],
    dim: usize,
) -> std::result::Result<ComplexMatrix, String> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(format!("expected a {dim}x{dim} matrix"));
    }
    let data = rows
        .iter()
        .flatten()
        .map(|[re, im]| C64::new(*re, *im))
        .collect();
    ComplexMatrix::new(dim, dim, data).map_err(|e| e.to_string())
}

fn pairs_from_matrix(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| pair(m[(r, c)])).collect())
        .collect()
}

fn pair(z: C64) -> [f64; 2] {
    [round12(z.re), round12(z.im)]
}

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    let r: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Decimal text with 12 significant digits.
pub fn fmt12(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000000".into();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (11 - mag).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.starts_with("-0") && s.trim_start_matches(['-', '0', '.']).is_empty() {
        s[1..].to_string()
    } else {
        s
    }
}

impl GateFile {
    pub fn parse(text: &str) -> CliResult<Self> {
        let repr: GateFileRepr =
            serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        let (name, rows) = match repr {
            GateFileRepr::Named { name, matrix } => (name, matrix),
            GateFileRepr::Bare(m) => (None, m),
        };
        let matrix = matrix_from_pairs(&rows, 4).map_err(CliError::Parse)?;
        let tol = Tolerances::from_env()?;
        let res = matrix.unitarity_residual();
        if res >= tol.unitarity {
            return Err(CliError::Core(Error::NotUnitary(res)));
        }
        Ok(Self { name, matrix })
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        let repr = GateFileRepr::Named {
            name: self.name.clone(),
            matrix: pairs_from_matrix(&self.matrix),
        };
        serde_json::to_string_pretty(&repr).expect("gate file serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputState {
    pub a: Vec<[f64; 2]>,
    pub b: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub n_grid: usize,
    pub value: f64,
    pub discrepancy: f64,
}

/// Decomposition and capability report; all numbers at 12 significant digits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub name: Option<String>,
    pub alpha_raw: [f64; 3],
    pub alpha_canonical: [f64; 3],
    pub symmetries: Vec<Symmetry>,
    pub ua: Vec<Vec<[f64; 2]>>,
    pub ub: Vec<Vec<[f64; 2]>>,
    pub va: Vec<Vec<[f64; 2]>>,
    pub vb: Vec<Vec<[f64; 2]>>,
    pub global_phase: f64,
    pub residual: f64,
    pub c_max: f64,
    pub perfect_entangler: bool,
    pub best_input: InputState,
    pub output_state: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSummary>,
}

impl Report {
    pub fn from_capability(name: Option<String>, cap: &GateCapability) -> Self {
        let d = &cap.decomposition;
        let r = &cap.report;
        Self {
            name,
            alpha_raw: d.alpha.alpha.map(round12),
            alpha_canonical: cap.canonical.alpha().map(round12),
            symmetries: cap.symmetries.clone(),
            ua: pairs_from_matrix(&d.ua),
            ub: pairs_from_matrix(&d.ub),
            va: pairs_from_matrix(&d.va),
            vb: pairs_from_matrix(&d.vb),
            global_phase: round12(d.phase),
            residual: round12(d.residual),
            c_max: round12(r.c_max),
            perfect_entangler: r.perfect_entangler,
            best_input: InputState {
                a: r.best_input.0.iter().map(|z| pair(*z)).collect(),
                b: r.best_input.1.iter().map(|z| pair(*z)).collect(),
            },
            output_state: r
                .output_state
                .amplitudes()
                .iter()
                .map(|z| pair(*z))
                .collect(),
            oracle: None,
        }
    }

    /// Gate rebuilt from the reported locals, α and phase.
    pub fn reconstruct(&self) -> CliResult<ComplexMatrix> {
        let m = |rows: &[Vec<[f64; 2]>]| matrix_from_pairs(rows, 2).map_err(CliError::Parse);
        let alpha = InteractionVector {
            alpha: self.alpha_raw,
        };
        let r = &(&m(&self.ua)?.kron(&m(&self.ub)?) * &build_ud(&alpha))
            * &m(&self.va)?.kron(&m(&self.vb)?);
        Ok(r.scale(C64::from_polar(1.0, self.global_phase)))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn write_or_return(out: Option<&Path>, text: String) -> CliResult<String> {
    match out {
        Some(p) => {
            fs::write(p, &text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn gate_report(name: Option<String>, g: &ComplexMatrix) -> CliResult<Report> {
    let cap = capability_of_gate_with(g, &Tolerances::from_env()?)?;
    Ok(Report::from_capability(name, &cap))
}

pub fn cmd_decompose(path: &Path, out: Option<&Path>) -> CliResult<String> {
    let gate = GateFile::read(path)?;
    let report = gate_report(gate.name.clone(), &gate.matrix)?;
    let text = report.to_json() + "\n";
    let tol = Tolerances::from_env()?;
    if report.residual >= tol.reconstruction {
        return Err(CliError::Verification(format!(
            "residual {:e}",
            report.residual
        )));
    }
    write_or_return(out, text)
}

pub fn cmd_capability(args: &CapabilityArgs) -> CliResult<String> {
    let (name, gate) = match (&args.path, &args.alphas) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "give either a gate file or --alphas, not both".into(),
            ))
        }
        (None, None) => return Err(CliError::Usage("give a gate file or --alphas".into())),
        (Some(p), None) => {
            let g = GateFile::read(p)?;
            (g.name, g.matrix)
        }
        (None, Some(a)) => (None, build_ud(&InteractionVector::new(a[0], a[1], a[2]))),
    };
    let mut report = gate_report(name, &gate)?;
    if let Some(n) = args.oracle {
        if n < 2 {
            return Err(CliError::Usage(
                "--oracle needs a grid size of at least 2".into(),
            ));
        }
        let a = InteractionVector {
            alpha: report.alpha_canonical,
        };
        let o = brute_force_max_concurrence(&a, n);
        report.oracle = Some(OracleSummary {
            n_grid: n,
            value: round12(o.value),
            discrepancy: round12((o.value - report.c_max).abs()),
        });
    }
    write_or_return(args.out.as_deref(), report.to_json() + "\n")
}

pub fn fig1_csv(steps: usize, alpha_max: f64) -> CliResult<String> {
    let rows = fig1_scan(alpha_max, steps).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut s = String::from("alpha,e_renyi_me,e_renyi_pv\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{}", fmt12(r.alpha), fmt12(r.e_me), fmt12(r.e_pv));
    }
    let _ = writeln!(s, "# crossover_alpha = {}", fmt12(example2_crossover()));
    Ok(s)
}

pub fn cmd_fig1(steps: usize, alpha_max: f64, out: Option<&Path>) -> CliResult<String> {
    write_or_return(out, fig1_csv(steps, alpha_max)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizeReport {
    pub alphas: [f64; 3],
    pub measure: String,
    pub budget: usize,
    pub value: f64,
    pub sa: f64,
    pub sb: f64,
    /// `(θ, φ, χ)` of the Schmidt basis on each side.
    pub basis_a: [f64; 3],
    pub basis_b: [f64; 3],
}

pub fn cmd_optimize(
    alphas: &[f64],
    measure: MeasureKind,
    budget: usize,
    space: Space,
) -> CliResult<String> {
    if budget < MIN_BUDGET {
        return Err(CliError::Usage(format!(
            "budget must be at least {MIN_BUDGET}"
        )));
    }
    measure
        .validate(4)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let a = InteractionVector::new(alphas[0], alphas[1], alphas[2]);
    let r = optimize_measure_in(&a, measure, budget, space.into())?;
    let b = |q: &crate::ancilla::QubitBasis| [q.theta, q.phi, q.chi].map(round12);
    let report = OptimizeReport {
        alphas: a.alpha.map(round12),
        measure: measure.to_string(),
        budget,
        value: round12(r.value),
        sa: round12(r.input.sa),
        sb: round12(r.input.sb),
        basis_a: b(&r.input.basis_a),
        basis_b: b(&r.input.basis_b),
    };
    Ok(serde_json::to_string_pretty(&report).expect("report serializes") + "\n")
}

/// Oracle grid used by `verify`.
pub const VERIFY_ORACLE_GRID: usize = 32;

/// Runs the suite; returns the summary and whether everything passed.
pub fn verify_summary(seed: u64, trials: usize, oracle_trials: usize) -> (String, bool) {
    let mut s = String::new();
    let mut passed = 0;
    let mut worst: f64 = 0.0;
    for i in 0..trials {
        let g = random_unitary(4, seed.wrapping_add(i as u64));
        match decompose_with(&g, &Tolerances::default()) {
            Ok(d) => {
                let a = d.alpha.alpha;
                let ok = d.residual < 1e-8
                    && a.iter().all(|x| (0.0..PI / 2.0).contains(x))
                    && a[0] >= a[1]
                    && a[1] >= a[2];
                worst = worst.max(d.residual);
                if ok {
                    passed += 1;
                }
            }
            Err(_) => worst = f64::INFINITY,
        }
    }
    let _ = writeln!(
        s,
        "roundtrip: {passed}/{trials} passed (max residual {worst:.3e})"
    );
    let all_round = passed == trials;

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0ac1e_u64);
    let mut opassed = 0;
    let mut odelta: f64 = 0.0;
    for _ in 0..oracle_trials {
        let x = rng.random::<f64>() * PI / 4.0;
        let y = rng.random::<f64>() * x;
        let z = rng.random::<f64>() * y;
        let ca = CanonicalAlpha::new(x, y, z).expect("sampled inside the chamber");
        let d = (max_concurrence(&ca)
            - brute_force_max_concurrence(&ca.vector(), VERIFY_ORACLE_GRID).value)
            .abs();
        odelta = odelta.max(d);
        if d < 1e-3 {
            opassed += 1;
        }
    }
    let _ = writeln!(
        s,
        "oracle: {opassed}/{oracle_trials} passed (max |delta| {odelta:.3e})"
    );
    let ok = all_round && opassed == oracle_trials;
    let _ = writeln!(s, "result: {}", if ok { "PASS" } else { "FAIL" });
    (s, ok)
}

pub fn cmd_verify(seed: u64, trials: usize, oracle_trials: usize) -> CliResult<String> {
    if trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let (s, ok) = verify_summary(seed, trials, oracle_trials);
    if ok {
        Ok(s)
    } else {
        print!("{s}");
        Err(CliError::Verification("suite reported failures".into()))
    }
}

pub fn execute(cli: &Cli) -> CliResult<String> {
    match &cli.command {
        Command::Decompose { path, out } => cmd_decompose(path, out.as_deref()),
        Command::Capability(args) => cmd_capability(args),
        Command::Fig1 {
            steps,
            alpha_max,
            out,
        } => cmd_fig1(*steps, *alpha_max, out.as_deref()),
        Command::Optimize {
            alphas,
            measure,
            budget,
            space,
        } => cmd_optimize(alphas, *measure, *budget, *space),
        Command::Verify {
            seed,
            trials,
            oracle_trials,
        } => cmd_verify(*seed, *trials, *oracle_trials),
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
