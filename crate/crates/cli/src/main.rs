use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;
use serde_json::{json, Value};

use mbl_core::circuit::QuantumCircuit;
use mbl_core::corpus;
use mbl_core::fixtures;
use mbl_core::monotone::{compile_contraction, rational_to_f64};
use mbl_core::network::{
    circuit_to_network, find_plan, multiplication_count, preprocess_diagonal, structural_multiplication_count,
    PlanMode, TensorNetwork,
};
use mbl_core::permanent::{
    compile_perm_monotone, fit_constant, jerrum_snir_bound, parse_matrix_csv, perm_bound_report, permanent_bruteforce,
    BRUTEFORCE_CAP, EMIT_CAP,
};
use mbl_core::poly::perm_var;
use mbl_core::sat::{build_cphi_with, compile_tidy_with, parse_dimacs, CompileOptions, CountingCircuit, LeafMode};
use mbl_core::sim::{crosscheck_amplitude, statevector_amplitude_capped, statevector_amplitude_exact, RunConfig};
use mbl_core::skeleton::{associated_polynomial_with, extract_skeleton, SymbolicCaps};
use mbl_core::Error;

#[derive(Parser)]
#[command(
    name = "mbl",
    version,
    about = "Skeletons, monotone circuits, permanent and SAT counting circuits"
)]
struct Cli {
    /// Contraction plan: exhaustive, greedy or left-to-right.
    #[arg(long, global = true, default_value = "greedy")]
    plan: PlanMode,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Exact arithmetic where supported.
    #[arg(long, global = true)]
    exact: bool,
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    /// Also write the JSON result to this file.
    #[arg(long, global = true, value_name = "FILE")]
    json_out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Example {
    /// `<00| H0 H1 CNOT(0,1) H0 |00>`.
    TwoQubit,
    /// Open network of `H0, T0, CZ(0,1)`.
    #[value(name = "h-t-cz")]
    HTCz,
}

#[derive(clap::Args)]
struct NetworkInput {
    /// Network JSON or quantum-circuit JSON.
    file: Option<PathBuf>,
    #[arg(long, conflicts_with = "file")]
    example: Option<Example>,
    /// Input basis state for a circuit, qubit 0 first (default all zeros).
    #[arg(long = "in", value_name = "BITS")]
    in_bits: Option<String>,
    /// Output basis state for a circuit, qubit 0 first (default all zeros).
    #[arg(long = "out", value_name = "BITS")]
    out_bits: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmitKind {
    Tidy,
    Cphi,
}

#[derive(Subcommand)]
enum Command {
    /// Contract a network and count multiplications.
    Contract {
        #[command(flatten)]
        input: NetworkInput,
        /// Absorb diagonal gate tensors first.
        #[arg(long)]
        preprocess: bool,
    },
    /// Extract the skeleton and its variable table.
    Skeleton {
        #[command(flatten)]
        input: NetworkInput,
        /// Also expand the associated polynomial.
        #[arg(long)]
        polynomial: bool,
    },
    /// Compile a skeleton into a monotone circuit.
    EmitMonotone {
        #[command(flatten)]
        input: NetworkInput,
    },
    /// Permanent circuit, its evaluation and the lower bound.
    Permanent {
        #[arg(long)]
        n: usize,
        /// Matrix as rows of numbers (default: random 0..=3 entries from --seed).
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        emit_circuit: Option<PathBuf>,
    },
    /// Compile a DIMACS CNF into a tidy circuit and print its certificate.
    CompileSat {
        file: PathBuf,
        #[arg(long, value_name = "FILE")]
        emit: Option<PathBuf>,
        /// What --emit writes; by default `cphi` if the file name starts with "cphi".
        #[arg(long)]
        kind: Option<EmitKind>,
        /// Exit 1 unless every bound holds and the tidy circuit checks out.
        #[arg(long)]
        cert: bool,
        /// Literal leaves on a dedicated output wire.
        #[arg(long)]
        dedicated_leaves: bool,
        /// Wrap with a separate copy-out wire instead of reusing the root's.
        #[arg(long)]
        no_fuse: bool,
    },
    /// All-zeros amplitude of a counting circuit and the inferred model count.
    Amplitude {
        file: PathBuf,
        /// Number of formula variables, if the file does not record it.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 20)]
        qubit_cap: u32,
    },
    /// Compare statevector, contraction and monotone evaluation.
    Crosscheck {
        /// Quantum-circuit JSON.
        file: PathBuf,
        #[arg(long = "in", value_name = "BITS")]
        in_bits: Option<String>,
        #[arg(long = "out", value_name = "BITS")]
        out_bits: Option<String>,
        #[arg(long, default_value_t = 20)]
        qubit_cap: u32,
    },
    /// Permanent circuit sizes against the lower bound.
    BoundTable {
        #[arg(long, default_value_t = 10)]
        n_max: usize,
    },
}

/// Failure classes mapped to exit codes.
enum Failure {
    Verification(anyhow::Error),
    Usage(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<Error>() {
            Some(Error::Integrity(_)) => Failure::Verification(e),
            _ => Failure::Usage(e),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

type Outcome = Result<Value, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    let cfg = RunConfig {
        tolerance: cli.tolerance,
        plan: cli.plan,
        seed: cli.seed,
        exact: cli.exact,
        ..RunConfig::default()
    };
    let (result, verified) = match run(&cli.command, &cfg) {
        Ok(v) => (v, true),
        Err(Failure::Verification(e)) => {
            eprintln!("verification failed: {e:#}");
            return ExitCode::from(1);
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let text = serde_json::to_string_pretty(&result).expect("serializable");
    println!("{text}");
    if let Some(path) = &cli.json_out {
        if let Err(e) = std::fs::write(path, format!("{text}\n")) {
            eprintln!("error: writing {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    let pass = result.get("pass").and_then(Value::as_bool).unwrap_or(true);
    if verified && pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("MBL_THREADS") {
        let n: usize = v.parse().with_context(|| format!("MBL_THREADS={v:?}"))?;
        if n == 0 {
            bail!("MBL_THREADS must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cmd: &Command, cfg: &RunConfig) -> Outcome {
    match cmd {
        Command::Contract { input, preprocess } => contract(input, *preprocess, cfg),
        Command::Skeleton { input, polynomial } => skeleton(input, *polynomial, cfg),
        Command::EmitMonotone { input } => emit_monotone(input, cfg),
        Command::Permanent {
            n,
            matrix,
            emit_circuit,
        } => permanent(*n, matrix.as_deref(), emit_circuit.as_deref(), cfg),
        Command::CompileSat {
            file,
            emit,
            kind,
            cert,
            dedicated_leaves,
            no_fuse,
        } => {
            let opts = CompileOptions {
                leaves: if *dedicated_leaves {
                    LeafMode::Dedicated
                } else {
                    LeafMode::InPlace
                },
                fused_wrap: !no_fuse,
            };
            compile_sat(file, emit.as_deref(), *kind, *cert, opts)
        }
        Command::Amplitude { file, n, qubit_cap } => amplitude(file, *n, *qubit_cap, cfg),
        Command::Crosscheck {
            file,
            in_bits,
            out_bits,
            qubit_cap,
        } => crosscheck(file, in_bits.as_deref(), out_bits.as_deref(), *qubit_cap, cfg),
        Command::BoundTable { n_max } => bound_table(*n_max),
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn parse_bits(s: Option<&str>, q: usize) -> anyhow::Result<Vec<bool>> {
    let Some(s) = s else {
        return Ok(vec![false; q]);
    };
    let bits: Vec<bool> = s
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(anyhow!("bad basis state {s:?}")),
        })
        .collect::<anyhow::Result<_>>()?;
    if bits.len() != q {
        bail!("basis state {s:?} has {} bits, circuit has {q} qubits", bits.len());
    }
    Ok(bits)
}

fn load_circuit(path: &Path) -> anyhow::Result<QuantumCircuit> {
    let (c, _) = CountingCircuit::read_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    Ok(c)
}

fn load_network(input: &NetworkInput) -> anyhow::Result<TensorNetwork> {
    match (input.example, &input.file) {
        (Some(Example::TwoQubit), _) => Ok(fixtures::two_qubit_network()),
        (Some(Example::HTCz), _) => Ok(fixtures::h_t_cz_network()),
        (None, None) => bail!("give a FILE or --example"),
        (None, Some(path)) => {
            let text = read(path)?;
            let v: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
            if v.get("hyperedges").is_some() {
                return Ok(TensorNetwork::from_json(&text)?);
            }
            let c = load_circuit(path)?;
            let q = c.num_qubits();
            let i = parse_bits(input.in_bits.as_deref(), q)?;
            let o = parse_bits(input.out_bits.as_deref(), q)?;
            Ok(circuit_to_network(&c, &i, &o)?)
        }
    }
}

fn complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn contract(input: &NetworkInput, preprocess: bool, cfg: &RunConfig) -> Outcome {
    let mut net = load_network(input)?;
    if preprocess {
        net = preprocess_diagonal(&net);
    }
    let plan = find_plan(&net, cfg.plan)?;
    let dense = multiplication_count(&net, &plan)?;
    let structural = structural_multiplication_count(&net.masks(cfg.tolerance), &plan)?;
    let value = if net.is_closed() {
        complex(net.contract_all(&plan)?)
    } else {
        Value::Null
    };
    Ok(json!({
        "tensors": net.num_live(),
        "open": net.num_open(),
        "plan": plan,
        "multiplications": dense.to_string(),
        "structural_multiplications": structural.to_string(),
        "value": value,
    }))
}

fn skeleton(input: &NetworkInput, polynomial: bool, cfg: &RunConfig) -> Outcome {
    let net = load_network(input)?;
    let (s, table) = extract_skeleton(&net, 1e-12);
    let skel: Value = serde_json::from_str(&s.to_json()).map_err(anyhow::Error::from)?;
    let mut out = json!({
        "id": s.id(),
        "skeleton": skel,
        "variables": table.len(),
        "table": table,
    });
    if polynomial {
        let plan = find_plan(s.masks(), cfg.plan)?;
        let p = associated_polynomial_with(&s, &plan, SymbolicCaps::default())?;
        out["polynomial"] = json!({
            "terms": p.num_terms(),
            "degree": p.degree(),
            "dump": p.dump(),
        });
    }
    Ok(out)
}

fn emit_monotone(input: &NetworkInput, cfg: &RunConfig) -> Outcome {
    let net = load_network(input)?;
    let (s, _) = extract_skeleton(&net, 1e-12);
    let plan = find_plan(s.masks(), cfg.plan)?;
    let (mc, report) = compile_contraction(&s, &plan)?;
    let circuit: Value = serde_json::from_str(&mc.to_json()).map_err(anyhow::Error::from)?;
    Ok(json!({ "circuit": circuit, "report": report }))
}

fn permanent(n: usize, matrix: Option<&Path>, emit: Option<&Path>, cfg: &RunConfig) -> Outcome {
    if n == 0 || n > EMIT_CAP {
        return Err(anyhow!("--n must be in 1..={EMIT_CAP}").into());
    }
    let m: Vec<Vec<i64>> = match matrix {
        Some(p) => parse_matrix_csv(&read(p)?)?,
        None => {
            let mut rng = corpus::rng(cfg.seed);
            (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..=3)).collect()).collect()
        }
    };
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(anyhow!("matrix must be {n} x {n}").into());
    }
    let (mc, report) = compile_perm_monotone(n)?;
    let value = mc.eval_exact(|v| {
        let (row, col) = (0..n * n)
            .map(|k| (k / n, k % n))
            .find(|&(r, c)| perm_var(n, r, c) == v)?;
        Some(BigRational::from_integer(m[row][col].into()))
    })?;
    let mut out = json!({
        "n": n,
        "value": value.to_string(),
        "size": report.size.to_string(),
        "additions": report.additions.to_string(),
        "multiplications": report.multiplications.to_string(),
        "bound": report.lower_bound.to_string(),
        "ratio": report.ratio,
        "c": report.c,
    });
    if n <= BRUTEFORCE_CAP {
        let big: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect();
        let oracle = permanent_bruteforce(&big)?;
        let agrees = value.is_integer() && *value.numer() == oracle;
        out["bruteforce"] = json!(oracle.to_string());
        if !agrees {
            return Err(Error::Integrity(format!("circuit gives {value}, brute force {oracle}")).into());
        }
    }
    if let Some(p) = emit {
        write(p, &mc.to_json())?;
    }
    Ok(out)
}

fn compile_sat(
    file: &Path,
    emit: Option<&Path>,
    kind: Option<EmitKind>,
    cert_mode: bool,
    opts: CompileOptions,
) -> Outcome {
    let phi = parse_dimacs(&read(file)?)?;
    let (tidy, cert) = compile_tidy_with(&phi, opts)?;
    let tidy_ok = if phi.num_vars() <= 16 {
        Some(tidy.check_tidy(|x| phi.eval(x))?)
    } else {
        None
    };
    let mut out = serde_json::to_value(&cert).map_err(anyhow::Error::from)?;
    out["tidy_verified"] = json!(tidy_ok);
    if let Some(path) = emit {
        let kind = kind.unwrap_or_else(|| {
            let stem = path.file_name().and_then(|s| s.to_str()).unwrap_or("");
            if stem.starts_with("cphi") {
                EmitKind::Cphi
            } else {
                EmitKind::Tidy
            }
        });
        match kind {
            EmitKind::Tidy => write(path, &tidy.to_json())?,
            EmitKind::Cphi => write(path, &build_cphi_with(&phi, opts)?.to_json())?,
        }
    }
    if cert_mode {
        if tidy_ok == Some(false) {
            return Err(Error::Integrity("compiled circuit is not tidy".into()).into());
        }
    } else {
        out["pass"] = json!(true);
        out["bounds_pass"] = json!(cert.pass);
    }
    Ok(out)
}

fn amplitude(file: &Path, n: Option<usize>, qubit_cap: u32, cfg: &RunConfig) -> Outcome {
    let (c, recorded) = CountingCircuit::read_json(&read(file)?)?;
    let n = n
        .or(recorded)
        .ok_or_else(|| anyhow!("{} does not record n; pass --n", file.display()))?;
    let zeros = vec![false; c.num_qubits()];
    if cfg.exact {
        let e = statevector_amplitude_exact(&c, &zeros, &zeros, qubit_cap)?;
        let r = e
            .as_rational()
            .ok_or_else(|| anyhow!("amplitude {e} is not rational"))?;
        let count = r.clone() * BigRational::from_integer(BigInt::one() << n);
        if !count.is_integer() {
            return Err(Error::Integrity(format!("amplitude {r} is not a multiple of 2^-{n}")).into());
        }
        return Ok(json!({
            "amplitude": rational_to_f64(&r),
            "exact": r.to_string(),
            "count_inferred": count.to_integer().to_string(),
            "n": n,
        }));
    }
    let z = statevector_amplitude_capped(&c, &zeros, &zeros, qubit_cap)?;
    let scaled = z.re * 2f64.powi(n as i32);
    Ok(json!({
        "amplitude": z.re,
        "amplitude_imag": z.im,
        "count_inferred": scaled.round() as u64,
        "n": n,
    }))
}

fn crosscheck(file: &Path, i: Option<&str>, o: Option<&str>, qubit_cap: u32, cfg: &RunConfig) -> Outcome {
    let c = load_circuit(file)?;
    let q = c.num_qubits();
    let cfg = RunConfig { qubit_cap, ..*cfg };
    let results = crosscheck_amplitude(&c, &parse_bits(i, q)?, &parse_bits(o, q)?, &cfg)?;
    Ok(json!({ "results": results, "tolerance": cfg.tolerance }))
}

fn bound_table(n_max: usize) -> Outcome {
    let reports = (1..=n_max)
        .map(perm_bound_report)
        .collect::<mbl_core::Result<Vec<_>>>()?;
    let rows: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "n": r.n,
                "jerrum_snir_bound": jerrum_snir_bound(r.n).to_string(),
                "size": r.size.to_string(),
                "ratio": r.ratio,
                "c": r.c,
            })
        })
        .collect();
    Ok(json!({ "rows": rows, "fitted_c": fit_constant(&reports) }))
}
