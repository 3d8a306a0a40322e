//! `qudicke`: synthesize, simulate and verify qudit Dicke-state circuits.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use qudit_dicke::pruning::{build_pruned_u_with, predicted_pruned_counts};
use qudit_dicke::reference::reference_dicke_state;
use qudit_dicke::synthesis::{build_u, build_w, predicted_v_count, predicted_w_count};
use qudit_dicke::{
    Circuit, CompositionVector, Mode, PrunedSpec, QutritRule, Simulator, State, VerifyOptions,
};

#[derive(Parser)]
#[command(
    name = "qudicke",
    version,
    about = "Deterministic preparation circuits for qudit Dicke states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a Dicke circuit and write it as JSON.
    Synth(SynthArgs),
    /// Build, run and check a circuit against the brute-force Dicke state.
    Verify(VerifyArgs),
    /// Run a circuit JSON file on |e(k)> or on a state JSON file.
    Simulate(SimulateArgs),
    /// Closed-form V-operator counts, optionally checked against synthesis.
    Count(CountArgs),
    /// Write the brute-force Dicke state as JSON.
    Reference(ReferenceArgs),
    /// Verify every composition up to a size and print a CSV summary.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Full,
    Pruned,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Full => Mode::Full,
            ModeArg::Pruned => Mode::Pruned,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    Conjectured,
    Covering,
}

impl From<RuleArg> for QutritRule {
    fn from(r: RuleArg) -> QutritRule {
        match r {
            RuleArg::Conjectured => QutritRule::Conjectured,
            RuleArg::Covering => QutritRule::Covering,
        }
    }
}

#[derive(Args)]
struct ModeOpts {
    /// `full` is composition-independent; `pruned` (d = 2 or 3) drops gates
    /// that cannot fire for the given k. The d = 3 pruning rule is an
    /// unproven conjecture: check its output with `verify`.
    #[arg(long, value_enum, default_value = "full")]
    mode: ModeArg,
    /// Qutrit pruning rule. `conjectured` is unproven and misses
    /// gates for some k, e.g. 1,3,1; `covering` keeps them.
    #[arg(long, value_enum, default_value = "conjectured")]
    rule: RuleArg,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    n: usize,
    /// Composition k_0,...,k_{d-1} (required for pruned mode).
    #[arg(long)]
    k: Option<String>,
    #[command(flatten)]
    mode: ModeOpts,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: String,
    #[command(flatten)]
    mode: ModeOpts,
    /// Pass requires fidelity >= 1 - tol.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Pass requires every amplitude within this distance of the reference.
    #[arg(long, default_value_t = 1e-8)]
    amp_tol: f64,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    circuit: PathBuf,
    /// Start from |e(k)> for this composition.
    #[arg(long, conflicts_with = "state", required_unless_present = "state")]
    input: Option<String>,
    /// Start from a state JSON file.
    #[arg(long)]
    state: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CountArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    n: usize,
    /// Also synthesize each W_m and compare.
    #[arg(long)]
    check: bool,
}

#[derive(Args)]
struct ReferenceArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    k: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    max_n: usize,
    #[command(flatten)]
    mode: ModeOpts,
}

/// Bad input from the user: exit status 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage<T>(msg: impl Into<String>) -> anyhow::Result<T> {
    Err(Usage(msg.into()).into())
}

fn parse_k(text: &str, d: usize, n: Option<usize>) -> anyhow::Result<CompositionVector> {
    let parts: Vec<usize> = match text.split(',').map(|p| p.trim().parse::<usize>()).collect() {
        Ok(p) => p,
        Err(e) => return usage(format!("invalid composition {text:?}: {e}")),
    };
    if parts.len() != d {
        return usage(format!(
            "composition {text:?} has {} parts, expected d={d}",
            parts.len()
        ));
    }
    let sum: usize = parts.iter().sum();
    if let Some(n) = n {
        if sum != n {
            return usage(format!(
                "composition {text:?} sums to {sum}, expected n={n}"
            ));
        }
    }
    Ok(CompositionVector::with_dimension(d, parts)?)
}

fn check_d(d: usize) -> anyhow::Result<()> {
    if d < 2 {
        return usage(format!("d must be at least 2, got {d}"));
    }
    Ok(())
}

fn write_output(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n"))
            .with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = io::stdout().lock();
            writeln!(stdout, "{text}")?;
            Ok(())
        }
    }
}

fn options(mode: &ModeOpts, fidelity_tol: f64, amplitude_tol: f64) -> VerifyOptions {
    VerifyOptions {
        fidelity_tol,
        amplitude_tol,
        rule: mode.rule.into(),
    }
}

fn synth(args: SynthArgs) -> anyhow::Result<ExitCode> {
    check_d(args.d)?;
    let k = args
        .k
        .as_deref()
        .map(|t| parse_k(t, args.d, Some(args.n)))
        .transpose()?;
    let circuit = match (Mode::from(args.mode.mode), &k) {
        (Mode::Full, _) => build_u(args.n, args.d)?,
        (Mode::Pruned, Some(k)) => {
            build_pruned_u_with(&PrunedSpec::new(k.clone())?, args.mode.rule.into())?
        }
        (Mode::Pruned, None) => return usage("pruned mode needs --k"),
    };
    let mut summary = format!(
        "size {}\ndepth {}\nv_operators {}\n",
        circuit.size(),
        circuit.depth(),
        circuit.v_operator_count()
    );
    for (tag, count) in circuit.count_by_tag() {
        summary.push_str(&format!("count {tag} {count}\n"));
    }
    if let (Mode::Pruned, Some(k)) = (Mode::from(args.mode.mode), &k) {
        if matches!(args.mode.rule, RuleArg::Conjectured) {
            let (ni, nii) = predicted_pruned_counts(&PrunedSpec::new(k.clone())?);
            summary.push_str(&format!("predicted I {ni}\npredicted II {nii}\n"));
        }
    }
    let json = circuit.to_json_pretty()?;
    match &args.out {
        Some(path) => {
            write_output(Some(path), &json)?;
            print!("{summary}");
        }
        None => {
            write_output(None, &json)?;
            eprint!("{summary}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(args: VerifyArgs) -> anyhow::Result<ExitCode> {
    check_d(args.d)?;
    if !(args.tol >= 0.0 && args.amp_tol >= 0.0) {
        return usage("tolerances must be non-negative");
    }
    let k = parse_k(&args.k, args.d, Some(args.n))?;
    let opts = options(&args.mode, args.tol, args.amp_tol);
    let report = Simulator::default().verify(&k, args.mode.mode.into(), opts)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    println!("fidelity {:.16e}", report.fidelity);
    println!("max_amp_error {:.16e}", report.max_amp_error);
    println!("{}", if report.pass { "PASS" } else { "FAIL" });
    Ok(if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn read_file(path: &Path) -> anyhow::Result<String> {
    match fs::read_to_string(path) {
        Ok(s) => Ok(s),
        Err(e) => usage(format!("cannot read {}: {e}", path.display())),
    }
}

fn simulate(args: SimulateArgs) -> anyhow::Result<ExitCode> {
    let circuit = Circuit::from_json(&read_file(&args.circuit)?)?;
    let input = match (&args.input, &args.state) {
        (Some(text), _) => {
            State::identity_permutation(&parse_k(text, circuit.d(), Some(circuit.n()))?)?
        }
        (None, Some(path)) => State::from_json(&read_file(path)?)?,
        (None, None) => return usage("need --input or --state"),
    };
    let out = Simulator::default().run(&circuit, &input)?;
    write_output(args.out.as_deref(), &out.to_json()?)?;
    Ok(ExitCode::SUCCESS)
}

fn count(args: CountArgs) -> anyhow::Result<ExitCode> {
    check_d(args.d)?;
    if args.n < 1 {
        return usage("n must be at least 1");
    }
    println!("predicted_v_count {}", predicted_v_count(args.n, args.d)?);
    let mut ok = true;
    if args.check {
        println!("m\tpredicted_w_count\tsynthesized+d");
    } else {
        println!("m\tpredicted_w_count");
    }
    for m in 2..=args.n {
        let predicted = predicted_w_count(m, args.d)?;
        if args.check {
            // the d identity operators of the j = 1 term emit no gates
            let synthesized = build_w(m, args.d, m)?.v_operator_count() as u64 + args.d as u64;
            ok &= synthesized == predicted;
            println!("{m}\t{predicted}\t{synthesized}");
        } else {
            println!("{m}\t{predicted}");
        }
    }
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn reference(args: ReferenceArgs) -> anyhow::Result<ExitCode> {
    check_d(args.d)?;
    let k = parse_k(&args.k, args.d, None)?;
    let state = reference_dicke_state::<f64>(&k)?;
    write_output(args.out.as_deref(), &state.to_json()?)?;
    Ok(ExitCode::SUCCESS)
}

fn sweep(args: SweepArgs) -> anyhow::Result<ExitCode> {
    check_d(args.d)?;
    let opts = options(&args.mode, 1e-10, 1e-8);
    let reports = Simulator::default().sweep(args.d, args.max_n, args.mode.mode.into(), opts)?;
    let mut w = csv::Writer::from_writer(io::stdout().lock());
    w.write_record([
        "d",
        "n",
        "k",
        "mode",
        "fidelity",
        "max_amp_error",
        "size",
        "depth",
        "pass",
    ])?;
    let mut all_pass = true;
    for r in &reports {
        all_pass &= r.pass;
        let k =
            r.k.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",");
        w.write_record([
            r.d.to_string(),
            r.n.to_string(),
            k,
            r.mode.to_string(),
            format!("{:.16e}", r.fidelity),
            format!("{:.16e}", r.max_amp_error),
            r.size.to_string(),
            r.depth.to_string(),
            r.pass.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn is_usage(err: &anyhow::Error) -> bool {
    if err.downcast_ref::<Usage>().is_some() {
        return true;
    }
    // every library error stems from the request itself
    err.downcast_ref::<qudit_dicke::Error>().is_some()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Synth(a) => synth(a),
        Command::Verify(a) => verify(a),
        Command::Simulate(a) => simulate(a),
        Command::Count(a) => count(a),
        Command::Reference(a) => reference(a),
        Command::Sweep(a) => sweep(a),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            if is_usage(&err) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
