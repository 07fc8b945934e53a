//! `entro`: command-line front end for the entropy library.
//!
//! Results go to stdout (JSON unless `--format` says otherwise), diagnostics
//! to stderr. Exit codes: 0 success, 1 usage or validation error, 2
//! model-domain error.

mod render;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use entro::black_hole::{
    evaporate, form_black_hole, BlackHole, EvaporationPolicy, Ledger, ProtoBh, Trajectory,
};
use entro::classical::ProbTable;
use entro::quantum::{DensityMatrix, PureState};
use entro::quantum_entropy::{
    conditional_amplitude_matrix, conditional_entropy_diagnostics, inseparability_witness,
    marginal_entropy, mutual_entropy_q, venn_quantum, von_neumann_entropy, Cut,
};
use entro::scenarios::{epr_experiment, Basis};
use entro::{EntropyDiagram, Error, LogBase};
use serde::Serialize;
use serde_json::{json, Value};

use render::render_ascii_venn;

#[derive(Parser)]
#[command(
    name = "entro",
    version,
    about = "Classical and quantum entropy calculus"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    /// Logarithm base for information-theoretic verbs (`2` or `e`).
    /// Overrides ENTRO_LOG_BASE.
    #[arg(long, global = true)]
    base: Option<LogBase>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Ascii,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Entropy report for a probability table.
    Classical {
        #[arg(long)]
        table: PathBuf,
    },
    /// Entropy report for a density matrix or pure state.
    Quantum {
        #[arg(long)]
        state: PathBuf,
        #[command(flatten)]
        cut: CutArgs,
    },
    /// Entropy Venn diagram over two or three parties.
    Venn {
        #[command(flatten)]
        input: Input,
        /// Comma-separated parties; join labels within a party with `+`,
        /// e.g. `Q1+Q2,A1,A2`.
        #[arg(long)]
        parties: String,
    },
    /// Conditional amplitude matrix and inseparability witness.
    Witness {
        #[arg(long)]
        state: PathBuf,
        #[command(flatten)]
        cut: CutArgs,
    },
    /// EPR pair measured by two ancilla devices.
    Epr {
        #[command(subcommand)]
        action: Option<EprAction>,
        #[command(flatten)]
        args: EprArgs,
    },
    /// Formation of a black hole from thermal radiation at temperature T.
    BhForm {
        #[arg(long)]
        temperature: f64,
    },
    /// Evaporation trajectory with steps dE = fraction · M.
    BhEvaporate {
        #[arg(
            long,
            conflicts_with = "temperature",
            required_unless_present = "temperature"
        )]
        mass: Option<f64>,
        /// Form the hole from radiation at this temperature first.
        #[arg(long)]
        temperature: Option<f64>,
        #[arg(long, default_value_t = 0.001)]
        fraction: f64,
        #[arg(long)]
        mmin: f64,
    },
    /// Runs the built-in acceptance checks.
    Selftest {
        #[arg(long, default_value_t = entro::selftest::DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum EprAction {
    Run {
        #[command(flatten)]
        args: EprArgs,
    },
}

#[derive(Args, Clone)]
struct EprArgs {
    #[arg(long, default_value = "z")]
    basis1: Basis,
    #[arg(long, default_value = "z")]
    basis2: Basis,
    /// Also write the JSON result to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    #[arg(long)]
    state: Option<PathBuf>,
    #[arg(long)]
    table: Option<PathBuf>,
}

#[derive(Args)]
struct CutArgs {
    /// Labels of group A, comma-separated.
    #[arg(long)]
    a: Option<String>,
    /// Labels of group B, comma-separated; defaults to every other factor.
    #[arg(long)]
    b: Option<String>,
}

/// Output of one verb.
enum Report {
    Json(Value),
    Diagram(EntropyDiagram),
    Text(String, Value),
    Trajectory(Trajectory, Value),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            let domain = err
                .chain()
                .any(|c| matches!(c.downcast_ref::<Error>(), Some(Error::ModelDomain(_))));
            ExitCode::from(if domain { 2 } else { 1 })
        }
    }
}

fn info_base(cli_base: Option<LogBase>) -> anyhow::Result<LogBase> {
    match cli_base {
        Some(b) => Ok(b),
        None => Ok(LogBase::from_env()?),
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let format = cli.format;
    let report = match cli.command {
        Command::Classical { table } => classical(&load_table(&table)?, info_base(cli.base)?)?,
        Command::Quantum { state, cut } => {
            quantum(&load_state(&state)?, &cut, info_base(cli.base)?)?
        }
        Command::Venn { input, parties } => {
            let base = info_base(cli.base)?;
            let groups = parse_parties(&parties)?;
            let refs: Vec<Vec<&str>> = groups
                .iter()
                .map(|g| g.iter().map(String::as_str).collect())
                .collect();
            let refs: Vec<&[&str]> = refs.iter().map(Vec::as_slice).collect();
            let d = match (&input.state, &input.table) {
                (Some(p), _) => venn_quantum(&load_state(p)?, &refs, base)?,
                (_, Some(p)) => load_table(p)?.venn(&refs, base)?,
                _ => unreachable!("clap enforces exactly one input"),
            };
            Report::Diagram(d)
        }
        Command::Witness { state, cut } => witness(&load_state(&state)?, &cut)?,
        Command::Epr { action, args } => {
            let args = match action {
                Some(EprAction::Run { args }) => args,
                None => args,
            };
            epr(&args, info_base(cli.base)?)?
        }
        Command::BhForm { temperature } => {
            let f = form_black_hole(&ProtoBh::new(temperature)?)?;
            let l = &f.ledger;
            let v = json!({
                "temperature": temperature,
                "mass": l.mass(),
                "sigma": l.sigma(),
                "s_bh": l.s_bh(),
                "delta_s": l.s_rad(),
                "hawking_temperature": l.black_hole().temperature(),
                "collapse_diagram": f.collapse_diagram,
            });
            Report::Text(render_ascii_venn(&f.collapse_diagram), v)
        }
        Command::BhEvaporate {
            mass,
            temperature,
            fraction,
            mmin,
        } => {
            let (ledger, collapse) = match (mass, temperature) {
                (Some(m), _) => (Ledger::from_black_hole(BlackHole::new(m)?), None),
                (None, Some(t)) => {
                    let f = form_black_hole(&ProtoBh::new(t)?)?;
                    (f.ledger, Some(f.collapse_diagram))
                }
                (None, None) => unreachable!("clap requires one of --mass/--temperature"),
            };
            let initial =
                json!({ "mass": ledger.mass(), "s_bh": ledger.s_bh(), "sigma": ledger.sigma() });
            let t = evaporate(
                ledger,
                EvaporationPolicy {
                    fraction,
                    m_min: mmin,
                },
            )?;
            let v = json!({
                "initial": initial,
                "fraction": fraction,
                "m_min": mmin,
                "steps": t.snapshots.len(),
                "final_mass": t.final_ledger.mass(),
                "total_s_rad": t.total_s_rad(),
                "final_s_bh": t.final_s_bh(),
                "s_corr": t.final_ledger.s_corr(),
                "residual_defect": t.residual_defect(),
                "truncation_bound": t.truncation_bound(),
                "collapse_diagram": collapse,
            });
            Report::Trajectory(t, v)
        }
        Command::Selftest { seed } => {
            let outcomes = entro::selftest::run_all(seed);
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            let text = if format == Format::Json {
                serde_json::to_string_pretty(&outcomes)? + "\n"
            } else {
                outcomes
                    .iter()
                    .map(|o| {
                        let tag = if o.passed { "PASS" } else { "FAIL" };
                        format!("[{tag}] {:>2}. {}: {}\n", o.id, o.name, o.detail)
                    })
                    .collect()
            };
            write_stdout(&text)?;
            eprintln!(
                "selftest: {} passed, {failed} failed",
                outcomes.len() - failed
            );
            return Ok(if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            });
        }
    };
    emit(report, format)?;
    Ok(ExitCode::SUCCESS)
}

fn emit(report: Report, format: Format) -> anyhow::Result<()> {
    let text = match (report, format) {
        (Report::Trajectory(t, _), Format::Csv) => trajectory_csv(&t),
        (_, Format::Csv) => bail!(Error::Usage(
            "--format csv is only available for bh-evaporate".into()
        )),
        (Report::Diagram(d), Format::Ascii) => render_ascii_venn(&d),
        (Report::Text(text, _), Format::Ascii) => text,
        (Report::Json(v) | Report::Trajectory(_, v), Format::Ascii) => ascii_value(&v, ""),
        (Report::Diagram(d), Format::Json) => serde_json::to_string_pretty(&d)? + "\n",
        (Report::Json(v) | Report::Text(_, v) | Report::Trajectory(_, v), Format::Json) => {
            serde_json::to_string_pretty(&v)? + "\n"
        }
    };
    write_stdout(&text)
}

/// A closed pipe (e.g. `| head`) is not an error.
fn write_stdout(text: &str) -> anyhow::Result<()> {
    let mut out = io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

/// Flat `key: value` listing of a JSON report.
fn ascii_value(v: &Value, prefix: &str) -> String {
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                if v.is_object() {
                    ascii_value(v, &key)
                } else {
                    format!("{key}: {}\n", scalar(v))
                }
            })
            .collect(),
        other => format!("{}\n", scalar(other)),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Number(n) => n
            .as_f64()
            .map(render::fixed4)
            .unwrap_or_else(|| n.to_string()),
        Value::Array(items) => items.iter().map(scalar).collect::<Vec<_>>().join(", "),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn trajectory_csv(t: &Trajectory) -> String {
    let mut out = String::from("step,M,S_BH,dE,dE_eff,dS_BH,dS_rad,dS_corr,zurek_ratio,defect\n");
    for s in &t.snapshots {
        let r = &s.record;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            s.step,
            s.mass,
            s.s_bh,
            r.de,
            r.de_eff,
            r.ds_bh,
            r.ds_rad,
            r.ds_corr,
            r.zurek_ratio,
            s.defect
        ));
    }
    out
}

fn read(path: &Path) -> anyhow::Result<Value> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("{}: cannot read file", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("{}: not valid JSON", path.display()))
}

fn load_table(path: &Path) -> anyhow::Result<ProbTable> {
    serde_json::from_value(read(path)?)
        .with_context(|| format!("{}: invalid probability table", path.display()))
}

/// Accepts either a density matrix (`re`/`im`) or a pure state (`amp_re`/`amp_im`).
fn load_state(path: &Path) -> anyhow::Result<DensityMatrix> {
    let v = read(path)?;
    if v.get("amp_re").is_some() {
        let psi: PureState = serde_json::from_value(v)
            .with_context(|| format!("{}: invalid pure state", path.display()))?;
        Ok(psi.density())
    } else {
        serde_json::from_value(v)
            .with_context(|| format!("{}: invalid density matrix", path.display()))
    }
}

fn split_labels(s: &str, sep: char) -> Vec<String> {
    s.split(sep)
        .map(|l| l.trim().to_string())
        .filter(|l| !l.is_empty())
        .collect()
}

fn parse_parties(s: &str) -> anyhow::Result<Vec<Vec<String>>> {
    let groups: Vec<Vec<String>> = s.split(',').map(|g| split_labels(g, '+')).collect();
    if groups.iter().any(Vec::is_empty) {
        bail!(Error::Usage(format!("empty party in `{s}`")));
    }
    Ok(groups)
}

fn resolve_cut(rho: &DensityMatrix, args: &CutArgs) -> anyhow::Result<Cut> {
    let a = match &args.a {
        Some(a) => split_labels(a, ','),
        None => match rho.layout().labels().next() {
            Some(first) => vec![first.to_string()],
            None => bail!(Error::Usage("state has no factors".into())),
        },
    };
    let a_refs: Vec<&str> = a.iter().map(String::as_str).collect();
    Ok(match &args.b {
        Some(b) => {
            let b = split_labels(b, ',');
            let b_refs: Vec<&str> = b.iter().map(String::as_str).collect();
            Cut::new(&a_refs, &b_refs)
        }
        None => Cut::against_rest(rho, &a_refs)?,
    })
}

#[derive(Serialize)]
struct LabeledEntropy {
    label: String,
    entropy: f64,
}

fn classical(t: &ProbTable, base: LogBase) -> anyhow::Result<Report> {
    let marginals = t
        .labels()
        .map(|l| {
            Ok(LabeledEntropy {
                label: l.to_string(),
                entropy: t.entropy(&[l], base)?,
            })
        })
        .collect::<entro::Result<Vec<_>>>()?;
    let correlation = if t.variables().len() >= 2 {
        Some(t.correlation_entropy(base)?)
    } else {
        None
    };
    Ok(Report::Json(json!({
        "log_base": base,
        "joint": t.joint_entropy(base),
        "marginals": marginals,
        "correlation": correlation,
    })))
}

fn quantum(rho: &DensityMatrix, cut: &CutArgs, base: LogBase) -> anyhow::Result<Report> {
    let marginals = rho
        .layout()
        .labels()
        .map(|l| {
            Ok(LabeledEntropy {
                label: l.to_string(),
                entropy: marginal_entropy(rho, &[l], base)?,
            })
        })
        .collect::<entro::Result<Vec<_>>>()?;
    let mut v = json!({
        "log_base": base,
        "entropy": von_neumann_entropy(rho, base)?,
        "eigenvalues": rho.eigenvalues()?,
        "marginals": marginals,
    });
    if rho.layout().factors().len() >= 2 || cut.a.is_some() {
        let c = resolve_cut(rho, cut)?;
        let diag = conditional_entropy_diagnostics(rho, &c, base)?;
        v["cut"] = json!(c);
        v["conditional"] = json!(diag);
        v["mutual"] = json!(mutual_entropy_q(rho, &c, base)?);
    }
    Ok(Report::Json(v))
}

fn witness(rho: &DensityMatrix, cut: &CutArgs) -> anyhow::Result<Report> {
    let c = resolve_cut(rho, cut)?;
    let amp = conditional_amplitude_matrix(rho, &c)?;
    let w = inseparability_witness(rho, &c)?;
    Ok(Report::Json(json!({
        "cut": c,
        "spectrum": amp.spectrum,
        "max_eigenvalue": w.max_eigenvalue,
        "exceeds_unity": w.exceeds_unity,
    })))
}

fn epr(args: &EprArgs, base: LogBase) -> anyhow::Result<Report> {
    let x = epr_experiment(args.basis1.clone(), args.basis2.clone(), base)?;
    let subsets: serde_json::Map<String, Value> = x
        .subset_entropies(base)?
        .into_iter()
        .map(|(k, v)| (k, json!(v)))
        .collect();
    let v = json!({
        "device_diagram": x.device_diagram,
        "full_diagram": x.full_diagram,
        "system_device_mutual": x.system_device_mutual,
        "subset_entropies": subsets,
    });
    if let Some(path) = &args.out {
        fs::write(path, serde_json::to_string_pretty(&v)? + "\n")
            .with_context(|| format!("{}: cannot write output", path.display()))?;
    }
    let text = format!(
        "devices A1, A2:\n{}\nspins Q1Q2 with devices:\n{}S(Q1Q2:A1A2) = {:.4}\n",
        render_ascii_venn(&x.device_diagram),
        render_ascii_venn(&x.full_diagram),
        x.system_device_mutual
    );
    Ok(Report::Text(text, v))
}
