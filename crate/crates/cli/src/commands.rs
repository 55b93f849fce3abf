use std::fs;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, ValueEnum};
use fewcopy::baseline::{compare_resources, witness_lambda_limit, witness_lambda_limit_dense};
use fewcopy::detector::{
    confidence_curve, confidence_min, derive_seed, expected_delta, run_protocol, ConfidenceTrace,
    Mode, ProtocolConfig, Verdict,
};
use fewcopy::fidelity::{expected_fidelity, fidelity_from_trace};
use fewcopy::states::{
    build_graph_state, build_linear_cluster, lambda_limit, observable_set_from_witness,
    parse_edge_list, parse_named_graph, GraphState, NoisyState, ObservableSet,
    MAX_DENSE_QUBITS, STABILIZER_SEPARABLE_BOUND,
};
use serde::Serialize;

use crate::error::CliError;
use crate::output::{format_number, Format, Table};

#[derive(Args, Debug, Clone, Serialize)]
pub struct OutputArgs {
    /// Output file; defaults to <command>.<format> in $FEWCOPY_OUT_DIR or the
    /// working directory.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CurveArgs {
    /// Noise levels, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true, allow_negative_numbers = true)]
    pub lambda: Vec<f64>,

    /// Number of qubits.
    #[arg(long, default_value_t = 4)]
    pub n: usize,

    #[arg(long, default_value_t = 200)]
    pub max_copies: u64,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Analytic,
    Oracle,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Analytic => Mode::Analytic,
            ModeArg::Oracle => Mode::Oracle,
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct TraceArgs {
    #[arg(long)]
    pub lambda: f64,

    /// `linear:N`, `c4`, or a path to an edge-list file.
    #[arg(long, default_value = "c4")]
    pub graph: String,

    #[arg(long, default_value_t = 200)]
    pub copies: u64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Independent runs; with more than one, --out receives a per-trial
    /// summary and each trace goes to <stem>.trialNNNN.<format>.
    #[arg(long, default_value_t = 1)]
    pub trials: u64,

    /// Target confidence C0.
    #[arg(long, default_value_t = 0.99)]
    pub c0: f64,

    #[arg(long, value_enum, default_value_t = ModeArg::Analytic)]
    pub mode: ModeArg,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
#[command(group(ArgGroup::new("target").required(true).args(["n", "graph"])))]
pub struct NoiseLimitArgs {
    #[arg(long)]
    pub n: Option<usize>,

    #[arg(long)]
    pub graph: Option<String>,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CompareArgs {
    /// Noise levels, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
    pub lambda: Vec<f64>,

    #[arg(long, default_value_t = 0.02)]
    pub epsilon: f64,

    /// Confidence level of each expectation-value estimate.
    #[arg(long, default_value_t = 0.95)]
    pub cl: f64,

    /// Number of local witness terms; defaults to 2^n.
    #[arg(long)]
    pub q: Option<u64>,

    #[arg(long, default_value_t = 4)]
    pub n: usize,

    /// Few-copy target confidence used for N_max.
    #[arg(long, default_value_t = 0.99)]
    pub c0: f64,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FidelityArgs {
    #[arg(long)]
    pub lambda: f64,

    #[arg(long, default_value = "c4")]
    pub graph: String,

    #[arg(long, default_value_t = 10_000)]
    pub copies: u64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, value_enum, default_value_t = ModeArg::Analytic)]
    pub mode: ModeArg,

    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn load_graph(spec: &str) -> Result<GraphState, CliError> {
    if let Some(g) = parse_named_graph(spec) {
        return Ok(g?);
    }
    let text = fs::read_to_string(spec)
        .map_err(|e| CliError::io(format!("cannot read graph file {spec:?}"), e))?;
    parse_edge_list(&text).map_err(|e| CliError::Usage(format!("{spec}: {e}")))
}

fn write(table: &Table, out: &Path, format: Format) -> Result<(), CliError> {
    table
        .write(out, format)
        .map_err(|e| CliError::io(format!("cannot write {}", out.display()), e))
}

pub fn confidence_curve_cmd(args: &CurveArgs, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut table = Table::new(&["n_copies", "c_min", "lambda"]);
    for &lambda in &args.lambda {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(CliError::Usage(format!("lambda {lambda} outside [0, 1]")));
        }
        for (copies, c) in confidence_curve(lambda, args.n, STABILIZER_SEPARABLE_BOUND, args.max_copies)? {
            table.push(vec![copies.into(), c.into(), lambda.into()]);
        }
    }
    write(&table, out, args.output.format)?;
    println!("wrote {} curve points to {}", table.len(), out.display());
    Ok(vec![out.to_path_buf()])
}

fn protocol(
    graph: &GraphState,
    lambda: f64,
    copies: u64,
    seed: u64,
    c0: f64,
    mode: ModeArg,
) -> Result<(ObservableSet, ProtocolConfig), CliError> {
    let set = observable_set_from_witness(graph);
    let cfg = ProtocolConfig::new(set.clone(), NoisyState::new(graph.clone(), lambda)?, copies)
        .with_seed(seed)
        .with_target_confidence(c0)
        .with_mode(mode.into());
    Ok((set, cfg))
}

fn trace_table(trace: &ConfidenceTrace, set: &ObservableSet, lambda: f64) -> Result<Table, CliError> {
    let mut table = Table::new(&[
        "copy_index",
        "observable_mask",
        "pauli_string",
        "outcome",
        "cumulative_s",
        "p_e_obs",
        "delta",
        "c_min",
        "conclusive",
        "c_min_theory",
    ]);
    let p_s = trace.separable_bound;
    let theory_delta = expected_delta(lambda, trace.n_qubits, p_s).ok();
    for r in &trace.records {
        let theory = match theory_delta {
            Some(d) => confidence_min(d, p_s, r.copies())?,
            None => None,
        };
        table.push(vec![
            r.copy_index.into(),
            r.observable_mask.into(),
            set.stabilizer(r.observable_mask)?.to_string().into(),
            u64::from(r.outcome).into(),
            r.cumulative_s.into(),
            r.p_e_obs.into(),
            r.delta.into(),
            r.c_min.into(),
            r.is_conclusive().into(),
            theory.into(),
        ]);
    }
    Ok(table)
}

fn trial_path(out: &Path, trial: u64, format: Format) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "trace".into());
    out.with_file_name(format!("{stem}.trial{trial:04}.{}", format.extension()))
}

pub fn trace_cmd(args: &TraceArgs, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    if args.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let graph = load_graph(&args.graph)?;
    let format = args.output.format;
    if args.trials == 1 {
        let (set, cfg) = protocol(&graph, args.lambda, args.copies, args.seed, args.c0, args.mode)?;
        let trace = run_protocol(&cfg)?;
        write(&trace_table(&trace, &set, args.lambda)?, out, format)?;
        println!("{}; wrote {}", describe(&trace), out.display());
        return Ok(vec![out.to_path_buf()]);
    }

    let mut summary = Table::new(&[
        "trial",
        "seed",
        "n_copies",
        "successes",
        "p_e_obs",
        "delta",
        "c_min",
        "verdict",
        "target_met",
    ]);
    let mut outputs = vec![out.to_path_buf()];
    let mut entangled = 0;
    let mut met = 0;
    for trial in 0..args.trials {
        let seed = derive_seed(args.seed, trial);
        let (set, cfg) = protocol(&graph, args.lambda, args.copies, seed, args.c0, args.mode)?;
        let trace = run_protocol(&cfg)?;
        let path = trial_path(out, trial, format);
        write(&trace_table(&trace, &set, args.lambda)?, &path, format)?;
        outputs.push(path);
        entangled += usize::from(trace.verdict.is_entangled());
        met += usize::from(trace.target_met);
        summary.push(vec![
            trial.into(),
            seed.into(),
            trace.n_copies().into(),
            trace.successes().into(),
            trace.observed_p_e().into(),
            trace.final_delta().into(),
            trace.last().c_min.into(),
            verdict_label(&trace.verdict).into(),
            trace.target_met.into(),
        ]);
    }
    write(&summary, out, format)?;
    println!(
        "{entangled}/{} trials entangled (delta > 0), {met}/{} reached C0 = {}; wrote {}",
        args.trials,
        args.trials,
        format_number(args.c0),
        out.display()
    );
    Ok(outputs)
}

fn verdict_label(v: &Verdict) -> &'static str {
    match v {
        Verdict::Entangled { .. } => "entangled",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn describe(trace: &ConfidenceTrace) -> String {
    let rec = trace.last();
    match trace.verdict {
        Verdict::Entangled { confidence } => format!(
            "entangled with confidence >= {} after {} copies (S = {})",
            format_number(confidence),
            rec.copies(),
            rec.cumulative_s
        ),
        Verdict::Inconclusive => format!(
            "inconclusive after {} copies (S = {}, delta = {})",
            rec.copies(),
            rec.cumulative_s,
            format_number(rec.delta)
        ),
    }
}

pub fn noise_limit_cmd(args: &NoiseLimitArgs, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let graph = match (&args.graph, args.n) {
        (Some(spec), _) => load_graph(spec)?,
        (None, Some(1)) => build_graph_state(&[], 1)?,
        (None, Some(n)) => build_linear_cluster(n)?,
        (None, None) => unreachable!("clap requires --n or --graph"),
    };
    let n = graph.n_qubits();
    let limit = lambda_limit(n);
    let (witness, method) = if n <= MAX_DENSE_QUBITS {
        (witness_lambda_limit_dense(&graph)?, "dense")
    } else {
        (witness_lambda_limit(&graph), "analytic")
    };
    let mut table = Table::new(&["n_qubits", "lambda_limit", "witness_lambda_limit", "witness_method"]);
    table.push(vec![n.into(), limit.into(), witness.into(), method.into()]);
    write(&table, out, args.output.format)?;
    println!("{}", format_number(limit));
    Ok(vec![out.to_path_buf()])
}

pub fn witness_compare_cmd(args: &CompareArgs, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut table = Table::new(&[
        "lambda",
        "epsilon",
        "confidence_level",
        "q_terms",
        "shots_per_term",
        "total_shots",
        "fewcopy_n_max",
        "ratio",
    ]);
    for &lambda in &args.lambda {
        let c = compare_resources(args.n, lambda, args.epsilon, args.cl, args.q, args.c0)?;
        table.push(vec![
            lambda.into(),
            args.epsilon.into(),
            args.cl.into(),
            c.estimate.n_terms.into(),
            c.estimate.shots_per_term.into(),
            c.estimate.total_shots.into(),
            c.fewcopy_n_max.into(),
            c.ratio.into(),
        ]);
        println!(
            "lambda {}: witness {} shots vs few-copy N_max {} (ceil {}), ratio {}",
            format_number(lambda),
            c.estimate.total_shots,
            format_number(c.fewcopy_n_max),
            c.fewcopy_n_max.ceil(),
            format_number(c.ratio)
        );
    }
    write(&table, out, args.output.format)?;
    Ok(vec![out.to_path_buf()])
}

pub fn fidelity_cmd(args: &FidelityArgs, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let graph = load_graph(&args.graph)?;
    let (_, cfg) = protocol(&graph, args.lambda, args.copies, args.seed, 0.99, args.mode)?;
    let trace = run_protocol(&cfg)?;
    let est = fidelity_from_trace(&trace)?;
    let expected = expected_fidelity(args.lambda, graph.n_qubits());
    let mut table = Table::new(&["lambda", "n_qubits", "n_copies", "f_hat", "std_error", "f_expected"]);
    table.push(vec![
        args.lambda.into(),
        graph.n_qubits().into(),
        est.n_copies_used.into(),
        est.f_hat.into(),
        est.std_error.into(),
        expected.into(),
    ]);
    write(&table, out, args.output.format)?;
    println!(
        "f_hat = {} +/- {} (expected {})",
        format_number(est.f_hat),
        format_number(est.std_error),
        format_number(expected)
    );
    Ok(vec![out.to_path_buf()])
}
