//! Command-line front end. [`run`] parses arguments, writes the report to
//! `out` and diagnostics to `err`, and returns the process exit code:
//! 0 on success, 1 when a verification fails, 2 on a usage error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use distinctq::bounds::{bound_report, BoundReport};
use distinctq::conjecture::{filter_order8_with, survey_order7_with, verdict, SurveyOptions, Verdict, VERDICT_MAX_ORDER};
use distinctq::constructions::{certificate_bank, export_bank, CertificateCheck, ConstructionError};
use distinctq::families::{
    build_tmn_complement_certificate, certify_tree_complement, classify_tree, recognize_high_q, FamilyError, FamilyTag,
};
use distinctq::graph::Graph;
use distinctq::spectra::{SymmetricMatrix, ToleranceConfig};
use distinctq::strong::{lift_to_supergraph, strong_property_check, LiftOptions, StrongError, StrongMode};

/// Default directory for exported files.
pub const OUTPUT_DIR_ENV: &str = "DISTINCTQ_OUTPUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "distinctq", version, about = "Bounds and certificates for the minimum number of distinct eigenvalues")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    output: OutputFormat,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Survey worker threads.
    #[arg(long, global = true, default_value_t = 1, value_parser = parse_threads)]
    threads: usize,
    #[arg(long, global = true, value_parser = parse_positive)]
    eig_tol: Option<f64>,
    #[arg(long, global = true, value_parser = parse_positive)]
    rank_tol: Option<f64>,
    #[arg(long, global = true, value_parser = parse_positive)]
    entry_floor: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Ssp,
    Smp,
}

impl From<ModeArg> for StrongMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Ssp => StrongMode::Ssp,
            ModeArg::Smp => StrongMode::Smp,
        }
    }
}

#[derive(Args, Debug)]
struct GraphInput {
    #[arg(long, required_unless_present = "file", conflicts_with = "file")]
    graph6: Option<String>,
    /// One graph6 string per line.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bounds, family and verdict for each graph.
    Analyze(GraphInput),
    /// Build and verify a certificate matrix.
    Certify {
        #[command(subcommand)]
        target: CertifyTarget,
    },
    /// Check the SSP or SMP of a matrix.
    Ssp {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Ssp)]
        mode: ModeArg,
    },
    /// Lift a matrix with a strong property to a spanning supergraph.
    Lift {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        graph6: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Ssp)]
        mode: ModeArg,
    },
    /// Exhaustive complement-pair search.
    Survey {
        #[arg(long, value_parser = clap::value_parser!(u8).range(7..=8))]
        order: u8,
    },
    /// The certificate bank.
    Bank {
        #[command(subcommand)]
        action: BankAction,
    },
}

#[derive(Subcommand, Debug)]
enum CertifyTarget {
    /// `q(T^c)` for a tree `T`.
    TreeComplement(GraphInput),
    /// `T_{m,n}^c` with the SSP.
    Tmn {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
enum BankAction {
    List,
    Verify,
    /// Write every matrix and an index to a directory.
    Export {
        #[arg(long, env = OUTPUT_DIR_ENV, default_value = "bank")]
        dir: PathBuf,
    },
}

fn parse_threads(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(t) if t >= 1 => Ok(t),
        _ => Err(format!("expected an integer >= 1, got {s:?}")),
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() && x > 0.0 => Ok(x),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Verification(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Verification(m) => m,
        }
    }
}

impl From<FamilyError> for Failure {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::NotATree | FamilyError::TooSmall(..) | FamilyError::TmnRange { .. } => Failure::Usage(e.to_string()),
            other => Failure::Verification(other.to_string()),
        }
    }
}

impl From<StrongError> for Failure {
    fn from(e: StrongError) -> Self {
        match e {
            StrongError::DimensionMismatch { .. } => Failure::Usage(e.to_string()),
            other => Failure::Verification(other.to_string()),
        }
    }
}

impl From<ConstructionError> for Failure {
    fn from(e: ConstructionError) -> Self {
        Failure::Verification(e.to_string())
    }
}

/// A rendered report plus whether every check in it passed.
struct Rendered {
    body: String,
    passed: bool,
    notes: Vec<String>,
}

fn json<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("reports serialize");
    s.push('\n');
    s
}

fn ok(body: String) -> Result<Rendered, Failure> {
    Ok(Rendered { body, passed: true, notes: vec![] })
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli) {
        Ok(r) => {
            let _ = out.write_all(r.body.as_bytes());
            for n in &r.notes {
                let _ = writeln!(err, "{n}");
            }
            if r.passed {
                0
            } else {
                1
            }
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

fn tolerances(cli: &Cli) -> Result<ToleranceConfig, Failure> {
    let d = ToleranceConfig::default();
    let cfg = ToleranceConfig {
        eig_tol: cli.eig_tol.unwrap_or(d.eig_tol),
        rank_tol: cli.rank_tol.unwrap_or(d.rank_tol),
        entry_floor: cli.entry_floor.unwrap_or(d.entry_floor),
    };
    cfg.validate().map_err(|e| Failure::Usage(format!("tolerance flags: {e}")))?;
    Ok(cfg)
}

fn execute(cli: &Cli) -> Result<Rendered, Failure> {
    let cfg = tolerances(cli)?;
    let fmt = cli.output;
    match &cli.command {
        Command::Analyze(input) => analyze(&read_graphs(input)?, fmt),
        Command::Certify { target: CertifyTarget::TreeComplement(input) } => {
            certify_trees(&read_graphs(input)?, &cfg, fmt)
        }
        Command::Certify { target: CertifyTarget::Tmn { m, n } } => {
            let opts = LiftOptions { seed: cli.seed, ..Default::default() };
            let r = build_tmn_complement_certificate(*m, *n, &cfg, &opts)?;
            ok(match fmt {
                OutputFormat::Json => json(&r),
                OutputFormat::Csv => {
                    let mut s = String::from("from_m,from_n,to_m,to_n,join_deviation,join_nullity,lift_iterations,spectrum_deviation\n");
                    for st in &r.steps {
                        s.push_str(&format!(
                            "{},{},{},{},{:e},{},{},{:e}\n",
                            st.from.0, st.from.1, st.to.0, st.to.1, st.join_deviation, st.join_nullity, st.lift_iterations, st.spectrum_deviation
                        ));
                    }
                    s
                }
                OutputFormat::Text => format!(
                    "{}: {} induction steps from T_({},{}), verified\n{}",
                    r.certificate.name,
                    r.steps.len(),
                    r.base.0,
                    r.base.1,
                    r.certificate.matrix.to_text()
                ),
            })
        }
        Command::Ssp { matrix, mode } => {
            let a = read_matrix(matrix)?;
            let r = strong_property_check(&a, (*mode).into(), &cfg)?;
            let body = match fmt {
                OutputFormat::Json => json(&r),
                OutputFormat::Csv => format!("mode,holds,nullity,unknowns\n{},{},{},{}\n", r.mode, r.holds, r.nullity, r.unknowns),
                OutputFormat::Text => format!("{}: {} (nullity {}, {} unknowns)\n", r.mode, if r.holds { "holds" } else { "fails" }, r.nullity, r.unknowns),
            };
            Ok(Rendered { body, passed: r.holds, notes: vec![] })
        }
        Command::Lift { matrix, graph6, mode } => {
            let a = read_matrix(matrix)?;
            let g = parse_graph(graph6, "--graph6")?;
            let opts = LiftOptions { seed: cli.seed, ..Default::default() };
            let r = lift_to_supergraph(&a, &g, (*mode).into(), &cfg, &opts)?;
            ok(match fmt {
                OutputFormat::Json => json(&r),
                OutputFormat::Csv => matrix_csv(&r.matrix),
                OutputFormat::Text => r.matrix.to_text(),
            })
        }
        Command::Survey { order } => {
            let opts = SurveyOptions { threads: cli.threads };
            let r = match order {
                7 => survey_order7_with(&opts),
                _ => filter_order8_with(&opts),
            }
            .map_err(|e| Failure::Verification(e.to_string()))?;
            let body = match fmt {
                OutputFormat::Json => json(&r),
                OutputFormat::Csv if r.order == 7 => r.verdict_csv(),
                OutputFormat::Csv => r.survivors_csv(),
                OutputFormat::Text => {
                    let mut s = format!("order {}: {} graphs, {} complement pairs\n", r.order, r.total_graphs, r.total_pairs);
                    for st in &r.stage_counts {
                        s.push_str(&format!("  {}: {}\n", st.stage, st.pairs));
                    }
                    s.push_str(&format!("  expected survivors: {}\n", r.expected_pairs));
                    for (k, v) in &r.verdict_histogram {
                        s.push_str(&format!("  {k}: {v}\n"));
                    }
                    s
                }
            };
            Ok(Rendered { body, passed: r.passed, notes: r.failures.clone() })
        }
        Command::Bank { action } => bank(action, &cfg, fmt),
    }
}

fn matrix_csv(a: &SymmetricMatrix) -> String {
    a.rows().iter().map(|r| r.iter().map(|x| format!("{x:.17e}")).collect::<Vec<_>>().join(",") + "\n").collect()
}

fn parse_graph(s: &str, flag: &str) -> Result<Graph, Failure> {
    Graph::from_graph6(s.trim()).map_err(|e| Failure::Usage(format!("{flag} {s:?}: {e}")))
}

fn read_graphs(input: &GraphInput) -> Result<Vec<Graph>, Failure> {
    match (&input.graph6, &input.file) {
        (Some(s), _) => Ok(vec![parse_graph(s, "--graph6")?]),
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("--file {}: {e}", path.display())))?;
            text.lines().map(str::trim).filter(|l| !l.is_empty()).map(|l| parse_graph(l, "--file")).collect()
        }
        (None, None) => Err(Failure::Usage("one of --graph6 or --file is required".into())),
    }
}

fn read_matrix(path: &Path) -> Result<SymmetricMatrix, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("--matrix {}: {e}", path.display())))?;
    let parsed = if text.trim_start().starts_with('[') {
        serde_json::from_str(&text).map_err(|e| e.to_string())
    } else {
        SymmetricMatrix::from_text(&text).map_err(|e| e.to_string())
    };
    parsed.map_err(|e| Failure::Usage(format!("--matrix {}: {e}", path.display())))
}

#[derive(Serialize)]
struct AnalyzeReport {
    graph6: String,
    order: usize,
    bounds: BoundReport,
    family: FamilyTag,
    #[serde(skip_serializing_if = "Option::is_none")]
    tree_family: Option<FamilyTag>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<Verdict>,
}

fn snake<T: Serialize>(x: &T) -> String {
    serde_json::to_value(x).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default()
}

fn analyze(graphs: &[Graph], fmt: OutputFormat) -> Result<Rendered, Failure> {
    let reports: Vec<AnalyzeReport> = graphs
        .iter()
        .map(|g| AnalyzeReport {
            graph6: g.to_graph6(),
            order: g.order(),
            bounds: bound_report(g),
            family: recognize_high_q(g),
            tree_family: if g.is_tree() && g.order() >= 2 { classify_tree(g).ok() } else { None },
            verdict: (g.order() <= VERDICT_MAX_ORDER).then(|| verdict(g)),
        })
        .collect();
    ok(match fmt {
        OutputFormat::Json if reports.len() == 1 => json(&reports[0]),
        OutputFormat::Json => json(&reports),
        OutputFormat::Csv => {
            let mut s = String::from("graph6,order,q_lower,q_upper,family,status,rule,sum_bound,target\n");
            for r in &reports {
                let (status, rule, sum, target) = match &r.verdict {
                    Some(v) => (snake(&v.status), snake(&v.rule), v.sum_bound.to_string(), v.target.to_string()),
                    None => Default::default(),
                };
                s.push_str(&format!(
                    "{},{},{},{},{},{status},{rule},{sum},{target}\n",
                    r.graph6, r.order, r.bounds.q_lower.value, r.bounds.q_upper.value, r.family
                ));
            }
            s
        }
        OutputFormat::Text => {
            let mut s = String::new();
            for r in &reports {
                s.push_str(&format!(
                    "{} (n = {}): {} <= q <= {}, family {}\n",
                    r.graph6, r.order, r.bounds.q_lower.value, r.bounds.q_upper.value, r.family
                ));
                if let Some(v) = &r.verdict {
                    s.push_str(&format!(
                        "  verdict {} by {}, q(G) + q(G^c) in [{}, {}], target {}\n",
                        snake(&v.status),
                        snake(&v.rule),
                        v.sum_lower,
                        v.sum_bound,
                        v.target
                    ));
                }
            }
            s
        }
    })
}

fn certify_trees(graphs: &[Graph], cfg: &ToleranceConfig, fmt: OutputFormat) -> Result<Rendered, Failure> {
    let results = graphs.iter().map(|t| certify_tree_complement(t, cfg)).collect::<Result<Vec<_>, _>>()?;
    ok(match fmt {
        OutputFormat::Json if results.len() == 1 => json(&results[0]),
        OutputFormat::Json => json(&results),
        OutputFormat::Csv => {
            let mut s = String::from("graph6,tag,closed_form,certified,q_lower,q_upper\n");
            for r in &results {
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.tree_graph6,
                    r.tag,
                    r.closed_form.value,
                    r.certificate.is_some(),
                    r.bounds.q_lower.value,
                    r.bounds.q_upper.value
                ));
            }
            s
        }
        OutputFormat::Text => {
            let mut s = String::new();
            for r in &results {
                s.push_str(&format!("{} ({}): q(T^c) = {}\n", r.tree_graph6, r.tag, r.closed_form.value));
                match &r.certificate {
                    Some(c) => s.push_str(&c.matrix.to_text()),
                    None => s.push_str(&format!(
                        "  no matrix; bounds {} <= q <= {}\n",
                        r.bounds.q_lower.value, r.bounds.q_upper.value
                    )),
                }
            }
            s
        }
    })
}

#[derive(Serialize)]
struct BankVerification {
    name: String,
    graph6: String,
    claimed_q: usize,
    check: CertificateCheck,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
}

fn bank(action: &BankAction, cfg: &ToleranceConfig, fmt: OutputFormat) -> Result<Rendered, Failure> {
    let entries = certificate_bank();
    match action {
        BankAction::List => {
            let rows: Vec<_> = entries
                .iter()
                .map(|c| serde_json::json!({
                    "name": c.name,
                    "graph6": c.graph.to_graph6(),
                    "order": c.graph.order(),
                    "claimed_q": c.claimed_q,
                    "property_level": c.property_level,
                    "orthogonal": c.orthogonal,
                }))
                .collect();
            ok(match fmt {
                OutputFormat::Json => json(&rows),
                _ => {
                    let mut s = String::from(if fmt == OutputFormat::Csv { "name,graph6,claimed_q\n" } else { "" });
                    for c in &entries {
                        let sep = if fmt == OutputFormat::Csv { "," } else { "  " };
                        s.push_str(&format!("{}{sep}{}{sep}{}\n", c.name, c.graph.to_graph6(), c.claimed_q));
                    }
                    s
                }
            })
        }
        BankAction::Verify => {
            let mut rows = Vec::new();
            for mut c in entries {
                let check = c.verify(cfg)?;
                let reason = match &c.verified {
                    distinctq::constructions::Verification::Failed(r) => Some(r.clone()),
                    _ => None,
                };
                rows.push(BankVerification { name: c.name.clone(), graph6: c.graph.to_graph6(), claimed_q: c.claimed_q, check, reason });
            }
            let passed = rows.iter().all(|r| r.check.passed);
            let notes = rows.iter().filter_map(|r| r.reason.as_ref().map(|why| format!("{}: {why}", r.name))).collect();
            let body = match fmt {
                OutputFormat::Json => json(&rows),
                _ => {
                    let mut s = String::from(if fmt == OutputFormat::Csv { "name,passed,q_found,involution_defect\n" } else { "" });
                    for r in &rows {
                        let defect = r.check.involution_defect.map(|d| format!("{d:e}")).unwrap_or_default();
                        if fmt == OutputFormat::Csv {
                            s.push_str(&format!("{},{},{},{defect}\n", r.name, r.check.passed, r.check.q_found));
                        } else {
                            s.push_str(&format!("{}: {} (q = {})\n", r.name, if r.check.passed { "pass" } else { "FAIL" }, r.check.q_found));
                        }
                    }
                    s
                }
            };
            Ok(Rendered { body, passed, notes })
        }
        BankAction::Export { dir } => {
            let index = export_bank(dir, &entries).map_err(|e| Failure::Usage(format!("--dir {}: {e}", dir.display())))?;
            ok(match fmt {
                OutputFormat::Json => json(&index),
                _ => format!("wrote {} matrices to {}\n", index.len(), dir.display()),
            })
        }
    }
}
