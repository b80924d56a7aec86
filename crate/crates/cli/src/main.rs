use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use qws_core::graph::Graph;
use qws_core::grover_support::{support_spectrum, verify_cube_identity, zeta_poles};
use qws_core::operators::WeightScheme;
use qws_core::oracle::{any_failed, builtin_corpus, reports_to_csv, run_theorem_suite, CaseReport, NamedGraph, Status, Which};
use qws_core::quantum_graph::{qgraph_spectrum, scan_nontrivial_k, QGraphParams};
use qws_core::spectral_map::mapped_spectrum;
use qws_core::spectrum::fmt_f64;
use qws_core::szegedy::{
    build_setting1, build_setting2, reversible_vertex_measure, uniform_setting1_weights, uniform_setting2_weights,
    vertex_distribution, QuantumWalk, WalkState,
};

#[derive(Parser)]
#[command(name = "qws", version, about = "Quantum walks on finite graphs: spectra, simulation, checks")]
struct Cli {
    /// Emit one JSON document on stdout instead of CSV or text
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the graph profile
    Info { graph: PathBuf },
    /// Eigenvalues of a walk operator, with provenance
    Spectrum(SpectrumArgs),
    /// Simulate a walk from a single arc and print vertex probabilities
    Walk(WalkArgs),
    /// Quantum-graph walk spectrum or k scan
    Qgraph(QgraphArgs),
    /// Positive supports of Grover powers, cube identity, zeta poles
    Support(SupportArgs),
    /// Run the theorem checks over a corpus
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Construction {
    Setting1,
    Setting2,
    Grover,
    Support,
    Qgraph,
}

#[derive(Args)]
struct SpectrumArgs {
    graph: PathBuf,
    /// Shorthand for --construction setting1 / setting2
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    setting: Option<u8>,
    #[arg(long, value_enum)]
    construction: Option<Construction>,
    /// "uniform" or a CSV file with columns arc,re[,im]
    #[arg(long, default_value = "uniform")]
    weights: String,
    /// Power for --construction support
    #[arg(long, default_value_t = 1)]
    j: u32,
    #[arg(long)]
    k: Option<f64>,
    #[arg(long = "L")]
    length: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
}

#[derive(Args)]
struct WalkArgs {
    graph: PathBuf,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    setting: u8,
    #[arg(long, default_value = "uniform")]
    weights: String,
    #[arg(long, default_value_t = 10)]
    steps: usize,
    /// Arc carrying the initial unit state
    #[arg(long, default_value_t = 0)]
    start_arc: usize,
}

#[derive(Args)]
struct QgraphArgs {
    graph: PathBuf,
    #[arg(long)]
    k: Option<f64>,
    #[arg(long = "L")]
    length: f64,
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    /// k_min:k_max:grid
    #[arg(long)]
    scan: Option<String>,
}

#[derive(Args)]
struct SupportArgs {
    graph: PathBuf,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=3))]
    j: u32,
    /// Check (U³)⁺ = (U⁺)³ + ᵀU⁺ exactly
    #[arg(long)]
    verify_identity: bool,
    /// Emit zeta poles instead of eigenvalues
    #[arg(long)]
    poles: bool,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, conflicts_with = "corpus")]
    builtin: bool,
    /// Directory of edge-list files
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// spectral-map | szegedy | qgraph | supports | all
    #[arg(long, default_value = "all")]
    which: String,
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    /// Per-case CSV output
    #[arg(long)]
    csv: Option<PathBuf>,
}

/// Invalid flag combinations detected after parsing; exit code 2.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Computation succeeded but a check it ran did not; exit code 1.
#[derive(Debug)]
struct ChecksFailed;

impl std::fmt::Display for ChecksFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("one or more checks failed")
    }
}

impl std::error::Error for ChecksFailed {}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(v) = std::env::var("QWS_THREADS") else {
        return Ok(());
    };
    let n: usize = v.parse().map_err(|_| usage(format!("QWS_THREADS must be a positive integer, got {v:?}")))?;
    if n == 0 {
        return Err(usage("QWS_THREADS must be positive"));
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    match &cli.command {
        Command::Info { graph } => info(cli, graph),
        Command::Spectrum(a) => spectrum(cli, a),
        Command::Walk(a) => walk(cli, a),
        Command::Qgraph(a) => qgraph(cli, a),
        Command::Support(a) => support(cli, a),
        Command::Verify(a) => verify(cli, a),
    }
}

fn load_graph(path: &Path) -> anyhow::Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Graph::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn print_json<T: Serialize>(value: &T) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn info(cli: &Cli, path: &Path) -> anyhow::Result<()> {
    let profile = load_graph(path)?.profile();
    if cli.json {
        print_json(&profile)
    } else {
        println!("{profile}");
        Ok(())
    }
}

/// Per-arc weights from a CSV with header and columns arc,re[,im]. Every
/// arc must appear once.
fn read_weight_csv(path: &Path, num_arcs: usize) -> anyhow::Result<Vec<Complex64>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut out: Vec<Option<Complex64>> = vec![None; num_arcs];
    for (idx, line) in text.lines().enumerate().skip(1) {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let bad = || anyhow!("{}:{}: expected arc,re[,im]", path.display(), idx + 1);
        if !(2..=3).contains(&fields.len()) {
            return Err(bad());
        }
        let arc: usize = fields[0].parse().map_err(|_| bad())?;
        let re: f64 = fields[1].parse().map_err(|_| bad())?;
        let im: f64 = if fields.len() == 3 { fields[2].parse().map_err(|_| bad())? } else { 0.0 };
        let slot = out.get_mut(arc).ok_or_else(|| anyhow!("{}:{}: arc {arc} out of range", path.display(), idx + 1))?;
        if slot.is_some() {
            bail!("{}:{}: arc {arc} listed twice", path.display(), idx + 1);
        }
        *slot = Some(Complex64::new(re, im));
    }
    out.into_iter()
        .enumerate()
        .map(|(a, w)| w.ok_or_else(|| anyhow!("{}: no weight for arc {a}", path.display())))
        .collect()
}

fn setting1_weights(g: &Graph, spec: &str) -> anyhow::Result<Vec<Complex64>> {
    if spec == "uniform" {
        Ok(uniform_setting1_weights(g))
    } else {
        read_weight_csv(Path::new(spec), g.num_arcs())
    }
}

/// (w₂, m_V); for a weight file m_V is derived from detailed balance.
fn setting2_weights(g: &Graph, spec: &str) -> anyhow::Result<(Vec<f64>, Vec<f64>)> {
    if spec == "uniform" {
        return Ok(uniform_setting2_weights(g));
    }
    let w = read_weight_csv(Path::new(spec), g.num_arcs())?;
    if let Some(a) = w.iter().position(|z| z.im != 0.0) {
        bail!("setting 2 weights must be real (arc {a})");
    }
    let w2: Vec<f64> = w.iter().map(|z| z.re).collect();
    let mv = reversible_vertex_measure(g, &w2)?;
    Ok((w2, mv))
}

fn szegedy_scheme(g: &Graph, setting: u8, weights: &str) -> anyhow::Result<WeightScheme> {
    Ok(if setting == 1 {
        build_setting1(g, &setting1_weights(g, weights)?)?.0
    } else {
        let (w2, mv) = setting2_weights(g, weights)?;
        build_setting2(g, &w2, &mv)?.0
    })
}

fn spectrum(cli: &Cli, a: &SpectrumArgs) -> anyhow::Result<()> {
    let construction = match (a.setting, a.construction) {
        (Some(_), Some(_)) => return Err(usage("give either --setting or --construction, not both")),
        (Some(1), None) => Construction::Setting1,
        (Some(_), None) => Construction::Setting2,
        (None, Some(c)) => c,
        (None, None) => return Err(usage("one of --setting or --construction is required")),
    };
    if construction == Construction::Support && !(1..=3).contains(&a.j) {
        return Err(usage("--j must be 1, 2 or 3"));
    }
    let g = load_graph(&a.graph)?;
    match construction {
        Construction::Setting1 | Construction::Setting2 | Construction::Grover => {
            let ws = match construction {
                Construction::Setting1 => szegedy_scheme(&g, 1, &a.weights)?,
                Construction::Setting2 => szegedy_scheme(&g, 2, &a.weights)?,
                _ => build_setting1(&g, &uniform_setting1_weights(&g))?.0,
            };
            let mapped = mapped_spectrum(&g, &ws)?;
            if !mapped.formula_agrees() {
                log::warn!(
                    "birth counts by rank ({}, {}) differ from |E|-|V|+m ({}, {})",
                    mapped.birth_plus,
                    mapped.birth_minus,
                    mapped.formula_birth_plus,
                    mapped.formula_birth_minus
                );
            }
            if cli.json {
                print_json(&mapped)
            } else {
                print!("{}", mapped.to_spectrum().to_csv());
                Ok(())
            }
        }
        Construction::Support => {
            let s = support_spectrum(&g, a.j)?;
            for n in &s.notes {
                log::warn!("{n}");
            }
            if !s.comparison.passed() {
                log::warn!("closed form disagrees with the eigensolver (max error {:e})", s.comparison.max_error);
            }
            if cli.json {
                print_json(&s)
            } else {
                print!("{}", s.claimed.to_csv());
                Ok(())
            }
        }
        Construction::Qgraph => {
            let (Some(k), Some(l)) = (a.k, a.length) else {
                return Err(usage("--construction qgraph needs --k and --L"));
            };
            let s = qgraph_spectrum(&g, &QGraphParams::new(&g, k, l, a.alpha)?)?;
            if cli.json {
                print_json(&s)
            } else {
                print!("{}", s.spectrum.to_csv());
                Ok(())
            }
        }
    }
}

/// Kept for the JSON mirror of `walk`.
#[derive(Serialize)]
struct WalkRow {
    step: usize,
    vertex: usize,
    probability: f64,
}

fn walk(cli: &Cli, a: &WalkArgs) -> anyhow::Result<()> {
    let g = load_graph(&a.graph)?;
    if a.start_arc >= g.num_arcs() {
        return Err(usage(format!("--start-arc {} out of range ({} arcs)", a.start_arc, g.num_arcs())));
    }
    let w = if a.setting == 1 {
        QuantumWalk::setting1(&g, &setting1_weights(&g, &a.weights)?)?
    } else {
        let (w2, mv) = setting2_weights(&g, &a.weights)?;
        QuantumWalk::setting2(&g, &w2, &mv)?
    };
    let start = WalkState::arc_delta(&w.scheme, a.start_arc)?;
    let states = w.run(&start.amplitudes, a.steps)?;
    let mut rows = Vec::new();
    for (step, s) in states.iter().enumerate() {
        for (vertex, &probability) in vertex_distribution(&g, s).0.iter().enumerate() {
            rows.push(WalkRow { step, vertex, probability });
        }
    }
    if cli.json {
        return print_json(&rows);
    }
    println!("step,vertex,probability");
    for r in rows {
        println!("{},{},{}", r.step, r.vertex, fmt_f64(r.probability));
    }
    Ok(())
}

fn parse_scan(spec: &str) -> anyhow::Result<(f64, f64, usize)> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || usage(format!("--scan expects k_min:k_max:grid, got {spec:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    Ok((parts[0].parse().map_err(|_| bad())?, parts[1].parse().map_err(|_| bad())?, parts[2].parse().map_err(|_| bad())?))
}

fn qgraph(cli: &Cli, a: &QgraphArgs) -> anyhow::Result<()> {
    match (&a.scan, a.k) {
        (Some(_), Some(_)) => Err(usage("give either --k or --scan, not both")),
        (None, None) => Err(usage("one of --k or --scan is required")),
        (None, Some(k)) => {
            let g = load_graph(&a.graph)?;
            let s = qgraph_spectrum(&g, &QGraphParams::new(&g, k, a.length, a.alpha)?)?;
            if cli.json {
                print_json(&s)
            } else {
                print!("{}", s.spectrum.to_csv());
                Ok(())
            }
        }
        (Some(spec), None) => {
            let (k_min, k_max, grid) = parse_scan(spec)?;
            let g = load_graph(&a.graph)?;
            let scan = scan_nontrivial_k(&g, a.length, a.alpha, k_min, k_max, grid)?;
            if cli.json {
                return print_json(&scan);
            }
            println!("k_root,multiplicity,source");
            for r in &scan.roots {
                println!("{},{},scan", fmt_f64(r.k), r.multiplicity);
            }
            for f in scan.families.iter().filter(|f| f.confirmed) {
                let source = match f.family {
                    qws_core::quantum_graph::KFamily::Even => "family_2n",
                    qws_core::quantum_graph::KFamily::Odd => "family_2n_plus_1",
                };
                println!("{},{},{}", fmt_f64(f.k), f.multiplicity, source);
            }
            Ok(())
        }
    }
}

fn support(cli: &Cli, a: &SupportArgs) -> anyhow::Result<()> {
    if (a.svg.is_some() || a.csv.is_some()) && !a.poles {
        return Err(usage("--svg and --csv need --poles"));
    }
    let g = load_graph(&a.graph)?;
    if a.verify_identity {
        let r = verify_cube_identity(&g)?;
        if cli.json {
            print_json(&r)?;
        } else {
            println!(
                "cube identity: {} (girth {}, {} mismatched entries, {})",
                if r.holds { "holds" } else { "fails" },
                r.girth,
                r.mismatched_entries,
                match r.role {
                    qws_core::grover_support::IdentityRole::Claimed => "hypothesis met",
                    qws_core::grover_support::IdentityRole::NegativeControl => "girth below 5, negative control",
                }
            );
        }
        if !a.poles {
            return Ok(());
        }
    }
    if a.poles {
        let z = zeta_poles(&g, a.j)?;
        let csv = z.to_csv();
        if let Some(p) = &a.csv {
            write_file(p, &csv)?;
        }
        if let Some(p) = &a.svg {
            write_file(p, &z.to_svg())?;
        }
        if cli.json {
            return print_json(&z);
        }
        if a.csv.is_none() {
            print!("{csv}");
        }
        return Ok(());
    }
    let s = support_spectrum(&g, a.j)?;
    for n in &s.notes {
        log::warn!("{n}");
    }
    if cli.json {
        print_json(&s)
    } else {
        print!("{}", s.claimed.to_csv());
        Ok(())
    }
}

fn load_corpus(dir: &Path) -> anyhow::Result<Vec<NamedGraph>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let name = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            Ok(NamedGraph::new(name, load_graph(&p)?))
        })
        .collect()
}

fn summary_table(reports: &[CaseReport]) -> String {
    let mut out = format!("{:<12} {:<16} {:<17} {:>10}  {}\n", "graph", "check", "status", "max_error", "detail");
    for r in reports {
        out.push_str(&format!(
            "{:<12} {:<16} {:<17} {:>10.2e}  {}\n",
            r.graph, r.check, r.status, r.max_error, r.detail
        ));
    }
    let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
    out.push_str(&format!(
        "{} cases: {} pass, {} fail, {} skipped, {} not applicable, {} negative controls\n",
        reports.len(),
        count(Status::Pass),
        count(Status::Fail),
        count(Status::Skipped),
        count(Status::NotApplicable),
        count(Status::NegativeControl)
    ));
    out
}

fn verify(cli: &Cli, a: &VerifyArgs) -> anyhow::Result<()> {
    let which: Which = a.which.parse().map_err(|e: qws_core::Error| usage(e.to_string()))?;
    if !(a.tol > 0.0) {
        return Err(usage("--tol must be positive"));
    }
    let corpus = match (&a.corpus, a.builtin) {
        (Some(dir), false) => load_corpus(dir)?,
        (None, true) => builtin_corpus(),
        _ => return Err(usage("one of --builtin or --corpus is required")),
    };
    let reports = run_theorem_suite(&corpus, which, a.tol);
    if let Some(p) = &a.csv {
        write_file(p, &reports_to_csv(&reports))?;
    }
    if cli.json {
        print_json(&reports)?;
    } else {
        print!("{}", summary_table(&reports));
    }
    if any_failed(&reports) {
        return Err(ChecksFailed.into());
    }
    Ok(())
}
