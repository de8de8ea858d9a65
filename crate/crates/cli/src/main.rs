//! `icx`: exact index-coding bounds, verified vector-linear code
//! construction, graph generation and certificate verification on
//! side-information graphs.
//!
//! Exit codes: 0 success, 1 failed verification, 2 input error, 3 budget
//! exceeded, 4 construction failure.

mod report;

use clap::{Args, Parser, Subcommand};
use icx_core::code::{self, BuildOptions, CodeCertificate, CodeError};
use icx_core::family::{family_report, FamilyHints};
use icx_core::geom::PointCloud;
use icx_core::gic::{self, GicError};
use icx_core::graph::{GraphError, SideInfoGraph};
use icx_core::lps::{BoundsError, FamilyPolicy, SubsetFamily};
use icx_core::oracles::{OracleError, OracleLimits};
use icx_core::rat::parse_rat;
use icx_core::simplex::LpError;
use icx_core::{gen, sig};
use report::{BoundOptions, BoundsReport};
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Budget(String),
    Build(String),
    VerifyFailed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::VerifyFailed(_) => 1,
            CliError::Input(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Build(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Budget(m) | CliError::Build(m)
            | CliError::VerifyFailed(m) => m,
        }
    }

    pub fn from_oracle(e: OracleError) -> Self {
        match e {
            OracleError::Budget { .. } | OracleError::SizeLimit { .. } => {
                CliError::Budget(e.to_string())
            }
            OracleError::Graph(_) => CliError::Input(e.to_string()),
        }
    }

    pub fn from_bounds(e: BoundsError) -> Self {
        match e {
            BoundsError::Graph(ref g) => match g {
                GraphError::DirectedInput { .. } => CliError::Input(e.to_string()),
                _ => CliError::Input(e.to_string()),
            },
            BoundsError::Oracle(o) => Self::from_oracle(o),
            BoundsError::Lp(ref l) => match l {
                LpError::HalfIntegralityViolated { .. } => CliError::Build(e.to_string()),
                _ => CliError::Input(e.to_string()),
            },
            BoundsError::NotOptimal { .. } => CliError::Build(e.to_string()),
        }
    }

    pub fn from_code(e: CodeError) -> Self {
        match e {
            CodeError::DenominatorCap { .. } => CliError::Budget(e.to_string()),
            CodeError::FieldSearchExhausted { .. } => CliError::Build(e.to_string()),
            CodeError::Bounds(inner) => Self::from_bounds(*inner),
            CodeError::CoverNotDisjoint { .. } | CodeError::CoverIncomplete { .. } => {
                CliError::Input(e.to_string())
            }
            other => CliError::Input(other.to_string()),
        }
    }

    pub fn from_gic(e: GicError) -> Self {
        match e {
            GicError::Violation(_) | GicError::DegenerateVector { .. } => {
                CliError::Build(e.to_string())
            }
            GicError::Bounds(inner) => Self::from_bounds(*inner),
            other => CliError::Input(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "icx", version, about = "Exact index coding bounds and verified code constructions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute exact bounds on the broadcast rate of a .sig graph.
    Bounds(BoundsArgs),
    /// Build and verify a vector-linear index code certificate.
    Code(CodeArgs),
    /// Generate .sig graphs (cycles, cliques, random graphs, UDGs).
    #[command(subcommand)]
    Gen(GenCommand),
    /// Verify a certificate against a graph.
    Verify(VerifyArgs),
    /// Bounds + family report + optional code in one JSON.
    Report(ReportArgs),
}

#[derive(Args)]
struct CommonGraph {
    /// Input graph in .sig format.
    #[arg(short, long)]
    input: PathBuf,
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    graph: CommonGraph,
    /// Comma-separated bounds: alpha,mais,minrank2,chi,omega,fvc,fmm,fcp,
    /// fcc,alphaf2,fpcc,flc,lp,recursive,gic (alphaf accepts any k >= 2)
    #[arg(long, value_delimiter = ',')]
    enable: Vec<String>,
    /// Cap on subset sizes in partial-clique families.
    #[arg(long)]
    max_subset_size: Option<usize>,
    /// Override the exact-oracle size limits uniformly.
    #[arg(long)]
    oracle_limit: Option<usize>,
    /// Recursion depth for the recursive LP.
    #[arg(long, default_value_t = 2)]
    depth_cap: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// User-supplied GIC structure JSON files (for the gic bound).
    #[arg(long)]
    gic: Vec<PathBuf>,
    /// Suppress the timings block (byte-identical reruns).
    #[arg(long)]
    no_timings: bool,
    /// Write JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CodeArgs {
    #[command(flatten)]
    graph: CommonGraph,
    /// clique-cover | local-partial | recursive | gic
    #[arg(long)]
    scheme: String,
    /// Field modulus hint (prime); escalated automatically if too small.
    #[arg(long)]
    field: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    max_subset_size: Option<usize>,
    #[arg(long, default_value_t = 2)]
    depth_cap: usize,
    #[arg(long)]
    oracle_limit: Option<usize>,
    /// User-supplied GIC structure JSON (scheme gic).
    #[arg(long)]
    gic: Option<PathBuf>,
    /// Write the certificate JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Cycle graph C_n (undirected unless --directed).
    Cycle {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        directed: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bidirected clique K_n.
    Clique {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded random graph with arc probability p.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        directed: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Unit disk graph from a point file (lines `p <x> <y>`).
    Udg {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        radius: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    graph: CommonGraph,
    /// Certificate JSON to check.
    #[arg(long)]
    cert: PathBuf,
    /// Number of random decode tuples.
    #[arg(long, default_value_t = 20)]
    tuples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    graph: CommonGraph,
    /// Bounds to include; defaults to every bound applicable to the graph.
    #[arg(long, value_delimiter = ',')]
    enable: Vec<String>,
    /// Also build a certificate with this scheme and embed it.
    #[arg(long)]
    with_code: Option<String>,
    #[arg(long)]
    max_subset_size: Option<usize>,
    #[arg(long)]
    oracle_limit: Option<usize>,
    #[arg(long, default_value_t = 2)]
    depth_cap: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Assert the graph is a unit disk graph (activates UDG entries).
    #[arg(long)]
    udg: bool,
    /// Assert lambda-precision with this lambda (decimal or fraction).
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long)]
    no_timings: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn read_graph(path: &PathBuf) -> Result<SideInfoGraph, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    sig::parse_sig(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn limits_from(oracle_limit: Option<usize>) -> OracleLimits {
    let env_limit = std::env::var("ICX_ORACLE_LIMIT").ok().and_then(|v| v.parse().ok());
    match oracle_limit.or(env_limit) {
        Some(n) => OracleLimits::with_uniform_limit(n),
        None => OracleLimits::default(),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn load_gic(g: &SideInfoGraph, path: &PathBuf) -> Result<gic::GicStructure, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let json: gic::GicJson = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    gic::GicStructure::from_json(g, &json).map_err(CliError::from_gic)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Bounds(args) => {
            let g = read_graph(&args.graph.input)?;
            if args.enable.is_empty() {
                return Err(CliError::Input("no bounds requested via --enable".to_string()));
            }
            let mut gic_candidates = Vec::new();
            for path in &args.gic {
                gic_candidates.push(load_gic(&g, path)?);
            }
            let opts = BoundOptions {
                limits: limits_from(args.oracle_limit),
                max_subset_size: args.max_subset_size,
                depth_cap: args.depth_cap,
                gic_candidates,
            };
            let mut rep = BoundsReport::new(&g, args.seed, !args.no_timings);
            report::compute_bounds_into(&mut rep, &g, &args.enable, &opts)?;
            emit(&args.out, &rep.to_json())
        }
        Command::Code(args) => {
            let g = read_graph(&args.graph.input)?;
            let limits = limits_from(args.oracle_limit);
            let build = BuildOptions {
                seed: args.seed,
                field_hint: args.field,
                ..BuildOptions::default()
            };
            let cert = build_scheme(&g, &args, &limits, &build)?;
            if !cert.verified {
                return Err(CliError::Build("refusing to emit an unverified certificate".into()));
            }
            eprintln!("rate: {}", cert.rate);
            emit(&args.out, &serde_json::to_string_pretty(&cert).unwrap())
        }
        Command::Gen(cmd) => {
            let (text, out) = match cmd {
                GenCommand::Cycle { n, directed, out } => {
                    if n < 3 {
                        return Err(CliError::Input("cycle needs n >= 3".to_string()));
                    }
                    let g = if directed { gen::directed_cycle(n) } else { gen::cycle(n) };
                    (sig::write_sig(&g), out)
                }
                GenCommand::Clique { n, out } => {
                    if n == 0 {
                        return Err(CliError::Input("clique needs n >= 1".to_string()));
                    }
                    (sig::write_sig(&gen::clique(n)), out)
                }
                GenCommand::Random { n, p, seed, directed, out } => {
                    if n == 0 || !(0.0..=1.0).contains(&p) {
                        return Err(CliError::Input(
                            "random needs n >= 1 and p in [0, 1]".to_string(),
                        ));
                    }
                    let g = if directed {
                        gen::random_digraph(n, p, seed)
                    } else {
                        gen::random_undirected(n, p, seed)
                    };
                    (sig::write_sig(&g), out)
                }
                GenCommand::Udg { points, radius, out } => {
                    let text = fs::read_to_string(&points).map_err(|e| {
                        CliError::Input(format!("cannot read {}: {e}", points.display()))
                    })?;
                    let cloud = PointCloud::parse(&text)
                        .map_err(|e| CliError::Input(format!("{}: {e}", points.display())))?;
                    let r = parse_rat(&radius)
                        .filter(|r| r > &icx_core::rat::rzero())
                        .ok_or_else(|| {
                            CliError::Input(format!("invalid radius '{radius}'"))
                        })?;
                    (sig::write_sig(&icx_core::geom::generate_udg(&cloud, &r)), out)
                }
            };
            emit(&out, text.trim_end())
        }
        Command::Verify(args) => {
            let g = read_graph(&args.graph.input)?;
            let text = fs::read_to_string(&args.cert)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", args.cert.display())))?;
            let cert: CodeCertificate = serde_json::from_str(&text)
                .map_err(|e| CliError::Input(format!("{}: {e}", args.cert.display())))?;
            let verdict = code::verify_certificate(&g, &cert, args.tuples, args.seed)
                .map_err(|e| CliError::Input(e.to_string()))?;
            if verdict.passed() {
                eprintln!("certificate verifies at rate {}", cert.rate);
                Ok(())
            } else {
                Err(CliError::VerifyFailed(verdict.to_string()))
            }
        }
        Command::Report(args) => {
            let g = read_graph(&args.graph.input)?;
            let limits = limits_from(args.oracle_limit);
            let names = if args.enable.is_empty() {
                report::default_bound_names(&g)
            } else {
                args.enable.clone()
            };
            let opts = BoundOptions {
                limits: limits.clone(),
                max_subset_size: args.max_subset_size,
                depth_cap: args.depth_cap,
                gic_candidates: Vec::new(),
            };
            let mut rep = BoundsReport::new(&g, args.seed, !args.no_timings);
            report::compute_bounds_into(&mut rep, &g, &names, &opts)?;

            let lambda = match &args.lambda {
                Some(text) => Some(parse_rat(text).ok_or_else(|| {
                    CliError::Input(format!("invalid lambda '{text}'"))
                })?),
                None => None,
            };
            let hints = FamilyHints { chromatic: None, is_udg: args.udg, lambda };
            rep.family_report = Some(family_report(&g, &hints, &limits));

            if let Some(scheme) = &args.with_code {
                let code_args = CodeArgs {
                    graph: CommonGraph { input: args.graph.input.clone() },
                    scheme: scheme.clone(),
                    field: None,
                    seed: args.seed,
                    max_subset_size: args.max_subset_size,
                    depth_cap: args.depth_cap,
                    oracle_limit: args.oracle_limit,
                    gic: None,
                    out: None,
                };
                let build = BuildOptions { seed: args.seed, ..BuildOptions::default() };
                let cert = build_scheme(&g, &code_args, &limits, &build)?;
                rep.certificates.push(cert);
            }
            emit(&args.out, &rep.to_json())
        }
    }
}

fn build_scheme(
    g: &SideInfoGraph,
    args: &CodeArgs,
    limits: &OracleLimits,
    build: &BuildOptions,
) -> Result<CodeCertificate, CliError> {
    let policy = match args.max_subset_size {
        Some(s) => FamilyPolicy::MaxSize(s),
        None => FamilyPolicy::Auto,
    };
    match args.scheme.as_str() {
        "clique-cover" => {
            code::build_clique_cover_code(g, limits, build).map_err(CliError::from_code)
        }
        "local-partial" => {
            let fam = match args.max_subset_size {
                Some(s) => SubsetFamily::with_max_size(g, s, limits),
                None => SubsetFamily::default_for(g, limits),
            }
            .map_err(CliError::from_bounds)?;
            code::build_local_partial_code(g, &fam, build).map_err(CliError::from_code)
        }
        "recursive" => code::build_recursive_code(g, policy, args.depth_cap, limits, build)
            .map_err(CliError::from_code),
        "gic" => {
            let structure = match &args.gic {
                Some(path) => load_gic(g, path)?,
                None => gic::whole_graph_gic(g).ok_or_else(|| {
                    CliError::Build(
                        "no valid whole-graph GIC structure; supply one with --gic".to_string(),
                    )
                })?,
            };
            let p = args.field.unwrap_or_else(|| {
                icx_core::gf::next_prime(structure.n_inner().max(g.n()) as u64)
            });
            let mut cert =
                gic::gic_certificate(g, &structure, p, build.seed).map_err(CliError::from_gic)?;
            let verdict = code::verify_certificate(g, &cert, build.decode_tuples, build.seed)
                .map_err(CliError::from_code)?;
            if !verdict.passed() {
                return Err(CliError::Build(format!("gic certificate failed: {verdict}")));
            }
            cert.verified = true;
            Ok(cert)
        }
        other => Err(CliError::Input(format!(
            "unknown scheme '{other}' (expected clique-cover|local-partial|recursive|gic)"
        ))),
    }
}
