//! `lig`: build left-ideal relation graphs over M_n(GF(q)), compute their
//! invariants and work with their automorphisms.
//!
//! Exit codes: 0 success, 1 mismatch or failed verification, 2 usage error,
//! malformed input or a size cap exceeded.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use lig_core::aut::{self, Verification};
use lig_core::counting::{pgl_order, CountReport};
use lig_core::format::{self, field_header};
use lig_core::invariants::InvariantReport;
use lig_core::{seeded_rng, Field, RelationGraph, DEFAULT_VERTEX_CAP};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] lig_core::Error),
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("{0}")]
    Usage(String),
    /// Already reported; carries the exit code.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(lig_core::Error::Decomposition(_)) | CliError::Failed(_) => 1,
            _ => 2,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "lig", version, about = "Left-ideal relation graphs over full matrix rings M_n(GF(q))")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Dot,
    Edges,
    JsonKv,
}

#[derive(Args, Debug, Clone)]
struct Config {
    /// Matrix size.
    #[arg(long)]
    n: usize,
    /// Field characteristic.
    #[arg(long)]
    p: u32,
    /// Field degree; q = p^m.
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// Monic irreducible modulus, coefficients from the constant term up,
    /// comma separated (e.g. 1,1,1 for x^2+x+1).
    #[arg(long)]
    modulus: Option<String>,
    /// Use the directed graph (default).
    #[arg(long, conflicts_with = "undirected")]
    directed: bool,
    /// Use the undirected graph.
    #[arg(long)]
    undirected: bool,
    /// Seed for every random choice (ChaCha8).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest vertex count that may be built.
    #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
    cap: u64,
    /// Output file; standard output when absent. Written atomically.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

impl Config {
    fn field(&self) -> CliResult<Field> {
        let modulus = match &self.modulus {
            Some(s) => Some(
                s.split(',')
                    .map(|t| t.trim().parse::<u32>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| CliError::Usage(format!("--modulus {s:?} is not a comma-separated list")))?,
            ),
            None => None,
        };
        if self.n == 0 {
            return Err(CliError::Usage("--n must be at least 1".into()));
        }
        Ok(Field::new(self.p, self.m, modulus.as_deref())?)
    }

    fn directed(&self) -> bool {
        !self.undirected
    }

    /// Resolved configuration, echoed in every output.
    fn echo(&self, field: &Field) -> String {
        format!(
            "n={} {} q={} directed={} seed={} cap={}",
            self.n,
            field_header(field.spec()),
            field.q(),
            self.directed(),
            self.seed,
            self.cap
        )
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Counting tables: subspaces, fibers, rank classes, predicted degrees.
    RingInfo(Config),
    /// Write the full (or quotient) graph as DOT, an edge list or JSON.
    BuildGraph {
        #[command(flatten)]
        cfg: Config,
        /// Build the graph on ideal classes instead of matrices.
        #[arg(long)]
        quotient: bool,
    },
    /// Invariants next to their closed forms; exit 1 on any mismatch.
    Invariants(Config),
    /// Automorphism tools.
    #[command(subcommand)]
    Aut(AutCommand),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SampleKind {
    /// phi_P . upsilon_t . sigma with random P, t and sigma.
    Standard,
    Phi,
    Upsilon,
    Sigma,
    /// Within-rank shuffle, n = 2 only.
    Rho,
}

#[derive(Subcommand, Debug)]
enum AutCommand {
    /// Write a seeded random automorphism as a permutation file.
    Sample {
        #[command(flatten)]
        cfg: Config,
        #[arg(long, value_enum, default_value_t = SampleKind::Standard)]
        kind: SampleKind,
    },
    /// Check that a permutation file preserves every arc.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        cap: u64,
    },
    /// Factor a permutation file as phi_P . upsilon_t . sigma (n >= 3), or
    /// split it by rank class (n = 2).
    Decompose {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        cap: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rebuild the permutation file from a decomposition report.
    Recompose {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        cap: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact automorphism group order of the quotient graph, and of the full graph.
    CountQuotient(Config),
}

/// Writes to `path` via a temporary file in the same directory, or to stdout.
fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => {
            let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(text.as_bytes())?;
            tmp.persist(path).map_err(|e| e.error)?;
        }
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn ring_info(cfg: &Config) -> CliResult<()> {
    let field = cfg.field()?;
    let r = CountReport::new(cfg.n, field.q() as u64);
    let text = if cfg.format == Some(OutputFormat::JsonKv) {
        let ranks: Vec<_> = (0..=cfg.n)
            .map(|k| {
                json!({
                    "rank": k,
                    "subspaces": r.subspace_counts[k].to_string(),
                    "fiber_size": r.fiber_sizes[k].to_string(),
                    "rank_class_size": r.rank_class_sizes[k].to_string(),
                    "in_degree": r.degrees[k].in_degree.to_string(),
                    "out_degree": r.degrees[k].out_degree.to_string(),
                    "degree": r.degrees[k].undirected.to_string(),
                })
            })
            .collect();
        let doc = json!({
            "config": cfg.echo(&field),
            "ranks": ranks,
            "quotient_vertices": r.quotient_vertex_count().to_string(),
            "matrix_count": r.matrix_count.to_string(),
            "gl_order": r.gl_order.to_string(),
            "pgl_order": pgl_order(cfg.n, field.q() as u64).to_string(),
            "total_check": r.total_matches(),
        });
        format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable"))
    } else {
        let mut s = format!("# ring-info {}\n", cfg.echo(&field));
        s.push_str(&format!(
            "{:>4}  {:>10}  {:>14}  {:>16}  {:>14}  {:>14}  {:>14}\n",
            "rank", "subspaces", "fiber", "rank class", "in-degree", "out-degree", "degree"
        ));
        for k in 0..=cfg.n {
            s.push_str(&format!(
                "{:>4}  {:>10}  {:>14}  {:>16}  {:>14}  {:>14}  {:>14}\n",
                k,
                r.subspace_counts[k],
                r.fiber_sizes[k],
                r.rank_class_sizes[k],
                r.degrees[k].in_degree,
                r.degrees[k].out_degree,
                r.degrees[k].undirected
            ));
        }
        s.push_str(&format!("quotient vertices: {}\n", r.quotient_vertex_count()));
        s.push_str(&format!("matrices: {}\n", r.matrix_count));
        s.push_str(&format!("|GL(n,q)|: {}\n", r.gl_order));
        s.push_str(&format!("sum of subspaces x fibers equals q^(n^2): {}\n", r.total_matches()));
        if cfg.n >= 2 {
            let n = cfg.n;
            s.push_str(&format!(
                "predicted: clique={} chromatic={} girth=3 diameter=2 radius=1 domination=1 sdim={} eulerian=false\n",
                n + 1,
                n + 1,
                &r.matrix_count - (n as u64 + 1)
            ));
        }
        s
    };
    emit(cfg.out.as_deref(), &text)
}

fn build_graph(cfg: &Config, quotient: bool) -> CliResult<()> {
    let field = cfg.field()?;
    let g = if quotient {
        RelationGraph::quotient(cfg.n, &field, cfg.directed(), cfg.cap)?
    } else {
        RelationGraph::full(cfg.n, &field, cfg.directed(), cfg.cap)?
    };
    let text = match cfg.format.unwrap_or(OutputFormat::Edges) {
        OutputFormat::Edges => g.edge_list_string(),
        OutputFormat::Dot => g.dot_string(),
        OutputFormat::JsonKv => {
            let edges: Vec<[usize; 2]> = g
                .edge_list_string()
                .lines()
                .skip(1)
                .map(|l| {
                    let (u, v) = l.split_once(' ').expect("edge line");
                    [u.parse().expect("vertex"), v.parse().expect("vertex")]
                })
                .collect();
            let ranks: Vec<usize> = (0..g.vertex_count()).map(|v| g.rank_of(v)).collect();
            let doc = json!({
                "config": cfg.echo(&field),
                "header": g.header(),
                "kind": g.kind().as_str(),
                "vertices": g.vertex_count(),
                "edges": edges,
                "ranks": ranks,
            });
            format!("{}\n", serde_json::to_string(&doc).expect("serializable"))
        }
    };
    eprintln!("# build-graph {}", cfg.echo(&field));
    emit(cfg.out.as_deref(), &text)
}

fn invariants(cfg: &Config) -> CliResult<()> {
    let field = cfg.field()?;
    let g = RelationGraph::full(cfg.n, &field, false, cfg.cap)?;
    let report = InvariantReport::compute(&g)?;
    let text = if cfg.format == Some(OutputFormat::JsonKv) {
        let doc = json!({ "config": cfg.echo(&field), "report": report, "rows": report.rows() });
        format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable"))
    } else {
        format!("# invariants {} read_as=undirected\n{}", cfg.echo(&field), report.to_text())
    };
    emit(cfg.out.as_deref(), &text)?;
    if report.all_match() {
        Ok(())
    } else {
        Err(CliError::Failed("computed invariants disagree with the closed forms".into()))
    }
}

fn sample(cfg: &Config, kind: SampleKind) -> CliResult<()> {
    let field = cfg.field()?;
    let g = RelationGraph::full(cfg.n, &field, true, cfg.cap)?;
    let mut rng = seeded_rng(cfg.seed);
    let f = match kind {
        SampleKind::Standard => aut::random_standard(&g, &mut rng)?.composite,
        SampleKind::Phi => aut::phi(&lig_core::matrix::random_invertible(cfg.n, &field, &mut rng), &field)?,
        SampleKind::Upsilon => aut::random_upsilon(cfg.n, &field, &mut rng)?,
        SampleKind::Sigma => aut::random_sigma(&g, &mut rng)?,
        SampleKind::Rho => aut::random_rho(&g, &mut rng)?.1,
    };
    eprintln!("# aut sample kind={kind:?} {}", cfg.echo(&field));
    emit(cfg.out.as_deref(), &format::write_permutation(&f, true))
}

fn load_permutation(path: &Path, cap: u64) -> CliResult<(format::PermutationFile, RelationGraph)> {
    let pf = format::parse_permutation(&read(path)?)?;
    let f = &pf.automorphism;
    let g = RelationGraph::full(f.n(), f.field(), true, cap)?;
    Ok((pf, g))
}

fn verify(file: &Path, cap: u64) -> CliResult<()> {
    let (pf, g) = load_permutation(file, cap)?;
    let f = &pf.automorphism;
    println!("# aut verify n={} {} vertices={}", f.n(), field_header(f.field().spec()), f.len());
    match f.verify(&g)? {
        Verification::Automorphism => {
            println!("automorphism: yes");
            println!("rank preserved: {}", f.preserves_rank());
            Ok(())
        }
        Verification::Violation { u, v, arc_before, arc_after } => {
            let arrow = |b: bool| if b { "->" } else { "-/->" };
            println!("automorphism: no");
            println!(
                "witness: {u} {} {v} but {} {} {}",
                arrow(arc_before),
                f.apply(u),
                arrow(arc_after),
                f.apply(v)
            );
            Err(CliError::Failed("not an automorphism".into()))
        }
    }
}

fn decompose(file: &Path, cap: u64, out: Option<&Path>) -> CliResult<()> {
    let (pf, g) = load_permutation(file, cap)?;
    let f = &pf.automorphism;
    if !f.verify(&g)?.is_automorphism() {
        return Err(CliError::Failed("input is not an automorphism".into()));
    }
    let text = if f.n() == 2 {
        let split = aut::decompose_n2(f, &g)?;
        let mut s = format!("# rank-split n=2 {} vertices={}\n", field_header(f.field().spec()), f.len());
        for (r, pairs) in split.iter().enumerate() {
            let mut perm: Vec<usize> = (0..f.len()).collect();
            for &(a, b) in pairs {
                perm[a] = b;
            }
            let cycles: String =
                aut::cycles(&perm).iter().map(|c| format!("({})", join(c))).collect();
            s.push_str(&format!("rank {r} cycles={cycles}\n"));
        }
        s
    } else {
        format::write_decomposition(&aut::decompose(f, &g)?, &g)
    };
    emit(out, &text)
}

fn join(c: &[usize]) -> String {
    c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn recompose(file: &Path, cap: u64, out: Option<&Path>) -> CliResult<()> {
    let df = format::parse_decomposition(&read(file)?)?;
    let g = RelationGraph::full(df.n, &df.field, true, cap)?;
    let d = df.into_decomposition(&g)?;
    emit(out, &format::write_permutation(&d.recompose()?, true))
}

fn count_quotient(cfg: &Config) -> CliResult<()> {
    let field = cfg.field()?;
    let full = aut::full_aut_order(cfg.n, &field)?;
    let mut s = format!("# aut count-quotient {}\n", cfg.echo(&field));
    s.push_str(&format!("quotient: {}\n", full.quotient_order));
    if cfg.n >= 3 {
        let predicted = pgl_order(cfg.n, field.q() as u64) * field.m();
        s.push_str(&format!("|PGL(n,q)| * m: {predicted}\n"));
    }
    s.push_str(&format!("full (class product): {} = {}\n", full.class_product_expression(), full.class_product));
    s.push_str(&format!("full (exact): {} = {}\n", full.exact_expression(), full.exact));
    emit(cfg.out.as_deref(), &s)
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::RingInfo(cfg) => ring_info(&cfg),
        Command::BuildGraph { cfg, quotient } => build_graph(&cfg, quotient),
        Command::Invariants(cfg) => invariants(&cfg),
        Command::Aut(AutCommand::Sample { cfg, kind }) => sample(&cfg, kind),
        Command::Aut(AutCommand::Verify { file, cap }) => verify(&file, cap),
        Command::Aut(AutCommand::Decompose { file, cap, out }) => decompose(&file, cap, out.as_deref()),
        Command::Aut(AutCommand::Recompose { file, cap, out }) => recompose(&file, cap, out.as_deref()),
        Command::Aut(AutCommand::CountQuotient(cfg)) => count_quotient(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
