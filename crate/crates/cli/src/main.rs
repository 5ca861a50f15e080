use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use approxlab_core::cayley::{self, CheegerMode, ProbeRow};
use approxlab_core::group::{format_element, DEFAULT_BUDGET};
use approxlab_core::laws::{self, LawStatus, LAWS};
use approxlab_core::{
    build_cayley, certify_approx_group, doubling_stats, expand, parse_spec, power_cover, ruzsa_cover, run_law,
    verify_certificate, CoverCertificate, ElementSet, Error, GroupContext, GroupDescriptor, LawParams, QBoundMode,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "approxlab", version, about = "Exact computations with approximate groups")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Seed for randomized commands. A fresh one is drawn and recorded in the output when omitted.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Maximum number of elements any intermediate set may hold.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Size, doubling and tripling of a set.
    Stats {
        #[arg(long)]
        group: String,
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        tripling: bool,
    },
    /// Covering certificate for a symmetric set containing the identity.
    Certify {
        #[arg(long)]
        group: String,
        #[arg(long)]
        set: PathBuf,
        #[arg(long, value_enum)]
        kind: CertKind,
        /// Also certify A^m inside X^(m-1)A with the approximate-group witnesses.
        #[arg(long)]
        power: Option<u32>,
    },
    /// Expand a structured set to an element file.
    Gen {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        group: String,
        /// Bounds used for the Heisenberg Q set when the spec names no mode.
        #[arg(long, default_value = "printed")]
        l2_mode: QBoundMode,
    },
    /// Seeded law sweeps.
    Laws {
        #[command(subcommand)]
        command: LawsCommand,
    },
    /// Cayley graphs of finite groups.
    Cayley {
        #[command(subcommand)]
        command: CayleyCommand,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CertKind {
    Ruzsa,
    Approx,
}

#[derive(Subcommand)]
enum LawsCommand {
    Run {
        #[arg(long)]
        law: String,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        /// Comma-separated key=value pairs.
        #[arg(long, default_value = "")]
        params: String,
    },
    List,
}

#[derive(Args)]
struct GraphInput {
    #[arg(long)]
    group: String,
    /// Element file with a symmetric generating set.
    #[arg(long)]
    gens: PathBuf,
}

#[derive(Subcommand)]
enum CayleyCommand {
    /// Edge list to --out, vertex map to --map (default: <out>.vertices).
    Build {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        map: Option<PathBuf>,
    },
    Cheeger {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, conflicts_with = "heuristic")]
        exact: bool,
        #[arg(long)]
        heuristic: bool,
        #[arg(long, default_value_t = 20_000)]
        iters: u64,
    },
    /// Product growth of random generating sets of SL2(p).
    Probe {
        #[arg(long)]
        p: i64,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long)]
        epsilon: f64,
        /// Constant in the largeness alternative |A| >= |G|^(1 - c epsilon).
        #[arg(long, default_value_t = 1.0)]
        c: f64,
    },
}

enum Failure {
    Core(Error),
    Io(PathBuf, io::Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Ok,
    Violated,
    Budget,
}

type Run = Result<Outcome, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.global.jobs == 0 {
        eprintln!("error: --jobs must be at least 1");
        return ExitCode::from(2);
    }
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.global.jobs)
        .build_global()
    {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match dispatch(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Violated) => ExitCode::from(1),
        Ok(Outcome::Budget) => ExitCode::from(3),
        Err(f) => {
            let code = match &f {
                Failure::Core(e) if e.is_budget() => 3,
                _ => 2,
            };
            match f {
                Failure::Core(e) => eprintln!("error: {e}"),
                Failure::Io(p, e) => eprintln!("error: {}: {e}", p.display()),
                Failure::Usage(m) => eprintln!("error: {m}"),
            }
            ExitCode::from(code)
        }
    }
}

fn dispatch(cli: &Cli) -> Run {
    let g = &cli.global;
    match &cli.command {
        Command::Stats { group, set, tripling } => {
            let a = read_set(&context(group, g.budget)?, set)?;
            let s = doubling_stats(&a, *tripling)?;
            let (tn, td) = s
                .tripling
                .map_or((String::new(), String::new()), |t| (t.numer().to_string(), t.denom().to_string()));
            let mut w = csv::Writer::from_writer(Vec::new());
            write_row(&mut w, ["size", "doubling_num", "doubling_den", "tripling_num", "tripling_den", "symmetric", "has_identity"])?;
            write_row(
                &mut w,
                [
                    s.size.to_string(),
                    s.doubling.numer().to_string(),
                    s.doubling.denom().to_string(),
                    tn,
                    td,
                    s.symmetric.to_string(),
                    s.contains_identity.to_string(),
                ],
            )?;
            emit(g.out.as_deref(), &finish(w)?)?;
            Ok(Outcome::Ok)
        }
        Command::Certify { group, set, kind, power } => {
            let ctx = context(group, g.budget)?;
            let a = read_set(&ctx, set)?;
            let mut certs = vec![match kind {
                CertKind::Ruzsa => ruzsa_cover(&a)?,
                CertKind::Approx => certify_approx_group(&a)?,
            }];
            if let Some(m) = power {
                certs.push(power_cover(&a, *m)?);
            }
            let mut w = csv::Writer::from_writer(Vec::new());
            write_row(&mut w, ["kind", "K", "size", "witnesses", "verified"])?;
            let mut all = true;
            for cert in &certs {
                let ok = verified(&a, cert)?;
                all &= ok;
                let xs: Vec<String> = cert.witnesses.iter().map(|x| format_element(&ctx, x)).collect();
                write_row(
                    &mut w,
                    [
                        cert.kind.to_string(),
                        cert.bound.to_string(),
                        cert.size().to_string(),
                        xs.join(";"),
                        ok.to_string(),
                    ],
                )?;
            }
            emit(g.out.as_deref(), &finish(w)?)?;
            Ok(if all { Outcome::Ok } else { Outcome::Violated })
        }
        Command::Gen { spec, group, l2_mode } => {
            let ctx = context(group, g.budget)?;
            let s = parse_spec(&ctx, spec, *l2_mode)?;
            emit(g.out.as_deref(), expand(&ctx, &s)?.to_text().as_bytes())?;
            Ok(Outcome::Ok)
        }
        Command::Laws { command } => match command {
            LawsCommand::List => {
                let mut text = String::new();
                for (name, what, keys) in LAWS {
                    text.push_str(&format!("{name}\t{what}\tparams: {}\n", keys.join(" ")));
                }
                emit(g.out.as_deref(), text.as_bytes())?;
                Ok(Outcome::Ok)
            }
            LawsCommand::Run { law, trials, params } => {
                let params = LawParams::parse(params)?;
                let reports = run_law(law, &params, *trials, seed(g), g.budget)?;
                let mut buf = Vec::new();
                laws::write_csv(&mut buf, &reports).map_err(|e| Failure::Io(PathBuf::from("<report>"), e))?;
                emit(g.out.as_deref(), &buf)?;
                let [_, violated, _, budget] = laws::tally(&reports);
                eprintln!(
                    "{law}: {} rows, {violated} violated, {budget} over budget",
                    reports.len()
                );
                Ok(if reports.iter().any(|r| r.status == LawStatus::Violated) {
                    Outcome::Violated
                } else if budget > 0 {
                    Outcome::Budget
                } else {
                    Outcome::Ok
                })
            }
        },
        Command::Cayley { command } => run_cayley(g, command),
    }
}

fn run_cayley(g: &Global, command: &CayleyCommand) -> Run {
    match command {
        CayleyCommand::Build { input, map } => {
            let graph = read_graph(input, g.budget)?;
            emit(g.out.as_deref(), graph.edge_list().as_bytes())?;
            let map = map.clone().or_else(|| {
                g.out.as_ref().map(|o| {
                    let mut s = o.clone().into_os_string();
                    s.push(".vertices");
                    PathBuf::from(s)
                })
            });
            if let Some(path) = map {
                write_file(&path, graph.vertex_map().as_bytes())?;
            }
            Ok(Outcome::Ok)
        }
        CayleyCommand::Cheeger {
            input,
            exact,
            heuristic,
            iters,
        } => {
            let graph = read_graph(input, g.budget)?;
            let use_exact = *exact || (!*heuristic && graph.len() <= cayley::EXACT_LIMIT);
            let (mode, seed_field) = if use_exact {
                (CheegerMode::Exact, String::new())
            } else {
                let seed = seed(g);
                (CheegerMode::Heuristic { iters: *iters, seed }, seed.to_string())
            };
            let h = cayley::cheeger(&graph, mode)?;
            let mut w = csv::Writer::from_writer(Vec::new());
            write_row(&mut w, ["mode", "vertices", "lower", "upper", "witness_size", "witness", "seed"])?;
            let witness: Vec<String> = h.witness.iter().map(usize::to_string).collect();
            write_row(
                &mut w,
                [
                    if h.exact { "exact" } else { "heuristic" }.to_string(),
                    graph.len().to_string(),
                    h.lower.to_string(),
                    h.upper.to_string(),
                    h.witness.len().to_string(),
                    witness.join(";"),
                    seed_field,
                ],
            )?;
            emit(g.out.as_deref(), &finish(w)?)?;
            Ok(Outcome::Ok)
        }
        CayleyCommand::Probe { p, trials, epsilon, c } => {
            let seed = seed(g);
            let rows = cayley::sl2_growth_probe(*p, *trials, seed, *epsilon, *c)?;
            let mut text = format!("seed,{}\n", ProbeRow::HEADER);
            for r in &rows {
                text.push_str(&format!("{seed},{}\n", r.to_csv()));
            }
            emit(g.out.as_deref(), text.as_bytes())?;
            Ok(Outcome::Ok)
        }
    }
}

fn seed(g: &Global) -> u64 {
    g.seed.unwrap_or_else(|| {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_nanos() as u64)
    })
}

fn context(group: &str, budget: usize) -> Result<Arc<GroupContext>, Failure> {
    let desc: GroupDescriptor = group.parse()?;
    Ok(Arc::new(GroupContext::new(desc)?.with_budget(budget)))
}

fn read_set(ctx: &Arc<GroupContext>, path: &Path) -> Result<ElementSet, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))?;
    Ok(ElementSet::parse(ctx.clone(), &text)?)
}

fn read_graph(input: &GraphInput, budget: usize) -> Result<cayley::CayleyGraph, Failure> {
    let ctx = context(&input.group, budget)?;
    if !ctx.is_finite() {
        return Err(Failure::Usage(format!("{} is infinite", input.group)));
    }
    Ok(build_cayley(&read_set(&ctx, &input.gens)?)?)
}

fn verified(a: &ElementSet, cert: &CoverCertificate) -> Result<bool, Failure> {
    Ok(verify_certificate(a, cert)?.holds && cert.within_bound())
}

fn write_row<I, T>(w: &mut csv::Writer<Vec<u8>>, row: I) -> Result<(), Failure>
where
    I: IntoIterator<Item = T>,
    T: AsRef<[u8]>,
{
    w.write_record(row)
        .map_err(|e| Failure::Usage(format!("csv: {e}")))
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>, Failure> {
    w.into_inner()
        .map_err(|e| Failure::Usage(format!("csv: {e}")))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(path) => write_file(path, bytes),
        None => io::stdout()
            .write_all(bytes)
            .map_err(|e| Failure::Io(PathBuf::from("<stdout>"), e)),
    }
}
