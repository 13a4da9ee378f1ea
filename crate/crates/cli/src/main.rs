mod config;
mod render;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use spectra_graft::enumerate::enumerate_trees;
use spectra_graft::spectral::{oracle_spectral_radius, PowerIteration};
use spectra_graft::{
    all_pairs_distances, canonical_code, class_membership, full_spectrum_oracle, graph_stats,
    parse_edge_list, transmissions, Claim, ClassFilter, ClassMembership, FamilySpec, Graph, QMatrix,
    VerificationRun, Verifier,
};

use crate::config::Settings;

/// Exit code for usage and input errors.
const USAGE_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "spectra-graft", version, about = "Distance signless Laplacian spectral radius of trees")]
struct Cli {
    /// TOML file with default settings (cap, tol, seed, jobs, sampling).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads; 0 lets rayon decide.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Largest tree order that may be enumerated.
    #[arg(long, global = true)]
    cap: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spectral radius of a graph read from an edge list or built from a family.
    Rho {
        /// Edge list file; `-` or absent reads stdin.
        file: Option<PathBuf>,
        /// Family such as `S:n=8,legs=2,2,3` instead of an edge list.
        #[arg(long, conflicts_with = "file")]
        family: Option<FamilySpec>,
        #[arg(long)]
        tol: Option<f64>,
        /// Use the Jacobi oracle instead of power iteration.
        #[arg(long)]
        oracle: bool,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Build a family member and print its edge list, code and class flags.
    Family {
        spec: FamilySpec,
    },
    /// List all trees of an order, one `code<TAB>edges` line each.
    Enumerate {
        #[arg(long, short = 'n')]
        order: usize,
        /// all, non-caterpillar, non-starlike, intersection or pendants=k.
        #[arg(long, default_value = "all")]
        filter: Filter,
        /// Write the trees here and print only the count.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print only the number of trees.
        #[arg(long)]
        count: bool,
    },
    /// Check claims over all trees in an order range.
    Verify {
        /// Claim id (2.1 ... 3.6) or `all`; repeatable.
        #[arg(long, required = true)]
        claim: Vec<String>,
        #[arg(long)]
        n_min: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
        /// Write the JSON report here; `-` for stdout.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write a CSV summary here; `-` for stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Sampled configurations per tree above the exhaustive limits.
        #[arg(long)]
        samples: Option<usize>,
        /// Sweep mode for the contraction and branch-move claims.
        #[arg(long, default_value = "auto")]
        mode: Mode,
        /// Suppress the text table.
        #[arg(long, short)]
        quiet: bool,
    },
    /// Re-render a JSON report as a table or CSV.
    Report {
        file: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Clone, Copy)]
enum Filter {
    Class(ClassFilter),
    Pendants(usize),
}

impl FromStr for Filter {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "all" => Filter::Class(ClassFilter::AllTrees),
            "non-caterpillar" => Filter::Class(ClassFilter::NonCaterpillar),
            "non-starlike" => Filter::Class(ClassFilter::NonStarlike),
            "intersection" => Filter::Class(ClassFilter::NonCaterpillarNonStarlike),
            _ => match s.strip_prefix("pendants=").map(str::parse) {
                Some(Ok(k)) => Filter::Pendants(k),
                _ => {
                    return Err(format!(
                        "unknown filter {s:?}; expected all, non-caterpillar, non-starlike, intersection or pendants=k"
                    ))
                }
            },
        })
    }
}

impl Filter {
    fn keeps(self, m: &ClassMembership) -> bool {
        match self {
            Filter::Class(c) => c.contains(m),
            Filter::Pendants(k) => m.pendants == k,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// Exhaustive up to the configured orders, sampled above.
    Auto,
    Exhaustive,
    Sampled,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let rendered = e.render().to_string();
            let first = rendered.lines().next().unwrap_or("invalid arguments");
            eprintln!("error: {}", first.trim_start_matches("error: "));
            return ExitCode::from(USAGE_ERROR);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", format!("{e:#}").replace('\n', " "));
            ExitCode::from(USAGE_ERROR)
        }
    }
}

/// A closed downstream pipe (`| head`) ends output early; not an error.
fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain()
        .filter_map(|c| c.downcast_ref::<io::Error>())
        .any(|io| io.kind() == io::ErrorKind::BrokenPipe)
}

fn run(cli: Cli) -> Result<u8> {
    let mut settings = match &cli.config {
        Some(path) => Settings::load(path)?,
        None => Settings::default(),
    };
    settings.apply_env()?;
    if let Some(cap) = cli.cap {
        settings.cap = Some(cap);
    }
    if let Some(jobs) = cli.jobs {
        settings.jobs = Some(jobs);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(settings.jobs.unwrap_or(0))
        .build()
        .context("building thread pool")?;
    pool.install(|| dispatch(cli.command, settings))
}

fn dispatch(command: Command, settings: Settings) -> Result<u8> {
    match command {
        Command::Rho {
            file,
            family,
            tol,
            oracle,
            json,
        } => {
            let g = match family {
                Some(spec) => spec.build()?,
                None => read_graph(file.as_deref())?,
            };
            cmd_rho(&g, tol.unwrap_or(settings.options().tol), oracle, json)
        }
        Command::Family { spec } => cmd_family(&spec),
        Command::Enumerate {
            order,
            filter,
            out,
            count,
        } => cmd_enumerate(order, filter, out.as_deref(), count, &settings),
        Command::Verify {
            claim,
            n_min,
            n_max,
            json,
            csv,
            seed,
            samples,
            mode,
            quiet,
        } => {
            let mut options = settings.options();
            if let Some(seed) = seed {
                options.seed = seed;
            }
            if let Some(samples) = samples {
                options.samples_per_tree = samples;
            }
            match mode {
                Mode::Auto => {}
                Mode::Exhaustive => {
                    options.contraction_exhaustive_max = usize::MAX;
                    options.branch_move_exhaustive_max = usize::MAX;
                }
                Mode::Sampled => {
                    options.contraction_exhaustive_max = 0;
                    options.branch_move_exhaustive_max = 0;
                }
            }
            let claims = parse_claims(&claim)?;
            let mut verifier = Verifier::new(options);
            let run = if claims.len() == 1 {
                let c = claims[0];
                let Some((lo, hi)) = c.resolve_range(n_min, n_max) else {
                    bail!(
                        "claim {c} needs n >= {}; requested range is empty",
                        c.min_order()
                    );
                };
                let report = verifier.verify(c, lo, hi)?;
                VerificationRun {
                    status: report.status,
                    reports: vec![report],
                }
            } else {
                verifier.verify_claims(&claims, n_min, n_max)?
            };
            emit_run(&run, json.as_deref(), csv.as_deref(), quiet)?;
            Ok(run.exit_code() as u8)
        }
        Command::Report { file, csv } => {
            let text = fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
            let run: VerificationRun =
                serde_json::from_str(&text).with_context(|| format!("parsing {}", file.display()))?;
            emit_run(&run, None, csv.as_deref(), csv.as_deref() == Some(Path::new("-")))?;
            Ok(run.exit_code() as u8)
        }
    }
}

fn parse_claims(ids: &[String]) -> Result<Vec<Claim>> {
    let mut claims = Vec::new();
    for id in ids.iter().flat_map(|s| s.split(',')) {
        let id = id.trim();
        if id.eq_ignore_ascii_case("all") {
            claims.extend(Claim::ALL);
        } else {
            match Claim::from_id(id) {
                Some(c) => claims.push(c),
                None => bail!(
                    "unknown claim {id:?}; expected one of {} or all",
                    Claim::ALL.map(|c| c.id()).join(", ")
                ),
            }
        }
    }
    claims.sort();
    claims.dedup();
    Ok(claims)
}

fn read_graph(file: Option<&Path>) -> Result<Graph> {
    let mut text = String::new();
    match file {
        None => {
            io::stdin().read_to_string(&mut text).context("reading stdin")?;
        }
        Some(p) if p == Path::new("-") => {
            io::stdin().read_to_string(&mut text).context("reading stdin")?;
        }
        Some(p) => text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
    }
    Ok(parse_edge_list(&text)?)
}

fn cmd_rho(g: &Graph, tol: f64, oracle: bool, json: bool) -> Result<u8> {
    g.ensure_connected()?;
    let d = all_pairs_distances(g)?;
    let q = QMatrix::from_distances(&d);
    let result = if oracle {
        oracle_spectral_radius(&q)?
    } else {
        PowerIteration::with_tol(tol).solve(&q)?
    };
    let tr = transmissions(&d);
    let spectrum = if oracle { Some(full_spectrum_oracle(&q)?) } else { None };
    let mut out = io::stdout().lock();
    if json {
        let value = serde_json::json!({
            "rho": result.rho,
            "method": result.method,
            "iterations": result.iterations,
            "residual": result.residual,
            "tr_max": tr.max(),
            "perron": result.perron,
        });
        let mut value = value;
        if let Some(spectrum) = &spectrum {
            value["spectrum"] = serde_json::json!(spectrum);
        }
        writeln!(out, "{}", serde_json::to_string_pretty(&value)?)?;
    } else {
        writeln!(out, "rho         {}", render::significant(result.rho, 12))?;
        writeln!(out, "method      {}", serde_json::to_value(result.method)?.as_str().unwrap_or(""))?;
        writeln!(out, "iterations  {}", result.iterations)?;
        writeln!(out, "residual    {:.3e}", result.residual)?;
        writeln!(out, "tr_max      {}", tr.max())?;
        let perron: Vec<String> = result.perron.iter().map(|x| format!("{x:.12}")).collect();
        writeln!(out, "perron      {}", perron.join(" "))?;
        if let Some(spectrum) = &spectrum {
            let values: Vec<String> = spectrum.iter().map(|&x| render::significant(x, 12)).collect();
            writeln!(out, "spectrum    {}", values.join(" "))?;
        }
    }
    Ok(0)
}

fn cmd_family(spec: &FamilySpec) -> Result<u8> {
    let g = spec.build()?;
    let stats = graph_stats(&g)?;
    let mut out = io::stdout().lock();
    writeln!(out, "# {spec}")?;
    if g.is_tree() {
        let m = class_membership(&g)?;
        writeln!(out, "# code {}", canonical_code(&g)?)?;
        writeln!(
            out,
            "# non-caterpillar {} non-starlike {} double-broom {}",
            m.non_caterpillar,
            m.non_starlike,
            m.double_broom
                .map_or("no".to_string(), |(a, b)| format!("({a},{b})"))
        )?;
    }
    writeln!(
        out,
        "# pendants {} diameter {} branching {} wiener {}",
        stats.pendant_vertices.len(),
        stats.diameter,
        stats.branching_vertices,
        stats.wiener_index
    )?;
    write!(out, "{}", g.to_edge_list())?;
    Ok(0)
}

fn cmd_enumerate(
    order: usize,
    filter: Filter,
    out: Option<&Path>,
    count: bool,
    settings: &Settings,
) -> Result<u8> {
    let trees = enumerate_trees(order, settings.options().cap)?;
    let mut text = String::new();
    let mut kept = 0usize;
    for t in &trees {
        if filter.keeps(&class_membership(&t.graph)?) {
            kept += 1;
            text.push_str(&t.fixture_line());
            text.push('\n');
        }
    }
    match out {
        Some(p) if p != Path::new("-") => {
            fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
            writeln!(io::stdout().lock(), "{kept}")?;
        }
        _ if count => writeln!(io::stdout().lock(), "{kept}")?,
        _ => {
            io::stdout().lock().write_all(text.as_bytes())?;
            eprintln!("{kept} trees");
        }
    }
    Ok(0)
}

fn emit_run(run: &VerificationRun, json: Option<&Path>, csv: Option<&Path>, quiet: bool) -> Result<()> {
    let stdout_taken = json == Some(Path::new("-")) || csv == Some(Path::new("-"));
    if !quiet && !stdout_taken {
        io::stdout().lock().write_all(render::table(run).as_bytes())?;
    }
    if let Some(p) = json {
        let text = serde_json::to_string_pretty(run)? + "\n";
        write_target(p, text.as_bytes())?;
    }
    if let Some(p) = csv {
        write_target(p, &render::csv(run)?)?;
    }
    Ok(())
}

fn write_target(p: &Path, bytes: &[u8]) -> Result<()> {
    if p == Path::new("-") {
        io::stdout().lock().write_all(bytes)?;
    } else {
        fs::write(p, bytes).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}
