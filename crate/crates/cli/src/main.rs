mod render;
mod verify;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use qmut::catalog::{
    self, classify, e82_variants, gen_a3n3, gen_dnll, CatalogEntry, E82Letter, TypeAAttachment,
};
use qmut::covering::{mutate_fiber, CoverPreset};
use qmut::cycle::{derive_cb_indices, find_fz_sequence, mutate_cycle, CycleSpec};
use qmut::explore::explore;
use qmut::fixtures;
use qmut::json::{qp_from_json, quiver_to_json};
use qmut::potential::QuiverWithPotential;
use qmut::triangulation::{
    g_invariant_triangulations, quotient_quiver, triangulation_to_quiver, Triangulation,
};
use qmut::{canonical_form, fz_mutate_quiver, mutate_at_vertex_via_cover, Quiver};

#[derive(Parser)]
#[command(
    name = "qmut",
    version,
    about = "Quiver mutation for 2-Calabi-Yau tilted algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fomin-Zelevinsky mutation at a vertex without loops or 2-cycles.
    Mutate {
        input: PathBuf,
        #[arg(long)]
        vertex: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Mutation at an oriented cycle of vertices.
    MutateCycle {
        input: PathBuf,
        /// Cycle annotation file.
        #[arg(long, conflicts_with = "derive")]
        spec: Option<PathBuf>,
        /// Derive the annotation from the input's potential.
        #[arg(long, requires = "cycle")]
        derive: bool,
        /// Cycle vertices in order, comma separated.
        #[arg(long, value_delimiter = ',')]
        cycle: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Mutation at a vertex with loops or 2-cycles through a cyclic cover.
    MutateCovered {
        input: PathBuf,
        #[arg(long)]
        vertex: String,
        /// Shipped preset name (a9-3, d6-3) or a preset file.
        #[arg(long)]
        cover_preset: String,
        /// Annotation of one fiber cycle in the cover.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Print the mutated cover instead of its projection.
        #[arg(long)]
        upstairs: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Breadth-first search of the mutation class up to isomorphism.
    Explore {
        input: PathBuf,
        #[arg(long, env = "QM_MAX_DEPTH", default_value_t = 8)]
        max_depth: usize,
        /// Write the exchange graph in DOT to this file.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Look for an FZ sequence into the class of this quiver.
        #[arg(long)]
        target: Option<PathBuf>,
    },
    /// Finite-type catalog.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
    /// Polygon triangulations.
    Tri {
        #[command(subcommand)]
        command: TriCommand,
    },
    /// Run a verification suite; exits with 3 if any check fails.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Print a quiver as DOT or normalized JSON.
    Render {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
        /// Relabel by the canonical vertex order.
        #[arg(long)]
        canonical: bool,
    },
    /// Shipped example quivers.
    Fixture {
        #[command(subcommand)]
        command: FixtureCommand,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    List,
    /// Generate a member: a3n3, dnll, or e82a..e82g.
    Gen {
        family: String,
        /// A3n3: number of vertices of a linear attachment.
        #[arg(long)]
        n: Option<usize>,
        /// Type-A attachment file, glued at every star.
        #[arg(long, requires = "connecting")]
        attachment: Option<PathBuf>,
        #[arg(long)]
        connecting: Option<String>,
        #[arg(long)]
        q: Option<usize>,
        #[arg(long)]
        ell: Option<usize>,
        /// Dnll: starred positions, comma separated.
        #[arg(long, value_delimiter = ',')]
        stars: Vec<usize>,
        /// E82: orientation variant of the undirected edges.
        #[arg(long, default_value_t = 0)]
        variant: usize,
        /// Also write the cover preset to this file.
        #[arg(long)]
        preset: Option<PathBuf>,
    },
    Classify {
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum TriCommand {
    /// Quiver of a triangulation.
    Quiver {
        #[arg(long)]
        ngon: usize,
        /// Diagonals as `a-b`, comma separated.
        #[arg(long, default_value = "")]
        diagonals: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Rotation-invariant triangulations of the (3n+3)-gon and their quotients.
    Invariant {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum Suite {
    /// Block identities behind the matrix formula.
    #[command(alias = "appendix")]
    Blocks {
        #[arg(long, default_value = "all")]
        fixture: String,
    },
    /// Matrix formula S M S^t against the cycle rule.
    #[command(alias = "palu")]
    Congruence {
        #[arg(long, default_value = "all")]
        fixture: String,
    },
    /// Shipped examples against their expected results.
    Examples,
    E82Closure,
    Flips {
        #[arg(long, default_value_t = 8)]
        max_ngon: usize,
    },
    Invariant {
        #[arg(long, default_value_t = 3)]
        max_n: usize,
    },
}

#[derive(Subcommand)]
enum FixtureCommand {
    List,
    /// Write every fixture with its annotation, preset and expected result.
    Export {
        dir: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

/// Marks a failed verification suite (exit code 3).
#[derive(Debug)]
struct VerificationFailed;

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("verification failed")
    }
}

impl std::error::Error for VerificationFailed {}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_qp(path: &Path) -> Result<QuiverWithPotential> {
    qp_from_json(&read(path)?).with_context(|| format!("invalid quiver file {}", path.display()))
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_preset(arg: &str) -> Result<CoverPreset> {
    if let Some(p) = CoverPreset::named(arg) {
        return Ok(p);
    }
    let path = Path::new(arg);
    if !path.exists() {
        bail!("`{arg}` is neither a shipped preset (a9-3, d6-3) nor a file");
    }
    CoverPreset::from_json(&read(path)?).with_context(|| format!("invalid preset file {arg}"))
}

fn load_spec(path: &Path) -> Result<CycleSpec> {
    CycleSpec::from_json(&read(path)?)
        .with_context(|| format!("invalid cycle annotation {}", path.display()))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Mutate {
            input,
            vertex,
            output,
        } => {
            let qp = read_qp(&input)?;
            let out = fz_mutate_quiver(&qp.quiver, &vertex)?;
            emit(&quiver_to_json(&out), output.as_deref())
        }
        Command::MutateCycle {
            input,
            spec,
            derive,
            cycle,
            output,
        } => {
            let qp = read_qp(&input)?;
            let spec = match spec {
                Some(path) => load_spec(&path)?,
                None if derive => derive_cb_indices(&qp, &cycle)?,
                None => bail!("give --spec FILE or --derive --cycle v1,v2,.."),
            };
            let out = mutate_cycle(&qp.quiver, &spec)?;
            emit(&quiver_to_json(&out), output.as_deref())
        }
        Command::MutateCovered {
            input,
            vertex,
            cover_preset,
            spec,
            upstairs,
            output,
        } => {
            let qp = read_qp(&input)?;
            let preset = load_preset(&cover_preset)?;
            let spec = spec.as_deref().map(load_spec).transpose()?;
            if upstairs {
                let (_, q) = mutate_fiber(&qp, &vertex, &preset, spec.as_ref())?;
                emit(&quiver_to_json(&q), output.as_deref())
            } else {
                let out = mutate_at_vertex_via_cover(&qp, &vertex, &preset, spec.as_ref())?;
                emit(&render::json(&out), output.as_deref())
            }
        }
        Command::Explore {
            input,
            max_depth,
            dot,
            target,
        } => {
            let qp = read_qp(&input)?;
            let class = explore(&qp.quiver, max_depth)?;
            println!("classes: {}", class.len());
            println!(
                "complete: {}",
                if class.complete {
                    "yes"
                } else {
                    "no, depth limit reached"
                }
            );
            for (d, c) in class.counts_per_depth().iter().enumerate() {
                println!("depth {d}: {c}");
            }
            for (f, d) in class.forms.iter().zip(&class.depths) {
                println!("  {d} {f}");
            }
            if let Some(path) = target {
                let t = read_qp(&path)?;
                match find_fz_sequence(&qp.quiver, &t.quiver, max_depth) {
                    Some(seq) => println!("target: reached with [{}]", seq.join(", ")),
                    None => println!("target: not reached within depth {max_depth}"),
                }
                if let Some(i) = class.index_of(&canonical_form(&t.quiver)) {
                    println!("target: class {i}");
                }
            }
            if let Some(path) = dot {
                emit(&render::exchange_graph_dot(&class), Some(&path))?;
            }
            Ok(())
        }
        Command::Catalog { command } => run_catalog(command),
        Command::Tri { command } => run_tri(command),
        Command::Verify { suite } => {
            let mut report = verify::Report::default();
            match suite {
                Suite::Blocks { fixture } => verify::blocks(&fixture, &mut report)?,
                Suite::Congruence { fixture } => verify::congruence(&fixture, &mut report)?,
                Suite::Examples => verify::examples(&mut report)?,
                Suite::E82Closure => verify::e82(&mut report)?,
                Suite::Flips { max_ngon } => verify::flips(max_ngon, &mut report)?,
                Suite::Invariant { max_n } => verify::invariant(max_n, &mut report)?,
            }
            print!("{}", report.text());
            if report.failed() {
                return Err(VerificationFailed.into());
            }
            Ok(())
        }
        Command::Render {
            input,
            format,
            canonical,
        } => {
            let qp = read_qp(&input)?;
            let text = match (format, canonical) {
                (Format::Dot, false) => render::dot(&qp.quiver),
                (Format::Dot, true) => render::canonical_dot(&qp.quiver),
                (Format::Json, false) => render::json(&qp),
                (Format::Json, true) => render::canonical_json(&qp.quiver),
            };
            emit(&text, None)
        }
        Command::Fixture { command } => match command {
            FixtureCommand::List => {
                for name in fixtures::NAMES {
                    println!("{name}");
                }
                for l in E82Letter::ALL {
                    println!("e82-{l}");
                }
                Ok(())
            }
            FixtureCommand::Export { dir } => export_fixtures(&dir),
        },
    }
}

fn attachment_from(
    file: Option<&Path>,
    connecting: Option<&str>,
) -> Result<Option<TypeAAttachment>> {
    let Some(file) = file else { return Ok(None) };
    let qp = read_qp(file)?;
    let connecting = connecting.ok_or_else(|| anyhow!("--attachment needs --connecting"))?;
    Ok(Some(TypeAAttachment::new(qp.quiver, connecting)?))
}

fn run_catalog(command: CatalogCommand) -> Result<()> {
    match command {
        CatalogCommand::List => {
            for (family, about) in catalog::list() {
                println!("{family:<12} {about}");
            }
            Ok(())
        }
        CatalogCommand::Gen {
            family,
            n,
            attachment,
            connecting,
            q,
            ell,
            stars,
            variant,
            preset,
        } => {
            let att = attachment_from(attachment.as_deref(), connecting.as_deref())?;
            let family = family.to_ascii_lowercase();
            let entry: CatalogEntry = match family.as_str() {
                "a3n3" => {
                    let att = match (att, n) {
                        (Some(a), _) => a,
                        (None, Some(n)) => TypeAAttachment::path(n)?,
                        (None, None) => TypeAAttachment::point(),
                    };
                    gen_a3n3(&att)?
                }
                "dnll" => {
                    let q = q.ok_or_else(|| anyhow!("dnll needs --q"))?;
                    let ell = ell.ok_or_else(|| anyhow!("dnll needs --ell"))?;
                    let att = att.unwrap_or_else(TypeAAttachment::point);
                    let stars: BTreeMap<usize, TypeAAttachment> =
                        stars.into_iter().map(|i| (i, att.clone())).collect();
                    gen_dnll(q, ell, &stars)?
                }
                f if f.starts_with("e82") => {
                    let letter: E82Letter = f
                        .trim_start_matches("e82")
                        .trim_start_matches('-')
                        .parse()?;
                    let variants = e82_variants(letter);
                    let count = variants.len();
                    variants
                        .into_iter()
                        .nth(variant)
                        .ok_or_else(|| anyhow!("E82{letter} has {count} variant(s)"))?
                }
                other => bail!("unknown family `{other}`; expected a3n3, dnll or e82a..e82g"),
            };
            if let Some(path) = preset {
                emit(&entry.cover.to_json(), Some(&path))?;
            }
            emit(&render::json(&entry.qp), None)
        }
        CatalogCommand::Classify { input } => {
            let qp = read_qp(&input)?;
            match classify(&qp) {
                Some(d) => println!("{}", serde_json::to_string(&d)?),
                None => println!("null"),
            }
            Ok(())
        }
    }
}

fn run_tri(command: TriCommand) -> Result<()> {
    match command {
        TriCommand::Quiver {
            ngon,
            diagonals,
            format,
        } => {
            let t = Triangulation::parse(ngon, &diagonals)?;
            let q: Quiver = triangulation_to_quiver(&t);
            let text = match format {
                Format::Dot => render::dot(&q),
                Format::Json => quiver_to_json(&q),
            };
            emit(&text, None)
        }
        TriCommand::Invariant { n } => {
            if n == 0 {
                bail!("--n must be at least 1");
            }
            for t in g_invariant_triangulations(n) {
                let ds: Vec<String> = t
                    .diagonals()
                    .iter()
                    .map(|&(a, b)| format!("{a}-{b}"))
                    .collect();
                let quotient = quotient_quiver(&t)?;
                let class =
                    classify(&quotient).map_or("unclassified".to_string(), |d| d.to_string());
                println!("{}\t{class}", ds.join(","));
            }
            Ok(())
        }
    }
}

fn export_fixtures(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let write = |name: String, text: String| emit(&text, Some(&dir.join(name)));
    for name in fixtures::NAMES {
        let f = fixtures::named(name).expect("listed fixture");
        write(format!("{name}.json"), render::json(&f.qp))?;
        write(format!("{name}.expected.json"), quiver_to_json(&f.expected))?;
        if let Some(spec) = &f.spec {
            write(format!("{name}.spec.json"), spec.to_json())?;
        }
        if let Some(preset) = &f.preset {
            write(format!("{name}.preset.json"), preset.to_json())?;
        }
    }
    for l in E82Letter::ALL {
        let e = catalog::gen_e82(l);
        write(format!("e82-{l}.json"), render::json(&e.qp))?;
        write(format!("e82-{l}.preset.json"), e.cover.to_json())?;
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<VerificationFailed>().is_some() {
        return 3;
    }
    match err.downcast_ref::<qmut::Error>() {
        Some(e) if e.is_unsupported_mutation() => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            if err.downcast_ref::<VerificationFailed>().is_none() {
                eprintln!("error: {err:#}");
            }
            ExitCode::from(exit_code(&err))
        }
    }
}
