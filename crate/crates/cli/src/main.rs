use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{ArgAction, Parser, Subcommand, ValueEnum};
use fqnres::frontend::{analyze, render_sketch_lines};
use fqnres::kb::{DependencyCoordinate, KnowledgeBase};
use fqnres::resolver::{emit_patch, resolve, Resolution, ResolveOptions, SketchStatus};

#[derive(Parser)]
#[command(name = "fqnres", version, about = "Resolve FQNs in Java snippets and recommend dependencies")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build or extend a knowledge base
    Ingest {
        /// Knowledge-base file; created if missing
        #[arg(long)]
        kb: PathBuf,
        /// Project build file to mine for a dependency itemset
        #[arg(long)]
        pom: Vec<PathBuf>,
        /// Class listing; pair each with a --dep, in order
        #[arg(long)]
        classes: Vec<PathBuf>,
        /// Coordinate `group:artifact:version` of the matching --classes
        #[arg(long)]
        dep: Vec<String>,
        /// `g:a:v -> g:a:v` relations; entries that contradict them are dropped
        #[arg(long)]
        ground_truth: Vec<PathBuf>,
    },
    /// Print the sketches of a snippet
    Sketch {
        /// Snippet file; standard input when omitted or `-`
        snippet: Option<PathBuf>,
        /// Allow wrapping bare statements or members in a synthetic class
        #[arg(long, default_value_t = true, action = ArgAction::Set)]
        wrapped: bool,
    },
    /// Resolve a snippet against a knowledge base
    Resolve {
        #[arg(long)]
        kb: PathBuf,
        snippet: Option<PathBuf>,
        /// Dependency already present in the project (costs nothing)
        #[arg(long = "declared")]
        declared: Vec<String>,
        /// Fail if any sketch has no candidate
        #[arg(long)]
        strict: bool,
        /// Write a patch even if some sketches stay unresolved
        #[arg(long)]
        partial: bool,
        #[arg(long, value_enum, default_value_t = Output::Human)]
        output: Output,
        /// Write the snippet with the needed imports added
        #[arg(long)]
        patch: Option<PathBuf>,
        /// Write the covering problem in `p cover` format
        #[arg(long)]
        emit_cnf: Option<PathBuf>,
        #[arg(long, default_value_t = true, action = ArgAction::Set)]
        wrapped: bool,
        /// Allow several versions of one library in a solution
        #[arg(long)]
        allow_multiple_versions: bool,
    },
    /// Print knowledge-base counts
    Stats {
        #[arg(long)]
        kb: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Human,
    Machine,
}

fn read_snippet(path: Option<&Path>) -> Result<String> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))
        }
        _ => {
            let mut text = String::new();
            io::stdin().read_to_string(&mut text).context("cannot read standard input")?;
            Ok(text)
        }
    }
}

fn parse_coordinates(texts: &[String]) -> Result<Vec<DependencyCoordinate>> {
    texts
        .iter()
        .map(|t| t.parse::<DependencyCoordinate>().map_err(anyhow::Error::from))
        .collect()
}

fn load_kb(path: &Path) -> Result<KnowledgeBase> {
    Ok(KnowledgeBase::load(path)?)
}

fn ingest(
    kb_path: &Path,
    poms: &[PathBuf],
    classes: &[PathBuf],
    deps: &[String],
    ground_truth: &[PathBuf],
) -> Result<()> {
    if poms.is_empty() && classes.is_empty() && ground_truth.is_empty() {
        bail!("nothing to ingest: give --pom, --classes with --dep, or --ground-truth");
    }
    if classes.len() != deps.len() {
        bail!("{} --classes but {} --dep; give one coordinate per listing", classes.len(), deps.len());
    }
    let deps = parse_coordinates(deps)?;
    let mut kb = if kb_path.exists() {
        load_kb(kb_path)?
    } else {
        KnowledgeBase::new()
    };
    let mut added = 0;
    for (file, dep) in classes.iter().zip(&deps) {
        added += kb.ingest_class_listing(file, dep)?;
    }
    for pom in poms {
        kb.ingest_pom(pom)?;
    }
    let mut relations = 0;
    for file in ground_truth {
        relations += kb.ingest_ground_truth(file)?;
    }
    let removed = if ground_truth.is_empty() {
        0
    } else {
        kb.filter_against_ground_truth()
    };
    kb.save(kb_path)?;
    let stats = kb.stats();
    println!(
        "added={added} removed={removed} relations={relations} entries={} itemsets={}",
        kb.len(),
        stats.itemsets
    );
    Ok(())
}

fn sketch(snippet: Option<&Path>, wrapped: bool) -> Result<()> {
    let source = read_snippet(snippet)?;
    let sketches = analyze(&source, wrapped)?;
    let mut out = io::stdout().lock();
    for line in render_sketch_lines(&source, &sketches) {
        writeln!(out, "{line}")?;
    }
    Ok(())
}

fn status_word(status: SketchStatus) -> &'static str {
    match status {
        SketchStatus::Bound => "bound",
        SketchStatus::Unresolved => "unresolved",
        SketchStatus::AssumedBuiltin => "builtin",
    }
}

fn print_human(resolution: &Resolution, out: &mut impl Write) -> io::Result<()> {
    for (i, s) in resolution.sketches.iter().enumerate() {
        let status = resolution.status(i);
        let target = match resolution.bindings.get(&i) {
            Some(b) => format!("{}  [{}]", b.entry.fqn(), b.entry.dependency),
            None => "-".to_string(),
        };
        writeln!(out, "{:<10} {:<40} {target}", status_word(status), s.render())?;
    }
    writeln!(out)?;
    for dep in &resolution.dependencies {
        writeln!(out, "dependency {dep}")?;
    }
    for import in &resolution.imports {
        writeln!(out, "import {import}")?;
    }
    for a in &resolution.ambiguities {
        writeln!(
            out,
            "ambiguous {}: chose {} over {}",
            resolution.sketches[a.sketch].render(),
            a.variable_keys[0],
            a.variable_keys[1..].join(", ")
        )?;
    }
    writeln!(out, "cost {}", resolution.objective_cost)
}

#[allow(clippy::too_many_arguments)]
fn resolve_cmd(
    kb_path: &Path,
    snippet: Option<&Path>,
    declared: &[String],
    options: ResolveOptions,
    partial: bool,
    output: Output,
    patch: Option<&Path>,
    emit_cnf: Option<&Path>,
) -> Result<ExitCode> {
    let declared: BTreeSet<DependencyCoordinate> = parse_coordinates(declared)?.into_iter().collect();
    let kb = load_kb(kb_path)?;
    let source = read_snippet(snippet)?;
    let resolution = resolve(&source, &kb, &declared, options)?;

    if let Some(path) = emit_cnf {
        fs::write(path, resolution.cnf()).with_context(|| format!("cannot write {}", path.display()))?;
    }
    if let Some(path) = patch {
        if resolution.is_complete() || partial {
            fs::write(path, emit_patch(&resolution, &source))
                .with_context(|| format!("cannot write {}", path.display()))?;
        } else {
            eprintln!("warning: unresolved sketches remain; no patch written (use --partial)");
        }
    }

    let mut out = io::stdout().lock();
    match output {
        Output::Machine => {
            let json = serde_json::to_string_pretty(&resolution.report(&source))?;
            writeln!(out, "{json}")?;
        }
        Output::Human => print_human(&resolution, &mut out)?,
    }
    for &s in &resolution.unresolved {
        eprintln!("unresolved: {}", resolution.sketches[s].render());
    }
    Ok(if resolution.is_complete() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn stats(kb_path: &Path) -> Result<()> {
    let s = load_kb(kb_path)?.stats();
    println!(
        "types={} methods={} fields={} dependencies={} itemsets={} relations={}",
        s.types, s.methods, s.fields, s.dependencies, s.itemsets, s.relations
    );
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Command::Ingest {
            kb,
            pom,
            classes,
            dep,
            ground_truth,
        } => ingest(&kb, &pom, &classes, &dep, &ground_truth).map(|_| ExitCode::SUCCESS),
        Command::Sketch { snippet, wrapped } => sketch(snippet.as_deref(), wrapped).map(|_| ExitCode::SUCCESS),
        Command::Resolve {
            kb,
            snippet,
            declared,
            strict,
            partial,
            output,
            patch,
            emit_cnf,
            wrapped,
            allow_multiple_versions,
        } => resolve_cmd(
            &kb,
            snippet.as_deref(),
            &declared,
            ResolveOptions {
                strict,
                allow_wrapping: wrapped,
                exclusive_versions: !allow_multiple_versions,
            },
            partial,
            output,
            patch.as_deref(),
            emit_cnf.as_deref(),
        ),
        Command::Stats { kb } => stats(&kb).map(|_| ExitCode::SUCCESS),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
