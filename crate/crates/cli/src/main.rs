//! Single-binary front end: graph operations, gadget construction, the SAT
//! reduction pipeline, root search, format conversion, and the named check
//! suite.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use groot_cli::checks::{run_suite, CheckContext, Status};
use groot_core::canon::{are_isomorphic, isomorphism};
use groot_core::formats::{
    parse_edge_list, parse_graph_json, write_dot, write_edge_list, write_graph_json, Format,
};
use groot_core::gadgets::{chain_family, chain_pattern_space, family_root_count, gadget_g1,
    gadget_g2, gadget_square, GadgetKind, ATTACH_POINTS};
use groot_core::graph::Graph;
use groot_core::reduction::{
    assignment_to_root, build_reduction_graph, root_to_assignment, LabeledGraph, LinkingPolicy,
    Role,
};
use groot_core::sat::{parse_instance, Assignment};
use groot_core::solver::{find_square_roots, verify_root, SearchOptions};

#[derive(Parser)]
#[command(
    name = "groot",
    version,
    about = "Graph squares, girth-bounded square roots, and the 1-in-3 clause encoding"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the k-th power of a graph.
    Power {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(short, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the girth of a graph.
    Girth {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Decide isomorphism of two graphs; exit 0 when isomorphic.
    Iso {
        #[arg(long)]
        g1: PathBuf,
        #[arg(long)]
        g2: PathBuf,
        /// Print an explicit vertex bijection when isomorphic.
        #[arg(long)]
        witness: bool,
    },
    /// Emit one of the fixed blocks, their common square, or a chain.
    Gadget(GadgetArgs),
    /// Build the reduction graph of a clause file.
    Reduce {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "chain")]
        policy: LinkingPolicy2,
        #[arg(long)]
        out: PathBuf,
        /// Print the vertex/edge class summary.
        #[arg(long)]
        summary: bool,
    },
    /// Decode an assignment from a root of a reduction graph.
    Extract {
        #[arg(long)]
        gphi: PathBuf,
        #[arg(long)]
        root: PathBuf,
    },
    /// Check assignment -> root -> assignment over one clause file.
    Roundtrip {
        #[arg(long = "in")]
        input: PathBuf,
        /// Assignment like "x=1,y=0,z=0".
        #[arg(long)]
        assign: String,
        #[arg(long, default_value = "chain")]
        policy: LinkingPolicy2,
    },
    /// Square-root search and verification.
    Root {
        #[command(subcommand)]
        action: RootCommand,
    },
    /// Chain families: squares, labeled roots, isomorphism-class counts.
    Family {
        #[arg(long, default_value_t = 4)]
        k: usize,
        /// Attachment points, comma separated (defaults to 12,14,12...).
        #[arg(long)]
        attach: Option<String>,
        /// Try all attachment combinations and report each class count.
        #[arg(long)]
        search_attach: bool,
    },
    /// Convert between edge-list, JSON, and DOT formats.
    Convert {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        from: Option<Format2>,
        #[arg(long)]
        to: Option<Format2>,
    },
    /// Run the named check suite; nonzero exit on any FAIL.
    Verify {
        /// `all` or a comma-separated list of check ids.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value = "out")]
        workdir: PathBuf,
        #[arg(long, default_value_t = 0xC0FFEE)]
        seed: u64,
    },
}

#[derive(Args)]
struct GadgetArgs {
    /// g1, g2, square, or chain.
    which: String,
    /// Chain pattern over {1,2}, e.g. 1212.
    #[arg(long)]
    pattern: Option<String>,
    /// Chain attachment points, comma separated from {1,12,14}.
    #[arg(long)]
    attach: Option<String>,
    #[arg(long, default_value = "edgelist")]
    format: Format2,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum RootCommand {
    /// Enumerate square roots under a girth bound; exit 1 when none exist.
    Find {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 5)]
        girth_min: usize,
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long)]
        up_to_iso: bool,
        /// Directory for the found roots (root_000.json, ...).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify one candidate root; exit 1 when it fails.
    Verify {
        #[arg(long)]
        square: PathBuf,
        #[arg(long)]
        root: PathBuf,
        #[arg(long, default_value_t = 5)]
        girth_min: usize,
    },
}

/// Thin clap-friendly wrappers over the library enums.
#[derive(Clone, Copy)]
struct LinkingPolicy2(LinkingPolicy);

impl std::str::FromStr for LinkingPolicy2 {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse().map(LinkingPolicy2)
    }
}

#[derive(Clone, Copy)]
struct Format2(Format);

impl std::str::FromStr for Format2 {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse().map(Format2)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read_graph(path: &Path) -> Result<(Graph, Option<BTreeMap<String, Role>>)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    match Format::infer(path).unwrap_or(Format::Json) {
        Format::Json => Ok(parse_graph_json(&text)?),
        Format::EdgeList => Ok((parse_edge_list(&text)?, None)),
        Format::Dot => bail!("DOT is export-only"),
    }
}

fn read_labeled(path: &Path) -> Result<LabeledGraph> {
    let (graph, labels) = read_graph(path)?;
    let labels = labels.ok_or_else(|| {
        anyhow!(
            "{} carries no role labels; use the JSON emitted by `groot reduce`",
            path.display()
        )
    })?;
    let lg = LabeledGraph { graph, labels };
    lg.validate()?;
    Ok(lg)
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn render(g: &Graph, labels: Option<&BTreeMap<String, Role>>, format: Format) -> Result<String> {
    Ok(match format {
        Format::EdgeList => {
            if labels.is_some() {
                eprintln!("warning: edge-list output drops role labels");
            }
            write_edge_list(g)
        }
        Format::Json => write_graph_json(g, labels),
        Format::Dot => write_dot(g, labels),
    })
}

fn parse_attach(text: &str) -> Result<Vec<u8>> {
    text.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let a: u8 = t.trim().parse().map_err(|_| anyhow!("bad attach point {t:?}"))?;
            if ATTACH_POINTS.contains(&a) {
                Ok(a)
            } else {
                Err(anyhow!("attach point {a} is not one of 1, 12, 14"))
            }
        })
        .collect()
}

fn parse_pattern(text: &str) -> Result<Vec<GadgetKind>> {
    text.chars()
        .map(|c| match c {
            '1' => Ok(GadgetKind::G1),
            '2' => Ok(GadgetKind::G2),
            other => Err(anyhow!("pattern may only contain 1 and 2, saw {other:?}")),
        })
        .collect()
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Power { input, k, out } => {
            let (g, _) = read_graph(&input)?;
            let power = g.kth_power(k)?;
            emit(&write_graph_json(&power, None), out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Girth { input } => {
            let (g, _) = read_graph(&input)?;
            println!("{}", g.girth());
            Ok(ExitCode::SUCCESS)
        }
        Command::Iso { g1, g2, witness } => {
            let (a, _) = read_graph(&g1)?;
            let (b, _) = read_graph(&g2)?;
            if witness {
                match isomorphism(&a, &b) {
                    Some(map) => {
                        for (u, v) in map {
                            println!("{u} -> {v}");
                        }
                        Ok(ExitCode::SUCCESS)
                    }
                    None => {
                        println!("not isomorphic");
                        Ok(ExitCode::from(1))
                    }
                }
            } else if are_isomorphic(&a, &b) {
                println!("isomorphic");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("not isomorphic");
                Ok(ExitCode::from(1))
            }
        }
        Command::Gadget(args) => run_gadget(args),
        Command::Reduce {
            input,
            policy,
            out,
            summary,
        } => {
            let text = std::fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            let instance = parse_instance(&text)?;
            let build = build_reduction_graph(&instance, policy.0)?;
            emit(
                &write_graph_json(&build.labeled.graph, Some(&build.labeled.labels)),
                Some(&out),
            )?;
            if summary {
                print!("{}", build.summary);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Extract { gphi, root } => {
            let reduction = read_labeled(&gphi)?;
            let (candidate, _) = read_graph(&root)?;
            let assignment = root_to_assignment(&reduction, &candidate)?;
            println!("{assignment}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Roundtrip {
            input,
            assign,
            policy,
        } => {
            let text = std::fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            let instance = parse_instance(&text)?;
            let assignment = Assignment::parse(&assign)?;
            let build = build_reduction_graph(&instance, policy.0)?;
            let root = assignment_to_root(&instance, &assignment, policy.0)?;
            let square = root.graph.square();
            if square != build.labeled.graph {
                let (extra, missing) = square.edge_difference(&build.labeled.graph);
                println!("square mismatch: {} extra, {} missing", extra.len(), missing.len());
                for (u, v) in extra.iter().chain(&missing) {
                    println!("  {u} -- {v}");
                }
                return Ok(ExitCode::from(1));
            }
            let decoded = root_to_assignment(&build.labeled, &root.graph)?;
            if decoded == assignment {
                println!("roundtrip ok: square matches build, assignment recovered");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("assignment mismatch: got {decoded}");
                Ok(ExitCode::from(1))
            }
        }
        Command::Root { action } => run_root(action),
        Command::Family {
            k,
            attach,
            search_attach,
        } => run_family(k, attach, search_attach),
        Command::Convert {
            input,
            out,
            from,
            to,
        } => {
            let from = match from {
                Some(f) => f.0,
                None => Format::infer(&input)?,
            };
            let to = match to {
                Some(f) => f.0,
                None => Format::infer(&out)?,
            };
            if from == Format::Dot {
                bail!("DOT is export-only");
            }
            let text = std::fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            let (g, labels) = match from {
                Format::Json => parse_graph_json(&text)?,
                Format::EdgeList => (parse_edge_list(&text)?, None),
                Format::Dot => unreachable!(),
            };
            let rendered = render(&g, labels.as_ref(), to)?;
            emit(&rendered, Some(&out))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            suite,
            workdir,
            seed,
        } => {
            let names: Vec<String> = suite.split(',').map(|s| s.trim().to_string()).collect();
            let ctx = CheckContext {
                workdir: workdir.clone(),
                seed,
            };
            let reports = run_suite(&names, &ctx)?;
            let mut any_fail = false;
            let mut lines = String::new();
            for r in &reports {
                println!("{}", r.line());
                lines.push_str(&r.line());
                lines.push('\n');
                if r.status == Status::Fail {
                    any_fail = true;
                }
            }
            std::fs::create_dir_all(&workdir).ok();
            std::fs::write(workdir.join("report.txt"), lines)
                .with_context(|| "writing report.txt")?;
            Ok(if any_fail {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
    }
}

fn run_gadget(args: GadgetArgs) -> Result<ExitCode> {
    let (graph, labels) = match args.which.as_str() {
        "g1" => (gadget_g1().graph, None),
        "g2" => (gadget_g2().graph, None),
        "square" => (gadget_square(), None),
        "chain" => {
            let pattern = parse_pattern(
                args.pattern
                    .as_deref()
                    .ok_or_else(|| anyhow!("chain needs --pattern"))?,
            )?;
            let attach = match args.attach.as_deref() {
                Some(text) => parse_attach(text)?,
                None => vec![1; pattern.len().saturating_sub(1)],
            };
            (chain_family(&pattern, &attach)?.graph, None)
        }
        other => bail!("unknown gadget {other:?} (expected g1, g2, square, chain)"),
    };
    let rendered = render(&graph, labels, args.format.0)?;
    emit(&rendered, args.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn run_root(action: RootCommand) -> Result<ExitCode> {
    match action {
        RootCommand::Find {
            input,
            girth_min,
            limit,
            up_to_iso,
            out,
        } => {
            let (g, _) = read_graph(&input)?;
            let outcome = find_square_roots(&g, girth_min, SearchOptions { limit, up_to_iso })?;
            println!(
                "{} root{} (girth >= {girth_min}), enumeration {}",
                outcome.roots.len(),
                if outcome.roots.len() == 1 { "" } else { "s" },
                if outcome.complete { "complete" } else { "incomplete (limit reached)" }
            );
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir)
                    .with_context(|| format!("creating {}", dir.display()))?;
                for (i, r) in outcome.roots.iter().enumerate() {
                    let path = dir.join(format!("root_{i:03}.json"));
                    std::fs::write(&path, write_graph_json(r, None))
                        .with_context(|| format!("writing {}", path.display()))?;
                }
            }
            Ok(if outcome.roots.is_empty() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
        RootCommand::Verify {
            square,
            root,
            girth_min,
        } => {
            let (g, _) = read_graph(&square)?;
            let (h, _) = read_graph(&root)?;
            let report = verify_root(&h, &g, girth_min)?;
            print!("{report}");
            if !report.verified {
                println!();
            }
            Ok(if report.verified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn run_family(k: usize, attach: Option<String>, search_attach: bool) -> Result<ExitCode> {
    if k == 0 {
        bail!("k must be at least 1");
    }
    let default_attach: Vec<u8> = [12u8, 14, 12]
        .iter()
        .cycle()
        .take(k.saturating_sub(1))
        .copied()
        .collect();
    let attach = match attach.as_deref() {
        Some(text) => parse_attach(text)?,
        None => default_attach,
    };
    let report = |attach: &[u8]| -> Result<usize> {
        let chains: Vec<_> = chain_pattern_space(k)
            .iter()
            .map(|p| chain_family(p, attach))
            .collect::<Result<Vec<_>, _>>()?;
        let square = chains[0].graph.square();
        for c in &chains {
            if c.graph.square() != square {
                bail!("patterns disagree on the square at attach {attach:?}");
            }
        }
        let candidates: Vec<Graph> = chains.iter().map(|c| c.graph.clone()).collect();
        Ok(family_root_count(&square, &candidates)?)
    };
    if search_attach {
        let mut best: Option<(Vec<u8>, usize)> = None;
        let combos = attach_combinations(k.saturating_sub(1));
        for combo in combos {
            let classes = report(&combo)?;
            println!(
                "attach {:?}: {} labeled roots, {classes} classes",
                combo,
                1usize << k
            );
            if best.as_ref().is_none_or(|(_, b)| classes > *b) {
                best = Some((combo, classes));
            }
        }
        if let Some((combo, classes)) = best {
            println!("max classes {classes} at attach {combo:?}");
        }
    } else {
        let classes = report(&attach)?;
        println!(
            "k={k} attach {:?}: {} labeled roots of one square, {classes} isomorphism classes",
            attach,
            1usize << k
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn attach_combinations(len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for base in &out {
            for a in ATTACH_POINTS {
                let mut combo = base.clone();
                combo.push(a);
                next.push(combo);
            }
        }
        out = next;
    }
    out
}
