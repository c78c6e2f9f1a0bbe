//! Command-line front end: load a spec, run the requested computation, and
//! emit human, CSV, or JSON output. Exit codes: 0 = pass, 1 = verification
//! failure, 2 = usage or parse error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use sbraid::bernardi::{bernardi_count, region_contributions};
use sbraid::contrib::all_tree_reports;
use sbraid::geometry::{
    enumerate_faces, enumerate_regions, face_key_json, face_on_spec_hyperplane, face_to_marked_tree,
    region_key_json, region_key_of, witness_strings,
};
use sbraid::oracle::{char_poly, regions_via_zaslavsky};
use sbraid::report::build_report;
use sbraid::spec::{parse_spec, preset, OffsetSpec, Preset};
use sbraid::{Error, Result};

#[derive(Parser)]
#[command(
    name = "sbraid",
    version,
    about = "Count and certify regions of integer deformations of the braid arrangement"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads (0 = one per core)
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Csv,
    Json,
}

#[derive(Args)]
struct SpecArgs {
    /// Preset family: braid | catalan | shi | linial | semiorder | graphical
    #[arg(long)]
    preset: Option<String>,
    /// Node count for presets
    #[arg(short)]
    n: Option<usize>,
    /// Catalan preset parameter
    #[arg(short)]
    m: Option<i64>,
    /// Edges for the graphical preset, e.g. "1-2,2-3"
    #[arg(long)]
    edges: Option<String>,
    /// JSON config file (alternative to --preset)
    #[arg(long)]
    config: Option<PathBuf>,
}

impl SpecArgs {
    fn load(&self) -> Result<OffsetSpec> {
        match (&self.config, &self.preset) {
            (Some(_), Some(_)) => Err(Error::usage("--config and --preset are mutually exclusive")),
            (Some(path), None) => {
                let doc = std::fs::read_to_string(path)
                    .map_err(|e| Error::usage(format!("cannot read {}: {e}", path.display())))?;
                parse_spec(&doc)
            }
            (None, Some(name)) => {
                let n = self
                    .n
                    .ok_or_else(|| Error::usage("presets require -n <node count>"))?;
                let family = match name.as_str() {
                    "braid" => Preset::Braid,
                    "catalan" => Preset::Catalan(
                        self.m.ok_or_else(|| Error::usage("catalan preset requires -m"))?,
                    ),
                    "shi" => Preset::Shi,
                    "linial" => Preset::Linial,
                    "semiorder" => Preset::Semiorder,
                    "graphical" => Preset::Graphical(parse_edges(
                        self.edges
                            .as_deref()
                            .ok_or_else(|| Error::usage("graphical preset requires --edges"))?,
                    )?),
                    other => return Err(Error::usage(format!("unknown preset {other:?}"))),
                };
                preset(family, n)
            }
            (None, None) => Err(Error::usage("either --config or --preset is required")),
        }
    }
}

fn parse_edges(text: &str) -> Result<Vec<(usize, usize)>> {
    text.split(',')
        .map(|part| {
            let err = || Error::usage(format!("bad edge {part:?}: expected \"u-v\""));
            let (u, v) = part.split_once('-').ok_or_else(err)?;
            Ok((
                u.trim().parse().map_err(|_| err())?,
                v.trim().parse().map_err(|_| err())?,
            ))
        })
        .collect()
}

#[derive(Subcommand)]
enum Command {
    /// Signed tree-sum region count
    Count {
        #[command(flatten)]
        spec: SpecArgs,
        /// Also run the geometric and characteristic-polynomial counts and
        /// compare
        #[arg(long)]
        verify: bool,
    },
    /// Region table with exact rational witnesses
    Regions {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Faces of the ambient Catalan arrangement with marked-tree encodings
    Faces {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Per-region contribution table (every row must be 1)
    ContribRegion {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Per-tree contributions, combinatorial and geometric
    ContribTree {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Characteristic polynomial and Zaslavsky region count
    Oracle {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Run every verification and emit a report
    VerifyAll {
        #[command(flatten)]
        spec: SpecArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        // ignore failure: the global pool may already exist in tests
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global();
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse(_) | Error::Usage(_) => ExitCode::from(2),
                Error::Internal(_) => ExitCode::from(1),
            }
        }
    }
}

/// Returns whether all requested verifications passed.
fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Count { spec, verify } => cmd_count(&spec.load()?, *verify, cli.format),
        Command::Regions { spec } => cmd_regions(&spec.load()?, cli.format),
        Command::Faces { spec } => cmd_faces(&spec.load()?, cli.format),
        Command::ContribRegion { spec } => cmd_contrib_region(&spec.load()?, cli.format),
        Command::ContribTree { spec } => cmd_contrib_tree(&spec.load()?, cli.format),
        Command::Oracle { spec } => cmd_oracle(&spec.load()?, cli.format),
        Command::VerifyAll { spec } => cmd_verify_all(&spec.load()?, cli.format),
    }
}

fn cmd_count(spec: &OffsetSpec, verify: bool, format: Format) -> Result<bool> {
    let signed = bernardi_count(spec)?;
    if !verify {
        match format {
            Format::Json => println!(
                "{}",
                json!({"spec": spec.summary(), "count": signed.value.to_string(),
                       "boxed_trees": signed.terms})
            ),
            _ => println!("{}: {} regions ({} boxed trees)", spec.summary(), signed.value, signed.terms),
        }
        return Ok(true);
    }
    let geometric = enumerate_regions(spec).len();
    let zaslavsky = regions_via_zaslavsky(spec)?;
    let ok = signed.value.to_string() == geometric.to_string()
        && signed.value == zaslavsky;
    match format {
        Format::Json => println!(
            "{}",
            json!({"spec": spec.summary(), "bernardi": signed.value.to_string(),
                   "geometric": geometric, "zaslavsky": zaslavsky.to_string(),
                   "pass": ok})
        ),
        _ => println!(
            "{}: bernardi {} / geometric {} / zaslavsky {} -> {}",
            spec.summary(),
            signed.value,
            geometric,
            zaslavsky,
            verdict(ok)
        ),
    }
    Ok(ok)
}

fn cmd_regions(spec: &OffsetSpec, format: Format) -> Result<bool> {
    let regions = enumerate_regions(spec);
    let n = spec.n();
    match format {
        Format::Json => {
            let rows: Vec<_> = regions
                .iter()
                .map(|r| json!({"key": region_key_json(n, &r.key), "witness": witness_strings(&r.witness)}))
                .collect();
            println!("{}", serde_json::to_string_pretty(&rows).expect("json"));
        }
        Format::Csv => {
            println!("key,witness");
            for r in &regions {
                println!(
                    "{},{}",
                    region_key_json(n, &r.key),
                    witness_strings(&r.witness).join(" ")
                );
            }
        }
        Format::Human => {
            println!("{}: {} regions", spec.summary(), regions.len());
            for r in &regions {
                println!(
                    "  {}  at ({})",
                    region_key_json(n, &r.key),
                    witness_strings(&r.witness).join(", ")
                );
            }
        }
    }
    Ok(true)
}

fn cmd_faces(spec: &OffsetSpec, format: Format) -> Result<bool> {
    let n = spec.n();
    let m = spec.max_offset();
    let catalan = preset(Preset::Catalan(m), n)?;
    let faces = enumerate_faces(&catalan);
    let mut rows = Vec::new();
    for f in &faces {
        let marked = face_to_marked_tree(m, &f.witness)?;
        let survives = !face_on_spec_hyperplane(spec, &f.key);
        let region = if survives {
            Some(region_key_of(spec, &f.witness)?)
        } else {
            None
        };
        rows.push(json!({
            "key": face_key_json(n, &f.key),
            "dim": f.dim,
            "tree": marked.tree.encode(),
            "marked": marked.marked.iter().map(|&(p, c)| format!("{p}-{c}")).collect::<Vec<_>>(),
            "in_f_s": survives,
            "region": region.map(|k| region_key_json(n, &k)),
        }));
    }
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&rows).expect("json")),
        Format::Csv => {
            println!("key,dim,tree,marked,in_f_s,region");
            for r in &rows {
                println!(
                    "{},{},{},{},{},{}",
                    r["key"],
                    r["dim"],
                    r["tree"],
                    r["marked"].as_array().expect("array").len(),
                    r["in_f_s"],
                    r["region"]
                );
            }
        }
        Format::Human => {
            println!("{}: {} Catalan faces (ambient m={})", spec.summary(), rows.len(), m);
            for r in &rows {
                println!(
                    "  dim {} {} tree {} {}",
                    r["dim"],
                    r["key"],
                    r["tree"],
                    if r["in_f_s"].as_bool() == Some(true) {
                        format!("in region {}", r["region"])
                    } else {
                        "on an arrangement hyperplane".to_string()
                    }
                );
            }
        }
    }
    Ok(true)
}

fn cmd_contrib_region(spec: &OffsetSpec, format: Format) -> Result<bool> {
    let rows = region_contributions(spec)?;
    let n = spec.n();
    let ok = rows.iter().all(|r| r.contribution == 1);
    match format {
        Format::Json => {
            let out: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({"key": region_key_json(n, &r.region.key), "trees": r.region.trees.len(),
                           "boxed_trees": r.boxing_count, "contribution": r.contribution})
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&out).expect("json"));
        }
        Format::Csv => {
            println!("key,trees,boxed_trees,contribution");
            for r in &rows {
                println!(
                    "{},{},{},{}",
                    region_key_json(n, &r.region.key),
                    r.region.trees.len(),
                    r.boxing_count,
                    r.contribution
                );
            }
        }
        Format::Human => {
            println!("{}: {} regions", spec.summary(), rows.len());
            for r in &rows {
                println!(
                    "  {}  {} trees, {} boxed trees, contribution {}",
                    region_key_json(n, &r.region.key),
                    r.region.trees.len(),
                    r.boxing_count,
                    r.contribution
                );
            }
            println!("every region contributes 1: {}", verdict(ok));
        }
    }
    Ok(ok)
}

fn cmd_contrib_tree(spec: &OffsetSpec, format: Format) -> Result<bool> {
    let rows = all_tree_reports(spec)?;
    let ok = rows
        .iter()
        .all(|r| r.w_geometric == r.w_boxing && (-1..=1).contains(&r.w_geometric));
    let fmt_sets =
        |sets: &[std::collections::BTreeSet<usize>]| -> String {
            sets.iter()
                .map(|s| format!("{{{}}}", s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")))
                .collect::<Vec<_>>()
                .join(" ")
        };
    match format {
        Format::Json => {
            let out: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({"tree": r.tree.encode(), "w_boxing": r.w_boxing,
                           "w_geometric": r.w_geometric,
                           "intervals": r.intervals.iter().map(|s| s.iter().copied().collect::<Vec<_>>()).collect::<Vec<_>>(),
                           "components": r.components.iter().map(|s| s.iter().copied().collect::<Vec<_>>()).collect::<Vec<_>>(),
                           "uncovered": r.uncovered.iter().copied().collect::<Vec<_>>(),
                           "embedded_m": r.embedded_m})
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&out).expect("json"));
        }
        Format::Csv => {
            println!("tree,w_boxing,w_geometric,intervals,components,uncovered,embedded_m");
            for r in &rows {
                println!(
                    "{},{},{},{},{},{},{}",
                    r.tree.encode(),
                    r.w_boxing,
                    r.w_geometric,
                    fmt_sets(&r.intervals),
                    fmt_sets(&r.components),
                    r.uncovered.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "),
                    r.embedded_m
                );
            }
        }
        Format::Human => {
            println!("{}: {} trees", spec.summary(), rows.len());
            for r in &rows {
                println!(
                    "  {}  w = {} (boxing) / {} (geometric)  intervals {}  components {}  uncovered {{{}}}",
                    r.tree.encode(),
                    r.w_boxing,
                    r.w_geometric,
                    fmt_sets(&r.intervals),
                    fmt_sets(&r.components),
                    r.uncovered.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
                );
            }
            println!("all contributions agree and lie in {{-1,0,1}}: {}", verdict(ok));
        }
    }
    Ok(ok)
}

fn cmd_oracle(spec: &OffsetSpec, format: Format) -> Result<bool> {
    let poly = char_poly(spec)?;
    let regions = regions_via_zaslavsky(spec)?;
    match format {
        Format::Json => println!(
            "{}",
            json!({"spec": spec.summary(),
                   "coefficients": poly.coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                   "regions": regions.to_string()})
        ),
        _ => {
            let terms: Vec<String> = poly
                .coefficients
                .iter()
                .enumerate()
                .rev()
                .filter(|(_, c)| !num::Zero::is_zero(*c))
                .map(|(k, c)| format!("{c}*q^{k}"))
                .collect();
            println!("{}: chi(q) = {}", spec.summary(), terms.join(" + "));
            println!("regions via Zaslavsky: {regions}");
        }
    }
    Ok(true)
}

fn cmd_verify_all(spec: &OffsetSpec, format: Format) -> Result<bool> {
    let report = build_report(spec)?;
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).expect("json")),
        _ => {
            println!("{}", report.spec);
            println!(
                "  counts: bernardi {} / geometric {} / zaslavsky {} -> {}",
                report.counts.bernardi,
                report.counts.geometric,
                report.counts.zaslavsky,
                verdict(report.counts_agree)
            );
            println!(
                "  per-region contributions all 1: {}",
                verdict(report.all_region_contributions_one)
            );
            println!(
                "  Euler sums all 1: {}",
                verdict(report.all_euler_contributions_one)
            );
            println!(
                "  {} trees, geometric = boxing: {}",
                report.trees,
                verdict(report.all_tree_contributions_agree)
            );
            println!("verdict: {}", verdict(report.pass));
        }
    }
    Ok(report.pass)
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}
