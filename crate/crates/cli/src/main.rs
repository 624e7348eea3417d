//! Command-line front end. One executable gathering the analyses: per-file
//! reports, rectangle covers, family growth tables, presentation
//! composition, and the theorem cross-check suites.
//!
//! Exit codes: 0 success, 1 theorem disagreement, 2 unreadable or
//! ill-formed input.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use betagraph_core::blockgraph::adjacency::{beta_loop_exists, beta_pseudocomplete, LoopWitness};
use betagraph_core::blockgraph::colouring::{finitely_colourable, ColourabilityOutcome};
use betagraph_core::blockgraph::compose::composition_check;
use betagraph_core::blockgraph::invariants::{
    beta_proper_check, invariant_report, type_level_multiedge, weakly_sparse,
};
use betagraph_core::blockgraph::reach::{beta_strongly_connected, ConnectivityOutcome};
use betagraph_core::blockgraph::BlockGraph;
use betagraph_core::budget::Budget;
use betagraph_core::checks::{run_all, CheckOptions};
use betagraph_core::digraph::{chromatic_number, Chromatic, ChromaticOptions, Digraph, Extent};
use betagraph_core::report::Report;
use betagraph_core::smallrel::{
    ambient_grid, compose, composition_counterexample, is_cover, min_cover, staircase_growth,
    worst_case_cover, CoverOptions, CoverOutcome, Relation, RelationFamily,
};
use betagraph_core::textio::header_keyword;
use betagraph_core::ultrafilter::{extend_to_ultrafilter, has_fip, FipOutcome, SetFamily, UltraExtension};

#[derive(Parser)]
#[command(name = "betagraph", version, about = "Finitely presented graphs and their extensions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one input file; the first line decides its kind (digraph,
    /// blockgraph, relation or universe).
    Analyze { path: PathBuf },
    /// Full extension report for a block presentation.
    BetaReport { path: PathBuf },
    /// Finite intersection property and ultrafilter extension of a set
    /// family.
    Fip { path: PathBuf },
    /// Least rectangle cover of a subrelation inside an ambient relation.
    Cover {
        path: PathBuf,
        /// Subrelation file; `self` covers the file's relation inside its
        /// own full grid.
        #[arg(long, default_value = "self")]
        sub: String,
        /// Insist on the exact solver (within its instance caps).
        #[arg(long, conflicts_with = "greedy")]
        exact: bool,
        /// Skip the exact solver, report greedy and fooling bounds only.
        #[arg(long)]
        greedy: bool,
        /// Time budget in milliseconds.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Growth table for a named relation family: staircase, full, or
    /// compose-counterexample.
    Family {
        name: String,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
    },
    /// Compose two relations or two block presentations; presentations are
    /// cross-checked against walks.
    Compose { first: PathBuf, second: PathBuf },
    /// Run every theorem cross-check suite over a seeded corpus.
    CheckTheorems {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Analyze { path } => cmd_analyze(&path),
        Command::BetaReport { path } => cmd_beta_report(&path),
        Command::Fip { path } => cmd_fip(&path),
        Command::Cover { path, sub, exact, greedy, budget } => {
            cmd_cover(&path, &sub, exact, greedy, budget)
        }
        Command::Family { name, max_n } => cmd_family(&name, max_n),
        Command::Compose { first, second } => cmd_compose(&first, &second),
        Command::CheckTheorems { seed, count } => cmd_check_theorems(seed, count),
    }
}

fn input_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

// Stdout is line buffered, so a long report reaches a pipe one line at a
// time; a reader that stops early (`betagraph ... | head`) must end the run
// quietly instead of panicking mid-write.
fn emit(text: impl std::fmt::Display) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if let Err(e) = write!(out, "{text}").and_then(|()| out.flush()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write to stdout: {e}");
        std::process::exit(2);
    }
}

fn read_input(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn env_budget() -> Budget {
    match std::env::var("BETAGRAPH_BUDGET_MS").ok().and_then(|v| v.parse::<u64>().ok()) {
        Some(ms) => Budget::millis(ms),
        None => Budget::unlimited(),
    }
}

fn fmt_chromatic(c: &Chromatic) -> String {
    match c {
        Chromatic::Exact(k) => k.to_string(),
        Chromatic::NoColouring => "none".to_string(),
        Chromatic::Interval { lower, upper } => format!("{lower}..{upper}"),
    }
}

fn fmt_extent(e: &Option<Extent>) -> String {
    match e {
        Some(e) => e.to_string(),
        None => "unresolved".to_string(),
    }
}

// ---------------------------------------------------------------------------
// analyze

fn cmd_analyze(path: &Path) -> ExitCode {
    let text = match read_input(path) {
        Ok(t) => t,
        Err(e) => return input_error(e),
    };
    let report = match header_keyword(&text) {
        Some("digraph") => Digraph::parse(&text).map(|g| digraph_report(&g)),
        Some("blockgraph") => BlockGraph::parse(&text).map(|bg| blockgraph_report(&bg)),
        Some("relation") => Relation::parse(&text).map(|r| relation_report(&r)),
        Some("universe") => SetFamily::parse(&text).map(|f| family_report(&f)),
        other => {
            return input_error(format!(
                "unrecognized input header {:?}, expected digraph, blockgraph, relation or universe",
                other.unwrap_or("")
            ))
        }
    };
    match report {
        Ok(report) => {
            emit(&report);
            ExitCode::SUCCESS
        }
        Err(e) => input_error(e),
    }
}

fn digraph_report(g: &Digraph) -> Report {
    let mut r = Report::new();
    r.entry("digraph", "vertices", g.vertex_count());
    r.entry("digraph", "edges", g.edge_count());
    r.entry("digraph", "loops", g.loop_edges().len());
    r.entry("digraph", "loop_free", g.loop_edges().is_empty());
    r.entry("digraph", "weak_components", g.weak_components().len());
    r.entry("digraph", "weakly_connected", g.is_weakly_connected());
    r.entry("digraph", "pseudocomplete", g.is_pseudocomplete());
    r.entry("digraph", "proper", g.is_proper());
    r.entry("digraph", "no_isolated", g.no_isolated());
    r.entry("digraph", "max_out_degree", g.max_out_degree());
    r.entry("digraph", "gamma_diameter", g.gamma_diameter());
    let opts = ChromaticOptions { budget: env_budget(), ..ChromaticOptions::default() };
    r.entry("digraph", "chromatic", fmt_chromatic(&chromatic_number(g, &opts)));
    r
}

fn blockgraph_report(bg: &BlockGraph) -> Report {
    let budget = env_budget();
    let mut r = Report::new();
    r.entry("blockgraph", "blocks", bg.block_count());
    r.entry("blockgraph", "countable_blocks", bg.omega_blocks().len());
    r.entry("blockgraph", "atoms", bg.atoms().len());
    r.entry("blockgraph", "explicit_edges", bg.explicit_edges().len());
    r.entry("blockgraph", "guard_level", bg.guard_level());
    r.entry("blockgraph", "finite", bg.is_finite_graph());

    let beta_loop = match beta_loop_exists(bg) {
        None => "none".to_string(),
        Some(LoopWitness::Point(v)) => format!("point {}", bg.vertex_name(&v)),
        Some(LoopWitness::Generic(b)) => format!("generic {}", bg.blocks()[b].name),
    };
    r.entry("extension", "beta_loop", beta_loop);
    match finitely_colourable(bg) {
        ColourabilityOutcome::Colourable(scheme) => {
            r.entry("extension", "finitely_colourable", true);
            r.entry("extension", "colours", scheme.colour_count());
        }
        ColourabilityOutcome::Obstructed(_) => {
            r.entry("extension", "finitely_colourable", false);
        }
    }
    match beta_strongly_connected(bg, &budget) {
        ConnectivityOutcome::Connected { forward_radius, backward_radius } => {
            r.entry("extension", "strongly_connected", true);
            r.entry("extension", "forward_radius", forward_radius);
            r.entry("extension", "backward_radius", backward_radius);
        }
        ConnectivityOutcome::Disconnected { .. } => {
            r.entry("extension", "strongly_connected", false);
        }
        ConnectivityOutcome::Unresolved => {
            r.entry("extension", "strongly_connected", "unresolved");
        }
    }
    r.entry("extension", "pseudocomplete", beta_pseudocomplete(bg).holds);

    let proper = beta_proper_check(bg);
    r.entry("extension", "g_proper", proper.graph_proper);
    r.entry("extension", "e_small", proper.edge_relation_small);
    r.entry("extension", "beta_proper_predicted", proper.extension_proper_predicted);
    r.entry("extension", "weakly_sparse", weakly_sparse(bg));
    let multiedge = match type_level_multiedge(bg) {
        None => "none".to_string(),
        Some((b, c)) => format!("generic {} -> {}", bg.blocks()[b].name, bg.blocks()[c].name),
    };
    r.entry("extension", "type_multiedge", multiedge);

    let inv = invariant_report(bg, &budget);
    r.entry("invariants", "degree_graph", inv.degree_graph);
    r.entry("invariants", "degree_extension", inv.degree_extension);
    r.entry("invariants", "diameter_graph", fmt_extent(&inv.diameter_graph));
    r.entry("invariants", "diameter_extension", fmt_extent(&inv.diameter_extension));
    r.entry("invariants", "chi_graph", inv.chi_graph);
    r.entry("invariants", "chi_extension", inv.chi_extension);
    for p in &inv.propositions {
        r.entry("propositions", p.name, p.holds);
    }
    r
}

fn relation_report(rel: &Relation) -> Report {
    let mut r = Report::new();
    r.entry("relation", "rows", rel.x_size());
    r.entry("relation", "columns", rel.y_size());
    r.entry("relation", "pairs", rel.pairs().len());
    let opts = CoverOptions { budget: env_budget(), ..CoverOptions::default() };
    match min_cover(&ambient_grid(rel), rel, &opts) {
        Ok(CoverOutcome::Exact { cover }) => {
            r.entry("relation", "min_cover_in_grid", cover.len());
        }
        Ok(CoverOutcome::Bounds { lower, upper, .. }) => {
            r.entry("relation", "min_cover_in_grid", format!("{lower}..{upper}"));
        }
        Err(e) => r.entry("relation", "min_cover_in_grid", format!("error: {e}")),
    }
    r
}

fn family_report(f: &SetFamily) -> Report {
    let mut r = Report::new();
    r.entry("universe", "size", f.universe().size());
    r.entry("universe", "members", f.members().len());
    match has_fip(f) {
        FipOutcome::Holds { intersection } => {
            r.entry("fip", "holds", true);
            let members: Vec<String> = intersection.iter().map(|i| i.to_string()).collect();
            r.entry("fip", "intersection", members.join(","));
        }
        FipOutcome::Fails { refuting } => {
            r.entry("fip", "holds", false);
            let members: Vec<String> = refuting.iter().map(|i| i.to_string()).collect();
            r.entry("fip", "refuting_members", members.join(","));
        }
    }
    match extend_to_ultrafilter(f) {
        Ok(UltraExtension::Extended(u)) => {
            r.entry("ultrafilter", "extends", true);
            r.entry("ultrafilter", "principal_at", u.point());
        }
        Ok(UltraExtension::Refuted { .. }) => {
            r.entry("ultrafilter", "extends", false);
        }
        Err(e) => {
            r.entry("ultrafilter", "extends", format!("error: {e}"));
        }
    }
    r
}

// ---------------------------------------------------------------------------
// dedicated commands

fn cmd_beta_report(path: &Path) -> ExitCode {
    let text = match read_input(path) {
        Ok(t) => t,
        Err(e) => return input_error(e),
    };
    match BlockGraph::parse(&text) {
        Ok(bg) => {
            emit(blockgraph_report(&bg));
            ExitCode::SUCCESS
        }
        Err(e) => input_error(e),
    }
}

fn cmd_fip(path: &Path) -> ExitCode {
    let text = match read_input(path) {
        Ok(t) => t,
        Err(e) => return input_error(e),
    };
    match SetFamily::parse(&text) {
        Ok(f) => {
            emit(family_report(&f));
            ExitCode::SUCCESS
        }
        Err(e) => input_error(e),
    }
}

fn cmd_cover(
    path: &Path,
    sub: &str,
    exact: bool,
    greedy: bool,
    budget_ms: Option<u64>,
) -> ExitCode {
    let text = match read_input(path) {
        Ok(t) => t,
        Err(e) => return input_error(e),
    };
    let named = match Relation::parse(&text) {
        Ok(r) => r,
        Err(e) => return input_error(e),
    };
    // `self` asks for the named relation as the figure inside its own full
    // grid; a file provides the figure inside the named relation.
    let (rho, q, source) = if sub == "self" {
        (ambient_grid(&named), named, "self".to_string())
    } else {
        let sub_text = match read_input(Path::new(sub)) {
            Ok(t) => t,
            Err(e) => return input_error(e),
        };
        match Relation::parse(&sub_text) {
            Ok(r) => (named, r, sub.to_string()),
            Err(e) => return input_error(e),
        }
    };
    let budget = match budget_ms {
        Some(ms) => Budget::millis(ms),
        None => env_budget(),
    };
    let exact_cell_cap = if greedy {
        0
    } else if exact {
        64
    } else {
        CoverOptions::default().exact_cell_cap
    };
    let opts = CoverOptions { exact_cell_cap, budget };
    let outcome = match min_cover(&rho, &q, &opts) {
        Ok(o) => o,
        Err(e) => return input_error(e),
    };
    let mut r = Report::new();
    r.entry("cover", "ambient", format!("{} x {}", rho.x_size(), rho.y_size()));
    r.entry("cover", "sub", source);
    r.entry("cover", "q_pairs", q.pairs().len());
    let witness = match &outcome {
        CoverOutcome::Exact { cover } => {
            r.entry("cover", "min_cover", cover.len());
            r.entry("cover", "certified", "exact");
            cover
        }
        CoverOutcome::Bounds { lower, upper, witness } => {
            r.entry("cover", "min_cover", format!("{lower}..{upper}"));
            r.entry("cover", "certified", "bounds");
            witness
        }
    };
    debug_assert_eq!(is_cover(&rho, &q, witness), Ok(true));
    for (i, rect) in witness.rectangles.iter().enumerate() {
        let rows: Vec<String> = rect.rows.iter().map(|x| x.to_string()).collect();
        let cols: Vec<String> = rect.cols.iter().map(|y| y.to_string()).collect();
        r.entry(
            "rectangles",
            &format!("rectangle.{i}"),
            format!("rows {} cols {}", rows.join(","), cols.join(",")),
        );
    }
    emit(&r);
    ExitCode::SUCCESS
}

fn cmd_family(name: &str, max_n: usize) -> ExitCode {
    let opts = CoverOptions { budget: env_budget(), ..CoverOptions::default() };
    let mut r = Report::new();
    r.entry("family", "name", name);
    r.entry("family", "max_n", max_n);
    match name {
        "staircase" => {
            let points = match staircase_growth(max_n, &opts) {
                Ok(p) => p,
                Err(e) => return input_error(e),
            };
            for p in points {
                let value = match p.exact {
                    Some(k) => k.to_string(),
                    None => format!("{}..{}", p.fooling_lower, p.greedy_upper),
                };
                r.entry("growth", &format!("size.{}", p.n), value);
            }
        }
        "full" => {
            // Worst cover number over subrelations of the full n x n grid;
            // exhaustive while the grid is small, sampled beyond that. A
            // cover through rows never needs more than n rectangles.
            for n in 1..=max_n {
                let rel = match RelationFamily::Full.generate(n) {
                    Ok(rel) => rel,
                    Err(e) => return input_error(e),
                };
                let worst = if n <= 4 {
                    match worst_case_cover(&rel, &opts) {
                        Ok(w) => format!("{w} (exhaustive)"),
                        Err(e) => return input_error(e),
                    }
                } else {
                    match sampled_worst_cover(&rel, &opts) {
                        Ok(w) => format!("{w} (sampled)"),
                        Err(e) => return input_error(e),
                    }
                };
                r.entry("growth", &format!("worst.{n}"), worst);
                r.entry("growth", &format!("bound.{n}"), n);
            }
        }
        "compose-counterexample" => {
            for n in 1..=max_n {
                let cx = match composition_counterexample(n, &opts) {
                    Ok(cx) => cx,
                    Err(e) => return input_error(e),
                };
                r.entry(
                    "growth",
                    &format!("factors.{n}"),
                    cx.tall_worst.max(cx.wide_worst),
                );
                r.entry("growth", &format!("composite.{n}"), cx.composite_staircase);
            }
        }
        other => {
            return input_error(format!(
                "unknown family {other:?}, expected staircase, full or compose-counterexample"
            ))
        }
    }
    emit(&r);
    ExitCode::SUCCESS
}

fn sampled_worst_cover(rho: &Relation, opts: &CoverOptions) -> Result<usize, String> {
    use betagraph_core::corpus;
    let mut rng = corpus::rng(0x5a3);
    let mut worst = 0;
    for _ in 0..100 {
        let q = corpus::random_subrelation(&mut rng, rho);
        let outcome = min_cover(rho, &q, opts).map_err(|e| e.to_string())?;
        let size = match outcome {
            CoverOutcome::Exact { cover } => cover.len(),
            CoverOutcome::Bounds { upper, .. } => upper,
        };
        worst = worst.max(size);
    }
    Ok(worst)
}

fn cmd_compose(first: &Path, second: &Path) -> ExitCode {
    let (text1, text2) = match (read_input(first), read_input(second)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return input_error(e),
    };
    match (header_keyword(&text1), header_keyword(&text2)) {
        (Some("relation"), Some("relation")) => {
            let (a, b) = match (Relation::parse(&text1), Relation::parse(&text2)) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(e), _) | (_, Err(e)) => return input_error(e),
            };
            match compose(&a, &b) {
                Ok(c) => {
                    emit(&c);
                    ExitCode::SUCCESS
                }
                Err(e) => input_error(e),
            }
        }
        (Some("blockgraph"), Some("blockgraph")) => {
            let (a, b) = match (BlockGraph::parse(&text1), BlockGraph::parse(&text2)) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(e), _) | (_, Err(e)) => return input_error(e),
            };
            let check = match composition_check(&a, &b) {
                Ok(c) => c,
                Err(e) => return input_error(e),
            };
            let mut r = Report::new();
            r.entry("composition", "atoms", check.composite.atoms().len());
            r.entry("composition", "truncation_level", check.truncation_level);
            r.entry("composition", "truncation_agrees", check.truncation_agrees);
            r.entry("composition", "type_pool", check.type_pool.len());
            r.entry("composition", "type_agrees", check.type_agrees);
            emit(format_args!("{r}\n{}", check.composite));
            if check.agrees() {
                ExitCode::SUCCESS
            } else {
                for m in &check.mismatches {
                    eprintln!("disagree: {m}");
                }
                ExitCode::from(1)
            }
        }
        (a, b) => input_error(format!(
            "cannot compose {:?} with {:?}, need two relations or two blockgraphs",
            a.unwrap_or(""),
            b.unwrap_or("")
        )),
    }
}

fn cmd_check_theorems(seed: u64, count: usize) -> ExitCode {
    let budget = env_budget();
    let opts = CheckOptions { seed, cases: count, budget };
    let outcomes = run_all(&opts);
    let mut r = Report::new();
    r.entry("run", "seed", seed);
    r.entry("run", "count", count);
    let mut total_disagreements = 0;
    let mut total_skipped = 0;
    for outcome in &outcomes {
        r.entry(outcome.name, "cases", outcome.cases);
        r.entry(outcome.name, "skipped", outcome.skipped);
        r.entry(outcome.name, "disagreements", outcome.disagreements.len());
        for (i, witness) in outcome.disagreements.iter().enumerate() {
            r.entry(outcome.name, &format!("witness.{i}"), witness);
        }
        total_disagreements += outcome.disagreements.len();
        total_skipped += outcome.skipped;
    }
    r.entry("summary", "suites", outcomes.len());
    r.entry("summary", "skipped", total_skipped);
    r.entry("summary", "disagreements", total_disagreements);
    r.entry("summary", "verdict", if total_disagreements == 0 { "agree" } else { "disagree" });
    emit(&r);
    if total_disagreements == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
