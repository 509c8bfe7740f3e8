//! `dcjindel`: census, distances, ILP export and import, distance matrices and
//! simulation of genome pairs.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use dcjindel::decomposition::{induce_decomposition, CapMatching, Score, SiblingSet};
use dcjindel::diagram::{build_mrd, cap_mrd, CappingPlan, MultiDiagram, Side};
use dcjindel::exact::{
    count_max_sibling_sets, enumerate_max_sibling_sets, ilp_optimum_by_enumeration, solve_diagram, DEFAULT_BUDGET,
};
use dcjindel::genome::{census, parse_genomes, write_genomes, Genome};
use dcjindel::ilp::{
    build_ilp_with, extract_result, fingerprint_of, parse_lp_structure, read_solution, write_lp, write_solution,
    IlpModel, IlpOptions,
};
use dcjindel::sim::{simulate_pair, SimConfig};
use dcjindel::singular::{singular_distance, SingularBreakdown};
use dcjindel::{Error, ParseError};
use rayon::prelude::*;

const EXIT_FAILURE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_PARTIAL: u8 = 4;

#[derive(Parser)]
#[command(name = "dcjindel", version, about = "DCJ-indel distance of natural genomes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Formula for singular genomes, enumeration within budget, LP otherwise.
    Auto,
    /// Closed formula; singular genomes only.
    Formula,
    /// Enumeration of maximal sibling sets.
    Oracle,
    /// Optimum of the ILP over sibling sets and cap matchings.
    Ilp,
}

#[derive(Subcommand)]
enum Command {
    /// Per-family occurrence counts of two genomes.
    Census {
        file: PathBuf,
        #[arg(long)]
        tsv: bool,
    },
    /// Distance of two genomes.
    Dist {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        mode: Mode,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        /// Where auto mode writes the LP when the budget is exceeded.
        #[arg(long)]
        out: Option<PathBuf>,
        /// In ilp mode, write the optimal assignment as a solution file.
        #[arg(long)]
        write_sol: Option<PathBuf>,
    },
    /// Write the ILP of two genomes and a metadata sidecar.
    Ilp {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Omit the constraints that fix where transitions are counted.
        #[arg(long)]
        free: bool,
    },
    /// Check a solver assignment and report the distance it encodes.
    SolveFile {
        file: PathBuf,
        #[arg(long)]
        sol: PathBuf,
        /// LP file the solution was computed for; its fingerprint is checked.
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long)]
        free: bool,
    },
    /// Lower-triangular PHYLIP matrix of all pairwise distances.
    Matrix {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        mode: Mode,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Simulate a genome pair from a common root.
    Sim {
        #[arg(long, default_value_t = 20_000)]
        root_length: usize,
        /// Expected DCJ count on both edges.
        #[arg(long)]
        dcj: Option<f64>,
        #[arg(long, default_value_t = 100.0)]
        weight_a: f64,
        #[arg(long, default_value_t = 100.0)]
        weight_b: f64,
        /// Sets the insertion, deletion and duplication rates at once.
        #[arg(long)]
        rates: Option<f64>,
        #[arg(long, default_value_t = 0.1)]
        ins: f64,
        #[arg(long, default_value_t = 0.2)]
        del: f64,
        #[arg(long, default_value_t = 0.4)]
        dup: f64,
        #[arg(long, default_value_t = 4.0)]
        zipf_indel: f64,
        #[arg(long, default_value_t = 6.0)]
        zipf_dup: f64,
        #[arg(long, default_value_t = 1)]
        chromosomes: usize,
        #[arg(long)]
        circular: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Genome file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON-lines event log.
        #[arg(long)]
        log: Option<PathBuf>,
    },
}

/// Input that is well formed but unusable for the command; exits with the parse code.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn read_genomes(path: &Path) -> Result<Vec<Genome>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_genomes(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_pair(path: &Path) -> Result<(Genome, Genome)> {
    let mut gs = read_genomes(path)?;
    if gs.len() != 2 {
        return Err(UsageError(format!(
            "{} holds {} genomes; exactly two are required",
            path.display(),
            gs.len()
        ))
        .into());
    }
    let b = gs.pop().expect("two genomes");
    Ok((gs.pop().expect("two genomes"), b))
}

fn capped_diagram(a: &Genome, b: &Genome) -> Result<MultiDiagram> {
    let c = census(a, b);
    Ok(cap_mrd(&build_mrd(a, b, &c), CappingPlan::from_census(&c))?)
}

fn matching_text(d: &MultiDiagram, s: &SiblingSet) -> String {
    let mut pairs = s.matching(d);
    pairs.sort_unstable();
    let items: Vec<String> = pairs
        .iter()
        .map(|&(ia, ib)| {
            let occ = d.occurrence_id(Side::A, ia).expect("matched occurrence");
            format!("{}:A{}=B{}", d.family_name(d.occurrence(occ).family), ia + 1, ib + 1)
        })
        .collect();
    if items.is_empty() {
        "(none)".into()
    } else {
        items.join(" ")
    }
}

fn caps_text(p: &CapMatching) -> String {
    let items: Vec<String> = p.partner().iter().enumerate().map(|(i, j)| format!("{}-{}", i + 1, j + 1)).collect();
    if items.is_empty() {
        "(none)".into()
    } else {
        items.join(" ")
    }
}

fn singular_text(br: &SingularBreakdown) -> String {
    let c = br.tally.counts;
    format!(
        "c={} i={} sum_lambda={} delta={} (W={} WA={} WB={} M={} MA={} MB={} Z={} N={})",
        br.cycles, br.ab_paths, br.lambda_sum, br.tally.delta, c.w, c.wa, c.wb, c.m, c.ma, c.mb, c.z, c.n
    )
}

struct Report {
    mode: &'static str,
    distance: Option<i64>,
    lines: Vec<String>,
}

impl Report {
    fn render(&self) -> String {
        let mut out = format!("mode: {}\n", self.mode);
        if let Some(d) = self.distance {
            let _ = writeln!(out, "distance: {d}");
        }
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        out
    }
}

fn formula(a: &Genome, b: &Genome) -> Result<Report> {
    let r = singular_distance(a, b)?;
    let d = build_mrd(a, b, &census(a, b));
    let s = enumerate_max_sibling_sets(&d, 1)?.next().expect("one maximal sibling set");
    Ok(Report {
        mode: "formula",
        distance: Some(r.distance),
        lines: vec![
            format!("common: {}", r.breakdown.common),
            format!("breakdown: {}", singular_text(&r.breakdown)),
            format!("matching: {}", matching_text(&d, &s)),
        ],
    })
}

fn oracle(a: &Genome, b: &Genome, budget: u128) -> Result<Report> {
    let c = census(a, b);
    let d = build_mrd(a, b, &c);
    let best = solve_diagram(&d, budget)?;
    let Score::Uncapped(br) = &best.decomposition.score else {
        unreachable!("uncapped diagram");
    };
    Ok(Report {
        mode: "oracle",
        distance: Some(best.distance),
        lines: vec![
            format!("n_star: {}", c.n_star()),
            format!("sibling_sets: {}", best.sets_scored),
            format!("breakdown: {}", singular_text(br)),
            format!("matching: {}", matching_text(&d, &best.sibling_set)),
        ],
    })
}

fn ilp_report(a: &Genome, b: &Genome, budget: u128, write_sol: Option<&Path>) -> Result<Report> {
    let best = ilp_optimum_by_enumeration(a, b, IlpOptions::default(), budget)?;
    let d = capped_diagram(a, b)?;
    let dec = induce_decomposition(&d, &best.sibling_set, Some(&best.cap_matching))?;
    let Score::Capped(sc) = dec.score else {
        unreachable!("capped diagram");
    };
    if let Some(path) = write_sol {
        let m = build_ilp_with(&d, IlpOptions::default())?;
        let fp = fingerprint_of(lp_body(&write_lp(&m)));
        fs::write(path, write_solution(&m, &best.values, Some(&fp)))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(Report {
        mode: "ilp",
        distance: Some(best.distance),
        lines: vec![
            format!("n_star: {}", d.n_star()),
            format!("p_star: {}", d.p_star()),
            format!("objective: {}", dcjindel::decomposition::HalfInteger(best.objective_x2)),
            format!(
                "breakdown: c~={} aleph={} s={}",
                sc.indel_free_cycles, sc.transitions, sc.circular_singletons
            ),
            format!("matching: {}", matching_text(&d, &best.sibling_set)),
            format!("caps: {}", caps_text(&best.cap_matching)),
        ],
    })
}

fn lp_body(lp: &str) -> &str {
    lp.split_once('\n').map_or("", |(_, body)| body)
}

fn write_model(d: &MultiDiagram, m: &IlpModel, out: &Path) -> Result<String> {
    let lp = write_lp(m);
    let fingerprint = fingerprint_of(lp_body(&lp));
    fs::write(out, &lp).with_context(|| format!("writing {}", out.display()))?;
    let vertices: Vec<serde_json::Value> = (0..d.vertex_count())
        .map(|v| serde_json::json!({ "id": v + 1, "label": d.vertex_label(v) }))
        .collect();
    let edges: Vec<serde_json::Value> = d
        .edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| {
            serde_json::json!({
                "id": e + 1,
                "kind": format!("{:?}", edge.kind),
                "u": edge.u + 1,
                "v": edge.v + 1,
            })
        })
        .collect();
    let meta = serde_json::json!({
        "fingerprint": fingerprint,
        "n_star": m.n_star(),
        "p_star": m.p_star(),
        "a_star": m.a_star(),
        "canonical": m.options().canonical,
        "variables": m.variables().len(),
        "constraints": m.constraints().len(),
        "circular_chromosomes": m.circular_ids(),
        "vertices": vertices,
        "edges": edges,
    });
    let meta_path = sidecar(out);
    fs::write(&meta_path, serde_json::to_string_pretty(&meta)? + "\n")
        .with_context(|| format!("writing {}", meta_path.display()))?;
    Ok(fingerprint)
}

fn sidecar(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

fn distance(a: &Genome, b: &Genome, mode: Mode, budget: u128, out: Option<&Path>, write_sol: Option<&Path>) -> Result<Report> {
    match mode {
        Mode::Formula => formula(a, b),
        Mode::Oracle => oracle(a, b, budget),
        Mode::Ilp => ilp_report(a, b, budget, write_sol),
        Mode::Auto => {
            let c = census(a, b);
            if c.is_singular() {
                return formula(a, b);
            }
            let count = count_max_sibling_sets(&build_mrd(a, b, &c));
            if count <= budget {
                return oracle(a, b, budget);
            }
            let Some(out) = out else {
                return Err(Error::BudgetExceeded { count, budget }.into());
            };
            let d = capped_diagram(a, b)?;
            let m = build_ilp_with(&d, IlpOptions::default())?;
            let fp = write_model(&d, &m, out)?;
            Ok(Report {
                mode: "lp",
                distance: None,
                lines: vec![
                    format!("sibling_sets: {count} (budget {budget})"),
                    format!("model: {} (fingerprint {fp})", out.display()),
                    format!("metadata: {}", sidecar(out).display()),
                    "next: solve the model with a MILP solver, save the assignment as 'name value' lines, then run \
                     `dcjindel solve-file <genomes> --sol <solution> --model <model>`"
                        .into(),
                ],
            })
        }
    }
}

fn cmd_census(file: &Path, tsv: bool) -> Result<()> {
    let (a, b) = read_pair(file)?;
    let c = census(&a, &b);
    let mut out = String::new();
    if tsv {
        out.push_str("family\tocc_a\tocc_b\tdelta\n");
        for (f, n) in c.families() {
            let _ = writeln!(out, "{f}\t{}\t{}\t{}", n.occ_a, n.occ_b, n.delta());
        }
        let _ = writeln!(out, "#n_star\t{}\n#kappa_a\t{}\n#kappa_b\t{}", c.n_star(), c.kappa_a(), c.kappa_b());
    } else {
        let _ = writeln!(out, "family  occ_{}  occ_{}  delta", a.name, b.name);
        for (f, n) in c.families() {
            let _ = writeln!(out, "{f}  {}  {}  {}", n.occ_a, n.occ_b, n.delta());
        }
        let _ = writeln!(out, "n_star: {}\nkappa_A: {}\nkappa_B: {}", c.n_star(), c.kappa_a(), c.kappa_b());
    }
    print!("{out}");
    Ok(())
}

fn cmd_solve_file(file: &Path, sol: &Path, model: Option<&Path>, free: bool) -> Result<()> {
    let (a, b) = read_pair(file)?;
    let d = capped_diagram(&a, &b)?;
    let m = build_ilp_with(&d, IlpOptions { canonical: !free })?;
    let expected = fingerprint_of(lp_body(&write_lp(&m)));
    if let Some(path) = model {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let parsed = parse_lp_structure(&text)?;
        let found = parsed.fingerprint.map(|f| f.0).unwrap_or_else(|| "(none)".into());
        if found != expected {
            return Err(Error::FingerprintMismatch { expected, found }.into());
        }
    }
    let text = fs::read_to_string(sol).with_context(|| format!("reading {}", sol.display()))?;
    let solution = read_solution(&text, &m)?;
    if let Some(found) = &solution.fingerprint {
        if *found != expected {
            return Err(Error::FingerprintMismatch {
                expected,
                found: found.clone(),
            }
            .into());
        }
    }
    let r = extract_result(&m, &solution, &d)?;
    let Score::Capped(sc) = r.decomposition.score else {
        unreachable!("capped diagram");
    };
    println!("distance: {}", r.distance);
    println!("objective: {}", dcjindel::decomposition::HalfInteger(r.objective_x2));
    println!("n_star: {}", m.n_star());
    println!("p_star: {}", m.p_star());
    println!(
        "breakdown: c~={} aleph={} s={}",
        sc.indel_free_cycles, sc.transitions, sc.circular_singletons
    );
    println!("matching: {}", matching_text(&d, &r.sibling_set));
    println!("caps: {}", caps_text(&r.cap_matching));
    if r.noisy > 0 {
        println!("rounded_values: {}", r.noisy);
    }
    Ok(())
}

/// Strict PHYLIP name field: ten columns, longer names truncated.
fn phylip_name(name: &str) -> String {
    let short: String = name.chars().take(10).collect();
    format!("{short:<10}")
}

fn cmd_matrix(file: &Path, mode: Mode, jobs: usize, budget: u128) -> Result<ExitCode> {
    let gs = read_genomes(file)?;
    if gs.len() < 2 {
        return Err(UsageError(format!(
            "matrix needs at least two genomes, {} has {}",
            file.display(),
            gs.len()
        ))
        .into());
    }
    let pairs: Vec<(usize, usize)> = (1..gs.len()).flat_map(|i| (0..i).map(move |j| (i, j))).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .context("starting worker pool")?;
    let cells: Vec<Result<i64>> = pool.install(|| {
        pairs
            .par_iter()
            .map(|&(i, j)| {
                let r = distance(&gs[i], &gs[j], mode, budget, None, None)?;
                r.distance.context("no distance computed")
            })
            .collect()
    });
    let mut out = format!("{}\n", gs.len());
    let mut failed = 0;
    let mut k = 0;
    for (i, g) in gs.iter().enumerate() {
        out.push_str(&phylip_name(&g.name));
        for other in &gs[..i] {
            match &cells[k] {
                Ok(v) => {
                    let _ = write!(out, " {v}");
                }
                Err(e) => {
                    failed += 1;
                    eprintln!("error: {} vs {}: {e:#}", g.name, other.name);
                    out.push_str(" NA");
                }
            }
            k += 1;
        }
        out.push('\n');
    }
    print!("{out}");
    Ok(if failed > 0 {
        ExitCode::from(EXIT_PARTIAL)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_sim(cfg: SimConfig, out: Option<&Path>, log: Option<&Path>) -> Result<()> {
    let r = simulate_pair(&cfg)?;
    let mut text = format!(
        "# seed: {}\n# config: {}\n# applied: {}\n",
        cfg.seed,
        serde_json::to_string(&cfg)?,
        serde_json::to_string(&r.counts)?
    );
    text.push_str(&write_genomes([&r.a, &r.b]));
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    if let Some(path) = log {
        fs::write(path, r.event_log()).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Census { file, tsv } => cmd_census(&file, tsv)?,
        Command::Dist {
            file,
            mode,
            budget,
            out,
            write_sol,
        } => {
            let (a, b) = read_pair(&file)?;
            let r = distance(&a, &b, mode, budget, out.as_deref(), write_sol.as_deref())?;
            print!("{}", r.render());
        }
        Command::Ilp { file, out, free } => {
            let (a, b) = read_pair(&file)?;
            let d = capped_diagram(&a, &b)?;
            let m = build_ilp_with(&d, IlpOptions { canonical: !free })?;
            let fp = write_model(&d, &m, &out)?;
            println!("model: {}", out.display());
            println!("metadata: {}", sidecar(&out).display());
            println!("fingerprint: {fp}");
            println!("variables: {}", m.variables().len());
            println!("constraints: {}", m.constraints().len());
        }
        Command::SolveFile { file, sol, model, free } => cmd_solve_file(&file, &sol, model.as_deref(), free)?,
        Command::Matrix {
            file,
            mode,
            jobs,
            budget,
        } => return cmd_matrix(&file, mode, jobs, budget),
        Command::Sim {
            root_length,
            dcj,
            weight_a,
            weight_b,
            rates,
            ins,
            del,
            dup,
            zipf_indel,
            zipf_dup,
            chromosomes,
            circular,
            seed,
            out,
            log,
        } => {
            let w = dcj.map_or([weight_a, weight_b], |w| [w, w]);
            let (ins, del, dup) = rates.map_or((ins, del, dup), |r| (r, r, r));
            let cfg = SimConfig {
                root_length,
                edge_weights: w,
                insertion_rate: ins,
                deletion_rate: del,
                duplication_rate: dup,
                zipf_indel,
                zipf_dup,
                chromosomes,
                circular,
                seed,
            };
            cmd_sim(cfg, out.as_deref(), log.as_deref())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if cause.downcast_ref::<ParseError>().is_some() || cause.downcast_ref::<UsageError>().is_some() {
            return EXIT_PARSE;
        }
        match cause.downcast_ref::<Error>() {
            Some(Error::Parse(_)) => return EXIT_PARSE,
            Some(Error::BudgetExceeded { .. }) => return EXIT_BUDGET,
            _ => {}
        }
    }
    EXIT_FAILURE
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
