//! superpat: enumerate preferential arrangements, test superpattern
//! containment, run exhaustive minimal-length searches, and analyze the
//! random waiting times for a uniform letter stream.
//!
//! Exit codes are stable: 0 success / predicate true, 1 predicate false,
//! 2 usage error, 3 node budget or state-space cap exceeded.

mod artifact;
mod render;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process;

use clap::{Parser, Subcommand, ValueEnum};
use superpat_core::search::DEFAULT_NODE_BUDGET;
use superpat_core::stochastic::X_TRACKING_MAX_K;
use superpat_core::{
    bounds_report, closed_forms, concentration_check, enumerate_pa, exact_expectation,
    first_missing_pattern, first_missing_permutation, is_complete, is_superpattern, refute_length,
    run_trial, search_min, simulate, trial_seed, Error as CoreError, Process, RefuteOutcome,
    SearchProblem, SearchResult, StreamConfig, Word,
};

use artifact::{manifest_path_for, write_output_with_manifest, Cache, RunManifest};
use render::{rational_json, rational_pair};

#[derive(Parser)]
#[command(
    name = "superpat",
    version,
    about = "Superpatterns of preferential arrangements: enumeration, checking, search, and waiting-time analysis"
)]
struct Cli {
    /// Output format. CSV is defined for `simulate` only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Also write the output to this file, with a `.manifest.json` beside it.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Bypass the results cache for this run (no lookup, no store).
    #[arg(long, global = true)]
    no_cache: bool,

    /// Worker threads for search and simulation. Defaults to all cores.
    /// Results are identical for every thread count.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Text => "text",
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Every length-k preferential arrangement occurs order-isomorphically.
    Superpattern,
    /// Every permutation of [k] occurs as a subsequence (requires d = k).
    Complete,
    /// Like superpattern, but occurrences must be regular.
    Regular,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Superpattern => "superpattern",
            Mode::Complete => "complete",
            Mode::Regular => "regular",
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ProcessArg {
    /// Exact E[X_k] from the positional Markov chain (k <= 3).
    X,
    /// Exact E[Z_k] from the round/coupon chain (k <= 20).
    Z,
}

#[derive(Subcommand)]
enum Command {
    /// List every preferential arrangement of length k over the alphabet [d].
    Enumerate {
        #[arg(long)]
        k: usize,
        /// Alphabet size; defaults to k.
        #[arg(long)]
        d: Option<usize>,
    },

    /// Test one word against a containment predicate.
    Check {
        /// The word: digits when d <= 9 (e.g. 2353134), comma-separated
        /// integers otherwise.
        word: String,
        #[arg(long)]
        k: usize,
        /// Alphabet size; defaults to k.
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, value_enum, default_value_t = Mode::Superpattern)]
        mode: Mode,
        /// Additionally require the word to use every letter of [d].
        #[arg(long)]
        surjective: bool,
    },

    /// Exhaustive minimal-length search, reporting a witness and refutation
    /// certificates for every shorter length.
    Search {
        #[arg(long)]
        k: usize,
        /// Alphabet size; defaults to k.
        #[arg(long)]
        d: Option<usize>,
        /// Search for the surjective minimum (every letter of [d] used).
        #[arg(long)]
        surjective: bool,
        /// Stop deepening after this length (defaults to a proven upper bound).
        #[arg(long, value_name = "LEN")]
        max_len: Option<usize>,
        /// Node budget for the whole run.
        #[arg(long, value_name = "NODES")]
        budget: Option<u64>,
        /// Decide one exact length instead of searching: prints a refutation
        /// certificate (exit 0) or a witness (exit 1).
        #[arg(long, value_name = "LEN")]
        refute: Option<usize>,
        /// Directory that receives one certificate file per refuted length.
        #[arg(long, value_name = "DIR")]
        certs: Option<PathBuf>,
    },

    /// Monte Carlo estimates of the waiting times Y_k <= X_k <= Z_k.
    Simulate {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        trials: u64,
        /// Master seed. Required: runs are reproducible by construction.
        #[arg(long)]
        seed: u64,
        /// Also report how often X lands in the concentration interval
        /// k^2 ln k + O(k^2) with slack omega * k^(3/2).
        #[arg(long)]
        omega: Option<f64>,
        /// Write every trial (index, seed, Y, X, Z, block letters, block
        /// positions) to this CSV file.
        #[arg(long, value_name = "PATH")]
        dump_trials: Option<PathBuf>,
    },

    /// Exact moments: closed forms for Y and Z, and chain-solved E[X], E[Z].
    Exact {
        #[arg(long)]
        k: usize,
        /// Additionally solve this process's Markov chain exactly.
        #[arg(long, value_enum)]
        process: Option<ProcessArg>,
    },

    /// Published bounds on the minimal superpattern length for d = k.
    Bounds {
        #[arg(long)]
        k: u64,
    },
}

/// A run failure carrying its exit code: 2 for usage errors, 3 for budget
/// and state-space caps.
struct Failure {
    message: String,
    code: i32,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { message: message.into(), code: 2 }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        let code = match e {
            CoreError::BudgetExceeded { .. }
            | CoreError::StateSpaceTooLarge { .. }
            | CoreError::PermutationSetTooLarge { .. } => 3,
            _ => 2,
        };
        Failure { message: e.to_string(), code }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { message: e.to_string(), code: 2 }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => process::exit(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            process::exit(f.code);
        }
    }
}

fn run(cli: Cli) -> Result<i32, Failure> {
    let threads = match cli.threads {
        Some(0) => return Err(Failure::usage("--threads must be at least 1")),
        Some(n) => n,
        None => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
    };

    let subcommand = subcommand_name(&cli.command);
    let parameters = canonical_parameters(&cli);
    let cacheable = is_cacheable(&cli.command);
    let cache_key = Cache::key(subcommand, &parameters);

    if cacheable && !cli.no_cache {
        let cache = Cache::open();
        if let Some(hit) = cache.lookup(&cache_key) {
            let manifest = RunManifest::new(subcommand, &parameters, &hit.output, hit.exit_code);
            emit(&cli, &hit.output, &manifest)?;
            return Ok(hit.exit_code);
        }
    }

    let (payload, exit_code) = execute(&cli, threads)?;
    let manifest = RunManifest::new(subcommand, &parameters, payload.as_bytes(), exit_code);
    if cacheable && !cli.no_cache && exit_code <= 1 {
        let cache = Cache::open();
        if let Err(e) = cache.store(&cache_key, payload.as_bytes(), &manifest) {
            eprintln!("warning: could not store cache entry: {e}");
        }
    }
    emit(&cli, payload.as_bytes(), &manifest)?;
    Ok(exit_code)
}

/// Prints the payload and, when requested, writes it (plus its manifest)
/// to --out.
fn emit(cli: &Cli, payload: &[u8], manifest: &RunManifest) -> Result<(), Failure> {
    use std::io::Write;
    std::io::stdout().write_all(payload)?;
    if let Some(out) = &cli.out {
        write_output_with_manifest(out, payload, manifest)?;
        eprintln!("wrote {} and {}", out.display(), manifest_path_for(out).display());
    }
    Ok(())
}

fn subcommand_name(command: &Command) -> &'static str {
    match command {
        Command::Enumerate { .. } => "enumerate",
        Command::Check { .. } => "check",
        Command::Search { .. } => "search",
        Command::Simulate { .. } => "simulate",
        Command::Exact { .. } => "exact",
        Command::Bounds { .. } => "bounds",
    }
}

/// Canonical parameter map: every value that influences the output bytes,
/// with defaults resolved. Thread count is deliberately absent (results are
/// thread-invariant), as are --out and cache flags.
fn canonical_parameters(cli: &Cli) -> BTreeMap<String, String> {
    let mut p = BTreeMap::new();
    p.insert("format".to_string(), cli.format.name().to_string());
    match &cli.command {
        Command::Enumerate { k, d } => {
            p.insert("k".into(), k.to_string());
            p.insert("d".into(), d.unwrap_or(*k).to_string());
        }
        Command::Check { word, k, d, mode, surjective } => {
            p.insert("word".into(), word.clone());
            p.insert("k".into(), k.to_string());
            p.insert("d".into(), d.unwrap_or(*k).to_string());
            p.insert("mode".into(), mode.name().to_string());
            p.insert("surjective".into(), surjective.to_string());
        }
        Command::Search { k, d, surjective, max_len, budget, refute, .. } => {
            p.insert("k".into(), k.to_string());
            p.insert("d".into(), d.unwrap_or(*k).to_string());
            p.insert("surjective".into(), surjective.to_string());
            p.insert(
                "max_len".into(),
                max_len.map_or("auto".to_string(), |m| m.to_string()),
            );
            p.insert("budget".into(), budget.unwrap_or(DEFAULT_NODE_BUDGET).to_string());
            p.insert("refute".into(), refute.map_or("none".to_string(), |l| l.to_string()));
        }
        Command::Simulate { k, trials, seed, omega, .. } => {
            p.insert("k".into(), k.to_string());
            p.insert("trials".into(), trials.to_string());
            p.insert("seed".into(), seed.to_string());
            p.insert("omega".into(), omega.map_or("none".to_string(), |w| w.to_string()));
        }
        Command::Exact { k, process } => {
            p.insert("k".into(), k.to_string());
            let name = match process {
                None => "closed",
                Some(ProcessArg::X) => "x",
                Some(ProcessArg::Z) => "z",
            };
            p.insert("process".into(), name.to_string());
        }
        Command::Bounds { k } => {
            p.insert("k".into(), k.to_string());
        }
    }
    p
}

/// Only the expensive subcommands cache, and only when they produce no side
/// outputs (a cache hit replays stdout bytes, not extra files).
fn is_cacheable(command: &Command) -> bool {
    match command {
        Command::Search { certs, .. } => certs.is_none(),
        Command::Simulate { dump_trials, .. } => dump_trials.is_none(),
        Command::Exact { .. } => true,
        _ => false,
    }
}

fn execute(cli: &Cli, threads: usize) -> Result<(String, i32), Failure> {
    match &cli.command {
        Command::Enumerate { k, d } => cmd_enumerate(*k, d.unwrap_or(*k), cli.format),
        Command::Check { word, k, d, mode, surjective } => {
            cmd_check(word, *k, d.unwrap_or(*k), *mode, *surjective, cli.format)
        }
        Command::Search { k, d, surjective, max_len, budget, refute, certs } => cmd_search(
            *k,
            d.unwrap_or(*k),
            *surjective,
            *max_len,
            *budget,
            *refute,
            certs.as_deref(),
            threads,
            cli.format,
        ),
        Command::Simulate { k, trials, seed, omega, dump_trials } => cmd_simulate(
            *k,
            *trials,
            *seed,
            *omega,
            dump_trials.as_deref(),
            threads,
            cli.format,
        ),
        Command::Exact { k, process } => cmd_exact(*k, *process, cli.format),
        Command::Bounds { k } => cmd_bounds(*k, cli.format),
    }
}

fn reject_csv(format: Format, subcommand: &str) -> Result<(), Failure> {
    if format == Format::Csv {
        return Err(Failure::usage(format!(
            "csv output is only defined for simulate, not {subcommand}"
        )));
    }
    Ok(())
}

fn cmd_enumerate(k: usize, d: usize, format: Format) -> Result<(String, i32), Failure> {
    reject_csv(format, "enumerate")?;
    let patterns = enumerate_pa(k, d)?;
    let payload = match format {
        Format::Text => {
            let mut s = String::new();
            for p in &patterns {
                s.push_str(&p.to_string());
                s.push('\n');
            }
            s
        }
        Format::Json => json_payload(serde_json::json!({
            "k": k,
            "d": d,
            "count": patterns.len(),
            "patterns": patterns.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        })),
        Format::Csv => unreachable!(),
    };
    Ok((payload, 0))
}

fn cmd_check(
    word_text: &str,
    k: usize,
    d: usize,
    mode: Mode,
    surjective: bool,
    format: Format,
) -> Result<(String, i32), Failure> {
    reject_csv(format, "check")?;
    if d > u8::MAX as usize {
        return Err(Failure::usage("alphabet size d must fit in a byte"));
    }
    if mode == Mode::Complete && d != k {
        return Err(Failure::usage(
            "mode=complete is about permutations of [k]; it requires d = k",
        ));
    }
    let word = Word::parse(word_text, d as u8)?;

    // Evidence for a false verdict: an unused letter when surjectivity was
    // demanded, otherwise one missing pattern.
    let mut evidence: Option<String> = None;
    let mut result = true;

    if surjective && word.distinct_count() < d {
        let mut used = vec![false; d + 1];
        for &l in word.letters() {
            used[l as usize] = true;
        }
        let missing = (1..=d).find(|&l| !used[l]).expect("some letter is unused");
        evidence = Some(format!("letter {missing} never occurs"));
        result = false;
    }

    if result {
        result = match mode {
            Mode::Superpattern => is_superpattern(&word, k, d, false)?,
            Mode::Regular => is_superpattern(&word, k, d, true)?,
            Mode::Complete => is_complete(&word, k)?,
        };
        if !result {
            evidence = Some(match mode {
                Mode::Superpattern => first_missing_pattern(&word, k, d, false)?
                    .expect("a missing pattern exists when the predicate fails")
                    .to_string(),
                Mode::Regular => first_missing_pattern(&word, k, d, true)?
                    .expect("a missing pattern exists when the predicate fails")
                    .to_string(),
                Mode::Complete => {
                    let perm = first_missing_permutation(&word, k)?
                        .expect("a missing permutation exists when the predicate fails");
                    Word::new(perm, k as u8)?.to_string()
                }
            });
        }
    }

    let payload = match format {
        Format::Text => {
            let mut s = String::new();
            s.push_str(&format!("word = {word}\n"));
            s.push_str(&format!("k = {k}\nd = {d}\n"));
            s.push_str(&format!("mode = {}\nsurjective = {surjective}\n", mode.name()));
            s.push_str(&format!("result = {result}\n"));
            if let Some(e) = &evidence {
                s.push_str(&format!("evidence = {e}\n"));
            }
            s
        }
        Format::Json => json_payload(serde_json::json!({
            "word": word.to_string(),
            "k": k,
            "d": d,
            "mode": mode.name(),
            "surjective": surjective,
            "result": result,
            "evidence": evidence,
        })),
        Format::Csv => unreachable!(),
    };
    Ok((payload, if result { 0 } else { 1 }))
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    k: usize,
    d: usize,
    surjective: bool,
    max_len: Option<usize>,
    budget: Option<u64>,
    refute: Option<usize>,
    certs: Option<&std::path::Path>,
    threads: usize,
    format: Format,
) -> Result<(String, i32), Failure> {
    reject_csv(format, "search")?;
    let mut problem = SearchProblem::new(k, d).surjective(surjective).threads(threads);
    problem.max_len = max_len;
    if let Some(b) = budget {
        problem = problem.budget(b);
    }

    if let Some(length) = refute {
        return match refute_length(&problem, length)? {
            RefuteOutcome::Refuted(cert) => {
                let payload = match format {
                    Format::Text => cert.to_kv_text(),
                    Format::Json => json_payload(serde_json::json!({
                        "length": length,
                        "refuted": true,
                        "nodes": cert.nodes,
                        "pruned": cert.pruned,
                        "config_hash": cert.config_hash,
                        "certificate": cert.to_kv_text(),
                    })),
                    Format::Csv => unreachable!(),
                };
                Ok((payload, 0))
            }
            RefuteOutcome::WitnessFound(w) => {
                let payload = match format {
                    Format::Text => {
                        format!("length = {length}\nrefuted = false\nwitness = {w}\n")
                    }
                    Format::Json => json_payload(serde_json::json!({
                        "length": length,
                        "refuted": false,
                        "witness": w.to_string(),
                    })),
                    Format::Csv => unreachable!(),
                };
                Ok((payload, 1))
            }
        };
    }

    let result = search_min(&problem)?;
    if let Some(dir) = certs {
        write_certificates(dir, &result)?;
    }

    // Three terminal states: a minimum was found; the whole length range
    // was refuted (a complete negative answer); or the node budget ran out.
    let status = if result.min_length.is_some() {
        "found"
    } else if result.refuted_frontier() > max_len.unwrap_or_else(|| {
        superpat_core::search::default_max_len(&problem)
    }) {
        "range-exhausted"
    } else {
        "budget-exceeded"
    };
    let exit = match status {
        "found" | "range-exhausted" => 0,
        _ => 3,
    };

    let refuted_lengths: Vec<usize> =
        (result.start_length..result.refuted_frontier()).collect();
    let payload = match format {
        Format::Text => {
            let mut s = String::new();
            s.push_str(&format!("k = {k}\nd = {d}\nsurjective = {surjective}\n"));
            s.push_str(&format!("status = {status}\n"));
            s.push_str(&format!("start_length = {}\n", result.start_length));
            match result.min_length {
                Some(m) => s.push_str(&format!("min_length = {m}\n")),
                None => s.push_str("min_length = none\n"),
            }
            if let Some(w) = &result.witness {
                s.push_str(&format!("witness = {w}\n"));
            }
            s.push_str(&format!("exhaustive = {}\n", result.exhaustive));
            s.push_str(&format!(
                "refuted_lengths = {}\n",
                if refuted_lengths.is_empty() {
                    "none".to_string()
                } else {
                    refuted_lengths
                        .iter()
                        .map(|l| l.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                }
            ));
            s.push_str(&format!("nodes = {}\n", result.nodes_visited));
            s.push_str(&format!("pruned = {}\n", result.pruned));
            s
        }
        Format::Json => json_payload(serde_json::json!({
            "k": k,
            "d": d,
            "surjective": surjective,
            "status": status,
            "start_length": result.start_length,
            "min_length": result.min_length,
            "witness": result.witness.as_ref().map(|w| w.to_string()),
            "exhaustive": result.exhaustive,
            "refuted_lengths": refuted_lengths,
            "nodes": result.nodes_visited,
            "pruned": result.pruned,
        })),
        Format::Csv => unreachable!(),
    };
    // Wall time is progress chatter, not part of the reproducible payload.
    eprintln!(
        "search visited {} nodes in {:.1?}",
        result.nodes_visited, result.wall_time
    );
    Ok((payload, exit))
}

fn write_certificates(dir: &std::path::Path, result: &SearchResult) -> Result<(), Failure> {
    for cert in &result.refuted {
        let kind = if cert.surjective { "surjective" } else { "plain" };
        let name = format!("refute-k{}-d{}-{}-len{}.cert", cert.k, cert.d, kind, cert.length);
        let path = dir.join(name);
        let bytes = cert.to_kv_text().into_bytes();
        let params = BTreeMap::from([
            ("k".to_string(), cert.k.to_string()),
            ("d".to_string(), cert.d.to_string()),
            ("surjective".to_string(), cert.surjective.to_string()),
            ("length".to_string(), cert.length.to_string()),
        ]);
        let manifest = RunManifest::new("search", &params, &bytes, 0);
        write_output_with_manifest(&path, &bytes, &manifest)?;
    }
    Ok(())
}

fn cmd_simulate(
    k: usize,
    trials: u64,
    seed: u64,
    omega: Option<f64>,
    dump_trials: Option<&std::path::Path>,
    threads: usize,
    format: Format,
) -> Result<(String, i32), Failure> {
    if omega.is_some() && format == Format::Csv {
        return Err(Failure::usage(
            "the concentration report does not fit the fixed csv columns; use text or json",
        ));
    }
    let config = StreamConfig { k, master_seed: seed, trials };
    let report = simulate(&config, threads)?;
    let concentration = match omega {
        Some(w) => Some(concentration_check(k, w, trials, seed, threads)?),
        None => None,
    };
    if let Some(path) = dump_trials {
        dump_trial_records(path, k, seed, trials)?;
    }

    let payload = match format {
        Format::Text => {
            let mut s = String::new();
            s.push_str(&format!("k = {k}\ntrials = {trials}\nseed = {seed}\n"));
            s.push_str(&format!("generator = {}\n", report.generator));
            for (name, stats) in [
                ("y", Some(&report.y)),
                ("x", report.x.as_ref()),
                ("z", Some(&report.z)),
            ] {
                match stats {
                    Some(st) => {
                        s.push_str(&format!(
                            "{name}_mean = {}\n{name}_variance = {}\n{name}_ci_half_width = {}\n",
                            st.mean, st.variance, st.ci_half_width
                        ));
                    }
                    None => s.push_str(&format!(
                        "{name} = untracked (k > {X_TRACKING_MAX_K})\n"
                    )),
                }
            }
            if let Some(c) = &concentration {
                s.push_str(&format!("concentration_omega = {}\n", c.omega));
                s.push_str(&format!("interval_lower = {}\n", c.lower));
                s.push_str(&format!("interval_upper = {}\n", c.upper));
                s.push_str(&format!("inside = {}\n", c.inside));
                s.push_str(&format!("fraction = {}\n", c.fraction));
            }
            s
        }
        Format::Json => {
            let stats_json = |st: &superpat_core::SummaryStats| {
                serde_json::json!({
                    "mean": st.mean,
                    "variance": st.variance,
                    "ci_half_width": st.ci_half_width,
                })
            };
            json_payload(serde_json::json!({
                "k": k,
                "trials": trials,
                "seed": seed,
                "generator": report.generator,
                "y": stats_json(&report.y),
                "x": report.x.as_ref().map(stats_json),
                "z": stats_json(&report.z),
                "concentration": concentration.as_ref().map(|c| serde_json::json!({
                    "omega": c.omega,
                    "lower": c.lower,
                    "upper": c.upper,
                    "inside": c.inside,
                    "fraction": c.fraction,
                })),
            }))
        }
        Format::Csv => {
            let mut s = String::from("k,trials,seed,process,mean,variance,ci_half_width\n");
            for (name, stats) in [
                ("Y", Some(&report.y)),
                ("X", report.x.as_ref()),
                ("Z", Some(&report.z)),
            ] {
                if let Some(st) = stats {
                    s.push_str(&format!(
                        "{k},{trials},{seed},{name},{},{},{}\n",
                        st.mean, st.variance, st.ci_half_width
                    ));
                }
            }
            s
        }
    };
    Ok((payload, 0))
}

/// One CSV row per trial: index, seed, the three stopping times, then the
/// Y block decomposition (retired letter k_i and closing position p_i per
/// block). X is blank above its tracking cap.
fn dump_trial_records(
    path: &std::path::Path,
    k: usize,
    master_seed: u64,
    trials: u64,
) -> Result<(), Failure> {
    let mut s = String::from("trial,seed,Y,X,Z");
    for i in 1..=k {
        s.push_str(&format!(",k_{i}"));
    }
    for i in 1..=k {
        s.push_str(&format!(",p_{i}"));
    }
    s.push('\n');
    for t in 0..trials {
        let seed = trial_seed(master_seed, t);
        let record = run_trial(k, seed)?;
        s.push_str(&format!("{t},{seed},{},", record.y));
        if let Some(x) = record.x {
            s.push_str(&x.to_string());
        }
        s.push_str(&format!(",{}", record.z));
        for (letter, _) in &record.blocks {
            s.push_str(&format!(",{letter}"));
        }
        for (_, pos) in &record.blocks {
            s.push_str(&format!(",{pos}"));
        }
        s.push('\n');
    }
    let bytes = s.into_bytes();
    let params = BTreeMap::from([
        ("k".to_string(), k.to_string()),
        ("seed".to_string(), master_seed.to_string()),
        ("trials".to_string(), trials.to_string()),
    ]);
    let manifest = RunManifest::new("simulate", &params, &bytes, 0);
    write_output_with_manifest(path, &bytes, &manifest)?;
    Ok(())
}

fn cmd_exact(k: usize, process: Option<ProcessArg>, format: Format) -> Result<(String, i32), Failure> {
    reject_csv(format, "exact")?;
    if k == 0 {
        return Err(Failure::usage("k must be at least 1"));
    }
    let forms = closed_forms(k as u64)?;
    let chain = match process {
        None => None,
        Some(ProcessArg::X) => Some(("x", exact_expectation(k, Process::X)?)),
        Some(ProcessArg::Z) => Some(("z", exact_expectation(k, Process::Z)?)),
    };

    let payload = match format {
        Format::Text => {
            let mut s = String::new();
            s.push_str(&format!("k = {k}\n"));
            s.push_str(&format!("e_y = {}\n", rational_pair(&forms.e_y)));
            s.push_str(&format!("var_y = {}\n", rational_pair(&forms.var_y)));
            s.push_str(&format!("e_z = {}\n", rational_pair(&forms.e_z)));
            s.push_str(&format!(
                "x_mean_leading_lower = {}\nx_mean_leading_upper = {}\n",
                forms.x_mean_leading_lower, forms.x_mean_leading_upper
            ));
            if let Some((name, value)) = &chain {
                s.push_str(&format!("e_{name}_chain = {}\n", rational_pair(value)));
            }
            s
        }
        Format::Json => json_payload(serde_json::json!({
            "k": k,
            "e_y": rational_json(&forms.e_y),
            "var_y": rational_json(&forms.var_y),
            "e_z": rational_json(&forms.e_z),
            "x_mean_leading_lower": forms.x_mean_leading_lower,
            "x_mean_leading_upper": forms.x_mean_leading_upper,
            "chain": chain.as_ref().map(|(name, value)| serde_json::json!({
                "process": name,
                "mean": rational_json(value),
            })),
        })),
        Format::Csv => unreachable!(),
    };
    Ok((payload, 0))
}

fn cmd_bounds(k: u64, format: Format) -> Result<(String, i32), Failure> {
    reject_csv(format, "bounds")?;
    let report = bounds_report(k)?;
    let payload = match format {
        Format::Text => format!(
            "k = {k}\nproven_lower = {}\nrado_upper = {}\nburstein_upper = {}\nnewey_conjecture = {}\n",
            report.proven_lower, report.rado_upper, report.burstein_upper, report.newey_conjecture
        ),
        Format::Json => json_payload(serde_json::json!({
            "k": k,
            "proven_lower": report.proven_lower,
            "rado_upper": report.rado_upper,
            "burstein_upper": report.burstein_upper,
            "newey_conjecture": report.newey_conjecture,
        })),
        Format::Csv => unreachable!(),
    };
    Ok((payload, 0))
}

fn json_payload(value: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&value).expect("reports are plain data");
    s.push('\n');
    s
}
