//! Exhaustive minimal-length search for superpatterns.
//!
//! The search deepens one target length at a time, starting from the best
//! proven lower bound. At each length a depth-first scan over words runs
//! with:
//!
//! * symmetry reduction when d = k (only words whose letters first occur in
//!   increasing order; every word is a relabeling of exactly one of these,
//!   and relabeling preserves the predicate when the alphabet equals the
//!   pattern alphabet),
//! * admissible deficit pruning (some tracked pattern still needs more
//!   letters than remain),
//! * a useless-letter rule (a letter that advances no tracked frontier and
//!   is not a first use needed for surjectivity can be deleted from any
//!   witness, so such branches are skipped).
//!
//! For d = k the tracked set is the k! permutations; containing them all is
//! equivalent to the superpattern predicate there, and witnesses are
//! re-checked through the pattern-by-pattern route in [`verify_witness`].
//! Otherwise the tracked set holds every image of every pattern under a
//! strictly increasing relettering, grouped by pattern; a pattern counts as
//! matched once any image in its group completes.
//!
//! Work is split over top-level branches (short word prefixes). Branches run
//! to completion and merge in a fixed order, so results, node counts, and the
//! reported witness (the lexicographically smallest one) do not depend on the
//! thread count. Only runs that exhaust the node budget lose that guarantee.

use std::fmt::Write as _;
use std::sync::atomic::{AtomicI64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use crate::bounds::bounds_report;
use crate::containment::is_superpattern_direct;
use crate::error::{Error, Result};
use crate::pattern::enumerate_pa;
use crate::perm::permutations_lex_flat;
use crate::word::Word;

/// Largest k for the d = k route; the permutation table is k! * k bytes.
pub const SEARCH_MAX_K_EQUAL_D: usize = 10;
/// Cap on tracked pattern images for the general route.
pub const SEARCH_MAX_TARGETS: usize = 5_000_000;

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchProblem {
    pub k: usize,
    pub d: usize,
    /// Require every letter of [d] to appear in the word.
    pub surjective: bool,
    /// Deepening stops after this length; defaults to a proven upper bound.
    pub max_len: Option<usize>,
    pub thread_count: usize,
    pub node_budget: u64,
    /// Canonical-form reduction for d = k; exposed so tests can compare
    /// reduced and unreduced runs.
    pub symmetry_reduction: bool,
}

impl SearchProblem {
    pub fn new(k: usize, d: usize) -> Self {
        SearchProblem {
            k,
            d,
            surjective: false,
            max_len: None,
            thread_count: 1,
            node_budget: DEFAULT_NODE_BUDGET,
            symmetry_reduction: true,
        }
    }

    pub fn surjective(mut self, yes: bool) -> Self {
        self.surjective = yes;
        self
    }

    pub fn threads(mut self, n: usize) -> Self {
        self.thread_count = n.max(1);
        self
    }

    pub fn budget(mut self, nodes: u64) -> Self {
        self.node_budget = nodes;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.k == 0 || self.d == 0 {
            return Err(Error::InvalidParameter("search needs k >= 1 and d >= 1".into()));
        }
        if self.d > 32 {
            return Err(Error::InvalidParameter("search alphabets are capped at d = 32".into()));
        }
        if self.thread_count == 0 {
            return Err(Error::InvalidParameter("thread_count must be >= 1".into()));
        }
        Ok(())
    }
}

/// First length the deepening tries: the tightest applicable proven bound.
pub fn lower_bound_start(problem: &SearchProblem) -> usize {
    let k = problem.k;
    let d = problem.d;
    if d == k && k >= 2 {
        let proven_lower = bounds_report(k as u64).map(|b| b.proven_lower as usize).unwrap_or(k);
        return proven_lower.max(k);
    }
    if problem.surjective {
        k.max(d)
    } else {
        k
    }
}

/// Default deepening limit: a proven upper bound for the minimal length
/// (append the d - k missing letters to a [k]-alphabet witness when a wider
/// surjective word is required).
pub fn default_max_len(problem: &SearchProblem) -> usize {
    let k = problem.k as u64;
    let base = if k >= 2 { (k * k - 2 * k + 4) as usize } else { 1 };
    let extra = if problem.surjective { problem.d.saturating_sub(problem.k) } else { 0 };
    (base + extra).max(lower_bound_start(problem))
}

/// Worst-case leaf count d^len, for reporting ahead of a run.
pub fn feasibility_estimate(problem: &SearchProblem, len: usize) -> f64 {
    (problem.d as f64).powi(len as i32)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefutationCertificate {
    pub k: usize,
    pub d: usize,
    pub surjective: bool,
    pub length: usize,
    pub symmetry: bool,
    pub targets: String,
    /// (prefix, nodes expanded under it), in lexicographic prefix order.
    pub branches: Vec<(String, u64)>,
    pub nodes: u64,
    pub pruned: u64,
    pub config_hash: String,
    pub code_version: String,
}

impl RefutationCertificate {
    /// Serializes as a key-value text document, one `key = value` per line.
    pub fn to_kv_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "kind = refutation-certificate");
        let _ = writeln!(s, "code_version = {}", self.code_version);
        let _ = writeln!(s, "config_hash = {}", self.config_hash);
        let _ = writeln!(s, "k = {}", self.k);
        let _ = writeln!(s, "d = {}", self.d);
        let _ = writeln!(s, "surjective = {}", self.surjective);
        let _ = writeln!(s, "length = {}", self.length);
        let _ = writeln!(s, "symmetry = {}", self.symmetry);
        let _ = writeln!(s, "targets = {}", self.targets);
        let _ = writeln!(s, "nodes = {}", self.nodes);
        let _ = writeln!(s, "pruned = {}", self.pruned);
        for (prefix, nodes) in &self.branches {
            let _ = writeln!(s, "branch.{prefix} = {nodes}");
        }
        s
    }

    pub fn from_kv_text(text: &str) -> Result<Self> {
        let mut map = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once(" = ")
                .ok_or_else(|| Error::Parse(format!("bad certificate line {line:?}")))?;
            map.push((key.to_string(), value.to_string()));
        }
        let get = |key: &str| -> Result<String> {
            map.iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.clone())
                .ok_or_else(|| Error::Parse(format!("certificate missing key {key:?}")))
        };
        let parse_num = |key: &str| -> Result<u64> {
            get(key)?
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("certificate key {key:?} is not a number")))
        };
        if get("kind")? != "refutation-certificate" {
            return Err(Error::Parse("not a refutation certificate".into()));
        }
        let mut branches = Vec::new();
        for (k, v) in &map {
            if let Some(prefix) = k.strip_prefix("branch.") {
                let nodes = v
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad branch count for {prefix:?}")))?;
                branches.push((prefix.to_string(), nodes));
            }
        }
        Ok(RefutationCertificate {
            k: parse_num("k")? as usize,
            d: parse_num("d")? as usize,
            surjective: get("surjective")? == "true",
            length: parse_num("length")? as usize,
            symmetry: get("symmetry")? == "true",
            targets: get("targets")?,
            branches,
            nodes: parse_num("nodes")?,
            pruned: parse_num("pruned")?,
            config_hash: get("config_hash")?,
            code_version: get("code_version")?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RefuteOutcome {
    /// No word of the given length satisfies the predicate.
    Refuted(RefutationCertificate),
    /// The length is achievable; here is a witness.
    WitnessFound(Word),
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub problem: SearchProblem,
    /// Smallest satisfying length found, if any length in range succeeded.
    pub min_length: Option<usize>,
    pub witness: Option<Word>,
    /// True when every length below `min_length` is refuted: lengths below
    /// `start_length` by the proven bound, the rest by exhaustive search.
    pub exhaustive: bool,
    pub start_length: usize,
    pub refuted: Vec<RefutationCertificate>,
    pub nodes_visited: u64,
    pub pruned: u64,
    pub wall_time: Duration,
}

impl SearchResult {
    /// First length not yet refuted; equals `min_length` on a complete run.
    pub fn refuted_frontier(&self) -> usize {
        self.start_length + self.refuted.len()
    }
}

/// Finds the minimal length by iterative deepening from the proven lower
/// bound. On budget exhaustion, returns a partial result (`exhaustive` false,
/// no witness) whose certificates cover the fully refuted lengths.
pub fn search_min(problem: &SearchProblem) -> Result<SearchResult> {
    problem.validate()?;
    let start_time = Instant::now();
    let set = build_target_set(problem)?;
    let start = lower_bound_start(problem);
    let max_len = match problem.max_len {
        Some(m) => {
            if m < start {
                return Err(Error::InvalidParameter(format!(
                    "max_len {m} is below the proven lower bound {start}"
                )));
            }
            m
        }
        None => default_max_len(problem),
    };
    let budget = Budget::new(problem.node_budget);
    let mut refuted = Vec::new();
    let mut nodes_total = 0u64;
    let mut pruned_total = 0u64;
    let mut min_length = None;
    let mut witness = None;
    let mut aborted = false;
    for len in start..=max_len {
        let sweep = sweep_length(problem, &set, len, &budget);
        nodes_total += sweep.nodes;
        pruned_total += sweep.pruned;
        if let Some(word) = sweep.best_witness {
            min_length = Some(len);
            witness = Some(Word::new(word, problem.d as u8)?);
            break;
        }
        if sweep.aborted {
            aborted = true;
            break;
        }
        refuted.push(certificate(problem, len, &sweep));
    }
    Ok(SearchResult {
        problem: problem.clone(),
        min_length,
        witness,
        exhaustive: min_length.is_some() && !aborted,
        start_length: start,
        refuted,
        nodes_visited: nodes_total,
        pruned: pruned_total,
        wall_time: start_time.elapsed(),
    })
}

/// Exhaustively decides one target length. Budget exhaustion is an error
/// here: a partial scan certifies nothing.
pub fn refute_length(problem: &SearchProblem, length: usize) -> Result<RefuteOutcome> {
    problem.validate()?;
    let set = build_target_set(problem)?;
    let budget = Budget::new(problem.node_budget);
    let sweep = sweep_length(problem, &set, length, &budget);
    if let Some(word) = sweep.best_witness {
        return Ok(RefuteOutcome::WitnessFound(Word::new(word, problem.d as u8)?));
    }
    if sweep.aborted {
        return Err(Error::BudgetExceeded { nodes: sweep.nodes, frontier: length });
    }
    Ok(RefuteOutcome::Refuted(certificate(problem, length, &sweep)))
}

/// Re-checks a candidate witness against the predicate through the
/// pattern-by-pattern containment route, independent of the search engine.
pub fn verify_witness(word: &Word, problem: &SearchProblem) -> Result<bool> {
    problem.validate()?;
    if problem.surjective && word.distinct_count() < problem.d {
        return Ok(false);
    }
    is_superpattern_direct(word, problem.k, problem.d, false)
}

fn certificate(problem: &SearchProblem, length: usize, sweep: &Sweep) -> RefutationCertificate {
    let symmetry = problem.symmetry_reduction && problem.d == problem.k;
    let config = format!(
        "k={};d={};surjective={};length={};symmetry={}",
        problem.k, problem.d, problem.surjective, length, symmetry
    );
    RefutationCertificate {
        k: problem.k,
        d: problem.d,
        surjective: problem.surjective,
        length,
        symmetry,
        targets: if problem.d == problem.k { "permutations" } else { "pattern-images" }.into(),
        branches: sweep.branches.clone(),
        nodes: sweep.nodes,
        pruned: sweep.pruned,
        config_hash: format!("{:016x}", fnv1a64(config.as_bytes())),
        code_version: env!("CARGO_PKG_VERSION").into(),
    }
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

// ---------------------------------------------------------------------------
// Target sets

struct TargetSet {
    k: usize,
    d: usize,
    /// Concatenated target words, k letters each.
    letters: Vec<u8>,
    /// Group id per target; a group is satisfied when any member completes.
    group_of: Vec<u32>,
    group_count: usize,
}

impl TargetSet {
    fn target_count(&self) -> usize {
        self.group_of.len()
    }

    fn target(&self, idx: usize) -> &[u8] {
        &self.letters[idx * self.k..(idx + 1) * self.k]
    }
}

fn build_target_set(problem: &SearchProblem) -> Result<TargetSet> {
    let k = problem.k;
    let d = problem.d;
    if d == k {
        if k > SEARCH_MAX_K_EQUAL_D {
            return Err(Error::PermutationSetTooLarge { k, cap: SEARCH_MAX_K_EQUAL_D });
        }
        let letters = permutations_lex_flat(k);
        let count = letters.len() / k;
        return Ok(TargetSet {
            k,
            d,
            letters,
            group_of: (0..count as u32).collect(),
            group_count: count,
        });
    }
    let patterns = enumerate_pa(k, d)?;
    let mut letters = Vec::new();
    let mut group_of = Vec::new();
    for (g, pattern) in patterns.iter().enumerate() {
        let j = pattern.distinct() as usize;
        let mut assignment: Vec<u8> = (1..=j as u8).collect();
        loop {
            letters.extend(pattern.image(&assignment));
            group_of.push(g as u32);
            if group_of.len() > SEARCH_MAX_TARGETS {
                return Err(Error::InvalidParameter(
                    "search target set too large; reduce k or d".into(),
                ));
            }
            if !next_combination(&mut assignment, d as u8) {
                break;
            }
        }
    }
    Ok(TargetSet { k, d, letters, group_of, group_count: patterns.len() })
}

/// Advances a strictly increasing sequence over {1..d} to its lexicographic
/// successor of the same length.
fn next_combination(comb: &mut [u8], d: u8) -> bool {
    let j = comb.len();
    let mut i = j;
    loop {
        if i == 0 {
            return false;
        }
        i -= 1;
        if comb[i] < d - (j - 1 - i) as u8 {
            comb[i] += 1;
            for t in i + 1..j {
                comb[t] = comb[t - 1] + 1;
            }
            return true;
        }
    }
}

// ---------------------------------------------------------------------------
// Budget

const BUDGET_CHUNK: i64 = 4096;

struct Budget {
    remaining: AtomicI64,
}

impl Budget {
    fn new(nodes: u64) -> Self {
        Budget { remaining: AtomicI64::new(nodes.min(i64::MAX as u64) as i64) }
    }

    /// Reserves a chunk of node allowance; false once the budget is spent.
    fn take_chunk(&self) -> bool {
        self.remaining.fetch_sub(BUDGET_CHUNK, Ordering::Relaxed) > 0
    }
}

// ---------------------------------------------------------------------------
// Length sweep

struct Sweep {
    best_witness: Option<Vec<u8>>,
    branches: Vec<(String, u64)>,
    nodes: u64,
    pruned: u64,
    aborted: bool,
}

struct BranchReport {
    prefix: Vec<u8>,
    nodes: u64,
    pruned: u64,
    witness: Option<Vec<u8>>,
    aborted: bool,
}

/// Runs one target length to completion across all top-level branches.
fn sweep_length(problem: &SearchProblem, set: &TargetSet, len: usize, budget: &Budget) -> Sweep {
    let symmetry = problem.symmetry_reduction && problem.d == problem.k;
    let prefix_len = len.min(if symmetry { 3 } else { 2 });
    let prefixes = enumerate_prefixes(problem.d, prefix_len, symmetry);
    let workers = problem.thread_count.min(prefixes.len()).max(1);

    let next = AtomicUsize::new(0);
    let reports: Mutex<Vec<Option<BranchReport>>> = Mutex::new((0..prefixes.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= prefixes.len() {
                    return;
                }
                let report = run_branch(problem, set, len, &prefixes[idx], budget);
                let abort_all = report.aborted;
                reports.lock().unwrap()[idx] = Some(report);
                if abort_all {
                    // Leave remaining branches unclaimed; the sweep is void.
                    next.fetch_add(prefixes.len(), Ordering::Relaxed);
                    return;
                }
            });
        }
    });

    let reports = reports.into_inner().unwrap();
    let mut sweep = Sweep {
        best_witness: None,
        branches: Vec::with_capacity(reports.len()),
        nodes: 0,
        pruned: 0,
        aborted: false,
    };
    for slot in reports {
        let Some(report) = slot else {
            sweep.aborted = true;
            continue;
        };
        sweep.nodes += report.nodes;
        sweep.pruned += report.pruned;
        sweep.aborted |= report.aborted;
        let prefix_word = Word::new(report.prefix, problem.d as u8).expect("prefix letters in range");
        sweep.branches.push((prefix_word.to_string(), report.nodes));
        if let Some(w) = report.witness {
            if sweep.best_witness.as_ref().map_or(true, |best| w < *best) {
                sweep.best_witness = Some(w);
            }
        }
    }
    sweep
}

fn enumerate_prefixes(d: usize, prefix_len: usize, symmetry: bool) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut buf = Vec::new();
    fn rec(d: usize, rem: usize, symmetry: bool, max_used: u8, buf: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if rem == 0 {
            out.push(buf.clone());
            return;
        }
        let limit = if symmetry { (max_used + 1).min(d as u8) } else { d as u8 };
        for letter in 1..=limit {
            buf.push(letter);
            rec(d, rem - 1, symmetry, max_used.max(letter), buf, out);
            buf.pop();
        }
    }
    rec(d, prefix_len, symmetry, 0, &mut buf, &mut out);
    out
}

fn run_branch(
    problem: &SearchProblem,
    set: &TargetSet,
    len: usize,
    prefix: &[u8],
    budget: &Budget,
) -> BranchReport {
    let mut engine = Engine::new(problem, set, len, budget);
    let mut report = BranchReport {
        prefix: prefix.to_vec(),
        nodes: 0,
        pruned: 0,
        witness: None,
        aborted: false,
    };
    // Replay the prefix through the same rules the DFS applies; a rejected
    // prefix letter kills the whole branch (any witness it would have led to
    // has a core found under another branch).
    let mut alive = true;
    let mut depth = 0usize;
    for &letter in prefix {
        if engine.satisfied() {
            report.witness = Some(engine.padded_witness());
            report.nodes = engine.nodes;
            report.pruned = engine.pruned;
            return report;
        }
        if !engine.letter_is_viable(letter) || !engine.push_checked(letter, len - depth - 1, depth) {
            engine.pruned += 1;
            alive = false;
            break;
        }
        depth += 1;
    }
    if alive {
        match engine.dfs(depth) {
            DfsOutcome::Found => report.witness = engine.witness.clone(),
            DfsOutcome::Exhausted => {}
            DfsOutcome::Aborted => report.aborted = true,
        }
    }
    report.nodes = engine.nodes;
    report.pruned = engine.pruned;
    report
}

enum DfsOutcome {
    Found,
    Exhausted,
    Aborted,
}

struct Engine<'a> {
    set: &'a TargetSet,
    len: usize,
    d: usize,
    surjective: bool,
    symmetry: bool,
    budget: &'a Budget,
    local_tokens: i64,

    word: Vec<u8>,
    frontier: Vec<u8>,
    buckets: Vec<Vec<u32>>,
    gmin: Vec<u8>,
    /// hist[v] = number of groups whose minimal deficit is v.
    hist: Vec<u32>,
    gmax: u8,
    letter_count: Vec<u32>,
    distinct_used: usize,
    max_used: u8,

    adv_frames: Vec<Vec<u32>>,
    gmin_frames: Vec<Vec<(u32, u8)>>,
    /// Per-depth (gmax, max_used) snapshots for O(1) undo.
    saved: Vec<(u8, u8)>,

    nodes: u64,
    pruned: u64,
    witness: Option<Vec<u8>>,
}

impl<'a> Engine<'a> {
    fn new(problem: &SearchProblem, set: &'a TargetSet, len: usize, budget: &'a Budget) -> Self {
        let k = set.k;
        let d = set.d;
        let count = set.target_count();
        let mut buckets = vec![Vec::new(); d];
        for idx in 0..count {
            buckets[set.target(idx)[0] as usize - 1].push(idx as u32);
        }
        let mut hist = vec![0u32; k + 1];
        hist[k] = set.group_count as u32;
        Engine {
            set,
            len,
            d,
            surjective: problem.surjective,
            symmetry: problem.symmetry_reduction && problem.d == problem.k,
            budget,
            local_tokens: 0,
            word: Vec::with_capacity(len),
            frontier: vec![0; count],
            buckets,
            gmin: vec![k as u8; set.group_count],
            hist,
            gmax: k as u8,
            letter_count: vec![0; d],
            distinct_used: 0,
            max_used: 0,
            adv_frames: (0..len).map(|_| Vec::new()).collect(),
            gmin_frames: (0..len).map(|_| Vec::new()).collect(),
            saved: vec![(0, 0); len],
            nodes: 0,
            pruned: 0,
            witness: None,
        }
    }

    fn satisfied(&self) -> bool {
        self.hist[0] as usize == self.set.group_count
            && (!self.surjective || self.distinct_used == self.d)
    }

    fn padded_witness(&self) -> Vec<u8> {
        let mut w = self.word.clone();
        w.resize(self.len, 1);
        w
    }

    /// A letter is worth trying if it advances some tracked frontier or is a
    /// first use that surjectivity still needs.
    fn letter_is_viable(&self, letter: u8) -> bool {
        !self.buckets[letter as usize - 1].is_empty()
            || (self.surjective && self.letter_count[letter as usize - 1] == 0)
    }

    /// Pushes a letter and reports whether the subtree may still contain a
    /// witness (deficits and missing letters fit in `rem_after` positions).
    fn push_checked(&mut self, letter: u8, rem_after: usize, depth: usize) -> bool {
        self.nodes += 1;
        self.saved[depth] = (self.gmax, self.max_used);
        self.word.push(letter);
        let li = letter as usize - 1;
        self.letter_count[li] += 1;
        if self.letter_count[li] == 1 {
            self.distinct_used += 1;
        }
        self.max_used = self.max_used.max(letter);

        debug_assert!(self.adv_frames[depth].is_empty());
        std::mem::swap(&mut self.adv_frames[depth], &mut self.buckets[li]);
        let k = self.set.k;
        // Split borrows: the frame is iterated while buckets/frontier mutate.
        let frame = std::mem::take(&mut self.adv_frames[depth]);
        for &t in &frame {
            let ti = t as usize;
            let f = self.frontier[ti] + 1;
            self.frontier[ti] = f;
            if (f as usize) < k {
                let next = self.set.target(ti)[f as usize];
                self.buckets[next as usize - 1].push(t);
            }
            let g = self.set.group_of[ti];
            let deficit = (k as u8) - f;
            if deficit < self.gmin[g as usize] {
                self.gmin_frames[depth].push((g, self.gmin[g as usize]));
                self.hist[self.gmin[g as usize] as usize] -= 1;
                self.hist[deficit as usize] += 1;
                self.gmin[g as usize] = deficit;
            }
        }
        self.adv_frames[depth] = frame;
        while self.gmax > 0 && self.hist[self.gmax as usize] == 0 {
            self.gmax -= 1;
        }

        let missing = if self.surjective { self.d - self.distinct_used } else { 0 };
        self.gmax as usize <= rem_after && missing <= rem_after
    }

    fn pop(&mut self, depth: usize) {
        let letter = self.word.pop().expect("pop matches push");
        let li = letter as usize - 1;
        let k = self.set.k;
        let frame = std::mem::take(&mut self.adv_frames[depth]);
        for &t in frame.iter().rev() {
            let ti = t as usize;
            let f = self.frontier[ti];
            if (f as usize) < k {
                let cur = self.set.target(ti)[f as usize];
                let popped = self.buckets[cur as usize - 1].pop();
                debug_assert_eq!(popped, Some(t));
            }
            self.frontier[ti] = f - 1;
        }
        debug_assert!(self.buckets[li].is_empty());
        self.buckets[li] = frame;
        for (g, old) in self.gmin_frames[depth].drain(..).rev() {
            self.hist[self.gmin[g as usize] as usize] -= 1;
            self.hist[old as usize] += 1;
            self.gmin[g as usize] = old;
        }
        self.letter_count[li] -= 1;
        if self.letter_count[li] == 0 {
            self.distinct_used -= 1;
        }
        let (gmax, max_used) = self.saved[depth];
        self.gmax = gmax;
        self.max_used = max_used;
    }

    fn charge_node(&mut self) -> bool {
        if self.local_tokens > 0 {
            self.local_tokens -= 1;
            return true;
        }
        if self.budget.take_chunk() {
            self.local_tokens = BUDGET_CHUNK - 1;
            return true;
        }
        false
    }

    fn dfs(&mut self, depth: usize) -> DfsOutcome {
        if self.satisfied() {
            self.witness = Some(self.padded_witness());
            return DfsOutcome::Found;
        }
        if depth == self.len {
            return DfsOutcome::Exhausted;
        }
        let remaining = self.len - depth;
        let limit = if self.symmetry {
            (self.max_used + 1).min(self.d as u8)
        } else {
            self.d as u8
        };
        for letter in 1..=limit {
            if !self.letter_is_viable(letter) {
                self.pruned += 1;
                continue;
            }
            if !self.charge_node() {
                return DfsOutcome::Aborted;
            }
            let viable = self.push_checked(letter, remaining - 1, depth);
            if viable {
                match self.dfs(depth + 1) {
                    DfsOutcome::Found => return DfsOutcome::Found,
                    DfsOutcome::Aborted => return DfsOutcome::Aborted,
                    DfsOutcome::Exhausted => {}
                }
            } else {
                self.pruned += 1;
            }
            self.pop(depth);
        }
        DfsOutcome::Exhausted
    }
}
