//! Exhaustive search for small binary DFAs whose languages are perfect
//! Fibonacci numeration systems.
//!
//! Candidates are complete, initially connected DFAs over `{0,1}` in
//! breadth-first canonical numbering ("shapes"), each paired with every
//! accepting set. A cheap necessary test runs first: for every `n` up to a
//! small bound, exactly one binary representation of `n` may be accepted
//! (up to leading zeros). Survivors are deduplicated by their minimal
//! leading-zero-closed automaton and then checked exactly.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automata::format::{from_text, to_text};
use crate::automata::{pad_normalize, DigitAlphabet, Dfa};
use crate::dict_order::representations_desc;
use crate::error::Error;
use crate::fib::ConverterSpec;
use crate::perfection::{check_perfect, find_representation, Domain, PerfectionReport, SystemSpec};

/// Transition table and accepting flags of a canonical minimal automaton.
pub type LanguageKey = (Vec<u32>, Vec<bool>);

/// (states, shape index) to continue from.
type Checkpoint = (usize, u64);

/// Largest supported number of states; accepting sets are `u8` masks.
pub const MAX_STATES: usize = 8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pruning {
    #[default]
    Exact,
    /// also require minimal representation lengths to grow with `n`
    MonotoneHeuristic,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dedup {
    ByLanguage,
    #[default]
    ByPadClosedLanguage,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub max_states: usize,
    pub pruning: Pruning,
    pub dedup: Dedup,
    pub time_budget: Option<Duration>,
    /// values checked by the prefilter
    pub prefilter_max_value: u64,
    /// shapes per work unit and checkpoint
    pub chunk_size: usize,
    /// JSON lines log; results and checkpoints are appended
    pub log_path: Option<PathBuf>,
    /// continue from the last checkpoint in `log_path`
    pub resume: bool,
}

impl SearchConfig {
    pub fn new(max_states: usize) -> Self {
        SearchConfig {
            max_states,
            pruning: Pruning::Exact,
            dedup: Dedup::ByPadClosedLanguage,
            time_budget: None,
            prefilter_max_value: 40,
            chunk_size: 1 << 14,
            log_path: None,
            resume: false,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchResult {
    /// minimal automaton of the leading-zero-closed language, text format
    pub dfa_text: String,
    pub states: usize,
    pub trimmed_states: usize,
    /// size of the shape in which the language was first found
    pub found_with_states: usize,
    pub shape_index: u64,
    pub accepting_mask: u8,
    pub report: PerfectionReport,
    /// representations of 0..=11
    pub sample: Vec<(i64, String)>,
}

impl SearchResult {
    pub fn dfa(&self) -> Dfa {
        from_text(&self.dfa_text).expect("stored automaton")
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub results: Vec<SearchResult>,
    pub shapes_scanned: u64,
    pub candidates_passed_prefilter: u64,
    pub languages_checked: u64,
    /// stopped on the time budget; results are partial
    pub budget_exhausted: bool,
    /// the heuristic may have skipped perfect systems
    pub possibly_incomplete_search: bool,
    /// (states, shape index) the run started from
    pub resumed_from: Option<(usize, u64)>,
}

/// Number of canonical shapes with exactly `k` states.
pub fn count_shapes(k: usize) -> u64 {
    let mut n = 0;
    for_each_shape(k, |_| {
        n += 1;
        true
    });
    n
}

/// Calls `f` on the flattened transition table (`table[2q + a]`) of every
/// canonical shape with exactly `k` states, in lexicographic order of the
/// tables. Stops early when `f` returns false.
pub fn for_each_shape(k: usize, mut f: impl FnMut(&[u8]) -> bool) {
    assert!((1..=MAX_STATES).contains(&k));
    let mut table = vec![0u8; 2 * k];
    fn rec(p: usize, seen: usize, k: usize, table: &mut [u8], f: &mut dyn FnMut(&[u8]) -> bool) -> bool {
        if p == 2 * k {
            return seen == k && f(table);
        }
        // state `seen` must appear before its own row starts
        let forced = seen < k && p + 1 == 2 * seen;
        let lo = if forced { seen } else { 0 };
        let hi = if seen < k { seen } else { seen - 1 };
        for v in lo..=hi {
            table[p] = v as u8;
            let seen2 = if v == seen { seen + 1 } else { seen };
            if !rec(p + 1, seen2, k, table, f) {
                return false;
            }
        }
        true
    }
    rec(0, 1, k, &mut table, &mut f);
}

/// All shapes with `k` states as tables, in enumeration order.
pub fn shapes(k: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for_each_shape(k, |t| {
        out.push(t.to_vec());
        true
    });
    out
}

/// Every canonical DFA with at most `k` states (every shape with every
/// accepting set).
pub fn enumerate_canonical(k: usize) -> impl Iterator<Item = Dfa> {
    (1..=k).flat_map(|size| {
        shapes(size)
            .into_iter()
            .flat_map(move |t| (0u32..(1 << size)).map(move |f| table_dfa(&t, f as u8)))
    })
}

/// DFA from a flattened table and an accepting mask; state 0 is initial.
pub fn table_dfa(table: &[u8], accepting: u8) -> Dfa {
    let k = table.len() / 2;
    Dfa::new(
        DigitAlphabet::binary(),
        table.iter().map(|&v| v as u32).collect(),
        (0..k).map(|q| accepting >> q & 1 == 1).collect(),
        0,
    )
    .expect("valid table")
}

/// Binary representations of `0..=max_n` as a prefix tree, so that the
/// states reached by every representation can be computed once per shape.
#[derive(Clone, Debug)]
pub struct RepTrie {
    /// (parent, digit); node 0 is the empty string
    nodes: Vec<(u32, u8)>,
    depth: Vec<u8>,
    /// node indices of the representations of each value
    by_value: Vec<Vec<u32>>,
}

impl RepTrie {
    pub fn new(max_n: u64) -> Self {
        let mut nodes = vec![(0u32, 0u8)];
        let mut depth = vec![0u8];
        let mut index: HashMap<Vec<i8>, u32> = HashMap::from([(Vec::new(), 0)]);
        let mut by_value = Vec::new();
        for n in 0..=max_n {
            let mut ids = Vec::new();
            for rep in representations_desc(n) {
                let mut cur = 0u32;
                for i in 0..rep.len() {
                    let prefix = &rep[..=i];
                    cur = match index.get(prefix) {
                        Some(&id) => id,
                        None => {
                            let id = nodes.len() as u32;
                            nodes.push((cur, rep[i] as u8));
                            depth.push(prefix.len() as u8);
                            index.insert(prefix.to_vec(), id);
                            id
                        }
                    };
                }
                ids.push(cur);
            }
            by_value.push(ids);
        }
        RepTrie { nodes, depth, by_value }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Per-shape prefilter state, reused across shapes.
pub struct Prefilter {
    trie: RepTrie,
    masks: Vec<u8>,
    image: [[u8; 256]; 2],
    pruning: Pruning,
}

impl Prefilter {
    pub fn new(max_value: u64, pruning: Pruning) -> Self {
        let trie = RepTrie::new(max_value);
        let masks = vec![0; trie.len()];
        Prefilter {
            trie,
            masks,
            image: [[0; 256]; 2],
            pruning,
        }
    }

    /// Accepting masks of this shape that pass.
    pub fn passing(&mut self, table: &[u8]) -> Vec<u8> {
        let k = table.len() / 2;
        let full = 1usize << k;
        for a in 0..2 {
            self.image[a][0] = 0;
            for m in 1..full {
                let low = m.trailing_zeros() as usize;
                self.image[a][m] = self.image[a][m & (m - 1)] | 1 << table[2 * low + a];
            }
        }
        // states reachable from the initial state on leading zeros
        let mut z = 1u8;
        loop {
            let next = z | self.image[0][z as usize];
            if next == z {
                break;
            }
            z = next;
        }
        self.masks[0] = z;
        for i in 1..self.trie.nodes.len() {
            let (parent, d) = self.trie.nodes[i];
            self.masks[i] = self.image[d as usize][self.masks[parent as usize] as usize];
        }
        let mut out = Vec::new();
        'f: for f in 1..full {
            let f = f as u8;
            let mut last_len = 0u8;
            for reps in &self.trie.by_value {
                let mut hit = None;
                for &id in reps {
                    if self.masks[id as usize] & f != 0 {
                        if hit.is_some() {
                            continue 'f;
                        }
                        hit = Some(id);
                    }
                }
                let Some(id) = hit else { continue 'f };
                if self.pruning == Pruning::MonotoneHeuristic {
                    let len = self.trie.depth[id as usize];
                    if len < last_len {
                        continue 'f;
                    }
                    last_len = len;
                }
            }
            out.push(f);
        }
        out
    }
}

fn language_key(d: &Dfa, dedup: Dedup) -> LanguageKey {
    let m = match dedup {
        Dedup::ByLanguage => d.minimize(),
        Dedup::ByPadClosedLanguage => pad_normalize(d),
    };
    (m.transitions().to_vec(), m.accepting().to_vec())
}

fn binary_system(name: String, rule: &Dfa) -> Result<SystemSpec, Error> {
    SystemSpec::new(name, rule, ConverterSpec::binary(), Domain::Naturals)
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum LogRecord {
    Result(Box<SearchResult>),
    /// every shape of size `states` before `next_shape` is done
    Checkpoint { states: usize, next_shape: u64 },
}

struct Log {
    file: Option<File>,
}

impl Log {
    fn write(&mut self, rec: &LogRecord) -> Result<(), Error> {
        if let Some(f) = &mut self.file {
            let line = serde_json::to_string(rec).map_err(|e| Error::Io(e.to_string()))?;
            writeln!(f, "{line}")?;
            f.flush()?;
        }
        Ok(())
    }
}

fn read_log(path: &PathBuf) -> Result<(Vec<SearchResult>, Option<Checkpoint>), Error> {
    let mut results = Vec::new();
    let mut checkpoint = None;
    let Ok(file) = File::open(path) else {
        return Ok((results, None));
    };
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<LogRecord>(&line) {
            Ok(LogRecord::Result(r)) => results.push(*r),
            Ok(LogRecord::Checkpoint { states, next_shape }) => checkpoint = Some((states, next_shape)),
            Err(e) => {
                return Err(Error::Parse {
                    line: i + 1,
                    message: e.to_string(),
                })
            }
        }
    }
    Ok((results, checkpoint))
}

/// A prefilter survivor: (shape index, accepting mask, language key, dfa).
type Survivor = (u64, u8, (Vec<u32>, Vec<bool>), Dfa);

/// Runs the search. Results are in order of first discovery (size, shape
/// index, accepting mask), independent of the number of worker threads.
pub fn search_perfect(cfg: &SearchConfig) -> Result<SearchOutcome, Error> {
    if cfg.max_states == 0 || cfg.max_states > MAX_STATES {
        return Err(Error::InvalidSystem(format!(
            "max_states must be in 1..={MAX_STATES}, got {}",
            cfg.max_states
        )));
    }
    let start = Instant::now();
    let mut outcome = SearchOutcome {
        possibly_incomplete_search: cfg.pruning == Pruning::MonotoneHeuristic,
        ..Default::default()
    };
    let mut seen: HashMap<(Vec<u32>, Vec<bool>), bool> = HashMap::new();
    let mut resume_at: Option<(usize, u64)> = None;
    if let (true, Some(path)) = (cfg.resume, &cfg.log_path) {
        let (prev, cp) = read_log(path)?;
        for r in prev {
            seen.insert(language_key(&r.dfa(), cfg.dedup), true);
            outcome.results.push(r);
        }
        resume_at = cp;
        outcome.resumed_from = cp;
    }
    let mut log = Log {
        file: match &cfg.log_path {
            Some(p) => Some(
                OpenOptions::new()
                    .create(true)
                    .append(cfg.resume)
                    .write(true)
                    .truncate(!cfg.resume)
                    .open(p)?,
            ),
            None => None,
        },
    };

    for size in 1..=cfg.max_states {
        let mut first_shape = 0u64;
        if let Some((s, next)) = resume_at {
            if size < s {
                continue;
            }
            if size == s {
                first_shape = next;
            }
        }
        let width = 2 * size;
        let mut process = |chunk_start: u64, flat: &[u8]| -> Result<bool, Error> {
            if cfg.time_budget.is_some_and(|b| start.elapsed() > b) {
                outcome.budget_exhausted = true;
                return Ok(false);
            }
            let survivors: Vec<Vec<Survivor>> = flat
                .par_chunks(width)
                .enumerate()
                .map_init(
                    || Prefilter::new(cfg.prefilter_max_value, cfg.pruning),
                    |pf, (i, table)| {
                        pf.passing(table)
                            .into_iter()
                            .map(|f| {
                                let d = table_dfa(table, f);
                                let key = language_key(&d, cfg.dedup);
                                (chunk_start + i as u64, f, key, d)
                            })
                            .collect()
                    },
                )
                .collect();
            let count = (flat.len() / width) as u64;
            outcome.shapes_scanned += count;
            let mut fresh: Vec<Survivor> = Vec::new();
            for s in survivors.into_iter().flatten() {
                outcome.candidates_passed_prefilter += 1;
                if !seen.contains_key(&s.2) {
                    seen.insert(s.2.clone(), false);
                    fresh.push(s);
                }
            }
            outcome.languages_checked += fresh.len() as u64;
            let checked: Vec<Option<SearchResult>> = fresh
                .par_iter()
                .map(|(shape, f, _, d)| evaluate(size, *shape, *f, d))
                .collect::<Result<_, _>>()?;
            for ((_, _, key, _), r) in fresh.into_iter().zip(checked) {
                if let Some(r) = r {
                    seen.insert(key, true);
                    log.write(&LogRecord::Result(Box::new(r.clone())))?;
                    outcome.results.push(r);
                }
            }
            log.write(&LogRecord::Checkpoint {
                states: size,
                next_shape: chunk_start + count,
            })?;
            Ok(true)
        };
        let mut buf: Vec<u8> = Vec::with_capacity(cfg.chunk_size * width);
        let mut index = 0u64;
        let mut chunk_start = first_shape;
        let mut failure: Option<Error> = None;
        let mut stopped = false;
        for_each_shape(size, |t| {
            index += 1;
            if index <= first_shape {
                return true;
            }
            buf.extend_from_slice(t);
            if buf.len() == cfg.chunk_size * width {
                match process(chunk_start, &buf) {
                    Ok(true) => {}
                    Ok(false) => {
                        stopped = true;
                        return false;
                    }
                    Err(e) => {
                        failure = Some(e);
                        return false;
                    }
                }
                buf.clear();
                chunk_start = index;
            }
            true
        });
        if let Some(e) = failure {
            return Err(e);
        }
        if !stopped && !buf.is_empty() {
            stopped = !process(chunk_start, &buf)?;
        }
        if stopped {
            return Ok(outcome);
        }
    }
    Ok(outcome)
}

fn evaluate(size: usize, shape: u64, f: u8, d: &Dfa) -> Result<Option<SearchResult>, Error> {
    let sys = binary_system(format!("search_{size}_{shape}_{f}"), d)?;
    let report = check_perfect(&sys)?;
    if !report.perfect {
        return Ok(None);
    }
    let sample = (0..12)
        .map(|n| find_representation(&sys, n).map(|r| (n, r.to_string())))
        .collect::<Result<_, _>>()?;
    Ok(Some(SearchResult {
        dfa_text: to_text(&sys.rule),
        states: sys.rule.num_states(),
        trimmed_states: sys.rule.trimmed_state_count(),
        found_with_states: size,
        shape_index: shape,
        accepting_mask: f,
        report,
        sample,
    }))
}

/// Reference search without canonical numbering: every transition table
/// over `k' <= k` states, reachable or not, every accepting set. Returns the
/// language keys of the perfect systems found. Feasible for `k <= 4`.
pub fn naive_search(k: usize, prefilter_max_value: u64) -> Result<Vec<LanguageKey>, Error> {
    let mut pf = Prefilter::new(prefilter_max_value, Pruning::Exact);
    let mut seen: HashMap<(Vec<u32>, Vec<bool>), bool> = HashMap::new();
    for size in 1..=k {
        let cells = 2 * size;
        let total = (size as u64).pow(cells as u32);
        let mut table = vec![0u8; cells];
        for code in 0..total {
            let mut c = code;
            for cell in table.iter_mut() {
                *cell = (c % size as u64) as u8;
                c /= size as u64;
            }
            for f in pf.passing(&table) {
                let d = table_dfa(&table, f);
                let key = language_key(&d, Dedup::ByPadClosedLanguage);
                if seen.contains_key(&key) {
                    continue;
                }
                let sys = binary_system("naive".into(), &d)?;
                let perfect = check_perfect(&sys)?.perfect;
                seen.insert(key, perfect);
            }
        }
    }
    let mut keys: Vec<_> = seen.into_iter().filter(|(_, p)| *p).map(|(k, _)| k).collect();
    keys.sort();
    Ok(keys)
}

/// Language keys of a search outcome, sorted, for comparison with
/// [`naive_search`].
pub fn result_keys(outcome: &SearchOutcome) -> Vec<LanguageKey> {
    let mut keys: Vec<_> = outcome
        .results
        .iter()
        .map(|r| language_key(&r.dfa(), Dedup::ByPadClosedLanguage))
        .collect();
    keys.sort();
    keys
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_counts() {
        let counts: Vec<u64> = (1..=5).map(count_shapes).collect();
        assert_eq!(counts, [1, 12, 216, 5248, 160675]);
    }

    #[test]
    fn shapes_match_isomorphism_filtered_brute_force() {
        // all 2-state tables whose states are all reachable, canonicalized
        let mut canon = std::collections::BTreeSet::new();
        for code in 0..16u32 {
            let t: Vec<u8> = (0..4).map(|i| (code >> i & 1) as u8).collect();
            let d = table_dfa(&t, 0);
            if d.bfs_order().len() == 2 {
                canon.insert(d.canonical().transitions().to_vec());
            }
        }
        assert_eq!(canon.len() as u64, count_shapes(2));
        assert_eq!(enumerate_canonical(1).count(), 2);
    }

    #[test]
    fn enumerated_automata_are_canonical() {
        for d in enumerate_canonical(3) {
            assert_eq!(d.canonical(), d);
        }
    }

    #[test]
    fn prefilter_keeps_zeckendorf() {
        // 0 -0-> 0, 0 -1-> 1, 1 -0-> 0, 1 -1-> 2 (dead)
        let mut pf = Prefilter::new(30, Pruning::Exact);
        let passing = pf.passing(&[0, 1, 0, 2, 2, 2]);
        assert!(passing.contains(&0b011));
        // unrestricted binary strings fail at n = 3
        assert!(!pf.passing(&[0, 0]).contains(&1));
    }

    #[test]
    fn small_search_finds_zeckendorf_and_lazy() {
        let out = search_perfect(&SearchConfig::new(4)).unwrap();
        let catalog = crate::catalog::get_system("zeckendorf").unwrap();
        let lazy = crate::catalog::get_system("lazy").unwrap();
        let has = |s: &SystemSpec| {
            out.results
                .iter()
                .any(|r| crate::automata::equivalent(&r.dfa(), &s.rule).unwrap())
        };
        assert!(has(&catalog));
        assert!(has(&lazy));
        assert!(!out.budget_exhausted);
    }
}
