use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use fibrep::automata::format::{from_text, to_dot};
use fibrep::automata::DigitAlphabet;
use fibrep::catalog::{get_system, list_systems};
use fibrep::dict_order::{
    build_comparator, build_max_dict_relation, build_max_dict_system, build_rank_t_relation,
    build_rank_t_system, dict_greater, Fallback,
};
use fibrep::fib::{build_normalizer, eval_rep, Anchor, ConverterSpec, RepString};
use fibrep::perfection::{check_perfect, find_representation, Domain, PerfectionReport, SystemSpec};
use fibrep::search::{search_perfect, Pruning, SearchConfig};
use fibrep::Error;

#[derive(Parser)]
#[command(name = "fibrep", version, about = "Fibonacci numeration systems checked with automata")]
struct Cli {
    /// output format
    #[arg(long, global = true, value_enum, env = "FIBREP_FORMAT", default_value = "text")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum DomainArg {
    Naturals,
    Integers,
}

#[derive(Clone, Copy, ValueEnum)]
enum AnchorArg {
    F2,
    F1,
}

impl From<AnchorArg> for Anchor {
    fn from(a: AnchorArg) -> Self {
        match a {
            AnchorArg::F2 => Anchor::F2,
            AnchorArg::F1 => Anchor::F1,
        }
    }
}

#[derive(Args)]
struct RuleArgs {
    /// catalog system name
    #[arg(long)]
    system: Option<String>,
    /// rule regex over the digit alphabet
    #[arg(long, conflicts_with = "system")]
    rule: Option<String>,
    /// rule automaton in text format
    #[arg(long, conflicts_with_all = ["system", "rule"])]
    dfa_file: Option<PathBuf>,
    /// digits of a --rule, e.g. 0,1 or -1,0,1
    #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
    alphabet: String,
    #[arg(long, value_enum)]
    domain: Option<DomainArg>,
    #[arg(long, value_enum)]
    anchor: Option<AnchorArg>,
    /// completeness offsets, e.g. 0,1
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    offsets: Option<Vec<i64>>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide completeness and unambiguity
    Check(RuleArgs),
    /// Representation of one integer
    Rep {
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// Value of a digit string
    Value {
        /// digits, `-1` or `ī` for negative one
        #[arg(long, allow_hyphen_values = true)]
        digits: String,
        #[arg(long, value_enum, default_value = "f2")]
        anchor: AnchorArg,
    },
    /// Representations of a range of integers
    Table {
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        from: i64,
        #[arg(long, allow_hyphen_values = true)]
        to: i64,
    },
    /// Dictionary order of two binary strings
    Compare {
        #[arg(long)]
        s: String,
        #[arg(long)]
        t: String,
    },
    /// Largest representations in dictionary order
    Maxdict {
        /// also print representations of 0..=upto
        #[arg(long)]
        upto: Option<i64>,
    },
    /// The t-th largest representations in dictionary order
    Rank {
        #[arg(long)]
        t: usize,
        #[arg(long, value_enum, default_value = "smallest")]
        fallback: FallbackArg,
        #[arg(long)]
        upto: Option<i64>,
    },
    /// Enumerate small automata and keep the perfect systems
    Search {
        #[arg(long)]
        max_states: usize,
        /// skip candidates whose minimal lengths are not monotone
        #[arg(long)]
        heuristic: bool,
        #[arg(long)]
        log: Option<PathBuf>,
        #[arg(long, requires = "log")]
        resume: bool,
        #[arg(long)]
        budget_secs: Option<u64>,
    },
    /// List the named systems
    Catalog,
    /// Write an automaton in DOT format
    ExportDot {
        #[command(flatten)]
        rule: RuleArgs,
        /// a built-in automaton instead of a rule
        #[arg(long, value_enum, conflicts_with_all = ["system", "rule", "dfa_file"])]
        builtin: Option<Builtin>,
        /// converter digits for --builtin normalizer
        #[arg(long, value_enum, default_value = "binary")]
        converter: ConverterArg,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        sign: i8,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        offset: i64,
        /// drop the dead state
        #[arg(long)]
        trim: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FallbackArg {
    Smallest,
    Largest,
}

#[derive(Clone, Copy, ValueEnum)]
enum Builtin {
    Normalizer,
    Comparator,
    Maxdict,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConverterArg {
    Binary,
    Signed,
}

/// Failure kinds, mapped to exit codes 1 and 2.
enum Fail {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::NoRepresentation(_) | Error::BudgetExhausted | Error::NormalizerDiverged { .. } => {
                Fail::Runtime(e.to_string())
            }
            _ => Fail::Usage(e.to_string()),
        }
    }
}

impl RuleArgs {
    fn given(&self) -> bool {
        self.system.is_some() || self.rule.is_some() || self.dfa_file.is_some()
    }
}

fn load_system(a: &RuleArgs) -> Result<SystemSpec, Fail> {
    let domain = match a.domain {
        Some(DomainArg::Integers) => Domain::Integers,
        _ => Domain::Naturals,
    };
    let anchor = a.anchor.map_or(Anchor::F2, Anchor::from);
    let sys = if let Some(name) = &a.system {
        if a.domain.is_some() || a.anchor.is_some() {
            return Err(Fail::Usage("--domain and --anchor apply to --rule and --dfa-file".into()));
        }
        get_system(name)?
    } else if let Some(text) = &a.rule {
        let alphabet = DigitAlphabet::parse(&a.alphabet)?;
        if alphabet.arity() != 1 {
            return Err(Fail::Usage("rule alphabet must have one coordinate".into()));
        }
        SystemSpec::from_regex(text.clone(), text, alphabet.coord(0), anchor, domain)?
    } else if let Some(path) = &a.dfa_file {
        let text = std::fs::read_to_string(path).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))?;
        let dfa = from_text(&text)?;
        if dfa.alphabet().arity() != 1 {
            return Err(Fail::Usage("rule automaton must read single digits".into()));
        }
        let conv = ConverterSpec::new(dfa.alphabet().coord(0).to_vec(), 1, anchor)?;
        SystemSpec::new(path.display().to_string(), &dfa, conv, domain)?
    } else {
        return Err(Fail::Usage("give one of --system, --rule, --dfa-file".into()));
    };
    match &a.offsets {
        Some(o) => Ok(sys.with_offsets(o)?),
        None => Ok(sys),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn sign_mark(sign: i8) -> &'static str {
    if sign > 0 {
        "⁺"
    } else {
        "⁻"
    }
}

fn print_report(r: &PerfectionReport) {
    println!("system: {}", r.system);
    println!("domain: {:?}, offsets {:?}", r.domain, r.offsets);
    let split = r.domain == Domain::Integers;
    for c in &r.completeness {
        let label = if split { format!("complete{}", sign_mark(c.sign)) } else { "complete".into() };
        match c.witness {
            None => println!("{label}: yes"),
            Some(w) => println!(
                "{label}: no, smallest missing value {w} (Zeckendorf {}), missing {:?}",
                c.witness_zeckendorf.as_deref().unwrap_or("?"),
                c.missing_sample
            ),
        }
    }
    for u in &r.unambiguity {
        let label = if split { format!("unambiguous{}", sign_mark(u.sign)) } else { "unambiguous".into() };
        match &u.witness {
            None => println!("{label}: yes"),
            Some(w) => println!("{label}: no, {} = {} = {}", w.value, w.first, w.second),
        }
    }
    for u in &r.unambiguity_across_offsets {
        let detail = match &u.witness {
            None => String::new(),
            Some(w) => format!(", {} = {} = {}", w.value, w.first, w.second),
        };
        println!("full strings unambiguous{}: {}{detail}", sign_mark(u.sign), yes_no(u.unambiguous));
    }
    println!("rule states: {} ({} without dead state)", r.rule_states.complete, r.rule_states.trimmed);
    println!("perfect: {}", yes_no(r.perfect));
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn table(sys: &SystemSpec, from: i64, to: i64, format: Format) -> Result<(), Fail> {
    let mut rows = Vec::new();
    for n in from..=to {
        rows.push((n, find_representation(sys, n)?));
    }
    if format == Format::Json {
        let v: Vec<_> = rows.iter().map(|(n, r)| json!({"n": n, "rep": r.machine()})).collect();
        print_json(&json!({"system": sys.name, "rows": v}));
    } else {
        for (n, r) in rows {
            println!("{n}\t{r}");
        }
    }
    Ok(())
}

fn dict_system(
    name: &str,
    relation_states: (usize, usize),
    sys: &SystemSpec,
    upto: Option<i64>,
    format: Format,
) -> Result<(), Fail> {
    match format {
        Format::Dot => print!("{}", to_dot(&sys.rule, name, true)),
        Format::Json => {
            let mut v = json!({
                "system": name,
                "relation_states": {"complete": relation_states.0, "trimmed": relation_states.1},
                "rule_states": sys.state_counts(),
            });
            if let Some(m) = upto {
                let rows: Result<Vec<_>, Error> = (0..=m)
                    .map(|n| find_representation(sys, n).map(|r| json!({"n": n, "rep": r.machine()})))
                    .collect();
                v["rows"] = json!(rows?);
            }
            print_json(&v);
        }
        Format::Text => {
            println!("system: {name}");
            println!("relation states: {} ({} without dead state)", relation_states.0, relation_states.1);
            let c = sys.state_counts();
            println!("rule states: {} ({} without dead state)", c.complete, c.trimmed);
            if let Some(m) = upto {
                table(sys, 0, m, format)?;
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, Fail> {
    let format = cli.format;
    match cli.command {
        Command::Check(a) => {
            let sys = load_system(&a)?;
            let r = check_perfect(&sys)?;
            match format {
                Format::Json => print_json(&r),
                Format::Dot => print!("{}", to_dot(&sys.rule, &sys.name, true)),
                Format::Text => print_report(&r),
            }
            return Ok(if r.perfect { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
        Command::Rep { rule, n } => {
            let sys = load_system(&rule)?;
            let r = find_representation(&sys, n)?;
            match format {
                Format::Json => print_json(&json!({"system": sys.name, "n": n, "rep": r.machine()})),
                _ => println!("{r}"),
            }
        }
        Command::Value { digits, anchor } => {
            let r = RepString::parse(&digits)?;
            let v = eval_rep(r.digits(), anchor.into());
            match format {
                Format::Json => print_json(&json!({"digits": r.machine(), "value": v})),
                _ => println!("{v}"),
            }
        }
        Command::Table { rule, from, to } => {
            if from > to {
                return Err(Fail::Usage(format!("empty range {from}..{to}")));
            }
            table(&load_system(&rule)?, from, to, format)?;
        }
        Command::Compare { s, t } => {
            let (a, b) = (RepString::parse(&s)?, RepString::parse(&t)?);
            if a.digits().iter().chain(b.digits()).any(|d| !(0..=1).contains(d)) {
                return Err(Fail::Usage("compare takes binary strings".into()));
            }
            let rel = if dict_greater(a.digits(), b.digits()) {
                ">"
            } else if dict_greater(b.digits(), a.digits()) {
                "<"
            } else {
                "="
            };
            match format {
                Format::Json => print_json(&json!({"s": a.machine(), "t": b.machine(), "order": rel})),
                _ => println!("{a} {rel} {b}"),
            }
        }
        Command::Maxdict { upto } => {
            let rel = build_max_dict_relation()?;
            let sys = build_max_dict_system()?;
            dict_system("max_dict", (rel.num_states(), rel.trimmed_state_count()), &sys, upto, format)?;
        }
        Command::Rank { t, fallback, upto } => {
            let fallback = match fallback {
                FallbackArg::Smallest => Fallback::Smallest,
                FallbackArg::Largest => Fallback::Largest,
            };
            let rel = build_rank_t_relation(t, fallback)?;
            let sys = build_rank_t_system(t, fallback)?;
            let name = sys.name.clone();
            dict_system(&name, (rel.num_states(), rel.trimmed_state_count()), &sys, upto, format)?;
        }
        Command::Search {
            max_states,
            heuristic,
            log,
            resume,
            budget_secs,
        } => {
            let mut cfg = SearchConfig::new(max_states);
            if heuristic {
                cfg.pruning = Pruning::MonotoneHeuristic;
            }
            cfg.log_path = log;
            cfg.resume = resume;
            cfg.time_budget = budget_secs.map(Duration::from_secs);
            let out = search_perfect(&cfg)?;
            match format {
                Format::Json => print_json(&out),
                _ => {
                    for (i, r) in out.results.iter().enumerate() {
                        let sample: Vec<&str> = r.sample.iter().map(|(_, s)| s.as_str()).collect();
                        println!("#{i}: {} states ({} trimmed): {}", r.states, r.trimmed_states, sample.join(" "));
                    }
                    println!(
                        "{} perfect systems; {} shapes, {} passed the prefilter, {} languages checked",
                        out.results.len(),
                        out.shapes_scanned,
                        out.candidates_passed_prefilter,
                        out.languages_checked
                    );
                    if out.possibly_incomplete_search {
                        println!("heuristic pruning: perfect systems may be missing");
                    }
                    if out.budget_exhausted {
                        println!("time budget exhausted: results are partial");
                    }
                }
            }
            if out.budget_exhausted {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Catalog => match format {
            Format::Json => print_json(&list_systems()),
            _ => {
                for e in list_systems() {
                    let source = e.source.as_ref().map_or("(relation)".to_string(), |s| s.to_string());
                    println!("{:<16}{:?} {:?} {}", e.name, e.digits, e.domain, e.description);
                    println!("{:<16}{source}", "");
                }
            }
        },
        Command::ExportDot {
            rule,
            builtin,
            converter,
            sign,
            offset,
            trim,
        } => {
            let (dfa, name) = match (builtin, rule) {
                (Some(Builtin::Normalizer), _) => {
                    let spec = match converter {
                        ConverterArg::Binary => ConverterSpec::binary(),
                        ConverterArg::Signed => ConverterSpec::signed(),
                    };
                    if sign != 1 && sign != -1 {
                        return Err(Fail::Usage("--sign must be 1 or -1".into()));
                    }
                    ((*build_normalizer(&spec.with_sign(sign), offset)?).clone(), "normalizer".to_string())
                }
                (Some(Builtin::Comparator), _) => (build_comparator(), "comparator".into()),
                (Some(Builtin::Maxdict), _) => (build_max_dict_relation()?, "max_dict".into()),
                (None, r) if r.given() => {
                    let sys = load_system(&r)?;
                    (sys.rule, sys.name)
                }
                (None, _) => return Err(Fail::Usage("give a rule source or --builtin".into())),
            };
            print!("{}", to_dot(&dfa, &name, trim));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Fail::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Fail::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
