//! Named numeration systems with golden fixtures.

use std::sync::OnceLock;

use serde::Serialize;

use crate::automata::{combine, BoolOp, DigitAlphabet, Dfa};
use crate::dict_order::build_max_dict_system;
use crate::error::Error;
use crate::fib::{Anchor, ConverterSpec};
use crate::perfection::{Domain, SystemSpec};
use crate::regex::regex_dfa;

/// A rule given as regexes that must all match and regexes that must not.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RuleSource {
    pub include: Vec<String>,
    pub exclude: Vec<String>,
}

impl RuleSource {
    pub fn new(include: &[&str], exclude: &[&str]) -> Self {
        RuleSource {
            include: include.iter().map(|s| s.to_string()).collect(),
            exclude: exclude.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn build(&self, alphabet: &DigitAlphabet) -> Result<Dfa, Error> {
        let mut d = Dfa::universal(alphabet.clone());
        for r in &self.include {
            d = combine(BoolOp::And, &d, &regex_dfa(r, alphabet)?)?.minimize();
        }
        for r in &self.exclude {
            d = combine(BoolOp::Diff, &d, &regex_dfa(r, alphabet)?)?.minimize();
        }
        Ok(d)
    }
}

impl std::fmt::Display for RuleSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .include
            .iter()
            .map(|r| format!("\"{r}\""))
            .chain(self.exclude.iter().map(|r| format!("~\"{r}\"")))
            .collect();
        write!(f, "{}", parts.join(" & "))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    /// `None` for systems derived from a relation rather than regexes
    pub source: Option<RuleSource>,
    pub digits: Vec<i8>,
    pub anchor: Anchor,
    pub domain: Domain,
    pub offsets: Vec<i64>,
    /// expected trimmed size of the rule (or relation) automaton
    pub expected_states: Option<usize>,
    pub expected_perfect: bool,
    /// value → representation, `-1` written `ī`
    pub fixtures: Vec<(i64, &'static str)>,
}

impl CatalogEntry {
    pub fn build(&self) -> Result<SystemSpec, Error> {
        let Some(src) = &self.source else {
            return match self.name {
                "max_dict" => build_max_dict_system(),
                other => Err(Error::UnknownSystem(other.into())),
            };
        };
        let alphabet = DigitAlphabet::unary(&self.digits)?;
        let rule = src.build(&alphabet)?;
        let conv = ConverterSpec::new(self.digits.clone(), 1, self.anchor)?;
        let mut sys = SystemSpec::new(self.name, &rule, conv, self.domain)?;
        if self.offsets != [0] {
            sys = sys.with_offsets(&self.offsets)?;
        }
        Ok(sys)
    }
}

const TABLE_GREEDY: [(i64, &str); 12] = [
    (0, "ε"),
    (1, "1"),
    (2, "10"),
    (3, "100"),
    (4, "101"),
    (5, "1000"),
    (6, "1001"),
    (7, "1010"),
    (8, "10000"),
    (9, "10001"),
    (10, "10010"),
    (11, "10100"),
];

const TABLE_LAZY: [(i64, &str); 12] = [
    (0, "ε"),
    (1, "1"),
    (2, "10"),
    (3, "11"),
    (4, "101"),
    (5, "110"),
    (6, "111"),
    (7, "1010"),
    (8, "1011"),
    (9, "1101"),
    (10, "1110"),
    (11, "1111"),
];

const TABLE_DICT: [(i64, &str); 11] = [
    (1, "1"),
    (2, "10"),
    (3, "11"),
    (4, "101"),
    (5, "110"),
    (6, "111"),
    (7, "1010"),
    (8, "1100"),
    (9, "1101"),
    (10, "1110"),
    (11, "1111"),
];

const ODD_INCLUDE: &str = "(0*|0*10([-1]0|10|00)*)";
const ODD_EXCLUDE: &str = ".*[-1]0*[-1].*";

/// Odd system with the ε digit written as a final `F_1` digit. `strict`
/// applies the no-two-adjacent-negatives condition to the ε digit as well;
/// otherwise it covers the core only.
pub fn hajnal_odd_eps_source(strict: bool) -> RuleSource {
    let exclude = if strict { ODD_EXCLUDE } else { ".*[-1]0*[-1].*." };
    RuleSource::new(&["0*(10([-1]0|10|00)*(0|[-1]))?"], &[exclude])
}

fn entries() -> Vec<CatalogEntry> {
    let bin = vec![0, 1];
    let sgn = vec![-1, 0, 1];
    let entry = |name, description, source, digits: &Vec<i8>, anchor, domain, expected_states, fixtures: Vec<(i64, &'static str)>| CatalogEntry {
        name,
        description,
        source: Some(source),
        digits: digits.clone(),
        anchor,
        domain,
        offsets: vec![0],
        expected_states,
        expected_perfect: true,
        fixtures,
    };
    let mut odd = entry(
        "hajnal_odd",
        "nonzero digits at odd places only, leading digit positive, no two adjacent -1; trailing ε in {-1, 0}",
        RuleSource::new(&[ODD_INCLUDE], &[ODD_EXCLUDE]),
        &sgn,
        Anchor::F2,
        Domain::Naturals,
        Some(5),
        vec![(14, "100010ī")],
    );
    odd.offsets = vec![0, 1];
    vec![
        entry(
            "zeckendorf",
            "greedy: no block 11",
            RuleSource::new(&[], &[".*11.*"]),
            &bin,
            Anchor::F2,
            Domain::Naturals,
            Some(3),
            TABLE_GREEDY.to_vec(),
        ),
        entry(
            "lazy",
            "no block 00 after the leading 1",
            RuleSource::new(&[], &["0*1(0|1)*00(0|1)*"]),
            &bin,
            Anchor::F2,
            Domain::Naturals,
            Some(4),
            TABLE_LAZY.to_vec(),
        ),
        entry(
            "hajnal_alt",
            "nonzero digits alternate in sign, leading digit positive, with spacing rules",
            RuleSource::new(
                &["(0*|0*1.*)", "(0*|0*10*|.*(100+[-1]|[-1]00+1)0*)"],
                &[".*(10*1|[-1]0*[-1]).*", ".*(1[-1]|[-1]1).*"],
            ),
            &sgn,
            Anchor::F2,
            Domain::Naturals,
            Some(12),
            vec![(9, "10ī001")],
        ),
        entry(
            "hajnal_even",
            "nonzero digits at even places only, leading digit positive, no two adjacent -1",
            RuleSource::new(&["(0*|0*1(0[-1]|01|00)*)"], &[".*[-1]0*[-1].*"]),
            &sgn,
            Anchor::F2,
            Domain::Naturals,
            Some(5),
            vec![(14, "10ī0001")],
        ),
        odd,
        entry(
            "hajnal_odd_eps",
            "odd system with ε as a final F1 digit and the adjacency condition applied to it",
            hajnal_odd_eps_source(true),
            &sgn,
            Anchor::F1,
            Domain::Naturals,
            None,
            vec![(14, "100010ī")],
        ),
        entry(
            "alpert",
            "far-difference: three zeros between nonzeros of equal sign, two between opposite signs",
            RuleSource::new(
                &[],
                &[
                    ".*([-1][-1]|[-1]0[-1]|[-1]00[-1]|11|101|1001).*",
                    ".*([-1]1|1[-1]|10[-1]|[-1]01).*",
                ],
            ),
            &sgn,
            Anchor::F2,
            Domain::Integers,
            Some(7),
            vec![(-38, "ī000ī001")],
        ),
        entry(
            "bunder",
            "negaFibonacci: positive digits at odd places, negative at even places, no adjacent nonzeros",
            RuleSource::new(&[], &[".*1.(..)*", ".*[-1](..)*", ".*((1[-1])|([-1]1)).*"]),
            &sgn,
            Anchor::F1,
            Domain::Integers,
            None,
            vec![],
        ),
        entry(
            "one0sq",
            "lazy with one 00 block allowed right after the leading 1",
            RuleSource::new(&["0*(()|1|10(()|0|1)1*(01+)*(()|0))"], &[]),
            &bin,
            Anchor::F2,
            Domain::Naturals,
            Some(6),
            vec![],
        ),
        entry(
            "az",
            "11 only at the end; ends in 1, 11 or an odd run of 0s (reconstruction)",
            RuleSource::new(&["0*(()|1(0+1)*(()|1|0(00)*))"], &[]),
            &bin,
            Anchor::F2,
            Domain::Naturals,
            Some(6),
            vec![],
        ),
        CatalogEntry {
            name: "max_dict",
            description: "largest representation in dictionary order",
            source: None,
            digits: bin.clone(),
            anchor: Anchor::F2,
            domain: Domain::Naturals,
            offsets: vec![0],
            expected_states: Some(7),
            expected_perfect: true,
            fixtures: TABLE_DICT.to_vec(),
        },
    ]
}

/// Every catalog entry, in a fixed order.
pub fn list_systems() -> &'static [CatalogEntry] {
    static ENTRIES: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    ENTRIES.get_or_init(entries)
}

pub fn get_entry(name: &str) -> Result<&'static CatalogEntry, Error> {
    list_systems()
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownSystem(name.into()))
}

/// Builds the named system. Results are cached.
pub fn get_system(name: &str) -> Result<SystemSpec, Error> {
    type Cache = std::sync::Mutex<std::collections::HashMap<String, SystemSpec>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(s) = cache.lock().unwrap().get(name) {
        return Ok(s.clone());
    }
    let sys = get_entry(name)?.build()?;
    cache.lock().unwrap().insert(name.to_string(), sys.clone());
    Ok(sys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fib::RepString;

    #[test]
    fn names_are_unique_and_lookup_fails_cleanly() {
        let names: Vec<&str> = list_systems().iter().map(|e| e.name).collect();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len());
        assert_eq!(names.len(), 11);
        assert!(matches!(get_system("nope"), Err(Error::UnknownSystem(_))));
    }

    #[test]
    fn fixtures_evaluate_to_their_values() {
        for e in list_systems() {
            let sys = get_system(e.name).unwrap();
            for &(n, rep) in &e.fixtures {
                let r = RepString::from(rep);
                assert_eq!(sys.value_of(r.digits()), n, "{} {rep}", e.name);
                assert!(sys.accepts(r.digits()), "{} {rep}", e.name);
            }
        }
    }

    #[test]
    fn expected_counts_from_the_listing() {
        assert_eq!(get_entry("hajnal_alt").unwrap().expected_states, Some(12));
        assert_eq!(get_entry("alpert").unwrap().expected_states, Some(7));
    }

    #[test]
    fn rule_source_display() {
        let s = RuleSource::new(&["0*"], &[".*11.*"]);
        assert_eq!(s.to_string(), "\"0*\" & ~\".*11.*\"");
    }
}
