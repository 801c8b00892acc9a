//! Word reducers: suffix stemming, lemma lookup, Arabic light stemming,
//! rooting, and the morphAr combination of the last two.
//!
//! Affix strippers repeat until no rule applies, so each is idempotent on its
//! own output. The rooter is a simplified stand-in for a full root extractor.

use std::collections::HashMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bidict::{BilingualDictionary, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReducerKind {
    Identity,
    SuffixStemmer,
    LemmaTable,
    LightStemmer,
    Rooter,
    /// Light stem when the dictionary knows it, root otherwise.
    Morphar,
}

impl ReducerKind {
    pub const ALL: [ReducerKind; 6] = [
        ReducerKind::Identity,
        ReducerKind::SuffixStemmer,
        ReducerKind::LemmaTable,
        ReducerKind::LightStemmer,
        ReducerKind::Rooter,
        ReducerKind::Morphar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ReducerKind::Identity => "identity",
            ReducerKind::SuffixStemmer => "suffix_stemmer",
            ReducerKind::LemmaTable => "lemma_table",
            ReducerKind::LightStemmer => "light_stemmer",
            ReducerKind::Rooter => "rooter",
            ReducerKind::Morphar => "morphar",
        }
    }
}

impl FromStr for ReducerKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ReducerKind::ALL
            .into_iter()
            .find(|k| k.name() == s || k.name().replace('_', "-") == s)
            .ok_or_else(|| format!("unknown reducer {s:?}"))
    }
}

/// English suffix rules: `(suffix, replacement, minimum stem length)`.
const SUFFIX_RULES: &[(&str, &str, usize)] = &[
    ("sses", "ss", 2),
    ("ies", "y", 2),
    ("ing", "", 3),
    ("ed", "", 3),
    ("ly", "", 3),
    ("s", "", 3),
];

const LEMMA_EXCEPTIONS: &[(&str, &str)] = &[
    ("am", "be"),
    ("are", "be"),
    ("is", "be"),
    ("was", "be"),
    ("were", "be"),
    ("been", "be"),
    ("has", "have"),
    ("had", "have"),
    ("went", "go"),
    ("gone", "go"),
    ("did", "do"),
    ("done", "do"),
    ("made", "make"),
    ("said", "say"),
    ("took", "take"),
    ("taken", "take"),
    ("wrote", "write"),
    ("written", "write"),
    ("ran", "run"),
    ("began", "begin"),
    ("begun", "begin"),
    ("children", "child"),
    ("men", "man"),
    ("women", "woman"),
    ("people", "person"),
    ("mice", "mouse"),
    ("feet", "foot"),
    ("teeth", "tooth"),
    ("better", "good"),
    ("best", "good"),
    ("worse", "bad"),
    ("worst", "bad"),
    ("countries", "country"),
    ("studies", "study"),
];

const LIGHT_PREFIXES: &[&str] = &["وال", "بال", "كال", "فال", "لل", "ال", "و"];
const LIGHT_SUFFIXES: &[&str] = &["ها", "ان", "ات", "ون", "ين", "يه", "ية", "ه", "ة", "ي"];
const ROOT_PREFIXES: &[&str] = &["است", "مست", "ان", "م", "ت", "ن", "ي", "ا"];
const WEAK_LETTERS: &[char] = &['ا', 'و', 'ي', 'ى', 'أ', 'إ', 'آ', 'ئ', 'ؤ'];

/// Prefix/suffix lists stripped longest-first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffixRules {
    prefixes: Vec<String>,
    suffixes: Vec<String>,
}

impl AffixRules {
    /// Ties between equally long affixes go to the earlier list entry.
    pub fn new(prefixes: Vec<String>, suffixes: Vec<String>) -> Self {
        let order = |mut v: Vec<String>| {
            v.retain(|a| !a.is_empty());
            v.sort_by_key(|a| std::cmp::Reverse(a.chars().count()));
            v
        };
        Self {
            prefixes: order(prefixes),
            suffixes: order(suffixes),
        }
    }

    pub fn arabic_light() -> Self {
        Self::new(
            LIGHT_PREFIXES.iter().map(|s| s.to_string()).collect(),
            LIGHT_SUFFIXES.iter().map(|s| s.to_string()).collect(),
        )
    }

    pub fn prefixes(&self) -> &[String] {
        &self.prefixes
    }

    pub fn suffixes(&self) -> &[String] {
        &self.suffixes
    }
}

/// Minimum letters left after removing an affix: single-letter affixes need a
/// three-letter remainder, longer ones two.
fn min_remainder(affix: &str) -> usize {
    if affix.chars().count() == 1 {
        3
    } else {
        2
    }
}

fn strip_once(word: &str, rules: &AffixRules) -> Option<String> {
    let len = word.chars().count();
    for p in &rules.prefixes {
        if let Some(rest) = word.strip_prefix(p.as_str()) {
            if len - p.chars().count() >= min_remainder(p) {
                return Some(rest.to_string());
            }
        }
    }
    for s in &rules.suffixes {
        if let Some(rest) = word.strip_suffix(s.as_str()) {
            if len - s.chars().count() >= min_remainder(s) {
                return Some(rest.to_string());
            }
        }
    }
    None
}

/// Configured set of reducers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reducers {
    light: AffixRules,
    root_prefixes: Vec<String>,
    lemmas: HashMap<String, String>,
}

impl Default for Reducers {
    fn default() -> Self {
        Self {
            light: AffixRules::arabic_light(),
            root_prefixes: ROOT_PREFIXES.iter().map(|s| s.to_string()).collect(),
            lemmas: LEMMA_EXCEPTIONS
                .iter()
                .map(|(w, l)| (w.to_string(), l.to_string()))
                .collect(),
        }
    }
}

impl Reducers {
    pub fn with_light_rules(mut self, rules: AffixRules) -> Self {
        self.light = rules;
        self
    }

    pub fn with_lemmas(mut self, lemmas: impl IntoIterator<Item = (String, String)>) -> Self {
        self.lemmas.extend(lemmas);
        self
    }

    /// Reduces `word`. Without a dictionary, morphAr falls back to the light stem.
    pub fn reduce(&self, word: &str, kind: ReducerKind) -> String {
        match kind {
            ReducerKind::Identity => word.to_string(),
            ReducerKind::SuffixStemmer => suffix_stem(word),
            ReducerKind::LemmaTable => self.lemmatize(word),
            ReducerKind::LightStemmer => self.light_stem(word),
            ReducerKind::Rooter => self.root(word),
            ReducerKind::Morphar => self.light_stem(word),
        }
    }

    /// Like [`Reducers::reduce`], resolving morphAr against the `side` terms of `dict`.
    pub fn reduce_with_dict(
        &self,
        word: &str,
        kind: ReducerKind,
        dict: Option<(&BilingualDictionary, Side)>,
    ) -> String {
        match (kind, dict) {
            (ReducerKind::Morphar, Some((dict, side))) => self.morphar_form(word, dict, side),
            _ => self.reduce(word, kind),
        }
    }

    pub fn light_stem(&self, word: &str) -> String {
        let mut current = word.to_string();
        while let Some(next) = strip_once(&current, &self.light) {
            current = next;
        }
        current
    }

    pub fn lemmatize(&self, word: &str) -> String {
        if let Some(lemma) = self.lemmas.get(word) {
            return lemma.clone();
        }
        let stem = suffix_stem(word);
        self.lemmas.get(&stem).cloned().unwrap_or(stem)
    }

    /// Light stem, then derivational prefixes and interior weak letters are
    /// removed while more than three letters remain. Falls back to the light
    /// stem when fewer than three letters would be left.
    pub fn root(&self, word: &str) -> String {
        let mut current = word.to_string();
        loop {
            let next = self.root_step(&self.light_stem(&current));
            if next == current {
                break;
            }
            current = next;
        }
        if current.chars().count() < 3 {
            self.light_stem(word)
        } else {
            current
        }
    }

    fn root_step(&self, stem: &str) -> String {
        let mut chars: Vec<char> = stem.chars().collect();
        while chars.len() > 3 {
            let word: String = chars.iter().collect();
            let prefix = self.root_prefixes.iter().find(|p| {
                word.starts_with(p.as_str()) && chars.len() - p.chars().count() >= 3
            });
            if let Some(p) = prefix {
                chars.drain(..p.chars().count());
                continue;
            }
            let interior = (1..chars.len() - 1).find(|&i| WEAK_LETTERS.contains(&chars[i]));
            match interior {
                Some(i) => {
                    chars.remove(i);
                }
                None => break,
            }
        }
        chars.into_iter().collect()
    }

    /// The form morphAr looks up: the light stem when `dict` has it, the root otherwise.
    pub fn morphar_form(&self, word: &str, dict: &BilingualDictionary, side: Side) -> String {
        let light = self.light_stem(word);
        if dict.contains(side, &light) {
            light
        } else {
            self.root(word)
        }
    }
}

/// Repeatedly applies the first matching suffix rule.
pub fn suffix_stem(word: &str) -> String {
    let mut current = word.to_string();
    'outer: loop {
        for &(suffix, replacement, min_stem) in SUFFIX_RULES {
            let Some(stem) = current.strip_suffix(suffix) else {
                continue;
            };
            if stem.chars().count() < min_stem {
                continue;
            }
            if suffix == "s" && (stem.ends_with('s') || stem.ends_with('u') || stem.ends_with('i')) {
                continue;
            }
            if matches!(suffix, "ing" | "ed") && !stem.chars().any(is_vowel) {
                continue;
            }
            current = format!("{stem}{replacement}");
            continue 'outer;
        }
        return current;
    }
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

/// Translations of `word` via morphAr: those of its light stem when the
/// dictionary has it, otherwise those of its root (possibly none).
pub fn morphar_lookup<'d>(
    word: &str,
    dict: &'d BilingualDictionary,
    side: Side,
    reducers: &Reducers,
) -> &'d [String] {
    let light = reducers.light_stem(word);
    if dict.contains(side, &light) {
        return dict.translations(side, &light);
    }
    dict.translations(side, &reducers.root(word))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity() {
        assert_eq!(Reducers::default().reduce("library", ReducerKind::Identity), "library");
    }

    #[test]
    fn light_stem_article_and_ta_marbuta() {
        assert_eq!(
            Reducers::default().reduce("المكتبة", ReducerKind::LightStemmer),
            "مكتب"
        );
    }

    #[test]
    fn light_stem_respects_min_length() {
        let r = Reducers::default();
        // single-letter prefix needs three letters left
        assert_eq!(r.light_stem("ولد"), "ولد");
        assert_eq!(r.light_stem("والكتاب"), "كتاب");
    }

    #[test]
    fn suffix_stemmer_rules() {
        assert_eq!(suffix_stem("writes"), "write");
        assert_eq!(suffix_stem("classes"), "class");
        assert_eq!(suffix_stem("flies"), "fly");
        assert_eq!(suffix_stem("meetings"), "meet");
        assert_eq!(suffix_stem("glass"), "glass");
        assert_eq!(suffix_stem("bus"), "bus");
        assert_eq!(suffix_stem("sing"), "sing");
    }

    #[test]
    fn lemma_table_then_fallback() {
        let r = Reducers::default();
        assert_eq!(r.lemmatize("went"), "go");
        assert_eq!(r.lemmatize("children"), "child");
        assert_eq!(r.lemmatize("books"), "book");
    }

    #[test]
    fn lemma_values_are_stemmer_fixpoints() {
        for (_, lemma) in LEMMA_EXCEPTIONS {
            assert_eq!(suffix_stem(lemma), *lemma, "{lemma}");
        }
    }

    #[test]
    fn rooter_reaches_three_letters() {
        let r = Reducers::default();
        assert_eq!(r.root("الكاتب"), "كتب");
        assert_eq!(r.root("مكتوب"), "كتب");
        assert_eq!(r.root("كتب"), "كتب");
    }

    #[test]
    fn morphar_prefers_light_stem() {
        let r = Reducers::default();
        let dict = BilingualDictionary::read("library\tمكتب\nwrite\tكتب\n".as_bytes()).unwrap();
        assert_eq!(morphar_lookup("المكتبة", &dict, Side::Target, &r), &["library"]);
        assert_eq!(r.morphar_form("المكتبة", &dict, Side::Target), "مكتب");
        // light stem "كاتب" absent, root "كتب" present
        assert_eq!(morphar_lookup("الكاتب", &dict, Side::Target, &r), &["write"]);
        assert!(morphar_lookup("زززز", &dict, Side::Target, &r).is_empty());
    }

    #[test]
    fn kind_names_parse() {
        for kind in ReducerKind::ALL {
            assert_eq!(kind.name().parse::<ReducerKind>().unwrap(), kind);
        }
        assert!("porter".parse::<ReducerKind>().is_err());
    }
}
