//! Method names from Q&A page titles.
//!
//! A small rule-based extractor stands in for a part-of-speech tagger: the
//! first word found in a verb lexicon is the verb, and the noun phrase after
//! it (up to the next preposition) is the direct object.

use std::collections::BTreeSet;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

const BUNDLED_VERBS: &str = include_str!("../../data/verbs.txt");

/// Leading words of questions that never carry the verb.
const PREFIXES: [&str; 10] = [
    "how", "to", "do", "does", "can", "i", "you", "in", "java", "we",
];

const STOPWORDS: [&str; 43] = [
    "a", "an", "the", "this", "that", "these", "those", "my", "your", "our", "its", "their",
    "some", "any", "all", "each", "every", "one", "two", "three", "four", "five", "ten", "it",
    "how", "them", "is", "are", "be", "using", "use", "via", "and", "or", "not", "no", "me", "own",
    "given", "specific", "certain", "multiple", "several",
];

const PREPOSITIONS: [&str; 20] = [
    "to", "from", "of", "in", "into", "on", "onto", "at", "by", "for", "with", "without", "within",
    "over", "under", "between", "through", "as", "than", "after",
];

const MAX_OBJECT_WORDS: usize = 3;

/// The page a snippet was taken from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SoPage {
    pub title: String,
    pub url: String,
    pub answer_id: u64,
    pub question_id: u64,
}

impl SoPage {
    pub fn new(
        title: impl Into<String>,
        url: impl Into<String>,
        answer_id: u64,
        question_id: u64,
    ) -> Self {
        SoPage {
            title: title.into(),
            url: url.into(),
            answer_id,
            question_id,
        }
    }

    /// Title on the first line, `@see <url>` on the second.
    pub fn javadoc(&self) -> String {
        if self.url.is_empty() {
            self.title.clone()
        } else {
            format!("{}\n@see {}", self.title, self.url)
        }
    }
}

/// Set of lowercase verbs, one per line in its text form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerbLexicon {
    verbs: BTreeSet<String>,
}

impl VerbLexicon {
    pub fn parse(text: &str) -> Self {
        let verbs = text
            .lines()
            .map(|l| l.trim().to_ascii_lowercase())
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect();
        VerbLexicon { verbs }
    }

    pub fn load(path: &Path) -> std::io::Result<Self> {
        Ok(Self::parse(&std::fs::read_to_string(path)?))
    }

    pub fn bundled() -> &'static VerbLexicon {
        static LEXICON: OnceLock<VerbLexicon> = OnceLock::new();
        LEXICON.get_or_init(|| VerbLexicon::parse(BUNDLED_VERBS))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.verbs.contains(word)
    }

    pub fn len(&self) -> usize {
        self.verbs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verbs.is_empty()
    }
}

fn tokenize(title: &str) -> Vec<String> {
    title
        .split(|c: char| !c.is_ascii_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}

fn capitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(c) => c.to_ascii_uppercase().to_string() + chars.as_str(),
        None => String::new(),
    }
}

/// Verb plus direct object in camelCase, or `snippet<answer_id>` when the
/// title has no known verb. Always a legal Java identifier.
pub fn generate_method_name(title: &str, answer_id: u64, lexicon: Option<&VerbLexicon>) -> String {
    let lexicon = lexicon.unwrap_or_else(|| VerbLexicon::bundled());
    let tokens = tokenize(title);
    let lower: Vec<String> = tokens.iter().map(|t| t.to_ascii_lowercase()).collect();

    let start = lower
        .iter()
        .position(|t| !PREFIXES.contains(&t.as_str()))
        .unwrap_or(lower.len());
    let Some(verb_at) = (start..lower.len()).find(|&i| lexicon.contains(&lower[i])) else {
        return format!("snippet{answer_id}");
    };

    let mut name = lower[verb_at].clone();
    let mut words = 0;
    for (tok, low) in tokens.iter().zip(&lower).skip(verb_at + 1) {
        if PREPOSITIONS.contains(&low.as_str()) {
            if words > 0 {
                break;
            }
            continue;
        }
        if STOPWORDS.contains(&low.as_str()) || low.chars().all(|c| c.is_ascii_digit()) {
            if words > 0 {
                break;
            }
            continue;
        }
        name.push_str(&capitalize(tok));
        words += 1;
        if words == MAX_OBJECT_WORDS {
            break;
        }
    }
    sanitize(&name, answer_id)
}

fn sanitize(name: &str, answer_id: u64) -> String {
    let clean: String = name.chars().filter(|c| c.is_ascii_alphanumeric()).collect();
    match clean.chars().next() {
        Some(c) if c.is_ascii_alphabetic() => clean,
        _ => format!("snippet{answer_id}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn name(title: &str) -> String {
        generate_method_name(title, 42, None)
    }

    #[test]
    fn verb_object_names() {
        assert_eq!(name("How to convert String to int"), "convertString");
        assert_eq!(name("How to add two numbers"), "addNumbers");
        assert_eq!(name("How to get the first day of the week"), "getFirstDay");
        assert_eq!(
            name("Calculate MD5 hash of a string in Java"),
            "calculateMD5Hash"
        );
        assert_eq!(name("Count occurrences of a substring"), "countOccurrences");
        assert_eq!(name("How do I sort a list"), "sortList");
        assert_eq!(name("How can I reverse?"), "reverse");
    }

    #[test]
    fn fallback_without_verb() {
        assert_eq!(name("Weird title without any verb"), "snippet42");
        assert_eq!(name(""), "snippet42");
    }

    #[test]
    fn custom_lexicon() {
        let lex = VerbLexicon::parse("# verbs\nfrobnicate\n");
        assert_eq!(lex.len(), 1);
        assert_eq!(
            generate_method_name("frobnicate the widget", 1, Some(&lex)),
            "frobnicateWidget"
        );
        assert_eq!(
            generate_method_name("convert it", 1, Some(&lex)),
            "snippet1"
        );
    }

    #[test]
    fn bundled_lexicon_size() {
        assert!(VerbLexicon::bundled().len() >= 200);
    }

    #[test]
    fn javadoc_lines() {
        let p = SoPage::new("Title", "https://x/1", 1, 2);
        assert_eq!(p.javadoc(), "Title\n@see https://x/1");
    }
}
