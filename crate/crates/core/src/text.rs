//! Token-level text normalization: punctuation filtering, case folding, and
//! the space-joined strings used for substring matching.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

/// Opening quotation-mark token (U+201C). Adapters normalize straight
/// quotes to the curly pair before ingestion.
pub const OPENING_QUOTE: &str = "\u{201C}";
/// Closing quotation-mark token (U+201D).
pub const CLOSING_QUOTE: &str = "\u{201D}";

/// A token counts as punctuation iff it contains no letter and no digit.
pub fn is_punctuation(token: &str) -> bool {
    !token.chars().any(|c| c.is_alphabetic() || c.is_numeric())
}

pub fn case_fold(s: &str) -> String {
    s.chars().flat_map(char::to_lowercase).collect()
}

/// Drops punctuation-only tokens and case-folds the rest. Order and
/// duplicates are preserved.
pub fn content_words<S: AsRef<str>>(tokens: &[S]) -> Vec<String> {
    tokens
        .iter()
        .map(AsRef::as_ref)
        .filter(|t| !is_punctuation(t))
        .map(case_fold)
        .collect()
}

pub fn unique_content_word_count<S: AsRef<str>>(tokens: &[S]) -> usize {
    content_words(tokens)
        .into_iter()
        .collect::<BTreeSet<_>>()
        .len()
}

/// Joins tokens with single spaces; no leading/trailing or double spaces.
pub fn normalized_token_string<S: AsRef<str>>(tokens: &[S]) -> String {
    let mut out = String::new();
    for (i, t) in tokens.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(t.as_ref());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn content_words_drops_punctuation_and_folds_case() {
        assert_eq!(content_words(&["I", "love", "you", "."]), vec!["i", "love", "you"]);
        assert_eq!(content_words::<&str>(&[]), Vec::<String>::new());
        assert_eq!(content_words(&["Trump", ",", "Trump", "!"]), vec!["trump", "trump"]);
    }

    #[test]
    fn digits_are_not_punctuation() {
        assert!(!is_punctuation("2008"));
        assert!(!is_punctuation("G20"));
        assert!(is_punctuation("..."));
        assert!(is_punctuation("\u{201C}"));
        assert!(is_punctuation("—"));
    }

    #[test]
    fn normalized_string_has_single_spaces() {
        assert_eq!(normalized_token_string(&["a", "b", "c"]), "a b c");
        assert_eq!(normalized_token_string::<&str>(&[]), "");
    }

    proptest! {
        #[test]
        fn content_words_idempotent(tokens in proptest::collection::vec(".{0,8}", 0..20)) {
            let once = content_words(&tokens);
            let twice = content_words(&once);
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn normalized_string_never_doubles_spaces(
            words in proptest::collection::vec("[a-z]{1,6}", 0..10)
        ) {
            let s = normalized_token_string(&words);
            prop_assert!(!s.contains("  "));
            prop_assert!(!s.starts_with(' ') && !s.ends_with(' '));
        }
    }
}
