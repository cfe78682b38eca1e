//! Per-article preprocessing: short-quotation removal, quotation span
//! determination, spurious-mention filtering, and assignment of mentions to
//! the quotations that contain them.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::text::{self, case_fold, normalized_token_string, CLOSING_QUOTE};
use crate::types::{Article, MentionSpan, QuoteOccurrence};

/// Built-in English stopword list, overridable by file at the CLI layer.
pub const DEFAULT_STOPWORDS: &[&str] = &[
    "a", "about", "above", "after", "again", "against", "ain", "all", "am", "an", "and", "any",
    "are", "aren", "as", "at", "be", "because", "been", "before", "being", "below", "between",
    "both", "but", "by", "can", "couldn", "d", "did", "didn", "do", "does", "doesn", "doing",
    "don", "down", "during", "each", "few", "for", "from", "further", "had", "hadn", "has",
    "hasn", "have", "haven", "having", "he", "her", "here", "hers", "herself", "him", "himself",
    "his", "how", "i", "if", "in", "into", "is", "isn", "it", "its", "itself", "just", "ll", "m",
    "ma", "me", "mightn", "more", "most", "mustn", "my", "myself", "needn", "no", "nor", "not",
    "now", "o", "of", "off", "on", "once", "only", "or", "other", "our", "ours", "ourselves",
    "out", "over", "own", "re", "s", "same", "shan", "she", "should", "shouldn", "so", "some",
    "such", "t", "than", "that", "the", "their", "theirs", "them", "themselves", "then", "there",
    "these", "they", "this", "those", "through", "to", "too", "under", "until", "up", "ve",
    "very", "was", "wasn", "we", "were", "weren", "what", "when", "where", "which", "while",
    "who", "whom", "why", "will", "with", "won", "wouldn", "y", "you", "your", "yours",
    "yourself", "yourselves",
];

/// Tunables for the preprocessing steps. `min_unique_words` is the short-
/// quotation threshold, `min_shared_substring` the window length (in words)
/// for near-duplicate grouping.
#[derive(Debug, Clone)]
pub struct PreprocessConfig {
    pub min_unique_words: usize,
    pub min_shared_substring: usize,
    pub stopwords: BTreeSet<String>,
}

impl Default for PreprocessConfig {
    fn default() -> PreprocessConfig {
        PreprocessConfig {
            min_unique_words: 5,
            min_shared_substring: 8,
            stopwords: DEFAULT_STOPWORDS.iter().map(|w| case_fold(w)).collect(),
        }
    }
}

impl PreprocessConfig {
    pub fn validate(&self) -> Result<(), &'static str> {
        if self.min_unique_words < 1 {
            return Err("min_unique_words must be >= 1");
        }
        if self.min_shared_substring < 2 {
            return Err("min_shared_substring must be >= 2");
        }
        Ok(())
    }
}

/// True iff the quotation has fewer than `min_unique_words` case-folded
/// unique words, punctuation not counting.
pub fn is_short_quotation<S: AsRef<str>>(tokens: &[S], cfg: &PreprocessConfig) -> bool {
    text::unique_content_word_count(tokens) < cfg.min_unique_words
}

/// Scans from `start` for the first closing quotation mark; the quote body
/// is `tokens[start..end)`. The first closing mark wins even when an inner
/// quotation is still open. `None` means the quotation is unterminated.
pub fn find_quotation_end<S: AsRef<str>>(tokens: &[S], start: usize) -> Option<usize> {
    (start..tokens.len()).find(|&i| tokens[i].as_ref() == CLOSING_QUOTE)
}

fn token_is_spurious(token: &str, cfg: &PreprocessConfig) -> bool {
    token.chars().count() == 1
        || !token.chars().any(|c| c.is_alphabetic())
        || cfg.stopwords.contains(&case_fold(token))
}

/// Keeps a mention iff at least one of its tokens is neither a one-character
/// token, nor letter-free, nor a stopword.
pub fn filter_spurious_mentions(mentions: &[MentionSpan], cfg: &PreprocessConfig) -> Vec<MentionSpan> {
    mentions
        .iter()
        .filter(|m| {
            m.surface
                .split_whitespace()
                .any(|tok| !token_is_spurious(tok, cfg))
        })
        .cloned()
        .collect()
}

/// Mentions assigned to one quotation. Span containment decides the regular
/// case; when the mention span crosses the quote boundary or runs past the
/// article end, a case-folded substring check of the mention text against
/// the quote text decides instead.
pub fn mentions_in_quotation<'a>(
    article: &'a Article,
    quote: &QuoteOccurrence,
    quote_end: usize,
) -> Vec<&'a MentionSpan> {
    let start = quote.start_index;
    let quote_text = case_fold(&normalized_token_string(&article.tokens[start..quote_end]));
    article
        .mentions
        .iter()
        .filter(|m| {
            let inside = m.start >= start && m.end <= quote_end;
            if inside {
                return true;
            }
            let out_of_bounds = m.end > article.tokens.len();
            let crosses_boundary = m.start < quote_end && m.end > start && !inside;
            if out_of_bounds || crosses_boundary {
                let mention_text = case_fold(&normalized_token_string(
                    &m.surface.split_whitespace().collect::<Vec<_>>(),
                ));
                !mention_text.is_empty() && quote_text.contains(&mention_text)
            } else {
                false
            }
        })
        .collect()
}

/// Quote text plus its in-quote person mention surfaces, after the spurious
/// filter. Returns `None` for unterminated quotations.
pub fn extract_quote(
    article: &Article,
    quote: &QuoteOccurrence,
    cfg: &PreprocessConfig,
) -> Option<(Vec<String>, Vec<String>)> {
    let end = find_quotation_end(&article.tokens, quote.start_index)?;
    let tokens: Vec<String> = article.tokens[quote.start_index..end].to_vec();
    let persons: Vec<MentionSpan> = article
        .mentions
        .iter()
        .filter(|m| m.is_person())
        .cloned()
        .collect();
    let kept = filter_spurious_mentions(&persons, cfg);
    let surfaces = mentions_in_quotation(article, quote, end)
        .into_iter()
        .filter(|m| kept.contains(*m))
        .map(|m| m.surface.clone())
        .collect();
    Some((tokens, surfaces))
}
