//! Near-duplicate quotation grouping: quotations that share an identical
//! window of `min_shared_substring` consecutive content words are linked,
//! groups are the transitive closure, and each group is replaced by its
//! longest member.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::dsu::DisjointSet;
use crate::preprocess::PreprocessConfig;
use crate::text::content_words;
use crate::types::{QuoteContext, QuoteRecord};

/// A quotation prior to clustering: its id, tokens, and the contexts it was
/// seen in (one per article occurrence).
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PendingQuote {
    #[serde(rename = "quoteID")]
    pub quote_id: String,
    pub tokens: Vec<String>,
    pub contexts: Vec<QuoteContext>,
}

/// A group of near-duplicate quotations with its elected representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuoteGroup {
    pub members: BTreeSet<String>,
    pub representative: String,
}

/// All `l_s`-word windows over the quote's content words, joined by spaces.
/// Empty when the quote has fewer than `l_s` content words.
pub fn shingles<S: AsRef<str>>(tokens: &[S], cfg: &PreprocessConfig) -> BTreeSet<String> {
    let words = content_words(tokens);
    let l = cfg.min_shared_substring;
    if words.len() < l {
        return BTreeSet::new();
    }
    words.windows(l).map(|w| w.join(" ")).collect()
}

/// Partitions quotes into groups: two quotes are linked iff they share at
/// least one identical shingle, and groups are the transitive closure of
/// that relation. The output is deterministic and independent of input
/// order.
pub fn group_quotations(quotes: &[PendingQuote], cfg: &PreprocessConfig) -> Vec<QuoteGroup> {
    // order quotes by id so union outcomes are schedule-independent
    let mut order: Vec<usize> = (0..quotes.len()).collect();
    order.sort_by(|&a, &b| quotes[a].quote_id.cmp(&quotes[b].quote_id));

    let mut dsu = DisjointSet::new(quotes.len());
    let mut first_owner: BTreeMap<String, usize> = BTreeMap::new();
    for &i in &order {
        for sh in shingles(&quotes[i].tokens, cfg) {
            match first_owner.get(&sh) {
                Some(&j) => {
                    dsu.union(i, j);
                }
                None => {
                    first_owner.insert(sh, i);
                }
            }
        }
    }

    let mut members: BTreeMap<usize, BTreeSet<String>> = BTreeMap::new();
    for i in 0..quotes.len() {
        let root = dsu.find(i);
        members
            .entry(root)
            .or_default()
            .insert(quotes[i].quote_id.clone());
    }

    let by_id: BTreeMap<&str, &PendingQuote> =
        quotes.iter().map(|q| (q.quote_id.as_str(), q)).collect();
    let mut groups: Vec<QuoteGroup> = members
        .into_values()
        .map(|members| {
            let representative = select_representative(&members, |id| {
                content_words(&by_id[id].tokens).len()
            });
            QuoteGroup {
                members,
                representative,
            }
        })
        .collect();
    groups.sort_by(|a, b| a.representative.cmp(&b.representative));
    groups
}

/// Longest member wins (most content words); ties go to the
/// lexicographically smallest quote id.
pub fn select_representative(
    members: &BTreeSet<String>,
    content_len: impl Fn(&str) -> usize,
) -> String {
    members
        .iter()
        .max_by(|a, b| {
            content_len(a)
                .cmp(&content_len(b))
                .then_with(|| b.cmp(a)) // reversed: smaller id wins the max
        })
        .expect("group nonempty")
        .clone()
}

/// Collapses a group into one QuoteRecord: the representative's text with
/// the union of every member's contexts, dated by the earliest context.
pub fn merge_group_contexts(
    group: &QuoteGroup,
    by_id: &BTreeMap<&str, &PendingQuote>,
) -> QuoteRecord {
    let rep = by_id[group.representative.as_str()];
    let mut contexts: Vec<QuoteContext> = Vec::new();
    for id in &group.members {
        contexts.extend(by_id[id.as_str()].contexts.iter().cloned());
    }
    contexts.sort_by(|a, b| {
        (&a.date, &a.article_uid, &a.url).cmp(&(&b.date, &b.article_uid, &b.url))
    });
    let earliest_date = contexts
        .iter()
        .map(|c| c.date)
        .min()
        .expect("group has at least one context");
    QuoteRecord {
        quote_id: group.representative.clone(),
        tokens: rep.tokens.clone(),
        contexts,
        earliest_date,
    }
}
