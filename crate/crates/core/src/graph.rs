//! Directed network construction: per-quote mention aggregation, edge
//! emission, self-loop removal, and final assembly.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::date::Date;
use crate::link::{AliasTable, GlobalAttribution};
use crate::types::{Qid, QuoteRecord};

/// One speaker-to-mentioned-person edge. Unique by the
/// (speaker, target, quote) triplet.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub speaker_qid: Qid,
    pub target_qid: Qid,
    pub quote_id: String,
    pub earliest_date: Date,
    pub article_urls: BTreeSet<String>,
    /// Most frequent context surface that resolved to the target; feeds the
    /// name-reference classifier.
    pub target_surface: String,
}

/// The assembled directed multigraph. Nodes are exactly the edge endpoints.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct QuoteGraph {
    pub nodes: BTreeSet<Qid>,
    pub edges: Vec<Edge>,
}

impl QuoteGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

/// Resolves each context's in-quote mentions and returns the most common
/// set of QIDs across contexts. Ties prefer the larger set, then the
/// lexicographically smallest serialized set.
pub fn aggregate_mention_set(record: &QuoteRecord, table: &AliasTable) -> BTreeSet<Qid> {
    let mut counts: BTreeMap<Vec<Qid>, usize> = BTreeMap::new();
    for ctx in &record.contexts {
        let set: BTreeSet<Qid> = ctx
            .mention_surfaces
            .iter()
            .filter_map(|s| table.resolve_surface(s).cloned())
            .collect();
        *counts.entry(set.into_iter().collect()).or_insert(0) += 1;
    }
    counts
        .into_iter()
        .max_by(|(sa, ca), (sb, cb)| {
            ca.cmp(cb)
                .then_with(|| sa.len().cmp(&sb.len()))
                .then_with(|| sb.cmp(sa)) // reversed: smaller serialization wins the max
        })
        .map(|(set, _)| set.into_iter().collect())
        .unwrap_or_default()
}

/// Per-target surface used downstream by the reference-form classifier:
/// the most frequent context surface resolving to `target`, ties broken by
/// longest surface then lexicographic order.
pub fn winning_surface(record: &QuoteRecord, table: &AliasTable, target: &Qid) -> String {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for ctx in &record.contexts {
        for s in &ctx.mention_surfaces {
            if table.resolve_surface(s) == Some(target) {
                *counts.entry(s.as_str()).or_insert(0) += 1;
            }
        }
    }
    counts
        .into_iter()
        .max_by(|(sa, ca), (sb, cb)| {
            ca.cmp(cb)
                .then_with(|| sa.chars().count().cmp(&sb.chars().count()))
                .then_with(|| sb.cmp(sa))
        })
        .map(|(s, _)| String::from(s))
        .unwrap_or_default()
}

/// One edge per target QID, all sharing the quote id, dated by the record's
/// earliest context and carrying the union of context URLs.
pub fn build_edges(
    attribution: &GlobalAttribution,
    targets: &BTreeSet<Qid>,
    record: &QuoteRecord,
    table: &AliasTable,
) -> Vec<Edge> {
    let urls: BTreeSet<String> = record.contexts.iter().map(|c| c.url.clone()).collect();
    targets
        .iter()
        .map(|target| Edge {
            speaker_qid: attribution.speaker_qid.clone(),
            target_qid: target.clone(),
            quote_id: record.quote_id.clone(),
            earliest_date: record.earliest_date,
            article_urls: urls.clone(),
            target_surface: winning_surface(record, table, target),
        })
        .collect()
}

/// Drops edges whose speaker and target coincide; returns (kept, removed count).
pub fn remove_self_loops(edges: Vec<Edge>) -> (Vec<Edge>, usize) {
    let before = edges.len();
    let kept: Vec<Edge> = edges
        .into_iter()
        .filter(|e| e.speaker_qid != e.target_qid)
        .collect();
    let removed = before - kept.len();
    (kept, removed)
}

/// Deduplicates by (speaker, target, quote), sorts for reproducibility, and
/// materializes the node set. Returns the graph and the duplicate count.
pub fn assemble_graph(mut edges: Vec<Edge>) -> (QuoteGraph, usize) {
    edges.sort();
    let before = edges.len();
    edges.dedup_by(|a, b| {
        (&a.speaker_qid, &a.target_qid, &a.quote_id) == (&b.speaker_qid, &b.target_qid, &b.quote_id)
    });
    let duplicates = before - edges.len();
    let mut nodes = BTreeSet::new();
    for e in &edges {
        nodes.insert(e.speaker_qid.clone());
        nodes.insert(e.target_qid.clone());
    }
    (QuoteGraph { nodes, edges }, duplicates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::QuoteContext;
    use alloc::borrow::ToOwned;
    use alloc::vec;

    fn table() -> AliasTable {
        let mut t = AliasTable::new();
        t.insert("barack obama", Qid::new("Q76"), 1.0);
        t.insert("hillary clinton", Qid::new("Q6294"), 1.0);
        t.insert("donald trump", Qid::new("Q22686"), 1.0);
        t.insert("one", Qid::new("Q1"), 1.0);
        t.insert("two", Qid::new("Q2"), 1.0);
        t
    }

    fn record(mention_sets: Vec<Vec<&str>>) -> QuoteRecord {
        QuoteRecord {
            quote_id: "q1".to_owned(),
            tokens: vec![],
            contexts: mention_sets
                .into_iter()
                .enumerate()
                .map(|(i, ms)| QuoteContext {
                    article_uid: alloc::format!("a{i}"),
                    url: alloc::format!("http://example.com/{i}"),
                    date: "2010-01-01".parse().unwrap(),
                    candidates: vec![],
                    mention_surfaces: ms.into_iter().map(|s| s.to_owned()).collect(),
                })
                .collect(),
            earliest_date: "2010-01-01".parse().unwrap(),
        }
    }

    fn qids(ids: &[&str]) -> BTreeSet<Qid> {
        ids.iter().map(|q| Qid::new(*q)).collect()
    }

    #[test]
    fn most_common_set_wins() {
        let r = record(vec![
            vec!["Barack Obama", "Hillary Clinton"],
            vec!["Barack Obama", "Hillary Clinton"],
            vec!["Barack Obama"],
        ]);
        assert_eq!(aggregate_mention_set(&r, &table()), qids(&["Q76", "Q6294"]));
    }

    #[test]
    fn single_context_is_identity() {
        let r = record(vec![vec!["Barack Obama"]]);
        assert_eq!(aggregate_mention_set(&r, &table()), qids(&["Q76"]));
    }

    #[test]
    fn count_tie_goes_to_larger_then_lexicographic() {
        let r = record(vec![vec!["one"], vec!["two"]]);
        assert_eq!(aggregate_mention_set(&r, &table()), qids(&["Q1"]));
        let r2 = record(vec![vec!["one", "two"], vec!["two"]]);
        assert_eq!(aggregate_mention_set(&r2, &table()), qids(&["Q1", "Q2"]));
    }

    fn attribution(speaker: &str) -> GlobalAttribution {
        GlobalAttribution {
            quote_id: "q1".to_owned(),
            speaker_qid: Qid::new(speaker),
            global_probability: 1.0,
        }
    }

    #[test]
    fn one_edge_per_target() {
        let r = record(vec![vec!["Barack Obama", "Hillary Clinton"]]);
        let targets = aggregate_mention_set(&r, &table());
        let edges = build_edges(&attribution("Q22686"), &targets, &r, &table());
        assert_eq!(edges.len(), 2);
        assert!(edges.iter().all(|e| e.quote_id == "q1"));
    }

    #[test]
    fn empty_targets_yield_no_edges() {
        let r = record(vec![vec![]]);
        let targets = aggregate_mention_set(&r, &table());
        assert!(build_edges(&attribution("Q22686"), &targets, &r, &table()).is_empty());
    }

    #[test]
    fn urls_union_across_contexts() {
        let r = record(vec![vec!["one"], vec!["one"], vec!["one"]]);
        let targets = aggregate_mention_set(&r, &table());
        let edges = build_edges(&attribution("Q22686"), &targets, &r, &table());
        assert_eq!(edges.len(), 1);
        assert_eq!(edges[0].article_urls.len(), 3);
    }

    fn edge(s: &str, t: &str, q: &str) -> Edge {
        Edge {
            speaker_qid: Qid::new(s),
            target_qid: Qid::new(t),
            quote_id: q.to_owned(),
            earliest_date: "2010-01-01".parse().unwrap(),
            article_urls: BTreeSet::new(),
            target_surface: String::new(),
        }
    }

    #[test]
    fn self_loops_removed_and_counted() {
        let (kept, n) = remove_self_loops(vec![
            edge("Q76", "Q76", "q1"),
            edge("Q76", "Q6294", "q1"),
            edge("Q1", "Q2", "q2"),
        ]);
        assert_eq!(kept.len(), 2);
        assert_eq!(n, 1);
        assert!(kept.iter().all(|e| e.speaker_qid != e.target_qid));
    }

    #[test]
    fn assembly_dedups_and_collects_nodes() {
        let (g, dups) = assemble_graph(vec![
            edge("Q1", "Q2", "q1"),
            edge("Q1", "Q2", "q1"),
            edge("Q2", "Q3", "q2"),
        ]);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.node_count(), 3);
        assert_eq!(dups, 1);
        let (empty, _) = assemble_graph(vec![]);
        assert_eq!(empty.node_count(), 0);
    }

    #[test]
    fn winning_surface_prefers_frequency_then_length() {
        let r = record(vec![vec!["Barack Obama"], vec!["Barack Obama"], vec!["barack obama"]]);
        // all resolve to Q76; "Barack Obama" appears twice
        assert_eq!(winning_surface(&r, &table(), &Qid::new("Q76")), "Barack Obama");
    }
}
