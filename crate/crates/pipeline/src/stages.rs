//! The pipeline stages, each a pure function over in-memory data so the
//! stage subcommands and `run` share one implementation. Work inside a
//! stage is partitioned per article or per quote with an order-preserving
//! merge, so results are independent of the worker count.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use quotenet_core::analytics::{
    self, age_distribution, attribute_mixing, cumulative_degree_distribution,
    degree_weighted_distribution, directed_degrees, mean_total_degree, pagerank,
    weakly_connected_components, AgeHistogram, DistributionTable, PageRankParams,
};
use quotenet_core::cluster::{group_quotations, merge_group_contexts, PendingQuote};
use quotenet_core::date::Date;
use quotenet_core::enrich::{build_profile, occupation_closure, DomainTable};
use quotenet_core::graph::{
    aggregate_mention_set, assemble_graph, build_edges, remove_self_loops, QuoteGraph,
};
use quotenet_core::link::{attribute_quotation, AliasTable, GlobalAttribution};
use quotenet_core::namebias::{classify_reference, first_name_rates, FirstNameRates, ReferenceForm};
use quotenet_core::preprocess::{extract_quote, is_short_quotation, PreprocessConfig};
use quotenet_core::types::{
    Article, DefunctCountries, EntityProfile, Gender, Qid, QuoteContext, QuoteRecord,
    SubclassHierarchy, WikidataSnapshotRecord,
};

/// Machine-readable loss counters accumulated across stages.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunCounters {
    pub articles_accepted: usize,
    pub articles_rejected: usize,
    pub quote_occurrences: usize,
    pub short_quotes_dropped: usize,
    pub unterminated_quotes_dropped: usize,
    pub unique_quotes: usize,
    pub quote_groups: usize,
    pub unattributed_quotes_dropped: usize,
    pub self_loops_removed: usize,
    pub duplicate_triplets: usize,
    pub snapshot_duplicates: usize,
    pub snapshot_rejects: usize,
    pub hierarchy_rejects: usize,
    pub alias_rejects: usize,
}

/// Preprocessing output: merged unique quotes plus drop counters.
#[derive(Debug, Clone, Default)]
pub struct PreprocessOutput {
    pub quotes: Vec<PendingQuote>,
    pub quote_occurrences: usize,
    pub short_dropped: usize,
    pub unterminated_dropped: usize,
}

/// Runs the per-article preprocessing steps and merges occurrences of the
/// same quote id into one `PendingQuote` with all its contexts.
pub fn preprocess_stage(articles: &[Article], cfg: &PreprocessConfig) -> PreprocessOutput {
    struct PerArticle {
        occurrences: Vec<(String, Vec<String>, QuoteContext)>,
        total: usize,
        short: usize,
        unterminated: usize,
    }

    let per_article: Vec<PerArticle> = articles
        .par_iter()
        .map(|article| {
            let mut out = PerArticle {
                occurrences: Vec::new(),
                total: 0,
                short: 0,
                unterminated: 0,
            };
            for quote in &article.quotations {
                out.total += 1;
                let Some((tokens, mention_surfaces)) = extract_quote(article, quote, cfg) else {
                    out.unterminated += 1;
                    continue;
                };
                if is_short_quotation(&tokens, cfg) {
                    out.short += 1;
                    continue;
                }
                let context = QuoteContext {
                    article_uid: article.article_uid.clone(),
                    url: article.url.clone(),
                    date: article.date,
                    candidates: quote
                        .candidates
                        .iter()
                        .map(|c| (c.surface.clone(), c.probability))
                        .collect(),
                    mention_surfaces,
                };
                out.occurrences.push((quote.quote_id.clone(), tokens, context));
            }
            out
        })
        .collect();

    let mut merged: BTreeMap<String, PendingQuote> = BTreeMap::new();
    let mut output = PreprocessOutput::default();
    for pa in per_article {
        output.quote_occurrences += pa.total;
        output.short_dropped += pa.short;
        output.unterminated_dropped += pa.unterminated;
        for (quote_id, tokens, context) in pa.occurrences {
            let entry = merged.entry(quote_id.clone()).or_insert_with(|| PendingQuote {
                quote_id,
                tokens: tokens.clone(),
                contexts: Vec::new(),
            });
            // occurrences of one quote id may differ slightly; keep the
            // longest text, ties resolved lexicographically so the result
            // does not depend on article order
            let new_len = quotenet_core::text::content_words(&tokens).len();
            let old_len = quotenet_core::text::content_words(&entry.tokens).len();
            if (new_len, &entry.tokens) > (old_len, &tokens) {
                entry.tokens = tokens;
            }
            entry.contexts.push(context);
        }
    }
    for quote in merged.values_mut() {
        quote.contexts.sort_by(|a, b| {
            (&a.date, &a.article_uid, &a.url).cmp(&(&b.date, &b.article_uid, &b.url))
        });
    }
    output.quotes = merged.into_values().collect();
    output
}

/// Groups near-duplicate quotes and collapses each group into one record.
/// Also returns the member-to-representative pairs for the groups dump.
pub fn cluster_stage(
    quotes: &[PendingQuote],
    cfg: &PreprocessConfig,
) -> (Vec<QuoteRecord>, Vec<(String, String)>) {
    let groups = group_quotations(quotes, cfg);
    let mut pairs = Vec::new();
    for g in &groups {
        for m in &g.members {
            pairs.push((m.clone(), g.representative.clone()));
        }
    }
    pairs.sort();
    let by_id: BTreeMap<&str, &PendingQuote> =
        quotes.iter().map(|q| (q.quote_id.as_str(), q)).collect();
    let records: Vec<QuoteRecord> = groups
        .iter()
        .map(|g| merge_group_contexts(g, &by_id))
        .collect();
    (records, pairs)
}

/// Attributes each record to its global-argmax speaker. Returns the
/// attributions (in record order) and the number of dropped quotes.
pub fn link_stage(
    records: &[QuoteRecord],
    table: &AliasTable,
    min_global_probability: f64,
) -> (Vec<GlobalAttribution>, usize) {
    let attributions: Vec<Option<GlobalAttribution>> = records
        .par_iter()
        .map(|r| attribute_quotation(r, table, min_global_probability))
        .collect();
    let dropped = attributions.iter().filter(|a| a.is_none()).count();
    (attributions.into_iter().flatten().collect(), dropped)
}

/// Builds the directed graph from attributed records: mention aggregation,
/// edge emission, self-loop removal, triplet dedup. Returns the graph plus
/// (self loops removed, duplicate triplets).
pub fn graph_stage(
    records: &[QuoteRecord],
    attributions: &[GlobalAttribution],
    table: &AliasTable,
) -> (QuoteGraph, usize, usize) {
    let by_id: BTreeMap<&str, &QuoteRecord> =
        records.iter().map(|r| (r.quote_id.as_str(), r)).collect();
    let edges: Vec<_> = attributions
        .par_iter()
        .flat_map_iter(|att| {
            let record = by_id[att.quote_id.as_str()];
            let targets = aggregate_mention_set(record, table);
            build_edges(att, &targets, record, table)
        })
        .collect();
    let (edges, self_loops) = remove_self_loops(edges);
    let (graph, duplicates) = assemble_graph(edges);
    (graph, self_loops, duplicates)
}

/// Builds biographic profiles for every node in the graph. Nodes absent
/// from the snapshot get an empty profile so downstream stages see a total
/// map.
pub fn enrich_stage(
    graph: &QuoteGraph,
    snapshot: &BTreeMap<Qid, WikidataSnapshotRecord>,
    defunct: &DefunctCountries,
    hierarchy: &SubclassHierarchy,
) -> BTreeMap<Qid, EntityProfile> {
    let closure = occupation_closure(hierarchy, &DomainTable::default());
    graph
        .nodes
        .iter()
        .map(|qid| {
            let profile = match snapshot.get(qid) {
                Some(record) => build_profile(record, defunct, &closure),
                None => build_profile(
                    &WikidataSnapshotRecord {
                        qid: qid.clone(),
                        ..Default::default()
                    },
                    defunct,
                    &closure,
                ),
            };
            (qid.clone(), profile)
        })
        .collect()
}

/// Report metadata pinning the computation choices that the source material
/// leaves open.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub projection: String,
    pub assortativity_variant: String,
    pub pagerank: PageRankParams,
}

/// The structural metrics document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructuralReport {
    pub node_count: usize,
    pub edge_count: usize,
    pub mean_total_degree: Option<f64>,
    pub wcc_count: usize,
    pub largest_wcc_fraction: f64,
    pub degree_assortativity: Option<f64>,
    pub global_clustering: f64,
    pub mixing: BTreeMap<String, Option<f64>>,
    pub pagerank_converged: bool,
    pub pagerank_iterations: usize,
    pub top_pagerank: Vec<(Qid, f64)>,
    pub metadata: ReportMetadata,
}

/// Full analysis output: the report plus the emitted distribution tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisOutput {
    pub report: StructuralReport,
    pub nationality: DistributionTable,
    pub domain: DistributionTable,
    pub gender: DistributionTable,
    pub indegree_cumulative: Vec<(usize, f64)>,
    pub outdegree_cumulative: Vec<(usize, f64)>,
    pub ages: AgeHistogram,
}

fn join_set<T: ToString>(set: impl IntoIterator<Item = T>) -> Option<String> {
    let parts: Vec<String> = set.into_iter().map(|x| x.to_string()).collect();
    if parts.is_empty() {
        None
    } else {
        Some(parts.join("|"))
    }
}

/// Node attribute views used for mixing and degree-weighted distributions.
/// Multi-valued attributes (nationality, domain) are pipe-joined in sorted
/// order so the category space stays deterministic.
pub fn nationality_attr(profiles: &BTreeMap<Qid, EntityProfile>) -> impl Fn(&Qid) -> Option<String> + '_ {
    |q| profiles.get(q).and_then(|p| join_set(p.nationalities.iter().map(Qid::as_str).map(str::to_owned)))
}

pub fn domain_attr(profiles: &BTreeMap<Qid, EntityProfile>) -> impl Fn(&Qid) -> Option<String> + '_ {
    |q| profiles.get(q).and_then(|p| join_set(p.domains.iter().map(|d| d.as_str().to_owned())))
}

pub fn gender_attr(profiles: &BTreeMap<Qid, EntityProfile>) -> impl Fn(&Qid) -> Option<String> + '_ {
    |q| {
        profiles.get(q).and_then(|p| match p.gender {
            Gender::Unknown => None,
            g => Some(g.as_str().to_owned()),
        })
    }
}

/// Computes every structural metric and distribution over the graph.
pub fn analyze_stage(
    graph: &QuoteGraph,
    profiles: &BTreeMap<Qid, EntityProfile>,
    params: &PageRankParams,
) -> AnalysisOutput {
    let (wcc_sizes, largest_fraction) = weakly_connected_components(graph);
    let mut mixing = BTreeMap::new();
    mixing.insert(
        "nationality".to_owned(),
        attribute_mixing(graph, nationality_attr(profiles)),
    );
    mixing.insert("domain".to_owned(), attribute_mixing(graph, domain_attr(profiles)));
    mixing.insert("gender".to_owned(), attribute_mixing(graph, gender_attr(profiles)));

    let pr = pagerank(graph, params);
    let (converged, iterations, top) = match &pr {
        Some(r) => {
            let mut ranked: Vec<(Qid, f64)> =
                r.scores.iter().map(|(q, s)| (q.clone(), *s)).collect();
            ranked.sort_by(|a, b| {
                b.1.partial_cmp(&a.1)
                    .unwrap_or(std::cmp::Ordering::Equal)
                    .then_with(|| a.0.cmp(&b.0))
            });
            ranked.truncate(10);
            (r.converged, r.iterations, ranked)
        }
        None => (true, 0, Vec::new()),
    };

    let (indeg, outdeg) = directed_degrees(graph);
    let report = StructuralReport {
        node_count: graph.node_count(),
        edge_count: graph.edge_count(),
        mean_total_degree: mean_total_degree(graph),
        wcc_count: wcc_sizes.len(),
        largest_wcc_fraction: largest_fraction,
        degree_assortativity: analytics::degree_assortativity(graph),
        global_clustering: analytics::global_clustering(graph),
        mixing,
        pagerank_converged: converged,
        pagerank_iterations: iterations,
        top_pagerank: top,
        metadata: ReportMetadata {
            projection: "simple undirected (parallel edges collapsed, loops removed)".to_owned(),
            assortativity_variant: "undirected total degree".to_owned(),
            pagerank: *params,
        },
    };
    AnalysisOutput {
        report,
        nationality: degree_weighted_distribution(graph, nationality_attr(profiles)),
        domain: degree_weighted_distribution(graph, domain_attr(profiles)),
        gender: degree_weighted_distribution(graph, gender_attr(profiles)),
        indegree_cumulative: cumulative_degree_distribution(&indeg),
        outdegree_cumulative: cumulative_degree_distribution(&outdeg),
        ages: age_distribution(graph, profiles),
    }
}

/// One classified reference: how a quote's winning mention surface refers
/// to the target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceRow {
    pub quote_id: String,
    pub target_qid: Qid,
    pub surface: String,
    pub form: ReferenceForm,
    pub gender: Gender,
}

/// Classifies every edge's target reference and aggregates per-gender
/// first-name rates.
pub fn namebias_stage(
    graph: &QuoteGraph,
    profiles: &BTreeMap<Qid, EntityProfile>,
) -> (Vec<ReferenceRow>, FirstNameRates) {
    let rows: Vec<ReferenceRow> = graph
        .edges
        .iter()
        .filter_map(|e| {
            let profile = profiles.get(&e.target_qid)?;
            let form = classify_reference(&e.target_surface, profile);
            Some(ReferenceRow {
                quote_id: e.quote_id.clone(),
                target_qid: e.target_qid.clone(),
                surface: e.target_surface.clone(),
                form,
                gender: profile.gender,
            })
        })
        .collect();
    let rates = first_name_rates(rows.iter().map(|r| (r.form, r.gender)));
    (rows, rates)
}

/// Recomputes a date-stable age for golden tests; kept here so the CLI and
/// tests share one calendar rule.
pub fn age_at(birth: Date, at: Date) -> i32 {
    birth.years_until(at)
}

#[cfg(test)]
mod tests {
    use super::*;
    use quotenet_core::text::{CLOSING_QUOTE, OPENING_QUOTE};
    use quotenet_core::types::{MentionSpan, QuoteOccurrence, SpeakerCandidate};

    fn cfg() -> PreprocessConfig {
        PreprocessConfig::default()
    }

    /// One article: `<speaker> said , “ <body...> ”` with person mentions
    /// for every (surface, start offset into body) pair.
    fn article(
        uid: &str,
        quote_id: &str,
        speaker: &str,
        body: &[&str],
        mentions: &[(&str, usize)],
    ) -> Article {
        let mut tokens: Vec<String> = vec![speaker.to_owned(), "said".to_owned(), ",".to_owned()];
        tokens.push(OPENING_QUOTE.to_owned());
        let body_start = tokens.len();
        tokens.extend(body.iter().map(|t| (*t).to_owned()));
        tokens.push(CLOSING_QUOTE.to_owned());
        let mention_spans = mentions
            .iter()
            .map(|(surface, offset)| {
                let start = body_start + offset;
                let len = surface.split_whitespace().count();
                MentionSpan {
                    start,
                    end: start + len,
                    surface: (*surface).to_owned(),
                    entity_type: "PERSON".to_owned(),
                }
            })
            .collect();
        Article {
            article_uid: uid.to_owned(),
            url: format!("http://example.com/{uid}"),
            date: "2012-06-01".parse().unwrap(),
            tokens,
            quotations: vec![QuoteOccurrence {
                quote_id: quote_id.to_owned(),
                start_index: body_start,
                candidates: vec![SpeakerCandidate {
                    surface: speaker.to_owned(),
                    start_token: 0,
                    end_token: 1,
                    probability: 0.9,
                }],
            }],
            mentions: mention_spans,
        }
    }

    #[test]
    fn preprocess_drops_short_and_keeps_mentions() {
        let articles = vec![
            article(
                "a1",
                "q1",
                "Alice",
                &["we", "should", "thank", "Bob", "for", "everything", "today"],
                &[("Bob", 3)],
            ),
            article("a2", "q2", "Alice", &["too", "short"], &[]),
        ];
        let out = preprocess_stage(&articles, &cfg());
        assert_eq!(out.quotes.len(), 1);
        assert_eq!(out.short_dropped, 1);
        assert_eq!(out.quotes[0].contexts[0].mention_surfaces, vec!["Bob"]);
    }

    #[test]
    fn same_quote_id_merges_contexts() {
        let body = ["we", "should", "thank", "Bob", "for", "everything", "today"];
        let articles = vec![
            article("a1", "q1", "Alice", &body, &[("Bob", 3)]),
            article("a2", "q1", "Alice", &body, &[("Bob", 3)]),
        ];
        let out = preprocess_stage(&articles, &cfg());
        assert_eq!(out.quotes.len(), 1);
        assert_eq!(out.quotes[0].contexts.len(), 2);
    }

    fn alias_table() -> AliasTable {
        let mut t = AliasTable::new();
        t.insert("Alice", Qid::new("Q101"), 1.0);
        t.insert("Bob", Qid::new("Q102"), 1.0);
        t
    }

    #[test]
    fn end_to_end_small_graph() {
        let articles = vec![article(
            "a1",
            "q1",
            "Alice",
            &["we", "should", "thank", "Bob", "for", "everything", "today"],
            &[("Bob", 3)],
        )];
        let table = alias_table();
        let out = preprocess_stage(&articles, &cfg());
        let (records, _) = cluster_stage(&out.quotes, &cfg());
        let (attributions, dropped) = link_stage(&records, &table, 0.0);
        assert_eq!(dropped, 0);
        let (graph, loops, dups) = graph_stage(&records, &attributions, &table);
        assert_eq!((loops, dups), (0, 0));
        assert_eq!(graph.edge_count(), 1);
        let e = &graph.edges[0];
        assert_eq!(e.speaker_qid, Qid::new("Q101"));
        assert_eq!(e.target_qid, Qid::new("Q102"));
        assert_eq!(e.target_surface, "Bob");
    }

    #[test]
    fn self_quote_becomes_no_edge() {
        let articles = vec![article(
            "a1",
            "q1",
            "Alice",
            &["honestly", "Alice", "deserves", "all", "possible", "credit", "here"],
            &[("Alice", 1)],
        )];
        let table = alias_table();
        let out = preprocess_stage(&articles, &cfg());
        let (records, _) = cluster_stage(&out.quotes, &cfg());
        let (attributions, _) = link_stage(&records, &table, 0.0);
        let (graph, loops, _) = graph_stage(&records, &attributions, &table);
        assert_eq!(graph.edge_count(), 0);
        assert_eq!(loops, 1);
    }
}
