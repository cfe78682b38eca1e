//! End-to-end pipeline execution. Every stage's artifact is materialized
//! into the output directory, so composing the stage subcommands by hand
//! yields the same bundle as `run`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use quotenet_core::link::AliasTable;
use quotenet_core::types::{Article, DefunctCountries, SubclassHierarchy, WikidataSnapshotRecord};
use quotenet_core::Qid;

use crate::config::PipelineConfig;
use crate::corpus_io;
use crate::output;
use crate::stages::{self, RunCounters};

/// A fatal pipeline failure, labeled with the stage that raised it.
#[derive(Debug, thiserror::Error)]
#[error("stage {stage}: {source}")]
pub struct StageError {
    pub stage: &'static str,
    #[source]
    pub source: anyhow::Error,
}

fn stage_err(stage: &'static str) -> impl FnOnce(anyhow::Error) -> StageError {
    move |source| StageError { stage, source }
}

fn require(path: &Option<PathBuf>, what: &str, stage: &'static str) -> Result<PathBuf, StageError> {
    path.clone().ok_or_else(|| StageError {
        stage,
        source: anyhow::anyhow!("missing required input path: {what}"),
    })
}

/// Inputs loaded up front so that path errors surface before any work runs.
pub struct LoadedInputs {
    pub articles: Vec<Article>,
    pub article_rejects: Vec<corpus_io::Reject>,
    pub alias_table: AliasTable,
    pub alias_rejects: usize,
    pub snapshot: BTreeMap<Qid, WikidataSnapshotRecord>,
    pub snapshot_duplicates: usize,
    pub snapshot_rejects: usize,
    pub hierarchy: SubclassHierarchy,
    pub hierarchy_rejects: usize,
    pub defunct: DefunctCountries,
    pub stopwords: Option<std::collections::BTreeSet<String>>,
}

pub fn load_inputs(config: &PipelineConfig) -> Result<LoadedInputs, StageError> {
    let articles_path = require(&config.articles, "articles", "ingest")?;
    let (articles, article_rejects) =
        corpus_io::load_articles(&articles_path).map_err(stage_err("ingest"))?;

    let aliases_path = require(&config.aliases, "alias table", "link")?;
    let (alias_table, alias_rejects) =
        corpus_io::load_alias_table(&aliases_path).map_err(stage_err("link"))?;

    let snapshot_path = require(&config.snapshot, "snapshot", "enrich")?;
    let snapshot = corpus_io::load_snapshot(&snapshot_path).map_err(stage_err("enrich"))?;
    let hierarchy_path = require(&config.hierarchy, "hierarchy", "enrich")?;
    let (hierarchy, hierarchy_rejects) =
        corpus_io::load_hierarchy(&hierarchy_path).map_err(stage_err("enrich"))?;
    let defunct_path = require(&config.defunct_countries, "defunct countries", "enrich")?;
    let defunct = corpus_io::load_defunct_countries(&defunct_path).map_err(stage_err("enrich"))?;

    let stopwords = match &config.stopwords {
        Some(p) => Some(corpus_io::load_stopwords(p).map_err(stage_err("preprocess"))?),
        None => None,
    };

    Ok(LoadedInputs {
        articles,
        article_rejects,
        alias_table,
        alias_rejects: alias_rejects.len(),
        snapshot: snapshot.records,
        snapshot_duplicates: snapshot.duplicates,
        snapshot_rejects: snapshot.rejects.len(),
        hierarchy,
        hierarchy_rejects: hierarchy_rejects.len(),
        defunct,
        stopwords,
    })
}

/// Runs every stage over loaded inputs and writes the full bundle to
/// `config.out`. Returns the run counters.
pub fn run_pipeline(config: &PipelineConfig) -> Result<RunCounters, StageError> {
    let inputs = load_inputs(config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| StageError {
            stage: "setup",
            source: e.into(),
        })?;
    pool.install(|| run_loaded(config, &inputs))
}

pub fn run_loaded(config: &PipelineConfig, inputs: &LoadedInputs) -> Result<RunCounters, StageError> {
    let out = &config.out;
    std::fs::create_dir_all(out).map_err(|e| StageError {
        stage: "setup",
        source: e.into(),
    })?;
    let pcfg = config.preprocess_config(inputs.stopwords.clone());
    pcfg.validate().map_err(|e| StageError {
        stage: "preprocess",
        source: anyhow::anyhow!(e),
    })?;

    let mut counters = RunCounters {
        articles_accepted: inputs.articles.len(),
        articles_rejected: inputs.article_rejects.len(),
        snapshot_duplicates: inputs.snapshot_duplicates,
        snapshot_rejects: inputs.snapshot_rejects,
        hierarchy_rejects: inputs.hierarchy_rejects,
        alias_rejects: inputs.alias_rejects,
        ..RunCounters::default()
    };

    let w = |stage: &'static str, r: anyhow::Result<()>| -> Result<(), StageError> {
        r.map_err(stage_err(stage))
    };

    w("ingest", corpus_io::write_rejects_log(&out.join("rejects.log"), &inputs.article_rejects))?;
    w("ingest", output::write_jsonl(&out.join("articles.valid.jsonl"), &inputs.articles))?;

    let pre = stages::preprocess_stage(&inputs.articles, &pcfg);
    counters.quote_occurrences = pre.quote_occurrences;
    counters.short_quotes_dropped = pre.short_dropped;
    counters.unterminated_quotes_dropped = pre.unterminated_dropped;
    w("preprocess", output::write_jsonl(&out.join("quotes.jsonl"), &pre.quotes))?;

    let (records, group_pairs) = stages::cluster_stage(&pre.quotes, &pcfg);
    counters.unique_quotes = pre.quotes.len();
    counters.quote_groups = records.len();
    w("cluster", output::write_jsonl(&out.join("records.jsonl"), &records))?;
    w("cluster", output::write_groups_tsv(&out.join("groups.tsv"), &group_pairs))?;

    let (attributions, dropped) =
        stages::link_stage(&records, &inputs.alias_table, config.min_global_probability);
    counters.unattributed_quotes_dropped = dropped;
    w("link", output::write_jsonl(&out.join("attributions.jsonl"), &attributions))?;

    let (graph, self_loops, duplicates) =
        stages::graph_stage(&records, &attributions, &inputs.alias_table);
    counters.self_loops_removed = self_loops;
    counters.duplicate_triplets = duplicates;
    w("graph", output::write_jsonl(&out.join("edges.jsonl"), &graph.edges))?;
    w("graph", output::write_edges_tsv(&out.join("edges.tsv"), &graph))?;

    let profiles = stages::enrich_stage(&graph, &inputs.snapshot, &inputs.defunct, &inputs.hierarchy);
    w("enrich", output::write_jsonl(&out.join("profiles.jsonl"), profiles.values()))?;
    w("enrich", output::write_nodes_tsv(&out.join("nodes.tsv"), &graph, &profiles))?;

    let analysis = stages::analyze_stage(&graph, &profiles, &config.pagerank_params());
    w("analyze", output::write_json(&out.join("metrics.json"), &analysis.report))?;
    w("analyze", output::write_distributions(&out.join("distributions"), &analysis))?;

    let (rows, rates) = stages::namebias_stage(&graph, &profiles);
    w("namebias", output::write_references_tsv(&out.join("references.tsv"), &rows))?;
    w("namebias", output::write_json(&out.join("namebias.json"), &rates))?;

    w("summary", output::write_json(&out.join("summary.json"), &counters))?;
    Ok(counters)
}

/// Rebuilds a graph from a previously written `edges.jsonl`.
pub fn read_graph(path: &Path) -> anyhow::Result<quotenet_core::graph::QuoteGraph> {
    let edges: Vec<quotenet_core::graph::Edge> = output::read_jsonl(path)?;
    let (graph, _) = quotenet_core::graph::assemble_graph(edges);
    Ok(graph)
}

/// Rebuilds the profile map from a previously written `profiles.jsonl`.
pub fn read_profiles(
    path: &Path,
) -> anyhow::Result<BTreeMap<Qid, quotenet_core::types::EntityProfile>> {
    let profiles: Vec<quotenet_core::types::EntityProfile> = output::read_jsonl(path)?;
    Ok(profiles.into_iter().map(|p| (p.qid.clone(), p)).collect())
}
