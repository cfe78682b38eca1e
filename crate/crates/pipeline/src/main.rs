use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use quotenet::config::PipelineConfig;
use quotenet::core::cluster::PendingQuote;
use quotenet::core::link::GlobalAttribution;
use quotenet::core::types::QuoteRecord;
use quotenet::{corpus_io, output, run, stages, synth};

/// Build a directed speaker-to-mentioned-person network from a quotation
/// corpus and compute its structural and demographic statistics.
#[derive(Parser)]
#[command(name = "quotenet", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand; values override the config file.
#[derive(Args, Debug, Default)]
struct Common {
    /// TOML config file; flags override its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Minimum unique content words per quotation (default 5)
    #[arg(long = "min-quote-words", global = true)]
    min_quote_words: Option<usize>,
    /// Shared-window length in words for duplicate grouping (default 8)
    #[arg(long = "min-shared-substring", global = true)]
    min_shared_substring: Option<usize>,
    /// Minimum winning global attribution mass (default 0)
    #[arg(long = "min-global-probability", global = true)]
    min_global_probability: Option<f64>,
    /// PageRank damping factor (default 0.85)
    #[arg(long, global = true)]
    damping: Option<f64>,
    /// PageRank L1 stopping tolerance (default 1e-10)
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// PageRank iteration cap (default 200)
    #[arg(long = "max-iter", global = true)]
    max_iter: Option<usize>,
    /// Worker threads (default 1)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory (default "out")
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Stopword list, one word per line (default: built-in English list)
    #[arg(long, global = true)]
    stopwords: Option<PathBuf>,
}

impl Common {
    fn resolve(&self) -> anyhow::Result<PipelineConfig> {
        let mut cfg = match &self.config {
            Some(path) => PipelineConfig::from_file(path)?,
            None => PipelineConfig::default(),
        };
        if let Some(v) = self.min_quote_words {
            cfg.min_quote_words = v;
        }
        if let Some(v) = self.min_shared_substring {
            cfg.min_shared_substring = v;
        }
        if let Some(v) = self.min_global_probability {
            cfg.min_global_probability = v;
        }
        if let Some(v) = self.damping {
            cfg.damping = v;
        }
        if let Some(v) = self.tolerance {
            cfg.tolerance = v;
        }
        if let Some(v) = self.max_iter {
            cfg.max_iter = v;
        }
        if let Some(v) = self.threads {
            cfg.threads = v;
        }
        if let Some(v) = &self.out {
            cfg.out = v.clone();
        }
        if let Some(v) = &self.stopwords {
            cfg.stopwords = Some(v.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Validate and normalize an articles file; write accepted records and a rejects log
    Ingest {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        articles: PathBuf,
    },
    /// Extract per-quote texts and in-quote mentions from validated articles
    Preprocess {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        articles: PathBuf,
    },
    /// Group near-duplicate quotations and elect representatives
    Cluster {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        quotes: PathBuf,
    },
    /// Attribute each quotation to its globally most probable speaker
    Link {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        records: PathBuf,
        #[arg(long)]
        aliases: PathBuf,
    },
    /// Build the directed edge list from attributed quotations
    Graph {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        records: PathBuf,
        #[arg(long)]
        attributions: PathBuf,
        #[arg(long)]
        aliases: PathBuf,
    },
    /// Attach biographic attributes to every node
    Enrich {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        edges: PathBuf,
        #[arg(long)]
        snapshot: PathBuf,
        #[arg(long)]
        hierarchy: PathBuf,
        #[arg(long = "defunct-countries")]
        defunct_countries: PathBuf,
    },
    /// Compute structural metrics and degree-weighted distributions
    Analyze {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        edges: PathBuf,
        #[arg(long)]
        profiles: PathBuf,
    },
    /// Classify name references and compute per-gender first-name rates
    Namebias {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        edges: PathBuf,
        #[arg(long)]
        profiles: PathBuf,
    },
    /// Generate a deterministic synthetic corpus with planted ground truth
    Synth {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run every stage end to end and write the full report bundle
    Run {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        articles: PathBuf,
        #[arg(long)]
        aliases: PathBuf,
        #[arg(long)]
        snapshot: PathBuf,
        #[arg(long)]
        hierarchy: PathBuf,
        #[arg(long = "defunct-countries")]
        defunct_countries: PathBuf,
    },
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> anyhow::Result<T> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    Ok(pool.install(f))
}

fn load_stopword_cfg(
    cfg: &PipelineConfig,
) -> anyhow::Result<quotenet::core::preprocess::PreprocessConfig> {
    let stopwords = match &cfg.stopwords {
        Some(p) => Some(corpus_io::load_stopwords(p)?),
        None => None,
    };
    Ok(cfg.preprocess_config(stopwords))
}

fn execute(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Ingest { common, articles } => {
            let cfg = common.resolve()?;
            std::fs::create_dir_all(&cfg.out)?;
            let (accepted, rejects) = corpus_io::load_articles(&articles)?;
            output::write_jsonl(&cfg.out.join("articles.valid.jsonl"), &accepted)?;
            corpus_io::write_rejects_log(&cfg.out.join("rejects.log"), &rejects)?;
            eprintln!("ingest: {} accepted, {} rejected", accepted.len(), rejects.len());
        }
        Command::Preprocess { common, articles } => {
            let cfg = common.resolve()?;
            std::fs::create_dir_all(&cfg.out)?;
            let pcfg = load_stopword_cfg(&cfg)?;
            let (accepted, _) = corpus_io::load_articles(&articles)?;
            let pre = in_pool(cfg.threads, || stages::preprocess_stage(&accepted, &pcfg))?;
            output::write_jsonl(&cfg.out.join("quotes.jsonl"), &pre.quotes)?;
            eprintln!(
                "preprocess: {} unique quotes ({} short, {} unterminated dropped)",
                pre.quotes.len(),
                pre.short_dropped,
                pre.unterminated_dropped
            );
        }
        Command::Cluster { common, quotes } => {
            let cfg = common.resolve()?;
            std::fs::create_dir_all(&cfg.out)?;
            let pcfg = load_stopword_cfg(&cfg)?;
            let quotes: Vec<PendingQuote> = output::read_jsonl(&quotes)?;
            let (records, pairs) = stages::cluster_stage(&quotes, &pcfg);
            output::write_jsonl(&cfg.out.join("records.jsonl"), &records)?;
            output::write_groups_tsv(&cfg.out.join("groups.tsv"), &pairs)?;
            eprintln!("cluster: {} groups from {} quotes", records.len(), quotes.len());
        }
        Command::Link {
            common,
            records,
            aliases,
        } => {
            let cfg = common.resolve()?;
            std::fs::create_dir_all(&cfg.out)?;
            let records: Vec<QuoteRecord> = output::read_jsonl(&records)?;
            let (table, _) = corpus_io::load_alias_table(&aliases)?;
            let (attributions, dropped) = in_pool(cfg.threads, || {
                stages::link_stage(&records, &table, cfg.min_global_probability)
            })?;
            output::write_jsonl(&cfg.out.join("attributions.jsonl"), &attributions)?;
            eprintln!("link: {} attributed, {} dropped", attributions.len(), dropped);
        }
        Command::Graph {
            common,
            records,
            attributions,
            aliases,
        } => {
            let cfg = common.resolve()?;
            std::fs::create_dir_all(&cfg.out)?;
            let records: Vec<QuoteRecord> = output::read_jsonl(&records)?;
            let attributions: Vec<GlobalAttribution> = output::read_jsonl(&attributions)?;
            let (table, _) = corpus_io::load_alias_table(&aliases)?;
            let (graph, loops, dups) = in_pool(cfg.threads, || {
                stages::graph_stage(&records, &attributions, &table)
            })?;
            output::write_jsonl(&cfg.out.join("edges.jsonl"), &graph.edges)?;
            output::write_edges_tsv(&cfg.out.join("edges.tsv"), &graph)?;
            eprintln!(
                "graph: {} nodes, {} edges ({} self-loops removed, {} duplicate triplets)",
                graph.node_count(),
                graph.edge_count(),
                loops,
                dups
            );
        }
        Command::Enrich {
            common,
            edges,
            snapshot,
            hierarchy,
            defunct_countries,
        } => {
            let cfg = common.resolve()?;
            std::fs::create_dir_all(&cfg.out)?;
            let graph = run::read_graph(&edges)?;
            let snapshot = corpus_io::load_snapshot(&snapshot)?;
            let (hierarchy, _) = corpus_io::load_hierarchy(&hierarchy)?;
            let defunct = corpus_io::load_defunct_countries(&defunct_countries)?;
            let profiles = stages::enrich_stage(&graph, &snapshot.records, &defunct, &hierarchy);
            output::write_jsonl(&cfg.out.join("profiles.jsonl"), profiles.values())?;
            output::write_nodes_tsv(&cfg.out.join("nodes.tsv"), &graph, &profiles)?;
            eprintln!("enrich: {} profiles", profiles.len());
        }
        Command::Analyze {
            common,
            edges,
            profiles,
        } => {
            let cfg = common.resolve()?;
            std::fs::create_dir_all(&cfg.out)?;
            let graph = run::read_graph(&edges)?;
            let profiles = run::read_profiles(&profiles)?;
            let analysis = stages::analyze_stage(&graph, &profiles, &cfg.pagerank_params());
            output::write_json(&cfg.out.join("metrics.json"), &analysis.report)?;
            output::write_distributions(&cfg.out.join("distributions"), &analysis)?;
            eprintln!(
                "analyze: {} nodes, {} edges, clustering {:.4}",
                analysis.report.node_count,
                analysis.report.edge_count,
                analysis.report.global_clustering
            );
        }
        Command::Namebias {
            common,
            edges,
            profiles,
        } => {
            let cfg = common.resolve()?;
            std::fs::create_dir_all(&cfg.out)?;
            let graph = run::read_graph(&edges)?;
            let profiles = run::read_profiles(&profiles)?;
            let (rows, rates) = stages::namebias_stage(&graph, &profiles);
            output::write_references_tsv(&cfg.out.join("references.tsv"), &rows)?;
            output::write_json(&cfg.out.join("namebias.json"), &rates)?;
            eprintln!("namebias: {} references classified", rows.len());
        }
        Command::Synth { common, size, seed } => {
            let mut cfg = common.resolve()?;
            if size == 0 {
                anyhow::bail!("size must be >= 1");
            }
            if seed != 0 {
                cfg.seed = seed;
            }
            let corpus = synth::generate(size, cfg.seed);
            corpus.write_to(&cfg.out)?;
            eprintln!(
                "synth: {} articles, {} ground-truth edges -> {}",
                corpus.articles.len(),
                corpus.ground_truth.len(),
                cfg.out.display()
            );
        }
        Command::Run {
            common,
            articles,
            aliases,
            snapshot,
            hierarchy,
            defunct_countries,
        } => {
            let mut cfg = common.resolve()?;
            cfg.articles = Some(articles);
            cfg.aliases = Some(aliases);
            cfg.snapshot = Some(snapshot);
            cfg.hierarchy = Some(hierarchy);
            cfg.defunct_countries = Some(defunct_countries);
            let counters = run::run_pipeline(&cfg).map_err(|e| anyhow::anyhow!("{e}"))?;
            eprintln!("run: bundle written to {}", cfg.out.display());
            eprintln!("{}", serde_json::to_string_pretty(&counters)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
