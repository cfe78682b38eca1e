//! Writers for the pipeline's materialized artifacts. All outputs are
//! sorted and formatted deterministically so reruns are byte-identical.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use quotenet_core::graph::{Edge, QuoteGraph};
use quotenet_core::types::{EntityProfile, Qid};

use crate::stages::{AnalysisOutput, ReferenceRow};

pub fn write_jsonl<T: Serialize>(path: &Path, items: impl IntoIterator<Item = T>) -> anyhow::Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    for item in items {
        serde_json::to_writer(&mut f, &item)?;
        f.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> anyhow::Result<Vec<T>> {
    let file = File::open(path)
        .map_err(|e| anyhow::anyhow!("cannot open {}: {e}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(
            serde_json::from_str(&line)
                .map_err(|e| anyhow::anyhow!("{} line {}: {e}", path.display(), i + 1))?,
        );
    }
    Ok(out)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut f, value)?;
    f.write_all(b"\n")?;
    Ok(())
}

/// `speaker<TAB>target<TAB>quote<TAB>earliest_date<TAB>url_count`, sorted by
/// (speaker, target, quote).
pub fn write_edges_tsv(path: &Path, graph: &QuoteGraph) -> anyhow::Result<()> {
    let mut edges: Vec<&Edge> = graph.edges.iter().collect();
    edges.sort_by_key(|e| (&e.speaker_qid, &e.target_qid, &e.quote_id));
    let mut f = BufWriter::new(File::create(path)?);
    for e in edges {
        writeln!(
            f,
            "{}\t{}\t{}\t{}\t{}",
            e.speaker_qid,
            e.target_qid,
            e.quote_id,
            e.earliest_date,
            e.article_urls.len()
        )?;
    }
    Ok(())
}

/// `qid, label, birth_date, gender, nationalities, domains, in_degree,
/// out_degree`, tab-separated; multi-valued fields pipe-joined.
pub fn write_nodes_tsv(
    path: &Path,
    graph: &QuoteGraph,
    profiles: &std::collections::BTreeMap<Qid, EntityProfile>,
) -> anyhow::Result<()> {
    let mut indeg: std::collections::BTreeMap<&Qid, usize> =
        graph.nodes.iter().map(|q| (q, 0)).collect();
    let mut outdeg = indeg.clone();
    for e in &graph.edges {
        *outdeg.get_mut(&e.speaker_qid).unwrap() += 1;
        *indeg.get_mut(&e.target_qid).unwrap() += 1;
    }
    let mut f = BufWriter::new(File::create(path)?);
    for qid in &graph.nodes {
        let p = &profiles[qid];
        let nationalities: Vec<&str> = p.nationalities.iter().map(Qid::as_str).collect();
        let domains: Vec<&str> = p.domains.iter().map(|d| d.as_str()).collect();
        writeln!(
            f,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            qid,
            p.label,
            p.birth_date.map(|d| d.to_string()).unwrap_or_default(),
            p.gender.as_str(),
            nationalities.join("|"),
            domains.join("|"),
            indeg[qid],
            outdeg[qid],
        )?;
    }
    Ok(())
}

/// `quote_id<TAB>representative_id` pairs.
pub fn write_groups_tsv(path: &Path, pairs: &[(String, String)]) -> anyhow::Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    for (member, rep) in pairs {
        writeln!(f, "{member}\t{rep}")?;
    }
    Ok(())
}

/// `quote_id<TAB>target_qid<TAB>surface<TAB>form<TAB>gender`.
pub fn write_references_tsv(path: &Path, rows: &[ReferenceRow]) -> anyhow::Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    for r in rows {
        writeln!(
            f,
            "{}\t{}\t{}\t{}\t{}",
            r.quote_id,
            r.target_qid,
            r.surface,
            r.form.as_str(),
            r.gender.as_str()
        )?;
    }
    Ok(())
}

/// One comma-separated table per attribute distribution under `dir`.
pub fn write_distributions(dir: &Path, analysis: &AnalysisOutput) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir)?;
    let categorical = [
        ("nationality.csv", &analysis.nationality),
        ("domain.csv", &analysis.domain),
        ("gender.csv", &analysis.gender),
    ];
    for (name, table) in categorical {
        let mut f = BufWriter::new(File::create(dir.join(name))?);
        writeln!(f, "category,mass")?;
        for (bin, mass) in table.bins.iter().zip(&table.mass) {
            writeln!(f, "{bin},{mass}")?;
        }
    }
    for (name, dist) in [
        ("indegree.csv", &analysis.indegree_cumulative),
        ("outdegree.csv", &analysis.outdegree_cumulative),
    ] {
        let mut f = BufWriter::new(File::create(dir.join(name))?);
        writeln!(f, "degree,p_at_least")?;
        for (d, p) in dist {
            writeln!(f, "{d},{p}")?;
        }
    }
    let mut f = BufWriter::new(File::create(dir.join("age.csv"))?);
    writeln!(f, "age,count")?;
    for (age, count) in &analysis.ages.counts {
        writeln!(f, "{age},{count}")?;
    }
    Ok(())
}
