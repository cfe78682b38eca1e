//! Loaders for the canonical input files: line-delimited article records,
//! the Wikidata-derived snapshot, the subclass hierarchy, alias tables,
//! defunct-country lists, and stopword files.
//!
//! A malformed line never aborts a run; it is recorded in a rejects log
//! with its line number and reason, and processing continues.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::Deserialize;

use quotenet_core::date::{parse_iso, Date};
use quotenet_core::link::AliasTable;
use quotenet_core::text::{case_fold, normalized_token_string, OPENING_QUOTE};
use quotenet_core::types::{
    Article, DefunctCountries, PartyMembership, Qid, SubclassHierarchy, WikidataSnapshotRecord,
};

/// One rejected input line.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Reject {
    pub line: usize,
    pub reason: String,
}

impl Reject {
    fn new(line: usize, reason: impl Into<String>) -> Reject {
        Reject {
            line,
            reason: reason.into(),
        }
    }
}

pub fn write_rejects_log(path: &Path, rejects: &[Reject]) -> anyhow::Result<()> {
    let mut f = std::io::BufWriter::new(File::create(path)?);
    for r in rejects {
        writeln!(f, "line {}: {}", r.line, r.reason)?;
    }
    Ok(())
}

/// Schema checks applied to every parsed article before it enters the
/// pipeline.
pub fn validate_article(article: &Article) -> Result<(), String> {
    let n = article.tokens.len();
    let mut prev_start = None;
    for q in &article.quotations {
        if q.start_index == 0 || q.start_index > n {
            return Err(format!("quotation {}: start index out of bounds", q.quote_id));
        }
        if article.tokens[q.start_index - 1] != OPENING_QUOTE {
            return Err(format!(
                "quotation {}: token before start is not an opening quotation mark",
                q.quote_id
            ));
        }
        if let Some(prev) = prev_start {
            if q.start_index <= prev {
                return Err("quotation start indices not strictly increasing".into());
            }
        }
        prev_start = Some(q.start_index);
        for c in &q.candidates {
            if !(0.0..=1.0).contains(&c.probability) {
                return Err(format!(
                    "quotation {}: candidate probability {} outside [0,1]",
                    q.quote_id, c.probability
                ));
            }
        }
    }
    for m in &article.mentions {
        if m.start >= m.end {
            return Err(format!("mention {:?}: empty or inverted span", m.surface));
        }
        if m.end > n {
            return Err(format!("mention {:?}: span exceeds token count", m.surface));
        }
        let joined = normalized_token_string(&article.tokens[m.start..m.end]);
        if joined != m.surface {
            return Err(format!(
                "mention {:?}: surface does not match tokens {:?}",
                m.surface, joined
            ));
        }
    }
    Ok(())
}

/// Streams validated articles from a line-delimited reader in file order.
/// Rejected lines come back as `Err` so callers can log and continue.
pub fn stream_articles<R: BufRead>(
    reader: R,
) -> impl Iterator<Item = Result<Article, Reject>> {
    reader.lines().enumerate().filter_map(|(i, line)| {
        let line_no = i + 1;
        let line = match line {
            Ok(l) => l,
            Err(e) => return Some(Err(Reject::new(line_no, format!("unreadable line: {e}")))),
        };
        if line.trim().is_empty() {
            return None;
        }
        let article: Article = match serde_json::from_str(&line) {
            Ok(a) => a,
            Err(e) => return Some(Err(Reject::new(line_no, format!("parse error: {e}")))),
        };
        match validate_article(&article) {
            Ok(()) => Some(Ok(article)),
            Err(reason) => Some(Err(Reject::new(line_no, reason))),
        }
    })
}

pub fn load_articles(path: &Path) -> anyhow::Result<(Vec<Article>, Vec<Reject>)> {
    let file = File::open(path)
        .map_err(|e| anyhow::anyhow!("cannot open articles file {}: {e}", path.display()))?;
    let mut articles = Vec::new();
    let mut rejects = Vec::new();
    for item in stream_articles(BufReader::new(file)) {
        match item {
            Ok(a) => articles.push(a),
            Err(r) => rejects.push(r),
        }
    }
    Ok((articles, rejects))
}

/// On-disk shape of one snapshot record. Dates may carry year or month
/// precision; they are normalized to the earliest matching day on load.
#[derive(Debug, Deserialize)]
struct SnapshotRecordFile {
    qid: Qid,
    #[serde(default)]
    label: String,
    #[serde(rename = "birthDates", default)]
    birth_dates: Vec<String>,
    #[serde(default)]
    nationalities: Vec<Qid>,
    #[serde(default)]
    genders: Vec<Qid>,
    #[serde(rename = "partyMemberships", default)]
    party_memberships: Vec<PartyMembershipFile>,
    #[serde(default)]
    occupations: Vec<Qid>,
    #[serde(rename = "givenNames", default)]
    given_names: Vec<String>,
    #[serde(rename = "familyNames", default)]
    family_names: Vec<String>,
}

#[derive(Debug, Deserialize)]
struct PartyMembershipFile {
    party: Qid,
    #[serde(default)]
    start: Option<String>,
    #[serde(default)]
    end: Option<String>,
}

fn parse_partial(s: &str, what: &str) -> Result<Date, String> {
    parse_iso(s)
        .map(|(d, _)| d)
        .ok_or_else(|| format!("{what}: invalid date {s:?}"))
}

fn convert_snapshot_record(raw: SnapshotRecordFile) -> Result<WikidataSnapshotRecord, String> {
    if !raw.qid.is_valid() {
        return Err(format!("invalid qid {:?}", raw.qid.as_str()));
    }
    let birth_dates = raw
        .birth_dates
        .iter()
        .map(|s| parse_partial(s, "birth date"))
        .collect::<Result<Vec<_>, _>>()?;
    let mut memberships = Vec::new();
    for m in raw.party_memberships {
        let start = m.start.as_deref().map(|s| parse_partial(s, "membership start")).transpose()?;
        let end = m.end.as_deref().map(|s| parse_partial(s, "membership end")).transpose()?;
        if let (Some(s), Some(e)) = (start, end) {
            if s > e {
                return Err(format!("membership {}: start after end", m.party.as_str()));
            }
        }
        memberships.push(PartyMembership {
            party: m.party,
            start,
            end,
        });
    }
    Ok(WikidataSnapshotRecord {
        qid: raw.qid,
        label: raw.label,
        birth_dates,
        nationalities: raw.nationalities,
        genders: raw.genders,
        party_memberships: memberships,
        occupations: raw.occupations,
        given_names: raw.given_names,
        family_names: raw.family_names,
    })
}

/// Result of loading the snapshot file: last record wins on duplicate QIDs.
#[derive(Debug, Default)]
pub struct SnapshotTable {
    pub records: BTreeMap<Qid, WikidataSnapshotRecord>,
    pub duplicates: usize,
    pub rejects: Vec<Reject>,
}

pub fn load_snapshot(path: &Path) -> anyhow::Result<SnapshotTable> {
    let file = File::open(path)
        .map_err(|e| anyhow::anyhow!("cannot open snapshot file {}: {e}", path.display()))?;
    let mut table = SnapshotTable::default();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: Result<SnapshotRecordFile, _> = serde_json::from_str(&line);
        let record = match parsed {
            Ok(raw) => convert_snapshot_record(raw),
            Err(e) => Err(format!("parse error: {e}")),
        };
        match record {
            Ok(r) => {
                if table.records.insert(r.qid.clone(), r).is_some() {
                    table.duplicates += 1;
                }
            }
            Err(reason) => table.rejects.push(Reject::new(line_no, reason)),
        }
    }
    Ok(table)
}

/// Loads the subclass hierarchy: one `child<TAB>parent` QID pair per line.
/// Self-edges are dropped; malformed lines are skipped and counted.
pub fn load_hierarchy(path: &Path) -> anyhow::Result<(SubclassHierarchy, Vec<Reject>)> {
    let file = File::open(path)
        .map_err(|e| anyhow::anyhow!("cannot open hierarchy file {}: {e}", path.display()))?;
    let mut hierarchy = SubclassHierarchy::new();
    let mut rejects = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split('\t');
        match (parts.next(), parts.next(), parts.next()) {
            (Some(child), Some(parent), None) => {
                let (child, parent) = (Qid::new(child.trim()), Qid::new(parent.trim()));
                if !child.is_valid() || !parent.is_valid() {
                    rejects.push(Reject::new(line_no, "invalid qid"));
                } else if child == parent {
                    // self-edges carry no information for the descent
                } else {
                    hierarchy.entry(child).or_default().insert(parent);
                }
            }
            _ => rejects.push(Reject::new(line_no, "expected two tab-separated qids")),
        }
    }
    Ok((hierarchy, rejects))
}

/// Loads an alias table: `surface<TAB>qid<TAB>prior`, one candidate per
/// line, surfaces case-folded on insert.
pub fn load_alias_table(path: &Path) -> anyhow::Result<(AliasTable, Vec<Reject>)> {
    let file = File::open(path)
        .map_err(|e| anyhow::anyhow!("cannot open alias table {}: {e}", path.display()))?;
    let mut table = AliasTable::new();
    let mut rejects = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split('\t');
        let parsed = match (parts.next(), parts.next(), parts.next(), parts.next()) {
            (Some(surface), Some(qid), Some(prior), None) => prior
                .trim()
                .parse::<f64>()
                .ok()
                .filter(|p| *p >= 0.0)
                .map(|p| (surface, Qid::new(qid.trim()), p)),
            _ => None,
        };
        match parsed {
            Some((surface, qid, prior)) if qid.is_valid() => table.insert(surface, qid, prior),
            _ => rejects.push(Reject::new(line_no, "expected surface<TAB>qid<TAB>prior")),
        }
    }
    Ok((table, rejects))
}

/// One QID per line.
pub fn load_defunct_countries(path: &Path) -> anyhow::Result<DefunctCountries> {
    let file = File::open(path)
        .map_err(|e| anyhow::anyhow!("cannot open defunct-countries file {}: {e}", path.display()))?;
    let mut set = DefunctCountries::new();
    for line in BufReader::new(file).lines() {
        let line = line?;
        let t = line.trim();
        if !t.is_empty() {
            set.insert(Qid::new(t));
        }
    }
    Ok(set)
}

/// One word per line, case-folded on load.
pub fn load_stopwords(path: &Path) -> anyhow::Result<std::collections::BTreeSet<String>> {
    let file = File::open(path)
        .map_err(|e| anyhow::anyhow!("cannot open stopwords file {}: {e}", path.display()))?;
    let mut set = std::collections::BTreeSet::new();
    for line in BufReader::new(file).lines() {
        let line = line?;
        let t = line.trim();
        if !t.is_empty() {
            set.insert(case_fold(t));
        }
    }
    Ok(set)
}
