//! Alias-table entity resolution and global speaker attribution.
//!
//! Surfaces are resolved to the highest-prior QID in the alias table; local
//! speaker probabilities are summed across all contexts of a quotation and
//! the argmax QID becomes its speaker.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::text::case_fold;
use crate::types::{Qid, QuoteRecord};

/// Case-folded surface form to (candidate QID, prior) list. Immutable after
/// load; shareable read-only across workers.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AliasTable {
    entries: BTreeMap<String, Vec<(Qid, f64)>>,
}

impl AliasTable {
    pub fn new() -> AliasTable {
        AliasTable::default()
    }

    pub fn insert(&mut self, surface: &str, qid: Qid, prior: f64) {
        self.entries
            .entry(case_fold(surface))
            .or_default()
            .push((qid, prior));
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn candidates(&self, surface: &str) -> Option<&[(Qid, f64)]> {
        self.entries.get(&case_fold(surface)).map(Vec::as_slice)
    }

    /// Highest-prior candidate for the case-folded surface; prior ties go to
    /// the lexicographically smallest QID.
    pub fn resolve_surface(&self, surface: &str) -> Option<&Qid> {
        let cands = self.entries.get(&case_fold(surface))?;
        cands
            .iter()
            .max_by(|(qa, pa), (qb, pb)| {
                pa.partial_cmp(pb)
                    .unwrap_or(core::cmp::Ordering::Equal)
                    .then_with(|| qb.cmp(qa)) // reversed: smaller qid wins the max
            })
            .map(|(q, _)| q)
    }
}

/// A quotation's globally attributed speaker: local probabilities summed
/// over every context, unnormalized.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GlobalAttribution {
    #[serde(rename = "quoteID")]
    pub quote_id: String,
    #[serde(rename = "speakerQID")]
    pub speaker_qid: Qid,
    #[serde(rename = "globalProbability")]
    pub global_probability: f64,
}

/// Resolves every candidate surface in every context, sums local
/// probabilities per QID, and returns the argmax speaker. QID ties go to
/// the smallest QID; unresolvable candidates are skipped. `None` when no
/// candidate resolves or the winner's mass falls below `min_global_probability`.
pub fn attribute_quotation(
    record: &QuoteRecord,
    table: &AliasTable,
    min_global_probability: f64,
) -> Option<GlobalAttribution> {
    let mut totals: BTreeMap<&Qid, f64> = BTreeMap::new();
    for ctx in &record.contexts {
        for (surface, prob) in &ctx.candidates {
            if let Some(qid) = table.resolve_surface(surface) {
                *totals.entry(qid).or_insert(0.0) += prob;
            }
        }
    }
    // BTreeMap iteration is qid-ascending, so `>` keeps the smallest on ties
    let (speaker, mass) = totals
        .into_iter()
        .fold(None::<(&Qid, f64)>, |best, (qid, p)| match best {
            Some((_, bp)) if p <= bp => best,
            _ => Some((qid, p)),
        })?;
    if mass < min_global_probability {
        return None;
    }
    Some(GlobalAttribution {
        quote_id: record.quote_id.clone(),
        speaker_qid: speaker.clone(),
        global_probability: mass,
    })
}
