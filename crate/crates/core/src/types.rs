//! Domain types shared across the pipeline stages.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::date::Date;

/// A Wikidata item identifier: `Q` followed by digits.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Qid(pub String);

impl Qid {
    pub fn new(s: impl Into<String>) -> Qid {
        Qid(s.into())
    }

    /// `Q` followed by at least one digit, nothing else.
    pub fn is_valid(&self) -> bool {
        let s = self.0.as_str();
        s.len() > 1 && s.starts_with('Q') && s[1..].bytes().all(|b| b.is_ascii_digit())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Qid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Qid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Qid {
    fn from(s: &str) -> Qid {
        Qid::new(s)
    }
}

/// One tokenized news article with quotation starts, local speaker-candidate
/// probabilities, and person-mention spans.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Article {
    #[serde(rename = "articleUID")]
    pub article_uid: String,
    pub url: String,
    pub date: Date,
    pub tokens: Vec<String>,
    pub quotations: Vec<QuoteOccurrence>,
    pub mentions: Vec<MentionSpan>,
}

/// A quotation occurrence inside one article. `start_index` points at the
/// first token inside the quote, immediately after the opening-mark token.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuoteOccurrence {
    #[serde(rename = "quoteID")]
    pub quote_id: String,
    #[serde(rename = "startTokenIndex")]
    pub start_index: usize,
    pub candidates: Vec<SpeakerCandidate>,
}

/// A local speaker candidate: the surface form of a name near the quote and
/// the probability that this person uttered it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeakerCandidate {
    pub surface: String,
    #[serde(rename = "startToken")]
    pub start_token: usize,
    #[serde(rename = "endToken")]
    pub end_token: usize,
    pub probability: f64,
}

/// A named-entity mention span over article tokens, end exclusive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MentionSpan {
    #[serde(rename = "startToken")]
    pub start: usize,
    #[serde(rename = "endTokenExclusive")]
    pub end: usize,
    pub surface: String,
    #[serde(rename = "entityType")]
    pub entity_type: String,
}

impl MentionSpan {
    pub fn is_person(&self) -> bool {
        self.entity_type == "PERSON"
    }
}

/// One raw record from the Wikidata-derived snapshot file.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct WikidataSnapshotRecord {
    pub qid: Qid,
    pub label: String,
    #[serde(rename = "birthDates", default)]
    pub birth_dates: Vec<Date>,
    #[serde(default)]
    pub nationalities: Vec<Qid>,
    #[serde(default)]
    pub genders: Vec<Qid>,
    #[serde(rename = "partyMemberships", default)]
    pub party_memberships: Vec<PartyMembership>,
    #[serde(default)]
    pub occupations: Vec<Qid>,
    #[serde(rename = "givenNames", default)]
    pub given_names: Vec<String>,
    #[serde(rename = "familyNames", default)]
    pub family_names: Vec<String>,
}

/// A party-affiliation claim. Boundary dates may carry year or month
/// precision in the source; they arrive here already normalized to the
/// earliest date meeting that precision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartyMembership {
    pub party: Qid,
    #[serde(default)]
    pub start: Option<Date>,
    #[serde(default)]
    pub end: Option<Date>,
}

/// One article context of a unique quotation: where it appeared, the local
/// speaker candidates, and the person mentions found inside the quote span.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuoteContext {
    #[serde(rename = "articleUID")]
    pub article_uid: String,
    pub url: String,
    pub date: Date,
    /// (surface, local attribution probability) pairs.
    pub candidates: Vec<(String, f64)>,
    /// Surfaces of the person mentions lying inside this quotation.
    pub mention_surfaces: Vec<String>,
}

/// A unique quotation after near-duplicate clustering: the representative's
/// text plus the union of all group members' contexts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuoteRecord {
    #[serde(rename = "quoteID")]
    pub quote_id: String,
    pub tokens: Vec<String>,
    pub contexts: Vec<QuoteContext>,
    pub earliest_date: Date,
}

/// Gender category per the three-way rule over P21 claims, with `Unknown`
/// kept apart for entities that carry no gender statement at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gender {
    Female,
    Male,
    Other,
    Unknown,
}

impl Gender {
    pub fn as_str(&self) -> &'static str {
        match self {
            Gender::Female => "female",
            Gender::Male => "male",
            Gender::Other => "other",
            Gender::Unknown => "unknown",
        }
    }
}

/// Occupation domain derived from the subclass hierarchy below the
/// configured top-level occupations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Art,
    Politics,
    Sport,
    Other,
}

impl Domain {
    pub fn as_str(&self) -> &'static str {
        match self {
            Domain::Art => "art",
            Domain::Politics => "politics",
            Domain::Sport => "sport",
            Domain::Other => "other",
        }
    }
}

/// Per-entity biographic attributes after all normalization rules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntityProfile {
    pub qid: Qid,
    pub label: String,
    pub birth_date: Option<Date>,
    pub nationalities: BTreeSet<Qid>,
    pub gender: Gender,
    pub party_memberships: Vec<PartyMembership>,
    pub domains: BTreeSet<Domain>,
    pub given_names: BTreeSet<String>,
    pub family_names: BTreeSet<String>,
}

/// Map from a defunct/current distinction input: QIDs of countries that no
/// longer exist and must not appear among extracted nationalities.
pub type DefunctCountries = BTreeSet<Qid>;

/// Subclass hierarchy: child occupation QID to its parents (P279 edges).
pub type SubclassHierarchy = BTreeMap<Qid, BTreeSet<Qid>>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qid_pattern() {
        assert!(Qid::new("Q76").is_valid());
        assert!(Qid::new("Q15180").is_valid());
        assert!(!Qid::new("X76").is_valid());
        assert!(!Qid::new("Q").is_valid());
        assert!(!Qid::new("Q12a").is_valid());
        assert!(!Qid::new("").is_valid());
    }
}
