//! Name-reference classification: does a mention use a person's first,
//! last, or full name, and how do the rates differ by gender.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::text::case_fold;
use crate::types::{EntityProfile, Gender};

/// How a mention surface refers to the person.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReferenceForm {
    First,
    Last,
    Full,
    Other,
}

impl ReferenceForm {
    pub fn as_str(&self) -> &'static str {
        match self {
            ReferenceForm::First => "first",
            ReferenceForm::Last => "last",
            ReferenceForm::Full => "full",
            ReferenceForm::Other => "other",
        }
    }
}

/// Classifies a mention surface against the profile's given and family
/// names (P735/P734). Containment is word-wise on the case-folded surface:
/// both a given and a family name present means `Full`, only one of them
/// means `First` or `Last`, neither means `Other`.
pub fn classify_reference(surface: &str, profile: &EntityProfile) -> ReferenceForm {
    let words: Vec<String> = surface.split_whitespace().map(case_fold).collect();
    let has_given = words.iter().any(|w| profile.given_names.contains(w));
    let has_family = words.iter().any(|w| profile.family_names.contains(w));
    match (has_given, has_family) {
        (true, true) => ReferenceForm::Full,
        (true, false) => ReferenceForm::First,
        (false, true) => ReferenceForm::Last,
        (false, false) => ReferenceForm::Other,
    }
}

/// Per-gender counts of classified references and the derived first-name
/// rate `first / (first + last + full)`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GenderReferenceCounts {
    pub first: usize,
    pub last: usize,
    pub full: usize,
}

impl GenderReferenceCounts {
    pub fn classified(&self) -> usize {
        self.first + self.last + self.full
    }

    pub fn first_name_rate(&self) -> Option<f64> {
        let total = self.classified();
        if total == 0 {
            None
        } else {
            Some(self.first as f64 / total as f64)
        }
    }
}

/// First-name reference rates per gender plus the female/male ratio.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FirstNameRates {
    pub counts: BTreeMap<Gender, GenderReferenceCounts>,
    pub rates: BTreeMap<Gender, f64>,
    pub female_male_ratio: Option<f64>,
}

/// Aggregates (form, gender) samples — one per edge target — into
/// per-gender first-name rates. Genders with zero classified references are
/// excluded; the ratio is absent when either side's rate is missing or the
/// male rate is zero.
pub fn first_name_rates(samples: impl IntoIterator<Item = (ReferenceForm, Gender)>) -> FirstNameRates {
    let mut counts: BTreeMap<Gender, GenderReferenceCounts> = BTreeMap::new();
    for (form, gender) in samples {
        let c = counts.entry(gender).or_default();
        match form {
            ReferenceForm::First => c.first += 1,
            ReferenceForm::Last => c.last += 1,
            ReferenceForm::Full => c.full += 1,
            ReferenceForm::Other => {}
        }
    }
    counts.retain(|_, c| c.classified() > 0);
    let rates: BTreeMap<Gender, f64> = counts
        .iter()
        .filter_map(|(g, c)| c.first_name_rate().map(|r| (*g, r)))
        .collect();
    let female_male_ratio = match (rates.get(&Gender::Female), rates.get(&Gender::Male)) {
        (Some(f), Some(m)) if *m > 0.0 => Some(f / m),
        _ => None,
    };
    FirstNameRates {
        counts,
        rates,
        female_male_ratio,
    }
}
