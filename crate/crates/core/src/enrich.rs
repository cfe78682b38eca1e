//! Biographic attribute extraction from the Wikidata-derived snapshot:
//! birth dates, nationalities, gender, party-at-date, and occupation
//! domains via the subclass hierarchy.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::date::Date;
use crate::text::case_fold;
use crate::types::{
    DefunctCountries, Domain, EntityProfile, Gender, PartyMembership, Qid, SubclassHierarchy,
    WikidataSnapshotRecord,
};

const FEMALE: &str = "Q6581072";
const MALE: &str = "Q6581097";
const NON_BINARY: &str = "Q48270";

/// Domain to top-level occupation QIDs. The defaults are artist/creator for
/// art, politician/lawyer for politics, and sportsman for sport.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainTable {
    pub roots: BTreeMap<Domain, BTreeSet<Qid>>,
}

impl Default for DomainTable {
    fn default() -> DomainTable {
        let mut roots = BTreeMap::new();
        roots.insert(Domain::Art, [Qid::new("Q483501"), Qid::new("Q2500638")].into());
        roots.insert(Domain::Politics, [Qid::new("Q82955"), Qid::new("Q185351")].into());
        roots.insert(Domain::Sport, [Qid::new("Q50995749")].into());
        DomainTable { roots }
    }
}

/// First listed birth date; multiple dates affect a negligible fraction of
/// entities, so no reconciliation is attempted.
pub fn extract_birth_date(record: &WikidataSnapshotRecord) -> Option<Date> {
    record.birth_dates.first().copied()
}

/// All listed nationalities minus countries that no longer exist.
pub fn extract_nationalities(
    record: &WikidataSnapshotRecord,
    defunct: &DefunctCountries,
) -> BTreeSet<Qid> {
    record
        .nationalities
        .iter()
        .filter(|q| !defunct.contains(q))
        .cloned()
        .collect()
}

/// Exactly one female/male claim maps directly; a non-binary claim or
/// multiple claims map to `Other`; no claim at all is `Unknown`.
pub fn extract_gender(record: &WikidataSnapshotRecord) -> Gender {
    let genders: BTreeSet<&str> = record.genders.iter().map(Qid::as_str).collect();
    if genders.is_empty() {
        Gender::Unknown
    } else if genders.len() > 1 || genders.contains(NON_BINARY) {
        Gender::Other
    } else if genders.contains(FEMALE) {
        Gender::Female
    } else if genders.contains(MALE) {
        Gender::Male
    } else {
        Gender::Other
    }
}

/// The party an entity belonged to on `quote_date`.
///
/// Memberships carry closed intervals (missing boundaries are unbounded).
/// When no membership lists any date, the last party listed wins. When
/// intervals exist but none contains the date, the latest start at or
/// before the date wins.
pub fn party_at_date(memberships: &[PartyMembership], quote_date: Date) -> Option<Qid> {
    let dated: Vec<&PartyMembership> = memberships
        .iter()
        .filter(|m| m.start.is_some() || m.end.is_some())
        .collect();
    if dated.is_empty() {
        return memberships.last().map(|m| m.party.clone());
    }
    // several intervals may contain the date; the earliest start wins
    let containing = dated
        .iter()
        .filter(|m| {
            m.start.map_or(true, |s| s <= quote_date) && m.end.map_or(true, |e| quote_date <= e)
        })
        .min_by_key(|m| m.start);
    if let Some(m) = containing {
        return Some(m.party.clone());
    }
    dated
        .iter()
        .filter(|m| m.start.map_or(false, |s| s <= quote_date))
        .max_by_key(|m| m.start)
        .map(|m| m.party.clone())
}

/// Occupation QID to the domains whose top-level occupations reach it by
/// descending the subclass hierarchy. Breadth-first with a visited set, so
/// cycles terminate; occupations reachable from several domains keep all of
/// them. Unlisted occupations fall back to `Other` at lookup time.
pub fn occupation_closure(
    hierarchy: &SubclassHierarchy,
    table: &DomainTable,
) -> BTreeMap<Qid, BTreeSet<Domain>> {
    // hierarchy maps child -> parents; descent needs parent -> children
    let mut children: BTreeMap<&Qid, BTreeSet<&Qid>> = BTreeMap::new();
    for (child, parents) in hierarchy {
        for parent in parents {
            children.entry(parent).or_default().insert(child);
        }
    }

    let mut closure: BTreeMap<Qid, BTreeSet<Domain>> = BTreeMap::new();
    for (&domain, roots) in &table.roots {
        let mut visited: BTreeSet<&Qid> = BTreeSet::new();
        let mut frontier: Vec<&Qid> = roots.iter().collect();
        while let Some(q) = frontier.pop() {
            if !visited.insert(q) {
                continue;
            }
            closure.entry(q.clone()).or_default().insert(domain);
            if let Some(kids) = children.get(q) {
                frontier.extend(kids.iter().copied());
            }
        }
    }
    closure
}

/// Union of the closure domains over all occupation claims, with the
/// art-exclusivity rule: art survives only when neither politics nor sport
/// is present. Other overlaps are kept as-is.
pub fn entity_domains(
    record: &WikidataSnapshotRecord,
    closure: &BTreeMap<Qid, BTreeSet<Domain>>,
) -> BTreeSet<Domain> {
    let mut domains: BTreeSet<Domain> = BTreeSet::new();
    for occ in &record.occupations {
        match closure.get(occ) {
            Some(ds) => domains.extend(ds.iter().copied()),
            None => {
                domains.insert(Domain::Other);
            }
        }
    }
    if domains.contains(&Domain::Art)
        && (domains.contains(&Domain::Politics) || domains.contains(&Domain::Sport))
    {
        domains.remove(&Domain::Art);
    }
    domains
}

/// Full profile for one snapshot record.
pub fn build_profile(
    record: &WikidataSnapshotRecord,
    defunct: &DefunctCountries,
    closure: &BTreeMap<Qid, BTreeSet<Domain>>,
) -> EntityProfile {
    EntityProfile {
        qid: record.qid.clone(),
        label: record.label.clone(),
        birth_date: extract_birth_date(record),
        nationalities: extract_nationalities(record, defunct),
        gender: extract_gender(record),
        party_memberships: record.party_memberships.clone(),
        domains: entity_domains(record, closure),
        given_names: record.given_names.iter().map(|n| case_fold(n)).collect(),
        family_names: record.family_names.iter().map(|n| case_fold(n)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::borrow::ToOwned;
    use alloc::vec;

    fn record() -> WikidataSnapshotRecord {
        WikidataSnapshotRecord {
            qid: Qid::new("Q76"),
            label: "Barack Obama".to_owned(),
            ..Default::default()
        }
    }

    fn q(s: &str) -> Qid {
        Qid::new(s)
    }

    #[test]
    fn first_listed_birth_date_wins() {
        let mut r = record();
        r.birth_dates = vec!["1946-06-14".parse().unwrap(), "1946-06-15".parse().unwrap()];
        assert_eq!(extract_birth_date(&r), Some("1946-06-14".parse().unwrap()));
        assert_eq!(extract_birth_date(&record()), None);
        r.birth_dates = vec!["1961-08-04".parse().unwrap()];
        assert_eq!(extract_birth_date(&r), Some("1961-08-04".parse().unwrap()));
    }

    #[test]
    fn defunct_countries_are_excluded() {
        let defunct: DefunctCountries = [q("Q15180"), q("Q838261")].into();
        let mut r = record();
        r.nationalities = vec![q("Q30"), q("Q15180")];
        assert_eq!(extract_nationalities(&r, &defunct), [q("Q30")].into());
        r.nationalities = vec![q("Q838261")];
        assert!(extract_nationalities(&r, &defunct).is_empty());
        r.nationalities = vec![];
        assert!(extract_nationalities(&r, &defunct).is_empty());
    }

    #[test]
    fn gender_rules() {
        let mut r = record();
        r.genders = vec![q(FEMALE)];
        assert_eq!(extract_gender(&r), Gender::Female);
        r.genders = vec![q(MALE)];
        assert_eq!(extract_gender(&r), Gender::Male);
        r.genders = vec![q(MALE), q(NON_BINARY)];
        assert_eq!(extract_gender(&r), Gender::Other);
        r.genders = vec![q(NON_BINARY)];
        assert_eq!(extract_gender(&r), Gender::Other);
        r.genders = vec![];
        assert_eq!(extract_gender(&r), Gender::Unknown);
    }

    fn membership(party: &str, start: Option<&str>, end: Option<&str>) -> PartyMembership {
        PartyMembership {
            party: q(party),
            start: start.map(|s| crate::date::parse_iso(s).unwrap().0),
            end: end.map(|s| crate::date::parse_iso(s).unwrap().0),
        }
    }

    #[test]
    fn party_switch_normalizes_to_january_first() {
        // year-precision boundaries arrive normalized to 2008-01-01
        let ms = vec![
            membership("QA", None, Some("2008")),
            membership("QB", Some("2008"), None),
        ];
        let got = party_at_date(&ms, "2008-03-01".parse().unwrap());
        assert_eq!(got, Some(q("QB")));
    }

    #[test]
    fn dateless_memberships_take_last_listed() {
        let ms = vec![membership("QA", None, None), membership("QB", None, None)];
        assert_eq!(party_at_date(&ms, "2010-01-01".parse().unwrap()), Some(q("QB")));
        assert_eq!(party_at_date(&[], "2010-01-01".parse().unwrap()), None);
    }

    #[test]
    fn no_containing_interval_takes_latest_start_before_date() {
        let ms = vec![
            membership("QA", Some("2000-01-01"), Some("2001-01-01")),
            membership("QB", Some("2003-01-01"), Some("2004-01-01")),
        ];
        assert_eq!(party_at_date(&ms, "2006-06-01".parse().unwrap()), Some(q("QB")));
        assert_eq!(party_at_date(&ms, "1999-01-01".parse().unwrap()), None);
    }

    fn hierarchy(edges: &[(&str, &str)]) -> SubclassHierarchy {
        let mut h = SubclassHierarchy::new();
        for (c, p) in edges {
            h.entry(q(c)).or_default().insert(q(p));
        }
        h
    }

    #[test]
    fn closure_follows_subclass_edges_downward() {
        let h = hierarchy(&[("Q33999", "Q483501")]); // actor -> artist
        let closure = occupation_closure(&h, &DomainTable::default());
        assert!(closure[&q("Q33999")].contains(&Domain::Art));
        assert!(!closure.contains_key(&q("Q999999")));
    }

    #[test]
    fn closure_survives_cycles() {
        let h = hierarchy(&[("QA", "Q483501"), ("QB", "QA"), ("QA", "QB")]);
        let closure = occupation_closure(&h, &DomainTable::default());
        assert!(closure[&q("QA")].contains(&Domain::Art));
        assert!(closure[&q("QB")].contains(&Domain::Art));
    }

    #[test]
    fn art_is_suppressed_by_politics_or_sport() {
        // actor and writer sit below artist; politician is a politics root
        let h = hierarchy(&[("Q33999", "Q483501"), ("Q36180", "Q483501")]);
        let closure = occupation_closure(&h, &DomainTable::default());

        let mut trump = record();
        trump.occupations = vec![q("Q33999"), q("Q36180"), q("Q82955")];
        assert_eq!(entity_domains(&trump, &closure), [Domain::Politics].into());

        let mut actor = record();
        actor.occupations = vec![q("Q33999")];
        assert_eq!(entity_domains(&actor, &closure), [Domain::Art].into());
    }

    #[test]
    fn politics_and_sport_are_not_disentangled() {
        let h = hierarchy(&[("Qfootballer", "Q50995749")]);
        let closure = occupation_closure(&h, &DomainTable::default());
        let mut r = record();
        r.occupations = vec![q("Q82955"), q("Qfootballer")];
        assert_eq!(
            entity_domains(&r, &closure),
            [Domain::Politics, Domain::Sport].into()
        );
    }

    #[test]
    fn unreachable_occupation_maps_to_other() {
        let closure = occupation_closure(&SubclassHierarchy::new(), &DomainTable::default());
        let mut r = record();
        r.occupations = vec![q("Q12345")];
        assert_eq!(entity_domains(&r, &closure), [Domain::Other].into());
        r.occupations = vec![];
        assert!(entity_domains(&r, &closure).is_empty());
    }
}
