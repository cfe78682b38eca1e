//! Deterministic synthetic corpus generator: articles with planted
//! near-duplicate quote groups, spurious mentions, self-quotes, and a
//! matching Wikidata snapshot, alias table, hierarchy, and ground-truth
//! edge list for oracle comparison.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use quotenet_core::date::Date;
use quotenet_core::text::{CLOSING_QUOTE, OPENING_QUOTE};
use quotenet_core::types::{Article, MentionSpan, QuoteOccurrence, SpeakerCandidate};

const GIVEN_NAMES: &[&str] = &[
    "Ada", "Bruno", "Carla", "Dmitri", "Elena", "Farid", "Greta", "Hugo", "Ines", "Jonas",
    "Kira", "Lars", "Mona", "Nihal", "Olga", "Pavel", "Quentin", "Rosa", "Sven", "Tara",
];

const FAMILY_NAMES: &[&str] = &[
    "Abara", "Bergmann", "Castillo", "Dost", "Eriksen", "Farkas", "Gupta", "Horvat", "Ilic",
    "Jensen", "Kovacs", "Lindgren", "Moreau", "Novak", "Okafor", "Petrov", "Quist", "Rossi",
    "Sato", "Tanaka",
];

const COUNTRIES: &[&str] = &["Q30", "Q145", "Q16", "Q408"];
pub const DEFUNCT: &[&str] = &["Q15180", "Q838261"];

// occupations: actor and writer sit below artist, footballer below
// sportsman, member of parliament below politician
const OCCUPATIONS: &[&str] = &["Q33999", "Q36180", "Q937857", "Q486839", "Q999777"];
pub const HIERARCHY_EDGES: &[(&str, &str)] = &[
    ("Q33999", "Q483501"),
    ("Q36180", "Q483501"),
    ("Q937857", "Q50995749"),
    ("Q486839", "Q82955"),
];

const PARTIES: &[&str] = &["Q29468", "Q29552"];

#[derive(Debug, Clone)]
pub struct Person {
    pub qid: String,
    pub given: String,
    pub family: String,
    pub full_name: String,
    pub gender: &'static str, // qid list as json fragment key
}

/// A planted ground-truth edge: speaker, target, representative quote id.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GroundTruthEdge {
    pub speaker: String,
    pub target: String,
    pub quote_id: String,
}

#[derive(Debug, Default)]
pub struct SyntheticCorpus {
    pub articles: Vec<Article>,
    pub snapshot_lines: Vec<String>,
    pub alias_lines: Vec<String>,
    pub hierarchy_lines: Vec<String>,
    pub defunct_lines: Vec<String>,
    pub ground_truth: Vec<GroundTruthEdge>,
}

fn date_for(i: usize) -> Date {
    Date::new(2008 + (i % 12) as i32, 1 + (i % 12) as u8, 1 + (i % 28) as u8).unwrap()
}

fn persons(n: usize, rng: &mut ChaCha8Rng) -> Vec<Person> {
    (0..n)
        .map(|i| {
            let given = GIVEN_NAMES[i % GIVEN_NAMES.len()];
            let family = FAMILY_NAMES[(i / GIVEN_NAMES.len()) % FAMILY_NAMES.len()];
            // suffix keeps full names unique beyond the pool product
            let suffix = i / (GIVEN_NAMES.len() * FAMILY_NAMES.len());
            let family = if suffix == 0 {
                family.to_owned()
            } else {
                format!("{family}{suffix}")
            };
            let gender = match rng.gen_range(0..10) {
                0..=3 => "female",
                4..=7 => "male",
                8 => "other",
                _ => "unknown",
            };
            Person {
                qid: format!("Q{}", 1000 + i),
                given: given.to_owned(),
                full_name: format!("{given} {family}"),
                family,
                gender,
            }
        })
        .collect()
}

struct QuotePlan {
    quote_id: String,
    speaker: usize,
    body: Vec<String>,
    /// mentioned person indices, in body order
    mentions: Vec<usize>,
    /// offsets of each mention's first token within the body
    mention_offsets: Vec<usize>,
    short: bool,
    unterminated: bool,
}

fn build_quote_plan(
    counter: usize,
    speaker: usize,
    mentions: Vec<usize>,
    people: &[Person],
    short: bool,
    unterminated: bool,
) -> QuotePlan {
    let mut body: Vec<String> = Vec::new();
    let mut mention_offsets = Vec::new();
    if short {
        body.extend(["so", "true", "!"].map(str::to_owned));
    } else {
        // unique fillers prevent accidental shared windows between quotes
        for j in 0..3 {
            body.push(format!("filler{counter}x{j}"));
        }
        for (k, &m) in mentions.iter().enumerate() {
            mention_offsets.push(body.len());
            body.extend(people[m].full_name.split_whitespace().map(str::to_owned));
            body.push(format!("filler{counter}y{k}"));
        }
        for j in 0..3 {
            body.push(format!("filler{counter}z{j}"));
        }
    }
    QuotePlan {
        quote_id: format!("q{counter:06}"),
        speaker,
        body,
        mentions,
        mention_offsets,
        short,
        unterminated,
    }
}

fn article_from_plans(
    uid: usize,
    date: Date,
    plans: &[&QuotePlan],
    people: &[Person],
    rng: &mut ChaCha8Rng,
) -> Article {
    let mut tokens: Vec<String> = Vec::new();
    let mut quotations = Vec::new();
    let mut mentions: Vec<MentionSpan> = Vec::new();
    for plan in plans {
        let speaker = &people[plan.speaker];
        tokens.extend(speaker.full_name.split_whitespace().map(str::to_owned));
        tokens.push("said".to_owned());
        tokens.push(",".to_owned());
        tokens.push(OPENING_QUOTE.to_owned());
        let start = tokens.len();
        tokens.extend(plan.body.iter().cloned());
        if !plan.unterminated {
            tokens.push(CLOSING_QUOTE.to_owned());
            tokens.push(".".to_owned());
        }
        for (&m, &offset) in plan.mentions.iter().zip(&plan.mention_offsets) {
            let s = start + offset;
            let len = people[m].full_name.split_whitespace().count();
            mentions.push(MentionSpan {
                start: s,
                end: s + len,
                surface: people[m].full_name.clone(),
                entity_type: "PERSON".to_owned(),
            });
        }
        // spurious person mention over a punctuation or stopword token
        if !plan.unterminated && rng.gen_bool(0.2) {
            let idx = start + plan.body.len() + 1; // the trailing "." token
            mentions.push(MentionSpan {
                start: idx,
                end: idx + 1,
                surface: ".".to_owned(),
                entity_type: "PERSON".to_owned(),
            });
        }
        let mut candidates = vec![SpeakerCandidate {
            surface: speaker.full_name.clone(),
            start_token: start - 4,
            end_token: start - 3,
            probability: 0.8,
        }];
        if rng.gen_bool(0.4) {
            let decoy = rng.gen_range(0..people.len());
            if decoy != plan.speaker {
                candidates.push(SpeakerCandidate {
                    surface: people[decoy].full_name.clone(),
                    start_token: start - 4,
                    end_token: start - 3,
                    probability: 0.15,
                });
            }
        }
        quotations.push(QuoteOccurrence {
            quote_id: plan.quote_id.clone(),
            start_index: start,
            candidates,
        });
    }
    Article {
        article_uid: format!("a{uid:06}"),
        url: format!("http://news.example/{uid:06}"),
        date,
        tokens,
        quotations,
        mentions,
    }
}

/// Generates `size` base articles (plus extra articles for planted
/// duplicates and repeated occurrences), deterministically from the seed.
pub fn generate(size: usize, seed: u64) -> SyntheticCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_people = (size / 4).clamp(8, 400);
    let people = persons(n_people, &mut rng);

    let mut plans: Vec<QuotePlan> = Vec::new();
    let mut articles: Vec<Article> = Vec::new();
    // representative quote id per group, keyed by the original plan index
    let mut group_rep: BTreeMap<usize, String> = BTreeMap::new();
    let mut counter = 0usize;
    let mut uid = 0usize;

    for _ in 0..size {
        let n_quotes = rng.gen_range(1..=2);
        let mut article_plans: Vec<usize> = Vec::new();
        for qi in 0..n_quotes {
            let speaker = rng.gen_range(0..people.len());
            let short = rng.gen_bool(0.08);
            // an unterminated quote must be the article's last
            let unterminated = qi == n_quotes - 1 && rng.gen_bool(0.05);
            let mut mentions: Vec<usize> = Vec::new();
            if !short {
                let n_mentions = rng.gen_range(0..=2);
                for _ in 0..n_mentions {
                    mentions.push(rng.gen_range(0..people.len()));
                }
                // planted self-quote
                if rng.gen_bool(0.15) {
                    mentions.push(speaker);
                }
                mentions.dedup();
            }
            let plan = build_quote_plan(counter, speaker, mentions, &people, short, unterminated);
            group_rep.insert(counter, plan.quote_id.clone());
            plans.push(plan);
            article_plans.push(counter);
            counter += 1;
        }
        let plan_refs: Vec<&QuotePlan> = article_plans.iter().map(|&i| &plans[i]).collect();
        articles.push(article_from_plans(uid, date_for(uid), &plan_refs, &people, &mut rng));
        uid += 1;

        // planted near-duplicate: prefix-extended copy of the first quote
        // of this article, under a fresh quote id in its own article
        let orig_idx = article_plans[0];
        if !plans[orig_idx].short && !plans[orig_idx].unterminated && rng.gen_bool(0.2) {
            let orig = &plans[orig_idx];
            let mut dup_body = vec![format!("prefix{counter}a"), format!("prefix{counter}b")];
            dup_body.extend(orig.body.iter().cloned());
            let dup = QuotePlan {
                quote_id: format!("q{counter:06}"),
                speaker: orig.speaker,
                body: dup_body,
                mentions: orig.mentions.clone(),
                mention_offsets: orig.mention_offsets.iter().map(|o| o + 2).collect(),
                short: false,
                unterminated: false,
            };
            // the duplicate is strictly longer, so it represents the group
            group_rep.insert(orig_idx, dup.quote_id.clone());
            let dup_article = article_from_plans(uid, date_for(uid), &[&dup], &people, &mut rng);
            articles.push(dup_article);
            plans.push(dup);
            counter += 1;
            uid += 1;
        } else if !plans[orig_idx].short && !plans[orig_idx].unterminated && rng.gen_bool(0.15) {
            // same quote id appearing in a second article (context merge)
            let orig = &plans[orig_idx];
            let again = article_from_plans(uid, date_for(uid), &[orig], &people, &mut rng);
            articles.push(again);
            uid += 1;
        }
    }

    // ground truth follows directly from the planted structure
    let mut ground_truth: BTreeSet<GroundTruthEdge> = BTreeSet::new();
    for (idx, plan) in plans.iter().enumerate() {
        if plan.short || plan.unterminated {
            continue;
        }
        // duplicate plans have no group_rep entry of their own; their edges
        // are accounted for by the original's representative
        let Some(rep) = group_rep.get(&idx) else { continue };
        for &m in &plan.mentions {
            if m != plan.speaker {
                ground_truth.insert(GroundTruthEdge {
                    speaker: people[plan.speaker].qid.clone(),
                    target: people[m].qid.clone(),
                    quote_id: rep.clone(),
                });
            }
        }
    }

    let snapshot_lines = people
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let genders = match p.gender {
                "female" => vec!["Q6581072"],
                "male" => vec!["Q6581097"],
                "other" => vec!["Q48270"],
                _ => vec![],
            };
            let mut nationalities = vec![COUNTRIES[i % COUNTRIES.len()]];
            if i % 7 == 0 {
                nationalities.push(DEFUNCT[i % DEFUNCT.len()]);
            }
            let occupations = vec![OCCUPATIONS[i % OCCUPATIONS.len()]];
            let memberships = if i % 3 == 0 {
                json!([{"party": PARTIES[i % PARTIES.len()], "start": "2008", "end": null}])
            } else {
                json!([])
            };
            json!({
                "qid": p.qid,
                "label": p.full_name,
                "birthDates": [format!("{}-06-15", 1940 + (i % 55))],
                "nationalities": nationalities,
                "genders": genders,
                "partyMemberships": memberships,
                "occupations": occupations,
                "givenNames": [p.given],
                "familyNames": [p.family],
            })
            .to_string()
        })
        .collect();

    let alias_lines = people
        .iter()
        .map(|p| format!("{}\t{}\t1.0", p.full_name, p.qid))
        .collect();

    SyntheticCorpus {
        articles,
        snapshot_lines,
        alias_lines,
        hierarchy_lines: HIERARCHY_EDGES
            .iter()
            .map(|(c, p)| format!("{c}\t{p}"))
            .collect(),
        defunct_lines: DEFUNCT.iter().map(|q| (*q).to_owned()).collect(),
        ground_truth: ground_truth.into_iter().collect(),
    }
}

impl SyntheticCorpus {
    /// Writes the corpus and its companion files into `dir`.
    pub fn write_to(&self, dir: &Path) -> anyhow::Result<()> {
        std::fs::create_dir_all(dir)?;
        crate::output::write_jsonl(&dir.join("articles.jsonl"), &self.articles)?;
        std::fs::write(dir.join("snapshot.jsonl"), self.snapshot_lines.join("\n") + "\n")?;
        std::fs::write(dir.join("aliases.tsv"), self.alias_lines.join("\n") + "\n")?;
        std::fs::write(dir.join("hierarchy.tsv"), self.hierarchy_lines.join("\n") + "\n")?;
        std::fs::write(dir.join("defunct.txt"), self.defunct_lines.join("\n") + "\n")?;
        let gt: Vec<String> = self
            .ground_truth
            .iter()
            .map(|e| format!("{}\t{}\t{}", e.speaker, e.target, e.quote_id))
            .collect();
        std::fs::write(dir.join("ground_truth_edges.tsv"), gt.join("\n") + "\n")?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        let a = generate(10, 1);
        let b = generate(10, 1);
        assert_eq!(a.articles, b.articles);
        assert_eq!(a.ground_truth, b.ground_truth);
        let c = generate(10, 2);
        assert_ne!(a.articles, c.articles);
    }

    #[test]
    fn articles_pass_validation() {
        let corpus = generate(50, 7);
        for article in &corpus.articles {
            crate::corpus_io::validate_article(article).unwrap();
        }
    }

    #[test]
    fn ground_truth_has_no_self_loops() {
        let corpus = generate(100, 3);
        assert!(corpus.ground_truth.iter().all(|e| e.speaker != e.target));
    }
}
