//! Structural metrics and degree-weighted demographics of the directed
//! quote network: degrees, weakly connected components, assortativity,
//! clustering, attribute mixing, PageRank, and age histograms.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::dsu::DisjointSet;
use crate::graph::QuoteGraph;
use crate::types::{EntityProfile, Qid};

/// Total (in + out) degree per node on the directed multigraph.
pub fn total_degrees(graph: &QuoteGraph) -> BTreeMap<&Qid, usize> {
    let mut deg: BTreeMap<&Qid, usize> = graph.nodes.iter().map(|q| (q, 0)).collect();
    for e in &graph.edges {
        *deg.get_mut(&e.speaker_qid).unwrap() += 1;
        *deg.get_mut(&e.target_qid).unwrap() += 1;
    }
    deg
}

/// Mean total degree, `2|E| / |V|`. `None` on the empty graph.
pub fn mean_total_degree(graph: &QuoteGraph) -> Option<f64> {
    if graph.nodes.is_empty() {
        return None;
    }
    Some(2.0 * graph.edge_count() as f64 / graph.node_count() as f64)
}

/// Cumulative distribution `P(d >= d_k)` over the distinct values of a
/// degree sequence.
pub fn cumulative_degree_distribution(degrees: &[usize]) -> Vec<(usize, f64)> {
    if degrees.is_empty() {
        return Vec::new();
    }
    let n = degrees.len() as f64;
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &d in degrees {
        *counts.entry(d).or_insert(0) += 1;
    }
    let mut at_least = degrees.len();
    counts
        .into_iter()
        .map(|(d, c)| {
            let p = at_least as f64 / n;
            at_least -= c;
            (d, p)
        })
        .collect()
}

/// In- and out-degree sequences in node order.
pub fn directed_degrees(graph: &QuoteGraph) -> (Vec<usize>, Vec<usize>) {
    let mut indeg: BTreeMap<&Qid, usize> = graph.nodes.iter().map(|q| (q, 0)).collect();
    let mut outdeg = indeg.clone();
    for e in &graph.edges {
        *outdeg.get_mut(&e.speaker_qid).unwrap() += 1;
        *indeg.get_mut(&e.target_qid).unwrap() += 1;
    }
    (
        indeg.into_values().collect(),
        outdeg.into_values().collect(),
    )
}

/// Weakly connected component sizes, descending, plus the fraction of nodes
/// in the largest one.
pub fn weakly_connected_components(graph: &QuoteGraph) -> (Vec<usize>, f64) {
    if graph.nodes.is_empty() {
        return (Vec::new(), 0.0);
    }
    let index: BTreeMap<&Qid, usize> = graph
        .nodes
        .iter()
        .enumerate()
        .map(|(i, q)| (q, i))
        .collect();
    let mut dsu = DisjointSet::new(graph.nodes.len());
    for e in &graph.edges {
        dsu.union(index[&e.speaker_qid], index[&e.target_qid]);
    }
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..graph.nodes.len() {
        *sizes.entry(dsu.find(i)).or_insert(0) += 1;
    }
    let mut sizes: Vec<usize> = sizes.into_values().collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let frac = sizes[0] as f64 / graph.node_count() as f64;
    (sizes, frac)
}

/// Simple undirected projection: parallel edges and directions collapsed,
/// self-loops already absent. Returns sorted unordered node pairs.
pub fn simple_undirected_edges(graph: &QuoteGraph) -> BTreeSet<(&Qid, &Qid)> {
    graph
        .edges
        .iter()
        .filter(|e| e.speaker_qid != e.target_qid)
        .map(|e| {
            if e.speaker_qid <= e.target_qid {
                (&e.speaker_qid, &e.target_qid)
            } else {
                (&e.target_qid, &e.speaker_qid)
            }
        })
        .collect()
}

fn undirected_adjacency<'a>(
    edges: &BTreeSet<(&'a Qid, &'a Qid)>,
) -> BTreeMap<&'a Qid, BTreeSet<&'a Qid>> {
    let mut adj: BTreeMap<&Qid, BTreeSet<&Qid>> = BTreeMap::new();
    for &(u, v) in edges {
        adj.entry(u).or_default().insert(v);
        adj.entry(v).or_default().insert(u);
    }
    adj
}

/// Pearson correlation of the degrees at the two ends of each edge of the
/// simple undirected projection. `None` when the degree variance is zero.
pub fn degree_assortativity(graph: &QuoteGraph) -> Option<f64> {
    let edges = simple_undirected_edges(graph);
    if edges.len() < 2 {
        return None;
    }
    let adj = undirected_adjacency(&edges);
    let deg = |q: &Qid| adj[q].len() as f64;

    // symmetrized sums over edge-end degree pairs (j, k) and (k, j)
    let m = (2 * edges.len()) as f64;
    let (mut s_jk, mut s_j, mut s_jj) = (0.0, 0.0, 0.0);
    for &(u, v) in &edges {
        let (j, k) = (deg(u), deg(v));
        s_jk += 2.0 * j * k;
        s_j += j + k;
        s_jj += j * j + k * k;
    }
    let mean = s_j / m;
    let var = s_jj / m - mean * mean;
    if var <= 1e-15 {
        return None;
    }
    Some((s_jk / m - mean * mean) / var)
}

/// Global clustering coefficient: `3 * triangles / connected triples` on the
/// simple undirected projection. Zero when no triples exist.
pub fn global_clustering(graph: &QuoteGraph) -> f64 {
    let edges = simple_undirected_edges(graph);
    let adj = undirected_adjacency(&edges);
    let mut triangles_times_3 = 0usize;
    for &(u, v) in &edges {
        triangles_times_3 += adj[u].intersection(&adj[v]).count();
    }
    let triples: usize = adj.values().map(|n| n.len() * (n.len() - 1) / 2).sum();
    if triples == 0 {
        return 0.0;
    }
    triangles_times_3 as f64 / triples as f64
}

/// Edge-end category co-occurrence matrix: `e[i][j]` is the fraction of
/// directed edges with a source in category `i` and a target in category
/// `j`; `a` and `b` are its marginals.
#[derive(Debug, Clone, PartialEq)]
pub struct MixingMatrix {
    pub categories: Vec<String>,
    pub e: Vec<Vec<f64>>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl MixingMatrix {
    /// Builds the matrix from directed edges whose endpoints are both
    /// labeled. `None` when no such edge exists.
    pub fn build(
        graph: &QuoteGraph,
        attribute: impl Fn(&Qid) -> Option<String>,
    ) -> Option<MixingMatrix> {
        let mut pairs: Vec<(String, String)> = Vec::new();
        for e in &graph.edges {
            if let (Some(src), Some(tgt)) = (attribute(&e.speaker_qid), attribute(&e.target_qid)) {
                pairs.push((src, tgt));
            }
        }
        if pairs.is_empty() {
            return None;
        }
        let categories: Vec<String> = pairs
            .iter()
            .flat_map(|(s, t)| [s.clone(), t.clone()])
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let idx: BTreeMap<&str, usize> = categories
            .iter()
            .enumerate()
            .map(|(i, c)| (c.as_str(), i))
            .collect();
        let k = categories.len();
        let mut e = alloc::vec![alloc::vec![0.0; k]; k];
        let w = 1.0 / pairs.len() as f64;
        for (s, t) in &pairs {
            e[idx[s.as_str()]][idx[t.as_str()]] += w;
        }
        let a: Vec<f64> = e.iter().map(|row| row.iter().sum()).collect();
        let b: Vec<f64> = (0..k).map(|j| e.iter().map(|row| row[j]).sum()).collect();
        Some(MixingMatrix { categories, e, a, b })
    }

    /// Newman's assortative mixing coefficient
    /// `r = (sum_i e_ii - sum_i a_i b_i) / (1 - sum_i a_i b_i)`.
    /// `None` when the denominator vanishes (a single category).
    pub fn coefficient(&self) -> Option<f64> {
        let trace: f64 = (0..self.categories.len()).map(|i| self.e[i][i]).sum();
        let ab: f64 = self.a.iter().zip(&self.b).map(|(a, b)| a * b).sum();
        let denom = 1.0 - ab;
        if libm::fabs(denom) < 1e-12 {
            return None;
        }
        Some((trace - ab) / denom)
    }
}

/// Assortative mixing coefficient by a node attribute over directed edge
/// ends. Edges with an unlabeled endpoint are excluded.
pub fn attribute_mixing(
    graph: &QuoteGraph,
    attribute: impl Fn(&Qid) -> Option<String>,
) -> Option<f64> {
    MixingMatrix::build(graph, attribute)?.coefficient()
}

/// PageRank parameters; the classic damping with a strict L1 stopping rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PageRankParams {
    pub damping: f64,
    pub tolerance: f64,
    pub max_iter: usize,
}

impl Default for PageRankParams {
    fn default() -> PageRankParams {
        PageRankParams {
            damping: 0.85,
            tolerance: 1e-10,
            max_iter: 200,
        }
    }
}

/// PageRank scores and whether the iteration converged within `max_iter`.
#[derive(Debug, Clone, PartialEq)]
pub struct PageRankResult {
    pub scores: BTreeMap<Qid, f64>,
    pub converged: bool,
    pub iterations: usize,
}

/// Power iteration on the directed multigraph with uniform teleport and
/// uniform redistribution of dangling mass. Parallel edges carry
/// proportional weight. Deterministic: nodes are processed in sorted order.
pub fn pagerank(graph: &QuoteGraph, params: &PageRankParams) -> Option<PageRankResult> {
    let n = graph.node_count();
    if n == 0 {
        return None;
    }
    let index: BTreeMap<&Qid, usize> = graph
        .nodes
        .iter()
        .enumerate()
        .map(|(i, q)| (q, i))
        .collect();
    let mut out_edges: Vec<Vec<usize>> = alloc::vec![Vec::new(); n];
    for e in &graph.edges {
        out_edges[index[&e.speaker_qid]].push(index[&e.target_qid]);
    }
    for targets in &mut out_edges {
        targets.sort_unstable();
    }

    let uniform = 1.0 / n as f64;
    let mut scores = alloc::vec![uniform; n];
    let mut converged = false;
    let mut iterations = 0;
    for _ in 0..params.max_iter {
        iterations += 1;
        let mut next = alloc::vec![(1.0 - params.damping) * uniform; n];
        let mut dangling = 0.0;
        for (u, targets) in out_edges.iter().enumerate() {
            if targets.is_empty() {
                dangling += scores[u];
            } else {
                let share = params.damping * scores[u] / targets.len() as f64;
                for &v in targets {
                    next[v] += share;
                }
            }
        }
        let dangling_share = params.damping * dangling * uniform;
        for s in &mut next {
            *s += dangling_share;
        }
        let delta: f64 = next
            .iter()
            .zip(&scores)
            .map(|(a, b)| libm::fabs(a - b))
            .sum();
        scores = next;
        if delta < params.tolerance {
            converged = true;
            break;
        }
    }
    Some(PageRankResult {
        scores: graph
            .nodes
            .iter()
            .map(|q| (q.clone(), scores[index[q]]))
            .collect(),
        converged,
        iterations,
    })
}

/// Category fractions of a distribution; the cumulative variant is emitted
/// separately for numeric degree distributions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionTable {
    pub bins: Vec<String>,
    pub mass: Vec<f64>,
}

/// Attribute distribution weighted by total degree: each node contributes
/// in proportion to its degree, i.e. the law of a random edge end.
/// Unlabeled ends are grouped as `unknown`.
pub fn degree_weighted_distribution(
    graph: &QuoteGraph,
    attribute: impl Fn(&Qid) -> Option<String>,
) -> DistributionTable {
    let deg = total_degrees(graph);
    let total: usize = 2 * graph.edge_count();
    let mut mass: BTreeMap<String, f64> = BTreeMap::new();
    if total > 0 {
        for (qid, d) in deg {
            let cat = attribute(qid).unwrap_or_else(|| String::from("unknown"));
            *mass.entry(cat).or_insert(0.0) += d as f64 / total as f64;
        }
    }
    let (bins, mass): (Vec<String>, Vec<f64>) = mass.into_iter().unzip();
    DistributionTable { bins, mass }
}

/// Histogram over whole-year ages at the quoting edge's earliest date, one
/// sample per directed edge end with a known birth date.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AgeHistogram {
    pub counts: BTreeMap<i32, usize>,
    pub missing_birth_dates: usize,
    pub negative_ages: usize,
}

pub fn age_distribution(
    graph: &QuoteGraph,
    profiles: &BTreeMap<Qid, EntityProfile>,
) -> AgeHistogram {
    let mut hist = AgeHistogram::default();
    for e in &graph.edges {
        for qid in [&e.speaker_qid, &e.target_qid] {
            match profiles.get(qid).and_then(|p| p.birth_date) {
                Some(birth) => {
                    let age = birth.years_until(e.earliest_date);
                    if age < 0 {
                        hist.negative_ages += 1;
                    } else {
                        *hist.counts.entry(age).or_insert(0) += 1;
                    }
                }
                None => hist.missing_birth_dates += 1,
            }
        }
    }
    hist
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;
    use alloc::borrow::ToOwned;
    use alloc::string::ToString;
    use alloc::vec;

    fn edge(s: &str, t: &str, q: &str) -> Edge {
        Edge {
            speaker_qid: Qid::new(s),
            target_qid: Qid::new(t),
            quote_id: q.to_owned(),
            earliest_date: "2010-01-01".parse().unwrap(),
            article_urls: BTreeSet::new(),
            target_surface: String::new(),
        }
    }

    fn graph(edges: &[(&str, &str)]) -> QuoteGraph {
        let mut nodes = BTreeSet::new();
        let mut es = Vec::new();
        for (i, (s, t)) in edges.iter().enumerate() {
            nodes.insert(Qid::new(*s));
            nodes.insert(Qid::new(*t));
            es.push(edge(s, t, &alloc::format!("q{i}")));
        }
        QuoteGraph { nodes, edges: es }
    }

    #[test]
    fn mean_degree_identity() {
        assert_eq!(mean_total_degree(&graph(&[("A", "B")])), Some(1.0));
        let tri = graph(&[("A", "B"), ("B", "C"), ("C", "A")]);
        assert_eq!(mean_total_degree(&tri), Some(2.0));
        assert_eq!(mean_total_degree(&QuoteGraph::default()), None);
    }

    #[test]
    fn wcc_counts_and_fraction() {
        let g = graph(&[("A", "B"), ("C", "D")]);
        let (sizes, frac) = weakly_connected_components(&g);
        assert_eq!(sizes, vec![2, 2]);
        assert!((frac - 0.5).abs() < 1e-12);

        let path = graph(&[("A", "B"), ("B", "C"), ("C", "D")]);
        let (sizes, frac) = weakly_connected_components(&path);
        assert_eq!(sizes.len(), 1);
        assert!((frac - 1.0).abs() < 1e-12);

        let (sizes, _) = weakly_connected_components(&QuoteGraph::default());
        assert!(sizes.is_empty());
    }

    #[test]
    fn star_assortativity_is_minus_one() {
        let g = graph(&[("C", "L1"), ("C", "L2"), ("C", "L3")]);
        let r = degree_assortativity(&g).unwrap();
        assert!((r - (-1.0)).abs() < 1e-12);
    }

    #[test]
    fn zero_degree_variance_is_undefined() {
        assert_eq!(degree_assortativity(&graph(&[("A", "B"), ("C", "D")])), None);
        // two disjoint directed triangles: every endpoint has degree 2
        let g = graph(&[
            ("A", "B"), ("B", "C"), ("C", "A"),
            ("D", "E"), ("E", "F"), ("F", "D"),
        ]);
        assert_eq!(degree_assortativity(&g), None);
    }

    #[test]
    fn clustering_closed_forms() {
        let tri = graph(&[("A", "B"), ("B", "C"), ("C", "A")]);
        assert!((global_clustering(&tri) - 1.0).abs() < 1e-12);
        let path = graph(&[("A", "B"), ("B", "C")]);
        assert!(global_clustering(&path).abs() < 1e-12);
        let clique4 = graph(&[
            ("A", "B"), ("A", "C"), ("A", "D"),
            ("B", "C"), ("B", "D"), ("C", "D"),
        ]);
        assert!((global_clustering(&clique4) - 1.0).abs() < 1e-12);
    }

    fn label<'a>(map: &'a [(&'a str, &'a str)]) -> impl Fn(&Qid) -> Option<String> + 'a {
        move |q: &Qid| {
            map.iter()
                .find(|(k, _)| *k == q.as_str())
                .map(|(_, v)| v.to_string())
        }
    }

    #[test]
    fn monochromatic_cliques_mix_perfectly() {
        let g = graph(&[("A", "B"), ("B", "A"), ("C", "D"), ("D", "C")]);
        let attr = label(&[("A", "x"), ("B", "x"), ("C", "y"), ("D", "y")]);
        let r = attribute_mixing(&g, attr).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_category_is_degenerate() {
        let g = graph(&[("A", "B")]);
        assert_eq!(attribute_mixing(&g, label(&[("A", "x"), ("B", "x")])), None);
    }

    #[test]
    fn mixing_matrix_mass_sums_to_one() {
        let g = graph(&[("A", "B"), ("B", "C"), ("C", "A"), ("A", "C")]);
        let attr = label(&[("A", "x"), ("B", "y"), ("C", "y")]);
        let m = MixingMatrix::build(&g, attr).unwrap();
        let total: f64 = m.e.iter().flatten().sum();
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn pagerank_uniform_on_cycles() {
        let cycle = graph(&[("A", "B"), ("B", "C"), ("C", "D"), ("D", "A")]);
        let pr = pagerank(&cycle, &PageRankParams::default()).unwrap();
        for s in pr.scores.values() {
            assert!((s - 0.25).abs() < 1e-9);
        }
        let total: f64 = pr.scores.values().sum();
        assert!((total - 1.0).abs() < 1e-9);
        assert!(pr.converged);
    }

    #[test]
    fn pagerank_handles_dangling_nodes() {
        let chain = graph(&[("A", "B"), ("B", "C")]);
        let pr = pagerank(&chain, &PageRankParams::default()).unwrap();
        let total: f64 = pr.scores.values().sum();
        assert!((total - 1.0).abs() < 1e-9);
        assert!(pr.scores[&Qid::new("C")] > pr.scores[&Qid::new("A")]);
    }

    #[test]
    fn degree_weighted_distribution_of_star() {
        let g = graph(&[("C", "L1"), ("C", "L2"), ("C", "L3")]);
        let attr = label(&[("C", "x"), ("L1", "y"), ("L2", "y"), ("L3", "y")]);
        let d = degree_weighted_distribution(&g, attr);
        assert_eq!(d.bins, vec!["x".to_string(), "y".to_string()]);
        assert!((d.mass[0] - 0.5).abs() < 1e-12);
        assert!((d.mass[1] - 0.5).abs() < 1e-12);
        let total: f64 = d.mass.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cumulative_distribution_is_non_increasing() {
        let d = cumulative_degree_distribution(&[1, 1, 2, 3]);
        assert_eq!(d[0], (1, 1.0));
        assert!(d.windows(2).all(|w| w[0].1 >= w[1].1));
    }

    #[test]
    fn age_histogram_buckets_and_exclusions() {
        let mut g = graph(&[("A", "B")]);
        g.edges[0].earliest_date = "2010-05-31".parse().unwrap();
        let mut profiles = BTreeMap::new();
        profiles.insert(
            Qid::new("A"),
            EntityProfile {
                qid: Qid::new("A"),
                label: "A".to_owned(),
                birth_date: Some("1980-06-01".parse().unwrap()),
                nationalities: BTreeSet::new(),
                gender: crate::types::Gender::Unknown,
                party_memberships: vec![],
                domains: BTreeSet::new(),
                given_names: BTreeSet::new(),
                family_names: BTreeSet::new(),
            },
        );
        let hist = age_distribution(&g, &profiles);
        assert_eq!(hist.counts.get(&29), Some(&1));
        assert_eq!(hist.missing_birth_dates, 1);
    }
}
