//! Hypergraph families, line graphs, and the exact subset-DP counter for
//! successive vertex orderings: the independent combinatorial oracle for the
//! closed forms.
//!
//! Vertex labeling is deterministic: hyperedges are sorted lexicographically
//! and the line graph numbers its vertices in that order, so counts are
//! reproducible bit for bit.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Subset-DP limit: the table holds `2^n` counters of 16 bytes, and counts
/// up to `24!` stay well inside the 128-bit accumulators.
pub const DP_VERTEX_CAP: usize = 24;

/// A hypergraph as a vertex count plus a sorted, deduplicated edge list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    vertex_count: usize,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    pub fn new(vertex_count: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        let mut cleaned = Vec::with_capacity(edges.len());
        for mut e in edges {
            e.sort_unstable();
            e.dedup();
            if e.iter().any(|&v| v >= vertex_count) {
                return Err(Error::Domain(format!(
                    "edge {e:?} mentions a vertex outside 0..{vertex_count}"
                )));
            }
            cleaned.push(e);
        }
        cleaned.sort();
        cleaned.dedup();
        Ok(Self {
            vertex_count,
            edges: cleaned,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    /// The image under a vertex relabeling (a permutation of `0..n`).
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.vertex_count {
            return Err(Error::Domain("permutation length mismatch".into()));
        }
        let edges = self
            .edges
            .iter()
            .map(|e| e.iter().map(|&v| perm[v]).collect())
            .collect();
        Self::new(self.vertex_count, edges)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&HypergraphRecord {
            vertex_count: self.vertex_count,
            edges: self.edges.clone(),
        })
        .expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let rec: HypergraphRecord =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(rec.vertex_count, rec.edges)
    }
}

#[derive(Serialize, Deserialize)]
struct HypergraphRecord {
    vertex_count: usize,
    edges: Vec<Vec<usize>>,
}

/// All `C(n,3)` triples of an `n`-set.
pub fn complete_3uniform(n: i64) -> Result<Hypergraph> {
    if n < 3 {
        return Err(Error::Domain(format!("need n >= 3, got {n}")));
    }
    let n = n as usize;
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                edges.push(vec![a, b, c]);
            }
        }
    }
    Hypergraph::new(n, edges)
}

/// The 3-uniform hypergraph on `V1 (|V1| = m) union V2 (|V2| = n)` whose
/// edges meet `V1` in one vertex and `V2` in two. `V1` takes labels
/// `0..m`, `V2` takes `m..m+n`.
pub fn complete_bipartite_12(m: i64, n: i64) -> Result<Hypergraph> {
    if m < 1 || n < 2 {
        return Err(Error::Domain(format!(
            "need m >= 1 and n >= 2, got ({m}, {n})"
        )));
    }
    let (m, n) = (m as usize, n as usize);
    let mut edges = Vec::new();
    for a in 0..m {
        for b in 0..n {
            for c in b + 1..n {
                edges.push(vec![a, m + b, m + c]);
            }
        }
    }
    Hypergraph::new(m + n, edges)
}

/// A simple graph with per-vertex adjacency bitsets (64-bit blocks, so
/// construction is not limited to the DP cap).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    adj: Vec<Vec<u64>>,
}

impl Graph {
    pub fn new(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let blocks = vertex_count.div_ceil(64);
        let mut adj = vec![vec![0u64; blocks]; vertex_count];
        for &(u, v) in edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::Domain(format!(
                    "edge ({u}, {v}) outside 0..{vertex_count}"
                )));
            }
            if u == v {
                return Err(Error::Domain(format!("self-loop at {u}")));
            }
            adj[u][v / 64] |= 1 << (v % 64);
            adj[v][u / 64] |= 1 << (u % 64);
        }
        Ok(Self { vertex_count, adj })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u][v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_complete(&self) -> bool {
        (0..self.vertex_count).all(|u| self.degree(u) == self.vertex_count - 1)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.vertex_count {
            for v in u + 1..self.vertex_count {
                if self.is_adjacent(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphRecord {
            vertex_count: self.vertex_count,
            edges: self.edges(),
        })
        .expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let rec: GraphRecord = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(rec.vertex_count, &rec.edges)
    }
}

#[derive(Serialize, Deserialize)]
struct GraphRecord {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

/// The line graph: one vertex per hyperedge, adjacency iff the edges
/// intersect. Vertex `i` is the `i`-th edge in the sorted edge list.
pub fn line_graph(h: &Hypergraph) -> Graph {
    let edges = h.edges();
    let mut pairs = Vec::new();
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            if intersects(&edges[i], &edges[j]) {
                pairs.push((i, j));
            }
        }
    }
    Graph::new(edges.len(), &pairs).expect("line graph edges are in range")
}

fn intersects(a: &[usize], b: &[usize]) -> bool {
    // Both sorted.
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// Number of vertex orderings whose every prefix induces a connected
/// subgraph, by dynamic programming over subsets:
/// `f(S) = [S connected] * sum_{v in S} f(S - v)`, `f(empty) = 1`
/// (the empty set and singletons count as connected).
///
/// Refuses graphs above [`DP_VERTEX_CAP`] vertices; larger instances are the
/// formula route's job. A disconnected graph on two or more vertices counts
/// zero orderings, which the recurrence yields naturally.
pub fn count_successive_orderings(g: &Graph) -> Result<BigUint> {
    let n = g.vertex_count;
    if n > DP_VERTEX_CAP {
        return Err(Error::Capacity {
            vertices: n,
            cap: DP_VERTEX_CAP,
        });
    }
    if n == 0 {
        return Ok(BigUint::one());
    }
    // Flatten adjacency to u32 masks; intermediate counts fit u128 since
    // they are bounded by n! <= 24!.
    let adj: Vec<u32> = (0..n)
        .map(|u| {
            let mut mask = 0u32;
            for v in 0..n {
                if g.is_adjacent(u, v) {
                    mask |= 1 << v;
                }
            }
            mask
        })
        .collect();
    let full: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
    let mut f = vec![0u128; 1 << n];
    f[0] = 1;
    for s in 1..=full {
        let mut total: u128 = 0;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            total += f[(s & !(1u32 << v)) as usize];
        }
        if total != 0 && !connected_in(&adj, s) {
            total = 0;
        }
        f[s as usize] = total;
    }
    Ok(u128_to_biguint(f[full as usize]))
}

fn connected_in(adj: &[u32], s: u32) -> bool {
    let start = s.trailing_zeros() as usize;
    let mut reached = 1u32 << start;
    loop {
        let mut next = reached;
        let mut frontier = reached;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            next |= adj[v] & s;
        }
        if next == reached {
            return reached == s;
        }
        reached = next;
    }
}

fn u128_to_biguint(v: u128) -> BigUint {
    BigUint::from(v)
}

/// `count / |V|!` as an exact rational.
pub fn successive_probability(g: &Graph) -> Result<Rational> {
    let count = count_successive_orderings(g)?;
    let mut fact = BigUint::one();
    for i in 2..=g.vertex_count() as u64 {
        fact *= i;
    }
    Ok(BigRational::new(count.into(), fact.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};
    use proptest::prelude::*;

    #[test]
    fn family_sizes() {
        assert_eq!(complete_3uniform(3).unwrap().edges().len(), 1);
        assert_eq!(complete_3uniform(4).unwrap().edges().len(), 4);
        assert_eq!(complete_3uniform(6).unwrap().edges().len(), 20);
        assert!(complete_3uniform(2).is_err());
        assert_eq!(complete_bipartite_12(1, 2).unwrap().edges().len(), 1);
        assert_eq!(complete_bipartite_12(3, 4).unwrap().edges().len(), 18);
        assert_eq!(complete_bipartite_12(2, 3).unwrap().edges().len(), 6);
        assert!(complete_bipartite_12(0, 2).is_err());
    }

    #[test]
    fn line_graph_structure() {
        // Any two triples of a 4-set intersect.
        let g = line_graph(&complete_3uniform(4).unwrap());
        assert_eq!(g.vertex_count(), 4);
        assert!(g.is_complete());

        let tiny = line_graph(&complete_bipartite_12(1, 2).unwrap());
        assert_eq!(tiny.vertex_count(), 1);
        assert!(tiny.edges().is_empty());

        // Non-neighbors of a triple in a 6-set are the disjoint triples.
        let g6 = line_graph(&complete_3uniform(6).unwrap());
        assert_eq!(g6.vertex_count(), 20);
        for v in 0..20 {
            assert_eq!(g6.degree(v), 18);
        }
    }

    /// Exhaustive oracle: try all |V|! orderings.
    fn count_by_enumeration(g: &Graph) -> BigUint {
        fn connected(g: &Graph, set: &[usize]) -> bool {
            if set.len() <= 1 {
                return true;
            }
            let mut reached = vec![set[0]];
            let mut stack = vec![set[0]];
            while let Some(u) = stack.pop() {
                for &v in set {
                    if !reached.contains(&v) && g.is_adjacent(u, v) {
                        reached.push(v);
                        stack.push(v);
                    }
                }
            }
            reached.len() == set.len()
        }
        fn recurse(g: &Graph, prefix: &mut Vec<usize>, remaining: &mut Vec<usize>) -> u64 {
            if remaining.is_empty() {
                return 1;
            }
            let mut total = 0;
            for i in 0..remaining.len() {
                let v = remaining.remove(i);
                prefix.push(v);
                if connected(g, prefix) {
                    total += recurse(g, prefix, remaining);
                }
                prefix.pop();
                remaining.insert(i, v);
            }
            total
        }
        let mut rem: Vec<usize> = (0..g.vertex_count()).collect();
        BigUint::from(recurse(g, &mut Vec::new(), &mut rem))
    }

    #[test]
    fn small_counts() {
        // path a-b-c: abc, bac, bca, cba
        let path = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(count_successive_orderings(&path).unwrap(), BigUint::from(4u32));
        assert_eq!(count_by_enumeration(&path), BigUint::from(4u32));

        let single = Graph::new(1, &[]).unwrap();
        assert_eq!(count_successive_orderings(&single).unwrap(), BigUint::one());

        let k4 = line_graph(&complete_3uniform(4).unwrap());
        assert_eq!(count_successive_orderings(&k4).unwrap(), BigUint::from(24u32));

        let disconnected = Graph::new(3, &[(0, 1)]).unwrap();
        assert_eq!(
            count_successive_orderings(&disconnected).unwrap(),
            BigUint::from(0u32)
        );
    }

    #[test]
    fn capacity_refusal() {
        let g = line_graph(&complete_3uniform(7).unwrap());
        assert_eq!(g.vertex_count(), 35);
        assert!(matches!(
            count_successive_orderings(&g),
            Err(Error::Capacity { vertices: 35, cap: 24 })
        ));
    }

    #[test]
    fn probabilities() {
        // Any two 3-subsets of a 5-set intersect, so the line graph is complete.
        let g5 = line_graph(&complete_3uniform(5).unwrap());
        assert_eq!(successive_probability(&g5).unwrap(), rat(1));

        let g6 = line_graph(&complete_3uniform(6).unwrap());
        assert_eq!(successive_probability(&g6).unwrap(), ratio(18, 19));
        assert_eq!(
            count_successive_orderings(&g6).unwrap(),
            "2304854534062080000".parse::<BigUint>().unwrap()
        );
    }

    #[test]
    fn json_round_trips() {
        let h = complete_bipartite_12(2, 3).unwrap();
        assert_eq!(Hypergraph::from_json(&h.to_json()).unwrap(), h);
        let g = line_graph(&h);
        assert_eq!(Graph::from_json(&g.to_json()).unwrap(), g);
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (2..=max_n)
            .prop_flat_map(|n| {
                let pairs: Vec<(usize, usize)> = (0..n)
                    .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
                    .collect();
                (Just(n), prop::collection::vec(any::<bool>(), pairs.len()), Just(pairs))
            })
            .prop_map(|(n, mask, pairs)| {
                let chosen: Vec<(usize, usize)> = pairs
                    .into_iter()
                    .zip(mask)
                    .filter_map(|(p, keep)| keep.then_some(p))
                    .collect();
                Graph::new(n, &chosen).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn dp_matches_enumeration(g in arb_graph(6)) {
            prop_assert_eq!(count_successive_orderings(&g).unwrap(), count_by_enumeration(&g));
        }

        #[test]
        fn count_is_at_most_factorial_with_equality_iff_complete(g in arb_graph(7)) {
            let count = count_successive_orderings(&g).unwrap();
            let mut fact = BigUint::one();
            for i in 2..=g.vertex_count() as u64 { fact *= i; }
            prop_assert!(count <= fact.clone());
            prop_assert_eq!(count == fact, g.is_complete());
        }

        #[test]
        fn relabeling_preserves_the_count(seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let h = complete_bipartite_12(2, 3).unwrap();
            let mut perm: Vec<usize> = (0..h.vertex_count()).collect();
            perm.shuffle(&mut rng);
            let relabeled = h.relabeled(&perm).unwrap();
            let a = count_successive_orderings(&line_graph(&h)).unwrap();
            let b = count_successive_orderings(&line_graph(&relabeled)).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
