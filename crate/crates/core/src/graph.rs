//! Simple graphs, their edge ideals in `E`, and the closed forms tying the
//! linear strand of an edge ideal to clique counts.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::json;

use crate::exterior::{Monomial, MAX_VARS};
use crate::ideal::GradedIdeal;
use crate::resolution::{betti_table, conjecture_ideal_form, ResolutionOptions};
use crate::resonance::{r1_components_clique_union, r1_stable};
use crate::scalar::binomial;
use crate::{Error, Result};

/// A simple graph on the vertices `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    /// Rejects loops, repeated edges, and vertices outside `1..=n`.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_VARS {
            return Err(Error::InvalidArgument(format!("at most {MAX_VARS} vertices supported")));
        }
        let mut set = BTreeSet::new();
        for &(a, b) in edges {
            if a == b {
                return Err(Error::InvalidArgument(format!("loop at vertex {a}")));
            }
            if a == 0 || b == 0 || a > n || b > n {
                return Err(Error::InvalidArgument(format!("edge {{{a},{b}}} leaves the vertex set 1..{n}")));
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidArgument(format!("repeated edge {{{a},{b}}}")));
            }
        }
        Ok(Graph { n, edges: set })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|(a, b)| *a == v || *b == v).count()
    }

    /// Neighbourhoods as bitmasks over `1..=n` (bit `k - 1` for vertex `k`).
    fn adjacency(&self) -> Vec<u32> {
        let mut adj = vec![0u32; self.n + 1];
        for &(a, b) in &self.edges {
            adj[a] |= 1 << (b - 1);
            adj[b] |= 1 << (a - 1);
        }
        adj
    }

    /// `J(G) = (e_i ∧ e_j : {i, j} ∈ E(G))`.
    pub fn edge_ideal(&self) -> Result<GradedIdeal> {
        let gens: Vec<Monomial> = self
            .edges
            .iter()
            .map(|&(a, b)| Monomial::var(a).with(b))
            .collect();
        if gens.is_empty() {
            return GradedIdeal::zero(self.n);
        }
        GradedIdeal::from_monomial_list(self.n, &gens)
    }

    /// `k_i(G)`, the number of complete subgraphs on `i` vertices.
    pub fn clique_count(&self, i: usize) -> u64 {
        fn extend(adj: &[u32], candidates: u32, left: usize) -> u64 {
            if left == 0 {
                return 1;
            }
            let mut total = 0;
            let mut rest = candidates;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize + 1;
                rest &= rest - 1;
                // later vertices only, so each clique is counted once
                total += extend(adj, rest & adj[v], left - 1);
            }
            total
        }
        if i == 0 {
            return 1;
        }
        let all = if self.n == 0 { 0 } else { (1u32 << self.n) - 1 };
        extend(&self.adjacency(), all, i)
    }

    /// Some four vertices induce a 4-cycle.
    pub fn has_induced_4cycle(&self) -> bool {
        let adj = self.adjacency();
        let n = self.n;
        for a in 1..=n {
            for b in a + 1..=n {
                for c in b + 1..=n {
                    for d in c + 1..=n {
                        let vs = [a, b, c, d];
                        let set: u32 = vs.iter().map(|v| 1u32 << (v - 1)).sum();
                        let degrees: Vec<u32> = vs.iter().map(|&v| (adj[v] & set).count_ones()).collect();
                        if degrees.iter().all(|&x| x == 2) {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    /// The vertex blocks when `G` is a disjoint union of complete graphs on
    /// at least two vertices each.
    pub fn clique_blocks(&self) -> Option<Vec<Vec<usize>>> {
        let adj = self.adjacency();
        let mut seen = 0u32;
        let mut blocks = Vec::new();
        for v in 1..=self.n {
            if seen >> (v - 1) & 1 == 1 {
                continue;
            }
            let block = adj[v] | 1 << (v - 1);
            if block.count_ones() < 2 {
                return None;
            }
            let members = Monomial(block).indices();
            for &w in &members {
                if adj[w] | 1 << (w - 1) != block {
                    return None;
                }
            }
            seen |= block;
            blocks.push(members);
        }
        Some(blocks)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "n": self.n, "edges": self.edges.iter().map(|(a, b)| [a, b]).collect::<Vec<_>>() })
    }
}

/// `K_{m_1} ⊔ … ⊔ K_{m_k}` on consecutive vertex blocks.
pub fn disjoint_union_complete(sizes: &[usize]) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut start = 1;
    for &m in sizes {
        if m < 2 {
            return Err(Error::InvalidArgument(format!("clique sizes must be at least 2, got {m}")));
        }
        for a in start..start + m {
            for b in a + 1..start + m {
                edges.push((a, b));
            }
        }
        start += m;
    }
    Graph::new(start - 1, &edges)
}

fn require_no_induced_4cycle(g: &Graph) -> Result<()> {
    if g.has_induced_4cycle() {
        return Err(Error::InvalidArgument("the graph has an induced 4-cycle".into()));
    }
    Ok(())
}

/// `β^S_{i,i+2}(I(G)) = Σ_v C(deg v, i + 1) - k_{i+2}(G)` for graphs without
/// induced 4-cycles.
pub fn roth_terai_linear_strand(g: &Graph, i: usize) -> Result<u128> {
    require_no_induced_4cycle(g)?;
    let stars: u128 = (1..=g.n).map(|v| binomial(g.degree(v) as u64, i as u64 + 1)).sum();
    let cliques = g.clique_count(i + 2) as u128;
    stars
        .checked_sub(cliques)
        .ok_or_else(|| Error::Inconsistency(format!("negative linear strand entry at i = {i}")))
}

/// `β^E_{i,i+2}(J(G)) = Σ_{j=0}^{i} C(i + 1, j + 1) β^S_{j,j+2}(I(G))`.
pub fn transfer_to_exterior(g: &Graph, i: usize) -> Result<u128> {
    let mut total = 0;
    for j in 0..=i {
        total += binomial(i as u64 + 1, j as u64 + 1) * roth_terai_linear_strand(g, j)?;
    }
    Ok(total)
}

/// Both sides of `Σ_j C(i, j) C(r, j + 2) = C(r + i, i + 2)`.
pub fn binomial_convolution(i: u64, r: u64) -> (u128, u128) {
    let lhs = (0..=i).map(|j| binomial(i, j) * binomial(r, j + 2)).sum();
    (lhs, binomial(r + i, i + 2))
}

/// What a linear-strand comparison is run on.
#[derive(Clone, Debug)]
pub enum ConjectureSubject<'a> {
    /// A graph; component data comes from its clique blocks.
    Graph(&'a Graph),
    /// An ideal with component dimensions `h_r` supplied by the caller.
    Ideal {
        ideal: &'a GradedIdeal,
        h: Option<BTreeMap<usize, u64>>,
    },
}

/// Where the component dimensions `h_r` came from.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComponentSource {
    CliqueUnion,
    StableTheorem,
    #[serde(rename = "assumed-components")]
    Assumed,
}

impl ComponentSource {
    pub fn tag(&self) -> &'static str {
        match self {
            ComponentSource::CliqueUnion => "clique-union",
            ComponentSource::StableTheorem => "stable-theorem",
            ComponentSource::Assumed => "assumed-components",
        }
    }
}

/// One homological degree of a linear-strand comparison.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ConjectureRow {
    pub i: usize,
    /// `β_{i,i+2}(J)` from the resolution.
    pub resolution: u64,
    /// The closed chain through the polynomial ring, for graphs.
    pub transfer: Option<u128>,
    /// `(i + 1) Σ_r h_r C(r + i, i + 2)`.
    pub conjecture: u128,
    pub resolution_matches: bool,
    pub transfer_matches: Option<bool>,
}

/// Per-degree comparison over a finite range, which is evidence only.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ConjectureReport {
    pub h: BTreeMap<usize, u64>,
    pub source: ComponentSource,
    pub rows: Vec<ConjectureRow>,
    /// Smallest `i` from which every row in range agrees.
    pub agreement_from: Option<usize>,
    pub label: &'static str,
}

impl ConjectureReport {
    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(|r| r.resolution_matches && r.transfer_matches != Some(false))
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "h = {:?} ({}), {}\n{:>3} {:>12} {:>12} {:>12}\n",
            self.h, self.source.tag(), self.label, "i", "resolution", "transfer", "conjecture"
        );
        for r in &self.rows {
            let transfer = r.transfer.map_or("-".to_string(), |t| t.to_string());
            let mark = if r.resolution_matches { "=" } else { "≠" };
            out.push_str(&format!("{:>3} {:>12} {:>12} {:>12} {mark}\n", r.i, r.resolution, transfer, r.conjecture));
        }
        match self.agreement_from {
            Some(i) => out.push_str(&format!("agreement from i = {i} through the end of the range\n")),
            None => out.push_str("no agreement at the end of the range\n"),
        }
        out
    }
}

/// Compares the linear strand of `J` with the prediction from `h` for
/// `i` in `range`.
pub fn check_conjecture_b(
    subject: ConjectureSubject<'_>,
    range: std::ops::RangeInclusive<usize>,
    opts: &ResolutionOptions,
) -> Result<ConjectureReport> {
    let (ideal, graph, h, source) = match subject {
        ConjectureSubject::Graph(g) => {
            let components = r1_components_clique_union(g)?;
            let mut h = BTreeMap::new();
            for c in &components {
                *h.entry(c.len()).or_insert(0) += 1;
            }
            (g.edge_ideal()?, Some(g), h, ComponentSource::CliqueUnion)
        }
        ConjectureSubject::Ideal { ideal, h: Some(h) } => (ideal.clone(), None, h, ComponentSource::Assumed),
        ConjectureSubject::Ideal { ideal, h: None } => {
            let report = r1_stable(ideal)?;
            let mut h = BTreeMap::new();
            for c in &report.components {
                *h.entry(c.len()).or_insert(0) += 1;
            }
            (ideal.clone(), None, h, ComponentSource::StableTheorem)
        }
    };
    let i_max = *range.end();
    let table = betti_table(&ideal, i_max, opts)?;
    let mut rows = Vec::new();
    for i in range {
        let resolution = table.get(i, i + 2);
        let conjecture = conjecture_ideal_form(&h, i);
        let transfer = graph.map(|g| transfer_to_exterior(g, i)).transpose()?;
        rows.push(ConjectureRow {
            i,
            resolution,
            transfer,
            conjecture,
            resolution_matches: resolution as u128 == conjecture,
            transfer_matches: transfer.map(|t| t == conjecture),
        });
    }
    let agreement_from = rows
        .iter()
        .rposition(|r| !r.resolution_matches)
        .map_or(rows.first().map(|r| r.i), |k| rows.get(k + 1).map(|r| r.i));
    Ok(ConjectureReport {
        h,
        source,
        rows,
        agreement_from,
        label: "finite evidence",
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructions() {
        let g = disjoint_union_complete(&[3, 2]).unwrap();
        assert_eq!((g.n(), g.num_edges()), (5, 4));
        assert_eq!(disjoint_union_complete(&[2]).unwrap().num_edges(), 1);
        assert_eq!(disjoint_union_complete(&[4, 3, 2]).unwrap().num_edges(), 10);
        assert!(disjoint_union_complete(&[3, 1]).is_err());
        assert!(Graph::new(3, &[(1, 1)]).is_err());
        assert!(Graph::new(3, &[(1, 2), (2, 1)]).is_err());
        assert_eq!(g.clique_blocks(), Some(vec![vec![1, 2, 3], vec![4, 5]]));
        let path = Graph::new(3, &[(1, 2), (2, 3)]).unwrap();
        assert_eq!(path.clique_blocks(), None);
    }

    #[test]
    fn edge_ideals() {
        let k3 = disjoint_union_complete(&[3]).unwrap();
        assert!(k3.edge_ideal().unwrap().same_ideal(&GradedIdeal::from_monomials(3, &["12", "13", "23"]).unwrap()));
        assert_eq!(disjoint_union_complete(&[3, 2]).unwrap().edge_ideal().unwrap().generators().len(), 4);
        assert!(Graph::new(4, &[]).unwrap().edge_ideal().unwrap().is_zero());
    }

    #[test]
    fn cliques_and_cycles() {
        let g = disjoint_union_complete(&[3, 2]).unwrap();
        assert_eq!((g.clique_count(2), g.clique_count(3), g.clique_count(4)), (4, 1, 0));
        let k5 = disjoint_union_complete(&[5]).unwrap();
        for i in 1..=6 {
            assert_eq!(k5.clique_count(i) as u128, binomial(5, i as u64));
        }
        assert_eq!(disjoint_union_complete(&[4, 3]).unwrap().clique_count(3), 5);
        let c4 = Graph::new(4, &[(1, 2), (2, 3), (3, 4), (1, 4)]).unwrap();
        assert!(c4.has_induced_4cycle());
        assert!(!disjoint_union_complete(&[4]).unwrap().has_induced_4cycle());
        assert!(!g.has_induced_4cycle());
        assert!(roth_terai_linear_strand(&c4, 0).is_err());
    }

    #[test]
    fn closed_forms() {
        let g = disjoint_union_complete(&[3, 2]).unwrap();
        assert_eq!(roth_terai_linear_strand(&g, 0).unwrap(), 4);
        assert_eq!(roth_terai_linear_strand(&g, 1).unwrap(), 2);
        assert_eq!(roth_terai_linear_strand(&g, 5).unwrap(), 0);
        assert_eq!(transfer_to_exterior(&g, 0).unwrap(), 4);
        assert_eq!(transfer_to_exterior(&g, 1).unwrap(), 10);
        assert_eq!(transfer_to_exterior(&disjoint_union_complete(&[4, 3]).unwrap(), 0).unwrap(), 9);
        assert_eq!(binomial_convolution(3, 5), (56, 56));
        assert_eq!(binomial_convolution(0, 6), (15, 15));
        assert_eq!(binomial_convolution(4, 0), (0, 0));
        assert_eq!(binomial_convolution(4, 1), (0, 0));
    }

    #[test]
    fn clique_union_chain() {
        let g = disjoint_union_complete(&[3, 2]).unwrap();
        let r = check_conjecture_b(ConjectureSubject::Graph(&g), 0..=3, &ResolutionOptions::default()).unwrap();
        let strand: Vec<u64> = r.rows.iter().map(|x| x.resolution).collect();
        assert_eq!(strand, vec![4, 10, 18, 28]);
        assert!(r.all_agree());
        assert_eq!(r.agreement_from, Some(0));
        assert_eq!(r.label, "finite evidence");
    }

    #[test]
    fn stable_example_falls_short() {
        let j = GradedIdeal::from_monomials(5, &["12", "13", "14", "15", "234"]).unwrap();
        let r = check_conjecture_b(ConjectureSubject::Ideal { ideal: &j, h: None }, 0..=3, &ResolutionOptions::default()).unwrap();
        let pairs: Vec<(u64, u128)> = r.rows.iter().map(|x| (x.resolution, x.conjecture)).collect();
        assert_eq!(pairs, vec![(4, 10), (14, 40), (34, 105), (69, 224)]);
        assert_eq!(r.agreement_from, None);
        let k2 = disjoint_union_complete(&[2]).unwrap();
        let r = check_conjecture_b(ConjectureSubject::Graph(&k2), 0..=4, &ResolutionOptions::default()).unwrap();
        assert!(r.all_agree());
    }
}
