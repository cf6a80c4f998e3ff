//! Reaction networks: complexes, reactions, and the structural invariants
//! computed from them (linkage classes, weak reversibility, stoichiometric
//! subspaces, deficiency).

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::linalg::{self, LinalgError};
use crate::{RatVector, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkError {
    #[error("complex {complex} has {found} coordinates but the network has {expected} species")]
    DimensionMismatch { complex: String, expected: usize, found: usize },
    #[error("complex {0} has a negative exponent")]
    NegativeExponent(String),
    #[error("species `{0}` is declared twice")]
    DuplicateSpecies(String),
    #[error("complex {0} appears twice in the vertex list")]
    DuplicateVertex(String),
    #[error("reaction {from} -> {to} appears twice")]
    DuplicateEdge { from: String, to: String },
    #[error("self-loop at complex {0}")]
    SelfLoop(String),
    #[error("complex {0} is isolated: it is not incident to any reaction")]
    IsolatedVertex(String),
    #[error("vertex index {0} is out of range")]
    VertexOutOfRange(usize),
    #[error("rate of {from} -> {to} must be positive, got {rate}")]
    NonPositiveRate { from: String, to: String, rate: Rational },
    #[error("expected {expected} rate constants, got {found}")]
    RateCountMismatch { expected: usize, found: usize },
    #[error("vertex subset is empty")]
    EmptyClass,
    #[error("vertex subset {0:?} is not a linkage class")]
    NotALinkageClass(Vec<usize>),
    #[error("species lists differ: {0}")]
    SpeciesMismatch(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A vertex of a reaction graph: a point of non-negative exponents, one per
/// species. `2X + Y` over species `[X, Y]` is `(2, 1)`.
///
/// Ordering is lexicographic on the exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Complex(RatVector);

impl Complex {
    pub fn new(exponents: RatVector) -> Result<Self, NetworkError> {
        if exponents.iter().any(Signed::is_negative) {
            return Err(NetworkError::NegativeExponent(exponents.to_string()));
        }
        Ok(Self(exponents))
    }

    pub fn from_integers(exponents: &[i64]) -> Self {
        Self(exponents.iter().map(|&e| {
            assert!(e >= 0, "negative exponent {e}");
            Rational::from_integer(e.into())
        }).collect())
    }

    pub fn zero(dim: usize) -> Self {
        Self(RatVector::zeros(dim))
    }

    pub fn exponents(&self) -> &RatVector {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|e| e.is_integer())
    }

    /// Render as a species combination, e.g. `2 X + 1/2 Y` or `0`.
    pub fn display<'a>(&'a self, species: &'a [String]) -> ComplexDisplay<'a> {
        ComplexDisplay { complex: self, species }
    }
}

pub struct ComplexDisplay<'a> {
    complex: &'a Complex,
    species: &'a [String],
}

impl fmt::Display for ComplexDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, coeff) in self.complex.0.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let name = self.species.get(i).map(String::as_str).unwrap_or("?");
            if coeff == &Rational::from_integer(1.into()) {
                write!(f, "{name}")?;
            } else {
                write!(f, "{coeff} {name}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// A directed edge between two vertex indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Reaction {
    pub source: usize,
    pub target: usize,
}

/// A reaction graph embedded in exponent space.
///
/// Always canonical: vertices sorted lexicographically, edges sorted by
/// `(source, target)`. Two networks describing the same graph compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReactionNetwork {
    species: Vec<String>,
    vertices: Vec<Complex>,
    edges: Vec<Reaction>,
}

/// Structural summary of a network, including which of the two conditions
/// characterizing deficiency zero hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkReport {
    pub linkage_classes: Vec<Vec<usize>>,
    pub weakly_reversible: bool,
    pub dim_s: usize,
    pub deficiency: i64,
    pub class_deficiencies: Vec<i64>,
    pub affinely_independent_classes: Vec<bool>,
    pub class_subspaces_independent: bool,
}

impl NetworkReport {
    pub fn is_wr0(&self) -> bool {
        self.weakly_reversible && self.deficiency == 0
    }
}

fn check_species(species: &[String]) -> Result<(), NetworkError> {
    let mut seen = BTreeSet::new();
    for s in species {
        if !seen.insert(s) {
            return Err(NetworkError::DuplicateSpecies(s.clone()));
        }
    }
    Ok(())
}

/// Validate a graph and bring it into canonical order, carrying a payload
/// (rate constant or unit) along with each edge.
fn canonicalize<P>(
    species: &[String],
    vertices: Vec<Complex>,
    edges: Vec<(usize, usize, P)>,
) -> Result<(Vec<Complex>, Vec<(Reaction, P)>), NetworkError> {
    check_species(species)?;
    let n = species.len();
    let name = |c: &Complex| c.display(species).to_string();
    for v in &vertices {
        if v.dim() != n {
            return Err(NetworkError::DimensionMismatch { complex: v.exponents().to_string(), expected: n, found: v.dim() });
        }
    }
    let mut order: Vec<usize> = (0..vertices.len()).collect();
    order.sort_by(|&a, &b| vertices[a].cmp(&vertices[b]));
    for w in order.windows(2) {
        if vertices[w[0]] == vertices[w[1]] {
            return Err(NetworkError::DuplicateVertex(name(&vertices[w[0]])));
        }
    }
    let mut new_index = vec![0; vertices.len()];
    for (new, &old) in order.iter().enumerate() {
        new_index[old] = new;
    }

    let mut incident = vec![false; vertices.len()];
    let mut out = Vec::with_capacity(edges.len());
    for (s, t, payload) in edges {
        for idx in [s, t] {
            if idx >= vertices.len() {
                return Err(NetworkError::VertexOutOfRange(idx));
            }
        }
        if s == t {
            return Err(NetworkError::SelfLoop(name(&vertices[s])));
        }
        incident[s] = true;
        incident[t] = true;
        out.push((Reaction { source: new_index[s], target: new_index[t] }, payload));
    }
    if let Some(i) = incident.iter().position(|&b| !b) {
        return Err(NetworkError::IsolatedVertex(name(&vertices[i])));
    }

    let sorted_vertices: Vec<Complex> = order.into_iter().map(|i| vertices[i].clone()).collect();
    out.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    for w in out.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(NetworkError::DuplicateEdge {
                from: name(&sorted_vertices[w[0].0.source]),
                to: name(&sorted_vertices[w[0].0.target]),
            });
        }
    }
    Ok((sorted_vertices, out))
}

impl ReactionNetwork {
    /// Build a network from an explicit vertex list and index pairs.
    pub fn new(species: Vec<String>, vertices: Vec<Complex>, edges: Vec<(usize, usize)>) -> Result<Self, NetworkError> {
        let (vertices, edges) = canonicalize(&species, vertices, edges.into_iter().map(|(s, t)| (s, t, ())).collect())?;
        Ok(Self { species, vertices, edges: edges.into_iter().map(|(r, ())| r).collect() })
    }

    pub fn species(&self) -> &[String] {
        &self.species
    }

    pub fn num_species(&self) -> usize {
        self.species.len()
    }

    pub fn vertices(&self) -> &[Complex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Reaction] {
        &self.edges
    }

    pub fn vertex_index(&self, complex: &Complex) -> Option<usize> {
        self.vertices.binary_search(complex).ok()
    }

    pub fn reaction_vector(&self, edge: &Reaction) -> RatVector {
        self.vertices[edge.target].exponents() - self.vertices[edge.source].exponents()
    }

    /// Connected components of the underlying undirected graph. Each class is
    /// sorted and classes are ordered by their smallest member.
    pub fn linkage_classes(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.vertices.len());
        for e in &self.edges {
            uf.union(e.source, e.target);
        }
        let labels = uf.into_labeling();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut class_of_label = std::collections::HashMap::new();
        for (v, label) in labels.into_iter().enumerate() {
            let idx = *class_of_label.entry(label).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[idx].push(v);
        }
        classes
    }

    /// Every linkage class is strongly connected. Strong components refine
    /// linkage classes, so it suffices to compare their counts.
    pub fn is_weakly_reversible(&self) -> bool {
        let mut g = DiGraph::<(), ()>::with_capacity(self.vertices.len(), self.edges.len());
        let nodes: Vec<_> = (0..self.vertices.len()).map(|_| g.add_node(())).collect();
        for e in &self.edges {
            g.add_edge(nodes[e.source], nodes[e.target], ());
        }
        tarjan_scc(&g).len() == self.linkage_classes().len()
    }

    /// A basis of the span of all reaction vectors: the greedy independent
    /// subset in canonical edge order.
    pub fn stoichiometric_subspace_basis(&self) -> Vec<RatVector> {
        let vectors: Vec<RatVector> = self.edges.iter().map(|e| self.reaction_vector(e)).collect();
        let keep = linalg::independent_subset(self.num_species(), &vectors).expect("reaction vectors share the species dimension");
        keep.into_iter().map(|i| vectors[i].clone()).collect()
    }

    pub fn dim_s(&self) -> usize {
        self.stoichiometric_subspace_basis().len()
    }

    /// A basis of `span{y_j - y_i : y_i, y_j in class}`, built from the
    /// differences to the first vertex of the class.
    pub fn class_subspace_basis(&self, class: &[usize]) -> Result<Vec<RatVector>, NetworkError> {
        if let Some(&bad) = class.iter().find(|&&i| i >= self.vertices.len()) {
            return Err(NetworkError::VertexOutOfRange(bad));
        }
        let points: Vec<&Complex> = class.iter().map(|&i| &self.vertices[i]).collect();
        point_set_subspace_basis(self.num_species(), &points)
    }

    pub fn deficiency(&self) -> i64 {
        self.vertices.len() as i64 - self.linkage_classes().len() as i64 - self.dim_s() as i64
    }

    /// `|V_i| - 1 - dim S(V_i)` for a linkage class `V_i`.
    pub fn class_deficiency(&self, class: &[usize]) -> Result<i64, NetworkError> {
        let mut sorted = class.to_vec();
        sorted.sort_unstable();
        if !self.linkage_classes().contains(&sorted) {
            return Err(NetworkError::NotALinkageClass(class.to_vec()));
        }
        Ok(self.class_deficiency_unchecked(&sorted))
    }

    fn class_deficiency_unchecked(&self, class: &[usize]) -> i64 {
        let dim = self.class_subspace_basis(class).map(|b| b.len()).unwrap_or(0);
        class.len() as i64 - 1 - dim as i64
    }

    pub fn deficiency_zero_diagnosis(&self) -> NetworkReport {
        let linkage_classes = self.linkage_classes();
        let class_deficiencies: Vec<i64> = linkage_classes.iter().map(|c| self.class_deficiency_unchecked(c)).collect();
        let affinely_independent_classes = linkage_classes
            .iter()
            .map(|c| {
                let pts: Vec<RatVector> = c.iter().map(|&i| self.vertices[i].exponents().clone()).collect();
                linalg::is_affinely_independent(&pts).expect("linkage classes are nonempty")
            })
            .collect();
        let bases: Vec<Vec<RatVector>> = linkage_classes
            .iter()
            .map(|c| self.class_subspace_basis(c).expect("linkage class indices are valid"))
            .collect();
        let class_subspaces_independent = linalg::are_subspaces_independent(&bases).expect("bases share the species dimension");
        NetworkReport {
            weakly_reversible: self.is_weakly_reversible(),
            dim_s: self.dim_s(),
            deficiency: self.deficiency(),
            class_deficiencies,
            affinely_independent_classes,
            class_subspaces_independent,
            linkage_classes,
        }
    }
}

/// Basis of the subspace spanned by differences of a point set, as the
/// greedy independent subset of `p_j - p_0`.
pub fn point_set_subspace_basis(dim: usize, points: &[&Complex]) -> Result<Vec<RatVector>, NetworkError> {
    let (first, rest) = points.split_first().ok_or(NetworkError::EmptyClass)?;
    let diffs: Vec<RatVector> = rest.iter().map(|p| p.exponents() - first.exponents()).collect();
    let keep = linalg::independent_subset(dim, &diffs)?;
    Ok(keep.into_iter().map(|i| diffs[i].clone()).collect())
}

/// A reaction network with one positive rate constant per edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MassActionSystem {
    network: ReactionNetwork,
    rates: Vec<Rational>,
}

impl MassActionSystem {
    /// `rates[i]` belongs to `network.edges()[i]`.
    pub fn new(network: ReactionNetwork, rates: Vec<Rational>) -> Result<Self, NetworkError> {
        if rates.len() != network.edges.len() {
            return Err(NetworkError::RateCountMismatch { expected: network.edges.len(), found: rates.len() });
        }
        for (e, k) in network.edges.iter().zip(&rates) {
            if !k.is_positive() {
                return Err(NetworkError::NonPositiveRate {
                    from: network.vertices[e.source].display(&network.species).to_string(),
                    to: network.vertices[e.target].display(&network.species).to_string(),
                    rate: k.clone(),
                });
            }
        }
        Ok(Self { network, rates })
    }

    /// Build from index-based reactions over an explicit vertex list.
    pub fn from_indexed(
        species: Vec<String>,
        vertices: Vec<Complex>,
        reactions: Vec<(usize, usize, Rational)>,
    ) -> Result<Self, NetworkError> {
        let (vertices, edges) = canonicalize(&species, vertices, reactions)?;
        let (edges, rates): (Vec<Reaction>, Vec<Rational>) = edges.into_iter().unzip();
        Self::new(ReactionNetwork { species, vertices, edges }, rates)
    }

    /// Build from `(source, target, rate)` triples. The vertex set is the set
    /// of endpoints, so no vertex can be isolated.
    pub fn from_reactions(species: Vec<String>, reactions: Vec<(Complex, Complex, Rational)>) -> Result<Self, NetworkError> {
        let mut vertices: Vec<Complex> = reactions.iter().flat_map(|(s, t, _)| [s.clone(), t.clone()]).collect();
        vertices.sort();
        vertices.dedup();
        let indexed = reactions
            .into_iter()
            .map(|(s, t, k)| {
                let si = vertices.binary_search(&s).expect("endpoint collected above");
                let ti = vertices.binary_search(&t).expect("endpoint collected above");
                (si, ti, k)
            })
            .collect();
        Self::from_indexed(species, vertices, indexed)
    }

    pub fn network(&self) -> &ReactionNetwork {
        &self.network
    }

    pub fn rates(&self) -> &[Rational] {
        &self.rates
    }

    pub fn species(&self) -> &[String] {
        &self.network.species
    }

    pub fn num_species(&self) -> usize {
        self.network.num_species()
    }

    /// `(source, target, rate)` in canonical edge order.
    pub fn reactions(&self) -> impl Iterator<Item = (&Complex, &Complex, &Rational)> + '_ {
        self.network
            .edges
            .iter()
            .zip(&self.rates)
            .map(|(e, k)| (&self.network.vertices[e.source], &self.network.vertices[e.target], k))
    }

    /// Same system with the rate of edge `edge` replaced.
    pub fn with_rate(&self, edge: usize, rate: Rational) -> Result<Self, NetworkError> {
        let mut rates = self.rates.clone();
        if edge >= rates.len() {
            return Err(NetworkError::VertexOutOfRange(edge));
        }
        rates[edge] = rate;
        Self::new(self.network.clone(), rates)
    }

    /// Re-express the system over `order`, which must be a permutation of the
    /// current species names.
    pub fn with_species_order(&self, order: &[String]) -> Result<Self, NetworkError> {
        let current = &self.network.species;
        let mut a: Vec<&String> = current.iter().collect();
        let mut b: Vec<&String> = order.iter().collect();
        a.sort();
        b.sort();
        if a != b {
            return Err(NetworkError::SpeciesMismatch(format!("[{}] vs [{}]", current.join(" "), order.join(" "))));
        }
        let perm: Vec<usize> = order.iter().map(|s| current.iter().position(|c| c == s).expect("checked above")).collect();
        let remap = |c: &Complex| Complex(perm.iter().map(|&i| c.exponents()[i].clone()).collect());
        let reactions = self.reactions().map(|(s, t, k)| (remap(s), remap(t), k.clone())).collect();
        Self::from_reactions(order.to_vec(), reactions)
    }
}
