//! Recovering a weakly reversible deficiency-zero (WR₀) realization of a
//! polynomial system, and certifying by exhaustive search that it is the
//! only one.
//!
//! The candidate vertices are exactly the monomials of `f`, and the net
//! reaction vector at each vertex is its coefficient vector. A realization
//! is therefore a partition of the monomials into linkage classes plus, per
//! class, nonnegative rates reproducing those vectors. Within an affinely
//! independent class the rates are uniquely determined, so the search is
//! over partitions only.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Once;

use num_traits::Signed;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use rayon::prelude::*;
use thiserror::Error;

use crate::dynamics::{rhs_polynomial, PolynomialMap};
use crate::linalg::{self, is_affinely_independent, solve_linear, LinalgError, Matrix};
use crate::network::point_set_subspace_basis;
use crate::partition::set_partitions;
use crate::{Complex, MassActionSystem, RatVector, Rational};

/// Largest vertex count [`certify_uniqueness`] accepts by default.
pub const DEFAULT_MAX_VERTICES: usize = 10;

/// Environment variable capping the worker threads used by the search.
pub const THREADS_ENV: &str = "CRNKIT_THREADS";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizationError {
    #[error("{count} variable names for a polynomial map in {dim} variables")]
    VariableCount { count: usize, dim: usize },
    #[error("{count} candidate vertices exceeds the limit of {cap}; raise it with --max-vertices")]
    TooManyVertices { count: usize, cap: usize },
    #[error("{vertices} vertices but {vectors} net reaction vectors")]
    LengthMismatch { vertices: usize, vectors: usize },
    #[error("class vertices are affinely dependent")]
    AffinelyDependentClass,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A polynomial system `dx/dt = f(x)` with named variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OdeSystem {
    variable_names: Vec<String>,
    poly: PolynomialMap,
}

impl OdeSystem {
    pub fn new(variable_names: Vec<String>, poly: PolynomialMap) -> Result<Self, RealizationError> {
        if variable_names.len() != poly.dim() {
            return Err(RealizationError::VariableCount { count: variable_names.len(), dim: poly.dim() });
        }
        Ok(Self { variable_names, poly })
    }

    /// The system induced by mass-action kinetics, with species as variables.
    pub fn from_system(sys: &MassActionSystem) -> Self {
        Self { variable_names: sys.species().to_vec(), poly: rhs_polynomial(sys) }
    }

    pub fn variable_names(&self) -> &[String] {
        &self.variable_names
    }

    pub fn poly(&self) -> &PolynomialMap {
        &self.poly
    }

    pub fn dim(&self) -> usize {
        self.poly.dim()
    }
}

/// Why a partition (or a whole search) produced no realization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PruneRule {
    /// A class has fewer than two vertices.
    ClassTooSmall,
    /// A class is affinely dependent.
    AffinelyDependent,
    /// The net vectors of an `m`-vertex class do not have rank `m - 1`.
    NetVectorRank,
    /// The net-vector kernel of a class is not spanned by a strictly
    /// one-signed vector.
    KernelNotOneSigned,
    /// Class subspaces are not independent (deficiency would be positive).
    SubspacesDependent,
    /// Some rate solve is inconsistent or has a negative coordinate.
    RatesInfeasible,
    /// The positive-rate digraph of some class is not strongly connected.
    NotStronglyConnected,
    /// The assembled system is not weakly reversible.
    NotWeaklyReversible,
    /// The assembled system does not reproduce `f`.
    RhsMismatch,
}

impl PruneRule {
    pub fn name(self) -> &'static str {
        match self {
            PruneRule::ClassTooSmall => "class_too_small",
            PruneRule::AffinelyDependent => "affinely_dependent",
            PruneRule::NetVectorRank => "net_vector_rank",
            PruneRule::KernelNotOneSigned => "kernel_not_one_signed",
            PruneRule::SubspacesDependent => "subspaces_dependent",
            PruneRule::RatesInfeasible => "rates_infeasible",
            PruneRule::NotStronglyConnected => "not_strongly_connected",
            PruneRule::NotWeaklyReversible => "not_weakly_reversible",
            PruneRule::RhsMismatch => "rhs_mismatch",
        }
    }
}

impl fmt::Display for PruneRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FailureReason {
    /// `f` is identically zero.
    NoVertices,
    /// The linkage-class count implied by `f` cannot give every class two
    /// vertices.
    InfeasibleLinkageCount,
    /// No partition with the implied class count yields a realization.
    NoValidPartition,
}

impl FailureReason {
    pub fn name(self) -> &'static str {
        match self {
            FailureReason::NoVertices => "no_vertices",
            FailureReason::InfeasibleLinkageCount => "infeasible_linkage_count",
            FailureReason::NoValidPartition => "no_valid_partition",
        }
    }
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealizationResult {
    Found(MassActionSystem),
    Failed(FailureReason),
}

impl RealizationResult {
    pub fn system(&self) -> Option<&MassActionSystem> {
        match self {
            RealizationResult::Found(sys) => Some(sys),
            RealizationResult::Failed(_) => None,
        }
    }

    pub fn failure_reason(&self) -> Option<FailureReason> {
        match self {
            RealizationResult::Found(_) => None,
            RealizationResult::Failed(reason) => Some(*reason),
        }
    }
}

/// Outcome of an exhaustive search over every partition of the vertices
/// into classes of size at least two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniquenessCertificate {
    pub partitions_examined: usize,
    pub valid_count: usize,
    /// Partitions rejected, keyed by the first check that failed.
    pub pruned_by: BTreeMap<PruneRule, usize>,
    /// Every valid realization found, in partition order.
    pub witnesses: Vec<MassActionSystem>,
}

impl UniquenessCertificate {
    pub fn witness(&self) -> Option<&MassActionSystem> {
        self.witnesses.first()
    }

    /// More than one valid realization: contradicts uniqueness.
    pub fn is_violation(&self) -> bool {
        self.valid_count > 1
    }
}

/// Which checks a partition goes through.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// Cheap necessary conditions first, then the rate solve.
    Pruned,
    /// Only affine independence and the rate solve; the assembled system is
    /// then verified directly with the network module.
    Exhaustive,
}

/// Candidate vertices: the monomials of `f`, in canonical order.
pub fn extract_vertices(f: &OdeSystem) -> Vec<Complex> {
    f.poly.monomials().cloned().collect()
}

/// `|V| - rank(W)`, where `W` stacks the coefficient vectors of `f`, if it
/// lies in `1..=|V|/2`.
pub fn required_linkage_count(f: &OdeSystem) -> Option<usize> {
    let vectors: Vec<RatVector> = f.poly.terms().values().cloned().collect();
    let v = vectors.len();
    let rank = linalg::rank_of(f.dim(), &vectors).expect("coefficient vectors share the dimension");
    let ell = v - rank;
    (ell >= 1 && ell <= v / 2).then_some(ell)
}

type LocalEdges = Vec<(usize, usize, Rational)>;

fn solve_class(vertices: &[&Complex], net: &[&RatVector]) -> Result<LocalEdges, PruneRule> {
    let m = vertices.len();
    let n = vertices.first().map_or(0, |v| v.dim());
    let mut edges = Vec::new();
    for i in 0..m {
        let others: Vec<usize> = (0..m).filter(|&j| j != i).collect();
        let columns: Vec<RatVector> = others.iter().map(|&j| vertices[j].exponents() - vertices[i].exponents()).collect();
        let a = Matrix::from_columns(n, &columns).expect("complexes share the dimension");
        let kappa = solve_linear(&a, net[i]).expect("dimensions agree").ok_or(PruneRule::RatesInfeasible)?;
        for (&j, k) in others.iter().zip(kappa.iter()) {
            if k.is_negative() {
                return Err(PruneRule::RatesInfeasible);
            }
            if k.is_positive() {
                edges.push((i, j, k.clone()));
            }
        }
    }
    let mut graph = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..m).map(|_| graph.add_node(())).collect();
    for (i, j, _) in &edges {
        graph.add_edge(nodes[*i], nodes[*j], ());
    }
    if tarjan_scc(&graph).len() != 1 {
        return Err(PruneRule::NotStronglyConnected);
    }
    Ok(edges)
}

/// Rates within one class that reproduce the given net reaction vectors:
/// for each source `y_i`, the unique `κ_ij ≥ 0` with
/// `w_i = Σ_j κ_ij (y_j − y_i)`.
///
/// Returns `(source, target, rate)` over class-local indices, omitting zero
/// rates, or `None` when a solve is inconsistent, a rate is negative, or the
/// positive-rate digraph is not strongly connected.
pub fn solve_class_rates(class_vertices: &[Complex], net_vectors: &[RatVector]) -> Result<Option<LocalEdges>, RealizationError> {
    if class_vertices.len() != net_vectors.len() {
        return Err(RealizationError::LengthMismatch { vertices: class_vertices.len(), vectors: net_vectors.len() });
    }
    let points: Vec<RatVector> = class_vertices.iter().map(|c| c.exponents().clone()).collect();
    if !is_affinely_independent(&points)? {
        return Err(RealizationError::AffinelyDependentClass);
    }
    let vs: Vec<&Complex> = class_vertices.iter().collect();
    let ws: Vec<&RatVector> = net_vectors.iter().collect();
    Ok(solve_class(&vs, &ws).ok())
}

/// Vertices and net vectors of `f`, indexed consistently.
struct Instance<'a> {
    f: &'a OdeSystem,
    vertices: Vec<&'a Complex>,
    vectors: Vec<&'a RatVector>,
}

impl<'a> Instance<'a> {
    fn new(f: &'a OdeSystem) -> Self {
        let (vertices, vectors) = f.poly.terms().iter().unzip();
        Self { f, vertices, vectors }
    }

    fn class_is_one_signed_kernel(&self, class: &[usize]) -> Result<(), PruneRule> {
        let columns: Vec<RatVector> = class.iter().map(|&i| self.vectors[i].clone()).collect();
        let w = Matrix::from_columns(self.f.dim(), &columns).expect("vectors share the dimension");
        if w.rank() + 1 != class.len() {
            return Err(PruneRule::NetVectorRank);
        }
        let kernel = w.kernel_basis();
        let one_signed = kernel.len() == 1 && {
            let k = &kernel[0];
            k.iter().all(Signed::is_positive) || k.iter().all(Signed::is_negative)
        };
        if one_signed {
            Ok(())
        } else {
            Err(PruneRule::KernelNotOneSigned)
        }
    }

    fn class_points(&self, class: &[usize]) -> Vec<&'a Complex> {
        class.iter().map(|&i| self.vertices[i]).collect()
    }

    fn affinely_independent(&self, class: &[usize]) -> bool {
        let points: Vec<RatVector> = class.iter().map(|&i| self.vertices[i].exponents().clone()).collect();
        is_affinely_independent(&points).expect("classes are nonempty")
    }

    fn solve(&self, classes: &[Vec<usize>]) -> Result<MassActionSystem, PruneRule> {
        let mut reactions = Vec::new();
        for class in classes {
            let vs = self.class_points(class);
            let ws: Vec<&RatVector> = class.iter().map(|&i| self.vectors[i]).collect();
            for (i, j, k) in solve_class(&vs, &ws)? {
                reactions.push((vs[i].clone(), vs[j].clone(), k));
            }
        }
        Ok(MassActionSystem::from_reactions(self.f.variable_names.clone(), reactions)
            .expect("solved reactions are distinct, positive, and loop-free"))
    }

    fn evaluate(&self, classes: &[Vec<usize>], mode: SearchMode) -> Result<MassActionSystem, PruneRule> {
        match mode {
            SearchMode::Pruned => {
                for class in classes {
                    if class.len() < 2 {
                        return Err(PruneRule::ClassTooSmall);
                    }
                    if !self.affinely_independent(class) {
                        return Err(PruneRule::AffinelyDependent);
                    }
                    self.class_is_one_signed_kernel(class)?;
                }
                let bases: Vec<Vec<RatVector>> = classes
                    .iter()
                    .map(|c| point_set_subspace_basis(self.f.dim(), &self.class_points(c)).expect("classes are nonempty"))
                    .collect();
                if !linalg::are_subspaces_independent(&bases).expect("bases share the dimension") {
                    return Err(PruneRule::SubspacesDependent);
                }
                self.solve(classes)
            }
            SearchMode::Exhaustive => {
                for class in classes {
                    if class.len() < 2 {
                        return Err(PruneRule::ClassTooSmall);
                    }
                    if !self.affinely_independent(class) {
                        return Err(PruneRule::AffinelyDependent);
                    }
                }
                let sys = self.solve(classes)?;
                let net = sys.network();
                if net.deficiency() != 0 {
                    return Err(PruneRule::SubspacesDependent);
                }
                if !net.is_weakly_reversible() {
                    return Err(PruneRule::NotWeaklyReversible);
                }
                if rhs_polynomial(&sys) != self.f.poly {
                    return Err(PruneRule::RhsMismatch);
                }
                Ok(sys)
            }
        }
    }
}

/// Check one partition of `extract_vertices(f)` (blocks of vertex indices).
pub fn evaluate_partition(f: &OdeSystem, classes: &[Vec<usize>], mode: SearchMode) -> Result<MassActionSystem, PruneRule> {
    Instance::new(f).evaluate(classes, mode)
}

/// Size the global worker pool from `CRNKIT_THREADS`, once per process.
pub fn init_thread_pool() {
    static INIT: Once = Once::new();
    INIT.call_once(|| {
        if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()).filter(|&n| n > 0) {
            // A pool that already exists keeps its size.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    });
}

/// The WR₀ realization of `f`, searching only partitions into the implied
/// number of linkage classes. The first success in partition order wins.
pub fn find_wr0_realization(f: &OdeSystem) -> RealizationResult {
    init_thread_pool();
    if f.poly.is_zero() {
        return RealizationResult::Failed(FailureReason::NoVertices);
    }
    let Some(ell) = required_linkage_count(f) else {
        return RealizationResult::Failed(FailureReason::InfeasibleLinkageCount);
    };
    let inst = Instance::new(f);
    let partitions = set_partitions(inst.vertices.len(), 2, Some(ell));
    partitions
        .par_iter()
        .find_map_first(|p| inst.evaluate(p, SearchMode::Pruned).ok())
        .map_or(RealizationResult::Failed(FailureReason::NoValidPartition), RealizationResult::Found)
}

/// [`certify_uniqueness_with`] at the default vertex cap.
pub fn certify_uniqueness(f: &OdeSystem) -> Result<UniquenessCertificate, RealizationError> {
    certify_uniqueness_with(f, DEFAULT_MAX_VERTICES)
}

/// Check every partition of the vertices into classes of size at least two,
/// whatever the class count, without stopping at the first success.
pub fn certify_uniqueness_with(f: &OdeSystem, max_vertices: usize) -> Result<UniquenessCertificate, RealizationError> {
    init_thread_pool();
    let inst = Instance::new(f);
    let count = inst.vertices.len();
    if count > max_vertices {
        return Err(RealizationError::TooManyVertices { count, cap: max_vertices });
    }
    let mut cert = UniquenessCertificate {
        partitions_examined: 0,
        valid_count: 0,
        pruned_by: BTreeMap::new(),
        witnesses: Vec::new(),
    };
    if count == 0 {
        return Ok(cert);
    }
    let partitions = set_partitions(count, 2, None);
    let outcomes: Vec<_> = partitions.par_iter().map(|p| inst.evaluate(p, SearchMode::Exhaustive)).collect();
    cert.partitions_examined = outcomes.len();
    for outcome in outcomes {
        match outcome {
            Ok(sys) => {
                cert.valid_count += 1;
                cert.witnesses.push(sys);
            }
            Err(rule) => *cert.pruned_by.entry(rule).or_insert(0) += 1,
        }
    }
    Ok(cert)
}

/// Every partition (blocks of size ≥ 2) accepted under `mode`, with its
/// realization.
pub fn valid_partitions(f: &OdeSystem, mode: SearchMode) -> Vec<(Vec<Vec<usize>>, MassActionSystem)> {
    let inst = Instance::new(f);
    set_partitions(inst.vertices.len(), 2, None)
        .into_iter()
        .filter_map(|p| inst.evaluate(&p, mode).ok().map(|sys| (p, sys)))
        .collect()
}
