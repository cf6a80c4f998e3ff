//! Seeded random systems for property tests and the `random` subcommand.
//!
//! Every generator is deterministic for a given seed.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::{are_subspaces_independent, is_affinely_independent};
use crate::network::point_set_subspace_basis;
use crate::{Complex, MassActionSystem, RatVector, Rational};

/// Rejection-sampling budget for vertex placement.
const MAX_TRIES: usize = 10_000;
/// Coordinates of generated WR₀ vertices lie in `0..=VERTEX_RANGE`.
const VERTEX_RANGE: i64 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("need at least one species")]
    NoSpecies,
    #[error("need at least one linkage class")]
    NoClasses,
    #[error("{classes} classes requested but {sizes} class sizes given")]
    ClassCountMismatch { classes: usize, sizes: usize },
    #[error("class size {0} is below 2")]
    ClassTooSmall(usize),
    #[error("{total} vertices in {classes} classes need dimension {needed}, only {species} species")]
    DimensionTooSmall { total: usize, classes: usize, needed: usize, species: usize },
    #[error("cannot place {vertices} distinct vertices in the sampling box")]
    TooManyVertices { vertices: usize },
    #[error("cannot fit {edges} edges on {vertices} vertices")]
    TooManyEdges { edges: usize, vertices: usize },
    #[error("no admissible vertex placement found after {0} attempts")]
    Exhausted(usize),
}

fn species_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("X{i}")).collect()
}

/// A positive rate `p/q` with `p` in `1..=9` and `q` in `1..=4`.
pub fn random_rate<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(rng.gen_range(1..=9i64).into(), rng.gen_range(1..=4i64).into())
}

fn random_point<R: Rng>(rng: &mut R, n: usize, max: i64) -> Complex {
    Complex::from_integers(&(0..n).map(|_| rng.gen_range(0..=max)).collect::<Vec<_>>())
}

fn distinct_points<R: Rng>(rng: &mut R, n: usize, count: usize, max: i64) -> Vec<Complex> {
    let mut points: Vec<Complex> = Vec::with_capacity(count);
    while points.len() < count {
        let p = random_point(rng, n, max);
        if !points.contains(&p) {
            points.push(p);
        }
    }
    points
}

fn box_capacity(n: usize, max: i64) -> usize {
    let side = (max + 1) as usize;
    side.checked_pow(n as u32).unwrap_or(usize::MAX)
}

/// A random weakly reversible deficiency-zero system over species
/// `X1..Xn`.
///
/// Vertices have integer coordinates in `[0, 4]`; each class is affinely
/// independent and the class subspaces are independent. Each class carries
/// a random Hamiltonian cycle plus every other ordered pair with probability
/// 1/3, so it is strongly connected.
pub fn random_wr0_system(
    n_species: usize,
    n_classes: usize,
    class_sizes: &[usize],
    seed: u64,
) -> Result<MassActionSystem, GenerateError> {
    if n_species == 0 {
        return Err(GenerateError::NoSpecies);
    }
    if n_classes == 0 {
        return Err(GenerateError::NoClasses);
    }
    if class_sizes.len() != n_classes {
        return Err(GenerateError::ClassCountMismatch { classes: n_classes, sizes: class_sizes.len() });
    }
    if let Some(&m) = class_sizes.iter().find(|&&m| m < 2) {
        return Err(GenerateError::ClassTooSmall(m));
    }
    let total: usize = class_sizes.iter().sum();
    if total > n_species + n_classes {
        return Err(GenerateError::DimensionTooSmall {
            total,
            classes: n_classes,
            needed: total - n_classes,
            species: n_species,
        });
    }
    if total > box_capacity(n_species, VERTEX_RANGE) {
        return Err(GenerateError::TooManyVertices { vertices: total });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let classes = (0..MAX_TRIES)
        .find_map(|_| {
            let points = distinct_points(&mut rng, n_species, total, VERTEX_RANGE);
            let mut classes = Vec::with_capacity(n_classes);
            let mut rest = points.as_slice();
            for &m in class_sizes {
                let (class, tail) = rest.split_at(m);
                classes.push(class.to_vec());
                rest = tail;
            }
            admissible(n_species, &classes).then_some(classes)
        })
        .ok_or(GenerateError::Exhausted(MAX_TRIES))?;

    let mut reactions = Vec::new();
    for class in &classes {
        let m = class.len();
        let mut order: Vec<usize> = (0..m).collect();
        order.shuffle(&mut rng);
        let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
        for i in 0..m {
            edges.insert((order[i], order[(i + 1) % m]));
        }
        for i in 0..m {
            for j in 0..m {
                if i != j && !edges.contains(&(i, j)) && rng.gen_bool(1.0 / 3.0) {
                    edges.insert((i, j));
                }
            }
        }
        for &(i, j) in &edges {
            reactions.push((class[i].clone(), class[j].clone(), random_rate(&mut rng)));
        }
    }
    let sys = MassActionSystem::from_reactions(species_names(n_species), reactions).expect("generated reactions are valid");
    debug_assert!(sys.network().deficiency() == 0 && sys.network().is_weakly_reversible());
    Ok(sys)
}

fn admissible(n: usize, classes: &[Vec<Complex>]) -> bool {
    let independent = classes.iter().all(|class| {
        let pts: Vec<RatVector> = class.iter().map(|c| c.exponents().clone()).collect();
        is_affinely_independent(&pts).expect("classes are nonempty")
    });
    independent && {
        let bases: Vec<Vec<RatVector>> = classes
            .iter()
            .map(|class| point_set_subspace_basis(n, &class.iter().collect::<Vec<_>>()).expect("classes are nonempty"))
            .collect();
        are_subspaces_independent(&bases).expect("bases share the dimension")
    }
}

/// An arbitrary valid system: `n_edges` random distinct reactions among
/// `n_vertices` random complexes with coordinates in `[0, 2]`, random rates.
///
/// Complexes left without a reaction are dropped, so the result may have
/// fewer vertices. The small box makes dependent classes common.
pub fn random_network(n_species: usize, n_vertices: usize, n_edges: usize, seed: u64) -> Result<MassActionSystem, GenerateError> {
    if n_species == 0 {
        return Err(GenerateError::NoSpecies);
    }
    if n_vertices > box_capacity(n_species, 2) {
        return Err(GenerateError::TooManyVertices { vertices: n_vertices });
    }
    if n_edges == 0 || n_edges > n_vertices * n_vertices.saturating_sub(1) {
        return Err(GenerateError::TooManyEdges { edges: n_edges, vertices: n_vertices });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = distinct_points(&mut rng, n_species, n_vertices, 2);
    let mut pairs: Vec<(usize, usize)> = (0..n_vertices)
        .flat_map(|i| (0..n_vertices).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    pairs.shuffle(&mut rng);
    let reactions = pairs[..n_edges]
        .iter()
        .map(|&(i, j)| (points[i].clone(), points[j].clone(), random_rate(&mut rng)))
        .collect();
    Ok(MassActionSystem::from_reactions(species_names(n_species), reactions).expect("generated reactions are valid"))
}

/// Replace `y → y'` (rate κ) by `y → (y + y')/2` (rate 2κ), merging with an
/// existing reaction of that shape. The result is dynamically equivalent.
pub fn split_reaction(sys: &MassActionSystem, edge: usize) -> MassActionSystem {
    let two = Rational::from_integer(2.into());
    let mut reactions: BTreeMap<(Complex, Complex), Rational> =
        sys.reactions().map(|(s, t, k)| ((s.clone(), t.clone()), k.clone())).collect();
    let (s, t, k) = sys.reactions().nth(edge).expect("edge index in range");
    let midpoint = Complex::new((s.exponents() + t.exponents()).scale(&(Rational::from_integer(1.into()) / &two)))
        .expect("midpoint of non-negative points is non-negative");
    reactions.remove(&(s.clone(), t.clone()));
    *reactions.entry((s.clone(), midpoint)).or_insert_with(|| Rational::from_integer(0.into())) += k * &two;
    MassActionSystem::from_reactions(
        sys.species().to_vec(),
        reactions.into_iter().map(|((s, t), k)| (s, t, k)).collect(),
    )
    .expect("splitting keeps the system valid")
}

/// [`split_reaction`] on a randomly chosen edge.
pub fn random_split<R: Rng>(sys: &MassActionSystem, rng: &mut R) -> MassActionSystem {
    split_reaction(sys, rng.gen_range(0..sys.rates().len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{is_dynamically_equivalent, rhs_polynomial};
    use crate::fixtures;

    #[test]
    fn forced_shapes() {
        let sys = random_wr0_system(1, 1, &[2], 7).unwrap();
        assert_eq!(sys.network().vertices().len(), 2);
        assert_eq!(sys.rates().len(), 2);
        assert_eq!(sys.network().deficiency(), 0);

        for seed in 0..20 {
            let sys = random_wr0_system(3, 2, &[2, 2], seed).unwrap();
            let report = sys.network().deficiency_zero_diagnosis();
            assert!(report.is_wr0(), "seed {seed}");
            assert_eq!(report.linkage_classes.len(), 2);
        }
    }

    #[test]
    fn infeasible_parameters() {
        assert!(matches!(random_wr0_system(2, 1, &[4], 0), Err(GenerateError::DimensionTooSmall { .. })));
        assert!(matches!(random_wr0_system(2, 1, &[1], 0), Err(GenerateError::ClassTooSmall(1))));
        assert!(matches!(random_wr0_system(2, 2, &[2], 0), Err(GenerateError::ClassCountMismatch { .. })));
        assert!(random_wr0_system(0, 1, &[2], 0).is_err());
    }

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(random_wr0_system(4, 2, &[3, 3], 11).unwrap(), random_wr0_system(4, 2, &[3, 3], 11).unwrap());
        assert_eq!(random_network(2, 5, 6, 3).unwrap(), random_network(2, 5, 6, 3).unwrap());
    }

    #[test]
    fn splitting_preserves_dynamics() {
        for (name, sys) in fixtures::all() {
            for edge in 0..sys.rates().len() {
                let split = split_reaction(&sys, edge);
                assert!(is_dynamically_equivalent(&sys, &split).unwrap(), "{name} edge {edge}");
                assert_eq!(rhs_polynomial(&sys), rhs_polynomial(&split));
            }
        }
    }

    #[test]
    fn splitting_merges_into_an_existing_reaction() {
        // 0 -> 2X with the midpoint reaction 0 -> X already present
        let sys = crate::format::crn::parse_network("0 -> 2 X ; k = 1\n0 -> X ; k = 3\nX -> 0 ; k = 1").unwrap();
        let edge = sys.reactions().position(|(_, t, _)| *t == Complex::from_integers(&[2])).unwrap();
        let split = split_reaction(&sys, edge);
        assert_eq!(split.rates().len(), 2);
        assert!(split.rates().contains(&Rational::from_integer(5.into())));
    }
}
