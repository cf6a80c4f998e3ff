//! Small reference systems used throughout the tests and documentation.
//!
//! Each one is stored as a `.crn` file under `data/` and parsed on demand.
//! Pairs that share a right-hand side are grouped in [`equivalent_groups`].

use crate::format::crn::parse_network;
use crate::{Complex, MassActionSystem, Rational};

macro_rules! fixture {
    ($name:ident, $file:literal) => {
        pub fn $name() -> MassActionSystem {
            parse_network(include_str!(concat!("../data/", $file))).expect(concat!("fixture ", $file, " parses"))
        }
    };
}

fixture!(cubic_reversible_pair, "cubic_reversible_pair.crn");
fixture!(cubic_three_vertex_chain, "cubic_three_vertex_chain.crn");
fixture!(cubic_split_irreversible, "cubic_split_irreversible.crn");
fixture!(planar_irreversible_split, "planar_irreversible_split.crn");
fixture!(planar_irreversible_merge, "planar_irreversible_merge.crn");
fixture!(diagonal_reversible_pair, "diagonal_reversible_pair.crn");
fixture!(diagonal_three_vertex_chain, "diagonal_three_vertex_chain.crn");
fixture!(line_two_pairs, "line_two_pairs.crn");
fixture!(line_four_cycle, "line_four_cycle.crn");
fixture!(square_two_diagonals, "square_two_diagonals.crn");
fixture!(square_cycle, "square_cycle.crn");
fixture!(line_nested_pairs, "line_nested_pairs.crn");
fixture!(line_crossed_pairs, "line_crossed_pairs.crn");

/// Every named fixture, in a fixed order.
pub fn all() -> Vec<(&'static str, MassActionSystem)> {
    vec![
        ("cubic_reversible_pair", cubic_reversible_pair()),
        ("cubic_three_vertex_chain", cubic_three_vertex_chain()),
        ("cubic_split_irreversible", cubic_split_irreversible()),
        ("planar_irreversible_split", planar_irreversible_split()),
        ("planar_irreversible_merge", planar_irreversible_merge()),
        ("diagonal_reversible_pair", diagonal_reversible_pair()),
        ("diagonal_three_vertex_chain", diagonal_three_vertex_chain()),
        ("line_two_pairs", line_two_pairs()),
        ("line_four_cycle", line_four_cycle()),
        ("square_two_diagonals", square_two_diagonals()),
        ("square_cycle", square_cycle()),
        ("line_nested_pairs", line_nested_pairs()),
        ("line_crossed_pairs", line_crossed_pairs()),
    ]
}

/// Fixtures grouped by shared dynamics: every pair within a group is
/// dynamically equivalent.
pub fn equivalent_groups() -> Vec<Vec<MassActionSystem>> {
    vec![
        vec![cubic_reversible_pair(), cubic_three_vertex_chain(), cubic_split_irreversible()],
        vec![planar_irreversible_split(), planar_irreversible_merge()],
        vec![diagonal_reversible_pair(), diagonal_three_vertex_chain()],
        vec![line_two_pairs(), line_four_cycle()],
        vec![square_two_diagonals(), square_cycle()],
        vec![line_nested_pairs(), line_crossed_pairs()],
    ]
}

/// T-cell receptor kinetic proofreading with intermediates `C0..=Cn` and
/// unit rate constants:
///
/// `T + M -> C0`, `Ci -> Ci+1` for `i < n`, and `Ci -> T + M` for every `i`.
///
/// Species are ordered `T, M, C0, ..., Cn`.
pub fn t_cell_receptor(n: usize) -> MassActionSystem {
    let dim = n + 3;
    let mut species = vec!["T".to_string(), "M".to_string()];
    species.extend((0..=n).map(|i| format!("C{i}")));
    let unit = |i: usize| {
        let mut e = vec![0; dim];
        e[i] = 1;
        e
    };
    let free = Complex::from_integers(&{
        let mut e = vec![0; dim];
        e[0] = 1;
        e[1] = 1;
        e
    });
    let c = |i: usize| Complex::from_integers(&unit(i + 2));
    let one = || Rational::from_integer(1.into());
    let mut reactions = vec![(free.clone(), c(0), one())];
    for i in 0..n {
        reactions.push((c(i), c(i + 1), one()));
    }
    for i in 0..=n {
        reactions.push((c(i), free.clone(), one()));
    }
    MassActionSystem::from_reactions(species, reactions).expect("t-cell network is valid")
}
