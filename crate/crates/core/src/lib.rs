//! Pure Nash, Pareto, and strong equilibria of finite strategic games.
//!
//! Games are translated into constraint networks whose solutions are
//! exactly the pure equilibria; acyclic or low-width interaction structure
//! (join trees, tree decompositions, hypertree decompositions) then yields
//! polynomial solving via semijoin passes over a relation-labeled tree.
//! Brute-force oracles and formula-based instance generators round out the
//! library for verification, and a `purenash` binary exposes everything on
//! the command line.
//!
//! All values are immutable after construction, and every operation is a
//! deterministic pure function of its inputs.

pub mod brute;
pub mod cli;
pub mod decomp;
pub mod fileio;
pub mod game;
pub mod generators;
pub mod relation;
pub mod solver;
pub mod strong;
mod util;

pub use brute::{brute_nash, brute_pareto, brute_strong, count_models_cnf, eval_r2qbf, Guard};
pub use decomp::{
    join_tree, td_to_hd, tree_decomposition_heuristic, validate_hypertree_decomposition,
    validate_join_tree, validate_tree_decomposition, HypertreeDecomposition, JoinTree,
    TreeDecomposition,
};
pub use game::{
    Action, AnyGame, Game, GameMetrics, GnfGame, Graph, Hypergraph, Payoff, Player, Profile,
    SnfGame,
};
pub use generators::{Cnf, R2Qbf};
pub use relation::{csp_of_game, join, nash_constraint, project, semijoin, Relation};
pub use solver::{
    attach_relations, solve_acyclic, solve_auto, solve_hypertree, solve_with_hd, EquilibriumKind,
    EquilibriumSet, FilteredJoinTree,
};
pub use strong::{
    is_nash_check, is_pareto_check, strong_check_acyclic, strong_exists_acyclic, CoalitionWitness,
};
