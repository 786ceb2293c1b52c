//! Definition-level brute-force references for all three equilibrium
//! notions, on either game representation, plus formula-evaluation oracles
//! for the reduction generators.
//!
//! Everything here enumerates profile spaces directly and exists to
//! cross-check the structure-exploiting solvers; a configurable guard keeps
//! accidental blowups out of test runs.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::game::{Action, Game, GameError, GnfGame, Payoff, Player, Profile, SnfGame};
use crate::generators::{Cnf, QbfVar, R2Qbf};
use crate::solver::{EquilibriumKind, EquilibriumSet};
use crate::strong::CoalitionWitness;
use crate::util::radix_advance;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BruteError {
    #[error("profile space of {space} exceeds the enumeration guard of {limit}")]
    GuardExceeded { space: u64, limit: u64 },
    #[error("profile space overflows the counter")]
    Overflow,
    #[error("{got} variables exceed the {limit}-variable enumeration limit")]
    TooManyVariables { got: usize, limit: usize },
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Enumeration guard: the number of global profiles a brute call may visit.
#[derive(Debug, Clone, Copy)]
pub struct Guard {
    pub max_profiles: u64,
}

impl Default for Guard {
    fn default() -> Self {
        Guard {
            max_profiles: 1_000_000,
        }
    }
}

fn checked_space<G: Game>(game: &G, guard: &Guard) -> Result<(Vec<usize>, u64), BruteError> {
    let sizes: Vec<usize> = game
        .players()
        .iter()
        .map(|&p| game.action_count(p))
        .collect();
    let space = game.profile_space().ok_or(BruteError::Overflow)?;
    if space > guard.max_profiles {
        return Err(BruteError::GuardExceeded {
            space,
            limit: guard.max_profiles,
        });
    }
    Ok((sizes, space))
}

/// All pure Nash equilibria by full profile enumeration with the
/// unilateral-deviation test.
pub fn brute_nash<G: Game>(game: &G, guard: &Guard) -> Result<EquilibriumSet, BruteError> {
    let (sizes, _) = checked_space(game, guard)?;
    let players = game.players();
    let mut digits = vec![0u32; sizes.len()];
    let mut out = Vec::new();
    loop {
        let x: Vec<Action> = digits.iter().map(|&d| Action(d)).collect();
        let mut is_eq = true;
        let mut moved = x.clone();
        'players: for &p in &players {
            let here = game.utility_global(p, &x);
            for a in 0..sizes[p.idx()] {
                let a = Action(a as u32);
                if a == x[p.idx()] {
                    continue;
                }
                moved[p.idx()] = a;
                if game.utility_global(p, &moved) > here {
                    is_eq = false;
                    moved[p.idx()] = x[p.idx()];
                    break 'players;
                }
            }
            moved[p.idx()] = x[p.idx()];
        }
        if is_eq {
            out.push(x);
        }
        if !radix_advance(&mut digits, &sizes) {
            break;
        }
    }
    Ok(EquilibriumSet::new(EquilibriumKind::Nash, out))
}

fn payoff_vector<G: Game>(game: &G, x: &[Action]) -> Vec<Payoff> {
    game.players()
        .iter()
        .map(|&p| game.utility_global(p, x))
        .collect()
}

/// Nash equilibria not strictly dominated on every player by another Nash
/// equilibrium.
pub fn brute_pareto<G: Game>(game: &G, guard: &Guard) -> Result<EquilibriumSet, BruteError> {
    let ne = brute_nash(game, guard)?;
    Ok(pareto_filter(game, &ne))
}

/// Domination filter over an already-computed equilibrium set.
pub fn pareto_filter<G: Game>(game: &G, ne: &EquilibriumSet) -> EquilibriumSet {
    let utilities: Vec<Vec<Payoff>> = ne.iter().map(|x| payoff_vector(game, x)).collect();
    let keep: Vec<Vec<Action>> = ne
        .iter()
        .enumerate()
        .filter(|(i, _)| {
            !utilities
                .iter()
                .any(|other| other.iter().zip(&utilities[*i]).all(|(o, m)| o > m))
        })
        .map(|(_, x)| x.to_vec())
        .collect();
    EquilibriumSet::new(EquilibriumKind::Pareto, keep)
}

/// First refuting joint deviation against `x`, or `None` when `x` is a
/// strong equilibrium. Scanning profiles is equivalent to enumerating
/// coalitions with their combined strategies: a refuting pair yields the
/// overridden profile, and the differing players of a refuting profile form
/// the coalition.
pub fn strong_refutation<G: Game>(
    game: &G,
    x: &[Action],
    guard: &Guard,
) -> Result<Option<CoalitionWitness>, BruteError> {
    let (sizes, _) = checked_space(game, guard)?;
    let players = game.players();
    let base = payoff_vector(game, x);
    let mut digits = vec![0u32; sizes.len()];
    loop {
        let mut differs = false;
        let mut all_improve = true;
        let y: Vec<Action> = digits.iter().map(|&d| Action(d)).collect();
        for &p in &players {
            if y[p.idx()] != x[p.idx()] {
                differs = true;
                if game.utility_global(p, &y) <= base[p.idx()] {
                    all_improve = false;
                    break;
                }
            }
        }
        if differs && all_improve {
            let coalition: Vec<Player> = players
                .iter()
                .copied()
                .filter(|p| y[p.idx()] != x[p.idx()])
                .collect();
            let deviation = Profile::from_pairs(coalition.iter().map(|&p| (p, y[p.idx()])));
            return Ok(Some(CoalitionWitness {
                coalition,
                deviation,
            }));
        }
        if !radix_advance(&mut digits, &sizes) {
            break;
        }
    }
    Ok(None)
}

/// True iff no global profile differs from `x` with every differing player
/// strictly improving.
pub fn is_strong_by_scan<G: Game>(
    game: &G,
    x: &[Action],
    guard: &Guard,
) -> Result<bool, BruteError> {
    Ok(strong_refutation(game, x, guard)?.is_none())
}

/// All strong equilibria: Nash equilibria surviving the profile scan.
pub fn brute_strong<G: Game>(game: &G, guard: &Guard) -> Result<EquilibriumSet, BruteError> {
    let ne = brute_nash(game, guard)?;
    let mut out = Vec::new();
    for x in ne.iter() {
        if strong_refutation(game, x, guard)?.is_none() {
            out.push(x.to_vec());
        }
    }
    Ok(EquilibriumSet::new(EquilibriumKind::Strong, out))
}

const MAX_FORMULA_VARS: usize = 20;

/// Number of satisfying assignments of a CNF by full enumeration.
pub fn count_models_cnf(phi: &Cnf) -> Result<u64, BruteError> {
    let n = phi.variables.len();
    if n > MAX_FORMULA_VARS {
        return Err(BruteError::TooManyVariables {
            got: n,
            limit: MAX_FORMULA_VARS,
        });
    }
    let mut count = 0u64;
    for mask in 0u64..(1u64 << n) {
        if phi.eval(|v| mask & (1 << v) != 0) {
            count += 1;
        }
    }
    Ok(count)
}

/// Validity of an exists/forall formula with a disjunctive matrix: some
/// existential assignment makes the matrix true under every universal
/// assignment.
pub fn eval_r2qbf(xi: &R2Qbf) -> Result<bool, BruteError> {
    let ne = xi.exists.len();
    let nu = xi.forall.len();
    if ne + nu > MAX_FORMULA_VARS {
        return Err(BruteError::TooManyVariables {
            got: ne + nu,
            limit: MAX_FORMULA_VARS,
        });
    }
    for emask in 0u64..(1u64 << ne) {
        let mut witness = true;
        for umask in 0u64..(1u64 << nu) {
            let sat = xi.matrix_eval(|var| match var {
                QbfVar::Exists(i) => emask & (1 << i) != 0,
                QbfVar::Forall(j) => umask & (1 << j) != 0,
            });
            if !sat {
                witness = false;
                break;
            }
        }
        if witness {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Materializes the standard-normal-form table of a graphical game by
/// evaluating every player's utility on every global profile.
pub fn gnf_to_snf(game: &GnfGame, guard: &Guard) -> Result<SnfGame, BruteError> {
    let (sizes, _) = checked_space(game, guard)?;
    let names = game.player_names().to_vec();
    let actions: Vec<Vec<String>> = game
        .players()
        .iter()
        .map(|&p| game.action_names(p).to_vec())
        .collect();
    let mut rows: Vec<(BTreeMap<Player, Action>, Vec<Payoff>)> = Vec::new();
    let mut digits = vec![0u32; sizes.len()];
    loop {
        let x: Vec<Action> = digits.iter().map(|&d| Action(d)).collect();
        let when: BTreeMap<Player, Action> = x
            .iter()
            .enumerate()
            .map(|(i, &a)| (Player(i as u32), a))
            .collect();
        rows.push((when, payoff_vector(game, &x)));
        if !radix_advance(&mut digits, &sizes) {
            break;
        }
    }
    SnfGame::from_cells(names, actions, rows).map_err(GameError::into)
}
