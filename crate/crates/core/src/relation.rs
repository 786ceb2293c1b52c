//! Relational algebra kernel (natural join, semijoin, projection) and the
//! translation of a game into a constraint network via Nash constraints.
//!
//! A [`Relation`] holds an ordered scope of players and a duplicate-free,
//! lexicographically sorted set of action tuples, so relation equality and
//! output order are canonical.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::game::{Action, Game, GnfGame, Player};
use crate::util::radix_advance;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelationError {
    #[error("tuple arity {got} does not match scope length {want}")]
    ArityMismatch { got: usize, want: usize },
    #[error("projection scope contains player {player} outside the relation scope")]
    ProjectionScope { player: String },
    #[error("unknown player {name}")]
    UnknownPlayer { name: String },
    #[error("relation too large: more than {limit} tuples")]
    TooLarge { limit: u64 },
}

/// A constraint relation: ordered player scope plus a sorted set of tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    scope: Vec<Player>,
    tuples: BTreeSet<Vec<Action>>,
}

impl Relation {
    pub fn new(
        scope: Vec<Player>,
        tuples: impl IntoIterator<Item = Vec<Action>>,
    ) -> Result<Relation, RelationError> {
        let mut set = BTreeSet::new();
        let want = scope.len();
        for t in tuples {
            if t.len() != want {
                return Err(RelationError::ArityMismatch { got: t.len(), want });
            }
            set.insert(t);
        }
        Ok(Relation { scope, tuples: set })
    }

    pub fn empty(scope: Vec<Player>) -> Relation {
        Relation {
            scope,
            tuples: BTreeSet::new(),
        }
    }

    pub fn scope(&self) -> &[Player] {
        &self.scope
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuples(&self) -> impl Iterator<Item = &Vec<Action>> + '_ {
        self.tuples.iter()
    }

    pub fn contains(&self, tuple: &[Action]) -> bool {
        self.tuples.contains(tuple)
    }

    fn position_of(&self, p: Player) -> Option<usize> {
        self.scope.iter().position(|&q| q == p)
    }

    /// Positions in `self.scope` of the players shared with `other`.
    fn shared_positions(&self, other: &Relation) -> Vec<(usize, usize)> {
        let mut shared = Vec::new();
        for (i, p) in self.scope.iter().enumerate() {
            if let Some(j) = other.position_of(*p) {
                shared.push((i, j));
            }
        }
        shared
    }

    fn key_of(tuple: &[Action], positions: &[usize]) -> Vec<Action> {
        positions.iter().map(|&i| tuple[i]).collect()
    }
}

/// Natural join. The result scope is `r1`'s scope followed by the players
/// of `r2` not already present, in `r2`'s order.
pub fn join(r1: &Relation, r2: &Relation) -> Relation {
    let shared = r1.shared_positions(r2);
    let left_pos: Vec<usize> = shared.iter().map(|&(i, _)| i).collect();
    let right_pos: Vec<usize> = shared.iter().map(|&(_, j)| j).collect();
    let extra_pos: Vec<usize> = (0..r2.scope.len())
        .filter(|j| !right_pos.contains(j))
        .collect();

    let mut scope = r1.scope.clone();
    scope.extend(extra_pos.iter().map(|&j| r2.scope[j]));

    let mut by_key: HashMap<Vec<Action>, Vec<&Vec<Action>>> = HashMap::new();
    for t in &r2.tuples {
        by_key
            .entry(Relation::key_of(t, &right_pos))
            .or_default()
            .push(t);
    }

    let mut tuples = BTreeSet::new();
    for t1 in &r1.tuples {
        let key = Relation::key_of(t1, &left_pos);
        if let Some(matches) = by_key.get(&key) {
            for t2 in matches {
                let mut out = t1.clone();
                out.extend(extra_pos.iter().map(|&j| t2[j]));
                tuples.insert(out);
            }
        }
    }
    Relation { scope, tuples }
}

/// Semijoin: tuples of `r1` with at least one agreeing tuple in `r2`.
pub fn semijoin(r1: &Relation, r2: &Relation) -> Relation {
    let shared = r1.shared_positions(r2);
    let left_pos: Vec<usize> = shared.iter().map(|&(i, _)| i).collect();
    let right_pos: Vec<usize> = shared.iter().map(|&(_, j)| j).collect();

    let mut keys: BTreeSet<Vec<Action>> = BTreeSet::new();
    for t in &r2.tuples {
        keys.insert(Relation::key_of(t, &right_pos));
    }

    let tuples = r1
        .tuples
        .iter()
        .filter(|t| keys.contains(&Relation::key_of(t, &left_pos)))
        .cloned()
        .collect();
    Relation {
        scope: r1.scope.clone(),
        tuples,
    }
}

/// Projection onto `scope2`, which must be contained in the relation scope.
/// Tuples are reordered to `scope2` and deduplicated.
pub fn project(r: &Relation, scope2: &[Player]) -> Result<Relation, RelationError> {
    let mut positions = Vec::with_capacity(scope2.len());
    for p in scope2 {
        match r.position_of(*p) {
            Some(i) => positions.push(i),
            None => {
                return Err(RelationError::ProjectionScope {
                    player: format!("{p}"),
                })
            }
        }
    }
    let tuples = r
        .tuples
        .iter()
        .map(|t| Relation::key_of(t, &positions))
        .collect();
    Ok(Relation {
        scope: scope2.to_vec(),
        tuples,
    })
}

/// The Nash constraint of `p`: all combined strategies over `p`'s table
/// scope in which `p` plays a best response to her neighbors. Ties keep
/// every best response.
pub fn nash_constraint(game: &GnfGame, p: Player) -> Result<Relation, RelationError> {
    if p.idx() >= game.player_count() {
        return Err(RelationError::UnknownPlayer {
            name: format!("{p}"),
        });
    }
    let scope = game.table_scope(p).to_vec();
    let sizes: Vec<usize> = scope.iter().map(|&q| game.action_count(q)).collect();
    let own_actions = sizes[0];

    let mut tuples = BTreeSet::new();
    // Iterate over neighbor assignments; for each, keep the argmax actions.
    let neigh_sizes = &sizes[1..];
    let mut context = vec![0u32; neigh_sizes.len()];
    let mut scoped = vec![Action(0); scope.len()];
    loop {
        for (i, &d) in context.iter().enumerate() {
            scoped[i + 1] = Action(d);
        }
        let mut best = None;
        for a in 0..own_actions {
            scoped[0] = Action(a as u32);
            let u = game.utility_scoped(p, &scoped);
            match best {
                None => best = Some(u),
                Some(b) if u > b => best = Some(u),
                _ => {}
            }
        }
        let best = best.expect("non-empty action set");
        for a in 0..own_actions {
            scoped[0] = Action(a as u32);
            if game.utility_scoped(p, &scoped) == best {
                tuples.insert(scoped.clone());
            }
        }
        if neigh_sizes.is_empty() || !radix_advance(&mut context, neigh_sizes) {
            break;
        }
    }
    Ok(Relation { scope, tuples })
}

/// A constraint network over the players of a game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CspInstance {
    pub variables: Vec<Player>,
    pub domains: Vec<Vec<Action>>,
    pub constraints: Vec<Relation>,
}

/// The constraint network whose solutions are exactly the pure Nash
/// equilibria of the game: one Nash constraint per player.
pub fn csp_of_game(game: &GnfGame) -> Result<CspInstance, RelationError> {
    let variables = game.players();
    let domains = variables
        .iter()
        .map(|&p| {
            (0..game.action_count(p))
                .map(|a| Action(a as u32))
                .collect()
        })
        .collect();
    let constraints = variables
        .iter()
        .map(|&p| nash_constraint(game, p))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CspInstance {
        variables,
        domains,
        constraints,
    })
}

impl CspInstance {
    /// Checks a dense global assignment against every constraint.
    pub fn satisfied_by(&self, x: &[Action]) -> bool {
        self.constraints.iter().all(|r| {
            let key: Vec<Action> = r.scope().iter().map(|q| x[q.idx()]).collect();
            r.contains(&key)
        })
    }
}
