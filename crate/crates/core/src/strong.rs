//! Definition-level equilibrium checks and the polynomial strong-equilibrium
//! check for acyclic-hypergraph games.
//!
//! A profile fails to be strong exactly when some global profile differs
//! from it and every differing player strictly improves: the coalition is
//! recoverable as the set of differing players. Over a join tree this is
//! decided by one bottom-up dynamic program per profile, keyed by
//! (node, interface assignment shared with the parent) and tracking whether
//! the subtree holds a deviating player. Per-node searches run over the
//! player's full combined-strategy table: coalition deviations may pass
//! through profiles that violate Nash constraints, so restricting the
//! search to best-response tuples would be unsound (see
//! `nash_filtered_reading_disagrees_with_oracle`).

use thiserror::Error;

use crate::decomp::{validate_join_tree, JoinTree};
use crate::game::{Action, Game, GameError, GnfGame, Payoff, Player, Profile};
use crate::relation::{nash_constraint, RelationError};
use crate::solver::{attach_relations, EquilibriumSet, SolveError};
use crate::util::{radix_advance, radix_strides};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrongError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error("profile is not a member of the supplied equilibrium set")]
    NotInEquilibriumSet,
}

/// A coalition together with a joint deviation refuting strong-equilibrium
/// status: every member changes her action and strictly improves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoalitionWitness {
    pub coalition: Vec<Player>,
    pub deviation: Profile,
}

impl CoalitionWitness {
    /// Direct payoff verification against the base profile.
    pub fn verify<G: Game>(&self, game: &G, x: &Profile) -> bool {
        if self.coalition.is_empty() {
            return false;
        }
        let scope: Vec<Player> = self.deviation.scope().collect();
        if scope != self.coalition {
            return false;
        }
        let Ok(moved) = x.override_with(&self.deviation) else {
            return false;
        };
        self.coalition.iter().all(|&p| {
            let differs = self.deviation.get(p) != x.get(p);
            let before = game.utility_of(p, x);
            let after = game.utility_of(p, &moved);
            match (before, after) {
                (Ok(b), Ok(a)) => differs && a > b,
                _ => false,
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongCheck {
    pub strong: bool,
    pub witness: Option<CoalitionWitness>,
}

/// Unilateral-deviation test: true iff no single player can strictly
/// improve by changing her own action.
pub fn is_nash_check<G: Game>(game: &G, x: &Profile) -> Result<bool, GameError> {
    let n = game.player_count();
    let dense = x.to_dense(n)?;
    for p in game.players() {
        let a = dense[p.idx()];
        if a.idx() >= game.action_count(p) {
            return Err(GameError::UnknownAction {
                player: game.player_name(p).to_string(),
                action: format!("#{}", a.0),
            });
        }
    }
    Ok(is_nash_dense(game, &dense))
}

pub(crate) fn is_nash_dense<G: Game>(game: &G, x: &[Action]) -> bool {
    let mut moved = x.to_vec();
    for p in game.players() {
        let here = game.utility_global(p, x);
        let own = x[p.idx()];
        for a in 0..game.action_count(p) {
            let a = Action(a as u32);
            if a == own {
                continue;
            }
            moved[p.idx()] = a;
            if game.utility_global(p, &moved) > here {
                return false;
            }
        }
        moved[p.idx()] = own;
    }
    true
}

/// Domination scan over a complete equilibrium set: true iff no member
/// strictly improves every player at once.
pub fn is_pareto_check<G: Game>(
    game: &G,
    x: &Profile,
    ne: &EquilibriumSet,
) -> Result<bool, StrongError> {
    let n = game.player_count();
    let dense = x.to_dense(n)?;
    if !ne.contains_dense(&dense) {
        return Err(StrongError::NotInEquilibriumSet);
    }
    let mine: Vec<Payoff> = game
        .players()
        .iter()
        .map(|&p| game.utility_global(p, &dense))
        .collect();
    for y in ne.iter() {
        let dominates = game
            .players()
            .iter()
            .all(|&p| game.utility_global(p, y) > mine[p.idx()]);
        if dominates {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Which tuple table the per-node coalition search explores.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeviationTable {
    /// Every combined strategy over the node scope.
    Full,
    /// Only best-response tuples. Unsound for the strong check; kept so
    /// tests can demonstrate the disagreement against the brute oracle.
    NashFiltered,
}

struct NodeData {
    /// Table scope of the owner: owner first, then her neighbors.
    scope: Vec<Player>,
    sizes: Vec<usize>,
    /// Children in the join tree.
    children: Vec<usize>,
    /// Interface with the parent: shared players, sorted, as positions
    /// into `scope`.
    iface_pos: Vec<usize>,
    iface_strides: Vec<u64>,
    iface_total: u64,
    /// Membership bitmap over the full table, present in NashFiltered mode.
    allowed: Option<Vec<bool>>,
}

struct StrongDp<'a> {
    game: &'a GnfGame,
    nodes: Vec<NodeData>,
    order: Vec<usize>, // breadth-first from the root
    root: usize,
    x: Vec<Action>,
    base: Vec<Payoff>,
    /// feas0[v][key]: the subtree of v admits a consistent assignment
    /// matching `key` on the parent interface in which no subtree owner
    /// deviates from x (neighbor positions may still differ; those players'
    /// own nodes lie elsewhere).
    feas0: Vec<Vec<bool>>,
    /// feas1[v][key]: as feas0, but at least one subtree owner deviates and
    /// every deviating owner strictly improves on x.
    feas1: Vec<Vec<bool>>,
}

impl<'a> StrongDp<'a> {
    fn new(
        game: &'a GnfGame,
        jt: &JoinTree,
        table: DeviationTable,
    ) -> Result<StrongDp<'a>, StrongError> {
        let h = game.dependency_hypergraph();
        validate_join_tree(&h, jt).map_err(SolveError::Decomp)?;
        let n = game.player_count();
        let mut nodes = Vec::with_capacity(n);
        for i in 0..n {
            let p = Player(i as u32);
            let scope = game.table_scope(p).to_vec();
            let sizes: Vec<usize> = scope.iter().map(|&q| game.action_count(q)).collect();
            let iface_players: Vec<Player> = match jt.parent_of(p) {
                Some(par) => {
                    let parent_scope = game.table_scope(par);
                    let mut shared: Vec<Player> = scope
                        .iter()
                        .copied()
                        .filter(|q| parent_scope.contains(q))
                        .collect();
                    shared.sort();
                    shared
                }
                None => Vec::new(),
            };
            let iface_pos: Vec<usize> = iface_players
                .iter()
                .map(|q| scope.iter().position(|s| s == q).unwrap())
                .collect();
            let iface_sizes: Vec<usize> = iface_pos.iter().map(|&i| sizes[i]).collect();
            let (iface_strides, iface_total) =
                radix_strides(&iface_sizes).ok_or(SolveError::CountOverflow)?;
            let allowed = match table {
                DeviationTable::Full => None,
                DeviationTable::NashFiltered => {
                    let nc = nash_constraint(game, p)?;
                    let (strides, total) =
                        radix_strides(&sizes).ok_or(SolveError::CountOverflow)?;
                    let mut bits = vec![false; total as usize];
                    for t in nc.tuples() {
                        let idx: u64 = t.iter().zip(&strides).map(|(a, s)| a.0 as u64 * s).sum();
                        bits[idx as usize] = true;
                    }
                    Some(bits)
                }
            };
            nodes.push(NodeData {
                scope,
                sizes,
                children: jt.children_of(p).iter().map(|q| q.idx()).collect(),
                iface_pos,
                iface_strides,
                iface_total,
                allowed,
            });
        }
        let mut order = Vec::with_capacity(n);
        let mut queue = std::collections::VecDeque::from([jt.root().idx()]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            queue.extend(nodes[v].children.iter().copied());
        }
        Ok(StrongDp {
            game,
            nodes,
            order,
            root: jt.root().idx(),
            x: Vec::new(),
            base: Vec::new(),
            feas0: Vec::new(),
            feas1: Vec::new(),
        })
    }

    fn set_profile(&mut self, x: Vec<Action>) {
        self.base = self
            .game
            .players()
            .iter()
            .map(|&p| self.game.utility_global(p, &x))
            .collect();
        self.x = x;
    }

    /// Interface key of `tuple` at node `v`.
    fn key_of(&self, v: usize, tuple: &[Action]) -> u64 {
        let nd = &self.nodes[v];
        nd.iface_pos
            .iter()
            .zip(&nd.iface_strides)
            .map(|(&i, s)| tuple[i].0 as u64 * s)
            .sum()
    }

    /// Child interface key induced by a tuple over the parent's scope.
    /// Child interfaces are subsets of the parent scope, so every interface
    /// player resolves.
    fn child_key(&self, parent: usize, child: usize, tuple: &[Action]) -> u64 {
        let cd = &self.nodes[child];
        let pd = &self.nodes[parent];
        cd.iface_pos
            .iter()
            .zip(&cd.iface_strides)
            .map(|(&ci, s)| {
                let q = cd.scope[ci];
                let pi = pd.scope.iter().position(|&sq| sq == q).unwrap();
                tuple[pi].0 as u64 * s
            })
            .sum()
    }

    /// Owner-level acceptance of one tuple: table membership plus the
    /// improvement implication (deviating owner must strictly gain).
    fn tuple_core_ok(&self, v: usize, tuple: &[Action], table_idx: usize) -> bool {
        let nd = &self.nodes[v];
        if let Some(bits) = &nd.allowed {
            if !bits[table_idx] {
                return false;
            }
        }
        if tuple[0] != self.x[v] {
            let u = self.game.utility_scoped(Player(v as u32), tuple);
            if u <= self.base[v] {
                return false;
            }
        }
        true
    }

    /// Child feasibility summary for one parent tuple: `None` when some
    /// child subtree admits no consistent assignment; otherwise
    /// (all children can stay deviation-free, some child can deviate).
    fn children_status(&self, v: usize, tuple: &[Action]) -> Option<(bool, bool)> {
        let mut all_f0 = true;
        let mut any_f1 = false;
        for &c in &self.nodes[v].children {
            let key = self.child_key(v, c, tuple) as usize;
            let f0 = self.feas0[c][key];
            let f1 = self.feas1[c][key];
            if !f0 && !f1 {
                return None;
            }
            all_f0 &= f0;
            any_f1 |= f1;
        }
        Some((all_f0, any_f1))
    }

    /// Bottom-up pass; true iff some global profile other than x exists in
    /// which every differing player strictly improves on x.
    fn run(&mut self) -> bool {
        self.feas0 = self
            .nodes
            .iter()
            .map(|nd| vec![false; nd.iface_total as usize])
            .collect();
        self.feas1 = self
            .nodes
            .iter()
            .map(|nd| vec![false; nd.iface_total as usize])
            .collect();
        for &v in self.order.clone().iter().rev() {
            let sizes = self.nodes[v].sizes.clone();
            let mut digits = vec![0u32; sizes.len()];
            let mut tuple = vec![Action(0); sizes.len()];
            let mut table_idx = 0usize;
            loop {
                for (t, &d) in tuple.iter_mut().zip(&digits) {
                    *t = Action(d);
                }
                if self.tuple_core_ok(v, &tuple, table_idx) {
                    if let Some((all_f0, any_f1)) = self.children_status(v, &tuple) {
                        let key = self.key_of(v, &tuple) as usize;
                        let own_dev = tuple[0] != self.x[v];
                        if !own_dev && all_f0 {
                            self.feas0[v][key] = true;
                        }
                        if own_dev || any_f1 {
                            self.feas1[v][key] = true;
                        }
                    }
                }
                table_idx += 1;
                if !radix_advance(&mut digits, &sizes) {
                    break;
                }
            }
        }
        self.feas1[self.root].iter().any(|&b| b)
    }

    /// Walks accepted states top-down, collecting the deviating players.
    /// Branch order is lexicographic, so witnesses are deterministic.
    /// Subtrees allowed to stay deviation-free are skipped: their owners
    /// play x and contribute nothing to the coalition.
    fn reconstruct(&self) -> CoalitionWitness {
        let mut deviation: Vec<(Player, Action)> = Vec::new();
        // Nodes whose subtree must contain a deviation, with the required
        // interface key.
        let mut stack: Vec<(usize, u64)> = vec![(
            self.root,
            self.feas1[self.root]
                .iter()
                .position(|&b| b)
                .expect("root accepted") as u64,
        )];
        while let Some((v, want_key)) = stack.pop() {
            let nd = &self.nodes[v];
            let mut digits = vec![0u32; nd.sizes.len()];
            let mut tuple = vec![Action(0); nd.sizes.len()];
            let mut table_idx = 0usize;
            let mut found = false;
            loop {
                for (t, &d) in tuple.iter_mut().zip(&digits) {
                    *t = Action(d);
                }
                if self.key_of(v, &tuple) == want_key && self.tuple_core_ok(v, &tuple, table_idx) {
                    if let Some((_, any_f1)) = self.children_status(v, &tuple) {
                        let own_dev = tuple[0] != self.x[v];
                        if own_dev || any_f1 {
                            self.commit(v, &tuple, &mut deviation, &mut stack);
                            found = true;
                            break;
                        }
                    }
                }
                table_idx += 1;
                if !radix_advance(&mut digits, &nd.sizes) {
                    break;
                }
            }
            debug_assert!(found, "accepted state must be reconstructible");
        }
        deviation.sort();
        CoalitionWitness {
            coalition: deviation.iter().map(|(p, _)| *p).collect(),
            deviation: Profile::from_pairs(deviation),
        }
    }

    fn commit(
        &self,
        v: usize,
        tuple: &[Action],
        deviation: &mut Vec<(Player, Action)>,
        stack: &mut Vec<(usize, u64)>,
    ) {
        let nd = &self.nodes[v];
        let own_dev = tuple[0] != self.x[v];
        if own_dev {
            deviation.push((Player(v as u32), tuple[0]));
        }
        // Children unable to stay deviation-free must deviate; if the
        // deviation quota is still open, the first child able to deviate is
        // asked to. Everyone else keeps playing x.
        let child_keys: Vec<(usize, u64)> = nd
            .children
            .iter()
            .map(|&c| (c, self.child_key(v, c, tuple)))
            .collect();
        let any_forced = child_keys
            .iter()
            .any(|&(c, key)| !self.feas0[c][key as usize]);
        let mut quota_open = !own_dev && !any_forced;
        for &(c, key) in &child_keys {
            if !self.feas0[c][key as usize] {
                stack.push((c, key));
            } else if quota_open && self.feas1[c][key as usize] {
                stack.push((c, key));
                quota_open = false;
            }
        }
        debug_assert!(!quota_open, "a deviation source must exist");
    }
}

/// Decides whether a global profile is a strong equilibrium of an
/// acyclic-hypergraph game, returning a verifying coalition witness on
/// refutation. The per-node search runs over the full combined-strategy
/// table of each player.
pub fn strong_check_acyclic(
    game: &GnfGame,
    jt: &JoinTree,
    x: &Profile,
) -> Result<StrongCheck, StrongError> {
    strong_check_acyclic_with_table(game, jt, x, DeviationTable::Full)
}

pub fn strong_check_acyclic_with_table(
    game: &GnfGame,
    jt: &JoinTree,
    x: &Profile,
    table: DeviationTable,
) -> Result<StrongCheck, StrongError> {
    let dense = x.to_dense(game.player_count())?;
    for p in game.players() {
        if dense[p.idx()].idx() >= game.action_count(p) {
            return Err(GameError::UnknownAction {
                player: game.player_name(p).to_string(),
                action: format!("#{}", dense[p.idx()].0),
            }
            .into());
        }
    }
    let mut dp = StrongDp::new(game, jt, table)?;
    dp.set_profile(dense);
    if dp.run() {
        let witness = dp.reconstruct();
        Ok(StrongCheck {
            strong: false,
            witness: Some(witness),
        })
    } else {
        Ok(StrongCheck {
            strong: true,
            witness: None,
        })
    }
}

/// Decides whether an acyclic-hypergraph game has any strong equilibrium by
/// enumerating its Nash equilibria and checking each in lexicographic
/// order; returns the first strong one. Worst case exponential in the
/// number of equilibria.
pub fn strong_exists_acyclic(
    game: &GnfGame,
    jt: &JoinTree,
) -> Result<(bool, Option<Profile>), StrongError> {
    let mut tree = attach_relations(game, jt)?;
    if !tree.filter_bottom_up() {
        return Ok((false, None));
    }
    tree.propagate_top_down()?;
    let ne = tree.enumerate_equilibria()?;
    let mut dp = StrongDp::new(game, jt, DeviationTable::Full)?;
    for x in ne.iter() {
        dp.set_profile(x.to_vec());
        if !dp.run() {
            return Ok((true, Some(Profile::from_dense(x))));
        }
    }
    Ok((false, None))
}
