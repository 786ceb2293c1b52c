//! Structure-exploiting equilibrium solving.
//!
//! A [`FilteredJoinTree`] pairs each node of a join tree (or of a hypertree
//! decomposition tree) with a constraint relation. A leaves-to-root semijoin
//! pass decides existence, a root-to-leaves pass establishes full pairwise
//! consistency, and a backtrack-free walk then enumerates all equilibria in
//! time polynomial in input plus output. A recursive selection walk picks a
//! single undominated equilibrium.

use std::collections::HashMap;

use thiserror::Error;

use crate::decomp::{
    join_tree, td_to_hd, tree_decomposition_heuristic, validate_hypertree_decomposition,
    validate_join_tree, DecompError, HypertreeDecomposition, JoinTree,
};
use crate::game::{Action, Game, GnfGame, Payoff, Player, Profile};
use crate::relation::{join, nash_constraint, project, semijoin, Relation, RelationError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("dependency hypergraph is cyclic; no join tree exists")]
    Cyclic,
    #[error(transparent)]
    Decomp(#[from] DecompError),
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error("bottom-up and top-down passes have not both run")]
    PassesNotRun,
    #[error("top-down pass called with an empty root")]
    EmptyRoot,
    #[error("work limit exceeded: {what}")]
    GuardExceeded { what: String },
    #[error("equilibrium count exceeds u128")]
    CountOverflow,
    #[error("player {name} is not covered by any decomposition node")]
    PlayerUncovered { name: String },
}

/// Upper bounds on intermediate relation sizes built by the hypertree
/// pipeline.
#[derive(Debug, Clone, Copy)]
pub struct SolveLimits {
    pub max_tuples: u64,
}

impl Default for SolveLimits {
    fn default() -> Self {
        SolveLimits {
            max_tuples: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EquilibriumKind {
    Nash,
    Pareto,
    Strong,
}

impl EquilibriumKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EquilibriumKind::Nash => "nash",
            EquilibriumKind::Pareto => "pareto",
            EquilibriumKind::Strong => "strong",
        }
    }
}

/// A duplicate-free, lexicographically sorted list of global profiles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquilibriumSet {
    kind: EquilibriumKind,
    profiles: Vec<Vec<Action>>,
}

impl EquilibriumSet {
    pub fn new(kind: EquilibriumKind, mut profiles: Vec<Vec<Action>>) -> EquilibriumSet {
        profiles.sort();
        profiles.dedup();
        EquilibriumSet { kind, profiles }
    }

    pub fn kind(&self) -> EquilibriumKind {
        self.kind
    }

    pub fn with_kind(&self, kind: EquilibriumKind) -> EquilibriumSet {
        EquilibriumSet {
            kind,
            profiles: self.profiles.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[Action]> + '_ {
        self.profiles.iter().map(|p| p.as_slice())
    }

    pub fn first(&self) -> Option<&[Action]> {
        self.profiles.first().map(|p| p.as_slice())
    }

    pub fn contains_dense(&self, x: &[Action]) -> bool {
        self.profiles
            .binary_search_by(|p| p.as_slice().cmp(x))
            .is_ok()
    }

    pub fn to_profiles(&self) -> Vec<Profile> {
        self.profiles
            .iter()
            .map(|p| Profile::from_dense(p))
            .collect()
    }
}

/// One node of a filtered tree: the constraint relation plus the players
/// whose constraints were folded into it.
#[derive(Debug, Clone)]
pub struct FjtNode {
    pub relation: Relation,
    /// Owners of the hyperedges folded into this node.
    pub owners: Vec<Player>,
    /// Utility-bearing player used by the selection walk, when one of the
    /// owners has her whole table scope inside this node's scope.
    pub designated: Option<Player>,
}

#[derive(Debug, Clone)]
pub struct FilteredJoinTree {
    nodes: Vec<FjtNode>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    root: usize,
    player_count: usize,
    bottom_up_done: bool,
    top_down_done: bool,
}

impl FilteredJoinTree {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node(&self, i: usize) -> &FjtNode {
        &self.nodes[i]
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn children_of(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    pub fn passes_done(&self) -> bool {
        self.bottom_up_done && self.top_down_done
    }

    /// True after the bottom-up pass iff the game has a pure equilibrium.
    pub fn exists(&self) -> bool {
        !self.nodes[self.root].relation.is_empty()
    }

    fn bfs_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut queue = std::collections::VecDeque::from([self.root]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &c in &self.children[v] {
                queue.push_back(c);
            }
        }
        order
    }

    /// Leaves-to-root semijoin pass. Children are processed before their
    /// parents; each node is filtered by each of its children. Returns true
    /// iff the root relation stays nonempty, which (for a valid attached
    /// tree) holds iff the game has a pure Nash equilibrium.
    pub fn filter_bottom_up(&mut self) -> bool {
        let order = self.bfs_order();
        for &v in order.iter().rev() {
            for ci in 0..self.children[v].len() {
                let c = self.children[v][ci];
                self.nodes[v].relation = semijoin(&self.nodes[v].relation, &self.nodes[c].relation);
            }
        }
        self.bottom_up_done = true;
        self.exists()
    }

    /// Root-to-leaves semijoin pass. Afterwards every remaining tuple takes
    /// part in at least one equilibrium and every equilibrium is composed of
    /// remaining tuples.
    pub fn propagate_top_down(&mut self) -> Result<(), SolveError> {
        if !self.bottom_up_done {
            return Err(SolveError::PassesNotRun);
        }
        if !self.exists() {
            return Err(SolveError::EmptyRoot);
        }
        let order = self.bfs_order();
        for &v in &order {
            for ci in 0..self.children[v].len() {
                let c = self.children[v][ci];
                self.nodes[c].relation = semijoin(&self.nodes[c].relation, &self.nodes[v].relation);
            }
        }
        self.top_down_done = true;
        Ok(())
    }

    /// All pure Nash equilibria, enumerated without backtracking over the
    /// consistent tree and returned in lexicographic order.
    pub fn enumerate_equilibria(&self) -> Result<EquilibriumSet, SolveError> {
        if !self.bottom_up_done {
            return Err(SolveError::PassesNotRun);
        }
        if !self.exists() {
            return Ok(EquilibriumSet::new(EquilibriumKind::Nash, Vec::new()));
        }
        if !self.top_down_done {
            return Err(SolveError::PassesNotRun);
        }
        let order = self.bfs_order();
        let mut assignment: Vec<Option<Action>> = vec![None; self.player_count];
        let mut out: Vec<Vec<Action>> = Vec::new();
        self.enumerate_rec(&order, 0, &mut assignment, &mut out)?;
        Ok(EquilibriumSet::new(EquilibriumKind::Nash, out))
    }

    fn enumerate_rec(
        &self,
        order: &[usize],
        pos: usize,
        assignment: &mut Vec<Option<Action>>,
        out: &mut Vec<Vec<Action>>,
    ) -> Result<(), SolveError> {
        if pos == order.len() {
            let dense: Option<Vec<Action>> = assignment.iter().copied().collect();
            match dense {
                Some(x) => out.push(x),
                None => {
                    let i = assignment.iter().position(|a| a.is_none()).unwrap();
                    return Err(SolveError::PlayerUncovered {
                        name: format!("{}", Player(i as u32)),
                    });
                }
            }
            return Ok(());
        }
        let node = &self.nodes[order[pos]];
        let scope = node.relation.scope().to_vec();
        for tuple in node.relation.tuples() {
            let mut ok = true;
            let mut bound_here: Vec<usize> = Vec::new();
            for (q, a) in scope.iter().zip(tuple) {
                match assignment[q.idx()] {
                    Some(b) if b != *a => {
                        ok = false;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        assignment[q.idx()] = Some(*a);
                        bound_here.push(q.idx());
                    }
                }
            }
            if ok {
                self.enumerate_rec(order, pos + 1, assignment, out)?;
            }
            for i in bound_here {
                assignment[i] = None;
            }
        }
        Ok(())
    }

    /// Counts equilibria by dynamic programming over the tree without
    /// materializing them.
    pub fn count_equilibria(&self) -> Result<u128, SolveError> {
        if !self.bottom_up_done {
            return Err(SolveError::PassesNotRun);
        }
        if !self.exists() {
            return Ok(0);
        }
        if !self.top_down_done {
            return Err(SolveError::PassesNotRun);
        }
        let order = self.bfs_order();
        // Positions of the parent interface inside a node's scope; the
        // shared players are taken in ascending player order so parent-side
        // and child-side keys line up.
        let iface_positions = |inner: &[Player], outer: &[Player]| -> Vec<usize> {
            let mut shared: Vec<Player> = inner
                .iter()
                .copied()
                .filter(|q| outer.contains(q))
                .collect();
            shared.sort();
            shared
                .iter()
                .map(|q| inner.iter().position(|s| s == q).unwrap())
                .collect()
        };
        // For each node: tuples and per-tuple counts; children aggregate by
        // the interface shared with the parent.
        let mut agg: Vec<Option<HashMap<Vec<Action>, u128>>> = vec![None; self.nodes.len()];
        for &v in order.iter().rev() {
            let node = &self.nodes[v];
            let scope = node.relation.scope();
            let mut counts: Vec<(Vec<Action>, u128)> = Vec::with_capacity(node.relation.len());
            for tuple in node.relation.tuples() {
                let mut cnt: u128 = 1;
                for &c in &self.children[v] {
                    let child_scope = self.nodes[c].relation.scope();
                    let shared = iface_positions(scope, child_scope);
                    let key: Vec<Action> = shared.iter().map(|&i| tuple[i]).collect();
                    let m = agg[c].as_ref().expect("child processed");
                    let sub = m.get(&key).copied().unwrap_or(0);
                    cnt = cnt.checked_mul(sub).ok_or(SolveError::CountOverflow)?;
                }
                counts.push((tuple.clone(), cnt));
            }
            let key_positions: Vec<usize> = match self.parent[v] {
                Some(p) => iface_positions(scope, self.nodes[p].relation.scope()),
                None => Vec::new(),
            };
            let mut map: HashMap<Vec<Action>, u128> = HashMap::new();
            for (tuple, cnt) in counts {
                let key: Vec<Action> = key_positions.iter().map(|&i| tuple[i]).collect();
                let slot = map.entry(key).or_insert(0);
                *slot = slot.checked_add(cnt).ok_or(SolveError::CountOverflow)?;
            }
            agg[v] = Some(map);
        }
        let root_map = agg[self.root].as_ref().unwrap();
        Ok(root_map.values().copied().sum())
    }

    /// Selects one equilibrium undominated among all equilibria: at the
    /// root, the utility of the root's designated player is maximized over
    /// the remaining tuples; the choice is then pushed down with semijoins,
    /// each node again picking a best tuple for its own designated player.
    /// Ties resolve to the lexicographically least tuple. `root_player`
    /// re-roots the walk at a node covering that player's table scope and
    /// maximizes that player's utility first.
    pub fn select_equilibrium(
        &self,
        game: &GnfGame,
        root_player: Option<Player>,
    ) -> Result<Option<Profile>, SolveError> {
        if !self.passes_done() {
            if !self.bottom_up_done {
                return Err(SolveError::PassesNotRun);
            }
            if !self.exists() {
                return Ok(None);
            }
            return Err(SolveError::PassesNotRun);
        }
        if !self.exists() {
            return Ok(None);
        }

        // Scope coverage of a player's utility table by a node.
        let covers = |i: usize, p: Player| -> bool {
            let scope = self.nodes[i].relation.scope();
            game.table_scope(p).iter().all(|q| scope.contains(q))
        };

        let (root, maximize_at_root) = match root_player {
            Some(p) => {
                let preferred = (0..self.nodes.len())
                    .find(|&i| self.nodes[i].owners.contains(&p) && covers(i, p));
                let fallback = (0..self.nodes.len()).find(|&i| covers(i, p));
                match preferred.or(fallback) {
                    Some(i) => (i, Some(p)),
                    None => {
                        return Err(SolveError::PlayerUncovered {
                            name: game.player_name(p).to_string(),
                        })
                    }
                }
            }
            None => (self.root, self.nodes[self.root].designated),
        };

        // Orientation from the chosen root over the undirected tree.
        let n = self.nodes.len();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, par) in self.parent.iter().enumerate() {
            if let Some(p) = par {
                adj[i].push(*p);
                adj[*p].push(i);
            }
        }
        let mut order = Vec::with_capacity(n);
        let mut parent_of: Vec<Option<usize>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = std::collections::VecDeque::from([root]);
        seen[root] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    parent_of[u] = Some(v);
                    queue.push_back(u);
                }
            }
        }

        let mut assignment: Vec<Option<Action>> = vec![None; self.player_count];
        for &v in &order {
            let node = &self.nodes[v];
            let scope = node.relation.scope();
            let who = if v == root {
                maximize_at_root.filter(|&p| covers(v, p))
            } else {
                node.designated.filter(|&p| covers(v, p))
            };
            let table_positions: Option<Vec<usize>> = who.map(|p| {
                game.table_scope(p)
                    .iter()
                    .map(|q| scope.iter().position(|s| s == q).unwrap())
                    .collect()
            });

            let mut best: Option<(&Vec<Action>, Option<Payoff>)> = None;
            for tuple in node.relation.tuples() {
                let matches = scope
                    .iter()
                    .zip(tuple)
                    .all(|(q, a)| assignment[q.idx()].is_none_or(|b| b == *a));
                if !matches {
                    continue;
                }
                let score = table_positions.as_ref().map(|pos| {
                    let scoped: Vec<Action> = pos.iter().map(|&i| tuple[i]).collect();
                    game.utility_scoped(who.unwrap(), &scoped)
                });
                match &best {
                    None => best = Some((tuple, score)),
                    Some((_, s)) if score > *s => best = Some((tuple, score)),
                    _ => {}
                }
            }
            let (tuple, _) = best.expect("pairwise consistency guarantees a match");
            for (q, a) in scope.iter().zip(tuple) {
                assignment[q.idx()] = Some(*a);
            }
        }

        let dense: Option<Vec<Action>> = assignment.iter().copied().collect();
        match dense {
            Some(x) => Ok(Some(Profile::from_dense(&x))),
            None => {
                let i = assignment.iter().position(|a| a.is_none()).unwrap();
                Err(SolveError::PlayerUncovered {
                    name: game.player_name(Player(i as u32)).to_string(),
                })
            }
        }
    }
}

/// Pairs each join-tree node with its owner's Nash constraint. The tree is
/// validated against the game's dependency hypergraph first.
pub fn attach_relations(game: &GnfGame, jt: &JoinTree) -> Result<FilteredJoinTree, SolveError> {
    let h = game.dependency_hypergraph();
    validate_join_tree(&h, jt)?;
    let n = game.player_count();
    let mut nodes = Vec::with_capacity(n);
    for i in 0..n {
        let p = Player(i as u32);
        nodes.push(FjtNode {
            relation: nash_constraint(game, p)?,
            owners: vec![p],
            designated: Some(p),
        });
    }
    let parent = (0..n)
        .map(|i| jt.parent_of(Player(i as u32)).map(|q| q.idx()))
        .collect();
    let children = (0..n)
        .map(|i| {
            jt.children_of(Player(i as u32))
                .iter()
                .map(|q| q.idx())
                .collect()
        })
        .collect();
    Ok(FilteredJoinTree {
        nodes,
        parent,
        children,
        root: jt.root().idx(),
        player_count: n,
        bottom_up_done: false,
        top_down_done: false,
    })
}

/// Builds an equivalent acyclic instance from a hypertree decomposition:
/// each decomposition node becomes a tree node scoped by its chi label,
/// carrying the projection of the join of the Nash constraints named by its
/// lambda label. Nash constraints that are not strongly covered anywhere
/// are enforced by a semijoin into a node whose chi covers their scope.
pub fn solve_with_hd(
    game: &GnfGame,
    hd: &HypertreeDecomposition,
    limits: &SolveLimits,
) -> Result<FilteredJoinTree, SolveError> {
    let h = game.dependency_hypergraph();
    validate_hypertree_decomposition(&h, hd)?;

    let n = game.player_count();
    let constraints: Vec<Relation> = (0..n)
        .map(|i| nash_constraint(game, Player(i as u32)))
        .collect::<Result<_, _>>()?;

    let mut nodes = Vec::with_capacity(hd.node_count());
    for i in 0..hd.node_count() {
        let hdn = hd.node(i);
        let mut acc = Relation::new(Vec::new(), vec![Vec::new()]).expect("unit relation");
        for &owner in &hdn.lambda {
            acc = join(&acc, &constraints[owner.idx()]);
            if acc.len() as u64 > limits.max_tuples {
                return Err(SolveError::GuardExceeded {
                    what: format!(
                        "relation at decomposition node {i} exceeds {} tuples",
                        limits.max_tuples
                    ),
                });
            }
        }
        let chi: Vec<Player> = hdn.chi.iter().copied().collect();
        let relation = project(&acc, &chi)?;
        let owners: Vec<Player> = hdn.lambda.iter().copied().collect();
        let designated = owners
            .iter()
            .copied()
            .find(|&p| game.table_scope(p).iter().all(|q| hdn.chi.contains(q)));
        nodes.push(FjtNode {
            relation,
            owners,
            designated,
        });
    }

    // Enforce constraints that no node strongly covers.
    for (p, constraint) in constraints.iter().enumerate() {
        let owner = Player(p as u32);
        let edge = h.edge(owner);
        let strongly = (0..hd.node_count()).any(|i| {
            let hdn = hd.node(i);
            hdn.lambda.contains(&owner) && edge.iter().all(|v| hdn.chi.contains(v))
        });
        if strongly {
            continue;
        }
        let covering = (0..hd.node_count())
            .find(|&i| edge.iter().all(|v| hd.node(i).chi.contains(v)))
            .ok_or_else(|| SolveError::PlayerUncovered {
                name: game.player_name(owner).to_string(),
            })?;
        nodes[covering].relation = semijoin(&nodes[covering].relation, constraint);
    }

    let parent = (0..hd.node_count()).map(|i| hd.parent_of(i)).collect();
    let children = (0..hd.node_count())
        .map(|i| hd.children_of(i).to_vec())
        .collect();
    Ok(FilteredJoinTree {
        nodes,
        parent,
        children,
        root: hd.root(),
        player_count: n,
        bottom_up_done: false,
        top_down_done: false,
    })
}

fn run_passes(mut tree: FilteredJoinTree) -> Result<FilteredJoinTree, SolveError> {
    if tree.filter_bottom_up() {
        tree.propagate_top_down()?;
    }
    Ok(tree)
}

/// Acyclic pipeline: join tree, attach, both passes. Fails with
/// [`SolveError::Cyclic`] when no join tree exists.
pub fn solve_acyclic(game: &GnfGame) -> Result<FilteredJoinTree, SolveError> {
    let h = game.dependency_hypergraph();
    let jt = join_tree(&h).ok_or(SolveError::Cyclic)?;
    run_passes(attach_relations(game, &jt)?)
}

/// Bounded-width pipeline: uses the given decomposition, or builds one from
/// a min-fill tree decomposition of the dependency graph.
pub fn solve_hypertree(
    game: &GnfGame,
    hd: Option<&HypertreeDecomposition>,
    limits: &SolveLimits,
) -> Result<FilteredJoinTree, SolveError> {
    let tree = match hd {
        Some(hd) => solve_with_hd(game, hd, limits)?,
        None => {
            let td = tree_decomposition_heuristic(&game.dependency_graph());
            let hd = td_to_hd(game, &td)?;
            solve_with_hd(game, &hd, limits)?
        }
    };
    run_passes(tree)
}

/// Method dispatch: the acyclic pipeline when a join tree exists, otherwise
/// the hypertree pipeline over a min-fill tree decomposition.
pub fn solve_auto(game: &GnfGame, limits: &SolveLimits) -> Result<FilteredJoinTree, SolveError> {
    match solve_acyclic(game) {
        Err(SolveError::Cyclic) => solve_hypertree(game, None, limits),
        other => other,
    }
}
