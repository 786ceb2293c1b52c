//! Strategic games: players, actions, exact rational payoffs, profiles, and
//! the structural views (dependency graph, dependency hypergraph, primal
//! graph) together with size and intricacy metrics.
//!
//! Two representations are supported. A [`GnfGame`] stores one utility table
//! per player over that player and her neighbors (graphical normal form); an
//! [`SnfGame`] stores a single table with one cell per global profile
//! (standard normal form). Both implement the [`Game`] trait.
//!
//! All values are immutable after construction and every operation is a pure
//! function of its inputs, so games can be shared freely across threads.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Rational64;
use thiserror::Error;

use crate::util::{radix_advance, radix_strides};

/// Index of a player in the owning game's declared player order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Player(pub u32);

/// Index of an action in the owning player's declared action order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Action(pub u32);

impl Player {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl Action {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("player {player}: self-neighbor")]
    SelfNeighbor { player: String },
    #[error("duplicate player {player}")]
    DuplicatePlayer { player: String },
    #[error("player {player}: duplicate action {action}")]
    DuplicateAction { player: String, action: String },
    #[error("player {player}: empty action list")]
    EmptyActions { player: String },
    #[error("unknown player {name}")]
    UnknownPlayer { name: String },
    #[error("player {player}: unknown action {action}")]
    UnknownAction { player: String, action: String },
    #[error("player {player}: incomplete table, missing entry for {context}")]
    MissingTableEntry { player: String, context: String },
    #[error("player {player}: duplicate table entry for {context}")]
    DuplicateTableEntry { player: String, context: String },
    #[error("profile scope too small: player {player} missing {missing}")]
    ScopeTooSmall { player: String, missing: String },
    #[error("profile is not global")]
    ProfileNotGlobal,
    #[error("override scope not contained in base: player {player}")]
    OverrideScope { player: String },
    #[error("invalid payoff {text}")]
    InvalidPayoff { text: String },
    #[error("game too large: {what}")]
    TooLarge { what: String },
}

// ---------------------------------------------------------------------------
// Payoff — exact rational utility values
// ---------------------------------------------------------------------------

/// An exact rational payoff in canonical reduced form. Equilibrium
/// definitions hinge on exact strict comparisons, so floats are not used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Payoff(Rational64);

impl Payoff {
    pub fn from_integer(n: i64) -> Self {
        Payoff(Rational64::from_integer(n))
    }

    pub fn new(num: i64, den: i64) -> Result<Self, GameError> {
        if den == 0 {
            return Err(GameError::InvalidPayoff {
                text: format!("{num}/{den}"),
            });
        }
        Ok(Payoff(Rational64::new(num, den)))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    /// Parses an integer ("2", "-1"), a fraction ("3/2"), or a decimal
    /// string ("0.25"). Decimals are converted exactly.
    pub fn parse(text: &str) -> Result<Self, GameError> {
        let s = text.trim();
        let bad = || GameError::InvalidPayoff {
            text: text.to_string(),
        };
        if s.is_empty() {
            return Err(bad());
        }
        if let Some((n, d)) = s.split_once('/') {
            let num: i64 = n.trim().parse().map_err(|_| bad())?;
            let den: i64 = d.trim().parse().map_err(|_| bad())?;
            return Payoff::new(num, den);
        }
        if let Some((int_part, frac_part)) = s.split_once('.') {
            let (neg, int_digits) = match int_part.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, int_part.strip_prefix('+').unwrap_or(int_part)),
            };
            if !int_digits.chars().all(|c| c.is_ascii_digit())
                || frac_part.is_empty()
                || !frac_part.chars().all(|c| c.is_ascii_digit())
                || frac_part.len() > 18
            {
                return Err(bad());
            }
            let int_val: i64 = if int_digits.is_empty() {
                0
            } else {
                int_digits.parse().map_err(|_| bad())?
            };
            let frac_val: i64 = frac_part.parse().map_err(|_| bad())?;
            let den = 10i64.checked_pow(frac_part.len() as u32).ok_or_else(bad)?;
            let num = int_val
                .checked_mul(den)
                .and_then(|v| v.checked_add(frac_val))
                .ok_or_else(bad)?;
            let num = if neg { -num } else { num };
            return Payoff::new(num, den);
        }
        let num: i64 = s.parse().map_err(|_| bad())?;
        Ok(Payoff::from_integer(num))
    }
}

impl fmt::Display for Payoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self.0.denom() == 1 {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

// ---------------------------------------------------------------------------
// Profile — a combined strategy over a scope of players
// ---------------------------------------------------------------------------

/// An assignment of one action to each player of a scope. Global when the
/// scope is the full player set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Profile {
    assignment: BTreeMap<Player, Action>,
}

impl Profile {
    pub fn new() -> Self {
        Profile::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Player, Action)>) -> Self {
        Profile {
            assignment: pairs.into_iter().collect(),
        }
    }

    pub fn from_dense(actions: &[Action]) -> Self {
        Profile {
            assignment: actions
                .iter()
                .enumerate()
                .map(|(i, a)| (Player(i as u32), *a))
                .collect(),
        }
    }

    pub fn get(&self, p: Player) -> Option<Action> {
        self.assignment.get(&p).copied()
    }

    pub fn set(&mut self, p: Player, a: Action) {
        self.assignment.insert(p, a);
    }

    pub fn scope(&self) -> impl Iterator<Item = Player> + '_ {
        self.assignment.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Player, Action)> + '_ {
        self.assignment.iter().map(|(p, a)| (*p, *a))
    }

    pub fn is_global(&self, player_count: usize) -> bool {
        self.assignment.len() == player_count
            && self
                .assignment
                .keys()
                .enumerate()
                .all(|(i, p)| p.idx() == i)
    }

    /// The overridden profile: agrees with `other` on `other`'s scope and
    /// with `self` elsewhere. `other`'s scope must be contained in ours.
    pub fn override_with(&self, other: &Profile) -> Result<Profile, GameError> {
        let mut out = self.clone();
        for (p, a) in other.iter() {
            if !self.assignment.contains_key(&p) {
                return Err(GameError::OverrideScope {
                    player: format!("{p}"),
                });
            }
            out.assignment.insert(p, a);
        }
        Ok(out)
    }

    /// Dense action vector ordered by player index; requires a global scope.
    pub fn to_dense(&self, player_count: usize) -> Result<Vec<Action>, GameError> {
        if !self.is_global(player_count) {
            return Err(GameError::ProfileNotGlobal);
        }
        Ok(self.assignment.values().copied().collect())
    }
}

// ---------------------------------------------------------------------------
// Structural views
// ---------------------------------------------------------------------------

/// Undirected graph over the players of a game; no self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    edges: BTreeSet<(Player, Player)>,
}

impl Graph {
    pub fn new(names: Vec<String>) -> Self {
        Graph {
            names,
            edges: BTreeSet::new(),
        }
    }

    pub fn add_edge(&mut self, a: Player, b: Player) {
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.edges.insert((lo, hi));
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, p: Player) -> &str {
        &self.names[p.idx()]
    }

    pub fn has_edge(&self, a: Player, b: Player) -> bool {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.edges.contains(&(lo, hi))
    }

    pub fn edges(&self) -> impl Iterator<Item = (Player, Player)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors_of(&self, p: Player) -> Vec<Player> {
        let mut out = Vec::new();
        for &(a, b) in &self.edges {
            if a == p {
                out.push(b);
            } else if b == p {
                out.push(a);
            }
        }
        out.sort();
        out
    }
}

/// Dependency hypergraph: one characteristic edge per player, keyed by its
/// owner. The edge of `p` is `{p} ∪ Neigh(p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    names: Vec<String>,
    edges: Vec<BTreeSet<Player>>,
}

impl Hypergraph {
    pub fn new(names: Vec<String>, edges: Vec<BTreeSet<Player>>) -> Self {
        debug_assert_eq!(names.len(), edges.len());
        Hypergraph { names, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, p: Player) -> &str {
        &self.names[p.idx()]
    }

    /// Characteristic edge of `owner`.
    pub fn edge(&self, owner: Player) -> &BTreeSet<Player> {
        &self.edges[owner.idx()]
    }

    pub fn edges(&self) -> impl Iterator<Item = (Player, &BTreeSet<Player>)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .map(|(i, e)| (Player(i as u32), e))
    }

    /// Clique expansion: `{u,v}` is an edge iff `u ≠ v` co-occur in some
    /// hyperedge.
    pub fn primal(&self) -> Graph {
        let mut g = Graph::new(self.names.clone());
        for edge in &self.edges {
            let verts: Vec<Player> = edge.iter().copied().collect();
            for i in 0..verts.len() {
                for j in (i + 1)..verts.len() {
                    g.add_edge(verts[i], verts[j]);
                }
            }
        }
        g
    }
}

/// Size and interaction metrics of a game.
#[derive(Debug, Clone, PartialEq)]
pub struct GameMetrics {
    /// Encoding size: payoff cell count plus one header item per player,
    /// action, and neighbor link.
    pub size_norm: u64,
    pub max_neigh: usize,
    pub max_act: usize,
    /// `max_neigh · log2(max_act) / log2(size_norm)`; zero when a player
    /// count or action count makes the numerator vanish.
    pub intricacy: f64,
}

impl GameMetrics {
    pub fn intricacy_string(&self) -> String {
        format!("{:.6}", self.intricacy)
    }
}

// ---------------------------------------------------------------------------
// Game trait and the two representations
// ---------------------------------------------------------------------------

pub trait Game {
    fn player_count(&self) -> usize;
    fn player_names(&self) -> &[String];
    fn action_names(&self, p: Player) -> &[String];
    /// Neighbors of `p`, sorted by declared player order, never containing
    /// `p` itself.
    fn neighbors(&self, p: Player) -> &[Player];
    /// Utility of `p` under a dense global action vector.
    fn utility_global(&self, p: Player, x: &[Action]) -> Payoff;
    /// Utility of `p` under a profile whose scope covers the domain of
    /// `p`'s utility function (its projection is used).
    fn utility_of(&self, p: Player, x: &Profile) -> Result<Payoff, GameError>;
    /// Total number of payoff cells in the representation.
    fn payoff_cell_count(&self) -> u64;
    /// Re-checks every representation invariant.
    fn validate(&self) -> Result<(), GameError>;

    fn action_count(&self, p: Player) -> usize {
        self.action_names(p).len()
    }

    fn players(&self) -> Vec<Player> {
        (0..self.player_count()).map(|i| Player(i as u32)).collect()
    }

    fn player_name(&self, p: Player) -> &str {
        &self.player_names()[p.idx()]
    }

    fn player_by_name(&self, name: &str) -> Option<Player> {
        self.player_names()
            .iter()
            .position(|n| n == name)
            .map(|i| Player(i as u32))
    }

    fn action_by_name(&self, p: Player, name: &str) -> Option<Action> {
        self.action_names(p)
            .iter()
            .position(|n| n == name)
            .map(|i| Action(i as u32))
    }

    /// Number of global profiles, or `None` on overflow.
    fn profile_space(&self) -> Option<u64> {
        let sizes: Vec<usize> = self
            .players()
            .iter()
            .map(|&p| self.action_count(p))
            .collect();
        radix_strides(&sizes).map(|(_, total)| total)
    }

    /// The undirected dependency graph: `{p,q}` is an edge iff one of the
    /// two is a neighbor of the other.
    fn dependency_graph(&self) -> Graph {
        let mut g = Graph::new(self.player_names().to_vec());
        for p in self.players() {
            for &q in self.neighbors(p) {
                g.add_edge(p, q);
            }
        }
        g
    }

    /// The dependency hypergraph with one characteristic edge per player.
    fn dependency_hypergraph(&self) -> Hypergraph {
        let edges = self
            .players()
            .iter()
            .map(|&p| {
                let mut e: BTreeSet<Player> = self.neighbors(p).iter().copied().collect();
                e.insert(p);
                e
            })
            .collect();
        Hypergraph::new(self.player_names().to_vec(), edges)
    }

    fn metrics(&self) -> GameMetrics {
        let mut header: u64 = 0;
        let mut max_neigh = 0usize;
        let mut max_act = 0usize;
        for p in self.players() {
            let acts = self.action_count(p);
            let neigh = self.neighbors(p).len();
            header += 1 + acts as u64 + neigh as u64;
            max_neigh = max_neigh.max(neigh);
            max_act = max_act.max(acts);
        }
        let size_norm = self.payoff_cell_count() + header;
        let intricacy = if max_neigh == 0 || max_act <= 1 {
            0.0
        } else {
            max_neigh as f64 * (max_act as f64).log2() / (size_norm as f64).log2()
        };
        GameMetrics {
            size_norm,
            max_neigh,
            max_act,
            intricacy,
        }
    }
}

#[derive(Debug)]
struct UtilityTable {
    /// Owner first, then the owner's neighbors in declared player order.
    scope: Vec<Player>,
    strides: Vec<u64>,
    payoffs: Vec<Payoff>,
}

/// A game in graphical normal form: one utility table per player over
/// `{p} ∪ Neigh(p)`.
#[derive(Debug)]
pub struct GnfGame {
    names: Vec<String>,
    actions: Vec<Vec<String>>,
    neighbors: Vec<Vec<Player>>,
    tables: Vec<UtilityTable>,
}

impl GnfGame {
    /// Scope of `p`'s utility table: `p` first, then `Neigh(p)` in declared
    /// player order.
    pub fn table_scope(&self, p: Player) -> &[Player] {
        &self.tables[p.idx()].scope
    }

    /// Utility of `p` given actions aligned with [`GnfGame::table_scope`].
    pub fn utility_scoped(&self, p: Player, scoped: &[Action]) -> Payoff {
        let t = &self.tables[p.idx()];
        debug_assert_eq!(scoped.len(), t.scope.len());
        let idx: u64 = scoped
            .iter()
            .zip(&t.strides)
            .map(|(a, s)| a.0 as u64 * s)
            .sum();
        t.payoffs[idx as usize]
    }

    fn check_header(
        names: &[String],
        actions: &[Vec<String>],
        neighbors: &[Vec<Player>],
    ) -> Result<(), GameError> {
        let mut seen = BTreeSet::new();
        for n in names {
            if n.is_empty() {
                return Err(GameError::UnknownPlayer {
                    name: "(empty)".into(),
                });
            }
            if !seen.insert(n.clone()) {
                return Err(GameError::DuplicatePlayer { player: n.clone() });
            }
        }
        for (i, acts) in actions.iter().enumerate() {
            if acts.is_empty() {
                return Err(GameError::EmptyActions {
                    player: names[i].clone(),
                });
            }
            let mut seen = BTreeSet::new();
            for a in acts {
                if a.is_empty() || !seen.insert(a.clone()) {
                    return Err(GameError::DuplicateAction {
                        player: names[i].clone(),
                        action: a.clone(),
                    });
                }
            }
        }
        for (i, neigh) in neighbors.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for &q in neigh {
                if q.idx() == i {
                    return Err(GameError::SelfNeighbor {
                        player: names[i].clone(),
                    });
                }
                if q.idx() >= names.len() {
                    return Err(GameError::UnknownPlayer {
                        name: format!("{q}"),
                    });
                }
                if !seen.insert(q) {
                    return Err(GameError::DuplicatePlayer {
                        player: names[q.idx()].clone(),
                    });
                }
            }
        }
        Ok(())
    }

    fn scope_of(p: usize, neighbors: &[Vec<Player>]) -> Vec<Player> {
        let mut scope = vec![Player(p as u32)];
        let mut ns = neighbors[p].clone();
        ns.sort();
        scope.extend(ns);
        scope
    }

    /// Builds a game by calling `util` once for every combined strategy of
    /// every player's table scope.
    pub fn from_utility_fn<F>(
        names: Vec<String>,
        actions: Vec<Vec<String>>,
        neighbors: Vec<Vec<Player>>,
        util: F,
    ) -> Result<GnfGame, GameError>
    where
        F: Fn(Player, &ScopedStrategy<'_>) -> Payoff,
    {
        Self::check_header(&names, &actions, &neighbors)?;
        let mut tables = Vec::with_capacity(names.len());
        for (p, name) in names.iter().enumerate() {
            let scope = Self::scope_of(p, &neighbors);
            let sizes: Vec<usize> = scope.iter().map(|q| actions[q.idx()].len()).collect();
            let (strides, total) = radix_strides(&sizes).ok_or_else(|| GameError::TooLarge {
                what: format!("utility table of {name}"),
            })?;
            if total > 50_000_000 {
                return Err(GameError::TooLarge {
                    what: format!("utility table of {name} ({total} cells)"),
                });
            }
            let mut payoffs = Vec::with_capacity(total as usize);
            let mut digits = vec![0u32; scope.len()];
            loop {
                let view = ScopedStrategy {
                    scope: &scope,
                    digits: &digits,
                };
                payoffs.push(util(Player(p as u32), &view));
                if !radix_advance(&mut digits, &sizes) {
                    break;
                }
            }
            tables.push(UtilityTable {
                scope,
                strides,
                payoffs,
            });
        }
        Ok(GnfGame {
            names,
            actions,
            neighbors,
            tables,
        })
    }

    /// Builds a game from explicit table rows, one list per player. Each row
    /// assigns a payoff to a full combined strategy over the player's table
    /// scope; completeness and absence of duplicates are enforced.
    pub fn from_tables(
        names: Vec<String>,
        actions: Vec<Vec<String>>,
        neighbors: Vec<Vec<Player>>,
        rows: Vec<Vec<(BTreeMap<Player, Action>, Payoff)>>,
    ) -> Result<GnfGame, GameError> {
        Self::check_header(&names, &actions, &neighbors)?;
        if rows.len() != names.len() {
            return Err(GameError::MissingTableEntry {
                player: "(table list)".into(),
                context: "per-player row lists".into(),
            });
        }
        let mut tables = Vec::with_capacity(names.len());
        for p in 0..names.len() {
            let scope = Self::scope_of(p, &neighbors);
            let sizes: Vec<usize> = scope.iter().map(|q| actions[q.idx()].len()).collect();
            let (strides, total) = radix_strides(&sizes).ok_or_else(|| GameError::TooLarge {
                what: format!("utility table of {}", names[p]),
            })?;
            let mut slots: Vec<Option<Payoff>> = vec![None; total as usize];
            for (when, payoff) in &rows[p] {
                if when.len() != scope.len() {
                    let ctx = describe_when(&names, &actions, when);
                    return Err(if when.len() < scope.len() {
                        GameError::MissingTableEntry {
                            player: names[p].clone(),
                            context: ctx,
                        }
                    } else {
                        GameError::DuplicateTableEntry {
                            player: names[p].clone(),
                            context: ctx,
                        }
                    });
                }
                let mut idx: u64 = 0;
                for (pos, q) in scope.iter().enumerate() {
                    let a = when.get(q).ok_or_else(|| GameError::ScopeTooSmall {
                        player: names[p].clone(),
                        missing: names[q.idx()].clone(),
                    })?;
                    if a.idx() >= sizes[pos] {
                        return Err(GameError::UnknownAction {
                            player: names[q.idx()].clone(),
                            action: format!("#{}", a.0),
                        });
                    }
                    idx += a.0 as u64 * strides[pos];
                }
                let slot = &mut slots[idx as usize];
                if slot.is_some() {
                    return Err(GameError::DuplicateTableEntry {
                        player: names[p].clone(),
                        context: describe_when(&names, &actions, when),
                    });
                }
                *slot = Some(*payoff);
            }
            let mut payoffs = Vec::with_capacity(total as usize);
            for (i, slot) in slots.into_iter().enumerate() {
                match slot {
                    Some(v) => payoffs.push(v),
                    None => {
                        let ctx = describe_index(&names, &actions, &scope, &strides, i as u64);
                        return Err(GameError::MissingTableEntry {
                            player: names[p].clone(),
                            context: ctx,
                        });
                    }
                }
            }
            tables.push(UtilityTable {
                scope,
                strides,
                payoffs,
            });
        }
        Ok(GnfGame {
            names,
            actions,
            neighbors,
            tables,
        })
    }

    /// Table rows of `p` in canonical order, for serialization.
    pub fn table_rows(&self, p: Player) -> Vec<(Vec<Action>, Payoff)> {
        let t = &self.tables[p.idx()];
        let sizes: Vec<usize> = t
            .scope
            .iter()
            .map(|q| self.actions[q.idx()].len())
            .collect();
        let mut digits = vec![0u32; t.scope.len()];
        let mut rows = Vec::with_capacity(t.payoffs.len());
        let mut k = 0usize;
        loop {
            rows.push((digits.iter().map(|&d| Action(d)).collect(), t.payoffs[k]));
            k += 1;
            if !radix_advance(&mut digits, &sizes) {
                break;
            }
        }
        rows
    }
}

fn describe_when(
    names: &[String],
    actions: &[Vec<String>],
    when: &BTreeMap<Player, Action>,
) -> String {
    let parts: Vec<String> = when
        .iter()
        .map(|(q, a)| {
            let an = actions[q.idx()]
                .get(a.idx())
                .cloned()
                .unwrap_or_else(|| format!("#{}", a.0));
            format!("{}:{}", names[q.idx()], an)
        })
        .collect();
    format!("{{{}}}", parts.join(","))
}

fn describe_index(
    names: &[String],
    actions: &[Vec<String>],
    scope: &[Player],
    strides: &[u64],
    mut idx: u64,
) -> String {
    let mut parts = Vec::with_capacity(scope.len());
    for (q, s) in scope.iter().zip(strides) {
        let a = (idx / s) as usize;
        idx %= s;
        parts.push(format!("{}:{}", names[q.idx()], actions[q.idx()][a]));
    }
    format!("{{{}}}", parts.join(","))
}

/// View of one combined strategy over a table scope, passed to utility
/// closures during construction.
pub struct ScopedStrategy<'a> {
    scope: &'a [Player],
    digits: &'a [u32],
}

impl ScopedStrategy<'_> {
    /// Action of `q`, which must belong to the scope.
    pub fn action(&self, q: Player) -> Action {
        let pos = self
            .scope
            .iter()
            .position(|&s| s == q)
            .expect("player not in table scope");
        Action(self.digits[pos])
    }
}

impl Game for GnfGame {
    fn player_count(&self) -> usize {
        self.names.len()
    }

    fn player_names(&self) -> &[String] {
        &self.names
    }

    fn action_names(&self, p: Player) -> &[String] {
        &self.actions[p.idx()]
    }

    fn neighbors(&self, p: Player) -> &[Player] {
        &self.neighbors[p.idx()]
    }

    fn utility_global(&self, p: Player, x: &[Action]) -> Payoff {
        let t = &self.tables[p.idx()];
        let idx: u64 = t
            .scope
            .iter()
            .zip(&t.strides)
            .map(|(q, s)| x[q.idx()].0 as u64 * s)
            .sum();
        t.payoffs[idx as usize]
    }

    fn utility_of(&self, p: Player, x: &Profile) -> Result<Payoff, GameError> {
        if p.idx() >= self.names.len() {
            return Err(GameError::UnknownPlayer {
                name: format!("{p}"),
            });
        }
        let t = &self.tables[p.idx()];
        let mut idx: u64 = 0;
        for (q, s) in t.scope.iter().zip(&t.strides) {
            let a = x.get(*q).ok_or_else(|| GameError::ScopeTooSmall {
                player: self.names[p.idx()].clone(),
                missing: self.names[q.idx()].clone(),
            })?;
            if a.idx() >= self.actions[q.idx()].len() {
                return Err(GameError::UnknownAction {
                    player: self.names[q.idx()].clone(),
                    action: format!("#{}", a.0),
                });
            }
            idx += a.0 as u64 * s;
        }
        Ok(t.payoffs[idx as usize])
    }

    fn payoff_cell_count(&self) -> u64 {
        self.tables.iter().map(|t| t.payoffs.len() as u64).sum()
    }

    fn validate(&self) -> Result<(), GameError> {
        Self::check_header(&self.names, &self.actions, &self.neighbors)?;
        for p in 0..self.names.len() {
            let t = &self.tables[p];
            let expected = Self::scope_of(p, &self.neighbors);
            if t.scope != expected {
                return Err(GameError::MissingTableEntry {
                    player: self.names[p].clone(),
                    context: "scope mismatch".into(),
                });
            }
            let sizes: Vec<usize> = t
                .scope
                .iter()
                .map(|q| self.actions[q.idx()].len())
                .collect();
            let total = sizes.iter().map(|&s| s as u64).product::<u64>();
            if t.payoffs.len() as u64 != total {
                return Err(GameError::MissingTableEntry {
                    player: self.names[p].clone(),
                    context: format!("{} of {} cells", t.payoffs.len(), total),
                });
            }
        }
        Ok(())
    }
}

/// A game in standard normal form: one cell per global profile holding a
/// payoff for every player.
#[derive(Debug)]
pub struct SnfGame {
    names: Vec<String>,
    actions: Vec<Vec<String>>,
    /// All other players, per player; the SNF table makes everyone depend
    /// on everyone else.
    neighbors_all: Vec<Vec<Player>>,
    strides: Vec<u64>,
    /// cells[profile_index][player_index]
    cells: Vec<Vec<Payoff>>,
}

impl SnfGame {
    pub fn from_cells(
        names: Vec<String>,
        actions: Vec<Vec<String>>,
        rows: Vec<(BTreeMap<Player, Action>, Vec<Payoff>)>,
    ) -> Result<SnfGame, GameError> {
        let n = names.len();
        let neighbors_all: Vec<Vec<Player>> = (0..n)
            .map(|p| {
                (0..n)
                    .filter(|&q| q != p)
                    .map(|q| Player(q as u32))
                    .collect()
            })
            .collect();
        GnfGame::check_header(&names, &actions, &neighbors_all)?;
        let sizes: Vec<usize> = actions.iter().map(|a| a.len()).collect();
        let (strides, total) = radix_strides(&sizes).ok_or_else(|| GameError::TooLarge {
            what: "global profile space".into(),
        })?;
        if total > 50_000_000 {
            return Err(GameError::TooLarge {
                what: format!("global profile space ({total} cells)"),
            });
        }
        let mut slots: Vec<Option<Vec<Payoff>>> = vec![None; total as usize];
        for (when, payoffs) in rows {
            if when.len() != n || payoffs.len() != n {
                return Err(GameError::MissingTableEntry {
                    player: "(snf)".into(),
                    context: describe_when(&names, &actions, &when),
                });
            }
            let mut idx: u64 = 0;
            for q in 0..n {
                let a = when
                    .get(&Player(q as u32))
                    .ok_or_else(|| GameError::ScopeTooSmall {
                        player: "(snf)".into(),
                        missing: names[q].clone(),
                    })?;
                if a.idx() >= sizes[q] {
                    return Err(GameError::UnknownAction {
                        player: names[q].clone(),
                        action: format!("#{}", a.0),
                    });
                }
                idx += a.0 as u64 * strides[q];
            }
            let slot = &mut slots[idx as usize];
            if slot.is_some() {
                return Err(GameError::DuplicateTableEntry {
                    player: "(snf)".into(),
                    context: describe_when(&names, &actions, &when),
                });
            }
            *slot = Some(payoffs);
        }
        let mut cells = Vec::with_capacity(total as usize);
        let scope: Vec<Player> = (0..n).map(|i| Player(i as u32)).collect();
        for (i, slot) in slots.into_iter().enumerate() {
            match slot {
                Some(v) => cells.push(v),
                None => {
                    return Err(GameError::MissingTableEntry {
                        player: "(snf)".into(),
                        context: describe_index(&names, &actions, &scope, &strides, i as u64),
                    })
                }
            }
        }
        Ok(SnfGame {
            names,
            actions,
            neighbors_all,
            strides,
            cells,
        })
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// Cells in canonical profile order, for serialization.
    pub fn cell_rows(&self) -> Vec<(Vec<Action>, &[Payoff])> {
        let sizes: Vec<usize> = self.actions.iter().map(|a| a.len()).collect();
        let mut digits = vec![0u32; sizes.len()];
        let mut out = Vec::with_capacity(self.cells.len());
        let mut k = 0usize;
        loop {
            out.push((
                digits.iter().map(|&d| Action(d)).collect(),
                self.cells[k].as_slice(),
            ));
            k += 1;
            if !radix_advance(&mut digits, &sizes) {
                break;
            }
        }
        out
    }
}

impl Game for SnfGame {
    fn player_count(&self) -> usize {
        self.names.len()
    }

    fn player_names(&self) -> &[String] {
        &self.names
    }

    fn action_names(&self, p: Player) -> &[String] {
        &self.actions[p.idx()]
    }

    fn neighbors(&self, p: Player) -> &[Player] {
        &self.neighbors_all[p.idx()]
    }

    fn utility_global(&self, p: Player, x: &[Action]) -> Payoff {
        let idx: u64 = x
            .iter()
            .zip(&self.strides)
            .map(|(a, s)| a.0 as u64 * s)
            .sum();
        self.cells[idx as usize][p.idx()]
    }

    fn utility_of(&self, p: Player, x: &Profile) -> Result<Payoff, GameError> {
        if p.idx() >= self.names.len() {
            return Err(GameError::UnknownPlayer {
                name: format!("{p}"),
            });
        }
        let dense = x.to_dense(self.names.len())?;
        for (q, a) in dense.iter().enumerate() {
            if a.idx() >= self.actions[q].len() {
                return Err(GameError::UnknownAction {
                    player: self.names[q].clone(),
                    action: format!("#{}", a.0),
                });
            }
        }
        Ok(self.utility_global(p, &dense))
    }

    fn payoff_cell_count(&self) -> u64 {
        self.cells.len() as u64
    }

    fn validate(&self) -> Result<(), GameError> {
        GnfGame::check_header(&self.names, &self.actions, &self.neighbors_all)?;
        let sizes: Vec<usize> = self.actions.iter().map(|a| a.len()).collect();
        let total = sizes.iter().map(|&s| s as u64).product::<u64>();
        if self.cells.len() as u64 != total {
            return Err(GameError::MissingTableEntry {
                player: "(snf)".into(),
                context: format!("{} of {} cells", self.cells.len(), total),
            });
        }
        for cell in &self.cells {
            if cell.len() != self.names.len() {
                return Err(GameError::MissingTableEntry {
                    player: "(snf)".into(),
                    context: "cell without a payoff for every player".into(),
                });
            }
        }
        Ok(())
    }
}

/// Either representation, as parsed from a game file.
#[derive(Debug)]
pub enum AnyGame {
    Gnf(GnfGame),
    Snf(SnfGame),
}

impl AnyGame {
    pub fn as_gnf(&self) -> Option<&GnfGame> {
        match self {
            AnyGame::Gnf(g) => Some(g),
            AnyGame::Snf(_) => None,
        }
    }
}

impl Game for AnyGame {
    fn player_count(&self) -> usize {
        match self {
            AnyGame::Gnf(g) => g.player_count(),
            AnyGame::Snf(g) => g.player_count(),
        }
    }

    fn player_names(&self) -> &[String] {
        match self {
            AnyGame::Gnf(g) => g.player_names(),
            AnyGame::Snf(g) => g.player_names(),
        }
    }

    fn action_names(&self, p: Player) -> &[String] {
        match self {
            AnyGame::Gnf(g) => g.action_names(p),
            AnyGame::Snf(g) => g.action_names(p),
        }
    }

    fn neighbors(&self, p: Player) -> &[Player] {
        match self {
            AnyGame::Gnf(g) => g.neighbors(p),
            AnyGame::Snf(g) => g.neighbors(p),
        }
    }

    fn utility_global(&self, p: Player, x: &[Action]) -> Payoff {
        match self {
            AnyGame::Gnf(g) => g.utility_global(p, x),
            AnyGame::Snf(g) => g.utility_global(p, x),
        }
    }

    fn utility_of(&self, p: Player, x: &Profile) -> Result<Payoff, GameError> {
        match self {
            AnyGame::Gnf(g) => g.utility_of(p, x),
            AnyGame::Snf(g) => g.utility_of(p, x),
        }
    }

    fn payoff_cell_count(&self) -> u64 {
        match self {
            AnyGame::Gnf(g) => g.payoff_cell_count(),
            AnyGame::Snf(g) => g.payoff_cell_count(),
        }
    }

    fn validate(&self) -> Result<(), GameError> {
        match self {
            AnyGame::Gnf(g) => g.validate(),
            AnyGame::Snf(g) => g.validate(),
        }
    }
}
