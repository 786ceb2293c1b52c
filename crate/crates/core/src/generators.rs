//! Game-instance generators: the FRIENDS fixtures, reductions from CNF and
//! exists/forall Boolean formulas whose equilibrium sets mirror the formula
//! semantics, and seeded random games for property tests.
//!
//! Each reduction's correctness is a testable correspondence (model counts,
//! validity, satisfiability) exercised against the brute oracles.

use thiserror::Error;

use crate::game::{Game, GameError, GnfGame, Payoff, Player, Profile, ScopedStrategy};
use crate::util::SplitMix64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("formula has no clauses")]
    EmptyFormula,
    #[error("formula has no variables")]
    NoVariables,
    #[error("clause {index} is empty")]
    EmptyClause { index: usize },
    #[error("disjunct {index} is empty")]
    EmptyDisjunct { index: usize },
    #[error("disjunct count {count} must be a power of two of at least four; pad first")]
    Unpadded { count: usize },
    #[error(transparent)]
    Game(#[from] GameError),
}

// ---------------------------------------------------------------------------
// Formula types
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CnfLit {
    pub var: usize,
    pub positive: bool,
}

/// A CNF formula over named variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf {
    pub variables: Vec<String>,
    pub clauses: Vec<Vec<CnfLit>>,
}

impl Cnf {
    pub fn eval(&self, assign: impl Fn(usize) -> bool) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|l| assign(l.var) == l.positive))
    }
}

/// Test helper: literals as variable names, `!` for negation.
pub fn parse_lits(vars: &[&str], lits: &[&str]) -> Vec<CnfLit> {
    lits.iter()
        .map(|l| {
            let (positive, name) = match l.strip_prefix('!') {
                Some(rest) => (false, rest),
                None => (true, *l),
            };
            let var = vars.iter().position(|v| *v == name).expect("declared var");
            CnfLit { var, positive }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QbfVar {
    Exists(usize),
    Forall(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QbfLit {
    pub var: QbfVar,
    pub positive: bool,
}

impl QbfLit {
    pub fn exists(i: usize, positive: bool) -> QbfLit {
        QbfLit {
            var: QbfVar::Exists(i),
            positive,
        }
    }

    pub fn forall(j: usize, positive: bool) -> QbfLit {
        QbfLit {
            var: QbfVar::Forall(j),
            positive,
        }
    }
}

/// An exists/forall quantified Boolean formula whose matrix is a
/// disjunction of conjunctions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct R2Qbf {
    pub exists: Vec<String>,
    pub forall: Vec<String>,
    pub disjuncts: Vec<Vec<QbfLit>>,
}

impl R2Qbf {
    pub fn matrix_eval(&self, assign: impl Fn(QbfVar) -> bool) -> bool {
        self.disjuncts
            .iter()
            .any(|d| d.iter().all(|l| assign(l.var) == l.positive))
    }

    /// Padded form: disjunct count is a power of two, at least four.
    pub fn is_padded(&self) -> bool {
        let m = self.disjuncts.len();
        m >= 4 && m.is_power_of_two()
    }

    /// The eight-disjunct example with three existential and five universal
    /// variables; valid (set every existential true).
    pub fn running_example() -> R2Qbf {
        let e = QbfLit::exists;
        let u = QbfLit::forall;
        R2Qbf {
            exists: vec!["a1".into(), "a2".into(), "a3".into()],
            forall: vec![
                "b1".into(),
                "b2".into(),
                "b3".into(),
                "b4".into(),
                "b5".into(),
            ],
            disjuncts: vec![
                vec![e(0, true), e(1, true)],
                vec![e(0, true), e(2, true)],
                vec![e(0, true), u(0, false)],
                vec![u(0, true)],
                vec![u(1, false), u(2, false)],
                vec![u(0, true), u(2, true)],
                vec![u(2, true), u(3, true)],
                vec![u(4, true)],
            ],
        }
    }
}

// ---------------------------------------------------------------------------
// FRIENDS fixtures
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FriendsVariant {
    Base,
    /// Adds Laura, who watches George, Pauline, and Mary; her characteristic
    /// edge makes the hypergraph cyclic while its hypertree width stays 2.
    Prime,
}

/// The five-player evening-planning game (George, Pauline, Frank, Robert,
/// Mary), each choosing movie or opera.
pub fn gen_friends(variant: FriendsVariant) -> GnfGame {
    let mut names: Vec<String> = ["G", "P", "F", "R", "M"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut actions: Vec<Vec<String>> = (0..5)
        .map(|_| vec!["m".to_string(), "o".to_string()])
        .collect();
    // Indices: G=0, P=1, F=2, R=3, M=4 (, L=5).
    let mut neighbors: Vec<Vec<Player>> = vec![
        vec![Player(1), Player(2)], // G watches P, F
        vec![Player(2)],            // P watches F
        vec![Player(1), Player(3)], // F watches P, R
        vec![Player(2)],            // R watches F
        vec![Player(3)],            // M watches R
    ];
    if variant == FriendsVariant::Prime {
        names.push("L".to_string());
        actions.push(vec!["m".to_string(), "o".to_string()]);
        neighbors.push(vec![Player(0), Player(1), Player(4)]); // L watches G, P, M
    }

    let util = move |p: Player, s: &ScopedStrategy<'_>| -> Payoff {
        let v = match p.0 {
            // George: wants Frank and Pauline together, best at the movies;
            // indifferent about his own evening.
            0 => {
                let (pp, f) = (s.action(Player(1)).0, s.action(Player(2)).0);
                match (pp, f) {
                    (0, 0) => 2,
                    (1, 1) => 1,
                    _ => 0,
                }
            }
            // Pauline: with Frank, preferring the movies.
            1 => {
                let (own, f) = (s.action(Player(1)).0, s.action(Player(2)).0);
                match (own, f) {
                    (0, 0) => 2,
                    (1, 1) => 1,
                    _ => 0,
                }
            }
            // Frank: join both if possible; else movies with Pauline or
            // opera with Robert.
            2 => {
                let own = s.action(Player(2)).0;
                let (pp, r) = (s.action(Player(1)).0, s.action(Player(3)).0);
                match (own, pp, r) {
                    (0, 0, 0) => 2,
                    (0, 0, 1) => 2,
                    (0, 1, 0) => 1,
                    (0, 1, 1) => 0,
                    (1, 0, 0) => 0,
                    (1, 0, 1) => 2,
                    (1, 1, 0) => 1,
                    (1, 1, 1) => 2,
                    _ => unreachable!(),
                }
            }
            // Robert: prefers the opera and avoids Frank.
            3 => {
                let (own, f) = (s.action(Player(3)).0, s.action(Player(2)).0);
                match (own, f) {
                    (0, 0) => 0,
                    (0, 1) => 1,
                    (1, 0) => 2,
                    _ => 0,
                }
            }
            // Mary: the opera with Robert.
            4 => {
                let (own, r) = (s.action(Player(4)).0, s.action(Player(3)).0);
                match (own, r) {
                    (0, 0) => 1,
                    (1, 1) => 2,
                    _ => 0,
                }
            }
            // Laura: the movies with George, or the opera with Pauline and
            // Mary.
            5 => {
                let own = s.action(Player(5)).0;
                let (g, pp, ma) = (
                    s.action(Player(0)).0,
                    s.action(Player(1)).0,
                    s.action(Player(4)).0,
                );
                if own == 0 {
                    if g == 0 {
                        2
                    } else {
                        0
                    }
                } else if pp == 1 && ma == 1 {
                    2
                } else {
                    0
                }
            }
            _ => unreachable!(),
        };
        Payoff::from_integer(v)
    };
    GnfGame::from_utility_fn(names, actions, neighbors, util).expect("fixture is well formed")
}

// ---------------------------------------------------------------------------
// CNF reductions
// ---------------------------------------------------------------------------

fn check_clauses(phi: &Cnf) -> Result<(), GenError> {
    if phi.clauses.is_empty() {
        return Err(GenError::EmptyFormula);
    }
    if phi.variables.is_empty() {
        return Err(GenError::NoVariables);
    }
    for (i, c) in phi.clauses.iter().enumerate() {
        if c.is_empty() {
            return Err(GenError::EmptyClause { index: i });
        }
    }
    Ok(())
}

/// Clause/variable game: one player per variable and per clause, actions
/// {t,f,u}. Its pure equilibria are in one-to-one correspondence with the
/// satisfying assignments of the formula; with 3SAT-shaped input the
/// neighborhoods stay 3-bounded.
#[allow(clippy::if_same_then_else)] // distinct payoff rules share a value
pub fn gen_sat_clausevar(phi: &Cnf) -> Result<GnfGame, GenError> {
    check_clauses(phi)?;
    let nv = phi.variables.len();
    let nc = phi.clauses.len();
    let mut names: Vec<String> = phi.variables.clone();
    names.extend((1..=nc).map(|j| format!("c{j}")));
    let actions: Vec<Vec<String>> = (0..nv + nc)
        .map(|_| vec!["t".into(), "f".into(), "u".into()])
        .collect();

    let mut neighbors: Vec<Vec<Player>> = vec![Vec::new(); nv + nc];
    let mut clause_vars: Vec<Vec<CnfLit>> = Vec::with_capacity(nc);
    let mut var_clauses: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (j, clause) in phi.clauses.iter().enumerate() {
        let cp = Player((nv + j) as u32);
        let mut vars: Vec<usize> = clause.iter().map(|l| l.var).collect();
        vars.sort();
        vars.dedup();
        for &v in &vars {
            neighbors[cp.idx()].push(Player(v as u32));
            neighbors[v].push(cp);
            var_clauses[v].push(j);
        }
        clause_vars.push(clause.clone());
    }

    const T: u32 = 0;
    const F: u32 = 1;
    const U: u32 = 2;
    let util = move |p: Player, s: &ScopedStrategy<'_>| -> Payoff {
        let v = if p.idx() < nv {
            // Variable player: paid for committing to a truth value while
            // her clauses are all committed too.
            let own = s.action(p).0;
            let mut all_tf = true;
            let mut any_u = false;
            for &j in &var_clauses[p.idx()] {
                let a = s.action(Player((nv + j) as u32)).0;
                all_tf &= a != U;
                any_u |= a == U;
            }
            if own != U && all_tf {
                3
            } else if own == U && any_u {
                2
            } else {
                1
            }
        } else {
            let clause = &clause_vars[p.idx() - nv];
            let own = s.action(p).0;
            let mut all_tf = true;
            let mut some_u = false;
            let mut clause_true = false;
            for l in clause {
                let a = s.action(Player(l.var as u32)).0;
                all_tf &= a != U;
                some_u |= a == U;
                clause_true |= a != U && (a == T) == l.positive;
            }
            if own == T && all_tf && clause_true {
                3
            } else if own == U && all_tf && !clause_true {
                2
            } else if own == F && some_u {
                2
            } else {
                1
            }
        };
        Payoff::from_integer(v)
    };
    Ok(GnfGame::from_utility_fn(names, actions, neighbors, util)?)
}

/// Tree-shaped satisfiability game: variable players with constant utility,
/// a tester checking the assignment, and a helper the tester chases when the
/// formula is unsatisfied. Equilibria are exactly the satisfying assignments
/// extended with the tester satisfied and the helper good.
pub fn gen_sat_acyclic(phi: &Cnf) -> Result<GnfGame, GenError> {
    if phi.variables.is_empty() {
        return Err(GenError::NoVariables);
    }
    let nv = phi.variables.len();
    let tester = Player(nv as u32);
    let helper = Player((nv + 1) as u32);
    let mut names = phi.variables.clone();
    names.push("T".into());
    names.push("H".into());
    let mut actions: Vec<Vec<String>> = (0..nv).map(|_| vec!["t".into(), "f".into()]).collect();
    actions.push(vec!["s".into(), "u".into()]);
    actions.push(vec!["g".into(), "b".into()]);
    let mut neighbors: Vec<Vec<Player>> = vec![Vec::new(); nv];
    let mut tn: Vec<Player> = (0..nv).map(|i| Player(i as u32)).collect();
    tn.push(helper);
    neighbors.push(tn);
    neighbors.push(vec![tester]);

    let phi = phi.clone();
    let util = move |p: Player, s: &ScopedStrategy<'_>| -> Payoff {
        let v = if p.idx() < nv {
            1
        } else if p == tester {
            let sat = phi.eval(|i| s.action(Player(i as u32)).0 == 0);
            let t = s.action(tester).0; // 0 = satisfied, 1 = unsatisfied
            let h = s.action(helper).0; // 0 = good, 1 = bad
            if (sat && t == 0) || (!sat && t == 1 && h == 0) || (!sat && t == 0 && h == 1) {
                1
            } else {
                0
            }
        } else {
            let t = s.action(tester).0;
            let h = s.action(helper).0;
            if (t == 0 && h == 0) || (t == 1 && h == 1) {
                1
            } else {
                0
            }
        };
        Payoff::from_integer(v)
    };
    Ok(GnfGame::from_utility_fn(names, actions, neighbors, util)?)
}

// ---------------------------------------------------------------------------
// QBF reductions
// ---------------------------------------------------------------------------

/// Pads the disjunct count up to the next power of two of at least four by
/// appending contradictory disjuncts over fresh existential variables;
/// validity is unchanged.
pub fn pad_r2qbf(xi: &R2Qbf) -> Result<R2Qbf, GenError> {
    if xi.disjuncts.is_empty() {
        return Err(GenError::EmptyFormula);
    }
    let m = xi.disjuncts.len();
    let target = m.max(4).next_power_of_two();
    let mut out = xi.clone();
    let mut k = 1usize;
    while out.disjuncts.len() < target {
        let name = loop {
            let candidate = format!("_pad{k}");
            k += 1;
            if !out.exists.contains(&candidate) && !out.forall.contains(&candidate) {
                break candidate;
            }
        };
        let idx = out.exists.len();
        out.exists.push(name);
        out.disjuncts
            .push(vec![QbfLit::exists(idx, true), QbfLit::exists(idx, false)]);
    }
    Ok(out)
}

/// Action tokens shared by the circuit players of the challenger game.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CTok {
    True,
    False,
    GiveUp,
    Unique,
}

/// Player layout of the challenger game: existential then universal
/// variable players, disjunct players as the leaves of a complete binary
/// tree, or-gate tree players above them, the challenger at the root, and
/// optionally the duplicator.
#[derive(Debug, Clone, Copy)]
struct ChallengerLayout {
    ne: usize,
    nu: usize,
    m: usize,
}

impl ChallengerLayout {
    fn exists(&self, i: usize) -> Player {
        Player(i as u32)
    }
    fn forall(&self, j: usize) -> Player {
        Player((self.ne + j) as u32)
    }
    fn disjunct(&self, k: usize) -> Player {
        Player((self.ne + self.nu + k) as u32)
    }
    fn tree(&self, k: usize) -> Player {
        Player((self.ne + self.nu + self.m + k) as u32)
    }
    fn challenger(&self) -> Player {
        Player((self.ne + self.nu + 2 * self.m - 2) as u32)
    }
    fn duplicator(&self) -> Player {
        Player((self.ne + self.nu + 2 * self.m - 1) as u32)
    }
    /// Heap slot 1 is the challenger, slots 2..m-1 the tree players, slots
    /// m..2m-1 the disjunct players in formula order.
    fn at_heap(&self, h: usize) -> Player {
        if h == 1 {
            self.challenger()
        } else if h < self.m {
            self.tree(h - 2)
        } else {
            self.disjunct(h - self.m)
        }
    }
    fn var_player(&self, v: QbfVar) -> Player {
        match v {
            QbfVar::Exists(i) => self.exists(i),
            QbfVar::Forall(j) => self.forall(j),
        }
    }
}

/// Challenger game of a padded formula. Universal-variable players profit
/// only when a watching disjunct player gives up, which the circuit lets
/// them force exactly when the matrix is falsified; the duplicator chases
/// the challenger and burns every profile in which anyone gives up. With
/// the duplicator, strong equilibria exist iff the formula is valid.
pub fn gen_qbf_challenger(xi: &R2Qbf, duplicator: bool) -> Result<GnfGame, GenError> {
    if !xi.is_padded() {
        return Err(GenError::Unpadded {
            count: xi.disjuncts.len(),
        });
    }
    for (i, d) in xi.disjuncts.iter().enumerate() {
        if d.is_empty() {
            return Err(GenError::EmptyDisjunct { index: i });
        }
    }
    let lay = ChallengerLayout {
        ne: xi.exists.len(),
        nu: xi.forall.len(),
        m: xi.disjuncts.len(),
    };
    let m = lay.m;

    let mut names: Vec<String> = xi.exists.clone();
    names.extend(xi.forall.iter().cloned());
    names.extend((1..=m).map(|k| format!("d{k}")));
    names.extend((1..=m - 2).map(|k| format!("t{k}")));
    names.push("C".into());
    let mut actions: Vec<Vec<String>> = Vec::new();
    for _ in 0..lay.ne + lay.nu {
        actions.push(vec!["T".into(), "F".into()]);
    }
    for _ in 0..2 * m - 2 {
        actions.push(vec!["T".into(), "F".into(), "w".into()]);
    }
    actions.push(if duplicator {
        vec!["T".into(), "w".into(), "u".into()]
    } else {
        vec!["T".into(), "w".into()]
    });
    if duplicator {
        names.push("D".into());
        actions.push(vec!["T".into(), "w".into(), "u".into()]);
    }

    // Token classification per player/action index.
    let toks: Vec<Vec<CTok>> = actions
        .iter()
        .map(|acts| {
            acts.iter()
                .map(|a| match a.as_str() {
                    "T" => CTok::True,
                    "F" => CTok::False,
                    "w" => CTok::GiveUp,
                    _ => CTok::Unique,
                })
                .collect()
        })
        .collect();

    let n = names.len();
    let mut neighbors: Vec<Vec<Player>> = vec![Vec::new(); n];
    let mut watchers: Vec<Vec<usize>> = vec![Vec::new(); lay.nu];
    for (k, d) in xi.disjuncts.iter().enumerate() {
        let dp = lay.disjunct(k);
        let mut vars: Vec<Player> = d.iter().map(|l| lay.var_player(l.var)).collect();
        vars.sort();
        vars.dedup();
        for &v in &vars {
            if v.idx() >= lay.ne && v.idx() < lay.ne + lay.nu {
                neighbors[v.idx()].push(dp);
                watchers[v.idx() - lay.ne].push(k);
            }
        }
        neighbors[dp.idx()].extend(vars);
        neighbors[dp.idx()].push(lay.at_heap((m + k) / 2));
    }
    for k in 0..m - 2 {
        let h = k + 2;
        let tp = lay.tree(k);
        neighbors[tp.idx()].push(lay.at_heap(h / 2));
        neighbors[tp.idx()].push(lay.at_heap(2 * h));
        neighbors[tp.idx()].push(lay.at_heap(2 * h + 1));
    }
    let c = lay.challenger();
    neighbors[c.idx()].push(lay.at_heap(2));
    neighbors[c.idx()].push(lay.at_heap(3));
    if duplicator {
        let d = lay.duplicator();
        neighbors[c.idx()].push(d);
        neighbors[d.idx()].push(c);
    }

    let disjuncts = xi.disjuncts.clone();
    let util = move |p: Player, s: &ScopedStrategy<'_>| -> Payoff {
        let tok = |q: Player| -> CTok { toks[q.idx()][s.action(q).idx()] };
        let v: i64 = if p.idx() < lay.ne {
            1
        } else if p.idx() < lay.ne + lay.nu {
            let j = p.idx() - lay.ne;
            let any_w = watchers[j]
                .iter()
                .any(|&k| tok(lay.disjunct(k)) == CTok::GiveUp);
            if any_w {
                2
            } else {
                1
            }
        } else if p.idx() < lay.ne + lay.nu + m {
            let k = p.idx() - lay.ne - lay.nu;
            let own = tok(p);
            let pa = tok(lay.at_heap((m + k) / 2));
            let made_true = disjuncts[k]
                .iter()
                .all(|l| (tok(lay.var_player(l.var)) == CTok::True) == l.positive);
            match own {
                CTok::GiveUp if pa == CTok::GiveUp && !made_true => 2,
                CTok::True if made_true => 1,
                CTok::False if !made_true && pa != CTok::GiveUp => 1,
                _ => 0,
            }
        } else if p.idx() < lay.ne + lay.nu + 2 * m - 2 {
            let k = p.idx() - lay.ne - lay.nu - m;
            let h = k + 2;
            let own = tok(p);
            let around = [
                tok(lay.at_heap(h / 2)),
                tok(lay.at_heap(2 * h)),
                tok(lay.at_heap(2 * h + 1)),
            ];
            let wn = around.iter().filter(|&&t| t == CTok::GiveUp).count();
            let (c1, c2) = (around[1], around[2]);
            match own {
                CTok::GiveUp if wn == 3 => 2,
                CTok::True if wn == 0 && (c1 == CTok::True || c2 == CTok::True) => 1,
                CTok::False if wn == 0 && c1 == CTok::False && c2 == CTok::False => 1,
                CTok::True | CTok::False if wn > 0 && wn < 3 => 1,
                _ => 0,
            }
        } else if p == lay.challenger() {
            let own = tok(p);
            let c1 = tok(lay.at_heap(2));
            let c2 = tok(lay.at_heap(3));
            // The big reward needs a full collapse: both or-gate children
            // reporting false, or both giving up. Rewarding a single
            // giving-up child with 2 would hand a strict improvement to a
            // coalition that falsifies only half of the disjuncts. A single
            // giving-up child instead yields the same payoff 1 as an
            // equilibrium, enough to destabilize partially collapsed
            // profiles without feeding any coalition.
            let full_collapse = (c1 == CTok::False && c2 == CTok::False)
                || (c1 == CTok::GiveUp && c2 == CTok::GiveUp);
            let half_collapse = (c1 == CTok::GiveUp) != (c2 == CTok::GiveUp);
            let wins_t = own == CTok::True
                && (c1 == CTok::True || c2 == CTok::True)
                && c1 != CTok::GiveUp
                && c2 != CTok::GiveUp;
            let gives_up = if duplicator {
                (own == CTok::GiveUp || own == CTok::Unique) && own != tok(lay.duplicator())
            } else {
                own == CTok::GiveUp
            };
            if gives_up && full_collapse {
                2
            } else if wins_t || (gives_up && half_collapse) {
                1
            } else {
                0
            }
        } else {
            // Duplicator: wants to mirror the challenger.
            if tok(p) == tok(lay.challenger()) {
                1
            } else {
                0
            }
        };
        Payoff::from_integer(v)
    };
    Ok(GnfGame::from_utility_fn(names, actions, neighbors, util)?)
}

/// Acyclic exists/forall game: universal-variable players profit when the
/// tester reports the matrix unsatisfied, which the helper only lets her do
/// when the matrix really is falsified. Equilibria are the matrix models
/// with the tester satisfied; strong equilibria exist iff the formula is
/// valid.
pub fn gen_qbf_acyclic(xi: &R2Qbf) -> Result<GnfGame, GenError> {
    let ne = xi.exists.len();
    let nu = xi.forall.len();
    let tester = Player((ne + nu) as u32);
    let helper = Player((ne + nu + 1) as u32);
    let mut names = xi.exists.clone();
    names.extend(xi.forall.iter().cloned());
    names.push("T".into());
    names.push("H".into());
    let mut actions: Vec<Vec<String>> =
        (0..ne + nu).map(|_| vec!["t".into(), "f".into()]).collect();
    actions.push(vec!["s".into(), "u".into()]);
    actions.push(vec!["g".into(), "b".into()]);

    let mut neighbors: Vec<Vec<Player>> = vec![Vec::new(); ne + nu + 2];
    for j in 0..nu {
        neighbors[ne + j].push(tester);
    }
    let mut tn: Vec<Player> = (0..ne + nu).map(|i| Player(i as u32)).collect();
    tn.push(helper);
    neighbors[tester.idx()] = tn;
    neighbors[helper.idx()] = vec![tester];

    let xi = xi.clone();
    let util = move |p: Player, s: &ScopedStrategy<'_>| -> Payoff {
        let v = if p.idx() < ne {
            1
        } else if p.idx() < ne + nu {
            if s.action(tester).0 == 1 {
                2
            } else {
                1
            }
        } else if p == tester {
            let sat = xi.matrix_eval(|var| {
                let q = match var {
                    QbfVar::Exists(i) => Player(i as u32),
                    QbfVar::Forall(j) => Player((ne + j) as u32),
                };
                s.action(q).0 == 0
            });
            let t = s.action(tester).0;
            let h = s.action(helper).0;
            if !sat && t == 1 && h == 0 {
                2
            } else if (sat && t == 0) || (!sat && t == 0 && h == 1) {
                1
            } else {
                0
            }
        } else {
            let t = s.action(tester).0;
            let h = s.action(helper).0;
            if (t == 0 && h == 0) || (t == 1 && h == 1) {
                1
            } else {
                0
            }
        };
        Payoff::from_integer(v)
    };
    Ok(GnfGame::from_utility_fn(names, actions, neighbors, util)?)
}

// ---------------------------------------------------------------------------
// Tree-of-clauses game
// ---------------------------------------------------------------------------

/// Verification actions of gate players: okay, or a flag naming a variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum GateTok {
    Okay,
    Meet(u32),
    Pos(u32),
    Neg(u32),
}

/// Actions of clause players: bail out, or commit to a literal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LeafTok {
    Bail,
    Lit(u32, bool),
}

/// Clause players pick literals at the leaves of a complete binary tree of
/// gate players; a coalition along the two paths from a pair of players
/// holding complementary literals to their least common ancestor profits by
/// flagging the conflict. Strong equilibria exist iff the formula is
/// satisfiable. The clause count is padded to a power of two by duplicating
/// the last clause.
pub fn gen_tree_sat(phi: &Cnf) -> Result<GnfGame, GenError> {
    check_clauses(phi)?;
    let mut clauses = phi.clauses.clone();
    // At least four leaves, so the root's children are gate players; with
    // clause players directly under the root, the vacuous parent condition
    // would let the root flag a committed literal on her own.
    let target = clauses.len().max(4).next_power_of_two();
    while clauses.len() < target {
        clauses.push(clauses.last().unwrap().clone());
    }
    let m = clauses.len();
    let nv = phi.variables.len();

    // Heap slots: 1..m-1 internal gate players, m..2m-1 clause leaves.
    let clause_player = |k: usize| Player(k as u32);
    let tree_player = |k: usize| Player((m + k) as u32);
    let at_heap = move |h: usize| -> Player {
        if h < m {
            tree_player(h - 1)
        } else {
            clause_player(h - m)
        }
    };

    let mut names: Vec<String> = (1..=m).map(|k| format!("c{k}")).collect();
    names.extend((1..=m - 1).map(|k| format!("t{k}")));

    let mut actions: Vec<Vec<String>> = Vec::new();
    let mut leaf_toks: Vec<Vec<LeafTok>> = Vec::new();
    for clause in &clauses {
        let mut acts = vec!["B".to_string()];
        let mut toks = vec![LeafTok::Bail];
        for l in clause {
            let name = if l.positive {
                phi.variables[l.var].clone()
            } else {
                format!("~{}", phi.variables[l.var])
            };
            if !acts.contains(&name) {
                acts.push(name);
                toks.push(LeafTok::Lit(l.var as u32, l.positive));
            }
        }
        actions.push(acts);
        leaf_toks.push(toks);
    }
    let mut gate_acts = vec!["T".to_string()];
    let mut gate_toks = vec![GateTok::Okay];
    for (i, v) in phi.variables.iter().enumerate() {
        gate_acts.push(format!("v_{v}"));
        gate_toks.push(GateTok::Meet(i as u32));
        gate_acts.push(format!("w_{v}"));
        gate_toks.push(GateTok::Pos(i as u32));
        gate_acts.push(format!("nw_{v}"));
        gate_toks.push(GateTok::Neg(i as u32));
    }
    for _ in 0..m - 1 {
        actions.push(gate_acts.clone());
    }

    let n = names.len();
    let mut neighbors: Vec<Vec<Player>> = vec![Vec::new(); n];
    for k in 0..m {
        let h = m + k;
        neighbors[clause_player(k).idx()].push(at_heap(h / 2));
    }
    for k in 0..m - 1 {
        let h = k + 1;
        let tp = tree_player(k);
        if h > 1 {
            neighbors[tp.idx()].push(at_heap(h / 2));
        }
        neighbors[tp.idx()].push(at_heap(2 * h));
        neighbors[tp.idx()].push(at_heap(2 * h + 1));
    }
    let _ = nv;

    // Child positions may hold gate or leaf players; classify uniformly.
    #[derive(Clone, Copy, PartialEq, Eq)]
    enum AnyTok {
        Gate(GateTok),
        Leaf(LeafTok),
    }
    let util = move |p: Player, s: &ScopedStrategy<'_>| -> Payoff {
        let any = |q: Player| -> AnyTok {
            if q.idx() < m {
                AnyTok::Leaf(leaf_toks[q.idx()][s.action(q).idx()])
            } else {
                AnyTok::Gate(gate_toks[s.action(q).idx()])
            }
        };
        let gate = |q: Player| -> GateTok { gate_toks[s.action(q).idx()] };
        let v: i64 = if p.idx() < m {
            let own = leaf_toks[p.idx()][s.action(p).idx()];
            let parent_ok = gate(at_heap((m + p.idx()) / 2)) == GateTok::Okay;
            match own {
                LeafTok::Lit(..) if parent_ok => 1,
                LeafTok::Bail if !parent_ok => 1,
                _ => 0,
            }
        } else {
            let k = p.idx() - m;
            let h = k + 1;
            let own = gate(p);
            let pa = if h > 1 {
                Some(gate(at_heap(h / 2)))
            } else {
                None
            };
            let c1 = any(at_heap(2 * h));
            let c2 = any(at_heap(2 * h + 1));
            let no_bail = c1 != AnyTok::Leaf(LeafTok::Bail) && c2 != AnyTok::Leaf(LeafTok::Bail);
            // A child supports the positive (negative) side of variable i
            // by passing the flag or committing to the matching literal.
            let side = |c: AnyTok, i: u32, positive: bool| -> bool {
                match c {
                    AnyTok::Gate(g) => {
                        g == if positive {
                            GateTok::Pos(i)
                        } else {
                            GateTok::Neg(i)
                        }
                    }
                    AnyTok::Leaf(LeafTok::Lit(v, pos)) => v == i && pos == positive,
                    AnyTok::Leaf(LeafTok::Bail) => false,
                }
            };
            // The directional flags demand a parent passing the same flag
            // (or meeting at this variable): a rootward chain must end at a
            // meet point, never at the root itself, or a single committed
            // literal could be flagged without a complementary partner.
            match own {
                GateTok::Okay => 1,
                GateTok::Pos(i)
                    if pa.is_some_and(|t| t == GateTok::Pos(i) || t == GateTok::Meet(i))
                        && no_bail
                        && (side(c1, i, true) || side(c2, i, true)) =>
                {
                    2
                }
                GateTok::Neg(i)
                    if pa.is_some_and(|t| t == GateTok::Neg(i) || t == GateTok::Meet(i))
                        && no_bail
                        && (side(c1, i, false) || side(c2, i, false)) =>
                {
                    2
                }
                GateTok::Meet(i)
                    if pa.is_none_or(|t| t == GateTok::Okay)
                        && ((side(c1, i, true) && side(c2, i, false))
                            || (side(c1, i, false) && side(c2, i, true))) =>
                {
                    2
                }
                _ => 0,
            }
        };
        Payoff::from_integer(v)
    };
    Ok(GnfGame::from_utility_fn(names, actions, neighbors, util)?)
}

// ---------------------------------------------------------------------------
// Random games and assignment extraction
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct RandomGameParams {
    pub seed: u64,
    pub players: usize,
    pub max_actions: usize,
    pub max_neigh: usize,
    pub payoff_min: i64,
    pub payoff_max: i64,
}

/// Seeded random game: a deterministic function of its parameters.
pub fn gen_random(params: &RandomGameParams) -> GnfGame {
    let n = params.players.max(1);
    let mut rng = SplitMix64::new(params.seed);
    let names: Vec<String> = (1..=n).map(|i| format!("p{i}")).collect();
    let actions: Vec<Vec<String>> = (0..n)
        .map(|_| {
            let count = if params.max_actions <= 1 {
                1
            } else {
                2 + rng.below((params.max_actions - 1) as u64) as usize
            };
            (1..=count).map(|a| format!("a{a}")).collect()
        })
        .collect();
    let mut neighbors: Vec<Vec<Player>> = Vec::with_capacity(n);
    for p in 0..n {
        let bound = params.max_neigh.min(n - 1);
        let want = if bound == 0 {
            0
        } else {
            rng.below((bound + 1) as u64) as usize
        };
        let mut neigh: Vec<Player> = Vec::new();
        while neigh.len() < want {
            let q = Player(rng.below(n as u64) as u32);
            if q.idx() != p && !neigh.contains(&q) {
                neigh.push(q);
            }
        }
        neigh.sort();
        neighbors.push(neigh);
    }
    let lo = params.payoff_min.min(params.payoff_max);
    let hi = params.payoff_min.max(params.payoff_max);
    // Payoff cells are drawn in table order, so the whole game is a pure
    // function of the seed.
    let cells = std::cell::RefCell::new(rng);
    let util = move |_p: Player, _s: &ScopedStrategy<'_>| -> Payoff {
        Payoff::from_integer(cells.borrow_mut().range_i64(lo, hi))
    };
    GnfGame::from_utility_fn(names, actions, neighbors, util).expect("generated game is valid")
}

/// Reads the truth assignment chosen by variable players in a profile:
/// true where the player picked `true_action`. `None` when a named player
/// is missing from the profile.
pub fn read_assignment<G: Game>(
    game: &G,
    x: &Profile,
    variables: &[String],
    true_action: &str,
) -> Option<Vec<bool>> {
    variables
        .iter()
        .map(|name| {
            let p = game.player_by_name(name)?;
            let a = x.get(p)?;
            Some(game.action_names(p).get(a.idx())? == true_action)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Small fixed games
// ---------------------------------------------------------------------------

pub mod fixtures {
    use std::collections::BTreeSet;

    use super::*;
    use crate::decomp::{HdNode, HypertreeDecomposition};

    /// One player, two actions, preferring the first.
    pub fn solo() -> GnfGame {
        GnfGame::from_utility_fn(
            vec!["p".into()],
            vec![vec!["a".into(), "b".into()]],
            vec![vec![]],
            |_, s| Payoff::from_integer(if s.action(Player(0)).0 == 0 { 1 } else { 0 }),
        )
        .unwrap()
    }

    /// Matching pennies: A wants to match, B wants to differ; no pure
    /// equilibrium exists.
    pub fn pennies() -> GnfGame {
        GnfGame::from_utility_fn(
            vec!["A".into(), "B".into()],
            vec![vec!["h".into(), "t".into()], vec!["h".into(), "t".into()]],
            vec![vec![Player(1)], vec![Player(0)]],
            |p, s| {
                let same = s.action(Player(0)) == s.action(Player(1));
                let win = if p == Player(0) { same } else { !same };
                Payoff::from_integer(if win { 1 } else { 0 })
            },
        )
        .unwrap()
    }

    /// A directed chain: player i watches player i+1; seeded payoffs.
    pub fn chain(n: usize, num_actions: usize, seed: u64) -> GnfGame {
        let names: Vec<String> = (1..=n).map(|i| format!("p{i}")).collect();
        let actions: Vec<Vec<String>> = (0..n)
            .map(|_| (1..=num_actions).map(|a| format!("a{a}")).collect())
            .collect();
        let neighbors: Vec<Vec<Player>> = (0..n)
            .map(|i| {
                if i + 1 < n {
                    vec![Player((i + 1) as u32)]
                } else {
                    vec![]
                }
            })
            .collect();
        let rng = std::cell::RefCell::new(SplitMix64::new(seed));
        GnfGame::from_utility_fn(names, actions, neighbors, move |_, _| {
            Payoff::from_integer(rng.borrow_mut().range_i64(0, 3))
        })
        .unwrap()
    }

    /// Everyone watches everyone: the dependency graph is a clique while
    /// the hypergraph has a single repeated edge and stays acyclic.
    pub fn clique(n: usize, num_actions: usize, seed: u64) -> GnfGame {
        let names: Vec<String> = (1..=n).map(|i| format!("p{i}")).collect();
        let actions: Vec<Vec<String>> = (0..n)
            .map(|_| (1..=num_actions).map(|a| format!("a{a}")).collect())
            .collect();
        let neighbors: Vec<Vec<Player>> = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != i)
                    .map(|j| Player(j as u32))
                    .collect()
            })
            .collect();
        let rng = std::cell::RefCell::new(SplitMix64::new(seed));
        GnfGame::from_utility_fn(names, actions, neighbors, move |_, _| {
            Payoff::from_integer(rng.borrow_mut().range_i64(0, 3))
        })
        .unwrap()
    }

    /// A width-2 hypertree decomposition of the FRIENDS-with-Laura
    /// hypergraph, built by hand and checked by the validator.
    pub fn friends_prime_hd2() -> HypertreeDecomposition {
        // Indices in the Prime fixture: G=0, P=1, F=2, R=3, M=4, L=5.
        let set = |ids: &[u32]| -> BTreeSet<Player> { ids.iter().map(|&i| Player(i)).collect() };
        HypertreeDecomposition::new(
            vec![
                HdNode {
                    chi: set(&[5, 0, 1, 4]),
                    lambda: set(&[5]),
                },
                HdNode {
                    chi: set(&[0, 1, 2, 3, 4]),
                    lambda: set(&[0, 4]),
                },
                HdNode {
                    chi: set(&[1, 2, 3]),
                    lambda: set(&[1, 2]),
                },
                HdNode {
                    chi: set(&[2, 3]),
                    lambda: set(&[3]),
                },
            ],
            vec![None, Some(0), Some(1), Some(2)],
            vec![vec![1], vec![2], vec![3], vec![]],
            0,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brute::{brute_nash, brute_strong, count_models_cnf, eval_r2qbf, Guard};
    use crate::decomp::{join_tree, validate_hypertree_decomposition};
    use crate::game::{Action, Game};
    use crate::relation::nash_constraint;
    use crate::strong::{is_nash_check, strong_check_acyclic};

    fn cnf(vars: &[&str], clauses: &[&[&str]]) -> Cnf {
        Cnf {
            variables: vars.iter().map(|s| s.to_string()).collect(),
            clauses: clauses.iter().map(|c| parse_lits(vars, c)).collect(),
        }
    }

    /// The eight-clause satisfiable example used across the tree-game tests.
    pub(crate) fn eight_clause_formula() -> Cnf {
        let v: Vec<String> = (1..=8).map(|i| format!("X{i}")).collect();
        let vr: Vec<&str> = v.iter().map(|s| s.as_str()).collect();
        Cnf {
            variables: v.clone(),
            clauses: vec![
                parse_lits(&vr, &["X1", "X2"]),
                parse_lits(&vr, &["X1", "X3"]),
                parse_lits(&vr, &["X1", "!X4", "X8"]),
                parse_lits(&vr, &["X4"]),
                parse_lits(&vr, &["!X5", "!X6"]),
                parse_lits(&vr, &["X1", "X4", "X6"]),
                parse_lits(&vr, &["X6", "X7"]),
                parse_lits(&vr, &["X8"]),
            ],
        }
    }

    #[test]
    fn friends_base_properties() {
        let g = gen_friends(FriendsVariant::Base);
        g.validate().unwrap();
        assert_eq!(g.player_count(), 5);
        let ne = brute_nash(&g, &Guard::default()).unwrap();
        assert_eq!(ne.len(), 4);
        // Constraint row counts match the known relations.
        let count = |n: &str| {
            nash_constraint(&g, g.player_by_name(n).unwrap())
                .unwrap()
                .len()
        };
        assert_eq!(count("F"), 6);
        assert_eq!(count("G"), 8);
        assert_eq!(count("R"), 2);
        assert_eq!(count("P"), 2);
        assert_eq!(count("M"), 2);
    }

    #[test]
    fn friends_prime_properties() {
        let g = gen_friends(FriendsVariant::Prime);
        g.validate().unwrap();
        let h = g.dependency_hypergraph();
        let l = g.player_by_name("L").unwrap();
        let expect: std::collections::BTreeSet<Player> = ["L", "G", "P", "M"]
            .iter()
            .map(|n| g.player_by_name(n).unwrap())
            .collect();
        assert_eq!(*h.edge(l), expect);
        assert!(join_tree(&h).is_none());

        let hd = fixtures::friends_prime_hd2();
        let report = validate_hypertree_decomposition(&h, &hd).unwrap();
        assert_eq!(report.width, 2);
        assert!(report.complete);
    }

    #[test]
    fn clausevar_counts_models() {
        let phi = cnf(&["X1", "X2"], &[&["X1", "X2"]]);
        let g = gen_sat_clausevar(&phi).unwrap();
        g.validate().unwrap();
        let ne = brute_nash(&g, &Guard::default()).unwrap();
        assert_eq!(ne.len() as u64, count_models_cnf(&phi).unwrap());
        assert_eq!(ne.len(), 3);
        // In every equilibrium the clause player commits and earns 3.
        let c1 = g.player_by_name("c1").unwrap();
        for x in ne.iter() {
            assert_eq!(g.action_names(c1)[x[c1.idx()].idx()], "t");
            assert_eq!(g.utility_global(c1, x), Payoff::from_integer(3));
        }

        let contra = cnf(&["X1"], &[&["X1"], &["!X1"]]);
        let g2 = gen_sat_clausevar(&contra).unwrap();
        assert!(brute_nash(&g2, &Guard::default()).unwrap().is_empty());
    }

    #[test]
    fn clausevar_three_bounded_on_3sat() {
        // Each clause at most 3 literals, each variable in at most 3 clauses.
        let phi = cnf(
            &["X1", "X2", "X3", "X4"],
            &[&["X1", "X2", "X3"], &["!X1", "X3", "X4"], &["X1", "!X2"]],
        );
        let g = gen_sat_clausevar(&phi).unwrap();
        assert!(g.metrics().max_neigh <= 3);
    }

    #[test]
    fn sat_acyclic_structure_and_equilibria() {
        let phi = cnf(&["X1", "X2"], &[&["X1", "X2"]]);
        let g = gen_sat_acyclic(&phi).unwrap();
        g.validate().unwrap();
        assert!(join_tree(&g.dependency_hypergraph()).is_some());
        let ne = brute_nash(&g, &Guard::default()).unwrap();
        assert_eq!(ne.len() as u64, count_models_cnf(&phi).unwrap());
        let t = g.player_by_name("T").unwrap();
        let h = g.player_by_name("H").unwrap();
        for x in ne.iter() {
            assert_eq!(g.action_names(t)[x[t.idx()].idx()], "s");
            assert_eq!(g.action_names(h)[x[h.idx()].idx()], "g");
        }

        let contra = cnf(&["X1"], &[&["X1"], &["!X1"]]);
        let g2 = gen_sat_acyclic(&contra).unwrap();
        assert!(brute_nash(&g2, &Guard::default()).unwrap().is_empty());
    }

    #[test]
    fn padding_examples() {
        let xi3 = R2Qbf {
            exists: vec!["a".into()],
            forall: vec!["b".into()],
            disjuncts: vec![
                vec![QbfLit::exists(0, true)],
                vec![QbfLit::forall(0, true)],
                vec![QbfLit::forall(0, false)],
            ],
        };
        let padded = pad_r2qbf(&xi3).unwrap();
        assert_eq!(padded.disjuncts.len(), 4);
        assert_eq!(padded.exists.len(), 2);
        assert_eq!(eval_r2qbf(&padded).unwrap(), eval_r2qbf(&xi3).unwrap());

        let xi1 = R2Qbf {
            exists: vec!["a".into()],
            forall: vec![],
            disjuncts: vec![vec![QbfLit::exists(0, true)]],
        };
        assert_eq!(pad_r2qbf(&xi1).unwrap().disjuncts.len(), 4);

        let xi8 = R2Qbf::running_example();
        let padded = pad_r2qbf(&xi8).unwrap();
        assert_eq!(padded, xi8);
    }

    fn tiny_valid_qbf() -> R2Qbf {
        // Exists a, forall b: (a and b) or (a and not b); valid via a=true.
        R2Qbf {
            exists: vec!["a".into()],
            forall: vec!["b".into()],
            disjuncts: vec![
                vec![QbfLit::exists(0, true), QbfLit::forall(0, true)],
                vec![QbfLit::exists(0, true), QbfLit::forall(0, false)],
            ],
        }
    }

    fn tiny_invalid_qbf() -> R2Qbf {
        // Exists a, forall b: (a and b) or (not a and b); falsified by b.
        R2Qbf {
            exists: vec!["a".into()],
            forall: vec!["b".into()],
            disjuncts: vec![
                vec![QbfLit::exists(0, true), QbfLit::forall(0, true)],
                vec![QbfLit::exists(0, false), QbfLit::forall(0, true)],
            ],
        }
    }

    #[test]
    fn challenger_shape_on_running_example() {
        let xi = pad_r2qbf(&R2Qbf::running_example()).unwrap();
        let g = gen_qbf_challenger(&xi, true).unwrap();
        g.validate().unwrap();
        // 3 existential + 5 universal + 8 disjunct + 6 tree + C + D.
        assert_eq!(g.player_count(), 24);
        assert!(g.player_by_name("C").is_some());
        assert!(g.player_by_name("D").is_some());
        assert!(g.metrics().max_neigh <= 4);
    }

    #[test]
    fn challenger_strong_iff_valid() {
        let guard = Guard::default();

        let valid = pad_r2qbf(&tiny_valid_qbf()).unwrap();
        assert!(eval_r2qbf(&valid).unwrap());
        let g = gen_qbf_challenger(&valid, true).unwrap();
        assert_eq!(g.player_count(), 12);
        let se = brute_strong(&g, &guard).unwrap();
        assert!(!se.is_empty());

        let invalid = pad_r2qbf(&tiny_invalid_qbf()).unwrap();
        assert!(!eval_r2qbf(&invalid).unwrap());
        let g2 = gen_qbf_challenger(&invalid, true).unwrap();
        let ne = brute_nash(&g2, &guard).unwrap();
        // The matrix is satisfiable, so equilibria exist, yet none is strong.
        assert!(!ne.is_empty());
        assert!(brute_strong(&g2, &guard).unwrap().is_empty());
    }

    #[test]
    fn challenger_without_duplicator_matches_models() {
        let xi = pad_r2qbf(&tiny_valid_qbf()).unwrap();
        let g = gen_qbf_challenger(&xi, false).unwrap();
        g.validate().unwrap();
        let ne = brute_nash(&g, &Guard::default()).unwrap();
        // Equilibria where nobody gives up correspond one-to-one to matrix
        // models.
        let no_w = ne
            .iter()
            .filter(|x| {
                g.players()
                    .iter()
                    .all(|&p| g.action_names(p)[x[p.idx()].idx()] != "w")
            })
            .count();
        let mut models = 0u64;
        for mask in 0u64..(1 << 4) {
            if xi.matrix_eval(|v| match v {
                QbfVar::Exists(i) => mask & (1 << i) != 0,
                QbfVar::Forall(j) => mask & (1 << (3 + j)) != 0,
            }) {
                models += 1;
            }
        }
        assert_eq!(no_w as u64, models);
        // Profiles where circuit players jointly give up can also be
        // equilibria of the base game; adding the duplicator removes them.
        assert!(ne.len() >= no_w);
    }

    #[test]
    fn qbf_acyclic_correspondences() {
        let guard = Guard::default();
        let valid = tiny_valid_qbf();
        let g = gen_qbf_acyclic(&valid).unwrap();
        g.validate().unwrap();
        assert!(join_tree(&g.dependency_hypergraph()).is_some());
        assert!(!brute_strong(&g, &guard).unwrap().is_empty());

        let invalid = tiny_invalid_qbf();
        let g2 = gen_qbf_acyclic(&invalid).unwrap();
        let ne = brute_nash(&g2, &guard).unwrap();
        assert!(!ne.is_empty());
        assert!(brute_strong(&g2, &guard).unwrap().is_empty());
        let t = g2.player_by_name("T").unwrap();
        for x in ne.iter() {
            assert_eq!(g2.action_names(t)[x[t.idx()].idx()], "s");
        }

        // Unsatisfiable matrix: no equilibria at all.
        let unsat = R2Qbf {
            exists: vec!["a".into()],
            forall: vec![],
            disjuncts: vec![vec![QbfLit::exists(0, true), QbfLit::exists(0, false)]],
        };
        let g3 = gen_qbf_acyclic(&unsat).unwrap();
        assert!(brute_nash(&g3, &guard).unwrap().is_empty());
    }

    #[test]
    fn tree_sat_unsatisfiable_has_nash_but_no_strong() {
        let phi = cnf(
            &["X1", "X2"],
            &[
                &["X1", "X2"],
                &["X1", "!X2"],
                &["!X1", "X2"],
                &["!X1", "!X2"],
            ],
        );
        assert_eq!(count_models_cnf(&phi).unwrap(), 0);
        let g = gen_tree_sat(&phi).unwrap();
        g.validate().unwrap();
        assert!(join_tree(&g.dependency_hypergraph()).is_some());
        let guard = Guard::default();
        let ne = brute_nash(&g, &guard).unwrap();
        assert!(!ne.is_empty());
        assert!(brute_strong(&g, &guard).unwrap().is_empty());
        // Every equilibrium keeps the gate players at okay and no clause
        // player bailing out.
        for x in ne.iter() {
            for p in g.players() {
                let tok = &g.action_names(p)[x[p.idx()].idx()];
                if g.player_name(p).starts_with('t') {
                    assert_eq!(tok, "T");
                } else {
                    assert_ne!(tok, "B");
                }
            }
        }
    }

    #[test]
    fn tree_sat_satisfiable_has_strong() {
        let phi = cnf(&["X1", "X2"], &[&["X1"], &["X1", "X2"]]);
        let g = gen_tree_sat(&phi).unwrap();
        let guard = Guard::default();
        assert!(!brute_strong(&g, &guard).unwrap().is_empty());
    }

    #[test]
    fn tree_sat_conflict_coalition() {
        let phi = eight_clause_formula();
        let g = gen_tree_sat(&phi).unwrap();
        let jt = join_tree(&g.dependency_hypergraph()).unwrap();

        // All gates okay; c5 and c7 pick complementary literals on X6.
        let choose = |name: &str, tok: &str| -> (Player, Action) {
            let p = g.player_by_name(name).unwrap();
            (p, g.action_by_name(p, tok).unwrap())
        };
        let mut pairs: Vec<(Player, Action)> = Vec::new();
        for (c, tok) in [
            ("c1", "X1"),
            ("c2", "X1"),
            ("c3", "X1"),
            ("c4", "X4"),
            ("c5", "~X6"),
            ("c6", "X1"),
            ("c7", "X6"),
            ("c8", "X8"),
        ] {
            pairs.push(choose(c, tok));
        }
        for k in 1..=7 {
            pairs.push(choose(&format!("t{k}"), "T"));
        }
        let x = Profile::from_pairs(pairs);
        assert!(is_nash_check(&g, &x).unwrap());

        let res = strong_check_acyclic(&g, &jt, &x).unwrap();
        assert!(!res.strong);
        let w = res.witness.unwrap();
        assert!(w.verify(&g, &x));
        // Clause players top out at payoff 1 and can never join a
        // profitable coalition; the conflict is flagged by gate players.
        for &p in &w.coalition {
            assert!(g.player_name(p).starts_with('t'));
        }
    }

    #[test]
    fn random_games_are_deterministic_and_valid() {
        let params = RandomGameParams {
            seed: 1,
            players: 4,
            max_actions: 2,
            max_neigh: 2,
            payoff_min: 0,
            payoff_max: 3,
        };
        let a = gen_random(&params);
        let b = gen_random(&params);
        a.validate().unwrap();
        assert_eq!(a.player_names(), b.player_names());
        for p in a.players() {
            assert_eq!(a.neighbors(p), b.neighbors(p));
            assert_eq!(a.action_names(p), b.action_names(p));
            assert_eq!(a.table_rows(p), b.table_rows(p));
        }

        let single = gen_random(&RandomGameParams {
            seed: 9,
            players: 1,
            max_actions: 2,
            max_neigh: 2,
            payoff_min: 0,
            payoff_max: 1,
        });
        assert_eq!(single.player_count(), 1);
        single.validate().unwrap();
    }

    #[test]
    fn assignment_extraction() {
        let phi = cnf(&["X1", "X2"], &[&["X1", "X2"]]);
        let g = gen_sat_acyclic(&phi).unwrap();
        let ne = brute_nash(&g, &Guard::default()).unwrap();
        for x in ne.iter() {
            let profile = Profile::from_dense(x);
            let assign = read_assignment(&g, &profile, &phi.variables, "t").unwrap();
            assert!(phi.eval(|i| assign[i]));
        }
    }
}
