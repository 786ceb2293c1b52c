//! File formats: JSON games, decompositions, and equilibria, DIMACS CNF,
//! and the JSON exists/forall formula format.
//!
//! Serializers emit canonical documents: map keys follow declared player
//! order, rows follow declared action order, and payoffs print in reduced
//! form, so identical values always serialize to identical bytes.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::decomp::{HdNode, HypertreeDecomposition, JoinTree, TreeDecomposition};
use crate::game::{Action, AnyGame, Game, GameError, GnfGame, Payoff, Player, Profile, SnfGame};
use crate::generators::{Cnf, CnfLit, QbfLit, QbfVar, R2Qbf};
use crate::solver::EquilibriumKind;
use crate::strong::CoalitionWitness;

pub const GNF_FORMAT: &str = "gnf-game/1";
pub const SNF_FORMAT: &str = "snf-game/1";
pub const DECOMP_FORMAT: &str = "decomp/1";
pub const EQUILIBRIA_FORMAT: &str = "equilibria/1";
pub const R2QBF_FORMAT: &str = "r2qbf/1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("invalid JSON: {msg}")]
    Json { msg: String },
    #[error("{path}: {msg}")]
    Schema { path: String, msg: String },
    #[error("unsupported format tag {found:?}")]
    UnknownFormat { found: String },
    #[error("expected a {expected} document, found kind {found:?}")]
    KindMismatch { expected: String, found: String },
    #[error("{path}: invalid payoff {text:?}")]
    BadPayoff { path: String, text: String },
    #[error("DIMACS line {line}: {msg}")]
    Dimacs { line: usize, msg: String },
    #[error("undeclared variable {name}")]
    UndeclaredVariable { name: String },
    #[error("variable {name} declared in both quantifier blocks")]
    OverlappingBlocks { name: String },
    #[error(transparent)]
    Game(#[from] GameError),
}

// ---------------------------------------------------------------------------
// JSON plumbing
// ---------------------------------------------------------------------------

fn parse_json(bytes: &[u8]) -> Result<Value, IoError> {
    serde_json::from_slice(bytes).map_err(|e| IoError::Json { msg: e.to_string() })
}

fn as_obj<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, IoError> {
    v.as_object().ok_or_else(|| IoError::Schema {
        path: path.to_string(),
        msg: "expected an object".into(),
    })
}

fn as_arr<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, IoError> {
    v.as_array().ok_or_else(|| IoError::Schema {
        path: path.to_string(),
        msg: "expected an array".into(),
    })
}

fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str, IoError> {
    v.as_str().ok_or_else(|| IoError::Schema {
        path: path.to_string(),
        msg: "expected a string".into(),
    })
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value, IoError> {
    obj.get(key).ok_or_else(|| IoError::Schema {
        path: path.to_string(),
        msg: format!("missing field {key:?}"),
    })
}

fn string_list(v: &Value, path: &str) -> Result<Vec<String>, IoError> {
    as_arr(v, path)?
        .iter()
        .enumerate()
        .map(|(i, s)| Ok(as_str(s, &format!("{path}[{i}]"))?.to_string()))
        .collect()
}

fn parse_payoff(v: &Value, path: &str) -> Result<Payoff, IoError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Payoff::from_integer(i))
            } else {
                Err(IoError::BadPayoff {
                    path: path.to_string(),
                    text: n.to_string(),
                })
            }
        }
        Value::String(s) => Payoff::parse(s).map_err(|_| IoError::BadPayoff {
            path: path.to_string(),
            text: s.clone(),
        }),
        other => Err(IoError::BadPayoff {
            path: path.to_string(),
            text: other.to_string(),
        }),
    }
}

// ---------------------------------------------------------------------------
// Game files
// ---------------------------------------------------------------------------

struct Header {
    names: Vec<String>,
    actions: Vec<Vec<String>>,
}

impl Header {
    fn player(&self, name: &str, path: &str) -> Result<Player, IoError> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| Player(i as u32))
            .ok_or_else(|| IoError::Schema {
                path: path.to_string(),
                msg: format!("unknown player {name:?}"),
            })
    }

    fn action(&self, p: Player, name: &str, path: &str) -> Result<Action, IoError> {
        self.actions[p.idx()]
            .iter()
            .position(|a| a == name)
            .map(|i| Action(i as u32))
            .ok_or_else(|| IoError::Schema {
                path: path.to_string(),
                msg: format!(
                    "unknown action {name:?} of player {:?}",
                    self.names[p.idx()]
                ),
            })
    }
}

fn parse_header(obj: &Map<String, Value>) -> Result<Header, IoError> {
    let names = string_list(field(obj, "players", "$")?, "players")?;
    let actions_obj = as_obj(field(obj, "actions", "$")?, "actions")?;
    let mut actions = Vec::with_capacity(names.len());
    for name in &names {
        let v = actions_obj.get(name).ok_or_else(|| IoError::Schema {
            path: format!("actions.{name}"),
            msg: "missing action list".into(),
        })?;
        actions.push(string_list(v, &format!("actions.{name}"))?);
    }
    if actions_obj.len() != names.len() {
        let extra = actions_obj
            .keys()
            .find(|k| !names.contains(k))
            .cloned()
            .unwrap_or_default();
        return Err(IoError::Schema {
            path: format!("actions.{extra}"),
            msg: "not a declared player".into(),
        });
    }
    Ok(Header { names, actions })
}

fn parse_when(header: &Header, v: &Value, path: &str) -> Result<BTreeMap<Player, Action>, IoError> {
    let obj = as_obj(v, path)?;
    let mut out = BTreeMap::new();
    for (pname, aval) in obj {
        let p = header.player(pname, &format!("{path}.{pname}"))?;
        let aname = as_str(aval, &format!("{path}.{pname}"))?;
        let a = header.action(p, aname, &format!("{path}.{pname}"))?;
        if out.insert(p, a).is_some() {
            return Err(IoError::Schema {
                path: format!("{path}.{pname}"),
                msg: "player assigned twice".into(),
            });
        }
    }
    Ok(out)
}

/// Parses a game document in either representation; the parsed game has
/// passed full validation.
pub fn parse_game(bytes: &[u8]) -> Result<AnyGame, IoError> {
    let root = parse_json(bytes)?;
    let obj = as_obj(&root, "$")?;
    let format = as_str(field(obj, "format", "$")?, "format")?;
    match format {
        GNF_FORMAT => parse_gnf(obj).map(AnyGame::Gnf),
        SNF_FORMAT => parse_snf(obj).map(AnyGame::Snf),
        other => Err(IoError::UnknownFormat {
            found: other.to_string(),
        }),
    }
}

fn parse_gnf(obj: &Map<String, Value>) -> Result<GnfGame, IoError> {
    let header = parse_header(obj)?;
    let neighbors_obj = as_obj(field(obj, "neighbors", "$")?, "neighbors")?;
    let mut neighbors = Vec::with_capacity(header.names.len());
    for name in &header.names {
        let path = format!("neighbors.{name}");
        let list = match neighbors_obj.get(name) {
            Some(v) => string_list(v, &path)?,
            None => Vec::new(),
        };
        let mut ns = Vec::with_capacity(list.len());
        for q in &list {
            ns.push(header.player(q, &path)?);
        }
        neighbors.push(ns);
    }
    let utilities_obj = as_obj(field(obj, "utilities", "$")?, "utilities")?;
    let mut rows = Vec::with_capacity(header.names.len());
    for name in &header.names {
        let path = format!("utilities.{name}");
        let list = as_arr(
            utilities_obj.get(name).ok_or_else(|| IoError::Schema {
                path: path.clone(),
                msg: "missing utility table".into(),
            })?,
            &path,
        )?;
        let mut table = Vec::with_capacity(list.len());
        for (i, entry) in list.iter().enumerate() {
            let epath = format!("{path}[{i}]");
            let eobj = as_obj(entry, &epath)?;
            let when = parse_when(
                &header,
                field(eobj, "when", &epath)?,
                &format!("{epath}.when"),
            )?;
            let payoff = parse_payoff(field(eobj, "payoff", &epath)?, &format!("{epath}.payoff"))?;
            table.push((when, payoff));
        }
        rows.push(table);
    }
    Ok(GnfGame::from_tables(
        header.names,
        header.actions,
        neighbors,
        rows,
    )?)
}

fn parse_snf(obj: &Map<String, Value>) -> Result<SnfGame, IoError> {
    let header = parse_header(obj)?;
    let list = as_arr(field(obj, "cells", "$")?, "cells")?;
    let mut rows = Vec::with_capacity(list.len());
    for (i, entry) in list.iter().enumerate() {
        let epath = format!("cells[{i}]");
        let eobj = as_obj(entry, &epath)?;
        let when = parse_when(
            &header,
            field(eobj, "when", &epath)?,
            &format!("{epath}.when"),
        )?;
        let pobj = as_obj(field(eobj, "payoffs", &epath)?, &format!("{epath}.payoffs"))?;
        let mut payoffs = Vec::with_capacity(header.names.len());
        for name in &header.names {
            let path = format!("{epath}.payoffs.{name}");
            let v = pobj.get(name).ok_or_else(|| IoError::Schema {
                path: path.clone(),
                msg: "missing payoff".into(),
            })?;
            payoffs.push(parse_payoff(v, &path)?);
        }
        rows.push((when, payoffs));
    }
    Ok(SnfGame::from_cells(header.names, header.actions, rows)?)
}

fn when_value<G: Game>(game: &G, scope: &[Player], tuple: &[Action]) -> Value {
    let mut when = Map::new();
    for (q, a) in scope.iter().zip(tuple) {
        when.insert(
            game.player_name(*q).to_string(),
            Value::String(game.action_names(*q)[a.idx()].to_string()),
        );
    }
    Value::Object(when)
}

/// Canonical serialization; the output re-parses to an equal game.
pub fn serialize_game(game: &AnyGame) -> String {
    let mut root = Map::new();
    let names = game.player_names();
    root.insert(
        "format".into(),
        Value::String(
            match game {
                AnyGame::Gnf(_) => GNF_FORMAT,
                AnyGame::Snf(_) => SNF_FORMAT,
            }
            .to_string(),
        ),
    );
    root.insert("players".into(), json!(names));
    let mut actions = Map::new();
    for p in game.players() {
        actions.insert(names[p.idx()].clone(), json!(game.action_names(p)));
    }
    root.insert("actions".into(), Value::Object(actions));
    match game {
        AnyGame::Gnf(g) => {
            let mut neighbors = Map::new();
            for p in g.players() {
                let ns: Vec<&str> = g.neighbors(p).iter().map(|q| g.player_name(*q)).collect();
                neighbors.insert(names[p.idx()].clone(), json!(ns));
            }
            root.insert("neighbors".into(), Value::Object(neighbors));
            let mut utilities = Map::new();
            for p in g.players() {
                let scope = g.table_scope(p);
                let rows: Vec<Value> = g
                    .table_rows(p)
                    .iter()
                    .map(|(tuple, payoff)| {
                        let mut row = Map::new();
                        row.insert("when".into(), when_value(g, scope, tuple));
                        row.insert("payoff".into(), Value::String(payoff.to_string()));
                        Value::Object(row)
                    })
                    .collect();
                utilities.insert(names[p.idx()].clone(), Value::Array(rows));
            }
            root.insert("utilities".into(), Value::Object(utilities));
        }
        AnyGame::Snf(g) => {
            let scope = g.players();
            let cells: Vec<Value> = g
                .cell_rows()
                .iter()
                .map(|(tuple, payoffs)| {
                    let mut row = Map::new();
                    row.insert("when".into(), when_value(g, &scope, tuple));
                    let mut pv = Map::new();
                    for (q, payoff) in scope.iter().zip(payoffs.iter()) {
                        pv.insert(
                            g.player_name(*q).to_string(),
                            Value::String(payoff.to_string()),
                        );
                    }
                    row.insert("payoffs".into(), Value::Object(pv));
                    Value::Object(row)
                })
                .collect();
            root.insert("cells".into(), Value::Array(cells));
        }
    }
    pretty(&Value::Object(root))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

// ---------------------------------------------------------------------------
// Decomposition files
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decomp {
    JoinTree(JoinTree),
    Tree(TreeDecomposition),
    Hypertree(HypertreeDecomposition),
}

impl Decomp {
    pub fn kind(&self) -> &'static str {
        match self {
            Decomp::JoinTree(_) => "jointree",
            Decomp::Tree(_) => "tree",
            Decomp::Hypertree(_) => "hypertree",
        }
    }
}

struct RawNode {
    id: String,
    children: Vec<String>,
    owner: Option<String>,
    chi: Option<Vec<String>>,
    lambda: Option<Vec<String>>,
}

fn parse_nodes(obj: &Map<String, Value>) -> Result<Vec<RawNode>, IoError> {
    let list = as_arr(field(obj, "nodes", "$")?, "nodes")?;
    let mut out = Vec::with_capacity(list.len());
    for (i, v) in list.iter().enumerate() {
        let path = format!("nodes[{i}]");
        let nobj = as_obj(v, &path)?;
        let id = as_str(field(nobj, "id", &path)?, &format!("{path}.id"))?.to_string();
        let children = match nobj.get("children") {
            Some(v) => string_list(v, &format!("{path}.children"))?,
            None => Vec::new(),
        };
        let owner = match nobj.get("owner") {
            Some(v) => Some(as_str(v, &format!("{path}.owner"))?.to_string()),
            None => None,
        };
        let chi = match nobj.get("chi") {
            Some(v) => Some(string_list(v, &format!("{path}.chi"))?),
            None => None,
        };
        let lambda = match nobj.get("lambda") {
            Some(v) => Some(string_list(v, &format!("{path}.lambda"))?),
            None => None,
        };
        out.push(RawNode {
            id,
            children,
            owner,
            chi,
            lambda,
        });
    }
    Ok(out)
}

/// Parent links, child lists, and root index of a parsed node forest.
type TreeShape = (Vec<Option<usize>>, Vec<Vec<usize>>, usize);

/// Resolves children links and finds the unique root.
fn tree_shape(nodes: &[RawNode]) -> Result<TreeShape, IoError> {
    let mut index: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, n) in nodes.iter().enumerate() {
        if index.insert(n.id.as_str(), i).is_some() {
            return Err(IoError::Schema {
                path: format!("nodes[{i}].id"),
                msg: format!("duplicate node id {:?}", n.id),
            });
        }
    }
    let mut parent: Vec<Option<usize>> = vec![None; nodes.len()];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for (i, n) in nodes.iter().enumerate() {
        for c in &n.children {
            let j = *index.get(c.as_str()).ok_or_else(|| IoError::Schema {
                path: format!("nodes[{i}].children"),
                msg: format!("unknown node id {c:?}"),
            })?;
            if parent[j].is_some() {
                return Err(IoError::Schema {
                    path: format!("nodes[{i}].children"),
                    msg: format!("node {c:?} has two parents"),
                });
            }
            parent[j] = Some(i);
            children[i].push(j);
        }
    }
    let roots: Vec<usize> = (0..nodes.len()).filter(|&i| parent[i].is_none()).collect();
    if roots.len() != 1 {
        return Err(IoError::Schema {
            path: "nodes".into(),
            msg: format!("{} roots, expected exactly one", roots.len()),
        });
    }
    Ok((parent, children, roots[0]))
}

fn resolve_players(names: &[String], list: &[String], path: &str) -> Result<Vec<Player>, IoError> {
    list.iter()
        .map(|n| {
            names
                .iter()
                .position(|m| m == n)
                .map(|i| Player(i as u32))
                .ok_or_else(|| IoError::Schema {
                    path: path.to_string(),
                    msg: format!("unknown player {n:?}"),
                })
        })
        .collect()
}

/// Parses a decomposition document against a game's player list.
pub fn parse_decomp(bytes: &[u8], names: &[String]) -> Result<Decomp, IoError> {
    let root = parse_json(bytes)?;
    let obj = as_obj(&root, "$")?;
    let format = as_str(field(obj, "format", "$")?, "format")?;
    if format != DECOMP_FORMAT {
        return Err(IoError::UnknownFormat {
            found: format.to_string(),
        });
    }
    let kind = as_str(field(obj, "kind", "$")?, "kind")?;
    let nodes = parse_nodes(obj)?;
    let (parent, children, root) = tree_shape(&nodes)?;
    match kind {
        "jointree" => {
            // One node per player, keyed by owner.
            let mut by_owner: Vec<Option<usize>> = vec![None; names.len()];
            for (i, n) in nodes.iter().enumerate() {
                let owner = n.owner.as_deref().ok_or_else(|| IoError::Schema {
                    path: format!("nodes[{i}]"),
                    msg: "join tree node without owner".into(),
                })?;
                let p =
                    resolve_players(names, &[owner.to_string()], &format!("nodes[{i}].owner"))?[0];
                if by_owner[p.idx()].is_some() {
                    return Err(IoError::Schema {
                        path: format!("nodes[{i}].owner"),
                        msg: format!("player {owner:?} owns two nodes"),
                    });
                }
                by_owner[p.idx()] = Some(i);
            }
            let mut jt_parent: Vec<Option<Player>> = vec![None; names.len()];
            let mut jt_children: Vec<Vec<Player>> = vec![Vec::new(); names.len()];
            let owner_of = |i: usize| -> Result<Player, IoError> {
                by_owner
                    .iter()
                    .position(|slot| *slot == Some(i))
                    .map(|p| Player(p as u32))
                    .ok_or_else(|| IoError::Schema {
                        path: "nodes".into(),
                        msg: format!("player count {} does not match node count", names.len()),
                    })
            };
            for p in 0..names.len() {
                let i = by_owner[p].ok_or_else(|| IoError::Schema {
                    path: "nodes".into(),
                    msg: format!("no node owned by {:?}", names[p]),
                })?;
                if let Some(par) = parent[i] {
                    jt_parent[p] = Some(owner_of(par)?);
                }
                for &c in &children[i] {
                    jt_children[p].push(owner_of(c)?);
                }
            }
            let root_owner = owner_of(root)?;
            Ok(Decomp::JoinTree(JoinTree::new(
                root_owner,
                jt_parent,
                jt_children,
            )))
        }
        "tree" => {
            let mut bags = Vec::with_capacity(nodes.len());
            for (i, n) in nodes.iter().enumerate() {
                let chi = n.chi.as_ref().ok_or_else(|| IoError::Schema {
                    path: format!("nodes[{i}]"),
                    msg: "tree node without chi".into(),
                })?;
                bags.push(
                    resolve_players(names, chi, &format!("nodes[{i}].chi"))?
                        .into_iter()
                        .collect(),
                );
            }
            Ok(Decomp::Tree(TreeDecomposition::new(
                bags, parent, children, root,
            )))
        }
        "hypertree" => {
            let mut hd_nodes = Vec::with_capacity(nodes.len());
            for (i, n) in nodes.iter().enumerate() {
                let chi = n.chi.as_ref().ok_or_else(|| IoError::Schema {
                    path: format!("nodes[{i}]"),
                    msg: "hypertree node without chi".into(),
                })?;
                let lambda = n.lambda.as_ref().ok_or_else(|| IoError::Schema {
                    path: format!("nodes[{i}]"),
                    msg: "hypertree node without lambda".into(),
                })?;
                hd_nodes.push(HdNode {
                    chi: resolve_players(names, chi, &format!("nodes[{i}].chi"))?
                        .into_iter()
                        .collect(),
                    lambda: resolve_players(names, lambda, &format!("nodes[{i}].lambda"))?
                        .into_iter()
                        .collect(),
                });
            }
            Ok(Decomp::Hypertree(HypertreeDecomposition::new(
                hd_nodes, parent, children, root,
            )))
        }
        other => Err(IoError::KindMismatch {
            expected: "jointree, tree, or hypertree".into(),
            found: other.to_string(),
        }),
    }
}

pub fn serialize_decomp(decomp: &Decomp, names: &[String]) -> String {
    let mut root = Map::new();
    root.insert("format".into(), Value::String(DECOMP_FORMAT.into()));
    root.insert("kind".into(), Value::String(decomp.kind().into()));
    let name_of = |p: &Player| names[p.idx()].clone();
    let nodes: Vec<Value> = match decomp {
        Decomp::JoinTree(jt) => (0..jt.node_count())
            .map(|i| {
                let p = Player(i as u32);
                let mut n = Map::new();
                n.insert("id".into(), Value::String(format!("n{i}")));
                n.insert("owner".into(), Value::String(name_of(&p)));
                let kids: Vec<String> = jt
                    .children_of(p)
                    .iter()
                    .map(|q| format!("n{}", q.idx()))
                    .collect();
                n.insert("children".into(), json!(kids));
                Value::Object(n)
            })
            .collect(),
        Decomp::Tree(td) => (0..td.node_count())
            .map(|i| {
                let mut n = Map::new();
                n.insert("id".into(), Value::String(format!("n{i}")));
                let chi: Vec<String> = td.bag(i).iter().map(name_of).collect();
                n.insert("chi".into(), json!(chi));
                let kids: Vec<String> = td.children_of(i).iter().map(|c| format!("n{c}")).collect();
                n.insert("children".into(), json!(kids));
                Value::Object(n)
            })
            .collect(),
        Decomp::Hypertree(hd) => (0..hd.node_count())
            .map(|i| {
                let mut n = Map::new();
                n.insert("id".into(), Value::String(format!("n{i}")));
                let chi: Vec<String> = hd.node(i).chi.iter().map(name_of).collect();
                n.insert("chi".into(), json!(chi));
                let lambda: Vec<String> = hd.node(i).lambda.iter().map(name_of).collect();
                n.insert("lambda".into(), json!(lambda));
                let kids: Vec<String> = hd.children_of(i).iter().map(|c| format!("n{c}")).collect();
                n.insert("children".into(), json!(kids));
                Value::Object(n)
            })
            .collect(),
    };
    root.insert("nodes".into(), Value::Array(nodes));
    pretty(&Value::Object(root))
}

// ---------------------------------------------------------------------------
// Equilibria files
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquilibriaDoc {
    pub kind: EquilibriumKind,
    /// Global profiles as dense action vectors, lexicographically sorted.
    pub profiles: Vec<Vec<Action>>,
    pub witness: Option<CoalitionWitness>,
}

pub fn serialize_equilibria<G: Game>(game: &G, doc: &EquilibriaDoc) -> String {
    let mut root = Map::new();
    root.insert("format".into(), Value::String(EQUILIBRIA_FORMAT.into()));
    root.insert("kind".into(), Value::String(doc.kind.as_str().into()));
    let scope = game.players();
    let profiles: Vec<Value> = doc
        .profiles
        .iter()
        .map(|x| when_value(game, &scope, x))
        .collect();
    root.insert("profiles".into(), Value::Array(profiles));
    if let Some(w) = &doc.witness {
        let mut wobj = Map::new();
        let coalition: Vec<String> = w
            .coalition
            .iter()
            .map(|p| game.player_name(*p).to_string())
            .collect();
        wobj.insert("coalition".into(), json!(coalition));
        let mut dev = Map::new();
        for (p, a) in w.deviation.iter() {
            dev.insert(
                game.player_name(p).to_string(),
                Value::String(game.action_names(p)[a.idx()].to_string()),
            );
        }
        wobj.insert("deviation".into(), Value::Object(dev));
        root.insert("witness".into(), Value::Object(wobj));
    }
    pretty(&Value::Object(root))
}

pub fn parse_equilibria<G: Game>(bytes: &[u8], game: &G) -> Result<EquilibriaDoc, IoError> {
    let root = parse_json(bytes)?;
    let obj = as_obj(&root, "$")?;
    let format = as_str(field(obj, "format", "$")?, "format")?;
    if format != EQUILIBRIA_FORMAT {
        return Err(IoError::UnknownFormat {
            found: format.to_string(),
        });
    }
    let kind = match as_str(field(obj, "kind", "$")?, "kind")? {
        "nash" => EquilibriumKind::Nash,
        "pareto" => EquilibriumKind::Pareto,
        "strong" => EquilibriumKind::Strong,
        other => {
            return Err(IoError::KindMismatch {
                expected: "nash, pareto, or strong".into(),
                found: other.to_string(),
            })
        }
    };
    let header = Header {
        names: game.player_names().to_vec(),
        actions: game
            .players()
            .iter()
            .map(|&p| game.action_names(p).to_vec())
            .collect(),
    };
    let list = as_arr(field(obj, "profiles", "$")?, "profiles")?;
    let mut profiles = Vec::with_capacity(list.len());
    for (i, v) in list.iter().enumerate() {
        let path = format!("profiles[{i}]");
        let when = parse_when(&header, v, &path)?;
        if when.len() != game.player_count() {
            return Err(IoError::Schema {
                path,
                msg: "profile is not global".into(),
            });
        }
        profiles.push(when.values().copied().collect::<Vec<Action>>());
    }
    profiles.sort();
    profiles.dedup();
    let witness = match obj.get("witness") {
        None => None,
        Some(v) => {
            let wobj = as_obj(v, "witness")?;
            let coalition_names =
                string_list(field(wobj, "coalition", "witness")?, "witness.coalition")?;
            let coalition = resolve_players(&header.names, &coalition_names, "witness.coalition")?;
            let when = parse_when(
                &header,
                field(wobj, "deviation", "witness")?,
                "witness.deviation",
            )?;
            Some(CoalitionWitness {
                coalition,
                deviation: Profile::from_pairs(when),
            })
        }
    };
    Ok(EquilibriaDoc {
        kind,
        profiles,
        witness,
    })
}

/// Parses a bare profile object mapping player names to action names.
pub fn parse_profile<G: Game>(bytes: &[u8], game: &G) -> Result<Profile, IoError> {
    let root = parse_json(bytes)?;
    let header = Header {
        names: game.player_names().to_vec(),
        actions: game
            .players()
            .iter()
            .map(|&p| game.action_names(p).to_vec())
            .collect(),
    };
    let when = parse_when(&header, &root, "$")?;
    Ok(Profile::from_pairs(when))
}

// ---------------------------------------------------------------------------
// Formula files
// ---------------------------------------------------------------------------

/// Standard DIMACS CNF: `c` comments, a `p cnf <vars> <clauses>` header,
/// then zero-terminated clauses. Variables are named X1..Xn.
pub fn parse_cnf_dimacs(bytes: &[u8]) -> Result<Cnf, IoError> {
    let text = std::str::from_utf8(bytes).map_err(|_| IoError::Dimacs {
        line: 0,
        msg: "not UTF-8".into(),
    })?;
    let mut nvars: Option<usize> = None;
    let mut nclauses: Option<usize> = None;
    let mut clauses: Vec<Vec<CnfLit>> = Vec::new();
    let mut current: Vec<CnfLit> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            if nvars.is_some() {
                return Err(IoError::Dimacs {
                    line: lineno,
                    msg: "duplicate header".into(),
                });
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" {
                return Err(IoError::Dimacs {
                    line: lineno,
                    msg: "malformed header, expected `p cnf <vars> <clauses>`".into(),
                });
            }
            nvars = Some(parts[2].parse().map_err(|_| IoError::Dimacs {
                line: lineno,
                msg: "bad variable count".into(),
            })?);
            nclauses = Some(parts[3].parse().map_err(|_| IoError::Dimacs {
                line: lineno,
                msg: "bad clause count".into(),
            })?);
            continue;
        }
        let Some(nv) = nvars else {
            return Err(IoError::Dimacs {
                line: lineno,
                msg: "clause before header".into(),
            });
        };
        for item in line.split_whitespace() {
            let lit: i64 = item.parse().map_err(|_| IoError::Dimacs {
                line: lineno,
                msg: format!("bad literal {item:?}"),
            })?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                let var = lit.unsigned_abs() as usize;
                if var > nv {
                    return Err(IoError::UndeclaredVariable {
                        name: format!("X{var}"),
                    });
                }
                current.push(CnfLit {
                    var: var - 1,
                    positive: lit > 0,
                });
            }
        }
    }
    if !current.is_empty() {
        clauses.push(current);
    }
    let nv = nvars.ok_or(IoError::Dimacs {
        line: 0,
        msg: "missing header".into(),
    })?;
    if let Some(nc) = nclauses {
        if clauses.len() != nc {
            return Err(IoError::Dimacs {
                line: 0,
                msg: format!("header declares {nc} clauses, found {}", clauses.len()),
            });
        }
    }
    Ok(Cnf {
        variables: (1..=nv).map(|i| format!("X{i}")).collect(),
        clauses,
    })
}

/// JSON exists/forall formula: `exists` and `forall` variable lists plus
/// `disjuncts`, whose literals are variable names with `!` for negation.
pub fn parse_r2qbf(bytes: &[u8]) -> Result<R2Qbf, IoError> {
    let root = parse_json(bytes)?;
    let obj = as_obj(&root, "$")?;
    if let Some(f) = obj.get("format") {
        let f = as_str(f, "format")?;
        if f != R2QBF_FORMAT {
            return Err(IoError::UnknownFormat {
                found: f.to_string(),
            });
        }
    }
    let exists = string_list(field(obj, "exists", "$")?, "exists")?;
    let forall = string_list(field(obj, "forall", "$")?, "forall")?;
    for name in &exists {
        if forall.contains(name) {
            return Err(IoError::OverlappingBlocks { name: name.clone() });
        }
    }
    let list = as_arr(field(obj, "disjuncts", "$")?, "disjuncts")?;
    let mut disjuncts = Vec::with_capacity(list.len());
    for (i, d) in list.iter().enumerate() {
        let path = format!("disjuncts[{i}]");
        let lits = string_list(d, &path)?;
        let mut out = Vec::with_capacity(lits.len());
        for l in &lits {
            let (positive, name) = match l.strip_prefix('!') {
                Some(rest) => (false, rest),
                None => (true, l.as_str()),
            };
            let var = if let Some(ix) = exists.iter().position(|v| v == name) {
                QbfVar::Exists(ix)
            } else if let Some(ix) = forall.iter().position(|v| v == name) {
                QbfVar::Forall(ix)
            } else {
                return Err(IoError::UndeclaredVariable {
                    name: name.to_string(),
                });
            };
            out.push(QbfLit { var, positive });
        }
        disjuncts.push(out);
    }
    Ok(R2Qbf {
        exists,
        forall,
        disjuncts,
    })
}
