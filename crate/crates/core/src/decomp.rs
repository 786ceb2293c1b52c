//! Join trees, tree decompositions, and hypertree decompositions:
//! construction, validation, and the conversion from a tree decomposition of
//! the dependency graph to a hypertree decomposition of the dependency
//! hypergraph.
//!
//! Optimal width computation is out of scope; the module offers a GYO ear
//! reduction for join trees, a min-fill elimination heuristic for tree
//! decompositions, and validators for externally supplied decompositions.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::game::{Game, Graph, Hypergraph, Player};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompError {
    #[error("hypergraph is cyclic")]
    Cyclic,
    #[error("not a tree: {detail}")]
    NotATree { detail: String },
    #[error("join tree has no node owned by {player}")]
    MissingNode { player: String },
    #[error("join tree has multiple nodes owned by {player}")]
    DuplicateOwner { player: String },
    #[error("node of {player} does not carry its characteristic edge")]
    WrongVertexSet { player: String },
    #[error("connectedness violated for vertex {vertex}")]
    Connectedness { vertex: String },
    #[error("vertex {vertex} appears in no bag")]
    VertexUncovered { vertex: String },
    #[error("edge {edge} is contained in no bag")]
    EdgeUncovered { edge: String },
    #[error("hyperedge of {owner} is covered by no node")]
    HyperedgeUncovered { owner: String },
    #[error("node {node}: chi contains {vertex} outside vert(lambda)")]
    ChiNotInLambda { node: String, vertex: String },
    #[error("node {node}: descendant condition violated at vertex {vertex}")]
    DescendantViolation { node: String, vertex: String },
    #[error("unknown player {name}")]
    UnknownPlayer { name: String },
    #[error("node {node}: lambda names {name}, which owns no hyperedge")]
    UnknownEdge { node: String, name: String },
    #[error("empty decomposition")]
    Empty,
}

// ---------------------------------------------------------------------------
// Rooted tree plumbing shared by the three decomposition kinds
// ---------------------------------------------------------------------------

/// Checks that `parent`/`children` describe one rooted tree covering all
/// nodes, and returns a breadth-first order from the root.
fn check_tree(
    parent: &[Option<usize>],
    children: &[Vec<usize>],
) -> Result<Vec<usize>, DecompError> {
    let n = parent.len();
    if n == 0 {
        return Err(DecompError::Empty);
    }
    let roots: Vec<usize> = (0..n).filter(|&i| parent[i].is_none()).collect();
    if roots.len() != 1 {
        return Err(DecompError::NotATree {
            detail: format!("{} roots", roots.len()),
        });
    }
    for (i, kids) in children.iter().enumerate() {
        for &c in kids {
            if c >= n || parent[c] != Some(i) {
                return Err(DecompError::NotATree {
                    detail: "parent/child links disagree".into(),
                });
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::from([roots[0]]);
    let mut seen = vec![false; n];
    seen[roots[0]] = true;
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &c in &children[v] {
            if seen[c] {
                return Err(DecompError::NotATree {
                    detail: "cycle".into(),
                });
            }
            seen[c] = true;
            queue.push_back(c);
        }
    }
    if order.len() != n {
        return Err(DecompError::NotATree {
            detail: "unreachable nodes".into(),
        });
    }
    Ok(order)
}

/// Checks that for every vertex the set of nodes whose label contains it
/// induces a connected subtree. `label(i)` yields the vertex set of node `i`.
fn check_connectedness<F>(
    node_count: usize,
    parent: &[Option<usize>],
    label: F,
    vertex_name: impl Fn(Player) -> String,
) -> Result<(), DecompError>
where
    F: Fn(usize) -> BTreeSet<Player>,
{
    let mut holders: BTreeMap<Player, Vec<usize>> = BTreeMap::new();
    for i in 0..node_count {
        for v in label(i) {
            holders.entry(v).or_default().push(i);
        }
    }
    for (v, nodes) in holders {
        if nodes.len() <= 1 {
            continue;
        }
        let inside: BTreeSet<usize> = nodes.iter().copied().collect();
        // Every holder except one must have its parent inside the holder
        // set; otherwise the induced subgraph is a forest of >1 component.
        let mut anchors = 0;
        for &i in &nodes {
            match parent[i] {
                Some(p) if inside.contains(&p) => {}
                _ => anchors += 1,
            }
        }
        if anchors != 1 {
            return Err(DecompError::Connectedness {
                vertex: vertex_name(v),
            });
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Join trees
// ---------------------------------------------------------------------------

/// A join tree of a dependency hypergraph: one node per player, each node
/// standing for the owner's characteristic edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JoinTree {
    root: Player,
    parent: Vec<Option<Player>>,
    children: Vec<Vec<Player>>,
}

impl JoinTree {
    pub fn new(root: Player, parent: Vec<Option<Player>>, children: Vec<Vec<Player>>) -> JoinTree {
        JoinTree {
            root,
            parent,
            children,
        }
    }

    pub fn root(&self) -> Player {
        self.root
    }

    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    pub fn parent_of(&self, p: Player) -> Option<Player> {
        self.parent[p.idx()]
    }

    pub fn children_of(&self, p: Player) -> &[Player] {
        &self.children[p.idx()]
    }
}

/// GYO ear reduction. Returns the residue owners: players whose (reduced)
/// edges could not be eliminated. An empty residue beyond the final root
/// means the hypergraph is acyclic.
fn gyo(h: &Hypergraph) -> (Vec<Option<Player>>, Vec<Player>) {
    let n = h.vertex_count();
    let mut cur: Vec<BTreeSet<Player>> = (0..n).map(|i| h.edge(Player(i as u32)).clone()).collect();
    let mut live: Vec<bool> = vec![true; n];
    let mut live_count = n;
    let mut parent: Vec<Option<Player>> = vec![None; n];

    loop {
        // Ear vertices: occurring in exactly one live edge.
        let mut occurrence: BTreeMap<Player, usize> = BTreeMap::new();
        for (i, edge) in cur.iter().enumerate() {
            if live[i] {
                for &v in edge {
                    *occurrence.entry(v).or_default() += 1;
                }
            }
        }
        let mut changed = false;
        for (i, edge) in cur.iter_mut().enumerate() {
            if !live[i] {
                continue;
            }
            let before = edge.len();
            edge.retain(|v| occurrence.get(v).copied().unwrap_or(0) > 1);
            if edge.len() != before {
                changed = true;
            }
        }

        if live_count <= 1 {
            break;
        }

        // Remove the first live edge contained in another live edge,
        // attaching its node below the container. Lexicographic owner order
        // on both sides keeps the construction deterministic.
        let mut removed = false;
        'outer: for i in 0..n {
            if !live[i] {
                continue;
            }
            for j in 0..n {
                if i == j || !live[j] {
                    continue;
                }
                if cur[i].is_subset(&cur[j]) {
                    live[i] = false;
                    live_count -= 1;
                    parent[i] = Some(Player(j as u32));
                    removed = true;
                    break 'outer;
                }
            }
        }
        if !removed && !changed {
            break;
        }
    }

    let residue: Vec<Player> = (0..n)
        .filter(|&i| live[i])
        .map(|i| Player(i as u32))
        .collect();
    (parent, residue)
}

/// Builds a join tree by GYO ear reduction, or reports the hypergraph
/// cyclic. Cyclicity is a legitimate outcome, not an error.
pub fn join_tree(h: &Hypergraph) -> Option<JoinTree> {
    let (parent, residue) = gyo(h);
    if residue.len() != 1 {
        return None;
    }
    let root = residue[0];
    let n = h.vertex_count();
    let mut children: Vec<Vec<Player>> = vec![Vec::new(); n];
    for (i, par) in parent.iter().enumerate() {
        if let Some(p) = par {
            children[p.idx()].push(Player(i as u32));
        }
    }
    Some(JoinTree {
        root,
        parent,
        children,
    })
}

/// Validates that `jt` is a join tree of `h`: one node per player, tree
/// structure, and the connectedness condition.
pub fn validate_join_tree(h: &Hypergraph, jt: &JoinTree) -> Result<(), DecompError> {
    let n = h.vertex_count();
    if jt.parent.len() != n || jt.children.len() != n {
        return Err(DecompError::MissingNode {
            player: "(count mismatch)".into(),
        });
    }
    if jt.parent[jt.root.idx()].is_some() {
        return Err(DecompError::NotATree {
            detail: "root has a parent".into(),
        });
    }
    let parent_idx: Vec<Option<usize>> = jt.parent.iter().map(|p| p.map(|q| q.idx())).collect();
    let children_idx: Vec<Vec<usize>> = jt
        .children
        .iter()
        .map(|c| c.iter().map(|q| q.idx()).collect())
        .collect();
    check_tree(&parent_idx, &children_idx)?;
    check_connectedness(
        n,
        &parent_idx,
        |i| h.edge(Player(i as u32)).clone(),
        |v| h.name(v).to_string(),
    )
}

// ---------------------------------------------------------------------------
// Tree decompositions
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<BTreeSet<Player>>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    root: usize,
}

impl TreeDecomposition {
    pub fn new(
        bags: Vec<BTreeSet<Player>>,
        parent: Vec<Option<usize>>,
        children: Vec<Vec<usize>>,
        root: usize,
    ) -> TreeDecomposition {
        TreeDecomposition {
            bags,
            parent,
            children,
            root,
        }
    }

    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    pub fn bag(&self, i: usize) -> &BTreeSet<Player> {
        &self.bags[i]
    }

    pub fn bags(&self) -> &[BTreeSet<Player>] {
        &self.bags
    }

    pub fn parent_of(&self, i: usize) -> Option<usize> {
        self.parent[i]
    }

    pub fn children_of(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Max bag size minus one.
    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(1) - 1
    }
}

/// Min-fill elimination heuristic. The returned decomposition always passes
/// the validator; its width is heuristic, not guaranteed minimal. Ties are
/// broken by declared player order, so the output is deterministic.
pub fn tree_decomposition_heuristic(g: &Graph) -> TreeDecomposition {
    let n = g.vertex_count();
    if n == 0 {
        return TreeDecomposition {
            bags: vec![BTreeSet::new()],
            parent: vec![None],
            children: vec![Vec::new()],
            root: 0,
        };
    }

    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (a, b) in g.edges() {
        adj[a.idx()].insert(b.idx());
        adj[b.idx()].insert(a.idx());
    }

    let mut eliminated = vec![false; n];
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut bag_of: Vec<BTreeSet<Player>> = Vec::with_capacity(n);

    for _ in 0..n {
        // Pick the live vertex whose elimination adds the fewest fill edges.
        let mut best: Option<(usize, usize)> = None;
        for v in 0..n {
            if eliminated[v] {
                continue;
            }
            let neigh: Vec<usize> = adj[v].iter().copied().collect();
            let mut fill = 0usize;
            for i in 0..neigh.len() {
                for j in (i + 1)..neigh.len() {
                    if !adj[neigh[i]].contains(&neigh[j]) {
                        fill += 1;
                    }
                }
            }
            match best {
                None => best = Some((v, fill)),
                Some((_, bf)) if fill < bf => best = Some((v, fill)),
                _ => {}
            }
        }
        let (v, _) = best.expect("live vertex exists");

        let neigh: Vec<usize> = adj[v].iter().copied().collect();
        let mut bag: BTreeSet<Player> = neigh.iter().map(|&u| Player(u as u32)).collect();
        bag.insert(Player(v as u32));
        bag_of.push(bag);
        order.push(v);

        for i in 0..neigh.len() {
            for j in (i + 1)..neigh.len() {
                adj[neigh[i]].insert(neigh[j]);
                adj[neigh[j]].insert(neigh[i]);
            }
        }
        for &u in &neigh {
            adj[u].remove(&v);
        }
        adj[v].clear();
        eliminated[v] = true;
    }

    // Standard elimination tree: the bag of v hangs below the bag of the
    // earliest-eliminated vertex among v's bag (excluding v itself).
    let mut elim_pos = vec![0usize; n];
    for (k, &v) in order.iter().enumerate() {
        elim_pos[v] = k;
    }
    let k = order.len();
    let mut parent: Vec<Option<usize>> = vec![None; k];
    let mut pending_root: Option<usize> = None;
    for i in 0..k {
        let v = order[i];
        let next = bag_of[i]
            .iter()
            .filter(|p| p.idx() != v)
            .map(|p| elim_pos[p.idx()])
            .min();
        match next {
            Some(j) => parent[i] = Some(j),
            None => {
                // Component exhausted; chain component roots together so a
                // single tree remains.
                if let Some(r) = pending_root {
                    parent[r] = Some(i);
                }
                pending_root = Some(i);
            }
        }
    }

    // Contract to a fixpoint: a bag contained in its nearest live ancestor
    // disappears into it; an ancestor contained in its child is spliced out,
    // the child taking its place.
    let mut alive: Vec<bool> = vec![true; k];
    let live_parent = |parent: &[Option<usize>], alive: &[bool], mut i: usize| -> Option<usize> {
        loop {
            match parent[i] {
                Some(j) if alive[j] => return Some(j),
                Some(j) => i = j,
                None => return None,
            }
        }
    };
    loop {
        let mut changed = false;
        for i in 0..k {
            if !alive[i] {
                continue;
            }
            let Some(j) = live_parent(&parent, &alive, i) else {
                continue;
            };
            if bag_of[i].is_subset(&bag_of[j]) {
                alive[i] = false;
                changed = true;
            } else if bag_of[j].is_subset(&bag_of[i]) {
                parent[i] = parent[j];
                parent[j] = Some(i);
                alive[j] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let mut remap = vec![usize::MAX; k];
    let mut bags = Vec::new();
    for i in 0..k {
        if alive[i] {
            remap[i] = bags.len();
            bags.push(bag_of[i].clone());
        }
    }
    let m = bags.len();
    let mut new_parent: Vec<Option<usize>> = vec![None; m];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut root = 0usize;
    for i in 0..k {
        if !alive[i] {
            continue;
        }
        match live_parent(&parent, &alive, i) {
            Some(j) => {
                new_parent[remap[i]] = Some(remap[j]);
                children[remap[j]].push(remap[i]);
            }
            None => root = remap[i],
        }
    }
    TreeDecomposition {
        bags,
        parent: new_parent,
        children,
        root,
    }
}

/// Validates the three tree-decomposition conditions and returns the width.
pub fn validate_tree_decomposition(
    g: &Graph,
    td: &TreeDecomposition,
) -> Result<usize, DecompError> {
    check_tree(&td.parent, &td.children)?;
    // 1: every vertex in some bag.
    for v in 0..g.vertex_count() {
        let p = Player(v as u32);
        if !td.bags.iter().any(|b| b.contains(&p)) {
            return Err(DecompError::VertexUncovered {
                vertex: g.name(p).to_string(),
            });
        }
    }
    // 2: every edge inside some bag.
    for (a, b) in g.edges() {
        if !td
            .bags
            .iter()
            .any(|bag| bag.contains(&a) && bag.contains(&b))
        {
            return Err(DecompError::EdgeUncovered {
                edge: format!("{{{},{}}}", g.name(a), g.name(b)),
            });
        }
    }
    // 3: per-vertex bags connected.
    check_connectedness(
        td.bags.len(),
        &td.parent,
        |i| td.bags[i].clone(),
        |v| g.name(v).to_string(),
    )?;
    Ok(td.width())
}

// ---------------------------------------------------------------------------
// Hypertree decompositions
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HdNode {
    pub chi: BTreeSet<Player>,
    /// Hyperedges named by their owning player.
    pub lambda: BTreeSet<Player>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypertreeDecomposition {
    nodes: Vec<HdNode>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    root: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HdReport {
    /// Max lambda size.
    pub width: usize,
    /// True when every hyperedge is strongly covered.
    pub complete: bool,
}

impl HypertreeDecomposition {
    pub fn new(
        nodes: Vec<HdNode>,
        parent: Vec<Option<usize>>,
        children: Vec<Vec<usize>>,
        root: usize,
    ) -> HypertreeDecomposition {
        HypertreeDecomposition {
            nodes,
            parent,
            children,
            root,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node(&self, i: usize) -> &HdNode {
        &self.nodes[i]
    }

    pub fn nodes(&self) -> &[HdNode] {
        &self.nodes
    }

    pub fn parent_of(&self, i: usize) -> Option<usize> {
        self.parent[i]
    }

    pub fn children_of(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn width(&self) -> usize {
        self.nodes.iter().map(|n| n.lambda.len()).max().unwrap_or(0)
    }
}

fn vert_of_lambda(h: &Hypergraph, lambda: &BTreeSet<Player>) -> BTreeSet<Player> {
    let mut out = BTreeSet::new();
    for &owner in lambda {
        out.extend(h.edge(owner).iter().copied());
    }
    out
}

/// Validates the four hypertree-decomposition conditions; reports width and
/// whether every hyperedge is strongly covered.
pub fn validate_hypertree_decomposition(
    h: &Hypergraph,
    hd: &HypertreeDecomposition,
) -> Result<HdReport, DecompError> {
    let order = check_tree(&hd.parent, &hd.children)?;
    for (i, node) in hd.nodes.iter().enumerate() {
        for &owner in &node.lambda {
            if owner.idx() >= h.vertex_count() {
                return Err(DecompError::UnknownEdge {
                    node: format!("{i}"),
                    name: format!("{owner}"),
                });
            }
        }
    }
    // 1: every hyperedge covered by some chi.
    for (owner, edge) in h.edges() {
        if !hd.nodes.iter().any(|n| edge.is_subset(&n.chi)) {
            return Err(DecompError::HyperedgeUncovered {
                owner: h.name(owner).to_string(),
            });
        }
    }
    // 2: per-vertex chi labels connected.
    check_connectedness(
        hd.nodes.len(),
        &hd.parent,
        |i| hd.nodes[i].chi.clone(),
        |v| h.name(v).to_string(),
    )?;
    // 3: chi ⊆ vert(lambda).
    for (i, node) in hd.nodes.iter().enumerate() {
        let vl = vert_of_lambda(h, &node.lambda);
        if let Some(v) = node.chi.iter().find(|v| !vl.contains(v)) {
            return Err(DecompError::ChiNotInLambda {
                node: format!("{i}"),
                vertex: h.name(*v).to_string(),
            });
        }
    }
    // 4: vert(lambda(p)) ∩ chi(T_p) ⊆ chi(p).
    let mut chi_subtree: Vec<BTreeSet<Player>> = hd.nodes.iter().map(|n| n.chi.clone()).collect();
    for &i in order.iter().rev() {
        for &c in &hd.children[i] {
            let lower = chi_subtree[c].clone();
            chi_subtree[i].extend(lower);
        }
    }
    for (i, node) in hd.nodes.iter().enumerate() {
        let vl = vert_of_lambda(h, &node.lambda);
        for v in vl.intersection(&chi_subtree[i]) {
            if !node.chi.contains(v) {
                return Err(DecompError::DescendantViolation {
                    node: format!("{i}"),
                    vertex: h.name(*v).to_string(),
                });
            }
        }
    }

    let complete = h.edges().all(|(owner, edge)| {
        hd.nodes
            .iter()
            .any(|n| n.lambda.contains(&owner) && edge.is_subset(&n.chi))
    });
    Ok(HdReport {
        width: hd.width(),
        complete,
    })
}

/// Recasts a join tree as the width-1 hypertree decomposition in which each
/// node is labeled by its owner's characteristic edge.
pub fn join_tree_to_hd(h: &Hypergraph, jt: &JoinTree) -> HypertreeDecomposition {
    let n = jt.node_count();
    let nodes = (0..n)
        .map(|i| {
            let owner = Player(i as u32);
            HdNode {
                chi: h.edge(owner).clone(),
                lambda: BTreeSet::from([owner]),
            }
        })
        .collect();
    let parent = jt.parent.iter().map(|p| p.map(|q| q.idx())).collect();
    let children = jt
        .children
        .iter()
        .map(|c| c.iter().map(|q| q.idx()).collect())
        .collect();
    HypertreeDecomposition {
        nodes,
        parent,
        children,
        root: jt.root.idx(),
    }
}

/// Converts a valid tree decomposition of the dependency graph into a
/// complete hypertree decomposition of the dependency hypergraph, with the
/// same tree shape, `lambda(v) = {H(p) | p ∈ bag(v)}`, and
/// `chi(v) = vert(lambda(v))`. The width is exactly `width(td) + 1`.
pub fn td_to_hd<G: Game>(
    game: &G,
    td: &TreeDecomposition,
) -> Result<HypertreeDecomposition, DecompError> {
    let g = game.dependency_graph();
    validate_tree_decomposition(&g, td)?;
    let h = game.dependency_hypergraph();
    let nodes = td
        .bags
        .iter()
        .map(|bag| {
            let lambda: BTreeSet<Player> = bag.iter().copied().collect();
            let chi = vert_of_lambda(&h, &lambda);
            HdNode { chi, lambda }
        })
        .collect();
    Ok(HypertreeDecomposition {
        nodes,
        parent: td.parent.clone(),
        children: td.children.clone(),
        root: td.root,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Game;
    use crate::generators::fixtures::{chain, clique, pennies, solo};
    use crate::generators::{gen_friends, gen_random, FriendsVariant, RandomGameParams};

    fn hypergraph(names: &[&str], edges: &[&[usize]]) -> Hypergraph {
        Hypergraph::new(
            names.iter().map(|s| s.to_string()).collect(),
            edges
                .iter()
                .map(|e| e.iter().map(|&i| Player(i as u32)).collect())
                .collect(),
        )
    }

    #[test]
    fn friends_join_tree_is_valid() {
        let g = gen_friends(FriendsVariant::Base);
        let h = g.dependency_hypergraph();
        let jt = join_tree(&h).expect("acyclic");
        validate_join_tree(&h, &jt).unwrap();
    }

    #[test]
    fn triangle_hypergraph_is_cyclic() {
        let h = hypergraph(&["A", "B", "C"], &[&[0, 1], &[1, 2], &[0, 2]]);
        assert!(join_tree(&h).is_none());
    }

    #[test]
    fn clique_game_has_a_join_tree() {
        let g = clique(6, 2, 7);
        let h = g.dependency_hypergraph();
        let jt = join_tree(&h).expect("identical edges chain");
        assert_eq!(jt.node_count(), 6);
        validate_join_tree(&h, &jt).unwrap();
    }

    #[test]
    fn solo_join_tree_single_node() {
        let g = solo();
        let h = g.dependency_hypergraph();
        let jt = join_tree(&h).unwrap();
        assert_eq!(jt.node_count(), 1);
        validate_join_tree(&h, &jt).unwrap();
    }

    #[test]
    fn gyo_residue_matches_independent_acyclicity_check() {
        // Independent oracle: α-acyclicity via an order-free fixpoint GYO
        // over edge sets, without any tree building.
        fn acyclic_oracle(h: &Hypergraph) -> bool {
            let mut edges: Vec<BTreeSet<Player>> = h.edges().map(|(_, e)| e.clone()).collect();
            loop {
                let mut changed = false;
                let mut counts: BTreeMap<Player, usize> = BTreeMap::new();
                for e in &edges {
                    for &v in e {
                        *counts.entry(v).or_default() += 1;
                    }
                }
                for e in edges.iter_mut() {
                    let before = e.len();
                    e.retain(|v| counts[v] > 1);
                    changed |= e.len() != before;
                }
                let mut i = 0;
                while i < edges.len() {
                    let contained = edges
                        .iter()
                        .enumerate()
                        .any(|(j, f)| j != i && edges[i].is_subset(f));
                    if contained {
                        edges.remove(i);
                        changed = true;
                    } else {
                        i += 1;
                    }
                }
                if !changed {
                    break;
                }
            }
            edges.len() <= 1
        }

        for seed in 0..80u64 {
            let g = gen_random(&RandomGameParams {
                seed,
                players: 3 + (seed % 4) as usize,
                max_actions: 2,
                max_neigh: 3,
                payoff_min: 0,
                payoff_max: 1,
            });
            let h = g.dependency_hypergraph();
            let jt = join_tree(&h);
            assert_eq!(jt.is_some(), acyclic_oracle(&h), "seed {seed}");
            if let Some(jt) = jt {
                validate_join_tree(&h, &jt).unwrap();
            }
        }
    }

    #[test]
    fn misattached_friends_join_tree_rejected() {
        // Hang M's node under P's node: R then occurs in the disconnected
        // nodes of M and of F/R.
        let g = gen_friends(FriendsVariant::Base);
        let h = g.dependency_hypergraph();
        let pl = |n: &str| g.player_by_name(n).unwrap();
        let (gg, p, f, r, m) = (pl("G"), pl("P"), pl("F"), pl("R"), pl("M"));
        let mut parent = vec![None; 5];
        let mut children = vec![Vec::new(); 5];
        // F at the root; P, R children of F; G child of P; M under P too.
        for (child, par) in [(p, f), (r, f), (gg, p), (m, p)] {
            parent[child.idx()] = Some(par);
            children[par.idx()].push(child);
        }
        let jt = JoinTree::new(f, parent, children);
        let err = validate_join_tree(&h, &jt).unwrap_err();
        assert_eq!(err, DecompError::Connectedness { vertex: "R".into() });
    }

    #[test]
    fn min_fill_on_chain_has_width_one() {
        let g = chain(3, 2, 1);
        let dg = g.dependency_graph();
        let td = tree_decomposition_heuristic(&dg);
        assert_eq!(validate_tree_decomposition(&dg, &td).unwrap(), 1);
        let bags: BTreeSet<_> = td.bags().iter().cloned().collect();
        let expect: BTreeSet<BTreeSet<Player>> = [
            BTreeSet::from([Player(0), Player(1)]),
            BTreeSet::from([Player(1), Player(2)]),
        ]
        .into();
        assert_eq!(bags, expect);
    }

    #[test]
    fn min_fill_on_triangle_single_bag() {
        let mut g = Graph::new(vec!["A".into(), "B".into(), "C".into()]);
        g.add_edge(Player(0), Player(1));
        g.add_edge(Player(1), Player(2));
        g.add_edge(Player(0), Player(2));
        let td = tree_decomposition_heuristic(&g);
        assert_eq!(validate_tree_decomposition(&g, &td).unwrap(), 2);
        assert_eq!(td.node_count(), 1);
        assert_eq!(td.bag(0).len(), 3);
    }

    #[test]
    fn min_fill_on_clique_has_width_n_minus_1() {
        let g = clique(6, 2, 3);
        let dg = g.dependency_graph();
        let td = tree_decomposition_heuristic(&dg);
        assert_eq!(validate_tree_decomposition(&dg, &td).unwrap(), 5);
    }

    #[test]
    fn bad_tree_decompositions_rejected() {
        let mut g = Graph::new(vec!["A".into(), "B".into(), "C".into()]);
        g.add_edge(Player(1), Player(2));
        // Bags {A,B},{C} miss edge {B,C}.
        let td = TreeDecomposition::new(
            vec![
                BTreeSet::from([Player(0), Player(1)]),
                BTreeSet::from([Player(2)]),
            ],
            vec![None, Some(0)],
            vec![vec![1], vec![]],
            0,
        );
        assert!(matches!(
            validate_tree_decomposition(&g, &td),
            Err(DecompError::EdgeUncovered { .. })
        ));

        // A in two bags separated by an A-free bag.
        let mut g2 = Graph::new(vec!["A".into(), "B".into()]);
        g2.add_edge(Player(0), Player(1));
        let td2 = TreeDecomposition::new(
            vec![
                BTreeSet::from([Player(0), Player(1)]),
                BTreeSet::from([Player(1)]),
                BTreeSet::from([Player(0), Player(1)]),
            ],
            vec![None, Some(0), Some(1)],
            vec![vec![1], vec![2], vec![]],
            0,
        );
        assert!(matches!(
            validate_tree_decomposition(&g2, &td2),
            Err(DecompError::Connectedness { .. })
        ));
    }

    #[test]
    fn heuristic_validates_on_random_graphs() {
        for seed in 0..60u64 {
            let g = gen_random(&RandomGameParams {
                seed: seed + 1000,
                players: 2 + (seed % 6) as usize,
                max_actions: 2,
                max_neigh: 4,
                payoff_min: 0,
                payoff_max: 1,
            });
            let dg = g.dependency_graph();
            let td = tree_decomposition_heuristic(&dg);
            validate_tree_decomposition(&dg, &td).unwrap();
        }
    }

    #[test]
    fn join_tree_recast_is_width_one_hd() {
        let g = gen_friends(FriendsVariant::Base);
        let h = g.dependency_hypergraph();
        let jt = join_tree(&h).unwrap();
        let hd = join_tree_to_hd(&h, &jt);
        let report = validate_hypertree_decomposition(&h, &hd).unwrap();
        assert_eq!(report.width, 1);
        assert!(report.complete);
    }

    #[test]
    fn hd_chi_outside_lambda_rejected() {
        let h = hypergraph(&["A", "B"], &[&[0, 1], &[1]]);
        let hd = HypertreeDecomposition::new(
            vec![HdNode {
                chi: BTreeSet::from([Player(0), Player(1)]),
                lambda: BTreeSet::from([Player(1)]), // vert = {B} only
            }],
            vec![None],
            vec![vec![]],
            0,
        );
        assert!(matches!(
            validate_hypertree_decomposition(&h, &hd),
            Err(DecompError::ChiNotInLambda { .. })
        ));
    }

    #[test]
    fn chain_td_to_hd_matches_construction() {
        let g = chain(3, 2, 1);
        // Hand-built bags {A,B},{B,C} rooted at {B,C}.
        let td = TreeDecomposition::new(
            vec![
                BTreeSet::from([Player(1), Player(2)]),
                BTreeSet::from([Player(0), Player(1)]),
            ],
            vec![None, Some(0)],
            vec![vec![1], vec![]],
            0,
        );
        let dg = g.dependency_graph();
        assert_eq!(validate_tree_decomposition(&dg, &td).unwrap(), 1);
        let hd = td_to_hd(&g, &td).unwrap();
        let h = g.dependency_hypergraph();
        let report = validate_hypertree_decomposition(&h, &hd).unwrap();
        assert_eq!(report.width, 2);
        assert!(report.complete);
        // Node for bag {A,B}: lambda = {H(A),H(B)}, chi = {A,B,C}.
        let node = hd.node(1);
        assert_eq!(node.lambda, BTreeSet::from([Player(0), Player(1)]));
        assert_eq!(node.chi, BTreeSet::from([Player(0), Player(1), Player(2)]));
        // Node for bag {B,C}: lambda = {H(B),H(C)}, chi = {B,C}.
        let node = hd.node(0);
        assert_eq!(node.lambda, BTreeSet::from([Player(1), Player(2)]));
        assert_eq!(node.chi, BTreeSet::from([Player(1), Player(2)]));
    }

    #[test]
    fn solo_td_to_hd() {
        let g = solo();
        let dg = g.dependency_graph();
        let td = tree_decomposition_heuristic(&dg);
        let hd = td_to_hd(&g, &td).unwrap();
        let h = g.dependency_hypergraph();
        let report = validate_hypertree_decomposition(&h, &hd).unwrap();
        assert_eq!(report.width, 1);
        assert_eq!(hd.node_count(), 1);
    }

    #[test]
    fn friends_prime_is_cyclic_with_width_3_td() {
        let g = gen_friends(FriendsVariant::Prime);
        let h = g.dependency_hypergraph();
        assert!(join_tree(&h).is_none());

        // Hand-built width-3 tree decomposition of the dependency graph.
        let pl = |n: &str| g.player_by_name(n).unwrap();
        let td = TreeDecomposition::new(
            vec![
                BTreeSet::from([pl("L"), pl("G"), pl("P"), pl("M")]),
                BTreeSet::from([pl("G"), pl("P"), pl("F"), pl("M")]),
                BTreeSet::from([pl("F"), pl("R"), pl("M")]),
            ],
            vec![None, Some(0), Some(1)],
            vec![vec![1], vec![2], vec![]],
            0,
        );
        let dg = g.dependency_graph();
        assert_eq!(validate_tree_decomposition(&dg, &td).unwrap(), 3);

        let hd = td_to_hd(&g, &td).unwrap();
        let report = validate_hypertree_decomposition(&h, &hd).unwrap();
        assert_eq!(report.width, 4);
        assert!(report.complete);
    }

    #[test]
    fn td_to_hd_width_is_td_width_plus_one() {
        for seed in 0..60u64 {
            let g = gen_random(&RandomGameParams {
                seed: seed + 500,
                players: 3 + (seed % 4) as usize,
                max_actions: 2,
                max_neigh: 3,
                payoff_min: 0,
                payoff_max: 2,
            });
            let dg = g.dependency_graph();
            let td = tree_decomposition_heuristic(&dg);
            let hd = td_to_hd(&g, &td).unwrap();
            let h = g.dependency_hypergraph();
            let report = validate_hypertree_decomposition(&h, &hd).unwrap();
            assert_eq!(report.width, td.width() + 1, "seed {seed}");
            assert!(report.complete, "seed {seed}");
        }
    }

    #[test]
    fn clique_separation() {
        // Hypertree width 1 via the join tree, treewidth n-1 via min-fill.
        let g = clique(6, 2, 11);
        let h = g.dependency_hypergraph();
        assert!(join_tree(&h).is_some());
        let dg = g.dependency_graph();
        let td = tree_decomposition_heuristic(&dg);
        assert_eq!(td.width(), 5);
    }

    #[test]
    fn pennies_join_tree() {
        let g = pennies();
        let h = g.dependency_hypergraph();
        let jt = join_tree(&h).unwrap();
        validate_join_tree(&h, &jt).unwrap();
    }
}
