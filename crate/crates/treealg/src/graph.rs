use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use petgraph::graph::{DiGraph, NodeIndex};

use crate::error::{Error, Result};
use crate::sort::Sort;
use crate::tree::{check_cut, Path, Tree};

/// Node label of a graph presentation: a symbol or a variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label<L> {
    Sym(L),
    Var(String),
}

impl<L> Label<L> {
    pub fn sym(&self) -> Option<&L> {
        match self {
            Label::Sym(a) => Some(a),
            Label::Var(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GNode<L> {
    pub label: Label<L>,
    pub succ: BTreeMap<String, usize>,
}

/// A finite rooted graph presenting the regular tree obtained by unravelling
/// it from the root. Variable nodes have no successors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph<L> {
    pub nodes: Vec<GNode<L>>,
    pub root: usize,
    /// Node identifiers used in files and reports.
    pub names: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum TreeClass {
    Finite,
    ThinRegular,
    RegularNonThin,
}

impl<L> Default for Graph<L> {
    fn default() -> Self {
        Graph { nodes: Vec::new(), root: 0, names: Vec::new() }
    }
}

impl<L> Graph<L> {
    pub fn new() -> Graph<L> {
        Graph::default()
    }

    pub fn add(&mut self, label: Label<L>) -> usize {
        let id = self.nodes.len();
        self.nodes.push(GNode { label, succ: BTreeMap::new() });
        self.names.push(format!("n{id}"));
        id
    }

    pub fn add_sym(&mut self, a: L) -> usize {
        self.add(Label::Sym(a))
    }

    pub fn add_var(&mut self, x: impl Into<String>) -> usize {
        self.add(Label::Var(x.into()))
    }

    pub fn edge(&mut self, from: usize, dir: impl Into<String>, to: usize) {
        self.nodes[from].succ.insert(dir.into(), to);
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Out-edge sort of a node.
    pub fn out_sort(&self, v: usize) -> Sort {
        Sort(self.nodes[v].succ.keys().cloned().collect())
    }

    pub fn validate(&self) -> Result<()> {
        if self.root >= self.nodes.len() {
            return Err(Error::Invalid("root out of range".into()));
        }
        for (i, n) in self.nodes.iter().enumerate() {
            if matches!(n.label, Label::Var(_)) && !n.succ.is_empty() {
                return Err(Error::Invalid(format!("variable node {} has successors", self.names[i])));
            }
            if n.succ.values().any(|&t| t >= self.nodes.len()) {
                return Err(Error::Invalid(format!("edge target out of range at {}", self.names[i])));
            }
        }
        Ok(())
    }

    /// Nodes reachable from `from`, in breadth-first order with directions
    /// visited in sorted order.
    pub fn reachable_from(&self, from: usize) -> Vec<usize> {
        let mut seen = vec![false; self.nodes.len()];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in self.nodes[v].succ.values() {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        order
    }

    pub fn node_at(&self, path: &[String]) -> Option<usize> {
        let mut v = self.root;
        for d in path {
            v = *self.nodes[v].succ.get(d)?;
        }
        Some(v)
    }

    /// Variables occurring in the subtree below each node.
    pub fn subtree_sorts(&self) -> Vec<Sort> {
        let mut sorts: Vec<Sort> = self
            .nodes
            .iter()
            .map(|n| match &n.label {
                Label::Var(x) => Sort::of([x.clone()]),
                Label::Sym(_) => Sort::empty(),
            })
            .collect();
        loop {
            let mut changed = false;
            for v in 0..self.nodes.len() {
                let mut s = sorts[v].clone();
                for &w in self.nodes[v].succ.values() {
                    s = s.union(&sorts[w]);
                }
                if s != sorts[v] {
                    sorts[v] = s;
                    changed = true;
                }
            }
            if !changed {
                return sorts;
            }
        }
    }

    /// Strongly connected components of the reachable part, sinks first.
    pub fn sccs(&self) -> Vec<Vec<usize>> {
        let reach = self.reachable_from(self.root);
        let mut pg: DiGraph<usize, ()> = DiGraph::new();
        let mut idx = HashMap::new();
        for &v in &reach {
            idx.insert(v, pg.add_node(v));
        }
        for &v in &reach {
            for &w in self.nodes[v].succ.values() {
                pg.add_edge(idx[&v], idx[&w], ());
            }
        }
        petgraph::algo::tarjan_scc(&pg)
            .into_iter()
            .map(|c| {
                let mut c: Vec<usize> = c.into_iter().map(|n: NodeIndex| pg[n]).collect();
                c.sort_unstable();
                c
            })
            .collect()
    }

    /// Number of edges from `v` into the set `comp` (counting parallel edges).
    fn internal_edges(&self, v: usize, comp: &BTreeSet<usize>) -> usize {
        self.nodes[v].succ.values().filter(|w| comp.contains(w)).count()
    }

    /// Whether a strongly connected component is a single simple cycle
    /// (an "induced cycle"), a trivial component, or neither.
    fn scc_kind(&self, comp: &[usize]) -> SccKind {
        let set: BTreeSet<usize> = comp.iter().copied().collect();
        let counts: Vec<usize> = comp.iter().map(|&v| self.internal_edges(v, &set)).collect();
        if comp.len() == 1 && counts[0] == 0 {
            SccKind::Trivial
        } else if counts.iter().all(|&c| c == 1) {
            SccKind::Cycle
        } else {
            SccKind::Branching
        }
    }

    pub fn classify(&self) -> TreeClass {
        let mut finite = true;
        for comp in self.sccs() {
            match self.scc_kind(&comp) {
                SccKind::Trivial => {}
                SccKind::Cycle => finite = false,
                SccKind::Branching => return TreeClass::RegularNonThin,
            }
        }
        if finite {
            TreeClass::Finite
        } else {
            TreeClass::ThinRegular
        }
    }

    /// For a node on a simple cycle, the cycle in traversal order starting
    /// at that node together with the direction taken at each step.
    pub fn cycle_from(&self, v: usize, comp: &BTreeSet<usize>) -> Vec<(usize, String)> {
        let mut out = Vec::new();
        let mut cur = v;
        loop {
            let (d, w) = self.nodes[cur]
                .succ
                .iter()
                .find(|(_, w)| comp.contains(w))
                .map(|(d, w)| (d.clone(), *w))
                .expect("cycle node has an internal edge");
            out.push((cur, d));
            cur = w;
            if cur == v {
                return out;
            }
        }
    }

    /// Cantor-Bendixson rank of the unravelling, or `None` if it is not thin.
    pub fn cb_rank(&self) -> Option<usize> {
        if self.classify() == TreeClass::RegularNonThin {
            return None;
        }
        let n = self.nodes.len();
        let mut alive = vec![false; n];
        for v in self.reachable_from(self.root) {
            alive[v] = true;
        }
        let mut rounds: usize = 0;
        while alive.iter().any(|&a| a) {
            rounds += 1;
            let keep = self.many_branches(&alive);
            alive = keep;
        }
        Some(rounds.saturating_sub(1))
    }

    /// Nodes (within `alive`) whose subtree, restricted to `alive`, has
    /// infinitely many infinite branches.
    fn many_branches(&self, alive: &[bool]) -> Vec<bool> {
        let n = self.nodes.len();
        let succ = |v: usize| self.nodes[v].succ.values().copied().filter(move |&w| alive[w]);
        // cycle membership within the alive part
        let mut pg: DiGraph<usize, ()> = DiGraph::new();
        let ids: Vec<NodeIndex> = (0..n).map(|v| pg.add_node(v)).collect();
        for v in (0..n).filter(|&v| alive[v]) {
            for w in succ(v) {
                pg.add_edge(ids[v], ids[w], ());
            }
        }
        let mut comp_of = vec![usize::MAX; n];
        let mut on_cycle = vec![false; n];
        for (ci, comp) in petgraph::algo::tarjan_scc(&pg).into_iter().enumerate() {
            let members: Vec<usize> = comp.iter().map(|&x| pg[x]).collect();
            for &m in &members {
                comp_of[m] = ci;
            }
            let cyclic = members.len() > 1 || succ(members[0]).any(|w| w == members[0]);
            if cyclic && alive[members[0]] {
                for &m in &members {
                    on_cycle[m] = true;
                }
            }
        }
        let reaches = |targets: &[bool]| -> Vec<bool> {
            let mut r = targets.to_vec();
            loop {
                let mut changed = false;
                for v in 0..n {
                    if alive[v] && !r[v] && succ(v).any(|w| r[w]) {
                        r[v] = true;
                        changed = true;
                    }
                }
                if !changed {
                    return r;
                }
            }
        };
        let reach_cycle = reaches(&on_cycle);
        let bad: Vec<bool> =
            (0..n).map(|c| on_cycle[c] && succ(c).any(|w| comp_of[w] != comp_of[c] && reach_cycle[w])).collect();
        reaches(&bad)
    }

    /// Unravelling truncated at `depth`; truncated vertices are `Node(None, {})`.
    pub fn unravel(&self, depth: usize) -> Tree<Option<L>>
    where
        L: Clone,
    {
        self.unravel_from(self.root, depth)
    }

    fn unravel_from(&self, v: usize, depth: usize) -> Tree<Option<L>>
    where
        L: Clone,
    {
        match &self.nodes[v].label {
            Label::Var(x) => Tree::Var(x.clone()),
            Label::Sym(a) => {
                if depth == 0 {
                    Tree::Node(None, BTreeMap::new())
                } else {
                    Tree::Node(
                        Some(a.clone()),
                        self.nodes[v].succ.iter().map(|(d, &w)| (d.clone(), self.unravel_from(w, depth - 1))).collect(),
                    )
                }
            }
        }
    }

    /// The finite tree presented by an acyclic graph.
    pub fn to_tree(&self) -> Option<Tree<L>>
    where
        L: Clone,
    {
        if self.classify() != TreeClass::Finite {
            return None;
        }
        fn go<L: Clone>(g: &Graph<L>, v: usize) -> Tree<L> {
            match &g.nodes[v].label {
                Label::Var(x) => Tree::Var(x.clone()),
                Label::Sym(a) => {
                    Tree::Node(a.clone(), g.nodes[v].succ.iter().map(|(d, &w)| (d.clone(), go(g, w))).collect())
                }
            }
        }
        Some(go(self, self.root))
    }

    /// The graph of a finite tree; vertices are named by their paths.
    pub fn from_tree(t: &Tree<L>) -> Graph<L>
    where
        L: Clone,
    {
        let mut g = Graph::new();
        fn go<L: Clone>(g: &mut Graph<L>, t: &Tree<L>, path: &mut Path) -> usize {
            let id = match t {
                Tree::Var(x) => g.add_var(x.clone()),
                Tree::Node(a, _) => g.add_sym(a.clone()),
            };
            g.names[id] = if path.is_empty() { "root".to_string() } else { path.join(".") };
            if let Tree::Node(_, ch) = t {
                for (d, c) in ch {
                    path.push(d.clone());
                    let w = go(g, c, path);
                    path.pop();
                    g.edge(id, d.clone(), w);
                }
            }
            id
        }
        g.root = go(&mut g, t, &mut Vec::new());
        g
    }

    pub fn map<M>(&self, f: &mut impl FnMut(&L) -> M) -> Graph<M> {
        Graph {
            nodes: self
                .nodes
                .iter()
                .map(|n| GNode {
                    label: match &n.label {
                        Label::Sym(a) => Label::Sym(f(a)),
                        Label::Var(x) => Label::Var(x.clone()),
                    },
                    succ: n.succ.clone(),
                })
                .collect(),
            root: self.root,
            names: self.names.clone(),
        }
    }

    pub fn try_map<M, E>(
        &self,
        f: &mut impl FnMut(usize, &L) -> std::result::Result<M, E>,
    ) -> std::result::Result<Graph<M>, E> {
        let mut nodes = Vec::with_capacity(self.nodes.len());
        for (i, n) in self.nodes.iter().enumerate() {
            nodes.push(GNode {
                label: match &n.label {
                    Label::Sym(a) => Label::Sym(f(i, a)?),
                    Label::Var(x) => Label::Var(x.clone()),
                },
                succ: n.succ.clone(),
            });
        }
        Ok(Graph { nodes, root: self.root, names: self.names.clone() })
    }

    /// The graph restricted to the nodes reachable from `v`, rooted at `v`.
    /// Returns the new graph and the map from old to new indices.
    pub fn rooted_at(&self, v: usize) -> (Graph<L>, Vec<Option<usize>>)
    where
        L: Clone,
    {
        let order = self.reachable_from(v);
        let mut map = vec![None; self.nodes.len()];
        for (i, &old) in order.iter().enumerate() {
            map[old] = Some(i);
        }
        let nodes = order
            .iter()
            .map(|&old| GNode {
                label: self.nodes[old].label.clone(),
                succ: self.nodes[old].succ.iter().map(|(d, &w)| (d.clone(), map[w].unwrap())).collect(),
            })
            .collect();
        let names = order.iter().map(|&old| self.names[old].clone()).collect();
        (Graph { nodes, root: 0, names }, map)
    }

    /// Drops unreachable nodes.
    pub fn trimmed(&self) -> Graph<L>
    where
        L: Clone,
    {
        self.rooted_at(self.root).0
    }

    /// Graph presenting the factor between the unfolding vertices `u` and
    /// the antichain `vs`: the path region from `u` down to each cut vertex
    /// is copied, cut vertices become variable nodes, and everything hanging
    /// off the copied region refers back to the original graph.
    pub fn factor(&self, u: &[String], vs: &BTreeMap<String, Path>) -> Result<Graph<L>>
    where
        L: Clone,
    {
        check_cut(u, vs)?;
        if self.node_at(u).is_none() {
            return Err(Error::NotBelow(u.join(".")));
        }
        for v in vs.values() {
            if self.node_at(v).is_none() {
                return Err(Error::NotBelow(v.join(".")));
            }
        }
        let mut region: BTreeSet<Path> = BTreeSet::new();
        for v in vs.values() {
            for k in u.len()..v.len() {
                region.insert(v[..k].to_vec());
            }
        }
        let mut g = self.clone();
        if region.is_empty() {
            g.root = self.node_at(u).unwrap();
            return Ok(g.trimmed());
        }
        let mut copy: BTreeMap<Path, usize> = BTreeMap::new();
        for p in &region {
            let orig = self.node_at(p).unwrap();
            let id = g.add(self.nodes[orig].label.clone());
            g.names[id] = format!("{}@{}", self.names[orig], p.join("."));
            copy.insert(p.clone(), id);
        }
        let mut holes: BTreeMap<Path, usize> = BTreeMap::new();
        for (x, v) in vs {
            let id = g.add_var(x.clone());
            g.names[id] = format!("hole:{x}");
            holes.insert(v.clone(), id);
        }
        for p in &region {
            let orig = self.node_at(p).unwrap();
            let id = copy[p];
            for (d, &w) in &self.nodes[orig].succ {
                let mut q = p.clone();
                q.push(d.clone());
                let target = holes.get(&q).or_else(|| copy.get(&q)).copied().unwrap_or(w);
                g.nodes[id].succ.insert(d.clone(), target);
            }
        }
        g.root = copy[u];
        Ok(g.trimmed())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SccKind {
    Trivial,
    Cycle,
    Branching,
}

impl<L: Clone + Ord> Graph<L> {
    /// Coarsest bisimulation quotient of the reachable part. Nodes are
    /// numbered in breadth-first order from the root, so two graphs with
    /// isomorphic unravellings have structurally equal quotients.
    pub fn bisim_quotient(&self) -> Graph<L> {
        let g = self.trimmed();
        let n = g.nodes.len();
        let mut class = vec![0usize; n];
        {
            let mut keys: BTreeMap<(Label<L>, Vec<String>), usize> = BTreeMap::new();
            for v in 0..n {
                let k = (g.nodes[v].label.clone(), g.nodes[v].succ.keys().cloned().collect());
                let next = keys.len();
                class[v] = *keys.entry(k).or_insert(next);
            }
        }
        loop {
            let mut sigs: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
            let mut next_class = vec![0usize; n];
            for v in 0..n {
                let sig = (class[v], g.nodes[v].succ.values().map(|&w| class[w]).collect());
                let fresh = sigs.len();
                next_class[v] = *sigs.entry(sig).or_insert(fresh);
            }
            let before = class.iter().collect::<BTreeSet<_>>().len();
            let after = sigs.len();
            class = next_class;
            if before == after {
                break;
            }
        }
        // breadth-first numbering of classes
        let mut number: HashMap<usize, usize> = HashMap::new();
        let mut reps: Vec<usize> = Vec::new();
        let mut queue = VecDeque::from([g.root]);
        number.insert(class[g.root], 0);
        reps.push(g.root);
        while let Some(v) = queue.pop_front() {
            for &w in g.nodes[v].succ.values() {
                if let std::collections::hash_map::Entry::Vacant(e) = number.entry(class[w]) {
                    e.insert(reps.len());
                    reps.push(w);
                    queue.push_back(w);
                }
            }
        }
        let mut smallest_name: HashMap<usize, String> = HashMap::new();
        for v in 0..n {
            smallest_name.entry(class[v]).or_insert_with(|| g.names[v].clone());
        }
        Graph {
            nodes: reps
                .iter()
                .map(|&r| GNode {
                    label: g.nodes[r].label.clone(),
                    succ: g.nodes[r].succ.iter().map(|(d, &w)| (d.clone(), number[&class[w]])).collect(),
                })
                .collect(),
            root: 0,
            names: reps.iter().map(|&r| smallest_name[&class[r]].clone()).collect(),
        }
    }

    /// Whether both graphs unravel to the same tree.
    pub fn same_tree(&self, other: &Graph<L>) -> bool {
        let a = self.bisim_quotient();
        let b = other.bisim_quotient();
        a.nodes == b.nodes
    }
}

/// Flattens a graph whose labels are graphs: every node is replaced by its
/// label graph, whose variable nodes are wired to the entry of the node's
/// successor in the matching direction. Returns the flattened graph and, for
/// every labelled outer node, the node where its component starts.
pub fn flat_graph<L: Clone>(outer: &Graph<Graph<L>>) -> Result<(Graph<L>, Vec<Option<usize>>)> {
    let mut g: Graph<L> = Graph::new();
    let n = outer.nodes.len();
    // allocate copies
    let mut offsets: Vec<Option<Vec<Option<usize>>>> = vec![None; n];
    let mut var_node: Vec<Option<usize>> = vec![None; n];
    for v in 0..n {
        match &outer.nodes[v].label {
            Label::Var(x) => {
                let id = g.add_var(x.clone());
                g.names[id] = outer.names[v].clone();
                var_node[v] = Some(id);
            }
            Label::Sym(h) => {
                let inner_vars: BTreeSet<String> = h
                    .reachable_from(h.root)
                    .into_iter()
                    .filter_map(|w| match &h.nodes[w].label {
                        Label::Var(x) => Some(x.clone()),
                        _ => None,
                    })
                    .collect();
                let keys: BTreeSet<String> = outer.nodes[v].succ.keys().cloned().collect();
                if inner_vars != keys {
                    return Err(Error::SortMismatch(format!(
                        "component at {} has variables {:?} but out-edges {:?}",
                        outer.names[v], inner_vars, keys
                    )));
                }
                let mut map = vec![None; h.nodes.len()];
                for w in h.reachable_from(h.root) {
                    if let Label::Sym(a) = &h.nodes[w].label {
                        let id = g.add_sym(a.clone());
                        g.names[id] = format!("{}/{}", outer.names[v], h.names[w]);
                        map[w] = Some(id);
                    }
                }
                offsets[v] = Some(map);
            }
        }
    }
    // entry node of each outer node
    let mut entry: Vec<Option<usize>> = vec![None; n];
    for v in 0..n {
        let mut cur = v;
        let mut seen = BTreeSet::new();
        loop {
            if !seen.insert(cur) {
                return Err(Error::Invalid("cycle of variable-only components".into()));
            }
            match &outer.nodes[cur].label {
                Label::Var(_) => {
                    entry[v] = var_node[cur];
                    break;
                }
                Label::Sym(h) => match &h.nodes[h.root].label {
                    Label::Sym(_) => {
                        entry[v] = offsets[cur].as_ref().unwrap()[h.root];
                        break;
                    }
                    Label::Var(x) => cur = outer.nodes[cur].succ[x],
                },
            }
        }
    }
    for v in 0..n {
        if let Label::Sym(h) = &outer.nodes[v].label {
            let map = offsets[v].as_ref().unwrap();
            for w in 0..h.nodes.len() {
                let Some(id) = map[w] else { continue };
                for (d, &t) in &h.nodes[w].succ {
                    let target = match &h.nodes[t].label {
                        Label::Sym(_) => map[t].unwrap(),
                        Label::Var(x) => entry[outer.nodes[v].succ[x]].unwrap(),
                    };
                    g.nodes[id].succ.insert(d.clone(), target);
                }
            }
        }
    }
    g.root = entry[outer.root].unwrap();
    let mu: Vec<Option<usize>> = (0..n)
        .map(|v| match outer.nodes[v].label {
            Label::Sym(_) => entry[v],
            Label::Var(_) => None,
        })
        .collect();
    Ok((g, mu))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lasso() -> Graph<&'static str> {
        let mut g = Graph::new();
        let a = g.add_sym("a");
        g.edge(a, "x", a);
        g
    }

    fn full_binary() -> Graph<&'static str> {
        let mut g = Graph::new();
        let a = g.add_sym("a");
        g.edge(a, "x", a);
        g.edge(a, "y", a);
        g
    }

    #[test]
    fn classify_examples() {
        let mut g = Graph::new();
        let a = g.add_sym("a");
        let b = g.add_sym("b");
        let c = g.add_sym("c");
        g.edge(a, "x", b);
        g.edge(a, "y", c);
        g.edge(b, "x", c);
        assert_eq!(g.classify(), TreeClass::Finite);
        assert_eq!(lasso().classify(), TreeClass::ThinRegular);
        assert_eq!(full_binary().classify(), TreeClass::RegularNonThin);
    }

    #[test]
    fn quotient_collapses_cycles() {
        let mut g = Graph::new();
        let a = g.add_sym("a");
        let b = g.add_sym("a");
        g.edge(a, "x", b);
        g.edge(b, "x", a);
        let q = g.bisim_quotient();
        assert_eq!(q.len(), 1);
        assert!(q.same_tree(&lasso()));

        let mut h = Graph::new();
        let ns: Vec<usize> = (0..3).map(|_| h.add_sym("a")).collect();
        for i in 0..3 {
            h.edge(ns[i], "x", ns[(i + 1) % 3]);
            h.edge(ns[i], "y", ns[(i + 2) % 3]);
        }
        assert_eq!(h.bisim_quotient().len(), 1);
    }

    #[test]
    fn cb_ranks() {
        let mut g = Graph::new();
        let a = g.add_sym("a");
        let b = g.add_sym("b");
        g.edge(a, "x", b);
        assert_eq!(g.cb_rank(), Some(0));
        assert_eq!(lasso().cb_rank(), Some(0));
        assert_eq!(full_binary().cb_rank(), None);
        // cycle A spawning a copy of cycle B at every turn
        let mut h = Graph::new();
        let a = h.add_sym("a");
        let b = h.add_sym("b");
        h.edge(a, "x", a);
        h.edge(a, "y", b);
        h.edge(b, "x", b);
        assert_eq!(h.cb_rank(), Some(1));
        assert_eq!(h.bisim_quotient().cb_rank(), Some(1));
    }

    #[test]
    fn factor_graph_of_lasso() {
        let g = lasso();
        let u: Path = vec![];
        let vs: BTreeMap<String, Path> = [("z".to_string(), vec!["x".to_string(), "x".to_string()])].into();
        let f = g.factor(&u, &vs).unwrap();
        let t = f.to_tree().unwrap();
        assert_eq!(t, Tree::node("a", [("x", Tree::node("a", [("x", Tree::var("z"))]))]));
    }

    #[test]
    fn flattening_graphs() {
        // outer self-loop whose component is a two-step path
        let mut comp: Graph<&str> = Graph::new();
        let r = comp.add_sym("a");
        let s = comp.add_sym("b");
        let z = comp.add_var("z");
        comp.edge(r, "x", s);
        comp.edge(s, "x", z);
        let mut outer = Graph::new();
        let o = outer.add_sym(comp);
        outer.edge(o, "z", o);
        let (g, mu) = flat_graph(&outer).unwrap();
        assert_eq!(mu[0], Some(g.root));
        let mut expected = Graph::new();
        let a = expected.add_sym("a");
        let b = expected.add_sym("b");
        expected.edge(a, "x", b);
        expected.edge(b, "x", a);
        assert!(g.same_tree(&expected));
    }
}
