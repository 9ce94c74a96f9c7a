//! Vertex numberings σ of a tree's unfolding, the σ-parents and the
//! relation ≈_σ they induce, σ-rewirings that redirect edges to
//! ≈_σ-equivalent vertices, and the synthesis of a numbering under which
//! every rewiring keeps the product, from a positional winning strategy of
//! an automaton that checks the product.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::algebra::{Elem, FinAlgebra, TreeProduct};
use crate::automaton::Automaton;
use crate::error::{Error, Result};
use crate::games::{solve, Player};
use crate::graph::Graph;
use crate::semigroup::{FinSemigroup, Split};
use crate::splits::{tree_split, LabelledTree};
use crate::tree::Path;

/// The vertices of a graph's unravelling down to a fixed depth. Parents
/// precede their children.
#[derive(Clone, Debug)]
pub struct Unfolding {
    pub paths: Vec<Path>,
    pub node: Vec<usize>,
    pub parent: Vec<Option<usize>>,
    pub children: Vec<BTreeMap<String, usize>>,
    pub horizon: usize,
    index: HashMap<Path, usize>,
}

impl Unfolding {
    pub fn new<L>(g: &Graph<L>, horizon: usize) -> Unfolding {
        let mut u = Unfolding {
            paths: vec![Vec::new()],
            node: vec![g.root],
            parent: vec![None],
            children: vec![BTreeMap::new()],
            horizon,
            index: HashMap::from([(Vec::new(), 0)]),
        };
        let mut i = 0;
        while i < u.paths.len() {
            if u.paths[i].len() < horizon {
                for (x, &w) in &g.nodes[u.node[i]].succ {
                    let mut p = u.paths[i].clone();
                    p.push(x.clone());
                    let id = u.paths.len();
                    u.index.insert(p.clone(), id);
                    u.paths.push(p);
                    u.node.push(w);
                    u.parent.push(Some(i));
                    u.children.push(BTreeMap::new());
                    u.children[i].insert(x.clone(), id);
                }
            }
            i += 1;
        }
        u
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn index(&self, p: &[String]) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn depth(&self, v: usize) -> usize {
        self.paths[v].len()
    }

    /// Whether `u` is a prefix of `v`, `u = v` included.
    pub fn is_prefix(&self, u: usize, v: usize) -> bool {
        let (a, b) = (&self.paths[u], &self.paths[v]);
        a.len() <= b.len() && b[..a.len()] == a[..]
    }

    pub fn name(&self, v: usize) -> String {
        path_name(&self.paths[v])
    }
}

fn path_name(p: &Path) -> String {
    if p.is_empty() {
        "root".into()
    } else {
        p.join(".")
    }
}

/// The k-th σ-parent: the deepest strict ancestor u of v with σ(u) ≥ k.
pub fn sigma_parent(unf: &Unfolding, sigma: &[usize], v: usize, k: usize) -> Option<usize> {
    let mut cur = unf.parent[v];
    while let Some(u) = cur {
        if sigma[u] >= k {
            return Some(u);
        }
        cur = unf.parent[u];
    }
    None
}

/// p_σ(v), the σ(v)-th σ-parent.
pub fn p_sigma(unf: &Unfolding, sigma: &[usize], v: usize) -> Option<usize> {
    sigma_parent(unf, sigma, v, sigma[v])
}

/// u ≈_σ v: equal σ values and equal σ-parents.
pub fn approx_sigma(unf: &Unfolding, sigma: &[usize], u: usize, v: usize) -> bool {
    sigma[u] == sigma[v] && p_sigma(unf, sigma, u) == p_sigma(unf, sigma, v)
}

/// A rewired graph. Nodes standing for unfolding vertices carry them in
/// `vertex`; nodes below the horizon are copies of the original graph and
/// carry `None`.
#[derive(Clone, Debug)]
pub struct Rewired {
    pub graph: Graph<Elem>,
    pub vertex: Vec<Option<usize>>,
    pub redirects: BTreeMap<(usize, String), usize>,
}

/// Builds the graph that follows the unfolding, except that the x-edge of
/// u leads to `redirects[(u, x)]` where given. Below the horizon the
/// original graph takes over.
pub fn rewire(g: &Graph<Elem>, unf: &Unfolding, redirects: &BTreeMap<(usize, String), usize>) -> Result<Rewired> {
    let mut out: Graph<Elem> = Graph::new();
    let mut vertex = Vec::new();
    for (i, n) in g.nodes.iter().enumerate() {
        let id = out.add(n.label.clone());
        out.names[id] = format!("g:{}", g.names[i]);
        vertex.push(None);
    }
    for (i, n) in g.nodes.iter().enumerate() {
        for (x, &w) in &n.succ {
            out.edge(i, x.clone(), w);
        }
    }
    let mut node_of: HashMap<usize, usize> = HashMap::new();
    let mut queue = vec![0usize];
    let add = |out: &mut Graph<Elem>, vertex: &mut Vec<Option<usize>>, v: usize| -> usize {
        let id = out.add(g.nodes[unf.node[v]].label.clone());
        out.names[id] = unf.name(v);
        vertex.push(Some(v));
        id
    };
    node_of.insert(0, add(&mut out, &mut vertex, 0));
    while let Some(u) = queue.pop() {
        let from = node_of[&u];
        let gn = &g.nodes[unf.node[u]];
        if unf.depth(u) >= unf.horizon {
            for (x, &w) in &gn.succ {
                if redirects.contains_key(&(u, x.clone())) {
                    return Err(Error::Invalid(format!("redirect below the horizon at {}", unf.name(u))));
                }
                out.edge(from, x.clone(), w);
            }
            continue;
        }
        for (x, &child) in &unf.children[u] {
            let target = redirects.get(&(u, x.clone())).copied().unwrap_or(child);
            if target >= unf.len() {
                return Err(Error::Invalid("redirect target out of range".into()));
            }
            let id = match node_of.get(&target) {
                Some(&id) => id,
                None => {
                    let id = add(&mut out, &mut vertex, target);
                    node_of.insert(target, id);
                    queue.push(target);
                    id
                }
            };
            out.edge(from, x.clone(), id);
        }
    }
    out.root = node_of[&0];
    let (trimmed, map) = out.rooted_at(out.root);
    let mut kept = vec![None; trimmed.len()];
    for (old, new) in map.iter().enumerate() {
        if let Some(n) = new {
            kept[*n] = vertex[old];
        }
    }
    Ok(Rewired { graph: trimmed, vertex: kept, redirects: redirects.clone() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RewiringViolation {
    RootMissing,
    NotPrefixClosed(String),
    LabelChanged(String),
    KeptEdgeMoved { from: String, dir: String },
    NotEquivalent { from: String, dir: String, target: String },
    LeavesTheUnfolding { from: String, dir: String },
}

/// Checks the σ-rewiring conditions on the unfolding part of a graph: its
/// vertices form a prefix-closed set containing the root, each keeps its
/// label, edges to vertices of the set are kept, and every edge leads to a
/// vertex ≈_σ-equivalent to the one it replaces.
pub fn check_rewiring(g: &Graph<Elem>, unf: &Unfolding, sigma: &[usize], r: &Rewired) -> Option<RewiringViolation> {
    if r.vertex[r.graph.root] != Some(0) {
        return Some(RewiringViolation::RootMissing);
    }
    let dom: BTreeSet<usize> = r.vertex.iter().flatten().copied().collect();
    for &v in &dom {
        if let Some(p) = unf.parent[v] {
            if !dom.contains(&p) {
                return Some(RewiringViolation::NotPrefixClosed(unf.name(v)));
            }
        }
    }
    for (n, node) in r.graph.nodes.iter().enumerate() {
        let Some(u) = r.vertex[n] else { continue };
        if node.label != g.nodes[unf.node[u]].label {
            return Some(RewiringViolation::LabelChanged(unf.name(u)));
        }
        if unf.depth(u) >= unf.horizon {
            for (x, &w) in &node.succ {
                if r.vertex[w].is_some() {
                    return Some(RewiringViolation::LeavesTheUnfolding { from: unf.name(u), dir: x.clone() });
                }
            }
            continue;
        }
        for (x, &w) in &node.succ {
            let Some(&v) = unf.children[u].get(x) else {
                return Some(RewiringViolation::LeavesTheUnfolding { from: unf.name(u), dir: x.clone() });
            };
            let Some(target) = r.vertex[w] else {
                return Some(RewiringViolation::LeavesTheUnfolding { from: unf.name(u), dir: x.clone() });
            };
            if dom.contains(&v) && target != v {
                return Some(RewiringViolation::KeptEdgeMoved { from: unf.name(u), dir: x.clone() });
            }
            if !approx_sigma(unf, sigma, target, v) {
                return Some(RewiringViolation::NotEquivalent {
                    from: unf.name(u),
                    dir: x.clone(),
                    target: unf.name(target),
                });
            }
        }
    }
    None
}

/// Limits for enumerating rewirings.
#[derive(Clone, Debug, Serialize)]
pub struct RewiringBounds {
    pub max_redirects: usize,
    pub max_rewirings: usize,
}

impl Default for RewiringBounds {
    fn default() -> Self {
        RewiringBounds { max_redirects: 3, max_rewirings: 400 }
    }
}

/// Every single redirection allowed by ≈_σ: (u, x, v') with v' ≠ the
/// x-child of u.
pub fn candidate_redirects(unf: &Unfolding, sigma: &[usize]) -> Vec<(usize, String, usize)> {
    let mut by_class: BTreeMap<(usize, Option<usize>), Vec<usize>> = BTreeMap::new();
    for v in 0..unf.len() {
        by_class.entry((sigma[v], p_sigma(unf, sigma, v))).or_default().push(v);
    }
    let mut out = Vec::new();
    for u in 0..unf.len() {
        for (x, &v) in &unf.children[u] {
            for &w in &by_class[&(sigma[v], p_sigma(unf, sigma, v))] {
                if w != v {
                    out.push((u, x.clone(), w));
                }
            }
        }
    }
    out
}

/// Valid σ-rewirings with up to `max_redirects` redirected edges, in a
/// fixed order (fewer redirections first), at most `max_rewirings` of them.
pub fn enumerate_rewirings(
    g: &Graph<Elem>,
    unf: &Unfolding,
    sigma: &[usize],
    bounds: &RewiringBounds,
) -> Result<Vec<Rewired>> {
    let cands = candidate_redirects(unf, sigma);
    let mut out = Vec::new();
    let mut combo: Vec<usize> = Vec::new();
    fn go(
        g: &Graph<Elem>,
        unf: &Unfolding,
        sigma: &[usize],
        cands: &[(usize, String, usize)],
        size: usize,
        start: usize,
        combo: &mut Vec<usize>,
        out: &mut Vec<Rewired>,
        cap: usize,
    ) -> Result<()> {
        if out.len() >= cap {
            return Ok(());
        }
        if combo.len() == size {
            let redirects: BTreeMap<(usize, String), usize> =
                combo.iter().map(|&i| ((cands[i].0, cands[i].1.clone()), cands[i].2)).collect();
            if redirects.len() < size {
                return Ok(());
            }
            let r = rewire(g, unf, &redirects)?;
            // every redirect must be in effect
            let live: BTreeSet<usize> = r.vertex.iter().flatten().copied().collect();
            if redirects.keys().all(|(u, _)| live.contains(u)) && check_rewiring(g, unf, sigma, &r).is_none() {
                out.push(r);
            }
            return Ok(());
        }
        for i in start..cands.len() {
            combo.push(i);
            go(g, unf, sigma, cands, size, i + 1, combo, out, cap)?;
            combo.pop();
            if out.len() >= cap {
                break;
            }
        }
        Ok(())
    }
    out.push(rewire(g, unf, &BTreeMap::new())?);
    for size in 1..=bounds.max_redirects {
        go(g, unf, sigma, &cands, size, 0, &mut combo, &mut out, bounds.max_rewirings)?;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PathViolation {
    /// p_σ of the endpoint is missing from the path.
    MissingParent { path: Vec<String> },
    /// A vertex comes after one of its descendants (or itself).
    Inverted { path: Vec<String> },
}

/// Checks that every root path of the unfolding part of a rewiring, up to
/// `bound` edges, contains p_σ of its endpoint and never returns to a
/// prefix of a vertex already visited.
pub fn check_paths(unf: &Unfolding, sigma: &[usize], r: &Rewired, bound: usize) -> Option<PathViolation> {
    fn go(
        unf: &Unfolding,
        sigma: &[usize],
        r: &Rewired,
        n: usize,
        path: &mut Vec<usize>,
        bound: usize,
    ) -> Option<PathViolation> {
        let v = r.vertex[n]?;
        let names = |p: &[usize]| p.iter().map(|&w| unf.name(w)).collect::<Vec<_>>();
        if path.iter().any(|&w| unf.is_prefix(v, w)) {
            let mut p = path.clone();
            p.push(v);
            return Some(PathViolation::Inverted { path: names(&p) });
        }
        path.push(v);
        if let Some(p) = p_sigma(unf, sigma, v) {
            if !path.contains(&p) {
                let out = Some(PathViolation::MissingParent { path: names(path) });
                path.pop();
                return out;
            }
        }
        if path.len() <= bound {
            for &w in r.graph.nodes[n].succ.values() {
                if let Some(x) = go(unf, sigma, r, w, path, bound) {
                    path.pop();
                    return Some(x);
                }
            }
        }
        path.pop();
        None
    }
    go(unf, sigma, r, r.graph.root, &mut Vec::new(), bound)
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub redirects: Vec<(String, String, String)>,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PreservationReport {
    pub checked: usize,
    pub preserved: usize,
    pub counterexamples: Vec<Counterexample>,
    pub path_violations: Vec<PathViolation>,
}

impl PreservationReport {
    pub fn ok(&self) -> bool {
        self.counterexamples.is_empty() && self.path_violations.is_empty()
    }
}

/// Compares the product of every rewiring with that of the original tree
/// and checks the path property of each rewiring.
pub fn rewiring_preservation(
    alg: &FinAlgebra,
    g: &Graph<Elem>,
    unf: &Unfolding,
    sigma: &[usize],
    rewirings: &[Rewired],
    rho: &dyn TreeProduct,
    path_bound: usize,
) -> Result<PreservationReport> {
    let expected = rho.value(g)?;
    let mut report =
        PreservationReport { checked: 0, preserved: 0, counterexamples: Vec::new(), path_violations: Vec::new() };
    for r in rewirings {
        report.checked += 1;
        let got = rho.value(&r.graph)?;
        if got == expected {
            report.preserved += 1;
        } else {
            report.counterexamples.push(Counterexample {
                redirects: r.redirects.iter().map(|((u, x), v)| (unf.name(*u), x.clone(), unf.name(*v))).collect(),
                expected: alg.display(expected),
                got: alg.display(got),
            });
        }
        if let Some(p) = check_paths(unf, sigma, r, path_bound) {
            report.path_violations.push(p);
        }
    }
    Ok(report)
}

/// A numbering σ synthesised from an accepting run, with the data it was
/// built from.
#[derive(Clone, Debug)]
pub struct RunSplit {
    pub unfolding: Unfolding,
    /// Automaton state at each vertex along the positional strategy.
    pub states: Vec<usize>,
    /// The semigroup Q×D×Q + ⊥ of run outcomes.
    pub outcomes: FinSemigroup,
    pub tree: LabelledTree,
    /// Weak Ramseyan split of the run outcomes.
    pub chi: Split,
    pub sigma: Vec<usize>,
    pub n: usize,
}

/// The outcome semigroup: triples ⟨p, k, q⟩ composing when the inner
/// states agree, taking the least priority, and ⊥ otherwise.
pub fn outcome_semigroup(states: usize, priorities: &[usize]) -> FinSemigroup {
    let d = priorities.len();
    let size = states * d * states;
    let enc = |p: usize, k: usize, q: usize| (p * d + k) * states + q;
    let mut names = Vec::with_capacity(size + 1);
    for p in 0..states {
        for k in priorities {
            for q in 0..states {
                names.push(format!("{p},{k},{q}"));
            }
        }
    }
    names.push("bot".into());
    let mut mul = vec![vec![size; size + 1]; size + 1];
    for a in 0..size {
        let (p, k, p2) = (a / (d * states), (a / states) % d, a % states);
        for b in 0..size {
            let (q, l, q2) = (b / (d * states), (b / states) % d, b % states);
            if p2 == q {
                mul[a][b] = enc(p, k.min(l), q2);
            }
        }
    }
    FinSemigroup::new(names, mul).expect("outcome table is well-formed")
}

/// Synthesises σ on the unfolding of `g` to `horizon` from a positional
/// winning strategy of the automaton started in `q0`: the run outcomes
/// λ(u,v) = ⟨state at u, least priority between, state at v⟩ are split by a
/// weak Ramseyan split χ, each vertex gets μ(v) = ⟨χ(v), (λ(p^k(v), v))_k,
/// (λ(p^k(p^k(v)), p^k(v)))_k⟩ for k ≥ χ(v), and σ numbers the values of μ
/// in order of χ with the root's value on top.
pub fn synthesise_sigma(aut: &Automaton, q0: usize, g: &Graph<Elem>, horizon: usize) -> Result<RunSplit> {
    if !aut.is_nondeterministic() {
        return Err(Error::Invalid("σ synthesis needs a nondeterministic automaton".into()));
    }
    let game = aut.game(g, &[(g.root, q0)])?;
    let sol = solve(&game.arena);
    if sol.winner[game.automaton_pos[&(g.root, q0)]] != Player::Even {
        return Err(Error::Invalid("the automaton rejects the tree".into()));
    }
    let unf = Unfolding::new(g, horizon);
    let mut states = vec![q0; unf.len()];
    for v in 0..unf.len() {
        if unf.children[v].is_empty() {
            continue;
        }
        let d = game
            .chosen_transition(&sol, unf.node[v], states[v])
            .ok_or_else(|| Error::Invalid(format!("no winning move at {}", unf.name(v))))?;
        for (x, &c) in &unf.children[v] {
            states[c] = *aut.delta[d].succ[x].iter().next().unwrap();
        }
    }
    let prios: Vec<usize> = aut.priorities().into_iter().collect();
    let nq = aut.states.len();
    let outcomes = outcome_semigroup(nq, &prios);
    let pidx = |q: usize| prios.iter().position(|&k| k == aut.priority[q]).unwrap();
    let edge: Vec<Option<usize>> = (0..unf.len())
        .map(|v| {
            unf.parent[v].map(|u| {
                let k = pidx(states[u]).min(pidx(states[v]));
                (states[u] * prios.len() + k) * nq + states[v]
            })
        })
        .collect();
    let tree = LabelledTree::new(unf.parent.clone(), edge, (0..unf.len()).map(|v| unf.name(v)).collect())?;
    let chi = tree_split(&outcomes, &tree)?;
    // λ(u, v) as a triple, with a fixed filler for missing parents
    let filler = (q0, 0, q0);
    let lambda = |u: Option<usize>, v: Option<usize>| -> (usize, usize, usize) {
        match (u, v) {
            (Some(u), Some(v)) => {
                let mut k = aut.priority[states[v]];
                let mut cur = v;
                while cur != u {
                    cur = unf.parent[cur].unwrap();
                    k = k.min(aut.priority[states[cur]]);
                }
                (states[u], k, states[v])
            }
            _ => filler,
        }
    };
    type Mu = (usize, Vec<(usize, usize, usize)>, Vec<(usize, usize, usize)>);
    let mu: Vec<Mu> = (0..unf.len())
        .map(|v| {
            let c = chi.sigma[v];
            let mut first = Vec::new();
            let mut second = Vec::new();
            for k in c..chi.n {
                let pk = sigma_parent(&unf, &chi.sigma, v, k);
                first.push(lambda(pk, Some(v)));
                let ppk = pk.and_then(|p| sigma_parent(&unf, &chi.sigma, p, k));
                second.push(if pk.is_some() { lambda(ppk, pk) } else { filler });
            }
            (c, first, second)
        })
        .collect();
    let root_mu = mu[0].clone();
    let mut values: Vec<&Mu> = mu.iter().collect::<BTreeSet<_>>().into_iter().collect();
    values.sort_by_key(|m| (m.0, **m == root_mu, (*m).clone()));
    let h: BTreeMap<&Mu, usize> = values.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let sigma: Vec<usize> = mu.iter().map(|m| h[m]).collect();
    let n = values.len();
    Ok(RunSplit { unfolding: unf, states, outcomes, tree, chi, sigma, n })
}

/// Checks that u ⊏_χ v ⊏_χ w implies λ(u,v) = λ(v,w) along every root path
/// of the run tree.
pub fn check_block_constancy(rs: &RunSplit) -> bool {
    let t = &rs.tree;
    let chi = &rs.chi.sigma;
    for leaf in t.leaves() {
        let path = t.path_to(leaf);
        for i in 0..path.len() {
            let level = chi[path[i]];
            // positions in the same block as path[i], before anything larger
            let block: Vec<usize> = std::iter::once(i)
                .chain((i + 1..path.len()).take_while(|&j| chi[path[j]] <= level).filter(|&j| chi[path[j]] == level))
                .collect();
            for a in 0..block.len() {
                for b in a + 1..block.len() {
                    for c in b + 1..block.len() {
                        let x = t.value(&rs.outcomes, path[block[a]], path[block[b]]);
                        let y = t.value(&rs.outcomes, path[block[b]], path[block[c]]);
                        if x != y {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// The product presented by an automaton family, as a [`TreeProduct`].
pub struct AutomatonProduct<'a> {
    pub alg: &'a FinAlgebra,
    pub aut: &'a Automaton,
    pub family: &'a BTreeMap<Elem, usize>,
}

impl TreeProduct for AutomatonProduct<'_> {
    fn value(&self, g: &Graph<Elem>) -> Result<Elem> {
        crate::automaton::automaton_product(self.alg, self.family, self.aut, g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::HatPi;
    use crate::automaton::witness_family;
    use crate::sort::Sort;
    use crate::zoo;

    fn chain(n: usize) -> Graph<Elem> {
        let alg = zoo::min2();
        let x = Sort::of(["x"]);
        let mut g = Graph::new();
        let ids: Vec<usize> = (0..n).map(|_| g.add_sym(alg.find("1", &x).unwrap())).collect();
        for i in 0..n - 1 {
            g.edge(ids[i], "x", ids[i + 1]);
        }
        g.edge(ids[n - 1], "x", ids[n - 1]);
        g
    }

    /// Root 1(x, y) with a 1-lasso on the left and a 0 leaf on the right.
    fn lasso_and_zero(alg: &FinAlgebra) -> Graph<Elem> {
        let mut g = Graph::new();
        let r = g.add_sym(alg.find("1", &Sort::of(["x", "y"])).unwrap());
        let a = g.add_sym(alg.find("1", &Sort::of(["x"])).unwrap());
        let l = g.add_sym(alg.find("0", &Sort::empty()).unwrap());
        g.edge(r, "x", a);
        g.edge(a, "x", a);
        g.edge(r, "y", l);
        g
    }

    #[test]
    fn parents_along_a_chain() {
        let unf = Unfolding::new(&chain(4), 3);
        assert_eq!(unf.len(), 4);
        let sigma = [2, 0, 1, 0];
        for k in 0..3 {
            assert_eq!(sigma_parent(&unf, &sigma, 0, k), None);
        }
        assert_eq!(p_sigma(&unf, &sigma, 3), Some(2));
        assert_eq!(p_sigma(&unf, &sigma, 2), Some(0));
        assert_eq!(p_sigma(&unf, &sigma, 1), Some(0));
        assert!(!approx_sigma(&unf, &sigma, 1, 3));
    }

    #[test]
    fn siblings_are_equivalent() {
        let alg = zoo::min2();
        let g = lasso_and_zero(&alg);
        let unf = Unfolding::new(&g, 3);
        let x = unf.index(&["x".to_string()]).unwrap();
        let y = unf.index(&["y".to_string()]).unwrap();
        let mut sigma = vec![0; unf.len()];
        sigma[0] = 1;
        assert!(approx_sigma(&unf, &sigma, x, y));
    }

    #[test]
    fn identity_and_invalid_rewirings() {
        let alg = zoo::min2();
        let g = lasso_and_zero(&alg);
        let unf = Unfolding::new(&g, 3);
        let mut sigma = vec![0; unf.len()];
        sigma[0] = 1;
        let id = rewire(&g, &unf, &BTreeMap::new()).unwrap();
        assert_eq!(check_rewiring(&g, &unf, &sigma, &id), None);
        assert!(id.graph.same_tree(&g));
        let x = unf.index(&["x".to_string()]).unwrap();
        let y = unf.index(&["y".to_string()]).unwrap();
        // redirecting y to the sibling x is allowed here
        let r = rewire(&g, &unf, &[((0, "y".to_string()), x)].into()).unwrap();
        assert_eq!(check_rewiring(&g, &unf, &sigma, &r), None);
        // a target with a different σ value is not
        let mut other = sigma.clone();
        other[y] = 1;
        let bad = check_rewiring(&g, &unf, &other, &r);
        assert!(matches!(bad, Some(RewiringViolation::NotEquivalent { .. })), "{bad:?}");
    }

    #[test]
    fn synthesised_sigma_preserves_the_product() {
        let alg = zoo::min2();
        let g = lasso_and_zero(&alg);
        let (aut, family) = witness_family(&alg, "0", "1").unwrap();
        let value = alg.hat_pi(&g).unwrap();
        assert_eq!(alg.name(value), "0");
        let rs = synthesise_sigma(&aut, family[&value], &g, 6).unwrap();
        assert_eq!(rs.sigma[0], rs.n - 1);
        assert!(check_block_constancy(&rs));
        let rewirings = enumerate_rewirings(&g, &rs.unfolding, &rs.sigma, &RewiringBounds::default()).unwrap();
        assert!(!rewirings.is_empty());
        let report = rewiring_preservation(&alg, &g, &rs.unfolding, &rs.sigma, &rewirings, &HatPi(&alg), 20).unwrap();
        assert!(report.ok(), "{report:?}");
    }

    #[test]
    fn corrupted_sigma_has_a_counterexample() {
        let alg = zoo::min2();
        let g = lasso_and_zero(&alg);
        let unf = Unfolding::new(&g, 6);
        // the root is not on top
        let mut sigma = vec![1; unf.len()];
        sigma[0] = 0;
        let rewirings = enumerate_rewirings(&g, &unf, &sigma, &RewiringBounds::default()).unwrap();
        let report = rewiring_preservation(&alg, &g, &unf, &sigma, &rewirings, &HatPi(&alg), 20).unwrap();
        assert!(!report.counterexamples.is_empty());
    }

    #[test]
    fn outcome_semigroup_is_associative() {
        let s = outcome_semigroup(2, &[0, 1]);
        assert_eq!(s.len(), 9);
        assert_eq!(s.associativity_violation(), None);
    }
}
