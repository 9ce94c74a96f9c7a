//! Additive labellings of finite trees, weak Ramseyan splits on trees, the
//! split-based reconstruction of factor values, and branch-limit sets.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::algebra::{Arg, Elem, FinAlgebra};
use crate::error::{Error, Result};
use crate::graph::{Graph, Label, TreeClass};
use crate::semigroup::{compress, split_bound, verify_word_split, FinSemigroup, OmegaSemigroup, Split, SplitBuilder};
use crate::tree::Path;

/// A finite tree whose edges carry semigroup values: `edge[v]` is the value
/// of the edge entering `v`. Node 0 is the root; parents precede children.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelledTree {
    pub parent: Vec<Option<usize>>,
    pub edge: Vec<Option<usize>>,
    pub names: Vec<String>,
    pub children: Vec<Vec<usize>>,
}

impl LabelledTree {
    /// Builds a tree from parent links and entering-edge values.
    pub fn new(parent: Vec<Option<usize>>, edge: Vec<Option<usize>>, names: Vec<String>) -> Result<LabelledTree> {
        let n = parent.len();
        if n == 0 || parent[0].is_some() || edge.len() != n || names.len() != n {
            return Err(Error::Invalid("labelled tree needs a root at index 0".into()));
        }
        let mut children = vec![Vec::new(); n];
        for v in 1..n {
            match (parent[v], edge[v]) {
                (Some(p), Some(_)) if p < v => children[p].push(v),
                _ => return Err(Error::Invalid(format!("node {} lacks an earlier parent or edge value", names[v]))),
            }
        }
        Ok(LabelledTree { parent, edge, names, children })
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Nodes from the root down to `v`.
    pub fn path_to(&self, v: usize) -> Vec<usize> {
        let mut out = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            out.push(p);
            cur = p;
        }
        out.reverse();
        out
    }

    /// Whether `u` is a strict ancestor of `v`.
    pub fn is_ancestor(&self, u: usize, v: usize) -> bool {
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            if p == u {
                return true;
            }
            cur = p;
        }
        false
    }

    /// λ(u,v): the product of the edge values strictly after `u` up to `v`.
    pub fn value(&self, s: &FinSemigroup, u: usize, v: usize) -> Option<usize> {
        let path = self.path_to(v);
        let i = path.iter().position(|&w| w == u)?;
        let word: Vec<usize> = path[i + 1..].iter().map(|&w| self.edge[w].unwrap()).collect();
        s.product(&word)
    }

    /// All pairs (u, v) with u a strict ancestor of v.
    pub fn ancestor_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for v in 0..self.len() {
            let path = self.path_to(v);
            for &u in &path[..path.len() - 1] {
                out.push((u, v));
            }
        }
        out
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.children[v].is_empty()).collect()
    }
}

/// A violation of the weak Ramseyan condition, by node index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeSplitViolation {
    pub x: usize,
    pub y: usize,
    pub x2: usize,
    pub y2: usize,
}

/// Checks the weak Ramseyan condition for all quadruples x ⊏ y, x' ⊏ y'
/// with y ⊑ y' or y' ⊑ y. Such quadruples lie on one root path, so checking
/// every root-to-leaf word suffices.
pub fn verify_tree_split(s: &FinSemigroup, t: &LabelledTree, sigma: &[usize]) -> Option<TreeSplitViolation> {
    if sigma.len() != t.len() {
        return Some(TreeSplitViolation { x: 0, y: 0, x2: 0, y2: 0 });
    }
    for leaf in t.leaves() {
        let path = t.path_to(leaf);
        let word: Vec<usize> = path.iter().map(|&v| t.edge[v].unwrap_or(0)).collect();
        let sig: Vec<usize> = path.iter().map(|&v| sigma[v]).collect();
        if let Some(w) = verify_word_split(s, &word, &sig) {
            return Some(TreeSplitViolation { x: path[w.x], y: path[w.y], x2: path[w.x2], y2: path[w.y2] });
        }
    }
    None
}

/// A weak Ramseyan split of an additively labelled tree with the root at
/// the top value. Every root path is split left to right by the greedy rule
/// of [`SplitBuilder`], sharing the state of common prefixes; a backtracking
/// search is the fallback when the greedy choice gets stuck.
pub fn tree_split(s: &FinSemigroup, t: &LabelledTree) -> Result<Split> {
    let bound = split_bound(s);
    let mut sigma = vec![0; t.len()];
    sigma[0] = bound - 1;
    let mut stack = vec![(0usize, SplitBuilder::new(s, bound))];
    let mut greedy_ok = true;
    'outer: while let Some((v, b)) = stack.pop() {
        for &c in &t.children[v] {
            let a = t.edge[c].unwrap();
            let Some(j) = b.choose(a) else {
                greedy_ok = false;
                break 'outer;
            };
            let mut next = b.clone();
            next.push(a, j);
            sigma[c] = j;
            stack.push((c, next));
        }
    }
    if greedy_ok {
        let split = compress(&sigma);
        if verify_tree_split(s, t, &split.sigma).is_none() {
            return Ok(split);
        }
    }
    backtrack_tree(s, t, bound).ok_or(Error::SplitNotFound(bound))
}

fn backtrack_tree(s: &FinSemigroup, t: &LabelledTree, bound: usize) -> Option<Split> {
    // nodes in index order; parents come first
    fn go(
        t: &LabelledTree,
        v: usize,
        states: &mut Vec<Option<SplitBuilder<'_>>>,
        sigma: &mut Vec<usize>,
        bound: usize,
    ) -> bool {
        if v == t.len() {
            return true;
        }
        let p = t.parent[v].unwrap();
        let a = t.edge[v].unwrap();
        let parent_state = states[p].clone().unwrap();
        for j in 0..bound {
            if parent_state.admissible(a, j) {
                let mut next = parent_state.clone();
                next.push(a, j);
                states[v] = Some(next);
                sigma[v] = j;
                if go(t, v + 1, states, sigma, bound) {
                    return true;
                }
            }
        }
        states[v] = None;
        false
    }
    let mut states: Vec<Option<SplitBuilder>> = vec![None; t.len()];
    states[0] = Some(SplitBuilder::new(s, bound));
    let mut sigma = vec![0; t.len()];
    sigma[0] = bound - 1;
    if go(t, 1, &mut states, &mut sigma, bound) {
        Some(compress(&sigma))
    } else {
        None
    }
}

/// λ(u,v) recovered from the split and the per-edge values only: with m the
/// largest split value strictly between u and v, w₀ and w₂ the first and
/// last vertices carrying it and w₁ the next one after w₀,
/// λ(u,v) = λ(u,w₀)·λ(w₀,v) if w₀ = w₂ and λ(u,w₀)·λ(w₀,w₁)·λ(w₂,v) otherwise.
pub fn reconstruct(s: &FinSemigroup, t: &LabelledTree, sigma: &[usize], u: usize, v: usize) -> Result<usize> {
    if sigma.len() != t.len() {
        return Err(Error::InvalidSplit("split does not cover the tree".into()));
    }
    if !t.is_ancestor(u, v) {
        return Err(Error::InvalidSplit(format!("{} is not above {}", t.names[u], t.names[v])));
    }
    let path = t.path_to(v);
    let i = path.iter().position(|&w| w == u).unwrap();
    Ok(reconstruct_on(s, t, sigma, &path[i..]))
}

fn reconstruct_on(s: &FinSemigroup, t: &LabelledTree, sigma: &[usize], path: &[usize]) -> usize {
    let last = path.len() - 1;
    if last == 1 {
        return t.edge[path[1]].unwrap();
    }
    let m = path[1..last].iter().map(|&w| sigma[w]).max().unwrap();
    let w0 = (1..last).find(|&i| sigma[path[i]] == m).unwrap();
    let w2 = (1..last).rev().find(|&i| sigma[path[i]] == m).unwrap();
    let left = reconstruct_on(s, t, sigma, &path[..=w0]);
    if w0 == w2 {
        let right = reconstruct_on(s, t, sigma, &path[w0..]);
        s.mul(left, right)
    } else {
        let w1 = (w0 + 1..=w2).find(|&i| sigma[path[i]] == m).unwrap();
        let mid = reconstruct_on(s, t, sigma, &path[w0..=w1]);
        let right = reconstruct_on(s, t, sigma, &path[w2..]);
        s.mul(s.mul(left, mid), right)
    }
}

/// The canonical labelling of a variable-free thin graph's unfolding to a
/// given depth: vertex paths, the labelled tree of edge values in the
/// semigroup A_{z}, and the unary elements indexing that semigroup.
pub struct CanonicalUnfolding {
    pub paths: Vec<Path>,
    pub nodes: Vec<usize>,
    pub tree: LabelledTree,
    pub semigroup: FinSemigroup,
    pub unary: Vec<Elem>,
}

/// Unfolds `g` to `depth` and labels each edge p → v with λ(p,v) = π(t[p,v)):
/// the label of p with the v-direction left open and every other child
/// evaluated.
pub fn canonical_unfolding(alg: &FinAlgebra, g: &Graph<Elem>, depth: usize) -> Result<CanonicalUnfolding> {
    let values = alg.hat_pi_values(g)?;
    let (semigroup, unary) = alg.unary_semigroup()?;
    let index: BTreeMap<Elem, usize> = unary.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let mut paths = vec![Vec::new()];
    let mut nodes = vec![g.root];
    let mut parent = vec![None];
    let mut edge = vec![None];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        if paths[i].len() >= depth {
            continue;
        }
        let v = nodes[i];
        let Label::Sym(a) = &g.nodes[v].label else { continue };
        for (d, &w) in &g.nodes[v].succ {
            if matches!(g.nodes[w].label, Label::Var(_)) {
                continue;
            }
            let mut args = alg.node_args(g, v, &values)?;
            args.insert(d.clone(), Arg::Var(alg.unary.clone()));
            let lam = alg.apply(*a, &args)?;
            let k = *index
                .get(&lam)
                .ok_or_else(|| Error::UnsupportedSort(format!("edge value {} is not unary", alg.display(lam))))?;
            let mut p = paths[i].clone();
            p.push(d.clone());
            paths.push(p);
            nodes.push(w);
            parent.push(Some(i));
            edge.push(Some(k));
            queue.push_back(paths.len() - 1);
        }
    }
    let names = paths.iter().map(|p| if p.is_empty() { "root".to_string() } else { p.join(".") }).collect();
    let tree = LabelledTree::new(parent, edge, names)?;
    Ok(CanonicalUnfolding { paths, nodes, tree, semigroup, unary })
}

/// λ(u,v) = π(t[u,v)) computed directly as the product of the factor graph
/// with the hole at v named by the unary variable.
pub fn canonical_lambda(alg: &FinAlgebra, g: &Graph<Elem>, u: &[String], v: &[String], thin: bool) -> Result<Elem> {
    let class = g.classify();
    if thin && class == TreeClass::RegularNonThin {
        return Err(Error::NotThin);
    }
    if !thin && class != TreeClass::Finite {
        return Err(Error::Invalid("finite mode needs an acyclic graph".into()));
    }
    let vs: BTreeMap<String, Path> = [(alg.unary.clone(), v.to_vec())].into();
    let f = g.factor(u, &vs)?;
    alg.hat_pi(&f)
}

/// A graph whose edges carry S₁ values, with S_ω values at dead ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeGraph {
    pub succ: Vec<Vec<(usize, usize)>>,
    pub root: usize,
    /// Value of a dead end, ending its finite branch.
    pub leaf: Vec<Option<usize>>,
}

impl EdgeGraph {
    /// Values of nonempty paths from `from`, per end node.
    fn path_values(&self, s: &FinSemigroup, from: usize) -> Vec<BTreeSet<usize>> {
        let n = self.succ.len();
        let mut seen: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        let mut queue = VecDeque::new();
        for &(w, a) in &self.succ[from] {
            if seen[w].insert(a) {
                queue.push_back((w, a));
            }
        }
        while let Some((v, x)) = queue.pop_front() {
            for &(w, a) in &self.succ[v] {
                let y = s.mul(x, a);
                if seen[w].insert(y) {
                    queue.push_back((w, y));
                }
            }
        }
        seen
    }
}

/// The set of values of all branches from the root: x·y^ω for every value x
/// of a path from the root to a node u and every value y of a cycle at u,
/// plus x·leaf(u) for finite branches ending at a dead end u.
pub fn branch_limits(w: &OmegaSemigroup, g: &EdgeGraph) -> BTreeSet<usize> {
    let n = g.succ.len();
    let mut reach: Vec<BTreeSet<Option<usize>>> = vec![BTreeSet::new(); n];
    reach[g.root].insert(None);
    for (v, xs) in g.path_values(&w.s, g.root).into_iter().enumerate() {
        reach[v].extend(xs.into_iter().map(Some));
    }
    let mut out = BTreeSet::new();
    for u in 0..n {
        if reach[u].is_empty() {
            continue;
        }
        if g.succ[u].is_empty() {
            if let Some(c) = g.leaf[u] {
                out.extend(reach[u].iter().map(|&x| w.mixed_opt(x, c)));
            }
            continue;
        }
        let loops = &g.path_values(&w.s, u)[u];
        for &y in loops {
            let e = w.omega[y];
            out.extend(reach[u].iter().map(|&x| w.mixed_opt(x, e)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    fn chain(values: &[usize]) -> LabelledTree {
        let n = values.len() + 1;
        let parent = (0..n).map(|i| if i == 0 { None } else { Some(i - 1) }).collect();
        let edge = (0..n).map(|i| if i == 0 { None } else { Some(values[i - 1]) }).collect();
        LabelledTree::new(parent, edge, (0..n).map(|i| format!("v{i}")).collect()).unwrap()
    }

    fn binary(depth: usize, value: impl Fn(usize) -> usize) -> LabelledTree {
        let mut parent = vec![None];
        let mut edge = vec![None];
        let mut frontier = vec![0];
        for _ in 0..depth {
            let mut next = Vec::new();
            for &p in &frontier {
                for _ in 0..2 {
                    let id = parent.len();
                    parent.push(Some(p));
                    edge.push(Some(value(id)));
                    next.push(id);
                }
            }
            frontier = next;
        }
        let n = parent.len();
        LabelledTree::new(parent, edge, (0..n).map(|i| format!("v{i}")).collect()).unwrap()
    }

    #[test]
    fn single_vertex_split() {
        let s = FinSemigroup::min2();
        let t = chain(&[]);
        assert_eq!(tree_split(&s, &t).unwrap(), Split { n: 1, sigma: vec![0] });
    }

    #[test]
    fn idempotent_constant_binary_tree() {
        let s = FinSemigroup::min2();
        let t = binary(3, |_| 1);
        let split = tree_split(&s, &t).unwrap();
        assert_eq!(split.n, 1);
        assert!(split.sigma.iter().all(|&v| v == 0));
    }

    #[test]
    fn mixed_binary_tree() {
        let s = FinSemigroup::min2();
        let t = binary(3, |i| i % 2);
        let split = tree_split(&s, &t).unwrap();
        assert!(split.n <= 5);
        assert_eq!(split.sigma[0], split.n - 1);
        assert_eq!(verify_tree_split(&s, &t, &split.sigma), None);
    }

    #[test]
    fn non_idempotent_constant_split_is_rejected() {
        let s = FinSemigroup::cyclic(2);
        let t = chain(&[1, 1, 1]);
        assert!(verify_tree_split(&s, &t, &[0, 0, 0, 0]).is_some());
        let one_edge = chain(&[1]);
        assert_eq!(verify_tree_split(&s, &one_edge, &[1, 0]), None);
    }

    #[test]
    fn reconstruction_cases() {
        let s = FinSemigroup::cyclic(3);
        let t = chain(&[1, 2, 1, 1, 2, 0, 1]);
        let split = tree_split(&s, &t).unwrap();
        for (u, v) in t.ancestor_pairs() {
            assert_eq!(reconstruct(&s, &t, &split.sigma, u, v).unwrap(), t.value(&s, u, v).unwrap());
        }
        // w0 = w2 on a 4-chain: the interior maximum is unique
        let t4 = chain(&[1, 2, 0]);
        let sigma = [3, 0, 2, 0];
        assert_eq!(reconstruct(&s, &t4, &sigma, 0, 3).unwrap(), t4.value(&s, 0, 3).unwrap());
        assert!(reconstruct(&s, &t4, &sigma, 3, 0).is_err());
    }

    #[test]
    fn canonical_lambda_on_min2_path() {
        // a path of 1s whose off-path children are 0
        let a = zoo::min2();
        let xy = crate::sort::Sort::of(["x", "y"]);
        let one_xy = a.find("1", &xy).unwrap();
        let zero = a.find("0", &crate::sort::Sort::empty()).unwrap();
        let one = a.find("1", &crate::sort::Sort::empty()).unwrap();
        let mut g = Graph::new();
        let r = g.add_sym(one_xy);
        let m = g.add_sym(one_xy);
        let l = g.add_sym(one);
        let o1 = g.add_sym(zero);
        let o2 = g.add_sym(zero);
        g.edge(r, "x", m);
        g.edge(r, "y", o1);
        g.edge(m, "x", l);
        g.edge(m, "y", o2);
        let lam = canonical_lambda(&a, &g, &[], &["x".into(), "x".into()], false).unwrap();
        assert_eq!(a.display(lam), "0@z");
        let cu = canonical_unfolding(&a, &g, 5).unwrap();
        for (u, v) in cu.tree.ancestor_pairs() {
            let direct = canonical_lambda(&a, &g, &cu.paths[u], &cu.paths[v], false).unwrap();
            let additive = cu.unary[cu.tree.value(&cu.semigroup, u, v).unwrap()];
            assert_eq!(direct, additive);
        }
    }

    #[test]
    fn limits_of_lasso_and_two_cycles() {
        let w = OmegaSemigroup::min_omega();
        let lasso = EdgeGraph { succ: vec![vec![(0, 1)]], root: 0, leaf: vec![None] };
        assert_eq!(branch_limits(&w, &lasso), [1].into());
        let two =
            EdgeGraph { succ: vec![vec![(1, 1), (2, 1)], vec![(1, 0)], vec![(2, 1)]], root: 0, leaf: vec![None; 3] };
        assert_eq!(branch_limits(&w, &two), [0, 1].into());
        let finite =
            EdgeGraph { succ: vec![vec![(1, 1), (2, 0)], vec![], vec![]], root: 0, leaf: vec![None, Some(1), Some(1)] };
        assert_eq!(branch_limits(&w, &finite), [0, 1].into());
    }
}
