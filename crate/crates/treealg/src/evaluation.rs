//! Evaluations: nested factorisations of a tree whose levels are evaluated
//! by a stage product. Also the encoding of uniform-depth evaluations of
//! finite trees by vertex numberings, glueing, and evaluations of thin
//! regular trees along their cycles.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::algebra::{Elem, FinAlgebra, TreeProduct};
use crate::error::{Error, Result};
use crate::graph::{flat_graph, Graph, Label, TreeClass};
use crate::tree::{Path, Tree};

/// An element (depth 0) or a tree of evaluations (one level deeper).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evaluation {
    Atom(Elem),
    Nest(Graph<Evaluation>),
}

fn labels(g: &Graph<Evaluation>) -> impl Iterator<Item = &Evaluation> {
    g.reachable_from(g.root).into_iter().filter_map(move |v| g.nodes[v].label.sym())
}

/// The singleton graph of an element: one vertex with a variable leaf per
/// variable of its sort.
pub fn sing_graph(alg: &FinAlgebra, a: Elem) -> Graph<Elem> {
    let mut g = Graph::new();
    let r = g.add_sym(a);
    for x in alg.sort(a).iter() {
        let v = g.add_var(x.clone());
        g.edge(r, x.clone(), v);
    }
    g
}

impl Evaluation {
    /// Nesting depth: 0 for an element, one more than the deepest label.
    pub fn depth(&self) -> usize {
        match self {
            Evaluation::Atom(_) => 0,
            Evaluation::Nest(g) => 1 + labels(g).map(Evaluation::depth).max().unwrap_or(0),
        }
    }

    /// The depth if every label at every level has the same depth.
    pub fn uniform_depth(&self) -> Option<usize> {
        match self {
            Evaluation::Atom(_) => Some(0),
            Evaluation::Nest(g) => {
                let depths: BTreeSet<Option<usize>> = labels(g).map(Evaluation::uniform_depth).collect();
                match depths.into_iter().collect::<Vec<_>>().as_slice() {
                    [] => Some(1),
                    [Some(d)] => Some(d + 1),
                    _ => None,
                }
            }
        }
    }

    /// The underlying tree, as a graph: the singleton of an element, or the
    /// flattening of the terms of the labels.
    pub fn term(&self, alg: &FinAlgebra) -> Result<Graph<Elem>> {
        match self {
            Evaluation::Atom(a) => Ok(sing_graph(alg, *a)),
            Evaluation::Nest(g) => {
                let inner = g.try_map(&mut |_, e: &Evaluation| e.term(alg))?;
                Ok(flat_graph(&inner)?.0)
            }
        }
    }

    /// The underlying tree of an evaluation of a finite tree.
    pub fn term_tree(&self, alg: &FinAlgebra) -> Result<Tree<Elem>> {
        self.term(alg)?.to_tree().ok_or_else(|| Error::Invalid("the evaluated tree is infinite".into()))
    }

    /// The value: the element itself, or the stage product of the tree of
    /// label values.
    pub fn val(&self, alg: &FinAlgebra, rho: &dyn TreeProduct) -> Result<Elem> {
        match self {
            Evaluation::Atom(a) => Ok(*a),
            Evaluation::Nest(g) => {
                let values = g.try_map(&mut |v, e: &Evaluation| {
                    e.val(alg, rho).map_err(|err| match err {
                        Error::StageNotInDomain(s) => Error::StageNotInDomain(format!("{}/{}", g.names[v], s)),
                        other => other,
                    })
                })?;
                let at = |err: Error| Error::StageNotInDomain(format!("{}: {err}", g.names[g.root]));
                alg.check_graph(&values).map_err(at)?;
                rho.value(&values).map_err(at)
            }
        }
    }

    /// A copy with the vertex names of every level reset to paths, so that
    /// evaluations of finite trees compare by structure.
    pub fn canonical(&self) -> Result<Evaluation> {
        match self {
            Evaluation::Atom(a) => Ok(Evaluation::Atom(*a)),
            Evaluation::Nest(g) => {
                let t = g.to_tree().ok_or_else(|| Error::Invalid("cyclic evaluation level".into()))?;
                let t = t.try_map(&mut |e: &Evaluation| e.canonical())?;
                Ok(Evaluation::Nest(Graph::from_tree(&t)))
            }
        }
    }
}

fn hole_name(pool: &[String], i: usize) -> String {
    pool.get(i).cloned().unwrap_or_else(|| format!("h{i}"))
}

/// Cuts the component rooted at `t` (at absolute position `at`): it extends
/// down to the vertices numbered `top` and to variable leaves, all of which
/// become holes named from `pool` in path order.
fn cut_component(
    t: &Tree<Elem>,
    at: &Path,
    tau: &BTreeMap<Path, usize>,
    top: usize,
    pool: &[String],
    holes: &mut Vec<(String, Path, Tree<Elem>)>,
) -> Tree<Elem> {
    match t {
        Tree::Var(_) => unreachable!("component roots are labelled"),
        Tree::Node(a, ch) => {
            let mut out = BTreeMap::new();
            for (d, c) in ch {
                let mut p = at.clone();
                p.push(d.clone());
                let is_hole = match c {
                    Tree::Var(_) => true,
                    Tree::Node(..) => tau[&p] == top,
                };
                if is_hole {
                    let name = hole_name(pool, holes.len());
                    holes.push((name.clone(), p, c.clone()));
                    out.insert(d.clone(), Tree::Var(name));
                } else {
                    out.insert(d.clone(), cut_component(c, &p, tau, top, pool, holes));
                }
            }
            Tree::Node(*a, out)
        }
    }
}

fn encode(t: &Tree<Elem>, at: &Path, tau: &BTreeMap<Path, usize>, n: usize, pool: &[String]) -> Evaluation {
    if n == 1 {
        return Evaluation::Nest(Graph::from_tree(&t.map(&mut |a: &Elem| Evaluation::Atom(*a))));
    }
    fn outer(t: &Tree<Elem>, at: &Path, tau: &BTreeMap<Path, usize>, n: usize, pool: &[String]) -> Tree<Evaluation> {
        match t {
            Tree::Var(x) => Tree::Var(x.clone()),
            Tree::Node(..) => {
                let mut holes = Vec::new();
                let comp = cut_component(t, at, tau, n - 1, pool, &mut holes);
                let label = encode(&comp, at, tau, n - 1, pool);
                let children = holes.iter().map(|(x, p, sub)| (x.clone(), outer(sub, p, tau, n, pool)));
                Tree::node(label, children)
            }
        }
    }
    Evaluation::Nest(Graph::from_tree(&outer(t, at, tau, n, pool)))
}

/// The evaluation of uniform depth `n` encoded by `tau`, which numbers the
/// labelled vertices of `t` by 0..n with the root at n−1: the vertices
/// numbered n−1 are the roots of the top-level components, and each
/// component is encoded recursively with its root lowered to n−2. Every
/// leaf of a component is a hole; holes are named from `pool` in path order.
pub fn split_to_evaluation(
    t: &Tree<Elem>,
    tau: &BTreeMap<Path, usize>,
    n: usize,
    pool: &[String],
) -> Result<Evaluation> {
    if n == 0 {
        return Err(Error::InvalidSplit("depth must be positive".into()));
    }
    if t.is_var() {
        return Err(Error::Invalid("cannot evaluate a bare variable".into()));
    }
    for p in t.inner_vertices() {
        match tau.get(&p) {
            None => return Err(Error::InvalidSplit(format!("no value at {}", p.join(".")))),
            Some(&k) if k >= n => {
                return Err(Error::InvalidSplit(format!("value {k} at {} exceeds {}", p.join("."), n - 1)))
            }
            _ => {}
        }
    }
    if tau[&Vec::new()] != n - 1 {
        return Err(Error::BadRootValue);
    }
    Ok(encode(t, &Vec::new(), tau, n, pool))
}

fn graft(
    comp: &Tree<Elem>,
    tau: &BTreeMap<Path, usize>,
    subs: &BTreeMap<String, (Tree<Elem>, BTreeMap<Path, usize>)>,
    at: &mut Path,
    out_tau: &mut BTreeMap<Path, usize>,
) -> Result<Tree<Elem>> {
    match comp {
        Tree::Var(x) => {
            let (sub, sub_tau) = subs.get(x).ok_or_else(|| Error::SortMismatch(format!("hole {x} has no child")))?;
            for (p, &k) in sub_tau {
                let mut q = at.clone();
                q.extend(p.iter().cloned());
                out_tau.insert(q, k);
            }
            Ok(sub.clone())
        }
        Tree::Node(a, ch) => {
            out_tau.insert(at.clone(), tau[at]);
            let mut out = BTreeMap::new();
            for (d, c) in ch {
                at.push(d.clone());
                out.insert(d.clone(), graft(c, tau, subs, at, out_tau)?);
                at.pop();
            }
            Ok(Tree::Node(*a, out))
        }
    }
}

fn decode(gamma: &Evaluation, n: usize) -> Result<(Tree<Elem>, BTreeMap<Path, usize>)> {
    let Evaluation::Nest(g) = gamma else {
        return Err(Error::Invalid("expected a tree of evaluations".into()));
    };
    let t = g.to_tree().ok_or_else(|| Error::Invalid("cyclic evaluation level".into()))?;
    if n == 1 {
        let t = t.try_map(&mut |e: &Evaluation| match e {
            Evaluation::Atom(a) => Ok(*a),
            Evaluation::Nest(_) => Err(Error::Invalid("depth is not uniform".into())),
        })?;
        let tau = t.inner_vertices().into_iter().map(|p| (p, 0)).collect();
        return Ok((t, tau));
    }
    fn assemble(t: &Tree<Evaluation>, n: usize) -> Result<(Tree<Elem>, BTreeMap<Path, usize>)> {
        match t {
            Tree::Var(x) => Ok((Tree::Var(x.clone()), BTreeMap::new())),
            Tree::Node(e, ch) => {
                let (comp, mut tau) = decode(e, n - 1)?;
                tau.insert(Vec::new(), n - 1);
                let mut subs = BTreeMap::new();
                for (d, c) in ch {
                    subs.insert(d.clone(), assemble(c, n)?);
                }
                let mut out_tau = BTreeMap::new();
                let tree = graft(&comp, &tau, &subs, &mut Vec::new(), &mut out_tau)?;
                Ok((tree, out_tau))
            }
        }
    }
    assemble(&t, n)
}

/// Inverse of [`split_to_evaluation`]: the evaluated tree, the numbering
/// of its labelled vertices, and the depth.
pub fn evaluation_to_split(gamma: &Evaluation) -> Result<(Tree<Elem>, BTreeMap<Path, usize>, usize)> {
    let n = gamma.uniform_depth().ok_or_else(|| Error::Invalid("depth is not uniform".into()))?;
    if n == 0 {
        return Err(Error::Invalid("an element has no vertex numbering".into()));
    }
    let (t, tau) = decode(gamma, n)?;
    Ok((t, tau, n))
}

/// Splits `g` along `shape`: the part of `g` covered by the labelled
/// vertices of `shape`, and the subtrees of `g` at the variables of `shape`.
fn cut_shape(
    shape: &Tree<Elem>,
    g: &Tree<Evaluation>,
    rest: &mut BTreeMap<String, Tree<Evaluation>>,
) -> Result<Tree<Evaluation>> {
    match (shape, g) {
        (Tree::Var(x), _) => {
            rest.insert(x.clone(), g.clone());
            Ok(Tree::Var(x.clone()))
        }
        (Tree::Node(_, sch), Tree::Node(e, gch)) if sch.keys().eq(gch.keys()) => {
            let mut out = BTreeMap::new();
            for (d, s) in sch {
                out.insert(d.clone(), cut_shape(s, &gch[d], rest)?);
            }
            Ok(Tree::Node(e.clone(), out))
        }
        _ => Err(Error::ValueMismatch("evaluation does not follow the tree of evaluations".into())),
    }
}

fn glue_rec(alg: &FinAlgebra, beta: &Evaluation, gamma: &Tree<Evaluation>) -> Result<Evaluation> {
    match beta {
        Evaluation::Atom(_) => match gamma {
            Tree::Node(g0, ch) if ch.values().all(Tree::is_var) => Ok(g0.clone()),
            _ => Err(Error::ValueMismatch("an element must meet a singleton".into())),
        },
        Evaluation::Nest(b) => {
            let bt = b.to_tree().ok_or_else(|| Error::Invalid("cyclic evaluation level".into()))?;
            fn node(alg: &FinAlgebra, b: &Tree<Evaluation>, g: &Tree<Evaluation>) -> Result<Tree<Evaluation>> {
                match b {
                    Tree::Var(x) => Ok(Tree::Var(x.clone())),
                    Tree::Node(bv, bch) => {
                        let shape = bv.term_tree(alg)?;
                        let mut rest = BTreeMap::new();
                        let gv = cut_shape(&shape, g, &mut rest)?;
                        let label = glue_rec(alg, bv, &gv)?;
                        let mut out = BTreeMap::new();
                        for (d, c) in bch {
                            let sub =
                                rest.get(d).ok_or_else(|| Error::ValueMismatch(format!("no subtree at hole {d}")))?;
                            out.insert(d.clone(), node(alg, c, sub)?);
                        }
                        Ok(Tree::Node(label, out))
                    }
                }
            }
            Ok(Evaluation::Nest(Graph::from_tree(&node(alg, &bt, gamma)?)))
        }
    }
}

/// Glues an evaluation `beta` of the tree of values of `gamma` with the
/// evaluations in `gamma`. The result evaluates the flattening of the terms
/// of `gamma` and has the value of `beta`.
pub fn glue(
    alg: &FinAlgebra,
    rho: &dyn TreeProduct,
    beta: &Evaluation,
    gamma: &Tree<Evaluation>,
) -> Result<Evaluation> {
    let values = gamma.try_map(&mut |e: &Evaluation| e.val(alg, rho))?;
    if beta.term_tree(alg)? != values {
        return Err(Error::ValueMismatch("beta does not evaluate the tree of values".into()));
    }
    glue_rec(alg, beta, gamma)
}

/// An evaluation of a thin regular tree with ĥπ as stage product. A vertex
/// on a cycle is evaluated as the ω-path of copies of one period of the
/// cycle; a period holds the cycle vertices and the finite region hanging
/// off them, with subtrees entering other cycles evaluated recursively. A
/// vertex off the cycles is evaluated as its finite region over such
/// subtrees. A finite tree is its own evaluation.
pub fn build_wilke_evaluation(alg: &FinAlgebra, g: &Graph<Elem>) -> Result<Evaluation> {
    if g.classify() == TreeClass::RegularNonThin {
        return Err(Error::NotThin);
    }
    let g = g.trimmed();
    let mut builder = WilkeBuilder::new(alg, &g);
    if builder.comp_of_cycle[g.root].is_some() {
        builder.cycle(g.root)
    } else {
        Ok(Evaluation::Nest(builder.region(g.root)?))
    }
}

struct WilkeBuilder<'a> {
    alg: &'a FinAlgebra,
    g: &'a Graph<Elem>,
    comp_of_cycle: Vec<Option<usize>>,
    comps: Vec<BTreeSet<usize>>,
    vars_below: Vec<BTreeSet<String>>,
    memo: HashMap<usize, Evaluation>,
}

impl<'a> WilkeBuilder<'a> {
    fn new(alg: &'a FinAlgebra, g: &'a Graph<Elem>) -> WilkeBuilder<'a> {
        let mut comp_of_cycle = vec![None; g.len()];
        let mut comps = Vec::new();
        for comp in g.sccs() {
            let cyclic = comp.len() > 1 || g.nodes[comp[0]].succ.values().any(|&w| w == comp[0]);
            if cyclic {
                for &v in &comp {
                    comp_of_cycle[v] = Some(comps.len());
                }
                comps.push(comp.into_iter().collect());
            }
        }
        let vars_below = g.subtree_sorts().into_iter().map(|s| s.0).collect();
        WilkeBuilder { alg, g, comp_of_cycle, comps, vars_below, memo: HashMap::new() }
    }

    /// The region below `start` up to other cycles. With `hole` set, the
    /// edge back to `start` becomes that variable.
    fn region_with(&mut self, start: usize, own: Option<usize>, hole: Option<&str>) -> Result<Graph<Evaluation>> {
        let g = self.g;
        if let Some(x) = hole {
            if self.vars_below[start].contains(x) {
                return Err(Error::Invalid(format!("variable {x} is needed for the cycle hole")));
            }
        }
        let mut out: Graph<Evaluation> = Graph::new();
        let mut index: HashMap<usize, usize> = HashMap::new();
        let mut vars: BTreeMap<String, usize> = BTreeMap::new();
        let mut stack = vec![start];
        let root = out.add(match &g.nodes[start].label {
            Label::Sym(a) => Label::Sym(Evaluation::Atom(*a)),
            Label::Var(x) => Label::Var(x.clone()),
        });
        out.names[root] = g.names[start].clone();
        index.insert(start, root);
        while let Some(v) = stack.pop() {
            let id = index[&v];
            for (d, &w) in &g.nodes[v].succ {
                let target = if let (Some(h), true) = (hole, w == start) {
                    let x = h.to_string();
                    *vars.entry(x.clone()).or_insert_with(|| out.add_var(x))
                } else if let Label::Var(x) = &g.nodes[w].label {
                    *vars.entry(x.clone()).or_insert_with(|| out.add_var(x.clone()))
                } else if let Some(&t) = index.get(&w) {
                    t
                } else if self.comp_of_cycle[w].is_some() && self.comp_of_cycle[w] != own {
                    let e = self.cycle(w)?;
                    let t = out.add_sym(e);
                    out.names[t] = g.names[w].clone();
                    for x in self.vars_below[w].clone() {
                        let xv = *vars.entry(x.clone()).or_insert_with(|| out.add_var(x.clone()));
                        out.edge(t, x, xv);
                    }
                    index.insert(w, t);
                    t
                } else {
                    let Label::Sym(a) = &g.nodes[w].label else { unreachable!() };
                    let t = out.add_sym(Evaluation::Atom(*a));
                    out.names[t] = g.names[w].clone();
                    index.insert(w, t);
                    stack.push(w);
                    t
                };
                out.edge(id, d.clone(), target);
            }
        }
        Ok(out)
    }

    fn region(&mut self, start: usize) -> Result<Graph<Evaluation>> {
        self.region_with(start, None, None)
    }

    /// The evaluation at a cycle vertex: one node carrying the period,
    /// looping back to itself through the unary variable.
    fn cycle(&mut self, c: usize) -> Result<Evaluation> {
        if let Some(e) = self.memo.get(&c) {
            return Ok(e.clone());
        }
        let z = self.alg.unary.clone();
        let own = self.comp_of_cycle[c];
        debug_assert!(own.is_some_and(|k| self.comps[k].contains(&c)));
        let period = self.region_with(c, own, Some(&z))?;
        let inherited: Vec<String> = self.vars_below[c].iter().cloned().collect();
        let mut omega: Graph<Evaluation> = Graph::new();
        let r = omega.add_sym(Evaluation::Nest(period));
        omega.names[r] = self.g.names[c].clone();
        omega.edge(r, z, r);
        for x in inherited {
            let v = omega.add_var(x.clone());
            omega.edge(r, x, v);
        }
        let e = Evaluation::Nest(omega);
        self.memo.insert(c, e.clone());
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{FinProduct, HatPi};
    use crate::sort::Sort;
    use crate::zoo;

    fn p(s: &str) -> Path {
        s.split('.').filter(|x| !x.is_empty()).map(String::from).collect()
    }

    fn pool() -> Vec<String> {
        vec!["x".into(), "y".into(), "z".into()]
    }

    fn elem(a: &FinAlgebra, name: &str, vars: &[&str]) -> Elem {
        a.find(name, &Sort::of(vars.iter().copied())).unwrap()
    }

    /// a(b(c), d) over MIN2 with the given values.
    fn small_tree(a: &FinAlgebra) -> Tree<Elem> {
        Tree::node(
            elem(a, "1", &["x", "y"]),
            [
                ("x", Tree::node(elem(a, "1", &["x"]), [("x", Tree::leaf(elem(a, "0", &[])))])),
                ("y", Tree::leaf(elem(a, "1", &[]))),
            ],
        )
    }

    #[test]
    fn depth_zero_evaluation() {
        let a = zoo::min2();
        let e = elem(&a, "1", &["x"]);
        let gamma = Evaluation::Atom(e);
        assert_eq!(gamma.term_tree(&a).unwrap(), crate::tree::sing(e, a.sort(e)));
        assert_eq!(gamma.val(&a, &FinProduct(&a)).unwrap(), e);
    }

    #[test]
    fn depth_one_is_the_tree() {
        let a = zoo::min2();
        let t = small_tree(&a);
        let tau = t.inner_vertices().into_iter().map(|v| (v, 0)).collect();
        let gamma = split_to_evaluation(&t, &tau, 1, &pool()).unwrap();
        assert_eq!(gamma.term_tree(&a).unwrap(), t);
        assert_eq!(gamma.val(&a, &FinProduct(&a)).unwrap(), a.product_fin(&t).unwrap());
    }

    #[test]
    fn mixed_numbering_round_trips() {
        let a = zoo::min2();
        let t = small_tree(&a);
        let tau: BTreeMap<Path, usize> = [(p(""), 2), (p("x"), 1), (p("x.x"), 2), (p("y"), 0)].into();
        let gamma = split_to_evaluation(&t, &tau, 3, &pool()).unwrap();
        assert_eq!(gamma.uniform_depth(), Some(3));
        let (t2, tau2, n) = evaluation_to_split(&gamma).unwrap();
        assert_eq!((t2, tau2, n), (t.clone(), tau, 3));
        assert_eq!(gamma.term_tree(&a).unwrap(), t);
        assert_eq!(gamma.val(&a, &FinProduct(&a)).unwrap(), a.product_fin(&t).unwrap());
    }

    #[test]
    fn root_must_be_top() {
        let a = zoo::min2();
        let t = small_tree(&a);
        let tau: BTreeMap<Path, usize> = t.inner_vertices().into_iter().map(|v| (v, 0)).collect();
        assert_eq!(split_to_evaluation(&t, &tau, 2, &pool()), Err(Error::BadRootValue));
    }

    #[test]
    fn glue_atom_returns_component() {
        let a = zoo::min2();
        let t = small_tree(&a);
        let tau = t.inner_vertices().into_iter().map(|v| (v, 0)).collect();
        let g0 = split_to_evaluation(&t, &tau, 1, &pool()).unwrap();
        let value = g0.val(&a, &FinProduct(&a)).unwrap();
        let gamma = Tree::leaf(g0.clone());
        let glued = glue(&a, &FinProduct(&a), &Evaluation::Atom(value), &gamma).unwrap();
        assert_eq!(glued, g0);
    }

    #[test]
    fn glue_depth_one_over_min2() {
        let a = zoo::min2();
        let rho = FinProduct(&a);
        // γ: root component a(x) over the components c(y) ... as finite trees
        let inner = |t: Tree<Elem>| {
            let tau = t.inner_vertices().into_iter().map(|v| (v, 0)).collect();
            split_to_evaluation(&t, &tau, 1, &pool()).unwrap()
        };
        let top = inner(Tree::node(elem(&a, "1", &["x"]), [("x", Tree::var("x"))]));
        let bottom = inner(small_tree(&a));
        let gamma = Tree::node(top, [("x", Tree::leaf(bottom))]);
        let values = gamma.try_map(&mut |e: &Evaluation| e.val(&a, &rho)).unwrap();
        let tau = values.inner_vertices().into_iter().map(|v| (v, 0)).collect();
        let beta = split_to_evaluation(&values, &tau, 1, &pool()).unwrap();
        let glued = glue(&a, &rho, &beta, &gamma).unwrap();
        let terms = gamma.try_map(&mut |e: &Evaluation| e.term_tree(&a)).unwrap();
        assert_eq!(glued.term_tree(&a).unwrap(), crate::tree::flat(&terms).unwrap());
        assert_eq!(glued.val(&a, &rho).unwrap(), beta.val(&a, &rho).unwrap());
    }

    #[test]
    fn glue_rejects_wrong_values() {
        let a = zoo::min2();
        let rho = FinProduct(&a);
        let g0 = Evaluation::Atom(elem(&a, "0", &[]));
        let gamma = Tree::leaf(g0);
        assert!(matches!(glue(&a, &rho, &Evaluation::Atom(elem(&a, "1", &[])), &gamma), Err(Error::ValueMismatch(_))));
    }

    #[test]
    fn stage_errors_name_the_component() {
        let a = zoo::min2();
        let mut g = Graph::new();
        let r = g.add_sym(Evaluation::Atom(elem(&a, "1", &["z"])));
        g.edge(r, "z", r);
        let gamma = Evaluation::Nest(g);
        assert!(matches!(gamma.val(&a, &FinProduct(&a)), Err(Error::StageNotInDomain(_))));
    }

    #[test]
    fn lasso_evaluation_matches_hat_pi() {
        let a = zoo::min2_with_omega(&[("1", "0")]);
        let mut g = Graph::new();
        let v = g.add_sym(elem(&a, "1", &["z"]));
        g.edge(v, "z", v);
        let gamma = build_wilke_evaluation(&a, &g).unwrap();
        assert_eq!(gamma.depth(), 2);
        let val = gamma.val(&a, &HatPi(&a)).unwrap();
        assert_eq!(a.name(val), "0");
        assert_eq!(val, a.hat_pi(&g).unwrap());
        assert!(gamma.term(&a).unwrap().same_tree(&g));
    }

    #[test]
    fn nested_cycles_evaluation() {
        // a cycle of a(x,z) nodes whose x-children are 1-lassos
        let a = zoo::min2_with_omega(&[("1", "0")]);
        let mut g = Graph::new();
        let top = g.add_sym(elem(&a, "1", &["x", "z"]));
        let inner = g.add_sym(elem(&a, "1", &["z"]));
        g.edge(top, "z", top);
        g.edge(top, "x", inner);
        g.edge(inner, "z", inner);
        assert_eq!(g.cb_rank(), Some(1));
        let gamma = build_wilke_evaluation(&a, &g).unwrap();
        assert!(gamma.depth() <= 2 * (1 + 1) + 1);
        assert_eq!(gamma.val(&a, &HatPi(&a)).unwrap(), a.hat_pi(&g).unwrap());
        assert!(gamma.term(&a).unwrap().same_tree(&g));
    }

    #[test]
    fn finite_graph_is_its_own_evaluation() {
        let a = zoo::min2();
        let g = Graph::from_tree(&small_tree(&a));
        let gamma = build_wilke_evaluation(&a, &g).unwrap();
        assert_eq!(gamma.depth(), 1);
        assert_eq!(gamma.val(&a, &HatPi(&a)).unwrap(), a.product_fin(&small_tree(&a)).unwrap());
    }

    #[test]
    fn ultimately_periodic_second_stage() {
        // branch of a with subtrees b^n(c), b = 1, c = 0 over MAXN(2)
        let m = zoo::maxn(2).unwrap();
        let b = elem(&m, "1", &["x"]);
        let c = elem(&m, "0", &[]);
        let d: Vec<Elem> = (0..6)
            .map(|n| {
                let mut t = Tree::leaf(c);
                for _ in 0..n {
                    t = Tree::node(b, [("x", t)]);
                }
                m.product_fin(&t).unwrap()
            })
            .collect();
        let names: Vec<&str> = d.iter().map(|&e| m.name(e)).collect();
        assert_eq!(names, ["0", "1", "1", "1", "1", "1"]);
        let (k, l) =
            (0..d.len()).flat_map(|k| (k + 1..d.len()).map(move |l| (k, l))).find(|&(k, l)| d[k] == d[l]).unwrap();
        assert_eq!((k, l), (1, 2));
        // t' = u v^ω with u = a(d0, x), v = a(d1, x)
        let a0 = elem(&m, "0", &["x", "z"]);
        let mut g = Graph::new();
        let u = g.add_sym(a0);
        let v = g.add_sym(a0);
        let l0 = g.add_sym(d[0]);
        let l1 = g.add_sym(d[1]);
        g.edge(u, "x", l0);
        g.edge(u, "z", v);
        g.edge(v, "x", l1);
        g.edge(v, "z", v);
        assert_eq!(m.name(m.hat_pi(&g).unwrap()), "1");
        let gamma = build_wilke_evaluation(&m, &g).unwrap();
        assert_eq!(gamma.val(&m, &HatPi(&m)).unwrap(), m.hat_pi(&g).unwrap());
    }
}
