//! Labellings of graph-presented regular trees: local, weak-finite and
//! weak-thin consistency, enumeration of consistent labellings, unambiguity,
//! and labelling schemes together with their associativity check.
//!
//! Only labellings that are functions of the graph nodes are represented,
//! so every enumeration and uniqueness verdict quantifies over regular
//! labellings of the given presentation.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::algebra::{Arg, Elem, FinAlgebra, TreeProduct};
use crate::error::{Error, Result};
use crate::graph::{flat_graph, Graph, Label, TreeClass};
use crate::sort::Sort;
use crate::splits::{branch_limits, EdgeGraph};

/// One element per graph node; variable and unreachable nodes carry `None`.
pub type Labelling = Vec<Option<Elem>>;

/// Consistency level of a labelling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Level {
    /// Agreement with the product on every finite factor.
    Fin,
    /// Additionally, every branch from a variable-free node has the node's value.
    Thin,
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Level> {
        match s {
            "fin" => Ok(Level::Fin),
            "thin" => Ok(Level::Thin),
            _ => Err(Error::BadParams(format!("unknown level {s}, expected fin or thin"))),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Fin => "fin",
            Level::Thin => "thin",
        })
    }
}

/// Why a labelling fails a consistency check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LabellingViolation {
    /// A labelled node has no value.
    Missing { node: String },
    /// The value's sort differs from the variables of the node's subtree.
    Sort { node: String, expected: Sort, got: Sort },
    /// The node's label applied to its successors' values gives another value.
    Local { node: String, expected: Elem, got: Elem },
    /// A finite factor below the node evaluates to another value.
    Factor { node: String, values: Vec<Elem> },
    /// The branches from the node have values other than the node's value.
    Branch { node: String, limits: Vec<Elem> },
}

impl LabellingViolation {
    pub fn describe(&self, alg: &FinAlgebra) -> String {
        match self {
            LabellingViolation::Missing { node } => format!("{node} has no value"),
            LabellingViolation::Sort { node, expected, got } => {
                format!("{node} has a value of sort {got}, expected {expected}")
            }
            LabellingViolation::Local { node, expected, got } => {
                format!("{node} is labelled {} but its successors give {}", alg.display(*got), alg.display(*expected))
            }
            LabellingViolation::Factor { node, values } => {
                let vs: Vec<String> = values.iter().map(|&e| alg.display(e)).collect();
                format!("finite factors at {node} evaluate to {}", vs.join(", "))
            }
            LabellingViolation::Branch { node, limits } => {
                let vs: Vec<String> = limits.iter().map(|&e| alg.display(e)).collect();
                format!("branches from {node} have values {{{}}}", vs.join(", "))
            }
        }
    }
}

fn sym_nodes(g: &Graph<Elem>) -> Vec<usize> {
    g.reachable_from(g.root).into_iter().filter(|&v| matches!(g.nodes[v].label, Label::Sym(_))).collect()
}

fn label_of(g: &Graph<Elem>, v: usize) -> Elem {
    match &g.nodes[v].label {
        Label::Sym(a) => *a,
        Label::Var(_) => unreachable!("variable nodes carry no label"),
    }
}

/// Checks that every reachable labelled node has a value of the right sort.
pub fn check_sorts(alg: &FinAlgebra, g: &Graph<Elem>, lambda: &Labelling) -> Option<LabellingViolation> {
    let sorts = g.subtree_sorts();
    for v in sym_nodes(g) {
        let node = g.names[v].clone();
        let Some(a) = lambda.get(v).copied().flatten() else {
            return Some(LabellingViolation::Missing { node });
        };
        if alg.sort(a) != &sorts[v] {
            return Some(LabellingViolation::Sort { node, expected: sorts[v].clone(), got: alg.sort(a).clone() });
        }
    }
    None
}

/// λ(v) = t(v)(λ(u₀),…,λ(u_{n−1})) at every reachable labelled node.
pub fn is_locally_consistent(
    alg: &FinAlgebra,
    g: &Graph<Elem>,
    lambda: &Labelling,
) -> Result<Option<LabellingViolation>> {
    alg.check_graph(g)?;
    if let Some(v) = check_sorts(alg, g, lambda) {
        return Ok(Some(v));
    }
    for v in sym_nodes(g) {
        let args = alg.node_args(g, v, lambda)?;
        let expected = alg.apply(label_of(g, v), &args)?;
        let got = lambda[v].unwrap();
        if expected != got {
            return Ok(Some(LabellingViolation::Local { node: g.names[v].clone(), expected, got }));
        }
    }
    Ok(None)
}

/// Checks every finite factor of the unfolding rooted at a labelled node
/// with all cut vertices at depth at most `depth`: the factor with its holes
/// filled by λ must evaluate to the root's value.
pub fn check_finite_factors(
    alg: &FinAlgebra,
    g: &Graph<Elem>,
    lambda: &Labelling,
    depth: usize,
) -> Result<Option<LabellingViolation>> {
    alg.check_graph(g)?;
    if let Some(v) = check_sorts(alg, g, lambda) {
        return Ok(Some(v));
    }
    // vals[d][v]: values of factors at v with cuts at depth ≤ d
    let nodes = sym_nodes(g);
    let mut vals: Vec<BTreeMap<usize, BTreeSet<Elem>>> = Vec::new();
    for d in 0..=depth {
        let mut layer = BTreeMap::new();
        for &v in &nodes {
            let mut options: Vec<(String, Vec<Arg>)> = Vec::new();
            for (dir, &w) in &g.nodes[v].succ {
                let args = match &g.nodes[w].label {
                    Label::Var(x) => vec![Arg::Var(x.clone())],
                    Label::Sym(_) => {
                        let mut s: BTreeSet<Elem> = BTreeSet::new();
                        s.insert(lambda[w].unwrap());
                        if d > 0 {
                            s.extend(vals[d - 1][&w].iter().copied());
                        }
                        s.into_iter().map(Arg::Val).collect()
                    }
                };
                options.push((dir.clone(), args));
            }
            let mut out = BTreeSet::new();
            for args in product(&options) {
                out.insert(alg.apply(label_of(g, v), &args)?);
            }
            layer.insert(v, out);
        }
        vals.push(layer);
    }
    for &v in &nodes {
        let set = &vals[depth][&v];
        if set.len() != 1 || !set.contains(&lambda[v].unwrap()) {
            return Ok(Some(LabellingViolation::Factor {
                node: g.names[v].clone(),
                values: set.iter().copied().collect(),
            }));
        }
    }
    Ok(None)
}

fn product(options: &[(String, Vec<Arg>)]) -> Vec<BTreeMap<String, Arg>> {
    let mut out = vec![BTreeMap::new()];
    for (d, args) in options {
        let mut next = Vec::with_capacity(out.len() * args.len());
        for partial in &out {
            for a in args {
                let mut m = partial.clone();
                m.insert(d.clone(), a.clone());
                next.push(m);
            }
        }
        out = next;
    }
    out
}

/// The λ-decorated edge graph of the variable-free part of `g`: the edge in
/// direction d at v carries t(v) with d left open and every other successor
/// filled by its value; nullary nodes end their branch with their value.
/// Values are indices into the algebra's Wilke algebra.
fn decorated_edges(
    alg: &FinAlgebra,
    g: &Graph<Elem>,
    lambda: &Labelling,
    ones: &[Elem],
    zeros: &[Elem],
) -> Result<EdgeGraph> {
    let one_idx: HashMap<Elem, usize> = ones.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let zero_idx: HashMap<Elem, usize> = zeros.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let sorts = g.subtree_sorts();
    let z = alg.unary.clone();
    let n = g.len();
    let mut succ = vec![Vec::new(); n];
    let mut leaf = vec![None; n];
    for v in sym_nodes(g) {
        if !sorts[v].is_empty() {
            continue;
        }
        let a = label_of(g, v);
        if g.nodes[v].succ.is_empty() {
            leaf[v] = Some(zero_idx[&lambda[v].unwrap()]);
            continue;
        }
        for (d, &w) in &g.nodes[v].succ {
            let mut args = alg.node_args(g, v, lambda)?;
            args.insert(d.clone(), Arg::Var(z.clone()));
            let e = alg.apply(a, &args)?;
            let i = one_idx.get(&e).ok_or_else(|| Error::UnsupportedSort(format!("edge value {}", alg.display(e))))?;
            succ[v].push((w, *i));
        }
    }
    Ok(EdgeGraph { succ, root: g.root, leaf })
}

/// Local consistency, and at level thin also: for every variable-free node
/// u, the set of values of all branches from u is exactly {λ(u)}.
pub fn is_weakly_consistent(
    alg: &FinAlgebra,
    g: &Graph<Elem>,
    lambda: &Labelling,
    level: Level,
) -> Result<Option<LabellingViolation>> {
    if let Some(v) = is_locally_consistent(alg, g, lambda)? {
        return Ok(Some(v));
    }
    if level == Level::Fin {
        return Ok(None);
    }
    branch_violation(alg, g, lambda)
}

fn branch_violation(alg: &FinAlgebra, g: &Graph<Elem>, lambda: &Labelling) -> Result<Option<LabellingViolation>> {
    let (w, ones, zeros) = alg.to_wilke()?;
    let mut eg = decorated_edges(alg, g, lambda, &ones, &zeros)?;
    let sorts = g.subtree_sorts();
    for u in sym_nodes(g) {
        if !sorts[u].is_empty() {
            continue;
        }
        eg.root = u;
        let limits: Vec<Elem> = branch_limits(&w, &eg).into_iter().map(|i| zeros[i]).collect();
        if limits != [lambda[u].unwrap()] {
            return Ok(Some(LabellingViolation::Branch { node: g.names[u].clone(), limits }));
        }
    }
    Ok(None)
}

/// All consistent labellings of `g` at `level`, in lexicographic order of
/// the node values, stopping after `limit` results.
///
/// Candidate sets start as the elements of each node's subtree sort and are
/// narrowed by propagating the local constraints; the remaining choices are
/// completed by backtracking.
pub fn enumerate_consistent(alg: &FinAlgebra, g: &Graph<Elem>, level: Level, limit: usize) -> Result<Vec<Labelling>> {
    alg.check_graph(g)?;
    if level == Level::Thin {
        alg.to_wilke()?;
    }
    let nodes = sym_nodes(g);
    let sorts = g.subtree_sorts();
    let mut domain: BTreeMap<usize, BTreeSet<Elem>> =
        nodes.iter().map(|&v| (v, alg.elems_of(&sorts[v]).into_iter().collect())).collect();
    let mut cache: HashMap<(usize, Vec<Elem>), Option<Elem>> = HashMap::new();
    if !propagate(alg, g, &nodes, &mut domain, &mut cache)? {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut lambda: Labelling = vec![None; g.len()];
    search(alg, g, level, &nodes, &domain, 0, &mut lambda, &mut cache, &mut out, limit)?;
    Ok(out)
}

/// Value of node v's label applied to the successor values `vals` (in
/// direction order, variables skipped), or None where the table is undefined.
fn apply_at(
    alg: &FinAlgebra,
    g: &Graph<Elem>,
    v: usize,
    vals: &[Elem],
    cache: &mut HashMap<(usize, Vec<Elem>), Option<Elem>>,
) -> Result<Option<Elem>> {
    if let Some(r) = cache.get(&(v, vals.to_vec())) {
        return Ok(*r);
    }
    let mut args = BTreeMap::new();
    let mut it = vals.iter();
    for (d, &w) in &g.nodes[v].succ {
        let arg = match &g.nodes[w].label {
            Label::Var(x) => Arg::Var(x.clone()),
            Label::Sym(_) => Arg::Val(*it.next().unwrap()),
        };
        args.insert(d.clone(), arg);
    }
    let r = match alg.apply(label_of(g, v), &args) {
        Ok(e) => Some(e),
        Err(Error::Undefined(_)) => None,
        Err(e) => return Err(e),
    };
    cache.insert((v, vals.to_vec()), r);
    Ok(r)
}

fn sym_succ(g: &Graph<Elem>, v: usize) -> Vec<usize> {
    g.nodes[v].succ.values().copied().filter(|&w| matches!(g.nodes[w].label, Label::Sym(_))).collect()
}

/// Narrows the domains to values supported by some local assignment; false
/// when a domain becomes empty.
fn propagate(
    alg: &FinAlgebra,
    g: &Graph<Elem>,
    nodes: &[usize],
    domain: &mut BTreeMap<usize, BTreeSet<Elem>>,
    cache: &mut HashMap<(usize, Vec<Elem>), Option<Elem>>,
) -> Result<bool> {
    loop {
        let mut changed = false;
        for &v in nodes {
            let succ = sym_succ(g, v);
            let mut own = BTreeSet::new();
            let mut used: Vec<BTreeSet<Elem>> = vec![BTreeSet::new(); succ.len()];
            let lists: Vec<Vec<Elem>> = succ.iter().map(|w| domain[w].iter().copied().collect()).collect();
            for vals in cartesian(&lists) {
                if let Some(r) = apply_at(alg, g, v, &vals, cache)? {
                    if domain[&v].contains(&r) {
                        own.insert(r);
                        for (i, &e) in vals.iter().enumerate() {
                            used[i].insert(e);
                        }
                    }
                }
            }
            if own != domain[&v] {
                domain.insert(v, own);
                changed = true;
            }
            for &w in &succ {
                // a successor reached twice gets the union of its positions
                let keep: BTreeSet<Elem> = succ
                    .iter()
                    .enumerate()
                    .filter(|(_, &w2)| w2 == w)
                    .flat_map(|(j, _)| used[j].iter().copied())
                    .collect();
                let narrowed: BTreeSet<Elem> = domain[&w].intersection(&keep).copied().collect();
                if narrowed != domain[&w] {
                    domain.insert(w, narrowed);
                    changed = true;
                }
            }
            if domain[&v].is_empty() {
                return Ok(false);
            }
        }
        if !changed {
            return Ok(true);
        }
    }
}

fn cartesian(lists: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let mut out = vec![Vec::new()];
    for l in lists {
        let mut next = Vec::with_capacity(out.len() * l.len());
        for p in &out {
            for &e in l {
                let mut q = p.clone();
                q.push(e);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn search(
    alg: &FinAlgebra,
    g: &Graph<Elem>,
    level: Level,
    nodes: &[usize],
    domain: &BTreeMap<usize, BTreeSet<Elem>>,
    i: usize,
    lambda: &mut Labelling,
    cache: &mut HashMap<(usize, Vec<Elem>), Option<Elem>>,
    out: &mut Vec<Labelling>,
    limit: usize,
) -> Result<()> {
    if out.len() >= limit {
        return Ok(());
    }
    if i == nodes.len() {
        if level == Level::Fin || branch_violation(alg, g, lambda)?.is_none() {
            out.push(lambda.clone());
        }
        return Ok(());
    }
    let v = nodes[i];
    for &a in &domain[&v] {
        lambda[v] = Some(a);
        if locally_ok_so_far(alg, g, v, lambda, cache)? {
            search(alg, g, level, nodes, domain, i + 1, lambda, cache, out, limit)?;
        }
    }
    lambda[v] = None;
    Ok(())
}

/// Checks the local constraints of v and its predecessors that are fully
/// assigned after assigning v.
fn locally_ok_so_far(
    alg: &FinAlgebra,
    g: &Graph<Elem>,
    v: usize,
    lambda: &Labelling,
    cache: &mut HashMap<(usize, Vec<Elem>), Option<Elem>>,
) -> Result<bool> {
    let mut check: BTreeSet<usize> = BTreeSet::new();
    check.insert(v);
    for (u, n) in g.nodes.iter().enumerate() {
        if n.succ.values().any(|&w| w == v) && lambda[u].is_some() {
            check.insert(u);
        }
    }
    for u in check {
        let succ = sym_succ(g, u);
        let vals: Option<Vec<Elem>> = succ.iter().map(|&w| lambda[w]).collect();
        let (Some(vals), Some(own)) = (vals, lambda[u]) else { continue };
        if apply_at(alg, g, u, &vals, cache)? != Some(own) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Result of an unambiguity check over a suite of graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unambiguity {
    pub unambiguous: bool,
    /// Number of consistent labellings found per graph (capped at the limit).
    pub counts: Vec<usize>,
    /// Graphs with several consistent labellings, with two of them.
    pub witnesses: Vec<(usize, Labelling, Labelling)>,
}

/// True iff every graph of the suite has at most one consistent labelling
/// at `level` among its regular labellings.
pub fn is_unambiguous(alg: &FinAlgebra, suite: &[Graph<Elem>], level: Level) -> Result<Unambiguity> {
    let mut counts = Vec::new();
    let mut witnesses = Vec::new();
    for (i, g) in suite.iter().enumerate() {
        let ls = enumerate_consistent(alg, g, level, 2)?;
        counts.push(ls.len());
        if ls.len() > 1 {
            witnesses.push((i, ls[0].clone(), ls[1].clone()));
        }
    }
    Ok(Unambiguity { unambiguous: witnesses.is_empty(), counts, witnesses })
}

/// A rule assigning a labelling to every supported graph.
pub trait LabellingScheme {
    fn labelling(&self, g: &Graph<Elem>) -> Result<Labelling>;
}

/// The scheme v ↦ ρ(t|_v) of a product on graphs.
pub struct CanonicalScheme<'a>(pub &'a dyn TreeProduct);

impl LabellingScheme for CanonicalScheme<'_> {
    fn labelling(&self, g: &Graph<Elem>) -> Result<Labelling> {
        let mut lambda = vec![None; g.len()];
        for v in sym_nodes(g) {
            let (sub, _) = g.rooted_at(v);
            lambda[v] = Some(self.0.value(&sub)?);
        }
        Ok(lambda)
    }
}

/// The scheme σ_k of a maximum algebra: ĥπ on thin subtrees, otherwise the
/// maximum of k and every label of the subtree.
pub struct MaxScheme<'a> {
    pub alg: &'a FinAlgebra,
    pub k: usize,
}

impl LabellingScheme for MaxScheme<'_> {
    fn labelling(&self, g: &Graph<Elem>) -> Result<Labelling> {
        let sorts = g.subtree_sorts();
        let values = value_numbers(self.alg)?;
        let mut lambda = vec![None; g.len()];
        for v in sym_nodes(g) {
            let (sub, _) = g.rooted_at(v);
            lambda[v] = Some(if sub.classify() != TreeClass::RegularNonThin {
                self.alg.hat_pi(&sub)?
            } else {
                let m = sym_nodes(&sub).into_iter().map(|w| values[label_of(&sub, w).idx()]).max().unwrap_or(0);
                let m = m.max(self.k);
                self.alg
                    .find(&m.to_string(), &sorts[v])
                    .ok_or_else(|| Error::UnsupportedSort(format!("no value {m} of sort {}", sorts[v])))?
            });
        }
        Ok(lambda)
    }
}

fn value_numbers(alg: &FinAlgebra) -> Result<Vec<usize>> {
    alg.all()
        .map(|e| alg.name(e).parse::<usize>().map_err(|_| Error::BadParams(format!("{} is not a number", alg.name(e)))))
        .collect()
}

/// The product π₊(t) := σ(t)(root) of a labelling scheme.
pub struct SchemeProduct<'a>(pub &'a dyn LabellingScheme);

impl TreeProduct for SchemeProduct<'_> {
    fn value(&self, g: &Graph<Elem>) -> Result<Elem> {
        let lambda = self.0.labelling(g)?;
        lambda.get(g.root).copied().flatten().ok_or_else(|| Error::Invalid("the root carries no value".into()))
    }
}

/// A failure of σ(t) = σ(flat(T)) ∘ μ at an outer node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssociativityViolation {
    pub node: String,
    /// σ(t) at the node.
    pub outer: Elem,
    /// σ(flat(T)) at the start of the node's component.
    pub flat: Elem,
}

/// Checks the associativity square of a scheme on a tree of trees T: with
/// t(v) := σ(T(v))(root), σ(t)(v) must equal σ(flat(T)) at the root of the
/// component of v.
pub fn check_scheme_associative(
    scheme: &dyn LabellingScheme,
    outer: &Graph<Graph<Elem>>,
) -> Result<Option<AssociativityViolation>> {
    let (flat, mu) = flat_graph(outer)?;
    let t = outer.try_map(&mut |v, h: &Graph<Elem>| {
        if !matches!(h.nodes[h.root].label, Label::Sym(_)) {
            return Err(Error::Invalid(format!("the component at {} is a bare variable", outer.names[v])));
        }
        SchemeProduct(scheme).value(h)
    })?;
    let sigma_t = scheme.labelling(&t)?;
    let sigma_flat = scheme.labelling(&flat)?;
    for v in t.reachable_from(t.root) {
        if !matches!(t.nodes[v].label, Label::Sym(_)) {
            continue;
        }
        let a = sigma_t[v].ok_or_else(|| Error::Invalid(format!("no value at {}", t.names[v])))?;
        let w = mu[v].ok_or_else(|| Error::Invalid(format!("no component entry for {}", t.names[v])))?;
        let b = sigma_flat[w].ok_or_else(|| Error::Invalid(format!("no value at {}", flat.names[w])))?;
        if a != b {
            return Ok(Some(AssociativityViolation { node: t.names[v].clone(), outer: a, flat: b }));
        }
    }
    Ok(None)
}

/// Node where σ(t) differs from the scheme of the product π₊ of σ, i.e.
/// from v ↦ σ(t|_v)(root); None when the round trip is the identity on g.
pub fn round_trip_mismatch(scheme: &dyn LabellingScheme, g: &Graph<Elem>) -> Result<Option<String>> {
    let direct = scheme.labelling(g)?;
    let product = SchemeProduct(scheme);
    let back = CanonicalScheme(&product).labelling(g)?;
    Ok(sym_nodes(g).into_iter().find(|&v| direct[v] != back[v]).map(|v| g.names[v].clone()))
}

/// Renders a labelling as node name ↦ element display name.
pub fn named(alg: &FinAlgebra, g: &Graph<Elem>, lambda: &Labelling) -> BTreeMap<String, String> {
    sym_nodes(g).into_iter().filter_map(|v| lambda[v].map(|a| (g.names[v].clone(), alg.name(a).to_string()))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::HatPi;
    use crate::zoo;

    fn elem(alg: &FinAlgebra, name: &str, vars: &[&str]) -> Elem {
        alg.find(name, &Sort::of(vars.iter().copied())).unwrap()
    }

    /// The full binary a-tree with nodes tracking the parity of y-steps.
    fn parity_tree(alg: &FinAlgebra) -> Graph<Elem> {
        let a = elem(alg, "a", &["x", "y"]);
        let mut g = Graph::new();
        let n0 = g.add_sym(a);
        let n1 = g.add_sym(a);
        g.edge(n0, "x", n0);
        g.edge(n0, "y", n1);
        g.edge(n1, "x", n1);
        g.edge(n1, "y", n0);
        g
    }

    fn constant_binary(alg: &FinAlgebra, v: &str) -> Graph<Elem> {
        let mut g = Graph::new();
        let r = g.add_sym(elem(alg, v, &["x", "y"]));
        g.edge(r, "x", r);
        g.edge(r, "y", r);
        g
    }

    fn values(alg: &FinAlgebra, names: &[&str]) -> Labelling {
        names.iter().map(|n| Some(elem(alg, n, &[]))).collect()
    }

    #[test]
    fn canonical_labelling_of_a_finite_tree_is_consistent() {
        let alg = zoo::min2();
        let mut g = Graph::new();
        let r = g.add_sym(elem(&alg, "1", &["x", "y"]));
        let l = g.add_sym(elem(&alg, "0", &[]));
        let m = g.add_sym(elem(&alg, "1", &["x"]));
        let k = g.add_sym(elem(&alg, "1", &[]));
        g.edge(r, "x", l);
        g.edge(r, "y", m);
        g.edge(m, "x", k);
        let hp = HatPi(&alg);
        let lambda = CanonicalScheme(&hp).labelling(&g).unwrap();
        assert_eq!(is_locally_consistent(&alg, &g, &lambda).unwrap(), None);
        assert_eq!(check_finite_factors(&alg, &g, &lambda, 4).unwrap(), None);
    }

    #[test]
    fn unamb7_parity_labellings() {
        let alg = zoo::unamb7();
        let g = parity_tree(&alg);
        let lambda = values(&alg, &["0", "1"]);
        let mu = values(&alg, &["1", "0"]);
        for l in [&lambda, &mu] {
            assert_eq!(is_weakly_consistent(&alg, &g, l, Level::Thin).unwrap(), None);
        }
        // a(u, v) = u, so the constants are locally consistent; their
        // branches fail since b₁^ω = 0
        let flipped = values(&alg, &["1", "1"]);
        assert_eq!(is_locally_consistent(&alg, &g, &flipped).unwrap(), None);
        assert!(matches!(
            is_weakly_consistent(&alg, &g, &flipped, Level::Thin).unwrap(),
            Some(LabellingViolation::Branch { ref node, .. }) if node == "n0"
        ));
        let all = enumerate_consistent(&alg, &g, Level::Thin, 100).unwrap();
        assert_eq!(all, vec![lambda, mu]);
        let report = is_unambiguous(&alg, &[g], Level::Thin).unwrap();
        assert!(!report.unambiguous);
        assert_eq!(report.witnesses.len(), 1);
    }

    #[test]
    fn contains_a_lasso_has_a_unique_labelling() {
        let alg = zoo::contains_a();
        let mut g = Graph::new();
        let r = g.add_sym(elem(&alg, "0", &["x"]));
        let c = g.add_sym(elem(&alg, "0", &["x"]));
        g.edge(r, "x", c);
        g.edge(c, "x", c);
        let all = enumerate_consistent(&alg, &g, Level::Thin, 100).unwrap();
        assert_eq!(all, vec![values(&alg, &["0", "0"])]);
    }

    #[test]
    fn min2_binary_one_tree_labellings() {
        let alg = zoo::min2();
        let g = constant_binary(&alg, "1");
        let fin = enumerate_consistent(&alg, &g, Level::Fin, 100).unwrap();
        assert_eq!(fin, vec![values(&alg, &["0"]), values(&alg, &["1"])]);
        // both survive the branch check too: every branch is 1·1·1⋯ or 0·0·0⋯
        let thin = enumerate_consistent(&alg, &g, Level::Thin, 100).unwrap();
        assert_eq!(thin.len(), 2);
    }

    #[test]
    fn min2_and_thinness_check_differ_on_the_binary_tree() {
        let alg = zoo::min2();
        let g = constant_binary(&alg, "1");
        let full = zoo::Min2Full(&alg);
        let thin = zoo::ThinCheck(&alg);
        let a = CanonicalScheme(&full).labelling(&g).unwrap();
        let b = CanonicalScheme(&thin).labelling(&g).unwrap();
        assert_eq!(alg.name(a[0].unwrap()), "1");
        assert_eq!(alg.name(b[0].unwrap()), "0");
        for l in [&a, &b] {
            assert_eq!(is_weakly_consistent(&alg, &g, l, Level::Thin).unwrap(), None);
        }
    }

    #[test]
    fn max_schemes_differ_on_the_binary_zero_tree() {
        let alg = zoo::maxn(2).unwrap();
        let g = constant_binary(&alg, "0");
        let s0 = MaxScheme { alg: &alg, k: 0 }.labelling(&g).unwrap();
        let s1 = MaxScheme { alg: &alg, k: 1 }.labelling(&g).unwrap();
        assert_eq!(alg.name(s0[0].unwrap()), "0");
        assert_eq!(alg.name(s1[0].unwrap()), "1");
        for l in [&s0, &s1] {
            assert_eq!(is_weakly_consistent(&alg, &g, l, Level::Thin).unwrap(), None);
        }
    }

    #[test]
    fn branch_check_rejects_a_wrong_omega_value() {
        // labelling the 1-loop of MIN2 by 0 is locally fine but 1^ω = 1
        let alg = zoo::min2();
        let mut g = Graph::new();
        let r = g.add_sym(elem(&alg, "1", &["x"]));
        g.edge(r, "x", r);
        let zero = values(&alg, &["0"]);
        assert_eq!(is_weakly_consistent(&alg, &g, &zero, Level::Fin).unwrap(), None);
        assert!(matches!(
            is_weakly_consistent(&alg, &g, &zero, Level::Thin).unwrap(),
            Some(LabellingViolation::Branch { .. })
        ));
    }

    /// Outer tree: a binary 0-loop component whose variables lead to a
    /// component holding a single nullary value.
    fn nested(alg: &FinAlgebra) -> Graph<Graph<Elem>> {
        let mut loop_part = Graph::new();
        let r = loop_part.add_sym(elem(alg, "0", &["x", "y"]));
        let x = loop_part.add_var("x");
        let s = loop_part.add_sym(elem(alg, "0", &["x", "y"]));
        loop_part.edge(r, "x", x);
        loop_part.edge(r, "y", s);
        loop_part.edge(s, "x", s);
        loop_part.edge(s, "y", s);
        let mut leaf = Graph::new();
        leaf.add_sym(elem(alg, "1", &[]));
        let mut outer = Graph::new();
        let a = outer.add_sym(loop_part);
        let b = outer.add_sym(leaf);
        outer.edge(a, "x", b);
        outer
    }

    #[test]
    fn schemes_are_associative() {
        let alg = zoo::maxn(3).unwrap();
        let t = nested(&alg);
        for k in 0..3 {
            let s = MaxScheme { alg: &alg, k };
            assert_eq!(check_scheme_associative(&s, &t).unwrap(), None, "k = {k}");
            let (flat, _) = flat_graph(&t).unwrap();
            assert_eq!(round_trip_mismatch(&s, &flat).unwrap(), None);
        }
        let full = zoo::MaxFull(&alg);
        assert_eq!(check_scheme_associative(&CanonicalScheme(&full), &t).unwrap(), None);
    }

    struct Bumped<'a>(MaxScheme<'a>);

    impl LabellingScheme for Bumped<'_> {
        fn labelling(&self, g: &Graph<Elem>) -> Result<Labelling> {
            let mut l = self.0.labelling(g)?;
            // raise the root value on two-node graphs only
            if g.len() == 2 {
                let a = l[g.root].unwrap();
                let s = self.0.alg.sort(a).clone();
                let top = self.0.alg.elems_of(&s).into_iter().max().unwrap();
                l[g.root] = Some(top);
            }
            Ok(l)
        }
    }

    #[test]
    fn corrupted_scheme_is_not_associative() {
        let alg = zoo::maxn(3).unwrap();
        let t = nested(&alg);
        let bad = Bumped(MaxScheme { alg: &alg, k: 0 });
        assert!(check_scheme_associative(&bad, &t).unwrap().is_some());
    }
}
