//! JSON file formats for graphs, algebras, semigroups, splits, labellings,
//! automata, condensations, orders, up-set trees and evaluations.
//!
//! Element references are display names: the element name, qualified as
//! `name@x,y` when the name occurs in several sorts. Graph node labels are
//! element references or `$x` for a variable leaf x. All writers emit keys
//! in sorted order, so output is byte-stable.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{Elem, ElemInfo, FinAlgebra, Renaming};
use crate::automaton::{Automaton, Transition};
use crate::condensation::{Condensation, Condensed};
use crate::error::{Error, Result};
use crate::evaluation::Evaluation;
use crate::games::{Arena, Player, Solution};
use crate::graph::{Graph, Label};
use crate::labelling::Labelling;
use crate::ordered::UpSetTree;
use crate::semigroup::{FinSemigroup, OmegaSemigroup, Split};
use crate::sort::Sort;
use crate::splits::{EdgeGraph, LabelledTree};

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Pretty JSON with a trailing newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

#[derive(Serialize, Deserialize)]
struct NodeEntry {
    id: String,
    label: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    merge: Option<BTreeMap<String, String>>,
}

#[derive(Serialize, Deserialize)]
struct EdgeEntry {
    from: String,
    var: String,
    to: String,
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    nodes: Vec<NodeEntry>,
    edges: Vec<EdgeEntry>,
    root: String,
}

/// A graph whose symbol labels are still raw JSON with an optional merge.
type RawGraph = Graph<(Value, Option<BTreeMap<String, String>>)>;

fn read_raw_graph(text: &str) -> Result<RawGraph> {
    let file: GraphFile = parse(text)?;
    raw_graph_of(file)
}

fn raw_graph_of(file: GraphFile) -> Result<RawGraph> {
    let mut g: RawGraph = Graph::new();
    let mut ids: HashMap<String, usize> = HashMap::new();
    for n in file.nodes {
        if ids.contains_key(&n.id) {
            return Err(Error::Parse(format!("duplicate node id {}", n.id)));
        }
        let id = match n.label.as_str().and_then(|s| s.strip_prefix('$')) {
            Some(x) => g.add_var(x),
            None => g.add_sym((n.label, n.merge)),
        };
        g.names[id] = n.id.clone();
        ids.insert(n.id, id);
    }
    let node = |id: &str| ids.get(id).copied().ok_or_else(|| Error::Parse(format!("unknown node {id}")));
    for e in file.edges {
        let (from, to) = (node(&e.from)?, node(&e.to)?);
        if g.nodes[from].succ.insert(e.var.clone(), to).is_some() {
            return Err(Error::Parse(format!("two edges {} from {}", e.var, e.from)));
        }
    }
    g.root = node(&file.root)?;
    g.validate()?;
    Ok(g)
}

fn label_str(v: &Value) -> Result<&str> {
    v.as_str().ok_or_else(|| Error::Parse(format!("expected an element reference, found {v}")))
}

/// Reads a graph labelled by elements of `alg`; unqualified labels are
/// looked up in the sort of the node's out-edges.
pub fn read_graph(alg: &FinAlgebra, text: &str) -> Result<Graph<Elem>> {
    let raw = read_raw_graph(text)?;
    let g = resolve_labels(alg, &raw)?;
    alg.check_graph(&g)?;
    Ok(g)
}

fn resolve_labels(alg: &FinAlgebra, raw: &RawGraph) -> Result<Graph<Elem>> {
    raw.try_map(&mut |v, (label, _)| alg.resolve(label_str(label)?, Some(&raw.out_sort(v))))
}

fn write_graph_with(g: &Graph<Value>, extra: impl Fn(usize) -> Option<BTreeMap<String, String>>) -> Value {
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for (v, n) in g.nodes.iter().enumerate() {
        let label = match &n.label {
            Label::Sym(l) => l.clone(),
            Label::Var(x) => Value::String(format!("${x}")),
        };
        nodes.push(serde_json::to_value(NodeEntry { id: g.names[v].clone(), label, merge: extra(v) }).unwrap());
        for (d, &w) in &n.succ {
            edges.push(json!({"from": g.names[v], "var": d, "to": g.names[w]}));
        }
    }
    json!({"nodes": nodes, "edges": edges, "root": g.names[g.root]})
}

/// The graph file of an element-labelled graph.
pub fn graph_json(alg: &FinAlgebra, g: &Graph<Elem>) -> Value {
    write_graph_with(&g.map(&mut |&a| Value::String(alg.display(a))), |_| None)
}

/// Reads a graph whose labels are lists of element references forming
/// upward-closed sets.
pub fn read_upset_graph(alg: &FinAlgebra, text: &str) -> Result<UpSetTree> {
    let raw = read_raw_graph(text)?;
    raw.try_map(&mut |v, (label, _)| {
        let items = label.as_array().ok_or_else(|| Error::Parse(format!("label of {} is not a list", raw.names[v])))?;
        let sort = raw.out_sort(v);
        items.iter().map(|i| alg.resolve(label_str(i)?, Some(&sort))).collect::<Result<BTreeSet<Elem>>>()
    })
}

/// Reads a condensation: a graph whose nodes carry a label and a merge.
/// Nodes without a merge get the identity on their label's variables.
pub fn read_condensation(alg: &FinAlgebra, text: &str) -> Result<Condensation> {
    let raw = read_raw_graph(text)?;
    let s = raw.try_map(&mut |v, (label, merge)| {
        let elem = alg.resolve(label_str(label)?, Some(&raw.out_sort(v)))?;
        let merge = merge.clone().unwrap_or_else(|| alg.sort(elem).iter().map(|x| (x.clone(), x.clone())).collect());
        Ok::<_, Error>(Condensed { merge, elem })
    })?;
    crate::condensation::validate(alg, &s)?;
    Ok(s)
}

pub fn condensation_json(alg: &FinAlgebra, s: &Condensation) -> Value {
    let labels = s.map(&mut |c: &Condensed| Value::String(alg.display(c.elem)));
    write_graph_with(&labels, |v| s.nodes[v].label.sym().map(|c| c.merge.clone()))
}

/// Reads a graph with arbitrary string labels, as used for the shapes of
/// edge-labelled trees.
pub fn read_shape(text: &str) -> Result<Graph<String>> {
    let raw = read_raw_graph(text)?;
    raw.try_map(&mut |_, (label, _)| {
        Ok::<_, Error>(label.as_str().map(String::from).unwrap_or_else(|| label.to_string()))
    })
}

#[derive(Serialize, Deserialize)]
struct ElemEntry {
    id: String,
    sort: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct AlgebraFile {
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    unary: Option<String>,
    #[serde(default)]
    universe: Option<Vec<String>>,
    sorts: Vec<Vec<String>>,
    elements: Vec<ElemEntry>,
    #[serde(default)]
    subst: BTreeMap<String, String>,
    #[serde(default)]
    omega: Option<BTreeMap<String, String>>,
    #[serde(default)]
    merge: Option<BTreeMap<String, String>>,
    #[serde(default)]
    order: Option<BTreeMap<String, Vec<(String, String)>>>,
    #[serde(default)]
    generators: Option<Vec<String>>,
}

/// Reads an algebra. Element ids may repeat a name across sorts; table
/// entries then refer to elements as `name@x,y`. Merge keys have the form
/// `a|x->y,y->y` listing the full renaming of a's variables.
pub fn read_algebra(text: &str) -> Result<FinAlgebra> {
    let f: AlgebraFile = parse(text)?;
    let sorts: Vec<Sort> = f.sorts.iter().map(|s| Sort::of(s.iter().cloned())).collect();
    let elems: Vec<ElemInfo> = f
        .elements
        .iter()
        .map(|e| ElemInfo {
            name: e.id.split_once('@').map_or(e.id.as_str(), |(n, _)| n).to_string(),
            sort: Sort::of(e.sort.iter().cloned()),
        })
        .collect();
    for e in &elems {
        if !sorts.contains(&e.sort) {
            return Err(Error::Parse(format!("element {} has undeclared sort {}", e.name, e.sort)));
        }
    }
    let mut seen = BTreeSet::new();
    for e in &elems {
        if !seen.insert((e.name.clone(), e.sort.clone())) {
            return Err(Error::Parse(format!("element {}@{} declared twice", e.name, e.sort.key())));
        }
    }
    let universe = match &f.universe {
        Some(u) => Sort::of(u.iter().cloned()),
        None => sorts.iter().fold(Sort::empty(), |acc, s| acc.union(s)),
    };
    let unary = f.unary.clone().unwrap_or_else(|| "z".to_string());
    let mut alg = FinAlgebra::with_elements(f.name.as_deref().unwrap_or("algebra"), &unary, universe, sorts, elems);
    for (k, c) in &f.subst {
        let parts: Vec<&str> = k.split('|').collect();
        let [a, x, b] = parts[..] else {
            return Err(Error::Parse(format!("substitution key {k} is not a|x|b")));
        };
        let (a, b, c) = (alg.resolve(a, None)?, alg.resolve(b, None)?, alg.resolve(c, None)?);
        if !alg.sort(a).contains(x) {
            return Err(Error::Parse(format!("{k}: {x} is not a variable of {}", alg.display(a))));
        }
        alg.subst.insert((a, x.to_string(), b), c);
    }
    if let Some(m) = &f.omega {
        let mut table = HashMap::new();
        for (a, b) in m {
            table.insert(alg.resolve(a, Some(&alg.unary_sort()))?, alg.resolve(b, Some(&Sort::empty()))?);
        }
        alg.omega = Some(table);
    }
    if let Some(m) = &f.merge {
        let mut table = HashMap::new();
        for (k, c) in m {
            let (a, ren) = k.split_once('|').ok_or_else(|| Error::Parse(format!("merge key {k} is not a|renaming")))?;
            let a = alg.resolve(a, None)?;
            let mut r: Renaming = Vec::new();
            for pair in ren.split(',').filter(|p| !p.is_empty()) {
                let (x, y) = pair.split_once("->").ok_or_else(|| Error::Parse(format!("bad renaming {pair}")))?;
                r.push((x.trim().to_string(), y.trim().to_string()));
            }
            r.sort();
            table.insert((a, r), alg.resolve(c, None)?);
        }
        alg.merge = Some(table);
    }
    if let Some(o) = &f.order {
        alg.order = Some(order_from_covers(&alg, o)?);
    }
    alg.generators = match &f.generators {
        Some(gs) => gs.iter().map(|g| alg.resolve(g, None)).collect::<Result<_>>()?,
        None => alg.all().collect(),
    };
    Ok(alg)
}

fn order_from_covers(alg: &FinAlgebra, covers: &BTreeMap<String, Vec<(String, String)>>) -> Result<Vec<Vec<bool>>> {
    let mut pairs = Vec::new();
    for (key, list) in covers {
        let sort = Sort::parse_key(key);
        for (a, b) in list {
            pairs.push((alg.resolve(a, Some(&sort))?.idx(), alg.resolve(b, Some(&sort))?.idx()));
        }
    }
    Ok(crate::ordered::Poset::from_covers(alg.len(), &pairs)?.leq)
}

/// Reads an order file {"sort": [["a","b"], …]} of covering pairs a < b.
pub fn read_order(alg: &FinAlgebra, text: &str) -> Result<Vec<Vec<bool>>> {
    let covers: BTreeMap<String, Vec<(String, String)>> = parse(text)?;
    order_from_covers(alg, &covers)
}

pub fn algebra_json(alg: &FinAlgebra) -> Value {
    let d = |e: Elem| alg.display(e);
    let mut subst = BTreeMap::new();
    for ((a, x, b), c) in &alg.subst {
        subst.insert(format!("{}|{}|{}", d(*a), x, d(*b)), d(*c));
    }
    let mut out = json!({
        "name": alg.name,
        "unary": alg.unary,
        "universe": alg.universe.iter().collect::<Vec<_>>(),
        "sorts": alg.sorts.iter().map(|s| s.iter().collect::<Vec<_>>()).collect::<Vec<_>>(),
        "elements": alg.all().map(|e| json!({"id": d(e), "sort": alg.sort(e).iter().collect::<Vec<_>>()})).collect::<Vec<_>>(),
        "subst": subst,
        "generators": alg.generators.iter().map(|&e| d(e)).collect::<Vec<_>>(),
    });
    if let Some(o) = &alg.omega {
        let m: BTreeMap<String, String> = o.iter().map(|(a, b)| (d(*a), d(*b))).collect();
        out["omega"] = json!(m);
    }
    if let Some(m) = &alg.merge {
        let t: BTreeMap<String, String> = m
            .iter()
            .map(|((a, r), c)| {
                let ren: Vec<String> = r.iter().map(|(x, y)| format!("{x}->{y}")).collect();
                (format!("{}|{}", d(*a), ren.join(",")), d(*c))
            })
            .collect();
        out["merge"] = json!(t);
    }
    if alg.order.is_some() {
        out["order"] = json!(crate::ordered::covers(alg));
    }
    out
}

#[derive(Serialize, Deserialize)]
struct SemigroupFile {
    elements: Vec<String>,
    mul: BTreeMap<String, String>,
    #[serde(default)]
    omega_elements: Option<Vec<String>>,
    #[serde(default)]
    omega: Option<BTreeMap<String, String>>,
    #[serde(default)]
    mixed: Option<BTreeMap<String, String>>,
}

fn pair(k: &str) -> Result<(&str, &str)> {
    k.split_once(',').ok_or_else(|| Error::Parse(format!("key {k} is not a,b")))
}

/// Reads a semigroup, and the ω-semigroup when ω and mixed tables are given.
/// S_ω elements default to the values of the ω table in sorted order.
pub fn read_semigroup(text: &str) -> Result<(FinSemigroup, Option<OmegaSemigroup>)> {
    let f: SemigroupFile = parse(text)?;
    let idx: HashMap<&str, usize> = f.elements.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let look = |n: &str| idx.get(n).copied().ok_or_else(|| Error::Parse(format!("unknown element {n}")));
    let n = f.elements.len();
    let mut mul = vec![vec![usize::MAX; n]; n];
    for (k, c) in &f.mul {
        let (a, b) = pair(k)?;
        mul[look(a)?][look(b)?] = look(c)?;
    }
    if mul.iter().flatten().any(|&c| c == usize::MAX) {
        return Err(Error::Parse("multiplication table is not total".into()));
    }
    let s = FinSemigroup::new(f.elements.clone(), mul)?;
    let Some(omega) = &f.omega else { return Ok((s, None)) };
    let names: Vec<String> = match &f.omega_elements {
        Some(ns) => ns.clone(),
        None => omega.values().cloned().collect::<BTreeSet<_>>().into_iter().collect(),
    };
    let widx: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let wlook = |n: &str| widx.get(n).copied().ok_or_else(|| Error::Parse(format!("unknown ω element {n}")));
    let mut om = vec![usize::MAX; n];
    for (a, w) in omega {
        om[look(a)?] = wlook(w)?;
    }
    let mut mixed = vec![vec![usize::MAX; names.len()]; n];
    for (k, c) in f.mixed.as_ref().ok_or_else(|| Error::Parse("ω table without mixed table".into()))? {
        let (a, w) = pair(k)?;
        mixed[look(a)?][wlook(w)?] = wlook(c)?;
    }
    if om.contains(&usize::MAX) || mixed.iter().flatten().any(|&c| c == usize::MAX) {
        return Err(Error::Parse("ω or mixed table is not total".into()));
    }
    let w = OmegaSemigroup::new(s.clone(), names, mixed, om)?;
    Ok((s, Some(w)))
}

pub fn semigroup_json(s: &FinSemigroup, w: Option<&OmegaSemigroup>) -> Value {
    let mut mul = BTreeMap::new();
    for a in 0..s.len() {
        for b in 0..s.len() {
            mul.insert(format!("{},{}", s.names[a], s.names[b]), s.names[s.mul(a, b)].clone());
        }
    }
    let mut out = json!({"elements": s.names, "mul": mul});
    if let Some(w) = w {
        let omega: BTreeMap<String, String> =
            (0..s.len()).map(|a| (s.names[a].clone(), w.omega_names[w.omega[a]].clone())).collect();
        let mut mixed = BTreeMap::new();
        for a in 0..s.len() {
            for (c, cn) in w.omega_names.iter().enumerate() {
                mixed.insert(format!("{},{}", s.names[a], cn), w.omega_names[w.mixed(a, c)].clone());
            }
        }
        out["omega_elements"] = json!(w.omega_names);
        out["omega"] = json!(omega);
        out["mixed"] = json!(mixed);
    }
    out
}

#[derive(Serialize, Deserialize)]
struct SplitFile {
    #[serde(rename = "N")]
    n: usize,
    sigma: BTreeMap<String, usize>,
}

/// Reads a split over the given node names.
pub fn read_split(names: &[String], text: &str) -> Result<Split> {
    let f: SplitFile = parse(text)?;
    let sigma = names
        .iter()
        .map(|n| f.sigma.get(n).copied().ok_or_else(|| Error::Parse(format!("split has no value for {n}"))))
        .collect::<Result<Vec<usize>>>()?;
    Ok(Split { n: f.n, sigma })
}

pub fn split_json(names: &[String], split: &Split) -> Value {
    let sigma: BTreeMap<&String, usize> = names.iter().zip(&split.sigma).map(|(n, &v)| (n, v)).collect();
    json!({"N": split.n, "sigma": sigma})
}

#[derive(Serialize, Deserialize)]
struct EdgeLabellingFile {
    edges: BTreeMap<String, String>,
    #[serde(default)]
    leaves: BTreeMap<String, String>,
}

/// Builds a semigroup-labelled tree from a finite tree shape and an edge
/// labelling {"edges":{"u|x":"s"}} giving the value of the edge from u in
/// direction x. Variable leaves are dropped.
pub fn read_labelled_tree(shape: &Graph<String>, s: &FinSemigroup, text: &str) -> Result<LabelledTree> {
    let f: EdgeLabellingFile = parse(text)?;
    let order = shape.reachable_from(shape.root);
    let keep: Vec<usize> = order.into_iter().filter(|&v| matches!(shape.nodes[v].label, Label::Sym(_))).collect();
    let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut parent = vec![None; keep.len()];
    let mut edge = vec![None; keep.len()];
    for &v in &keep {
        for (d, &w) in &shape.nodes[v].succ {
            let Some(&j) = pos.get(&w) else { continue };
            if parent[j].is_some() || j == 0 {
                return Err(Error::Parse(format!("{} has two parents; the shape must be a tree", shape.names[w])));
            }
            parent[j] = Some(pos[&v]);
            let key = format!("{}|{}", shape.names[v], d);
            let value = f.edges.get(&key).ok_or_else(|| Error::Parse(format!("no edge value for {key}")))?;
            edge[j] = Some(s.find(value).ok_or_else(|| Error::Parse(format!("unknown element {value}")))?);
        }
    }
    LabelledTree::new(parent, edge, keep.iter().map(|&v| shape.names[v].clone()).collect())
}

/// Reads an edge-labelled graph over an ω-semigroup:
/// {"nodes":[{"id","leaf"?}],"edges":[{"from","to","value"}],"root"}, where a
/// leaf names the ω element that ends the branches through it.
pub fn read_edge_graph(w: &OmegaSemigroup, text: &str) -> Result<(EdgeGraph, Vec<String>)> {
    #[derive(Deserialize)]
    struct N {
        id: String,
        #[serde(default)]
        leaf: Option<String>,
    }
    #[derive(Deserialize)]
    struct E {
        from: String,
        to: String,
        value: String,
    }
    #[derive(Deserialize)]
    struct F {
        nodes: Vec<N>,
        edges: Vec<E>,
        root: String,
    }
    let f: F = parse(text)?;
    let idx: HashMap<&str, usize> = f.nodes.iter().enumerate().map(|(i, n)| (n.id.as_str(), i)).collect();
    let look = |n: &str| idx.get(n).copied().ok_or_else(|| Error::Parse(format!("unknown node {n}")));
    let mut succ = vec![Vec::new(); f.nodes.len()];
    for e in &f.edges {
        let v = w.s.find(&e.value).ok_or_else(|| Error::Parse(format!("unknown element {}", e.value)))?;
        succ[look(&e.from)?].push((look(&e.to)?, v));
    }
    let leaf = f
        .nodes
        .iter()
        .map(|n| match &n.leaf {
            Some(c) => w.find_omega(c).map(Some).ok_or_else(|| Error::Parse(format!("unknown ω element {c}"))),
            None => Ok(None),
        })
        .collect::<Result<Vec<_>>>()?;
    let names = f.nodes.iter().map(|n| n.id.clone()).collect();
    Ok((EdgeGraph { succ, root: look(&f.root)?, leaf }, names))
}

/// Reads a labelling {"node":"element"}; values are resolved in the sort of
/// the node's subtree.
pub fn read_labelling(alg: &FinAlgebra, g: &Graph<Elem>, text: &str) -> Result<Labelling> {
    let f: BTreeMap<String, String> = parse(text)?;
    let sorts = g.subtree_sorts();
    let mut lambda = vec![None; g.len()];
    for (node, value) in &f {
        let v = g.names.iter().position(|n| n == node).ok_or_else(|| Error::Parse(format!("unknown node {node}")))?;
        lambda[v] = Some(alg.resolve(value, Some(&sorts[v]))?);
    }
    Ok(lambda)
}

pub fn labelling_json(alg: &FinAlgebra, g: &Graph<Elem>, lambda: &Labelling) -> Value {
    json!(crate::labelling::named(alg, g, lambda))
}

#[derive(Serialize, Deserialize)]
struct TransitionEntry {
    state: String,
    label: String,
    succ: BTreeMap<String, Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct AutomatonFile {
    states: Vec<String>,
    init: String,
    priority: BTreeMap<String, usize>,
    delta: Vec<TransitionEntry>,
}

/// Reads an automaton over the elements of `alg`; a label `$x` reads the
/// variable leaf x.
pub fn read_automaton(alg: &FinAlgebra, text: &str) -> Result<Automaton> {
    let f: AutomatonFile = parse(text)?;
    let idx: HashMap<&str, usize> = f.states.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let look = |n: &str| idx.get(n).copied().ok_or_else(|| Error::Parse(format!("unknown state {n}")));
    let priority = f
        .states
        .iter()
        .map(|q| f.priority.get(q).copied().ok_or_else(|| Error::Parse(format!("no priority for {q}"))))
        .collect::<Result<Vec<_>>>()?;
    let mut delta = Vec::new();
    for t in &f.delta {
        let label = match t.label.strip_prefix('$') {
            Some(x) => Label::Var(x.to_string()),
            None => {
                let sort: Sort = t.succ.keys().cloned().collect();
                Label::Sym(alg.resolve(&t.label, Some(&sort))?)
            }
        };
        let succ = t
            .succ
            .iter()
            .map(|(d, qs)| Ok((d.clone(), qs.iter().map(|q| look(q)).collect::<Result<BTreeSet<usize>>>()?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        delta.push(Transition { state: look(&t.state)?, label, succ });
    }
    let aut = Automaton::new(f.states.clone(), look(&f.init)?, priority, delta)?;
    aut.check_sorts(alg)?;
    Ok(aut)
}

pub fn automaton_json(alg: &FinAlgebra, a: &Automaton) -> Value {
    let delta: Vec<Value> = a
        .delta
        .iter()
        .map(|t| {
            let label = match &t.label {
                Label::Sym(e) => alg.display(*e),
                Label::Var(x) => format!("${x}"),
            };
            let succ: BTreeMap<&String, Vec<&String>> =
                t.succ.iter().map(|(d, qs)| (d, qs.iter().map(|&q| &a.states[q]).collect())).collect();
            json!({"state": a.states[t.state], "label": label, "succ": succ})
        })
        .collect();
    let priority: BTreeMap<&String, usize> = a.states.iter().zip(&a.priority).map(|(q, &p)| (q, p)).collect();
    json!({"states": a.states, "init": a.states[a.init], "priority": priority, "delta": delta})
}

/// An evaluation as nested JSON: an element reference at depth 0, otherwise
/// a graph file whose labels are evaluations.
pub fn evaluation_json(alg: &FinAlgebra, e: &Evaluation) -> Value {
    match e {
        Evaluation::Atom(a) => Value::String(alg.display(*a)),
        Evaluation::Nest(g) => write_graph_with(&g.map(&mut |inner| evaluation_json(alg, inner)), |_| None),
    }
}

pub fn read_evaluation(alg: &FinAlgebra, text: &str) -> Result<Evaluation> {
    let v: Value = parse(text)?;
    evaluation_of(alg, &v, None)
}

fn evaluation_of(alg: &FinAlgebra, v: &Value, sort: Option<&Sort>) -> Result<Evaluation> {
    match v {
        Value::String(s) => Ok(Evaluation::Atom(alg.resolve(s, sort)?)),
        Value::Object(_) => {
            let file: GraphFile = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
            let raw = raw_graph_of(file)?;
            let g = raw.try_map(&mut |n, (label, _)| evaluation_of(alg, label, Some(&raw.out_sort(n))))?;
            Ok(Evaluation::Nest(g))
        }
        _ => Err(Error::Parse(format!("an evaluation is an element or a graph, found {v}"))),
    }
}

#[derive(Serialize, Deserialize)]
struct PositionEntry {
    id: String,
    owner: String,
    priority: usize,
    #[serde(default)]
    succ: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct ArenaFile {
    positions: Vec<PositionEntry>,
}

/// Reads a parity game {"positions":[{"id","owner":"even"|"odd","priority","succ"}]}.
pub fn read_arena(text: &str) -> Result<(Arena, Vec<String>)> {
    let f: ArenaFile = parse(text)?;
    let idx: HashMap<&str, usize> = f.positions.iter().enumerate().map(|(i, p)| (p.id.as_str(), i)).collect();
    let mut a = Arena::new();
    for p in &f.positions {
        let owner = match p.owner.to_lowercase().as_str() {
            "even" => Player::Even,
            "odd" => Player::Odd,
            o => return Err(Error::Parse(format!("owner {o} is neither even nor odd"))),
        };
        a.add(owner, p.priority);
    }
    for (v, p) in f.positions.iter().enumerate() {
        for w in &p.succ {
            a.edge(v, *idx.get(w.as_str()).ok_or_else(|| Error::Parse(format!("unknown position {w}")))?);
        }
    }
    Ok((a, f.positions.into_iter().map(|p| p.id).collect()))
}

pub fn solution_json(names: &[String], sol: &Solution) -> Value {
    let side = |p: Player| if p == Player::Even { "even" } else { "odd" };
    let winner: BTreeMap<&String, &str> = names.iter().zip(&sol.winner).map(|(n, &p)| (n, side(p))).collect();
    let strategy: BTreeMap<&String, &String> =
        names.iter().zip(&sol.strategy).filter_map(|(n, s)| s.map(|w| (n, &names[w]))).collect();
    json!({"winner": winner, "strategy": strategy})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn graph_round_trip() {
        let alg = zoo::min2();
        let text = r#"{"nodes":[{"id":"r","label":"1"},{"id":"l","label":"0"},{"id":"v","label":"$x"}],
            "edges":[{"from":"r","var":"x","to":"v"},{"from":"r","var":"y","to":"l"}],"root":"r"}"#;
        let g = read_graph(&alg, text).unwrap();
        assert_eq!(alg.sort(*g.nodes[0].label.sym().unwrap()), &Sort::of(["x", "y"]));
        let back = read_graph(&alg, &to_text(&graph_json(&alg, &g))).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn bad_graphs_are_rejected() {
        let alg = zoo::min2();
        let missing = r#"{"nodes":[{"id":"r","label":"1"}],"edges":[{"from":"r","var":"x","to":"q"}],"root":"r"}"#;
        assert!(matches!(read_graph(&alg, missing), Err(Error::Parse(_))));
        assert!(matches!(read_graph(&alg, "{"), Err(Error::Parse(_))));
        let unknown = r#"{"nodes":[{"id":"r","label":"7"}],"edges":[],"root":"r"}"#;
        assert!(read_graph(&alg, unknown).is_err());
    }

    #[test]
    fn algebra_round_trip() {
        for alg in [zoo::min2(), zoo::unamb7(), zoo::xor2()] {
            let text = to_text(&algebra_json(&alg));
            let back = read_algebra(&text).unwrap();
            assert_eq!(back.elems, alg.elems);
            assert_eq!(back.subst, alg.subst);
            assert_eq!(back.omega, alg.omega);
            assert_eq!(back.merge, alg.merge);
            assert_eq!(back.order, alg.order);
            assert_eq!(to_text(&algebra_json(&back)), text);
        }
    }

    #[test]
    fn semigroup_round_trip() {
        let w = OmegaSemigroup::min_omega();
        let text = to_text(&semigroup_json(&w.s, Some(&w)));
        let (s, back) = read_semigroup(&text).unwrap();
        assert_eq!(s, w.s);
        assert_eq!(back.unwrap(), w);
    }

    #[test]
    fn automaton_round_trip() {
        let alg = zoo::contains_a();
        let (aut, _) = crate::automaton::witness_family(&alg, "1", "0").unwrap();
        let text = to_text(&automaton_json(&alg, &aut));
        let back = read_automaton(&alg, &text).unwrap();
        assert_eq!(back.delta, aut.delta);
        assert_eq!(back.priority, aut.priority);
    }

    #[test]
    fn evaluation_round_trip() {
        let alg = zoo::min2();
        let g = {
            let mut g = Graph::new();
            let r = g.add_sym(alg.find("1", &Sort::of(["x"])).unwrap());
            let c = g.add_sym(alg.find("0", &Sort::empty()).unwrap());
            g.edge(r, "x", c);
            g
        };
        let e = Evaluation::Nest(g.map(&mut |&a| Evaluation::Atom(a)));
        let back = read_evaluation(&alg, &to_text(&evaluation_json(&alg, &e))).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn arena_file() {
        let text = r#"{"positions":[{"id":"a","owner":"even","priority":2,"succ":["a","b"]},{"id":"b","owner":"odd","priority":1}]}"#;
        let (a, names) = read_arena(text).unwrap();
        let sol = crate::games::solve(&a);
        let out = solution_json(&names, &sol);
        assert_eq!(out["winner"]["a"], "even");
        assert_eq!(out["winner"]["b"], "even");
        // b is a dead end for Odd, so moving there wins at once
        assert_eq!(out["strategy"]["a"], "b");
    }

    #[test]
    fn labelled_tree_from_shape() {
        let s = FinSemigroup::min2();
        let shape = read_shape(
            r#"{"nodes":[{"id":"r","label":"."},{"id":"a","label":"."},{"id":"b","label":"."}],
            "edges":[{"from":"r","var":"x","to":"a"},{"from":"a","var":"x","to":"b"}],"root":"r"}"#,
        )
        .unwrap();
        let t = read_labelled_tree(&shape, &s, r#"{"edges":{"r|x":"1","a|x":"0"}}"#).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.value(&s, 0, 2), s.find("0"));
    }
}
