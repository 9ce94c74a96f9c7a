//! Example algebras: MIN2, CONTAINS_A, MAXN, XOR2, UNAMB7, BTYPE and the
//! graph-product oracles for the full minimum and the thinness check.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::algebra::{Elem, ElemInfo, FinAlgebra, TreeProduct};
use crate::error::{Error, Result};
use crate::graph::{Graph, Label, TreeClass};
use crate::sort::Sort;

/// The variable universe shared by the examples.
pub fn universe() -> Sort {
    Sort::of(["x", "y", "z"])
}

/// An algebra whose every sort holds the same values and whose product of a
/// finite tree folds `op` over its labels. The ω-power of a unary value is
/// `omega(v)` when given; the order is the order of `values`.
fn valued(
    name: &str,
    values: &[&str],
    op: impl Fn(usize, usize) -> usize,
    omega: Option<&dyn Fn(usize) -> usize>,
) -> FinAlgebra {
    let sorts = Sort::all_subsets(&universe());
    let mut elems = Vec::new();
    let mut value_of = Vec::new();
    for s in &sorts {
        for (i, v) in values.iter().enumerate() {
            elems.push(ElemInfo { name: v.to_string(), sort: s.clone() });
            value_of.push(i);
        }
    }
    let mut alg = FinAlgebra::with_elements(name, "z", universe(), sorts, elems);
    let index: HashMap<(Sort, usize), Elem> =
        alg.all().map(|e| ((alg.sort(e).clone(), value_of[e.idx()]), e)).collect();
    alg.fill_subst(|alg, a, x, b| {
        let s = alg.sort(a).without(x).union(alg.sort(b));
        index.get(&(s, op(value_of[a.idx()], value_of[b.idx()]))).copied()
    });
    alg.fill_merge(|alg, a, sigma| {
        let s: Sort = alg.sort(a).iter().map(|v| sigma[v].clone()).collect();
        index.get(&(s, value_of[a.idx()])).copied()
    });
    if let Some(w) = omega {
        let one = alg.unary_sort();
        alg.omega =
            Some(alg.elems_of(&one).into_iter().map(|a| (a, index[&(Sort::empty(), w(value_of[a.idx()]))])).collect());
    }
    let n = alg.len();
    alg.order = Some(
        (0..n)
            .map(|i| (0..n).map(|j| alg.elems[i].sort == alg.elems[j].sort && value_of[i] <= value_of[j]).collect())
            .collect(),
    );
    alg.generators = alg.all().collect();
    alg
}

/// Two values per sort, every product the minimum, ω the identity.
pub fn min2() -> FinAlgebra {
    valued("MIN2", &["0", "1"], |a, b| a.min(b), Some(&|v| v))
}

/// MIN2 with some ω-powers overridden, given as (unary value, nullary value).
pub fn min2_with_omega(overrides: &[(&str, &str)]) -> FinAlgebra {
    let map: BTreeMap<usize, usize> =
        overrides.iter().map(|(a, b)| (a.parse::<usize>().unwrap_or(0), b.parse::<usize>().unwrap_or(0))).collect();
    let f = move |v: usize| map.get(&v).copied().unwrap_or(v);
    valued("MIN2", &["0", "1"], |a, b| a.min(b), Some(&f))
}

/// Two values per sort; the product is 1 iff some label is 1.
pub fn contains_a() -> FinAlgebra {
    valued("CONTAINS_A", &["0", "1"], |a, b| a.max(b), Some(&|v| v))
}

/// Values 0..n per sort with the maximum as product.
pub fn maxn(n: usize) -> Result<FinAlgebra> {
    if n == 0 {
        return Err(Error::BadParams("MAXN needs at least one value".into()));
    }
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut a = valued("MAXN", &refs, |a, b| a.max(b), Some(&|v| v));
    a.name = format!("MAXN({n})");
    Ok(a)
}

/// Sum of labels modulo 2, on finite trees only.
pub fn xor2() -> FinAlgebra {
    valued("XOR2", &["0", "1"], |a, b| a ^ b, None)
}

/// The thin algebra with nullary 0, 1, unary b₀, b₁, c₀, c₁ and binary `a`,
/// whose binary all-`a` tree has several consistent labellings.
pub fn unamb7() -> FinAlgebra {
    let u = universe();
    let binary = Sort::of(["x", "y"]);
    let mut sorts = vec![Sort::empty()];
    let mut elems =
        vec![ElemInfo { name: "0".into(), sort: Sort::empty() }, ElemInfo { name: "1".into(), sort: Sort::empty() }];
    for v in u.iter() {
        let s = Sort::of([v.clone()]);
        sorts.push(s.clone());
        for n in ["b0", "b1", "c0", "c1"] {
            elems.push(ElemInfo { name: n.into(), sort: s.clone() });
        }
    }
    sorts.push(binary.clone());
    elems.push(ElemInfo { name: "a".into(), sort: binary.clone() });
    let mut alg = FinAlgebra::with_elements("UNAMB7", "z", u, sorts, elems);
    // unary elements as (is_c, index)
    let kind = |alg: &FinAlgebra, e: Elem| -> Option<(bool, usize)> {
        let n = alg.name(e);
        if alg.sort(e).len() != 1 {
            return None;
        }
        Some((n.starts_with('c'), n[1..].parse().unwrap()))
    };
    let unary_name = |c: bool, i: usize| format!("{}{}", if c { "c" } else { "b" }, i);
    alg.fill_subst(|alg, a, x, b| {
        let sb = alg.sort(b).clone();
        if alg.name(a) == "a" {
            if !sb.is_empty() {
                return None;
            }
            let i = alg.name(b);
            // a(x,i) = b_i(x), a(i,y) = c_i(y)
            return if x == "y" {
                alg.find(&format!("b{i}"), &Sort::of(["x"]))
            } else {
                alg.find(&format!("c{i}"), &Sort::of(["y"]))
            };
        }
        let (ac, ai) = kind(alg, a)?;
        if sb.is_empty() {
            let j: usize = alg.name(b).parse().unwrap();
            let r = if ac { ai } else { j };
            return alg.find(&r.to_string(), &Sort::empty());
        }
        let (bc, bi) = kind(alg, b)?;
        let name = match (ac, bc) {
            (true, _) => unary_name(true, ai),
            (false, true) => unary_name(true, bi),
            (false, false) => unary_name(false, ai.max(bi)),
        };
        alg.find(&name, &sb)
    });
    alg.fill_merge(|alg, a, sigma| {
        if alg.sort(a).len() != 1 {
            return None;
        }
        let target: Sort = sigma.values().cloned().collect();
        alg.find(alg.name(a), &target)
    });
    let one = alg.unary_sort();
    let mut omega = HashMap::new();
    for e in alg.elems_of(&one) {
        let (c, i) = kind(&alg, e).unwrap();
        let v = if c { i } else { 1 - i };
        omega.insert(e, alg.find(&v.to_string(), &Sort::empty()).unwrap());
    }
    alg.omega = Some(omega);
    alg.generators = alg.all().collect();
    alg
}

/// A branching pattern: a variable hole or a vertex whose children are in
/// directions 0, 1, ….
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pattern {
    Hole(String),
    Node(Vec<Pattern>),
}

impl Pattern {
    pub fn holes(&self) -> BTreeSet<String> {
        match self {
            Pattern::Hole(x) => [x.clone()].into(),
            Pattern::Node(ch) => ch.iter().flat_map(Pattern::holes).collect(),
        }
    }

    fn plug(&self, x: &str, b: &Pattern) -> Pattern {
        match self {
            Pattern::Hole(h) if h == x => b.clone(),
            Pattern::Hole(_) => self.clone(),
            Pattern::Node(ch) => Pattern::Node(ch.iter().map(|c| c.plug(x, b)).collect()),
        }
    }

    /// Removes non-root vertices with a single child.
    fn contract(&self, is_root: bool) -> Pattern {
        match self {
            Pattern::Hole(_) => self.clone(),
            Pattern::Node(ch) if ch.len() == 1 && !is_root => ch[0].contract(false),
            Pattern::Node(ch) => Pattern::Node(ch.iter().map(|c| c.contract(false)).collect()),
        }
    }

    fn rename(&self, sigma: &BTreeMap<String, String>) -> Pattern {
        match self {
            Pattern::Hole(x) => Pattern::Hole(sigma.get(x).cloned().unwrap_or_else(|| x.clone())),
            Pattern::Node(ch) => Pattern::Node(ch.iter().map(|c| c.rename(sigma)).collect()),
        }
    }
}

impl std::fmt::Display for Pattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Pattern::Hole(x) => write!(f, "{x}"),
            Pattern::Node(ch) => {
                write!(f, "[")?;
                for (i, c) in ch.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "]")
            }
        }
    }
}

/// Ordered partitions of `vars` into at least two blocks.
fn ordered_partitions(vars: &[String]) -> Vec<Vec<Vec<String>>> {
    let n = vars.len();
    let mut out = Vec::new();
    for k in 2..=n {
        let total = k.pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let mut blocks = vec![Vec::new(); k];
            for v in vars {
                blocks[c % k].push(v.clone());
                c /= k;
            }
            if blocks.iter().all(|b| !b.is_empty()) {
                out.push(blocks);
            }
        }
    }
    out
}

/// Branching vertices whose holes are exactly `vars`.
fn branchings(vars: &[String]) -> Vec<Pattern> {
    let mut out = Vec::new();
    for blocks in ordered_partitions(vars) {
        let mut partial: Vec<Vec<Pattern>> = vec![Vec::new()];
        for b in &blocks {
            let options = if b.len() == 1 { vec![Pattern::Hole(b[0].clone())] } else { branchings(b) };
            partial = partial
                .into_iter()
                .flat_map(|p| {
                    options.iter().map(move |o| {
                        let mut q = p.clone();
                        q.push(o.clone());
                        q
                    })
                })
                .collect();
        }
        out.extend(partial.into_iter().map(Pattern::Node));
    }
    out
}

/// Branching patterns of linear trees of sort `s` whose leaves are all variables.
pub fn patterns_of(s: &Sort) -> Vec<Pattern> {
    let vars: Vec<String> = s.iter().cloned().collect();
    match vars.len() {
        0 => Vec::new(),
        1 => vec![Pattern::Node(vec![Pattern::Hole(vars[0].clone())])],
        _ => {
            let b = branchings(&vars);
            let mut out = b.clone();
            out.extend(b.into_iter().map(|p| Pattern::Node(vec![p])));
            out
        }
    }
}

/// The algebra of branching types over the variables of `universe`; the
/// first variable serves as the unary one.
pub fn btype(universe: &Sort) -> Result<FinAlgebra> {
    if universe.is_empty() || universe.len() > 3 {
        return Err(Error::BadParams("BTYPE needs one to three variables".into()));
    }
    let sorts = Sort::all_subsets(universe);
    let mut elems = Vec::new();
    let mut pats = Vec::new();
    for s in &sorts {
        for p in patterns_of(s) {
            elems.push(ElemInfo { name: p.to_string(), sort: s.clone() });
            pats.push(p);
        }
    }
    let index: HashMap<Pattern, Elem> = pats.iter().enumerate().map(|(i, p)| (p.clone(), Elem(i as u32))).collect();
    let unary = universe.iter().next().unwrap().clone();
    let mut alg = FinAlgebra::with_elements("BTYPE", &unary, universe.clone(), sorts, elems);
    alg.fill_subst(|alg, a, x, b| {
        if !alg.sort(a).without(x).is_disjoint(alg.sort(b)) {
            return None;
        }
        let p = pats[a.idx()].plug(x, &pats[b.idx()]).contract(true);
        index.get(&p).copied()
    });
    alg.fill_merge(|alg, a, sigma| {
        let targets: BTreeSet<&String> = sigma.values().collect();
        if targets.len() != alg.sort(a).len() {
            return None;
        }
        index.get(&pats[a.idx()].rename(sigma)).copied()
    });
    alg.generators = alg.all().collect();
    Ok(alg)
}

/// Looks up an example algebra by name: MIN2, CONTAINS_A, MAXN(n), XOR2,
/// UNAMB7, BTYPE or BTYPE(x,y).
pub fn by_name(name: &str) -> Result<FinAlgebra> {
    let upper = name.trim().to_uppercase();
    if let Some(rest) = upper.strip_prefix("MAXN") {
        let n = rest.trim_matches(|c| c == '(' || c == ')').trim();
        let n: usize = if n.is_empty() { 2 } else { n.parse().map_err(|_| Error::BadParams(name.to_string()))? };
        return maxn(n);
    }
    if let Some(rest) = upper.strip_prefix("BTYPE") {
        let vars = rest.trim_matches(|c| c == '(' || c == ')' || c == '{' || c == '}').to_lowercase();
        let s = if vars.trim().is_empty() { Sort::of(["x", "y"]) } else { Sort::parse_key(&vars) };
        return btype(&s);
    }
    match upper.as_str() {
        "MIN2" => Ok(min2()),
        "CONTAINS_A" => Ok(contains_a()),
        "XOR2" => Ok(xor2()),
        "UNAMB7" => Ok(unamb7()),
        "THINCHK" => Ok(min2()),
        _ => Err(Error::BadParams(format!("unknown example algebra {name}"))),
    }
}

fn reachable_labels(g: &Graph<Elem>) -> Vec<Elem> {
    g.reachable_from(g.root)
        .into_iter()
        .filter_map(|v| match &g.nodes[v].label {
            Label::Sym(a) => Some(*a),
            Label::Var(_) => None,
        })
        .collect()
}

fn root_sort(g: &Graph<Elem>) -> Sort {
    g.subtree_sorts()[g.root].clone()
}

/// The MIN2 product on all regular trees: the minimum over all labels.
pub struct Min2Full<'a>(pub &'a FinAlgebra);

impl TreeProduct for Min2Full<'_> {
    fn value(&self, g: &Graph<Elem>) -> Result<Elem> {
        let a = self.0;
        let v = reachable_labels(g).iter().map(|&e| a.name(e)).min().unwrap_or("1").to_string();
        a.find(&v, &root_sort(g)).ok_or_else(|| Error::UnsupportedSort(root_sort(g).to_string()))
    }
}

/// The product that is 1 exactly on thin trees with all labels 1.
pub struct ThinCheck<'a>(pub &'a FinAlgebra);

impl TreeProduct for ThinCheck<'_> {
    fn value(&self, g: &Graph<Elem>) -> Result<Elem> {
        let a = self.0;
        let thin = g.classify() != TreeClass::RegularNonThin;
        let all_one = reachable_labels(g).iter().all(|&e| a.name(e) == "1");
        let v = if thin && all_one { "1" } else { "0" };
        a.find(v, &root_sort(g)).ok_or_else(|| Error::UnsupportedSort(root_sort(g).to_string()))
    }
}

/// The MAXN product on all regular trees: the maximum over all labels.
pub struct MaxFull<'a>(pub &'a FinAlgebra);

impl TreeProduct for MaxFull<'_> {
    fn value(&self, g: &Graph<Elem>) -> Result<Elem> {
        let a = self.0;
        let v = reachable_labels(g).iter().map(|&e| a.name(e).parse::<usize>().unwrap_or(0)).max().unwrap_or(0);
        a.find(&v.to_string(), &root_sort(g)).ok_or_else(|| Error::UnsupportedSort(root_sort(g).to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Arg;
    use crate::tree::Tree;

    #[test]
    fn min2_tables() {
        let a = min2();
        let x = Sort::of(["x"]);
        let e = Sort::empty();
        let one_x = a.find("1", &x).unwrap();
        let one = a.find("1", &e).unwrap();
        let zero = a.find("0", &e).unwrap();
        assert_eq!(a.subst(one_x, "x", one).unwrap(), one);
        assert_eq!(a.subst(one_x, "x", zero).unwrap(), zero);
    }

    #[test]
    fn contains_a_products() {
        let a = contains_a();
        let x = Sort::of(["x"]);
        let e = Sort::empty();
        let z0 = a.find("0", &x).unwrap();
        let l0 = a.find("0", &e).unwrap();
        let l1 = a.find("1", &e).unwrap();
        let t = Tree::node(z0, [("x", Tree::node(z0, [("x", Tree::leaf(l0))]))]);
        assert_eq!(a.name(a.product_fin(&t).unwrap()), "0");
        let t = Tree::node(z0, [("x", Tree::node(z0, [("x", Tree::leaf(l1))]))]);
        assert_eq!(a.name(a.product_fin(&t).unwrap()), "1");
    }

    #[test]
    fn unamb7_equations() {
        let a = unamb7();
        let e = Sort::empty();
        let xy = Sort::of(["x", "y"]);
        let ap = a.find("a", &xy).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let vi = a.find(&i.to_string(), &e).unwrap();
                let vj = a.find(&j.to_string(), &e).unwrap();
                let bi = a.find(&format!("b{i}"), &Sort::of(["x"])).unwrap();
                let ci = a.find(&format!("c{i}"), &Sort::of(["x"])).unwrap();
                assert_eq!(a.subst(bi, "x", vj).unwrap(), vj);
                assert_eq!(a.subst(ci, "x", vj).unwrap(), vi);
                assert_eq!(a.name(a.subst(ap, "y", vi).unwrap()), format!("b{i}"));
                assert_eq!(a.name(a.subst(ap, "x", vi).unwrap()), format!("c{i}"));
                let args: BTreeMap<String, Arg> =
                    [("x".to_string(), Arg::Val(vi)), ("y".to_string(), Arg::Val(vj))].into();
                assert_eq!(a.apply(ap, &args).unwrap(), vi);
            }
        }
        assert_eq!(a.check_laws(), None);
        // the listed ω table satisfies the Wilke laws
        let (w, _, _) = a.to_wilke().unwrap();
        assert_eq!(w.check_wilke_laws(), None);
        let listed = a.omega.clone().unwrap();
        let tables = a.enumerate_omega_powers().unwrap();
        assert!(tables.iter().any(|t| t.iter().all(|(k, v)| listed[k] == *v)));
    }

    #[test]
    fn btype_sizes_and_laws() {
        let a = btype(&universe()).unwrap();
        assert_eq!(a.elems_of(&Sort::empty()).len(), 0);
        assert_eq!(a.elems_of(&Sort::of(["x"])).len(), 1);
        assert_eq!(a.elems_of(&Sort::of(["x", "y"])).len(), 4);
        assert_eq!(a.elems_of(&universe()).len(), 36);
        assert_eq!(a.check_laws(), None);
    }

    #[test]
    fn btype_composes_branching_types() {
        let a = btype(&Sort::of(["x", "y", "z"])).unwrap();
        // [x,y] with x := [x,z] is [[x,z],y]
        let xy = a.resolve("[x,y]", None).unwrap();
        let xz = a.resolve("[x,z]", None).unwrap();
        let r = a.subst(xy, "x", xz).unwrap();
        assert_eq!(a.name(r), "[[x,z],y]");
        // a unary root plugged in disappears
        let ux = a.resolve("[x]", None).unwrap();
        assert_eq!(a.subst(xy, "x", ux).unwrap(), xy);
    }

    #[test]
    fn maxn_and_lookup() {
        assert_eq!(by_name("MAXN(3)").unwrap().elems_of(&Sort::empty()).len(), 3);
        assert!(by_name("NOPE").is_err());
        assert_eq!(by_name("BTYPE(x,y)").unwrap().elems_of(&Sort::of(["x", "y"])).len(), 4);
    }
}
