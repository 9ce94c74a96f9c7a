//! Condensations: trees whose labels carry a variable merge next to the
//! element, resolved into ordinary trees by choice functions.
//!
//! Choice functions are taken per graph node, so a condensation presented by
//! a graph is resolved into a graph again.

use std::collections::BTreeMap;

use crate::algebra::{Elem, FinAlgebra, TreeProduct};
use crate::error::{Error, Result};
use crate::graph::{GNode, Graph, Label};

/// A condensation label: the merge σ of the element's variables and the
/// element itself.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Condensed {
    pub merge: BTreeMap<String, String>,
    pub elem: Elem,
}

pub type Condensation = Graph<Condensed>;

/// A choice per node: each merged variable y maps to one of its preimages.
pub type Choice = Vec<BTreeMap<String, String>>;

/// The condensed tree itself, with merges forgotten.
pub fn underlying(s: &Condensation) -> Graph<Elem> {
    s.map(&mut |c: &Condensed| c.elem)
}

/// Checks that every merge is defined on exactly the variables of its
/// element and that the graph is well-formed.
pub fn validate(alg: &FinAlgebra, s: &Condensation) -> Result<()> {
    s.validate()?;
    for (v, n) in s.nodes.iter().enumerate() {
        if let Label::Sym(c) = &n.label {
            let sort = alg.sort(c.elem);
            if c.merge.keys().ne(sort.iter()) {
                return Err(Error::SortMismatch(format!("merge at {} is not defined on {}", s.names[v], sort)));
            }
            if n.succ.keys().ne(sort.iter()) {
                return Err(Error::SortMismatch(format!("edges at {} do not match {}", s.names[v], sort)));
            }
        }
    }
    Ok(())
}

/// The preimage options of a merge, one entry per merged variable.
fn options(merge: &BTreeMap<String, String>) -> BTreeMap<String, Vec<String>> {
    let mut out: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (x, y) in merge {
        out.entry(y.clone()).or_default().push(x.clone());
    }
    out
}

/// Number of choice functions on the reachable part, saturating.
pub fn choice_count(s: &Condensation) -> usize {
    let mut n: usize = 1;
    for v in s.reachable_from(s.root) {
        if let Label::Sym(c) = &s.nodes[v].label {
            for xs in options(&c.merge).values() {
                n = n.saturating_mul(xs.len());
            }
        }
    }
    n
}

/// All per-node choice functions, in a fixed order; fails when there are
/// more than `cap` of them.
pub fn choices(s: &Condensation, cap: usize) -> Result<Vec<Choice>> {
    let count = choice_count(s);
    if count > cap {
        return Err(Error::BadParams(format!("{count} choice functions exceed the cap {cap}")));
    }
    let mut slots: Vec<(usize, String, Vec<String>)> = Vec::new();
    for v in s.reachable_from(s.root) {
        if let Label::Sym(c) = &s.nodes[v].label {
            for (y, xs) in options(&c.merge) {
                slots.push((v, y, xs));
            }
        }
    }
    let mut out = Vec::with_capacity(count);
    let mut idx = vec![0usize; slots.len()];
    loop {
        let mut mu: Choice = vec![BTreeMap::new(); s.nodes.len()];
        for (k, (v, y, xs)) in slots.iter().enumerate() {
            mu[*v].insert(y.clone(), xs[idx[k]].clone());
        }
        out.push(mu);
        let mut k = 0;
        loop {
            if k == slots.len() {
                return Ok(out);
            }
            idx[k] += 1;
            if idx[k] < slots[k].2.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// The first choice function: always the least preimage.
pub fn least_choice(s: &Condensation) -> Choice {
    s.nodes
        .iter()
        .map(|n| match &n.label {
            Label::Sym(c) => options(&c.merge).into_iter().map(|(y, xs)| (y, xs[0].clone())).collect(),
            Label::Var(_) => BTreeMap::new(),
        })
        .collect()
}

/// Resolves a condensation with a choice function: the merged element
/// labels the node, its y-edge leads to the successor in direction μ(y), and
/// subtrees outside the chosen directions disappear.
pub fn apply_choice(alg: &FinAlgebra, s: &Condensation, mu: &Choice) -> Result<Graph<Elem>> {
    if alg.merge.is_none() {
        return Err(Error::NoMergeTable);
    }
    let mut nodes = Vec::with_capacity(s.nodes.len());
    for (v, n) in s.nodes.iter().enumerate() {
        nodes.push(match &n.label {
            Label::Var(x) => GNode { label: Label::Var(x.clone()), succ: BTreeMap::new() },
            Label::Sym(c) => {
                let mut succ = BTreeMap::new();
                for y in options(&c.merge).keys() {
                    let x = mu[v]
                        .get(y)
                        .filter(|x| c.merge.get(*x) == Some(y))
                        .ok_or_else(|| Error::Invalid(format!("no valid choice for {y} at {}", s.names[v])))?;
                    let w = *n.succ.get(x).ok_or_else(|| Error::NotBelow(format!("{}.{x}", s.names[v])))?;
                    succ.insert(y.clone(), w);
                }
                GNode { label: Label::Sym(alg.rename(c.elem, &c.merge)?), succ }
            }
        });
    }
    Ok(Graph { nodes, root: s.root, names: s.names.clone() }.trimmed())
}

/// Whether all choice functions resolve to the same tree.
pub fn check_uniform(alg: &FinAlgebra, s: &Condensation, cap: usize) -> Result<bool> {
    let mut first: Option<Graph<Elem>> = None;
    for mu in choices(s, cap)? {
        let r = apply_choice(alg, s, &mu)?;
        match &first {
            None => first = Some(r),
            Some(f) => {
                if !f.same_tree(&r) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Whether, below every node, all choice functions resolve to trees with
/// the same product. A product error means the resolved tree leaves the
/// domain of `rho`.
pub fn check_pi_consistent(alg: &FinAlgebra, s: &Condensation, rho: &dyn TreeProduct, cap: usize) -> Result<bool> {
    for v in s.reachable_from(s.root) {
        if matches!(s.nodes[v].label, Label::Var(_)) {
            continue;
        }
        let (sub, _) = s.rooted_at(v);
        let mut value: Option<Elem> = None;
        for mu in choices(&sub, cap)? {
            let r = apply_choice(alg, &sub, &mu)?;
            let x = rho.value(&r).map_err(|e| Error::NotEvaluable(format!("choice below {}: {e}", s.names[v])))?;
            match value {
                None => value = Some(x),
                Some(y) if y != x => return Ok(false),
                _ => {}
            }
        }
    }
    Ok(true)
}

/// The product through a uniform condensation.
pub fn pi_uniform(alg: &FinAlgebra, s: &Condensation, rho: &dyn TreeProduct, cap: usize) -> Result<Elem> {
    if !check_uniform(alg, s, cap)? {
        return Err(Error::Invalid("the condensation is not uniform".into()));
    }
    rho.value(&apply_choice(alg, s, &least_choice(s))?)
}

/// The product through a consistent condensation.
pub fn pi_consistent(alg: &FinAlgebra, s: &Condensation, rho: &dyn TreeProduct, cap: usize) -> Result<Elem> {
    if !check_pi_consistent(alg, s, rho, cap)? {
        return Err(Error::Invalid("the condensation is not consistent".into()));
    }
    rho.value(&apply_choice(alg, s, &least_choice(s))?)
}

/// Condensation with identity merges on a graph.
pub fn identity_condensation(alg: &FinAlgebra, g: &Graph<Elem>) -> Condensation {
    g.map(&mut |&a: &Elem| Condensed { merge: alg.sort(a).iter().map(|x| (x.clone(), x.clone())).collect(), elem: a })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::HatPi;
    use crate::sort::Sort;
    use crate::zoo;

    fn all_to(x: &str, vars: &[&str]) -> BTreeMap<String, String> {
        vars.iter().map(|v| (v.to_string(), x.to_string())).collect()
    }

    /// Level-uniform binary tree: levels alternate 1 and 0 labels, every
    /// level merged onto x.
    fn level_uniform(alg: &FinAlgebra) -> Condensation {
        let xy = Sort::of(["x", "y"]);
        let one = alg.find("1", &xy).unwrap();
        let zero = alg.find("0", &xy).unwrap();
        let mut s = Graph::new();
        let a = s.add_sym(Condensed { merge: all_to("x", &["x", "y"]), elem: one });
        let b = s.add_sym(Condensed { merge: all_to("x", &["x", "y"]), elem: zero });
        s.edge(a, "x", b);
        s.edge(a, "y", b);
        s.edge(b, "x", a);
        s.edge(b, "y", a);
        s
    }

    #[test]
    fn identity_merges_give_the_underlying_tree() {
        let alg = zoo::min2();
        let xy = Sort::of(["x", "y"]);
        let mut g = Graph::new();
        let r = g.add_sym(alg.find("1", &xy).unwrap());
        let l = g.add_sym(alg.find("0", &Sort::empty()).unwrap());
        g.edge(r, "x", l);
        g.edge(r, "y", r);
        let s = identity_condensation(&alg, &g);
        validate(&alg, &s).unwrap();
        assert_eq!(choices(&s, 10).unwrap().len(), 1);
        let t = apply_choice(&alg, &s, &least_choice(&s)).unwrap();
        assert!(t.same_tree(&underlying(&s)));
        assert!(check_uniform(&alg, &s, 10).unwrap());
    }

    #[test]
    fn level_uniform_collapses_to_a_path() {
        let alg = zoo::min2();
        let s = level_uniform(&alg);
        validate(&alg, &s).unwrap();
        let all = choices(&s, 100).unwrap();
        assert_eq!(all.len(), 4);
        let x = Sort::of(["x"]);
        let mut path = Graph::new();
        let a = path.add_sym(alg.find("1", &x).unwrap());
        let b = path.add_sym(alg.find("0", &x).unwrap());
        path.edge(a, "x", b);
        path.edge(b, "x", a);
        for mu in &all {
            let r = apply_choice(&alg, &s, mu).unwrap();
            assert!(r.same_tree(&path));
        }
        assert!(check_uniform(&alg, &s, 100).unwrap());
    }

    #[test]
    fn mixed_leaves_are_not_consistent() {
        let alg = zoo::min2();
        let xy = Sort::of(["x", "y"]);
        let e = Sort::empty();
        let mut s = Graph::new();
        let r = s.add_sym(Condensed { merge: all_to("x", &["x", "y"]), elem: alg.find("1", &xy).unwrap() });
        let l0 = s.add_sym(Condensed { merge: BTreeMap::new(), elem: alg.find("0", &e).unwrap() });
        let l1 = s.add_sym(Condensed { merge: BTreeMap::new(), elem: alg.find("1", &e).unwrap() });
        s.edge(r, "x", l0);
        s.edge(r, "y", l1);
        assert!(!check_uniform(&alg, &s, 10).unwrap());
        assert!(!check_pi_consistent(&alg, &s, &HatPi(&alg), 10).unwrap());
        // the two resolutions differ in value
        let values: Vec<String> = choices(&s, 10)
            .unwrap()
            .iter()
            .map(|mu| alg.name(alg.hat_pi(&apply_choice(&alg, &s, mu).unwrap()).unwrap()).to_string())
            .collect();
        assert_eq!(values, vec!["0", "1"]);
    }

    #[test]
    fn merging_equal_subtrees_is_consistent() {
        let alg = zoo::min2();
        let s = level_uniform(&alg);
        assert!(check_pi_consistent(&alg, &s, &HatPi(&alg), 100).unwrap());
        assert_eq!(alg.name(pi_uniform(&alg, &s, &HatPi(&alg), 100).unwrap()), "0");
    }

    #[test]
    fn missing_merge_table() {
        let mut alg = zoo::min2();
        let s = level_uniform(&alg);
        alg.merge = None;
        assert!(matches!(apply_choice(&alg, &s, &least_choice(&s)), Err(Error::NoMergeTable)));
    }

    #[test]
    fn cap_is_enforced() {
        let alg = zoo::min2();
        let s = level_uniform(&alg);
        assert!(choices(&s, 3).is_err());
    }
}
