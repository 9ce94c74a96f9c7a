use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::sort::Sort;

/// A vertex of a tree: the word of directions leading to it from the root.
pub type Path = Vec<String>;

/// A finite tree whose inner vertices carry labels of type `L` and whose
/// leaves may be variables. The out-edges of a labelled vertex are keyed by
/// the variables of its label's sort.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree<L> {
    Var(String),
    Node(L, BTreeMap<String, Tree<L>>),
}

impl<L> Tree<L> {
    pub fn var(x: impl Into<String>) -> Tree<L> {
        Tree::Var(x.into())
    }

    pub fn leaf(label: L) -> Tree<L> {
        Tree::Node(label, BTreeMap::new())
    }

    pub fn node<I, S>(label: L, children: I) -> Tree<L>
    where
        I: IntoIterator<Item = (S, Tree<L>)>,
        S: Into<String>,
    {
        Tree::Node(label, children.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Tree::Var(_))
    }

    pub fn label(&self) -> Option<&L> {
        match self {
            Tree::Var(_) => None,
            Tree::Node(a, _) => Some(a),
        }
    }

    /// Number of occurrences of each variable.
    pub fn var_counts(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeMap<String, usize>) {
        match self {
            Tree::Var(x) => *out.entry(x.clone()).or_insert(0) += 1,
            Tree::Node(_, ch) => ch.values().for_each(|c| c.collect_vars(out)),
        }
    }

    pub fn sort(&self) -> Sort {
        Sort(self.var_counts().into_keys().collect())
    }

    pub fn is_linear(&self) -> bool {
        self.var_counts().values().all(|&n| n == 1)
    }

    /// Number of labelled vertices.
    pub fn size(&self) -> usize {
        match self {
            Tree::Var(_) => 0,
            Tree::Node(_, ch) => 1 + ch.values().map(Tree::size).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Tree::Var(_) => 0,
            Tree::Node(_, ch) => 1 + ch.values().map(Tree::depth).max().unwrap_or(0),
        }
    }

    pub fn subtree(&self, path: &[String]) -> Option<&Tree<L>> {
        match path.split_first() {
            None => Some(self),
            Some((d, rest)) => match self {
                Tree::Node(_, ch) => ch.get(d)?.subtree(rest),
                Tree::Var(_) => None,
            },
        }
    }

    /// All vertices (including variable leaves) in preorder.
    pub fn vertices(&self) -> Vec<Path> {
        let mut out = Vec::new();
        self.collect_vertices(&mut Vec::new(), &mut out);
        out
    }

    fn collect_vertices(&self, here: &mut Path, out: &mut Vec<Path>) {
        out.push(here.clone());
        if let Tree::Node(_, ch) = self {
            for (d, c) in ch {
                here.push(d.clone());
                c.collect_vertices(here, out);
                here.pop();
            }
        }
    }

    /// Labelled vertices in preorder.
    pub fn inner_vertices(&self) -> Vec<Path> {
        self.vertices().into_iter().filter(|p| !self.subtree(p).unwrap().is_var()).collect()
    }

    pub fn map<M>(&self, f: &mut impl FnMut(&L) -> M) -> Tree<M> {
        match self {
            Tree::Var(x) => Tree::Var(x.clone()),
            Tree::Node(a, ch) => Tree::Node(f(a), ch.iter().map(|(k, c)| (k.clone(), c.map(f))).collect()),
        }
    }

    /// Like [`Tree::map`] but the function also sees the vertex's out-edge sort.
    pub fn map_with_sort<M>(&self, f: &mut impl FnMut(&L, &Sort) -> M) -> Tree<M> {
        match self {
            Tree::Var(x) => Tree::Var(x.clone()),
            Tree::Node(a, ch) => {
                let sort = Sort(ch.keys().cloned().collect());
                Tree::Node(f(a, &sort), ch.iter().map(|(k, c)| (k.clone(), c.map_with_sort(f))).collect())
            }
        }
    }

    pub fn try_map<M, E>(
        &self,
        f: &mut impl FnMut(&L) -> std::result::Result<M, E>,
    ) -> std::result::Result<Tree<M>, E> {
        Ok(match self {
            Tree::Var(x) => Tree::Var(x.clone()),
            Tree::Node(a, ch) => {
                let mut out = BTreeMap::new();
                for (k, c) in ch {
                    out.insert(k.clone(), c.try_map(f)?);
                }
                Tree::Node(f(a)?, out)
            }
        })
    }
}

impl<L: Clone> Tree<L> {
    /// Replaces variable leaves according to `map`; unmapped variables stay.
    pub fn substitute(&self, map: &BTreeMap<String, Tree<L>>) -> Tree<L> {
        match self {
            Tree::Var(x) => map.get(x).cloned().unwrap_or_else(|| Tree::Var(x.clone())),
            Tree::Node(a, ch) => {
                Tree::Node(a.clone(), ch.iter().map(|(k, c)| (k.clone(), c.substitute(map))).collect())
            }
        }
    }

    /// Renames variables; non-injective renamings merge them.
    pub fn rename(&self, sigma: &BTreeMap<String, String>) -> Tree<L> {
        let map = sigma.iter().map(|(k, v)| (k.clone(), Tree::Var(v.clone()))).collect();
        self.substitute(&map)
    }

    /// The factor between `u` and the antichain `vs`: the subtree at `u` with
    /// the subtree at each `vs[x]` replaced by the variable `x`.
    pub fn factor(&self, u: &[String], vs: &BTreeMap<String, Path>) -> Result<Tree<L>> {
        check_cut(u, vs)?;
        let sub = self.subtree(u).ok_or_else(|| Error::NotBelow(u.join(".")))?;
        let mut out = sub.clone();
        for (x, v) in vs {
            let rel = &v[u.len()..];
            if self.subtree(v).is_none() {
                return Err(Error::NotBelow(v.join(".")));
            }
            replace_at(&mut out, rel, Tree::Var(x.clone()));
        }
        Ok(out)
    }
}

fn replace_at<L>(t: &mut Tree<L>, path: &[String], new: Tree<L>) {
    match path.split_first() {
        None => *t = new,
        Some((d, rest)) => {
            if let Tree::Node(_, ch) = t {
                if let Some(c) = ch.get_mut(d) {
                    replace_at(c, rest, new);
                }
            }
        }
    }
}

pub(crate) fn is_prefix(p: &[String], q: &[String]) -> bool {
    p.len() <= q.len() && q[..p.len()] == *p
}

/// Checks that every cut vertex is strictly below `u` and that they are
/// pairwise incomparable.
pub(crate) fn check_cut(u: &[String], vs: &BTreeMap<String, Path>) -> Result<()> {
    for v in vs.values() {
        if !(is_prefix(u, v) && v.len() > u.len()) {
            return Err(Error::NotBelow(v.join(".")));
        }
    }
    let all: Vec<&Path> = vs.values().collect();
    for i in 0..all.len() {
        for j in 0..all.len() {
            if i != j && is_prefix(all[i], all[j]) {
                return Err(Error::NotAntichain);
            }
        }
    }
    Ok(())
}

/// The singleton tree: one vertex labelled `a` with a variable leaf per
/// variable of `sort`.
pub fn sing<L>(a: L, sort: &Sort) -> Tree<L> {
    Tree::Node(a, sort.iter().map(|x| (x.clone(), Tree::Var(x.clone()))).collect())
}

/// Flattening of a tree of trees (monad multiplication): every vertex's label
/// tree is substituted into its position, its variables bound to the
/// flattened children.
pub fn flat<L: Clone>(t: &Tree<Tree<L>>) -> Result<Tree<L>> {
    match t {
        Tree::Var(x) => Ok(Tree::Var(x.clone())),
        Tree::Node(s, ch) => {
            let keys = Sort(ch.keys().cloned().collect());
            if s.sort() != keys {
                return Err(Error::SortMismatch(format!(
                    "component has variables {} but vertex has out-edges {}",
                    s.sort(),
                    keys
                )));
            }
            let mut map = BTreeMap::new();
            for (k, c) in ch {
                map.insert(k.clone(), flat(c)?);
            }
            Ok(s.substitute(&map))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Path {
        if s.is_empty() {
            vec![]
        } else {
            s.split('.').map(String::from).collect()
        }
    }

    #[test]
    fn flat_of_double_singleton_is_singleton() {
        let a = sing("a", &Sort::of(["x"]));
        let t = sing(a.clone(), &Sort::of(["x"]));
        assert_eq!(flat(&t).unwrap(), a);
    }

    #[test]
    fn flat_substitutes_child_into_hole() {
        let outer = Tree::node(sing("a", &Sort::of(["x"])), [("x", Tree::leaf(Tree::leaf("b")))]);
        let expected = Tree::node("a", [("x", Tree::leaf("b"))]);
        assert_eq!(flat(&outer).unwrap(), expected);
    }

    #[test]
    fn flat_rejects_sort_mismatch() {
        let outer = Tree::node(sing("a", &Sort::of(["x"])), [("y", Tree::leaf(Tree::leaf("b")))]);
        assert!(matches!(flat(&outer), Err(Error::SortMismatch(_))));
    }

    #[test]
    fn factor_of_binary_tree() {
        let full = Tree::node(
            "a",
            [("0", Tree::node("a", [("0", Tree::leaf("c")), ("1", Tree::leaf("c"))])), ("1", Tree::leaf("c"))],
        );
        let vs: BTreeMap<String, Path> = [("x".to_string(), p("0")), ("y".to_string(), p("1"))].into();
        assert_eq!(
            full.factor(&[], &vs).unwrap(),
            sing("a", &Sort::of(["0", "1"])).rename(&[("0".into(), "x".into()), ("1".into(), "y".into())].into())
        );
        let vs2: BTreeMap<String, Path> = [("x".to_string(), p("0.0")), ("y".to_string(), p("0.1"))].into();
        let f = full.factor(&[], &vs2).unwrap();
        assert_eq!(f.size(), 3);
        assert_eq!(f.sort(), Sort::of(["x", "y"]));
        let whole = full.factor(&[], &BTreeMap::new()).unwrap();
        assert_eq!(whole, full);
    }

    #[test]
    fn factor_errors() {
        let t = Tree::node("a", [("0", Tree::node("a", [("0", Tree::leaf("c"))]))]);
        let bad: BTreeMap<String, Path> = [("x".to_string(), p("0")), ("y".to_string(), p("0.0"))].into();
        assert_eq!(t.factor(&[], &bad), Err(Error::NotAntichain));
        let above: BTreeMap<String, Path> = [("x".to_string(), p("0"))].into();
        assert!(matches!(t.factor(&p("0"), &above), Err(Error::NotBelow(_))));
    }
}
