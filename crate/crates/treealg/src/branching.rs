use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::tree::{check_cut, Path, Tree};

/// The branching pattern of a factor: its root, the pairwise meets of the
/// cut vertices, and the cut vertices themselves (holes). Each edge carries
/// the direction taken at its upper end. Equal patterns are exactly
/// isomorphic ones, since children are keyed by direction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BranchPattern {
    pub hole: Option<String>,
    pub children: BTreeMap<String, BranchPattern>,
}

impl BranchPattern {
    fn hole(x: &str) -> BranchPattern {
        BranchPattern { hole: Some(x.to_string()), children: BTreeMap::new() }
    }

    /// Number of pattern vertices.
    pub fn size(&self) -> usize {
        1 + self.children.values().map(BranchPattern::size).sum::<usize>()
    }
}

impl fmt::Display for BranchPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(x) = &self.hole {
            return write!(f, "{x}");
        }
        write!(f, "{{")?;
        for (i, (d, c)) in self.children.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}:{c}")?;
        }
        write!(f, "}}")
    }
}

fn common_prefix_len(paths: &[&[String]]) -> usize {
    let first = paths[0];
    (0..first.len()).take_while(|&i| paths.iter().all(|p| p.len() > i && p[i] == first[i])).count()
}

/// Pattern below a vertex, given the cut vertices as paths relative to it.
fn build(entries: &[(String, &[String])]) -> BranchPattern {
    let mut groups: BTreeMap<String, Vec<(String, &[String])>> = BTreeMap::new();
    for (x, p) in entries {
        groups.entry(p[0].clone()).or_default().push((x.clone(), &p[1..]));
    }
    let mut children = BTreeMap::new();
    for (d, group) in groups {
        let child = if group.len() == 1 {
            BranchPattern::hole(&group[0].0)
        } else {
            let paths: Vec<&[String]> = group.iter().map(|(_, p)| *p).collect();
            let k = common_prefix_len(&paths);
            let stripped: Vec<(String, &[String])> = group.iter().map(|(x, p)| (x.clone(), &p[k..])).collect();
            build(&stripped)
        };
        children.insert(d, child);
    }
    BranchPattern { hole: None, children }
}

/// Branching type of the factor between `u` and the cut `vs`, from paths only.
pub fn branching_type(u: &[String], vs: &BTreeMap<String, Path>) -> Result<BranchPattern> {
    check_cut(u, vs)?;
    let entries: Vec<(String, &[String])> = vs.iter().map(|(x, v)| (x.clone(), &v[u.len()..])).collect();
    Ok(build(&entries))
}

/// Branching type of a factor of a finite tree.
pub fn tree_branching_type<L>(t: &Tree<L>, u: &[String], vs: &BTreeMap<String, Path>) -> Result<BranchPattern> {
    for v in std::iter::once(u).chain(vs.values().map(Vec::as_slice)) {
        if t.subtree(v).is_none() {
            return Err(Error::NotBelow(v.join(".")));
        }
    }
    branching_type(u, vs)
}

/// Branching type of a factor of a graph's unravelling.
pub fn graph_branching_type<L>(g: &Graph<L>, u: &[String], vs: &BTreeMap<String, Path>) -> Result<BranchPattern> {
    for v in std::iter::once(u).chain(vs.values().map(Vec::as_slice)) {
        if g.node_at(v).is_none() {
            return Err(Error::NotBelow(v.join(".")));
        }
    }
    branching_type(u, vs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Path {
        s.split('.').filter(|x| !x.is_empty()).map(String::from).collect()
    }

    fn cut(pairs: &[(&str, &str)]) -> BTreeMap<String, Path> {
        pairs.iter().map(|(x, v)| (x.to_string(), p(v))).collect()
    }

    #[test]
    fn single_vertex_is_a_chain() {
        let b = branching_type(&[], &cut(&[("x", "0.1.1")])).unwrap();
        assert_eq!(b.size(), 2);
        assert_eq!(b.to_string(), "{0:x}");
    }

    #[test]
    fn pairwise_meet_is_included() {
        let b = branching_type(&[], &cut(&[("x", "0.0"), ("y", "0.1")])).unwrap();
        assert_eq!(b.to_string(), "{0:{0:x,1:y}}");
    }

    #[test]
    fn embedding_matters() {
        // [u, v'0 v1) and [u, v'0 v'1) with v0 = 0, v1 = 1, v'0 = 00, v'1 = 01
        let first = branching_type(&[], &cut(&[("x", "0.0"), ("y", "1")])).unwrap();
        let second = branching_type(&[], &cut(&[("x", "0.0"), ("y", "0.1")])).unwrap();
        assert_ne!(first, second);
    }

    #[test]
    fn relative_to_factor_root() {
        let a = branching_type(&p("1.1"), &cut(&[("x", "1.1.0"), ("y", "1.1.1.0")])).unwrap();
        let b = branching_type(&[], &cut(&[("x", "0"), ("y", "1.0")])).unwrap();
        assert_eq!(a, b);
        assert!(branching_type(&p("1"), &cut(&[("x", "0")])).is_err());
    }
}
