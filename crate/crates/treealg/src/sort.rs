use std::collections::BTreeSet;
use std::fmt;

/// A sort: a finite set of variable names.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sort(pub BTreeSet<String>);

impl Sort {
    pub fn empty() -> Sort {
        Sort(BTreeSet::new())
    }

    pub fn of<I, S>(vars: I) -> Sort
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Sort(vars.into_iter().map(Into::into).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: &str) -> bool {
        self.0.contains(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = &String> {
        self.0.iter()
    }

    pub fn union(&self, other: &Sort) -> Sort {
        Sort(self.0.union(&other.0).cloned().collect())
    }

    pub fn without(&self, x: &str) -> Sort {
        let mut s = self.0.clone();
        s.remove(x);
        Sort(s)
    }

    pub fn is_subset(&self, other: &Sort) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &Sort) -> bool {
        self.0.is_disjoint(&other.0)
    }

    /// Comma-separated variable list, the form used in element references.
    pub fn key(&self) -> String {
        self.0.iter().cloned().collect::<Vec<_>>().join(",")
    }

    /// Parses the comma-separated form produced by [`Sort::key`].
    pub fn parse_key(s: &str) -> Sort {
        Sort(s.split(',').map(str::trim).filter(|v| !v.is_empty()).map(String::from).collect())
    }

    /// All subsets of `universe`, smallest first.
    pub fn all_subsets(universe: &Sort) -> Vec<Sort> {
        let vars: Vec<&String> = universe.0.iter().collect();
        let mut out = Vec::new();
        for mask in 0u32..(1 << vars.len()) {
            out.push(Sort(
                vars.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, v)| (*v).clone()).collect(),
            ));
        }
        out.sort_by_key(|s| (s.len(), s.clone()));
        out
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.key())
    }
}

impl FromIterator<String> for Sort {
    fn from_iter<T: IntoIterator<Item = String>>(iter: T) -> Self {
        Sort(iter.into_iter().collect())
    }
}
