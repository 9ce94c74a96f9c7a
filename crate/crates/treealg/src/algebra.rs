use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Graph, Label, TreeClass};
use crate::semigroup::{check_wilke_laws, FinSemigroup, OmegaSemigroup};
use crate::sort::Sort;
use crate::tree::Tree;

/// An element of a finite algebra, indexing its element list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct Elem(pub u32);

impl Elem {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Argument of a symbol application: an element or a variable leaf.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arg {
    Val(Elem),
    Var(String),
}

/// A renaming of variables, listed as sorted (from, to) pairs.
pub type Renaming = Vec<(String, String)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElemInfo {
    pub name: String,
    pub sort: Sort,
}

/// A finitary tree algebra presented by single-variable substitution tables,
/// with optional variable-merge, ω-power and order tables. Missing table
/// entries are undefined products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinAlgebra {
    pub name: String,
    /// The variable used for unary elements (the sort {z}).
    pub unary: String,
    /// All variables that may occur in sorts.
    pub universe: Sort,
    pub sorts: Vec<Sort>,
    pub elems: Vec<ElemInfo>,
    pub subst: HashMap<(Elem, String, Elem), Elem>,
    pub merge: Option<HashMap<(Elem, Renaming), Elem>>,
    /// ω-powers of unary elements, valued in the empty sort.
    pub omega: Option<HashMap<Elem, Elem>>,
    /// leq[a][b]; only elements of equal sort are comparable.
    pub order: Option<Vec<Vec<bool>>>,
    pub generators: Vec<Elem>,
}

/// A violated substitution law.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LawViolation {
    Associativity { a: Elem, x: String, b: Elem, y: String, c: Elem },
    Exchange { a: Elem, x: String, b: Elem, y: String, c: Elem },
}

impl FinAlgebra {
    /// An algebra with the given elements and empty tables.
    pub fn with_elements(
        name: &str,
        unary: &str,
        universe: Sort,
        sorts: Vec<Sort>,
        elems: Vec<ElemInfo>,
    ) -> FinAlgebra {
        FinAlgebra {
            name: name.to_string(),
            unary: unary.to_string(),
            universe,
            sorts,
            elems,
            subst: HashMap::new(),
            merge: None,
            omega: None,
            order: None,
            generators: Vec::new(),
        }
    }

    /// Fills the substitution table from a function on elements.
    pub fn fill_subst(&mut self, f: impl Fn(&FinAlgebra, Elem, &str, Elem) -> Option<Elem>) {
        let mut table = HashMap::new();
        for a in self.all() {
            for x in self.sort(a).iter() {
                for b in self.all() {
                    if let Some(c) = f(self, a, x, b) {
                        table.insert((a, x.clone(), b), c);
                    }
                }
            }
        }
        self.subst = table;
    }

    /// Fills the merge table from a function on (element, renaming). All
    /// renamings of an element's variables into the universe are offered.
    pub fn fill_merge(&mut self, f: impl Fn(&FinAlgebra, Elem, &BTreeMap<String, String>) -> Option<Elem>) {
        let mut table = HashMap::new();
        let universe: Vec<String> = self.universe.iter().cloned().collect();
        for a in self.all() {
            let vars: Vec<String> = self.sort(a).iter().cloned().collect();
            let k = vars.len();
            let total = universe.len().pow(k as u32);
            for code in 0..total {
                let mut c = code;
                let mut sigma = BTreeMap::new();
                for v in &vars {
                    sigma.insert(v.clone(), universe[c % universe.len()].clone());
                    c /= universe.len();
                }
                if sigma.iter().all(|(k, v)| k == v) {
                    continue;
                }
                if let Some(r) = f(self, a, &sigma) {
                    table.insert((a, sigma.into_iter().collect()), r);
                }
            }
        }
        self.merge = Some(table);
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn all(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.elems.len() as u32).map(Elem)
    }

    pub fn sort(&self, a: Elem) -> &Sort {
        &self.elems[a.idx()].sort
    }

    pub fn name(&self, a: Elem) -> &str {
        &self.elems[a.idx()].name
    }

    /// The element's name, qualified by its sort when the name is ambiguous.
    pub fn display(&self, a: Elem) -> String {
        let info = &self.elems[a.idx()];
        if self.elems.iter().filter(|e| e.name == info.name).count() == 1 {
            info.name.clone()
        } else {
            format!("{}@{}", info.name, info.sort.key())
        }
    }

    pub fn elems_of(&self, sort: &Sort) -> Vec<Elem> {
        self.all().filter(|&a| self.sort(a) == sort).collect()
    }

    pub fn find(&self, name: &str, sort: &Sort) -> Option<Elem> {
        self.all().find(|&a| self.name(a) == name && self.sort(a) == sort)
    }

    /// Resolves `name` or `name@x,y`; an unqualified name is looked up in
    /// `sort`, falling back to the unique element of that name.
    pub fn resolve(&self, reference: &str, sort: Option<&Sort>) -> Result<Elem> {
        if let Some((name, key)) = reference.rsplit_once('@') {
            let s = Sort::parse_key(key);
            return self.find(name, &s).ok_or_else(|| Error::UnknownSymbol(reference.to_string()));
        }
        if let Some(s) = sort {
            if let Some(a) = self.find(reference, s) {
                return Ok(a);
            }
        }
        let hits: Vec<Elem> = self.all().filter(|&a| self.name(a) == reference).collect();
        match hits.as_slice() {
            [a] => Ok(*a),
            [] => Err(Error::UnknownSymbol(reference.to_string())),
            _ => Err(Error::UnknownSymbol(format!("{reference} is ambiguous; qualify it as name@sort"))),
        }
    }

    pub fn unary_sort(&self) -> Sort {
        Sort::of([self.unary.clone()])
    }

    pub fn supports(&self, s: &Sort) -> bool {
        self.sorts.contains(s)
    }

    pub fn subst(&self, a: Elem, x: &str, b: Elem) -> Result<Elem> {
        self.subst
            .get(&(a, x.to_string(), b))
            .copied()
            .ok_or_else(|| Error::Undefined(format!("{}[{} := {}]", self.display(a), x, self.display(b))))
    }

    /// Renames the variables of `a` (identity outside `sigma`).
    pub fn rename(&self, a: Elem, sigma: &BTreeMap<String, String>) -> Result<Elem> {
        let full: Renaming =
            self.sort(a).iter().map(|v| (v.clone(), sigma.get(v).cloned().unwrap_or_else(|| v.clone()))).collect();
        if full.iter().all(|(k, v)| k == v) {
            return Ok(a);
        }
        let table = self.merge.as_ref().ok_or(Error::NoMergeTable)?;
        let desc = || {
            let pairs: Vec<String> = full.iter().map(|(k, v)| format!("{k}->{v}")).collect();
            format!("{}[{}]", self.display(a), pairs.join(","))
        };
        table.get(&(a, full.clone())).copied().ok_or_else(|| Error::Undefined(desc()))
    }

    pub fn omega(&self, a: Elem) -> Result<Elem> {
        let table = self.omega.as_ref().ok_or(Error::NoOmega)?;
        table.get(&a).copied().ok_or_else(|| Error::Undefined(format!("{}^ω", self.display(a))))
    }

    /// Product of the one-vertex tree labelled `a` whose children are `args`.
    ///
    /// Element arguments are substituted one at a time in an order in which
    /// no argument's variables are captured by a hole that is still pending;
    /// when no such order exists a pending hole is first renamed to an unused
    /// variable. Variable arguments are applied last as a single renaming.
    pub fn apply(&self, a: Elem, args: &BTreeMap<String, Arg>) -> Result<Elem> {
        let keys: Sort = args.keys().cloned().collect();
        if &keys != self.sort(a) {
            return Err(Error::SortMismatch(format!(
                "{} has sort {} but is applied to {}",
                self.display(a),
                self.sort(a),
                keys
            )));
        }
        let mut cur = a;
        let mut pending: BTreeMap<String, Arg> = args
            .iter()
            .filter(|(x, arg)| !matches!(arg, Arg::Var(y) if y == *x))
            .map(|(x, g)| (x.clone(), g.clone()))
            .collect();
        loop {
            let vals: Vec<(String, Elem)> = pending
                .iter()
                .filter_map(|(x, g)| match g {
                    Arg::Val(b) => Some((x.clone(), *b)),
                    Arg::Var(_) => None,
                })
                .collect();
            if vals.is_empty() {
                break;
            }
            let pick = vals.iter().find(|(h, b)| self.sort(*b).iter().all(|v| v == h || !pending.contains_key(v)));
            match pick {
                Some((h, b)) => {
                    cur = self.subst(cur, h, *b)?;
                    pending.remove(h);
                }
                None => {
                    // every blocked argument mentions another pending hole
                    let conflicting = pending
                        .keys()
                        .find(|p| vals.iter().any(|(h, b)| h != *p && self.sort(*b).contains(p.as_str())))
                        .cloned()
                        .expect("a blocked substitution has a conflicting hole");
                    let fresh = self.fresh_var(cur, &pending)?;
                    let mut sigma = BTreeMap::new();
                    sigma.insert(conflicting.clone(), fresh.clone());
                    cur = self.rename(cur, &sigma)?;
                    let arg = pending.remove(&conflicting).unwrap();
                    pending.insert(fresh, arg);
                }
            }
        }
        if !pending.is_empty() {
            let sigma: BTreeMap<String, String> = pending
                .into_iter()
                .map(|(x, g)| match g {
                    Arg::Var(y) => (x, y),
                    Arg::Val(_) => unreachable!(),
                })
                .collect();
            cur = self.rename(cur, &sigma)?;
        }
        Ok(cur)
    }

    fn fresh_var(&self, cur: Elem, pending: &BTreeMap<String, Arg>) -> Result<String> {
        let mut used: BTreeSet<&str> = self.sort(cur).iter().map(String::as_str).collect();
        for (x, g) in pending {
            used.insert(x);
            match g {
                Arg::Val(b) => used.extend(self.sort(*b).iter().map(String::as_str)),
                Arg::Var(y) => {
                    used.insert(y);
                }
            }
        }
        self.universe
            .iter()
            .find(|v| !used.contains(v.as_str()))
            .cloned()
            .ok_or_else(|| Error::UnsupportedSort("no unused variable to avoid capture".into()))
    }

    /// Product of a finite tree.
    pub fn product_fin(&self, t: &Tree<Elem>) -> Result<Elem> {
        match t {
            Tree::Var(x) => Err(Error::Invalid(format!("the tree is the bare variable {x}"))),
            Tree::Node(a, ch) => {
                let mut args = BTreeMap::new();
                for (d, c) in ch {
                    let arg = match c {
                        Tree::Var(x) => Arg::Var(x.clone()),
                        Tree::Node(..) => Arg::Val(self.product_fin(c)?),
                    };
                    args.insert(d.clone(), arg);
                }
                self.apply(*a, &args)
            }
        }
    }

    /// Argument map of graph node `v` from already computed node values.
    pub fn node_args(&self, g: &Graph<Elem>, v: usize, values: &[Option<Elem>]) -> Result<BTreeMap<String, Arg>> {
        let mut args = BTreeMap::new();
        for (d, &w) in &g.nodes[v].succ {
            let arg = match &g.nodes[w].label {
                Label::Var(x) => Arg::Var(x.clone()),
                Label::Sym(_) => {
                    Arg::Val(values[w].ok_or_else(|| Error::Invalid("successor not yet evaluated".into()))?)
                }
            };
            args.insert(d.clone(), arg);
        }
        Ok(args)
    }

    /// Values of every reachable labelled node of a thin graph: singleton
    /// components are evaluated from their successors, and a node on a cycle
    /// gets (b₀·b₁⋯b_{s−1})^ω where b_i is the cycle node's label with the
    /// cycle edge left open as the unary variable.
    pub fn hat_pi_values(&self, g: &Graph<Elem>) -> Result<Vec<Option<Elem>>> {
        if g.classify() == TreeClass::RegularNonThin {
            return Err(Error::NotThin);
        }
        let mut values: Vec<Option<Elem>> = vec![None; g.len()];
        for comp in g.sccs() {
            let set: BTreeSet<usize> = comp.iter().copied().collect();
            let is_cycle = comp.len() > 1 || g.nodes[comp[0]].succ.values().any(|&w| w == comp[0]);
            if !is_cycle {
                let v = comp[0];
                if let Label::Sym(a) = &g.nodes[v].label {
                    let args = self.node_args(g, v, &values)?;
                    values[v] = Some(self.apply(*a, &args)?);
                }
                continue;
            }
            let z = self.unary.clone();
            let mut step: BTreeMap<usize, Elem> = BTreeMap::new();
            for &v in &comp {
                let Label::Sym(a) = &g.nodes[v].label else { unreachable!() };
                let mut args = BTreeMap::new();
                for (d, &w) in &g.nodes[v].succ {
                    let arg = if set.contains(&w) {
                        Arg::Var(z.clone())
                    } else {
                        match &g.nodes[w].label {
                            Label::Var(x) => Arg::Var(x.clone()),
                            Label::Sym(_) => Arg::Val(values[w].unwrap()),
                        }
                    };
                    args.insert(d.clone(), arg);
                }
                let b = self.apply(*a, &args)?;
                if self.sort(b) != &self.unary_sort() {
                    return Err(Error::UnsupportedSort(format!(
                        "cycle step at {} has sort {}",
                        g.names[v],
                        self.sort(b)
                    )));
                }
                step.insert(v, b);
            }
            for &v in &comp {
                let cycle = g.cycle_from(v, &set);
                let mut p = step[&cycle[0].0];
                for (w, _) in &cycle[1..] {
                    p = self.subst(p, &z, step[w])?;
                }
                values[v] = Some(self.omega(p)?);
            }
        }
        Ok(values)
    }

    /// Product of a thin regular tree presented by a graph.
    pub fn hat_pi(&self, g: &Graph<Elem>) -> Result<Elem> {
        let values = self.hat_pi_values(g)?;
        match &g.nodes[g.root].label {
            Label::Var(x) => Err(Error::Invalid(format!("the tree is the bare variable {x}"))),
            Label::Sym(_) => Ok(values[g.root].unwrap()),
        }
    }

    /// Checks that labels have the sort of their node's out-edges.
    pub fn check_graph(&self, g: &Graph<Elem>) -> Result<()> {
        g.validate()?;
        for (v, n) in g.nodes.iter().enumerate() {
            if let Label::Sym(a) = &n.label {
                if a.idx() >= self.len() {
                    return Err(Error::UnknownSymbol(format!("{a}")));
                }
                if self.sort(*a) != &g.out_sort(v) {
                    return Err(Error::SortMismatch(format!(
                        "node {} labelled {} has out-edges {}",
                        g.names[v],
                        self.display(*a),
                        g.out_sort(v)
                    )));
                }
            }
        }
        Ok(())
    }

    /// The unary elements A_{z} with multiplication a·b = a[z := b].
    pub fn unary_semigroup(&self) -> Result<(FinSemigroup, Vec<Elem>)> {
        let ones = self.elems_of(&self.unary_sort());
        if ones.is_empty() {
            return Err(Error::UnsupportedSort(format!("{} is empty", self.unary_sort())));
        }
        let index: HashMap<Elem, usize> = ones.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let mut mul = vec![vec![0; ones.len()]; ones.len()];
        for (i, &a) in ones.iter().enumerate() {
            for (j, &b) in ones.iter().enumerate() {
                mul[i][j] = index[&self.subst(a, &self.unary, b)?];
            }
        }
        let names = ones.iter().map(|&a| self.display(a)).collect();
        Ok((FinSemigroup::new(names, mul)?, ones))
    }

    /// The mixed action of A_{z} on A_∅, indexed as in `unary_semigroup`.
    fn mixed_table(&self, ones: &[Elem], zeros: &[Elem]) -> Result<Vec<Vec<usize>>> {
        let index: HashMap<Elem, usize> = zeros.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let mut mixed = vec![vec![0; zeros.len()]; ones.len()];
        for (i, &a) in ones.iter().enumerate() {
            for (j, &c) in zeros.iter().enumerate() {
                mixed[i][j] = index[&self.subst(a, &self.unary, c)?];
            }
        }
        Ok(mixed)
    }

    /// The associated Wilke algebra (A_{z}, A_∅) with the algebra's ω table.
    pub fn to_wilke(&self) -> Result<(OmegaSemigroup, Vec<Elem>, Vec<Elem>)> {
        let (s, ones) = self.unary_semigroup()?;
        let zeros = self.elems_of(&Sort::empty());
        let mixed = self.mixed_table(&ones, &zeros)?;
        let index: HashMap<Elem, usize> = zeros.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let mut omega = Vec::new();
        for &a in &ones {
            omega.push(index[&self.omega(a)?]);
        }
        let w = OmegaSemigroup::new(s, zeros.iter().map(|&a| self.display(a)).collect(), mixed, omega)?;
        Ok((w, ones, zeros))
    }

    /// All ω-power tables A_{z} → A_∅ satisfying the Wilke laws. Values are
    /// chosen on idempotents only and extended by a^ω := (a^k)^ω, where k is
    /// the idempotent exponent; every lawful table has this form.
    pub fn enumerate_omega_powers(&self) -> Result<Vec<BTreeMap<Elem, Elem>>> {
        let (s, ones) = self.unary_semigroup()?;
        let zeros = self.elems_of(&Sort::empty());
        if zeros.is_empty() {
            return Ok(Vec::new());
        }
        let mixed = self.mixed_table(&ones, &zeros)?;
        let k = s.idempotent_exponent();
        let idem: Vec<usize> = (0..s.len()).filter(|&a| s.is_idempotent(a)).collect();
        let mut out = Vec::new();
        let total = zeros.len().pow(idem.len() as u32);
        for code in 0..total {
            let mut on_idem = vec![0; s.len()];
            let mut c = code;
            for &e in &idem {
                on_idem[e] = c % zeros.len();
                c /= zeros.len();
            }
            let omega: Vec<usize> = (0..s.len()).map(|a| on_idem[s.power(a, k)]).collect();
            if check_wilke_laws(&s, &mixed, &omega).is_none() {
                out.push(ones.iter().zip(&omega).map(|(&a, &w)| (a, zeros[w])).collect());
            }
        }
        Ok(out)
    }

    /// A copy of the algebra with the given ω table.
    pub fn with_omega(&self, table: BTreeMap<Elem, Elem>) -> FinAlgebra {
        let mut a = self.clone();
        a.omega = Some(table.into_iter().collect());
        a
    }

    /// First violation of associativity or exchange among defined entries.
    pub fn check_laws(&self) -> Option<LawViolation> {
        let all: Vec<Elem> = self.all().collect();
        for &a in &all {
            let sa = self.sort(a).clone();
            for x in sa.iter() {
                for &b in &all {
                    let Ok(ab) = self.subst(a, x, b) else { continue };
                    for y in self.sort(b).iter() {
                        if sa.contains(y) && y != x {
                            continue;
                        }
                        for &c in &all {
                            let (Ok(l), Ok(bc)) = (self.subst(ab, y, c), self.subst(b, y, c)) else { continue };
                            if let Ok(r) = self.subst(a, x, bc) {
                                if l != r {
                                    return Some(LawViolation::Associativity { a, x: x.clone(), b, y: y.clone(), c });
                                }
                            }
                        }
                    }
                    for y in sa.iter().filter(|y| *y != x && !self.sort(b).contains(y)) {
                        for &c in all.iter().filter(|&&c| !self.sort(c).contains(x)) {
                            let (Ok(l), Ok(ac)) = (self.subst(ab, y, c), self.subst(a, y, c)) else { continue };
                            if let Ok(r) = self.subst(ac, x, b) {
                                if l != r {
                                    return Some(LawViolation::Exchange { a, x: x.clone(), b, y: y.clone(), c });
                                }
                            }
                        }
                    }
                }
            }
        }
        None
    }

    /// The algebra with sorts ∅ and {z} presented by an ω-semigroup.
    pub fn from_omega_semigroup(name: &str, w: &OmegaSemigroup, with_omega: bool) -> FinAlgebra {
        let z = "z";
        let one = Sort::of([z]);
        let mut elems = Vec::new();
        for n in &w.omega_names {
            elems.push(ElemInfo { name: n.clone(), sort: Sort::empty() });
        }
        for n in &w.s.names {
            elems.push(ElemInfo { name: n.clone(), sort: one.clone() });
        }
        let m = w.omega_names.len() as u32;
        let mut alg = FinAlgebra::with_elements(name, z, one.clone(), vec![Sort::empty(), one], elems);
        for a in 0..w.s.len() {
            for b in 0..w.s.len() {
                alg.subst.insert((Elem(m + a as u32), z.into(), Elem(m + b as u32)), Elem(m + w.s.mul(a, b) as u32));
            }
            for c in 0..w.omega_names.len() {
                alg.subst.insert((Elem(m + a as u32), z.into(), Elem(c as u32)), Elem(w.mixed(a, c) as u32));
            }
        }
        if with_omega {
            alg.omega = Some((0..w.s.len()).map(|a| (Elem(m + a as u32), Elem(w.omega[a] as u32))).collect());
        }
        alg
    }

    /// Componentwise product of two algebras over the same sorts.
    pub fn product(a: &FinAlgebra, b: &FinAlgebra) -> Result<FinAlgebra> {
        if a.sorts != b.sorts || a.unary != b.unary {
            return Err(Error::SortMismatch("factors support different sorts".into()));
        }
        let mut pairs: Vec<(Elem, Elem)> = Vec::new();
        let mut elems = Vec::new();
        for s in &a.sorts {
            for x in a.elems_of(s) {
                for y in b.elems_of(s) {
                    pairs.push((x, y));
                    elems.push(ElemInfo { name: format!("({},{})", a.name(x), b.name(y)), sort: s.clone() });
                }
            }
        }
        let index: HashMap<(Elem, Elem), Elem> = pairs.iter().enumerate().map(|(i, &p)| (p, Elem(i as u32))).collect();
        let mut out = FinAlgebra::with_elements(
            &format!("{}x{}", a.name, b.name),
            &a.unary,
            a.universe.union(&b.universe),
            a.sorts.clone(),
            elems,
        );
        for (i, &(x1, y1)) in pairs.iter().enumerate() {
            for v in a.sort(x1).iter() {
                for (j, &(x2, y2)) in pairs.iter().enumerate() {
                    if let (Ok(p), Ok(q)) = (a.subst(x1, v, x2), b.subst(y1, v, y2)) {
                        out.subst.insert((Elem(i as u32), v.clone(), Elem(j as u32)), index[&(p, q)]);
                    }
                }
            }
        }
        if let (Some(ma), Some(mb)) = (&a.merge, &b.merge) {
            let mut table = HashMap::new();
            for ((x, sigma), p) in ma {
                for y in b.elems_of(a.sort(*x)) {
                    if let Some(q) = mb.get(&(y, sigma.clone())) {
                        table.insert((index[&(*x, y)], sigma.clone()), index[&(*p, *q)]);
                    }
                }
            }
            out.merge = Some(table);
        }
        if let (Some(oa), Some(ob)) = (&a.omega, &b.omega) {
            let mut table = HashMap::new();
            for (&(x, y), &e) in &index {
                if let (Some(p), Some(q)) = (oa.get(&x), ob.get(&y)) {
                    table.insert(e, index[&(*p, *q)]);
                }
            }
            out.omega = Some(table);
        }
        if let (Some(la), Some(lb)) = (&a.order, &b.order) {
            let n = pairs.len();
            let mut leq = vec![vec![false; n]; n];
            for i in 0..n {
                for j in 0..n {
                    let (x1, y1) = pairs[i];
                    let (x2, y2) = pairs[j];
                    leq[i][j] = la[x1.idx()][x2.idx()] && lb[y1.idx()][y2.idx()];
                }
            }
            out.order = Some(leq);
        }
        Ok(out)
    }

    /// Element pairs of a product algebra built by [`FinAlgebra::product`].
    pub fn product_pairs(a: &FinAlgebra, b: &FinAlgebra) -> Vec<(Elem, Elem)> {
        let mut pairs = Vec::new();
        for s in &a.sorts {
            for x in a.elems_of(s) {
                for y in b.elems_of(s) {
                    pairs.push((x, y));
                }
            }
        }
        pairs
    }

    /// Whether `c` is closed under products of the given graphs whose labels
    /// all lie in `c`. Graphs with other labels are skipped.
    pub fn is_subuniverse(&self, c: &BTreeSet<Elem>, suite: &[Graph<Elem>]) -> Result<bool> {
        for g in suite {
            let labels_in = g.reachable_from(g.root).into_iter().all(|v| match &g.nodes[v].label {
                Label::Sym(a) => c.contains(a),
                Label::Var(_) => true,
            });
            if labels_in && !c.contains(&self.hat_pi(g)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A product on graph-presented regular trees.
pub trait TreeProduct {
    fn value(&self, g: &Graph<Elem>) -> Result<Elem>;
}

/// The ĥπ product of an algebra with an ω table.
pub struct HatPi<'a>(pub &'a FinAlgebra);

impl TreeProduct for HatPi<'_> {
    fn value(&self, g: &Graph<Elem>) -> Result<Elem> {
        self.0.hat_pi(g)
    }
}

/// The product of an algebra on finite trees, undefined on cyclic graphs.
pub struct FinProduct<'a>(pub &'a FinAlgebra);

impl TreeProduct for FinProduct<'_> {
    fn value(&self, g: &Graph<Elem>) -> Result<Elem> {
        let t = g.to_tree().ok_or_else(|| Error::NotEvaluable("the tree is infinite".into()))?;
        self.0.product_fin(&t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn unit_law() {
        let a = zoo::min2();
        for e in a.all() {
            let t = crate::tree::sing(e, a.sort(e));
            assert_eq!(a.product_fin(&t).unwrap(), e);
        }
    }

    #[test]
    fn apply_avoids_capture() {
        // x ↦ b(y), y ↦ c(x): naive order would capture
        let a = zoo::min2();
        let xy = Sort::of(["x", "y"]);
        let one_xy = a.find("1", &xy).unwrap();
        let b = a.find("1", &Sort::of(["y"])).unwrap();
        let c = a.find("0", &Sort::of(["x"])).unwrap();
        let args: BTreeMap<String, Arg> = [("x".to_string(), Arg::Val(b)), ("y".to_string(), Arg::Val(c))].into();
        let r = a.apply(one_xy, &args).unwrap();
        assert_eq!(a.name(r), "0");
        assert_eq!(a.sort(r), &xy);
    }

    #[test]
    fn enumerate_min2_powers() {
        let a = zoo::min2();
        let tables = a.enumerate_omega_powers().unwrap();
        assert_eq!(tables.len(), 2);
        for t in &tables {
            let zero = a.find("0", &a.unary_sort()).unwrap();
            assert_eq!(a.name(t[&zero]), "0");
        }
    }

    #[test]
    fn hat_pi_lasso_and_quotient() {
        let a = zoo::min2_with_omega(&[("1", "0")]);
        let one = a.find("1", &a.unary_sort()).unwrap();
        let mut g = Graph::new();
        let v = g.add_sym(one);
        g.edge(v, "z", v);
        assert_eq!(a.name(a.hat_pi(&g).unwrap()), "0");
        let mut h = Graph::new();
        let v = h.add_sym(one);
        let w = h.add_sym(one);
        h.edge(v, "z", w);
        h.edge(w, "z", v);
        assert_eq!(a.name(a.hat_pi(&h).unwrap()), "0");
    }

    #[test]
    fn min2_laws_hold() {
        assert_eq!(zoo::min2().check_laws(), None);
        assert_eq!(zoo::contains_a().check_laws(), None);
    }

    #[test]
    fn product_projects() {
        let a = zoo::min2();
        let b = zoo::contains_a();
        let p = FinAlgebra::product(&a, &b).unwrap();
        let pairs = FinAlgebra::product_pairs(&a, &b);
        let xs = Sort::of(["x"]);
        let e = Sort::empty();
        let pick = |x: &str, y: &str, s: &Sort| {
            let i = pairs.iter().position(|&(p1, p2)| a.name(p1) == x && b.name(p2) == y && a.sort(p1) == s).unwrap();
            Elem(i as u32)
        };
        let t = Tree::node(pick("1", "0", &xs), [("x", Tree::leaf(pick("0", "1", &e)))]);
        let v = p.product_fin(&t).unwrap();
        let (l, r) = pairs[v.idx()];
        assert_eq!((a.name(l), b.name(r)), ("0", "1"));
    }
}
