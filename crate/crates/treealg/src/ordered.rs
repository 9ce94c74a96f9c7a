//! Ordered machinery: up- and down-closures, the path algebra TA(𝔖) of an
//! ω-semigroup, the semigroup-like test, instance checks of
//! meet-distributivity, products induced on meet closures, join-irreducible
//! elements and least deterministic subuniverses.
//!
//! Algebras here carry the variable-omitting structure implicitly: an
//! element of sort ζ is embedded into a larger sort ξ as the element of sort
//! ξ with the same name, when one exists.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::algebra::{Elem, ElemInfo, FinAlgebra, TreeProduct};
use crate::error::{Error, Result};
use crate::graph::{Graph, Label};
use crate::semigroup::OmegaSemigroup;
use crate::sort::Sort;

/// A finite partial order on 0..n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    pub leq: Vec<Vec<bool>>,
}

impl Poset {
    /// Checks reflexivity, antisymmetry and transitivity.
    pub fn new(leq: Vec<Vec<bool>>) -> Result<Poset> {
        let n = leq.len();
        if leq.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("order matrix is not square".into()));
        }
        for i in 0..n {
            if !leq[i][i] {
                return Err(Error::Invalid(format!("order is not reflexive at {i}")));
            }
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::Invalid(format!("order is not antisymmetric at {i}, {j}")));
                }
                for k in 0..n {
                    if leq[i][j] && leq[j][k] && !leq[i][k] {
                        return Err(Error::Invalid(format!("order is not transitive at {i}, {j}, {k}")));
                    }
                }
            }
        }
        Ok(Poset { leq })
    }

    /// The reflexive-transitive closure of covering pairs (lower, upper).
    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> Result<Poset> {
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in covers {
            if a >= n || b >= n {
                return Err(Error::Invalid(format!("cover ({a}, {b}) out of range")));
            }
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if leq[i][k] && leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
        Poset::new(leq)
    }

    /// The order of an algebra over all its elements.
    pub fn of_algebra(alg: &FinAlgebra) -> Result<Poset> {
        let leq = alg.order.clone().ok_or_else(|| Error::Invalid(format!("{} has no order", alg.name)))?;
        Poset::new(leq)
    }

    pub fn len(&self) -> usize {
        self.leq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leq.is_empty()
    }

    /// ⌃X: everything above some element of X.
    pub fn up(&self, xs: &BTreeSet<usize>) -> BTreeSet<usize> {
        (0..self.len()).filter(|&a| xs.iter().any(|&x| self.leq[x][a])).collect()
    }

    /// ⌄X: everything below some element of X.
    pub fn down(&self, xs: &BTreeSet<usize>) -> BTreeSet<usize> {
        (0..self.len()).filter(|&a| xs.iter().any(|&x| self.leq[a][x])).collect()
    }

    pub fn is_up_closed(&self, xs: &BTreeSet<usize>) -> bool {
        &self.up(xs) == xs
    }

    /// Greatest lower bound of a nonempty set within `universe`.
    pub fn meet_in(&self, xs: &BTreeSet<usize>, universe: &[usize]) -> Option<usize> {
        if xs.is_empty() {
            return None;
        }
        let lower: Vec<usize> = universe.iter().copied().filter(|&l| xs.iter().all(|&x| self.leq[l][x])).collect();
        lower.iter().copied().find(|&m| lower.iter().all(|&l| self.leq[l][m]))
    }

    /// Least upper bound of a nonempty set within `universe`.
    pub fn join_in(&self, xs: &BTreeSet<usize>, universe: &[usize]) -> Option<usize> {
        if xs.is_empty() {
            return None;
        }
        let upper: Vec<usize> = universe.iter().copied().filter(|&u| xs.iter().all(|&x| self.leq[x][u])).collect();
        upper.iter().copied().find(|&m| upper.iter().all(|&u| self.leq[m][u]))
    }
}

/// Checks that ⌃ and ⌄ are extensive, idempotent and monotone on every
/// subset of a poset with at most 8 elements.
pub fn closure_law_violation(p: &Poset) -> Option<String> {
    let n = p.len();
    if n > 8 {
        return Some("poset too large for exhaustive subsets".into());
    }
    let subsets: Vec<BTreeSet<usize>> = (0..1u32 << n).map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect()).collect();
    type Op<'a> = (&'a str, Box<dyn Fn(&BTreeSet<usize>) -> BTreeSet<usize> + 'a>);
    let ops: [Op; 2] = [("up", Box::new(|x| p.up(x))), ("down", Box::new(|x| p.down(x)))];
    for (name, op) in &ops {
        let images: Vec<BTreeSet<usize>> = subsets.iter().map(op).collect();
        for (x, cx) in subsets.iter().zip(&images) {
            if !x.is_subset(cx) {
                return Some(format!("{name} is not extensive on {x:?}"));
            }
            if &op(cx) != cx {
                return Some(format!("{name} is not idempotent on {x:?}"));
            }
        }
        for (x, cx) in subsets.iter().zip(&images) {
            for (y, cy) in subsets.iter().zip(&images) {
                if x.is_subset(y) && !cx.is_subset(cy) {
                    return Some(format!("{name} is not monotone on {x:?} ⊆ {y:?}"));
                }
            }
        }
    }
    None
}

/// An element of TA(𝔖): an S_ω value, or a ∈ S heading to variable x.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TaElem {
    Omega(usize),
    Path(usize, String),
}

/// The path algebra TA(𝔖) with carriers A_ξ = S_ω + S × ξ.
#[derive(Clone, Debug)]
pub struct TaAlgebra {
    pub alg: FinAlgebra,
    pub w: OmegaSemigroup,
    pub kind: Vec<TaElem>,
    index: HashMap<(Sort, TaElem), Elem>,
}

impl TaAlgebra {
    pub fn elem(&self, sort: &Sort, e: &TaElem) -> Option<Elem> {
        self.index.get(&(sort.clone(), e.clone())).copied()
    }
}

/// Builds TA(𝔖) over every subset of `universe`; `unary` is the variable of
/// the sort {z}. Elements are named `c` for c ∈ S_ω and `a(x)` for a ∈ S.
pub fn make_ta(w: &OmegaSemigroup, universe: &Sort, unary: &str) -> Result<TaAlgebra> {
    if !universe.contains(unary) {
        return Err(Error::BadParams(format!("{unary} is not in the universe {universe}")));
    }
    let sorts = Sort::all_subsets(universe);
    let mut elems = Vec::new();
    let mut kind = Vec::new();
    for s in &sorts {
        for (c, n) in w.omega_names.iter().enumerate() {
            elems.push(ElemInfo { name: n.clone(), sort: s.clone() });
            kind.push(TaElem::Omega(c));
        }
        for x in s.iter() {
            for (a, n) in w.s.names.iter().enumerate() {
                elems.push(ElemInfo { name: format!("{n}({x})"), sort: s.clone() });
                kind.push(TaElem::Path(a, x.clone()));
            }
        }
    }
    let mut alg = FinAlgebra::with_elements(&format!("TA({})", w.s.len()), unary, universe.clone(), sorts, elems);
    let index: HashMap<(Sort, TaElem), Elem> =
        alg.all().map(|e| ((alg.sort(e).clone(), kind[e.idx()].clone()), e)).collect();
    alg.fill_subst(|alg, a, x, b| {
        let s = alg.sort(a).without(x).union(alg.sort(b));
        let r = match (&kind[a.idx()], &kind[b.idx()]) {
            (TaElem::Path(p, y), TaElem::Omega(c)) if y == x => TaElem::Omega(w.mixed(*p, *c)),
            (TaElem::Path(p, y), TaElem::Path(q, u)) if y == x => TaElem::Path(w.s.mul(*p, *q), u.clone()),
            (k, _) => k.clone(),
        };
        index.get(&(s, r)).copied()
    });
    alg.fill_merge(|alg, a, sigma| {
        let s: Sort = alg.sort(a).iter().map(|v| sigma[v].clone()).collect();
        let r = match &kind[a.idx()] {
            TaElem::Path(p, y) => TaElem::Path(*p, sigma[y].clone()),
            k => k.clone(),
        };
        index.get(&(s, r)).copied()
    });
    let one = alg.unary_sort();
    let omega = alg
        .elems_of(&one)
        .into_iter()
        .map(|e| {
            let c = match &kind[e.idx()] {
                TaElem::Path(p, _) => w.omega[*p],
                TaElem::Omega(c) => *c,
            };
            (e, index[&(Sort::empty(), TaElem::Omega(c))])
        })
        .collect();
    alg.omega = Some(omega);
    alg.generators = alg.all().collect();
    Ok(TaAlgebra { alg, w: w.clone(), kind, index })
}

/// The TA(𝔖) product by following the path chosen by the labels: from a
/// label a(x) the path continues in direction x; it ends at an S_ω label, at
/// a variable, or runs into a cycle.
pub struct TaPath<'a>(pub &'a TaAlgebra);

impl TreeProduct for TaPath<'_> {
    fn value(&self, g: &Graph<Elem>) -> Result<Elem> {
        let ta = self.0;
        let w = &ta.w;
        let sort = g.subtree_sorts()[g.root].clone();
        let mut seen: HashMap<usize, usize> = HashMap::new();
        let mut word: Vec<usize> = Vec::new();
        let mut v = g.root;
        let result = loop {
            if let Some(&i) = seen.get(&v) {
                let stem = w.s.product(&word[..i]);
                let cycle = w.s.product(&word[i..]).expect("a cycle has at least one edge");
                break TaElem::Omega(w.mixed_opt(stem, w.omega[cycle]));
            }
            seen.insert(v, word.len());
            match &g.nodes[v].label {
                Label::Var(x) => match w.s.product(&word) {
                    Some(p) => break TaElem::Path(p, x.clone()),
                    None => return Err(Error::Invalid(format!("the tree is the bare variable {x}"))),
                },
                Label::Sym(e) => match &ta.kind[e.idx()] {
                    TaElem::Omega(c) => break TaElem::Omega(w.mixed_opt(w.s.product(&word), *c)),
                    TaElem::Path(a, x) => {
                        word.push(*a);
                        v = *g.nodes[v].succ.get(x).ok_or_else(|| {
                            Error::Invalid(format!("the chosen direction {x} is missing at {}", g.names[v]))
                        })?;
                    }
                },
            }
        };
        ta.elem(&sort, &result).ok_or_else(|| Error::UnsupportedSort(sort.to_string()))
    }
}

/// The closure of `start` under substitution, renaming, ω-powers and the
/// name-preserving embeddings into larger sorts.
pub fn product_closure(alg: &FinAlgebra, start: &BTreeSet<Elem>) -> BTreeSet<Elem> {
    let mut set = start.clone();
    loop {
        let mut add = BTreeSet::new();
        for &a in &set {
            for x in alg.sort(a).iter() {
                for &b in &set {
                    if let Ok(c) = alg.subst(a, x, b) {
                        add.insert(c);
                    }
                }
            }
            if let Some(m) = &alg.merge {
                for ((e, _), r) in m {
                    if *e == a {
                        add.insert(*r);
                    }
                }
            }
            if let Ok(o) = alg.omega(a) {
                add.insert(o);
            }
            for e in alg.all() {
                if alg.name(e) == alg.name(a) && alg.sort(a).is_subset(alg.sort(e)) {
                    add.insert(e);
                }
            }
        }
        let before = set.len();
        set.extend(add);
        if set.len() == before {
            return set;
        }
    }
}

/// Outcome of the semigroup-like test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemigroupLike {
    pub semigroup_like: bool,
    /// Elements outside the closure of A_∅ ∪ A_{z}.
    pub missing: Vec<Elem>,
}

/// Whether A_∅ ∪ A_{z} generates every element.
pub fn is_semigroup_like(alg: &FinAlgebra) -> Result<SemigroupLike> {
    let one = alg.unary_sort();
    if !alg.supports(&Sort::empty()) || !alg.supports(&one) {
        return Err(Error::UnsupportedSort(format!("{} needs the sorts {{}} and {one}", alg.name)));
    }
    let start: BTreeSet<Elem> = alg.elems_of(&Sort::empty()).into_iter().chain(alg.elems_of(&one)).collect();
    let closure = product_closure(alg, &start);
    let missing: Vec<Elem> = alg.all().filter(|e| !closure.contains(e)).collect();
    Ok(SemigroupLike { semigroup_like: missing.is_empty(), missing })
}

/// A tree whose labels are upward-closed sets of elements.
pub type UpSetTree = Graph<BTreeSet<Elem>>;

fn check_upsets(alg: &FinAlgebra, p: &Poset, t: &UpSetTree) -> Result<()> {
    t.validate()?;
    for (v, n) in t.nodes.iter().enumerate() {
        if let Label::Sym(set) = &n.label {
            let out = t.out_sort(v);
            if set.is_empty() {
                return Err(Error::Invalid(format!("empty label set at {}", t.names[v])));
            }
            if set.iter().any(|&e| alg.sort(e) != &out) {
                return Err(Error::SortMismatch(format!("label set at {} is not of sort {out}", t.names[v])));
            }
            let idx: BTreeSet<usize> = set.iter().map(|e| e.idx()).collect();
            if !p.is_up_closed(&idx) {
                return Err(Error::Invalid(format!("label set at {} is not upward closed", t.names[v])));
            }
        }
    }
    Ok(())
}

fn meet_of(alg: &FinAlgebra, p: &Poset, xs: &BTreeSet<Elem>) -> Result<Elem> {
    let Some(&first) = xs.iter().next() else {
        return Err(Error::MeetUndefined("empty set".into()));
    };
    let universe: Vec<usize> = alg.elems_of(alg.sort(first)).into_iter().map(|e| e.idx()).collect();
    let idx: BTreeSet<usize> = xs.iter().map(|e| e.idx()).collect();
    p.meet_in(&idx, &universe).map(|i| Elem(i as u32)).ok_or_else(|| {
        let names: Vec<String> = xs.iter().map(|&e| alg.display(e)).collect();
        Error::MeetUndefined(format!("{{{}}}", names.join(", ")))
    })
}

/// Every graph obtained by choosing one element per labelled node, or an
/// error beyond `cap` choices.
pub fn members(t: &UpSetTree, cap: usize) -> Result<Vec<Graph<Elem>>> {
    let sym: Vec<usize> = (0..t.len()).filter(|&v| matches!(t.nodes[v].label, Label::Sym(_))).collect();
    let mut total: usize = 1;
    for &v in &sym {
        let Label::Sym(s) = &t.nodes[v].label else { unreachable!() };
        total = total.saturating_mul(s.len());
    }
    if total > cap {
        return Err(Error::BadParams(format!("{total} members exceed the cap {cap}")));
    }
    let mut out = vec![t.map(&mut |_| Elem(0))];
    for &v in &sym {
        let Label::Sym(s) = &t.nodes[v].label else { unreachable!() };
        let mut next = Vec::with_capacity(out.len() * s.len());
        for g in &out {
            for &e in s {
                let mut h = g.clone();
                h.nodes[v].label = Label::Sym(e);
                next.push(h);
            }
        }
        out = next;
    }
    Ok(out)
}

/// A failed instance of π ∘ 𝕋inf = inf ∘ 𝕌π ∘ dist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistributivityViolation {
    pub instance: usize,
    /// Product of the tree of meets.
    pub product_of_meets: Elem,
    /// Meet of the products of all members.
    pub meet_of_products: Elem,
}

/// Checks ρ(𝕋inf(T)) = inf{ρ(s) : s ∈ T} on each instance, where members
/// choose one element per graph node.
pub fn check_meet_distributive(
    alg: &FinAlgebra,
    rho: &dyn TreeProduct,
    instances: &[UpSetTree],
    cap: usize,
) -> Result<Option<DistributivityViolation>> {
    let p = Poset::of_algebra(alg)?;
    for (i, t) in instances.iter().enumerate() {
        check_upsets(alg, &p, t)?;
        let meets = t.try_map(&mut |_, s: &BTreeSet<Elem>| meet_of(alg, &p, s))?;
        let lhs = rho.value(&meets)?;
        let mut values = BTreeSet::new();
        for s in members(t, cap)? {
            values.insert(rho.value(&s)?);
        }
        let rhs = meet_of(alg, &p, &values)?;
        if lhs != rhs {
            return Ok(Some(DistributivityViolation { instance: i, product_of_meets: lhs, meet_of_products: rhs }));
        }
    }
    Ok(None)
}

/// Which elements of C witness a label a as a meet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Witness {
    /// All elements of C above a.
    Full,
    /// The minimal elements of C above a.
    Minimal,
}

/// The product induced on A by the inclusion of a meet-dense subuniverse C:
/// each label a is written as the meet of C-elements above it, and the
/// result is the meet of ρ over all C-labelled members.
pub fn induced_meet_product(
    alg: &FinAlgebra,
    c: &BTreeSet<Elem>,
    rho: &dyn TreeProduct,
    g: &Graph<Elem>,
    witness: Witness,
    cap: usize,
) -> Result<Elem> {
    let p = Poset::of_algebra(alg)?;
    let t: UpSetTree = g.try_map(&mut |v, &a: &Elem| {
        let above: BTreeSet<Elem> =
            c.iter().copied().filter(|&e| alg.sort(e) == alg.sort(a) && p.leq[a.idx()][e.idx()]).collect();
        if above.is_empty() || meet_of(alg, &p, &above).ok() != Some(a) {
            return Err(Error::NotMeetDense(format!("{} at {}", alg.display(a), g.names[v])));
        }
        Ok(match witness {
            Witness::Full => above,
            Witness::Minimal => {
                above.iter().copied().filter(|&e| !above.iter().any(|&d| d != e && p.leq[d.idx()][e.idx()])).collect()
            }
        })
    })?;
    let mut values = BTreeSet::new();
    for s in members(&t, cap)? {
        values.insert(rho.value(&s)?);
    }
    meet_of(alg, &p, &values)
}

/// Elements that are not the join of the elements strictly below them;
/// elements with nothing below are irreducible since empty joins are
/// excluded.
pub fn join_irreducibles(alg: &FinAlgebra) -> Result<BTreeSet<Elem>> {
    let p = Poset::of_algebra(alg)?;
    let mut out = BTreeSet::new();
    for a in alg.all() {
        let sort: Vec<usize> = alg.elems_of(alg.sort(a)).into_iter().map(|e| e.idx()).collect();
        let below: BTreeSet<usize> = sort.iter().copied().filter(|&b| b != a.idx() && p.leq[b][a.idx()]).collect();
        if below.is_empty() {
            out.insert(a);
            continue;
        }
        let j = p
            .join_in(&below, &sort)
            .ok_or_else(|| Error::JoinUndefined(format!("elements below {}", alg.display(a))))?;
        if j != a.idx() {
            out.insert(a);
        }
    }
    Ok(out)
}

/// The meet closure of the product closure of the join-irreducibles of
/// sorts ∅ and {z}.
pub fn least_deterministic_subuniverse(alg: &FinAlgebra) -> Result<BTreeSet<Elem>> {
    let p = Poset::of_algebra(alg)?;
    let one = alg.unary_sort();
    let irr: BTreeSet<Elem> =
        join_irreducibles(alg)?.into_iter().filter(|&e| alg.sort(e).is_empty() || alg.sort(e) == &one).collect();
    let mut set = product_closure(alg, &irr);
    loop {
        let mut add = BTreeSet::new();
        for &a in &set {
            for &b in &set {
                if a < b && alg.sort(a) == alg.sort(b) {
                    let pair: BTreeSet<Elem> = [a, b].into_iter().collect();
                    add.insert(meet_of(alg, &p, &pair)?);
                }
            }
        }
        let before = set.len();
        set.extend(add);
        if set.len() == before {
            return Ok(set);
        }
    }
}

/// Renders a set of elements by display name.
pub fn names(alg: &FinAlgebra, set: &BTreeSet<Elem>) -> Vec<String> {
    set.iter().map(|&e| alg.display(e)).collect()
}

/// The order of an algebra as covering pairs per sort key.
pub fn covers(alg: &FinAlgebra) -> BTreeMap<String, Vec<(String, String)>> {
    let mut out: BTreeMap<String, Vec<(String, String)>> = BTreeMap::new();
    let Some(leq) = &alg.order else { return out };
    for a in alg.all() {
        for b in alg.all() {
            if a == b || !leq[a.idx()][b.idx()] {
                continue;
            }
            let between = alg.all().any(|c| c != a && c != b && leq[a.idx()][c.idx()] && leq[c.idx()][b.idx()]);
            if !between {
                out.entry(alg.sort(a).key()).or_default().push((alg.name(a).to_string(), alg.name(b).to_string()));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::HatPi;
    use crate::splits::{branch_limits, EdgeGraph};
    use crate::zoo;
    use proptest::prelude::*;

    fn elem(alg: &FinAlgebra, name: &str, vars: &[&str]) -> Elem {
        alg.find(name, &Sort::of(vars.iter().copied())).unwrap()
    }

    fn min_ta() -> TaAlgebra {
        make_ta(&OmegaSemigroup::min_omega(), &zoo::universe(), "z").unwrap()
    }

    #[test]
    fn ta_lasso_is_an_omega_power() {
        let ta = min_ta();
        let mut g = Graph::new();
        let r = g.add_sym(elem(&ta.alg, "1(z)", &["z"]));
        g.edge(r, "z", r);
        let v = TaPath(&ta).value(&g).unwrap();
        assert_eq!(ta.alg.name(v), "1");
        assert!(ta.alg.sort(v).is_empty());
        assert_eq!(HatPi(&ta.alg).value(&g).unwrap(), v);
    }

    #[test]
    fn ta_path_to_a_variable_and_to_a_value() {
        let ta = min_ta();
        let mut g = Graph::new();
        let r = g.add_sym(elem(&ta.alg, "1(y)", &["x", "y"]));
        let side = g.add_sym(elem(&ta.alg, "0", &[]));
        let next = g.add_sym(elem(&ta.alg, "0(x)", &["x"]));
        let x = g.add_var("x");
        g.edge(r, "x", side);
        g.edge(r, "y", next);
        g.edge(next, "x", x);
        let v = TaPath(&ta).value(&g).unwrap();
        assert_eq!(ta.alg.name(v), "0(x)");
        assert_eq!(ta.alg.sort(v), &Sort::of(["x"]));
        assert_eq!(HatPi(&ta.alg).value(&g).unwrap(), v);

        let mut h = Graph::new();
        let r = h.add_sym(elem(&ta.alg, "1(x)", &["x"]));
        let c = h.add_sym(elem(&ta.alg, "0", &[]));
        h.edge(r, "x", c);
        assert_eq!(ta.alg.name(TaPath(&ta).value(&h).unwrap()), "0");
    }

    #[test]
    fn ta_satisfies_the_substitution_laws() {
        assert_eq!(min_ta().alg.check_laws(), None);
    }

    #[test]
    fn semigroup_like_verdicts() {
        assert!(is_semigroup_like(&min_ta().alg).unwrap().semigroup_like);
        assert!(is_semigroup_like(&zoo::min2()).unwrap().semigroup_like);
        let b = zoo::btype(&Sort::of(["x", "y"])).unwrap();
        let r = is_semigroup_like(&b);
        // BTYPE has no nullary elements; its unary part cannot reach binary types
        match r {
            Ok(r) => assert!(!r.semigroup_like),
            Err(e) => assert!(matches!(e, Error::UnsupportedSort(_))),
        }
    }

    fn upset(alg: &FinAlgebra, names: &[&str], vars: &[&str]) -> BTreeSet<Elem> {
        names.iter().map(|n| elem(alg, n, vars)).collect()
    }

    #[test]
    fn min2_is_meet_distributive_and_xor_is_not() {
        let alg = zoo::min2();
        let mut t: UpSetTree = Graph::new();
        let r = t.add_sym(upset(&alg, &["0", "1"], &["x", "y"]));
        let a = t.add_sym(upset(&alg, &["1"], &[]));
        let b = t.add_sym(upset(&alg, &["0", "1"], &[]));
        t.edge(r, "x", a);
        t.edge(r, "y", b);
        assert_eq!(check_meet_distributive(&alg, &HatPi(&alg), &[t.clone()], 1000).unwrap(), None);

        let xor = zoo::xor2();
        let mut u: UpSetTree = Graph::new();
        let r = u.add_sym(upset(&xor, &["1"], &["x"]));
        let c = u.add_sym(upset(&xor, &["0", "1"], &[]));
        u.edge(r, "x", c);
        let v = check_meet_distributive(&xor, &crate::algebra::FinProduct(&xor), &[u], 1000).unwrap().unwrap();
        assert_eq!(xor.name(v.product_of_meets), "1");
        assert_eq!(xor.name(v.meet_of_products), "0");
    }

    #[test]
    fn singleton_labels_are_trivially_distributive() {
        let alg = zoo::min2();
        let mut t: UpSetTree = Graph::new();
        let r = t.add_sym(upset(&alg, &["1"], &["x"]));
        t.edge(r, "x", r);
        // a singleton is upward closed only at the top
        assert_eq!(check_meet_distributive(&alg, &HatPi(&alg), &[t], 10).unwrap(), None);
    }

    #[test]
    fn non_upsets_are_rejected() {
        let alg = zoo::min2();
        let mut t: UpSetTree = Graph::new();
        t.add_sym(upset(&alg, &["0"], &[]));
        assert!(check_meet_distributive(&alg, &HatPi(&alg), &[t], 10).is_err());
    }

    #[test]
    fn induced_product_is_witness_independent() {
        let alg = zoo::min2();
        let all: BTreeSet<Elem> = alg.all().collect();
        let mut g = Graph::new();
        let r = g.add_sym(elem(&alg, "1", &["x", "y"]));
        let a = g.add_sym(elem(&alg, "0", &[]));
        let b = g.add_sym(elem(&alg, "1", &["x"]));
        g.edge(r, "x", a);
        g.edge(r, "y", b);
        g.edge(b, "x", b);
        let hp = HatPi(&alg);
        let full = induced_meet_product(&alg, &all, &hp, &g, Witness::Full, 1000).unwrap();
        let min = induced_meet_product(&alg, &all, &hp, &g, Witness::Minimal, 1000).unwrap();
        assert_eq!(full, min);
        assert_eq!(full, alg.hat_pi(&g).unwrap());
        let ones: BTreeSet<Elem> = alg.all().filter(|&e| alg.name(e) == "1").collect();
        assert!(matches!(induced_meet_product(&alg, &ones, &hp, &g, Witness::Full, 1000), Err(Error::NotMeetDense(_))));
    }

    #[test]
    fn irreducibles() {
        let alg = zoo::min2();
        assert_eq!(join_irreducibles(&alg).unwrap().len(), alg.len());
        // the diamond ⊥ < a, b < ⊤ on a single nullary sort
        let elems =
            ["bot", "a", "b", "top"].iter().map(|n| ElemInfo { name: n.to_string(), sort: Sort::empty() }).collect();
        let mut d = FinAlgebra::with_elements("DIAMOND", "z", Sort::of(["z"]), vec![Sort::empty()], elems);
        d.order = Some(Poset::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap().leq);
        let irr: Vec<String> = join_irreducibles(&d).unwrap().iter().map(|&e| d.name(e).to_string()).collect();
        assert_eq!(irr, ["bot", "a", "b"]);
        let anti = Poset::from_covers(3, &[]).unwrap();
        d.elems.truncate(3);
        d.order = Some(anti.leq);
        assert_eq!(join_irreducibles(&d).unwrap().len(), 3);
    }

    #[test]
    fn least_deterministic_subuniverse_of_min2_is_everything() {
        let alg = zoo::min2();
        assert_eq!(least_deterministic_subuniverse(&alg).unwrap().len(), alg.len());
    }

    #[test]
    fn min2_product_is_the_meet_of_branch_products() {
        let alg = zoo::min2();
        let (w, ones, zeros) = alg.to_wilke().unwrap();
        let mut g = Graph::new();
        let r = g.add_sym(elem(&alg, "1", &["x", "y"]));
        let a = g.add_sym(elem(&alg, "1", &["x"]));
        let b = g.add_sym(elem(&alg, "0", &[]));
        g.edge(r, "x", a);
        g.edge(r, "y", b);
        g.edge(a, "x", a);
        let value_idx = |e: Elem, set: &[Elem]| set.iter().position(|&o| alg.name(o) == alg.name(e)).unwrap();
        let mut eg = EdgeGraph { succ: vec![Vec::new(); g.len()], root: g.root, leaf: vec![None; g.len()] };
        for (v, n) in g.nodes.iter().enumerate() {
            let Label::Sym(e) = &n.label else { continue };
            if n.succ.is_empty() {
                eg.leaf[v] = Some(value_idx(*e, &zeros));
            }
            for &t in n.succ.values() {
                eg.succ[v].push((t, value_idx(*e, &ones)));
            }
        }
        let limits = branch_limits(&w, &eg);
        let m = limits.iter().map(|&i| alg.name(zeros[i])).min().unwrap();
        assert_eq!(m, alg.name(alg.hat_pi(&g).unwrap()));
    }

    fn random_poset() -> impl Strategy<Value = Poset> {
        (1usize..=6).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
                let covers: Vec<(usize, usize)> =
                    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| bits[i * n + j]).collect();
                Poset::from_covers(n, &covers).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn closures_are_closure_operators(p in random_poset()) {
            prop_assert_eq!(closure_law_violation(&p), None);
        }

        /// dist is natural: choosing members then mapping by a monotone f
        /// and closing upwards equals closing the mapped labels upwards
        /// and then choosing members.
        #[test]
        fn dist_is_natural(p in random_poset(), f in proptest::collection::vec(0usize..6, 6), picks in proptest::collection::vec(0u32..64, 2)) {
            let n = p.len();
            let f: Vec<usize> = f.into_iter().map(|v| v % n).collect();
            // restrict to monotone maps by forcing f order-preserving or skipping
            let monotone = (0..n).all(|a| (0..n).all(|b| !p.leq[a][b] || p.leq[f[a]][f[b]]));
            prop_assume!(monotone);
            let labels: Vec<BTreeSet<usize>> = picks
                .iter()
                .map(|m| p.up(&(0..n).filter(|&i| m >> i & 1 == 1).collect()))
                .filter(|s| !s.is_empty())
                .collect();
            prop_assume!(!labels.is_empty());
            // members of T, mapped pointwise, closed upwards pointwise
            let mapped_members: BTreeSet<Vec<usize>> = cartesian(&labels).into_iter().map(|s| s.iter().map(|&a| f[a]).collect()).collect();
            let left: BTreeSet<Vec<usize>> = cartesian(&vec![(0..n).collect(); labels.len()])
                .into_iter()
                .filter(|t| mapped_members.iter().any(|s| s.iter().zip(t).all(|(&a, &b)| p.leq[a][b])))
                .collect();
            // members of the tree of mapped, upward-closed labels
            let mapped_labels: Vec<BTreeSet<usize>> = labels.iter().map(|l| p.up(&l.iter().map(|&a| f[a]).collect())).collect();
            let right: BTreeSet<Vec<usize>> = cartesian(&mapped_labels).into_iter().collect();
            prop_assert_eq!(left, right);
        }
    }

    fn cartesian(sets: &[BTreeSet<usize>]) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for s in sets {
            out = out
                .into_iter()
                .flat_map(|p| {
                    s.iter().map(move |&e| {
                        let mut q = p.clone();
                        q.push(e);
                        q
                    })
                })
                .collect();
        }
        out
    }
}
