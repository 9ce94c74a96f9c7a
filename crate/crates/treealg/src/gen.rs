//! Seeded random generators for test suites and CLI runs.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::games::{Arena, Player};
use crate::graph::Graph;
use crate::ordered::Poset;
use crate::semigroup::{FinSemigroup, OmegaSemigroup, UpWord};
use crate::sort::Sort;
use crate::splits::{EdgeGraph, LabelledTree};
use crate::tree::Tree;

/// A random semigroup with at most `max` elements: the closure of one or two
/// random transformations of a set of at most three points.
pub fn random_semigroup<R: Rng>(rng: &mut R, max: usize) -> FinSemigroup {
    loop {
        let points = rng.gen_range(1..=3usize);
        let gens: Vec<Vec<usize>> =
            (0..rng.gen_range(1..=2)).map(|_| (0..points).map(|_| rng.gen_range(0..points)).collect()).collect();
        if let Some(s) = transformation_closure(&gens, max) {
            return s;
        }
    }
}

/// Closure of transformations under composition (apply left then right),
/// or `None` if it exceeds `max` elements.
pub fn transformation_closure(gens: &[Vec<usize>], max: usize) -> Option<FinSemigroup> {
    let mut elems: Vec<Vec<usize>> = Vec::new();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    for g in gens {
        if !index.contains_key(g) {
            index.insert(g.clone(), elems.len());
            elems.push(g.clone());
        }
    }
    let compose = |f: &[usize], g: &[usize]| -> Vec<usize> { f.iter().map(|&i| g[i]).collect() };
    let mut i = 0;
    while i < elems.len() {
        for g in gens {
            let h = compose(&elems[i], g);
            if !index.contains_key(&h) {
                if elems.len() == max {
                    return None;
                }
                index.insert(h.clone(), elems.len());
                elems.push(h);
            }
        }
        i += 1;
    }
    let n = elems.len();
    let mul = (0..n).map(|a| (0..n).map(|b| index[&compose(&elems[a], &elems[b])]).collect()).collect();
    Some(FinSemigroup { names: (0..n).map(|i| format!("s{i}")).collect(), mul })
}

/// A random finite Wilke algebra with at most `max` elements in each sort.
/// The mixed and ω tables are filled by randomised backtracking against the
/// Wilke laws; a constant table always satisfies them, so the search succeeds.
pub fn random_wilke<R: Rng>(rng: &mut R, max: usize) -> OmegaSemigroup {
    let s = random_semigroup(rng, max);
    let m = rng.gen_range(1..=max);
    let n = s.len();
    let mut mixed = vec![vec![None; m]; n];
    let mut omega = vec![None; n];
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..m).map(move |c| (a, c))).collect();
    let k = s.idempotent_exponent();
    assert!(fill_wilke(rng, &s, m, k, &cells, 0, &mut mixed, &mut omega));
    OmegaSemigroup {
        s,
        omega_names: (0..m).map(|i| format!("w{i}")).collect(),
        mixed: mixed.into_iter().map(|r| r.into_iter().map(Option::unwrap).collect()).collect(),
        omega: omega.into_iter().map(Option::unwrap).collect(),
    }
}

type Partial = Vec<Option<usize>>;

fn fill_wilke<R: Rng>(
    rng: &mut R,
    s: &FinSemigroup,
    m: usize,
    k: usize,
    cells: &[(usize, usize)],
    i: usize,
    mixed: &mut Vec<Partial>,
    omega: &mut Partial,
) -> bool {
    let n = s.len();
    let total = cells.len() + n;
    if i == total {
        return true;
    }
    let mut values: Vec<usize> = (0..m).collect();
    values.shuffle(rng);
    for v in values {
        if i < cells.len() {
            let (a, c) = cells[i];
            mixed[a][c] = Some(v);
        } else {
            omega[i - cells.len()] = Some(v);
        }
        if partial_laws_hold(s, k, mixed, omega) && fill_wilke(rng, s, m, k, cells, i + 1, mixed, omega) {
            return true;
        }
    }
    if i < cells.len() {
        let (a, c) = cells[i];
        mixed[a][c] = None;
    } else {
        omega[i - cells.len()] = None;
    }
    false
}

fn partial_laws_hold(s: &FinSemigroup, k: usize, mixed: &[Partial], omega: &Partial) -> bool {
    let n = s.len();
    let m = mixed[0].len();
    let mx = |a: usize, c: Option<usize>| c.and_then(|c| mixed[a][c]);
    for a in 0..n {
        for b in 0..n {
            for c in 0..m {
                if let (Some(l), Some(r)) = (mx(a, mixed[b][c]), mixed[s.mul(a, b)][c]) {
                    if l != r {
                        return false;
                    }
                }
            }
            if let (Some(l), Some(r)) = (omega[s.mul(a, b)], mx(a, omega[s.mul(b, a)])) {
                if l != r {
                    return false;
                }
            }
        }
        for e in 1..=k + 1 {
            if let (Some(l), Some(r)) = (omega[s.power(a, e)], omega[a]) {
                if l != r {
                    return false;
                }
            }
        }
    }
    true
}

/// Shape parameters for random graphs.
#[derive(Clone, Debug)]
pub struct GraphShape {
    pub max_nodes: usize,
    pub dirs: Vec<String>,
    /// Whether every strongly connected component must be a simple cycle or trivial.
    pub thin: bool,
}

/// A random rooted graph without variable nodes. Each node's label is drawn
/// by `label` given its out-directions.
pub fn random_graph<L: Clone, R: Rng>(
    rng: &mut R,
    shape: &GraphShape,
    label: &mut impl FnMut(&mut R, &[String]) -> L,
) -> Graph<L> {
    let n = rng.gen_range(1..=shape.max_nodes.max(1));
    // nodes are grouped into blocks; a block is a single node or a cycle
    let mut blocks: Vec<(Vec<usize>, bool)> = Vec::new();
    let mut next = 0;
    while next < n {
        let len = if rng.gen_bool(0.4) { rng.gen_range(1..=3.min(n - next)) } else { 1 };
        let cyclic = len > 1 || rng.gen_bool(0.3);
        blocks.push(((next..next + len).collect(), cyclic));
        next += len;
    }
    let mut dirs_of: Vec<Vec<String>> = vec![Vec::new(); n];
    let mut targets: Vec<BTreeMap<String, usize>> = vec![BTreeMap::new(); n];
    let block_of: Vec<usize> = {
        let mut b = vec![0; n];
        for (i, (bl, _)) in blocks.iter().enumerate() {
            for &v in bl {
                b[v] = i;
            }
        }
        b
    };
    for (bi, (members, cyclic)) in blocks.iter().enumerate() {
        let cyclic = *cyclic;
        let later: Vec<usize> = (0..n).filter(|&w| block_of[w] > bi).collect();
        for (i, &v) in members.iter().enumerate() {
            let mut dirs = shape.dirs.clone();
            dirs.shuffle(rng);
            let mut used = Vec::new();
            if cyclic {
                let d = dirs.pop().expect("at least one direction");
                targets[v].insert(d.clone(), members[(i + 1) % members.len()]);
                used.push(d);
            }
            let extra = if later.is_empty() { 0 } else { rng.gen_range(0..=dirs.len().min(2)) };
            for _ in 0..extra {
                if let Some(d) = dirs.pop() {
                    let w = if !shape.thin && rng.gen_bool(0.3) {
                        rng.gen_range(0..n)
                    } else {
                        *later.choose(rng).unwrap()
                    };
                    targets[v].insert(d.clone(), w);
                    used.push(d);
                }
            }
            used.sort();
            dirs_of[v] = used;
        }
    }
    // make every block reachable from an earlier one where possible
    for bi in 1..blocks.len() {
        let first = blocks[bi].0[0];
        let reached = (0..n).any(|v| block_of[v] < bi && targets[v].values().any(|&w| block_of[w] == bi));
        if !reached {
            let sources: Vec<usize> = (0..n).filter(|&v| block_of[v] < bi).collect();
            let v = *sources.choose(rng).unwrap();
            let free: Vec<&String> = shape.dirs.iter().filter(|d| !targets[v].contains_key(*d)).collect();
            if let Some(d) = free.choose(rng) {
                let d = (*d).clone();
                targets[v].insert(d.clone(), first);
                dirs_of[v].push(d);
                dirs_of[v].sort();
            }
        }
    }
    let mut g = Graph::new();
    for v in 0..n {
        let a = label(rng, &dirs_of[v]);
        g.add_sym(a);
    }
    for (v, t) in targets.into_iter().enumerate() {
        for (d, w) in t {
            g.edge(v, d, w);
        }
    }
    g.root = 0;
    g.trimmed()
}

/// A random thin graph that is not finite, retrying until a cycle is reachable.
pub fn random_thin_graph<L: Clone, R: Rng>(
    rng: &mut R,
    shape: &GraphShape,
    label: &mut impl FnMut(&mut R, &[String]) -> L,
) -> Graph<L> {
    let shape = GraphShape { thin: true, ..shape.clone() };
    loop {
        let g = random_graph(rng, &shape, label);
        if g.classify() == crate::graph::TreeClass::ThinRegular {
            return g;
        }
    }
}

/// A random linear finite tree whose variables are exactly `target`. Node
/// directions are drawn from `dirs`; `label` picks a label for a node given
/// the sort of its out-edges. Depth exceeds `depth` only where more
/// variables remain than can be placed as leaves. The root is never a
/// variable.
pub fn random_term<L, R: Rng>(
    rng: &mut R,
    target: &Sort,
    dirs: &[String],
    depth: usize,
    label: &mut impl FnMut(&mut R, &Sort) -> L,
) -> Tree<L> {
    term_below(rng, target, dirs, depth.max(1), label, true)
}

fn term_below<L, R: Rng>(
    rng: &mut R,
    target: &Sort,
    dirs: &[String],
    depth: usize,
    label: &mut impl FnMut(&mut R, &Sort) -> L,
    top: bool,
) -> Tree<L> {
    let vars: Vec<String> = target.iter().cloned().collect();
    if !top && vars.len() == 1 && (depth == 0 || rng.gen_bool(0.3)) {
        return Tree::var(vars[0].clone());
    }
    let min = if vars.is_empty() { 0 } else { 1 };
    let max = if depth == 0 { vars.len().min(dirs.len()) } else { dirs.len().min(2).max(min) };
    let k = rng.gen_range(min..=max.max(min));
    let mut own: Vec<String> = dirs.to_vec();
    own.shuffle(rng);
    own.truncate(k);
    own.sort();
    let mut parts: Vec<Vec<String>> = vec![Vec::new(); k];
    for x in vars {
        let i = rng.gen_range(0..k);
        parts[i].push(x);
    }
    let sort = Sort::of(own.iter().cloned());
    let a = label(rng, &sort);
    let children: Vec<(String, Tree<L>)> = own
        .into_iter()
        .zip(parts)
        .map(|(d, part)| (d, term_below(rng, &Sort::of(part), dirs, depth.saturating_sub(1), label, false)))
        .collect();
    Tree::node(a, children)
}

/// A random parity game with `n` positions, priorities below 4 and at most
/// three moves per position.
pub fn random_arena<R: Rng>(rng: &mut R, n: usize) -> Arena {
    let mut a = Arena::new();
    for _ in 0..n {
        let owner = if rng.gen_bool(0.5) { Player::Even } else { Player::Odd };
        a.add(owner, rng.gen_range(0..4));
    }
    for v in 0..n {
        for _ in 0..rng.gen_range(0..=3) {
            let w = rng.gen_range(0..n);
            a.edge(v, w);
        }
    }
    a
}

/// A random partial order on at most `max` points, from random covering
/// pairs i < j.
pub fn random_poset<R: Rng>(rng: &mut R, max: usize) -> Poset {
    let n = rng.gen_range(1..=max.max(1));
    let covers: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|_| rng.gen_bool(0.35)).collect();
    Poset::from_covers(n, &covers).expect("pairs i < j are acyclic")
}

/// A random tree of at most `max` nodes with random edge values in `s`.
pub fn random_labelled_tree<R: Rng>(rng: &mut R, s: &FinSemigroup, max: usize) -> LabelledTree {
    let n = rng.gen_range(1..=max.max(1));
    let mut parent = vec![None];
    let mut edge = vec![None];
    for v in 1..n {
        // bias towards recent nodes so that trees get deep as well as wide
        let lo = v.saturating_sub(4);
        parent.push(Some(rng.gen_range(lo..v)));
        edge.push(Some(rng.gen_range(0..s.len())));
    }
    let names = (0..n).map(|v| format!("n{v}")).collect();
    LabelledTree::new(parent, edge, names).expect("parents precede children")
}

/// A random edge-labelled graph over `w` with at most `max` nodes. Nodes
/// without successors are dead ends carrying a random ω value.
pub fn random_edge_graph<R: Rng>(rng: &mut R, w: &OmegaSemigroup, max: usize) -> EdgeGraph {
    let n = rng.gen_range(1..=max.max(1));
    let mut succ = vec![Vec::new(); n];
    for out in succ.iter_mut() {
        for _ in 0..rng.gen_range(0..=2) {
            out.push((rng.gen_range(0..n), rng.gen_range(0..w.s.len())));
        }
    }
    let leaf = succ.iter().map(|out| out.is_empty().then(|| rng.gen_range(0..w.omega_names.len()))).collect();
    EdgeGraph { succ, root: 0, leaf }
}

/// A random ultimately periodic word over `0..n`.
pub fn random_up_word<R: Rng>(rng: &mut R, n: usize, max: usize) -> UpWord {
    let stem = (0..rng.gen_range(0..=max)).map(|_| rng.gen_range(0..n)).collect();
    let period = (0..rng.gen_range(1..=max.max(1))).map(|_| rng.gen_range(0..n)).collect();
    UpWord { stem, period }
}

/// Another presentation of the same infinite word: the period is unrolled
/// into the stem, rotated and repeated at random.
pub fn represent<R: Rng>(rng: &mut R, w: &UpWord) -> UpWord {
    let mut stem = w.stem.clone();
    let mut period = w.period.clone();
    for _ in 0..rng.gen_range(0..3) {
        stem.extend(period.iter().copied());
    }
    for _ in 0..rng.gen_range(0..period.len()) {
        stem.push(period[0]);
        period.rotate_left(1);
    }
    let base = period.clone();
    for _ in 0..rng.gen_range(0..3) {
        period.extend(base.iter().copied());
    }
    UpWord { stem, period }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::TreeClass;
    use rand::SeedableRng;

    #[test]
    fn random_semigroups_are_associative_and_bounded() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let s = random_semigroup(&mut rng, 4);
            assert!(s.len() <= 4);
            assert_eq!(s.associativity_violation(), None);
        }
    }

    #[test]
    fn thin_shapes_are_thin() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let shape = GraphShape { max_nodes: 10, dirs: vec!["x".into(), "y".into(), "z".into()], thin: true };
        for _ in 0..200 {
            let g = random_graph(&mut rng, &shape, &mut |_, _| ());
            assert_ne!(g.classify(), TreeClass::RegularNonThin);
            assert!(g.len() <= 10);
        }
    }

    #[test]
    fn random_wilke_algebras_satisfy_laws() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let w = random_wilke(&mut rng, 3);
            assert_eq!(w.check_wilke_laws(), None);
        }
    }
}
