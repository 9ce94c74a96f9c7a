//! Alternating parity tree automata over algebra elements and variables,
//! their acceptance games on graph-presented trees, profiles of finite
//! factors, the extension to arbitrary labels through generator trees, and
//! products presented by families of initial states.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::algebra::{Elem, FinAlgebra};
use crate::error::{Error, Result};
use crate::games::{solve, Arena, Player, Solution};
use crate::graph::{flat_graph, Graph, Label};
use crate::tree::{Path, Tree};

/// A transition ⟨p, a, (P_z)_z⟩: in state `state` reading `label`, every
/// direction z is continued in some state of `succ[z]`, chosen by the
/// opponent.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Transition {
    pub state: usize,
    pub label: Label<Elem>,
    pub succ: BTreeMap<String, BTreeSet<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automaton {
    pub states: Vec<String>,
    pub init: usize,
    pub priority: Vec<usize>,
    pub delta: Vec<Transition>,
    pub alphabet: BTreeSet<Label<Elem>>,
}

/// A profile of a factor: the start state and, per hole, the pairs
/// (least priority seen, state on arrival) the opponent can force.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Profile {
    pub state: usize,
    pub holes: BTreeMap<String, BTreeSet<(usize, usize)>>,
}

/// The acceptance game of an automaton on a graph, built from the positions
/// reachable from a set of starting positions. Automaton positions ⟨v, q⟩
/// belong to Even; Pathfinder positions ⟨v, δ⟩ to Odd and carry the priority
/// of the state they were reached from.
pub struct AcceptanceGame {
    pub arena: Arena,
    pub automaton_pos: HashMap<(usize, usize), usize>,
    /// For every arena position: the graph node and either the state or the
    /// transition index.
    pub position: Vec<(usize, Position)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Position {
    State(usize),
    Transition(usize),
}

impl Automaton {
    pub fn new(states: Vec<String>, init: usize, priority: Vec<usize>, delta: Vec<Transition>) -> Result<Automaton> {
        let alphabet = delta.iter().map(|t| t.label.clone()).collect();
        let a = Automaton { states, init, priority, delta, alphabet };
        a.validate()?;
        Ok(a)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.states.len();
        if self.init >= n || self.priority.len() != n {
            return Err(Error::Invalid("automaton states, initial state and priorities disagree".into()));
        }
        for t in &self.delta {
            if t.state >= n || t.succ.values().flatten().any(|&q| q >= n) {
                return Err(Error::Invalid("transition refers to an unknown state".into()));
            }
            if matches!(t.label, Label::Var(_)) && !t.succ.is_empty() {
                return Err(Error::Invalid("variable transitions have no successors".into()));
            }
        }
        Ok(())
    }

    /// Checks that transitions respect the sorts of their labels.
    pub fn check_sorts(&self, alg: &FinAlgebra) -> Result<()> {
        for t in &self.delta {
            if let Label::Sym(a) = &t.label {
                if t.succ.keys().ne(alg.sort(*a).iter()) {
                    return Err(Error::SortMismatch(format!("transition on {}", alg.display(*a))));
                }
            }
        }
        Ok(())
    }

    pub fn is_nondeterministic(&self) -> bool {
        self.delta.iter().all(|t| t.succ.values().all(|s| s.len() == 1))
    }

    pub fn priorities(&self) -> BTreeSet<usize> {
        self.priority.iter().copied().collect()
    }

    fn transitions_on<'a>(&'a self, q: usize, label: &'a Label<Elem>) -> impl Iterator<Item = usize> + 'a {
        (0..self.delta.len()).filter(move |&i| self.delta[i].state == q && &self.delta[i].label == label)
    }

    fn check_alphabet(&self, g: &Graph<Elem>) -> Result<()> {
        g.validate()?;
        for v in g.reachable_from(g.root) {
            if !self.alphabet.contains(&g.nodes[v].label) {
                let what = match &g.nodes[v].label {
                    Label::Sym(a) => format!("element #{}", a.0),
                    Label::Var(x) => format!("variable {x}"),
                };
                return Err(Error::AlphabetMismatch(format!("{what} at node {}", g.names[v])));
            }
        }
        Ok(())
    }

    /// The acceptance game on `g` from the given starting positions.
    pub fn game(&self, g: &Graph<Elem>, starts: &[(usize, usize)]) -> Result<AcceptanceGame> {
        self.check_alphabet(g)?;
        let mut arena = Arena::new();
        let mut automaton_pos: HashMap<(usize, usize), usize> = HashMap::new();
        let mut path_pos: HashMap<(usize, usize), usize> = HashMap::new();
        let mut position = Vec::new();
        let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
        for &(v, q) in starts {
            if let std::collections::hash_map::Entry::Vacant(e) = automaton_pos.entry((v, q)) {
                e.insert(arena.add(Player::Even, self.priority[q]));
                position.push((v, Position::State(q)));
                queue.push_back((v, q));
            }
        }
        while let Some((v, q)) = queue.pop_front() {
            let from = automaton_pos[&(v, q)];
            let label = &g.nodes[v].label;
            for d in self.transitions_on(q, label) {
                let t = &self.delta[d];
                let node_succ = &g.nodes[v].succ;
                if t.succ.keys().ne(node_succ.keys()) {
                    continue;
                }
                let pf = *path_pos.entry((v, d)).or_insert_with(|| {
                    position.push((v, Position::Transition(d)));
                    arena.add(Player::Odd, self.priority[q])
                });
                arena.edge(from, pf);
                for (z, rs) in &t.succ {
                    let w = node_succ[z];
                    for &r in rs {
                        let next = match automaton_pos.get(&(w, r)) {
                            Some(&p) => p,
                            None => {
                                let p = arena.add(Player::Even, self.priority[r]);
                                position.push((w, Position::State(r)));
                                automaton_pos.insert((w, r), p);
                                queue.push_back((w, r));
                                p
                            }
                        };
                        arena.edge(pf, next);
                    }
                }
            }
        }
        Ok(AcceptanceGame { arena, automaton_pos, position })
    }

    /// Whether Automaton wins from the root in state `q`.
    pub fn accepts_from(&self, g: &Graph<Elem>, q: usize) -> Result<bool> {
        let game = self.game(g, &[(g.root, q)])?;
        let sol = solve(&game.arena);
        Ok(sol.winner[game.automaton_pos[&(g.root, q)]] == Player::Even)
    }

    pub fn accepts(&self, g: &Graph<Elem>) -> Result<bool> {
        self.accepts_from(g, self.init)
    }

    /// Profiles of a finite tree with holes at its variable leaves, starting
    /// in state `p`. Priorities are taken over the states from the start up
    /// to, but excluding, the state on arrival at the hole.
    pub fn tree_profiles(&self, t: &Tree<Elem>, p: usize) -> BTreeSet<Profile> {
        let mut memo: HashMap<(Path, usize), BTreeSet<BTreeSet<(String, usize, usize)>>> = HashMap::new();
        self.outcomes(t, &mut Vec::new(), p, &mut memo)
            .into_iter()
            .map(|o| {
                let mut holes: BTreeMap<String, BTreeSet<(usize, usize)>> =
                    t.sort().iter().map(|x| (x.clone(), BTreeSet::new())).collect();
                for (z, k, q) in o {
                    holes.entry(z).or_default().insert((k, q));
                }
                Profile { state: p, holes }
            })
            .collect()
    }

    /// For each Automaton strategy below a vertex, the set of outcomes
    /// (hole, least priority, arrival state) the opponent can reach.
    fn outcomes(
        &self,
        t: &Tree<Elem>,
        path: &mut Path,
        p: usize,
        memo: &mut HashMap<(Path, usize), BTreeSet<BTreeSet<(String, usize, usize)>>>,
    ) -> BTreeSet<BTreeSet<(String, usize, usize)>> {
        if let Some(r) = memo.get(&(path.clone(), p)) {
            return r.clone();
        }
        let mut result = BTreeSet::new();
        match t {
            Tree::Var(z) => {
                result.insert([(z.clone(), usize::MAX, p)].into_iter().collect());
            }
            Tree::Node(a, children) => {
                let label = Label::Sym(*a);
                let own = self.priority[p];
                for d in self.transitions_on(p, &label) {
                    let tr = &self.delta[d];
                    if tr.succ.keys().ne(children.keys()) {
                        continue;
                    }
                    // combine one outcome set per (direction, state)
                    let mut partial: BTreeSet<BTreeSet<(String, usize, usize)>> = [BTreeSet::new()].into();
                    for (z, rs) in &tr.succ {
                        path.push(z.clone());
                        for &r in rs {
                            let below = self.outcomes(&children[z], path, r, memo);
                            let mut next = BTreeSet::new();
                            for acc in &partial {
                                for o in &below {
                                    let mut s = acc.clone();
                                    s.extend(o.iter().map(|(h, k, q)| (h.clone(), (*k).min(own), *q)));
                                    next.insert(s);
                                }
                            }
                            partial = next;
                        }
                        path.pop();
                    }
                    result.extend(partial);
                }
            }
        }
        memo.insert((path.clone(), p), result.clone());
        result
    }

    /// Profiles of the factor of a graph's unravelling between `u` and the
    /// cut `vs`; the factor must be finite.
    pub fn factor_profiles(
        &self,
        g: &Graph<Elem>,
        u: &[String],
        vs: &BTreeMap<String, Path>,
    ) -> Result<BTreeSet<Profile>> {
        let f = g.factor(u, vs)?;
        let t = f.to_tree().ok_or_else(|| Error::NotEvaluable("the factor is infinite".into()))?;
        Ok((0..self.states.len()).flat_map(|p| self.tree_profiles(&t, p)).collect())
    }
}

impl AcceptanceGame {
    /// The transition chosen by a positional strategy at ⟨v, q⟩.
    pub fn chosen_transition(&self, sol: &Solution, v: usize, q: usize) -> Option<usize> {
        let p = *self.automaton_pos.get(&(v, q))?;
        match self.position[sol.strategy[p]?].1 {
            Position::Transition(d) => Some(d),
            Position::State(_) => None,
        }
    }
}

/// Name of the extended state ⟨k, q⟩.
fn pair_name(aut: &Automaton, k: usize, q: usize) -> String {
    format!("{k}:{}", aut.states[q])
}

/// Extends an automaton over generator labels to every element: states are
/// pairs ⟨k, q⟩ of a priority and a state, with priority k, and an element a
/// is read in state ⟨k, p⟩ through the profiles of its generator tree
/// `theta[a]` from p. Variables are read as before.
pub fn extend_automaton(aut: &Automaton, alg: &FinAlgebra, theta: &BTreeMap<Elem, Tree<Elem>>) -> Result<Automaton> {
    for (&a, t) in theta {
        if alg.product_fin(t)? != a {
            return Err(Error::BadDecomposition(alg.display(a)));
        }
    }
    let prios: Vec<usize> = aut.priorities().into_iter().collect();
    let index = |k: usize, q: usize| prios.iter().position(|&x| x == k).unwrap() * aut.states.len() + q;
    let mut states = Vec::new();
    let mut priority = Vec::new();
    for &k in &prios {
        for q in 0..aut.states.len() {
            states.push(pair_name(aut, k, q));
            priority.push(k);
        }
    }
    let mut delta = BTreeSet::new();
    let mut alphabet: BTreeSet<Label<Elem>> = theta.keys().map(|&a| Label::Sym(a)).collect();
    for &k in &prios {
        for p in 0..aut.states.len() {
            let from = index(k, p);
            for (&a, t) in theta {
                for prof in aut.tree_profiles(t, p) {
                    let succ = prof
                        .holes
                        .iter()
                        .map(|(z, set)| (z.clone(), set.iter().map(|&(l, q)| index(l, q)).collect()))
                        .collect();
                    delta.insert(Transition { state: from, label: Label::Sym(a), succ });
                }
            }
            for t in aut.delta.iter().filter(|t| t.state == p) {
                if let Label::Var(x) = &t.label {
                    delta.insert(Transition { state: from, label: Label::Var(x.clone()), succ: BTreeMap::new() });
                }
            }
        }
    }
    alphabet.extend(aut.alphabet.iter().filter(|l| matches!(l, Label::Var(_))).cloned());
    let init = index(prios[0], aut.init);
    let a = Automaton { states, init, priority, delta: delta.into_iter().collect(), alphabet };
    a.validate()?;
    Ok(a)
}

/// The tree obtained by replacing every label with its generator tree.
pub fn expand_labels(g: &Graph<Elem>, theta: &BTreeMap<Elem, Tree<Elem>>) -> Result<Graph<Elem>> {
    let outer = g.try_map(&mut |_, a: &Elem| {
        theta
            .get(a)
            .map(Graph::from_tree)
            .ok_or_else(|| Error::BadDecomposition(format!("no generator tree for #{}", a.0)))
    })?;
    Ok(flat_graph(&outer)?.0)
}

/// The product presented by an automaton and a family of initial states:
/// the unique element of the root sort whose state accepts.
pub fn automaton_product(
    alg: &FinAlgebra,
    family: &BTreeMap<Elem, usize>,
    aut: &Automaton,
    g: &Graph<Elem>,
) -> Result<Elem> {
    let sort = g.subtree_sorts()[g.root].clone();
    let mut hits = Vec::new();
    for (&a, &q) in family.iter().filter(|(a, _)| alg.sort(**a) == &sort) {
        if aut.accepts_from(g, q)? {
            hits.push(a);
        }
    }
    match hits.len() {
        0 => Err(Error::NoValue),
        1 => Ok(hits[0]),
        _ => Err(Error::MultipleValues(hits.iter().map(|&a| alg.display(a)).collect())),
    }
}

/// The automaton family deciding whether some label is named `witness`: the
/// product is `witness` if one occurs and `other` otherwise. It covers
/// CONTAINS_A (witness 1) and MIN2 (witness 0) on thin trees.
pub fn witness_family(alg: &FinAlgebra, witness: &str, other: &str) -> Result<(Automaton, BTreeMap<Elem, usize>)> {
    // states: none (no witness anywhere), search (a witness below), done
    let (none, search, done) = (0, 1, 2);
    let mut delta = Vec::new();
    let all_to = |a: Elem, q: usize| -> BTreeMap<String, BTreeSet<usize>> {
        alg.sort(a).iter().map(|x| (x.clone(), [q].into())).collect()
    };
    for a in alg.all() {
        let label = Label::Sym(a);
        if alg.name(a) != witness {
            delta.push(Transition { state: none, label: label.clone(), succ: all_to(a, none) });
        } else {
            delta.push(Transition { state: search, label: label.clone(), succ: all_to(a, done) });
        }
        delta.push(Transition { state: done, label: label.clone(), succ: all_to(a, done) });
        for x in alg.sort(a).iter() {
            let mut succ = all_to(a, done);
            succ.insert(x.clone(), [search].into());
            delta.push(Transition { state: search, label: label.clone(), succ });
        }
    }
    for x in alg.universe.iter() {
        for q in [none, done] {
            delta.push(Transition { state: q, label: Label::Var(x.clone()), succ: BTreeMap::new() });
        }
    }
    let mut aut = Automaton::new(vec!["none".into(), "search".into(), "done".into()], none, vec![0, 1, 0], delta)?;
    aut.alphabet = alg.all().map(Label::Sym).chain(alg.universe.iter().map(|x| Label::Var(x.clone()))).collect();
    let mut family = BTreeMap::new();
    for a in alg.all() {
        if alg.name(a) == witness {
            family.insert(a, search);
        } else if alg.name(a) == other {
            family.insert(a, none);
        }
    }
    Ok((aut, family))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sort::Sort;
    use crate::zoo;

    fn full_binary(alg: &FinAlgebra, value: &str) -> Graph<Elem> {
        let mut g = Graph::new();
        let v = g.add_sym(alg.find(value, &Sort::of(["x", "y"])).unwrap());
        g.edge(v, "x", v);
        g.edge(v, "y", v);
        g
    }

    #[test]
    fn trivial_automaton_accepts_everything() {
        let alg = zoo::contains_a();
        let delta = alg
            .all()
            .map(|a| Transition {
                state: 0,
                label: Label::Sym(a),
                succ: alg.sort(a).iter().map(|x| (x.clone(), [0].into())).collect(),
            })
            .collect();
        let aut = Automaton::new(vec!["q".into()], 0, vec![0], delta).unwrap();
        assert!(aut.accepts(&full_binary(&alg, "0")).unwrap());
        assert!(aut.accepts(&full_binary(&alg, "1")).unwrap());
    }

    #[test]
    fn contains_a_search() {
        let alg = zoo::contains_a();
        let (aut, family) = witness_family(&alg, "1", "0").unwrap();
        let search = family[&alg.find("1", &Sort::empty()).unwrap()];
        let g = full_binary(&alg, "0");
        assert!(!aut.accepts_from(&g, search).unwrap());
        assert_eq!(alg.name(automaton_product(&alg, &family, &aut, &g).unwrap()), "0");
        // a reachable 1 below the root
        let mut h = Graph::new();
        let r = h.add_sym(alg.find("0", &Sort::of(["x", "y"])).unwrap());
        let l = h.add_sym(alg.find("1", &Sort::empty()).unwrap());
        h.edge(r, "x", r);
        h.edge(r, "y", l);
        assert!(aut.accepts_from(&h, search).unwrap());
        assert_eq!(alg.name(automaton_product(&alg, &family, &aut, &h).unwrap()), "1");
    }

    #[test]
    fn alphabet_is_enforced() {
        let alg = zoo::contains_a();
        let one = alg.find("1", &Sort::empty()).unwrap();
        let aut = Automaton::new(
            vec!["q".into()],
            0,
            vec![0],
            vec![Transition { state: 0, label: Label::Sym(one), succ: BTreeMap::new() }],
        )
        .unwrap();
        assert!(matches!(aut.accepts(&full_binary(&alg, "0")), Err(Error::AlphabetMismatch(_))));
    }

    #[test]
    fn ill_formed_family() {
        let alg = zoo::contains_a();
        let (aut, mut family) = witness_family(&alg, "1", "0").unwrap();
        let zero = alg.find("0", &Sort::empty()).unwrap();
        let one = alg.find("1", &Sort::empty()).unwrap();
        family.insert(zero, 2);
        let mut g = Graph::new();
        g.add_sym(one);
        assert!(matches!(automaton_product(&alg, &family, &aut, &g), Err(Error::MultipleValues(_))));
        family.retain(|a, _| alg.sort(*a) != &Sort::empty());
        assert!(matches!(automaton_product(&alg, &family, &aut, &g), Err(Error::NoValue)));
    }

    #[test]
    fn singleton_profiles_read_the_transitions() {
        let alg = zoo::contains_a();
        let (aut, _) = witness_family(&alg, "1", "0").unwrap();
        let a = alg.find("0", &Sort::of(["x", "y"])).unwrap();
        let t = crate::tree::sing(a, alg.sort(a));
        let profiles = aut.tree_profiles(&t, 1);
        // search continues either left or right
        let expected: BTreeSet<Profile> = [("x", "y"), ("y", "x")]
            .iter()
            .map(|(s, d)| Profile {
                state: 1,
                holes: [(s.to_string(), [(1, 1)].into()), (d.to_string(), [(1, 2)].into())].into(),
            })
            .collect();
        assert_eq!(profiles, expected);
    }

    #[test]
    fn two_level_profiles() {
        let alg = zoo::contains_a();
        let (aut, _) = witness_family(&alg, "1", "0").unwrap();
        let x = Sort::of(["x"]);
        let one = alg.find("1", &x).unwrap();
        let zero = alg.find("0", &x).unwrap();
        // 0(1(x)): search may stop at the 1 or continue down to the hole
        let t = Tree::node(zero, [("x", Tree::node(one, [("x", Tree::var("x"))]))]);
        let profiles = aut.tree_profiles(&t, 1);
        let got: BTreeSet<BTreeSet<(usize, usize)>> = profiles.iter().map(|p| p.holes["x"].clone()).collect();
        let expected: BTreeSet<BTreeSet<(usize, usize)>> = [[(1, 2)].into(), [(1, 1)].into()].into();
        assert_eq!(got, expected);
        // from the state without a witness the 1 blocks every strategy
        assert!(aut.tree_profiles(&t, 0).is_empty());
    }

    #[test]
    fn profiles_do_not_depend_on_the_ambient_tree() {
        let alg = zoo::contains_a();
        let (aut, _) = witness_family(&alg, "1", "0").unwrap();
        let xy = Sort::of(["x", "y"]);
        let z = alg.find("0", &xy).unwrap();
        let o = alg.find("1", &xy).unwrap();
        let leaf = alg.find("0", &Sort::empty()).unwrap();
        let mut g = Graph::new();
        let r = g.add_sym(z);
        let l = g.add_sym(leaf);
        g.edge(r, "x", r);
        g.edge(r, "y", l);
        let mut h = Graph::new();
        let r2 = h.add_sym(o);
        let m = h.add_sym(z);
        let l2 = h.add_sym(leaf);
        h.edge(r2, "x", m);
        h.edge(r2, "y", l2);
        h.edge(m, "x", m);
        h.edge(m, "y", l2);
        let p = |s: &str| -> Path { s.split('.').filter(|x| !x.is_empty()).map(String::from).collect() };
        let cut: BTreeMap<String, Path> = [("x".to_string(), p("x.x"))].into();
        let a = aut.factor_profiles(&g, &p("x"), &cut).unwrap();
        let cut2: BTreeMap<String, Path> = [("x".to_string(), p("x.x.x"))].into();
        let b = aut.factor_profiles(&h, &p("x.x"), &cut2).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn extension_through_generator_trees() {
        let alg = zoo::contains_a();
        let (aut, _) = witness_family(&alg, "1", "0").unwrap();
        let xy = Sort::of(["x", "y"]);
        let big = alg.find("1", &xy).unwrap();
        let one_x = alg.find("1", &Sort::of(["x"])).unwrap();
        let zero_xy = alg.find("0", &xy).unwrap();
        let mut theta: BTreeMap<Elem, Tree<Elem>> = alg.all().map(|a| (a, crate::tree::sing(a, alg.sort(a)))).collect();
        theta.insert(
            big,
            Tree::node(one_x, [("x", Tree::node(zero_xy, [("x", Tree::var("x")), ("y", Tree::var("y"))]))]),
        );
        let ext = extend_automaton(&aut, &alg, &theta).unwrap();
        let leaf0 = alg.find("0", &Sort::empty()).unwrap();
        let graphs: Vec<Graph<Elem>> = [big, zero_xy]
            .iter()
            .map(|&root| {
                let mut g = Graph::new();
                let r = g.add_sym(root);
                let m = g.add_sym(zero_xy);
                let l = g.add_sym(leaf0);
                g.edge(r, "x", m);
                g.edge(r, "y", l);
                g.edge(m, "x", m);
                g.edge(m, "y", r);
                g
            })
            .collect();
        for g in &graphs {
            for q in 0..aut.states.len() {
                let mut ext_init = ext.clone();
                ext_init.init = ext.states.iter().position(|s| s == &pair_name(&aut, 0, q)).unwrap();
                let mut base = aut.clone();
                base.init = q;
                assert_eq!(ext_init.accepts(g).unwrap(), base.accepts(&expand_labels(g, &theta).unwrap()).unwrap());
            }
        }
        // a wrong generator tree is rejected
        theta.insert(big, crate::tree::sing(zero_xy, &xy));
        assert!(matches!(extend_automaton(&aut, &alg, &theta), Err(Error::BadDecomposition(_))));
    }
}
