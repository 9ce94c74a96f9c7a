//! Seeded property suites for the acceptance criteria, with the
//! brute-force oracles they compare against. Each suite returns a summary on
//! success and the first counterexample on failure.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{Elem, FinAlgebra, FinProduct, HatPi, TreeProduct};
use crate::automaton::{automaton_product, witness_family};
use crate::evaluation::{build_wilke_evaluation, evaluation_to_split, glue, split_to_evaluation, Evaluation};
use crate::games::{brute_force, check_solution, solve};
use crate::gen::{
    random_arena, random_edge_graph, random_graph, random_labelled_tree, random_poset, random_semigroup, random_term,
    random_thin_graph, random_up_word, random_wilke, represent, GraphShape,
};
use crate::graph::{flat_graph, Graph, TreeClass};
use crate::labelling::{enumerate_consistent, is_weakly_consistent, CanonicalScheme, LabellingScheme, Level};
use crate::ordered::{check_meet_distributive, closure_law_violation, make_ta, TaPath, UpSetTree};
use crate::rewiring::{
    check_block_constancy, enumerate_rewirings, rewiring_preservation, synthesise_sigma, RewiringBounds,
};
use crate::semigroup::OmegaSemigroup;
use crate::sort::Sort;
use crate::splits::{branch_limits, reconstruct, tree_split, verify_tree_split, EdgeGraph};
use crate::tree::{flat, sing, Path, Tree};
use crate::zoo;

/// Directions and variables of generated terms. The example algebras have
/// the universe {x, y, z}; keeping z unused leaves a spare variable for
/// renaming a hole out of the way during substitution.
pub fn dirs() -> Vec<String> {
    vec!["x".into(), "y".into()]
}

pub fn shape(max_nodes: usize, dirs: &[&str], thin: bool) -> GraphShape {
    GraphShape { max_nodes, dirs: dirs.iter().map(|d| d.to_string()).collect(), thin }
}

/// A uniformly random element of the given sort.
pub fn pick<R: Rng>(rng: &mut R, alg: &FinAlgebra, sort: &Sort) -> Elem {
    let xs = alg.elems_of(sort);
    assert!(!xs.is_empty(), "{} has no elements of sort {sort}", alg.name);
    xs[rng.gen_range(0..xs.len())]
}

fn sort_of(ds: &[String]) -> Sort {
    Sort::of(ds.iter().cloned())
}

pub fn thin_graph<R: Rng>(rng: &mut R, alg: &FinAlgebra, max_nodes: usize, ds: &[&str]) -> Graph<Elem> {
    random_thin_graph(rng, &shape(max_nodes, ds, true), &mut |r: &mut R, d: &[String]| pick(r, alg, &sort_of(d)))
}

pub fn any_graph<R: Rng>(rng: &mut R, alg: &FinAlgebra, max_nodes: usize, ds: &[&str]) -> Graph<Elem> {
    random_graph(rng, &shape(max_nodes, ds, false), &mut |r: &mut R, d: &[String]| pick(r, alg, &sort_of(d)))
}

/// A random linear term of the given sort over `alg`.
pub fn term<R: Rng>(rng: &mut R, alg: &FinAlgebra, target: &Sort, depth: usize) -> Tree<Elem> {
    random_term(rng, target, &dirs(), depth, &mut |r: &mut R, s: &Sort| pick(r, alg, s))
}

/// A random element of 𝕋𝕋A: each node carries a term of its out-sort.
pub fn nested2<R: Rng>(rng: &mut R, alg: &FinAlgebra, target: &Sort, depth: usize) -> Tree<Tree<Elem>> {
    random_term(rng, target, &dirs(), depth, &mut |r: &mut R, s: &Sort| term(r, alg, s, depth))
}

/// A random element of 𝕋𝕋𝕋A.
pub fn nested3<R: Rng>(rng: &mut R, alg: &FinAlgebra, target: &Sort, depth: usize) -> Tree<Tree<Tree<Elem>>> {
    random_term(rng, target, &dirs(), depth, &mut |r: &mut R, s: &Sort| nested2(r, alg, s, depth))
}

/// A bisimilar presentation: two copies of `g` with every edge sent to a
/// random copy of its target.
pub fn doubled<R: Rng, L: Clone>(rng: &mut R, g: &Graph<L>) -> Graph<L> {
    let n = g.len();
    let mut h = Graph::new();
    for copy in 0..2 {
        for v in 0..n {
            let id = h.add(g.nodes[v].label.clone());
            h.names[id] = format!("{}#{copy}", g.names[v]);
        }
    }
    for copy in 0..2 {
        for v in 0..n {
            for (d, &w) in &g.nodes[v].succ {
                let to = w + n * rng.gen_range(0..2);
                h.edge(v + n * copy, d.clone(), to);
            }
        }
    }
    h.root = g.root + n * rng.gen_range(0..2);
    h.trimmed()
}

/// All lawful ω tables by trying every map A_{z} → A_∅ and checking
/// (ab)^ω = a(ba)^ω and (aⁿ)^ω = a^ω directly on the substitution table.
pub fn brute_force_omega_tables(alg: &FinAlgebra) -> Vec<BTreeMap<Elem, Elem>> {
    let z = alg.unary.clone();
    let ones = alg.elems_of(&alg.unary_sort());
    let zeros = alg.elems_of(&Sort::empty());
    let mul = |a: Elem, b: Elem| alg.subst(a, &z, b).unwrap();
    let mut out = Vec::new();
    let total = zeros.len().pow(ones.len() as u32);
    for code in 0..total {
        let mut table = BTreeMap::new();
        let mut c = code;
        for &a in &ones {
            table.insert(a, zeros[c % zeros.len()]);
            c /= zeros.len();
        }
        let lawful = ones.iter().all(|&a| {
            let exchange = ones.iter().all(|&b| table[&mul(a, b)] == mul(a, table[&mul(b, a)]));
            let mut power = a;
            let powers = (1..=ones.len() + 1).all(|_| {
                let ok = table[&power] == table[&a];
                power = mul(power, a);
                ok
            });
            exchange && powers
        });
        if lawful {
            out.push(table);
        }
    }
    out
}

/// Branch limits by enumerating lassos: every walk value reaching a node
/// within |V|·|S₁| steps, every loop value at it within the same bound, and
/// every walk into a dead end.
pub fn lasso_limits(w: &OmegaSemigroup, g: &EdgeGraph) -> BTreeSet<usize> {
    let n = g.succ.len();
    let bound = n * w.s.len();
    let walks = |from: usize, start: Option<usize>| -> BTreeSet<(usize, Option<usize>)> {
        let mut all = BTreeSet::from([(from, start)]);
        let mut layer = all.clone();
        for _ in 0..bound {
            let mut next = BTreeSet::new();
            for &(v, x) in &layer {
                for &(t, a) in &g.succ[v] {
                    next.insert((t, Some(x.map_or(a, |x| w.s.mul(x, a)))));
                }
            }
            all.extend(next.iter().copied());
            layer = next;
        }
        all
    };
    let mut out = BTreeSet::new();
    for (u, x) in walks(g.root, None) {
        if let Some(c) = g.leaf[u] {
            out.insert(w.mixed_opt(x, c));
        }
        for (v, y) in walks(u, None) {
            if let (true, Some(y)) = (v == u, y) {
                out.insert(w.mixed_opt(x, w.omega[y]));
            }
        }
    }
    out
}

type Outcome = Result<String, String>;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T, E: std::fmt::Debug>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| format!("{e:?}"))
}

fn c1_monad_laws(seed: u64, n: &dyn Fn(usize) -> usize) -> Outcome {
    let mut r = rng(seed);
    let algs = [zoo::min2(), zoo::xor2()];
    for i in 0..n(200) {
        let alg = &algs[i % 2];
        let target: Sort = dirs().into_iter().filter(|_| r.gen_bool(0.3)).collect();
        let t3 = nested3(&mut r, alg, &target, 2);
        let assoc_l = e(flat(&e(t3.try_map(&mut |t: &Tree<Tree<Elem>>| flat(t)))?))?;
        let assoc_r = e(flat(&e(flat(&t3))?))?;
        ensure(assoc_l == assoc_r, || format!("flat∘𝕋flat ≠ flat∘flat on instance {i}"))?;
        let t = e(flat(&e(flat(&t3))?))?;
        ensure(e(flat(&sing(t.clone(), &t.sort())))? == t, || format!("flat∘sing ≠ id on instance {i}"))?;
        let lifted = t.map_with_sort(&mut |&a, s| sing(a, s));
        ensure(e(flat(&lifted))? == t, || format!("flat∘𝕋sing ≠ id on instance {i}"))?;
    }
    for i in 0..n(200) {
        let alg = &algs[i % 2];
        let target: Sort = dirs().into_iter().filter(|_| r.gen_bool(0.3)).collect();
        let t2 = nested2(&mut r, alg, &target, 2);
        let whole = e(alg.product_fin(&e(flat(&t2))?))?;
        let inner_first = e(alg.product_fin(&e(t2.try_map(&mut |t: &Tree<Elem>| alg.product_fin(t)))?))?;
        ensure(whole == inner_first, || format!("product depends on substitution order on term {i}"))?;
        let on_graph = e(FinProduct(alg).value(&Graph::from_tree(&e(flat(&t2))?)))?;
        ensure(whole == on_graph, || format!("graph product differs on term {i}"))?;
    }
    Ok(format!("{} nested trees, {} terms over MIN2 and XOR2", n(200), n(200)))
}

fn c2_wilke_presentations(seed: u64, n: &dyn Fn(usize) -> usize) -> Outcome {
    let mut r = rng(seed);
    let mut words = 0;
    for i in 0..n(20) {
        let w = random_wilke(&mut r, 3);
        ensure(w.check_wilke_laws().is_none(), || format!("algebra {i} breaks the Wilke laws"))?;
        let alg = FinAlgebra::from_omega_semigroup("W", &w, true);
        for _ in 0..5 {
            let word = random_up_word(&mut r, w.s.len(), 4);
            let expected = e(w.lasso_product(&word))?;
            for _ in 0..100 {
                let other = represent(&mut r, &word);
                ensure(e(w.lasso_product(&other))? == expected, || format!("algebra {i}: {word:?} vs {other:?}"))?;
            }
            // the same lasso as a graph over the unary presentation
            let mut g = Graph::new();
            let z = alg.unary.clone();
            let m = w.omega_names.len() as u32;
            let ids: Vec<usize> =
                word.stem.iter().chain(&word.period).map(|&a| g.add_sym(Elem(m + a as u32))).collect();
            for k in 0..ids.len() {
                let next = if k + 1 < ids.len() { ids[k + 1] } else { ids[word.stem.len()] };
                g.edge(ids[k], z.clone(), next);
            }
            let got = e(alg.hat_pi(&g))?;
            ensure(got == Elem(expected as u32), || format!("algebra {i}: graph product of {word:?} differs"))?;
            words += 1;
        }
    }
    Ok(format!("{} algebras, {words} words, 100 re-presentations each", n(20)))
}

fn c3_omega_enumeration(seed: u64, n: &dyn Fn(usize) -> usize) -> Outcome {
    let min2 = zoo::min2();
    let found = e(min2.enumerate_omega_powers())?;
    let brute = brute_force_omega_tables(&min2);
    ensure(found.len() == 2 && as_set(&found) == as_set(&brute), || {
        format!("MIN2: {} tables, brute force {}", found.len(), brute.len())
    })?;
    let mut r = rng(seed);
    let mut done = 0;
    while done < n(10) {
        let w = random_wilke(&mut r, 2);
        if w.s.len() != 2 || w.omega_names.len() != 2 {
            continue;
        }
        let alg = FinAlgebra::from_omega_semigroup("R", &w, false);
        let found = e(alg.enumerate_omega_powers())?;
        let brute = brute_force_omega_tables(&alg);
        ensure(as_set(&found) == as_set(&brute), || format!("random algebra {done}: {found:?} vs {brute:?}"))?;
        done += 1;
    }
    Ok(format!("MIN2 gives 2 of 4 candidates; {} random 2-element algebras agree", n(10)))
}

fn as_set(tables: &[BTreeMap<Elem, Elem>]) -> BTreeSet<BTreeMap<Elem, Elem>> {
    tables.iter().cloned().collect()
}

fn c4_hat_pi(seed: u64, n: &dyn Fn(usize) -> usize) -> Outcome {
    let mut r = rng(seed);
    let alg = zoo::min2_with_omega(&[("1", "0")]);
    for i in 0..n(50) {
        let g = thin_graph(&mut r, &alg, 12, &["x", "y", "z"]);
        let v = e(alg.hat_pi(&g))?;
        ensure(e(alg.hat_pi(&g.bisim_quotient()))? == v, || format!("graph {i}: quotient changes the value"))?;
        // a graph of finite components whose flattening is again thin
        let outer: Graph<Graph<Elem>> =
            random_thin_graph(&mut r, &shape(6, &["x", "y"], true), &mut |r: &mut ChaCha8Rng, d: &[String]| {
                Graph::from_tree(&term(r, &alg, &Sort::of(d.iter().cloned()), 2))
            });
        let (flat, _) = e(flat_graph(&outer))?;
        ensure(flat.classify() != TreeClass::RegularNonThin, || format!("graph {i}: flattening is not thin"))?;
        let inner = e(outer.try_map(&mut |_, h: &Graph<Elem>| alg.hat_pi(h)))?;
        ensure(e(alg.hat_pi(&inner))? == e(alg.hat_pi(&flat))?, || format!("graph {i}: flattening changes the value"))?;
    }
    Ok(format!("{} thin graphs of at most 12 nodes, quotient and flattening", n(50)))
}

fn c5_splits(seed: u64, n: &dyn Fn(usize) -> usize) -> Outcome {
    let mut r = rng(seed);
    let mut pairs = 0;
    for i in 0..n(100) {
        let s = random_semigroup(&mut r, 4);
        let t = random_labelled_tree(&mut r, &s, 40);
        let split = e(tree_split(&s, &t))?;
        ensure(verify_tree_split(&s, &t, &split.sigma).is_none(), || {
            format!("instance {i}: split fails the verifier")
        })?;
        for (u, v) in t.ancestor_pairs() {
            let got = e(reconstruct(&s, &t, &split.sigma, u, v))?;
            ensure(Some(got) == t.value(&s, u, v), || {
                format!("instance {i}: λ({}, {}) differs", t.names[u], t.names[v])
            })?;
            pairs += 1;
        }
    }
    Ok(format!("{} instances, {pairs} ancestor pairs", n(100)))
}

fn c6_branch_limits(seed: u64, n: &dyn Fn(usize) -> usize) -> Outcome {
    let mut r = rng(seed);
    for i in 0..n(50) {
        let w: OmegaSemigroup = random_wilke(&mut r, 3);
        let g = random_edge_graph(&mut r, &w, 8);
        let got = branch_limits(&w, &g);
        let expected = lasso_limits(&w, &g);
        ensure(got == expected, || format!("graph {i}: {got:?} vs {expected:?}"))?;
    }
    Ok(format!("{} edge-labelled graphs", n(50)))
}

fn c7_evaluations(seed: u64, n: &dyn Fn(usize) -> usize) -> Outcome {
    let mut r = rng(seed);
    let alg = zoo::min2_with_omega(&[("1", "0")]);
    let pool: Vec<String> = (0..64).map(|i| format!("h{i}")).collect();
    for i in 0..n(100) {
        let target: Sort = dirs().into_iter().filter(|_| r.gen_bool(0.3)).collect();
        let t = term(&mut r, &alg, &target, 4);
        if t.is_var() {
            continue;
        }
        let n = r.gen_range(1..=3);
        let mut tau: BTreeMap<Path, usize> = t.inner_vertices().into_iter().map(|p| (p, r.gen_range(0..n))).collect();
        tau.insert(Vec::new(), n - 1);
        let gamma = e(split_to_evaluation(&t, &tau, n, &pool))?;
        let back = e(evaluation_to_split(&gamma))?;
        ensure(back == (t.clone(), tau, n), || format!("instance {i}: round trip differs"))?;
        ensure(e(gamma.term_tree(&alg))? == t, || format!("instance {i}: term differs"))?;
    }
    let rho = FinProduct(&alg);
    let xyz = dirs();
    let mut glued = 0;
    while glued < n(50) {
        let values_shape = nested2(&mut r, &alg, &Sort::empty(), 2);
        let gamma = e(values_shape.try_map(&mut |c: &Tree<Elem>| {
            let tau = c.inner_vertices().into_iter().map(|p| (p, 0)).collect();
            split_to_evaluation(c, &tau, 1, &xyz)
        }))?;
        let values = e(gamma.try_map(&mut |g: &Evaluation| g.val(&alg, &rho)))?;
        let mut tau: BTreeMap<Path, usize> =
            values.inner_vertices().into_iter().map(|p| (p, r.gen_range(0..2))).collect();
        tau.insert(Vec::new(), 1);
        // components of β may have more holes than the variable universe
        let Ok(beta) = split_to_evaluation(&values, &tau, 2, &xyz) else { continue };
        let Ok(bv) = beta.val(&alg, &rho) else { continue };
        let out = e(glue(&alg, &rho, &beta, &gamma))?;
        let terms = e(gamma.try_map(&mut |g: &Evaluation| g.term_tree(&alg)))?;
        ensure(e(out.term_tree(&alg))? == e(flat(&terms))?, || format!("glue {glued}: term is not the flattening"))?;
        ensure(e(out.val(&alg, &rho))? == bv, || format!("glue {glued}: value differs from β"))?;
        glued += 1;
    }
    for i in 0..n(50) {
        let g = thin_graph(&mut r, &alg, 10, &["x", "y", "z"]);
        let gamma = e(build_wilke_evaluation(&alg, &g))?;
        ensure(e(gamma.val(&alg, &HatPi(&alg)))? == e(alg.hat_pi(&g))?, || format!("graph {i}: val ≠ ĥπ"))?;
        ensure(e(gamma.term(&alg))?.same_tree(&g), || format!("graph {i}: term is not the tree"))?;
    }
    Ok(format!("{} round trips, {} glues of depth 2, {} thin evaluations", n(100), n(50), n(50)))
}

fn c8_rewirings(seed: u64, n: &dyn Fn(usize) -> usize) -> Outcome {
    let start = Instant::now();
    let mut r = rng(seed);
    let alg = zoo::min2();
    let (aut, family) = e(witness_family(&alg, "0", "1"))?;
    let bounds = RewiringBounds { max_redirects: 3, ..RewiringBounds::default() };
    let horizon = 8;
    let mut checked = 0;
    for i in 0..n(20) {
        let g = random_thin_graph(&mut r, &shape(8, &["x", "y"], true), &mut |r: &mut ChaCha8Rng, d: &[String]| {
            let v = if r.gen_bool(0.8) { "1" } else { "0" };
            alg.find(v, &Sort::of(d.iter().cloned())).unwrap()
        });
        let value = e(alg.hat_pi(&g))?;
        let rs = e(synthesise_sigma(&aut, family[&value], &g, horizon))?;
        ensure(check_block_constancy(&rs), || format!("instance {i}: σ is not block constant"))?;
        let rws = e(enumerate_rewirings(&g, &rs.unfolding, &rs.sigma, &bounds))?;
        let rep = e(rewiring_preservation(&alg, &g, &rs.unfolding, &rs.sigma, &rws, &HatPi(&alg), 3 * horizon))?;
        ensure(rep.counterexamples.is_empty(), || format!("instance {i}: {:?}", rep.counterexamples[0]))?;
        ensure(rep.path_violations.is_empty(), || format!("instance {i}: {:?}", rep.path_violations[0]))?;
        checked += rep.checked;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs <= 60.0, || format!("took {secs:.1}s"))?;
    Ok(format!("{} thin instances, {checked} rewirings, horizon {horizon}, within 60s", n(20)))
}

fn c9_labellings(seed: u64, n: &dyn Fn(usize) -> usize) -> Outcome {
    let u = zoo::unamb7();
    let a = u.find("a", &Sort::of(["x", "y"])).ok_or("UNAMB7 has no binary a")?;
    let mut g = Graph::new();
    let root = g.add_sym(a);
    g.edge(root, "x", root);
    g.edge(root, "y", root);
    let mut two = Graph::new();
    let n0 = two.add_sym(a);
    let n1 = two.add_sym(a);
    two.edge(n0, "x", n0);
    two.edge(n0, "y", n1);
    two.edge(n1, "x", n1);
    two.edge(n1, "y", n0);
    let mut counts = Vec::new();
    for h in [&g, &two] {
        let all = e(enumerate_consistent(&u, h, Level::Thin, 100))?;
        for l in &all {
            ensure(e(is_weakly_consistent(&u, h, l, Level::Thin))?.is_none(), || {
                "enumerated labelling is inconsistent".into()
            })?;
        }
        counts.push(all.len());
    }
    ensure(counts.iter().any(|&c| c >= 2), || format!("UNAMB7 labellings per presentation: {counts:?}"))?;

    let alg = zoo::min2();
    let full = zoo::Min2Full(&alg);
    let thin = zoo::ThinCheck(&alg);
    let mut r = rng(seed);
    for i in 0..n(20) {
        let h = thin_graph(&mut r, &alg, 8, &["x", "y"]);
        let l1 = e(CanonicalScheme(&full).labelling(&h))?;
        let l2 = e(CanonicalScheme(&thin).labelling(&h))?;
        ensure(l1 == l2, || format!("graph {i}: MIN2 and THINCHK labellings differ"))?;
    }
    let one = alg.find("1", &Sort::of(["x", "y"])).unwrap();
    let mut b = Graph::new();
    let v = b.add_sym(one);
    b.edge(v, "x", v);
    b.edge(v, "y", v);
    let l1 = e(CanonicalScheme(&full).labelling(&b))?;
    let l2 = e(CanonicalScheme(&thin).labelling(&b))?;
    let pair = (alg.name(l1[0].unwrap()).to_string(), alg.name(l2[0].unwrap()).to_string());
    ensure(pair == ("1".into(), "0".into()), || format!("binary 1-tree roots {pair:?}"))?;
    Ok(format!("UNAMB7 labellings {counts:?}; {} thin graphs agree; binary 1-tree gives (1, 0)", n(20)))
}

fn c10_games(seed: u64, n: &dyn Fn(usize) -> usize) -> Outcome {
    let mut r = rng(seed);
    for i in 0..n(500) {
        let n = r.gen_range(1..=8);
        let a = random_arena(&mut r, n);
        let s = solve(&a);
        ensure(s.winner == brute_force(&a), || format!("arena {i}: {a:?}"))?;
        ensure(check_solution(&a, &s), || format!("arena {i}: strategy does not win"))?;
    }
    for (alg, witness, other) in [(zoo::contains_a(), "1", "0"), (zoo::min2(), "0", "1")] {
        let (aut, family) = e(witness_family(&alg, witness, other))?;
        for i in 0..n(20) {
            let g = thin_graph(&mut r, &alg, 8, &["x", "y", "z"]);
            let got = e(automaton_product(&alg, &family, &aut, &g))?;
            ensure(got == e(alg.hat_pi(&g))?, || format!("{} graph {i}: automaton product ≠ ĥπ", alg.name))?;
        }
    }
    let alg = zoo::min2();
    let (aut, _) = e(witness_family(&alg, "0", "1"))?;
    for i in 0..n(50) {
        let g = any_graph(&mut r, &alg, 8, &["x", "y"]);
        let v = e(aut.accepts(&g))?;
        ensure(e(aut.accepts(&g.bisim_quotient()))? == v, || format!("graph {i}: quotient changes acceptance"))?;
        ensure(e(aut.accepts(&doubled(&mut r, &g)))? == v, || format!("graph {i}: doubling changes acceptance"))?;
    }
    Ok(format!("{} arenas; 2 × {} automaton products; {} bisimulation checks", n(500), n(20), n(50)))
}

fn c11_ordered(seed: u64, n: &dyn Fn(usize) -> usize) -> Outcome {
    let mut r = rng(seed);
    let ta = e(make_ta(&OmegaSemigroup::min_omega(), &zoo::universe(), "z"))?;
    for i in 0..n(30) {
        let g = thin_graph(&mut r, &ta.alg, 8, &["x", "y", "z"]);
        let a = e(TaPath(&ta).value(&g))?;
        ensure(a == e(HatPi(&ta.alg).value(&g))?, || format!("graph {i}: path-following ≠ ĥπ"))?;
    }
    let alg = zoo::min2();
    let ups = |s: &Sort, r: &mut ChaCha8Rng| -> BTreeSet<Elem> {
        let names: &[&str] = if r.gen_bool(0.5) { &["1"] } else { &["0", "1"] };
        names.iter().map(|n| alg.find(n, s).unwrap()).collect()
    };
    let suite: Vec<UpSetTree> = (0..30)
        .map(|_| {
            random_thin_graph(&mut r, &shape(6, &["x", "y"], true), &mut |r: &mut ChaCha8Rng, d: &[String]| {
                ups(&Sort::of(d.iter().cloned()), r)
            })
        })
        .collect();
    ensure(e(check_meet_distributive(&alg, &HatPi(&alg), &suite, 1 << 12))?.is_none(), || {
        "MIN2 fails distributivity".into()
    })?;
    let xor = zoo::xor2();
    let mut t: UpSetTree = Graph::new();
    let root = t.add_sym([xor.find("1", &Sort::of(["x"])).unwrap()].into());
    let leaf = t.add_sym(xor.elems_of(&Sort::empty()).into_iter().collect());
    t.edge(root, "x", leaf);
    let v = e(check_meet_distributive(&xor, &FinProduct(&xor), &[t], 1 << 12))?;
    let v = v.ok_or("XOR2 passes distributivity")?;
    for i in 0..n(20) {
        let p = random_poset(&mut r, 6);
        ensure(closure_law_violation(&p).is_none(), || format!("poset {i}: {:?}", closure_law_violation(&p)))?;
    }
    Ok(format!(
        "{} TA graphs; MIN2 distributive on 30 trees; XOR2 {} vs {}; {} posets",
        n(30),
        xor.name(v.product_of_meets),
        xor.name(v.meet_of_products),
        n(20)
    ))
}

type Suite = fn(u64, &dyn Fn(usize) -> usize) -> Outcome;

/// The criteria in order: number, title, suite.
pub const CRITERIA: [(usize, &str, Suite); 11] = [
    (1, "monad and substitution laws", c1_monad_laws),
    (2, "Wilke lasso presentations", c2_wilke_presentations),
    (3, "omega-power enumeration", c3_omega_enumeration),
    (4, "hat-pi quotient and flattening", c4_hat_pi),
    (5, "tree splits and reconstruction", c5_splits),
    (6, "branch limits", c6_branch_limits),
    (7, "evaluations", c7_evaluations),
    (8, "rewirings", c8_rewirings),
    (9, "labellings", c9_labellings),
    (10, "games and automata", c10_games),
    (11, "ordered algebras", c11_ordered),
];

/// Verdict of one suite run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub criterion: usize,
    pub title: String,
    pub passed: bool,
    pub detail: String,
}

/// Runs criterion `k`. The generator is seeded with `1000 * seed + k`;
/// `size` replaces every instance count of the suite.
pub fn run(k: usize, seed: u64, size: Option<usize>) -> Option<SuiteReport> {
    let (_, title, suite) = CRITERIA.iter().find(|c| c.0 == k)?;
    let n = move |default: usize| size.unwrap_or(default);
    let outcome = std::panic::catch_unwind(|| suite(seed.wrapping_mul(1000).wrapping_add(k as u64), &n))
        .unwrap_or_else(|p| Err(panic_message(p)));
    let (passed, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Some(SuiteReport { criterion: k, title: title.to_string(), passed, detail })
}

fn panic_message(p: Box<dyn std::any::Any + Send>) -> String {
    let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
    format!("panicked: {}", msg.unwrap_or_default())
}
