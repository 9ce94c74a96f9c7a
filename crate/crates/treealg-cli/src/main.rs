use std::collections::BTreeMap;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use treealg::algebra::{Elem, FinAlgebra, FinProduct, HatPi, TreeProduct};
use treealg::automaton::{automaton_product, witness_family};
use treealg::condensation::{check_pi_consistent, check_uniform, choice_count, pi_consistent};
use treealg::evaluation::{build_wilke_evaluation, glue, Evaluation};
use treealg::games::{brute_force, check_solution, solve};
use treealg::graph::{Graph, TreeClass};
use treealg::io;
use treealg::labelling::{enumerate_consistent, is_unambiguous, named, Level};
use treealg::ordered::{check_meet_distributive, make_ta, TaPath};
use treealg::rewiring::{
    check_block_constancy, enumerate_rewirings, rewiring_preservation, synthesise_sigma, RewiringBounds,
};
use treealg::semigroup::{FinSemigroup, OmegaSemigroup};
use treealg::sort::Sort;
use treealg::splits::{branch_limits, reconstruct, tree_split, verify_tree_split, LabelledTree};
use treealg::suites;
use treealg::zoo;

const SCENARIOS: &str = "\
Exit codes: 0 verdict ok, 1 verdict failed (a counterexample is reported), 2 input error.

Acceptance scenarios (each is one invocation; --seed and --size vary the suites):
  1  monad and substitution laws      treealg laws --criterion 1
  2  Wilke lasso presentations        treealg laws --criterion 2
  3  omega-power enumeration          treealg laws --criterion 3
                                      treealg expand-wilke --zoo MIN2
  4  hat-pi quotient and flattening   treealg laws --criterion 4
  5  tree splits and reconstruction   treealg laws --criterion 5
                                      treealg reconstruct --semigroup data/min2-omega.json --tree data/shape.json --labelling data/edges.json
  6  branch limits                    treealg laws --criterion 6
                                      treealg limits --semigroup data/min2-omega.json --graph data/edge-lasso.json
  7  evaluations                      treealg laws --criterion 7
                                      treealg evaluate --zoo MIN2 --graph data/comb.json
  8  rewirings                        treealg laws --criterion 8
                                      treealg rewire --zoo MIN2 --graph data/comb.json --horizon 8
  9  labellings                       treealg laws --criterion 9
                                      treealg labellings --zoo UNAMB7 --graph data/atree2.json --level thin
  10 games and automata               treealg laws --criterion 10
                                      treealg game --arena data/arena.json
  11 ordered algebras                 treealg laws --criterion 11
                                      treealg distributivity --zoo XOR2 --graph data/upsets.json
  all criteria                        treealg laws --criterion all --jobs 4

Without --algebra or --zoo, commands that need an algebra read it from stdin:
  treealg zoo MIN2 | treealg hatpi --graph data/lasso1.json --omega 1:0";

#[derive(Parser)]
#[command(name = "treealg", version, about = "Finite tree algebras on regular trees", after_help = SCENARIOS)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    /// Algebra file ("-" for stdin)
    #[arg(long, global = true)]
    algebra: Option<PathBuf>,
    /// Example algebra by name instead of a file
    #[arg(long, global = true)]
    zoo: Option<String>,
    /// Graph file; repeatable where a suite of graphs is accepted
    #[arg(long, global = true)]
    graph: Vec<PathBuf>,
    /// Finite tree file
    #[arg(long, global = true)]
    tree: Option<PathBuf>,
    #[arg(long, global = true)]
    automaton: Option<PathBuf>,
    /// Node labelling, or edge labelling for split commands
    #[arg(long, global = true)]
    labelling: Option<PathBuf>,
    #[arg(long, global = true)]
    split: Option<PathBuf>,
    /// Semigroup or omega-semigroup file
    #[arg(long, global = true)]
    semigroup: Option<PathBuf>,
    /// Evaluation file
    #[arg(long, global = true)]
    evaluation: Option<PathBuf>,
    /// Parity game file
    #[arg(long, global = true)]
    arena: Option<PathBuf>,
    /// Consistency level: fin or thin
    #[arg(long, global = true, default_value = "thin")]
    level: Level,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Instance count replacing the defaults of a suite
    #[arg(long, global = true)]
    size: Option<usize>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for independent suites
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Override omega powers, e.g. "1:0,0:0" (unary value : nullary value)
    #[arg(long, global = true)]
    omega: Option<String>,
    /// Cap on enumerated choices, members or labellings
    #[arg(long, global = true, default_value_t = 1 << 16)]
    cap: usize,
    /// Unfolding depth for rewirings
    #[arg(long, global = true, default_value_t = 8)]
    horizon: usize,
    /// Maximum redirections per rewiring
    #[arg(long, global = true, default_value_t = 3)]
    redirects: usize,
    /// Witness value of the automaton family (rewire, game)
    #[arg(long, global = true)]
    witness: Option<String>,
    /// The other value of the automaton family
    #[arg(long, global = true)]
    other: Option<String>,
    /// Ancestor node for reconstruct
    #[arg(long, global = true)]
    from: Option<String>,
    /// Descendant node for reconstruct
    #[arg(long, global = true)]
    to: Option<String>,
    /// Acceptance criterion for laws: a number or "all"
    #[arg(long, global = true)]
    criterion: Option<String>,
    /// Include wall-clock timings (reports are then not byte-stable)
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Product of a finite tree (--tree)
    Product,
    /// Product of a thin regular graph (--graph), optionally with --omega
    Hatpi,
    /// Finite, thin regular or regular non-thin; rank and quotient size
    Classify,
    /// All lawful omega-power tables of the algebra
    ExpandWilke,
    /// Weak Ramseyan split of an edge-labelled tree
    Split,
    /// Check a split (--split) of an edge-labelled tree
    VerifySplit,
    /// Factor values from a split versus the direct products
    Reconstruct,
    /// Branch limits of an edge-labelled graph (--graph) over --semigroup
    Limits,
    /// Wilke evaluation of a thin graph, with its value
    Evaluate,
    /// Glue an evaluation (--evaluation) with a tree of evaluations (--graph)
    Glue,
    /// Uniformity and consistency of a condensation (--graph)
    Condense,
    /// Rewirings of a thin graph along a synthesised split
    Rewire,
    /// Consistent labellings of a graph at --level
    Labellings,
    /// Whether every graph has at most one consistent labelling
    Unambiguous,
    /// Solve a parity game (--arena) or run an automaton on a graph
    Game,
    /// TA path-following product versus hat-pi (--semigroup, --graph)
    Ta,
    /// Meet-distributivity on up-set trees (--graph, repeatable)
    Distributivity,
    /// Algebra laws, or an acceptance suite with --criterion
    Laws,
    /// Print an example algebra
    Zoo {
        /// MIN2, CONTAINS_A, MAXN(n), XOR2, UNAMB7, BTYPE(x,y), THINCHK
        name: Option<String>,
    },
}

enum Failure {
    Input(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure::Input(e.to_string())
    }
}

type Out = Result<(bool, Value), Failure>;

fn input(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

struct Ctx {
    opts: Opts,
    inputs: BTreeMap<String, Value>,
    stdin_used: bool,
}

impl Ctx {
    fn read(&mut self, role: &str, path: &Path) -> Result<String, Failure> {
        let text = if path == Path::new("-") {
            if self.stdin_used {
                return Err(input("stdin can feed only one input"));
            }
            self.stdin_used = true;
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| input(format!("stdin: {e}")))?;
            s
        } else {
            std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?
        };
        let digest = format!("{:x}", Sha256::digest(text.as_bytes()));
        let entry = json!({"path": path.display().to_string(), "sha256": digest});
        match self.inputs.get_mut(role) {
            Some(Value::Array(list)) => list.push(entry),
            Some(prev) => *prev = json!([prev.clone(), entry]),
            None => {
                self.inputs.insert(role.to_string(), entry);
            }
        }
        Ok(text)
    }

    fn need(&mut self, role: &str, path: &Option<PathBuf>) -> Result<String, Failure> {
        let p = path.clone().ok_or_else(|| input(format!("--{role} is required")))?;
        self.read(role, &p)
    }

    fn algebra(&mut self) -> Result<FinAlgebra, Failure> {
        let mut alg = match (&self.opts.zoo, self.opts.algebra.clone()) {
            (Some(name), _) => {
                self.inputs.insert("algebra".into(), json!({"zoo": name}));
                zoo::by_name(name)?
            }
            (None, path) => {
                let text = self.read("algebra", &path.unwrap_or_else(|| PathBuf::from("-")))?;
                io::read_algebra(&text)?
            }
        };
        if let Some(spec) = &self.opts.omega {
            let mut table = alg.omega.clone().unwrap_or_default();
            for pair in spec.split(',').filter(|p| !p.trim().is_empty()) {
                let (a, b) = pair.split_once(':').ok_or_else(|| input(format!("--omega entry {pair} is not a:b")))?;
                let a = alg.resolve(a.trim(), Some(&alg.unary_sort()))?;
                let b = alg.resolve(b.trim(), Some(&Sort::empty()))?;
                table.insert(a, b);
            }
            alg.omega = Some(table);
        }
        Ok(alg)
    }

    fn graph(&mut self, alg: &FinAlgebra) -> Result<Graph<Elem>, Failure> {
        let path = self.opts.graph.first().cloned().ok_or_else(|| input("--graph is required"))?;
        Ok(io::read_graph(alg, &self.read("graph", &path)?)?)
    }

    fn graphs(&mut self) -> Result<Vec<String>, Failure> {
        if self.opts.graph.is_empty() {
            return Err(input("--graph is required"));
        }
        self.opts.graph.clone().iter().map(|p| self.read("graph", p)).collect()
    }

    fn semigroup(&mut self) -> Result<(FinSemigroup, Option<OmegaSemigroup>), Failure> {
        let text = self.need("semigroup", &self.opts.semigroup.clone())?;
        Ok(io::read_semigroup(&text)?)
    }

    fn omega_semigroup(&mut self) -> Result<OmegaSemigroup, Failure> {
        self.semigroup()?.1.ok_or_else(|| input("the semigroup file has no omega and mixed tables"))
    }

    fn labelled_tree(&mut self, s: &FinSemigroup) -> Result<LabelledTree, Failure> {
        let shape = io::read_shape(&self.need("tree", &self.opts.tree.clone())?)?;
        let labels = self.need("labelling", &self.opts.labelling.clone())?;
        Ok(io::read_labelled_tree(&shape, s, &labels)?)
    }
}

fn class_name(c: TreeClass) -> &'static str {
    match c {
        TreeClass::Finite => "finite",
        TreeClass::ThinRegular => "thin-regular",
        TreeClass::RegularNonThin => "regular-non-thin",
    }
}

fn family(alg: &FinAlgebra, opts: &Opts) -> (String, String) {
    let (w, o) = if alg.name == "CONTAINS_A" { ("1", "0") } else { ("0", "1") };
    (opts.witness.clone().unwrap_or_else(|| w.into()), opts.other.clone().unwrap_or_else(|| o.into()))
}

fn run(cmd: &Cmd, cx: &mut Ctx) -> Out {
    match cmd {
        Cmd::Zoo { name } => match name {
            Some(n) => Ok((true, io::algebra_json(&zoo::by_name(n)?))),
            None => Ok((
                true,
                json!({"algebras": ["MIN2", "CONTAINS_A", "MAXN(n)", "XOR2", "UNAMB7", "BTYPE(x,y)", "THINCHK"]}),
            )),
        },
        Cmd::Product => {
            let alg = cx.algebra()?;
            let text = cx.need("tree", &cx.opts.tree.clone())?;
            let g = io::read_graph(&alg, &text)?;
            let t = g.to_tree().ok_or_else(|| input("the tree file has a cycle; use hatpi for regular trees"))?;
            let v = alg.product_fin(&t)?;
            Ok((true, json!({"value": alg.display(v), "sort": alg.sort(v).key()})))
        }
        Cmd::Hatpi => {
            let alg = cx.algebra()?;
            let g = cx.graph(&alg)?;
            let v = alg.hat_pi(&g)?;
            Ok((true, json!({"value": alg.display(v), "sort": alg.sort(v).key(), "class": class_name(g.classify())})))
        }
        Cmd::Classify => {
            let path = cx.opts.graph.first().cloned().ok_or_else(|| input("--graph is required"))?;
            let g = io::read_shape(&cx.read("graph", &path)?)?;
            Ok((
                true,
                json!({
                    "class": class_name(g.classify()),
                    "nodes": g.len(),
                    "quotient_nodes": g.bisim_quotient().len(),
                    "cb_rank": g.cb_rank(),
                }),
            ))
        }
        Cmd::ExpandWilke => {
            let alg = cx.algebra()?;
            let tables: Vec<BTreeMap<String, String>> = alg
                .enumerate_omega_powers()?
                .iter()
                .map(|t| t.iter().map(|(a, b)| (alg.display(*a), alg.display(*b))).collect())
                .collect();
            Ok((true, json!({"count": tables.len(), "tables": tables})))
        }
        Cmd::Split => {
            let (s, _) = cx.semigroup()?;
            let t = cx.labelled_tree(&s)?;
            let split = tree_split(&s, &t)?;
            let verified = verify_tree_split(&s, &t, &split.sigma).is_none();
            let mut out = io::split_json(&t.names, &split);
            out["verified"] = json!(verified);
            Ok((verified, out))
        }
        Cmd::VerifySplit => {
            let (s, _) = cx.semigroup()?;
            let t = cx.labelled_tree(&s)?;
            let split = io::read_split(&t.names, &cx.need("split", &cx.opts.split.clone())?)?;
            match verify_tree_split(&s, &t, &split.sigma) {
                None => Ok((true, json!({"valid": true}))),
                Some(v) => {
                    let at = |i: usize| t.names.get(i).cloned().unwrap_or_default();
                    Ok((
                        false,
                        json!({"valid": false, "violation": {"x": at(v.x), "y": at(v.y), "x2": at(v.x2), "y2": at(v.y2)}}),
                    ))
                }
            }
        }
        Cmd::Reconstruct => {
            let (s, _) = cx.semigroup()?;
            let t = cx.labelled_tree(&s)?;
            let sigma = match cx.opts.split.clone() {
                Some(p) => io::read_split(&t.names, &cx.read("split", &p)?)?.sigma,
                None => tree_split(&s, &t)?.sigma,
            };
            let node = |n: &str| t.names.iter().position(|m| m == n).ok_or_else(|| input(format!("unknown node {n}")));
            let pairs = match (&cx.opts.from, &cx.opts.to) {
                (Some(u), Some(v)) => vec![(node(u)?, node(v)?)],
                (None, None) => t.ancestor_pairs(),
                _ => return Err(input("give both --from and --to, or neither")),
            };
            let mut rows = Vec::new();
            let mut ok = true;
            for (u, v) in pairs {
                let got = reconstruct(&s, &t, &sigma, u, v)?;
                let direct = t.value(&s, u, v).expect("ancestor pairs have a path");
                ok &= got == direct;
                rows.push(
                    json!({"from": t.names[u], "to": t.names[v], "value": s.names[got], "direct": s.names[direct]}),
                );
            }
            Ok((ok, json!({"pairs": rows, "agree": ok})))
        }
        Cmd::Limits => {
            let w = cx.omega_semigroup()?;
            let path = cx.opts.graph.first().cloned().ok_or_else(|| input("--graph is required"))?;
            let (g, _) = io::read_edge_graph(&w, &cx.read("graph", &path)?)?;
            let limits: Vec<&String> = branch_limits(&w, &g).into_iter().map(|c| &w.omega_names[c]).collect();
            Ok((true, json!({"limits": limits})))
        }
        Cmd::Evaluate => {
            let alg = cx.algebra()?;
            let g = cx.graph(&alg)?;
            let gamma = build_wilke_evaluation(&alg, &g)?;
            let val = gamma.val(&alg, &HatPi(&alg))?;
            let direct = alg.hat_pi(&g)?;
            let term_ok = gamma.term(&alg)?.same_tree(&g);
            Ok((
                val == direct && term_ok,
                json!({
                    "evaluation": io::evaluation_json(&alg, &gamma),
                    "depth": gamma.depth(),
                    "value": alg.display(val),
                    "hatpi": alg.display(direct),
                    "term_is_tree": term_ok,
                }),
            ))
        }
        Cmd::Glue => {
            let alg = cx.algebra()?;
            let beta = io::read_evaluation(&alg, &cx.need("evaluation", &cx.opts.evaluation.clone())?)?;
            let path = cx.opts.graph.first().cloned().ok_or_else(|| input("--graph is required"))?;
            let Evaluation::Nest(g) = io::read_evaluation(&alg, &cx.read("graph", &path)?)? else {
                return Err(input("--graph must hold a tree of evaluations"));
            };
            let gamma = g.to_tree().ok_or_else(|| input("the tree of evaluations has a cycle"))?;
            let rho = FinProduct(&alg);
            let out = glue(&alg, &rho, &beta, &gamma)?;
            let terms = gamma.try_map(&mut |e: &Evaluation| e.term_tree(&alg))?;
            let term_ok = out.term_tree(&alg)? == treealg::tree::flat(&terms)?;
            let value_ok = out.val(&alg, &rho)? == beta.val(&alg, &rho)?;
            Ok((
                term_ok && value_ok,
                json!({"evaluation": io::evaluation_json(&alg, &out), "term_is_flattening": term_ok, "value_preserved": value_ok}),
            ))
        }
        Cmd::Condense => {
            let alg = cx.algebra()?;
            let path = cx.opts.graph.first().cloned().ok_or_else(|| input("--graph is required"))?;
            let s = io::read_condensation(&alg, &cx.read("graph", &path)?)?;
            let cap = cx.opts.cap;
            let hp = HatPi(&alg);
            let uniform = check_uniform(&alg, &s, cap)?;
            let consistent = check_pi_consistent(&alg, &s, &hp, cap)?;
            let mut out = json!({"choices": choice_count(&s), "uniform": uniform, "pi_consistent": consistent});
            if consistent {
                out["value"] = json!(alg.display(pi_consistent(&alg, &s, &hp, cap)?));
            }
            Ok((consistent, out))
        }
        Cmd::Rewire => {
            let alg = cx.algebra()?;
            let g = cx.graph(&alg)?;
            let (w, o) = family(&alg, &cx.opts);
            let (aut, fam) = witness_family(&alg, &w, &o)?;
            let value = alg.hat_pi(&g)?;
            let horizon = cx.opts.horizon;
            let rs = synthesise_sigma(&aut, fam[&value], &g, horizon)?;
            let bounds = RewiringBounds { max_redirects: cx.opts.redirects, ..RewiringBounds::default() };
            let rws = enumerate_rewirings(&g, &rs.unfolding, &rs.sigma, &bounds)?;
            let rep = rewiring_preservation(&alg, &g, &rs.unfolding, &rs.sigma, &rws, &HatPi(&alg), 3 * horizon)?;
            let constant = check_block_constancy(&rs);
            Ok((
                rep.ok() && constant,
                json!({
                    "value": alg.display(value),
                    "levels": rs.n,
                    "unfolding_vertices": rs.unfolding.len(),
                    "block_constant": constant,
                    "report": rep,
                }),
            ))
        }
        Cmd::Labellings => {
            let alg = cx.algebra()?;
            let g = cx.graph(&alg)?;
            let all = enumerate_consistent(&alg, &g, cx.opts.level, cx.opts.cap)?;
            let list: Vec<BTreeMap<String, String>> = all.iter().map(|l| named(&alg, &g, l)).collect();
            Ok((true, json!({"level": cx.opts.level.to_string(), "count": list.len(), "labellings": list})))
        }
        Cmd::Unambiguous => {
            let alg = cx.algebra()?;
            let suite = cx.graphs()?.iter().map(|t| io::read_graph(&alg, t)).collect::<treealg::Result<Vec<_>>>()?;
            let u = is_unambiguous(&alg, &suite, cx.opts.level)?;
            let witnesses: Vec<Value> = u
                .witnesses
                .iter()
                .map(|(i, a, b)| json!({"graph": i, "first": named(&alg, &suite[*i], a), "second": named(&alg, &suite[*i], b)}))
                .collect();
            Ok((u.unambiguous, json!({"unambiguous": u.unambiguous, "counts": u.counts, "witnesses": witnesses})))
        }
        Cmd::Game => {
            if let Some(p) = cx.opts.arena.clone() {
                let (a, names) = io::read_arena(&cx.read("arena", &p)?)?;
                let sol = solve(&a);
                let mut out = io::solution_json(&names, &sol);
                let ok = check_solution(&a, &sol);
                out["strategy_checked"] = json!(ok);
                if a.len() <= 10 {
                    let agrees = brute_force(&a) == sol.winner;
                    out["brute_force_agrees"] = json!(agrees);
                    return Ok((ok && agrees, out));
                }
                return Ok((ok, out));
            }
            let alg = cx.algebra()?;
            let g = cx.graph(&alg)?;
            if let Some(p) = cx.opts.automaton.clone() {
                let aut = io::read_automaton(&alg, &cx.read("automaton", &p)?)?;
                return Ok((true, json!({"accepts": aut.accepts(&g)?})));
            }
            let (w, o) = family(&alg, &cx.opts);
            let (aut, fam) = witness_family(&alg, &w, &o)?;
            let v = automaton_product(&alg, &fam, &aut, &g)?;
            let mut out = json!({"value": alg.display(v)});
            if g.classify() != TreeClass::RegularNonThin && alg.omega.is_some() {
                let h = alg.hat_pi(&g)?;
                out["hatpi"] = json!(alg.display(h));
                return Ok((h == v, out));
            }
            Ok((true, out))
        }
        Cmd::Ta => {
            let w = cx.omega_semigroup()?;
            let ta = make_ta(&w, &zoo::universe(), "z")?;
            let g = cx.graph(&ta.alg)?;
            let a = TaPath(&ta).value(&g)?;
            let b = HatPi(&ta.alg).value(&g)?;
            Ok((a == b, json!({"path_following": ta.alg.display(a), "hatpi": ta.alg.display(b)})))
        }
        Cmd::Distributivity => {
            let alg = cx.algebra()?;
            let suite =
                cx.graphs()?.iter().map(|t| io::read_upset_graph(&alg, t)).collect::<treealg::Result<Vec<_>>>()?;
            let hp = HatPi(&alg);
            let fp = FinProduct(&alg);
            let rho: &dyn TreeProduct = if alg.omega.is_some() { &hp } else { &fp };
            match check_meet_distributive(&alg, rho, &suite, cx.opts.cap)? {
                None => Ok((true, json!({"distributive": true, "instances": suite.len()}))),
                Some(v) => Ok((
                    false,
                    json!({
                        "distributive": false,
                        "instance": v.instance,
                        "product_of_meets": alg.display(v.product_of_meets),
                        "meet_of_products": alg.display(v.meet_of_products),
                    }),
                )),
            }
        }
        Cmd::Laws => match cx.opts.criterion.clone() {
            Some(c) => run_suites(&c, &cx.opts),
            None => {
                let alg = cx.algebra()?;
                let mut out = json!({});
                let mut ok = true;
                match alg.check_laws() {
                    None => out["substitution"] = json!("ok"),
                    Some(v) => {
                        ok = false;
                        out["substitution"] = json!(format!("{v:?}"));
                    }
                }
                if alg.omega.is_some() {
                    let (w, _, _) = alg.to_wilke()?;
                    match w.check_wilke_laws() {
                        None => out["wilke"] = json!("ok"),
                        Some(v) => {
                            ok = false;
                            out["wilke"] = json!(v);
                        }
                    }
                }
                Ok((ok, out))
            }
        },
    }
}

fn run_suites(which: &str, opts: &Opts) -> Out {
    let ks: Vec<usize> = if which == "all" {
        suites::CRITERIA.iter().map(|c| c.0).collect()
    } else {
        vec![which.parse().map_err(|_| input(format!("criterion {which} is not a number or \"all\"")))?]
    };
    if let Some(&k) = ks.iter().find(|&&k| !suites::CRITERIA.iter().any(|c| c.0 == k)) {
        return Err(input(format!("there is no criterion {k}")));
    }
    let jobs = opts.jobs.max(1);
    let mut reports = vec![None; ks.len()];
    std::thread::scope(|scope| {
        let chunks: Vec<Vec<(usize, usize)>> =
            (0..jobs).map(|j| ks.iter().copied().enumerate().skip(j).step_by(jobs).collect()).collect();
        let handles: Vec<_> = chunks
            .into_iter()
            .map(|chunk| {
                scope.spawn(move || {
                    chunk.into_iter().map(|(i, k)| (i, suites::run(k, opts.seed, opts.size))).collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("suite threads do not panic") {
                reports[i] = r;
            }
        }
    });
    let reports: Vec<suites::SuiteReport> = reports.into_iter().flatten().collect();
    let ok = reports.iter().all(|r| r.passed);
    Ok((ok, json!({"seed": opts.seed, "size": opts.size, "criteria": reports})))
}

fn command_name(cmd: &Cmd) -> String {
    let s = match cmd {
        Cmd::Product => "product",
        Cmd::Hatpi => "hatpi",
        Cmd::Classify => "classify",
        Cmd::ExpandWilke => "expand-wilke",
        Cmd::Split => "split",
        Cmd::VerifySplit => "verify-split",
        Cmd::Reconstruct => "reconstruct",
        Cmd::Limits => "limits",
        Cmd::Evaluate => "evaluate",
        Cmd::Glue => "glue",
        Cmd::Condense => "condense",
        Cmd::Rewire => "rewire",
        Cmd::Labellings => "labellings",
        Cmd::Unambiguous => "unambiguous",
        Cmd::Game => "game",
        Cmd::Ta => "ta",
        Cmd::Distributivity => "distributivity",
        Cmd::Laws => "laws",
        Cmd::Zoo { .. } => "zoo",
    };
    s.to_string()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.cmd);
    let start = Instant::now();
    let mut cx = Ctx { opts: cli.opts, inputs: BTreeMap::new(), stdin_used: false };
    let outcome = run(&cli.cmd, &mut cx);
    let (code, report) = match outcome {
        Ok((ok, result)) => {
            // zoo prints the bare algebra so that it can be piped into other commands
            if name == "zoo" {
                (0, result)
            } else {
                let verdict = if ok { "ok" } else { "fail" };
                (u8::from(!ok), json!({"command": name, "inputs": cx.inputs, "verdict": verdict, "result": result}))
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("treealg {name}: {msg}");
            (2, json!({"command": name, "inputs": cx.inputs, "verdict": "error", "error": msg}))
        }
    };
    let mut report = report;
    if cx.opts.timings {
        report["seconds"] = json!(start.elapsed().as_secs_f64());
    }
    let text = io::to_text(&report);
    match &cx.opts.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, text) {
                eprintln!("treealg {name}: {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code)
}
