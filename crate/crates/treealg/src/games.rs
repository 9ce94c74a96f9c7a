//! Finite parity games under the min-parity condition: Even wins an infinite
//! play iff the least priority seen infinitely often is even, and a player
//! who cannot move loses.

use std::collections::BTreeSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum Player {
    Even,
    Odd,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Even => Player::Odd,
            Player::Odd => Player::Even,
        }
    }

    pub fn of_priority(p: usize) -> Player {
        if p.is_multiple_of(2) {
            Player::Even
        } else {
            Player::Odd
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arena {
    pub owner: Vec<Player>,
    pub priority: Vec<usize>,
    pub succ: Vec<Vec<usize>>,
}

/// Winning regions and a positional strategy for each winner on the
/// positions it owns (`None` at dead ends and positions it does not own).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub winner: Vec<Player>,
    pub strategy: Vec<Option<usize>>,
}

impl Arena {
    pub fn new() -> Arena {
        Arena { owner: Vec::new(), priority: Vec::new(), succ: Vec::new() }
    }

    pub fn add(&mut self, owner: Player, priority: usize) -> usize {
        self.owner.push(owner);
        self.priority.push(priority);
        self.succ.push(Vec::new());
        self.owner.len() - 1
    }

    pub fn edge(&mut self, from: usize, to: usize) {
        if !self.succ[from].contains(&to) {
            self.succ[from].push(to);
        }
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }
}

impl Default for Arena {
    fn default() -> Self {
        Arena::new()
    }
}

/// Attractor of `target` for `p` inside `sub`, with the attracting moves.
fn attractor(a: &Arena, sub: &[bool], target: &[usize], p: Player, strategy: &mut [Option<usize>]) -> Vec<bool> {
    let n = a.len();
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut out_deg = vec![0usize; n];
    for v in (0..n).filter(|&v| sub[v]) {
        for &w in a.succ[v].iter().filter(|&&w| sub[w]) {
            pred[w].push(v);
            out_deg[v] += 1;
        }
    }
    let mut inside = vec![false; n];
    let mut queue: Vec<usize> = Vec::new();
    for &t in target {
        if sub[t] && !inside[t] {
            inside[t] = true;
            queue.push(t);
        }
    }
    while let Some(w) = queue.pop() {
        for &v in &pred[w] {
            if inside[v] {
                continue;
            }
            if a.owner[v] == p {
                inside[v] = true;
                strategy[v] = Some(w);
                queue.push(v);
            } else {
                out_deg[v] -= 1;
                if out_deg[v] == 0 {
                    inside[v] = true;
                    queue.push(v);
                }
            }
        }
    }
    inside
}

/// Recursive attractor decomposition on the subgame `sub`, which must have
/// no dead ends. Returns Even's winning region and fills `strategy` for both
/// players on their winning regions.
fn zielonka(a: &Arena, sub: &[bool], strategy: &mut [Option<usize>]) -> Vec<bool> {
    let n = a.len();
    let nodes: Vec<usize> = (0..n).filter(|&v| sub[v]).collect();
    if nodes.is_empty() {
        return vec![false; n];
    }
    let p = nodes.iter().map(|&v| a.priority[v]).min().unwrap();
    let player = Player::of_priority(p);
    let top: Vec<usize> = nodes.iter().copied().filter(|&v| a.priority[v] == p).collect();
    let mut attr_strategy = vec![None; n];
    let attr = attractor(a, sub, &top, player, &mut attr_strategy);
    let rest: Vec<bool> = (0..n).map(|v| sub[v] && !attr[v]).collect();
    let mut sub_strategy = vec![None; n];
    let even_rest = zielonka(a, &rest, &mut sub_strategy);
    let opp_rest: Vec<usize> = (0..n).filter(|&v| rest[v] && (even_rest[v] != (player == Player::Even))).collect();
    if opp_rest.is_empty() {
        for &v in &nodes {
            if a.owner[v] != player {
                continue;
            }
            strategy[v] = if rest[v] {
                sub_strategy[v]
            } else if let Some(w) = attr_strategy[v] {
                Some(w)
            } else {
                a.succ[v].iter().copied().find(|&w| sub[w])
            };
        }
        return (0..n).map(|v| sub[v] && player == Player::Even).collect();
    }
    let opp = player.opponent();
    let mut opp_strategy = vec![None; n];
    let b = attractor(a, sub, &opp_rest, opp, &mut opp_strategy);
    let remaining: Vec<bool> = (0..n).map(|v| sub[v] && !b[v]).collect();
    let mut rem_strategy = vec![None; n];
    let even_rem = zielonka(a, &remaining, &mut rem_strategy);
    for &v in &nodes {
        if remaining[v] {
            strategy[v] = rem_strategy[v];
        } else if a.owner[v] == opp {
            strategy[v] = if opp_strategy[v].is_some() { opp_strategy[v] } else { sub_strategy[v] };
        }
    }
    (0..n).map(|v| if remaining[v] { even_rem[v] } else { sub[v] && opp == Player::Even }).collect()
}

/// Solves the game by recursive attractor decomposition. Dead ends are
/// first attracted to their owner's opponent.
pub fn solve(a: &Arena) -> Solution {
    let n = a.len();
    let all = vec![true; n];
    let mut strategy = vec![None; n];
    let mut winner = vec![Player::Even; n];
    let dead: Vec<usize> = (0..n).filter(|&v| a.succ[v].is_empty()).collect();
    let lose_even: Vec<usize> = dead.iter().copied().filter(|&v| a.owner[v] == Player::Even).collect();
    let lose_odd: Vec<usize> = dead.iter().copied().filter(|&v| a.owner[v] == Player::Odd).collect();
    let odd_attr = attractor(a, &all, &lose_even, Player::Odd, &mut strategy);
    let live: Vec<bool> = (0..n).map(|v| !odd_attr[v]).collect();
    let even_attr = attractor(a, &live, &lose_odd, Player::Even, &mut strategy);
    let core: Vec<bool> = (0..n).map(|v| live[v] && !even_attr[v]).collect();
    let even_core = zielonka(a, &core, &mut strategy);
    for v in 0..n {
        winner[v] = if odd_attr[v] {
            Player::Odd
        } else if even_attr[v] || even_core[v] {
            Player::Even
        } else {
            Player::Odd
        };
    }
    for v in 0..n {
        if a.owner[v] != winner[v] {
            strategy[v] = None;
        }
    }
    Solution { winner, strategy }
}

/// Whether `p` wins from `v` when it follows the fixed moves `choice` at its
/// own positions and the opponent moves freely.
fn wins_against_all(a: &Arena, p: Player, choice: &[Option<usize>], v: usize) -> bool {
    let n = a.len();
    let moves = |u: usize| -> Vec<usize> {
        if a.owner[u] == p {
            choice[u].into_iter().collect()
        } else {
            a.succ[u].clone()
        }
    };
    // reachable positions
    let mut seen = vec![false; n];
    let mut stack = vec![v];
    seen[v] = true;
    while let Some(u) = stack.pop() {
        if moves(u).is_empty() && a.owner[u] == p {
            return false;
        }
        for w in moves(u) {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    // a reachable cycle whose least priority favours the opponent
    for u in (0..n).filter(|&u| seen[u] && Player::of_priority(a.priority[u]) != p) {
        let k = a.priority[u];
        let mut reach = vec![false; n];
        let mut stack: Vec<usize> = moves(u).into_iter().filter(|&w| a.priority[w] >= k).collect();
        for &w in &stack {
            reach[w] = true;
        }
        while let Some(x) = stack.pop() {
            if x == u {
                return false;
            }
            for w in moves(x) {
                if a.priority[w] >= k && !reach[w] {
                    reach[w] = true;
                    stack.push(w);
                }
            }
        }
        if reach[u] {
            return false;
        }
    }
    true
}

/// Checks that the strategy of each winner keeps every play from its
/// winning positions won, whatever the opponent does.
pub fn check_solution(a: &Arena, sol: &Solution) -> bool {
    (0..a.len()).all(|v| {
        let p = sol.winner[v];
        let choice: Vec<Option<usize>> =
            (0..a.len()).map(|u| if a.owner[u] == p && sol.winner[u] == p { sol.strategy[u] } else { None }).collect();
        let valid = (0..a.len()).all(|u| match choice[u] {
            Some(w) => a.succ[u].contains(&w),
            None => a.owner[u] != p || sol.winner[u] != p || a.succ[u].is_empty(),
        });
        valid && wins_against_all(a, p, &choice, v)
    })
}

/// Winning regions by enumerating all positional strategies of Even; Odd
/// wins everywhere else by positional determinacy.
pub fn brute_force(a: &Arena) -> Vec<Player> {
    let n = a.len();
    let even: Vec<usize> = (0..n).filter(|&v| a.owner[v] == Player::Even && !a.succ[v].is_empty()).collect();
    let mut idx = vec![0usize; even.len()];
    let mut won: BTreeSet<usize> = BTreeSet::new();
    loop {
        let mut choice = vec![None; n];
        for (k, &v) in even.iter().enumerate() {
            choice[v] = Some(a.succ[v][idx[k]]);
        }
        for v in 0..n {
            if !won.contains(&v) && wins_against_all(a, Player::Even, &choice, v) {
                won.insert(v);
            }
        }
        let mut k = 0;
        loop {
            if k == even.len() {
                return (0..n).map(|v| if won.contains(&v) { Player::Even } else { Player::Odd }).collect();
            }
            idx[k] += 1;
            if idx[k] < a.succ[even[k]].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn even_self_loop() {
        let mut a = Arena::new();
        let v = a.add(Player::Even, 2);
        a.edge(v, v);
        let s = solve(&a);
        assert_eq!(s.winner, vec![Player::Even]);
        assert_eq!(s.strategy, vec![Some(0)]);
        assert!(check_solution(&a, &s));
    }

    #[test]
    fn odd_self_loop() {
        let mut a = Arena::new();
        let v = a.add(Player::Even, 1);
        a.edge(v, v);
        assert_eq!(solve(&a).winner, vec![Player::Odd]);
    }

    #[test]
    fn dead_ends_lose() {
        let mut a = Arena::new();
        let e = a.add(Player::Even, 0);
        let o = a.add(Player::Odd, 0);
        let s = solve(&a);
        assert_eq!(s.winner[e], Player::Odd);
        assert_eq!(s.winner[o], Player::Even);
    }

    #[test]
    fn six_node_arena() {
        // Even can either loop on priority 1 or escape through Odd's choice
        let mut a = Arena::new();
        let v: Vec<usize> = [
            (Player::Even, 1),
            (Player::Odd, 2),
            (Player::Even, 3),
            (Player::Odd, 0),
            (Player::Even, 4),
            (Player::Odd, 5),
        ]
        .iter()
        .map(|&(o, p)| a.add(o, p))
        .collect();
        a.edge(v[0], v[0]);
        a.edge(v[0], v[1]);
        a.edge(v[1], v[2]);
        a.edge(v[1], v[4]);
        a.edge(v[2], v[3]);
        a.edge(v[3], v[2]);
        a.edge(v[3], v[5]);
        a.edge(v[4], v[4]);
        a.edge(v[5], v[0]);
        let s = solve(&a);
        assert_eq!(s.winner, brute_force(&a));
        assert!(check_solution(&a, &s));
    }

    #[test]
    fn matches_brute_force_on_random_arenas() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(1..=7);
            let a = crate::gen::random_arena(&mut rng, n);
            let s = solve(&a);
            assert_eq!(s.winner, brute_force(&a), "{a:?}");
            assert!(check_solution(&a, &s), "{a:?}");
        }
    }
}
