use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};

/// A finite semigroup given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinSemigroup {
    pub names: Vec<String>,
    pub mul: Vec<Vec<usize>>,
}

impl FinSemigroup {
    pub fn new(names: Vec<String>, mul: Vec<Vec<usize>>) -> Result<FinSemigroup> {
        let n = names.len();
        if n == 0 {
            return Err(Error::Invalid("semigroup without elements".into()));
        }
        if mul.len() != n || mul.iter().any(|r| r.len() != n || r.iter().any(|&c| c >= n)) {
            return Err(Error::Invalid("multiplication table is not total".into()));
        }
        let s = FinSemigroup { names, mul };
        if let Some((a, b, c)) = s.associativity_violation() {
            return Err(Error::Invalid(format!("not associative at ({}, {}, {})", s.names[a], s.names[b], s.names[c])));
        }
        Ok(s)
    }

    /// The semigroup ({0,1}, min).
    pub fn min2() -> FinSemigroup {
        FinSemigroup { names: vec!["0".into(), "1".into()], mul: vec![vec![0, 0], vec![0, 1]] }
    }

    /// The cyclic group of order `n` under addition.
    pub fn cyclic(n: usize) -> FinSemigroup {
        FinSemigroup {
            names: (0..n).map(|i| i.to_string()).collect(),
            mul: (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    /// Product of a nonempty word; `None` for the empty word.
    pub fn product(&self, word: &[usize]) -> Option<usize> {
        let (&first, rest) = word.split_first()?;
        Some(rest.iter().fold(first, |acc, &b| self.mul[acc][b]))
    }

    /// Multiplies two optional values, `None` acting as the identity.
    pub fn mul_opt(&self, a: Option<usize>, b: Option<usize>) -> Option<usize> {
        match (a, b) {
            (Some(a), Some(b)) => Some(self.mul[a][b]),
            (x, None) => x,
            (None, y) => y,
        }
    }

    pub fn power(&self, a: usize, n: usize) -> usize {
        assert!(n >= 1);
        (1..n).fold(a, |acc, _| self.mul[acc][a])
    }

    pub fn is_idempotent(&self, a: usize) -> bool {
        self.mul[a][a] == a
    }

    pub fn associativity_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.mul[self.mul[a][b]][c] != self.mul[a][self.mul[b][c]] {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// Least k >= 1 such that a^k is idempotent for every a.
    pub fn idempotent_exponent(&self) -> usize {
        let mut k = 1;
        loop {
            if (0..self.len()).all(|a| self.is_idempotent(self.power(a, k))) {
                return k;
            }
            k += 1;
        }
    }

    /// The left ideal S¹a.
    pub fn left_ideal(&self, a: usize) -> BTreeSet<usize> {
        let mut out: BTreeSet<usize> = (0..self.len()).map(|s| self.mul[s][a]).collect();
        out.insert(a);
        out
    }

    /// Green's L-relation.
    pub fn l_equiv(&self, a: usize, b: usize) -> bool {
        a == b || self.left_ideal(a) == self.left_ideal(b)
    }
}

/// An ultimately periodic word `stem · period^ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpWord {
    pub stem: Vec<usize>,
    pub period: Vec<usize>,
}

/// A finite omega-semigroup (equivalently a finite Wilke algebra): finite
/// products, the mixed action of S₁ on S_ω, and ω-powers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaSemigroup {
    pub s: FinSemigroup,
    pub omega_names: Vec<String>,
    /// mixed[a][c] = a · c for a in S₁, c in S_ω.
    pub mixed: Vec<Vec<usize>>,
    /// omega[a] = a^ω.
    pub omega: Vec<usize>,
}

pub type WilkeAlgebra = OmegaSemigroup;

/// A violated Wilke law.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum WilkeViolation {
    /// (ab)^ω ≠ a(ba)^ω
    Exchange { a: usize, b: usize },
    /// (a^n)^ω ≠ a^ω
    Power { a: usize, n: usize },
    /// a(bc) ≠ (ab)c with c in S_ω
    Mixed { a: usize, b: usize, c: usize },
    /// (ab)c ≠ a(bc) in S₁
    Associativity { a: usize, b: usize, c: usize },
}

impl OmegaSemigroup {
    pub fn new(
        s: FinSemigroup,
        omega_names: Vec<String>,
        mixed: Vec<Vec<usize>>,
        omega: Vec<usize>,
    ) -> Result<OmegaSemigroup> {
        let m = omega_names.len();
        if omega.len() != s.len() || omega.iter().any(|&w| w >= m) {
            return Err(Error::Invalid("omega table is not total".into()));
        }
        if mixed.len() != s.len() || mixed.iter().any(|r| r.len() != m || r.iter().any(|&c| c >= m)) {
            return Err(Error::Invalid("mixed table is not total".into()));
        }
        Ok(OmegaSemigroup { s, omega_names, mixed, omega })
    }

    /// S₁ = S_ω = {0,1} with every product the minimum and ω the identity.
    pub fn min_omega() -> OmegaSemigroup {
        OmegaSemigroup {
            s: FinSemigroup::min2(),
            omega_names: vec!["0".into(), "1".into()],
            mixed: vec![vec![0, 0], vec![0, 1]],
            omega: vec![0, 1],
        }
    }

    pub fn mixed(&self, a: usize, c: usize) -> usize {
        self.mixed[a][c]
    }

    /// Mixed product with an optional finite prefix.
    pub fn mixed_opt(&self, a: Option<usize>, c: usize) -> usize {
        a.map_or(c, |a| self.mixed[a][c])
    }

    pub fn find_omega(&self, name: &str) -> Option<usize> {
        self.omega_names.iter().position(|n| n == name)
    }

    /// Value of `stem · period^ω`.
    pub fn lasso_product(&self, w: &UpWord) -> Result<usize> {
        let p = self.s.product(&w.period).ok_or_else(|| Error::Invalid("empty period".into()))?;
        Ok(self.mixed_opt(self.s.product(&w.stem), self.omega[p]))
    }

    pub fn check_wilke_laws(&self) -> Option<WilkeViolation> {
        check_wilke_laws(&self.s, &self.mixed, &self.omega)
    }
}

/// Checks associativity, the mixed action law and both ω-power laws; the
/// power law is checked for all n up to the idempotent exponent plus one.
pub fn check_wilke_laws(s: &FinSemigroup, mixed: &[Vec<usize>], omega: &[usize]) -> Option<WilkeViolation> {
    let n = s.len();
    if let Some((a, b, c)) = s.associativity_violation() {
        return Some(WilkeViolation::Associativity { a, b, c });
    }
    let m = mixed.first().map_or(0, Vec::len);
    for a in 0..n {
        for b in 0..n {
            for c in 0..m {
                if mixed[a][mixed[b][c]] != mixed[s.mul(a, b)][c] {
                    return Some(WilkeViolation::Mixed { a, b, c });
                }
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if omega[s.mul(a, b)] != mixed[a][omega[s.mul(b, a)]] {
                return Some(WilkeViolation::Exchange { a, b });
            }
        }
    }
    let k = s.idempotent_exponent();
    for a in 0..n {
        for e in 1..=k + 1 {
            if omega[s.power(a, e)] != omega[a] {
                return Some(WilkeViolation::Power { a, n: e });
            }
        }
    }
    None
}

/// A split of a word or tree: a value below `n` for every position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Split {
    pub n: usize,
    pub sigma: Vec<usize>,
}

/// Upper bound on the number of split levels used by the constructions.
pub fn split_bound(s: &FinSemigroup) -> usize {
    2 * s.len() + 1
}

/// A violated weak Ramseyan condition: positions x ⊏ y and x' ⊏ y' in one
/// block with λ(x,y)·λ(x',y') ≠ λ(x,y).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitViolation {
    pub x: usize,
    pub y: usize,
    pub x2: usize,
    pub y2: usize,
}

/// Per-level state of the left-to-right split construction.
#[derive(Clone, Debug)]
struct LevelState {
    /// Product of the letters after the last position with value >= this level.
    acc: Option<usize>,
    /// Split value of that last position.
    anchor: usize,
    /// Value of the first pair in the open block at this level, if any.
    class: Option<usize>,
}

/// Incremental construction of a weak Ramseyan split, one position at a time.
/// The state can be cloned to continue along different branches of a tree.
///
/// A block (positions of equal value with nothing larger in between) is valid
/// iff all of its pair values are idempotents of one L-class, so a position
/// may close a block segment when that segment's value is such an idempotent.
#[derive(Clone, Debug)]
pub struct SplitBuilder<'a> {
    s: &'a FinSemigroup,
    n: usize,
    levels: Vec<LevelState>,
}

impl<'a> SplitBuilder<'a> {
    /// Starts with the first position at level `n - 1`.
    pub fn new(s: &'a FinSemigroup, n: usize) -> SplitBuilder<'a> {
        SplitBuilder { s, n, levels: (0..n).map(|_| LevelState { acc: None, anchor: n - 1, class: None }).collect() }
    }

    /// Level chosen for the next position with incoming letter `a`, or `None`
    /// if no level keeps the split valid.
    pub fn choose(&self, a: usize) -> Option<usize> {
        let mut fresh = None;
        for k in (0..self.n).rev() {
            let st = &self.levels[k];
            let seg = self.s.mul_opt(st.acc, Some(a)).unwrap();
            if st.anchor == k {
                let ok = self.s.is_idempotent(seg) && st.class.is_none_or(|c| self.s.l_equiv(c, seg));
                if ok {
                    return Some(k);
                }
            } else if st.anchor > k {
                fresh = Some(k);
            }
        }
        fresh
    }

    /// Whether level `j` is admissible for the next position.
    pub fn admissible(&self, a: usize, j: usize) -> bool {
        let st = &self.levels[j];
        let seg = self.s.mul_opt(st.acc, Some(a)).unwrap();
        if st.anchor == j {
            self.s.is_idempotent(seg) && st.class.is_none_or(|c| self.s.l_equiv(c, seg))
        } else {
            st.anchor > j
        }
    }

    /// Appends a position with incoming letter `a` at level `j`.
    pub fn push(&mut self, a: usize, j: usize) {
        for k in 0..self.n {
            let seg = self.s.mul_opt(self.levels[k].acc, Some(a));
            let st = &mut self.levels[k];
            if k < j {
                *st = LevelState { acc: None, anchor: j, class: None };
            } else if k == j {
                let class = if st.anchor == j { st.class.or(seg) } else { None };
                *st = LevelState { acc: None, anchor: j, class };
            } else {
                st.acc = seg;
            }
        }
    }
}

/// Renumbers the used values of a split order-preservingly onto 0..m.
pub fn compress(sigma: &[usize]) -> Split {
    let used: BTreeSet<usize> = sigma.iter().copied().collect();
    let index: Vec<usize> = {
        let max = used.iter().next_back().copied().unwrap_or(0);
        let mut idx = vec![0; max + 1];
        for (i, &u) in used.iter().enumerate() {
            idx[u] = i;
        }
        idx
    };
    Split { n: used.len().max(1), sigma: sigma.iter().map(|&v| index[v]).collect() }
}

/// A weak Ramseyan split of a word. Position i carries letter `w[i]`, the
/// value of the step entering it; the first letter does not contribute to
/// any pair value.
pub fn word_split(s: &FinSemigroup, w: &[usize]) -> Result<Split> {
    if w.is_empty() {
        return Err(Error::Invalid("empty word".into()));
    }
    let bound = split_bound(s);
    let mut b = SplitBuilder::new(s, bound);
    let mut sigma = vec![bound - 1];
    let mut greedy_ok = true;
    for &a in &w[1..] {
        match b.choose(a) {
            Some(j) => {
                b.push(a, j);
                sigma.push(j);
            }
            None => {
                greedy_ok = false;
                break;
            }
        }
    }
    if greedy_ok {
        let split = compress(&sigma);
        if verify_word_split(s, w, &split.sigma).is_none() {
            return Ok(split);
        }
    }
    backtrack_word(s, w, bound).ok_or(Error::SplitNotFound(bound))
}

fn backtrack_word(s: &FinSemigroup, w: &[usize], bound: usize) -> Option<Split> {
    fn go(b: &SplitBuilder, w: &[usize], sigma: &mut Vec<usize>, bound: usize) -> bool {
        let p = sigma.len();
        if p == w.len() {
            return true;
        }
        for j in 0..bound {
            if b.admissible(w[p], j) {
                let mut next = b.clone();
                next.push(w[p], j);
                sigma.push(j);
                if go(&next, w, sigma, bound) {
                    return true;
                }
                sigma.pop();
            }
        }
        false
    }
    let b = SplitBuilder::new(s, bound);
    let mut sigma = vec![bound - 1];
    if go(&b, w, &mut sigma, bound) {
        Some(compress(&sigma))
    } else {
        None
    }
}

/// Checks the weak Ramseyan condition on a word by scanning every block.
pub fn verify_word_split(s: &FinSemigroup, w: &[usize], sigma: &[usize]) -> Option<SplitViolation> {
    let n = w.len();
    let value = |i: usize, j: usize| s.product(&w[i + 1..=j]).unwrap();
    for x in 0..n {
        // the block of x: later positions with equal value and nothing larger between
        let level = sigma[x];
        let mut members = vec![x];
        for (y, &v) in sigma.iter().enumerate().skip(x + 1) {
            if v > level {
                break;
            }
            if v == level {
                members.push(y);
            }
        }
        // only start scanning at the first position of a block
        let starts_block = (0..x).rev().find(|&z| sigma[z] >= level).is_none_or(|z| sigma[z] > level);
        if !starts_block {
            continue;
        }
        // one witness pair per distinct value suffices
        let mut pairs: Vec<(usize, usize, usize)> = Vec::new();
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                let e = value(members[i], members[j]);
                if !pairs.iter().any(|&(_, _, f)| f == e) {
                    pairs.push((members[i], members[j], e));
                }
            }
        }
        for &(x1, y1, e) in &pairs {
            for &(x2, y2, f) in &pairs {
                if s.mul(e, f) != e {
                    return Some(SplitViolation { x: x1, y: y1, x2, y2 });
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn idempotent_exponents() {
        assert_eq!(FinSemigroup::min2().idempotent_exponent(), 1);
        assert_eq!(FinSemigroup::cyclic(3).idempotent_exponent(), 3);
        assert_eq!(FinSemigroup::cyclic(1).idempotent_exponent(), 1);
    }

    #[test]
    fn lasso_products_over_min_omega() {
        let w = OmegaSemigroup::min_omega();
        assert_eq!(w.lasso_product(&UpWord { stem: vec![1], period: vec![1] }).unwrap(), 1);
        assert_eq!(w.lasso_product(&UpWord { stem: vec![1, 0], period: vec![1] }).unwrap(), 0);
        assert_eq!(
            w.lasso_product(&UpWord { stem: vec![], period: vec![0] }).unwrap(),
            w.lasso_product(&UpWord { stem: vec![0], period: vec![0, 0] }).unwrap()
        );
    }

    #[test]
    fn wilke_law_checks() {
        assert_eq!(OmegaSemigroup::min_omega().check_wilke_laws(), None);
        let mut bad = OmegaSemigroup::min_omega();
        bad.omega = vec![1, 1];
        assert!(bad.check_wilke_laws().is_some());
        let trivial = OmegaSemigroup {
            s: FinSemigroup::cyclic(1),
            omega_names: vec!["w".into()],
            mixed: vec![vec![0]],
            omega: vec![0],
        };
        assert_eq!(trivial.check_wilke_laws(), None);
    }

    #[test]
    fn word_split_examples() {
        let s = FinSemigroup::min2();
        let split = word_split(&s, &[1, 1, 1, 1]).unwrap();
        assert_eq!(split.n, 1);
        assert_eq!(split.sigma, vec![0, 0, 0, 0]);
        assert_eq!(word_split(&s, &[1]).unwrap(), Split { n: 1, sigma: vec![0] });
        let split = word_split(&s, &[1, 0, 1, 0]).unwrap();
        assert!(split.n <= 5);
        assert_eq!(verify_word_split(&s, &[1, 0, 1, 0], &split.sigma), None);
    }

    #[test]
    fn constant_split_with_non_idempotent_fails() {
        let z2 = FinSemigroup::cyclic(2);
        assert!(verify_word_split(&z2, &[1, 1, 1], &[0, 0, 0]).is_some());
    }

    #[test]
    fn backtracking_agrees_with_verifier() {
        let z3 = FinSemigroup::cyclic(3);
        let w = [1, 1, 2, 1, 0, 2, 2, 1];
        let split = backtrack_word(&z3, &w, split_bound(&z3)).unwrap();
        assert_eq!(verify_word_split(&z3, &w, &split.sigma), None);
    }

    proptest! {
        #[test]
        fn word_splits_verify(seed in 0u64..10_000, len in 1usize..60) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let s = crate::gen::random_semigroup(&mut rng, 4);
            let w: Vec<usize> = (0..len).map(|_| rng.gen_range(0..s.len())).collect();
            let split = word_split(&s, &w).unwrap();
            prop_assert_eq!(split.sigma[0], split.n - 1);
            prop_assert!(split.n <= split_bound(&s));
            prop_assert_eq!(verify_word_split(&s, &w, &split.sigma), None);
        }
    }
}
