//! Signed permutations, the type B Weyl group and its parabolic subgroups.
//!
//! A signed permutation `w` of rank `d` is stored by its window
//! `(w(1), ..., w(d))`. Generator `s_0` negates the first letter and `s_t`
//! (`t >= 1`) swaps `t` and `t+1`. Products are read right to left:
//! `(uw)(k) = u(w(k))`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};

/// Largest rank for which whole groups are enumerated.
pub const MAX_ENUM_RANK: usize = 6;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SignedPerm(Vec<i32>);

impl SignedPerm {
    pub fn identity(d: usize) -> Self {
        SignedPerm((1..=d as i32).collect())
    }

    pub fn new(window: Vec<i32>) -> Result<Self> {
        let d = window.len() as i32;
        let mut seen = vec![false; window.len()];
        for &x in &window {
            let a = x.unsigned_abs() as usize;
            if x == 0 || x.abs() > d || seen[a - 1] {
                return Err(Error::Parse(format!("not a signed permutation: {window:?}")));
            }
            seen[a - 1] = true;
        }
        Ok(SignedPerm(window))
    }

    pub fn generator(d: usize, t: usize) -> Result<Self> {
        if t >= d {
            return Err(Error::BadGenerator(t, d));
        }
        Ok(SignedPerm::identity(d).mul_gen_right(t))
    }

    pub fn from_word(d: usize, word: &[usize]) -> Result<Self> {
        let mut w = SignedPerm::identity(d);
        for &t in word {
            if t >= d {
                return Err(Error::BadGenerator(t, d));
            }
            w = w.mul_gen_right(t);
        }
        Ok(w)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn window(&self) -> &[i32] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(k, &x)| x == k as i32 + 1)
    }

    /// `w(k)` for `k` in `{±1, ..., ±d}`.
    pub fn apply(&self, k: i32) -> i32 {
        let v = self.0[k.unsigned_abs() as usize - 1];
        if k < 0 {
            -v
        } else {
            v
        }
    }

    pub fn compose(&self, w: &SignedPerm) -> Result<SignedPerm> {
        if self.rank() != w.rank() {
            return Err(Error::RankMismatch(self.rank(), w.rank()));
        }
        Ok(SignedPerm(w.0.iter().map(|&k| self.apply(k)).collect()))
    }

    pub fn inverse(&self) -> SignedPerm {
        let mut out = vec![0; self.rank()];
        for (k, &x) in self.0.iter().enumerate() {
            let pos = x.unsigned_abs() as usize - 1;
            out[pos] = if x > 0 { k as i32 + 1 } else { -(k as i32 + 1) };
        }
        SignedPerm(out)
    }

    /// `w s_t`.
    pub fn mul_gen_right(&self, t: usize) -> SignedPerm {
        let mut v = self.0.clone();
        if t == 0 {
            v[0] = -v[0];
        } else {
            v.swap(t - 1, t);
        }
        SignedPerm(v)
    }

    /// `s_t w`.
    pub fn mul_gen_left(&self, t: usize) -> SignedPerm {
        let t = t as i32;
        let v = self
            .0
            .iter()
            .map(|&x| {
                let (a, s) = (x.abs(), x.signum());
                if t == 0 {
                    if a == 1 {
                        -x
                    } else {
                        x
                    }
                } else if a == t {
                    s * (t + 1)
                } else if a == t + 1 {
                    s * t
                } else {
                    x
                }
            })
            .collect();
        SignedPerm(v)
    }

    /// `l(w s_t) < l(w)`.
    pub fn has_right_descent(&self, t: usize) -> bool {
        if t == 0 {
            self.0[0] < 0
        } else {
            self.0[t - 1] > self.0[t]
        }
    }

    /// `l(s_t w) < l(w)`.
    pub fn has_left_descent(&self, t: usize) -> bool {
        self.inverse().has_right_descent(t)
    }

    /// Coxeter length.
    pub fn length(&self) -> usize {
        let w = &self.0;
        let mut len = w.iter().filter(|&&x| x < 0).count();
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] > w[j] {
                    len += 1;
                }
                if w[i] + w[j] < 0 {
                    len += 1;
                }
            }
        }
        len
    }

    /// Number of occurrences of `s_0` in any reduced word.
    pub fn length_zero(&self) -> usize {
        self.0.iter().filter(|&&x| x < 0).count()
    }

    /// Number of occurrences of `s_1, ..., s_{d-1}` in any reduced word.
    pub fn length_a(&self) -> usize {
        self.length() - self.length_zero()
    }

    /// Reduced word `w = s_{i_1} ... s_{i_N}` found by peeling off right
    /// descents.
    pub fn reduced_word(&self) -> Vec<usize> {
        if let Some(w) = word_cache().read().unwrap().get(self) {
            return w.clone();
        }
        let mut word = Vec::new();
        let mut w = self.clone();
        'outer: loop {
            for t in 0..w.rank() {
                if w.has_right_descent(t) {
                    word.push(t);
                    w = w.mul_gen_right(t);
                    continue 'outer;
                }
            }
            break;
        }
        word.reverse();
        word_cache().write().unwrap().insert(self.clone(), word.clone());
        word
    }

    /// True if the window only holds positive letters.
    pub fn is_unsigned(&self) -> bool {
        self.0.iter().all(|&x| x > 0)
    }
}

fn word_cache() -> &'static RwLock<HashMap<SignedPerm, Vec<usize>>> {
    static CACHE: OnceLock<RwLock<HashMap<SignedPerm, Vec<usize>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

impl fmt::Display for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i32::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl FromStr for SignedPerm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s
            .trim()
            .strip_prefix('[')
            .and_then(|x| x.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected [..]: {s:?}")))?;
        let mut v = Vec::new();
        for part in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            v.push(
                part.parse::<i32>()
                    .map_err(|_| Error::Parse(format!("bad entry {part:?}")))?,
            );
        }
        SignedPerm::new(v)
    }
}

/// The element sending `1..a` to `b+1..b+a` and `a+1..a+b` to `1..b`.
pub fn block_shuffle(a: usize, b: usize) -> SignedPerm {
    let mut v: Vec<i32> = (b as i32 + 1..=(a + b) as i32).collect();
    v.extend(1..=b as i32);
    SignedPerm(v)
}

pub fn type_b_gens(d: usize) -> Vec<usize> {
    (0..d).collect()
}

pub fn type_a_gens(d: usize) -> Vec<usize> {
    (1..d).collect()
}

/// All elements of the subgroup generated by `gens`, ordered by length and
/// then window.
pub fn subgroup_elements(d: usize, gens: &[usize]) -> Result<Vec<SignedPerm>> {
    if d > MAX_ENUM_RANK {
        return Err(Error::RankTooLarge(d));
    }
    if let Some(&t) = gens.iter().find(|&&t| t >= d.max(1)) {
        return Err(Error::BadGenerator(t, d));
    }
    let start = SignedPerm::identity(d);
    let mut seen: HashSet<SignedPerm> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(w) = queue.pop_front() {
        for &t in gens {
            let x = w.mul_gen_right(t);
            if seen.insert(x.clone()) {
                queue.push_back(x);
            }
        }
    }
    let mut out: Vec<SignedPerm> = seen.into_iter().collect();
    out.sort_by_cached_key(|w| (w.length(), w.clone()));
    Ok(out)
}

/// The whole of `W^B(d)`.
pub fn enumerate_group(d: usize) -> Result<Vec<SignedPerm>> {
    subgroup_elements(d, &type_b_gens(d))
}

/// Shortest representatives of the right cosets `W_J w` inside the group
/// generated by `ambient`.
pub fn min_right_coset_reps(d: usize, ambient: &[usize], j: &[usize]) -> Result<Vec<SignedPerm>> {
    Ok(subgroup_elements(d, ambient)?
        .into_iter()
        .filter(|w| j.iter().all(|&t| !w.has_left_descent(t)))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleCoset {
    pub rep: SignedPerm,
    pub members: Vec<SignedPerm>,
}

type CosetKey = (usize, Vec<usize>, Vec<usize>, Vec<usize>);

fn coset_cache() -> &'static RwLock<HashMap<CosetKey, Arc<Vec<DoubleCoset>>>> {
    static CACHE: OnceLock<RwLock<HashMap<CosetKey, Arc<Vec<DoubleCoset>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// The double cosets `W_J w W_K` inside the group generated by `ambient`,
/// found by closing orbits, each with its shortest member.
pub fn double_cosets(d: usize, ambient: &[usize], j: &[usize], k: &[usize]) -> Result<Arc<Vec<DoubleCoset>>> {
    let key = (d, ambient.to_vec(), j.to_vec(), k.to_vec());
    if let Some(hit) = coset_cache().read().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let elements = subgroup_elements(d, ambient)?;
    let mut assigned: HashSet<SignedPerm> = HashSet::new();
    let mut out = Vec::new();
    for w in &elements {
        if assigned.contains(w) {
            continue;
        }
        let mut members = vec![w.clone()];
        assigned.insert(w.clone());
        let mut queue = VecDeque::from([w.clone()]);
        while let Some(x) = queue.pop_front() {
            let nbrs = j
                .iter()
                .map(|&t| x.mul_gen_left(t))
                .chain(k.iter().map(|&t| x.mul_gen_right(t)));
            for y in nbrs {
                if assigned.insert(y.clone()) {
                    members.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        members.sort_by_cached_key(|w| (w.length(), w.clone()));
        out.push(DoubleCoset {
            rep: w.clone(),
            members,
        });
    }
    let out = Arc::new(out);
    coset_cache().write().unwrap().insert(key, out.clone());
    Ok(out)
}

/// A weight in `Λ^B(n, d)` read symmetrically: `λ_{-i} = λ_i`.
///
/// For odd `n = 2r+1` the centre part `a0 = λ_0` is odd and
/// `λ_0 + 2 Σ λ_i = 2d + 1`; for even `n = 2r` there is no centre part and
/// `Σ λ_i = d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompositionB {
    pub n: usize,
    pub a0: usize,
    pub pos: Vec<usize>,
}

impl CompositionB {
    pub fn new(n: usize, a0: usize, pos: Vec<usize>) -> Result<Self> {
        let c = CompositionB { n, a0, pos };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        let r = self.n / 2;
        if self.n == 0 || self.pos.len() != r {
            return Err(Error::InvalidWeight(format!("{self:?}")));
        }
        if self.n % 2 == 1 && self.a0 % 2 == 0 {
            return Err(Error::InvalidWeight(format!("centre part must be odd: {self:?}")));
        }
        if self.n % 2 == 0 && self.a0 != 0 {
            return Err(Error::InvalidWeight(format!("no centre part for even n: {self:?}")));
        }
        Ok(())
    }

    /// Number of letters equal to 0 in the associated word.
    pub fn zeros(&self) -> usize {
        if self.n % 2 == 1 {
            self.a0 / 2
        } else {
            0
        }
    }

    pub fn degree(&self) -> usize {
        self.zeros() + self.pos.iter().sum::<usize>()
    }

    /// `0^{m0} 1^{λ_1} 2^{λ_2} ...`, a word whose stabiliser is `W_λ`.
    pub fn word(&self) -> Vec<i32> {
        let mut w = vec![0; self.zeros()];
        for (i, &p) in self.pos.iter().enumerate() {
            w.extend(std::iter::repeat(i as i32 + 1).take(p));
        }
        w
    }

    /// Generators of `W_λ`.
    pub fn parabolic(&self) -> Vec<usize> {
        let d = self.degree();
        let mut removed = HashSet::new();
        let mut acc = self.zeros();
        removed.insert(acc);
        for &p in self.pos.iter().take(self.pos.len().saturating_sub(1)) {
            acc += p;
            removed.insert(acc);
        }
        (0..d).filter(|t| !removed.contains(t)).collect()
    }
}

impl fmt::Display for CompositionB {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pos.iter().map(usize::to_string).collect();
        if self.n % 2 == 1 {
            write!(f, "({};{})", self.a0, parts.join(","))
        } else {
            write!(f, "({})", parts.join(","))
        }
    }
}

/// Sequences of `parts` nonnegative integers summing to `total`, in
/// lexicographically decreasing order.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All of `Λ^B(n, d)`.
pub fn weights_b(n: usize, d: usize) -> Vec<CompositionB> {
    let r = n / 2;
    let mut out = Vec::new();
    if n % 2 == 1 {
        for c in compositions(d, r + 1) {
            out.push(CompositionB {
                n,
                a0: 2 * c[0] + 1,
                pos: c[1..].to_vec(),
            });
        }
    } else {
        for c in compositions(d, r) {
            out.push(CompositionB { n, a0: 0, pos: c });
        }
    }
    out
}

/// Generators of the Young subgroup `Σ_μ` of `Σ_d` for a composition `μ`.
pub fn young_gens(mu: &[usize]) -> Vec<usize> {
    let d: usize = mu.iter().sum();
    let mut removed = HashSet::new();
    let mut acc = 0;
    for &p in mu {
        acc += p;
        removed.insert(acc);
    }
    (1..d).filter(|t| !removed.contains(t)).collect()
}

/// Shortest right coset representatives of `W_λ \ W^B(d)`, or with `mu`
/// the shortest double coset representatives of `W_λ \ W^B(d) / W_μ`.
pub fn coset_reps(lam: &CompositionB, mu: Option<&CompositionB>) -> Result<Vec<SignedPerm>> {
    lam.validate()?;
    let d = lam.degree();
    let amb = type_b_gens(d);
    match mu {
        None => min_right_coset_reps(d, &amb, &lam.parabolic()),
        Some(mu) => {
            mu.validate()?;
            if mu.degree() != d || mu.n != lam.n {
                return Err(Error::InvalidWeight(format!("{lam} and {mu} differ in shape")));
            }
            Ok(double_cosets(d, &amb, &lam.parabolic(), &mu.parabolic())?
                .iter()
                .map(|c| c.rep.clone())
                .collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sp(v: &[i32]) -> SignedPerm {
        SignedPerm::new(v.to_vec()).unwrap()
    }

    #[test]
    fn compose_examples() {
        let s0 = SignedPerm::generator(2, 0).unwrap();
        let s1 = SignedPerm::generator(2, 1).unwrap();
        assert!(s0.compose(&s0).unwrap().is_identity());
        // apply s_0 first, then s_1
        assert_eq!(s1.compose(&s0).unwrap(), sp(&[-2, 1]));
        assert_eq!(s0.compose(&s1).unwrap(), sp(&[2, -1]));
        let e = SignedPerm::identity(2);
        assert_eq!(e.compose(&s1).unwrap(), s1);
        assert_eq!(SignedPerm::identity(3).compose(&s0), Err(Error::RankMismatch(3, 2)));
    }

    #[test]
    fn lengths() {
        assert_eq!(SignedPerm::identity(3).length(), 0);
        assert!(SignedPerm::identity(3).reduced_word().is_empty());
        let g2 = enumerate_group(2).unwrap();
        let max = g2.iter().map(SignedPerm::length).max().unwrap();
        assert_eq!(max, 4);
        assert_eq!(sp(&[-1, -2]).length(), 4);
        let w = SignedPerm::from_word(2, &[0, 1, 0]).unwrap();
        assert_eq!(w.length(), 3);
    }

    #[test]
    fn group_sizes() {
        assert_eq!(enumerate_group(1).unwrap().len(), 2);
        assert_eq!(enumerate_group(2).unwrap().len(), 8);
        assert_eq!(enumerate_group(3).unwrap().len(), 48);
        assert_eq!(enumerate_group(4).unwrap().len(), 384);
        assert_eq!(enumerate_group(7), Err(Error::RankTooLarge(7)));
        assert_eq!(SignedPerm::generator(2, 2), Err(Error::BadGenerator(2, 2)));
    }

    #[test]
    fn length_matches_breadth_first_distance() {
        for d in 1..=4 {
            let mut dist: HashMap<SignedPerm, usize> = HashMap::new();
            let e = SignedPerm::identity(d);
            dist.insert(e.clone(), 0);
            let mut queue = VecDeque::from([e]);
            while let Some(w) = queue.pop_front() {
                let dw = dist[&w];
                for t in 0..d {
                    let x = w.mul_gen_right(t);
                    if !dist.contains_key(&x) {
                        dist.insert(x.clone(), dw + 1);
                        queue.push_back(x);
                    }
                }
            }
            for (w, l) in dist {
                assert_eq!(w.length(), l, "{w}");
                let word = w.reduced_word();
                assert_eq!(word.len(), l);
                assert_eq!(SignedPerm::from_word(d, &word).unwrap(), w);
                assert_eq!(word.iter().filter(|&&t| t == 0).count(), w.length_zero());
            }
        }
    }

    #[test]
    fn descent_rule_matches_length() {
        for w in enumerate_group(3).unwrap() {
            for t in 0..3 {
                let shorter = w.mul_gen_right(t).length() < w.length();
                assert_eq!(w.has_right_descent(t), shorter);
                let shorter = w.mul_gen_left(t).length() < w.length();
                assert_eq!(w.has_left_descent(t), shorter);
                assert_eq!(
                    w.mul_gen_left(t),
                    SignedPerm::generator(3, t).unwrap().compose(&w).unwrap()
                );
            }
        }
    }

    #[test]
    fn weights_and_parabolics() {
        assert_eq!(weights_b(2, 1).len(), 1);
        assert_eq!(weights_b(3, 1).len(), 2);
        assert_eq!(weights_b(4, 2).len(), 3);
        let lam = CompositionB::new(2, 0, vec![1]).unwrap();
        assert_eq!(lam.parabolic(), Vec::<usize>::new());
        let lam = CompositionB::new(3, 3, vec![1]).unwrap();
        assert_eq!(lam.degree(), 2);
        assert_eq!(lam.parabolic(), vec![0]);
        assert_eq!(lam.word(), vec![0, 1]);
        assert!(CompositionB::new(3, 2, vec![1]).is_err());
        assert_eq!(young_gens(&[2, 1]), vec![1]);
    }

    #[test]
    fn coset_rep_examples() {
        // W_λ is everything: a single coset
        let full = CompositionB::new(3, 5, vec![0]).unwrap();
        assert_eq!(full.parabolic(), vec![0, 1]);
        assert_eq!(coset_reps(&full, None).unwrap(), vec![SignedPerm::identity(2)]);
        // W_λ trivial: every element
        let triv = CompositionB::new(4, 0, vec![1, 1]).unwrap();
        assert_eq!(coset_reps(&triv, None).unwrap().len(), 8);
        // double cosets by hand: W_λ trivial on both sides gives 8 singletons
        assert_eq!(coset_reps(&triv, Some(&triv)).unwrap().len(), 8);
        // n = 2: Σ_d \ W^B(d) / Σ_d has d + 1 classes
        for d in 1..=4 {
            let lam = CompositionB::new(2, 0, vec![d]).unwrap();
            assert_eq!(coset_reps(&lam, Some(&lam)).unwrap().len(), d + 1);
        }
    }

    #[test]
    fn double_cosets_partition_and_minima() {
        for n in 1..=5 {
            for d in 1..=3 {
                let ws = weights_b(n, d);
                let total = enumerate_group(d).unwrap().len();
                for lam in &ws {
                    let j = lam.parabolic();
                    let wl = subgroup_elements(d, &j).unwrap().len();
                    assert_eq!(wl * coset_reps(lam, None).unwrap().len(), total);
                    for mu in &ws {
                        let k = mu.parabolic();
                        let dcs = double_cosets(d, &type_b_gens(d), &j, &k).unwrap();
                        let mut all = HashSet::new();
                        for c in dcs.iter() {
                            let l = c.rep.length();
                            assert!(c.members.iter().skip(1).all(|x| x.length() > l));
                            assert!(j.iter().all(|&t| !c.rep.has_left_descent(t)));
                            assert!(k.iter().all(|&t| !c.rep.has_right_descent(t)));
                            for m in &c.members {
                                assert!(all.insert(m.clone()));
                            }
                        }
                        assert_eq!(all.len(), total);
                    }
                }
            }
        }
    }

    #[test]
    fn text_form() {
        let w = sp(&[-1, 2]);
        assert_eq!(w.to_string(), "[-1,2]");
        assert_eq!("[-1,2]".parse::<SignedPerm>().unwrap(), w);
        assert!("[1,1]".parse::<SignedPerm>().is_err());
        assert_eq!(block_shuffle(2, 1), sp(&[2, 3, 1]));
    }

    proptest! {
        #[test]
        fn greedy_word_reassembles(word in prop::collection::vec(0usize..4, 0..12)) {
            let w = SignedPerm::from_word(4, &word).unwrap();
            let red = w.reduced_word();
            prop_assert_eq!(red.len(), w.length());
            prop_assert!(red.len() <= word.len());
            prop_assert_eq!(SignedPerm::from_word(4, &red).unwrap(), w.clone());
            prop_assert!(w.compose(&w.inverse()).unwrap().is_identity());
        }
    }
}
