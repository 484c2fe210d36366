//! Tensor space `V^{⊗d}` with its right Hecke action.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::hecke::{HeckeAlg, HeckeElt};
use crate::linalg::{rank_of, Mat};
use crate::report::Check;
use crate::scalars::{Field, Params};
use crate::weylb::block_shuffle;

/// Largest tensor space we are willing to build densely.
pub const MAX_WORDS: usize = 4096;

/// `I(n) = [-r, r]`, without 0 when `n` is even.
pub fn index_set(n: usize) -> Vec<i32> {
    let r = (n / 2) as i32;
    (-r..=r).filter(|&i| n % 2 == 1 || i != 0).collect()
}

/// Indices of `V_{≥0}`: `[0, r]` for odd `n`, `[1, r]` for even `n`.
pub fn nonneg_values(n: usize) -> Vec<i32> {
    index_set(n).into_iter().filter(|&i| i >= 0).collect()
}

/// Indices of `V_{>0}`.
pub fn pos_values(n: usize) -> Vec<i32> {
    index_set(n).into_iter().filter(|&i| i > 0).collect()
}

/// All words of length `d` over `values`, lexicographically.
pub fn words_over(values: &[i32], d: usize) -> Vec<Vec<i32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        let mut next = Vec::with_capacity(out.len() * values.len());
        for w in &out {
            for &v in values {
                let mut w2 = w.clone();
                w2.push(v);
                next.push(w2);
            }
        }
        out = next;
    }
    out
}

fn fmt_word(w: &[i32]) -> String {
    format!("{w:?}")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorElt<F> {
    d: usize,
    terms: BTreeMap<Vec<i32>, F>,
}

impl<F: Field> TensorElt<F> {
    pub fn zero(d: usize) -> Self {
        TensorElt {
            d,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(word: Vec<i32>) -> Self {
        let mut x = Self::zero(word.len());
        x.terms.insert(word, F::one());
        x
    }

    pub fn rank(&self) -> usize {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &F)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &[i32]) -> F {
        self.terms.get(w).cloned().unwrap_or_else(F::zero)
    }

    pub fn add_term(&mut self, w: Vec<i32>, c: F) {
        if c.is_zero() {
            return;
        }
        let key = w;
        match self.terms.get_mut(&key) {
            Some(v) => {
                let s = v.add(&c);
                if s.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&F::one().neg()))
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.d);
        }
        TensorElt {
            d: self.d,
            terms: self.terms.iter().map(|(w, x)| (w.clone(), x.mul(c))).collect(),
        }
    }

    /// `x ⊗ y`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.d + other.d);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let mut w = u.clone();
                w.extend_from_slice(v);
                out.add_term(w, a.mul(b));
            }
        }
        out
    }

    /// If `self = c·v_word` with `c != 0`, return `c`.
    pub fn multiple_of(&self, word: &[i32]) -> Option<F> {
        if self.terms.len() == 1 {
            self.terms.get(word).cloned()
        } else {
            None
        }
    }
}

/// Coordinate projections onto subspaces spanned by basis words.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Projection {
    /// `p_d` onto `V_{≤0}^{⊗d}`.
    NonPositive,
    /// `p_{a,b}` onto `V_{≤0}^{⊗a} ⊗ V_{<0}^{⊗b}`.
    Split(usize, usize),
    /// `p'_{a,b}` onto `V^{⊗a} ⊗ V_{<0}^{⊗b}`.
    SplitTail(usize, usize),
}

impl Projection {
    fn keeps(self, w: &[i32]) -> bool {
        match self {
            Projection::NonPositive => w.iter().all(|&x| x <= 0),
            Projection::Split(a, _) => w[..a].iter().all(|&x| x <= 0) && w[a..].iter().all(|&x| x < 0),
            Projection::SplitTail(a, _) => w[a..].iter().all(|&x| x < 0),
        }
    }
}

pub fn project<F: Field>(x: &TensorElt<F>, kind: Projection) -> Result<TensorElt<F>> {
    if let Projection::Split(a, b) | Projection::SplitTail(a, b) = kind {
        if a + b != x.d {
            return Err(Error::BadSplit(a, b, x.d));
        }
    }
    let mut out = TensorElt::zero(x.d);
    for (w, c) in &x.terms {
        if kind.keeps(w) {
            out.terms.insert(w.clone(), c.clone());
        }
    }
    Ok(out)
}

fn negate(w: &[i32]) -> Vec<i32> {
    w.iter().map(|&x| -x).collect()
}

fn abs_inversions(block: &[i32]) -> usize {
    let mut n = 0;
    for k in 0..block.len() {
        for l in k + 1..block.len() {
            if block[k].abs() > block[l].abs() {
                n += 1;
            }
        }
    }
    n
}

fn sorted_block(block: &[i32]) -> Vec<i32> {
    let mut b = block.to_vec();
    b.sort_unstable();
    b
}

/// `x = c·v_target + (lower terms)` with `c != 0`, where every other term
/// rearranges each of the blocks `[0, split)` and `[split, d)` of `target`
/// and has strictly fewer inversions of absolute values in total.
pub fn unitriangular_at<F: Field>(x: &TensorElt<F>, target: &[i32], split: usize) -> bool {
    if x.coeff(target).is_zero() {
        return false;
    }
    let (t0, t1) = target.split_at(split);
    let t_inv = abs_inversions(t0) + abs_inversions(t1);
    x.terms().all(|(w, _)| {
        if w.as_slice() == target {
            return true;
        }
        let (w0, w1) = w.split_at(split);
        sorted_block(w0) == sorted_block(t0)
            && sorted_block(w1) == sorted_block(t1)
            && abs_inversions(w0) + abs_inversions(w1) < t_inv
    })
}

fn act_word<F: Field>(p: &Params<F>, mu: &[i32], t: usize, out: &mut TensorElt<F>, c: &F) {
    let mut swapped = mu.to_vec();
    let (left, right, small, big) = if t == 0 {
        swapped[0] = -mu[0];
        (0, mu[0], &p.big_q_inv, &p.big_q)
    } else {
        swapped.swap(t - 1, t);
        (mu[t - 1], mu[t], &p.q_inv, &p.q)
    };
    match left.cmp(&right) {
        std::cmp::Ordering::Less => out.add_term(swapped, c.clone()),
        std::cmp::Ordering::Equal => out.add_term(swapped, c.mul(small)),
        std::cmp::Ordering::Greater => {
            out.add_term(swapped, c.clone());
            out.add_term(mu.to_vec(), c.mul(&small.sub(big)));
        }
    }
}

/// `x · T_t` without building the dense space; `t < rank(x)` is assumed.
pub fn apply_gen<F: Field>(p: &Params<F>, x: &TensorElt<F>, t: usize) -> TensorElt<F> {
    let mut out = TensorElt::zero(x.d);
    for (w, c) in &x.terms {
        act_word(p, w, t, &mut out, c);
    }
    out
}

/// One factor `w^±_{i(j)} ∈ V`.
fn w_factor<F: Field>(p: &Params<F>, i: i32, j: usize, plus: bool) -> TensorElt<F> {
    let mut out = TensorElt::zero(1);
    if i == 0 {
        if plus {
            let c = p.monomial(-2 * j as i64, -1).add(&p.big_q);
            out.add_term(vec![0], c);
        }
    } else {
        out.add_term(vec![-i], p.monomial(-(j as i64), 0));
        let c = if plus { p.big_q.clone() } else { p.big_q_inv.neg() };
        out.add_term(vec![i], c);
    }
    out
}

/// `w^+_I` (`plus`) or `w^-_I` for a word over `V_{≥0}` of any length.
pub fn w_vector<F: Field>(n: usize, p: &Params<F>, word: &[i32], plus: bool) -> Result<TensorElt<F>> {
    let allowed = nonneg_values(n);
    if word.iter().any(|x| !allowed.contains(x)) {
        return Err(Error::InvalidIndex(fmt_word(word)));
    }
    // Stable bubble sort; the swaps give a reduced word for g.
    let mut sorted = word.to_vec();
    let mut swaps = Vec::new();
    loop {
        let mut moved = false;
        for k in 0..sorted.len().saturating_sub(1) {
            if sorted[k] > sorted[k + 1] {
                sorted.swap(k, k + 1);
                swaps.push(k + 1);
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    let mut x = TensorElt::basis(Vec::new());
    for k in 0..sorted.len() {
        let j = (0..k).rev().take_while(|&m| sorted[m] == sorted[k]).count();
        x = x.tensor(&w_factor(p, sorted[k], j, plus));
    }
    for &t in swaps.iter().rev() {
        x = apply_gen(p, &x, t);
    }
    Ok(x)
}

pub struct TensorSpace<F> {
    n: usize,
    d: usize,
    params: Params<F>,
    words: Vec<Vec<i32>>,
    index: HashMap<Vec<i32>, usize>,
    hecke: HeckeAlg<F>,
}

impl<F: Field> TensorSpace<F> {
    pub fn new(n: usize, d: usize, params: Params<F>) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange(n));
        }
        let size = (n as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
        if size > MAX_WORDS as u128 {
            return Err(Error::TooLarge(format!("n^d = {n}^{d}")));
        }
        let words = words_over(&index_set(n), d);
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let hecke = HeckeAlg::new(d, params.clone())?;
        Ok(TensorSpace {
            n,
            d,
            params,
            words,
            index,
            hecke,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.d
    }

    pub fn params(&self) -> &Params<F> {
        &self.params
    }

    pub fn hecke(&self) -> &HeckeAlg<F> {
        &self.hecke
    }

    pub fn words(&self) -> &[Vec<i32>] {
        &self.words
    }

    pub fn dim(&self) -> usize {
        self.words.len()
    }

    pub fn word_index(&self, w: &[i32]) -> Option<usize> {
        self.index.get(w).copied()
    }

    fn check_word(&self, w: &[i32]) -> Result<()> {
        if w.len() != self.d || self.word_index(w).is_none() {
            return Err(Error::InvalidIndex(fmt_word(w)));
        }
        Ok(())
    }

    pub fn basis(&self, w: &[i32]) -> Result<TensorElt<F>> {
        self.check_word(w)?;
        Ok(TensorElt::basis(w.to_vec()))
    }

    pub fn to_vec(&self, x: &TensorElt<F>) -> Vec<F> {
        let mut v = vec![F::zero(); self.dim()];
        for (w, c) in &x.terms {
            v[self.index[w]] = c.clone();
        }
        v
    }

    pub fn from_vec(&self, v: &[F]) -> TensorElt<F> {
        let mut x = TensorElt::zero(self.d);
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                x.terms.insert(self.words[i].clone(), c.clone());
            }
        }
        x
    }

    pub fn act_gen(&self, x: &TensorElt<F>, t: usize) -> Result<TensorElt<F>> {
        if x.d != self.d {
            return Err(Error::RankMismatch(x.d, self.d));
        }
        if t >= self.d {
            return Err(Error::BadGenerator(t, self.d));
        }
        Ok(apply_gen(&self.params, x, t))
    }

    pub fn act(&self, x: &TensorElt<F>, h: &HeckeElt<F>) -> Result<TensorElt<F>> {
        if x.d != self.d {
            return Err(Error::RankMismatch(x.d, self.d));
        }
        if h.rank() != self.d {
            return Err(Error::RankMismatch(h.rank(), self.d));
        }
        let mut out = TensorElt::zero(self.d);
        for (w, c) in h.terms() {
            let mut y = x.scale(c);
            for t in w.reduced_word() {
                y = self.act_gen(&y, t)?;
            }
            out = out.add(&y);
        }
        Ok(out)
    }

    /// Matrix of `T_t`: column `μ` holds the coordinates of `v_μ T_t`.
    pub fn gen_matrix(&self, t: usize) -> Result<Mat<F>> {
        if t >= self.d {
            return Err(Error::BadGenerator(t, self.d));
        }
        let cols: Vec<Vec<F>> = self
            .words
            .iter()
            .map(|w| {
                let mut out = TensorElt::zero(self.d);
                act_word(&self.params, w, t, &mut out, &F::one());
                self.to_vec(&out)
            })
            .collect();
        Ok(Mat::from_cols(&cols, self.dim()))
    }

    /// The basis vector `w^+_I` (`plus`) or `w^-_I`.
    pub fn w_pm(&self, word: &[i32], plus: bool) -> Result<TensorElt<F>> {
        if word.len() != self.d {
            return Err(Error::InvalidIndex(fmt_word(word)));
        }
        w_vector(self.n, &self.params, word, plus)
    }

    fn span_rank(&self, xs: &[TensorElt<F>]) -> usize {
        let vs: Vec<Vec<F>> = xs.iter().map(|x| self.to_vec(x)).collect();
        rank_of(&vs)
    }

    /// Words `J ⊗ I` with `J ∈ V_{>0}^b` and `I ∈ V_{≥0}^a`, in the order `(I, J)`.
    fn split_domain(&self, a: usize) -> Vec<(Vec<i32>, Vec<i32>)> {
        let b = self.d - a;
        let is = words_over(&nonneg_values(self.n), a);
        let js = words_over(&pos_values(self.n), b);
        let mut out = Vec::new();
        for i in &is {
            for j in &js {
                out.push((i.clone(), j.clone()));
            }
        }
        out
    }

    /// Domain words `I ++ J` of the block map for the split `(a, b)`.
    pub fn block_domain(&self, a: usize, b: usize) -> Result<Vec<Vec<i32>>> {
        if a + b != self.d {
            return Err(Error::BadSplit(a, b, self.d));
        }
        Ok(self
            .split_domain(a)
            .into_iter()
            .map(|(mut i, j)| {
                i.extend(j);
                i
            })
            .collect())
    }

    fn block_images(&self, a: usize, b: usize) -> Result<Vec<TensorElt<F>>> {
        if a + b != self.d {
            return Err(Error::BadSplit(a, b, self.d));
        }
        let v = self.hecke.v_ab(a, b)?;
        self.split_domain(a)
            .into_iter()
            .map(|(i, j)| {
                let mut w = j;
                w.extend(i);
                self.act(&TensorElt::basis(w), &v)
            })
            .collect()
    }

    /// Matrix of `v_I ⊗ v_J ↦ (v_J ⊗ v_I) v_{a,b}` from `V_{≥0}^{⊗a} ⊗ V_{>0}^{⊗b}`
    /// into `V^{⊗d}`, columns ordered as [`Self::block_domain`].
    pub fn block_map(&self, a: usize, b: usize) -> Result<Mat<F>> {
        let imgs = self.block_images(a, b)?;
        let cols: Vec<Vec<F>> = imgs.iter().map(|x| self.to_vec(x)).collect();
        let m = Mat::from_cols(&cols, self.dim());
        let rank = m.rank();
        if rank < cols.len() {
            return Err(Error::SingularMap {
                rank,
                expected: cols.len(),
            });
        }
        Ok(m)
    }

    fn all_basis(&self) -> Vec<TensorElt<F>> {
        self.words.iter().map(|w| TensorElt::basis(w.clone())).collect()
    }

    /// Quadratic and braid relations of the generator matrices.
    pub fn check_module_axioms(&self) -> Result<Check> {
        let mats: Vec<Mat<F>> = (0..self.d).map(|t| self.gen_matrix(t)).collect::<Result<_>>()?;
        let id = Mat::identity(self.dim());
        let mut bad = None;
        for t in 0..self.d {
            let a = &mats[t];
            let rhs = a.scale(&self.params.quadratic_coeff(t)).add(&id);
            if a.mul(a) != rhs {
                bad.get_or_insert(format!("quadratic T_{t}"));
            }
            for u in t + 1..self.d {
                let b = &mats[u];
                let ok = if t == 0 && u == 1 {
                    a.mul(b).mul(a).mul(b) == b.mul(a).mul(b).mul(a)
                } else if u == t + 1 {
                    a.mul(b).mul(a) == b.mul(a).mul(b)
                } else {
                    a.mul(b) == b.mul(a)
                };
                if !ok {
                    bad.get_or_insert(format!("braid T_{t}, T_{u}"));
                }
            }
        }
        Ok(Check::new("tensor.module_axioms", bad.is_none(), vec![self.dim()]).with_counterexample(bad))
    }

    /// `v_I u^+_d = w^+_I` on `V_{≥0}^{⊗d}` and `v_I u^-_d = w^-_I` on `V_{>0}^{⊗d}`.
    pub fn check_u_on_words(&self) -> Result<Check> {
        let up = self.hecke.u_plus(self.d)?;
        let um = self.hecke.u_minus(self.d)?;
        let mut bad = None;
        let mut count = 0;
        for (plus, vals, u) in [(true, nonneg_values(self.n), &up), (false, pos_values(self.n), &um)] {
            for w in words_over(&vals, self.d) {
                count += 1;
                if self.act(&TensorElt::basis(w.clone()), u)? != self.w_pm(&w, plus)? {
                    bad.get_or_insert(format!("{}{}", if plus { "+" } else { "-" }, fmt_word(&w)));
                }
            }
        }
        Ok(Check::new("tensor.u_on_words", bad.is_none(), vec![count]).with_counterexample(bad))
    }

    /// `V^{⊗d} u^+_d = V_{≥0}^{⊗d} u^+_d` and `V^{⊗d} u^-_d = V_{>0}^{⊗d} u^-_d`.
    pub fn check_u_image_spans(&self) -> Result<Check> {
        let mut dims = Vec::new();
        let mut ok = true;
        for (vals, u) in [
            (nonneg_values(self.n), self.hecke.u_plus(self.d)?),
            (pos_values(self.n), self.hecke.u_minus(self.d)?),
        ] {
            let full: Vec<_> = self
                .all_basis()
                .iter()
                .map(|x| self.act(x, &u))
                .collect::<Result<_>>()?;
            let part: Vec<_> = words_over(&vals, self.d)
                .into_iter()
                .map(|w| self.act(&TensorElt::basis(w), &u))
                .collect::<Result<_>>()?;
            let (rf, rp) = (self.span_rank(&full), self.span_rank(&part));
            ok &= rf == rp && rp == part.len();
            dims.extend([rf, rp, part.len()]);
        }
        Ok(Check::new("tensor.u_image_spans", ok, dims))
    }

    /// `p_d(w^±_I)` is a nonzero multiple of `v_{-I}` (first check) and is
    /// unitriangular with leading term `v_{-I}` (second check).
    pub fn check_projection_leading(&self) -> Result<[Check; 2]> {
        let (mut bad, mut bad_tri) = (None, None);
        let mut count = 0;
        for (plus, vals) in [(true, nonneg_values(self.n)), (false, pos_values(self.n))] {
            for w in words_over(&vals, self.d) {
                count += 1;
                let p = project(&self.w_pm(&w, plus)?, Projection::NonPositive)?;
                let tag = || format!("{}{}", if plus { "+" } else { "-" }, fmt_word(&w));
                if p.multiple_of(&negate(&w)).is_none() {
                    bad.get_or_insert_with(tag);
                }
                if !unitriangular_at(&p, &negate(&w), self.d) {
                    bad_tri.get_or_insert_with(tag);
                }
            }
        }
        Ok([
            Check::new("tensor.projection_leading", bad.is_none(), vec![count]).with_counterexample(bad),
            Check::new("tensor.projection_triangular", bad_tri.is_none(), vec![count]).with_counterexample(bad_tri),
        ])
    }

    /// `v_I ↦ w^±_I` is injective, onto `V^{⊗d} u^±_d`, and commutes with `T_1..T_{d-1}`.
    pub fn check_w_isomorphism(&self) -> Result<Check> {
        let mut ok = true;
        let mut dims = Vec::new();
        let mut bad = None;
        for (plus, vals, u) in [
            (true, nonneg_values(self.n), self.hecke.u_plus(self.d)?),
            (false, pos_values(self.n), self.hecke.u_minus(self.d)?),
        ] {
            let dom = words_over(&vals, self.d);
            let imgs: Vec<_> = dom.iter().map(|w| self.w_pm(w, plus)).collect::<Result<_>>()?;
            let full: Vec<_> = self
                .all_basis()
                .iter()
                .map(|x| self.act(x, &u))
                .collect::<Result<_>>()?;
            let r_img = self.span_rank(&imgs);
            let mut joint = imgs.clone();
            joint.extend(full.iter().cloned());
            let r_joint = self.span_rank(&joint);
            let r_full = self.span_rank(&full);
            ok &= r_img == dom.len() && r_joint == r_img && r_full == r_img;
            dims.extend([dom.len(), r_img, r_full]);
            let lookup: HashMap<&Vec<i32>, &TensorElt<F>> = dom.iter().zip(imgs.iter()).collect();
            for (w, img) in dom.iter().zip(imgs.iter()) {
                for t in 1..self.d {
                    let moved = self.act_gen(&TensorElt::basis(w.clone()), t)?;
                    let mut lhs = TensorElt::zero(self.d);
                    for (w2, c) in moved.terms() {
                        lhs = lhs.add(&lookup[w2].scale(c));
                    }
                    if lhs != self.act_gen(img, t)? {
                        ok = false;
                        bad.get_or_insert(format!("{} T_{t}", fmt_word(w)));
                    }
                }
            }
        }
        Ok(Check::new("tensor.w_isomorphism", ok, dims).with_counterexample(bad))
    }

    /// `V^{⊗d} v_{a,b} = (V_{>0}^{⊗b} ⊗ V_{≥0}^{⊗a}) v_{a,b}` for every split.
    pub fn check_v_image_spans(&self) -> Result<Check> {
        let mut ok = true;
        let mut dims = Vec::new();
        let mut bad = None;
        for a in 0..=self.d {
            let b = self.d - a;
            let v = self.hecke.v_ab(a, b)?;
            let full: Vec<_> = self
                .all_basis()
                .iter()
                .map(|x| self.act(x, &v))
                .collect::<Result<_>>()?;
            let part = self.block_images(a, b)?;
            let (rf, rp) = (self.span_rank(&full), self.span_rank(&part));
            if rf != rp {
                ok = false;
                bad.get_or_insert(format!("a={a}, b={b}"));
            }
            dims.push(rf);
        }
        Ok(Check::new("tensor.v_image_spans", ok, dims).with_counterexample(bad))
    }

    /// `p'_{a,b}((w^-_J ⊗ v_I) T_{w_{a,b}})` is a nonzero multiple of
    /// `v_I ⊗ v_{-J}`, and unitriangular with that leading term.
    pub fn check_shuffle_projection(&self) -> Result<[Check; 2]> {
        let (mut bad, mut bad_tri) = (None, None);
        let mut count = 0;
        for a in 0..=self.d {
            let b = self.d - a;
            let tw = self.hecke.t(&block_shuffle(a, b));
            for (i, j) in self.split_domain(a) {
                count += 1;
                let wj = TensorSpace::new(self.n, b, self.params.clone())?.w_pm(&j, false)?;
                let x = wj.tensor(&TensorElt::basis(i.clone()));
                let p = project(&self.act(&x, &tw)?, Projection::SplitTail(a, b))?;
                let mut target = i.clone();
                target.extend(negate(&j));
                let tag = || format!("a={a}, I={i:?}, J={j:?}");
                if p.multiple_of(&target).is_none() {
                    bad.get_or_insert_with(tag);
                }
                if !unitriangular_at(&p, &target, a) {
                    bad_tri.get_or_insert_with(tag);
                }
            }
        }
        Ok([
            Check::new("tensor.shuffle_projection", bad.is_none(), vec![count]).with_counterexample(bad),
            Check::new("tensor.shuffle_triangular", bad_tri.is_none(), vec![count]).with_counterexample(bad_tri),
        ])
    }

    /// `p_{a,b}((v_J ⊗ v_I) v_{a,b})` is a nonzero multiple of `v_{-I} ⊗ v_{-J}`,
    /// and unitriangular with that leading term.
    pub fn check_v_projection(&self) -> Result<[Check; 2]> {
        let (mut bad, mut bad_tri) = (None, None);
        let mut count = 0;
        for a in 0..=self.d {
            let b = self.d - a;
            let imgs = self.block_images(a, b)?;
            for ((i, j), img) in self.split_domain(a).into_iter().zip(imgs) {
                count += 1;
                let p = project(&img, Projection::Split(a, b))?;
                let mut target = negate(&i);
                target.extend(negate(&j));
                let tag = || format!("a={a}, I={i:?}, J={j:?}");
                if p.multiple_of(&target).is_none() {
                    bad.get_or_insert_with(tag);
                }
                if !unitriangular_at(&p, &target, a) {
                    bad_tri.get_or_insert_with(tag);
                }
            }
        }
        Ok([
            Check::new("tensor.v_projection", bad.is_none(), vec![count]).with_counterexample(bad),
            Check::new("tensor.v_triangular", bad_tri.is_none(), vec![count]).with_counterexample(bad_tri),
        ])
    }

    /// The block map is injective, onto `V^{⊗d} v_{a,b}`, and intertwines
    /// `T_t` (`t != a`) on the domain with `T_t` on the target.
    pub fn check_block_isomorphism(&self) -> Result<Check> {
        let mut ok = true;
        let mut dims = Vec::new();
        let mut bad = None;
        for a in 0..=self.d {
            let b = self.d - a;
            let dom = self.block_domain(a, b)?;
            let imgs = self.block_images(a, b)?;
            let v = self.hecke.v_ab(a, b)?;
            let full: Vec<_> = self
                .all_basis()
                .iter()
                .map(|x| self.act(x, &v))
                .collect::<Result<_>>()?;
            let (ri, rf) = (self.span_rank(&imgs), self.span_rank(&full));
            if ri != dom.len() || rf != ri {
                ok = false;
                bad.get_or_insert(format!("rank a={a}"));
            }
            dims.push(ri);
            let lookup: HashMap<&Vec<i32>, &TensorElt<F>> = dom.iter().zip(imgs.iter()).collect();
            for (w, img) in dom.iter().zip(imgs.iter()) {
                for t in (1..self.d).filter(|&t| t != a) {
                    let moved = self.act_gen(&TensorElt::basis(w.clone()), t)?;
                    let mut lhs = TensorElt::zero(self.d);
                    for (w2, c) in moved.terms() {
                        lhs = lhs.add(&lookup[w2].scale(c));
                    }
                    if lhs != self.act_gen(img, t)? {
                        ok = false;
                        bad.get_or_insert(format!("a={a}, {} T_{t}", fmt_word(w)));
                    }
                }
            }
        }
        Ok(Check::new("tensor.block_isomorphism", ok, dims).with_counterexample(bad))
    }

    /// Every tensor-space check.
    pub fn run_checks(&self) -> Result<Vec<Check>> {
        let mut out = vec![
            self.check_module_axioms()?,
            self.check_u_on_words()?,
            self.check_u_image_spans()?,
        ];
        out.extend(self.check_projection_leading()?);
        out.push(self.check_w_isomorphism()?);
        out.push(self.check_v_image_spans()?);
        out.extend(self.check_shuffle_projection()?);
        out.extend(self.check_v_projection()?);
        out.push(self.check_block_isomorphism()?);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, FracBi, GaussRational, Rational};
    use proptest::prelude::*;

    fn sym(n: usize, d: usize) -> TensorSpace<FracBi> {
        TensorSpace::new(n, d, Params::symbolic()).unwrap()
    }

    fn num(n: usize, d: usize) -> TensorSpace<Rational> {
        TensorSpace::new(n, d, Params::ints(2, 3).unwrap()).unwrap()
    }

    fn v<F: Field>(w: &[i32]) -> TensorElt<F> {
        TensorElt::basis(w.to_vec())
    }

    #[test]
    fn index_sets() {
        assert_eq!(index_set(2), vec![-1, 1]);
        assert_eq!(index_set(3), vec![-1, 0, 1]);
        assert_eq!(index_set(4), vec![-2, -1, 1, 2]);
        assert_eq!(nonneg_values(4), vec![1, 2]);
        assert_eq!(nonneg_values(5), vec![0, 1, 2]);
        assert_eq!(num(3, 2).dim(), 9);
    }

    #[test]
    fn generator_cases() {
        let s = sym(2, 1);
        let p = s.params().clone();
        assert_eq!(s.act_gen(&v(&[1]), 0).unwrap(), v(&[-1]));
        let mut e = v::<FracBi>(&[1]);
        e.add_term(vec![-1], p.big_q_inv.sub(&p.big_q));
        assert_eq!(s.act_gen(&v(&[-1]), 0).unwrap(), e);
        assert_eq!(s.act(&v(&[-1]), &s.hecke().gen(0).unwrap()).unwrap(), e);

        let s3 = sym(3, 1);
        assert_eq!(s3.act_gen(&v(&[0]), 0).unwrap(), v::<FracBi>(&[0]).scale(&p.big_q_inv));

        let s22 = sym(2, 2);
        assert_eq!(
            s22.act_gen(&v(&[1, 1]), 1).unwrap(),
            v::<FracBi>(&[1, 1]).scale(&p.q_inv)
        );
        assert_eq!(s22.act_gen(&v(&[-1, 1]), 1).unwrap(), v(&[1, -1]));
        assert!(matches!(s22.act_gen(&v(&[1, 1]), 2), Err(Error::BadGenerator(2, 2))));
        assert_eq!(s22.act(&v(&[1, -1]), &s22.hecke().one()).unwrap(), v(&[1, -1]));
    }

    #[test]
    fn w_basis_examples() {
        let s = sym(2, 1);
        let p = s.params().clone();
        let mut w1 = v::<FracBi>(&[-1]);
        w1.add_term(vec![1], p.big_q.clone());
        assert_eq!(s.w_pm(&[1], true).unwrap(), w1);
        assert!(sym(3, 1).w_pm(&[0], false).unwrap().is_zero());
        assert!(matches!(s.w_pm(&[0], true), Err(Error::InvalidIndex(_))));
        assert!(matches!(s.w_pm(&[-1], true), Err(Error::InvalidIndex(_))));

        // v_(1,1) u^+_2 = w^+_(1,1) = w^+_{1(0)} ⊗ w^+_{1(1)}
        let s2 = sym(2, 2);
        let p = s2.params().clone();
        let u = s2.hecke().u_plus(2).unwrap();
        let lhs = s2.act(&v(&[1, 1]), &u).unwrap();
        let f0 = w_factor(&p, 1, 0, true);
        let f1 = w_factor(&p, 1, 1, true);
        assert_eq!(lhs, f0.tensor(&f1));
        assert_eq!(lhs, s2.w_pm(&[1, 1], true).unwrap());
    }

    #[test]
    fn w_basis_worked_example() {
        let p = Params::<FracBi>::symbolic();
        let got = w_vector(7, &p, &[0, 1, 1, 2, 3, 3, 3], true).unwrap();
        let factors = [(0, 0), (1, 0), (1, 1), (2, 0), (3, 0), (3, 1), (3, 2)];
        let mut expect = TensorElt::basis(Vec::new());
        for (i, j) in factors {
            expect = expect.tensor(&w_factor(&p, i, j, true));
        }
        assert_eq!(got, expect);
        assert_eq!(got.num_terms(), 1 << 6);
        // w^+_{0(0)} = (Q^{-1} + Q) v_0 and w^+_{1(1)} = q^{-1} v_{-1} + Q v_1
        assert_eq!(w_factor(&p, 0, 0, true).coeff(&[0]), p.big_q_inv.add(&p.big_q));
        assert_eq!(w_factor(&p, 1, 1, true).coeff(&[-1]), p.q_inv);
        // (0,2,1,1,3,3,3) = (0,1,1,2,3,3,3)·s_3 s_2
        let unsorted = w_vector(7, &p, &[0, 2, 1, 1, 3, 3, 3], true).unwrap();
        assert_eq!(unsorted, apply_gen(&p, &apply_gen(&p, &got, 3), 2));
    }

    #[test]
    fn unsorted_word_uses_sorting_permutation() {
        // (2,1) = (1,2)·s_1, so w^+_{(2,1)} = w^+_{(1,2)} T_1.
        let s = num(5, 2);
        let w12 = s.w_pm(&[1, 2], true).unwrap();
        assert_eq!(s.w_pm(&[2, 1], true).unwrap(), s.act_gen(&w12, 1).unwrap());
        let u = s.hecke().u_plus(2).unwrap();
        assert_eq!(s.act(&v(&[2, 1]), &u).unwrap(), s.w_pm(&[2, 1], true).unwrap());
    }

    #[test]
    fn projections() {
        let s = num(2, 1);
        let p = project(&s.w_pm(&[1], true).unwrap(), Projection::NonPositive).unwrap();
        assert_eq!(p, v(&[-1]));
        let neg = v::<Rational>(&[-1, -2, -1]);
        assert_eq!(project(&neg, Projection::NonPositive).unwrap(), neg);
        assert_eq!(
            project(&v::<Rational>(&[1, -1]), Projection::SplitTail(1, 1)).unwrap(),
            v(&[1, -1])
        );
        assert!(project(&v::<Rational>(&[1, 1]), Projection::SplitTail(1, 1))
            .unwrap()
            .is_zero());
        assert!(
            project(&v::<Rational>(&[0, -1]), Projection::Split(1, 1))
                .unwrap()
                .num_terms()
                == 1
        );
        assert!(matches!(
            project(&v::<Rational>(&[1, 1]), Projection::Split(1, 2)),
            Err(Error::BadSplit(1, 2, 2))
        ));
    }

    #[test]
    fn block_map_examples() {
        let s = sym(2, 1);
        let p = s.params().clone();
        let m = s.block_map(1, 0).unwrap();
        assert_eq!(s.from_vec(&m.col(0)), s.w_pm(&[1], true).unwrap());
        let m = s.block_map(0, 1).unwrap();
        let mut wm = v::<FracBi>(&[-1]);
        wm.add_term(vec![1], p.big_q_inv.neg());
        assert_eq!(s.from_vec(&m.col(0)), wm);
        assert_eq!(s.from_vec(&m.col(0)), s.w_pm(&[1], false).unwrap());

        // n = 2: V_{≥0} and V_{>0} are both spanned by v_1
        let m = num(2, 2).block_map(1, 1).unwrap();
        assert_eq!((m.nrows(), m.ncols(), m.rank()), (4, 1, 1));
        let m = num(3, 2).block_map(1, 1).unwrap();
        assert_eq!((m.nrows(), m.ncols(), m.rank()), (9, 2, 2));
        assert!(matches!(num(2, 2).block_map(1, 2), Err(Error::BadSplit(1, 2, 2))));
    }

    #[test]
    fn block_map_singular_at_bad_parameters() {
        // Q^{-2} + 1 divides f_B(1); at Q = i, w^+_{(0)} = (Q^{-1} + Q) v_0 = 0.
        let p = Params::new(GaussRational::from_i64(2), GaussRational::i()).unwrap();
        let s = TensorSpace::new(3, 1, p.clone()).unwrap();
        let r = s.block_map(1, 0);
        assert!(matches!(r, Err(Error::SingularMap { rank: 1, expected: 2 })), "{r:?}");
        let s = TensorSpace::new(3, 2, p).unwrap();
        assert!(matches!(
            s.block_map(2, 0),
            Err(Error::SingularMap { rank: 1, expected: 4 })
        ));
    }

    fn all_ok(checks: &[Check]) {
        for c in checks {
            assert!(c.passed(), "{c:?}");
        }
    }

    /// The exact-multiple statements fail once a word is not sorted; the
    /// unitriangular forms hold everywhere.
    fn failing_ids(checks: &[Check]) -> Vec<(String, String)> {
        checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| (c.id.clone(), c.counterexample.clone().unwrap_or_default()))
            .collect()
    }

    fn ids(v: &[(&str, &str)]) -> Vec<(String, String)> {
        v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    #[test]
    fn checks_generic_numeric() {
        let expected_failures = |n: usize, d: usize| -> Vec<(String, String)> {
            match (n, d) {
                (3, 2) => ids(&[
                    ("tensor.projection_leading", "+[1, 0]"),
                    ("tensor.v_projection", "a=2, I=[1, 0], J=[]"),
                ]),
                (3, 3) => ids(&[
                    ("tensor.projection_leading", "+[0, 1, 0]"),
                    ("tensor.v_projection", "a=2, I=[1, 0], J=[1]"),
                ]),
                (4, 2) => ids(&[
                    ("tensor.projection_leading", "+[2, 1]"),
                    ("tensor.shuffle_projection", "a=0, I=[], J=[2, 1]"),
                    ("tensor.v_projection", "a=0, I=[], J=[2, 1]"),
                ]),
                (4, 3) => ids(&[
                    ("tensor.projection_leading", "+[1, 2, 1]"),
                    ("tensor.shuffle_projection", "a=0, I=[], J=[1, 2, 1]"),
                    ("tensor.v_projection", "a=0, I=[], J=[1, 2, 1]"),
                ]),
                _ => Vec::new(),
            }
        };
        for n in 2..=4 {
            for d in 1..=3 {
                let checks = num(n, d).run_checks().unwrap();
                assert_eq!(checks.len(), 12);
                assert_eq!(failing_ids(&checks), expected_failures(n, d), "n={n} d={d}");
            }
        }
    }

    #[test]
    fn unsorted_projection_has_lower_term() {
        // p_2(w^+_{(1,0)}) = (Q^{-1} + Q)(v_{(-1,0)} + (q^{-1} - q) v_{(0,-1)}) for n = 3
        let s = sym(3, 2);
        let p = s.params().clone();
        let x = project(&s.w_pm(&[1, 0], true).unwrap(), Projection::NonPositive).unwrap();
        let c = p.big_q_inv.add(&p.big_q);
        assert_eq!(x.num_terms(), 2);
        assert_eq!(x.coeff(&[-1, 0]), c);
        assert_eq!(x.coeff(&[0, -1]), c.mul(&p.q_inv.sub(&p.q)));
        assert!(unitriangular_at(&x, &[-1, 0], 2));
        assert!(!unitriangular_at(&x, &[0, -1], 2));
    }

    #[test]
    fn u_on_words_n5() {
        for d in 1..=3 {
            all_ok(&[num(5, d).check_u_on_words().unwrap()]);
        }
    }

    #[test]
    fn checks_symbolic_small() {
        all_ok(&sym(2, 2).run_checks().unwrap());
        all_ok(&sym(3, 1).run_checks().unwrap());
        let f = failing_ids(&sym(3, 2).run_checks().unwrap());
        assert_eq!(
            f,
            ids(&[
                ("tensor.projection_leading", "+[1, 0]"),
                ("tensor.v_projection", "a=2, I=[1, 0], J=[]"),
            ])
        );
    }

    #[test]
    fn checks_other_parameters() {
        let s = TensorSpace::new(3, 3, Params::rational(rat(5, 3), rat(-7, 2)).unwrap()).unwrap();
        let f = failing_ids(&s.run_checks().unwrap());
        assert!(f
            .iter()
            .all(|(id, _)| id == "tensor.projection_leading" || id == "tensor.v_projection"));
        all_ok(&[
            num(5, 2).check_u_image_spans().unwrap(),
            num(5, 2).check_block_isomorphism().unwrap(),
        ]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn right_module_axiom(
            ws in proptest::collection::vec((0usize..48, -3i64..4), 1..4),
            hs in proptest::collection::vec((0usize..48, -3i64..4), 1..4),
            word in proptest::collection::vec(0usize..3, 3),
        ) {
            let s = num(3, 3);
            let h = s.hecke();
            let mk = |terms: &Vec<(usize, i64)>| {
                let mut e = HeckeElt::zero(3);
                for &(i, c) in terms {
                    e.add_term(h.elements()[i].clone(), rat(c, 1));
                }
                e
            };
            let (h1, h2) = (mk(&ws), mk(&hs));
            let x = TensorElt::basis(word.iter().map(|&k| index_set(3)[k]).collect());
            let lhs = s.act(&x, &h.mul(&h1, &h2).unwrap()).unwrap();
            let rhs = s.act(&s.act(&x, &h1).unwrap(), &h2).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
