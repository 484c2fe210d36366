//! The two-parameter Hecke algebra of type B.
//!
//! Relations: `T_0^2 = (Q^{-1} - Q) T_0 + 1`, `T_t^2 = (q^{-1} - q) T_t + 1`
//! for `t >= 1`, and the type B braid relations.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{rank_of, Coordinatizer, Mat};
use crate::report::Check;
use crate::scalars::{Field, Params};
use crate::weylb::{
    block_shuffle, double_cosets, enumerate_group, subgroup_elements, type_b_gens, CompositionB, SignedPerm,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Finite linear combination of the `T_w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeElt<F> {
    d: usize,
    terms: BTreeMap<SignedPerm, F>,
}

impl<F: Field> HeckeElt<F> {
    pub fn zero(d: usize) -> Self {
        HeckeElt {
            d,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(w: SignedPerm) -> Self {
        let d = w.rank();
        HeckeElt {
            d,
            terms: BTreeMap::from([(w, F::one())]),
        }
    }

    pub fn scalar(d: usize, c: F) -> Self {
        let mut h = HeckeElt::zero(d);
        h.add_term(SignedPerm::identity(d), c);
        h
    }

    pub fn rank(&self) -> usize {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SignedPerm, &F)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &SignedPerm) -> F {
        self.terms.get(w).cloned().unwrap_or_else(F::zero)
    }

    pub fn add_term(&mut self, w: SignedPerm, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(x) => {
                *x = x.add(&c);
                if x.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
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
            return HeckeElt::zero(self.d);
        }
        HeckeElt {
            d: self.d,
            terms: self.terms.iter().map(|(w, x)| (w.clone(), x.mul(c))).collect(),
        }
    }
}

/// Hecke algebra of rank `d` over a concrete field.
#[derive(Clone, Debug)]
pub struct HeckeAlg<F> {
    d: usize,
    params: Params<F>,
    elements: Arc<Vec<SignedPerm>>,
    index: Arc<HashMap<SignedPerm, usize>>,
}

impl<F: Field> HeckeAlg<F> {
    pub fn new(d: usize, params: Params<F>) -> Result<Self> {
        let elements = enumerate_group(d)?;
        let index = elements.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        Ok(HeckeAlg {
            d,
            params,
            elements: Arc::new(elements),
            index: Arc::new(index),
        })
    }

    pub fn rank(&self) -> usize {
        self.d
    }

    pub fn params(&self) -> &Params<F> {
        &self.params
    }

    /// The group elements in the order used for coordinates.
    pub fn elements(&self) -> &[SignedPerm] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn one(&self) -> HeckeElt<F> {
        HeckeElt::basis(SignedPerm::identity(self.d))
    }

    pub fn scalar(&self, c: F) -> HeckeElt<F> {
        HeckeElt::scalar(self.d, c)
    }

    pub fn t(&self, w: &SignedPerm) -> HeckeElt<F> {
        HeckeElt::basis(w.clone())
    }

    pub fn gen(&self, t: usize) -> Result<HeckeElt<F>> {
        Ok(HeckeElt::basis(SignedPerm::generator(self.d, t)?))
    }

    fn check_rank(&self, h: &HeckeElt<F>) -> Result<()> {
        if h.d != self.d {
            return Err(Error::RankMismatch(h.d, self.d));
        }
        Ok(())
    }

    pub fn mul_gen(&self, h: &HeckeElt<F>, t: usize, side: Side) -> Result<HeckeElt<F>> {
        self.check_rank(h)?;
        if t >= self.d {
            return Err(Error::BadGenerator(t, self.d));
        }
        let quad = self.params.quadratic_coeff(t);
        let mut out = HeckeElt::zero(self.d);
        for (w, c) in h.terms() {
            let (next, descent) = match side {
                Side::Right => (w.mul_gen_right(t), w.has_right_descent(t)),
                Side::Left => (w.mul_gen_left(t), w.has_left_descent(t)),
            };
            out.add_term(next, c.clone());
            if descent {
                out.add_term(w.clone(), c.mul(&quad));
            }
        }
        Ok(out)
    }

    /// `h T_w`.
    pub fn mul_basis_right(&self, h: &HeckeElt<F>, w: &SignedPerm) -> Result<HeckeElt<F>> {
        let mut x = h.clone();
        for t in w.reduced_word() {
            x = self.mul_gen(&x, t, Side::Right)?;
        }
        Ok(x)
    }

    pub fn mul(&self, a: &HeckeElt<F>, b: &HeckeElt<F>) -> Result<HeckeElt<F>> {
        self.check_rank(a)?;
        self.check_rank(b)?;
        let mut out = HeckeElt::zero(self.d);
        for (w, c) in b.terms() {
            let x = self.mul_basis_right(a, w)?;
            out = out.add(&x.scale(c));
        }
        Ok(out)
    }

    pub fn mul_all(&self, factors: &[HeckeElt<F>]) -> Result<HeckeElt<F>> {
        let mut acc = self.one();
        for f in factors {
            acc = self.mul(&acc, f)?;
        }
        Ok(acc)
    }

    pub fn to_vec(&self, h: &HeckeElt<F>) -> Vec<F> {
        let mut v = vec![F::zero(); self.dim()];
        for (w, c) in h.terms() {
            v[self.index[w]] = c.clone();
        }
        v
    }

    pub fn from_vec(&self, v: &[F]) -> HeckeElt<F> {
        let mut h = HeckeElt::zero(self.d);
        for (w, c) in self.elements.iter().zip(v) {
            h.add_term(w.clone(), c.clone());
        }
        h
    }

    /// `q^{-l_A(w)} Q^{-l_0(w)}`, the eigenvalue weight used for coset sums.
    pub fn weight(&self, w: &SignedPerm) -> F {
        self.params.monomial(-(w.length_a() as i64), -(w.length_zero() as i64))
    }

    /// `sum_{w in X} (wt(w) / wt(min X)) T_w` over a set sorted by length.
    pub fn weighted_sum(&self, set: &[SignedPerm]) -> HeckeElt<F> {
        let mut h = HeckeElt::zero(self.d);
        let Some(first) = set.first() else { return h };
        let base = self.weight(first).inv().expect("weights are units");
        for w in set {
            h.add_term(w.clone(), self.weight(w).mul(&base));
        }
        h
    }

    /// Weighted sum over the parabolic subgroup generated by `gens`.
    pub fn parabolic_sum(&self, gens: &[usize]) -> Result<HeckeElt<F>> {
        Ok(self.weighted_sum(&subgroup_elements(self.d, gens)?))
    }

    /// `x_λ`, the weighted sum over `W_λ`.
    pub fn x_lambda(&self, lam: &CompositionB) -> Result<HeckeElt<F>> {
        if lam.degree() != self.d {
            return Err(Error::InvalidWeight(format!("{lam} has degree {}", lam.degree())));
        }
        self.parabolic_sum(&lam.parabolic())
    }

    /// Weighted sum over `W_J g W_K`, normalised so that `T_g` has
    /// coefficient 1.
    pub fn double_coset_sum(&self, j: &[usize], g: &SignedPerm, k: &[usize]) -> Result<HeckeElt<F>> {
        let dcs = double_cosets(self.d, &type_b_gens(self.d), j, k)?;
        for c in dcs.iter() {
            if c.members.contains(g) {
                if &c.rep != g {
                    return Err(Error::NotMinimalRep(g.to_string()));
                }
                return Ok(self.weighted_sum(&c.members));
            }
        }
        Err(Error::NotMinimalRep(g.to_string()))
    }

    /// `L_m = T_{m-1} ... T_1 T_0 T_1 ... T_{m-1}`.
    pub fn jm(&self, m: usize) -> Result<HeckeElt<F>> {
        if m == 0 || m > self.d {
            return Err(Error::OutOfRange(m));
        }
        let mut word: Vec<usize> = (1..m).rev().collect();
        word.push(0);
        word.extend(1..m);
        Ok(self.t(&SignedPerm::from_word(self.d, &word)?))
    }

    fn u_product(&self, i: usize, plus: bool) -> Result<HeckeElt<F>> {
        if i > self.d {
            return Err(Error::OutOfRange(i));
        }
        let shift = if plus {
            self.params.big_q.clone()
        } else {
            self.params.big_q_inv.neg()
        };
        let mut acc = self.one();
        for l in 0..i {
            let factor = self.jm(l + 1)?.add(&self.scalar(shift.clone()));
            acc = self.mul(&acc, &factor)?;
        }
        Ok(acc)
    }

    /// `u^+_i = prod_{l<i} (L_{l+1} + Q)`.
    pub fn u_plus(&self, i: usize) -> Result<HeckeElt<F>> {
        self.u_product(i, true)
    }

    /// `u^-_i = prod_{l<i} (L_{l+1} - Q^{-1})`.
    pub fn u_minus(&self, i: usize) -> Result<HeckeElt<F>> {
        self.u_product(i, false)
    }

    /// `v_{a,b} = u^-_b T_{w_{a,b}} u^+_a`.
    pub fn v_ab(&self, a: usize, b: usize) -> Result<HeckeElt<F>> {
        if a + b != self.d {
            return Err(Error::BadSplit(a, b, self.d));
        }
        let w = self.t(&block_shuffle(a, b));
        self.mul_all(&[self.u_minus(b)?, w, self.u_plus(a)?])
    }

    /// Generators `T_t`, `t != k`, of the Young subalgebra `H(Σ_k × Σ_{d-k})`.
    pub fn young_split_gens(&self, k: usize) -> Vec<usize> {
        (1..self.d).filter(|&t| t != k).collect()
    }

    /// An idempotent `e` lying in `v_{a,b} H`, acting as the identity on
    /// `v_{a,b} H` from the left and commuting with `H(Σ_b × Σ_a)`.
    ///
    /// Left multiplication by `T_t` with `t != b` preserves `v_{a,b} H`
    /// (`T_t v_{a,b} = v_{a,b} T_{t'}`), which is why the commuting Young
    /// subalgebra has its blocks in the order `b, a`.
    pub fn e_ab(&self, a: usize, b: usize) -> Result<HeckeElt<F>> {
        let v = self.v_ab(a, b)?;
        let gens = self.young_split_gens(b);
        let span: Vec<HeckeElt<F>> = self
            .elements
            .iter()
            .map(|w| self.mul_basis_right(&v, w))
            .collect::<Result<_>>()?;
        let vecs: Vec<Vec<F>> = span.iter().map(|h| self.to_vec(h)).collect();
        let (_, pivots) = Mat::from_cols(&vecs, self.dim()).rref();
        let basis: Vec<&HeckeElt<F>> = pivots.iter().map(|&p| &span[p]).collect();
        if basis.is_empty() {
            return Err(Error::NotInvertible);
        }
        // unknown y_k multiplies basis[k]; equations stacked by block
        let n = self.dim();
        let mut rows: Vec<Vec<F>> = vec![Vec::with_capacity(basis.len()); n * (1 + gens.len())];
        for x in &basis {
            let mut col = self.to_vec(&self.mul(x, &v)?);
            for &t in &gens {
                let right = self.mul_gen(x, t, Side::Right)?;
                let left = self.mul_gen(x, t, Side::Left)?;
                col.extend(self.to_vec(&right.sub(&left)));
            }
            for (r, val) in rows.iter_mut().zip(col) {
                r.push(val);
            }
        }
        let mut rhs = self.to_vec(&v);
        rhs.resize(rows.len(), F::zero());
        let y = Mat::from_rows(rows).solve(&rhs).ok_or(Error::NotInvertible)?;
        let mut e = HeckeElt::zero(self.d);
        for (c, x) in y.iter().zip(&basis) {
            e = e.add(&x.scale(c));
        }
        Ok(e)
    }

    /// The elements of `Σ_k × Σ_{d-k}`.
    pub fn young_split_basis(&self, k: usize) -> Result<Vec<SignedPerm>> {
        subgroup_elements(self.d, &self.young_split_gens(k))
    }

    /// Dimension of the span of the given elements.
    pub fn span_dim(&self, hs: &[HeckeElt<F>]) -> usize {
        rank_of(&hs.iter().map(|h| self.to_vec(h)).collect::<Vec<_>>())
    }

    pub fn coordinatizer(&self, hs: &[HeckeElt<F>]) -> Result<Coordinatizer<F>> {
        Coordinatizer::new(hs.iter().map(|h| self.to_vec(h)).collect(), self.dim())
    }

    pub fn commutes(&self, a: &HeckeElt<F>, b: &HeckeElt<F>) -> Result<bool> {
        Ok(self.mul(a, b)? == self.mul(b, a)?)
    }
}

impl<F: Field> HeckeAlg<F> {
    /// Quadratic and braid relations among the generators.
    pub fn check_relations(&self) -> Result<bool> {
        let d = self.d;
        for t in 0..d {
            let g = self.gen(t)?;
            let sq = self.mul(&g, &g)?;
            let expect = g.scale(&self.params.quadratic_coeff(t)).add(&self.one());
            if sq != expect {
                return Ok(false);
            }
            for s in t + 1..d {
                let h = self.gen(s)?;
                let lhs;
                let rhs;
                if t == 0 && s == 1 {
                    lhs = self.mul_all(&[g.clone(), h.clone(), g.clone(), h.clone()])?;
                    rhs = self.mul_all(&[h.clone(), g.clone(), h.clone(), g.clone()])?;
                } else if s == t + 1 {
                    lhs = self.mul_all(&[g.clone(), h.clone(), g.clone()])?;
                    rhs = self.mul_all(&[h.clone(), g.clone(), h.clone()])?;
                } else {
                    lhs = self.mul(&g, &h)?;
                    rhs = self.mul(&h, &g)?;
                }
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `u^±_d` commutes with every generator, and `T_0 u^+_d = Q^{-1} u^+_d`,
    /// `T_0 u^-_d = -Q u^-_d`.
    pub fn check_u_central(&self) -> Result<Check> {
        let up = self.u_plus(self.d)?;
        let um = self.u_minus(self.d)?;
        let mut ok = true;
        for t in 0..self.d {
            let g = self.gen(t)?;
            ok &= self.commutes(&g, &up)? && self.commutes(&g, &um)?;
        }
        if self.d > 0 {
            let t0 = self.gen(0)?;
            ok &= self.mul(&t0, &up)? == up.scale(&self.params.big_q_inv);
            ok &= self.mul(&t0, &um)? == um.scale(&self.params.big_q.neg());
        }
        Ok(Check::new("hecke.central_u", ok, vec![self.d]))
    }

    /// `u^-_b T_w u^+_a = 0` for all `w` once `a + b > d`.
    pub fn check_u_vanishing(&self) -> Result<Check> {
        let mut ok = true;
        let mut witness = None;
        for a in 0..=self.d {
            for b in 0..=self.d {
                if a + b <= self.d {
                    continue;
                }
                let um = self.u_minus(b)?;
                let up = self.u_plus(a)?;
                for w in self.elements.iter() {
                    let x = self.mul(&self.mul_basis_right(&um, w)?, &up)?;
                    if !x.is_zero() {
                        ok = false;
                        witness.get_or_insert_with(|| format!("a={a} b={b} w={w}"));
                    }
                }
            }
        }
        Ok(Check::new("hecke.u_vanishing", ok, vec![self.d]).with_counterexample(witness))
    }

    /// Idempotent, left identity on `v_{a,b} H`, same right ideal, commutes
    /// with `H(Σ_b × Σ_a)`, and `e H e = e H(Σ_b × Σ_a)`.
    pub fn check_e_ab(&self, a: usize, b: usize) -> Result<Vec<Check>> {
        let e = self.e_ab(a, b)?;
        let v = self.v_ab(a, b)?;
        let mut out = Vec::new();
        out.push(Check::new("hecke.e_idempotent", self.mul(&e, &e)? == e, vec![a, b]));
        let ev: Vec<HeckeElt<F>> = self
            .elements
            .iter()
            .map(|w| self.mul_basis_right(&e, w))
            .collect::<Result<_>>()?;
        let vv: Vec<HeckeElt<F>> = self
            .elements
            .iter()
            .map(|w| self.mul_basis_right(&v, w))
            .collect::<Result<_>>()?;
        let de = self.span_dim(&ev);
        let dv = self.span_dim(&vv);
        let mut both = ev.clone();
        both.extend(vv.iter().cloned());
        let joint = self.span_dim(&both);
        out.push(Check::new(
            "hecke.e_right_ideal",
            de == dv && joint == dv && self.mul(&e, &v)? == v,
            vec![de, dv, joint],
        ));
        let young = self.young_split_basis(b)?;
        let mut comm = true;
        for t in self.young_split_gens(b) {
            comm &= self.commutes(&e, &self.gen(t)?)?;
        }
        out.push(Check::new("hecke.e_commutes_young", comm, vec![young.len()]));
        let mut ehe = Vec::new();
        for w in self.elements.iter() {
            ehe.push(self.mul(&self.mul_basis_right(&e, w)?, &e)?);
        }
        let ey: Vec<HeckeElt<F>> = young
            .iter()
            .map(|w| self.mul_basis_right(&e, w))
            .collect::<Result<_>>()?;
        let d1 = self.span_dim(&ehe);
        let d2 = self.span_dim(&ey);
        let mut joint = ehe.clone();
        joint.extend(ey.iter().cloned());
        let dj = self.span_dim(&joint);
        out.push(Check::new(
            "hecke.e_corner",
            d1 == d2 && dj == d1 && d2 == young.len(),
            vec![d1, d2, young.len()],
        ));
        Ok(out)
    }

    /// The corners `e_i H e_i` add up to `sum_i i!(d-i)!` and each is a
    /// faithful copy of `H(Σ_i × Σ_{d-i})` via `h -> e h`.
    pub fn check_morita(&self) -> Result<Check> {
        let mut total = 0;
        let mut expected = 0;
        let mut ok = true;
        let mut dims = Vec::new();
        for a in 0..=self.d {
            let b = self.d - a;
            let e = self.e_ab(a, b)?;
            let young = self.young_split_basis(b)?;
            expected += young.len();
            let images: Vec<HeckeElt<F>> = young
                .iter()
                .map(|w| self.mul_basis_right(&e, w))
                .collect::<Result<_>>()?;
            let mut corner = Vec::new();
            for w in self.elements.iter() {
                corner.push(self.mul(&self.mul_basis_right(&e, w)?, &e)?);
            }
            let dc = self.span_dim(&corner);
            dims.push(dc);
            total += dc;
            ok &= self.span_dim(&images) == young.len();
            // h -> e h is multiplicative on the Young subalgebra
            for x in &young {
                for y in &young {
                    let xy = self.mul(&self.t(x), &self.t(y))?;
                    let lhs = self.mul(&e, &xy)?;
                    let rhs = self.mul(&self.mul_basis_right(&e, x)?, &self.mul_basis_right(&e, y)?)?;
                    ok &= lhs == rhs;
                }
            }
        }
        ok &= total == expected;
        dims.push(total);
        Ok(Check::new("hecke.morita_corners", ok, dims))
    }

    /// Jucys-Murphy elements commute pairwise.
    pub fn check_jm_commute(&self) -> Result<bool> {
        for i in 1..=self.d {
            for j in i + 1..=self.d {
                if !self.commutes(&self.jm(i)?, &self.jm(j)?)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, FracBi, GaussRational, LaurentBi, Rational};
    use proptest::prelude::*;

    fn alg(d: usize) -> HeckeAlg<Rational> {
        HeckeAlg::new(d, Params::ints(2, 3).unwrap()).unwrap()
    }

    fn sym(d: usize) -> HeckeAlg<FracBi> {
        HeckeAlg::new(d, Params::symbolic()).unwrap()
    }

    fn sp(v: &[i32]) -> SignedPerm {
        SignedPerm::new(v.to_vec()).unwrap()
    }

    #[test]
    fn generator_products() {
        let h = sym(2);
        let t0 = h.gen(0).unwrap();
        let t1 = h.gen(1).unwrap();
        let p = h.params().clone();
        assert_eq!(
            h.mul(&t0, &t0).unwrap(),
            h.one().add(&t0.scale(&p.big_q_inv.sub(&p.big_q)))
        );
        assert_eq!(h.mul(&h.one(), &t1).unwrap(), t1);
        assert_eq!(h.mul(&t1, &t1).unwrap(), h.one().add(&t1.scale(&p.q_inv.sub(&p.q))));
        assert_eq!(h.gen(2), Err(Error::BadGenerator(2, 2)));
        assert_eq!(h.mul_gen(&t0, 5, Side::Right), Err(Error::BadGenerator(5, 2)));
    }

    #[test]
    fn relations_hold() {
        for d in 1..=4 {
            assert!(alg(d).check_relations().unwrap(), "d={d}");
        }
        assert!(sym(3).check_relations().unwrap());
        let h = sym(3);
        let s1s2 = SignedPerm::from_word(3, &[1, 2]).unwrap();
        assert_eq!(h.mul(&h.gen(1).unwrap(), &h.gen(2).unwrap()).unwrap(), h.t(&s1s2));
        let other = alg(2);
        assert_eq!(
            h.mul(&h.one(), &HeckeElt::zero(2)).unwrap_err(),
            Error::RankMismatch(2, 3)
        );
        drop(other);
    }

    #[test]
    fn coset_sums() {
        let h = sym(1);
        let p = h.params().clone();
        let full = CompositionB::new(3, 3, vec![0]).unwrap();
        // weighted sum over W^B(1)
        assert_eq!(
            h.x_lambda(&full).unwrap(),
            h.one().add(&h.gen(0).unwrap().scale(&p.big_q_inv))
        );
        let triv = CompositionB::new(2, 0, vec![1]).unwrap();
        assert_eq!(h.x_lambda(&triv).unwrap(), h.one());
        let h2 = alg(2);
        let all = h2.parabolic_sum(&[0, 1]).unwrap();
        assert_eq!(all.num_terms(), 8);
        // x_λ T_t = (eigenvalue) x_λ on W_λ
        for t in 0..2 {
            let x = h2.mul_gen(&all, t, Side::Right).unwrap();
            let c = if t == 0 {
                h2.params().big_q_inv.clone()
            } else {
                h2.params().q_inv.clone()
            };
            assert_eq!(x, all.scale(&c));
        }
        assert_eq!(
            h2.double_coset_sum(&[1], &sp(&[2, 1]), &[1]),
            Err(Error::NotMinimalRep("[2,1]".into()))
        );
        let g = h2.double_coset_sum(&[1], &sp(&[-1, 2]), &[1]).unwrap();
        assert_eq!(g.coeff(&sp(&[-1, 2])), rat(1, 1));
        assert_eq!(g.num_terms(), 4);
    }

    #[test]
    fn jucys_murphy() {
        let h = sym(2);
        assert_eq!(h.jm(1).unwrap(), h.gen(0).unwrap());
        let l2 = h.jm(2).unwrap();
        let t1 = h.gen(1).unwrap();
        let t0 = h.gen(0).unwrap();
        assert_eq!(l2, h.mul_all(&[t1.clone(), t0, t1]).unwrap());
        assert_eq!(l2, h.t(&SignedPerm::from_word(2, &[1, 0, 1]).unwrap()));
        assert!(h.check_jm_commute().unwrap());
        assert!(alg(3).check_jm_commute().unwrap());
        assert_eq!(h.jm(0), Err(Error::OutOfRange(0)));
        assert_eq!(h.jm(3), Err(Error::OutOfRange(3)));
    }

    #[test]
    fn u_elements() {
        let h = sym(1);
        let p = h.params().clone();
        let up = h.u_plus(1).unwrap();
        assert_eq!(up, h.gen(0).unwrap().add(&h.scalar(p.big_q.clone())));
        assert_eq!(h.u_minus(0).unwrap(), h.one());
        let sq = h.mul(&up, &up).unwrap();
        assert_eq!(sq, up.scale(&p.big_q.add(&p.big_q_inv)));
        assert_eq!(h.u_plus(2), Err(Error::OutOfRange(2)));
    }

    #[test]
    fn v_elements() {
        let h = sym(2);
        assert_eq!(h.v_ab(2, 0).unwrap(), h.u_plus(2).unwrap());
        assert_eq!(h.v_ab(0, 2).unwrap(), h.u_minus(2).unwrap());
        assert_eq!(h.v_ab(1, 2), Err(Error::BadSplit(1, 2, 2)));
        let p = h.params().clone();
        let f1 = h.gen(0).unwrap().sub(&h.scalar(p.big_q_inv.clone()));
        let f2 = h.gen(0).unwrap().add(&h.scalar(p.big_q.clone()));
        let direct = h.mul_all(&[f1, h.gen(1).unwrap(), f2]).unwrap();
        assert_eq!(h.v_ab(1, 1).unwrap(), direct);
    }

    #[test]
    fn e_rank_one() {
        let h = sym(1);
        let p = h.params().clone();
        let s = p.big_q.add(&p.big_q_inv).inv().unwrap();
        assert_eq!(h.e_ab(1, 0).unwrap(), h.u_plus(1).unwrap().scale(&s));
        assert_eq!(h.e_ab(0, 1).unwrap(), h.u_minus(1).unwrap().scale(&s.neg()));
    }

    #[test]
    fn e_idempotent_rank_two() {
        let h = alg(2);
        for a in 0..=2 {
            let e = h.e_ab(a, 2 - a).unwrap();
            assert_eq!(h.mul(&e, &e).unwrap(), e);
        }
    }

    #[test]
    fn e_fails_where_f_b_vanishes() {
        // Q = i makes Q + Q^{-1} vanish
        let p = Params::new(GaussRational::from_i64(2), GaussRational::i()).unwrap();
        let h = HeckeAlg::new(1, p).unwrap();
        assert_eq!(h.e_ab(1, 0), Err(Error::NotInvertible));
    }

    #[test]
    fn dipper_james_checks() {
        for d in 1..=3 {
            let h = alg(d);
            assert!(h.check_u_central().unwrap().passed());
            if d <= 2 {
                assert!(h.check_u_vanishing().unwrap().passed());
            }
            for a in 0..=d {
                for c in h.check_e_ab(a, d - a).unwrap() {
                    assert!(c.passed(), "d={d} a={a} {c:?}");
                }
            }
            assert!(h.check_morita().unwrap().passed(), "d={d}");
        }
    }

    #[test]
    fn symbolic_specializes() {
        let h = sym(2);
        let r = alg(2);
        let p = Params::ints(2, 3).unwrap();
        let e = h.e_ab(1, 1).unwrap();
        let er = r.e_ab(1, 1).unwrap();
        let mut expected = HeckeElt::zero(2);
        for (w, c) in e.terms() {
            let num = p.specialize(c.num());
            let den = p.specialize(c.den());
            expected.add_term(w.clone(), num.div(&den).unwrap());
        }
        assert_eq!(expected, er);
        let _ = LaurentBi::q();
    }

    fn arb_elt(d: usize) -> impl Strategy<Value = HeckeElt<Rational>> {
        let n = enumerate_group(d).unwrap();
        prop::collection::vec((0..n.len(), -3i64..4), 1..4).prop_map(move |ts| {
            let mut h = HeckeElt::zero(d);
            for (i, c) in ts {
                h.add_term(n[i].clone(), rat(c, 1));
            }
            h
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn associativity(a in arb_elt(3), b in arb_elt(3), c in arb_elt(3)) {
            let h = alg(3);
            let l = h.mul(&h.mul(&a, &b).unwrap(), &c).unwrap();
            let r = h.mul(&a, &h.mul(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(l, r);
        }

        #[test]
        fn left_and_right_generator_actions_agree(a in arb_elt(3), t in 0usize..3) {
            let h = alg(3);
            let g = h.gen(t).unwrap();
            prop_assert_eq!(h.mul_gen(&a, t, Side::Left).unwrap(), h.mul(&g, &a).unwrap());
            prop_assert_eq!(h.mul_gen(&a, t, Side::Right).unwrap(), h.mul(&a, &g).unwrap());
        }
    }
}
