//! Quantum matrix coordinates, the coideal `J^B` and the dual algebra.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::linalg::{rank_of, Coordinatizer, Mat};
use crate::report::Check;
use crate::scalars::{Field, Params};
use crate::schur::{dim_formula, SchurType};
use crate::tensor::{index_set, words_over, TensorElt, TensorSpace};

/// Generator `x_{ij}`.
pub type Var = (i32, i32);
/// A product of generators; canonical when nondecreasing.
pub type Mono = Vec<Var>;

pub fn fmt_mono(m: &[Var]) -> String {
    let parts: Vec<String> = m.iter().map(|(i, j)| format!("({i},{j})")).collect();
    format!("[{}]", parts.join(","))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly<F> {
    terms: BTreeMap<Mono, F>,
}

impl<F: Field> QPoly<F> {
    pub fn zero() -> Self {
        QPoly { terms: BTreeMap::new() }
    }

    pub fn mono(m: Mono) -> Self {
        let mut p = Self::zero();
        p.terms.insert(m, F::one());
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &F)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &[Var]) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    pub fn add_term(&mut self, m: Mono, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = v.add(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &F) {
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x.mul(c));
        }
    }
}

/// Family label of a generator of `J^B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    B1,
    B2,
    B3,
    B4,
}

/// The quantum matrix bialgebra `K[M^A_q(n)]` on the index set `I(n)`.
pub struct QuantumMatrix<F> {
    n: usize,
    params: Params<F>,
    memo: RefCell<HashMap<Mono, QPoly<F>>>,
}

impl<F: Field> QuantumMatrix<F> {
    pub fn new(n: usize, params: Params<F>) -> Self {
        QuantumMatrix {
            n,
            params,
            memo: RefCell::new(HashMap::new()),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn params(&self) -> &Params<F> {
        &self.params
    }

    pub fn vars(&self) -> Vec<Var> {
        let idx = index_set(self.n);
        idx.iter().flat_map(|&i| idx.iter().map(move |&j| (i, j))).collect()
    }

    /// Canonical monomials of degree `d`.
    pub fn monomials(&self, d: usize) -> Vec<Mono> {
        fn go(vars: &[Var], start: usize, d: usize, cur: &mut Mono, out: &mut Vec<Mono>) {
            if d == 0 {
                out.push(cur.clone());
                return;
            }
            for k in start..vars.len() {
                cur.push(vars[k]);
                go(vars, k, d - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(&self.vars(), 0, d, &mut Vec::new(), &mut out);
        out
    }

    /// Rewrite the out-of-order pair `x_a x_b` (`a > b`) as a combination of
    /// ordered pairs.
    fn swap_rule(&self, a: Var, b: Var) -> Vec<([Var; 2], F)> {
        let (k, i) = a;
        let (l, j) = b;
        let qi = self.params.q_inv.clone();
        if k == l {
            // x_{ki} x_{kj} = q^{-1} x_{kj} x_{ki}, i > j
            vec![([b, a], qi)]
        } else if i == j {
            // x_{ki} x_{li} = q^{-1} x_{li} x_{ki}, k > l
            vec![([b, a], qi)]
        } else if i < j {
            vec![([b, a], F::one())]
        } else {
            let c = qi.sub(&self.params.q);
            vec![([b, a], F::one()), ([(l, i), (k, j)], c)]
        }
    }

    fn straighten_impl(&self, word: &[Var], rightmost: bool) -> QPoly<F> {
        let descents = (0..word.len().saturating_sub(1)).filter(|&p| word[p] > word[p + 1]);
        let pos = if rightmost {
            descents.last()
        } else {
            descents.into_iter().next()
        };
        let Some(p) = pos else {
            return QPoly::mono(word.to_vec());
        };
        if !rightmost {
            if let Some(hit) = self.memo.borrow().get(word) {
                return hit.clone();
            }
        }
        let mut out = QPoly::zero();
        for (pair, c) in self.swap_rule(word[p], word[p + 1]) {
            let mut w = word.to_vec();
            w[p] = pair[0];
            w[p + 1] = pair[1];
            out.add_scaled(&self.straighten_impl(&w, rightmost), &c);
        }
        if !rightmost {
            self.memo.borrow_mut().insert(word.to_vec(), out.clone());
        }
        out
    }

    /// The class of `x_{w_1} ... x_{w_d}` in canonical monomials.
    pub fn straighten(&self, word: &[Var]) -> QPoly<F> {
        self.straighten_impl(word, false)
    }

    /// Same, always resolving the rightmost inversion first.
    pub fn straighten_rightmost(&self, word: &[Var]) -> QPoly<F> {
        self.straighten_impl(word, true)
    }

    pub fn straighten_poly(&self, p: &QPoly<F>) -> QPoly<F> {
        let mut out = QPoly::zero();
        for (m, c) in p.terms() {
            out.add_scaled(&self.straighten(m), c);
        }
        out
    }

    /// `p · m` for a monomial word `m`, straightened.
    pub fn mul_right(&self, p: &QPoly<F>, m: &[Var]) -> QPoly<F> {
        let mut out = QPoly::zero();
        for (w, c) in p.terms() {
            let mut word = w.clone();
            word.extend_from_slice(m);
            out.add_scaled(&self.straighten(&word), c);
        }
        out
    }

    /// `Δ(x_{w_1} ... x_{w_d}) = Σ_l x_{w_1 l_1}... ⊗ x_{l_1 w_1}...`, both legs straightened.
    pub fn comult(&self, word: &[Var]) -> BTreeMap<(Mono, Mono), F> {
        let mut out: BTreeMap<(Mono, Mono), F> = BTreeMap::new();
        for l in words_over(&index_set(self.n), word.len()) {
            let left: Mono = word.iter().zip(&l).map(|(&(i, _), &k)| (i, k)).collect();
            let right: Mono = word.iter().zip(&l).map(|(&(_, j), &k)| (k, j)).collect();
            let (pl, pr) = (self.straighten(&left), self.straighten(&right));
            for (a, x) in pl.terms() {
                for (b, y) in pr.terms() {
                    let key = (a.clone(), b.clone());
                    let v = x.mul(y);
                    let e = out.entry(key.clone()).or_insert_with(F::zero);
                    *e = e.add(&v);
                    if e.is_zero() {
                        out.remove(&key);
                    }
                }
            }
        }
        out
    }

    /// Degree-one generators of `J^B` from the four families.
    pub fn jb_generators(&self) -> Vec<(Family, QPoly<F>)> {
        let idx = index_set(self.n);
        let p = &self.params;
        let mut out = Vec::new();
        let poly = |terms: Vec<(Var, F)>| {
            let mut q = QPoly::zero();
            for (v, c) in terms {
                q.add_term(vec![v], c);
            }
            q
        };
        let neg1 = F::one().neg();
        for &i in idx.iter().filter(|&&i| i < 0) {
            for &j in idx.iter().filter(|&&j| j > 0) {
                out.push((Family::B1, poly(vec![((i, j), F::one()), ((-i, -j), neg1.clone())])));
            }
        }
        for &i in idx.iter().filter(|&&i| i < 0) {
            for &j in idx.iter().filter(|&&j| j < 0) {
                let c = p.big_q_inv.sub(&p.big_q).neg();
                out.push((
                    Family::B2,
                    poly(vec![((i, j), F::one()), ((-i, -j), neg1.clone()), ((-i, j), c)]),
                ));
            }
        }
        if self.n % 2 == 1 {
            for &j in idx.iter().filter(|&&j| j < 0) {
                out.push((Family::B3, poly(vec![((0, j), F::one()), ((0, -j), p.big_q_inv.neg())])));
            }
            for &i in idx.iter().filter(|&&i| i < 0) {
                out.push((Family::B4, poly(vec![((i, 0), F::one()), ((-i, 0), p.big_q_inv.neg())])));
            }
        }
        out
    }

    /// `τ(v_μ) = Σ_ν v_ν ⊗ x_{ν μ}` with coefficients straightened.
    fn tau(&self, x: &TensorElt<F>) -> BTreeMap<Vec<i32>, QPoly<F>> {
        let d = x.rank();
        let mut out: BTreeMap<Vec<i32>, QPoly<F>> = BTreeMap::new();
        for (mu, c) in x.terms() {
            for nu in words_over(&index_set(self.n), d) {
                let word: Mono = nu.iter().zip(mu).map(|(&a, &b)| (a, b)).collect();
                out.entry(nu)
                    .or_insert_with(QPoly::zero)
                    .add_scaled(&self.straighten(&word), c);
            }
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Coefficients of `τ(v_μ) T_0 - τ(v_μ T_0)` over all `μ`: by definition
    /// they span `J^B(n, d)`.
    pub fn tcomm_defects(&self, space: &TensorSpace<F>) -> Result<Vec<QPoly<F>>> {
        let mut out = Vec::new();
        for mu in space.words() {
            let v = TensorElt::basis(mu.clone());
            let mut lhs: BTreeMap<Vec<i32>, QPoly<F>> = BTreeMap::new();
            for (nu, p) in self.tau(&v) {
                let moved = space.act_gen(&TensorElt::basis(nu), 0)?;
                for (w, c) in moved.terms() {
                    lhs.entry(w.clone()).or_insert_with(QPoly::zero).add_scaled(&p, c);
                }
            }
            let rhs = self.tau(&space.act_gen(&v, 0)?);
            for nu in space.words() {
                let mut diff = lhs.get(nu).cloned().unwrap_or_else(QPoly::zero);
                if let Some(r) = rhs.get(nu) {
                    diff.add_scaled(r, &F::one().neg());
                }
                if !diff.is_zero() {
                    out.push(diff);
                }
            }
        }
        Ok(out)
    }
}

/// `K[M^B_{Q,q}(n)]_d = K[M^A_q(n)]_d / J^B(n, d)` with a monomial basis.
pub struct QuotientBasis<F> {
    qm: QuantumMatrix<F>,
    d: usize,
    monos: Vec<Mono>,
    index: HashMap<Mono, usize>,
    basis: Vec<Mono>,
    reduce_cols: Vec<Vec<F>>,
    j_span: Vec<Vec<F>>,
    degenerate: bool,
}

/// All factors of `m` lie in the shaded index region.
pub fn in_shaded_region(n: usize, m: &[Var]) -> bool {
    m.iter().all(|&(i, j)| i < 0 || (n % 2 == 1 && i == 0 && j <= 0))
}

impl<F: Field> QuotientBasis<F> {
    pub fn new(n: usize, d: usize, params: Params<F>) -> Result<Self> {
        if d == 0 {
            return Err(Error::OutOfRange(d));
        }
        let words = (n * n) as u128;
        let total = crate::schur::binomial(words + d as u128 - 1, d as u128);
        if total > 400 {
            return Err(Error::SizeGuard(format!("{total} monomials in degree {d}")));
        }
        let qm = QuantumMatrix::new(n, params);
        let all = qm.monomials(d);
        // unshaded monomials first so that elimination pivots on them
        let mut monos: Vec<Mono> = all.iter().filter(|m| !in_shaded_region(n, m)).cloned().collect();
        monos.extend(all.iter().filter(|m| in_shaded_region(n, m)).cloned());
        let index: HashMap<Mono, usize> = monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let to_vec = |p: &QPoly<F>| {
            let mut v = vec![F::zero(); monos.len()];
            for (m, c) in p.terms() {
                v[index[m]] = c.clone();
            }
            v
        };
        let gens = qm.jb_generators();
        let mut rows = Vec::new();
        for rest in qm.monomials(d - 1) {
            for (_, g) in &gens {
                let p = qm.mul_right(g, &rest);
                if !p.is_zero() {
                    rows.push(to_vec(&p));
                }
            }
        }
        let (basis, reduce_cols, j_span) = if rows.is_empty() {
            let id: Vec<Vec<F>> = (0..monos.len())
                .map(|k| {
                    let mut v = vec![F::zero(); monos.len()];
                    v[k] = F::one();
                    v
                })
                .collect();
            (monos.clone(), id, Vec::new())
        } else {
            let m = Mat::from_rows(rows);
            let (r, pivots) = m.rref();
            let free: Vec<usize> = (0..monos.len()).filter(|c| !pivots.contains(c)).collect();
            let pos: HashMap<usize, usize> = free.iter().enumerate().map(|(k, &c)| (c, k)).collect();
            let mut cols = vec![Vec::new(); monos.len()];
            for (k, &c) in free.iter().enumerate() {
                let mut v = vec![F::zero(); free.len()];
                v[k] = F::one();
                cols[c] = v;
            }
            for (row, &c) in pivots.iter().enumerate() {
                let mut v = vec![F::zero(); free.len()];
                for &f in &free {
                    let x = r.get(row, f);
                    if !x.is_zero() {
                        v[pos[&f]] = x.neg();
                    }
                }
                cols[c] = v;
            }
            let span: Vec<Vec<F>> = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
            (free.iter().map(|&c| monos[c].clone()).collect(), cols, span)
        };
        let degenerate = basis.len() as u128 != dim_formula(n, d, SchurType::B);
        Ok(QuotientBasis {
            qm,
            d,
            monos,
            index,
            basis,
            reduce_cols,
            j_span,
            degenerate,
        })
    }

    pub fn quantum(&self) -> &QuantumMatrix<F> {
        &self.qm
    }

    pub fn n(&self) -> usize {
        self.qm.n
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Mono] {
        &self.basis
    }

    /// The dimension differs from the closed formula (degenerate parameters).
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn j_dim(&self) -> usize {
        self.j_span.len()
    }

    fn poly_vec(&self, p: &QPoly<F>) -> Vec<F> {
        let mut v = vec![F::zero(); self.monos.len()];
        for (m, c) in p.terms() {
            v[self.index[m]] = c.clone();
        }
        v
    }

    /// Coordinates of the class of a canonical polynomial.
    pub fn reduce(&self, p: &QPoly<F>) -> Vec<F> {
        let mut out = vec![F::zero(); self.dim()];
        for (m, c) in p.terms() {
            for (k, x) in self.reduce_cols[self.index[m]].iter().enumerate() {
                if !x.is_zero() {
                    out[k] = out[k].add(&x.mul(c));
                }
            }
        }
        out
    }

    /// Class of an arbitrary word.
    pub fn reduce_word(&self, word: &[Var]) -> Vec<F> {
        self.reduce(&self.qm.straighten(word))
    }

    /// `Δ̄(e_k) = Σ c^{ij}_k e_i ⊗ e_j`, indexed `[k][i][j]`.
    fn comult_table(&self) -> Vec<Vec<Vec<F>>> {
        self.basis
            .iter()
            .map(|m| {
                let mut t = vec![vec![F::zero(); self.dim()]; self.dim()];
                for ((a, b), c) in self.qm.comult(m) {
                    let (ra, rb) = (&self.reduce_cols[self.index[&a]], &self.reduce_cols[self.index[&b]]);
                    for (i, x) in ra.iter().enumerate() {
                        if x.is_zero() {
                            continue;
                        }
                        for (j, y) in rb.iter().enumerate() {
                            if !y.is_zero() {
                                t[i][j] = t[i][j].add(&x.mul(y).mul(&c));
                            }
                        }
                    }
                }
                t
            })
            .collect()
    }

    /// `Δ(J^B) ⊆ J^B ⊗ A + A ⊗ J^B`: every spanning element of `J^B` maps to
    /// zero under the reduced comultiplication.
    pub fn check_coideal(&self) -> Check {
        let mut bad = None;
        for (k, row) in self.j_span.iter().enumerate() {
            let mut acc: BTreeMap<(usize, usize), F> = BTreeMap::new();
            for (col, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for ((a, b), x) in self.qm.comult(&self.monos[col]) {
                    let (ra, rb) = (&self.reduce_cols[self.index[&a]], &self.reduce_cols[self.index[&b]]);
                    for (i, y) in ra.iter().enumerate() {
                        if y.is_zero() {
                            continue;
                        }
                        for (j, z) in rb.iter().enumerate() {
                            if !z.is_zero() {
                                let e = acc.entry((i, j)).or_insert_with(F::zero);
                                *e = e.add(&y.mul(z).mul(&x).mul(c));
                            }
                        }
                    }
                }
            }
            if acc.values().any(|v| !v.is_zero()) {
                bad.get_or_insert(format!("spanning element {k}"));
            }
        }
        Check::new("qcoord.coideal", bad.is_none(), vec![self.j_span.len()]).with_counterexample(bad)
    }

    /// The span of the right-ideal generators equals the span forced by
    /// commuting the comodule map with `T_0`.
    pub fn check_generators_match_definition(&self, space: &TensorSpace<F>) -> Result<Check> {
        let defects: Vec<Vec<F>> = self.qm.tcomm_defects(space)?.iter().map(|p| self.poly_vec(p)).collect();
        let r_def = rank_of(&defects);
        let mut joint = defects;
        joint.extend(self.j_span.iter().cloned());
        let r_joint = rank_of(&joint);
        let ok = r_def == self.j_span.len() && r_joint == r_def;
        Ok(Check::new(
            "qcoord.generators_match_definition",
            ok,
            vec![r_def, self.j_span.len(), r_joint],
        ))
    }

    /// `(τ(v_μ)) T_0 = τ(v_μ T_0)` in `V^{⊗d} ⊗ K[M^B]_d` for every basis word.
    pub fn check_tcomm(&self, space: &TensorSpace<F>) -> Result<Check> {
        let mut bad = None;
        for (k, p) in self.qm.tcomm_defects(space)?.iter().enumerate() {
            if self.reduce(p).iter().any(|x| !x.is_zero()) {
                bad.get_or_insert(format!("defect {k}"));
            }
        }
        Ok(Check::new("qcoord.t0_compatible", bad.is_none(), vec![space.dim()]).with_counterexample(bad))
    }
}

/// `K[M^B]_d^*` with `(f g)(x) = (f ⊗ g)(Δ̄ x)`, in the dual basis.
pub struct DualAlgebra<F> {
    quotient: QuotientBasis<F>,
    table: Vec<Vec<Vec<F>>>,
    unit: Vec<F>,
}

impl<F: Field> DualAlgebra<F> {
    pub fn new(quotient: QuotientBasis<F>) -> Self {
        let comult = quotient.comult_table();
        let dim = quotient.dim();
        // e_i^* e_j^* = Σ_k c^{ij}_k e_k^*
        let table = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| (0..dim).map(|k| comult[k][i][j].clone()).collect())
                    .collect()
            })
            .collect();
        let unit = quotient
            .basis()
            .iter()
            .map(|m| {
                if m.iter().all(|(i, j)| i == j) {
                    F::one()
                } else {
                    F::zero()
                }
            })
            .collect();
        DualAlgebra { quotient, table, unit }
    }

    pub fn quotient(&self) -> &QuotientBasis<F> {
        &self.quotient
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn unit(&self) -> &[F] {
        &self.unit
    }

    pub fn basis_elt(&self, i: usize) -> Vec<F> {
        let mut v = vec![F::zero(); self.dim()];
        v[i] = F::one();
        v
    }

    pub fn product(&self, f: &[F], g: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); self.dim()];
        for (i, a) in f.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in g.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a.mul(b);
                for (k, c) in self.table[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] = out[k].add(&c.mul(&ab));
                    }
                }
            }
        }
        out
    }

    /// Matrix of `f` on `V^{⊗d}`: entry `[ν][μ] = f(x_{ν_1 μ_1} ... x_{ν_d μ_d})`.
    pub fn pairing_matrix(&self, f: &[F], space: &TensorSpace<F>) -> Mat<F> {
        let words = space.words();
        let mut m = Mat::zeros(words.len(), words.len());
        for (r, nu) in words.iter().enumerate() {
            for (c, mu) in words.iter().enumerate() {
                let word: Mono = nu.iter().zip(mu).map(|(&a, &b)| (a, b)).collect();
                let cls = self.quotient.reduce_word(&word);
                let mut v = F::zero();
                for (x, y) in cls.iter().zip(f) {
                    if !x.is_zero() && !y.is_zero() {
                        v = v.add(&x.mul(y));
                    }
                }
                m.set(r, c, v);
            }
        }
        m
    }

    /// Associativity and the two unit laws on all basis triples.
    pub fn check_algebra_axioms(&self) -> Check {
        let n = self.dim();
        let mut bad = None;
        for i in 0..n {
            let ei = self.basis_elt(i);
            if self.product(&self.unit, &ei) != ei || self.product(&ei, &self.unit) != ei {
                bad.get_or_insert(format!("unit at {i}"));
            }
            for j in 0..n {
                let ij = self.product(&ei, &self.basis_elt(j));
                for k in 0..n {
                    let ek = self.basis_elt(k);
                    let l = self.product(&ij, &ek);
                    let r = self.product(&ei, &self.product(&self.basis_elt(j), &ek));
                    if l != r {
                        bad.get_or_insert(format!("({i},{j},{k})"));
                    }
                }
            }
        }
        Check::new("qcoord.dual_axioms", bad.is_none(), vec![n]).with_counterexample(bad)
    }

    /// The pairing is an injective algebra map into the centralizer and onto it.
    pub fn check_against_centralizer(&self, space: &TensorSpace<F>, centralizer: &[Mat<F>]) -> Result<Vec<Check>> {
        let n = self.dim();
        let mats: Vec<Mat<F>> = (0..n).map(|i| self.pairing_matrix(&self.basis_elt(i), space)).collect();
        let gens: Vec<Mat<F>> = (0..space.rank()).map(|t| space.gen_matrix(t)).collect::<Result<_>>()?;
        let commute = mats.iter().all(|m| gens.iter().all(|a| m.mul(a) == a.mul(m)));
        let flat: Vec<Vec<F>> = mats.iter().map(|m| m.flat().to_vec()).collect();
        let r = rank_of(&flat);
        let mut joint = flat.clone();
        joint.extend(centralizer.iter().map(|m| m.flat().to_vec()));
        let rj = rank_of(&joint);
        let mut out = vec![Check::new(
            "qcoord.pairing_onto_centralizer",
            commute && r == n && rj == r && centralizer.len() == r,
            vec![n, r, centralizer.len(), rj],
        )];
        let mut bad = None;
        for i in 0..n {
            for j in 0..n {
                let prod = self.product(&self.basis_elt(i), &self.basis_elt(j));
                if self.pairing_matrix(&prod, space) != mats[i].mul(&mats[j]) {
                    bad.get_or_insert(format!("e{i}* e{j}*"));
                }
            }
        }
        out.push(Check::new("qcoord.pairing_multiplicative", bad.is_none(), vec![n]).with_counterexample(bad));
        let unit_ok = self.pairing_matrix(&self.unit, space) == Mat::identity(space.dim());
        out.push(Check::new("qcoord.pairing_unit", unit_ok, vec![space.dim()]));
        Ok(out)
    }

    /// Coordinates of `x` in the span of `basis`, via the pairing.
    pub fn coords_of(&self, x: &Mat<F>, space: &TensorSpace<F>) -> Result<Option<Vec<F>>> {
        let flat: Vec<Vec<F>> = (0..self.dim())
            .map(|i| self.pairing_matrix(&self.basis_elt(i), space).flat().to_vec())
            .collect();
        let c = Coordinatizer::new(flat, space.dim() * space.dim())?;
        Ok(c.coords(x.flat()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{FracBi, Rational};
    use crate::schur::centralizer_of;
    use proptest::prelude::*;

    fn p23() -> Params<Rational> {
        Params::ints(2, 3).unwrap()
    }

    #[test]
    fn straightening_rules() {
        let qm = QuantumMatrix::new(2, Params::<FracBi>::symbolic());
        let p = qm.params().clone();
        let got = qm.straighten(&[(1, 1), (1, -1)]);
        let mut expect = QPoly::zero();
        expect.add_term(vec![(1, -1), (1, 1)], p.q_inv.clone());
        assert_eq!(got, expect);
        // k > l, i < j
        assert_eq!(qm.straighten(&[(1, -1), (-1, 1)]), QPoly::mono(vec![(-1, 1), (1, -1)]));
        // k > l, i > j
        let got = qm.straighten(&[(1, 1), (-1, -1)]);
        let mut expect = QPoly::mono(vec![(-1, -1), (1, 1)]);
        expect.add_term(vec![(-1, 1), (1, -1)], p.q_inv.sub(&p.q));
        assert_eq!(got, expect);
        assert_eq!(qm.monomials(2).len(), 10);
    }

    #[test]
    fn monomial_counts_and_confluence() {
        let p = p23();
        for n in 1..=3 {
            let qm = QuantumMatrix::new(n, p.clone());
            for d in 1..=3 {
                let ms = qm.monomials(d);
                assert_eq!(ms.len() as u128, dim_formula(n, d, SchurType::A));
                for m in &ms {
                    assert_eq!(qm.straighten(m), QPoly::mono(m.clone()));
                }
            }
            let vars = qm.vars();
            for w in words_over(&(0..vars.len() as i32).collect::<Vec<_>>(), 3) {
                let word: Mono = w.iter().map(|&k| vars[k as usize]).collect();
                assert_eq!(qm.straighten(&word), qm.straighten_rightmost(&word), "{word:?}");
            }
        }
    }

    #[test]
    fn comultiplication() {
        let qm = QuantumMatrix::new(2, p23());
        let d = qm.comult(&[(-1, -1)]);
        let keys: Vec<_> = d.keys().cloned().collect();
        assert_eq!(
            keys,
            vec![(vec![(-1, -1)], vec![(-1, -1)]), (vec![(-1, 1)], vec![(1, -1)])]
        );
        let qm = QuantumMatrix::new(3, p23());
        // coassociativity on degree-2 monomials: (Δ⊗1)Δ = (1⊗Δ)Δ
        for m in qm.monomials(2) {
            let mut left: BTreeMap<(Mono, Mono, Mono), Rational> = BTreeMap::new();
            let mut right: BTreeMap<(Mono, Mono, Mono), Rational> = BTreeMap::new();
            for ((a, b), c) in qm.comult(&m) {
                for ((a1, a2), c2) in qm.comult(&a) {
                    *left.entry((a1, a2, b.clone())).or_insert_with(Rational::zero) += &c * &c2;
                }
                for ((b1, b2), c2) in qm.comult(&b) {
                    *right.entry((a.clone(), b1, b2)).or_insert_with(Rational::zero) += &c * &c2;
                }
            }
            left.retain(|_, v| !Field::is_zero(v));
            right.retain(|_, v| !Field::is_zero(v));
            assert_eq!(left, right);
        }
    }

    #[test]
    fn generator_counts() {
        let count = |n| QuantumMatrix::new(n, p23()).jb_generators().len();
        assert_eq!(count(2), 2);
        assert_eq!(count(3), 4);
        assert_eq!(count(4), 8);
        let fam: Vec<Family> = QuantumMatrix::new(3, p23())
            .jb_generators()
            .iter()
            .map(|g| g.0)
            .collect();
        assert_eq!(fam, vec![Family::B1, Family::B2, Family::B3, Family::B4]);
    }

    #[test]
    fn quotient_rank_two() {
        let qb = QuotientBasis::new(2, 1, Params::<FracBi>::symbolic()).unwrap();
        assert_eq!(qb.basis(), &[vec![(-1, -1)], vec![(-1, 1)]]);
        let p = Params::<FracBi>::symbolic();
        // x_{11} = a + (Q - Q^{-1}) b
        assert_eq!(
            qb.reduce_word(&[(1, 1)]),
            vec![FracBi::one(), p.big_q.sub(&p.big_q_inv)]
        );
        assert_eq!(qb.reduce_word(&[(1, -1)]), vec![FracBi::zero(), FracBi::one()]);
        assert!(!qb.is_degenerate());
    }

    #[test]
    fn quotient_dimensions() {
        for (n, d) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (4, 1), (4, 2)] {
            let qb = QuotientBasis::new(n, d, p23()).unwrap();
            assert_eq!(qb.dim() as u128, dim_formula(n, d, SchurType::B), "n={n} d={d}");
            assert!(qb.basis().iter().all(|m| in_shaded_region(n, m)), "n={n} d={d}");
        }
    }

    #[test]
    fn dual_table_rank_two() {
        let p = Params::<FracBi>::symbolic();
        let alg = DualAlgebra::new(QuotientBasis::new(2, 1, p.clone()).unwrap());
        let (a, b) = (alg.basis_elt(0), alg.basis_elt(1));
        assert_eq!(alg.product(&a, &a), a);
        assert_eq!(alg.product(&a, &b), b);
        assert_eq!(alg.product(&b, &a), b);
        let expect = vec![FracBi::one(), p.big_q.sub(&p.big_q_inv)];
        assert_eq!(alg.product(&b, &b), expect);
        assert_eq!(alg.unit(), &a[..]);
    }

    #[test]
    fn coideal_and_t0() {
        for (n, d) in [(2, 1), (2, 2), (3, 1), (3, 2)] {
            let qb = QuotientBasis::new(n, d, p23()).unwrap();
            assert!(qb.check_coideal().passed(), "n={n} d={d}");
            let s = TensorSpace::new(n, d, p23()).unwrap();
            assert!(qb.check_tcomm(&s).unwrap().passed());
            assert!(
                qb.check_generators_match_definition(&s).unwrap().passed(),
                "n={n} d={d}"
            );
        }
    }

    #[test]
    fn dual_matches_centralizer() {
        for (n, d) in [(2, 1), (2, 2), (3, 1)] {
            let alg = DualAlgebra::new(QuotientBasis::new(n, d, p23()).unwrap());
            assert!(alg.check_algebra_axioms().passed());
            let s = TensorSpace::new(n, d, p23()).unwrap();
            let c = centralizer_of(&s, SchurType::B).unwrap();
            for ch in alg.check_against_centralizer(&s, &c).unwrap() {
                assert!(ch.passed(), "n={n} d={d} {ch:?}");
            }
        }
        let p = Params::<FracBi>::symbolic();
        let alg = DualAlgebra::new(QuotientBasis::new(2, 1, p.clone()).unwrap());
        let s = TensorSpace::new(2, 1, p).unwrap();
        let c = centralizer_of(&s, SchurType::B).unwrap();
        assert!(alg.check_against_centralizer(&s, &c).unwrap().iter().all(Check::passed));
    }

    #[test]
    fn degenerate_parameters_flagged() {
        // q = Q = 1: B2 becomes x_{ij} - x_{-i,-j}, and the quotient is still 2-dimensional for n = 2
        let qb = QuotientBasis::new(2, 1, Params::<Rational>::ints(1, 1).unwrap()).unwrap();
        assert_eq!(qb.dim(), 2);
        assert!(!qb.is_degenerate());
        assert!(matches!(QuotientBasis::new(4, 3, p23()), Err(Error::SizeGuard(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn comult_is_multiplicative(w in proptest::collection::vec((0usize..4, 0usize..4), 2..4)) {
            // Δ of an arbitrary word equals Δ of its straightened class
            let qm = QuantumMatrix::new(2, p23());
            let vars = qm.vars();
            let word: Mono = w.iter().map(|&(a, b)| vars[(a * 4 + b) % vars.len()]).collect();
            let direct = qm.comult(&word);
            let mut via: BTreeMap<(Mono, Mono), Rational> = BTreeMap::new();
            for (m, c) in qm.straighten(&word).terms() {
                for (k, x) in qm.comult(m) {
                    *via.entry(k).or_insert_with(Rational::zero) += &x * c;
                }
            }
            via.retain(|_, v| !Field::is_zero(v));
            prop_assert_eq!(direct, via);
        }
    }
}
