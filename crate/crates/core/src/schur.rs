//! q-Schur algebras of types A and B: centralizer and double-coset models.

use std::collections::{BTreeMap, HashMap};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hecke::{HeckeAlg, HeckeElt};
use crate::linalg::{rank_of, Coordinatizer, Mat};
use crate::qcoord::{DualAlgebra, QuotientBasis};
use crate::report::Check;
use crate::scalars::{Field, Params};
use crate::tensor::{nonneg_values, pos_values, words_over, TensorElt, TensorSpace};
use crate::weylb::{coset_reps, weights_b, CompositionB, SignedPerm};

/// Largest φ-basis we build.
pub const MAX_PHI_DIM: usize = 2000;
/// Symbolic centralizers are limited to `n^d` at most this.
pub const MAX_SYMBOLIC_WORDS: usize = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SchurType {
    A,
    B,
}

pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn dim_formula(n: usize, d: usize, ty: SchurType) -> u128 {
    let (n, d) = (n as u128, d as u128);
    let r = n / 2;
    match ty {
        SchurType::A => binomial((n * n + d).saturating_sub(1), d),
        SchurType::B if n % 2 == 0 => binomial((2 * r * r + d).saturating_sub(1), d),
        SchurType::B => binomial(2 * r * r + 2 * r + d, d),
    }
}

/// `Σ_i dim S^A(⌈n/2⌉, i) · dim S^A(⌊n/2⌋, d-i)`.
pub fn dim_blocks(n: usize, d: usize) -> Vec<u128> {
    (0..=d)
        .map(|i| dim_formula(n.div_ceil(2), i, SchurType::A) * dim_formula(n / 2, d - i, SchurType::A))
        .collect()
}

/// Matrices `X` with `X M = M X` for every `M` in `mats`, where every `M`
/// preserves each class of `classes` (a partition of the index set).
pub fn commutant<F: Field>(mats: &[Mat<F>], classes: &[Vec<usize>], size: usize) -> Vec<Mat<F>> {
    let mut out = Vec::new();
    for rows in classes {
        for cols in classes {
            let (nr, nc) = (rows.len(), cols.len());
            let unknowns = nr * nc;
            let mut eqs: Vec<Vec<F>> = Vec::new();
            for m in mats {
                // (X M - M X)[i][j] restricted to the block
                for i in 0..nr {
                    for j in 0..nc {
                        let mut row = vec![F::zero(); unknowns];
                        for k in 0..nc {
                            let c = m.get(cols[k], cols[j]);
                            if !c.is_zero() {
                                row[i * nc + k] = row[i * nc + k].add(c);
                            }
                        }
                        for k in 0..nr {
                            let c = m.get(rows[i], rows[k]);
                            if !c.is_zero() {
                                row[k * nc + j] = row[k * nc + j].sub(c);
                            }
                        }
                        if row.iter().any(|x| !x.is_zero()) {
                            eqs.push(row);
                        }
                    }
                }
            }
            let null = if eqs.is_empty() {
                (0..unknowns)
                    .map(|u| {
                        let mut v = vec![F::zero(); unknowns];
                        v[u] = F::one();
                        v
                    })
                    .collect()
            } else {
                Mat::from_rows(eqs).nullspace()
            };
            for v in null {
                let mut x = Mat::zeros(size, size);
                for i in 0..nr {
                    for j in 0..nc {
                        let c = &v[i * nc + j];
                        if !c.is_zero() {
                            x.set(rows[i], cols[j], c.clone());
                        }
                    }
                }
                out.push(x);
            }
        }
    }
    out
}

pub(crate) fn orbit_classes(words: &[Vec<i32>], key: impl Fn(&[i32]) -> Vec<i32>) -> Vec<Vec<usize>> {
    let mut m: BTreeMap<Vec<i32>, Vec<usize>> = BTreeMap::new();
    for (i, w) in words.iter().enumerate() {
        m.entry(key(w)).or_default().push(i);
    }
    m.into_values().collect()
}

/// Basis of the commutant of the type-A or type-B Hecke action on `V^{⊗d}`.
pub fn centralizer_of<F: Field>(space: &TensorSpace<F>, ty: SchurType) -> Result<Vec<Mat<F>>> {
    if F::SYMBOLIC && space.dim() > MAX_SYMBOLIC_WORDS {
        return Err(Error::SizeGuard(format!(
            "symbolic centralizer with n^d = {}",
            space.dim()
        )));
    }
    let d = space.rank();
    let gens: Vec<usize> = match ty {
        SchurType::A => (1..d).collect(),
        SchurType::B => (0..d).collect(),
    };
    let mats: Vec<Mat<F>> = gens.iter().map(|&t| space.gen_matrix(t)).collect::<Result<_>>()?;
    let classes = orbit_classes(space.words(), |w| {
        let mut k: Vec<i32> = match ty {
            SchurType::A => w.to_vec(),
            SchurType::B => w.iter().map(|x| x.abs()).collect(),
        };
        k.sort_unstable();
        k
    });
    Ok(commutant(&mats, &classes, space.dim()))
}

pub fn centralizer_basis<F: Field>(n: usize, d: usize, ty: SchurType, params: &Params<F>) -> Result<Vec<Mat<F>>> {
    let space = TensorSpace::new(n, d, params.clone())?;
    centralizer_of(&space, ty)
}

fn flatten<F: Field>(m: &Mat<F>) -> Vec<F> {
    m.flat().to_vec()
}

/// Every product of two basis elements lies in their span.
pub fn check_closure<F: Field>(basis: &[Mat<F>]) -> Result<Check> {
    let Some(first) = basis.first() else {
        return Ok(Check::new("schur.centralizer_closure", true, vec![0]));
    };
    let len = first.nrows() * first.ncols();
    let coord = Coordinatizer::new(basis.iter().map(flatten).collect(), len)?;
    let mut bad = None;
    for (i, x) in basis.iter().enumerate() {
        for (j, y) in basis.iter().enumerate() {
            if coord.coords(&flatten(&x.mul(y))).is_none() {
                bad.get_or_insert(format!("basis {i} * basis {j}"));
            }
        }
    }
    Ok(Check::new("schur.centralizer_closure", bad.is_none(), vec![basis.len()]).with_counterexample(bad))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiElt {
    pub lam: usize,
    pub mu: usize,
    pub g: SignedPerm,
}

/// `S^B(n, d) = End_H(⊕_μ x_μ H)` with the basis `φ^g_{λμ}`.
///
/// Each `x_μ H` carries the basis `x_μ T_d`, `d` a shortest coset
/// representative; `φ^g_{λμ}` is stored as its `|D_λ| × |D_μ|` block.
pub struct PhiAlgebra<F> {
    n: usize,
    d: usize,
    hecke: HeckeAlg<F>,
    weights: Vec<CompositionB>,
    reps: Vec<Vec<SignedPerm>>,
    offsets: Vec<usize>,
    basis: Vec<PhiElt>,
    blocks: Vec<Mat<F>>,
    by_pair: HashMap<(usize, usize), Vec<usize>>,
    coords: HashMap<(usize, usize), Coordinatizer<F>>,
}

impl<F: Field> PhiAlgebra<F> {
    pub fn new(n: usize, d: usize, params: Params<F>) -> Result<Self> {
        let expected = dim_formula(n, d, SchurType::B);
        if expected > MAX_PHI_DIM as u128 {
            return Err(Error::SizeGuard(format!("dim S^B({n},{d}) = {expected}")));
        }
        let hecke = HeckeAlg::new(d, params)?;
        let weights = weights_b(n, d);
        let reps: Vec<Vec<SignedPerm>> = weights.iter().map(|w| coset_reps(w, None)).collect::<Result<_>>()?;
        let mut offsets = Vec::with_capacity(weights.len());
        let mut acc = 0;
        for r in &reps {
            offsets.push(acc);
            acc += r.len();
        }
        let mut alg = PhiAlgebra {
            n,
            d,
            hecke,
            weights,
            reps,
            offsets,
            basis: Vec::new(),
            blocks: Vec::new(),
            by_pair: HashMap::new(),
            coords: HashMap::new(),
        };
        alg.build()?;
        Ok(alg)
    }

    /// Coordinates of `h ∈ x_λ H` in the basis `x_λ T_d`.
    fn coords_in(&self, lam: usize, h: &HeckeElt<F>) -> Result<Vec<F>> {
        let x = self.hecke.x_lambda(&self.weights[lam])?;
        let mut back = HeckeElt::zero(self.d);
        let mut out = Vec::with_capacity(self.reps[lam].len());
        for r in &self.reps[lam] {
            let c = h.coeff(r);
            if !c.is_zero() {
                back = back.add(&self.hecke.mul_basis_right(&x, r)?.scale(&c));
            }
            out.push(c);
        }
        if &back != h {
            return Err(Error::ExpansionFailure(format!(
                "element outside x_{} H",
                self.weights[lam]
            )));
        }
        Ok(out)
    }

    fn build(&mut self) -> Result<()> {
        let k = self.weights.len();
        for lam in 0..k {
            for mu in 0..k {
                let gens_l = self.weights[lam].parabolic();
                let gens_m = self.weights[mu].parabolic();
                let gs = coset_reps(&self.weights[lam], Some(&self.weights[mu]))?;
                let mut idx = Vec::new();
                for g in gs {
                    let tg = self.hecke.double_coset_sum(&gens_l, &g, &gens_m)?;
                    let cols: Vec<Vec<F>> = self.reps[mu]
                        .iter()
                        .map(|r| self.coords_in(lam, &self.hecke.mul_basis_right(&tg, r)?))
                        .collect::<Result<_>>()?;
                    let block = Mat::from_cols(&cols, self.reps[lam].len());
                    idx.push(self.basis.len());
                    self.basis.push(PhiElt { lam, mu, g });
                    self.blocks.push(block);
                }
                let vecs: Vec<Vec<F>> = idx.iter().map(|&i| flatten(&self.blocks[i])).collect();
                let len = self.reps[lam].len() * self.reps[mu].len();
                self.coords.insert((lam, mu), Coordinatizer::new(vecs, len)?);
                self.by_pair.insert((lam, mu), idx);
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[PhiElt] {
        &self.basis
    }

    pub fn weights(&self) -> &[CompositionB] {
        &self.weights
    }

    pub fn hecke(&self) -> &HeckeAlg<F> {
        &self.hecke
    }

    /// `dim ⊕_μ x_μ H`.
    pub fn module_dim(&self) -> usize {
        self.reps.iter().map(Vec::len).sum()
    }

    pub fn block(&self, i: usize) -> &Mat<F> {
        &self.blocks[i]
    }

    pub fn pair_indices(&self, lam: usize, mu: usize) -> &[usize] {
        &self.by_pair[&(lam, mu)]
    }

    pub fn find(&self, lam: usize, mu: usize, g: &SignedPerm) -> Option<usize> {
        self.by_pair
            .get(&(lam, mu))?
            .iter()
            .copied()
            .find(|&i| &self.basis[i].g == g)
    }

    pub fn weight_index(&self, w: &CompositionB) -> Option<usize> {
        self.weights.iter().position(|x| x == w)
    }

    /// `φ` as an endomorphism of `⊕_μ x_μ H`.
    pub fn full_matrix(&self, i: usize) -> Mat<F> {
        let m = self.module_dim();
        let e = &self.basis[i];
        let mut out = Mat::zeros(m, m);
        let b = &self.blocks[i];
        for r in 0..b.nrows() {
            for c in 0..b.ncols() {
                out.set(self.offsets[e.lam] + r, self.offsets[e.mu] + c, b.get(r, c).clone());
            }
        }
        out
    }

    /// Right action of `T_t` on `⊕_μ x_μ H`.
    pub fn right_gen_matrix(&self, t: usize) -> Result<Mat<F>> {
        let m = self.module_dim();
        let mut out = Mat::zeros(m, m);
        for (mu, w) in self.weights.iter().enumerate() {
            let x = self.hecke.x_lambda(w)?;
            for (k, r) in self.reps[mu].iter().enumerate() {
                let h = self
                    .hecke
                    .mul_gen(&self.hecke.mul_basis_right(&x, r)?, t, crate::hecke::Side::Right)?;
                for (k2, c) in self.coords_in(mu, &h)?.into_iter().enumerate() {
                    out.set(self.offsets[mu] + k2, self.offsets[mu] + k, c);
                }
            }
        }
        Ok(out)
    }

    /// Coordinates of `φ_i φ_j` (apply `φ_j` first).
    pub fn product(&self, i: usize, j: usize) -> Result<Vec<F>> {
        let (a, b) = (&self.basis[i], &self.basis[j]);
        let mut out = vec![F::zero(); self.dim()];
        if a.mu != b.lam {
            return Ok(out);
        }
        let prod = self.blocks[i].mul(&self.blocks[j]);
        let c = self.coords[&(a.lam, b.mu)]
            .coords(&flatten(&prod))
            .ok_or_else(|| Error::ExpansionFailure(format!("φ_{i} φ_{j}")))?;
        for (k, x) in self.by_pair[&(a.lam, b.mu)].iter().zip(c) {
            out[*k] = x;
        }
        Ok(out)
    }

    pub fn mul(&self, x: &[F], y: &[F]) -> Result<Vec<F>> {
        let mut out = vec![F::zero(); self.dim()];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() || self.basis[i].mu != self.basis[j].lam {
                    continue;
                }
                let ab = a.mul(b);
                for (k, c) in self.product(i, j)?.iter().enumerate() {
                    if !c.is_zero() {
                        out[k] = out[k].add(&c.mul(&ab));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Coordinates of `Σ_{λ in lams} φ^1_{λλ}`.
    pub fn weight_idempotent(&self, lams: &[usize]) -> Vec<F> {
        let mut out = vec![F::zero(); self.dim()];
        let id = SignedPerm::identity(self.d);
        for &l in lams {
            if let Some(i) = self.find(l, l, &id) {
                out[i] = F::one();
            }
        }
        out
    }

    pub fn unit(&self) -> Vec<F> {
        self.weight_idempotent(&(0..self.weights.len()).collect::<Vec<_>>())
    }

    fn unit_vec(&self, i: usize) -> Vec<F> {
        let mut v = vec![F::zero(); self.dim()];
        v[i] = F::one();
        v
    }

    /// Basis size, H-linearity of every `φ`, and the two multiplication rules.
    pub fn check_structure(&self) -> Result<Vec<Check>> {
        let expected = dim_formula(self.n, self.d, SchurType::B) as usize;
        let mut out = vec![Check::new(
            "schur.phi_dimension",
            self.dim() == expected,
            vec![self.dim(), expected],
        )];

        let rs: Vec<Mat<F>> = (0..self.d).map(|t| self.right_gen_matrix(t)).collect::<Result<_>>()?;
        let mut bad = None;
        for i in 0..self.dim() {
            let m = self.full_matrix(i);
            for (t, r) in rs.iter().enumerate() {
                if m.mul(r) != r.mul(&m) {
                    bad.get_or_insert(format!("basis {i}, T_{t}"));
                }
            }
        }
        out.push(Check::new("schur.phi_h_linear", bad.is_none(), vec![self.dim()]).with_counterexample(bad));

        let mut bad_zero = None;
        let mut bad_unit = None;
        let mut tested = 0;
        let id = SignedPerm::identity(self.d);
        for (i, a) in self.basis.iter().enumerate() {
            for (j, b) in self.basis.iter().enumerate() {
                if a.mu != b.lam {
                    let m = self.full_matrix(i).mul(&self.full_matrix(j));
                    if !m.is_zero() {
                        bad_zero.get_or_insert(format!("basis {i} * basis {j}"));
                    }
                    continue;
                }
                // φ^1_{λμ} φ^g_{μμ'} = φ^g_{λμ'} whenever the right side is a basis element
                if a.g == id {
                    if let Some(k) = self.find(a.lam, b.mu, &b.g) {
                        tested += 1;
                        if self.product(i, j)? != self.unit_vec(k) {
                            bad_unit.get_or_insert(format!(
                                "phi^1_({},{}) phi^{}_({},{})",
                                self.weights[a.lam], self.weights[a.mu], b.g, self.weights[b.lam], self.weights[b.mu]
                            ));
                        }
                    }
                }
                if b.g == id {
                    if let Some(k) = self.find(a.lam, b.mu, &a.g) {
                        tested += 1;
                        if self.product(i, j)? != self.unit_vec(k) {
                            bad_unit.get_or_insert(format!(
                                "phi^{}_({},{}) phi^1_({},{})",
                                a.g, self.weights[a.lam], self.weights[a.mu], self.weights[b.lam], self.weights[b.mu]
                            ));
                        }
                    }
                }
            }
        }
        out.push(
            Check::new("schur.phi_orthogonal", bad_zero.is_none(), vec![self.dim()]).with_counterexample(bad_zero),
        );
        out.push(
            Check::new("schur.phi_identity_factor", bad_unit.is_none(), vec![tested]).with_counterexample(bad_unit),
        );

        let u = self.unit();
        let mut bad_u = None;
        for i in 0..self.dim() {
            let e = self.unit_vec(i);
            if self.mul(&u, &e)? != e || self.mul(&e, &u)? != e {
                bad_u.get_or_insert(format!("basis {i}"));
            }
        }
        out.push(Check::new("schur.phi_unit", bad_u.is_none(), vec![self.dim()]).with_counterexample(bad_u));
        Ok(out)
    }

    /// `x_μ T_d ↦ v_{word(μ)} T_d`, as a matrix from `⊕_μ x_μ H` to `V^{⊗d}`.
    pub fn orbit_identification(&self, space: &TensorSpace<F>) -> Result<Mat<F>> {
        if space.n() != self.n || space.rank() != self.d {
            return Err(Error::RankMismatch(space.rank(), self.d));
        }
        let mut cols = Vec::with_capacity(self.module_dim());
        for (mu, w) in self.weights.iter().enumerate() {
            let v = TensorElt::basis(w.word());
            for r in &self.reps[mu] {
                cols.push(space.to_vec(&space.act(&v, &self.hecke.t(r))?));
            }
        }
        Ok(Mat::from_cols(&cols, space.dim()))
    }

    /// The identification intertwines the actions; transporting the φ basis
    /// lands in the centralizer and spans it.
    pub fn check_against_centralizer(&self, space: &TensorSpace<F>, centralizer: &[Mat<F>]) -> Result<Vec<Check>> {
        let p = self.orbit_identification(space)?;
        let pinv = p.inverse();
        let mut out = Vec::new();
        let mut ok = pinv.is_ok();
        let mut bad = None;
        for t in 0..self.d {
            if p.mul(&self.right_gen_matrix(t)?) != space.gen_matrix(t)?.mul(&p) {
                ok = false;
                bad.get_or_insert(format!("T_{t}"));
            }
        }
        out.push(Check::new("schur.orbit_identification", ok, vec![p.nrows()]).with_counterexample(bad));
        let Ok(pinv) = pinv else { return Ok(out) };
        let moved: Vec<Mat<F>> = (0..self.dim())
            .map(|i| p.mul(&self.full_matrix(i)).mul(&pinv))
            .collect();
        let gens: Vec<Mat<F>> = (0..self.d).map(|t| space.gen_matrix(t)).collect::<Result<_>>()?;
        let commute = moved.iter().all(|m| gens.iter().all(|a| m.mul(a) == a.mul(m)));
        let r_moved = rank_of(&moved.iter().map(flatten).collect::<Vec<_>>());
        let mut joint: Vec<Vec<F>> = moved.iter().map(flatten).collect();
        joint.extend(centralizer.iter().map(flatten));
        let r_joint = rank_of(&joint);
        out.push(Check::new(
            "schur.realizations_agree",
            commute && r_moved == self.dim() && r_joint == r_moved && centralizer.len() == r_moved,
            vec![r_moved, centralizer.len(), r_joint],
        ));
        Ok(out)
    }
}

/// `ω`: every part `1` in the first `d` positive slots, no zeros.
pub fn omega(n: usize, d: usize) -> Result<CompositionB> {
    let r = n / 2;
    if r < d {
        return Err(Error::RankTooSmall(n));
    }
    let mut pos = vec![1; d];
    pos.resize(r, 0);
    CompositionB::new(n, if n % 2 == 1 { 1 } else { 0 }, pos)
}

/// `e^B S e^B ≅ H^B(d)` under `φ^g_{ωω} ↔ T_g`, and `dim e^B S = n^d`.
pub fn check_schur_functor<F: Field>(alg: &PhiAlgebra<F>) -> Result<Vec<Check>> {
    let d = alg.rank();
    let w = omega(alg.n(), d)?;
    let o = alg
        .weight_index(&w)
        .ok_or_else(|| Error::InvalidWeight(w.to_string()))?;
    let e = alg.weight_idempotent(&[o]);
    let mut out = vec![Check::new("schur.functor_idempotent", alg.mul(&e, &e)? == e, vec![1])];
    let corner = alg.pair_indices(o, o).to_vec();
    let h = alg.hecke();
    out.push(Check::new(
        "schur.functor_corner_dim",
        corner.len() == h.dim(),
        vec![corner.len(), h.dim()],
    ));
    let mut bad = None;
    for &i in &corner {
        for &j in &corner {
            let prod = alg.product(i, j)?;
            let th = h.mul(&h.t(&alg.basis()[i].g), &h.t(&alg.basis()[j].g))?;
            let mut expect = vec![F::zero(); alg.dim()];
            for (g, c) in th.terms() {
                match alg.find(o, o, g) {
                    Some(k) => expect[k] = c.clone(),
                    None => bad = Some(format!("T_{g} has no partner")),
                }
            }
            if prod != expect {
                bad.get_or_insert(format!("{} * {}", alg.basis()[i].g, alg.basis()[j].g));
            }
        }
    }
    out.push(Check::new("schur.functor_hecke_constants", bad.is_none(), vec![corner.len()]).with_counterexample(bad));
    let row: usize = (0..alg.weights().len()).map(|m| alg.pair_indices(o, m).len()).sum();
    let words = alg.n().pow(d as u32);
    out.push(Check::new("schur.functor_bimodule_dim", row == words, vec![row, words]));
    Ok(out)
}

/// The weight of `Λ^B(n, d)` viewed inside `Λ^B(n2, d)`.
pub fn embed_weight(w: &CompositionB, n2: usize) -> Result<CompositionB> {
    let r2 = n2 / 2;
    let ok = n2 >= w.n && (n2 % 2 == w.n % 2 || (w.n % 2 == 0 && n2 % 2 == 1)) && w.pos.len() <= r2;
    if !ok {
        return Err(Error::InvalidWeight(format!("cannot embed {w} into n = {n2}")));
    }
    let a0 = if n2 % 2 == 1 { w.a0.max(1) } else { 0 };
    let mut pos = w.pos.clone();
    pos.resize(r2, 0);
    CompositionB::new(n2, a0, pos)
}

/// `e S^B(n2, d) e` reproduces `S^B(n, d)` for `e = Σ φ^1_{λλ}` over the embedded weights.
pub fn check_embedding<F: Field>(small: &PhiAlgebra<F>, big: &PhiAlgebra<F>) -> Result<Vec<Check>> {
    if small.rank() != big.rank() {
        return Err(Error::RankMismatch(small.rank(), big.rank()));
    }
    let map_w: Vec<usize> = small
        .weights()
        .iter()
        .map(|w| {
            let e = embed_weight(w, big.n())?;
            big.weight_index(&e).ok_or_else(|| Error::InvalidWeight(e.to_string()))
        })
        .collect::<Result<_>>()?;
    let e = big.weight_idempotent(&map_w);
    let mut out = vec![Check::new(
        "schur.embed_idempotent",
        big.mul(&e, &e)? == e,
        vec![map_w.len()],
    )];
    let map_b: Vec<Option<usize>> = small
        .basis()
        .iter()
        .map(|b| big.find(map_w[b.lam], map_w[b.mu], &b.g))
        .collect();
    let corner: usize = map_w
        .iter()
        .flat_map(|&l| map_w.iter().map(move |&m| (l, m)))
        .map(|(l, m)| big.pair_indices(l, m).len())
        .sum();
    out.push(Check::new(
        "schur.embed_corner_dim",
        corner == small.dim() && map_b.iter().all(Option::is_some),
        vec![corner, small.dim()],
    ));
    let mut bad = None;
    if map_b.iter().all(Option::is_some) {
        let map_b: Vec<usize> = map_b.into_iter().map(Option::unwrap).collect();
        for i in 0..small.dim() {
            for j in 0..small.dim() {
                let ps = small.product(i, j)?;
                let pb = big.product(map_b[i], map_b[j])?;
                let mut expect = vec![F::zero(); big.dim()];
                for (k, c) in ps.into_iter().enumerate() {
                    expect[map_b[k]] = c;
                }
                if pb != expect {
                    bad.get_or_insert(format!("basis {i} * basis {j}"));
                }
            }
        }
    } else {
        bad = Some("unmatched basis element".into());
    }
    out.push(Check::new("schur.embed_constants", bad.is_none(), vec![small.dim()]).with_counterexample(bad));
    Ok(out)
}

/// One block of the isomorphism onto `⊕_i S^A ⊗ S^A`.
pub struct IsoBlock<F> {
    pub a: usize,
    pub domain: Vec<Vec<i32>>,
    pub coord: Coordinatizer<F>,
    pub action: Vec<Mat<F>>,
}

/// `Φ = ⊕_i Φ_i` with `Φ_i(s) = ψ_i^{-1} ∘ s|_{Im ψ_i} ∘ ψ_i`.
pub struct IsoPhi<F> {
    n: usize,
    d: usize,
    blocks: Vec<IsoBlock<F>>,
}

impl<F: Field> IsoPhi<F> {
    pub fn new(space: &TensorSpace<F>) -> Result<Self> {
        let d = space.rank();
        let mut blocks = Vec::new();
        for a in 0..=d {
            let psi = match space.block_map(a, d - a) {
                Ok(m) => m,
                Err(Error::SingularMap { .. }) => return Err(Error::InvertibilityFailure),
                Err(e) => return Err(e),
            };
            let domain = space.block_domain(a, d - a)?;
            let cols: Vec<Vec<F>> = (0..psi.ncols()).map(|j| psi.col(j)).collect();
            let coord = Coordinatizer::new(cols, space.dim())?;
            let index: HashMap<&Vec<i32>, usize> = domain.iter().enumerate().map(|(i, w)| (w, i)).collect();
            let mut action = Vec::new();
            for t in (1..d).filter(|&t| t != a) {
                let mut m = Mat::zeros(domain.len(), domain.len());
                for (j, w) in domain.iter().enumerate() {
                    let img = space.act_gen(&TensorElt::basis(w.clone()), t)?;
                    for (w2, c) in img.terms() {
                        let i = *index.get(w2).ok_or_else(|| Error::InvalidIndex(format!("{w2:?}")))?;
                        m.set(i, j, c.clone());
                    }
                }
                action.push(m);
            }
            blocks.push(IsoBlock {
                a,
                domain,
                coord,
                action,
            });
        }
        Ok(IsoPhi {
            n: space.n(),
            d,
            blocks,
        })
    }

    pub fn blocks(&self) -> &[IsoBlock<F>] {
        &self.blocks
    }

    /// `Φ_i(x)` for every block `i = a`.
    pub fn apply(&self, x: &Mat<F>) -> Result<Vec<Mat<F>>> {
        self.blocks
            .iter()
            .map(|b| {
                let cols: Vec<Vec<F>> = (0..b.coord.dim())
                    .map(|j| {
                        let img = x.mul_vec(&b.coord.basis()[j]);
                        b.coord
                            .coords(&img)
                            .ok_or_else(|| Error::ExpansionFailure(format!("image leaves block a={}", b.a)))
                    })
                    .collect::<Result<_>>()?;
                Ok(Mat::from_cols(&cols, b.coord.dim()))
            })
            .collect()
    }

    /// Commutation with the Young action, injectivity, multiplicativity and
    /// the dimension count.
    pub fn check(&self, basis: &[Mat<F>]) -> Result<Vec<Check>> {
        let images: Vec<Vec<Mat<F>>> = basis.iter().map(|x| self.apply(x)).collect::<Result<_>>()?;
        let mut bad = None;
        for (k, im) in images.iter().enumerate() {
            for (b, m) in self.blocks.iter().zip(im) {
                if b.action.iter().any(|a| a.mul(m) != m.mul(a)) {
                    bad.get_or_insert(format!("basis {k}, block a={}", b.a));
                }
            }
        }
        let mut out = vec![Check::new("schur.iso_commutes", bad.is_none(), vec![basis.len()]).with_counterexample(bad)];

        let stacked: Vec<Vec<F>> = images.iter().map(|im| im.iter().flat_map(flatten).collect()).collect();
        let r = rank_of(&stacked);
        out.push(Check::new(
            "schur.iso_injective",
            r == basis.len(),
            vec![r, basis.len()],
        ));

        let mut bad = None;
        for i in 0..basis.len().min(12) {
            for j in 0..basis.len().min(12) {
                let lhs = self.apply(&basis[i].mul(&basis[j]))?;
                let ok = lhs
                    .iter()
                    .zip(&images[i])
                    .zip(&images[j])
                    .all(|((l, x), y)| *l == x.mul(y));
                if !ok {
                    bad.get_or_insert(format!("basis {i} * basis {j}"));
                }
            }
        }
        out.push(
            Check::new("schur.iso_multiplicative", bad.is_none(), vec![basis.len().min(12)]).with_counterexample(bad),
        );

        let target = dim_blocks(self.n, self.d);
        let mut commutant_dims = Vec::new();
        for b in &self.blocks {
            let classes = orbit_classes(&b.domain, |w| {
                let (x, y) = w.split_at(b.a);
                let (mut x, mut y) = (x.to_vec(), y.to_vec());
                x.sort_unstable();
                y.sort_unstable();
                x.push(i32::MIN);
                x.extend(y);
                x
            });
            commutant_dims.push(commutant(&b.action, &classes, b.domain.len()).len() as u128);
        }
        let total: u128 = target.iter().sum();
        let ok = commutant_dims == target
            && total == dim_formula(self.n, self.d, SchurType::B)
            && total == basis.len() as u128;
        let mut dims: Vec<usize> = vec![basis.len()];
        dims.extend(commutant_dims.iter().map(|&x| x as usize));
        out.push(Check::new("schur.iso_dimensions", ok, dims));
        Ok(out)
    }
}

/// Domain sizes `|V_{≥0}|^a |V_{>0}|^b` for each block.
pub fn iso_domain_sizes(n: usize, d: usize) -> Vec<usize> {
    (0..=d)
        .map(|a| words_over(&nonneg_values(n), a).len() * words_over(&pos_values(n), d - a).len())
        .collect()
}

/// Partitions of `k` with at most `rows` parts, largest first.
pub fn partitions(k: usize, rows: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, rows: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            out.push(cur.clone());
            return;
        }
        if rows == 0 {
            return;
        }
        for p in (1..=max.min(k)).rev() {
            cur.push(p);
            go(k - p, rows - 1, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, rows, k, &mut Vec::new(), &mut out);
    out
}

/// Semistandard tableaux of shape `lam` with entries in `1..=m` (hook-content formula).
pub fn ssyt_count(lam: &[usize], m: usize) -> u128 {
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for (i, &row) in lam.iter().enumerate() {
        for j in 0..row {
            let content = m as i64 + j as i64 - i as i64;
            if content <= 0 {
                return 0;
            }
            let arm = row - j - 1;
            let leg = lam[i + 1..].iter().filter(|&&r| r > j).count();
            num *= content as u128;
            den *= (arm + leg + 1) as u128;
        }
    }
    num / den
}

/// Bipartitions `(λ, μ)` of total size `d` with at most `⌈n/2⌉` and `⌊n/2⌋` rows.
pub fn bipartitions(n: usize, d: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    for i in (0..=d).rev() {
        for l in partitions(i, n.div_ceil(2)) {
            for m in partitions(d - i, n / 2) {
                out.push((l.clone(), m));
            }
        }
    }
    out
}

pub fn simple_count(n: usize, d: usize) -> usize {
    bipartitions(n, d).len()
}

/// `Σ (#SSYT(λ) · #SSYT(μ))^2 = dim S^B(n, d)`.
pub fn wedderburn_check(n: usize, d: usize) -> bool {
    let total: u128 = bipartitions(n, d)
        .iter()
        .map(|(l, m)| {
            let s = ssyt_count(l, n.div_ceil(2)) * ssyt_count(m, n / 2);
            s * s
        })
        .sum();
    total == dim_formula(n, d, SchurType::B)
}

/// Every check on the Morita idempotents and tensor space for ranks
/// `n = 2..=n_max`, tagged with its parameters.
pub fn verify_dj<F: Field>(n_max: usize, d: usize, params: &Params<F>) -> Result<Vec<(Value, Check)>> {
    if d == 0 || d > 3 {
        return Err(Error::OutOfRange(d));
    }
    let h = HeckeAlg::new(d, params.clone())?;
    let mut out = Vec::new();
    let tag = json!({ "d": d });
    out.push((
        tag.clone(),
        Check::new("hecke.relations", h.check_relations()?, vec![h.dim()]),
    ));
    out.push((tag.clone(), h.check_u_central()?));
    out.push((tag.clone(), h.check_u_vanishing()?));
    for a in 0..=d {
        for c in h.check_e_ab(a, d - a)? {
            out.push((json!({ "d": d, "a": a, "b": d - a }), c));
        }
    }
    out.push((tag.clone(), h.check_morita()?));
    out.push((tag, Check::new("hecke.jm_commute", h.check_jm_commute()?, vec![d])));
    for n in 2..=n_max {
        let space = TensorSpace::new(n, d, params.clone())?;
        for c in space.run_checks()? {
            out.push((json!({ "n": n, "d": d }), c));
        }
    }
    Ok(out)
}

/// Identity endomorphisms of each block, `1_a`, as used in the `(2,1)` matching.
pub fn block_units<F: Field>(iso: &IsoPhi<F>) -> Vec<Vec<Mat<F>>> {
    let sizes: Vec<usize> = iso.blocks().iter().map(|b| b.domain.len()).collect();
    (0..sizes.len())
        .map(|k| {
            sizes
                .iter()
                .enumerate()
                .map(|(i, &s)| if i == k { Mat::identity(s) } else { Mat::zeros(s, s) })
                .collect()
        })
        .collect()
}

/// Images of `a^*` and `b^*` under `Φ` for `S^B(2,1)`, one scalar per
/// block `x = (a=0)`, `y = (a=1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RankTwoMatching<F> {
    pub a_star: Vec<F>,
    pub b_star: Vec<F>,
    /// `"standard"` for `b^* ↦ -Q^{-1}1_x + Q1_y`, `"alternative"` for
    /// `b^* ↦ Q1_x - Q^{-1}1_y`, `None` if neither holds.
    pub variant: Option<&'static str>,
}

impl<F: Field> RankTwoMatching<F> {
    pub fn check(&self) -> Check {
        let c = Check::new("schur.iso_rank_two_matching", self.variant.is_some(), vec![2]);
        c.with_counterexample(Some(format!(
            "a* -> {:?}, b* -> {:?}",
            self.a_star.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            self.b_star.iter().map(|x| x.to_string()).collect::<Vec<_>>()
        )))
    }

    pub fn to_json(&self) -> Value {
        let s = |v: &[F]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        json!({
            "a_star": {"x": s(&self.a_star)[0], "y": s(&self.a_star)[1]},
            "b_star": {"x": s(&self.b_star)[0], "y": s(&self.b_star)[1]},
            "variant": self.variant,
        })
    }
}

pub fn rank_two_matching<F: Field>(params: &Params<F>) -> Result<RankTwoMatching<F>> {
    let dual = DualAlgebra::new(QuotientBasis::new(2, 1, params.clone())?);
    let space = TensorSpace::new(2, 1, params.clone())?;
    let iso = IsoPhi::new(&space)?;
    let image = |var: (i32, i32)| -> Result<Vec<F>> {
        let k = dual
            .quotient()
            .basis()
            .iter()
            .position(|m| m == &vec![var])
            .ok_or_else(|| Error::InvalidIndex(format!("x{var:?} is not a basis monomial")))?;
        let m = dual.pairing_matrix(&dual.basis_elt(k), &space);
        Ok(iso.apply(&m)?.iter().map(|b| b.get(0, 0).clone()).collect())
    };
    let a_star = image((-1, -1))?;
    let b_star = image((-1, 1))?;
    let (q, qi) = (params.big_q.clone(), params.big_q_inv.clone());
    let unit_ok = a_star == vec![F::one(), F::one()];
    let variant = if unit_ok && b_star == vec![qi.neg(), q.clone()] {
        Some("standard")
    } else if unit_ok && b_star == vec![q, qi.neg()] {
        Some("alternative")
    } else {
        None
    };
    Ok(RankTwoMatching {
        a_star,
        b_star,
        variant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{FracBi, Rational};

    fn p23() -> Params<Rational> {
        Params::ints(2, 3).unwrap()
    }

    #[test]
    fn dimension_formulas() {
        assert_eq!(dim_formula(2, 1, SchurType::A), 4);
        assert_eq!(dim_formula(2, 1, SchurType::B), 2);
        assert_eq!(dim_formula(4, 2, SchurType::B), 36);
        assert_eq!(dim_formula(3, 1, SchurType::B), 5);
        for d in 0..=8 {
            assert_eq!(dim_formula(2, d, SchurType::B), d as u128 + 1);
        }
        assert_eq!(dim_blocks(4, 2), vec![10, 16, 10]);
        assert_eq!(dim_blocks(3, 1), vec![1, 4]);
    }

    #[test]
    fn binomial_identity_grid() {
        for n in 1..=8 {
            for d in 0..=8 {
                let s: u128 = dim_blocks(n, d).iter().sum();
                assert_eq!(s, dim_formula(n, d, SchurType::B), "n={n} d={d}");
            }
        }
    }

    #[test]
    fn dimension_counts_match_index_sets() {
        // independent oracle: count matrices over the index sets directly
        fn count(cells: usize, d: usize) -> u128 {
            // multisets of size d from `cells` kinds
            let mut ways = vec![0u128; d + 1];
            ways[0] = 1;
            for _ in 0..cells {
                for k in 1..=d {
                    ways[k] += ways[k - 1];
                }
            }
            ways[d]
        }
        for n in 1..=6usize {
            let r = n / 2;
            // odd n: [-r,-1] × I(n) together with {0} × [-r, 0]
            let cells = if n % 2 == 0 { r * n } else { r * n + r + 1 };
            for d in 0..=5 {
                assert_eq!(count(n * n, d), dim_formula(n, d, SchurType::A));
                assert_eq!(count(cells, d), dim_formula(n, d, SchurType::B), "n={n} d={d}");
            }
        }
    }

    #[test]
    fn centralizer_small_cases() {
        let p = p23();
        assert_eq!(centralizer_basis(2, 1, SchurType::B, &p).unwrap().len(), 2);
        assert_eq!(centralizer_basis(2, 1, SchurType::A, &p).unwrap().len(), 4);
        assert_eq!(centralizer_basis(3, 1, SchurType::B, &p).unwrap().len(), 5);
        assert_eq!(centralizer_basis(2, 2, SchurType::A, &p).unwrap().len(), 10);
        assert_eq!(centralizer_basis(3, 2, SchurType::B, &p).unwrap().len(), 15);
    }

    #[test]
    fn centralizer_symbolic_guard() {
        let p = Params::<FracBi>::symbolic();
        assert_eq!(centralizer_basis(2, 1, SchurType::B, &p).unwrap().len(), 2);
        assert_eq!(centralizer_basis(3, 2, SchurType::B, &p).unwrap().len(), 15);
        assert!(matches!(
            centralizer_basis(2, 4, SchurType::B, &p),
            Err(Error::SizeGuard(_))
        ));
    }

    #[test]
    fn centralizer_is_closed() {
        let p = p23();
        for (n, d) in [(2, 2), (3, 1), (3, 2), (4, 1)] {
            let b = centralizer_basis(n, d, SchurType::B, &p).unwrap();
            assert!(check_closure(&b).unwrap().passed());
        }
    }

    #[test]
    fn phi_dimensions() {
        for (n, d) in [(2, 1), (2, 2), (3, 1), (3, 2), (4, 2), (2, 3)] {
            let a = PhiAlgebra::new(n, d, p23()).unwrap();
            assert_eq!(a.dim() as u128, dim_formula(n, d, SchurType::B));
            assert_eq!(a.module_dim(), n.pow(d as u32));
        }
    }

    fn status(cs: &[Check]) -> Vec<(String, bool)> {
        cs.iter().map(|c| (c.id.clone(), c.passed())).collect()
    }

    #[test]
    fn phi_structure() {
        for (n, d) in [(2, 1), (2, 2)] {
            let a = PhiAlgebra::new(n, d, p23()).unwrap();
            let cs = a.check_structure().unwrap();
            assert!(cs.iter().all(Check::passed), "{:?}", status(&cs));
        }
        // φ^1_{λμ} φ^g_{μμ'} = φ^g_{λμ'} only holds up to a scalar once W_λ ≠ W_μ
        let frozen = [
            (3, 1, "phi^1_((3;0),(1;1)) phi^[1]_((1;1),(3;0))"),
            (3, 2, "phi^1_((5;0),(3;1)) phi^[1,2]_((3;1),(5;0))"),
            (4, 2, "phi^[-1,2]_((2,0),(2,0)) phi^1_((2,0),(1,1))"),
        ];
        for (n, d, witness) in frozen {
            let a = PhiAlgebra::new(n, d, p23()).unwrap();
            for c in a.check_structure().unwrap() {
                if c.id == "schur.phi_identity_factor" {
                    assert!(!c.passed());
                    assert_eq!(c.counterexample.as_deref(), Some(witness));
                } else {
                    assert!(c.passed(), "{c:?}");
                }
            }
        }
    }

    #[test]
    fn identity_factor_scalar_in_rank_one() {
        // x_λ = 1 + Q^{-1} T_0 for λ = (3;0), so φ^1_{λμ} φ^1_{μλ} = (1 + Q^{-2}) φ^1_{λλ}
        let p = Params::<FracBi>::symbolic();
        let a = PhiAlgebra::new(3, 1, p.clone()).unwrap();
        let lam = a.weight_index(&CompositionB::new(3, 3, vec![0]).unwrap()).unwrap();
        let mu = a.weight_index(&CompositionB::new(3, 1, vec![1]).unwrap()).unwrap();
        let id = SignedPerm::identity(1);
        let i = a.find(lam, mu, &id).unwrap();
        let j = a.find(mu, lam, &id).unwrap();
        let k = a.find(lam, lam, &id).unwrap();
        let prod = a.product(i, j).unwrap();
        let c = p.big_q_inv.mul(&p.big_q_inv).add(&FracBi::one());
        let mut expect = vec![FracBi::zero(); a.dim()];
        expect[k] = c;
        assert_eq!(prod, expect);
    }

    #[test]
    fn phi_matches_centralizer() {
        for (n, d) in [(2, 1), (3, 1), (2, 2), (3, 2)] {
            let a = PhiAlgebra::new(n, d, p23()).unwrap();
            let s = TensorSpace::new(n, d, p23()).unwrap();
            let c = centralizer_of(&s, SchurType::B).unwrap();
            for ch in a.check_against_centralizer(&s, &c).unwrap() {
                assert!(ch.passed(), "n={n} d={d} {ch:?}");
            }
        }
    }

    #[test]
    fn schur_functor_and_embedding() {
        let a = PhiAlgebra::new(4, 2, p23()).unwrap();
        let cs = check_schur_functor(&a).unwrap();
        assert!(cs.iter().all(Check::passed), "{:?}", status(&cs));
        assert_eq!(cs[1].witness_dims, vec![8, 8]);
        let a = PhiAlgebra::new(2, 1, p23()).unwrap();
        assert!(check_schur_functor(&a).unwrap().iter().all(Check::passed));
        let a = PhiAlgebra::new(2, 2, p23()).unwrap();
        assert!(matches!(check_schur_functor(&a), Err(Error::RankTooSmall(2))));

        for (n, n2) in [(2, 4), (3, 5), (2, 3)] {
            let s = PhiAlgebra::new(n, 1, p23()).unwrap();
            let b = PhiAlgebra::new(n2, 1, p23()).unwrap();
            let cs = check_embedding(&s, &b).unwrap();
            assert!(cs.iter().all(Check::passed), "{n}->{n2} {:?}", status(&cs));
        }
        let s = PhiAlgebra::new(2, 1, p23()).unwrap();
        let b = PhiAlgebra::new(4, 1, p23()).unwrap();
        assert_eq!(check_embedding(&s, &b).unwrap()[1].witness_dims, vec![2, 2]);
    }

    #[test]
    fn iso_blocks() {
        for (n, d) in [(2, 1), (2, 2), (3, 1), (3, 2), (4, 2)] {
            let s = TensorSpace::new(n, d, p23()).unwrap();
            let iso = IsoPhi::new(&s).unwrap();
            let b = centralizer_of(&s, SchurType::B).unwrap();
            let cs = iso.check(&b).unwrap();
            assert!(cs.iter().all(Check::passed), "n={n} d={d} {:?}", cs);
        }
        assert_eq!(iso_domain_sizes(4, 2), vec![4, 4, 4]);
        assert_eq!(iso_domain_sizes(3, 2), vec![1, 2, 4]);
    }

    #[test]
    fn rank_two_matching_values() {
        let m = rank_two_matching(&p23()).unwrap();
        assert_eq!(m.variant, Some("standard"));
        assert_eq!(m.b_star, vec![crate::scalars::rat(-1, 3), crate::scalars::rat(3, 1)]);
        assert!(m.check().passed());
        let s = rank_two_matching(&Params::symbolic()).unwrap();
        assert_eq!(s.variant, Some("standard"));
    }

    #[test]
    fn iso_fails_when_block_map_is_singular() {
        use crate::scalars::GaussRational;
        let p = Params::new(GaussRational::from_i64(2), GaussRational::i()).unwrap();
        let s = TensorSpace::new(3, 1, p).unwrap();
        assert!(matches!(IsoPhi::new(&s), Err(Error::InvertibilityFailure)));
    }

    #[test]
    fn simple_modules() {
        assert_eq!(simple_count(2, 2), 3);
        assert_eq!(
            bipartitions(2, 2),
            vec![(vec![2], vec![]), (vec![1], vec![1]), (vec![], vec![2])]
        );
        for (n, d) in [(2, 2), (3, 2), (4, 2), (5, 3), (6, 3)] {
            assert!(wedderburn_check(n, d), "n={n} d={d}");
        }
        assert_eq!(ssyt_count(&[2, 1], 3), 8);
        assert_eq!(ssyt_count(&[1, 1, 1], 2), 0);
    }

    #[test]
    fn dj_suite_runs() {
        let r = verify_dj(2, 1, &p23()).unwrap();
        assert!(r.iter().all(|(_, c)| c.passed()), "{r:?}");
    }
}
