//! Cell data, the (C1)-(C3) axioms, Gram forms and the quasi-heredity test.
//!
//! Algebras are realized as spans of matrices. Cells of more dominant shape
//! sit lower in the poset, so `A_{<λ}` is spanned by cells that strictly
//! dominate `λ`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::hecke::{HeckeAlg, HeckeElt, Side};
use crate::linalg::{Coordinatizer, Mat};
use crate::qcoord::{DualAlgebra, QuotientBasis};
use crate::report::Check;
use crate::scalars::{Field, Params};
use crate::schur::{centralizer_of, commutant, orbit_classes, partitions, IsoPhi, SchurType};
use crate::tensor::{apply_gen, nonneg_values, pos_values, words_over, TensorElt, TensorSpace};
use crate::weylb::{compositions, min_right_coset_reps, type_a_gens, young_gens};

/// Rows of a tableau.
pub type Tableau = Vec<Vec<usize>>;

pub fn fmt_tableau(t: &Tableau) -> String {
    let rows: Vec<String> = t
        .iter()
        .map(|r| format!("[{}]", r.iter().map(usize::to_string).collect::<Vec<_>>().join(",")))
        .collect();
    format!("[{}]", rows.join(","))
}

fn fmt_shape(p: &[usize]) -> String {
    format!("({})", p.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
}

/// `a ⊵ b` in dominance order.
pub fn dominates(a: &[usize], b: &[usize]) -> bool {
    let len = a.len().max(b.len());
    let (mut sa, mut sb) = (0, 0);
    for i in 0..len {
        sa += a.get(i).copied().unwrap_or(0);
        sb += b.get(i).copied().unwrap_or(0);
        if sa < sb {
            return false;
        }
    }
    true
}

/// Standard tableaux of the given shape.
pub fn standard_tableaux(shape: &[usize]) -> Vec<Tableau> {
    fn go(shape: &[usize], next: usize, total: usize, cur: &mut Tableau, out: &mut Vec<Tableau>) {
        if next > total {
            out.push(cur.clone());
            return;
        }
        for r in 0..shape.len() {
            let len = cur[r].len();
            if len < shape[r] && (r == 0 || cur[r - 1].len() > len) {
                cur[r].push(next);
                go(shape, next + 1, total, cur, out);
                cur[r].pop();
            }
        }
    }
    let mut out = Vec::new();
    go(
        shape,
        1,
        shape.iter().sum(),
        &mut vec![Vec::new(); shape.len()],
        &mut out,
    );
    out
}

/// Semistandard tableaux of the given shape with content `content`
/// (entry `i` occurs `content[i-1]` times).
pub fn semistandard_tableaux(shape: &[usize], content: &[usize]) -> Vec<Tableau> {
    fn go(
        shape: &[usize],
        cells: &[(usize, usize)],
        k: usize,
        left: &mut [usize],
        cur: &mut Tableau,
        out: &mut Vec<Tableau>,
    ) {
        if k == cells.len() {
            out.push(cur.clone());
            return;
        }
        let (r, c) = cells[k];
        let lo = {
            let mut lo = 1;
            if c > 0 {
                lo = lo.max(cur[r][c - 1]);
            }
            if r > 0 {
                lo = lo.max(cur[r - 1][c] + 1);
            }
            lo
        };
        for v in lo..=left.len() {
            if left[v - 1] == 0 {
                continue;
            }
            left[v - 1] -= 1;
            cur[r].push(v);
            go(shape, cells, k + 1, left, cur, out);
            cur[r].pop();
            left[v - 1] += 1;
        }
    }
    if shape.iter().sum::<usize>() != content.iter().sum::<usize>() {
        return Vec::new();
    }
    let cells: Vec<(usize, usize)> = shape
        .iter()
        .enumerate()
        .flat_map(|(r, &l)| (0..l).map(move |c| (r, c)))
        .collect();
    let mut out = Vec::new();
    go(
        shape,
        &cells,
        0,
        &mut content.to_vec(),
        &mut vec![Vec::new(); shape.len()],
        &mut out,
    );
    out
}

/// Replace each entry `j` of a standard tableau by the row of `t^μ` holding `j`.
pub fn tableau_type(t: &Tableau, content: &[usize]) -> Tableau {
    let mut block = Vec::new();
    for (i, &c) in content.iter().enumerate() {
        block.extend(std::iter::repeat(i + 1).take(c));
    }
    t.iter()
        .map(|row| row.iter().map(|&j| block[j - 1]).collect())
        .collect()
}

/// Generators `a_1, ..., a_m` with `t = t^λ s_{a_m} ... s_{a_1}`, found by
/// repeatedly swapping `i` and `i+1` when `i+1` sits in a higher row.
pub fn descent_sequence(t: &Tableau) -> Vec<usize> {
    let mut cur = t.clone();
    let mut seq = Vec::new();
    let row_of = |t: &Tableau, v: usize| t.iter().position(|r| r.contains(&v)).unwrap();
    let total: usize = t.iter().map(Vec::len).sum();
    'outer: loop {
        for i in 1..total {
            if row_of(&cur, i + 1) < row_of(&cur, i) {
                for row in cur.iter_mut() {
                    for x in row.iter_mut() {
                        if *x == i {
                            *x = i + 1;
                        } else if *x == i + 1 {
                            *x = i;
                        }
                    }
                }
                seq.push(i);
                continue 'outer;
            }
        }
        break;
    }
    seq
}

/// An algebra given as the span of a linearly independent family of matrices.
#[derive(Clone, Debug)]
pub struct MatrixAlgebra<F> {
    basis: Vec<Mat<F>>,
    coord: Coordinatizer<F>,
    size: usize,
}

impl<F: Field> MatrixAlgebra<F> {
    pub fn new(basis: Vec<Mat<F>>) -> Result<Self> {
        let size = basis.first().map(Mat::nrows).ok_or(Error::OutOfRange(0))?;
        let coord = Coordinatizer::new(basis.iter().map(|m| m.flat().to_vec()).collect(), size * size)?;
        Ok(MatrixAlgebra { basis, coord, size })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn basis(&self) -> &[Mat<F>] {
        &self.basis
    }

    pub fn element(&self, c: &[F]) -> Mat<F> {
        Mat::from_flat(
            self.size,
            self.size,
            self.coord
                .basis()
                .iter()
                .zip(c)
                .fold(vec![F::zero(); self.size * self.size], |mut acc, (b, x)| {
                    if !x.is_zero() {
                        for (a, y) in acc.iter_mut().zip(b) {
                            if !y.is_zero() {
                                *a = a.add(&x.mul(y));
                            }
                        }
                    }
                    acc
                }),
        )
    }

    pub fn coords(&self, m: &Mat<F>) -> Result<Vec<F>> {
        self.coord
            .coords(m.flat())
            .ok_or_else(|| Error::ExpansionFailure("matrix outside the algebra".into()))
    }

    pub fn mul(&self, x: &[F], y: &[F]) -> Result<Vec<F>> {
        self.coords(&self.element(x).mul(&self.element(y)))
    }

    /// The involution induced by transposition, as a matrix on coordinates.
    pub fn transpose_star(&self) -> Result<Mat<F>> {
        let cols: Vec<Vec<F>> = self
            .basis
            .iter()
            .map(|b| self.coords(&b.transpose()))
            .collect::<Result<_>>()?;
        Ok(Mat::from_cols(&cols, self.dim()))
    }
}

/// `(Λ, M, C, *)` with `C` in coordinates of a fixed algebra basis.
#[derive(Clone, Debug)]
pub struct CellDatum<F> {
    pub cells: Vec<String>,
    pub labels: Vec<Vec<String>>,
    /// `less[μ][λ]` holds when `μ < λ`.
    pub less: Vec<Vec<bool>>,
    /// `elements[λ][s][t]` are the coordinates of `C^λ_{s,t}`.
    pub elements: Vec<Vec<Vec<Vec<F>>>>,
    pub star: Mat<F>,
}

impl<F: Field> CellDatum<F> {
    /// `Σ_λ |M(λ)|^2`.
    pub fn size(&self) -> usize {
        self.labels.iter().map(|m| m.len() * m.len()).sum()
    }

    fn flat(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (l, m) in self.labels.iter().enumerate() {
            for s in 0..m.len() {
                for t in 0..m.len() {
                    out.push((l, s, t));
                }
            }
        }
        out
    }
}

/// `φ_λ(C_s, C_t)` over `M(λ)^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct GramForm<F> {
    pub cell: String,
    pub matrix: Mat<F>,
}

impl<F: Field> GramForm<F> {
    pub fn is_nonzero(&self) -> bool {
        !self.matrix.is_zero()
    }
}

#[derive(Clone, Debug)]
pub struct CellReport<F> {
    pub checks: Vec<Check>,
    pub grams: Vec<GramForm<F>>,
    pub quasi_hereditary: bool,
}

impl<F: Field> CellReport<F> {
    pub fn axioms_hold(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    /// First failing axiom as an error.
    pub fn ensure(&self) -> Result<()> {
        match self.checks.iter().find(|c| !c.passed()) {
            None => Ok(()),
            Some(c) => Err(Error::AxiomFailure {
                axiom: c.id.clone(),
                witness: c.counterexample.clone().unwrap_or_default(),
            }),
        }
    }
}

/// Check (C1)-(C3) for `datum` inside `alg`, extract the Gram forms and
/// decide quasi-heredity by the nonvanishing criterion.
pub fn verify_cell_axioms<F: Field>(datum: &CellDatum<F>, alg: &MatrixAlgebra<F>) -> Result<CellReport<F>> {
    let n = alg.dim();
    if datum.size() != n {
        return Err(Error::RankMismatch(datum.size(), n));
    }
    let flat = datum.flat();
    let pos: HashMap<(usize, usize, usize), usize> = flat.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let mats: Vec<Mat<F>> = flat
        .iter()
        .map(|&(l, s, t)| alg.element(&datum.elements[l][s][t]))
        .collect();
    let mut checks = Vec::new();

    let cell_coord = Coordinatizer::new(
        mats.iter().map(|m| m.flat().to_vec()).collect(),
        alg.size() * alg.size(),
    );
    let c1 = cell_coord.is_ok();
    let label =
        |l: usize, s: usize, t: usize| format!("{} {} {}", datum.cells[l], datum.labels[l][s], datum.labels[l][t]);
    checks.push(Check::new("cell.c1_basis", c1, vec![n, flat.len()]));

    // (C2) and the involution itself
    let mut bad = None;
    for &(l, s, t) in &flat {
        if datum.star.mul_vec(&datum.elements[l][s][t]) != datum.elements[l][t][s] {
            bad.get_or_insert(label(l, s, t));
        }
    }
    if datum.star.mul(&datum.star) != Mat::identity(n) {
        bad.get_or_insert("star is not an involution".into());
    }
    for i in 0..n {
        for j in 0..n {
            let (ei, ej) = (unit::<F>(n, i), unit::<F>(n, j));
            let lhs = datum.star.mul_vec(&alg.mul(&ei, &ej)?);
            let rhs = alg.mul(&datum.star.mul_vec(&ej), &datum.star.mul_vec(&ei))?;
            if lhs != rhs {
                bad.get_or_insert(format!("star not anti-multiplicative on ({i},{j})"));
            }
        }
    }
    checks.push(Check::new("cell.c2_involution", bad.is_none(), vec![n]).with_counterexample(bad));

    let Ok(cell_coord) = cell_coord else {
        checks.push(Check::skipped("cell.c3_triangular", "cellular family is not a basis"));
        checks.push(Check::skipped("cell.gram_congruence", "cellular family is not a basis"));
        return Ok(CellReport {
            checks,
            grams: Vec::new(),
            quasi_hereditary: false,
        });
    };
    let expand = |m: &Mat<F>| {
        cell_coord
            .coords(m.flat())
            .ok_or_else(|| Error::ExpansionFailure("product outside the algebra".into()))
    };

    // (C3) against every basis element of the algebra
    let mut bad = None;
    for (k, a) in alg.basis().iter().enumerate() {
        for (l, m) in datum.labels.iter().enumerate() {
            for s in 0..m.len() {
                let mut reference: Option<Vec<F>> = None;
                for t in 0..m.len() {
                    let c = expand(&a.mul(&mats[pos[&(l, s, t)]]))?;
                    let mut r = vec![F::zero(); m.len()];
                    for (i, x) in c.iter().enumerate() {
                        if x.is_zero() {
                            continue;
                        }
                        let (l2, s2, t2) = flat[i];
                        if datum.less[l2][l] {
                            continue;
                        }
                        if l2 == l && t2 == t {
                            r[s2] = x.clone();
                        } else {
                            bad.get_or_insert(format!("a={k} on {}", label(l, s, t)));
                        }
                    }
                    match &reference {
                        None => reference = Some(r),
                        Some(r0) if *r0 != r => {
                            bad.get_or_insert(format!("a={k} on {}: coefficients depend on t", label(l, s, t)));
                        }
                        _ => {}
                    }
                }
            }
        }
    }
    checks.push(Check::new("cell.c3_triangular", bad.is_none(), vec![n]).with_counterexample(bad));

    // C_{s,s} C_{t,t} ≡ φ(s,t) C_{s,t} mod A_{<λ}
    let mut grams = Vec::new();
    let mut bad = None;
    for (l, m) in datum.labels.iter().enumerate() {
        let mut g = Mat::zeros(m.len(), m.len());
        for s in 0..m.len() {
            for t in 0..m.len() {
                let c = expand(&mats[pos[&(l, s, s)]].mul(&mats[pos[&(l, t, t)]]))?;
                for (i, x) in c.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let (l2, s2, t2) = flat[i];
                    if datum.less[l2][l] {
                        continue;
                    }
                    if (l2, s2, t2) == (l, s, t) {
                        g.set(s, t, x.clone());
                    } else {
                        bad.get_or_insert(format!("C_ss C_tt at {}", label(l, s, t)));
                    }
                }
            }
        }
        grams.push(GramForm {
            cell: datum.cells[l].clone(),
            matrix: g,
        });
    }
    checks.push(Check::new("cell.gram_congruence", bad.is_none(), vec![datum.cells.len()]).with_counterexample(bad));
    let quasi_hereditary = checks.iter().all(Check::passed) && grams.iter().all(GramForm::is_nonzero);
    Ok(CellReport {
        checks,
        grams,
        quasi_hereditary,
    })
}

fn unit<F: Field>(n: usize, i: usize) -> Vec<F> {
    let mut v = vec![F::zero(); n];
    v[i] = F::one();
    v
}

/// Move `word` along the reduced word of a shortest coset representative.
fn move_word(word: &[i32], gens: &[usize]) -> Result<Vec<i32>> {
    let mut w = word.to_vec();
    for &g in gens {
        if w[g - 1] >= w[g] {
            return Err(Error::ExpansionFailure(format!("{word:?} is not moved by ascents")));
        }
        w.swap(g - 1, g);
    }
    Ok(w)
}

fn words_for(vals: &[i32], content: &[usize]) -> Vec<i32> {
    vals.iter()
        .zip(content)
        .flat_map(|(&v, &c)| std::iter::repeat(v).take(c))
        .collect()
}

/// Murphy cell datum of `S^A` acting on `V^{⊗k}` with letters `vals`,
/// built from the maps `x_ν h ↦ m_{𝔰𝔱} h`.
pub fn murphy_on<F: Field>(vals: &[i32], k: usize, params: &Params<F>) -> Result<(MatrixAlgebra<F>, CellDatum<F>)> {
    if k == 0 {
        let alg = MatrixAlgebra::new(vec![Mat::identity(1)])?;
        let datum = CellDatum {
            cells: vec!["()".into()],
            labels: vec![vec!["[]".into()]],
            less: vec![vec![false]],
            elements: vec![vec![vec![vec![F::one()]]]],
            star: Mat::identity(1),
        };
        return Ok((alg, datum));
    }
    if vals.is_empty() {
        return Err(Error::InvalidWeight("no letters for a positive degree".into()));
    }
    let r = vals.len();
    let words = words_over(vals, k);
    let index: HashMap<Vec<i32>, usize> = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    let size = words.len();
    let mut gens = Vec::new();
    for t in 1..k {
        let mut m = Mat::zeros(size, size);
        for (j, w) in words.iter().enumerate() {
            for (w2, c) in apply_gen(params, &TensorElt::basis(w.clone()), t).terms() {
                m.set(index[w2], j, c.clone());
            }
        }
        gens.push(m);
    }
    let classes = orbit_classes(&words, |w| {
        let mut s = w.to_vec();
        s.sort_unstable();
        s
    });
    let alg = MatrixAlgebra::new(commutant(&gens, &classes, size))?;

    let hecke = HeckeAlg::new(k, params.clone())?;
    let comps = compositions(k, r);
    struct Weight<F> {
        content: Vec<usize>,
        x_t: Vec<(crate::weylb::SignedPerm, HeckeElt<F>, usize)>,
        reps: Vec<(crate::weylb::SignedPerm, usize)>,
    }
    let mut weights = Vec::new();
    for c in &comps {
        let x = hecke.parabolic_sum(&young_gens(c))?;
        let base = words_for(vals, c);
        let reps = min_right_coset_reps(k, &type_a_gens(k), &young_gens(c))?;
        let mut x_t = Vec::new();
        let mut col = Vec::new();
        for f in reps {
            let row = index[&move_word(&base, &f.reduced_word())?];
            x_t.push((f.clone(), hecke.mul_basis_right(&x, &f)?, row));
            col.push((f, row));
        }
        weights.push(Weight {
            content: c.clone(),
            x_t,
            reps: col,
        });
    }

    let q_inv = params.q_inv.clone();
    let shapes = partitions(k, r);
    let mut cells = Vec::new();
    let mut labels = Vec::new();
    let mut elements = Vec::new();
    for lam in &shapes {
        let x_lam = hecke.parabolic_sum(&young_gens(lam))?;
        let std = standard_tableaux(lam);
        // x_λ T_{d(t)} and T_{d(s)}^* x_λ T_{d(t)}, each scaled by q^{-ℓ}
        let seqs: Vec<Vec<usize>> = std.iter().map(descent_sequence).collect();
        let right: Vec<HeckeElt<F>> = seqs
            .iter()
            .map(|seq| {
                let mut h = x_lam.clone();
                for &g in seq.iter().rev() {
                    h = hecke.mul_gen(&h, g, Side::Right)?;
                }
                Ok(h.scale(&q_inv.pow(seq.len() as i64)?))
            })
            .collect::<Result<_>>()?;
        let mut cell_labels = Vec::new();
        let mut members: Vec<(usize, Vec<usize>)> = Vec::new();
        for (wi, w) in weights.iter().enumerate() {
            for sst in semistandard_tableaux(lam, &w.content) {
                let idx: Vec<usize> = std
                    .iter()
                    .enumerate()
                    .filter(|(_, t)| tableau_type(t, &w.content) == sst)
                    .map(|(i, _)| i)
                    .collect();
                cell_labels.push(format!("{}:{}", fmt_shape(&w.content), fmt_tableau(&sst)));
                members.push((wi, idx));
            }
        }
        let mut block = Vec::new();
        for (mu, s_set) in &members {
            let mut row = Vec::new();
            for (nu, t_set) in &members {
                let mut m = HeckeElt::zero(k);
                for &s in s_set {
                    for &t in t_set {
                        let mut h = right[t].clone();
                        for &g in &seqs[s] {
                            h = hecke.mul_gen(&h, g, Side::Left)?;
                        }
                        m = m.add(&h.scale(&q_inv.pow(seqs[s].len() as i64)?));
                    }
                }
                let mat = hom_matrix(&hecke, &m, &weights[*mu].x_t, &weights[*nu].reps, size)?;
                row.push(alg.coords(&mat)?);
            }
            block.push(row);
        }
        cells.push(fmt_shape(lam));
        labels.push(cell_labels);
        elements.push(block);
    }
    let less = shapes
        .iter()
        .map(|a| shapes.iter().map(|b| a != b && dominates(a, b)).collect())
        .collect();
    let star = alg.transpose_star()?;
    Ok((
        alg,
        CellDatum {
            cells,
            labels,
            less,
            elements,
            star,
        },
    ))
}

/// Matrix of `x_ν h ↦ m h` from the orbit of `ν` to the orbit of `μ`.
fn hom_matrix<F: Field>(
    hecke: &HeckeAlg<F>,
    m: &HeckeElt<F>,
    target: &[(crate::weylb::SignedPerm, HeckeElt<F>, usize)],
    source: &[(crate::weylb::SignedPerm, usize)],
    size: usize,
) -> Result<Mat<F>> {
    let mut out = Mat::zeros(size, size);
    for (e, col) in source {
        let y = hecke.mul_basis_right(m, e)?;
        let mut back = HeckeElt::zero(hecke.rank());
        for (f, xf, row) in target {
            let c = y.coeff(f);
            if !c.is_zero() {
                back = back.add(&xf.scale(&c));
                out.set(*row, *col, c);
            }
        }
        if back != y {
            return Err(Error::ExpansionFailure(
                "image is not in the target permutation module".into(),
            ));
        }
    }
    Ok(out)
}

/// Murphy datum for `S^A_q(n, d)` on letters `1..=n`.
pub fn murphy_datum<F: Field>(n: usize, d: usize, params: &Params<F>) -> Result<(MatrixAlgebra<F>, CellDatum<F>)> {
    if n > 2 || d > 3 {
        return Err(Error::SizeGuard(format!("tableaux for n={n}, d={d}")));
    }
    let vals: Vec<i32> = (1..=n as i32).collect();
    murphy_on(&vals, d, params)
}

/// Where a product cell comes from: block `a` and the two component cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellOrigin {
    pub a: usize,
    pub left: usize,
    pub right: usize,
}

/// The product datum on `S^B(n, d)`, pulled back from
/// `⊕_a S^A(⌈n/2⌉, a) ⊗ S^A(⌊n/2⌋, d-a)` through the block isomorphism.
pub struct ProductDatum<F> {
    pub algebra: MatrixAlgebra<F>,
    pub datum: CellDatum<F>,
    pub origins: Vec<CellOrigin>,
    /// Component data per block: `(a, left, right)`.
    pub components: Vec<(usize, CellDatum<F>, MatrixAlgebra<F>, CellDatum<F>, MatrixAlgebra<F>)>,
}

pub fn product_datum<F: Field>(n: usize, d: usize, params: &Params<F>) -> Result<ProductDatum<F>> {
    let space = TensorSpace::new(n, d, params.clone())?;
    let iso = IsoPhi::new(&space)?;
    let algebra = MatrixAlgebra::new(centralizer_of(&space, SchurType::B)?)?;
    let images: Vec<Vec<Mat<F>>> = algebra.basis().iter().map(|b| iso.apply(b)).collect::<Result<_>>()?;
    let flat_tuple = |t: &[Mat<F>]| t.iter().flat_map(|m| m.flat().to_vec()).collect::<Vec<F>>();
    let sizes: Vec<usize> = iso.blocks().iter().map(|b| b.domain.len()).collect();
    let total: usize = sizes.iter().map(|s| s * s).sum();
    let phi = match Coordinatizer::new(images.iter().map(|t| flat_tuple(t)).collect(), total) {
        Err(Error::SingularMap { .. }) => return Err(Error::InvertibilityFailure),
        r => r?,
    };

    let (left_vals, right_vals) = (nonneg_values(n), pos_values(n));
    let mut cells = Vec::new();
    let mut labels = Vec::new();
    let mut elements = Vec::new();
    let mut origins = Vec::new();
    let mut components = Vec::new();
    for (bi, block) in iso.blocks().iter().enumerate() {
        if block.domain.is_empty() {
            continue;
        }
        let a = block.a;
        let (alg1, dat1) = murphy_on(&left_vals, a, params)?;
        let (alg2, dat2) = murphy_on(&right_vals, d - a, params)?;
        let idx1: HashMap<Vec<i32>, usize> = words_over(&left_vals, a)
            .into_iter()
            .enumerate()
            .map(|(i, w)| (w, i))
            .collect();
        let idx2: HashMap<Vec<i32>, usize> = words_over(&right_vals, d - a)
            .into_iter()
            .enumerate()
            .map(|(i, w)| (w, i))
            .collect();
        let split: Vec<(usize, usize)> = block.domain.iter().map(|w| (idx1[&w[..a]], idx2[&w[a..]])).collect();
        for (l1, m1) in dat1.labels.iter().enumerate() {
            for (l2, m2) in dat2.labels.iter().enumerate() {
                let mut lab = Vec::new();
                for s1 in m1 {
                    for s2 in m2 {
                        lab.push(format!("{s1}|{s2}"));
                    }
                }
                let pairs: Vec<(usize, usize)> =
                    (0..m1.len()).flat_map(|i| (0..m2.len()).map(move |j| (i, j))).collect();
                let mut block_elems = Vec::new();
                for &(s1, s2) in &pairs {
                    let mut row = Vec::new();
                    for &(t1, t2) in &pairs {
                        let c1 = alg1.element(&dat1.elements[l1][s1][t1]);
                        let c2 = alg2.element(&dat2.elements[l2][s2][t2]);
                        let mut k = Mat::zeros(split.len(), split.len());
                        for (i, &(i1, i2)) in split.iter().enumerate() {
                            for (j, &(j1, j2)) in split.iter().enumerate() {
                                let v = c1.get(i1, j1).mul(c2.get(i2, j2));
                                if !v.is_zero() {
                                    k.set(i, j, v);
                                }
                            }
                        }
                        let tuple: Vec<Mat<F>> = sizes
                            .iter()
                            .enumerate()
                            .map(|(j, &s)| if j == bi { k.clone() } else { Mat::zeros(s, s) })
                            .collect();
                        row.push(phi.coords(&flat_tuple(&tuple)).ok_or_else(|| {
                            Error::ExpansionFailure(format!("cell element of block a={a} is not in the image"))
                        })?);
                    }
                    block_elems.push(row);
                }
                cells.push(format!("a={a}:{}|{}", dat1.cells[l1], dat2.cells[l2]));
                labels.push(lab);
                elements.push(block_elems);
                origins.push(CellOrigin { a, left: l1, right: l2 });
            }
        }
        components.push((a, dat1, alg1, dat2, alg2));
    }
    let comp = |a: usize| components.iter().find(|c| c.0 == a).unwrap();
    let less = origins
        .iter()
        .map(|x| {
            origins
                .iter()
                .map(|y| {
                    if x.a != y.a {
                        return false;
                    }
                    let c = comp(x.a);
                    c.1.less[x.left][y.left] || (x.left == y.left && c.3.less[x.right][y.right])
                })
                .collect()
        })
        .collect();
    let star_cols: Vec<Vec<F>> = images
        .iter()
        .map(|t| {
            let tr: Vec<Mat<F>> = t.iter().map(Mat::transpose).collect();
            phi.coords(&flat_tuple(&tr))
                .ok_or_else(|| Error::ExpansionFailure("transpose leaves the image".into()))
        })
        .collect::<Result<_>>()?;
    let star = Mat::from_cols(&star_cols, algebra.dim());
    Ok(ProductDatum {
        algebra,
        datum: CellDatum {
            cells,
            labels,
            less,
            elements,
            star,
        },
        origins,
        components,
    })
}

/// Gram values of the product datum equal products of the component values.
pub fn check_gram_factorization<F: Field>(pd: &ProductDatum<F>) -> Result<Check> {
    let report = verify_cell_axioms(&pd.datum, &pd.algebra)?;
    let mut bad = None;
    for (g, o) in report.grams.iter().zip(&pd.origins) {
        let c = pd.components.iter().find(|c| c.0 == o.a).unwrap();
        let g1 = &verify_cell_axioms(&c.1, &c.2)?.grams[o.left].matrix;
        let g2 = &verify_cell_axioms(&c.3, &c.4)?.grams[o.right].matrix;
        let (m2, _) = (g2.nrows(), g2.ncols());
        for s in 0..g.matrix.nrows() {
            for t in 0..g.matrix.ncols() {
                let v = g1.get(s / m2, t / m2).mul(g2.get(s % m2, t % m2));
                if *g.matrix.get(s, t) != v {
                    bad.get_or_insert(format!("{} at ({s},{t})", g.cell));
                }
            }
        }
    }
    Ok(Check::new("cell.gram_factorization", bad.is_none(), vec![report.grams.len()]).with_counterexample(bad))
}

/// `S^B(2,1) ≅ H_{Q^{-1}}(Σ_2)` with `t = -b^*`, cells `(2) < (1,1)`,
/// `C^{(2)} = 1 + Q^{-1} t` and `C^{(1,1)} = 1`.
pub fn rank_two_hecke_datum<F: Field>(params: &Params<F>) -> Result<(MatrixAlgebra<F>, CellDatum<F>)> {
    let dual = DualAlgebra::new(QuotientBasis::new(2, 1, params.clone())?);
    let space = TensorSpace::new(2, 1, params.clone())?;
    let b = dual
        .quotient()
        .basis()
        .iter()
        .position(|m| m == &vec![(-1, 1)])
        .ok_or_else(|| Error::InvalidIndex("x_{-1,1} is not a basis monomial".into()))?;
    let t = dual.pairing_matrix(&dual.basis_elt(b), &space).scale(&F::one().neg());
    let alg = MatrixAlgebra::new(centralizer_of(&space, SchurType::B)?)?;
    let one = Mat::identity(2);
    let c_top = one.add(&t.scale(&params.big_q_inv));
    let datum = CellDatum {
        cells: vec!["(2)".into(), "(1,1)".into()],
        labels: vec![vec!["[[1,2]]".into()], vec!["[[1],[2]]".into()]],
        less: vec![vec![false, true], vec![false, false]],
        elements: vec![vec![vec![alg.coords(&c_top)?]], vec![vec![alg.coords(&one)?]]],
        star: alg.transpose_star()?,
    };
    Ok((alg, datum))
}
