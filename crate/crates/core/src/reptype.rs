//! Representation type of `S^A` and `S^B` from the classification theorems,
//! plus the parameter conditions for the cover results.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalars::{f_b, root_of_unity_order, Field, Params};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RepType {
    Semisimple,
    Finite,
    Tame,
    Wild,
}

impl RepType {
    pub fn as_str(self) -> &'static str {
        match self {
            RepType::Semisimple => "semisimple",
            RepType::Finite => "finite",
            RepType::Tame => "tame",
            RepType::Wild => "wild",
        }
    }
}

impl fmt::Display for RepType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    A,
    B,
}

/// Multiplicative order `l` of `q̄ = q^{-2}`, or `None` when `q̄` is not a
/// root of unity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FieldParams {
    pub p: u32,
    pub l: Option<u32>,
}

impl FieldParams {
    pub fn generic(p: u32) -> Self {
        FieldParams { p, l: None }
    }

    pub fn root(p: u32, l: u32) -> Self {
        FieldParams { p, l: Some(l) }
    }

    /// Read `l` off `q^2` by direct powering (up to `bound`).
    pub fn from_q<F: Field>(p: u32, q: &F, bound: u32) -> Self {
        FieldParams {
            p,
            l: root_of_unity_order(&q.mul(q), bound),
        }
    }
}

/// The clause of the theorem that decided the type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub kind: RepType,
    pub clause: &'static str,
}

fn semisimple_a(n: usize, r: usize, fp: FieldParams) -> Option<&'static str> {
    let (p, Some(l)) = (fp.p as usize, fp.l.map(|l| l as usize)) else {
        return Some(if n == 1 { "ss(i) n=1" } else { "ss(i) generic" });
    };
    if n == 1 {
        Some("ss(i) n=1")
    } else if r < l {
        Some("ss(ii) r<l")
    } else if n == 2 && p == 0 && l == 2 && r % 2 == 1 {
        Some("ss(iii)")
    } else if n == 2 && p >= 3 && l == 2 && r % 2 == 1 && r < 2 * p + 1 {
        Some("ss(iv)")
    } else {
        None
    }
}

fn finite_a(n: usize, r: usize, fp: FieldParams) -> Option<&'static str> {
    let (p, l) = (fp.p as usize, fp.l? as usize);
    if l > r {
        return None;
    }
    if n >= 3 && r < 2 * l {
        Some("fin(i)")
    } else if n == 2 && p != 0 && l >= 3 && r < l * p {
        Some("fin(ii)")
    } else if n == 2 && p == 0 && (l >= 3 || (l == 2 && r % 2 == 0)) {
        Some("fin(iii)")
    } else if n == 2
        && p >= 3
        && l == 2
        && ((r % 2 == 0 && r < 2 * p) || (r % 2 == 1 && 2 * p + 1 <= r && r < 2 * p * p + 1))
    {
        Some("fin(iv)")
    } else {
        None
    }
}

fn tame_a(n: usize, r: usize, fp: FieldParams) -> Option<&'static str> {
    let (p, l) = (fp.p as usize, fp.l? as usize);
    if n == 3 && l == 3 && p != 2 && (r == 7 || r == 8) {
        Some("tame(i)")
    } else if n == 3 && l == 2 && (r == 4 || r == 5) {
        Some("tame(ii)")
    } else if n == 4 && l == 2 && r == 5 {
        Some("tame(iii)")
    } else if n == 2 && l >= 3 && (p == 2 || p == 3) && p * l <= r && r < (p + 1) * l {
        Some("tame(iv)")
    } else if n == 2 && l == 2 && p == 3 && [6, 19, 21, 23].contains(&r) {
        Some("tame(v)")
    } else {
        None
    }
}

fn semisimple_b(n: usize, d: usize, fp: FieldParams) -> Option<&'static str> {
    if n == 1 {
        return Some("ss(i) n=1");
    }
    let Some(l) = fp.l else { return Some("ss(ii) generic") };
    if d < l as usize {
        Some("ss(iii) d<l")
    } else if n == 2 {
        Some("ss(iv) n=2")
    } else {
        None
    }
}

fn finite_b(n: usize, d: usize, fp: FieldParams) -> Option<&'static str> {
    let (p, l) = (fp.p as usize, fp.l? as usize);
    if l > d {
        return None;
    }
    if n >= 5 && d < 2 * l {
        Some("fin(i)")
    } else if n == 3 && p == 0 {
        Some("fin(ii)")
    } else if n == 3 && p >= 2 && d < l * p {
        Some("fin(iii)")
    } else if n == 4 && p == 0 && l == 2 && d >= 4 && d % 2 == 1 {
        Some("fin(iv)")
    } else if n == 4 && p >= 3 && l == 2 && 4 < d && d < 2 * p && d % 2 == 1 {
        Some("fin(v)")
    } else {
        None
    }
}

fn tame_b(n: usize, d: usize, fp: FieldParams) -> Option<&'static str> {
    let (p, l) = (fp.p as usize, fp.l? as usize);
    if n == 3 && l == 2 && p == 3 && d == 6 {
        Some("tame(vi)")
    } else if n == 3 && l >= 3 && (p == 2 || p == 3) && l * p <= d && d < l * (p + 1) {
        Some("tame(vii)")
    } else if n == 4 && l == 2 && p == 3 && d == 7 {
        Some("tame(viii)")
    } else {
        None
    }
}

/// Every clause set that matches, in the order semisimple, finite, tame.
pub fn matching_clauses(kind: Kind, n: usize, d: usize, fp: FieldParams) -> Vec<(RepType, &'static str)> {
    let (ss, fin, tame) = match kind {
        Kind::A => (semisimple_a(n, d, fp), finite_a(n, d, fp), tame_a(n, d, fp)),
        Kind::B => (semisimple_b(n, d, fp), finite_b(n, d, fp), tame_b(n, d, fp)),
    };
    [(RepType::Semisimple, ss), (RepType::Finite, fin), (RepType::Tame, tame)]
        .into_iter()
        .filter_map(|(t, c)| c.map(|c| (t, c)))
        .collect()
}

pub fn classify_detailed(kind: Kind, n: usize, d: usize, fp: FieldParams) -> Result<Classification> {
    if n == 0 {
        return Err(Error::OutOfRange(n));
    }
    if fp.l == Some(1) || fp.l == Some(0) {
        return Err(Error::UnsupportedRegime("q^2 = 1".into()));
    }
    if fp.p == 1 {
        return Err(Error::UnsupportedRegime("characteristic must be 0 or a prime".into()));
    }
    let found = matching_clauses(kind, n, d, fp);
    Ok(match found.first() {
        Some(&(kind, clause)) => Classification { kind, clause },
        None => Classification {
            kind: RepType::Wild,
            clause: "none of the listed clauses",
        },
    })
}

pub fn classify(kind: Kind, n: usize, d: usize, fp: FieldParams) -> Result<RepType> {
    Ok(classify_detailed(kind, n, d, fp)?.kind)
}

/// Inputs where the literal finite-type list for `n = 4` leaves a gap
/// (`l ≤ d` outside the stated parity and range conditions).
pub fn n4_boundary_note(n: usize, d: usize, fp: FieldParams) -> Option<String> {
    let l = fp.l? as usize;
    if n != 4 || d < l {
        return None;
    }
    if l == 2 && d < 4 {
        return Some(format!(
            "n=4, l=2, d={d}: below the stated range d >= 4 of the finite clause"
        ));
    }
    if l == 2 && d == 4 {
        return Some("n=4, l=2, d=4: even, so the finite clause with d odd does not apply".into());
    }
    if l >= 3 && d < 2 * l {
        return Some(format!(
            "n=4, l={l}, l <= d={d} < 2l: not covered by the listed clauses"
        ));
    }
    None
}

/// Exact evaluation of the conditions `f^B_d ≠ 0`, `⌊n/2⌋ ≥ d` and
/// `ℓ ≥ 4` (or `q^2` not a root of unity).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionFlags {
    pub fb_invertible: bool,
    pub r_ge_d: bool,
    pub ell_ge_4_or_generic: bool,
    pub ell: Option<u32>,
}

impl ConditionFlags {
    pub fn to_json(&self) -> Value {
        json!({
            "fB_invertible": self.fb_invertible,
            "r_ge_d": self.r_ge_d,
            "ell_ge_4_or_generic": self.ell_ge_4_or_generic,
            "ell": self.ell,
        })
    }
}

/// Powers of `q^2` are tried up to this bound when looking for its order.
pub const ORDER_BOUND: u32 = 64;

pub fn condition_report<F: Field>(n: usize, d: usize, params: &Params<F>) -> Result<ConditionFlags> {
    if F::SYMBOLIC {
        return Err(Error::UnsupportedRegime("conditions need a specialised field".into()));
    }
    let ell = root_of_unity_order(&params.q.mul(&params.q), ORDER_BOUND);
    Ok(ConditionFlags {
        fb_invertible: !params.specialize(&f_b(d)).is_zero(),
        r_ge_d: n / 2 >= d,
        ell_ge_4_or_generic: ell.map_or(true, |l| l >= 4),
        ell,
    })
}

/// Rank of `(x, y) ↦ tr(xy)` on a matrix algebra. In characteristic zero a
/// faithfully represented algebra is semisimple exactly when this is full.
pub fn trace_form_rank<F: Field>(basis: &[Mat<F>]) -> usize {
    let n = basis.len();
    let mut g = Mat::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let p = basis[i].mul(&basis[j]);
            let mut tr = F::zero();
            for k in 0..p.nrows() {
                tr = tr.add(p.get(k, k));
            }
            g.set(i, j, tr.clone());
            g.set(j, i, tr);
        }
    }
    g.rank()
}
