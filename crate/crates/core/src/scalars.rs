//! Exact coefficient arithmetic.
//!
//! Everything downstream is generic over [`Field`]. Three concrete fields are
//! provided: [`Rational`], [`GaussRational`] (rationals adjoined `i`) and
//! [`FracBi`], the field of fractions of bivariate Laurent polynomials in the
//! two Hecke parameters `q` and `Q`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    Rational::from_str(s).map_err(|_| Error::Parse(format!("not a rational: {s:?}")))
}

pub trait Field: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// True for the field of rational functions in `q`, `Q`.
    const SYMBOLIC: bool = false;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self>;
    fn from_rational(r: &Rational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Rough size used to prefer cheap pivots during elimination.
    fn weight(&self) -> usize {
        0
    }

    fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }
}

impl Field for Rational {
    fn zero() -> Self {
        <Rational as Zero>::zero()
    }
    fn one() -> Self {
        <Rational as One>::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Err(Error::ZeroInverse)
        } else {
            Ok(self.recip())
        }
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

// ---- Gaussian rationals ----

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussRational { re, im }
    }

    pub fn i() -> Self {
        GaussRational::new(<Rational as Zero>::zero(), <Rational as One>::one())
    }

    pub fn conj(&self) -> Self {
        GaussRational::new(self.re.clone(), -&self.im)
    }

    pub fn norm(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl Field for GaussRational {
    fn zero() -> Self {
        GaussRational::new(<Rational as Zero>::zero(), <Rational as Zero>::zero())
    }
    fn one() -> Self {
        GaussRational::new(<Rational as One>::one(), <Rational as Zero>::zero())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }
    fn add(&self, o: &Self) -> Self {
        GaussRational::new(&self.re + &o.re, &self.im + &o.im)
    }
    fn sub(&self, o: &Self) -> Self {
        GaussRational::new(&self.re - &o.re, &self.im - &o.im)
    }
    fn mul(&self, o: &Self) -> Self {
        GaussRational::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
    fn neg(&self) -> Self {
        GaussRational::new(-&self.re, -&self.im)
    }
    fn inv(&self) -> Result<Self> {
        let n = self.norm();
        if Zero::is_zero(&n) {
            return Err(Error::ZeroInverse);
        }
        let c = self.conj();
        Ok(GaussRational::new(&c.re / &n, &c.im / &n))
    }
    fn from_rational(r: &Rational) -> Self {
        GaussRational::new(r.clone(), <Rational as Zero>::zero())
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_zero = Zero::is_zero(&self.im);
        let re_zero = Zero::is_zero(&self.re);
        if im_zero {
            return write!(f, "{}", self.re);
        }
        if re_zero {
            return write!(f, "{}*i", self.im);
        }
        if self.im.is_negative() {
            write!(f, "{}-{}*i", self.re, -&self.im)
        } else {
            write!(f, "{}+{}*i", self.re, self.im)
        }
    }
}

impl FromStr for GaussRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty gaussian rational".into()));
        }
        let split = s
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(k, _)| k)
            .last();
        let (re_part, im_part) = match split {
            Some(k) => (&s[..k], Some(&s[k..])),
            None if s.ends_with('i') => ("0", Some(s.as_str())),
            None => (s.as_str(), None),
        };
        let re = parse_rational(re_part)?;
        let im = match im_part {
            None => <Rational as Zero>::zero(),
            Some(t) => {
                let body = t
                    .strip_suffix('i')
                    .ok_or_else(|| Error::Parse(format!("imaginary part must end in i: {t:?}")))?;
                let body = body.strip_suffix('*').unwrap_or(body);
                match body {
                    "" | "+" => <Rational as One>::one(),
                    "-" => -<Rational as One>::one(),
                    b => parse_rational(b.strip_prefix('+').unwrap_or(b))?,
                }
            }
        };
        Ok(GaussRational::new(re, im))
    }
}

// ---- Laurent polynomials in q, Q ----

/// Finitely supported map `(a, b) -> c` standing for `sum c q^a Q^b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LaurentBi {
    terms: BTreeMap<(i32, i32), Rational>,
}

impl LaurentBi {
    pub fn zero() -> Self {
        LaurentBi::default()
    }

    pub fn one() -> Self {
        LaurentBi::monomial(<Rational as One>::one(), 0, 0)
    }

    pub fn constant(c: Rational) -> Self {
        LaurentBi::monomial(c, 0, 0)
    }

    pub fn monomial(c: Rational, a: i32, b: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !Zero::is_zero(&c) {
            terms.insert((a, b), c);
        }
        LaurentBi { terms }
    }

    /// The symbol `q`.
    pub fn q() -> Self {
        LaurentBi::monomial(<Rational as One>::one(), 1, 0)
    }

    /// The symbol `Q`.
    pub fn big_q() -> Self {
        LaurentBi::monomial(<Rational as One>::one(), 0, 1)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i32, i32), &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, a: i32, b: i32) -> Rational {
        self.terms
            .get(&(a, b))
            .cloned()
            .unwrap_or_else(<Rational as Zero>::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            let e = terms.entry(*k).or_insert_with(<Rational as Zero>::zero);
            *e += c;
            if Zero::is_zero(e) {
                terms.remove(k);
            }
        }
        LaurentBi { terms }
    }

    pub fn neg(&self) -> Self {
        LaurentBi {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if Zero::is_zero(c) {
            return LaurentBi::zero();
        }
        LaurentBi {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Multiply by `q^a Q^b`.
    pub fn shift(&self, a: i32, b: i32) -> Self {
        LaurentBi {
            terms: self
                .terms
                .iter()
                .map(|((x, y), c)| ((x + a, y + b), c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<(i32, i32), Rational> = BTreeMap::new();
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                let e = terms.entry((a1 + a2, b1 + b2)).or_insert_with(<Rational as Zero>::zero);
                *e += c1 * c2;
            }
        }
        terms.retain(|_, c| !Zero::is_zero(c));
        LaurentBi { terms }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = LaurentBi::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Componentwise minimum of exponents, `None` for zero.
    fn min_exponents(&self) -> Option<(i32, i32)> {
        let a = self.terms.keys().map(|k| k.0).min()?;
        let b = self.terms.keys().map(|k| k.1).min()?;
        Some((a, b))
    }

    /// Inverse of a unit `c q^a Q^b`.
    pub fn unit_inverse(&self) -> Option<Self> {
        if !self.is_monomial() {
            return None;
        }
        let ((a, b), c) = self.terms.iter().next()?;
        Some(LaurentBi::monomial(c.recip(), -a, -b))
    }

    /// Range of the exponent of `q`, `None` for zero.
    pub fn q_degree_range(&self) -> Option<(i32, i32)> {
        let lo = self.terms.keys().map(|k| k.0).min()?;
        let hi = self.terms.keys().map(|k| k.0).max()?;
        Some((lo, hi))
    }

    /// Exact quotient in the polynomial ring, using the order that compares
    /// the `Q` exponent first. Both operands must have nonnegative exponents.
    fn div_exact_poly(&self, divisor: &Self) -> Option<Self> {
        let key = |k: &(i32, i32)| (k.1, k.0);
        let (lt_d, lc_d) = divisor.terms.iter().max_by_key(|(k, _)| key(k))?;
        let mut rem = self.clone();
        let mut quot = LaurentBi::zero();
        while let Some((lt_r, lc_r)) = rem.terms.iter().max_by_key(|(k, _)| key(k)) {
            let (da, db) = (lt_r.0 - lt_d.0, lt_r.1 - lt_d.1);
            if da < 0 || db < 0 {
                return None;
            }
            let t = LaurentBi::monomial(lc_r / lc_d, da, db);
            rem = rem.sub(&t.mul(divisor));
            quot = quot.add(&t);
        }
        Some(quot)
    }
}

impl fmt::Display for LaurentBi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((a, b), c)| format!("{c}*q^{a}*Q^{b}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl FromStr for LaurentBi {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" || s.is_empty() {
            return Ok(LaurentBi::zero());
        }
        let mut acc = LaurentBi::zero();
        for term in s.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(Error::Parse(format!("empty term in {s:?}")));
            }
            let mut c = <Rational as One>::one();
            let (mut a, mut b) = (0i32, 0i32);
            for factor in term.split('*') {
                let factor = factor.trim();
                let (neg, body) = match factor.strip_prefix('-') {
                    Some(rest) if rest.starts_with('q') || rest.starts_with('Q') => (true, rest),
                    _ => (false, factor),
                };
                if neg {
                    c = -c;
                }
                let exponent = |sym: &str| -> Result<i32> {
                    match sym.strip_prefix('^') {
                        None if sym.is_empty() => Ok(1),
                        None => Err(Error::Parse(format!("bad factor {factor:?}"))),
                        Some(e) => e
                            .parse::<i32>()
                            .map_err(|_| Error::Parse(format!("bad exponent {e:?}"))),
                    }
                };
                if let Some(rest) = body.strip_prefix('q') {
                    a += exponent(rest)?;
                } else if let Some(rest) = body.strip_prefix('Q') {
                    b += exponent(rest)?;
                } else {
                    c *= parse_rational(body)?;
                }
            }
            acc = acc.add(&LaurentBi::monomial(c, a, b));
        }
        Ok(acc)
    }
}

// ---- polynomial gcd over Q[q][Q] ----

type UPoly = Vec<Rational>;
type BPoly = Vec<UPoly>;

fn utrim(p: &mut UPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn umul(a: &UPoly, b: &UPoly) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![<Rational as Zero>::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    utrim(&mut out);
    out
}

fn udivrem(a: &UPoly, b: &UPoly) -> (UPoly, UPoly) {
    let mut r = a.clone();
    utrim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lb = b.last().expect("nonzero divisor").clone();
    let mut q = vec![<Rational as Zero>::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / &lb;
        for (i, y) in b.iter().enumerate() {
            r[i + shift] -= &c * y;
        }
        q[shift] = c;
        utrim(&mut r);
    }
    utrim(&mut q);
    (q, r)
}

fn umonic(mut p: UPoly) -> UPoly {
    if let Some(l) = p.last().cloned() {
        for c in p.iter_mut() {
            *c /= &l;
        }
    }
    p
}

/// Integer polynomial proportional to `p` with coprime coefficients.
fn zprimitive(p: &UPoly) -> Vec<BigInt> {
    use num_integer::Integer;
    let mut l = BigInt::one();
    for c in p {
        l = l.lcm(c.denom());
    }
    let mut z: Vec<BigInt> = p.iter().map(|c| (c * &l).to_integer()).collect();
    zmake_primitive(&mut z);
    z
}

fn zmake_primitive(z: &mut Vec<BigInt>) {
    use num_integer::Integer;
    while z.last().is_some_and(Zero::is_zero) {
        z.pop();
    }
    let mut g = BigInt::zero();
    for c in z.iter() {
        g = g.gcd(c);
    }
    if !g.is_zero() && !g.is_one() {
        for c in z.iter_mut() {
            *c /= &g;
        }
    }
}

/// Pseudo-remainder of integer polynomials.
fn zprem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = b.len() - 1;
    let lc = &b[n];
    let mut r = a.to_vec();
    while r.len() > n && !r.is_empty() {
        let m = r.len() - 1;
        let lead = r[m].clone();
        for c in r.iter_mut() {
            *c *= lc;
        }
        for (i, c) in b.iter().enumerate() {
            r[i + m - n] -= c * &lead;
        }
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
        zmake_primitive(&mut r);
    }
    r
}

/// Monic gcd over Q (empty for two zero inputs).
fn ugcd(a: &UPoly, b: &UPoly) -> UPoly {
    let mut x = zprimitive(a);
    let mut y = zprimitive(b);
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    if y.is_empty() {
        return umonic(x.into_iter().map(Rational::from_integer).collect());
    }
    loop {
        if y.len() == 1 {
            return vec![<Rational as One>::one()];
        }
        let r = zprem(&x, &y);
        if r.is_empty() {
            return umonic(y.into_iter().map(Rational::from_integer).collect());
        }
        x = y;
        y = r;
    }
}

fn to_bpoly(p: &LaurentBi) -> BPoly {
    let mut out: BPoly = Vec::new();
    for ((a, b), c) in p.terms() {
        let (a, b) = (*a as usize, *b as usize);
        if out.len() <= b {
            out.resize(b + 1, Vec::new());
        }
        if out[b].len() <= a {
            out[b].resize(a + 1, <Rational as Zero>::zero());
        }
        out[b][a] = c.clone();
    }
    out
}

fn from_bpoly(p: &BPoly) -> LaurentBi {
    let mut acc = LaurentBi::zero();
    for (b, coeffs) in p.iter().enumerate() {
        for (a, c) in coeffs.iter().enumerate() {
            acc = acc.add(&LaurentBi::monomial(c.clone(), a as i32, b as i32));
        }
    }
    acc
}

fn btrim(p: &mut BPoly) {
    while p.last().is_some_and(|c| c.is_empty()) {
        p.pop();
    }
}

fn bcontent(p: &BPoly) -> UPoly {
    let mut g: UPoly = Vec::new();
    for c in p {
        g = ugcd(&g, c);
        if g.len() == 1 {
            break;
        }
    }
    g
}

fn bprimitive(p: &BPoly) -> BPoly {
    let c = bcontent(p);
    p.iter().map(|x| udivrem(x, &c).0).collect()
}

fn ueval(p: &UPoly, x: &Rational) -> Rational {
    let mut acc = <Rational as Zero>::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn udeg(p: &UPoly) -> usize {
    p.len().saturating_sub(1)
}

/// Newton interpolation through `(xs[k], ys[k])`.
fn uinterpolate(xs: &[Rational], ys: &[Rational]) -> UPoly {
    let n = xs.len();
    let mut dd: Vec<Rational> = ys.to_vec();
    for j in 1..n {
        for k in (j..n).rev() {
            dd[k] = (&dd[k] - &dd[k - 1]) / (&xs[k] - &xs[k - j]);
        }
    }
    let mut out: UPoly = vec![dd[n - 1].clone()];
    for k in (0..n - 1).rev() {
        // out = out * (q - xs[k]) + dd[k]
        let mut next = vec![<Rational as Zero>::zero(); out.len() + 1];
        for (i, c) in out.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * &xs[k];
        }
        next[0] += &dd[k];
        out = next;
    }
    utrim(&mut out);
    out
}

/// Gcd of primitive polynomials by evaluating `q` at integer points,
/// taking univariate gcds in `Q` and interpolating.
fn bgcd_primitive(a: &BPoly, b: &BPoly) -> BPoly {
    let one = vec![vec![<Rational as One>::one()]];
    if a.len() <= 1 || b.len() <= 1 {
        return one;
    }
    let la = a.last().unwrap();
    let lb = b.last().unwrap();
    let gamma = ugcd(la, lb);
    let qdeg = |p: &BPoly| p.iter().map(udeg).max().unwrap_or(0);
    let bound = qdeg(a).min(qdeg(b)) + udeg(&gamma);
    let (la_poly, lb_poly) = (from_bpoly(a), from_bpoly(b));

    let mut best: Option<usize> = None;
    let mut xs: Vec<Rational> = Vec::new();
    let mut images: Vec<UPoly> = Vec::new();
    let mut x = 0i64;
    loop {
        x += 1;
        let x0 = Rational::from_integer(BigInt::from(x));
        if Zero::is_zero(&ueval(la, &x0)) || Zero::is_zero(&ueval(lb, &x0)) {
            continue;
        }
        let ea: UPoly = a.iter().map(|c| ueval(c, &x0)).collect();
        let eb: UPoly = b.iter().map(|c| ueval(c, &x0)).collect();
        let g = ugcd(&ea, &eb);
        let e = udeg(&g);
        if e == 0 {
            return one;
        }
        match best {
            Some(m) if e > m => continue,
            Some(m) if e == m => {}
            _ => {
                best = Some(e);
                xs.clear();
                images.clear();
            }
        }
        let scale = ueval(&gamma, &x0);
        images.push(g.iter().map(|c| c * &scale).collect());
        xs.push(x0);
        if xs.len() < bound + 1 {
            continue;
        }
        let mut cand: BPoly = (0..=e)
            .map(|k| {
                let ys: Vec<Rational> = images.iter().map(|im| im[k].clone()).collect();
                uinterpolate(&xs, &ys)
            })
            .collect();
        btrim(&mut cand);
        let cand = bprimitive(&cand);
        let cp = from_bpoly(&cand);
        if la_poly.div_exact_poly(&cp).is_some() && lb_poly.div_exact_poly(&cp).is_some() {
            return cand;
        }
        xs.clear();
        images.clear();
        best = None;
    }
}

fn bgcd(a: &BPoly, b: &BPoly) -> BPoly {
    let g = ugcd(&bcontent(a), &bcontent(b));
    let y = bgcd_primitive(&bprimitive(a), &bprimitive(b));
    y.iter().map(|c| umul(c, &g)).collect()
}

/// Greatest common divisor of two polynomials (nonnegative exponents), up to
/// a rational unit.
fn poly_gcd(a: &LaurentBi, b: &LaurentBi) -> LaurentBi {
    from_bpoly(&bgcd(&to_bpoly(a), &to_bpoly(b)))
}

// ---- fractions ----

/// Quotient `num / den` of Laurent polynomials, kept in lowest terms with the
/// lexicographically smallest exponent of `den` moved to `(0,0)` and given
/// coefficient 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FracBi {
    num: LaurentBi,
    den: LaurentBi,
}

impl FracBi {
    pub fn new(num: LaurentBi, den: LaurentBi) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(FracBi::normalize(num, den))
    }

    pub fn from_laurent(p: LaurentBi) -> Self {
        FracBi {
            num: p,
            den: LaurentBi::one(),
        }
    }

    pub fn num(&self) -> &LaurentBi {
        &self.num
    }

    pub fn den(&self) -> &LaurentBi {
        &self.den
    }

    /// The numerator if the denominator is 1.
    pub fn as_laurent(&self) -> Option<&LaurentBi> {
        (self.den == LaurentBi::one()).then_some(&self.num)
    }

    fn normalize(num: LaurentBi, den: LaurentBi) -> Self {
        if num.is_zero() {
            return FracBi::from_laurent(LaurentBi::zero());
        }
        let (na, nb) = num.min_exponents().unwrap();
        let (da, db) = den.min_exponents().unwrap();
        let mut pn = num.shift(-na, -nb);
        let mut pd = den.shift(-da, -db);
        if !pd.is_monomial() && !pn.is_monomial() {
            let g = poly_gcd(&pn, &pd);
            if g.num_terms() > 1 || g.terms().any(|(k, _)| *k != (0, 0)) {
                pn = pn.div_exact_poly(&g).expect("gcd divides numerator");
                pd = pd.div_exact_poly(&g).expect("gcd divides denominator");
            }
        }
        let num = pn.shift(na, nb);
        let den = pd.shift(da, db);
        let (lead, c) = den.terms().next().map(|(k, c)| (*k, c.clone())).unwrap();
        let unit = c.recip();
        FracBi {
            num: num.shift(-lead.0, -lead.1).scale(&unit),
            den: den.shift(-lead.0, -lead.1).scale(&unit),
        }
    }
}

impl Field for FracBi {
    const SYMBOLIC: bool = true;

    fn weight(&self) -> usize {
        self.num.num_terms() + self.den.num_terms()
    }

    fn zero() -> Self {
        FracBi::from_laurent(LaurentBi::zero())
    }
    fn one() -> Self {
        FracBi::from_laurent(LaurentBi::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return FracBi::normalize(self.num.add(&o.num), self.den.clone());
        }
        FracBi::normalize(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return FracBi::zero();
        }
        FracBi::normalize(self.num.mul(&o.num), self.den.mul(&o.den))
    }
    fn neg(&self) -> Self {
        FracBi {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
    fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(FracBi::normalize(self.den.clone(), self.num.clone()))
    }
    fn from_rational(r: &Rational) -> Self {
        FracBi::from_laurent(LaurentBi::constant(r.clone()))
    }
}

impl From<LaurentBi> for FracBi {
    fn from(p: LaurentBi) -> Self {
        FracBi::from_laurent(p)
    }
}

impl fmt::Display for FracBi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == LaurentBi::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl FromStr for FracBi {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix('(') {
            let (num, den) = rest
                .split_once(")/(")
                .ok_or_else(|| Error::Parse(format!("bad fraction {s:?}")))?;
            let den = den
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("bad fraction {s:?}")))?;
            FracBi::new(num.parse()?, den.parse()?)
        } else {
            Ok(FracBi::from_laurent(s.parse()?))
        }
    }
}

// ---- parameters ----

/// The two Hecke parameters and their inverses inside a concrete field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Params<F> {
    pub q: F,
    pub big_q: F,
    pub q_inv: F,
    pub big_q_inv: F,
}

impl<F: Field> Params<F> {
    pub fn new(q: F, big_q: F) -> Result<Self> {
        let q_inv = q.inv()?;
        let big_q_inv = big_q.inv()?;
        Ok(Params {
            q,
            big_q,
            q_inv,
            big_q_inv,
        })
    }

    /// `c^{-1} - c` where `c` is `Q` for the generator 0 and `q` otherwise.
    pub fn quadratic_coeff(&self, t: usize) -> F {
        if t == 0 {
            self.big_q_inv.sub(&self.big_q)
        } else {
            self.q_inv.sub(&self.q)
        }
    }

    /// `q^a Q^b` for integer exponents.
    pub fn monomial(&self, a: i64, b: i64) -> F {
        let qa = if a >= 0 { self.q.pow(a) } else { self.q_inv.pow(-a) };
        let qb = if b >= 0 {
            self.big_q.pow(b)
        } else {
            self.big_q_inv.pow(-b)
        };
        qa.unwrap().mul(&qb.unwrap())
    }

    /// Image of a Laurent polynomial under `q -> q0`, `Q -> Q0`.
    pub fn specialize(&self, x: &LaurentBi) -> F {
        let mut acc = F::zero();
        for ((a, b), c) in x.terms() {
            acc = acc.add(&F::from_rational(c).mul(&self.monomial(*a as i64, *b as i64)));
        }
        acc
    }
}

impl Params<Rational> {
    pub fn rational(q: Rational, big_q: Rational) -> Result<Self> {
        Params::new(q, big_q)
    }

    pub fn ints(q: i64, big_q: i64) -> Result<Self> {
        Params::new(rat(q, 1), rat(big_q, 1))
    }
}

impl Params<FracBi> {
    pub fn symbolic() -> Self {
        Params::new(LaurentBi::q().into(), LaurentBi::big_q().into()).expect("symbols are invertible")
    }
}

/// Which field the computations run in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScalarField {
    Symbolic,
    Rational { q: Rational, big_q: Rational },
    Gaussian { q: GaussRational, big_q: GaussRational },
}

impl ScalarField {
    pub fn name(&self) -> &'static str {
        match self {
            ScalarField::Symbolic => "symbolic",
            ScalarField::Rational { .. } => "rational",
            ScalarField::Gaussian { .. } => "gaussian",
        }
    }

    pub fn describe(&self) -> serde_json::Value {
        match self {
            ScalarField::Symbolic => serde_json::json!({"field": "symbolic"}),
            ScalarField::Rational { q, big_q } => {
                serde_json::json!({"field": "rational", "q": q.to_string(), "Q": big_q.to_string()})
            }
            ScalarField::Gaussian { q, big_q } => {
                serde_json::json!({"field": "gaussian", "q": q.to_string(), "Q": big_q.to_string()})
            }
        }
    }
}

/// `prod_{i=1-d}^{d-1} (Q^{-2} + q^{2i})`.
pub fn f_b(d: usize) -> LaurentBi {
    let d = d as i32;
    let mut acc = LaurentBi::one();
    for i in (1 - d)..d {
        let factor = LaurentBi::monomial(<Rational as One>::one(), 0, -2).add(&LaurentBi::monomial(
            <Rational as One>::one(),
            2 * i,
            0,
        ));
        acc = acc.mul(&factor);
    }
    acc
}

/// Multiplicative order of `x` if it is at most `bound`, else `None`.
pub fn root_of_unity_order<F: Field>(x: &F, bound: u32) -> Option<u32> {
    let mut acc = x.clone();
    for k in 1..=bound {
        if acc.is_one() {
            return Some(k);
        }
        acc = acc.mul(x);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lp(s: &str) -> LaurentBi {
        s.parse().unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let a = LaurentBi::q().add(&LaurentBi::big_q());
        let b = LaurentBi::q().sub(&LaurentBi::big_q());
        let expect = LaurentBi::q().pow(2).sub(&LaurentBi::big_q().pow(2));
        assert_eq!(a.mul(&b), expect);
        assert!(a.mul(&LaurentBi::zero()).is_zero());
    }

    #[test]
    fn expand_two_binomials() {
        let a = lp("1*Q^-2 + 1*q^-2");
        let b = lp("1*Q^-2 + 1*q^2");
        let expect = lp("1*Q^-4 + 1*q^2*Q^-2 + 1*q^-2*Q^-2 + 1");
        assert_eq!(a.mul(&b), expect);
    }

    #[test]
    fn inverses() {
        assert_eq!(Field::inv(&rat(2, 3)).unwrap(), rat(3, 2));
        let q = FracBi::from(LaurentBi::q());
        assert_eq!(q.inv().unwrap(), FracBi::from(LaurentBi::monomial(rat(1, 1), -1, 0)));
        let i = GaussRational::i();
        assert_eq!(i.inv().unwrap(), i.neg());
        assert_eq!(Field::inv(&<Rational as Zero>::zero()), Err(Error::ZeroInverse));
        assert_eq!(FracBi::zero().inv(), Err(Error::ZeroInverse));
        assert_eq!(GaussRational::zero().inv(), Err(Error::ZeroInverse));
    }

    #[test]
    fn f_b_values() {
        assert_eq!(f_b(0), LaurentBi::one());
        assert_eq!(f_b(1), lp("1*Q^-2 + 1"));
        let ones = Params::ints(1, 1).unwrap();
        assert_eq!(ones.specialize(&f_b(2)), rat(8, 1));
        let p = Params::ints(2, 3).unwrap();
        assert_eq!(p.specialize(&f_b(1)), rat(10, 9));
        let g = Params::new(GaussRational::one(), GaussRational::i()).unwrap();
        assert!(g.specialize(&f_b(1)).is_zero());
        let p = Params::ints(2, 5).unwrap();
        assert_eq!(p.specialize(&LaurentBi::q()), rat(2, 1));
    }

    #[test]
    fn f_b_matches_direct_product() {
        // evaluate the factors one at a time at a few points
        for d in 0..5usize {
            for &(q0, bq0) in &[(2i64, 3i64), (3, 2), (-2, 5)] {
                let p = Params::ints(q0, bq0).unwrap();
                let mut direct = rat(1, 1);
                for i in (1 - d as i64)..(d as i64) {
                    direct *= rat(1, bq0 * bq0) + p.monomial(2 * i, 0);
                }
                assert_eq!(p.specialize(&f_b(d)), direct);
            }
            if d > 0 {
                let (lo, hi) = f_b(d).q_degree_range().unwrap();
                let top = (d * (d - 1)) as i32;
                assert_eq!((lo, hi), (-top, top));
            }
        }
    }

    #[test]
    fn fraction_normal_form() {
        // (q^2 - 1)/(q - 1) = q + 1
        let a = FracBi::new(lp("1*q^2 + -1"), lp("1*q + -1")).unwrap();
        assert_eq!(a, FracBi::from(lp("1*q + 1")));
        // Q (q+Q) / (q^2 Q + q Q^2) = 1/q
        let b = FracBi::new(lp("1*q*Q + 1*Q^2"), lp("1*q^2*Q + 1*q*Q^2")).unwrap();
        assert_eq!(b, FracBi::from(LaurentBi::monomial(rat(1, 1), -1, 0)));
        let c = FracBi::new(lp("2*q + 2*Q"), lp("4*q^2 + -4*Q^2")).unwrap();
        let d = FracBi::new(lp("1"), lp("2*q + -2*Q")).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn text_round_trip() {
        for s in ["0", "1*q^0*Q^-2 + 1*q^0*Q^0", "-3/2*q^-1*Q^4"] {
            let p = lp(s);
            assert_eq!(p.to_string().parse::<LaurentBi>().unwrap(), p);
        }
        let f = FracBi::new(lp("1*q + 1"), lp("1*q^2 + 3*Q")).unwrap();
        assert_eq!(f.to_string().parse::<FracBi>().unwrap(), f);
        for s in ["i", "-i", "1/2+3*i", "2-i", "5", "-7/3*i"] {
            let g: GaussRational = s.parse().unwrap();
            assert_eq!(g.to_string().parse::<GaussRational>().unwrap(), g);
        }
        assert_eq!("i".parse::<GaussRational>().unwrap(), GaussRational::i());
        assert_eq!(
            "1/2+3*i".parse::<GaussRational>().unwrap(),
            GaussRational::new(rat(1, 2), rat(3, 1))
        );
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-20i64..20, 1i64..7).prop_map(|(n, d)| rat(n, d))
    }

    fn arb_laurent() -> impl Strategy<Value = LaurentBi> {
        prop::collection::vec((arb_rational(), -3i32..4, -3i32..4), 0..4).prop_map(|ts| {
            ts.into_iter().fold(LaurentBi::zero(), |acc, (c, a, b)| {
                acc.add(&LaurentBi::monomial(c, a, b))
            })
        })
    }

    fn arb_gauss() -> impl Strategy<Value = GaussRational> {
        (arb_rational(), arb_rational()).prop_map(|(a, b)| GaussRational::new(a, b))
    }

    fn arb_frac() -> impl Strategy<Value = FracBi> {
        (arb_laurent(), arb_laurent())
            .prop_filter("nonzero denominator", |(_, d)| !d.is_zero())
            .prop_map(|(n, d)| FracBi::new(n, d).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn laurent_ring_axioms(a in arb_laurent(), b in arb_laurent(), c in arb_laurent()) {
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn rational_inverse(a in arb_rational()) {
            prop_assume!(!Field::is_zero(&a));
            prop_assert!(Field::is_one(&Field::mul(&a, &Field::inv(&a).unwrap())));
        }

        #[test]
        fn gauss_inverse(a in arb_gauss()) {
            prop_assume!(!a.is_zero());
            prop_assert!(a.mul(&a.inv().unwrap()).is_one());
            prop_assert!(a.inv().unwrap().mul(&a).is_one());
            prop_assert_eq!(a.conj().conj(), a);
        }

        #[test]
        fn frac_inverse(a in arb_frac()) {
            prop_assume!(!a.is_zero());
            prop_assert!(a.mul(&a.inv().unwrap()).is_one());
        }

        #[test]
        fn frac_field_axioms(a in arb_frac(), b in arb_frac(), c in arb_frac()) {
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.sub(&a), FracBi::zero());
        }

        #[test]
        fn specialize_is_homomorphism(a in arb_laurent(), b in arb_laurent(), q0 in 1i64..5, bq0 in -4i64..4) {
            prop_assume!(bq0 != 0);
            let p = Params::ints(q0, bq0).unwrap();
            prop_assert_eq!(p.specialize(&a.mul(&b)), Field::mul(&p.specialize(&a), &p.specialize(&b)));
            prop_assert_eq!(p.specialize(&a.add(&b)), Field::add(&p.specialize(&a), &p.specialize(&b)));
            let g = Params::new(GaussRational::from_i64(q0), GaussRational::i()).unwrap();
            prop_assert_eq!(g.specialize(&a.mul(&b)), g.specialize(&a).mul(&g.specialize(&b)));
        }
    }
}
