//! The exterior algebra `E = K<e_1, ..., e_n>`.
//!
//! Monomials are index subsets stored as bitmasks (bit `k - 1` for `e_k`).
//! Every sign in the crate comes from [`Monomial::wedge`]: moving `e_G` past
//! `e_F` costs one transposition per pair `(f, g)` with `f > g`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use crate::linalg::MatrixExact;
use crate::scalar::Rational;
use crate::{Error, Result};

/// Largest supported number of variables.
pub const MAX_VARS: usize = 16;

/// Squarefree monomial `e_F`, with `F` stored as a bitmask.
///
/// The derived order compares bitmasks numerically. Among monomials of one
/// degree this is colexicographic order, which is the *reverse* of degree
/// reverse-lexicographic order with `e_1 > e_2 > ... > e_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(pub u32);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    /// `e_k` for a 1-based index `k`.
    pub fn var(k: usize) -> Monomial {
        debug_assert!((1..=MAX_VARS).contains(&k));
        Monomial(1 << (k - 1))
    }

    /// Builds `e_F` from 1-based indices, rejecting repeats and zero.
    pub fn from_indices(indices: &[usize]) -> Result<Monomial> {
        let mut bits = 0u32;
        for &k in indices {
            if !(1..=MAX_VARS).contains(&k) {
                return Err(Error::InvalidArgument(format!("variable index {k} out of range")));
            }
            if bits >> (k - 1) & 1 == 1 {
                return Err(Error::InvalidArgument(format!("repeated index {k}")));
            }
            bits |= 1 << (k - 1);
        }
        Ok(Monomial(bits))
    }

    /// The 1-based indices in increasing order.
    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|b| self.0 >> b & 1 == 1).map(|b| b + 1).collect()
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    /// `max(u)`, the largest index; 0 for the unit monomial.
    pub fn max_index(self) -> usize {
        32 - self.0.leading_zeros() as usize
    }

    pub fn contains(self, k: usize) -> bool {
        self.0 >> (k - 1) & 1 == 1
    }

    /// Whether `self` divides `other`, i.e. `F ⊆ G`.
    pub fn divides(self, other: Monomial) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn fits(self, n: usize) -> bool {
        n >= 32 || self.0 >> n == 0
    }

    /// `e_F ∧ e_G`: `None` when `F ∩ G ≠ ∅`, else the sign (`true` for minus)
    /// and `e_{F ∪ G}`.
    pub fn wedge(self, other: Monomial) -> Option<(bool, Monomial)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut inversions = 0u32;
        let mut g = other.0;
        while g != 0 {
            let pos = g.trailing_zeros();
            inversions += (self.0 as u64 >> (pos + 1)).count_ones();
            g &= g - 1;
        }
        Some((inversions % 2 == 1, Monomial(self.0 | other.0)))
    }

    /// `u / e_k` for `k` in the support.
    pub fn without(self, k: usize) -> Monomial {
        Monomial(self.0 & !(1 << (k - 1)))
    }

    pub fn with(self, k: usize) -> Monomial {
        Monomial(self.0 | 1 << (k - 1))
    }

    /// Degree reverse-lexicographic comparison with `e_1 > e_2 > ... > e_n`:
    /// higher degree first, then `e_F > e_G` iff `max(F △ G) ∈ G`.
    pub fn revlex_cmp(self, other: Monomial) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }

    /// Position among the degree-`|F|` monomials in increasing bitmask order.
    pub fn colex_rank(self) -> usize {
        let mut rank = 0usize;
        let mut bits = self.0;
        let mut k = 1u64;
        while bits != 0 {
            let pos = bits.trailing_zeros() as u64;
            rank += small_binomial(pos, k);
            bits &= bits - 1;
            k += 1;
        }
        rank
    }

    /// Renders `e_{...}`; indices are concatenated when all are below 10 and
    /// comma-separated otherwise.
    pub fn render(self) -> String {
        let idx = self.indices();
        let body = if idx.iter().all(|&k| k < 10) {
            idx.iter().map(|k| k.to_string()).collect::<String>()
        } else {
            idx.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")
        };
        format!("e_{{{body}}}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

const BINOM_N: usize = 33;

static BINOM: [[u64; BINOM_N]; BINOM_N] = {
    let mut t = [[0u64; BINOM_N]; BINOM_N];
    let mut n = 0;
    while n < BINOM_N {
        t[n][0] = 1;
        let mut k = 1;
        while k <= n {
            t[n][k] = t[n - 1][k - 1] + if k < n { t[n - 1][k] } else { 0 };
            k += 1;
        }
        n += 1;
    }
    t
};

fn small_binomial(n: u64, k: u64) -> usize {
    if k > n {
        0
    } else {
        BINOM[n as usize][k as usize] as usize
    }
}

/// `dim E_d = C(n, d)`.
pub fn piece_dim(n: usize, d: usize) -> usize {
    small_binomial(n as u64, d as u64)
}

/// All degree-`d` monomials in `n` variables, increasing bitmask order (the
/// order matched by [`Monomial::colex_rank`]).
pub fn monomials_of_degree(n: usize, d: usize) -> Vec<Monomial> {
    if d > n {
        return Vec::new();
    }
    if d == 0 {
        return vec![Monomial::ONE];
    }
    let mut out = Vec::with_capacity(piece_dim(n, d));
    let limit = 1u64 << n;
    let mut v: u64 = (1 << d) - 1;
    while v < limit {
        out.push(Monomial(v as u32));
        // Gosper's hack: next integer with the same popcount
        let c = v & v.wrapping_neg();
        let r = v + c;
        v = (((r ^ v) >> 2) / c) | r;
    }
    out
}

/// An element of `E` as a sparse map from monomials to nonzero rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtElement {
    n: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl ExtElement {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_VARS, "at most {MAX_VARS} variables supported");
        ExtElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(n, Monomial::ONE, Rational::one())
    }

    pub fn monomial(n: usize, m: Monomial, coef: Rational) -> Self {
        let mut e = Self::zero(n);
        assert!(m.fits(n), "monomial {m} outside {n} variables");
        if !coef.is_zero() {
            e.terms.insert(m, coef);
        }
        e
    }

    /// `e_k`, 1-based.
    pub fn var(n: usize, k: usize) -> Self {
        Self::monomial(n, Monomial::var(k), Rational::one())
    }

    /// The 1-form `Σ coeffs[k-1] e_k`.
    pub fn linear_form(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut e = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                e.terms.insert(Monomial::var(i + 1), c.clone());
            }
        }
        e
    }

    pub fn linear_form_i64(coeffs: &[i64]) -> Self {
        Self::linear_form(&coeffs.iter().map(|&c| Rational::from_integer(c)).collect::<Vec<_>>())
    }

    /// Builds from `(monomial, coefficient)` pairs, summing repeats.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Result<Self> {
        let mut e = Self::zero(n);
        for (m, c) in terms {
            if !m.fits(n) {
                return Err(Error::InvalidArgument(format!("{m} uses a variable beyond n = {n}")));
            }
            e.add_term(m, &c);
        }
        Ok(e)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &Rational)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: Monomial) -> Rational {
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    /// The single term of a monomial element.
    pub fn as_monomial(&self) -> Option<(Monomial, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (*m, c))
        } else {
            None
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Rational::zero);
        *entry = entry.add(c);
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// Common degree of all terms, `None` for zero or mixed degrees.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|m| m.degree());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Whether every term has degree `d`; zero is homogeneous of every degree.
    pub fn is_homogeneous(&self, d: usize) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    pub fn homogeneous_part(&self, d: usize) -> Self {
        ExtElement {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        ExtElement {
            n: self.n,
            terms: self.terms.iter().map(|(m, x)| (*m, x.mul(c))).collect(),
        }
    }

    fn check_n(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_n(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c);
        }
        Ok(out)
    }

    /// `self ∧ other`, bilinear extension of [`Monomial::wedge`].
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_n(other)?;
        let mut out = Self::zero(self.n);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if let Some((neg, m)) = a.wedge(*b) {
                    let c = x.mul(y);
                    out.add_term(m, &if neg { c.neg() } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Coordinates in the monomial basis of `E_d` (increasing bitmask order).
    pub fn to_dense(&self, d: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); piece_dim(self.n, d)];
        for (m, c) in &self.terms {
            if m.degree() == d {
                v[m.colex_rank()] = c.clone();
            }
        }
        v
    }

    pub fn from_dense(n: usize, d: usize, v: &[Rational]) -> Self {
        let monos = monomials_of_degree(n, d);
        let mut e = Self::zero(n);
        for (m, c) in monos.iter().zip(v) {
            if !c.is_zero() {
                e.terms.insert(*m, c.clone());
            }
        }
        e
    }

    /// Parses the grammar produced by `Display`, e.g. `e_{23} - e_{13} + e_{12}`
    /// or `3/2*e_{1,10} - 2 e_{4}`.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        parse_element(n, s)
    }
}

impl fmt::Display for ExtElement {
    /// Lower degrees first; within a degree, descending bitmask order, so
    /// `∂e_{123}` renders as `e_{23} - e_{13} + e_{12}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| a.degree().cmp(&b.degree()).then(b.0.cmp(&a.0)));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if *m == Monomial::ONE {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtElement(n={}, {})", self.n, self)
    }
}

impl Add for &ExtElement {
    type Output = ExtElement;

    /// # Panics
    ///
    /// Panics when the ambient variable counts differ.
    fn add(self, rhs: &ExtElement) -> ExtElement {
        self.checked_add(rhs).expect("ambient dimensions differ")
    }
}

impl Sub for &ExtElement {
    type Output = ExtElement;

    fn sub(self, rhs: &ExtElement) -> ExtElement {
        self.checked_add(&-rhs).expect("ambient dimensions differ")
    }
}

impl Neg for &ExtElement {
    type Output = ExtElement;

    fn neg(self) -> ExtElement {
        self.scale(&Rational::from_integer(-1))
    }
}

fn parse_element(n: usize, s: &str) -> Result<ExtElement> {
    let err = |msg: &str| Error::Parse(format!("{msg} in element {s:?}"));
    let src: String = s.chars().map(|c| if c == '−' { '-' } else { c }).collect();
    let mut out = ExtElement::zero(n);
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    let skip_ws = |i: &mut usize| {
        while *i < chars.len() && chars[*i].is_whitespace() {
            *i += 1;
        }
    };
    skip_ws(&mut i);
    if i == chars.len() {
        return Err(err("empty input"));
    }
    let mut first = true;
    while i < chars.len() {
        let mut negative = false;
        skip_ws(&mut i);
        if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
            negative = chars[i] == '-';
            i += 1;
        } else if !first {
            return Err(err("expected '+' or '-'"));
        }
        first = false;
        skip_ws(&mut i);
        let start = i;
        while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
            i += 1;
        }
        let coef_text: String = chars[start..i].iter().collect();
        let mut coef = if coef_text.is_empty() {
            None
        } else {
            Some(coef_text.parse::<Rational>()?)
        };
        skip_ws(&mut i);
        if i < chars.len() && (chars[i] == '*' || chars[i] == '·') {
            i += 1;
            skip_ws(&mut i);
        }
        let mono = if i < chars.len() && chars[i] == 'e' {
            i += 1;
            if i >= chars.len() || chars[i] != '_' {
                return Err(err("expected '_' after 'e'"));
            }
            i += 1;
            let body: String = if i < chars.len() && chars[i] == '{' {
                let close = chars[i..]
                    .iter()
                    .position(|&c| c == '}')
                    .ok_or_else(|| err("unclosed '{'"))?;
                let b = chars[i + 1..i + close].iter().collect();
                i += close + 1;
                b
            } else {
                let st = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                chars[st..i].iter().collect()
            };
            let indices: Vec<usize> = if body.contains(',') {
                body.split(',')
                    .map(|t| t.trim().parse::<usize>().map_err(|_| err("bad index")))
                    .collect::<Result<_>>()?
            } else {
                body.chars()
                    .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| err("bad index")))
                    .collect::<Result<_>>()?
            };
            let m = Monomial::from_indices(&indices)?;
            if !m.fits(n) {
                return Err(err("index exceeds ambient n"));
            }
            m
        } else {
            if coef.is_none() {
                return Err(err("expected a coefficient or monomial"));
            }
            Monomial::ONE
        };
        let mut c = coef.take().unwrap_or_else(Rational::one);
        if negative {
            c = c.neg();
        }
        out.add_term(mono, &c);
        skip_ws(&mut i);
    }
    Ok(out)
}

impl FromStr for Monomial {
    type Err = Error;

    /// Accepts `"1,2"`, `"12"` (single-digit indices) or `"e_{12}"`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t.strip_prefix("e_").unwrap_or(t);
        let t = t.trim_start_matches('{').trim_end_matches('}').trim();
        if t.is_empty() {
            return Ok(Monomial::ONE);
        }
        let idx: Vec<usize> = if t.contains(',') {
            t.split(',')
                .map(|x| x.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Parse(format!("bad monomial {s:?}")))?
        } else {
            t.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::Parse(format!("bad monomial {s:?}")))?
        };
        Monomial::from_indices(&idx)
    }
}

/// `∂e_F = Σ_j (-1)^{j-1} e_{F \ {i_j}}` for `F = {i_1 < ... < i_t}`, `t >= 2`.
pub fn boundary(n: usize, f: Monomial) -> Result<ExtElement> {
    check_boundary_input(n, f)?;
    let mut out = ExtElement::zero(n);
    for (j, k) in f.indices().into_iter().enumerate() {
        let c = if j % 2 == 0 { Rational::one() } else { Rational::from_integer(-1) };
        out.add_term(f.without(k), &c);
    }
    Ok(out)
}

fn check_boundary_input(n: usize, f: Monomial) -> Result<()> {
    if f.degree() < 2 {
        return Err(Error::InvalidArgument(format!(
            "boundary needs |F| >= 2, got {}",
            f.degree()
        )));
    }
    if !f.fits(n) {
        return Err(Error::InvalidArgument(format!("{f} uses a variable beyond n = {n}")));
    }
    Ok(())
}

/// `(e_{i_2} - e_{i_1}) ∧ ... ∧ (e_{i_t} - e_{i_1})`.
pub fn product_form(n: usize, f: Monomial) -> Result<ExtElement> {
    check_boundary_input(n, f)?;
    let idx = f.indices();
    let first = ExtElement::var(n, idx[0]);
    let mut out = ExtElement::one(n);
    for &k in &idx[1..] {
        out = out.wedge(&(&ExtElement::var(n, k) - &first))?;
    }
    Ok(out)
}

/// `supp(u) = {k : coefficient of e_k ≠ 0}` for a 1-form `u`.
pub fn support(u: &ExtElement) -> Result<Vec<usize>> {
    if !u.is_homogeneous(1) {
        return Err(Error::InvalidArgument(format!("support needs a 1-form, got {u}")));
    }
    Ok(u.terms().map(|(m, _)| m.max_index()).collect())
}

/// An invertible change of coordinates `e_i ↦ Σ_j g[j][i] e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearChange {
    g: MatrixExact,
}

impl LinearChange {
    pub fn new(g: MatrixExact) -> Result<Self> {
        if g.rows() != g.cols() {
            return Err(Error::DimensionMismatch {
                expected: g.rows(),
                found: g.cols(),
            });
        }
        if g.rank() != g.rows() {
            return Err(Error::InvalidArgument("linear change must be invertible".into()));
        }
        Ok(LinearChange { g })
    }

    pub fn identity(n: usize) -> Self {
        LinearChange {
            g: MatrixExact::identity(n),
        }
    }

    pub fn n(&self) -> usize {
        self.g.rows()
    }

    pub fn matrix(&self) -> &MatrixExact {
        &self.g
    }

    /// `self ∘ other`, i.e. the matrix product `g · h`.
    pub fn compose(&self, other: &LinearChange) -> Result<LinearChange> {
        Ok(LinearChange {
            g: self.g.mul(&other.g)?,
        })
    }

    /// Image of `e_k`: the `k`-th column of `g` as a 1-form.
    pub fn image_of_var(&self, k: usize) -> ExtElement {
        let n = self.n();
        ExtElement::linear_form(&(0..n).map(|j| self.g.get(j, k - 1).clone()).collect::<Vec<_>>())
    }

    /// Applies the induced algebra automorphism.
    pub fn apply(&self, x: &ExtElement) -> Result<ExtElement> {
        let mut cache = HashMap::new();
        self.apply_cached(x, &mut cache)
    }

    /// Like [`LinearChange::apply`], memoizing monomial images across calls.
    pub fn apply_cached(
        &self,
        x: &ExtElement,
        cache: &mut HashMap<Monomial, ExtElement>,
    ) -> Result<ExtElement> {
        if x.n() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: x.n(),
            });
        }
        let mut out = ExtElement::zero(x.n());
        for (m, c) in x.terms() {
            let img = self.monomial_image(m, cache)?;
            for (mm, cc) in img.terms() {
                out.add_term(mm, &cc.mul(c));
            }
        }
        Ok(out)
    }

    fn monomial_image(&self, m: Monomial, cache: &mut HashMap<Monomial, ExtElement>) -> Result<ExtElement> {
        if let Some(e) = cache.get(&m) {
            return Ok(e.clone());
        }
        let img = if m == Monomial::ONE {
            ExtElement::one(self.n())
        } else {
            let top = m.max_index();
            let rest = self.monomial_image(m.without(top), cache)?;
            rest.wedge(&self.image_of_var(top))?
        };
        cache.insert(m, img.clone());
        Ok(img)
    }
}
