//! Graded ideals of `E` and their quotient algebras `A = E/J`.
//!
//! Each degree piece `J_d` is stored as the reduced row-echelon basis of its
//! coordinate vectors in the monomial basis of `E_d`, with monomials in
//! increasing bitmask order. In that column order the leading column of a row
//! is its revlex-largest monomial, so the pivot monomials of `J_d` are exactly
//! the initial monomials and the non-pivot monomials form the standard
//! monomial basis of `A_d`.

use std::fmt;
use std::sync::OnceLock;

use crate::exterior::{monomials_of_degree, piece_dim, ExtElement, Monomial, MAX_VARS};
use crate::linalg::{rank, Echelon, MatrixExact, SparseVec};
use crate::scalar::{Rational, RationalField};
use crate::{Error, Result};

/// Reduced echelon basis of one degree piece `J_d`.
#[derive(Clone, Debug)]
pub struct Piece {
    degree: usize,
    rows: Vec<SparseVec<Rational>>,
    /// `pivot_row[c]` is the row whose leading column is `c`.
    pivot_row: Vec<Option<u32>>,
    /// `standard_index[c]` is the position of monomial `c` in the quotient basis.
    standard_index: Vec<Option<u32>>,
    standard: Vec<Monomial>,
}

impl Piece {
    fn new(n: usize, degree: usize, rows: Vec<SparseVec<Rational>>) -> Self {
        let width = piece_dim(n, degree);
        let mut pivot_row = vec![None; width];
        for (r, row) in rows.iter().enumerate() {
            pivot_row[row[0].0] = Some(r as u32);
        }
        let monos = monomials_of_degree(n, degree);
        let mut standard_index = vec![None; width];
        let mut standard = Vec::new();
        for c in 0..width {
            if pivot_row[c].is_none() {
                standard_index[c] = Some(standard.len() as u32);
                standard.push(monos[c]);
            }
        }
        Piece {
            degree,
            rows,
            pivot_row,
            standard_index,
            standard,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Basis rows in coordinates of `E_d`.
    pub fn rows(&self) -> &[SparseVec<Rational>] {
        &self.rows
    }

    /// Columns carrying a leading one, ascending.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r[0].0).collect()
    }

    /// Standard monomials, i.e. the chosen basis of `A_d`.
    pub fn standard_monomials(&self) -> &[Monomial] {
        &self.standard
    }

    /// `v - Σ v[p] row_p` over pivot columns `p`; supported on standard
    /// monomials and zero iff `v ∈ J_d`.
    pub fn normal_form(&self, v: &mut [Rational]) {
        for c in 0..v.len() {
            if v[c].is_zero() {
                continue;
            }
            if let Some(r) = self.pivot_row[c] {
                let coef = v[c].clone();
                for (k, x) in &self.rows[r as usize] {
                    v[*k] = v[*k].sub(&coef.mul(x));
                }
            }
        }
    }

    /// Coordinates of the class of `v` in the standard monomial basis.
    pub fn project(&self, v: &[Rational]) -> Vec<Rational> {
        let mut w = v.to_vec();
        self.normal_form(&mut w);
        let mut out = vec![Rational::zero(); self.standard.len()];
        for (c, x) in w.into_iter().enumerate() {
            if !x.is_zero() {
                let k = self.standard_index[c].expect("normal form left a pivot entry");
                out[k as usize] = x;
            }
        }
        out
    }
}

/// A quotient piece `A_d`: standard monomial basis and the projection from `E_d`.
#[derive(Clone, Debug)]
pub struct QuotientPiece {
    pub degree: usize,
    pub basis: Vec<Monomial>,
    /// `dim A_d × dim E_d`
    pub projection: MatrixExact,
}

/// A graded ideal generated by homogeneous elements of degree at least 2.
pub struct GradedIdeal {
    n: usize,
    generators: Vec<ExtElement>,
    pieces: Vec<OnceLock<Piece>>,
}

impl Clone for GradedIdeal {
    fn clone(&self) -> Self {
        GradedIdeal {
            n: self.n,
            generators: self.generators.clone(),
            pieces: self.pieces.clone(),
        }
    }
}

impl fmt::Debug for GradedIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedIdeal(n={}, {})", self.n, self)
    }
}

impl fmt::Display for GradedIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str(")")
    }
}

impl GradedIdeal {
    pub fn new(n: usize, generators: Vec<ExtElement>) -> Result<Self> {
        if n == 0 || n > MAX_VARS {
            return Err(Error::InvalidArgument(format!("n must lie in 1..={MAX_VARS}, got {n}")));
        }
        for g in &generators {
            if g.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: g.n(),
                });
            }
            match g.degree() {
                None if g.is_zero() => return Err(Error::InvalidArgument("zero generator".into())),
                None => return Err(Error::InvalidArgument(format!("generator {g} is not homogeneous"))),
                Some(d) if d < 2 => {
                    return Err(Error::InvalidArgument(format!(
                        "generator {g} has degree {d}; generators must have degree >= 2"
                    )))
                }
                Some(_) => {}
            }
        }
        Ok(GradedIdeal {
            n,
            generators,
            pieces: (0..=n).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::new(n, Vec::new())
    }

    /// Monomial ideal from index strings such as `"12"` or `"1,10"`.
    pub fn from_monomials(n: usize, monomials: &[&str]) -> Result<Self> {
        let gens = monomials
            .iter()
            .map(|s| {
                let m: Monomial = s.parse()?;
                if !m.fits(n) {
                    return Err(Error::InvalidArgument(format!("{m} uses a variable beyond n = {n}")));
                }
                Ok(ExtElement::monomial(n, m, Rational::one()))
            })
            .collect::<Result<_>>()?;
        Self::new(n, gens)
    }

    pub fn from_monomial_list(n: usize, monomials: &[Monomial]) -> Result<Self> {
        let gens = monomials
            .iter()
            .map(|&m| {
                if !m.fits(n) {
                    return Err(Error::InvalidArgument(format!("{m} uses a variable beyond n = {n}")));
                }
                Ok(ExtElement::monomial(n, m, Rational::one()))
            })
            .collect::<Result<_>>()?;
        Self::new(n, gens)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[ExtElement] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// Smallest generator degree, `None` for the zero ideal.
    pub fn initial_degree(&self) -> Option<usize> {
        self.generators.iter().filter_map(|g| g.degree()).min()
    }

    pub fn piece(&self, d: usize) -> &Piece {
        assert!(d <= self.n, "degree {d} exceeds n = {}", self.n);
        self.pieces[d].get_or_init(|| self.compute_piece(d))
    }

    fn compute_piece(&self, d: usize) -> Piece {
        let width = piece_dim(self.n, d);
        let mut ech = Echelon::new(RationalField, width);
        if d >= 1 {
            let below = self.piece(d - 1);
            if below.dim() > 0 {
                let lower = monomials_of_degree(self.n, d - 1);
                for row in below.rows() {
                    for k in 1..=self.n {
                        let v = wedge_var_sparse(k, row, &lower);
                        if !v.is_empty() {
                            ech.insert(&v);
                        }
                    }
                    if ech.rank() == width {
                        break;
                    }
                }
            }
        }
        for g in &self.generators {
            if g.degree() == Some(d) && ech.rank() < width {
                ech.insert(&to_sparse(g, d));
            }
        }
        Piece::new(self.n, d, ech.into_rref())
    }

    /// `dim J_d`; zero above `n`.
    pub fn dim(&self, d: usize) -> usize {
        if d > self.n {
            0
        } else {
            self.piece(d).dim()
        }
    }

    /// `dim A_d = C(n, d) - dim J_d`.
    pub fn quotient_dim(&self, d: usize) -> usize {
        piece_dim(self.n, d) - self.dim(d)
    }

    /// Largest `d` with `A_d ≠ 0`.
    pub fn top_quotient_degree(&self) -> usize {
        (0..=self.n).rev().find(|&d| self.quotient_dim(d) > 0).unwrap_or(0)
    }

    /// Basis of `J_d` as rows in monomial coordinates of `E_d`.
    pub fn degree_piece(&self, d: usize) -> MatrixExact {
        let p = self.piece(d);
        let width = piece_dim(self.n, d);
        MatrixExact::stack(width, p.rows().iter().map(|r| densify(r, width)).collect())
    }

    /// Basis of `J_d` as elements.
    pub fn basis(&self, d: usize) -> Vec<ExtElement> {
        let monos = monomials_of_degree(self.n, d);
        self.piece(d)
            .rows()
            .iter()
            .map(|r| {
                ExtElement::from_terms(self.n, r.iter().map(|(c, x)| (monos[*c], x.clone())))
                    .expect("basis monomials fit n")
            })
            .collect()
    }

    /// Membership of a homogeneous element.
    pub fn contains(&self, f: &ExtElement) -> Result<bool> {
        if f.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: f.n(),
            });
        }
        if f.is_zero() {
            return Ok(true);
        }
        let d = f
            .degree()
            .ok_or_else(|| Error::InvalidArgument(format!("{f} is not homogeneous")))?;
        let mut v = f.to_dense(d);
        self.piece(d).normal_form(&mut v);
        Ok(v.iter().all(|x| x.is_zero()))
    }

    /// `J_⟨d⟩`, generated by a basis of `J_d`.
    pub fn subideal_generated_by_degree(&self, d: usize) -> GradedIdeal {
        let gens = if d <= self.n { self.basis(d) } else { Vec::new() };
        GradedIdeal::new(self.n, gens).expect("basis elements are valid generators")
    }

    /// `J_≤d`, generated by the generators of degree at most `d`.
    pub fn truncation_leq(&self, d: usize) -> GradedIdeal {
        let gens = self
            .generators
            .iter()
            .filter(|g| g.degree().is_some_and(|k| k <= d))
            .cloned()
            .collect();
        GradedIdeal::new(self.n, gens).expect("subset of valid generators")
    }

    /// Degreewise equality of the ideals.
    pub fn same_ideal(&self, other: &GradedIdeal) -> bool {
        self.n == other.n && (0..=self.n).all(|d| self.piece(d).rows() == other.piece(d).rows())
    }

    /// Whether `J_d ⊆ other_d` for every `d`.
    pub fn is_contained_in(&self, other: &GradedIdeal) -> bool {
        self.n == other.n
            && (0..=self.n).all(|d| {
                let p = other.piece(d);
                let width = piece_dim(self.n, d);
                self.piece(d).rows().iter().all(|r| {
                    let mut v = densify(r, width);
                    p.normal_form(&mut v);
                    v.iter().all(|x| x.is_zero())
                })
            })
    }

    /// Whether every generator is a single term.
    pub fn is_monomial(&self) -> bool {
        self.generators.iter().all(|g| g.as_monomial().is_some())
    }

    /// `G(J)`: generator monomials not divisible by another one, by degree
    /// and then in revlex order (largest first).
    pub fn minimal_monomial_generators(&self) -> Result<Vec<Monomial>> {
        let mut monos = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            let (m, _) = g.as_monomial().ok_or(Error::NotMonomial)?;
            monos.push(m);
        }
        monos.sort_by_key(|m| (m.degree(), m.0));
        monos.dedup();
        let minimal: Vec<Monomial> = monos
            .iter()
            .copied()
            .filter(|&u| !monos.iter().any(|&v| v != u && v.divides(u)))
            .collect();
        Ok(minimal)
    }

    /// Membership of a monomial in a monomial ideal, by divisibility.
    pub fn contains_monomial(&self, u: Monomial) -> Result<bool> {
        let gens = self.minimal_monomial_generators()?;
        Ok(gens.iter().any(|g| g.divides(u)))
    }

    /// `e_j (u / e_{max u}) ∈ J` for all `u ∈ G(J)` and `j < max(u)`.
    pub fn is_stable(&self) -> Result<bool> {
        let gens = self.minimal_monomial_generators()?;
        let member = |w: Monomial| gens.iter().any(|g| g.divides(w));
        Ok(gens.iter().all(|&u| {
            let m = u.max_index();
            (1..m).all(|j| u.contains(j) || member(u.without(m).with(j)))
        }))
    }

    /// `e_j (u / e_i) ∈ J` for all `u ∈ G(J)`, `i ∈ supp u` and `j < i`.
    pub fn is_strongly_stable(&self) -> Result<bool> {
        let gens = self.minimal_monomial_generators()?;
        let member = |w: Monomial| gens.iter().any(|g| g.divides(w));
        Ok(gens.iter().all(|&u| {
            u.indices()
                .into_iter()
                .all(|i| (1..i).all(|j| u.contains(j) || member(u.without(i).with(j))))
        }))
    }

    pub fn quotient_piece(&self, d: usize) -> QuotientPiece {
        let p = self.piece(d);
        let width = piece_dim(self.n, d);
        let mut projection = MatrixExact::zeros(p.standard_monomials().len(), width);
        for c in 0..width {
            let mut e = vec![Rational::zero(); width];
            e[c] = Rational::one();
            for (r, x) in p.project(&e).into_iter().enumerate() {
                if !x.is_zero() {
                    projection.set(r, c, x);
                }
            }
        }
        QuotientPiece {
            degree: d,
            basis: p.standard_monomials().to_vec(),
            projection,
        }
    }

    /// Left multiplication by a 1-form `u` as a `dim A_{p+1} × dim A_p`
    /// matrix in the standard monomial bases. Zero-sized when `p >= n`.
    pub fn mult_map(&self, u: &ExtElement, p: usize) -> Result<MatrixExact> {
        if u.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: u.n(),
            });
        }
        if !u.is_homogeneous(1) {
            return Err(Error::InvalidArgument(format!("{u} is not a 1-form")));
        }
        if p >= self.n {
            return Ok(MatrixExact::zeros(0, self.quotient_dim(p.min(self.n))));
        }
        let src = self.piece(p);
        let dst = self.piece(p + 1);
        let width = piece_dim(self.n, p + 1);
        let cols = src.standard_monomials().len();
        let rows = dst.standard_monomials().len();
        let mut out = MatrixExact::zeros(rows, cols);
        for (c, &m) in src.standard_monomials().iter().enumerate() {
            let mut v = vec![Rational::zero(); width];
            let mut any = false;
            for (k, coef) in u.terms() {
                if let Some((neg, w)) = k.wedge(m) {
                    let x = &mut v[w.colex_rank()];
                    *x = if neg { x.sub(coef) } else { x.add(coef) };
                    any = true;
                }
            }
            if !any {
                continue;
            }
            for (r, x) in dst.project(&v).into_iter().enumerate() {
                if !x.is_zero() {
                    out.set(r, c, x);
                }
            }
        }
        Ok(out)
    }

    /// `(f_1, ..., f_t)^d` for linearly independent 1-forms, `d >= 2`.
    pub fn power_of_linear_ideal(forms: &[ExtElement], d: usize) -> Result<GradedIdeal> {
        let n = forms
            .first()
            .map(|f| f.n())
            .ok_or_else(|| Error::InvalidArgument("no linear forms given".into()))?;
        if d < 2 {
            return Err(Error::InvalidArgument(format!(
                "exponent {d} would produce generators of degree < 2"
            )));
        }
        for f in forms {
            if f.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: f.n(),
                });
            }
            if !f.is_homogeneous(1) {
                return Err(Error::InvalidArgument(format!("{f} is not a 1-form")));
            }
        }
        let coeffs = MatrixExact::stack(n, forms.iter().map(|f| f.to_dense(1)).collect());
        if rank(&RationalField, &coeffs) < forms.len() {
            return Err(Error::Dependent);
        }
        let t = forms.len();
        let mut gens = Vec::new();
        for subset in monomials_of_degree(t, d) {
            let mut w = ExtElement::one(n);
            for k in subset.indices() {
                w = w.wedge(&forms[k - 1])?;
            }
            if !w.is_zero() {
                gens.push(w);
            }
        }
        GradedIdeal::new(n, gens)
    }
}

/// Sparse coordinates of the degree-`d` part of `g`.
pub(crate) fn to_sparse(g: &ExtElement, d: usize) -> SparseVec<Rational> {
    let mut v: SparseVec<Rational> = g
        .terms()
        .filter(|(m, _)| m.degree() == d)
        .map(|(m, c)| (m.colex_rank(), c.clone()))
        .collect();
    v.sort_by_key(|(i, _)| *i);
    v
}

pub(crate) fn densify(v: &[(usize, Rational)], width: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); width];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// `e_k ∧ v` for `v` given in coordinates over `lower` (the degree-`d`
/// monomials), returned in degree-`d+1` coordinates.
fn wedge_var_sparse(k: usize, v: &[(usize, Rational)], lower: &[Monomial]) -> SparseVec<Rational> {
    let ek = Monomial::var(k);
    let mut out: SparseVec<Rational> = v
        .iter()
        .filter_map(|(c, x)| {
            ek.wedge(lower[*c])
                .map(|(neg, m)| (m.colex_rank(), if neg { x.neg() } else { x.clone() }))
        })
        .collect();
    out.sort_by_key(|(i, _)| *i);
    out
}
