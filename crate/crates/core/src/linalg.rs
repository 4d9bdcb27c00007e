//! Exact dense and sparse linear algebra over a [`Field`].
//!
//! Dense matrices ([`Matrix`]) serve the small, per-degree computations on
//! ideals. The resolution engine works with [`Echelon`], an incrementally
//! built sparse echelon basis that answers rank, membership and kernel
//! queries without materializing large dense matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::{Field, Rational, RationalField};
use crate::{Error, Result};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    entries: Vec<E>,
}

/// Dense matrix over the rationals.
pub type MatrixExact = Matrix<Rational>;

impl<E: Clone> Matrix<E> {
    pub fn from_rows(rows: usize, cols: usize, entries: Vec<E>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(Matrix { rows, cols, entries })
    }

    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![value; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &E {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: E) {
        self.entries[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[E] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> impl Iterator<Item = &[E]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// Stacks the given rows (all of length `cols`) into a matrix.
    pub fn stack(cols: usize, rows: Vec<Vec<E>>) -> Self {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length mismatch");
            entries.extend(r);
        }
        Matrix {
            rows: n,
            cols,
            entries,
        }
    }
}

impl Matrix<Rational> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, Rational::zero())
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::stack(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_integer(v)).collect())
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        mat_mul(&RationalField, self, other)
    }

    pub fn rank(&self) -> usize {
        rref(&RationalField, self).rank
    }
}

/// Matrix product over `field`.
pub fn mat_mul<F: Field>(field: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Result<Matrix<F::Elem>> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch {
            expected: a.cols,
            found: b.rows,
        });
    }
    let mut out = Matrix::filled(a.rows, b.cols, field.zero());
    for i in 0..a.rows {
        for k in 0..a.cols {
            let x = a.get(i, k);
            if field.is_zero(x) {
                continue;
            }
            for j in 0..b.cols {
                let y = b.get(k, j);
                if !field.is_zero(y) {
                    let cur = field.add(out.get(i, j), &field.mul(x, y));
                    out.set(i, j, cur);
                }
            }
        }
    }
    Ok(out)
}

/// Result of [`rref`].
#[derive(Clone, Debug)]
pub struct Rref<E> {
    pub reduced: Matrix<E>,
    pub pivot_columns: Vec<usize>,
    pub rank: usize,
}

/// Reduced row-echelon form by Gauss-Jordan elimination.
///
/// Zero rows are kept at the bottom so `reduced` has the shape of the input.
pub fn rref<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Rref<F::Elem> {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !field.is_zero(a.get(i, c))) else {
            continue;
        };
        if p != r {
            for j in 0..a.cols {
                a.entries.swap(p * a.cols + j, r * a.cols + j);
            }
        }
        let inv = field.inv(a.get(r, c));
        for j in c..a.cols {
            let v = field.mul(a.get(r, j), &inv);
            a.set(r, j, v);
        }
        for i in 0..a.rows {
            if i == r || field.is_zero(a.get(i, c)) {
                continue;
            }
            let factor = a.get(i, c).clone();
            for j in c..a.cols {
                if field.is_zero(a.get(r, j)) {
                    continue;
                }
                let mut v = a.get(i, j).clone();
                field.sub_mul_assign(&mut v, &factor, a.get(r, j));
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref {
        reduced: a,
        rank: pivots.len(),
        pivot_columns: pivots,
    }
}

/// Basis of the right kernel `{v : M v = 0}`, one vector per free column.
pub fn kernel_basis<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let rr = rref(field, m);
    let mut is_pivot = vec![false; m.cols];
    for &c in &rr.pivot_columns {
        is_pivot[c] = true;
    }
    (0..m.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![field.zero(); m.cols];
            v[free] = field.one();
            for (r, &pc) in rr.pivot_columns.iter().enumerate() {
                v[pc] = field.neg(rr.reduced.get(r, free));
            }
            v
        })
        .collect()
}

/// Rank over `field`.
pub fn rank<F: Field>(field: &F, m: &Matrix<F::Elem>) -> usize {
    rref(field, m).rank
}

/// Seeded random integer matrix with entries in `[-bound, bound]` and nonzero
/// determinant; singular draws are discarded and resampled.
pub fn random_invertible(n: usize, bound: u64, seed: u64) -> Result<MatrixExact> {
    if n == 0 || bound == 0 {
        return Err(Error::InvalidArgument(
            "random_invertible needs n >= 1 and bound >= 1".into(),
        ));
    }
    let bound = i64::try_from(bound)
        .map_err(|_| Error::InvalidArgument("entry bound too large".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let entries = (0..n * n)
            .map(|_| Rational::from_integer(rng.gen_range(-bound..=bound)))
            .collect();
        let m = Matrix::from_rows(n, n, entries)?;
        if m.rank() == n {
            return Ok(m);
        }
    }
}

/// Sparse vector: strictly increasing indices, no stored zeros.
pub type SparseVec<E> = Vec<(usize, E)>;

struct EchelonRow<E> {
    entries: SparseVec<E>,
    /// Combination of inserted vectors producing this row, when tracked.
    combo: Option<SparseVec<E>>,
}

/// Incremental sparse echelon basis of a subspace of `F^dim`.
///
/// Every stored row has a distinct leading index with coefficient one.
/// Vectors are reduced against the stored rows by a left-to-right sweep over
/// a dense accumulator.
pub struct Echelon<F: Field> {
    field: F,
    dim: usize,
    pivot_of: Vec<Option<u32>>,
    rows: Vec<EchelonRow<F::Elem>>,
    acc: Vec<F::Elem>,
    track: bool,
    combo_acc: Vec<F::Elem>,
    inserted: usize,
}

/// Outcome of [`Echelon::insert_tracked`].
pub enum Insertion<E> {
    /// The vector was independent and is now a basis row.
    Independent,
    /// The vector was dependent; the combination of previously inserted
    /// vectors (indexed by insertion order, including this one) that vanishes.
    Dependent(SparseVec<E>),
}

impl<F: Field> Echelon<F> {
    pub fn new(field: F, dim: usize) -> Self {
        let zero = field.zero();
        Echelon {
            dim,
            pivot_of: vec![None; dim],
            rows: Vec::new(),
            acc: vec![zero; dim],
            track: false,
            combo_acc: Vec::new(),
            inserted: 0,
            field,
        }
    }

    /// Like [`Echelon::new`], but every row remembers which inserted vectors
    /// it came from, so dependencies can be reported. `capacity` bounds the
    /// number of vectors that will be inserted.
    pub fn with_tracking(field: F, dim: usize, capacity: usize) -> Self {
        let mut e = Self::new(field, dim);
        e.track = true;
        e.combo_acc = vec![e.field.zero(); capacity];
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    fn load(&mut self, v: &[(usize, F::Elem)]) {
        for (i, x) in v {
            debug_assert!(*i < self.dim);
            self.acc[*i] = x.clone();
        }
    }

    /// Sweeps the accumulator, returning the reduced sparse vector and
    /// clearing the accumulator.
    fn sweep(&mut self, start: usize) -> SparseVec<F::Elem> {
        let field = &self.field;
        let mut out = Vec::new();
        for c in start..self.dim {
            if field.is_zero(&self.acc[c]) {
                continue;
            }
            match self.pivot_of[c] {
                Some(r) => {
                    let coef = std::mem::replace(&mut self.acc[c], field.zero());
                    let row = &self.rows[r as usize];
                    for (k, x) in &row.entries[1..] {
                        field.sub_mul_assign(&mut self.acc[*k], &coef, x);
                    }
                    if let Some(combo) = &row.combo {
                        for (k, x) in combo {
                            field.sub_mul_assign(&mut self.combo_acc[*k], &coef, x);
                        }
                    }
                }
                None => {
                    let x = std::mem::replace(&mut self.acc[c], field.zero());
                    out.push((c, x));
                }
            }
        }
        out
    }

    fn first_index(v: &[(usize, F::Elem)]) -> usize {
        v.first().map_or(0, |(i, _)| *i)
    }

    /// Reduces `v` modulo the span; the result is zero iff `v` is in the span.
    pub fn reduce(&mut self, v: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
        assert!(!self.track, "reduce on a tracking echelon");
        self.load(v);
        self.sweep(Self::first_index(v))
    }

    pub fn contains(&mut self, v: &[(usize, F::Elem)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &[(usize, F::Elem)]) -> bool {
        assert!(!self.track, "use insert_tracked on a tracking echelon");
        let reduced = self.reduce(v);
        self.push_row(reduced, None)
    }

    fn push_row(&mut self, mut reduced: SparseVec<F::Elem>, mut combo: Option<SparseVec<F::Elem>>) -> bool {
        let Some((lead, lead_val)) = reduced.first().cloned() else {
            return false;
        };
        let inv = self.field.inv(&lead_val);
        for (_, x) in reduced.iter_mut() {
            *x = self.field.mul(x, &inv);
        }
        if let Some(c) = combo.as_mut() {
            for (_, x) in c.iter_mut() {
                *x = self.field.mul(x, &inv);
            }
        }
        self.pivot_of[lead] = Some(self.rows.len() as u32);
        self.rows.push(EchelonRow {
            entries: reduced,
            combo,
        });
        true
    }

    /// Inserts with dependency tracking (requires [`Echelon::with_tracking`]).
    pub fn insert_tracked(&mut self, v: &[(usize, F::Elem)]) -> Insertion<F::Elem> {
        assert!(self.track, "insert_tracked needs a tracking echelon");
        let idx = self.inserted;
        self.inserted += 1;
        assert!(idx < self.combo_acc.len(), "tracking capacity exceeded");
        self.combo_acc[idx] = self.field.one();
        self.load(v);
        let reduced = self.sweep(Self::first_index(v));
        let mut combo = Vec::new();
        for k in 0..=idx {
            if !self.field.is_zero(&self.combo_acc[k]) {
                let x = std::mem::replace(&mut self.combo_acc[k], self.field.zero());
                combo.push((k, x));
            }
        }
        if reduced.is_empty() {
            Insertion::Dependent(combo)
        } else {
            self.push_row(reduced, Some(combo));
            Insertion::Independent
        }
    }

    /// Leading indices of the basis rows, in insertion order.
    pub fn leads(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.entries[0].0).collect()
    }

    /// The reduced row-echelon basis of the span, sorted by leading index.
    pub fn into_rref(mut self) -> Vec<SparseVec<F::Elem>> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| std::cmp::Reverse(self.rows[r].entries[0].0));
        for &r in &order {
            // rows with larger leads are already fully reduced
            let entries = std::mem::take(&mut self.rows[r].entries);
            let (lead, one) = entries[0].clone();
            self.load(&entries[1..]);
            let tail = self.sweep(lead + 1);
            let mut row = Vec::with_capacity(tail.len() + 1);
            row.push((lead, one));
            row.extend(tail);
            self.rows[r].entries = row;
        }
        order.reverse();
        order
            .into_iter()
            .map(|r| std::mem::take(&mut self.rows[r].entries))
            .collect()
    }
}

/// Dense vector to sparse form.
pub fn sparsify<F: Field>(field: &F, v: &[F::Elem]) -> SparseVec<F::Elem> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !field.is_zero(x))
        .map(|(i, x)| (i, x.clone()))
        .collect()
}
