//! Minimal graded free resolutions over `E` and graded Betti tables.
//!
//! The resolution `... → F_1 → F_0 → J → 0` is built one homological step at a
//! time. With `Z_i = ker(F_{i-1} → F_{i-2})` (and `Z_0 = J`), exactness gives
//! `dim (Z_i)_a = dim (F_{i-1})_a - dim (Z_{i-1})_a` in every degree `a`, so
//! kernel dimensions cost nothing. The new generators of `F_i` in degree `a`
//! number `dim (Z_i)_a` minus the rank of the image of the older generators,
//! and are found as kernel vectors supported off the pivots of that image.
//!
//! Two facts bound the work:
//! * `reg J <= top(E/J) + 1`, where `top` is the largest degree with
//!   `(E/J)_d ≠ 0`: `E` is Koszul, so a module concentrated in degrees
//!   `<= t` has regularity `<= t`. Generators of `F_i` lie in degrees
//!   `i + d_0 ..= i + reg J`. A sharper bound comes from any stable initial
//!   ideal `in(gJ)`, since Betti numbers only grow under degeneration.
//! * Over the rationals a full-rank image modulo a prime certifies a zero
//!   Betti number, since the rank over `Q` is squeezed between the modular
//!   rank and `dim (Z_i)_a`.
//!
//! Monomial ideals are resolved in the finer `N^n` grading, where every
//! multigraded piece of a free module has at most one basis element per
//! generator.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::Hash;

use serde_json::json;

use crate::exterior::{monomials_of_degree, piece_dim, Monomial, MAX_VARS};
use crate::ideal::GradedIdeal;
use crate::exterior::LinearChange;
use crate::initial::{gin, ideal_from_sets, transformed_initial_sets, GinOptions};
use crate::linalg::random_invertible;
use crate::linalg::{Echelon, SparseVec};
use crate::matroid::Matroid;
use crate::scalar::{binomial, Field, FieldChoice, PrimeField, RationalField, DEFAULT_PRIME};
use crate::{Error, Result};

/// Knobs of the resolution engine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionOptions {
    pub field: FieldChoice,
    /// Prime used to certify vanishing Betti numbers of rational computations.
    pub certify_prime: Option<PrimeField>,
    /// Largest dimension of a free-module piece the engine will eliminate in.
    pub max_dimension: usize,
    /// Resolve monomial ideals in the `N^n` grading.
    pub multigraded: bool,
}

impl Default for ResolutionOptions {
    fn default() -> Self {
        ResolutionOptions {
            field: FieldChoice::Rational,
            certify_prime: Some(PrimeField::new(DEFAULT_PRIME).expect("default prime")),
            max_dimension: 4_000,
            multigraded: true,
        }
    }
}

/// Whether a table describes `J` or `E/J`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Subject {
    Ideal,
    Quotient,
}

/// Where a resource limit stopped the computation: steps below `step` are
/// complete, and step `step` is complete below internal degree `degree`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Truncation {
    pub step: usize,
    pub degree: usize,
    pub reason: String,
}

/// Graded Betti numbers `β_{i,j}` up to a homological cutoff.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    entries: BTreeMap<(usize, usize), u64>,
    i_max: usize,
    j_max: Vec<usize>,
    subject: Subject,
    truncation: Option<Truncation>,
}

impl BettiTable {
    pub fn new(subject: Subject, i_max: usize, j_max: Vec<usize>) -> Self {
        BettiTable {
            entries: BTreeMap::new(),
            i_max,
            j_max,
            subject,
            truncation: None,
        }
    }

    pub fn from_entries(subject: Subject, i_max: usize, entries: impl IntoIterator<Item = (usize, usize, u64)>) -> Self {
        let mut t = BettiTable::new(subject, i_max, Vec::new());
        for (i, j, c) in entries {
            if c > 0 && i <= i_max {
                *t.entries.entry((i, j)).or_insert(0) += c;
            }
        }
        t.j_max = vec![usize::MAX; i_max + 1];
        t
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn i_max(&self) -> usize {
        self.i_max
    }

    /// Largest internal degree explored at step `i`.
    pub fn j_max(&self, i: usize) -> usize {
        self.j_max.get(i).copied().unwrap_or(0)
    }

    pub fn subject(&self) -> Subject {
        self.subject
    }

    pub fn truncation(&self) -> Option<&Truncation> {
        self.truncation.as_ref()
    }

    /// Nonzero entries `(i, j, β_{i,j})` in increasing `(i, j)` order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.entries.iter().map(|(&(i, j), &c)| (i, j, c))
    }

    /// `β_{i,i+d}` for `i = 0..=i_max`.
    pub fn linear_strand(&self, d: usize) -> Vec<u64> {
        (0..=self.i_max).map(|i| self.get(i, i + d)).collect()
    }

    /// The shifts `j - i` carrying a nonzero entry.
    pub fn strands(&self) -> BTreeSet<usize> {
        self.entries.keys().map(|(i, j)| j - i).collect()
    }

    /// `max{j - i : β_{i,j} ≠ 0}`.
    pub fn max_shift(&self) -> Option<usize> {
        self.strands().into_iter().next_back()
    }

    /// Total Betti number at step `i`.
    pub fn total(&self, i: usize) -> u64 {
        self.entries.iter().filter(|((a, _), _)| *a == i).map(|(_, c)| c).sum()
    }

    /// The same resolution read as one of `E/J`: `β_{i+1,j}(E/J) = β_{i,j}(J)`
    /// and `β_{0,0}(E/J) = 1`.
    pub fn to_quotient(&self) -> BettiTable {
        if self.subject == Subject::Quotient {
            return self.clone();
        }
        let mut entries = BTreeMap::new();
        entries.insert((0, 0), 1);
        for (&(i, j), &c) in &self.entries {
            entries.insert((i + 1, j), c);
        }
        let mut j_max = vec![0];
        j_max.extend(self.j_max.iter().copied());
        BettiTable {
            entries,
            i_max: self.i_max + 1,
            j_max,
            subject: Subject::Quotient,
            truncation: self.truncation.clone().map(|t| Truncation { step: t.step + 1, ..t }),
        }
    }

    /// Entrywise equality of the nonzero entries and cutoffs.
    pub fn same_numbers(&self, other: &BettiTable) -> bool {
        self.entries == other.entries && self.i_max == other.i_max
    }

    /// Staircase layout: columns are `i`, rows are `j - i`; `.` is zero and
    /// `?` marks entries beyond a truncation.
    pub fn render(&self) -> String {
        let strands = self.strands();
        let (lo, hi) = match (strands.first(), strands.last()) {
            (Some(a), Some(b)) => (*a, *b),
            _ => (0, 0),
        };
        let cols: Vec<usize> = (0..=self.i_max).collect();
        let mut cells: Vec<Vec<String>> = Vec::new();
        let mut header = vec![String::new()];
        header.extend(cols.iter().map(|i| i.to_string()));
        cells.push(header);
        let mut total = vec!["total:".to_string()];
        total.extend(cols.iter().map(|&i| self.total(i).to_string()));
        cells.push(total);
        for s in lo..=hi {
            let mut row = vec![format!("{s}:")];
            row.extend(cols.iter().map(|&i| match self.get(i, i + s) {
                0 if i + s > self.j_max(i) => "?".to_string(),
                0 => ".".to_string(),
                c => c.to_string(),
            }));
            cells.push(row);
        }
        let width = cells.iter().flatten().map(|c| c.len()).max().unwrap_or(1);
        let mut out = String::new();
        for row in cells {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            out.push_str(line.join(" ").trim_end());
            out.push('\n');
        }
        if let Some(t) = &self.truncation {
            out.push_str(&format!(
                "truncated at step {} degree {}: {}\n",
                t.step, t.degree, t.reason
            ));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "imax": self.i_max,
            "subject": self.subject,
            "entries": self.entries().map(|(i, j, c)| json!([i, j, c])).collect::<Vec<_>>(),
            "truncation": self.truncation,
        })
    }
}

impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Summary of a computed resolution.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub table: BettiTable,
    /// Coefficients of degree zero in the differentials; zero for a minimal
    /// resolution.
    pub unit_entries: usize,
    pub multigraded: bool,
    pub field: String,
}

/// Graded Betti table of `J` up to step `i_max`.
pub fn betti_table(j: &GradedIdeal, i_max: usize, opts: &ResolutionOptions) -> Result<BettiTable> {
    Ok(resolve(j, i_max, opts)?.table)
}

/// Minimal free resolution of `J` up to step `i_max`.
pub fn resolve(j: &GradedIdeal, i_max: usize, opts: &ResolutionOptions) -> Result<Resolution> {
    if j.is_zero() {
        return Err(Error::InvalidArgument("trivial ideal rejected".into()));
    }
    let multi = opts.multigraded && j.is_monomial();
    let (outcome, field) = match opts.field {
        FieldChoice::Rational => (dispatch(j, i_max, opts, RationalField, opts.certify_prime, multi)?, RationalField.describe()),
        FieldChoice::Prime(p) => (dispatch(j, i_max, opts, p, None, multi)?, p.describe()),
    };
    Ok(Resolution {
        table: outcome.table,
        unit_entries: outcome.unit_entries,
        multigraded: multi,
        field,
    })
}

struct Outcome {
    table: BettiTable,
    unit_entries: usize,
}

fn dispatch<F: Field>(
    j: &GradedIdeal,
    i_max: usize,
    opts: &ResolutionOptions,
    field: F,
    certify: Option<PrimeField>,
    multi: bool,
) -> Result<Outcome> {
    let n = j.n();
    let dims = ideal_dims(&field, j)?;
    let top = (0..=n).rev().find(|&d| piece_dim(n, d) > dims[d]).unwrap_or(0);
    let rational_dims: Vec<usize> = (0..=n).map(|d| j.dim(d)).collect();
    let reg_bound = regularity_bound(j, &rational_dims).unwrap_or(top + 1).min(top + 1);
    if multi {
        let gens = j.minimal_monomial_generators()?;
        let gr = Multigraded { n };
        let input = gens
            .iter()
            .map(|&m| (gr.of_monomial(m), vec![Term { gen: 0, mono: m, coef: field.one() }]))
            .collect();
        let k0 = move |a: &MultiDeg| -> usize {
            match multideg_monomial(a) {
                Some(u) => usize::from(gens.iter().any(|g| g.divides(u))),
                None => 0,
            }
        };
        Engine::new(gr, field, certify, opts, reg_bound).run(input, k0, i_max)
    } else {
        let gr = Graded::new(n);
        let mut input = Vec::new();
        for g in j.generators() {
            let d = g.degree().expect("generators are homogeneous");
            let mut image = Vec::new();
            for (m, c) in g.terms() {
                let x = field.from_rational(c)?;
                if !field.is_zero(&x) {
                    image.push(Term { gen: 0, mono: m, coef: x });
                }
            }
            if !image.is_empty() {
                input.push((d, image));
            }
        }
        input.sort_by_key(|(d, _)| *d);
        let k0 = move |d: &usize| dims.get(*d).copied().unwrap_or(0);
        Engine::new(gr, field, certify, opts, reg_bound).run(input, k0, i_max)
    }
}

/// A proven upper bound for `reg J`, when a stable initial ideal is found.
///
/// `β_{i,j}(J) <= β_{i,j}(in(gJ))` for every change of coordinates `g`, and a
/// stable monomial ideal has regularity equal to its top generator degree.
/// The identity is tried first, then seeded changes with small and with
/// large entries. The bound is computed over the rationals and also caps
/// the degrees explored by prime-field runs.
fn regularity_bound(j: &GradedIdeal, dims: &[usize]) -> Option<usize> {
    let n = j.n();
    let changes = [
        LinearChange::identity(n),
        LinearChange::new(random_invertible(n, 3, REGULARITY_SEED).ok()?).ok()?,
        LinearChange::new(random_invertible(n, 999, REGULARITY_SEED).ok()?).ok()?,
    ];
    for g in &changes {
        let Ok(sets) = transformed_initial_sets(j, g, &FieldChoice::Rational) else {
            continue;
        };
        if sets.iter().map(|s| s.len()).ne(dims.iter().copied()) {
            continue;
        }
        let Ok(initial) = ideal_from_sets(n, &sets) else {
            continue;
        };
        if initial.is_stable().unwrap_or(false) {
            return initial.minimal_monomial_generators().ok()?.iter().map(|u| u.degree()).max();
        }
    }
    None
}

const REGULARITY_SEED: u64 = 0x5EED_0F_4E6;

/// `dim J_d` over `field` for `d = 0..=n`.
fn ideal_dims<F: Field>(field: &F, j: &GradedIdeal) -> Result<Vec<usize>> {
    let n = j.n();
    if field.describe() == RationalField.describe() {
        return Ok((0..=n).map(|d| j.dim(d)).collect());
    }
    let mut dims = vec![0; n + 1];
    let mut prev: Vec<SparseVec<F::Elem>> = Vec::new();
    for d in 0..=n {
        let lower = if d > 0 { monomials_of_degree(n, d - 1) } else { Vec::new() };
        let mut ech = Echelon::new(field.clone(), piece_dim(n, d));
        for row in &prev {
            for k in 1..=n {
                let ek = Monomial::var(k);
                let mut v: SparseVec<F::Elem> = row
                    .iter()
                    .filter_map(|(c, x)| {
                        ek.wedge(lower[*c])
                            .map(|(neg, m)| (m.colex_rank(), if neg { field.neg(x) } else { x.clone() }))
                    })
                    .collect();
                v.sort_by_key(|(i, _)| *i);
                ech.insert(&v);
            }
        }
        for g in j.generators().iter().filter(|g| g.degree() == Some(d)) {
            let mut v = Vec::new();
            for (m, c) in g.terms() {
                let x = field.from_rational(c)?;
                if !field.is_zero(&x) {
                    v.push((m.colex_rank(), x));
                }
            }
            v.sort_by_key(|(i, _)| *i);
            ech.insert(&v);
        }
        dims[d] = ech.rank();
        prev = ech.into_rref();
    }
    Ok(dims)
}

type MultiDeg = [u8; MAX_VARS];

fn multideg_monomial(a: &MultiDeg) -> Option<Monomial> {
    let mut bits = 0u32;
    for (k, &x) in a.iter().enumerate() {
        match x {
            0 => {}
            1 => bits |= 1 << k,
            _ => return None,
        }
    }
    Some(Monomial(bits))
}

/// A grading of free `E`-modules: how a generator degree and a target degree
/// determine the block of multiplier monomials.
trait Grading {
    type Deg: Copy + Ord + Eq + Hash + fmt::Debug;
    fn zero(&self) -> Self::Deg;
    fn total(&self, d: &Self::Deg) -> usize;
    /// Number of monomials `m` with `gen + deg(m) = target`.
    fn block_len(&self, gen: &Self::Deg, target: &Self::Deg) -> usize;
    fn block_monomial(&self, gen: &Self::Deg, target: &Self::Deg, idx: usize) -> Monomial;
    fn index_in_block(&self, m: Monomial) -> usize;
    /// Candidate degrees for new generators of `F_i`, in increasing total degree.
    fn candidates(&self, prev: &[Self::Deg], lo: usize, hi: usize) -> Vec<Self::Deg>;
}

struct Graded {
    n: usize,
    monos: Vec<Vec<Monomial>>,
}

impl Graded {
    fn new(n: usize) -> Self {
        Graded {
            n,
            monos: (0..=n).map(|d| monomials_of_degree(n, d)).collect(),
        }
    }
}

impl Grading for Graded {
    type Deg = usize;

    fn zero(&self) -> usize {
        0
    }
    fn total(&self, d: &usize) -> usize {
        *d
    }
    fn block_len(&self, gen: &usize, target: &usize) -> usize {
        if target >= gen && target - gen <= self.n {
            self.monos[target - gen].len()
        } else {
            0
        }
    }
    fn block_monomial(&self, gen: &usize, target: &usize, idx: usize) -> Monomial {
        self.monos[target - gen][idx]
    }
    fn index_in_block(&self, m: Monomial) -> usize {
        m.colex_rank()
    }
    fn candidates(&self, prev: &[usize], lo: usize, hi: usize) -> Vec<usize> {
        let top = prev.iter().max().map_or(0, |d| d + self.n);
        (lo..=hi.min(top)).collect()
    }
}

struct Multigraded {
    n: usize,
}

impl Multigraded {
    fn of_monomial(&self, m: Monomial) -> MultiDeg {
        let mut a = [0u8; MAX_VARS];
        for k in m.indices() {
            a[k - 1] = 1;
        }
        a
    }
}

impl Grading for Multigraded {
    type Deg = MultiDeg;

    fn zero(&self) -> MultiDeg {
        [0; MAX_VARS]
    }
    fn total(&self, d: &MultiDeg) -> usize {
        d.iter().map(|&x| x as usize).sum()
    }
    fn block_len(&self, gen: &MultiDeg, target: &MultiDeg) -> usize {
        let ok = (0..self.n).all(|k| target[k] >= gen[k] && target[k] - gen[k] <= 1);
        usize::from(ok)
    }
    fn block_monomial(&self, gen: &MultiDeg, target: &MultiDeg, _idx: usize) -> Monomial {
        let mut bits = 0u32;
        for k in 0..self.n {
            if target[k] > gen[k] {
                bits |= 1 << k;
            }
        }
        Monomial(bits)
    }
    fn index_in_block(&self, _m: Monomial) -> usize {
        0
    }
    fn candidates(&self, prev: &[MultiDeg], lo: usize, hi: usize) -> Vec<MultiDeg> {
        let mut out = BTreeSet::new();
        let full = 1u32 << self.n;
        for b in prev {
            let base = self.total(b);
            for c in 1..full {
                let size = c.count_ones() as usize;
                if base + size < lo || base + size > hi {
                    continue;
                }
                let mut a = *b;
                for k in 0..self.n {
                    if c >> k & 1 == 1 {
                        a[k] += 1;
                    }
                }
                out.insert((base + size, a));
            }
        }
        out.into_iter().map(|(_, a)| a).collect()
    }
}

#[derive(Clone, Debug)]
struct Term<E> {
    gen: u32,
    mono: Monomial,
    coef: E,
}

struct Gen<D, E> {
    deg: D,
    /// Image under the differential, as `Σ coef · mono · gen` in the previous
    /// free module.
    image: Vec<Term<E>>,
    residues: Option<Vec<Term<u64>>>,
}

struct Layout {
    offsets: Vec<Option<usize>>,
    total: usize,
}

struct Engine<'o, G: Grading, F: Field> {
    gr: G,
    field: F,
    certify: Option<PrimeField>,
    opts: &'o ResolutionOptions,
    reg_bound: usize,
    /// `steps[k + 1]` holds the generators of `F_k`; `steps[0]` is `E` itself.
    steps: Vec<Vec<Gen<G::Deg, F::Elem>>>,
}

impl<'o, G: Grading, F: Field> Engine<'o, G, F> {
    fn new(gr: G, field: F, certify: Option<PrimeField>, opts: &'o ResolutionOptions, reg_bound: usize) -> Self {
        let base = Gen {
            deg: gr.zero(),
            image: Vec::new(),
            residues: Some(Vec::new()),
        };
        Engine {
            gr,
            field,
            certify,
            opts,
            reg_bound,
            steps: vec![vec![base]],
        }
    }

    fn layout(&self, level: usize, target: &G::Deg) -> Layout {
        let mut offsets = Vec::with_capacity(self.steps[level].len());
        let mut total = 0;
        for g in &self.steps[level] {
            let len = self.gr.block_len(&g.deg, target);
            if len > 0 {
                offsets.push(Some(total));
                total += len;
            } else {
                offsets.push(None);
            }
        }
        Layout { offsets, total }
    }

    fn basis(&self, level: usize, target: &G::Deg) -> Vec<(u32, Monomial)> {
        let mut out = Vec::new();
        for (b, g) in self.steps[level].iter().enumerate() {
            for idx in 0..self.gr.block_len(&g.deg, target) {
                out.push((b as u32, self.gr.block_monomial(&g.deg, target, idx)));
            }
        }
        out
    }

    /// `m · image` in coordinates of the previous level's layout.
    fn mult<E: Clone>(&self, neg: impl Fn(&E) -> E, m: Monomial, image: &[Term<E>], layout: &Layout) -> SparseVec<E> {
        let mut v: SparseVec<E> = image
            .iter()
            .filter_map(|t| {
                m.wedge(t.mono).map(|(sign, w)| {
                    let off = layout.offsets[t.gen as usize].expect("image lies in the target degree");
                    let c = if sign { neg(&t.coef) } else { t.coef.clone() };
                    (off + self.gr.index_in_block(w), c)
                })
            })
            .collect();
        v.sort_by_key(|(i, _)| *i);
        v
    }

    /// `dim (Z_i)_a` from the Euler characteristic of the partial resolution.
    fn kernel_dim(&self, i: usize, a: &G::Deg, k0: &impl Fn(&G::Deg) -> usize) -> Result<usize> {
        let mut acc: i64 = if i % 2 == 0 { k0(a) as i64 } else { -(k0(a) as i64) };
        for k in 0..i {
            let dim: usize = self.steps[k + 1].iter().map(|g| self.gr.block_len(&g.deg, a)).sum();
            let sign = if (i - 1 - k) % 2 == 0 { 1 } else { -1 };
            acc += sign * dim as i64;
        }
        usize::try_from(acc).map_err(|_| Error::Inconsistency(format!("negative kernel dimension at step {i}")))
    }

    fn residues(&self, image: &[Term<F::Elem>]) -> Option<Vec<Term<u64>>> {
        let p = self.certify.as_ref()?;
        image
            .iter()
            .map(|t| {
                self.field.residue_mod(&t.coef, p).map(|r| Term {
                    gen: t.gen,
                    mono: t.mono,
                    coef: r,
                })
            })
            .collect()
    }

    fn push_gen(&mut self, level: usize, deg: G::Deg, image: Vec<Term<F::Elem>>) {
        let residues = self.residues(&image);
        self.steps[level].push(Gen { deg, image, residues });
    }

    /// Rank modulo the certification prime of the old image, if computable.
    fn modular_rank(&self, level: usize, a: &G::Deg, layout: &Layout) -> Option<usize> {
        let p = self.certify?;
        let mut ech = Echelon::new(p, layout.total);
        for g in &self.steps[level] {
            if g.deg == *a {
                continue;
            }
            let res = g.residues.as_ref()?;
            for idx in 0..self.gr.block_len(&g.deg, a) {
                let m = self.gr.block_monomial(&g.deg, a, idx);
                let v = self.mult(|x| p.neg(x), m, res, layout);
                ech.insert(&v);
            }
        }
        Some(ech.rank())
    }

    fn old_image(&self, level: usize, a: &G::Deg, layout: &Layout) -> Echelon<F> {
        let mut ech = Echelon::new(self.field.clone(), layout.total);
        for g in &self.steps[level] {
            if g.deg == *a {
                continue;
            }
            for idx in 0..self.gr.block_len(&g.deg, a) {
                let m = self.gr.block_monomial(&g.deg, a, idx);
                let v = self.mult(|x| self.field.neg(x), m, &g.image, layout);
                ech.insert(&v);
            }
        }
        ech
    }

    /// Kernel of `F_{i-1} → F_{i-2}` in degree `a`, restricted to the
    /// coordinates `free`: the transposed map is row reduced and each
    /// non-pivot coordinate yields one kernel vector.
    fn kernel_on(&self, i: usize, a: &G::Deg, basis: &[(u32, Monomial)], free: &[usize]) -> Vec<Vec<Term<F::Elem>>> {
        let target = self.layout(i - 1, a);
        let mut transposed: Vec<SparseVec<F::Elem>> = vec![Vec::new(); target.total];
        for (k, &c) in free.iter().enumerate() {
            let (b, m) = basis[c];
            for (t, x) in self.mult(|x| self.field.neg(x), m, &self.steps[i][b as usize].image, &target) {
                transposed[t].push((k, x));
            }
        }
        let mut ech = Echelon::new(self.field.clone(), free.len());
        for row in &transposed {
            if !row.is_empty() {
                ech.insert(row);
            }
        }
        drop(transposed);
        let rref = ech.into_rref();
        let mut pivot = vec![false; free.len()];
        for row in &rref {
            pivot[row[0].0] = true;
        }
        // kernel vector for non-pivot f: x_f - Σ_rows R[row][f] x_lead(row)
        let mut vectors: BTreeMap<usize, SparseVec<F::Elem>> = (0..free.len())
            .filter(|&f| !pivot[f])
            .map(|f| (f, vec![(f, self.field.one())]))
            .collect();
        for row in &rref {
            let lead = row[0].0;
            for (f, x) in &row[1..] {
                if let Some(v) = vectors.get_mut(f) {
                    v.push((lead, self.field.neg(x)));
                }
            }
        }
        vectors
            .into_values()
            .map(|mut v| {
                v.sort_by_key(|(k, _)| *k);
                self.field.normalize(&mut v);
                v.into_iter()
                    .map(|(k, coef)| {
                        let (gen, mono) = basis[free[k]];
                        Term { gen, mono, coef }
                    })
                    .collect()
            })
            .collect()
    }

    fn run(
        mut self,
        input: Vec<(G::Deg, Vec<Term<F::Elem>>)>,
        k0: impl Fn(&G::Deg) -> usize,
        i_max: usize,
    ) -> Result<Outcome> {
        let (truncation, j_max) = self.build(input, k0, i_max)?;
        Ok(self.finish(i_max, truncation, j_max))
    }

    fn build(
        &mut self,
        input: Vec<(G::Deg, Vec<Term<F::Elem>>)>,
        k0: impl Fn(&G::Deg) -> usize,
        i_max: usize,
    ) -> Result<(Option<Truncation>, Vec<usize>)> {
        let d0 = input.iter().map(|(d, _)| self.gr.total(d)).min().unwrap_or(0);
        let mut truncation = None;
        let mut j_max = Vec::new();

        // step 0: minimal generators among the given ones
        self.steps.push(Vec::new());
        let mut degs: Vec<G::Deg> = input.iter().map(|(d, _)| *d).collect();
        degs.sort_by_key(|d| (self.gr.total(d), *d));
        degs.dedup();
        for a in &degs {
            let layout = self.layout(0, a);
            let mut ech = self.old_image(1, a, &layout);
            for (d, image) in input.iter().filter(|(d, _)| d == a) {
                let v = self.mult(|x| self.field.neg(x), Monomial::ONE, image, &layout);
                if ech.insert(&v) {
                    self.push_gen(1, *d, image.clone());
                }
            }
        }
        j_max.push(self.reg_bound);

        'steps: for i in 1..=i_max {
            self.steps.push(Vec::new());
            let lo = i + d0;
            let hi = i + self.reg_bound;
            let prev_degs: Vec<G::Deg> = self.steps[i].iter().map(|g| g.deg).collect();
            for a in self.gr.candidates(&prev_degs, lo, hi) {
                let k = self.kernel_dim(i, &a, &k0)?;
                if k == 0 {
                    continue;
                }
                let layout = self.layout(i, &a);
                if layout.total > self.opts.max_dimension {
                    truncation = Some(Truncation {
                        step: i,
                        degree: self.gr.total(&a),
                        reason: format!(
                            "free module piece of dimension {} exceeds the limit {}",
                            layout.total, self.opts.max_dimension
                        ),
                    });
                    j_max.push(self.gr.total(&a).saturating_sub(1));
                    break 'steps;
                }
                if let Some(r) = self.modular_rank(i + 1, &a, &layout) {
                    if r == k {
                        continue;
                    }
                    if r > k {
                        return Err(Error::Inconsistency(format!(
                            "image rank {r} exceeds kernel dimension {k} at step {i}"
                        )));
                    }
                }
                let image = self.old_image(i + 1, &a, &layout);
                let r = image.rank();
                if r > k {
                    return Err(Error::Inconsistency(format!(
                        "image rank {r} exceeds kernel dimension {k} at step {i}"
                    )));
                }
                let beta = k - r;
                if beta == 0 {
                    continue;
                }
                let mut is_lead = vec![false; layout.total];
                for c in image.leads() {
                    is_lead[c] = true;
                }
                drop(image);
                let basis = self.basis(i, &a);
                let free: Vec<usize> = (0..layout.total).filter(|&c| !is_lead[c]).collect();
                let kernel = self.kernel_on(i, &a, &basis, &free);
                if kernel.len() != beta {
                    return Err(Error::Inconsistency(format!(
                        "found {} of {beta} new syzygies at step {i}",
                        kernel.len()
                    )));
                }
                for image in kernel {
                    self.push_gen(i + 1, a, image);
                }
            }
            j_max.push(hi);
        }
        Ok((truncation, j_max))
    }

    fn finish(&self, i_max: usize, truncation: Option<Truncation>, j_max: Vec<usize>) -> Outcome {
        let mut table = BettiTable::new(Subject::Ideal, i_max, j_max);
        let mut unit_entries = 0;
        for (i, gens) in self.steps.iter().enumerate().skip(1) {
            for g in gens {
                *table.entries.entry((i - 1, self.gr.total(&g.deg))).or_insert(0) += 1;
                if i > 1 {
                    unit_entries += g.image.iter().filter(|t| t.mono == Monomial::ONE).count();
                }
            }
        }
        table.truncation = truncation;
        Outcome { table, unit_entries }
    }
}

/// `β_{i,j}(J) = Σ_{u ∈ G(J), deg u = j-i} C(max(u) + i - 1, max(u) - 1)` for
/// stable `J`, with `j` the internal degree.
pub fn stable_betti(j: &GradedIdeal, i: usize, internal_degree: usize) -> Result<u128> {
    if !j.is_stable()? {
        return Err(Error::NotStable);
    }
    let Some(d) = internal_degree.checked_sub(i) else {
        return Ok(0);
    };
    Ok(j.minimal_monomial_generators()?
        .into_iter()
        .filter(|u| u.degree() == d)
        .map(|u| {
            let m = u.max_index() as u64;
            binomial(m + i as u64 - 1, m - 1)
        })
        .sum())
}

/// The whole table of [`stable_betti`] up to step `i_max`.
pub fn stable_betti_table(j: &GradedIdeal, i_max: usize) -> Result<BettiTable> {
    let gens = j.minimal_monomial_generators()?;
    let degrees: BTreeSet<usize> = gens.iter().map(|u| u.degree()).collect();
    let mut entries = Vec::new();
    for i in 0..=i_max {
        for &d in &degrees {
            let c = stable_betti(j, i, i + d)?;
            entries.push((i, i + d, u64::try_from(c).map_err(|_| Error::ResourceLimit("Betti number overflow".into()))?));
        }
    }
    Ok(BettiTable::from_entries(Subject::Ideal, i_max, entries))
}

/// `cx E/J = max{max(u) : u ∈ G(J)}` for stable `J`.
pub fn complexity_stable(j: &GradedIdeal) -> Result<usize> {
    if !j.is_stable()? {
        return Err(Error::NotStable);
    }
    Ok(j.minimal_monomial_generators()?.iter().map(|u| u.max_index()).max().unwrap_or(0))
}

/// Complexity of an Orlik-Solomon algebra: ground set size minus the number
/// of connected components of the matroid.
pub fn complexity_os(m: &Matroid) -> usize {
    m.n() - m.components().len()
}

/// Regularity with the evidence used to establish it.
#[derive(Clone, Debug)]
pub struct Regularity {
    pub value: usize,
    /// Largest generator degree of `gin(J)`.
    pub from_gin: usize,
    /// `max{j - i}` over the computed table.
    pub from_table: usize,
    pub table: BettiTable,
}

/// `reg J` as the top generator degree of `gin(J)`, cross-checked against the
/// Betti table up to `i_max`.
pub fn regularity(j: &GradedIdeal, i_max: usize, gin_opts: &GinOptions, opts: &ResolutionOptions) -> Result<Regularity> {
    let g = gin(j, gin_opts)?;
    let from_gin = g
        .ideal
        .minimal_monomial_generators()?
        .iter()
        .map(|u| u.degree())
        .max()
        .unwrap_or(0);
    let table = betti_table(j, i_max, opts)?;
    let from_table = table.max_shift().unwrap_or(0);
    if from_gin != from_table {
        return Err(Error::Inconsistency(format!(
            "regularity from gin is {from_gin} but the Betti table up to step {i_max} gives {from_table}"
        )));
    }
    Ok(Regularity {
        value: from_gin,
        from_gin,
        from_table,
        table,
    })
}

/// Outcome of the `d`-linear resolution test.
#[derive(Clone, Debug)]
pub struct LinearVerdict {
    pub degree: usize,
    pub linear: bool,
    /// Degrees of the minimal generators of `gin(J)`.
    pub gin_degrees: BTreeSet<usize>,
    /// Strands `j - i` of the Betti table, when it was computed.
    pub strands: Option<BTreeSet<usize>>,
}

/// `J` has a `d`-linear resolution: `gin(J)` is generated in degree `d` and
/// the Betti table up to `i_max` lives on the strand `j - i = d`.
pub fn has_linear_resolution(
    j: &GradedIdeal,
    d: usize,
    i_max: usize,
    gin_opts: &GinOptions,
    opts: &ResolutionOptions,
) -> Result<LinearVerdict> {
    // the zero resolution is linear in every degree
    if j.is_zero() {
        return Ok(LinearVerdict {
            degree: d,
            linear: true,
            gin_degrees: BTreeSet::new(),
            strands: None,
        });
    }
    let g = gin(j, gin_opts)?;
    let gin_degrees: BTreeSet<usize> = g.ideal.minimal_monomial_generators()?.iter().map(|u| u.degree()).collect();
    if gin_degrees.len() != 1 || !gin_degrees.contains(&d) {
        return Ok(LinearVerdict {
            degree: d,
            linear: false,
            gin_degrees,
            strands: None,
        });
    }
    let table = betti_table(j, i_max, opts)?;
    let strands = table.strands();
    let linear = strands.len() == 1 && strands.contains(&d);
    Ok(LinearVerdict {
        degree: d,
        linear,
        gin_degrees,
        strands: Some(strands),
    })
}

/// Outcome of the componentwise linearity test.
#[derive(Clone, Debug)]
pub struct ComponentwiseVerdict {
    pub linear: bool,
    pub per_degree: Vec<LinearVerdict>,
}

/// Every `J_⟨d⟩ ≠ 0` has a `d`-linear resolution.
pub fn is_componentwise_linear(
    j: &GradedIdeal,
    i_max: usize,
    gin_opts: &GinOptions,
    opts: &ResolutionOptions,
) -> Result<ComponentwiseVerdict> {
    let mut per_degree = Vec::new();
    for d in 0..=j.n() {
        if j.dim(d) == 0 {
            continue;
        }
        let sub = j.subideal_generated_by_degree(d);
        per_degree.push(has_linear_resolution(&sub, d, i_max, gin_opts, opts)?);
    }
    Ok(ComponentwiseVerdict {
        linear: per_degree.iter().all(|v| v.linear),
        per_degree,
    })
}

/// `reg(J_≤k)` for `k` from the initial degree up to `r`; for a componentwise
/// linear ideal each value is at most `k`.
pub fn regularity_cascade(
    j: &GradedIdeal,
    r: usize,
    i_max: usize,
    gin_opts: &GinOptions,
    opts: &ResolutionOptions,
) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for k in 2..=r.min(j.n()) {
        let t = j.truncation_leq(k);
        if t.is_zero() {
            continue;
        }
        out.push((k, regularity(&t, i_max, gin_opts, opts)?.value));
    }
    Ok(out)
}

/// `i · Σ_r h_r C(r + i - 1, i + 1)`, the predicted `β_{i,i+1}(E/J)`.
pub fn conjecture_b_rhs(h: &BTreeMap<usize, u64>, i: usize) -> u128 {
    h.iter()
        .filter(|(r, _)| **r >= 1)
        .map(|(&r, &count)| i as u128 * count as u128 * binomial((r + i - 1) as u64, (i + 1) as u64))
        .sum()
}

/// `(i + 1) · Σ_r h_r C(r + i, i + 2)`, the same prediction indexed by the
/// ideal: `β_{i,i+2}(J)`.
pub fn conjecture_ideal_form(h: &BTreeMap<usize, u64>, i: usize) -> u128 {
    conjecture_b_rhs(h, i + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{boundary, ExtElement};
    use crate::scalar::Rational;
    use std::collections::HashMap;

    fn ideal(n: usize, monos: &[&str]) -> GradedIdeal {
        GradedIdeal::from_monomials(n, monos).unwrap()
    }

    fn opts_graded() -> ResolutionOptions {
        ResolutionOptions {
            multigraded: false,
            ..ResolutionOptions::default()
        }
    }

    #[test]
    fn principal_monomial() {
        for n in 2..=5 {
            let t = betti_table(&ideal(n, &["12"]), 4, &ResolutionOptions::default()).unwrap();
            assert_eq!(t.linear_strand(2), vec![1, 2, 3, 4, 5]);
            assert_eq!(t.strands().len(), 1);
            let g = betti_table(&ideal(n, &["12"]), 4, &opts_graded()).unwrap();
            assert!(g.same_numbers(&t));
        }
    }

    #[test]
    fn strongly_stable_example() {
        let j = ideal(5, &["12", "13", "14", "15", "234"]);
        let t = betti_table(&j, 4, &ResolutionOptions::default()).unwrap();
        assert_eq!(t.linear_strand(2), vec![4, 14, 34, 69, 125]);
        assert!(t.same_numbers(&stable_betti_table(&j, 4).unwrap()));
        let g = resolve(&j, 3, &opts_graded()).unwrap();
        assert_eq!(g.unit_entries, 0);
        assert!(g.table.same_numbers(&stable_betti_table(&j, 3).unwrap()));
    }

    #[test]
    fn stable_betti_values() {
        let j = ideal(5, &["12", "13", "14", "15", "234"]);
        assert_eq!(stable_betti(&j, 0, 2).unwrap(), 4);
        assert_eq!(stable_betti(&ideal(3, &["12"]), 3, 5).unwrap(), 4);
        assert_eq!(stable_betti(&ideal(3, &["23"]), 0, 2), Err(Error::NotStable));
        // (e_1, ..., e_t)^2 has β_{i,i+2} = (i+1) C(t+i, i+2)
        let t = 4;
        let forms: Vec<_> = (1..=t).map(|k| ExtElement::var(6, k)).collect();
        let sq = GradedIdeal::power_of_linear_ideal(&forms, 2).unwrap();
        for i in 0..5 {
            let expected = (i as u128 + 1) * binomial((t + i) as u64, (i + 2) as u64);
            assert_eq!(stable_betti(&sq, i, i + 2).unwrap(), expected);
        }
    }

    #[test]
    fn pure_ideal_graded_path() {
        // (∂e_123) is (e_12) after a coordinate change
        let j = GradedIdeal::new(4, vec![boundary(4, "123".parse().unwrap()).unwrap()]).unwrap();
        let r = resolve(&j, 4, &ResolutionOptions::default()).unwrap();
        assert!(!r.multigraded);
        assert_eq!(r.unit_entries, 0);
        assert_eq!(r.table.linear_strand(2), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn prime_field_agrees() {
        let j = GradedIdeal::new(
            5,
            vec![boundary(5, "123".parse().unwrap()).unwrap(), boundary(5, "1345".parse().unwrap()).unwrap()],
        )
        .unwrap();
        let q = betti_table(&j, 3, &ResolutionOptions::default()).unwrap();
        let uncertified = betti_table(&j, 3, &ResolutionOptions { certify_prime: None, ..ResolutionOptions::default() }).unwrap();
        let p = betti_table(
            &j,
            3,
            &ResolutionOptions {
                field: FieldChoice::Prime(PrimeField::default()),
                ..ResolutionOptions::default()
            },
        )
        .unwrap();
        assert!(q.same_numbers(&p));
        assert!(q.same_numbers(&uncertified));
    }

    #[test]
    fn quotient_shift() {
        let t = betti_table(&ideal(3, &["12"]), 2, &ResolutionOptions::default()).unwrap();
        let q = t.to_quotient();
        assert_eq!(q.get(0, 0), 1);
        for i in 0..=2 {
            for jj in 2..8 {
                assert_eq!(q.get(i + 1, jj), t.get(i, jj));
            }
        }
    }

    #[test]
    fn trivial_ideal_rejected() {
        assert!(betti_table(&GradedIdeal::zero(3).unwrap(), 2, &ResolutionOptions::default()).is_err());
    }

    #[test]
    fn truncation_marker() {
        let j = GradedIdeal::new(4, vec![boundary(4, "123".parse().unwrap()).unwrap()]).unwrap();
        let opts = ResolutionOptions {
            max_dimension: 3,
            ..ResolutionOptions::default()
        };
        let t = betti_table(&j, 4, &opts).unwrap();
        assert!(t.truncation().is_some());
        assert!(t.render().contains("truncated"));
        assert!(t.render().contains('?'));
    }

    #[test]
    fn render_layout() {
        let t = betti_table(&ideal(3, &["12"]), 2, &ResolutionOptions::default()).unwrap();
        let text = t.render();
        assert!(text.contains("total:"));
        assert!(text.lines().any(|l| l.trim_start().starts_with("2:")));
        let v = t.to_json();
        assert_eq!(v["imax"], 2);
        assert_eq!(v["entries"][0], json!([0, 2, 1]));
    }

    #[test]
    fn conjecture_forms() {
        let h: BTreeMap<usize, u64> = [(5, 1)].into();
        assert_eq!(conjecture_b_rhs(&h, 1), 10);
        assert_eq!(conjecture_b_rhs(&BTreeMap::new(), 3), 0);
        let h: BTreeMap<usize, u64> = [(3, 1), (2, 1)].into();
        for i in 0..6 {
            let ideal_form = (i as u128 + 1) * (binomial(i as u64 + 3, i as u64 + 2) + binomial(i as u64 + 2, i as u64 + 2));
            assert_eq!(conjecture_ideal_form(&h, i), ideal_form);
        }
    }

    #[test]
    fn linear_resolution_tests() {
        let forms: Vec<_> = (1..=3).map(|k| ExtElement::var(5, k)).collect();
        let sq = GradedIdeal::power_of_linear_ideal(&forms, 2).unwrap();
        let v = has_linear_resolution(&sq, 2, 3, &GinOptions::default(), &ResolutionOptions::default()).unwrap();
        assert!(v.linear);
        let j = ideal(5, &["12", "13", "14", "15", "234"]);
        let v = has_linear_resolution(&j, 2, 3, &GinOptions::default(), &ResolutionOptions::default()).unwrap();
        assert!(!v.linear);
        let c = is_componentwise_linear(&j, 3, &GinOptions::default(), &ResolutionOptions::default()).unwrap();
        assert!(c.linear, "stable ideals are componentwise linear");
        let reg = regularity(&j, 3, &GinOptions::default(), &ResolutionOptions::default()).unwrap();
        assert_eq!(reg.value, 3);
        let reg = regularity(&ideal(4, &["12"]), 3, &GinOptions::default(), &ResolutionOptions::default()).unwrap();
        assert_eq!(reg.value, 2);
    }

    fn d_squared_vanishes<G: Grading>(engine: &Engine<'_, G, RationalField>) -> bool {
        for k in 1..engine.steps.len() - 1 {
            for g in &engine.steps[k + 1] {
                let mut acc: HashMap<(u32, Monomial), Rational> = HashMap::new();
                for t in &g.image {
                    for s in &engine.steps[k][t.gen as usize].image {
                        if let Some((neg, w)) = t.mono.wedge(s.mono) {
                            let c = t.coef.mul(&s.coef);
                            let e = acc.entry((s.gen, w)).or_insert_with(Rational::zero);
                            *e = if neg { e.sub(&c) } else { e.add(&c) };
                        }
                    }
                }
                if !acc.values().all(Rational::is_zero) {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn differentials_compose_to_zero() {
        let j = GradedIdeal::new(
            5,
            vec![boundary(5, "123".parse().unwrap()).unwrap(), boundary(5, "2345".parse().unwrap()).unwrap()],
        )
        .unwrap();
        let opts = opts_graded();
        let input: Vec<_> = j
            .generators()
            .iter()
            .map(|g| {
                let image = g.terms().map(|(m, c)| Term { gen: 0, mono: m, coef: c.clone() }).collect::<Vec<_>>();
                (g.degree().unwrap(), image)
            })
            .collect();
        let dims: Vec<usize> = (0..=5).map(|d| j.dim(d)).collect();
        let mut engine = Engine::new(Graded::new(5), RationalField, opts.certify_prime, &opts, 5);
        engine.build(input, |d: &usize| dims.get(*d).copied().unwrap_or(0), 3).unwrap();
        assert!(d_squared_vanishes(&engine));
        assert_eq!(engine.finish(3, None, vec![]).unit_entries, 0);

        let m = ideal(5, &["12", "13", "24", "345"]);
        let gr = Multigraded { n: 5 };
        let gens = m.minimal_monomial_generators().unwrap();
        let input = gens.iter().map(|&u| (gr.of_monomial(u), vec![Term { gen: 0, mono: u, coef: Rational::one() }])).collect();
        let k0 = |a: &MultiDeg| multideg_monomial(a).map_or(0, |u| usize::from(gens.iter().any(|g| g.divides(u))));
        let mut engine = Engine::new(gr, RationalField, opts.certify_prime, &opts, 6);
        engine.build(input, k0, 3).unwrap();
        assert!(d_squared_vanishes(&engine));
    }
}
