//! Central arrangements, their matroids, and Orlik-Solomon ideals.
//!
//! Ground elements are `1..=n`; subsets are [`Monomial`] bitmasks so that a
//! set of hyperplanes and the matching exterior monomial are the same value.

use std::collections::BTreeSet;

use crate::exterior::{boundary, Monomial, MAX_VARS};
use crate::ideal::GradedIdeal;
use crate::linalg::{rank, Matrix};
use crate::scalar::{Rational, RationalField};
use crate::{Error, Result};

/// A central arrangement of `n` hyperplanes in `Q^l`, given by linear forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    l: usize,
    forms: Vec<Vec<Rational>>,
}

impl Arrangement {
    /// Accepts only simple essential arrangements: nonzero, pairwise
    /// non-proportional forms spanning the dual space.
    pub fn new(l: usize, forms: Vec<Vec<Rational>>) -> Result<Self> {
        if forms.is_empty() || forms.len() > MAX_VARS {
            return Err(Error::InvalidArgument(format!(
                "an arrangement needs between 1 and {MAX_VARS} hyperplanes, got {}",
                forms.len()
            )));
        }
        for (i, f) in forms.iter().enumerate() {
            if f.len() != l {
                return Err(Error::DimensionMismatch { expected: l, found: f.len() });
            }
            if f.iter().all(Rational::is_zero) {
                return Err(Error::InvalidArgument(format!("form {} is zero", i + 1)));
            }
        }
        let a = Arrangement { l, forms };
        for i in 0..a.n() {
            for j in i + 1..a.n() {
                if a.rank_of(Monomial::from_indices(&[i + 1, j + 1])?) < 2 {
                    return Err(Error::ProportionalForms(i + 1, j + 1));
                }
            }
        }
        let r = a.rank_of(a.ground());
        if r != l {
            return Err(Error::NonEssential { rank: r, ambient: l });
        }
        Ok(a)
    }

    pub fn from_i64(l: usize, forms: &[&[i64]]) -> Result<Self> {
        Arrangement::new(
            l,
            forms
                .iter()
                .map(|f| f.iter().map(|&x| Rational::from_integer(x)).collect())
                .collect(),
        )
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn n(&self) -> usize {
        self.forms.len()
    }

    pub fn forms(&self) -> &[Vec<Rational>] {
        &self.forms
    }

    fn ground(&self) -> Monomial {
        Monomial((1u32 << self.n()) - 1)
    }

    /// Linear-algebra rank of the forms indexed by `s`.
    pub fn rank_of(&self, s: Monomial) -> usize {
        let rows: Vec<Vec<Rational>> = s.indices().into_iter().map(|k| self.forms[k - 1].clone()).collect();
        if rows.is_empty() {
            return 0;
        }
        rank(&RationalField, &Matrix::stack(self.l, rows))
    }

    /// Circuits by a subset scan in increasing size, skipping supersets of
    /// circuits already found.
    pub fn matroid(&self) -> Matroid {
        let n = self.n();
        let r = self.l;
        let mut circuits: Vec<Monomial> = Vec::new();
        for size in 2..=(r + 1).min(n) {
            for s in subsets_of_size(n, size) {
                if circuits.iter().any(|c| c.divides(s)) {
                    continue;
                }
                if self.rank_of(s) < size {
                    circuits.push(s);
                }
            }
        }
        Matroid { n, circuits, rank: r }
    }
}

/// A loopless matroid on `1..=n`, stored by its circuits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matroid {
    n: usize,
    circuits: Vec<Monomial>,
    rank: usize,
}

impl Matroid {
    /// Validates the circuit axioms: no loops, no nesting, and strong
    /// elimination on every pair sharing an element.
    pub fn from_circuits(n: usize, circuits: Vec<Monomial>) -> Result<Self> {
        if n > MAX_VARS {
            return Err(Error::InvalidArgument(format!("at most {MAX_VARS} elements supported")));
        }
        let mut cs: Vec<Monomial> = circuits.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        sort_circuits(&mut cs);
        for c in &cs {
            if !c.fits(n) {
                return Err(Error::InvalidArgument(format!("circuit {} leaves the ground set 1..{n}", c.render())));
            }
            if c.degree() < 2 {
                return Err(Error::InvalidArgument(format!("circuit {} is a loop", c.render())));
            }
        }
        for (a, c1) in cs.iter().enumerate() {
            for c2 in &cs[a + 1..] {
                if c1.divides(*c2) || c2.divides(*c1) {
                    return Err(Error::InvalidArgument(format!(
                        "circuit {} contains circuit {}",
                        c2.render(),
                        c1.render()
                    )));
                }
                let common = c1.0 & c2.0;
                for k in Monomial(common).indices() {
                    let rest = Monomial((c1.0 | c2.0) & !(1 << (k - 1)));
                    if !cs.iter().any(|c| c.divides(rest)) {
                        return Err(Error::InvalidArgument(format!(
                            "circuits {} and {} violate elimination at {k}",
                            c1.render(),
                            c2.render()
                        )));
                    }
                }
            }
        }
        let mut m = Matroid { n, circuits: cs, rank: 0 };
        m.rank = m.rank_of(Monomial((1u32 << n) - 1));
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Circuits of size at most `max_size`, by size then lexicographically.
    pub fn circuits(&self, max_size: usize) -> Vec<Monomial> {
        let mut out: Vec<Monomial> = self.circuits.iter().copied().filter(|c| c.degree() <= max_size).collect();
        sort_circuits(&mut out);
        out
    }

    pub fn all_circuits(&self) -> &[Monomial] {
        &self.circuits
    }

    pub fn is_dependent(&self, s: Monomial) -> bool {
        self.circuits.iter().any(|c| c.divides(s))
    }

    /// Size of a maximal independent subset of `s`, built greedily.
    pub fn rank_of(&self, s: Monomial) -> usize {
        let mut basis = Monomial::ONE;
        for k in s.indices() {
            let next = basis.with(k);
            if !self.is_dependent(next) {
                basis = next;
            }
        }
        basis.degree()
    }

    /// Rank-2 flats with at least `min_multiplicity` elements, as sorted index
    /// lists with their sizes.
    pub fn rank2_flats(&self, min_multiplicity: usize) -> Vec<(Vec<usize>, usize)> {
        let mut flats = BTreeSet::new();
        for i in 1..=self.n {
            for j in i + 1..=self.n {
                let pair = Monomial::var(i).with(j);
                if self.rank_of(pair) != 2 {
                    continue;
                }
                let flat: Vec<usize> = (1..=self.n).filter(|&k| self.rank_of(pair.with(k)) == 2).collect();
                flats.insert(flat);
            }
        }
        flats
            .into_iter()
            .filter(|f| f.len() >= min_multiplicity)
            .map(|f| {
                let size = f.len();
                (f, size)
            })
            .collect()
    }

    /// Connected components under "lie in a common circuit", each sorted, in
    /// order of their smallest element.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..=self.n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        for c in &self.circuits {
            let idx = c.indices();
            for w in idx.windows(2) {
                let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for k in 1..=self.n {
            let r = find(&mut parent, k);
            groups.entry(r).or_default().push(k);
        }
        groups.into_values().collect()
    }

    /// The Orlik-Solomon ideal, generated by `∂e_C` over circuits `C`.
    pub fn os_ideal(&self) -> Result<GradedIdeal> {
        let gens = self
            .circuits
            .iter()
            .map(|&c| boundary(self.n, c))
            .collect::<Result<Vec<_>>>()?;
        if gens.is_empty() {
            return GradedIdeal::zero(self.n);
        }
        GradedIdeal::new(self.n, gens)
    }

    /// The same matroid with element `k` renamed `perm[k - 1]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Matroid> {
        let mut seen: Vec<usize> = perm.to_vec();
        seen.sort_unstable();
        if seen != (1..=self.n).collect::<Vec<_>>() {
            return Err(Error::InvalidArgument("relabeling is not a permutation".into()));
        }
        let circuits = self
            .circuits
            .iter()
            .map(|c| Monomial::from_indices(&c.indices().iter().map(|&k| perm[k - 1]).collect::<Vec<_>>()))
            .collect::<Result<Vec<_>>>()?;
        Matroid::from_circuits(self.n, circuits)
    }
}

/// `U_{p,q}`: rank `p` on `q` elements, circuits all `(p+1)`-subsets.
pub fn uniform_matroid(p: usize, q: usize) -> Result<Matroid> {
    if p > q {
        return Err(Error::InvalidArgument(format!("U_{{{p},{q}}} needs p <= q")));
    }
    if p == 0 && q > 0 {
        return Err(Error::InvalidArgument("U_{0,q} consists of loops".into()));
    }
    if q > MAX_VARS {
        return Err(Error::InvalidArgument(format!("at most {MAX_VARS} elements supported")));
    }
    let circuits = if p < q { subsets_of_size(q, p + 1) } else { Vec::new() };
    Ok(Matroid { n: q, circuits, rank: p })
}

/// `M_1 ⊕ M_2` with the elements of `M_2` shifted past those of `M_1`.
pub fn direct_sum(m1: &Matroid, m2: &Matroid) -> Result<Matroid> {
    let n = m1.n + m2.n;
    if n > MAX_VARS {
        return Err(Error::InvalidArgument(format!("at most {MAX_VARS} elements supported")));
    }
    let mut circuits = m1.circuits.clone();
    circuits.extend(m2.circuits.iter().map(|c| Monomial(c.0 << m1.n)));
    sort_circuits(&mut circuits);
    Ok(Matroid { n, circuits, rank: m1.rank + m2.rank })
}

fn sort_circuits(cs: &mut [Monomial]) {
    cs.sort_by_key(|c| (c.degree(), c.indices()));
}

/// All `size`-subsets of `1..=n` in lexicographic order.
pub fn subsets_of_size(n: usize, size: usize) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = crate::exterior::monomials_of_degree(n, size);
    out.sort_by_key(|m| m.indices());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn section_four() -> Arrangement {
        Arrangement::from_i64(
            3,
            &[&[1, 0, 0], &[0, 1, 0], &[1, -1, 0], &[0, 0, 1], &[2, 1, -1], &[1, 3, 1]],
        )
        .unwrap()
    }

    fn set(s: &str) -> Monomial {
        s.parse().unwrap()
    }

    #[test]
    fn three_lines() {
        let m = Arrangement::from_i64(2, &[&[1, 0], &[0, 1], &[1, -1]]).unwrap().matroid();
        assert_eq!(m.all_circuits(), &[set("123")]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn worked_arrangement() {
        let m = section_four().matroid();
        assert_eq!(m.rank(), 3);
        assert_eq!(m.circuits(3), vec![set("123")]);
        let mut expected = vec![set("123")];
        expected.extend(subsets_of_size(6, 4).into_iter().filter(|s| !set("123").divides(*s)));
        assert_eq!(m.circuits(4), expected);
        assert_eq!(m.rank2_flats(3), vec![(vec![1, 2, 3], 3)]);
        for s in subsets_of_size(6, 3) {
            assert_eq!(m.is_dependent(s), s == set("123"));
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            Arrangement::from_i64(2, &[&[1, 0], &[2, 0], &[0, 1]]),
            Err(Error::ProportionalForms(1, 2))
        );
        assert_eq!(
            Arrangement::from_i64(3, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]),
            Err(Error::NonEssential { rank: 2, ambient: 3 })
        );
        assert!(Arrangement::from_i64(2, &[&[0, 0], &[0, 1]]).is_err());
        assert!(Matroid::from_circuits(3, vec![set("1")]).is_err());
        assert!(Matroid::from_circuits(4, vec![set("12"), set("123")]).is_err());
        assert!(Matroid::from_circuits(4, vec![set("123"), set("234")]).is_err());
    }

    #[test]
    fn uniform_and_sums() {
        assert_eq!(uniform_matroid(2, 4).unwrap().circuits(9).len(), 4);
        assert!(uniform_matroid(3, 3).unwrap().all_circuits().is_empty());
        assert!(uniform_matroid(2, 2).unwrap().all_circuits().is_empty());
        let s = direct_sum(&uniform_matroid(2, 4).unwrap(), &uniform_matroid(1, 1).unwrap()).unwrap();
        assert_eq!(s.components(), vec![vec![1, 2, 3, 4], vec![5]]);
        assert_eq!(s.rank(), 3);
        assert_eq!(uniform_matroid(2, 4).unwrap().rank2_flats(3), vec![(vec![1, 2, 3, 4], 4)]);
        assert!(uniform_matroid(3, 5).unwrap().rank2_flats(3).is_empty());
        let u = direct_sum(&uniform_matroid(2, 3).unwrap(), &uniform_matroid(1, 1).unwrap()).unwrap();
        assert_eq!(crate::resolution::complexity_os(&u), 2);
    }

    #[test]
    fn circuit_ranks_agree_with_linear_algebra() {
        let a = section_four();
        let m = a.matroid();
        for s in 0..(1u32 << 6) {
            assert_eq!(m.rank_of(Monomial(s)), a.rank_of(Monomial(s)));
        }
        for c in m.all_circuits() {
            for k in c.indices() {
                assert!(!m.is_dependent(c.without(k)));
            }
        }
        assert!(Matroid::from_circuits(6, m.all_circuits().to_vec()).is_ok());
    }

    #[test]
    fn os_ideal_contains_all_boundaries() {
        let m = section_four().matroid();
        let j = m.os_ideal().unwrap();
        for s in 0..(1u32 << 6) {
            let f = Monomial(s);
            if f.degree() >= 2 && m.is_dependent(f) {
                assert!(j.contains(&boundary(6, f).unwrap()).unwrap(), "∂e_{} missing", f.render());
            }
        }
        assert!(uniform_matroid(4, 4).unwrap().os_ideal().unwrap().is_zero());
    }

    #[test]
    fn relabeling_preserves_dimensions() {
        let m = section_four().matroid();
        let j = m.os_ideal().unwrap();
        let p = m.relabel(&[4, 6, 1, 2, 5, 3]).unwrap();
        let jp = p.os_ideal().unwrap();
        for d in 0..=6 {
            assert_eq!(j.dim(d), jp.dim(d));
        }
    }
}
