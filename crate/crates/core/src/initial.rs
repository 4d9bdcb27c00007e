//! Revlex initial ideals and generic initial ideals.
//!
//! `E` is finite-dimensional, so `in(J)` is computed degree by degree: the
//! initial monomials of `J_d` are the leading positions of any echelon basis
//! of `J_d` with columns in increasing bitmask order. The construction is
//! certified by `dim in(J)_d = dim J_d` for every `d`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::exterior::{monomials_of_degree, piece_dim, ExtElement, LinearChange, Monomial};
use crate::ideal::GradedIdeal;
use crate::linalg::{random_invertible, Echelon, SparseVec};
use crate::scalar::{Field, FieldChoice, PrimeField, RationalField};
use crate::{Error, Result};

/// Monomials of `in(J)_d` for every `d`, from the leading positions of `J_d`.
fn initial_sets<F: Field>(field: &F, n: usize, pieces: &[Vec<ExtElement>]) -> Result<Vec<BTreeSet<Monomial>>> {
    let mut out = Vec::with_capacity(pieces.len());
    for (d, basis) in pieces.iter().enumerate() {
        let monos = monomials_of_degree(n, d);
        let mut ech = Echelon::new(field.clone(), piece_dim(n, d));
        for b in basis {
            let mut v: SparseVec<F::Elem> = Vec::with_capacity(b.num_terms());
            for (m, c) in b.terms() {
                let x = field.from_rational(c)?;
                if !field.is_zero(&x) {
                    v.push((m.colex_rank(), x));
                }
            }
            v.sort_by_key(|(i, _)| *i);
            ech.insert(&v);
        }
        out.push(ech.leads().into_iter().map(|c| monos[c]).collect());
    }
    Ok(out)
}

/// The monomial ideal with the given degree pieces, via its minimal generators.
pub(crate) fn ideal_from_sets(n: usize, sets: &[BTreeSet<Monomial>]) -> Result<GradedIdeal> {
    let mut gens = Vec::new();
    for (d, set) in sets.iter().enumerate() {
        for &u in set {
            let from_below = d > 0 && u.indices().into_iter().any(|k| sets[d - 1].contains(&u.without(k)));
            if !from_below {
                gens.push(u);
            }
        }
    }
    GradedIdeal::from_monomial_list(n, &gens)
}

fn certify(j: &GradedIdeal, sets: &[BTreeSet<Monomial>], result: &GradedIdeal) -> Result<()> {
    for (d, set) in sets.iter().enumerate() {
        if set.len() != j.dim(d) || result.dim(d) != j.dim(d) {
            return Err(Error::Inconsistency(format!(
                "initial ideal has dimension {} in degree {d}, expected {}",
                result.dim(d),
                j.dim(d)
            )));
        }
    }
    Ok(())
}

/// `in(J)` for degree reverse-lexicographic order with `e_1 > ... > e_n`.
pub fn initial_ideal(j: &GradedIdeal) -> Result<GradedIdeal> {
    let n = j.n();
    let sets: Vec<BTreeSet<Monomial>> = (0..=n)
        .map(|d| {
            let monos = monomials_of_degree(n, d);
            j.piece(d).pivot_columns().into_iter().map(|c| monos[c]).collect()
        })
        .collect();
    let result = ideal_from_sets(n, &sets)?;
    certify(j, &sets, &result)?;
    Ok(result)
}

/// Parameters of the random coordinate changes used for `gin`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GinOptions {
    pub seed: u64,
    /// Independent coordinate changes that must agree, at least 2.
    pub trials: usize,
    /// Entries of the coordinate changes lie in `[-bound, bound]`.
    pub bound: u64,
    /// How many times the bound is multiplied by 10 after a disagreement.
    pub escalations: usize,
    pub field: FieldChoice,
}

impl Default for GinOptions {
    fn default() -> Self {
        GinOptions {
            seed: 0,
            trials: 3,
            bound: 999,
            escalations: 1,
            field: FieldChoice::Rational,
        }
    }
}

/// One random coordinate change and the initial ideal it produced.
#[derive(Clone, Debug, Serialize)]
pub struct GinTrial {
    pub seed: u64,
    pub bound: u64,
    pub generators: Vec<String>,
    pub agrees: bool,
}

/// `gin(J)` together with the trials that established it.
#[derive(Clone, Debug)]
pub struct GinReport {
    pub ideal: GradedIdeal,
    pub trials: Vec<GinTrial>,
    pub bound: u64,
    pub field: String,
}

fn trial_seed(seed: u64, round: usize, trial: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add((round as u64) << 32)
        .wrapping_add(trial as u64 + 1)
}

pub(crate) fn transformed_initial_sets(j: &GradedIdeal, g: &LinearChange, field: &FieldChoice) -> Result<Vec<BTreeSet<Monomial>>> {
    let n = j.n();
    let mut cache = HashMap::new();
    let mut pieces = Vec::with_capacity(n + 1);
    for d in 0..=n {
        let images = j
            .basis(d)
            .iter()
            .map(|b| g.apply_cached(b, &mut cache))
            .collect::<Result<Vec<_>>>()?;
        pieces.push(images);
    }
    match field {
        FieldChoice::Rational => initial_sets(&RationalField, n, &pieces),
        FieldChoice::Prime(p) => initial_sets(p, n, &pieces),
    }
}

/// `gin(J)`: the initial ideal after a generic change of coordinates.
///
/// Runs `trials` seeded coordinate changes; the result is accepted when all
/// of them produce the same strongly stable initial ideal. On disagreement the
/// entry bound grows tenfold, up to `escalations` times.
pub fn gin(j: &GradedIdeal, opts: &GinOptions) -> Result<GinReport> {
    if opts.trials < 2 {
        return Err(Error::InvalidArgument("gin needs at least 2 trials".into()));
    }
    let n = j.n();
    let mut bound = opts.bound;
    let mut log = Vec::new();
    for round in 0..=opts.escalations {
        let mut results: Vec<Vec<BTreeSet<Monomial>>> = Vec::with_capacity(opts.trials);
        let mut seeds = Vec::with_capacity(opts.trials);
        for t in 0..opts.trials {
            let seed = trial_seed(opts.seed, round, t);
            let g = LinearChange::new(random_invertible(n, bound, seed)?)?;
            results.push(transformed_initial_sets(j, &g, &opts.field)?);
            seeds.push(seed);
        }
        let agreed = results.iter().all(|r| r == &results[0]);
        let mut ideals = Vec::with_capacity(results.len());
        for (sets, seed) in results.iter().zip(&seeds) {
            let ideal = ideal_from_sets(n, sets)?;
            log.push(GinTrial {
                seed: *seed,
                bound,
                generators: ideal
                    .minimal_monomial_generators()?
                    .iter()
                    .map(|m| m.to_string())
                    .collect(),
                agrees: agreed,
            });
            ideals.push(ideal);
        }
        if agreed {
            let ideal = ideals.swap_remove(0);
            certify(j, &results[0], &ideal)?;
            if ideal.is_strongly_stable()? {
                return Ok(GinReport {
                    ideal,
                    trials: log,
                    bound,
                    field: opts.field.describe(),
                });
            }
        }
        bound = bound.saturating_mul(10);
    }
    Err(Error::NoGenericAgreement {
        trials: opts.trials,
        bound: bound / 10,
    })
}

/// `t = max{max(u) : u ∈ G(J)}` and its restriction `t_p` to each generator
/// degree `p`.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize)]
pub struct GeneratorIndex {
    pub t: usize,
    pub per_degree: BTreeMap<usize, usize>,
}

impl GeneratorIndex {
    /// `t_p`, zero when `G(J)` has no generator of degree `p`.
    pub fn t_p(&self, p: usize) -> usize {
        self.per_degree.get(&p).copied().unwrap_or(0)
    }
}

pub fn max_generator_index(j: &GradedIdeal) -> Result<GeneratorIndex> {
    let mut out = GeneratorIndex::default();
    for u in j.minimal_monomial_generators()? {
        let m = u.max_index();
        out.t = out.t.max(m);
        let e = out.per_degree.entry(u.degree()).or_insert(0);
        *e = (*e).max(m);
    }
    Ok(out)
}

/// `in(g(J))` for one explicit coordinate change, without agreement checks.
pub fn initial_after_change(j: &GradedIdeal, g: &LinearChange) -> Result<GradedIdeal> {
    let sets = transformed_initial_sets(j, g, &FieldChoice::Rational)?;
    let result = ideal_from_sets(j.n(), &sets)?;
    certify(j, &sets, &result)?;
    Ok(result)
}

/// `in(J)` computed over a prime field, for cross-checks.
pub fn initial_ideal_mod(j: &GradedIdeal, p: &PrimeField) -> Result<GradedIdeal> {
    let n = j.n();
    let pieces: Vec<Vec<ExtElement>> = (0..=n).map(|d| j.basis(d)).collect();
    let sets = initial_sets(p, n, &pieces)?;
    ideal_from_sets(n, &sets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{boundary, product_form};

    fn mono(s: &str) -> Monomial {
        s.parse().unwrap()
    }

    fn example_54() -> GradedIdeal {
        GradedIdeal::from_monomials(5, &["12", "13", "14", "15", "234"]).unwrap()
    }

    #[test]
    fn monomial_ideals_are_their_own_initial_ideal() {
        let j = example_54();
        assert!(initial_ideal(&j).unwrap().same_ideal(&j));
    }

    #[test]
    fn leading_monomial_of_triangle_boundary() {
        let j = GradedIdeal::new(3, vec![product_form(3, mono("123")).unwrap()]).unwrap();
        let init = initial_ideal(&j).unwrap();
        // e_{23} - e_{13} + e_{12}: the revlex-largest term is e_{12}
        assert_eq!(init.minimal_monomial_generators().unwrap(), vec![mono("12")]);
        // with e_1 removed from the picture the lead is the one avoiding the smallest index
        let j = GradedIdeal::new(3, vec![ExtElement::parse(3, "e_{23} - e_{13}").unwrap()]).unwrap();
        assert_eq!(initial_ideal(&j).unwrap().minimal_monomial_generators().unwrap(), vec![mono("13")]);
    }

    #[test]
    fn order_sanity() {
        use std::cmp::Ordering::Greater;
        assert_eq!(mono("12").revlex_cmp(mono("13")), Greater);
        assert_eq!(mono("13").revlex_cmp(mono("23")), Greater);
    }

    #[test]
    fn gin_of_principal_pure_ideal() {
        let j = GradedIdeal::new(4, vec![boundary(4, mono("123")).unwrap()]).unwrap();
        let report = gin(&j, &GinOptions::default()).unwrap();
        assert_eq!(report.ideal.minimal_monomial_generators().unwrap(), vec![mono("12")]);
        assert_eq!(report.trials.len(), 3);
        assert!(report.trials.iter().all(|t| t.agrees));
    }

    #[test]
    fn gin_fixes_strongly_stable_ideals() {
        let j = example_54();
        let report = gin(&j, &GinOptions::default()).unwrap();
        assert!(report.ideal.same_ideal(&j));
    }

    #[test]
    fn gin_over_prime_field_agrees() {
        let j = GradedIdeal::new(
            5,
            vec![boundary(5, mono("123")).unwrap(), boundary(5, mono("145")).unwrap()],
        )
        .unwrap();
        let q = gin(&j, &GinOptions::default()).unwrap();
        let opts = GinOptions {
            field: FieldChoice::Prime(PrimeField::default()),
            ..GinOptions::default()
        };
        let p = gin(&j, &opts).unwrap();
        assert!(q.ideal.same_ideal(&p.ideal));
    }

    #[test]
    fn gin_rejects_single_trial() {
        let opts = GinOptions {
            trials: 1,
            ..GinOptions::default()
        };
        assert!(gin(&example_54(), &opts).is_err());
    }

    #[test]
    fn generator_indices() {
        let idx = max_generator_index(&example_54()).unwrap();
        assert_eq!((idx.t, idx.t_p(2), idx.t_p(3), idx.t_p(4)), (5, 5, 4, 0));
        let j = GradedIdeal::from_monomials(4, &["12"]).unwrap();
        assert_eq!(max_generator_index(&j).unwrap().t, 2);
        let forms: Vec<_> = (1..=4).map(|k| ExtElement::var(6, k)).collect();
        let sq = GradedIdeal::power_of_linear_ideal(&forms, 3).unwrap();
        assert_eq!(max_generator_index(&sq).unwrap().t, 4);
    }

    #[test]
    fn initial_dimensions_match_after_change() {
        let j = GradedIdeal::new(
            5,
            vec![boundary(5, mono("123")).unwrap(), boundary(5, mono("2345")).unwrap()],
        )
        .unwrap();
        let g = LinearChange::new(random_invertible(5, 9, 3).unwrap()).unwrap();
        let init = initial_after_change(&j, &g).unwrap();
        for d in 0..=5 {
            assert_eq!(init.dim(d), j.dim(d));
        }
        let modp = initial_ideal_mod(&j, &PrimeField::default()).unwrap();
        assert!(modp.same_ideal(&initial_ideal(&j).unwrap()));
    }
}
