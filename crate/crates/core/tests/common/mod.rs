//! Test corpora and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use exterior_resonance::exterior::{boundary, Monomial};
use exterior_resonance::ideal::GradedIdeal;
use exterior_resonance::matroid::Arrangement;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Pascal's triangle, independent of the library's binomial.
pub fn choose(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![1u128; row.len() + 1];
        for t in 1..row.len() {
            next[t] = row[t - 1] + row[t];
        }
        row = next;
    }
    row[k]
}

fn max_index(bits: u32) -> usize {
    32 - bits.leading_zeros() as usize
}

/// Every squarefree monomial of the monomial ideal generated by `gens`.
fn upward_closure(n: usize, gens: &BTreeSet<u32>) -> BTreeSet<u32> {
    (0u32..1 << n).filter(|&m| gens.iter().any(|&g| g & m == g)).collect()
}

/// The smallest stable monomial ideal containing `seeds`: close the set of
/// all monomials under `u ↦ e_j u / e_{max u}` for `j < max u`, `j ∉ u`.
pub fn stable_closure(n: usize, seeds: &[u32]) -> GradedIdeal {
    let mut all = upward_closure(n, &seeds.iter().copied().collect());
    loop {
        let mut added = BTreeSet::new();
        for &u in &all {
            let top = max_index(u);
            for j in 1..top {
                let bit = 1 << (j - 1);
                if u & bit == 0 {
                    let v = (u & !(1 << (top - 1))) | bit;
                    if !all.contains(&v) {
                        added.insert(v);
                    }
                }
            }
        }
        if added.is_empty() {
            break;
        }
        all.extend(added);
        all = upward_closure(n, &all);
    }
    let minimal: Vec<Monomial> = all
        .iter()
        .filter(|&&u| !all.iter().any(|&v| v != u && v & u == v))
        .map(|&u| Monomial(u))
        .collect();
    GradedIdeal::from_monomial_list(n, &minimal).expect("monomials fit in n variables")
}

/// Stability straight from the definition, over every monomial of `J`.
pub fn is_stable_oracle(j: &GradedIdeal) -> bool {
    let n = j.n();
    let member = |u: u32| j.contains_monomial(Monomial(u)).unwrap();
    (1u32..1 << n).filter(|&u| member(u)).all(|u| {
        let top = max_index(u);
        (1..top)
            .filter(|&k| u & (1 << (k - 1)) == 0)
            .all(|k| member((u & !(1 << (top - 1))) | (1 << (k - 1))))
    })
}

fn mono(s: &str) -> u32 {
    s.parse::<Monomial>().unwrap().0
}

/// Named stable ideals together with seeded random closures, `n <= 6`.
pub fn stable_corpus() -> Vec<(String, GradedIdeal)> {
    let named: &[(usize, &[&str])] = &[
        (5, &["12", "13", "14", "15", "234"]),
        (5, &["12", "13", "23"]),
        (3, &["12", "13", "23"]),
        (4, &["12"]),
        (4, &["12", "13"]),
        (4, &["12", "13", "14"]),
        (5, &["12", "13", "14", "234"]),
        (6, &["12", "13", "14", "15", "16"]),
        (6, &["12", "13", "23", "145"]),
        (5, &["123"]),
        (6, &["123", "124", "134", "234"]),
        (6, &["12", "134", "234"]),
        (5, &["12", "134", "234", "1235"]),
    ];
    let mut corpus: Vec<(String, GradedIdeal)> = named
        .iter()
        .map(|(n, gens)| {
            let seeds: Vec<u32> = gens.iter().map(|g| mono(g)).collect();
            (format!("n={n} {gens:?}"), stable_closure(*n, &seeds))
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x57AB1E);
    while corpus.len() < 40 {
        let n = rng.gen_range(4..=6);
        let count = rng.gen_range(1..=3);
        let seeds: Vec<u32> = (0..count)
            .map(|_| loop {
                let u: u32 = rng.gen_range(1..1u32 << n);
                if (2..=3).contains(&u.count_ones()) {
                    break u;
                }
            })
            .collect();
        let j = stable_closure(n, &seeds);
        let label = format!("n={n} closure of {:?}", seeds.iter().map(|&u| Monomial(u).to_string()).collect::<Vec<_>>());
        if !corpus.iter().any(|(_, k)| k.n() == n && k.same_ideal(&j)) {
            corpus.push((label, j));
        }
    }
    corpus
}

/// Ideals `(∂e_F : F ∈ S)` for a seeded family `S` of subsets of `[n]`.
pub fn pure_ideal(seed: u64) -> GradedIdeal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(4..=6);
    let count = rng.gen_range(1..=3);
    let gens = (0..count)
        .map(|_| loop {
            let f: u32 = rng.gen_range(1..1u32 << n);
            if (3..=4).contains(&f.count_ones()) {
                break boundary(n, Monomial(f)).unwrap();
            }
        })
        .collect();
    GradedIdeal::new(n, gens).unwrap()
}

pub fn arrangement(l: usize, forms: &[&[i64]]) -> Arrangement {
    Arrangement::from_i64(l, forms).unwrap()
}

/// Essential arrangements with `n <= 8`, labelled by their forms.
pub fn arrangement_corpus() -> Vec<(&'static str, Arrangement)> {
    vec![
        (
            "x, y, x-y, z, 2x+y-z, x+3y+z",
            arrangement(3, &[&[1, 0, 0], &[0, 1, 0], &[1, -1, 0], &[0, 0, 1], &[2, 1, -1], &[1, 3, 1]]),
        ),
        ("x, y, x-y, z, x-z", arrangement(3, &[&[1, 0, 0], &[0, 1, 0], &[1, -1, 0], &[0, 0, 1], &[1, 0, -1]])),
        ("x, y, z, x+y+z", arrangement(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]])),
        ("x, y, x+y", arrangement(2, &[&[1, 0], &[0, 1], &[1, 1]])),
        ("x, y, x+y, x-y", arrangement(2, &[&[1, 0], &[0, 1], &[1, 1], &[1, -1]])),
        ("x, y, z, x+y, x+z", arrangement(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 0], &[1, 0, 1]])),
        (
            "x, y, z, x+y+z, x+2y+3z",
            arrangement(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1], &[1, 2, 3]]),
        ),
        (
            "braid A_3: x, y, z, x-y, x-z, y-z",
            arrangement(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, -1, 0], &[1, 0, -1], &[0, 1, -1]]),
        ),
        (
            "x1, x2, x3, x4, x1+x2+x3+x4",
            arrangement(4, &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1], &[1, 1, 1, 1]]),
        ),
        (
            "x1, x2, x1+x2, x3, x4",
            arrangement(4, &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[1, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]),
        ),
        (
            "x, y, x-y, x+y, z, x+z, y+z",
            arrangement(
                3,
                &[&[1, 0, 0], &[0, 1, 0], &[1, -1, 0], &[1, 1, 0], &[0, 0, 1], &[1, 0, 1], &[0, 1, 1]],
            ),
        ),
        (
            "x, y, z, x+y, x+z, y+z, x+y+z",
            arrangement(
                3,
                &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 0], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]],
            ),
        ),
        (
            "x, y, z, x+y, x+2y, x+3y, z+x, z+2x+y",
            arrangement(
                3,
                &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 0], &[1, 2, 0], &[1, 3, 0], &[1, 0, 1], &[2, 1, 1]],
            ),
        ),
    ]
}
