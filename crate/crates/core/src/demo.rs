//! The worked-example ledger: each check recomputes a known value and
//! compares it with the expected one.

use std::fmt;

use serde::Serialize;

use crate::exterior::ExtElement;
use crate::graph::{disjoint_union_complete, transfer_to_exterior};
use crate::ideal::GradedIdeal;
use crate::initial::GinOptions;
use crate::matroid::{uniform_matroid, Arrangement};
use crate::resolution::{
    betti_table, complexity_os, has_linear_resolution, is_componentwise_linear, regularity, stable_betti,
    ResolutionOptions,
};
use crate::resonance::{
    check_mlr, check_property_star, local_components, r1_components_clique_union, r1_irreducible_os, r1_stable,
};
use crate::scalar::binomial;
use crate::Result;

/// One recomputed value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DemoCheck {
    pub group: &'static str,
    pub name: String,
    pub expected: String,
    pub found: String,
    pub passed: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct DemoLedger {
    pub checks: Vec<DemoCheck>,
}

impl DemoLedger {
    fn record<T: fmt::Debug + PartialEq>(&mut self, group: &'static str, name: impl Into<String>, expected: T, found: T) {
        self.checks.push(DemoCheck {
            group,
            name: name.into(),
            passed: expected == found,
            expected: format!("{expected:?}"),
            found: format!("{found:?}"),
        });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut group = "";
        for c in &self.checks {
            if c.group != group {
                group = c.group;
                out.push_str(&format!("[{group}]\n"));
            }
            let mark = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("  {mark}  {}: {}", c.name, c.found));
            if !c.passed {
                out.push_str(&format!(" (expected {})", c.expected));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "{} checks, {} passed, {} failed\n",
            self.checks.len(),
            self.checks.len() - self.failures(),
            self.failures()
        ));
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "checks": self.checks,
            "passed": self.checks.len() - self.failures(),
            "failed": self.failures(),
        })
    }
}

/// `x, y, x - y, z, 2x + y - z, x + 3y + z` in `K^3`.
pub fn section_four_arrangement() -> Arrangement {
    Arrangement::from_i64(
        3,
        &[&[1, 0, 0], &[0, 1, 0], &[1, -1, 0], &[0, 0, 1], &[2, 1, -1], &[1, 3, 1]],
    )
    .expect("the forms are pairwise independent and span K^3")
}

/// `x, y, x - y, z, x - z`: two rank-2 flats of size 3 through the first form.
pub fn two_flat_arrangement() -> Arrangement {
    Arrangement::from_i64(3, &[&[1, 0, 0], &[0, 1, 0], &[1, -1, 0], &[0, 0, 1], &[1, 0, -1]])
        .expect("the forms are pairwise independent and span K^3")
}

/// `(e_{12}, e_{13}, e_{14}, e_{15}, e_{234})` in five variables.
pub fn example_stable_ideal() -> GradedIdeal {
    GradedIdeal::from_monomials(5, &["12", "13", "14", "15", "234"]).expect("valid monomials")
}

/// `Σ_{k=1}^{4} C(i + k, k)`, the linear strand of [`example_stable_ideal`].
pub fn example_strand_formula(i: usize) -> u64 {
    (1..=4).map(|k| binomial((i + k) as u64, k as u64) as u64).sum()
}

fn difference(n: usize, i: usize, j: usize) -> ExtElement {
    let mut c = vec![0i64; n];
    c[i - 1] = 1;
    c[j - 1] = -1;
    ExtElement::linear_form_i64(&c)
}

fn section_four(ledger: &mut DemoLedger, gin_opts: &GinOptions, opts: &ResolutionOptions) -> Result<()> {
    const G: &str = "arrangement x, y, x-y, z, 2x+y-z, x+3y+z";
    let a = section_four_arrangement();
    let m = a.matroid();
    ledger.record(G, "rank", 3, m.rank());
    let flats: Vec<Vec<usize>> = m.rank2_flats(3).into_iter().map(|(f, _)| f).collect();
    ledger.record(G, "rank-2 flats on >= 3 lines", vec![vec![1, 2, 3]], flats);
    let local = local_components(&a);
    let basis: Vec<String> = local.iter().flat_map(|c| c.basis.iter().map(|u| u.to_string())).collect();
    let expected: Vec<String> = [difference(6, 2, 1), difference(6, 3, 1)].iter().map(|u| u.to_string()).collect();
    ledger.record(G, "local component basis", expected, basis);
    let irreducible = r1_irreducible_os(&a, 4, gin_opts, opts)?;
    ledger.record(G, "R^1 irreducible (2-linear criterion)", true, irreducible.irreducible);
    let j = m.os_ideal()?;
    ledger.record(G, "componentwise linear", true, is_componentwise_linear(&j, 4, gin_opts, opts)?.linear);
    let mut linear_in = Vec::new();
    for d in 1..=j.n() {
        if has_linear_resolution(&j, d, 4, gin_opts, opts)?.linear {
            linear_in.push(d);
        }
    }
    ledger.record(G, "degrees with a linear resolution", Vec::<usize>::new(), linear_in);
    ledger.record(G, "regularity", 3, regularity(&j, 4, gin_opts, opts)?.value);
    let two = two_flat_arrangement();
    let v = r1_irreducible_os(&two, 4, gin_opts, opts)?;
    ledger.record(G, "x, y, x-y, z, x-z: (irreducible, local components)", (false, 2), (v.irreducible, v.local.len()));
    Ok(())
}

fn stable_example(ledger: &mut DemoLedger, opts: &ResolutionOptions) -> Result<()> {
    const G: &str = "stable ideal (e12, e13, e14, e15, e234)";
    let j = example_stable_ideal();
    let table = betti_table(&j, 5, opts)?;
    let expected: Vec<u64> = (0..=5).map(example_strand_formula).collect();
    ledger.record(G, "linear strand i = 0..5", expected.clone(), table.linear_strand(2));
    let from_formula = (0..=5)
        .map(|i| stable_betti(&j, i, i + 2).map(|b| b as u64))
        .collect::<Result<Vec<_>>>()?;
    ledger.record(G, "stable Betti formula i = 0..5", expected.clone(), from_formula);
    let below: Vec<bool> = (0..=5)
        .map(|i| (expected[i] as u128) < (i as u128 + 1) * binomial(i as u64 + 5, i as u64 + 2))
        .collect();
    ledger.record(G, "strictly below (i+1) C(i+5, i+2)", vec![true; 6], below);
    let components = r1_stable(&j)?.components;
    let star = check_property_star(&j, &components)?;
    ledger.record(G, "property (*) holds", false, star.holds());
    let witness = (ExtElement::var(5, 4), ExtElement::var(5, 5));
    ledger.record(G, "witness e4 ∧ e5 ∉ J", true, star.failing_pairs.contains(&witness));
    Ok(())
}

fn clique_union(ledger: &mut DemoLedger, opts: &ResolutionOptions) -> Result<()> {
    const G: &str = "K_3 ⊔ K_2";
    let g = disjoint_union_complete(&[3, 2])?;
    let j = g.edge_ideal()?;
    let table = betti_table(&j, 3, opts)?;
    ledger.record(G, "linear strand i = 0..3", vec![4, 10, 18, 28], table.linear_strand(2));
    let transfer = (0..=3).map(|i| transfer_to_exterior(&g, i)).collect::<Result<Vec<_>>>()?;
    ledger.record(G, "transfer from the polynomial ring", vec![4, 10, 18, 28], transfer);
    let components = r1_components_clique_union(&g)?;
    ledger.record(G, "R^1 component dimensions", vec![3, 2], components.iter().map(Vec::len).collect());
    ledger.record(G, "property (*) holds", true, check_property_star(&j, &components)?.holds());
    Ok(())
}

fn uniform_probes(ledger: &mut DemoLedger, samples: usize, seed: u64) -> Result<()> {
    const G: &str = "U_{d,n-f} ⊕ U_{f,f} probes";
    for (label, d, n, f) in [("U_{2,4}", 2, 4, 0), ("U_{2,5}", 2, 5, 0), ("U_{3,5}", 3, 5, 0), ("U_{2,4} ⊕ U_{1,1}", 2, 5, 1)] {
        let v = check_mlr(d, n, f, samples, seed)?;
        let violations: usize = v.vanishing.iter().map(|(_, _, k)| k).sum();
        ledger.record(G, format!("{label}: sampled R^p hits for p <= d-2"), 0, violations);
        let basis_ok = v.basis.iter().all(|(_, ok)| *ok);
        ledger.record(G, format!("{label}: e_i - e_1 in R^(d-1)"), true, basis_ok);
        ledger.record(G, format!("{label}: span dimension"), n - f - 1, v.span_dim);
        ledger.record(G, format!("{label}: complexity"), n - v.components, v.complexity);
    }
    let u24 = uniform_matroid(2, 4)?;
    ledger.record(G, "U_{2,4}: complexity of E/J", 3, complexity_os(&u24));
    Ok(())
}

/// Recomputes every worked example. Errors are computation failures; a
/// wrong value shows up as a failed check.
pub fn run_demo(gin_opts: &GinOptions, opts: &ResolutionOptions, samples: usize, seed: u64) -> Result<DemoLedger> {
    let mut ledger = DemoLedger::default();
    section_four(&mut ledger, gin_opts, opts)?;
    stable_example(&mut ledger, opts)?;
    clique_union(&mut ledger, opts)?;
    uniform_probes(&mut ledger, samples, seed)?;
    Ok(ledger)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strand_formula() {
        let v: Vec<u64> = (0..=5).map(example_strand_formula).collect();
        assert_eq!(v, vec![4, 14, 34, 69, 125, 209]);
    }

    #[test]
    fn demo_passes() {
        let ledger = run_demo(&GinOptions::default(), &ResolutionOptions::default(), 20, 1).unwrap();
        assert!(ledger.all_passed(), "{}", ledger.render());
        assert!(ledger.render().ends_with("0 failed\n"));
    }

    #[test]
    fn failed_check_is_reported() {
        let mut ledger = DemoLedger::default();
        ledger.record("g", "x", 1, 2);
        assert!(!ledger.all_passed());
        assert!(ledger.render().contains("FAIL  x: 2 (expected 1)"));
        assert_eq!(ledger.to_json()["failed"], 1);
    }
}
