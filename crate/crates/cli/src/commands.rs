//! One function per subcommand, each producing text and JSON renderings.

use std::ops::RangeInclusive;

use exterior_resonance::demo::run_demo;
use exterior_resonance::graph::{check_conjecture_b, ConjectureSubject};
use exterior_resonance::ideal::GradedIdeal;
use exterior_resonance::initial::{gin, GinOptions};
use exterior_resonance::io::{arrangement_to_json, ideal_to_json, matroid_to_json};
use exterior_resonance::matroid::Matroid;
use exterior_resonance::resolution::{betti_table, regularity, ResolutionOptions};
use exterior_resonance::resonance::{
    in_resonance, r1_components_clique_union, r1_irreducible_matroid, r1_stable, resonance_probe, Method,
    ResonanceReport, Verdict,
};
use exterior_resonance::scalar::FieldChoice;
use exterior_resonance::{Error, Result};
use serde_json::{json, Value};

use crate::input::Subject;

pub struct Output {
    pub text: String,
    pub json: Value,
    /// False when the command ran but its checks failed.
    pub ok: bool,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output { text, json, ok: true }
    }
}

fn sets(sets: &[Vec<usize>]) -> String {
    sets.iter()
        .map(|s| format!("{{{}}}", s.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")))
        .collect::<Vec<_>>()
        .join(" ")
}

fn generator_lines(j: &GradedIdeal) -> String {
    j.generators().iter().map(|g| format!("  {g}\n")).collect()
}

pub fn os_ideal(subject: &Subject) -> Result<Output> {
    let m = subject
        .matroid()
        .ok_or_else(|| Error::InvalidArgument(format!("os-ideal needs an arrangement or matroid, got a {}", subject.kind())))?;
    let j = m.os_ideal()?;
    let circuits: Vec<Vec<usize>> = m.all_circuits().iter().map(|c| c.indices()).collect();
    let flats = m.rank2_flats(3);
    let mut text = match subject {
        Subject::Arrangement(a) => format!("{} hyperplanes in K^{}, rank {}\n", a.n(), a.l(), m.rank()),
        _ => format!("matroid on {} elements, rank {}\n", m.n(), m.rank()),
    };
    text.push_str(&format!("circuits ({}): {}\n", circuits.len(), sets(&circuits)));
    let flat_sets: Vec<Vec<usize>> = flats.iter().map(|(f, _)| f.clone()).collect();
    text.push_str(&format!("rank-2 flats on >= 3 hyperplanes ({}): {}\n", flats.len(), sets(&flat_sets)));
    text.push_str(&format!("generators of J ({}):\n{}", j.generators().len(), generator_lines(&j)));
    let mut json = json!({
        "rank": m.rank(),
        "circuits": circuits,
        "flats": flats.iter().map(|(f, k)| json!({"flat": f, "multiplicity": k})).collect::<Vec<_>>(),
        "ideal": ideal_to_json(&j),
    });
    json["input"] = match subject {
        Subject::Arrangement(a) => arrangement_to_json(a),
        _ => matroid_to_json(&m),
    };
    Ok(Output::ok(text, json))
}

pub struct BettiArgs {
    pub i_max: usize,
    pub quotient: bool,
    pub regularity: bool,
    pub opts: ResolutionOptions,
    pub gin_opts: GinOptions,
}

pub fn betti(subject: &Subject, args: &BettiArgs) -> Result<Output> {
    let j = subject.ideal()?;
    let table = betti_table(&j, args.i_max, &args.opts)?;
    let shown = if args.quotient { table.to_quotient() } else { table.clone() };
    let name = if args.quotient { "E/J" } else { "J" };
    let mut text = format!(
        "Betti numbers of {name}, n = {}, over {}; column i, row j - i\n{}",
        j.n(),
        args.opts.field.describe(),
        shown.render()
    );
    let mut json = json!({
        "n": j.n(),
        "field": args.opts.field.describe(),
        "table": shown.to_json(),
    });
    if args.regularity {
        let reg = regularity(&j, args.i_max, &args.gin_opts, &args.opts)?;
        text.push_str(&format!(
            "regularity {} (gin generators up to degree {}, table strands up to {})\n",
            reg.value, reg.from_gin, reg.from_table
        ));
        json["regularity"] = json!(reg.value);
    }
    Ok(Output::ok(text, json))
}

pub fn gin_cmd(subject: &Subject, opts: &GinOptions) -> Result<Output> {
    let j = subject.ideal()?;
    let report = gin(&j, opts)?;
    let gens: Vec<String> = report
        .ideal
        .minimal_monomial_generators()?
        .iter()
        .map(|u| u.to_string())
        .collect();
    let mut text = format!(
        "gin(J) = ({})\nstrongly stable: {}\nagreement: {} coordinate changes with entries in [-{b}, {b}] over {}\n",
        gens.join(", "),
        report.ideal.is_strongly_stable()?,
        opts.trials,
        report.field,
        b = report.bound,
    );
    for t in &report.trials {
        let mark = if t.agrees { "agrees" } else { "differs" };
        text.push_str(&format!("  seed {:#018x} bound {}: {} generators, {mark}\n", t.seed, t.bound, t.generators.len()));
    }
    let json = json!({
        "gin": ideal_to_json(&report.ideal),
        "generators": gens,
        "strongly_stable": report.ideal.is_strongly_stable()?,
        "bound": report.bound,
        "field": report.field,
        "trials": report.trials,
    });
    Ok(Output::ok(text, json))
}

pub struct ResonanceArgs {
    pub p: usize,
    pub samples: usize,
    pub seed: u64,
    pub i_max: usize,
    pub opts: ResolutionOptions,
    pub gin_opts: GinOptions,
}

fn matroid_resonance(m: &Matroid, args: &ResonanceArgs) -> Result<(ResonanceReport, Vec<String>)> {
    let mut notes = Vec::new();
    let v = r1_irreducible_matroid(m, args.i_max, &args.gin_opts, &args.opts)?;
    if args.opts.field != FieldChoice::Rational {
        let rational = ResolutionOptions {
            field: FieldChoice::Rational,
            ..args.opts.clone()
        };
        let gin_rational = GinOptions {
            field: FieldChoice::Rational,
            ..args.gin_opts.clone()
        };
        let again = r1_irreducible_matroid(m, args.i_max, &gin_rational, &rational)?;
        if again.irreducible != v.irreducible {
            return Err(Error::Inconsistency("prime and rational verdicts differ".into()));
        }
        notes.push("verdict re-verified over Q".to_string());
    }
    if !v.irreducible || v.local.is_empty() {
        notes.push("only local components are listed".to_string());
    }
    let report = ResonanceReport {
        p: 1,
        components: v.local.iter().map(|c| c.basis.clone()).collect(),
        verdict: Some(Verdict {
            irreducible: v.irreducible,
            method: Method::TwoLinearCriterion,
        }),
        evidence: Vec::new(),
        seed: None,
        dim_rank_variety: None,
    };
    Ok((report, notes))
}

pub fn resonance(subject: &Subject, args: &ResonanceArgs) -> Result<Output> {
    let j = subject.ideal()?;
    let mut notes = Vec::new();
    let report = match subject {
        Subject::Arrangement(_) | Subject::Matroid(_) if args.p == 1 => {
            let (report, n) = matroid_resonance(&subject.matroid().expect("arrangement or matroid"), args)?;
            notes = n;
            report
        }
        Subject::Graph(g) if args.p == 1 && g.clique_blocks().is_some() => {
            let components = r1_components_clique_union(g)?;
            ResonanceReport {
                p: 1,
                verdict: Some(Verdict {
                    irreducible: components.len() <= 1,
                    method: Method::LocalOnly,
                }),
                components,
                evidence: Vec::new(),
                seed: None,
                dim_rank_variety: None,
            }
        }
        Subject::Ideal { ideal, .. } if args.p == 1 && ideal.is_monomial() && ideal.is_stable()? => r1_stable(ideal)?,
        _ => {
            notes.push("sampled membership only; no components are claimed".to_string());
            resonance_probe(&j, args.p, args.samples, args.seed)?
        }
    };
    for c in &report.components {
        for u in c {
            if !in_resonance(&j, u, report.p)? {
                return Err(Error::Inconsistency(format!("basis vector {u} is not in R^{}", report.p)));
            }
        }
    }
    let mut text = report.render();
    for n in &notes {
        text.push_str(&format!("note: {n}\n"));
    }
    let mut json = report.to_json();
    json["notes"] = json!(notes);
    Ok(Output::ok(text, json))
}

pub fn conjecture_b(subject: &Subject, range: RangeInclusive<usize>, opts: &ResolutionOptions) -> Result<Output> {
    let report = match subject {
        Subject::Graph(g) => check_conjecture_b(ConjectureSubject::Graph(g), range, opts)?,
        Subject::Ideal { ideal, h } => check_conjecture_b(
            ConjectureSubject::Ideal {
                ideal,
                h: h.clone(),
            },
            range,
            opts,
        )?,
        other => {
            return Err(Error::InvalidArgument(format!(
                "conjecture-b needs a graph or an ideal, got a {}",
                other.kind()
            )))
        }
    };
    let json = serde_json::to_value(&report).map_err(|e| Error::Inconsistency(e.to_string()))?;
    Ok(Output::ok(report.render(), json))
}

pub fn demo(gin_opts: &GinOptions, opts: &ResolutionOptions, samples: usize, seed: u64) -> Result<Output> {
    let ledger = run_demo(gin_opts, opts, samples, seed)?;
    Ok(Output {
        text: ledger.render(),
        json: ledger.to_json(),
        ok: ledger.all_passed(),
    })
}
