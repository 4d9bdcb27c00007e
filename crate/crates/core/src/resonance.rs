//! Resonance varieties `R^p(A) = {u ∈ A_1 : H^p(A, u) ≠ 0}` of `A = E/J`.
//!
//! Membership is decided exactly from the Aomoto complex
//! `A_{p-1} → A_p → A_{p+1}` (left multiplication by `u`). Components are only
//! reported when a theorem produces them: stable ideals, local components of
//! arrangements, clique unions. Everything else is sampled evidence and is
//! tagged as such.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::exterior::ExtElement;
use crate::graph::Graph;
use crate::ideal::GradedIdeal;
use crate::initial::{max_generator_index, GinOptions};
use crate::linalg::MatrixExact;
use crate::matroid::{direct_sum, uniform_matroid, Arrangement, Matroid};
use crate::resolution::{complexity_os, complexity_stable, has_linear_resolution, LinearVerdict, ResolutionOptions};
use crate::scalar::Rational;
use crate::{Error, Result};

/// How an irreducibility verdict was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    StableTheorem,
    TwoLinearCriterion,
    LocalOnly,
    Sampled,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::StableTheorem => "stable-theorem",
            Method::TwoLinearCriterion => "two-linear-criterion",
            Method::LocalOnly => "local-only",
            Method::Sampled => "sampled",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub irreducible: bool,
    pub method: Method,
}

/// Components of a resonance variety with the evidence behind them.
#[derive(Clone, Debug)]
pub struct ResonanceReport {
    pub p: usize,
    /// Bases of the component subspaces of `E_1`.
    pub components: Vec<Vec<ExtElement>>,
    pub verdict: Option<Verdict>,
    /// Sampled `(u, h^p(u))` pairs.
    pub evidence: Vec<(ExtElement, usize)>,
    pub seed: Option<u64>,
    pub dim_rank_variety: Option<usize>,
}

impl ResonanceReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "p": self.p,
            "components": self.components.iter()
                .map(|c| c.iter().map(|u| u.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "irreducible": self.verdict.as_ref().map(|v| v.irreducible),
            "method": self.verdict.as_ref().map(|v| v.method.tag()),
            "evidence": self.evidence.iter().map(|(u, h)| json!([u.to_string(), h])).collect::<Vec<_>>(),
            "seed": self.seed,
            "dim_V_E": self.dim_rank_variety,
        })
    }

    pub fn render(&self) -> String {
        let mut out = format!("R^{}: {} component(s)\n", self.p, self.components.len());
        for (k, c) in self.components.iter().enumerate() {
            let basis: Vec<String> = c.iter().map(|u| u.to_string()).collect();
            out.push_str(&format!("  component {}: span{{{}}}\n", k + 1, basis.join(", ")));
        }
        if let Some(v) = &self.verdict {
            let word = if v.irreducible { "irreducible" } else { "reducible" };
            out.push_str(&format!("verdict: {word} [{}]\n", v.method.tag()));
        }
        if !self.evidence.is_empty() {
            let hits = self.evidence.iter().filter(|(_, h)| *h > 0).count();
            out.push_str(&format!(
                "samples: {} with h^{} > 0 out of {} (seed {})\n",
                hits,
                self.p,
                self.evidence.len(),
                self.seed.unwrap_or(0)
            ));
        }
        if let Some(d) = self.dim_rank_variety {
            out.push_str(&format!("dim V_E = {d}\n"));
        }
        out
    }
}

/// `dim H^p(A, u) = dim ker(u·: A_p → A_{p+1}) - rank(u·: A_{p-1} → A_p)`.
pub fn aomoto_h(j: &GradedIdeal, u: &ExtElement, p: usize) -> Result<usize> {
    if p > j.n() {
        return Err(Error::InvalidArgument(format!("degree {p} exceeds n = {}", j.n())));
    }
    if u.is_zero() {
        return Ok(j.quotient_dim(p));
    }
    let out = j.mult_map(u, p)?;
    let kernel = j.quotient_dim(p) - out.rank();
    let image = if p == 0 { 0 } else { j.mult_map(u, p - 1)?.rank() };
    kernel
        .checked_sub(image)
        .ok_or_else(|| Error::Inconsistency(format!("u·u ≠ 0 in the Aomoto complex at degree {p}")))
}

/// `u ∈ R^p(E/J)`, with `0` always a member.
pub fn in_resonance(j: &GradedIdeal, u: &ExtElement, p: usize) -> Result<bool> {
    Ok(u.is_zero() || aomoto_h(j, u, p)? > 0)
}

/// Seeded 1-forms with integer coefficients in `[-5, 5]`, never zero.
pub struct FormSampler {
    rng: ChaCha8Rng,
    n: usize,
}

impl FormSampler {
    pub fn new(n: usize, seed: u64) -> Self {
        FormSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            n,
        }
    }

    /// A nonzero form supported on `support` (1-based indices).
    pub fn supported_on(&mut self, support: &[usize]) -> ExtElement {
        loop {
            let mut coeffs = vec![0i64; self.n];
            for &k in support {
                coeffs[k - 1] = self.rng.gen_range(-5..=5);
            }
            if coeffs.iter().any(|&c| c != 0) {
                return ExtElement::linear_form_i64(&coeffs);
            }
        }
    }

    /// A nonzero combination of `basis`.
    pub fn in_span(&mut self, basis: &[ExtElement]) -> Result<ExtElement> {
        loop {
            let mut u = ExtElement::zero(self.n);
            for b in basis {
                let c = Rational::from_integer(self.rng.gen_range(-5..=5));
                u = u.checked_add(&b.scale(&c))?;
            }
            if !u.is_zero() || basis.is_empty() {
                return Ok(u);
            }
        }
    }

    /// A form in span{e_1..e_t} plus a nonzero part on `{t+1..n}`.
    pub fn meeting_tail(&mut self, t: usize) -> ExtElement {
        loop {
            let u = self.supported_on(&(1..=self.n).collect::<Vec<_>>());
            if u.terms().any(|(m, _)| m.max_index() > t) {
                return u;
            }
        }
    }
}

fn coordinate_span(n: usize, range: impl IntoIterator<Item = usize>) -> Vec<ExtElement> {
    range.into_iter().map(|k| ExtElement::var(n, k)).collect()
}

/// `R^1(E/J) = span{e_1..e_t}` for stable `J`, `t` the largest index in a
/// degree-2 minimal generator. Without degree-2 generators `R^1` is only
/// sampled.
pub fn r1_stable(j: &GradedIdeal) -> Result<ResonanceReport> {
    if !j.is_stable()? {
        return Err(Error::NotStable);
    }
    let n = j.n();
    let t = j
        .minimal_monomial_generators()?
        .iter()
        .filter(|u| u.degree() == 2)
        .map(|u| u.max_index())
        .max();
    let dim = complexity_stable(j).ok();
    match t {
        Some(t) => Ok(ResonanceReport {
            p: 1,
            components: vec![coordinate_span(n, 1..=t)],
            verdict: Some(Verdict {
                irreducible: true,
                method: Method::StableTheorem,
            }),
            evidence: Vec::new(),
            seed: None,
            dim_rank_variety: dim,
        }),
        None => {
            let mut report = resonance_probe(j, 1, 50, 0)?;
            report.dim_rank_variety = dim;
            Ok(report)
        }
    }
}

/// Sampled membership evidence for `R^p`; never a classification.
pub fn resonance_probe(j: &GradedIdeal, p: usize, samples: usize, seed: u64) -> Result<ResonanceReport> {
    let n = j.n();
    let mut sampler = FormSampler::new(n, seed);
    let all: Vec<usize> = (1..=n).collect();
    let mut evidence = Vec::with_capacity(samples);
    for _ in 0..samples {
        let u = sampler.supported_on(&all);
        let h = aomoto_h(j, &u, p)?;
        evidence.push((u, h));
    }
    Ok(ResonanceReport {
        p,
        components: Vec::new(),
        verdict: None,
        evidence,
        seed: Some(seed),
        dim_rank_variety: None,
    })
}

/// Evidence that `span{e_1..e_{t_p}} ⊆ R^{p-1}` for stable `J`.
#[derive(Clone, Debug)]
pub struct InclusionEvidence {
    pub p: usize,
    pub t_p: usize,
    pub basis: Vec<(usize, bool)>,
    pub samples: Vec<(ExtElement, bool)>,
}

impl InclusionEvidence {
    pub fn holds(&self) -> bool {
        self.basis.iter().all(|(_, ok)| *ok) && self.samples.iter().all(|(_, ok)| *ok)
    }
}

/// Checks every `e_i` with `i <= t_p` and 25 seeded elements of their span
/// for membership in `R^{p-1}`.
pub fn r1_subspace_of_rp(j: &GradedIdeal, p: usize, seed: u64) -> Result<InclusionEvidence> {
    if !j.is_stable()? {
        return Err(Error::NotStable);
    }
    if p < 1 {
        return Err(Error::InvalidArgument("p must be at least 1".into()));
    }
    let index = max_generator_index(j)?;
    let t_p = index.t_p(p);
    if t_p == 0 {
        return Err(Error::InvalidArgument(format!("no minimal generators in degree {p}")));
    }
    let n = j.n();
    let basis = (1..=t_p)
        .map(|k| Ok((k, in_resonance(j, &ExtElement::var(n, k), p - 1)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut sampler = FormSampler::new(n, seed);
    let support: Vec<usize> = (1..=t_p).collect();
    let samples = (0..25)
        .map(|_| {
            let u = sampler.supported_on(&support);
            let ok = in_resonance(j, &u, p - 1)?;
            Ok((u, ok))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InclusionEvidence { p, t_p, basis, samples })
}

/// Outcome of the maximality check for an equigenerated stable ideal.
#[derive(Clone, Debug)]
pub struct MaximalityVerdict {
    pub p: usize,
    pub t: usize,
    pub complexity: usize,
    pub basis_in_resonance: bool,
    pub maximal: bool,
}

/// For stable `J` generated in one degree `p >= 2`: `span{e_1..e_t}` has
/// dimension `cx E/J` and lies in `R^{p-1}`, so `R^{p-1} = V_E`.
pub fn check_rp_maximal(j: &GradedIdeal) -> Result<MaximalityVerdict> {
    let gens = j.minimal_monomial_generators()?;
    let degrees: std::collections::BTreeSet<usize> = gens.iter().map(|u| u.degree()).collect();
    let p = match degrees.iter().collect::<Vec<_>>().as_slice() {
        [&p] if p >= 2 => p,
        _ => return Err(Error::InvalidArgument("ideal is not generated in a single degree >= 2".into())),
    };
    let evidence = r1_subspace_of_rp(j, p, 0)?;
    let complexity = complexity_stable(j)?;
    let basis_in_resonance = evidence.basis.iter().all(|(_, ok)| *ok);
    Ok(MaximalityVerdict {
        p,
        t: evidence.t_p,
        complexity,
        basis_in_resonance,
        maximal: basis_in_resonance && evidence.t_p == complexity,
    })
}

/// A local component `L_X` of `R^1` attached to a rank-2 flat `X`.
#[derive(Clone, Debug)]
pub struct LocalComponent {
    pub flat: Vec<usize>,
    /// `e_s - e_{min X}` for the other `s ∈ X`.
    pub basis: Vec<ExtElement>,
}

/// Local components of a matroid, one per rank-2 flat of size at least 3.
pub fn local_components_of(m: &Matroid) -> Vec<LocalComponent> {
    let n = m.n();
    m.rank2_flats(3)
        .into_iter()
        .map(|(flat, _)| {
            let first = flat[0];
            let basis = flat[1..]
                .iter()
                .map(|&s| {
                    let mut c = vec![0i64; n];
                    c[s - 1] = 1;
                    c[first - 1] = -1;
                    ExtElement::linear_form_i64(&c)
                })
                .collect();
            LocalComponent { flat, basis }
        })
        .collect()
}

pub fn local_components(a: &Arrangement) -> Vec<LocalComponent> {
    local_components_of(&a.matroid())
}

/// The two-linear criterion next to the local-component count.
#[derive(Clone, Debug)]
pub struct IrreducibilityVerdict {
    pub irreducible: bool,
    pub criterion: LinearVerdict,
    pub local: Vec<LocalComponent>,
    pub method: Method,
}

/// `R^1(A)` is irreducible iff `J_⟨2⟩` has a 2-linear resolution; the
/// verdict must match "at most one local component".
pub fn r1_irreducible_os(
    a: &Arrangement,
    i_max: usize,
    gin_opts: &GinOptions,
    opts: &ResolutionOptions,
) -> Result<IrreducibilityVerdict> {
    r1_irreducible_matroid(&a.matroid(), i_max, gin_opts, opts)
}

/// [`r1_irreducible_os`] for a matroid given by its circuits.
pub fn r1_irreducible_matroid(
    m: &Matroid,
    i_max: usize,
    gin_opts: &GinOptions,
    opts: &ResolutionOptions,
) -> Result<IrreducibilityVerdict> {
    let j = m.os_ideal()?;
    let j2 = j.subideal_generated_by_degree(2);
    let criterion = has_linear_resolution(&j2, 2, i_max, gin_opts, opts)?;
    let local = local_components_of(m);
    if criterion.linear != (local.len() <= 1) {
        return Err(Error::Inconsistency(format!(
            "two-linear criterion says {} but there are {} local components",
            criterion.linear,
            local.len()
        )));
    }
    Ok(IrreducibilityVerdict {
        irreducible: criterion.linear,
        criterion,
        local,
        method: Method::TwoLinearCriterion,
    })
}

/// Probe results for `M = U_{d,n-f} ⊕ U_{f,f}`.
#[derive(Clone, Debug)]
pub struct MlrVerdict {
    pub d: usize,
    pub n: usize,
    pub f: usize,
    /// `(p, samples, violations)` for `R^p = {0}`, `p <= d - 2`.
    pub vanishing: Vec<(usize, usize, usize)>,
    /// Membership of `e_i - e_1`, `2 <= i <= n - f`, in `R^{d-1}`.
    pub basis: Vec<(ExtElement, bool)>,
    pub span_dim: usize,
    pub complexity: usize,
    pub components: usize,
}

impl MlrVerdict {
    pub fn holds(&self) -> bool {
        self.vanishing.iter().all(|(_, _, v)| *v == 0)
            && self.basis.iter().all(|(_, ok)| *ok)
            && self.span_dim == self.n - self.f - 1
            && self.complexity == self.n - self.components
    }
}

/// Probes `R^p(A) = 0` for `p <= d - 2` and `span{e_i - e_1} ⊆ R^{d-1}` for
/// the matroid `U_{d,n-f} ⊕ U_{f,f}`.
pub fn check_mlr(d: usize, n: usize, f: usize, samples: usize, seed: u64) -> Result<MlrVerdict> {
    if d < 2 || n < f + d + 1 {
        return Err(Error::InvalidArgument("need d >= 2 and n - f >= d + 1".into()));
    }
    let m = direct_sum(&uniform_matroid(d, n - f)?, &uniform_matroid(f, f)?)?;
    let j = m.os_ideal()?;
    let mut sampler = FormSampler::new(n, seed);
    let all: Vec<usize> = (1..=n).collect();
    let mut vanishing = Vec::new();
    for p in 0..=d - 2 {
        let mut violations = 0;
        for _ in 0..samples {
            let u = sampler.supported_on(&all);
            if in_resonance(&j, &u, p)? {
                violations += 1;
            }
        }
        vanishing.push((p, samples, violations));
    }
    let mut basis = Vec::new();
    for i in 2..=n - f {
        let mut c = vec![0i64; n];
        c[i - 1] = 1;
        c[0] = -1;
        let u = ExtElement::linear_form_i64(&c);
        let ok = in_resonance(&j, &u, d - 1)?;
        basis.push((u, ok));
    }
    let span_dim = span_rank(&basis.iter().map(|(u, _)| u.clone()).collect::<Vec<_>>());
    Ok(MlrVerdict {
        d,
        n,
        f,
        vanishing,
        basis,
        span_dim,
        complexity: complexity_os(&m),
        components: m.components().len(),
    })
}

/// Dimension of the span of 1-forms.
pub fn span_rank(forms: &[ExtElement]) -> usize {
    if forms.is_empty() {
        return 0;
    }
    let n = forms[0].n();
    let rows: Vec<Vec<Rational>> = forms.iter().map(|u| u.to_dense(1)).collect();
    MatrixExact::stack(n, rows).rank()
}

/// Result of the property (*) check.
#[derive(Clone, Debug)]
pub struct PropertyStar {
    /// Component pairs whose spans meet outside `0`.
    pub overlapping: Vec<(usize, usize)>,
    /// Basis pairs `(u, v)` of one component with `u ∧ v ∉ J`.
    pub failing_pairs: Vec<(ExtElement, ExtElement)>,
}

impl PropertyStar {
    pub fn holds(&self) -> bool {
        self.overlapping.is_empty() && self.failing_pairs.is_empty()
    }
}

/// (a) distinct components meet only in `0`; (b) `u ∧ v ∈ J` for basis pairs
/// within a component. Both are exact and, by bilinearity, cover the spans.
pub fn check_property_star(j: &GradedIdeal, components: &[Vec<ExtElement>]) -> Result<PropertyStar> {
    let mut overlapping = Vec::new();
    for a in 0..components.len() {
        for b in a + 1..components.len() {
            let mut both = components[a].clone();
            both.extend(components[b].iter().cloned());
            if span_rank(&both) != span_rank(&components[a]) + span_rank(&components[b]) {
                overlapping.push((a, b));
            }
        }
    }
    let mut failing_pairs = Vec::new();
    for c in components {
        for (x, u) in c.iter().enumerate() {
            for v in &c[x + 1..] {
                if !j.contains(&u.wedge(v)?)? {
                    failing_pairs.push((u.clone(), v.clone()));
                }
            }
        }
    }
    Ok(PropertyStar { overlapping, failing_pairs })
}

/// One coordinate span per clique of a disjoint union of complete graphs.
pub fn r1_components_clique_union(g: &Graph) -> Result<Vec<Vec<ExtElement>>> {
    let blocks = g
        .clique_blocks()
        .ok_or_else(|| Error::InvalidArgument("graph is not a disjoint union of complete graphs".into()))?;
    Ok(blocks.into_iter().map(|b| coordinate_span(g.n(), b)).collect())
}

/// What a rank-variety dimension is asked of.
pub enum RankVarietySubject<'a> {
    Stable(&'a GradedIdeal),
    Matroid(&'a Matroid),
}

/// `dim V_E = cx`, through the closed form for the subject.
pub fn rank_variety_dim(subject: RankVarietySubject<'_>) -> Result<usize> {
    match subject {
        RankVarietySubject::Stable(j) => complexity_stable(j).map_err(|e| match e {
            Error::NotStable => Error::Unsupported("rank variety of a non-stable ideal".into()),
            other => other,
        }),
        RankVarietySubject::Matroid(m) => Ok(complexity_os(m)),
    }
}

/// Nesting `R^p ⊆ R^q` for `p < q <= rank`, on sampled forms.
#[derive(Clone, Debug, Default)]
pub struct NestingEvidence {
    /// `(u, lowest p with u ∈ R^p)` for every sample that resonates somewhere.
    pub members: Vec<(ExtElement, usize)>,
    pub checked: usize,
    /// `(u, p, q)` with `u ∈ R^p` but `u ∉ R^q`.
    pub violations: Vec<(ExtElement, usize, usize)>,
}

/// Samples half of the forms from local components and half at random.
pub fn nested_resonance_probe(m: &Matroid, samples: usize, seed: u64) -> Result<NestingEvidence> {
    let j = m.os_ideal()?;
    let n = m.n();
    let rank = m.rank();
    let local = local_components_of(m);
    let mut sampler = FormSampler::new(n, seed);
    let all: Vec<usize> = (1..=n).collect();
    let mut evidence = NestingEvidence::default();
    for s in 0..samples {
        let u = if s % 2 == 0 && !local.is_empty() {
            let c = &local[s / 2 % local.len()];
            sampler.in_span(&c.basis)?
        } else {
            sampler.supported_on(&all)
        };
        let members = (1..=rank).map(|p| in_resonance(&j, &u, p)).collect::<Result<Vec<_>>>()?;
        evidence.checked += 1;
        if let Some(first) = members.iter().position(|&x| x) {
            evidence.members.push((u.clone(), first + 1));
            for (q, &inside) in members.iter().enumerate().skip(first + 1) {
                if !inside {
                    evidence.violations.push((u.clone(), first + 1, q + 1));
                }
            }
        }
    }
    Ok(evidence)
}
