//! Input files: the kind is recognised by its keys.

use std::collections::BTreeMap;
use std::io::Read;

use exterior_resonance::graph::Graph;
use exterior_resonance::ideal::GradedIdeal;
use exterior_resonance::io::{arrangement_from_json, graph_from_json, ideal_from_json, matroid_from_json, parse_json};
use exterior_resonance::matroid::{Arrangement, Matroid};
use exterior_resonance::{Error, Result};
use serde_json::Value;

pub enum Subject {
    Ideal {
        ideal: GradedIdeal,
        /// Component dimensions `h_r` supplied with the ideal.
        h: Option<BTreeMap<usize, u64>>,
    },
    Arrangement(Arrangement),
    Matroid(Matroid),
    Graph(Graph),
}

impl Subject {
    pub fn kind(&self) -> &'static str {
        match self {
            Subject::Ideal { .. } => "ideal",
            Subject::Arrangement(_) => "arrangement",
            Subject::Matroid(_) => "matroid",
            Subject::Graph(_) => "graph",
        }
    }

    /// The ideal the subject stands for: Orlik-Solomon or edge ideal.
    pub fn ideal(&self) -> Result<GradedIdeal> {
        match self {
            Subject::Ideal { ideal, .. } => Ok(ideal.clone()),
            Subject::Arrangement(a) => a.matroid().os_ideal(),
            Subject::Matroid(m) => m.os_ideal(),
            Subject::Graph(g) => g.edge_ideal(),
        }
    }

    pub fn matroid(&self) -> Option<Matroid> {
        match self {
            Subject::Arrangement(a) => Some(a.matroid()),
            Subject::Matroid(m) => Some(m.clone()),
            _ => None,
        }
    }
}

fn read(path: &str) -> Result<String> {
    let mut text = String::new();
    let outcome = if path == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    outcome.map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))?;
    Ok(text)
}

fn component_dims(v: &Value) -> Result<BTreeMap<usize, u64>> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("\"h\" must map dimensions to counts, like {\"3\": 1}".into()))?;
    obj.iter()
        .map(|(r, c)| {
            let r = r.parse::<usize>().map_err(|_| Error::Parse(format!("bad dimension {r:?} in \"h\"")))?;
            let c = c.as_u64().ok_or_else(|| Error::Parse(format!("bad count for dimension {r} in \"h\"")))?;
            Ok((r, c))
        })
        .collect()
}

pub fn load(path: &str) -> Result<Subject> {
    let v = parse_json(&read(path)?).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
    let located = |e: Error| match e {
        Error::Parse(m) => Error::Parse(format!("{path}: {m}")),
        other => other,
    };
    if v.get("forms").is_some() {
        arrangement_from_json(&v).map(Subject::Arrangement).map_err(located)
    } else if v.get("circuits").is_some() {
        matroid_from_json(&v).map(Subject::Matroid).map_err(located)
    } else if v.get("edges").is_some() {
        graph_from_json(&v).map(Subject::Graph).map_err(located)
    } else if v.get("generators").is_some() {
        let ideal = ideal_from_json(&v).map_err(located)?;
        let h = v.get("h").map(component_dims).transpose().map_err(located)?;
        Ok(Subject::Ideal { ideal, h })
    } else {
        Err(Error::Parse(format!(
            "{path}: expected one of the keys \"generators\", \"forms\", \"circuits\" or \"edges\""
        )))
    }
}
