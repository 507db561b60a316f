//! JSON rendering of verdicts and certificates.

use std::collections::BTreeMap;

use gpi_core::checker::{Evidence, EvidenceLevel, Verdict, WitnessCertificate};
use gpi_core::freealg::GVar;
use gpi_core::groups::{Character, FiniteGroup, PermutationGroup};
use gpi_core::matalg::RingMatrix;
use serde_json::{json, Map, Value};

/// Common header: every report echoes the field, the budget and the algebra.
pub struct Context {
    pub command: &'static str,
    pub algebra: Option<String>,
    pub conductor: u32,
    pub budget: usize,
}

impl Context {
    pub fn report(&self, status: &str) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("command".into(), json!(self.command));
        m.insert("status".into(), json!(status));
        m.insert("algebra".into(), json!(self.algebra));
        m.insert("conductor".into(), json!(self.conductor));
        m.insert("field".into(), json!(field_name(self.conductor)));
        m.insert("budget".into(), json!(self.budget));
        m
    }
}

pub fn field_name(conductor: u32) -> String {
    if conductor == 1 {
        "Q".into()
    } else {
        format!("Q(zeta_{conductor})")
    }
}

pub fn assignment(a: &BTreeMap<GVar, RingMatrix>, group: &FiniteGroup) -> Value {
    Value::Object(
        a.iter()
            .map(|(v, m)| (v.display(group), json!(m.to_string())))
            .collect(),
    )
}

pub fn evidence(e: &Evidence, group: &FiniteGroup) -> Value {
    let mut m = Map::new();
    m.insert(
        "level".into(),
        json!(match e.level {
            EvidenceLevel::Polynomial => "polynomial",
            EvidenceLevel::Piece => "multilinear piece",
        }),
    );
    m.insert("polynomial".into(), json!(e.polynomial.display(group)));
    m.insert("assignment".into(), assignment(&e.assignment, group));
    m.insert("value".into(), json!(e.value.to_string()));
    if let Some((y, c)) = &e.witness {
        m.insert("noncommuting_with".into(), json!(y.to_string()));
        m.insert("commutator".into(), json!(c.to_string()));
    }
    Value::Object(m)
}

pub fn verdict(into: &mut Map<String, Value>, v: &Verdict, group: &FiniteGroup) {
    into.insert(
        "evidence".into(),
        v.evidence.as_ref().map_or(Value::Null, |e| evidence(e, group)),
    );
    if let Some(note) = v.budget_note() {
        into.insert("budget_note".into(), json!(note));
    }
    if let Some(stable) = v.stable_at_larger_budget {
        into.insert("stable_at_budget_plus_2".into(), json!(stable));
    }
}

pub fn character(lambda: &Character, h: &PermutationGroup) -> Value {
    let values: Map<String, Value> = h
        .elements
        .iter()
        .enumerate()
        .map(|(k, sigma)| (sigma.to_string(), json!(lambda.value(k).to_string())))
        .collect();
    json!({ "trivial": lambda.is_trivial(), "values": values })
}

pub fn diagonal(p: &RingMatrix) -> Value {
    match p.scalar_diagonal() {
        Some(d) => json!(d.iter().map(|c| c.to_string()).collect::<Vec<_>>()),
        None => json!(p.to_string()),
    }
}

pub fn certificate(into: &mut Map<String, Value>, c: &WitnessCertificate, group: &FiniteGroup) {
    into.insert("f".into(), json!(c.f.display(group)));
    into.insert("P".into(), diagonal(&c.p));
    into.insert("P_pretty".into(), json!(c.p.pretty()));
    into.insert("k".into(), json!(c.k));
    into.insert("lambda".into(), character(&c.lambda, &c.h));
    into.insert("note".into(), json!(c.note()));
    into.insert("orbits".into(), orbits(&c.orbits));
    into.insert(
        "checks".into(),
        json!({
            "f": c.f_status.map(|s| s.to_string()),
            "product": c.product_status.map(|s| s.to_string()),
            "P_power_scalar": c.p_power_scalar,
            "verified": c.is_verified(),
        }),
    );
}

pub fn orbits(orbits: &[Vec<usize>]) -> Value {
    json!(orbits
        .iter()
        .map(|o| o.iter().map(|i| i + 1).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

pub fn group_elements(h: &PermutationGroup) -> Value {
    json!(h.elements.iter().map(|p| p.to_string()).collect::<Vec<_>>())
}
