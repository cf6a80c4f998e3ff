//! JSON and plain-text reports.
//!
//! JSON objects have sorted keys and every rational is a `"p/q"` (or `"p"`)
//! string, so identical inputs give byte-identical output.

use std::fmt::Write;

use serde_json::{json, Value};

use super::crn::format_network;
use super::ode::format_ode;
use crate::dynamics::{net_reaction_map, net_reaction_vector, NetReactionMap};
use crate::realization::{OdeSystem, RealizationResult, UniquenessCertificate};
use crate::{Complex, MassActionSystem, NetworkReport, RatVector, Rational, Trajectory};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Text,
}

/// Structural analysis of one mass-action system.
#[derive(Clone, Debug)]
pub struct AnalysisReport {
    pub system: MassActionSystem,
    pub network: NetworkReport,
    pub net: NetReactionMap,
}

impl AnalysisReport {
    pub fn new(sys: &MassActionSystem) -> Self {
        Self { system: sys.clone(), network: sys.network().deficiency_zero_diagnosis(), net: net_reaction_map(sys) }
    }

    pub fn wr0(&self) -> bool {
        self.network.is_wr0()
    }

    /// Weakly reversible with deficiency zero implies a complex-balanced
    /// equilibrium in every compatibility class, for any choice of rates.
    pub fn complex_balanced_for_all_rates(&self) -> bool {
        self.wr0()
    }

    fn complex(&self, c: &Complex) -> String {
        c.display(self.system.species()).to_string()
    }

    fn classes(&self) -> Vec<Vec<&Complex>> {
        let vs = self.system.network().vertices();
        self.network.linkage_classes.iter().map(|c| c.iter().map(|&i| &vs[i]).collect()).collect()
    }

    pub fn to_json(&self) -> Value {
        let r = &self.network;
        json!({
            "input": format_network(&self.system),
            "species": self.system.species(),
            "linkage_classes": self
                .classes()
                .iter()
                .map(|class| class.iter().map(|c| self.complex(c)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "weakly_reversible": r.weakly_reversible,
            "dim_S": r.dim_s,
            "deficiency": r.deficiency,
            "class_deficiencies": r.class_deficiencies,
            "affinely_independent_classes": r.affinely_independent_classes,
            "class_subspaces_independent": r.class_subspaces_independent,
            "net_reaction_vectors": net_vectors_json(self.system.species(), &self.net),
            "zero_net_vertices": self.net.zero_vertices.iter().map(|c| self.complex(c)).collect::<Vec<_>>(),
            "wr0": self.wr0(),
            "complex_balanced_for_all_rates": self.complex_balanced_for_all_rates(),
        })
    }

    pub fn to_text(&self) -> String {
        let r = &self.network;
        let mut out = String::new();
        let yes = |b: bool| if b { "yes" } else { "no" };
        writeln!(out, "species: {}", self.system.species().join(" ")).unwrap();
        writeln!(
            out,
            "complexes: {}, reactions: {}, linkage classes: {}",
            self.system.network().vertices().len(),
            self.system.rates().len(),
            r.linkage_classes.len()
        )
        .unwrap();
        writeln!(out, "dim S: {}", r.dim_s).unwrap();
        writeln!(out, "deficiency: {}", r.deficiency).unwrap();
        writeln!(out, "weakly reversible: {}", yes(r.weakly_reversible)).unwrap();
        writeln!(out, "class subspaces independent: {}", yes(r.class_subspaces_independent)).unwrap();
        writeln!(out, "WR0: {}", yes(self.wr0())).unwrap();
        writeln!(out, "complex balanced for all rates: {}", yes(self.complex_balanced_for_all_rates())).unwrap();
        for (k, class) in self.classes().iter().enumerate() {
            writeln!(out).unwrap();
            writeln!(out, "linkage class {}", k + 1).unwrap();
            let names: Vec<String> = class.iter().map(|c| self.complex(c)).collect();
            writeln!(out, "  complexes:             {}", names.join(", ")).unwrap();
            writeln!(out, "  deficiency:            {}", r.class_deficiencies[k]).unwrap();
            writeln!(out, "  affinely independent:  {}", yes(r.affinely_independent_classes[k])).unwrap();
            writeln!(out, "  net reaction vectors:").unwrap();
            let width = names.iter().map(String::len).max().unwrap_or(0);
            for (c, name) in class.iter().zip(&names) {
                let w = net_reaction_vector(&self.system, c);
                writeln!(out, "    {name:<width$}  {w}").unwrap();
            }
        }
        out
    }
}

fn rational(q: &Rational) -> Value {
    Value::String(q.to_string())
}

fn vector(v: &RatVector) -> Value {
    Value::Array(v.iter().map(rational).collect())
}

fn net_vectors_json(species: &[String], net: &NetReactionMap) -> Value {
    Value::Array(
        net.vectors
            .iter()
            .map(|(c, w)| json!({ "complex": c.display(species).to_string(), "vector": vector(w) }))
            .collect(),
    )
}

fn system_json(sys: &MassActionSystem) -> Value {
    let species = sys.species();
    json!({
        "species": species,
        "reactions": sys
            .reactions()
            .map(|(s, t, k)| json!({
                "source": s.display(species).to_string(),
                "target": t.display(species).to_string(),
                "rate": rational(k),
            }))
            .collect::<Vec<_>>(),
    })
}

fn render(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn emit_report(report: &AnalysisReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => render(&report.to_json()),
        ReportFormat::Text => report.to_text(),
    }
}

/// Result of `realize` or `certify` on a polynomial system.
#[derive(Clone, Debug)]
pub struct RealizationReport {
    pub ode: OdeSystem,
    pub realization: Option<MassActionSystem>,
    pub failure_reason: Option<String>,
    pub certificate: Option<UniquenessCertificate>,
}

impl RealizationReport {
    pub fn from_result(ode: &OdeSystem, result: &RealizationResult) -> Self {
        Self {
            ode: ode.clone(),
            realization: result.system().cloned(),
            failure_reason: result.failure_reason().map(|r| r.name().to_string()),
            certificate: None,
        }
    }

    pub fn from_certificate(ode: &OdeSystem, cert: &UniquenessCertificate) -> Self {
        let failure_reason = match cert.valid_count {
            0 => Some("no_valid_partition".to_string()),
            1 => None,
            _ => Some("uniqueness_violated".to_string()),
        };
        Self { ode: ode.clone(), realization: cert.witness().cloned(), failure_reason, certificate: Some(cert.clone()) }
    }

    /// The analysis keys of the realization, when there is one, plus the
    /// search outcome. `input` is always the canonical polynomial system.
    pub fn to_json(&self) -> Value {
        let mut obj = match &self.realization {
            Some(sys) => AnalysisReport::new(sys).to_json(),
            None => json!({}),
        };
        let map = obj.as_object_mut().expect("reports are objects");
        map.insert("input".into(), Value::String(format_ode(&self.ode)));
        map.insert("realization".into(), self.realization.as_ref().map_or(Value::Null, system_json));
        map.insert("failure_reason".into(), self.failure_reason.clone().map_or(Value::Null, Value::String));
        if let Some(cert) = &self.certificate {
            map.insert("partitions_examined".into(), json!(cert.partitions_examined));
            map.insert("valid_count".into(), json!(cert.valid_count));
            map.insert(
                "pruned_by".into(),
                Value::Object(cert.pruned_by.iter().map(|(rule, n)| (rule.name().to_string(), json!(n))).collect()),
            );
            if cert.witnesses.len() > 1 {
                map.insert("witnesses".into(), Value::Array(cert.witnesses.iter().map(system_json).collect()));
            }
        }
        obj
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(cert) = &self.certificate {
            writeln!(out, "partitions examined: {}", cert.partitions_examined).unwrap();
            writeln!(out, "valid realizations: {}", cert.valid_count).unwrap();
            for (rule, n) in &cert.pruned_by {
                writeln!(out, "  rejected by {rule}: {n}").unwrap();
            }
            writeln!(out).unwrap();
        }
        match (&self.realization, &self.failure_reason) {
            (Some(sys), reason) => {
                if let Some(reason) = reason {
                    writeln!(out, "warning: {reason}").unwrap();
                }
                writeln!(out, "WR0 realization:").unwrap();
                out.push_str(&format_network(sys));
                writeln!(out).unwrap();
                out.push_str(&AnalysisReport::new(sys).to_text());
            }
            (None, Some(reason)) => writeln!(out, "no WR0 realization: {reason}").unwrap(),
            (None, None) => writeln!(out, "no WR0 realization").unwrap(),
        }
        out
    }
}

pub fn emit_realization_report(report: &RealizationReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => render(&report.to_json()),
        ReportFormat::Text => report.to_text(),
    }
}

/// Net reaction vectors of a system, with the vertices whose vector is zero.
pub fn emit_net_vectors(sys: &MassActionSystem, format: ReportFormat) -> String {
    let net = net_reaction_map(sys);
    let species = sys.species();
    match format {
        ReportFormat::Json => render(&json!({
            "net_reaction_vectors": net_vectors_json(species, &net),
            "zero_net_vertices": net.zero_vertices.iter().map(|c| c.display(species).to_string()).collect::<Vec<_>>(),
        })),
        ReportFormat::Text => {
            let mut out = String::new();
            let names: Vec<String> = net.vectors.keys().map(|c| c.display(species).to_string()).collect();
            let width = names.iter().map(String::len).max().unwrap_or(0);
            for (name, w) in names.iter().zip(net.vectors.values()) {
                writeln!(out, "{name:<width$}  {w}").unwrap();
            }
            for c in &net.zero_vertices {
                writeln!(out, "{} has zero net reaction vector", c.display(species)).unwrap();
            }
            out
        }
    }
}

/// Verdict of an equivalence check, optionally restricted to some complexes.
pub fn emit_equivalence(equivalent: bool, on: Option<&[Complex]>, species: &[String], format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let on = on.map_or(Value::Null, |cs| {
                Value::Array(cs.iter().map(|c| Value::String(c.display(species).to_string())).collect())
            });
            render(&json!({ "equivalent": equivalent, "on": on }))
        }
        ReportFormat::Text => {
            format!("{}\n", if equivalent { "dynamically equivalent" } else { "not dynamically equivalent" })
        }
    }
}

/// Summary of a simulation: final state, drift, and Lyapunov behavior.
pub fn emit_trajectory(sys: &MassActionSystem, traj: &Trajectory, residual: &[(Complex, f64)], format: ReportFormat) -> String {
    let species = sys.species();
    let last = traj.last_state();
    let max_residual = residual.iter().map(|(_, r)| r.abs()).fold(0.0, f64::max);
    let lyapunov_increase = (!traj.lyapunov.is_empty()).then(|| traj.max_lyapunov_increase());
    match format {
        ReportFormat::Json => render(&json!({
            "species": species,
            "steps_completed": traj.states.len() - 1,
            "final_time": traj.times.last().copied().unwrap_or(0.0),
            "final_state": last,
            "aborted": traj.aborted,
            "conserved_drift": traj.conserved_drift,
            "max_complex_balance_residual": max_residual,
            "max_lyapunov_increase": lyapunov_increase,
        })),
        ReportFormat::Text => {
            let mut out = String::new();
            if traj.aborted {
                writeln!(out, "aborted: state left the positive orthant").unwrap();
            }
            writeln!(out, "steps completed: {}", traj.states.len() - 1).unwrap();
            writeln!(out, "final time: {}", traj.times.last().copied().unwrap_or(0.0)).unwrap();
            for (name, x) in species.iter().zip(last) {
                writeln!(out, "  {name} = {x:.12e}").unwrap();
            }
            writeln!(out, "conserved-quantity drift: {:.3e}", traj.conserved_drift).unwrap();
            writeln!(out, "max complex-balance residual: {max_residual:.3e}").unwrap();
            if let Some(inc) = lyapunov_increase {
                writeln!(out, "max Lyapunov increase: {inc:.3e}").unwrap();
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::realization::{certify_uniqueness, find_wr0_realization};

    #[test]
    fn cubic_pair_json() {
        let v = AnalysisReport::new(&fixtures::cubic_reversible_pair()).to_json();
        assert_eq!(v["deficiency"], json!(0));
        assert_eq!(v["weakly_reversible"], json!(true));
        assert_eq!(v["complex_balanced_for_all_rates"], json!(true));
        assert_eq!(v["dim_S"], json!(1));
        assert_eq!(v["linkage_classes"], json!([["0", "3 X"]]));
        assert_eq!(v["net_reaction_vectors"][0], json!({ "complex": "0", "vector": ["3"] }));
    }

    #[test]
    fn affine_dependence_is_flagged() {
        let v = AnalysisReport::new(&fixtures::diagonal_three_vertex_chain()).to_json();
        assert_eq!(v["deficiency"], json!(1));
        assert_eq!(v["affinely_independent_classes"], json!([false]));
        assert_eq!(v["complex_balanced_for_all_rates"], json!(false));
    }

    #[test]
    fn json_has_the_documented_keys_in_order() {
        let text = emit_report(&AnalysisReport::new(&fixtures::square_cycle()), ReportFormat::Json);
        let v: Value = serde_json::from_str(&text).unwrap();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        for key in [
            "input",
            "linkage_classes",
            "weakly_reversible",
            "dim_S",
            "deficiency",
            "class_deficiencies",
            "affinely_independent_classes",
            "class_subspaces_independent",
            "net_reaction_vectors",
            "wr0",
            "complex_balanced_for_all_rates",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        let key_positions: Vec<usize> = ["\"class_deficiencies\"", "\"deficiency\"", "\"wr0\""]
            .iter()
            .map(|k| text.find(k).unwrap())
            .collect();
        assert!(key_positions.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn output_is_deterministic() {
        for (_, sys) in fixtures::all() {
            for format in [ReportFormat::Json, ReportFormat::Text] {
                assert_eq!(emit_report(&AnalysisReport::new(&sys), format), emit_report(&AnalysisReport::new(&sys), format));
            }
        }
    }

    #[test]
    fn text_has_one_section_per_class() {
        let text = emit_report(&AnalysisReport::new(&fixtures::square_two_diagonals()), ReportFormat::Text);
        assert_eq!(text.matches("linkage class ").count(), 2);
        assert!(text.contains("deficiency: 0"));
    }

    #[test]
    fn realization_reports() {
        let f = OdeSystem::from_system(&fixtures::cubic_reversible_pair());
        let v = RealizationReport::from_result(&f, &find_wr0_realization(&f)).to_json();
        assert_eq!(v["failure_reason"], Value::Null);
        assert_eq!(v["deficiency"], json!(0));
        assert_eq!(v["realization"]["reactions"][0], json!({ "source": "0", "target": "3 X", "rate": "1" }));
        assert_eq!(v["input"], json!("vars: X\ndX/dt = 3 - 3*X^3\n"));

        let f = OdeSystem::from_system(&fixtures::line_two_pairs());
        let v = RealizationReport::from_result(&f, &find_wr0_realization(&f)).to_json();
        assert_eq!(v["realization"], Value::Null);
        assert_eq!(v["failure_reason"], json!("infeasible_linkage_count"));

        let cert = certify_uniqueness(&f).unwrap();
        let v = RealizationReport::from_certificate(&f, &cert).to_json();
        assert_eq!(v["valid_count"], json!(0));
        assert_eq!(v["partitions_examined"], json!(4));
    }
}
