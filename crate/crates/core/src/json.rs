//! JSON documents for quivers with potential. Field order is fixed and
//! arrays are sorted, so identical values serialize to identical bytes.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::potential::{Potential, QuiverWithPotential};
use crate::quiver::{Arrow, Quiver};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuiverDocument {
    vertices: Vec<String>,
    arrows: Vec<ArrowRecord>,
    #[serde(default)]
    potential: Vec<TermRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrowRecord {
    id: String,
    source: String,
    target: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermRecord {
    coeff: i64,
    cycle: Vec<String>,
}

pub fn qp_to_json(qp: &QuiverWithPotential) -> String {
    let doc = QuiverDocument {
        vertices: qp.quiver.vertices().to_vec(),
        arrows: qp
            .quiver
            .arrows()
            .iter()
            .map(|a| ArrowRecord {
                id: a.id.clone(),
                source: a.source.clone(),
                target: a.target.clone(),
            })
            .collect(),
        potential: qp
            .potential
            .terms()
            .iter()
            .map(|t| TermRecord {
                coeff: t.coeff,
                cycle: t.cycle.clone(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("documents always serialize");
    s.push('\n');
    s
}

pub fn quiver_to_json(q: &Quiver) -> String {
    qp_to_json(&QuiverWithPotential::without_potential(q.clone()))
}

/// Parse and validate a quiver document; the potential may be absent.
pub fn qp_from_json(text: &str) -> Result<QuiverWithPotential> {
    let doc: QuiverDocument = serde_json::from_str(text)?;
    let quiver = Quiver::new(
        doc.vertices,
        doc.arrows
            .into_iter()
            .map(|a| Arrow::new(a.id, a.source, a.target))
            .collect(),
    )?;
    let potential = Potential::new(
        &quiver,
        doc.potential.into_iter().map(|t| (t.coeff, t.cycle)),
    )?;
    QuiverWithPotential::new(quiver, potential)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_byte_stable() {
        let text = r#"{"vertices":["1","2","3"],"arrows":[{"id":"c","source":"3","target":"1"},{"id":"a","source":"1","target":"2"},{"id":"b","source":"2","target":"3"}],"potential":[{"coeff":1,"cycle":["b","c","a"]}]}"#;
        let qp = qp_from_json(text).unwrap();
        let out = qp_to_json(&qp);
        assert_eq!(qp_to_json(&qp_from_json(&out).unwrap()), out);
        assert!(out.find("\"a\"").unwrap() < out.find("\"c\"").unwrap());
        assert_eq!(qp.potential.terms()[0].cycle, vec!["a", "b", "c"]);
    }

    #[test]
    fn rejects_unknown_fields_and_bad_refs() {
        assert!(qp_from_json(r#"{"vertices":[],"arrows":[],"extra":1}"#).is_err());
        assert!(qp_from_json(
            r#"{"vertices":["1"],"arrows":[{"id":"a","source":"1","target":"2"}]}"#
        )
        .is_err());
    }
}
