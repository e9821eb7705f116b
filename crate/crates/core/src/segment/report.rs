use serde::{Deserialize, Serialize};

use super::{TropicalSegment, TurningPointClass};
use crate::metric::ExactScalar;
use crate::tree::{write_newick, EquidistantTree, VertexId};

const DECIMAL_DIGITS: usize = 6;

/// Serializable view of a segment. Scalars are `p/q` strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentReport {
    pub n: usize,
    pub u: Vec<ExactScalar>,
    pub v: Vec<ExactScalar>,
    pub generic_pair: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub tropical_nni_number: Option<usize>,
    pub turning_points: Vec<TurningPointReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurningPointReport {
    pub lambda: ExactScalar,
    /// `u ⊕ (λ ⊙ v)` before normalization.
    pub raw: Vec<ExactScalar>,
    /// Representative with minimum entry 0.
    pub point: Vec<ExactScalar>,
    pub class: Option<TurningPointClass>,
    pub witness: Option<Witness>,
    pub newick: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_decimal: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point_decimal: Option<Vec<f64>>,
}

/// Witness vertices, given by their clades in the two endpoint trees.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub t1: Vec<usize>,
    pub t2: Vec<usize>,
}

fn rounded(x: &ExactScalar) -> f64 {
    x.to_decimal_string(DECIMAL_DIGITS).parse().unwrap_or_else(|_| x.to_f64())
}

fn clade_labels(tree: &EquidistantTree, v: VertexId) -> Vec<usize> {
    tree.clade(v).labels().collect()
}

impl SegmentReport {
    /// With `decimal`, rounded float copies of lambda and the point are added.
    pub fn new(segment: &TropicalSegment, decimal: bool) -> Self {
        let t1 = segment.start_tree();
        let t2 = segment.end_tree();
        let turning_points = segment
            .points()
            .iter()
            .map(|p| TurningPointReport {
                lambda: p.lambda.clone(),
                raw: segment.point_at(&p.lambda).into_entries(),
                point: p.point.rep().entries().to_vec(),
                class: p.class,
                witness: p.witness.map(|(x1, x2)| Witness {
                    t1: clade_labels(t1, x1),
                    t2: clade_labels(t2, x2),
                }),
                newick: write_newick(&p.tree),
                lambda_decimal: decimal.then(|| rounded(&p.lambda)),
                point_decimal: decimal.then(|| p.point.rep().entries().iter().map(rounded).collect()),
            })
            .collect();
        Self {
            n: segment.n(),
            u: segment.u().entries().to_vec(),
            v: segment.v().entries().to_vec(),
            generic_pair: segment.is_generic_pair(),
            note: (!segment.is_generic_pair())
                .then(|| "non-generic; classification trichotomy not guaranteed".to_string()),
            tropical_nni_number: segment.tropical_nni_number().ok(),
            turning_points,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::segment::tropical_segment;
    use crate::UltraVector;

    #[test]
    fn worked_example_json() {
        let u = UltraVector::from_integers(3, &[3, 3, 1]).unwrap();
        let v = UltraVector::from_integers(3, &[3, 2, 3]).unwrap();
        let report = SegmentReport::new(&tropical_segment(&u, &v).unwrap(), false);
        let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(json["turning_points"][0]["lambda"], "-2");
        assert_eq!(json["turning_points"][2]["raw"], serde_json::json!(["4", "3", "4"]));
        assert_eq!(json["turning_points"][1]["class"], "SingleNNI");
        assert_eq!(json["turning_points"][1]["point"], serde_json::json!(["0", "0", "0"]));
        assert_eq!(json["turning_points"][1]["witness"]["t1"], serde_json::json!([1, 2, 3]));
        assert!(json["turning_points"][0].get("lambda_decimal").is_none());
        let back: SegmentReport = serde_json::from_value(json).unwrap();
        assert_eq!(back, report);
    }
}
