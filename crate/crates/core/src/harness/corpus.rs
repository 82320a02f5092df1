//! Built-in integrand corpus.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::Result;
use crate::function::{FunctionDoc, LatticeFunction};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusItemDoc {
    pub id: String,
    pub function: FunctionDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct CorpusDoc {
    pub functions: Vec<CorpusItemDoc>,
}

impl CorpusDoc {
    pub fn build<S: Scalar>(&self) -> Result<Vec<CorpusEntry<S>>> {
        self.functions
            .iter()
            .map(|it| Ok(CorpusEntry { id: it.id.clone(), function: it.function.build()? }))
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct CorpusEntry<S> {
    pub id: String,
    pub function: LatticeFunction<S>,
}

fn item(id: &str, doc: serde_json::Value) -> CorpusItemDoc {
    CorpusItemDoc { id: id.into(), function: serde_json::from_value(doc).expect("built-in corpus is well formed") }
}

/// Integrands with exact oracles on both backends.
pub fn default_corpus_doc() -> CorpusDoc {
    let t = json!({"type": "polynomial", "components": [["0", "1"]]});
    CorpusDoc {
        functions: vec![
            item("step_half", json!({"type": "step", "breakpoints": ["1/2"], "values": [["2"], ["0"]]})),
            item(
                "step_thirds",
                json!({"type": "step", "breakpoints": ["1/3", "2/3"], "values": [["1"], ["2"], ["3"]]}),
            ),
            item(
                "step_signed_2d",
                json!({"type": "step", "breakpoints": ["1/4", "1/2", "5/7"],
                       "values": [["1", "-1"], ["-2", "3"], ["0", "1/2"], ["3", "-1"]]}),
            ),
            item("constant_2d", json!({"type": "step", "values": [["3/2", "-1"]]})),
            item("identity", json!({"type": "monotone", "inner": t})),
            item(
                "square_pair",
                json!({"type": "monotone", "inner": {"type": "polynomial", "components": [["0", "1"], ["0", "0", "1"]]}}),
            ),
            item(
                "cubic_step",
                json!({"type": "monotone", "inner": {"type": "piecewise_polynomial", "breakpoints": ["1/2"],
                       "pieces": [[["0", "0", "0", "1"]], [["1", "1/2"]]]}}),
            ),
            item("shifted_line", json!({"type": "polynomial", "components": [["-1/2", "1"]]})),
            item("two_root_quadratic", json!({"type": "polynomial", "components": [["2/9", "-1", "1"]]})),
            item(
                "signed_pair",
                json!({"type": "piecewise_polynomial", "breakpoints": ["1/2"],
                       "pieces": [[["1/4", "-1"], ["0", "1", "-3"]], [["-1", "1"], ["1", "-2"]]]}),
            ),
            item(
                "ae_zero_spike",
                json!({"type": "ae_modified", "base": {"type": "step", "values": [["0"]]},
                       "exceptions": [{"point": "1/2", "value": ["5"]}]}),
            ),
            item(
                "ae_identity_spikes",
                json!({"type": "ae_modified", "base": {"type": "monotone", "inner": t},
                       "exceptions": [{"point": "1/4", "value": ["5"]}, {"point": "1/2", "value": ["-5"]},
                                      {"point": "3/4", "value": ["5"]}]}),
            ),
            item("escaping_4", json!({"type": "escaping_dimension", "dim": 4})),
            item("escaping_dyadic_3", json!({"type": "escaping_dimension", "dim": 3, "scaling": "dyadic"})),
        ],
    }
}

/// Additional transcendental integrands for the float backend.
pub fn float_corpus_doc() -> CorpusDoc {
    CorpusDoc {
        functions: vec![
            item(
                "sin_pi",
                json!({"type": "smooth", "components": [[{"kind": "sin", "coef": "1", "freq": "1", "pi": true}]]}),
            ),
            item(
                "monotone_triple",
                json!({"type": "monotone", "inner": {"type": "smooth", "components": [
                    [{"kind": "poly", "coeffs": ["0", "1"]}],
                    [{"kind": "poly", "coeffs": ["0", "0", "1"]}],
                    [{"kind": "poly", "coeffs": ["1"]}, {"kind": "cos", "coef": "-1", "freq": "1"}]]}}),
            ),
            item(
                "exp_growth",
                json!({"type": "smooth", "components": [[{"kind": "exp", "coef": "1", "rate": "1"}]]}),
            ),
        ],
    }
}

pub fn default_corpus<S: Scalar>() -> Vec<CorpusEntry<S>> {
    default_corpus_doc().build().expect("built-in corpus builds")
}

pub fn float_corpus() -> Vec<CorpusEntry<f64>> {
    let mut all = default_corpus::<f64>();
    all.extend(float_corpus_doc().build::<f64>().expect("built-in corpus builds"));
    all
}
