//! JSON encodings of forms and morphisms.
//!
//! A form is `{"p": 0, "q": 1, "terms": [{"A": [], "B": [1], "coeff": "z1"}]}`
//! with 1-based leaf indices and coefficients in the series grammar. A
//! morphism is `{"z_components": [...], "x_components": [...]}` with series
//! over the source variables.

use serde::{Deserialize, Serialize};

use crate::algebra::{parse_series, Vars};
use crate::error::{Error, Result};
use crate::forms::FoliatedForm;
use crate::operators::FoliatedMorphism;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    #[serde(rename = "A", default)]
    pub a: Vec<usize>,
    #[serde(rename = "B", default)]
    pub b: Vec<usize>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormJson {
    pub p: usize,
    pub q: usize,
    #[serde(default)]
    pub terms: Vec<TermJson>,
}

impl FormJson {
    pub fn from_form(form: &FoliatedForm) -> Self {
        let terms = form
            .coeffs()
            .iter()
            .map(|((a, b), c)| TermJson {
                a: a.entries().to_vec(),
                b: b.entries().to_vec(),
                coeff: c.to_string(),
            })
            .collect();
        FormJson {
            p: form.p(),
            q: form.q(),
            terms,
        }
    }

    pub fn to_form(&self, vars: Vars, budget: u32) -> Result<FoliatedForm> {
        let mut out = FoliatedForm::zero(vars, self.p, self.q, budget);
        for (i, t) in self.terms.iter().enumerate() {
            if t.a.len() != self.p || t.b.len() != self.q {
                return Err(Error::BidegreeMismatch(format!(
                    "term {i} has bidegree ({},{}) in a ({},{})-form",
                    t.a.len(),
                    t.b.len(),
                    self.p,
                    self.q
                )));
            }
            let coeff = parse_series(&t.coeff, vars, budget)?;
            out = out.try_add(&FoliatedForm::term(vars, &t.a, &t.b, coeff)?)?;
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismJson {
    #[serde(default)]
    pub z_components: Vec<String>,
    #[serde(default)]
    pub x_components: Vec<String>,
}

impl MorphismJson {
    pub fn from_morphism(mu: &FoliatedMorphism) -> Self {
        MorphismJson {
            z_components: mu.z_components().iter().map(|s| s.to_string()).collect(),
            x_components: mu.x_components().iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn to_morphism(&self, source: Vars, target: Vars, budget: u32) -> Result<FoliatedMorphism> {
        let parse = |v: &[String]| v.iter().map(|t| parse_series(t, source, budget)).collect::<Result<Vec<_>>>();
        FoliatedMorphism::new(source, target, parse(&self.z_components)?, parse(&self.x_components)?)
    }
}

pub fn form_to_json(form: &FoliatedForm) -> String {
    serde_json::to_string(&FormJson::from_form(form)).expect("plain data serializes")
}

pub fn form_from_json(text: &str, vars: Vars, budget: u32) -> Result<FoliatedForm> {
    let raw: FormJson = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    raw.to_form(vars, budget)
}
