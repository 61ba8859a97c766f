//! Scene files: one JSON object describing a model and its fixtures.

use serde::Deserialize;

use leafcoh::{parse_series, FoliatedMorphism, FoliationModel, FormJson, MorphismJson, Series, Vars};

use crate::Failure;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelJson {
    pub m: usize,
    pub n: usize,
    pub budget: u32,
    #[serde(default = "one")]
    pub f: String,
    /// Restrict `f` to the transverse variables.
    #[serde(default)]
    pub basic_f: bool,
}

fn one() -> String {
    "1".into()
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dims {
    pub m: usize,
    pub n: usize,
}

#[derive(Clone, Debug, Deserialize)]
pub struct MorphismSpec {
    /// Dimensions of the target model; defaults to the source.
    pub target: Option<Dims>,
    #[serde(flatten)]
    pub components: MorphismJson,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairJson {
    pub alpha: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverJson {
    /// `laurent`, `residue` or `identity`.
    pub fixture: String,
    #[serde(rename = "D")]
    pub d: Option<u32>,
    pub p: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridJson {
    pub p: Option<Vec<usize>>,
    pub q: Option<Vec<usize>>,
    #[serde(rename = "D")]
    pub d: Option<Vec<u32>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum TargetJson {
    Pair { phi: FormJson, psi: FormJson },
    Single(FormJson),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub model: ModelJson,
    pub h: Option<String>,
    pub g: Option<String>,
    pub k: Option<i64>,
    pub morphism: Option<MorphismSpec>,
    pub pair: Option<PairJson>,
    pub f_prime: Option<String>,
    pub cover: Option<CoverJson>,
    pub grid: Option<GridJson>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub slack: Option<u32>,
    #[serde(default)]
    pub expect_failure: bool,
    pub target: Option<TargetJson>,
    pub operator: Option<String>,
}

/// A scene with every series parsed and checked against the model.
#[derive(Clone, Debug)]
pub struct Scene {
    pub raw: SceneFile,
    pub model: FoliationModel,
    pub h: Option<Series>,
    pub g: Option<Series>,
    pub morphism: Option<FoliatedMorphism>,
    pub f_prime: Option<Series>,
    pub alpha: Option<Series>,
}

fn field<T>(name: &str, r: leafcoh::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::input(format!("{name}: {e}")))
}

impl Scene {
    pub fn parse(text: &str) -> Result<Scene, Failure> {
        let raw: SceneFile = serde_json::from_str(text).map_err(|e| Failure::input(format!("scene: {e}")))?;
        let mj = &raw.model;
        let model = field("model.f", FoliationModel::parse(mj.m, mj.n, mj.budget, &mj.f))?;
        if mj.basic_f && model.f().depends_on_leaf() {
            return Err(Failure::input("model.f: basic_f is set but f depends on leaf variables"));
        }
        let vars = model.vars();
        let budget = model.budget();
        let series = |name: &str, t: &Option<String>, vars: Vars| -> Result<Option<Series>, Failure> {
            t.as_ref().map(|t| field(name, parse_series(t, vars, budget))).transpose()
        };
        let h = series("h", &raw.h, vars)?;
        let g = series("g", &raw.g, vars)?;
        let alpha = series("pair.alpha", &raw.pair.as_ref().map(|p| p.alpha.clone()), vars)?;
        let target_vars = raw
            .morphism
            .as_ref()
            .and_then(|m| m.target)
            .map_or(vars, |d| Vars::new(d.m, d.n));
        let f_prime = series("f_prime", &raw.f_prime, target_vars)?;
        let morphism = raw
            .morphism
            .as_ref()
            .map(|m| field("morphism", m.components.to_morphism(vars, target_vars, budget)))
            .transpose()?;
        Ok(Scene {
            model,
            h,
            g,
            morphism,
            f_prime,
            alpha,
            raw,
        })
    }

    pub fn load(path: &std::path::Path) -> Result<Scene, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        Scene::parse(&text)
    }

    pub fn grid(&self) -> GridJson {
        self.raw.grid.clone().unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_scene() {
        let s = Scene::parse(r#"{"model": {"m": 1, "n": 0, "budget": 2}}"#).unwrap();
        assert!(s.model.f().is_unit());
        assert!(s.morphism.is_none());
    }

    #[test]
    fn parse_error_reports_field_and_position() {
        let err = Scene::parse(r#"{"model": {"m": 1, "n": 0, "budget": 2, "f": "1 + z1 *"}}"#).unwrap_err();
        assert_eq!(err.code, 2);
        assert!(err.message.starts_with("model.f: parse error at position"), "{}", err.message);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(Scene::parse(r#"{"model": {"m": 1, "n": 0, "budget": 2}, "sed": 3}"#).is_err());
    }

    #[test]
    fn basic_flag_rejects_leaf_twist() {
        let err = Scene::parse(r#"{"model": {"m": 1, "n": 1, "budget": 2, "f": "1 + z1", "basic_f": true}}"#).unwrap_err();
        assert_eq!(err.code, 2);
    }
}
