use crate::algebra::{parse_series, Series, Vars};
use crate::error::{Error, Result};

/// A single-chart scene: `m` leafwise complex coordinates, `n` transverse
/// real coordinates, a base degree budget and the twist function `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoliationModel {
    vars: Vars,
    budget: u32,
    f: Series,
}

impl FoliationModel {
    pub fn new(vars: Vars, budget: u32, f: Series) -> Result<Self> {
        if vars.m == 0 {
            return Err(Error::DimensionMismatch(
                "a complex foliation needs m >= 1".into(),
            ));
        }
        vars.check_same(&f.vars())?;
        Ok(FoliationModel { vars, budget, f })
    }

    /// Parses the twist with a cap equal to its own degree, so `f` may exceed
    /// the working budget of the scene.
    pub fn parse(m: usize, n: usize, budget: u32, f: &str) -> Result<Self> {
        let vars = Vars::new(m, n);
        let raw = parse_series(f, vars, u32::MAX / 4)?;
        let deg = raw.degree().unwrap_or(0);
        FoliationModel::new(vars, budget, raw.with_budget(deg))
    }

    /// The untwisted model, `f = 1`.
    pub fn untwisted(m: usize, n: usize, budget: u32) -> Result<Self> {
        let vars = Vars::new(m, n);
        FoliationModel::new(vars, budget, Series::one(vars, 0))
    }

    pub fn vars(&self) -> Vars {
        self.vars
    }

    pub fn m(&self) -> usize {
        self.vars.m
    }

    pub fn n(&self) -> usize {
        self.vars.n
    }

    pub fn budget(&self) -> u32 {
        self.budget
    }

    pub fn f(&self) -> &Series {
        &self.f
    }

    /// Same scene with a different twist.
    pub fn with_twist(&self, f: Series) -> Result<Self> {
        FoliationModel::new(self.vars, self.budget, f)
    }

    /// Budget growth per twisted operator, `max(deg f − 1, 0)`.
    pub fn delta(&self) -> u32 {
        twist_growth(&self.f)
    }
}

pub fn twist_growth(f: &Series) -> u32 {
    f.degree().unwrap_or(0).saturating_sub(1)
}
