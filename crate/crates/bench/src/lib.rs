//! Shared fixtures for the criterion benches.

use leafcoh::checks::gen::Gen;
use leafcoh::sequences::{laurent_cover, make_mv_ses};
use leafcoh::{parse_series, FoliatedForm, FoliatedMorphism, FoliationModel, Series, ShortExactSequence, Vars};

pub const SEED: u64 = 0xbe4c;

/// The two-leaf scene used throughout the benches.
pub fn scene(budget: u32) -> FoliationModel {
    FoliationModel::parse(2, 0, budget, "1 + z1*zb2").expect("fixture parses")
}

pub fn square_map() -> (FoliatedMorphism, Series) {
    let v = Vars::new(1, 0);
    let z2 = parse_series("z1^2", v, 4).expect("fixture parses");
    let fp = parse_series("z1", v, 4).expect("fixture parses");
    (FoliatedMorphism::new(v, v, vec![z2], vec![]).expect("valid map"), fp)
}

pub fn laurent(d: u32) -> ShortExactSequence {
    make_mv_ses(&laurent_cover(d).expect("fixture builds")).expect("exact fixture")
}

/// Random `(p,q)`-forms on `model` at its budget.
pub fn forms(model: &FoliationModel, p: usize, q: usize, count: usize) -> Vec<FoliatedForm> {
    let mut gen = Gen::new(SEED);
    (0..count).map(|_| gen.form(model.vars(), p, q, model.budget(), 4)).collect()
}
