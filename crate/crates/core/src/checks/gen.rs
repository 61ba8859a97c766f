//! Seeded generators for random scalars, series and forms.
//!
//! All randomness flows from a `ChaCha8Rng` seeded with a 64-bit value, so a
//! seed fixes every generated case on every platform.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Monomial, Scalar, Series, VarKind, Vars};
use crate::forms::{FoliatedForm, MultiIndex};
use crate::linalg::{axpy, SparseVec};

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    /// Small Gaussian integer, real two times out of three.
    pub fn scalar(&mut self) -> Scalar {
        let re = self.range(-3, 3);
        let im = if self.rng.gen_ratio(1, 3) { self.range(-2, 2) } else { 0 };
        Scalar::gaussian(re, im)
    }

    pub fn nonzero_scalar(&mut self) -> Scalar {
        loop {
            let s = self.scalar();
            if !s.is_zero() {
                return s;
            }
        }
    }

    fn series_from(&mut self, vars: Vars, budget: u32, terms: usize, keep: impl Fn(&Monomial) -> bool) -> Series {
        let monos: Vec<Monomial> = Monomial::enumerate(&vars, budget).into_iter().filter(keep).collect();
        let mut picked = Vec::with_capacity(terms);
        for _ in 0..terms {
            if let Some(m) = monos.choose(&mut self.rng).cloned() {
                picked.push((m, self.scalar()));
            }
        }
        Series::from_terms(vars, budget, picked)
    }

    /// Up to `terms` random terms of degree `<= budget`.
    pub fn series(&mut self, vars: Vars, budget: u32, terms: usize) -> Series {
        self.series_from(vars, budget, terms, |_| true)
    }

    /// A random series with nonzero constant term.
    pub fn unit(&mut self, vars: Vars, budget: u32, terms: usize) -> Series {
        let s = self.series_from(vars, budget, terms, |m| m.degree() > 0);
        let c = self.nonzero_scalar();
        &s + &Series::constant(vars, c, budget)
    }

    /// A series in `z` and `x` only, vanishing at the origin.
    pub fn holomorphic(&mut self, vars: Vars, budget: u32, terms: usize) -> Series {
        let m = vars.m;
        self.series_from(vars, budget, terms, |mono| {
            mono.degree() > 0 && mono.exponents()[m..2 * m].iter().all(|&e| e == 0)
        })
    }

    /// A random `(p,q)`-form with up to `terms` terms per coefficient.
    pub fn form(&mut self, vars: Vars, p: usize, q: usize, budget: u32, terms: usize) -> FoliatedForm {
        let mut out = FoliatedForm::zero(vars, p, q, budget);
        if p > vars.m || q > vars.m {
            return out;
        }
        let keys: Vec<(MultiIndex, MultiIndex)> = MultiIndex::all(vars.m, p)
            .into_iter()
            .flat_map(|a| MultiIndex::all(vars.m, q).into_iter().map(move |b| (a.clone(), b)))
            .collect();
        let picks = self.rng.gen_range(1..=keys.len().min(3));
        for key in keys.choose_multiple(&mut self.rng, picks).cloned().collect::<Vec<_>>() {
            let c = self.series(vars, budget, terms);
            let t = FoliatedForm::term(vars, key.0.entries(), key.1.entries(), c).expect("valid key");
            out = &out + &t;
        }
        out
    }

    /// A random integer combination of `basis`.
    pub fn combination(&mut self, basis: &[SparseVec]) -> SparseVec {
        let mut v = SparseVec::new();
        for b in basis {
            let c = Scalar::from_int(self.range(-2, 2));
            axpy(&mut v, &c, b);
        }
        v
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        items.choose(&mut self.rng).expect("nonempty choice")
    }

    /// Random leaf variable kind and index.
    pub fn leaf_var(&mut self, vars: Vars) -> (VarKind, usize) {
        let kind = if self.rng.gen_bool(0.5) { VarKind::Z } else { VarKind::Zbar };
        (kind, self.rng.gen_range(1..=vars.m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_streams_repeat() {
        let vars = Vars::new(2, 1);
        let a = Gen::new(7).form(vars, 1, 1, 3, 4);
        let b = Gen::new(7).form(vars, 1, 1, 3, 4);
        assert_eq!(a, b);
        let u = Gen::new(3).unit(vars, 2, 3);
        assert!(u.is_unit());
        let h = Gen::new(5).holomorphic(vars, 3, 5);
        assert!(!h.depends_on_zbar() && h.constant_term().is_zero());
    }
}
