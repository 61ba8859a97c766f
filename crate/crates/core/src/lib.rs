//! Exact twisted leafwise Dolbeault calculus on polynomial models of complex
//! foliations.
//!
//! Coefficients are truncated power series over the Gaussian rationals, forms
//! are leafwise `(p,q)`-forms, and every cohomology number is an exact rank.

pub mod algebra;
pub mod checks;
pub mod cohomology;
pub mod error;
pub mod forms;
pub mod io;
pub mod linalg;
pub mod operators;
pub mod sequences;

pub use algebra::{parse_series, Monomial, Scalar, Series, VarKind, Vars};
pub use error::{Error, Result};
pub use forms::{wedge, FoliatedForm, FoliationModel, FormBasis, MultiIndex};
pub use linalg::{Matrix, SparseVec, Subspace};
pub use checks::{run_suite, Suite, SuiteInput, SuiteReport};
pub use cohomology::{CochainComplex, CohomologyReport, OperatorTag, Primitive, TildePrimitive, Variant};
pub use io::{FormJson, MorphismJson};
pub use operators::{FoliatedMorphism, MorphismPair};
pub use sequences::{ChainMap, Cover, LongExactSequenceReport, ShortExactSequence};
