//! Exact coadjoint-orbit stratifications of graded nilpotent Lie algebras and of
//! Helffer–Nourrigat cones of singular filtrations.
//!
//! Everything is generic over a [`Scalar`] field; the aliases below fix it to the
//! exact rationals used by the CLI and the fixtures.

pub mod catalog;
pub mod cone;
pub mod error;
pub mod fixtures;
pub mod free;
pub mod io;
pub mod lie;
pub mod linalg;
pub mod morphism;
pub mod poly;
pub mod report;
pub mod sample;
pub mod scalar;
pub mod stratification;

pub use cone::{ConeConfig, ConeSample, CurveLimit, GradedBasis, OsculatingAlgebra, RationalCurve, SingularFiltration};
pub use error::{Error, Result};
pub use free::{free_algebra, FreeAlgebra, WeightedAlphabet};
pub use lie::{Covector, NilpotentLieAlgebra, Vector};
pub use morphism::{GradedMorphism, InducedBasis, MorphismReport};
pub use report::{stratify_cone, ReportConfig, SolvabilitySkeleton, StratifiedConeReport};
pub use scalar::{Rational, Scalar};
pub use stratification::{
    canonical_representative, classify_points, jump_invariant, Classification, JumpInvariant, JumpSet,
};

pub type LieAlgebraQ = NilpotentLieAlgebra<Rational>;
pub type CovectorQ = Covector<Rational>;
pub type VectorQ = Vector<Rational>;
pub type MorphismQ = GradedMorphism<Rational>;
pub type FiltrationQ = SingularFiltration<Rational>;
pub type FreeAlgebraQ = FreeAlgebra<Rational>;
pub type ClassificationQ = Classification<Rational>;
pub type ConeReportQ = StratifiedConeReport<Rational>;
