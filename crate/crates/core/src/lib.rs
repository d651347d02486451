//! Matroids over idylls, submonomial morphisms, quiver matroids and the Tits spaces of
//! quiver Grassmannians.

pub mod catalogue;
pub mod classical;
pub mod error;
pub mod f1;
pub mod grading;
pub mod ground;
pub mod idyll;
pub mod json;
pub mod matroid;
pub mod morphism;
pub mod quiver;
pub mod quiver_matroid;
pub mod qr;
pub mod subset;
pub mod tits;

pub use error::{Error, Result};
pub use ground::GroundSet;
pub use idyll::{Elem, FormalSum, Idyll, IdyllElement, IdyllMorphism};
pub use matroid::{gp_validate, Matroid, PlueckerVector, VectorF, DEFAULT_BUDGET};
pub use morphism::SubmonomialMatrix;
pub use subset::Subset;
pub use f1::{F1LinearMap, PointedMap};
pub use grading::Grading;
pub use quiver::{F1Rep, Quiver};
pub use quiver_matroid::QuiverMatroid;
pub use tits::{Certificate, EulerReport};
