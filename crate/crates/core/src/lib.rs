//! Stokes eigenproblem in the doubly-periodic channel `T² × (-1, 1)` with
//! slip-with-friction walls: exact spectrum, separable eigenfunctions,
//! Helmholtz–Leray projection and Galerkin Navier–Stokes evolution.

pub mod eigen;
pub mod error;
pub mod format;
pub mod galerkin;
pub mod helmholtz;
pub mod lattice;
pub mod modes;
pub mod planar;
pub mod profile;
pub mod quadrature;
pub mod roots;
pub mod spectral;
pub mod verify;

pub use eigen::{eigenvalue, Branch, Eigenvalue, EigenvalueBracket};
pub use error::{Error, Result};
pub use modes::{build_mode, enumerate_spectrum, EigenMode, Family, SpectrumEntry, SpectrumTable, Witness};
pub use planar::{Harmonic, PlanarField, SampleGrid, ScalarField};
pub use profile::ZProfile;
pub use spectral::{Friction, PlanarCoeffs, PressureClass, WaveIndex};
