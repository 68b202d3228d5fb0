//! polyscat: a desk-scale laboratory for time-harmonic acoustic scattering
//! by 2D polygonal obstacles.
//!
//! The crate has four layers:
//!
//! * [`scene`] - polygonal scatterers, admissible-class checks, distances
//!   between scatterers (one-sided, boundary Hausdorff, set Hausdorff),
//!   reflections, symmetry detection, exterior-connectedness estimation and
//!   perturbation generators;
//! * [`helmholtz`] - a Nystrom boundary-integral solver for the exterior
//!   Helmholtz problem with sound-hard (Neumann) or sound-soft (Dirichlet)
//!   polygons, plus two independent oracles (cylindrical-harmonics disc
//!   series, method of fundamental solutions), far-field patterns and the
//!   error metrics between two solutions;
//! * [`propagation`] - regular chains of balls in the exterior domain,
//!   three-spheres propagation of smallness, field reflection, the flatness
//!   indicator on far annuli and the log-type stability moduli;
//! * [`lab`] - experiment orchestration: perturbation sweeps, stability
//!   records, majorant modulus fits, distance-relation audits and the
//!   single-measurement symmetry-degeneracy experiment.
//!
//! Data-parallel inner loops run on rayon when the default `parallel`
//! feature is enabled and fall back to identical sequential code without it;
//! see [`par`].

pub mod geom;
pub mod helmholtz;
pub mod lab;
pub mod par;
pub mod propagation;
pub mod quad;
pub mod scene;
pub mod special;
