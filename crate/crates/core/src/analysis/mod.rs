//! Behaviour analysis: classification up to renaming, name tracking and
//! particle detection.

mod canonical;
mod particles;
mod trajectory;

pub use canonical::{
    canonical, canonical_rows, classify, classify_rules, BehaviourClass, CanonicalDiagram,
};
pub use particles::{
    background_mask, detect_classical_particles, detect_nominal_particles, Background, Particle,
    ParticleKind, ParticleScan, Window, MIN_PERIODS,
};
pub use trajectory::{track_name, Trajectory};
