//! Geometric scene model and channel synthesis: image-method rays, knife-edge
//! body blockage, body scattering and beam-space CTF rendering.

mod blockage;
mod config;
mod model;
mod paths;
mod scatter;
mod synth;

pub use blockage::{
    blockage_attenuation, fresnel_parameter, knife_edge_loss_db, EdgeGeometry, CLEARANCE_CUTOFF_FRESNEL,
};
pub use config::{default_setup, SceneSetup, DEFAULT_SCENE_TOML, DEFAULT_STACK_OFFSET, SCENE_SCHEMA};
pub use model::{
    direction_angles, BodyModel, PathKind, Person, PropagationPath, Reflector, Room, Scene, Site, Sites,
};
pub use paths::enumerate_paths;
pub use scatter::{equivalent_cross_section, human_scatter_amplitude};
pub use synth::{noise_spec, noise_stream_seed, render_ctf, synthesize_all, synthesize_ctf, NoiseSpec};
