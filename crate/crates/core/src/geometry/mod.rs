//! Lattice configurations, Mustafin models and their special fibers.

pub mod components;
pub mod lattice;
pub mod model;

pub use components::{
    minimal_transversals, star_like_experiment, verify_component_decomposition, CatalogMode, ComponentCatalog,
    ComponentReport, ContainmentVerdict, MonomialPrime, StarLikeSummary, TrialReport,
};
pub use lattice::{block_names, curve_ring, model_grading, model_ring, parse_field, plane_ring, LatticeConfiguration};
pub use model::{
    curve_model_ideal, is_t_saturated, mustafin_ideal, mustafin_minors, single_projection_model, special_fiber,
    t_saturate_ideal, PlaneCurve, SingleProjection,
};
