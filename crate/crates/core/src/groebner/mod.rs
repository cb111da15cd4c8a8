//! Groebner bases and the ideal operations built on them.

mod buchberger;
mod ideal;
mod order;

pub use ideal::{
    reduction_steps, reset_reduction_steps, with_config, GbConfig, GroebnerBasis, Ideal,
    DEFAULT_MAX_STEPS,
};
pub use order::MonomialOrder;
