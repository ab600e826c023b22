//! Decision procedures for inclusions and random embeddings between Hardy,
//! Bergman and mixed norm spaces, the witness series on the far side of each
//! boundary, and `(p, q)` grid export.

mod decide;
mod grid;
mod scalar;
mod witness;

pub use decide::{
    hardy_mixed_inclusion_decide, inclusion_decide, littlewood_disk_decide, random_bergman_decide,
    random_embedding_decide, random_embedding_decide_with, Direction, RegionVerdict, Rule,
};
pub use grid::{
    region_grid, write_csv, Axis, GridDecider, GridRow, GridSpec, Preset, DEFAULT_GRID,
};
pub use scalar::{parse_rational, Scalar, BOUNDARY_TOLERANCE};
pub(crate) use scalar::{require_positive, require_weight};
pub use witness::{
    f3_even_norm_power, forelli_rudin_profile, forelli_rudin_reference, lacunary_proxy,
    lacunary_proxy_levels, witness_f1, witness_f2, witness_f3, witness_for, ForelliRudinProfile,
    WitnessFamily, MAX_LACUNARY_LEVEL,
};
