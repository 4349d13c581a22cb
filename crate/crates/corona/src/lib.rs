//! Apollonian disk packings, tangency spinors, and corona areas.
//!
//! The crate has two halves that check each other:
//!
//! * an exact geometric kernel — disks in inversive coordinates
//!   ([`disk`]), tangency spinors and their identities ([`spinor`]),
//!   Stern-Brocot spinor arrays and coprime enumeration
//!   ([`sternbrocot`]), and a brute-force packing generator with corona
//!   extraction ([`oracle`]);
//! * a summation layer ([`zeta`]) that evaluates corona areas as shifted
//!   lattice sums over coprime index pairs, with rigorous truncation
//!   tails, deterministic parallel accumulation, and exact rational
//!   partial sums for cross-checking against the oracle.
//!
//! [`checks`] bundles the identity suites the `verify` CLI subcommand
//! runs; [`render`] draws packings as SVG.

pub mod checks;
pub mod disk;
pub mod error;
pub mod oracle;
pub mod rat;
pub mod render;
pub mod spinor;
pub mod sternbrocot;
pub mod summation;
pub mod zeta;

pub use disk::{descartes_check, descartes_complete, euclid_param_square, pythagorean_triple};
pub use disk::{DescartesQuad, DiskSymbol};
pub use error::{Error, Result};
pub use oracle::{
    corona_area_direct, corona_of, curvature_multiset, generate_packing, generate_packing_clipped,
    neighbor_spinor_frames, Corona, Packing, Region,
};
pub use rat::Rat;
pub use render::{render_svg, RenderSpec};
pub use spinor::{
    add_spinors, check_curl, disk_from_spinor, harmonized, tangency_spinor, Spinor, TangencySpinor,
};
pub use sternbrocot::{coprime, enumerate_coprime, sb_row, sb_row_curvatures, IndexSet};
pub use zeta::{
    corona_area, corona_curvatures_leq, corona_partial_sum_exact, curvature_polynomial,
    epstein_zeta, ford_corona_area, fragment_area, fragment_partial_sum_exact, geo_zeta,
    sl2_transform, totient_series, totient_sieve, QuadForm, SpinorFrame, SumResult, ZetaParams,
};
