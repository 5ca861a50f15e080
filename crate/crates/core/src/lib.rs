//! Computational approximate group theory: exact product sets over concrete
//! groups, Ruzsa covering certificates, structured set generators, law
//! checks and Cayley graph tools.

pub mod cayley;
pub mod covering;
pub mod error;
pub mod group;
pub mod laws;
pub mod setcalc;
pub mod structures;

pub use cayley::{
    build_cayley, build_cayley_with_order, cheeger, sl2_growth_probe, vertex_boundary, CayleyGraph, CheegerMode,
    CheegerResult, GrowthBranch, ProbeRow,
};
pub use covering::{
    certify_approx_group, power_cover, ruzsa_cover, tripling_chain, verify_certificate, CoverCertificate,
    CoverCheck, CoverKind,
};
pub use error::{Error, Result};
pub use group::{
    make_group, GroupContext, GroupDescriptor, GroupElement, HomKind, Homomorphism, Syllable, Word,
};
pub use setcalc::{doubling_stats, growth_ball, DoublingStats, ElementSet};
pub use structures::{
    box_corner_cover, expand, freiman_coset_check, lower_central_series, nilprog_sandwich_check, nilprogression,
    parse_spec, CosetCheckResult, QBoundMode, SandwichResult, StructuredSpec,
};
pub use laws::{run_law, write_csv, LawParams, LawReport, LawStatus};
