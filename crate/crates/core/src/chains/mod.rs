//! Chain complexes of cubical and simplicial sets, homology, graded maps,
//! tensor products, long exact sequences and the comparison map S.

mod complex;
mod eta;
mod homology;
mod les;
mod maps;
mod smap;
mod tensor;

pub use complex::{build_cubical_complex, build_simplicial_complex, Backing, ChainComplex, Flavor, NONE};
pub use eta::{eta_on_cell, eta_section, xi_projection};
pub use homology::{homology, homology_bounded, homology_default, GeneratorJson, HomologyJson, HomologySummary};
pub use les::{
    les_gamma, les_l_relative, long_exact_sequence, mapping_cone, ses_from_subbasis, ses_from_surjection,
    ExactnessNode, LesReport, ShortExactSequence,
};
pub use maps::{induced_matrix, verify_chain_map, verify_homotopy, GradedMap, MapFailure, MapReport};
pub use smap::{
    antisymmetrization_compare, antisymmetrization_terms, bar_complex, conj_rack_complex, inclusion_map, l_to_rack_map,
    s_map, s_terms_cubical, s_terms_rack, AntisymmetrizationReport, SMap, SMode,
};
pub use tensor::{tensor_complex, tensor_maps, twist_map, TensorLayout};

#[cfg(test)]
mod tests;
