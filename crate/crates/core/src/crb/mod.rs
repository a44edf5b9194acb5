//! Cramér-Rao bounds from discrete sums and from the full Fisher information.

pub mod fim;
pub mod reduced;
pub mod report;
pub mod terms;

pub use fim::{
    conditional_inner_products, fim_crb, fim_crb_conditional, fim_crb_with, statistical_inner_products, FimOptions,
    InnerProducts,
};
pub use reduced::{crb_phase_only, phase_only_bounds};
pub use report::{CrbMethod, CrbReport};
pub use terms::{intermediate_terms, IntermediateTerms};
