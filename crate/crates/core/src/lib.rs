//! Core library for classifying finite groups by strong symmetric
//! genus: permutation-group arithmetic, a small-groups catalog,
//! Riemann–Hurwitz candidate enumeration, elimination filters, the
//! surface-kernel epimorphism search, and the per-genus pipeline.

pub mod catalog;
pub mod classify;
pub mod db;
pub mod episearch;
pub mod filters;
pub mod group;
pub mod perm;
pub mod signature;

pub use catalog::{Catalog, CatalogError, CatalogManifest, CatalogRecord, GroupId, OrderLookup};

/// The catalogs compiled into the library.
pub mod bundled_catalogs {
    pub use crate::catalog::bundled_extended_catalog as extended;
    pub use crate::catalog::bundled_genus2_catalog as genus2;
}
pub use classify::{
    classify_genus, has_genus_one, has_genus_zero, nu_table, plot_csv, revalidate_stored,
    ClassifyError, GenusRecord, RejectLog,
};
pub use db::{ClassificationDb, DbError, DbRecord, StoredWitness};
pub use episearch::{
    brute_force_epi_exists, find_surface_kernel_epi, validate_witness, SearchError, Witness,
};
pub use filters::{
    abelian_epi_exists, abelian_ske_exists, hurwitz_ok, prime_signature_ok, run_filters,
    signature_abelianization, FilterError, FilterVerdict, RejectReason, SignatureAbelianization,
};
pub use group::{AbelianInvariants, ConjugacyClass, ElemId, FiniteGroup, GroupError};
pub use perm::{compose, PermError, Permutation};
pub use signature::{
    candidate_pairs, large_order_signatures, order_for, rh_genus, CandidatePair, Rational,
    Signature, SignatureError,
};
