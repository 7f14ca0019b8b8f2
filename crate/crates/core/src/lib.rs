pub mod dyadic_field;
pub mod error;
pub mod lattice_core;
pub mod quad_space;
pub mod representability;
pub mod universality;

pub use dyadic_field::{Elt, Field, IdealExp, SquareClass};
pub use error::{Error, Result};
pub use quad_space::SpaceInv;
pub use lattice_core::{GramMatrix, JordanComponent, JordanLattice, LatticeJson, Shape, SubKind};
pub use representability::{
    brute_force_represents, lower_type, represents_lattice, BruteOptions, Profile, RepValue, RepVerdict,
};
pub use universality::{
    classify, classify_classic_k_universal, classify_classic_universal, classify_k_universal,
    classify_universal, crosscheck, enumerate_classic_basic, enumerate_dominant, enumerate_family,
    oracle_k_universal, sample_family, ClassifyVerdict, CrossRecord, CrossReport, FamilySpec, Oracle,
};
