//! Concrete finite groups, maps onto them, and the subgroup machinery built
//! on kernels of such maps: coset tables, Reidemeister–Schreier rewriting and
//! abelianization.

pub mod abelian;
pub mod coset;
pub mod group;
pub mod hom;
pub mod schreier;
pub mod smith;

pub use abelian::{abelianization, AbelianClass, Abelianization};
pub use coset::{cayley_coset_table, cayley_coset_table_with_priority, CosetError, CosetTable};
pub use group::{
    generated_subgroup, CyclicElement, DihedralElement, FiniteGroup, GroupElement, GroupError,
    Permutation,
};
pub use hom::FiniteHom;
pub use schreier::{reidemeister_schreier, RewriteError, SchreierGenerator, SubgroupPresentation};
pub use smith::{smith_normal_form, IntMatrix, SmithForm};
