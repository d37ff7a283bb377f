//! Construction, search and exact verification of unmixed Beauville structures and
//! ramification structures on alternating and symmetric groups, PSL(2,q) and (Z/nZ)².

pub mod arith;
pub mod gf;
pub mod perm;
pub mod group;
pub mod report;
pub mod par;
pub mod psl2;
pub mod structure;
pub mod an_search;
pub mod hunt;
