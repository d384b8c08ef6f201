mod chain;
mod matgroup;
mod perm;
mod permgroup;

pub use chain::{Cert, Letter, StabChain};
pub use matgroup::MatrixGroup;
pub use perm::Perm;
pub use permgroup::{CosetAction, PermGroup};
