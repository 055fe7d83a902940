//! Residue rings `R/m`, their unit groups, characters trivial on units and
//! quadratic symbols.

mod character;
mod group;
mod quadratic;
mod ring;

pub(crate) use character::parse_pair;
pub use character::{char_conjugate, char_equal, char_mul, characters_trivial_on_units, primitive_characters, DirichletCharacter};
pub use group::UnitGroupStructure;
pub use quadratic::{epsilon_of, epsilon_t, is_square_mod, quadratic_symbol, splitting_symbol};
pub use ring::{Res, ResidueRing};
