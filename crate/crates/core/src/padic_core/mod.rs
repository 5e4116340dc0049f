//! Exact arithmetic over the rationals seen inside `Q_p` or `R`.

mod circle;
mod expansion;
mod lambda;
mod place;
mod rat;

pub use circle::ExactCircle;
pub use expansion::{digits, frac_part, legendre, norm, valuation, PadicDigits};
pub use lambda::{character, lambda_fn};
pub use place::{is_prime, Place, Valuation};
pub use rat::{rat, Rat};

pub(crate) use expansion::{split_unit, unit_residue};
