//! # blockdim
//!
//! Prediction complexity and block entropy of binary sequences.
//!
//! The crate measures how predictable a finite binary word is, in two
//! related ways:
//!
//! | Quantity | Meaning | Module |
//! |----------|---------|--------|
//! | `β_ℓ(w)` | error rate of the best predictor that guesses a symbol from the ℓ symbols *after* it | [`rauzy`] |
//! | `γ_ℓ(w)` | error rate of the best predictor that guesses a symbol from the ℓ symbols *before* it | [`rauzy`] |
//! | `h_ℓ(w)` | non-aligned (sliding-window) ℓ-block entropy, normalized by ℓ | [`entropy`] |
//! | `H(X_ℓ \| X_0..X_{ℓ-1})` | conditional entropy of the last symbol of a random window | [`entropy`] |
//!
//! For every word and every ℓ the finite-scale chain
//! `2·γ_ℓ ≤ H(X_ℓ | X_0..X_{ℓ-1}) ≤ η(γ_ℓ)` holds exactly; [`bounds`] checks it.
//!
//! Exact asymptotics come from [`markov`]: symbol-labeled Markov chains are
//! analysed in arbitrary-precision rationals (stationary distribution,
//! cylinder measures, limit values of `β_ℓ`/`γ_ℓ`, snake chains).
//! [`generators`] produces the reference sequence families (Champernowne,
//! Sturmian, Bernoulli, Markov walks, the sharpness interleaving) and
//! [`addition`] adds sequences with carry tracking.
//!
//! ## Quick start
//!
//! ```
//! use blockdim::{bitseq::Word, rauzy, entropy};
//!
//! let w: Word = "00110011".parse().unwrap();
//! let gamma = rauzy::gamma_ell(&w, 1).unwrap();
//! assert_eq!(gamma.value().to_string(), "3/7");
//! let h = entropy::block_entropy_h(&w, 1).unwrap();
//! assert!((h - 1.0).abs() < 1e-12);
//! ```

pub mod addition;
pub mod bitseq;
pub mod bounds;
pub mod cli;
pub mod entropy;
pub mod error;
pub mod exact;
pub mod generators;
pub mod markov;
pub mod rauzy;

pub use error::{Error, Result};
pub use exact::Rational;
