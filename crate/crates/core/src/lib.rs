//! Space-time computing networks.
//!
//! Values are spike arrival times in the finite algebra `S_k`. The crate
//! covers the primitive operators and their axioms ([`value`], [`axioms`]),
//! an equation language ([`expr`]), feedforward gate netlists ([`network`]),
//! table-to-equation synthesis and minimization ([`synth`]), pulse-mode
//! state machine models of the gates ([`fsm`]), and gamma-synchronized
//! multi-segment systems ([`system`]).

pub mod axioms;
pub mod error;
pub mod expr;
pub mod fsm;
pub mod network;
pub mod synth;
pub mod system;
pub mod value;

pub use error::{Error, Result};
pub use value::{apply_binary, delay_finite, AlgebraConfig, BinOp, OpKind, TValue};
