//! A workbench for a small lazy functional language and its compilation
//! pipeline onto a stack-based object virtual machine.
//!
//! The pipeline has two independently checkable halves:
//!
//! * a source-level story: lambda terms are translated to a small object
//!   calculus ([`mujava`]) in which closures and thunks are objects
//!   ([`translate`]), and nested classes are then flattened with heap
//!   allocated frames ([`lift`]);
//! * a machine-level story: lambda terms compile to a small thunk-aware
//!   instruction set ([`ebgvm`]) which macro-expands to the target VM
//!   instruction set with the same class flattening built in ([`targetvm`]),
//!   packaged and linked by a load-once loader ([`loader`]).
//!
//! Differential checks ([`check`]) run both halves against the reference
//! interpreter ([`lambda`]) on the same terms and demand agreement.

pub mod check;
pub mod env;
pub mod ebgvm;
pub mod fuel;
pub mod lambda;
pub mod lift;
pub mod loader;
pub mod mujava;
pub mod source;
pub mod targetvm;
pub mod translate;
