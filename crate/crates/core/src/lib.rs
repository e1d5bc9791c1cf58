//! An abstract machine for classical realizability with `cc`, oracle
//! constants and the bar recursion operator.

pub mod barrec;
pub mod compiler;
pub mod fixture;
pub mod gen;
pub mod lexer;
pub mod machine;
pub mod oracle_lab;
pub mod process;
pub mod registry;
pub mod subst;
pub mod suites;
pub mod syntax;
pub mod term;

pub use machine::{Machine, MachineError, PoleResult, RunOutcome, Status, StepResult, Stuck, TraceMode};
pub use process::{append_stack, mk_continuation, Process, Stack};
pub use registry::{sequence, RegistryError, SeqRegistry, Sequence};
pub use term::{decode_numeral, mk_ell, mk_numeral, Class, Const, OccTag, OracleHandle, Term};
