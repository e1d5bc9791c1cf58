//! λ front end: parsing, bracket abstraction, the builtin table, and
//! behavioral comparison of terms.

pub mod bracket;
pub mod builtins;
pub mod equiv;
pub mod lambda;

pub use bracket::{bracket_abstract, compile_str, CompileError, Env, S_STAR};
pub use builtins::{builtin, builtin_env, compile_lambda_form, lambda_form, NAMES as BUILTIN_NAMES};
pub use equiv::{behavioral_equiv, behavioral_equiv_with, compare_processes, EquivConfig, Probe, Verdict};
pub use lambda::{parse, LambdaTerm};
