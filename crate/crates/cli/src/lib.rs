//! Script language and command implementations behind the `orekit` binary.

pub mod interp;
pub mod script;

pub use interp::{run_script, Interpreter, ScriptRun};
pub use script::{parse_line, parse_script, ParseError, Script, Stmt};
