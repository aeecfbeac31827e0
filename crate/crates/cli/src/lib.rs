//! Workspace files, command dispatch and JSON reports for the `minmodel` tool.

pub mod cli;
pub mod run;
pub mod workspace;

pub use cli::{invoke, Invocation};
pub use run::{run, Command, Overrides, RunError, RunReport};
pub use workspace::{load_workspace, parse_workspace, serialize_workspace, Workspace, WorkspaceError};
