//! Library surface of the command-line tool: the output documents and the
//! verification suites, shared between the binary and its integration tests.

pub mod output;
pub mod suites;
