//! Text formats for the `sqroot` command line: the DIMACS-style instance
//! file and Graphviz output.

pub mod format;
