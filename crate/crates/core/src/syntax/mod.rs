//! Terms, actions and their concrete syntax.

mod action;
mod parser;
mod print;
mod term;

pub use action::{format_trace, parse_trace, shortlex, Action, Label, Name, Polarity, Trace};
pub use parser::{
    parse_configuration, parse_configuration_with, parse_definitions, parse_interface_parts,
    parse_process, parse_process_with, Definition, DefinitionFile, ParseError,
};
pub use term::{Configuration, Process};
