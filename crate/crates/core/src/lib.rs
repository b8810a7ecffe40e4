pub mod analysis;
pub mod cli;
pub mod expansion;
pub mod lexer;
pub mod names;
pub mod resource;
pub mod rigid;
pub mod syntax;
