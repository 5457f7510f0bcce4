//! Abstract syntax, text grammar and printer for the two-sorted statistical
//! language, plus knowledge-base files.

mod ast;
mod kb;
mod parser;
mod signature;

pub use ast::{Formula, Sentence, Term};
pub use kb::{parse_kb, parse_kb_file, KnowledgeBase};
pub use parser::{parse_sentence, Diagnostic};
pub use signature::{extract_signature, ArityClash, Signature};
