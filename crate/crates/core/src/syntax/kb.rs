use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;

use crate::syntax::ast::Sentence;
use crate::syntax::parser::{parse_statements, Diagnostic};
use crate::syntax::signature::{extract_signature, ArityClash, Signature};

/// An ordered, finite list of sentences given explicitly. There is no
/// closure operation: the engine only ever looks at what is written down.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KnowledgeBase {
    sentences: Vec<Sentence>,
    labels: Vec<String>,
    warnings: Vec<String>,
}

impl KnowledgeBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_sentences(sentences: impl IntoIterator<Item = Sentence>) -> Self {
        let mut kb = KnowledgeBase::new();
        for (i, s) in sentences.into_iter().enumerate() {
            kb.push(s, format!("#{i}"));
        }
        kb
    }

    pub fn push(&mut self, sentence: Sentence, label: impl Into<String>) {
        let label = label.into();
        if let Some(i) = self.sentences.iter().position(|s| *s == sentence) {
            self.warnings.push(format!(
                "{label}: duplicate of sentence at {}: {sentence}",
                self.labels[i]
            ));
        }
        self.sentences.push(sentence);
        self.labels.push(label);
    }

    pub fn sentences(&self) -> &[Sentence] {
        &self.sentences
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn contains(&self, sentence: &Sentence) -> bool {
        self.sentences.contains(sentence)
    }

    /// The sub-knowledge-base made of the given sentence ids, in id order.
    pub fn subset(&self, ids: &[usize]) -> KnowledgeBase {
        let mut kb = KnowledgeBase::new();
        for &i in ids {
            kb.push(self.sentences[i].clone(), self.labels[i].clone());
        }
        kb
    }

    pub fn signature(&self, extra: &[Sentence]) -> Result<Signature, ArityClash> {
        extract_signature(&self.sentences, extra)
    }
}

impl fmt::Display for KnowledgeBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.sentences {
            writeln!(f, "{s}.")?;
        }
        Ok(())
    }
}

/// Parses knowledge-base text. All diagnostics are collected, including
/// arity clashes between statements.
pub fn parse_kb(text: &str) -> Result<KnowledgeBase, Vec<Diagnostic>> {
    parse_kb_with_source(text, None)
}

/// Reads and parses a knowledge-base file. Labels and diagnostics carry the
/// path.
pub fn parse_kb_file(path: &Path) -> Result<KnowledgeBase, Vec<Diagnostic>> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| {
        vec![Diagnostic {
            line: 0,
            column: 0,
            message: format!("cannot read file: {e}"),
            source: Some(name.clone()),
        }]
    })?;
    parse_kb_with_source(&text, Some(&name))
}

fn parse_kb_with_source(text: &str, source: Option<&str>) -> Result<KnowledgeBase, Vec<Diagnostic>> {
    let (statements, mut diags) = parse_statements(text);
    diags.extend(arity_diagnostics(&statements));
    diags.sort_by_key(|d| (d.line, d.column));
    if !diags.is_empty() {
        for d in &mut diags {
            d.source = source.map(str::to_string);
        }
        return Err(diags);
    }
    let mut kb = KnowledgeBase::new();
    for (s, line) in statements {
        let label = match source {
            Some(src) => format!("{src}:{line}"),
            None => format!("line {line}"),
        };
        kb.push(s, label);
    }
    Ok(kb)
}

fn arity_diagnostics(statements: &[(Sentence, usize)]) -> Vec<Diagnostic> {
    let mut seen: HashMap<(&'static str, String), (usize, usize)> = HashMap::new();
    let mut out = BTreeMap::new();
    for (s, line) in statements {
        let mut sig = Signature::new();
        // A clash inside a single sentence surfaces from add_formula.
        if let Err(ArityClash {
            kind,
            name,
            first,
            second,
        }) = sig.add_formula(s.formula())
        {
            out.insert(
                (*line, kind, name.clone()),
                Diagnostic {
                    line: *line,
                    column: 1,
                    message: format!("{kind} `{name}` used with arity {first} and arity {second}"),
                    source: None,
                },
            );
        }
        let mut record = |kind: &'static str, name: &str, arity: usize| {
            let key = (kind, name.to_string());
            match seen.get(&key) {
                Some(&(first, first_line)) if first != arity => {
                    out.entry((*line, kind, name.to_string())).or_insert_with(|| Diagnostic {
                        line: *line,
                        column: 1,
                        message: format!(
                            "{kind} `{name}` used with arity {arity} here but arity {first} on line {first_line}"
                        ),
                        source: None,
                    });
                }
                Some(_) => {}
                None => {
                    seen.insert(key, (arity, *line));
                }
            }
        };
        for (p, &a) in &sig.predicates {
            record("predicate", p, a);
        }
        for (f, &a) in &sig.functions {
            record("function", f, a);
        }
    }
    out.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;
    use crate::syntax::ast::Formula;

    #[test]
    fn empty_file() {
        assert!(parse_kb("").unwrap().is_empty());
        assert!(parse_kb("# only a comment\n").unwrap().is_empty());
    }

    #[test]
    fn two_lines_with_decimal() {
        let kb = parse_kb("B(a).\n%(A(x),B(x),0.8,0.9).").unwrap();
        assert_eq!(kb.len(), 2);
        match kb.sentences()[1].formula() {
            Formula::Stat { lower, upper, .. } => {
                assert_eq!(*lower, Rational::new(4, 5));
                assert_eq!(*upper, Rational::new(9, 10));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(kb.labels(), ["line 1", "line 2"]);
    }

    #[test]
    fn arity_clash_names_both_arities() {
        let diags = parse_kb("P(a). P(a,b).").unwrap_err();
        assert_eq!(diags.len(), 1);
        let m = &diags[0].message;
        assert!(m.contains("`P`") && m.contains('1') && m.contains('2'), "{m}");
    }

    #[test]
    fn collects_every_diagnostic() {
        let diags = parse_kb("P(x).\nQ(a) Q(b).\n%(A(x), B(x), 1, 0).").unwrap_err();
        assert_eq!(diags.iter().map(|d| d.line).collect::<Vec<_>>(), [1, 2, 3]);
    }

    #[test]
    fn duplicates_warn() {
        let kb = parse_kb("P(a).\nP(a).").unwrap();
        assert_eq!(kb.len(), 2);
        assert_eq!(kb.warnings().len(), 1);
    }

    #[test]
    fn subset_keeps_labels() {
        let kb = parse_kb("P(a).\nQ(b).\nR(c).").unwrap();
        let sub = kb.subset(&[0, 2]);
        assert_eq!(sub.to_string(), "P(a).\nR(c).\n");
        assert_eq!(sub.labels(), ["line 1", "line 3"]);
    }

    #[test]
    fn missing_file() {
        let diags = parse_kb_file(Path::new("/nonexistent/kb.txt")).unwrap_err();
        assert!(diags[0].message.contains("cannot read"));
    }
}
