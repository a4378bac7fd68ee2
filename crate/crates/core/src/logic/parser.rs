//! Recursive-descent parser for the formula grammar:
//!
//! ```text
//! implication := disjunction ("->" implication)?
//! disjunction := conjunction ("|" conjunction)*
//! conjunction := unary ("&" unary)*
//! unary       := "!" unary | "(" implication ")" | "true" | "false" | ATOM
//! ```

use super::formula::Formula;
use super::vocabulary::Vocabulary;
use super::LogicError;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token<'s> {
    Ident(&'s str),
    Not,
    And,
    Or,
    Arrow,
    LParen,
    RParen,
}

impl Token<'_> {
    fn describe(&self) -> String {
        match self {
            Token::Ident(s) => format!("`{s}`"),
            Token::Not => "`!`".into(),
            Token::And => "`&`".into(),
            Token::Or => "`|`".into(),
            Token::Arrow => "`->`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token<'_>)>, LogicError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let token = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'!' => Token::Not,
            b'&' => Token::And,
            b'|' => Token::Or,
            b'(' => Token::LParen,
            b')' => Token::RParen,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Token::Arrow
            }
            b'=' if bytes.get(i + 1) == Some(&b'>') => {
                return Err(LogicError::Syntax {
                    offset: start,
                    message: "`=>` separates rules and is not a formula connective".into(),
                });
            }
            c if c.is_ascii_alphabetic() => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                Token::Ident(&text[start..=i])
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(LogicError::Syntax {
                    offset: start,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        };
        i += 1;
        tokens.push((start, token));
    }
    Ok(tokens)
}

struct Parser<'s, 'v> {
    tokens: Vec<(usize, Token<'s>)>,
    pos: usize,
    end: usize,
    vocabulary: &'v Vocabulary,
}

impl<'s> Parser<'s, '_> {
    fn peek(&self) -> Option<&Token<'s>> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn unexpected(&self, expected: &str) -> LogicError {
        let found = self.peek().map_or_else(|| "end of input".to_string(), Token::describe);
        LogicError::Syntax {
            offset: self.offset(),
            message: format!("expected {expected}, found {found}"),
        }
    }

    fn implication(&mut self) -> Result<Formula, LogicError> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Token::Arrow) {
            self.pos += 1;
            let rhs = self.implication()?;
            return Ok(lhs.implies(rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, LogicError> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(&Token::Or) {
            self.pos += 1;
            lhs = lhs.or(self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, LogicError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Token::And) {
            self.pos += 1;
            lhs = lhs.and(self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, LogicError> {
        let offset = self.offset();
        match self.peek().cloned() {
            Some(Token::Not) => {
                self.pos += 1;
                Ok(self.unary()?.not())
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.implication()?;
                if self.peek() != Some(&Token::RParen) {
                    return Err(self.unexpected("`)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(Token::Ident("true")) => {
                self.pos += 1;
                Ok(Formula::True)
            }
            Some(Token::Ident("false")) => {
                self.pos += 1;
                Ok(Formula::False)
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                self.vocabulary
                    .lookup(name)
                    .map(Formula::Atom)
                    .ok_or_else(|| LogicError::UndeclaredAtom {
                        name: name.to_string(),
                        offset,
                    })
            }
            _ => Err(self.unexpected("a formula")),
        }
    }
}

/// Parses `text` against `vocabulary`. Offsets in errors are byte offsets
/// into `text`.
pub fn parse_formula(text: &str, vocabulary: &Vocabulary) -> Result<Formula, LogicError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: text.len(),
        vocabulary,
    };
    let formula = parser.implication()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.unexpected("end of formula"));
    }
    Ok(formula)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{AgentId, AtomClass};

    fn vocab() -> Vocabulary {
        Vocabulary::new([
            ("a", AtomClass::Decision(AgentId(0))),
            ("b", AtomClass::Decision(AgentId(0))),
            ("p", AtomClass::World),
            ("q", AtomClass::World),
            ("r", AtomClass::World),
        ])
        .unwrap()
    }

    fn atom(v: &Vocabulary, n: &str) -> Formula {
        Formula::atom(v.lookup(n).unwrap())
    }

    #[test]
    fn negation_of_atom() {
        let v = vocab();
        assert_eq!(parse_formula("!p", &v).unwrap(), atom(&v, "p").not());
    }

    #[test]
    fn rule_arrow_is_a_syntax_error() {
        let v = vocab();
        match parse_formula("b => p", &v) {
            Err(LogicError::Syntax { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn precedence_matches_hand_built_tree() {
        let v = vocab();
        let expected = atom(&v, "a").and(atom(&v, "q").not()).or(atom(&v, "r"));
        assert_eq!(parse_formula("a & !q | r", &v).unwrap(), expected);

        let expected = atom(&v, "a").implies(atom(&v, "p").implies(atom(&v, "q")));
        assert_eq!(parse_formula("a -> p -> q", &v).unwrap(), expected);

        let expected = atom(&v, "a")
            .or(atom(&v, "b").and(atom(&v, "p")))
            .implies(atom(&v, "q"));
        assert_eq!(parse_formula("a | b & p -> q", &v).unwrap(), expected);

        let expected = atom(&v, "a").and(atom(&v, "b")).and(atom(&v, "p"));
        assert_eq!(parse_formula("a & b & p", &v).unwrap(), expected);
    }

    #[test]
    fn constants_and_parentheses() {
        let v = vocab();
        assert_eq!(parse_formula("true", &v).unwrap(), Formula::True);
        assert_eq!(
            parse_formula("!(false | p)", &v).unwrap(),
            Formula::False.or(atom(&v, "p")).not()
        );
    }

    #[test]
    fn undeclared_atom_is_named() {
        let v = vocab();
        assert_eq!(
            parse_formula("p & zz", &v),
            Err(LogicError::UndeclaredAtom {
                name: "zz".into(),
                offset: 4
            })
        );
    }

    #[test]
    fn malformed_inputs() {
        let v = vocab();
        for text in ["", "p &", "(p", "p q", "p)", "p $ q", "->", "!"] {
            assert!(
                matches!(parse_formula(text, &v), Err(LogicError::Syntax { .. })),
                "{text:?} should not parse"
            );
        }
    }
}
