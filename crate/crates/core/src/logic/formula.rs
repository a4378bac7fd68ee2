use std::collections::BTreeSet;
use std::fmt;

use super::vocabulary::{AtomId, Sublanguage, Vocabulary};

/// Propositional formula over the atoms of a [`Vocabulary`].
///
/// Equality and ordering are syntactic. Sets of formulas are never closed
/// under consequence, so two equivalent formulas are distinct members.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Atom(AtomId),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

/// Finite, duplicate-free, order-insensitive set of formulas.
pub type FormulaSet = BTreeSet<Formula>;

impl Formula {
    pub fn atom(id: AtomId) -> Self {
        Formula::Atom(id)
    }

    pub fn literal(id: AtomId, positive: bool) -> Self {
        if positive {
            Formula::Atom(id)
        } else {
            Formula::Atom(id).not()
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Self {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Self {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Formula) -> Self {
        Formula::Implies(Box::new(self), Box::new(other))
    }

    /// Calls `f` on every atom occurrence.
    pub fn visit_atoms(&self, f: &mut impl FnMut(AtomId)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(id) => f(*id),
            Formula::Not(x) => x.visit_atoms(f),
            Formula::And(x, y) | Formula::Or(x, y) | Formula::Implies(x, y) => {
                x.visit_atoms(f);
                y.visit_atoms(f);
            }
        }
    }

    pub fn atoms(&self) -> BTreeSet<AtomId> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |id| {
            out.insert(id);
        });
        out
    }

    /// Truth value under `value`, which maps each atom to its assignment.
    pub fn eval(&self, value: &impl Fn(AtomId) -> bool) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(id) => value(*id),
            Formula::Not(x) => !x.eval(value),
            Formula::And(x, y) => x.eval(value) && y.eval(value),
            Formula::Or(x, y) => x.eval(value) || y.eval(value),
            Formula::Implies(x, y) => !x.eval(value) || y.eval(value),
        }
    }

    /// `Some((atom, polarity))` when the formula is an atom or a negated atom.
    pub fn as_literal(&self) -> Option<(AtomId, bool)> {
        match self {
            Formula::Atom(id) => Some((*id, true)),
            Formula::Not(inner) => match inner.as_ref() {
                Formula::Atom(id) => Some((*id, false)),
                _ => None,
            },
            _ => None,
        }
    }

    /// True iff every atom of the formula lies in `lang`. Atom-free formulas
    /// belong to every sublanguage.
    pub fn in_sublanguage(&self, vocabulary: &Vocabulary, lang: Sublanguage) -> bool {
        let mut ok = true;
        self.visit_atoms(&mut |id| ok &= vocabulary.in_sublanguage(id, lang));
        ok
    }

    /// Renames atoms through `map`.
    pub fn map_atoms(&self, map: &impl Fn(AtomId) -> AtomId) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(id) => Formula::Atom(map(*id)),
            Formula::Not(x) => x.map_atoms(map).not(),
            Formula::And(x, y) => x.map_atoms(map).and(y.map_atoms(map)),
            Formula::Or(x, y) => x.map_atoms(map).or(y.map_atoms(map)),
            Formula::Implies(x, y) => x.map_atoms(map).implies(y.map_atoms(map)),
        }
    }

    pub fn display<'a>(&'a self, vocabulary: &'a Vocabulary) -> DisplayFormula<'a> {
        DisplayFormula {
            formula: self,
            vocabulary,
        }
    }

    pub fn to_source(&self, vocabulary: &Vocabulary) -> String {
        self.display(vocabulary).to_string()
    }
}

// Binding strength: `->` 1, `|` 2, `&` 3, `!` 4, atoms 5.
fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Implies(..) => 1,
        Formula::Or(..) => 2,
        Formula::And(..) => 3,
        Formula::Not(..) => 4,
        _ => 5,
    }
}

/// Prints a formula in the concrete grammar with the fewest parentheses that
/// still parse back to the same tree.
pub struct DisplayFormula<'a> {
    formula: &'a Formula,
    vocabulary: &'a Vocabulary,
}

impl DisplayFormula<'_> {
    fn write(&self, f: &mut fmt::Formatter<'_>, node: &Formula, min_prec: u8) -> fmt::Result {
        let prec = precedence(node);
        let wrap = prec < min_prec;
        if wrap {
            f.write_str("(")?;
        }
        match node {
            Formula::True => f.write_str("true")?,
            Formula::False => f.write_str("false")?,
            Formula::Atom(id) => f.write_str(self.vocabulary.name(*id))?,
            Formula::Not(x) => {
                f.write_str("!")?;
                self.write(f, x, 4)?;
            }
            // `&` and `|` associate to the left, `->` to the right.
            Formula::And(x, y) => {
                self.write(f, x, 3)?;
                f.write_str(" & ")?;
                self.write(f, y, 4)?;
            }
            Formula::Or(x, y) => {
                self.write(f, x, 2)?;
                f.write_str(" | ")?;
                self.write(f, y, 3)?;
            }
            Formula::Implies(x, y) => {
                self.write(f, x, 2)?;
                f.write_str(" -> ")?;
                self.write(f, y, 1)?;
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for DisplayFormula<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.formula, 0)
    }
}

/// Renders a formula set as `{x, y, ...}` in canonical order.
pub fn display_set(set: &FormulaSet, vocabulary: &Vocabulary) -> String {
    let items: Vec<String> = set.iter().map(|f| f.to_source(vocabulary)).collect();
    format!("{{{}}}", items.join(", "))
}
