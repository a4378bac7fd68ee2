use super::formula::Formula;
use super::vocabulary::AtomId;
use super::LogicError;

/// Default cap on the number of atoms a single entailment query may range over.
pub const DEFAULT_MAX_ATOMS: usize = 24;

/// Classical entailment by model enumeration.
///
/// Premise sets are read conjunctively. Only atoms occurring in the query are
/// enumerated; assignments to the remaining vocabulary cannot change the
/// answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Reasoner {
    max_atoms: usize,
}

impl Default for Reasoner {
    fn default() -> Self {
        Reasoner {
            max_atoms: DEFAULT_MAX_ATOMS,
        }
    }
}

impl Reasoner {
    pub fn new(max_atoms: usize) -> Self {
        Reasoner { max_atoms }
    }

    pub fn max_atoms(&self) -> usize {
        self.max_atoms
    }

    /// True iff every assignment satisfying all premises satisfies
    /// `conclusion`.
    pub fn entails<'a, I>(&self, premises: I, conclusion: &Formula) -> Result<bool, LogicError>
    where
        I: IntoIterator<Item = &'a Formula>,
    {
        let premises: Vec<&Formula> = premises.into_iter().collect();
        Ok(self.countermodel(&premises, conclusion)?.is_none())
    }

    /// True iff some assignment satisfies every premise.
    pub fn consistent<'a, I>(&self, premises: I) -> Result<bool, LogicError>
    where
        I: IntoIterator<Item = &'a Formula>,
    {
        Ok(!self.entails(premises, &Formula::False)?)
    }

    /// An assignment (as the set of true atoms) satisfying the premises and
    /// falsifying the conclusion, if one exists.
    pub fn countermodel(&self, premises: &[&Formula], conclusion: &Formula) -> Result<Option<Vec<AtomId>>, LogicError> {
        let mut atoms: Vec<AtomId> = Vec::new();
        let mut collect = |id: AtomId| atoms.push(id);
        conclusion.visit_atoms(&mut collect);
        for p in premises {
            p.visit_atoms(&mut collect);
        }
        atoms.sort_unstable();
        atoms.dedup();
        if atoms.len() > self.max_atoms {
            return Err(LogicError::VocabularyOverflow {
                count: atoms.len(),
                bound: self.max_atoms,
            });
        }

        let width = atoms.last().map_or(0, |id| id.index() + 1);
        let mut bit = vec![u32::MAX; width];
        for (i, id) in atoms.iter().enumerate() {
            bit[id.index()] = i as u32;
        }

        let total: u64 = 1u64 << atoms.len();
        for model in 0..total {
            let value = |id: AtomId| (model >> bit[id.index()]) & 1 == 1;
            if conclusion.eval(&value) {
                continue;
            }
            if premises.iter().all(|p| p.eval(&value)) {
                let true_atoms = atoms
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| (model >> i) & 1 == 1)
                    .map(|(_, id)| *id)
                    .collect();
                return Ok(Some(true_atoms));
            }
        }
        Ok(None)
    }
}
