use alloc::string::String;
use core::fmt;

/// Everything that can go wrong inside the library.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    NotPrime(u64),
    Parse(String),
    /// Shapes, quivers or fields of the operands do not agree.
    Mismatch(String),
    InvalidInput(String),
    /// An enumeration would exceed the caller's budget.
    BudgetExceeded { needed: u128, budget: u128 },
    /// A characteristic-0 decision procedure ran out of budget.
    Undecided(String),
    /// A hypothesis of a construction failed; the witness names the offending point.
    HypothesisFailed { hypothesis: String, witness: String },
    VerificationFailed(String),
    Unsupported(String),
    WindowTooSmall(String),
    /// The operation needs a finite field.
    NeedsFiniteField,
    InsufficientSamples { have: usize, need: usize },
    NotSchurian(String),
    NotTree(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "{} is not a prime", p),
            Error::Parse(s) => write!(f, "parse error: {}", s),
            Error::Mismatch(s) => write!(f, "mismatch: {}", s),
            Error::InvalidInput(s) => write!(f, "invalid input: {}", s),
            Error::BudgetExceeded { needed, budget } => {
                write!(f, "budget exceeded: needs {} steps, budget {}", needed, budget)
            }
            Error::Undecided(s) => write!(f, "undecided: {}", s),
            Error::HypothesisFailed { hypothesis, witness } => {
                write!(f, "hypothesis `{}` fails at {}", hypothesis, witness)
            }
            Error::VerificationFailed(s) => write!(f, "verification failed: {}", s),
            Error::Unsupported(s) => write!(f, "unsupported: {}", s),
            Error::WindowTooSmall(s) => write!(f, "window too small: {}", s),
            Error::NeedsFiniteField => write!(f, "operation needs a finite field"),
            Error::InsufficientSamples { have, need } => {
                write!(f, "insufficient samples: have {}, need {}", have, need)
            }
            Error::NotSchurian(s) => write!(f, "not Schurian: {}", s),
            Error::NotTree(s) => write!(f, "not a tree: {}", s),
        }
    }
}

impl Error {
    /// True for errors that come from the budget or an undecided procedure.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. } | Error::Undecided(_))
    }

    /// True for failed verifications and failed hypotheses.
    pub fn is_verification(&self) -> bool {
        matches!(
            self,
            Error::VerificationFailed(_) | Error::HypothesisFailed { .. } | Error::NotSchurian(_)
        )
    }
}

pub type Result<T> = core::result::Result<T, Error>;

/// A cap on the number of enumerated objects.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(pub u128);

impl Default for Budget {
    fn default() -> Self {
        Budget(50_000_000)
    }
}

impl Budget {
    pub fn check(&self, needed: u128) -> Result<()> {
        if needed > self.0 {
            Err(Error::BudgetExceeded { needed, budget: self.0 })
        } else {
            Ok(())
        }
    }
}
