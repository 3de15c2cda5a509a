use anyhow::anyhow;

/// Input or validation problem.
pub const INPUT: u8 = 1;
/// Analysis is empty or degenerate.
pub const DEGENERATE: u8 = 2;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn input(msg: impl std::fmt::Display) -> Self {
        Failure {
            code: INPUT,
            error: anyhow!("{msg}"),
        }
    }

    pub fn degenerate(msg: impl std::fmt::Display) -> Self {
        Failure {
            code: DEGENERATE,
            error: anyhow!("{msg}"),
        }
    }
}

impl From<assocnorms::Error> for Failure {
    fn from(e: assocnorms::Error) -> Self {
        use assocnorms::Error::*;
        let code = match e {
            Empty(_) | MissingGroup(_) | OutOfVocabulary(_) => DEGENERATE,
            _ => INPUT,
        };
        Failure {
            code,
            error: e.into(),
        }
    }
}

macro_rules! input_failure {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure { code: INPUT, error: e.into() }
            }
        }
    )*};
}

input_failure!(std::io::Error, csv::Error, serde_json::Error, anyhow::Error);
