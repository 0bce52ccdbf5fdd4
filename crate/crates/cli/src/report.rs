use bc_tori::Error;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// A computed value, not a yes/no answer.
    Info,
    Yes,
    No,
    NotApplicable,
}

impl Verdict {
    pub fn of(b: bool) -> Verdict {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }
}

pub struct Report {
    pub json: Value,
    pub text: String,
    pub verdict: Verdict,
}

impl Report {
    pub fn new<T: Serialize>(payload: &T, text: String, verdict: Verdict) -> Report {
        Report {
            json: serde_json::to_value(payload).expect("payload serializes"),
            text,
            verdict,
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: String) -> CliError {
        CliError { code: 2, message }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        let code = match e {
            Error::NotApplicable(_) => 3,
            _ => 2,
        };
        CliError { code, message: e.to_string() }
    }
}
