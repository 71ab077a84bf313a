//! Machine-readable verification reports.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One identity tag, with the first failing witness if any.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub identity: String,
    pub status: Status,
    /// Number of instances checked.
    pub instances: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub group: String,
    pub suite: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(group: impl Into<String>, suite: impl Into<String>) -> Report {
        Report { group: group.into(), suite: suite.into(), checks: Vec::new() }
    }

    /// Records one instance of `identity`; the witness is only built on the first failure.
    pub fn record(&mut self, identity: &str, ok: bool, witness: impl FnOnce() -> String) {
        let pos = match self.checks.iter().position(|c| c.identity == identity) {
            Some(i) => i,
            None => {
                self.checks.push(Check { identity: identity.into(), status: Status::Pass, instances: 0, witness: None });
                self.checks.len() - 1
            }
        };
        let c = &mut self.checks[pos];
        c.instances += 1;
        if !ok && c.status == Status::Pass {
            c.status = Status::Fail;
            c.witness = Some(witness());
        }
    }

    /// Records an equality, printing both sides as the witness.
    pub fn record_eq<T: PartialEq + fmt::Debug>(&mut self, identity: &str, context: &str, lhs: &T, rhs: &T) {
        self.record(identity, lhs == rhs, || format!("{context}: {lhs:?} != {rhs:?}"));
    }

    pub fn merge(&mut self, other: Report) {
        for c in other.checks {
            match self.checks.iter_mut().find(|d| d.identity == c.identity) {
                Some(d) => {
                    d.instances += c.instances;
                    if d.status == Status::Pass && c.status == Status::Fail {
                        d.status = Status::Fail;
                        d.witness = c.witness;
                    }
                }
                None => self.checks.push(c),
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} [{}]", self.group, self.suite)?;
        for c in &self.checks {
            let s = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
            };
            writeln!(f, "  {s} {} ({} instances)", c.identity, c.instances)?;
            if let Some(w) = &c.witness {
                writeln!(f, "       {w}")?;
            }
        }
        Ok(())
    }
}
