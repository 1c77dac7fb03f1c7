//! Built-in example corpus: session scripts whose `assert` lines are the checks.

use crate::session::{run_session, Entry, Options, SessionError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExampleFixture {
    pub id: &'static str,
    pub script: &'static str,
}

pub const FIXTURES: &[ExampleFixture] = &[
    ExampleFixture { id: "y-x2", script: include_str!("../../../docs/examples/y-x2.session") },
    ExampleFixture { id: "nottame1", script: include_str!("../../../docs/examples/nottame1.session") },
    ExampleFixture { id: "nocommute", script: include_str!("../../../docs/examples/nocommute.session") },
    ExampleFixture { id: "nonoptimal", script: include_str!("../../../docs/examples/nonoptimal.session") },
    ExampleFixture { id: "artin-d4", script: include_str!("../../../docs/examples/artin-d4.session") },
    ExampleFixture { id: "transform-family", script: include_str!("../../../docs/examples/transform-family.session") },
];

pub fn fixture(id: &str) -> Option<&'static ExampleFixture> {
    FIXTURES.iter().find(|f| f.id == id)
}

/// Outcome of running one or more fixtures.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Summary {
    pub lines: Vec<String>,
    pub passed: usize,
    pub total: usize,
    pub errors: Vec<(String, SessionError)>,
}

impl Summary {
    pub fn ok(&self) -> bool {
        self.errors.is_empty() && self.passed == self.total
    }

    pub fn exit_code(&self) -> i32 {
        match self.errors.first() {
            Some((_, e)) => e.kind.exit_code(),
            None if self.passed == self.total => 0,
            None => 1,
        }
    }
}

fn run_one(f: &ExampleFixture, options: &Options, out: &mut Summary) {
    let t = run_session(f.script, options);
    let (mut pass, mut total) = (0, 0);
    for e in t.checks() {
        if let Entry::Check { pass: p, .. } = e {
            total += 1;
            pass += usize::from(*p);
        }
        out.lines.push(format!("{}: {}", f.id, e.render_text()));
    }
    if let Some(err) = &t.error {
        out.lines.push(format!("{}: {}", f.id, err));
        out.errors.push((f.id.to_string(), err.clone()));
    }
    out.lines.push(format!("{}: {pass}/{total} PASS", f.id));
    out.passed += pass;
    out.total += total;
}

/// Runs the fixture `id`, or every fixture for `"all"`. `None` for an unknown id.
pub fn verify_builtin(id: &str, options: &Options) -> Option<Summary> {
    let mut out = Summary::default();
    if id == "all" {
        for f in FIXTURES {
            run_one(f, options, &mut out);
        }
        out.lines.push(format!("all: {}/{} PASS", out.passed, out.total));
    } else {
        run_one(fixture(id)?, options, &mut out);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_id() {
        assert!(verify_builtin("no-such-example", &Options::default()).is_none());
    }

    #[test]
    fn artin_d4_passes() {
        let s = verify_builtin("artin-d4", &Options::default()).unwrap();
        assert!(s.ok(), "{:#?}", s.lines);
    }
}
