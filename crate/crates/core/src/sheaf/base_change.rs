//! Stalks of the pushforward along a downward-closed inclusion.

use serde::Serialize;

use super::functor::SheafFunctor;
use super::kan::pushforward_closed;
use super::value::Value;
use super::SheafError;
use crate::poset::Inclusion;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BaseChangeReport {
    pub element: String,
    /// Whether the element lies in the subposet.
    pub inside: bool,
    pub stalk: serde_json::Value,
    pub expected: serde_json::Value,
    pub matches: bool,
    /// Outside the subposet the stalk is terminal; set when that differs
    /// from the initial value (SET: one point versus empty).
    pub terminal_not_initial: bool,
}

/// Inside the subposet the stalk must be `F(a)` on the nose; outside it the
/// comma set `{p : a <= p}` is empty (a point above `a` would pull `a` into
/// the down-closed subposet), so the stalk must be the empty limit.
pub fn proper_base_change_check(f: &SheafFunctor, inc: &Inclusion, a: &str) -> Result<BaseChangeReport, SheafError> {
    let amb = inc.ambient();
    let q = amb.require(a)?;
    let pushed = pushforward_closed(f, inc)?;
    let stalk = pushed.value(q).clone();
    let (inside, expected) = match inc.preimage(q) {
        Some(p) => (true, f.value(p).clone()),
        None => (false, Value::terminal(f.kind())),
    };
    Ok(BaseChangeReport {
        element: a.to_string(),
        inside,
        stalk: stalk.to_json(),
        expected: expected.to_json(),
        matches: stalk == expected,
        terminal_not_initial: !inside && !stalk.is_initial(),
    })
}
