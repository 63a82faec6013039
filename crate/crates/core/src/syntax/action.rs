use serde::{Serialize, Serializer};
use std::fmt;
use std::sync::Arc;

/// A channel name. Cheap to clone.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(s: &str) -> Self {
        Name(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::new(s)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Polarity {
    Input,
    Output,
}

/// A visible action: a name together with a polarity. `a` is an input, `~a` its
/// complementary output. Actions order by name first, inputs before outputs.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Action {
    pub name: Name,
    pub polarity: Polarity,
}

impl Action {
    pub fn input(name: &str) -> Self {
        Action { name: Name::new(name), polarity: Polarity::Input }
    }

    pub fn output(name: &str) -> Self {
        Action { name: Name::new(name), polarity: Polarity::Output }
    }

    pub fn complement(&self) -> Self {
        let polarity = match self.polarity {
            Polarity::Input => Polarity::Output,
            Polarity::Output => Polarity::Input,
        };
        Action { name: self.name.clone(), polarity }
    }

    pub fn is_output(&self) -> bool {
        self.polarity == Polarity::Output
    }

    /// Parses `a` or `~a`.
    pub fn parse(s: &str) -> Option<Self> {
        let (body, polarity) = match s.strip_prefix('~') {
            Some(rest) => (rest, Polarity::Output),
            None => (s, Polarity::Input),
        };
        let mut chars = body.chars();
        let first = chars.next()?;
        if !first.is_ascii_lowercase() || !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return None;
        }
        if body == "tau" || body == "rec" {
            return None;
        }
        Some(Action { name: Name::new(body), polarity })
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_output() {
            f.write_str("~")?;
        }
        f.write_str(self.name.as_str())
    }
}

impl fmt::Debug for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Action {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Transition labels. `Tick` is the success signal and never appears as a prefix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Label {
    Act(Action),
    Tau,
    Tick,
}

impl Label {
    pub fn action(&self) -> Option<&Action> {
        match self {
            Label::Act(a) => Some(a),
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Act(a) => write!(f, "{a}"),
            Label::Tau => f.write_str("tau"),
            Label::Tick => f.write_str("tick"),
        }
    }
}

/// A finite sequence of visible actions.
pub type Trace = Vec<Action>;

pub fn format_trace(t: &[Action]) -> String {
    if t.is_empty() {
        return "eps".to_string();
    }
    t.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" ")
}

/// Parses a whitespace separated trace; `eps` or the empty string is the empty trace.
pub fn parse_trace(s: &str) -> Option<Trace> {
    let s = s.trim();
    if s.is_empty() || s == "eps" || s == "ε" {
        return Some(Vec::new());
    }
    s.split(|c: char| c.is_whitespace() || c == ',' || c == '.')
        .filter(|w| !w.is_empty())
        .map(Action::parse)
        .collect()
}

/// Shortlex comparison: shorter first, then lexicographic by action order.
pub fn shortlex(a: &[Action], b: &[Action]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn action_order_puts_inputs_first() {
        let mut v = vec![Action::output("b"), Action::input("b"), Action::output("a")];
        v.sort();
        assert_eq!(format_trace(&v), "~a b ~b");
    }

    #[test]
    fn complement_is_involutive() {
        let a = Action::input("x");
        assert_eq!(a.complement().complement(), a);
        assert!(a.complement().is_output());
    }

    #[test]
    fn parse_rejects_keywords_and_uppercase() {
        assert!(Action::parse("tau").is_none());
        assert!(Action::parse("Foo").is_none());
        assert_eq!(Action::parse("~ret1"), Some(Action::output("ret1")));
    }

    #[test]
    fn traces_round_trip() {
        let t = parse_trace("get ~read1 ret1").unwrap();
        assert_eq!(format_trace(&t), "get ~read1 ret1");
        assert_eq!(parse_trace("eps"), Some(vec![]));
    }

    #[test]
    fn shortlex_prefers_short() {
        let a = parse_trace("b").unwrap();
        let b = parse_trace("a a").unwrap();
        assert_eq!(shortlex(&a, &b), std::cmp::Ordering::Less);
    }
}
