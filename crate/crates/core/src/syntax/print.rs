use super::term::{Configuration, Process};
use std::fmt;

fn write_operand(f: &mut fmt::Formatter<'_>, p: &Process) -> fmt::Result {
    match p {
        Process::Choice(..) => write!(f, "({p})"),
        _ => write!(f, "{p}"),
    }
}

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Process::Nil => f.write_str("0"),
            Process::One => f.write_str("1"),
            Process::Var(x) => write!(f, "{x}"),
            Process::Prefix(l, b) => {
                write!(f, "{l}.")?;
                write_operand(f, b)
            }
            Process::Choice(l, r) => {
                write!(f, "{l} + ")?;
                write_operand(f, r)
            }
            Process::Rec(x, b) => {
                write!(f, "rec {x}.")?;
                write_operand(f, b)
            }
        }
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use crate::syntax::{Action, Process};

    #[test]
    fn prints_explicit_nil_and_parens() {
        let p = Process::act(
            Action::input("a"),
            Process::choice(Process::act(Action::output("b"), Process::Nil), Process::tau(Process::One)),
        );
        assert_eq!(p.to_string(), "a.(~b.0 + tau.1)");
    }

    #[test]
    fn right_choice_operand_is_parenthesised() {
        let x = Process::act(Action::input("x"), Process::Nil);
        let l = Process::choice(Process::choice(x.clone(), x.clone()), x.clone());
        let r = Process::choice(x.clone(), Process::choice(x.clone(), x));
        assert_eq!(l.to_string(), "x.0 + x.0 + x.0");
        assert_eq!(r.to_string(), "x.0 + (x.0 + x.0)");
    }
}
