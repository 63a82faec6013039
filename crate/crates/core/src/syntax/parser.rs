use super::action::{Action, Name, Polarity};
use super::term::{Configuration, Process};
use indexmap::IndexMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("unbound identifier `{name}` at {line}:{col}")]
    Unbound { name: String, line: usize, col: usize },
    #[error("duplicate definition `{0}`")]
    Duplicate(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Zero,
    One,
    Tilde,
    Dot,
    Plus,
    Bar,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Eq,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Zero => "`0`".into(),
            Tok::One => "`1`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Bar => "`|`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Spanned { tok: Tok::Ident(word), line: l0, col: c0 });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            let tok = match word.as_str() {
                "0" => Tok::Zero,
                "1" => Tok::One,
                _ => {
                    return Err(ParseError::Syntax {
                        line: l0,
                        col: c0,
                        message: format!("unexpected literal `{word}`, only 0 and 1 are terms"),
                    })
                }
            };
            out.push(Spanned { tok, line: l0, col: c0 });
            continue;
        }
        let tok = match c {
            '~' => Tok::Tilde,
            '.' => Tok::Dot,
            '+' => Tok::Plus,
            '|' => Tok::Bar,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ',' => Tok::Comma,
            '=' => Tok::Eq,
            _ => {
                return Err(ParseError::Syntax {
                    line: l0,
                    col: c0,
                    message: format!("unexpected character `{c}`"),
                })
            }
        };
        out.push(Spanned { tok, line: l0, col: c0 });
        i += 1;
        col += 1;
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

fn is_process_ident(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_uppercase())
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "tau" | "rec" | "def" | "interface")
}

/// A named definition: either a sequential term or a parallel configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Definition {
    Process(Process),
    Configuration(Configuration),
}

impl Definition {
    pub fn as_configuration(&self) -> Configuration {
        match self {
            Definition::Process(p) => Configuration::single(p.clone()),
            Definition::Configuration(c) => c.clone(),
        }
    }
}

/// The contents of a definitions file: named terms and named interfaces, in
/// source order. Interface parts are kept as written; closing them under
/// complement is the caller's business.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DefinitionFile {
    pub defs: IndexMap<String, Definition>,
    pub interfaces: IndexMap<String, Vec<Vec<Action>>>,
}

impl DefinitionFile {
    pub fn get(&self, name: &str) -> Option<&Definition> {
        self.defs.get(name)
    }

    pub fn merge(&mut self, other: DefinitionFile) -> Result<(), ParseError> {
        for (k, v) in other.defs {
            if self.defs.contains_key(&k) {
                return Err(ParseError::Duplicate(k));
            }
            self.defs.insert(k, v);
        }
        for (k, v) in other.interfaces {
            if self.interfaces.contains_key(&k) {
                return Err(ParseError::Duplicate(k));
            }
            self.interfaces.insert(k, v);
        }
        Ok(())
    }
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    defs: &'a IndexMap<String, Definition>,
    bound: Vec<Name>,
}

impl<'a> Parser<'a> {
    fn new(src: &str, defs: &'a IndexMap<String, Definition>) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(src)?, pos: 0, defs, bound: Vec::new() })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let t = &self.toks[self.pos];
        Err(ParseError::Syntax { line: t.line, col: t.col, message: message.into() })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {}, found {}", tok.describe(), self.peek().describe()))
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            Tok::Bar => self.error("parallel composition is not allowed in a sequential term"),
            t => self.error(format!("unexpected {}", t.describe())),
        }
    }

    fn at_item_start(&self) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == "def" || s == "interface") || *self.peek() == Tok::Eof
    }

    fn configuration(&mut self) -> Result<Vec<Process>, ParseError> {
        let mut comps = Vec::new();
        loop {
            let whole_ref = match (self.peek(), self.peek_at(1)) {
                (Tok::Ident(s), Tok::Bar | Tok::Eof) => Some(s.clone()),
                (Tok::Ident(s), Tok::Ident(k)) if k == "def" || k == "interface" => Some(s.clone()),
                _ => None,
            };
            match whole_ref.as_deref().and_then(|s| self.defs.get(s)) {
                Some(Definition::Configuration(c)) => {
                    comps.extend(c.components.iter().cloned());
                    self.bump();
                }
                _ => comps.push(self.sum()?),
            }
            if *self.peek() == Tok::Bar {
                self.bump();
            } else {
                return Ok(comps);
            }
        }
    }

    fn sum(&mut self) -> Result<Process, ParseError> {
        let mut acc = self.prefix()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            let rhs = self.prefix()?;
            acc = Process::choice(acc, rhs);
        }
        Ok(acc)
    }

    fn continuation(&mut self) -> Result<Process, ParseError> {
        if *self.peek() == Tok::Dot {
            self.bump();
            self.prefix()
        } else {
            Ok(Process::Nil)
        }
    }

    fn prefix(&mut self) -> Result<Process, ParseError> {
        let t = self.bump();
        match t.tok {
            Tok::Zero => Ok(Process::Nil),
            Tok::One => Ok(Process::One),
            Tok::LParen => {
                let p = self.sum()?;
                if *self.peek() == Tok::Bar {
                    return self.error("parallel composition is only allowed at top level");
                }
                self.expect(Tok::RParen)?;
                if *self.peek() == Tok::Dot {
                    return self.error("only an action or tau can be used as a prefix");
                }
                Ok(p)
            }
            Tok::Tilde => match self.bump().tok {
                Tok::Ident(s) if !is_process_ident(&s) && !is_keyword(&s) => {
                    let a = Action { name: Name::new(&s), polarity: Polarity::Output };
                    let body = self.continuation()?;
                    Ok(Process::act(a, body))
                }
                other => {
                    self.pos -= 1;
                    self.error(format!("expected an action name after `~`, found {}", other.describe()))
                }
            },
            Tok::Ident(s) if s == "tau" => {
                let body = self.continuation()?;
                Ok(Process::tau(body))
            }
            Tok::Ident(s) if s == "rec" => {
                let var = match self.bump().tok {
                    Tok::Ident(v) if is_process_ident(&v) => v,
                    _ => {
                        self.pos -= 1;
                        return self.error("expected an uppercase variable after `rec`");
                    }
                };
                self.expect(Tok::Dot)?;
                self.bound.push(Name::new(&var));
                let body = self.prefix();
                self.bound.pop();
                Ok(Process::rec(&var, body?))
            }
            Tok::Ident(s) if s == "def" || s == "interface" => {
                self.pos -= 1;
                self.error(format!("`{s}` is a keyword"))
            }
            Tok::Ident(s) if is_process_ident(&s) => {
                let n = Name::new(&s);
                if self.bound.contains(&n) {
                    return Ok(Process::Var(n));
                }
                match self.defs.get(&s) {
                    Some(Definition::Process(p)) => Ok(p.clone()),
                    Some(Definition::Configuration(_)) => Err(ParseError::Syntax {
                        line: t.line,
                        col: t.col,
                        message: format!("`{s}` is a parallel configuration and cannot occur inside a term"),
                    }),
                    None => Err(ParseError::Unbound { name: s, line: t.line, col: t.col }),
                }
            }
            Tok::Ident(s) => {
                let a = Action { name: Name::new(&s), polarity: Polarity::Input };
                let body = self.continuation()?;
                Ok(Process::act(a, body))
            }
            other => {
                self.pos -= 1;
                self.error(format!("expected a term, found {}", other.describe()))
            }
        }
    }

    fn action(&mut self) -> Result<Action, ParseError> {
        let polarity = if *self.peek() == Tok::Tilde {
            self.bump();
            Polarity::Output
        } else {
            Polarity::Input
        };
        match self.peek().clone() {
            Tok::Ident(s) if !is_process_ident(&s) && !is_keyword(&s) => {
                self.bump();
                Ok(Action { name: Name::new(&s), polarity })
            }
            t => self.error(format!("expected an action, found {}", t.describe())),
        }
    }

    fn interface_parts(&mut self) -> Result<Vec<Vec<Action>>, ParseError> {
        self.expect(Tok::LBrace)?;
        let mut parts = Vec::new();
        if *self.peek() != Tok::RBrace {
            loop {
                self.expect(Tok::LBrace)?;
                let mut part = Vec::new();
                if *self.peek() != Tok::RBrace {
                    loop {
                        part.push(self.action()?);
                        if *self.peek() == Tok::Comma {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RBrace)?;
                parts.push(part);
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RBrace)?;
        Ok(parts)
    }
}

/// Parses a closed sequential term.
pub fn parse_process(src: &str) -> Result<Process, ParseError> {
    parse_process_with(src, &DefinitionFile::default())
}

/// Parses a sequential term in which uppercase identifiers may refer to definitions.
pub fn parse_process_with(src: &str, defs: &DefinitionFile) -> Result<Process, ParseError> {
    let mut p = Parser::new(src, &defs.defs)?;
    if let (Tok::Ident(s), Tok::Eof) = (p.peek().clone(), p.peek_at(1)) {
        if let Some(Definition::Configuration(c)) = defs.get(&s) {
            if c.components.len() == 1 {
                return Ok(c.components[0].clone());
            }
        }
    }
    let t = p.sum()?;
    p.expect_eof()?;
    Ok(t)
}

pub fn parse_configuration(src: &str) -> Result<Configuration, ParseError> {
    parse_configuration_with(src, &DefinitionFile::default())
}

pub fn parse_configuration_with(src: &str, defs: &DefinitionFile) -> Result<Configuration, ParseError> {
    let mut p = Parser::new(src, &defs.defs)?;
    let comps = p.configuration()?;
    p.expect_eof()?;
    Ok(Configuration::new(comps))
}

/// Parses `{ {a, ~a}, {b} }` into raw parts.
pub fn parse_interface_parts(src: &str) -> Result<Vec<Vec<Action>>, ParseError> {
    let empty = IndexMap::new();
    let mut p = Parser::new(src, &empty)?;
    let parts = p.interface_parts()?;
    p.expect_eof()?;
    Ok(parts)
}

/// Parses a definitions file made of `def NAME = ...` and `interface NAME = {...}`
/// items. A definition may refer to any definition that precedes it.
pub fn parse_definitions(src: &str) -> Result<DefinitionFile, ParseError> {
    let mut file = DefinitionFile::default();
    let toks = lex(src)?;
    let mut pos = 0;
    loop {
        let (kw, name) = {
            let mut p = Parser { toks: toks.clone(), pos, defs: &file.defs, bound: Vec::new() };
            match p.peek().clone() {
                Tok::Eof => break,
                Tok::Ident(k) if k == "def" || k == "interface" => {
                    p.bump();
                    let name = match p.bump().tok {
                        Tok::Ident(n) if !is_keyword(&n) => n,
                        _ => {
                            p.pos -= 1;
                            return p.error(format!("expected a name after `{k}`"));
                        }
                    };
                    if k == "def" && !is_process_ident(&name) {
                        p.pos -= 1;
                        return p.error(format!("definition names start with an uppercase letter, found `{name}`"));
                    }
                    p.expect(Tok::Eq)?;
                    pos = p.pos;
                    (k, name)
                }
                t => return p.error(format!("expected `def` or `interface`, found {}", t.describe())),
            }
        };
        if file.defs.contains_key(&name) || file.interfaces.contains_key(&name) {
            return Err(ParseError::Duplicate(name));
        }
        let mut p = Parser { toks: toks.clone(), pos, defs: &file.defs, bound: Vec::new() };
        if kw == "def" {
            let comps = p.configuration()?;
            if !p.at_item_start() {
                return p.error(format!("unexpected {}", p.peek().describe()));
            }
            pos = p.pos;
            let d = if comps.len() == 1 {
                Definition::Process(comps.into_iter().next().unwrap())
            } else {
                Definition::Configuration(Configuration::new(comps))
            };
            file.defs.insert(name, d);
        } else {
            let parts = p.interface_parts()?;
            if !p.at_item_start() {
                return p.error(format!("unexpected {}", p.peek().describe()));
            }
            pos = p.pos;
            file.interfaces.insert(name, parts);
        }
    }
    Ok(file)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bare_action_means_nil_continuation() {
        assert_eq!(parse_process("a").unwrap().to_string(), "a.0");
        assert_eq!(parse_process("~a.1").unwrap().to_string(), "~a.1");
    }

    #[test]
    fn plus_is_left_associative() {
        let p = parse_process("a + b + c").unwrap();
        match p {
            Process::Choice(l, _) => assert!(matches!(*l, Process::Choice(..))),
            _ => panic!(),
        }
    }

    #[test]
    fn prefix_binds_tighter_than_choice() {
        let p = parse_process("a.b + c").unwrap();
        assert_eq!(p.to_string(), "a.b.0 + c.0");
    }

    #[test]
    fn recursion_and_variables() {
        let p = parse_process("rec X.(a.X + tau.1)").unwrap();
        assert_eq!(p.to_string(), "rec X.(a.X + tau.1)");
        assert!(p.is_closed());
    }

    #[test]
    fn unbound_identifier_is_an_error() {
        assert!(matches!(parse_process("a.Y"), Err(ParseError::Unbound { .. })));
    }

    #[test]
    fn parallel_only_at_top_level() {
        assert!(parse_process("a | b").is_err());
        assert!(parse_configuration("(a | b)").is_err());
        assert_eq!(parse_configuration("~a.1 | 1").unwrap().components.len(), 2);
    }

    #[test]
    fn prefixing_a_parenthesised_term_is_an_error() {
        assert!(parse_process("(a + b).c").is_err());
    }

    #[test]
    fn error_positions_are_reported() {
        match parse_process("a.\n  b +") {
            Err(ParseError::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn definitions_expand_earlier_names() {
        let src = "# comment\ndef P = a.b\ndef Q = P + tau.c\ninterface I = { {a}, {b, c} }\ndef S = P | Q";
        let f = parse_definitions(src).unwrap();
        assert_eq!(f.defs.len(), 3);
        match f.get("Q").unwrap() {
            Definition::Process(q) => assert_eq!(q.to_string(), "a.b.0 + tau.c.0"),
            _ => panic!(),
        }
        assert!(matches!(f.get("S"), Some(Definition::Configuration(_))));
        assert_eq!(f.interfaces["I"].len(), 2);
        let s = parse_configuration_with("S", &f).unwrap();
        assert_eq!(s.components.len(), 2);
    }

    #[test]
    fn forward_references_are_rejected() {
        assert!(parse_definitions("def P = Q\ndef Q = a").is_err());
        assert!(matches!(parse_definitions("def P = a\ndef P = b"), Err(ParseError::Duplicate(_))));
    }

    #[test]
    fn interface_literal() {
        let parts = parse_interface_parts("{{get, ~ret}, {~read1}}").unwrap();
        assert_eq!(parts[0], vec![Action::input("get"), Action::output("ret")]);
    }
}
