//! Parser for the formula language, inverse to the canonical printer.
//!
//! Grammar (whitespace allowed between tokens):
//!
//! ```text
//! formula  := and ('->' formula)?                  (implication, right-assoc)
//! and      := unary ('&' unary)*
//! unary    := '!' unary
//!           | 'K' '[' agent '@' times ('|' context)? ']' '(' formula ')'
//!           | '(' formula ')'
//!           | atom
//! agent    := 'F1' | 'F2' | 'W1' | 'W2'
//! times    := '<' digit | '>=' digit | digit (',' digit)*
//! context  := 'C1' | 'C2'
//! atom     := 'S1=phi' | 'S1=psi' | 'S2=phi' | 'S2=psi'
//!           | 'PchiL1!=0' | 'PchiL1=0' | 'PchiL2!=0' | 'PchiL2=0'
//! ```
//!
//! The result is returned in canonical form (conjunctions sorted), so
//! parsing the canonical printing of a canonical formula is the identity.

use fr_protocol::Agent;
use thiserror::Error;

use crate::formula::{AgentInstance, Atom, Context, Formula, TimeSet};

/// A parse failure at a byte offset of the input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    let mut parser = Parser {
        bytes: src.as_bytes(),
        pos: 0,
    };
    let formula = parser.formula()?;
    parser.skip_ws();
    if parser.pos != parser.bytes.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(formula.canonicalize())
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.bytes[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{token}'")))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.conjunction()?;
        self.skip_ws();
        if self.eat("->") {
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        loop {
            self.skip_ws();
            // '&' but not the first byte of another token.
            if self.peek() == Some(b'&') {
                self.pos += 1;
                let rhs = self.unary()?;
                acc = Formula::and(acc, rhs);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(b'!') if !self.bytes[self.pos..].starts_with(b"!=") => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.formula()?;
                self.skip_ws();
                self.expect(")")?;
                Ok(inner)
            }
            Some(b'K') if self.bytes.get(self.pos + 1) == Some(&b'[') => self.knowledge(),
            Some(_) => self.atom(),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn knowledge(&mut self) -> Result<Formula, ParseError> {
        self.expect("K[")?;
        let agent = self.agent()?;
        self.expect("@")?;
        let times = self.times()?;
        let context = if self.eat("|") { Some(self.context()?) } else { None };
        self.expect("]")?;
        self.skip_ws();
        self.expect("(")?;
        let body = self.formula()?;
        self.skip_ws();
        self.expect(")")?;
        let instance = AgentInstance::new(agent, times);
        Ok(match context {
            Some(ctx) => Formula::knows_in(instance, ctx, body),
            None => Formula::knows(instance, body),
        })
    }

    fn agent(&mut self) -> Result<Agent, ParseError> {
        for agent in Agent::ALL {
            if self.eat(agent.name()) {
                return Ok(agent);
            }
        }
        Err(self.error("expected agent name F1, F2, W1, or W2"))
    }

    fn context(&mut self) -> Result<Context, ParseError> {
        if self.eat("C1") {
            Ok(Context::C1)
        } else if self.eat("C2") {
            Ok(Context::C2)
        } else {
            Err(self.error("expected context C1 or C2"))
        }
    }

    fn digit(&mut self) -> Result<u8, ParseError> {
        match self.peek() {
            Some(b @ b'0'..=b'9') => {
                self.pos += 1;
                Ok(b - b'0')
            }
            _ => Err(self.error("expected a step digit")),
        }
    }

    fn times(&mut self) -> Result<TimeSet, ParseError> {
        if self.eat("<") {
            let t = self.digit()?;
            return TimeSet::before(t)
                .ok_or_else(|| self.error(format!("'<{t}' is not a valid step window")));
        }
        if self.eat(">=") {
            let t = self.digit()?;
            return TimeSet::at_least(t)
                .ok_or_else(|| self.error(format!("'>={t}' is not a valid step window")));
        }
        let mut times = vec![self.digit()?];
        while self.eat(",") {
            times.push(self.digit()?);
        }
        TimeSet::from_times(&times)
            .filter(|set| !set.is_empty())
            .ok_or_else(|| self.error("step out of range 0..=4"))
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        // Longest-prefix match; '!=' variants listed before '=' variants.
        const NAMED: [Atom; 8] = [
            Atom::PchiL1Nonnull,
            Atom::PchiL1Null,
            Atom::PchiL2Nonnull,
            Atom::PchiL2Null,
            Atom::S1Phi,
            Atom::S1Psi,
            Atom::S2Phi,
            Atom::S2Psi,
        ];
        for atom in NAMED {
            if self.eat(atom.as_str()) {
                return Ok(Formula::atom(atom));
            }
        }
        Err(self.error("expected an atom, 'K[', '!', or '('"))
    }
}
