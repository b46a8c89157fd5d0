//! Textual syntax for circuit terms.
//!
//! ```text
//! term := atom | term ";" term | term "|" term
//! atom := "discard" | "copy" | "zero" | "add" | "one" | "and" | "swap"
//!       | "id" NAT | "(" term ")"
//! ```
//!
//! `;` binds looser than `|`, both associate to the left, whitespace is
//! insignificant. Printing emits the fewest parentheses that parse back to
//! the same tree.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use core::fmt;

use super::{Gen, Term};
use crate::error::{Error, Result};

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Gen(g) => f.write_str(g.name()),
            Term::Id(n) => write!(f, "id {n}"),
            Term::Swap => f.write_str("swap"),
            Term::Seq(l, r) => {
                write!(f, "{l} ; ")?;
                if matches!(**r, Term::Seq(..)) {
                    write!(f, "({r})")
                } else {
                    write!(f, "{r}")
                }
            }
            Term::Tensor(l, r) => {
                if matches!(**l, Term::Seq(..)) {
                    write!(f, "({l}) | ")?;
                } else {
                    write!(f, "{l} | ")?;
                }
                if matches!(**r, Term::Seq(..) | Term::Tensor(..)) {
                    write!(f, "({r})")
                } else {
                    write!(f, "{r}")
                }
            }
        }
    }
}

/// Parses and type-checks a circuit.
pub fn parse(text: &str) -> Result<Term> {
    let mut p = Parser { src: text, pos: 0 };
    let term = p.seq()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.error("unexpected trailing input"));
    }
    term.arity()?;
    Ok(term)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: String::from(msg),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn seq(&mut self) -> Result<Term> {
        let mut t = self.tensor()?;
        while self.eat(';') {
            let r = self.tensor()?;
            t = Term::Seq(Box::new(t), Box::new(r));
        }
        Ok(t)
    }

    fn tensor(&mut self) -> Result<Term> {
        let mut t = self.atom()?;
        while self.eat('|') {
            let r = self.atom()?;
            t = Term::Tensor(Box::new(t), Box::new(r));
        }
        Ok(t)
    }

    fn word(&mut self) -> &'a str {
        self.skip_ws();
        let len = self
            .rest()
            .find(|c: char| !c.is_ascii_alphanumeric() && c != '_')
            .unwrap_or(self.rest().len());
        let start = self.pos;
        self.pos += len;
        &self.src[start..self.pos]
    }

    fn atom(&mut self) -> Result<Term> {
        if self.eat('(') {
            let t = self.seq()?;
            if !self.eat(')') {
                return Err(self.error("expected `)`"));
            }
            return Ok(t);
        }
        let start = {
            self.skip_ws();
            self.pos
        };
        let word = self.word();
        let term = match word {
            "discard" => Term::Gen(Gen::Discard),
            "copy" => Term::Gen(Gen::Copy),
            "zero" => Term::Gen(Gen::Zero),
            "add" => Term::Gen(Gen::Add),
            "one" => Term::Gen(Gen::One),
            "and" => Term::Gen(Gen::And),
            "swap" => Term::Swap,
            "id" => {
                let at = {
                    self.skip_ws();
                    self.pos
                };
                let digits = self.word();
                let n = digits
                    .parse::<usize>()
                    .ok()
                    .filter(|_| digits.bytes().all(|b| b.is_ascii_digit()));
                match n {
                    Some(n) => Term::Id(n),
                    None => {
                        self.pos = at;
                        return Err(self.error("expected a wire count after `id`"));
                    }
                }
            }
            "" => {
                self.pos = start;
                return Err(self.error("expected a circuit"));
            }
            other => {
                let msg = format!("unknown atom `{other}`");
                self.pos = start;
                return Err(self.error(&msg));
            }
        };
        Ok(term)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::random_term;
    use alloc::string::ToString;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn g(g: Gen) -> Term {
        Term::Gen(g)
    }

    #[test]
    fn parses_examples() {
        assert_eq!(parse("copy ; and").unwrap(), g(Gen::Copy).then(g(Gen::And)));
        assert_eq!(parse("(add | one)").unwrap(), g(Gen::Add).beside(g(Gen::One)));
        assert_eq!(
            parse("copy ; (id 1 | discard)").unwrap(),
            g(Gen::Copy).then(Term::Id(1).beside(g(Gen::Discard)))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse("copy ; id 1 | copy ; id 1 | and").unwrap(),
            g(Gen::Copy)
                .then(Term::Id(1).beside(g(Gen::Copy)))
                .then(Term::Id(1).beside(g(Gen::And)))
        );
        assert_eq!(
            parse("one | one | one").unwrap(),
            g(Gen::One).beside(g(Gen::One)).beside(g(Gen::One))
        );
        assert_eq!(parse("  id\n0 ").unwrap(), Term::Id(0));
    }

    #[test]
    fn prints_examples() {
        assert_eq!(g(Gen::Zero).to_string(), "zero");
        assert_eq!(Term::Id(3).to_string(), "id 3");
        assert_eq!(g(Gen::Copy).then(g(Gen::And)).to_string(), "copy ; and");
        let right_nested = g(Gen::One).then(g(Gen::Copy).then(g(Gen::Add)));
        assert_eq!(right_nested.to_string(), "one ; (copy ; add)");
    }

    #[test]
    fn syntax_errors_carry_position() {
        assert_eq!(
            parse("copy ; nand"),
            Err(Error::Syntax {
                pos: 7,
                msg: "unknown atom `nand`".into()
            })
        );
        assert!(matches!(parse("id x"), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(parse("(copy ; and"), Err(Error::Syntax { pos: 11, .. })));
        assert!(matches!(parse(""), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse("copy )"), Err(Error::Syntax { pos: 5, .. })));
        assert!(matches!(parse("copy ; copy"), Err(Error::TypeMismatch { .. })));
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(seed in any::<u64>(), size in 1usize..14) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let t = random_term(&mut rng, size);
            prop_assert_eq!(parse(&t.to_string()).unwrap(), t);
        }
    }
}
