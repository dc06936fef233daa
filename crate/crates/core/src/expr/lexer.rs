use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Tok {
    Num(f64),
    Var(usize),
    R,
    Log,
    /// The imaginary unit suffix `i` of a complex literal.
    Imag,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    pub(crate) fn describe(&self) -> &'static str {
        match self {
            Tok::Num(_) => "NUMBER",
            Tok::Var(_) => "VAR",
            Tok::R => "\"r\"",
            Tok::Log => "\"log\"",
            Tok::Imag => "\"i\"",
            Tok::Plus => "\"+\"",
            Tok::Minus => "\"-\"",
            Tok::Star => "\"*\"",
            Tok::Slash => "\"/\"",
            Tok::Caret => "\"^\"",
            Tok::LParen => "\"(\"",
            Tok::RParen => "\")\"",
            Tok::End => "end of input",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: usize,
}

fn syntax(pos: usize, expected: &[&str]) -> Error {
    Error::Syntax {
        position: pos,
        expected: expected.iter().map(|s| s.to_string()).collect(),
    }
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let single = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, pos: start });
            i += 1;
            continue;
        }
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == b'.' {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let lit = &text[start..i];
            let value: f64 = lit.parse().map_err(|_| syntax(start, &["NUMBER"]))?;
            out.push(Token {
                tok: Tok::Num(value),
                pos: start,
            });
            continue;
        }
        if c.is_ascii_alphabetic() {
            while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                i += 1;
            }
            let word = &text[start..i];
            let tok = match word {
                "r" => Tok::R,
                "log" => Tok::Log,
                "i" => Tok::Imag,
                "x" => {
                    let digits_start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if digits_start == i {
                        return Err(syntax(i, &["DIGITS"]));
                    }
                    let index = text[digits_start..i]
                        .parse()
                        .map_err(|_| syntax(digits_start, &["DIGITS"]))?;
                    Tok::Var(index)
                }
                _ => {
                    return Err(syntax(
                        start,
                        &["NUMBER", "VAR", "\"r\"", "\"log\"", "\"(\""],
                    ))
                }
            };
            out.push(Token { tok, pos: start });
            continue;
        }
        return Err(syntax(
            start,
            &["NUMBER", "VAR", "\"r\"", "\"log\"", "operator"],
        ));
    }
    out.push(Token {
        tok: Tok::End,
        pos: text.len(),
    });
    Ok(out)
}
