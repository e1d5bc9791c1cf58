//! Tokenizer shared by the term syntax and the λ front end.

use std::fmt;

use thiserror::Error;

use crate::term::Const;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{pos}: {message}")]
pub struct SyntaxError {
    pub pos: Pos,
    pub message: String,
}

impl SyntaxError {
    pub fn new(pos: Pos, message: impl Into<String>) -> SyntaxError {
        SyntaxError { pos, message: message.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    LParen,
    RParen,
    Dot,
    Star,
    Lambda,
    Const(Const),
    Numeral(usize),
    Oracle(String),
    Ident(String),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::Dot => f.write_str("'.'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Lambda => f.write_str("lambda"),
            Tok::Const(c) => write!(f, "constant {}", c.name()),
            Tok::Numeral(n) => write!(f, "#{n}"),
            Tok::Oracle(name) => write!(f, "@{name}"),
            Tok::Ident(name) => write!(f, "'{name}'"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn upper_const(ch: char) -> Option<Const> {
    Some(match ch {
        'B' => Const::B,
        'C' => Const::C,
        'I' => Const::I,
        'K' => Const::K,
        'W' => Const::W,
        'A' => Const::A,
        _ => return None,
    })
}

fn is_word(ch: char) -> bool {
    ch.is_alphanumeric() || ch == '_' || ch == '\''
}

/// Splits `src` into tokens. Runs of capitals drawn only from `BCIKWA` split
/// into one constant per letter, so `(BW)(C)(B)BB` lexes as written.
pub fn tokenize(src: &str) -> Result<Vec<(Tok, Pos)>, SyntaxError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, ch: char| {
        *i += 1;
        if ch == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };
    while i < chars.len() {
        let ch = chars[i];
        let pos = Pos { line, col };
        if ch.is_whitespace() {
            advance(&mut i, &mut line, &mut col, ch);
            continue;
        }
        if ch == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                let ch = chars[i];
                advance(&mut i, &mut line, &mut col, ch);
            }
            continue;
        }
        let single = match ch {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '.' => Some(Tok::Dot),
            '*' | '★' => Some(Tok::Star),
            '\\' | '^' | 'λ' => Some(Tok::Lambda),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((tok, pos));
            advance(&mut i, &mut line, &mut col, ch);
            continue;
        }
        if ch == '#' || ch == '@' {
            advance(&mut i, &mut line, &mut col, ch);
            let start = i;
            while i < chars.len() && is_word(chars[i]) {
                let ch = chars[i];
                advance(&mut i, &mut line, &mut col, ch);
            }
            let word: String = chars[start..i].iter().collect();
            if word.is_empty() {
                return Err(SyntaxError::new(pos, format!("expected a name after '{ch}'")));
            }
            if ch == '#' {
                let n = word
                    .parse::<usize>()
                    .map_err(|_| SyntaxError::new(pos, format!("invalid numeral literal #{word}")))?;
                out.push((Tok::Numeral(n), pos));
            } else {
                out.push((Tok::Oracle(word), pos));
            }
            continue;
        }
        if is_word(ch) {
            let start = i;
            while i < chars.len() && is_word(chars[i]) {
                let ch = chars[i];
                advance(&mut i, &mut line, &mut col, ch);
            }
            let word: Vec<char> = chars[start..i].to_vec();
            if word.iter().all(|c| upper_const(*c).is_some()) {
                for (k, c) in word.iter().enumerate() {
                    out.push((Tok::Const(upper_const(*c).unwrap()), Pos { line: pos.line, col: pos.col + k }));
                }
            } else {
                let word: String = word.into_iter().collect();
                let tok = if word == "cc" { Tok::Const(Const::Cc) } else { Tok::Ident(word) };
                out.push((tok, pos));
            }
            continue;
        }
        return Err(SyntaxError::new(pos, format!("unexpected character {ch:?}")));
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

/// Parses `q<digits>` into its index.
pub fn q_index(word: &str) -> Option<usize> {
    let digits = word.strip_prefix('q')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}
