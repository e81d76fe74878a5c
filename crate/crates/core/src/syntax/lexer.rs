use std::fmt;

use crate::diagnostic::Diagnostic;
use crate::model::Span;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Str(String),
    Int(i64),
    /// `$Name`
    MetaVar(String),
    /// Config mode only: any run of non-delimiter characters.
    Word(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Lt,
    Gt,
    Comma,
    Semi,
    Colon,
    Define,
    Pipe,
    Question,
    Star,
    Plus,
    Eq,
    Implies,
    Dot,
    Underscore,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Word(s) => write!(f, "`{s}`"),
            Tok::Str(s) => write!(f, "string \"{s}\""),
            Tok::Int(i) => write!(f, "integer {i}"),
            Tok::MetaVar(s) => write!(f, "`${s}`"),
            Tok::Eof => f.write_str("end of input"),
            other => {
                let s = match other {
                    Tok::LBrace => "{",
                    Tok::RBrace => "}",
                    Tok::LParen => "(",
                    Tok::RParen => ")",
                    Tok::LBracket => "[",
                    Tok::RBracket => "]",
                    Tok::Lt => "<",
                    Tok::Gt => ">",
                    Tok::Comma => ",",
                    Tok::Semi => ";",
                    Tok::Colon => ":",
                    Tok::Define => ":=",
                    Tok::Pipe => "|",
                    Tok::Question => "?",
                    Tok::Star => "*",
                    Tok::Plus => "+",
                    Tok::Eq => "=",
                    Tok::Implies => "=>",
                    Tok::Dot => ".",
                    Tok::Underscore => "_",
                    _ => unreachable!(),
                };
                write!(f, "`{s}`")
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Rules,
    Config,
}

/// Tokenizes the whole input. The last token is always `Eof`.
pub fn tokenize(path: &str, text: &str, mode: Mode) -> Result<Vec<Token>, Diagnostic> {
    let mut lx = Lexer { chars: text.chars().collect(), pos: 0, line: 1, col: 1 };
    let mut out = Vec::new();
    loop {
        lx.skip_trivia();
        let span = Span::new(lx.line, lx.col);
        let Some(c) = lx.peek() else {
            out.push(Token { tok: Tok::Eof, span });
            return Ok(out);
        };
        let tok = match (mode, c) {
            (_, '"') => Tok::Str(lx.string().map_err(|m| Diagnostic::error(path, span, m))?),
            (_, '{') => lx.single(Tok::LBrace),
            (_, '}') => lx.single(Tok::RBrace),
            (_, ';') => lx.single(Tok::Semi),
            (_, '=') if mode == Mode::Config => lx.single(Tok::Eq),
            (Mode::Config, _) => Tok::Word(lx.take_while(|c| !c.is_whitespace() && !"{};=\"".contains(c))),
            (Mode::Rules, c) if c.is_ascii_digit() || (c == '-' && lx.peek_at(1).is_some_and(|d| d.is_ascii_digit())) => {
                let text = lx.number();
                Tok::Int(text.parse().map_err(|_| Diagnostic::error(path, span, format!("integer literal {text} out of range")))?)
            }
            (Mode::Rules, '$') => {
                lx.bump();
                let name = lx.take_while(is_ident_char);
                if name.is_empty() || !name.starts_with(is_ident_start) {
                    return Err(Diagnostic::error(path, span, "expected meta-variable name after `$`"));
                }
                Tok::MetaVar(name)
            }
            (Mode::Rules, c) if is_ident_start(c) => {
                let word = lx.take_while(is_ident_char);
                if word == "_" {
                    Tok::Underscore
                } else {
                    Tok::Ident(word)
                }
            }
            (Mode::Rules, ':') => {
                lx.bump();
                if lx.peek() == Some('=') {
                    lx.bump();
                    Tok::Define
                } else {
                    Tok::Colon
                }
            }
            (Mode::Rules, '=') => {
                lx.bump();
                if lx.peek() == Some('>') {
                    lx.bump();
                    Tok::Implies
                } else {
                    Tok::Eq
                }
            }
            (Mode::Rules, c) => {
                let tok = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    '<' => Tok::Lt,
                    '>' => Tok::Gt,
                    ',' => Tok::Comma,
                    '|' => Tok::Pipe,
                    '?' => Tok::Question,
                    '*' => Tok::Star,
                    '+' => Tok::Plus,
                    '.' => Tok::Dot,
                    other => return Err(Diagnostic::error(path, span, format!("unexpected character `{other}`"))),
                };
                lx.single(tok)
            }
        };
        out.push(Token { tok, span });
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: u32,
    col: u32,
}

impl Lexer {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.chars.get(self.pos + n).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn single(&mut self, tok: Tok) -> Tok {
        self.bump();
        tok
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if !pred(c) {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }

    fn number(&mut self) -> String {
        let mut s = String::new();
        if self.peek() == Some('-') {
            s.push('-');
            self.bump();
        }
        s.push_str(&self.take_while(|c| c.is_ascii_digit()));
        s
    }

    fn skip_trivia(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('/') if self.peek_at(1) == Some('/') => {
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => return,
            }
        }
    }

    fn string(&mut self) -> Result<String, String> {
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                None | Some('\n') => return Err("unterminated string literal".into()),
                Some('"') => return Ok(s),
                Some('\\') => match self.bump() {
                    Some('"') => s.push('"'),
                    Some('\\') => s.push('\\'),
                    Some('n') => s.push('\n'),
                    Some('t') => s.push('\t'),
                    Some(other) => return Err(format!("unknown escape `\\{other}`")),
                    None => return Err("unterminated string literal".into()),
                },
                Some(c) => s.push(c),
            }
        }
    }
}
