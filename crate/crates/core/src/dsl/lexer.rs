use super::{Severity, SourceDiagnostic};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Str(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Colon,
    Semi,
    Comma,
    Equals,
    Arrow,
    Eof,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(s) => format!("identifier `{s}`"),
            TokenKind::Str(s) => format!("string {s:?}"),
            TokenKind::LBrace => "`{`".into(),
            TokenKind::RBrace => "`}`".into(),
            TokenKind::LParen => "`(`".into(),
            TokenKind::RParen => "`)`".into(),
            TokenKind::Colon => "`:`".into(),
            TokenKind::Semi => "`;`".into(),
            TokenKind::Comma => "`,`".into(),
            TokenKind::Equals => "`=`".into(),
            TokenKind::Arrow => "`->`".into(),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub column: usize,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }
}

/// Splits `source` into tokens. Lexical errors are reported and the
/// offending characters skipped; the token list always ends with `Eof`.
pub fn lex(source: &str) -> (Vec<Token>, Vec<SourceDiagnostic>) {
    let mut cur = Cursor {
        chars: source.chars().peekable(),
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();
    let mut diags = Vec::new();
    while let Some(c) = cur.peek() {
        let (line, column) = (cur.line, cur.column);
        let push = |tokens: &mut Vec<Token>, kind| tokens.push(Token { kind, line, column });
        match c {
            _ if c.is_whitespace() => {
                cur.bump();
            }
            '#' => {
                while cur.peek().is_some_and(|c| c != '\n') {
                    cur.bump();
                }
            }
            '{' | '}' | '(' | ')' | ':' | ';' | ',' | '=' => {
                cur.bump();
                let kind = match c {
                    '{' => TokenKind::LBrace,
                    '}' => TokenKind::RBrace,
                    '(' => TokenKind::LParen,
                    ')' => TokenKind::RParen,
                    ':' => TokenKind::Colon,
                    ';' => TokenKind::Semi,
                    ',' => TokenKind::Comma,
                    _ => TokenKind::Equals,
                };
                push(&mut tokens, kind);
            }
            '-' => {
                cur.bump();
                if cur.peek() == Some('>') {
                    cur.bump();
                    push(&mut tokens, TokenKind::Arrow);
                } else {
                    diags.push(SourceDiagnostic::error("UnexpectedCharacter", "expected `->`", line, column));
                }
            }
            '"' => {
                cur.bump();
                if let Some(s) = string_body(&mut cur, &mut diags, line, column) {
                    push(&mut tokens, TokenKind::Str(s));
                }
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(c) = cur.peek().filter(|c| c.is_ascii_alphanumeric() || *c == '_') {
                    s.push(c);
                    cur.bump();
                }
                push(&mut tokens, TokenKind::Ident(s));
            }
            _ => {
                cur.bump();
                diags.push(SourceDiagnostic::error(
                    "UnexpectedCharacter",
                    format!("unexpected character {c:?}"),
                    line,
                    column,
                ));
            }
        }
    }
    tokens.push(Token {
        kind: TokenKind::Eof,
        line: cur.line,
        column: cur.column,
    });
    (tokens, diags)
}

/// Reads up to the closing quote. Strings may not span lines.
fn string_body(cur: &mut Cursor, diags: &mut Vec<SourceDiagnostic>, line: usize, column: usize) -> Option<String> {
    let mut s = String::new();
    loop {
        match cur.peek() {
            None | Some('\n') => {
                diags.push(SourceDiagnostic::error(
                    "UnterminatedString",
                    "string is not closed before the end of the line",
                    line,
                    column,
                ));
                return None;
            }
            Some('"') => {
                cur.bump();
                return Some(s);
            }
            Some('\\') => {
                let (l, c) = (cur.line, cur.column);
                cur.bump();
                match cur.peek() {
                    Some(e @ ('"' | '\\')) => {
                        cur.bump();
                        s.push(e);
                    }
                    other => {
                        diags.push(SourceDiagnostic {
                            severity: Severity::Error,
                            code: "InvalidEscape".into(),
                            message: match other {
                                Some(o) => format!("unknown escape `\\{o}`"),
                                None => "escape at end of input".into(),
                            },
                            line: l,
                            column: c,
                        });
                    }
                }
            }
            Some(c) => {
                cur.bump();
                s.push(c);
            }
        }
    }
}
