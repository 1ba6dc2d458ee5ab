use crate::error::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Colon,
    Backslash,
    /// `=>`
    Implies,
    /// `->`
    Arrow,
    /// `<=>`
    Iff,
    /// `==`
    EqEq,
    /// `\/`
    Or,
    /// `/\`
    And,
    /// `~`
    Tilde,
    /// `|-`
    Turnstile,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{}`", s),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Backslash => "`\\`".into(),
            Tok::Implies => "`=>`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Iff => "`<=>`".into(),
            Tok::EqEq => "`==`".into(),
            Tok::Or => "`\\/`".into(),
            Tok::And => "`/\\`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Turnstile => "`|-`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub fn tokenize(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let start = (line, col);
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i, &mut col);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let next = chars.get(i + 1).copied();
        let two = |a: char, b: char| c == a && next == Some(b);
        let (tok, len) = if is_ident_start(c) {
            let mut j = i;
            while j < chars.len() && is_ident_char(chars[j]) {
                j += 1;
            }
            (Tok::Ident(chars[i..j].iter().collect()), j - i)
        } else if c == '<' && next == Some('=') && chars.get(i + 2) == Some(&'>') {
            (Tok::Iff, 3)
        } else if two('=', '>') {
            (Tok::Implies, 2)
        } else if two('-', '>') {
            (Tok::Arrow, 2)
        } else if two('=', '=') {
            (Tok::EqEq, 2)
        } else if two('\\', '/') {
            (Tok::Or, 2)
        } else if two('/', '\\') {
            (Tok::And, 2)
        } else if two('|', '-') {
            (Tok::Turnstile, 2)
        } else {
            let t = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '.' => Tok::Dot,
                ':' => Tok::Colon,
                '\\' => Tok::Backslash,
                '~' => Tok::Tilde,
                _ => {
                    return Err(ParseError { line, col, message: format!("unexpected character `{}`", c) });
                }
            };
            (t, 1)
        };
        advance(len, &mut i, &mut col);
        out.push(Spanned { tok, line: start.0, col: start.1 });
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn operators_and_comments() {
        assert_eq!(
            toks("x \\/ y /\\ ~z <=> a => b == c # done\n|- \\w:B->B. w"),
            vec![
                Tok::Ident("x".into()),
                Tok::Or,
                Tok::Ident("y".into()),
                Tok::And,
                Tok::Tilde,
                Tok::Ident("z".into()),
                Tok::Iff,
                Tok::Ident("a".into()),
                Tok::Implies,
                Tok::Ident("b".into()),
                Tok::EqEq,
                Tok::Ident("c".into()),
                Tok::Turnstile,
                Tok::Backslash,
                Tok::Ident("w".into()),
                Tok::Colon,
                Tok::Ident("B".into()),
                Tok::Arrow,
                Tok::Ident("B".into()),
                Tok::Dot,
                Tok::Ident("w".into()),
                Tok::Eof,
            ]
        );
    }

    #[test]
    fn positions_and_errors() {
        let t = tokenize("a\n  b").unwrap();
        assert_eq!((t[1].line, t[1].col), (2, 3));
        let e = tokenize("x & y").unwrap_err();
        assert_eq!((e.line, e.col), (1, 3));
        assert_eq!(toks("y'b1"), vec![Tok::Ident("y'b1".into()), Tok::Eof]);
    }
}
