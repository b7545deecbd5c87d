use super::Diagnostic;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(i64),
    Sym(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Star,
    And,
    Or,
    Bang,
    Arrow,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(i) => format!("integer {i}"),
            Tok::Sym(s) => format!("symbol \"{s}\""),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", other.text()),
        }
    }

    pub(crate) fn text(&self) -> &'static str {
        match self {
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::Eq => "=",
            Tok::Ne => "!=",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::And => "&",
            Tok::Or => "|",
            Tok::Bang => "!",
            Tok::Arrow => "<-",
            Tok::Ident(_) => "identifier",
            Tok::Int(_) => "integer",
            Tok::Sym(_) => "symbol",
            Tok::Eof => "end of input",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

/// Splits `text` into tokens. `<-` is only recognised when `arrows` is set,
/// so that `A<-1` in an equation still reads as `A < -1`.
pub(crate) fn lex(text: &str, arrows: bool) -> Result<Vec<Token>, Diagnostic> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let bump = |c: char, i: &mut usize, line: &mut usize, col: &mut usize| {
        *i += 1;
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        if c.is_whitespace() {
            bump(c, &mut i, &mut line, &mut col);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                bump(chars[i], &mut i, &mut line, &mut col);
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                s.push(chars[i]);
                bump(chars[i], &mut i, &mut line, &mut col);
            }
            out.push(Token { tok: Tok::Ident(s), pos });
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                s.push(chars[i]);
                bump(chars[i], &mut i, &mut line, &mut col);
            }
            let n = s
                .parse::<i64>()
                .map_err(|_| Diagnostic::at(pos, format!("integer literal {s} is too large"), vec![]))?;
            out.push(Token { tok: Tok::Int(n), pos });
            continue;
        }
        if c == '"' {
            bump(c, &mut i, &mut line, &mut col);
            let mut s = String::new();
            loop {
                match chars.get(i) {
                    None | Some('\n') => {
                        return Err(Diagnostic::at(pos, "unterminated symbol".into(), vec!["`\"`".into()]))
                    }
                    Some('"') => {
                        bump('"', &mut i, &mut line, &mut col);
                        break;
                    }
                    Some(&ch) => {
                        s.push(ch);
                        bump(ch, &mut i, &mut line, &mut col);
                    }
                }
            }
            out.push(Token { tok: Tok::Sym(s), pos });
            continue;
        }
        let next = chars.get(i + 1).copied();
        let (tok, len) = match (c, next) {
            ('!', Some('=')) => (Tok::Ne, 2),
            ('<', Some('=')) => (Tok::Le, 2),
            ('>', Some('=')) => (Tok::Ge, 2),
            ('<', Some('-')) if arrows => (Tok::Arrow, 2),
            ('{', _) => (Tok::LBrace, 1),
            ('}', _) => (Tok::RBrace, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('[', _) => (Tok::LBracket, 1),
            (']', _) => (Tok::RBracket, 1),
            (',', _) => (Tok::Comma, 1),
            (':', _) => (Tok::Colon, 1),
            ('=', _) => (Tok::Eq, 1),
            ('<', _) => (Tok::Lt, 1),
            ('>', _) => (Tok::Gt, 1),
            ('+', _) => (Tok::Plus, 1),
            ('-', _) => (Tok::Minus, 1),
            ('*', _) => (Tok::Star, 1),
            ('&', _) => (Tok::And, 1),
            ('|', _) => (Tok::Or, 1),
            ('!', _) => (Tok::Bang, 1),
            _ => {
                return Err(Diagnostic::at(pos, format!("unexpected character `{c}`"), vec![]));
            }
        };
        for _ in 0..len {
            bump(chars[i], &mut i, &mut line, &mut col);
        }
        out.push(Token { tok, pos });
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, column: col },
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str, arrows: bool) -> Vec<Tok> {
        lex(s, arrows).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn arrows_only_when_asked() {
        assert_eq!(toks("A<-1", true), vec![Tok::Ident("A".into()), Tok::Arrow, Tok::Int(1), Tok::Eof]);
        assert_eq!(
            toks("A<-1", false),
            vec![Tok::Ident("A".into()), Tok::Lt, Tok::Minus, Tok::Int(1), Tok::Eof]
        );
    }

    #[test]
    fn comments_and_positions() {
        let t = lex("# note\n  E != \"hi\"", false).unwrap();
        assert_eq!(t[0].pos, Pos { line: 2, column: 3 });
        assert_eq!(t[1].tok, Tok::Ne);
        assert_eq!(t[2].tok, Tok::Sym("hi".into()));
    }

    #[test]
    fn bad_characters_are_diagnosed() {
        let d = lex("var X:{0,1} = $", false).unwrap_err();
        assert_eq!((d.line, d.column), (1, 15));
    }
}
