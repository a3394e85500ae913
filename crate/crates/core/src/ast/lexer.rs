use super::parser::ParseError;

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    Ident(String),
    Keyword(&'static str),
    IntLit(String),
    LongLit(String),
    FloatLit(String),
    DoubleLit(String),
    CharLit(String),
    StrLit(String),
    /// Operators and separators. `>` is always a single token so that nested
    /// generic closers can be split; the parser re-joins shift operators by
    /// adjacency.
    Punct(&'static str),
    Eof,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub start: usize,
    pub end: usize,
}

const KEYWORDS: &[&str] = &[
    "abstract",
    "assert",
    "boolean",
    "break",
    "byte",
    "case",
    "catch",
    "char",
    "class",
    "const",
    "continue",
    "default",
    "do",
    "double",
    "else",
    "enum",
    "extends",
    "final",
    "finally",
    "float",
    "for",
    "goto",
    "if",
    "implements",
    "import",
    "instanceof",
    "int",
    "interface",
    "long",
    "native",
    "new",
    "package",
    "private",
    "protected",
    "public",
    "return",
    "short",
    "static",
    "strictfp",
    "super",
    "switch",
    "synchronized",
    "this",
    "throw",
    "throws",
    "transient",
    "try",
    "void",
    "volatile",
    "while",
    "true",
    "false",
    "null",
];

// Longest first so that greedy matching picks `>>=`-style operators correctly
// (except `>`, which is emitted alone, see TokenKind::Punct).
const PUNCTS: &[&str] = &[
    "<<=", "...", "->", "::", "<<", "<=", "==", "!=", "&&", "||", "++", "--", "+=", "-=", "*=",
    "/=", "%=", "&=", "|=", "^=", "(", ")", "{", "}", "[", "]", ";", ",", ".", "@", "=", "<", ">",
    "!", "~", "?", ":", "+", "-", "*", "/", "&", "|", "^", "%",
];

/// Splits source text into tokens, discarding whitespace and comments.
pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    let mut line = 1;

    while i < bytes.len() {
        let c = bytes[i];
        if c == b'\n' {
            line += 1;
            i += 1;
            continue;
        }
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == b'/' && bytes.get(i + 1) == Some(&b'/') {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        if c == b'/' && bytes.get(i + 1) == Some(&b'*') {
            let open_line = line;
            i += 2;
            loop {
                if i + 1 >= bytes.len() {
                    return Err(ParseError::new(open_line, "unterminated comment"));
                }
                if bytes[i] == b'*' && bytes[i + 1] == b'/' {
                    i += 2;
                    break;
                }
                if bytes[i] == b'\n' {
                    line += 1;
                }
                i += 1;
            }
            continue;
        }

        let start = i;
        let kind = if c.is_ascii_alphabetic() || c == b'_' || c == b'$' || c >= 0x80 {
            while i < bytes.len()
                && (bytes[i].is_ascii_alphanumeric()
                    || bytes[i] == b'_'
                    || bytes[i] == b'$'
                    || bytes[i] >= 0x80)
            {
                i += 1;
            }
            let word = &src[start..i];
            match KEYWORDS.iter().find(|k| **k == word) {
                Some(k) => TokenKind::Keyword(k),
                None => TokenKind::Ident(word.to_string()),
            }
        } else if c.is_ascii_digit()
            || (c == b'.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit))
        {
            i = lex_number(bytes, i);
            classify_number(&src[start..i])
        } else if c == b'"' {
            i = lex_quoted(bytes, i, b'"')
                .ok_or_else(|| ParseError::new(line, "unterminated string literal"))?;
            TokenKind::StrLit(src[start..i].to_string())
        } else if c == b'\'' {
            i = lex_quoted(bytes, i, b'\'')
                .ok_or_else(|| ParseError::new(line, "unterminated character literal"))?;
            TokenKind::CharLit(src[start..i].to_string())
        } else {
            let rest = &src[i..];
            match PUNCTS.iter().find(|p| rest.starts_with(**p)) {
                Some(p) => {
                    i += p.len();
                    TokenKind::Punct(p)
                }
                None => {
                    let ch = rest.chars().next().unwrap_or('?');
                    return Err(ParseError::new(
                        line,
                        format!("unexpected character `{ch}`"),
                    ));
                }
            }
        };
        tokens.push(Token {
            kind,
            line,
            start,
            end: i,
        });
    }
    tokens.push(Token {
        kind: TokenKind::Eof,
        line,
        start: bytes.len(),
        end: bytes.len(),
    });
    Ok(tokens)
}

fn lex_number(bytes: &[u8], mut i: usize) -> usize {
    let is_hex = bytes[i] == b'0' && matches!(bytes.get(i + 1), Some(b'x' | b'X'));
    if is_hex {
        i += 2;
        while i < bytes.len() && (bytes[i].is_ascii_hexdigit() || bytes[i] == b'_') {
            i += 1;
        }
    } else {
        while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'_') {
            i += 1;
        }
        if i < bytes.len() && bytes[i] == b'.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit) {
            i += 1;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'_') {
                i += 1;
            }
        } else if i < bytes.len()
            && bytes[i] == b'.'
            && !bytes
                .get(i + 1)
                .is_some_and(|b| b.is_ascii_alphabetic() || *b == b'_')
        {
            // `1.` is a double literal, `1.toString` is not valid Java anyway
            i += 1;
        }
        if i < bytes.len() && matches!(bytes[i], b'e' | b'E') {
            let mut j = i + 1;
            if j < bytes.len() && matches!(bytes[j], b'+' | b'-') {
                j += 1;
            }
            if j < bytes.len() && bytes[j].is_ascii_digit() {
                i = j;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
        }
    }
    if i < bytes.len() && matches!(bytes[i], b'l' | b'L' | b'f' | b'F' | b'd' | b'D') {
        i += 1;
    }
    i
}

fn classify_number(text: &str) -> TokenKind {
    let lower = text.to_ascii_lowercase();
    let is_hex = lower.starts_with("0x");
    if lower.ends_with('l') {
        TokenKind::LongLit(text.to_string())
    } else if !is_hex && lower.ends_with('f') {
        TokenKind::FloatLit(text.to_string())
    } else if !is_hex && (lower.ends_with('d') || lower.contains('.') || lower.contains('e')) {
        TokenKind::DoubleLit(text.to_string())
    } else {
        TokenKind::IntLit(text.to_string())
    }
}

fn lex_quoted(bytes: &[u8], mut i: usize, quote: u8) -> Option<usize> {
    i += 1;
    while i < bytes.len() {
        match bytes[i] {
            b'\\' => i += 2,
            b'\n' => return None,
            b if b == quote => return Some(i + 1),
            _ => i += 1,
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<TokenKind> {
        tokenize(src).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn comments_are_dropped() {
        let k = kinds("int a = 1; // trailing\n/* block\n comment */ a++;");
        assert!(!k
            .iter()
            .any(|t| matches!(t, TokenKind::Ident(s) if s == "trailing")));
        assert_eq!(k.len(), 9);
    }

    #[test]
    fn number_literal_kinds() {
        assert_eq!(kinds("10")[0], TokenKind::IntLit("10".into()));
        assert_eq!(kinds("10L")[0], TokenKind::LongLit("10L".into()));
        assert_eq!(kinds("1.5f")[0], TokenKind::FloatLit("1.5f".into()));
        assert_eq!(kinds("1e3")[0], TokenKind::DoubleLit("1e3".into()));
        assert_eq!(kinds("0xFF")[0], TokenKind::IntLit("0xFF".into()));
        assert_eq!(kinds(".5")[0], TokenKind::DoubleLit(".5".into()));
    }

    #[test]
    fn string_escapes_stay_raw() {
        assert_eq!(kinds(r#""a\"b""#)[0], TokenKind::StrLit(r#""a\"b""#.into()));
    }

    #[test]
    fn line_numbers_follow_newlines() {
        let toks = tokenize("a\n\nb").unwrap();
        assert_eq!(toks[0].line, 1);
        assert_eq!(toks[1].line, 3);
    }

    #[test]
    fn unterminated_string_reports_line() {
        let err = tokenize("int a;\nString s = \"abc;").unwrap_err();
        assert_eq!(err.line, 2);
    }

    #[test]
    fn greater_than_is_never_merged() {
        let k = kinds("a >> b");
        assert_eq!(k[1], TokenKind::Punct(">"));
        assert_eq!(k[2], TokenKind::Punct(">"));
    }
}
