use super::ExprError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Number,
    Identifier,
    Operator,
    LeftParen,
    RightParen,
    Comma,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    /// Byte offset into the source.
    pub position: usize,
}

pub fn tokenize(source: &str) -> Result<Vec<Token>, ExprError> {
    let bytes = source.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
            }
            b'(' => {
                tokens.push(Token {
                    kind: TokenKind::LeftParen,
                    lexeme: "(".into(),
                    position: i,
                });
                i += 1;
            }
            b')' => {
                tokens.push(Token {
                    kind: TokenKind::RightParen,
                    lexeme: ")".into(),
                    position: i,
                });
                i += 1;
            }
            b',' => {
                tokens.push(Token {
                    kind: TokenKind::Comma,
                    lexeme: ",".into(),
                    position: i,
                });
                i += 1;
            }
            b'+' | b'-' | b'*' | b'/' | b'^' => {
                tokens.push(Token {
                    kind: TokenKind::Operator,
                    lexeme: (b as char).to_string(),
                    position: i,
                });
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                // exponent part: e or E, optional sign, digits
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let lexeme = &source[start..i];
                if lexeme == "." {
                    return Err(ExprError::Lexical {
                        offset: start,
                        ch: '.',
                    });
                }
                tokens.push(Token {
                    kind: TokenKind::Number,
                    lexeme: lexeme.to_string(),
                    position: start,
                });
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                tokens.push(Token {
                    kind: TokenKind::Identifier,
                    lexeme: source[start..i].to_string(),
                    position: start,
                });
            }
            _ => {
                let ch = source[i..].chars().next().unwrap();
                return Err(ExprError::Lexical { offset: i, ch });
            }
        }
    }
    Ok(tokens)
}
