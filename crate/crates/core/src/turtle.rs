//! A Turtle parser for the subset of the syntax that NIF corpora use.
//!
//! Supported: `@prefix`/`@base` and SPARQL-style `PREFIX`/`BASE`, full and
//! prefixed IRIs, the `a` keyword, predicate lists (`;`), object lists (`,`),
//! short and long string literals with escapes, language tags, `^^` datatypes,
//! numeric and boolean literals, and `#` comments.
//!
//! Blank nodes (`_:x`, `[ ]`) and collections (`( )`) are rejected.

use std::collections::HashMap;

use crate::error::{Error, Result};

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
pub const XSD_DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
pub const XSD_DOUBLE: &str = "http://www.w3.org/2001/XMLSchema#double";
pub const XSD_BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Iri(String),
    Literal {
        value: String,
        datatype: Option<String>,
        language: Option<String>,
    },
}

impl Term {
    pub fn as_iri(&self) -> Option<&str> {
        match self {
            Term::Iri(iri) => Some(iri),
            Term::Literal { .. } => None,
        }
    }

    pub fn lexical(&self) -> &str {
        match self {
            Term::Iri(iri) => iri,
            Term::Literal { value, .. } => value,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triple {
    pub subject: String,
    pub predicate: String,
    pub object: Term,
    /// 1-based line of the subject that introduced the statement.
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Iri(String),
    Prefixed(String, String),
    PrefixDecl,
    BaseDecl,
    SparqlPrefix,
    SparqlBase,
    A,
    Str(String),
    LangTag(String),
    Carets,
    Integer(String),
    Decimal(String),
    Double(String),
    Boolean(bool),
    Dot,
    Semicolon,
    Comma,
}

#[derive(Debug, Clone, Copy)]
struct Pos {
    line: usize,
    column: usize,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(input: &'a str) -> Self {
        Lexer {
            chars: input.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            column: self.column,
        }
    }

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

    fn error(&self, pos: Pos, message: impl Into<String>) -> Error {
        Error::Turtle {
            line: pos.line,
            column: pos.column,
            message: message.into(),
        }
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn next_token(&mut self) -> Result<Option<(Token, Pos)>> {
        self.skip_trivia();
        let pos = self.pos();
        let Some(c) = self.peek() else {
            return Ok(None);
        };
        let token = match c {
            '<' => {
                self.bump();
                Token::Iri(self.iri_body(pos)?)
            }
            '"' | '\'' => Token::Str(self.string(pos)?),
            '@' => {
                self.bump();
                let word = self.take_while(|c| c.is_ascii_alphanumeric() || c == '-');
                match word.as_str() {
                    "prefix" => Token::PrefixDecl,
                    "base" => Token::BaseDecl,
                    "" => return Err(self.error(pos, "empty language tag")),
                    _ => Token::LangTag(word),
                }
            }
            '^' => {
                self.bump();
                if self.bump() != Some('^') {
                    return Err(self.error(pos, "expected `^^`"));
                }
                Token::Carets
            }
            '.' => {
                self.bump();
                if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    let digits = self.take_while(|c| c.is_ascii_digit());
                    self.number_tail(format!(".{digits}"), true)?
                } else {
                    Token::Dot
                }
            }
            ';' => {
                self.bump();
                Token::Semicolon
            }
            ',' => {
                self.bump();
                Token::Comma
            }
            '[' | ']' => return Err(self.error(pos, "blank node property lists are not supported")),
            '(' | ')' => return Err(self.error(pos, "collections are not supported")),
            '_' => return Err(self.error(pos, "blank nodes are not supported")),
            '+' | '-' | '0'..='9' => self.number(pos)?,
            ':' => {
                self.bump();
                Token::Prefixed(String::new(), self.local_name(pos)?)
            }
            c if is_name_start(c) => self.word(pos)?,
            other => return Err(self.error(pos, format!("unexpected character `{other}`"))),
        };
        Ok(Some((token, pos)))
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek() {
            if !f(c) {
                break;
            }
            out.push(c);
            self.bump();
        }
        out
    }

    fn iri_body(&mut self, start: Pos) -> Result<String> {
        let mut out = String::new();
        loop {
            match self.bump() {
                Some('>') => return Ok(out),
                Some('\\') => out.push(self.unicode_escape(start)?),
                Some(c) if c.is_whitespace() || c == '<' || c == '"' => {
                    return Err(self.error(start, format!("invalid character {c:?} in IRI")))
                }
                Some(c) => out.push(c),
                None => return Err(self.error(start, "unterminated IRI")),
            }
        }
    }

    /// Reads `uXXXX` / `UXXXXXXXX` after a backslash.
    fn unicode_escape(&mut self, start: Pos) -> Result<char> {
        let width = match self.bump() {
            Some('u') => 4,
            Some('U') => 8,
            _ => return Err(self.error(start, "invalid escape sequence")),
        };
        let mut hex = String::with_capacity(width);
        for _ in 0..width {
            match self.bump() {
                Some(c) if c.is_ascii_hexdigit() => hex.push(c),
                _ => return Err(self.error(start, "invalid unicode escape")),
            }
        }
        u32::from_str_radix(&hex, 16)
            .ok()
            .and_then(char::from_u32)
            .ok_or_else(|| self.error(start, format!("invalid code point U+{hex}")))
    }

    fn string(&mut self, start: Pos) -> Result<String> {
        let quote = self.bump().expect("peeked quote");
        let long = if self.peek() == Some(quote) {
            self.bump();
            if self.peek() == Some(quote) {
                self.bump();
                true
            } else {
                // Empty short string.
                return Ok(String::new());
            }
        } else {
            false
        };
        let mut out = String::new();
        loop {
            let Some(c) = self.bump() else {
                return Err(self.error(start, "unterminated string literal"));
            };
            match c {
                '\\' => {
                    let escaped = match self.peek() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') | Some('U') => {
                            out.push(self.unicode_escape(start)?);
                            continue;
                        }
                        _ => return Err(self.error(self.pos(), "invalid escape sequence in string")),
                    };
                    self.bump();
                    out.push(escaped);
                }
                c if c == quote && !long => return Ok(out),
                c if c == quote => {
                    if self.peek() == Some(quote) {
                        self.bump();
                        if self.peek() == Some(quote) {
                            self.bump();
                            // Quotes directly before the closing triple belong to the content.
                            while self.peek() == Some(quote) {
                                self.bump();
                                out.push(quote);
                            }
                            return Ok(out);
                        }
                        out.push(quote);
                        out.push(quote);
                    } else {
                        out.push(quote);
                    }
                }
                '\n' | '\r' if !long => {
                    return Err(self.error(start, "newline in short string literal"));
                }
                c => out.push(c),
            }
        }
    }

    fn number(&mut self, start: Pos) -> Result<Token> {
        let mut text = String::new();
        if let Some(sign @ ('+' | '-')) = self.peek() {
            text.push(sign);
            self.bump();
        }
        text.push_str(&self.take_while(|c| c.is_ascii_digit()));
        let mut is_decimal = false;
        if self.peek() == Some('.') {
            // A dot followed by a digit continues the number; otherwise it ends the statement.
            let mut lookahead = self.chars.clone();
            lookahead.next();
            if lookahead.next().is_some_and(|c| c.is_ascii_digit()) {
                self.bump();
                text.push('.');
                text.push_str(&self.take_while(|c| c.is_ascii_digit()));
                is_decimal = true;
            }
        }
        if text.trim_start_matches(['+', '-']).is_empty() {
            return Err(self.error(start, "malformed number"));
        }
        self.number_tail(text, is_decimal)
    }

    fn number_tail(&mut self, mut text: String, is_decimal: bool) -> Result<Token> {
        if let Some(e @ ('e' | 'E')) = self.peek() {
            self.bump();
            text.push(e);
            if let Some(sign @ ('+' | '-')) = self.peek() {
                self.bump();
                text.push(sign);
            }
            let exponent = self.take_while(|c| c.is_ascii_digit());
            if exponent.is_empty() {
                return Err(self.error(self.pos(), "malformed exponent"));
            }
            text.push_str(&exponent);
            return Ok(Token::Double(text));
        }
        Ok(if is_decimal {
            Token::Decimal(text)
        } else {
            Token::Integer(text)
        })
    }

    fn word(&mut self, start: Pos) -> Result<Token> {
        let prefix = self.take_while(is_name_char);
        if self.peek() == Some(':') {
            self.bump();
            let local = self.local_name(start)?;
            return Ok(Token::Prefixed(prefix, local));
        }
        match prefix.as_str() {
            "a" => Ok(Token::A),
            "true" => Ok(Token::Boolean(true)),
            "false" => Ok(Token::Boolean(false)),
            w if w.eq_ignore_ascii_case("prefix") => Ok(Token::SparqlPrefix),
            w if w.eq_ignore_ascii_case("base") => Ok(Token::SparqlBase),
            w => Err(self.error(start, format!("unexpected bare word `{w}`"))),
        }
    }

    /// Local part of a prefixed name; a trailing `.` is left for the parser.
    fn local_name(&mut self, start: Pos) -> Result<String> {
        let mut out = String::new();
        loop {
            match self.peek() {
                Some('.') => {
                    // Only part of the name if something name-like follows.
                    let mut lookahead = self.chars.clone();
                    lookahead.next();
                    let mut next = lookahead.next();
                    let mut run = 1;
                    while next == Some('.') {
                        run += 1;
                        next = lookahead.next();
                    }
                    if next.is_some_and(|c| is_name_char(c) || c == ':' || c == '%' || c == '\\') {
                        for _ in 0..run {
                            self.bump();
                        }
                        out.extend(std::iter::repeat_n('.', run));
                    } else {
                        break;
                    }
                }
                Some('%') => {
                    self.bump();
                    out.push('%');
                    for _ in 0..2 {
                        match self.bump() {
                            Some(h) if h.is_ascii_hexdigit() => out.push(h),
                            _ => return Err(self.error(start, "malformed percent escape in name")),
                        }
                    }
                }
                Some('\\') => {
                    self.bump();
                    match self.bump() {
                        Some(c) if "_~.-!$&'()*+,;=/?#@%".contains(c) => out.push(c),
                        _ => return Err(self.error(start, "invalid escape in local name")),
                    }
                }
                Some(c) if is_name_char(c) || c == ':' => {
                    out.push(c);
                    self.bump();
                }
                _ => break,
            }
        }
        Ok(out)
    }
}

fn is_name_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-' || c == '\u{b7}'
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    lookahead: Option<(Token, Pos)>,
    prefixes: HashMap<String, String>,
    base: Option<String>,
    triples: Vec<Triple>,
}

impl<'a> Parser<'a> {
    fn peek(&mut self) -> Result<Option<&(Token, Pos)>> {
        if self.lookahead.is_none() {
            self.lookahead = self.lexer.next_token()?;
        }
        Ok(self.lookahead.as_ref())
    }

    fn next(&mut self) -> Result<Option<(Token, Pos)>> {
        self.peek()?;
        Ok(self.lookahead.take())
    }

    fn expect_next(&mut self, what: &str) -> Result<(Token, Pos)> {
        let pos = self.lexer.pos();
        self.next()?
            .ok_or_else(|| self.lexer.error(pos, format!("unexpected end of input, expected {what}")))
    }

    fn error(&self, pos: Pos, message: impl Into<String>) -> Error {
        self.lexer.error(pos, message)
    }

    fn document(&mut self) -> Result<()> {
        while let Some((token, pos)) = self.next()? {
            match token {
                Token::PrefixDecl => {
                    self.prefix_body()?;
                    self.expect_dot()?;
                }
                Token::SparqlPrefix => self.prefix_body()?,
                Token::BaseDecl => {
                    self.base_body()?;
                    self.expect_dot()?;
                }
                Token::SparqlBase => self.base_body()?,
                subject => {
                    let subject = self.iri_term(subject, pos, "subject")?;
                    self.predicate_object_list(&subject, pos.line)?;
                    self.expect_dot()?;
                }
            }
        }
        Ok(())
    }

    fn prefix_body(&mut self) -> Result<()> {
        let (name, name_pos) = self.expect_next("prefix name")?;
        let Token::Prefixed(prefix, local) = name else {
            return Err(self.error(name_pos, "expected `prefix:` in prefix declaration"));
        };
        if !local.is_empty() {
            return Err(self.error(name_pos, "prefix declaration name must end with `:`"));
        }
        let (iri, iri_pos) = self.expect_next("IRI")?;
        let Token::Iri(iri) = iri else {
            return Err(self.error(iri_pos, "expected IRI in prefix declaration"));
        };
        let resolved = self.resolve(&iri);
        self.prefixes.insert(prefix, resolved);
        Ok(())
    }

    fn base_body(&mut self) -> Result<()> {
        let (iri, iri_pos) = self.expect_next("IRI")?;
        let Token::Iri(iri) = iri else {
            return Err(self.error(iri_pos, "expected IRI in base declaration"));
        };
        self.base = Some(self.resolve(&iri));
        Ok(())
    }

    fn expect_dot(&mut self) -> Result<()> {
        let (token, pos) = self.expect_next("`.`")?;
        if token != Token::Dot {
            return Err(self.error(pos, "expected `.`"));
        }
        Ok(())
    }

    fn predicate_object_list(&mut self, subject: &str, line: usize) -> Result<()> {
        loop {
            let (token, pos) = self.expect_next("predicate")?;
            let predicate = match token {
                Token::A => RDF_TYPE.to_string(),
                other => self.iri_term(other, pos, "predicate")?,
            };
            loop {
                let (token, pos) = self.expect_next("object")?;
                let object = self.object(token, pos)?;
                self.triples.push(Triple {
                    subject: subject.to_string(),
                    predicate: predicate.clone(),
                    object,
                    line,
                });
                if matches!(self.peek()?, Some((Token::Comma, _))) {
                    self.next()?;
                } else {
                    break;
                }
            }
            if !matches!(self.peek()?, Some((Token::Semicolon, _))) {
                return Ok(());
            }
            while matches!(self.peek()?, Some((Token::Semicolon, _))) {
                self.next()?;
            }
            // A trailing `;` before the final `.` is allowed.
            if matches!(self.peek()?, Some((Token::Dot, _))) {
                return Ok(());
            }
        }
    }

    fn iri_term(&self, token: Token, pos: Pos, role: &str) -> Result<String> {
        match token {
            Token::Iri(iri) => Ok(self.resolve(&iri)),
            Token::Prefixed(prefix, local) => self.expand(&prefix, &local, pos),
            other => Err(self.error(pos, format!("expected IRI as {role}, found {}", describe(&other)))),
        }
    }

    fn object(&mut self, token: Token, pos: Pos) -> Result<Term> {
        let literal = |value: String, datatype: &str| Term::Literal {
            value,
            datatype: Some(datatype.to_string()),
            language: None,
        };
        Ok(match token {
            Token::Iri(_) | Token::Prefixed(..) => Term::Iri(self.iri_term(token, pos, "object")?),
            Token::Integer(v) => literal(v, XSD_INTEGER),
            Token::Decimal(v) => literal(v, XSD_DECIMAL),
            Token::Double(v) => literal(v, XSD_DOUBLE),
            Token::Boolean(b) => literal(b.to_string(), XSD_BOOLEAN),
            Token::Str(value) => match self.peek()? {
                Some((Token::LangTag(_), _)) => {
                    let Some((Token::LangTag(lang), _)) = self.next()? else {
                        unreachable!("peeked language tag");
                    };
                    Term::Literal {
                        value,
                        datatype: None,
                        language: Some(lang),
                    }
                }
                Some((Token::Carets, _)) => {
                    self.next()?;
                    let (dt, dt_pos) = self.expect_next("datatype IRI")?;
                    let datatype = self.iri_term(dt, dt_pos, "datatype")?;
                    Term::Literal {
                        value,
                        datatype: Some(datatype),
                        language: None,
                    }
                }
                _ => Term::Literal {
                    value,
                    datatype: None,
                    language: None,
                },
            },
            other => return Err(self.error(pos, format!("expected object, found {}", describe(&other)))),
        })
    }

    fn expand(&self, prefix: &str, local: &str, pos: Pos) -> Result<String> {
        let namespace = self
            .prefixes
            .get(prefix)
            .ok_or_else(|| self.error(pos, format!("undeclared prefix `{prefix}:`")))?;
        Ok(format!("{namespace}{local}"))
    }

    fn resolve(&self, iri: &str) -> String {
        let Some(base) = &self.base else {
            return iri.to_string();
        };
        if has_scheme(iri) {
            return iri.to_string();
        }
        if iri.is_empty() {
            return base.split('#').next().unwrap_or(base).to_string();
        }
        if iri.starts_with('#') {
            return format!("{}{iri}", base.split('#').next().unwrap_or(base));
        }
        if let Some(rest) = iri.strip_prefix('/') {
            // Keep scheme and authority of the base.
            if let Some((scheme, after)) = base.split_once("://") {
                let authority = after.split('/').next().unwrap_or(after);
                return format!("{scheme}://{authority}/{rest}");
            }
        }
        let dir = match base.rfind('/') {
            Some(i) => &base[..=i],
            None => base.as_str(),
        };
        format!("{dir}{iri}")
    }
}

fn has_scheme(iri: &str) -> bool {
    match iri.find(':') {
        Some(i) => {
            let scheme = &iri[..i];
            !scheme.is_empty()
                && scheme.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && scheme
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
        }
        None => false,
    }
}

fn describe(token: &Token) -> String {
    match token {
        Token::Iri(iri) => format!("<{iri}>"),
        Token::Prefixed(p, l) => format!("{p}:{l}"),
        Token::PrefixDecl => "@prefix".into(),
        Token::BaseDecl => "@base".into(),
        Token::SparqlPrefix => "PREFIX".into(),
        Token::SparqlBase => "BASE".into(),
        Token::A => "`a`".into(),
        Token::Str(_) => "string literal".into(),
        Token::LangTag(t) => format!("@{t}"),
        Token::Carets => "`^^`".into(),
        Token::Integer(v) | Token::Decimal(v) | Token::Double(v) => v.clone(),
        Token::Boolean(b) => b.to_string(),
        Token::Dot => "`.`".into(),
        Token::Semicolon => "`;`".into(),
        Token::Comma => "`,`".into(),
    }
}

/// Parses a Turtle document into its triples, in document order.
pub fn parse_turtle(input: &str) -> Result<Vec<Triple>> {
    let mut parser = Parser {
        lexer: Lexer::new(input.strip_prefix('\u{feff}').unwrap_or(input)),
        lookahead: None,
        prefixes: HashMap::new(),
        base: None,
        triples: Vec::new(),
    };
    parser.document()?;
    Ok(parser.triples)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(value: &str, datatype: Option<&str>) -> Term {
        Term::Literal {
            value: value.into(),
            datatype: datatype.map(str::to_string),
            language: None,
        }
    }

    #[test]
    fn prefixed_names_and_lists() {
        let doc = r#"
            @prefix ex: <http://example.org/> .
            PREFIX foaf: <http://xmlns.com/foaf/0.1/>
            ex:alice a foaf:Person ;
                foaf:knows ex:bob , ex:carol ;
                foaf:age 42 .
        "#;
        let triples = parse_turtle(doc).unwrap();
        assert_eq!(triples.len(), 4);
        assert_eq!(triples[0].predicate, RDF_TYPE);
        assert_eq!(triples[0].object, Term::Iri("http://xmlns.com/foaf/0.1/Person".into()));
        assert_eq!(triples[2].object, Term::Iri("http://example.org/carol".into()));
        assert_eq!(triples[3].object, lit("42", Some(XSD_INTEGER)));
    }

    #[test]
    fn string_escapes_and_long_strings() {
        let doc = "<s> <p> \"tab\\tquote\\\"u\\u00e9\" , '''multi\nline \"x\"''' , \"\"\"a\"\"b\"\"\"@en .";
        let triples = parse_turtle(doc).unwrap();
        assert_eq!(triples[0].object, lit("tab\tquote\"ué", None));
        assert_eq!(triples[1].object, lit("multi\nline \"x\"", None));
        assert_eq!(
            triples[2].object,
            Term::Literal {
                value: "a\"\"b".into(),
                datatype: None,
                language: Some("en".into())
            }
        );
    }

    #[test]
    fn typed_literal_and_empty_string() {
        let doc = r#"@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
            <s> <p> "6"^^xsd:nonNegativeInteger ; <q> "" ."#;
        let triples = parse_turtle(doc).unwrap();
        assert_eq!(
            triples[0].object,
            lit("6", Some("http://www.w3.org/2001/XMLSchema#nonNegativeInteger"))
        );
        assert_eq!(triples[1].object, lit("", None));
    }

    #[test]
    fn local_names_with_dots_and_escapes() {
        let doc = "@prefix d: <http://dbpedia.org/resource/> .\n<s> <p> d:St._Louis , d:A\\,B , d:x%2Cy .";
        let triples = parse_turtle(doc).unwrap();
        assert_eq!(triples[0].object, Term::Iri("http://dbpedia.org/resource/St._Louis".into()));
        assert_eq!(triples[1].object, Term::Iri("http://dbpedia.org/resource/A,B".into()));
        assert_eq!(triples[2].object, Term::Iri("http://dbpedia.org/resource/x%2Cy".into()));
    }

    #[test]
    fn base_resolution() {
        let doc = "@base <http://example.org/doc1> .\n<#char=0,5> <p> </abs> , <rel> .";
        let triples = parse_turtle(doc).unwrap();
        assert_eq!(triples[0].subject, "http://example.org/doc1#char=0,5");
        assert_eq!(triples[0].object, Term::Iri("http://example.org/abs".into()));
        assert_eq!(triples[1].object, Term::Iri("http://example.org/rel".into()));
    }

    #[test]
    fn trailing_semicolon() {
        let triples = parse_turtle("<s> <p> 1 ; <q> 2 ; .").unwrap();
        assert_eq!(triples.len(), 2);
    }

    #[test]
    fn numbers_and_statement_dot() {
        let triples = parse_turtle("<s> <p> 12.\n<s> <q> -1.5 , 2e3 , .5 .").unwrap();
        assert_eq!(triples[0].object, lit("12", Some(XSD_INTEGER)));
        assert_eq!(triples[1].object, lit("-1.5", Some(XSD_DECIMAL)));
        assert_eq!(triples[2].object, lit("2e3", Some(XSD_DOUBLE)));
        assert_eq!(triples[3].object, lit(".5", Some(XSD_DECIMAL)));
    }

    #[test]
    fn rejects_blank_nodes_with_position() {
        match parse_turtle("<s> <p> _:b1 .") {
            Err(Error::Turtle { line, column, message }) => {
                assert_eq!((line, column), (1, 9));
                assert!(message.contains("blank"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_turtle("<s> <p> [ <q> 1 ] .").is_err());
        assert!(parse_turtle("<s> <p> ( 1 2 ) .").is_err());
    }

    #[test]
    fn reports_syntax_errors_with_line() {
        match parse_turtle("<s> <p> <o> .\n<s> <p> \"unterminated .\n") {
            Err(Error::Turtle { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_turtle("<s> <p> <o>").is_err());
        assert!(parse_turtle("ex:s <p> <o> .").is_err());
    }
}
