//! Minimal Turtle reader for round-trip checks. Independent of the writer:
//! it handles prefixes, `a`, `;`, `,`, IRIs with `\u` escapes, prefixed
//! names, blank node labels and string literals with language tags or
//! datatypes. Anything else is a parse error.

use std::collections::{BTreeSet, HashMap};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Node {
    Iri(String),
    Blank(String),
    Literal(String, Option<String>, Option<String>),
}

pub type Statement = (Node, String, Node);

struct Reader<'a> {
    chars: Vec<char>,
    pos: usize,
    prefixes: HashMap<String, String>,
    _src: &'a str,
}

impl<'a> Reader<'a> {
    fn skip_ws(&mut self) {
        while let Some(&c) = self.chars.get(self.pos) {
            if c.is_whitespace() {
                self.pos += 1;
            } else if c == '#' {
                while self.chars.get(self.pos).is_some_and(|&c| c != '\n') {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), String> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(format!(
                "expected `{c}` at {}, found {:?}",
                self.pos,
                self.peek()
            ))
        }
    }

    fn hex(&mut self, n: usize) -> Result<char, String> {
        let s: String = self.chars[self.pos..self.pos + n].iter().collect();
        self.pos += n;
        u32::from_str_radix(&s, 16)
            .ok()
            .and_then(char::from_u32)
            .ok_or_else(|| format!("bad escape {s}"))
    }

    fn iri_ref(&mut self) -> Result<String, String> {
        self.expect('<')?;
        let mut out = String::new();
        loop {
            match self.peek() {
                Some('>') => {
                    self.pos += 1;
                    return Ok(out);
                }
                Some('\\') => {
                    self.pos += 1;
                    match self.peek() {
                        Some('u') => {
                            self.pos += 1;
                            out.push(self.hex(4)?);
                        }
                        Some('U') => {
                            self.pos += 1;
                            out.push(self.hex(8)?);
                        }
                        other => return Err(format!("bad IRI escape {other:?}")),
                    }
                }
                Some(c) if c > ' ' && !"<\"{}|^`".contains(c) => {
                    out.push(c);
                    self.pos += 1;
                }
                other => return Err(format!("bad IRI character {other:?}")),
            }
        }
    }

    fn name(&mut self) -> String {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_alphanumeric() || c == '_' || c == '-' || c == ':' || c == '.')
        {
            self.pos += 1;
        }
        // A trailing dot ends the statement, it is not part of the name.
        while self.pos > start && self.chars[self.pos - 1] == '.' {
            self.pos -= 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn prefixed(&mut self) -> Result<String, String> {
        let name = self.name();
        let (p, local) = name
            .split_once(':')
            .ok_or_else(|| format!("not a prefixed name: {name}"))?;
        let base = self
            .prefixes
            .get(p)
            .ok_or_else(|| format!("undeclared prefix {p}"))?;
        Ok(format!("{base}{local}"))
    }

    fn iri(&mut self) -> Result<String, String> {
        self.skip_ws();
        if self.peek() == Some('<') {
            self.iri_ref()
        } else {
            self.prefixed()
        }
    }

    fn string(&mut self) -> Result<String, String> {
        self.expect('"')?;
        let mut out = String::new();
        loop {
            let c = self.peek().ok_or("unterminated string")?;
            self.pos += 1;
            match c {
                '"' => return Ok(out),
                '\\' => {
                    let e = self.peek().ok_or("dangling escape")?;
                    self.pos += 1;
                    match e {
                        't' => out.push('\t'),
                        'n' => out.push('\n'),
                        'r' => out.push('\r'),
                        'b' => out.push('\u{8}'),
                        'f' => out.push('\u{c}'),
                        '"' => out.push('"'),
                        '\'' => out.push('\''),
                        '\\' => out.push('\\'),
                        'u' => out.push(self.hex(4)?),
                        'U' => out.push(self.hex(8)?),
                        other => return Err(format!("bad string escape {other}")),
                    }
                }
                '\n' | '\r' => return Err("raw newline in string".into()),
                c => out.push(c),
            }
        }
    }

    fn subject(&mut self) -> Result<Node, String> {
        self.skip_ws();
        if self.chars[self.pos..].starts_with(&['_', ':']) {
            self.pos += 2;
            return Ok(Node::Blank(self.name()));
        }
        Ok(Node::Iri(self.iri()?))
    }

    fn object(&mut self) -> Result<Node, String> {
        self.skip_ws();
        if self.peek() == Some('"') {
            let value = self.string()?;
            let mut lang = None;
            let mut dt = None;
            if self.peek() == Some('@') {
                self.pos += 1;
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == '-')
                {
                    self.pos += 1;
                }
                lang = Some(self.chars[start..self.pos].iter().collect());
            } else if self.chars[self.pos..].starts_with(&['^', '^']) {
                self.pos += 2;
                dt = Some(self.iri()?);
            }
            return Ok(Node::Literal(value, lang, dt));
        }
        self.subject()
    }

    fn predicate(&mut self) -> Result<String, String> {
        self.skip_ws();
        if self.peek() == Some('a')
            && self
                .chars
                .get(self.pos + 1)
                .is_some_and(|c| c.is_whitespace())
        {
            self.pos += 1;
            return Ok("http://www.w3.org/1999/02/22-rdf-syntax-ns#type".into());
        }
        self.iri()
    }
}

pub fn parse(src: &str) -> Result<BTreeSet<Statement>, String> {
    let mut r = Reader {
        chars: src.chars().collect(),
        pos: 0,
        prefixes: HashMap::new(),
        _src: src,
    };
    let mut out = BTreeSet::new();
    loop {
        r.skip_ws();
        if r.peek().is_none() {
            return Ok(out);
        }
        if r.chars[r.pos..].starts_with(&['@', 'p', 'r', 'e', 'f', 'i', 'x']) {
            r.pos += 7;
            r.skip_ws();
            let p = r.name();
            let p = p
                .strip_suffix(':')
                .ok_or("prefix must end with `:`")?
                .to_string();
            r.skip_ws();
            let iri = r.iri_ref()?;
            r.expect('.')?;
            r.prefixes.insert(p, iri);
            continue;
        }
        let subject = r.subject()?;
        loop {
            let predicate = r.predicate()?;
            loop {
                let object = r.object()?;
                out.insert((subject.clone(), predicate.clone(), object));
                r.skip_ws();
                if r.peek() == Some(',') {
                    r.pos += 1;
                } else {
                    break;
                }
            }
            r.skip_ws();
            match r.peek() {
                Some(';') => r.pos += 1,
                Some('.') => {
                    r.pos += 1;
                    break;
                }
                other => return Err(format!("expected `;` or `.` at {}, found {other:?}", r.pos)),
            }
        }
    }
}
