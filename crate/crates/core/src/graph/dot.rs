//! Parser for the DOT subset used to declare causal graphs.
//!
//! ```text
//! graph     := "digraph" [ID] "{" stmt* "}"
//! stmt      := node_stmt [";"] | edge_stmt [";"]
//! node_stmt := ID [ "[" attr ("," attr)* "]" ]
//! edge_stmt := ID ("->" ID)+
//! attr      := "observed" "=" ("yes" | "no" | "true" | "false")   (value may be quoted)
//! ID        := [A-Za-z_][A-Za-z0-9_]*  or a double-quoted string matching the same pattern
//! ```
//!
//! `#` and `//` start comments that run to the end of the line. Anything
//! outside this grammar (undirected edges, subgraphs, graph attributes, edge
//! attributes, other node attributes) is a parse error.

use std::collections::{HashMap, HashSet};

use super::{is_valid_name, CausalGraph, GraphError};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Quoted(String),
    Arrow,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Eq,
    Semi,
    Comma,
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> GraphError {
    GraphError::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<Token>, GraphError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => advance(1, &mut i, &mut col),
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    advance(1, &mut i, &mut col);
                }
            }
            '/' if chars.get(i + 1) == Some(&'/') => {
                while i < chars.len() && chars[i] != '\n' {
                    advance(1, &mut i, &mut col);
                }
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push(Token {
                    tok: Tok::Arrow,
                    line: tl,
                    column: tc,
                });
                advance(2, &mut i, &mut col);
            }
            '-' if chars.get(i + 1) == Some(&'-') => {
                return Err(err(tl, tc, "undirected edges (`--`) are not supported"));
            }
            '{' | '}' | '[' | ']' | '=' | ';' | ',' => {
                let tok = match c {
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    '=' => Tok::Eq,
                    ';' => Tok::Semi,
                    _ => Tok::Comma,
                };
                out.push(Token {
                    tok,
                    line: tl,
                    column: tc,
                });
                advance(1, &mut i, &mut col);
            }
            '"' => {
                advance(1, &mut i, &mut col);
                let mut s = String::new();
                loop {
                    match chars.get(i) {
                        None | Some('\n') => return Err(err(tl, tc, "unterminated string")),
                        Some('"') => {
                            advance(1, &mut i, &mut col);
                            break;
                        }
                        Some('\\') => {
                            return Err(err(line, col, "escape sequences are not supported"))
                        }
                        Some(&ch) => {
                            s.push(ch);
                            advance(1, &mut i, &mut col);
                        }
                    }
                }
                out.push(Token {
                    tok: Tok::Quoted(s),
                    line: tl,
                    column: tc,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&ch) = chars.get(i) {
                    if ch.is_ascii_alphanumeric() || ch == '_' {
                        s.push(ch);
                        advance(1, &mut i, &mut col);
                    } else {
                        break;
                    }
                }
                out.push(Token {
                    tok: Tok::Ident(s),
                    line: tl,
                    column: tc,
                });
            }
            other => return Err(err(tl, tc, format!("unexpected character `{other}`"))),
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

const RESERVED: [&str; 6] = ["graph", "digraph", "strict", "node", "edge", "subgraph"];

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    order: Vec<String>,
    known: HashSet<String>,
    declared: HashMap<String, bool>,
    edges: Vec<(String, String)>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<Token, GraphError> {
        let t = self.next();
        if t.tok == want {
            Ok(t)
        } else {
            Err(err(t.line, t.column, format!("expected {what}")))
        }
    }

    fn node_id(&mut self) -> Result<String, GraphError> {
        let t = self.next();
        let name = match t.tok {
            Tok::Ident(s) => {
                if RESERVED.contains(&s.to_ascii_lowercase().as_str()) {
                    return Err(err(
                        t.line,
                        t.column,
                        format!("`{s}` statements are not supported"),
                    ));
                }
                s
            }
            Tok::Quoted(s) => {
                if !is_valid_name(&s) {
                    return Err(err(t.line, t.column, format!("invalid node name \"{s}\"")));
                }
                s
            }
            _ => return Err(err(t.line, t.column, "expected node name")),
        };
        if self.known.insert(name.clone()) {
            self.order.push(name.clone());
        }
        Ok(name)
    }

    fn attr_value(&mut self) -> Result<(String, usize, usize), GraphError> {
        let t = self.next();
        match t.tok {
            Tok::Ident(s) | Tok::Quoted(s) => Ok((s, t.line, t.column)),
            _ => Err(err(t.line, t.column, "expected attribute value")),
        }
    }

    fn attr_list(&mut self) -> Result<bool, GraphError> {
        self.expect(Tok::LBracket, "`[`")?;
        let mut observed = true;
        loop {
            if self.peek().tok == Tok::RBracket {
                self.next();
                return Ok(observed);
            }
            let (key, kl, kc) = self.attr_value()?;
            if key != "observed" {
                return Err(err(kl, kc, format!("unsupported attribute `{key}`")));
            }
            self.expect(Tok::Eq, "`=`")?;
            let (value, vl, vc) = self.attr_value()?;
            observed = match value.as_str() {
                "yes" | "true" => true,
                "no" | "false" => false,
                _ => {
                    return Err(err(
                        vl,
                        vc,
                        format!("observed must be yes/no/true/false, got `{value}`"),
                    ))
                }
            };
            if matches!(self.peek().tok, Tok::Comma | Tok::Semi) {
                self.next();
            }
        }
    }

    fn stmt(&mut self) -> Result<(), GraphError> {
        let start = self.peek().clone();
        let first = self.node_id()?;
        match self.peek().tok {
            Tok::Arrow => {
                let mut prev = first;
                while self.peek().tok == Tok::Arrow {
                    self.next();
                    let next = self.node_id()?;
                    self.edges.push((prev, next.clone()));
                    prev = next;
                }
                if self.peek().tok == Tok::LBracket {
                    let t = self.peek();
                    return Err(err(t.line, t.column, "edge attributes are not supported"));
                }
            }
            Tok::LBracket => {
                let observed = self.attr_list()?;
                if self.declared.insert(first.clone(), observed).is_some() {
                    return Err(GraphError::DuplicateNode(first));
                }
            }
            Tok::Eq => {
                return Err(err(
                    start.line,
                    start.column,
                    "graph attributes are not supported",
                ));
            }
            _ => {
                if self.declared.insert(first.clone(), true).is_some() {
                    return Err(GraphError::DuplicateNode(first));
                }
            }
        }
        if self.peek().tok == Tok::Semi {
            self.next();
        }
        Ok(())
    }

    fn graph(mut self) -> Result<CausalGraph, GraphError> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) if s.eq_ignore_ascii_case("digraph") => {}
            Tok::Ident(s)
                if s.eq_ignore_ascii_case("strict") || s.eq_ignore_ascii_case("graph") =>
            {
                return Err(err(
                    t.line,
                    t.column,
                    format!("`{s}` graphs are not supported"),
                ))
            }
            _ => return Err(err(t.line, t.column, "expected `digraph`")),
        }
        if matches!(self.peek().tok, Tok::Ident(_) | Tok::Quoted(_)) {
            self.next();
        }
        self.expect(Tok::LBrace, "`{`")?;
        while self.peek().tok != Tok::RBrace {
            if self.peek().tok == Tok::Eof {
                let t = self.peek();
                return Err(err(t.line, t.column, "expected `}`"));
            }
            self.stmt()?;
        }
        self.next();
        let t = self.next();
        if t.tok != Tok::Eof {
            return Err(err(
                t.line,
                t.column,
                "unexpected content after closing `}`",
            ));
        }
        let nodes: Vec<(String, bool)> = self
            .order
            .iter()
            .map(|n| (n.clone(), *self.declared.get(n).unwrap_or(&true)))
            .collect();
        CausalGraph::new(nodes, self.edges)
    }
}

/// Parses a graph written in the DOT subset described in the module docs.
///
/// Nodes default to observed; `[observed="no"]` marks a latent variable.
/// A node may be declared explicitly at most once, before or after it first
/// appears in an edge.
pub fn parse_graph(text: &str) -> Result<CausalGraph, GraphError> {
    let parser = Parser {
        tokens: tokenize(text)?,
        pos: 0,
        order: Vec::new(),
        known: HashSet::new(),
        declared: HashMap::new(),
        edges: Vec::new(),
    };
    parser.graph()
}
