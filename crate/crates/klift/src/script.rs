//! Parsing for the script language.
//!
//! A script is a sequence of statements. A statement is either a
//! declaration, `ring A = poly(F5; x:1, y:1) / ideal(x*y)`, or a
//! command, `ext(M, N; i=4)`. Statements are line oriented: a newline
//! ends a statement unless it falls inside unmatched `(` or `[`.
//! Comments run from `#` to the end of the line.
//!
//! Inside a call, `;` separates argument groups and `,` separates items
//! within a group. A group whose text starts with `ident =` is a named
//! argument. The same call shape is reused by inline constructors such
//! as `coker(A; shifts=[0]; rels=[[x],[y]])`, so the splitting helpers
//! here are shared with evaluation.

use std::fmt;

/// Source position, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    /// Line number.
    pub line: usize,
    /// Column number in characters.
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, col {}", self.line, self.col)
    }
}

/// Parse error with the position it was detected at.
#[derive(Debug)]
pub struct ScriptError {
    /// Where the problem starts.
    pub pos: Pos,
    /// What went wrong.
    pub msg: String,
}

impl fmt::Display for ScriptError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.msg)
    }
}

impl std::error::Error for ScriptError {}

/// A raw source fragment, still unparsed, with its position.
#[derive(Debug, Clone)]
pub struct Raw {
    /// Fragment text, trimmed.
    pub text: String,
    /// Position of the first character.
    pub pos: Pos,
}

/// One argument group of a command: the span between `;` separators.
#[derive(Debug, Clone)]
pub struct Group {
    /// Key of a named argument (`key=value`), `None` when positional.
    pub key: Option<String>,
    /// Comma separated items. Named groups have exactly one.
    pub items: Vec<Raw>,
    /// Position of the group.
    pub pos: Pos,
}

/// What a declaration binds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeclKind {
    /// A graded ring.
    Ring,
    /// A homogeneous ring element.
    Elem,
    /// A finitely presented module.
    Module,
    /// A bounded chain complex.
    Complex,
}

impl DeclKind {
    fn from_word(w: &str) -> Option<DeclKind> {
        match w {
            "ring" => Some(DeclKind::Ring),
            "elem" => Some(DeclKind::Elem),
            "module" => Some(DeclKind::Module),
            "complex" => Some(DeclKind::Complex),
            _ => None,
        }
    }
}

/// A parsed statement.
#[derive(Debug, Clone)]
pub enum Stmt {
    /// `kind name = rhs`
    Decl {
        /// Namespace of the binding.
        kind: DeclKind,
        /// Bound name.
        name: String,
        /// Right-hand side, evaluated later.
        rhs: Raw,
    },
    /// `name(group; group; ...)` or a bare word like `paper-examples`.
    Command {
        /// Command name.
        name: String,
        /// Argument groups, empty for a bare command.
        groups: Vec<Group>,
        /// Position of the command name.
        pos: Pos,
        /// Whitespace-collapsed source text, echoed into results.
        echo: String,
    },
}

struct Cursor {
    src: Vec<char>,
    i: usize,
    line: usize,
    col: usize,
}

impl Cursor {
    fn new(src: &str) -> Cursor {
        Cursor {
            src: src.chars().collect(),
            i: 0,
            line: 1,
            col: 1,
        }
    }

    fn peek(&self) -> Option<char> {
        self.src.get(self.i).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.i += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            col: self.col,
        }
    }

    fn err(&self, msg: impl Into<String>) -> ScriptError {
        ScriptError {
            pos: self.pos(),
            msg: msg.into(),
        }
    }

    /// Skip whitespace and comments, crossing newlines.
    fn skip_trivia(&mut self) {
        loop {
            match self.peek() {
                Some('#') => {
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                _ => return,
            }
        }
    }

    /// Skip spaces and tabs only; newlines end statements.
    fn skip_inline_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c == ' ' || c == '\t' || c == '\r' {
                self.bump();
            } else {
                return;
            }
        }
    }

    fn at_statement_end(&self) -> bool {
        matches!(self.peek(), None | Some('\n') | Some('#'))
    }

    fn word(&mut self) -> Option<String> {
        let mut w = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' || (c == '-' && !w.is_empty()) {
                w.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if w.is_empty() {
            None
        } else {
            Some(w)
        }
    }

    /// Consume text until a newline at bracket depth 0 or end of input.
    /// Comments end the statement as well (the comment itself is
    /// consumed up to its newline). Only depth errors are rejected here.
    fn statement_tail(&mut self) -> Result<Raw, ScriptError> {
        self.skip_inline_ws();
        let pos = self.pos();
        let mut depth = 0i32;
        let mut text = String::new();
        while let Some(c) = self.peek() {
            match c {
                '\n' if depth == 0 => break,
                '#' if depth == 0 => break,
                '#' => {
                    // comment inside an open bracket: skip to end of line
                    while let Some(k) = self.peek() {
                        if k == '\n' {
                            break;
                        }
                        self.bump();
                    }
                    continue;
                }
                '(' | '[' => depth += 1,
                ')' | ']' => {
                    depth -= 1;
                    if depth < 0 {
                        return Err(self.err(format!("unmatched '{c}'")));
                    }
                }
                _ => {}
            }
            text.push(c);
            self.bump();
        }
        if depth > 0 {
            return Err(self.err("unclosed bracket at end of statement"));
        }
        Ok(Raw {
            text: text.trim().to_string(),
            pos,
        })
    }

    /// Parse `( group ; group ; ... )` starting at the opening paren.
    fn group_list(&mut self) -> Result<Vec<Group>, ScriptError> {
        debug_assert_eq!(self.peek(), Some('('));
        self.bump();
        let mut groups = Vec::new();
        let mut items: Vec<Raw> = Vec::new();
        let mut cur = String::new();
        let mut cur_pos: Option<Pos> = None;
        let mut depth = 0i32;
        loop {
            let Some(c) = self.peek() else {
                return Err(self.err("unclosed '(' in command"));
            };
            if c == '#' {
                // comments are allowed inside argument lists
                while let Some(k) = self.peek() {
                    if k == '\n' {
                        break;
                    }
                    self.bump();
                }
                continue;
            }
            if depth == 0 && (c == ',' || c == ';' || c == ')') {
                let text = cur.trim().to_string();
                if !text.is_empty() {
                    items.push(Raw {
                        text,
                        pos: cur_pos.unwrap_or_else(|| self.pos()),
                    });
                } else if !items.is_empty() || c == ',' {
                    return Err(self.err("empty argument"));
                }
                cur.clear();
                cur_pos = None;
                if c != ',' {
                    if !items.is_empty() {
                        groups.push(finish_group(items)?);
                        items = Vec::new();
                    } else if c == ';' {
                        return Err(self.err("empty argument group"));
                    }
                }
                self.bump();
                if c == ')' {
                    return Ok(groups);
                }
                continue;
            }
            match c {
                '(' | '[' => depth += 1,
                ')' | ']' => depth -= 1,
                _ => {}
            }
            if depth < 0 {
                return Err(self.err(format!("unmatched '{c}'")));
            }
            if !c.is_whitespace() && cur_pos.is_none() {
                cur_pos = Some(self.pos());
            }
            if c.is_whitespace() {
                if !cur.is_empty() {
                    cur.push(' ');
                }
            } else {
                cur.push(c);
            }
            self.bump();
        }
    }
}

/// Turn collected items into a group, detecting the `key=value` form.
fn finish_group(items: Vec<Raw>) -> Result<Group, ScriptError> {
    let pos = items[0].pos;
    if items.len() == 1 {
        if let Some((key, value)) = key_value(&items[0].text) {
            if value.is_empty() {
                return Err(ScriptError {
                    pos,
                    msg: format!("named argument '{key}' has no value"),
                });
            }
            return Ok(Group {
                key: Some(key.to_string()),
                items: vec![Raw {
                    text: value.to_string(),
                    pos,
                }],
                pos,
            });
        }
    } else if let Some((key, _)) = key_value(&items[0].text) {
        return Err(ScriptError {
            pos,
            msg: format!("named argument '{key}' takes a single value"),
        });
    }
    Ok(Group {
        key: None,
        items,
        pos,
    })
}

/// Split `ident = rest` at the top level. The identifier must not be
/// empty and the `=` must sit at bracket depth 0.
pub fn key_value(s: &str) -> Option<(&str, &str)> {
    let mut end = 0;
    for (i, c) in s.char_indices() {
        if c.is_ascii_alphanumeric() || c == '_' {
            end = i + c.len_utf8();
        } else {
            break;
        }
    }
    if end == 0 {
        return None;
    }
    let rest = s[end..].trim_start();
    let eq = rest.strip_prefix('=')?;
    Some((&s[..end], eq.trim()))
}

/// Split on a separator at bracket depth 0, respecting `()` and `[]`.
/// Returns trimmed pieces; an all-whitespace input yields no pieces.
pub fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(s[start..i].trim());
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    if out.len() == 1 && out[0].is_empty() {
        out.clear();
    }
    out
}

/// Strip a call wrapper: `name( inner )` with balanced brackets and
/// nothing trailing. Returns the inner text.
pub fn strip_call<'a>(s: &'a str, name: &str) -> Option<&'a str> {
    let s = s.trim();
    let rest = s.strip_prefix(name)?.trim_start();
    let inner = rest.strip_prefix('(')?;
    let inner = inner.strip_suffix(')')?;
    let mut depth = 0i32;
    for c in inner.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return None;
        }
    }
    if depth == 0 {
        Some(inner)
    } else {
        None
    }
}

/// Parse `[a, b, c]` into its top-level items. `[]` is the empty list.
pub fn bracket_items(s: &str) -> Option<Vec<&str>> {
    let s = s.trim();
    let inner = s.strip_prefix('[')?.strip_suffix(']')?;
    Some(split_top(inner, ','))
}

fn collapse_ws(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut in_ws = false;
    for c in s.chars() {
        if c.is_whitespace() {
            in_ws = true;
        } else {
            if in_ws && !out.is_empty() {
                out.push(' ');
            }
            in_ws = false;
            out.push(c);
        }
    }
    out
}

/// Parse a full script into statements.
pub fn parse(src: &str) -> Result<Vec<Stmt>, ScriptError> {
    let mut cur = Cursor::new(src);
    let mut stmts = Vec::new();
    loop {
        cur.skip_trivia();
        if cur.peek().is_none() {
            return Ok(stmts);
        }
        let pos = cur.pos();
        let start = cur.i;
        let Some(word) = cur.word() else {
            return Err(cur.err("expected a declaration or command"));
        };
        if let Some(kind) = DeclKind::from_word(&word) {
            cur.skip_inline_ws();
            let name_pos = cur.pos();
            let Some(name) = cur.word() else {
                return Err(cur.err(format!("expected a name after '{word}'")));
            };
            if name.contains('-') || name.chars().next().is_some_and(|c| c.is_ascii_digit()) {
                return Err(ScriptError {
                    pos: name_pos,
                    msg: format!("'{name}' is not a valid name"),
                });
            }
            cur.skip_inline_ws();
            if cur.peek() != Some('=') {
                return Err(cur.err(format!("expected '=' after '{word} {name}'")));
            }
            cur.bump();
            let rhs = cur.statement_tail()?;
            if rhs.text.is_empty() {
                return Err(ScriptError {
                    pos: rhs.pos,
                    msg: format!("'{word} {name} =' has no right-hand side"),
                });
            }
            stmts.push(Stmt::Decl { kind, name, rhs });
        } else {
            cur.skip_inline_ws();
            let groups = if cur.peek() == Some('(') {
                cur.group_list()?
            } else {
                Vec::new()
            };
            cur.skip_inline_ws();
            if !cur.at_statement_end() {
                return Err(cur.err("unexpected input after command"));
            }
            let echo = collapse_ws(&src_slice(&cur.src, start, cur.i));
            stmts.push(Stmt::Command {
                name: word,
                groups,
                pos,
                echo,
            });
        }
    }
}

fn src_slice(chars: &[char], start: usize, end: usize) -> String {
    chars[start..end].iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn declarations_and_commands_parse() {
        let src = "\
# header comment
ring A = poly(F5; x:1, y:1) / ideal(x*y)
module M = coker(A; shifts=[0]; rels=[[x],[y]])
regseq(A; x, y)
paper-examples
";
        let stmts = parse(src).unwrap();
        assert_eq!(stmts.len(), 4);
        match &stmts[0] {
            Stmt::Decl { kind, name, rhs } => {
                assert_eq!(*kind, DeclKind::Ring);
                assert_eq!(name, "A");
                assert_eq!(rhs.text, "poly(F5; x:1, y:1) / ideal(x*y)");
                assert_eq!(rhs.pos.line, 2);
            }
            other => panic!("expected decl, got {other:?}"),
        }
        match &stmts[2] {
            Stmt::Command {
                name, groups, echo, ..
            } => {
                assert_eq!(name, "regseq");
                assert_eq!(groups.len(), 2);
                assert!(groups[0].key.is_none());
                assert_eq!(groups[0].items[0].text, "A");
                assert_eq!(groups[1].items.len(), 2);
                assert_eq!(echo, "regseq(A; x, y)");
            }
            other => panic!("expected command, got {other:?}"),
        }
        match &stmts[3] {
            Stmt::Command { name, groups, .. } => {
                assert_eq!(name, "paper-examples");
                assert!(groups.is_empty());
            }
            other => panic!("expected command, got {other:?}"),
        }
    }

    #[test]
    fn named_groups_keep_nested_separators() {
        let src = "lift(A=poly(F3; u:1); x=u; M=coker(A; shifts=[0]; rels=[[u]]); N=5; D=8)\n";
        let stmts = parse(src).unwrap();
        let Stmt::Command { groups, .. } = &stmts[0] else {
            panic!("expected command");
        };
        assert_eq!(groups.len(), 5);
        assert_eq!(groups[0].key.as_deref(), Some("A"));
        assert_eq!(groups[0].items[0].text, "poly(F3; u:1)");
        assert_eq!(groups[2].key.as_deref(), Some("M"));
        assert_eq!(groups[2].items[0].text, "coker(A; shifts=[0]; rels=[[u]])");
        assert_eq!(groups[4].key.as_deref(), Some("D"));
        assert_eq!(groups[4].items[0].text, "8");
    }

    #[test]
    fn multiline_brackets_continue_the_statement() {
        let src = "module M = coker(A;\n  shifts=[0, 1];\n  rels=[[x, y]])\next(M, M; i=2)\n";
        let stmts = parse(src).unwrap();
        assert_eq!(stmts.len(), 2);
        let Stmt::Decl { rhs, .. } = &stmts[0] else {
            panic!("expected decl");
        };
        assert!(rhs.text.contains("shifts=[0, 1]"));
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse("ring A poly(F2; x:1)\n").unwrap_err();
        assert_eq!(err.pos.line, 1);
        assert!(err.to_string().contains("expected '='"));

        let err = parse("ext(M, N\n\n").unwrap_err();
        assert!(err.to_string().contains("unclosed"));

        let err = parse("ext(M,, N)\n").unwrap_err();
        assert!(err.to_string().contains("empty argument"));
    }

    #[test]
    fn split_helpers_respect_nesting() {
        assert_eq!(split_top("a, f(b, c), d", ','), vec!["a", "f(b, c)", "d"]);
        assert_eq!(
            split_top("poly(F5; x:1) / ideal(x)", '/'),
            vec!["poly(F5; x:1)", "ideal(x)"]
        );
        assert_eq!(strip_call("poly(F5; x:1)", "poly"), Some("F5; x:1"));
        assert_eq!(strip_call("poly(F5", "poly"), None);
        assert_eq!(
            bracket_items("[[x],[y]]").unwrap(),
            vec!["[x]", "[y]"]
        );
        assert_eq!(bracket_items("[]").unwrap(), Vec::<&str>::new());
        assert_eq!(key_value("i=4"), Some(("i", "4")));
        assert_eq!(key_value("x*y"), None);
    }
}
