//! The session-script language: a dialect of the ring/module sessions of classical
//! computer-algebra systems.
//!
//! ```text
//! ring r1 = (0,g,l1,l2),(d),(c,dp);
//! module RR = [d^2+g/l1, 0, -g/l1], [0, d^2+g/l2, -g/l2];
//! control RR;
//! ```

use std::fmt;

use parametra_core::ordering::ModOrder;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Debug)]
pub struct Spanned<T> {
    pub value: T,
    pub span: Span,
}

// equality ignores positions so that reprinted scripts compare equal
impl<T: PartialEq> PartialEq for Spanned<T> {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

fn spanned<T>(value: T, start: usize, end: usize) -> Spanned<T> {
    Spanned { value, span: Span { start, end } }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CommandKind {
    Gb,
    Trinity,
    Lift,
    Syz,
    LeftInverse,
    RightInverse,
    LeftKernel,
    RightKernel,
    Rank,
    Dim,
    Control,
    Autonom,
    Genericity,
    Stratify,
    LwObstruction,
    Specialize,
    Verify,
    Print,
}

impl CommandKind {
    pub const ALL: [CommandKind; 18] = [
        CommandKind::Gb,
        CommandKind::Trinity,
        CommandKind::Lift,
        CommandKind::Syz,
        CommandKind::LeftInverse,
        CommandKind::RightInverse,
        CommandKind::LeftKernel,
        CommandKind::RightKernel,
        CommandKind::Rank,
        CommandKind::Dim,
        CommandKind::Control,
        CommandKind::Autonom,
        CommandKind::Genericity,
        CommandKind::Stratify,
        CommandKind::LwObstruction,
        CommandKind::Specialize,
        CommandKind::Verify,
        CommandKind::Print,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            CommandKind::Gb => "gb",
            CommandKind::Trinity => "trinity",
            CommandKind::Lift => "lift",
            CommandKind::Syz => "syz",
            CommandKind::LeftInverse => "leftinverse",
            CommandKind::RightInverse => "rightinverse",
            CommandKind::LeftKernel => "leftkernel",
            CommandKind::RightKernel => "rightkernel",
            CommandKind::Rank => "rank",
            CommandKind::Dim => "dim",
            CommandKind::Control => "control",
            CommandKind::Autonom => "autonom",
            CommandKind::Genericity => "genericity",
            CommandKind::Stratify => "stratify",
            CommandKind::LwObstruction => "lw-obstruction",
            CommandKind::Specialize => "specialize",
            CommandKind::Verify => "verify",
            CommandKind::Print => "print",
        }
    }

    pub fn from_keyword(s: &str) -> Option<CommandKind> {
        CommandKind::ALL.into_iter().find(|k| k.keyword() == s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CommandArgs {
    /// A single module name.
    Module(Spanned<String>),
    /// Generators and targets of `lift`.
    Pair(Spanned<String>, Spanned<String>),
    /// A parenthesized list of parameter polynomials (`stratify (p, q)`).
    Polys(Vec<Spanned<String>>),
    /// `name = expression` pairs of `specialize`.
    Assignments(Vec<(Spanned<String>, Spanned<String>)>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Statement {
    Ring { name: String, params: Vec<Spanned<String>>, vars: Vec<Spanned<String>>, order: ModOrder },
    Poly { name: Spanned<String>, expr: Spanned<String> },
    Module { name: Spanned<String>, rows: Vec<Vec<Spanned<String>>> },
    Command { kind: CommandKind, args: CommandArgs },
    /// `order (c,dp);` changes the ordering of the current ring.
    Order(ModOrder),
    /// Accepted for compatibility with pasted sessions (`LIB "..."`, `option(...)`).
    Ignored(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SessionScript {
    pub statements: Vec<Spanned<Statement>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagnosticKind {
    Syntax,
    Undeclared,
    Ordering,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            DiagnosticKind::Syntax => "syntax error",
            DiagnosticKind::Undeclared => "undeclared identifier",
            DiagnosticKind::Ordering => "malformed ordering",
        };
        write!(f, "{}:{}: {}: {}", self.line, self.column, kind, self.message)
    }
}

impl std::error::Error for Diagnostic {}

/// 1-based line and column (in characters) of byte `offset`.
pub fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

pub(crate) fn diag(text: &str, kind: DiagnosticKind, offset: usize, message: impl Into<String>) -> Diagnostic {
    let (line, column) = line_col(text, offset);
    Diagnostic { kind, line, column, message: message.into() }
}

/// Replaces `//` comments by spaces so that offsets stay valid.
fn strip_comments(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut in_comment = false;
    let mut in_string = false;
    let b = text.as_bytes();
    let mut i = 0;
    for ch in text.chars() {
        let len = ch.len_utf8();
        if in_comment {
            if ch == '\n' {
                in_comment = false;
                out.push('\n');
            } else {
                out.extend(std::iter::repeat(' ').take(len));
            }
        } else if !in_string && ch == '/' && b.get(i + 1) == Some(&b'/') {
            in_comment = true;
            out.push(' ');
        } else {
            if ch == '"' {
                in_string = !in_string;
            }
            out.push(ch);
        }
        i += len;
    }
    out
}

/// Splits at top-level separators, returning trimmed pieces with their byte offsets.
fn split_top(text: &str, base: usize, sep: u8) -> Vec<(String, usize)> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, &c) in b.iter().enumerate() {
        match c {
            b'(' | b'[' => depth += 1,
            b')' | b']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(trimmed(&text[start..i], base + start));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(trimmed(&text[start..], base + start));
    out
}

fn trimmed(s: &str, offset: usize) -> (String, usize) {
    let lead = s.len() - s.trim_start().len();
    (s.trim().to_string(), offset + lead)
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

struct StatementParser<'a> {
    src: &'a str,
}

impl<'a> StatementParser<'a> {
    fn err(&self, offset: usize, msg: impl Into<String>) -> Diagnostic {
        diag(self.src, DiagnosticKind::Syntax, offset, msg)
    }

    fn name(&self, s: &str, at: usize, what: &str) -> Result<Spanned<String>, Diagnostic> {
        if !is_name(s) {
            return Err(self.err(at, format!("expected {what} name, found `{s}`")));
        }
        Ok(spanned(s.to_string(), at, at + s.len()))
    }

    /// `(a, b, c)` into its pieces.
    fn group(&self, s: &str, at: usize) -> Result<Vec<(String, usize)>, Diagnostic> {
        let inner = s
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(|| self.err(at, format!("expected a parenthesized list, found `{s}`")))?;
        let parts = split_top(inner, at + 1, b',');
        if parts.len() == 1 && parts[0].0.is_empty() {
            return Ok(Vec::new());
        }
        Ok(parts)
    }

    fn statement(&self, text: &str, at: usize) -> Result<Statement, Diagnostic> {
        let kw_len = text.find(|c: char| !(c.is_ascii_alphanumeric() || c == '-' || c == '_')).unwrap_or(text.len());
        let kw = &text[..kw_len];
        let (rest, rest_at) = trimmed(&text[kw_len..], at + kw_len);
        match kw {
            "LIB" | "option" => Ok(Statement::Ignored(text.to_string())),
            "ring" => self.ring(&rest, rest_at),
            "order" => ModOrder::parse(&rest).map(Statement::Order).map_err(|m| diag(self.src, DiagnosticKind::Ordering, rest_at, m)),
            "poly" => {
                let (lhs, rhs) = self.assignment(&rest, rest_at)?;
                Ok(Statement::Poly { name: self.name(&lhs.0, lhs.1, "polynomial")?, expr: spanned(rhs.0.clone(), rhs.1, rhs.1 + rhs.0.len()) })
            }
            "module" | "matrix" => {
                let (lhs, rhs) = self.assignment(&rest, rest_at)?;
                let name = self.name(&lhs.0, lhs.1, "module")?;
                let mut rows = Vec::new();
                for (row, row_at) in split_top(&rhs.0, rhs.1, b',') {
                    let inner = row
                        .strip_prefix('[')
                        .and_then(|x| x.strip_suffix(']'))
                        .ok_or_else(|| self.err(row_at, format!("expected a bracketed row, found `{row}`")))?;
                    let entries: Vec<Spanned<String>> = split_top(inner, row_at + 1, b',')
                        .into_iter()
                        .map(|(e, e_at)| {
                            if e.is_empty() {
                                Err(self.err(e_at, "empty matrix entry"))
                            } else {
                                Ok(spanned(e.clone(), e_at, e_at + e.len()))
                            }
                        })
                        .collect::<Result<_, _>>()?;
                    rows.push(entries);
                }
                if let Some(first) = rows.first() {
                    if let Some((k, _)) = rows.iter().enumerate().find(|(_, r)| r.len() != first.len()) {
                        return Err(self.err(rows[k][0].span.start, format!("row {} has {} entries, expected {}", k + 1, rows[k].len(), first.len())));
                    }
                }
                Ok(Statement::Module { name, rows })
            }
            _ => match CommandKind::from_keyword(kw) {
                Some(kind) => Ok(Statement::Command { kind, args: self.command_args(kind, &rest, rest_at)? }),
                None => Err(self.err(at, format!("unknown statement `{kw}`"))),
            },
        }
    }

    fn assignment(&self, text: &str, at: usize) -> Result<((String, usize), (String, usize)), Diagnostic> {
        let eq = text.find('=').ok_or_else(|| self.err(at + text.len(), "expected `=`"))?;
        let lhs = trimmed(&text[..eq], at);
        let rhs = trimmed(&text[eq + 1..], at + eq + 1);
        if rhs.0.is_empty() {
            return Err(self.err(rhs.1, "expected an expression after `=`"));
        }
        Ok((lhs, rhs))
    }

    fn ring(&self, text: &str, at: usize) -> Result<Statement, Diagnostic> {
        let (lhs, rhs) = self.assignment(text, at)?;
        let name = self.name(&lhs.0, lhs.1, "ring")?.value;
        let groups = split_top(&rhs.0, rhs.1, b',');
        let [(coeffs, c_at), (vars, v_at), (ord, o_at)] = groups.as_slice() else {
            return Err(self.err(rhs.1, "expected `(0,params...),(vars...),(ordering)`"));
        };
        let coeffs = self.group(coeffs, *c_at)?;
        match coeffs.first() {
            Some((c, _)) if c == "0" => {}
            Some((c, c_at)) => return Err(self.err(*c_at, format!("only characteristic 0 is supported, found `{c}`"))),
            None => return Err(self.err(*c_at, "expected the characteristic `0`")),
        }
        let params = coeffs[1..].iter().map(|(p, p_at)| self.name(p, *p_at, "parameter")).collect::<Result<Vec<_>, _>>()?;
        let vars = self.group(vars, *v_at)?.iter().map(|(v, v_at)| self.name(v, *v_at, "variable")).collect::<Result<Vec<_>, _>>()?;
        if vars.is_empty() {
            return Err(self.err(*v_at, "a ring needs at least one operator variable"));
        }
        let order = ModOrder::parse(ord).map_err(|m| diag(self.src, DiagnosticKind::Ordering, *o_at, m))?;
        let mut seen: Vec<&str> = Vec::new();
        for s in params.iter().chain(&vars) {
            if seen.contains(&s.value.as_str()) {
                return Err(self.err(s.span.start, format!("`{}` is declared twice", s.value)));
            }
            seen.push(&s.value);
        }
        Ok(Statement::Ring { name, params, vars, order })
    }

    fn command_args(&self, kind: CommandKind, text: &str, at: usize) -> Result<CommandArgs, Diagnostic> {
        match kind {
            CommandKind::Lift => {
                let parts = split_top(text, at, b',');
                let [(a, a_at), (b, b_at)] = parts.as_slice() else {
                    return Err(self.err(at, "`lift` expects `lift GENERATORS, TARGETS`"));
                };
                Ok(CommandArgs::Pair(self.name(a, *a_at, "module")?, self.name(b, *b_at, "module")?))
            }
            CommandKind::Specialize => {
                let mut out = Vec::new();
                for (piece, p_at) in split_top(text, at, b',') {
                    let (lhs, rhs) = self.assignment(&piece, p_at)?;
                    out.push((self.name(&lhs.0, lhs.1, "parameter")?, spanned(rhs.0.clone(), rhs.1, rhs.1 + rhs.0.len())));
                }
                Ok(CommandArgs::Assignments(out))
            }
            CommandKind::Stratify if text.starts_with('(') => {
                let polys = self.group(text, at)?;
                if polys.is_empty() {
                    return Err(self.err(at, "`stratify` needs at least one polynomial"));
                }
                Ok(CommandArgs::Polys(polys.into_iter().map(|(p, p_at)| spanned(p.clone(), p_at, p_at + p.len())).collect()))
            }
            _ => Ok(CommandArgs::Module(self.name(text, at, "module")?)),
        }
    }
}

/// Splits into statements and parses each; names are resolved later by [`crate::interp::parse_script`].
pub fn parse_statements(text: &str) -> Result<SessionScript, Diagnostic> {
    let clean = strip_comments(text);
    let parser = StatementParser { src: text };
    let mut statements = Vec::new();
    let pieces = split_top(&clean, 0, b';');
    let last = pieces.len() - 1;
    for (k, (piece, at)) in pieces.into_iter().enumerate() {
        if piece.is_empty() {
            continue;
        }
        if k == last {
            return Err(parser.err(at + piece.len(), "expected `;`"));
        }
        let st = parser.statement(&piece, at)?;
        statements.push(spanned(st, at, at + piece.len()));
    }
    Ok(SessionScript { statements })
}

fn join(items: &[Spanned<String>]) -> String {
    items.iter().map(|s| s.value.as_str()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Ring { name, params, vars, order } => {
                let mut coeffs = vec!["0".to_string()];
                coeffs.extend(params.iter().map(|p| p.value.clone()));
                write!(f, "ring {name} = ({}),({}),{};", coeffs.join(","), join(vars), order.token())
            }
            Statement::Poly { name, expr } => write!(f, "poly {} = {};", name.value, expr.value),
            Statement::Module { name, rows } => {
                let rows: Vec<String> = rows.iter().map(|r| format!("[{}]", r.iter().map(|e| e.value.as_str()).collect::<Vec<_>>().join(", "))).collect();
                write!(f, "module {} = {};", name.value, rows.join(", "))
            }
            Statement::Command { kind, args } => {
                write!(f, "{}", kind.keyword())?;
                match args {
                    CommandArgs::Module(m) => write!(f, " {};", m.value),
                    CommandArgs::Pair(a, b) => write!(f, " {}, {};", a.value, b.value),
                    CommandArgs::Polys(ps) => write!(f, " ({});", ps.iter().map(|p| p.value.as_str()).collect::<Vec<_>>().join(", ")),
                    CommandArgs::Assignments(xs) => {
                        let xs: Vec<String> = xs.iter().map(|(n, e)| format!("{}={}", n.value, e.value)).collect();
                        write!(f, " {};", xs.join(", "))
                    }
                }
            }
            Statement::Order(o) => write!(f, "order {};", o.token()),
            Statement::Ignored(text) => write!(f, "{text};"),
        }
    }
}

impl fmt::Display for SessionScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for st in &self.statements {
            writeln!(f, "{}", st.value)?;
        }
        Ok(())
    }
}
