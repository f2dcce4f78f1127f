//! Monomial orderings and their extensions to free modules.

use std::cmp::Ordering;
use std::fmt;

use crate::arith::monomial::{cmp_degrevlex, cmp_lex, Monomial};
use crate::error::{Error, Result};

/// A global monomial ordering on the operator variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MonoOrder {
    Lex,
    DegRevLex,
    /// Weighted degree first (missing weights are zero), then `tie`.
    Weighted { weights: Vec<u64>, tie: Box<MonoOrder> },
}

impl MonoOrder {
    pub fn weighted(weights: Vec<u64>, tie: MonoOrder) -> Self {
        MonoOrder::Weighted { weights, tie: Box::new(tie) }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonoOrder::Lex => cmp_lex(a, b),
            MonoOrder::DegRevLex => cmp_degrevlex(a, b),
            MonoOrder::Weighted { weights, tie } => {
                let wa = weighted_degree(weights, a);
                let wb = weighted_degree(weights, b);
                wa.cmp(&wb).then_with(|| tie.cmp(a, b))
            }
        }
    }

    pub fn checked_cmp(&self, a: &Monomial, b: &Monomial) -> Result<Ordering> {
        if a.nvars() != b.nvars() {
            return Err(Error::ArityMismatch { expected: a.nvars(), found: b.nvars() });
        }
        Ok(self.cmp(a, b))
    }

    /// Ordering token in the script syntax (`dp`, `lp`, `a(1,1),dp`).
    pub fn token(&self) -> String {
        match self {
            MonoOrder::Lex => "lp".into(),
            MonoOrder::DegRevLex => "dp".into(),
            MonoOrder::Weighted { weights, tie } => {
                let w: Vec<String> = weights.iter().map(|w| w.to_string()).collect();
                format!("a({}),{}", w.join(","), tie.token())
            }
        }
    }
}

fn weighted_degree(weights: &[u64], m: &Monomial) -> u64 {
    m.exponents().iter().zip(weights).map(|(&e, &w)| e as u64 * w).sum()
}

/// How component indices compare: `Descending` makes `e_1` the largest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ComponentOrder {
    Ascending,
    Descending,
}

impl ComponentOrder {
    /// Comparison of 0-based component indices as module terms.
    fn cmp(self, a: usize, b: usize) -> Ordering {
        match self {
            ComponentOrder::Ascending => a.cmp(&b),
            ComponentOrder::Descending => b.cmp(&a),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    TermOverPosition(ComponentOrder),
    PositionOverTerm(ComponentOrder),
}

/// Ordering on module terms `(monomial, component)`.
///
/// With `tag_start = Some(m)` every term in a component `>= m` is below every term in
/// a component `< m`; inside each block the scheme applies unchanged.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModOrder {
    pub base: MonoOrder,
    pub scheme: Scheme,
    pub tag_start: Option<usize>,
}

impl Default for ModOrder {
    fn default() -> Self {
        ModOrder::top(MonoOrder::DegRevLex, ComponentOrder::Descending)
    }
}

impl ModOrder {
    pub fn top(base: MonoOrder, comps: ComponentOrder) -> Self {
        ModOrder { base, scheme: Scheme::TermOverPosition(comps), tag_start: None }
    }

    pub fn pot(base: MonoOrder, comps: ComponentOrder) -> Self {
        ModOrder { base, scheme: Scheme::PositionOverTerm(comps), tag_start: None }
    }

    /// The same ordering with components `>= m` pushed below all others.
    pub fn lift(&self, m: usize) -> Self {
        ModOrder { tag_start: Some(m), ..self.clone() }
    }

    pub fn is_tag(&self, comp: usize) -> bool {
        self.tag_start.map_or(false, |m| comp >= m)
    }

    pub fn cmp(&self, a: (&Monomial, usize), b: (&Monomial, usize)) -> Ordering {
        if let Some(m) = self.tag_start {
            match (a.1 >= m, b.1 >= m) {
                (true, false) => return Ordering::Less,
                (false, true) => return Ordering::Greater,
                _ => {}
            }
        }
        match self.scheme {
            Scheme::TermOverPosition(c) => self.base.cmp(a.0, b.0).then_with(|| c.cmp(a.1, b.1)),
            Scheme::PositionOverTerm(c) => c.cmp(a.1, b.1).then_with(|| self.base.cmp(a.0, b.0)),
        }
    }

    /// Comparison with range checks against the ambient rank.
    pub fn checked_cmp(&self, a: (&Monomial, usize), b: (&Monomial, usize), rank: usize) -> Result<Ordering> {
        for c in [a.1, b.1] {
            if c >= rank {
                return Err(Error::ComponentOutOfRange { component: c, rank });
            }
        }
        if a.0.nvars() != b.0.nvars() {
            return Err(Error::ArityMismatch { expected: a.0.nvars(), found: b.0.nvars() });
        }
        Ok(self.cmp(a, b))
    }

    /// Script token: component letter first for term-over-position, last otherwise.
    pub fn token(&self) -> String {
        let letter = |c: ComponentOrder| match c {
            ComponentOrder::Descending => "c",
            ComponentOrder::Ascending => "C",
        };
        match self.scheme {
            Scheme::TermOverPosition(c) => format!("({},{})", letter(c), self.base.token()),
            Scheme::PositionOverTerm(c) => format!("({},{})", self.base.token(), letter(c)),
        }
    }

    /// Parses `(c,dp)`, `(C,lp)`, `(a(1,1),dp)`, `(dp,c)`, ...
    pub fn parse(token: &str) -> std::result::Result<ModOrder, String> {
        let t: String = token.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = t
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| format!("ordering `{token}` must be parenthesized"))?;
        let parts = split_top_level(inner);
        let is_comp = |s: &str| s == "c" || s == "C";
        let comp_of = |s: &str| if s == "c" { ComponentOrder::Descending } else { ComponentOrder::Ascending };
        let (comps, mono_parts, top) = match parts.as_slice() {
            [first, rest @ ..] if is_comp(first) => (comp_of(first), rest.to_vec(), true),
            [rest @ .., last] if is_comp(last) => (comp_of(last), rest.to_vec(), false),
            _ => (ComponentOrder::Descending, parts.clone(), true),
        };
        let base = parse_mono_parts(&mono_parts).map_err(|e| format!("ordering `{token}`: {e}"))?;
        Ok(if top { ModOrder::top(base, comps) } else { ModOrder::pot(base, comps) })
    }
}

impl fmt::Display for ModOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

fn split_top_level(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                cur.push(ch);
            }
            ',' if depth == 0 => out.push(std::mem::take(&mut cur)),
            _ => cur.push(ch),
        }
    }
    out.push(cur);
    out
}

/// Parses a monomial ordering from its comma-separated pieces, e.g. `["a(1,1)", "dp"]`.
pub fn parse_mono_parts(parts: &[String]) -> std::result::Result<MonoOrder, String> {
    match parts {
        [single] => match single.as_str() {
            "dp" => Ok(MonoOrder::DegRevLex),
            "lp" => Ok(MonoOrder::Lex),
            other => Err(format!("unknown monomial ordering `{other}`")),
        },
        [w, rest @ ..] if w.starts_with("a(") && w.ends_with(')') && !rest.is_empty() => {
            let weights = w[2..w.len() - 1]
                .split(',')
                .map(|x| x.parse::<u64>().map_err(|_| format!("bad weight `{x}`")))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            Ok(MonoOrder::weighted(weights, parse_mono_parts(rest)?))
        }
        _ => Err(format!("cannot read monomial ordering from `{}`", parts.join(","))),
    }
}
