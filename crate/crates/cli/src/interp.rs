//! Executes session scripts: declarations, specialization and analysis commands.

use std::collections::BTreeMap;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use parametra_core::arith::{ParamFraction, ParamPoly};
use parametra_core::genericity::{
    admissibility_filter, genericity, leykin_walther, solve_on_factor, specialization_agrees, specialization_differs,
    ObstructionSet, SignConstraint,
};
use parametra_core::groebner::{groebner_basis, lift, syzygies, trinity, DenominatorLog, ModElement, ModMatrix, OpPoly};
use parametra_core::homological::{autonomy_analysis_with, control_analysis_with, AnalysisReport, PresentedModule, Verdict};
use parametra_core::module_ops::{canonize_columns, column_rank, left_inverse, left_kernel, right_inverse, right_kernel, substitute_params, system_dimension};
use parametra_core::ordering::{ModOrder, MonoOrder};
use parametra_core::ring::{scan_identifiers, ExprError};
use parametra_core::stratify::{stratify_lc, Stratification, StratumStatus};
use parametra_core::{Error as EngineError, Ring};

use crate::report::{CommandReport, Item};
use crate::script::{diag, CommandArgs, CommandKind, Diagnostic, DiagnosticKind, SessionScript, Spanned, Statement};

/// Per-run settings from flags, environment and config file.
#[derive(Clone, Debug, Default)]
pub struct Options {
    pub order: Option<ModOrder>,
    pub max_ext: Option<usize>,
    /// `(parameter name, constraint)`; names absent from a ring are ignored there.
    pub constraints: Vec<(String, SignConstraint)>,
    pub seed: u64,
    /// Number of random points for `verify`.
    pub samples: usize,
}

#[derive(Debug)]
pub enum RunError {
    Parse(Diagnostic),
    Engine { command: String, line: usize, error: EngineError },
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Parse(d) => write!(f, "{d}"),
            RunError::Engine { command, line, error } => write!(f, "{line}: `{command}` failed: {error}"),
        }
    }
}

struct Obj<T> {
    ring: usize,
    value: T,
}

struct NamedRing {
    name: String,
    ring: Ring,
}

pub struct Interpreter<'a> {
    src: &'a str,
    opts: &'a Options,
    rings: Vec<NamedRing>,
    current: Option<usize>,
    polys: BTreeMap<String, Obj<OpPoly>>,
    modules: BTreeMap<String, Obj<ModMatrix>>,
    check_only: bool,
}

fn expr_diag(src: &str, at: usize, e: &ExprError) -> Diagnostic {
    match e.message.strip_prefix("undeclared identifier ") {
        Some(name) => diag(src, DiagnosticKind::Undeclared, at + e.offset, name),
        None => diag(src, DiagnosticKind::Syntax, at + e.offset, e.message.clone()),
    }
}

/// Parses and name-checks a script without running any analysis.
pub fn parse_script(src: &str, opts: &Options) -> Result<SessionScript, Diagnostic> {
    let script = crate::script::parse_statements(src)?;
    let mut it = Interpreter::new(src, opts, true);
    match it.execute(&script) {
        Ok(_) => Ok(script),
        Err(RunError::Parse(d)) => Err(d),
        // engine failures during declarations surface again when the script runs
        Err(RunError::Engine { .. }) => Ok(script),
    }
}

/// Runs a parsed script; on an engine error the reports of the completed commands are
/// returned alongside the error.
pub fn run(src: &str, script: &SessionScript, opts: &Options) -> (Vec<CommandReport>, Option<RunError>) {
    let mut it = Interpreter::new(src, opts, false);
    let mut reports = Vec::new();
    let err = it.execute_into(script, &mut reports).err();
    (reports, err)
}

impl<'a> Interpreter<'a> {
    fn new(src: &'a str, opts: &'a Options, check_only: bool) -> Self {
        Interpreter { src, opts, rings: Vec::new(), current: None, polys: BTreeMap::new(), modules: BTreeMap::new(), check_only }
    }

    fn execute(&mut self, script: &SessionScript) -> Result<Vec<CommandReport>, RunError> {
        let mut out = Vec::new();
        self.execute_into(script, &mut out)?;
        Ok(out)
    }

    fn execute_into(&mut self, script: &SessionScript, out: &mut Vec<CommandReport>) -> Result<(), RunError> {
        for st in &script.statements {
            let at = st.span.start;
            match &st.value {
                Statement::Ignored(_) => {}
                Statement::Order(order) => {
                    let r = self.current_ring(at)?;
                    if self.opts.order.is_none() {
                        self.rings[r].ring.order = order.clone();
                    }
                }
                Statement::Ring { name, params, vars, order } => {
                    let order = self.opts.order.clone().unwrap_or_else(|| order.clone());
                    let p: Vec<&str> = params.iter().map(|s| s.value.as_str()).collect();
                    let v: Vec<&str> = vars.iter().map(|s| s.value.as_str()).collect();
                    self.rings.push(NamedRing { name: name.clone(), ring: Ring::new(&p, &v, order) });
                    self.current = Some(self.rings.len() - 1);
                }
                Statement::Poly { name, expr } => {
                    let r = self.current_ring(at)?;
                    let v = self.parse_expr(r, expr)?;
                    self.polys.insert(name.value.clone(), Obj { ring: r, value: v });
                }
                Statement::Module { name, rows } => {
                    let r = self.current_ring(at)?;
                    let mut parsed = Vec::new();
                    for row in rows {
                        parsed.push(row.iter().map(|e| self.parse_expr(r, e)).collect::<Result<Vec<_>, _>>()?);
                    }
                    let ring = &self.rings[r].ring;
                    let m = if parsed.is_empty() {
                        ModMatrix::zeros(0, 0, ring.nvars(), ring.nparams())
                    } else {
                        ModMatrix::from_rows(ring.nvars(), ring.nparams(), parsed).expect("rows checked rectangular")
                    };
                    self.modules.insert(name.value.clone(), Obj { ring: r, value: m });
                }
                Statement::Command { kind, args } => {
                    let echo = st.value.to_string().trim_end_matches(';').to_string();
                    let line = crate::script::line_col(self.src, at).0;
                    let started = std::time::Instant::now();
                    let report = self.command(*kind, args, at).map_err(|e| match e {
                        Failure::Parse(d) => RunError::Parse(d),
                        Failure::Engine(error) => RunError::Engine { command: echo.clone(), line, error },
                    })?;
                    if let Some((ring, items, result)) = report {
                        let r = &self.rings[ring];
                        out.push(CommandReport {
                            command: echo,
                            kind: kind.keyword().to_string(),
                            ring: r.name.clone(),
                            params: r.ring.params.clone(),
                            vars: r.ring.vars.clone(),
                            ordering: r.ring.order.token(),
                            items,
                            result,
                            elapsed_ms: started.elapsed().as_millis(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn current_ring(&self, at: usize) -> Result<usize, RunError> {
        self.current.ok_or_else(|| RunError::Parse(diag(self.src, DiagnosticKind::Syntax, at, "no ring declared yet")))
    }

    fn bindings(&self, ring: usize) -> BTreeMap<String, OpPoly> {
        self.polys.iter().filter(|(_, o)| o.ring == ring).map(|(k, o)| (k.clone(), o.value.clone())).collect()
    }

    fn parse_expr(&self, ring: usize, e: &Spanned<String>) -> Result<OpPoly, RunError> {
        self.rings[ring]
            .ring
            .parse_with(&e.value, &self.bindings(ring))
            .map_err(|x| RunError::Parse(expr_diag(self.src, e.span.start, &x)))
    }

    fn module(&self, name: &Spanned<String>) -> Result<(usize, &ModMatrix), Failure> {
        match self.modules.get(&name.value) {
            Some(o) => Ok((o.ring, &o.value)),
            None => Err(Failure::Parse(diag(self.src, DiagnosticKind::Undeclared, name.span.start, format!("unknown module `{}`", name.value)))),
        }
    }

    fn constraints_for(&self, ring: &Ring) -> Vec<(usize, SignConstraint)> {
        self.opts.constraints.iter().filter_map(|(n, c)| ring.param_index(n).map(|i| (i, *c))).collect()
    }

    fn command(&mut self, kind: CommandKind, args: &CommandArgs, at: usize) -> Result<Option<(usize, Vec<Item>, Value)>, Failure> {
        if kind == CommandKind::Specialize {
            let CommandArgs::Assignments(assigns) = args else { unreachable!("parser builds assignments") };
            let r = self.current_ring(at).map_err(|e| match e {
                RunError::Parse(d) => Failure::Parse(d),
                RunError::Engine { error, .. } => Failure::Engine(error),
            })?;
            let new = self.specialize(r, assigns)?;
            let ring = &self.rings[new].ring;
            let items = vec![Item::lines(vec![ring_decl(&self.rings[new].name, ring)])];
            let result = json!({ "ring": ring_json(&self.rings[new].name, ring) });
            return Ok(Some((new, items, result)));
        }
        if let CommandArgs::Polys(ps) = args {
            let r = self.current_ring(at).map_err(|e| match e {
                RunError::Parse(d) => Failure::Parse(d),
                RunError::Engine { error, .. } => Failure::Engine(error),
            })?;
            let mut polys = Vec::new();
            for p in ps {
                let v = self.parse_expr(r, p).map_err(|e| match e {
                    RunError::Parse(d) => Failure::Parse(d),
                    RunError::Engine { error, .. } => Failure::Engine(error),
                })?;
                let ring = &self.rings[r].ring;
                let c = v.constant_value().filter(|c| c.is_polynomial()).ok_or_else(|| {
                    Failure::Parse(diag(self.src, DiagnosticKind::Syntax, p.span.start, format!("`{}` is not a polynomial in the parameters of `{}`", p.value, self.rings[r].name)))
                })?;
                let _ = ring;
                polys.push(c.numer().clone());
            }
            if self.check_only {
                return Ok(None);
            }
            let ring = self.rings[r].ring.clone();
            let (items, result) = stratify_report(&ring, &polys, &[])?;
            return Ok(Some((r, items, result)));
        }
        let (r, m, second) = match args {
            CommandArgs::Module(name) => {
                let (r, m) = self.module(name)?;
                (r, m.clone(), None)
            }
            CommandArgs::Pair(a, b) => {
                let (r, m) = self.module(a)?;
                let (r2, h) = self.module(b)?;
                if r != r2 {
                    return Err(Failure::Parse(diag(self.src, DiagnosticKind::Syntax, b.span.start, "modules live in different rings")));
                }
                (r, m.clone(), Some(h.clone()))
            }
            _ => unreachable!("handled above"),
        };
        if self.check_only {
            return Ok(None);
        }
        let ring = self.rings[r].ring.clone();
        let o = &ring.order;
        let constraints = self.constraints_for(&ring);
        let (items, result) = match kind {
            CommandKind::Print => (vec![Item::lines(matrix_rows(&ring, &m))], json!({ "matrix": matrix_json(&ring, &m) })),
            CommandKind::Gb => {
                let gb = groebner_basis(&m, o)?;
                (vec![Item::lines(generators(&ring, &gb))], json!({ "generators": columns_json(&ring, &gb) }))
            }
            CommandKind::Syz => {
                let s = syzygies(&m, o)?;
                (vec![Item::lines(generators(&ring, &s))], json!({ "generators": columns_json(&ring, &s) }))
            }
            CommandKind::Trinity => {
                let t = trinity(&m, o)?;
                let items = vec![
                    Item::text("Groebner basis:"),
                    Item::lines(generators(&ring, &t.gb)),
                    Item::text("transformation matrix:"),
                    Item::lines(matrix_entries(&ring, &t.transform)),
                    Item::text("syzygies:"),
                    Item::lines(generators(&ring, &t.syzygies)),
                ];
                let result = json!({
                    "groebner_basis": columns_json(&ring, &t.gb),
                    "transformation": matrix_json(&ring, &t.transform),
                    "syzygies": columns_json(&ring, &t.syzygies),
                });
                (items, result)
            }
            CommandKind::Lift => {
                let h = second.expect("lift has two modules");
                let t = lift(&m, &h, o)?;
                (vec![Item::lines(matrix_entries(&ring, &t))], json!({ "transformation": matrix_json(&ring, &t) }))
            }
            CommandKind::LeftInverse | CommandKind::RightInverse => {
                let inv = if kind == CommandKind::LeftInverse { left_inverse(&m, o)? } else { right_inverse(&m, o)? };
                match inv {
                    Some(l) => (vec![Item::lines(matrix_entries(&ring, &l))], json!({ "exists": true, "inverse": matrix_json(&ring, &l) })),
                    None => (vec![Item::text("no inverse exists")], json!({ "exists": false, "inverse": Value::Null })),
                }
            }
            CommandKind::LeftKernel => {
                let k = left_kernel(&m, o)?;
                (vec![Item::lines(matrix_rows(&ring, &k))], json!({ "matrix": matrix_json(&ring, &k) }))
            }
            CommandKind::RightKernel => {
                let k = right_kernel(&m, o)?;
                (vec![Item::lines(generators(&ring, &k))], json!({ "generators": columns_json(&ring, &k) }))
            }
            CommandKind::Rank => {
                let k = column_rank(&m, o)?;
                (vec![Item::text(k.to_string())], json!({ "rank": k }))
            }
            CommandKind::Dim => {
                let k = system_dimension(&m, o)?;
                (vec![Item::text(k.to_string())], json!({ "dimension": k }))
            }
            CommandKind::Control => {
                let rep = control_analysis_with(&PresentedModule::new(m.clone()), o, self.opts.max_ext)?;
                analysis_items(&ring, &rep, &constraints, true)
            }
            CommandKind::Autonom => {
                let rep = autonomy_analysis_with(&PresentedModule::new(m.clone()), o, self.opts.max_ext)?;
                analysis_items(&ring, &rep, &constraints, false)
            }
            CommandKind::Genericity => {
                let s = obstructions(&m, o)?;
                let s = admissibility_filter(&s, &constraints);
                (obstruction_items(&ring, &s), json!({ "obstructions": obstruction_json(&ring, &s) }))
            }
            CommandKind::Stratify => {
                let s = admissibility_filter(&obstructions(&m, o)?, &constraints);
                stratify_report(&ring, &s.factors, &s.excluded)?
            }
            CommandKind::LwObstruction => {
                let lw = leykin_walther(&m)?;
                let names = &ring.params;
                let items = vec![
                    Item::text("product of parameter leading coefficients:"),
                    Item::text(lw.h.render(names)),
                    Item::text("distinct factors:"),
                    Item::list(lw.factors.iter().map(|f| Item::text(f.render(names))).collect()),
                ];
                let result = json!({
                    "h": lw.h.render(names),
                    "factors": lw.factors.iter().map(|f| f.render(names)).collect::<Vec<_>>(),
                    "annihilating_parameters": lw.annihilating_params.iter().map(|f| f.render(names)).collect::<Vec<_>>(),
                });
                (items, result)
            }
            CommandKind::Verify => verify_report(&ring, &m, self.opts)?,
            CommandKind::Specialize => unreachable!("handled above"),
        };
        Ok(Some((r, items, result)))
    }

    /// Substitutes parameters by rational expressions; names not yet declared become new
    /// parameters. Every object of the ring is mapped into the new ring.
    fn specialize(&mut self, r: usize, assigns: &[(Spanned<String>, Spanned<String>)]) -> Result<usize, Failure> {
        let old = self.rings[r].ring.clone();
        let mut removed = Vec::new();
        for (name, _) in assigns {
            match old.param_index(&name.value) {
                Some(i) if !removed.contains(&i) => removed.push(i),
                Some(_) => return Err(self.parse_fail(name.span.start, format!("`{}` is specialized twice", name.value))),
                None => return Err(self.parse_fail(name.span.start, format!("`{}` is not a parameter", name.value))),
            }
        }
        let mut params: Vec<String> = old.params.iter().enumerate().filter(|(i, _)| !removed.contains(i)).map(|(_, p)| p.clone()).collect();
        for (_, e) in assigns {
            for (id, off) in scan_identifiers(&e.value) {
                if old.vars.contains(&id) {
                    return Err(self.parse_fail(e.span.start + off, format!("a parameter cannot take the operator variable `{id}`")));
                }
                if let Some(i) = old.param_index(&id) {
                    if removed.contains(&i) {
                        return Err(self.parse_fail(e.span.start + off, format!("`{id}` is specialized in the same statement")));
                    }
                    continue;
                }
                if let Some(o) = self.polys.get(&id).filter(|o| o.ring == r) {
                    if !o.value.is_constant() || involves(&o.value, &removed) {
                        return Err(self.parse_fail(
                            e.span.start + off,
                            format!("`{id}` must be free of operator variables and of the parameters being specialized"),
                        ));
                    }
                    continue;
                }
                if !params.contains(&id) {
                    params.push(id);
                }
            }
        }
        let new_ring = Ring::new(&params, &old.vars, old.order.clone());
        let np = new_ring.nparams();
        // bindings free of the specialized parameters carry over unchanged
        let kept: Vec<ParamFraction> = old
            .params
            .iter()
            .map(|name| new_ring.param_index(name).map_or_else(|| ParamFraction::zero(np), |k| ParamFraction::param(np, k)))
            .collect();
        let mut bindings = BTreeMap::new();
        for (name, o) in self.polys.iter().filter(|(_, o)| o.ring == r && o.value.is_constant() && !involves(&o.value, &removed)) {
            bindings.insert(name.clone(), o.value.map_coeffs(np, |c| c.substitute(&kept, np))?);
        }
        let mut images = Vec::with_capacity(old.nparams());
        for (i, name) in old.params.iter().enumerate() {
            match assigns.iter().find(|(n, _)| &n.value == name) {
                Some((_, e)) => {
                    let v = new_ring
                        .parse_with(&e.value, &bindings)
                        .map_err(|x| Failure::Parse(expr_diag(self.src, e.span.start, &x)))?
                        .constant_value()
                        .ok_or_else(|| self.parse_fail(e.span.start, format!("`{}` involves operator variables", e.value)))?;
                    images.push(v);
                }
                None => images.push(kept[i].clone()),
            }
        }
        let id = self.rings.len();
        self.rings.push(NamedRing { name: self.rings[r].name.clone(), ring: new_ring });
        self.current = Some(id);
        for o in self.modules.values_mut().filter(|o| o.ring == r) {
            o.value = substitute_params(&o.value, &images, np)?;
            o.ring = id;
        }
        for o in self.polys.values_mut().filter(|o| o.ring == r) {
            o.value = o.value.map_coeffs(np, |c| c.substitute(&images, np))?;
            o.ring = id;
        }
        Ok(id)
    }

    fn parse_fail(&self, at: usize, msg: String) -> Failure {
        Failure::Parse(diag(self.src, DiagnosticKind::Syntax, at, msg))
    }
}

/// Whether any coefficient of `p` depends on one of the parameters `idx`.
fn involves(p: &OpPoly, idx: &[usize]) -> bool {
    p.terms().iter().any(|(_, c)| {
        let vars: Vec<usize> = c.numer().variables().into_iter().chain(c.denom().variables()).collect();
        vars.iter().any(|v| idx.contains(v))
    })
}

enum Failure {
    Parse(Diagnostic),
    Engine(EngineError),
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        Failure::Engine(e)
    }
}

impl From<RunError> for Failure {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Parse(d) => Failure::Parse(d),
            RunError::Engine { error, .. } => Failure::Engine(error),
        }
    }
}

/// Obstructions of the column span of `m`: the basis is lifted through the generators.
fn obstructions(m: &ModMatrix, o: &ModOrder) -> Result<ObstructionSet, EngineError> {
    let gb = groebner_basis(m, o)?;
    let t = lift(m, &gb, o)?;
    genericity(m, &t, o, &mut DenominatorLog::default())
}

pub fn ring_decl(name: &str, ring: &Ring) -> String {
    let mut coeffs = vec!["0".to_string()];
    coeffs.extend(ring.params.iter().cloned());
    format!("ring {name} = ({}),({}),{};", coeffs.join(","), ring.vars.join(","), ring.order.token())
}

fn ring_json(name: &str, ring: &Ring) -> Value {
    json!({ "name": name, "parameters": ring.params, "variables": ring.vars, "ordering": ring.order.token() })
}

fn render_col(ring: &Ring, c: &ModElement) -> String {
    ring.render_element(c)
}

fn generators(ring: &Ring, m: &ModMatrix) -> Vec<String> {
    if m.ncols() == 0 {
        return vec!["_[1]=0".into()];
    }
    m.columns().iter().enumerate().map(|(k, c)| format!("_[{}]={}", k + 1, render_col(ring, c))).collect()
}

fn matrix_rows(ring: &Ring, m: &ModMatrix) -> Vec<String> {
    if m.nrows() == 0 {
        return vec!["_[1]=0".into()];
    }
    m.render_rows(&ring.vars, &ring.params).into_iter().enumerate().map(|(k, r)| format!("_[{}]={}", k + 1, r)).collect()
}

fn matrix_entries(ring: &Ring, m: &ModMatrix) -> Vec<String> {
    let mut out = Vec::new();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push(format!("_[{},{}]={}", i + 1, j + 1, ring.render(&m.get(i, j))));
        }
    }
    if out.is_empty() {
        out.push("(empty matrix)".into());
    }
    out
}

fn columns_json(ring: &Ring, m: &ModMatrix) -> Value {
    Value::Array(m.columns().iter().map(|c| Value::Array(c.to_dense().iter().map(|p| Value::String(ring.render(p))).collect())).collect())
}

fn matrix_json(ring: &Ring, m: &ModMatrix) -> Value {
    let rows: Vec<Value> = (0..m.nrows()).map(|i| Value::Array(m.row(i).iter().map(|p| Value::String(ring.render(p))).collect())).collect();
    json!({ "rows": m.nrows(), "cols": m.ncols(), "entries": rows })
}

fn obstruction_items(ring: &Ring, s: &ObstructionSet) -> Vec<Item> {
    let mut items: Vec<Item> = s.render_items(&ring.params).into_iter().map(Item::text).collect();
    if items.is_empty() {
        items.push(Item::text("(none)"));
    }
    let mut out = vec![Item::list(items)];
    if !s.excluded.is_empty() {
        out.push(Item::text("excluded by admissibility constraints:"));
        out.push(Item::text(s.excluded.iter().map(|p| p.render(&ring.params)).collect::<Vec<_>>().join(",")));
    }
    out
}

fn obstruction_json(ring: &Ring, s: &ObstructionSet) -> Value {
    json!({
        "factors": s.factors.iter().map(|p| p.render(&ring.params)).collect::<Vec<_>>(),
        "excluded": s.excluded.iter().map(|p| p.render(&ring.params)).collect::<Vec<_>>(),
        "items": s.render_items(&ring.params),
    })
}

fn analysis_items(ring: &Ring, rep: &AnalysisReport, constraints: &[(usize, SignConstraint)], control: bool) -> (Vec<Item>, Value) {
    let mut items = vec![Item::text("number of first nonzero Ext:"), Item::text(rep.first_nonzero_ext.to_string())];
    let mut result = serde_json::Map::new();
    result.insert("first_nonzero_ext".into(), json!(rep.first_nonzero_ext));
    result.insert("verdict".into(), json!(rep.verdict.to_string()));
    result.insert("dimension".into(), json!(rep.dimension));
    match rep.verdict {
        Verdict::Controllable => {
            let q = rep.image_rep.as_ref().expect("controllable report has an image");
            items.push(Item::text(format!("{}, image representation:", rep.verdict)));
            items.push(Item::lines(generators(ring, q)));
            result.insert("image_representation".into(), columns_json(ring, q));
            match &rep.left_inverse {
                Some(l) => {
                    items.push(Item::text("left inverse to image representation:"));
                    items.push(Item::lines(matrix_entries(ring, l)));
                    result.insert("left_inverse".into(), matrix_json(ring, l));
                }
                None => {
                    items.push(Item::text("the image representation has no left inverse"));
                    result.insert("left_inverse".into(), Value::Null);
                }
            }
            items.push(Item::text("dimension of the system:"));
            items.push(Item::text(rep.dimension.to_string()));
            let s = rep.genericity_obstructions.clone().unwrap_or_default();
            let s = admissibility_filter(&s, constraints);
            items.push(Item::text("Parameter constellations which might lead to a non-controllable system:"));
            items.extend(obstruction_items(ring, &s));
            result.insert("obstructions".into(), obstruction_json(ring, &s));
        }
        Verdict::NotControllable => {
            let q = rep.image_rep.as_ref().expect("image of the controllable part");
            items.push(Item::text(format!("{}, image representation for controllable part:", rep.verdict)));
            items.push(Item::lines(generators(ring, q)));
            let k = rep.kernel_rep.as_ref().expect("kernel representation");
            items.push(Item::text("kernel representation for controllable part:"));
            items.push(Item::lines(matrix_rows(ring, k)));
            let u = &rep.obstruction_to_controllability.as_ref().expect("obstruction module").relations;
            // relations shown by their reduced basis, which is independent of the construction
            let u_gb = canonize_columns(&groebner_basis(&u.transpose(), &ring.order).unwrap_or_else(|_| u.transpose()), &ring.order);
            items.push(Item::text("obstruction to controllability"));
            items.push(Item::lines(generators(ring, &u_gb)));
            let ann = rep.torsion_annihilator.as_ref().expect("annihilator");
            items.push(Item::text("annihilator of torsion module (of obstruction to controllability)"));
            items.push(Item::lines(ann.iter().enumerate().map(|(i, p)| format!("_[{}]={}", i + 1, ring.render(p))).collect()));
            items.push(Item::text("dimension of the system:"));
            items.push(Item::text(rep.dimension.to_string()));
            result.insert("image_representation".into(), columns_json(ring, q));
            result.insert("kernel_representation".into(), matrix_json(ring, k));
            result.insert("obstruction_to_controllability".into(), columns_json(ring, &u_gb));
            result.insert("torsion_annihilator".into(), json!(ann.iter().map(|p| ring.render(p)).collect::<Vec<_>>()));
        }
        Verdict::Autonomous | Verdict::NotAutonomous => {
            debug_assert!(!control);
            items.push(Item::text(rep.verdict.to_string()));
            let k = rep.kernel_rep.as_ref().expect("kernel representation");
            items.push(Item::text("kernel representation for controllable part"));
            items.push(Item::lines(matrix_rows(ring, k)));
            let rank = rep.column_rank.unwrap_or(0);
            items.push(Item::text("column rank of the matrix"));
            items.push(Item::text(rank.to_string()));
            items.push(Item::text("dimension of the system:"));
            items.push(Item::text(rep.dimension.to_string()));
            result.insert("kernel_representation".into(), matrix_json(ring, k));
            result.insert("column_rank".into(), json!(rank));
        }
    }
    (items, Value::Object(result))
}

fn stratify_report(ring: &Ring, factors: &[ParamPoly], excluded: &[ParamPoly]) -> Result<(Vec<Item>, Value), EngineError> {
    let names = &ring.params;
    let st: Stratification = stratify_lc(factors, ring.nparams(), &MonoOrder::DegRevLex)?;
    let mut items = vec![
        Item::text("obstruction factors:"),
        Item::text(if st.factors.is_empty() { "(none)".into() } else { st.factors.iter().map(|p| p.render(names)).collect::<Vec<_>>().join(", ") }),
    ];
    if !excluded.is_empty() {
        items.push(Item::text("excluded by admissibility constraints:"));
        items.push(Item::text(excluded.iter().map(|p| p.render(names)).collect::<Vec<_>>().join(", ")));
    }
    items.push(Item::text(format!("sign systems: {}, empty: {}", st.branches.len(), st.branches.iter().filter(|b| b.system.status == StratumStatus::Empty).count())));
    items.push(Item::text("cases:"));
    let cases = st.cases();
    items.push(Item::list(cases.iter().map(|c| Item::text(format!("{}{}", c.render(names), status_suffix(c.status)))).collect()));
    let branches: Vec<Value> = st
        .branches
        .iter()
        .map(|b| {
            json!({
                "vanishing": b.vanishing,
                "status": b.system.status.to_string(),
                "components": b.components.iter().map(|c| json!({
                    "equations": c.equations.iter().map(|p| p.render(names)).collect::<Vec<_>>(),
                    "inequations": c.inequations.iter().map(|p| p.render(names)).collect::<Vec<_>>(),
                    "status": c.status.to_string(),
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    let result = json!({
        "factors": st.factors.iter().map(|p| p.render(names)).collect::<Vec<_>>(),
        "excluded": excluded.iter().map(|p| p.render(names)).collect::<Vec<_>>(),
        "branches": branches,
        "cases": cases.len(),
    });
    Ok((items, result))
}

fn status_suffix(s: StratumStatus) -> &'static str {
    match s {
        StratumStatus::NonEmpty => "",
        StratumStatus::Empty => " (empty)",
        StratumStatus::Unknown => " (unknown: budget exhausted)",
    }
}

/// Random admissible points: the recomputed basis must match the specialized generic one.
/// Points on linear obstruction factors are reported as observations.
fn verify_report(ring: &Ring, m: &ModMatrix, opts: &Options) -> Result<(Vec<Item>, Value), EngineError> {
    let o = &ring.order;
    let gb = groebner_basis(m, o)?;
    let s = obstructions(m, o)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let samples = opts.samples.max(1);
    let mut agree = 0usize;
    let mut tried = 0usize;
    let mut attempts = 0usize;
    while tried < samples && attempts < samples * 50 {
        attempts += 1;
        let point: Vec<BigRational> = (0..ring.nparams()).map(|_| BigRational::from_integer(rng.gen_range(1i64..=17).into())).collect();
        if s.factors.iter().any(|f| num_traits::Zero::is_zero(&f.eval(&point))) {
            continue;
        }
        match specialization_agrees(m, &gb, &point, o) {
            Ok(ok) => {
                tried += 1;
                agree += ok as usize;
            }
            Err(EngineError::VanishingDenominator(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    let mut observed = Vec::new();
    for f in &s.factors {
        let base: Vec<BigRational> = (0..ring.nparams()).map(|_| BigRational::from_integer(rng.gen_range(1i64..=17).into())).collect();
        let outcome = match solve_on_factor(f, &base) {
            None => "no rational point found".to_string(),
            Some(p) => match specialization_differs(m, &gb, &p, o) {
                Ok(true) => "basis changes".into(),
                Ok(false) => "basis unchanged".into(),
                Err(EngineError::VanishingDenominator(_)) => "input undefined at the point".into(),
                Err(e) => return Err(e),
            },
        };
        observed.push((f.render(&ring.params), outcome));
    }
    let items = vec![
        Item::text(format!("generic points agreeing with the generic basis: {agree}/{tried}")),
        Item::text("points on obstruction factors:"),
        Item::list(observed.iter().map(|(f, r)| Item::text(format!("{f}: {r}"))).collect()),
    ];
    let result = json!({
        "seed": opts.seed,
        "generic_points": tried,
        "agreeing": agree,
        "factor_points": observed.iter().map(|(f, r)| json!({ "factor": f, "outcome": r })).collect::<Vec<_>>(),
    });
    Ok((items, result))
}
