//! Problem files: line-oriented text with named `[section]` headers.

use std::collections::BTreeMap;
use std::fmt;

use afcond::arcs::Arc;
use afcond::conormal::SpaceWithFunction;
use afcond::groebner::{Ideal, MonomialOrder};
use afcond::poly::{PolyMap, Polynomial, Rational, VarList};
use afcond::rees::{PresentedModule, ReesSetup};

/// Section names accepted in a problem file.
pub const SECTIONS: &[&str] = &[
    "vars",
    "equations",
    "function",
    "codim",
    "ideal",
    "order",
    "module",
    "rank",
    "fiber-dim",
    "nonfree",
    "assert",
    "arcs",
    "fiber-arcs",
    "point",
    "covector",
    "set",
];

/// Problem-file errors, located by line (1-based) and column when known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProblemError {
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    Missing(&'static str),
    Math(afcond::Error),
}

impl fmt::Display for ProblemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemError::Syntax {
                line,
                column,
                message,
            } => write!(f, "line {line}, column {column}: {message}"),
            ProblemError::Missing(s) => write!(f, "missing section [{s}]"),
            ProblemError::Math(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ProblemError {}

impl From<afcond::Error> for ProblemError {
    fn from(e: afcond::Error) -> Self {
        ProblemError::Math(e)
    }
}

type Result<T> = std::result::Result<T, ProblemError>;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Line {
    number: usize,
    /// Column of the first character of `text` in the source line.
    offset: usize,
    text: String,
}

/// A parsed problem file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProblemFile {
    sections: BTreeMap<String, Vec<Line>>,
}

fn syntax(line: &Line, column: usize, message: impl Into<String>) -> ProblemError {
    ProblemError::Syntax {
        line: line.number,
        column: line.offset + column.max(1) - 1,
        message: message.into(),
    }
}

/// Re-locates a polynomial parse error from a piece of a line starting at
/// byte `start` of the line's text.
fn locate(line: &Line, start: usize, e: afcond::Error) -> ProblemError {
    match e {
        afcond::Error::Parse { column, message } => syntax(line, start + column, message),
        afcond::Error::UndeclaredVariable { name, column } => syntax(
            line,
            start + column,
            format!("undeclared variable `{name}`"),
        ),
        other => syntax(line, start + 1, other.to_string()),
    }
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut sections: BTreeMap<String, Vec<Line>> = BTreeMap::new();
        let mut current: Option<String> = None;
        for (i, raw) in text.lines().enumerate() {
            let number = i + 1;
            let content = raw.split('#').next().unwrap_or("");
            let trimmed = content.trim();
            if trimmed.is_empty() {
                continue;
            }
            let offset = content.len() - content.trim_start().len() + 1;
            let line = Line {
                number,
                offset,
                text: trimmed.to_string(),
            };
            if let Some(rest) = trimmed.strip_prefix('[') {
                let Some(name) = rest.strip_suffix(']') else {
                    return Err(syntax(&line, trimmed.len(), "expected `]`"));
                };
                let name = name.trim().to_ascii_lowercase();
                if !SECTIONS.contains(&name.as_str()) {
                    return Err(syntax(&line, 1, format!("unknown section [{name}]")));
                }
                if sections.contains_key(&name) {
                    return Err(syntax(&line, 1, format!("section [{name}] repeated")));
                }
                sections.insert(name.clone(), Vec::new());
                current = Some(name);
                continue;
            }
            match &current {
                Some(name) => sections.get_mut(name).unwrap().push(line),
                None => return Err(syntax(&line, 0, "content before the first section")),
            }
        }
        Ok(ProblemFile { sections })
    }

    pub fn has(&self, section: &str) -> bool {
        self.sections.contains_key(section)
    }

    fn lines(&self, section: &str) -> &[Line] {
        self.sections.get(section).map(Vec::as_slice).unwrap_or(&[])
    }

    fn single(&self, section: &'static str) -> Result<Option<&Line>> {
        match self.lines(section) {
            [] => Ok(None),
            [l] => Ok(Some(l)),
            [_, extra, ..] => Err(syntax(extra, 1, format!("[{section}] takes one line"))),
        }
    }

    fn integer(&self, section: &'static str) -> Result<Option<usize>> {
        match self.single(section)? {
            None => Ok(None),
            Some(l) => l
                .text
                .parse()
                .map(Some)
                .map_err(|_| syntax(l, 1, "expected a non-negative integer")),
        }
    }

    /// Variables from lines `y: a, b` (parameters) and `z: u, v` (fiber);
    /// a line without a prefix lists fiber variables. Returns the list and
    /// the number of parameters.
    pub fn vars(&self) -> Result<(VarList, usize)> {
        if !self.has("vars") {
            return Err(ProblemError::Missing("vars"));
        }
        let mut params = Vec::new();
        let mut fiber = Vec::new();
        for line in self.lines("vars") {
            let (target, list, start) = match line.text.split_once(':') {
                Some((tag, rest)) => {
                    let start = tag.len() + 1;
                    match tag.trim() {
                        "y" => (&mut params, rest, start),
                        "z" => (&mut fiber, rest, start),
                        other => {
                            return Err(syntax(
                                line,
                                1,
                                format!("unknown block `{other}`, use y or z"),
                            ))
                        }
                    }
                }
                None => (&mut fiber, line.text.as_str(), 0),
            };
            let mut col = start;
            for name in list.split(',') {
                let n = name.trim();
                if n.is_empty() {
                    return Err(syntax(line, col + 1, "empty variable name"));
                }
                if !n
                    .chars()
                    .next()
                    .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                    || !n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                {
                    return Err(syntax(line, col + 1, format!("bad variable name `{n}`")));
                }
                target.push(n.to_string());
                col += name.len() + 1;
            }
        }
        let k = params.len();
        let vars = VarList::new(params.into_iter().chain(fiber))?;
        Ok((vars, k))
    }

    fn polys(&self, section: &str, vars: &VarList) -> Result<Vec<Polynomial>> {
        self.lines(section)
            .iter()
            .map(|l| Polynomial::parse(&l.text, vars).map_err(|e| locate(l, 0, e)))
            .collect()
    }

    pub fn equations(&self, vars: &VarList) -> Result<Vec<Polynomial>> {
        self.polys("equations", vars)
    }

    pub fn function(&self, vars: &VarList) -> Result<Polynomial> {
        let l = self
            .single("function")?
            .ok_or(ProblemError::Missing("function"))?;
        Polynomial::parse(&l.text, vars).map_err(|e| locate(l, 0, e))
    }

    /// `[codim]`, defaulting to the number of equations.
    pub fn codim(&self, vars: &VarList) -> Result<usize> {
        match self.integer("codim")? {
            Some(c) => Ok(c),
            None => Ok(self.equations(vars)?.len()),
        }
    }

    pub fn space(&self) -> Result<SpaceWithFunction> {
        let (vars, k) = self.vars()?;
        let g = PolyMap::new(vars.clone(), self.equations(&vars)?)?;
        let f = self.function(&vars)?;
        let c = self.codim(&vars)?;
        Ok(SpaceWithFunction::new(vars, k, g, f, c)?)
    }

    pub fn order(&self) -> Result<MonomialOrder> {
        match self.single("order")? {
            None => Ok(MonomialOrder::DegRevLex),
            Some(l) => match l.text.to_ascii_lowercase().as_str() {
                "lex" => Ok(MonomialOrder::Lex),
                "degrevlex" | "grevlex" => Ok(MonomialOrder::DegRevLex),
                other => Err(syntax(l, 1, format!("unknown order `{other}`"))),
            },
        }
    }

    /// `[ideal]`, or the equations when absent.
    pub fn ideal(&self) -> Result<Ideal> {
        let (vars, _) = self.vars()?;
        let gens = if self.has("ideal") {
            self.polys("ideal", &vars)?
        } else {
            self.equations(&vars)?
        };
        Ok(Ideal::new(&vars, gens)?.with_order(self.order()?))
    }

    /// Comma-separated rationals on one line.
    fn rationals(&self, section: &'static str) -> Result<Option<Vec<Rational>>> {
        let Some(l) = self.single(section)? else {
            return Ok(None);
        };
        let empty = VarList::of(&[]);
        let mut out = Vec::new();
        let mut col = 0;
        for part in l.text.split(',') {
            let lead = part.len() - part.trim_start().len();
            let p = Polynomial::parse(part.trim(), &empty).map_err(|e| locate(l, col + lead, e))?;
            let v = p
                .constant_value()
                .ok_or_else(|| syntax(l, col + 1, "expected a rational number"))?;
            out.push(v);
            col += part.len() + 1;
        }
        Ok(Some(out))
    }

    pub fn point(&self) -> Result<Option<Vec<Rational>>> {
        self.rationals("point")
    }

    pub fn covector(&self) -> Result<Vec<Rational>> {
        self.rationals("covector")?
            .ok_or(ProblemError::Missing("covector"))
    }

    /// `[set]` generators over the declared variables.
    pub fn set(&self) -> Result<Ideal> {
        let (vars, _) = self.vars()?;
        Ok(Ideal::new(&vars, self.polys("set", &vars)?)?)
    }

    pub fn assertions(&self) -> Vec<String> {
        self.lines("assert")
            .iter()
            .map(|l| l.text.to_ascii_lowercase())
            .collect()
    }

    /// `[module]`: the keyword `jacobian` for `JM(X)`, or one generator
    /// column per line with comma-separated entries.
    pub fn module(&self, vars: &VarList) -> Result<PresentedModule> {
        let lines = self.lines("module");
        if lines.is_empty() {
            return Err(ProblemError::Missing("module"));
        }
        if lines.len() == 1 && lines[0].text.eq_ignore_ascii_case("jacobian") {
            let g = PolyMap::new(vars.clone(), self.equations(vars)?)?;
            let names: Vec<&str> = vars.names().iter().map(String::as_str).collect();
            return Ok(PresentedModule::jacobian_module(&g, &names)?);
        }
        let mut columns = Vec::new();
        let mut rank = None;
        for l in lines {
            let mut col = Vec::new();
            let mut at = 0;
            for part in l.text.split(',') {
                let lead = part.len() - part.trim_start().len();
                col.push(
                    Polynomial::parse(part.trim(), vars).map_err(|e| locate(l, at + lead, e))?,
                );
                at += part.len() + 1;
            }
            match rank {
                None => rank = Some(col.len()),
                Some(r) if r != col.len() => {
                    return Err(syntax(
                        l,
                        1,
                        format!("expected {r} entries, found {}", col.len()),
                    ))
                }
                _ => {}
            }
            columns.push(col);
        }
        Ok(PresentedModule::new(vars, rank.unwrap_or(0), columns)?)
    }

    pub fn rees_setup(&self) -> Result<ReesSetup> {
        let (vars, k) = self.vars()?;
        let module = self.module(&vars)?;
        let d = self
            .integer("fiber-dim")?
            .ok_or(ProblemError::Missing("fiber-dim"))?;
        let e = self.integer("rank")?.ok_or(ProblemError::Missing("rank"))?;
        let mut r = ReesSetup::new(&vars, k, self.equations(&vars)?, module, d, e)?
            .with_direct_summand(self.assertions().iter().any(|a| a == "direct-summand"));
        if self.has("nonfree") {
            r = r.with_nonfree_locus(self.polys("nonfree", &vars)?)?;
        }
        Ok(r)
    }

    fn arcs_in(&self, section: &str, vars: &VarList, precision: usize) -> Result<Vec<Arc>> {
        self.lines(section)
            .iter()
            .map(|l| Arc::parse(vars, &l.text, precision).map_err(|e| locate(l, 0, e)))
            .collect()
    }

    /// `[arcs]`: arcs on `X`, one per line as `v = t^2; w = t^3`.
    pub fn arcs(&self, vars: &VarList, precision: usize) -> Result<Vec<Arc>> {
        self.arcs_in("arcs", vars, precision)
    }

    /// `[fiber-arcs]`: arcs on `X_0` in the fiber variables.
    pub fn fiber_arcs(&self, fiber: &VarList, precision: usize) -> Result<Vec<Arc>> {
        self.arcs_in("fiber-arcs", fiber, precision)
    }
}
