//! Session scripts: declarations followed by commands, one statement per
//! line. A statement continues onto the next line while a bracket is open.
//! `#` starts a comment.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::expr::{parse_field_elem, parse_with, ParseError};
use crate::poly::Vars;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ScriptError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: name error: {msg}")]
    Name { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: arity error: {msg}")]
    Arity { line: usize, col: usize, msg: String },
}

impl ScriptError {
    pub fn line(&self) -> usize {
        match self {
            ScriptError::Syntax { line, .. } | ScriptError::Name { line, .. } | ScriptError::Arity { line, .. } => *line,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FieldDecl {
    pub gens: Vec<String>,
    pub sigma: Vec<(String, String)>,
    pub inv: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Command {
    pub name: String,
    pub args: Vec<String>,
    pub flags: Vec<(String, Option<String>)>,
}

impl Command {
    pub fn flag(&self, name: &str) -> Option<&str> {
        self.flags.iter().find(|(k, _)| k == name).and_then(|(_, v)| v.as_deref())
    }

    pub fn has_flag(&self, name: &str) -> bool {
        self.flags.iter().any(|(k, _)| k == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    Field(FieldDecl),
    Variety { name: String, ambient: Vec<String>, ideal: Vec<String> },
    Map { name: String, src: String, dst: String, components: Vec<String> },
    SigmaVariety { name: String, variety: String, map: String },
    Trivialization { name: String, entries: Vec<(String, String)> },
    Point { name: String, coords: Vec<String> },
    Command(Command),
}

/// A parsed and name-checked script.
#[derive(Clone, Debug)]
pub struct Script {
    pub stmts: Vec<Stmt>,
    /// Source line of each statement.
    pub lines: Vec<usize>,
}

impl Script {
    pub fn field(&self) -> FieldDecl {
        self.stmts
            .iter()
            .find_map(|s| if let Stmt::Field(f) = s { Some(f.clone()) } else { None })
            .unwrap_or_default()
    }

    pub fn commands(&self) -> impl Iterator<Item = (usize, &Command)> {
        self.stmts.iter().zip(&self.lines).filter_map(|(s, l)| if let Stmt::Command(c) = s { Some((*l, c)) } else { None })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArgKind {
    /// A σ-variety name, or a variety followed by a map.
    Sigma,
    Map,
    Variety,
    Triv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlagKind {
    Int,
    Switch,
    Expr,
    Point,
}

pub struct CommandSpec {
    pub name: &'static str,
    pub args: &'static [ArgKind],
    pub flags: &'static [(&'static str, FlagKind)],
}

use ArgKind::*;
use FlagKind::*;

pub const COMMANDS: &[CommandSpec] = &[
    CommandSpec { name: "check-equivariance", args: &[Map, Sigma, Sigma], flags: &[] },
    CommandSpec { name: "check-invariant-subvariety", args: &[Variety, Sigma], flags: &[] },
    CommandSpec { name: "graph", args: &[Map], flags: &[] },
    CommandSpec { name: "prolong", args: &[Sigma], flags: &[("order", Int)] },
    CommandSpec { name: "canonical-base", args: &[Sigma], flags: &[] },
    CommandSpec { name: "invariants", args: &[Sigma], flags: &[("degree", Int), ("rational", Switch), ("cofactor", Int)] },
    CommandSpec { name: "darboux", args: &[Sigma], flags: &[("degree", Int), ("cofactor", Int)] },
    CommandSpec { name: "orthogonality-profile", args: &[Sigma], flags: &[("degree", Int), ("max", Int)] },
    CommandSpec { name: "verify-trivialization", args: &[Triv], flags: &[] },
    CommandSpec { name: "binding-group", args: &[Triv], flags: &[("lambda-degree", Int), ("lambda", Expr)] },
    CommandSpec { name: "verify-intertwining", args: &[Triv], flags: &[] },
    CommandSpec {
        name: "sharp-solve",
        args: &[Triv],
        flags: &[("degree", Int), ("lambda-degree", Int), ("lambda", Expr), ("point", Point)],
    },
    CommandSpec { name: "translational-witness", args: &[Triv], flags: &[("lambda-degree", Int)] },
    CommandSpec { name: "orbit-density", args: &[Sigma], flags: &[("point", Point), ("degree", Int), ("iters", Int)] },
    CommandSpec { name: "dme", args: &[Sigma], flags: &[("degree", Int), ("cofactor", Int), ("points", Int)] },
    CommandSpec { name: "power-bound", args: &[Sigma], flags: &[("degree", Int)] },
];

pub fn command_spec(name: &str) -> Option<&'static CommandSpec> {
    COMMANDS.iter().find(|c| c.name == name)
}

/// A logical line with the source position of every character.
struct Logical {
    chars: Vec<(char, usize, usize)>,
    line: usize,
}

fn logical_lines(text: &str) -> Result<Vec<Logical>, ScriptError> {
    let mut out = Vec::new();
    let mut cur: Vec<(char, usize, usize)> = Vec::new();
    let mut start = 1;
    let mut depth: i64 = 0;
    let mut open_at = (1, 1);
    for (li, raw) in text.lines().enumerate() {
        let line = li + 1;
        if cur.is_empty() {
            start = line;
        }
        let body = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        for (ci, ch) in body.chars().enumerate() {
            match ch {
                '(' | '{' => {
                    if depth == 0 {
                        open_at = (line, ci + 1);
                    }
                    depth += 1
                }
                ')' | '}' => depth -= 1,
                _ => {}
            }
            if depth < 0 {
                return Err(ScriptError::Syntax { line, col: ci + 1, msg: format!("unmatched `{ch}`") });
            }
            cur.push((ch, line, ci + 1));
        }
        if depth == 0 {
            if cur.iter().any(|c| !c.0.is_whitespace()) {
                out.push(Logical { chars: std::mem::take(&mut cur), line: start });
            } else {
                cur.clear();
            }
        } else {
            cur.push((' ', line, body.chars().count() + 1));
        }
    }
    if depth > 0 {
        return Err(ScriptError::Syntax { line: open_at.0, col: open_at.1, msg: "unclosed bracket".into() });
    }
    Ok(out)
}

struct Cursor<'a> {
    l: &'a Logical,
    at: usize,
}

impl<'a> Cursor<'a> {
    fn pos(&self, i: usize) -> (usize, usize) {
        match self.l.chars.get(i) {
            Some(&(_, line, col)) => (line, col),
            None => self.l.chars.last().map_or((self.l.line, 1), |&(_, line, col)| (line, col + 1)),
        }
    }

    fn syntax<T>(&self, i: usize, msg: impl Into<String>) -> Result<T, ScriptError> {
        let (line, col) = self.pos(i);
        Err(ScriptError::Syntax { line, col, msg: msg.into() })
    }

    fn name_err<T>(&self, i: usize, msg: impl Into<String>) -> Result<T, ScriptError> {
        let (line, col) = self.pos(i);
        Err(ScriptError::Name { line, col, msg: msg.into() })
    }

    fn arity<T>(&self, i: usize, msg: impl Into<String>) -> Result<T, ScriptError> {
        let (line, col) = self.pos(i);
        Err(ScriptError::Arity { line, col, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.at < self.l.chars.len() && self.l.chars[self.at].0.is_whitespace() {
            self.at += 1;
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.at >= self.l.chars.len()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.l.chars.get(self.at).map(|c| c.0)
    }

    fn ident(&mut self) -> Result<(String, usize), ScriptError> {
        self.skip_ws();
        let start = self.at;
        while self.at < self.l.chars.len() {
            let c = self.l.chars[self.at].0;
            let ok = if self.at == start { c.is_alphabetic() || c == '_' } else { c.is_alphanumeric() || c == '_' || c == '\'' };
            if !ok {
                break;
            }
            self.at += 1;
        }
        if self.at == start {
            return self.syntax(start, "expected a name");
        }
        Ok((self.slice(start, self.at), start))
    }

    fn word(&mut self, w: &str) -> Result<(), ScriptError> {
        let here = {
            self.skip_ws();
            self.at
        };
        let (got, _) = self.ident().or_else(|_| self.syntax(here, format!("expected `{w}`")))?;
        if got != w {
            return self.syntax(here, format!("expected `{w}`, found `{got}`"));
        }
        Ok(())
    }

    fn symbol(&mut self, s: &str) -> Result<(), ScriptError> {
        self.skip_ws();
        let n = s.chars().count();
        if self.slice(self.at, (self.at + n).min(self.l.chars.len())) == s {
            self.at += n;
            Ok(())
        } else {
            self.syntax(self.at, format!("expected `{s}`"))
        }
    }

    fn slice(&self, a: usize, b: usize) -> String {
        self.l.chars[a..b].iter().map(|c| c.0).collect()
    }

    /// Text up to a top-level character in `stops` (not consumed).
    fn until(&mut self, stops: &[char]) -> (String, usize) {
        self.skip_ws();
        let start = self.at;
        let mut depth = 0i64;
        while self.at < self.l.chars.len() {
            let c = self.l.chars[self.at].0;
            if depth == 0 && stops.contains(&c) {
                break;
            }
            match c {
                '(' | '{' => depth += 1,
                ')' | '}' => depth -= 1,
                _ => {}
            }
            self.at += 1;
        }
        (self.slice(start, self.at).trim_end().to_string(), start)
    }

    /// Items of a bracketed list `open a sep b sep … close`.
    fn list(&mut self, open: char, sep: char, close: char) -> Result<Vec<(String, usize)>, ScriptError> {
        self.symbol(&open.to_string())?;
        let mut out = Vec::new();
        loop {
            if self.peek() == Some(close) {
                self.at += 1;
                return Ok(out);
            }
            let (item, at) = self.until(&[sep, close]);
            if !item.is_empty() {
                out.push((item, at));
            } else if self.peek() == Some(sep) {
                return self.syntax(at, "empty item");
            }
            match self.peek() {
                Some(c) if c == sep => self.at += 1,
                Some(c) if c == close => {}
                _ => return self.syntax(self.at, format!("expected `{sep}` or `{close}`")),
            }
        }
    }
}

/// What a declared name refers to.
#[derive(Clone, Debug)]
enum Decl {
    Variety(Vec<String>),
    Map { src: String, dst: String },
    Sigma,
    Triv,
    Point,
}

struct Checker {
    gens: Vec<String>,
    names: HashMap<String, Decl>,
    field_seen: bool,
    any_seen: bool,
}

fn expr_error(c: &Cursor, start: usize, text: &str, e: ParseError) -> ScriptError {
    // an error at the end of input is reported on the last token
    let offset = if e.pos >= text.trim_end().len() {
        text.trim_end().chars().count().saturating_sub(1)
    } else {
        text[..e.pos].chars().count()
    };
    let (line, col) = c.pos(start + offset);
    ScriptError::Syntax { line, col, msg: e.msg }
}

fn ident_list(c: &mut Cursor) -> Result<Vec<(String, usize)>, ScriptError> {
    let mut out = vec![c.ident()?];
    loop {
        if c.peek() == Some(',') {
            c.at += 1;
            out.push(c.ident()?);
        } else {
            break;
        }
    }
    Ok(out)
}

impl Checker {
    fn declare(&mut self, c: &Cursor, name: &str, at: usize, d: Decl) -> Result<(), ScriptError> {
        if self.names.contains_key(name) || self.gens.iter().any(|g| g == name) {
            return c.name_err(at, format!("`{name}` is already declared"));
        }
        self.names.insert(name.to_string(), d);
        Ok(())
    }

    fn variety<'n>(&'n self, c: &Cursor, name: &str, at: usize) -> Result<&'n [String], ScriptError> {
        match self.names.get(name) {
            Some(Decl::Variety(v)) => Ok(v),
            Some(_) => c.name_err(at, format!("`{name}` is not a variety")),
            None => c.name_err(at, format!("unknown variety `{name}`")),
        }
    }

    fn statement(&mut self, l: &Logical) -> Result<Stmt, ScriptError> {
        let mut c = Cursor { l, at: 0 };
        let (kw, kw_at) = {
            c.skip_ws();
            let start = c.at;
            while c.at < l.chars.len() && !l.chars[c.at].0.is_whitespace() {
                c.at += 1;
            }
            (c.slice(start, c.at), start)
        };
        let stmt = match kw.as_str() {
            "field" => self.field(&mut c, kw_at)?,
            "variety" => self.variety_decl(&mut c)?,
            "map" => self.map_decl(&mut c)?,
            "sigmavariety" => self.sigma_decl(&mut c)?,
            "trivialization" => self.triv_decl(&mut c)?,
            "point" => self.point_decl(&mut c)?,
            _ => {
                if command_spec(&kw).is_none() {
                    if kw.chars().all(|ch| ch.is_alphanumeric() || ch == '-' || ch == '_') {
                        return c.name_err(kw_at, format!("unknown command `{kw}`"));
                    }
                    return c.syntax(kw_at, format!("unexpected `{kw}`"));
                }
                self.command(&mut c, kw, kw_at)?
            }
        };
        if !c.at_end() {
            return c.syntax(c.at, "unexpected trailing input");
        }
        if !matches!(stmt, Stmt::Field(_)) {
            self.any_seen = true;
        }
        Ok(stmt)
    }

    fn field(&mut self, c: &mut Cursor, kw_at: usize) -> Result<Stmt, ScriptError> {
        if self.field_seen {
            return c.name_err(kw_at, "the field is already declared");
        }
        if self.any_seen {
            return c.syntax(kw_at, "the field must be declared first");
        }
        self.field_seen = true;
        let (q, q_at) = c.ident()?;
        if q != "Q" {
            return c.syntax(q_at, "expected `Q`");
        }
        let mut decl = FieldDecl::default();
        if c.peek() == Some('(') {
            for (g, at) in c.list('(', ',', ')')? {
                let ok = g.chars().next().is_some_and(|ch| ch.is_alphabetic() || ch == '_')
                    && g.chars().all(|ch| ch.is_alphanumeric() || ch == '_' || ch == '\'');
                if !ok {
                    return c.syntax(at, format!("`{g}` is not a generator name"));
                }
                if decl.gens.contains(&g) {
                    return c.name_err(at, format!("generator `{g}` repeated"));
                }
                decl.gens.push(g);
            }
        }
        self.gens = decl.gens.clone();
        if decl.gens.is_empty() {
            return Ok(Stmt::Field(decl));
        }
        c.word("sigma")?;
        decl.sigma = self.substitutions(c, Some("inv"))?;
        c.word("inv")?;
        decl.inv = self.substitutions(c, None)?;
        Ok(Stmt::Field(decl))
    }

    fn substitutions(&self, c: &mut Cursor, stop: Option<&str>) -> Result<Vec<(String, String)>, ScriptError> {
        let mut out: Vec<(String, String)> = Vec::new();
        let start = c.at;
        loop {
            let (g, g_at) = c.ident()?;
            if !self.gens.contains(&g) {
                return c.name_err(g_at, format!("`{g}` is not a generator"));
            }
            if out.iter().any(|(k, _)| *k == g) {
                return c.name_err(g_at, format!("generator `{g}` assigned twice"));
            }
            c.symbol("->")?;
            // the expression ends at a top-level comma or the stop word
            c.skip_ws();
            let e_start = c.at;
            let mut depth = 0i64;
            let mut end = c.at;
            while end < c.l.chars.len() {
                let ch = c.l.chars[end].0;
                if depth == 0 && ch == ',' {
                    break;
                }
                if let Some(w) = stop {
                    if depth == 0 && c.slice(end, (end + w.len()).min(c.l.chars.len())) == w {
                        let before = end == 0 || c.l.chars[end - 1].0.is_whitespace();
                        let after = c.l.chars.get(end + w.len()).is_none_or(|x| x.0.is_whitespace());
                        if before && after {
                            break;
                        }
                    }
                }
                match ch {
                    '(' => depth += 1,
                    ')' => depth -= 1,
                    _ => {}
                }
                end += 1;
            }
            let text = c.slice(e_start, end).trim_end().to_string();
            c.at = end;
            if text.is_empty() {
                return c.syntax(e_start, "expected an expression");
            }
            if let Err(e) = parse_field_elem(&text, &self.gens) {
                return Err(expr_error(c, e_start, &text, e));
            }
            out.push((g, text));
            if c.peek() == Some(',') {
                c.at += 1;
                continue;
            }
            break;
        }
        if out.len() != self.gens.len() {
            return c.arity(start, format!("{} substitutions for {} generators", out.len(), self.gens.len()));
        }
        Ok(out)
    }

    fn variety_decl(&mut self, c: &mut Cursor) -> Result<Stmt, ScriptError> {
        let (name, at) = c.ident()?;
        c.word("ambient")?;
        let amb = ident_list(c)?;
        let mut ambient: Vec<String> = Vec::new();
        for (v, v_at) in amb {
            if ambient.contains(&v) || self.gens.contains(&v) {
                return c.name_err(v_at, format!("variable `{v}` clashes"));
            }
            ambient.push(v);
        }
        let mut ideal = Vec::new();
        if !c.at_end() {
            c.word("ideal")?;
            let vars = Vars::new(&ambient);
            for (p, p_at) in c.list('{', ';', '}')? {
                match parse_with(&p, &vars, &self.gens) {
                    Ok(r) if r.is_polynomial() => ideal.push(p),
                    Ok(_) => return c.syntax(p_at, "expected a polynomial"),
                    Err(e) => return Err(expr_error(c, p_at, &p, e)),
                }
            }
        }
        self.declare(c, &name, at, Decl::Variety(ambient.clone()))?;
        Ok(Stmt::Variety { name, ambient, ideal })
    }

    fn map_decl(&mut self, c: &mut Cursor) -> Result<Stmt, ScriptError> {
        let (name, at) = c.ident()?;
        c.symbol(":")?;
        let (src, src_at) = c.ident()?;
        c.symbol("->")?;
        let (dst, dst_at) = c.ident()?;
        c.symbol(":")?;
        let sv = self.variety(c, &src, src_at)?.to_vec();
        let dv = self.variety(c, &dst, dst_at)?.to_vec();
        c.skip_ws();
        let rhs_at = c.at;
        let items: Vec<(String, usize)> = if c.peek() == Some('(') {
            let save = c.at;
            let items = c.list('(', ',', ')')?;
            if c.at_end() {
                items
            } else {
                // a parenthesized expression followed by more terms
                c.at = save;
                let (e, e_at) = c.until(&[]);
                vec![(e, e_at)]
            }
        } else {
            let (e, e_at) = c.until(&[]);
            if e.is_empty() {
                return c.syntax(e_at, "expected an expression");
            }
            vec![(e, e_at)]
        };
        if items.len() != dv.len() {
            return c.arity(rhs_at, format!("{} components for a target with {} coordinates", items.len(), dv.len()));
        }
        let vars = Vars::new(&sv);
        for (e, e_at) in &items {
            if let Err(err) = parse_with(e, &vars, &self.gens) {
                return Err(expr_error(c, *e_at, e, err));
            }
        }
        self.declare(c, &name, at, Decl::Map { src: src.clone(), dst: dst.clone() })?;
        Ok(Stmt::Map { name, src, dst, components: items.into_iter().map(|x| x.0).collect() })
    }

    fn sigma_decl(&mut self, c: &mut Cursor) -> Result<Stmt, ScriptError> {
        let (name, at) = c.ident()?;
        c.symbol("=")?;
        c.symbol("(")?;
        let (v, v_at) = c.ident()?;
        c.symbol(",")?;
        let (m, m_at) = c.ident()?;
        c.symbol(")")?;
        self.variety(c, &v, v_at)?;
        self.sigma_pair(c, &v, &m, m_at)?;
        self.declare(c, &name, at, Decl::Sigma)?;
        Ok(Stmt::SigmaVariety { name, variety: v, map: m })
    }

    fn sigma_pair(&self, c: &Cursor, v: &str, m: &str, m_at: usize) -> Result<(), ScriptError> {
        match self.names.get(m) {
            Some(Decl::Map { src, dst }) if src == v && dst == v => Ok(()),
            Some(Decl::Map { src, dst }) => c.name_err(m_at, format!("`{m}` goes {src} -> {dst}, expected {v} -> {v}")),
            Some(_) => c.name_err(m_at, format!("`{m}` is not a map")),
            None => c.name_err(m_at, format!("unknown map `{m}`")),
        }
    }

    fn triv_decl(&mut self, c: &mut Cursor) -> Result<Stmt, ScriptError> {
        let (name, at) = c.ident()?;
        let list_at = {
            c.skip_ws();
            c.at
        };
        let mut entries: Vec<(String, String)> = Vec::new();
        for (item, i_at) in c.list('{', ';', '}')? {
            let Some((k, v)) = item.split_once('=') else {
                return c.syntax(i_at, "expected `key = name`");
            };
            let (k, v) = (k.trim().to_string(), v.trim().to_string());
            if !["V", "Z", "Y", "g", "f"].contains(&k.as_str()) {
                return c.syntax(i_at, format!("unknown key `{k}`"));
            }
            if entries.iter().any(|(x, _)| *x == k) {
                return c.syntax(i_at, format!("key `{k}` repeated"));
            }
            let ok = match (k.as_str(), self.names.get(&v)) {
                ("V" | "Z", Some(Decl::Sigma)) => true,
                ("Y", Some(Decl::Variety(_))) => true,
                ("g" | "f", Some(Decl::Map { .. })) => true,
                (_, None) => return c.name_err(i_at, format!("unknown name `{v}`")),
                _ => false,
            };
            if !ok {
                return c.name_err(i_at, format!("`{v}` has the wrong kind for `{k}`"));
            }
            entries.push((k, v));
        }
        for k in ["V", "Z", "Y", "g", "f"] {
            if !entries.iter().any(|(x, _)| x == k) {
                return c.arity(list_at, format!("missing key `{k}`"));
            }
        }
        self.declare(c, &name, at, Decl::Triv)?;
        Ok(Stmt::Trivialization { name, entries })
    }

    fn point_decl(&mut self, c: &mut Cursor) -> Result<Stmt, ScriptError> {
        let (name, at) = c.ident()?;
        c.symbol("=")?;
        let coords = self.point_value(c)?;
        self.declare(c, &name, at, Decl::Point)?;
        Ok(Stmt::Point { name, coords })
    }

    fn point_value(&self, c: &mut Cursor) -> Result<Vec<String>, ScriptError> {
        let items = if c.peek() == Some('(') {
            c.list('(', ',', ')')?
        } else {
            let (e, e_at) = c.until(&[]);
            vec![(e, e_at)]
        };
        for (e, e_at) in &items {
            if let Err(err) = parse_field_elem(e, &self.gens) {
                return Err(expr_error(c, *e_at, e, err));
            }
        }
        Ok(items.into_iter().map(|x| x.0).collect())
    }

    fn command(&mut self, c: &mut Cursor, name: String, at: usize) -> Result<Stmt, ScriptError> {
        let spec = command_spec(&name).expect("checked");
        let mut tokens: Vec<(String, usize)> = Vec::new();
        while !c.at_end() {
            let (t, t_at) = if c.peek() == Some('"') {
                let start = c.at;
                c.at += 1;
                let s = c.at;
                while c.at < c.l.chars.len() && c.l.chars[c.at].0 != '"' {
                    c.at += 1;
                }
                if c.at >= c.l.chars.len() {
                    return c.syntax(start, "unterminated quote");
                }
                let t = c.slice(s, c.at);
                c.at += 1;
                let _ = start;
                (t, s)
            } else {
                let start = c.at;
                let mut depth = 0i64;
                while c.at < c.l.chars.len() {
                    let ch = c.l.chars[c.at].0;
                    if depth == 0 && ch.is_whitespace() {
                        break;
                    }
                    match ch {
                        '(' => depth += 1,
                        ')' => depth -= 1,
                        _ => {}
                    }
                    c.at += 1;
                }
                (c.slice(start, c.at), start)
            };
            tokens.push((t, t_at));
        }
        let mut args: Vec<(String, usize)> = Vec::new();
        let mut flags: Vec<(String, Option<String>)> = Vec::new();
        let mut i = 0;
        while i < tokens.len() {
            let (t, t_at) = &tokens[i];
            if let Some(f) = t.strip_prefix("--") {
                let Some(&(_, kind)) = spec.flags.iter().find(|(n, _)| *n == f) else {
                    return c.syntax(*t_at, format!("`{name}` has no flag `--{f}`"));
                };
                if flags.iter().any(|(k, _)| k == f) && kind != Expr {
                    return c.syntax(*t_at, format!("flag `--{f}` repeated"));
                }
                if kind == Switch {
                    flags.push((f.to_string(), None));
                    i += 1;
                    continue;
                }
                let Some((v, v_at)) = tokens.get(i + 1) else {
                    return c.arity(*t_at, format!("flag `--{f}` needs a value"));
                };
                match kind {
                    Int => {
                        if v.parse::<u32>().is_err() {
                            return c.syntax(*v_at, format!("`--{f}` expects a non-negative integer"));
                        }
                    }
                    Point => {
                        if !matches!(self.names.get(v.as_str()), Some(Decl::Point)) {
                            let n = v.chars().count();
                            let inner = Logical { chars: c.l.chars[*v_at..*v_at + n].to_vec(), line: c.l.line };
                            self.point_value(&mut Cursor { l: &inner, at: 0 })?;
                        }
                    }
                    _ => {}
                }
                flags.push((f.to_string(), Some(v.clone())));
                i += 2;
            } else {
                args.push((t.clone(), *t_at));
                i += 1;
            }
        }
        let mut k = 0;
        for kind in spec.args {
            let Some((a, a_at)) = args.get(k) else {
                return c.arity(at, format!("`{name}` expects {} argument(s)", spec.args.len()));
            };
            match kind {
                Sigma => match self.names.get(a.as_str()) {
                    Some(Decl::Sigma) => k += 1,
                    Some(Decl::Variety(_)) => {
                        let Some((m, m_at)) = args.get(k + 1) else {
                            return c.arity(*a_at, "a variety must be followed by its map");
                        };
                        self.sigma_pair(c, a, m, *m_at)?;
                        k += 2;
                    }
                    Some(_) => return c.name_err(*a_at, format!("`{a}` is not a σ-variety")),
                    None => return c.name_err(*a_at, format!("unknown name `{a}`")),
                },
                Map => match self.names.get(a.as_str()) {
                    Some(Decl::Map { .. }) => k += 1,
                    Some(_) => return c.name_err(*a_at, format!("`{a}` is not a map")),
                    None => return c.name_err(*a_at, format!("unknown map `{a}`")),
                },
                Variety => {
                    self.variety(c, a, *a_at)?;
                    k += 1;
                }
                Triv => match self.names.get(a.as_str()) {
                    Some(Decl::Triv) => k += 1,
                    Some(_) => return c.name_err(*a_at, format!("`{a}` is not a trivialization")),
                    None => return c.name_err(*a_at, format!("unknown trivialization `{a}`")),
                },
            }
        }
        if let Some((_, extra_at)) = args.get(k) {
            return c.arity(*extra_at, format!("`{name}` expects {} argument(s)", spec.args.len()));
        }
        Ok(Stmt::Command(Command { name, args: args.into_iter().map(|a| a.0).collect(), flags }))
    }
}

/// Parses a session script and checks every reference.
pub fn parse_session(text: &str) -> Result<Script, ScriptError> {
    let mut checker = Checker { gens: Vec::new(), names: HashMap::new(), field_seen: false, any_seen: false };
    let mut stmts = Vec::new();
    let mut lines = Vec::new();
    for l in logical_lines(text)? {
        stmts.push(checker.statement(&l)?);
        lines.push(l.line);
    }
    Ok(Script { stmts, lines })
}

impl fmt::Display for FieldDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gens.is_empty() {
            return write!(f, "field Q");
        }
        let subs = |v: &[(String, String)]| v.iter().map(|(g, e)| format!("{g} -> {e}")).collect::<Vec<_>>().join(", ");
        write!(f, "field Q({}) sigma {} inv {}", self.gens.join(", "), subs(&self.sigma), subs(&self.inv))
    }
}

fn quote(v: &str) -> String {
    if v.chars().any(char::is_whitespace) {
        format!("\"{v}\"")
    } else {
        v.to_string()
    }
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Field(d) => write!(f, "{d}"),
            Stmt::Variety { name, ambient, ideal } => {
                write!(f, "variety {name} ambient {}", ambient.join(", "))?;
                if !ideal.is_empty() {
                    write!(f, " ideal {{ {} }}", ideal.join("; "))?;
                }
                Ok(())
            }
            Stmt::Map { name, src, dst, components } => {
                if components.len() == 1 {
                    write!(f, "map {name} : {src} -> {dst} : {}", components[0])
                } else {
                    write!(f, "map {name} : {src} -> {dst} : ({})", components.join(", "))
                }
            }
            Stmt::SigmaVariety { name, variety, map } => write!(f, "sigmavariety {name} = ({variety}, {map})"),
            Stmt::Trivialization { name, entries } => {
                let e: Vec<String> = entries.iter().map(|(k, v)| format!("{k}={v}")).collect();
                write!(f, "trivialization {name} {{ {} }}", e.join("; "))
            }
            Stmt::Point { name, coords } => write!(f, "point {name} = ({})", coords.join(", ")),
            Stmt::Command(c) => {
                write!(f, "{}", c.name)?;
                for a in &c.args {
                    write!(f, " {a}")?;
                }
                for (k, v) in &c.flags {
                    match v {
                        Some(v) => write!(f, " --{k} {}", quote(v))?,
                        None => write!(f, " --{k}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.stmts {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}
