//! Turns a checked script into kernel objects.

use std::collections::HashMap;

use crate::binding::Trivialization;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::expr::{parse_field_elem, parse_poly, parse_ratfunc};
use crate::field::{DifferenceField, FieldElem};
use crate::geometry::{AffineVariety, RationalMap, SigmaVariety};
use crate::poly::{RatFunc, Vars};

use super::dsl::{FieldDecl, Script, Stmt};

/// A declaration that could not be built, with its source line.
#[derive(Clone, Debug)]
pub struct BuildError {
    pub line: usize,
    pub name: String,
    pub error: String,
}

#[derive(Clone, Debug)]
pub struct MapDecl {
    pub src: String,
    pub dst: String,
    pub components: Vec<RatFunc>,
}

pub struct Session {
    pub cfg: Config,
    pub field: DifferenceField,
    pub varieties: HashMap<String, AffineVariety>,
    pub maps: HashMap<String, MapDecl>,
    pub sigmas: HashMap<String, SigmaVariety>,
    pub trivs: HashMap<String, Trivialization>,
    pub points: HashMap<String, Vec<FieldElem>>,
    pairs: HashMap<(String, String), SigmaVariety>,
}

fn build_field(d: &FieldDecl) -> Result<DifferenceField> {
    if d.gens.is_empty() {
        return Ok(DifferenceField::rationals());
    }
    let images = |subs: &[(String, String)]| -> Result<Vec<FieldElem>> {
        d.gens
            .iter()
            .map(|g| {
                let (_, e) = subs.iter().find(|(k, _)| k == g).expect("checked by the parser");
                parse_field_elem(e, &d.gens).map_err(|e| Error::Shape(e.to_string()))
            })
            .collect()
    };
    Ok(DifferenceField::new(d.gens.clone(), images(&d.sigma)?, images(&d.inv)?)?)
}

fn parse_err(e: impl std::fmt::Display) -> Error {
    Error::Shape(e.to_string())
}

impl Session {
    pub fn build(script: &Script, cfg: Config) -> std::result::Result<Session, BuildError> {
        let fail = |line: usize, name: &str, e: Error| BuildError { line, name: name.to_string(), error: e.to_string() };
        let field = build_field(&script.field()).map_err(|e| fail(1, "field", e))?;
        let mut s = Session {
            cfg,
            field,
            varieties: HashMap::new(),
            maps: HashMap::new(),
            sigmas: HashMap::new(),
            trivs: HashMap::new(),
            points: HashMap::new(),
            pairs: HashMap::new(),
        };
        for (stmt, &line) in script.stmts.iter().zip(&script.lines) {
            match stmt {
                Stmt::Field(_) | Stmt::Command(_) => {}
                Stmt::Variety { name, ambient, ideal } => {
                    let v = s.build_variety(ambient, ideal).map_err(|e| fail(line, name, e))?;
                    s.varieties.insert(name.clone(), v);
                }
                Stmt::Map { name, src, dst, components } => {
                    let vars = s.varieties[src].vars().clone();
                    let comps = components
                        .iter()
                        .map(|c| parse_ratfunc(c, &vars, &s.field).map_err(parse_err))
                        .collect::<Result<Vec<_>>>()
                        .map_err(|e| fail(line, name, e))?;
                    s.maps.insert(name.clone(), MapDecl { src: src.clone(), dst: dst.clone(), components: comps });
                }
                Stmt::SigmaVariety { name, variety, map } => {
                    let sv = s.build_sigma(variety, map).map_err(|e| fail(line, name, e))?;
                    s.sigmas.insert(name.clone(), sv);
                }
                Stmt::Trivialization { name, entries } => {
                    let get = |k: &str| entries.iter().find(|(x, _)| x == k).map(|(_, v)| v.clone()).expect("checked");
                    let t = s.build_triv(&get("V"), &get("Z"), &get("Y"), &get("g"), &get("f")).map_err(|e| fail(line, name, e))?;
                    s.trivs.insert(name.clone(), t);
                }
                Stmt::Point { name, coords } => {
                    let p = s.parse_point(coords).map_err(|e| fail(line, name, e))?;
                    s.points.insert(name.clone(), p);
                }
            }
        }
        Ok(s)
    }

    fn build_variety(&self, ambient: &[String], ideal: &[String]) -> Result<AffineVariety> {
        let vars = Vars::new(ambient);
        let gens = ideal.iter().map(|p| parse_poly(p, &vars, &self.field).map_err(parse_err)).collect::<Result<Vec<_>>>()?;
        AffineVariety::new(&vars, gens, &self.cfg)
    }

    fn build_sigma(&self, variety: &str, map: &str) -> Result<SigmaVariety> {
        let v = self.varieties[variety].clone();
        SigmaVariety::new(&self.field, v, self.maps[map].components.clone(), &self.cfg)
    }

    fn build_triv(&self, v: &str, z: &str, y: &str, g: &str, f: &str) -> Result<Trivialization> {
        let (g, f) = (&self.maps[g], &self.maps[f]);
        if f.src != y || g.dst != y {
            return Err(Error::Shape("g must map into Y and f must start from Y".into()));
        }
        Trivialization::new(
            self.sigmas[v].clone(),
            self.sigmas[z].clone(),
            self.varieties[y].clone(),
            g.components.clone(),
            f.components.clone(),
        )
    }

    pub fn parse_point(&self, coords: &[String]) -> Result<Vec<FieldElem>> {
        coords.iter().map(|c| parse_field_elem(c, self.field.names()).map_err(parse_err)).collect()
    }

    /// A declared map as a checked map between its varieties.
    pub fn map(&self, name: &str) -> Result<RationalMap> {
        let m = &self.maps[name];
        RationalMap::new(self.varieties[&m.src].clone(), self.varieties[&m.dst].clone(), m.components.clone(), &self.cfg)
    }

    /// A σ-variety given by name or by a variety and map pair.
    pub fn sigma(&mut self, first: &str, second: Option<&str>) -> Result<SigmaVariety> {
        if let Some(s) = self.sigmas.get(first) {
            return Ok(s.clone());
        }
        let map = second.expect("checked by the parser");
        let key = (first.to_string(), map.to_string());
        if let Some(s) = self.pairs.get(&key) {
            return Ok(s.clone());
        }
        let s = self.build_sigma(first, map)?;
        self.pairs.insert(key, s.clone());
        Ok(s)
    }

    /// A point by name, as a tuple, or as a single coordinate.
    pub fn point(&self, text: &str) -> Result<Vec<FieldElem>> {
        if let Some(p) = self.points.get(text) {
            return Ok(p.clone());
        }
        let t = text.trim();
        let inner = t.strip_prefix('(').and_then(|r| r.strip_suffix(')'));
        match inner {
            Some(body) => self.parse_point(&split_top(body)),
            None => self.parse_point(&[t.to_string()]),
        }
    }
}

/// Splits at top-level commas.
pub(crate) fn split_top(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(cur.trim().to_string());
                cur.clear();
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    out.push(cur.trim().to_string());
    out
}
