//! Scene files: a small line-oriented description of rings, ideals, cycles
//! and numeric sampling data.
//!
//! ```text
//! # comment
//! field Q                      # or Fp:<p>
//! vars x y z
//! params u v                   # variables of parametrizations (default: t)
//! ideal I: x^2 - y^3, z
//! cycle Z 2: x, y              # component given by its prime ideal, multiplicity 2
//! cycle Z 1 param: u^3, u^2, u*v
//! hyperplane H: x + 2*y
//! element f: x*y
//! center: 0, 0, 0
//! radius: 1
//! approach: u, u^2, 0
//! intersection: u^3, u^2, 0
//! task window=4 ideals=I
//! ```
//!
//! A line starting with whitespace continues the previous one.

use std::collections::BTreeMap;

use crate::cycles::{Component, Cycle};
use crate::error::{AlgebraError, Result};
use crate::field::Field;
use crate::ideal::Ideal;
use crate::parse::{parse_polynomial_at, parse_polynomial_list_at};
use crate::poly::{Polynomial, Ring, RingRef};

#[derive(Clone, Debug)]
pub struct Scene {
    pub ring: RingRef,
    pub params: RingRef,
    pub ideals: Vec<(String, Ideal)>,
    pub cycles: Vec<(String, Cycle)>,
    pub hyperplanes: Vec<(String, Polynomial)>,
    pub elements: Vec<(String, Polynomial)>,
    pub center: Option<Vec<f64>>,
    pub radius: Option<f64>,
    /// Maps from the parameter ring, used to approach the center.
    pub approaches: Vec<Vec<Polynomial>>,
    /// Maps covering the intersection, used as distance oracle.
    pub intersection: Vec<Vec<Polynomial>>,
    pub task: BTreeMap<String, String>,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> AlgebraError {
    AlgebraError::Parse { line, column, message: message.into() }
}

fn check_name(name: &str, line: usize, col: usize) -> Result<()> {
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(err(line, col, format!("invalid name `{name}`")));
    }
    Ok(())
}

fn lookup<'a, T>(items: &'a [(String, T)], name: &str) -> Option<&'a T> {
    items.iter().find(|(n, _)| n == name).map(|(_, v)| v)
}

impl Scene {
    pub fn ideal(&self, name: &str) -> Option<&Ideal> {
        lookup(&self.ideals, name)
    }

    pub fn cycle(&self, name: &str) -> Option<&Cycle> {
        lookup(&self.cycles, name)
    }

    pub fn hyperplane(&self, name: &str) -> Option<&Polynomial> {
        lookup(&self.hyperplanes, name)
    }

    pub fn element(&self, name: &str) -> Option<&Polynomial> {
        lookup(&self.elements, name)
    }
}

/// Joins continuation lines; returns `(line number, column of text start, text)`.
fn logical_lines(src: &str) -> Vec<(usize, usize, String)> {
    let mut out: Vec<(usize, usize, String)> = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let text = raw.split('#').next().unwrap_or("");
        if text.trim().is_empty() {
            continue;
        }
        if text.starts_with(char::is_whitespace) {
            if let Some(last) = out.last_mut() {
                last.2.push(' ');
                last.2.push_str(text.trim());
                continue;
            }
        }
        let lead = text.len() - text.trim_start().len();
        out.push((i + 1, lead, text.trim().to_string()));
    }
    out
}

/// Parses a scene; `field` overrides the field declared in the file.
pub fn parse_scene(src: &str, field: Option<Field>) -> Result<Scene> {
    let mut declared_field: Option<Field> = None;
    let mut ring: Option<RingRef> = None;
    let mut params: Option<RingRef> = None;
    let mut scene_items: Vec<(usize, usize, String, String)> = Vec::new();
    for (line, col, text) in logical_lines(src) {
        let (key, rest) = match text.split_once(|c: char| c.is_whitespace() || c == ':') {
            Some((k, _)) => (k.to_string(), text[k.len()..].to_string()),
            None => (text.clone(), String::new()),
        };
        match key.as_str() {
            "field" => {
                if declared_field.is_some() {
                    return Err(err(line, col + 1, "field declared twice"));
                }
                declared_field = Some(rest.trim().parse().map_err(|e: AlgebraError| err(line, col + 7, e.to_string()))?);
            }
            "vars" => {
                if ring.is_some() {
                    return Err(err(line, col + 1, "variables declared twice"));
                }
                let names: Vec<String> = rest.split_whitespace().map(String::from).collect();
                for n in &names {
                    check_name(n, line, col + 1)?;
                }
                let f = field.or(declared_field).unwrap_or(Field::Rational);
                ring = Some(Ring::new(f, names));
            }
            "params" => {
                let names: Vec<String> = rest.split_whitespace().map(String::from).collect();
                for n in &names {
                    check_name(n, line, col + 1)?;
                }
                params = Some(Ring::new(field.or(declared_field).unwrap_or(Field::Rational), names));
            }
            "ideal" | "cycle" | "hyperplane" | "element" | "center" | "radius" | "approach" | "intersection" | "task" => {
                scene_items.push((line, col, key, rest));
            }
            other => return Err(err(line, col + 1, format!("unknown key `{other}`"))),
        }
    }
    let ring = ring.ok_or_else(|| err(1, 1, "missing `vars` line"))?;
    let params = params.unwrap_or_else(|| Ring::new(ring.field(), ["t"]));
    let mut scene = Scene {
        ring: ring.clone(),
        params: params.clone(),
        ideals: Vec::new(),
        cycles: Vec::new(),
        hyperplanes: Vec::new(),
        elements: Vec::new(),
        center: None,
        radius: None,
        approaches: Vec::new(),
        intersection: Vec::new(),
        task: BTreeMap::new(),
    };
    for (line, col, key, rest) in scene_items {
        let body_col = col + key.len();
        // `head: body` split, with the column where the body starts
        let split = |rest: &str| -> Result<(String, String, usize)> {
            let (head, body) = rest.split_once(':').ok_or_else(|| err(line, body_col + 1, "expected `:`"))?;
            Ok((head.trim().to_string(), body.to_string(), body_col + head.len() + 1))
        };
        match key.as_str() {
            "ideal" | "hyperplane" | "element" => {
                let (name, body, bcol) = split(&rest)?;
                check_name(&name, line, body_col + 1)?;
                let taken = scene.ideal(&name).is_some() || scene.hyperplane(&name).is_some() || scene.element(&name).is_some();
                if taken {
                    return Err(err(line, body_col + 1, format!("`{name}` defined twice")));
                }
                match key.as_str() {
                    "ideal" => {
                        let gens = parse_polynomial_list_at(&ring, &body, line, bcol)?;
                        scene.ideals.push((name, Ideal::new(&ring, gens)?));
                    }
                    "hyperplane" => {
                        let l = parse_polynomial_at(&ring, &body, line, bcol)?;
                        if l.total_degree() != 1 {
                            return Err(err(line, bcol + 1, "hyperplane equation must have degree 1"));
                        }
                        scene.hyperplanes.push((name, l));
                    }
                    _ => {
                        let f = parse_polynomial_at(&ring, &body, line, bcol)?;
                        scene.elements.push((name, f));
                    }
                }
            }
            "cycle" => {
                let (head, body, bcol) = split(&rest)?;
                let words: Vec<&str> = head.split_whitespace().collect();
                let (name, mult, param) = match words.as_slice() {
                    [n, m] => (*n, *m, false),
                    [n, m, "param"] => (*n, *m, true),
                    _ => return Err(err(line, body_col + 1, "expected `cycle NAME MULT[ param]: ...`")),
                };
                check_name(name, line, body_col + 1)?;
                let mult: u64 = mult.parse().map_err(|_| err(line, body_col + 1, format!("bad multiplicity `{mult}`")))?;
                let component = if param {
                    let coords = parse_polynomial_list_at(&params, &body, line, bcol)?;
                    Component::from_parametrization(&ring, &coords)?
                } else {
                    Component::new(Ideal::new(&ring, parse_polynomial_list_at(&ring, &body, line, bcol)?)?)?
                };
                match scene.cycles.iter_mut().find(|(n, _)| n == name) {
                    Some((_, z)) => z.add(component, mult)?,
                    None => scene.cycles.push((name.to_string(), Cycle::from_terms(&ring, [(component, mult)])?)),
                }
            }
            "center" | "radius" => {
                let body = rest.trim_start().strip_prefix(':').ok_or_else(|| err(line, body_col + 1, "expected `:`"))?;
                let vals = parse_polynomial_list_at(&Ring::new(Field::Rational, Vec::<String>::new()), body, line, body_col + 1)?;
                let nums: Vec<f64> = vals.iter().map(|p| p.constant_term().to_f64()).collect();
                if key == "center" {
                    if nums.len() != ring.nvars() {
                        return Err(err(line, body_col + 1, "center needs one coordinate per variable"));
                    }
                    scene.center = Some(nums);
                } else {
                    match nums.as_slice() {
                        [r] if *r > 0.0 => scene.radius = Some(*r),
                        _ => return Err(err(line, body_col + 1, "radius must be one positive number")),
                    }
                }
            }
            "approach" | "intersection" => {
                let body = rest.trim_start().strip_prefix(':').ok_or_else(|| err(line, body_col + 1, "expected `:`"))?;
                let coords = parse_polynomial_list_at(&params, body, line, body_col + 1)?;
                if coords.len() != ring.nvars() {
                    return Err(err(line, body_col + 1, "map needs one coordinate per variable"));
                }
                if key == "approach" {
                    scene.approaches.push(coords);
                } else {
                    scene.intersection.push(coords);
                }
            }
            _ => {
                for word in rest.split_whitespace() {
                    let (k, v) = word.split_once('=').ok_or_else(|| err(line, body_col + 1, format!("expected key=value, got `{word}`")))?;
                    scene.task.insert(k.to_string(), v.to_string());
                }
            }
        }
    }
    Ok(scene)
}
