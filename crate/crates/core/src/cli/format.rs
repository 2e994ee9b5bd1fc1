//! Line-oriented model format.
//!
//! ```text
//! vass NAME
//! dim D
//! alphabet a b
//! states q0 q1
//! eps on
//! init q0 (1,0)
//! trans q0 a (-1,0) q1
//! accept upward q1 (0,0)
//! accept downward q1 (w,2)
//! accept updown q1 up[1]=(1) down=(w)
//! accept singleton q1 (0,0)
//! hole q1 (0,w)
//! ```
//!
//! `#` starts a comment. `states` is optional; without it states are
//! declared by `init` and `trans`. A bare `accept KIND` declares the kind
//! with no atoms.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::ideals::{DownAtom, DownSet, OmegaNat, UpAtom, UpSet};
use crate::model::{Acceptance, Config, Label, Transition, UpDownAtom, Vass};

struct Tok<'a> {
    text: &'a str,
    col: usize,
}

fn tokenize(line: &str) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start: Option<usize> = None;
    for (i, ch) in line.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if ch.is_whitespace() && depth <= 0 {
            if let Some(s) = start.take() {
                out.push(Tok { text: &line[s..i], col: s + 1 });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Tok { text: &line[s..], col: s + 1 });
    }
    out
}

struct Ctx<'p> {
    path: &'p str,
    line: usize,
}

impl Ctx<'_> {
    fn err(&self, col: usize, msg: impl Into<String>) -> Error {
        Error::Parse { path: self.path.to_string(), line: self.line, col, msg: msg.into() }
    }

    fn vector<T>(&self, tok: &Tok, dim: usize, item: impl Fn(&str) -> Option<T>, what: &str) -> Result<Vec<T>> {
        let t = tok.text.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| self.err(tok.col, format!("expected a parenthesised {what} vector, found {t}")))?;
        let parts: Vec<&str> = if inner.trim().is_empty() { vec![] } else { inner.split(',').map(str::trim).collect() };
        if parts.len() != dim {
            return Err(self.err(tok.col, format!("arity mismatch: expected {dim} entries, found {}", parts.len())));
        }
        parts
            .iter()
            .map(|p| item(p).ok_or_else(|| self.err(tok.col, format!("bad {what} entry {p:?}"))))
            .collect()
    }

    fn nat_vec(&self, tok: &Tok, dim: usize) -> Result<Vec<u64>> {
        if tok.text.split(['(', ',', ')']).any(|p| p.trim() == "w") {
            return Err(self.err(tok.col, "ω is not allowed here"));
        }
        self.vector(tok, dim, |s| s.parse().ok(), "natural")
    }

    fn omega_vec(&self, tok: &Tok, dim: usize) -> Result<Vec<OmegaNat>> {
        self.vector(tok, dim, parse_omega, "natural-or-w")
    }

    fn int_vec(&self, tok: &Tok, dim: usize) -> Result<Vec<i64>> {
        self.vector(tok, dim, |s| s.strip_prefix('+').unwrap_or(s).parse().ok(), "integer")
    }
}

fn parse_omega(s: &str) -> Option<OmegaNat> {
    if s == "w" {
        Some(OmegaNat::Omega)
    } else {
        s.parse().ok().map(OmegaNat::Fin)
    }
}

#[derive(Default)]
struct States {
    names: Vec<String>,
    index: HashMap<String, usize>,
    declared: bool,
}

impl States {
    fn get(&mut self, ctx: &Ctx, tok: &Tok, may_create: bool) -> Result<usize> {
        if let Some(&q) = self.index.get(tok.text) {
            return Ok(q);
        }
        if self.declared || !may_create {
            return Err(ctx.err(tok.col, format!("unknown state {}", tok.text)));
        }
        let q = self.names.len();
        self.names.push(tok.text.to_string());
        self.index.insert(tok.text.to_string(), q);
        Ok(q)
    }
}

/// `(line, label column, label, src, effect, dst)` before alphabet resolution.
type RawTrans = (usize, usize, Option<String>, usize, Vec<i64>, usize);

pub fn parse_model(text: &str, path: &str) -> Result<Vass> {
    let lines: Vec<(usize, Vec<Tok>)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, tokenize(l.split('#').next().unwrap_or(""))))
        .filter(|(_, t)| !t.is_empty())
        .collect();
    let mut dim = None;
    for (line, toks) in &lines {
        if toks[0].text == "dim" {
            let ctx = Ctx { path, line: *line };
            let tok = toks.get(1).ok_or_else(|| ctx.err(toks[0].col, "dim needs a value"))?;
            dim = Some(tok.text.parse::<usize>().map_err(|_| ctx.err(tok.col, "dim must be a natural"))?);
        }
    }
    let dim = dim.ok_or_else(|| Error::Parse { path: path.into(), line: 1, col: 1, msg: "missing dim line".into() })?;

    let mut name = String::from("vass");
    let mut alphabet: Vec<String> = Vec::new();
    let mut states = States::default();
    let mut eps = false;
    let mut init: Option<(usize, Config, usize)> = None;
    let mut trans: Vec<RawTrans> = Vec::new();
    let mut kind: Option<(String, usize)> = None;
    let mut up = Vec::new();
    let mut down = Vec::new();
    let mut updown = Vec::new();
    let mut single: Vec<Config> = Vec::new();
    let mut holes = Vec::new();

    for (line, toks) in &lines {
        let ctx = Ctx { path, line: *line };
        let arg = |i: usize| toks.get(i).ok_or_else(|| ctx.err(toks[0].col, format!("{} expects more arguments", toks[0].text)));
        let expect_len = |n: usize| {
            if toks.len() > n {
                Err(ctx.err(toks[n].col, format!("unexpected token {}", toks[n].text)))
            } else {
                Ok(())
            }
        };
        match toks[0].text {
            "vass" => {
                name = arg(1)?.text.to_string();
                expect_len(2)?;
            }
            "dim" => expect_len(2)?,
            "alphabet" => {
                for t in &toks[1..] {
                    if t.text == "eps" {
                        return Err(ctx.err(t.col, "eps is reserved"));
                    }
                    if alphabet.iter().any(|a| a == t.text) {
                        return Err(ctx.err(t.col, format!("duplicate letter {}", t.text)));
                    }
                    alphabet.push(t.text.to_string());
                }
            }
            "states" => {
                if !states.names.is_empty() {
                    return Err(ctx.err(toks[0].col, "states must precede init and trans"));
                }
                for t in &toks[1..] {
                    if states.index.contains_key(t.text) {
                        return Err(ctx.err(t.col, format!("duplicate state {}", t.text)));
                    }
                    states.get(&ctx, t, true)?;
                }
                states.declared = true;
            }
            "eps" => {
                let v = arg(1)?;
                eps = match v.text {
                    "on" => true,
                    "off" => false,
                    _ => return Err(ctx.err(v.col, "expected on or off")),
                };
                expect_len(2)?;
            }
            "init" => {
                let q = states.get(&ctx, arg(1)?, true)?;
                let c = ctx.nat_vec(arg(2)?, dim)?;
                expect_len(3)?;
                init = Some((q, Config::new(q, c), *line));
            }
            "trans" => {
                let s = states.get(&ctx, arg(1)?, true)?;
                let l = arg(2)?;
                let e = ctx.int_vec(arg(3)?, dim)?;
                let d = states.get(&ctx, arg(4)?, true)?;
                expect_len(5)?;
                let label = (l.text != "eps").then(|| l.text.to_string());
                trans.push((*line, l.col, label, s, e, d));
            }
            "accept" => {
                let k = arg(1)?;
                match &kind {
                    Some((prev, _)) if prev != k.text => {
                        return Err(ctx.err(k.col, format!("mixed acceptance kinds {prev} and {}", k.text)))
                    }
                    _ => kind = Some((k.text.to_string(), *line)),
                }
                if toks.len() == 2 {
                    if !matches!(k.text, "upward" | "downward" | "updown") {
                        return Err(ctx.err(k.col, format!("unknown acceptance kind {}", k.text)));
                    }
                    continue;
                }
                let q = states.get(&ctx, arg(2)?, false)?;
                match k.text {
                    "upward" => {
                        up.push(UpAtom::new(q, ctx.nat_vec(arg(3)?, dim)?));
                        expect_len(4)?;
                    }
                    "downward" => {
                        down.push(DownAtom::new(q, ctx.omega_vec(arg(3)?, dim)?));
                        expect_len(4)?;
                    }
                    "singleton" => {
                        if !single.is_empty() {
                            return Err(ctx.err(k.col, "only one singleton target is allowed"));
                        }
                        single.push(Config::new(q, ctx.nat_vec(arg(3)?, dim)?));
                        expect_len(4)?;
                    }
                    "updown" => {
                        let u = arg(3)?;
                        let dn = arg(4)?;
                        expect_len(5)?;
                        updown.push(parse_updown(&ctx, q, u, dn, dim)?);
                    }
                    other => return Err(ctx.err(k.col, format!("unknown acceptance kind {other}"))),
                }
            }
            "hole" => {
                let q = states.get(&ctx, arg(1)?, false)?;
                holes.push(DownAtom::new(q, ctx.omega_vec(arg(2)?, dim)?));
                expect_len(3)?;
            }
            other => return Err(ctx.err(toks[0].col, format!("unknown directive {other}"))),
        }
    }

    let (_, initial, init_line) = init.ok_or_else(|| Error::Parse {
        path: path.into(),
        line: 1,
        col: 1,
        msg: "missing init line".into(),
    })?;
    let n = states.names.len();
    let mut transitions = Vec::new();
    for (line, col, label, s, e, d) in trans {
        let ctx = Ctx { path, line };
        let label = match label {
            None if !eps => return Err(ctx.err(col, "eps label requires `eps on`")),
            None => Label::Eps,
            Some(l) => Label::Sym(
                alphabet.iter().position(|a| *a == l).ok_or_else(|| ctx.err(col, format!("letter {l} not in alphabet")))?,
            ),
        };
        transitions.push(Transition { src: s, label, effect: e, dst: d });
    }
    let kind_line = kind.as_ref().map_or(1, |(_, l)| *l);
    let shape = |e: Error| match e {
        Error::InvalidModel(msg) => Error::Parse { path: path.into(), line: kind_line, col: 1, msg },
        other => other,
    };
    let acceptance = match kind.as_ref().map(|(k, _)| k.as_str()) {
        None | Some("upward") => Acceptance::Upward(UpSet::new(dim, n, up).map_err(shape)?),
        Some("downward") => Acceptance::Downward(DownSet::new(dim, n, down).map_err(shape)?),
        Some("updown") => Acceptance::UpDown(updown),
        _ => Acceptance::Singleton(single.pop().expect("singleton kind has a target")),
    };
    let holes = DownSet::new(dim, n, holes)?;
    if holes.contains(initial.state, &initial.counters) {
        return Err(Error::Parse { path: path.into(), line: init_line, col: 1, msg: "initial configuration lies in a hole".into() });
    }
    let v = Vass { name, alphabet, dim, states: states.names, transitions, initial, acceptance, holes, eps_allowed: eps };
    v.validate().map_err(|e| match e {
        Error::InvalidModel(msg) => Error::Parse { path: path.into(), line: 1, col: 1, msg },
        other => other,
    })?;
    Ok(v)
}

fn parse_updown(ctx: &Ctx, q: usize, u: &Tok, d: &Tok, dim: usize) -> Result<UpDownAtom> {
    let (coords, vals) = u
        .text
        .strip_prefix("up[")
        .and_then(|s| s.split_once("]="))
        .ok_or_else(|| ctx.err(u.col, "expected up[i,…]=(…)"))?;
    let mut up_coords = Vec::new();
    for c in coords.split(',').map(str::trim).filter(|c| !c.is_empty()) {
        let j: usize = c.parse().map_err(|_| ctx.err(u.col, format!("bad coordinate {c}")))?;
        if j == 0 || j > dim {
            return Err(ctx.err(u.col, format!("coordinate {j} out of range 1..={dim}")));
        }
        up_coords.push(j - 1);
    }
    if up_coords.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ctx.err(u.col, "up coordinates must be strictly increasing"));
    }
    let vt = Tok { text: vals, col: u.col };
    let up = ctx.nat_vec(&vt, up_coords.len())?;
    let dv = d.text.strip_prefix("down=").ok_or_else(|| ctx.err(d.col, "expected down=(…)"))?;
    let down = ctx.omega_vec(&Tok { text: dv, col: d.col }, dim - up_coords.len())?;
    Ok(UpDownAtom { state: q, up_coords, up, down })
}

fn vec_str<T: ToString>(v: &[T]) -> String {
    format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

pub fn print_model(v: &Vass) -> String {
    let mut s = String::new();
    let st = |q: usize| v.states[q].as_str();
    let _ = writeln!(s, "vass {}", v.name);
    let _ = writeln!(s, "dim {}", v.dim);
    if !v.alphabet.is_empty() {
        let _ = writeln!(s, "alphabet {}", v.alphabet.join(" "));
    }
    let _ = writeln!(s, "states {}", v.states.join(" "));
    if v.eps_allowed {
        let _ = writeln!(s, "eps on");
    }
    let _ = writeln!(s, "init {} {}", st(v.initial.state), vec_str(&v.initial.counters));
    for t in &v.transitions {
        let l = match t.label {
            Label::Eps => "eps",
            Label::Sym(a) => v.alphabet[a].as_str(),
        };
        let _ = writeln!(s, "trans {} {} {} {}", st(t.src), l, vec_str(&t.effect), st(t.dst));
    }
    match &v.acceptance {
        Acceptance::Upward(u) => {
            u.atoms().iter().for_each(|a| {
                let _ = writeln!(s, "accept upward {} {}", st(a.state), vec_str(&a.basis));
            });
            if u.is_empty() {
                let _ = writeln!(s, "accept upward");
            }
        }
        Acceptance::Downward(d) => {
            d.atoms().iter().for_each(|a| {
                let _ = writeln!(s, "accept downward {} {}", st(a.state), vec_str(&a.bound));
            });
            if d.is_empty() {
                let _ = writeln!(s, "accept downward");
            }
        }
        Acceptance::UpDown(atoms) => {
            for a in atoms {
                let coords: Vec<String> = a.up_coords.iter().map(|j| (j + 1).to_string()).collect();
                let _ = writeln!(
                    s,
                    "accept updown {} up[{}]={} down={}",
                    st(a.state),
                    coords.join(","),
                    vec_str(&a.up),
                    vec_str(&a.down)
                );
            }
            if atoms.is_empty() {
                let _ = writeln!(s, "accept updown");
            }
        }
        Acceptance::Singleton(c) => {
            let _ = writeln!(s, "accept singleton {} {}", st(c.state), vec_str(&c.counters));
        }
    }
    for h in v.holes.atoms() {
        let _ = writeln!(s, "hole {} {}", st(h.state), vec_str(&h.bound));
    }
    s
}

pub fn parse_file(path: &str) -> Result<Vass> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.into(), msg: e.to_string() })?;
    parse_model(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    const LOOP: &str = "vass loop\ndim 1\nalphabet a\ninit q (1)\ntrans q a (-1) q\naccept upward q (0)\n";

    #[test]
    fn round_trip() {
        let v = parse_model(LOOP, "t").unwrap();
        let again = parse_model(&print_model(&v), "t").unwrap();
        assert_eq!(v, again);
        let text = "dim 2\nalphabet a b\neps on\ninit p (0,0) # start\ntrans p eps (+1,-1) q\n\
                    accept updown q up[2]=(1) down=(w)\nhole q (0,0)\n";
        let u = parse_model(text, "t").unwrap();
        assert_eq!(parse_model(&print_model(&u), "t").unwrap(), u);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_model("alphabet a\ninit q ()\n", "f").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }), "{e:?}");
        let e = parse_model("dim 1\ninit q (0)\naccept upward q (w)\n", "f").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, col: 17, .. }), "{e:?}");
        let e = parse_model("dim 1\nalphabet a\ninit q (0)\ntrans q eps (0) q\n", "f").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 4, .. }), "{e:?}");
        let e = parse_model("dim 1\ninit q (0)\nhole q (1)\n", "f").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e:?}");
        let e = parse_model("dim 2\ninit q (0)\n", "f").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e:?}");
        let e = parse_model("dim 1\ninit q (0)\naccept upward r (0)\n", "f").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e:?}");
    }
}
