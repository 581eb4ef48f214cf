//! Plain-text instance documents: a base, edges, cocycle rows, an optional regular set,
//! parameters and an optional finite action.
//!
//! ```text
//! # comment
//! [base]
//! kind = presented
//! generators = z
//! normalization = free
//!
//! [edges]
//! 0 = o -> o
//! 1 = o -> o
//!
//! [cocycle]
//! z 0 = 1 e
//! z 1 = 0 z
//!
//! [regular]
//! R = o
//!
//! [parameters]
//! depth = 4
//! ```
//!
//! Finite bases use `kind = vertices` (`objects = ...`), `kind = group` (`elements = ...`
//! and one `product a b = c` line per ordered pair) or `kind = groupoid` (`objects = ...`,
//! `arrow t = u -> w`, `unit u = 1u`, `inverse t = ti`, `compose g h = gh`). Edges read
//! `name = src -> rng`, cocycle rows `g x = y h` for `g∘x = y`, `g|_x = h`. An `[action]`
//! section has `point y = object`, `act g y = z` and `mu e y = z` lines.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::actions::FiniteAction;
use crate::base::{Arrow, Base};
use crate::correspondence::{Correspondence, Edge, EdgeId};
use crate::groupoid::{ArrowRecord, FiniteGroupoid, ObjectId};
use crate::presented::{Normalization, PresentedGroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct DocError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, DocError> {
    Err(DocError { line, message: message.into() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseKind {
    Vertices,
    Group,
    Groupoid,
    Presented,
}

impl BaseKind {
    fn name(self) -> &'static str {
        match self {
            BaseKind::Vertices => "vertices",
            BaseKind::Group => "group",
            BaseKind::Groupoid => "groupoid",
            BaseKind::Presented => "presented",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Parameters {
    pub depth: Option<usize>,
    pub cap: Option<usize>,
    pub wordcap: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub kind: BaseKind,
    pub correspondence: Correspondence,
    pub regular: Option<BTreeSet<ObjectId>>,
    pub parameters: Parameters,
    pub action: Option<FiniteAction>,
}

impl Instance {
    pub fn new(c: Correspondence) -> Self {
        let kind = match c.base() {
            Base::Presented(_) => BaseKind::Presented,
            Base::Finite(g) if c.base().is_trivial() && g.arrows().iter().zip(g.objects()).all(|(a, o)| a.name == *o) => {
                BaseKind::Vertices
            }
            Base::Finite(g) if g.num_objects() == 1 => BaseKind::Group,
            Base::Finite(_) => BaseKind::Groupoid,
        };
        Self { kind, correspondence: c, regular: None, parameters: Parameters::default(), action: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Base,
    Edges,
    Cocycle,
    Regular,
    Parameters,
    Action,
}

struct Line<'a> {
    no: usize,
    text: &'a str,
}

fn words(s: &str) -> Vec<&str> {
    s.split_whitespace().collect()
}

/// `lhs = rhs`, both sides trimmed.
fn split_eq<'a>(l: &Line<'a>) -> Result<(&'a str, &'a str), DocError> {
    match l.text.split_once('=') {
        Some((a, b)) => Ok((a.trim(), b.trim())),
        None => err(l.no, format!("expected `key = value`, found `{}`", l.text)),
    }
}

fn arrow_ends(l: &Line<'_>, s: &str) -> Result<(String, String), DocError> {
    match s.split_once("->") {
        Some((a, b)) if !a.trim().is_empty() && !b.trim().is_empty() => Ok((a.trim().to_string(), b.trim().to_string())),
        _ => err(l.no, format!("expected `src -> rng`, found `{s}`")),
    }
}

fn parse_base(lines: &[Line<'_>]) -> Result<(BaseKind, Base), DocError> {
    let mut keys: HashMap<&str, (usize, &str)> = HashMap::new();
    let mut rows: Vec<(usize, &str, Vec<&str>, &str)> = Vec::new();
    for l in lines {
        let (lhs, rhs) = split_eq(l)?;
        let ws = words(lhs);
        match ws.as_slice() {
            [k] if ["kind", "objects", "elements", "generators", "normalization"].contains(k) => {
                if keys.insert(k, (l.no, rhs)).is_some() {
                    return err(l.no, format!("duplicate key `{k}`"));
                }
            }
            [k, rest @ ..] if ["product", "arrow", "unit", "inverse", "compose"].contains(k) => {
                rows.push((l.no, k, rest.to_vec(), rhs));
            }
            _ => return err(l.no, format!("unknown key `{lhs}` in [base]")),
        }
    }
    let Some(&(kline, kind)) = keys.get("kind") else { return err(lines.first().map_or(0, |l| l.no), "missing `kind`") };
    let allowed: &[&str] = match kind {
        "vertices" => &["kind", "objects"],
        "group" => &["kind", "elements", "product"],
        "groupoid" => &["kind", "objects", "arrow", "unit", "inverse", "compose"],
        "presented" => &["kind", "generators", "normalization"],
        k => return err(kline, format!("unknown base kind `{k}`")),
    };
    for (k, (no, _)) in &keys {
        if !allowed.contains(k) {
            return err(*no, format!("key `{k}` not allowed for kind {kind}"));
        }
    }
    for (no, k, _, _) in &rows {
        if !allowed.contains(k) {
            return err(*no, format!("`{k}` lines not allowed for kind {kind}"));
        }
    }
    let need = |k: &str| keys.get(k).copied().ok_or(DocError { line: kline, message: format!("missing `{k}`") });
    match kind {
        "vertices" => {
            let (no, objs) = need("objects")?;
            let g = FiniteGroupoid::set_groupoid(&words(objs)).or_else(|e| err(no, e.to_string()))?;
            Ok((BaseKind::Vertices, Base::Finite(g)))
        }
        "group" => {
            let (no, els) = need("elements")?;
            let els = words(els);
            let idx = |l: usize, s: &str| els.iter().position(|e| *e == s).ok_or(DocError { line: l, message: format!("unknown element `{s}`") });
            let mut table = vec![vec![usize::MAX; els.len()]; els.len()];
            for (l, _, args, rhs) in &rows {
                let [a, b] = args.as_slice() else { return err(*l, "expected `product a b = c`") };
                let (a, b, c) = (idx(*l, a)?, idx(*l, b)?, idx(*l, rhs)?);
                if table[a][b] != usize::MAX {
                    return err(*l, "duplicate product");
                }
                table[a][b] = c;
            }
            if let Some((a, b)) = (0..els.len()).flat_map(|a| (0..els.len()).map(move |b| (a, b))).find(|&(a, b)| table[a][b] == usize::MAX) {
                return err(no, format!("missing product {} {}", els[a], els[b]));
            }
            let g = FiniteGroupoid::group(&els, &table).or_else(|e| err(no, e.to_string()))?;
            Ok((BaseKind::Group, Base::Finite(g)))
        }
        "groupoid" => {
            let (_, objs) = need("objects")?;
            let objects: Vec<String> = words(objs).into_iter().map(String::from).collect();
            let obj = |l: usize, s: &str| {
                objects.iter().position(|o| o == s).map(ObjectId).ok_or(DocError { line: l, message: format!("unknown object `{s}`") })
            };
            let mut arrows = Vec::new();
            for (l, k, args, rhs) in &rows {
                if *k == "arrow" {
                    let [name] = args.as_slice() else { return err(*l, "expected `arrow name = src -> rng`") };
                    let (s, r) = arrow_ends(&Line { no: *l, text: rhs }, rhs)?;
                    arrows.push(ArrowRecord { name: name.to_string(), src: obj(*l, &s)?, rng: obj(*l, &r)? });
                }
            }
            let arr = |l: usize, s: &str| {
                arrows.iter().position(|a| a.name == s).ok_or(DocError { line: l, message: format!("unknown arrow `{s}`") })
            };
            let mut unit = vec![None; objects.len()];
            let mut inv = vec![None; arrows.len()];
            let mut compose = HashMap::new();
            for (l, k, args, rhs) in &rows {
                match (*k, args.as_slice()) {
                    ("arrow", _) => {}
                    ("unit", [o]) => unit[obj(*l, o)?.0] = Some(arr(*l, rhs)?),
                    ("inverse", [a]) => inv[arr(*l, a)?] = Some(arr(*l, rhs)?),
                    ("compose", [g, h]) => {
                        if compose.insert((arr(*l, g)?, arr(*l, h)?), arr(*l, rhs)?).is_some() {
                            return err(*l, "duplicate composition");
                        }
                    }
                    _ => return err(*l, format!("malformed `{k}` line")),
                }
            }
            let g = FiniteGroupoid::from_tables(objects, arrows, compose, inv, unit).or_else(|e| err(kline, e.to_string()))?;
            Ok((BaseKind::Groupoid, Base::Finite(g)))
        }
        _ => {
            let (_, gens) = need("generators")?;
            let norm = match keys.get("normalization") {
                None | Some((_, "free")) => Normalization::Free,
                Some((_, "abelian")) => Normalization::Abelian,
                Some((no, n)) => return err(*no, format!("unknown normalization `{n}`")),
            };
            let gens: Vec<String> = words(gens).into_iter().map(String::from).collect();
            Ok((BaseKind::Presented, Base::Presented(PresentedGroup::new(gens, norm))))
        }
    }
}

fn lookup_edge(c: &Correspondence, no: usize, s: &str) -> Result<EdgeId, DocError> {
    c.edge_index(s).ok_or(DocError { line: no, message: format!("unknown edge `{s}`") })
}

fn lookup_arrow(c: &Correspondence, no: usize, s: &str) -> Result<Arrow, DocError> {
    c.base().parse_arrow(s).ok_or(DocError { line: no, message: format!("unknown arrow `{s}`") })
}

/// Parses a document. Errors carry the 1-based line number.
pub fn parse(text: &str) -> Result<Instance, DocError> {
    let mut sections: BTreeMap<Section, (usize, Vec<Line<'_>>)> = BTreeMap::new();
    let mut current: Option<Section> = None;
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let t = raw.split('#').next().unwrap_or("").trim();
        if t.is_empty() {
            continue;
        }
        if let Some(name) = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let s = match name.trim() {
                "base" => Section::Base,
                "edges" => Section::Edges,
                "cocycle" => Section::Cocycle,
                "regular" => Section::Regular,
                "parameters" => Section::Parameters,
                "action" => Section::Action,
                other => return err(no, format!("unknown section [{other}]")),
            };
            if sections.insert(s, (no, Vec::new())).is_some() {
                return err(no, format!("duplicate section [{}]", name.trim()));
            }
            current = Some(s);
            continue;
        }
        match current {
            Some(s) => sections.get_mut(&s).expect("open section").1.push(Line { no, text: t }),
            None => return err(no, "content before the first section"),
        }
    }
    let empty = (0, Vec::new());
    let Some((_, base_lines)) = sections.get(&Section::Base) else { return err(1, "missing [base] section") };
    let (kind, base) = parse_base(base_lines)?;

    let mut edges = Vec::new();
    let (_, edge_lines) = sections.get(&Section::Edges).unwrap_or(&empty);
    for l in edge_lines {
        let (name, rhs) = split_eq(l)?;
        if words(name).len() != 1 {
            return err(l.no, format!("bad edge name `{name}`"));
        }
        if edges.iter().any(|e: &Edge| e.name == name) {
            return err(l.no, format!("duplicate edge `{name}`"));
        }
        let (s, r) = arrow_ends(l, rhs)?;
        let obj = |o: &str| base.object_index(o).ok_or(DocError { line: l.no, message: format!("unknown object `{o}`") });
        edges.push(Edge { name: name.to_string(), src: obj(&s)?, rng: obj(&r)? });
    }
    let mut c = Correspondence::new(base, edges, BTreeMap::new());
    let mut rows = BTreeMap::new();
    let (_, cocycle_lines) = sections.get(&Section::Cocycle).unwrap_or(&empty);
    for l in cocycle_lines {
        let (lhs, rhs) = split_eq(l)?;
        let (ws, vs) = (words(lhs), words(rhs));
        let ([g, x], [y, h]) = (ws.as_slice(), vs.as_slice()) else { return err(l.no, "expected `g x = y h`") };
        let key = (lookup_arrow(&c, l.no, g)?, lookup_edge(&c, l.no, x)?);
        if rows.insert(key, (lookup_edge(&c, l.no, y)?, lookup_arrow(&c, l.no, h)?)).is_some() {
            return err(l.no, "duplicate cocycle row");
        }
    }
    for ((g, x), (y, h)) in rows {
        c.set_row(g, x, y, h);
    }
    let b = c.base();

    let regular = match sections.get(&Section::Regular) {
        None => None,
        Some((_, ls)) => {
            let mut set = None;
            for l in ls {
                let (k, v) = split_eq(l)?;
                if k != "R" || set.is_some() {
                    return err(l.no, format!("unexpected `{k}` in [regular]"));
                }
                let s: Result<BTreeSet<ObjectId>, DocError> = words(v)
                    .into_iter()
                    .map(|o| b.object_index(o).ok_or(DocError { line: l.no, message: format!("unknown object `{o}`") }))
                    .collect();
                set = Some(s?);
            }
            Some(set.unwrap_or_default())
        }
    };

    let mut parameters = Parameters::default();
    let (_, param_lines) = sections.get(&Section::Parameters).unwrap_or(&empty);
    for l in param_lines {
        let (k, v) = split_eq(l)?;
        let n: usize = v.parse().or_else(|_| err(l.no, format!("`{v}` is not a number")))?;
        let slot = match k {
            "depth" => &mut parameters.depth,
            "cap" => &mut parameters.cap,
            "wordcap" => &mut parameters.wordcap,
            _ => return err(l.no, format!("unknown parameter `{k}`")),
        };
        if slot.replace(n).is_some() {
            return err(l.no, format!("duplicate parameter `{k}`"));
        }
    }

    let action = match sections.get(&Section::Action) {
        None => None,
        Some((_, ls)) => {
            let mut a = FiniteAction { names: vec![], fiber: vec![], g_act: BTreeMap::new(), mu: BTreeMap::new() };
            for l in ls {
                let (lhs, rhs) = split_eq(l)?;
                if let ["point", y] = words(lhs).as_slice() {
                    if a.point_index(y).is_some() {
                        return err(l.no, format!("duplicate point `{y}`"));
                    }
                    a.names.push(y.to_string());
                    a.fiber.push(b.object_index(rhs).ok_or(DocError { line: l.no, message: format!("unknown object `{rhs}`") })?);
                }
            }
            let pt = |no: usize, s: &str| a.point_index(s).ok_or(DocError { line: no, message: format!("unknown point `{s}`") });
            let mut g_act = BTreeMap::new();
            let mut mu = BTreeMap::new();
            for l in ls {
                let (lhs, rhs) = split_eq(l)?;
                match words(lhs).as_slice() {
                    ["point", _] => {}
                    ["act", g, y] => {
                        if g_act.insert((lookup_arrow(&c, l.no, g)?, pt(l.no, y)?), pt(l.no, rhs)?).is_some() {
                            return err(l.no, "duplicate act line");
                        }
                    }
                    ["mu", e, y] => {
                        if mu.insert((lookup_edge(&c, l.no, e)?, pt(l.no, y)?), pt(l.no, rhs)?).is_some() {
                            return err(l.no, "duplicate mu line");
                        }
                    }
                    _ => return err(l.no, format!("unknown key `{lhs}` in [action]")),
                }
            }
            a.g_act = g_act;
            a.mu = mu;
            Some(a)
        }
    };
    Ok(Instance { kind, correspondence: c, regular, parameters, action })
}

/// Canonical text: fixed section order, table lines in index order.
pub fn serialize(inst: &Instance) -> String {
    let c = &inst.correspondence;
    let b = c.base();
    let mut s = String::new();
    s.push_str("[base]\n");
    let _ = writeln!(s, "kind = {}", inst.kind.name());
    match (b, inst.kind) {
        (Base::Presented(p), _) => {
            let _ = writeln!(s, "generators = {}", p.generators().join(" "));
            let norm = match p.normalization() {
                Normalization::Abelian => "abelian",
                _ => "free",
            };
            let _ = writeln!(s, "normalization = {norm}");
        }
        (Base::Finite(g), BaseKind::Vertices) => {
            let _ = writeln!(s, "objects = {}", g.objects().join(" "));
        }
        (Base::Finite(g), BaseKind::Group) => {
            let names: Vec<&str> = g.arrows().iter().map(|a| a.name.as_str()).collect();
            let _ = writeln!(s, "elements = {}", names.join(" "));
            for x in 0..names.len() {
                for y in 0..names.len() {
                    if let Some(z) = g.compose(x, y) {
                        let _ = writeln!(s, "product {} {} = {}", names[x], names[y], names[z]);
                    }
                }
            }
        }
        (Base::Finite(g), _) => {
            let _ = writeln!(s, "objects = {}", g.objects().join(" "));
            let an = |i: usize| g.arrows()[i].name.as_str();
            let on = |v: ObjectId| g.objects()[v.0].as_str();
            for a in g.arrows() {
                let _ = writeln!(s, "arrow {} = {} -> {}", a.name, on(a.src), on(a.rng));
            }
            for v in 0..g.num_objects() {
                if let Some(u) = g.unit(ObjectId(v)) {
                    let _ = writeln!(s, "unit {} = {}", on(ObjectId(v)), an(u));
                }
            }
            for a in 0..g.num_arrows() {
                if let Some(i) = g.inverse(a) {
                    let _ = writeln!(s, "inverse {} = {}", an(a), an(i));
                }
            }
            let mut entries = g.composition_entries();
            entries.sort();
            for (x, y, z) in entries {
                let _ = writeln!(s, "compose {} {} = {}", an(x), an(y), an(z));
            }
        }
    }
    s.push_str("\n[edges]\n");
    for e in c.edges() {
        let _ = writeln!(s, "{} = {} -> {}", e.name, b.object_name(e.src), b.object_name(e.rng));
    }
    if !c.rows().is_empty() {
        s.push_str("\n[cocycle]\n");
        for ((g, x), (y, h)) in c.rows() {
            let _ = writeln!(s, "{} {} = {} {}", b.arrow_name(g), c.edge_name(*x), c.edge_name(*y), b.arrow_name(h));
        }
    }
    if let Some(r) = &inst.regular {
        let names: Vec<String> = r.iter().map(|v| b.object_name(*v)).collect();
        let _ = writeln!(s, "\n[regular]\nR = {}", names.join(" "));
    }
    let p = &inst.parameters;
    if p.depth.is_some() || p.cap.is_some() || p.wordcap.is_some() {
        s.push_str("\n[parameters]\n");
        for (k, v) in [("depth", p.depth), ("cap", p.cap), ("wordcap", p.wordcap)] {
            if let Some(v) = v {
                let _ = writeln!(s, "{k} = {v}");
            }
        }
    }
    if let Some(a) = &inst.action {
        s.push_str("\n[action]\n");
        for (y, n) in a.names.iter().enumerate() {
            let _ = writeln!(s, "point {n} = {}", b.object_name(a.fiber[y]));
        }
        for ((g, y), z) in &a.g_act {
            let _ = writeln!(s, "act {} {} = {}", b.arrow_name(g), a.names[*y], a.names[*z]);
        }
        for ((e, y), z) in &a.mu {
            let _ = writeln!(s, "mu {} {} = {}", c.edge_name(*e), a.names[*y], a.names[*z]);
        }
    }
    // the regular line for R = ∅ ends in "= "; trim trailing spaces
    s.lines().map(str::trim_end).collect::<Vec<_>>().join("\n") + "\n"
}
