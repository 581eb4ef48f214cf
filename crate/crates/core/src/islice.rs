//! The inverse semigroup `I(G,X)` generated by singleton slices, in normal form
//! `Θ(p)·Θ(g)·Θ(q)^*`.

use std::fmt;

use thiserror::Error;

use crate::base::Arrow;
use crate::correspondence::{Correspondence, CorrespondenceError, EdgeId, Path, XPoint};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IsElement {
    Zero,
    /// The unit of `I`. Over a one-object base it is identified with `Θ(e)`.
    One,
    Triple { p: Path, g: Arrow, q: Path },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IsError {
    #[error("malformed element `{0}`")]
    Syntax(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("src(p) != rng(g) or src(q) != src(g) in `{0}`")]
    Mismatch(String),
    #[error(transparent)]
    Path(#[from] CorrespondenceError),
}

impl IsElement {
    /// Builds `(p, g, q)` after checking `src(p) = rng(g)` and `src(q) = src(g)`.
    pub fn triple(c: &Correspondence, p: Path, g: Arrow, q: Path) -> Result<Self, IsError> {
        let b = c.base();
        if c.path_src(&p) != b.rng(&g) || c.path_src(&q) != b.src(&g) {
            return Err(IsError::Mismatch(format!("{} * {} * {}^", c.path_name(&p), b.arrow_name(&g), c.path_name(&q))));
        }
        Ok(IsElement::Triple { p, g, q })
    }

    /// `Θ(g)` for an arrow of the base.
    pub fn arrow(c: &Correspondence, g: Arrow) -> Self {
        let b = c.base();
        IsElement::Triple { p: Path::vertex(b.rng(&g)), q: Path::vertex(b.src(&g)), g }
    }

    /// `Θ(x)` for a point `x = (e, h)` of `X`.
    pub fn point(c: &Correspondence, x: &XPoint) -> Self {
        let b = c.base();
        let p = c.path_from_edges(&[x.edge]).expect("single edge");
        IsElement::Triple { p, q: Path::vertex(b.src(&x.twist)), g: x.twist.clone() }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, IsElement::Zero)
    }
}

/// Over a one-object base the unit of `I` is `Θ(e)`; elsewhere `One` stays formal.
pub fn canonical(c: &Correspondence, s: IsElement) -> IsElement {
    match s {
        IsElement::One if c.base().num_objects() == 1 => {
            IsElement::arrow(c, c.base().unit(crate::groupoid::ObjectId(0)))
        }
        s => s,
    }
}

/// The normal-form product, using the prefix rule and the cocycle.
pub fn multiply(c: &Correspondence, s: &IsElement, t: &IsElement) -> IsElement {
    let b = c.base();
    match (s, t) {
        (IsElement::Zero, _) | (_, IsElement::Zero) => IsElement::Zero,
        (IsElement::One, x) | (x, IsElement::One) => x.clone(),
        (IsElement::Triple { p, g, q }, IsElement::Triple { p: p2, g: g2, q: q2 }) => {
            if let Some(u) = c.strip_prefix(p2, q) {
                // q·u = p2: absorb u into the left factor
                let (gu, gr) = c.act_on_path(g, &u).expect("composable by construction");
                let p_new = c.concat(p, &gu).expect("src(p) = rng(g)");
                let g_new = b.compose(&gr, g2).expect("src(g|_u) = src(p2) = rng(g2)");
                IsElement::Triple { p: p_new, g: g_new, q: q2.clone() }
            } else if let Some(u) = c.strip_prefix(q, p2) {
                // q = p2·u: absorb u into the right factor through g2^-1
                let g2i = b.inverse(g2);
                let (v, r) = c.act_on_path(&g2i, &u).expect("composable by construction");
                let g_new = b.compose(g, &b.inverse(&r)).expect("src(g) = rng(r^-1)");
                let q_new = c.concat(q2, &v).expect("src(q2) = rng(v)");
                IsElement::Triple { p: p.clone(), g: g_new, q: q_new }
            } else {
                IsElement::Zero
            }
        }
    }
}

pub fn adjoint(c: &Correspondence, s: &IsElement) -> IsElement {
    match s {
        IsElement::Triple { p, g, q } => IsElement::Triple { p: q.clone(), g: c.base().inverse(g), q: p.clone() },
        other => other.clone(),
    }
}

pub fn is_idempotent(c: &Correspondence, s: &IsElement) -> bool {
    multiply(c, s, s) == *s
}

/// `s <= t` iff `s = t·(s^* s)`.
pub fn leq(c: &Correspondence, s: &IsElement, t: &IsElement) -> bool {
    let e = multiply(c, &adjoint(c, s), s);
    canonical(c, multiply(c, t, &e)) == canonical(c, s.clone())
}

pub fn display(c: &Correspondence, s: &IsElement) -> String {
    match s {
        IsElement::Zero => "0".to_string(),
        IsElement::One => "1".to_string(),
        IsElement::Triple { p, g, q } => {
            format!("{} * {} * {}^", c.path_name(p), c.base().arrow_name(g), c.path_name(q))
        }
    }
}

/// Parses `p * g * q^`, `0` or `1`.
pub fn parse(c: &Correspondence, s: &str) -> Result<IsElement, IsError> {
    let s = s.trim();
    match s {
        "0" => return Ok(IsElement::Zero),
        "1" => return Ok(IsElement::One),
        _ => {}
    }
    let parts: Vec<&str> = s.split('*').map(str::trim).collect();
    let [p, g, q] = parts[..] else {
        return Err(IsError::Syntax(s.to_string()));
    };
    let q = q.strip_suffix('^').ok_or_else(|| IsError::Syntax(s.to_string()))?.trim();
    let p = c.parse_path(p)?;
    let q = c.parse_path(q)?;
    let g = c.base().parse_arrow(g).ok_or_else(|| IsError::UnknownArrow(g.to_string()))?;
    IsElement::triple(c, p, g, q)
}

/// All triples with `|p|, |q| <= len` and twist of word length `<= wordcap`, plus `0` and,
/// over several objects, the formal unit.
pub fn bounded_elements(c: &Correspondence, len: usize, wordcap: usize) -> Vec<IsElement> {
    let b = c.base();
    let paths: Vec<Path> = (0..=len).flat_map(|k| c.paths_of_length(k)).collect();
    let mut out = vec![IsElement::Zero];
    if b.num_objects() != 1 {
        out.push(IsElement::One);
    }
    for g in b.arrows_up_to(wordcap) {
        for p in paths.iter().filter(|p| c.path_src(p) == b.rng(&g)) {
            for q in paths.iter().filter(|q| c.path_src(q) == b.src(&g)) {
                out.push(IsElement::Triple { p: p.clone(), g: g.clone(), q: q.clone() });
            }
        }
    }
    out
}

/// A generator symbol for words in `I(G,X)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    /// `Θ(g)`; `Θ(g)^*` is `Θ(g^-1)`.
    Arrow(Arrow),
    Point(XPoint),
    PointAdj(XPoint),
}

impl Generator {
    pub fn element(&self, c: &Correspondence) -> IsElement {
        match self {
            Generator::Arrow(g) => IsElement::arrow(c, g.clone()),
            Generator::Point(x) => IsElement::point(c, x),
            Generator::PointAdj(x) => adjoint(c, &IsElement::point(c, x)),
        }
    }

    pub fn name(&self, c: &Correspondence) -> String {
        match self {
            Generator::Arrow(g) => format!("Θ({})", c.base().arrow_name(g)),
            Generator::Point(x) => format!("Θ{}", c.point_name(x)),
            Generator::PointAdj(x) => format!("Θ{}*", c.point_name(x)),
        }
    }
}

/// `Θ(g)`, `Θ(g)^*` for arrows of word length `<= wordcap`, and `Θ(x)`, `Θ(x)^*` for the
/// points of `X` with such twists. Duplicates (`Θ(g)^* = Θ(g^-1)`) are kept, since words are
/// formed over symbols.
pub fn generators(c: &Correspondence, wordcap: usize) -> Vec<Generator> {
    let b = c.base();
    let mut out = Vec::new();
    for g in b.arrows_up_to(wordcap) {
        out.push(Generator::Arrow(g.clone()));
        out.push(Generator::Arrow(b.inverse(&g)));
    }
    for x in c.points_up_to(wordcap) {
        out.push(Generator::Point(x.clone()));
        out.push(Generator::PointAdj(x));
    }
    out
}

/// Product of a word computed with [`multiply`].
pub fn evaluate(c: &Correspondence, word: &[Generator]) -> IsElement {
    let mut acc = IsElement::One;
    for l in word {
        acc = multiply(c, &acc, &l.element(c));
    }
    canonical(c, acc)
}

/// Which relations the rewriting oracle may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleVariant {
    /// `Θ(x)^*Θ(y) = Θ(⟨x|y⟩)` for all points of `X`.
    Bracket,
    /// Twists are split off first; only `Θ(e)^*Θ(f) = δ_{e,f} Θ(s(e))` for `e, f ∈ F` is used.
    EdgeOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Sym {
    G(Arrow),
    P(XPoint),
    A(XPoint),
}

struct Rewriter<'a> {
    c: &'a Correspondence,
    variant: OracleVariant,
    stack: Vec<Sym>,
    zero: bool,
}

impl<'a> Rewriter<'a> {
    fn unit_point(&self, e: EdgeId) -> XPoint {
        XPoint { edge: e, twist: self.c.base().unit(self.c.edge(e).src) }
    }

    fn push(&mut self, s: Sym) {
        if self.zero {
            return;
        }
        let Some(top) = self.stack.last().cloned() else {
            self.stack.push(s);
            return;
        };
        match self.variant {
            OracleVariant::Bracket => self.rule_bracket(top, s),
            OracleVariant::EdgeOnly => self.rule_edge(top, s),
        }
    }

    fn fail(&mut self) {
        self.zero = true;
        self.stack.clear();
    }

    /// Rules with twisted points: `Pos(x)G(g) -> Pos(xg)`, `G(g)Pos(x) -> Pos(g·x)`,
    /// `Adj(x)G(g) -> Adj(g^-1·x)`, `G(g)Adj(x) -> Adj(x g^-1)`, `Adj(x)Pos(y) -> G(⟨x|y⟩)`.
    fn rule_bracket(&mut self, top: Sym, s: Sym) {
        let c = self.c;
        let b = c.base();
        let src_pt = |x: &XPoint| b.src(&x.twist);
        let rng_pt = |x: &XPoint| c.edge(x.edge).rng;
        match (top, s) {
            (Sym::G(g), Sym::G(h)) => match b.compose(&g, &h) {
                Some(gh) => {
                    self.stack.pop();
                    self.push(Sym::G(gh));
                }
                None => self.fail(),
            },
            (Sym::G(g), Sym::P(x)) => match c.act_on_point(&g, &x) {
                Ok(y) => {
                    self.stack.pop();
                    self.push(Sym::P(y));
                }
                Err(_) => self.fail(),
            },
            (Sym::G(g), Sym::A(x)) => match c.right_act(&x, &b.inverse(&g)) {
                Some(y) => {
                    self.stack.pop();
                    self.push(Sym::A(y));
                }
                None => self.fail(),
            },
            (Sym::P(x), Sym::G(g)) => match c.right_act(&x, &g) {
                Some(y) => {
                    self.stack.pop();
                    self.push(Sym::P(y));
                }
                None => self.fail(),
            },
            (Sym::A(x), Sym::G(g)) => match c.act_on_point(&b.inverse(&g), &x) {
                Ok(y) if b.rng(&g) == rng_pt(&x) => {
                    self.stack.pop();
                    self.push(Sym::A(y));
                }
                _ => self.fail(),
            },
            (Sym::A(x), Sym::P(y)) => match c.bracket(&x, &y) {
                Ok(Some(h)) => {
                    self.stack.pop();
                    self.push(Sym::G(h));
                }
                _ => self.fail(),
            },
            (Sym::P(x), Sym::P(y)) => {
                if src_pt(&x) != rng_pt(&y) {
                    return self.fail();
                }
                if b.is_unit(&x.twist) {
                    self.stack.push(Sym::P(y));
                } else {
                    let hy = c.act_on_point(&x.twist, &y).expect("checked");
                    self.stack.pop();
                    self.push(Sym::P(self.unit_point(x.edge)));
                    self.push(Sym::P(hy));
                }
            }
            (Sym::A(x), Sym::A(y)) => {
                // x^* y^* = (y x)^*
                if rng_pt(&x) != src_pt(&y) {
                    return self.fail();
                }
                if b.is_unit(&y.twist) {
                    self.stack.push(Sym::A(y));
                } else {
                    let kx = c.act_on_point(&y.twist, &x).expect("checked");
                    self.stack.pop();
                    self.push(Sym::A(kx));
                    self.push(Sym::A(self.unit_point(y.edge)));
                }
            }
            (Sym::P(x), Sym::A(y)) => {
                if src_pt(&x) != src_pt(&y) {
                    return self.fail();
                }
                self.stack.push(Sym::A(y));
            }
        }
    }

    /// Rules on untwisted edges: `G(g)P(e) -> P(g∘e)G(g|_e)`,
    /// `A(e)G(g) -> G((g^-1|_e)^-1)A(g^-1∘e)`, `A(e)P(f) -> δ_{e,f} G(s(e))`.
    fn rule_edge(&mut self, top: Sym, s: Sym) {
        let c = self.c;
        let b = c.base();
        match (top, s) {
            (Sym::G(g), Sym::G(h)) => match b.compose(&g, &h) {
                Some(gh) => {
                    self.stack.pop();
                    self.push(Sym::G(gh));
                }
                None => self.fail(),
            },
            (Sym::G(g), Sym::P(x)) => match c.act(&g, x.edge) {
                Ok((y, r)) => {
                    self.stack.pop();
                    self.push(Sym::P(self.unit_point(y)));
                    self.push(Sym::G(r));
                }
                Err(_) => self.fail(),
            },
            (Sym::A(x), Sym::G(g)) => {
                let gi = b.inverse(&g);
                match c.act(&gi, x.edge) {
                    Ok((y, r)) => {
                        self.stack.pop();
                        self.push(Sym::G(b.inverse(&r)));
                        self.push(Sym::A(self.unit_point(y)));
                    }
                    Err(_) => self.fail(),
                }
            }
            (Sym::A(x), Sym::P(y)) => {
                if x.edge == y.edge {
                    self.stack.pop();
                    self.push(Sym::G(b.unit(c.edge(x.edge).src)));
                } else {
                    self.fail();
                }
            }
            (top, s) => {
                let src_of = |t: &Sym| match t {
                    Sym::G(g) => b.src(g),
                    Sym::P(x) => c.edge(x.edge).src,
                    Sym::A(x) => c.edge(x.edge).rng,
                };
                let rng_of = |t: &Sym| match t {
                    Sym::G(g) => b.rng(g),
                    Sym::P(x) => c.edge(x.edge).rng,
                    Sym::A(x) => c.edge(x.edge).src,
                };
                if src_of(&top) == rng_of(&s) {
                    self.stack.push(s);
                } else {
                    self.fail();
                }
            }
        }
    }

    fn finish(self) -> IsElement {
        let c = self.c;
        let b = c.base();
        if self.zero {
            return IsElement::Zero;
        }
        if self.stack.is_empty() {
            return canonical(c, IsElement::One);
        }
        let mut p_edges = Vec::new();
        let mut q_edges = Vec::new();
        let mut g: Option<Arrow> = None;
        let mul = |acc: Option<Arrow>, h: Arrow| match acc {
            None => Some(h),
            Some(a) => Some(b.compose(&a, &h).expect("normal form is composable")),
        };
        for s in self.stack {
            match s {
                Sym::P(x) => {
                    p_edges.push(x.edge);
                    if !b.is_unit(&x.twist) {
                        g = mul(g.take(), x.twist);
                    }
                }
                Sym::G(h) => g = mul(g.take(), h),
                Sym::A(x) => {
                    q_edges.push(x.edge);
                    if !b.is_unit(&x.twist) {
                        g = mul(g.take(), b.inverse(&x.twist));
                    }
                }
            }
        }
        q_edges.reverse();
        let p = if p_edges.is_empty() { None } else { Some(c.path_from_edges(&p_edges).expect("normal form")) };
        let q = if q_edges.is_empty() { None } else { Some(c.path_from_edges(&q_edges).expect("normal form")) };
        let g = g.unwrap_or_else(|| {
            let v = p.as_ref().map(|p| c.path_src(p)).or_else(|| q.as_ref().map(|q| c.path_src(q))).expect("nonempty");
            b.unit(v)
        });
        let p = p.unwrap_or_else(|| Path::vertex(b.rng(&g)));
        let q = q.unwrap_or_else(|| Path::vertex(b.src(&g)));
        IsElement::Triple { p, g, q }
    }
}

/// Reduces a word letter by letter with a stack rewriting system built from the defining
/// relations only. Independent of [`multiply`].
pub fn reduce_word(c: &Correspondence, word: &[Generator], variant: OracleVariant) -> IsElement {
    let mut rw = Rewriter { c, variant, stack: Vec::new(), zero: false };
    let b = c.base();
    for l in word {
        match (l, variant) {
            (Generator::Arrow(g), _) => rw.push(Sym::G(g.clone())),
            (Generator::Point(x), OracleVariant::Bracket) => rw.push(Sym::P(x.clone())),
            (Generator::PointAdj(x), OracleVariant::Bracket) => rw.push(Sym::A(x.clone())),
            (Generator::Point(x), OracleVariant::EdgeOnly) => {
                let e = rw.unit_point(x.edge);
                rw.push(Sym::P(e));
                rw.push(Sym::G(x.twist.clone()));
            }
            (Generator::PointAdj(x), OracleVariant::EdgeOnly) => {
                let e = rw.unit_point(x.edge);
                rw.push(Sym::G(b.inverse(&x.twist)));
                rw.push(Sym::A(e));
            }
        }
    }
    rw.finish()
}

/// Calls `f` on every word of length `1..=max_len` over `gens`, in lexicographic order.
pub fn for_each_word<F: FnMut(&[Generator])>(gens: &[Generator], max_len: usize, mut f: F) {
    let mut idx: Vec<usize> = Vec::new();
    let mut word: Vec<Generator> = Vec::new();
    for len in 1..=max_len {
        idx.clear();
        idx.resize(len, 0);
        if gens.is_empty() {
            return;
        }
        loop {
            word.clear();
            word.extend(idx.iter().map(|&i| gens[i].clone()));
            f(&word);
            let mut k = len;
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < gens.len() {
                    break;
                }
                idx[k] = 0;
                if k == 0 {
                    k = usize::MAX;
                    break;
                }
            }
            if k == usize::MAX {
                break;
            }
        }
    }
}

impl fmt::Display for OracleVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OracleVariant::Bracket => "bracket",
            OracleVariant::EdgeOnly => "edge-only",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn el(c: &Correspondence, s: &str) -> IsElement {
        parse(c, s).unwrap()
    }

    #[test]
    fn graph_prefix_absorption() {
        let o2 = fixtures::o_n(2);
        let s = el(&o2, "a * v * b^");
        let t = el(&o2, "ba * v * a^");
        assert_eq!(multiply(&o2, &s, &t), el(&o2, "aa * v * a^"));
        assert_eq!(multiply(&o2, &el(&o2, "a * v * @v^"), &el(&o2, "b * v * @v^")), el(&o2, "ab * v * @v^"));
        assert_eq!(multiply(&o2, &el(&o2, "@v * v * a^"), &el(&o2, "b * v * @v^")), IsElement::Zero);
    }

    #[test]
    fn odometer_product() {
        let od = fixtures::odometer();
        let s = el(&od, "@o * z * @o^");
        let t = el(&od, "0 * e * @o^");
        assert_eq!(multiply(&od, &s, &t), el(&od, "1 * e * @o^"));
    }

    #[test]
    fn adjoints() {
        let o2 = fixtures::o_n(2);
        let id = el(&o2, "ab * v * ab^");
        assert_eq!(adjoint(&o2, &id), id);
        assert_eq!(adjoint(&o2, &el(&o2, "a * v * b^")), el(&o2, "b * v * a^"));
        let od = fixtures::odometer();
        assert_eq!(adjoint(&od, &el(&od, "@o * z * @o^")), el(&od, "@o * z^-1 * @o^"));
    }

    #[test]
    fn idempotents_and_order() {
        let o2 = fixtures::o_n(2);
        assert!(is_idempotent(&o2, &el(&o2, "a * v * a^")));
        assert!(leq(&o2, &el(&o2, "ab * v * ab^"), &el(&o2, "a * v * a^")));
        assert!(!leq(&o2, &el(&o2, "a * v * a^"), &el(&o2, "ab * v * ab^")));
        let od = fixtures::odometer();
        assert!(!is_idempotent(&od, &el(&od, "@o * z * @o^")));
    }

    #[test]
    fn display_round_trip() {
        for (_, c) in fixtures::all() {
            for s in bounded_elements(&c, 2, 1) {
                assert_eq!(parse(&c, &display(&c, &s)).unwrap(), s, "{}", display(&c, &s));
            }
        }
    }

    #[test]
    fn parse_rejects_mismatch() {
        let s = fixtures::single_edge();
        assert!(matches!(parse(&s, "e1 * v * @v^"), Err(IsError::Mismatch(_))));
        assert!(parse(&s, "e1 * w").is_err());
    }

    #[test]
    fn oracle_examples() {
        let o2 = fixtures::o_n(2);
        let v = o2.base().unit(crate::groupoid::ObjectId(0));
        let a = XPoint { edge: EdgeId(0), twist: v.clone() };
        let b = XPoint { edge: EdgeId(1), twist: v };
        for variant in [OracleVariant::Bracket, OracleVariant::EdgeOnly] {
            let w = [Generator::Point(a.clone()), Generator::PointAdj(a.clone()), Generator::Point(a.clone())];
            assert_eq!(reduce_word(&o2, &w, variant), el(&o2, "a * v * @v^"));
            let w = [Generator::PointAdj(a.clone()), Generator::Point(b.clone())];
            assert_eq!(reduce_word(&o2, &w, variant), IsElement::Zero);
        }
        let od = fixtures::odometer();
        let z = od.base().parse_arrow("z").unwrap();
        let e = od.base().parse_arrow("e").unwrap();
        let w = [Generator::Arrow(z), Generator::Point(XPoint { edge: EdgeId(0), twist: e })];
        for variant in [OracleVariant::Bracket, OracleVariant::EdgeOnly] {
            assert_eq!(reduce_word(&od, &w, variant), el(&od, "1 * e * @o^"));
        }
    }

    #[test]
    fn oracles_agree_on_short_words() {
        for (name, c) in fixtures::all() {
            let gens = generators(&c, 1);
            for_each_word(&gens, 3, |w| {
                let direct = evaluate(&c, w);
                let names: Vec<String> = w.iter().map(|g| g.name(&c)).collect();
                assert_eq!(reduce_word(&c, w, OracleVariant::Bracket), direct, "{name}: {names:?}");
                assert_eq!(reduce_word(&c, w, OracleVariant::EdgeOnly), direct, "{name}: {names:?}");
            });
        }
    }

    #[test]
    fn word_enumeration_counts() {
        let o2 = fixtures::o_n(2);
        let gens = generators(&o2, 4);
        assert_eq!(gens.len(), 6);
        let mut n = 0;
        for_each_word(&gens, 3, |_| n += 1);
        assert_eq!(n, 6 + 36 + 216);
    }

    #[test]
    fn inverse_semigroup_axioms_small() {
        for (name, c) in fixtures::all() {
            let els = bounded_elements(&c, 1, 1);
            for s in &els {
                let ss = adjoint(&c, s);
                assert_eq!(adjoint(&c, &ss), *s);
                assert_eq!(canonical(&c, multiply(&c, &multiply(&c, s, &ss), s)), canonical(&c, s.clone()), "{name}");
                for t in &els {
                    let st = multiply(&c, s, t);
                    assert_eq!(adjoint(&c, &st), multiply(&c, &adjoint(&c, t), &ss));
                }
            }
        }
    }
}
