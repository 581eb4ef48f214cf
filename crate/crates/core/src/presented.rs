//! Finitely generated groups given by generators and a word normalizer.
//!
//! Used for infinite base groups such as the integers acting on the binary tree.
//! Elements are reduced words; equality is structural equality of normal forms.

use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn inv(self) -> Self {
        Letter { gen: self.gen, inverse: !self.inverse }
    }
}

pub type Word = Vec<Letter>;

pub type Normalizer = Arc<dyn Fn(&[Letter]) -> Word + Send + Sync>;

/// How words are brought into normal form.
#[derive(Clone)]
pub enum Normalization {
    /// Free reduction: cancel adjacent `x x^-1`.
    Free,
    /// Free abelian normal form: generators in index order with their exponents.
    Abelian,
    /// A caller-supplied normal form. It must be idempotent and respect the group law.
    Custom(Normalizer),
}

impl fmt::Debug for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Normalization::Free => f.write_str("Free"),
            Normalization::Abelian => f.write_str("Abelian"),
            Normalization::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl PartialEq for Normalization {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Normalization::Free, Normalization::Free) | (Normalization::Abelian, Normalization::Abelian) => true,
            (Normalization::Custom(a), Normalization::Custom(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

impl Eq for Normalization {}

pub fn free_reduce(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

fn abelian_normal(w: &[Letter], generators: usize) -> Word {
    let mut exp = vec![0i64; generators.max(w.iter().map(|l| l.gen + 1).max().unwrap_or(0))];
    for l in w {
        exp[l.gen] += if l.inverse { -1 } else { 1 };
    }
    let mut out = Vec::new();
    for (gen, &e) in exp.iter().enumerate() {
        let letter = Letter { gen, inverse: e < 0 };
        out.extend(std::iter::repeat(letter).take(e.unsigned_abs() as usize));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentedGroup {
    generators: Vec<String>,
    normalization: Normalization,
}

impl PresentedGroup {
    pub fn new(generators: Vec<String>, normalization: Normalization) -> Self {
        Self { generators, normalization }
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn normalization(&self) -> &Normalization {
        &self.normalization
    }

    pub fn normalize(&self, w: &[Letter]) -> Word {
        match &self.normalization {
            Normalization::Free => free_reduce(w),
            Normalization::Abelian => abelian_normal(w, self.generators.len()),
            Normalization::Custom(f) => f(w),
        }
    }

    pub fn multiply(&self, a: &[Letter], b: &[Letter]) -> Word {
        let mut w = a.to_vec();
        w.extend_from_slice(b);
        self.normalize(&w)
    }

    pub fn inverse(&self, a: &[Letter]) -> Word {
        let w: Word = a.iter().rev().map(|l| l.inv()).collect();
        self.normalize(&w)
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.generators.len())
            .flat_map(|gen| [Letter { gen, inverse: false }, Letter { gen, inverse: true }])
            .collect()
    }

    /// Distinct normal forms of all words of length at most `cap`, sorted by
    /// (length, word).
    pub fn elements_up_to(&self, cap: usize) -> Vec<Word> {
        let letters = self.letters();
        let mut seen = std::collections::BTreeSet::new();
        let mut frontier: Vec<Word> = vec![Vec::new()];
        seen.insert(Vec::new());
        for _ in 0..cap {
            let mut next = Vec::new();
            for w in &frontier {
                for &l in &letters {
                    let mut x = w.clone();
                    x.push(l);
                    let n = self.normalize(&x);
                    if seen.insert(n.clone()) {
                        next.push(n);
                    }
                }
            }
            frontier = next;
        }
        let mut out: Vec<Word> = seen.into_iter().collect();
        out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        out
    }

    pub fn letter_name(&self, l: Letter) -> String {
        let g = &self.generators[l.gen];
        if l.inverse {
            format!("{g}^-1")
        } else {
            g.clone()
        }
    }

    /// `e` for the identity, otherwise runs of equal letters written as powers, joined by `.`.
    pub fn word_name(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "e".to_string();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < w.len() {
            let mut j = i;
            while j < w.len() && w[j] == w[i] {
                j += 1;
            }
            let run = (j - i) as i64 * if w[i].inverse { -1 } else { 1 };
            let g = &self.generators[w[i].gen];
            parts.push(if run == 1 { g.clone() } else { format!("{g}^{run}") });
            i = j;
        }
        parts.join(".")
    }

    /// Inverse of [`PresentedGroup::word_name`]; the result is normalized.
    pub fn parse_word(&self, s: &str) -> Option<Word> {
        let s = s.trim();
        if s == "e" {
            return Some(Vec::new());
        }
        let mut w = Vec::new();
        for part in s.split('.') {
            let (name, power) = match part.split_once('^') {
                Some((n, p)) => (n, p.parse::<i64>().ok()?),
                None => (part, 1),
            };
            let gen = self.generators.iter().position(|g| g == name)?;
            let letter = Letter { gen, inverse: power < 0 };
            w.extend(std::iter::repeat(letter).take(power.unsigned_abs() as usize));
        }
        Some(self.normalize(&w))
    }
}
