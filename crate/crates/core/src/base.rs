//! The base groupoid `G`: either a finite groupoid or a presented group.

use std::fmt;

use crate::groupoid::{FiniteGroupoid, ObjectId};
use crate::presented::{Letter, PresentedGroup, Word};

/// An arrow of the base. Finite arrows are table indices, presented-group
/// arrows are normalized words.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Arrow {
    Index(usize),
    Word(Word),
}

impl Arrow {
    /// Word length for presented groups, `0` for finite arrows.
    pub fn word_len(&self) -> usize {
        match self {
            Arrow::Index(_) => 0,
            Arrow::Word(w) => w.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Base {
    Finite(FiniteGroupoid),
    Presented(PresentedGroup),
}

impl fmt::Display for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arrow::Index(i) => write!(f, "#{i}"),
            Arrow::Word(w) => write!(f, "{w:?}"),
        }
    }
}

impl Base {
    pub fn num_objects(&self) -> usize {
        match self {
            Base::Finite(g) => g.num_objects(),
            Base::Presented(_) => 1,
        }
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjectId> {
        (0..self.num_objects()).map(ObjectId)
    }

    pub fn object_name(&self, v: ObjectId) -> String {
        match self {
            Base::Finite(g) => g.objects()[v.0].clone(),
            Base::Presented(_) => "o".to_string(),
        }
    }

    pub fn object_index(&self, name: &str) -> Option<ObjectId> {
        match self {
            Base::Finite(g) => g.object_index(name),
            Base::Presented(_) => (name == "o").then_some(ObjectId(0)),
        }
    }

    /// True when every arrow is a unit, i.e. the base is just a set of vertices.
    pub fn is_trivial(&self) -> bool {
        match self {
            Base::Finite(g) => (0..g.num_arrows()).all(|a| g.is_unit(a)),
            Base::Presented(p) => p.generators().is_empty(),
        }
    }

    pub fn src(&self, g: &Arrow) -> ObjectId {
        match (self, g) {
            (Base::Finite(b), Arrow::Index(i)) => b.src(*i),
            _ => ObjectId(0),
        }
    }

    pub fn rng(&self, g: &Arrow) -> ObjectId {
        match (self, g) {
            (Base::Finite(b), Arrow::Index(i)) => b.rng(*i),
            _ => ObjectId(0),
        }
    }

    pub fn unit(&self, v: ObjectId) -> Arrow {
        match self {
            Base::Finite(b) => Arrow::Index(b.unit(v).expect("validated groupoid has units")),
            Base::Presented(_) => Arrow::Word(Vec::new()),
        }
    }

    pub fn is_unit(&self, g: &Arrow) -> bool {
        match (self, g) {
            (Base::Finite(b), Arrow::Index(i)) => b.is_unit(*i),
            (_, Arrow::Word(w)) => w.is_empty(),
            _ => false,
        }
    }

    /// `g h`, or `None` when `src(g) != rng(h)`.
    pub fn compose(&self, g: &Arrow, h: &Arrow) -> Option<Arrow> {
        match (self, g, h) {
            (Base::Finite(b), Arrow::Index(x), Arrow::Index(y)) => b.compose(*x, *y).map(Arrow::Index),
            (Base::Presented(p), Arrow::Word(x), Arrow::Word(y)) => Some(Arrow::Word(p.multiply(x, y))),
            _ => None,
        }
    }

    pub fn inverse(&self, g: &Arrow) -> Arrow {
        match (self, g) {
            (Base::Finite(b), Arrow::Index(x)) => Arrow::Index(b.inverse(*x).expect("validated groupoid has inverses")),
            (Base::Presented(p), Arrow::Word(w)) => Arrow::Word(p.inverse(w)),
            _ => g.clone(),
        }
    }

    /// All arrows of a finite base, or all normal forms of word length `<= wordcap`.
    pub fn arrows_up_to(&self, wordcap: usize) -> Vec<Arrow> {
        match self {
            Base::Finite(b) => (0..b.num_arrows()).map(Arrow::Index).collect(),
            Base::Presented(p) => p.elements_up_to(wordcap).into_iter().map(Arrow::Word).collect(),
        }
    }

    /// Generating arrows: every arrow of a finite base, the letters of a presented group.
    pub fn generators(&self) -> Vec<Arrow> {
        match self {
            Base::Finite(b) => (0..b.num_arrows()).map(Arrow::Index).collect(),
            Base::Presented(p) => p.letters().into_iter().map(|l| Arrow::Word(vec![l])).collect(),
        }
    }

    pub fn arrow_name(&self, g: &Arrow) -> String {
        match (self, g) {
            (Base::Finite(b), Arrow::Index(i)) => b.arrows()[*i].name.clone(),
            (Base::Presented(p), Arrow::Word(w)) => p.word_name(w),
            _ => g.to_string(),
        }
    }

    pub fn parse_arrow(&self, s: &str) -> Option<Arrow> {
        match self {
            Base::Finite(b) => b.arrow_index(s.trim()).map(Arrow::Index),
            Base::Presented(p) => p.parse_word(s).map(Arrow::Word),
        }
    }

    pub fn letter_arrow(l: Letter) -> Arrow {
        Arrow::Word(vec![l])
    }
}
