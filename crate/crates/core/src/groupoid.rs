//! Finite discrete groupoids with explicit composition tables.
//!
//! Every table is stored in full, so the axiom checks in [`FiniteGroupoid::validate`]
//! are exhaustive: associativity is tested on every composable triple.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjectId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrowRecord {
    pub name: String,
    pub src: ObjectId,
    pub rng: ObjectId,
}

/// Axioms checked by [`FiniteGroupoid::validate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    Identifiers,
    Closure,
    Associativity,
    Unit,
    Inverse,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Identifiers => "identifiers",
            Axiom::Closure => "closure",
            Axiom::Associativity => "associativity",
            Axiom::Unit => "unit",
            Axiom::Inverse => "inverse axiom",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.axiom, self.witness)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupoidError {
    #[error("duplicate identifier `{0}`")]
    Duplicate(String),
    #[error("unknown identifier `{0}`")]
    Unknown(String),
    #[error("multiplication table is not a group: {0}")]
    NotAGroup(Violation),
    #[error("groupoid fails validation: {0}")]
    Invalid(Violation),
}

/// A finite groupoid given by explicit tables.
///
/// The tables may be inconsistent; construction through [`FiniteGroupoid::from_tables`]
/// does not check the axioms, [`FiniteGroupoid::validate`] does.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    objects: Vec<String>,
    arrows: Vec<ArrowRecord>,
    compose: HashMap<(usize, usize), usize>,
    inv: Vec<Option<usize>>,
    unit: Vec<Option<usize>>,
}

fn check_unique<'a>(names: impl IntoIterator<Item = &'a str>) -> Result<(), GroupoidError> {
    let mut seen = BTreeSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(GroupoidError::Duplicate(n.to_string()));
        }
    }
    Ok(())
}

impl FiniteGroupoid {
    /// The groupoid with object set `names` and identity arrows only.
    pub fn set_groupoid<S: AsRef<str>>(names: &[S]) -> Result<Self, GroupoidError> {
        check_unique(names.iter().map(|s| s.as_ref()))?;
        let objects: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let arrows = objects
            .iter()
            .enumerate()
            .map(|(i, n)| ArrowRecord { name: n.clone(), src: ObjectId(i), rng: ObjectId(i) })
            .collect();
        let compose = (0..objects.len()).map(|i| ((i, i), i)).collect();
        let n = objects.len();
        Ok(Self { objects, arrows, compose, inv: (0..n).map(Some).collect(), unit: (0..n).map(Some).collect() })
    }

    /// A group as a one-object groupoid. `table[i][j]` is the index of `elements[i] * elements[j]`.
    ///
    /// The table is validated; the error names the first failed group axiom.
    pub fn group<S: AsRef<str>>(elements: &[S], table: &[Vec<usize>]) -> Result<Self, GroupoidError> {
        check_unique(elements.iter().map(|s| s.as_ref()))?;
        let n = elements.len();
        let closure_fail = |w: String| GroupoidError::NotAGroup(Violation { axiom: Axiom::Closure, witness: w });
        if n == 0 {
            return Err(closure_fail("empty element set".into()));
        }
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(closure_fail(format!("table is not {n}x{n}")));
        }
        if let Some((i, j)) =
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| table[i][j] >= n)
        {
            return Err(closure_fail(format!("{} * {} is out of range", elements[i].as_ref(), elements[j].as_ref())));
        }
        let name = |i: usize| elements[i].as_ref().to_string();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(GroupoidError::NotAGroup(Violation {
                            axiom: Axiom::Associativity,
                            witness: format!("({} {} {})", name(a), name(b), name(c)),
                        }));
                    }
                }
            }
        }
        let identity = (0..n).find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a)).ok_or_else(|| {
            GroupoidError::NotAGroup(Violation { axiom: Axiom::Unit, witness: "no two-sided identity".into() })
        })?;
        let mut inv = Vec::with_capacity(n);
        for a in 0..n {
            match (0..n).find(|&b| table[a][b] == identity && table[b][a] == identity) {
                Some(b) => inv.push(Some(b)),
                None => {
                    return Err(GroupoidError::NotAGroup(Violation {
                        axiom: Axiom::Inverse,
                        witness: format!("{} has no inverse", name(a)),
                    }))
                }
            }
        }
        let arrows = (0..n).map(|i| ArrowRecord { name: name(i), src: ObjectId(0), rng: ObjectId(0) }).collect();
        let compose = (0..n).flat_map(|i| (0..n).map(move |j| ((i, j), table[i][j]))).collect();
        Ok(Self { objects: vec!["o".to_string()], arrows, compose, inv, unit: vec![Some(identity)] })
    }

    /// Raw constructor; tables are taken as given and may violate the axioms.
    pub fn from_tables(
        objects: Vec<String>,
        arrows: Vec<ArrowRecord>,
        compose: HashMap<(usize, usize), usize>,
        inv: Vec<Option<usize>>,
        unit: Vec<Option<usize>>,
    ) -> Result<Self, GroupoidError> {
        check_unique(objects.iter().map(String::as_str))?;
        check_unique(arrows.iter().map(|a| a.name.as_str()))?;
        Ok(Self { objects, arrows, compose, inv, unit })
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrows(&self) -> &[ArrowRecord] {
        &self.arrows
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn object_index(&self, name: &str) -> Option<ObjectId> {
        self.objects.iter().position(|o| o == name).map(ObjectId)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn src(&self, g: usize) -> ObjectId {
        self.arrows[g].src
    }

    pub fn rng(&self, g: usize) -> ObjectId {
        self.arrows[g].rng
    }

    /// `g ∘ h`, defined when `src(g) = rng(h)` and the table has an entry.
    pub fn compose(&self, g: usize, h: usize) -> Option<usize> {
        if self.src(g) != self.rng(h) {
            return None;
        }
        self.compose.get(&(g, h)).copied()
    }

    pub fn inverse(&self, g: usize) -> Option<usize> {
        self.inv.get(g).copied().flatten()
    }

    pub fn unit(&self, v: ObjectId) -> Option<usize> {
        self.unit.get(v.0).copied().flatten()
    }

    pub fn is_unit(&self, g: usize) -> bool {
        self.unit.contains(&Some(g))
    }

    /// Composition entries as `(g, h, g∘h)`, sorted.
    pub fn composition_entries(&self) -> Vec<(usize, usize, usize)> {
        let mut v: Vec<_> = self.compose.iter().map(|(&(g, h), &k)| (g, h, k)).collect();
        v.sort_unstable();
        v
    }

    /// Overwrite one composition entry. Used by mutation tests and fixtures.
    pub fn set_composition(&mut self, g: usize, h: usize, result: usize) {
        self.compose.insert((g, h), result);
    }

    pub fn remove_unit(&mut self, v: ObjectId) {
        if let Some(u) = self.unit.get_mut(v.0) {
            *u = None;
        }
    }

    pub fn set_inverse(&mut self, g: usize, inv: Option<usize>) {
        self.inv[g] = inv;
    }

    /// All axiom violations, each with a witness. Empty iff the tables form a groupoid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let nm = |g: usize| self.arrows[g].name.as_str();
        let n = self.arrows.len();
        for a in &self.arrows {
            if a.src.0 >= self.objects.len() || a.rng.0 >= self.objects.len() {
                out.push(Violation { axiom: Axiom::Identifiers, witness: format!("arrow {} has unknown endpoint", a.name) });
            }
        }
        if !out.is_empty() {
            return out;
        }
        for g in 0..n {
            for h in 0..n {
                let composable = self.src(g) == self.rng(h);
                match (composable, self.compose.get(&(g, h))) {
                    (true, None) => out.push(Violation {
                        axiom: Axiom::Closure,
                        witness: format!("{} * {} undefined", nm(g), nm(h)),
                    }),
                    (false, Some(_)) => out.push(Violation {
                        axiom: Axiom::Closure,
                        witness: format!("{} * {} defined but not composable", nm(g), nm(h)),
                    }),
                    (true, Some(&k)) => {
                        if k >= n || self.src(k) != self.src(h) || self.rng(k) != self.rng(g) {
                            out.push(Violation {
                                axiom: Axiom::Closure,
                                witness: format!("{} * {} has wrong endpoints", nm(g), nm(h)),
                            });
                        }
                    }
                    (false, None) => {}
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        for f in 0..n {
            for g in 0..n {
                let Some(fg) = self.compose(f, g) else { continue };
                for h in 0..n {
                    let Some(gh) = self.compose(g, h) else { continue };
                    if self.compose(fg, h) != self.compose(f, gh) {
                        out.push(Violation {
                            axiom: Axiom::Associativity,
                            witness: format!("({} {} {})", nm(f), nm(g), nm(h)),
                        });
                    }
                }
            }
        }
        for (v, name) in self.objects.iter().enumerate() {
            let Some(u) = self.unit(ObjectId(v)) else {
                out.push(Violation { axiom: Axiom::Unit, witness: format!("missing unit entry for {name}") });
                continue;
            };
            if u >= n || self.src(u) != ObjectId(v) || self.rng(u) != ObjectId(v) {
                out.push(Violation { axiom: Axiom::Unit, witness: format!("unit of {name} has wrong endpoints") });
                continue;
            }
            for g in 0..n {
                if self.rng(g) == ObjectId(v) && self.compose(u, g) != Some(g) {
                    out.push(Violation { axiom: Axiom::Unit, witness: format!("{} * {} != {}", nm(u), nm(g), nm(g)) });
                }
                if self.src(g) == ObjectId(v) && self.compose(g, u) != Some(g) {
                    out.push(Violation { axiom: Axiom::Unit, witness: format!("{} * {} != {}", nm(g), nm(u), nm(g)) });
                }
            }
        }
        for g in 0..n {
            let ok = self.inverse(g).filter(|&i| i < n).is_some_and(|i| {
                self.compose(i, g).is_some()
                    && self.compose(i, g) == self.unit(self.src(g))
                    && self.compose(g, i) == self.unit(self.rng(g))
            });
            if !ok {
                out.push(Violation { axiom: Axiom::Inverse, witness: format!("inverse of {} fails", nm(g)) });
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> FiniteGroupoid {
        let names: Vec<String> = (0..n).map(|i| format!("g{i}")).collect();
        let table: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        FiniteGroupoid::group(&names, &table).unwrap()
    }

    #[test]
    fn set_groupoid_counts() {
        let g = FiniteGroupoid::set_groupoid(&["v"]).unwrap();
        assert_eq!((g.num_objects(), g.num_arrows()), (1, 1));
        let g = FiniteGroupoid::set_groupoid::<&str>(&[]).unwrap();
        assert_eq!((g.num_objects(), g.num_arrows()), (0, 0));
        assert!(g.validate().is_empty());
        let g = FiniteGroupoid::set_groupoid(&["u", "w"]).unwrap();
        assert_eq!((g.num_objects(), g.num_arrows()), (2, 2));
        assert!(g.validate().is_empty());
    }

    #[test]
    fn duplicate_objects_rejected() {
        assert_eq!(FiniteGroupoid::set_groupoid(&["v", "v"]), Err(GroupoidError::Duplicate("v".into())));
    }

    #[test]
    fn cyclic_groups_validate() {
        let z2 = cyclic(2);
        assert_eq!((z2.num_objects(), z2.num_arrows()), (1, 2));
        assert!(z2.validate().is_empty());
        let z4 = cyclic(4);
        let triples = (0..4)
            .flat_map(|a| (0..4).flat_map(move |b| (0..4).map(move |c| (a, b, c))))
            .filter(|&(a, b, c)| {
                let ab = z4.compose(a, b).unwrap();
                let bc = z4.compose(b, c).unwrap();
                z4.compose(ab, c) == z4.compose(a, bc)
            })
            .count();
        assert_eq!(triples, 64);
        assert!(z4.validate().is_empty());
    }

    #[test]
    fn broken_inverse_is_named() {
        // {e, a} with a*a = a is a monoid without inverse for a
        let err = FiniteGroupoid::group(&["e", "a"], &[vec![0, 1], vec![1, 1]]).unwrap_err();
        assert!(err.to_string().contains("inverse axiom"), "{err}");
    }

    #[test]
    fn tampered_table_reports_associativity() {
        let mut z3 = cyclic(3);
        // g1*g1 = g0 instead of g2: closure and unit still hold
        z3.set_composition(1, 1, 0);
        let report = z3.validate();
        assert!(report.iter().any(|v| v.axiom == Axiom::Associativity), "{report:?}");
        assert_eq!(z3.validate(), report);
    }

    #[test]
    fn missing_unit_reported() {
        let mut g = FiniteGroupoid::set_groupoid(&["v", "w"]).unwrap();
        g.remove_unit(ObjectId(1));
        let report = g.validate();
        assert!(report.iter().any(|v| v.axiom == Axiom::Unit && v.to_string().contains("unit")));
    }
}
