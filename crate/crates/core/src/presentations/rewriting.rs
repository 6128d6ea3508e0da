//! Bounded noncommutative rewriting for path-algebra ideals.
//!
//! Paths are compared degree-lexicographically (length first, then the
//! arrow sequence). Each relation becomes a rule `leading path -> rest`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::quiver::{GradedQuiver, Path};
use crate::error::{Error, Result};
use crate::exactlin::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Key(Path);

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .order_key()
            .cmp(&other.0.order_key())
            .then(self.0.source.cmp(&other.0.source))
            .then(self.0.target.cmp(&other.0.target))
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A linear combination of parallel paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<F> {
    terms: BTreeMap<Key, F>,
}

impl<F: Scalar> Default for Poly<F> {
    fn default() -> Self {
        Poly { terms: BTreeMap::new() }
    }
}

impl<F: Scalar> Poly<F> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(p: Path) -> Self {
        let mut out = Self::zero();
        out.add_term(p, F::one());
        out
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (F, Path)>) -> Self {
        let mut out = Self::zero();
        for (c, p) in terms {
            out.add_term(p, c);
        }
        out
    }

    pub fn add_term(&mut self, p: Path, c: F) {
        if c.is_zero() {
            return;
        }
        let key = Key(p);
        let v = match self.terms.remove(&key) {
            Some(old) => old + c,
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(key, v);
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &F) {
        for (k, v) in &other.terms {
            self.add_term(k.0.clone(), v.clone() * c.clone());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &F)> {
        self.terms.iter().map(|(k, v)| (&k.0, v))
    }

    pub fn leading(&self) -> Option<(&Path, &F)> {
        self.terms.iter().next_back().map(|(k, v)| (&k.0, v))
    }

    /// `left * self * right` on the level of arrow words.
    fn wrap(&self, left: &[usize], right: &[usize], source: usize, target: usize) -> Self {
        let mut out = Self::zero();
        for (p, c) in self.terms() {
            let mut arrows = left.to_vec();
            arrows.extend_from_slice(&p.arrows);
            arrows.extend_from_slice(right);
            out.add_term(Path { source, target, arrows }, c.clone());
        }
        out
    }

    pub fn render(&self, quiver: &GradedQuiver) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .rev()
            .map(|(k, c)| format!("({c})*{}", quiver.path_label(&k.0)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// `lhs -> rhs`, where every path of `rhs` is smaller than `lhs`.
#[derive(Clone, Debug)]
pub struct Rule<F> {
    pub lhs: Path,
    pub rhs: Poly<F>,
}

impl<F: Scalar> Rule<F> {
    fn as_poly(&self) -> Poly<F> {
        let mut p = Poly::monomial(self.lhs.clone());
        p.add_scaled(&self.rhs, &-F::one());
        p
    }
}

#[derive(Clone, Debug)]
pub struct RewriteSystem<F> {
    pub rules: Vec<Rule<F>>,
}

const MAX_COMPLETION_ROUNDS: usize = 64;

impl<F: Scalar> RewriteSystem<F> {
    /// Completes the relations to a confluent system. New rules with leading
    /// path longer than `length_bound` are not admitted; the offending
    /// overlap is reported instead.
    pub fn complete(quiver: &GradedQuiver, relations: Vec<Poly<F>>, length_bound: usize) -> Result<Self> {
        let mut sys = RewriteSystem { rules: Vec::new() };
        let mut pending = relations;
        for _ in 0..MAX_COMPLETION_ROUNDS {
            while let Some(p) = pending.pop() {
                sys.insert(p, &mut pending);
            }
            let mut found = false;
            for (overlap, s) in sys.critical_pairs() {
                let r = sys.normal_form(&s);
                if r.is_zero() {
                    continue;
                }
                let lead = r.leading().expect("nonzero").0.len();
                if lead > length_bound {
                    return Err(Error::NotReducible {
                        overlap: quiver.path_label(&overlap),
                        remainder: r.render(quiver),
                    });
                }
                pending.push(r);
                found = true;
            }
            if !found {
                return Ok(sys);
            }
        }
        Err(Error::NotReducible {
            overlap: "(completion did not terminate)".into(),
            remainder: format!("{} rules", sys.rules.len()),
        })
    }

    fn insert(&mut self, p: Poly<F>, pending: &mut Vec<Poly<F>>) {
        let p = self.normal_form(&p);
        let Some((lead, c)) = p.leading() else { return };
        let lead = lead.clone();
        let inv = c.inv().expect("nonzero leading coefficient");
        let mut rhs = Poly::zero();
        for (q, d) in p.terms() {
            if *q != lead {
                rhs.add_term(q.clone(), -(d.clone() * inv.clone()));
            }
        }
        // rules whose leading path contains the new one must be redone
        let (keep, redo): (Vec<_>, Vec<_>) =
            std::mem::take(&mut self.rules).into_iter().partition(|r| r.lhs.find(&lead.arrows).is_none());
        self.rules = keep;
        pending.extend(redo.iter().map(|r| r.as_poly()));
        self.rules.push(Rule { lhs: lead, rhs });
        let rules = self.rules.clone();
        let sys = RewriteSystem { rules };
        for r in &mut self.rules {
            r.rhs = sys.normal_form(&r.rhs);
        }
    }

    /// All overlap and inclusion ambiguities, as (word, difference of the two reductions).
    fn critical_pairs(&self) -> Vec<(Path, Poly<F>)> {
        let mut out = Vec::new();
        for (i, r1) in self.rules.iter().enumerate() {
            for (j, r2) in self.rules.iter().enumerate() {
                let (u, v) = (&r1.lhs.arrows, &r2.lhs.arrows);
                // u = u' w, v = w v' as words; the ambiguity is u' w v'
                for k in 1..u.len().min(v.len()) {
                    if u[u.len() - k..] != v[..k] {
                        continue;
                    }
                    let mut word = u.clone();
                    word.extend_from_slice(&v[k..]);
                    let source = r2.lhs.source;
                    let target = r1.lhs.target;
                    let a = r1.rhs.wrap(&[], &v[k..], source, target);
                    let b = r2.rhs.wrap(&u[..u.len() - k], &[], source, target);
                    let mut s = a;
                    s.add_scaled(&b, &-F::one());
                    out.push((Path { source, target, arrows: word }, s));
                }
                if i != j {
                    if let Some(pos) = r1.lhs.find(v) {
                        let (source, target) = (r1.lhs.source, r1.lhs.target);
                        let mut s = r1.rhs.clone();
                        let b = r2.rhs.wrap(&u[..pos], &u[pos + v.len()..], source, target);
                        s.add_scaled(&b, &-F::one());
                        out.push((r1.lhs.clone(), s));
                    }
                }
            }
        }
        out
    }

    /// First rule whose leading path occurs in `p`, with its position.
    fn match_rule(&self, p: &Path) -> Option<(&Rule<F>, usize)> {
        self.rules.iter().find_map(|r| p.find(&r.lhs.arrows).map(|pos| (r, pos)))
    }

    pub fn is_reduced(&self, p: &Path) -> bool {
        self.match_rule(p).is_none()
    }

    pub fn normal_form(&self, p: &Poly<F>) -> Poly<F> {
        let mut work = p.clone();
        let mut out = Poly::zero();
        while let Some((key, c)) = work.terms.pop_last() {
            let path = key.0;
            match self.match_rule(&path) {
                None => out.add_term(path, c),
                Some((rule, pos)) => {
                    let n = rule.lhs.arrows.len();
                    let rep = rule.rhs.wrap(&path.arrows[..pos], &path.arrows[pos + n..], path.source, path.target);
                    work.add_scaled(&rep, &c);
                }
            }
        }
        out
    }

    /// Whether every rule preserves path length.
    pub fn length_homogeneous(&self) -> bool {
        self.rules.iter().all(|r| r.rhs.terms().all(|(p, _)| p.len() == r.lhs.len()))
    }
}
