use std::fmt;

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
    pub degree: i64,
}

/// A quiver whose arrows carry cohomological degrees.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GradedQuiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
}

impl GradedQuiver {
    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn path_degree(&self, path: &Path) -> i64 {
        path.arrows.iter().map(|&a| self.arrows[a].degree).sum()
    }

    pub fn path_label(&self, path: &Path) -> String {
        if path.arrows.is_empty() {
            format!("e{}", self.vertices[path.source])
        } else {
            path.arrows.iter().map(|&a| self.arrows[a].name.as_str()).collect::<Vec<_>>().join("*")
        }
    }

    /// The path consisting of a single arrow.
    pub fn arrow_path(&self, a: usize) -> Path {
        Path { source: self.arrows[a].source, target: self.arrows[a].target, arrows: vec![a] }
    }
}

/// A path in a quiver, written in composition order: `arrows[0]` is applied
/// last. Trivial paths (idempotents) have no arrows and `source == target`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path { source: v, target: v, arrows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    /// `self * other`: first `other`, then `self`.
    pub fn compose(&self, other: &Path) -> Option<Path> {
        if self.source != other.target {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&other.arrows);
        Some(Path { source: other.source, target: self.target, arrows })
    }

    /// Position of `pattern` as a contiguous subword, if any.
    pub fn find(&self, pattern: &[usize]) -> Option<usize> {
        if pattern.is_empty() || pattern.len() > self.arrows.len() {
            return None;
        }
        self.arrows.windows(pattern.len()).position(|w| w == pattern)
    }

    /// Degree-lexicographic comparison key.
    pub fn order_key(&self) -> (usize, &[usize]) {
        (self.arrows.len(), &self.arrows)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.arrows)
    }
}
