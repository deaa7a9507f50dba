use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A named run of contiguous qubits, `start` is 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "(String, usize, usize)", into = "(String, usize, usize)")]
pub struct Segment {
    pub name: String,
    pub start: usize,
    pub len: usize,
}

impl From<(String, usize, usize)> for Segment {
    fn from((name, start, len): (String, usize, usize)) -> Self {
        Segment { name, start, len }
    }
}

impl From<Segment> for (String, usize, usize) {
    fn from(s: Segment) -> Self {
        (s.name, s.start, s.len)
    }
}

impl Segment {
    pub fn qubits(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.len
    }
}

/// Ordered segments tiling qubits `1..=total`. The last segment holds the
/// value of the quantum fuzzy set; earlier ones are retained inputs and
/// ancillas of the constructions that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Segment>", into = "Vec<Segment>")]
pub struct RegisterLayout {
    segments: Vec<Segment>,
}

impl TryFrom<Vec<Segment>> for RegisterLayout {
    type Error = Error;

    fn try_from(segments: Vec<Segment>) -> Result<Self> {
        RegisterLayout::from_segments(segments)
    }
}

impl From<RegisterLayout> for Vec<Segment> {
    fn from(l: RegisterLayout) -> Self {
        l.segments
    }
}

impl RegisterLayout {
    pub fn single(name: &str, len: usize) -> Result<Self> {
        Self::from_segments(vec![Segment { name: name.to_string(), start: 1, len }])
    }

    pub fn from_segments(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidLayout("no segments".into()));
        }
        let mut next = 1;
        for s in &segments {
            if s.len == 0 {
                return Err(Error::InvalidLayout(format!("segment {:?} is empty", s.name)));
            }
            if s.start != next {
                return Err(Error::InvalidLayout(format!(
                    "segment {:?} starts at {} but qubit {} is next",
                    s.name, s.start, next
                )));
            }
            next += s.len;
        }
        Ok(RegisterLayout { segments })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn total_qubits(&self) -> usize {
        self.segments.iter().map(|s| s.len).sum()
    }

    pub fn value_segment(&self) -> &Segment {
        self.segments.last().expect("layout is never empty")
    }

    pub fn value_qubits(&self) -> Vec<usize> {
        self.value_segment().qubits().collect()
    }

    pub fn segment(&self, name: &str) -> Option<&Segment> {
        self.segments.iter().find(|s| s.name == name)
    }

    /// Appends a new segment, which becomes the value segment.
    pub fn with_appended(&self, name: &str, len: usize) -> Result<Self> {
        let mut segments = self.segments.clone();
        segments.push(Segment { name: name.to_string(), start: self.total_qubits() + 1, len });
        Self::from_segments(segments)
    }

    /// Layout of `left ⊗ right` with segment names prefixed `a.` and `b.`.
    pub fn joined(left: &RegisterLayout, right: &RegisterLayout) -> Result<Self> {
        let offset = left.total_qubits();
        let segments = left
            .segments
            .iter()
            .map(|s| Segment { name: format!("a.{}", s.name), ..s.clone() })
            .chain(right.segments.iter().map(|s| Segment {
                name: format!("b.{}", s.name),
                start: s.start + offset,
                len: s.len,
            }))
            .collect();
        Self::from_segments(segments)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiling_is_enforced() {
        let gap = vec![Segment { name: "x".into(), start: 1, len: 2 }, Segment { name: "y".into(), start: 4, len: 1 }];
        assert!(RegisterLayout::from_segments(gap).is_err());
        assert!(RegisterLayout::from_segments(vec![]).is_err());
        assert!(RegisterLayout::single("v", 0).is_err());
    }

    #[test]
    fn join_and_append() {
        let a = RegisterLayout::single("value", 2).unwrap();
        let b = RegisterLayout::single("value", 2).unwrap();
        let l = RegisterLayout::joined(&a, &b).unwrap().with_appended("out", 2).unwrap();
        assert_eq!(l.total_qubits(), 6);
        assert_eq!(l.segment("b.value").unwrap().start, 3);
        assert_eq!(l.value_qubits(), vec![5, 6]);
        let json = serde_json::to_string(&l).unwrap();
        assert_eq!(json, r#"[["a.value",1,2],["b.value",3,2],["out",5,2]]"#);
        assert_eq!(serde_json::from_str::<RegisterLayout>(&json).unwrap(), l);
    }
}
