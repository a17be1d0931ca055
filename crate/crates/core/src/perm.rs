//! Permutations on `{1..degree}`, stored 0-based internally.
//!
//! Composition is left-to-right throughout the crate: `(p * q)(i) = q(p(i))`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("images are not a bijection on 1..{degree}: {detail}")]
    NotABijection { degree: usize, detail: String },
    #[error("malformed cycle notation: {0}")]
    Malformed(String),
    #[error("point {point} out of range 1..{degree}")]
    PointOutOfRange { point: usize, degree: usize },
}

/// A permutation of `{0, .., degree-1}`; the text form is 1-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u16>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u16).collect(),
        }
    }

    /// Build from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<u16>) -> Result<Self, PermError> {
        let degree = images.len();
        let mut seen = vec![false; degree];
        for &i in &images {
            let i = i as usize;
            if i >= degree {
                return Err(PermError::NotABijection {
                    degree,
                    detail: format!("image {} out of range", i + 1),
                });
            }
            if seen[i] {
                return Err(PermError::NotABijection {
                    degree,
                    detail: format!("image {} repeated", i + 1),
                });
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> &[u16] {
        &self.images
    }

    /// Left-to-right composition: apply `self`, then `other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), other.degree()));
        }
        let images = self.images.iter().map(|&i| other.images[i as usize]).collect();
        Ok(Permutation { images })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u16; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u16;
        }
        Permutation { images }
    }

    /// Least k >= 1 with p^k = id; the lcm of the cycle lengths.
    pub fn order(&self) -> u64 {
        let mut ord = 1u64;
        for cycle in self.cycles_including_fixed() {
            ord = num_integer::lcm(ord, cycle.len() as u64);
        }
        ord
    }

    fn cycles_including_fixed(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cyc.push(x);
                x = self.apply(x);
            }
            out.push(cyc);
        }
        out
    }

    /// Nontrivial cycles, each starting at its smallest point, in
    /// ascending order of smallest moved point (0-based points).
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        self.cycles_including_fixed()
            .into_iter()
            .filter(|c| c.len() > 1)
            .collect()
    }

    /// Canonical cycle string, 1-based; identity prints as `()`.
    pub fn to_cycle_string(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        let mut s = String::new();
        for c in cycles {
            s.push('(');
            for (i, p) in c.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                s.push_str(&(p + 1).to_string());
            }
            s.push(')');
        }
        s
    }

    /// Parse disjoint-cycle notation like `(1,2,3)(4,5)`; `()` is the
    /// identity. Points are 1-based and must lie in `1..=degree`.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Permutation, PermError> {
        let mut images: Vec<u16> = (0..degree as u16).collect();
        let mut moved = vec![false; degree];
        let text = text.trim();
        if text.is_empty() {
            return Err(PermError::Malformed("empty permutation".into()));
        }
        let mut rest = text;
        while !rest.is_empty() {
            if !rest.starts_with('(') {
                return Err(PermError::Malformed(format!("expected '(' in {text:?}")));
            }
            let close = rest
                .find(')')
                .ok_or_else(|| PermError::Malformed(format!("unclosed cycle in {text:?}")))?;
            let body = &rest[1..close];
            rest = &rest[close + 1..];
            if body.is_empty() {
                continue; // "()" contributes nothing
            }
            let mut points = Vec::new();
            for tok in body.split(',') {
                let p: usize = tok
                    .parse()
                    .map_err(|_| PermError::Malformed(format!("bad point {tok:?}")))?;
                if p == 0 || p > degree {
                    return Err(PermError::PointOutOfRange { point: p, degree });
                }
                let p0 = p - 1;
                if moved[p0] {
                    return Err(PermError::NotABijection {
                        degree,
                        detail: format!("point {p} appears twice"),
                    });
                }
                moved[p0] = true;
                points.push(p0);
            }
            if points.len() == 1 {
                return Err(PermError::Malformed(format!(
                    "cycle of length 1 in {text:?}"
                )));
            }
            for i in 0..points.len() {
                images[points[i]] = points[(i + 1) % points.len()] as u16;
            }
        }
        Permutation::from_images(images)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycle_string())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycle_string())
    }
}

/// Free-function form of left-to-right composition.
pub fn compose(p: &Permutation, q: &Permutation) -> Result<Permutation, PermError> {
    p.compose(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, d: usize) -> Permutation {
        Permutation::parse_cycles(s, d).unwrap()
    }

    #[test]
    fn compose_identity() {
        let id = Permutation::identity(5);
        let t = p("(1,2)", 5);
        assert_eq!(id.compose(&t).unwrap(), t);
        assert_eq!(t.compose(&id).unwrap(), t);
    }

    #[test]
    fn compose_left_to_right() {
        // (1,2) then (1,3): 1->2->2, 2->1->3, 3->3->1, so (1,2,3)
        let a = p("(1,2)", 3);
        let b = p("(1,3)", 3);
        assert_eq!(a.compose(&b).unwrap(), p("(1,2,3)", 3));
    }

    #[test]
    fn compose_inverse_is_identity() {
        let a = p("(1,2,3)(4,5)", 6);
        assert!(a.compose(&a.inverse()).unwrap().is_identity());
    }

    #[test]
    fn degree_mismatch_rejected() {
        let a = p("(1,2)", 3);
        let b = p("(1,2)", 4);
        assert!(matches!(
            a.compose(&b),
            Err(PermError::DegreeMismatch(3, 4))
        ));
    }

    #[test]
    fn order_is_lcm_of_cycle_lengths() {
        assert_eq!(Permutation::identity(4).order(), 1);
        assert_eq!(p("(1,2)(3,4,5)", 5).order(), 6);
        assert_eq!(p("(1,2,3,4,5,6,7)", 7).order(), 7);
    }

    #[test]
    fn parse_rejects_non_bijection() {
        let err = Permutation::parse_cycles("(1,2,2)", 3).unwrap_err();
        assert!(matches!(err, PermError::NotABijection { .. }));
    }

    #[test]
    fn parse_rejects_out_of_range() {
        let err = Permutation::parse_cycles("(1,9)", 3).unwrap_err();
        assert!(matches!(err, PermError::PointOutOfRange { point: 9, .. }));
    }

    #[test]
    fn cycle_string_round_trip() {
        for s in ["()", "(1,2)", "(1,2,3)(4,5)", "(2,4)(3,6,5)"] {
            let q = p(s, 6);
            assert_eq!(q.to_cycle_string(), s.replace("()", "()"));
            assert_eq!(Permutation::parse_cycles(&q.to_cycle_string(), 6).unwrap(), q);
        }
    }
}
