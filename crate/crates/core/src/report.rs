//! Exact serialization helpers: rationals become `"p/q"` (or `"p"`)
//! strings, lattice coordinates stay JSON integers.

use num_rational::Rational64;
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::rootsys::{LatticeVector, RationalVector};

pub fn format_rational(r: &Rational64) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Option<Rational64> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse().ok().map(Rational64::from_integer),
        Some((p, q)) => {
            let p: i64 = p.trim().parse().ok()?;
            let q: i64 = q.trim().parse().ok()?;
            (q != 0).then(|| Rational64::new(p, q))
        }
    }
}

pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }
}

impl Serialize for RationalVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.len()))?;
        for c in self.coords() {
            seq.serialize_element(&format_rational(c))?;
        }
        seq.end()
    }
}

impl Serialize for LatticeVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coords().serialize(s)
    }
}

/// Serializes 0-based simple-root indices as 1-based labels.
pub mod labels {
    use super::*;

    pub fn serialize<S: Serializer>(idx: &[usize], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(idx.len()))?;
        for i in idx {
            seq.serialize_element(&(i + 1))?;
        }
        seq.end()
    }
}

pub mod label {
    use super::*;

    pub fn serialize<S: Serializer>(i: &usize, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(*i as u64 + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::Vector;

    #[test]
    fn rational_strings() {
        assert_eq!(format_rational(&Rational64::new(3, 2)), "3/2");
        assert_eq!(format_rational(&Rational64::new(-4, 2)), "-2");
        assert_eq!(parse_rational("3/2"), Some(Rational64::new(3, 2)));
        assert_eq!(parse_rational(" -7 "), Some(Rational64::from_integer(-7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn vector_json() {
        let v: RationalVector = Vector::new(vec![Rational64::new(1, 2), Rational64::from_integer(1)]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"["1/2","1"]"#);
        let l: LatticeVector = Vector::new(vec![1, -2]);
        assert_eq!(serde_json::to_string(&l).unwrap(), "[1,-2]");
    }
}
