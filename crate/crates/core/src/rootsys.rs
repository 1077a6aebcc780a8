//! Root-system data and the elementary Weyl-group kernel.
//!
//! Every vector lives in simple-root coordinates: `u = Σ coords[i]·α_i`.
//! In this basis the fundamental-coweight pairing `⟨u, ϖ_i⟩` is the
//! coordinate `coords[i]`, and the coroot pairing `⟨u, α_i^∨⟩` is row `i`
//! of the Cartan matrix applied to `coords`.
//!
//! Indices are 0-based in the library: index `0` is `α_1` in the usual
//! Bourbaki-style labels. Reports convert back to 1-based labels.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Num, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("inadmissible rank {rank} for family {family}")]
    InadmissibleRank { family: Family, rank: usize },
    #[error("unknown root system family `{0}`")]
    UnknownFamily(String),
    #[error("simple root index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("vector has {found} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Irreducible reduced root system families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn is_simply_laced(self) -> bool {
        matches!(self, Family::A | Family::D | Family::E)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        };
        write!(f, "{c}")
    }
}

impl FromStr for Family {
    type Err = RootError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            "E" => Ok(Family::E),
            "F" => Ok(Family::F),
            "G" => Ok(Family::G),
            _ => Err(RootError::UnknownFamily(s.to_string())),
        }
    }
}

/// A family tag together with an admissible rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootSystemType {
    family: Family,
    rank: usize,
}

impl RootSystemType {
    /// Admissible ranks: `A_n` n≥1, `B_n` n≥2, `C_n` n≥3, `D_n` n≥4,
    /// `E_6..E_8`, `F_4`, `G_2`. `C_2` and `D_3` are rejected as duplicates
    /// of `B_2` and `A_3`.
    pub fn new(family: Family, rank: usize) -> Result<Self, RootError> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B => rank >= 2,
            Family::C => rank >= 3,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(RootSystemType { family, rank })
        } else {
            Err(RootError::InadmissibleRank { family, rank })
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

impl fmt::Display for RootSystemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

impl FromStr for RootSystemType {
    type Err = RootError;

    /// Parses labels such as `G2`, `C4`, `E6`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut chars = s.chars();
        let head = chars
            .next()
            .ok_or_else(|| RootError::UnknownFamily(s.to_string()))?;
        let family: Family = head.to_string().parse()?;
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| RootError::UnknownFamily(s.to_string()))?;
        RootSystemType::new(family, rank)
    }
}

/// Integer Cartan matrix with `a[i][j] = ⟨α_j, α_i^∨⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CartanMatrix {
    rows: Vec<Vec<i64>>,
}

impl CartanMatrix {
    fn from_edges(n: usize, edges: &[(usize, usize, i64, i64)]) -> Self {
        let mut rows = vec![vec![0i64; n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = 2;
        }
        // (i, j, a[i][j], a[j][i]), 1-based labels
        for &(i, j, aij, aji) in edges {
            rows[i - 1][j - 1] = aij;
            rows[j - 1][i - 1] = aji;
        }
        CartanMatrix { rows }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// Checks the structural invariants of a Cartan matrix.
    pub fn is_valid(&self) -> bool {
        let n = self.rank();
        (0..n).all(|i| {
            self.rows[i].len() == n
                && self.rows[i][i] == 2
                && (0..n).filter(|&j| j != i).all(|j| {
                    let a = self.rows[i][j];
                    (-3..=0).contains(&a) && ((a == 0) == (self.rows[j][i] == 0))
                })
        })
    }
}

/// Numeric types the reflection kernel runs over.
pub trait Scalar:
    Clone + Ord + Num + Signed + From<i64> + fmt::Debug + fmt::Display + Send + Sync
{
}

impl Scalar for i64 {}
impl Scalar for Rational64 {}

/// A vector in simple-root coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector<T>(Vec<T>);

/// An element of the root lattice `Q(R)`.
pub type LatticeVector = Vector<i64>;
/// An element of `Q(R) ⊗ ℚ`.
pub type RationalVector = Vector<Rational64>;

impl<T: Scalar> Vector<T> {
    pub fn new(coords: Vec<T>) -> Self {
        Vector(coords)
    }

    pub fn zero(n: usize) -> Self {
        Vector(vec![T::zero(); n])
    }

    /// The simple root `α_i` (0-based).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.0[i] = T::one();
        v
    }

    pub fn coords(&self) -> &[T] {
        &self.0
    }

    pub fn coords_mut(&mut self) -> &mut [T] {
        &mut self.0
    }

    pub fn into_coords(self) -> Vec<T> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &T) -> Self {
        Vector(self.0.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// `self + c·α_i`.
    pub fn add_root(&self, i: usize, c: T) -> Self {
        let mut v = self.clone();
        v.0[i] = v.0[i].clone() + c;
        v
    }

    /// Coordinatewise `self ≤ other`.
    pub fn le_coords(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl<T: Scalar> Add for &Vector<T> {
    type Output = Vector<T>;
    fn add(self, rhs: &Vector<T>) -> Vector<T> {
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a.clone() + b.clone()).collect())
    }
}

impl<T: Scalar> Sub for &Vector<T> {
    type Output = Vector<T>;
    fn sub(self, rhs: &Vector<T>) -> Vector<T> {
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a.clone() - b.clone()).collect())
    }
}

impl<T: Scalar> Neg for &Vector<T> {
    type Output = Vector<T>;
    fn neg(self) -> Vector<T> {
        Vector(self.0.iter().map(|a| -a.clone()).collect())
    }
}

impl<T: Scalar> fmt::Display for Vector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl LatticeVector {
    pub fn to_rational(&self) -> RationalVector {
        Vector(self.0.iter().map(|&a| Rational64::from_integer(a)).collect())
    }
}

impl RationalVector {
    /// Returns the lattice vector if every coordinate is an integer.
    pub fn to_lattice(&self) -> Option<LatticeVector> {
        self.0
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(Vector)
    }

    /// Returns `(d·self, d)` with `d ≥ 1` the least common denominator.
    pub fn clear_denominators(&self) -> (LatticeVector, i64) {
        let d = self.0.iter().fold(1i64, |acc, c| acc.lcm(c.denom()));
        let coords = self.0.iter().map(|c| (c * d).to_integer()).collect();
        (Vector(coords), d)
    }
}

impl From<LatticeVector> for RationalVector {
    fn from(v: LatticeVector) -> Self {
        v.to_rational()
    }
}

/// `⟨u, ϖ_i⟩`, which is the `i`-th simple-root coordinate of `u`.
pub fn coweight_coordinate<T: Scalar>(u: &Vector<T>, i: usize) -> Result<T, RootError> {
    u.0.get(i).cloned().ok_or(RootError::IndexOutOfRange {
        index: i,
        rank: u.len(),
    })
}

/// An irreducible root system: its type and Cartan matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootSystem {
    ty: RootSystemType,
    cartan: CartanMatrix,
}

/// Builds the root system of type `ty`.
///
/// `B`, `C`, `F`, `G` use the numbering in which the non-simply-laced bond
/// sits at `(n−1, n)`, `(n−1, n)`, `(2, 3)` and `(1, 2)`, with
/// `⟨α_{n−1}, α_n^∨⟩ = −2` for `B_n`, `⟨α_n, α_{n−1}^∨⟩ = −2` for `C_n`,
/// `⟨α_2, α_3^∨⟩ = −2` for `F_4` and `⟨α_1, α_2^∨⟩ = −3` for `G_2`
/// (so `α_1` is the long root of `G_2`). `A`, `D`, `E` use the standard
/// path and fork numberings.
pub fn build_root_system(ty: RootSystemType) -> RootSystem {
    let n = ty.rank;
    let path = |len: usize| -> Vec<(usize, usize, i64, i64)> {
        (1..len).map(|i| (i, i + 1, -1, -1)).collect()
    };
    let edges = match ty.family {
        Family::A => path(n),
        Family::B => {
            let mut e = path(n - 1);
            e.push((n - 1, n, -1, -2));
            e
        }
        Family::C => {
            let mut e = path(n - 1);
            e.push((n - 1, n, -2, -1));
            e
        }
        Family::D => {
            let mut e = path(n - 1);
            e.push((n - 2, n, -1, -1));
            e
        }
        Family::E => {
            let mut e = vec![(1, 3, -1, -1), (2, 4, -1, -1)];
            e.extend((3..n).map(|i| (i, i + 1, -1, -1)));
            e
        }
        Family::F => vec![(1, 2, -1, -1), (2, 3, -1, -2), (3, 4, -1, -1)],
        Family::G => vec![(1, 2, -1, -3)],
    };
    RootSystem {
        ty,
        cartan: CartanMatrix::from_edges(n, &edges),
    }
}

impl RootSystem {
    pub fn new(family: Family, rank: usize) -> Result<Self, RootError> {
        Ok(build_root_system(RootSystemType::new(family, rank)?))
    }

    pub fn root_type(&self) -> RootSystemType {
        self.ty
    }

    pub fn family(&self) -> Family {
        self.ty.family
    }

    pub fn rank(&self) -> usize {
        self.ty.rank
    }

    pub fn cartan(&self) -> &CartanMatrix {
        &self.cartan
    }

    pub fn simple_root(&self, i: usize) -> LatticeVector {
        Vector::unit(self.rank(), i)
    }

    fn check_index(&self, i: usize) -> Result<(), RootError> {
        if i < self.rank() {
            Ok(())
        } else {
            Err(RootError::IndexOutOfRange {
                index: i,
                rank: self.rank(),
            })
        }
    }

    pub fn check_dim<T>(&self, u: &Vector<T>) -> Result<(), RootError> {
        if u.0.len() == self.rank() {
            Ok(())
        } else {
            Err(RootError::DimensionMismatch {
                expected: self.rank(),
                found: u.0.len(),
            })
        }
    }

    /// `⟨u, α_i^∨⟩ = Σ_j a[i][j]·u_j` on a raw coordinate slice.
    #[inline]
    pub fn pairing_raw<T: Scalar>(&self, coords: &[T], i: usize) -> T {
        self.cartan.rows[i]
            .iter()
            .zip(coords)
            .filter(|(&a, _)| a != 0)
            .fold(T::zero(), |acc, (&a, c)| acc + T::from(a) * c.clone())
    }

    /// `s_i` in place on a raw coordinate slice.
    #[inline]
    pub fn reflect_raw<T: Scalar>(&self, coords: &mut [T], i: usize) {
        let p = self.pairing_raw(coords, i);
        coords[i] = coords[i].clone() - p;
    }

    /// Smallest index with a negative coroot pairing, if any.
    #[inline]
    pub fn first_negative_raw<T: Scalar>(&self, coords: &[T]) -> Option<usize> {
        (0..self.rank()).find(|&i| self.pairing_raw(coords, i).is_negative())
    }

    /// `⟨u, α_i^∨⟩`.
    pub fn pair_coroot<T: Scalar>(&self, u: &Vector<T>, i: usize) -> Result<T, RootError> {
        self.check_index(i)?;
        self.check_dim(u)?;
        Ok(self.pairing_raw(&u.0, i))
    }

    /// All coroot pairings `(⟨u, α_1^∨⟩, …, ⟨u, α_n^∨⟩)`.
    pub fn coroot_pairings<T: Scalar>(&self, u: &Vector<T>) -> Vec<T> {
        assert_eq!(u.len(), self.rank(), "vector dimension must equal rank");
        (0..self.rank()).map(|i| self.pairing_raw(&u.0, i)).collect()
    }

    /// All coroot pairings are nonnegative.
    ///
    /// Panics if `u` does not have `rank` coordinates.
    pub fn is_dominant<T: Scalar>(&self, u: &Vector<T>) -> bool {
        assert_eq!(u.len(), self.rank(), "vector dimension must equal rank");
        self.first_negative_raw(&u.0).is_none()
    }

    /// `s_i(u) = u − ⟨u, α_i^∨⟩·α_i`.
    pub fn simple_reflection<T: Scalar>(&self, i: usize, u: &Vector<T>) -> Result<Vector<T>, RootError> {
        self.check_index(i)?;
        self.check_dim(u)?;
        let mut v = u.clone();
        self.reflect_raw(&mut v.0, i);
        Ok(v)
    }

    /// Applies `word[0]` first, then `word[1]`, and so on.
    pub fn apply_word<T: Scalar>(&self, word: &[usize], u: &Vector<T>) -> Result<Vector<T>, RootError> {
        self.check_dim(u)?;
        let mut v = u.clone();
        for &i in word {
            self.check_index(i)?;
            self.reflect_raw(&mut v.0, i);
        }
        Ok(v)
    }

    /// The dominant point of the orbit `W·u` and the word reaching it.
    ///
    /// Reflects at the smallest index with a negative pairing until none is
    /// left. The returned word satisfies `apply_word(word, u) == dominant`.
    ///
    /// Panics if `u` does not have `rank` coordinates.
    pub fn dominant_representative<T: Scalar>(&self, u: &Vector<T>) -> (Vector<T>, Vec<usize>) {
        assert_eq!(u.len(), self.rank(), "vector dimension must equal rank");
        let mut v = u.clone();
        let mut word = Vec::new();
        while let Some(i) = self.first_negative_raw(&v.0) {
            self.reflect_raw(&mut v.0, i);
            word.push(i);
        }
        (v, word)
    }

    /// Dominant representative without recording the word.
    pub fn dominant_raw<T: Scalar>(&self, coords: &mut [T]) {
        while let Some(i) = self.first_negative_raw(coords) {
            self.reflect_raw(coords, i);
        }
    }

    /// Solves `A·u = rhs` exactly. The Cartan matrix of a finite root
    /// system is nonsingular.
    pub fn solve_cartan(&self, rhs: &[Rational64]) -> RationalVector {
        let n = self.rank();
        let mut m: Vec<Vec<Rational64>> = self
            .cartan
            .rows
            .iter()
            .zip(rhs)
            .map(|(row, b)| {
                let mut r: Vec<Rational64> = row.iter().map(|&a| Rational64::from_integer(a)).collect();
                r.push(*b);
                r
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !m[r][col].is_zero())
                .expect("Cartan matrix is nonsingular");
            m.swap(col, pivot);
            let p = m[col][col];
            for e in &mut m[col][col..] {
                *e /= p;
            }
            let pivot_row = m[col].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r != col && !row[col].is_zero() {
                    let f = row[col];
                    for (e, q) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                        *e -= f * *q;
                    }
                }
            }
        }
        Vector(m.into_iter().map(|row| row[n]).collect())
    }

    /// A lattice vector with every coroot pairing strictly positive: the
    /// solution of `A·u = (1,…,1)` with denominators cleared.
    pub fn strictly_dominant_vector(&self) -> LatticeVector {
        let ones = vec![Rational64::from_integer(1); self.rank()];
        self.solve_cartan(&ones).clear_denominators().0
    }
}
