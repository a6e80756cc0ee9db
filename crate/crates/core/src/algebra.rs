//! Exact arithmetic over the Gaussian integers `Z[i]` for the 8-dimensional
//! three-qubit state space.
//!
//! Nothing here touches floating point. Rays are kept unnormalized and every
//! projector identity is checked after scaling by 8, which clears all the
//! denominators that occur for the generated rays (squared norms 2 and 8).

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_rational::Ratio;
use thiserror::Error;

/// Dimension of the three-qubit state space.
pub const DIM: usize = 8;

/// The scale at which projector sums are compared against the identity.
pub const PROJECTOR_SCALE: i64 = 8;

/// A Gaussian integer `re + im·i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussInt {
    pub re: i64,
    pub im: i64,
}

impl GaussInt {
    pub const ZERO: Self = Self::new(0, 0);
    pub const ONE: Self = Self::new(1, 0);
    pub const I: Self = Self::new(0, 1);

    pub const fn new(re: i64, im: i64) -> Self {
        Self { re, im }
    }

    pub const fn real(re: i64) -> Self {
        Self { re, im: 0 }
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    /// `|z|²`, always a non-negative integer.
    pub fn norm_sqr(self) -> i64 {
        self.re * self.re + self.im * self.im
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn scale(self, k: i64) -> Self {
        Self::new(self.re * k, self.im * k)
    }

    /// Exact division by a rational integer; `None` if `k` does not divide
    /// both parts.
    pub fn div_exact(self, k: i64) -> Option<Self> {
        if k == 0 || self.re % k != 0 || self.im % k != 0 {
            return None;
        }
        Some(Self::new(self.re / k, self.im / k))
    }
}

impl Add for GaussInt {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl AddAssign for GaussInt {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sub for GaussInt {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Neg for GaussInt {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Mul for GaussInt {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re, self.im) {
            (re, 0) => write!(f, "{re}"),
            (0, 1) => write!(f, "i"),
            (0, -1) => write!(f, "-i"),
            (0, im) => write!(f, "{im}i"),
            (re, im) if im < 0 => write!(f, "{re}-{}i", -im),
            (re, im) => write!(f, "{re}+{im}i"),
        }
    }
}

/// A vector in `Z[i]^8`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vec8(pub [GaussInt; DIM]);

impl Vec8 {
    pub fn zero() -> Self {
        Self([GaussInt::ZERO; DIM])
    }

    pub fn basis(index: usize) -> Self {
        let mut v = Self::zero();
        v.0[index] = GaussInt::ONE;
        v
    }

    pub fn components(&self) -> &[GaussInt; DIM] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|z| z.is_zero())
    }

    /// `⟨v|v⟩`.
    pub fn norm_sqr(&self) -> i64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn nonzero_count(&self) -> usize {
        self.0.iter().filter(|z| !z.is_zero()).count()
    }

    pub fn scale(&self, k: GaussInt) -> Self {
        Self(self.0.map(|z| z * k))
    }

    /// Rescales so that the first nonzero component is a positive rational
    /// integer and the components share no common rational-integer factor.
    /// Two nonzero vectors span the same ray iff their normalizations agree.
    pub fn normalized(&self) -> Self {
        let Some(lead) = self.0.iter().copied().find(|z| !z.is_zero()) else {
            return *self;
        };
        let rotated = self.scale(lead.conj());
        let g = rotated.0.iter().flat_map(|z| [z.re, z.im]).fold(0, gcd);
        Self(rotated.0.map(|z| z.div_exact(g).expect("gcd divides")))
    }

    /// True iff `other = c·self` for some nonzero Gaussian rational `c`.
    pub fn is_proportional(&self, other: &Vec8) -> bool {
        if self.is_zero() || other.is_zero() {
            return false;
        }
        self.normalized() == other.normalized()
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `⟨a|b⟩`, conjugate-linear in the first argument.
pub fn inner(a: &Vec8, b: &Vec8) -> GaussInt {
    a.0.iter()
        .zip(b.0.iter())
        .fold(GaussInt::ZERO, |acc, (x, y)| acc + x.conj() * *y)
}

pub fn is_orthogonal(a: &Vec8, b: &Vec8) -> bool {
    inner(a, b).is_zero()
}

/// Post-selection probability `|⟨q|p⟩|² / (⟨p|p⟩⟨q|q⟩)` as an exact rational.
///
/// Panics if either vector is zero.
pub fn overlap_probability(p: &Vec8, q: &Vec8) -> Ratio<i64> {
    let denom = p.norm_sqr() * q.norm_sqr();
    assert!(denom != 0, "overlap of a zero vector");
    Ratio::new(inner(q, p).norm_sqr(), denom)
}

/// An 8×8 matrix over `Z[i]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mat8(pub [[GaussInt; DIM]; DIM]);

impl Default for Mat8 {
    fn default() -> Self {
        Self::zero()
    }
}

impl Mat8 {
    pub fn zero() -> Self {
        Self([[GaussInt::ZERO; DIM]; DIM])
    }

    pub fn identity() -> Self {
        Self::scalar(GaussInt::ONE)
    }

    pub fn scalar(k: GaussInt) -> Self {
        let mut m = Self::zero();
        for i in 0..DIM {
            m.0[i][i] = k;
        }
        m
    }

    /// `|v⟩⟨v|`, unnormalized.
    pub fn outer(v: &Vec8) -> Self {
        let mut m = Self::zero();
        for i in 0..DIM {
            for j in 0..DIM {
                m.0[i][j] = v.0[i] * v.0[j].conj();
            }
        }
        m
    }

    pub fn get(&self, row: usize, col: usize) -> GaussInt {
        self.0[row][col]
    }

    pub fn column(&self, col: usize) -> Vec8 {
        Vec8(std::array::from_fn(|row| self.0[row][col]))
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..DIM {
            for j in 0..DIM {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn is_hermitian(&self) -> bool {
        *self == self.adjoint()
    }

    pub fn trace(&self) -> GaussInt {
        (0..DIM).fold(GaussInt::ZERO, |acc, i| acc + self.0[i][i])
    }

    pub fn scale(&self, k: GaussInt) -> Self {
        Self(self.0.map(|row| row.map(|z| z * k)))
    }

    pub fn apply(&self, v: &Vec8) -> Vec8 {
        Vec8(std::array::from_fn(|i| {
            (0..DIM).fold(GaussInt::ZERO, |acc, j| acc + self.0[i][j] * v.0[j])
        }))
    }

    pub fn is_real(&self) -> bool {
        self.0.iter().flatten().all(|z| z.im == 0)
    }
}

impl Add for Mat8 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut m = self;
        for i in 0..DIM {
            for j in 0..DIM {
                m.0[i][j] += rhs.0[i][j];
            }
        }
        m
    }
}

impl Sub for Mat8 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + rhs.scale(-GaussInt::ONE)
    }
}

impl Mul for Mat8 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zero();
        for i in 0..DIM {
            for k in 0..DIM {
                let a = self.0[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..DIM {
                    m.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        m
    }
}

pub fn commutes(a: &Mat8, b: &Mat8) -> bool {
    *a * *b == *b * *a
}

/// Single-qubit Pauli factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn matrix(self) -> [[GaussInt; 2]; 2] {
        use GaussInt as G;
        match self {
            Pauli::I => [[G::ONE, G::ZERO], [G::ZERO, G::ONE]],
            Pauli::X => [[G::ZERO, G::ONE], [G::ONE, G::ZERO]],
            Pauli::Y => [[G::ZERO, -G::I], [G::I, G::ZERO]],
            Pauli::Z => [[G::ONE, G::ZERO], [G::ZERO, -G::ONE]],
        }
    }

    fn symbol(self) -> char {
        match self {
            Pauli::I => '1',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// A signed three-qubit Pauli operator `±P₁⊗P₂⊗P₃`. Qubit 1 is the most
/// significant tensor factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliWord {
    pub factors: [Pauli; 3],
    pub negative: bool,
}

impl PauliWord {
    pub const fn new(factors: [Pauli; 3]) -> Self {
        Self {
            factors,
            negative: false,
        }
    }

    pub const fn negated(self) -> Self {
        Self {
            factors: self.factors,
            negative: !self.negative,
        }
    }

    pub fn sign(&self) -> i64 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    /// The Kronecker realization as an 8×8 matrix.
    pub fn matrix(&self) -> Mat8 {
        let [a, b, c] = self.factors.map(Pauli::matrix);
        let sign = GaussInt::real(self.sign());
        let mut m = Mat8::zero();
        for row in 0..DIM {
            for col in 0..DIM {
                let (r1, r2, r3) = (row >> 2, (row >> 1) & 1, row & 1);
                let (c1, c2, c3) = (col >> 2, (col >> 1) & 1, col & 1);
                m.0[row][col] = sign * a[r1][c1] * b[r2][c2] * c[r3][c3];
            }
        }
        m
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            f.write_str("-")?;
        }
        for p in self.factors {
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}

pub fn pauli_matrix(word: &PauliWord) -> Mat8 {
    word.matrix()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("ray squared norm {norm} does not divide {PROJECTOR_SCALE}")]
    NonIntegerScale { norm: i64 },
    #[error("zero vector cannot define a projector")]
    ZeroRay,
}

/// Returns `Σ (8/⟨r|r⟩)·|r⟩⟨r|` over all the given rays, i.e. eight times the
/// sum of the corresponding orthogonal projectors.
pub fn scaled_projector_sum<'a, I>(rays: I) -> Result<Mat8, AlgebraError>
where
    I: IntoIterator<Item = &'a Vec8>,
{
    let mut sum = Mat8::zero();
    for r in rays {
        let norm = r.norm_sqr();
        if norm == 0 {
            return Err(AlgebraError::ZeroRay);
        }
        if PROJECTOR_SCALE % norm != 0 {
            return Err(AlgebraError::NonIntegerScale { norm });
        }
        sum = sum + Mat8::outer(r).scale(GaussInt::real(PROJECTOR_SCALE / norm));
    }
    Ok(sum)
}

/// Checks that the projectors onto the given rays sum exactly to the identity.
/// A rank-2 projector contributes both of its rays.
pub fn projector_sum_check<'a, I>(rays: I) -> Result<bool, AlgebraError>
where
    I: IntoIterator<Item = &'a Vec8>,
{
    let sum = scaled_projector_sum(rays)?;
    Ok(sum == Mat8::scalar(GaussInt::real(PROJECTOR_SCALE)))
}
