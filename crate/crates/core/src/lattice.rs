//! The second homology lattice of `S^2 x S^2` and of `CP^2 # k(-CP^2)` for
//! `k <= 9`, with its intersection form, canonical class, the reflection
//! (Cremona/Weyl) action and reduction of symplectic classes.
//!
//! Integer classes are stored as coefficient vectors in the standard basis:
//! `(B, F)` for the product and `(H, E_1, .., E_k)` for blow-ups, so the
//! exceptional class `H - E_1 - E_2` is `[1, -1, -1]`.
//!
//! Symplectic classes are stored in the same basis (through Poincaré duality),
//! but they are usually built from *areas*: the pairings with the basis
//! vectors. For a blow-up, `u = nu H - sum c_i E_i` has areas `(nu; c_1..c_k)`;
//! for the product, areas are `(u.B, u.F)`.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, Rational};

/// Which rational surface the lattice belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SurfaceKind {
    /// `S^2 x S^2` in the basis `(B, F)`.
    Product,
    /// `CP^2` blown up at `k` points, in the basis `(H, E_1, .., E_k)`.
    BlowUp(usize),
}

/// The lattice `H_2(M; Z)` of a supported rational surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SurfaceModel {
    kind: SurfaceKind,
}

impl SurfaceModel {
    pub fn product() -> Self {
        Self {
            kind: SurfaceKind::Product,
        }
    }

    pub fn blow_up(k: usize) -> Result<Self> {
        if k > 9 {
            return Err(Error::TooManyBlowUps(k));
        }
        Ok(Self {
            kind: SurfaceKind::BlowUp(k),
        })
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    /// Number of blow-ups, `None` for the product.
    pub fn blow_ups(&self) -> Option<usize> {
        match self.kind {
            SurfaceKind::Product => None,
            SurfaceKind::BlowUp(k) => Some(k),
        }
    }

    pub fn rank(&self) -> usize {
        match self.kind {
            SurfaceKind::Product => 2,
            SurfaceKind::BlowUp(k) => k + 1,
        }
    }

    pub fn euler_characteristic(&self) -> usize {
        self.rank() + 2
    }

    pub fn gram(&self) -> Vec<Vec<i64>> {
        let n = self.rank();
        let mut g = vec![vec![0; n]; n];
        match self.kind {
            SurfaceKind::Product => {
                g[0][1] = 1;
                g[1][0] = 1;
            }
            SurfaceKind::BlowUp(_) => {
                g[0][0] = 1;
                for (i, row) in g.iter_mut().enumerate().skip(1) {
                    row[i] = -1;
                }
            }
        }
        g
    }

    pub fn canonical(&self) -> LatticeClass {
        match self.kind {
            SurfaceKind::Product => LatticeClass::new(vec![-2, -2]),
            SurfaceKind::BlowUp(k) => {
                let mut c = vec![1; k + 1];
                c[0] = -3;
                LatticeClass::new(c)
            }
        }
    }

    /// `K.K`: 8 for the product, `9 - k` for blow-ups.
    pub fn canonical_square(&self) -> i64 {
        match self.kind {
            SurfaceKind::Product => 8,
            SurfaceKind::BlowUp(k) => 9 - k as i64,
        }
    }

    pub fn basis_names(&self) -> Vec<String> {
        match self.kind {
            SurfaceKind::Product => vec!["B".into(), "F".into()],
            SurfaceKind::BlowUp(k) => std::iter::once("H".to_string())
                .chain((1..=k).map(|i| format!("E_{i}")))
                .collect(),
        }
    }

    pub fn basis_class(&self, index: usize) -> LatticeClass {
        let mut c = vec![0; self.rank()];
        c[index] = 1;
        LatticeClass::new(c)
    }

    fn check_len(&self, found: usize) -> Result<()> {
        if found == self.rank() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.rank(),
                found,
            })
        }
    }

    /// The form evaluated on raw coordinate slices of equal length.
    fn form<T>(&self, a: &[T], b: &[T]) -> T
    where
        T: Clone + Zero + std::ops::Sub<Output = T> + for<'x> std::ops::Mul<&'x T, Output = T>,
    {
        match self.kind {
            SurfaceKind::Product => a[0].clone() * &b[1] + a[1].clone() * &b[0],
            SurfaceKind::BlowUp(_) => {
                let mut acc = a[0].clone() * &b[0];
                for i in 1..a.len() {
                    acc = acc - a[i].clone() * &b[i];
                }
                acc
            }
        }
    }

    /// Intersection number of two integer classes.
    pub fn pair(&self, a: &LatticeClass, b: &LatticeClass) -> Result<i64> {
        self.check_len(a.0.len())?;
        self.check_len(b.0.len())?;
        Ok(self.pair_unchecked(a, b))
    }

    pub(crate) fn pair_unchecked(&self, a: &LatticeClass, b: &LatticeClass) -> i64 {
        match self.kind {
            SurfaceKind::Product => a.0[0] * b.0[1] + a.0[1] * b.0[0],
            SurfaceKind::BlowUp(_) => {
                a.0[0] * b.0[0]
                    - a.0[1..]
                        .iter()
                        .zip(&b.0[1..])
                        .map(|(x, y)| x * y)
                        .sum::<i64>()
            }
        }
    }

    /// Area `u.A` of an integer class.
    pub fn area(&self, u: &SymplecticClass, a: &LatticeClass) -> Result<Rational> {
        self.check_len(u.0.len())?;
        self.check_len(a.0.len())?;
        Ok(self.area_unchecked(u, a))
    }

    pub(crate) fn area_unchecked(&self, u: &SymplecticClass, a: &LatticeClass) -> Rational {
        let a: Vec<Rational> = a.0.iter().map(|&x| int(x)).collect();
        self.form(&u.0, &a)
    }

    /// Pairing of two rational classes.
    pub fn pair_rational(&self, u: &SymplecticClass, v: &SymplecticClass) -> Result<Rational> {
        self.check_len(u.0.len())?;
        self.check_len(v.0.len())?;
        Ok(self.form(&u.0, &v.0))
    }

    pub fn square(&self, a: &LatticeClass) -> Result<i64> {
        self.pair(a, a)
    }

    /// `K.A + A.A + 2`; zero exactly when `A` satisfies the adjunction
    /// constraint for embedded spheres.
    pub fn adjunction_defect(&self, a: &LatticeClass) -> Result<i64> {
        self.check_len(a.0.len())?;
        if a.is_zero() {
            return Err(Error::ZeroClass);
        }
        Ok(self.pair_unchecked(&self.canonical(), a) + self.pair_unchecked(a, a) + 2)
    }

    /// Codimension `2(-A.A - 1)` of the stratum attached to a negative class.
    pub fn cod(&self, a: &LatticeClass) -> Result<i64> {
        let sq = self.square(a)?;
        if sq >= 0 {
            return Err(Error::NonNegativeSquare {
                class: self.format_class(a),
                square: sq,
            });
        }
        Ok(2 * (-sq - 1))
    }

    /// True when `root` is a `-2` class orthogonal to `K`, so reflecting in it
    /// is an isometry fixing the canonical class.
    pub fn is_root(&self, root: &LatticeClass) -> bool {
        root.0.len() == self.rank()
            && self.pair_unchecked(root, root) == -2
            && self.pair_unchecked(&self.canonical(), root) == 0
    }

    /// Reflection `A -> A + (A.r) r` in a root `r`.
    pub fn reflect(&self, a: &LatticeClass, root: &LatticeClass) -> Result<LatticeClass> {
        self.check_len(a.0.len())?;
        if !self.is_root(root) {
            return Err(Error::InvalidRoot(self.format_class(root)));
        }
        Ok(self.reflect_unchecked(a, root))
    }

    pub(crate) fn reflect_unchecked(&self, a: &LatticeClass, root: &LatticeClass) -> LatticeClass {
        let k = self.pair_unchecked(a, root);
        LatticeClass(a.0.iter().zip(&root.0).map(|(x, r)| x + k * r).collect())
    }

    pub fn reflect_symplectic(
        &self,
        u: &SymplecticClass,
        root: &LatticeClass,
    ) -> Result<SymplecticClass> {
        self.check_len(u.0.len())?;
        if !self.is_root(root) {
            return Err(Error::InvalidRoot(self.format_class(root)));
        }
        Ok(self.reflect_symplectic_unchecked(u, root))
    }

    fn reflect_symplectic_unchecked(&self, u: &SymplecticClass, root: &LatticeClass) -> SymplecticClass {
        let k = self.area_unchecked(u, root);
        SymplecticClass(
            u.0.iter()
                .zip(&root.0)
                .map(|(x, &r)| x + &k * int(r))
                .collect(),
        )
    }

    /// Checks that `u` has positive square and negative pairing with `K`.
    pub fn check_forward(&self, u: &SymplecticClass) -> Result<()> {
        self.check_len(u.0.len())?;
        let sq = self.form(&u.0, &u.0);
        if !sq.is_positive() {
            return Err(Error::NotForward(format!(
                "square {} is not positive",
                format_rational(&sq)
            )));
        }
        let k = self.area_unchecked(u, &self.canonical());
        if !k.is_negative() {
            return Err(Error::NotForward(format!(
                "pairing {} with the canonical class is not negative",
                format_rational(&k)
            )));
        }
        Ok(())
    }

    /// Reduces `u` to the fundamental chamber.
    ///
    /// Blow-ups: areas `(nu; c_1..c_k)` end up with `c_1 >= .. >= c_k > 0`
    /// and `nu >= c_1 + c_2 + c_3`. The product ends up with `u.B >= u.F`.
    /// The returned word replays `u` onto the reduced class. Classes that are
    /// not strictly positive on every exceptional class are rejected, naming
    /// an offending exceptional class of the input.
    pub fn reduce(&self, u: &SymplecticClass) -> Result<(SymplecticClass, WeylWord)> {
        self.check_forward(u)?;
        let mut word = WeylWord::identity();
        let mut cur = u.clone();
        match self.kind {
            SurfaceKind::Product => {
                let areas = cur.areas(self);
                if areas[1] > areas[0] {
                    let r = Reflection::SwapFactors;
                    cur = self.reflect_symplectic_unchecked(&cur, &r.root(self));
                    word.push(r);
                }
            }
            SurfaceKind::BlowUp(k) => {
                loop {
                    sort_exceptional_areas(self, &mut cur, &mut word);
                    if k < 3 {
                        break;
                    }
                    let areas = cur.areas(self);
                    let defect = &areas[0] - &areas[1] - &areas[2] - &areas[3];
                    if !defect.is_negative() {
                        break;
                    }
                    let r = Reflection::Cremona(1, 2, 3);
                    cur = self.reflect_symplectic_unchecked(&cur, &r.root(self));
                    word.push(r);
                }
                let areas = cur.areas(self);
                let offender = (1..=k).find(|&i| !areas[i].is_positive()).map(|i| {
                    (self.basis_class(i), areas[i].clone())
                });
                let offender = offender.or_else(|| {
                    (k == 2)
                        .then(|| &areas[0] - &areas[1] - &areas[2])
                        .filter(|a| !a.is_positive())
                        .map(|a| (LatticeClass::new(vec![1, -1, -1]), a))
                });
                if let Some((class, area)) = offender {
                    let original = word.inverse().apply_class(self, &class);
                    return Err(Error::OutsideCone {
                        class: self.format_class(&original),
                        area: format_rational(&area),
                    });
                }
            }
        }
        Ok((cur, word))
    }

    /// Human-readable form in the usual notation, e.g. `2H-E_1-E_2` or `B-3F`.
    pub fn format_class(&self, a: &LatticeClass) -> String {
        let names = self.basis_names();
        let mut out = String::new();
        for (c, name) in a.0.iter().zip(&names) {
            if *c == 0 {
                continue;
            }
            let mag = c.abs();
            if out.is_empty() {
                if *c < 0 {
                    out.push('-');
                }
            } else {
                out.push(if *c < 0 { '-' } else { '+' });
            }
            if mag != 1 {
                out.push_str(&mag.to_string());
            }
            out.push_str(name);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Human-readable form of a symplectic class through its areas.
    pub fn format_areas(&self, u: &SymplecticClass) -> String {
        let a: Vec<String> = u.areas(self).iter().map(format_rational).collect();
        match self.kind {
            SurfaceKind::Product => format!("(B: {}, F: {})", a[0], a[1]),
            SurfaceKind::BlowUp(_) => format!("({}; {})", a[0], a[1..].join(", ")),
        }
    }
}

impl fmt::Display for SurfaceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SurfaceKind::Product => write!(f, "S^2xS^2"),
            SurfaceKind::BlowUp(0) => write!(f, "CP^2"),
            SurfaceKind::BlowUp(k) => write!(f, "CP^2#{k}(-CP^2)"),
        }
    }
}

/// Sorts the exceptional areas into nonincreasing order by transpositions.
fn sort_exceptional_areas(surface: &SurfaceModel, u: &mut SymplecticClass, word: &mut WeylWord) {
    let k = surface.rank() - 1;
    for i in 1..=k {
        let areas = u.areas(surface);
        let best = (i..=k)
            .max_by(|&a, &b| areas[a].cmp(&areas[b]).then(b.cmp(&a)))
            .unwrap_or(i);
        if best != i && areas[best] > areas[i] {
            let r = Reflection::Transpose(i, best);
            *u = surface.reflect_symplectic_unchecked(u, &r.root(surface));
            word.push(r);
        }
    }
}

/// An integer class; ordered lexicographically by coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeClass(pub Vec<i64>);

impl LatticeClass {
    pub fn new(coords: Vec<i64>) -> Self {
        Self(coords)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|c| -c).collect())
    }
}

/// A rational cohomology class `u = [omega]`, stored in the lattice basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymplecticClass(pub Vec<Rational>);

impl SymplecticClass {
    pub fn new(coords: Vec<Rational>) -> Self {
        Self(coords)
    }

    /// Builds the class with the given areas on the basis vectors.
    pub fn from_areas(surface: &SurfaceModel, areas: &[Rational]) -> Result<Self> {
        surface.check_len(areas.len())?;
        Ok(Self(gram_apply(surface, areas)))
    }

    /// Areas on the basis vectors; inverse of [`SymplecticClass::from_areas`].
    pub fn areas(&self, surface: &SurfaceModel) -> Vec<Rational> {
        gram_apply(surface, &self.0)
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn scale(&self, lambda: &Rational) -> Self {
        Self(self.0.iter().map(|x| x * lambda).collect())
    }

    /// `(1 - t) self + t other`.
    pub fn lerp(&self, other: &SymplecticClass, t: &Rational) -> Self {
        let s = Rational::from_integer(1.into()) - t;
        Self(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a * &s + b * t)
                .collect(),
        )
    }
}

/// Both supported Gram matrices are involutions, so they convert between
/// coordinates and areas in either direction.
fn gram_apply(surface: &SurfaceModel, v: &[Rational]) -> Vec<Rational> {
    match surface.kind {
        SurfaceKind::Product => vec![v[1].clone(), v[0].clone()],
        SurfaceKind::BlowUp(_) => v
            .iter()
            .enumerate()
            .map(|(i, x)| if i == 0 { x.clone() } else { -x })
            .collect(),
    }
}

/// One generator of the reflection group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reflection {
    /// Swap `E_i` and `E_j` (reflection in `E_i - E_j`); 1-based indices.
    Transpose(usize, usize),
    /// Cremona move, reflection in `H - E_i - E_j - E_l`.
    Cremona(usize, usize, usize),
    /// Swap the two factors of `S^2 x S^2` (reflection in `B - F`).
    SwapFactors,
}

impl Reflection {
    pub fn root(&self, surface: &SurfaceModel) -> LatticeClass {
        let mut c = vec![0; surface.rank()];
        match *self {
            Reflection::Transpose(i, j) => {
                c[i] = 1;
                c[j] = -1;
            }
            Reflection::Cremona(i, j, l) => {
                c[0] = 1;
                c[i] = -1;
                c[j] = -1;
                c[l] = -1;
            }
            Reflection::SwapFactors => {
                c[0] = 1;
                c[1] = -1;
            }
        }
        LatticeClass(c)
    }

    pub fn validate(&self, surface: &SurfaceModel) -> Result<()> {
        let ok = match (*self, surface.kind) {
            (Reflection::SwapFactors, SurfaceKind::Product) => true,
            (Reflection::Transpose(i, j), SurfaceKind::BlowUp(k)) => {
                i != j && (1..=k).contains(&i) && (1..=k).contains(&j)
            }
            (Reflection::Cremona(i, j, l), SurfaceKind::BlowUp(k)) => {
                i != j
                    && j != l
                    && i != l
                    && [i, j, l].iter().all(|x| (1..=k).contains(x))
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "reflection {self:?} does not act on {surface}"
            )))
        }
    }
}

/// A word in the reflection generators, applied left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct WeylWord(pub Vec<Reflection>);

impl WeylWord {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    pub fn push(&mut self, r: Reflection) {
        self.0.push(r);
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Every generator is an involution, so the inverse is the reversed word.
    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }

    pub fn validate(&self, surface: &SurfaceModel) -> Result<()> {
        self.0.iter().try_for_each(|r| r.validate(surface))
    }

    pub fn apply_class(&self, surface: &SurfaceModel, a: &LatticeClass) -> LatticeClass {
        self.0.iter().fold(a.clone(), |acc, r| {
            surface.reflect_unchecked(&acc, &r.root(surface))
        })
    }

    pub fn apply_symplectic(&self, surface: &SurfaceModel, u: &SymplecticClass) -> SymplecticClass {
        self.0.iter().fold(u.clone(), |acc, r| {
            surface.reflect_symplectic_unchecked(&acc, &r.root(surface))
        })
    }
}

/// Runs Cremona moves on an integer class of a blow-up, padded to at least
/// three exceptional coordinates, and reports whether it lands on some `E_i`.
pub fn reduces_to_exceptional_basis_class(surface: &SurfaceModel, a: &LatticeClass) -> bool {
    let Some(k) = surface.blow_ups() else {
        return false;
    };
    if a.0.len() != k + 1 {
        return false;
    }
    let mut d = a.0[0];
    let mut m: Vec<i64> = a.0[1..].iter().map(|x| -x).collect();
    m.resize(k.max(3), 0);
    loop {
        if d < 0 {
            return false;
        }
        if d == 0 {
            return m.iter().filter(|&&x| x == -1).count() == 1 && m.iter().all(|&x| x == 0 || x == -1);
        }
        m.sort_unstable_by(|x, y| y.cmp(x));
        let excess = d - m[0] - m[1] - m[2];
        if excess >= 0 {
            return false;
        }
        d += excess;
        for x in m.iter_mut().take(3) {
            *x += excess;
        }
    }
}
