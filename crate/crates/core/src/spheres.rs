//! Sphere-class candidates and the sets `S_u^{>=-n}`.
//!
//! A candidate of square `s < 0` is an integer class `A` with `A.A = s` and
//! `K.A = -s - 2`. For blow-ups with `k <= 8` (and the product) every shell is
//! finite: writing `A = dH - sum m_i E_i`, adjunction fixes `sum m_i` and
//! `sum m_i^2` in terms of `d`, and Cauchy-Schwarz on the `m_i` (the
//! negative definiteness of `K^perp`) confines `d` to the roots of a quadratic
//! with leading coefficient `K.K = 9 - k`. At `k = 9` that coefficient
//! vanishes and the user must supply a coefficient box.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::lattice::{reduces_to_exceptional_basis_class, LatticeClass, SurfaceKind, SurfaceModel, SymplecticClass, WeylWord};
use crate::rational::{int, isqrt, Rational};

/// Search limits for candidate enumeration.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EnumerationBounds {
    /// Lowest square considered when no finite floor can be derived (`k = 9`).
    pub square_min: Option<i64>,
    /// Inclusive `(lo, hi)` limits per lattice coordinate; required at `k = 9`.
    pub coefficient_box: Option<Vec<(i64, i64)>>,
}

impl EnumerationBounds {
    pub fn none() -> Self {
        Self::default()
    }

    /// A cube `[-r, r]` on every coordinate.
    pub fn cube(rank: usize, radius: i64, square_min: Option<i64>) -> Self {
        Self {
            square_min,
            coefficient_box: Some(vec![(-radius, radius); rank]),
        }
    }

    pub fn validate(&self, surface: &SurfaceModel) -> Result<()> {
        if let Some(s) = self.square_min {
            if s > -1 {
                return Err(Error::InvalidArgument(format!("square_min must be at most -1, got {s}")));
            }
        }
        if let Some(b) = &self.coefficient_box {
            if b.len() != surface.rank() {
                return Err(Error::DimensionMismatch {
                    expected: surface.rank(),
                    found: b.len(),
                });
            }
            if let Some((lo, hi)) = b.iter().find(|(lo, hi)| lo > hi) {
                return Err(Error::InvalidArgument(format!("empty coefficient range [{lo}, {hi}]")));
            }
        }
        Ok(())
    }
}

/// How far down in square a comparison looks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Floor {
    /// All classes with square `>= -n`.
    Finite(i64),
    /// Every negative square; the floor is derived per pair of classes.
    Unbounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Certification {
    /// Adjunction candidates with positive area.
    Candidate,
    /// Every member is a `-2` class or a `-1` class in the Cremona orbit of some `E_i`.
    CremonaCertified,
}

impl Certification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Certification::Candidate => "candidate",
            Certification::CremonaCertified => "cremona-certified",
        }
    }
}

/// A canonically sorted set of negative sphere-class candidates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereClassSet {
    pub surface: SurfaceModel,
    pub classes: Vec<LatticeClass>,
    /// Members have square in `[-square_floor, -1]`.
    pub square_floor: i64,
    pub certification: Certification,
    /// Members that could not be Cremona-certified (squares `<= -3` always land here).
    pub uncertified: Vec<LatticeClass>,
    /// False when the enumeration was truncated by a user coefficient box.
    pub complete: bool,
    /// True when members were also required to have nonnegative degree in
    /// the reduced frame of `u` (blow-ups inside the symplectic cone).
    pub degree_filtered: bool,
}

impl SphereClassSet {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn contains(&self, a: &LatticeClass) -> bool {
        self.classes.binary_search(a).is_ok()
    }

    /// Upgrades the tier when every member is certifiable.
    pub fn with_cremona_certification(mut self) -> Self {
        let surface = self.surface;
        self.uncertified = self
            .classes
            .iter()
            .filter(|a| {
                let sq = surface.pair_unchecked(a, a);
                match sq {
                    -1 => !reduces_to_exceptional_basis_class(&surface, a),
                    -2 => surface.pair_unchecked(&surface.canonical(), a) != 0,
                    _ => true,
                }
            })
            .cloned()
            .collect();
        self.certification = if self.uncertified.is_empty() {
            Certification::CremonaCertified
        } else {
            Certification::Candidate
        };
        self
    }

    fn from_unsorted(surface: SurfaceModel, mut classes: Vec<LatticeClass>, floor: i64, complete: bool) -> Self {
        classes.sort();
        classes.dedup();
        Self {
            surface,
            classes,
            square_floor: floor,
            certification: Certification::Candidate,
            uncertified: Vec::new(),
            complete,
            degree_filtered: false,
        }
    }
}

/// All adjunction classes of square `s` (complete for `k <= 8` and the
/// product; complete only inside the coefficient box at `k = 9`).
pub fn enumerate_candidates(
    surface: &SurfaceModel,
    s: i64,
    bounds: &EnumerationBounds,
) -> Result<Vec<LatticeClass>> {
    if s >= 0 {
        return Err(Error::InvalidArgument(format!(
            "only negative squares are enumerated, got {s}"
        )));
    }
    bounds.validate(surface)?;
    let mut out = match surface.kind() {
        SurfaceKind::Product => enumerate_product(s),
        SurfaceKind::BlowUp(k) => {
            if k == 9 && bounds.coefficient_box.is_none() {
                return Err(Error::MissingBounds(
                    "CP^2#9(-CP^2) has infinitely many candidates per square; supply a coefficient box".into(),
                ));
            }
            enumerate_blow_up(k, s, bounds.coefficient_box.as_deref())
        }
    };
    if let Some(b) = &bounds.coefficient_box {
        out.retain(|a| a.0.iter().zip(b).all(|(x, (lo, hi))| lo <= x && x <= hi));
    }
    out.sort();
    Ok(out)
}

/// `(a - 1)(b - 1) = 0` for `A = aB + bF`, so `B - mF` and `F - mB` with `s = -2m`.
fn enumerate_product(s: i64) -> Vec<LatticeClass> {
    if s % 2 != 0 {
        return Vec::new();
    }
    let m = -s / 2;
    vec![LatticeClass::new(vec![1, -m]), LatticeClass::new(vec![-m, 1])]
}

/// `kappa d^2 - 6(s+2) d + (s+2)^2 + k s`; nonpositive for every candidate of degree `d`.
fn degree_constraint(k: i64, s: i64, d: i64) -> i128 {
    let (k, s, d) = (k as i128, s as i128, d as i128);
    (9 - k) * d * d - 6 * (s + 2) * d + (s + 2) * (s + 2) + k * s
}

fn degree_window(k: usize, s: i64, coefficient_box: Option<&[(i64, i64)]>) -> Option<(i64, i64)> {
    let kappa = 9 - k as i128;
    let (s1, k1) = (s as i128, k as i128);
    let mut window = if kappa > 0 {
        let disc = 36 * (s1 + 2) * (s1 + 2) - 4 * kappa * ((s1 + 2) * (s1 + 2) + k1 * s1);
        if disc < 0 {
            return None;
        }
        let r = isqrt(disc);
        let lo = Integer::div_floor(&(6 * (s1 + 2) - r - 1), &(2 * kappa)) - 1;
        let hi = Integer::div_ceil(&(6 * (s1 + 2) + r + 1), &(2 * kappa)) + 1;
        (lo as i64, hi as i64)
    } else {
        (i64::MIN, i64::MAX)
    };
    if let Some(b) = coefficient_box {
        window = (window.0.max(b[0].0), window.1.min(b[0].1));
    }
    (window.0 <= window.1 && window.0 > i64::MIN && window.1 < i64::MAX).then_some(window)
}

fn enumerate_blow_up(k: usize, s: i64, coefficient_box: Option<&[(i64, i64)]>) -> Vec<LatticeClass> {
    enumerate_blow_up_pruned(k, s, coefficient_box, &[])
}

/// Enumerates a blow-up shell, skipping every branch on which none of the
/// given area bounds can become positive. With no bounds the shell is complete.
fn enumerate_blow_up_pruned(
    k: usize,
    s: i64,
    coefficient_box: Option<&[(i64, i64)]>,
    bounds: &[AreaBound],
) -> Vec<LatticeClass> {
    let mut out = Vec::new();
    let Some((lo, hi)) = degree_window(k, s, coefficient_box) else {
        return out;
    };
    // Limits on m_i = -a_i.
    let m_limits: Vec<(i64, i64)> = match coefficient_box {
        Some(b) => b[1..].iter().map(|&(lo, hi)| (-hi, -lo)).collect(),
        None => vec![(i64::MIN, i64::MAX); k],
    };
    let mut m = vec![0i64; k];
    for d in lo..=hi {
        if degree_constraint(k as i64, s, d) > 0 {
            continue;
        }
        let sum = 3 * d - s - 2;
        let sq = d * d - s;
        let mut partial: Vec<Option<i128>> = bounds.iter().map(|b| b.nu.checked_mul(d as i128)).collect();
        let mut search = ShellSearch {
            limits: &m_limits,
            bounds,
            m: &mut m,
            emit: &mut |m: &[i64]| {
                let mut c = Vec::with_capacity(k + 1);
                c.push(d);
                c.extend(m.iter().map(|x| -x));
                out.push(LatticeClass::new(c));
            },
        };
        search.fill(0, sum, sq, &mut partial);
    }
    out
}

/// Upper bound data for `u.A = nu d - sum c_i m_i` over the remaining
/// coordinates, in integers scaled by a common denominator.
#[derive(Clone, Debug)]
struct AreaBound {
    nu: i128,
    c: Vec<i128>,
    /// `sum_{j >= i} c_j` and `sum_{j >= i} c_j^2`.
    suffix_sum: Vec<i128>,
    suffix_sq: Vec<Option<i128>>,
}

impl AreaBound {
    fn new(form: &AreaForm) -> Option<Self> {
        let nums: Option<Vec<i128>> = form.numerators.iter().map(|n| i128::try_from(n).ok()).collect();
        let nums = nums?;
        let nu = nums[0];
        let c: Vec<i128> = nums[1..].iter().map(|x| -x).collect();
        let k = c.len();
        let mut suffix_sum = vec![0i128; k + 1];
        let mut suffix_sq = vec![Some(0i128); k + 1];
        for i in (0..k).rev() {
            suffix_sum[i] = suffix_sum[i + 1].checked_add(c[i])?;
            suffix_sq[i] = c[i]
                .checked_mul(c[i])
                .and_then(|x| suffix_sq[i + 1].and_then(|y| y.checked_add(x)));
        }
        Some(Self {
            nu,
            c,
            suffix_sum,
            suffix_sq,
        })
    }

    /// Whether `partial - sum_{j >= i} c_j m_j` can be positive for some real
    /// `m` with the given remaining sum and sum of squares. Overflow answers yes.
    fn may_be_positive(&self, i: usize, partial: Option<i128>, sum: i64, sq: i64) -> bool {
        let r = (self.c.len() - i) as i128;
        let Some(p) = partial else { return true };
        if r == 0 {
            return p > 0;
        }
        let (sum, sq) = (sum as i128, sq as i128);
        // r * (partial - mean(c) * sum) and the spread terms of Cauchy-Schwarz.
        let check = || -> Option<bool> {
            let rt = r.checked_mul(p)?.checked_sub(self.suffix_sum[i].checked_mul(sum)?)?;
            if rt > 0 {
                return Some(true);
            }
            let spread_m = r.checked_mul(sq)?.checked_sub(sum.checked_mul(sum)?)?;
            let spread_c = r
                .checked_mul(self.suffix_sq[i]?)?
                .checked_sub(self.suffix_sum[i].checked_mul(self.suffix_sum[i])?)?;
            let lhs = rt.checked_mul(rt)?;
            let rhs = spread_m.checked_mul(spread_c)?;
            Some(rhs > lhs)
        };
        check().unwrap_or(true)
    }
}

struct ShellSearch<'a, F: FnMut(&[i64])> {
    limits: &'a [(i64, i64)],
    bounds: &'a [AreaBound],
    m: &'a mut Vec<i64>,
    emit: &'a mut F,
}

impl<F: FnMut(&[i64])> ShellSearch<'_, F> {
    /// Visits integer vectors with prescribed sum and sum of squares.
    fn fill(&mut self, i: usize, sum: i64, sq: i64, partial: &mut Vec<Option<i128>>) {
        let r = (self.m.len() - i) as i128;
        if r == 0 {
            if sum == 0 && sq == 0 {
                (self.emit)(self.m);
            }
            return;
        }
        if sq < 0 || (sum as i128) * (sum as i128) > r * sq as i128 || (sum - sq).rem_euclid(2) != 0 {
            return;
        }
        if !self.bounds.is_empty()
            && !self
                .bounds
                .iter()
                .zip(partial.iter())
                .any(|(b, p)| b.may_be_positive(i, *p, sum, sq))
        {
            return;
        }
        let bound = isqrt(sq as i128) as i64;
        let lo = (-bound).max(self.limits[i].0);
        let hi = bound.min(self.limits[i].1);
        for x in lo..=hi {
            self.m[i] = x;
            let next: Vec<Option<i128>> = self
                .bounds
                .iter()
                .zip(partial.iter())
                .map(|(b, p)| p.and_then(|p| b.c[i].checked_mul(x as i128).and_then(|t| p.checked_sub(t))))
                .collect();
            let mut next = next;
            self.fill(i + 1, sum - x, sq - x * x, &mut next);
        }
        self.m[i] = 0;
    }
}

/// Classes of square `s` with positive area on at least one of `forms`
/// (a superset is produced by pruning; the caller filters exactly).
fn positive_shell(
    surface: &SurfaceModel,
    s: i64,
    bounds: &EnumerationBounds,
    forms: &[&AreaForm],
) -> Result<Vec<LatticeClass>> {
    let SurfaceKind::BlowUp(k) = surface.kind() else {
        return enumerate_candidates(surface, s, bounds);
    };
    let pruning: Option<Vec<AreaBound>> = forms.iter().map(|f| AreaBound::new(f)).collect();
    let Some(pruning) = pruning else {
        return enumerate_candidates(surface, s, bounds);
    };
    if k == 9 && bounds.coefficient_box.is_none() {
        return Err(Error::MissingBounds(
            "CP^2#9(-CP^2) has infinitely many candidates per square; supply a coefficient box".into(),
        ));
    }
    let boxed = if k == 9 { bounds.coefficient_box.as_deref() } else { None };
    let mut out = enumerate_blow_up_pruned(k, s, boxed, &pruning);
    if let Some(b) = boxed {
        out.retain(|a| a.0.iter().zip(b).all(|(x, (lo, hi))| lo <= x && x <= hi));
    }
    Ok(out)
}

/// Exact evaluation of `u.A` with a common denominator cleared once.
#[derive(Clone, Debug)]
pub(crate) struct AreaForm {
    surface: SurfaceModel,
    numerators: Vec<BigInt>,
    denominator: BigInt,
}

impl AreaForm {
    pub(crate) fn new(surface: &SurfaceModel, u: &SymplecticClass) -> Self {
        let denominator = u
            .coords()
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let numerators = u
            .coords()
            .iter()
            .map(|q| q.numer() * (&denominator / q.denom()))
            .collect();
        Self {
            surface: *surface,
            numerators,
            denominator,
        }
    }

    fn scaled(&self, a: &LatticeClass) -> BigInt {
        let n = &self.numerators;
        let c = &a.0;
        match self.surface.kind() {
            SurfaceKind::Product => &n[0] * c[1] + &n[1] * c[0],
            SurfaceKind::BlowUp(_) => {
                let mut acc = &n[0] * c[0];
                for i in 1..n.len() {
                    acc -= &n[i] * c[i];
                }
                acc
            }
        }
    }

    pub(crate) fn is_positive(&self, a: &LatticeClass) -> bool {
        self.scaled(a).is_positive()
    }

    pub(crate) fn area(&self, a: &LatticeClass) -> Rational {
        Rational::new(self.scaled(a), self.denominator.clone())
    }
}

/// Smallest `n` such that every candidate of square `< -n` has negative area
/// on the forward class `u`. `None` when `K.K = 0`.
///
/// With `A = (x / K.K) K + A'` for `x = K.A = -A.A - 2` and `A'` in the
/// negative definite complement of `K`, the area `u.A` is at most
/// `-x |u.K| / K.K + sqrt(p (x + 2 + x^2 / K.K))` where `p = -u'.u'`. It is
/// negative once `(u.u / K.K) x^2 - p x - 2p > 0`, a condition that stays true
/// for all larger `x` because the quadratic is convex and nonpositive at zero.
pub fn positive_square_floor(surface: &SurfaceModel, u: &SymplecticClass) -> Result<Option<i64>> {
    surface.check_forward(u)?;
    let kappa = surface.canonical_square();
    if kappa == 0 {
        return Ok(None);
    }
    let kappa = int(kappa);
    let a = -surface.area(u, &surface.canonical())?;
    let u2 = surface.pair_rational(u, u)?;
    let p = &a * &a / &kappa - &u2;
    let lead = &u2 / &kappa;
    let q = |x: i64| {
        let x = int(x);
        &lead * &x * &x - &p * &x - int(2) * &p
    };
    let mut hi: i64 = 1;
    while !q(hi).is_positive() {
        hi *= 2;
    }
    let mut lo = hi / 2; // q(lo) <= 0 unless lo == 0
    if lo == 0 {
        return Ok(Some(2));
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if q(mid).is_positive() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // Squares -hi - 2 and below are excluded.
    Ok(Some(hi + 1))
}

/// Memoised candidate shells for one surface and one set of bounds.
///
/// All comparison operations run through a catalog so repeated queries on the
/// same surface enumerate each shell once.
#[derive(Debug)]
pub struct ClassCatalog {
    surface: SurfaceModel,
    bounds: EnumerationBounds,
    shells: Mutex<BTreeMap<i64, Arc<Vec<LatticeClass>>>>,
}

impl Clone for ClassCatalog {
    fn clone(&self) -> Self {
        Self {
            surface: self.surface,
            bounds: self.bounds.clone(),
            shells: Mutex::new(self.shells.lock().expect("catalog lock").clone()),
        }
    }
}

impl ClassCatalog {
    pub fn new(surface: SurfaceModel, bounds: EnumerationBounds) -> Result<Self> {
        bounds.validate(&surface)?;
        Ok(Self {
            surface,
            bounds,
            shells: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn surface(&self) -> &SurfaceModel {
        &self.surface
    }

    pub fn bounds(&self) -> &EnumerationBounds {
        &self.bounds
    }

    /// Whether results are complete rather than limited to a coefficient box.
    pub fn is_complete(&self) -> bool {
        self.surface.canonical_square() > 0
    }

    pub fn shell(&self, s: i64) -> Result<Arc<Vec<LatticeClass>>> {
        if let Some(v) = self.shells.lock().expect("catalog lock").get(&s) {
            return Ok(v.clone());
        }
        let bounds = if self.is_complete() {
            EnumerationBounds::none()
        } else {
            self.bounds.clone()
        };
        let shell = Arc::new(enumerate_candidates(&self.surface, s, &bounds)?);
        self.shells
            .lock()
            .expect("catalog lock")
            .insert(s, shell.clone());
        Ok(shell)
    }

    /// Full shells are memoised while they stay small; larger shells are
    /// searched with area pruning on every call.
    fn caches_full_shell(&self, s: i64) -> bool {
        match self.surface.kind() {
            SurfaceKind::Product => true,
            SurfaceKind::BlowUp(k) => k <= 5 || s >= -3,
        }
    }

    /// A superset of the classes of square `s` positive on one of `forms`.
    pub(crate) fn positive_classes(&self, s: i64, forms: &[&AreaForm]) -> Result<Vec<LatticeClass>> {
        if self.caches_full_shell(s) {
            return Ok(self.shell(s)?.as_ref().clone());
        }
        positive_shell(&self.surface, s, &self.bounds, forms)
    }

    pub fn check_same_surface(&self, surface: &SurfaceModel) -> Result<()> {
        if *surface == self.surface {
            Ok(())
        } else {
            Err(Error::SurfaceMismatch(format!("{} vs {}", surface, self.surface)))
        }
    }

    /// The floor `n` such that `S_u^{<0}` and `S_v^{<0}` both live in squares `>= -n`.
    pub fn resolve_floor(&self, floor: Floor, classes: &[&SymplecticClass]) -> Result<i64> {
        match floor {
            Floor::Finite(n) if n >= 1 => Ok(n),
            Floor::Finite(n) => Err(Error::InvalidArgument(format!("floor must be at least 1, got {n}"))),
            Floor::Unbounded => {
                if !self.is_complete() {
                    return self.bounds.square_min.map(|s| -s).ok_or_else(|| {
                        Error::MissingBounds(
                            "no finite square floor is derivable when K.K = 0; supply square_min".into(),
                        )
                    });
                }
                let mut n = 1;
                for u in classes {
                    let f = positive_square_floor(&self.surface, u)?.expect("K.K > 0");
                    n = n.max(f);
                }
                Ok(n)
            }
        }
    }

    /// Membership test beyond positive area. On a blow-up inside the
    /// symplectic cone, a class that is not the exceptional class of a ball
    /// must have nonnegative degree after reduction, since a line through two
    /// generic points meets every other embedded sphere nonnegatively.
    /// Outside the cone (or on the product) only the area is used.
    pub(crate) fn frame(&self, u: &SymplecticClass) -> Option<WeylWord> {
        match self.surface.kind() {
            SurfaceKind::Product => None,
            SurfaceKind::BlowUp(_) => self.surface.reduce(u).ok().map(|(_, w)| w),
        }
    }

    pub(crate) fn admits(&self, frame: &Option<WeylWord>, a: &LatticeClass) -> bool {
        frame.as_ref().map_or(true, |w| w.apply_class(&self.surface, a).0[0] >= 0)
    }

    /// Candidates `A` with `-n <= A.A <= -1`, `u.A > 0`, and nonnegative
    /// degree in the reduced frame of `u` when that frame exists.
    pub fn spherical_set(&self, u: &SymplecticClass, n: i64) -> Result<SphereClassSet> {
        self.surface.check_forward(u)?;
        if n < 1 {
            return Err(Error::InvalidArgument(format!("floor must be at least 1, got {n}")));
        }
        let form = AreaForm::new(&self.surface, u);
        let frame = self.frame(u);
        let mut classes = Vec::new();
        for s in (-n..=-1).rev() {
            classes.extend(
                self.positive_classes(s, &[&form])?
                    .into_iter()
                    .filter(|a| form.is_positive(a) && self.admits(&frame, a)),
            );
        }
        let mut set = SphereClassSet::from_unsorted(self.surface, classes, n, self.is_complete());
        set.degree_filtered = frame.is_some();
        Ok(set)
    }

    /// `(S_u \ S_v, S_v \ S_u)` restricted to squares `>= -n`.
    pub fn symmetric_difference(
        &self,
        u: &SymplecticClass,
        v: &SymplecticClass,
        floor: Floor,
    ) -> Result<(SphereClassSet, SphereClassSet)> {
        self.surface.check_forward(u)?;
        self.surface.check_forward(v)?;
        let n = self.resolve_floor(floor, &[u, v])?;
        let fu = AreaForm::new(&self.surface, u);
        let fv = AreaForm::new(&self.surface, v);
        let (wu, wv) = (self.frame(u), self.frame(v));
        let (mut only_u, mut only_v) = (Vec::new(), Vec::new());
        for s in (-n..=-1).rev() {
            for a in self.positive_classes(s, &[&fu, &fv])?.iter() {
                let in_u = fu.is_positive(a) && self.admits(&wu, a);
                let in_v = fv.is_positive(a) && self.admits(&wv, a);
                match (in_u, in_v) {
                    (true, false) => only_u.push(a.clone()),
                    (false, true) => only_v.push(a.clone()),
                    _ => {}
                }
            }
        }
        let complete = self.is_complete();
        let mut a = SphereClassSet::from_unsorted(self.surface, only_u, n, complete);
        let mut b = SphereClassSet::from_unsorted(self.surface, only_v, n, complete);
        a.degree_filtered = wu.is_some();
        b.degree_filtered = wv.is_some();
        Ok((a, b))
    }
}

/// One-shot form of [`ClassCatalog::spherical_set`].
pub fn spherical_set(
    surface: &SurfaceModel,
    u: &SymplecticClass,
    n: i64,
    bounds: &EnumerationBounds,
) -> Result<SphereClassSet> {
    ClassCatalog::new(*surface, bounds.clone())?.spherical_set(u, n)
}

/// One-shot form of [`ClassCatalog::symmetric_difference`].
pub fn symmetric_difference(
    surface: &SurfaceModel,
    u: &SymplecticClass,
    v: &SymplecticClass,
    floor: Floor,
    bounds: &EnumerationBounds,
) -> Result<(SphereClassSet, SphereClassSet)> {
    ClassCatalog::new(*surface, bounds.clone())?.symmetric_difference(u, v, floor)
}



#[cfg(test)]
mod pruning_tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn pruned_shell_matches_filtered_full_shell() {
        let s = SurfaceModel::blow_up(6).unwrap();
        let u = SymplecticClass::from_areas(
            &s,
            &[int(3), ratio(9, 10), ratio(4, 5), ratio(3, 5), ratio(1, 2), ratio(1, 3), ratio(1, 7)],
        )
        .unwrap();
        let form = AreaForm::new(&s, &u);
        for sq in -8..=-1 {
            let full: Vec<_> = enumerate_candidates(&s, sq, &EnumerationBounds::none())
                .unwrap()
                .into_iter()
                .filter(|a| form.is_positive(a))
                .collect();
            let mut pruned: Vec<_> = positive_shell(&s, sq, &EnumerationBounds::none(), &[&form])
                .unwrap()
                .into_iter()
                .filter(|a| form.is_positive(a))
                .collect();
            pruned.sort();
            assert_eq!(full, pruned, "square {sq}");
        }
    }

    #[test]
    fn eight_point_sets_are_fast() {
        let s = SurfaceModel::blow_up(8).unwrap();
        let u = SymplecticClass::from_areas(
            &s,
            &[int(3), ratio(9, 10), ratio(4, 5), ratio(3, 5), ratio(1, 2), ratio(1, 3), ratio(1, 7), ratio(1, 11), ratio(1, 13)],
        )
        .unwrap();
        let catalog = ClassCatalog::new(s, EnumerationBounds::none()).unwrap();
        let n = catalog.resolve_floor(Floor::Unbounded, &[&u]).unwrap();
        let t = std::time::Instant::now();
        let set = catalog.spherical_set(&u, n).unwrap();
        eprintln!("floor {n}: {} classes in {:?}", set.len(), t.elapsed());
        assert_eq!(set.classes.iter().filter(|a| s.square(a).unwrap() == -1).count(), 240);
    }
}
