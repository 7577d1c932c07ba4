//! Ball packings: blow-up classes and the capacities at which the space of
//! ball embeddings can change.
//!
//! Balls of capacity `c_i` in a surface with class `u` correspond to the
//! blow-up class whose new exceptional curves have areas `c_i`. For the
//! product, the blow-up at one point is identified with the two-fold blow-up
//! of the plane via `B = H - E_1`, `F = H - E_2`, new exceptional class
//! `H - E_1 - E_2`; further balls become `E_3, E_4, ...`.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{LatticeClass, SurfaceKind, SurfaceModel, SymplecticClass};
use crate::rational::{exact_sqrt, format_rational, int, sqrt_lower_bound, Rational};
use crate::spheres::{positive_square_floor, AreaForm, Certification, ClassCatalog, EnumerationBounds};
use crate::stability::Direction;

/// Square floor scanned when the caller gives none.
pub const DEFAULT_SCAN_FLOOR: i64 = 10;

/// Largest Euler characteristic of the base for which the stability
/// conclusion on each interval is asserted.
pub const MAX_EULER_CHARACTERISTIC: usize = 11;

const SQRT_BITS: u32 = 64;
const APPROACH_STEPS: u32 = 48;

/// Balls placed in `base`. In ray mode the capacities are weights `w_i` and
/// the balls have capacities `c w_i` for a varying `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallConfig {
    pub base: SurfaceModel,
    pub capacities: Vec<Rational>,
    pub ray_mode: bool,
}

impl BallConfig {
    pub fn new(base: SurfaceModel, capacities: Vec<Rational>, ray_mode: bool) -> Result<Self> {
        if capacities.is_empty() {
            return Err(Error::InvalidArgument("at least one ball is required".into()));
        }
        if let Some(c) = capacities.iter().find(|c| !c.is_positive()) {
            return Err(Error::InvalidArgument(format!(
                "capacities must be positive, got {}",
                format_rational(c)
            )));
        }
        let config = Self {
            base,
            capacities,
            ray_mode,
        };
        config.blown_up_surface()?;
        Ok(config)
    }

    pub fn balls(&self) -> usize {
        self.capacities.len()
    }

    pub fn blown_up_surface(&self) -> Result<SurfaceModel> {
        let m = self.balls();
        let k = match self.base.kind() {
            SurfaceKind::Product => m + 1,
            SurfaceKind::BlowUp(k) => k + m,
        };
        if k > 9 {
            return Err(Error::TooManyBlowUps(k));
        }
        SurfaceModel::blow_up(k)
    }

    /// The exceptional class of each ball in the blown-up surface.
    pub fn ball_classes(&self) -> Result<Vec<LatticeClass>> {
        let target = self.blown_up_surface()?;
        let rank = target.rank();
        Ok((0..self.balls())
            .map(|j| match self.base.kind() {
                SurfaceKind::Product if j == 0 => {
                    let mut v = vec![0; rank];
                    v[..3].copy_from_slice(&[1, -1, -1]);
                    LatticeClass::new(v)
                }
                SurfaceKind::Product => target.basis_class(j + 2),
                SurfaceKind::BlowUp(k) => target.basis_class(k + 1 + j),
            })
            .collect())
    }
}

/// Areas on the blown-up surface for capacities `caps` (which may be zero).
fn lifted_areas(base: &SurfaceModel, u: &SymplecticClass, caps: &[Rational]) -> Vec<Rational> {
    let areas = u.areas(base);
    match base.kind() {
        SurfaceKind::Product => {
            let (b, f) = (&areas[0], &areas[1]);
            let c = &caps[0];
            let mut out = vec![b + f - c, f - c, b - c];
            out.extend(caps[1..].iter().cloned());
            out
        }
        SurfaceKind::BlowUp(_) => areas.into_iter().chain(caps.iter().cloned()).collect(),
    }
}

fn lift(base: &SurfaceModel, u: &SymplecticClass, caps: &[Rational]) -> Result<(SurfaceModel, SymplecticClass)> {
    let target = match base.kind() {
        SurfaceKind::Product => SurfaceModel::blow_up(caps.len() + 1)?,
        SurfaceKind::BlowUp(k) => SurfaceModel::blow_up(k + caps.len())?,
    };
    let class = SymplecticClass::from_areas(&target, &lifted_areas(base, u, caps))?;
    Ok((target, class))
}

/// The class with new exceptional areas `caps`, without any validity check.
pub fn lifted_class(base: &SurfaceModel, u: &SymplecticClass, caps: &[Rational]) -> Result<SymplecticClass> {
    if base.kind() == SurfaceKind::Product && caps.is_empty() {
        return Err(Error::InvalidArgument("at least one ball is required".into()));
    }
    Ok(lift(base, u, caps)?.1)
}

/// The class `u_c` on the blown-up surface, rejected unless it is forward and
/// positive on every exceptional class.
pub fn blowup_class(
    base: &SurfaceModel,
    u: &SymplecticClass,
    config: &BallConfig,
) -> Result<(SurfaceModel, SymplecticClass)> {
    if *base != config.base {
        return Err(Error::SurfaceMismatch(format!("{} vs {}", base, config.base)));
    }
    base.check_forward(u)?;
    let (target, class) = lift(base, u, &config.capacities)?;
    target.reduce(&class)?;
    Ok((target, class))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalValue {
    pub capacity: Rational,
    /// Blow-up classes whose area vanishes at `capacity`, with the side they
    /// are positive on: `Lost` when positive below.
    pub wall_classes: Vec<(LatticeClass, Direction)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapacityInterval {
    pub lower: Rational,
    /// `None` stands for `c_max`.
    pub upper: Option<Rational>,
    pub sample: Rational,
    pub stable: bool,
    pub certification: Certification,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapacityProfile {
    pub base: SurfaceModel,
    pub blown_up: SurfaceModel,
    pub weights: Vec<Rational>,
    pub c_max_squared: Rational,
    /// `c_max` itself when rational, otherwise a lower bound within `2^-64`.
    pub c_max: Rational,
    pub c_max_exact: bool,
    pub critical_values: Vec<CriticalValue>,
    pub intervals: Vec<CapacityInterval>,
    /// Candidates of square `>= -square_floor` were scanned.
    pub square_floor: i64,
    /// Every critical value in `(0, exhaustive_up_to]` has been found.
    /// `None` when no finite floor is derivable.
    pub exhaustive_up_to: Option<Rational>,
    pub warnings: Vec<String>,
}

impl CapacityProfile {
    pub fn critical_capacities(&self) -> Vec<Rational> {
        self.critical_values.iter().map(|c| c.capacity.clone()).collect()
    }
}

/// `(c_max^2, c_max or a lower bound, exact)` for the ray with weights `w`.
fn capacity_limit(base: &SurfaceModel, u: &SymplecticClass, w: &[Rational]) -> Result<(Rational, Rational, bool)> {
    let u2 = base.pair_rational(u, u)?;
    let linear = -base.area(u, &base.canonical())?;
    let w1: Rational = w.iter().sum();
    let w2: Rational = w.iter().map(|x| x * x).sum();
    let by_square = &u2 / &w2;
    let by_canonical = &linear / &w1;
    let lin2 = &by_canonical * &by_canonical;
    if lin2 <= by_square {
        return Ok((lin2, by_canonical, true));
    }
    match exact_sqrt(&by_square) {
        Some(c) => Ok((by_square, c, true)),
        None => {
            let lo = sqrt_lower_bound(&by_square, SQRT_BITS);
            Ok((by_square, lo, false))
        }
    }
}

fn scaled(w: &[Rational], c: &Rational) -> Vec<Rational> {
    w.iter().map(|x| x * c).collect()
}

/// Critical capacities along the ray `c (w_1, .., w_m)`, `0 < c < c_max`.
pub fn critical_capacities(
    base: &SurfaceModel,
    u: &SymplecticClass,
    config: &BallConfig,
    bounds: &EnumerationBounds,
) -> Result<CapacityProfile> {
    if !config.ray_mode {
        return Err(Error::InvalidArgument("critical capacities need a ray of weights".into()));
    }
    if *base != config.base {
        return Err(Error::SurfaceMismatch(format!("{} vs {}", base, config.base)));
    }
    base.check_forward(u)?;
    let w = &config.capacities;
    let target = config.blown_up_surface()?;
    let catalog = ClassCatalog::new(target, bounds.clone())?;
    let mut warnings = Vec::new();
    if base.euler_characteristic() > MAX_EULER_CHARACTERISTIC {
        warnings.push(format!(
            "base Euler characteristic {} exceeds {MAX_EULER_CHARACTERISTIC}; interval stability is not asserted by the underlying lemma",
            base.euler_characteristic()
        ));
    }
    warnings.push(
        "c_max uses forwardness and positivity of the new exceptional classes only; the true packing bound may be smaller".into(),
    );
    warnings.push("walls are negative-square sphere candidates; higher-genus negative curves are not enumerated".into());

    let (c_max_squared, c_max, c_max_exact) = capacity_limit(base, u, w)?;
    let below = |c: &Rational| c.is_positive() && c * c < c_max_squared;

    let zero = vec![Rational::zero(); w.len()];
    let (_, u0) = lift(base, u, &zero)?;
    let (_, u1) = lift(base, u, w)?;

    // Scan floor: candidates positive anywhere on the ray live above it.
    let floor0 = positive_square_floor(&target, &u0)?;
    let requested = bounds.square_min.map(|s| -s);
    let square_floor = match (floor0, requested) {
        (Some(f), Some(r)) => f.max(r),
        (Some(f), None) => f.max(DEFAULT_SCAN_FLOOR),
        (None, Some(r)) => r,
        (None, None) => {
            return Err(Error::MissingBounds(
                "the blown-up surface has K.K = 0; supply square_min".into(),
            ))
        }
    };

    // Largest verified point c(1 - 2^-j) whose own floor is covered by the scan.
    let exhaustive_up_to = match floor0 {
        Some(f) if f <= square_floor => {
            let mut best = Rational::zero();
            let mut gap = Rational::from_integer(1.into());
            for _ in 0..APPROACH_STEPS {
                gap /= int(2);
                let c = &c_max * (Rational::from_integer(1.into()) - &gap);
                if !below(&c) {
                    continue;
                }
                let (_, uc) = lift(base, u, &scaled(w, &c))?;
                match positive_square_floor(&target, &uc)? {
                    Some(fc) if fc <= square_floor => best = c,
                    _ => break,
                }
            }
            Some(best)
        }
        _ => None,
    };
    match &exhaustive_up_to {
        Some(c) => warnings.push(format!(
            "scan down to square -{square_floor} is exhaustive for capacities up to {}",
            format_rational(c)
        )),
        None => warnings.push(format!(
            "no derivable square floor; only squares >= -{square_floor} were scanned"
        )),
    }

    // Rational point at or beyond c_max: a class crossing below c_max is
    // positive at 0 or there.
    let c_up = if c_max_exact {
        c_max.clone()
    } else {
        &c_max + Rational::new(1.into(), num_bigint::BigInt::from(1) << SQRT_BITS as usize)
    };
    let (_, u_up) = lift(base, u, &scaled(w, &c_up))?;
    let f0 = AreaForm::new(&target, &u0);
    let f1 = AreaForm::new(&target, &u1);
    let f_up = AreaForm::new(&target, &u_up);

    let mut crossings: Vec<(Rational, LatticeClass, Direction)> = Vec::new();
    for s in (-square_floor..=-1).rev() {
        for a in catalog.positive_classes(s, &[&f0, &f_up])? {
            let a0 = f0.area(&a);
            let slope = &a0 - f1.area(&a);
            if a0.is_zero() || slope.is_zero() {
                continue;
            }
            let c = &a0 / &slope;
            if below(&c) {
                let dir = if slope.is_positive() { Direction::Lost } else { Direction::Gained };
                crossings.push((c, a, dir));
            }
        }
    }
    crossings.sort();

    // A crossing is a wall only if the class is a member of the sphere-class
    // set on its positive side: sample each gap of the raw arrangement.
    let mut raw_cuts: Vec<Rational> = vec![Rational::zero()];
    for (c, _, _) in &crossings {
        if raw_cuts.last() != Some(c) {
            raw_cuts.push(c.clone());
        }
    }
    let mut frames = Vec::with_capacity(raw_cuts.len());
    for (i, lower) in raw_cuts.iter().enumerate() {
        let top = raw_cuts.get(i + 1).unwrap_or(&c_max);
        let sample = (lower + top) / int(2);
        let (_, us) = lift(base, u, &scaled(w, &sample))?;
        frames.push(catalog.frame(&us));
    }

    let mut critical_values: Vec<CriticalValue> = Vec::new();
    for (c, a, dir) in crossings {
        let at = raw_cuts.binary_search(&c).expect("cut present");
        let side = match dir {
            Direction::Lost => at - 1,
            Direction::Gained => at,
        };
        // Outside the symplectic cone there is nothing to embed.
        if frames[side].is_none() || !catalog.admits(&frames[side], &a) {
            continue;
        }
        match critical_values.last_mut() {
            Some(last) if last.capacity == c => last.wall_classes.push((a, dir)),
            _ => critical_values.push(CriticalValue {
                capacity: c,
                wall_classes: vec![(a, dir)],
            }),
        }
    }

    let mut cuts: Vec<Rational> = vec![Rational::zero()];
    cuts.extend(critical_values.iter().map(|c| c.capacity.clone()));
    let mut intervals = Vec::with_capacity(cuts.len());
    for (i, lower) in cuts.iter().enumerate() {
        let upper = cuts.get(i + 1).cloned();
        let top = upper.clone().unwrap_or_else(|| c_max.clone());
        let sample = (lower + &top) / int(2);
        let (_, us) = lift(base, u, &scaled(w, &sample))?;
        let certification = catalog
            .spherical_set(&us, square_floor)?
            .with_cremona_certification()
            .certification;
        intervals.push(CapacityInterval {
            lower: lower.clone(),
            upper,
            sample,
            stable: base.euler_characteristic() <= MAX_EULER_CHARACTERISTIC,
            certification,
        });
    }

    Ok(CapacityProfile {
        base: *base,
        blown_up: target,
        weights: w.clone(),
        c_max_squared,
        c_max,
        c_max_exact,
        critical_values,
        intervals,
        square_floor,
        exhaustive_up_to,
        warnings,
    })
}
