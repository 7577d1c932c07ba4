//! Stability verdicts for homotopy groups of symplectomorphism groups, and
//! wall-crossing certificates along the segment between two classes.
//!
//! Verdicts are statements backed by the stability theorems for rational
//! surfaces, emitted with the evidence that triggers them; nothing here
//! computes a homotopy group.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{LatticeClass, SurfaceModel, SymplecticClass};
use crate::rational::{format_rational, int, Rational};
use crate::spheres::{AreaForm, Certification, ClassCatalog, Floor, SphereClassSet};

/// Version tag of the certificate layout.
pub const CERTIFICATE_VERSION: u32 = 1;

/// Largest number of halvings tried when perturbing a segment endpoint.
const MAX_HALVINGS: u32 = 64;

pub const CITE_FULL: &str = "equal negative sphere-class sets: pi_i(Symp(M,w)) = pi_i(Symp(M,w')) for all i > 0, and pi_0(G_w) = pi_0(G_w')";
pub const CITE_LEVEL: &str = "equal sphere-class sets down to square -n: pi_i agree for 1 <= i <= 2n-3";
pub const CITE_NONNEGATIVE: &str = "classes of nonnegative square have the same area sign on all forward classes, so only negative squares are compared";
pub const CITE_INCLUSION: &str = "inclusion of sphere-class sets S_u in S_u' gives inclusion of compatible almost complex structures A_u in A_u'";
pub const CITE_BASIC: &str = "an inclusion A_u in A_u' that is an equality below codimension 2n induces isomorphisms on pi_i(G) for 1 <= i <= 2n-3";
pub const CITE_CONVEXITY: &str = "areas are linear along the segment, so a class positive at both endpoints never vanishes in between";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StabilityMode {
    /// The full negative sphere-class sets agree.
    Full,
    /// The sets agree down to square `-n` and differ at square `-n - 1`.
    Level(i64),
    /// The sets already differ at square `-1`.
    None,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityVerdict {
    pub mode: StabilityMode,
    /// Inclusive range of `i` with isomorphic `pi_i`; `None` when empty or for `Full`.
    pub range: Option<(i64, i64)>,
    pub pi0_equal: bool,
    pub justification: Vec<String>,
    pub certification_tier: Certification,
    /// Square floor down to which the sets were compared.
    pub compared_floor: i64,
    /// Size of the symmetric difference at that floor.
    pub difference_size: usize,
}

impl StabilityVerdict {
    fn from_difference(
        surface: &SurfaceModel,
        only_u: &SphereClassSet,
        only_v: &SphereClassSet,
        tier: Certification,
    ) -> Self {
        let max_square = only_u
            .classes
            .iter()
            .chain(&only_v.classes)
            .map(|a| surface.pair_unchecked(a, a))
            .max();
        let difference_size = only_u.len() + only_v.len();
        let mut justification = vec![CITE_NONNEGATIVE.to_string()];
        let (mode, range, pi0_equal) = match max_square {
            None => {
                justification.push(CITE_FULL.to_string());
                (StabilityMode::Full, None, true)
            }
            Some(s) => {
                let n = -s - 1;
                justification.push(format!("sets agree down to square -{n} and differ at square {s}"));
                let range = (n >= 2).then_some((1, 2 * n - 3));
                if n >= 2 {
                    justification.push(format!("{CITE_LEVEL} with n = {n}"));
                } else {
                    justification.push(format!("the range 1 <= i <= 2n-3 is empty for n = {n}"));
                }
                let mode = if n >= 1 {
                    StabilityMode::Level(n)
                } else {
                    StabilityMode::None
                };
                (mode, range, false)
            }
        };
        Self {
            mode,
            range,
            pi0_equal,
            justification,
            certification_tier: tier,
            compared_floor: only_u.square_floor,
            difference_size,
        }
    }
}

/// Whether the class enters or leaves the sphere-class set as `t` grows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Gained,
    Lost,
}

/// A wall `{w : w.A = 0}` met by `u_t = (1 - t) u + t u'` at `t_star`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallCrossing {
    pub wall_class: LatticeClass,
    pub t_star: Rational,
    pub direction: Direction,
}

/// Replacement start point with the witness that its sphere-class set is unchanged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Perturbation {
    pub point: SymplecticClass,
    pub epsilon: Rational,
    /// Index of the area coordinate that was moved.
    pub basis_index: usize,
    pub sign: i8,
    /// `S_u` and `S_point` were compared down to this square floor and found equal.
    pub verified_floor: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Inclusion {
    /// `S_{u_i}` is contained in `S_{u_{i+1}}`.
    Subset,
    /// `S_{u_i}` contains `S_{u_{i+1}}`.
    Superset,
    Equal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InclusionRecord {
    pub from: usize,
    pub to: usize,
    pub relation: Inclusion,
    pub changed: Vec<LatticeClass>,
    pub citations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityCertificate {
    pub version: u32,
    pub surface: SurfaceModel,
    pub u: SymplecticClass,
    pub v: SymplecticClass,
    pub perturbation: Option<Perturbation>,
    pub walls: Vec<WallCrossing>,
    pub generic: bool,
    pub samples: Vec<SymplecticClass>,
    pub chain: Vec<InclusionRecord>,
    pub verdict: StabilityVerdict,
}

fn check_pair(catalog: &ClassCatalog, u: &SymplecticClass, v: &SymplecticClass) -> Result<()> {
    let surface = catalog.surface();
    surface.check_forward(u)?;
    surface.check_forward(v)?;
    Ok(())
}

fn tier_at(catalog: &ClassCatalog, u: &SymplecticClass, v: &SymplecticClass, floor: i64) -> Result<Certification> {
    let a = catalog.spherical_set(u, floor)?.with_cremona_certification();
    let b = catalog.spherical_set(v, floor)?.with_cremona_certification();
    Ok(a.certification.min(b.certification))
}

/// Largest `n` with `S_u^{>=-n} = S_v^{>=-n}`, or `Full` when the negative
/// sets agree entirely.
pub fn max_stable_level(
    catalog: &ClassCatalog,
    u: &SymplecticClass,
    v: &SymplecticClass,
) -> Result<StabilityVerdict> {
    check_pair(catalog, u, v)?;
    let (only_u, only_v) = catalog.symmetric_difference(u, v, Floor::Unbounded)?;
    let mut verdict = StabilityVerdict::from_difference(catalog.surface(), &only_u, &only_v, Certification::Candidate);
    verdict.certification_tier = match verdict.mode {
        StabilityMode::Full => tier_at(catalog, u, v, only_u.square_floor)?,
        StabilityMode::Level(n) => tier_at(catalog, u, v, n)?,
        StabilityMode::None => Certification::Candidate,
    };
    Ok(verdict)
}

/// One crossing per class of the symmetric difference, sorted by `t_star`.
pub fn segment_walls(
    catalog: &ClassCatalog,
    u: &SymplecticClass,
    v: &SymplecticClass,
) -> Result<Vec<WallCrossing>> {
    check_pair(catalog, u, v)?;
    let surface = catalog.surface();
    let (only_u, only_v) = catalog.symmetric_difference(u, v, Floor::Unbounded)?;
    let fu = AreaForm::new(surface, u);
    let fv = AreaForm::new(surface, v);
    let mut walls = Vec::with_capacity(only_u.len() + only_v.len());
    for (set, direction) in [(&only_u, Direction::Lost), (&only_v, Direction::Gained)] {
        for a in &set.classes {
            let (au, av) = (fu.area(a), fv.area(a));
            if au.is_zero() || av.is_zero() {
                let end = if au.is_zero() { "start" } else { "end" };
                return Err(Error::Degenerate(format!(
                    "the {end} point lies on the wall of {}",
                    surface.format_class(a)
                )));
            }
            let t_star = &au / (&au - &av);
            walls.push(WallCrossing {
                wall_class: a.clone(),
                t_star,
                direction,
            });
        }
    }

    // Classes positive at both ends stay positive along the segment.
    let floor = only_u.square_floor;
    let common_u = catalog.spherical_set(u, floor)?;
    for a in common_u.classes.iter().filter(|a| !only_u.contains(a)) {
        if !(fu.area(a).is_positive() && fv.area(a).is_positive()) {
            return Err(Error::Consistency(format!(
                "class {} is shared by both sets but is not positive at both endpoints",
                surface.format_class(a)
            )));
        }
    }

    walls.sort_by(|x, y| x.t_star.cmp(&y.t_star).then_with(|| x.wall_class.cmp(&y.wall_class)));
    Ok(walls)
}

/// True when all crossing parameters are distinct.
pub fn is_generic(walls: &[WallCrossing]) -> bool {
    let mut ts: Vec<&Rational> = walls.iter().map(|w| &w.t_star).collect();
    ts.sort();
    ts.windows(2).all(|p| p[0] != p[1])
}

/// Moves `u` by `+-2^-j` along one area coordinate so that `S_u` is unchanged
/// and the walls to `v` become generic. Returns `None` when the segment is
/// already generic.
pub fn perturb(
    catalog: &ClassCatalog,
    u: &SymplecticClass,
    v: &SymplecticClass,
) -> Result<Option<Perturbation>> {
    let walls = segment_walls(catalog, u, v)?;
    if is_generic(&walls) {
        return Ok(None);
    }
    let surface = catalog.surface();
    let areas = u.areas(surface);
    let mut epsilon = Rational::one();
    for _ in 0..MAX_HALVINGS {
        epsilon /= int(2);
        for index in 0..surface.rank() {
            for sign in [1i8, -1] {
                let mut moved = areas.clone();
                moved[index] += &epsilon * int(sign as i64);
                let candidate = SymplecticClass::from_areas(surface, &moved)?;
                if surface.check_forward(&candidate).is_err() {
                    continue;
                }
                let (a, b) = catalog.symmetric_difference(u, &candidate, Floor::Unbounded)?;
                if !(a.is_empty() && b.is_empty()) {
                    continue;
                }
                match segment_walls(catalog, &candidate, v) {
                    Ok(w) if is_generic(&w) => {
                        return Ok(Some(Perturbation {
                            point: candidate,
                            epsilon,
                            basis_index: index,
                            sign,
                            verified_floor: a.square_floor,
                        }))
                    }
                    Ok(_) | Err(Error::Degenerate(_)) => {}
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Err(Error::Degenerate(format!(
        "no perturbation of {} within 2^-{MAX_HALVINGS} keeps its sphere-class set and separates the walls; the class lies on a wall of its own chamber",
        surface.format_areas(u)
    )))
}

/// Builds the wall-crossing certificate between `u` and `v` and checks every
/// adjacent inclusion along the way.
pub fn certify(
    catalog: &ClassCatalog,
    u: &SymplecticClass,
    v: &SymplecticClass,
) -> Result<StabilityCertificate> {
    let surface = *catalog.surface();
    let verdict = max_stable_level(catalog, u, v)?;
    let perturbation = perturb(catalog, u, v)?;
    let start = perturbation.as_ref().map_or(u, |p| &p.point).clone();
    let walls = segment_walls(catalog, &start, v)?;
    let generic = is_generic(&walls);
    if !generic {
        return Err(Error::Consistency("segment is still not generic after perturbation".into()));
    }

    let mut samples = vec![start.clone()];
    for pair in walls.windows(2) {
        let mid = (&pair[0].t_star + &pair[1].t_star) / int(2);
        samples.push(start.lerp(v, &mid));
    }
    if !walls.is_empty() {
        samples.push(v.clone());
    } else {
        let (a, b) = catalog.symmetric_difference(&start, v, Floor::Unbounded)?;
        if !(a.is_empty() && b.is_empty()) {
            return Err(Error::Consistency("no walls found but the endpoint sets differ".into()));
        }
    }

    let mut chain = Vec::with_capacity(walls.len());
    let mut chain_level: Option<i64> = None;
    for (i, wall) in walls.iter().enumerate() {
        let (lost, gained) = catalog.symmetric_difference(&samples[i], &samples[i + 1], Floor::Unbounded)?;
        let (relation, changed) = match (lost.is_empty(), gained.is_empty()) {
            (true, true) => (Inclusion::Equal, Vec::new()),
            (true, false) => (Inclusion::Subset, gained.classes.clone()),
            (false, true) => (Inclusion::Superset, lost.classes.clone()),
            (false, false) => {
                return Err(Error::Consistency(format!(
                    "samples {i} and {} are not related by inclusion",
                    i + 1
                )))
            }
        };
        let expected_relation = match wall.direction {
            Direction::Gained => Inclusion::Subset,
            Direction::Lost => Inclusion::Superset,
        };
        if relation != expected_relation || changed != [wall.wall_class.clone()] {
            return Err(Error::Consistency(format!(
                "samples {i} and {} differ by {:?} instead of the single wall {}",
                i + 1,
                changed.iter().map(|a| surface.format_class(a)).collect::<Vec<_>>(),
                surface.format_class(&wall.wall_class)
            )));
        }
        let n = -surface.pair_unchecked(&wall.wall_class, &wall.wall_class) - 1;
        chain_level = Some(chain_level.map_or(n, |m| m.min(n)));
        chain.push(InclusionRecord {
            from: i,
            to: i + 1,
            relation,
            changed,
            citations: vec![CITE_INCLUSION.to_string(), CITE_BASIC.to_string()],
        });
    }

    let chain_mode = match chain_level {
        None => StabilityMode::Full,
        Some(n) if n >= 1 => StabilityMode::Level(n),
        Some(_) => StabilityMode::None,
    };
    if chain_mode != verdict.mode {
        return Err(Error::Consistency(format!(
            "chain gives {chain_mode:?} but the direct comparison gives {:?}",
            verdict.mode
        )));
    }

    Ok(StabilityCertificate {
        version: CERTIFICATE_VERSION,
        surface,
        u: u.clone(),
        v: v.clone(),
        perturbation,
        walls,
        generic,
        samples,
        chain,
        verdict,
    })
}

impl WallCrossing {
    pub fn describe(&self, surface: &SurfaceModel) -> String {
        format!(
            "{} at t = {} ({})",
            surface.format_class(&self.wall_class),
            format_rational(&self.t_star),
            match self.direction {
                Direction::Gained => "gained",
                Direction::Lost => "lost",
            }
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::spheres::EnumerationBounds;

    fn c(v: &[i64]) -> LatticeClass {
        LatticeClass::new(v.to_vec())
    }

    fn product() -> ClassCatalog {
        ClassCatalog::new(SurfaceModel::product(), EnumerationBounds::none()).unwrap()
    }

    fn mu(q: Rational) -> SymplecticClass {
        SymplecticClass::from_areas(&SurfaceModel::product(), &[q, int(1)]).unwrap()
    }

    fn blow_up(k: usize, areas: &[Rational]) -> (ClassCatalog, SymplecticClass) {
        let s = SurfaceModel::blow_up(k).unwrap();
        (
            ClassCatalog::new(s, EnumerationBounds::none()).unwrap(),
            SymplecticClass::from_areas(&s, areas).unwrap(),
        )
    }

    #[test]
    fn product_verdicts() {
        let cat = product();
        let v = max_stable_level(&cat, &mu(ratio(5, 2)), &mu(ratio(27, 10))).unwrap();
        assert_eq!(v.mode, StabilityMode::Full);
        assert!(v.pi0_equal);
        let v = max_stable_level(&cat, &mu(ratio(5, 2)), &mu(ratio(7, 2))).unwrap();
        assert_eq!(v.mode, StabilityMode::Level(5));
        assert_eq!(v.range, Some((1, 7)));
        assert!(!v.pi0_equal);
        let u = mu(ratio(5, 2));
        assert_eq!(max_stable_level(&cat, &u, &u).unwrap().mode, StabilityMode::Full);
        // B - F appears between 1 and 3/2: square -2, so n = 1 and the range is empty.
        let v = max_stable_level(&cat, &mu(int(1)), &mu(ratio(3, 2))).unwrap();
        assert_eq!(v.mode, StabilityMode::Level(1));
        assert_eq!(v.range, None);
    }

    #[test]
    fn product_walls() {
        let cat = product();
        let walls = segment_walls(&cat, &mu(ratio(5, 2)), &mu(ratio(9, 2))).unwrap();
        assert_eq!(walls.len(), 2);
        assert_eq!((walls[0].wall_class.clone(), walls[0].t_star.clone()), (c(&[1, -3]), ratio(1, 4)));
        assert_eq!((walls[1].wall_class.clone(), walls[1].t_star.clone()), (c(&[1, -4]), ratio(3, 4)));
        assert!(walls.iter().all(|w| w.direction == Direction::Gained));
        assert!(segment_walls(&cat, &mu(ratio(5, 2)), &mu(ratio(27, 10))).unwrap().is_empty());
    }

    #[test]
    fn endpoint_on_a_wall_is_rejected() {
        let s = SurfaceModel::blow_up(2).unwrap();
        let cat = ClassCatalog::new(s, EnumerationBounds::none()).unwrap();
        let u = SymplecticClass::from_areas(&s, &[int(3), int(1), int(1)]).unwrap();
        let v = SymplecticClass::from_areas(&s, &[int(3), ratio(3, 2), ratio(3, 2)]).unwrap();
        match segment_walls(&cat, &u, &v) {
            Err(Error::Degenerate(msg)) => assert!(msg.contains("H-E_1-E_2"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn genericity() {
        let w = |t: Rational| WallCrossing {
            wall_class: c(&[1, -3]),
            t_star: t,
            direction: Direction::Gained,
        };
        assert!(is_generic(&[]));
        assert!(is_generic(&[w(ratio(1, 4)), w(ratio(3, 4))]));
        assert!(!is_generic(&[w(ratio(1, 2)), w(ratio(1, 2))]));
    }

    #[test]
    fn product_certificate() {
        let cat = product();
        let cert = certify(&cat, &mu(ratio(5, 2)), &mu(ratio(9, 2))).unwrap();
        assert!(cert.generic && cert.perturbation.is_none());
        let sample_mu: Vec<Rational> = cert.samples.iter().map(|s| s.areas(&SurfaceModel::product())[0].clone()).collect();
        assert_eq!(sample_mu, vec![ratio(5, 2), ratio(7, 2), ratio(9, 2)]);
        assert!(cert.chain.iter().all(|r| r.relation == Inclusion::Subset));
        assert_eq!(cert.verdict.mode, StabilityMode::Level(5));
        assert_eq!(cert.verdict.range, Some((1, 7)));

        let back = certify(&cat, &mu(ratio(9, 2)), &mu(ratio(5, 2))).unwrap();
        assert!(back.chain.iter().all(|r| r.relation == Inclusion::Superset));
        assert_eq!(back.verdict, cert.verdict);

        let u = mu(ratio(5, 2));
        let same = certify(&cat, &u, &u).unwrap();
        assert_eq!(same.samples.len(), 1);
        assert!(same.chain.is_empty());
        assert_eq!(same.verdict.mode, StabilityMode::Full);
    }

    #[test]
    fn generic_segment_is_not_perturbed() {
        let cat = product();
        assert_eq!(perturb(&cat, &mu(ratio(5, 2)), &mu(ratio(9, 2))).unwrap(), None);
    }

    #[test]
    fn coincident_walls_are_split_by_perturbation() {
        // Both endpoints are reduced; the walls of E_1-E_2-E_3 and
        // H-E_1-E_2-E_3-E_4 meet the segment at the same parameter 1/2.
        let (cat, u) = blow_up(4, &[int(11), ratio(11, 2), int(3), int(2), int(1)]);
        let v = SymplecticClass::from_areas(cat.surface(), &[int(11), ratio(9, 2), int(3), int(2), int(1)]).unwrap();
        let walls = segment_walls(&cat, &u, &v).unwrap();
        assert!(!is_generic(&walls));
        let tied: Vec<_> = walls.iter().filter(|w| w.t_star == ratio(1, 2)).map(|w| w.wall_class.clone()).collect();
        assert!(tied.contains(&c(&[0, 1, -1, -1, 0])));
        assert!(tied.contains(&c(&[1, -1, -1, -1, -1])));

        let p = perturb(&cat, &u, &v).unwrap().expect("needs a perturbation");
        let (a, b) = cat.symmetric_difference(&u, &p.point, Floor::Unbounded).unwrap();
        assert!(a.is_empty() && b.is_empty());
        let split = segment_walls(&cat, &p.point, &v).unwrap();
        assert!(is_generic(&split));
        assert_eq!(split.len(), walls.len());

        let cert = certify(&cat, &u, &v).unwrap();
        assert!(cert.perturbation.is_some());
        assert_eq!(cert.verdict, max_stable_level(&cat, &u, &v).unwrap());
    }
}
