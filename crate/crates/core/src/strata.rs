//! Combinatorial index of the decomposition of the space of compatible
//! almost complex structures by admissible sets of negative sphere classes.
//!
//! Only labels and codimensions are represented. Square `-1` classes carry
//! codimension zero and are left out of the labels.

use crate::error::{Error, Result};
use crate::lattice::{LatticeClass, SurfaceModel, SymplecticClass};
use crate::spheres::{Certification, ClassCatalog};

/// Pairwise nonnegative set of negative classes and its codimension.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AdmissibleSet {
    pub codim: i64,
    pub classes: Vec<LatticeClass>,
}

/// All admissible sets of codimension `< level`; everything else is the
/// residual piece of codimension at least `level`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratificationIndex {
    pub surface: SurfaceModel,
    pub level: i64,
    pub strata: Vec<AdmissibleSet>,
    pub residual_codim: i64,
    pub certification: Certification,
    /// Whether each labelled stratum is actually nonempty is not decided here.
    pub nonemptiness_verified: bool,
}

impl StratificationIndex {
    /// Equality of labelled sets, ignoring metadata.
    pub fn same_labels(&self, other: &StratificationIndex) -> bool {
        self.level == other.level && self.strata == other.strata
    }
}

fn validate_member(surface: &SurfaceModel, a: &LatticeClass) -> Result<()> {
    let invalid = |reason: &str| Error::InvalidClass {
        class: surface.format_class(a),
        reason: reason.into(),
    };
    if surface.square(a)? >= 0 {
        return Err(invalid("square is not negative"));
    }
    if surface.adjunction_defect(a)? != 0 {
        return Err(invalid("fails the adjunction constraint"));
    }
    Ok(())
}

/// True when all pairwise intersections of distinct members are nonnegative.
pub fn is_admissible(surface: &SurfaceModel, classes: &[LatticeClass]) -> Result<bool> {
    for (i, a) in classes.iter().enumerate() {
        validate_member(surface, a)?;
        if classes[..i].contains(a) {
            return Err(Error::InvalidClass {
                class: surface.format_class(a),
                reason: "listed twice".into(),
            });
        }
    }
    Ok(classes.iter().enumerate().all(|(i, a)| {
        classes[i + 1..]
            .iter()
            .all(|b| surface.pair_unchecked(a, b) >= 0)
    }))
}

/// Sum of `cod(A)` over the members.
pub fn codimension(surface: &SurfaceModel, classes: &[LatticeClass]) -> Result<i64> {
    classes.iter().map(|a| surface.cod(a)).sum()
}

fn check_level(level: i64) -> Result<i64> {
    if level < 2 || level % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "level must be an even integer 2n with n >= 1, got {level}"
        )));
    }
    Ok(level / 2)
}

/// Admissible subsets of `S_u^{<0}` with codimension below `level`.
///
/// `cod(A) < 2n` forces `A.A >= -n`, so only `S_u^{>=-n}` feeds the search.
pub fn enumerate_admissible(
    catalog: &ClassCatalog,
    u: &SymplecticClass,
    level: i64,
) -> Result<StratificationIndex> {
    let n = check_level(level)?;
    let surface = *catalog.surface();
    let set = catalog.spherical_set(u, n)?.with_cremona_certification();
    let pool: Vec<(LatticeClass, i64)> = set
        .classes
        .iter()
        .map(|a| (a.clone(), surface.cod(a).expect("negative square")))
        .filter(|(_, cod)| *cod > 0)
        .collect();

    let mut strata = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    extend_admissible(&surface, &pool, 0, 0, level, &mut chosen, &mut strata);
    strata.sort();
    Ok(StratificationIndex {
        surface,
        level,
        strata,
        residual_codim: level,
        certification: set.certification,
        nonemptiness_verified: false,
    })
}

fn extend_admissible(
    surface: &SurfaceModel,
    pool: &[(LatticeClass, i64)],
    start: usize,
    codim: i64,
    level: i64,
    chosen: &mut Vec<usize>,
    out: &mut Vec<AdmissibleSet>,
) {
    out.push(AdmissibleSet {
        codim,
        classes: chosen.iter().map(|&i| pool[i].0.clone()).collect(),
    });
    for i in start..pool.len() {
        let (a, cod) = &pool[i];
        if codim + cod >= level {
            continue;
        }
        if chosen
            .iter()
            .any(|&j| surface.pair_unchecked(&pool[j].0, a) < 0)
        {
            continue;
        }
        chosen.push(i);
        extend_admissible(surface, pool, i + 1, codim + cod, level, chosen, out);
        chosen.pop();
    }
}

/// Whether the two classes have the same stratification index at `level`.
pub fn compare_levels(
    catalog: &ClassCatalog,
    u: &SymplecticClass,
    v: &SymplecticClass,
    level: i64,
) -> Result<bool> {
    let a = enumerate_admissible(catalog, u, level)?;
    let b = enumerate_admissible(catalog, v, level)?;
    Ok(a.same_labels(&b))
}
