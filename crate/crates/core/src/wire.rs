//! JSON encoding of results. Rationals travel as `"p/q"` strings, lattice
//! classes as integer arrays in basis coordinates, symplectic classes as
//! area lists. Objects use sorted keys, so identical inputs give identical
//! bytes.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::{LatticeClass, SurfaceKind, SurfaceModel, SymplecticClass};
use crate::packing::CapacityProfile;
use crate::rational::{format_rational, parse_rational, Rational};
use crate::spheres::{Certification, SphereClassSet};
use crate::stability::{
    Direction, Inclusion, Perturbation, StabilityCertificate, StabilityMode, StabilityVerdict, WallCrossing,
};
use crate::strata::StratificationIndex;

pub const SCHEMA: &str = "symstab/1";

/// Parses `product` or `blowup:k`.
pub fn parse_surface(text: &str) -> Result<SurfaceModel> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("product") {
        return Ok(SurfaceModel::product());
    }
    if let Some(k) = t.strip_prefix("blowup:") {
        let k: usize = k
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad blow-up count in {text:?}")))?;
        return SurfaceModel::blow_up(k);
    }
    Err(Error::Parse(format!("unknown surface {text:?}; use product or blowup:k")))
}

pub fn surface_name(surface: &SurfaceModel) -> String {
    match surface.kind() {
        SurfaceKind::Product => "product".into(),
        SurfaceKind::BlowUp(k) => format!("blowup:{k}"),
    }
}

pub fn surface_json(surface: &SurfaceModel) -> Value {
    match surface.kind() {
        SurfaceKind::Product => json!({"kind": "product"}),
        SurfaceKind::BlowUp(k) => json!({"kind": "blowup", "k": k}),
    }
}

pub fn surface_from_json(v: &Value) -> Result<SurfaceModel> {
    match v.get("kind").and_then(Value::as_str) {
        Some("product") => Ok(SurfaceModel::product()),
        Some("blowup") => {
            let k = v
                .get("k")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Parse("blow-up surface without k".into()))?;
            SurfaceModel::blow_up(k as usize)
        }
        _ => Err(Error::Parse("surface must have kind product or blowup".into())),
    }
}

pub fn rational_json(q: &Rational) -> Value {
    Value::String(format_rational(q))
}

pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap().into())),
        _ => Err(Error::Parse(format!("expected a rational string, got {v}"))),
    }
}

pub fn class_json(a: &LatticeClass) -> Value {
    json!(a.0)
}

pub fn class_from_json(v: &Value) -> Result<LatticeClass> {
    let items = v.as_array().ok_or_else(|| Error::Parse(format!("expected an integer array, got {v}")))?;
    items
        .iter()
        .map(|x| x.as_i64().ok_or_else(|| Error::Parse(format!("expected an integer, got {x}"))))
        .collect::<Result<Vec<_>>>()
        .map(LatticeClass::new)
}

pub fn areas_json(surface: &SurfaceModel, u: &SymplecticClass) -> Value {
    Value::Array(u.areas(surface).iter().map(rational_json).collect())
}

pub fn areas_from_json(surface: &SurfaceModel, v: &Value) -> Result<SymplecticClass> {
    let items = v.as_array().ok_or_else(|| Error::Parse(format!("expected an area list, got {v}")))?;
    let areas = items.iter().map(rational_from_json).collect::<Result<Vec<_>>>()?;
    SymplecticClass::from_areas(surface, &areas)
}

fn classes_json(surface: &SurfaceModel, classes: &[LatticeClass]) -> (Value, Value) {
    (
        Value::Array(classes.iter().map(class_json).collect()),
        Value::Array(classes.iter().map(|a| Value::String(surface.format_class(a))).collect()),
    )
}

pub fn certification_str(c: Certification) -> &'static str {
    c.as_str()
}

fn certification_from_str(s: &str) -> Result<Certification> {
    match s {
        "candidate" => Ok(Certification::Candidate),
        "cremona-certified" => Ok(Certification::CremonaCertified),
        _ => Err(Error::Parse(format!("unknown certification {s:?}"))),
    }
}

pub fn surface_report(surface: &SurfaceModel) -> Value {
    json!({
        "schema": SCHEMA,
        "command": "surface",
        "surface": surface_json(surface),
        "rank": surface.rank(),
        "euler_characteristic": surface.euler_characteristic(),
        "basis": surface.basis_names(),
        "gram": surface.gram(),
        "canonical": class_json(&surface.canonical()),
        "canonical_square": surface.canonical_square(),
    })
}

pub fn class_list_report(surface: &SurfaceModel, square: i64, classes: &[LatticeClass], complete: bool) -> Value {
    let (raw, names) = classes_json(surface, classes);
    json!({
        "schema": SCHEMA,
        "command": "enumerate",
        "surface": surface_json(surface),
        "square": square,
        "count": classes.len(),
        "classes": raw,
        "notation": names,
        "complete": complete,
    })
}

pub fn set_json(set: &SphereClassSet) -> Value {
    let (raw, names) = classes_json(&set.surface, &set.classes);
    json!({
        "surface": surface_json(&set.surface),
        "floor": set.square_floor,
        "classes": raw,
        "notation": names,
        "certification": certification_str(set.certification),
        "uncertified": Value::Array(set.uncertified.iter().map(class_json).collect()),
        "complete": set.complete,
        "degree_filtered": set.degree_filtered,
    })
}

/// Output of the `sets` command: the set plus the class it was computed for.
pub fn sets_report(set: &SphereClassSet, u: &SymplecticClass) -> Value {
    let mut v = set_json(set);
    let obj = v.as_object_mut().expect("object");
    obj.insert("schema".into(), json!(SCHEMA));
    obj.insert("command".into(), json!("sets"));
    obj.insert("u".into(), areas_json(&set.surface, u));
    obj.insert("count".into(), json!(set.len()));
    v
}

/// Reads a set written by [`set_json`] or [`sets_report`].
pub fn set_from_json(v: &Value) -> Result<SphereClassSet> {
    let field = |name: &str| v.get(name).ok_or_else(|| Error::Parse(format!("set is missing {name:?}")));
    let surface = surface_from_json(field("surface")?)?;
    let floor = field("floor")?
        .as_i64()
        .ok_or_else(|| Error::Parse("floor must be an integer".into()))?;
    let list = |name: &str| -> Result<Vec<LatticeClass>> {
        match v.get(name) {
            None => Ok(Vec::new()),
            Some(x) => x
                .as_array()
                .ok_or_else(|| Error::Parse(format!("{name} must be an array")))?
                .iter()
                .map(class_from_json)
                .collect(),
        }
    };
    let mut classes = list("classes")?;
    for a in &classes {
        if a.0.len() != surface.rank() {
            return Err(Error::DimensionMismatch {
                expected: surface.rank(),
                found: a.0.len(),
            });
        }
    }
    classes.sort();
    classes.dedup();
    let certification = match v.get("certification").and_then(Value::as_str) {
        Some(s) => certification_from_str(s)?,
        None => Certification::Candidate,
    };
    Ok(SphereClassSet {
        surface,
        classes,
        square_floor: floor,
        certification,
        uncertified: list("uncertified")?,
        complete: v.get("complete").and_then(Value::as_bool).unwrap_or(true),
        degree_filtered: v.get("degree_filtered").and_then(Value::as_bool).unwrap_or(false),
    })
}

pub fn difference_report(only_u: &SphereClassSet, only_v: &SphereClassSet) -> Value {
    json!({
        "schema": SCHEMA,
        "command": "diff",
        "surface": surface_json(&only_u.surface),
        "floor": only_u.square_floor,
        "only_u": set_json(only_u),
        "only_v": set_json(only_v),
        "size": only_u.len() + only_v.len(),
    })
}

pub fn strata_json(index: &StratificationIndex) -> Value {
    let strata: Vec<Value> = index
        .strata
        .iter()
        .map(|s| {
            let (raw, names) = classes_json(&index.surface, &s.classes);
            json!({"codim": s.codim, "classes": raw, "notation": names})
        })
        .collect();
    json!({
        "surface": surface_json(&index.surface),
        "level": index.level,
        "strata": strata,
        "residual_codim": index.residual_codim,
        "certification": certification_str(index.certification),
        "nonemptiness_verified": index.nonemptiness_verified,
    })
}

pub fn mode_json(mode: StabilityMode) -> Value {
    match mode {
        StabilityMode::Full => json!({"kind": "full"}),
        StabilityMode::Level(n) => json!({"kind": "level", "n": n}),
        StabilityMode::None => json!({"kind": "none"}),
    }
}

pub fn mode_text(mode: StabilityMode) -> String {
    match mode {
        StabilityMode::Full => "Full".into(),
        StabilityMode::Level(n) => format!("Level({n})"),
        StabilityMode::None => "None".into(),
    }
}

pub fn verdict_json(v: &StabilityVerdict) -> Value {
    json!({
        "mode": mode_json(v.mode),
        "range": v.range.map(|(a, b)| json!([a, b])).unwrap_or(Value::Null),
        "pi0_equal": v.pi0_equal,
        "justification": v.justification,
        "certification": certification_str(v.certification_tier),
        "compared_floor": v.compared_floor,
        "difference_size": v.difference_size,
    })
}

fn direction_str(d: Direction) -> &'static str {
    match d {
        Direction::Gained => "gained",
        Direction::Lost => "lost",
    }
}

pub fn walls_json(surface: &SurfaceModel, walls: &[WallCrossing]) -> Value {
    Value::Array(
        walls
            .iter()
            .map(|w| {
                json!({
                    "class": class_json(&w.wall_class),
                    "notation": surface.format_class(&w.wall_class),
                    "t": rational_json(&w.t_star),
                    "direction": direction_str(w.direction),
                    "square": surface.pair(&w.wall_class, &w.wall_class).unwrap_or_default(),
                })
            })
            .collect(),
    )
}

fn perturbation_json(surface: &SurfaceModel, p: &Perturbation) -> Value {
    json!({
        "point": areas_json(surface, &p.point),
        "epsilon": rational_json(&p.epsilon),
        "basis_index": p.basis_index,
        "sign": p.sign,
        "verified_floor": p.verified_floor,
    })
}

pub fn certificate_json(c: &StabilityCertificate) -> Value {
    let s = &c.surface;
    let chain: Vec<Value> = c
        .chain
        .iter()
        .map(|r| {
            let (raw, names) = classes_json(s, &r.changed);
            json!({
                "from": r.from,
                "to": r.to,
                "relation": match r.relation {
                    Inclusion::Subset => "subset",
                    Inclusion::Superset => "superset",
                    Inclusion::Equal => "equal",
                },
                "changed": raw,
                "notation": names,
                "citations": r.citations,
            })
        })
        .collect();
    json!({
        "version": c.version,
        "surface": surface_json(s),
        "u": areas_json(s, &c.u),
        "v": areas_json(s, &c.v),
        "perturbation": c.perturbation.as_ref().map(|p| perturbation_json(s, p)).unwrap_or(Value::Null),
        "walls": walls_json(s, &c.walls),
        "generic": c.generic,
        "samples": Value::Array(c.samples.iter().map(|x| areas_json(s, x)).collect()),
        "chain": chain,
        "verdict": verdict_json(&c.verdict),
    })
}

pub fn profile_json(p: &CapacityProfile) -> Value {
    let t = &p.blown_up;
    let critical: Vec<Value> = p
        .critical_values
        .iter()
        .map(|cv| {
            let walls: Vec<Value> = cv
                .wall_classes
                .iter()
                .map(|(a, d)| {
                    json!({
                        "class": class_json(a),
                        "notation": t.format_class(a),
                        "direction": direction_str(*d),
                        "square": t.pair(a, a).unwrap_or_default(),
                    })
                })
                .collect();
            json!({"capacity": rational_json(&cv.capacity), "walls": walls})
        })
        .collect();
    let intervals: Vec<Value> = p
        .intervals
        .iter()
        .map(|i| {
            json!({
                "lower": rational_json(&i.lower),
                "upper": i.upper.as_ref().map(rational_json).unwrap_or_else(|| json!("c_max")),
                "sample": rational_json(&i.sample),
                "stable": i.stable,
                "certification": certification_str(i.certification),
            })
        })
        .collect();
    json!({
        "schema": SCHEMA,
        "command": "capacities",
        "surface": surface_json(&p.base),
        "blown_up": surface_json(t),
        "weights": Value::Array(p.weights.iter().map(rational_json).collect()),
        "c_max": rational_json(&p.c_max),
        "c_max_squared": rational_json(&p.c_max_squared),
        "c_max_exact": p.c_max_exact,
        "critical_values": critical,
        "intervals": intervals,
        "square_floor": p.square_floor,
        "exhaustive_up_to": p.exhaustive_up_to.as_ref().map(rational_json).unwrap_or(Value::Null),
        "warnings": p.warnings,
    })
}

/// Serializes with a trailing newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::spheres::ClassCatalog;
    use crate::spheres::EnumerationBounds;

    #[test]
    fn surfaces_round_trip() {
        for text in ["product", "blowup:0", "blowup:5", "blowup:9"] {
            let s = parse_surface(text).unwrap();
            assert_eq!(surface_name(&s), text);
            assert_eq!(surface_from_json(&surface_json(&s)).unwrap(), s);
        }
        assert!(parse_surface("blowup:10").is_err());
        assert!(parse_surface("torus").is_err());
    }

    #[test]
    fn sets_round_trip() {
        let s = SurfaceModel::blow_up(3).unwrap();
        let cat = ClassCatalog::new(s, EnumerationBounds::none()).unwrap();
        let u = SymplecticClass::from_areas(&s, &[int(3), int(1), ratio(1, 2), ratio(1, 3)]).unwrap();
        let set = cat.spherical_set(&u, 3).unwrap().with_cremona_certification();
        let back = set_from_json(&sets_report(&set, &u)).unwrap();
        assert_eq!(back, set);
        assert_eq!(areas_from_json(&s, &areas_json(&s, &u)).unwrap(), u);
    }

    #[test]
    fn serialization_is_stable() {
        let s = SurfaceModel::blow_up(2).unwrap();
        assert_eq!(to_text(&surface_report(&s)), to_text(&surface_report(&s)));
        assert!(to_text(&surface_report(&s)).contains("\"schema\": \"symstab/1\""));
    }
}
