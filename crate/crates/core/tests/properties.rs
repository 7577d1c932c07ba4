mod common;

use common::*;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use symstab::packing::{blowup_class, critical_capacities, BallConfig};
use symstab::rational::{int, ratio};
use symstab::stability::{certify, max_stable_level, Inclusion, StabilityMode};
use symstab::strata::{codimension, compare_levels, enumerate_admissible, is_admissible};
use symstab::{
    ClassCatalog, EnumerationBounds, Floor, LatticeClass, Rational, Reflection, SurfaceModel, SymplecticClass,
    WeylWord,
};

fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn surface(k: usize) -> SurfaceModel {
    if k == 10 {
        SurfaceModel::product()
    } else {
        SurfaceModel::blow_up(k).unwrap()
    }
}

fn random_root(rng: &mut StdRng, s: &SurfaceModel) -> Option<Reflection> {
    match s.blow_ups() {
        None => Some(Reflection::SwapFactors),
        Some(k) if k >= 3 && rng.gen_bool(0.5) => {
            let mut idx: Vec<usize> = (1..=k).collect();
            for i in 0..3 {
                let j = rng.gen_range(i..k);
                idx.swap(i, j);
            }
            let mut t = [idx[0], idx[1], idx[2]];
            t.sort();
            Some(Reflection::Cremona(t[0], t[1], t[2]))
        }
        Some(k) if k >= 2 => {
            let i = rng.gen_range(1..=k);
            let mut j = rng.gen_range(1..=k);
            while j == i {
                j = rng.gen_range(1..=k);
            }
            Some(Reflection::Transpose(i.min(j), i.max(j)))
        }
        _ => None,
    }
}

fn random_word(rng: &mut StdRng, s: &SurfaceModel, len: usize) -> WeylWord {
    let mut w = WeylWord::identity();
    for _ in 0..len {
        if let Some(r) = random_root(rng, s) {
            w.push(r);
        }
    }
    w
}

/// Surfaces with a derivable square floor: `BlowUp(lo..=8)` and the product (coded as 10).
fn finite(lo: usize) -> impl Strategy<Value = usize> {
    prop_oneof![lo..=8usize, Just(10usize)]
}

/// Like [`finite`] but capped at `hi` blow-ups, for the costlier checks.
fn finite_upto(lo: usize, hi: usize) -> impl Strategy<Value = usize> {
    prop_oneof![lo..=hi, Just(10usize)]
}

fn reduced(rng: &mut StdRng, k: usize) -> SymplecticClass {
    if k == 10 {
        product_class(rng)
    } else {
        reduced_blow_up(rng, k)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn pairing_is_symmetric_and_bilinear(seed: u64, k in 0usize..=10) {
        let mut g = rng(seed);
        let s = surface(k);
        let (a, b, c) = (lattice_class(&mut g, &s, 9), lattice_class(&mut g, &s, 9), lattice_class(&mut g, &s, 9));
        prop_assert_eq!(s.pair(&a, &b).unwrap(), s.pair(&b, &a).unwrap());
        let lam = g.gen_range(-5..=5);
        let comb = LatticeClass::new(a.0.iter().zip(&c.0).map(|(x, y)| lam * x + y).collect());
        prop_assert_eq!(s.pair(&comb, &b).unwrap(), lam * s.pair(&a, &b).unwrap() + s.pair(&c, &b).unwrap());
    }

    #[test]
    fn reflections_are_isometric_involutions(seed: u64, k in 2usize..=10) {
        let mut g = rng(seed);
        let s = surface(k);
        let r = random_root(&mut g, &s).unwrap().root(&s);
        prop_assert!(s.is_root(&r));
        let (a, b) = (lattice_class(&mut g, &s, 7), lattice_class(&mut g, &s, 7));
        let (ra, rb) = (s.reflect(&a, &r).unwrap(), s.reflect(&b, &r).unwrap());
        prop_assert_eq!(s.pair(&ra, &rb).unwrap(), s.pair(&a, &b).unwrap());
        prop_assert_eq!(s.reflect(&ra, &r).unwrap(), a.clone());
        prop_assert_eq!(s.reflect(&s.canonical(), &r).unwrap(), s.canonical());
        if !a.is_zero() {
            prop_assert_eq!(s.adjunction_defect(&ra).unwrap(), s.adjunction_defect(&a).unwrap());
        }
    }

    #[test]
    fn reduce_is_idempotent_and_replayable(seed: u64, k in 0usize..=10) {
        let mut g = rng(seed);
        let s = surface(k);
        let u = forward_class(&mut g, &s);
        match s.reduce(&u) {
            Ok((r, w)) => {
                prop_assert_eq!(s.pair_rational(&r, &r).unwrap(), s.pair_rational(&u, &u).unwrap());
                prop_assert_eq!(w.apply_symplectic(&s, &u), r.clone());
                prop_assert_eq!(w.inverse().apply_symplectic(&s, &r), u.clone());
                let (again, w2) = s.reduce(&r).unwrap();
                prop_assert_eq!(again, r.clone());
                prop_assert!(w2.is_empty());
                let a = r.areas(&s);
                if let Some(k) = s.blow_ups() {
                    prop_assert!(a[1..].windows(2).all(|p| p[0] >= p[1]));
                    prop_assert!(a[1..].iter().all(|c| c.is_positive()));
                    if k >= 3 {
                        prop_assert!(a[0] >= &a[1] + &a[2] + &a[3]);
                    }
                } else {
                    prop_assert!(a[0] >= a[1]);
                }
            }
            Err(e) => prop_assert!(matches!(e, symstab::Error::OutsideCone { .. }), "{e}"),
        }
    }

    #[test]
    fn light_cone_sign_lemma(seed: u64, k in 0usize..=10) {
        let mut g = rng(seed);
        let s = surface(k);
        let (u, v) = (forward_class(&mut g, &s), forward_class(&mut g, &s));
        let a = lattice_class(&mut g, &s, 6);
        prop_assume!(!a.is_zero() && s.square(&a).unwrap() >= 0);
        let (x, y) = (s.area(&u, &a).unwrap(), s.area(&v, &a).unwrap());
        prop_assert!(!x.is_zero());
        prop_assert_eq!(x.is_positive(), y.is_positive());
    }

    #[test]
    fn spherical_sets_are_sound_and_monotone(seed: u64, k in finite(1)) {
        let mut g = rng(seed);
        let s = surface(k);
        let cat = ClassCatalog::new(s, EnumerationBounds::none()).unwrap();
        let u = if g.gen_bool(0.5) { reduced(&mut g, k) } else { forward_class(&mut g, &s) };
        let n = g.gen_range(1..=5);
        let small = cat.spherical_set(&u, n).unwrap();
        let big = cat.spherical_set(&u, n + 1).unwrap();
        for a in &small.classes {
            prop_assert_eq!(s.adjunction_defect(a).unwrap(), 0);
            prop_assert!(s.area(&u, a).unwrap().is_positive());
            let sq = s.square(a).unwrap();
            prop_assert!((-n..=-1).contains(&sq));
            prop_assert!(big.contains(a));
        }
    }

    #[test]
    fn symmetric_difference_is_sound(seed: u64, k in finite(1)) {
        let mut g = rng(seed);
        let s = surface(k);
        let cat = ClassCatalog::new(s, EnumerationBounds::none()).unwrap();
        let (u, v) = (reduced(&mut g, k), reduced(&mut g, k));
        let (a, b) = cat.symmetric_difference(&u, &v, Floor::Unbounded).unwrap();
        for x in &a.classes {
            prop_assert!(s.area(&u, x).unwrap().is_positive() && !s.area(&v, x).unwrap().is_positive());
        }
        for x in &b.classes {
            prop_assert!(s.area(&v, x).unwrap().is_positive() && !s.area(&u, x).unwrap().is_positive());
        }
        let n = a.square_floor;
        let su = cat.spherical_set(&u, n).unwrap();
        let sv = cat.spherical_set(&v, n).unwrap();
        prop_assert_eq!(a.is_empty() && b.is_empty(), su.classes == sv.classes);
    }

    #[test]
    fn spherical_sets_are_weyl_equivariant(seed: u64, k in finite(2)) {
        let mut g = rng(seed);
        let s = surface(k);
        let cat = ClassCatalog::new(s, EnumerationBounds::none()).unwrap();
        let u = reduced(&mut g, k);
        let w = random_word(&mut g, &s, 4);
        let wu = w.apply_symplectic(&s, &u);
        let n = 4;
        let mut moved: Vec<LatticeClass> =
            cat.spherical_set(&u, n).unwrap().classes.iter().map(|a| w.apply_class(&s, a)).collect();
        moved.sort();
        prop_assert_eq!(cat.spherical_set(&wu, n).unwrap().classes, moved);
    }

    #[test]
    fn equal_truncated_sets_give_equal_strata(seed: u64, k in finite(1)) {
        let mut g = rng(seed);
        let s = surface(k);
        let cat = ClassCatalog::new(s, EnumerationBounds::none()).unwrap();
        let (u, v) = (reduced(&mut g, k), reduced(&mut g, k));
        let n = g.gen_range(1..=4);
        let (a, b) = cat.symmetric_difference(&u, &v, Floor::Finite(n)).unwrap();
        if a.is_empty() && b.is_empty() {
            prop_assert!(compare_levels(&cat, &u, &v, 2 * n).unwrap());
        }
    }

    #[test]
    fn codimension_is_additive(seed: u64, k in finite(1)) {
        let mut g = rng(seed);
        let s = surface(k);
        let cat = ClassCatalog::new(s, EnumerationBounds::none()).unwrap();
        let u = reduced(&mut g, k);
        let idx = enumerate_admissible(&cat, &u, 8).unwrap();
        let pick = |g: &mut StdRng| idx.strata[g.gen_range(0..idx.strata.len())].classes.clone();
        let (x, y) = (pick(&mut g), pick(&mut g));
        if x.iter().all(|a| !y.contains(a)) {
            let mut union = x.clone();
            union.extend(y.iter().cloned());
            if is_admissible(&s, &union).unwrap() {
                prop_assert_eq!(
                    codimension(&s, &union).unwrap(),
                    codimension(&s, &x).unwrap() + codimension(&s, &y).unwrap()
                );
            }
        }
    }

    #[test]
    fn strata_are_weyl_equivariant(seed: u64, k in finite(2)) {
        let mut g = rng(seed);
        let s = surface(k);
        let cat = ClassCatalog::new(s, EnumerationBounds::none()).unwrap();
        let u = reduced(&mut g, k);
        let w = random_word(&mut g, &s, 3);
        let a = enumerate_admissible(&cat, &u, 6).unwrap();
        let b = enumerate_admissible(&cat, &w.apply_symplectic(&s, &u), 6).unwrap();
        let mut moved: Vec<(i64, Vec<LatticeClass>)> = a
            .strata
            .iter()
            .map(|st| {
                let mut c: Vec<LatticeClass> = st.classes.iter().map(|x| w.apply_class(&s, x)).collect();
                c.sort();
                (st.codim, c)
            })
            .collect();
        moved.sort();
        let mut got: Vec<(i64, Vec<LatticeClass>)> = b
            .strata
            .iter()
            .map(|st| {
                let mut c = st.classes.clone();
                c.sort();
                (st.codim, c)
            })
            .collect();
        got.sort();
        prop_assert_eq!(got, moved);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn certificates_agree_with_verdicts(seed: u64, k in finite_upto(1, 6)) {
        let mut g = rng(seed);
        let s = surface(k);
        let cat = ClassCatalog::new(s, EnumerationBounds::none()).unwrap();
        let (u, v) = (reduced(&mut g, k), reduced(&mut g, k));
        let verdict = max_stable_level(&cat, &u, &v).unwrap();
        prop_assert_eq!(&max_stable_level(&cat, &v, &u).unwrap(), &verdict);
        let lam = positive_rational(&mut g, 5, 7);
        prop_assert_eq!(max_stable_level(&cat, &u.scale(&lam), &v.scale(&lam)).unwrap().mode, verdict.mode);
        let cert = match certify(&cat, &u, &v) {
            Err(symstab::Error::Degenerate(msg)) if msg.contains("point lies on the wall") => {
                return Err(TestCaseError::reject(msg));
            }
            other => other.unwrap(),
        };
        prop_assert_eq!(&cert.verdict, &verdict);
        prop_assert_eq!(cert.samples.len(), if cert.walls.is_empty() { 1 } else { cert.walls.len() + 1 });
        for (i, r) in cert.chain.iter().enumerate() {
            let (lost, gained) = cat.symmetric_difference(&cert.samples[i], &cert.samples[i + 1], Floor::Unbounded).unwrap();
            let expected = match r.relation {
                Inclusion::Subset => gained.classes.clone(),
                Inclusion::Superset => lost.classes.clone(),
                Inclusion::Equal => Vec::new(),
            };
            prop_assert_eq!(&r.changed, &expected);
            prop_assert_eq!(r.changed.clone(), vec![cert.walls[i].wall_class.clone()]);
        }
    }

    #[test]
    fn larger_floors_never_raise_the_level(seed: u64, k in finite(1)) {
        let mut g = rng(seed);
        let s = surface(k);
        let cat = ClassCatalog::new(s, EnumerationBounds::none()).unwrap();
        let (u, v) = (reduced(&mut g, k), reduced(&mut g, k));
        let level = |n: i64| -> Option<i64> {
            let (a, b) = cat.symmetric_difference(&u, &v, Floor::Finite(n)).unwrap();
            a.classes.iter().chain(&b.classes).map(|x| -s.square(x).unwrap() - 1).min()
        };
        let mut prev: Option<i64> = None;
        for n in 1..=6 {
            let cur = level(n);
            if let (Some(p), Some(c)) = (prev, cur) {
                prop_assert!(c <= p);
            }
            if prev.is_some() {
                prop_assert!(cur.is_some());
            }
            prev = cur;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn capacity_profiles(seed: u64, k in 0usize..=3, m in 1usize..=2) {
        let mut g = rng(seed);
        let s = SurfaceModel::blow_up(k).unwrap();
        let u = if k == 0 { SymplecticClass::from_areas(&s, &[int(1)]).unwrap() } else { reduced_blow_up(&mut g, k) };
        let mut w: Vec<Rational> = (0..m).map(|_| positive_rational(&mut g, 2, 2)).collect();
        let bounds = EnumerationBounds::none();
        let cfg = BallConfig::new(s, w.clone(), true).unwrap();
        let p = critical_capacities(&s, &u, &cfg, &bounds).unwrap();
        let reversed: Vec<Rational> = w.iter().rev().cloned().collect();
        let q = critical_capacities(&s, &u, &BallConfig::new(s, reversed, true).unwrap(), &bounds).unwrap();
        prop_assert_eq!(q.critical_capacities(), p.critical_capacities());
        prop_assert_eq!(&q.c_max_squared, &p.c_max_squared);
        prop_assert!(p.critical_values.windows(2).all(|x| x[0].capacity < x[1].capacity));
        for cv in &p.critical_values {
            for (a, _) in &cv.wall_classes {
                let t = p.blown_up;
                prop_assert!(t.square(a).unwrap() < 0);
                prop_assert_eq!(t.adjunction_defect(a).unwrap(), 0);
                let caps: Vec<Rational> = w.iter().map(|x| x * &cv.capacity).collect();
                let lifted = symstab::packing::lifted_class(&s, &u, &caps).unwrap();
                prop_assert!(t.area(&lifted, a).unwrap().is_zero());
            }
        }

        // Same interval, same sets, as long as both points are symplectic and scanned exhaustively.
        let cat = ClassCatalog::new(p.blown_up, bounds.clone()).unwrap();
        let limit = p.exhaustive_up_to.clone().unwrap();
        for iv in &p.intervals {
            let upper = iv.upper.clone().unwrap_or_else(|| p.c_max.clone());
            if upper > limit {
                continue;
            }
            let near = (&iv.lower + &upper * int(3)) / int(4);
            let pts: Vec<_> = [&iv.sample, &near]
                .iter()
                .map(|c| blowup_class(&s, &u, &BallConfig::new(s, w.iter().map(|x| x * *c).collect(), false).unwrap()))
                .collect();
            if let [Ok((_, a)), Ok((_, b))] = &pts[..] {
                prop_assert_eq!(max_stable_level(&cat, a, b).unwrap().mode, StabilityMode::Full);
            }
        }

        // Growing one weight cannot raise c_max.
        let i = g.gen_range(0..m);
        w[i] = &w[i] + ratio(1, 3);
        let grown = critical_capacities(&s, &u, &BallConfig::new(s, w, true).unwrap(), &bounds).unwrap();
        prop_assert!(grown.c_max_squared <= p.c_max_squared);
    }
}
