//! Shared helpers for the integration suites: a naive enumeration oracle and
//! generators of random exact classes.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::Rng;
use symstab::rational::{int, ratio};
use symstab::{LatticeClass, Rational, SurfaceModel, SymplecticClass};

/// Integer square root for nonnegative `n`, `None` if `n` is not a square.
fn perfect_sqrt(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let r = (n as f64).sqrt() as i64;
    (r.saturating_sub(2)..=r + 2).find(|x| x * x == n)
}

/// Every `dH - sum m_i E_i` with `d, m_i` in `[-R, R]`, `R = 3|s| + 6`, square
/// `s` and `K.A = -s - 2`. Scans the box coordinate by coordinate, pruning a
/// branch once the remaining coefficients cannot meet the remaining sum and
/// sum of squares, and solves the last two coefficients directly.
pub fn brute_force_blow_up(k: usize, s: i64) -> BTreeSet<Vec<i64>> {
    let r = 3 * s.abs() + 6;
    let mut out = BTreeSet::new();
    for d in -r..=r {
        // sum m = 3d - s - 2, sum m^2 = d^2 - s
        let lin = 3 * d - s - 2;
        let quad = d * d - s;
        let mut m = Vec::with_capacity(k);
        scan(k, r, lin, quad, &mut m, &mut |m| {
            let mut v = vec![d];
            v.extend(m.iter().map(|x| -x));
            out.insert(v);
        });
    }
    out
}

fn scan(left: usize, r: i64, lin: i64, quad: i64, m: &mut Vec<i64>, emit: &mut dyn FnMut(&[i64])) {
    if quad < 0 || lin * lin > left as i64 * quad {
        return;
    }
    match left {
        0 => {
            if lin == 0 && quad == 0 {
                emit(m);
            }
        }
        1 => {
            if lin.abs() <= r && lin * lin == quad {
                m.push(lin);
                emit(m);
                m.pop();
            }
        }
        2 => {
            // p + q = lin, p^2 + q^2 = quad  =>  (p - q)^2 = 2 quad - lin^2
            if let Some(diff) = perfect_sqrt(2 * quad - lin * lin) {
                let deltas: &[i64] = if diff == 0 { &[0] } else { &[diff, -diff] };
                for &delta in deltas {
                    if (lin + delta) % 2 == 0 {
                        let p = (lin + delta) / 2;
                        let q = lin - p;
                        if p.abs() <= r && q.abs() <= r {
                            m.push(p);
                            m.push(q);
                            emit(m);
                            m.pop();
                            m.pop();
                        }
                    }
                }
            }
        }
        _ => {
            for x in -r..=r {
                m.push(x);
                scan(left - 1, r, lin - x, quad - x * x, m, emit);
                m.pop();
            }
        }
    }
}

/// Product classes `aB + bF` in the box with square `s` and `K.A = -s - 2`.
pub fn brute_force_product(s: i64) -> BTreeSet<Vec<i64>> {
    let r = 3 * s.abs() + 6;
    let mut out = BTreeSet::new();
    for a in -r..=r {
        for b in -r..=r {
            // square 2ab, K = -2B - 2F gives K.A = -2a - 2b
            if 2 * a * b == s && -2 * a - 2 * b == -s - 2 {
                out.insert(vec![a, b]);
            }
        }
    }
    out
}

pub fn to_set(classes: &[LatticeClass]) -> BTreeSet<Vec<i64>> {
    classes.iter().map(|a| a.0.clone()).collect()
}

/// Random rational in `(0, hi]` with denominator at most `den`.
pub fn positive_rational(rng: &mut StdRng, hi: i64, den: i64) -> Rational {
    let q = rng.gen_range(1..=den);
    let p = rng.gen_range(1..=hi * q);
    ratio(p, q)
}

/// A random class on `BlowUp(k)` in the interior of the reduced chamber:
/// `c_1 > .. > c_k > 0` and `nu > c_1 + c_2 + c_3` (or the analogue for
/// `k < 3`).
pub fn reduced_blow_up(rng: &mut StdRng, k: usize) -> SymplecticClass {
    let s = SurfaceModel::blow_up(k).unwrap();
    loop {
        let mut c: Vec<Rational> = (0..k).map(|_| positive_rational(rng, 6, 97)).collect();
        c.sort_by(|a, b| b.cmp(a));
        if c.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        let head: Rational = c.iter().take(3).sum();
        let nu = head + positive_rational(rng, 6, 89);
        let mut areas = vec![nu];
        areas.extend(c);
        return SymplecticClass::from_areas(&s, &areas).unwrap();
    }
}

/// A random product class `(mu, 1)` with `mu > 1` not an integer, so that
/// no wall `B - mF` passes through it.
pub fn product_class(rng: &mut StdRng) -> SymplecticClass {
    let mut mu = int(1) + positive_rational(rng, 7, 40);
    while mu.is_integer() {
        mu = int(1) + positive_rational(rng, 7, 40);
    }
    SymplecticClass::from_areas(&SurfaceModel::product(), &[mu, int(1)]).unwrap()
}

/// A random forward class (positive square, negative pairing with `K`),
/// not necessarily reduced.
pub fn forward_class(rng: &mut StdRng, surface: &SurfaceModel) -> SymplecticClass {
    loop {
        let coords: Vec<Rational> = (0..surface.rank())
            .map(|i| {
                let x = positive_rational(rng, 8, 13);
                if i > 0 && rng.gen_bool(0.5) {
                    -x
                } else {
                    x
                }
            })
            .collect();
        let u = SymplecticClass::new(coords);
        if surface.check_forward(&u).is_ok() {
            return u;
        }
    }
}

/// A random integer class with coefficients in `[-r, r]`.
pub fn lattice_class(rng: &mut StdRng, surface: &SurfaceModel, r: i64) -> LatticeClass {
    LatticeClass::new((0..surface.rank()).map(|_| rng.gen_range(-r..=r)).collect())
}
