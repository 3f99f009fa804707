//! Brute-force interval oracle on the elementary subdivision, shared by the
//! interval tests and the acceptance run.

#![allow(dead_code)]

use std::time::{Duration, Instant};

use cantor_core::{q, Interval, IntervalUnion, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// The oracle works on integers: every coordinate is scaled by twice the lcm of all
// denominators, so endpoints, their pairwise sums and all midpoints are exact.
#[derive(Clone, Copy)]
pub struct Seg {
    pub lo: i128,
    pub hi: i128,
    pub lc: bool,
    pub hc: bool,
}

fn lcm(a: i128, b: i128) -> i128 {
    fn gcd(a: i128, b: i128) -> i128 {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    a / gcd(a, b) * b
}

fn scale_of(parts: &[&[Interval]]) -> i128 {
    let l = parts
        .iter()
        .flat_map(|s| s.iter())
        .flat_map(|p| [p.lo().denom(), p.hi().denom()])
        .map(|d| i128::try_from(d).unwrap())
        .fold(1, lcm);
    2 * l
}

fn to_int(x: &Rational, scale: i128) -> i128 {
    let n = i128::try_from(x.numer()).unwrap();
    let d = i128::try_from(x.denom()).unwrap();
    assert_eq!(scale % d, 0, "{x} not representable at scale {scale}");
    n * (scale / d)
}

fn segs(parts: &[Interval], scale: i128) -> Vec<Seg> {
    parts
        .iter()
        .map(|p| Seg {
            lo: to_int(p.lo(), scale),
            hi: to_int(p.hi(), scale),
            lc: p.lo_closed(),
            hc: p.hi_closed(),
        })
        .collect()
}

fn raw_contains(parts: &[Seg], x: i128) -> bool {
    parts.iter().any(|p| {
        let above = if p.lc { p.lo <= x } else { p.lo < x };
        let below = if p.hc { x <= p.hi } else { x < p.hi };
        above && below
    })
}

// x ∈ p + r  ⟺  (x − r) meets p; checked by clamping instead of summing endpoints.
fn in_pair_sum(p: &Seg, r: &Seg, x: i128) -> bool {
    let lo = x - r.hi;
    let hi = x - r.lo;
    if lo > p.hi || hi < p.lo {
        return false;
    }
    let a = lo.max(p.lo);
    let b = hi.min(p.hi);
    if a < b {
        return true;
    }
    // Single touching point: both sides must own it.
    raw_contains(std::slice::from_ref(p), a) && raw_contains(std::slice::from_ref(r), x - a)
}

fn sum_contains(a: &[Seg], b: &[Seg], x: i128) -> bool {
    a.iter().any(|p| b.iter().any(|r| in_pair_sum(p, r, x)))
}

/// Every cut point, the midpoint of every elementary piece, and one point beyond each end.
fn probes(sets: &[&[Seg]]) -> Vec<i128> {
    let mut cuts: Vec<i128> = sets
        .iter()
        .flat_map(|s| s.iter())
        .flat_map(|p| [p.lo, p.hi])
        .collect();
    cuts.sort_unstable();
    cuts.dedup();
    let mut out = Vec::with_capacity(2 * cuts.len() + 2);
    if let (Some(f), Some(l)) = (cuts.first(), cuts.last()) {
        out.push(f - 1);
        out.push(l + 1);
    }
    for w in cuts.windows(2) {
        // Cuts are even multiples after scaling by 2·lcm, so midpoints are exact.
        out.push((w[0] + w[1]) / 2);
    }
    out.extend(cuts);
    out
}

pub fn random_parts(rng: &mut ChaCha8Rng) -> Vec<Interval> {
    let count = rng.gen_range(0..=12);
    (0..count)
        .map(|_| {
            let den = rng.gen_range(1..=64);
            let a = rng.gen_range(-2 * den..=2 * den);
            let point = rng.gen_bool(0.15);
            let b = if point { a } else { a + rng.gen_range(1..=den) };
            let (lc, hc) = if point {
                (true, true)
            } else {
                (rng.gen_bool(0.5), rng.gen_bool(0.5))
            };
            Interval::new(q(a, den), q(b, den), lc, hc).unwrap()
        })
        .collect()
}

pub fn check_against_oracle(a_raw: &[Interval], b_raw: &[Interval]) {
    let a = IntervalUnion::normalize(a_raw.to_vec());
    let b = IntervalUnion::normalize(b_raw.to_vec());
    let scale = scale_of(&[a_raw, b_raw]);
    let (sa, sb) = (segs(a_raw, scale), segs(b_raw, scale));
    let sum_parts: Vec<Seg> = sa
        .iter()
        .flat_map(|p| sb.iter().map(move |r| Seg { lo: p.lo + r.lo, hi: p.hi + r.hi, lc: true, hc: true }))
        .collect();
    type Oracle<'a> = Box<dyn Fn(i128) -> bool + 'a>;
    let ops: [(&str, IntervalUnion, Oracle); 4] = [
        ("union", a.union(&b), Box::new(|x| raw_contains(&sa, x) || raw_contains(&sb, x))),
        ("intersect", a.intersect(&b), Box::new(|x| raw_contains(&sa, x) && raw_contains(&sb, x))),
        ("difference", a.set_difference(&b), Box::new(|x| raw_contains(&sa, x) && !raw_contains(&sb, x))),
        ("sum", a.minkowski_sum(&b), Box::new(|x| sum_contains(&sa, &sb, x))),
    ];
    for (name, result, oracle) in ops {
        assert!(result.is_normalized(), "{name} not normalized: {result}");
        let sr = segs(result.parts(), scale);
        let extra: &[Seg] = if name == "sum" { &sum_parts } else { &[] };
        for x in probes(&[&sa, &sb, &sr, extra]) {
            assert_eq!(
                raw_contains(&sr, x),
                oracle(x),
                "{name} disagrees at {x}/{scale}\na = {a}\nb = {b}\nresult = {result}"
            );
        }
    }
    // Normalization itself: same membership as the raw list.
    let sn = segs(a.parts(), scale);
    for x in probes(&[&sa, &sn]) {
        assert_eq!(raw_contains(&sn, x), raw_contains(&sa, x));
    }
}

/// Checks `count` random pairs drawn from `seed` and returns the time taken.
pub fn random_pairs(seed: u64, count: usize) -> Duration {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = Instant::now();
    for _ in 0..count {
        let a = random_parts(&mut rng);
        let b = random_parts(&mut rng);
        check_against_oracle(&a, &b);
    }
    start.elapsed()
}
