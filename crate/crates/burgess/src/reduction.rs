//! The reduction from spaced-interval maxima to a congruence count: choice
//! of the auxiliary prime l and the prime-window base P, embedding of the
//! starting points into F_l, and the exact tuple count M = M1 + M2 whose
//! off-diagonal part is dominated by the congruence count N(l, S, 12P).

use crate::arith;
use crate::congruence::{self, ResidueSet};
use crate::error::{Error, Result};
use crate::sums::SpacedPoints;

/// Work cap for the brute-force tuple count.
pub const TUPLE_WORK_CAP: u128 = 1_000_000_000;

/// Smallest prime in (q/H, 2q/H].
pub fn choose_ell(q: u64, h: u64) -> Result<u64> {
    assert!(h >= 1 && h <= q);
    arith::prime_in_interval(q as f64 / h as f64, 2.0 * q as f64 / h as f64)
}

/// Smallest admissible window base: the least integer P with
/// P >= 2H * q^(-1/(2r)). The boundary is decided by the exact integer
/// comparison P^(2r) * q >= (2H)^(2r), so perfect powers never round wrong.
pub fn choose_p(q: u64, h: u64, r: u32) -> Result<u64> {
    use num_bigint::BigUint;
    assert!(r >= 1 && q >= 1);
    // requires H > q^(1/(2r)), i.e. H^(2r) > q
    if !arith::pow_at_least(h, 2 * r, q + 1) {
        return Err(Error::HTooSmall {
            q,
            h,
            r,
            threshold: (q as f64).powf(1.0 / (2.0 * r as f64)),
        });
    }
    let target = BigUint::from(2 * h).pow(2 * r);
    let admissible = |p: u64| BigUint::from(p).pow(2 * r) * BigUint::from(q) >= target;
    let guess = (2.0 * h as f64 * (q as f64).powf(-1.0 / (2.0 * r as f64))).ceil() as u64;
    let mut p = guess.saturating_sub(2).max(1);
    while !admissible(p) {
        p += 1;
    }
    Ok(p)
}

/// Embed the starting points into F_l via M_j = floor(N_j * l / q). The
/// spacing condition makes the images strictly increasing; a collision
/// signals a violated precondition.
pub fn embed_points(points: &SpacedPoints, ell: u64) -> Result<ResidueSet> {
    let q = points.q();
    let images: Vec<u64> = points
        .points()
        .iter()
        .map(|&n| (n as u128 * ell as u128 / q as u128) as u64)
        .collect();
    for (i, w) in images.windows(2).enumerate() {
        if w[0] >= w[1] {
            return Err(Error::EmbeddingCollision { index: i });
        }
    }
    ResidueSet::new(ell, images)
}

/// Parameters of one reduction instance.
#[derive(Debug, Clone)]
pub struct ReductionConfig {
    pub q: u64,
    pub h: u64,
    pub r: u32,
    pub ell: u64,
    pub p: u64,
    pub points: SpacedPoints,
}

impl ReductionConfig {
    /// Derive l and P from (q, H, r) and validate the parameter windows.
    pub fn derive(q: u64, h: u64, r: u32, points: SpacedPoints) -> Result<Self> {
        let ell = choose_ell(q, h)?;
        let p = choose_p(q, h, r)?;
        let cfg = ReductionConfig {
            q,
            h,
            r,
            ell,
            p,
            points,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Check q/H < l <= 2q/H and 2Hq^(-1/(2r)) <= P <= 4Hq^(-1/(2r)).
    pub fn validate(&self) -> Result<()> {
        let (q, h) = (self.q as f64, self.h as f64);
        let lf = self.ell as f64;
        if !(lf > q / h && lf <= 2.0 * q / h) {
            return Err(Error::HypothesisViolated(format!(
                "l = {} outside (q/H, 2q/H] = ({}, {}]",
                self.ell,
                q / h,
                2.0 * q / h
            )));
        }
        let scale = h * q.powf(-1.0 / (2.0 * self.r as f64));
        let pf = self.p as f64;
        // tolerate float fuzz at the window edges; choose_p decided exactly
        if pf < 2.0 * scale - 1.0 || pf > 4.0 * scale + 1.0 {
            return Err(Error::HypothesisViolated(format!(
                "P = {} outside [2Hq^(-1/2r), 4Hq^(-1/2r)] = [{}, {}]",
                self.p,
                2.0 * scale,
                4.0 * scale
            )));
        }
        Ok(())
    }
}

/// Exact tuple count split by whether the two primes coincide.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TupleCount {
    pub same_prime: u64,
    pub distinct_prime: u64,
}

impl TupleCount {
    pub fn total(&self) -> u64 {
        self.same_prime + self.distinct_prime
    }
}

/// Count tuples (a1, a2, p1, p2, N_j, N_k) with p1, p2 primes in (P, 2P],
/// 0 <= a_i < p_i, and |(N_j - a1 q)/p1 - (N_k - a2 q)/p2| <= H/P. The
/// rational comparison is evaluated in cross-multiplied integer form over
/// i128, so near-ties are decided exactly.
pub fn count_tuples(cfg: &ReductionConfig) -> Result<TupleCount> {
    let primes: Vec<u64> = ((cfg.p + 1)..=2 * cfg.p).filter(|&x| arith::is_prime(x)).collect();
    let j = cfg.points.len() as u128;
    let work = (primes.len() as u128).pow(2) * (2 * cfg.p as u128).pow(2) * j * j;
    if work > TUPLE_WORK_CAP {
        return Err(Error::ScaleExceeded {
            work,
            cap: TUPLE_WORK_CAP,
        });
    }
    let q = cfg.q as i128;
    let h = cfg.h as i128;
    let p_base = cfg.p as i128;
    let mut same = 0u64;
    let mut distinct = 0u64;
    for &p1 in &primes {
        for &p2 in &primes {
            let p1i = p1 as i128;
            let p2i = p2 as i128;
            let bound = h * p1i * p2i;
            for &nj in cfg.points.points() {
                for &nk in cfg.points.points() {
                    for a1 in 0..p1 as i128 {
                        let lhs1 = (nj as i128 - a1 * q) * p2i;
                        for a2 in 0..p2 as i128 {
                            let lhs2 = (nk as i128 - a2 * q) * p1i;
                            if ((lhs1 - lhs2) * p_base).abs() <= bound {
                                if p1 == p2 {
                                    same += 1;
                                } else {
                                    distinct += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(TupleCount {
        same_prime: same,
        distinct_prime: distinct,
    })
}

/// Outcome of comparing the tuple count against the congruence count.
#[derive(Debug, Clone)]
pub struct ReductionCheck {
    pub tuples: TupleCount,
    /// N(l, S, 12P) for S the embedded points.
    pub congruence_count: u128,
    /// distinct-prime part bounded by the congruence count
    pub distinct_prime_ok: bool,
    /// empirical constant in same_prime <= C * P^2 * J
    pub same_prime_constant: f64,
}

/// Compute M, embed the points, count N(l, S, 12P), and check the exact
/// inequality M2 <= N along with the empirical constant for M1 <= C P^2 J.
pub fn check_tuple_bound(cfg: &ReductionConfig) -> Result<ReductionCheck> {
    let tuples = count_tuples(cfg)?;
    let embedded = embed_points(&cfg.points, cfg.ell)?;
    let n = congruence::count_fast(&embedded, 12 * cfg.p)?;
    let j = cfg.points.len() as f64;
    let same_prime_constant = if j > 0.0 {
        tuples.same_prime as f64 / ((cfg.p * cfg.p) as f64 * j)
    } else {
        0.0
    };
    Ok(ReductionCheck {
        tuples,
        congruence_count: n.count,
        distinct_prime_ok: (tuples.distinct_prime as u128) <= n.count,
        same_prime_constant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn choose_ell_examples() {
        assert_eq!(choose_ell(100, 10).unwrap(), 11);
        assert_eq!(choose_ell(100, 50).unwrap(), 3);
        assert_eq!(choose_ell(7, 7).unwrap(), 2);
    }

    #[test]
    fn choose_p_examples() {
        assert_eq!(choose_p(256, 16, 2).unwrap(), 8); // 2*16/256^(1/4)
        assert_eq!(choose_p(16, 8, 1).unwrap(), 4);
        assert!(matches!(
            choose_p(256, 4, 2),
            Err(Error::HTooSmall { .. })
        ));
    }

    #[test]
    fn choose_p_is_least_admissible() {
        use num_bigint::BigUint;
        for &(q, h, r) in &[(10_000u64, 200u64, 2u32), (2003, 96, 2), (999, 100, 3)] {
            let p = choose_p(q, h, r).unwrap();
            let target = BigUint::from(2 * h).pow(2 * r);
            assert!(BigUint::from(p).pow(2 * r) * BigUint::from(q) >= target);
            if p > 1 {
                assert!(BigUint::from(p - 1).pow(2 * r) * BigUint::from(q) < target);
            }
        }
    }

    #[test]
    fn embed_examples() {
        let pts = SpacedPoints::new(1000, 300, vec![0, 300, 600]).unwrap();
        let s = embed_points(&pts, 7).unwrap();
        assert_eq!(s.elements(), &[0, 2, 4]);
        let single = SpacedPoints::new(1000, 300, vec![0]).unwrap();
        assert_eq!(embed_points(&single, 7).unwrap().elements(), &[0]);
    }

    #[test]
    fn embed_detects_collisions() {
        // spacing 1 is far below q/l, so images collide
        let pts = SpacedPoints::new(1000, 1, vec![10, 11]).unwrap();
        assert!(matches!(
            embed_points(&pts, 7),
            Err(Error::EmbeddingCollision { .. })
        ));
    }

    #[test]
    fn embed_preserves_cardinality() {
        for seed in 0..10u64 {
            let q = 10_000;
            let h = 500;
            let pts = SpacedPoints::random(q, h, 12, seed).unwrap();
            let ell = choose_ell(q, h).unwrap();
            let s = embed_points(&pts, ell).unwrap();
            assert_eq!(s.len() as usize, pts.len());
        }
    }

    /// The hand-checkable toy: one point, P = 1, q/2 > H. The only prime in
    /// (1, 2] is 2, a1 = a2 must coincide, so M = M1 = 2.
    #[test]
    fn toy_tuple_count() {
        let points = SpacedPoints::new(100, 10, vec![0]).unwrap();
        let cfg = ReductionConfig {
            q: 100,
            h: 10,
            r: 1,
            ell: 11,
            p: 1,
            points,
        };
        let m = count_tuples(&cfg).unwrap();
        assert_eq!(m.same_prime, 2);
        assert_eq!(m.distinct_prime, 0);
        assert_eq!(m.total(), 2);
        let check = check_tuple_bound(&cfg).unwrap();
        assert!(check.distinct_prime_ok);
    }

    #[test]
    fn empty_points_give_zero() {
        let points = SpacedPoints::new(100, 10, vec![]).unwrap();
        let cfg = ReductionConfig {
            q: 100,
            h: 10,
            r: 1,
            ell: 11,
            p: 1,
            points,
        };
        let m = count_tuples(&cfg).unwrap();
        assert_eq!((m.same_prime, m.distinct_prime, m.total()), (0, 0, 0));
    }

    /// Independent recount keeping track of the (j, k) index order. The
    /// bijection (a1, p1, N_j) <-> (a2, p2, N_k) pairs every tuple above the
    /// diagonal with one below it, so the two off-diagonal counts agree
    /// exactly; the total must match `count_tuples`.
    #[test]
    fn tuple_count_transpose_symmetry() {
        for seed in 0..20u64 {
            let q = 2003;
            let h = 96;
            let points = SpacedPoints::random(q, h, 4, seed).unwrap();
            let cfg = ReductionConfig::derive(q, h, 2, points).unwrap();
            let primes: Vec<u64> = ((cfg.p + 1)..=2 * cfg.p)
                .filter(|&x| arith::is_prime(x))
                .collect();
            let (mut below, mut on, mut above) = (0u64, 0u64, 0u64);
            for &p1 in &primes {
                for &p2 in &primes {
                    for (j, &nj) in cfg.points.points().iter().enumerate() {
                        for (k, &nk) in cfg.points.points().iter().enumerate() {
                            for a1 in 0..p1 as i128 {
                                for a2 in 0..p2 as i128 {
                                    let d = (nj as i128 - a1 * cfg.q as i128) * p2 as i128
                                        - (nk as i128 - a2 * cfg.q as i128) * p1 as i128;
                                    if (d * cfg.p as i128).abs()
                                        <= cfg.h as i128 * (p1 * p2) as i128
                                    {
                                        match j.cmp(&k) {
                                            std::cmp::Ordering::Less => below += 1,
                                            std::cmp::Ordering::Equal => on += 1,
                                            std::cmp::Ordering::Greater => above += 1,
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
            assert_eq!(below, above, "seed {seed}");
            let m = count_tuples(&cfg).unwrap();
            assert_eq!(m.total(), below + on + above, "seed {seed}");
        }
    }

    #[test]
    fn seeded_configs_respect_congruence_bound() {
        for seed in 0..5u64 {
            let q = 9973;
            let h = 250;
            let points = SpacedPoints::random(q, h, 5, seed).unwrap();
            let cfg = ReductionConfig::derive(q, h, 2, points).unwrap();
            let check = check_tuple_bound(&cfg).unwrap();
            assert!(check.distinct_prime_ok, "seed {seed}: M2 exceeds N");
            assert_eq!(
                check.tuples.total(),
                check.tuples.same_prime + check.tuples.distinct_prime
            );
        }
    }
}
