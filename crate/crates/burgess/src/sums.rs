//! Interval character sums, running prefix maxima, mean-value left-hand
//! sides, and the closed-form reference bounds they are measured against.

use num_complex::Complex64;

use crate::dirichlet::{CharValue, Character};
use crate::error::{Error, Result};

/// Starting points 0 <= N_1 < ... < N_J < q with consecutive spacing >= H.
#[derive(Debug, Clone)]
pub struct SpacedPoints {
    q: u64,
    h: u64,
    points: Vec<u64>,
}

impl SpacedPoints {
    pub fn new(q: u64, h: u64, points: Vec<u64>) -> Result<Self> {
        for (i, w) in points.windows(2).enumerate() {
            if w[1] < w[0] + h {
                return Err(Error::InvalidInput {
                    what: "spaced points",
                    detail: format!("points {i} and {} violate spacing {h}", i + 1),
                });
            }
        }
        if let Some(&last) = points.last() {
            if last >= q {
                return Err(Error::InvalidInput {
                    what: "spaced points",
                    detail: format!("last point {last} not below q = {q}"),
                });
            }
        }
        Ok(SpacedPoints { q, h, points })
    }

    /// N_j = (j-1) * floor(q/J); valid whenever J*H <= q.
    pub fn uniform(q: u64, h: u64, j: u64) -> Result<Self> {
        if j == 0 {
            return Ok(SpacedPoints {
                q,
                h,
                points: vec![],
            });
        }
        if (j as u128) * (h as u128) > q as u128 {
            return Err(Error::InfeasibleSpacing { q, h, j });
        }
        let step = q / j;
        Ok(SpacedPoints {
            q,
            h,
            points: (0..j).map(|i| i * step).collect(),
        })
    }

    /// Seeded: J points drawn uniformly, sorted, resampled until the spacing
    /// condition holds. Attempts are capped so dense configurations fail
    /// instead of spinning.
    pub fn random(q: u64, h: u64, j: u64, seed: u64) -> Result<Self> {
        use rand::{Rng, SeedableRng};
        if (j as u128) * (h as u128) > q as u128 {
            return Err(Error::InfeasibleSpacing { q, h, j });
        }
        if j == 0 {
            return Ok(SpacedPoints {
                q,
                h,
                points: vec![],
            });
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..100_000 {
            let mut pts: Vec<u64> = (0..j).map(|_| rng.gen_range(0..q)).collect();
            pts.sort_unstable();
            if pts.windows(2).all(|w| w[1] >= w[0] + h) {
                return Ok(SpacedPoints { q, h, points: pts });
            }
        }
        Err(Error::InfeasibleSpacing { q, h, j })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn h(&self) -> u64 {
        self.h
    }

    pub fn points(&self) -> &[u64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// A union of pairwise disjoint intervals (N, N+L] inside [1, q].
#[derive(Debug, Clone)]
pub struct UnionOfIntervals {
    q: u64,
    intervals: Vec<(u64, u64)>,
}

impl UnionOfIntervals {
    pub fn new(q: u64, mut intervals: Vec<(u64, u64)>) -> Result<Self> {
        intervals.sort_unstable();
        for &(n, l) in &intervals {
            if l == 0 || n + l > q {
                return Err(Error::InvalidInput {
                    what: "union of intervals",
                    detail: format!("interval ({n}, {}] not inside [1, {q}]", n + l),
                });
            }
        }
        for w in intervals.windows(2) {
            if w[0].0 + w[0].1 > w[1].0 {
                return Err(Error::InvalidInput {
                    what: "union of intervals",
                    detail: format!("intervals starting at {} and {} overlap", w[0].0, w[1].0),
                });
            }
        }
        Ok(UnionOfIntervals { q, intervals })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// (start, length) pairs, sorted by start.
    pub fn intervals(&self) -> &[(u64, u64)] {
        &self.intervals
    }

    pub fn interval_count(&self) -> usize {
        self.intervals.len()
    }

    /// |A| = sum of the interval lengths.
    pub fn total_length(&self) -> u64 {
        self.intervals.iter().map(|&(_, l)| l).sum()
    }
}

/// Epsilon and the multiplicative constant used when evaluating a bound
/// formula. Every report records the values it used.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BoundParams {
    pub epsilon: f64,
    pub constant: f64,
}

impl Default for BoundParams {
    fn default() -> Self {
        BoundParams {
            epsilon: 0.1,
            constant: 1.0,
        }
    }
}

/// S(N; h) = sum of chi(n) over N < n <= N+h, accumulated left to right.
/// Exact integer arithmetic when chi is real; exact per-class counts for
/// orders up to 16; complex doubles otherwise.
pub fn interval_sum(chi: &Character, start: i64, h: u64) -> Complex64 {
    if chi.is_real() {
        let mut sum = 0i64;
        for n in 1..=h as i64 {
            sum += chi.eval_real(start + n).expect("real character") as i64;
        }
        return Complex64::new(sum as f64, 0.0);
    }
    let order = chi.order();
    if order <= 16 {
        let mut counts = vec![0u64; order as usize];
        for n in 1..=h as i64 {
            if let CharValue::Root(r) = chi.eval(start + n) {
                counts[(r.numerator() * (order / r.denominator())) as usize] += 1;
            }
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for (k, &c) in counts.iter().enumerate() {
            if c > 0 {
                sum += crate::arith::RootOfUnity::new(k as i64, order).to_complex() * c as f64;
            }
        }
        return sum;
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 1..=h as i64 {
        sum += chi.eval_complex(start + n);
    }
    sum
}

/// max over 1 <= h <= H of |S(start; h)|, in a single prefix pass.
pub fn max_prefix(chi: &Character, start: i64, h_max: u64) -> f64 {
    if chi.is_real() {
        let mut sum = 0i64;
        let mut best = 0u64;
        for n in 1..=h_max as i64 {
            sum += chi.eval_real(start + n).expect("real character") as i64;
            best = best.max(sum.unsigned_abs());
        }
        return best as f64;
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut best = 0.0f64;
    for n in 1..=h_max as i64 {
        sum += chi.eval_complex(start + n);
        best = best.max(sum.norm());
    }
    best
}

/// Even (2r) or odd-variant (3r) exponent family for the mean-value sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerFactor {
    Two,
    Three,
}

impl PowerFactor {
    fn value(self) -> u32 {
        match self {
            PowerFactor::Two => 2,
            PowerFactor::Three => 3,
        }
    }
}

/// sum over j of (max_{h<=H} |S(N_j; h)|)^(factor*r).
pub fn mean_value_lhs(
    chi: &Character,
    pts: &SpacedPoints,
    r: u32,
    power_factor: PowerFactor,
) -> f64 {
    power_sum_lhs(chi, pts, power_factor.value() * r)
}

/// sum over j of (max_{h<=H} |S(N_j; h)|)^exponent for any exponent.
pub fn power_sum_lhs(chi: &Character, pts: &SpacedPoints, exponent: u32) -> f64 {
    pts.points()
        .iter()
        .map(|&n| max_prefix(chi, n as i64, pts.h()).powi(exponent as i32))
        .sum()
}

/// The closed-form right-hand sides computed by [`reference_bound`]. The
/// variant names match the column names of the report format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// q^(1/2 + 1/(2r) + eps) * H^(2r-2)
    Thm2r,
    /// q^(3/4 + 3/(4r) + eps) * H^(3r-3)
    Hb3r,
    /// q^(1/4 + 1/(4r) + eps) * H^(r-1) * J^(1/2) + q^(-1/4 + eps) * H^r * J
    Eq4,
    /// H^(1 - 1/r) * q^((r+1)/(4r^2) + eps)
    Burgess,
    /// q * (ln q)^2
    MeanR1,
    /// q^eps * (q * H^(r-1) + q^(1/2) * H^(2r-1))
    MeanGeneral,
    /// J * H^(2r)
    Trivial,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Thm2r => "thm2r",
            BoundKind::Hb3r => "hb3r",
            BoundKind::Eq4 => "eq4",
            BoundKind::Burgess => "burgess",
            BoundKind::MeanR1 => "mean_r1",
            BoundKind::MeanGeneral => "mean_general",
            BoundKind::Trivial => "trivial",
        }
    }
}

/// Evaluate one reference bound. `j` is required by the Eq4 and Trivial
/// kinds and ignored by the rest. Logarithms are natural.
pub fn reference_bound(
    kind: BoundKind,
    q: u64,
    h: u64,
    r: u32,
    j: Option<u64>,
    params: &BoundParams,
) -> Result<f64> {
    assert!(q >= 1 && h >= 1 && r >= 1);
    let qf = q as f64;
    let hf = h as f64;
    let rf = r as f64;
    let eps = params.epsilon;
    let need_j = || {
        j.map(|j| j as f64).ok_or(Error::InvalidInput {
            what: "reference bound",
            detail: format!("kind {} requires J", kind.name()),
        })
    };
    let raw = match kind {
        BoundKind::Thm2r => qf.powf(0.5 + 1.0 / (2.0 * rf) + eps) * hf.powi(2 * r as i32 - 2),
        BoundKind::Hb3r => qf.powf(0.75 + 3.0 / (4.0 * rf) + eps) * hf.powi(3 * r as i32 - 3),
        BoundKind::Eq4 => {
            let jf = need_j()?;
            qf.powf(0.25 + 1.0 / (4.0 * rf) + eps) * hf.powi(r as i32 - 1) * jf.sqrt()
                + qf.powf(-0.25 + eps) * hf.powi(r as i32) * jf
        }
        BoundKind::Burgess => {
            hf.powf(1.0 - 1.0 / rf) * qf.powf((rf + 1.0) / (4.0 * rf * rf) + eps)
        }
        BoundKind::MeanR1 => qf * qf.ln().powi(2),
        BoundKind::MeanGeneral => {
            qf.powf(eps) * (qf * hf.powi(r as i32 - 1) + qf.sqrt() * hf.powi(2 * r as i32 - 1))
        }
        BoundKind::Trivial => need_j()? * hf.powi(2 * r as i32),
    };
    Ok(params.constant * raw)
}

/// Character sum over a union of intervals, interval by interval.
pub fn union_sum(chi: &Character, a: &UnionOfIntervals) -> Complex64 {
    a.intervals()
        .iter()
        .map(|&(n, l)| interval_sum(chi, n as i64, l))
        .sum()
}
