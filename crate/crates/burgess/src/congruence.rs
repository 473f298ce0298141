//! Exact counting of solutions to a*s - b*t = c (mod l) with 1 <= a, b <= n,
//! |c| <= n (c an integer, so residues can be hit by several c), and s, t
//! drawn from a subset of F_l — by a literal brute-force oracle and by a
//! histogram/window algorithm — together with the Fourier diagnostics and a
//! step-by-step verifier for the bounding chain that controls the count.

use num_complex::Complex64;

use crate::arith::{self, RootOfUnity};
use crate::error::{Error, Result};
use crate::smoothing::{SmoothCutoff, TRUNCATION_FACTOR};
use crate::sums::BoundParams;

/// Cap on n^2 * |S|^2 for the brute-force oracle.
pub const ORACLE_WORK_CAP: u128 = 1_000_000_000;
/// Cap on the fast path's combined work (histogram + window pass).
pub const FAST_WORK_CAP: u128 = 1_000_000_000;
/// Moduli up to this size use a dense histogram array.
pub const DENSE_HISTOGRAM_CAP: u64 = 100_000_000;
/// Constant for the degenerate l <= n bound: N <= 8 * n^3 |S|^2 / l.
pub const SMALL_MODULUS_CONSTANT: f64 = 8.0;

/// A subset of F_l for prime l, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueSet {
    ell: u64,
    elements: Vec<u64>,
}

impl ResidueSet {
    pub fn new(ell: u64, mut elements: Vec<u64>) -> Result<Self> {
        if !arith::is_prime(ell) {
            return Err(Error::InvalidInput {
                what: "residue set",
                detail: format!("{ell} is not prime"),
            });
        }
        elements.sort_unstable();
        for w in elements.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidInput {
                    what: "residue set",
                    detail: format!("duplicate residue {}", w[0]),
                });
            }
        }
        if let Some(&max) = elements.last() {
            if max >= ell {
                return Err(Error::InvalidInput {
                    what: "residue set",
                    detail: format!("residue {max} not below {ell}"),
                });
            }
        }
        Ok(ResidueSet { ell, elements })
    }

    /// The consecutive set {1, ..., m}; the family on which the n^2 |S| term
    /// of the count is sharp.
    pub fn consecutive(ell: u64, m: u64) -> Result<Self> {
        if m >= ell {
            return Err(Error::InvalidInput {
                what: "residue set",
                detail: format!("m = {m} must be below l = {ell}"),
            });
        }
        Self::new(ell, (1..=m).collect())
    }

    /// The nonzero quadratic residues mod l.
    pub fn quadratic_residues(ell: u64) -> Result<Self> {
        let mut elems: Vec<u64> = (1..ell)
            .map(|x| (x as u128 * x as u128 % ell as u128) as u64)
            .collect();
        elems.sort_unstable();
        elems.dedup();
        Self::new(ell, elems)
    }

    /// Seeded random subset of the requested size.
    pub fn random(ell: u64, size: u64, seed: u64) -> Result<Self> {
        use rand::{Rng, SeedableRng};
        if size > ell {
            return Err(Error::InvalidInput {
                what: "residue set",
                detail: format!("requested {size} residues from F_{ell}"),
            });
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut chosen = std::collections::BTreeSet::new();
        while (chosen.len() as u64) < size {
            chosen.insert(rng.gen_range(0..ell));
        }
        Self::new(ell, chosen.into_iter().collect())
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The reflected set {-x : x in S}.
    pub fn negated(&self) -> Self {
        let mut elements: Vec<u64> = self
            .elements
            .iter()
            .map(|&x| if x == 0 { 0 } else { self.ell - x })
            .collect();
        elements.sort_unstable();
        ResidueSet {
            ell: self.ell,
            elements,
        }
    }

    /// Fourier coefficient sum_{x in S} exp(2*pi*i*x*r/l).
    pub fn fourier(&self, r: i64) -> Complex64 {
        let r = r.rem_euclid(self.ell as i64) as u64;
        let mut sum = Complex64::new(0.0, 0.0);
        for &x in &self.elements {
            sum += RootOfUnity::new((x as u128 * r as u128 % self.ell as u128) as i64, self.ell)
                .to_complex();
        }
        sum
    }

    /// All l Fourier coefficients, indexed by the residue r.
    pub fn fourier_all(&self) -> Vec<Complex64> {
        let ell = self.ell;
        // tabulate the l-th roots once
        let roots: Vec<Complex64> = (0..ell)
            .map(|k| RootOfUnity::new(k as i64, ell).to_complex())
            .collect();
        let mut out = vec![Complex64::new(0.0, 0.0); ell as usize];
        for (r, slot) in out.iter_mut().enumerate() {
            let mut sum = Complex64::new(0.0, 0.0);
            for &x in &self.elements {
                sum += roots[(x as u128 * r as u128 % ell as u128) as usize];
            }
            *slot = sum;
        }
        out
    }
}

/// How a count was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMethod {
    BruteForce,
    Fast,
}

/// Result of a congruence count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolutionCount {
    pub ell: u64,
    pub n: u64,
    pub set_size: u64,
    pub count: u128,
    pub method: CountMethod,
}

/// Brute-force oracle: a literal scan over (a, b, s, t) with an inner loop
/// over the integers c in [-n, n]. Refuses when n^2 |S|^2 exceeds the cap.
pub fn count_bruteforce(set: &ResidueSet, n: u64) -> Result<SolutionCount> {
    let m = set.len() as u128;
    let work = (n as u128 * n as u128) * m * m;
    if work > ORACLE_WORK_CAP {
        return Err(Error::OracleTooLarge {
            work,
            cap: ORACLE_WORK_CAP,
        });
    }
    let ell = set.ell() as i64;
    let n_i = n as i64;
    let mut count: u128 = 0;
    for a in 1..=n_i {
        for &s in set.elements() {
            let as_ = a * s as i64;
            for b in 1..=n_i {
                for &t in set.elements() {
                    let d = as_ - b * t as i64;
                    for c in -n_i..=n_i {
                        if (d - c) % ell == 0 {
                            count += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(SolutionCount {
        ell: set.ell(),
        n,
        set_size: set.len(),
        count,
        method: CountMethod::BruteForce,
    })
}

/// Histogram of products: f[x] = #{(a, s) : a in [1, n], s in S, a*s = x}.
fn product_histogram(set: &ResidueSet, n: u64) -> Result<Vec<u32>> {
    let ell = set.ell();
    if ell > DENSE_HISTOGRAM_CAP {
        return Err(Error::ScaleExceeded {
            work: ell as u128,
            cap: DENSE_HISTOGRAM_CAP as u128,
        });
    }
    let mut f = vec![0u32; ell as usize];
    for &s in set.elements() {
        let step = s % ell;
        let mut x = 0u64;
        for _ in 1..=n {
            x += step;
            if x >= ell {
                x -= ell;
            }
            f[x as usize] += 1;
        }
    }
    Ok(f)
}

/// Sparse histogram for moduli past the dense cap: (residue, count) pairs.
fn product_histogram_sparse(set: &ResidueSet, n: u64) -> Vec<(u64, u64)> {
    let ell = set.ell();
    let mut f = std::collections::BTreeMap::new();
    for &s in set.elements() {
        let step = s % ell;
        let mut x = 0u64;
        for _ in 1..=n {
            x += step;
            if x >= ell {
                x -= ell;
            }
            *f.entry(x).or_insert(0u64) += 1;
        }
    }
    f.into_iter().collect()
}

/// Number of integers c in [-n, n] with c = d (mod l), for d in [0, l).
fn residue_multiplicity(d: u64, n: u64, ell: u64) -> u64 {
    let (d, n, ell) = (d as i128, n as i128, ell as i128);
    ((n - d).div_euclid(ell) + (n + d).div_euclid(ell) + 1) as u64
}

/// Pair-sum fallback over the sparse histogram support, weighting each pair
/// with the exact residue multiplicity.
fn count_sparse(set: &ResidueSet, n: u64) -> Result<u128> {
    let ell = set.ell();
    let support = product_histogram_sparse(set, n);
    let pairs = (support.len() as u128).pow(2);
    if pairs > FAST_WORK_CAP {
        return Err(Error::ScaleExceeded {
            work: pairs,
            cap: FAST_WORK_CAP,
        });
    }
    let mut count = 0u128;
    for &(x, fx) in &support {
        for &(y, fy) in &support {
            let d = (x + ell - y) % ell;
            let m = residue_multiplicity(d, n, ell);
            if m > 0 {
                count += fx as u128 * fy as u128 * m as u128;
            }
        }
    }
    Ok(count)
}

/// Exact count by histogram correlation. The multiplicity of a residue d
/// among the integers c in [-n, n] is floor((n-d)/l) + floor((n+d)/l) + 1,
/// which splits into a constant floor((2n+1)/l) plus the indicator of a
/// cyclic window of width (2n+1) mod l starting at -n; the windowed part is
/// a prefix-sum pass over the histogram.
pub fn count_fast(set: &ResidueSet, n: u64) -> Result<SolutionCount> {
    let ell = set.ell();
    let work = (n as u128) * (set.len() as u128) + ell as u128;
    if work > FAST_WORK_CAP {
        return Err(Error::ScaleExceeded {
            work,
            cap: FAST_WORK_CAP,
        });
    }
    if set.is_empty() {
        return Ok(SolutionCount {
            ell,
            n,
            set_size: 0,
            count: 0,
            method: CountMethod::Fast,
        });
    }
    if ell > DENSE_HISTOGRAM_CAP {
        let count = count_sparse(set, n)?;
        return Ok(SolutionCount {
            ell,
            n,
            set_size: set.len(),
            count,
            method: CountMethod::Fast,
        });
    }
    let f = product_histogram(set, n)?;
    let total: u128 = (n as u128) * (set.len() as u128);

    let span = 2 * n as u128 + 1;
    let base = span / ell as u128;
    let width = (span % ell as u128) as u64;
    let mut count = base * total * total;

    if width > 0 {
        // prefix[i] = f[0] + ... + f[i-1]
        let mut prefix = vec![0u64; ell as usize + 1];
        for i in 0..ell as usize {
            prefix[i + 1] = prefix[i] + f[i] as u64;
        }
        let window_sum = |lo: u64, len: u64| -> u64 {
            // sum of f over the cyclic range [lo, lo+len)
            let hi = lo + len;
            if hi <= ell {
                prefix[hi as usize] - prefix[lo as usize]
            } else {
                (prefix[ell as usize] - prefix[lo as usize]) + prefix[(hi - ell) as usize]
            }
        };
        // residues with an extra c start at -n mod l
        let win_start = (ell - n % ell) % ell;
        for (x, &fx) in f.iter().enumerate() {
            if fx == 0 {
                continue;
            }
            // y with (x - y) mod l in [win_start, win_start + width)
            let y_first = (x as u64 + 2 * ell - win_start - (width - 1)) % ell;
            count += fx as u128 * window_sum(y_first, width) as u128;
        }
    }
    Ok(SolutionCount {
        ell,
        n,
        set_size: set.len(),
        count,
        method: CountMethod::Fast,
    })
}

/// The two-term reference bound C * (n^3 |S|^2 / l + l^eps * n^2 * |S|).
pub fn proposition_rhs(ell: u64, n: u64, set_size: u64, params: &BoundParams) -> f64 {
    let lf = ell as f64;
    let nf = n as f64;
    let mf = set_size as f64;
    params.constant * (nf.powi(3) * mf * mf / lf + lf.powf(params.epsilon) * nf * nf * mf)
}

/// Number of ways to write s = a*r (mod l) with 1 <= |a| <= n and
/// 0 < |r| <= l/(5n), both as symmetric signed representatives. The range
/// bound is evaluated exactly as 5*n*|r| <= l.
pub fn representation_count(ell: u64, n: u64, s: u64) -> u64 {
    assert!(s % ell != 0, "s must be nonzero mod l");
    assert!(n < ell, "requires n < l");
    let mut count = 0u64;
    for a in 1..=n {
        let inv = arith::mod_inv(a % ell, ell).expect("a invertible below prime l");
        let r = (s as u128 * inv as u128 % ell as u128) as u64;
        let r_abs = r.min(ell - r); // |symmetric representative|
        if r_abs > 0 && 5u128 * n as u128 * r_abs as u128 <= ell as u128 {
            count += 2; // (a, r) and (-a, -r)
        }
    }
    count
}

/// rep table over all nonzero s, built by enumerating the admissible (a, r)
/// pairs directly; rep[0] is unused and stays 0.
pub fn representation_table(ell: u64, n: u64) -> Vec<u32> {
    assert!(n < ell);
    let mut rep = vec![0u32; ell as usize];
    let r_max = ell / (5 * n);
    for a in 1..=n {
        for r in 1..=r_max {
            let s = (a as u128 * r as u128 % ell as u128) as u64;
            rep[s as usize] += 2; // (+a, +r) and (-a, -r)
            rep[(ell - s) as usize] += 2; // (+a, -r) and (-a, +r)
        }
    }
    rep
}

/// The smoothed solution count: phi(c/n) summed over all (a, b, s, t) and
/// every integer c with c = a*s - b*t (mod l) and |c| <= 1000n. Grouped by
/// the residue of a*s and b*t; identical value to the four-fold literal sum.
pub fn smoothed_count(set: &ResidueSet, n: u64, cutoff: &SmoothCutoff) -> Result<f64> {
    let ell = set.ell();
    let support = (set.len() as u128 * n as u128).min(ell as u128);
    if support * support > ORACLE_WORK_CAP {
        return Err(Error::ScaleExceeded {
            work: support * support,
            cap: ORACLE_WORK_CAP,
        });
    }
    if set.is_empty() {
        return Ok(0.0);
    }
    let f = product_histogram(set, n)?;
    let radius = (TRUNCATION_FACTOR * n) as i64;
    // weight of each residue class: sum of phi(c/n) over c = d (mod l)
    let mut weight = vec![0.0f64; ell as usize];
    for (d, w) in weight.iter_mut().enumerate() {
        let mut c = d as i64;
        while c > -radius {
            c -= ell as i64;
        }
        c += ell as i64;
        let mut acc = 0.0;
        while c <= radius {
            acc += cutoff.phi(c as f64 / n as f64);
            c += ell as i64;
        }
        *w = acc;
    }
    let support_idx: Vec<usize> = (0..ell as usize).filter(|&i| f[i] > 0).collect();
    let mut total = 0.0f64;
    for &x in &support_idx {
        let fx = f[x] as f64;
        let mut inner = 0.0f64;
        for &y in &support_idx {
            let d = (x + ell as usize - y) % ell as usize;
            inner += f[y] as f64 * weight[d];
        }
        total += fx * inner;
    }
    Ok(total)
}

/// Whether a chain step asserts an inequality or an identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
}

/// One verified step: both sides computed independently.
#[derive(Debug, Clone)]
pub struct ChainStep {
    pub name: &'static str,
    pub relation: Relation,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

impl ChainStep {
    fn check(name: &'static str, relation: Relation, lhs: f64, rhs: f64) -> Self {
        let pass = match relation {
            Relation::Le => lhs <= rhs * (1.0 + 1e-9) + 1e-12,
            Relation::Eq => (lhs - rhs).abs() <= 1e-9 * lhs.abs().max(rhs.abs()).max(1e-12),
        };
        ChainStep {
            name,
            relation,
            lhs,
            rhs,
            pass,
        }
    }
}

/// Verification record for one (l, S, n) instance.
#[derive(Debug, Clone)]
pub struct ChainReport {
    pub ell: u64,
    pub n: u64,
    pub set_size: u64,
    pub steps: Vec<ChainStep>,
}

impl ChainReport {
    pub fn all_pass(&self) -> bool {
        self.steps.iter().all(|s| s.pass)
    }
}

/// Verify every inequality used to bound the count, step by step. For
/// l > n the chain runs: smoothed domination, the spectral bound after
/// orthogonality and the lattice-sum identity, the main-term split, the
/// arithmetic-geometric mean step, the representation-count identity, and
/// the Parseval bound. For l <= n only the degenerate pigeonhole bound
/// applies. A failing step is reported, not raised.
pub fn verify_proof_chain(set: &ResidueSet, n: u64, cutoff: &SmoothCutoff) -> Result<ChainReport> {
    let ell = set.ell();
    let m = set.len();
    let mut steps = Vec::new();

    let count = count_fast(set, n)?.count as f64;

    if ell <= n {
        let rhs =
            SMALL_MODULUS_CONSTANT * (n as f64).powi(3) * (m as f64).powi(2) / ell as f64;
        steps.push(ChainStep::check("small_modulus_bound", Relation::Le, count, rhs));
        return Ok(ChainReport {
            ell,
            n,
            set_size: m,
            steps,
        });
    }

    let smoothed = smoothed_count(set, n, cutoff)?;
    let phi_min = cutoff.min_on_unit_interval();
    steps.push(ChainStep::check(
        "smooth_domination",
        Relation::Le,
        phi_min * count,
        smoothed,
    ));

    let shat = set.fourier_all();
    let r_max = (ell / (5 * n)) as i64;
    let sf = |x: i64| shat[x.rem_euclid(ell as i64) as usize];
    // A(r) = sum over a in [1, n] of S_hat(a r)
    let dilated = |r: i64| -> Complex64 {
        (1..=n as i64).map(|a| sf(a * r)).sum()
    };
    let nf = n as f64;
    let lf = ell as f64;
    let mf = m as f64;

    let mut spectral = Complex64::new(0.0, 0.0);
    for r in -r_max..=r_max {
        spectral += dilated(r) * dilated(-r) * cutoff.phi_hat(-nf * r as f64 / lf);
    }
    let spectral = nf / lf * spectral.re;
    steps.push(ChainStep::check(
        "poisson_spectral_bound",
        Relation::Le,
        smoothed,
        spectral,
    ));

    // sum over a in [1, n] of |S_hat(a r)|, and of |S_hat(a r)|^2
    let dilated_abs = |r: i64| -> f64 { (1..=n as i64).map(|a| sf(a * r).norm()).sum() };
    let dilated_sq = |r: i64| -> f64 { (1..=n as i64).map(|a| sf(a * r).norm_sqr()).sum() };

    let mut cross = 0.0; // sum over 0 < |r| of prod of dilated abs sums
    let mut squares = 0.0; // sum over 0 < |r|, a, b of |S(ar)|^2 + |S(-br)|^2
    for r in 1..=r_max {
        for &rr in &[r, -r] {
            cross += dilated_abs(rr) * dilated_abs(-rr);
            squares += nf * (dilated_sq(rr) + dilated_sq(-rr));
        }
    }
    let main_term = nf.powi(3) * mf * mf / lf;
    steps.push(ChainStep::check(
        "main_term_split",
        Relation::Le,
        spectral,
        main_term + nf / lf * cross,
    ));
    steps.push(ChainStep::check("am_gm", Relation::Le, 2.0 * cross, squares));

    // sum over 0 < |r|, 1 <= |a| <= n of |S_hat(ar)|^2, directly and via the
    // representation counts
    let mut direct = 0.0;
    for r in 1..=r_max {
        for &rr in &[r, -r] {
            direct += dilated_sq(rr) + dilated_sq(-rr);
        }
    }
    let rep = representation_table(ell, n);
    let mut via_rep = 0.0;
    let mut max_rep = 0u32;
    for s in 1..ell as usize {
        via_rep += rep[s] as f64 * shat[s].norm_sqr();
        max_rep = max_rep.max(rep[s]);
    }
    steps.push(ChainStep::check(
        "representation_identity",
        Relation::Eq,
        direct,
        via_rep,
    ));
    steps.push(ChainStep::check(
        "representation_parseval_bound",
        Relation::Le,
        via_rep,
        max_rep as f64 * lf * mf,
    ));

    Ok(ChainReport {
        ell,
        n,
        set_size: m,
        steps,
    })
}
