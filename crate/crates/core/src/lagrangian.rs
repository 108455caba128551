//! Maximization of the edge-product polynomial over the probability simplex.
//!
//! For an r-uniform hypergraph `G` on `[n]` the objective is
//! `p(x) = sum over edges e of prod_{v in e} x_v` with `x` ranging over the
//! simplex (nonnegative entries summing to one). The maximum value is the
//! central quantity of this crate; `r! * max` is the edge density its
//! blow-ups approach.
//!
//! The solver runs a deterministic multistart projected-gradient ascent,
//! prunes near-zero coordinates, polishes stationary points with Newton
//! steps on the active support (falling back to the monotone growth
//! transform `x_i <- x_i * d_i / (r p)`), and certifies first-order
//! optimality: on the support all partial derivatives must equal `r * p(x)`
//! up to a pinned tolerance, and off the support they must not exceed it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::hypergraph::Hypergraph;
use crate::scalar::Real;

/// Coordinates below this fraction of total mass count as "off support".
pub const SUPPORT_EPS: f64 = 1e-9;
/// Certification bound for the stationarity residual on the support.
pub const CERT_KKT_TOL: f64 = 1e-10;
/// Certification bound for first-order excess off the support.
pub const CERT_BOUNDARY_TOL: f64 = 1e-9;
/// Largest ground set accepted by the exhaustive-support mode (`2^n - 1`
/// subsets are enumerated).
pub const EXHAUSTIVE_MAX_N: u32 = 10;

/// Errors from weight-vector construction.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WeightError {
    #[error("weight vector must be nonempty")]
    Empty,
    #[error("weight {index} is not finite")]
    NotFinite { index: usize },
    #[error("weight {index} is negative ({value})")]
    Negative { index: usize, value: f64 },
    #[error("weights sum to {sum}, not 1 (tolerance {tol})")]
    BadSum { sum: f64, tol: f64 },
}

/// A point of the probability simplex, indexed so that entry `i` is the
/// weight of vertex `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Weights<T: Real> {
    values: Vec<T>,
}

impl<T: Real> Weights<T> {
    /// Validates nonnegativity, finiteness, and unit sum (tolerance scales
    /// with the scalar's epsilon and the dimension).
    pub fn new(values: Vec<T>) -> Result<Self, WeightError> {
        if values.is_empty() {
            return Err(WeightError::Empty);
        }
        for (index, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(WeightError::NotFinite { index });
            }
            if *v < T::zero() {
                return Err(WeightError::Negative { index, value: v.to_report() });
            }
        }
        let sum: T = values.iter().copied().sum();
        let tol = T::epsilon() * T::from_usize(values.len()).unwrap() * T::from_config(64.0);
        if (sum - T::one()).abs() > tol {
            return Err(WeightError::BadSum { sum: sum.to_report(), tol: tol.to_report() });
        }
        Ok(Weights { values })
    }

    /// Rescales arbitrary nonnegative finite values to unit sum.
    pub fn normalized(mut values: Vec<T>) -> Result<Self, WeightError> {
        if values.is_empty() {
            return Err(WeightError::Empty);
        }
        for (index, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(WeightError::NotFinite { index });
            }
            if *v < T::zero() {
                return Err(WeightError::Negative { index, value: v.to_report() });
            }
        }
        let sum: T = values.iter().copied().sum();
        if sum <= T::zero() {
            let u = T::one() / T::from_usize(values.len()).unwrap();
            values.iter_mut().for_each(|v| *v = u);
        } else {
            values.iter_mut().for_each(|v| *v = *v / sum);
        }
        Ok(Weights { values })
    }

    /// The uniform point on `n` coordinates.
    pub fn uniform(n: usize) -> Self {
        assert!(n > 0);
        let u = T::one() / T::from_usize(n).unwrap();
        Weights { values: vec![u; n] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    /// Vertices (1-based) whose weight exceeds [`SUPPORT_EPS`].
    pub fn support(&self) -> Vec<u32> {
        let eps = T::from_config(SUPPORT_EPS);
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v > eps)
            .map(|(i, _)| i as u32 + 1)
            .collect()
    }
}

/// Solver options. The defaults reproduce the pinned deterministic
/// behavior used by the verification suite.
#[derive(Debug, Clone)]
pub struct Options {
    /// Number of independent starts (the first is uniform, the next cover
    /// the edges, the rest are random simplex points).
    pub restarts: usize,
    /// Iteration cap per start.
    pub max_iters: usize,
    /// Base seed; each start derives its own stream, so results do not
    /// depend on scheduling.
    pub seed: u64,
    /// Run starts in parallel (identical results either way).
    pub parallel: bool,
    /// Enumerate every support subset (ground sets up to
    /// [`EXHAUSTIVE_MAX_N`]) in addition to the multistart.
    pub exhaustive_support: bool,
    /// Stationarity tolerance required for certification.
    pub kkt_tol: f64,
    /// Off-support first-order excess tolerated in certification.
    pub boundary_tol: f64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            restarts: 200,
            max_iters: 100_000,
            seed: 0,
            parallel: true,
            exhaustive_support: false,
            kkt_tol: CERT_KKT_TOL,
            boundary_tol: CERT_BOUNDARY_TOL,
        }
    }
}

impl Options {
    /// Convenience: default options with a given seed.
    pub fn seeded(seed: u64) -> Self {
        Options { seed, ..Self::default() }
    }
}

/// Result of a maximization run.
#[derive(Debug, Clone)]
pub struct Maximum<T: Real> {
    /// Best objective value found.
    pub value: T,
    /// Maximizing point.
    pub weights: Weights<T>,
    /// Stationarity residual on the support: `max |d_i - r p|`.
    pub kkt_residual: T,
    /// First-order excess off the support: `max(0, d_i - r p)` over
    /// near-zero coordinates.
    pub boundary_excess: T,
    /// Whether both residuals met the certification tolerances.
    pub certified: bool,
    /// Starts actually executed (multistart plus exhaustive polishes).
    pub restarts_used: usize,
    /// Whether the exhaustive-support sweep ran.
    pub exhaustive: bool,
}

impl<T: Real> Maximum<T> {
    /// Vertices carrying weight in the reported maximizer.
    pub fn support(&self) -> Vec<u32> {
        self.weights.support()
    }
}

fn assert_dims<T: Real>(g: &Hypergraph, x: &[T]) {
    assert_eq!(
        x.len(),
        g.n() as usize,
        "weight vector length {} does not match ground set size {}",
        x.len(),
        g.n()
    );
}

/// Evaluates the edge-product polynomial with a compensated (Neumaier) sum,
/// so million-edge graphs lose almost no precision.
pub fn poly_eval<T: Real>(g: &Hypergraph, x: &[T]) -> T {
    assert_dims(g, x);
    let mut sum = T::zero();
    let mut comp = T::zero();
    for edge in g.edges() {
        let mut prod = T::one();
        for &v in edge {
            prod *= x[(v - 1) as usize];
        }
        let t = sum + prod;
        if sum.abs() >= prod.abs() {
            comp += (sum - t) + prod;
        } else {
            comp += (prod - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Gradient of the edge-product polynomial: coordinate `i` sums, over edges
/// through vertex `i + 1`, the product of the other weights.
pub fn poly_grad<T: Real>(g: &Hypergraph, x: &[T]) -> Vec<T> {
    assert_dims(g, x);
    let mut grad = vec![T::zero(); x.len()];
    let r = g.r() as usize;
    for edge in g.edges() {
        for skip in 0..r {
            let mut prod = T::one();
            for (pos, &v) in edge.iter().enumerate() {
                if pos != skip {
                    prod *= x[(v - 1) as usize];
                }
            }
            grad[(edge[skip] - 1) as usize] += prod;
        }
    }
    grad
}

/// Exact evaluation over the rationals, for closed-form certificates.
pub fn poly_eval_exact(g: &Hypergraph, x: &[BigRational]) -> BigRational {
    assert_eq!(x.len(), g.n() as usize);
    let mut sum = BigRational::zero();
    for edge in g.edges() {
        let mut prod = BigRational::one();
        for &v in edge {
            prod *= &x[(v - 1) as usize];
        }
        sum += prod;
    }
    sum
}

/// Checks that exact weights lie on the rational simplex.
pub fn is_exact_simplex_point(x: &[BigRational]) -> bool {
    !x.is_empty()
        && x.iter().all(|v| !v.is_negative())
        && x.iter().sum::<BigRational>() == BigRational::one()
}

/// Convenience: a rational `num/den`.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// First-order report at a point: stationarity residual over the support
/// and excess over the bound off the support.
#[derive(Debug, Clone, Copy)]
pub struct KktReport<T> {
    pub residual: T,
    pub boundary_excess: T,
}

/// Computes the first-order report at `x`.
pub fn kkt_report<T: Real>(g: &Hypergraph, x: &[T]) -> KktReport<T> {
    assert_dims(g, x);
    let p = poly_eval(g, x);
    let grad = poly_grad(g, x);
    let target = T::from_u32(g.r()).unwrap() * p;
    let eps = T::from_config(SUPPORT_EPS);
    let mut residual = T::zero();
    let mut excess = T::zero();
    for (i, &xi) in x.iter().enumerate() {
        if xi > eps {
            residual = residual.max((grad[i] - target).abs());
        } else {
            excess = excess.max((grad[i] - target).max(T::zero()));
        }
    }
    KktReport { residual, boundary_excess: excess }
}

/// Stationarity residual on the support (shorthand for the report field).
pub fn kkt_residual<T: Real>(g: &Hypergraph, x: &[T]) -> T {
    kkt_report(g, x).residual
}

/// Euclidean projection onto the probability simplex.
fn project_simplex<T: Real>(x: &mut [T]) {
    let n = x.len();
    let mut sorted: Vec<T> = x.to_vec();
    sorted.sort_unstable_by(|a, b| b.partial_cmp(a).expect("finite weights"));
    let mut cumulative = T::zero();
    let mut theta = T::zero();
    let mut rho = 0usize;
    for (k, &v) in sorted.iter().enumerate() {
        cumulative += v;
        let k1 = T::from_usize(k + 1).unwrap();
        let candidate = (cumulative - T::one()) / k1;
        if v - candidate > T::zero() {
            rho = k + 1;
            theta = candidate;
        }
    }
    debug_assert!(rho > 0, "projection needs at least one positive coordinate");
    let _ = n;
    for v in x.iter_mut() {
        *v = (*v - theta).max(T::zero());
    }
    // Exact renormalization guards against drift.
    let sum: T = x.iter().copied().sum();
    if sum > T::zero() {
        x.iter_mut().for_each(|v| *v = *v / sum);
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Starting point for restart `k`: uniform, then one start concentrated on
/// each edge, then random interior points.
fn start_point<T: Real>(g: &Hypergraph, k: usize, seed: u64) -> Vec<T> {
    let n = g.n() as usize;
    let m = g.edge_count();
    if k == 0 {
        return vec![T::one() / T::from_usize(n).unwrap(); n];
    }
    if m > 0 && k <= m.min(64) {
        // Mass on one edge, a whisper elsewhere to keep gradients alive.
        let edge = g.edges().nth(k - 1).expect("edge index in range");
        let whisper = T::from_config(1e-4) / T::from_usize(n).unwrap();
        let mut x = vec![whisper; n];
        let share = (T::one() - whisper * T::from_usize(n).unwrap())
            / T::from_usize(edge.len()).unwrap();
        for &v in edge {
            x[(v - 1) as usize] += share;
        }
        return x;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ splitmix64(k as u64 + 1));
    let mut x: Vec<T> = (0..n)
        .map(|_| {
            let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
            T::from_config(-u.ln())
        })
        .collect();
    let sum: T = x.iter().copied().sum();
    x.iter_mut().for_each(|v| *v = *v / sum);
    x
}

/// Projected-gradient ascent with a backtracking (Armijo) line search.
fn ascend<T: Real>(g: &Hypergraph, x: &mut Vec<T>, max_iters: usize) {
    let c = T::from_config(1e-4);
    let stop = T::from_config(1e-11).max(T::epsilon() * T::from_config(8.0));
    let mut eta = T::one();
    let mut p = poly_eval(g, x);
    let mut flat_steps = 0u32;
    for _ in 0..max_iters {
        let grad = poly_grad(g, x);
        // Stationarity check: the projected full-gradient step collapses to
        // the current point exactly at first-order optima.
        let mut probe: Vec<T> = x.iter().zip(&grad).map(|(&a, &b)| a + b).collect();
        project_simplex(&mut probe);
        let drift = probe
            .iter()
            .zip(x.iter())
            .map(|(&a, &b)| (a - b).abs())
            .fold(T::zero(), T::max);
        if drift <= stop {
            break;
        }
        let mut advanced = false;
        while eta > T::from_config(1e-18) {
            let mut y: Vec<T> = x.iter().zip(&grad).map(|(&a, &b)| a + eta * b).collect();
            project_simplex(&mut y);
            let gain_bound: T = grad
                .iter()
                .zip(y.iter().zip(x.iter()))
                .map(|(&gi, (&yi, &xi))| gi * (yi - xi))
                .sum();
            let py = poly_eval(g, &y);
            if gain_bound > T::zero() && py >= p + c * gain_bound {
                if py - p <= T::epsilon() * p.abs().max(T::one()) {
                    flat_steps += 1;
                } else {
                    flat_steps = 0;
                }
                *x = y;
                p = py;
                eta = (eta * T::from_config(1.5)).min(T::from_config(1e6));
                advanced = true;
                break;
            }
            eta *= T::from_config(0.5);
        }
        if !advanced || flat_steps > 16 {
            break;
        }
    }
}

/// One growth-transform sweep: `x_i <- x_i * d_i / (r p)`. Never decreases
/// the objective on the simplex.
fn growth_step<T: Real>(g: &Hypergraph, x: &mut [T]) -> bool {
    let p = poly_eval(g, x);
    if p <= T::zero() {
        return false;
    }
    let grad = poly_grad(g, x);
    let denom = T::from_u32(g.r()).unwrap() * p;
    for (xi, gi) in x.iter_mut().zip(&grad) {
        *xi = *xi * *gi / denom;
    }
    // The update sums to exactly one in exact arithmetic (Euler's identity
    // for homogeneous polynomials); renormalize away rounding.
    let sum: T = x.iter().copied().sum();
    if sum > T::zero() {
        x.iter_mut().for_each(|v| *v = *v / sum);
    }
    true
}

/// Solves the square system `A y = b` by Gaussian elimination with partial
/// pivoting. Returns `None` on (numerical) singularity.
fn solve_dense<T: Real>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = b.len();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[pivot_row][col].abs() < T::from_config(1e-300).max(T::min_positive_value()) {
            return None;
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor == T::zero() {
                continue;
            }
            for k in col..n {
                let update = factor * a[col][k];
                a[row][k] -= update;
            }
            let update = factor * b[col];
            b[row] -= update;
        }
    }
    let mut y = vec![T::zero(); n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row][k] * y[k];
        }
        y[row] = acc / a[row][row];
    }
    Some(y)
}

/// Second partial derivatives restricted to `support` (1-based vertices).
/// The diagonal is zero because the polynomial is multilinear.
fn hessian_on_support<T: Real>(g: &Hypergraph, x: &[T], support: &[u32]) -> Vec<Vec<T>> {
    let s = support.len();
    let mut index_of = vec![usize::MAX; g.n() as usize + 1];
    for (k, &v) in support.iter().enumerate() {
        index_of[v as usize] = k;
    }
    let mut h = vec![vec![T::zero(); s]; s];
    for edge in g.edges() {
        for (pa, &a) in edge.iter().enumerate() {
            let ia = index_of[a as usize];
            if ia == usize::MAX {
                continue;
            }
            for &b in &edge[pa + 1..] {
                let ib = index_of[b as usize];
                if ib == usize::MAX {
                    continue;
                }
                let mut prod = T::one();
                for &v in edge {
                    if v != a && v != b {
                        prod *= x[(v - 1) as usize];
                    }
                }
                h[ia][ib] += prod;
                h[ib][ia] += prod;
            }
        }
    }
    h
}

/// Newton polish of the stationarity system on the current support:
/// unknowns are the support weights and the multiplier, equations are
/// `d_i p = mu` on the support and unit sum. Falls back to growth-transform
/// sweeps when the linear algebra goes singular or steps stop helping.
fn polish<T: Real>(g: &Hypergraph, x: &mut Vec<T>) {
    let target = T::from_config(1e-13).max(T::epsilon() * T::from_config(8.0));
    // Growth sweeps first: they are globally safe and bring the point close
    // enough for Newton to take over.
    for _ in 0..5_000 {
        if kkt_residual(g, x) <= T::from_config(1e-7) {
            break;
        }
        if !growth_step(g, x) {
            return;
        }
    }
    for _ in 0..60 {
        let report = kkt_report(g, x);
        if report.residual <= target {
            break;
        }
        let support = Weights { values: x.clone() }.support();
        if support.is_empty() {
            return;
        }
        let s = support.len();
        let grad = poly_grad(g, x);
        let p = poly_eval(g, x);
        let mu = T::from_u32(g.r()).unwrap() * p;
        let h = hessian_on_support(g, x, &support);
        // Assemble [H, -1; 1^T, 0] and the negated residual.
        let mut a = vec![vec![T::zero(); s + 1]; s + 1];
        let mut b = vec![T::zero(); s + 1];
        for i in 0..s {
            for j in 0..s {
                a[i][j] = h[i][j];
            }
            a[i][s] = -T::one();
            a[s][i] = T::one();
            b[i] = mu - grad[(support[i] - 1) as usize];
        }
        let sum_support: T = support.iter().map(|&v| x[(v - 1) as usize]).sum();
        b[s] = T::one() - sum_support;
        let step = match solve_dense(a, b) {
            Some(step) => step,
            None => {
                if !growth_step(g, x) {
                    return;
                }
                continue;
            }
        };
        let mut t = T::one();
        let mut improved = false;
        for _ in 0..30 {
            let mut y = x.clone();
            for (k, &v) in support.iter().enumerate() {
                y[(v - 1) as usize] = (y[(v - 1) as usize] + t * step[k]).max(T::zero());
            }
            let sum: T = y.iter().copied().sum();
            if sum > T::zero() {
                y.iter_mut().for_each(|v| *v = *v / sum);
            }
            let new_res = kkt_report(g, &y).residual;
            if new_res < report.residual {
                *x = y;
                improved = true;
                break;
            }
            t *= T::from_config(0.5);
        }
        if !improved {
            // Newton stalled; one growth sweep, then another attempt.
            if !growth_step(g, x) {
                return;
            }
        }
    }
}

/// Zeroes coordinates below the support threshold and renormalizes.
fn prune<T: Real>(x: &mut [T]) {
    let eps = T::from_config(SUPPORT_EPS);
    for v in x.iter_mut() {
        if *v <= eps {
            *v = T::zero();
        }
    }
    let sum: T = x.iter().copied().sum();
    if sum > T::zero() {
        x.iter_mut().for_each(|v| *v = *v / sum);
    }
}

/// A maximum can sit on a flat ridge: coordinates outside the true optimal
/// support carry mass, yet their reduced costs vanish, which makes the Newton
/// system singular and leaves the residual stuck. This pass tries dropping one
/// support coordinate at a time, re-optimizes inside the reduced subgraph so
/// mass cannot leak back, and accepts the reduction whenever it costs no value
/// and does not worsen stationarity. Each acceptance shrinks the support, so
/// the loop ends after at most n rounds.
fn sharpen_support<T: Real>(g: &Hypergraph, x: &mut Vec<T>) {
    const SHARPEN_MAX_N: usize = 64;
    if g.n() as usize > SHARPEN_MAX_N {
        return;
    }
    let guard = T::from_config(1e-12);
    loop {
        let value = poly_eval(g, x);
        let residual = kkt_report(g, x).residual;
        let support = Weights { values: x.clone() }.support();
        if support.len() <= 1 {
            return;
        }
        let mut accepted = false;
        for &drop in &support {
            let kept: Vec<u32> = support.iter().copied().filter(|&v| v != drop).collect();
            let sub = match g.restrict(&kept) {
                Ok(sub) => sub,
                Err(_) => continue,
            };
            if sub.edge_count() == 0 {
                continue;
            }
            let mut y: Vec<T> = kept.iter().map(|&v| x[(v - 1) as usize]).collect();
            let sum: T = y.iter().copied().sum();
            if sum <= T::zero() {
                continue;
            }
            y.iter_mut().for_each(|w| *w = *w / sum);
            ascend(&sub, &mut y, 1_000);
            polish(&sub, &mut y);
            prune(&mut y);
            polish(&sub, &mut y);
            let mut z = vec![T::zero(); g.n() as usize];
            for (k, &v) in kept.iter().enumerate() {
                z[(v - 1) as usize] = y[k];
            }
            let report = kkt_report(g, &z);
            if poly_eval(g, &z) >= value - guard && report.residual <= residual {
                *x = z;
                accepted = true;
                break;
            }
        }
        if !accepted {
            return;
        }
    }
}

fn run_single_start<T: Real>(g: &Hypergraph, k: usize, opts: &Options) -> (T, Vec<T>) {
    let mut x = start_point::<T>(g, k, opts.seed);
    ascend(g, &mut x, opts.max_iters);
    prune(&mut x);
    ascend(g, &mut x, 1_000);
    polish(g, &mut x);
    prune(&mut x);
    polish(g, &mut x);
    (poly_eval(g, &x), x)
}

fn better<T: Real>(a: &(T, Vec<T>, usize), b: &(T, Vec<T>, usize)) -> bool {
    // Larger value wins; exact ties go to the smaller start index so the
    // reported point does not depend on scheduling.
    a.0 > b.0 || (a.0 == b.0 && a.2 < b.2)
}

/// Maximizes the edge-product polynomial. Deterministic for fixed options;
/// parallel and sequential runs return bit-identical results.
pub fn maximize<T: Real>(g: &Hypergraph, opts: &Options) -> Maximum<T> {
    let n = g.n() as usize;
    assert!(n > 0, "maximization needs a nonempty ground set");
    if g.edge_count() == 0 {
        let weights = Weights::uniform(n);
        return Maximum {
            value: T::zero(),
            kkt_residual: T::zero(),
            boundary_excess: T::zero(),
            certified: true,
            restarts_used: 0,
            exhaustive: false,
            weights,
        };
    }
    let restarts = opts.restarts.max(1);
    let run = |k: usize| {
        let (v, x) = run_single_start::<T>(g, k, opts);
        (v, x, k)
    };
    let mut best = if opts.parallel {
        (0..restarts)
            .into_par_iter()
            .map(run)
            .reduce_with(|a, b| if better(&b, &a) { b } else { a })
            .expect("at least one restart")
    } else {
        (0..restarts)
            .map(run)
            .reduce(|a, b| if better(&b, &a) { b } else { a })
            .expect("at least one restart")
    };
    let mut restarts_used = restarts;
    let exhaustive = opts.exhaustive_support && g.n() <= EXHAUSTIVE_MAX_N;
    if exhaustive {
        let (value, x, used) = exhaustive_sweep(g, opts);
        restarts_used += used;
        let candidate = (value, x, restarts);
        if better(&candidate, &best) {
            best = candidate;
        }
    }
    let (value, mut x, _) = best;
    let mut report = kkt_report(g, &x);
    let within =
        |r: &KktReport<T>| r.residual.to_report() <= opts.kkt_tol && r.boundary_excess.to_report() <= opts.boundary_tol;
    let mut value = value;
    if !within(&report) {
        sharpen_support(g, &mut x);
        value = poly_eval(g, &x);
        report = kkt_report(g, &x);
    }
    let certified = within(&report);
    Maximum {
        value,
        weights: Weights::new(x.clone()).unwrap_or(Weights { values: x }),
        kkt_residual: report.residual,
        boundary_excess: report.boundary_excess,
        certified,
        restarts_used,
        exhaustive,
    }
}

/// For every nonempty vertex subset, optimizes within that support and
/// keeps the best point, mapped back to the full ground set.
fn exhaustive_sweep<T: Real>(g: &Hypergraph, opts: &Options) -> (T, Vec<T>, usize) {
    let n = g.n() as usize;
    let mut best_value = T::neg_infinity();
    let mut best_x = vec![T::zero(); n];
    let mut used = 0usize;
    for mask in 1u32..(1u32 << n) {
        let vertices: Vec<u32> = (0..n as u32).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
        let sub = g.restrict(&vertices).expect("support vertices are valid");
        if sub.edge_count() == 0 {
            continue;
        }
        for k in 0..3usize {
            used += 1;
            let mut x = if k == 0 {
                vec![T::one() / T::from_usize(vertices.len()).unwrap(); vertices.len()]
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(
                    opts.seed ^ splitmix64(mask as u64) ^ splitmix64(k as u64) ^ 0xABCD,
                );
                let mut x: Vec<T> = (0..vertices.len())
                    .map(|_| {
                        let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
                        T::from_config(-u.ln())
                    })
                    .collect();
                let sum: T = x.iter().copied().sum();
                x.iter_mut().for_each(|v| *v = *v / sum);
                x
            };
            ascend(&sub, &mut x, 20_000);
            polish(&sub, &mut x);
            let value = poly_eval(&sub, &x);
            if value > best_value {
                best_value = value;
                best_x = vec![T::zero(); n];
                for (k, &v) in vertices.iter().enumerate() {
                    best_x[(v - 1) as usize] = x[k];
                }
            }
        }
    }
    let sum: T = best_x.iter().copied().sum();
    if sum > T::zero() {
        best_x.iter_mut().for_each(|v| *v = *v / sum);
    }
    (best_value.max(T::zero()), best_x, used)
}

/// Averages the weights within each class of pairwise-swappable vertices
/// (transpositions that are automorphisms). Never decreases the objective:
/// averaging one swappable pair cannot hurt, and repeated pairwise
/// averaging converges to the class means.
pub fn symmetric_average<T: Real>(g: &Hypergraph, w: &Weights<T>) -> Weights<T> {
    assert_eq!(w.len(), g.n() as usize);
    let orbits = crate::canon::transposition_orbits(g);
    let mut out = w.values.clone();
    for part in orbits.parts() {
        let total: T = part.iter().map(|&v| w.values[(v - 1) as usize]).sum();
        let mean = total / T::from_usize(part.len()).unwrap();
        for &v in part {
            out[(v - 1) as usize] = mean;
        }
    }
    Weights { values: out }
}

/// Whether vertex `i` dominates vertex `j`: replacing `j` by `i` maps every
/// edge through `j` avoiding `i` to an edge of the graph.
pub fn dominates(g: &Hypergraph, i: u32, j: u32) -> bool {
    assert!(i >= 1 && i <= g.n() && j >= 1 && j <= g.n() && i != j);
    for edge in g.edges() {
        if !edge.contains(&j) || edge.contains(&i) {
            continue;
        }
        let mut image: Vec<u32> = edge.iter().copied().filter(|&v| v != j).collect();
        image.push(i);
        image.sort_unstable();
        if !g.contains_edge(&image) {
            return false;
        }
    }
    true
}

/// Moves weight from dominated vertices onto their dominators, in the safe
/// cases where the objective provably cannot decrease: the move `j -> i`
/// (with `i < j` and `i` dominating `j`) is applied when no edge contains
/// both vertices, or when `i` currently carries no weight. Repeats until no
/// such move applies; terminates because each move strictly shrinks the
/// weighted support index sum.
pub fn dominate_reduce<T: Real>(g: &Hypergraph, w: &Weights<T>) -> Weights<T> {
    assert_eq!(w.len(), g.n() as usize);
    let mut x = w.values.clone();
    let n = g.n();
    loop {
        let mut moved = false;
        'outer: for j in 2..=n {
            if x[(j - 1) as usize] <= T::zero() {
                continue;
            }
            for i in 1..j {
                let safe = g.pair_degree(i, j) == 0 || x[(i - 1) as usize] == T::zero();
                if safe && dominates(g, i, j) {
                    let moved_mass = x[(j - 1) as usize];
                    x[(i - 1) as usize] += moved_mass;
                    x[(j - 1) as usize] = T::zero();
                    moved = true;
                    break 'outer;
                }
            }
        }
        if !moved {
            break;
        }
    }
    Weights { values: x }
}

/// Edge density approached by large blow-ups: `r! * max`.
pub fn blowup_density<T: Real>(r: u32, max_value: T) -> T {
    let mut factorial = T::one();
    for k in 2..=r {
        factorial *= T::from_u32(k).unwrap();
    }
    factorial * max_value
}

/// Outcome of the single-edge-deletion density probe.
#[derive(Debug, Clone)]
pub struct DensityReport<T: Real> {
    /// Whether every single-edge deletion strictly lowered the maximum.
    pub dense: bool,
    /// Smallest drop observed over all deletions.
    pub worst_gap: T,
    /// True when some drop fell inside the decision tolerance, so the
    /// verdict rests on values too close to call.
    pub ambiguous: bool,
}

/// Guard for the density probe: each deleted edge costs a full maximization.
pub const DENSITY_EDGE_GUARD: usize = 12;
/// Decision tolerance for the density probe.
pub const DENSITY_TOL: f64 = 1e-9;

/// Tests whether the graph is edge-critical for the maximization: deleting
/// any single edge must strictly decrease the maximum (deleting more edges
/// can only decrease it further, so single deletions decide the matter).
pub fn is_dense<T: Real>(g: &Hypergraph, opts: &Options) -> DensityReport<T> {
    assert!(
        g.edge_count() <= DENSITY_EDGE_GUARD,
        "density probe limited to {DENSITY_EDGE_GUARD} edges, got {}",
        g.edge_count()
    );
    let base = maximize::<T>(g, opts).value;
    let tol = T::from_config(DENSITY_TOL);
    let mut dense = true;
    let mut ambiguous = false;
    let mut worst_gap = T::infinity();
    let edges = g.edges_vec();
    for skip in 0..edges.len() {
        let rest: Vec<Vec<u32>> =
            edges.iter().enumerate().filter(|(k, _)| *k != skip).map(|(_, e)| e.clone()).collect();
        let sub = Hypergraph::new(g.n(), g.r(), rest).expect("edge subset is valid");
        let value = maximize(&sub, opts).value;
        let gap = base - value;
        worst_gap = worst_gap.min(gap);
        if gap <= tol {
            dense = false;
            if gap.abs() <= tol {
                ambiguous = true;
            }
        }
    }
    if edges.is_empty() {
        worst_gap = T::zero();
        dense = false;
    }
    DensityReport { dense, worst_gap, ambiguous }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    fn solve(g: &Hypergraph) -> Maximum<f64> {
        let opts = Options { restarts: 60, ..Options::default() };
        maximize(g, &opts)
    }

    #[test]
    fn weights_validation() {
        assert!(Weights::<f64>::new(vec![0.5, 0.5]).is_ok());
        assert!(matches!(Weights::<f64>::new(vec![]), Err(WeightError::Empty)));
        assert!(matches!(
            Weights::<f64>::new(vec![0.5, -0.5]),
            Err(WeightError::Negative { .. })
        ));
        assert!(matches!(
            Weights::<f64>::new(vec![0.5, 0.4]),
            Err(WeightError::BadSum { .. })
        ));
        let w = Weights::<f64>::normalized(vec![2.0, 6.0]).unwrap();
        assert_eq!(w.values(), &[0.25, 0.75]);
    }

    #[test]
    fn projection_matches_hand_cases() {
        let mut x = vec![0.0f64, 0.0];
        project_simplex(&mut x);
        assert!((x[0] - 0.5).abs() < 1e-15 && (x[1] - 0.5).abs() < 1e-15);
        let mut y = vec![2.0f64, 0.0];
        project_simplex(&mut y);
        assert_eq!(y, vec![1.0, 0.0]);
        let mut z = vec![0.8f64, 0.6, -0.2];
        project_simplex(&mut z);
        let sum: f64 = z.iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert!((z[0] - 0.6).abs() < 1e-12 && (z[1] - 0.4).abs() < 1e-12 && z[2] == 0.0);
    }

    #[test]
    fn eval_and_grad_match_finite_differences() {
        let g = families::fano();
        let x: Vec<f64> = vec![0.3, 0.2, 0.1, 0.15, 0.05, 0.1, 0.1];
        let grad = poly_grad(&g, &x);
        let h = 1e-6;
        for i in 0..x.len() {
            let mut xp = x.clone();
            xp[i] += h;
            let mut xm = x.clone();
            xm[i] -= h;
            let fd = (poly_eval(&g, &xp) - poly_eval(&g, &xm)) / (2.0 * h);
            assert!((fd - grad[i]).abs() < 1e-8, "coordinate {i}: {fd} vs {}", grad[i]);
        }
    }

    #[test]
    fn complete_five_reaches_two_twenty_fifths() {
        let m = solve(&Hypergraph::complete(5, 3));
        assert!((m.value - 0.08).abs() < 1e-10, "value {}", m.value);
        assert!(m.certified, "kkt {} boundary {}", m.kkt_residual, m.boundary_excess);
        for &w in m.weights.values() {
            assert!((w - 0.2).abs() < 1e-6);
        }
    }

    #[test]
    fn fano_reaches_one_twenty_seventh() {
        let m = solve(&families::fano());
        assert!((m.value - 1.0 / 27.0).abs() < 1e-10, "value {}", m.value);
        assert!(m.certified);
        assert_eq!(m.support().len(), 3, "optimum concentrates on one line");
    }

    #[test]
    fn one_edge_removed_matches_surd() {
        let g = families::build("k5_3_minus", None, None).unwrap().into_graph();
        let expected = (13.0 * 13f64.sqrt() - 35.0) / 162.0;
        let m = solve(&g);
        assert!((m.value - expected).abs() < 1e-10, "value {} vs {expected}", m.value);
        assert!(m.certified);
    }

    #[test]
    fn star_matches_closed_form() {
        for n in [4u32, 5, 7, 9] {
            let g = families::build("star", Some(n), None).unwrap().into_graph();
            let expected = 2.0 * (n as f64 - 2.0) / (27.0 * (n as f64 - 1.0));
            let m = solve(&g);
            assert!((m.value - expected).abs() < 1e-10, "n = {n}: {} vs {expected}", m.value);
            assert!(m.certified, "n = {n}");
        }
    }

    #[test]
    fn one_three_split_matches_surd() {
        let expected = (9.0 + 6f64.sqrt()) / 225.0;
        let m = solve(&families::one_three_split());
        assert!((m.value - expected).abs() < 1e-10, "value {} vs {expected}", m.value);
        assert!(m.certified);
    }

    #[test]
    fn three_part_cyclic_attains_its_bound() {
        let bound = 7.0 / 108.0;
        let m = solve(&families::three_part_cyclic());
        assert!(m.value <= bound + 1e-9, "value {} above bound {bound}", m.value);
        assert!((m.value - bound).abs() < 1e-10, "uniform weights attain the bound");
    }

    #[test]
    fn triangle_generated_values() {
        // From four vertices on, the family contains a complete 4-graph and
        // the maximum sticks at 1/16; on three vertices it degenerates to a
        // single edge worth 1/27.
        for n in [4u32, 5, 6] {
            let g = families::build("gen_k3", Some(n), None).unwrap().into_graph();
            let m = solve(&g);
            assert!((m.value - 1.0 / 16.0).abs() < 1e-10, "n = {n}: {}", m.value);
        }
        let g3 = families::build("gen_k3", Some(3), None).unwrap().into_graph();
        assert_eq!(g3.edge_count(), 1);
        let m3 = solve(&g3);
        assert!((m3.value - 1.0 / 27.0).abs() < 1e-10, "n = 3: {}", m3.value);
    }

    #[test]
    fn blow_up_preserves_the_maximum() {
        let base = Hypergraph::complete(5, 3);
        for t in [2u32, 3] {
            let blown = base.blow_up(t).unwrap();
            let m = solve(&blown);
            assert!((m.value - 0.08).abs() < 1e-9, "t = {t}: {}", m.value);
        }
        let fano2 = families::fano().blow_up(2).unwrap();
        let m = solve(&fano2);
        assert!((m.value - 1.0 / 27.0).abs() < 1e-9, "doubled plane: {}", m.value);
    }

    #[test]
    fn five_part_construction_keeps_value_at_all_sizes() {
        for n in [5u32, 6, 7, 9, 12] {
            let g = families::build_turan_t53(n);
            let m = solve(&g);
            assert!((m.value - 0.08).abs() < 1e-9, "n = {n}: {}", m.value);
        }
    }

    #[test]
    fn empty_graph_maximum_is_zero() {
        let g = Hypergraph::empty(4, 3);
        let m = solve(&g);
        assert_eq!(m.value, 0.0);
        assert!(m.certified);
    }

    #[test]
    fn exhaustive_mode_agrees_on_small_graphs() {
        let g = families::build("k5_3_minus", None, None).unwrap().into_graph();
        let opts = Options { restarts: 20, exhaustive_support: true, ..Options::default() };
        let m: Maximum<f64> = maximize(&g, &opts);
        assert!(m.exhaustive);
        let expected = (13.0 * 13f64.sqrt() - 35.0) / 162.0;
        assert!((m.value - expected).abs() < 1e-10);
    }

    #[test]
    fn parallel_and_sequential_agree_bitwise() {
        let g = families::one_three_split();
        let base = Options { restarts: 24, seed: 7, ..Options::default() };
        let seq = Options { parallel: false, ..base.clone() };
        let a: Maximum<f64> = maximize(&g, &base);
        let b: Maximum<f64> = maximize(&g, &seq);
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        for (x, y) in a.weights.values().iter().zip(b.weights.values()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn exact_rational_certificates() {
        let fifth = ratio(1, 5);
        let x = vec![fifth; 5];
        assert!(is_exact_simplex_point(&x));
        assert_eq!(poly_eval_exact(&Hypergraph::complete(5, 3), &x), ratio(2, 25));

        let third = ratio(1, 3);
        let mut y = vec![BigRational::zero(); 7];
        y[0] = third.clone();
        y[1] = third.clone();
        y[2] = third;
        assert_eq!(poly_eval_exact(&families::fano(), &y), ratio(1, 27));
    }

    #[test]
    fn symmetric_average_never_decreases() {
        let g = Hypergraph::complete(5, 3);
        let w = Weights::new(vec![0.4, 0.3, 0.1, 0.1, 0.1]).unwrap();
        let avg = symmetric_average(&g, &w);
        assert!(poly_eval(&g, avg.values()) >= poly_eval(&g, w.values()));
        for &v in avg.values() {
            assert!((v - 0.2).abs() < 1e-15);
        }
    }

    #[test]
    fn domination_in_generated_family() {
        let g = families::build("gen_f4", Some(7), None).unwrap().into_graph();
        // Vertices past the generator base are interchangeable tails; the
        // first of them dominates the later ones.
        assert!(dominates(&g, 5, 6));
        assert!(dominates(&g, 6, 5));
        assert!(!dominates(&g, 5, 1));
        let w = Weights::<f64>::uniform(7);
        let reduced = dominate_reduce(&g, &w);
        assert!(
            poly_eval(&g, reduced.values()) >= poly_eval(&g, w.values()) - 1e-15,
            "reduction must not decrease the objective"
        );
        let support = reduced.support();
        assert!(support.len() < 7, "some tail vertex must have been emptied");
    }

    #[test]
    fn density_probe_on_single_edge() {
        let g = Hypergraph::new(3, 3, vec![vec![1, 2, 3]]).unwrap();
        let opts = Options { restarts: 8, ..Options::default() };
        let report: DensityReport<f64> = is_dense(&g, &opts);
        assert!(report.dense);
        assert!(!report.ambiguous);
        assert!((report.worst_gap - 1.0 / 27.0).abs() < 1e-8);
    }

    #[test]
    fn kkt_residual_zero_at_uniform_on_complete() {
        let g = Hypergraph::complete(5, 3);
        let x = vec![0.2f64; 5];
        assert!(kkt_residual(&g, &x) < 1e-15);
    }

    #[test]
    fn f32_width_also_optimizes() {
        let g = Hypergraph::complete(5, 3);
        let opts = Options { restarts: 10, ..Options::default() };
        let m: Maximum<f32> = maximize(&g, &opts);
        assert!((m.value - 0.08).abs() < 1e-5, "value {}", m.value);
    }
}
