//! Exact t-SNE: perplexity-calibrated input affinities, a Student-t or
//! Gaussian map kernel, and momentum gradient descent on the KL
//! divergence between the two.

use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{squared_distance, Matrix};
use crate::seeded_rng;

/// Floor applied to every off-diagonal joint affinity.
pub const AFFINITY_FLOOR: f64 = 1e-12;
/// Calibration stops once `|log₂ achieved − log₂ target|` drops below this.
pub const PERPLEXITY_TOLERANCE: f64 = 1e-5;
pub const MAX_BISECTIONS: usize = 50;
const MAX_EXPANSIONS: usize = 64;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kernel {
    /// `(1 + ‖yᵢ − yⱼ‖²)⁻¹`
    #[default]
    StudentT,
    /// `exp(−‖yᵢ − yⱼ‖²)`
    Gaussian,
}

impl std::str::FromStr for Kernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "student_t" => Ok(Kernel::StudentT),
            "gaussian" => Ok(Kernel::Gaussian),
            other => Err(Error::invalid(format!("unknown kernel `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TsneConfig {
    pub perplexity: f64,
    pub iterations: usize,
    pub learning_rate: f64,
    pub initial_momentum: f64,
    pub final_momentum: f64,
    /// First iteration that uses `final_momentum`.
    pub momentum_switch: usize,
    pub kernel: Kernel,
    pub exaggeration: f64,
    pub exaggeration_iters: usize,
    /// Plain descent with no early exaggeration.
    pub strict: bool,
    pub seed: u64,
}

impl Default for TsneConfig {
    fn default() -> Self {
        Self {
            perplexity: 30.0,
            iterations: 1000,
            learning_rate: 100.0,
            initial_momentum: 0.5,
            final_momentum: 0.8,
            momentum_switch: 250,
            kernel: Kernel::StudentT,
            exaggeration: 4.0,
            exaggeration_iters: 50,
            strict: false,
            seed: 0,
        }
    }
}

impl TsneConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.perplexity > 1.0) {
            return Err(Error::Config("perplexity must exceed 1".into()));
        }
        if self.iterations == 0 {
            return Err(Error::Config("iterations must be at least 1".into()));
        }
        if !(self.learning_rate > 0.0) {
            return Err(Error::Config("learning_rate must be positive".into()));
        }
        if !(self.exaggeration > 0.0) {
            return Err(Error::Config("exaggeration must be positive".into()));
        }
        Ok(())
    }

    pub fn momentum(&self, iteration: usize) -> f64 {
        if iteration < self.momentum_switch {
            self.initial_momentum
        } else {
            self.final_momentum
        }
    }

    /// Iterations run with exaggerated P.
    pub fn exaggerated_iters(&self) -> usize {
        if self.strict {
            0
        } else {
            self.exaggeration_iters.min(self.iterations)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TsneLayout {
    /// `n × 2` map coordinates.
    pub y: Matrix,
    pub kl: f64,
    /// KL at each iteration after exaggeration ends, evaluated before
    /// that iteration's update.
    pub kl_trace: Vec<f64>,
}

/// What `run` embeds.
#[derive(Debug, Clone, Copy)]
pub enum TsneInput<'a> {
    Features(&'a Matrix),
    /// Symmetric `n × n` squared distances; the diagonal is ignored.
    SquaredDistances(&'a Matrix),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    pub sigma: f64,
    pub perplexity: f64,
}

pub fn pairwise_squared_distances(x: &Matrix) -> Matrix {
    let n = x.rows();
    let mut d = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = squared_distance(x.row(i), x.row(j));
            d.set(i, j, v);
            d.set(j, i, v);
        }
    }
    d
}

/// Gaussian weights `exp(−β(dⱼ − d_min))` over `j ≠ skip`, normalized, and
/// the entropy of the result in bits.
fn gaussian_row(sq: &[f64], skip: usize, beta: f64, out: &mut [f64]) -> f64 {
    let d_min = sq
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != skip)
        .map(|(_, &d)| d)
        .fold(f64::INFINITY, f64::min);
    let mut z = 0.0;
    let mut weighted = 0.0;
    for (j, (&d, o)) in sq.iter().zip(out.iter_mut()).enumerate() {
        if j == skip {
            *o = 0.0;
            continue;
        }
        let e = beta * (d - d_min);
        let w = (-e).exp();
        *o = w;
        z += w;
        weighted += w * e;
    }
    out.iter_mut().for_each(|p| *p /= z);
    (z.ln() + weighted / z) / std::f64::consts::LN_2
}

fn sigma_to_beta(sigma: f64) -> f64 {
    1.0 / (2.0 * sigma * sigma)
}

fn beta_to_sigma(beta: f64) -> f64 {
    (1.0 / (2.0 * beta)).sqrt()
}

/// `p_{j|i} ∝ exp(−d²ᵢⱼ / 2σ²)` over `j ≠ i`, with `p_{i|i} = 0`.
pub fn conditional_affinities(sq_row: &[f64], i: usize, sigma: f64) -> Result<Vec<f64>> {
    if !(sigma > 0.0) {
        return Err(Error::invalid(format!("sigma must be positive, got {sigma}")));
    }
    if sq_row.len() < 2 || i >= sq_row.len() {
        return Err(Error::invalid("affinity row needs a neighbor and a valid self index"));
    }
    let mut out = vec![0.0; sq_row.len()];
    gaussian_row(sq_row, i, sigma_to_beta(sigma), &mut out);
    Ok(out)
}

/// Finds σᵢ whose conditional row has the requested perplexity.
///
/// The precision `β = 1/2σ²` starts at the reciprocal mean of the nonzero
/// distances, doubles or halves until the target entropy is bracketed, then
/// bisects geometrically. Searching in log β makes σ exactly equivariant
/// under power-of-two rescaling of the distances. An unreachable target
/// yields the best σ found.
pub fn calibrate_sigma(sq_row: &[f64], i: usize, perplexity: f64) -> Result<Calibration> {
    if sq_row.len() < 2 || i >= sq_row.len() {
        return Err(Error::invalid("affinity row needs a neighbor and a valid self index"));
    }
    if !(perplexity > 0.0) {
        return Err(Error::invalid("perplexity must be positive"));
    }
    if sq_row.iter().enumerate().any(|(j, d)| j != i && !(d.is_finite() && *d >= 0.0)) {
        return Err(Error::invalid("squared distances must be finite and non-negative"));
    }
    let target = perplexity.log2();
    let mut buf = vec![0.0; sq_row.len()];
    let (count, sum) = sq_row
        .iter()
        .enumerate()
        .filter(|&(j, &d)| j != i && d > 0.0)
        .fold((0usize, 0.0), |(c, s), (_, &d)| (c + 1, s + d));
    if count == 0 {
        // every neighbor coincides with the point: P is uniform for any σ
        let h = gaussian_row(sq_row, i, 1.0, &mut buf);
        return Ok(Calibration {
            sigma: 1.0,
            perplexity: h.exp2(),
        });
    }

    let mut best = (f64::INFINITY, 0.0, 0.0);
    let mut eval = |beta: f64, best: &mut (f64, f64, f64)| {
        let h = gaussian_row(sq_row, i, beta, &mut buf);
        let gap = (h - target).abs();
        if gap < best.0 {
            *best = (gap, beta, h);
        }
        h
    };
    let finish = |best: (f64, f64, f64)| Calibration {
        sigma: beta_to_sigma(best.1),
        perplexity: best.2.exp2(),
    };

    // entropy falls as β grows
    let beta0 = count as f64 / sum;
    let h0 = eval(beta0, &mut best);
    if best.0 < PERPLEXITY_TOLERANCE {
        return Ok(finish(best));
    }
    let (mut lo, mut hi) = (beta0, beta0);
    let mut bracketed = false;
    for _ in 0..MAX_EXPANSIONS {
        if h0 > target {
            lo = hi;
            hi *= 2.0;
            if eval(hi, &mut best) <= target {
                bracketed = true;
                break;
            }
        } else {
            hi = lo;
            lo *= 0.5;
            if eval(lo, &mut best) >= target {
                bracketed = true;
                break;
            }
        }
        if best.0 < PERPLEXITY_TOLERANCE {
            return Ok(finish(best));
        }
    }
    if bracketed {
        for _ in 0..MAX_BISECTIONS {
            if best.0 < PERPLEXITY_TOLERANCE {
                break;
            }
            let mid = (lo * hi).sqrt();
            if eval(mid, &mut best) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    Ok(finish(best))
}

/// `pᵢⱼ = (p_{j|i} + p_{i|j}) / 2n`, floored and renormalized to sum to 1.
pub fn symmetrize(conditional: &Matrix) -> Result<Matrix> {
    let n = conditional.rows();
    if conditional.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: conditional.cols(),
        });
    }
    let mut p = Matrix::zeros(n, n);
    let denom = 2.0 * n as f64;
    for i in 0..n {
        for j in i + 1..n {
            let v = ((conditional.get(i, j) + conditional.get(j, i)) / denom).max(AFFINITY_FLOOR);
            p.set(i, j, v);
            p.set(j, i, v);
        }
    }
    normalize_joint(&mut p);
    Ok(p)
}

fn normalize_joint(m: &mut Matrix) {
    let total = m.sum();
    m.as_mut_slice().iter_mut().for_each(|v| *v /= total);
}

/// Symmetric input affinities for an `n × n` squared-distance matrix.
pub fn joint_probabilities(sq: &Matrix, perplexity: f64) -> Result<Matrix> {
    let n = sq.rows();
    let mut cond = Matrix::zeros(n, n);
    for i in 0..n {
        let cal = calibrate_sigma(sq.row(i), i, perplexity)?;
        gaussian_row(sq.row(i), i, sigma_to_beta(cal.sigma), cond.row_mut(i));
    }
    symmetrize(&cond)
}

fn kernel_weights(y: &Matrix, kernel: Kernel) -> Matrix {
    let n = y.rows();
    let mut w = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let d = squared_distance(y.row(i), y.row(j));
            let v = match kernel {
                Kernel::StudentT => 1.0 / (1.0 + d),
                Kernel::Gaussian => (-d).exp(),
            };
            w.set(i, j, v);
            w.set(j, i, v);
        }
    }
    w
}

fn q_from_weights(w: &Matrix) -> Matrix {
    let total = w.sum();
    let mut q = w.clone();
    let n = q.rows();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                q.set(i, j, (w.get(i, j) / total).max(AFFINITY_FLOOR));
            }
        }
    }
    normalize_joint(&mut q);
    q
}

/// Map affinities `qᵢⱼ`, normalized over all pairs, floored, zero diagonal.
pub fn low_dim_affinities(y: &Matrix, kernel: Kernel) -> Result<Matrix> {
    if y.rows() < 2 {
        return Err(Error::invalid("need at least two map points"));
    }
    Ok(q_from_weights(&kernel_weights(y, kernel)))
}

fn kl(p: &Matrix, q: &Matrix) -> f64 {
    p.as_slice()
        .iter()
        .zip(q.as_slice())
        .filter(|(&pv, _)| pv > 0.0)
        .map(|(&pv, &qv)| pv * (pv / qv).ln())
        .sum()
}

fn gradient_with(p: &Matrix, p_scale: f64, q: &Matrix, y: &Matrix, w: &Matrix, kernel: Kernel) -> Matrix {
    let (n, dims) = y.shape();
    let mut grad = Matrix::zeros(n, dims);
    for i in 0..n {
        let g = grad.row_mut(i);
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut coef = 4.0 * (p_scale * p.get(i, j) - q.get(i, j));
            if kernel == Kernel::StudentT {
                coef *= w.get(i, j);
            }
            for (gd, (a, b)) in g.iter_mut().zip(y.row(i).iter().zip(y.row(j))) {
                *gd += coef * (a - b);
            }
        }
    }
    grad
}

/// `KL(P‖Q)` and its gradient with respect to the map coordinates.
pub fn kl_and_gradient(p: &Matrix, q: &Matrix, y: &Matrix, kernel: Kernel) -> Result<(f64, Matrix)> {
    let n = y.rows();
    if p.shape() != (n, n) || q.shape() != (n, n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: p.rows(),
        });
    }
    let w = kernel_weights(y, kernel);
    Ok((kl(p, q), gradient_with(p, 1.0, q, y, &w, kernel)))
}

/// Embeds the input in two dimensions.
pub fn run(input: TsneInput<'_>, cfg: &TsneConfig) -> Result<TsneLayout> {
    cfg.validate()?;
    let sq = match input {
        TsneInput::Features(x) => {
            if x.as_slice().iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid("features must be finite"));
            }
            pairwise_squared_distances(x)
        }
        TsneInput::SquaredDistances(d) => {
            if d.rows() != d.cols() {
                return Err(Error::DimensionMismatch {
                    expected: d.rows(),
                    actual: d.cols(),
                });
            }
            d.clone()
        }
    };
    let n = sq.rows();
    if !(n as f64 > cfg.perplexity + 1.0) {
        return Err(Error::invalid(format!(
            "t-SNE needs more than perplexity + 1 = {} points, got {n}",
            cfg.perplexity + 1.0
        )));
    }
    let all_zero = (0..n).all(|i| (0..n).all(|j| i == j || sq.get(i, j) == 0.0));
    if all_zero {
        return Err(Error::Degenerate("all points are identical".into()));
    }

    let p = joint_probabilities(&sq, cfg.perplexity)?;

    let mut rng = seeded_rng(cfg.seed);
    let init = Normal::new(0.0, 1e-2).expect("valid normal");
    let mut y = Matrix::zeros(n, 2);
    y.as_mut_slice().iter_mut().for_each(|v| *v = init.sample(&mut rng));
    let mut y_prev = y.clone();

    let exaggerated = cfg.exaggerated_iters();
    let mut trace = Vec::with_capacity(cfg.iterations - exaggerated);
    for t in 0..cfg.iterations {
        let w = kernel_weights(&y, cfg.kernel);
        let q = q_from_weights(&w);
        let scale = if t < exaggerated { cfg.exaggeration } else { 1.0 };
        if t >= exaggerated {
            trace.push(kl(&p, &q));
        }
        let grad = gradient_with(&p, scale, &q, &y, &w, cfg.kernel);
        let alpha = cfg.momentum(t);
        let mut next = y.clone();
        for ((nv, (&cur, &prev)), g) in next
            .as_mut_slice()
            .iter_mut()
            .zip(y.as_slice().iter().zip(y_prev.as_slice()))
            .zip(grad.as_slice())
        {
            *nv = cur - cfg.learning_rate * g + alpha * (cur - prev);
        }
        y_prev = std::mem::replace(&mut y, next);
        if y.as_slice().iter().any(|v| !v.is_finite()) {
            return Err(Error::Degenerate(format!("layout diverged at iteration {t}")));
        }
    }
    let q = low_dim_affinities(&y, cfg.kernel)?;
    Ok(TsneLayout {
        kl: kl(&p, &q),
        y,
        kl_trace: trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng as _;

    fn random_matrix(rows: usize, cols: usize, seed: u64) -> Matrix {
        let mut rng = seeded_rng(seed);
        let normal = Normal::new(0.0, 1.0).unwrap();
        let data = (0..rows * cols).map(|_| normal.sample(&mut rng)).collect();
        Matrix::from_vec(rows, cols, data).unwrap()
    }

    #[test]
    fn conditional_row_hand_values() {
        let row = [0.0, 1.0, 4.0, 2.5];
        let sigma = 1.3;
        let got = conditional_affinities(&row, 0, sigma).unwrap();
        let raw: Vec<f64> = row[1..].iter().map(|d| (-d / (2.0 * sigma * sigma)).exp()).collect();
        let z: f64 = raw.iter().sum();
        assert_eq!(got[0], 0.0);
        for (g, r) in got[1..].iter().zip(&raw) {
            assert!((g - r / z).abs() < 1e-12);
        }
        assert!((got.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn equidistant_rows_are_uniform() {
        for sigma in [0.01, 1.0, 50.0] {
            let p = conditional_affinities(&[2.0, 0.0, 2.0], 1, sigma).unwrap();
            assert_eq!(p, vec![0.5, 0.0, 0.5]);
        }
        let cal = calibrate_sigma(&[0.0, 1.0, 1.0, 1.0, 1.0], 0, 2.0).unwrap();
        assert!((cal.perplexity - 4.0).abs() < 1e-9);
    }

    #[test]
    fn calibration_hits_target_on_random_rows() {
        let x = random_matrix(60, 5, 4);
        let sq = pairwise_squared_distances(&x);
        for perp in [5.0, 20.0] {
            for i in 0..60 {
                let cal = calibrate_sigma(sq.row(i), i, perp).unwrap();
                let p = conditional_affinities(sq.row(i), i, cal.sigma).unwrap();
                let h: f64 = -p.iter().filter(|&&v| v > 0.0).map(|v| v * v.log2()).sum::<f64>();
                assert!((h - perp.log2()).abs() < PERPLEXITY_TOLERANCE, "row {i}: {h}");
            }
        }
    }

    #[test]
    fn calibration_scales_with_distance() {
        let x = random_matrix(20, 3, 8);
        let sq = pairwise_squared_distances(&x);
        for i in 0..20 {
            let scaled: Vec<f64> = sq.row(i).iter().map(|d| d * 4.0).collect();
            let a = calibrate_sigma(sq.row(i), i, 6.0).unwrap().sigma;
            let b = calibrate_sigma(&scaled, i, 6.0).unwrap().sigma;
            assert_eq!(b, 2.0 * a);
        }
    }

    #[test]
    fn coincident_neighbors_do_not_fail() {
        let cal = calibrate_sigma(&[0.0, 0.0, 0.0], 0, 1.5).unwrap();
        assert!((cal.perplexity - 2.0).abs() < 1e-12);
    }

    #[test]
    fn symmetrize_three_points() {
        let c = Matrix::from_rows(&[
            vec![0.0, 0.7, 0.3],
            vec![0.4, 0.0, 0.6],
            vec![0.5, 0.5, 0.0],
        ])
        .unwrap();
        let p = symmetrize(&c).unwrap();
        let expect = [[0.0, 1.1 / 6.0, 0.8 / 6.0], [1.1 / 6.0, 0.0, 1.1 / 6.0], [0.8 / 6.0, 1.1 / 6.0, 0.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((p.get(i, j) - expect[i][j]).abs() < 1e-12);
                assert_eq!(p.get(i, j), p.get(j, i));
            }
        }
        assert!((p.sum() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn q_for_two_points_and_hand_table() {
        for kernel in [Kernel::StudentT, Kernel::Gaussian] {
            let q = low_dim_affinities(&Matrix::from_rows(&[vec![0.0, 0.0], vec![3.0, 1.0]]).unwrap(), kernel).unwrap();
            assert_eq!(q.get(0, 1), 0.5);
            assert_eq!(q.get(1, 0), 0.5);
        }
        let y = Matrix::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 2.0]]).unwrap();
        let q = low_dim_affinities(&y, Kernel::StudentT).unwrap();
        // d² = 1, 4, 5 → weights 1/2, 1/5, 1/6
        let z = 2.0 * (0.5 + 0.2 + 1.0 / 6.0);
        assert!((q.get(0, 1) - 0.5 / z).abs() < 1e-12);
        assert!((q.get(0, 2) - 0.2 / z).abs() < 1e-12);
        assert!((q.get(1, 2) - (1.0 / 6.0) / z).abs() < 1e-12);
        assert!((q.sum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kl_is_zero_at_p_equals_q() {
        let y = random_matrix(5, 2, 1);
        for kernel in [Kernel::StudentT, Kernel::Gaussian] {
            let q = low_dim_affinities(&y, kernel).unwrap();
            let (c, g) = kl_and_gradient(&q, &q, &y, kernel).unwrap();
            assert!(c.abs() < 1e-15);
            assert!(g.as_slice().iter().all(|v| v.abs() < 1e-15));
        }
    }

    fn kl_at(p: &Matrix, y: &Matrix, kernel: Kernel) -> f64 {
        kl(p, &low_dim_affinities(y, kernel).unwrap())
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let sq = pairwise_squared_distances(&random_matrix(6, 4, 2));
        let p = joint_probabilities(&sq, 3.0).unwrap();
        let y = random_matrix(6, 2, 3);
        for kernel in [Kernel::StudentT, Kernel::Gaussian] {
            let q = low_dim_affinities(&y, kernel).unwrap();
            let (c, g) = kl_and_gradient(&p, &q, &y, kernel).unwrap();
            assert!(c >= 0.0);
            let eps = 1e-5;
            for idx in 0..12 {
                let mut plus = y.clone();
                plus.as_mut_slice()[idx] += eps;
                let mut minus = y.clone();
                minus.as_mut_slice()[idx] -= eps;
                let fd = (kl_at(&p, &plus, kernel) - kl_at(&p, &minus, kernel)) / (2.0 * eps);
                let an = g.as_slice()[idx];
                let rel = (fd - an).abs() / fd.abs().max(an.abs()).max(1e-6);
                assert!(rel < 1e-4, "{kernel:?} {idx}: {fd} vs {an}");
            }
        }
    }

    #[test]
    fn descent_without_momentum_is_monotone() {
        let x = random_matrix(6, 3, 5);
        let cfg = TsneConfig {
            perplexity: 2.0,
            iterations: 100,
            learning_rate: 1.0,
            initial_momentum: 0.0,
            final_momentum: 0.0,
            strict: true,
            seed: 9,
            ..TsneConfig::default()
        };
        let layout = run(TsneInput::Features(&x), &cfg).unwrap();
        assert_eq!(layout.kl_trace.len(), 100);
        for w in layout.kl_trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-15, "{} -> {}", w[0], w[1]);
        }
        assert!(layout.kl <= layout.kl_trace[99]);
    }

    #[test]
    fn rejects_bad_inputs() {
        let cfg = TsneConfig {
            perplexity: 3.0,
            iterations: 5,
            ..TsneConfig::default()
        };
        let same = Matrix::from_rows(&vec![vec![1.0, 1.0]; 8]).unwrap();
        assert!(matches!(run(TsneInput::Features(&same), &cfg), Err(Error::Degenerate(_))));
        let few = random_matrix(4, 2, 0);
        assert!(run(TsneInput::Features(&few), &cfg).is_err());
        let bad = TsneConfig {
            perplexity: 1.0,
            ..cfg.clone()
        };
        assert!(run(TsneInput::Features(&random_matrix(10, 2, 0)), &bad).is_err());
    }

    #[test]
    fn distance_input_matches_feature_input() {
        let x = random_matrix(15, 4, 6);
        let cfg = TsneConfig {
            perplexity: 4.0,
            iterations: 60,
            ..TsneConfig::default()
        };
        let a = run(TsneInput::Features(&x), &cfg).unwrap();
        let sq = pairwise_squared_distances(&x);
        let b = run(TsneInput::SquaredDistances(&sq), &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.kl_trace.len(), 10);
    }

    #[test]
    fn sign_flips_give_identical_layouts() {
        let x = random_matrix(20, 3, 7);
        let mut flipped = x.clone();
        let mut rng = seeded_rng(1);
        let signs: Vec<f64> = (0..3).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
        for i in 0..20 {
            for (v, s) in flipped.row_mut(i).iter_mut().zip(&signs) {
                *v *= s;
            }
        }
        let cfg = TsneConfig {
            perplexity: 5.0,
            iterations: 200,
            ..TsneConfig::default()
        };
        assert_eq!(
            run(TsneInput::Features(&x), &cfg).unwrap(),
            run(TsneInput::Features(&flipped), &cfg).unwrap()
        );
    }
}
