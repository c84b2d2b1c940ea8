//! Belief arithmetic: Bayes posterior updates, one-step outcome
//! expansion, the k-uniform simplex grid, and same-support L1 projection.
//!
//! Everything here is generic over the probability scalar (see
//! [`crate::scalar::Scalar`]): the grid engine instantiates with `f64`,
//! the exact oracle with [`crate::Rational`].

use num_traits::{One, Zero};
use thiserror::Error;

use crate::model::Pomdp;
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum BeliefError {
    #[error("belief entries sum to {sum}, expected 1")]
    NotNormalized { sum: String },
    #[error("belief entry {index} is negative")]
    NegativeEntry { index: usize },
    #[error("belief has empty support")]
    EmptySupport,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("signal {signal} has probability zero under action {action}")]
    ZeroProbabilitySignal { action: usize, signal: usize },
}

/// A probability vector over the model's states.
#[derive(Debug, Clone, PartialEq)]
pub struct Belief<W> {
    probs: Vec<W>,
}

impl<W: Scalar> Belief<W> {
    /// Validating constructor: entries nonnegative, nonempty support, and
    /// total mass 1 (exactly in rational mode, within `1e-12` in float
    /// mode).
    pub fn new(probs: Vec<W>) -> Result<Self, BeliefError> {
        let mut sum = W::zero();
        let mut any_positive = false;
        for (i, p) in probs.iter().enumerate() {
            if *p < W::zero() {
                return Err(BeliefError::NegativeEntry { index: i });
            }
            if *p > W::zero() {
                any_positive = true;
            }
            sum = sum + p.clone();
        }
        if !any_positive {
            return Err(BeliefError::EmptySupport);
        }
        let ok = if W::EXACT {
            sum.is_one()
        } else {
            (sum.to_f64_lossy() - 1.0).abs() <= 1e-12
        };
        if !ok {
            return Err(BeliefError::NotNormalized {
                sum: format!("{sum}"),
            });
        }
        Ok(Belief { probs })
    }

    pub(crate) fn new_unchecked(probs: Vec<W>) -> Self {
        Belief { probs }
    }

    pub fn dirac(state: usize, dim: usize) -> Self {
        let mut probs = vec![W::zero(); dim];
        probs[state] = W::one();
        Belief { probs }
    }

    pub fn uniform(dim: usize) -> Self {
        let p = W::ratio_of(1, dim as u64);
        Belief {
            probs: vec![p; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[W] {
        &self.probs
    }

    pub fn get(&self, state: usize) -> &W {
        &self.probs[state]
    }

    /// Indices of the strictly positive entries, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.probs.len())
            .filter(|s| self.probs[*s] > W::zero())
            .collect()
    }

    /// Support as a bitmask; requires at most 64 states.
    pub fn support_mask(&self) -> u64 {
        assert!(self.probs.len() <= 64, "support masks need |S| <= 64");
        let mut mask = 0u64;
        for s in 0..self.probs.len() {
            if self.probs[s] > W::zero() {
                mask |= 1 << s;
            }
        }
        mask
    }

    /// The state carrying all mass, if the belief is a point mass.
    pub fn as_dirac(&self) -> Option<usize> {
        let mut found = None;
        for s in 0..self.probs.len() {
            if self.probs[s] > W::zero() {
                if found.is_some() {
                    return None;
                }
                found = Some(s);
            }
        }
        found
    }

    pub fn to_f64(&self) -> Belief<f64> {
        Belief {
            probs: self.probs.iter().map(|p| p.to_f64_lossy()).collect(),
        }
    }
}

/// `sum_s |b(s) - c(s)|`.
pub fn l1_distance<W: Scalar>(b: &Belief<W>, c: &Belief<W>) -> Result<W, BeliefError> {
    if b.dim() != c.dim() {
        return Err(BeliefError::DimensionMismatch {
            left: b.dim(),
            right: c.dim(),
        });
    }
    let mut acc = W::zero();
    for (x, y) in b.probs.iter().zip(c.probs.iter()) {
        acc = acc + (x.clone() - y.clone()).abs();
    }
    Ok(acc)
}

/// One positive-probability observation branch after playing an action.
#[derive(Debug, Clone)]
pub struct Outcome<W> {
    pub signal: usize,
    pub probability: W,
    pub posterior: Belief<W>,
}

/// The model kernel instantiated at a scalar type, with the belief
/// operators defined on it.
#[derive(Debug, Clone)]
pub struct KernelView<W> {
    n_states: usize,
    n_actions: usize,
    n_signals: usize,
    rows: Vec<Vec<(u32, u32, W)>>, // [s * n_actions + a] -> (next, signal, p)
}

impl<W: Scalar> KernelView<W> {
    pub fn new(model: &Pomdp) -> Self {
        let n_states = model.n_states();
        let n_actions = model.n_actions();
        let mut rows = Vec::with_capacity(n_states * n_actions);
        for s in 0..n_states {
            for a in 0..n_actions {
                rows.push(
                    model
                        .row(s, a)
                        .iter()
                        .map(|e| (e.next as u32, e.signal as u32, W::from_ratio(&e.prob)))
                        .collect(),
                );
            }
        }
        KernelView {
            n_states,
            n_actions,
            n_signals: model.n_signals(),
            rows,
        }
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn n_signals(&self) -> usize {
        self.n_signals
    }

    pub fn row(&self, state: usize, action: usize) -> &[(u32, u32, W)] {
        &self.rows[state * self.n_actions + action]
    }

    /// Bayes posterior after playing `action` and observing `signal`:
    /// entrywise `sum_s b(s) p(s' , z | s, a)`, normalized. The signal
    /// must have positive probability under `(b, action)`.
    pub fn update(
        &self,
        b: &Belief<W>,
        action: usize,
        signal: usize,
    ) -> Result<Belief<W>, BeliefError> {
        let mut acc = vec![W::zero(); self.n_states];
        let mut mass = W::zero();
        for s in 0..self.n_states {
            let bs = b.get(s);
            if !(*bs > W::zero()) {
                continue;
            }
            for (next, z, p) in self.row(s, action) {
                if *z as usize == signal {
                    let w = bs.clone() * p.clone();
                    mass = mass + w.clone();
                    acc[*next as usize] = acc[*next as usize].clone() + w;
                }
            }
        }
        if !(mass > W::zero()) {
            return Err(BeliefError::ZeroProbabilitySignal { action, signal });
        }
        for x in acc.iter_mut() {
            *x = x.clone() / mass.clone();
        }
        Ok(Belief::new_unchecked(acc))
    }

    /// All signals with positive probability under `(b, action)`, each
    /// with its probability and posterior. Probabilities sum to one
    /// (exactly in rational mode) and each posterior equals
    /// [`KernelView::update`] at that signal.
    pub fn one_step_outcomes(&self, b: &Belief<W>, action: usize) -> Vec<Outcome<W>> {
        let mut acc = vec![W::zero(); self.n_signals * self.n_states];
        for s in 0..self.n_states {
            let bs = b.get(s);
            if !(*bs > W::zero()) {
                continue;
            }
            for (next, z, p) in self.row(s, action) {
                let slot = *z as usize * self.n_states + *next as usize;
                acc[slot] = acc[slot].clone() + bs.clone() * p.clone();
            }
        }
        let mut out = Vec::new();
        for z in 0..self.n_signals {
            let slice = &acc[z * self.n_states..(z + 1) * self.n_states];
            let mut mass = W::zero();
            for x in slice {
                mass = mass + x.clone();
            }
            if !(mass > W::zero()) {
                continue;
            }
            let posterior = slice
                .iter()
                .map(|x| x.clone() / mass.clone())
                .collect::<Vec<_>>();
            out.push(Outcome {
                signal: z,
                probability: mass,
                posterior: Belief::new_unchecked(posterior),
            });
        }
        out
    }
}

#[derive(Debug, Error)]
pub enum GridError {
    #[error("grid resolution k must be at least 1")]
    ZeroResolution,
    #[error("grid dimension must be at least 1")]
    ZeroDimension,
    #[error("grid with k={k} over {dim} states has {points} points, beyond what can be materialized")]
    TooLarge { k: u64, dim: usize, points: String },
}

#[derive(Debug, Error)]
pub enum ProjectError {
    #[error(
        "no grid point with the requested support: k={k} < support size {support}; use a resolution of at least {support}"
    )]
    ResolutionTooCoarse { support: usize, k: u64 },
    #[error("belief dimension {belief} does not match grid dimension {grid}")]
    DimensionMismatch { belief: usize, grid: usize },
}

/// Hard cap on materialized grids; engine-level guards are stricter.
const MAX_GRID_POINTS: u128 = 1 << 32;

/// Number of points of the k-uniform grid over a `dim`-state simplex:
/// `C(k + dim - 1, dim - 1)`. Computed without overflow concerns.
pub fn grid_cardinality(k: u64, dim: usize) -> num_bigint::BigUint {
    use num_bigint::BigUint;
    let mut acc = BigUint::from(1u32);
    for i in 1..dim as u64 {
        acc = acc * BigUint::from(k + i) / BigUint::from(i);
    }
    acc
}

/// The k-uniform grid over the belief simplex: all probability vectors
/// whose entries are integer multiples of `1/k`. Points are indexed in
/// ascending lexicographic order of their integer coordinate vectors.
#[derive(Debug, Clone)]
pub struct Grid {
    k: u64,
    dim: usize,
    n_points: usize,
    // cum[m][x] = C(x + m, m) for m in 0..dim, x in 0..=k, flattened;
    // cum[m][x] counts compositions of at most x into m + 1 parts
    cum: Vec<u128>,
}

impl Grid {
    pub fn new(k: u64, dim: usize) -> Result<Self, GridError> {
        if k == 0 {
            return Err(GridError::ZeroResolution);
        }
        if dim == 0 {
            return Err(GridError::ZeroDimension);
        }
        let points = grid_cardinality(k, dim);
        if points > MAX_GRID_POINTS.into() {
            return Err(GridError::TooLarge {
                k,
                dim,
                points: points.to_string(),
            });
        }
        let n_points = u128::try_from(points.clone()).unwrap() as usize;
        let stride = (k + 1) as usize;
        let mut cum = vec![0u128; dim * stride];
        for x in 0..stride {
            cum[x] = 1; // m = 0: C(x, 0)
        }
        for m in 1..dim {
            for x in 0..stride {
                // C(x + m, m) = C(x - 1 + m, m) + C(x + m - 1, m - 1)
                let left = if x == 0 { 0 } else { cum[m * stride + x - 1] };
                cum[m * stride + x] = left + cum[(m - 1) * stride + x];
            }
        }
        Ok(Grid {
            k,
            dim,
            n_points,
            cum,
        })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        self.n_points == 0
    }

    fn cum(&self, m: usize, x: u64) -> u128 {
        self.cum[m * (self.k + 1) as usize + x as usize]
    }

    /// Lexicographic rank of a coordinate vector (entries summing to k).
    pub fn index_of(&self, coords: &[u64]) -> usize {
        debug_assert_eq!(coords.len(), self.dim);
        debug_assert_eq!(coords.iter().sum::<u64>(), self.k);
        let mut rank = 0u128;
        let mut remaining = self.k;
        for i in 0..self.dim - 1 {
            let m = self.dim - 1 - i;
            let v = coords[i];
            rank += self.cum(m, remaining) - self.cum(m, remaining - v);
            remaining -= v;
        }
        rank as usize
    }

    /// Inverse of [`Grid::index_of`].
    pub fn coords_of(&self, index: usize) -> Vec<u64> {
        debug_assert!(index < self.n_points);
        let mut rem = index as u128;
        let mut remaining = self.k;
        let mut coords = vec![0u64; self.dim];
        for i in 0..self.dim - 1 {
            let m = self.dim - 1 - i;
            // smallest v with rank contribution still <= rem
            let (mut lo, mut hi) = (0u64, remaining);
            while lo < hi {
                let mid = (lo + hi + 1) / 2;
                let before = self.cum(m, remaining) - self.cum(m, remaining - mid);
                if before <= rem {
                    lo = mid;
                } else {
                    hi = mid - 1;
                }
            }
            rem -= self.cum(m, remaining) - self.cum(m, remaining - lo);
            coords[i] = lo;
            remaining -= lo;
        }
        coords[self.dim - 1] = remaining;
        coords
    }

    /// Advance `coords` to the next vector in lexicographic order.
    /// Returns false (leaving `coords` unchanged) after the last one.
    pub fn advance(&self, coords: &mut [u64]) -> bool {
        let d = self.dim;
        let mut suffix = coords[d - 1];
        for j in (0..d - 1).rev() {
            if suffix > 0 {
                coords[j] += 1;
                for c in coords[j + 1..d - 1].iter_mut() {
                    *c = 0;
                }
                coords[d - 1] = suffix - 1;
                return true;
            }
            suffix += coords[j];
        }
        false
    }

    /// First coordinate vector in lexicographic order: all mass on the
    /// last coordinate.
    pub fn first_coords(&self) -> Vec<u64> {
        let mut coords = vec![0u64; self.dim];
        coords[self.dim - 1] = self.k;
        coords
    }

    /// The belief at a coordinate vector.
    pub fn point<W: Scalar>(&self, coords: &[u64]) -> Belief<W> {
        Belief::new_unchecked(
            coords
                .iter()
                .map(|n| W::ratio_of(*n, self.k))
                .collect::<Vec<_>>(),
        )
    }

    /// The state index if the coordinate vector is a point mass.
    pub fn dirac_of(coords: &[u64]) -> Option<usize> {
        let mut found = None;
        for (s, n) in coords.iter().enumerate() {
            if *n > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some(s);
            }
        }
        found
    }

    /// Same-support L1 projection onto the grid.
    ///
    /// Largest-remainder apportionment with a floor of one unit on every
    /// support coordinate: start from `max(1, floor(b(s) * k))`, then
    /// settle the unit balance greedily (deficits go to the largest
    /// fractional remainders, surpluses are taken back where the loss is
    /// smallest). Ties break on state declaration order. Attains the
    /// minimum L1 distance among same-support grid points.
    pub fn project<W: Scalar>(&self, b: &Belief<W>) -> Result<Vec<u64>, ProjectError> {
        if b.dim() != self.dim {
            return Err(ProjectError::DimensionMismatch {
                belief: b.dim(),
                grid: self.dim,
            });
        }
        let support = b.support();
        if support.is_empty() || support.len() as u64 > self.k {
            return Err(ProjectError::ResolutionTooCoarse {
                support: support.len(),
                k: self.k,
            });
        }
        let kw = W::ratio_of(self.k, 1);
        // scaled coordinates x_s = b(s) * k
        let scaled: Vec<W> = support
            .iter()
            .map(|s| b.get(*s).clone() * kw.clone())
            .collect();
        let mut units: Vec<u64> = scaled
            .iter()
            .map(|x| x.floor_u64().max(1))
            .collect();
        let mut total: u64 = units.iter().sum();

        while total < self.k {
            // grant a unit where |x - n| drops the most: cost delta
            // |x - (n+1)| - |x - n|, most negative first
            let mut best: Option<(W, usize)> = None;
            for (i, x) in scaled.iter().enumerate() {
                let n = W::ratio_of(units[i], 1);
                let delta =
                    (x.clone() - (n.clone() + W::one())).abs() - (x.clone() - n).abs();
                if best.as_ref().is_none_or(|(d, _)| delta < *d) {
                    best = Some((delta, i));
                }
            }
            units[best.unwrap().1] += 1;
            total += 1;
        }
        while total > self.k {
            // reclaim a unit where |x - n| grows the least, keeping every
            // support coordinate at >= 1
            let mut best: Option<(W, usize)> = None;
            for (i, x) in scaled.iter().enumerate() {
                if units[i] < 2 {
                    continue;
                }
                let n = W::ratio_of(units[i], 1);
                let delta =
                    (x.clone() - (n.clone() - W::one())).abs() - (x.clone() - n).abs();
                if best.as_ref().is_none_or(|(d, _)| delta < *d) {
                    best = Some((delta, i));
                }
            }
            units[best.expect("support floor keeps the sum at most k").1] -= 1;
            total -= 1;
        }

        let mut coords = vec![0u64; self.dim];
        for (i, s) in support.iter().enumerate() {
            coords[*s] = units[i];
        }
        Ok(coords)
    }

    /// Projection returning the grid belief itself.
    pub fn project_point<W: Scalar>(&self, b: &Belief<W>) -> Result<Belief<W>, ProjectError> {
        Ok(self.point(&self.project(b)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit;
    use crate::Rational;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn r2_noise_update() {
        let model = testkit::fixture_r2();
        let kv = KernelView::<Rational>::new(&model);
        let b = Belief::new(vec![rat(1, 2), rat(1, 2)]).unwrap();
        let noise = model.signal_index("noise").unwrap();
        let post = kv.update(&b, 0, noise).unwrap();
        assert_eq!(post.probs(), &[rat(1, 4), rat(3, 4)]);
    }

    #[test]
    fn r2_state_signal_gives_dirac() {
        let model = testkit::fixture_r2();
        let kv = KernelView::<Rational>::new(&model);
        let b = Belief::new(vec![rat(1, 2), rat(1, 2)]).unwrap();
        let z1 = model.signal_index("s1").unwrap();
        assert_eq!(kv.update(&b, 0, z1).unwrap().as_dirac(), Some(0));
    }

    #[test]
    fn absorbing_dirac_stays() {
        let model = testkit::fixture_r2();
        let kv = KernelView::<Rational>::new(&model);
        let b = Belief::<Rational>::dirac(1, 2);
        for out in kv.one_step_outcomes(&b, 0) {
            assert_eq!(out.posterior.as_dirac(), Some(1));
        }
    }

    #[test]
    fn zero_probability_signal_rejected() {
        let model = testkit::fixture_r2();
        let kv = KernelView::<Rational>::new(&model);
        let b = Belief::<Rational>::dirac(1, 2);
        let z1 = model.signal_index("s1").unwrap();
        assert!(matches!(
            kv.update(&b, 0, z1),
            Err(BeliefError::ZeroProbabilitySignal { .. })
        ));
    }

    #[test]
    fn r2_one_step_outcomes() {
        let model = testkit::fixture_r2();
        let kv = KernelView::<Rational>::new(&model);
        let b = Belief::new(vec![rat(1, 2), rat(1, 2)]).unwrap();
        let outs = kv.one_step_outcomes(&b, 0);
        assert_eq!(outs.len(), 3);
        let z1 = model.signal_index("s1").unwrap();
        let z2 = model.signal_index("s2").unwrap();
        let noise = model.signal_index("noise").unwrap();
        for out in &outs {
            if out.signal == z1 {
                assert_eq!(out.probability, rat(1, 8));
                assert_eq!(out.posterior.as_dirac(), Some(0));
            } else if out.signal == z2 {
                assert_eq!(out.probability, rat(3, 8));
                assert_eq!(out.posterior.as_dirac(), Some(1));
            } else {
                assert_eq!(out.signal, noise);
                assert_eq!(out.probability, rat(1, 2));
                assert_eq!(out.posterior.probs(), &[rat(1, 4), rat(3, 4)]);
            }
        }
    }

    #[test]
    fn l1_basics() {
        let a = Belief::new(vec![rat(1, 2), rat(1, 2)]).unwrap();
        let b = Belief::new(vec![rat(1, 4), rat(3, 4)]).unwrap();
        assert_eq!(l1_distance(&a, &a).unwrap(), rat(0, 1));
        assert_eq!(l1_distance(&a, &b).unwrap(), rat(1, 2));
        let d0 = Belief::<Rational>::dirac(0, 2);
        let d1 = Belief::<Rational>::dirac(1, 2);
        assert_eq!(l1_distance(&d0, &d1).unwrap(), rat(2, 1));
        let c = Belief::<Rational>::dirac(0, 3);
        assert!(matches!(
            l1_distance(&a, &c),
            Err(BeliefError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn grid_enumeration_two_states() {
        let g = Grid::new(4, 2).unwrap();
        assert_eq!(g.len(), 5);
        let mut coords = g.first_coords();
        let mut seen = vec![coords.clone()];
        while g.advance(&mut coords) {
            seen.push(coords.clone());
        }
        assert_eq!(
            seen,
            vec![vec![0, 4], vec![1, 3], vec![2, 2], vec![3, 1], vec![4, 0]]
        );
        for (i, c) in seen.iter().enumerate() {
            assert_eq!(g.index_of(c), i);
            assert_eq!(g.coords_of(i), *c);
        }
    }

    #[test]
    fn grid_counts() {
        assert_eq!(Grid::new(2, 3).unwrap().len(), 6);
        assert_eq!(Grid::new(7, 1).unwrap().len(), 1);
        assert_eq!(
            Grid::new(12, 4).unwrap().len(),
            grid_cardinality(12, 4).try_into().unwrap()
        );
        assert!(matches!(Grid::new(0, 2), Err(GridError::ZeroResolution)));
    }

    #[test]
    fn projection_exact_point() {
        let g = Grid::new(10, 2).unwrap();
        let b = Belief::new(vec![0.3f64, 0.7]).unwrap();
        assert_eq!(g.project(&b).unwrap(), vec![3, 7]);
    }

    #[test]
    fn projection_rounds_to_nearest() {
        let g = Grid::new(4, 2).unwrap();
        let b = Belief::new(vec![0.26f64, 0.74]).unwrap();
        let coords = g.project(&b).unwrap();
        assert_eq!(coords, vec![1, 3]);
        let p: Belief<f64> = g.point(&coords);
        let d = l1_distance(&b, &p).unwrap();
        assert!((d - 0.02).abs() < 1e-12);
    }

    #[test]
    fn projection_keeps_dirac() {
        for k in 1..10 {
            let g = Grid::new(k, 3).unwrap();
            let b = Belief::<Rational>::dirac(1, 3);
            assert_eq!(g.project(&b).unwrap(), vec![0, k, 0]);
        }
    }

    #[test]
    fn projection_rejects_coarse_grid() {
        let g = Grid::new(2, 3).unwrap();
        let b = Belief::<Rational>::uniform(3);
        assert!(matches!(
            g.project(&b),
            Err(ProjectError::ResolutionTooCoarse { support: 3, k: 2 })
        ));
    }

    /// Exhaustive optimality check at small sizes: the projection attains
    /// the minimum L1 distance among all same-support grid points.
    #[test]
    fn projection_attains_constrained_minimum() {
        let mut rng = testkit::CounterRng::new(7, 0, 0);
        for dim in 2..=4usize {
            for k in (dim as u64)..=8 {
                let g = Grid::new(k, dim).unwrap();
                for _ in 0..40 {
                    let b = testkit::random_belief(&mut rng, dim);
                    let got = g.project(&b).unwrap();
                    let got_d = l1_distance(&b, &g.point::<Rational>(&got)).unwrap();
                    let support = b.support_mask();
                    let mut best: Option<Rational> = None;
                    let mut coords = g.first_coords();
                    loop {
                        let point: Belief<Rational> = g.point(&coords);
                        if point.support_mask() == support {
                            let d = l1_distance(&b, &point).unwrap();
                            if best.as_ref().is_none_or(|x| d < *x) {
                                best = Some(d);
                            }
                        }
                        if !g.advance(&mut coords) {
                            break;
                        }
                    }
                    assert_eq!(got_d, best.unwrap(), "dim={dim} k={k}");
                }
            }
        }
    }

    #[test]
    fn outcome_probabilities_sum_to_one_on_random_models() {
        let mut rng = testkit::CounterRng::new(99, 0, 0);
        for i in 0..100 {
            let model = testkit::random_revealing(&mut rng, i);
            let kv = KernelView::<Rational>::new(&model);
            let b = model.initial().clone();
            for a in 0..model.n_actions() {
                let outs = kv.one_step_outcomes(&b, a);
                let mut total = Rational::from_integer(0.into());
                for out in &outs {
                    total += &out.probability;
                    // posterior is a valid belief
                    Belief::new(out.posterior.probs().to_vec()).unwrap();
                }
                assert!(total.is_one());
            }
        }
    }

    /// The probability-weighted mixture of the posteriors equals the
    /// one-step predictive distribution over next states.
    #[test]
    fn outcomes_mix_back_to_predictive() {
        let mut rng = testkit::CounterRng::new(5, 0, 0);
        for i in 0..40 {
            let model = testkit::random_revealing(&mut rng, 1000 + i);
            let kv = KernelView::<Rational>::new(&model);
            let b = model.initial().clone();
            for a in 0..model.n_actions() {
                let mut mixed = vec![Rational::from_integer(0.into()); model.n_states()];
                for out in kv.one_step_outcomes(&b, a) {
                    for s in 0..model.n_states() {
                        mixed[s] += &out.probability * out.posterior.get(s);
                    }
                }
                let mut predictive = vec![Rational::from_integer(0.into()); model.n_states()];
                for s in 0..model.n_states() {
                    for e in model.row(s, a) {
                        predictive[e.next] += b.get(s) * &e.prob;
                    }
                }
                assert_eq!(mixed, predictive);
            }
        }
    }
}
