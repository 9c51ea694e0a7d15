//! Finite-state fading models: joint state distributions, per-link rates per
//! state, mean rates, and state-sequence generation.

use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Default cap on the joint state count produced by product expansion.
pub const DEFAULT_STATE_CAP: usize = 4096;

/// A joint finite-state channel model: `J` network states with stationary
/// probabilities, and a rate per (link, state).
#[derive(Debug, Clone, PartialEq)]
pub struct FadingModel<R> {
    pi: Vec<R>,
    /// rates[link][state]
    rates: Vec<Vec<R>>,
    mean: Vec<R>,
    transition: Option<Vec<Vec<R>>>,
}

impl<R: Real> FadingModel<R> {
    /// Builds a model with i.i.d. state draws by `pi`.
    pub fn new(pi: Vec<R>, rates: Vec<Vec<R>>) -> Result<Self> {
        Self::build(pi, rates, None, None)
    }

    /// Builds a model that can also generate states from an irreducible
    /// transition matrix whose stationary vector is `pi`.
    pub fn with_transition(pi: Vec<R>, rates: Vec<Vec<R>>, p: Vec<Vec<R>>) -> Result<Self> {
        Self::build(pi, rates, None, Some(p))
    }

    /// Degenerate single-state model (a static network).
    pub fn single_state(rates: Vec<R>) -> Result<Self> {
        let columns = rates.into_iter().map(|r| vec![r]).collect();
        Self::new(vec![R::one()], columns)
    }

    fn build(
        pi: Vec<R>,
        rates: Vec<Vec<R>>,
        mean_override: Option<Vec<R>>,
        transition: Option<Vec<Vec<R>>>,
    ) -> Result<Self> {
        let states = pi.len();
        if states == 0 {
            return Err(Error::Model("at least one channel state required".into()));
        }
        let mut total = R::zero();
        for (j, &p) in pi.iter().enumerate() {
            if !p.is_finite() || p < R::zero() {
                return Err(Error::Model(format!("pi[{j}] must be a finite non-negative probability")));
            }
            total += p;
        }
        if (total - R::one()).abs() > R::prob_tol() {
            return Err(Error::Model(format!("pi must sum to 1, got {total}")));
        }
        if rates.is_empty() {
            return Err(Error::Model("at least one link required".into()));
        }
        for (l, row) in rates.iter().enumerate() {
            if row.len() != states {
                return Err(Error::Model(format!(
                    "rates of link index {l} cover {} states, model has {states}",
                    row.len()
                )));
            }
            for (j, &c) in row.iter().enumerate() {
                if !c.is_finite() || c < R::zero() {
                    return Err(Error::Model(format!(
                        "rate of link index {l} in state {j} must be finite and non-negative"
                    )));
                }
            }
        }
        let mean = match mean_override {
            Some(m) => m,
            // fixed summation order: ascending state index
            None => rates
                .iter()
                .map(|row| {
                    let mut acc = R::zero();
                    for (j, &c) in row.iter().enumerate() {
                        acc += pi[j] * c;
                    }
                    acc
                })
                .collect(),
        };
        for (l, &m) in mean.iter().enumerate() {
            if m <= R::zero() {
                return Err(Error::Model(format!(
                    "link index {l} has zero mean rate; every link must be servable on average"
                )));
            }
        }
        if let Some(p) = &transition {
            Self::validate_transition(&pi, p)?;
        }
        Ok(Self { pi, rates, mean, transition })
    }

    fn validate_transition(pi: &[R], p: &[Vec<R>]) -> Result<()> {
        let states = pi.len();
        if p.len() != states {
            return Err(Error::Model("transition matrix rows must match state count".into()));
        }
        for (i, row) in p.iter().enumerate() {
            if row.len() != states {
                return Err(Error::Model(format!("transition row {i} has wrong length")));
            }
            let mut total = R::zero();
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() || v < R::zero() {
                    return Err(Error::Model(format!("transition[{i}][{j}] must be a probability")));
                }
                total += v;
            }
            if (total - R::one()).abs() > R::prob_tol() {
                return Err(Error::Model(format!("transition row {i} must sum to 1")));
            }
        }
        // irreducible: every state reaches state 0 and is reached from it
        let edge = |i: usize, j: usize| p[i][j] > R::zero();
        let reachable = |from: usize, forward: bool| -> Vec<bool> {
            let mut seen = vec![false; states];
            seen[from] = true;
            let mut stack = vec![from];
            while let Some(v) = stack.pop() {
                for w in 0..states {
                    let connected = if forward { edge(v, w) } else { edge(w, v) };
                    if connected && !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            seen
        };
        if !reachable(0, true).iter().all(|&s| s) || !reachable(0, false).iter().all(|&s| s) {
            return Err(Error::Model("transition matrix must be irreducible".into()));
        }
        // stationarity: pi P = pi
        for j in 0..states {
            let mut acc = R::zero();
            for i in 0..states {
                acc += pi[i] * p[i][j];
            }
            if (acc - pi[j]).abs() > R::lp_tol() {
                return Err(Error::Model(format!(
                    "pi is not stationary for the transition matrix (state {j})"
                )));
            }
        }
        Ok(())
    }

    pub fn state_count(&self) -> usize {
        self.pi.len()
    }

    pub fn link_count(&self) -> usize {
        self.rates.len()
    }

    pub fn pi(&self) -> &[R] {
        &self.pi
    }

    pub fn rate(&self, link: usize, state: usize) -> R {
        self.rates[link][state]
    }

    /// All link rates for one state.
    pub fn state_rates(&self, state: usize) -> Vec<R> {
        self.rates.iter().map(|row| row[state]).collect()
    }

    /// Mean rates, one per link: the pi-weighted rate summed in ascending
    /// state order.
    pub fn mean_rates(&self) -> &[R] {
        &self.mean
    }

    pub fn transition(&self) -> Option<&Vec<Vec<R>>> {
        self.transition.as_ref()
    }

    /// Probability that an arrival batch on `link` is assigned to the
    /// virtual queue of `state`: pi_j * c_lj / mean_l. Zero-rate states get
    /// probability exactly zero, and the probabilities sum to one per link.
    pub fn routing_probability(&self, link: usize, state: usize) -> R {
        self.pi[state] * self.rates[link][state] / self.mean[link]
    }

    /// One i.i.d. state draw by `pi`. Consumes exactly one uniform variate.
    pub fn sample_state<G: Rng>(&self, rng: &mut G) -> usize {
        let u: f64 = rng.random();
        categorical(self.pi.iter().map(|p| p.to_f64().unwrap_or(0.0)), u)
    }
}

/// Inverse-CDF draw over an ascending-index categorical distribution.
/// Falls back to the last positive-probability index on accumulated
/// round-off.
pub(crate) fn categorical(probs: impl Iterator<Item = f64>, u: f64) -> usize {
    let mut cum = 0.0;
    let mut last_positive = 0;
    for (i, p) in probs.enumerate() {
        if p <= 0.0 {
            continue;
        }
        last_positive = i;
        cum += p;
        if u < cum {
            return i;
        }
    }
    last_positive
}

/// Markov state generation from the model's transition matrix.
#[derive(Debug, Clone)]
pub struct MarkovStates {
    current: usize,
}

impl MarkovStates {
    pub fn new(start: usize) -> Self {
        Self { current: start }
    }

    pub fn current(&self) -> usize {
        self.current
    }

    /// Draws the next state from the row of the current one.
    pub fn next_state<R: Real, G: Rng>(&mut self, model: &FadingModel<R>, rng: &mut G) -> usize {
        let p = model
            .transition()
            .expect("markov generation requires a transition matrix");
        let u: f64 = rng.random();
        let row = &p[self.current];
        self.current = categorical(row.iter().map(|v| v.to_f64().unwrap_or(0.0)), u);
        self.current
    }
}

/// Per-link fading: a pmf over that link's own states and the matching rates.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkFading<R> {
    pub pmf: Vec<R>,
    pub rates: Vec<R>,
}

/// Independent per-link fading, expandable to a joint model over the product
/// state space.
#[derive(Debug, Clone, PartialEq)]
pub struct FactoredFadingModel<R> {
    pub links: Vec<LinkFading<R>>,
}

impl<R: Real> FactoredFadingModel<R> {
    pub fn new(links: Vec<LinkFading<R>>) -> Self {
        Self { links }
    }

    /// Expands to the joint model. Joint states are indexed mixed-radix with
    /// link 0 most significant; a joint state's probability is the product of
    /// the per-link component probabilities. Mean rates of the joint model
    /// are the per-link pmf means, computed in per-link state order.
    pub fn expand(&self) -> Result<FadingModel<R>> {
        self.expand_with_cap(DEFAULT_STATE_CAP)
    }

    pub fn expand_with_cap(&self, cap: usize) -> Result<FadingModel<R>> {
        if self.links.is_empty() {
            return Err(Error::Model("at least one link required".into()));
        }
        let mut joint_states: usize = 1;
        for (l, link) in self.links.iter().enumerate() {
            if link.pmf.is_empty() || link.pmf.len() != link.rates.len() {
                return Err(Error::Model(format!(
                    "link index {l}: pmf and rates must be non-empty and equal length"
                )));
            }
            let mut total = R::zero();
            for &p in &link.pmf {
                if !p.is_finite() || p < R::zero() {
                    return Err(Error::Model(format!("link index {l}: pmf entries must be probabilities")));
                }
                total += p;
            }
            if (total - R::one()).abs() > R::prob_tol() {
                return Err(Error::Model(format!("link index {l}: pmf must sum to 1")));
            }
            joint_states = joint_states.saturating_mul(link.pmf.len());
            if joint_states > cap {
                return Err(Error::CapacityExceeded {
                    what: "joint state space",
                    got: joint_states,
                    cap,
                });
            }
        }

        let n = self.links.len();
        let mut pi = vec![R::one(); joint_states];
        let mut rates = vec![vec![R::zero(); joint_states]; n];
        for j in 0..joint_states {
            // decode mixed-radix digits, link 0 most significant
            let mut rem = j;
            let mut weight: usize = self.links.iter().map(|l| l.pmf.len()).product();
            for (l, link) in self.links.iter().enumerate() {
                weight /= link.pmf.len();
                let digit = rem / weight;
                rem %= weight;
                pi[j] = pi[j] * link.pmf[digit];
                rates[l][j] = link.rates[digit];
            }
        }
        let mean = self
            .links
            .iter()
            .map(|link| {
                let mut acc = R::zero();
                for (s, &p) in link.pmf.iter().enumerate() {
                    acc += p * link.rates[s];
                }
                acc
            })
            .collect();
        FadingModel::build(pi, rates, Some(mean), None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fig_two_link() -> FadingModel<f64> {
        FadingModel::new(vec![0.5, 0.5], vec![vec![1.0, 0.1], vec![0.1, 1.0]]).unwrap()
    }

    #[test]
    fn single_state_mean_is_the_rate() {
        let m = FadingModel::single_state(vec![2.5, 0.75]).unwrap();
        assert_eq!(m.mean_rates(), &[2.5, 0.75]);
    }

    #[test]
    fn two_state_symmetric_means() {
        let m = fig_two_link();
        assert_relative_eq!(m.mean_rates()[0], 0.55, max_relative = 1e-15);
        assert_relative_eq!(m.mean_rates()[1], 0.55, max_relative = 1e-15);
    }

    #[test]
    fn construction_rejects_bad_inputs() {
        assert!(FadingModel::new(vec![0.6, 0.6], vec![vec![1.0, 1.0]]).is_err());
        assert!(FadingModel::new(vec![0.5, 0.5], vec![vec![0.0, 0.0]]).is_err());
        assert!(FadingModel::new(vec![0.5, 0.5], vec![vec![1.0]]).is_err());
        assert!(FadingModel::new(vec![1.0], vec![vec![-1.0]]).is_err());
    }

    #[test]
    fn transition_validation() {
        let rates = vec![vec![1.0, 2.0]];
        // rows must sum to 1
        assert!(FadingModel::with_transition(
            vec![0.5, 0.5],
            rates.clone(),
            vec![vec![0.5, 0.4], vec![0.5, 0.5]],
        )
        .is_err());
        // identity matrix is reducible
        assert!(FadingModel::with_transition(
            vec![0.5, 0.5],
            rates.clone(),
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        )
        .is_err());
        // pi must be stationary
        assert!(FadingModel::with_transition(
            vec![0.9, 0.1],
            rates.clone(),
            vec![vec![0.0, 1.0], vec![1.0, 0.0]],
        )
        .is_err());
        // valid: the alternating chain with uniform stationary vector
        let m = FadingModel::with_transition(
            vec![0.5, 0.5],
            rates,
            vec![vec![0.0, 1.0], vec![1.0, 0.0]],
        )
        .unwrap();
        let mut gen = MarkovStates::new(0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let seq: Vec<usize> = (0..6).map(|_| gen.next_state(&m, &mut rng)).collect();
        assert_eq!(seq, vec![1, 0, 1, 0, 1, 0]);
    }

    #[test]
    fn degenerate_pi_always_draws_the_same_state() {
        let m = FadingModel::new(vec![1.0, 0.0], vec![vec![1.0, 2.0]]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!((0..1000).all(|_| m.sample_state(&mut rng) == 0));
    }

    #[test]
    fn sample_frequencies_match_pi_within_three_sigma() {
        let m = FadingModel::new(vec![0.2, 0.5, 0.3], vec![vec![1.0, 2.0, 3.0]]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let draws = 100_000usize;
        let mut counts = [0usize; 3];
        for _ in 0..draws {
            counts[m.sample_state(&mut rng)] += 1;
        }
        for (j, &p) in m.pi().iter().enumerate() {
            let sigma = (p * (1.0 - p) / draws as f64).sqrt();
            let freq = counts[j] as f64 / draws as f64;
            assert!(
                (freq - p).abs() <= 3.0 * sigma,
                "state {j}: freq {freq} vs pi {p}"
            );
        }
    }

    #[test]
    fn product_expansion_of_one_link_is_identity() {
        let factored = FactoredFadingModel::new(vec![LinkFading {
            pmf: vec![0.25, 0.75],
            rates: vec![1.0, 3.0],
        }]);
        let joint = factored.expand().unwrap();
        assert_eq!(joint.state_count(), 2);
        assert_eq!(joint.pi(), &[0.25, 0.75]);
        assert_eq!(joint.state_rates(0), vec![1.0]);
        assert_eq!(joint.state_rates(1), vec![3.0]);
        assert_eq!(joint.mean_rates(), &[0.25 + 2.25]);
    }

    #[test]
    fn product_expansion_four_links_four_states() {
        let link = |pmf: [f64; 4]| LinkFading {
            pmf: pmf.to_vec(),
            rates: vec![1.0, 2.0, 3.0, 4.0],
        };
        let factored = FactoredFadingModel::new(vec![
            link([0.25, 0.25, 0.25, 0.25]),
            link([0.4, 0.3, 0.2, 0.1]),
            link([0.1, 0.2, 0.3, 0.4]),
            link([0.7, 0.1, 0.1, 0.1]),
        ]);
        let joint = factored.expand().unwrap();
        assert_eq!(joint.state_count(), 256);
        let total: f64 = joint.pi().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        // joint means equal the per-link pmf means exactly (same summation order)
        for (l, link) in factored.links.iter().enumerate() {
            let mut expected = 0.0;
            for (s, &p) in link.pmf.iter().enumerate() {
                expected += p * link.rates[s];
            }
            assert_eq!(joint.mean_rates()[l], expected);
        }
        assert_eq!(joint.mean_rates()[0], 2.5);
        // mixed radix: link 0 most significant
        assert_eq!(joint.rate(0, 0), 1.0);
        assert_eq!(joint.rate(0, 255), 4.0);
        assert_eq!(joint.rate(3, 1), 2.0);
        assert_eq!(joint.rate(3, 4), 1.0);
        assert_eq!(joint.rate(2, 4), 2.0);
    }

    #[test]
    fn product_expansion_respects_the_state_cap() {
        let link = LinkFading { pmf: vec![0.25; 4], rates: vec![1.0, 2.0, 3.0, 4.0] };
        let factored = FactoredFadingModel::new(vec![link; 7]); // 4^7 = 16384
        assert!(matches!(
            factored.expand().unwrap_err(),
            Error::CapacityExceeded { .. }
        ));
    }

    #[test]
    fn factored_marginals_match_per_link_pmfs() {
        let factored = FactoredFadingModel::new(vec![
            LinkFading { pmf: vec![0.3, 0.7], rates: vec![1.0, 2.0] },
            LinkFading { pmf: vec![0.6, 0.4], rates: vec![2.0, 4.0] },
        ]);
        let joint = factored.expand().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let draws = 100_000usize;
        let mut rate1_low = 0usize;
        for _ in 0..draws {
            let j = joint.sample_state(&mut rng);
            if joint.rate(1, j) == 2.0 {
                rate1_low += 1;
            }
        }
        let p = 0.6;
        let sigma = (p * (1.0 - p) / draws as f64).sqrt();
        assert!((rate1_low as f64 / draws as f64 - p).abs() <= 3.0 * sigma);
    }

    #[test]
    fn routing_probabilities_normalize_and_vanish_on_zero_rates() {
        let m = FadingModel::new(vec![0.5, 0.5], vec![vec![1.0, 0.0]]).unwrap();
        assert_eq!(m.routing_probability(0, 1), 0.0);
        assert_relative_eq!(
            m.routing_probability(0, 0) + m.routing_probability(0, 1),
            1.0,
            max_relative = 1e-15
        );
        let fig = fig_two_link();
        assert_relative_eq!(fig.routing_probability(0, 0), 0.5 / 0.55, max_relative = 1e-15);
    }
}
