//! Synthetic value lists for tests and benchmarks.

use rand::Rng;

/// Sample spacing along the x axis for the oscillating families; not a
/// rational multiple of pi, so no two samples tie.
const STEP: f64 = 0.37;

/// Partial sums of steps drawn uniformly from `[-1, 1)`.
pub fn random_walk(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let mut acc = 0.0;
    (0..n)
        .map(|_| {
            acc += rng.gen_range(-1.0..1.0);
            acc
        })
        .collect()
}

/// Independent draws from `[0, 1)`.
pub fn uniform(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(0.0..1.0)).collect()
}

/// `x sin x` sampled to the right of the origin. Every min-max pair spans a
/// window that is short on the left, so the spine grows linearly with `n`.
pub fn damped_sine(n: usize) -> Vec<f64> {
    (0..n).map(|i| x_sin_x(0.05 + i as f64 * STEP)).collect()
}

/// `x sin x` sampled on both sides of a point near the middle, so that
/// windows nest around the centre with their mirrors on the far side.
pub fn nested_mirrors(n: usize) -> Vec<f64> {
    let mid = n as f64 / 2.0;
    (0..n).map(|i| x_sin_x((i as f64 - mid + 0.3) * STEP)).collect()
}

fn x_sin_x(x: f64) -> f64 {
    x * x.sin()
}

/// Generator families by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    RandomWalk,
    Uniform,
    DampedSine,
    NestedMirrors,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::RandomWalk, Family::Uniform, Family::DampedSine, Family::NestedMirrors];

    pub fn name(self) -> &'static str {
        match self {
            Family::RandomWalk => "random-walk",
            Family::Uniform => "uniform",
            Family::DampedSine => "damped-sine",
            Family::NestedMirrors => "nested-mirrors",
        }
    }

    pub fn from_name(s: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == s)
    }

    pub fn generate(self, n: usize, rng: &mut impl Rng) -> Vec<f64> {
        match self {
            Family::RandomWalk => random_walk(n, rng),
            Family::Uniform => uniform(n, rng),
            Family::DampedSine => damped_sine(n),
            Family::NestedMirrors => nested_mirrors(n),
        }
    }
}
