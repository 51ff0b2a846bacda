//! Low-discrepancy point sets for deterministic volume sampling.
//!
//! The shell decomposition behind the accessibility probe needs sample
//! points that are (a) reproducible, (b) evenly spread so the shell sums
//! form a smooth sequence in the shell index, and (c) a pure function of
//! the index so parallel evaluation stays order-independent. A Kronecker
//! sequence driven by the generalized golden ratio delivers all three with
//! no state: the `n`-th point is `frac(1/2 + n·γ)` coordinate-wise, where
//! `γ_i = g^{-(i+1)}` and `g` is the unique real root of `x^{d+1} = x + 1`
//! in `(1, 2)`.

/// Deterministic Kronecker sequence on `[0, 1)^d`.
///
/// The increments are stored as 64-bit fixed-point fractions so that
/// `frac(n·γ)` is computed by exact wrapping multiplication — full
/// precision at every index, instead of the catastrophic low-bit loss a
/// floating `n·γ mod 1` suffers for large `n`.
pub(crate) struct Lattice {
    steps: Vec<u64>,
}

const TWO64: f64 = 18446744073709551616.0;

impl Lattice {
    pub(crate) fn new(d: usize) -> Self {
        assert!(d >= 1, "lattice dimension must be at least 1");
        let g = plastic_root(d);
        let mut steps = Vec::with_capacity(d);
        let mut a = 1.0f64;
        for _ in 0..d {
            a /= g;
            steps.push((a * TWO64) as u64);
        }
        Lattice { steps }
    }

    /// `n`-th point of the sequence, each coordinate in `[0, 1)`.
    pub(crate) fn point(&self, n: u64) -> Vec<f64> {
        self.steps
            .iter()
            .map(|&s| {
                // 1<<63 is the 1/2 offset that keeps point 0 off the corner.
                n.wrapping_mul(s).wrapping_add(1 << 63) as f64 / TWO64
            })
            .collect()
    }

    /// `n`-th point mapped affinely into the box `×_i (lo_i, hi_i)`.
    pub(crate) fn point_in_box(&self, n: u64, bx: &[(f64, f64)]) -> Vec<f64> {
        assert_eq!(bx.len(), self.steps.len());
        self.point(n)
            .into_iter()
            .zip(bx)
            .map(|(u, &(lo, hi))| lo + (hi - lo) * u)
            .collect()
    }
}

/// Unique root of `x^{d+1} = x + 1` in `(1, 2)` (the plastic number for
/// `d = 2`, the golden ratio for `d = 1`), by bisection — robust and run
/// once per probe.
fn plastic_root(d: usize) -> f64 {
    let f = |x: f64| x.powi(d as i32 + 1) - x - 1.0;
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}
