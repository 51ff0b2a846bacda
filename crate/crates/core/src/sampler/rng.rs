//! Counter-based pseudorandom streams.
//!
//! Every stream is a pure function of `(key, counter)`, so a parent stream
//! can hand out an independent child stream per walk index and the resulting
//! sample sequences do not depend on scheduling. The output function is the
//! SplitMix64 finalizer, which passes standard equidistribution batteries at
//! the volumes used here.

/// A deterministic random stream with cheap, collision-resistant substreams.
#[derive(Debug, Clone)]
pub struct RngStream {
    key: u64,
    counter: u64,
    cached_normal: Option<f64>,
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RngStream {
    /// Stream derived from a user seed and a stream index.
    pub fn new(seed: u64, stream: u64) -> Self {
        let key = mix(seed ^ mix(stream.wrapping_mul(GOLDEN).wrapping_add(GOLDEN)));
        RngStream {
            key,
            counter: 0,
            cached_normal: None,
        }
    }

    /// Independent child stream; depends only on the parent's key and the
    /// index, never on how much of the parent has been consumed.
    pub fn substream(&self, index: u64) -> RngStream {
        RngStream::new(self.key, index)
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    /// Uniform in `[0, 1)` with 53-bit resolution.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in the open interval `(0, 1)`; safe to pass to `ln`.
    #[inline]
    pub fn uniform_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box–Muller (second value cached).
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.cached_normal.take() {
            return z;
        }
        let r = (-2.0 * self.uniform_open().ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * self.uniform();
        self.cached_normal = Some(r * theta.sin());
        r * theta.cos()
    }

    /// Uniform direction on the unit sphere in `R^d`.
    pub fn unit_vector(&mut self, d: usize) -> Vec<f64> {
        let mut u = vec![0.0; d];
        self.unit_vector_into(&mut u);
        u
    }

    pub(crate) fn unit_vector_into(&mut self, u: &mut [f64]) {
        if u.len() == 1 {
            u[0] = if self.next_u64() & 1 == 0 { -1.0 } else { 1.0 };
            return;
        }
        loop {
            for ui in u.iter_mut() {
                *ui = self.normal();
            }
            let n = u.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 1e-8 {
                for ui in u.iter_mut() {
                    *ui /= n;
                }
                return;
            }
        }
    }
}
