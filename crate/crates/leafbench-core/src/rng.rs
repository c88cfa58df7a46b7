//! Fully specified random streams for reproducible noise injection.
//!
//! Per-image state is `SplitMix64(seed XOR image_index)` expanded into a
//! xoshiro256++ stream; Gaussian variates come from Box-Muller. Nothing here
//! depends on the platform, so corpus runs reproduce bit-exactly everywhere.

use crate::math;

const TWO_PI: f64 = 2.0 * core::f64::consts::PI;
/// 2^-53, the spacing of the uniform grid on [0, 1).
const UNIT: f64 = 1.0 / (1u64 << 53) as f64;

/// SplitMix64 generator, used only to expand seeds.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }
}

/// xoshiro256++ by Blackman and Vigna.
#[derive(Debug, Clone)]
pub struct Xoshiro256PlusPlus {
    s: [u64; 4],
}

impl Xoshiro256PlusPlus {
    /// Seeds the state with four successive SplitMix64 outputs.
    pub fn from_seed(seed: u64) -> Self {
        let mut sm = SplitMix64::new(seed);
        Xoshiro256PlusPlus {
            s: [sm.next_u64(), sm.next_u64(), sm.next_u64(), sm.next_u64()],
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.s;
        let result = s[0]
            .wrapping_add(s[3])
            .rotate_left(23)
            .wrapping_add(s[0]);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }
}

/// Random stream handed to the noise injectors.
#[derive(Debug, Clone)]
pub struct NoiseStream {
    rng: Xoshiro256PlusPlus,
    cached_gaussian: Option<f64>,
}

impl NoiseStream {
    /// Stream for one image of a corpus run: state derives from
    /// `SplitMix64(seed XOR image_index)`.
    pub fn derive(seed: u64, image_index: u64) -> Self {
        NoiseStream {
            rng: Xoshiro256PlusPlus::from_seed(seed ^ image_index),
            cached_gaussian: None,
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on [0, 1): the top 53 bits scaled by 2^-53.
    #[inline]
    pub fn next_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * UNIT
    }

    /// Uniform on (0, 1], used where a logarithm must stay finite.
    #[inline]
    fn next_unit_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * UNIT
    }

    /// Standard normal variate via Box-Muller (pairs generated, one cached).
    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(z) = self.cached_gaussian.take() {
            return z;
        }
        let u1 = self.next_unit_open();
        let u2 = self.next_unit();
        let radius = math::sqrt(-2.0 * math::ln(u1));
        let theta = TWO_PI * u2;
        self.cached_gaussian = Some(radius * math::sin(theta));
        radius * math::cos(theta)
    }
}
