//! Seeded, splittable randomness.
//!
//! Every stochastic result in the crate is a function of a 64-bit seed and a
//! substream index. Substreams map onto ChaCha8's native stream counter, so
//! trial `i` of an experiment always sees the same variates regardless of how
//! trials are scheduled across threads.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        RngStream {
            seed,
            stream_id,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform on the half-open interval (0, 1]; never returns 0, so `ln` is finite.
    #[inline]
    pub fn uniform_open0(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.rng.try_fill_bytes(dest)
    }
}

/// Fair coin flips served one bit at a time from buffered 64-bit words.
#[derive(Debug)]
pub(crate) struct CoinFlips<'a> {
    stream: &'a mut RngStream,
    word: u64,
    avail: u32,
}

impl<'a> CoinFlips<'a> {
    pub fn new(stream: &'a mut RngStream) -> Self {
        CoinFlips {
            stream,
            word: 0,
            avail: 0,
        }
    }

    #[inline]
    fn consume(&mut self, bits: u32) {
        debug_assert!(bits <= self.avail);
        self.word = if bits >= 64 { 0 } else { self.word >> bits };
        self.avail -= bits;
    }

    /// Flips coins until a head (1) appears or `limit` tails (0) in a row
    /// have been seen. Returns the number of tails, which equals `limit`
    /// exactly when no head appeared.
    #[inline]
    pub fn tails_run(&mut self, limit: u32) -> u32 {
        let mut run = 0;
        while run < limit {
            if self.avail == 0 {
                self.word = self.stream.next_u64();
                self.avail = 64;
            }
            let zeros = self.word.trailing_zeros().min(self.avail);
            let need = limit - run;
            if zeros >= need {
                self.consume(need);
                return limit;
            }
            if zeros < self.avail {
                self.consume(zeros + 1);
                return run + zeros;
            }
            run += self.avail;
            self.consume(self.avail);
        }
        run
    }
}
