/// 64-bit linear congruential generator (Knuth's MMIX constants) used for
/// the sparse matrix pattern. Each draw returns the top 31 bits of the state.
///
/// The sequence is part of the trace definition: changing it changes every
/// `csr` trace, so it is fixed here rather than taken from a crate whose
/// output may change between versions.
#[derive(Debug, Clone)]
pub struct Lcg {
    state: u64,
}

const MULTIPLIER: u64 = 6364136223846793005;
const INCREMENT: u64 = 1442695040888963407;

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg { state: seed }
    }

    pub fn next_u31(&mut self) -> u64 {
        self.state = self.state.wrapping_mul(MULTIPLIER).wrapping_add(INCREMENT);
        self.state >> 33
    }

    /// Draw reduced modulo `bound` (> 0).
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u31() % bound
    }
}
