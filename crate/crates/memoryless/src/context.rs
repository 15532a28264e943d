use crate::{Error, Result};

/// Register-file geometry: `n` registers, each holding a value from an
/// alphabet of size `q`. States of the whole file are identified with their
/// lexicographic index in `[0, q^n)`, register 1 being the least significant
/// digit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Context {
    q: usize,
    n: usize,
    size: usize,
}

impl Context {
    pub fn new(q: usize, n: usize) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidInput(format!(
                "alphabet size must be at least 2, got {q}"
            )));
        }
        if n < 1 {
            return Err(Error::InvalidInput(format!(
                "register count must be at least 1, got {n}"
            )));
        }
        if q > u16::MAX as usize {
            return Err(Error::InvalidInput(format!(
                "alphabet size {q} exceeds the supported digit range"
            )));
        }
        let mut size: usize = 1;
        for _ in 0..n {
            size = size
                .checked_mul(q)
                .filter(|&s| s <= u32::MAX as usize)
                .ok_or_else(|| {
                    Error::InvalidInput(format!("state space {q}^{n} exceeds the index range"))
                })?;
        }
        Ok(Self { q, n, size })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `q^n`, the number of states of the register file.
    pub fn num_states(&self) -> usize {
        self.size
    }

    /// Context widened by `m` extra (scratch) registers.
    pub fn extended(&self, m: usize) -> Result<Self> {
        Context::new(self.q, self.n + m)
    }

    fn stride(&self, coord: usize) -> usize {
        self.q.pow(coord as u32)
    }

    /// Value of register `coord` (0-based) in the given state.
    pub fn digit(&self, state: usize, coord: usize) -> u16 {
        debug_assert!(coord < self.n && state < self.size);
        (state / self.stride(coord) % self.q) as u16
    }

    /// The state with register `coord` rewritten to `value`.
    pub fn with_digit(&self, state: usize, coord: usize, value: u16) -> usize {
        debug_assert!((value as usize) < self.q);
        let stride = self.stride(coord);
        let old = state / stride % self.q;
        state - old * stride + value as usize * stride
    }

    /// Lexicographic index of a digit tuple: `sum(d_i * q^(i-1))`.
    pub fn state_from_digits(&self, digits: &[u16]) -> Result<usize> {
        if digits.len() != self.n {
            return Err(Error::InvalidInput(format!(
                "expected {} digits, got {}",
                self.n,
                digits.len()
            )));
        }
        let mut state = 0usize;
        for (i, &d) in digits.iter().enumerate() {
            if d as usize >= self.q {
                return Err(Error::InvalidInput(format!(
                    "digit {d} out of range for alphabet size {}",
                    self.q
                )));
            }
            state += d as usize * self.stride(i);
        }
        Ok(state)
    }

    /// Inverse of [`state_from_digits`](Self::state_from_digits).
    pub fn digits_of(&self, state: usize) -> Vec<u16> {
        (0..self.n).map(|i| self.digit(state, i)).collect()
    }

    pub fn states(&self) -> std::ops::Range<usize> {
        0..self.size
    }
}
