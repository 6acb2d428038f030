use alloc::vec::Vec;

/// Uniform (u2) LBP mapping for `P` neighbours.
///
/// Codes with at most two circular 0/1 transitions get distinct bins and all
/// other codes share the last bin, `P(P-1)+3` bins in total. Bins are computed
/// arithmetically so no `2^P` table is needed:
///
/// * all zeros -> 0
/// * a circular run of `k` ones (`0 < k < P`) starting at bit `r` -> `1 + (k-1) P + r`
/// * all ones -> `P(P-1)+1`
/// * non-uniform -> `P(P-1)+2`
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UniformMapping {
    p: u32,
}

impl UniformMapping {
    pub fn new(p: u32) -> Self {
        assert!((4..=32).contains(&p), "P must be in 4..=32");
        UniformMapping { p }
    }

    pub fn bins(&self) -> usize {
        (self.p * (self.p - 1) + 3) as usize
    }

    fn mask(&self) -> u32 {
        if self.p == 32 {
            u32::MAX
        } else {
            (1u32 << self.p) - 1
        }
    }

    fn rotate_left1(&self, code: u32) -> u32 {
        ((code << 1) | (code >> (self.p - 1))) & self.mask()
    }

    /// Circular 0/1 transitions among the low `P` bits.
    pub fn transitions(&self, code: u32) -> u32 {
        (code ^ self.rotate_left1(code)).count_ones()
    }

    pub fn is_uniform(&self, code: u32) -> bool {
        self.transitions(code) <= 2
    }

    pub fn bin(&self, code: u32) -> u32 {
        let p = self.p;
        let code = code & self.mask();
        if code == 0 {
            return 0;
        }
        if code == self.mask() {
            return p * (p - 1) + 1;
        }
        if self.transitions(code) != 2 {
            return p * (p - 1) + 2;
        }
        let k = code.count_ones();
        // start of the run: a set bit whose circular predecessor is clear
        let starts = code & !self.rotate_left1(code);
        let r = starts.trailing_zeros();
        1 + (k - 1) * p + r
    }

    /// Full lookup table, only sensible for small `P`.
    pub fn table(&self) -> Vec<u32> {
        assert!(self.p <= 16, "table for P > 16 is too large");
        (0..1u32 << self.p).map(|c| self.bin(c)).collect()
    }
}
