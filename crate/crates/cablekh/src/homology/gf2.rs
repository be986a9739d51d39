//! Bit-packed matrices over the two-element field.

/// Dense row-major matrix over GF(2), 64 columns per word.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl Gf2Matrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64).max(1);
        Gf2Matrix { rows, cols, words, data: vec![0; rows * words] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize) {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.words + c / 64] ^= 1 << (c % 64);
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Matrix product over GF(2); `self` is m×n, `other` n×p.
    pub fn mul(&self, other: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Gf2Matrix::new(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    let (dst, src) = (r * out.words, k * other.words);
                    for w in 0..other.words {
                        out.data[dst + w] ^= other.data[src + w];
                    }
                }
            }
        }
        out
    }

    /// Rank by in-place row elimination.
    pub fn rank(mut self) -> usize {
        let (rows, words) = (self.rows, self.words);
        let mut rank = 0;
        for col in 0..self.cols {
            let (wi, mask) = (col / 64, 1u64 << (col % 64));
            let Some(pivot) = (rank..rows).find(|&r| self.data[r * words + wi] & mask != 0)
            else {
                continue;
            };
            if pivot != rank {
                for w in wi..words {
                    self.data.swap(pivot * words + w, rank * words + w);
                }
            }
            for r in rank + 1..rows {
                if self.data[r * words + wi] & mask != 0 {
                    let (lo, hi) = self.data.split_at_mut(r * words);
                    let src = &lo[rank * words + wi..rank * words + words];
                    for (d, s) in hi[wi..words].iter_mut().zip(src) {
                        *d ^= s;
                    }
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }
}

/// Rank of a GF(2) matrix.
pub fn rank_gf2(m: &Gf2Matrix) -> usize {
    m.clone().rank()
}
