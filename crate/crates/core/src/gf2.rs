//! Linear systems over the two-element field, packed into 64-bit words.

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitRow {
    words: Vec<u64>,
    len: usize,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }
}

/// Equations `Σ_{i in row} x_i = rhs (mod 2)`.
#[derive(Debug, Clone)]
pub struct ParitySystem {
    vars: usize,
    rows: Vec<(BitRow, bool)>,
}

/// Affine solution space `particular + span(kernel)`.
#[derive(Debug, Clone)]
pub struct Solutions {
    pub particular: BitRow,
    pub kernel: Vec<BitRow>,
}

impl ParitySystem {
    pub fn new(vars: usize) -> Self {
        Self {
            vars,
            rows: Vec::new(),
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    /// Adds one equation; repeated variables cancel.
    pub fn add_equation(&mut self, vars: impl IntoIterator<Item = usize>, rhs: bool) {
        let mut row = BitRow::zeros(self.vars);
        for v in vars {
            row.flip(v);
        }
        self.rows.push((row, rhs));
    }

    /// Gauss–Jordan elimination; `None` when inconsistent.
    pub fn solve(&self) -> Option<Solutions> {
        let mut rows = self.rows.clone();
        let mut pivots: Vec<usize> = Vec::new();
        let mut r = 0;
        for col in 0..self.vars {
            let Some(p) = (r..rows.len()).find(|&i| rows[i].0.get(col)) else {
                continue;
            };
            rows.swap(r, p);
            let (pivot_row, pivot_rhs) = rows[r].clone();
            for (i, (row, rhs)) in rows.iter_mut().enumerate() {
                if i != r && row.get(col) {
                    row.xor_assign(&pivot_row);
                    *rhs ^= pivot_rhs;
                }
            }
            pivots.push(col);
            r += 1;
        }
        if rows[r..].iter().any(|(_, rhs)| *rhs) {
            return None;
        }
        let mut particular = BitRow::zeros(self.vars);
        for (i, &col) in pivots.iter().enumerate() {
            particular.set(col, rows[i].1);
        }
        let free: Vec<usize> = (0..self.vars).filter(|c| !pivots.contains(c)).collect();
        let kernel = free
            .iter()
            .map(|&fc| {
                let mut v = BitRow::zeros(self.vars);
                v.set(fc, true);
                for (i, &col) in pivots.iter().enumerate() {
                    if rows[i].0.get(fc) {
                        v.set(col, true);
                    }
                }
                v
            })
            .collect();
        Some(Solutions { particular, kernel })
    }

    pub fn satisfied_by(&self, x: &BitRow) -> bool {
        self.rows.iter().all(|(row, rhs)| {
            let dot = row.ones().filter(|&i| x.get(i)).count() % 2 == 1;
            dot == *rhs
        })
    }
}

impl Solutions {
    pub fn dimension(&self) -> usize {
        self.kernel.len()
    }

    /// Every solution, in the order of binary counting over the kernel basis.
    pub fn iter(&self) -> impl Iterator<Item = BitRow> + '_ {
        let n = self.kernel.len();
        assert!(n < 63, "solution space too large to enumerate");
        (0u64..1 << n).map(move |mask| {
            let mut x = self.particular.clone();
            for (i, k) in self.kernel.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    x.xor_assign(k);
                }
            }
            x
        })
    }
}
