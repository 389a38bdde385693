use crate::error::{Error, Result};

/// Monomials `Y^nu z^lambda` with `nu` in `[0, delta1]^nvars` and
/// `lambda <= delta2`.
///
/// Order: total degree `|nu|` ascending, then `nu` lexicographically ascending
/// (first variable most significant), then `lambda` ascending. For matrix
/// variables `nu` is the row-major flattening of the exponent matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    pub nvars: usize,
    pub delta1: u32,
    pub delta2: u32,
    /// `counts[r][s]`: vectors of length `r`, entries in `[0, delta1]`, sum `s`.
    counts: Vec<Vec<u64>>,
    /// `grade_start[s]`: number of exponent vectors with total degree `< s`.
    grade_start: Vec<u64>,
    n_exponents: u64,
}

impl MonomialBasis {
    pub fn new(nvars: usize, delta1: u32, delta2: u32) -> Result<Self> {
        let d1 = delta1 as usize;
        let max_sum = nvars * d1;
        let mut counts = vec![vec![0u64; max_sum + 1]; nvars + 1];
        counts[0][0] = 1;
        for r in 1..=nvars {
            for s in 0..=r * d1 {
                let mut c: u64 = 0;
                for v in 0..=d1.min(s) {
                    c = c
                        .checked_add(counts[r - 1][s - v])
                        .ok_or(Error::SizeBudgetExceeded { needed: u64::MAX, budget: u64::MAX })?;
                }
                counts[r][s] = c;
            }
        }
        let mut grade_start = Vec::with_capacity(max_sum + 2);
        let mut acc = 0u64;
        for s in 0..=max_sum {
            grade_start.push(acc);
            acc += counts[nvars][s];
        }
        grade_start.push(acc);
        Ok(MonomialBasis { nvars, delta1, delta2, counts, grade_start, n_exponents: acc })
    }

    /// Number of exponent vectors `nu`.
    pub fn exponent_count(&self) -> u64 {
        self.n_exponents
    }

    /// Total number of monomials.
    pub fn len_u64(&self) -> u64 {
        self.n_exponents.saturating_mul(self.delta2 as u64 + 1)
    }

    pub fn len(&self) -> usize {
        usize::try_from(self.len_u64()).expect("monomial count fits in usize")
    }

    pub fn is_empty(&self) -> bool {
        self.len_u64() == 0
    }

    /// Position of `nu` among exponent vectors.
    pub fn exponent_index(&self, nu: &[u32]) -> u64 {
        debug_assert_eq!(nu.len(), self.nvars);
        let total: usize = nu.iter().map(|&v| v as usize).sum();
        let mut idx = self.grade_start[total];
        let mut rest = total;
        for (i, &v) in nu.iter().enumerate() {
            let slots = self.nvars - i - 1;
            for w in 0..v as usize {
                if rest >= w && rest - w <= slots * self.delta1 as usize {
                    idx += self.counts[slots][rest - w];
                }
            }
            rest -= v as usize;
        }
        idx
    }

    pub fn exponent_at(&self, mut idx: u64) -> Vec<u32> {
        let total = self.grade_start.partition_point(|&g| g <= idx) - 1;
        idx -= self.grade_start[total];
        let mut nu = Vec::with_capacity(self.nvars);
        let mut rest = total;
        for i in 0..self.nvars {
            let slots = self.nvars - i - 1;
            let mut v = 0usize;
            loop {
                let c = if rest >= v && rest - v <= slots * self.delta1 as usize {
                    self.counts[slots][rest - v]
                } else {
                    0
                };
                if idx < c {
                    break;
                }
                idx -= c;
                v += 1;
            }
            nu.push(v as u32);
            rest -= v;
        }
        nu
    }

    pub fn index_of(&self, nu: &[u32], lambda: u32) -> usize {
        (self.exponent_index(nu) * (self.delta2 as u64 + 1) + lambda as u64) as usize
    }

    pub fn entry(&self, idx: usize) -> (Vec<u32>, u32) {
        let per = self.delta2 as u64 + 1;
        let idx = idx as u64;
        (self.exponent_at(idx / per), (idx % per) as u32)
    }

    /// All exponent vectors in order.
    pub fn exponents(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::with_capacity(self.n_exponents as usize);
        for s in 0..=self.nvars * self.delta1 as usize {
            let mut cur = vec![0u32; self.nvars];
            self.fill_grade(0, s, &mut cur, &mut out);
        }
        out
    }

    fn fill_grade(&self, pos: usize, rest: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos == self.nvars {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let slots = self.nvars - pos - 1;
        for v in 0..=(self.delta1 as usize).min(rest) {
            if rest - v <= slots * self.delta1 as usize {
                cur[pos] = v as u32;
                self.fill_grade(pos + 1, rest - v, cur, out);
            }
        }
        cur[pos] = 0;
    }
}

/// Formats `Y^nu z^lambda` for an `m x m` matrix of variables, e.g. `y12^2*z^3`.
pub fn format_monomial(m: usize, nu: &[u32], lambda: u32) -> String {
    let mut parts = Vec::new();
    for (i, &e) in nu.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let name = if m < 10 { format!("y{}{}", i / m + 1, i % m + 1) } else { format!("y{}_{}", i / m + 1, i % m + 1) };
        parts.push(if e == 1 { name } else { format!("{name}^{e}") });
    }
    match lambda {
        0 => {}
        1 => parts.push("z".into()),
        l => parts.push(format!("z^{l}")),
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_order() {
        let b = MonomialBasis::new(1, 1, 1).unwrap();
        let entries: Vec<_> = (0..b.len()).map(|i| b.entry(i)).collect();
        assert_eq!(entries, vec![(vec![0], 0), (vec![0], 1), (vec![1], 0), (vec![1], 1)]);
    }

    #[test]
    fn rank_unrank_agree_with_enumeration() {
        for (n, d1) in [(1, 3), (4, 1), (3, 2), (9, 1)] {
            let b = MonomialBasis::new(n, d1, 0).unwrap();
            let all = b.exponents();
            assert_eq!(all.len() as u64, (d1 as u64 + 1).pow(n as u32));
            for (i, nu) in all.iter().enumerate() {
                assert_eq!(b.exponent_index(nu), i as u64);
                assert_eq!(&b.exponent_at(i as u64), nu);
            }
            for w in all.windows(2) {
                let s0: u32 = w[0].iter().sum();
                let s1: u32 = w[1].iter().sum();
                assert!(s0 < s1 || (s0 == s1 && w[0] < w[1]));
            }
        }
    }

    #[test]
    fn names() {
        assert_eq!(format_monomial(2, &[0, 1, 0, 2], 3), "y12*y22^2*z^3");
        assert_eq!(format_monomial(1, &[0], 0), "1");
    }
}
