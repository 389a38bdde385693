//! Rank and kernel computations for evaluation matrices along the orbit.
//!
//! Entries of `A_k(alpha)` that are constant along the orbit (for example the
//! unit diagonal of a unipotent system) make whole families of monomial
//! columns zero or proportional. Those entries are substituted once, and the
//! remaining reduced matrix (monomials in the varying entries and `z`) has the
//! same rank. Ranks are computed over F_p for word-sized primes, with the
//! constraint set grown by doubling until the prefix ranks repeat twice; the
//! reduced echelon form over Q is then recovered by Chinese remaindering and
//! rational reconstruction.

use num_traits::{One, Zero};

use super::monomial::MonomialBasis;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::modular::{self, mul_mod, pow_mod, rat_mod, ModEchelon};
use crate::scalar::{format_rational, Rational};
use crate::system::{CocycleChain, MahlerSystem, ModSystem};

/// Knobs of the stabilization loop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EngineOptions {
    /// First `k` of the constraint set.
    pub k_min: u32,
    /// Size of the first constraint set; it doubles on every enlargement.
    pub initial_size: u32,
    /// Largest `k` the constraint set may reach.
    pub max_k: u32,
    /// Independent primes used for each rank decision.
    pub rank_primes: usize,
    /// Number of exact orbit points used to identify constant entries.
    pub exact_window: u32,
    /// Cap on the number of reduced columns.
    pub max_columns: usize,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions { k_min: 1, initial_size: 8, max_k: 4096, rank_primes: 2, exact_window: 5, max_columns: 60_000 }
    }
}

/// Which entries of `A_k(alpha)` vary along the orbit, and the values of
/// those that do not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    pub m: usize,
    /// Flattened indices of the varying entries, ascending.
    pub variable: Vec<usize>,
    /// Value of each entry that is constant along the orbit.
    pub constants: Vec<Option<Rational>>,
}

impl Structure {
    pub fn is_zero_entry(&self, e: usize) -> bool {
        matches!(&self.constants[e], Some(c) if c.is_zero())
    }

    /// Reduced image of a full monomial: `None` if it vanishes identically on
    /// the orbit, otherwise the exponents of the varying entries and the
    /// constant factor.
    pub fn reduce_monomial(&self, nu: &[u32]) -> Option<(Vec<u32>, Rational)> {
        let mut coeff = Rational::one();
        for (e, &d) in nu.iter().enumerate() {
            if d == 0 {
                continue;
            }
            if let Some(c) = &self.constants[e] {
                if c.is_zero() {
                    return None;
                }
                if !c.is_one() {
                    coeff *= crate::scalar::rat_pow(c, d as u64);
                }
            }
        }
        Some((self.variable.iter().map(|&e| nu[e]).collect(), coeff))
    }

    /// Full exponent vector of the representative of a reduced monomial.
    pub fn embed(&self, mu: &[u32]) -> Vec<u32> {
        let mut nu = vec![0u32; self.m * self.m];
        for (&e, &d) in self.variable.iter().zip(mu) {
            nu[e] = d;
        }
        nu
    }
}

/// Exact orbit points `k_min, k_min + 1, ...` while they fit the bit budget.
pub fn exact_window(sys: &MahlerSystem, alpha: &Rational, k_min: u32, len: u32) -> Result<Vec<(u32, Matrix<Rational>, Rational)>> {
    let mut chain = CocycleChain::new(sys, alpha.clone());
    let mut out = Vec::new();
    while chain.k() < k_min + len {
        if chain.k() >= k_min {
            out.push((chain.k(), chain.value().clone(), chain.point().clone()));
        }
        match chain.advance() {
            Ok(()) => {}
            Err(Error::BitBudgetExceeded { .. }) if !out.is_empty() => return Ok(out),
            Err(e) => return Err(e),
        }
    }
    out.push((chain.k(), chain.value().clone(), chain.point().clone()));
    Ok(out)
}

/// Orbit values modulo a prime, extended on demand.
struct ModOrbit {
    sys: ModSystem,
    values: Vec<(Vec<u64>, u64)>,
}

impl ModOrbit {
    fn new(sys: &MahlerSystem, alpha: &Rational, p: u64) -> Option<Self> {
        let ms = sys.mod_image(p)?;
        let x = rat_mod(alpha, p)?;
        let m = sys.m;
        let id: Vec<u64> = (0..m * m).map(|i| u64::from(i % (m + 1) == 0)).collect();
        Some(ModOrbit { sys: ms, values: vec![(id, x)] })
    }

    /// `(A_k(alpha), alpha^(q^k)) mod p`; `None` if the prime is unlucky.
    fn at(&mut self, k: u32) -> Option<&(Vec<u64>, u64)> {
        while self.values.len() <= k as usize {
            let (v, x) = self.values.last().unwrap();
            let a = self.sys.eval(*x)?;
            let nv = self.sys.mat_mul(v, &a);
            let nx = pow_mod(*x, self.sys.q as u64, self.sys.p);
            self.values.push((nv, nx));
        }
        Some(&self.values[k as usize])
    }
}

/// Detects constant entries from exact values on a short window and modular
/// values on a longer one.
pub fn detect_structure(sys: &MahlerSystem, alpha: &Rational, opts: &EngineOptions) -> Result<Structure> {
    let m = sys.m;
    let window = exact_window(sys, alpha, opts.k_min, opts.exact_window)?;
    let first = &window[0].1;
    let mut constants: Vec<Option<Rational>> = first.entries().iter().cloned().map(Some).collect();
    for (_, mat, _) in &window[1..] {
        for (e, v) in mat.entries().iter().enumerate() {
            if constants[e].as_ref() != Some(v) {
                constants[e] = None;
            }
        }
    }
    let probe = opts.k_min + 64;
    for p in modular::primes(0, 4) {
        let Some(mut orbit) = ModOrbit::new(sys, alpha, p) else { continue };
        let mut lucky = true;
        for k in opts.k_min..=probe {
            let Some((vals, _)) = orbit.at(k) else {
                lucky = false;
                break;
            };
            let vals = vals.clone();
            for (e, c) in constants.iter_mut().enumerate() {
                if let Some(cv) = c {
                    if rat_mod(cv, p) != Some(vals[e]) {
                        *c = None;
                    }
                }
            }
        }
        if lucky {
            break;
        }
    }
    let variable = (0..m * m).filter(|&e| constants[e].is_none()).collect();
    Ok(Structure { m, variable, constants })
}

/// Column order of a reduced evaluation matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layout {
    /// Same order as [`MonomialBasis`]: exponents first, then `lambda`.
    Standard,
    /// `lambda` outermost, so the columns with `lambda <= d` form a prefix.
    LambdaMajor,
}

/// A reduced evaluation problem for one `(delta1, delta2)` box.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub structure: Structure,
    pub basis: MonomialBasis,
    pub exponents: Vec<Vec<u32>>,
    pub layout: Layout,
}

impl Reduced {
    pub fn new(structure: Structure, delta1: u32, delta2: u32, layout: Layout, max_columns: usize) -> Result<Self> {
        let basis = MonomialBasis::new(structure.variable.len(), delta1, delta2)?;
        let n = basis.len_u64();
        if n > max_columns as u64 {
            return Err(Error::SizeBudgetExceeded { needed: n, budget: max_columns as u64 });
        }
        let exponents = basis.exponents();
        Ok(Reduced { structure, basis, exponents, layout })
    }

    pub fn ncols(&self) -> usize {
        self.basis.len()
    }

    pub fn column(&self, mu_idx: usize, lambda: u32) -> usize {
        let per = self.basis.delta2 as usize + 1;
        match self.layout {
            Layout::Standard => mu_idx * per + lambda as usize,
            Layout::LambdaMajor => lambda as usize * self.exponents.len() + mu_idx,
        }
    }

    /// Row at one orbit point, reduced modulo `p`.
    fn row_mod(&self, vals: &[u64], x: u64, p: u64) -> Vec<u64> {
        let d1 = self.basis.delta1 as usize;
        let pows: Vec<Vec<u64>> = self
            .structure
            .variable
            .iter()
            .map(|&e| {
                let mut v = vec![1 % p; d1 + 1];
                for i in 1..=d1 {
                    v[i] = mul_mod(v[i - 1], vals[e], p);
                }
                v
            })
            .collect();
        let mut xp = vec![1 % p; self.basis.delta2 as usize + 1];
        for i in 1..xp.len() {
            xp[i] = mul_mod(xp[i - 1], x, p);
        }
        let mut row = vec![0u64; self.ncols()];
        for (mi, mu) in self.exponents.iter().enumerate() {
            let mut mv = 1 % p;
            for (v, &d) in mu.iter().enumerate() {
                if d > 0 {
                    mv = mul_mod(mv, pows[v][d as usize], p);
                }
            }
            for (l, &xl) in xp.iter().enumerate() {
                row[self.column(mi, l as u32)] = mul_mod(mv, xl, p);
            }
        }
        row
    }

    /// Exact row at one orbit point.
    pub fn row_exact(&self, value: &Matrix<Rational>, x: &Rational) -> Vec<Rational> {
        let d1 = self.basis.delta1 as usize;
        let pows: Vec<Vec<Rational>> = self
            .structure
            .variable
            .iter()
            .map(|&e| {
                let mut v = vec![Rational::one(); d1 + 1];
                for i in 1..=d1 {
                    v[i] = &v[i - 1] * value.entries()[e].clone();
                }
                v
            })
            .collect();
        let mut xp = vec![Rational::one(); self.basis.delta2 as usize + 1];
        for i in 1..xp.len() {
            xp[i] = &xp[i - 1] * x;
        }
        let mut row = vec![Rational::zero(); self.ncols()];
        for (mi, mu) in self.exponents.iter().enumerate() {
            let mut mv = Rational::one();
            for (v, &d) in mu.iter().enumerate() {
                if d > 0 {
                    mv *= &pows[v][d as usize];
                }
            }
            for (l, xl) in xp.iter().enumerate() {
                row[self.column(mi, l as u32)] = &mv * xl;
            }
        }
        row
    }
}

/// Signals that an entry assumed constant changed along the orbit.
enum RowError {
    Unlucky,
    NotConstant(usize),
}

struct PrimeRun {
    p: u64,
    orbit: ModOrbit,
    echelon: ModEchelon,
}

impl PrimeRun {
    fn add_rows(&mut self, red: &Reduced, ks: std::ops::Range<u32>) -> std::result::Result<(), RowError> {
        for k in ks {
            let (vals, x) = self.orbit.at(k).ok_or(RowError::Unlucky)?.clone();
            for (e, c) in red.structure.constants.iter().enumerate() {
                if let Some(c) = c {
                    if rat_mod(c, self.p) != Some(vals[e]) {
                        return Err(RowError::NotConstant(e));
                    }
                }
            }
            if self.echelon.is_full() {
                continue;
            }
            let row = red.row_mod(&vals, x, self.p);
            self.echelon.insert(row);
        }
        Ok(())
    }
}

/// Result of a stabilized rank computation.
#[derive(Clone, Debug)]
pub struct RankRun {
    pub reduced: Reduced,
    /// Constraint set actually used: `k_min .. k_min + size`.
    pub k_used: Vec<u32>,
    /// Rank of each requested column prefix.
    pub prefix_ranks: Vec<usize>,
    /// Primes whose echelon forms reached the maximal rank.
    echelons: Vec<ModEchelon>,
    next_prime: usize,
}

impl RankRun {
    pub fn rank(&self) -> usize {
        self.echelons.iter().map(ModEchelon::rank).max().unwrap_or(0)
    }

    /// Pivot columns of the best modular echelon form found.
    pub fn pivots(&self) -> Vec<usize> {
        self.echelons.iter().map(ModEchelon::pivots).min().unwrap_or_default()
    }

    /// First prime index not touched by the rank or reconstruction stages.
    pub fn fresh_prime_index(&self) -> usize {
        self.next_prime + 1024
    }
}

/// Grows the constraint set by doubling until the ranks of every requested
/// column prefix are unchanged across two consecutive enlargements.
pub fn stabilized_rank(
    sys: &MahlerSystem,
    alpha: &Rational,
    delta1: u32,
    delta2: u32,
    layout: Layout,
    prefixes: &[usize],
    opts: &EngineOptions,
) -> Result<RankRun> {
    let mut structure = detect_structure(sys, alpha, opts)?;
    'restart: loop {
        let reduced = Reduced::new(structure.clone(), delta1, delta2, layout, opts.max_columns)?;
        let ncols = reduced.ncols();
        let mut runs: Vec<PrimeRun> = Vec::new();
        let mut next_prime = 0usize;
        let mut size = opts.initial_size.max(1);
        let mut done_upto = opts.k_min;
        let mut history: Vec<Vec<usize>> = Vec::new();
        loop {
            let end = opts.k_min + size;
            if end - 1 > opts.max_k {
                return Err(Error::StabilizationFailed { max_k: opts.max_k });
            }
            while runs.len() < opts.rank_primes {
                let p = modular::primes(next_prime, 1)[0];
                next_prime += 1;
                if let Some(orbit) = ModOrbit::new(sys, alpha, p) {
                    let mut run = PrimeRun { p, orbit, echelon: ModEchelon::new(p, ncols) };
                    match run.add_rows(&reduced, opts.k_min..done_upto) {
                        Ok(()) => runs.push(run),
                        Err(RowError::Unlucky) => {}
                        Err(RowError::NotConstant(e)) => {
                            structure.constants[e] = None;
                            structure.variable = (0..structure.m * structure.m).filter(|&i| structure.constants[i].is_none()).collect();
                            continue 'restart;
                        }
                    }
                }
                if next_prime > 64 {
                    return Err(Error::ReconstructionFailed { primes: next_prime });
                }
            }
            let mut i = 0;
            while i < runs.len() {
                match runs[i].add_rows(&reduced, done_upto..end) {
                    Ok(()) => i += 1,
                    Err(RowError::Unlucky) => {
                        runs.remove(i);
                    }
                    Err(RowError::NotConstant(e)) => {
                        structure.constants[e] = None;
                        structure.variable = (0..structure.m * structure.m).filter(|&i| structure.constants[i].is_none()).collect();
                        continue 'restart;
                    }
                }
            }
            if runs.len() < opts.rank_primes {
                continue;
            }
            done_upto = end;
            let ranks: Vec<usize> = prefixes
                .iter()
                .map(|&c| runs.iter().map(|r| r.echelon.prefix_rank(c)).max().unwrap())
                .collect();
            history.push(ranks);
            let full = runs.iter().any(|r| r.echelon.is_full());
            let n = history.len();
            let stable = full || (n >= 3 && history[n - 1] == history[n - 2] && history[n - 2] == history[n - 3]);
            if stable {
                let best = runs.iter().map(|r| r.echelon.rank()).max().unwrap();
                let echelons = runs.into_iter().filter(|r| r.echelon.rank() == best).map(|r| r.echelon).collect();
                return Ok(RankRun {
                    reduced,
                    k_used: (opts.k_min..end).collect(),
                    prefix_ranks: history.pop().unwrap(),
                    echelons,
                    next_prime,
                });
            }
            size *= 2;
        }
    }
}

/// Reduced echelon form over Q of a reduced evaluation matrix.
#[derive(Clone, Debug)]
pub struct QEchelon {
    pub pivots: Vec<usize>,
    pub rows: Vec<Vec<Rational>>,
    pub primes_used: usize,
}

impl QEchelon {
    /// Coordinates of a reduced vector modulo the row space: zero iff the
    /// vector is annihilated by the evaluation matrix.
    pub fn annihilates(&self, v: &[Rational]) -> bool {
        self.rows.iter().all(|r| crate::linalg::dot(r, v).is_zero())
    }
}

fn echelon_for_prime(
    sys: &MahlerSystem,
    alpha: &Rational,
    red: &Reduced,
    ks: &[u32],
    p: u64,
) -> Option<(Vec<usize>, Vec<Vec<u64>>)> {
    let mut run = PrimeRun { p, orbit: ModOrbit::new(sys, alpha, p)?, echelon: ModEchelon::new(p, red.ncols()) };
    let lo = *ks.first()?;
    let hi = *ks.last()? + 1;
    run.add_rows(red, lo..hi).ok()?;
    Some(run.echelon.rref())
}

/// Recovers the reduced echelon form over Q from modular images, adding
/// primes until two consecutive reconstructions agree, then checks the result
/// against one more prime.
pub fn reconstruct(sys: &MahlerSystem, alpha: &Rational, run: &RankRun) -> Result<QEchelon> {
    let red = &run.reduced;
    let target_rank = run.rank();
    let mut target_pivots: Option<Vec<usize>> = None;
    let mut images: Vec<(u64, Vec<Vec<u64>>)> = Vec::new();
    let mut previous: Option<Vec<Vec<Rational>>> = None;
    let mut prime_idx = run.next_prime;
    let limit = prime_idx + 256;
    while prime_idx < limit {
        let p = modular::primes(prime_idx, 1)[0];
        prime_idx += 1;
        let Some((piv, rows)) = echelon_for_prime(sys, alpha, red, &run.k_used, p) else { continue };
        if piv.len() != target_rank {
            continue;
        }
        match &target_pivots {
            None => target_pivots = Some(piv.clone()),
            Some(t) if *t != piv => {
                // a lucky prime yields the lexicographically smallest pivot set
                if piv < *t {
                    target_pivots = Some(piv.clone());
                    images.clear();
                    previous = None;
                } else {
                    continue;
                }
            }
            _ => {}
        }
        images.push((p, rows));
        let current = modular::reconstruct_table(&images);
        if let (Some(cur), Some(prev)) = (&current, &previous) {
            if cur == prev {
                let pivots = target_pivots.clone().unwrap();
                let q = QEchelon { pivots, rows: cur.clone(), primes_used: images.len() };
                if check_against_fresh_prime(sys, alpha, run, &q, &mut prime_idx) {
                    return Ok(q);
                }
            }
        }
        previous = current;
    }
    Err(Error::ReconstructionFailed { primes: images.len() })
}

fn check_against_fresh_prime(sys: &MahlerSystem, alpha: &Rational, run: &RankRun, q: &QEchelon, prime_idx: &mut usize) -> bool {
    for _ in 0..8 {
        let p = modular::primes(*prime_idx, 1)[0];
        *prime_idx += 1;
        let Some((piv, rows)) = echelon_for_prime(sys, alpha, &run.reduced, &run.k_used, p) else { continue };
        if piv != q.pivots {
            continue;
        }
        let ok = rows.iter().zip(&q.rows).all(|(rm, rq)| rm.iter().zip(rq).all(|(&a, b)| rat_mod(b, p) == Some(a)));
        return ok;
    }
    false
}

/// True iff, modulo fresh primes, the row of every `k` in `ks` lies in the
/// row space of `q`, i.e. every kernel vector of `q` vanishes there.
pub fn row_space_contains_mod(
    sys: &MahlerSystem,
    alpha: &Rational,
    red: &Reduced,
    q: &QEchelon,
    ks: &[u32],
    first_prime: usize,
    nprimes: usize,
) -> bool {
    let mut used = 0;
    let mut idx = first_prime;
    while used < nprimes && idx < first_prime + 64 {
        let p = modular::primes(idx, 1)[0];
        idx += 1;
        let Some(mut orbit) = ModOrbit::new(sys, alpha, p) else { continue };
        let Some(rows) = q
            .rows
            .iter()
            .map(|r| r.iter().map(|c| rat_mod(c, p)).collect::<Option<Vec<u64>>>())
            .collect::<Option<Vec<_>>>()
        else {
            continue;
        };
        let mut lucky = true;
        for &k in ks {
            let Some((vals, x)) = orbit.at(k).cloned() else {
                lucky = false;
                break;
            };
            for (e, c) in red.structure.constants.iter().enumerate() {
                if let Some(c) = c {
                    if rat_mod(c, p) != Some(vals[e]) {
                        return false;
                    }
                }
            }
            let mut row = red.row_mod(&vals, x, p);
            for (r, &pc) in rows.iter().zip(&q.pivots) {
                let f = row[pc];
                if f == 0 {
                    continue;
                }
                for (a, &b) in row.iter_mut().zip(r) {
                    *a = modular::sub_mod(*a, mul_mod(f, b, p), p);
                }
            }
            if row.iter().any(|&a| a != 0) {
                return false;
            }
        }
        if lucky {
            used += 1;
        }
    }
    used == nprimes
}

pub fn describe_structure(s: &Structure) -> String {
    let consts: Vec<String> = s
        .constants
        .iter()
        .enumerate()
        .filter_map(|(e, c)| c.as_ref().map(|c| format!("y{}{}={}", e / s.m + 1, e % s.m + 1, format_rational(c))))
        .collect();
    format!("{} varying entries; constant: {}", s.variable.len(), consts.join(", "))
}
