//! Radical inversion in prime bases, digit scrambling and Halton points.
//!
//! Inversion runs entirely in integers: digits are accumulated into a
//! fixed-point numerator over `b^k`, and only the final quotient scaled by
//! `2^32` is converted with [`map_u32_to_unifloat`]. Indices are reduced
//! modulo the largest power of the base that fits into 32 bits, which keeps
//! every intermediate product in range.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::unitfloat::{map_u32_to_unifloat, UnitValue};

/// Number of primes shipped in [`PrimeTable::global`].
pub const PRIME_COUNT: usize = 1000;

/// Tables larger than this many entries are refused.
pub const MAX_TABLE_ENTRIES: u64 = 1 << 16;

/// The first primes together with their largest power below `2^32`.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    primes: Vec<u32>,
    max_powers: Vec<u32>,
}

impl PrimeTable {
    /// Builds the table of the first `count` primes by trial division.
    pub fn new(count: usize) -> Self {
        let mut primes: Vec<u32> = Vec::with_capacity(count);
        let mut candidate = 2u32;
        while primes.len() < count {
            if primes
                .iter()
                .take_while(|&&p| p * p <= candidate)
                .all(|&p| candidate % p != 0)
            {
                primes.push(candidate);
            }
            candidate += 1;
        }
        let max_powers = primes.iter().map(|&p| max_power(p)).collect();
        PrimeTable { primes, max_powers }
    }

    /// Shared table of the first [`PRIME_COUNT`] primes.
    pub fn global() -> &'static PrimeTable {
        static TABLE: OnceLock<PrimeTable> = OnceLock::new();
        TABLE.get_or_init(|| PrimeTable::new(PRIME_COUNT))
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn max_powers(&self) -> &[u32] {
        &self.max_powers
    }

    pub fn prime(&self, index: usize) -> Result<u32> {
        self.primes.get(index).copied().ok_or(Error::PrimeIndex {
            index,
            len: self.primes.len(),
        })
    }

    pub fn index_of(&self, prime: u32) -> Option<usize> {
        self.primes.binary_search(&prime).ok()
    }
}

/// Largest power of `b` that fits into 32 bits.
fn max_power(b: u32) -> u32 {
    let mut power = b;
    while let Some(next) = power.checked_mul(b) {
        power = next;
    }
    power
}

/// A digit base together with the index reduction it needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Base {
    base: u32,
    max_power: u32,
}

impl Base {
    pub fn new(base: u32) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidBase(base));
        }
        Ok(Base {
            base,
            max_power: max_power(base),
        })
    }

    pub fn from_prime_index(index: usize) -> Result<Self> {
        Base::new(PrimeTable::global().prime(index)?)
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.base
    }

    #[inline]
    pub fn max_power(self) -> u32 {
        self.max_power
    }

    /// Plain radical inverse as a 32-bit fixed-point fraction.
    #[inline]
    pub fn inverse_bits(self, i: u32) -> u32 {
        self.inverse_bits_with(i, |d| d)
    }

    #[inline]
    pub fn inverse(self, i: u32) -> UnitValue {
        map_u32_to_unifloat(self.inverse_bits(i))
    }

    /// Radical inverse with every digit passed through `digit_map`, which
    /// must map `[0, b)` into `[0, b)`.
    #[inline]
    pub fn inverse_bits_with(self, i: u32, digit_map: impl Fn(u32) -> u32) -> u32 {
        let b = self.base;
        let mut i = i % self.max_power;
        let mut scale = 1u32;
        let mut result = 0u32;
        loop {
            result = result * b + digit_map(i % b);
            i /= b;
            scale *= b;
            if i == 0 {
                break;
            }
        }
        fixed_point_quotient(result, scale)
    }
}

#[inline]
fn fixed_point_quotient(numerator: u32, denominator: u32) -> u32 {
    (((numerator as u64) << 32) / denominator as u64) as u32
}

/// Radical inverse of `i` in the base of the given prime index.
pub fn radical_inverse(i: u32, prime_index: usize) -> Result<UnitValue> {
    Ok(Base::from_prime_index(prime_index)?.inverse(i))
}

/// Multiplier for linear digit scrambling, `digit -> factor * digit mod b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScrambleFactor {
    base: u32,
    factor: u32,
}

impl ScrambleFactor {
    pub fn new(base: u32, factor: u32) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidBase(base));
        }
        if factor == 0 || factor >= base || gcd(factor, base) != 1 {
            return Err(Error::ScrambleFactor { base, factor });
        }
        Ok(ScrambleFactor { base, factor })
    }

    /// Fallback factor used when no factor file is supplied: `b - 1`.
    pub fn default_for(base: u32) -> Result<Self> {
        ScrambleFactor::new(base, (base - 1).max(1))
    }

    pub fn base(self) -> u32 {
        self.base
    }

    pub fn factor(self) -> u32 {
        self.factor
    }

    #[inline]
    pub fn apply(self, digit: u32) -> u32 {
        // factor < base and digit < base, so the product stays far below 2^32
        self.factor * digit % self.base
    }

    pub fn permutation(self) -> DigitPermutation {
        DigitPermutation {
            map: (0..self.base).map(|d| self.apply(d)).collect(),
        }
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Radical inverse with linear digit scrambling.
pub fn radical_inverse_linscramble(
    i: u32,
    prime_index: usize,
    factor: ScrambleFactor,
) -> Result<UnitValue> {
    let base = Base::from_prime_index(prime_index)?;
    if factor.base() != base.get() {
        return Err(Error::ScrambleFactor {
            base: base.get(),
            factor: factor.factor(),
        });
    }
    Ok(map_u32_to_unifloat(
        base.inverse_bits_with(i, |d| factor.apply(d)),
    ))
}

/// Parses a "base factor" per line file. Blank lines and `#` comments are
/// skipped.
pub fn parse_scramble_factors(text: &str) -> Result<Vec<ScrambleFactor>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parse_err = |message: &str| Error::Parse {
            line: n + 1,
            message: message.to_string(),
        };
        let mut fields = line.split_whitespace();
        let base: u32 = fields
            .next()
            .and_then(|f| f.parse().ok())
            .ok_or_else(|| parse_err("expected base"))?;
        let factor: u32 = fields
            .next()
            .and_then(|f| f.parse().ok())
            .ok_or_else(|| parse_err("expected factor"))?;
        if fields.next().is_some() {
            return Err(parse_err("trailing fields"));
        }
        out.push(ScrambleFactor::new(base, factor).map_err(|e| parse_err(&e.to_string()))?);
    }
    Ok(out)
}

/// A permutation of the digits `0..b`.
#[derive(Clone, PartialEq, Eq)]
pub struct DigitPermutation {
    map: Vec<u32>,
}

impl DigitPermutation {
    pub fn new(map: Vec<u32>) -> Result<Self> {
        if map.len() < 2 {
            return Err(Error::InvalidBase(map.len() as u32));
        }
        if !is_bijection(&map) {
            return Err(Error::NotABijection { len: map.len() });
        }
        Ok(DigitPermutation { map })
    }

    pub fn identity(base: u32) -> Result<Self> {
        DigitPermutation::new((0..base).collect())
    }

    pub fn base(&self) -> u32 {
        self.map.len() as u32
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, digit: u32) -> u32 {
        self.map[digit as usize]
    }
}

impl fmt::Debug for DigitPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("DigitPermutation").field(&self.map).finish()
    }
}

fn is_bijection(values: &[u32]) -> bool {
    let mut seen = vec![false; values.len()];
    values.iter().all(|&v| {
        let slot = seen.get_mut(v as usize);
        match slot {
            Some(s) if !*s => {
                *s = true;
                true
            }
            _ => false,
        }
    })
}

/// Faure's recursive digit permutation for base `b`.
pub fn faure_permutation(b: u32) -> Result<DigitPermutation> {
    if b < 2 {
        return Err(Error::InvalidBase(b));
    }
    Ok(DigitPermutation { map: faure(b) })
}

fn faure(b: u32) -> Vec<u32> {
    if b == 2 {
        return vec![0, 1];
    }
    if b % 2 == 0 {
        let half = faure(b / 2);
        half.iter()
            .map(|&v| 2 * v)
            .chain(half.iter().map(|&v| 2 * v + 1))
            .collect()
    } else {
        let mid = (b - 1) / 2;
        let mut out: Vec<u32> = faure(b - 1)
            .into_iter()
            .map(|v| if v >= mid { v + 1 } else { v })
            .collect();
        out.insert(mid as usize, mid);
        out
    }
}

/// Permutation of `d`-digit groups in base `b` that inverts all `d` digits of
/// a group in one lookup.
#[derive(Debug, Clone)]
pub struct MultiDigitTable {
    perm: DigitPermutation,
    base: Base,
    digits: u32,
    group: u32,
    table: Vec<u32>,
}

/// Builds the `b^d` entry table for `perm`. The entry for a group with digits
/// `(a_{d-1} .. a_0)` holds `(σ(a_0) .. σ(a_{d-1}))`, so that looping over
/// groups reproduces single-digit scrambled inversion.
pub fn tensor_digit_table(perm: &DigitPermutation, d: u32) -> Result<MultiDigitTable> {
    let b = perm.base();
    let too_large = Error::TableTooLarge { base: b, digits: d };
    if d == 0 {
        return Err(too_large);
    }
    let group = (b as u64)
        .checked_pow(d)
        .filter(|&g| g <= MAX_TABLE_ENTRIES)
        .ok_or(too_large)? as u32;
    let table = (0..group)
        .map(|mut v| {
            let mut out = 0;
            for _ in 0..d {
                out = out * b + perm.apply(v % b);
                v /= b;
            }
            out
        })
        .collect();
    Ok(MultiDigitTable {
        perm: perm.clone(),
        base: Base::new(b)?,
        digits: d,
        group,
        table,
    })
}

impl MultiDigitTable {
    pub fn base(&self) -> u32 {
        self.base.get()
    }

    pub fn digits_per_step(&self) -> u32 {
        self.digits
    }

    pub fn entries(&self) -> &[u32] {
        &self.table
    }

    pub fn permutation(&self) -> &DigitPermutation {
        &self.perm
    }

    /// Scrambled radical inverse as 32-bit fixed point, `d` digits per step.
    #[inline]
    pub fn inverse_bits(&self, i: u32) -> u32 {
        let b = self.base.get();
        let group = self.group;
        let mut i = i % self.base.max_power();
        let mut scale = 1u32;
        let mut result = 0u32;
        while i >= group {
            result = result * group + self.table[(i % group) as usize];
            i /= group;
            scale *= group;
        }
        // fewer than d digits left
        while i != 0 {
            result = result * b + self.perm.apply(i % b);
            i /= b;
            scale *= b;
        }
        fixed_point_quotient(result, scale)
    }
}

/// Scrambled radical inverse using a multi-digit table.
#[inline]
pub fn radical_inverse_tabled(i: u32, table: &MultiDigitTable) -> UnitValue {
    map_u32_to_unifloat(table.inverse_bits(i))
}

/// Single-digit scrambled radical inverse with an arbitrary permutation.
pub fn radical_inverse_permuted(i: u32, perm: &DigitPermutation) -> Result<UnitValue> {
    let base = Base::new(perm.base())?;
    Ok(map_u32_to_unifloat(
        base.inverse_bits_with(i, |d| perm.apply(d)),
    ))
}

/// The φ₃ tables used by the pixel-shifted lattice: two and four digits.
pub fn base3_tables() -> &'static (MultiDigitTable, MultiDigitTable) {
    static TABLES: OnceLock<(MultiDigitTable, MultiDigitTable)> = OnceLock::new();
    TABLES.get_or_init(|| {
        let id = DigitPermutation::identity(3).expect("base 3");
        (
            tensor_digit_table(&id, 2).expect("9 entries"),
            tensor_digit_table(&id, 4).expect("81 entries"),
        )
    })
}

/// Faure-scrambled base 5 table with two digits per step.
pub fn base5_faure_table() -> &'static MultiDigitTable {
    static TABLE: OnceLock<MultiDigitTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        tensor_digit_table(&faure_permutation(5).expect("base 5"), 2).expect("25 entries")
    })
}

/// Digit scrambling applied per Halton dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HaltonMode {
    Plain,
    Faure,
    /// Linear scrambling; dimensions without a listed factor use
    /// [`ScrambleFactor::default_for`].
    Linear(Vec<ScrambleFactor>),
}

#[derive(Debug, Clone)]
enum DigitScramble {
    Identity,
    Permutation(DigitPermutation),
    Linear(ScrambleFactor),
}

/// A Halton sequence with per-dimension digit scrambling.
#[derive(Debug, Clone)]
pub struct Halton {
    bases: Vec<Base>,
    scrambles: Vec<DigitScramble>,
}

impl Halton {
    pub fn new(dims: usize, mode: &HaltonMode) -> Result<Self> {
        let primes = PrimeTable::global();
        if dims > primes.len() {
            return Err(Error::Dimensions {
                requested: dims,
                available: primes.len(),
            });
        }
        let bases = primes.primes()[..dims]
            .iter()
            .map(|&p| Base::new(p))
            .collect::<Result<Vec<_>>>()?;
        let scrambles = bases
            .iter()
            .map(|b| {
                Ok(match mode {
                    HaltonMode::Plain => DigitScramble::Identity,
                    HaltonMode::Faure => DigitScramble::Permutation(faure_permutation(b.get())?),
                    HaltonMode::Linear(factors) => DigitScramble::Linear(
                        match factors.iter().find(|f| f.base() == b.get()) {
                            Some(&f) => f,
                            None => ScrambleFactor::default_for(b.get())?,
                        },
                    ),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Halton { bases, scrambles })
    }

    pub fn dims(&self) -> usize {
        self.bases.len()
    }

    /// Component `j` of point `i` as 32-bit fixed point.
    #[inline]
    pub fn component_bits(&self, i: u32, j: usize) -> u32 {
        let base = self.bases[j];
        match &self.scrambles[j] {
            DigitScramble::Identity => base.inverse_bits(i),
            DigitScramble::Permutation(p) => base.inverse_bits_with(i, |d| p.apply(d)),
            DigitScramble::Linear(f) => base.inverse_bits_with(i, |d| f.apply(d)),
        }
    }

    #[inline]
    pub fn component(&self, i: u32, j: usize) -> UnitValue {
        map_u32_to_unifloat(self.component_bits(i, j))
    }

    pub fn point(&self, i: u32) -> Vec<UnitValue> {
        (0..self.dims()).map(|j| self.component(i, j)).collect()
    }
}

/// Point `i` of the `dims`-dimensional Halton sequence.
pub fn halton_point(i: u32, dims: usize, mode: &HaltonMode) -> Result<Vec<UnitValue>> {
    Ok(Halton::new(dims, mode)?.point(i))
}

/// Division by a runtime-constant 32-bit divisor via one wide multiply.
#[derive(Debug, Clone, Copy)]
struct FastDiv {
    divisor: u32,
    magic: u64,
}

impl FastDiv {
    fn new(divisor: u32) -> Self {
        debug_assert!(divisor >= 2);
        FastDiv {
            divisor,
            magic: u64::MAX / divisor as u64 + 1,
        }
    }

    #[inline]
    fn div_rem(self, n: u32) -> (u32, u32) {
        let q = ((self.magic as u128 * n as u128) >> 64) as u32;
        (q, n - q * self.divisor)
    }
}

#[derive(Debug, Clone)]
struct TabledDim {
    base: u32,
    max_power: u32,
    group: FastDiv,
    digit: FastDiv,
    table: Vec<u32>,
    perm: Vec<u32>,
}

/// Linearly scrambled Halton with multi-digit tables and division replaced
/// by multiplication: the table-driven baseline the lattice samplers are
/// benchmarked against.
#[derive(Debug, Clone)]
pub struct TabledHalton {
    dims: Vec<TabledDim>,
}

impl TabledHalton {
    /// Largest table per dimension.
    pub const TABLE_ENTRIES: u64 = 4096;

    pub fn new(dims: usize, factors: &[ScrambleFactor]) -> Result<Self> {
        let primes = PrimeTable::global();
        if dims > primes.len() {
            return Err(Error::Dimensions {
                requested: dims,
                available: primes.len(),
            });
        }
        let dims = primes.primes()[..dims]
            .iter()
            .map(|&b| {
                let factor = match factors.iter().find(|f| f.base() == b) {
                    Some(&f) => f,
                    None => ScrambleFactor::default_for(b)?,
                };
                let perm = factor.permutation();
                let mut d = 1;
                while (b as u64).pow(d + 1) <= Self::TABLE_ENTRIES {
                    d += 1;
                }
                let tabled = tensor_digit_table(&perm, d)?;
                Ok(TabledDim {
                    base: b,
                    max_power: max_power(b),
                    group: FastDiv::new(tabled.group),
                    digit: FastDiv::new(b),
                    table: tabled.table,
                    perm: perm.map,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TabledHalton { dims })
    }

    pub fn dims(&self) -> usize {
        self.dims.len()
    }

    #[inline]
    pub fn component_bits(&self, i: u32, j: usize) -> u32 {
        let dim = &self.dims[j];
        let group = dim.group.divisor;
        let mut i = i % dim.max_power;
        let mut scale = 1u32;
        let mut result = 0u32;
        while i >= group {
            let (q, r) = dim.group.div_rem(i);
            result = result * group + dim.table[r as usize];
            i = q;
            scale *= group;
        }
        while i != 0 {
            let (q, r) = dim.digit.div_rem(i);
            result = result * dim.base + dim.perm[r as usize];
            i = q;
            scale *= dim.base;
        }
        fixed_point_quotient(result, scale)
    }

    #[inline]
    pub fn component(&self, i: u32, j: usize) -> UnitValue {
        map_u32_to_unifloat(self.component_bits(i, j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prime_index(p: u32) -> usize {
        PrimeTable::global().index_of(p).unwrap()
    }

    #[test]
    fn prime_table_invariants() {
        let t = PrimeTable::global();
        assert_eq!(t.len(), 1000);
        assert_eq!(t.primes()[0], 2);
        assert_eq!(t.primes()[999], 7919);
        assert!(t.primes().windows(2).all(|w| w[0] < w[1]));
        for (&p, &m) in t.primes().iter().zip(t.max_powers()) {
            assert!((2..p).take_while(|d| d * d <= p).all(|d| p % d != 0));
            assert!((m as u64) * (p as u64) > u32::MAX as u64);
            let mut x = m;
            while x % p == 0 {
                x /= p;
            }
            assert_eq!(x, 1);
        }
        assert_eq!(t.max_powers()[0], 1 << 31);
        assert_eq!(t.max_powers()[1], 3486784401);
    }

    #[test]
    fn radical_inverse_examples() {
        assert_eq!(radical_inverse(0, 4).unwrap().get(), 0.0);
        assert_eq!(radical_inverse(1, prime_index(2)).unwrap().get(), 0.5);
        let v = radical_inverse(5, prime_index(3)).unwrap().to_f64();
        assert!((v - 7.0 / 9.0).abs() <= 2f64.powi(-24));
        assert_eq!(radical_inverse(6, prime_index(2)).unwrap().get(), 0.375);
        assert!(radical_inverse(1, 1000).is_err());
    }

    #[test]
    fn linscramble_examples() {
        let p5 = prime_index(5);
        let f = ScrambleFactor::new(5, 3).unwrap();
        assert_eq!(radical_inverse_linscramble(1, p5, f).unwrap().to_f64(), map_u32_to_unifloat(fixed_point_quotient(3, 5)).to_f64());
        assert!((radical_inverse_linscramble(1, p5, f).unwrap().to_f64() - 0.6).abs() < 1e-7);
        assert_eq!(radical_inverse_linscramble(0, p5, f).unwrap().get(), 0.0);
        let id = ScrambleFactor::new(5, 1).unwrap();
        for i in [1u32, 7, 123456, u32::MAX] {
            assert_eq!(
                radical_inverse_linscramble(i, p5, id).unwrap(),
                radical_inverse(i, p5).unwrap()
            );
        }
        assert!(radical_inverse_linscramble(1, p5, ScrambleFactor::new(7, 3).unwrap()).is_err());
    }

    #[test]
    fn scramble_factor_validation() {
        assert!(ScrambleFactor::new(5, 0).is_err());
        assert!(ScrambleFactor::new(5, 5).is_err());
        assert!(ScrambleFactor::new(4, 2).is_err());
        assert_eq!(ScrambleFactor::default_for(2).unwrap().factor(), 1);
        assert_eq!(ScrambleFactor::default_for(7).unwrap().factor(), 6);
    }

    #[test]
    fn factor_file() {
        let f = parse_scramble_factors("# base factor\n3 2\n\n5 3 # comment\n").unwrap();
        assert_eq!(f, vec![ScrambleFactor::new(3, 2).unwrap(), ScrambleFactor::new(5, 3).unwrap()]);
        match parse_scramble_factors("3 2\n5 5\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(parse_scramble_factors("3\n").is_err());
    }

    #[test]
    fn faure_examples() {
        assert_eq!(faure_permutation(2).unwrap().as_slice(), &[0, 1]);
        assert_eq!(faure_permutation(3).unwrap().as_slice(), &[0, 1, 2]);
        assert_eq!(faure_permutation(4).unwrap().as_slice(), &[0, 2, 1, 3]);
        assert_eq!(faure_permutation(5).unwrap().as_slice(), &[0, 3, 2, 1, 4]);
        assert_eq!(faure_permutation(6).unwrap().as_slice(), &[0, 2, 4, 1, 3, 5]);
        assert!(faure_permutation(1).is_err());
        for b in 2..=64 {
            let p = faure_permutation(b).unwrap();
            assert!(is_bijection(p.as_slice()), "b = {b}");
            assert_eq!(p.apply(0), 0);
        }
    }

    #[test]
    fn tensor_table_examples() {
        let id3 = DigitPermutation::identity(3).unwrap();
        let t = tensor_digit_table(&id3, 2).unwrap();
        assert_eq!(t.entries(), &[0, 3, 6, 1, 4, 7, 2, 5, 8]);
        let id2 = DigitPermutation::identity(2).unwrap();
        assert_eq!(tensor_digit_table(&id2, 1).unwrap().entries(), &[0, 1]);
        assert!(tensor_digit_table(&id3, 11).is_err());
        assert!(tensor_digit_table(&id3, 0).is_err());
        assert!(is_bijection(base5_faure_table().entries()));
    }

    #[test]
    fn tabled_examples() {
        let (t9, t81) = base3_tables();
        for t in [t9, t81] {
            assert_eq!(radical_inverse_tabled(0, t).get(), 0.0);
            assert_eq!(radical_inverse_tabled(5, t), radical_inverse(5, 1).unwrap());
            let v = radical_inverse_tabled(8, t).to_f64();
            assert!((v - 8.0 / 9.0).abs() <= 2f64.powi(-24));
        }
    }

    /// Digit-by-digit reference with σ applied to each digit.
    fn scrambled_reference(i: u32, perm: &[u32]) -> u32 {
        let b = perm.len() as u64;
        let mut i = i as u64 % max_power(b as u32) as u64;
        let (mut num, mut den) = (0u64, 1u64);
        while i > 0 {
            num = num * b + perm[(i % b) as usize] as u64;
            den *= b;
            i /= b;
        }
        ((num << 32) / den) as u32
    }

    #[test]
    fn faure_base5_table_matches_single_digit() {
        let t = base5_faure_table();
        let sigma = faure_permutation(5).unwrap();
        for i in 0..5u32.pow(6) {
            assert_eq!(t.inverse_bits(i), scrambled_reference(i, sigma.as_slice()), "i = {i}");
        }
        // odd digit counts exercise the single-digit remainder
        for i in [5u32.pow(12), 5u32.pow(13) - 1, u32::MAX] {
            assert_eq!(t.inverse_bits(i), scrambled_reference(i, sigma.as_slice()));
        }
    }

    #[test]
    fn van_der_corput_stratified() {
        let mut hit = vec![0u32; 1 << 10];
        for i in 0..(1u32 << 10) {
            let v = radical_inverse(i, 0).unwrap().to_f64();
            hit[(v * 1024.0) as usize] += 1;
        }
        assert!(hit.iter().all(|&h| h == 1));
    }

    #[test]
    fn halton_examples() {
        let p = halton_point(1, 2, &HaltonMode::Plain).unwrap();
        assert_eq!(p[0].get(), 0.5);
        assert_eq!(p[1], map_u32_to_unifloat(fixed_point_quotient(1, 3)));
        let p = halton_point(5, 2, &HaltonMode::Plain).unwrap();
        assert_eq!(p[0].get(), 0.625);
        assert!((p[1].to_f64() - 7.0 / 9.0).abs() <= 2f64.powi(-24));
        for mode in [HaltonMode::Plain, HaltonMode::Faure, HaltonMode::Linear(vec![])] {
            assert!(halton_point(0, 16, &mode).unwrap().iter().all(|v| v.get() == 0.0));
        }
        assert!(halton_point(0, 1001, &HaltonMode::Plain).is_err());
    }

    #[test]
    fn tabled_halton_matches_linear_halton() {
        let h = Halton::new(32, &HaltonMode::Linear(vec![])).unwrap();
        let t = TabledHalton::new(32, &[]).unwrap();
        let mut i = 0u32;
        for _ in 0..20_000 {
            for j in 0..32 {
                assert_eq!(h.component_bits(i, j), t.component_bits(i, j), "i = {i}, j = {j}");
            }
            i = i.wrapping_mul(2654435761).wrapping_add(12345);
        }
    }

    #[test]
    fn fast_div_exact() {
        for d in [2u32, 3, 7, 81, 4096, 7919, 65521] {
            let f = FastDiv::new(d);
            for n in [0u32, 1, d - 1, d, d + 1, 1 << 31, u32::MAX, u32::MAX - 1, 123456789] {
                assert_eq!(f.div_rem(n), (n / d, n % d), "{n} / {d}");
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn base3_tables_equal_single_digit(i: u32) {
                let (t9, t81) = base3_tables();
                let plain = Base::new(3).unwrap().inverse_bits(i);
                prop_assert_eq!(t9.inverse_bits(i), plain);
                prop_assert_eq!(t81.inverse_bits(i), plain);
            }

            #[test]
            fn inversions_below_one(i: u32, idx in 0usize..1000) {
                prop_assert!(radical_inverse(i, idx).unwrap().get() < 1.0);
            }

            #[test]
            fn faure_tables_are_bijections(idx in 0usize..12, d in 1u32..4) {
                let b = PrimeTable::global().primes()[idx];
                if (b as u64).pow(d) <= MAX_TABLE_ENTRIES {
                    let t = tensor_digit_table(&faure_permutation(b).unwrap(), d).unwrap();
                    prop_assert!(is_bijection(t.entries()));
                }
            }
        }
    }
}
