//! Bit-packed binary words, fixed-width block keys and sliding-window
//! occurrence counting.
//!
//! Positions are 0-based. A block of length `ℓ ≤ 63` starting at position `i`
//! is encoded as an integer whose bit `j` is the symbol at position `i + j`,
//! so `w[i:i+ℓ)` maps to `Σ_j w[i+j]·2^j`.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Longest block that fits a fixed-width key.
pub const MAX_BLOCK_LENGTH: usize = 63;

/// Above this block length counts live in an ordered map instead of a
/// directly indexed array.
pub const DENSE_LIMIT: usize = 24;

/// A finite binary word, packed 64 symbols per `u64` (position `k` is bit
/// `k % 64` of limb `k / 64`).
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Word {
    limbs: Vec<u64>,
    len: usize,
}

impl Word {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(symbols: usize) -> Self {
        Word {
            limbs: Vec::with_capacity(symbols.div_ceil(64)),
            len: 0,
        }
    }

    /// `symbol` repeated `n` times.
    pub fn constant(symbol: u8, n: usize) -> Self {
        assert!(symbol <= 1, "symbol must be 0 or 1");
        let fill = if symbol == 1 { u64::MAX } else { 0 };
        let mut limbs = vec![fill; n.div_ceil(64)];
        if symbol == 1 && !n.is_multiple_of(64) {
            if let Some(last) = limbs.last_mut() {
                *last = (1u64 << (n % 64)) - 1;
            }
        }
        Word { limbs, len: n }
    }

    /// Builds a word from a slice of symbols; anything but 0 or 1 is rejected.
    pub fn from_symbols(symbols: &[u8]) -> Result<Self> {
        let mut w = Word::with_capacity(symbols.len());
        for (offset, &s) in symbols.iter().enumerate() {
            if s > 1 {
                return Err(Error::InvalidSymbol { offset, byte: s });
            }
            w.push(s);
        }
        Ok(w)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Symbol at position `i`. Panics when `i >= len`.
    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        assert!(i < self.len, "index {i} out of bounds for word of length {}", self.len);
        ((self.limbs[i / 64] >> (i % 64)) & 1) as u8
    }

    /// Appends one symbol. Panics on anything other than 0 or 1.
    #[inline]
    pub fn push(&mut self, symbol: u8) {
        assert!(symbol <= 1, "symbol must be 0 or 1");
        if self.len.is_multiple_of(64) {
            self.limbs.push(0);
        }
        if symbol == 1 {
            self.limbs[self.len / 64] |= 1u64 << (self.len % 64);
        }
        self.len += 1;
    }

    pub fn try_push(&mut self, symbol: u8) -> Result<()> {
        if symbol > 1 {
            return Err(Error::InvalidSymbol {
                offset: self.len,
                byte: symbol,
            });
        }
        self.push(symbol);
        Ok(())
    }

    /// Encoded block `w[start : start+len)`, `len ≤ 63`. Panics when the
    /// block runs past the end of the word.
    #[inline]
    pub fn block(&self, start: usize, len: usize) -> u64 {
        assert!(len <= MAX_BLOCK_LENGTH);
        assert!(
            start + len <= self.len,
            "block [{start}, {}) exceeds word of length {}",
            start + len,
            self.len
        );
        if len == 0 {
            return 0;
        }
        let limb = start / 64;
        let offset = start % 64;
        let mut bits = self.limbs[limb] >> offset;
        if offset + len > 64 {
            bits |= self.limbs[limb + 1] << (64 - offset);
        }
        bits & mask(len)
    }

    /// The sub-word `w[start:end)`. Panics when the range exceeds the word.
    pub fn slice(&self, start: usize, end: usize) -> Word {
        assert!(start <= end && end <= self.len, "slice [{start}, {end}) out of bounds");
        let mut out = Word::with_capacity(end - start);
        let mut i = start;
        while i < end {
            let take = (end - i).min(MAX_BLOCK_LENGTH);
            out.extend_block(self.block(i, take), take);
            i += take;
        }
        out
    }

    /// Appends the `len` low bits of an encoded block.
    pub fn extend_block(&mut self, block: u64, len: usize) {
        for j in 0..len {
            self.push(((block >> j) & 1) as u8);
        }
    }

    pub fn reversed(&self) -> Word {
        (0..self.len).rev().map(|i| self.get(i)).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn count_ones(&self) -> usize {
        self.limbs.iter().map(|l| l.count_ones() as usize).sum()
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        self.len <= other.len && *self == other.slice(0, self.len)
    }
}

#[inline]
pub(crate) fn mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

impl FromIterator<u8> for Word {
    fn from_iter<I: IntoIterator<Item = u8>>(iter: I) -> Self {
        let mut w = Word::new();
        for s in iter {
            w.push(s);
        }
        w
    }
}

impl Extend<u8> for Word {
    fn extend<I: IntoIterator<Item = u8>>(&mut self, iter: I) {
        for s in iter {
            self.push(s);
        }
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut w = Word::with_capacity(s.len());
        for (offset, byte) in s.bytes().enumerate() {
            match byte {
                b'0' => w.push(0),
                b'1' => w.push(1),
                _ => return Err(Error::InvalidSymbol { offset, byte }),
            }
        }
        Ok(w)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.iter().map(|b| if b == 1 { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len <= 128 {
            write!(f, "Word(\"{self}\")")
        } else {
            write!(f, "Word(len={})", self.len)
        }
    }
}

/// A fixed-width block key together with its length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block {
    value: u64,
    len: u8,
}

impl Block {
    pub fn encode(u: &Word) -> Result<Block> {
        if u.len() > MAX_BLOCK_LENGTH {
            return Err(Error::BlockLength {
                ell: u.len(),
                len: u.len(),
                min: 0,
                max: MAX_BLOCK_LENGTH,
            });
        }
        Ok(Block {
            value: u.block(0, u.len()),
            len: u.len() as u8,
        })
    }

    pub fn from_raw(value: u64, len: usize) -> Block {
        assert!(len <= MAX_BLOCK_LENGTH && value <= mask(len));
        Block {
            value,
            len: len as u8,
        }
    }

    pub fn decode(&self) -> Word {
        let mut w = Word::with_capacity(self.len as usize);
        w.extend_block(self.value, self.len as usize);
        w
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

/// Number of positions `i` with `w[i:i+|u|) = u`.
pub fn occurrences(w: &Word, u: &Word) -> Result<u64> {
    if u.is_empty() {
        return Err(Error::EmptyPattern);
    }
    if u.len() > w.len() {
        return Ok(0);
    }
    let k = u.len();
    let windows = w.len() - k + 1;
    if k <= MAX_BLOCK_LENGTH {
        let target = u.block(0, k);
        Ok((0..windows).filter(|&i| w.block(i, k) == target).count() as u64)
    } else {
        Ok((0..windows)
            .filter(|&i| (0..k).all(|j| w.get(i + j) == u.get(j)))
            .count() as u64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum CountTable {
    Dense(Vec<u64>),
    Sparse(BTreeMap<u64, u64>),
}

/// Occurrence counts of every length-ℓ block over the sliding windows of a
/// word. Counts are exact integers; `total` is the number of windows seen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockCounts {
    block_length: usize,
    table: CountTable,
    total: u64,
}

impl BlockCounts {
    /// Empty table for blocks of length `block_length` (1..=63).
    pub fn new(block_length: usize) -> Result<Self> {
        if !(1..=MAX_BLOCK_LENGTH).contains(&block_length) {
            return Err(Error::BlockLength {
                ell: block_length,
                len: block_length,
                min: 1,
                max: MAX_BLOCK_LENGTH,
            });
        }
        let table = if block_length <= DENSE_LIMIT {
            CountTable::Dense(vec![0; 1usize << block_length])
        } else {
            CountTable::Sparse(BTreeMap::new())
        };
        Ok(BlockCounts {
            block_length,
            table,
            total: 0,
        })
    }

    pub fn block_length(&self) -> usize {
        self.block_length
    }

    /// Σ of all counts.
    pub fn total(&self) -> u64 {
        self.total
    }

    #[inline]
    pub fn get(&self, block: u64) -> u64 {
        match &self.table {
            CountTable::Dense(v) => v.get(block as usize).copied().unwrap_or(0),
            CountTable::Sparse(m) => m.get(&block).copied().unwrap_or(0),
        }
    }

    pub fn count_of(&self, u: &Word) -> Result<u64> {
        if u.len() != self.block_length {
            return Err(Error::LengthMismatch(u.len(), self.block_length));
        }
        Ok(self.get(u.block(0, u.len())))
    }

    #[inline]
    pub fn record(&mut self, block: u64) {
        self.add(block, 1);
    }

    #[inline]
    fn add(&mut self, block: u64, by: u64) {
        debug_assert!(block <= mask(self.block_length));
        match &mut self.table {
            CountTable::Dense(v) => v[block as usize] += by,
            CountTable::Sparse(m) => *m.entry(block).or_insert(0) += by,
        }
        self.total += by;
    }

    /// Non-zero entries in increasing key order.
    pub fn iter_nonzero(&self) -> Box<dyn Iterator<Item = (u64, u64)> + '_> {
        match &self.table {
            CountTable::Dense(v) => Box::new(
                v.iter()
                    .enumerate()
                    .filter(|(_, &c)| c > 0)
                    .map(|(k, &c)| (k as u64, c)),
            ),
            CountTable::Sparse(m) => Box::new(m.iter().filter(|(_, &c)| c > 0).map(|(&k, &c)| (k, c))),
        }
    }

    /// Number of distinct blocks that occur.
    pub fn distinct(&self) -> usize {
        self.iter_nonzero().count()
    }

    /// Exact integer merge of two counters over the same block length.
    pub fn merge(&mut self, other: &BlockCounts) -> Result<()> {
        if other.block_length != self.block_length {
            return Err(Error::LengthMismatch(other.block_length, self.block_length));
        }
        for (k, c) in other.iter_nonzero() {
            self.add(k, c);
        }
        Ok(())
    }

    /// Records the window formed by `recent_suffix` (the last ℓ−1 symbols
    /// already scanned) followed by `next_symbol`.
    pub fn extend(&mut self, next_symbol: u8, recent_suffix: &Word) -> Result<()> {
        let expected = self.block_length - 1;
        if recent_suffix.len() != expected {
            return Err(Error::SuffixLength {
                got: recent_suffix.len(),
                expected,
            });
        }
        if next_symbol > 1 {
            return Err(Error::InvalidSymbol {
                offset: expected,
                byte: next_symbol,
            });
        }
        let block = recent_suffix.block(0, expected) | ((next_symbol as u64) << expected);
        self.record(block);
        Ok(())
    }
}

/// Counts of every length-ℓ block of `w`; requires `1 ≤ ℓ ≤ |w|`, `ℓ ≤ 63`.
pub fn block_counts(w: &Word, ell: usize) -> Result<BlockCounts> {
    if ell == 0 || ell > w.len() || ell > MAX_BLOCK_LENGTH {
        return Err(Error::BlockLength {
            ell,
            len: w.len(),
            min: 1,
            max: w.len().min(MAX_BLOCK_LENGTH),
        });
    }
    let mut counter = BlockCounter::new(ell)?;
    counter.push_word(w);
    Ok(counter.into_counts())
}

/// Functional form of [`BlockCounts::extend`].
pub fn extend_counts(counts: &BlockCounts, next_symbol: u8, recent_suffix: &Word) -> Result<BlockCounts> {
    let mut out = counts.clone();
    out.extend(next_symbol, recent_suffix)?;
    Ok(out)
}

/// Streaming counter: feed symbols one at a time, read the counts of the
/// prefix scanned so far at any point.
#[derive(Clone, Debug)]
pub struct BlockCounter {
    counts: BlockCounts,
    window: u64,
    scanned: usize,
}

impl BlockCounter {
    pub fn new(block_length: usize) -> Result<Self> {
        Ok(BlockCounter {
            counts: BlockCounts::new(block_length)?,
            window: 0,
            scanned: 0,
        })
    }

    #[inline]
    pub fn push(&mut self, symbol: u8) {
        debug_assert!(symbol <= 1);
        let ell = self.counts.block_length;
        self.window = (self.window >> 1) | ((symbol as u64) << (ell - 1));
        self.scanned += 1;
        if self.scanned >= ell {
            self.counts.record(self.window);
        }
    }

    pub fn push_word(&mut self, w: &Word) {
        for i in 0..w.len() {
            self.push(w.get(i));
        }
    }

    /// Symbols consumed so far.
    pub fn scanned(&self) -> usize {
        self.scanned
    }

    pub fn counts(&self) -> &BlockCounts {
        &self.counts
    }

    pub fn into_counts(self) -> BlockCounts {
        self.counts
    }
}

/// Parses the ASCII bit-stream format: `'0'`/`'1'` bytes with at most one
/// trailing newline.
pub fn parse_bitstream(bytes: &[u8]) -> Result<Word> {
    let body = bytes.strip_suffix(b"\n").unwrap_or(bytes);
    let mut w = Word::with_capacity(body.len());
    for (offset, &byte) in body.iter().enumerate() {
        match byte {
            b'0' => w.push(0),
            b'1' => w.push(1),
            _ => return Err(Error::InvalidSymbol { offset, byte }),
        }
    }
    Ok(w)
}

pub fn read_bits(path: impl AsRef<Path>) -> Result<Word> {
    parse_bitstream(&std::fs::read(path)?)
}

pub fn write_bits(path: impl AsRef<Path>, w: &Word) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    let bytes: Vec<u8> = w.iter().map(|b| b'0' + b).collect();
    out.write_all(&bytes)?;
    out.flush()?;
    Ok(())
}
