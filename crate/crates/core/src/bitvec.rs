//! Fixed-universe bit-vectors over edge IDs.
//!
//! A vector is stored either as plain 64-bit words or as a word-aligned
//! run-length token stream. Tokens are encoded directly as words so the
//! in-memory payload is exactly what gets written to disk:
//!
//! * fill token: top bit set, next bit is the fill value, low 62 bits are the
//!   run length in words;
//! * literal token: a zero marker word followed by the raw literal word.
//!
//! Vectors are kept in canonical form (maximal fills, no literal that could
//! be a fill, representation picked by [`CompressedBitVector::from_plain_words`]),
//! so structural equality coincides with equality of the bit sets. The one
//! exception is [`CompressedBitVector::from_positions_plain`], which forces
//! the plain form.

use std::fmt;

use crate::error::{Error, Result};

const FILL_FLAG: u64 = 1 << 63;
const FILL_VALUE: u64 = 1 << 62;
const RUN_MASK: u64 = FILL_VALUE - 1;
const LITERAL_MARKER: u64 = 0;

/// Serialized header: tag, universe, ones, payload word count.
pub const HEADER_BYTES: usize = 1 + 8 + 8 + 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Representation {
    Plain = 0,
    RunLength = 1,
}

impl Representation {
    fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            0 => Some(Self::Plain),
            1 => Some(Self::RunLength),
            _ => None,
        }
    }
}

/// Number of 64-bit words needed for `universe` bits.
pub fn word_count(universe: u64) -> usize {
    universe.div_ceil(64) as usize
}

fn tail_mask(universe: u64) -> u64 {
    match universe % 64 {
        0 => !0,
        r => (1u64 << r) - 1,
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct CompressedBitVector {
    universe: u64,
    ones: u64,
    repr: Representation,
    payload: Vec<u64>,
}

impl fmt::Debug for CompressedBitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CompressedBitVector")
            .field("universe", &self.universe)
            .field("ones", &self.ones)
            .field("repr", &self.repr)
            .field("payload_words", &self.payload.len())
            .finish()
    }
}

impl CompressedBitVector {
    /// An all-zero vector.
    pub fn empty(universe: u64) -> Self {
        let mut b = RleBuilder::new(universe);
        b.fill(false, word_count(universe) as u64);
        b.finish_any()
    }

    /// Builds a vector with exactly `positions` set. Positions must be
    /// strictly ascending and below `universe`.
    pub fn from_positions(positions: &[u64], universe: u64) -> Result<Self> {
        Ok(Self::from_plain_words(
            positions_to_words(positions, universe)?,
            universe,
        ))
    }

    /// Like [`Self::from_positions`] but never run-length encodes.
    pub fn from_positions_plain(positions: &[u64], universe: u64) -> Result<Self> {
        let words = positions_to_words(positions, universe)?;
        let ones = positions.len() as u64;
        Ok(Self {
            universe,
            ones,
            repr: Representation::Plain,
            payload: words,
        })
    }

    /// Picks the run-length form iff its payload is at most half the plain
    /// word count. Bits beyond `universe` are cleared.
    pub fn from_plain_words(mut words: Vec<u64>, universe: u64) -> Self {
        let n = word_count(universe);
        words.resize(n, 0);
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(universe);
        }
        let mut b = RleBuilder::new(universe);
        for &w in &words {
            b.word(w);
        }
        if b.fits_compressed() {
            b.finish()
        } else {
            let ones = words.iter().map(|w| w.count_ones() as u64).sum();
            Self {
                universe,
                ones,
                repr: Representation::Plain,
                payload: words,
            }
        }
    }

    /// Representation choice over a full word sequence (universe = 64 * len).
    pub fn choose_representation(words: &[u64]) -> Self {
        Self::from_plain_words(words.to_vec(), words.len() as u64 * 64)
    }

    pub fn universe_size(&self) -> u64 {
        self.universe
    }

    pub fn representation(&self) -> Representation {
        self.repr
    }

    pub fn count_ones(&self) -> u64 {
        self.ones
    }

    pub fn is_empty(&self) -> bool {
        self.ones == 0
    }

    /// Raw payload words (plain words or encoded tokens).
    pub fn payload(&self) -> &[u64] {
        &self.payload
    }

    pub fn contains(&self, position: u64) -> bool {
        if position >= self.universe {
            return false;
        }
        let target = position / 64;
        let mut at = 0u64;
        let mut c = RunCursor::new(self);
        while let Some(run) = c.peek() {
            match run {
                Run::Fill { ones, words } => {
                    if target < at + words {
                        return ones;
                    }
                    at += words;
                    c.advance(words);
                }
                Run::Literal(w) => {
                    if target == at {
                        return w >> (position % 64) & 1 == 1;
                    }
                    at += 1;
                    c.advance(1);
                }
            }
        }
        false
    }

    /// Fully decoded plain words.
    pub fn decode_words(&self) -> Vec<u64> {
        if self.repr == Representation::Plain {
            return self.payload.clone();
        }
        let mut out = Vec::with_capacity(word_count(self.universe));
        let mut c = RunCursor::new(self);
        while let Some(run) = c.peek() {
            match run {
                Run::Fill { ones, words } => {
                    let v = if ones { !0 } else { 0 };
                    out.extend(std::iter::repeat_n(v, words as usize));
                    c.advance(words);
                }
                Run::Literal(w) => {
                    out.push(w);
                    c.advance(1);
                }
            }
        }
        if let Some(last) = out.last_mut() {
            *last &= tail_mask(self.universe);
        }
        out
    }

    /// Same bits, plain representation.
    pub fn to_plain(&self) -> Self {
        Self {
            universe: self.universe,
            ones: self.ones,
            repr: Representation::Plain,
            payload: self.decode_words(),
        }
    }

    pub fn iter_ones(&self) -> Ones<'_> {
        Ones {
            cursor: RunCursor::new(self),
            universe: self.universe,
            next_word: 0,
            base: 0,
            bits: 0,
            fill: None,
        }
    }

    fn check_universe(&self, other: &Self) -> Result<()> {
        if self.universe != other.universe {
            return Err(Error::UniverseMismatch {
                left: self.universe,
                right: other.universe,
            });
        }
        Ok(())
    }

    /// Bitwise AND. Run-length inputs are processed a run at a time.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_universe(other)?;
        if self.repr == Representation::Plain && other.repr == Representation::Plain {
            let words = self.payload.iter().zip(&other.payload).map(|(a, b)| a & b).collect();
            return Ok(Self::from_plain_words(words, self.universe));
        }
        let mut b = RleBuilder::new(self.universe);
        let mut ca = RunCursor::new(self);
        let mut cb = RunCursor::new(other);
        while let (Some(ra), Some(rb)) = (ca.peek(), cb.peek()) {
            match (ra, rb) {
                (Run::Fill { ones: false, words }, _) => {
                    b.fill(false, words);
                    ca.advance(words);
                    cb.skip(words);
                }
                (_, Run::Fill { ones: false, words }) => {
                    b.fill(false, words);
                    cb.advance(words);
                    ca.skip(words);
                }
                (Run::Fill { words: n, .. }, Run::Fill { words: m, .. }) => {
                    let k = n.min(m);
                    b.fill(true, k);
                    ca.advance(k);
                    cb.advance(k);
                }
                (Run::Fill { .. }, Run::Literal(w)) | (Run::Literal(w), Run::Fill { .. }) => {
                    b.word(w);
                    ca.advance(1);
                    cb.advance(1);
                }
                (Run::Literal(x), Run::Literal(y)) => {
                    b.word(x & y);
                    ca.advance(1);
                    cb.advance(1);
                }
            }
        }
        Ok(b.finish_any())
    }

    pub fn intersect3(a: &Self, b: &Self, c: &Self) -> Result<Self> {
        a.check_universe(b)?;
        a.check_universe(c)?;
        if a.is_empty() || b.is_empty() || c.is_empty() {
            return Ok(Self::empty(a.universe));
        }
        a.intersect(b)?.intersect(c)
    }

    /// True iff the intersection is non-empty; stops at the first common bit.
    pub fn intersects(&self, other: &Self) -> Result<bool> {
        self.check_universe(other)?;
        if self.is_empty() || other.is_empty() {
            return Ok(false);
        }
        let mut ca = RunCursor::new(self);
        let mut cb = RunCursor::new(other);
        while let (Some(ra), Some(rb)) = (ca.peek(), cb.peek()) {
            match (ra, rb) {
                (Run::Fill { ones: false, words }, _) => {
                    ca.advance(words);
                    cb.skip(words);
                }
                (_, Run::Fill { ones: false, words }) => {
                    cb.advance(words);
                    ca.skip(words);
                }
                (Run::Fill { .. }, Run::Fill { .. }) => return Ok(true),
                (Run::Fill { .. }, Run::Literal(w)) | (Run::Literal(w), Run::Fill { .. }) => {
                    if w != 0 {
                        return Ok(true);
                    }
                    ca.advance(1);
                    cb.advance(1);
                }
                (Run::Literal(x), Run::Literal(y)) => {
                    if x & y != 0 {
                        return Ok(true);
                    }
                    ca.advance(1);
                    cb.advance(1);
                }
            }
        }
        Ok(false)
    }

    /// ORs this vector into a dense word buffer of the same universe and
    /// returns the inclusive range of words it touched, if any.
    pub fn or_into(&self, dense: &mut [u64]) -> Option<(usize, usize)> {
        debug_assert_eq!(dense.len(), word_count(self.universe));
        if self.is_empty() {
            return None;
        }
        let mut span: Option<(usize, usize)> = None;
        let mut touch = |lo: usize, hi: usize| {
            span = Some(match span {
                None => (lo, hi),
                Some((a, b)) => (a.min(lo), b.max(hi)),
            });
        };
        let mut at = 0usize;
        let mut c = RunCursor::new(self);
        while let Some(run) = c.peek() {
            match run {
                Run::Fill { ones, words } => {
                    let n = words as usize;
                    if ones {
                        dense[at..at + n].fill(!0);
                        touch(at, at + n - 1);
                    }
                    at += n;
                    c.advance(words);
                }
                Run::Literal(w) => {
                    if w != 0 {
                        dense[at] |= w;
                        touch(at, at);
                    }
                    at += 1;
                    c.advance(1);
                }
            }
        }
        if let Some(last) = dense.last_mut() {
            *last &= tail_mask(self.universe);
        }
        span
    }

    /// Compresses `dense[lo..=hi]`, treating every word outside the span as 0.
    pub fn from_dense_span(dense: &[u64], lo: usize, hi: usize, universe: u64) -> Self {
        let n = word_count(universe);
        debug_assert!(lo <= hi && hi < n);
        let mut b = RleBuilder::new(universe);
        b.fill(false, lo as u64);
        for &w in &dense[lo..=hi] {
            b.word(w);
        }
        b.fill(false, (n - hi - 1) as u64);
        b.finish_any()
    }

    pub fn serialized_len(&self) -> usize {
        HEADER_BYTES + 8 * self.payload.len()
    }

    pub fn write_to(&self, out: &mut Vec<u8>) {
        out.push(self.repr as u8);
        out.extend_from_slice(&self.universe.to_le_bytes());
        out.extend_from_slice(&self.ones.to_le_bytes());
        out.extend_from_slice(&(self.payload.len() as u64).to_le_bytes());
        for w in &self.payload {
            out.extend_from_slice(&w.to_le_bytes());
        }
    }

    /// Parses one vector from the front of `buf`, returning it and the number
    /// of bytes consumed. Rejects anything that is not in canonical form.
    pub fn read_from(buf: &[u8], expected_universe: u64) -> Result<(Self, usize)> {
        if buf.len() < HEADER_BYTES {
            return Err(Error::Truncated("bit-vector header"));
        }
        let repr =
            Representation::from_tag(buf[0]).ok_or_else(|| Error::Corrupt(format!("bit-vector tag {}", buf[0])))?;
        let le = |i: usize| u64::from_le_bytes(buf[i..i + 8].try_into().unwrap());
        let universe = le(1);
        let ones = le(9);
        let len = le(17);
        if universe != expected_universe {
            return Err(Error::Corrupt(format!(
                "bit-vector universe {universe}, expected {expected_universe}"
            )));
        }
        let avail = ((buf.len() - HEADER_BYTES) / 8) as u64;
        if len > avail {
            return Err(Error::Truncated("bit-vector payload"));
        }
        let len = len as usize;
        let payload: Vec<u64> = (0..len).map(|i| le(HEADER_BYTES + 8 * i)).collect();
        let consumed = HEADER_BYTES + 8 * len;
        let nwords = word_count(universe);

        let canonical = match repr {
            Representation::Plain => {
                if len != nwords {
                    return Err(Error::Corrupt(format!(
                        "plain payload has {len} words, expected {nwords}"
                    )));
                }
                if payload.last().is_some_and(|w| w & !tail_mask(universe) != 0) {
                    return Err(Error::Corrupt("bits set beyond universe".into()));
                }
                Self {
                    universe,
                    ones: payload.iter().map(|w| w.count_ones() as u64).sum(),
                    repr,
                    payload: payload.clone(),
                }
            }
            Representation::RunLength => {
                let mut b = RleBuilder::new(universe);
                let mut i = 0;
                let mut total = 0u64;
                while i < len {
                    let w = payload[i];
                    let (ones, count) = if w & FILL_FLAG != 0 {
                        i += 1;
                        (Some(w & FILL_VALUE != 0), w & RUN_MASK)
                    } else if w == LITERAL_MARKER && i + 1 < len {
                        i += 2;
                        (None, 1)
                    } else {
                        return Err(Error::Corrupt("malformed run-length token".into()));
                    };
                    total = total.saturating_add(count);
                    if count == 0 || total > nwords as u64 {
                        return Err(Error::Corrupt("run-length payload overflows universe".into()));
                    }
                    match ones {
                        Some(v) => b.fill(v, count),
                        None => {
                            let lit = payload[i - 1];
                            if total == nwords as u64 && lit & !tail_mask(universe) != 0 {
                                return Err(Error::Corrupt("bits set beyond universe".into()));
                            }
                            b.word(lit);
                        }
                    }
                }
                if total != nwords as u64 {
                    return Err(Error::Corrupt("run-length payload shorter than universe".into()));
                }
                if !b.fits_compressed() {
                    return Err(Error::Corrupt("run-length form larger than its threshold".into()));
                }
                b.finish()
            }
        };
        let parsed = Self {
            universe,
            ones,
            repr,
            payload,
        };
        if parsed != canonical {
            return Err(Error::Corrupt("bit-vector not in canonical form".into()));
        }
        Ok((parsed, consumed))
    }
}

fn positions_to_words(positions: &[u64], universe: u64) -> Result<Vec<u64>> {
    let mut words = vec![0u64; word_count(universe)];
    let mut prev: Option<u64> = None;
    for &p in positions {
        if p >= universe {
            return Err(Error::PositionOutOfRange { position: p, universe });
        }
        if prev.is_some_and(|q| q >= p) {
            return Err(Error::NotAscending { position: p });
        }
        prev = Some(p);
        words[(p / 64) as usize] |= 1 << (p % 64);
    }
    Ok(words)
}

#[derive(Clone, Copy, Debug)]
enum Run {
    Fill { ones: bool, words: u64 },
    Literal(u64),
}

struct RunCursor<'a> {
    payload: &'a [u64],
    rle: bool,
    pos: usize,
    current: Option<Run>,
}

impl<'a> RunCursor<'a> {
    fn new(v: &'a CompressedBitVector) -> Self {
        let mut c = Self {
            payload: &v.payload,
            rle: v.repr == Representation::RunLength,
            pos: 0,
            current: None,
        };
        c.load();
        c
    }

    fn load(&mut self) {
        self.current = if self.pos >= self.payload.len() {
            None
        } else if !self.rle {
            self.pos += 1;
            Some(Run::Literal(self.payload[self.pos - 1]))
        } else {
            let w = self.payload[self.pos];
            if w & FILL_FLAG != 0 {
                self.pos += 1;
                Some(Run::Fill {
                    ones: w & FILL_VALUE != 0,
                    words: w & RUN_MASK,
                })
            } else {
                self.pos += 2;
                Some(Run::Literal(self.payload[self.pos - 1]))
            }
        };
    }

    fn peek(&self) -> Option<Run> {
        self.current
    }

    /// Consumes `n` words of the current run (`n` ≤ run length).
    fn advance(&mut self, n: u64) {
        match &mut self.current {
            Some(Run::Fill { words, .. }) if *words > n => *words -= n,
            _ => self.load(),
        }
    }

    /// Consumes `n` words across any number of runs.
    fn skip(&mut self, mut n: u64) {
        if !self.rle {
            if n > 0 && self.current.is_some() {
                self.pos = (self.pos - 1 + n as usize).min(self.payload.len());
                self.load();
            }
            return;
        }
        while n > 0 {
            match &mut self.current {
                None => return,
                Some(Run::Fill { words, .. }) => {
                    if *words > n {
                        *words -= n;
                        return;
                    }
                    n -= *words;
                    self.load();
                }
                Some(Run::Literal(_)) => {
                    n -= 1;
                    self.load();
                }
            }
        }
    }
}

/// Streams words into canonical run-length tokens.
struct RleBuilder {
    universe: u64,
    nwords: u64,
    payload: Vec<u64>,
    last_fill: Option<usize>,
    written: u64,
    ones: u64,
}

impl RleBuilder {
    fn new(universe: u64) -> Self {
        Self {
            universe,
            nwords: word_count(universe) as u64,
            payload: Vec::new(),
            last_fill: None,
            written: 0,
            ones: 0,
        }
    }

    fn fill(&mut self, ones: bool, n: u64) {
        if n == 0 {
            return;
        }
        if ones {
            self.ones += 64 * n;
        }
        let value = if ones { FILL_VALUE } else { 0 };
        match self.last_fill {
            Some(i) if self.payload[i] & FILL_VALUE == value => {
                debug_assert!((self.payload[i] & RUN_MASK) + n <= RUN_MASK);
                self.payload[i] += n;
            }
            _ => {
                self.payload.push(FILL_FLAG | value | n);
                self.last_fill = Some(self.payload.len() - 1);
            }
        }
        self.written += n;
    }

    fn word(&mut self, mut w: u64) {
        let full = if self.written + 1 == self.nwords {
            tail_mask(self.universe)
        } else {
            !0
        };
        w &= full;
        if w == 0 {
            self.fill(false, 1);
        } else if w == full {
            self.fill(true, 1);
        } else {
            self.ones += w.count_ones() as u64;
            self.payload.push(LITERAL_MARKER);
            self.payload.push(w);
            self.last_fill = None;
            self.written += 1;
        }
    }

    fn fits_compressed(&self) -> bool {
        self.payload.len() as u64 * 2 <= self.nwords
    }

    /// Always returns the run-length form.
    fn finish(mut self) -> CompressedBitVector {
        debug_assert_eq!(self.written, self.nwords);
        let rem = self.universe % 64;
        if rem != 0 {
            if let Some(i) = self.last_fill {
                if i + 1 == self.payload.len() && self.payload[i] & FILL_VALUE != 0 {
                    self.ones -= 64 - rem;
                }
            }
        }
        CompressedBitVector {
            universe: self.universe,
            ones: self.ones,
            repr: Representation::RunLength,
            payload: self.payload,
        }
    }

    /// Run-length form if it is small enough, plain otherwise.
    fn finish_any(self) -> CompressedBitVector {
        let fits = self.fits_compressed();
        let v = self.finish();
        if fits {
            v
        } else {
            v.to_plain()
        }
    }
}

/// Ascending positions of set bits.
pub struct Ones<'a> {
    cursor: RunCursor<'a>,
    universe: u64,
    next_word: u64,
    base: u64,
    bits: u64,
    fill: Option<(u64, u64)>,
}

impl Iterator for Ones<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            if let Some((next, end)) = self.fill {
                if next < end {
                    self.fill = Some((next + 1, end));
                    return Some(next);
                }
                self.fill = None;
            }
            if self.bits != 0 {
                let tz = self.bits.trailing_zeros() as u64;
                self.bits &= self.bits - 1;
                return Some(self.base + tz);
            }
            match self.cursor.peek()? {
                Run::Fill { ones, words } => {
                    let start = self.next_word * 64;
                    self.next_word += words;
                    self.cursor.advance(words);
                    if ones {
                        self.fill = Some((start, (self.next_word * 64).min(self.universe)));
                    }
                }
                Run::Literal(w) => {
                    self.base = self.next_word * 64;
                    self.bits = w;
                    self.next_word += 1;
                    self.cursor.advance(1);
                }
            }
        }
    }
}
