//! Streaming harness: read-counted tapes, a bit-cost space meter, and a
//! write-only output sink.
//!
//! Streaming kernels touch their input only through a [`Tape`] (every access
//! is counted) and declare every live working register through the
//! [`SpaceMeter`]; nothing else may persist between steps. The meter tracks
//! the peak number of simultaneously live bits across all nesting levels of
//! simulation. A register holding the value `v` costs `max(1, ceil(log2(v +
//! 1)))` bits; a set-valued cursor is charged at capacity, `arity *
//! width(max_id)` bits.
//!
//! On every metered run in this crate the peak obeys
//! `peak_bits <= SPACE_CONSTANT * d^2 * ceil(log2(N + 2))`
//! where `N` is the byte length of the serialized input; the module tests and
//! the acceptance suite assert this.

use std::cell::Cell;
use std::fmt;

use thiserror::Error;

use crate::sets::bit_width;

/// Implementation constant for the space envelope declared above.
pub const SPACE_CONSTANT: u64 = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TapeError {
    #[error("tape position {t} out of range 0..{len}")]
    OutOfRange { t: usize, len: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpaceError {
    #[error("space budget exceeded: peak {peak} bits over budget {budget}")]
    BudgetExceeded { peak: u64, budget: u64 },
}

/// Random-access read interface for a stream of sets. Positions that hold no
/// family member (implicit streams skip them) read back as `false`.
pub trait Tape {
    fn raw_len(&self) -> usize;

    /// Copies the set at position `t` into `buf`; returns false when the
    /// position holds no member. Every call counts as one read.
    fn read_into(&self, t: usize, buf: &mut Vec<u32>) -> bool;

    fn reads(&self) -> u64;

    /// True for streams whose enumeration cannot repeat a set; the duplicate
    /// layer is then the identity.
    fn inherent_dedup(&self) -> bool {
        false
    }
}

/// A tape over an explicit family of sets.
pub struct InputTape<'a> {
    family: &'a [Vec<u32>],
    reads: Cell<u64>,
}

impl<'a> InputTape<'a> {
    pub fn new(family: &'a [Vec<u32>]) -> Self {
        InputTape { family, reads: Cell::new(0) }
    }

    /// Reads the set at position `t`, counting one tape access.
    pub fn read_set(&self, t: usize) -> Result<&'a [u32], TapeError> {
        if t >= self.family.len() {
            return Err(TapeError::OutOfRange { t, len: self.family.len() });
        }
        self.reads.set(self.reads.get() + 1);
        Ok(&self.family[t])
    }
}

impl Tape for InputTape<'_> {
    fn raw_len(&self) -> usize {
        self.family.len()
    }

    fn read_into(&self, t: usize, buf: &mut Vec<u32>) -> bool {
        self.reads.set(self.reads.get() + 1);
        buf.clear();
        buf.extend_from_slice(&self.family[t]);
        true
    }

    fn reads(&self) -> u64 {
        self.reads.get()
    }
}

/// Tracks live register bits per simulation frame and the overall peak.
pub struct SpaceMeter {
    frames: Vec<Vec<(&'static str, u64)>>,
    current: u64,
    peak: u64,
    budget: Option<u64>,
}

impl SpaceMeter {
    pub fn new(budget: Option<u64>) -> Self {
        SpaceMeter { frames: vec![Vec::new()], current: 0, peak: 0, budget }
    }

    /// Opens a register frame for one nested simulation level.
    pub fn enter_frame(&mut self) {
        self.frames.push(Vec::new());
    }

    /// Closes the top frame; its registers stop being live.
    pub fn exit_frame(&mut self) {
        let frame = self.frames.pop().expect("frame underflow");
        let freed: u64 = frame.iter().map(|(_, b)| b).sum();
        self.current -= freed;
        assert!(!self.frames.is_empty(), "root frame must stay open");
    }

    /// Assigns an integer register in the top frame; its cost follows the
    /// current value.
    pub fn set(&mut self, name: &'static str, value: u64) {
        self.put(name, bit_width(value));
    }

    /// Assigns a set-valued cursor register, charged at capacity.
    pub fn set_cursor(&mut self, name: &'static str, arity: u64, max_id: u64) {
        self.put(name, arity.max(1) * bit_width(max_id));
    }

    fn put(&mut self, name: &'static str, bits: u64) {
        let frame = self.frames.last_mut().expect("no open frame");
        match frame.iter_mut().find(|(n, _)| *n == name) {
            Some((_, b)) => {
                self.current = self.current - *b + bits;
                *b = bits;
            }
            None => {
                frame.push((name, bits));
                self.current += bits;
            }
        }
        self.peak = self.peak.max(self.current);
    }

    pub fn peak_bits(&self) -> u64 {
        self.peak
    }

    /// Errors once the peak has passed the armed budget.
    pub fn check_budget(&self) -> Result<(), SpaceError> {
        match self.budget {
            Some(budget) if self.peak > budget => {
                Err(SpaceError::BudgetExceeded { peak: self.peak, budget })
            }
            _ => Ok(()),
        }
    }
}

/// Write-only destination for kernel output: sets go in during the run and
/// can only be taken back out by consuming the sink afterwards.
#[derive(Default)]
pub struct OutputSink {
    sets: Vec<Vec<u32>>,
}

impl OutputSink {
    pub fn new() -> Self {
        OutputSink::default()
    }

    pub fn emit(&mut self, set: &[u32]) {
        self.sets.push(set.to_vec());
    }

    pub fn emitted(&self) -> usize {
        self.sets.len()
    }

    pub fn into_family(self) -> Vec<Vec<u32>> {
        self.sets
    }
}

/// What a metered streaming run cost and produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunReport {
    pub peak_bits: u64,
    pub tape_reads: u64,
    pub sets_emitted: usize,
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "peak_bits={} reads={} emitted={}",
            self.peak_bits, self.tape_reads, self.sets_emitted
        )
    }
}
