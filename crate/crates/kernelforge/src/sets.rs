//! Small helpers for sets represented as strictly increasing `Vec<u32>`.

/// Sorts and deduplicates a list of element ids into canonical set form.
pub fn canonicalize(mut elems: Vec<u32>) -> Vec<u32> {
    elems.sort_unstable();
    elems.dedup();
    elems
}

/// True if `hay` contains every element of `needle`; both strictly increasing.
pub fn contains_sorted(hay: &[u32], needle: &[u32]) -> bool {
    let mut i = 0;
    for &x in needle {
        while i < hay.len() && hay[i] < x {
            i += 1;
        }
        if i == hay.len() || hay[i] != x {
            return false;
        }
        i += 1;
    }
    true
}

/// True if the sorted slices share at least one element.
pub fn intersects_sorted(a: &[u32], b: &[u32]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// Cursor over the size-`r` subsets of a sorted slice, in lexicographic order
/// of the chosen element sequences.
pub struct SubsetCursor {
    idx: Vec<usize>,
    src_len: usize,
    started: bool,
    done: bool,
}

impl SubsetCursor {
    pub fn new(src_len: usize, r: usize) -> Self {
        SubsetCursor {
            idx: (0..r).collect(),
            src_len,
            started: false,
            done: r > src_len,
        }
    }

    /// Writes the next subset of `src` into `out`; returns false when exhausted.
    pub fn next_into(&mut self, src: &[u32], out: &mut Vec<u32>) -> bool {
        debug_assert_eq!(src.len(), self.src_len);
        if self.done {
            return false;
        }
        if !self.started {
            self.started = true;
        } else if !self.advance() {
            return false;
        }
        out.clear();
        out.extend(self.idx.iter().map(|&i| src[i]));
        true
    }

    fn advance(&mut self) -> bool {
        let r = self.idx.len();
        if r == 0 {
            self.done = true;
            return false;
        }
        // Standard next-combination on the index array.
        let mut i = r;
        while i > 0 {
            i -= 1;
            if self.idx[i] != i + self.src_len - r {
                self.idx[i] += 1;
                for j in i + 1..r {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                return true;
            }
        }
        self.done = true;
        false
    }
}

/// Calls `f` with every subset of the sorted slice, smaller sizes first and
/// lexicographic within each size; stops early when `f` returns false.
pub fn for_each_subset_by_size(src: &[u32], mut f: impl FnMut(&[u32]) -> bool) {
    let mut buf = Vec::with_capacity(src.len());
    for r in 0..=src.len() {
        let mut cur = SubsetCursor::new(src.len(), r);
        while cur.next_into(src, &mut buf) {
            if !f(&buf) {
                return;
            }
        }
    }
}

/// max(1, ceil(log2(v + 1))): the number of bits needed to hold the value `v`.
pub fn bit_width(v: u64) -> u64 {
    (u64::BITS - v.leading_zeros()).max(1) as u64
}
