//! Pair-sum enclosures and their sorted stream, in memory or spilled to disk.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};

use rayon::prelude::*;

/// Outward `f64` enclosure of `i^c + j^c` for `i <= j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entry {
    pub lo: f64,
    pub hi: f64,
    pub i: u32,
    pub j: u32,
}

const ENTRY_BYTES: usize = 24;

impl Entry {
    pub fn key_cmp(&self, other: &Entry) -> Ordering {
        self.lo
            .total_cmp(&other.lo)
            .then(self.hi.total_cmp(&other.hi))
            .then(self.i.cmp(&other.i))
            .then(self.j.cmp(&other.j))
    }

    fn write_to(&self, w: &mut impl Write) -> io::Result<()> {
        w.write_all(&self.lo.to_le_bytes())?;
        w.write_all(&self.hi.to_le_bytes())?;
        w.write_all(&self.i.to_le_bytes())?;
        w.write_all(&self.j.to_le_bytes())
    }

    fn read_from(r: &mut impl Read) -> io::Result<Option<Entry>> {
        let mut buf = [0u8; ENTRY_BYTES];
        match r.read_exact(&mut buf) {
            Ok(()) => {}
            Err(e) if e.kind() == io::ErrorKind::UnexpectedEof => return Ok(None),
            Err(e) => return Err(e),
        }
        let f = |k: usize| f64::from_le_bytes(buf[k..k + 8].try_into().expect("8 bytes"));
        let u = |k: usize| u32::from_le_bytes(buf[k..k + 4].try_into().expect("4 bytes"));
        Ok(Some(Entry {
            lo: f(0),
            hi: f(8),
            i: u(16),
            j: u(20),
        }))
    }
}

pub(crate) fn next_down(x: f64) -> f64 {
    if x.is_nan() || x == f64::NEG_INFINITY {
        return x;
    }
    if x == 0.0 {
        return -f64::from_bits(1);
    }
    let b = x.to_bits();
    f64::from_bits(if x > 0.0 { b - 1 } else { b + 1 })
}

pub(crate) fn next_up(x: f64) -> f64 {
    -next_down(-x)
}

/// Entries for rows `i` in `rows`, unsorted. `bounds[x - 1]` encloses `x^c`.
fn rows_entries(bounds: &[(f64, f64)], rows: std::ops::Range<u32>) -> Vec<Entry> {
    let n = bounds.len() as u32;
    rows.into_par_iter()
        .flat_map_iter(|i| {
            let (li, hi_i) = bounds[(i - 1) as usize];
            (i..=n).map(move |j| {
                let (lj, hj) = bounds[(j - 1) as usize];
                Entry {
                    lo: next_down(li + lj),
                    hi: next_up(hi_i + hj),
                    i,
                    j,
                }
            })
        })
        .collect()
}

/// Splits `1..=n` into row ranges holding at most `chunk` entries each
/// (a single row may exceed it).
fn row_chunks(n: u32, chunk: usize) -> Vec<std::ops::Range<u32>> {
    let mut out = Vec::new();
    let mut start = 1;
    let mut acc = 0usize;
    for i in 1..=n {
        let row = (n - i + 1) as usize;
        if acc > 0 && acc + row > chunk {
            out.push(start..i);
            start = i;
            acc = 0;
        }
        acc += row;
    }
    if start <= n {
        out.push(start..n + 1);
    }
    out
}

/// Sorted stream of all pair-sum entries.
pub enum PairStream {
    Memory(std::vec::IntoIter<Entry>),
    Merge(KWayMerge),
}

impl PairStream {
    pub fn build(bounds: &[(f64, f64)], chunk_entries: usize) -> io::Result<PairStream> {
        let n = bounds.len() as u32;
        let total = n as usize * (n as usize + 1) / 2;
        if total <= chunk_entries {
            let mut v = rows_entries(bounds, 1..n + 1);
            v.par_sort_unstable_by(Entry::key_cmp);
            return Ok(PairStream::Memory(v.into_iter()));
        }
        let mut files = Vec::new();
        for rows in row_chunks(n, chunk_entries.max(1)) {
            let mut v = rows_entries(bounds, rows);
            v.par_sort_unstable_by(Entry::key_cmp);
            let mut file = tempfile::tempfile()?;
            {
                let mut w = BufWriter::new(&mut file);
                for e in &v {
                    e.write_to(&mut w)?;
                }
                w.flush()?;
            }
            use std::io::Seek;
            file.rewind()?;
            files.push(file);
        }
        KWayMerge::new(files).map(PairStream::Merge)
    }

    pub fn next_entry(&mut self) -> io::Result<Option<Entry>> {
        match self {
            PairStream::Memory(it) => Ok(it.next()),
            PairStream::Merge(m) => m.next_entry(),
        }
    }

    #[cfg(test)]
    pub fn is_external(&self) -> bool {
        matches!(self, PairStream::Merge(_))
    }
}

struct HeapItem {
    entry: Entry,
    source: usize,
}

impl PartialEq for HeapItem {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HeapItem {}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapItem {
    // reversed for a min-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other.entry.key_cmp(&self.entry).then(other.source.cmp(&self.source))
    }
}

pub struct KWayMerge {
    readers: Vec<BufReader<File>>,
    heap: BinaryHeap<HeapItem>,
}

impl KWayMerge {
    fn new(files: Vec<File>) -> io::Result<Self> {
        let mut readers: Vec<_> = files
            .into_iter()
            .map(|f| BufReader::with_capacity(1 << 16, f))
            .collect();
        let mut heap = BinaryHeap::new();
        for (source, r) in readers.iter_mut().enumerate() {
            if let Some(entry) = Entry::read_from(r)? {
                heap.push(HeapItem { entry, source });
            }
        }
        Ok(KWayMerge { readers, heap })
    }

    fn next_entry(&mut self) -> io::Result<Option<Entry>> {
        let Some(HeapItem { entry, source }) = self.heap.pop() else {
            return Ok(None);
        };
        if let Some(next) = Entry::read_from(&mut self.readers[source])? {
            self.heap.push(HeapItem { entry: next, source });
        }
        Ok(Some(entry))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn drain(mut s: PairStream) -> Vec<Entry> {
        let mut v = Vec::new();
        while let Some(e) = s.next_entry().unwrap() {
            v.push(e);
        }
        v
    }

    #[test]
    fn external_merge_matches_memory_sort() {
        let bounds: Vec<(f64, f64)> = (1..=40u32).map(|x| ((x as f64).sqrt(), (x as f64).sqrt())).collect();
        let mem = PairStream::build(&bounds, 1 << 20).unwrap();
        assert!(!mem.is_external());
        let ext = PairStream::build(&bounds, 37).unwrap();
        assert!(ext.is_external());
        let a = drain(mem);
        let b = drain(ext);
        assert_eq!(a.len(), 820);
        assert_eq!(a, b);
        assert!(a.windows(2).all(|w| w[0].key_cmp(&w[1]) != Ordering::Greater));
    }

    #[test]
    fn chunks_cover_rows() {
        let c = row_chunks(10, 12);
        assert_eq!(c.first().unwrap().start, 1);
        assert_eq!(c.last().unwrap().end, 11);
        assert!(c.windows(2).all(|w| w[0].end == w[1].start));
    }
}
