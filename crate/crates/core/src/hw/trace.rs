use std::io::Write;

use serde::{Deserialize, Serialize};

/// Handle to a declared signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignalId(usize);

#[derive(Debug, Clone, PartialEq, Eq)]
struct Track {
    name: String,
    /// `(half_cycle, value)` at every change, starting at half cycle 0.
    changes: Vec<(u64, i64)>,
}

/// One CSV row of the trace export.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRow {
    pub half_cycle: u64,
    pub signal_name: String,
    pub value: i64,
}

/// Value-change record of every named signal, per half cycle.
///
/// Storage is change-based; [`Trace::samples`] expands a signal back to one
/// value per half cycle.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Trace {
    tracks: Vec<Track>,
    end: u64,
}

impl Trace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare(&mut self, name: impl Into<String>) -> SignalId {
        self.tracks.push(Track { name: name.into(), changes: Vec::new() });
        SignalId(self.tracks.len() - 1)
    }

    pub fn id(&self, name: &str) -> Option<SignalId> {
        self.tracks.iter().position(|t| t.name == name).map(SignalId)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.tracks.iter().map(|t| t.name.as_str())
    }

    /// Records the value held during half cycle `h`; `h` must not decrease.
    pub fn record(&mut self, id: SignalId, h: u64, value: i64) {
        let track = &mut self.tracks[id.0];
        // a later write in the same half cycle wins
        if track.changes.last().is_some_and(|&(t, _)| t == h) {
            track.changes.pop();
        }
        match track.changes.last() {
            Some(&(_, last)) if last == value => {}
            _ => track.changes.push((h, value)),
        }
        self.end = self.end.max(h + 1);
    }

    /// Number of half cycles covered.
    pub fn len(&self) -> u64 {
        self.end
    }

    pub fn is_empty(&self) -> bool {
        self.end == 0
    }

    fn track(&self, name: &str) -> Option<&Track> {
        self.tracks.iter().find(|t| t.name == name)
    }

    pub fn value_at(&self, name: &str, h: u64) -> Option<i64> {
        let track = self.track(name)?;
        let idx = track.changes.partition_point(|&(t, _)| t <= h);
        (idx > 0).then(|| track.changes[idx - 1].1)
    }

    /// One value per half cycle over the whole trace.
    pub fn samples(&self, name: &str) -> Option<Vec<i64>> {
        let track = self.track(name)?;
        let mut out = Vec::with_capacity(self.end as usize);
        let mut current = 0;
        let mut changes = track.changes.iter().peekable();
        for h in 0..self.end {
            while let Some(&&(t, v)) = changes.peek() {
                if t > h {
                    break;
                }
                current = v;
                changes.next();
            }
            out.push(current);
        }
        Some(out)
    }

    /// Half cycles at which the signal goes from zero to non-zero.
    pub fn rising_edges(&self, name: &str) -> Vec<u64> {
        let Some(track) = self.track(name) else { return Vec::new() };
        let mut prev = 0;
        let mut out = Vec::new();
        for &(t, v) in &track.changes {
            if prev == 0 && v != 0 {
                out.push(t);
            }
            prev = v;
        }
        out
    }

    /// First rising edge at or after `from`.
    pub fn first_rise_after(&self, name: &str, from: u64) -> Option<u64> {
        self.rising_edges(name).into_iter().find(|&t| t >= from)
    }

    /// Value-change rows sorted by half cycle, then by declaration order.
    pub fn rows(&self) -> Vec<TraceRow> {
        let mut rows: Vec<(u64, usize, i64)> =
            self.tracks.iter().enumerate().flat_map(|(i, t)| t.changes.iter().map(move |&(h, v)| (h, i, v))).collect();
        rows.sort_unstable_by_key(|&(h, i, _)| (h, i));
        rows.into_iter()
            .map(|(h, i, v)| TraceRow { half_cycle: h, signal_name: self.tracks[i].name.clone(), value: v })
            .collect()
    }

    /// Writes `half_cycle,signal_name,value` rows, one per value change.
    pub fn write_csv<W: Write>(&self, writer: W) -> csv::Result<()> {
        let mut csv = csv::Writer::from_writer(writer);
        for row in self.rows() {
            csv.serialize(row)?;
        }
        csv.flush()?;
        Ok(())
    }

    /// Parses a trace previously written by [`Trace::write_csv`].
    pub fn read_csv<R: std::io::Read>(reader: R) -> csv::Result<Trace> {
        let mut trace = Trace::new();
        for row in csv::Reader::from_reader(reader).deserialize() {
            let row: TraceRow = row?;
            let id = trace.id(&row.signal_name).unwrap_or_else(|| trace.declare(row.signal_name.clone()));
            trace.record(id, row.half_cycle, row.value);
        }
        Ok(trace)
    }
}
