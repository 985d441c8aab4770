//! Word-accurate space accounting for streaming state.
//!
//! Every streaming component routes its state mutations through a meter so
//! that peak usage can be reported and checked for near-linear scaling. A
//! "word" is one 64-bit slot; an edge record costs three.

use std::collections::BTreeMap;

pub const WORDS_PER_EDGE: usize = 3;

/// One strip-chart sample, emitted when logging is enabled.
#[derive(Clone, Debug)]
pub struct MeterSample {
    pub step: u64,
    pub live_words: usize,
    pub peak_words: usize,
    pub component: &'static str,
}

/// Live/peak word counts with a per-component breakdown.
#[derive(Clone, Debug, Default)]
pub struct SpaceMeter {
    live: usize,
    peak: usize,
    step: u64,
    by_component: BTreeMap<&'static str, (usize, usize)>,
    log: Option<Vec<MeterSample>>,
}

impl SpaceMeter {
    pub fn new() -> Self {
        SpaceMeter::default()
    }

    pub fn with_log() -> Self {
        SpaceMeter { log: Some(Vec::new()), ..SpaceMeter::default() }
    }

    pub fn alloc(&mut self, component: &'static str, words: usize) {
        self.live += words;
        self.peak = self.peak.max(self.live);
        let entry = self.by_component.entry(component).or_insert((0, 0));
        entry.0 += words;
        entry.1 = entry.1.max(entry.0);
        self.record(component);
    }

    pub fn free(&mut self, component: &'static str, words: usize) {
        let entry = self.by_component.entry(component).or_insert((0, 0));
        debug_assert!(entry.0 >= words && self.live >= words, "meter underflow for {component}");
        entry.0 = entry.0.saturating_sub(words);
        self.live = self.live.saturating_sub(words);
        self.record(component);
    }

    fn record(&mut self, component: &'static str) {
        self.step += 1;
        let (step, live, peak) = (self.step, self.live, self.peak);
        if let Some(log) = &mut self.log {
            log.push(MeterSample { step, live_words: live, peak_words: peak, component });
        }
    }

    pub fn live_words(&self) -> usize {
        self.live
    }

    pub fn peak_words(&self) -> usize {
        self.peak
    }

    pub fn breakdown(&self) -> impl Iterator<Item = (&'static str, usize, usize)> + '_ {
        self.by_component.iter().map(|(k, (live, peak))| (*k, *live, *peak))
    }

    pub fn samples(&self) -> Option<&[MeterSample]> {
        self.log.as_deref()
    }

    /// Merge another meter's peak as if its state coexisted with ours.
    pub fn absorb_peak(&mut self, other: &SpaceMeter) {
        self.peak = self.peak.max(self.live + other.peak);
        self.live += other.live;
        for (k, (live, peak)) in &other.by_component {
            let entry = self.by_component.entry(k).or_insert((0, 0));
            entry.0 += live;
            entry.1 = entry.1.max(*peak);
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,live_words,peak_words,component\n");
        if let Some(samples) = self.samples() {
            for s in samples {
                out.push_str(&format!("{},{},{},{}\n", s.step, s.live_words, s.peak_words, s.component));
            }
        }
        out
    }
}
