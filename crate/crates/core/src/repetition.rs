//! Longest repeated sub-circuit detection over gate token sequences.
//!
//! Built on a suffix automaton: every state groups substrings sharing the same
//! set of end positions, so the longest substring occurring at least twice is
//! the `len` of some state whose end-position set has two or more members.

use std::collections::HashMap;
use std::hash::Hash;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct RepetitionFeatureSet {
    pub largest_repeat_len: usize,
    /// Occurrences of that substring, overlapping ones included.
    pub largest_repeat_count: usize,
    /// Start of the first occurrence; `None` when nothing repeats.
    pub first_start: Option<usize>,
}

struct State<T> {
    len: usize,
    link: Option<usize>,
    next: HashMap<T, usize>,
    /// End index of the first occurrence of this state's substrings.
    first_end: usize,
    is_clone: bool,
}

struct SuffixAutomaton<T> {
    states: Vec<State<T>>,
    last: usize,
}

impl<T: Copy + Eq + Hash> SuffixAutomaton<T> {
    fn build(seq: &[T]) -> Self {
        let mut sam = SuffixAutomaton {
            states: Vec::with_capacity(2 * seq.len() + 1),
            last: 0,
        };
        sam.states.push(State {
            len: 0,
            link: None,
            next: HashMap::new(),
            first_end: 0,
            is_clone: false,
        });
        for (i, &c) in seq.iter().enumerate() {
            sam.extend(c, i);
        }
        sam
    }

    fn extend(&mut self, c: T, pos: usize) {
        let cur = self.states.len();
        self.states.push(State {
            len: self.states[self.last].len + 1,
            link: None,
            next: HashMap::new(),
            first_end: pos,
            is_clone: false,
        });
        let mut p = Some(self.last);
        while let Some(pi) = p {
            if self.states[pi].next.contains_key(&c) {
                break;
            }
            self.states[pi].next.insert(c, cur);
            p = self.states[pi].link;
        }
        match p {
            None => self.states[cur].link = Some(0),
            Some(pi) => {
                let q = self.states[pi].next[&c];
                if self.states[pi].len + 1 == self.states[q].len {
                    self.states[cur].link = Some(q);
                } else {
                    let clone = self.states.len();
                    let cloned = State {
                        len: self.states[pi].len + 1,
                        link: self.states[q].link,
                        next: self.states[q].next.clone(),
                        first_end: self.states[q].first_end,
                        is_clone: true,
                    };
                    self.states.push(cloned);
                    let mut p = Some(pi);
                    while let Some(pj) = p {
                        if self.states[pj].next.get(&c) != Some(&q) {
                            break;
                        }
                        self.states[pj].next.insert(c, clone);
                        p = self.states[pj].link;
                    }
                    self.states[q].link = Some(clone);
                    self.states[cur].link = Some(clone);
                }
            }
        }
        self.last = cur;
    }

    /// Size of each state's end-position set.
    fn occurrence_counts(&self) -> Vec<usize> {
        let mut cnt: Vec<usize> = self
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| usize::from(i != 0 && !s.is_clone))
            .collect();
        // propagate along suffix links from longest to shortest
        let mut order: Vec<usize> = (1..self.states.len()).collect();
        order.sort_unstable_by_key(|&i| std::cmp::Reverse(self.states[i].len));
        for i in order {
            if let Some(l) = self.states[i].link {
                cnt[l] += cnt[i];
            }
        }
        cnt
    }
}

/// Longest substring occurring at least twice. Ties go to the substring whose
/// first occurrence starts earliest.
pub fn longest_repeat<T: Copy + Eq + Hash>(seq: &[T]) -> RepetitionFeatureSet {
    if seq.len() < 2 {
        return RepetitionFeatureSet::default();
    }
    let sam = SuffixAutomaton::build(seq);
    let cnt = sam.occurrence_counts();
    let mut best = RepetitionFeatureSet::default();
    for (i, s) in sam.states.iter().enumerate().skip(1) {
        if cnt[i] < 2 {
            continue;
        }
        let start = s.first_end + 1 - s.len;
        let better = s.len > best.largest_repeat_len
            || (s.len == best.largest_repeat_len && best.first_start.is_some_and(|b| start < b));
        if better {
            best = RepetitionFeatureSet {
                largest_repeat_len: s.len,
                largest_repeat_count: cnt[i],
                first_start: Some(start),
            };
        }
    }
    best
}

/// Interns string tokens and runs [`longest_repeat`].
pub fn longest_repeated_subcircuit<S: AsRef<str>>(tokens: &[S]) -> RepetitionFeatureSet {
    let mut ids: HashMap<&str, u32> = HashMap::new();
    let seq: Vec<u32> = tokens
        .iter()
        .map(|t| {
            let next = ids.len() as u32;
            *ids.entry(t.as_ref()).or_insert(next)
        })
        .collect();
    longest_repeat(&seq)
}
