//! Storage devices with per-cycle step accounting. Every single-symbol
//! operation costs one step.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::symbol::Word;

/// Separator written after each archived word.
pub const SEP: &str = "#";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeviceKind {
    Tape,
    Stack,
    Queue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snapshot {
    pub kind: DeviceKind,
    pub contents: Vec<String>,
    pub head: Option<usize>,
}

/// A one-sided tape with a single head. Cells right of the last written
/// one are blank.
#[derive(Clone, Debug, Default)]
pub struct Tape {
    cells: Vec<String>,
    head: usize,
    steps: usize,
}

impl Tape {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn head(&self) -> usize {
        self.head
    }

    fn move_to(&mut self, pos: usize) {
        self.steps += self.head.abs_diff(pos);
        self.head = pos;
    }

    /// Writes `w` and a separator after the last word.
    pub fn append_word(&mut self, w: &[String]) {
        self.move_to(self.cells.len());
        for t in w.iter().map(String::as_str).chain([SEP]) {
            self.cells.push(t.to_string());
            self.head += 1;
            self.steps += 1;
        }
    }

    /// Erases the last word, leaving the head where it began.
    pub fn pop_last_word(&mut self) -> Option<Word> {
        if self.cells.is_empty() {
            return None;
        }
        self.move_to(self.cells.len());
        // step onto the separator and erase it
        self.cells.pop();
        self.head -= 1;
        self.steps += 1;
        let mut w = Vec::new();
        while let Some(t) = self.cells.last() {
            if t == SEP {
                break;
            }
            w.push(self.cells.pop().unwrap());
            self.head -= 1;
            self.steps += 1;
        }
        w.reverse();
        Some(w)
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn take_steps(&mut self) -> usize {
        std::mem::take(&mut self.steps)
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot { kind: DeviceKind::Tape, contents: self.cells.clone(), head: Some(self.head) }
    }
}

/// Push and pull at the top only.
#[derive(Clone, Debug, Default)]
pub struct Stack {
    items: Vec<String>,
    steps: usize,
}

impl Stack {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn push(&mut self, t: &str) {
        self.items.push(t.to_string());
        self.steps += 1;
    }

    pub fn pull(&mut self) -> Option<String> {
        let t = self.items.pop()?;
        self.steps += 1;
        Some(t)
    }

    fn top(&self) -> Option<&str> {
        self.items.last().map(String::as_str)
    }

    /// Pushes `w` symbol by symbol, then a separator.
    pub fn push_word(&mut self, w: &[String]) {
        for t in w {
            self.push(t);
        }
        self.push(SEP);
    }

    /// Pulls the separator and the word below it. The word comes off in
    /// reverse and is returned in its original order.
    pub fn pull_word(&mut self) -> Option<Word> {
        self.pull()?;
        let mut w = Vec::new();
        while self.top().is_some_and(|t| t != SEP) {
            w.push(self.pull().unwrap());
        }
        w.reverse();
        Some(w)
    }

    pub fn take_steps(&mut self) -> usize {
        std::mem::take(&mut self.steps)
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot { kind: DeviceKind::Stack, contents: self.items.clone(), head: None }
    }
}

/// Writes at one end, reads at the other.
#[derive(Clone, Debug, Default)]
pub struct Queue {
    items: VecDeque<String>,
    steps: usize,
}

impl Queue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn enqueue(&mut self, t: &str) {
        self.items.push_back(t.to_string());
        self.steps += 1;
    }

    pub fn dequeue(&mut self) -> Option<String> {
        let t = self.items.pop_front()?;
        self.steps += 1;
        Some(t)
    }

    pub fn enqueue_word(&mut self, w: &[String]) {
        for t in w {
            self.enqueue(t);
        }
        self.enqueue(SEP);
    }

    /// Reads symbols up to and including the next separator.
    pub fn dequeue_word(&mut self) -> Option<Word> {
        let mut w = Vec::new();
        loop {
            let t = self.dequeue()?;
            if t == SEP {
                return Some(w);
            }
            w.push(t);
        }
    }

    pub fn take_steps(&mut self) -> usize {
        std::mem::take(&mut self.steps)
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot { kind: DeviceKind::Queue, contents: self.items.iter().cloned().collect(), head: None }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::word;

    #[test]
    fn tape_pops_last_word() {
        let mut t = Tape::new();
        t.append_word(&word("01"));
        t.append_word(&word(""));
        t.append_word(&word("1"));
        assert_eq!(t.take_steps(), 6);
        assert_eq!(t.pop_last_word(), Some(word("1")));
        assert_eq!(t.take_steps(), 2);
        assert_eq!(t.pop_last_word(), Some(word("")));
        assert_eq!(t.pop_last_word(), Some(word("01")));
        assert!(t.is_empty());
        assert_eq!(t.pop_last_word(), None);
    }

    #[test]
    fn stack_keeps_word_order() {
        let mut s = Stack::new();
        s.push_word(&word("011"));
        s.push_word(&word("2"));
        assert_eq!(s.pull_word(), Some(word("2")));
        assert_eq!(s.pull_word(), Some(word("011")));
        assert_eq!(s.take_steps(), 2 * 6);
        assert_eq!(s.pull_word(), None);
    }

    #[test]
    fn queue_is_fifo() {
        let mut q = Queue::new();
        q.enqueue_word(&word("ab"));
        q.enqueue_word(&word(""));
        assert_eq!(q.dequeue_word(), Some(word("ab")));
        assert_eq!(q.dequeue_word(), Some(word("")));
        assert_eq!(q.dequeue_word(), None);
        assert_eq!(q.take_steps(), 8);
    }
}
