//! Lazy subset-style construction followed by trimming and minimization.
//!
//! Every automaton produced by this crate goes through [`build`]: the caller
//! supplies an implicit deterministic machine over arbitrary state values and
//! the engine explores it on valid (support-monotone) words only. States are
//! split by the support of the letter that reached them (the initial state
//! gets the full support), letters outside that support are never read, dead
//! states are removed and Hopcroft partition refinement merges equivalent
//! states inside each support class. States are numbered breadth-first with
//! letters in increasing mask order, so equal relations give identical
//! automata.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use super::{Letter, SyncAutomaton};

pub(crate) struct Raw {
    pub arity: usize,
    pub finals: Vec<bool>,
    pub tags: Vec<u8>,
    /// `delta[q * stride + mask]`, `stride = 1 << arity`; slot 0 unused.
    pub delta: Vec<Option<usize>>,
}

pub(crate) fn build<S, F, G>(arity: usize, init: S, mut step: F, mut is_final: G) -> SyncAutomaton
where
    S: Clone + Eq + Hash,
    F: FnMut(&S, Letter) -> Option<S>,
    G: FnMut(&S) -> bool,
{
    let stride = 1usize << arity;
    let full = (stride - 1) as u8;
    let mut index: HashMap<(S, u8), usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut raw = Raw {
        arity,
        finals: Vec::new(),
        tags: Vec::new(),
        delta: Vec::new(),
    };

    let mut intern = |s: S, tag: u8, raw: &mut Raw, queue: &mut VecDeque<(S, u8, usize)>| {
        if let Some(&id) = index.get(&(s.clone(), tag)) {
            return id;
        }
        let id = raw.finals.len();
        raw.finals.push(false);
        raw.tags.push(tag);
        raw.delta.extend(std::iter::repeat_n(None, stride));
        index.insert((s.clone(), tag), id);
        queue.push_back((s, tag, id));
        id
    };

    intern(init, full, &mut raw, &mut queue);
    while let Some((s, tag, id)) = queue.pop_front() {
        raw.finals[id] = is_final(&s);
        for mask in 1..=full {
            if mask & !tag != 0 {
                continue;
            }
            if let Some(next) = step(&s, Letter(mask)) {
                let to = intern(next, mask, &mut raw, &mut queue);
                raw.delta[id * stride + mask as usize] = Some(to);
            }
        }
    }
    minimize(raw)
}

/// Removes states that cannot reach a final state (the initial state is
/// always kept).
fn trim(raw: &mut Raw) {
    let stride = 1usize << raw.arity;
    let n = raw.finals.len();
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    for q in 0..n {
        for m in 1..stride {
            if let Some(to) = raw.delta[q * stride + m] {
                preds[to].push(q);
            }
        }
    }
    let mut live = raw.finals.clone();
    let mut stack: Vec<usize> = (0..n).filter(|&q| live[q]).collect();
    while let Some(q) = stack.pop() {
        for &p in &preds[q] {
            if !live[p] {
                live[p] = true;
                stack.push(p);
            }
        }
    }
    for slot in raw.delta.iter_mut() {
        if let Some(to) = *slot {
            if !live[to] {
                *slot = None;
            }
        }
    }
    for q in 0..n {
        if !live[q] && q != 0 {
            // unreachable now; minimize drops it when renumbering
            raw.finals[q] = false;
        }
    }
}

fn minimize(mut raw: Raw) -> SyncAutomaton {
    trim(&mut raw);
    let stride = 1usize << raw.arity;
    let n = raw.finals.len();
    let sink = n;
    let total = n + 1;
    let target = |q: usize, m: usize| -> usize {
        if q == sink {
            sink
        } else {
            raw.delta[q * stride + m].unwrap_or(sink)
        }
    };

    // inverse transitions per letter
    let mut inv: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); total]; stride];
    for q in 0..total {
        for (m, inv_m) in inv.iter_mut().enumerate().skip(1) {
            inv_m[target(q, m)].push(q);
        }
    }

    // initial partition: (final, tag) for real states, the sink alone
    let mut block_of = vec![0usize; total];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    {
        let mut key_block: HashMap<(bool, u8), usize> = HashMap::new();
        for q in 0..n {
            let key = (raw.finals[q], raw.tags[q]);
            let b = *key_block.entry(key).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[b].push(q);
            block_of[q] = b;
        }
        blocks.push(vec![sink]);
        block_of[sink] = blocks.len() - 1;
    }

    let mut in_work = vec![true; blocks.len()];
    let mut work: Vec<usize> = (0..blocks.len()).collect();
    let mut mark = vec![false; total];
    while let Some(splitter) = work.pop() {
        in_work[splitter] = false;
        let members = blocks[splitter].clone();
        for inv_m in inv.iter().skip(1) {
            let mut touched: Vec<usize> = Vec::new();
            let mut hit: HashMap<usize, Vec<usize>> = HashMap::new();
            for &s in &members {
                for &p in &inv_m[s] {
                    if !mark[p] {
                        mark[p] = true;
                        let b = block_of[p];
                        hit.entry(b).or_insert_with(|| {
                            touched.push(b);
                            Vec::new()
                        });
                        hit.get_mut(&b).unwrap().push(p);
                    }
                }
            }
            for &b in &touched {
                let inside = &hit[&b];
                if inside.len() == blocks[b].len() {
                    for &p in inside {
                        mark[p] = false;
                    }
                    continue;
                }
                let outside: Vec<usize> = blocks[b].iter().copied().filter(|&q| !mark[q]).collect();
                for &p in inside {
                    mark[p] = false;
                }
                let new_id = blocks.len();
                let (keep, moved) = (outside, inside.clone());
                for &q in &moved {
                    block_of[q] = new_id;
                }
                blocks[b] = keep;
                blocks.push(moved);
                in_work.push(false);
                if in_work[b] {
                    in_work[new_id] = true;
                    work.push(new_id);
                } else {
                    let smaller = if blocks[b].len() <= blocks[new_id].len() {
                        b
                    } else {
                        new_id
                    };
                    in_work[smaller] = true;
                    work.push(smaller);
                }
            }
        }
    }

    // breadth-first renumbering from the initial block, skipping the sink
    let sink_block = block_of[sink];
    let mut number: HashMap<usize, usize> = HashMap::new();
    let mut order: Vec<usize> = Vec::new();
    let mut queue = VecDeque::new();
    number.insert(block_of[0], 0);
    order.push(block_of[0]);
    queue.push_back(block_of[0]);
    while let Some(b) = queue.pop_front() {
        let rep = blocks[b][0];
        for m in 1..stride {
            let tb = block_of[target(rep, m)];
            if tb != sink_block && !number.contains_key(&tb) {
                number.insert(tb, order.len());
                order.push(tb);
                queue.push_back(tb);
            }
        }
    }

    let count = order.len();
    let mut finals = vec![false; count];
    let mut delta = vec![None; count * stride];
    for (i, &b) in order.iter().enumerate() {
        let rep = blocks[b][0];
        finals[i] = rep != sink && raw.finals[rep];
        for m in 1..stride {
            let tb = block_of[target(rep, m)];
            if tb != sink_block {
                delta[i * stride + m] = Some(number[&tb]);
            }
        }
    }
    SyncAutomaton {
        arity: raw.arity,
        initial: 0,
        finals,
        delta,
    }
}
