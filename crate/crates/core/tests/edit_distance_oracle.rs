//! Levenshtein DP checked against breadth-first search over edit sequences.

use std::collections::{HashMap, VecDeque};

use tashih_core::{edit_distance, similarity};

/// Shortest number of single-character insertions, deletions and
/// substitutions turning `from` into each string reachable within `max_depth`
/// edits, found by plain breadth-first search.
fn edit_ball(from: &[char], alphabet: &[char], max_depth: usize) -> HashMap<Vec<char>, usize> {
    let mut dist = HashMap::from([(from.to_vec(), 0)]);
    let mut queue = VecDeque::from([from.to_vec()]);
    while let Some(s) = queue.pop_front() {
        let d = dist[&s];
        if d == max_depth {
            continue;
        }
        let mut next = Vec::new();
        for i in 0..s.len() {
            let mut t = s.clone();
            t.remove(i);
            next.push(t);
            for &c in alphabet {
                if c != s[i] {
                    let mut t = s.clone();
                    t[i] = c;
                    next.push(t);
                }
            }
        }
        for i in 0..=s.len() {
            for &c in alphabet {
                let mut t = s.clone();
                t.insert(i, c);
                next.push(t);
            }
        }
        for t in next {
            dist.entry(t.clone()).or_insert_with(|| {
                queue.push_back(t);
                d + 1
            });
        }
    }
    dist
}

fn all_strings(alphabet: &[char], max_len: usize) -> Vec<Vec<char>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|s: &Vec<char>| {
                alphabet.iter().map(move |&c| {
                    let mut t = s.clone();
                    t.push(c);
                    t
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

#[test]
fn derived_example_kataba_kitab() {
    let from: Vec<char> = "كتب".chars().collect();
    let ball = edit_ball(&from, &['ك', 'ت', 'ا', 'ب'], 2);
    let target: Vec<char> = "كتاب".chars().collect();
    assert_eq!(ball[&target], 1);
    assert_eq!(edit_distance("كتب", "كتاب"), 1);
    assert_eq!(similarity::<f64>("كتب", "كتاب").value(), 0.75);
}

#[test]
fn dp_matches_bfs_on_all_short_strings() {
    let alphabet = ['a', 'b', 'c'];
    let strings = all_strings(&alphabet, 4);
    assert_eq!(strings.len(), 121);
    for a in &strings {
        let ball = edit_ball(a, &alphabet, 4);
        let a_str: String = a.iter().collect();
        for b in &strings {
            let b_str: String = b.iter().collect();
            assert_eq!(edit_distance(&a_str, &b_str), ball[b], "{a_str:?} -> {b_str:?}");
        }
    }
}
