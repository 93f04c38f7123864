//! Breadth-first orbit partition under the shear and rotation generators.

use exactnum::Letter;
use origami::Origami;
use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

/// Generators applied during the orbit walk, in a fixed order so that the
/// discovery order (and hence every witness word) is deterministic.
const GENERATORS: [Letter; 2] = [Letter::S, Letter::R];

/// Partition a set of canonical reduced pairs into orbits of the group
/// generated by the shear `S` and the quarter turn `R`.
///
/// The input is expected to be closed under the action (as `ST(d, n)` is);
/// because both generators permute any finite invariant set, walking the
/// forward images alone already produces full group orbits.  Orbits are
/// returned sorted by their least member, with each orbit sorted
/// ascendingly, so the output is independent of scheduling.
pub fn orbit_partition(elements: &BTreeSet<Origami>) -> Vec<Vec<Origami>> {
    orbit_partition_with_words(elements)
        .into_iter()
        .map(|(orbit, _)| orbit)
        .collect()
}

/// As [`orbit_partition`], additionally returning, for each orbit, a
/// generator word per member that maps the least member onto it.
pub(crate) fn orbit_partition_with_words(
    elements: &BTreeSet<Origami>,
) -> Vec<(Vec<Origami>, HashMap<Origami, String>)> {
    debug_assert!(
        elements.iter().all(|o| &o.canonical() == o),
        "elements must be canonical forms"
    );
    let mut seen: HashSet<Origami> = HashSet::with_capacity(elements.len());
    let mut orbits = Vec::new();
    for seed in elements {
        if seen.contains(seed) {
            continue;
        }
        let words = explore(seed, elements);
        for o in words.keys() {
            seen.insert(o.clone());
        }
        let mut orbit: Vec<Origami> = words.keys().cloned().collect();
        orbit.sort();
        orbits.push((orbit, words));
    }
    orbits
}

/// Breadth-first closure of one seed under the generators, recording the
/// first (shortest, generator-ordered) word reaching each member.
fn explore(seed: &Origami, elements: &BTreeSet<Origami>) -> HashMap<Origami, String> {
    let mut words: HashMap<Origami, String> = HashMap::new();
    words.insert(seed.clone(), String::new());
    let mut queue: VecDeque<Origami> = VecDeque::new();
    queue.push_back(seed.clone());
    while let Some(cur) = queue.pop_front() {
        let cur_word = words[&cur].clone();
        for letter in GENERATORS {
            let next = cur.act_letter(letter).canonical();
            if words.contains_key(&next) {
                continue;
            }
            debug_assert!(
                elements.contains(&next),
                "the element set is not closed under the action"
            );
            // `act` composes like a matrix product (rightmost letter acts
            // first), so the step letter goes on the left.
            let mut word = String::with_capacity(cur_word.len() + 1);
            word.push(letter.as_char());
            word.push_str(&cur_word);
            words.insert(next.clone(), word);
            queue.push_back(next);
        }
    }
    words
}

#[cfg(test)]
mod tests {
    use super::*;
    use cylinder::enumerate;
    use exactnum::SL2Word;

    #[test]
    fn two_squares_torsion_two_is_a_single_orbit_of_six() {
        let elements = enumerate(2, 2).unwrap();
        assert_eq!(elements.len(), 6);
        let orbits = orbit_partition(&elements);
        assert_eq!(orbits.len(), 1);
        assert_eq!(orbits[0].len(), 6);
    }

    #[test]
    fn two_squares_torsion_five_splits_twelve_and_thirty_six() {
        let elements = enumerate(2, 5).unwrap();
        assert_eq!(elements.len(), 48);
        let orbits = orbit_partition(&elements);
        let sizes: Vec<usize> = orbits.iter().map(Vec::len).collect();
        let mut sorted = sizes.clone();
        sorted.sort();
        assert_eq!(sorted, [12, 36]);
    }

    #[test]
    fn degree_five_torsion_one_is_a_single_orbit() {
        let elements = enumerate(5, 1).unwrap();
        assert_eq!(elements.len(), 24);
        assert_eq!(orbit_partition(&elements).len(), 1);
    }

    #[test]
    fn partition_is_reproducible_and_word_witnesses_act_correctly() {
        let elements = enumerate(3, 3).unwrap();
        let first = orbit_partition(&elements);
        let second = orbit_partition(&elements);
        assert_eq!(first, second);
        for (orbit, words) in orbit_partition_with_words(&elements) {
            let rep = &orbit[0];
            assert_eq!(words[rep], "");
            for (target, word) in &words {
                let w = SL2Word::parse(word).unwrap();
                assert_eq!(&rep.act(&w).canonical(), target);
            }
        }
    }
}
