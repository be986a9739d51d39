//! Braid closures as PD diagrams.
//!
//! A word is a sequence of nonzero letters: `+k` is the Artin generator
//! crossing strands k and k+1 with the strand entering on the right passing
//! over (a positive crossing), `-k` its inverse. The closure of a word in
//! `strands` strands is returned as a validated diagram; strand positions
//! untouched by any letter close up into free loops.

use thiserror::Error;

use crate::diagram::{EdgeId, LinkDiagram, PdError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BraidError {
    #[error("letter {0} out of range for {1} strands")]
    LetterOutOfRange(i32, usize),
    #[error(transparent)]
    Pd(#[from] PdError),
}

pub fn braid_closure(strands: usize, word: &[i32]) -> Result<LinkDiagram, BraidError> {
    assert!(strands >= 1);
    let mut next_id: EdgeId = 1;
    let mut fresh = || {
        let id = next_id;
        next_id += 1;
        id
    };

    let init: Vec<EdgeId> = (0..strands).map(|_| fresh()).collect();
    let mut cur = init.clone();
    let mut raw: Vec<[EdgeId; 4]> = Vec::with_capacity(word.len());

    for &letter in word {
        let k = letter.unsigned_abs() as usize;
        if letter == 0 || k >= strands {
            return Err(BraidError::LetterOutOfRange(letter, strands));
        }
        let p = k - 1;
        let (a, b) = (cur[p], cur[p + 1]);
        let (c, d) = (fresh(), fresh());
        if letter > 0 {
            raw.push([a, b, d, c]);
        } else {
            raw.push([b, d, c, a]);
        }
        cur[p] = c;
        cur[p + 1] = d;
    }

    // close up: identify each strand's last edge with its first
    let mut loops = 0;
    for p in 0..strands {
        if cur[p] == init[p] {
            loops += 1;
            continue;
        }
        for x in raw.iter_mut() {
            for e in x.iter_mut() {
                if *e == cur[p] {
                    *e = init[p];
                }
            }
        }
    }

    Ok(LinkDiagram::from_parts(raw, loops, None)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_word_gives_unlink() {
        let d = braid_closure(3, &[]).unwrap();
        assert_eq!(d.num_crossings(), 0);
        assert_eq!(d.num_components(), 3);
    }

    #[test]
    fn writhe_is_letter_sum() {
        for (strands, word) in [
            (2, vec![1, 1, 1]),
            (3, vec![1, -2, 1, -2]),
            (3, vec![1, 2, 1]),
            (2, vec![1, -1]),
        ] {
            let d = braid_closure(strands, &word).unwrap();
            let expect: i64 = word.iter().map(|&l| l.signum() as i64).sum();
            assert_eq!(d.writhe(), expect, "word {word:?}");
        }
    }

    #[test]
    fn components_follow_permutation_cycles() {
        // sigma_1^2 in B2: both strands close to their own position
        assert_eq!(braid_closure(2, &[1, 1]).unwrap().num_components(), 2);
        // sigma_1^3: trefoil
        assert_eq!(braid_closure(2, &[1, 1, 1]).unwrap().num_components(), 1);
        // (sigma_1 sigma_2^-1)^2: figure-eight
        let f8 = braid_closure(3, &[1, -2, 1, -2]).unwrap();
        assert_eq!(f8.num_components(), 1);
        assert_eq!(f8.writhe(), 0);
        // untouched strand becomes a free loop
        let d = braid_closure(3, &[1]).unwrap();
        assert_eq!(d.num_free_loops(), 1);
        assert_eq!(d.num_components(), 2);
    }

    #[test]
    fn letter_out_of_range() {
        assert_eq!(
            braid_closure(2, &[2]),
            Err(BraidError::LetterOutOfRange(2, 2))
        );
        assert_eq!(
            braid_closure(2, &[0]),
            Err(BraidError::LetterOutOfRange(0, 2))
        );
    }
}
