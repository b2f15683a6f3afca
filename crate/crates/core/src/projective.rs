//! Enumeration of projective coefficient vectors over a finite field.
//!
//! Each line through the origin of `GF(q)^k` is visited once, through its
//! representative whose first nonzero entry is 1. Lines are ordered by the
//! position of that leading 1 (earliest first), then by the remaining
//! entries lexicographically in the canonical element order `0, 1, …, q−1`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::Field;

/// Number of projective points `(q^k − 1)/(q − 1)`, or `None` on overflow.
pub fn projective_count(q: u64, k: usize) -> Option<u64> {
    let mut total: u64 = 0;
    let mut power: u64 = 1;
    for _ in 0..k {
        total = total.checked_add(power)?;
        power = power.checked_mul(q)?;
    }
    Some(total)
}

/// `q^k` if it fits under `budget`.
pub fn within_budget(q: u64, k: usize, budget: u64) -> bool {
    let mut acc: u64 = 1;
    for _ in 0..k {
        match acc.checked_mul(q) {
            Some(v) if v <= budget => acc = v,
            _ => return false,
        }
    }
    true
}

/// Iterator over normalized representatives of the lines in `F^k`.
pub struct ProjectiveSweep<F: Field> {
    field: F,
    q: u64,
    k: usize,
    lead: usize,
    tail: Vec<u64>,
    done: bool,
}

impl<F: Field> ProjectiveSweep<F> {
    pub fn new(field: &F, k: usize) -> Result<Self> {
        let q = field
            .order()
            .ok_or_else(|| Error::UnsupportedSize("projective sweep needs a finite field".into()))?;
        Ok(ProjectiveSweep {
            field: field.clone(),
            q,
            k,
            lead: 0,
            tail: vec![0; k.saturating_sub(1)],
            done: k == 0,
        })
    }

    fn advance(&mut self) {
        let len = self.k - self.lead - 1;
        for i in (0..len).rev() {
            self.tail[i] += 1;
            if self.tail[i] < self.q {
                return;
            }
            self.tail[i] = 0;
        }
        self.lead += 1;
        if self.lead == self.k {
            self.done = true;
        }
    }
}

impl<F: Field> Iterator for ProjectiveSweep<F> {
    type Item = Vec<F::Elem>;

    fn next(&mut self) -> Option<Vec<F::Elem>> {
        if self.done {
            return None;
        }
        let f = &self.field;
        let mut v = vec![f.zero(); self.k];
        v[self.lead] = f.one();
        let len = self.k - self.lead - 1;
        for i in 0..len {
            v[self.lead + 1 + i] = f.element(self.tail[i]);
        }
        self.advance();
        Some(v)
    }
}

/// A random coefficient vector; rational entries are integers in `[−bound, bound]`.
pub fn random_vector<F: Field, R: Rng + ?Sized>(
    field: &F,
    k: usize,
    rng: &mut R,
    bound: u64,
) -> Vec<F::Elem> {
    (0..k).map(|_| field.sample(rng, bound)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn sweep_visits_each_line_once() {
        let f = PrimeField::new(3).unwrap();
        let all: Vec<Vec<u32>> = ProjectiveSweep::new(&f, 3).unwrap().collect();
        assert_eq!(all.len() as u64, projective_count(3, 3).unwrap());
        assert_eq!(all.len(), 13);
        assert_eq!(all[0], vec![1, 0, 0]);
        assert_eq!(all[12], vec![0, 0, 1]);
        for v in &all {
            assert_eq!(*v.iter().find(|&&x| x != 0).unwrap(), 1);
        }
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 13);
    }

    #[test]
    fn gf2_pair_order() {
        let f = PrimeField::new(2).unwrap();
        let all: Vec<Vec<u32>> = ProjectiveSweep::new(&f, 2).unwrap().collect();
        assert_eq!(all, vec![vec![1, 0], vec![1, 1], vec![0, 1]]);
    }

    #[test]
    fn budget() {
        assert!(within_budget(2, 20, 1 << 20));
        assert!(!within_budget(2, 21, 1 << 20));
        assert!(within_budget(101, 0, 1));
    }
}
