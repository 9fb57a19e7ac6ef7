//! Seeded generation of test complexes.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cubical::{CubicalComplex, LabelSet};
use crate::euclid::{ElementaryCube, EuclideanComplex, Point};

/// A random face-closed sub-complex of the standard cube: every cell is
/// kept as a generator with probability `density`, then the face closure is
/// taken. Deterministic in the seed.
pub fn random_subcomplex(labels: &LabelSet, seed: u64, density: f64) -> CubicalComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let full = CubicalComplex::full(labels.clone());
    let generators: Vec<_> = full
        .cubes()
        .filter(|_| rng.gen_bool(density))
        .cloned()
        .collect();
    CubicalComplex::from_generators(labels.clone(), generators).expect("closure of valid cubes")
}

/// A random Euclidean complex in the box: every cell is independently
/// removed (together with everything containing it) with probability
/// `removal`. Deterministic in the seed.
pub fn random_euclidean(k: &Point, seed: u64, removal: f64) -> EuclideanComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let full = EuclideanComplex::full_box(k.clone()).expect("valid corner");
    let removed: Vec<ElementaryCube> = full
        .cubes()
        .filter(|_| rng.gen_bool(removal))
        .cloned()
        .collect();
    full.remove_cells_upward(&removed)
}

/// A random complex between the box and its codimension-one skeleton: only
/// top-dimensional cells are removed, each with probability `removal`.
pub fn random_sandwich(k: &Point, seed: u64, removal: f64) -> EuclideanComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = k.len();
    let full = EuclideanComplex::full_box(k.clone()).expect("valid corner");
    let removed: Vec<ElementaryCube> = full
        .cubes()
        .filter(|c| c.dim() == n)
        .filter(|_| rng.gen_bool(removal))
        .cloned()
        .collect();
    full.remove_cells_upward(&removed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_closed() {
        let labels = LabelSet::numeric(3);
        let a = random_subcomplex(&labels, 7, 0.5);
        let b = random_subcomplex(&labels, 7, 0.5);
        assert_eq!(a, b);
        assert!(a.validate());
        let c = random_subcomplex(&labels, 8, 0.5);
        assert_ne!(a, c);
    }

    #[test]
    fn sandwich_keeps_lower_skeleton() {
        let k = vec![2, 2];
        let complex = random_sandwich(&k, 3, 0.7);
        assert!(complex.contains_box_skeleton().unwrap());
        assert!(complex.validate());
    }

    #[test]
    fn euclidean_random_is_closed() {
        for seed in 0..5 {
            let complex = random_euclidean(&vec![2, 2], seed, 0.2);
            assert!(complex.validate());
        }
    }
}
