use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::One;

use disentangle::partitions::*;

/// B(n+1) = Σ_k C(n,k) B(k), computed without the Bell triangle.
fn bell_by_binomial_sum(max: usize) -> Vec<BigUint> {
    let mut bell = vec![BigUint::one()];
    for n in 0..max {
        let mut binom = BigUint::one();
        let mut next = BigUint::from(0u32);
        for (k, b) in bell.iter().enumerate() {
            next += &binom * b;
            binom = binom * (n - k) / (k + 1);
        }
        bell.push(next);
    }
    bell
}

#[test]
fn bell_triangle_matches_binomial_recurrence() {
    let reference = bell_by_binomial_sum(12);
    for (n, b) in reference.iter().enumerate() {
        assert_eq!(&bell_number(n), b, "n = {n}");
    }
}

#[test]
fn bell_values_from_brute_force() {
    // Frozen from brute_force_partitions, n = 0..=10.
    let expected: [u64; 11] = [1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975];
    for (n, &b) in expected.iter().enumerate() {
        assert_eq!(brute_force_partitions(n).unwrap().len() as u64, b);
        assert_eq!(bell_number(n), BigUint::from(b));
    }
}

#[test]
fn enumeration_equals_brute_force_as_sets() {
    for n in 2..=8 {
        let enumerated: Vec<PartitionTerm> = enumerate_terms(n).unwrap().terms().to_vec();
        let brute: BTreeSet<PartitionTerm> = brute_force_partitions(n)
            .unwrap()
            .into_iter()
            .filter(|blocks| blocks.len() >= 2)
            .map(|blocks| PartitionTerm::from_blocks(n, &blocks).unwrap())
            .collect();
        assert_eq!(enumerated.len(), brute.len());
        // BTreeSet iterates in lexicographic RGS order.
        assert!(enumerated.iter().eq(brute.iter()), "n = {n}");
    }
}

#[test]
fn enumeration_is_strictly_increasing_with_nonempty_blocks() {
    for n in 2..=9 {
        let form = enumerate_terms(n).unwrap();
        assert!(form.terms().windows(2).all(|w| w[0] < w[1]));
        for t in form.terms() {
            let blocks = t.blocks();
            assert!(blocks.len() >= 2);
            assert!(blocks.iter().all(|b| !b.is_empty()));
            let mut parties: Vec<usize> = blocks.concat();
            parties.sort_unstable();
            assert_eq!(parties, (0..n).collect::<Vec<_>>());
            let mins: Vec<usize> = blocks.iter().map(|b| b[0]).collect();
            assert!(mins.windows(2).all(|w| w[0] < w[1]));
        }
    }
}

#[test]
fn term_count_exceeds_two_pow_n_beyond_four() {
    for n in 5..=16 {
        assert!(term_count(n).unwrap() > BigUint::one() << n, "n = {n}");
    }
    assert!(term_count(4).unwrap() <= BigUint::from(16u32));
}

#[test]
fn growth_report_full_range() {
    let rows = growth_report(MAX_COUNT_PARTIES).unwrap();
    assert_eq!(rows.len(), 63);
    for r in &rows {
        assert_eq!(r.term_count, &r.bell - 1u32);
        assert_eq!(r.exceeds, r.term_count > r.two_pow_n);
        assert_eq!(r.exceeds, r.n >= 5);
    }
    assert_eq!(
        rows.last().unwrap().bell.to_string(),
        "172134143357358850934369963665272571125557575184049758045339873395"
    );
}

#[test]
fn streaming_iterator_counts_twelve_parties() {
    assert_eq!(TermIter::new(12).unwrap().count(), 4_213_596);
}
