use pairsieve::search::{existence_table, PairParams, SearchOptions};

#[test]
fn existence_table_is_consistent() {
    let cells = [(5u64, 8u64), (7, 8), (7, 7), (13, 7), (5, 7)];
    let rows = existence_table(&cells, 3, PairParams::STANDARD, &SearchOptions::default(), 0).unwrap();
    for r in &rows {
        assert!(r.violation.is_none(), "({}, {}): {:?}", r.q, r.n, r.violation);
    }
    let q5n7 = rows.iter().find(|r| (r.q, r.n) == (5, 7)).unwrap();
    assert!(!q5n7.condition);
    assert!(q5n7.results.iter().all(|f| f.found != Some(true)));
    for r in rows.iter().filter(|r| r.condition) {
        assert!(r.results.iter().all(|f| f.found == Some(true)), "({}, {})", r.q, r.n);
    }
}

#[test]
fn existence_holds_for_every_seed() {
    // seeds change the generator, not the answer
    for seed in [0u64, 1, 7] {
        let rows = existence_table(&[(7, 7)], 1, PairParams::STANDARD, &SearchOptions::default(), seed).unwrap();
        assert_eq!(rows[0].results[0].found, Some(true));
    }
}
