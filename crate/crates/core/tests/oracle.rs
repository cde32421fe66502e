mod common;

use common::*;

#[test]
fn oracle_self_check() {
    assert_eq!(invariant_factors(&vec![vec![2, 4], vec![6, 8]], 2), vec![2, 4]);
    assert_eq!(invariant_factors(&vec![vec![2, 0], vec![0, 3]], 2), vec![1, 6]);
    assert_eq!(rank_q(&vec![vec![1, 2], vec![2, 4]], 2), 1);
    assert_eq!(rank_mod(&vec![vec![2, 0], vec![0, 1]], 2, 2), 1);
}
